//! Convex distance functions induced by a polygonal shape.
//!
//! With `C` translated so its center sits at the origin, the distance from
//! `p1` to `p2` is the factor by which `C` placed at `p1` must be scaled for
//! its boundary to reach `p2`. For a polygon this is the gauge
//! `max_e (n_e . v) / h_e` of `v = p2 - p1`, where `n_e` is the outward normal
//! of edge `e` and `h_e` its offset from the center. Everything stays rational.

use serde::{Deserialize, Serialize};

use crate::geometry::predicates::{on_segment, segment_intersection, SegmentIntersection};
use crate::geometry::{ConvexPolygon, Point, Scalar};
use crate::instances::{BaseShape, InstanceError, ShapeKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BaseShape", into = "BaseShape")]
pub struct Gauge {
    shape: ConvexPolygon,
    center: Point,
    /// `(n_e, h_e)` per edge.
    facets: Vec<(Point, Scalar)>,
}

impl TryFrom<BaseShape> for Gauge {
    type Error = InstanceError;
    fn try_from(b: BaseShape) -> Result<Self, InstanceError> {
        Gauge::new(b.polygon, b.center)
    }
}

impl From<Gauge> for BaseShape {
    fn from(g: Gauge) -> BaseShape {
        BaseShape {
            polygon: g.shape,
            center: g.center,
        }
    }
}

impl Gauge {
    pub fn new(shape: ConvexPolygon, center: Point) -> Result<Self, InstanceError> {
        let base = BaseShape::new(shape, center)?;
        let facets = base
            .polygon
            .edges()
            .map(|(a, b)| {
                let n = Point::new(&b.y - &a.y, &a.x - &b.x);
                let h = n.dot(&a.sub(&base.center));
                (n, h)
            })
            .collect();
        Ok(Gauge {
            shape: base.polygon,
            center: base.center,
            facets,
        })
    }

    /// Built-in shapes: `square`, `triangle` (not centrally symmetric),
    /// `hexagon`, `pentagon` (irregular) and `regular:K`.
    pub fn preset(name: &str) -> Option<Gauge> {
        let poly = |pts: &[(i64, i64)]| ConvexPolygon::new(pts.iter().map(|&(x, y)| Point::int(x, y)).collect()).ok();
        let from_kind = |k: ShapeKind| k.base_shape().ok().and_then(|b| Gauge::new(b.polygon, b.center).ok());
        let origin = Point::int(0, 0);
        match name {
            "square" => Gauge::new(poly(&[(-1, -1), (1, -1), (1, 1), (-1, 1)])?, origin).ok(),
            "triangle" => Gauge::new(poly(&[(-1, -1), (3, -1), (-1, 3)])?, origin).ok(),
            "hexagon" => from_kind(ShapeKind::Regular { k: 6 }),
            "pentagon" => Gauge::new(poly(&[(-2, -1), (2, -2), (3, 1), (0, 3), (-2, 2)])?, origin).ok(),
            other => {
                let k = other.strip_prefix("regular:")?.parse().ok()?;
                from_kind(ShapeKind::Regular { k })
            }
        }
    }

    pub fn shape(&self) -> &ConvexPolygon {
        &self.shape
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// Gauge of the vector `v`.
    pub fn norm(&self, v: &Point) -> Scalar {
        self.facets
            .iter()
            .map(|(n, h)| n.dot(v) / h)
            .fold(Scalar::zero(), Scalar::max_of)
    }

    /// The copy of `C` centered at `p` scaled by `factor`.
    pub fn placed(&self, p: &Point, factor: &Scalar) -> ConvexPolygon {
        self.shape.homothety(&self.center, p, factor)
    }
}

/// Scale factor for `C` at `p1` to reach `p2`; not symmetric in general.
pub fn delta(g: &Gauge, p1: &Point, p2: &Point) -> Scalar {
    g.norm(&p2.sub(p1))
}

/// `min_{q in poly} delta(p, q)` together with a minimiser.
///
/// Outside `poly` the minimum sits on the boundary where `delta(p, .)` is
/// linear between breakpoints, so it is attained at a vertex of `poly` or
/// where an edge of `poly` meets a ray from `p` toward a vertex of `C`.
pub fn dist_to_convex_with_witness(g: &Gauge, p: &Point, poly: &ConvexPolygon) -> (Scalar, Point) {
    if poly.covers_point(p) {
        return (Scalar::zero(), p.clone());
    }
    let mut candidates: Vec<Point> = poly.vertices().to_vec();
    let (x0, y0, x1, y1) = poly.bbox();
    for w in g.shape.vertices() {
        let dir = w.sub(&g.center);
        // Extend the ray far enough to leave the bounding box of poly.
        let reach = [&x0 - &p.x, &x1 - &p.x, &y0 - &p.y, &y1 - &p.y]
            .into_iter()
            .map(|d| d.abs())
            .fold(Scalar::zero(), |a, b| a + b);
        let len = dir.x.abs() + dir.y.abs();
        let far = p.add(&dir.scale(&(&(reach + Scalar::one()) / &len)));
        for (a, b) in poly.edges() {
            match segment_intersection(p, &far, a, b) {
                SegmentIntersection::Point(x) => candidates.push(x),
                SegmentIntersection::Overlap(x, y) => {
                    candidates.push(x);
                    candidates.push(y);
                }
                SegmentIntersection::None => {}
            }
        }
    }
    candidates
        .into_iter()
        .map(|q| (delta(g, p, &q), q))
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("a polygon has vertices")
}

pub fn dist_to_convex(g: &Gauge, p: &Point, poly: &ConvexPolygon) -> Scalar {
    dist_to_convex_with_witness(g, p, poly).0
}

/// `delta(p1, p3) == delta(p1, p2) + delta(p2, p3)`, or `None` when `p2` is
/// not on the segment `p1 p3`.
pub fn check_segment_additivity(g: &Gauge, p1: &Point, p2: &Point, p3: &Point) -> Option<bool> {
    if !on_segment(p1, p3, p2) {
        return None;
    }
    Some(delta(g, p1, p3) == delta(g, p1, p2) + delta(g, p2, p3))
}

pub fn check_triangle_inequality(g: &Gauge, p1: &Point, p2: &Point, p3: &Point) -> bool {
    delta(g, p1, p3) <= delta(g, p1, p2) + delta(g, p2, p3)
}

/// At `d = dist_to_convex(p, poly) > 0`, `C` placed at `p` and scaled by `d`
/// touches `poly`, and scaled by `below < d` it misses `poly` entirely.
pub fn check_scaling_consistency(g: &Gauge, p: &Point, poly: &ConvexPolygon, below: &Scalar) -> Option<bool> {
    let d = dist_to_convex(g, p, poly);
    if !d.is_positive() || !below.is_positive() || below >= &d {
        return None;
    }
    let at = g.placed(p, &d);
    let under = g.placed(p, below);
    Some(at.touches(poly) && !at.interiors_intersect(poly) && !under.touches(poly))
}
