use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::predicates::{cross3, orientation, Orientation};
use super::{sign, GeometryError, Point, Scalar};

/// The closed half-plane `{(x, y) : a*x + b*y <= c}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

impl HalfPlane {
    pub fn new(a: Scalar, b: Scalar, c: Scalar) -> Result<Self, GeometryError> {
        if a.is_zero() && b.is_zero() {
            return Err(GeometryError::InvalidHalfPlane);
        }
        Ok(HalfPlane { a, b, c })
    }

    /// Closed half-plane to the left of the directed line `p -> q`.
    pub fn left_of(p: &Point, q: &Point) -> Result<Self, GeometryError> {
        let a = &q.y - &p.y;
        let b = &p.x - &q.x;
        let c = &a * &p.x + &b * &p.y;
        HalfPlane::new(a, b, c)
    }

    /// The complementary closed half-plane `{a*x + b*y >= c}`.
    pub fn complement(&self) -> HalfPlane {
        HalfPlane {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
        }
    }

    /// `a*x + b*y - c`; nonpositive inside.
    #[inline]
    pub fn eval(&self, p: &Point) -> Scalar {
        &self.a * &p.x + &self.b * &p.y - &self.c
    }

    pub fn contains(&self, p: &Point) -> bool {
        !self.eval(p).is_positive()
    }
}

/// Where a point sits relative to a closed polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

/// Strictly convex polygon with positive area, vertices counterclockwise.
///
/// Construction removes duplicate and collinear vertices and rotates the list
/// so the lexicographically smallest vertex comes first; two polygons that
/// describe the same point set therefore compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl std::fmt::Debug for ConvexPolygon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.vertices.iter()).finish()
    }
}

impl TryFrom<Vec<Point>> for ConvexPolygon {
    type Error = GeometryError;
    fn try_from(v: Vec<Point>) -> Result<Self, Self::Error> {
        ConvexPolygon::new(v)
    }
}

impl From<ConvexPolygon> for Vec<Point> {
    fn from(p: ConvexPolygon) -> Self {
        p.vertices
    }
}

fn dedup_cyclic(pts: &mut Vec<Point>) {
    pts.dedup();
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
}

/// Drops vertices lying strictly between their neighbours on a straight line.
/// Returns false when a vertex reverses direction (a zero-width spike).
fn drop_collinear(pts: &mut Vec<Point>) -> bool {
    let mut changed = true;
    while changed && pts.len() >= 3 {
        changed = false;
        let n = pts.len();
        for i in 0..n {
            let prev = &pts[(i + n - 1) % n];
            let cur = &pts[i];
            let next = &pts[(i + 1) % n];
            if orientation(prev, cur, next) == Orientation::Collinear {
                if cur.sub(prev).dot(&next.sub(cur)).is_negative() {
                    return false;
                }
                pts.remove(i);
                changed = true;
                break;
            }
        }
    }
    true
}

fn signed_area2(pts: &[Point]) -> Scalar {
    let n = pts.len();
    let mut acc = Scalar::zero();
    for i in 0..n {
        acc += &pts[i].cross(&pts[(i + 1) % n]);
    }
    acc
}

fn rotate_canonical(pts: &mut [Point]) {
    if let Some((idx, _)) = pts.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)) {
        pts.rotate_left(idx);
    }
}

impl ConvexPolygon {
    /// Validates and normalizes a vertex list given in either orientation.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let mut pts = vertices;
        dedup_cyclic(&mut pts);
        if pts.len() < 3 {
            return Err(GeometryError::TooFewVertices);
        }
        match sign(&signed_area2(&pts)) {
            Ordering::Equal => return Err(GeometryError::ZeroArea),
            Ordering::Less => pts.reverse(),
            Ordering::Greater => {}
        }
        if !drop_collinear(&mut pts) {
            return Err(GeometryError::NotConvex);
        }
        if pts.len() < 3 {
            return Err(GeometryError::ZeroArea);
        }
        // Every vertex must lie weakly left of every edge; together with a
        // positive signed area this rules out self-intersecting stars.
        let n = pts.len();
        for i in 0..n {
            let (p, q) = (&pts[i], &pts[(i + 1) % n]);
            for (k, v) in pts.iter().enumerate() {
                if k == i || k == (i + 1) % n {
                    continue;
                }
                if orientation(p, q, v) != Orientation::Left {
                    return Err(GeometryError::NotConvex);
                }
            }
        }
        rotate_canonical(&mut pts);
        Ok(ConvexPolygon { vertices: pts })
    }

    /// Builds from points known to trace a convex polygon counterclockwise,
    /// possibly with duplicates or collinear runs. Returns `None` when the
    /// result has no area.
    pub(crate) fn from_convex_ccw(mut pts: Vec<Point>) -> Option<Self> {
        dedup_cyclic(&mut pts);
        if pts.len() < 3 {
            return None;
        }
        drop_collinear(&mut pts);
        if pts.len() < 3 {
            return None;
        }
        debug_assert!(signed_area2(&pts).is_positive());
        rotate_canonical(&mut pts);
        Some(ConvexPolygon { vertices: pts })
    }

    /// Axis-parallel rectangle `[x0, x1] x [y0, y1]`.
    pub fn rect(x0: Scalar, y0: Scalar, x1: Scalar, y1: Scalar) -> Result<Self, GeometryError> {
        ConvexPolygon::new(vec![
            Point::new(x0.clone(), y0.clone()),
            Point::new(x1.clone(), y0),
            Point::new(x1, y1.clone()),
            Point::new(x0, y1),
        ])
    }

    /// Integer-cornered rectangle, for tests and examples.
    pub fn rect_i(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        ConvexPolygon::rect(x0.into(), y0.into(), x1.into(), y1.into()).expect("valid rectangle")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges `(v_i, v_{i+1})`, counterclockwise.
    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// Supporting half-planes, one per edge, whose intersection is the polygon.
    pub fn halfplanes(&self) -> Vec<HalfPlane> {
        self.edges()
            .map(|(p, q)| HalfPlane::left_of(p, q).expect("distinct vertices"))
            .collect()
    }

    pub fn area(&self) -> Scalar {
        signed_area2(&self.vertices) * Scalar::ratio(1, 2)
    }

    /// Average of the vertices; strictly interior for a valid polygon.
    pub fn vertex_centroid(&self) -> Point {
        let n = Scalar::from_int(self.vertices.len() as i64);
        let mut sx = Scalar::zero();
        let mut sy = Scalar::zero();
        for v in &self.vertices {
            sx += &v.x;
            sy += &v.y;
        }
        Point::new(sx / &n, sy / &n)
    }

    /// `(min_x, min_y, max_x, max_y)`.
    pub fn bbox(&self) -> (Scalar, Scalar, Scalar, Scalar) {
        let mut it = self.vertices.iter();
        let first = it.next().expect("nonempty polygon");
        let (mut x0, mut y0, mut x1, mut y1) = (first.x.clone(), first.y.clone(), first.x.clone(), first.y.clone());
        for v in it {
            if v.x < x0 {
                x0 = v.x.clone();
            }
            if v.x > x1 {
                x1 = v.x.clone();
            }
            if v.y < y0 {
                y0 = v.y.clone();
            }
            if v.y > y1 {
                y1 = v.y.clone();
            }
        }
        (x0, y0, x1, y1)
    }

    /// Image under `v -> offset + factor * (v - origin)`; `factor` must be positive.
    pub fn homothety(&self, origin: &Point, offset: &Point, factor: &Scalar) -> ConvexPolygon {
        assert!(factor.is_positive(), "homothety factor must be positive");
        let mut pts: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| offset.add(&v.sub(origin).scale(factor)))
            .collect();
        // A positive homothety preserves orientation and lexicographic order,
        // so the canonical start vertex is unchanged.
        rotate_canonical(&mut pts);
        ConvexPolygon { vertices: pts }
    }

    pub fn contains_point(&self, p: &Point) -> Location {
        let mut on_edge = false;
        for (a, b) in self.edges() {
            match orientation(a, b, p) {
                Orientation::Right => return Location::Outside,
                Orientation::Collinear => on_edge = true,
                Orientation::Left => {}
            }
        }
        if on_edge {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    /// Whether `p` lies in the closed polygon.
    pub fn covers_point(&self, p: &Point) -> bool {
        self.contains_point(p) != Location::Outside
    }

    /// `self ∩ h` when it has positive area.
    pub fn clip_halfplane(&self, h: &HalfPlane) -> Option<ConvexPolygon> {
        let vals: Vec<Scalar> = self.vertices.iter().map(|v| h.eval(v)).collect();
        if vals.iter().all(|s| !s.is_positive()) {
            return Some(self.clone());
        }
        if vals.iter().all(|s| !s.is_negative()) {
            return None;
        }
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (si, sj) = (&vals[i], &vals[j]);
            if !si.is_positive() {
                out.push(self.vertices[i].clone());
            }
            if (si.is_negative() && sj.is_positive()) || (si.is_positive() && sj.is_negative()) {
                let t = si / &(si - sj);
                out.push(self.vertices[i].lerp(&self.vertices[j], &t));
            }
        }
        ConvexPolygon::from_convex_ccw(out)
    }

    /// Positive-area intersection of two convex polygons.
    pub fn intersect(&self, other: &ConvexPolygon) -> Option<ConvexPolygon> {
        if !bboxes_overlap(self, other) {
            return None;
        }
        let mut cur = self.clone();
        for (p, q) in other.edges() {
            let h = HalfPlane::left_of(p, q).expect("distinct vertices");
            cur = cur.clip_halfplane(&h)?;
        }
        Some(cur)
    }

    /// True iff the open interiors meet (equivalently, the intersection has
    /// positive area).
    pub fn interiors_intersect(&self, other: &ConvexPolygon) -> bool {
        // Separating-axis test over edge normals: the interiors are disjoint
        // iff some edge line has the other polygon weakly on its outer side.
        !(weakly_separated_by_edge(self, other) || weakly_separated_by_edge(other, self))
    }

    /// True iff the closed polygons share at least one point.
    pub fn touches(&self, other: &ConvexPolygon) -> bool {
        !(strictly_separated_by_edge(self, other) || strictly_separated_by_edge(other, self))
    }

    /// Whether the closed bounding boxes meet.
    pub fn bbox_touches(&self, other: &ConvexPolygon) -> bool {
        let (ax0, ay0, ax1, ay1) = self.bbox();
        let (bx0, by0, bx1, by1) = other.bbox();
        ax0 <= bx1 && bx0 <= ax1 && ay0 <= by1 && by0 <= ay1
    }

    /// True iff `other ⊆ self`.
    pub fn contains_polygon(&self, other: &ConvexPolygon) -> bool {
        other.vertices.iter().all(|v| self.covers_point(v))
    }
}

fn bboxes_overlap(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    let (ax0, ay0, ax1, ay1) = a.bbox();
    let (bx0, by0, bx1, by1) = b.bbox();
    ax0 < bx1 && bx0 < ax1 && ay0 < by1 && by0 < ay1
}

fn weakly_separated_by_edge(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    p.edges()
        .any(|(a, b)| q.vertices.iter().all(|v| !cross3(a, b, v).is_positive()))
}

fn strictly_separated_by_edge(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    p.edges()
        .any(|(a, b)| q.vertices.iter().all(|v| cross3(a, b, v).is_negative()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x0: i64, y0: i64, x1: i64, y1: i64) -> ConvexPolygon {
        ConvexPolygon::rect_i(x0, y0, x1, y1)
    }

    fn half() -> Scalar {
        Scalar::ratio(1, 2)
    }

    #[test]
    fn normalization_is_canonical() {
        let a = ConvexPolygon::new(vec![
            Point::int(1, 1),
            Point::int(0, 1),
            Point::int(0, 0),
            Point::int(1, 0),
            Point::int(1, 0),
        ])
        .unwrap();
        let b = ConvexPolygon::new(vec![
            Point::int(0, 0),
            Point::int(1, 0),
            Point::rat(1, 1, 1, 2),
            Point::int(1, 1),
            Point::int(0, 1),
        ])
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert_eq!(a.vertices()[0], Point::int(0, 0));
    }

    #[test]
    fn rejects_invalid() {
        assert_eq!(
            ConvexPolygon::new(vec![Point::int(0, 0), Point::int(1, 1)]),
            Err(GeometryError::TooFewVertices)
        );
        assert_eq!(
            ConvexPolygon::new(vec![Point::int(0, 0), Point::int(1, 1), Point::int(2, 2)]),
            Err(GeometryError::ZeroArea)
        );
        let dart = vec![Point::int(0, 0), Point::int(4, 0), Point::int(1, 1), Point::int(0, 4)];
        assert_eq!(ConvexPolygon::new(dart), Err(GeometryError::NotConvex));
        // Pentagram: all left turns, winds twice.
        let star = vec![
            Point::int(0, 10),
            Point::int(-6, -8),
            Point::int(10, 3),
            Point::int(-10, 3),
            Point::int(6, -8),
        ];
        assert!(ConvexPolygon::new(star).is_err());
    }

    #[test]
    fn contains_point_examples() {
        let u = sq(0, 0, 1, 1);
        assert_eq!(u.contains_point(&Point::new(half(), half())), Location::Interior);
        assert_eq!(u.contains_point(&Point::new(1.into(), half())), Location::Boundary);
        assert_eq!(u.contains_point(&Point::int(2, 0)), Location::Outside);
    }

    #[test]
    fn clip_examples() {
        let p = sq(0, 0, 2, 2);
        let h = HalfPlane::new(1.into(), 0.into(), 1.into()).unwrap();
        assert_eq!(p.clip_halfplane(&h), Some(sq(0, 0, 1, 2)));
        let u = sq(0, 0, 1, 1);
        let h = HalfPlane::new(1.into(), 0.into(), (-1).into()).unwrap();
        assert_eq!(u.clip_halfplane(&h), None);
        let h = HalfPlane::new(1.into(), 0.into(), 0.into()).unwrap();
        assert_eq!(u.clip_halfplane(&h), None);
        assert!(HalfPlane::new(0.into(), 0.into(), 1.into()).is_err());
    }

    #[test]
    fn intersect_examples() {
        let a = sq(0, 0, 1, 1);
        let b = ConvexPolygon::rect(half(), half(), Scalar::ratio(3, 2), Scalar::ratio(3, 2)).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, ConvexPolygon::rect(half(), half(), 1.into(), 1.into()).unwrap());
        assert_eq!(i.area(), Scalar::ratio(1, 4));
        assert_eq!(a.intersect(&sq(5, 5, 6, 6)), None);
        assert_eq!(a.intersect(&a), Some(a.clone()));
    }

    #[test]
    fn interior_and_touch_examples() {
        let a = sq(0, 0, 1, 1);
        let corner = sq(1, 1, 2, 2);
        assert!(!a.interiors_intersect(&corner));
        assert!(a.touches(&corner));
        let b = ConvexPolygon::rect(half(), half(), Scalar::ratio(3, 2), Scalar::ratio(3, 2)).unwrap();
        assert!(a.interiors_intersect(&b));
        assert!(a.touches(&b));
        let far = sq(5, 5, 6, 6);
        assert!(!a.interiors_intersect(&far));
        assert!(!a.touches(&far));
    }

    #[test]
    fn containment_examples() {
        assert!(sq(0, 0, 3, 3).contains_polygon(&sq(1, 1, 2, 2)));
        assert!(sq(0, 0, 1, 1).contains_polygon(&sq(0, 0, 1, 1)));
        let b = ConvexPolygon::rect(half(), half(), Scalar::ratio(3, 2), Scalar::ratio(3, 2)).unwrap();
        assert!(!sq(0, 0, 1, 1).contains_polygon(&b));
    }

    #[test]
    fn area_examples() {
        assert_eq!(sq(0, 0, 1, 1).area(), Scalar::one());
        let t = ConvexPolygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(0, 1)]).unwrap();
        assert_eq!(t.area(), half());
    }

    #[test]
    fn serde_round_trip() {
        let t = ConvexPolygon::new(vec![Point::int(0, 0), Point::rat(3, 2, 0, 1), Point::int(0, 1)]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"[["0","0"],["3/2","0"],["0","1"]]"#);
        let back: ConvexPolygon = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<ConvexPolygon>(r#"[["0","0"],["1","1"],["2","2"]]"#).is_err());
    }
}
