use serde::{Deserialize, Serialize};

use super::DecompositionError;
use crate::geometry::predicates::{on_segment, segment_intersection, SegmentIntersection};
use crate::geometry::{ConvexPolygon, HalfPlane, Location, Point, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    U,
    V,
}

/// A connected piece of `U0 \ V0` (side `U`) or `V0 \ U0` (side `V`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Petal {
    pub cells: Region,
    /// Whether the petal sticks out of the other side's original object.
    pub upetal: bool,
}

/// A maximal run of the lens boundary, clockwise from `start` to `end`.
/// `side == Some(U)` means the run is on the boundary of `V0` and borders
/// the U-petal `petal`; `None` marks a stretch shared by both boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub start: Point,
    pub end: Point,
    pub side: Option<Side>,
    pub petal: Option<usize>,
    pub upetal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PetalClassification {
    /// `U0 ∩ V0`.
    pub lens: ConvexPolygon,
    /// Clockwise along the lens; `intervals[k]` starts at `intersection_points[k]`.
    pub intersection_points: Vec<Point>,
    pub intervals: Vec<Interval>,
    pub u_petals: Vec<Petal>,
    pub v_petals: Vec<Petal>,
}

impl PetalClassification {
    /// Clockwise sides of the intervals bordering upetals.
    pub fn upetal_sequence(&self) -> Vec<Side> {
        self.intervals
            .iter()
            .filter(|iv| iv.upetal)
            .map(|iv| iv.side.expect("upetal intervals have a side"))
            .collect()
    }

    /// True iff U and V upetal intervals interleave around the lens.
    pub fn co_conflicting(&self) -> bool {
        let seq = self.upetal_sequence();
        let changes = (0..seq.len()).filter(|&k| seq[k] != seq[(k + 1) % seq.len()]).count();
        changes > 2
    }
}

fn shares_edge(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    a.edges().any(|(p, q)| {
        b.edges()
            .any(|(r, s)| matches!(segment_intersection(p, q, r, s), SegmentIntersection::Overlap(x, y) if x != y))
    })
}

/// Connected components under shared positive-length edges.
fn components(region: &Region) -> Vec<Region> {
    let cells = region.cells();
    let n = cells.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..n {
        for b in a + 1..n {
            if cells[a].bbox_touches(&cells[b]) && shares_edge(&cells[a], &cells[b]) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<ConvexPolygon>)> = Vec::new();
    for (i, cell) in cells.iter().enumerate() {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.push(cell.clone()),
            None => groups.push((root, vec![cell.clone()])),
        }
    }
    groups.into_iter().map(|(_, g)| Region::from_cells(g)).collect()
}

fn petals_of(own: &ConvexPolygon, other_piece: &ConvexPolygon, other_object: &ConvexPolygon) -> Vec<Petal> {
    components(&Region::from_polygon(own.clone()).subtract(other_piece))
        .into_iter()
        .map(|cells| {
            let upetal = !cells.subtract(other_object).is_empty();
            Petal { cells, upetal }
        })
        .collect()
}

/// Splits the lens boundary into petal intervals and matches them to petals.
pub fn classify_petals(
    u0: &ConvexPolygon,
    v0: &ConvexPolygon,
    u: &ConvexPolygon,
    v: &ConvexPolygon,
) -> Result<PetalClassification, DecompositionError> {
    if !u0.interiors_intersect(v0) {
        return Err(DecompositionError::NotOverlapping);
    }
    let lens = u0.intersect(v0).ok_or(DecompositionError::NotOverlapping)?;
    let u_petals = petals_of(u0, v0, v);
    let v_petals = petals_of(v0, u0, u);

    // Lens edges in clockwise order, labelled by which petal side they border.
    let vs = lens.vertices();
    let k = vs.len();
    let edges: Vec<(Point, Point, Option<Side>)> = (0..k)
        .map(|i| {
            let a = vs[(k - i) % k].clone();
            let b = vs[(2 * k - i - 1) % k].clone();
            let m = a.midpoint(&b);
            let on_u = u0.contains_point(&m) == Location::Boundary;
            let on_v = v0.contains_point(&m) == Location::Boundary;
            let side = match (on_u, on_v) {
                (false, true) => Some(Side::U),
                (true, false) => Some(Side::V),
                _ => None,
            };
            (a, b, side)
        })
        .collect();

    let mut intervals = Vec::new();
    if let Some(first) = (0..k).find(|&i| edges[i].2 != edges[(i + k - 1) % k].2) {
        let mut i = first;
        loop {
            let side = edges[i].2;
            let start = edges[i].0.clone();
            let mid = edges[i].0.midpoint(&edges[i].1);
            let mut j = i;
            while edges[(j + 1) % k].2 == side {
                j = (j + 1) % k;
            }
            let end = edges[j].1.clone();
            let (petal, upetal) = match side {
                None => (None, false),
                Some(s) => {
                    let list = if s == Side::U { &u_petals } else { &v_petals };
                    let idx = list
                        .iter()
                        .position(|p| p.cells.cells().iter().any(|c| c.covers_point(&mid)))
                        .ok_or_else(|| DecompositionError::PhaseInvariant {
                            phase: 0,
                            detail: "lens interval without a petal".into(),
                        })?;
                    (Some(idx), list[idx].upetal)
                }
            };
            intervals.push(Interval {
                start,
                end,
                side,
                petal,
                upetal,
            });
            i = (j + 1) % k;
            if i == first {
                break;
            }
        }
    }
    let intersection_points = intervals.iter().map(|iv| iv.start.clone()).collect();
    let cls = PetalClassification {
        lens,
        intersection_points,
        intervals,
        u_petals,
        v_petals,
    };
    if cls.co_conflicting() {
        return Err(DecompositionError::ConflictingCO);
    }
    Ok(cls)
}

/// The chord `pq` and the closed half-planes kept by each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingEdge {
    pub p: Point,
    pub q: Point,
    pub h_i: HalfPlane,
    pub h_j: HalfPlane,
}

/// Chooses intersection points `p`, `q` so that the clockwise lens arc from
/// `p` to `q` holds every U-upetal interval and the rest holds every V-upetal
/// interval, then clips `U0` and `V0` to the two sides of `pq`.
///
/// Candidate pairs are tried in lexicographic order of `(p, q)`.
pub fn separating_edge(
    u0: &ConvexPolygon,
    v0: &ConvexPolygon,
    u: &ConvexPolygon,
    v: &ConvexPolygon,
) -> Result<(ConvexPolygon, ConvexPolygon, SeparatingEdge), DecompositionError> {
    let cls = classify_petals(u0, v0, u, v)?;
    let m = cls.intervals.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| cls.intersection_points[a].cmp(&cls.intersection_points[b]));
    // Arc from point a to point b covers intervals a, a+1, ..., b-1.
    let in_arc = |a: usize, b: usize, t: usize| (t + m - a) % m < (b + m - a) % m;
    for &a in &order {
        for &b in &order {
            if a == b {
                continue;
            }
            let ok = cls
                .intervals
                .iter()
                .enumerate()
                .all(|(t, iv)| match (iv.upetal, iv.side) {
                    (true, Some(Side::U)) => in_arc(a, b, t),
                    (true, Some(Side::V)) => !in_arc(a, b, t),
                    _ => true,
                });
            if !ok {
                continue;
            }
            let (p, q) = (&cls.intersection_points[a], &cls.intersection_points[b]);
            // The clockwise arc from p to q lies to the left of p -> q.
            let h_i = HalfPlane::left_of(p, q)?;
            let h_j = h_i.complement();
            let (Some(u_ij), Some(v_ji)) = (u0.clip_halfplane(&h_i), v0.clip_halfplane(&h_j)) else {
                continue;
            };
            let e = SeparatingEdge {
                p: p.clone(),
                q: q.clone(),
                h_i,
                h_j,
            };
            return Ok((u_ij, v_ji, e));
        }
    }
    Err(DecompositionError::NoSeparator)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingEdgeReport {
    /// `None` when no cover-free regions were supplied.
    pub cf_contained: Option<bool>,
    pub interiors_disjoint: bool,
    pub shared_edge: bool,
    pub u_rest_in_v: bool,
    pub v_rest_in_u: bool,
}

impl SeparatingEdgeReport {
    pub fn passed(&self) -> bool {
        self.cf_contained.unwrap_or(true)
            && self.interiors_disjoint
            && self.shared_edge
            && self.u_rest_in_v
            && self.v_rest_in_u
    }
}

/// Every boundary point of `piece` off the boundary of `whole` lies on `pq`.
fn new_boundary_is_chord(piece: &ConvexPolygon, whole: &ConvexPolygon, p: &Point, q: &Point) -> bool {
    piece.edges().all(|(a, b)| {
        let m = a.midpoint(b);
        whole.contains_point(&m) == Location::Boundary || (on_segment(p, q, a) && on_segment(p, q, b))
    })
}

#[allow(clippy::too_many_arguments)]
pub fn verify_separating_edge(
    u0: &ConvexPolygon,
    v0: &ConvexPolygon,
    u: &ConvexPolygon,
    v: &ConvexPolygon,
    u_ij: &ConvexPolygon,
    v_ji: &ConvexPolygon,
    e: &SeparatingEdge,
    cf: Option<(&Region, &Region)>,
) -> SeparatingEdgeReport {
    let cf_contained = cf.map(|(cu, cv)| cu.contained_in(u_ij) && cv.contained_in(v_ji));
    let mid = e.p.midpoint(&e.q);
    let on_both = |x: &Point| {
        u_ij.contains_point(x) == Location::Boundary
            && v_ji.contains_point(x) == Location::Boundary
            && u0.contains_point(x) != Location::Outside
            && v0.contains_point(x) != Location::Outside
    };
    let shared_edge = e.p != e.q
        && on_both(&e.p)
        && on_both(&e.q)
        && on_both(&mid)
        && new_boundary_is_chord(u_ij, u0, &e.p, &e.q)
        && new_boundary_is_chord(v_ji, v0, &e.p, &e.q);
    SeparatingEdgeReport {
        cf_contained,
        interiors_disjoint: !u_ij.interiors_intersect(v_ji),
        shared_edge,
        u_rest_in_v: Region::from_polygon(u0.clone()).subtract(u_ij).contained_in(v),
        v_rest_in_u: Region::from_polygon(v0.clone()).subtract(v_ji).contained_in(u),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Scalar;

    fn sq(x0: i64, y0: i64, x1: i64, y1: i64) -> ConvexPolygon {
        ConvexPolygon::rect_i(x0, y0, x1, y1)
    }

    #[test]
    fn two_squares() {
        let (u, v) = (sq(0, 0, 2, 2), sq(1, 1, 3, 3));
        let cls = classify_petals(&u, &v, &u, &v).unwrap();
        assert_eq!(cls.u_petals.len(), 1);
        assert_eq!(cls.v_petals.len(), 1);
        let mut pts = cls.intersection_points.clone();
        pts.sort();
        assert_eq!(pts, vec![Point::int(1, 2), Point::int(2, 1)]);
        assert!(!cls.co_conflicting());

        let (u_ij, v_ji, e) = separating_edge(&u, &v, &u, &v).unwrap();
        assert_eq!(u_ij.area(), Scalar::ratio(7, 2));
        assert_eq!(v_ji.area(), Scalar::ratio(7, 2));
        assert!(u_ij.covers_point(&Point::int(0, 0)));
        let mut ends = [e.p.clone(), e.q.clone()];
        ends.sort();
        assert_eq!(ends, [Point::int(1, 2), Point::int(2, 1)]);
        let rep = verify_separating_edge(&u, &v, &u, &v, &u_ij, &v_ji, &e, None);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn covered_piece_has_no_upetal() {
        let (u0, v0) = (sq(0, 0, 2, 2), sq(1, 1, 3, 3));
        let v = sq(-1, -1, 3, 3);
        let cls = classify_petals(&u0, &v0, &u0, &v).unwrap();
        assert!(cls.u_petals.iter().all(|p| !p.upetal));
    }

    #[test]
    fn identical_pieces_have_no_petals() {
        let u = sq(0, 0, 2, 2);
        let cls = classify_petals(&u, &u, &u, &u).unwrap();
        assert!(cls.u_petals.is_empty() && cls.v_petals.is_empty());
        assert!(cls.intersection_points.is_empty());
    }

    #[test]
    fn touching_pieces_are_rejected() {
        assert_eq!(
            classify_petals(&sq(0, 0, 1, 1), &sq(1, 0, 2, 1), &sq(0, 0, 1, 1), &sq(1, 0, 2, 1)),
            Err(DecompositionError::NotOverlapping)
        );
    }

    #[test]
    fn two_petals_on_one_side() {
        // A wide hexagon across a tall square: U0 \ V0 has a petal on each side.
        let hex = ConvexPolygon::new(vec![
            Point::int(-3, 0),
            Point::int(-2, -1),
            Point::int(2, -1),
            Point::int(3, 0),
            Point::int(2, 1),
            Point::int(-2, 1),
        ])
        .unwrap();
        let tall = sq(-1, -3, 1, 3);
        // With every petal sticking out, the intervals alternate U V U V.
        assert_eq!(
            classify_petals(&hex, &tall, &hex, &tall),
            Err(DecompositionError::ConflictingCO)
        );
        assert_eq!(
            separating_edge(&hex, &tall, &hex, &tall),
            Err(DecompositionError::ConflictingCO)
        );

        // Once V swallows one U-petal, a single chord separates the rest.
        let v = ConvexPolygon::new(vec![
            Point::int(-4, -3),
            Point::int(1, -3),
            Point::int(1, 3),
            Point::int(-4, 3),
        ])
        .unwrap();
        let cls = classify_petals(&hex, &tall, &hex, &v).unwrap();
        assert_eq!(cls.u_petals.len(), 2);
        assert_eq!(cls.v_petals.len(), 2);
        assert_eq!(cls.upetal_sequence().len(), 3);
        let (u_ij, v_ji, e) = separating_edge(&hex, &tall, &hex, &v).unwrap();
        // hex ∩ {x >= 1}: a 2x2 block plus a unit triangle.
        assert_eq!(u_ij.area(), Scalar::from_int(3));
        let rep = verify_separating_edge(&hex, &tall, &hex, &v, &u_ij, &v_ji, &e, None);
        assert!(rep.passed(), "{rep:?}");
    }
}
