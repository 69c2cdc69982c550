//! Transversal boundary crossings between two convex polygons.

use super::predicates::{segment_intersection, SegmentIntersection};
use super::{ConvexPolygon, GeometryError, Location, Point, Scalar};

/// Points where `∂p` passes from inside `q` to outside (or back), listed in
/// counterclockwise order along `∂p`. Tangential contacts are not reported.
pub fn crossing_points(p: &ConvexPolygon, q: &ConvexPolygon) -> Result<Vec<Point>, GeometryError> {
    if !p.bbox_touches(q) {
        return Ok(Vec::new());
    }
    // Walk ∂p, split at every contact with ∂q, and record the side of q
    // each open sub-segment lies on.
    let mut pieces: Vec<(Location, Point)> = Vec::new();
    for (a, b) in p.edges() {
        let dir = b.sub(a);
        let len2 = dir.dot(&dir);
        let mut ts: Vec<Scalar> = vec![Scalar::zero(), Scalar::one()];
        for (c, d) in q.edges() {
            match segment_intersection(a, b, c, d) {
                SegmentIntersection::None => {}
                SegmentIntersection::Point(x) => ts.push(x.sub(a).dot(&dir) / &len2),
                SegmentIntersection::Overlap(..) => return Err(GeometryError::DegenerateOverlap),
            }
        }
        ts.sort();
        ts.dedup();
        for w in ts.windows(2) {
            let mid_t = (&w[0] + &w[1]) * Scalar::ratio(1, 2);
            let mid = a.lerp(b, &mid_t);
            let loc = q.contains_point(&mid);
            if loc == Location::Boundary {
                return Err(GeometryError::DegenerateOverlap);
            }
            // The breakpoint that ends this sub-segment.
            pieces.push((loc, a.lerp(b, &w[1])));
        }
    }
    let n = pieces.len();
    let mut out = Vec::new();
    for k in 0..n {
        let next = &pieces[(k + 1) % n];
        if pieces[k].0 != next.0 {
            out.push(pieces[k].1.clone());
        }
    }
    Ok(out)
}

/// Crossings of `∂p` and `∂q` where the boundaries may share segments.
///
/// Walking `∂p` counterclockwise, each passage from inside `q` to outside (or
/// back) is one crossing. The passage happens at a single point or along a
/// stretch of shared boundary; each entry holds the first and last point of
/// that stretch (equal for a point crossing). A shared stretch with `p` on the
/// same side of `q` at both ends is a touch and is not reported.
pub fn crossing_runs(p: &ConvexPolygon, q: &ConvexPolygon) -> Vec<(Point, Point)> {
    if !p.bbox_touches(q) {
        return Vec::new();
    }
    // (side, start, end) of each sub-segment of ∂p between contacts with ∂q.
    let mut pieces: Vec<(Location, Point, Point)> = Vec::new();
    for (a, b) in p.edges() {
        let dir = b.sub(a);
        let len2 = dir.dot(&dir);
        let mut ts: Vec<Scalar> = vec![Scalar::zero(), Scalar::one()];
        for (c, d) in q.edges() {
            match segment_intersection(a, b, c, d) {
                SegmentIntersection::None => {}
                SegmentIntersection::Point(x) => ts.push(x.sub(a).dot(&dir) / &len2),
                SegmentIntersection::Overlap(x, y) => {
                    ts.push(x.sub(a).dot(&dir) / &len2);
                    ts.push(y.sub(a).dot(&dir) / &len2);
                }
            }
        }
        ts.sort();
        ts.dedup();
        for w in ts.windows(2) {
            let mid = a.lerp(b, &((&w[0] + &w[1]) * Scalar::ratio(1, 2)));
            let loc = q.contains_point(&mid);
            let (s, e) = (a.lerp(b, &w[0]), a.lerp(b, &w[1]));
            match pieces.last_mut() {
                Some(last) if last.0 == loc => last.2 = e,
                _ => pieces.push((loc, s, e)),
            }
        }
    }
    if pieces.len() > 1 && pieces[0].0 == pieces[pieces.len() - 1].0 {
        let last = pieces.pop().expect("nonempty");
        pieces[0].1 = last.1;
    }
    let n = pieces.len();
    let Some(anchor) = (0..n).find(|&k| pieces[k].0 != Location::Boundary) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut k = anchor;
    loop {
        let next = (k + 1) % n;
        if pieces[next].0 == Location::Boundary {
            let after = (next + 1) % n;
            if pieces[after].0 != pieces[k].0 {
                out.push((pieces[next].1.clone(), pieces[next].2.clone()));
            }
            k = after;
        } else {
            if pieces[next].0 != pieces[k].0 {
                out.push((pieces[k].2.clone(), pieces[k].2.clone()));
            }
            k = next;
        }
        if k == anchor {
            break;
        }
    }
    out
}

/// Number of transversal crossings of `∂p` and `∂q`.
///
/// Fails with [`GeometryError::DegenerateOverlap`] when the boundaries share
/// a segment of positive length.
pub fn boundary_crossings(p: &ConvexPolygon, q: &ConvexPolygon) -> Result<usize, GeometryError> {
    crossing_points(p, q).map(|v| v.len())
}
