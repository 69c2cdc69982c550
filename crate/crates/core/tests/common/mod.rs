#![allow(dead_code)]

use proptest::prelude::*;
use swapcover::geometry::{ConvexPolygon, Point, Scalar};

/// Monotone-chain hull of integer points; `None` when degenerate.
pub fn hull(mut pts: Vec<(i64, i64)>) -> Option<ConvexPolygon> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return None;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return None;
    }
    ConvexPolygon::new(lower.into_iter().map(|(x, y)| Point::int(x, y)).collect()).ok()
}

pub fn arb_point(lo: i64, hi: i64) -> impl Strategy<Value = Point> {
    (lo..=hi, lo..=hi).prop_map(|(x, y)| Point::int(x, y))
}

/// Convex polygon with vertices on the integer grid `[lo, hi]^2`.
pub fn arb_polygon(lo: i64, hi: i64) -> impl Strategy<Value = ConvexPolygon> {
    prop::collection::vec((lo..=hi, lo..=hi), 3..9).prop_filter_map("degenerate hull", hull)
}

pub fn arb_scalar(lo: i64, hi: i64, den: i64) -> impl Strategy<Value = Scalar> {
    (lo * den..=hi * den).prop_map(move |n| Scalar::ratio(n, den))
}

pub fn to_f64(p: &Point) -> (f64, f64) {
    (p.x.to_f64(), p.y.to_f64())
}

fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    b.sub(a).cross(&c.sub(a)).signum()
}

fn on_seg(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p) == 0
        && Scalar::min_of(a.x.clone(), b.x.clone()) <= p.x
        && p.x <= Scalar::max_of(a.x.clone(), b.x.clone())
        && Scalar::min_of(a.y.clone(), b.y.clone()) <= p.y
        && p.y <= Scalar::max_of(a.y.clone(), b.y.clone())
}

fn segments_meet(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_seg(a, b, c) || on_seg(a, b, d) || on_seg(c, d, a) || on_seg(c, d, b)
}

/// Closed point-in-polygon by edge orientations (vertices counterclockwise).
pub fn inside(poly: &ConvexPolygon, p: &Point) -> bool {
    let v = poly.vertices();
    (0..v.len()).all(|i| orient(&v[i], &v[(i + 1) % v.len()], p) >= 0)
}

/// Closed intersection via vertex containment and edge-pair tests.
pub fn meet(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    if a.vertices().iter().any(|v| inside(b, v)) || b.vertices().iter().any(|v| inside(a, v)) {
        return true;
    }
    let (va, vb) = (a.vertices(), b.vertices());
    (0..va.len())
        .any(|i| (0..vb.len()).any(|j| segments_meet(&va[i], &va[(i + 1) % va.len()], &vb[j], &vb[(j + 1) % vb.len()])))
}

/// Bitmask of what each object covers, built from raw geometry.
pub fn coverage_masks(instance: &swapcover::instances::Instance) -> (Vec<u64>, u64) {
    use swapcover::instances::Instance;
    let polys = instance.polygons();
    match instance {
        Instance::Domination(_) => {
            let masks = (0..polys.len())
                .map(|i| {
                    (0..polys.len())
                        .filter(|&j| i == j || meet(&polys[i], &polys[j]))
                        .fold(0u64, |m, j| m | 1 << j)
                })
                .collect();
            (masks, (1u64 << polys.len()) - 1)
        }
        Instance::Cover(c) => {
            let masks = polys
                .iter()
                .map(|o| {
                    (0..c.points.len())
                        .filter(|&k| inside(o, &c.points[k]))
                        .fold(0u64, |m, k| m | 1 << k)
                })
                .collect();
            (masks, (1u64 << c.points.len()) - 1)
        }
    }
}

/// Lexicographically first minimum cover by exhaustive enumeration.
pub fn brute_min_cover(instance: &swapcover::instances::Instance) -> Option<Vec<usize>> {
    use itertools::Itertools;
    let (masks, full) = coverage_masks(instance);
    let n = masks.len();
    (0..=n).find_map(|k| {
        (0..n)
            .combinations(k)
            .find(|c| c.iter().fold(0u64, |m, &i| m | masks[i]) == full)
    })
}
