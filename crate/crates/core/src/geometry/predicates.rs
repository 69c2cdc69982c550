//! Exact orientation and segment predicates.

use std::cmp::Ordering;

use super::{sign, Point, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// Twice the signed area of triangle `abc`.
#[inline]
pub fn cross3(a: &Point, b: &Point, c: &Point) -> Scalar {
    let abx = &b.x - &a.x;
    let aby = &b.y - &a.y;
    let acx = &c.x - &a.x;
    let acy = &c.y - &a.y;
    abx * acy - aby * acx
}

/// Sign of `(b - a) x (c - a)`.
pub fn orientation(a: &Point, b: &Point, c: &Point) -> Orientation {
    match sign(&cross3(a, b, c)) {
        Ordering::Greater => Orientation::Left,
        Ordering::Less => Orientation::Right,
        Ordering::Equal => Orientation::Collinear,
    }
}

/// Whether `p` lies on the closed segment `ab` (assumes `a != b` or `p == a`).
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    if orientation(a, b, p) != Orientation::Collinear {
        return false;
    }
    let (lx, hx) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ly, hy) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    lx <= &p.x && &p.x <= hx && ly <= &p.y && &p.y <= hy
}

/// Intersection of two closed segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentIntersection {
    None,
    Point(Point),
    /// Collinear overlap of positive length, given by its endpoints.
    Overlap(Point, Point),
}

/// Exact intersection of closed segments `ab` and `cd`.
pub fn segment_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> SegmentIntersection {
    let r = b.sub(a);
    let s = d.sub(c);
    let denom = r.cross(&s);
    let ca = c.sub(a);
    if denom.is_zero() {
        if !ca.cross(&r).is_zero() {
            return SegmentIntersection::None;
        }
        // Collinear: project on r.
        let rr = r.dot(&r);
        let t0 = ca.dot(&r) / &rr;
        let t1 = &t0 + &(s.dot(&r) / &rr);
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let lo = Scalar::max_of(lo, Scalar::zero());
        let hi = Scalar::min_of(hi, Scalar::one());
        return match lo.cmp(&hi) {
            Ordering::Greater => SegmentIntersection::None,
            Ordering::Equal => SegmentIntersection::Point(a.lerp(b, &lo)),
            Ordering::Less => SegmentIntersection::Overlap(a.lerp(b, &lo), a.lerp(b, &hi)),
        };
    }
    let t = ca.cross(&s) / &denom;
    let u = ca.cross(&r) / &denom;
    let zero = Scalar::zero();
    let one = Scalar::one();
    if t < zero || t > one || u < zero || u > one {
        return SegmentIntersection::None;
    }
    SegmentIntersection::Point(a.lerp(b, &t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_examples() {
        let o = Point::int(0, 0);
        assert_eq!(orientation(&o, &Point::int(1, 0), &Point::int(0, 1)), Orientation::Left);
        assert_eq!(
            orientation(&o, &Point::int(1, 1), &Point::int(2, 2)),
            Orientation::Collinear
        );
        assert_eq!(
            orientation(&o, &Point::int(0, 1), &Point::int(1, 1)),
            Orientation::Right
        );
    }

    #[test]
    fn segments() {
        let p = |x, y| Point::int(x, y);
        assert_eq!(
            segment_intersection(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)),
            SegmentIntersection::Point(p(1, 1))
        );
        assert_eq!(
            segment_intersection(&p(0, 0), &p(1, 0), &p(0, 1), &p(1, 1)),
            SegmentIntersection::None
        );
        assert_eq!(
            segment_intersection(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)),
            SegmentIntersection::Overlap(p(1, 0), p(2, 0))
        );
        assert_eq!(
            segment_intersection(&p(0, 0), &p(1, 0), &p(1, 0), &p(3, 0)),
            SegmentIntersection::Point(p(1, 0))
        );
        assert_eq!(
            segment_intersection(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)),
            SegmentIntersection::None
        );
        assert!(on_segment(&p(0, 0), &p(2, 2), &p(1, 1)));
        assert!(!on_segment(&p(0, 0), &p(2, 2), &p(3, 3)));
    }
}
