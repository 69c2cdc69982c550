//! Exact rational geometry kernel for convex polygons.
//!
//! Every predicate is decided with arbitrary-precision rationals; there is no
//! tolerance anywhere in this module. Degenerate intersections (points and
//! segments) are never represented as polygons: operations that would produce
//! them return `None` or drop the piece.

mod crossings;
mod point;
mod polygon;
pub mod predicates;
mod region;
mod scalar;

pub use crossings::{boundary_crossings, crossing_points, crossing_runs};
pub use point::Point;
pub use polygon::{ConvexPolygon, HalfPlane, Location};
pub use predicates::{orientation, Orientation};
pub use region::Region;
pub use scalar::{sign, ParseScalarError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("polygon needs at least three distinct vertices")]
    TooFewVertices,
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon is not convex")]
    NotConvex,
    #[error("half-plane normal is zero")]
    InvalidHalfPlane,
    #[error("boundaries share a segment of positive length")]
    DegenerateOverlap,
}

/// Exact union area of a family of convex polygons.
///
/// Computed by disjointifying: each polygon contributes the part not already
/// covered by its predecessors.
pub fn union_area(polys: &[ConvexPolygon]) -> Scalar {
    let mut total = Scalar::zero();
    for (i, p) in polys.iter().enumerate() {
        let mut r = Region::from_polygon(p.clone());
        for q in &polys[..i] {
            if r.is_empty() {
                break;
            }
            r = r.subtract(q);
        }
        total += &r.area();
    }
    total
}
