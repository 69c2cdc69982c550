//! Constructive decompositions of convex pseudodisk families.
//!
//! [`disjoint_union_decomposition`] shrinks every member of a cover-free
//! family so that the pieces have disjoint interiors, the same union, and
//! still contain each member's cover-free region. [`separating_edge`] splits
//! two overlapping pieces along one chord so that whatever each side gives up
//! is covered by the other side's original object.

mod petals;
mod union;

pub use petals::{
    classify_petals, separating_edge, verify_separating_edge, Interval, Petal, PetalClassification, SeparatingEdge,
    SeparatingEdgeReport, Side,
};
pub use union::{
    disjoint_union_decomposition, verify_decomposition, Chord, DecompositionReport, DecompositionResult, PhaseRecord,
};

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompositionError {
    #[error("object {index} is covered by the others")]
    NotCoverFree { index: usize },
    #[error("objects {i} and {j} are not pseudodisks")]
    NotPseudodisks { i: usize, j: usize },
    #[error("phase {phase}: no valid chord against neighbour {neighbor} ({crossings} boundary crossings)")]
    DegenerateChord {
        phase: usize,
        neighbor: usize,
        crossings: usize,
    },
    #[error("phase {phase}: {detail}")]
    PhaseInvariant { phase: usize, detail: String },
    #[error("the two objects do not overlap in their interiors")]
    NotOverlapping,
    #[error("petal intervals interleave")]
    ConflictingCO,
    #[error("no pair of intersection points separates the petals")]
    NoSeparator,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
