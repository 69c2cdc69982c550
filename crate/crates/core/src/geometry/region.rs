use serde::{Deserialize, Serialize};

use super::{ConvexPolygon, Scalar};

/// Union of pairwise interior-disjoint convex cells. The empty cell list is
/// the empty region.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    cells: Vec<ConvexPolygon>,
}

impl Region {
    pub fn empty() -> Self {
        Region { cells: Vec::new() }
    }

    pub fn from_polygon(p: ConvexPolygon) -> Self {
        Region { cells: vec![p] }
    }

    /// Caller guarantees the cells are pairwise interior-disjoint.
    pub fn from_cells(cells: Vec<ConvexPolygon>) -> Self {
        Region { cells }
    }

    pub fn cells(&self) -> &[ConvexPolygon] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<ConvexPolygon> {
        self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn area(&self) -> Scalar {
        self.cells.iter().map(|c| c.area()).sum()
    }

    /// `self \ interior(p)`.
    ///
    /// Each cell overlapping `p` is peeled against `p`'s supporting half-planes:
    /// the part outside an edge becomes a new cell, the rest continues to the
    /// next edge, and whatever remains inside `p` is dropped.
    pub fn subtract(&self, p: &ConvexPolygon) -> Region {
        let planes = p.halfplanes();
        let mut out = Vec::with_capacity(self.cells.len());
        for cell in &self.cells {
            if !cell.interiors_intersect(p) {
                out.push(cell.clone());
                continue;
            }
            let mut rest = Some(cell.clone());
            for h in &planes {
                let Some(cur) = rest.take() else { break };
                if let Some(outside) = cur.clip_halfplane(&h.complement()) {
                    out.push(outside);
                }
                rest = cur.clip_halfplane(h);
            }
        }
        Region { cells: out }
    }

    /// `self ∩ p`, cellwise.
    pub fn intersect(&self, p: &ConvexPolygon) -> Region {
        Region {
            cells: self.cells.iter().filter_map(|c| c.intersect(p)).collect(),
        }
    }

    /// True iff every cell lies in `p` (vacuously true when empty).
    pub fn contained_in(&self, p: &ConvexPolygon) -> bool {
        self.cells.iter().all(|c| p.contains_polygon(c))
    }
}
