use serde::{Deserialize, Serialize};

use super::DecompositionError;
use crate::feasibility::cover_free_region;
use crate::geometry::{crossing_runs, union_area, ConvexPolygon, HalfPlane, Point, Region, Scalar};
use crate::instances::verify_pseudodisk_family;

/// A cut made in one phase: the neighbour and the crossing points its chord joins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    pub neighbor: usize,
    pub p1: Point,
    pub p2: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub phase: usize,
    pub chords: Vec<Chord>,
    /// Neighbours meeting the phase object only on the boundary; not cut.
    pub tangent: Vec<usize>,
    /// Largest boundary crossing count over overlapping pairs after the phase.
    pub max_crossings: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub tilde: Vec<ConvexPolygon>,
    pub phase_log: Vec<PhaseRecord>,
}

/// Cuts `x` and `r` apart along a chord joining their two crossings.
///
/// `r` keeps the closed side holding `r \ x` and `x` keeps the other one.
/// When a crossing runs along a shared boundary stretch either end of the
/// stretch may serve; the first chord that puts `r \ x` and `x \ r` on
/// opposite sides is used.
fn cut(
    x: &ConvexPolygon,
    r: &ConvexPolygon,
    runs: &[(Point, Point)],
) -> Option<(ConvexPolygon, ConvexPolygon, Point, Point)> {
    let r_only = Region::from_polygon(r.clone()).subtract(x);
    let x_only = Region::from_polygon(x.clone()).subtract(r);
    let witness = r_only.cells().first()?.vertex_centroid();
    let within = |reg: &Region, h: &HalfPlane| reg.cells().iter().all(|c| c.vertices().iter().all(|v| h.contains(v)));
    let (a, b) = (&runs[0], &runs[1]);
    for p1 in [&a.0, &a.1] {
        for p2 in [&b.0, &b.1] {
            let Ok(line) = HalfPlane::left_of(p1, p2) else { continue };
            let keep_r = if line.contains(&witness) {
                line
            } else {
                line.complement()
            };
            let keep_x = keep_r.complement();
            if !within(&r_only, &keep_r) || !within(&x_only, &keep_x) {
                continue;
            }
            let new_r = r.clip_halfplane(&keep_r)?;
            let x_part = x.clip_halfplane(&keep_x)?;
            return Some((new_r, x_part, p1.clone(), p2.clone()));
        }
    }
    None
}

fn check_phase(phase: usize, tilde: &[ConvexPolygon]) -> Result<usize, DecompositionError> {
    let n = tilde.len();
    let mut max_crossings = 0;
    for t in 0..n {
        for q in t + 1..n {
            if !tilde[t].interiors_intersect(&tilde[q]) {
                continue;
            }
            if t <= phase {
                return Err(DecompositionError::PhaseInvariant {
                    phase,
                    detail: format!("pieces {t} and {q} still overlap"),
                });
            }
            let c = crossing_runs(&tilde[t], &tilde[q]).len();
            if c > 2 {
                return Err(DecompositionError::PhaseInvariant {
                    phase,
                    detail: format!("pieces {t} and {q} cross {c} times"),
                });
            }
            max_crossings = max_crossings.max(c);
        }
    }
    Ok(max_crossings)
}

/// Phase `i` cuts the current piece `i` against every piece overlapping its
/// interior; piece `i` becomes the intersection of its cut versions.
pub fn disjoint_union_decomposition(family: &[ConvexPolygon]) -> Result<DecompositionResult, DecompositionError> {
    let n = family.len();
    if let Some(o) = verify_pseudodisk_family(family).offenders.first() {
        return Err(DecompositionError::NotPseudodisks { i: o.i, j: o.j });
    }
    let all: Vec<usize> = (0..n).collect();
    if let Some(index) = (0..n).find(|&i| cover_free_region(i, &all, family).is_empty()) {
        return Err(DecompositionError::NotCoverFree { index });
    }

    let mut tilde = family.to_vec();
    let mut phase_log = Vec::with_capacity(n);
    for i in 0..n {
        let x = tilde[i].clone();
        let mut chords = Vec::new();
        let mut tangent = Vec::new();
        let mut pieces = Vec::new();
        for j in 0..n {
            if j == i {
                continue;
            }
            if !x.interiors_intersect(&tilde[j]) {
                if x.touches(&tilde[j]) {
                    tangent.push(j);
                }
                continue;
            }
            let runs = crossing_runs(&x, &tilde[j]);
            if runs.len() != 2 {
                return Err(DecompositionError::DegenerateChord {
                    phase: i,
                    neighbor: j,
                    crossings: runs.len(),
                });
            }
            let (new_r, x_part, p1, p2) = cut(&x, &tilde[j], &runs).ok_or(DecompositionError::DegenerateChord {
                phase: i,
                neighbor: j,
                crossings: 2,
            })?;
            tilde[j] = new_r;
            pieces.push(x_part);
            chords.push(Chord { neighbor: j, p1, p2 });
        }
        let mut acc = x;
        for p in &pieces {
            acc = acc.intersect(p).ok_or_else(|| DecompositionError::PhaseInvariant {
                phase: i,
                detail: "cut pieces have no common interior".into(),
            })?;
        }
        tilde[i] = acc;
        let max_crossings = check_phase(i, &tilde)?;
        log::trace!("phase {i}: {} chords", chords.len());
        phase_log.push(PhaseRecord {
            phase: i,
            chords,
            tangent,
            max_crossings,
        });
    }
    Ok(DecompositionResult { tilde, phase_log })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub lengths_match: bool,
    pub subset: Vec<bool>,
    pub convex: Vec<bool>,
    pub union_area_family: Scalar,
    pub union_area_tilde: Scalar,
    /// Must be exactly zero.
    pub area_discrepancy: Scalar,
    pub overlapping_pairs: Vec<(usize, usize)>,
    pub cf_contained: Vec<bool>,
    /// Per-phase crossing maxima taken from the phase log.
    pub max_phase_crossings: usize,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.lengths_match
            && self.subset.iter().all(|&b| b)
            && self.convex.iter().all(|&b| b)
            && self.area_discrepancy.is_zero()
            && self.overlapping_pairs.is_empty()
            && self.cf_contained.iter().all(|&b| b)
            && self.max_phase_crossings <= 2
    }
}

/// Re-checks every decomposition property from scratch.
pub fn verify_decomposition(family: &[ConvexPolygon], result: &DecompositionResult) -> DecompositionReport {
    let tilde = &result.tilde;
    let lengths_match = family.len() == tilde.len();
    let n = family.len().min(tilde.len());
    let subset = (0..n).map(|i| family[i].contains_polygon(&tilde[i])).collect();
    let convex = tilde
        .iter()
        .map(|t| ConvexPolygon::new(t.vertices().to_vec()).as_ref() == Ok(t))
        .collect();
    let union_area_family = union_area(family);
    let union_area_tilde = union_area(tilde);
    let area_discrepancy = &union_area_family - &union_area_tilde;
    let mut overlapping_pairs = Vec::new();
    for a in 0..tilde.len() {
        for b in a + 1..tilde.len() {
            if tilde[a].interiors_intersect(&tilde[b]) {
                overlapping_pairs.push((a, b));
            }
        }
    }
    let all: Vec<usize> = (0..family.len()).collect();
    let cf_contained = (0..n)
        .map(|i| cover_free_region(i, &all, family).contained_in(&tilde[i]))
        .collect();
    let max_phase_crossings = result.phase_log.iter().map(|p| p.max_crossings).max().unwrap_or(0);
    DecompositionReport {
        lengths_match,
        subset,
        convex,
        union_area_family,
        union_area_tilde,
        area_discrepancy,
        overlapping_pairs,
        cf_contained,
        max_phase_crossings,
    }
}
