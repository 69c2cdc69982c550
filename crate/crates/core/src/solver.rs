//! b-swap local search with cover-free containment replacement.
//!
//! The search alternates two loops. The first repeatedly applies the
//! lexicographically first improving swap: remove at most `b` selected objects
//! and add strictly fewer unselected ones. The second replaces a selected
//! object `Q` by an unselected `R` whenever the part of `Q` not covered by the
//! other selected objects lies inside `R`. The pair is re-run until neither
//! loop changes the solution.

use std::collections::HashSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::greedy;
use crate::feasibility::{build_graph_from, cover_free_region, is_dominating, Solution};
use crate::geometry::{ConvexPolygon, Scalar};
use crate::instances::Instance;
use crate::system::SetSystem;

/// Largest swap size accepted from the epsilon mapping.
pub const MAX_B: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("the full object set is not feasible")]
    InfeasibleInstance,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("iteration cap {cap} exceeded in the {phase} loop")]
    IterationCapExceeded { phase: Phase, cap: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    #[default]
    Greedy,
    Full,
}

impl std::str::FromStr for Init {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "greedy" => Ok(Init::Greedy),
            "full" | "full-set" => Ok(Init::Full),
            other => Err(format!("unknown init {other:?}")),
        }
    }
}

impl std::fmt::Display for Init {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Init::Greedy => "greedy",
            Init::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub b: usize,
    pub init: Init,
    /// Defaults to `n`, which the first loop can never exceed.
    pub max_first_loop_iters: Option<usize>,
    /// Replacements per invocation of the second loop; defaults to `cap_factor * n^2`.
    pub max_second_loop_iters: Option<usize>,
    pub cap_factor: usize,
    /// Scan swap candidates on the rayon pool. The chosen swap is the same.
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            b: 2,
            init: Init::Greedy,
            max_first_loop_iters: None,
            max_second_loop_iters: None,
            cap_factor: 4,
            parallel: true,
        }
    }
}

impl SolverConfig {
    pub fn with_b(b: usize) -> Self {
        SolverConfig {
            b,
            ..SolverConfig::default()
        }
    }

    /// `b = ceil(alpha / epsilon^2)`, clamped to [`MAX_B`].
    pub fn b_from_epsilon(epsilon: &Scalar, alpha: &Scalar) -> Result<usize, SolverError> {
        if !epsilon.is_positive() || !alpha.is_positive() {
            return Err(SolverError::InvalidConfig("epsilon and alpha must be positive".into()));
        }
        let raw = (alpha / &(epsilon * epsilon)).ceil_int();
        let cap = num_bigint::BigInt::from(MAX_B);
        if raw > cap {
            log::warn!("epsilon {epsilon} asks for b = {raw}; capping at {MAX_B}");
            return Ok(MAX_B);
        }
        Ok(usize::try_from(raw).expect("small").max(1))
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.b == 0 {
            return Err(SolverError::InvalidConfig("b must be at least 1".into()));
        }
        if self.cap_factor == 0 {
            return Err(SolverError::InvalidConfig("cap factor must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Swap,
    Replacement,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Phase::Swap => "swap",
            Phase::Replacement => "replacement",
        })
    }
}

/// One accepted move. `witness` is the number of elements that only the
/// removed objects covered, i.e. what the added objects had to take over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub phase: Phase,
    pub round: usize,
    pub removed: Vec<usize>,
    pub added: Vec<usize>,
    pub witness: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapTrace {
    pub initial_size: usize,
    pub final_size: usize,
    /// Outer rounds after the first; each re-ran the swap loop after replacements.
    pub extra_rounds: usize,
    /// Whether a re-run of the swap loop found an improvement.
    pub extra_rounds_needed: bool,
    pub entries: Vec<TraceEntry>,
}

impl SwapTrace {
    pub fn swaps(&self) -> usize {
        self.entries.iter().filter(|e| e.phase == Phase::Swap).count()
    }

    pub fn replacements(&self) -> usize {
        self.entries.iter().filter(|e| e.phase == Phase::Replacement).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("trace serializes");
        s.push('\n');
        s
    }
}

/// An instance prepared for the search.
///
/// Objects identical to a lower-indexed one are marked inactive: they may stay
/// in a solution but are never added to one.
#[derive(Debug, Clone)]
pub struct Problem {
    polys: Vec<ConvexPolygon>,
    system: SetSystem,
    active: Vec<bool>,
}

impl Problem {
    pub fn new(instance: &Instance) -> Self {
        let polys = instance.polygons();
        let system = SetSystem::from_instance(instance);
        let mut seen = HashSet::new();
        let active = polys.iter().map(|p| seen.insert(p.clone())).collect();
        Problem { polys, system, active }
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polygons(&self) -> &[ConvexPolygon] {
        &self.polys
    }

    pub fn system(&self) -> &SetSystem {
        &self.system
    }

    pub fn is_active(&self, o: usize) -> bool {
        self.active[o]
    }
}

pub fn initial_solution(problem: &Problem, config: &SolverConfig) -> Result<Vec<usize>, SolverError> {
    let all: Vec<usize> = (0..problem.len()).collect();
    if !problem.system.is_feasible(&all) {
        return Err(SolverError::InfeasibleInstance);
    }
    Ok(match config.init {
        Init::Full => all,
        Init::Greedy => greedy(&problem.system),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Swap {
    pub removed: Vec<usize>,
    pub added: Vec<usize>,
    pub witness: usize,
}

/// Advances `c` (strictly increasing, values `< n`) to the next combination.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

struct SwapScan<'a> {
    problem: &'a Problem,
    selected: &'a [usize],
    counts: Vec<u32>,
    in_sel: Vec<bool>,
}

impl SwapScan<'_> {
    fn try_remove(&self, x: &[usize]) -> Option<Swap> {
        let sys = &self.problem.system;
        let mut touched: Vec<usize> = x.iter().flat_map(|&o| sys.covers(o).iter().copied()).collect();
        touched.sort_unstable();
        let lost: Vec<usize> = touched
            .chunk_by(|a, b| a == b)
            .filter(|run| run.len() as u32 == self.counts[run[0]])
            .map(|run| run[0])
            .collect();
        if lost.is_empty() {
            return Some(Swap {
                removed: x.to_vec(),
                added: Vec::new(),
                witness: 0,
            });
        }
        // Any useful replacement object covers some lost element.
        let mut cands: Vec<usize> = lost
            .iter()
            .flat_map(|&e| sys.covered_by(e).iter().copied())
            .filter(|&o| !self.in_sel[o] && self.problem.active[o])
            .collect();
        cands.sort_unstable();
        cands.dedup();
        for k in 1..x.len() {
            if k > cands.len() {
                break;
            }
            let mut c: Vec<usize> = (0..k).collect();
            loop {
                let ok = lost
                    .iter()
                    .all(|e| c.iter().any(|&i| sys.covers(cands[i]).binary_search(e).is_ok()));
                if ok {
                    return Some(Swap {
                        removed: x.to_vec(),
                        added: c.iter().map(|&i| cands[i]).collect(),
                        witness: lost.len(),
                    });
                }
                if !next_combination(&mut c, cands.len()) {
                    break;
                }
            }
        }
        None
    }
}

/// The lexicographically first improving swap: `X` by size, then by index
/// order, and `X'` likewise. `selected` must be sorted.
pub fn improving_swap(problem: &Problem, selected: &[usize], b: usize, parallel: bool) -> Option<Swap> {
    let mut in_sel = vec![false; problem.len()];
    for &o in selected {
        in_sel[o] = true;
    }
    let scan = SwapScan {
        problem,
        selected,
        counts: problem.system.coverage_counts(selected),
        in_sel,
    };
    const CHUNK: usize = 2048;
    let m = selected.len();
    for size in 1..=b.min(m) {
        let mut c: Vec<usize> = (0..size).collect();
        let mut more = true;
        while more {
            let mut batch: Vec<Vec<usize>> = Vec::with_capacity(CHUNK);
            while more && batch.len() < CHUNK {
                batch.push(c.iter().map(|&i| scan.selected[i]).collect());
                more = next_combination(&mut c, m);
            }
            let hit = if parallel {
                batch.par_iter().find_map_first(|x| scan.try_remove(x))
            } else {
                batch.iter().find_map(|x| scan.try_remove(x))
            };
            if hit.is_some() {
                return hit;
            }
        }
    }
    None
}

fn apply(selected: &mut Vec<usize>, removed: &[usize], added: &[usize]) {
    selected.retain(|o| !removed.contains(o));
    selected.extend_from_slice(added);
    selected.sort_unstable();
}

/// Second loop: replaces the lowest `Q` whose cover-free region fits inside
/// the lowest unselected `R`. A replacement that would recreate an earlier
/// solution of this run is skipped, so `Q` and `R` cannot trade places forever.
pub fn containment_replacement(
    problem: &Problem,
    selected: &[usize],
    cap: usize,
    round: usize,
) -> Result<(Vec<usize>, Vec<TraceEntry>), SolverError> {
    let mut s = selected.to_vec();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(s.clone());
    let mut entries = Vec::new();
    'outer: loop {
        let mut in_sel = vec![false; problem.len()];
        for &o in &s {
            in_sel[o] = true;
        }
        for &q in &s {
            let cf = cover_free_region(q, &s, &problem.polys);
            for r in 0..problem.len() {
                if in_sel[r] || !problem.active[r] || !cf.contained_in(&problem.polys[r]) {
                    continue;
                }
                let mut next = s.clone();
                apply(&mut next, &[q], &[r]);
                if seen.contains(&next) {
                    continue;
                }
                if entries.len() == cap {
                    return Err(SolverError::IterationCapExceeded {
                        phase: Phase::Replacement,
                        cap,
                    });
                }
                let counts = problem.system.coverage_counts(&s);
                let witness = problem.system.covers(q).iter().filter(|&&e| counts[e] == 1).count();
                assert!(
                    problem.system.is_feasible(&next),
                    "replacement {q} -> {r} lost feasibility"
                );
                log::trace!("replace {q} by {r}");
                entries.push(TraceEntry {
                    phase: Phase::Replacement,
                    round,
                    removed: vec![q],
                    added: vec![r],
                    witness,
                });
                seen.insert(next.clone());
                s = next;
                continue 'outer;
            }
        }
        return Ok((s, entries));
    }
}

fn swap_loop(
    problem: &Problem,
    s: &mut Vec<usize>,
    config: &SolverConfig,
    round: usize,
    trace: &mut SwapTrace,
) -> Result<usize, SolverError> {
    let cap = config.max_first_loop_iters.unwrap_or(problem.len());
    let mut done = 0;
    while let Some(swap) = improving_swap(problem, s, config.b, config.parallel) {
        if done == cap {
            return Err(SolverError::IterationCapExceeded {
                phase: Phase::Swap,
                cap,
            });
        }
        let before = s.len();
        apply(s, &swap.removed, &swap.added);
        assert!(s.len() < before, "swap did not shrink the solution");
        assert!(problem.system.is_feasible(s), "swap lost feasibility");
        log::trace!("swap {:?} -> {:?}", swap.removed, swap.added);
        trace.entries.push(TraceEntry {
            phase: Phase::Swap,
            round,
            removed: swap.removed,
            added: swap.added,
            witness: swap.witness,
        });
        done += 1;
    }
    Ok(done)
}

pub fn local_search_problem(problem: &Problem, config: &SolverConfig) -> Result<(Solution, SwapTrace), SolverError> {
    config.validate()?;
    let mut s = initial_solution(problem, config)?;
    let n = problem.len();
    let cap = config.max_second_loop_iters.unwrap_or(config.cap_factor * n * n);
    let mut trace = SwapTrace {
        initial_size: s.len(),
        ..SwapTrace::default()
    };
    let mut round = 0;
    loop {
        let swaps = swap_loop(problem, &mut s, config, round, &mut trace)?;
        if round > 0 {
            if swaps == 0 {
                break;
            }
            trace.extra_rounds_needed = true;
        }
        let (next, entries) = containment_replacement(problem, &s, cap, round)?;
        s = next;
        if entries.is_empty() {
            break;
        }
        trace.entries.extend(entries);
        round += 1;
    }
    trace.final_size = s.len();
    trace.extra_rounds = round;
    log::debug!(
        "local search: {} -> {} with {} swaps, {} replacements",
        trace.initial_size,
        trace.final_size,
        trace.swaps(),
        trace.replacements()
    );
    let mut sol = Solution::new(s, "local-search")
        .with_param("b", config.b)
        .with_param("init", config.init)
        .with_param("replacements", trace.replacements())
        .with_param("rounds", round + 1);
    sol.meta.swap_count = trace.swaps();
    Ok((sol, trace))
}

pub fn local_search(instance: &Instance, config: &SolverConfig) -> Result<(Solution, SwapTrace), SolverError> {
    local_search_problem(&Problem::new(instance), config)
}

type FeasibleFn = Box<dyn Fn(&[usize]) -> bool + Sync>;

/// Exhaustive check that no `X` of size at most `b` in `selected` and `X'` of
/// size below `|X|` outside it give a feasible `(selected \ X) + X'`.
///
/// Deliberately shares nothing with the swap search: feasibility is decided
/// from the raw geometry and every `X'` is tried.
pub fn audit_b_local_optimality(instance: &Instance, selected: &[usize], b: usize) -> bool {
    let polys = instance.polygons();
    let n = polys.len();
    let feasible: FeasibleFn = match instance {
        Instance::Domination(_) => {
            let graph = build_graph_from(&polys);
            Box::new(move |sel: &[usize]| is_dominating(&graph, sel))
        }
        Instance::Cover(c) => {
            let member: Vec<Vec<bool>> = c
                .points
                .iter()
                .map(|p| c.objects.iter().map(|o| o.covers_point(p)).collect())
                .collect();
            Box::new(move |sel: &[usize]| member.iter().all(|row| sel.iter().any(|&o| row[o])))
        }
    };
    let inside: Vec<usize> = selected.iter().copied().sorted().dedup().collect();
    let outside: Vec<usize> = (0..n).filter(|o| !inside.contains(o)).collect();
    (1..=b.min(inside.len())).all(|k| {
        let xs: Vec<Vec<usize>> = inside.iter().copied().combinations(k).collect();
        !xs.par_iter().any(|x| {
            let rest: Vec<usize> = inside.iter().copied().filter(|o| !x.contains(o)).collect();
            (0..k).any(|m| {
                outside.iter().copied().combinations(m).any(|xp| {
                    let mut cand = rest.clone();
                    cand.extend(xp);
                    feasible(&cand)
                })
            })
        })
    })
}
