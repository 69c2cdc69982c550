//! Greedy and exact baselines.
//!
//! The exact oracle runs in two passes. The first is a branch-and-bound that
//! finds the optimal cardinality `k`. The second walks subsets in index order
//! (include before exclude) and stops at the first cover of size `k`, which is
//! the lexicographically least optimum. The result is independent of search
//! order in the first pass.

use std::time::{Duration, Instant};

use crate::feasibility::{IntersectionGraph, Solution};
use crate::instances::{CoverInstance, Instance};
use crate::system::SetSystem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BaselineError {
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("instance is infeasible")]
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_n: usize,
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_n: 24,
            max_nodes: 200_000_000,
            time_limit: None,
        }
    }
}

/// Max-gain greedy, ties to the lowest index. Stops early (and returns an
/// infeasible selection) if nothing more can be covered.
pub fn greedy(system: &SetSystem) -> Vec<usize> {
    let mut covered = vec![false; system.n_elements()];
    let mut left = covered.len();
    let mut taken = vec![false; system.n_objects()];
    let mut out = Vec::new();
    while left > 0 {
        let mut best = (0usize, usize::MAX);
        for o in 0..system.n_objects() {
            if taken[o] {
                continue;
            }
            let gain = system.covers(o).iter().filter(|&&e| !covered[e]).count();
            if gain > best.0 {
                best = (gain, o);
            }
        }
        if best.0 == 0 {
            break;
        }
        let o = best.1;
        taken[o] = true;
        out.push(o);
        for &e in system.covers(o) {
            if !covered[e] {
                covered[e] = true;
                left -= 1;
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn greedy_dominating_set(graph: &IntersectionGraph) -> Solution {
    Solution::new(greedy(&SetSystem::from_graph(graph)), "greedy")
}

pub fn greedy_set_cover(instance: &CoverInstance) -> Solution {
    Solution::new(greedy(&SetSystem::from_cover(instance)), "greedy")
}

pub fn greedy_solution(instance: &Instance) -> Solution {
    Solution::new(greedy(&SetSystem::from_instance(instance)), "greedy")
}

struct Search<'a> {
    sys: &'a SetSystem,
    budget: &'a OracleBudget,
    start: Instant,
    nodes: u64,
    counts: Vec<u32>,
    uncovered: usize,
    forbidden: Vec<bool>,
    chosen: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(sys: &'a SetSystem, budget: &'a OracleBudget) -> Self {
        Search {
            sys,
            budget,
            start: Instant::now(),
            nodes: 0,
            counts: vec![0; sys.n_elements()],
            uncovered: sys.n_elements(),
            forbidden: vec![false; sys.n_objects()],
            chosen: Vec::new(),
        }
    }

    fn tick(&mut self) -> Result<(), BaselineError> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(BaselineError::BudgetExceeded(format!(
                "more than {} search nodes",
                self.budget.max_nodes
            )));
        }
        if self.nodes.is_multiple_of(4096) {
            if let Some(limit) = self.budget.time_limit {
                if self.start.elapsed() > limit {
                    return Err(BaselineError::BudgetExceeded(format!("time limit {limit:?}")));
                }
            }
        }
        Ok(())
    }

    fn push(&mut self, o: usize) {
        for &e in self.sys.covers(o) {
            if self.counts[e] == 0 {
                self.uncovered -= 1;
            }
            self.counts[e] += 1;
        }
        self.chosen.push(o);
    }

    fn pop(&mut self) {
        let o = self.chosen.pop().expect("pop on empty selection");
        for &e in self.sys.covers(o) {
            self.counts[e] -= 1;
            if self.counts[e] == 0 {
                self.uncovered += 1;
            }
        }
    }

    fn gain(&self, o: usize) -> usize {
        self.sys.covers(o).iter().filter(|&&e| self.counts[e] == 0).count()
    }

    /// Objects still needed, at least: uncovered / best single gain.
    fn lower_bound(&self, allowed: impl Fn(usize) -> bool) -> Option<usize> {
        if self.uncovered == 0 {
            return Some(0);
        }
        let max_gain = (0..self.sys.n_objects())
            .filter(|&o| allowed(o))
            .map(|o| self.gain(o))
            .max()
            .unwrap_or(0);
        if max_gain == 0 {
            None
        } else {
            Some(self.uncovered.div_ceil(max_gain))
        }
    }

    /// Lowers `best` to the size of any smaller cover below this node.
    fn optimise(&mut self, best: &mut usize) -> Result<(), BaselineError> {
        self.tick()?;
        if self.uncovered == 0 {
            *best = (*best).min(self.chosen.len());
            return Ok(());
        }
        let forbidden = self.forbidden.clone();
        let lb = match self.lower_bound(|o| !forbidden[o]) {
            Some(lb) => lb,
            None => return Ok(()),
        };
        if self.chosen.len() + lb >= *best {
            return Ok(());
        }
        // Branch on the uncovered element with the fewest remaining options.
        let mut pivot: Option<(usize, usize)> = None;
        for e in 0..self.sys.n_elements() {
            if self.counts[e] > 0 {
                continue;
            }
            let opts = self.sys.covered_by(e).iter().filter(|&&o| !self.forbidden[o]).count();
            if pivot.is_none_or(|(_, c)| opts < c) {
                pivot = Some((e, opts));
            }
        }
        let (e, opts) = pivot.expect("an uncovered element exists");
        if opts == 0 {
            return Ok(());
        }
        let mut options: Vec<usize> = self
            .sys
            .covered_by(e)
            .iter()
            .copied()
            .filter(|&o| !self.forbidden[o])
            .collect();
        options.sort_by_key(|&o| (std::cmp::Reverse(self.gain(o)), o));
        let mut banned = Vec::new();
        for o in options {
            self.push(o);
            let r = self.optimise(best);
            self.pop();
            r?;
            self.forbidden[o] = true;
            banned.push(o);
        }
        for o in banned {
            self.forbidden[o] = false;
        }
        Ok(())
    }

    /// Include-first walk in index order for a cover of exactly `k` objects.
    fn first_of_size(&mut self, next: usize, k: usize) -> Result<bool, BaselineError> {
        self.tick()?;
        if self.uncovered == 0 {
            return Ok(true);
        }
        if self.chosen.len() == k || next == self.sys.n_objects() {
            return Ok(false);
        }
        let lb = match self.lower_bound(|o| o >= next) {
            Some(lb) => lb,
            None => return Ok(false),
        };
        if self.chosen.len() + lb > k {
            return Ok(false);
        }
        self.push(next);
        if self.first_of_size(next + 1, k)? {
            return Ok(true);
        }
        self.pop();
        self.first_of_size(next + 1, k)
    }
}

/// Minimum cover of `system`, lexicographically least among minima.
pub fn exact_min_cover(system: &SetSystem, budget: &OracleBudget) -> Result<Vec<usize>, BaselineError> {
    if system.n_objects() > budget.max_n {
        return Err(BaselineError::BudgetExceeded(format!(
            "n = {} exceeds max_n = {}",
            system.n_objects(),
            budget.max_n
        )));
    }
    let incumbent = greedy(system);
    if !system.is_feasible(&incumbent) {
        return Err(BaselineError::Infeasible);
    }
    let mut best = incumbent.len();
    let mut search = Search::new(system, budget);
    search.optimise(&mut best)?;
    let nodes = search.nodes;
    let mut search = Search::new(system, budget);
    search.nodes = nodes;
    let found = search.first_of_size(0, best)?;
    assert!(found, "a cover of the optimal size must exist");
    log::debug!("exact oracle: optimum {best} after {} nodes", search.nodes);
    Ok(search.chosen)
}

pub fn exact_min_dominating_set(graph: &IntersectionGraph, budget: &OracleBudget) -> Result<Solution, BaselineError> {
    let sel = exact_min_cover(&SetSystem::from_graph(graph), budget)?;
    Ok(Solution::new(sel, "exact"))
}

pub fn exact_min_set_cover(instance: &CoverInstance, budget: &OracleBudget) -> Result<Solution, BaselineError> {
    let sel = exact_min_cover(&SetSystem::from_cover(instance), budget)?;
    Ok(Solution::new(sel, "exact"))
}

pub fn exact_solution(instance: &Instance, budget: &OracleBudget) -> Result<Solution, BaselineError> {
    let sel = exact_min_cover(&SetSystem::from_instance(instance), budget)?;
    Ok(Solution::new(sel, "exact"))
}
