//! Intersection graphs, feasibility predicates and cover-free regions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{ConvexPolygon, Region};
use crate::instances::{CoverInstance, Instance};

/// Closed-set intersection graph: `i ~ j` iff the polygons share a point.
/// Every vertex implicitly dominates itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl IntersectionGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        IntersectionGraph { n, adj }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Neighbours of `v`, sorted, excluding `v` itself.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a == b || self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// `N[v]`, sorted.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut out = self.adj[v].clone();
        let pos = out.binary_search(&v).unwrap_err();
        out.insert(pos, v);
        out
    }
}

/// Dense O(n^2) construction from explicit polygons.
pub fn build_graph_from(polys: &[ConvexPolygon]) -> IntersectionGraph {
    let n = polys.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).filter(|&j| j != i && polys[i].touches(&polys[j])).collect())
        .collect();
    IntersectionGraph { n, adj }
}

pub fn build_graph(instance: &Instance) -> IntersectionGraph {
    build_graph_from(&instance.polygons())
}

/// Free-form provenance attached to a solution.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionMeta {
    pub solver: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default)]
    pub swap_count: usize,
    /// Only filled on request so solution files stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

/// A sorted, duplicate-free subset of object indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub indices: Vec<usize>,
    pub meta: SolutionMeta,
}

impl Solution {
    pub fn new(mut indices: Vec<usize>, solver: &str) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Solution {
            indices,
            meta: SolutionMeta {
                solver: solver.to_string(),
                ..SolutionMeta::default()
            },
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// On-disk form of a solution, tied to an instance by hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub instance_hash: String,
    pub indices: Vec<usize>,
    pub meta: SolutionMeta,
}

impl SolutionFile {
    pub fn new(instance: &Instance, sol: &Solution) -> Self {
        SolutionFile {
            instance_hash: crate::instances::instance_hash(instance),
            indices: sol.indices.clone(),
            meta: sol.meta.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("solution serializes");
        s.push('\n');
        s
    }

    pub fn solution(&self) -> Solution {
        Solution {
            indices: self.indices.clone(),
            meta: self.meta.clone(),
        }
    }
}

/// Every vertex is selected or adjacent to a selected vertex.
pub fn is_dominating(graph: &IntersectionGraph, selected: &[usize]) -> bool {
    let mut dominated = vec![false; graph.len()];
    for &s in selected {
        dominated[s] = true;
        for &t in graph.neighbors(s) {
            dominated[t] = true;
        }
    }
    dominated.into_iter().all(|d| d)
}

/// Indices of points outside the closed union of the selected objects.
pub fn uncovered_points(instance: &CoverInstance, selected: &[usize]) -> Vec<usize> {
    instance
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| !selected.iter().any(|&s| instance.objects[s].covers_point(p)))
        .map(|(k, _)| k)
        .collect()
}

pub fn covers(instance: &CoverInstance, selected: &[usize]) -> bool {
    uncovered_points(instance, selected).is_empty()
}

/// Feasibility of `selected` for either problem.
pub fn is_feasible(instance: &Instance, selected: &[usize]) -> bool {
    match instance {
        Instance::Domination(_) => is_dominating(&build_graph(instance), selected),
        Instance::Cover(c) => covers(c, selected),
    }
}

/// `polys[i]` minus the interiors of every other selected polygon.
pub fn cover_free_region(i: usize, selected: &[usize], polys: &[ConvexPolygon]) -> Region {
    let me = &polys[i];
    let mut region = Region::from_polygon(me.clone());
    for &j in selected {
        if j == i || !me.interiors_intersect(&polys[j]) {
            continue;
        }
        region = region.subtract(&polys[j]);
        if region.is_empty() {
            break;
        }
    }
    region
}

/// Drops objects covered by the union of the others (lowest index first)
/// until the family is cover-free; returns the kept indices.
pub fn cover_free_subfamily(polys: &[ConvexPolygon]) -> Vec<usize> {
    let mut kept: Vec<usize> = (0..polys.len()).collect();
    loop {
        let covered = kept.iter().position(|&i| cover_free_region(i, &kept, polys).is_empty());
        match covered {
            Some(pos) => {
                kept.remove(pos);
            }
            None => return kept,
        }
    }
}

/// JSON feasibility report for a solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub kind: String,
    pub size: usize,
    pub feasible: bool,
    /// Undominated vertices or uncovered points.
    pub missing: Vec<usize>,
}

pub fn feasibility_report(instance: &Instance, selected: &[usize]) -> FeasibilityReport {
    let missing = match instance {
        Instance::Domination(_) => {
            let g = build_graph(instance);
            let mut dominated = vec![false; g.len()];
            for &s in selected {
                dominated[s] = true;
                for &t in g.neighbors(s) {
                    dominated[t] = true;
                }
            }
            dominated
                .iter()
                .enumerate()
                .filter(|(_, d)| !**d)
                .map(|(k, _)| k)
                .collect()
        }
        Instance::Cover(c) => uncovered_points(c, selected),
    };
    FeasibilityReport {
        kind: instance.kind().to_string(),
        size: selected.len(),
        feasible: missing.is_empty(),
        missing,
    }
}
