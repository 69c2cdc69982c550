//! Both problems as one covering system.
//!
//! Dominating set: elements are the objects themselves and object `i` covers
//! its closed neighbourhood. Set cover: elements are the points and object `i`
//! covers the points in its closed polygon.

use rayon::prelude::*;

use crate::feasibility::{build_graph_from, IntersectionGraph};
use crate::instances::{CoverInstance, Instance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    /// `covers[o]`: sorted elements covered by object `o`.
    covers: Vec<Vec<usize>>,
    /// `covered_by[e]`: sorted objects covering element `e`.
    covered_by: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(n_elements: usize, covers: Vec<Vec<usize>>) -> Self {
        let mut covered_by = vec![Vec::new(); n_elements];
        let mut covers = covers;
        for (o, es) in covers.iter_mut().enumerate() {
            es.sort_unstable();
            es.dedup();
            for &e in es.iter() {
                covered_by[e].push(o);
            }
        }
        SetSystem { covers, covered_by }
    }

    pub fn from_graph(graph: &IntersectionGraph) -> Self {
        let covers = (0..graph.len()).map(|v| graph.closed_neighborhood(v)).collect();
        SetSystem::new(graph.len(), covers)
    }

    pub fn from_cover(instance: &CoverInstance) -> Self {
        let covers = instance
            .objects
            .par_iter()
            .map(|o| {
                instance
                    .points
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| o.covers_point(p))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        SetSystem::new(instance.points.len(), covers)
    }

    pub fn from_instance(instance: &Instance) -> Self {
        match instance {
            Instance::Domination(d) => SetSystem::from_graph(&build_graph_from(&d.polygons())),
            Instance::Cover(c) => SetSystem::from_cover(c),
        }
    }

    pub fn n_objects(&self) -> usize {
        self.covers.len()
    }

    pub fn n_elements(&self) -> usize {
        self.covered_by.len()
    }

    pub fn covers(&self, object: usize) -> &[usize] {
        &self.covers[object]
    }

    pub fn covered_by(&self, element: usize) -> &[usize] {
        &self.covered_by[element]
    }

    /// Per-element coverage multiplicity under `selected`.
    pub fn coverage_counts(&self, selected: &[usize]) -> Vec<u32> {
        let mut counts = vec![0u32; self.n_elements()];
        for &o in selected {
            for &e in &self.covers[o] {
                counts[e] += 1;
            }
        }
        counts
    }

    pub fn is_feasible(&self, selected: &[usize]) -> bool {
        self.coverage_counts(selected).iter().all(|&c| c > 0)
    }
}
