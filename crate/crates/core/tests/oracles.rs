mod common;

use swapcover::baselines::{exact_solution, greedy_solution, OracleBudget};
use swapcover::decomposition::{disjoint_union_decomposition, verify_decomposition};
use swapcover::feasibility::{cover_free_subfamily, is_feasible};
use swapcover::geometry::{ConvexPolygon, Scalar};
use swapcover::instances::{
    gen_cover, gen_domination, gen_pseudodisk_family, CoverParams, DominationParams, Instance, ObjectKind, ShapeKind,
};
use swapcover::solver::{audit_b_local_optimality, local_search, SolverConfig};

fn small_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for seed in 0..12u64 {
        let n = 4 + (seed as usize % 7);
        let shape = if seed % 2 == 0 {
            ShapeKind::Square
        } else {
            ShapeKind::Regular { k: 5 }
        };
        let p = DominationParams::new(n, shape.clone()).with_extent(Scalar::from_int(4));
        out.push(Instance::Domination(gen_domination(&p, seed).unwrap()));
        let p = CoverParams::new(n, 2 * n, ObjectKind::Homothets { shape }).with_extent(Scalar::from_int(4));
        out.push(Instance::Cover(gen_cover(&p, seed).unwrap()));
    }
    out
}

#[test]
fn exact_matches_exhaustive_enumeration() {
    for inst in small_instances() {
        let exact = exact_solution(&inst, &OracleBudget::default()).unwrap();
        let brute = common::brute_min_cover(&inst).unwrap();
        assert_eq!(exact.indices, brute);
    }
}

#[test]
fn heuristics_are_feasible_and_locally_optimal() {
    for inst in small_instances() {
        let opt = common::brute_min_cover(&inst).unwrap().len();
        let greedy = greedy_solution(&inst);
        assert!(is_feasible(&inst, &greedy.indices));
        for b in 1..=3 {
            let (sol, trace) = local_search(&inst, &SolverConfig::with_b(b)).unwrap();
            assert!(is_feasible(&inst, &sol.indices));
            assert!(audit_b_local_optimality(&inst, &sol.indices, b));
            assert!(sol.len() >= opt && sol.len() <= greedy.len());
            assert_eq!(trace.final_size, sol.len());
        }
    }
}

#[test]
fn raw_geometry_oracle_agrees_with_library_predicates() {
    for inst in small_instances() {
        let polys = inst.polygons();
        for a in &polys {
            for b in &polys {
                assert_eq!(common::meet(a, b), a.touches(b));
            }
        }
    }
}

#[test]
fn random_cover_free_families_decompose() {
    for seed in 0..6u64 {
        let kind = match seed % 3 {
            0 => ObjectKind::Rectangles,
            1 => ObjectKind::Homothets {
                shape: ShapeKind::Regular { k: 6 },
            },
            _ => ObjectKind::Homothets {
                shape: ShapeKind::Square,
            },
        };
        let p = CoverParams::new(8, 0, kind).with_extent(Scalar::from_int(4));
        let polys = gen_pseudodisk_family(&p, seed).unwrap();
        let family: Vec<ConvexPolygon> = cover_free_subfamily(&polys)
            .into_iter()
            .map(|i| polys[i].clone())
            .collect();
        let res = disjoint_union_decomposition(&family).unwrap();
        let rep = verify_decomposition(&family, &res);
        assert!(rep.passed(), "seed {seed}: {rep:?}");
    }
}
