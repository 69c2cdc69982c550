//! Benchmark harness: runs algorithms over generated or inline instances and
//! tabulates sizes against the exact oracle.
//!
//! Rows are computed on the rayon pool and merged back in spec order, so the
//! JSON table is a pure function of the spec unless wall times are requested.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{exact_solution, greedy_solution, BaselineError, OracleBudget};
use crate::feasibility::is_feasible;
use crate::instances::{from_json, gen_cover, gen_domination, CoverParams, DominationParams, Instance};
use crate::solver::{audit_b_local_optimality, local_search, Init, SolverConfig};

pub const BENCH_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BenchError {
    #[error("invalid bench spec: {0}")]
    InvalidSpec(String),
    #[error("malformed bench table: {0}")]
    MalformedTable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum InstanceSource {
    Domination {
        params: DominationParams,
        seeds: Vec<u64>,
    },
    Cover {
        params: CoverParams,
        seeds: Vec<u64>,
    },
    /// An instance document in the usual file format, embedded verbatim.
    Inline {
        name: String,
        instance: serde_json::Value,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "kebab-case")]
pub enum Algorithm {
    Greedy,
    Exact,
    LocalSearch {
        b: usize,
        #[serde(default)]
        init: Init,
    },
}

impl Algorithm {
    pub fn label(&self) -> String {
        match self {
            Algorithm::Greedy => "greedy".into(),
            Algorithm::Exact => "exact".into(),
            Algorithm::LocalSearch { b, init: Init::Greedy } => format!("local-search(b={b})"),
            Algorithm::LocalSearch { b, init } => format!("local-search(b={b},init={init})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    pub max_n: usize,
    pub max_nodes: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        let b = OracleBudget::default();
        OracleLimits {
            max_n: b.max_n,
            max_nodes: b.max_nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub instances: Vec<InstanceSource>,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub oracle: OracleLimits,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Record wall times; makes the table nondeterministic.
    #[serde(default)]
    pub record_time: bool,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.instances.is_empty() {
            return Err(BenchError::InvalidSpec("no instances".into()));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::InvalidSpec("no algorithms".into()));
        }
        for (g, src) in self.instances.iter().enumerate() {
            let seeds = match src {
                InstanceSource::Domination { seeds, .. } | InstanceSource::Cover { seeds, .. } => seeds,
                InstanceSource::Inline { .. } => continue,
            };
            if seeds.is_empty() {
                return Err(BenchError::InvalidSpec(format!("group {g} has no seeds")));
            }
            let mut seen = HashSet::new();
            if let Some(s) = seeds.iter().find(|s| !seen.insert(**s)) {
                return Err(BenchError::InvalidSpec(format!("group {g} repeats seed {s}")));
            }
        }
        for a in &self.algorithms {
            if let Algorithm::LocalSearch { b, .. } = a {
                SolverConfig::with_b(*b)
                    .validate()
                    .map_err(|e| BenchError::InvalidSpec(e.to_string()))?;
            }
        }
        Ok(())
    }

    fn budget(&self) -> OracleBudget {
        OracleBudget {
            max_n: self.oracle.max_n,
            max_nodes: self.oracle.max_nodes,
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub algorithm: String,
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    pub feasible: bool,
    /// Only for local search, re-checked by the independent audit.
    pub audit: Option<bool>,
    pub opt: Option<usize>,
    pub ratio: Option<f64>,
    pub error: Option<String>,
}

impl BenchRow {
    pub fn accepted(&self) -> bool {
        self.error.is_none() && self.feasible && self.audit != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub rows: usize,
    pub errors: usize,
    pub mean_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub version: u32,
    pub rows: Vec<BenchRow>,
    pub summary: Vec<AlgorithmSummary>,
}

struct Job {
    id: String,
    build: Result<Instance, String>,
}

fn expand(spec: &BenchSpec) -> Vec<(String, InstanceSource, Option<u64>)> {
    let mut out = Vec::new();
    for (g, src) in spec.instances.iter().enumerate() {
        match src {
            InstanceSource::Domination { seeds, .. } => {
                out.extend(seeds.iter().map(|&s| (format!("dom{g}-s{s}"), src.clone(), Some(s))));
            }
            InstanceSource::Cover { seeds, .. } => {
                out.extend(seeds.iter().map(|&s| (format!("cov{g}-s{s}"), src.clone(), Some(s))));
            }
            InstanceSource::Inline { name, .. } => out.push((name.clone(), src.clone(), None)),
        }
    }
    out
}

fn build(src: &InstanceSource, seed: Option<u64>) -> Result<Instance, String> {
    let seed = seed.unwrap_or(0);
    match src {
        InstanceSource::Domination { params, .. } => gen_domination(params, seed)
            .map(Instance::Domination)
            .map_err(|e| e.to_string()),
        InstanceSource::Cover { params, .. } => gen_cover(params, seed).map(Instance::Cover).map_err(|e| e.to_string()),
        InstanceSource::Inline { instance, .. } => from_json(&instance.to_string()).map_err(|e| e.to_string()),
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn ratio(size: usize, opt: usize) -> f64 {
    if opt == 0 {
        1.0
    } else {
        size as f64 / opt as f64
    }
}

fn run_instance(spec: &BenchSpec, job: &Job) -> Vec<BenchRow> {
    let blank = |algorithm: String, n: usize, error: String| BenchRow {
        instance: job.id.clone(),
        n,
        algorithm,
        size: None,
        wall_time_ms: None,
        feasible: false,
        audit: None,
        opt: None,
        ratio: None,
        error: Some(error),
    };
    let instance = match &job.build {
        Ok(i) => i,
        Err(e) => return spec.algorithms.iter().map(|a| blank(a.label(), 0, e.clone())).collect(),
    };
    let n = instance.len();
    let started = Instant::now();
    let oracle = exact_solution(instance, &spec.budget());
    let oracle_ms = ms(started.elapsed());
    if let Err(e) = &oracle {
        log::info!("{}: oracle unavailable ({e})", job.id);
    }
    let opt = oracle.as_ref().ok().map(|s| s.len());

    spec.algorithms
        .iter()
        .map(|algo| {
            let started = Instant::now();
            let outcome: Result<(Vec<usize>, Option<usize>), String> = match algo {
                Algorithm::Greedy => Ok((greedy_solution(instance).indices, None)),
                Algorithm::Exact => oracle
                    .as_ref()
                    .map(|s| (s.indices.clone(), None))
                    .map_err(BaselineError::to_string),
                Algorithm::LocalSearch { b, init } => {
                    let cfg = SolverConfig {
                        init: *init,
                        ..SolverConfig::with_b(*b)
                    };
                    local_search(instance, &cfg)
                        .map(|(s, _)| (s.indices, Some(*b)))
                        .map_err(|e| e.to_string())
                }
            };
            let elapsed = match algo {
                Algorithm::Exact => oracle_ms,
                _ => ms(started.elapsed()),
            };
            match outcome {
                Err(e) => blank(algo.label(), n, e),
                Ok((sel, audit_b)) => BenchRow {
                    instance: job.id.clone(),
                    n,
                    algorithm: algo.label(),
                    size: Some(sel.len()),
                    wall_time_ms: spec.record_time.then_some(elapsed),
                    feasible: is_feasible(instance, &sel),
                    audit: audit_b.map(|b| audit_b_local_optimality(instance, &sel, b)),
                    opt,
                    ratio: opt.map(|o| ratio(sel.len(), o)),
                    error: None,
                },
            }
        })
        .collect()
}

fn summarise(spec: &BenchSpec, rows: &[BenchRow]) -> Vec<AlgorithmSummary> {
    spec.algorithms
        .iter()
        .map(|a| {
            let label = a.label();
            let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.algorithm == label).collect();
            let ratios: Vec<f64> = mine.iter().filter_map(|r| r.ratio).collect();
            AlgorithmSummary {
                algorithm: label,
                rows: mine.len(),
                errors: mine.iter().filter(|r| r.error.is_some()).count(),
                mean_ratio: (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
                max_ratio: ratios.iter().copied().reduce(f64::max),
            }
        })
        .collect()
}

/// Solves every (instance, algorithm) pair. Per-row failures land in the
/// row's `error` column; only an invalid spec fails the whole run.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchTable, BenchError> {
    spec.validate()?;
    let jobs: Vec<Job> = expand(spec)
        .into_par_iter()
        .map(|(id, src, seed)| Job {
            build: build(&src, seed),
            id,
        })
        .collect();
    let rows: Vec<BenchRow> = jobs
        .par_iter()
        .map(|job| run_instance(spec, job))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let summary = summarise(spec, &rows);
    Ok(BenchTable {
        version: BENCH_SCHEMA_VERSION,
        rows,
        summary,
    })
}

impl BenchTable {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        text_table(&self.to_json()).expect("own JSON parses")
    }
}

fn opt_str<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

fn opt_f(v: Option<f64>, digits: usize) -> String {
    v.map(|x| format!("{x:.digits$}")).unwrap_or_else(|| "-".into())
}

/// Aligned text rendering of a JSON bench table.
pub fn text_table(json: &str) -> Result<String, BenchError> {
    let table: BenchTable = serde_json::from_str(json).map_err(|e| BenchError::MalformedTable(e.to_string()))?;
    if table.version != BENCH_SCHEMA_VERSION {
        return Err(BenchError::MalformedTable(format!(
            "unsupported version {}",
            table.version
        )));
    }
    let timed = table.rows.iter().any(|r| r.wall_time_ms.is_some());
    let mut header = vec![
        "instance",
        "n",
        "algorithm",
        "size",
        "opt",
        "ratio",
        "feasible",
        "audit",
    ];
    if timed {
        header.push("ms");
    }
    header.push("error");
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in &table.rows {
        let mut line = vec![
            r.instance.clone(),
            r.n.to_string(),
            r.algorithm.clone(),
            opt_str(&r.size),
            opt_str(&r.opt),
            opt_f(r.ratio, 3),
            r.feasible.to_string(),
            opt_str(&r.audit),
        ];
        if timed {
            line.push(opt_f(r.wall_time_ms, 1));
        }
        line.push(r.error.clone().unwrap_or_default());
        cells.push(line);
    }
    let mut out = String::new();
    write_aligned(&mut out, &cells);
    out.push('\n');
    let mut cells = vec![["algorithm", "rows", "errors", "mean ratio", "max ratio"]
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()];
    for s in &table.summary {
        cells.push(vec![
            s.algorithm.clone(),
            s.rows.to_string(),
            s.errors.to_string(),
            opt_f(s.mean_ratio, 4),
            opt_f(s.max_ratio, 4),
        ]);
    }
    write_aligned(&mut out, &cells);
    Ok(out)
}

fn write_aligned(out: &mut String, cells: &[Vec<String>]) {
    let cols = cells.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            cells
                .iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in cells {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            let _ = write!(line, "{cell:<w$}", w = widths[c]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, Scalar};
    use crate::instances::{to_json, DominationInstance, Homothet, ShapeKind};

    fn squares(xs: &[(i64, i64)]) -> Instance {
        let base = ShapeKind::Square.base_shape().unwrap();
        let hs = xs
            .iter()
            .map(|&(x, d)| Homothet {
                center: Point::rat(x, d, 0, 1),
                scale: Scalar::from_int(2),
            })
            .collect();
        Instance::Domination(DominationInstance::new(base, hs).unwrap())
    }

    fn inline(name: &str, inst: &Instance) -> InstanceSource {
        InstanceSource::Inline {
            name: name.into(),
            instance: serde_json::from_str(&to_json(inst)).unwrap(),
        }
    }

    fn all_algos() -> Vec<Algorithm> {
        vec![
            Algorithm::Exact,
            Algorithm::Greedy,
            Algorithm::LocalSearch {
                b: 2,
                init: Init::Greedy,
            },
        ]
    }

    #[test]
    fn chain_instance() {
        // Side-2 squares at x = 0, 3/2, 3: the middle one dominates the rest.
        let spec = BenchSpec {
            instances: vec![inline("chain", &squares(&[(0, 1), (3, 2), (3, 1)]))],
            algorithms: all_algos(),
            oracle: OracleLimits::default(),
            output: None,
            record_time: false,
        };
        let table = run_bench(&spec).unwrap();
        assert_eq!(table.rows.len(), 3);
        for r in &table.rows {
            assert_eq!(r.size, Some(1), "{r:?}");
            assert_eq!(r.ratio, Some(1.0));
            assert!(r.accepted());
        }
        assert_eq!(table.rows[2].audit, Some(true));
    }

    #[test]
    fn disjoint_squares() {
        let spec = BenchSpec {
            instances: vec![inline("apart", &squares(&[(0, 1), (5, 1), (10, 1), (15, 1)]))],
            algorithms: all_algos(),
            oracle: OracleLimits::default(),
            output: None,
            record_time: false,
        };
        let table = run_bench(&spec).unwrap();
        assert!(table.rows.iter().all(|r| r.size == Some(4) && r.ratio == Some(1.0)));
    }

    #[test]
    fn oracle_over_budget_keeps_rows() {
        let spec = BenchSpec {
            instances: vec![inline("apart", &squares(&[(0, 1), (5, 1), (10, 1)]))],
            algorithms: all_algos(),
            oracle: OracleLimits {
                max_n: 2,
                max_nodes: 10,
            },
            output: None,
            record_time: false,
        };
        let table = run_bench(&spec).unwrap();
        assert_eq!(table.rows.len(), 3);
        assert!(table.rows[0].error.is_some());
        assert!(table.rows.iter().all(|r| r.ratio.is_none()));
        assert_eq!(table.rows[1].size, Some(3));
        assert!(table.rows[2].accepted());
    }

    #[test]
    fn generated_groups_and_text() {
        let params = DominationParams::new(8, ShapeKind::Square).with_extent(Scalar::from_int(4));
        let spec = BenchSpec {
            instances: vec![InstanceSource::Domination {
                params,
                seeds: vec![1, 2, 3],
            }],
            algorithms: all_algos(),
            oracle: OracleLimits::default(),
            output: None,
            record_time: false,
        };
        let a = run_bench(&spec).unwrap();
        let b = run_bench(&spec).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.rows.len(), 9);
        assert_eq!(a.rows[3].instance, "dom0-s2");
        let text = a.to_text();
        assert!(text.starts_with("instance"));
        assert_eq!(text, text_table(&a.to_json()).unwrap());
        assert!(a.rows.iter().all(|r| r.ratio.unwrap() >= 1.0));
    }

    #[test]
    fn spec_validation() {
        let mut spec = BenchSpec {
            instances: vec![InstanceSource::Domination {
                params: DominationParams::new(3, ShapeKind::Square),
                seeds: vec![1, 1],
            }],
            algorithms: all_algos(),
            oracle: OracleLimits::default(),
            output: None,
            record_time: false,
        };
        assert!(matches!(run_bench(&spec), Err(BenchError::InvalidSpec(_))));
        spec.instances.clear();
        assert!(spec.validate().is_err());
        let bad =
            r#"{"instances":[{"source":"inline","name":"x","instance":{}}],"algorithms":[{"algorithm":"greedy"}]}"#;
        let spec: BenchSpec = serde_json::from_str(bad).unwrap();
        let table = run_bench(&spec).unwrap();
        assert!(table.rows[0].error.is_some());
    }
}
