use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn swapcover(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swapcover"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = swapcover(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Three side-2 squares centred at x = 0, 3/2, 3.
const CHAIN: &str = r#"{
  "version": 1,
  "kind": "domination",
  "base": { "polygon": [["-1/2","-1/2"],["1/2","-1/2"],["1/2","1/2"],["-1/2","1/2"]], "center": ["0","0"] },
  "homothets": [
    { "center": ["0","0"], "scale": "2" },
    { "center": ["3/2","0"], "scale": "2" },
    { "center": ["3","0"], "scale": "2" }
  ]
}"#;

#[test]
fn generate_solve_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen",
            "--problem",
            "domination",
            "--n",
            "15",
            "--extent",
            "4",
            "--seed",
            "3",
            "--out",
            "i.json",
        ],
    );
    for algo in ["local-search", "greedy", "exact"] {
        let sol = format!("{algo}.json");
        ok(d, &["solve", "--in", "i.json", "--algo", algo, "--out", &sol]);
        let report = ok(d, &["verify", "--in", "i.json", "--solution", &sol]);
        assert!(report.contains("\"ok\": true"), "{report}");
    }
    let report = ok(
        d,
        &[
            "verify",
            "--in",
            "i.json",
            "--solution",
            "local-search.json",
            "--audit",
            "2",
        ],
    );
    assert!(report.contains("\"locally_optimal\": true"));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let gen = [
        "gen",
        "--problem",
        "cover",
        "--n",
        "10",
        "--points",
        "25",
        "--shape",
        "regular:5",
        "--extent",
        "4",
    ];
    let a = ok(d, &[&gen[..], &["--seed", "11"]].concat());
    let b = ok(d, &[&gen[..], &["--seed", "11"]].concat());
    assert_eq!(a, b);
    fs::write(d.join("c.json"), &a).unwrap();
    let s1 = ok(d, &["solve", "--in", "c.json", "--trace", "t1.json"]);
    let s2 = ok(d, &["solve", "--in", "c.json", "--trace", "t2.json"]);
    assert_eq!(s1, s2);
    assert_eq!(
        fs::read(d.join("t1.json")).unwrap(),
        fs::read(d.join("t2.json")).unwrap()
    );
    fs::write(d.join("s.json"), &s1).unwrap();
    let r1 = ok(d, &["render", "--in", "c.json", "--solution", "s.json", "--cover-free"]);
    let r2 = ok(d, &["render", "--in", "c.json", "--solution", "s.json", "--cover-free"]);
    assert_eq!(r1, r2);
    assert!(r1.starts_with("<?xml"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("chain.json"), CHAIN).unwrap();

    let out = swapcover(
        d,
        &["solve", "--in", "chain.json", "--init", "full", "--max-swaps", "0"],
    );
    assert_eq!(out.status.code(), Some(2));

    let sol = ok(d, &["solve", "--in", "chain.json", "--init", "full"]);
    assert!(sol.contains("\"indices\": [\n    1\n  ]"), "{sol}");
    let broken = sol.replace("\"indices\": [\n    1\n  ]", "\"indices\": [\n    0\n  ]");
    fs::write(d.join("bad.json"), broken).unwrap();
    let out = swapcover(d, &["verify", "--in", "chain.json", "--solution", "bad.json"]);
    assert_eq!(out.status.code(), Some(3));

    let out = swapcover(d, &["solve", "--in", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn epsilon_maps_to_b() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("chain.json"), CHAIN).unwrap();
    let sol = ok(d, &["solve", "--in", "chain.json", "--epsilon", "1/2"]);
    assert!(sol.contains("\"b\": \"4\""), "{sol}");
    let sol = ok(d, &["solve", "--in", "chain.json", "--epsilon", "1", "--alpha", "2"]);
    assert!(sol.contains("\"b\": \"2\""), "{sol}");
}

#[test]
fn bench_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let spec = format!(
        r#"{{ "instances": [{{ "source": "inline", "name": "chain", "instance": {CHAIN} }}],
             "algorithms": [{{ "algorithm": "exact" }}, {{ "algorithm": "greedy" }},
                            {{ "algorithm": "local-search", "b": 2 }}] }}"#
    );
    fs::write(d.join("spec.json"), spec).unwrap();
    let json = ok(d, &["bench", "--in", "spec.json"]);
    assert_eq!(json.matches("\"size\": 1").count(), 3);
    let text = ok(d, &["bench", "--in", "spec.json", "--text"]);
    assert!(text.lines().next().unwrap().starts_with("instance"));
    assert!(text.contains("local-search(b=2)"));
}

#[test]
fn gauge_queries() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ok(d, &["gauge", "--shape", "square", "--delta", "0,0", "3,-2"]);
    assert!(out.contains("\"delta\": \"3\""), "{out}");
    fs::write(
        d.join("p.json"),
        r#"[["2","-1/2"],["3","-1/2"],["3","1/2"],["2","1/2"]]"#,
    )
    .unwrap();
    let out = ok(d, &["gauge", "--shape", "square", "--dist", "0,0", "p.json"]);
    assert!(out.contains("\"dist\": \"2\""), "{out}");
    assert_eq!(
        swapcover(d, &["gauge", "--shape", "circle", "--delta", "0,0", "1,1"])
            .status
            .code(),
        Some(1)
    );
}

const CROSSING: &str = r#"{
  "version": 1,
  "kind": "cover",
  "objects": [
    [["0","0"],["2","0"],["2","2"],["0","2"]],
    [["1","1"],["3","1"],["3","3"],["1","3"]]
  ],
  "points": [["1/2","1/2"],["5/2","5/2"]]
}"#;

#[test]
fn render_decomposition_has_one_chord_per_cut() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("two.json"), CROSSING).unwrap();
    let svg = ok(d, &["render", "--in", "two.json", "--decomposition"]);
    assert_eq!(svg.matches("class=\"chord\"").count(), 1);
    let report = ok(d, &["verify", "--in", "two.json", "--decomposition"]);
    assert!(report.contains("\"passed\": true"), "{report}");

    // Equal axis-parallel squares in a row share edge stretches.
    fs::write(d.join("chain.json"), CHAIN).unwrap();
    assert_eq!(
        swapcover(d, &["render", "--in", "chain.json", "--decomposition"])
            .status
            .code(),
        Some(1)
    );
}
