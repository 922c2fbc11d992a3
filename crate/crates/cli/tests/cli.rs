use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use netalign::netfile::parse_network;

fn netalign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netalign"))
        .args(args)
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("netalign-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn gen(kind: &str, seed: u64, name: &str) -> PathBuf {
    let path = scratch(name);
    let out = netalign(&[
        "--seed",
        &seed.to_string(),
        "gen",
        "--kind",
        kind,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn gen_is_byte_identical_per_seed() {
    for kind in ["degenerate", "feasible", "random-layered"] {
        let a = std::fs::read(gen(kind, 5, &format!("{kind}-a.json"))).unwrap();
        let b = std::fs::read(gen(kind, 5, &format!("{kind}-b.json"))).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        let net = parse_network(&text).unwrap();
        assert_eq!(netalign::NetworkFile::from_network(&net).to_json(), text);
    }
    let stdout = netalign(&["--seed", "5", "gen", "--kind", "degenerate"]).stdout;
    assert_eq!(stdout, std::fs::read(scratch("degenerate-a.json")).unwrap());
}

#[test]
fn analyze_exit_codes() {
    let deg = gen("degenerate", 1, "an-deg.json");
    let out = netalign(&["analyze", p(&deg)]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("gtc1  FAIL  [S1^S2 at"), "{text}");

    let feas = gen("feasible", 1, "an-feas.json");
    let out = netalign(&["--json", "analyze", "--mc", p(&feas)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["gtc1", "gtc2", "gtc2a", "gtc3", "gtc3a", "gtc4", "gtc4a"] {
        assert_eq!(v[key]["holds"], true, "{key}");
    }
    assert_eq!(v["feasible"], true);
    assert_eq!(v["monte_carlo"]["consistent"], true);
    assert_eq!(
        v["monte_carlo"]["product_checks"].as_array().unwrap().len(),
        6
    );

    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"nodes\": [").unwrap();
    assert_eq!(netalign(&["analyze", p(&bad)]).status.code(), Some(2));
    assert_eq!(
        netalign(&["analyze", "/nonexistent/net.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn simulate_reports() {
    let feas = gen("feasible", 2, "sim-feas.json");
    for n in ["1", "2"] {
        let out = netalign(&[
            "--json",
            "--jobs",
            "2",
            "simulate",
            p(&feas),
            "--n",
            n,
            "--trials",
            "25",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["successes"], 25);
        assert_eq!(v["trial_results"].as_array().unwrap().len(), 25);
    }
    let deg = gen("degenerate", 2, "sim-deg.json");
    let out = netalign(&["--json", "simulate", p(&deg), "--trials", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["successes"], 0);
    assert!(v["trial_results"][0]["error"]
        .as_str()
        .unwrap()
        .contains("ranks"));
    assert_eq!(
        netalign(&["simulate", p(&feas), "--n", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        netalign(&["simulate", p(&feas), "--n", "6"]).status.code(),
        Some(2)
    );
}

#[test]
fn simulate_is_seed_deterministic_across_fields() {
    let feas = gen("feasible", 3, "det-feas.json");
    let run = |jobs: &str| {
        netalign(&[
            "--json",
            "--field-bits",
            "31",
            "--jobs",
            jobs,
            "--seed",
            "9",
            "simulate",
            p(&feas),
            "--trials",
            "8",
        ])
        .stdout
    };
    assert_eq!(run("1"), run("4"));
    assert_eq!(
        json(&netalign(&[
            "--json",
            "--field-bits",
            "31",
            "simulate",
            p(&feas),
            "--trials",
            "2"
        ]))["modulus"],
        2147483647u64
    );
    assert_eq!(
        netalign(&["--field-bits", "47", "simulate", p(&feas)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn oracle_checks() {
    let deg = gen("degenerate", 0, "or-deg.json");
    let out = netalign(&["oracle", p(&deg)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("alpha ≡ beta (exact), c = 1"));
    let out = netalign(&["--json", "oracle", p(&deg)]);
    assert_eq!(json(&out)["prop4_agrees"], true);
    let out = netalign(&["oracle", p(&deg), "--budget", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("over the budget"));
}

#[test]
fn dot_export() {
    let deg = gen("degenerate", 0, "dot-deg.json");
    let out = netalign(&["--dot", "analyze", p(&deg)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph network {"));
    let v = json(&netalign(&["--json", "--dot", "analyze", p(&deg)]));
    assert!(v["dot"].as_str().unwrap().contains("\"e'\""));
}
