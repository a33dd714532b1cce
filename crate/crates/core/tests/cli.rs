use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thickres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_fixture(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = fixture(name);
    let mut args = vec![cmd, "--in", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn verify_bpair_on_xy_gives_witness() {
    let o = run_fixture("verify-bpair", "bpair_xy.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["results"][0]["witness"]["d"], serde_json::json!({"1": 1}));
    assert_eq!(v["results"][0]["witness"]["eps"], "y");
}

#[test]
fn verify_bpair_rejects_non_monomial_quotient() {
    let o = run_fixture("verify-bpair", "bpair_not_monomial.json", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["results"][0]["reason"], "QuotientNotMonomial");
}

#[test]
fn logblow_dot_has_three_nodes() {
    let o = run_fixture("logblow", "logblow_t.json", &["--format", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = String::from_utf8(o.stdout).unwrap();
    let nodes = dot
        .lines()
        .filter(|l| l.contains("[label=") && !l.contains("->"))
        .count();
    assert_eq!(nodes, 3, "{dot}");
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 2);
}

#[test]
fn verify_ptm_verdicts() {
    let o = run_fixture("verify-ptm", "ptm_hypersurfaces.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["results"][0]["nilpotent"], "y");
    assert_eq!(v["results"][1]["thickness"], 4);
    let o = run_fixture("verify-ptm", "ptm_node.json", &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resolve_reports_witnesses() {
    let o = run_fixture("resolve", "resolve_cusp.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    let leaves = v["leaves"].as_array().unwrap();
    assert_eq!(leaves.len(), 1);
    assert_eq!(leaves[0]["witness"]["d"], serde_json::json!({"1": 4}));
    let names: Vec<&str> = v["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["principalize-z", "principalize-pi", "monomialize-pi"]);

    let o = run_fixture("resolve", "resolve_with_z.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["leaves"][0]["z_divisor"], serde_json::json!({"1": 1}));
}

#[test]
fn precondition_failures_exit_3() {
    let o = run_fixture("resolve", "resolve_not_smooth.json", &[]);
    assert_eq!(o.status.code(), Some(3));
    let o = run_fixture("principalize", "principalize_dense.json", &[]);
    assert_eq!(o.status.code(), Some(3));
    let o = run_fixture("verify-bpair", "bpair_xy.json", &["--format", "dot"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\n  \"charts\": [\n    {\"id\": }\n  ]\n}\n").unwrap();
    let o = run(&["blowup", "--in", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3 column"), "{err}");
}

#[test]
fn fuel_exhaustion_exits_4_with_partial_tree() {
    let o = run_fixture("principalize", "principalize_cusp.json", &["--fuel", "1"]);
    assert_eq!(o.status.code(), Some(4));
    let v = json_out(&o);
    assert!(v["partial"]["steps"].is_array());
    let o = run_fixture("principalize", "principalize_cusp.json", &["--fuel", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for i in 0..2 {
        let p = dir.path().join(format!("out{i}.json"));
        let o = run_fixture("principalize", "principalize_cusp.json", &["--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        outs.push(std::fs::read(&p).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn embed_finds_component_chart() {
    let o = run_fixture("embed", "resolve_eps_x.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    let e = &v["embeddings"][0];
    let comp = e["component_chart"].as_str().unwrap();
    assert_eq!(e["pi"][comp], "pi'*x");
    assert_eq!(e["path"].as_array().unwrap().len(), 1);
}

#[test]
fn factor_and_retract_commands() {
    let o = run_fixture("factor", "factor_double.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["path"].as_array().unwrap().len(), 2);
    let o = run_fixture("retract-extend", "retract_cubic.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        json_out(&o)["maxima"],
        serde_json::json!([{"label": 1, "n": 2}, {"label": 1, "n": 1}])
    );
    let o = run_fixture("monomialize", "monomialize_y2.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        json_out(&o)["multiplicities"]["X.[y].[y]"],
        serde_json::json!({"1": 2})
    );
}

#[test]
fn blowup_rejects_log_centers() {
    let o = run_fixture("blowup", "logblow_t.json", &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
}
