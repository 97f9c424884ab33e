use std::fs;
use std::path::Path;
use std::process::Command;

use cara_cli::io::{hex_digest, BasisSpec, MeasureJson, SeqJson};
use cara_cli::manifest::RunManifest;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cara(dir: &Path, args: &[&str], threads: Option<&str>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cara"));
    cmd.current_dir(dir).args(args).env_remove("CARA_THREADS");
    if let Some(t) = threads {
        cmd.env("CARA_THREADS", t);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}\n{}", r.stdout, r.stderr))
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        (
            "interval.json",
            r#"{"basis":"full:1:2","values":["1","0","1"]}"#,
        ),
        (
            "sparse.json",
            r#"{"basis":"gapped1d:0,1,2,6","values":[1,0,2.5,32.5]}"#,
        ),
        ("negative.json", r#"{"basis":"full:1:2","values":[1,0,-1]}"#),
        (
            "plane.json",
            r#"{"basis":{"n":2,"kind":"full","degree":2},"values":[2,1,1,1,1,1]}"#,
        ),
        (
            "two.json",
            r#"{"atoms":[{"w":1,"x":[0,0]},{"w":"1","x":["1","1"]}]}"#,
        ),
        ("e.poly", "1 + x^2\n"),
        ("bad.json", "{\"basis\": "),
    ];
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn bounds_row_six() {
    let d = workspace();
    let r = cara(
        d.path(),
        &["bounds", "--rows", "6", "--format", "json"],
        None,
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let row = &json(&r)["rows"][0];
    let got: Vec<u64> = ["n_lower", "richter", "m_minus_one", "alpha_next", "layered"]
        .iter()
        .map(|k| row[k].as_u64().unwrap())
        .collect();
    assert_eq!(got, [10, 28, 27, 19, 14]);
    assert_eq!(row["known"]["value"], 11);
}

#[test]
fn bounds_table_and_csv() {
    let d = workspace();
    let t = cara(d.path(), &["bounds"], None);
    assert_eq!(t.code, 0);
    assert!(t
        .stdout
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>()
            == ["1000", "167167", "501501", "501500", "375751", "374252"]));
    let c = cara(
        d.path(),
        &["bounds", "--rows", "2,4", "--format", "csv"],
        None,
    );
    assert_eq!(c.stdout.lines().count(), 3);
    assert!(c.stdout.starts_with("2d,n_lower,richter"));
}

#[test]
fn closed_form_generic_rank() {
    let d = workspace();
    let r = cara(
        d.path(),
        &["na", "--basis", "full:2:4", "--closed-form"],
        None,
    );
    assert_eq!(r.code, 0);
    assert_eq!(json(&r)["n_a"], 6);
}

#[test]
fn probe_is_seeded_and_round_trips() {
    let d = workspace();
    let args = ["na", "--basis", "full:2:2", "--seed", "11"];
    let a = cara(d.path(), &args, None);
    let b = cara(d.path(), &args, None);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["n_a"], 3);
    let witness: MeasureJson = serde_json::from_value(v["witness"].clone()).unwrap();
    assert_eq!(witness.atoms.len(), 3);
    let basis: BasisSpec = serde_json::from_value(v["basis"].clone()).unwrap();
    assert_eq!(basis.build().unwrap().len(), 6);
}

#[test]
fn missing_input_is_a_domain_error() {
    let d = workspace();
    let r = cara(
        d.path(),
        &["fit", "--seq", "missing.json", "--k", "2"],
        None,
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("missing.json"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let m = cara(d.path(), &["fit", "--seq", "bad.json", "--k", "2"], None);
    assert_eq!(m.code, 2);
    assert!(m.stderr.contains("malformed JSON"));
}

#[test]
fn usage_errors_exit_64() {
    let d = workspace();
    assert_eq!(cara(d.path(), &["frobnicate"], None).code, 64);
    assert_eq!(
        cara(d.path(), &["fit", "--seq", "interval.json"], None).code,
        64
    );
    assert_eq!(cara(d.path(), &["bounds", "--bogus"], None).code, 64);
    assert_eq!(cara(d.path(), &[], None).code, 64);
    let help = cara(d.path(), &["--help"], None);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("maxmass"));
}

#[test]
fn fit_output_is_independent_of_threads() {
    let d = workspace();
    let args = ["fit", "--seq", "plane.json", "--k", "2", "--seed", "3"];
    let one = cara(d.path(), &args, Some("1"));
    let four = cara(d.path(), &args, Some("4"));
    assert_eq!(one.code, 0, "{}", one.stderr);
    assert_eq!(one.stdout, four.stdout);
    let v = json(&one);
    assert_eq!(v["converged"], true);
    let mu: MeasureJson = serde_json::from_value(v["measure"].clone()).unwrap();
    assert_eq!(mu.to_f64().unwrap().len(), 2);
}

#[test]
fn failed_fit_exits_3_with_result() {
    let d = workspace();
    let r = cara(
        d.path(),
        &["fit", "--seq", "sparse.json", "--k", "1", "--restarts", "8"],
        None,
    );
    assert_eq!(r.code, 3);
    assert_eq!(json(&r)["converged"], false);
    let c = cara(
        d.path(),
        &["cara", "--seq", "negative.json", "--restarts", "8"],
        None,
    );
    assert_eq!(c.code, 3);
    assert!(c.stderr.contains("no representing measure"), "{}", c.stderr);
}

#[test]
fn cara_sweeps_up_from_one() {
    let d = workspace();
    let r = cara(d.path(), &["cara", "--seq", "sparse.json"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["k_min"], 1);
    assert_eq!(v["k_found"], v["witness"]["k"]);
    assert!(v["sweep"].as_array().unwrap().len() >= 1);
}

#[test]
fn max_mass_at_the_origin() {
    let d = workspace();
    for e in ["e.poly", "1 + x^2"] {
        let r = cara(
            d.path(),
            &[
                "maxmass",
                "--seq",
                "interval.json",
                "--point",
                "0",
                "--e",
                e,
            ],
            None,
        );
        assert_eq!(r.code, 0, "{}", r.stderr);
        let c = json(&r)["c_star"].as_f64().unwrap();
        assert!((c - 1.0).abs() <= 1e-4, "{c}");
    }
    let bad = cara(
        d.path(),
        &[
            "maxmass",
            "--seq",
            "interval.json",
            "--point",
            "0",
            "--e",
            "x",
        ],
        None,
    );
    assert_eq!(bad.code, 2);
}

#[test]
fn flow_writes_csv_and_manifest() {
    let d = workspace();
    let r = cara(
        d.path(),
        &[
            "flow",
            "--basis",
            "full:2:2",
            "--measure",
            "two.json",
            "--t0",
            "-0.4",
            "--t1",
            "0.4",
            "--steps",
            "200",
            "--csv",
            "tr.csv",
            "--manifest",
            "run.json",
            "--seed",
            "5",
        ],
        None,
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert!(v["max_drift"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["states"].as_array().unwrap().len(), 201);
    let csv = fs::read_to_string(d.path().join("tr.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,c1,x1_1,x1_2,c2,x2_1,x2_2");
    assert_eq!(csv.lines().count(), 202);
    let m: RunManifest =
        serde_json::from_str(&fs::read_to_string(d.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(m.seed, 5);
    assert_eq!(m.exit_code, 0);
    let bytes = fs::read(d.path().join("two.json")).unwrap();
    assert_eq!(m.input_digests["two.json"], hex_digest(&bytes));
    assert!(m.tolerances.contains_key("drift_tolerance"));
}

#[test]
fn flow_rejects_an_interval_without_zero() {
    let d = workspace();
    let r = cara(
        d.path(),
        &[
            "flow",
            "--basis",
            "full:2:2",
            "--measure",
            "two.json",
            "--t0",
            "0.1",
            "--t1",
            "0.4",
        ],
        None,
    );
    assert_eq!(r.code, 2);
}

#[test]
fn waring_power_and_moments_round_trip() {
    let d = workspace();
    let r = cara(d.path(), &["waring", "--poly", "(x1 + x2)^4"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["atom_count"], 1);
    assert_eq!(v["within_tolerance"], true);
    let s: SeqJson = serde_json::from_value(v["moments"].clone()).unwrap();
    assert_eq!(s.values.len(), 5);
    assert_eq!(
        s.values[0].to_rational().unwrap(),
        cara_core::scalar::int(1)
    );
}

#[test]
fn certificates() {
    let d = workspace();
    let m = cara(
        d.path(),
        &["cert", "--name", "motzkin", "--dump-matrix"],
        None,
    );
    assert_eq!(m.code, 0, "{}", m.stderr);
    let v = json(&m);
    assert_eq!(v["matrix_rank"], 6);
    assert_eq!(v["implied_lower_bound"], 6);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 7);
    let h = cara(
        d.path(),
        &["cert", "--name", "harris", "--basis", "hom:3:10"],
        None,
    );
    assert_eq!(json(&h)["matrix_rank"], 30);
    assert_eq!(cara(d.path(), &["cert", "--name", "nobody"], None).code, 2);
}

#[test]
fn schur_printed_factorization() {
    let d = workspace();
    let r = cara(
        d.path(),
        &["schur", "--exponents", "1,4,7", "--verify-identity"],
        None,
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["degree"], v["expected_degree"]);
    assert_eq!(v["positive_integer_coefficients"], true);
    assert_eq!(v["identity"]["affine"]["verdict"], "equal");
    assert_eq!(v["identity"]["homogeneous"]["verdict"], "equal");
    let p = cara_core::Poly::parse(v["p_a"]["text"].as_str().unwrap(), Some(3)).unwrap();
    assert_eq!(
        p.terms().count(),
        v["p_a"]["terms"].as_array().unwrap().len()
    );
}

#[test]
fn condition_search_is_seed_free_and_thread_independent() {
    let d = workspace();
    let args = [
        "schur",
        "--exponents",
        "0,1,2,6",
        "--check-condition22",
        "numeric",
        "--samples",
        "50000",
        "--local-searches",
        "50",
    ];
    let a = cara(d.path(), &args, Some("1"));
    let b = cara(d.path(), &args, Some("3"));
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let pos = cara(
        d.path(),
        &[
            "schur",
            "--exponents",
            "0,1,2,3",
            "--check-condition22",
            "positivity",
        ],
        None,
    );
    assert_eq!(json(&pos)["condition22"]["verdict"]["certified"], true);
}

#[test]
fn in_process_run_matches_binary() {
    let d = workspace();
    let out = cara_cli::run(["cara", "bounds", "--rows", "2", "--format", "json"]);
    let bin = cara(
        d.path(),
        &["bounds", "--rows", "2", "--format", "json"],
        None,
    );
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, bin.stdout);
}
