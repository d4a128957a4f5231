use kregular::cli::{run, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn kr(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kregular").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn kr_json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json", "--no-timings"]);
    let o = kr(&full);
    let v = serde_json::from_str(&o.out).unwrap_or_else(|e| panic!("{e}: {}", o.out));
    (o.code, v)
}

fn coeffs(v: &Value) -> Vec<i64> {
    v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn verify_default_k2_is_clean() {
    let o = kr(&["verify", "--k", "2", "--xmax", "10", "--qmax", "36"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert!(o.out.contains("verified"));
}

#[test]
fn verify_json_schema() {
    let (code, v) = kr_json(&[
        "verify",
        "--k",
        "3",
        "--xmax",
        "5",
        "--qmax",
        "12",
        "--left",
        "enumeration",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["status"], "verified");
    assert_eq!(v["k"], 3);
    assert_eq!(v["xmax"], 5);
    assert_eq!(v["qmax"], 12);
    assert_eq!(v["left_method"], "enumeration");
    assert_eq!(v["right_method"], "recurrence");
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 0);
    assert_eq!(v["elapsed_ms"], 0);
}

#[test]
fn verify_lemma_direct_only_for_k2() {
    let ok = kr(&[
        "verify",
        "--k",
        "2",
        "--xmax",
        "6",
        "--qmax",
        "16",
        "--right",
        "lemma-direct",
    ]);
    assert_eq!(ok.code, EXIT_OK);
    let bad = kr(&["verify", "--k", "3", "--right", "lemma-direct"]);
    assert_eq!(bad.code, EXIT_USAGE);
    assert!(bad.err.starts_with("error:"));
}

#[test]
fn reduce_worked_example() {
    let o = kr(&["bijection", "reduce", "--k", "2", "3 6 10 10 15 19 19"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.contains("base=1 2 3 3 4 5 5"));
    assert!(o.out.contains("lambda=2 2 2 3 3 3 3 5 5 5 6 6 7 7"));
    assert!(o.out.contains("forbidden=1 4"));
}

#[test]
fn reduce_json_fields() {
    let (code, v) = kr_json(&["bijection", "reduce", "3 6 10 10 15 19 19"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["base"], "1 2 3 3 4 5 5");
    assert_eq!(v["word"], serde_json::json!([1, 1, 2, 1, 2]));
    assert_eq!(v["base_weight"], 23);
    assert_eq!(v["lambda_weight"], 59);
    assert_eq!(v["forbidden"], serde_json::json!([1, 4]));
    assert_eq!(v["partition"], "3 6 10 10 15 19 19");
}

#[test]
fn trace_lists_every_step() {
    let o = kr(&["bijection", "trace", "3 6 10 10 15 19 19"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o
        .out
        .contains("step 1: partition=1 4 8 8 13 17 17 lambda=7 7"));
    assert!(o
        .out
        .contains("partition=1 2 3 3 8 12 12 lambda=5 5 5 6 6 7 7"));
    let (_, v) = kr_json(&["bijection", "trace", "3 6 10 10 15 19 19"]);
    assert_eq!(v["steps"].as_array().unwrap().len(), 5);
}

#[test]
fn build_inverts_reduce() {
    let o = kr(&[
        "bijection",
        "build",
        "--base",
        "1 2 3 3 4 5 5",
        "--lambda",
        "2 2 2 3 3 3 3 5 5 5 6 6 7 7",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert_eq!(o.out, "partition=3 6 10 10 15 19 19\n");
}

#[test]
fn build_rejects_forbidden_size() {
    let o = kr(&[
        "bijection",
        "build",
        "--base",
        "1 2 3 3 4 5 5",
        "--lambda",
        "4",
    ]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.err.starts_with("error:"));
}

#[test]
fn table_b_json_matches_reference_values() {
    let (code, v) = kr_json(&["table", "--which", "b", "--k", "2", "--max", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["which"], "b");
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 15);
    let find = |m: u64, n: u64| {
        entries
            .iter()
            .find(|e| e["index"] == serde_json::json!([m, n]))
            .map(|e| coeffs(&e["poly"]))
            .unwrap()
    };
    assert_eq!(find(2, 2), vec![1, 3, 7, 9, 10, 9, 6]);
    assert_eq!(find(3, 1), vec![1, 4, 8, 13, 17, 18, 17, 14, 9, 4]);
    assert_eq!(find(0, 4), vec![1]);
}

#[test]
fn table_a_rows_are_m() {
    let o = kr(&["table", "--which", "a", "--max", "1"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.contains("a(1,0) = q - q^2"), "{}", o.out);
}

#[test]
fn table_b_k_general() {
    let (code, v) = kr_json(&["table", "--which", "b_k", "--k", "3", "--max", "3"]);
    assert_eq!(code, EXIT_OK);
    // tuples of length 3 with sum at most 3
    assert_eq!(v["entries"].as_array().unwrap().len(), 20);
    let alias = kr(&["table", "--which", "b-k", "--k", "3", "--max", "1"]);
    assert_eq!(alias.code, EXIT_OK);
}

#[test]
fn oracle_counts_partitions() {
    let (code, v) = kr_json(&["oracle", "--k", "2", "--xmax", "8", "--qmax", "24"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["k"], 2);
    let o = kr(&["oracle", "--k", "1", "--xmax", "2", "--qmax", "4"]);
    assert!(o.out.contains("x^2: q^3 + q^4"), "{}", o.out);
}

#[test]
fn scan_reports_expected_count() {
    let (code, v) = kr_json(&["scan", "--k", "2", "--sum-bound", "6"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["tuples_checked"], 28);
    assert_eq!(v["expected_tuples"], "28");
    assert_eq!(v["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn bessel_reports_q_analog_mismatch_but_exits_clean() {
    let o = kr(&["bessel", "--bound", "4"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(
        o.out.contains("(1,1): b = 1 + 2q  q-analog = 1 + q + q^2"),
        "{}",
        o.out
    );
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--k", "0"][..],
        &["verify", "--bogus"],
        &["table"],
        &["bijection", "reduce", "3 3 3"],
        &["bijection", "reduce", "3 2"],
        &["bijection", "reduce", "1 x"],
        &["nonsense"],
    ] {
        let o = kr(args);
        assert_eq!(o.code, EXIT_USAGE, "{args:?}");
        assert!(o.out.is_empty(), "{args:?}");
        assert!(!o.err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    let o = kr(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.contains("verify"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "--k", "3", "--xmax", "6", "--qmax", "18"][..],
        &["scan", "--k", "3", "--sum-bound", "5"],
        &["table", "--which", "b_k", "--k", "3", "--max", "3"],
        &["oracle", "--k", "2"],
        &["bessel"],
    ] {
        let mut full = args.to_vec();
        full.extend(["--format", "json", "--no-timings"]);
        let first = kr(&full).out;
        full.extend(["--threads", "1"]);
        let second = kr(&full).out;
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("kregular-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = kr(&[
        "table", "--which", "b", "--max", "2", "--format", "json", "--output", p,
    ]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 6);
    std::fs::remove_file(&path).unwrap();
}
