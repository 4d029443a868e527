use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_posetcox"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_path(cmd: &str, files: &[PathBuf], extra: &[&str]) -> Output {
    let mut c = bin();
    c.arg(cmd).args(files).args(extra);
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn assert_schema(schema_file: &str, instance: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(schema_file);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let messages: Vec<String> = match compiled.validate(instance) {
        Ok(()) => return,
        Err(errors) => errors
            .map(|e| format!("{e} at {}", e.instance_path))
            .collect(),
    };
    panic!("{schema_file}: {messages:?}\n{instance:#}");
}

#[test]
fn classify_indefinite_geometric() {
    let o = run_path(
        "classify",
        &[data("indefinite_geometric.txt")],
        &["--format", "json"],
    );
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("classification.schema.json", &v);
    assert_eq!(v["spectral"]["nonnegative"], false);
    assert_eq!(
        v["spectral"]["coxeter_polynomial"],
        Value::from(vec![1; 10])
    );
    assert_eq!(
        v["coxeter_polynomial_text"],
        "t^9 + t^8 + t^7 + t^6 + t^5 + t^4 + t^3 + t^2 + t + 1"
    );
    assert_eq!(v["spectral"]["reduced_coxeter_number"], Value::Null);
}

#[test]
fn classify_chain_of_four() {
    let o = run_path("classify", &[data("chain4.txt")], &["--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("classification.schema.json", &v);
    assert_eq!(v["type_a"]["verdict"], "positive");
    assert_eq!(v["spectral"]["corank"], 0);
    assert_eq!(v["spectral"]["coxeter_number"], 5);
}

#[test]
fn generated_two_peak_round_trips_through_classify() {
    let dir = tempfile::tempdir().unwrap();
    for (n, p, reduced) in [(5, 3, 6), (6, 3, 3), (7, 4, 12), (8, 5, 15)] {
        let g = run(&["gen", "two-peak", &n.to_string(), &p.to_string()]);
        assert_eq!(code(&g), 0);
        let file = dir.path().join(format!("two_peak_{n}_{p}.txt"));
        std::fs::write(&file, &g.stdout).unwrap();
        let o = run_path("classify", &[file], &["--format", "json"]);
        assert_eq!(code(&o), 0);
        let v = json(&o);
        assert_schema("classification.schema.json", &v);
        assert_eq!(v["type_a"]["verdict"], "principal");
        assert_eq!(v["cycle_index"], p);
        assert_eq!(v["spectral"]["corank"], 1);
        assert_eq!(v["spectral"]["reduced_coxeter_number"], reduced);
        assert_eq!(v["spectral"]["coxeter_number"], "exceeds_cutoff");
    }
}

#[test]
fn classify_text_lists_coefficients_and_polynomial() {
    let o = run_path("classify", &[data("principal_a.txt")], &[]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(
        text.contains("type A: principal, A~_5, cycle index 3"),
        "{text}"
    );
    assert!(
        text.contains("Coxeter polynomial: t^6 - 2t^3 + 1"),
        "{text}"
    );
    assert!(
        text.contains("coefficients: [1, 0, 0, -2, 0, 0, 1]"),
        "{text}"
    );
}

#[test]
fn classify_cutoff_flag_limits_order_search() {
    let o = run_path(
        "classify",
        &[data("chain5.txt")],
        &["--cutoff", "3", "--format", "json"],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["spectral"]["coxeter_number"], "exceeds_cutoff");
}

#[test]
fn parse_and_cycle_errors() {
    let o = run_path("classify", &[data("garbage.txt")], &[]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    let o = run_path("classify", &[data("cyclic.txt")], &[]);
    assert_eq!(code(&o), 3);
    let o = run_path("classify", &[data("no_such_file.txt")], &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn relabelled_chains_are_congruent() {
    let o = run_path(
        "congruence",
        &[data("chain5.txt"), data("chain5_relabelled.txt")],
        &["--format", "json"],
    );
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("congruence.schema.json", &v);
    assert_eq!(v["congruent"], true);
    assert_eq!(v["B"].as_array().unwrap().len(), 5);
}

#[test]
fn principal_six_posets_with_equal_index_are_congruent() {
    let o = run_path(
        "congruence",
        &[data("principal_a.txt"), data("principal_b.txt")],
        &[],
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("CONGRUENT\n"));
}

#[test]
fn positive_and_principal_are_not_congruent() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("two_peak.txt");
    std::fs::write(&file, run(&["gen", "two-peak", "5", "3"]).stdout).unwrap();
    let o = run_path("congruence", &[data("chain5.txt"), file], &[]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.starts_with("NOT CONGRUENT\n"), "{text}");
    assert!(text.contains("t^5 + t^4 + t^3 + t^2 + t + 1"));
    assert!(text.contains("t^5 - t^3 - t^2 + 1"));
}

#[test]
fn congruence_rejects_non_type_a() {
    let o = run_path(
        "congruence",
        &[data("chain4.txt"), data("diamond.txt")],
        &[],
    );
    assert_eq!(code(&o), 4);
    let o = run_path(
        "congruence",
        &[
            data("indefinite_geometric.txt"),
            data("indefinite_geometric.txt"),
        ],
        &[],
    );
    assert_eq!(code(&o), 4);
}

#[test]
fn canonicalize_emits_valid_witness() {
    let o = run_path(
        "canonicalize",
        &[data("principal_b.txt")],
        &["--format", "json"],
    );
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("witness.schema.json", &v);
    assert_eq!(v["verified"], true);
    assert_eq!(v["target"], serde_json::json!({"kind": "two_peak", "p": 3}));
}

#[test]
fn census_golden_file() {
    let o = run(&["census", "--n", "34"]);
    assert_eq!(code(&o), 0);
    let golden = include_str!("golden/census_34.txt");
    assert_eq!(stdout(&o), golden);
}

#[test]
fn census_small_sizes() {
    let o = run(&["census", "--n", "5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("census.schema.json", &v);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);

    let o = run(&["census", "--n", "2", "--format", "json"]);
    let v = json(&o);
    assert_schema("census.schema.json", &v);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["rows"][0]["count"], 1);
    assert_eq!(v["rows"][0]["p"], Value::Null);
}

#[test]
fn census_json_for_large_n_validates() {
    let o = run(&["census", "--n", "64", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("census.schema.json", &v);
    assert_eq!(v["rows"].as_array().unwrap().len(), 32);
}

#[test]
fn census_range_errors() {
    for n in ["0", "1", "65"] {
        assert_eq!(code(&run(&["census", "--n", n])), 2, "n = {n}");
    }
}

#[test]
fn gen_outputs() {
    let o = run(&["gen", "one-peak", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "3\n1 2\n2 3\n");
    let o = run(&["gen", "two-peak", "4", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "4\n1 3\n1 4\n2 3\n2 4\n");
    assert_eq!(code(&run(&["gen", "two-peak", "4", "3"])), 2);
    assert_eq!(code(&run(&["gen", "two-peak", "6", "2"])), 2);
    assert_eq!(code(&run(&["gen", "one-peak", "0"])), 2);
}

#[test]
fn outputs_are_deterministic() {
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            run_path(
                "canonicalize",
                &[data("principal_a.txt")],
                &["--format", "json"],
            )
            .stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let a = run_path("classify", &[data("indefinite_geometric.txt")], &[]).stdout;
    let b = run_path("classify", &[data("indefinite_geometric.txt")], &[]).stdout;
    assert_eq!(a, b);
}

#[test]
fn selfcheck_small() {
    let o = run(&["selfcheck", "--max-n", "6"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    for suite in [
        "reflection-examples",
        "formulas",
        "two-peak",
        "reflections",
        "witnesses",
        "all-posets",
    ] {
        assert!(
            text.lines()
                .any(|l| l.starts_with("PASS") && l.contains(suite)),
            "{text}"
        );
    }
}

#[test]
fn selfcheck_rejects_large_bound() {
    assert_eq!(code(&run(&["selfcheck", "--max-n", "13"])), 2);
}
