//! End-to-end tests of the `roughiso` binary: schema conformance of
//! every subcommand's JSON, byte determinism, exit codes, and the
//! config-file layer.

use std::path::Path;
use std::process::Command;

use roughiso_cli::input::ExperimentConfig;

const BIN: &str = env!("CARGO_BIN_EXE_roughiso");

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn run(args: &[&str]) -> Run {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("ROUGHISO_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
        code: out.status.code().expect("no signal"),
    }
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&text).expect("schema parses");
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

/// Runs a subcommand, asserts the exit code, and validates the JSON
/// report against the published schema of that subcommand.
fn check(schema_name: &str, args: &[&str], expect_code: i32) -> serde_json::Value {
    let run = run(args);
    assert_eq!(
        run.code, expect_code,
        "args {args:?}: stdout {} stderr {}",
        run.stdout, run.stderr
    );
    let value: serde_json::Value =
        serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("bad JSON for {args:?}: {e}"));
    let compiled = schema(schema_name);
    if let Err(errors) = compiled.validate(&value) {
        let messages: Vec<String> = errors.map(|e| e.to_string()).collect();
        panic!("schema {schema_name} rejected output of {args:?}: {messages:?}");
    }
    assert!(
        run.stdout.ends_with('\n'),
        "reports must end with a newline"
    );
    value
}

#[test]
fn ball_report_matches_schema() {
    let v = check(
        "ball",
        &["ball", "--group", "free(2)", "--gens", "free-basis", "--radius", "2"],
        0,
    );
    assert_eq!(v["sizes"], serde_json::json!([1, 5, 17]));
}

#[test]
fn growth_report_matches_schema() {
    let v = check(
        "growth",
        &["growth", "--group", "free(2)", "--gens", "free-basis", "--kmax", "3"],
        0,
    );
    assert_eq!(v["sizes"], serde_json::json!([1, 5, 17, 53]));
}

#[test]
fn fit_report_matches_schema() {
    let v = check(
        "fit",
        &[
            "fit",
            "--group",
            "zn(1)",
            "--gens",
            "standard-basis",
            "--map",
            "identity",
            "--radius",
            "3",
        ],
        0,
    );
    assert_eq!(v["eps_of_lambda"][0], "0");
}

#[test]
fn rough_check_report_matches_schema() {
    let v = check(
        "rough-check",
        &[
            "rough-check",
            "--group",
            "direct(zn(1),cyclic(3))",
            "--gens",
            "standard-basis",
            "--map",
            "project-left",
            "--codomain-gens",
            "standard-basis",
            "--radius",
            "3",
            "--eps-budget",
            "1",
        ],
        0,
    );
    assert_eq!(v["pass"], true);
}

#[test]
fn failing_rough_check_exits_one_with_witness() {
    // Identity on the same group but toward a poorer marking: distances
    // stretch beyond an additive budget of zero.
    let v = check(
        "rough-check",
        &[
            "rough-check",
            "--group",
            "zn(1)",
            "--gens",
            "1;-1;7;-7",
            "--map",
            "identity",
            "--codomain-gens",
            "standard-basis",
            "--radius",
            "3",
            "--eps-budget",
            "0",
        ],
        1,
    );
    assert_eq!(v["pass"], false);
    assert!(!v["failure"].is_null(), "failure must carry a witness");
}

#[test]
fn family_reports_match_schema() {
    let free = check(
        "family-free",
        &["family-free", "--rank", "2", "--g", "a1", "--h", "b1", "--scale", "3"],
        0,
    );
    assert_eq!(free["verification"]["pass"], true);

    let z = check(
        "family-z",
        &["family-z", "--g", "3", "--h", "5", "--scale", "4"],
        0,
    );
    assert_eq!(z["verification"]["pass"], true);
}

#[test]
fn verify_property_passes_and_fails_by_exit_code() {
    let pass = check(
        "verify-property",
        &[
            "verify-property",
            "--group",
            "zn(1)",
            "--gens",
            "2;-2;9;-9",
            "--g",
            "2",
            "--h",
            "5",
            "--scale",
            "3",
        ],
        0,
    );
    assert_eq!(pass["pass"], true);

    let fail = check(
        "verify-property",
        &[
            "verify-property",
            "--group",
            "zn(1)",
            "--gens",
            "standard-basis",
            "--g",
            "1",
            "--h",
            "2",
            "--scale",
            "5",
        ],
        1,
    );
    assert_eq!(fail["pass"], false);
}

#[test]
fn check_conditions_modes_match_schema() {
    let base = check(
        "check-conditions",
        &[
            "check-conditions",
            "--group",
            "direct(free(2),zn(1))",
            "--base",
            "(a1, 0);(b1, 1);(a1 b1, 0)",
        ],
        0,
    );
    assert_eq!(base["mode"], "base");
    assert_eq!(base["pass"], true);

    let failing = check(
        "check-conditions",
        &["check-conditions", "--group", "zn(2)", "--base", "(1,0);(0,1)"],
        1,
    );
    let broken: Vec<&str> = failing["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["holds"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(broken, ["no-independent-steps-commute"]);

    let torsion = check(
        "check-conditions",
        &["check-conditions", "--group", "cyclic(6)", "--torsion", "6"],
        0,
    );
    assert_eq!(torsion["torsion"]["admissible"], true);

    let inadmissible = check(
        "check-conditions",
        &["check-conditions", "--group", "cyclic(5)", "--torsion", "5"],
        1,
    );
    assert_eq!(inadmissible["torsion"]["admissible"], false);
}

#[test]
fn isometry_reports_match_schema() {
    let single = check(
        "isom-enum",
        &["isom-enum", "--group", "cyclic(4)", "--gens", "standard-basis"],
        0,
    );
    assert_eq!(single["order"], 8);

    let shared = check("shared-isom", &["shared-isom", "--group", "cyclic(3)"], 0);
    assert_eq!(shared["order"], 6);
    assert_eq!(shared["structure"], "translations-and-inversion");
}

#[test]
fn refute_exits_one_with_certificate_when_refuted() {
    let refuted = check(
        "refute",
        &[
            "refute",
            "--group",
            "zn(1)",
            "--map",
            "hom:2",
            "--requests",
            "2|9|5",
            "--lambda",
            "1",
            "--eps",
            "0",
        ],
        1,
    );
    assert_eq!(refuted["refuted"], true);
    assert!(!refuted["certificate"].is_null());

    let survives = check(
        "refute",
        &[
            "refute",
            "--group",
            "zn(1)",
            "--map",
            "translation:5",
            "--requests",
            "1|4|3",
        ],
        0,
    );
    assert_eq!(survives["refuted"], false);
    assert_eq!(survives["skipped"], 1);
}

#[test]
fn sign_homomorphy_report_matches_schema() {
    let v = check(
        "sign-homomorphy",
        &[
            "sign-homomorphy",
            "--group",
            "semidirect(zn(1),cyclic(4),action=inversion)",
            "--gens",
            "standard-basis",
            "--map",
            "project-left",
            "--radius",
            "2",
        ],
        0,
    );
    assert_eq!(v["pass"], true);
    assert_eq!(v["minus_occurs"], true);
}

#[test]
fn case_table_matches_schema_with_sixteen_rows() {
    let v = check("case-table", &["case-table"], 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    let unconstrained = rows
        .iter()
        .filter(|r| r["relation"] == "none")
        .count();
    assert_eq!(unconstrained, 2);
}

#[test]
fn quotient_report_matches_schema() {
    let v = check(
        "quotient",
        &[
            "quotient",
            "--group",
            "direct(zn(1),cyclic(3))",
            "--gens",
            "(1, 0);(-1, 0)",
            "--radius",
            "3",
        ],
        0,
    );
    assert_eq!(v["kernel_size"], 3);
    assert_eq!(v["quotient_group"], "zn(1)");
}

#[test]
fn enlarge_report_matches_schema() {
    let v = check(
        "enlarge",
        &[
            "enlarge",
            "--group",
            "direct(zn(1),cyclic(3))",
            "--gens",
            "(1, 0);(-1, 0);(1, 1);(-1, 2)",
            "--subgroup",
            "(0, 0);(0, 1);(0, 2)",
            "--radius",
            "3",
        ],
        0,
    );
    assert_eq!(v["diameter"], 2);
}

#[test]
fn hom_analysis_report_matches_schema() {
    let v = check(
        "hom-analysis",
        &[
            "hom-analysis",
            "--group",
            "direct(zn(1),cyclic(3))",
            "--gens",
            "standard-basis",
            "--map",
            "project-left",
            "--codomain-gens",
            "standard-basis",
            "--radius",
            "4",
        ],
        0,
    );
    assert_eq!(v["recognition"]["pass"], true);

    // Collapsing the free part of a commutator keeps growing the kernel,
    // so recognition fails on kernel stability and the exit code says so.
    let failing = check(
        "hom-analysis",
        &[
            "hom-analysis",
            "--group",
            "free(2)",
            "--gens",
            "free-basis",
            "--map",
            "hom:(1,0);(0,1)",
            "--codomain-group",
            "zn(2)",
            "--codomain-gens",
            "standard-basis",
            "--radius",
            "4",
        ],
        1,
    );
    assert_eq!(failing["recognition"]["pass"], false);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "growth",
        "--group",
        "free(2)",
        "--gens",
        "free-basis",
        "--kmax",
        "4",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, second.stdout);

    let fit_args = [
        "fit",
        "--group",
        "free(4)",
        "--gens",
        "free-basis",
        "--map",
        "schreier",
        "--codomain-gens",
        "free-basis",
        "--radius",
        "2",
    ];
    let first = run(&fit_args);
    let second = run(&fit_args);
    assert_eq!(first.code, 0, "stderr: {}", first.stderr);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn config_file_defaults_match_explicit_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("experiment.toml");
    std::fs::write(
        &path,
        "group = \"free(2)\"\ngens = \"free-basis\"\nk-max = 4\n",
    )
    .unwrap();
    let via_config = run(&["growth", "--config", path.to_str().unwrap()]);
    let via_flags = run(&[
        "growth",
        "--group",
        "free(2)",
        "--gens",
        "free-basis",
        "--kmax",
        "4",
    ]);
    assert_eq!(via_config.code, 0, "stderr: {}", via_config.stderr);
    assert_eq!(via_config.stdout, via_flags.stdout);

    // A flag given alongside the config wins over the config value.
    let overridden = run(&[
        "growth",
        "--config",
        path.to_str().unwrap(),
        "--kmax",
        "2",
    ]);
    let direct = run(&[
        "growth",
        "--group",
        "free(2)",
        "--gens",
        "free-basis",
        "--kmax",
        "2",
    ]);
    assert_eq!(overridden.stdout, direct.stdout);
}

#[test]
fn config_round_trip_is_stable() {
    let text = concat!(
        "group = \"direct(zn(1),cyclic(3))\"\n",
        "gens = \"(1, 0);(-1, 0)\"\n",
        "map = \"project-left\"\n",
        "radius = 5\n",
        "cap = 100000\n",
        "lambda-grid = \"1;3/2;2\"\n",
        "directed = false\n",
    );
    let parsed: ExperimentConfig = toml::from_str(text).unwrap();
    let serialized = toml::to_string(&parsed).unwrap();
    let reparsed: ExperimentConfig = toml::from_str(&serialized).unwrap();
    assert_eq!(parsed, reparsed);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "group = \"free(2)\"\nbogus = 1\n").unwrap();
    let run = run(&[
        "growth",
        "--config",
        path.to_str().unwrap(),
        "--gens",
        "free-basis",
        "--kmax",
        "2",
    ]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("bogus"));
}

#[test]
fn resource_caps_exit_two() {
    let truncated = run(&[
        "ball",
        "--group",
        "free(2)",
        "--gens",
        "free-basis",
        "--radius",
        "9",
        "--cap",
        "100",
    ]);
    assert_eq!(truncated.code, 2);
    // The truncated report is still printed, with the flag set.
    let v: serde_json::Value = serde_json::from_str(&truncated.stdout).unwrap();
    assert_eq!(v["truncated"], true);

    let via_env = run_with_env(
        &["ball", "--group", "free(2)", "--gens", "free-basis", "--radius", "9"],
        &[("ROUGHISO_CAP", "100")],
    );
    assert_eq!(via_env.code, 2);

    // An explicit flag overrides the environment.
    let flag_wins = run_with_env(
        &[
            "ball",
            "--group",
            "free(2)",
            "--gens",
            "free-basis",
            "--radius",
            "3",
            "--cap",
            "1000",
        ],
        &[("ROUGHISO_CAP", "10")],
    );
    assert_eq!(flag_wins.code, 0);

    let too_large = run(&["shared-isom", "--group", "cyclic(6)", "--max-order", "4"]);
    assert_eq!(too_large.code, 2);
}

#[test]
fn usage_errors_exit_three() {
    for args in [
        &["ball", "--group", "nonsense(7)", "--gens", "standard", "--radius", "2"][..],
        &["ball", "--group", "free(2)", "--gens", "q1", "--radius", "2"][..],
        &["fit", "--group", "zn(1)", "--gens", "standard", "--map", "warp", "--radius", "2"][..],
        &["fit", "--group", "zn(1)", "--gens", "standard", "--map", "identity", "--radius", "2", "--format", "dot"][..],
        &["check-conditions", "--group", "zn(1)"][..],
        &["growth", "--group", "free(2)", "--gens", "free-basis"][..],
    ] {
        let run = run(args);
        assert_eq!(run.code, 3, "args {args:?} stderr {}", run.stderr);
    }
}

#[test]
fn dot_and_csv_outputs_stay_available() {
    let dot = run(&[
        "ball",
        "--group",
        "cyclic(4)",
        "--gens",
        "standard-basis",
        "--radius",
        "2",
        "--format",
        "dot",
    ]);
    assert_eq!(dot.code, 0);
    assert!(dot.stdout.starts_with("graph ball {"));

    let csv = run(&[
        "ball",
        "--group",
        "cyclic(4)",
        "--gens",
        "standard-basis",
        "--radius",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(csv.code, 0);
    assert!(csv.stdout.starts_with("element,distance"));

    let growth_csv = run(&[
        "growth",
        "--group",
        "free(2)",
        "--gens",
        "free-basis",
        "--kmax",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(growth_csv.code, 0);
    assert!(growth_csv.stdout.starts_with("k,ball,ball_root,sphere_root"));
}
