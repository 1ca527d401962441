//! End-to-end runs of the command-line surface against the data files.

use gnc::cli::run;
use gnc::report::Status;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn gnc(args: &[&str]) -> gnc::cli::CommandResult {
    let mut argv = vec!["gnc".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(&argv)
}

#[test]
fn verify_group_passes_on_z4() {
    let result = gnc(&["verify-group", &data("z4.grp")]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    assert!(result.rendered.contains("order 4"));
    assert!(result.rendered.contains("subgroup even"));
}

#[test]
fn verify_group_fails_on_missing_inverse() {
    let result = gnc(&["verify-group", &data("bad_group.grp")]);
    assert_eq!(result.exit_code, 1);
    assert!(result.rendered.contains("inverse"));
}

#[test]
fn verify_cwl_accepts_xor() {
    let result = gnc(&["verify-cwl", &data("xor.cwl")]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    assert!(result.rendered.contains("Abelian: true"));
}

#[test]
fn verify_code_runs_the_butterfly_file() {
    let result = gnc(&["verify-code", &data("butterfly.inst")]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    assert!(result
        .rendered
        .contains("6 nodes, 9 edges, 2 sources, 2 terminals"));
    assert!(result.rendered.contains("every terminal decodes"));
}

#[test]
fn entropy_cross_checks_both_routes() {
    let result = gnc(&["entropy", &data("butterfly.chr"), "--vars", "s1,e5"]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    assert!(result.rendered.contains("formula and brute force agree"));
    assert!(result.rendered.contains("H(s1,e5) = 2.000000"));
}

#[test]
fn convert_cor1_round_trip_passes() {
    let result = gnc(&[
        "convert",
        "cor1",
        &data("butterfly.inst"),
        &data("butterfly.chr"),
    ]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    assert!(result.rendered.contains("match-assembled"));
}

#[test]
fn convert_thm4_emits_a_cwl_artifact() {
    let result = gnc(&[
        "convert",
        "thm4",
        &data("butterfly.inst"),
        &data("butterfly.chr"),
        "--edge",
        "e5",
    ]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    assert!(result.rendered.contains("cwl e5"));
    // artifact parses back and is the xor map
    let artifact = result
        .rendered
        .split("---\n")
        .nth(1)
        .expect("artifact after the report");
    let fns = gnc::cwl::parse_cwl_file(artifact).unwrap();
    assert_eq!(fns[0].table(), &[0, 1, 1, 0]);
}

#[test]
fn convert_thm5_emits_a_characterization() {
    let result = gnc(&["convert", "thm5", &data("xor.cwl")]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    let artifact = result.rendered.split("---\n").nth(1).expect("artifact");
    let c = gnc::charac::parse_characterization(artifact).unwrap();
    assert_eq!(c.group().order(), 4);
}

#[test]
fn convert_thm6_then_thm7_round_trips_through_files() {
    let dir = std::env::temp_dir().join("gnc-cli-thm6");
    std::fs::create_dir_all(&dir).unwrap();
    let globals_path = dir.join("globals.cwl");
    let result = gnc(&[
        "convert",
        "thm6",
        &data("butterfly.inst"),
        &data("butterfly.cwl"),
        "-o",
        globals_path.to_str().unwrap(),
    ]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);

    let result = gnc(&[
        "convert",
        "thm7",
        &data("butterfly.inst"),
        globals_path.to_str().unwrap(),
    ]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    assert!(result.rendered.contains("locals recompose"));
    let artifact = result.rendered.split("---\n").nth(1).expect("artifact");
    let locals = gnc::cwl::parse_cwl_file(artifact).unwrap();
    let e5 = locals.iter().find(|f| f.name == "e5").unwrap();
    assert_eq!(e5.table(), &[0, 1, 1, 0]);
}

#[test]
fn convert_thm1_both_directions() {
    let dir = std::env::temp_dir().join("gnc-cli-thm1");
    std::fs::create_dir_all(&dir).unwrap();
    let globals_path = dir.join("globals.lin");
    let result = gnc(&[
        "convert",
        "thm1-l2g",
        &data("butterfly.inst"),
        &data("butterfly.lin"),
        "-o",
        globals_path.to_str().unwrap(),
    ]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);

    let result = gnc(&[
        "convert",
        "thm1-g2l",
        &data("butterfly.inst"),
        globals_path.to_str().unwrap(),
    ]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    assert!(result.rendered.contains("rank condition holds"));
}

#[test]
fn demo_butterfly_passes() {
    let result = gnc(&["demo", "butterfly"]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    assert!(result.rendered.contains("entropy-bottleneck"));
}

#[test]
fn survey_reports_the_z4_failure() {
    let result = gnc(&["lemma2-survey", "--max-order", "4", "--targets", "2"]);
    assert_eq!(result.exit_code, 0, "{}", result.rendered);
    assert!(result.rendered.contains("no-extension"));
    assert!(result.rendered.contains("Z4 subgroup [0, 2] target Z2"));
}

#[test]
fn survey_rejects_large_orders() {
    let result = gnc(&["lemma2-survey", "--max-order", "100"]);
    assert_eq!(result.exit_code, 2);
}

#[test]
fn usage_error_exits_2() {
    let result = gnc(&["no-such-command"]);
    assert_eq!(result.exit_code, 2);
    assert_eq!(result.report.status, Status::Error);
}

#[test]
fn json_reports_are_valid_json_and_deterministic() {
    let a = gnc(&["--json", "demo", "butterfly"]);
    let b = gnc(&["--json", "demo", "butterfly"]);
    assert_eq!(a.rendered, b.rendered);
    let value: serde_json::Value = serde_json::from_str(&a.rendered).unwrap();
    assert_eq!(value["status"], "pass");
}
