mod common;

use common::{json_report, mvmdp, mvmdp_env, MODEL_REL};
use mvmdp::cli::run_command;
use mvmdp::report::RunReport;
use serde_json::Value;

fn code(args: &[&str]) -> i32 {
    mvmdp(args).status.code().unwrap()
}

fn without_timing(out: &std::process::Output) -> Value {
    let mut v = json_report(out);
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn every_subcommand_succeeds_on_the_bundled_model() {
    let m = MODEL_REL;
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", "--model", m],
        vec!["evaluate", "--model", m, "--policy", "1,4"],
        vec!["feasible", "--model", m, "--lambda", "2.5,4.5"],
        vec!["solve", "--model", m, "--lambda", "2.5,4.5", "--method", "pi"],
        vec!["solve", "--model", m, "--lambda", "2.5,4.5", "--method", "vi"],
        vec!["solve", "--model", m, "--lambda", "2.5,4.5", "--method", "brute"],
        vec!["frontier", "--model", m],
        vec!["simulate", "--model", m, "--policy", "2,1", "--paths", "2000"],
        vec!["check-randomized", "--model", m, "--lambda", "2.5,4.5", "--samples", "20"],
    ];
    for args in runs {
        let mut json = args.clone();
        json.extend(["--output", "json"]);
        let out = mvmdp(&json);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let report = json_report(&out);
        assert_eq!(report["schema"], 1);
        assert_eq!(report["command"], args[0]);
        assert_eq!(code(&args), 0, "{args:?} table output");
    }
}

#[test]
fn empty_feasible_set_exits_one_for_every_lambda_command() {
    for cmd in ["feasible", "solve", "check-randomized"] {
        let out = mvmdp(&[cmd, "--model", MODEL_REL, "--lambda", "2,3"]);
        assert_eq!(out.status.code(), Some(1), "{cmd}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains("state 2 is empty"), "{cmd}: {stderr}");
    }
}

#[test]
fn input_errors_exit_two() {
    let m = MODEL_REL;
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["bogus"],
        vec!["solve", "--model", m, "--lambda", "2.5,4.5", "--frobnicate"],
        vec!["validate", "--model", "does/not/exist.json"],
        vec!["evaluate", "--model", m, "--policy", "1,9"],
        vec!["evaluate", "--model", m, "--policy", "1"],
        vec!["feasible", "--model", m, "--lambda", "2.5"],
        vec!["feasible", "--model", m, "--lambda", "2.5,x"],
        vec!["feasible", "--model", m],
        vec!["feasible", "--model", m, "--lambda", "2.5,4.5", "--lambda-from-policy", "1,1"],
        vec!["solve", "--model", m, "--lambda", "2.5,4.5", "--initial", "3,1"],
        vec!["solve", "--model", m, "--lambda", "2.5,4.5", "--method", "vi", "--epsilon", "0"],
        vec!["frontier", "--model", m, "--cap", "5"],
        vec!["simulate", "--model", m, "--policy", "1,1", "--start", "3"],
        vec!["simulate", "--model", m, "--policy", "1,1", "--paths", "1"],
        vec!["check-randomized", "--model", m, "--lambda", "2.5,4.5", "--samples", "0"],
    ];
    for args in cases {
        assert_eq!(code(&args), 2, "{args:?}");
    }
}

#[test]
fn invalid_model_file_exits_two() {
    let dir = std::env::temp_dir().join(format!("mvmdp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"num_states": 1, "beta": 1.0, "states": [{"actions": [{"label": 1, "reward": 1, "transition": [1]}]}]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    for cmd in [vec!["validate", "--model", p], vec!["frontier", "--model", p]] {
        let out = mvmdp(&cmd);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).contains("discount factor must lie in (0,1)"));
    }
}

#[test]
fn help_exits_zero() {
    let out = mvmdp(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("check-randomized"));
}

#[test]
fn brute_force_on_a_singleton_set() {
    let out = mvmdp(&["solve", "--model", MODEL_REL, "--lambda-from-policy", "1,2", "--method", "brute", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_report(&out)["result"]["optimal_policy"], serde_json::json!([1, 2]));
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let m = MODEL_REL;
    for args in [
        vec!["solve", "--model", m, "--lambda", "2.5,4.5", "--method", "vi", "--output", "json"],
        vec!["frontier", "--model", m, "--output", "json"],
        vec!["simulate", "--model", m, "--policy", "1,2", "--paths", "5000", "--seed", "9", "--output", "json"],
        vec!["check-randomized", "--model", m, "--lambda", "2.5,4.5", "--output", "json"],
    ] {
        assert_eq!(without_timing(&mvmdp(&args)), without_timing(&mvmdp(&args)), "{args:?}");
    }
}

#[test]
fn cap_flag_beats_environment_which_beats_default() {
    let m = MODEL_REL;
    let args = ["frontier", "--model", m, "--output", "json"];
    let out = mvmdp_env(&args, &[("MVMDP_CAP", "5")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap of 5"));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--cap", "12"]);
    let out = mvmdp_env(&with_flag, &[("MVMDP_CAP", "5")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_report(&out)["parameters"]["cap_source"], "flag");
    let out = mvmdp(&args);
    assert_eq!(json_report(&out)["parameters"]["cap"], "1000000");
    assert_eq!(code_env(&args, "abc"), 2);
}

fn code_env(args: &[&str], cap: &str) -> i32 {
    mvmdp_env(args, &[("MVMDP_CAP", cap)]).status.code().unwrap()
}

#[test]
fn in_process_report_round_trips() {
    let model = common::model_path();
    let out = run_command(["solve", "--model", model.to_str().unwrap(), "--lambda", "2.5,4.5", "--output", "json"]);
    assert_eq!(out.exit_code, 0);
    let report = out.report.unwrap();
    let parsed = RunReport::from_json(&out.stdout).unwrap();
    assert_eq!(parsed, report);
    assert_eq!(parsed.argv[0], "solve");
    assert_eq!(parsed.parameters["tolerance"], 1e-7);
}

#[test]
fn table_output_is_aligned() {
    let out = mvmdp(&["feasible", "--model", MODEL_REL, "--lambda", "2.125,3.375"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let col = lines[0].find("lambda").unwrap();
    assert_eq!(lines[2].find("2.125000"), Some(col));
    assert_eq!(lines[3].find("3.375000"), Some(col));
}
