use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarse-nash"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn three_points(dir: &Path) {
    fs::write(
        dir.join("ex.json"),
        r#"{"schema_version":1,"n":2,"label":"ex","generators":[[1,2],[2,1],[1.5,1.5]]}"#,
    )
    .unwrap();
}

#[test]
fn solve_threshold_keeps_the_midpoint() {
    let dir = tempfile::tempdir().unwrap();
    three_points(dir.path());
    let o = run(dir.path(), &["solve", "--rule", "coarse:nash_threshold:0.05", "ex.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "problem,label,index,u1,u2\nex.json,ex,0,1.5,1.5\n");

    let o = run(dir.path(), &["solve", "--rule", "weak_pareto", "ex.json"]);
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn malformed_file_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"schema_version":1,"n":2,"label":"S","generators":[[1,2],[2,"x"]]}"#,
    )
    .unwrap();
    let o = run(dir.path(), &["solve", "--rule", "nash", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("generators[1][1]"), "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    three_points(dir.path());
    for args in [
        &["gen", "--count", "0", "--out", "g"][..],
        &["--tol", "1", "solve", "--rule", "nash", "ex.json"],
        &["solve", "--rule", "no_such_rule", "ex.json"],
        &["bogus"],
    ] {
        assert_eq!(run(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn profile_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--profile", "theorem1", "--trials", "100", "check-axioms", "--rule", "cutoff:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("scale_invariance"));

    let o = run(dir.path(), &["--profile", "coarse", "--trials", "60", "check-axioms", "--rule", "coarse:nash_threshold:0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn check_axioms_writes_verdicts_and_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--trials", "60", "--out", "out", "check-axioms", "--rule", "cutoff:1"]);
    assert_eq!(o.status.code(), Some(0));
    let verdicts = fs::read_to_string(dir.path().join("out/verdicts.csv")).unwrap();
    assert!(verdicts.starts_with("rule,axiom,status,trials,expected,witness\n"));
    assert!(verdicts.contains("cutoff:1,scale_invariance,FAIL"));
    assert!(dir.path().join("out/witness_scale_invariance.json").exists());
}

#[test]
fn set_commands_report_failures() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["validate-set", "--spec", "union:0.3,0.7;0.7,0.3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("additive_closure,FAIL"));

    let o = run(dir.path(), &["validate-set", "--spec", "nash_threshold:0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = run(dir.path(), &["separate", "--spec", "cone:0.3,0.7;0.7,0.3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with("PASS"));
}

#[test]
fn gen_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["--seed", "4", "--out", "c", "gen", "--count", "5"]).status.success());
    let names: Vec<_> = fs::read_dir(dir.path().join("c")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 5);
    let o = run(dir.path(), &["compare", "--left", "nash", "--right", "coarse:nash_threshold:0.1", "c"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<_> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    // the Nash choice always sits inside the threshold choice
    assert!(rows.iter().all(|r| r.split(',').nth(4) == Some("true")), "{out}");
}
