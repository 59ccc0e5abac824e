use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nfcran::io::{read_json, read_scenario};
use nfcran::model::{AllocationResult, Decision};

fn nfcran(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nfcran"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn gen_writes_paper_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out = nfcran(
        &[
            "gen",
            "--preset",
            "paper",
            "--ues-per-cell",
            "10",
            "--seed",
            "42",
            "--out",
            "s.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("50 tasks"));
    let s = read_scenario(&dir.path().join("s.json")).unwrap();
    assert_eq!(s.total_task_count(), 50);
    assert!(s.validate().is_empty());
    assert_eq!(s.metadata.seed, Some(42));
    assert_eq!(s.metadata.preset, "paper");
}

#[test]
fn gen_positioning_has_one_second_deadlines() {
    let dir = tempfile::tempdir().unwrap();
    let out = nfcran(
        &[
            "gen",
            "--preset",
            "positioning",
            "--ues-per-cell",
            "4",
            "--seed",
            "1",
            "--out",
            "p.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let s = read_scenario(&dir.path().join("p.json")).unwrap();
    assert!(s.tasks().iter().all(|t| t.task().deadline == 1.0));
    assert!(s.metadata.note.is_some());
}

#[test]
fn gen_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let out = nfcran(
        &[
            "gen",
            "--cells",
            "2",
            "--ues-per-cell",
            "3",
            "--seed",
            "7",
            "--deadline",
            "0.5",
            "--nec-capacity",
            "5e9",
            "--data-size",
            "1e3:2e3",
            "--out",
            "o.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let s = read_scenario(&dir.path().join("o.json")).unwrap();
    assert_eq!(s.total_task_count(), 6);
    assert!(s.cells.iter().all(|c| c.nec_capacity == 5e9));
    assert!(s
        .tasks()
        .iter()
        .all(|t| (1e3..=2e3).contains(&t.task().data_size)));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = nfcran(&["gen", "--ues-per-cell", "10", "--seed", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--out"));
    assert_eq!(nfcran(&["frobnicate"], dir.path()).status.code(), Some(1));
    let out = nfcran(
        &[
            "gen",
            "--ues-per-cell",
            "0",
            "--seed",
            "1",
            "--out",
            "x.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn solve_then_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    nfcran(
        &[
            "gen",
            "--ues-per-cell",
            "50",
            "--seed",
            "3",
            "--out",
            "s.json",
        ],
        dir.path(),
    );
    for scoring in ["min-footprint", "penalty"] {
        let out = nfcran(
            &[
                "solve",
                "--in",
                "s.json",
                "--solver",
                "greedy",
                "--scoring",
                scoring,
                "--out",
                "r.json",
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let text = stdout(&out);
        let rate_line = text
            .lines()
            .find(|l| l.starts_with("success rate"))
            .unwrap();
        let rate: f64 = rate_line
            .split_whitespace()
            .last()
            .unwrap()
            .parse()
            .unwrap();
        assert!((0.0..=1.0).contains(&rate));

        let result: AllocationResult = read_json(&dir.path().join("r.json")).unwrap();
        assert_eq!(result.success_rate, rate);
        let check = nfcran(
            &["check", "--scenario", "s.json", "--assignment", "r.json"],
            dir.path(),
        );
        assert_eq!(check.status.code(), Some(0), "{}", stdout(&check));
        assert!(stdout(&check).contains("feasible"));
    }
}

#[test]
fn exact_on_large_instance_hits_guard() {
    let dir = tempfile::tempdir().unwrap();
    nfcran(
        &[
            "gen",
            "--ues-per-cell",
            "50",
            "--seed",
            "3",
            "--out",
            "s.json",
        ],
        dir.path(),
    );
    let out = nfcran(
        &[
            "solve", "--in", "s.json", "--solver", "exact", "--out", "r.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("instance too large"));
    assert!(!dir.path().join("r.json").exists());
}

#[test]
fn check_reports_c4_for_all_nec_in_one_cell() {
    let dir = tempfile::tempdir().unwrap();
    nfcran(
        &[
            "gen",
            "--cells",
            "1",
            "--ues-per-cell",
            "6",
            "--seed",
            "9",
            "--nec-capacity",
            "1e10",
            "--out",
            "s.json",
        ],
        dir.path(),
    );
    let out = nfcran(&["solve", "--in", "s.json", "--out", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));

    // Hand-edit: every task onto the cell's NEC.
    let path = dir.path().join("r.json");
    let text = fs::read_to_string(&path).unwrap();
    let edited = text
        .replace("\"FEC\"", "\"NEC\"")
        .replace("\"REJECT\"", "\"NEC\"");
    fs::write(dir.path().join("edited.json"), edited).unwrap();

    let out = nfcran(
        &[
            "check",
            "--scenario",
            "s.json",
            "--assignment",
            "edited.json",
            "--report",
            "rep.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
    assert!(stdout(&out).contains("C4"));
    let report: serde_json::Value = read_json(&dir.path().join("rep.json")).unwrap();
    assert_eq!(report["feasible"], false);
    assert_eq!(report["violations"][0]["constraint"], "C4");
}

#[test]
fn check_on_mismatched_files_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    nfcran(
        &[
            "gen",
            "--ues-per-cell",
            "2",
            "--seed",
            "1",
            "--out",
            "a.json",
        ],
        dir.path(),
    );
    nfcran(
        &[
            "gen",
            "--ues-per-cell",
            "3",
            "--seed",
            "1",
            "--out",
            "b.json",
        ],
        dir.path(),
    );
    nfcran(&["solve", "--in", "b.json", "--out", "rb.json"], dir.path());
    let out = nfcran(
        &["check", "--scenario", "a.json", "--assignment", "rb.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("does not match"));

    fs::write(dir.path().join("junk.json"), "{ not json").unwrap();
    let out = nfcran(
        &[
            "check",
            "--scenario",
            "junk.json",
            "--assignment",
            "rb.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = nfcran(
        &["solve", "--in", "missing.json", "--out", "x.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bare_assignment_documents_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    nfcran(
        &[
            "gen",
            "--ues-per-cell",
            "2",
            "--seed",
            "1",
            "--cells",
            "1",
            "--out",
            "s.json",
        ],
        dir.path(),
    );
    let doc = r#"{"decisions":[
        {"cell_id":0,"ue_index":0,"decision":"NEC"},
        {"cell_id":0,"ue_index":1,"decision":"REJECT"}]}"#;
    fs::write(dir.path().join("a.json"), doc).unwrap();
    let out = nfcran(
        &["check", "--scenario", "s.json", "--assignment", "a.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn solve_refuses_malformed_scenario() {
    let dir = tempfile::tempdir().unwrap();
    nfcran(
        &[
            "gen",
            "--ues-per-cell",
            "2",
            "--seed",
            "1",
            "--out",
            "s.json",
        ],
        dir.path(),
    );
    let path = dir.path().join("s.json");
    let mut s = read_scenario(&path).unwrap();
    s.cells[0].ues[0].link.wireless_rate = 0.0;
    nfcran::io::write_scenario(&path, &s).unwrap();
    let out = nfcran(&["solve", "--in", "s.json", "--out", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("wireless_rate"));
}

#[test]
fn sweep_default_table_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = nfcran(
        &[
            "sweep", "--seeds", "3", "--out", "t.csv", "--detail", "d.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# sweep spec"));
    assert!(lines[0].contains("\"baseline_fec_capacity\":1e+16"));
    assert_eq!(
        lines[1],
        "ues_per_cell,architecture,solver,mean_success_rate,std_success_rate,n_seeds"
    );
    assert_eq!(lines.len(), 2 + 5 * 2);
    assert!(stdout(&out).contains("NFC_RAN/greedy-min-footprint"));
    let detail: nfcran::experiment::SweepResult = read_json(&dir.path().join("d.json")).unwrap();
    assert!(detail.rows.iter().all(|r| r.per_seed.len() == 3));
}

#[test]
fn sweep_single_seed_has_zero_std() {
    let dir = tempfile::tempdir().unwrap();
    let out = nfcran(
        &[
            "sweep",
            "--seeds",
            "1",
            "--ues-per-cell",
            "10,20",
            "--solver",
            "greedy-min-footprint,greedy-penalty",
            "--matched-baseline",
            "--out",
            "t.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 2 * 3 * 2);
    assert!(rows.iter().all(|r| r.split(',').nth(4) == Some("0.000000")));
}

#[test]
fn sweep_from_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = nfcran::experiment::SweepSpec::paper();
    spec.ues_per_cell_values = vec![2];
    spec.seeds = vec![1, 2];
    spec.solvers_to_run = vec![nfcran::experiment::Algorithm::Exact];
    nfcran::io::write_json(&dir.path().join("spec.json"), &spec).unwrap();
    let out = nfcran(
        &["sweep", "--spec", "spec.json", "--out", "t.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    spec.ues_per_cell_values = vec![5];
    nfcran::io::write_json(&dir.path().join("big.json"), &spec).unwrap();
    let out = nfcran(
        &["sweep", "--spec", "big.json", "--out", "u.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("u.csv").exists());
}

#[test]
fn written_files_reread_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    nfcran(
        &[
            "gen",
            "--ues-per-cell",
            "5",
            "--seed",
            "11",
            "--out",
            "s.json",
        ],
        dir.path(),
    );
    nfcran(
        &[
            "solve",
            "--in",
            "s.json",
            "--solver",
            "fec-only-greedy",
            "--out",
            "r.json",
        ],
        dir.path(),
    );
    let s = read_scenario(&dir.path().join("s.json")).unwrap();
    assert!(s.validate().is_empty());
    let r: AllocationResult = read_json(&dir.path().join("r.json")).unwrap();
    r.assignment.check_matches(&s).unwrap();
    assert_eq!(r.assignment.count(Decision::Nec), 0);
    assert_eq!(r.solver_name, "fec-only-greedy-min-footprint");
}
