use std::path::{Path, PathBuf};
use std::process::Command;

use sins_cli::{cmd_flops, cmd_propagate, cmd_sweep, TRAJECTORY_HEADER};
use sins_core::integrators::Method;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn sins() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sins"))
}

fn last_row(csv: &str) -> Vec<f64> {
    csv.lines().last().unwrap().split(',').map(|f| f.parse().unwrap()).collect()
}

fn first_row(csv: &str) -> Vec<f64> {
    csv.lines().nth(1).unwrap().split(',').map(|f| f.parse().unwrap()).collect()
}

#[test]
fn closed_circle_closes_the_loop() {
    let s = cmd_propagate(&scenario("circle.scn"), Method::Closed, 1, None, None).unwrap();
    let lines: Vec<&str> = s.csv.lines().collect();
    assert_eq!(lines[0], TRAJECTORY_HEADER);
    assert_eq!(lines.len(), 1 + 64);
    let (a, b) = (first_row(&s.csv), last_row(&s.csv));
    assert!((b[0] - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    for i in 1..16 {
        assert!((a[i] - b[i]).abs() < 1e-9, "column {i}: {} vs {}", a[i], b[i]);
    }
}

#[test]
fn single_sample_gives_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.scn");
    std::fs::write(&path, "duration = 0.01\ndt = 0.01\ninput = freefall\n").unwrap();
    let s = cmd_propagate(&path, Method::Closed, 1, None, None).unwrap();
    assert_eq!(s.csv.lines().count(), 3);
}

#[test]
fn substeps_change_rk4_but_not_closed() {
    let path = scenario("circle.scn");
    let rk1 = cmd_propagate(&path, Method::Rk4, 1, None, None).unwrap().csv;
    let rk16 = cmd_propagate(&path, Method::Rk4, 16, None, None).unwrap().csv;
    assert_ne!(last_row(&rk1), last_row(&rk16));
    let c1 = last_row(&cmd_propagate(&path, Method::Closed, 1, None, None).unwrap().csv);
    let c16 = last_row(&cmd_propagate(&path, Method::Closed, 16, None, None).unwrap().csv);
    for (a, b) in c1.iter().zip(&c16) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn sweep_ratios() {
    let path = scenario("circle.scn");
    let hs = [0.2, 0.1, 0.05, 0.025, 0.0125];
    let closed = cmd_sweep(&path, Method::Closed, &hs, None, None).unwrap();
    assert!(closed.iter().all(|p| p.pos_err <= 1e-9));
    let rk4 = cmd_sweep(&path, Method::Rk4, &hs[1..], None, None).unwrap();
    for w in rk4.windows(2) {
        let r = w[0].pos_err / w[1].pos_err;
        assert!((14.0..18.0).contains(&r), "rk4 ratio {r}");
    }
    let euler = cmd_sweep(&path, Method::Euler, &[0.01, 0.005, 0.0025], None, None).unwrap();
    for w in euler.windows(2) {
        let r = w[0].pos_err / w[1].pos_err;
        assert!((1.8..2.2).contains(&r), "euler ratio {r}");
    }
}

#[test]
fn recorded_input_sweep_converges() {
    let pts = cmd_sweep(&scenario("recorded.scn"), Method::Rk4, &[0.05, 0.025, 0.0125], None, None).unwrap();
    assert!(pts[0].pos_err > pts[1].pos_err && pts[1].pos_err > pts[2].pos_err);
}

#[test]
fn flops_matches_golden_file() {
    let golden = include_str!("golden/flops.csv");
    let a = cmd_flops(None, None).unwrap();
    let b = cmd_flops(None, None).unwrap();
    assert_eq!(a.csv, b.csv);
    assert_eq!(a.csv, golden);
}

#[test]
fn binary_writes_outputs_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let svg = dir.path().join(format!("{tag}.svg"));
        let status = sins()
            .args(["sweep", "--scenario"])
            .arg(scenario("circle.scn"))
            .args(["--method", "rk4", "--h-list", "0.1,0.05", "--out"])
            .arg(&csv)
            .arg("--svg")
            .arg(&svg)
            .status()
            .unwrap();
        assert!(status.success());
        (std::fs::read(&csv).unwrap(), std::fs::read_to_string(&svg).unwrap())
    };
    let (a, svg) = run("a");
    let (b, _) = run("b");
    assert_eq!(a, b);
    assert!(svg.starts_with("<svg"));

    for cmd in [&["propagate"][..], &["flops"][..]] {
        let out = dir.path().join("x.csv");
        let svg = dir.path().join("x.svg");
        let mut c = sins();
        c.args(cmd);
        if cmd[0] == "propagate" {
            c.arg("--scenario").arg(scenario("tumble.scn"));
        }
        assert!(c.arg("--out").arg(&out).arg("--svg").arg(&svg).status().unwrap().success());
        assert!(std::fs::metadata(&svg).unwrap().len() > 0);
    }
}

fn expect_failure(args: &[&str], needle: &str) {
    let out = sins().args(args).output().unwrap();
    assert!(!out.status.success(), "{args:?} succeeded");
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: ") && err.contains(needle), "{err}");
}

#[test]
fn error_paths_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.scn");
    std::fs::write(&bad, "input = circle\nspeed = 1\nradius = oops\n").unwrap();
    let circle = scenario("circle.scn");
    let circle = circle.to_str().unwrap();

    expect_failure(&["propagate", "--scenario", "/nonexistent/x.scn"], "/nonexistent/x.scn");
    expect_failure(&["propagate", "--scenario", bad.to_str().unwrap()], "line 3");
    expect_failure(&["propagate", "--scenario", circle, "--method", "rk45"], "rk45");
    expect_failure(&["propagate", "--scenario", circle, "--out", "/nonexistent/dir/out.csv"], "cannot write");
    expect_failure(&["sweep", "--scenario", circle, "--h-list", "0.1"], "two step sizes");
    expect_failure(&["flops", "--out", "/nonexistent/dir/f.csv"], "cannot write");
}

#[test]
fn missing_csv_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rec.scn");
    std::fs::write(&path, "input = csv\ncsv = gone.csv\n").unwrap();
    expect_failure(&["propagate", "--scenario", path.to_str().unwrap()], "gone.csv");
}
