use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sublorentz")).args(args).output().expect("spawn sublorentz")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn example_two_run_reports_arcs_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ex2");
    let o = bin(&[
        "run", "--scenario", "heisenberg_harmonic", "--h0", "0,-2,1", "--t1", "4", "--dt", "0.01",
        "--format", "csv,record,svg", "--out", out.to_str().unwrap(),
    ]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}{}", stderr(&o));
    assert!(text.contains("arcs: LightLike -> TimeLike -> LightLike"), "{text}");
    assert!(text.contains("switch at t = 1.000000: LightLike -> TimeLike"), "{text}");
    assert!(text.contains("switch at t = 1.333333: TimeLike -> LightLike"), "{text}");
    for ext in ["csv", "json", "svg"] {
        assert!(out.join(format!("trajectory.{ext}")).is_file(), "missing {ext}");
    }
    let csv = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,h_1,h_2,h_3,u_1,u_2,u_3,g_1,g_2,g_3,alpha_dual,causal,nu\n"));
    assert_eq!(csv.lines().count(), 402);
}

#[test]
fn plot_redraws_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = bin(&["run", "--scenario", "heisenberg_harmonic", "--h0", "0,-2,1", "--t1", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = out.join("trajectory.csv");
    let svg = dir.path().join("plot.svg");
    let o = bin(&["plot", csv.to_str().unwrap(), "--projection", "0,2", "--out", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let drawn = std::fs::read_to_string(&svg).unwrap();
    assert!(drawn.contains(r#"class="LightLike""#) && drawn.contains(r#"class="TimeLike""#));

    let o = bin(&["plot", csv.to_str().unwrap(), "--projection", "0,5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["plot", dir.path().join("missing.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn covector_without_extremal_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["run", "--scenario", "heisenberg_quadratic", "--h0", "-0.5,0,0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = bin(&["run", "--scenario", "heisenberg_quadratic", "--h0", "1,0,0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(bin(&["run", "--scenario", "no_such", "--h0", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["run", "--scenario", "heisenberg_quadratic", "--h0", "-1,0", "--out", d]).status.code(), Some(2));
    assert_eq!(bin(&["run", "--scenario", "heisenberg_quadratic", "--h0", "-1,0,0", "--dt", "-1", "--out", d]).status.code(), Some(2));
    assert_eq!(bin(&["run", "--scenario", "heisenberg_quadratic", "--h0", "-1,0,0", "--format", "png", "--out", d]).status.code(), Some(2));
    assert_eq!(bin(&["bogus"]).status.code(), Some(2));
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "[scenario]\nname = \"heisenberg_quadratic\"\n[run]\nh0 = [-1, 0, 0]\ndt = \"fast\"\n");
    let o = bin(&["run", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("run.dt"), "{}", stderr(&o));

    let unknown = write(dir.path(), "unknown.toml", "[scenario]\nname = \"heisenberg_quadratic\"\ncolour = 1\n");
    let o = bin(&["check", "--config", &unknown]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn broken_jacobi_is_an_invariant_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "jacobi.toml",
        r#"
[scenario]
name = "custom"
[scenario.algebra]
dim = 5
brackets = [[0, 1, 2, 1.0], [1, 2, 3, 1.0], [0, 3, 4, 1.0]]
[scenario.cone]
kind = "lorentz"
axis = 0
spatial = [1]
[scenario.antinorm]
kind = "quadratic"
[scenario.group]
model = "exp_coordinates"
[run]
h0 = [-1, 0, 0, 0, 0]
"#,
    );
    let o = bin(&["run", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("invariant"), "{}", stderr(&o));
}

#[test]
fn check_reports_duality() {
    let o = bin(&["check", "--scenario", "plane_hybrid"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("dual is NOT an antinorm"), "{text}");
    assert!(text.contains("(1, -1)"), "{text}");

    let o = bin(&["check", "--scenario", "heisenberg_quadratic"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("dual is an antinorm") && text.contains("contact"), "{text}");
}

#[test]
fn scenarios_and_dual() {
    let o = bin(&["scenarios"]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["minkowski_1n", "plane_hybrid", "heisenberg_harmonic", "heisenberg_quadratic", "carnot_r2s4"] {
        assert!(stdout(&o).contains(name));
    }
    let o = bin(&["dual", "--scenario", "heisenberg_harmonic", "--h", "-1,-4,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("alpha_dual: 9"), "{}", stdout(&o));
    let o = bin(&["dual", "--scenario", "heisenberg_harmonic", "--h", "1,-4,0"]);
    assert!(stdout(&o).contains("-inf"), "{}", stdout(&o));
}

#[test]
fn sweep_writes_one_file_per_covector() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.toml",
        "[scenario]\nname = \"heisenberg_quadratic\"\n[run]\nt1 = 0.5\n[sweep]\nh0 = [[-1, 0, 0], [-1.25, 0.75, 0.5], [-1, 1, 0], [-2, 1, 0.5]]\n",
    );
    let out = dir.path().join("sweep");
    let o = bin(&["run", "--config", &cfg, "--sweep", "--out", out.to_str().unwrap()]);
    // the last covector has α∨ = √3, off the normal level set
    assert_eq!(o.status.code(), Some(3), "{}{}", stdout(&o), stderr(&o));
    for k in 0..3 {
        assert!(out.join(format!("trajectory_{k:03}.csv")).is_file());
    }
    assert!(!out.join("trajectory_003.csv").exists());
}
