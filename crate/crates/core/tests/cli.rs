use std::process::{Command, Output};

fn porofrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_porofrac")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn config_output_runs_as_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = porofrac(&["config", "--preset", "appendix"]);
    assert!(o.status.success());
    let path = dir.path().join("appendix.toml");
    std::fs::write(&path, &o.stdout).unwrap();
    let out = dir.path().join("out");
    let o = porofrac(&["run", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("status: ok"));
    assert!(out.join("report.txt").exists());
    assert!(out.join("appendix_fractures_0001.csv").exists());
}

#[test]
fn mesh_info_reports_counts() {
    let o = porofrac(&["mesh-info", "--preset", "example1", "--level", "1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("cells: 1024"), "{s}");
    assert!(s.contains("fracture fracture_4"), "{s}");
}

#[test]
fn convergence_writes_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = porofrac(&[
        "convergence",
        "--preset",
        "appendix",
        "--levels",
        "0,1,2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("fitted order"));
    let table = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert!(table.lines().count() >= 3);
}

#[test]
fn exit_codes_follow_the_error_kind() {
    // Validation.
    let o = porofrac(&["run", "--preset", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown preset"));

    // Missing file.
    let o = porofrac(&["mesh-info", "--config", "/nonexistent/scenario.toml"]);
    assert_eq!(o.status.code(), Some(3));

    // Non-convergence: a loaded fracture cannot settle in one iteration.
    let dir = tempfile::tempdir().unwrap();
    let cfg = porofrac(&["config", "--preset", "appendix-constant"]);
    let text = stdout(&cfg).replace("max_iterations = 50", "max_iterations = 1");
    let path = dir.path().join("short.toml");
    std::fs::write(&path, text).unwrap();
    let out = dir.path().join("out");
    let o = porofrac(&["run", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let report = std::fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("FAILED"));

    // Malformed document.
    std::fs::write(&path, "schema_version = 1\nname = 3\n").unwrap();
    let o = porofrac(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn overrides_reach_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    let o = porofrac(&[
        "run",
        "--preset",
        "appendix",
        "--c",
        "1e10",
        "--tolerance",
        "1e-8",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let baseline = tempfile::tempdir().unwrap();
    assert!(porofrac(&["run", "--preset", "appendix", "--out", baseline.path().to_str().unwrap()])
        .status
        .success());
    let a = std::fs::read(dir.path().join("appendix_fractures_0001.csv")).unwrap();
    let b = std::fs::read(baseline.path().join("appendix_fractures_0001.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn usage_errors_are_validation_errors() {
    assert_eq!(porofrac(&["run"]).status.code(), Some(1));
    assert_eq!(porofrac(&["run", "--preset", "appendix", "--config", "x.toml"]).status.code(), Some(1));
    assert_eq!(porofrac(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(porofrac(&["--help"]).status.code(), Some(0));
}
