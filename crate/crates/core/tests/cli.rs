use std::path::Path;
use std::process::{Command, Output};

use omp_prior::constructions::build_sharp;
use omp_prior::io::{format_problem, read_matrix, write_matrix, SWEEP_CSV_HEADER};
use omp_prior::PriorSupport;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_omp-prior"));
    c.env_remove("OMP_PRIOR_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn demo_sharp_prints_the_tie() {
    let o = run(&["demo", "sharp", "4", "1", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("tie value   7.5000000000000000e-1"));
    assert!(out.contains("success false"));
}

#[test]
fn demo_necessary_prints_theta_and_equal_maxima() {
    let o = run(&["demo", "necessary", "4", "1", "1", "0.25", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let field = |name: &str| -> f64 {
        let line = out.lines().find(|l| l.starts_with(name)).unwrap();
        line.split_whitespace().last().unwrap().parse().unwrap()
    };
    assert!((field("theta") - 0.17321).abs() < 5e-6);
    assert!((field("max over") - field("outside")).abs() < 1e-12);
    assert!((field("outside") - 0.15155).abs() < 5e-6);
}

#[test]
fn demo_usage_errors() {
    assert_eq!(run(&["demo", "sharp", "3", "3", "0"]).status.code(), Some(1));
    assert_eq!(run(&["demo", "necessary", "4", "1", "1"]).status.code(), Some(1));
    assert_eq!(run(&["demo", "necessary", "4", "1", "1", "0.6", "0.1"]).status.code(), Some(1));
    assert_eq!(run(&["demo", "bogus", "4", "1", "1"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
}

#[test]
fn recover_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = build_sharp(4, 1, 1).unwrap();
    let text = format_problem(&inst.matrix, &inst.measurements(), Some(&inst.signal), &inst.prior, 0.0);
    let p = write(dir.path(), "p.toml", &text);

    let o = run(&["recover", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("success true"));
    assert!(out.lines().any(|l| l.trim_start().starts_with("3 ")), "three iterations expected:\n{out}");

    let o = run(&["recover", &p, "--tie", "adversarial", "--stop", "iters", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("success false"));

    let o = run(&["recover", &p, "--stop", "residual", "1e-9", "--tie", "highest"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn recover_with_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let inst = build_sharp(2, 1, 0).unwrap();
    write_matrix(&dir.path().join("a.txt"), &inst.matrix).unwrap();
    assert_eq!(read_matrix(&dir.path().join("a.txt")).unwrap(), inst.matrix);
    let y: Vec<String> = inst.measurements().iter().map(|v| format!("{v:e}")).collect();
    let p = write(dir.path(), "p.toml", &format!("matrix_file = \"a.txt\"\ny = [{}]\nprior = [1]\nk = 2\n", y.join(", ")));
    let o = run(&["recover", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn recover_failures() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "matrix = [[1.0, 0.0]]\ny = [1.0, 2.0]\n");
    let o = run(&["recover", &bad, "--stop", "iters", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("reading problem"));

    assert_eq!(run(&["recover", "/nonexistent/p.toml"]).status.code(), Some(1));

    // Two identical columns in the prior make the first projection singular.
    let dup = write(
        dir.path(),
        "dup.toml",
        "matrix = [[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]]\ny = [1.0, 1.0]\nprior = [0, 1]\n",
    );
    let o = run(&["recover", &dup, "--stop", "iters", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("running OMP"));

    let ok = write(dir.path(), "ok.toml", "matrix = [[1.0, 0.0], [0.0, 1.0]]\ny = [1.0, 0.0]\n");
    assert_eq!(run(&["recover", &ok, "--stop", "iters"]).status.code(), Some(1));
    assert_eq!(run(&["recover", &ok, "--stop", "sometimes", "3"]).status.code(), Some(1));
    assert_eq!(run(&["recover", &ok]).status.code(), Some(1), "no k, no epsilon, no --stop");
    assert_eq!(run(&["recover", &ok, "--tie", "adversarial", "--stop", "iters", "1"]).status.code(), Some(1));
}

#[test]
fn ric_command() {
    let dir = tempfile::tempdir().unwrap();
    let inst = build_sharp(4, 1, 1).unwrap();
    let path = dir.path().join("a.txt");
    write_matrix(&path, &inst.matrix).unwrap();
    let o = run(&["ric", path.to_str().unwrap(), "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let delta: f64 = out.lines().find(|l| l.starts_with("delta")).unwrap()[6..].trim().parse().unwrap();
    assert!((delta - 0.5).abs() < 1e-10);
    assert!(out.contains("witness 0 1 2 3 4 5"));
    assert!(out.contains("subsets 1"));

    let wide: Vec<String> = (0..80).map(|i| if i % 3 == 0 { "1" } else { "0.5" }.to_string()).collect();
    let p = write(dir.path(), "wide.txt", &format!("2 80\n{}\n{}\n", wide.join(" "), wide.join(" ")));
    let o = run(&["ric", &p, "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1646492110120"));

    assert_eq!(run(&["ric", &p, "0"]).status.code(), Some(1));
    let garbage = write(dir.path(), "g.txt", "2 2\n1 0\n");
    assert_eq!(run(&["ric", &garbage, "1"]).status.code(), Some(1));
}

const SWEEP: &str = r#"
[ensemble]
rows = 12
cols = 16
family = "gaussian_normalized"
seed = 4

[[trial]]
k = 3
g = 1
b = 1
trials = 30

[[trial]]
k = 3
g = 2
b = 1
epsilon = 0.01
trials = 20
tie = "adversarial"
verify_ric = true
"#;

#[test]
fn sweep_writes_csv_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SWEEP);
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    let trials = dir.path().join("t.csv");
    let o = run(&["sweep", &cfg, out1.to_str().unwrap(), "--trials-out", trials.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = bin()
        .args(["sweep", &cfg, out2.to_str().unwrap()])
        .env("OMP_PRIOR_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));

    let a = std::fs::read_to_string(&out1).unwrap();
    assert_eq!(a, std::fs::read_to_string(&out2).unwrap());
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], SWEEP_CSV_HEADER);
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("3,1,1,0.0,30,,"), "{}", lines[1]);
    assert!(lines[2].starts_with("3,2,1,0.01,20,"));
    assert_eq!(std::fs::read_to_string(&trials).unwrap().lines().count(), 51);
}

#[test]
fn sweep_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "e.toml", "[ensemble]\nrows = 4\ncols = 4\nfamily = \"identity\"\nseed = 1\n");
    let out = dir.path().join("e.csv");
    assert_eq!(run(&["sweep", &empty, out.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), format!("{SWEEP_CSV_HEADER}\n"));

    let o = bin()
        .args(["sweep", &empty, out.to_str().unwrap()])
        .env("OMP_PRIOR_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));

    let infeasible = write(
        dir.path(),
        "i.toml",
        "[ensemble]\nrows = 4\ncols = 4\nfamily = \"identity\"\nseed = 1\n[[trial]]\nk = 3\ng = 3\nb = 0\ntrials = 1\n",
    );
    assert_eq!(run(&["sweep", &infeasible, out.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn problem_file_format_round_trips() {
    let inst = build_sharp(3, 1, 0).unwrap();
    let text = format_problem(&inst.matrix, &inst.measurements(), Some(&inst.signal), &PriorSupport::empty(), 0.5);
    let p = omp_prior::io::parse_problem(&text, Path::new(".")).unwrap();
    assert_eq!(p.matrix, inst.matrix);
    assert_eq!(p.truth.as_ref(), Some(&inst.signal));
    assert_eq!(p.epsilon, 0.5);
}
