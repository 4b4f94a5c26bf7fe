use std::path::Path;
use std::process::{Command, Output};

fn kapteyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kapteyn")).args(args).output().expect("spawn kapteyn")
}

fn stdout(args: &[&str]) -> Vec<u8> {
    let out = kapteyn(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

const KAPTEYN: &str = "family = kapteyn\ncoefficients = kepler-kapteyn\nmean_anomaly = 0.2\nn = 12\n";
const RANDOM: &str = "family = power\ncoefficients = random-uniform\nn = 10\n";

#[test]
fn radius_examples() {
    assert_eq!(stdout(&["radius", "1.5707963"]), b"0.662743\n");
    assert_eq!(stdout(&["radius", "0.2"]), b"0.848897\n");
}

#[test]
fn plot_is_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "k.conf", KAPTEYN);
    let args = |t: &'static str| vec!["--threads", t, "plot", &cfg, "--size", "40x30", "--boundary", "1", "--zeros"];
    let one = stdout(&args("1"));
    let many = stdout(&args("8"));
    assert!(one.starts_with(b"P6 40 30 255\n"));
    assert_eq!(one.len(), 13 + 40 * 30 * 3);
    assert_eq!(one, many);
}

#[test]
fn png_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "k.conf", KAPTEYN);
    let png = dir.path().join("out.png");
    stdout(&["plot", &cfg, "--size", "16x16", "--out", png.to_str().unwrap()]);
    let bytes = std::fs::read(&png).unwrap();
    assert_eq!(&bytes[..8], b"\x89PNG\r\n\x1a\n");
}

#[test]
fn zeros_report_and_thread_independence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "k.conf", KAPTEYN);
    let a = stdout(&["--threads", "1", "zeros", &cfg, "--window=-2,-2,2,2"]);
    let b = stdout(&["--threads", "8", "zeros", &cfg, "--window=-2,-2,2,2"]);
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("zeros-report v1\n"));
    assert!(text.contains("\nunresolved 0\n"));
}

#[test]
fn random_coefficients_need_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "r.conf", RANDOM);
    let out = kapteyn(&["zeros", &cfg]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
    let a = stdout(&["--seed", "9", "zeros", &cfg, "--window=-4,-4,4,4"]);
    let b = stdout(&["--seed", "9", "zeros", &cfg, "--window=-4,-4,4,4"]);
    let c = stdout(&["--seed", "10", "zeros", &cfg, "--window=-4,-4,4,4"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn growth_and_density_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "k.conf", KAPTEYN);
    let g = String::from_utf8(stdout(&["growth", &cfg, "--grid", "3x2", "--n-max", "64"])).unwrap();
    let records: Vec<&str> = g.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(records.len(), 6);
    assert!(records.iter().all(|r| r.split_whitespace().count() == 5));

    let zeta = write_config(dir.path(), "z.conf", "family = dirichlet\ncoefficients = zeta\nn = 10\n");
    let d = String::from_utf8(stdout(&["density", &zeta, "--theta", "1.5707963267948966", "--delta", "0.2", "--r-max", "60", "--r-steps", "3"])).unwrap();
    assert!(d.contains("\npredicted 0.366"), "{d}");
    assert_eq!(d.lines().filter(|l| !l.starts_with('#')).count(), 10);
}

#[test]
fn unknown_suite_is_an_error() {
    let out = kapteyn(&["verify", "nope"]);
    assert!(!out.status.success());
}
