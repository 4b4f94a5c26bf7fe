//! Prints one PASS/FAIL line per acceptance criterion.
//!
//! Criteria 7 and 9 are known to fail; they are reported but do not fail
//! the run. Any other failure exits nonzero.

use kapteyn_acceptance::{run_suite, CommandRunner};
use std::process::{Command, ExitCode};

const KNOWN_FAILING: [u8; 2] = [7, 9];

struct Binary;

impl CommandRunner for Binary {
    fn run(&self, args: &[String]) -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_kapteyn")).args(args).output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{}: {}", out.status, String::from_utf8_lossy(&out.stderr).trim()));
        }
        Ok(out.stdout)
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters: nothing to enumerate here
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    println!("\nrunning acceptance criteria");
    let outcomes = run_suite("all", Some(&Binary), |o| println!("{o}")).expect("suite `all` exists");
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let unexpected: Vec<_> = outcomes.iter().filter(|o| !o.passed && !KNOWN_FAILING.contains(&o.id)).collect();
    println!(
        "acceptance: {passed}/{} passed; known failing: {:?}; unexpected failures: {}\n",
        outcomes.len(),
        KNOWN_FAILING,
        unexpected.len()
    );
    if outcomes.len() == 11 && unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
