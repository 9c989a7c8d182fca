//! One PASS/FAIL line per criterion. Exits nonzero only when a check outside
//! the documented known gaps fails.

use gsp6_tools::config::RunConfig;
use gsp6_tools::verify::{self, Status, KNOWN_GAPS};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cfg = RunConfig {
        threads: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        ..RunConfig::default()
    };
    let rep = verify::run(&cfg, None, &[]);
    for line in verify::summary_lines(&rep) {
        println!("{line}");
    }
    for c in rep.checks.iter().filter(|c| c.status == Status::Fail) {
        for w in c.witnesses.iter().take(2) {
            println!("   check {} witness: {w}", c.id);
        }
    }
    let passed = rep.checks.iter().filter(|c| c.status == Status::Pass).count();
    println!(
        "{passed}/{} criteria pass; known gaps {KNOWN_GAPS:?}; unexpected failures {:?}",
        rep.checks.len(),
        rep.unexpected_failures
    );
    if rep.unexpected_failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
