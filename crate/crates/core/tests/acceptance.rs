//! Runs the twelve acceptance criteria and prints one PASS or FAIL line
//! each. Criteria listed in `KNOWN_FAILURES` still run and still print
//! FAIL; they do not fail the target, every other FAIL does.

use std::process::ExitCode;

use teapot_core::acceptance::{run, AcceptanceConfig};

/// Criteria whose thresholds the sampled convergence does not reach; see
/// the README.
const KNOWN_FAILURES: [u32; 2] = [9, 10];

fn main() -> ExitCode {
    let results = run(&AcceptanceConfig::default(), |r| println!("{r}"));
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} criteria passed", results.len());
    let unexpected: Vec<u32> = results
        .iter()
        .filter(|r| !r.passed && !KNOWN_FAILURES.contains(&r.id))
        .map(|r| r.id)
        .collect();
    for r in results
        .iter()
        .filter(|r| r.passed && KNOWN_FAILURES.contains(&r.id))
    {
        println!(
            "note: criterion {} is listed as a known failure but passed",
            r.id
        );
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
