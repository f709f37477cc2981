//! Runs every acceptance criterion with the stock Rb-87 constants and prints
//! one `PASS|FAIL` line each. Exits non-zero if any criterion fails.

use auxsync_core::PhysicalConstants;
use auxsync_validation::run_acceptance;

fn main() {
    let reports = run_acceptance(&PhysicalConstants::rb87());
    for r in &reports {
        println!("{}", r.line());
    }
    let failed: Vec<u8> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.id)
        .collect();
    println!(
        "{} of {} criteria passed",
        reports.len() - failed.len(),
        reports.len()
    );
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
