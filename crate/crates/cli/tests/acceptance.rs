//! Acceptance criteria at full size and tolerance. Prints one PASS/FAIL line
//! per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use allgenus::criteria::{
    criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8,
    Criterion, LimitsConfig,
};

fn limits() -> Criterion {
    criterion6(&LimitsConfig::default())
}

fn main() -> ExitCode {
    let runs: [fn() -> Criterion; 8] = [
        criterion1, criterion2, criterion3, criterion4, criterion5, limits, criterion7, criterion8,
    ];
    let mut failed = Vec::new();
    for run in runs {
        let start = Instant::now();
        let c = run();
        println!("{}  [{:.1}s]", c.summary(), start.elapsed().as_secs_f64());
        if !c.passed() {
            failed.push(c.id.to_string());
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: criteria {} failed", failed.join(", "));
        ExitCode::FAILURE
    }
}
