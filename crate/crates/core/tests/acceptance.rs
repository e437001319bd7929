//! One PASS/FAIL line per acceptance criterion.

use std::process::ExitCode;
use std::time::Instant;

use logpair::verify::acceptance::{Context, CRITERIA};

fn main() -> ExitCode {
    let only: Option<u32> = std::env::var("LOGPAIR_CRITERION").ok().and_then(|v| v.parse().ok());
    let ctx = match Context::new() {
        Ok(c) => c,
        Err(e) => {
            println!("FAIL setup: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut failed = 0;
    for id in 1..=CRITERIA {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = ctx.run(id);
        println!("{} [{:.1}s]", outcome.line(), start.elapsed().as_secs_f64());
        failed += usize::from(!outcome.passed);
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
