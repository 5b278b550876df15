//! Acceptance suite. Prints one line per criterion followed by its checks
//! and exits nonzero if any criterion fails.
//!
//! `TRIMSPEC_CRITERIA=3,6` restricts the run to the listed criteria.

use std::process::ExitCode;
use std::time::Instant;

use trimspec::experiments::acceptance::Acceptance;
use trimspec::experiments::acceptance::CRITERIA;

fn main() -> ExitCode {
    let selection: Vec<usize> = match std::env::var("TRIMSPEC_CRITERIA") {
        Ok(s) if !s.trim().is_empty() => s.split(',').map(|v| v.trim().parse().expect("criterion number")).collect(),
        _ => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let mut acc = Acceptance::new();
    let mut failed = 0;
    for id in selection {
        let t = Instant::now();
        match acc.run(id) {
            Ok(r) => {
                println!("{}  ({:.1} s)", r.summary(), t.elapsed().as_secs_f64());
                for d in &r.details {
                    println!("    {d}");
                }
                failed += usize::from(!r.passed);
            }
            Err(e) => {
                println!("criterion {id:>2}: FAIL  error: {e}");
                failed += 1;
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
