//! Run the acceptance criteria at reduced bounds, printing one line per
//! criterion. The `cycat verify` subcommand runs the same suite at full
//! bounds.
//!
//!     cargo run --release --example verify_all

use cycat::verify::{run_all, VerifyBounds, CRITERIA};

fn main() {
    let bounds = VerifyBounds {
        max_n: 6,
        ms: vec![3, 4],
        max_s: 2,
        trials: 25,
        cy_samples: 40,
        ..VerifyBounds::default()
    };
    let mut failed = 0;
    for r in run_all(&bounds) {
        println!(
            "[{}] criterion {:>2}: {:<42} {:>7} ms  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            CRITERIA[r.id - 1],
            r.millis,
            r.details
        );
        if !r.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
