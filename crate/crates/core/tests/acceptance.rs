//! One line per acceptance criterion; exits nonzero if any fails.

use khtor_core::selftest::{run_criterion, Options, Verdict};

fn main() {
    let opts = Options::default();
    let mut failed = 0;
    for id in 1..=10 {
        let report = run_criterion(id, &opts);
        println!("{report}");
        if !matches!(report.verdict, Verdict::Pass) {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} not passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
