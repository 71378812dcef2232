//! Running the randomized verification suites from code: every registered
//! suite at 100 trials, printing one line per suite.

use splitlab::testgen::{run_suite, SUITE_IDS};

fn main() {
    let trials = 100;
    let seed = 7;
    let mut total_failures = 0;
    println!("running {} suites at {trials} trials (seed {seed})\n", SUITE_IDS.len());
    for id in SUITE_IDS {
        let result = run_suite(id, trials, seed).unwrap();
        total_failures += result.failures;
        println!(
            "  {:<22} failures = {:<3} worst residual = {:.3e}",
            result.suite_id, result.failures, result.worst_residual
        );
        if let Some(ce) = result.counterexample {
            println!("    counterexample: {ce}");
        }
    }
    println!("\ntotal failures: {total_failures}");
    std::process::exit(if total_failures == 0 { 0 } else { 1 });
}
