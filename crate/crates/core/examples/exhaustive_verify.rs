//! Runs every check on all digraphs of one order and prints the per-check
//! evaluation and failure counts.
//!
//! ```text
//! cargo run --release --example exhaustive_verify -- [order]
//! ```

use std::env;

use digraph_spectra::verify::{default_alpha_grid, verify_order, MAX_SCOPE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = env::args().nth(1).map_or(Ok(4), |s| s.parse())?;
    if n > MAX_SCOPE {
        return Err(format!("order {n} above {MAX_SCOPE}").into());
    }
    let alphas = default_alpha_grid(n);
    let report = verify_order(n, &alphas);
    println!(
        "{} digraphs on {n} vertices, alpha in {:?}",
        report.digraphs, report.alphas
    );
    for (check, count) in &report.checks {
        println!(
            "  {check:<28} {count:>9} {:>4}",
            report.failures.get(check).copied().unwrap_or(0)
        );
    }
    match &report.first_counterexample {
        None => println!("all checks pass"),
        Some(c) => println!(
            "first failure: {} at alpha {}\n{}",
            c.check, c.alpha, c.digraph
        ),
    }
    Ok(())
}
