//! Relative error of the Koolen-Moulton type spectral-radius bound on random
//! core-complete digraphs (n = 100, r = 5, 200 extra arcs) across beta.
//!
//! ```text
//! cargo run --release --example table1_spectral_radius -- [alpha] [samples] [seed]
//! ```

use std::env;

use digraph_spectra::alpha::Alpha;
use digraph_spectra::experiment::{
    emit_table, run_table, threads_from_env, BaselineRegistry, TableConfig,
};
use digraph_spectra::generators::RngSeed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = env::args().skip(1).collect();
    let alpha: Alpha = args.first().map_or("0.3", String::as_str).parse()?;
    let samples: usize = args.get(1).map_or(Ok(200), |s| s.parse())?;
    let seed: u64 = args.get(2).map_or(Ok(2024), |s| s.parse())?;

    let cfg = TableConfig::spectral_radius(alpha, samples, RngSeed(seed));
    let cells = run_table(&cfg, &BaselineRegistry::new(), threads_from_env())?;
    print!("{}", emit_table(&cfg, &cells)?.csv);
    Ok(())
}
