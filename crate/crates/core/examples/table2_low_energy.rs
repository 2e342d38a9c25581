//! Relative error of the two low-energy bounds on random di-regular digraphs
//! with k = 6..10 and n = 10k.
//!
//! ```text
//! cargo run --release --example table2_low_energy -- [alpha] [samples] [seed]
//! ```

use std::env;

use digraph_spectra::alpha::Alpha;
use digraph_spectra::experiment::{
    emit_table, run_table, threads_from_env, BaselineRegistry, TableConfig,
};
use digraph_spectra::generators::RngSeed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = env::args().skip(1).collect();
    let alpha: Alpha = args.first().map_or("0.7", String::as_str).parse()?;
    let samples: usize = args.get(1).map_or(Ok(200), |s| s.parse())?;
    let seed: u64 = args.get(2).map_or(Ok(2024), |s| s.parse())?;

    let cfg = TableConfig::low_energy(alpha, samples, RngSeed(seed));
    let cells = run_table(&cfg, &BaselineRegistry::new(), threads_from_env())?;
    print!("{}", emit_table(&cfg, &cells)?.csv);
    Ok(())
}
