//! Spectrum, spectral radius and low energy of an edge-list file or, without
//! arguments, of the directed 5-cycle.
//!
//! ```text
//! cargo run --example analyze_digraph -- [path] [alpha]
//! ```

use std::{env, fs};

use digraph_spectra::{generators, Alpha, AlphaMatrix, Digraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = env::args().skip(1).collect();
    let g = match args.first() {
        Some(path) => Digraph::parse(&fs::read_to_string(path)?)?,
        None => generators::directed_cycle(5)?,
    };
    let alpha: Alpha = args.get(1).map_or("1/5", String::as_str).parse()?;

    let matrix = AlphaMatrix::new(&g, alpha);
    let spectrum = matrix.eigenvalues()?;
    println!("n = {}, m = {}, alpha = {alpha}", g.order(), g.size());
    for z in spectrum.eigenvalues() {
        println!("  {:>+.10} {:>+.10}i", z.re, z.im);
    }
    println!("spectral radius {:.10}", spectrum.spectral_radius()?);
    println!("low energy      {:.10}", spectrum.low_energy()?);
    println!("||A||_F         {:.10}", matrix.frobenius_norm());
    Ok(())
}
