//! Every bound next to the exact spectral radius and low energy, with the
//! numeric and structural equality verdicts.
//!
//! ```text
//! cargo run --example certify_bounds -- [alpha]
//! ```

use std::env;

use digraph_spectra::{generators, Alpha, BoundId, BoundReport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha: Alpha = env::args().nth(1).as_deref().unwrap_or("1/3").parse()?;
    let graphs = [
        ("K5", generators::complete_symmetric(5)),
        ("K3 + 2K1", generators::complete_plus_isolated(3, 5)?),
        ("C5", generators::directed_cycle(5)?),
        ("K{3,3}", generators::complete_bipartite_symmetric(3)?),
        ("T7", generators::rotational_tournament(7)?),
    ];
    for (name, g) in &graphs {
        let report = BoundReport::compute(g, alpha)?;
        println!(
            "{name}: rho = {:.6}, E = {:.6}",
            report.rho_exact, report.energy_exact
        );
        for id in BoundId::ALL {
            let Some(value) = report.bound_value(id) else {
                println!("  {:<16} undefined", id.as_str());
                continue;
            };
            let flag = &report.equality_flags[&id];
            println!(
                "  {:<16} {value:>12.6}  equal {:<5} predicted {}",
                id.as_str(),
                flag.numeric_equality,
                flag.structural_match
            );
        }
    }
    Ok(())
}
