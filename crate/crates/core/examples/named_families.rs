//! Spectra of the named families the generators provide, at a fixed alpha.

use digraph_spectra::{generators, Alpha, AlphaMatrix, Digraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = Alpha::rational(1, 4)?;
    let families: Vec<(&str, Digraph)> = vec![
        ("complete K4", generators::complete_symmetric(4)),
        ("K3 + 2K1", generators::complete_plus_isolated(3, 5)?),
        ("empty on 3", generators::empty(3)),
        ("3 digons", generators::digon_union(3)?),
        (
            "digon chain",
            generators::digon_chain(3, &[(1, 3), (4, 5)])?,
        ),
        ("cycle C6", generators::directed_cycle(6)?),
        ("K{2,2}", generators::complete_bipartite_symmetric(2)?),
        ("tournament T5", generators::rotational_tournament(5)?),
    ];
    for (name, g) in &families {
        let spectrum = AlphaMatrix::new(g, alpha).eigenvalues()?;
        let values: Vec<String> = spectrum
            .eigenvalues()
            .iter()
            .map(|z| {
                if z.im == 0.0 {
                    format!("{:.4}", z.re)
                } else {
                    format!("{:.4}{:+.4}i", z.re, z.im)
                }
            })
            .collect();
        println!(
            "{name:<14} rho {:.4}  E {:.4}  [{}]",
            spectrum.spectral_radius()?,
            spectrum.low_energy()?,
            values.join(", ")
        );
    }
    Ok(())
}
