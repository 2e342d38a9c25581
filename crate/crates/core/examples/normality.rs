//! Algebraic and combinatorial normality tests side by side, with the
//! witness that rules normality out.

use digraph_spectra::spectral::is_normal_topological;
use digraph_spectra::{generators, Alpha, Digraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = Alpha::rational(1, 3)?;
    let graphs: Vec<(&str, Digraph)> = vec![
        ("cycle C4", generators::directed_cycle(4)?),
        ("tournament T7", generators::rotational_tournament(7)?),
        ("K{3,3}", generators::complete_bipartite_symmetric(3)?),
        ("path 0->1->2", Digraph::new(3, [(0, 1), (1, 2)])?),
        (
            "C3 plus chord",
            Digraph::new(3, [(0, 1), (1, 2), (2, 0), (0, 2)])?,
        ),
    ];
    for (name, g) in &graphs {
        let v = is_normal_topological(g, alpha)?;
        println!(
            "{name:<14} algebraic {:<5} combinatorial {:<5} max |[A, A^T]| {:.2e}",
            v.algebraic, v.topological, v.max_commutator_entry
        );
        if let Some(w) = &v.witness {
            println!("               witness {w:?}");
        }
    }
    Ok(())
}
