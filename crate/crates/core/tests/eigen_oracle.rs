mod common;

use num_complex::Complex64;

use common::{alpha_matrix, oracle_eigenvalues};
use digraph_spectra::generators::{core_complete_random, random_digraph, CoreCompleteParams};
use digraph_spectra::linalg::eigenpair_residual;
use digraph_spectra::{Alpha, AlphaMatrix, Digraph, RngSeed};

/// Defective eigenvalues move by `(eps ||A||)^(1/m)` under rounding, where
/// `m` is the size of their cluster, so the pairing tolerance widens with
/// the number of computed eigenvalues nearby.
fn pairing_tolerance(spectrum: &[Complex64], z: Complex64, scale: f64) -> f64 {
    let cluster = spectrum
        .iter()
        .filter(|w| (*w - z).norm() <= 1e-3 * scale)
        .count();
    1e-6 * scale + 10.0 * scale * (f64::EPSILON * scale).powf(1.0 / cluster as f64)
}

fn check_against_oracle(g: &Digraph, alpha: Alpha) {
    let matrix = AlphaMatrix::new(g, alpha);
    let spectrum = matrix.eigenvalues().expect("solver converges");
    let computed = spectrum.eigenvalues();
    let expected = oracle_eigenvalues(g, alpha.value());
    let scale = matrix.frobenius_norm().max(1.0);
    for z in &expected {
        let dev = (nearest(computed, *z) - z).norm();
        let tol = pairing_tolerance(computed, *z, scale);
        assert!(
            dev <= tol,
            "deviation {dev} at {z} on {} at alpha {alpha}",
            g.serialize()
        );
    }
    assert_eq!(computed.len(), expected.len());

    // power sums equal traces of powers, which do not suffer from defectiveness
    let a = alpha_matrix(g, alpha.value());
    let mut power = a.clone();
    for k in 1..=g.order().min(8) {
        let sum: Complex64 = computed.iter().map(|z| z.powu(k as u32)).sum();
        let trace = power.trace();
        let tol = 1e-9 * g.order() as f64 * scale.powi(k as i32);
        assert!(
            (sum.re - trace).abs() <= tol && sum.im.abs() <= tol,
            "sum lambda^{k} = {sum}, trace {trace} on {} at alpha {alpha}",
            g.serialize()
        );
        power = &power * &a;
    }
}

fn nearest(values: &[Complex64], z: Complex64) -> Complex64 {
    *values
        .iter()
        .min_by(|x, y| (*x - z).norm().total_cmp(&(*y - z).norm()))
        .expect("non-empty")
}

#[test]
fn random_digraphs_match_nalgebra() {
    let alphas = ["0", "1/4", "1/2", "0.3", "0.7", "1"].map(|s| s.parse::<Alpha>().unwrap());
    for i in 0..300u64 {
        let n = 1 + (i % 25) as usize;
        let p = [0.1, 0.3, 0.6][(i % 3) as usize];
        let g = random_digraph(n, p, RngSeed(i)).unwrap();
        for &alpha in &alphas {
            check_against_oracle(&g, alpha);
        }
    }
}

#[test]
fn residual_contract_holds() {
    let alpha: Alpha = "0.4".parse().unwrap();
    for i in 0..60u64 {
        let g = random_digraph(4 + (i % 20) as usize, 0.35, RngSeed(1000 + i)).unwrap();
        let matrix = AlphaMatrix::new(&g, alpha);
        let spectrum = matrix.eigenvalues().unwrap();
        for &lambda in spectrum.eigenvalues() {
            let r = eigenpair_residual(matrix.entries(), lambda);
            assert!(
                r <= spectrum.residual_tol(),
                "residual {r} at {lambda} on {}",
                g.serialize()
            );
        }
    }
}

#[test]
fn stress_fixture_converges() {
    let text = include_str!("data/core_complete_qr_stress.txt");
    let g = Digraph::parse(text).unwrap();
    assert_eq!((g.order(), g.size()), (100, 410));
    for alpha in ["0.3", "0.7", "0"] {
        check_against_oracle(&g, alpha.parse().unwrap());
    }
}

#[test]
fn core_complete_samples_match_nalgebra() {
    let alpha: Alpha = "0.3".parse().unwrap();
    for (i, beta) in [0.8, 0.4, 0.1].into_iter().enumerate() {
        let params = CoreCompleteParams::with_default_extra(60, 5, beta);
        for s in 0..5u64 {
            let g = core_complete_random(&params, RngSeed(77).child(i as u64 * 10 + s)).unwrap();
            check_against_oracle(&g, alpha);
        }
    }
}
