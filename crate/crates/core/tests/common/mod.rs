#![allow(dead_code)]

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use digraph_spectra::Digraph;

/// `alpha * Deg + (1 - alpha) * A`, built straight from the arc list.
pub fn alpha_matrix(g: &Digraph, alpha: f64) -> DMatrix<f64> {
    let n = g.order();
    let mut a = DMatrix::zeros(n, n);
    for (u, v) in g.arcs() {
        a[(u, v)] += 1.0 - alpha;
        a[(u, u)] += alpha;
    }
    a
}

/// Eigenvalues from nalgebra, one diagonal block of the full matrix per
/// strong component so that acyclic parts come out exact.
pub fn oracle_eigenvalues(g: &Digraph, alpha: f64) -> Vec<Complex64> {
    let a = alpha_matrix(g, alpha);
    let mut out = Vec::with_capacity(g.order());
    for comp in g.strong_components() {
        let block = DMatrix::from_fn(comp.len(), comp.len(), |i, j| a[(comp[i], comp[j])]);
        out.extend(oracle_matrix_eigenvalues(&block));
    }
    out
}

/// nalgebra's QR sweep has no exceptional shifts and can cycle forever on
/// permutation-like matrices, so it runs with an iteration cap and retries
/// on a random orthogonal similarity of the input. Symmetric input goes
/// through the symmetric solver instead.
pub fn oracle_matrix_eigenvalues(a: &DMatrix<f64>) -> Vec<Complex64> {
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![real(a[(0, 0)])];
    }
    if a == &a.transpose() {
        let eig = SymmetricEigen::new(a.clone());
        return eig
            .eigenvalues
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let mut m = a.clone();
    for _ in 0..8 {
        if let Some(schur) = Schur::try_new(m.clone(), 1e-14, 10_000) {
            let values: Vec<Complex64> = schur
                .complex_eigenvalues()
                .iter()
                .map(|z| Complex64::new(z.re, z.im))
                .collect();
            if values.iter().all(|z| z.is_finite()) {
                return values;
            }
        }
        let q = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))
            .qr()
            .q();
        m = q.transpose() * a * &q;
    }
    panic!("oracle Schur decomposition failed on a {n}x{n} matrix");
}

/// Largest distance between paired elements of two multisets, pairing each
/// expected value with its nearest unused computed value.
pub fn multiset_deviation(expected: &[Complex64], computed: &[Complex64]) -> f64 {
    assert_eq!(expected.len(), computed.len(), "spectrum sizes differ");
    let mut used = vec![false; computed.len()];
    let mut worst: f64 = 0.0;
    for e in expected {
        let (j, d) = computed
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, c)| (j, (c - e).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("same length");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Spectrum of the complete symmetric digraph: `n - 1` once and
/// `alpha n - 1` with multiplicity `n - 1`.
pub fn complete_spectrum(n: usize, alpha: f64) -> Vec<Complex64> {
    let mut s = vec![real(n as f64 - 1.0)];
    s.extend(std::iter::repeat_n(real(alpha * n as f64 - 1.0), n - 1));
    s
}

/// Spectrum of the directed k-cycle: `alpha + (1 - alpha) w^j`.
pub fn cycle_spectrum(k: usize, alpha: f64) -> Vec<Complex64> {
    (0..k)
        .map(|j| {
            real(alpha)
                + (1.0 - alpha)
                    * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64)
        })
        .collect()
}

/// Spectrum of the complete bipartite symmetric digraph with parts of size
/// `t`: `t`, `(2 alpha - 1) t` and `alpha t` with multiplicity `2t - 2`.
pub fn bipartite_spectrum(t: usize, alpha: f64) -> Vec<Complex64> {
    let tf = t as f64;
    let mut s = vec![real(tf), real((2.0 * alpha - 1.0) * tf)];
    s.extend(std::iter::repeat_n(real(alpha * tf), 2 * t - 2));
    s
}

/// Largest entry of `A A^T - A^T A`.
pub fn commutator_max(a: &DMatrix<f64>) -> f64 {
    let c = a * a.transpose() - a.transpose() * a;
    c.iter().fold(0.0, |m, x| m.max(x.abs()))
}
