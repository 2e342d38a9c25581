//! A_alpha matrices of digraphs and their spectra.
//!
//! `A_alpha(D) = alpha * Deg(D) + (1 - alpha) * A(D)` where `Deg` is the
//! diagonal out-degree matrix. Spectra are computed per strong component:
//! after permuting vertices into condensation order the matrix is block upper
//! triangular, so its eigenvalues are the union of the eigenvalues of the
//! diagonal blocks. Acyclic parts therefore come out exactly.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::alpha::Alpha;
use crate::digraph::{Digraph, Vertex};
use crate::error::{AlphaError, SpectralError};
use crate::linalg::{self, DenseMatrix};

/// Relative scale of the default eigensolver tolerance: `1e-9 * n * ||A||_F`.
pub const RESIDUAL_TOL_FACTOR: f64 = 1e-9;
/// Relative scale of the default normality tolerance: `1e-9 * (1 + ||A||_F^2)`.
pub const NORMALITY_TOL_FACTOR: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct AlphaMatrix<'g> {
    alpha: Alpha,
    entries: DenseMatrix,
    source: &'g Digraph,
}

impl<'g> AlphaMatrix<'g> {
    pub fn new(g: &'g Digraph, alpha: Alpha) -> Self {
        let n = g.order();
        let a = alpha.value();
        let mut entries = DenseMatrix::zeros(n);
        for u in 0..n {
            entries[(u, u)] = a * g.out_degree(u) as f64;
            for &v in g.out_neighbors(u) {
                entries[(u, v)] = 1.0 - a;
            }
        }
        Self {
            alpha,
            entries,
            source: g,
        }
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn entries(&self) -> &DenseMatrix {
        &self.entries
    }

    pub fn source(&self) -> &'g Digraph {
        self.source
    }

    pub fn order(&self) -> usize {
        self.entries.order()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.frobenius_norm()
    }

    /// `(trace(A), trace(A^2))` read off the matrix.
    pub fn spectral_moments(&self) -> (f64, f64) {
        (self.entries.trace(), self.entries.trace_of_square())
    }

    pub fn default_residual_tol(&self) -> f64 {
        RESIDUAL_TOL_FACTOR * self.order() as f64 * self.frobenius_norm()
    }

    pub fn default_normality_tol(&self) -> f64 {
        let f = self.frobenius_norm();
        NORMALITY_TOL_FACTOR * (1.0 + f * f)
    }

    /// Largest entry of `|A A^T - A^T A|` and whether it is within `tol`.
    pub fn is_normal_algebraic(&self, tol: f64) -> (bool, f64) {
        let a = &self.entries;
        let at = a.transpose();
        let left = a.matmul(&at);
        let right = at.matmul(a);
        let n = self.order();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((left[(i, j)] - right[(i, j)]).abs());
            }
        }
        (worst <= tol, worst)
    }

    /// Full complex spectrum, solved block by block over strong components.
    pub fn eigenvalues(&self) -> Result<Spectrum, SpectralError> {
        let n = self.order();
        if n == 0 {
            return Err(SpectralError::EmptyMatrix);
        }
        let mut values = Vec::with_capacity(n);
        for component in self.source.strong_components() {
            if let [v] = component[..] {
                values.push(Complex64::new(self.entries[(v, v)], 0.0));
                continue;
            }
            let block = self.entries.principal_submatrix(&component);
            values.extend(linalg::eigenvalues(&block).map_err(|e| relabel(e, n, self))?);
        }
        Ok(Spectrum::new(values, self.default_residual_tol()))
    }
}

fn relabel(e: SpectralError, n: usize, m: &AlphaMatrix<'_>) -> SpectralError {
    match e {
        SpectralError::NoConvergence {
            order,
            row,
            iterations,
            ..
        } => SpectralError::NoConvergence {
            n,
            order,
            row,
            iterations,
            frobenius: m.frobenius_norm(),
        },
        other => other,
    }
}

pub fn build_alpha_matrix(g: &Digraph, alpha: Alpha) -> AlphaMatrix<'_> {
    AlphaMatrix::new(g, alpha)
}

/// Multiset of eigenvalues, sorted by decreasing modulus, then decreasing real
/// part, then decreasing imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
    residual_tol: f64,
}

impl Spectrum {
    /// Imaginary parts within `residual_tol` of zero are snapped to zero.
    pub fn new(mut eigenvalues: Vec<Complex64>, residual_tol: f64) -> Self {
        for z in &mut eigenvalues {
            if z.im.abs() <= residual_tol {
                z.im = 0.0;
            }
            if z.re == 0.0 {
                z.re = 0.0; // drop negative zero
            }
        }
        eigenvalues.sort_by(|a, b| {
            b.norm()
                .total_cmp(&a.norm())
                .then(b.re.total_cmp(&a.re))
                .then(b.im.total_cmp(&a.im))
        });
        Self {
            eigenvalues,
            residual_tol,
        }
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn residual_tol(&self) -> f64 {
        self.residual_tol
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn spectral_radius(&self) -> Result<f64, SpectralError> {
        self.eigenvalues
            .iter()
            .map(|z| z.norm())
            .reduce(f64::max)
            .ok_or(SpectralError::EmptySpectrum)
    }

    /// Sum of absolute real parts.
    pub fn low_energy(&self) -> Result<f64, SpectralError> {
        if self.is_empty() {
            return Err(SpectralError::EmptySpectrum);
        }
        Ok(self.eigenvalues.iter().map(|z| z.re.abs()).sum())
    }

    /// Index of the eigenvalue with the largest real part. For a nonnegative
    /// matrix this is the Perron root.
    pub fn perron_index(&self) -> Option<usize> {
        (0..self.len()).max_by(|&a, &b| self.eigenvalues[a].re.total_cmp(&self.eigenvalues[b].re))
    }

    /// Real parts of every eigenvalue except the Perron root.
    pub fn non_perron_real_parts(&self) -> Vec<f64> {
        let skip = self.perron_index();
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(_, z)| z.re)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spectrum serialises")
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.eigenvalues.iter().map(|z| [z.re, z.im]).collect();
        let mut s = serializer.serialize_struct("Spectrum", 2)?;
        s.serialize_field("eigenvalues", &pairs)?;
        s.serialize_field("residual_tol", &self.residual_tol)?;
        s.end()
    }
}

pub fn spectral_radius(s: &Spectrum) -> Result<f64, SpectralError> {
    s.spectral_radius()
}

pub fn low_energy(s: &Spectrum) -> Result<f64, SpectralError> {
    s.low_energy()
}

/// Which part of the normality criterion failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalityWitness {
    /// `d+(v) != d-(v)`.
    DegreeImbalance {
        vertex: Vertex,
        out_degree: usize,
        in_degree: usize,
    },
    /// The pair condition on common neighbours fails for `(u, v)`.
    PairCondition {
        u: Vertex,
        v: Vertex,
        /// common out-neighbours minus common in-neighbours
        delta: i64,
        /// `d+(u) - d+(v)`
        degree_gap: i64,
        /// `A[u][v] - A[v][u]`
        sigma: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalityVerdict {
    pub algebraic: bool,
    pub topological: bool,
    pub max_commutator_entry: f64,
    pub witness: Option<NormalityWitness>,
    /// True when the combinatorial test ran on an exact rational alpha.
    pub exact: bool,
}

/// Normality decided from degrees and common neighbourhoods, cross-checked
/// against the commutator `A A^T - A^T A`.
///
/// The criterion: every vertex is balanced (`d+ = d-`), and for every pair
/// `u != v`, `(1 - alpha) * delta_uv = alpha * (d+(u) - d+(v)) * sigma_uv`,
/// where `delta_uv` is the number of common out-neighbours minus common
/// in-neighbours and `sigma_uv = A[u][v] - A[v][u]`. With an exact
/// `alpha = a/b` the pair test is the integer identity
/// `q * delta = p * gap * sigma` for `p/q = a/(b-a)` in lowest terms.
/// Otherwise it compares the corresponding commutator entry against the
/// default normality tolerance.
pub fn is_normal_topological(g: &Digraph, alpha: Alpha) -> Result<NormalityVerdict, AlphaError> {
    alpha.require_below_one()?;
    let matrix = AlphaMatrix::new(g, alpha);
    let tol = matrix.default_normality_tol();
    let (algebraic, max_commutator_entry) = matrix.is_normal_algebraic(tol);
    let odds = alpha.odds();
    let witness = topological_witness(
        g,
        alpha.value(),
        odds.map(|r| (r.num() as i64, r.den() as i64)),
        tol,
    );
    Ok(NormalityVerdict {
        algebraic,
        topological: witness.is_none(),
        max_commutator_entry,
        witness,
        exact: odds.is_some(),
    })
}

/// Like [`is_normal_topological`] but also accepts `alpha = 1`, where
/// `A_1 = Deg` is diagonal and always normal. There the combinatorial
/// criterion is undefined and the verdict mirrors the commutator check.
pub fn normality(g: &Digraph, alpha: Alpha) -> NormalityVerdict {
    match is_normal_topological(g, alpha) {
        Ok(v) => v,
        Err(_) => {
            let matrix = AlphaMatrix::new(g, alpha);
            let (algebraic, worst) = matrix.is_normal_algebraic(matrix.default_normality_tol());
            NormalityVerdict {
                algebraic,
                topological: algebraic,
                max_commutator_entry: worst,
                witness: None,
                exact: false,
            }
        }
    }
}

fn topological_witness(
    g: &Digraph,
    alpha: f64,
    exact_odds: Option<(i64, i64)>,
    tol: f64,
) -> Option<NormalityWitness> {
    let n = g.order();
    let beta = 1.0 - alpha;
    for v in 0..n {
        let (out_degree, in_degree) = (g.out_degree(v), g.in_degree(v));
        let imbalanced = match exact_odds {
            Some(_) => out_degree != in_degree,
            None => (beta * beta * (out_degree as f64 - in_degree as f64)).abs() > tol,
        };
        if imbalanced {
            return Some(NormalityWitness::DegreeImbalance {
                vertex: v,
                out_degree,
                in_degree,
            });
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let (common_out, common_in) = g
                .common_neighbors(u, v)
                .expect("distinct in-range vertices");
            let delta = common_out as i64 - common_in as i64;
            let degree_gap = g.out_degree(u) as i64 - g.out_degree(v) as i64;
            let sigma = g.has_arc(u, v) as i64 - g.has_arc(v, u) as i64;
            let holds = match exact_odds {
                Some((p, q)) => q * delta == p * degree_gap * sigma,
                None => {
                    let entry =
                        beta * beta * delta as f64 - alpha * beta * (degree_gap * sigma) as f64;
                    entry.abs() <= tol
                }
            };
            if !holds {
                return Some(NormalityWitness::PairCondition {
                    u,
                    v,
                    delta,
                    degree_gap,
                    sigma,
                });
            }
        }
    }
    None
}
