//! Exhaustive certification over every loop-free digraph of a given order.
//!
//! For each digraph and each alpha in the grid the checker runs the spectral
//! identities, the bound sandwich and energy chain, the agreement between
//! structural and numeric equality, and the agreement between the two
//! normality tests.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::alpha::Alpha;
use crate::bounds::{equality_witness, BoundId, BoundReport};
use crate::digraph::Digraph;
use crate::spectral::{is_normal_topological, AlphaMatrix};

/// Largest order `verify` will enumerate (`2^20` digraphs).
pub const MAX_SCOPE: usize = 5;
/// Absolute slack for bound inequalities.
pub const SANDWICH_SLACK: f64 = 1e-7;

/// `0, 1/4, 1/3, 1/2, 3/4` plus every `1/k` for `2 <= k <= n`, as exact
/// rationals in increasing order.
pub fn default_alpha_grid(n: usize) -> Vec<Alpha> {
    let mut grid: Vec<(u64, u64)> = vec![(0, 1), (1, 4), (1, 3), (1, 2), (3, 4)];
    grid.extend((2..=n as u64).map(|k| (1, k)));
    let mut alphas: Vec<Alpha> = grid
        .into_iter()
        .map(|(p, q)| Alpha::rational(p, q).expect("grid values lie in [0, 1]"))
        .collect();
    alphas.sort_by(|a, b| a.value().total_cmp(&b.value()));
    alphas.dedup_by(|a, b| a.exact() == b.exact());
    alphas
}

/// The digraph on `n` vertices whose arcs are the set bits of `mask`, with
/// bit `i` standing for the `i`-th ordered pair `(u, v)`, `u != v`, in
/// lexicographic order.
pub fn digraph_from_mask(n: usize, mask: u64) -> Digraph {
    let pairs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
    let arcs = pairs
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, a)| a);
    Digraph::new(n, arcs).expect("masks encode simple digraphs")
}

/// Every loop-free digraph on exactly `n` vertices, in mask order.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let bits = n * n.saturating_sub(1);
    assert!(bits < 64, "order {n} too large to enumerate");
    (0..1u64 << bits).map(move |mask| digraph_from_mask(n, mask))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub alpha: String,
    pub digraph: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub scope: usize,
    pub digraphs: usize,
    pub alphas: Vec<String>,
    /// Number of evaluations per check.
    pub checks: BTreeMap<String, usize>,
    /// Number of failures per check; checks that never failed are omitted.
    pub failures: BTreeMap<String, usize>,
    pub first_counterexample: Option<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total_failures(&self) -> usize {
        self.failures.values().sum()
    }
}

/// Runs every check on all digraphs of order `n` for each alpha in `alphas`.
pub fn verify_order(n: usize, alphas: &[Alpha]) -> VerifyReport {
    let mut report = VerifyReport {
        scope: n,
        digraphs: 0,
        alphas: alphas.iter().map(Alpha::to_string).collect(),
        checks: BTreeMap::new(),
        failures: BTreeMap::new(),
        first_counterexample: None,
    };
    for g in all_digraphs(n) {
        report.digraphs += 1;
        for &alpha in alphas {
            for (check, outcome) in check_digraph(&g, alpha) {
                *report.checks.entry(check.to_string()).or_default() += 1;
                if let Err(detail) = outcome {
                    *report.failures.entry(check.to_string()).or_default() += 1;
                    report
                        .first_counterexample
                        .get_or_insert_with(|| Counterexample {
                            check: check.to_string(),
                            alpha: alpha.to_string(),
                            digraph: g.serialize(),
                            detail,
                        });
                }
            }
        }
    }
    report
}

type Outcome = Result<(), String>;

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

/// All checks for one digraph at one alpha, labelled.
pub fn check_digraph(g: &Digraph, alpha: Alpha) -> Vec<(&'static str, Outcome)> {
    let mut out = Vec::new();
    let matrix = AlphaMatrix::new(g, alpha);
    let spectrum = match matrix.eigenvalues() {
        Ok(s) => s,
        Err(e) => {
            out.push(("eigensolver", Err(e.to_string())));
            return out;
        }
    };
    let n = g.order() as f64;
    let a = alpha.value();
    let frob = matrix.frobenius_norm();
    let tol = spectrum.residual_tol();
    let m = g.size() as f64;
    let (z, c2) = (g.zagreb_index() as f64, g.closed_walks_2() as f64);

    let sum_re: f64 = spectrum.eigenvalues().iter().map(|l| l.re).sum();
    let sum_im: f64 = spectrum.eigenvalues().iter().map(|l| l.im).sum();
    out.push((
        "trace_identity",
        ensure(
            (sum_re - a * m).abs() <= n * tol && sum_im.abs() <= n * tol,
            || format!("sum Re = {sum_re}, alpha m = {}, sum Im = {sum_im}", a * m),
        ),
    ));
    let m2 = a * a * z + (1.0 - a) * (1.0 - a) * c2;
    let sum_sq: f64 = spectrum
        .eigenvalues()
        .iter()
        .map(|l| l.re * l.re - l.im * l.im)
        .sum();
    out.push((
        "second_moment",
        ensure(
            (sum_sq - m2).abs() <= 1e-6 * n * frob * frob + n * tol,
            || format!("sum (x^2 - y^2) = {sum_sq}, expected {m2}"),
        ),
    ));
    let schur: f64 = spectrum.eigenvalues().iter().map(|l| l.norm_sqr()).sum();
    out.push((
        "schur_inequality",
        ensure(schur <= frob * frob + SANDWICH_SLACK, || {
            format!("sum |lambda|^2 = {schur} > ||A||_F^2 = {}", frob * frob)
        }),
    ));
    let rho = spectrum.spectral_radius().unwrap_or(0.0);
    out.push((
        "perron_root_real",
        ensure(
            spectrum
                .eigenvalues()
                .iter()
                .any(|l| l.im.abs() <= tol && (l.re - rho).abs() <= tol.max(1e-9 * rho)),
            || format!("no real eigenvalue equal to rho = {rho}"),
        ),
    ));

    let report = match BoundReport::compute(g, alpha) {
        Ok(r) => r,
        Err(e) => {
            out.push(("bound_report", Err(e.to_string())));
            return out;
        }
    };
    let lower = report.sr_lower_trace.max(report.sr_lower_m2);
    out.push((
        "radius_sandwich",
        ensure(
            lower <= report.rho_exact + SANDWICH_SLACK
                && report
                    .sr_upper_km
                    .is_none_or(|u| report.rho_exact <= u + SANDWICH_SLACK),
            || {
                format!(
                    "lower {lower}, rho {}, upper {:?}",
                    report.rho_exact, report.sr_upper_km
                )
            },
        ),
    ));
    if let Some(rho_free) = report.energy_upper_rho_free {
        out.push((
            "energy_chain",
            ensure(
                report.energy_exact <= report.energy_upper_km + SANDWICH_SLACK
                    && report.energy_upper_km <= rho_free + SANDWICH_SLACK,
                || {
                    format!(
                        "E {}, KM {}, rho-free {rho_free}",
                        report.energy_exact, report.energy_upper_km
                    )
                },
            ),
        ));
    }

    for id in [
        BoundId::SrUpperKm,
        BoundId::SrLowerM2,
        BoundId::EnergyKm,
        BoundId::EnergyRhoFree,
    ] {
        if let Some(flag) = report.equality_flags.get(&id) {
            out.push((
                equality_label(id),
                ensure(flag.agrees(), || {
                    format!(
                        "numeric equality {}, structural prediction {}",
                        flag.numeric_equality, flag.structural_match
                    )
                }),
            ));
        }
    }
    // only structure => equality is claimed for the trace bound
    if let Some(flag) = report.equality_flags.get(&BoundId::SrLowerTrace) {
        out.push((
            equality_label(BoundId::SrLowerTrace),
            ensure(!flag.structural_match || flag.numeric_equality, || {
                "structure predicts equality but the bound is strict".to_string()
            }),
        ));
    }

    if let Ok(verdict) = is_normal_topological(g, alpha) {
        out.push((
            "normality_equivalence",
            ensure(verdict.algebraic == verdict.topological, || {
                format!(
                    "algebraic {}, topological {}, max commutator entry {}",
                    verdict.algebraic, verdict.topological, verdict.max_commutator_entry
                )
            }),
        ));
    }
    out
}

fn equality_label(id: BoundId) -> &'static str {
    match id {
        BoundId::SrLowerTrace => "equality_SR_LOWER_TRACE",
        BoundId::SrLowerM2 => "equality_SR_LOWER_M2",
        BoundId::SrUpperKm => "equality_SR_UPPER_KM",
        BoundId::EnergyKm => "equality_E_KM",
        BoundId::EnergyRhoFree => "equality_E_RHO_FREE",
    }
}

/// Structural verdict of `id` for every digraph of order `n`, mostly useful
/// for counting extremal digraphs.
pub fn count_predicted(n: usize, alpha: Alpha, id: BoundId) -> usize {
    all_digraphs(n)
        .filter(|g| equality_witness(g, alpha, id).is_ok_and(|v| v.predicted))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_enumeration() {
        let grid: Vec<String> = default_alpha_grid(4).iter().map(Alpha::to_string).collect();
        assert_eq!(grid, ["0", "1/4", "1/3", "1/2", "3/4"]);
        assert_eq!(default_alpha_grid(5).len(), 6);
        assert_eq!(all_digraphs(3).count(), 64);
        assert_eq!(digraph_from_mask(3, 0b111111).size(), 6);
        assert_eq!(
            digraph_from_mask(2, 0b01).arcs().collect::<Vec<_>>(),
            [(0, 1)]
        );
    }

    #[test]
    fn order_three_passes() {
        let report = verify_order(3, &default_alpha_grid(3));
        assert_eq!(report.digraphs, 64);
        assert!(report.passed(), "{:?}", report.first_counterexample);
    }

    #[test]
    fn complete_digraphs_counted() {
        // K3 and the empty digraph on 3 vertices, plus three K2 + K1
        assert_eq!(
            count_predicted(3, Alpha::rational(1, 2).unwrap(), BoundId::SrUpperKm),
            5
        );
    }
}
