//! Spectral-radius and low-energy bounds for A_alpha matrices of digraphs,
//! with structural predicates for each equality case.
//!
//! All bounds are functions of the order `n`, size `m`, out-degree Zagreb
//! index `Z` and number of closed 2-walks `c2`:
//!
//! | id               | bound                                                     |
//! |------------------|-----------------------------------------------------------|
//! | `SR_LOWER_TRACE` | `rho >= alpha m / n`                                      |
//! | `SR_LOWER_M2`    | `rho >= sqrt((alpha^2 Z + (1-alpha)^2 c2) / n)`           |
//! | `SR_UPPER_KM`    | `rho <= alpha m/n + sqrt((n-1)/n (||A||_F^2 - (alpha m)^2/n))` |
//! | `E_KM`           | `E <= rho + sqrt((n-1)(T - rho^2))`                       |
//! | `E_RHO_FREE`     | `E <= sqrt(n T)`                                          |
//!
//! with `||A||_F^2 = alpha^2 Z + (1-alpha)^2 m` and
//! `T = alpha^2 Z + (1-alpha)^2 (m + c2) / 2`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alpha::Alpha;
use crate::digraph::Digraph;
use crate::error::{AlphaError, BoundError};
use crate::spectral::{normality, AlphaMatrix, Spectrum};

/// Radicands down to `-RADICAND_SLACK * max(1, scale)` are treated as zero.
pub const RADICAND_SLACK: f64 = 1e-9;
/// Relative tolerance for deciding that a bound is attained.
pub const EQUALITY_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundId {
    #[serde(rename = "SR_LOWER_TRACE")]
    SrLowerTrace,
    #[serde(rename = "SR_LOWER_M2")]
    SrLowerM2,
    #[serde(rename = "SR_UPPER_KM")]
    SrUpperKm,
    #[serde(rename = "E_KM")]
    EnergyKm,
    #[serde(rename = "E_RHO_FREE")]
    EnergyRhoFree,
}

impl BoundId {
    pub const ALL: [BoundId; 5] = [
        BoundId::SrLowerTrace,
        BoundId::SrLowerM2,
        BoundId::SrUpperKm,
        BoundId::EnergyKm,
        BoundId::EnergyRhoFree,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundId::SrLowerTrace => "SR_LOWER_TRACE",
            BoundId::SrLowerM2 => "SR_LOWER_M2",
            BoundId::SrUpperKm => "SR_UPPER_KM",
            BoundId::EnergyKm => "E_KM",
            BoundId::EnergyRhoFree => "E_RHO_FREE",
        }
    }

    /// Whether the bound concerns the spectral radius (else the low energy).
    pub fn is_radius_bound(&self) -> bool {
        matches!(
            self,
            BoundId::SrLowerTrace | BoundId::SrLowerM2 | BoundId::SrUpperKm
        )
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundId::ALL
            .into_iter()
            .find(|b| b.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| BoundError::UnknownBound(s.to_string()))
    }
}

/// The integer statistics every bound is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphInvariants {
    pub n: usize,
    pub m: u64,
    pub zagreb: u64,
    pub c2: u64,
}

impl GraphInvariants {
    pub fn of(g: &Digraph) -> Self {
        Self {
            n: g.order(),
            m: g.size() as u64,
            zagreb: g.zagreb_index(),
            c2: g.closed_walks_2(),
        }
    }

    /// `alpha^2 Z + (1-alpha)^2 (m + c2) / 2`.
    pub fn energy_budget(&self, alpha: f64) -> f64 {
        energy_budget(self.m, self.zagreb, self.c2, alpha)
    }
}

fn energy_budget(m: u64, z: u64, c2: u64, alpha: f64) -> f64 {
    let beta = 1.0 - alpha;
    alpha * alpha * z as f64 + beta * beta * ((m + c2) as f64 / 2.0)
}

fn check_alpha(alpha: f64) -> Result<(), AlphaError> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(AlphaError::OutOfRange(alpha))
    }
}

fn require_order(n: usize, min: usize) -> Result<(), BoundError> {
    if n < min {
        Err(BoundError::TooFewVertices { n, min })
    } else {
        Ok(())
    }
}

fn clamp_radicand(x: f64, scale: f64) -> Result<f64, BoundError> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -RADICAND_SLACK * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(BoundError::NegativeRadicand(x))
    }
}

/// `alpha m / n`.
pub fn sr_lower_trace(n: usize, m: u64, alpha: f64) -> Result<f64, BoundError> {
    require_order(n, 1)?;
    check_alpha(alpha)?;
    Ok(alpha * m as f64 / n as f64)
}

/// `sqrt((alpha^2 Z + (1-alpha)^2 c2) / n)`.
pub fn sr_lower_m2(n: usize, z: u64, c2: u64, alpha: f64) -> Result<f64, BoundError> {
    require_order(n, 1)?;
    check_alpha(alpha)?;
    let beta = 1.0 - alpha;
    Ok(((alpha * alpha * z as f64 + beta * beta * c2 as f64) / n as f64).sqrt())
}

/// `alpha m/n + sqrt((n-1)/n (alpha^2 Z + (1-alpha)^2 m - (alpha m)^2 / n))`,
/// valid for `alpha` in `[0, 1)`.
pub fn sr_upper_km(n: usize, m: u64, z: u64, alpha: f64) -> Result<f64, BoundError> {
    require_order(n, 1)?;
    check_alpha(alpha)?;
    if alpha == 1.0 {
        return Err(AlphaError::AlphaOne.into());
    }
    let nf = n as f64;
    let beta = 1.0 - alpha;
    let am = alpha * m as f64;
    let frob2 = alpha * alpha * z as f64 + beta * beta * m as f64;
    let radicand = clamp_radicand((nf - 1.0) / nf * (frob2 - am * am / nf), frob2)?;
    Ok(am / nf + radicand.sqrt())
}

/// `rho + sqrt((n-1)(T - rho^2))` with
/// `T = alpha^2 Z + (1-alpha)^2 (m + c2)/2`.
pub fn energy_upper_km(
    n: usize,
    m: u64,
    z: u64,
    c2: u64,
    alpha: f64,
    rho: f64,
) -> Result<f64, BoundError> {
    require_order(n, 1)?;
    check_alpha(alpha)?;
    let t = energy_budget(m, z, c2, alpha);
    let radicand = clamp_radicand((n as f64 - 1.0) * (t - rho * rho), t)?;
    Ok(rho + radicand.sqrt())
}

/// `sqrt(n T)`, stated for `n > 1`.
pub fn energy_upper_rho_free(
    n: usize,
    m: u64,
    z: u64,
    c2: u64,
    alpha: f64,
) -> Result<f64, BoundError> {
    require_order(n, 2)?;
    check_alpha(alpha)?;
    Ok((n as f64 * energy_budget(m, z, c2, alpha)).sqrt())
}

/// Order and edge count of the undirected graph underlying a symmetric
/// digraph.
pub fn undirected_parameters(g: &Digraph) -> Result<(usize, u64), BoundError> {
    if !g.is_symmetric() {
        return Err(BoundError::NotSymmetric);
    }
    Ok((g.order(), g.size() as u64 / 2))
}

/// Koolen-Moulton type bound for the A_alpha matrix of an undirected graph:
/// `rho + sqrt((n'-1)(alpha^2 Z + 2(1-alpha)^2 m' - rho^2))`.
pub fn km_undirected(
    nprime: usize,
    mprime: u64,
    z: u64,
    alpha: f64,
    rho: f64,
) -> Result<f64, BoundError> {
    require_order(nprime, 1)?;
    check_alpha(alpha)?;
    let beta = 1.0 - alpha;
    let t = alpha * alpha * z as f64 + beta * beta * (2.0 * mprime as f64);
    let radicand = clamp_radicand((nprime as f64 - 1.0) * (t - rho * rho), t)?;
    Ok(rho + radicand.sqrt())
}

/// `sqrt(n' (alpha^2 Z + 2(1-alpha)^2 m'))`.
pub fn rho_free_undirected(
    nprime: usize,
    mprime: u64,
    z: u64,
    alpha: f64,
) -> Result<f64, BoundError> {
    require_order(nprime, 2)?;
    check_alpha(alpha)?;
    let beta = 1.0 - alpha;
    Ok((nprime as f64 * (alpha * alpha * z as f64 + beta * beta * (2.0 * mprime as f64))).sqrt())
}

/// McClelland's energy bound `sqrt(2 n' m')`.
pub fn mcclelland(nprime: usize, mprime: u64) -> f64 {
    (2.0 * nprime as f64 * mprime as f64).sqrt()
}

/// The classical Koolen-Moulton bound
/// `2m'/n' + sqrt((n'-1)(2m' - 4m'^2/n'^2))`, which needs `2m'/n' >= 1`.
pub fn koolen_moulton_classic(nprime: usize, mprime: u64) -> Result<f64, BoundError> {
    require_order(nprime, 1)?;
    let (nf, mf) = (nprime as f64, mprime as f64);
    let avg = 2.0 * mf / nf;
    if avg < 1.0 {
        return Err(BoundError::AverageDegreeBelowOne(avg));
    }
    let radicand = clamp_radicand((nf - 1.0) * (2.0 * mf - avg * avg), 2.0 * mf)?;
    Ok(avg + radicand.sqrt())
}

/// The extremal family a structural predicate recognised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum EqualityCase {
    Empty,
    CompleteSymmetric,
    CompletePlusIsolated { k: usize },
    Dag,
    DigonComponents,
    DigonMatching,
    OutRegular,
    NormalEqualRealParts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralVerdict {
    /// The digraph belongs to an extremal family for this bound and alpha.
    pub predicted: bool,
    /// False when the verdict relied on a float comparison of alpha or on
    /// computed eigenvalues.
    pub exact: bool,
    pub case: Option<EqualityCase>,
}

impl StructuralVerdict {
    fn hit(case: EqualityCase) -> Self {
        Self {
            predicted: true,
            exact: true,
            case: Some(case),
        }
    }

    fn miss() -> Self {
        Self {
            predicted: false,
            exact: true,
            case: None,
        }
    }
}

/// Decides from the structure of `g` whether `bound` is attained at `alpha`.
///
/// For the Koolen-Moulton energy bound the predicate is spectral: `A_alpha`
/// normal and all non-Perron eigenvalues with equal absolute real part.
pub fn equality_witness(
    g: &Digraph,
    alpha: Alpha,
    bound: BoundId,
) -> Result<StructuralVerdict, BoundError> {
    let n = g.order();
    require_order(n, 1)?;
    let m = g.size();
    let verdict = match bound {
        BoundId::SrUpperKm => {
            alpha.require_below_one()?;
            if m == 0 {
                StructuralVerdict::hit(EqualityCase::Empty)
            } else if m == n * (n - 1) {
                StructuralVerdict::hit(EqualityCase::CompleteSymmetric)
            } else if let Some(k) = complete_plus_isolated_core(g) {
                let r = alpha.equals_reciprocal(k as u64);
                StructuralVerdict {
                    predicted: r.matches,
                    exact: r.exact,
                    case: r
                        .matches
                        .then_some(EqualityCase::CompletePlusIsolated { k }),
                }
            } else {
                StructuralVerdict::miss()
            }
        }
        BoundId::SrLowerM2 | BoundId::SrLowerTrace => {
            if alpha.is_zero() {
                if g.is_dag() {
                    StructuralVerdict::hit(EqualityCase::Dag)
                } else if bound == BoundId::SrLowerM2 && every_component_is_digon(g) {
                    StructuralVerdict::hit(EqualityCase::DigonComponents)
                } else {
                    StructuralVerdict::miss()
                }
            } else if alpha.is_one() {
                out_regular_verdict(g)
            } else {
                empty_verdict(g)
            }
        }
        BoundId::EnergyRhoFree => {
            require_order(n, 2)?;
            if alpha.is_zero() {
                if m == 0 {
                    StructuralVerdict::hit(EqualityCase::Empty)
                } else if is_digon_matching(g) {
                    StructuralVerdict::hit(EqualityCase::DigonMatching)
                } else {
                    StructuralVerdict::miss()
                }
            } else if alpha.is_one() {
                out_regular_verdict(g)
            } else {
                empty_verdict(g)
            }
        }
        BoundId::EnergyKm => {
            let normal = normality(g, alpha);
            let spectrum = AlphaMatrix::new(g, alpha).eigenvalues()?;
            let predicted = normal.topological && equal_non_perron_real_parts(&spectrum);
            StructuralVerdict {
                predicted,
                exact: false,
                case: predicted.then_some(EqualityCase::NormalEqualRealParts),
            }
        }
    };
    Ok(verdict)
}

fn empty_verdict(g: &Digraph) -> StructuralVerdict {
    if g.size() == 0 {
        StructuralVerdict::hit(EqualityCase::Empty)
    } else {
        StructuralVerdict::miss()
    }
}

fn out_regular_verdict(g: &Digraph) -> StructuralVerdict {
    if g.is_out_regular() {
        StructuralVerdict::hit(EqualityCase::OutRegular)
    } else {
        StructuralVerdict::miss()
    }
}

/// If `g` is a complete symmetric digraph on `k >= 2` vertices plus isolated
/// vertices, returns `k`.
fn complete_plus_isolated_core(g: &Digraph) -> Option<usize> {
    let core: Vec<usize> = (0..g.order())
        .filter(|&v| g.out_degree(v) > 0 || g.in_degree(v) > 0)
        .collect();
    let k = core.len();
    if k < 2 || g.size() != k * (k - 1) {
        return None;
    }
    core.iter()
        .all(|&v| g.out_degree(v) == k - 1 && g.in_degree(v) == k - 1)
        .then_some(k)
}

fn every_component_is_digon(g: &Digraph) -> bool {
    g.strong_components().iter().all(|c| c.len() == 2)
}

fn is_digon_matching(g: &Digraph) -> bool {
    (0..g.order()).all(|v| {
        let outs = g.out_neighbors(v);
        outs.len() == 1 && g.in_degree(v) == 1 && g.has_arc(outs[0], v)
    })
}

/// All non-Perron eigenvalues share the same absolute real part, up to
/// `EQUALITY_REL_TOL` relative to the spectral radius.
pub fn equal_non_perron_real_parts(spectrum: &Spectrum) -> bool {
    let parts: Vec<f64> = spectrum
        .non_perron_real_parts()
        .into_iter()
        .map(f64::abs)
        .collect();
    let (Some(lo), Some(hi)) = (
        parts.iter().copied().reduce(f64::min),
        parts.iter().copied().reduce(f64::max),
    ) else {
        return true;
    };
    let scale = spectrum.spectral_radius().unwrap_or(0.0).max(1.0);
    hi - lo <= EQUALITY_REL_TOL * scale
}

/// `|bound - exact| <= EQUALITY_REL_TOL * max(1, |exact|)`.
pub fn numerically_equal(bound: f64, exact: f64) -> bool {
    (bound - exact).abs() <= EQUALITY_REL_TOL * exact.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EqualityFlag {
    pub numeric_equality: bool,
    pub structural_match: bool,
    pub exact: bool,
}

impl EqualityFlag {
    pub fn agrees(&self) -> bool {
        self.numeric_equality == self.structural_match
    }
}

/// Exact spectral quantities of one digraph next to every bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub alpha: f64,
    pub alpha_exact: Option<String>,
    pub n: usize,
    pub m: u64,
    #[serde(rename = "Z")]
    pub z: u64,
    pub c2: u64,
    #[serde(rename = "T")]
    pub t: f64,
    pub rho_exact: f64,
    pub energy_exact: f64,
    pub sr_lower_trace: f64,
    pub sr_lower_m2: f64,
    /// Absent at `alpha = 1`.
    pub sr_upper_km: Option<f64>,
    pub energy_upper_km: f64,
    /// Absent for `n = 1`.
    pub energy_upper_rho_free: Option<f64>,
    pub equality_flags: BTreeMap<BoundId, EqualityFlag>,
}

impl BoundReport {
    /// Column order of [`BoundReport::csv_record`].
    pub const CSV_HEADER: [&'static str; 23] = [
        "alpha",
        "n",
        "m",
        "Z",
        "c2",
        "T",
        "rho_exact",
        "energy_exact",
        "sr_lower_trace",
        "sr_lower_m2",
        "sr_upper_km",
        "energy_upper_km",
        "energy_upper_rho_free",
        "SR_LOWER_TRACE_numeric",
        "SR_LOWER_TRACE_structural",
        "SR_LOWER_M2_numeric",
        "SR_LOWER_M2_structural",
        "SR_UPPER_KM_numeric",
        "SR_UPPER_KM_structural",
        "E_KM_numeric",
        "E_KM_structural",
        "E_RHO_FREE_numeric",
        "E_RHO_FREE_structural",
    ];

    pub fn compute(g: &Digraph, alpha: Alpha) -> Result<Self, BoundError> {
        let inv = GraphInvariants::of(g);
        require_order(inv.n, 1)?;
        let a = alpha.value();
        let matrix = AlphaMatrix::new(g, alpha);
        let spectrum = matrix.eigenvalues()?;
        let rho = spectrum.spectral_radius()?;
        let energy = spectrum.low_energy()?;

        let sr_upper = if alpha.is_one() {
            None
        } else {
            Some(sr_upper_km(inv.n, inv.m, inv.zagreb, a)?)
        };
        let rho_free = if inv.n > 1 {
            Some(energy_upper_rho_free(inv.n, inv.m, inv.zagreb, inv.c2, a)?)
        } else {
            None
        };
        let mut report = Self {
            alpha: a,
            alpha_exact: alpha.exact().map(|r| r.to_string()),
            n: inv.n,
            m: inv.m,
            z: inv.zagreb,
            c2: inv.c2,
            t: inv.energy_budget(a),
            rho_exact: rho,
            energy_exact: energy,
            sr_lower_trace: sr_lower_trace(inv.n, inv.m, a)?,
            sr_lower_m2: sr_lower_m2(inv.n, inv.zagreb, inv.c2, a)?,
            sr_upper_km: sr_upper,
            energy_upper_km: energy_upper_km(inv.n, inv.m, inv.zagreb, inv.c2, a, rho)?,
            energy_upper_rho_free: rho_free,
            equality_flags: BTreeMap::new(),
        };
        for id in BoundId::ALL {
            let Some(value) = report.bound_value(id) else {
                continue;
            };
            let exact_value = if id.is_radius_bound() { rho } else { energy };
            let verdict = equality_witness(g, alpha, id)?;
            report.equality_flags.insert(
                id,
                EqualityFlag {
                    numeric_equality: numerically_equal(value, exact_value),
                    structural_match: verdict.predicted,
                    exact: verdict.exact,
                },
            );
        }
        Ok(report)
    }

    pub fn bound_value(&self, id: BoundId) -> Option<f64> {
        match id {
            BoundId::SrLowerTrace => Some(self.sr_lower_trace),
            BoundId::SrLowerM2 => Some(self.sr_lower_m2),
            BoundId::SrUpperKm => self.sr_upper_km,
            BoundId::EnergyKm => Some(self.energy_upper_km),
            BoundId::EnergyRhoFree => self.energy_upper_rho_free,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bound report serialises")
    }

    /// One CSV row in [`BoundReport::CSV_HEADER`] order; absent values are
    /// empty fields.
    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut row = vec![
            self.alpha.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.z.to_string(),
            self.c2.to_string(),
            self.t.to_string(),
            self.rho_exact.to_string(),
            self.energy_exact.to_string(),
            self.sr_lower_trace.to_string(),
            self.sr_lower_m2.to_string(),
            opt(self.sr_upper_km),
            self.energy_upper_km.to_string(),
            opt(self.energy_upper_rho_free),
        ];
        for id in BoundId::ALL {
            match self.equality_flags.get(&id) {
                Some(flag) => {
                    row.push(flag.numeric_equality.to_string());
                    row.push(flag.structural_match.to_string());
                }
                None => row.extend([String::new(), String::new()]),
            }
        }
        row
    }
}
