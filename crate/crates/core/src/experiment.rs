//! Seeded Monte-Carlo comparison of bounds against exact spectral values.
//!
//! Sample `i` of a run is generated from `child_seed(master_seed, i)`, its
//! relative errors are collected in sample order, and sums are formed by
//! sequential pairwise summation, so results are bit-identical for any
//! worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::alpha::Alpha;
use crate::bounds::{self, BoundId, GraphInvariants};
use crate::digraph::Digraph;
use crate::error::{BoundError, ExperimentError};
use crate::generators::{core_complete_random, random_k_regular, CoreCompleteParams, RngSeed};
use crate::spectral::AlphaMatrix;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "DIGRAPH_SPECTRA_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExperimentId {
    #[serde(rename = "SPECTRAL_RADIUS_TABLE1")]
    SpectralRadius,
    #[serde(rename = "LOW_ENERGY_TABLE2")]
    LowEnergy,
}

impl ExperimentId {
    pub fn default_bounds(&self) -> Vec<String> {
        let ids: &[BoundId] = match self {
            ExperimentId::SpectralRadius => &[BoundId::SrUpperKm],
            ExperimentId::LowEnergy => &[BoundId::EnergyKm, BoundId::EnergyRhoFree],
        };
        ids.iter().map(|b| b.as_str().to_string()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyParams {
    CoreComplete(CoreCompleteParams),
    Regular { n: usize, k: usize },
}

impl FamilyParams {
    pub fn generate(&self, seed: RngSeed) -> Result<Digraph, crate::error::GeneratorError> {
        match self {
            FamilyParams::CoreComplete(p) => core_complete_random(p, seed),
            FamilyParams::Regular { n, k } => random_k_regular(*n, *k, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment_id: ExperimentId,
    pub alpha: Alpha,
    pub family_params: FamilyParams,
    pub samples: usize,
    pub master_seed: RngSeed,
    /// Built-in bound ids or names registered in a [`BaselineRegistry`].
    pub bound_ids: Vec<String>,
}

/// What a user-supplied baseline bound sees for one sample.
pub struct BaselineInput<'a> {
    pub graph: &'a Digraph,
    pub alpha: Alpha,
    pub invariants: GraphInvariants,
    pub rho: f64,
    pub energy: f64,
}

pub type BaselineFn = Arc<dyn Fn(&BaselineInput<'_>) -> f64 + Send + Sync>;

/// Named external bounds that can be compared alongside the built-in ones.
#[derive(Clone, Default)]
pub struct BaselineRegistry {
    entries: BTreeMap<String, BaselineFn>,
}

impl BaselineRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register<F>(&mut self, name: impl Into<String>, f: F)
    where
        F: Fn(&BaselineInput<'_>) -> f64 + Send + Sync + 'static,
    {
        self.entries.insert(name.into(), Arc::new(f));
    }

    pub fn get(&self, name: &str) -> Option<&BaselineFn> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

impl fmt::Debug for BaselineRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

#[derive(Clone)]
enum ResolvedBound {
    Builtin(BoundId),
    Baseline(BaselineFn),
}

fn resolve(
    names: &[String],
    registry: &BaselineRegistry,
) -> Result<Vec<ResolvedBound>, ExperimentError> {
    names
        .iter()
        .map(|name| {
            if let Ok(id) = name.parse::<BoundId>() {
                Ok(ResolvedBound::Builtin(id))
            } else {
                registry
                    .get(name)
                    .cloned()
                    .map(ResolvedBound::Baseline)
                    .ok_or_else(|| ExperimentError::UnknownBaseline(name.clone()))
            }
        })
        .collect()
}

/// `bound / exact - 1`, or `None` when `exact <= 0` and the ratio is
/// undefined.
pub fn relative_error(bound_value: f64, exact_value: f64) -> Option<f64> {
    (exact_value > 0.0).then(|| bound_value / exact_value - 1.0)
}

/// Pairwise (cascade) summation in slice order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if xs.len() <= LEAF {
        return xs.iter().fold(0.0, |acc, x| acc + x);
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundStats {
    pub bound_id: String,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub sample_count: usize,
}

impl BoundStats {
    fn from_errors(bound_id: String, errors: &[f64]) -> Self {
        let count = errors.len();
        if count == 0 {
            return Self {
                bound_id,
                mean: f64::NAN,
                std: f64::NAN,
                min: f64::NAN,
                max: f64::NAN,
                sample_count: 0,
            };
        }
        let mean = pairwise_sum(errors) / count as f64;
        let sq: Vec<f64> = errors.iter().map(|x| (x - mean) * (x - mean)).collect();
        Self {
            bound_id,
            mean,
            std: (pairwise_sum(&sq) / count as f64).sqrt(),
            min: errors.iter().copied().fold(f64::INFINITY, f64::min),
            max: errors.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            sample_count: count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentStats {
    pub bounds: Vec<BoundStats>,
    /// Samples whose exact value was not positive; excluded from every
    /// bound's statistics.
    pub degenerate_samples: usize,
}

impl ExperimentStats {
    pub fn bound(&self, id: &str) -> Option<&BoundStats> {
        self.bounds.iter().find(|b| b.bound_id == id)
    }
}

/// Runs on the current rayon pool with no external baselines.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentStats, ExperimentError> {
    run_experiment_with(cfg, &BaselineRegistry::new())
}

pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    registry: &BaselineRegistry,
) -> Result<ExperimentStats, ExperimentError> {
    if cfg.samples == 0 {
        return Err(ExperimentError::InvalidConfig(
            "samples must be at least 1".into(),
        ));
    }
    if cfg.bound_ids.is_empty() {
        return Err(ExperimentError::InvalidConfig("no bounds selected".into()));
    }
    let resolved = resolve(&cfg.bound_ids, registry)?;
    let per_sample: Vec<Option<Vec<f64>>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| evaluate_sample(cfg, &resolved, i))
        .collect::<Result<_, _>>()?;

    let degenerate = per_sample.iter().filter(|s| s.is_none()).count();
    let bounds = cfg
        .bound_ids
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let errors: Vec<f64> = per_sample.iter().flatten().map(|row| row[j]).collect();
            BoundStats::from_errors(name.clone(), &errors)
        })
        .collect();
    Ok(ExperimentStats {
        bounds,
        degenerate_samples: degenerate,
    })
}

fn evaluate_sample(
    cfg: &ExperimentConfig,
    bounds: &[ResolvedBound],
    index: usize,
) -> Result<Option<Vec<f64>>, ExperimentError> {
    let seed = cfg.master_seed.child(index as u64);
    let g = cfg
        .family_params
        .generate(seed)
        .map_err(|source| ExperimentError::Generator { index, source })?;
    let spectrum = AlphaMatrix::new(&g, cfg.alpha)
        .eigenvalues()
        .map_err(|source| ExperimentError::Spectral { index, source })?;
    let spectral = |source| ExperimentError::Spectral { index, source };
    let rho = spectrum.spectral_radius().map_err(spectral)?;
    let energy = spectrum.low_energy().map_err(spectral)?;
    let exact = match cfg.experiment_id {
        ExperimentId::SpectralRadius => rho,
        ExperimentId::LowEnergy => energy,
    };
    if exact <= 0.0 {
        return Ok(None);
    }
    let inv = GraphInvariants::of(&g);
    let input = BaselineInput {
        graph: &g,
        alpha: cfg.alpha,
        invariants: inv,
        rho,
        energy,
    };
    bounds
        .iter()
        .map(|b| {
            let value = match b {
                ResolvedBound::Builtin(id) => builtin_value(*id, &inv, cfg.alpha.value(), rho)
                    .map_err(|source| ExperimentError::Bound { index, source })?,
                ResolvedBound::Baseline(f) => f(&input),
            };
            Ok(value / exact - 1.0)
        })
        .collect::<Result<Vec<f64>, _>>()
        .map(Some)
}

fn builtin_value(
    id: BoundId,
    inv: &GraphInvariants,
    alpha: f64,
    rho: f64,
) -> Result<f64, BoundError> {
    match id {
        BoundId::SrLowerTrace => bounds::sr_lower_trace(inv.n, inv.m, alpha),
        BoundId::SrLowerM2 => bounds::sr_lower_m2(inv.n, inv.zagreb, inv.c2, alpha),
        BoundId::SrUpperKm => bounds::sr_upper_km(inv.n, inv.m, inv.zagreb, alpha),
        BoundId::EnergyKm => bounds::energy_upper_km(inv.n, inv.m, inv.zagreb, inv.c2, alpha, rho),
        BoundId::EnergyRhoFree => {
            bounds::energy_upper_rho_free(inv.n, inv.m, inv.zagreb, inv.c2, alpha)
        }
    }
}

/// Parameter sweep of one table.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grid {
    /// Core-complete digraphs on `n` vertices with core size `r`, one cell
    /// per `beta`.
    Beta {
        n: usize,
        r: usize,
        extra_arcs: usize,
        betas: Vec<f64>,
    },
    /// Di-regular digraphs, one cell per `(n, k)`.
    Regular { pairs: Vec<(usize, usize)> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableConfig {
    pub experiment_id: ExperimentId,
    pub alpha: Alpha,
    pub alpha_exact: Option<String>,
    pub samples: usize,
    pub master_seed: RngSeed,
    pub bound_ids: Vec<String>,
    pub grid: Grid,
}

impl TableConfig {
    /// Core-complete sweep with `n = 100`, `r = 5`, `2n` extra arcs and
    /// `beta` in `0.8, 0.6, 0.4, 0.2, 0.1`.
    pub fn spectral_radius(alpha: Alpha, samples: usize, master_seed: RngSeed) -> Self {
        Self {
            experiment_id: ExperimentId::SpectralRadius,
            alpha,
            alpha_exact: alpha.exact().map(|r| r.to_string()),
            samples,
            master_seed,
            bound_ids: ExperimentId::SpectralRadius.default_bounds(),
            grid: Grid::Beta {
                n: 100,
                r: 5,
                extra_arcs: 200,
                betas: vec![0.8, 0.6, 0.4, 0.2, 0.1],
            },
        }
    }

    /// Di-regular sweep over `k = 6..=10` with `n = 10k`.
    pub fn low_energy(alpha: Alpha, samples: usize, master_seed: RngSeed) -> Self {
        Self {
            experiment_id: ExperimentId::LowEnergy,
            alpha,
            alpha_exact: alpha.exact().map(|r| r.to_string()),
            samples,
            master_seed,
            bound_ids: ExperimentId::LowEnergy.default_bounds(),
            grid: Grid::Regular {
                pairs: (6..=10).map(|k| (10 * k, k)).collect(),
            },
        }
    }

    pub fn parameter_names(&self) -> Vec<&'static str> {
        match self.grid {
            Grid::Beta { .. } => vec!["beta"],
            Grid::Regular { .. } => vec!["n", "k"],
        }
    }

    /// One experiment per grid cell, with the parameter values of each cell.
    pub fn cells(&self) -> Vec<(Vec<String>, ExperimentConfig)> {
        let cell = |family_params| ExperimentConfig {
            experiment_id: self.experiment_id,
            alpha: self.alpha,
            family_params,
            samples: self.samples,
            master_seed: self.master_seed,
            bound_ids: self.bound_ids.clone(),
        };
        match &self.grid {
            Grid::Beta {
                n,
                r,
                extra_arcs,
                betas,
            } => betas
                .iter()
                .map(|&beta| {
                    let p = CoreCompleteParams {
                        n: *n,
                        r: *r,
                        beta,
                        extra_arcs: *extra_arcs,
                    };
                    (vec![beta.to_string()], cell(FamilyParams::CoreComplete(p)))
                })
                .collect(),
            Grid::Regular { pairs } => pairs
                .iter()
                .map(|&(n, k)| {
                    (
                        vec![n.to_string(), k.to_string()],
                        cell(FamilyParams::Regular { n, k }),
                    )
                })
                .collect(),
        }
    }
}

/// Runs every cell, on a dedicated pool of `threads` workers when given.
pub fn run_table(
    cfg: &TableConfig,
    registry: &BaselineRegistry,
    threads: Option<usize>,
) -> Result<Vec<Option<ExperimentStats>>, ExperimentError> {
    let run = || {
        cfg.cells()
            .iter()
            .map(|(_, c)| run_experiment_with(c, registry).map(Some))
            .collect()
    };
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| ExperimentError::ThreadPool(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// Worker count from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDocuments {
    pub csv: String,
    pub json: String,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    bound_id: &'a str,
    params: BTreeMap<&'a str, &'a str>,
    mean: f64,
    std: f64,
    min: f64,
    max: f64,
    n_samples: usize,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    config: &'a TableConfig,
    degenerate_samples: usize,
    rows: Vec<JsonRow<'a>>,
}

/// CSV with columns `bound_id`, one per grid parameter, then `mean, std,
/// min, max, n_samples`, rows ordered by bound then cell; JSON mirrors the
/// rows and echoes the configuration.
pub fn emit_table(
    cfg: &TableConfig,
    cells: &[Option<ExperimentStats>],
) -> Result<TableDocuments, ExperimentError> {
    let grid = cfg.cells();
    let names = cfg.parameter_names();
    let mut complete = Vec::with_capacity(grid.len());
    for (i, (params, _)) in grid.iter().enumerate() {
        match cells.get(i).and_then(Option::as_ref) {
            Some(stats) => complete.push((params, stats)),
            None => {
                return Err(ExperimentError::MissingCell(format!(
                    "{}={}",
                    names.join(","),
                    params.join(",")
                )))
            }
        }
    }

    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["bound_id"];
    header.extend(&names);
    header.extend(["mean", "std", "min", "max", "n_samples"]);
    let io = |e: csv::Error| ExperimentError::InvalidConfig(e.to_string());
    writer.write_record(&header).map_err(io)?;

    let mut rows = Vec::new();
    for bound in &cfg.bound_ids {
        for (params, stats) in &complete {
            let s = stats.bound(bound).ok_or_else(|| {
                ExperimentError::MissingCell(format!("{bound} at {}", params.join(",")))
            })?;
            let mut record = vec![bound.clone()];
            record.extend(params.iter().cloned());
            record.extend([s.mean, s.std, s.min, s.max].map(|x| x.to_string()));
            record.push(s.sample_count.to_string());
            writer.write_record(&record).map_err(io)?;
            rows.push(JsonRow {
                bound_id: bound,
                params: names
                    .iter()
                    .copied()
                    .zip(params.iter().map(String::as_str))
                    .collect(),
                mean: s.mean,
                std: s.std,
                min: s.min,
                max: s.max,
                n_samples: s.sample_count,
            });
        }
    }
    let csv = String::from_utf8(
        writer
            .into_inner()
            .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?,
    )
    .expect("csv output is utf-8");
    let table = JsonTable {
        config: cfg,
        degenerate_samples: complete.iter().map(|(_, s)| s.degenerate_samples).sum(),
        rows,
    };
    let json = serde_json::to_string_pretty(&table).expect("table serialises") + "\n";
    Ok(TableDocuments { csv, json })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_error_examples() {
        assert_eq!(relative_error(6.0, 6.0), Some(0.0));
        assert!((relative_error(48f64.sqrt(), 6.0).unwrap() - 0.1547).abs() < 1e-4);
        assert_eq!(relative_error(3.0, 0.0), None);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn population_std() {
        let s = BoundStats::from_errors("x".into(), &[1.0, 3.0]);
        assert_eq!(
            (s.mean, s.std, s.min, s.max, s.sample_count),
            (2.0, 1.0, 1.0, 3.0, 2)
        );
    }

    fn small_regular() -> TableConfig {
        let mut cfg = TableConfig::low_energy(Alpha::new(0.7).unwrap(), 8, RngSeed(11));
        cfg.grid = Grid::Regular {
            pairs: vec![(12, 2), (15, 3)],
        };
        cfg
    }

    #[test]
    fn table_shape_and_stability() {
        let cfg = small_regular();
        let one = emit_table(
            &cfg,
            &run_table(&cfg, &BaselineRegistry::new(), Some(1)).unwrap(),
        )
        .unwrap();
        let four = emit_table(
            &cfg,
            &run_table(&cfg, &BaselineRegistry::new(), Some(4)).unwrap(),
        )
        .unwrap();
        assert_eq!(one, four);
        let lines: Vec<&str> = one.csv.lines().collect();
        assert_eq!(lines.len(), 1 + 2 * 2);
        assert_eq!(lines[0], "bound_id,n,k,mean,std,min,max,n_samples");
        assert!(lines[1].starts_with("E_KM,12,2,"));
    }

    #[test]
    fn missing_cell_and_unknown_baseline() {
        let cfg = small_regular();
        assert!(matches!(
            emit_table(&cfg, &[None, None]),
            Err(ExperimentError::MissingCell(_))
        ));
        let mut bad = cfg.cells()[0].1.clone();
        bad.bound_ids = vec!["XI_2021".into()];
        assert!(matches!(
            run_experiment(&bad),
            Err(ExperimentError::UnknownBaseline(_))
        ));
        let mut registry = BaselineRegistry::new();
        registry.register("XI_2021", |input: &BaselineInput<'_>| 2.0 * input.energy);
        let stats = run_experiment_with(&bad, &registry).unwrap();
        let s = stats.bound("XI_2021").unwrap();
        assert!((s.mean - 1.0).abs() < 1e-12 && s.std < 1e-12);
    }

    #[test]
    fn zero_samples_rejected() {
        let mut cfg = small_regular().cells()[0].1.clone();
        cfg.samples = 0;
        assert!(matches!(
            run_experiment(&cfg),
            Err(ExperimentError::InvalidConfig(_))
        ));
    }
}
