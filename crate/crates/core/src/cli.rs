//! Command-line front end.
//!
//! Exit codes: `0` success, `1` eigensolver or numeric failure, `2` bad
//! input, `3` verification found a counterexample.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::alpha::Alpha;
use crate::bounds::BoundReport;
use crate::digraph::Digraph;
use crate::error::{BoundError, ExperimentError, GeneratorError, SpectralError};
use crate::experiment::{emit_table, run_table, BaselineRegistry, Grid, TableConfig, THREADS_ENV};
use crate::generators::{self, CoreCompleteParams, RngSeed};
use crate::spectral::{normality, AlphaMatrix, NormalityVerdict};
use crate::verify::{default_alpha_grid, verify_order, VerifyReport, MAX_SCOPE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SOLVER: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "digraph-spectra",
    version,
    about = "Spectra, energy and bounds of A_alpha matrices of digraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, spectral radius, low energy, moments and normality of an edge-list file
    Analyze(GraphArgs),
    /// Every bound next to the exact values, with equality flags
    Bounds(GraphArgs),
    /// Write a digraph from a named family or random model as an edge list
    Generate(GenerateArgs),
    /// Check all invariants on every digraph of a small order
    Verify(VerifyArgs),
    /// Monte-Carlo relative-error table for the spectral-radius or low-energy bounds
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge-list file: a header line "n m" followed by m lines "u v"
    pub path: PathBuf,
    /// Weight alpha in [0, 1], as a decimal or an exact fraction p/q
    #[arg(long, default_value = "0")]
    pub alpha: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub family: Family,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Complete symmetric digraph
    Complete {
        #[arg(long)]
        n: usize,
    },
    /// Complete symmetric digraph on k vertices plus n - k isolated vertices
    CompletePlusIsolated {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// No arcs
    Empty {
        #[arg(long)]
        n: usize,
    },
    /// t digons {1,2}, {3,4}, ... joined by forward arcs "u,v" (1-based)
    DigonChain {
        #[arg(long)]
        t: usize,
        #[arg(long = "arc", value_parser = parse_pair)]
        arcs: Vec<(usize, usize)>,
    },
    /// Directed cycle
    Cycle {
        #[arg(long)]
        k: usize,
    },
    /// Complete bipartite symmetric digraph with parts of size t
    Bipartite {
        #[arg(long)]
        t: usize,
    },
    /// Rotational regular tournament on an odd number of vertices
    Tournament {
        #[arg(long)]
        n: usize,
    },
    /// Core-complete random digraph
    CoreComplete {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        beta: f64,
        /// Defaults to 2n
        #[arg(long)]
        extra_arcs: Option<usize>,
    },
    /// Random digraph with all in- and out-degrees equal to k
    KRegular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Each ordered pair is an arc with probability p
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Order of the digraphs to enumerate (at most 5)
    #[arg(long, default_value_t = 4)]
    pub scope: usize,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// 1: spectral radius on core-complete digraphs; 2: low energy on di-regular digraphs
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub table: u8,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated beta values (table 1)
    #[arg(long, value_delimiter = ',', conflicts_with = "k_grid")]
    pub beta_grid: Option<Vec<f64>>,
    /// Comma-separated degrees k, each run with n = 10k (table 2)
    #[arg(long, value_delimiter = ',')]
    pub k_grid: Option<Vec<usize>>,
    /// Order of core-complete digraphs (table 1)
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Core size (table 1)
    #[arg(long, default_value_t = 5)]
    pub r: usize,
    /// Extra arcs per core-complete digraph (table 1); defaults to 2n
    #[arg(long)]
    pub extra_arcs: Option<usize>,
    /// Comma-separated bound ids; defaults to the table's own bounds
    #[arg(long, value_delimiter = ',')]
    pub bounds: Option<Vec<String>>,
    /// Write PREFIX.csv and PREFIX.json
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s
        .split_once(',')
        .ok_or_else(|| format!("expected u,v but got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(u)?, parse(v)?))
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn bad_input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_BAD_INPUT,
            message: message.into(),
        }
    }

    fn solver(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_SOLVER,
            message: message.into(),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Alpha(_) => CliError::bad_input(e.to_string()),
            _ => CliError::solver(e.to_string()),
        }
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::Spectral(s) => s.into(),
            BoundError::NegativeRadicand(_) => CliError::solver(e.to_string()),
            _ => CliError::bad_input(e.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::RetryBudgetExhausted { .. } => CliError::solver(e.to_string()),
            _ => CliError::bad_input(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Spectral { .. }
            | ExperimentError::Bound { .. }
            | ExperimentError::ThreadPool(_) => CliError::solver(e.to_string()),
            ExperimentError::Generator {
                source: GeneratorError::RetryBudgetExhausted { .. },
                ..
            } => CliError::solver(e.to_string()),
            _ => CliError::bad_input(e.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_BAD_INPUT
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = match command {
        Command::Analyze(args) => analyze(args)?,
        Command::Bounds(args) => bounds(args)?,
        Command::Generate(args) => generate(args)?,
        Command::Verify(args) => {
            let (text, passed) = verify(args)?;
            emit(out, &text)?;
            return Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED });
        }
        Command::Experiment(args) => experiment(args)?,
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::solver(format!("cannot write output: {e}")))
}

fn parse_alpha(s: &str) -> Result<Alpha, CliError> {
    s.parse()
        .map_err(|e: crate::error::AlphaError| CliError::bad_input(e.to_string()))
}

fn read_digraph(path: &Path) -> Result<Digraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::bad_input(format!("{}: {e}", path.display())))?;
    Digraph::parse(&text).map_err(|e| CliError::bad_input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serialises") + "\n"
}

fn csv_lines(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

/// Everything `analyze` reports.
#[derive(Debug, Serialize)]
pub struct Analysis {
    pub alpha: f64,
    pub alpha_exact: Option<String>,
    pub n: usize,
    pub m: usize,
    pub eigenvalues: Vec<[f64; 2]>,
    pub residual_tol: f64,
    pub spectral_radius: f64,
    pub low_energy: f64,
    #[serde(rename = "M1")]
    pub m1: f64,
    #[serde(rename = "M2")]
    pub m2: f64,
    pub frobenius_norm: f64,
    pub normality: NormalityVerdict,
}

impl Analysis {
    pub fn compute(g: &Digraph, alpha: Alpha) -> Result<Self, SpectralError> {
        let matrix = AlphaMatrix::new(g, alpha);
        let spectrum = matrix.eigenvalues()?;
        let (m1, m2) = matrix.spectral_moments();
        Ok(Self {
            alpha: alpha.value(),
            alpha_exact: alpha.exact().map(|r| r.to_string()),
            n: g.order(),
            m: g.size(),
            eigenvalues: spectrum
                .eigenvalues()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
            residual_tol: spectrum.residual_tol(),
            spectral_radius: spectrum.spectral_radius()?,
            low_energy: spectrum.low_energy()?,
            m1,
            m2,
            frobenius_norm: matrix.frobenius_norm(),
            normality: normality(g, alpha),
        })
    }
}

fn analyze(args: &GraphArgs) -> Result<String, CliError> {
    let alpha = parse_alpha(&args.alpha)?;
    let g = read_digraph(&args.path)?;
    let a = Analysis::compute(&g, alpha)?;
    Ok(match args.format {
        Format::Json => to_json(&a),
        Format::Csv => csv_lines(
            &[
                "alpha",
                "n",
                "m",
                "spectral_radius",
                "low_energy",
                "M1",
                "M2",
                "frobenius_norm",
                "normal",
            ],
            &[vec![
                a.alpha.to_string(),
                a.n.to_string(),
                a.m.to_string(),
                a.spectral_radius.to_string(),
                a.low_energy.to_string(),
                a.m1.to_string(),
                a.m2.to_string(),
                a.frobenius_norm.to_string(),
                a.normality.topological.to_string(),
            ]],
        ),
        Format::Table => {
            let mut s = String::new();
            let alpha_text = a.alpha_exact.clone().unwrap_or_else(|| a.alpha.to_string());
            for (k, v) in [
                ("alpha", alpha_text),
                ("n", a.n.to_string()),
                ("m", a.m.to_string()),
                ("spectral_radius", format!("{:.12}", a.spectral_radius)),
                ("low_energy", format!("{:.12}", a.low_energy)),
                ("M1", format!("{:.12}", a.m1)),
                ("M2", format!("{:.12}", a.m2)),
                ("frobenius_norm", format!("{:.12}", a.frobenius_norm)),
                ("normal", a.normality.topological.to_string()),
            ] {
                let _ = writeln!(s, "{k:<16} {v}");
            }
            let _ = writeln!(s, "eigenvalues");
            for [re, im] in &a.eigenvalues {
                let _ = writeln!(s, "  {re:>20.12} {im:>+20.12}i");
            }
            s
        }
    })
}

fn bounds(args: &GraphArgs) -> Result<String, CliError> {
    let alpha = parse_alpha(&args.alpha)?;
    let g = read_digraph(&args.path)?;
    let report = BoundReport::compute(&g, alpha)?;
    Ok(match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => csv_lines(&BoundReport::CSV_HEADER, &[report.csv_record()]),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:<16} {:>20}",
                "rho_exact",
                format!("{:.12}", report.rho_exact)
            );
            let _ = writeln!(
                s,
                "{:<16} {:>20}",
                "energy_exact",
                format!("{:.12}", report.energy_exact)
            );
            let _ = writeln!(
                s,
                "{:<16} {:>20} {:>8} {:>10}",
                "bound", "value", "equal", "structure"
            );
            for (id, flag) in &report.equality_flags {
                let value = report
                    .bound_value(*id)
                    .map_or(String::new(), |v| format!("{v:.12}"));
                let _ = writeln!(
                    s,
                    "{:<16} {:>20} {:>8} {:>10}",
                    id.as_str(),
                    value,
                    flag.numeric_equality,
                    flag.structural_match
                );
            }
            s
        }
    })
}

fn generate(args: &GenerateArgs) -> Result<String, CliError> {
    if let Some(out) = &args.out {
        check_parent(out)?;
    }
    let seed = RngSeed(args.seed);
    let g = match &args.family {
        Family::Complete { n } => generators::complete_symmetric(*n),
        Family::CompletePlusIsolated { k, n } => generators::complete_plus_isolated(*k, *n)?,
        Family::Empty { n } => generators::empty(*n),
        Family::DigonChain { t, arcs } => generators::digon_chain(*t, arcs)?,
        Family::Cycle { k } => generators::directed_cycle(*k)?,
        Family::Bipartite { t } => generators::complete_bipartite_symmetric(*t)?,
        Family::Tournament { n } => generators::rotational_tournament(*n)?,
        Family::CoreComplete {
            n,
            r,
            beta,
            extra_arcs,
        } => {
            let p = CoreCompleteParams {
                n: *n,
                r: *r,
                beta: *beta,
                extra_arcs: extra_arcs.unwrap_or(2 * n),
            };
            generators::core_complete_random(&p, seed)?
        }
        Family::KRegular { n, k } => generators::random_k_regular(*n, *k, seed)?,
        Family::Random { n, p } => generators::random_digraph(*n, *p, seed)?,
    };
    let text = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct EdgeList {
                n: usize,
                m: usize,
                arcs: Vec<(usize, usize)>,
            }
            to_json(&EdgeList {
                n: g.order(),
                m: g.size(),
                arcs: g.arcs().collect(),
            })
        }
        Format::Csv => csv_lines(
            &["u", "v"],
            &g.arcs()
                .map(|(u, v)| vec![u.to_string(), v.to_string()])
                .collect::<Vec<_>>(),
        ),
        Format::Table => g.serialize(),
    };
    match &args.out {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| CliError::bad_input(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn verify(args: &VerifyArgs) -> Result<(String, bool), CliError> {
    if args.scope == 0 || args.scope > MAX_SCOPE {
        return Err(CliError::bad_input(format!(
            "scope {} outside 1..={MAX_SCOPE}",
            args.scope
        )));
    }
    let report = verify_order(args.scope, &default_alpha_grid(args.scope));
    let passed = report.passed();
    let text = match args.format {
        Format::Json => to_json(&report),
        Format::Csv => csv_lines(
            &["check", "evaluations", "failures"],
            &report
                .checks
                .iter()
                .map(|(c, n)| {
                    vec![
                        c.clone(),
                        n.to_string(),
                        report.failures.get(c).copied().unwrap_or(0).to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Table => verify_table(&report),
    };
    Ok((text, passed))
}

fn verify_table(report: &VerifyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "order {}: {} digraphs, alpha in {{{}}}",
        report.scope,
        report.digraphs,
        report.alphas.join(", ")
    );
    let _ = writeln!(
        s,
        "{:<28} {:>12} {:>10}",
        "check", "evaluations", "failures"
    );
    for (check, n) in &report.checks {
        let _ = writeln!(
            s,
            "{check:<28} {n:>12} {:>10}",
            report.failures.get(check).copied().unwrap_or(0)
        );
    }
    match &report.first_counterexample {
        None => {
            let _ = writeln!(s, "PASS");
        }
        Some(c) => {
            let _ = writeln!(s, "FAIL: {} at alpha {}: {}", c.check, c.alpha, c.detail);
            let _ = write!(s, "{}", c.digraph);
        }
    }
    s
}

fn check_parent(path: &Path) -> Result<(), CliError> {
    let parent = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    if parent.is_dir() {
        Ok(())
    } else {
        Err(CliError::bad_input(format!(
            "output directory {} does not exist",
            parent.display()
        )))
    }
}

fn experiment(args: &ExperimentArgs) -> Result<String, CliError> {
    let alpha = parse_alpha(&args.alpha)?;
    if args.samples == 0 {
        return Err(CliError::bad_input("samples must be at least 1"));
    }
    if let Some(prefix) = &args.out {
        check_parent(prefix)?;
    }
    let seed = RngSeed(args.seed);
    let mut cfg = if args.table == 1 {
        if args.k_grid.is_some() {
            return Err(CliError::bad_input("--k-grid applies to table 2"));
        }
        let mut cfg = TableConfig::spectral_radius(alpha, args.samples, seed);
        cfg.grid = Grid::Beta {
            n: args.n,
            r: args.r,
            extra_arcs: args.extra_arcs.unwrap_or(2 * args.n),
            betas: args
                .beta_grid
                .clone()
                .unwrap_or_else(|| vec![0.8, 0.6, 0.4, 0.2, 0.1]),
        };
        cfg
    } else {
        if args.beta_grid.is_some() {
            return Err(CliError::bad_input("--beta-grid applies to table 1"));
        }
        let mut cfg = TableConfig::low_energy(alpha, args.samples, seed);
        if let Some(ks) = &args.k_grid {
            cfg.grid = Grid::Regular {
                pairs: ks.iter().map(|&k| (10 * k, k)).collect(),
            };
        }
        cfg
    };
    if let Some(b) = &args.bounds {
        cfg.bound_ids = b.iter().map(|s| s.trim().to_string()).collect();
    }
    let cells = run_table(&cfg, &BaselineRegistry::new(), args.threads)?;
    let docs = emit_table(&cfg, &cells)?;
    if let Some(prefix) = &args.out {
        for (ext, body) in [("csv", &docs.csv), ("json", &docs.json)] {
            let mut path = prefix.clone().into_os_string();
            path.push(format!(".{ext}"));
            fs::write(&path, body)
                .map_err(|e| CliError::bad_input(format!("{}: {e}", Path::new(&path).display())))?;
        }
    }
    Ok(match args.format {
        Format::Json => docs.json,
        Format::Csv => docs.csv,
        Format::Table => csv_to_table(&docs.csv),
    })
}

fn csv_to_table(csv_text: &str) -> String {
    let mut s = String::new();
    for line in csv_text.lines() {
        let cells: Vec<String> = line
            .split(',')
            .map(|c| match c.parse::<f64>() {
                Ok(x) if c.contains('.') || c.contains('e') => format!("{x:>12.6}"),
                _ => format!("{c:>12}"),
            })
            .collect();
        let _ = writeln!(s, "{}", cells.join(" "));
    }
    s
}
