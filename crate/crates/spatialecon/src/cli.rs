//! Batch command-line front end.
//!
//! Five subcommands tie the library together: `weights` builds and
//! normalizes a weights matrix from an edge list or coordinates, `fit`
//! estimates one or all models, `diagnose` runs Moran's I and the LM
//! battery, `impacts` summarizes a saved fit, and `simulate` draws
//! synthetic datasets. All randomness funnels through `--seed`, and output
//! is byte-identical across runs and thread counts.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::data::{read_coords_csv, Dataset};
use crate::diagnostics::{lm_tests, morans_i_residuals, morans_i_tailed, Tail};
use crate::error::{Error, Result};
use crate::estimators::{fit, lr_test, FitResult, LrTestResult, ModelKind, ModelSpec};
use crate::impacts::{impacts_inference, impacts_summary, ImpactsSummary};
use crate::simulate::{generate, DgpSpec};
use crate::weights::SpatialWeights;

#[derive(Parser, Debug)]
#[command(
    name = "spatialecon",
    version,
    about = "Spatial weights, autocorrelation tests, spatial regression, and impact measures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a spatial weights matrix and report islands.
    Weights(WeightsArgs),
    /// Fit one model or the whole family to a dataset.
    Fit(FitArgs),
    /// Moran's I on a variable or on fit residuals, plus the LM battery.
    Diagnose(DiagnoseArgs),
    /// Direct/indirect/total impacts of a saved fit.
    Impacts(ImpactsArgs),
    /// Draw a synthetic dataset from a spatial process.
    Simulate(SimulateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum NormalizeArg {
    Row,
    Eigen,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    /// Edge-list CSV with header src,dst,weight (weight optional).
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Coordinates CSV with header id,x,y.
    #[arg(long)]
    pub coords: Option<PathBuf>,
    /// Optional unit-universe CSV (id column); units absent from the edge
    /// list become islands.
    #[arg(long)]
    pub units: Option<PathBuf>,
    /// Add the reverse of every edge that lacks one.
    #[arg(long)]
    pub symmetrize: bool,
    /// k for k-nearest-neighbour weights (with --coords).
    #[arg(long)]
    pub knn: Option<usize>,
    /// Decay exponent for inverse-distance weights (with --coords).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Distance cutoff for inverse-distance weights (with --coords).
    #[arg(long)]
    pub cutoff: Option<f64>,
    #[arg(long, value_enum)]
    pub normalize: Option<NormalizeArg>,
    /// Drop island units instead of keeping them as zero rows.
    #[arg(long)]
    pub drop_islands: bool,
    /// Output path for the canonical edge-list CSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Model: ols, slx, sar, sem, sdm, sdem, or all.
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub outcome: String,
    /// Comma-separated covariate column names.
    #[arg(long, value_delimiter = ',')]
    pub covariates: Vec<String>,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub normalize: Option<NormalizeArg>,
    /// Z-score the outcome and all covariates before fitting.
    #[arg(long)]
    pub standardize: bool,
    /// Output path for the fit JSON (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub weights: PathBuf,
    #[arg(long, value_enum)]
    pub normalize: Option<NormalizeArg>,
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Column to test with Moran's I.
    #[arg(long)]
    pub variable: Option<String>,
    /// Saved fit JSON; its residuals are tested instead of a column.
    #[arg(long)]
    pub fit: Option<PathBuf>,
    /// Run the LM battery (needs --data, --outcome, --covariates).
    #[arg(long)]
    pub lm: bool,
    #[arg(long)]
    pub outcome: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub covariates: Vec<String>,
    #[arg(long, default_value_t = 999)]
    pub permutations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Upper-tail permutation p-value instead of the two-sided default.
    #[arg(long)]
    pub one_sided: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ImpactsArgs {
    /// Saved fit JSON produced by `fit`.
    #[arg(long)]
    pub fit: PathBuf,
    #[arg(long)]
    pub weights: PathBuf,
    #[arg(long, value_enum)]
    pub normalize: Option<NormalizeArg>,
    /// Simulation draws for inference (omit for point estimates only).
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Process kind: ols, slx, sar, sem, sdm, sdem.
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Comma-separated covariate coefficients.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    /// Comma-separated lagged-covariate coefficients.
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub normalize: Option<NormalizeArg>,
    /// Row-normalized rook lattice as ROWSxCOLS (e.g. 20x20) instead of a
    /// weights file.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Output CSV for the generated dataset.
    #[arg(long)]
    pub out: PathBuf,
    /// Output path for the JSON manifest (stdout when omitted).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

/// Cap the global thread pool from SPATIALECON_THREADS. Results never
/// depend on the thread count; the variable only limits parallelism.
pub fn init_thread_pool_from_env() {
    if let Ok(v) = std::env::var("SPATIALECON_THREADS") {
        if let Ok(threads) = v.trim().parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Weights(args) => cmd_weights(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Diagnose(args) => cmd_diagnose(args),
        Command::Impacts(args) => cmd_impacts(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn apply_normalization(w: SpatialWeights, arg: Option<NormalizeArg>) -> Result<SpatialWeights> {
    match arg {
        None => Ok(w),
        Some(NormalizeArg::Row) => w.row_normalize(),
        Some(NormalizeArg::Eigen) => w.eigen_normalize(),
    }
}

fn load_weights(path: &PathBuf, normalize: Option<NormalizeArg>) -> Result<SpatialWeights> {
    apply_normalization(SpatialWeights::read_edge_csv(path, false)?, normalize)
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(&text, out)
}

fn write_text(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_weights(args: WeightsArgs) -> Result<()> {
    let base = match (&args.edges, &args.coords) {
        (Some(_), Some(_)) => {
            return Err(Error::ConfigError(
                "--edges and --coords are mutually exclusive".into(),
            ))
        }
        (Some(edges), None) => {
            let mut units = Vec::new();
            if let Some(upath) = &args.units {
                let mut rdr = csv::Reader::from_path(upath)?;
                let idx = rdr
                    .headers()?
                    .iter()
                    .position(|h| h.trim() == "id")
                    .ok_or_else(|| Error::ConfigError("units file needs an 'id' column".into()))?;
                for rec in rdr.records() {
                    units.push(rec?.get(idx).unwrap_or("").trim().to_string());
                }
            }
            let mut rdr = csv::ReaderBuilder::new().flexible(true).from_path(edges)?;
            let headers = rdr.headers()?.clone();
            let src = headers
                .iter()
                .position(|h| h.trim() == "src")
                .ok_or_else(|| Error::ConfigError("edge file is missing 'src'".into()))?;
            let dst = headers
                .iter()
                .position(|h| h.trim() == "dst")
                .ok_or_else(|| Error::ConfigError("edge file is missing 'dst'".into()))?;
            let wcol = headers.iter().position(|h| h.trim() == "weight");
            let mut pairs = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                let s = rec.get(src).unwrap_or("").trim().to_string();
                let d = rec.get(dst).unwrap_or("").trim().to_string();
                let w = match wcol.and_then(|c| rec.get(c)) {
                    None => None,
                    Some(t) if t.trim().is_empty() => None,
                    Some(t) => Some(t.trim().parse::<f64>().map_err(|_| {
                        Error::ConfigError(format!("unparseable weight '{t}'"))
                    })?),
                };
                pairs.push((s, d, w));
            }
            SpatialWeights::from_edge_list_with_units(&units, &pairs, args.symmetrize)?
        }
        (None, Some(coords)) => {
            let (ids, xy) = read_coords_csv(coords)?;
            match (args.knn, args.alpha, args.cutoff) {
                (Some(k), None, None) => SpatialWeights::knn_weights_with_ids(&ids, &xy, k)?,
                (None, Some(alpha), Some(cutoff)) => {
                    SpatialWeights::inverse_distance_weights_with_ids(&ids, &xy, alpha, cutoff)?
                }
                _ => {
                    return Err(Error::ConfigError(
                        "--coords needs either --knn K or --alpha A --cutoff C".into(),
                    ))
                }
            }
        }
        (None, None) => {
            return Err(Error::ConfigError(
                "one of --edges or --coords is required".into(),
            ))
        }
    };
    let (built, islands) = if args.drop_islands {
        base.drop_islands()
    } else {
        let report = base.detect_islands();
        (base, report)
    };
    let normalized = apply_normalization(built, args.normalize)?;
    normalized.write_edge_csv(&args.out)?;
    emit(&islands, None)
}

/// One record of `fit` output: the full fit plus its LR test against OLS.
#[derive(Debug, Serialize, serde::Deserialize)]
pub struct FitRecord {
    pub model: ModelKind,
    pub fit: FitResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lr_vs_ols: Option<LrTestResult>,
}

fn cmd_fit(args: FitArgs) -> Result<()> {
    let data = Dataset::from_csv(&args.data, &args.outcome, &args.covariates)?;
    let data = if args.standardize {
        data.standardize()?
    } else {
        data
    };
    let kinds: Vec<ModelKind> = if args.model.eq_ignore_ascii_case("all") {
        ModelKind::ALL.to_vec()
    } else {
        vec![args.model.parse()?]
    };
    let needs_w = kinds.iter().any(|k| *k != ModelKind::Ols);
    let (w, data) = match (&args.weights, needs_w) {
        (Some(path), _) => {
            let w = load_weights(path, args.normalize)?;
            let aligned = data.align_to(&w)?;
            (Some(w), aligned)
        }
        (None, true) => {
            return Err(Error::ConfigError(
                "spatial models require --weights".into(),
            ))
        }
        (None, false) => (None, data),
    };

    let ols = crate::estimators::fit_ols(&data)?;
    let mut records: Vec<FitRecord> = kinds
        .par_iter()
        .map(|&kind| -> Result<FitRecord> {
            let fitted = if kind == ModelKind::Ols {
                ols.clone()
            } else {
                fit(&ModelSpec::new(kind), &data, w.as_ref())?
            };
            let lr_vs_ols = if kind == ModelKind::Ols {
                None
            } else {
                Some(lr_test(&ols, &fitted)?)
            };
            Ok(FitRecord {
                model: kind,
                fit: fitted,
                lr_vs_ols,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // Output order is fixed by model name, not completion order.
    records.sort_by_key(|r| r.model.name());

    if records.len() == 1 {
        emit(&records[0], args.out.as_ref())
    } else {
        emit(&records, args.out.as_ref())
    }
}

#[derive(Debug, Serialize)]
struct DiagnoseReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    moran: Option<MoranOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lm: Option<crate::diagnostics::LmTestResult>,
}

#[derive(Debug, Serialize)]
struct MoranOut {
    statistic: f64,
    expectation: f64,
    p_value: f64,
    n_permutations: usize,
    seed: u64,
    s0: f64,
}

fn cmd_diagnose(args: DiagnoseArgs) -> Result<()> {
    let w = load_weights(&args.weights, args.normalize)?;
    let tail = if args.one_sided {
        Tail::Greater
    } else {
        Tail::TwoSided
    };

    let mut report = DiagnoseReport {
        moran: None,
        lm: None,
    };

    let moran = match (&args.variable, &args.fit) {
        (Some(_), Some(_)) => {
            return Err(Error::ConfigError(
                "--variable and --fit are mutually exclusive".into(),
            ))
        }
        (Some(var), None) => {
            let data_path = args.data.as_ref().ok_or_else(|| {
                Error::ConfigError("--variable needs --data".into())
            })?;
            let data = Dataset::from_csv(data_path, var, &[])?;
            let aligned = data.align_to(&w)?;
            Some(morans_i_tailed(
                &w,
                &aligned.y,
                args.permutations,
                args.seed,
                tail,
            )?)
        }
        (None, Some(fit_path)) => {
            let record: FitRecord =
                serde_json::from_str(&std::fs::read_to_string(fit_path)?)?;
            Some(morans_i_residuals(
                &record.fit,
                &w,
                args.permutations,
                args.seed,
            )?)
        }
        (None, None) => None,
    };
    if let Some(m) = moran {
        report.moran = Some(MoranOut {
            statistic: m.statistic,
            expectation: m.expectation,
            p_value: m.p_value,
            n_permutations: m.n_permutations,
            seed: m.seed,
            s0: m.s0,
        });
    }

    if args.lm {
        let data_path = args
            .data
            .as_ref()
            .ok_or_else(|| Error::ConfigError("--lm needs --data".into()))?;
        let outcome = args
            .outcome
            .as_ref()
            .ok_or_else(|| Error::ConfigError("--lm needs --outcome".into()))?;
        if args.covariates.is_empty() {
            return Err(Error::ConfigError("--lm needs --covariates".into()));
        }
        let data = Dataset::from_csv(data_path, outcome, &args.covariates)?.align_to(&w)?;
        let ols = crate::estimators::fit_ols(&data)?;
        report.lm = Some(lm_tests(&data, &ols, &w)?);
    }

    if report.moran.is_none() && report.lm.is_none() {
        return Err(Error::ConfigError(
            "nothing to do: pass --variable, --fit, or --lm".into(),
        ));
    }
    emit(&report, args.out.as_ref())
}

fn render_impacts_text(summary: &ImpactsSummary) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "model: {}  spillovers: {:?}\n",
        summary.model, summary.spillover_type
    ));
    out.push_str(&format!(
        "{:<20} {:>12} {:>12} {:>12}\n",
        "covariate", "direct", "indirect", "total"
    ));
    for row in &summary.rows {
        out.push_str(&format!(
            "{:<20} {:>12.6} {:>12.6} {:>12.6}\n",
            row.covariate, row.direct, row.indirect, row.total
        ));
        if let (Some(d), Some(i), Some(t)) = (
            &row.direct_inference,
            &row.indirect_inference,
            &row.total_inference,
        ) {
            out.push_str(&format!(
                "{:<20} {:>12.6} {:>12.6} {:>12.6}  (sd)\n",
                "", d.sd, i.sd, t.sd
            ));
            out.push_str(&format!(
                "{:<20} [{:.6}, {:.6}] [{:.6}, {:.6}] [{:.6}, {:.6}]  (95%)\n",
                "", d.q025, d.q975, i.q025, i.q975, t.q025, t.q975
            ));
        }
    }
    out
}

fn cmd_impacts(args: ImpactsArgs) -> Result<()> {
    let record: FitRecord = serde_json::from_str(&std::fs::read_to_string(&args.fit)?)?;
    let w = load_weights(&args.weights, args.normalize)?;
    let summary = match args.draws {
        Some(draws) => impacts_inference(&record.fit, &w, draws, args.seed)?,
        None => impacts_summary(&record.fit, &w)?,
    };
    match args.format {
        FormatArg::Json => emit(&summary, args.out.as_ref()),
        FormatArg::Text => write_text(&render_impacts_text(&summary), args.out.as_ref()),
    }
}

fn parse_lattice(spec: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = spec.split(['x', 'X']).collect();
    match parts.as_slice() {
        [a] => {
            let r = a.trim().parse::<usize>().map_err(|_| bad_lattice(spec))?;
            Ok((r, r))
        }
        [a, b] => {
            let r = a.trim().parse::<usize>().map_err(|_| bad_lattice(spec))?;
            let c = b.trim().parse::<usize>().map_err(|_| bad_lattice(spec))?;
            Ok((r, c))
        }
        _ => Err(bad_lattice(spec)),
    }
}

fn bad_lattice(spec: &str) -> Error {
    Error::ConfigError(format!("bad --lattice '{spec}'; use ROWS or ROWSxCOLS"))
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let w = match (&args.weights, &args.lattice) {
        (Some(_), Some(_)) => {
            return Err(Error::ConfigError(
                "--weights and --lattice are mutually exclusive".into(),
            ))
        }
        (Some(path), None) => load_weights(path, args.normalize)?,
        (None, Some(spec)) => {
            let (r, c) = parse_lattice(spec)?;
            if r * c == 0 {
                return Err(bad_lattice(spec));
            }
            apply_normalization(
                SpatialWeights::lattice_rook(r, c),
                args.normalize.or(Some(NormalizeArg::Row)),
            )?
        }
        (None, None) => {
            return Err(Error::ConfigError(
                "one of --weights or --lattice is required".into(),
            ))
        }
    };
    let spec = DgpSpec {
        kind: args.kind.parse()?,
        rho: args.rho,
        lambda: args.lambda,
        beta: if args.beta.is_empty() {
            vec![1.0]
        } else {
            args.beta.clone()
        },
        theta: args.theta.clone(),
        sigma: args.sigma,
        seed: args.seed,
    };
    let data = generate(&spec, &w)?;
    data.write_csv(&args.out)?;
    #[derive(Serialize)]
    struct Manifest<'a> {
        spec: &'a DgpSpec,
        n: usize,
        k: usize,
        outcome: &'a str,
        covariates: &'a [String],
        data_path: String,
    }
    let manifest = Manifest {
        spec: &spec,
        n: data.n(),
        k: data.k(),
        outcome: &data.outcome_name,
        covariates: &data.covariate_names,
        data_path: args.out.display().to_string(),
    };
    emit(&manifest, args.manifest.as_ref())
}
