//! Parameter sweeps over disorder ensembles.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{enumerate_sector, LocalSpin, SectorBasis};
use crate::correlations::{sigma_mi_quantifier, sigma_quantifier};
use crate::dynamics::{scan_decay_time, stride_for_spread, Propagator};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_floquet, derive_seed, draw_disorder, ModelParams};
use crate::harness::config::{Experiment, ExperimentConfig};
use crate::imbalance::{imbalance_pmf, normal_approximation};
use crate::spectral::{diagonalize, level_spacing_ratio, log_gap_means, pairing_gaps, quasienergies};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "SWAPCRYSTAL_THREADS";

/// Stride-1 pilots never look further than this.
const PILOT_HORIZON: u64 = 100_000;

/// One point of the (L, J, epsilon, alpha) grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub spin: LocalSpin,
    pub length: usize,
    pub j: f64,
    pub epsilon: f64,
    pub alpha: f64,
}

impl GridPoint {
    pub fn label(&self) -> String {
        format!("L{}_J{}_eps{}_alpha{}", self.length, self.j, self.epsilon, self.alpha)
    }

    pub fn params(&self, config: &ExperimentConfig) -> ModelParams {
        ModelParams::new(self.spin, self.length)
            .with_j(self.j)
            .with_epsilon(self.epsilon)
            .with_alpha(self.alpha)
            .with_disorder(config.v, config.h)
    }

    /// Seed of realization `r`, a function of the master seed and the point only.
    pub fn seed(&self, master: u64, r: usize) -> u64 {
        derive_seed(
            master,
            &[
                self.spin.dim() as u64,
                self.length as u64,
                self.j.to_bits(),
                self.epsilon.to_bits(),
                self.alpha.to_bits(),
                r as u64,
            ],
        )
    }
}

/// Disorder-averaged Z(t) and magnetizations of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub times: Vec<u64>,
    pub z_mean: Vec<f64>,
    pub z_stderr: Vec<f64>,
    /// `m_mean[t][k]`, physical units.
    pub m_mean: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub point: GridPoint,
    pub requested: usize,
    pub failures: usize,
    /// Names of the per-realization values.
    pub columns: Vec<String>,
    /// `(realization, seed, values)` in realization order.
    pub rows: Vec<(usize, u64, Vec<f64>)>,
    /// Mean and standard error of the first column (zero error for fewer than two values).
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
    pub stride: Option<u64>,
    pub series: Option<Series>,
}

/// Everything a run produced.
#[derive(Debug, Clone)]
pub struct AggregateResult {
    pub config: ExperimentConfig,
    pub points: Vec<PointResult>,
    /// `imbalance-dist` tables as `(L, d, support, exact, normal)`.
    pub imbalance: Vec<ImbalanceTable>,
    pub files: Vec<PathBuf>,
}

impl AggregateResult {
    pub fn total_failures(&self) -> usize {
        self.points.iter().map(|p| p.failures).sum()
    }

    pub fn experiment_dir(&self) -> PathBuf {
        self.config.output.join(self.config.experiment.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceTable {
    pub length: usize,
    pub d: u32,
    pub support: Vec<f64>,
    pub pmf_exact: Vec<f64>,
    /// Normal density times the bin width `2/L`.
    pub pmf_normal: Vec<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker count; `None` reads the environment variable, then falls back to rayon's default.
    pub threads: Option<usize>,
    /// Reuse finished grid points recorded in the inventory.
    pub resume: bool,
}

pub fn default_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&n| n > 0)
}

/// Mean, standard error and count.
pub fn mean_stderr(values: &[f64]) -> (f64, f64, usize) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0, 0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0, n);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt(), n)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(io_err(path))
}

pub fn grid(config: &ExperimentConfig) -> Vec<GridPoint> {
    let mut points = Vec::new();
    for &length in &config.lengths {
        for &j in &config.j {
            for &epsilon in &config.epsilon {
                for &alpha in &config.alpha {
                    points.push(GridPoint { spin: config.spin, length, j, epsilon, alpha });
                }
            }
        }
    }
    points
}

fn sector_for(config: &ExperimentConfig, point: &GridPoint) -> Result<SectorBasis> {
    let sz = match config.experiment {
        Experiment::Dynamics | Experiment::DecayTimes => config.initial()?.sector(point.spin, point.length)?,
        _ => 0,
    };
    let basis = enumerate_sector(point.length, point.spin, sz)?;
    if basis.dim() > config.dim_cap {
        return Err(Error::Config(format!(
            "sector dimension {} for {} exceeds dim_cap {}",
            basis.dim(),
            point.label(),
            config.dim_cap
        )));
    }
    Ok(basis)
}

fn columns(config: &ExperimentConfig) -> Vec<String> {
    let names: &[&str] = match config.experiment {
        Experiment::DecayTimes => &["tau", "censored"],
        Experiment::LevelRatio => &["r"],
        Experiment::Pairing | Experiment::PairingVsL => &["ell_delta", "log_delta_pi", "log_delta_0"],
        Experiment::Correlations if config.mutual_information => &["sigma", "sigma_mi"],
        Experiment::Correlations => &["sigma"],
        Experiment::Dynamics | Experiment::ImbalanceDist => &[],
    };
    names.iter().map(|s| s.to_string()).collect()
}

struct PointContext<'a> {
    config: &'a ExperimentConfig,
    point: GridPoint,
    params: ModelParams,
    basis: SectorBasis,
    times: Vec<u64>,
}

impl PointContext<'_> {
    fn floquet(&self, seed: u64) -> Result<crate::hamiltonian::FloquetOperator> {
        let realization = draw_disorder(&self.params, seed)?;
        build_floquet(&self.params, &realization, &self.basis)
    }

    fn propagator(&self, seed: u64) -> Result<Propagator> {
        let spectrum = diagonalize(&self.floquet(seed)?.matrix)?;
        let config = self.config.initial()?.config(self.point.spin, self.point.length)?;
        Propagator::new(&spectrum, &self.basis, &config)
    }

    /// Values of one realization; for dynamics the Z(t) series followed by the
    /// flattened magnetizations.
    fn realization(&self, seed: u64, stride: u64, horizon: u64) -> Result<Vec<f64>> {
        match self.config.experiment {
            Experiment::Dynamics => {
                let trace = self.propagator(seed)?.sample(&self.times)?;
                let mut out = trace.z;
                out.extend(trace.magnetization.into_iter().flatten());
                Ok(out)
            }
            Experiment::DecayTimes => {
                let d = scan_decay_time(&self.propagator(seed)?, stride, horizon)?;
                Ok(vec![d.tau as f64, f64::from(u8::from(d.censored))])
            }
            Experiment::LevelRatio => Ok(vec![level_spacing_ratio(&quasienergies(&self.floquet(seed)?.matrix)?)?]),
            Experiment::Pairing | Experiment::PairingVsL => {
                let gaps = pairing_gaps(&quasienergies(&self.floquet(seed)?.matrix)?)?;
                if gaps.delta0.iter().all(|&g| g == 0.0) {
                    return Err(Error::InvalidArgument("all consecutive gaps vanish".into()));
                }
                let (pi, zero) = log_gap_means(&gaps);
                Ok(vec![pi - zero, pi, zero])
            }
            Experiment::Correlations => {
                let spectrum = diagonalize(&self.floquet(seed)?.matrix)?;
                let n = spectrum.dim() as f64;
                let mut sigma = 0.0;
                let mut sigma_mi = 0.0;
                for b in 0..spectrum.dim() {
                    let state = spectrum.state(b);
                    sigma += sigma_quantifier(&self.basis, &state)?;
                    if self.config.mutual_information {
                        sigma_mi += sigma_mi_quantifier(&self.basis, &state)?;
                    }
                }
                let mut out = vec![sigma / n];
                if self.config.mutual_information {
                    out.push(sigma_mi / n);
                }
                Ok(out)
            }
            Experiment::ImbalanceDist => Err(Error::Unsupported("imbalance-dist has no realizations".into())),
        }
    }
}

type Outcome = (usize, u64, Result<Vec<f64>>);

fn run_realizations(ctx: &PointContext<'_>, range: std::ops::Range<usize>, stride: u64, horizon: u64) -> Vec<Outcome> {
    // collect() keeps realization order whatever the completion order
    range
        .into_par_iter()
        .map(|r| {
            let seed = ctx.point.seed(ctx.config.master_seed, r);
            (r, seed, ctx.realization(seed, stride, horizon))
        })
        .collect()
}

fn run_point(
    config: &ExperimentConfig,
    point: GridPoint,
    pool: &rayon::ThreadPool,
    log: &mut dyn FnMut(&str),
) -> Result<PointResult> {
    let basis = sector_for(config, &point)?;
    let times = match config.experiment {
        Experiment::Dynamics => config.schedule.schedule(config.horizon).times()?,
        _ => Vec::new(),
    };
    let ctx = PointContext { config, point, params: point.params(config), basis, times };
    ctx.params.validate()?;
    let requested = config.n_disorder_for(point.length);

    let mut stride = None;
    if config.experiment == Experiment::DecayTimes {
        let n = match config.stride {
            Some(n) => n,
            None => {
                let pilot = config.pilot.min(requested);
                let taus: Vec<f64> = pool
                    .install(|| run_realizations(&ctx, 0..pilot, 1, config.horizon.min(PILOT_HORIZON)))
                    .into_iter()
                    .filter_map(|(_, _, v)| v.ok().map(|v| v[0]))
                    .collect();
                let (_, se, count) = mean_stderr(&taus);
                let n = stride_for_spread(se * (count as f64).sqrt());
                log(&format!("{}: pilot of {count} gives stride {n}", point.label()));
                n
            }
        };
        stride = Some(n.min(config.horizon.max(1)));
    }

    let outcomes = pool.install(|| run_realizations(&ctx, 0..requested, stride.unwrap_or(1), config.horizon));
    let mut rows = Vec::with_capacity(requested);
    let mut failures = 0;
    for (r, seed, outcome) in outcomes {
        match outcome {
            Ok(values) => rows.push((r, seed, values)),
            Err(e) => {
                failures += 1;
                log(&format!("{} realization {r} (seed {seed}) failed: {e}", point.label()));
            }
        }
    }
    if failures * 100 > requested {
        return Err(Error::TooManyFailures { point: point.label(), failed: failures, total: requested });
    }

    let series = if config.experiment == Experiment::Dynamics {
        let t = ctx.times.len();
        let l = point.length;
        let mut z_mean = Vec::with_capacity(t);
        let mut z_stderr = Vec::with_capacity(t);
        let mut m_mean = vec![vec![0.0; l]; t];
        for i in 0..t {
            let z: Vec<f64> = rows.iter().map(|(_, _, v)| v[i]).collect();
            let (m, se, _) = mean_stderr(&z);
            z_mean.push(m);
            z_stderr.push(se);
            for (k, slot) in m_mean[i].iter_mut().enumerate() {
                *slot = rows.iter().map(|(_, _, v)| v[t + i * l + k]).sum::<f64>() / rows.len() as f64;
            }
        }
        let first = if rows.is_empty() { f64::NAN } else { z_mean[0] };
        rows.clear();
        Some((Series { times: ctx.times.clone(), z_mean, z_stderr, m_mean }, first))
    } else {
        None
    };

    let (mean, stderr, count) = match &series {
        Some((_, first)) => (*first, 0.0, requested - failures),
        None => mean_stderr(&rows.iter().map(|(_, _, v)| v[0]).collect::<Vec<_>>()),
    };
    Ok(PointResult {
        point,
        requested,
        failures,
        columns: columns(config),
        rows,
        mean,
        stderr,
        count,
        stride,
        series: series.map(|(s, _)| s),
    })
}

fn imbalance_tables(config: &ExperimentConfig) -> Result<Vec<ImbalanceTable>> {
    let mut out = Vec::new();
    for &length in &config.lengths {
        for &d in &config.local_dims {
            let dist = imbalance_pmf(length, d)?;
            let (mean, var) = normal_approximation(length, d)?;
            let width = 2.0 / length as f64;
            let pmf_normal = dist
                .support
                .iter()
                .map(|x| width * (-(x - mean).powi(2) / (2.0 * var)).exp() / (std::f64::consts::TAU * var).sqrt())
                .collect();
            out.push(ImbalanceTable { length, d, support: dist.support, pmf_exact: dist.pmf, pmf_normal });
        }
    }
    Ok(out)
}

/// CSV text of one grid point.
pub fn point_csv(result: &PointResult) -> String {
    let mut s = String::new();
    match &result.series {
        Some(series) => {
            s.push_str("t,z_mean,z_stderr");
            for k in 0..result.point.length {
                let _ = write!(s, ",m{k}");
            }
            s.push('\n');
            for (i, t) in series.times.iter().enumerate() {
                let _ = write!(s, "{t},{},{}", series.z_mean[i], series.z_stderr[i]);
                for m in &series.m_mean[i] {
                    let _ = write!(s, ",{m}");
                }
                s.push('\n');
            }
        }
        None => {
            s.push_str("realization,seed");
            for c in &result.columns {
                let _ = write!(s, ",{c}");
            }
            s.push('\n');
            for (r, seed, values) in &result.rows {
                let _ = write!(s, "{r},{seed}");
                for v in values {
                    let _ = write!(s, ",{v}");
                }
                s.push('\n');
            }
        }
    }
    s
}

fn summary_csv(points: &[PointResult]) -> String {
    let mut s = String::from("L,J,epsilon,alpha,spin,requested,count,failures,stride,mean,stderr\n");
    for p in points {
        let stride = p.stride.map(|n| n.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            p.point.length,
            p.point.j,
            p.point.epsilon,
            p.point.alpha,
            p.point.spin,
            p.requested,
            p.count,
            p.failures,
            stride,
            p.mean,
            p.stderr
        );
    }
    s
}

pub fn imbalance_csv(table: &ImbalanceTable) -> String {
    let mut s = String::from("I_LI,pmf_exact,pmf_normal\n");
    for i in 0..table.support.len() {
        let _ = writeln!(s, "{},{},{}", table.support[i], table.pmf_exact[i], table.pmf_normal[i]);
    }
    s
}

#[derive(Serialize, Deserialize)]
struct Inventory {
    config: ExperimentConfig,
    done: BTreeMap<String, PointResult>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    master_seed: u64,
    config: &'a ExperimentConfig,
    versions: BTreeMap<&'static str, &'static str>,
    points: Vec<ManifestPoint>,
    total_failures: usize,
}

#[derive(Serialize)]
struct ManifestPoint {
    label: String,
    file: String,
    requested: usize,
    count: usize,
    failures: usize,
    stride: Option<u64>,
}

/// Run every grid point of `config`, writing CSV, a summary, the inventory and a manifest under
/// `<output>/<experiment>/`. Per-realization failures are logged through `log`.
pub fn run_experiment(config: &ExperimentConfig, options: &RunOptions, log: &mut dyn FnMut(&str)) -> Result<AggregateResult> {
    config.validate()?;
    let dir = config.output.join(config.experiment.name());
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let mut files = Vec::new();

    if config.experiment == Experiment::ImbalanceDist {
        let imbalance = imbalance_tables(config)?;
        for table in &imbalance {
            let path = dir.join(format!("L{}_d{}.csv", table.length, table.d));
            write_file(&path, &imbalance_csv(table))?;
            files.push(path);
        }
        let result = AggregateResult { config: config.clone(), points: Vec::new(), imbalance, files };
        write_manifest(&result, &dir)?;
        return Ok(result);
    }

    let threads = options.threads.or_else(default_threads);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let inventory_path = dir.join("inventory.json");
    let mut inventory = Inventory { config: config.clone(), done: BTreeMap::new() };
    if options.resume {
        if let Ok(text) = fs::read_to_string(&inventory_path) {
            if let Ok(previous) = serde_json::from_str::<Inventory>(&text) {
                if previous.config == *config {
                    inventory.done = previous.done;
                } else {
                    log("inventory belongs to a different configuration; starting afresh");
                }
            }
        }
    }

    let mut points = Vec::new();
    for point in grid(config) {
        let label = point.label();
        let result = match inventory.done.get(&label) {
            Some(done) => {
                log(&format!("{label}: reusing finished result"));
                done.clone()
            }
            None => {
                let result = run_point(config, point, &pool, log)?;
                inventory.done.insert(label.clone(), result.clone());
                write_file(&inventory_path, &serde_json::to_string(&inventory)?)?;
                result
            }
        };
        let path = dir.join(format!("{label}.csv"));
        write_file(&path, &point_csv(&result))?;
        files.push(path);
        points.push(result);
    }
    let summary = dir.join("summary.csv");
    write_file(&summary, &summary_csv(&points))?;
    files.push(summary);
    let result = AggregateResult { config: config.clone(), points, imbalance: Vec::new(), files };
    write_manifest(&result, &dir)?;
    Ok(result)
}

fn write_manifest(result: &AggregateResult, dir: &Path) -> Result<()> {
    let mut versions = BTreeMap::new();
    versions.insert("swapcrystal", env!("CARGO_PKG_VERSION"));
    versions.insert("faer", "0.24");
    let points = result
        .points
        .iter()
        .map(|p| ManifestPoint {
            label: p.point.label(),
            file: format!("{}.csv", p.point.label()),
            requested: p.requested,
            count: p.count,
            failures: p.failures,
            stride: p.stride,
        })
        .collect();
    let manifest = Manifest {
        experiment: result.config.experiment.name(),
        master_seed: result.config.master_seed,
        config: &result.config,
        versions,
        points,
        total_failures: result.total_failures(),
    };
    let path = dir.join("manifest.json");
    write_file(&path, &serde_json::to_string_pretty(&manifest)?)
}
