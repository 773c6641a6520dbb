//! Config-driven experiments: expand sweeps, run them, write datasets.
//!
//! Each run writes its tables into `<output_dir>/<name>/` together with
//! `<name>.manifest.json`, which lists every file with its SHA-256.

pub mod config;
pub mod output;
pub mod presets;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

pub use config::{
    Angle, ExperimentConfig, ExperimentKind, InitConfig, OutputFormat, Sweep, WalkJob,
};
pub use output::{parse_csv, sha256_hex, write_atomic, Cell, Table};
pub use presets::{preset, presets, Preset};

use crate::coin::CoinSchedule;
use crate::ensemble::{run_ensemble, EnsembleSpec};
use crate::error::{Error, Result};
use crate::evolution::{run, DisorderKind, DisorderSpec, Observable, Snapshot};
use crate::lattice::Confinement;
use crate::observables::Distribution;
use crate::spectral::{
    dispersion_omega, group_velocity_of, lyapunov_over_seeds, transfer_matrix_1p,
    transfer_matrix_2p,
};
use config::{ScheduleQuantity, TransferSection};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "AQW_OUTPUT_DIR";
const FALLBACK_OUTPUT_DIR: &str = "aqw-out";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the config and the environment.
    pub output_dir: Option<PathBuf>,
    /// Caps ensemble and Lyapunov parallelism.
    pub workers: Option<usize>,
}

/// Where a run's files go: options, then config, then environment.
pub fn resolve_output_dir(config: &ExperimentConfig, options: &RunOptions) -> PathBuf {
    let base = options
        .output_dir
        .clone()
        .or_else(|| config.output_dir.clone())
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(FALLBACK_OUTPUT_DIR));
    base.join(&config.name)
}

/// One table an experiment produces.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub stem: String,
    pub params: BTreeMap<String, String>,
    pub table: Table,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub sha256: String,
    pub rows: usize,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub name: String,
    pub kind: ExperimentKind,
    pub description: String,
    pub generator: String,
    pub version: String,
    pub created_unix: u64,
    pub config_sha256: String,
    pub config: serde_json::Value,
    pub seeds: BTreeMap<String, u64>,
    pub outputs: Vec<OutputEntry>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub directory: PathBuf,
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

/// Parses, validates and runs the config at `path`.
pub fn run_config_file(path: &Path, options: &RunOptions) -> Result<RunReport> {
    let config = ExperimentConfig::load(path)?;
    run_config(&config, options)
}

/// Runs `config` and writes its datasets and manifest.
pub fn run_config(config: &ExperimentConfig, options: &RunOptions) -> Result<RunReport> {
    config.validate()?;
    let datasets = compute(config, options)?;
    let dir = resolve_output_dir(config, options);

    let mut files = Vec::with_capacity(datasets.len());
    let mut outputs = Vec::with_capacity(datasets.len());
    for d in &datasets {
        let file = format!("{}.{}", d.stem, config.format.extension());
        let bytes = d.table.encode(config.format).into_bytes();
        let path = dir.join(&file);
        write_atomic(&path, &bytes)?;
        outputs.push(OutputEntry {
            file,
            sha256: sha256_hex(&bytes),
            rows: d.table.rows.len(),
            params: d.params.clone(),
        });
        files.push(path);
    }

    let config_json = serde_json::to_value(config).expect("configs serialize");
    let manifest = Manifest {
        name: config.name.clone(),
        kind: config.kind,
        description: config.description.clone(),
        generator: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        created_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        config_sha256: sha256_hex(config_json.to_string().as_bytes()),
        config: config_json,
        seeds: seeds(config),
        outputs,
    };
    let manifest_path = dir.join(format!("{}.manifest.json", config.name));
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write_atomic(&manifest_path, text.as_bytes())?;

    Ok(RunReport {
        directory: dir,
        files,
        manifest: manifest_path,
    })
}

fn seeds(config: &ExperimentConfig) -> BTreeMap<String, u64> {
    let mut seeds = BTreeMap::new();
    if let Some(d) = &config.disorder {
        seeds.insert("disorder_seed".into(), d.seed);
    }
    if let Some(e) = &config.ensemble {
        seeds.insert("base_seed".into(), e.base_seed);
    }
    if let Some(l) = &config.lyapunov {
        for (i, s) in l.seeds.iter().enumerate() {
            seeds.insert(format!("lyapunov_seed_{i}"), *s);
        }
    }
    seeds
}

/// Runs the experiment and returns its tables without writing anything.
pub fn compute(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<Dataset>> {
    config.validate()?;
    match config.kind {
        ExperimentKind::Walk | ExperimentKind::Ensemble => walk_datasets(config, options),
        ExperimentKind::Surface => surface_datasets(config, options),
        ExperimentKind::Schedule => Ok(schedule_datasets(config)),
        ExperimentKind::Dispersion => Ok(dispersion_datasets(config)),
        ExperimentKind::Transfer => transfer_datasets(config),
        ExperimentKind::Lyapunov => lyapunov_datasets(config, options),
    }
}

/// Short description of what `run` would produce, for `validate`.
pub fn describe(config: &ExperimentConfig) -> Result<String> {
    config.validate()?;
    let jobs = match config.kind {
        ExperimentKind::Walk | ExperimentKind::Ensemble | ExperimentKind::Surface => {
            let jobs = config.walk_jobs()?;
            let runs: usize = jobs
                .iter()
                .map(|j| j.ensemble.as_ref().map_or(1, |e| e.runs))
                .sum();
            format!("{} parameter combinations, {} walks", jobs.len(), runs)
        }
        ExperimentKind::Schedule => "coin schedule table".into(),
        ExperimentKind::Dispersion => "dispersion tables".into(),
        ExperimentKind::Transfer => "transfer-matrix table".into(),
        ExperimentKind::Lyapunov => "lyapunov table".into(),
    };
    Ok(format!(
        "{}: kind = {}, {}",
        config.name,
        config.kind.label(),
        jobs
    ))
}

fn stem(config: &ExperimentConfig, tag: &str, what: &str) -> String {
    if tag.is_empty() {
        format!("{}_{what}", config.name)
    } else {
        format!("{}_{tag}_{what}", config.name)
    }
}

fn job_params(job: &WalkJob) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    p.insert("theta0".into(), format!("{}", job.theta0));
    p.insert("a".into(), format!("{}", job.a));
    p.insert("steps".into(), job.spec.steps.to_string());
    p.insert("disorder".into(), job.spec.disorder.kind.label().into());
    if job.spec.disorder.kind != DisorderKind::None {
        p.insert("disorder_seed".into(), job.spec.disorder.seed.to_string());
    }
    if let Some(e) = &job.ensemble {
        p.insert("runs".into(), e.runs.to_string());
        p.insert("base_seed".into(), e.base_seed.to_string());
    }
    p
}

fn ensemble_with_workers(spec: &EnsembleSpec, options: &RunOptions) -> EnsembleSpec {
    let mut spec = spec.clone();
    if options.workers.is_some() {
        spec.workers = options.workers;
    }
    spec
}

fn distribution_table(dist: &Distribution, axis: &str) -> Table {
    match dist {
        Distribution::Line(d) => {
            let mut t = Table::new(&[axis, "p"]);
            for (x, p) in d.iter() {
                t.push(vec![x.into(), p.into()]);
            }
            t
        }
        Distribution::Plane(d) => {
            let mut t = Table::new(&["x", "y", "p"]);
            for ((x, y), p) in d.iter() {
                t.push(vec![x.into(), y.into(), p.into()]);
            }
            t
        }
    }
}

fn line_axis(job: &WalkJob) -> &'static str {
    if job.spec.particle_count() == 2
        && Confinement::of_coin(job.spec.init.coin()) == Confinement::YLine
    {
        "y"
    } else {
        "x"
    }
}

/// An observable's mean and, for ensembles, its standard error.
type SeriesColumns = (Observable, Vec<f64>, Option<Vec<f64>>);

fn walk_datasets(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<Dataset>> {
    let mut out = Vec::new();
    for job in config.walk_jobs()? {
        let tag = job.tag();
        let params = job_params(&job);
        let axis = line_axis(&job);
        let (snapshots, series): (Vec<Snapshot>, Vec<SeriesColumns>) = match &job.ensemble {
            None => {
                let landscape = job.spec.sample_landscape(0)?;
                let rec = run(&job.spec, &landscape)?;
                let series = rec.series.into_iter().map(|(k, v)| (k, v, None)).collect();
                (rec.snapshots, series)
            }
            Some(e) => {
                let summary = run_ensemble(&ensemble_with_workers(e, options))?;
                let series = summary
                    .series
                    .into_iter()
                    .map(|(k, s)| (k, s.mean, Some(s.stderr)))
                    .collect();
                (summary.mean_distributions, series)
            }
        };
        for snap in &snapshots {
            let mut p = params.clone();
            p.insert("step".into(), snap.step.to_string());
            out.push(Dataset {
                stem: stem(config, &tag, &format!("distribution_t{}", snap.step)),
                params: p,
                table: distribution_table(&snap.distribution, axis),
            });
        }
        for (obs, mean, stderr) in series {
            let mut table = match stderr {
                Some(_) => Table::new(&["t", "value", "stderr"]),
                None => Table::new(&["t", "value"]),
            };
            for (t, v) in mean.iter().enumerate() {
                let mut row = vec![t.into(), (*v).into()];
                if let Some(se) = &stderr {
                    row.push(se[t].into());
                }
                table.push(row);
            }
            let mut p = params.clone();
            p.insert("observable".into(), obs.key().into());
            out.push(Dataset {
                stem: stem(config, &tag, obs.key()),
                params: p,
                table,
            });
        }
    }
    Ok(out)
}

fn surface_datasets(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<Dataset>> {
    let surface = config.surface.as_ref().expect("validated");
    let obs = surface.observable;
    if !obs.is_series() {
        return Err(Error::Config(
            "surface.observable: must be a per-step scalar, not `distribution`".into(),
        ));
    }
    let ensemble = config.ensemble.is_some();
    let mut groups: Vec<(String, BTreeMap<String, String>, Table)> = Vec::new();
    for job in config.walk_jobs()? {
        let tag = job.tag();
        let (mean, stderr) = match &job.ensemble {
            None => {
                let rec = run(&job.spec, &job.spec.sample_landscape(0)?)?;
                (rec.series[&obs].clone(), None)
            }
            Some(e) => {
                let s = run_ensemble(&ensemble_with_workers(e, options))?;
                let stats = s.series[&obs].clone();
                (stats.mean, Some(stats.stderr))
            }
        };
        let idx = match groups.iter().position(|g| g.0 == tag) {
            Some(i) => i,
            None => {
                let mut params = job_params(&job);
                params.remove("a");
                params.insert("observable".into(), obs.key().into());
                let cols: &[&str] = if ensemble {
                    &["a", "t", "value", "stderr"]
                } else {
                    &["a", "t", "value"]
                };
                groups.push((tag.clone(), params, Table::new(cols)));
                groups.len() - 1
            }
        };
        let table = &mut groups[idx].2;
        for (t, v) in mean.iter().enumerate() {
            if !surface.at_steps.is_empty() && !surface.at_steps.contains(&t) {
                continue;
            }
            let mut row = vec![job.a.into(), t.into(), (*v).into()];
            if let Some(se) = &stderr {
                row.push(se[t].into());
            }
            table.push(row);
        }
    }
    Ok(groups
        .into_iter()
        .map(|(tag, params, table)| Dataset {
            stem: stem(config, &tag, &format!("{}_surface", obs.key())),
            params,
            table,
        })
        .collect())
}

fn schedule_datasets(config: &ExperimentConfig) -> Vec<Dataset> {
    let s = config.schedule.as_ref().expect("validated");
    let what = match s.quantity {
        ScheduleQuantity::CosTheta => "cos_theta",
        ScheduleQuantity::Theta => "theta",
    };
    s.theta0
        .values()
        .into_iter()
        .map(|theta| {
            let mut table = Table::new(&["a", "t", "value"]);
            for a in s.a.values() {
                let schedule = CoinSchedule::new(theta.radians, a).expect("validated");
                for t in 0..=s.steps {
                    let th = schedule.theta_at(t);
                    let v = match s.quantity {
                        ScheduleQuantity::CosTheta => th.cos(),
                        ScheduleQuantity::Theta => th,
                    };
                    table.push(vec![a.into(), t.into(), v.into()]);
                }
            }
            let tag = if s.theta0.is_sweep() {
                format!("theta0={}", config::sanitize(&theta.text))
            } else {
                String::new()
            };
            let mut params = BTreeMap::new();
            params.insert("theta0".into(), format!("{}", theta.radians));
            params.insert("quantity".into(), what.into());
            Dataset {
                stem: stem(config, &tag, what),
                params,
                table,
            }
        })
        .collect()
}

fn dispersion_datasets(config: &ExperimentConfig) -> Vec<Dataset> {
    let d = config.dispersion.as_ref().expect("validated");
    let phis = d
        .phi
        .as_ref()
        .map_or(vec![Angle::from(0.0)], |p| p.values());
    let phi_sweep = d.phi.as_ref().is_some_and(|p| p.is_sweep());
    let mut out = Vec::new();
    for theta in d.theta0.values() {
        for phi in &phis {
            let mut table = Table::new(&["kappa", "omega_plus", "omega_minus", "group_velocity"]);
            for i in 0..d.points {
                let kappa = -std::f64::consts::PI
                    + 2.0 * std::f64::consts::PI * i as f64 / (d.points - 1) as f64;
                let w = dispersion_omega(theta.radians, kappa, phi.radians, d.variant);
                let v = group_velocity_of(d.variant, theta.radians, kappa, phi.radians)
                    .unwrap_or(f64::NAN);
                table.push(vec![kappa.into(), w.plus.into(), w.minus.into(), v.into()]);
            }
            let mut tag = Vec::new();
            if d.theta0.is_sweep() {
                tag.push(format!("theta0={}", config::sanitize(&theta.text)));
            }
            if phi_sweep {
                tag.push(format!("phi={}", config::sanitize(&phi.text)));
            }
            let mut params = BTreeMap::new();
            params.insert("theta0".into(), format!("{}", theta.radians));
            params.insert("phi".into(), format!("{}", phi.radians));
            params.insert(
                "variant".into(),
                serde_json::to_value(d.variant)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
            );
            out.push(Dataset {
                stem: stem(config, &tag.join("_"), "dispersion"),
                params,
                table,
            });
        }
    }
    out
}

fn transfer_datasets(config: &ExperimentConfig) -> Result<Vec<Dataset>> {
    let t: &TransferSection = config.transfer.as_ref().expect("validated");
    let mut table = Table::new(&["theta", "phi", "omega", "det_abs", "det_arg"]);
    for theta in t.theta.values() {
        for phi in t.phi.values() {
            for omega in t.omega.values() {
                let det = if t.particles == 1 {
                    transfer_matrix_1p(theta.radians, phi.radians, omega.radians)?.determinant()
                } else {
                    transfer_matrix_2p(theta.radians, phi.radians, omega.radians)?.determinant()
                };
                table.push(vec![
                    theta.radians.into(),
                    phi.radians.into(),
                    omega.radians.into(),
                    det.norm().into(),
                    det.arg().into(),
                ]);
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("particles".into(), t.particles.to_string());
    Ok(vec![Dataset {
        stem: stem(config, "", "transfer"),
        params,
        table,
    }])
}

fn lyapunov_datasets(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<Dataset>> {
    let l = config.lyapunov.as_ref().expect("validated");
    let disorder = config
        .disorder
        .as_ref()
        .map_or(DisorderSpec::none(), |d| d.spec(d.kind.values()[0]));
    let mut table = Table::new(&[
        "theta",
        "omega",
        "seed",
        "gamma",
        "xi",
        "first_half",
        "second_half",
        "converged",
    ]);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = options.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Unsupported(format!("cannot start worker pool: {e}")))?;
    for theta in l.theta.values() {
        for omega in l.omega.values() {
            let results = pool.install(|| {
                lyapunov_over_seeds(
                    &disorder,
                    &l.seeds,
                    theta.radians,
                    omega.radians,
                    l.chain_length,
                )
            });
            for (seed, r) in l.seeds.iter().zip(results) {
                let (gamma, first, second, converged) = match r {
                    Ok(e) => (e.gamma, e.first_half, e.second_half, 1i64),
                    Err(Error::NotConverged { first, second }) => {
                        ((first + second) / 2.0, first, second, 0)
                    }
                    Err(e) => return Err(e),
                };
                let xi = if gamma > 0.0 {
                    1.0 / gamma
                } else {
                    f64::INFINITY
                };
                table.push(vec![
                    theta.radians.into(),
                    omega.radians.into(),
                    Cell::UInt(*seed),
                    gamma.into(),
                    xi.into(),
                    first.into(),
                    second.into(),
                    converged.into(),
                ]);
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("chain_length".into(), l.chain_length.to_string());
    params.insert("disorder".into(), disorder.kind.label().into());
    Ok(vec![Dataset {
        stem: stem(config, "", "lyapunov"),
        params,
        table,
    }])
}
