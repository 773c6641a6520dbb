//! Disorder ensembles: many realizations of one walk, averaged.
//!
//! Realization `i` always sees landscape `i` of the base seed, and results
//! are combined by a fixed binary tree over realization indices, so the
//! summary does not depend on the number of worker threads.

use std::collections::BTreeMap;

use rayon::ThreadPoolBuilder;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{run, DisorderKind, Observable, Snapshot, WalkRecord, WalkSpec};
use crate::observables::Distribution;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub walk: WalkSpec,
    pub runs: usize,
    /// Replaces `walk.disorder.seed`.
    pub base_seed: u64,
    /// Worker threads; `None` uses every available core.
    pub workers: Option<usize>,
}

impl EnsembleSpec {
    pub fn new(walk: WalkSpec, runs: usize, base_seed: u64) -> Self {
        Self {
            walk,
            runs,
            base_seed,
            workers: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidParameter {
                field: "runs",
                reason: "an ensemble needs at least one run".into(),
            });
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidParameter {
                field: "workers",
                reason: "worker count must be positive".into(),
            });
        }
        self.walk.validate()
    }

    /// The walk with the ensemble's seed in place.
    pub fn seeded_walk(&self) -> WalkSpec {
        let mut walk = self.walk.clone();
        walk.disorder.seed = self.base_seed;
        walk
    }
}

/// Mean and standard error of one observable at every step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub runs: usize,
    pub base_seed: u64,
    pub series: BTreeMap<Observable, SeriesStats>,
    /// Per-site mean probability at each snapshot step.
    pub mean_distributions: Vec<Snapshot>,
}

impl EnsembleSummary {
    pub fn series(&self, observable: Observable) -> Option<&SeriesStats> {
        self.series.get(&observable)
    }

    /// Mean distribution at the last snapshot step.
    pub fn final_distribution(&self) -> Option<&Distribution> {
        self.mean_distributions.last().map(|s| &s.distribution)
    }
}

/// Running count, mean and sum of squared deviations per entry.
#[derive(Debug, Clone)]
struct Moments {
    n: f64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    fn single(values: &[f64]) -> Self {
        Self {
            n: 1.0,
            mean: values.to_vec(),
            m2: vec![0.0; values.len()],
        }
    }

    /// Pairwise combination of two disjoint samples.
    fn merge(mut self, other: Moments) -> Self {
        let n = self.n + other.n;
        let w = other.n / n;
        let cross = self.n * other.n / n;
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * w;
            self.m2[i] += other.m2[i] + delta * delta * cross;
        }
        self.n = n;
        self
    }

    fn stats(&self) -> SeriesStats {
        let stderr = if self.n > 1.0 {
            self.m2
                .iter()
                .map(|m2| (m2 / (self.n - 1.0)).max(0.0).sqrt() / self.n.sqrt())
                .collect()
        } else {
            vec![0.0; self.mean.len()]
        };
        SeriesStats {
            mean: self.mean.clone(),
            stderr,
        }
    }
}

struct Accumulator {
    series: BTreeMap<Observable, Moments>,
    snapshots: Vec<(Snapshot, Moments)>,
}

impl Accumulator {
    fn from_record(record: WalkRecord) -> Self {
        Self {
            series: record
                .series
                .iter()
                .map(|(&k, v)| (k, Moments::single(v)))
                .collect(),
            snapshots: record
                .snapshots
                .into_iter()
                .map(|s| {
                    let m = Moments::single(s.distribution.probabilities());
                    (s, m)
                })
                .collect(),
        }
    }

    fn merge(mut self, other: Accumulator) -> Self {
        self.series = std::mem::take(&mut self.series)
            .into_iter()
            .zip(other.series)
            .map(|((k, a), (_, b))| (k, a.merge(b)))
            .collect();
        self.snapshots = std::mem::take(&mut self.snapshots)
            .into_iter()
            .zip(other.snapshots)
            .map(|((s, a), (_, b))| (s, a.merge(b)))
            .collect();
        self
    }

    fn finish(self, runs: usize, base_seed: u64) -> EnsembleSummary {
        EnsembleSummary {
            runs,
            base_seed,
            series: self.series.iter().map(|(&k, m)| (k, m.stats())).collect(),
            mean_distributions: self
                .snapshots
                .into_iter()
                .map(|(mut s, m)| {
                    s.distribution.probabilities_mut().copy_from_slice(&m.mean);
                    s
                })
                .collect(),
        }
    }
}

/// Runs every realization and reduces them to means and standard errors.
///
/// Per-step observables are averaged per realization (negativity included).
pub fn run_ensemble(spec: &EnsembleSpec) -> Result<EnsembleSummary> {
    spec.validate()?;
    let walk = spec.seeded_walk();

    if walk.disorder.kind == DisorderKind::None {
        // Every realization is the same deterministic run.
        let mut acc = Accumulator::from_record(run_one(&walk, 0)?);
        for m in acc.series.values_mut() {
            m.n = spec.runs as f64;
        }
        return Ok(acc.finish(spec.runs, spec.base_seed));
    }

    let mut builder = ThreadPoolBuilder::new();
    if let Some(w) = spec.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Unsupported(format!("cannot start worker pool: {e}")))?;
    let acc = pool.install(|| reduce(&walk, 0, spec.runs))?;
    Ok(acc.finish(spec.runs, spec.base_seed))
}

fn run_one(walk: &WalkSpec, index: usize) -> Result<WalkRecord> {
    let tag = |e: Error| Error::Realization {
        index,
        source: Box::new(e),
    };
    let landscape = walk.sample_landscape(index as u64).map_err(tag)?;
    run(walk, &landscape).map_err(tag)
}

fn reduce(walk: &WalkSpec, lo: usize, hi: usize) -> Result<Accumulator> {
    if hi - lo == 1 {
        return run_one(walk, lo).map(Accumulator::from_record);
    }
    let mid = lo + (hi - lo) / 2;
    let (left, right) = rayon::join(|| reduce(walk, lo, mid), || reduce(walk, mid, hi));
    Ok(left?.merge(right?))
}

/// Agreement of one observable's mean curve between two ensembles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveAgreement {
    pub max_abs_diff: f64,
    /// Largest `|Δ| / √(se₁² + se₂²)` over steps with nonzero error.
    pub max_z: f64,
    /// Share of steps with `|Δ| ≤ 3·√(se₁² + se₂²)`.
    pub within_three_se: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub runs: usize,
    pub reference_runs: usize,
    pub curves: BTreeMap<Observable, CurveAgreement>,
}

impl ConvergenceReport {
    pub fn flagged(&self) -> bool {
        self.curves.values().any(|c| c.flagged)
    }
}

/// Share of steps that must agree within three pooled standard errors.
pub const AGREEMENT_FRACTION: f64 = 0.95;

/// Compares `summary` with a larger ensemble of the same spec.
pub fn convergence_report(
    spec: &EnsembleSpec,
    summary: &EnsembleSummary,
    reference_runs: usize,
) -> Result<ConvergenceReport> {
    if reference_runs <= summary.runs {
        return Err(Error::InvalidParameter {
            field: "reference_runs",
            reason: format!(
                "reference ensemble ({reference_runs}) must be larger than {}",
                summary.runs
            ),
        });
    }
    let reference = run_ensemble(&EnsembleSpec {
        runs: reference_runs,
        ..spec.clone()
    })?;
    Ok(compare_summaries(summary, &reference))
}

/// Step-by-step comparison of the mean curves two summaries share.
pub fn compare_summaries(a: &EnsembleSummary, b: &EnsembleSummary) -> ConvergenceReport {
    let curves = a
        .series
        .iter()
        .filter_map(|(k, sa)| b.series.get(k).map(|sb| (*k, agreement(sa, sb))))
        .collect();
    ConvergenceReport {
        runs: a.runs,
        reference_runs: b.runs,
        curves,
    }
}

fn agreement(a: &SeriesStats, b: &SeriesStats) -> CurveAgreement {
    let n = a.mean.len().min(b.mean.len());
    let mut max_abs_diff = 0.0f64;
    let mut max_z = 0.0f64;
    let mut within = 0usize;
    for i in 0..n {
        let d = (a.mean[i] - b.mean[i]).abs();
        let se = a.stderr[i].hypot(b.stderr[i]);
        max_abs_diff = max_abs_diff.max(d);
        if se > 0.0 {
            max_z = max_z.max(d / se);
        }
        if d <= 3.0 * se {
            within += 1;
        }
    }
    let within_three_se = if n == 0 {
        1.0
    } else {
        within as f64 / n as f64
    };
    CurveAgreement {
        max_abs_diff,
        max_z,
        within_three_se,
        flagged: within_three_se < AGREEMENT_FRACTION,
    }
}
