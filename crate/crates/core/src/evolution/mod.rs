//! Time evolution: steps, walk specifications and recorded runs.

mod disorder;
mod step;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use disorder::{
    realization_rng, sample_landscape, DisorderKind, DisorderSpec, PhaseLandscape, Phases,
};
pub use step::{step_one_particle, step_two_particle};

use crate::coin::{AngleSchedule, CoinSchedule};
use crate::error::{Error, Result};
use crate::lattice::{Confinement, InitialState, SpinorField1P, Storage, TwoParticleField};
use crate::observables::{self, Distribution, NegativityMethod};

/// Quantities a walk can record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Position distribution at the snapshot steps.
    Distribution,
    Sigma,
    Ipr,
    NegativityCoinPosition,
    NegativityParticleParticle,
}

impl Observable {
    pub const ALL: [Observable; 5] = [
        Observable::Distribution,
        Observable::Sigma,
        Observable::Ipr,
        Observable::NegativityCoinPosition,
        Observable::NegativityParticleParticle,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Observable::Distribution => "distribution",
            Observable::Sigma => "sigma",
            Observable::Ipr => "ipr",
            Observable::NegativityCoinPosition => "negativity_coin_position",
            Observable::NegativityParticleParticle => "negativity_particle_particle",
        }
    }

    /// Whether the observable is a per-step scalar series.
    pub fn is_series(self) -> bool {
        self != Observable::Distribution
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.key() == s)
            .ok_or_else(|| Error::Config(format!("unknown record key `{s}`")))
    }
}

/// Everything needed to run one walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpec {
    pub schedule: CoinSchedule,
    pub disorder: DisorderSpec,
    pub init: InitialState,
    pub steps: usize,
    pub record: BTreeSet<Observable>,
    /// Steps at which the distribution is stored; empty means the last step.
    pub snapshots: Vec<usize>,
    /// Evolve two-particle states on the full plane even when line-confined.
    pub full_plane: bool,
}

impl WalkSpec {
    pub fn new(init: InitialState, schedule: CoinSchedule, steps: usize) -> Self {
        Self {
            schedule,
            disorder: DisorderSpec::none(),
            init,
            steps,
            record: BTreeSet::new(),
            snapshots: Vec::new(),
            full_plane: false,
        }
    }

    pub fn record(mut self, observable: Observable) -> Self {
        self.record.insert(observable);
        self
    }

    pub fn with_disorder(mut self, disorder: DisorderSpec) -> Self {
        self.disorder = disorder;
        self
    }

    pub fn with_snapshots(mut self, steps: Vec<usize>) -> Self {
        self.snapshots = steps;
        self
    }

    pub fn on_full_plane(mut self) -> Self {
        self.full_plane = true;
        self
    }

    pub fn particle_count(&self) -> usize {
        self.init.particle_count()
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidParameter {
                field: "steps",
                reason: "a walk needs at least one step".into(),
            });
        }
        self.schedule.validate()?;
        self.disorder.validate()?;
        if let Some(&s) = self.snapshots.iter().find(|&&s| s > self.steps) {
            return Err(Error::InvalidParameter {
                field: "snapshots",
                reason: format!("snapshot step {s} exceeds walk length {}", self.steps),
            });
        }
        let two = self.particle_count() == 2;
        if !two
            && self
                .record
                .contains(&Observable::NegativityParticleParticle)
        {
            return Err(Error::InvalidParameter {
                field: "record",
                reason: "negativity_particle_particle needs two particles".into(),
            });
        }
        if two
            && self.record.contains(&Observable::NegativityCoinPosition)
            && (self.full_plane || Confinement::of_coin(self.init.coin()) == Confinement::Full2D)
        {
            return Err(Error::Unsupported(
                "coin-position negativity needs a line-confined two-particle state".into(),
            ));
        }
        Ok(())
    }

    /// Initial state sized for this walk.
    pub fn initial_state(&self) -> Result<WalkState> {
        WalkState::for_spec(self)
    }

    /// Number of phases a landscape for this walk must carry.
    pub fn landscape_size(&self) -> Result<usize> {
        Ok(match self.disorder.kind {
            DisorderKind::None => 0,
            DisorderKind::Temporal => self.steps,
            DisorderKind::Spatial => self.initial_state()?.site_count(),
        })
    }

    /// Landscape for realization `index` of this walk's disorder.
    pub fn sample_landscape(&self, index: u64) -> Result<PhaseLandscape> {
        sample_landscape(&self.disorder, self.landscape_size()?.max(1), index)
    }
}

/// A walker of either particle count.
#[derive(Debug, Clone, PartialEq)]
pub enum WalkState {
    One(SpinorField1P),
    Two(TwoParticleField),
}

impl WalkState {
    fn for_spec(spec: &WalkSpec) -> Result<Self> {
        Ok(match spec.particle_count() {
            1 => WalkState::One(SpinorField1P::new(&spec.init, spec.steps)?),
            _ if spec.full_plane => {
                WalkState::Two(TwoParticleField::new_full_2d(&spec.init, spec.steps)?)
            }
            _ => WalkState::Two(TwoParticleField::new(&spec.init, spec.steps)?),
        })
    }

    /// Length a per-site phase landscape must have.
    pub fn site_count(&self) -> usize {
        match self {
            WalkState::One(s) => s.len(),
            WalkState::Two(s) => match s.storage {
                Storage::Line(_) => s.axis_len(),
                Storage::Grid(_) => s.axis_len() * s.axis_len(),
            },
        }
    }

    pub fn step(&mut self, theta: f64, phases: Phases<'_>) -> Result<()> {
        match self {
            WalkState::One(s) => step_one_particle(s, theta, phases),
            WalkState::Two(s) => step_two_particle(s, theta, phases),
        }
    }

    pub fn time(&self) -> usize {
        match self {
            WalkState::One(s) => s.time(),
            WalkState::Two(s) => s.time(),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            WalkState::One(s) => s.norm(),
            WalkState::Two(s) => s.norm(),
        }
    }

    pub fn distribution(&self) -> Distribution {
        match self {
            WalkState::One(s) => Distribution::Line(observables::distribution(s)),
            WalkState::Two(s) => observables::distribution_two_particle(s),
        }
    }

    pub fn negativity_coin_position(&self) -> Result<f64> {
        let method = NegativityMethod::SchmidtPure;
        Ok(match self {
            WalkState::One(s) => observables::negativity_coin_position(s, method)?.value,
            WalkState::Two(s) => {
                observables::negativity_coin_position_two_particle(s, method)?.value
            }
        })
    }

    pub fn negativity_particle_particle(&self) -> Result<f64> {
        match self {
            WalkState::Two(s) => Ok(observables::negativity_particle_particle(s)?.value),
            WalkState::One(_) => Err(Error::Unsupported(
                "particle-particle negativity of a single walker".into(),
            )),
        }
    }
}

/// Distribution captured at one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step: usize,
    pub distribution: Distribution,
}

/// Output of [`run`]: per-step series (index `t = 0..=steps`) and snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkRecord {
    pub steps: usize,
    pub series: BTreeMap<Observable, Vec<f64>>,
    pub snapshots: Vec<Snapshot>,
    pub final_norm: f64,
}

impl WalkRecord {
    pub fn series(&self, observable: Observable) -> Option<&[f64]> {
        self.series.get(&observable).map(Vec::as_slice)
    }

    pub fn final_distribution(&self) -> Option<&Distribution> {
        self.snapshots
            .iter()
            .find(|s| s.step == self.steps)
            .map(|s| &s.distribution)
    }
}

/// Runs `spec` with `θ_t = θ₀e^{−at}` and the given realization.
pub fn run(spec: &WalkSpec, landscape: &PhaseLandscape) -> Result<WalkRecord> {
    run_with_schedule(spec, &spec.schedule, landscape)
}

/// Runs `spec` with an arbitrary angle schedule in place of `spec.schedule`.
pub fn run_with_schedule(
    spec: &WalkSpec,
    schedule: &dyn AngleSchedule,
    landscape: &PhaseLandscape,
) -> Result<WalkRecord> {
    spec.validate()?;
    let mut state = WalkState::for_spec(spec)?;
    check_landscape(spec, &state, landscape)?;

    let series_keys: Vec<Observable> = spec
        .record
        .iter()
        .copied()
        .filter(|o| o.is_series())
        .collect();
    let mut series: BTreeMap<Observable, Vec<f64>> = series_keys
        .iter()
        .map(|&o| (o, Vec::with_capacity(spec.steps + 1)))
        .collect();
    let snapshot_steps: BTreeSet<usize> = if spec.record.contains(&Observable::Distribution) {
        if spec.snapshots.is_empty() {
            BTreeSet::from([spec.steps])
        } else {
            spec.snapshots.iter().copied().collect()
        }
    } else {
        BTreeSet::new()
    };
    let mut snapshots = Vec::with_capacity(snapshot_steps.len());

    let mut observe = |state: &WalkState, t: usize| -> Result<()> {
        let needs_dist = series.contains_key(&Observable::Sigma)
            || series.contains_key(&Observable::Ipr)
            || snapshot_steps.contains(&t);
        let dist = needs_dist.then(|| state.distribution());
        for (&key, values) in series.iter_mut() {
            let v = match key {
                Observable::Sigma => dist.as_ref().map_or(0.0, Distribution::sigma),
                Observable::Ipr => dist.as_ref().map_or(0.0, Distribution::ipr),
                Observable::NegativityCoinPosition => state.negativity_coin_position()?,
                Observable::NegativityParticleParticle => state.negativity_particle_particle()?,
                Observable::Distribution => unreachable!(),
            };
            values.push(v);
        }
        if snapshot_steps.contains(&t) {
            snapshots.push(Snapshot {
                step: t,
                distribution: dist.expect("distribution computed for snapshot"),
            });
        }
        Ok(())
    };

    observe(&state, 0)?;
    for t in 1..=spec.steps {
        state.step(schedule.theta_at(t), landscape.at_step(t))?;
        observe(&state, t)?;
    }

    Ok(WalkRecord {
        steps: spec.steps,
        series,
        snapshots,
        final_norm: state.norm(),
    })
}

fn check_landscape(spec: &WalkSpec, state: &WalkState, landscape: &PhaseLandscape) -> Result<()> {
    let kind = landscape.kind();
    if kind != DisorderKind::None && kind != spec.disorder.kind {
        return Err(Error::InvalidParameter {
            field: "landscape",
            reason: format!(
                "{} landscape for a walk with {} disorder",
                kind.label(),
                spec.disorder.kind.label()
            ),
        });
    }
    if spec.disorder.kind != DisorderKind::None && kind == DisorderKind::None {
        return Err(Error::InvalidParameter {
            field: "landscape",
            reason: format!("walk expects {} disorder", spec.disorder.kind.label()),
        });
    }
    match kind {
        DisorderKind::Spatial if landscape.len() != state.site_count() => {
            Err(Error::LandscapeSize {
                got: landscape.len(),
                expected: state.site_count(),
            })
        }
        DisorderKind::Temporal if landscape.len() < spec.steps => Err(Error::LandscapeSize {
            got: landscape.len(),
            expected: spec.steps,
        }),
        _ => Ok(()),
    }
}
