//! Random phase landscapes.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderKind {
    #[default]
    None,
    /// One phase per lattice site, fixed in time.
    Spatial,
    /// One phase per step, uniform in space.
    Temporal,
}

impl DisorderKind {
    pub fn label(self) -> &'static str {
        match self {
            DisorderKind::None => "none",
            DisorderKind::Spatial => "spatial",
            DisorderKind::Temporal => "temporal",
        }
    }
}

fn default_phase_max() -> f64 {
    PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderSpec {
    #[serde(default)]
    pub kind: DisorderKind,
    #[serde(default)]
    pub phase_min: f64,
    #[serde(default = "default_phase_max")]
    pub phase_max: f64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for DisorderSpec {
    fn default() -> Self {
        Self::none()
    }
}

impl DisorderSpec {
    pub fn none() -> Self {
        Self {
            kind: DisorderKind::None,
            phase_min: 0.0,
            phase_max: PI,
            seed: 0,
        }
    }

    /// Phases uniform on `[0, π]`.
    pub fn spatial(seed: u64) -> Self {
        Self {
            kind: DisorderKind::Spatial,
            seed,
            ..Self::none()
        }
    }

    pub fn temporal(seed: u64) -> Self {
        Self {
            kind: DisorderKind::Temporal,
            seed,
            ..Self::none()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.phase_min.is_finite() && self.phase_max.is_finite())
            || self.phase_min > self.phase_max
        {
            return Err(Error::InvalidParameter {
                field: "phase_min",
                reason: format!(
                    "need finite phase_min <= phase_max, got [{}, {}]",
                    self.phase_min, self.phase_max
                ),
            });
        }
        Ok(())
    }
}

/// One disorder realization: the phases a walk sees.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseLandscape {
    kind: DisorderKind,
    phases: Vec<f64>,
    units: Vec<Complex64>,
}

impl PhaseLandscape {
    pub fn clean() -> Self {
        Self {
            kind: DisorderKind::None,
            phases: Vec::new(),
            units: Vec::new(),
        }
    }

    /// Builds a landscape from explicit phases.
    pub fn from_phases(kind: DisorderKind, phases: Vec<f64>) -> Self {
        if kind == DisorderKind::None {
            return Self::clean();
        }
        let units = phases
            .iter()
            .map(|&p| Complex64::from_polar(1.0, p))
            .collect();
        Self {
            kind,
            phases,
            units,
        }
    }

    /// Same phase at every site and step.
    pub fn uniform(phi: f64) -> Self {
        Self {
            kind: DisorderKind::None,
            phases: vec![phi],
            units: vec![Complex64::from_polar(1.0, phi)],
        }
    }

    pub fn kind(&self) -> DisorderKind {
        self.kind
    }

    /// Per-site (spatial) or per-step (temporal) phases; empty when clean.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// Phases seen by step `t` (1-based).
    pub fn at_step(&self, t: usize) -> Phases<'_> {
        match self.kind {
            DisorderKind::Spatial => Phases::PerSite(&self.units),
            DisorderKind::Temporal => Phases::Uniform(self.units[t - 1]),
            DisorderKind::None => match self.units.first() {
                Some(&u) => Phases::Uniform(u),
                None => Phases::None,
            },
        }
    }
}

/// Phase factors `e^{iφ}` used by a single step.
#[derive(Debug, Clone, Copy)]
pub enum Phases<'a> {
    None,
    Uniform(Complex64),
    /// Indexed like the state's lattice arrays.
    PerSite(&'a [Complex64]),
}

impl Phases<'_> {
    #[inline]
    pub(crate) fn at(&self, i: usize) -> Complex64 {
        match self {
            Phases::None => Complex64::new(1.0, 0.0),
            Phases::Uniform(u) => *u,
            Phases::PerSite(units) => units[i],
        }
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        match self {
            Phases::PerSite(units) if units.len() != expected => Err(Error::LandscapeSize {
                got: units.len(),
                expected,
            }),
            _ => Ok(()),
        }
    }
}

/// Random generator for realization `index`: a ChaCha stream keyed by
/// `(seed, index)`, so any realization can be regenerated on its own.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `size` i.i.d. phases uniform on `[phase_min, phase_max]`.
pub fn sample_landscape(
    disorder: &DisorderSpec,
    size: usize,
    realization_index: u64,
) -> Result<PhaseLandscape> {
    disorder.validate()?;
    if disorder.kind == DisorderKind::None {
        return Ok(PhaseLandscape::clean());
    }
    if size == 0 {
        return Err(Error::InvalidParameter {
            field: "size",
            reason: "landscape size must be at least 1".into(),
        });
    }
    let mut rng = realization_rng(disorder.seed, realization_index);
    let span = disorder.phase_max - disorder.phase_min;
    let phases = (0..size)
        .map(|_| disorder.phase_min + span * rng.random::<f64>())
        .collect();
    Ok(PhaseLandscape::from_phases(disorder.kind, phases))
}
