//! Local coin operators and the accelerating angle schedule.
//!
//! Basis ordering is `|↑⟩, |↓⟩` for one particle and
//! `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` for two.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Exponentially decaying coin angle `θ(t) = θ₀·exp(−a·t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinSchedule {
    pub theta0: f64,
    #[serde(default)]
    pub a: f64,
}

impl CoinSchedule {
    pub fn new(theta0: f64, a: f64) -> Result<Self> {
        let schedule = Self { theta0, a };
        schedule.validate()?;
        Ok(schedule)
    }

    /// Constant-angle schedule (`a = 0`).
    pub fn homogeneous(theta0: f64) -> Result<Self> {
        Self::new(theta0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=FRAC_PI_2 + 1e-12).contains(&self.theta0) {
            return Err(Error::InvalidParameter {
                field: "theta0",
                reason: format!("{} not in [0, π/2]", self.theta0),
            });
        }
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "a",
                reason: format!("{} must be finite and non-negative", self.a),
            });
        }
        Ok(())
    }

    /// Angle used by step `t`; the first step of a walk is `t = 1`.
    pub fn theta_at(&self, t: usize) -> f64 {
        theta_at(self, t)
    }
}

/// `θ₀·exp(−a·t)`.
pub fn theta_at(schedule: &CoinSchedule, t: usize) -> f64 {
    if schedule.a == 0.0 {
        return schedule.theta0;
    }
    schedule.theta0 * (-schedule.a * t as f64).exp()
}

/// Anything that yields a coin angle per step. Lets callers drive the
/// engine with decay laws other than the exponential one.
pub trait AngleSchedule: Sync {
    fn theta_at(&self, t: usize) -> f64;
}

impl AngleSchedule for CoinSchedule {
    fn theta_at(&self, t: usize) -> f64 {
        theta_at(self, t)
    }
}

impl<F> AngleSchedule for F
where
    F: Fn(usize) -> f64 + Sync,
{
    fn theta_at(&self, t: usize) -> f64 {
        self(t)
    }
}

/// Phase applied to the `|↓⟩` branch by `Φ(φ) = diag(1, e^{iφ})`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseAngle(pub f64);

impl PhaseAngle {
    pub const ZERO: PhaseAngle = PhaseAngle(0.0);

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn unit(self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }
}

impl From<f64> for PhaseAngle {
    fn from(phi: f64) -> Self {
        PhaseAngle(phi)
    }
}

/// 2×2 single-particle coin, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coin2(pub [[Complex64; 2]; 2]);

/// 4×4 two-particle coin, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coin4(pub [[Complex64; 4]; 4]);

impl Coin2 {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Coin2([[one, ZERO], [ZERO, one]])
    }

    #[inline]
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    pub fn mul(&self, rhs: &Coin2) -> Coin2 {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..2).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Coin2(out)
    }

    /// `max |U†U − I|` over all entries.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.0)
    }

    pub fn max_abs_diff(&self, other: &Coin2) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }
}

impl Coin4 {
    pub fn identity() -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0, 0.0);
        }
        Coin4(m)
    }

    #[inline]
    pub fn apply(&self, v: [Complex64; 4]) -> [Complex64; 4] {
        let m = &self.0;
        std::array::from_fn(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] + m[i][3] * v[3])
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.0)
    }

    pub fn max_abs_diff(&self, other: &Coin4) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }
}

/// `[[cos θ, −i sin θ], [−i sin θ, cos θ]]`.
pub fn coin2(theta: f64) -> Coin2 {
    let (s, c) = theta.sin_cos();
    let c = Complex64::new(c, 0.0);
    let ms = Complex64::new(0.0, -s);
    Coin2([[c, ms], [ms, c]])
}

/// `Φ(φ)·C(θ)`: the lower row of [`coin2`] picks up `e^{iφ}`.
pub fn coin2_with_phase(theta: f64, phi: PhaseAngle) -> Coin2 {
    let mut m = coin2(theta);
    let e = phi.unit();
    m.0[1][0] *= e;
    m.0[1][1] *= e;
    m
}

/// `cos θ·I₄ − i sin θ·(σx⊗σx)`.
pub fn coin4(theta: f64) -> Coin4 {
    let (s, c) = theta.sin_cos();
    let c = Complex64::new(c, 0.0);
    let ms = Complex64::new(0.0, -s);
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        m[i][i] = c;
        m[i][3 - i] = ms;
    }
    Coin4(m)
}

/// `(Φ(φ)⊗Φ(φ))·C_θ`: rows scaled by `1, e^{iφ}, e^{iφ}, e^{2iφ}`.
pub fn coin4_with_phase(theta: f64, phi: PhaseAngle) -> Coin4 {
    let mut m = coin4(theta);
    let e = phi.unit();
    let scales = [Complex64::new(1.0, 0.0), e, e, e * e];
    for (row, scale) in m.0.iter_mut().zip(scales) {
        for cell in row.iter_mut() {
            *cell *= scale;
        }
    }
    m
}

fn unitarity_defect<const N: usize>(m: &[[Complex64; N]; N]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..N {
        for j in 0..N {
            let dot: Complex64 = (0..N).map(|k| m[k][i].conj() * m[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}

fn max_abs_diff<const N: usize>(a: &[[Complex64; N]; N], b: &[[Complex64; N]; N]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
