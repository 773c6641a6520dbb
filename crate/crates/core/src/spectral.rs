//! Dispersion relations, group velocities and transfer matrices.
//!
//! Plane waves `ψ ∝ e^{−i(ωt + κx)}` of the uniform-phase walk satisfy
//!
//! * one particle: `cos(ω + φ/2) = cos θ · cos(κ + φ/2)`
//! * two particles along x: `cos(ω + φ) = cos θ · cos(κ + φ)`
//! * two particles along y: `cos(ω + φ) = cos θ · cos κ`

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{realization_rng, DisorderKind, DisorderSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispersionVariant {
    #[default]
    SingleParticle,
    TwoParticleXLine,
    TwoParticleYLine,
}

impl DispersionVariant {
    /// `(argument offset, frequency offset)`: the relation reads
    /// `cos(ω + s) = cos θ · cos(κ + k)`.
    fn offsets(self, phi: f64) -> (f64, f64) {
        match self {
            DispersionVariant::SingleParticle => (phi / 2.0, phi / 2.0),
            DispersionVariant::TwoParticleXLine => (phi, phi),
            DispersionVariant::TwoParticleYLine => (0.0, phi),
        }
    }

    /// Left minus right side of the relation at `(κ, ω)`.
    pub fn residual(self, theta0: f64, kappa: f64, phi: f64, omega: f64) -> f64 {
        let (k, s) = self.offsets(phi);
        (omega + s).cos() - theta0.cos() * (kappa + k).cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
}

/// The two frequencies allowed at one wave number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaBranches {
    pub plus: f64,
    pub minus: f64,
}

impl OmegaBranches {
    pub fn get(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.plus,
            Branch::Minus => self.minus,
        }
    }
}

/// Both frequency branches `ω± = ±arccos(cos θ cos(κ + k)) − s`.
pub fn dispersion_omega(
    theta0: f64,
    kappa: f64,
    phi: f64,
    variant: DispersionVariant,
) -> OmegaBranches {
    let (k, s) = variant.offsets(phi);
    let w = (theta0.cos() * (kappa + k).cos()).clamp(-1.0, 1.0).acos();
    OmegaBranches {
        plus: w - s,
        minus: -w - s,
    }
}

/// One branch sampled on a κ grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionCurve {
    pub kappa: Vec<f64>,
    pub omega: Vec<f64>,
    pub branch: Branch,
}

/// `points` evenly spaced wave numbers on `[−π, π]`.
pub fn dispersion_curve(
    theta0: f64,
    phi: f64,
    variant: DispersionVariant,
    branch: Branch,
    points: usize,
) -> DispersionCurve {
    let points = points.max(2);
    let kappa: Vec<f64> = (0..points)
        .map(|i| {
            -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / (points - 1) as f64
        })
        .collect();
    let omega = kappa
        .iter()
        .map(|&k| dispersion_omega(theta0, k, phi, variant).get(branch))
        .collect();
    DispersionCurve {
        kappa,
        omega,
        branch,
    }
}

/// Single-particle group velocity `dω₊/dκ`.
pub fn group_velocity(theta0: f64, kappa: f64, phi: f64) -> Result<f64> {
    group_velocity_of(DispersionVariant::SingleParticle, theta0, kappa, phi)
}

/// `v_g = cos θ sin(κ + k) / √(1 − cos²θ cos²(κ + k))` for the given relation.
pub fn group_velocity_of(
    variant: DispersionVariant,
    theta0: f64,
    kappa: f64,
    phi: f64,
) -> Result<f64> {
    let (k, _) = variant.offsets(phi);
    let c = theta0.cos();
    let arg = kappa + k;
    let denom = 1.0 - (c * arg.cos()).powi(2);
    if denom <= 0.0 {
        return Err(Error::Singular(format!(
            "group velocity undefined at theta0 = {theta0}, kappa = {kappa}, phi = {phi}"
        )));
    }
    Ok(c * arg.sin() / denom.sqrt())
}

/// Largest group velocity over κ, `cos θ₀`, reached at `κ + φ/2 = π/2`.
pub fn max_group_velocity(theta0: f64) -> f64 {
    theta0.cos()
}

/// 2×2 transfer matrix with the parameters it was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix2 {
    pub matrix: Matrix2<Complex64>,
    pub theta: f64,
    pub phi: f64,
    pub omega: f64,
}

impl TransferMatrix2 {
    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }

    /// Roots of the characteristic polynomial.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let m = &self.matrix;
        let tr = m[(0, 0)] + m[(1, 1)];
        let det = self.determinant();
        let root = (tr * tr / 4.0 - det).sqrt();
        [tr / 2.0 + root, tr / 2.0 - root]
    }
}

/// 4×4 transfer matrix acting on `(ψ↑↑, ψ↑↓, ψ↓↑, ψ↓↓)`-ordered fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix4 {
    pub matrix: Matrix4<Complex64>,
    pub theta: f64,
    pub phi: f64,
    pub omega: f64,
}

impl TransferMatrix4 {
    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }

    /// The (1,4) and (2,3) blocks.
    pub fn blocks(&self) -> (Matrix2<Complex64>, Matrix2<Complex64>) {
        let m = &self.matrix;
        (
            Matrix2::new(m[(0, 0)], m[(0, 3)], m[(3, 0)], m[(3, 3)]),
            Matrix2::new(m[(1, 1)], m[(1, 2)], m[(2, 1)], m[(2, 2)]),
        )
    }
}

fn sec_tan(theta: f64) -> Result<(f64, f64)> {
    let c = theta.cos();
    if c.abs() < 1e-12 {
        return Err(Error::Singular(format!(
            "transfer matrix needs cos(theta) != 0, got theta = {theta}"
        )));
    }
    Ok((1.0 / c, theta.sin() / c))
}

/// `T_x` for frequency `ω` (`ψ ∝ e^{−iωt}`); `det T_x = e^{−iφ}`.
///
/// With up moving to `x − 1`, `T_x` is similar to the map that carries a
/// stationary solution from site `x + 1` to site `x`.
pub fn transfer_matrix_1p(theta: f64, phi: f64, omega: f64) -> Result<TransferMatrix2> {
    let (sec, tan) = sec_tan(theta)?;
    let e = |a: f64| Complex64::from_polar(1.0, a);
    let body = Matrix2::new(
        e(omega + phi / 2.0) * sec,
        -I * e(-phi / 2.0) * tan,
        I * e(phi / 2.0) * tan,
        e(-(omega + phi / 2.0)) * sec,
    );
    Ok(TransferMatrix2 {
        matrix: body * e(-phi / 2.0),
        theta,
        phi,
        omega,
    })
}

/// `T_{x,y}` for the two-particle walk; couples components (1,4) and (2,3).
/// Oriented like [`transfer_matrix_1p`].
pub fn transfer_matrix_2p(theta: f64, phi: f64, omega: f64) -> Result<TransferMatrix4> {
    let (sec, tan) = sec_tan(theta)?;
    let e = |a: f64| Complex64::from_polar(1.0, a);
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let matrix = Matrix4::new(
        e(omega) * sec, z, z, -I * e(-2.0 * phi) * tan,
        z, e(-(omega + phi)) * sec, I * tan, z,
        z, -I * tan, e(omega + phi) * sec, z,
        I * tan, z, z, e(-(omega + 2.0 * phi)) * sec,
    );
    Ok(TransferMatrix4 {
        matrix,
        theta,
        phi,
        omega,
    })
}

/// Lyapunov estimate from a long transfer-matrix product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    /// Growth rate per site, `γ`.
    pub gamma: f64,
    /// Localization length `1/γ` (infinite when `γ` is zero).
    pub xi: f64,
    pub first_half: f64,
    pub second_half: f64,
    pub chain_length: usize,
}

const RENORMALIZE_EVERY: usize = 8;
const MIN_CHAIN: usize = 1000;

/// Growth rate of `∏ T_x` with one random phase per site, for a fixed
/// frequency `ω` and coin angle `θ`.
///
/// Since `|det T_x| = 1` the two exponents are `±γ`; the growth of a generic
/// vector gives `γ ≥ 0`. The chain is split in halves; if the two half
/// estimates differ by more than 1% (and are not both within `10/L` of zero,
/// the resolution of a finite clean chain) the result is `NotConverged`.
/// Spatial disorder draws phases from realization stream 0 of the seed; a
/// clean spec uses `φ = 0`.
pub fn lyapunov_localization_length(
    disorder: &DisorderSpec,
    theta: f64,
    omega: f64,
    chain_length: usize,
) -> Result<LyapunovEstimate> {
    disorder.validate()?;
    if chain_length < MIN_CHAIN {
        return Err(Error::InvalidParameter {
            field: "chain_length",
            reason: format!("need at least {MIN_CHAIN} sites, got {chain_length}"),
        });
    }
    if disorder.kind == DisorderKind::Temporal {
        return Err(Error::Unsupported(
            "transfer matrices propagate in space; use spatial disorder".into(),
        ));
    }
    sec_tan(theta)?;

    let mut rng = realization_rng(disorder.seed, 0);
    let span = disorder.phase_max - disorder.phase_min;
    let mut next_phi = || match disorder.kind {
        DisorderKind::Spatial => disorder.phase_min + span * rng.random::<f64>(),
        _ => 0.0,
    };

    let half = chain_length / 2;
    let mut v = nalgebra::Vector2::new(Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.1));
    v /= Complex64::from(v.norm());
    let mut log_growth = [0.0f64; 2];
    for (h, acc) in log_growth.iter_mut().enumerate() {
        let len = if h == 0 { half } else { chain_length - half };
        for i in 0..len {
            let t = transfer_matrix_1p(theta, next_phi(), omega)?;
            v = t.matrix * v;
            if (i + 1) % RENORMALIZE_EVERY == 0 || i + 1 == len {
                let n = v.norm();
                *acc += n.ln();
                v /= Complex64::from(n);
            }
        }
        *acc /= len as f64;
    }
    let [first_half, second_half] = log_growth;
    let gamma = (first_half * half as f64 + second_half * (chain_length - half) as f64)
        / chain_length as f64;

    let scale = first_half.abs().max(second_half.abs());
    let floor = 10.0 / chain_length as f64;
    if scale > floor && (first_half - second_half).abs() > 0.01 * scale {
        return Err(Error::NotConverged {
            first: first_half,
            second: second_half,
        });
    }
    Ok(LyapunovEstimate {
        gamma,
        xi: if gamma > 0.0 {
            1.0 / gamma
        } else {
            f64::INFINITY
        },
        first_half,
        second_half,
        chain_length,
    })
}

/// [`lyapunov_localization_length`] for several seeds in parallel.
pub fn lyapunov_over_seeds(
    disorder: &DisorderSpec,
    seeds: &[u64],
    theta: f64,
    omega: f64,
    chain_length: usize,
) -> Vec<Result<LyapunovEstimate>> {
    seeds
        .par_iter()
        .map(|&seed| {
            let d = DisorderSpec { seed, ..*disorder };
            lyapunov_localization_length(&d, theta, omega, chain_length)
        })
        .collect()
}
