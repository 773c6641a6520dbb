//! Probability distributions, spread statistics and entanglement negativity.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Confinement, SpinorField1P, Storage, TwoParticleField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const NORM_TOL: f64 = 1e-8;
/// Largest density matrix the dense partial-transpose route will build.
const DENSE_DIM_LIMIT: usize = 4096;

/// `P(x)` on a contiguous run of lattice sites starting at `x_min`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution1D {
    pub x_min: i64,
    pub p: Vec<f64>,
}

impl Distribution1D {
    pub fn xs(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.p.len() as i64).map(move |i| self.x_min + i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.xs().zip(self.p.iter().copied())
    }

    pub fn at(&self, x: i64) -> f64 {
        let i = x - self.x_min;
        if i < 0 {
            return 0.0;
        }
        self.p.get(i as usize).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(x, p)| x as f64 * p).sum()
    }

    pub fn sigma(&self) -> f64 {
        sigma(self)
    }

    pub fn ipr(&self) -> f64 {
        ipr(self)
    }
}

/// `P(x, y)` on a square `(2w+1)²` grid, x fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution2D {
    pub half_width: usize,
    pub p: Vec<f64>,
}

impl Distribution2D {
    fn side(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), f64)> + '_ {
        let n = self.side();
        let w = self.half_width as i64;
        self.p
            .iter()
            .enumerate()
            .map(move |(k, &p)| (((k % n) as i64 - w, (k / n) as i64 - w), p))
    }

    pub fn at(&self, x: i64, y: i64) -> f64 {
        let w = self.half_width as i64;
        if x.abs() > w || y.abs() > w {
            return 0.0;
        }
        self.p[((y + w) as usize) * self.side() + (x + w) as usize]
    }

    pub fn marginal_x(&self) -> Distribution1D {
        let n = self.side();
        let mut p = vec![0.0; n];
        for (k, v) in self.p.iter().enumerate() {
            p[k % n] += v;
        }
        Distribution1D {
            x_min: -(self.half_width as i64),
            p,
        }
    }

    pub fn marginal_y(&self) -> Distribution1D {
        let n = self.side();
        let p = self.p.chunks(n).map(|row| row.iter().sum()).collect();
        Distribution1D {
            x_min: -(self.half_width as i64),
            p,
        }
    }
}

/// A position distribution: along a line, or over the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Distribution {
    Line(Distribution1D),
    Plane(Distribution2D),
}

impl Distribution {
    /// Standard deviation; for the plane, `√(σx² + σy²)`.
    pub fn sigma(&self) -> f64 {
        match self {
            Distribution::Line(d) => sigma(d),
            Distribution::Plane(d) => {
                let sx = sigma(&d.marginal_x());
                let sy = sigma(&d.marginal_y());
                (sx * sx + sy * sy).sqrt()
            }
        }
    }

    pub fn ipr(&self) -> f64 {
        self.probabilities().iter().map(|p| p * p).sum()
    }

    pub fn total(&self) -> f64 {
        self.probabilities().iter().sum()
    }

    pub fn probabilities(&self) -> &[f64] {
        match self {
            Distribution::Line(d) => &d.p,
            Distribution::Plane(d) => &d.p,
        }
    }

    pub fn probabilities_mut(&mut self) -> &mut [f64] {
        match self {
            Distribution::Line(d) => &mut d.p,
            Distribution::Plane(d) => &mut d.p,
        }
    }

    pub fn as_line(&self) -> Option<&Distribution1D> {
        match self {
            Distribution::Line(d) => Some(d),
            Distribution::Plane(_) => None,
        }
    }
}

/// `P_x = |𝒜_x|² + |ℬ_x|²` over the whole lattice.
pub fn distribution(state: &SpinorField1P) -> Distribution1D {
    Distribution1D {
        x_min: -(state.half_width() as i64),
        p: state
            .amplitudes()
            .iter()
            .map(|c| c[0].norm_sqr() + c[1].norm_sqr())
            .collect(),
    }
}

/// Line-confined states give the distribution along their moving axis;
/// full-plane states give `P(x, y)`.
pub fn distribution_two_particle(state: &TwoParticleField) -> Distribution {
    let w = state.half_width;
    match &state.storage {
        Storage::Line(line) => Distribution::Line(Distribution1D {
            x_min: -(w as i64),
            p: line
                .iter()
                .map(|pair| pair[0].norm_sqr() + pair[1].norm_sqr())
                .collect(),
        }),
        Storage::Grid(grid) => Distribution::Plane(Distribution2D {
            half_width: w,
            p: grid
                .iter()
                .map(|a| a.iter().map(|c| c.norm_sqr()).sum())
                .collect(),
        }),
    }
}

/// `√(Σx²P − (ΣxP)²)`.
pub fn sigma(dist: &Distribution1D) -> f64 {
    let (m1, m2) = dist.iter().fold((0.0, 0.0), |(m1, m2), (x, p)| {
        let x = x as f64;
        (m1 + x * p, m2 + x * x * p)
    });
    (m2 - m1 * m1).max(0.0).sqrt()
}

/// Inverse participation ratio `Σ P²`.
pub fn ipr(dist: &Distribution1D) -> f64 {
    dist.p.iter().map(|p| p * p).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bipartition {
    CoinPosition,
    ParticleParticle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativityMethod {
    /// Singular values of the coin × position amplitude matrix.
    #[default]
    SchmidtPure,
    /// Eigenvalues of the explicitly partially transposed density matrix.
    PartialTranspose,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityResult {
    pub value: f64,
    pub bipartition: Bipartition,
    pub method: NegativityMethod,
}

/// Negativity across (coin | position) for a single walker.
pub fn negativity_coin_position(
    state: &SpinorField1P,
    method: NegativityMethod,
) -> Result<NegativityResult> {
    let (lo, hi) = state.active;
    let value = pure_state_negativity(&state.amplitudes()[lo..=hi], method)?;
    Ok(NegativityResult {
        value,
        bipartition: Bipartition::CoinPosition,
        method,
    })
}

/// Negativity across (two-particle coin | moving-axis position) for a
/// line-confined two-particle state. Only the two occupied coin components
/// enter; the other two rows of the 4 × N amplitude matrix are zero and do
/// not change the spectrum.
pub fn negativity_coin_position_two_particle(
    state: &TwoParticleField,
    method: NegativityMethod,
) -> Result<NegativityResult> {
    let line = state.line().ok_or_else(|| {
        Error::Unsupported(
            "coin-position negativity is defined for line-confined two-particle states only".into(),
        )
    })?;
    let (lo, hi) = state.active;
    let value = pure_state_negativity(&line[lo..=hi], method)?;
    Ok(NegativityResult {
        value,
        bipartition: Bipartition::CoinPosition,
        method,
    })
}

/// Negativity of a pure qubit ⊗ position state given as per-site `[c₀, c₁]`.
pub fn pure_state_negativity(amps: &[[Complex64; 2]], method: NegativityMethod) -> Result<f64> {
    let norm: f64 = amps.iter().map(|c| c[0].norm_sqr() + c[1].norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::StateNotNormalized {
            norm,
            tolerance: NORM_TOL,
        });
    }
    match method {
        NegativityMethod::SchmidtPure => Ok(schmidt_negativity(amps)),
        NegativityMethod::PartialTranspose => dense_negativity(amps),
    }
}

fn schmidt_negativity(amps: &[[Complex64; 2]]) -> f64 {
    // For a normalized 2 × N amplitude matrix with rows a, b the negativity
    // is s₁s₂ = √det(M M†) = |a| · |b − proj_a b|. The explicit residual keeps
    // near-product states accurate where the eigenvalue route loses half the
    // digits to a square root of rounding noise.
    let norm_sq = |k: usize| amps.iter().map(|c| c[k].norm_sqr()).sum::<f64>();
    let (na, nb) = (norm_sq(0), norm_sq(1));
    let (a, b) = if na >= nb { (0, 1) } else { (1, 0) };
    let na = na.max(nb);
    if na == 0.0 {
        return 0.0;
    }
    let overlap: Complex64 = amps.iter().map(|c| c[a].conj() * c[b]).sum();
    let k = overlap / na;
    let residual: f64 = amps.iter().map(|c| (c[b] - k * c[a]).norm_sqr()).sum();
    (na * residual).sqrt()
}

fn dense_negativity(amps: &[[Complex64; 2]]) -> Result<f64> {
    let n = amps.len();
    let dim = 2 * n;
    if dim > DENSE_DIM_LIMIT {
        return Err(Error::Unsupported(format!(
            "dense partial transpose of a {dim}-dimensional state"
        )));
    }
    // index (c, x) -> c * n + x; transpose acts on x
    let psi = |c: usize, x: usize| amps[x][c];
    let rho_pt = DMatrix::from_fn(dim, dim, |r, s| {
        let (c, x) = (r / n, r % n);
        let (d, y) = (s / n, s % n);
        psi(c, y) * psi(d, x).conj()
    });
    Ok(negativity_from_eigenvalues(&hermitian_eigenvalues(rho_pt)))
}

/// `Σ (|λ| − λ)/2`.
pub fn negativity_from_eigenvalues(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().map(|l| 0.5 * (l.abs() - l)).sum()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// `ρ_c = tr_position |ψ⟩⟨ψ|` in `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` order.
pub fn reduced_coin_density(state: &TwoParticleField) -> Matrix4<Complex64> {
    let mut rho = [[ZERO; 4]; 4];
    let mut accumulate = |amps: [Complex64; 4]| {
        for i in 0..4 {
            if amps[i] == ZERO {
                continue;
            }
            for j in 0..4 {
                rho[i][j] += amps[i] * amps[j].conj();
            }
        }
    };
    let (lo, hi) = state.active;
    match &state.storage {
        Storage::Line(line) => {
            for pair in &line[lo..=hi] {
                let amps = match state.confinement {
                    Confinement::XLine => [pair[0], ZERO, ZERO, pair[1]],
                    _ => [ZERO, pair[0], pair[1], ZERO],
                };
                accumulate(amps);
            }
        }
        Storage::Grid(grid) => {
            let n = state.axis_len();
            for iy in lo..=hi {
                for amps in &grid[iy * n + lo..=iy * n + hi] {
                    accumulate(*amps);
                }
            }
        }
    }
    Matrix4::from_fn(|i, j| rho[i][j])
}

/// Transpose on the second particle's index.
pub fn partial_transpose_second(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    // (i1 i2),(j1 j2) -> (i1 j2),(j1 i2)
    Matrix4::from_fn(|r, c| {
        let (i1, i2) = (r / 2, r % 2);
        let (j1, j2) = (c / 2, c % 2);
        rho[(2 * i1 + j2, 2 * j1 + i2)]
    })
}

/// Transpose on the first particle's index.
pub fn partial_transpose_first(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, c| {
        let (i1, i2) = (r / 2, r % 2);
        let (j1, j2) = (c / 2, c % 2);
        rho[(2 * j1 + i2, 2 * i1 + j2)]
    })
}

/// Negativity of the two-particle coin state after tracing out position.
pub fn negativity_particle_particle(state: &TwoParticleField) -> Result<NegativityResult> {
    let norm = state.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::StateNotNormalized {
            norm,
            tolerance: NORM_TOL,
        });
    }
    let rho = reduced_coin_density(state);
    let value = coin_density_negativity(&rho);
    Ok(NegativityResult {
        value,
        bipartition: Bipartition::ParticleParticle,
        method: NegativityMethod::PartialTranspose,
    })
}

/// Negativity of a 4×4 two-qubit density matrix.
pub fn coin_density_negativity(rho: &Matrix4<Complex64>) -> f64 {
    let pt = partial_transpose_second(rho);
    let eig: Vec<f64> = pt.symmetric_eigenvalues().iter().copied().collect();
    negativity_from_eigenvalues(&eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::InitialState;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sigma_and_ipr_simple_cases() {
        let two = Distribution1D {
            x_min: -1,
            p: vec![0.5, 0.0, 0.5],
        };
        assert!((sigma(&two) - 1.0).abs() < 1e-15);
        let point = Distribution1D {
            x_min: -3,
            p: vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        };
        assert_eq!(sigma(&point), 0.0);
        assert_eq!(ipr(&point), 1.0);
        let uniform = Distribution1D {
            x_min: -50,
            p: vec![1.0 / 101.0; 101],
        };
        assert!((ipr(&uniform) - 1.0 / 101.0).abs() < 1e-15);
        assert_eq!(point.at(0), 1.0);
        assert_eq!(point.at(-10), 0.0);
        assert_eq!(point.at(10), 0.0);
    }

    #[test]
    fn product_state_has_zero_negativity() {
        let field = SpinorField1P::new(&InitialState::symmetric(), 3).unwrap();
        for method in [
            NegativityMethod::SchmidtPure,
            NegativityMethod::PartialTranspose,
        ] {
            let n = negativity_coin_position(&field, method).unwrap();
            assert!(n.value.abs() < 1e-15, "{method:?}: {}", n.value);
        }
    }

    #[test]
    fn bell_like_state_is_maximal() {
        let h = c(FRAC_1_SQRT_2, 0.0);
        let amps = [[h, ZERO], [ZERO, ZERO], [ZERO, h]];
        for method in [
            NegativityMethod::SchmidtPure,
            NegativityMethod::PartialTranspose,
        ] {
            let n = pure_state_negativity(&amps, method).unwrap();
            assert!((n - 0.5).abs() < 1e-14, "{method:?}: {n}");
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let mut field = SpinorField1P::new(&InitialState::up(), 3).unwrap();
        field.scale(1.1);
        assert!(matches!(
            negativity_coin_position(&field, NegativityMethod::SchmidtPure),
            Err(Error::StateNotNormalized { .. })
        ));
        let mut two = TwoParticleField::new(&InitialState::two_particle_basis(0), 2).unwrap();
        two.scale(0.5);
        assert!(negativity_particle_particle(&two).is_err());
    }

    #[test]
    fn particle_particle_initial_product_is_zero() {
        let field = TwoParticleField::new(&InitialState::two_particle_basis(0), 4).unwrap();
        let n = negativity_particle_particle(&field).unwrap();
        assert!(n.value.abs() < 1e-15);
        let rho = reduced_coin_density(&field);
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_transposes_give_same_negativity() {
        // Bell state (|↑↑⟩ − i|↓↓⟩)/√2
        let h = c(FRAC_1_SQRT_2, 0.0);
        let psi = [h, ZERO, ZERO, c(0.0, -FRAC_1_SQRT_2)];
        let rho = Matrix4::from_fn(|i, j| psi[i] * psi[j].conj());
        let second: Vec<f64> = partial_transpose_second(&rho)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        let first: Vec<f64> = partial_transpose_first(&rho)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        let a = negativity_from_eigenvalues(&second);
        let b = negativity_from_eigenvalues(&first);
        assert!((a - 0.5).abs() < 1e-14);
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn full_plane_coin_position_is_unsupported() {
        let h = c(FRAC_1_SQRT_2, 0.0);
        let init = InitialState::two_particle([h, h, ZERO, ZERO], (0, 0)).unwrap();
        let field = TwoParticleField::new(&init, 2).unwrap();
        assert!(matches!(
            negativity_coin_position_two_particle(&field, NegativityMethod::SchmidtPure),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn plane_marginals() {
        let d = Distribution2D {
            half_width: 1,
            p: vec![0.0, 0.25, 0.0, 0.25, 0.0, 0.25, 0.0, 0.25, 0.0],
        };
        assert_eq!(d.marginal_x().p, vec![0.25, 0.5, 0.25]);
        assert_eq!(d.marginal_y().p, vec![0.25, 0.5, 0.25]);
        assert_eq!(d.at(0, -1), 0.25);
        let s = Distribution::Plane(d).sigma();
        assert!((s - 1.0).abs() < 1e-15);
    }
}
