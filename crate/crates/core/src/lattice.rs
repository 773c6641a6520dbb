//! State vectors for one- and two-particle walkers on an integer lattice.
//!
//! Arrays are dense and sized `2w + 1` per axis, with `w` chosen so that the
//! light cone of a `steps`-step walk never leaves the lattice.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const INIT_NORM_TOL: f64 = 1e-9;

/// Coin amplitudes plus the lattice site they start on.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    coin: Vec<Complex64>,
    origin: Vec<i64>,
}

impl InitialState {
    /// `(α|↑⟩ + β|↓⟩) ⊗ |x₀⟩`.
    pub fn one_particle(alpha: Complex64, beta: Complex64, x0: i64) -> Result<Self> {
        Self::new(vec![alpha, beta], vec![x0])
    }

    /// Four coin amplitudes in `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` order at `(x₀, y₀)`.
    pub fn two_particle(coin: [Complex64; 4], origin: (i64, i64)) -> Result<Self> {
        Self::new(coin.to_vec(), vec![origin.0, origin.1])
    }

    pub fn new(coin: Vec<Complex64>, origin: Vec<i64>) -> Result<Self> {
        let expected = match origin.len() {
            1 => 2,
            2 => 4,
            n => {
                return Err(Error::InvalidParameter {
                    field: "origin",
                    reason: format!("expected 1 or 2 coordinates, got {n}"),
                })
            }
        };
        if coin.len() != expected {
            return Err(Error::CoinDimension {
                got: coin.len(),
                expected,
            });
        }
        let norm_sqr: f64 = coin.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > INIT_NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { coin, origin })
    }

    /// `|↑⟩` at the origin.
    pub fn up() -> Self {
        Self::one_particle(Complex64::new(1.0, 0.0), ZERO, 0).unwrap()
    }

    /// `(|↑⟩ + |↓⟩)/√2` at the origin.
    pub fn symmetric() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::one_particle(h, h, 0).unwrap()
    }

    /// A two-particle coin basis state at the origin (`0 = ↑↑ … 3 = ↓↓`).
    pub fn two_particle_basis(index: usize) -> Self {
        let mut coin = [ZERO; 4];
        coin[index] = Complex64::new(1.0, 0.0);
        Self::two_particle(coin, (0, 0)).unwrap()
    }

    pub fn coin(&self) -> &[Complex64] {
        &self.coin
    }

    pub fn origin(&self) -> &[i64] {
        &self.origin
    }

    pub fn particle_count(&self) -> usize {
        self.origin.len()
    }
}

/// Two-component amplitude field `(𝒜_x, ℬ_x)` over `x ∈ [−w, w]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField1P {
    pub(crate) half_width: usize,
    pub(crate) cells: Vec<[Complex64; 2]>,
    /// Inclusive index range that may hold non-zero amplitude.
    pub(crate) active: (usize, usize),
    pub(crate) time: usize,
}

impl SpinorField1P {
    /// Lattice wide enough for `steps` steps from the initial site.
    pub fn new(init: &InitialState, steps: usize) -> Result<Self> {
        let x0 = single_origin(init)?;
        Self::with_half_width(init, steps + x0.unsigned_abs() as usize)
    }

    pub fn with_half_width(init: &InitialState, half_width: usize) -> Result<Self> {
        let x0 = single_origin(init)?;
        if x0.unsigned_abs() as usize > half_width {
            return Err(Error::OriginOutsideLattice {
                origin: vec![x0],
                half_width,
            });
        }
        let mut cells = vec![[ZERO; 2]; 2 * half_width + 1];
        let i = (x0 + half_width as i64) as usize;
        cells[i] = [init.coin[0], init.coin[1]];
        Ok(Self {
            half_width,
            cells,
            active: (i, i),
            time: 0,
        })
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Number of steps applied since construction.
    pub fn time(&self) -> usize {
        self.time
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Lattice coordinate of array index `i`.
    pub fn x_of(&self, i: usize) -> i64 {
        i as i64 - self.half_width as i64
    }

    fn index(&self, x: i64) -> Option<usize> {
        let i = x + self.half_width as i64;
        (0..self.cells.len() as i64)
            .contains(&i)
            .then_some(i as usize)
    }

    /// `𝒜_x`, zero outside the lattice.
    pub fn up(&self, x: i64) -> Complex64 {
        self.index(x).map_or(ZERO, |i| self.cells[i][0])
    }

    /// `ℬ_x`, zero outside the lattice.
    pub fn down(&self, x: i64) -> Complex64 {
        self.index(x).map_or(ZERO, |i| self.cells[i][1])
    }

    /// Per-site `[𝒜, ℬ]`, index 0 is `x = −w`.
    pub fn amplitudes(&self) -> &[[Complex64; 2]] {
        &self.cells
    }

    /// Total probability `Σ |𝒜|² + |ℬ|²`.
    pub fn norm(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c[0].norm_sqr() + c[1].norm_sqr())
            .sum()
    }

    /// Multiplies every amplitude by `factor`. Breaks normalization; meant for tests.
    pub fn scale(&mut self, factor: f64) {
        for c in &mut self.cells {
            c[0] *= factor;
            c[1] *= factor;
        }
    }

    /// Replaces the amplitudes wholesale. Length must match the lattice.
    pub fn from_amplitudes(half_width: usize, cells: Vec<[Complex64; 2]>) -> Result<Self> {
        if cells.len() != 2 * half_width + 1 {
            return Err(Error::InvalidParameter {
                field: "cells",
                reason: format!("{} cells for half width {half_width}", cells.len()),
            });
        }
        let len = cells.len();
        Ok(Self {
            half_width,
            cells,
            active: (0, len - 1),
            time: 0,
        })
    }
}

fn single_origin(init: &InitialState) -> Result<i64> {
    match (init.coin.len(), init.origin.as_slice()) {
        (2, [x0]) => Ok(*x0),
        _ => Err(Error::CoinDimension {
            got: init.coin.len(),
            expected: 2,
        }),
    }
}

/// Which part of the 2D lattice a two-particle state can ever occupy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confinement {
    /// Mixed coin support; the state spreads over the plane.
    Full2D,
    /// Coin support in `{↑↑, ↓↓}`; moves only along x at `y = y₀`.
    XLine,
    /// Coin support in `{↑↓, ↓↑}`; moves only along y at `x = x₀`.
    YLine,
}

impl Confinement {
    /// Classifies a 4-component coin vector by its support.
    pub fn of_coin(coin: &[Complex64]) -> Confinement {
        let line_x = coin[0] != ZERO || coin[3] != ZERO;
        let line_y = coin[1] != ZERO || coin[2] != ZERO;
        match (line_x, line_y) {
            (true, false) => Confinement::XLine,
            (false, true) => Confinement::YLine,
            _ => Confinement::Full2D,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Storage {
    /// Pairs along the moving axis: `(uu, dd)` for x-lines, `(ud, du)` for y-lines.
    Line(Vec<[Complex64; 2]>),
    /// All four components per site, row major with x fastest.
    Grid(Vec<[Complex64; 4]>),
}

/// Four-component amplitude field `(𝒜, 𝒞, 𝒟, ℬ)` of `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleField {
    pub(crate) half_width: usize,
    pub(crate) origin: (i64, i64),
    pub(crate) confinement: Confinement,
    pub(crate) storage: Storage,
    pub(crate) active: (usize, usize),
    pub(crate) time: usize,
}

impl TwoParticleField {
    /// Uses the 1D fast path whenever the coin support allows it.
    pub fn new(init: &InitialState, steps: usize) -> Result<Self> {
        let confinement = Confinement::of_coin(two_coin(init)?);
        Self::build(init, steps, confinement)
    }

    /// Always stores the full plane, even for line-confined coin states.
    pub fn new_full_2d(init: &InitialState, steps: usize) -> Result<Self> {
        Self::build(init, steps, Confinement::Full2D)
    }

    fn build(init: &InitialState, steps: usize, confinement: Confinement) -> Result<Self> {
        let coin = two_coin(init)?;
        let origin = (init.origin[0], init.origin[1]);
        let reach = origin.0.unsigned_abs().max(origin.1.unsigned_abs()) as usize;
        let half_width = steps + reach;
        let n = 2 * half_width + 1;
        let ix = (origin.0 + half_width as i64) as usize;
        let iy = (origin.1 + half_width as i64) as usize;
        let (storage, active) = match confinement {
            Confinement::XLine => {
                let mut line = vec![[ZERO; 2]; n];
                line[ix] = [coin[0], coin[3]];
                (Storage::Line(line), (ix, ix))
            }
            Confinement::YLine => {
                let mut line = vec![[ZERO; 2]; n];
                line[iy] = [coin[1], coin[2]];
                (Storage::Line(line), (iy, iy))
            }
            Confinement::Full2D => {
                let mut grid = vec![[ZERO; 4]; n * n];
                grid[iy * n + ix] = [coin[0], coin[1], coin[2], coin[3]];
                // active range is tracked per axis-independent square
                (Storage::Grid(grid), (ix.min(iy), ix.max(iy)))
            }
        };
        Ok(Self {
            half_width,
            origin,
            confinement,
            storage,
            active,
            time: 0,
        })
    }

    pub fn confinement(&self) -> Confinement {
        self.confinement
    }

    /// Number of steps applied since construction.
    pub fn time(&self) -> usize {
        self.time
    }

    pub fn origin(&self) -> (i64, i64) {
        self.origin
    }

    /// Half width along x; zero when the state is frozen on a y-line.
    pub fn half_width_x(&self) -> usize {
        match self.confinement {
            Confinement::YLine => 0,
            _ => self.half_width,
        }
    }

    /// Half width along y; zero when the state is frozen on an x-line.
    pub fn half_width_y(&self) -> usize {
        match self.confinement {
            Confinement::XLine => 0,
            _ => self.half_width,
        }
    }

    pub(crate) fn axis_len(&self) -> usize {
        2 * self.half_width + 1
    }

    fn axis_index(&self, v: i64) -> Option<usize> {
        let i = v + self.half_width as i64;
        (0..self.axis_len() as i64)
            .contains(&i)
            .then_some(i as usize)
    }

    /// Amplitudes `[uu, ud, du, dd]` at `(x, y)`; zero off-lattice.
    pub fn amplitude(&self, x: i64, y: i64) -> [Complex64; 4] {
        match (&self.storage, self.confinement) {
            (Storage::Line(line), Confinement::XLine) => {
                if y != self.origin.1 {
                    return [ZERO; 4];
                }
                self.axis_index(x)
                    .map_or([ZERO; 4], |i| [line[i][0], ZERO, ZERO, line[i][1]])
            }
            (Storage::Line(line), _) => {
                if x != self.origin.0 {
                    return [ZERO; 4];
                }
                self.axis_index(y)
                    .map_or([ZERO; 4], |i| [ZERO, line[i][0], line[i][1], ZERO])
            }
            (Storage::Grid(grid), _) => match (self.axis_index(x), self.axis_index(y)) {
                (Some(ix), Some(iy)) => grid[iy * self.axis_len() + ix],
                _ => [ZERO; 4],
            },
        }
    }

    pub fn uu(&self, x: i64, y: i64) -> Complex64 {
        self.amplitude(x, y)[0]
    }

    pub fn ud(&self, x: i64, y: i64) -> Complex64 {
        self.amplitude(x, y)[1]
    }

    pub fn du(&self, x: i64, y: i64) -> Complex64 {
        self.amplitude(x, y)[2]
    }

    pub fn dd(&self, x: i64, y: i64) -> Complex64 {
        self.amplitude(x, y)[3]
    }

    /// Every non-empty site as `((x, y), [uu, ud, du, dd])`.
    pub fn sites(&self) -> Vec<((i64, i64), [Complex64; 4])> {
        let w = self.half_width as i64;
        match &self.storage {
            Storage::Line(line) => line
                .iter()
                .enumerate()
                .map(|(i, pair)| {
                    let v = i as i64 - w;
                    match self.confinement {
                        Confinement::XLine => ((v, self.origin.1), [pair[0], ZERO, ZERO, pair[1]]),
                        _ => ((self.origin.0, v), [ZERO, pair[0], pair[1], ZERO]),
                    }
                })
                .collect(),
            Storage::Grid(grid) => {
                let n = self.axis_len();
                grid.iter()
                    .enumerate()
                    .map(|(k, amps)| (((k % n) as i64 - w, (k / n) as i64 - w), *amps))
                    .collect()
            }
        }
    }

    /// Coordinates along the moving axis and the `[first, second]` pair per
    /// site, for line-confined states.
    pub fn line(&self) -> Option<&[[Complex64; 2]]> {
        match &self.storage {
            Storage::Line(line) => Some(line),
            Storage::Grid(_) => None,
        }
    }

    pub fn norm(&self) -> f64 {
        match &self.storage {
            Storage::Line(line) => line.iter().map(|p| p[0].norm_sqr() + p[1].norm_sqr()).sum(),
            Storage::Grid(grid) => grid
                .iter()
                .map(|a| a.iter().map(|c| c.norm_sqr()).sum::<f64>())
                .sum(),
        }
    }

    /// Multiplies every amplitude by `factor`. Breaks normalization; meant for tests.
    pub fn scale(&mut self, factor: f64) {
        match &mut self.storage {
            Storage::Line(line) => line.iter_mut().flatten().for_each(|c| *c *= factor),
            Storage::Grid(grid) => grid.iter_mut().flatten().for_each(|c| *c *= factor),
        }
    }
}

fn two_coin(init: &InitialState) -> Result<&[Complex64]> {
    if init.coin.len() != 4 || init.origin.len() != 2 {
        return Err(Error::CoinDimension {
            got: init.coin.len(),
            expected: 4,
        });
    }
    Ok(&init.coin)
}
