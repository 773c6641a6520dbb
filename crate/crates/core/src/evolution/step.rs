//! Single-step kernels: local coin, then state-conditioned shift.
//!
//! Shift convention: `|↑⟩` moves to `x − 1` and `|↓⟩` to `x + 1`; for two
//! particles `↑↑ → x − 1`, `↑↓ → y + 1`, `↓↑ → y − 1`, `↓↓ → x + 1`. The phase
//! factor of a site multiplies the amplitude leaving that site.

use num_complex::Complex64;

use super::disorder::Phases;
use crate::error::{Error, Result};
use crate::lattice::{Confinement, SpinorField1P, Storage, TwoParticleField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One step of `S_x·Φ(φ)·C(θ)` on a single walker.
pub fn step_one_particle(state: &mut SpinorField1P, theta: f64, phases: Phases<'_>) -> Result<()> {
    phases.check_len(state.cells.len())?;
    let step = state.time + 1;
    let one = Complex64::new(1.0, 0.0);
    line_step(&mut state.cells, &mut state.active, 0, theta, |i| {
        (one, phases.at(i))
    })
    .map_err(|_| Error::BoundaryOverflow {
        step,
        half_width: state.half_width,
    })?;
    state.time = step;
    Ok(())
}

/// One step of `S_(x,y)·(Φ(φ)⊗Φ(φ))·C_θ` on a two-particle state.
pub fn step_two_particle(
    state: &mut TwoParticleField,
    theta: f64,
    phases: Phases<'_>,
) -> Result<()> {
    let step = state.time + 1;
    let n = state.axis_len();
    let overflow = |_| Error::BoundaryOverflow {
        step,
        half_width: state.half_width,
    };
    match (&mut state.storage, state.confinement) {
        (Storage::Line(line), Confinement::XLine) => {
            phases.check_len(n)?;
            let one = Complex64::new(1.0, 0.0);
            // (uu, dd): dd picks up e^{2iφ}
            line_step(line, &mut state.active, 0, theta, |i| {
                let e = phases.at(i);
                (one, e * e)
            })
            .map_err(overflow)?;
        }
        (Storage::Line(line), _) => {
            phases.check_len(n)?;
            // stored as (ud, du); du moves toward −y and is the left mover
            line_step(line, &mut state.active, 1, theta, |i| {
                let e = phases.at(i);
                (e, e)
            })
            .map_err(overflow)?;
        }
        (Storage::Grid(grid), _) => {
            phases.check_len(n * n)?;
            grid_step(grid, n, &mut state.active, theta, phases).map_err(overflow)?;
        }
    }
    state.time = step;
    Ok(())
}

/// Coin-then-shift on pairs where component `left` moves to `i − 1` and the
/// other to `i + 1`:
///
/// `left' = f_l·(cos θ·L − i sin θ·R)`, `right' = f_r·(−i sin θ·L + cos θ·R)`.
///
/// Updates in place in a single ascending sweep; each output cell receives
/// exactly one contribution, so results match a gather formulation bit for
/// bit. Returns `Err(())` without touching the state if amplitude would
/// leave the array.
fn line_step(
    cells: &mut [[Complex64; 2]],
    active: &mut (usize, usize),
    left: usize,
    theta: f64,
    factors: impl Fn(usize) -> (Complex64, Complex64),
) -> Result<(), ()> {
    let right = 1 - left;
    let (s, c) = theta.sin_cos();
    let ms = Complex64::new(0.0, -s);
    let coin = |cell: [Complex64; 2], i: usize| {
        let (l, r) = (cell[left], cell[right]);
        let (fl, fr) = factors(i);
        (fl * (c * l + ms * r), fr * (ms * l + c * r))
    };

    let n = cells.len();
    let (lo, hi) = *active;
    if lo == 0 && coin(cells[0], 0).0 != ZERO {
        return Err(());
    }
    if hi == n - 1 && coin(cells[n - 1], n - 1).1 != ZERO {
        return Err(());
    }

    let mut carry = ZERO;
    for j in lo..=hi {
        let (to_left, to_right) = coin(cells[j], j);
        if j > 0 {
            cells[j - 1][left] = to_left;
        }
        cells[j][right] = carry;
        carry = to_right;
    }
    cells[hi][left] = ZERO;
    if hi + 1 < n {
        cells[hi + 1][right] = carry;
    }
    *active = (lo.saturating_sub(1), (hi + 1).min(n - 1));
    Ok(())
}

fn grid_step(
    grid: &mut Vec<[Complex64; 4]>,
    n: usize,
    active: &mut (usize, usize),
    theta: f64,
    phases: Phases<'_>,
) -> Result<(), ()> {
    let (s, c) = theta.sin_cos();
    let ms = Complex64::new(0.0, -s);
    let (lo, hi) = *active;
    let mut next = vec![[ZERO; 4]; n * n];
    for iy in lo..=hi {
        for ix in lo..=hi {
            let k = iy * n + ix;
            let a = grid[k];
            if a.iter().all(|z| *z == ZERO) {
                continue;
            }
            let e = phases.at(k);
            let uu = c * a[0] + ms * a[3];
            let ud = e * (c * a[1] + ms * a[2]);
            let du = e * (ms * a[1] + c * a[2]);
            let dd = e * e * (ms * a[0] + c * a[3]);
            place(&mut next, n, ix.checked_sub(1), Some(iy), 0, uu)?;
            place(&mut next, n, Some(ix), Some(iy + 1), 1, ud)?;
            place(&mut next, n, Some(ix), iy.checked_sub(1), 2, du)?;
            place(&mut next, n, Some(ix + 1), Some(iy), 3, dd)?;
        }
    }
    *grid = next;
    *active = (lo.saturating_sub(1), (hi + 1).min(n - 1));
    Ok(())
}

#[inline]
fn place(
    grid: &mut [[Complex64; 4]],
    n: usize,
    ix: Option<usize>,
    iy: Option<usize>,
    component: usize,
    value: Complex64,
) -> Result<(), ()> {
    match (ix, iy) {
        (Some(ix), Some(iy)) if ix < n && iy < n => {
            grid[iy * n + ix][component] = value;
            Ok(())
        }
        _ if value == ZERO => Ok(()),
        _ => Err(()),
    }
}
