//! Independent reference implementations used by the integration tests.
//!
//! Everything here is written from the walk's definition, not from the
//! library kernels: coins come from a matrix exponential, evolution is a
//! dense unitary applied to a flat state vector.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// `exp(m)` by scaling, a Taylor series and repeated squaring.
pub fn expm(m: &DMatrix<C>) -> DMatrix<C> {
    let norm: f64 = m.iter().map(|z| z.norm()).sum();
    let squarings = norm.max(1.0).log2().ceil() as u32 + 1;
    let scaled = m.map(|z| z / 2f64.powi(squarings as i32));
    let n = m.nrows();
    let mut term = DMatrix::<C>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn sigma_x() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

/// `exp(−iθσx)`.
pub fn coin2_oracle(theta: f64) -> DMatrix<C> {
    expm(&(sigma_x() * c(0.0, -theta)))
}

/// `exp(−iθ σx⊗σx)` in `uu, ud, du, dd` order.
pub fn coin4_oracle(theta: f64) -> DMatrix<C> {
    expm(&(sigma_x().kronecker(&sigma_x()) * c(0.0, -theta)))
}

/// One walker on `n` sites, index `2·i + spin` with spin 0 = up.
/// Up moves to `i − 1`, down to `i + 1`; `phase[i]` multiplies the down
/// branch leaving site `i`. Amplitude pushed off either end is dropped.
pub fn unitary_1p(n: usize, theta: f64, phase: &[C]) -> DMatrix<C> {
    let coin = coin2_oracle(theta);
    let mut u = DMatrix::<C>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for s in 0..2 {
            let col = 2 * i + s;
            if i >= 1 {
                u[(2 * (i - 1), col)] += coin[(0, s)];
            }
            if i + 1 < n {
                u[(2 * (i + 1) + 1, col)] += phase[i] * coin[(1, s)];
            }
        }
    }
    u
}

/// Two walkers on an `n × n` grid, index `4·(iy·n + ix) + k` with
/// `k` = uu, ud, du, dd. Moves: uu → x−1, ud → y+1, du → y−1, dd → x+1.
/// `phase[iy·n + ix]` enters once per down spin.
pub fn unitary_2p(n: usize, theta: f64, phase: &[C]) -> DMatrix<C> {
    let coin = coin4_oracle(theta);
    let dim = 4 * n * n;
    let mut u = DMatrix::<C>::zeros(dim, dim);
    let moves: [(i64, i64); 4] = [(-1, 0), (0, 1), (0, -1), (1, 0)];
    let downs = [0, 1, 1, 2];
    for iy in 0..n {
        for ix in 0..n {
            let site = iy * n + ix;
            for (k, (dx, dy)) in moves.iter().enumerate() {
                let (tx, ty) = (ix as i64 + dx, iy as i64 + dy);
                if tx < 0 || ty < 0 || tx >= n as i64 || ty >= n as i64 {
                    continue;
                }
                let row = 4 * (ty as usize * n + tx as usize) + k;
                let factor = phase[site].powi(downs[k]);
                for s in 0..4 {
                    u[(row, 4 * site + s)] += factor * coin[(k, s)];
                }
            }
        }
    }
    u
}

/// Evolves a single walker from `init` at the centre of `2·steps + 1` sites.
/// `theta(t)` and `phase(t)` give the step-`t` coin angle and site phases.
pub fn evolve_1p(
    init: [C; 2],
    steps: usize,
    theta: impl Fn(usize) -> f64,
    phase: impl Fn(usize) -> Vec<C>,
) -> Vec<DVector<C>> {
    let n = 2 * steps + 1;
    let mut psi = DVector::<C>::zeros(2 * n);
    psi[2 * steps] = init[0];
    psi[2 * steps + 1] = init[1];
    let mut out = vec![psi.clone()];
    for t in 1..=steps {
        psi = unitary_1p(n, theta(t), &phase(t)) * psi;
        out.push(psi.clone());
    }
    out
}

/// Position distribution of a flat 1P state vector on `2·h + 1` sites.
pub fn probabilities_1p(psi: &DVector<C>) -> Vec<f64> {
    (0..psi.len() / 2)
        .map(|i| psi[2 * i].norm_sqr() + psi[2 * i + 1].norm_sqr())
        .collect()
}

pub fn sigma_of(xs: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for (x, p) in xs {
        m0 += p;
        m1 += p * x;
        m2 += p * x * x;
    }
    let mean = m1 / m0;
    (m2 / m0 - mean * mean).max(0.0).sqrt()
}

/// Negativity of `|ψ⟩ = Σ amps[x][s] |s⟩|x⟩` from the eigenvalues of the
/// partial transpose over the coin of the full density matrix.
pub fn dense_negativity(amps: &[[C; 2]]) -> f64 {
    let n = amps.len();
    let dim = 2 * n;
    let psi = DVector::from_fn(dim, |r, _| amps[r % n][r / n]);
    let rho = &psi * psi.adjoint();
    // (s, x; s', x') -> (s', x; s, x')
    let pt = DMatrix::from_fn(dim, dim, |r, col| {
        let (s, x) = (r / n, r % n);
        let (s2, x2) = (col / n, col % n);
        rho[(s2 * n + x, s * n + x2)]
    });
    pt.symmetric_eigenvalues()
        .iter()
        .map(|l| 0.5 * (l.abs() - l))
        .sum()
}

/// Maximises `f` on `[lo, hi]`; returns the argmax.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}
