//! End-to-end acceptance checks. Each test writes one `PASS`/`FAIL` line to
//! stderr, outside the test harness's capture, then asserts.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::Write;
use std::time::{Duration, Instant};

use aqwalk::evolution::Phases;
use aqwalk::experiment::{run_config, ExperimentConfig, RunOptions};
use aqwalk::observables::{pure_state_negativity, NegativityMethod};
use aqwalk::spectral::{group_velocity, transfer_matrix_1p, transfer_matrix_2p};
use aqwalk::{
    run, run_ensemble, CoinSchedule, DisorderSpec, Distribution, EnsembleSpec, InitialState,
    Observable, PhaseLandscape, SpinorField1P, TwoParticleField, WalkSpec, WalkState,
};
use common::*;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, title: &str, pass: bool, detail: String) -> bool {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {id:>2} {verdict}  {title}: {detail}\n");
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    pass
}

fn schedule(theta0: f64, a: f64) -> CoinSchedule {
    CoinSchedule::new(theta0, a).unwrap()
}

fn clean_run(spec: &WalkSpec) -> aqwalk::WalkRecord {
    run(spec, &PhaseLandscape::clean()).unwrap()
}

/// First step after the peak at which `series` falls below half the peak;
/// `series.len()` if it never does within the horizon.
fn half_life(series: &[f64]) -> (usize, f64, usize) {
    let (t_peak, peak) = series
        .iter()
        .copied()
        .enumerate()
        .fold(
            (0, f64::MIN),
            |best, (t, v)| if v > best.1 { (t, v) } else { best },
        );
    let t_half = (t_peak..series.len())
        .find(|&t| series[t] < peak / 2.0)
        .unwrap_or(series.len());
    (t_peak, peak, t_half)
}

fn line(d: &Distribution) -> &aqwalk::Distribution1D {
    d.as_line().expect("line distribution")
}

#[test]
fn criterion_01_homogeneous_baseline() {
    let started = Instant::now();
    let spec = WalkSpec::new(InitialState::symmetric(), schedule(FRAC_PI_4, 0.0), 200)
        .record(Observable::Distribution)
        .record(Observable::Sigma);
    let rec = clean_run(&spec);
    let elapsed = started.elapsed();
    let d = line(rec.final_distribution().unwrap());
    let sigma = rec.series(Observable::Sigma).unwrap();

    let bound = 200.0 * FRAC_PI_4.cos() + 2.0;
    let outside: f64 = d
        .iter()
        .filter(|(x, _)| (*x as f64).abs() > bound)
        .map(|(_, p)| p)
        .sum();

    let (left, right) = (
        (-200..0)
            .max_by(|a, b| d.at(*a).total_cmp(&d.at(*b)))
            .unwrap(),
        (1..=200)
            .max_by(|a, b| d.at(*a).total_cmp(&d.at(*b)))
            .unwrap(),
    );
    let bimodal = d.at(left) > 10.0 * d.at(0) && d.at(right) > 10.0 * d.at(0);

    // slope of σ(t) from the dense oracle, t ≤ 50
    let oracle = evolve_1p(
        [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
        50,
        |_| FRAC_PI_4,
        |_| vec![c(1.0, 0.0); 101],
    );
    let oracle_sigma = |t: usize| {
        let p = probabilities_1p(&oracle[t]);
        sigma_of(p.iter().enumerate().map(|(i, p)| (i as f64 - 50.0, *p)))
    };
    let oracle_slope = (oracle_sigma(50) - oracle_sigma(25)) / 25.0;
    let (slope, r2) = linear_fit(&sigma[20..], 20);
    let slope_ok = ((slope - oracle_slope) / oracle_slope).abs() < 0.05 && r2 > 0.999;

    let zero_outside = outside < 1e-12;
    let fast = elapsed < Duration::from_secs(1);
    let pass = bimodal && zero_outside && slope_ok && fast;
    assert!(report(
        1,
        "homogeneous baseline",
        pass,
        format!(
            "peaks at {left}, {right}; P(|x| > {bound:.1}) = {outside:.3e} (need 0); \
             slope {slope:.5} vs oracle {oracle_slope:.5}, r2 {r2:.6}; {elapsed:.2?}"
        ),
    ));
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Least-squares slope of `y` against `t = offset, offset + 1, …`, with R².
fn linear_fit(y: &[f64], offset: usize) -> (f64, f64) {
    let n = y.len() as f64;
    let ts: Vec<f64> = (0..y.len()).map(|i| (i + offset) as f64).collect();
    let (mt, my) = (ts.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = ts.iter().zip(y).map(|(t, v)| (t - mt) * (v - my)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    (sxy / sxx, sxy * sxy / (sxx * syy))
}

#[test]
fn criterion_02_localized_coin() {
    let spec = WalkSpec::new(InitialState::symmetric(), schedule(FRAC_PI_2, 0.0), 500);
    let mut state = spec.initial_state().unwrap();
    let mut worst: f64 = 0.0;
    for t in 1..=500 {
        state.step(spec.schedule.theta_at(t), Phases::None).unwrap();
        let d = state.distribution();
        let d = line(&d);
        let inner = d.at(-1) + d.at(0) + d.at(1);
        worst = worst.max((inner - 1.0).abs());
    }
    assert!(report(
        2,
        "localized coin",
        worst < 1e-12,
        format!("max |P(-1..1) - 1| over t <= 500 = {worst:.2e}"),
    ));
}

#[test]
fn criterion_03_acceleration_monotonicity() {
    let grid = [0.0, 1e-4, 1e-3, 1e-2, 1e-1];
    let mut pass = true;
    let mut details = Vec::new();
    for theta0 in [FRAC_PI_4, FRAC_PI_2] {
        let sigmas: Vec<f64> = grid
            .iter()
            .map(|&a| {
                let spec = WalkSpec::new(InitialState::symmetric(), schedule(theta0, a), 200)
                    .record(Observable::Sigma);
                clean_run(&spec).series(Observable::Sigma).unwrap()[200]
            })
            .collect();
        let monotone = sigmas.windows(2).all(|w| w[1] >= w[0]);
        let last = sigmas[grid.len() - 1];
        let near_t = ((last - 200.0) / 200.0).abs() <= 0.01;
        pass &= monotone && near_t;
        details.push(format!(
            "theta0 {theta0:.4}: sigma {:?}, nondecreasing {monotone}, |sigma/200 - 1| = {:.3}",
            sigmas
                .iter()
                .map(|s| (s * 100.0).round() / 100.0)
                .collect::<Vec<_>>(),
            (last / 200.0 - 1.0).abs()
        ));
    }
    assert!(report(
        3,
        "acceleration monotonicity",
        pass,
        details.join("; ")
    ));
}

#[test]
fn criterion_04_negativity_bound_and_saturation() {
    let mut max_seen: f64 = 0.0;
    for theta0 in [FRAC_PI_4, FRAC_PI_2] {
        for a in [0.0, 0.002, 0.01, 0.03] {
            let spec = WalkSpec::new(InitialState::symmetric(), schedule(theta0, a), 500)
                .record(Observable::NegativityCoinPosition);
            let rec = clean_run(&spec);
            let n = rec.series(Observable::NegativityCoinPosition).unwrap();
            max_seen = n.iter().copied().fold(max_seen, f64::max);
        }
    }
    let bounded = max_seen <= 0.5 + 1e-12;

    let s = schedule(FRAC_PI_2, 0.03);
    let spec = WalkSpec::new(InitialState::symmetric(), s, 500)
        .record(Observable::NegativityCoinPosition);
    let neg = clean_run(&spec)
        .series(Observable::NegativityCoinPosition)
        .unwrap()
        .to_vec();
    // the step from which it stays at or above the threshold, then drops by
    // at most 1e-3 per step
    let reached = neg
        .iter()
        .rposition(|&v| v < 0.45)
        .map_or(Some(0), |t| (t + 1 < neg.len()).then_some(t + 1));
    let in_time = reached.is_some_and(|t| t <= 200);
    let worst_drop = reached.map_or(f64::NAN, |t0| {
        neg[t0..]
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    });
    let plateau = worst_drop <= 1e-3;

    // the same curve from the dense partial transpose of the oracle state
    let oracle = evolve_1p(
        [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
        24,
        |t| s.theta_at(t),
        |_| vec![c(1.0, 0.0); 49],
    );
    let oracle_diff = (1..=24)
        .map(|t| {
            let psi = &oracle[t];
            let amps: Vec<[C; 2]> = (0..49).map(|i| [psi[2 * i], psi[2 * i + 1]]).collect();
            (dense_negativity(&amps) - neg[t]).abs()
        })
        .fold(0.0, f64::max);
    let matches_oracle = oracle_diff < 1e-9;

    let pass = bounded && in_time && plateau && matches_oracle;
    assert!(report(
        4,
        "negativity bound and saturation",
        pass,
        format!(
            "max negativity {max_seen:.15}; stays >= 0.45 from t = {reached:?}; \
             worst later drop {worst_drop:.2e}; N(500) = {:.6}; oracle diff {oracle_diff:.1e}",
            neg[500]
        ),
    ));
}

#[test]
fn criterion_05_two_particle_null_case() {
    let spec = WalkSpec::new(
        InitialState::two_particle_basis(0),
        schedule(FRAC_PI_2, 0.0),
        500,
    )
    .record(Observable::NegativityParticleParticle);
    let neg = clean_run(&spec);
    let worst = neg
        .series(Observable::NegativityParticleParticle)
        .unwrap()
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    assert!(report(
        5,
        "two-particle null case",
        worst < 1e-12,
        format!("max |N| over t <= 500 = {worst:.2e}"),
    ));
}

fn pair_negativity(a: f64) -> Vec<f64> {
    let spec = WalkSpec::new(
        InitialState::two_particle_basis(0),
        schedule(FRAC_PI_2, a),
        500,
    )
    .record(Observable::NegativityParticleParticle);
    clean_run(&spec)
        .series(Observable::NegativityParticleParticle)
        .unwrap()
        .to_vec()
}

#[test]
fn criterion_06_entanglement_rise_and_decay() {
    let slow = pair_negativity(0.002);
    let fast = pair_negativity(0.02);
    let (tp_slow, peak_slow, half_slow) = half_life(&slow);
    let (tp_fast, peak_fast, half_fast) = half_life(&fast);
    let pass = slow[0].abs() < 1e-12 && peak_slow > 0.1 && half_fast < half_slow;
    assert!(report(
        6,
        "two-particle entanglement rise and decay",
        pass,
        format!(
            "a=0.002: N(0) = {:.1e}, peak {peak_slow:.4} at t = {tp_slow}, half at t = {half_slow}; \
             a=0.02: peak {peak_fast:.4} at t = {tp_fast}, half at t = {half_fast}",
            slow[0]
        ),
    ));
}

#[test]
fn criterion_07_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_neg: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=16usize);
        let mut amps: Vec<[C; 2]> = (0..n)
            .map(|_| {
                [
                    c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                    c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                ]
            })
            .collect();
        let norm: f64 = amps.iter().map(|a| a[0].norm_sqr() + a[1].norm_sqr()).sum();
        for a in &mut amps {
            a[0] /= norm.sqrt();
            a[1] /= norm.sqrt();
        }
        let schmidt = pure_state_negativity(&amps, NegativityMethod::SchmidtPure).unwrap();
        worst_neg = worst_neg.max((schmidt - dense_negativity(&amps)).abs());
    }

    // |uu>, |dd> pairs on the x line against one walker whose phase is doubled
    let steps = 50;
    let s = schedule(1.3, 0.01);
    let (alpha, beta) = (c(0.6, 0.0), c(0.0, 0.8));
    let one = InitialState::one_particle(alpha, beta, 0).unwrap();
    let two = InitialState::two_particle([alpha, c(0.0, 0.0), c(0.0, 0.0), beta], (0, 0)).unwrap();
    let mut w1 = WalkState::One(SpinorField1P::new(&one, steps).unwrap());
    let mut w2 = WalkState::Two(TwoParticleField::new(&two, steps).unwrap());
    assert_eq!(w1.site_count(), w2.site_count());
    let phi: Vec<f64> = (0..w1.site_count())
        .map(|_| PI * rng.random::<f64>())
        .collect();
    let units2: Vec<C> = phi.iter().map(|p| C::from_polar(1.0, *p)).collect();
    let units1: Vec<C> = phi.iter().map(|p| C::from_polar(1.0, 2.0 * p)).collect();
    let mut worst_walk: f64 = 0.0;
    for t in 1..=steps {
        w1.step(s.theta_at(t), Phases::PerSite(&units1)).unwrap();
        w2.step(s.theta_at(t), Phases::PerSite(&units2)).unwrap();
        let (WalkState::One(f1), WalkState::Two(f2)) = (&w1, &w2) else {
            unreachable!()
        };
        for x in -(steps as i64)..=steps as i64 {
            worst_walk = worst_walk
                .max((f1.up(x) - f2.uu(x, 0)).norm())
                .max((f1.down(x) - f2.dd(x, 0)).norm());
        }
    }
    let pass = worst_neg < 1e-9 && worst_walk < 1e-12;
    assert!(report(
        7,
        "oracle equivalence",
        pass,
        format!("negativity max diff {worst_neg:.1e} (100 states); pair vs single max diff {worst_walk:.1e} (t <= 50)"),
    ));
}

#[test]
fn criterion_08_unitarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let theta0 = FRAC_PI_2 * rng.random::<f64>();
        let a = 0.05 * rng.random::<f64>();
        let seed = rng.random::<u64>();
        let disorder = match i % 3 {
            0 => DisorderSpec::none(),
            1 => DisorderSpec::spatial(seed),
            _ => DisorderSpec::temporal(seed),
        };
        let init = if i % 2 == 0 {
            let (p, q) = (rng.random::<f64>(), rng.random::<f64>() * 2.0 * PI);
            InitialState::one_particle(c(p.sqrt(), 0.0), C::from_polar((1.0 - p).sqrt(), q), 0)
                .unwrap()
        } else {
            InitialState::two_particle_basis(rng.random_range(0..4usize))
        };
        let spec = WalkSpec::new(init, schedule(theta0, a), 1000).with_disorder(disorder);
        let rec = run(&spec, &spec.sample_landscape(0).unwrap()).unwrap();
        worst = worst.max((rec.final_norm - 1.0).abs());
    }
    assert!(report(
        8,
        "unitarity",
        worst < 1e-10,
        format!("max norm drift after 1000 steps over 50 configurations = {worst:.2e}"),
    ));
}

#[test]
fn criterion_09_dispersion_and_velocity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut worst_k, mut worst_v): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let theta0 = 0.05 + 1.45 * rng.random::<f64>();
        let v = |k: f64| group_velocity(theta0, k, 0.0).unwrap();
        let k_star = golden_max(v, 0.0, PI, 1e-10);
        worst_k = worst_k.max((k_star - FRAC_PI_2).abs());
        worst_v = worst_v.max((v(k_star) - theta0.cos()).abs());
    }

    let spec = WalkSpec::new(InitialState::symmetric(), schedule(FRAC_PI_4, 0.0), 200)
        .record(Observable::Distribution);
    let rec = clean_run(&spec);
    let d = line(rec.final_distribution().unwrap());
    // right front: the point beyond which 1% of the probability lies
    let mut tail = 0.0;
    let mut front = 0;
    for x in (0..=200).rev() {
        tail += d.at(x);
        if tail >= 0.01 {
            front = x;
            break;
        }
    }
    let speed = front as f64 / 200.0;
    let speed_ok = ((speed - FRAC_PI_4.cos()) / FRAC_PI_4.cos()).abs() < 0.02;

    let pass = worst_k < 1e-6 && worst_v < 1e-9 && speed_ok;
    assert!(report(
        9,
        "dispersion and group velocity",
        pass,
        format!(
            "max |k* - pi/2| = {worst_k:.1e}, max |v(k*) - cos theta0| = {worst_v:.1e}; \
             front speed {speed:.4} vs {:.4}",
            FRAC_PI_4.cos()
        ),
    ));
}

#[test]
fn criterion_10_transfer_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut worst1, mut worst2): (f64, f64) = (0.0, 0.0);
    let mut off_block_zero = true;
    for _ in 0..1000 {
        let theta = 3.0 * rng.random::<f64>() - 1.5;
        let phi = 2.0 * PI * rng.random::<f64>();
        let omega = 2.0 * PI * rng.random::<f64>() - PI;
        let t1 = transfer_matrix_1p(theta, phi, omega).unwrap();
        let t2 = transfer_matrix_2p(theta, phi, omega).unwrap();
        worst1 = worst1.max((t1.determinant().norm() - 1.0).abs());
        worst2 = worst2.max((t2.determinant().norm() - 1.0).abs());
        for (i, j) in [
            (0, 1),
            (0, 2),
            (1, 0),
            (1, 3),
            (2, 0),
            (2, 3),
            (3, 1),
            (3, 2),
        ] {
            off_block_zero &= t2.matrix[(i, j)] == C::new(0.0, 0.0);
        }
    }
    let pass = worst1 <= 1e-12 && worst2 <= 1e-12 && off_block_zero;
    assert!(report(
        10,
        "transfer matrices",
        pass,
        format!(
            "max ||det| - 1|: T_x {worst1:.1e}, T_xy {worst2:.1e}; off-block entries zero: {off_block_zero}"
        ),
    ));
}

fn disordered_spread(a: f64) -> (aqwalk::ensemble::SeriesStats, aqwalk::ensemble::SeriesStats) {
    let walk = WalkSpec::new(InitialState::up(), schedule(FRAC_PI_2, a), 200)
        .with_disorder(DisorderSpec::spatial(2024))
        .record(Observable::Sigma)
        .record(Observable::Ipr);
    let summary = run_ensemble(&EnsembleSpec::new(walk, 500, 11)).unwrap();
    (
        summary.series(Observable::Sigma).unwrap().clone(),
        summary.series(Observable::Ipr).unwrap().clone(),
    )
}

#[test]
fn criterion_11_localization_vs_delocalization() {
    let started = Instant::now();
    let (sigma_loc, ipr_loc) = disordered_spread(0.002);
    let (sigma_del, ipr_del) = disordered_spread(0.02);
    let elapsed = started.elapsed();
    let t = 200;
    let sep = |hi: f64, lo: f64, se1: f64, se2: f64| (hi - lo) / (se1 * se1 + se2 * se2).sqrt();
    let z_sigma = sep(
        sigma_del.mean[t],
        sigma_loc.mean[t],
        sigma_del.stderr[t],
        sigma_loc.stderr[t],
    );
    let z_ipr = sep(
        ipr_loc.mean[t],
        ipr_del.mean[t],
        ipr_loc.stderr[t],
        ipr_del.stderr[t],
    );
    let pass = z_sigma > 3.0 && z_ipr > 3.0 && elapsed < Duration::from_secs(300);
    assert!(report(
        11,
        "localization vs delocalization",
        pass,
        format!(
            "sigma {:.2}±{:.2} (a=0.002) vs {:.2}±{:.2} (a=0.02), {z_sigma:.0} se; \
             IPR {:.4}±{:.4} vs {:.4}±{:.4}, {z_ipr:.0} se; {elapsed:.1?}",
            sigma_loc.mean[t],
            sigma_loc.stderr[t],
            sigma_del.mean[t],
            sigma_del.stderr[t],
            ipr_loc.mean[t],
            ipr_loc.stderr[t],
            ipr_del.mean[t],
            ipr_del.stderr[t],
        ),
    ));
}

#[test]
fn criterion_12_disorder_prolongs_entanglement() {
    let clean = pair_negativity(0.002);
    let walk = WalkSpec::new(
        InitialState::two_particle_basis(0),
        schedule(FRAC_PI_2, 0.002),
        500,
    )
    .with_disorder(DisorderSpec::spatial(2024))
    .record(Observable::NegativityParticleParticle);
    let summary = run_ensemble(&EnsembleSpec::new(walk, 1000, 12)).unwrap();
    let disordered = &summary
        .series(Observable::NegativityParticleParticle)
        .unwrap()
        .mean;
    let (_, peak_c, half_c) = half_life(&clean);
    let (_, peak_d, half_d) = half_life(disordered);
    let describe = |h: usize| {
        if h > 500 {
            "beyond t = 500".to_string()
        } else {
            format!("t = {h}")
        }
    };
    assert!(report(
        12,
        "disorder prolongs entanglement",
        half_d > half_c,
        format!(
            "clean: peak {peak_c:.4}, half at {}; spatial (1000 runs): peak {peak_d:.4}, half {}",
            describe(half_c),
            describe(half_d)
        ),
    ));
}

#[test]
fn criterion_13_determinism_across_workers() {
    let config = ExperimentConfig::from_toml_str(
        r#"
        name = "determinism"
        kind = "ensemble"

        [walk]
        theta0 = "pi/2"
        a = [0.002, 0.02]
        steps = 120
        init = "uu"
        record = ["distribution", "sigma", "ipr", "negativity_coin_position", "negativity_particle_particle"]

        [disorder]
        kind = ["spatial", "temporal"]
        seed = 3

        [ensemble]
        runs = 200
        base_seed = 99
        "#,
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for workers in [1, 4, 8] {
        let options = RunOptions {
            output_dir: Some(dir.path().join(format!("w{workers}"))),
            workers: Some(workers),
        };
        let report = run_config(&config, &options).unwrap();
        let files: Vec<(String, Vec<u8>)> = report
            .files
            .iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read(p).unwrap(),
                )
            })
            .collect();
        outputs.push(files);
    }
    let n = outputs[0].len();
    let identical = n > 0 && outputs[1] == outputs[0] && outputs[2] == outputs[0];
    assert!(report(
        13,
        "determinism across worker counts",
        identical,
        format!("{n} data files compared for workers 1, 4, 8; identical: {identical}"),
    ));
}
