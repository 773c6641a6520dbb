//! Disorder-averaged spreading: random phases fixed in space localize the
//! walker at small acceleration, random phases in time do not.
//!
//!     cargo run --release --example disorder_ensemble

use std::f64::consts::FRAC_PI_2;

use aqwalk::ensemble::convergence_report;
use aqwalk::{
    run_ensemble, CoinSchedule, DisorderSpec, EnsembleSpec, InitialState, Observable, WalkSpec,
};

fn main() -> aqwalk::Result<()> {
    let steps = 200;
    println!(
        "{:<9} {:>6}  {:>16}  {:>16}",
        "disorder", "a", "sigma", "IPR"
    );
    for (label, disorder) in [
        ("spatial", DisorderSpec::spatial(1)),
        ("temporal", DisorderSpec::temporal(1)),
    ] {
        for a in [0.002, 0.02] {
            let walk = WalkSpec::new(InitialState::up(), CoinSchedule::new(FRAC_PI_2, a)?, steps)
                .with_disorder(disorder)
                .record(Observable::Sigma)
                .record(Observable::Ipr);
            let summary = run_ensemble(&EnsembleSpec::new(walk, 400, 7))?;
            let sigma = summary.series(Observable::Sigma).unwrap();
            let ipr = summary.series(Observable::Ipr).unwrap();
            println!(
                "{label:<9} {a:>6}  {:>8.3} ± {:<5.3}  {:>8.4} ± {:<6.4}",
                sigma.mean[steps], sigma.stderr[steps], ipr.mean[steps], ipr.stderr[steps]
            );
        }
    }

    // is 200 runs enough? compare against 800
    let walk = WalkSpec::new(
        InitialState::up(),
        CoinSchedule::new(FRAC_PI_2, 0.002)?,
        steps,
    )
    .with_disorder(DisorderSpec::spatial(1))
    .record(Observable::Sigma);
    let spec = EnsembleSpec::new(walk, 200, 7);
    let summary = run_ensemble(&spec)?;
    let report = convergence_report(&spec, &summary, 800)?;
    for (obs, c) in &report.curves {
        println!(
            "\n{} with 200 vs 800 runs: {:.0}% of steps within 3 se, flagged = {}",
            obs.key(),
            100.0 * c.within_three_se,
            c.flagged
        );
    }
    Ok(())
}
