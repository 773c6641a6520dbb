//! One walker from (|↑⟩ + |↓⟩)/√2: spread and final profile for a few
//! accelerations.
//!
//!     cargo run --release --example single_particle_walk

use std::f64::consts::FRAC_PI_4;

use aqwalk::{run, CoinSchedule, InitialState, Observable, PhaseLandscape, WalkSpec};

fn main() -> aqwalk::Result<()> {
    let steps = 200;
    for a in [0.0, 0.005, 0.05] {
        let spec = WalkSpec::new(
            InitialState::symmetric(),
            CoinSchedule::new(FRAC_PI_4, a)?,
            steps,
        )
        .record(Observable::Distribution)
        .record(Observable::Sigma);
        let rec = run(&spec, &PhaseLandscape::clean())?;
        let sigma = rec.series(Observable::Sigma).unwrap();
        let dist = rec.final_distribution().unwrap().as_line().unwrap();

        println!("a = {a}");
        for t in [50, 100, 150, 200] {
            println!("  sigma({t:>3}) = {:8.3}", sigma[t]);
        }
        // coarse histogram, 20 sites per bin
        for lo in (-200..200).step_by(20) {
            let p: f64 = (lo..lo + 20).map(|x| dist.at(x)).sum();
            println!(
                "  [{lo:>4}, {:>4})  {:<50} {p:.3}",
                lo + 20,
                "#".repeat((p * 100.0) as usize)
            );
        }
    }
    Ok(())
}
