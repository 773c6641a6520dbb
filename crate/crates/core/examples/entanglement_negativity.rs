//! Coin–position negativity of one walker, and the two ways of computing it.
//!
//!     cargo run --release --example entanglement_negativity

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use aqwalk::evolution::Phases;
use aqwalk::observables::{pure_state_negativity, NegativityMethod};
use aqwalk::{
    run, CoinSchedule, InitialState, Observable, PhaseLandscape, SpinorField1P, WalkSpec, WalkState,
};

fn main() -> aqwalk::Result<()> {
    println!("{:>6} {:>6}  N(50)    N(100)   N(300)", "theta0", "a");
    for theta0 in [FRAC_PI_4, FRAC_PI_2] {
        for a in [0.0, 0.005, 0.03] {
            let spec = WalkSpec::new(
                InitialState::symmetric(),
                CoinSchedule::new(theta0, a)?,
                300,
            )
            .record(Observable::NegativityCoinPosition);
            let rec = run(&spec, &PhaseLandscape::clean())?;
            let n = rec.series(Observable::NegativityCoinPosition).unwrap();
            println!(
                "{theta0:>6.3} {a:>6}  {:.5}  {:.5}  {:.5}",
                n[50], n[100], n[300]
            );
        }
    }

    // Schmidt shortcut against the explicit partial transpose
    let init = InitialState::symmetric();
    let mut state = WalkState::One(SpinorField1P::new(&init, 30)?);
    for _ in 0..30 {
        state.step(FRAC_PI_4, Phases::None)?;
    }
    let WalkState::One(field) = &state else {
        unreachable!()
    };
    let schmidt = pure_state_negativity(field.amplitudes(), NegativityMethod::SchmidtPure)?;
    let dense = pure_state_negativity(field.amplitudes(), NegativityMethod::PartialTranspose)?;
    println!("t = 30: schmidt {schmidt:.15}, partial transpose {dense:.15}");
    Ok(())
}
