//! Two walkers with the entangling coin: particle–particle negativity from
//! |↑↑⟩, and the joint distribution on the plane for a mixed coin state.
//!
//!     cargo run --release --example two_particle_walk

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use aqwalk::{run, CoinSchedule, InitialState, Observable, PhaseLandscape, WalkSpec};
use num_complex::Complex64;

fn main() -> aqwalk::Result<()> {
    for a in [0.0, 0.002, 0.02] {
        let spec = WalkSpec::new(
            InitialState::two_particle_basis(0),
            CoinSchedule::new(FRAC_PI_2, a)?,
            500,
        )
        .record(Observable::NegativityParticleParticle);
        let rec = run(&spec, &PhaseLandscape::clean())?;
        let n = rec.series(Observable::NegativityParticleParticle).unwrap();
        let (t_peak, peak) = n
            .iter()
            .enumerate()
            .fold((0, 0.0), |b, (t, &v)| if v > b.1 { (t, v) } else { b });
        println!(
            "a = {a:<6} peak {peak:.4} at t = {t_peak:>3}, N(500) = {:.4}",
            n[500]
        );
    }

    // (|↑↑⟩ + |↑↓⟩)/√2 leaves the axes, so it needs the full plane
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    let init = InitialState::two_particle(
        [Complex64::new(s, 0.0), Complex64::new(s, 0.0), zero, zero],
        (0, 0),
    )?;
    let spec = WalkSpec::new(init, CoinSchedule::homogeneous(FRAC_PI_4)?, 10)
        .on_full_plane()
        .record(Observable::Distribution);
    let rec = run(&spec, &PhaseLandscape::clean())?;
    let dist = rec.final_distribution().unwrap();
    let aqwalk::Distribution::Plane(plane) = dist else {
        unreachable!()
    };
    println!("\njoint distribution after 10 steps (x across, y down, p x 1000):");
    for y in (-10..=10).rev() {
        for x in -10..=10 {
            print!("{:>4.0}", 1000.0 * plane.at(x, y));
        }
        println!();
    }
    println!("sigma = {:.4}, total = {:.15}", dist.sigma(), dist.total());
    Ok(())
}
