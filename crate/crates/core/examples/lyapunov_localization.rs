//! Localization length from products of transfer matrices with random
//! site phases.
//!
//!     cargo run --release --example lyapunov_localization

use std::f64::consts::FRAC_PI_2;

use aqwalk::spectral::lyapunov_over_seeds;
use aqwalk::DisorderSpec;

fn main() {
    let disorder = DisorderSpec::spatial(0);
    let seeds = [1, 2, 3, 4];
    println!("{:>6}  {:>10}  {:>10}", "theta", "gamma", "xi");
    for theta in [0.2, 0.6, 1.0, 1.37] {
        let estimates = lyapunov_over_seeds(&disorder, &seeds, theta, FRAC_PI_2, 100_000);
        let ok: Vec<f64> = estimates
            .iter()
            .filter_map(|e| e.as_ref().ok())
            .map(|e| e.gamma)
            .collect();
        if ok.is_empty() {
            println!("{theta:>6}  not converged");
            continue;
        }
        let gamma = ok.iter().sum::<f64>() / ok.len() as f64;
        println!(
            "{theta:>6}  {gamma:>10.5}  {:>10.3}   ({} of {} seeds converged)",
            1.0 / gamma,
            ok.len(),
            seeds.len()
        );
    }
}
