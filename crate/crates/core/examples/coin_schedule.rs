//! The decaying coin angle θ_t = θ₀ e^{−at}.
//!
//!     cargo run --example coin_schedule

use std::f64::consts::FRAC_PI_4;

use aqwalk::CoinSchedule;

fn main() -> aqwalk::Result<()> {
    let rates = [0.0, 0.001, 0.01, 0.1];
    print!("{:>5}", "t");
    for a in rates {
        print!("  cos θ (a={a:<5})");
    }
    println!();
    let schedules: Vec<_> = rates
        .iter()
        .map(|&a| CoinSchedule::new(FRAC_PI_4, a))
        .collect::<Result<_, _>>()?;
    for t in [1, 10, 50, 100, 200, 500] {
        print!("{t:>5}");
        for s in &schedules {
            print!("  {:>16.6}", s.theta_at(t).cos());
        }
        println!();
    }
    Ok(())
}
