//! Dispersion relation, group velocity and transfer matrices.
//!
//!     cargo run --example dispersion_and_transfer

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use aqwalk::spectral::{
    dispersion_curve, dispersion_omega, group_velocity, max_group_velocity, transfer_matrix_1p,
    transfer_matrix_2p, Branch, DispersionVariant,
};

fn main() -> aqwalk::Result<()> {
    let theta = FRAC_PI_4;
    let curve = dispersion_curve(
        theta,
        0.0,
        DispersionVariant::SingleParticle,
        Branch::Plus,
        9,
    );
    println!("omega+(kappa) at theta = pi/4");
    for (k, w) in curve.kappa.iter().zip(&curve.omega) {
        println!("  {:>7.4}  {:>7.4}", k, w);
    }
    println!(
        "v_g(pi/2) = {:.6}, max over kappa = {:.6}, cos theta = {:.6}",
        group_velocity(theta, FRAC_PI_2, 0.0)?,
        max_group_velocity(theta),
        theta.cos()
    );

    for variant in [
        DispersionVariant::SingleParticle,
        DispersionVariant::TwoParticleXLine,
        DispersionVariant::TwoParticleYLine,
    ] {
        let w = dispersion_omega(theta, 0.5, PI / 3.0, variant);
        println!(
            "{variant:?} at kappa = 0.5, phi = pi/3: omega = {:.5} / {:.5}",
            w.plus, w.minus
        );
    }

    let t1 = transfer_matrix_1p(1.0, 0.4, 0.3)?;
    let [l1, l2] = t1.eigenvalues();
    println!(
        "\nT_x: det = {:.6}, eigenvalues {:.4}, {:.4}",
        t1.determinant(),
        l1,
        l2
    );
    let t2 = transfer_matrix_2p(1.0, 0.4, 0.3)?;
    let (xb, yb) = t2.blocks();
    println!(
        "T_xy: |det| = {:.15}; block dets {:.6}, {:.6}",
        t2.determinant().norm(),
        xb.determinant(),
        yb.determinant()
    );
    Ok(())
}
