//! Monte Carlo volumes of sublevel sets and recovery of the growth pair
//! (r, m) in the model `V(T) = γ T^n c(T)^r |log c(T)|^(m-1)`, c(T) = T^-α.
//!
//! The product form has a maximally flat zero set and shows the extra
//! logarithm (m = n); a nondegenerate quadric is the smooth benchmark with
//! m = 1.
//!
//! ```bash
//! cargo run --release --example volume_growth
//! ```

use forms_lab::domain::Domain;
use forms_lab::fit::fit_volume_growth;
use forms_lab::forms::{FormSystem, HomogeneousForm};
use forms_lab::volume::{derive_seed, volume_sublevel};

fn main() -> forms_lab::Result<()> {
    let seed = 42;

    // product form on the unit square, alpha = 1
    let system = FormSystem::single(HomogeneousForm::coordinate_product(2));
    let cube = Domain::unit_cube(2);
    let mut samples = Vec::new();
    println!("T, volume estimate, stderr  (x1*x2 on [0,1]^2, alpha = 1)");
    for j in 4..=14 {
        let t = (1u64 << j) as f64;
        let est = volume_sublevel(&system, &cube, t, 1.0, 1_000_000, derive_seed(seed, j))?;
        println!("  {t:8}: {:>14.3} ± {:.3}", est.value, est.stderr);
        samples.push((t, est.value));
    }
    let fit = fit_volume_growth(&samples, 2, 2, 1.0, &[1, 2])?;
    println!(
        "fitted: gamma = {:.4}, (r, m) = ({:.4}, {}), residual {:.4}\n",
        fit.gamma, fit.r, fit.m, fit.residual
    );

    // smooth case: ‖x‖² on the ball, alpha = 1/2; exact volume grows like
    // the ball of radius T^((2-alpha)/2), so r = n/2 and m = 1
    let system = FormSystem::single(HomogeneousForm::sum_of_squares(3));
    let ball = Domain::ball(3, 1.0)?;
    let mut samples = Vec::new();
    for j in 3..=9 {
        let t = (1u64 << j) as f64;
        let est = volume_sublevel(
            &system,
            &ball,
            t,
            0.5,
            4_000_000,
            derive_seed(seed, 100 + j),
        )?;
        samples.push((t, est.value));
    }
    let fit = fit_volume_growth(&samples, 3, 2, 0.5, &[1, 2, 3])?;
    println!(
        "‖x‖² on B3, alpha = 1/2: (r, m) = ({:.4}, {}) — expected (1.5, 1)",
        fit.r, fit.m
    );
    println!(
        "fitted exponent respects r <= n/d + 0.1: {}",
        fit.pole_range_ok(3, 2)
    );
    Ok(())
}
