//! Degree-d homogeneity turns one sublevel volume into another:
//! `Vol{x in B(T): ‖F(x)‖ < b} = b^{n/d} Vol{x in B(b^{-1/d} T): ‖F‖ < 1}`.
//! Both sides are estimated independently by Monte Carlo and agree within
//! combined statistical error.
//!
//! ```bash
//! cargo run --release --example scaling_identity
//! ```

use forms_lab::domain::Domain;
use forms_lab::forms::FormSystem;
use forms_lab::volume::{derive_seed, volume_sublevel_threshold};

fn main() -> forms_lab::Result<()> {
    let ball = Domain::ball(3, 1.0)?;
    let (t, b) = (8.0f64, 4.0f64);
    let scale = b.powf(3.0 / 2.0); // b^{n/d} with n = 3, d = 2

    for (i, expr) in ["x1^2 + x2^2 - x3^2", "x1*x2 - x3^2", "0.5*x1^2 + x2*x3"]
        .iter()
        .enumerate()
    {
        let system = FormSystem::from_exprs(&[expr])?;
        let lhs =
            volume_sublevel_threshold(&system, &ball, t, b, 400_000, derive_seed(1, i as u64))?;
        let rhs = volume_sublevel_threshold(
            &system,
            &ball,
            b.powf(-0.5) * t,
            1.0,
            400_000,
            derive_seed(1, 100 + i as u64),
        )?;
        let scaled = scale * rhs.value;
        let sigma = lhs.stderr.hypot(scale * rhs.stderr);
        println!("F = {expr}:");
        println!("  direct      Vol = {:>9.3} ± {:.3}", lhs.value, lhs.stderr);
        println!(
            "  rescaled    Vol = {:>9.3} ± {:.3}",
            scaled,
            scale * rhs.stderr
        );
        println!(
            "  difference / combined stderr = {:.2}\n",
            (lhs.value - scaled).abs() / sigma.max(1e-12)
        );
    }
    Ok(())
}
