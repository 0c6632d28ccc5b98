//! Random unimodular twists: for almost every determinant-one matrix g the
//! inequality `‖(F∘g)(m)‖ < eps` has a small integer solution once the
//! search radius grows like a suitable power of 1/eps, and the band counts
//! `a < ‖(F∘g)(m)‖ <= b` over ‖m‖ <= T grow linearly in T for the
//! indefinite quadratic.
//!
//! ```bash
//! cargo run --release --example random_twists
//! ```

use forms_lab::fit::PolePair;
use forms_lab::forms::FormSystem;
use forms_lab::twist::{sample_unimodular, success_curve, twisted_count_series, TwistExperiment};

fn main() -> forms_lab::Result<()> {
    let cone = FormSystem::from_exprs(&["x1^2 + x2^2 - x3^2"])?;

    // the sampler draws Gaussian matrices rescaled to determinant one,
    // rejecting operator norms above the bound
    let g = sample_unimodular(3, 7, 3.0)?;
    println!(
        "sampled matrix (seed 7): det = {:.12}, operator norm = {:.3}",
        g.determinant(),
        g.operator_norm()
    );

    // paired success experiment: the same 100 matrices at every eps, search
    // radius 10 * eps^{-1.2}
    let exp = TwistExperiment::new(
        cone.clone(),
        PolePair { r: 1.0, m: 1 },
        vec![0.5, 0.35, 0.25, 0.17, 0.12],
        100,
        10.0,
        0.2,
        3.0,
        42,
    )?;
    println!("\nsuccess curve (radius 10 eps^-1.2, 100 matrices):");
    for p in success_curve(&exp, exp.trial_exponent()?)? {
        println!(
            "  eps = {:<5}: {:>3}/{} success, Wilson [{:.3}, {:.3}]",
            p.eps, p.successes, p.total, p.wilson_lo, p.wilson_hi
        );
    }

    // band counts normalized by the predicted growth T^{n-rd} * b^r; the
    // normalized column stabilizing is the experiment
    println!("\ntwisted band counts, band (0, 1]:");
    let rows = twisted_count_series(
        &cone,
        &g,
        0.0,
        1.0,
        &[20.0, 40.0, 80.0, 160.0],
        &PolePair { r: 1.0, m: 1 },
    )?;
    for row in rows {
        println!(
            "  T = {:>4}: count = {:>5}, count / prediction = {:.4}",
            row.t, row.count, row.normalized
        );
    }
    Ok(())
}
