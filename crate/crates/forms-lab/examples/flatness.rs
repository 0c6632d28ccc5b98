//! Hyperplane slices of sublevel sets and the flatness exponent
//! `q = lim log M(eps) / log eps`, where `M(eps)` is the largest slice
//! volume over directions and offsets.
//!
//! A zero set containing a hyperplane piece keeps M(eps) constant (q = 0);
//! a curved zero set forces slices to shrink with eps (q > 0).
//!
//! ```bash
//! cargo run --release --example flatness
//! ```

use forms_lab::domain::Domain;
use forms_lab::forms::{FormSystem, HomogeneousForm};
use forms_lab::volume::{flatness_exponent, flatness_profile, geometric_eps_grid, slice_volume};

fn main() -> forms_lab::Result<()> {
    let product = FormSystem::single(HomogeneousForm::coordinate_product(2));
    let margin = Domain::axis_box(vec![[-0.1, 1.1], [-0.1, 1.1]])?;

    // single slices: along the coordinate hyperplane the form vanishes
    // identically, so the slice volume is the full segment at every eps
    println!("slice volumes of {{|x1 x2| <= eps}} in the margin box:");
    for (v, sigma) in [([1.0, 0.0], 0.0), ([1.0, 0.0], 0.3), ([0.6, 0.8], 0.2)] {
        let est = slice_volume(&product, &margin, &v, sigma, 0.01, 200_000, 7)?;
        println!(
            "  v = {v:?}, sigma = {sigma}: {:.4} ± {:.4}",
            est.value, est.stderr
        );
    }

    // flat case: the coordinate slice dominates at every eps
    let profile = flatness_profile(
        &product,
        &margin,
        &geometric_eps_grid(0.05, 8),
        8,
        9,
        30_000,
        5,
    )?;
    println!("\nflat case M(eps) profile:");
    for (e, m) in profile.eps_grid.iter().zip(&profile.m_values) {
        println!("  eps = {e:<10}: M = {:.4}", m.value);
    }
    let q = flatness_exponent(&profile)?;
    println!(
        "  q = {:.4} ± {:.4} (flat: zero exponent)",
        q.q_hat, q.halfwidth
    );

    // curved case: slices of {‖x‖² <= eps} in the disc shrink like sqrt(eps)
    let disc = FormSystem::single(HomogeneousForm::sum_of_squares(2));
    let ball = Domain::ball(2, 1.0)?;
    let profile = flatness_profile(&disc, &ball, &geometric_eps_grid(0.04, 8), 8, 9, 60_000, 5)?;
    let q = flatness_exponent(&profile)?;
    println!(
        "\ncurved case: q = {:.4} ± {:.4} (expected 0.5); pointwise ratio {:.4}{}",
        q.q_hat,
        q.halfwidth,
        q.pointwise_ratio,
        if q.oscillation_flag {
            " — oscillation flagged"
        } else {
            ""
        }
    );
    Ok(())
}
