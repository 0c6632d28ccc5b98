//! Exact lattice counting: how many integer points satisfy
//! `‖F(m)‖ <= T^(d-alpha)` inside the dilated body `T·K`.
//!
//! ```bash
//! cargo run --release --example counting
//! ```

use forms_lab::domain::Domain;
use forms_lab::forms::{FormSystem, HomogeneousForm, UnimodularMatrix};
use forms_lab::lattice::{count_inequality, count_twisted, CountRequest};

fn main() -> forms_lab::Result<()> {
    // product form x1 x2 on the unit square: T = 10, alpha = 1 keeps the
    // threshold at T, so the count splits into 27 interior points (pairs
    // with product at most 10) plus 21 points on the coordinate axes
    let product = FormSystem::single(HomogeneousForm::coordinate_product(2));
    let cube = Domain::unit_cube(2);
    let req = CountRequest::new(product.clone(), cube.clone(), 10.0, 1.0)?;
    println!(
        "product form, [0,10]^2, threshold 10: {}",
        count_inequality(&req)?
    );

    // sum of squares on the unit disc: T = 100, alpha = 1 counts lattice
    // points in the closed disc of radius 10
    let disc = FormSystem::single(HomogeneousForm::sum_of_squares(2));
    let ball = Domain::ball(2, 1.0)?;
    let req = CountRequest::new(disc.clone(), ball, 100.0, 1.0)?;
    println!(
        "lattice points in the disc of radius 10: {}",
        count_inequality(&req)?
    );

    // growth along a T grid
    println!("\nT, count for x1*x2 on [0,1]^2 at alpha = 1:");
    for t in [16.0, 64.0, 256.0, 1024.0] {
        let req = CountRequest::new(product.clone(), cube.clone(), t, 1.0)?;
        println!("  {t:6}: {}", count_inequality(&req)?);
    }

    // twisted band count: integer points in a ball where the sheared form
    // lands in (0, 1]
    let cone = FormSystem::from_exprs(&["x1^2 + x2^2 - x3^2"])?;
    let shear = UnimodularMatrix::from_rows(&[
        vec![1.0, 0.5, 0.0],
        vec![0.0, 1.0, 0.5],
        vec![0.0, 0.0, 1.0],
    ])?;
    println!("\nband 0 < ‖(F∘g)(m)‖ <= 1 over ‖m‖ <= T for a shear g:");
    for t in [10.0, 20.0, 40.0] {
        let c = count_twisted(&cone, &shear, 0.0, 1.0, t)?;
        println!("  T = {t:4}: {c}");
    }
    Ok(())
}
