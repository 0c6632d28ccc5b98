//! For 0 < alpha < 1 the sublevel set is large and the exact lattice count
//! tracks the Monte Carlo volume; the table reports N, V and N/V per T.
//!
//! ```bash
//! cargo run --release --example count_vs_volume
//! ```

use forms_lab::domain::Domain;
use forms_lab::fit::compare_count_volume;
use forms_lab::forms::{FormSystem, HomogeneousForm};

fn main() -> forms_lab::Result<()> {
    let disc = FormSystem::single(HomogeneousForm::sum_of_squares(2));
    let ball = Domain::ball(2, 1.0)?;
    let table = compare_count_volume(
        &disc,
        &ball,
        0.5,
        &[125.0, 250.0, 500.0, 1000.0, 2000.0],
        4_000_000,
        3,
    )?;
    println!("‖x‖² on the disc, alpha = 1/2:");
    println!(
        "  {:>7} {:>12} {:>15} {:>9}",
        "T", "count", "MC volume", "N/V"
    );
    for row in &table.rows {
        println!(
            "  {:>7} {:>12} {:>15.1} {:>9.5}",
            row.t, row.count, row.volume.value, row.ratio
        );
    }
    println!(
        "  max |N/V - 1| over the top half of the grid: {:.5}",
        table.max_deviation.unwrap()
    );

    let product = FormSystem::single(HomogeneousForm::coordinate_product(2));
    let cube = Domain::unit_cube(2);
    let table = compare_count_volume(&product, &cube, 0.5, &[256.0, 1024.0, 4096.0], 4_000_000, 3)?;
    println!("\nx1*x2 on the unit square, alpha = 1/2:");
    for row in &table.rows {
        println!(
            "  T = {:>6}: N = {:>9}, V = {:>12.1}, N/V = {:.5}",
            row.t, row.count, row.volume.value, row.ratio
        );
    }
    println!(
        "  max |N/V - 1| over the top half: {:.5}",
        table.max_deviation.unwrap()
    );
    Ok(())
}
