//! The Piltz divisor summatory function, its main-term polynomials, and the
//! exact bracket tying it to the product-form lattice count on the unit
//! cube.
//!
//! ```bash
//! cargo run --release --example divisor_counterexample
//! ```

use forms_lab::divisor::{counterexample_bracket, divisor_summatory, q_poly_eval};

fn main() -> forms_lab::Result<()> {
    println!("Dirichlet: Delta_2(t) against t Q_2(ln t)");
    for k in 3..=7 {
        let t = 10f64.powi(k);
        let delta = divisor_summatory(2, t)?;
        let main = t * q_poly_eval(2, t.ln())?;
        println!(
            "  t = 1e{k}: Delta = {delta:>12}, main = {main:>16.1}, err/sqrt(t) = {:+.3}",
            (delta as f64 - main) / t.sqrt()
        );
    }

    println!("\nPiltz: Delta_3(t) against t Q_3(ln t)");
    for k in 3..=6 {
        let t = 10f64.powi(k);
        let delta = divisor_summatory(3, t)?;
        let main = t * q_poly_eval(3, t.ln())?;
        println!(
            "  t = 1e{k}: Delta = {delta:>12}, main = {main:>16.1}, err/t^0.8 = {:+.3}",
            (delta as f64 - main) / t.powf(0.8)
        );
    }

    // The bracket Delta_n(T^{n-a}) + n(T+1)^{n-1} - N(T, a) is nonnegative
    // for every (n, T, a); its printed upper bound holds when the divisor
    // term has no room beyond the box, i.e. for a >= n-1.
    println!("\nbracket for the product form on [0,1]^2:");
    println!("  n  T    alpha  count  bracket  upper  holds");
    for t in [4u64, 10, 20, 50] {
        for alpha in [1.0, 1.5] {
            let b = counterexample_bracket(2, t, alpha)?;
            println!(
                "  2  {t:3}  {alpha:4.1}  {:6}  {:7}  {:5}  {}",
                b.count, b.bracket, b.upper, b.holds
            );
        }
    }
    Ok(())
}
