//! Exact singularity data: Bernstein–Sato roots for monomials and sums of
//! squares, log-canonical thresholds, and the cross-check that minus the
//! largest root (with its multiplicity) equals the complex LCT.
//!
//! ```bash
//! cargo run --example singular_exponents
//! ```

use forms_lab::sato::{
    largest_root_data, lct_monomial_complex, lct_monomial_real, predicted_pair_smooth, sb_monomial,
    sb_sum_of_squares, Lct,
};

fn main() -> forms_lab::Result<()> {
    println!("Bernstein–Sato roots of x^k:");
    for k in [vec![2u32], vec![1, 1], vec![2, 3], vec![2, 4]] {
        let roots = sb_monomial(&k)?;
        let rendered: Vec<String> = roots
            .roots()
            .iter()
            .map(|(r, m)| {
                if *m == 1 {
                    r.to_string()
                } else {
                    format!("{r} (x{m})")
                }
            })
            .collect();
        println!("  k = {k:?}: {}", rendered.join(", "));
    }

    println!("\nBernstein–Sato roots of x1^2 + ... + xn^2:");
    for n in [2u32, 3, 4] {
        let roots = sb_sum_of_squares(n)?;
        let rendered: Vec<String> = roots
            .roots()
            .iter()
            .map(|(r, m)| {
                if *m == 1 {
                    r.to_string()
                } else {
                    format!("{r} (x{m})")
                }
            })
            .collect();
        println!("  n = {n}: {}", rendered.join(", "));
    }

    println!("\nmonomial log-canonical thresholds (k, h) -> (r, m):");
    for (k, h) in [
        (vec![2u32, 2], vec![0u32, 0]),
        (vec![2, 4], vec![0, 0]),
        (vec![3], vec![2]),
        (vec![1, 0], vec![0, 0]),
        (vec![0, 0], vec![0, 0]),
    ] {
        let real = lct_monomial_real(&k, &h)?;
        match real {
            Lct::Finite { r, m } => println!("  k={k:?} h={h:?}: ({r}, {m})"),
            Lct::Infinite => println!("  k={k:?} h={h:?}: infinite"),
        }
    }

    println!("\nlargest-root data against the complex LCT, k in {{1..6}}^2:");
    let mut checked = 0;
    for k1 in 1..=6u32 {
        for k2 in 1..=6u32 {
            let k = [k1, k2];
            let (r, m) = largest_root_data(&sb_monomial(&k)?)?;
            let lct = lct_monomial_complex(&k, &[0, 0])?;
            assert_eq!(lct, Lct::Finite { r, m });
            checked += 1;
        }
    }
    println!("  {checked} cases agree exactly");

    println!("\nsmooth complete-intersection predictions:");
    for p in [1u32, 2, 3] {
        let (r, m) = predicted_pair_smooth(p, false)?;
        let (rs, ms) = predicted_pair_smooth(p, true)?;
        println!("  p = {p}: system pair ({r}, {m}), squared-form pair ({rs}, {ms})");
    }
    Ok(())
}
