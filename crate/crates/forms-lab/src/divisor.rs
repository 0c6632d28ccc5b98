//! The Piltz divisor summatory function, its main-term polynomials, and the
//! exact bracket relating it to the product-form counting function.

use std::collections::HashMap;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::forms::{FormSystem, HomogeneousForm};
use crate::lattice::{count_inequality, power_threshold, CountRequest};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// First Stieltjes constant γ₁ (coefficient of the ζ Laurent expansion at
/// s = 1 in the convention ζ(s) = 1/(s-1) + Σ (-1)^k γ_k (s-1)^k / k!).
pub const STIELTJES_GAMMA_1: f64 = -0.072_815_845_483_676_72;

/// Exact Δ_n(t) = #{x ∈ N^n : x_1 ··· x_n <= t}, by the recursion
/// Δ_1(t) = ⌊t⌋ and Δ_n(t) = Σ_{k <= ⌊t⌋} Δ_{n-1}(t/k).
///
/// The count depends on t only through ⌊t⌋, so each recursion level
/// memoizes on the integer argument; the memo table lives for one call.
pub fn divisor_summatory(n: u32, t: f64) -> Result<u64> {
    if n < 1 {
        return Err(Error::input("divisor order n must be at least 1"));
    }
    if !(t >= 0.0) {
        return Err(Error::input("argument t must be nonnegative"));
    }
    if t >= 9.2e18 {
        return Err(Error::Overflow("divisor summatory argument"));
    }
    let floor_t = t.floor() as u64;
    let mut memo: Vec<HashMap<u64, u64>> = vec![HashMap::new(); n as usize + 1];
    delta_rec(n, floor_t, &mut memo)
}

fn delta_rec(n: u32, t: u64, memo: &mut Vec<HashMap<u64, u64>>) -> Result<u64> {
    if n == 1 {
        return Ok(t);
    }
    if let Some(&v) = memo[n as usize].get(&t) {
        return Ok(v);
    }
    let mut total: u64 = 0;
    for k in 1..=t {
        let inner = delta_rec(n - 1, t / k, memo)?;
        total = total
            .checked_add(inner)
            .ok_or(Error::Overflow("divisor summatory"))?;
    }
    memo[n as usize].insert(t, total);
    Ok(total)
}

/// The degree-(n-1) main-term polynomial Q_n, for n ∈ {2, 3}:
/// Q_2(x) = x + (2γ - 1),
/// Q_3(x) = x²/2 + (3γ - 1)x + (3γ² - 3γ - 3γ₁ + 1).
pub fn q_poly_eval(n: u32, x: f64) -> Result<f64> {
    match n {
        2 => Ok(x + (2.0 * EULER_GAMMA - 1.0)),
        3 => {
            let g = EULER_GAMMA;
            let c0 = 3.0 * g * g - 3.0 * g - 3.0 * STIELTJES_GAMMA_1 + 1.0;
            Ok(x * x / 2.0 + (3.0 * g - 1.0) * x + c0)
        }
        other => Err(Error::input(format!(
            "main-term polynomial only available for n in {{2, 3}}, got {other}"
        ))),
    }
}

/// The exact two-sided bracket around the product-form count on the unit
/// cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BracketCheck {
    /// Δ_n(T^{n-α}) + n (T+1)^{n-1} - N(K_n, T, α); nonnegative when the
    /// bracket holds.
    pub bracket: i64,
    /// n(n+1)/2 · (T+1)^{n-2} + n · Δ_{n-1}(T^{n-1-α}).
    pub upper: u64,
    /// Whether 0 <= bracket <= upper.
    pub holds: bool,
    /// The exact lattice count N(K_n, T, α).
    pub count: u64,
    /// The divisor term Δ_n(T^{n-α}).
    pub divisor_term: u64,
}

/// Evaluates the bracket for `F = x_1 ··· x_n` on `K = [0,1]^n` at (T, α),
/// entirely in exact integer arithmetic.
///
/// The lower bound `0 <= bracket` holds for every (n, T, α). The upper
/// bound is meaningful only for `α >= n-1`: below that, tuples with a
/// coordinate beyond T enter the divisor term in numbers not controlled by
/// `Δ_{n-1}`, and `holds` comes back false.
pub fn counterexample_bracket(n: u32, t: u64, alpha: f64) -> Result<BracketCheck> {
    if n < 2 {
        return Err(Error::input("bracket needs n >= 2"));
    }
    if t < 1 {
        return Err(Error::input("bracket needs T >= 1"));
    }
    let nf = n as f64;
    let tf = t as f64;

    let divisor_term = divisor_summatory(n, power_threshold(tf, nf - alpha))?;
    let lower_hyperplanes = (n as u64)
        .checked_mul(
            (t + 1)
                .checked_pow(n - 1)
                .ok_or(Error::Overflow("hyperplane term"))?,
        )
        .ok_or(Error::Overflow("hyperplane term"))?;

    let system = FormSystem::single(HomogeneousForm::coordinate_product(n as usize));
    let req = CountRequest::new(system, Domain::unit_cube(n as usize), tf, alpha)?;
    let count = count_inequality(&req)?;

    let bracket_i128 = divisor_term as i128 + lower_hyperplanes as i128 - count as i128;
    let bracket = i64::try_from(bracket_i128).map_err(|_| Error::Overflow("bracket"))?;

    let pair_term = (n as u64)
        .checked_mul(n as u64 + 1)
        .and_then(|x| x.checked_div(2))
        .and_then(|x| {
            (t + 1)
                .checked_pow(n.saturating_sub(2))
                .and_then(|p| x.checked_mul(p))
        })
        .ok_or(Error::Overflow("bracket upper bound"))?;
    let tail = divisor_summatory(n - 1, power_threshold(tf, nf - 1.0 - alpha))?;
    let upper = pair_term
        .checked_add(
            (n as u64)
                .checked_mul(tail)
                .ok_or(Error::Overflow("tail"))?,
        )
        .ok_or(Error::Overflow("bracket upper bound"))?;

    let holds = bracket >= 0 && (bracket as u64) <= upper;
    Ok(BracketCheck {
        bracket,
        upper,
        holds,
        count,
        divisor_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_one_is_floor() {
        assert_eq!(divisor_summatory(1, 7.5).unwrap(), 7);
        assert_eq!(divisor_summatory(1, 0.3).unwrap(), 0);
    }

    #[test]
    fn delta_two_small() {
        // brute-force double loop over pairs with product <= 10 gives 27
        assert_eq!(divisor_summatory(2, 10.0).unwrap(), 27);
    }

    #[test]
    fn delta_three_small() {
        // (1,1,1) and the three permutations of (2,1,1)
        assert_eq!(divisor_summatory(3, 2.0).unwrap(), 4);
    }

    #[test]
    fn recursion_matches_brute_force() {
        for t in [1u64, 5, 17, 60, 200] {
            let mut brute2 = 0u64;
            let mut brute3 = 0u64;
            for a in 1..=t {
                for b in 1..=t {
                    if a * b <= t {
                        brute2 += 1;
                        for c in 1..=t {
                            if a * b * c <= t {
                                brute3 += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(divisor_summatory(2, t as f64).unwrap(), brute2, "n=2 t={t}");
            assert_eq!(divisor_summatory(3, t as f64).unwrap(), brute3, "n=3 t={t}");
        }
    }

    #[test]
    fn q2_at_zero() {
        let v = q_poly_eval(2, 0.0).unwrap();
        assert!((v - 0.154_431_329_803_065_7).abs() < 1e-12);
    }

    #[test]
    fn q3_leading_behavior() {
        // leading coefficient 1/2
        let big = 1e8;
        let v = q_poly_eval(3, big).unwrap();
        assert!((v / (big * big) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn q3_constant_term() {
        // pinned against the empirical limit of (Δ₃(t) - t(L²/2 + (3γ-1)L))/t
        let v = q_poly_eval(3, 0.0).unwrap();
        assert!((v - 0.486_334_313_169_587_4).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn q_poly_rejects_other_n() {
        assert!(q_poly_eval(4, 1.0).is_err());
    }

    #[test]
    fn dirichlet_main_term_tracks_delta2() {
        for t in [1.0e3, 1.0e4, 1.0e5] {
            let d = divisor_summatory(2, t).unwrap() as f64;
            let err = (d - t * q_poly_eval(2, t.ln()).unwrap()).abs();
            assert!(err <= 4.0 * t.sqrt(), "error {err} at t={t}");
        }
    }

    #[test]
    fn bracket_spot_values() {
        // n=2, T=10, alpha=1: 27 + 22 - 48 = 1, upper 3 + 2·Δ₁(1) = 5
        let b = counterexample_bracket(2, 10, 1.0).unwrap();
        assert_eq!(b.bracket, 1);
        assert_eq!(b.upper, 5);
        assert!(b.holds);
        assert_eq!(b.count, 48);
        assert_eq!(b.divisor_term, 27);

        // n=2, T=4, alpha=1: 8 + 10 - 17 = 1
        let b = counterexample_bracket(2, 4, 1.0).unwrap();
        assert_eq!(b.bracket, 1);
        assert_eq!(b.upper, 5);
        assert!(b.holds);

        let b = counterexample_bracket(2, 10, 2.0).unwrap();
        assert!(b.holds);
    }

    #[test]
    fn bracket_requires_n_at_least_two() {
        assert!(counterexample_bracket(1, 10, 1.0).is_err());
    }
}
