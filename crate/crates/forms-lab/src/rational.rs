//! Exact rational arithmetic on 64-bit numerator/denominator.
//!
//! The singularity computations are exact identities, so this module keeps
//! everything in checked integer arithmetic; comparisons cross-multiply in
//! i128 and cannot overflow.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A reduced fraction `num/den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::input("rational with zero denominator"));
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        let num = num
            .checked_div(g)
            .and_then(|n| n.checked_mul(sign))
            .ok_or(Error::Overflow("rational reduction"))?;
        let den = den
            .checked_div(g)
            .and_then(|d| d.checked_mul(sign))
            .ok_or(Error::Overflow("rational reduction"))?;
        Ok(Rational { num, den })
    }

    pub fn from_integer(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn neg(&self) -> Result<Self> {
        Ok(Rational {
            num: self.num.checked_neg().ok_or(Error::Overflow("negation"))?,
            den: self.den,
        })
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn checked_add(&self, other: &Rational) -> Result<Self> {
        let lhs = (self.num as i128) * (other.den as i128);
        let rhs = (other.num as i128) * (self.den as i128);
        let num = lhs + rhs;
        let den = (self.den as i128) * (other.den as i128);
        Self::from_i128(num, den)
    }

    pub fn checked_mul(&self, other: &Rational) -> Result<Self> {
        Self::from_i128(
            (self.num as i128) * (other.num as i128),
            (self.den as i128) * (other.den as i128),
        )
    }

    fn from_i128(num: i128, den: i128) -> Result<Self> {
        fn gcd128(mut a: i128, mut b: i128) -> i128 {
            a = a.abs();
            b = b.abs();
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd128(num, den).max(1);
        let num = num / g * sign;
        let den = den / g * sign;
        if num < i64::MIN as i128 || num > i64::MAX as i128 || den > i64::MAX as i128 {
            return Err(Error::Overflow("rational arithmetic"));
        }
        Ok(Rational {
            num: num as i64,
            den: den as i64,
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // denominators are positive, so cross-multiplication preserves order
        let lhs = (self.num as i128) * (other.den as i128);
        let rhs = (other.num as i128) * (self.den as i128);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
