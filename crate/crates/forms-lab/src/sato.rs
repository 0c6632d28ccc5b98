//! Closed-form Bernstein–Sato root data and log-canonical thresholds for
//! monomials and sums of squares, in exact rational arithmetic.
//!
//! For the monomial `x^k` the Bernstein–Sato polynomial is
//! `∏_i ∏_{j=1..k_i} (s + j/k_i)`; for `x_1^2 + ... + x_n^2` it is
//! `(s+1)(s+n/2)`. The monomial log-canonical threshold with weight
//! exponents `h` is `r = min_i (h_i+1)/k_i` with multiplicity the number of
//! minimizing indices, a ratio being infinite when its `k_i` vanishes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exact rational roots with multiplicities, sorted descending by root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRootMultiset {
    roots: Vec<(Rational, u32)>,
}

impl RationalRootMultiset {
    fn from_map(map: BTreeMap<Rational, u32>) -> Result<Self> {
        let roots: Vec<(Rational, u32)> = map.into_iter().rev().collect();
        for (root, mult) in &roots {
            if !root.is_negative() {
                return Err(Error::input(format!("root {root} is not negative")));
            }
            if *mult == 0 {
                return Err(Error::input("zero multiplicity"));
            }
        }
        Ok(RationalRootMultiset { roots })
    }

    /// Roots in descending order with their multiplicities.
    pub fn roots(&self) -> &[(Rational, u32)] {
        &self.roots
    }

    /// Total root count with multiplicity (the polynomial degree).
    pub fn degree(&self) -> u32 {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    pub fn contains(&self, root: &Rational) -> bool {
        self.roots.iter().any(|(r, _)| r == root)
    }
}

/// Roots of the Bernstein–Sato polynomial of the monomial `x^k`.
pub fn sb_monomial(k: &[u32]) -> Result<RationalRootMultiset> {
    if k.is_empty() || k.iter().all(|&ki| ki == 0) {
        return Err(Error::input("monomial exponent vector must be nonzero"));
    }
    let mut map: BTreeMap<Rational, u32> = BTreeMap::new();
    for &ki in k {
        for j in 1..=ki {
            let root = Rational::new(-(j as i64), ki as i64)?;
            *map.entry(root).or_insert(0) += 1;
        }
    }
    RationalRootMultiset::from_map(map)
}

/// Roots of the Bernstein–Sato polynomial of `x_1^2 + ... + x_n^2`,
/// namely -1 and -n/2 (merged for n = 2).
pub fn sb_sum_of_squares(n: u32) -> Result<RationalRootMultiset> {
    if n < 1 {
        return Err(Error::input("need at least one variable"));
    }
    let mut map: BTreeMap<Rational, u32> = BTreeMap::new();
    *map.entry(Rational::from_integer(-1)).or_insert(0) += 1;
    *map.entry(Rational::new(-(n as i64), 2)?).or_insert(0) += 1;
    RationalRootMultiset::from_map(map)
}

/// A log-canonical threshold: exact pair (r, m), or infinite when every
/// exponent vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lct {
    Finite { r: Rational, m: u32 },
    Infinite,
}

impl Lct {
    pub fn finite(self) -> Option<(Rational, u32)> {
        match self {
            Lct::Finite { r, m } => Some((r, m)),
            Lct::Infinite => None,
        }
    }
}

fn lct_monomial(k: &[u32], h: &[u32]) -> Result<Lct> {
    if k.len() != h.len() {
        return Err(Error::Dimension {
            expected: k.len(),
            got: h.len(),
        });
    }
    if k.is_empty() {
        return Err(Error::input("empty exponent vector"));
    }
    let mut best: Option<Rational> = None;
    for (&ki, &hi) in k.iter().zip(h) {
        if ki == 0 {
            continue; // ratio conventionally infinite
        }
        let ratio = Rational::new(hi as i64 + 1, ki as i64)?;
        best = Some(match best {
            None => ratio,
            Some(b) if ratio < b => ratio,
            Some(b) => b,
        });
    }
    match best {
        None => Ok(Lct::Infinite),
        Some(r) => {
            let m = k
                .iter()
                .zip(h)
                .filter(|(&ki, &hi)| {
                    ki != 0 && Rational::new(hi as i64 + 1, ki as i64).unwrap() == r
                })
                .count() as u32;
            Ok(Lct::Finite { r, m })
        }
    }
}

/// Real log-canonical threshold of the monomial `x^k` weighted by `x^h`
/// over the positive orthant.
pub fn lct_monomial_real(k: &[u32], h: &[u32]) -> Result<Lct> {
    lct_monomial(k, h)
}

/// Complex log-canonical threshold of `|z^k|` weighted by `|z^{2h}|`; the
/// closed form coincides with the real orthant case.
pub fn lct_monomial_complex(k: &[u32], h: &[u32]) -> Result<Lct> {
    lct_monomial(k, h)
}

/// Minus the largest root together with its multiplicity.
pub fn largest_root_data(roots: &RationalRootMultiset) -> Result<(Rational, u32)> {
    let (root, mult) = roots
        .roots()
        .first()
        .ok_or_else(|| Error::input("empty root multiset"))?;
    Ok((root.neg()?, *mult))
}

/// The pair predicted for a smooth complete intersection of p forms:
/// (p, 1) for the system norm, (p/2, 1) for the squared-norm form.
pub fn predicted_pair_smooth(p: u32, squared_form: bool) -> Result<(Rational, u32)> {
    if p < 1 {
        return Err(Error::input("need at least one form"));
    }
    let r = if squared_form {
        Rational::new(p as i64, 2)?
    } else {
        Rational::from_integer(p as i64)
    };
    Ok((r, 1))
}
