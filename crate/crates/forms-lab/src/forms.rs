//! Homogeneous forms, systems of forms and unimodular twists.
//!
//! A form is stored as sparse exponent/coefficient terms in canonical order
//! (lexicographic by exponent vector), so expansion results are reproducible
//! bit for bit. Evaluation is plain 64-bit floating point; exact arithmetic
//! lives in the modules whose claims are exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative singular-value cutoff for the gradient rank test.
pub const RANK_TOLERANCE: f64 = 1e-9;

/// Relative tolerance on `det g = 1` for unimodular matrices.
pub const DET_TOLERANCE: f64 = 1e-9;

/// One monomial `coeff * x^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub exponents: Vec<u32>,
    pub coeff: f64,
}

/// A homogeneous form of degree `d` in `n` variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousForm {
    n: usize,
    d: u32,
    terms: Vec<Term>,
}

impl HomogeneousForm {
    /// Builds a form from raw terms, canonicalizing: duplicate exponent
    /// vectors are merged, zero coefficients dropped, terms sorted
    /// lexicographically by exponent vector.
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("form must have at least one variable"));
        }
        let mut merged: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        let mut degree: Option<u32> = None;
        for t in terms {
            if t.exponents.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: t.exponents.len(),
                });
            }
            let deg: u32 = t.exponents.iter().sum();
            match degree {
                None => degree = Some(deg),
                Some(d) if d != deg => {
                    return Err(Error::input(format!(
                        "mixed total degrees {d} and {deg}: form is not homogeneous"
                    )))
                }
                _ => {}
            }
            *merged.entry(t.exponents).or_insert(0.0) += t.coeff;
        }
        let terms: Vec<Term> = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(exponents, coeff)| Term { exponents, coeff })
            .collect();
        let d = degree.ok_or_else(|| Error::input("form has no terms"))?;
        if terms.is_empty() {
            return Err(Error::input("all terms cancelled: zero form"));
        }
        if d == 0 {
            return Err(Error::input("degree must be at least 1"));
        }
        Ok(HomogeneousForm { n, d, terms })
    }

    /// Single monomial `x^k` (unit coefficient). `k` must be nonzero.
    pub fn monomial(k: &[u32]) -> Result<Self> {
        HomogeneousForm::new(
            k.len(),
            vec![Term {
                exponents: k.to_vec(),
                coeff: 1.0,
            }],
        )
    }

    /// The sum of squares `x_1^2 + ... + x_n^2`.
    pub fn sum_of_squares(n: usize) -> Self {
        let terms = (0..n)
            .map(|i| {
                let mut e = vec![0u32; n];
                e[i] = 2;
                Term {
                    exponents: e,
                    coeff: 1.0,
                }
            })
            .collect();
        HomogeneousForm::new(n, terms).expect("valid by construction")
    }

    /// The product form `x_1 x_2 ... x_n`.
    pub fn coordinate_product(n: usize) -> Self {
        HomogeneousForm::monomial(&vec![1u32; n]).expect("valid by construction")
    }

    /// The same form viewed in `n >= self.num_vars()` variables, padding
    /// exponent vectors with zeros.
    pub fn widened(&self, n: usize) -> Result<HomogeneousForm> {
        if n < self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: n,
            });
        }
        if n == self.n {
            return Ok(self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut exponents = t.exponents.clone();
                exponents.resize(n, 0);
                Term {
                    exponents,
                    coeff: t.coeff,
                }
            })
            .collect();
        HomogeneousForm::new(n, terms)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Evaluates the form at `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.evaluate_unchecked(x))
    }

    /// Evaluation without the dimension check, for hot loops that have
    /// validated inputs up front.
    #[inline]
    pub fn evaluate_unchecked(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for t in &self.terms {
            let mut prod = t.coeff;
            for (xi, &k) in x.iter().zip(&t.exponents) {
                if k > 0 {
                    prod *= xi.powi(k as i32);
                }
            }
            acc += prod;
        }
        acc
    }

    /// Gradient vector at `x`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut grad = vec![0.0; self.n];
        for t in &self.terms {
            for (i, &k) in t.exponents.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let mut prod = t.coeff * k as f64;
                for (j, (xj, &kj)) in x.iter().zip(&t.exponents).enumerate() {
                    let e = if j == i { kj - 1 } else { kj };
                    if e > 0 {
                        prod *= xj.powi(e as i32);
                    }
                }
                grad[i] += prod;
            }
        }
        Ok(grad)
    }

    /// Expanded composition `(F ∘ g)(x) = F(g x)`.
    pub fn compose(&self, g: &UnimodularMatrix) -> Result<HomogeneousForm> {
        if g.dim() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: g.dim(),
            });
        }
        // Row i of g is the linear form substituted for variable i.
        let rows: Vec<SparsePoly> = (0..self.n)
            .map(|i| SparsePoly::linear(self.n, g.entries().row(i).iter().copied().collect()))
            .collect();
        let mut acc = SparsePoly::zero(self.n);
        for t in &self.terms {
            let mut prod = SparsePoly::constant(self.n, t.coeff);
            for (i, &k) in t.exponents.iter().enumerate() {
                for _ in 0..k {
                    prod = prod.mul(&rows[i]);
                }
            }
            acc = acc.add(&prod);
        }
        acc.into_form(self.d)
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, t) in self.terms.iter().enumerate() {
            let c = t.coeff;
            if idx == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mags = c.abs();
            let vars: Vec<String> = t
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mags}")?;
            } else if mags == 1.0 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mags, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Intermediate sparse polynomial used by expansion routines.
struct SparsePoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl SparsePoly {
    fn zero(n: usize) -> Self {
        SparsePoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    fn constant(n: usize, c: f64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0u32; n], c);
        SparsePoly { n, terms }
    }

    fn linear(n: usize, coeffs: Vec<f64>) -> Self {
        let mut terms = BTreeMap::new();
        for (j, c) in coeffs.into_iter().enumerate() {
            if c != 0.0 {
                let mut e = vec![0u32; n];
                e[j] = 1;
                terms.insert(e, c);
            }
        }
        SparsePoly { n, terms }
    }

    fn from_form(f: &HomogeneousForm) -> Self {
        let mut terms = BTreeMap::new();
        for t in &f.terms {
            terms.insert(t.exponents.clone(), t.coeff);
        }
        SparsePoly { n: f.n, terms }
    }

    fn add(mut self, other: &SparsePoly) -> Self {
        for (e, c) in &other.terms {
            *self.terms.entry(e.clone()).or_insert(0.0) += c;
        }
        self
    }

    fn mul(&self, other: &SparsePoly) -> Self {
        let mut terms: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        SparsePoly { n: self.n, terms }
    }

    fn into_form(self, expected_degree: u32) -> Result<HomogeneousForm> {
        let terms: Vec<Term> = self
            .terms
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(exponents, coeff)| Term { exponents, coeff })
            .collect();
        if terms.is_empty() {
            return Err(Error::input("expansion produced the zero form"));
        }
        let form = HomogeneousForm::new(self.n, terms)?;
        debug_assert_eq!(form.d, expected_degree);
        Ok(form)
    }
}

/// Text syntax: terms joined by `+`/`-`, each term `coeff * x1^a1 * ... `.
impl FromStr for HomogeneousForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::input("empty form expression"));
        }
        // split on top-level +/- signs, keeping the sign with the term
        let mut raw_terms: Vec<(f64, &str)> = Vec::new();
        let mut start = 0;
        let mut sign = 1.0;
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && i > start {
                // a sign following '^', '*' or 'e' would be part of a number;
                // only split when the previous non-space char ends a factor
                let prev = s[start..i].trim_end().chars().last().unwrap_or(' ');
                if prev.is_ascii_alphanumeric() || prev == '.' {
                    let prev_is_exp = {
                        let trimmed = s[start..i].trim_end();
                        trimmed.ends_with('e') || trimmed.ends_with('E')
                    };
                    if !prev_is_exp {
                        raw_terms.push((sign, s[start..i].trim()));
                        sign = if c == '-' { -1.0 } else { 1.0 };
                        start = i + 1;
                    }
                }
            } else if i == start && (c == '+' || c == '-') {
                sign = if c == '-' { -sign } else { sign };
                start = i + 1;
            }
            i += 1;
        }
        raw_terms.push((sign, s[start..].trim()));

        let mut max_var = 0usize;
        let mut parsed: Vec<(f64, Vec<(usize, u32)>)> = Vec::new();
        for (sign, term) in raw_terms {
            if term.is_empty() {
                return Err(Error::input("empty term in form expression"));
            }
            let mut coeff = sign;
            let mut powers: Vec<(usize, u32)> = Vec::new();
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(Error::input(format!("empty factor in term `{term}`")));
                }
                if let Some(rest) = factor.strip_prefix('x') {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (v, e),
                        None => (rest, "1"),
                    };
                    let var: usize = var
                        .parse()
                        .map_err(|_| Error::input(format!("bad variable `{factor}`")))?;
                    if var == 0 {
                        return Err(Error::input("variables are numbered from x1"));
                    }
                    let exp: u32 = exp
                        .parse()
                        .map_err(|_| Error::input(format!("bad exponent in `{factor}`")))?;
                    max_var = max_var.max(var);
                    powers.push((var - 1, exp));
                } else {
                    let c: f64 = factor
                        .parse()
                        .map_err(|_| Error::input(format!("bad coefficient `{factor}`")))?;
                    coeff *= c;
                }
            }
            parsed.push((coeff, powers));
        }
        if max_var == 0 {
            return Err(Error::input("form has no variables"));
        }
        let terms = parsed
            .into_iter()
            .map(|(coeff, powers)| {
                let mut exponents = vec![0u32; max_var];
                for (v, e) in powers {
                    exponents[v] += e;
                }
                Term { exponents, coeff }
            })
            .collect();
        HomogeneousForm::new(max_var, terms)
    }
}

/// A nonempty tuple of homogeneous forms sharing `n` and `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormSystem {
    forms: Vec<HomogeneousForm>,
}

impl FormSystem {
    pub fn new(forms: Vec<HomogeneousForm>) -> Result<Self> {
        let first = forms
            .first()
            .ok_or_else(|| Error::input("form system must be nonempty"))?;
        let (n, d) = (first.n, first.d);
        for f in &forms {
            if f.n != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: f.n,
                });
            }
            if f.d != d {
                return Err(Error::input(format!(
                    "forms of degree {} and {} in one system",
                    d, f.d
                )));
            }
        }
        Ok(FormSystem { forms })
    }

    pub fn single(form: HomogeneousForm) -> Self {
        FormSystem { forms: vec![form] }
    }

    /// Parses a system from text expressions, widening every form to the
    /// largest variable index that appears anywhere in the system.
    pub fn from_exprs(exprs: &[&str]) -> Result<Self> {
        let parsed: Vec<HomogeneousForm> = exprs
            .iter()
            .map(|e| e.parse())
            .collect::<Result<Vec<_>>>()?;
        let n = parsed.iter().map(|f| f.n).max().unwrap_or(0);
        FormSystem::new(
            parsed
                .into_iter()
                .map(|f| f.widened(n))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn forms(&self) -> &[HomogeneousForm] {
        &self.forms
    }

    pub fn num_forms(&self) -> usize {
        self.forms.len()
    }

    pub fn num_vars(&self) -> usize {
        self.forms[0].n
    }

    pub fn degree(&self) -> u32 {
        self.forms[0].d
    }

    /// Euclidean norm of the value vector `(F_1(x), ..., F_p(x))`.
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        self.forms[0].check_dim(x)?;
        Ok(self.norm_unchecked(x))
    }

    #[inline]
    pub fn norm_unchecked(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for f in &self.forms {
            let v = f.evaluate_unchecked(x);
            acc += v * v;
        }
        acc.sqrt()
    }

    /// The squared-norm form `P_F = F_1^2 + ... + F_p^2`, expanded into
    /// canonical sparse terms of degree `2d`.
    pub fn squared_norm_form(&self) -> HomogeneousForm {
        let mut acc = SparsePoly::zero(self.num_vars());
        for f in &self.forms {
            let p = SparsePoly::from_form(f);
            acc = acc.add(&p.mul(&p));
        }
        acc.into_form(2 * self.degree())
            .expect("square of a nonzero form is nonzero")
    }

    /// Composes every member form with `g`.
    pub fn compose(&self, g: &UnimodularMatrix) -> Result<FormSystem> {
        let forms = self
            .forms
            .iter()
            .map(|f| f.compose(g))
            .collect::<Result<Vec<_>>>()?;
        FormSystem::new(forms)
    }

    /// Norm of `F(g x)` without expanding the composition.
    #[inline]
    pub fn norm_twisted_unchecked(
        &self,
        g: &UnimodularMatrix,
        x: &[f64],
        scratch: &mut [f64],
    ) -> f64 {
        g.apply_into(x, scratch);
        self.norm_unchecked(scratch)
    }

    /// For each point, whether the `p` gradient vectors have full rank `p`
    /// (singular values below `RANK_TOLERANCE` times the largest count as 0).
    pub fn smooth_ci_check(&self, points: &[Vec<f64>]) -> Result<Vec<bool>> {
        let p = self.num_forms();
        let n = self.num_vars();
        if p > n {
            return Err(Error::input(format!(
                "smooth complete intersection needs p <= n, got p={p}, n={n}"
            )));
        }
        points
            .iter()
            .map(|x| {
                let mut rows = Vec::with_capacity(p);
                for f in &self.forms {
                    rows.push(f.gradient(x)?);
                }
                let mat = DMatrix::from_fn(p, n, |i, j| rows[i][j]);
                let svals = mat.singular_values();
                let max = svals.iter().cloned().fold(0.0f64, f64::max);
                if max == 0.0 {
                    return Ok(false);
                }
                let rank = svals.iter().filter(|s| **s > RANK_TOLERANCE * max).count();
                Ok(rank == p)
            })
            .collect()
    }
}

/// A real matrix with determinant 1 (within `DET_TOLERANCE`).
#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularMatrix {
    entries: DMatrix<f64>,
}

impl UnimodularMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::input("unimodular matrix must be square"));
        }
        let det = entries.determinant();
        if (det - 1.0).abs() > DET_TOLERANCE {
            return Err(Error::input(format!(
                "matrix determinant {det} is not 1 within {DET_TOLERANCE:e}"
            )));
        }
        Ok(UnimodularMatrix { entries })
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMatrix {
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.entries
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let v = &self.entries * DVector::from_column_slice(x);
        Ok(v.iter().copied().collect())
    }

    #[inline]
    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let mut acc = 0.0;
            for (j, xj) in x.iter().enumerate().take(n) {
                acc += self.entries[(i, j)] * xj;
            }
            *o = acc;
        }
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &UnimodularMatrix) -> Result<UnimodularMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        UnimodularMatrix::new(&self.entries * &other.entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn product_form() -> HomogeneousForm {
        "x1*x2".parse().unwrap()
    }

    #[test]
    fn evaluate_product() {
        assert_eq!(product_form().evaluate(&[3.0, 4.0]).unwrap(), 12.0);
    }

    #[test]
    fn evaluate_sum_of_squares() {
        let f = HomogeneousForm::sum_of_squares(3);
        assert_eq!(f.evaluate(&[1.0, 2.0, 2.0]).unwrap(), 9.0);
    }

    #[test]
    fn evaluate_at_origin_is_zero() {
        let f: HomogeneousForm = "2*x1^3 - x1*x2^2".parse().unwrap();
        assert_eq!(f.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        assert!(matches!(
            product_form().evaluate(&[1.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn system_norm_345() {
        let s = FormSystem::from_exprs(&["x1", "x2"]).unwrap();
        assert_eq!(s.norm(&[3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn system_norm_single_form_is_abs() {
        let s = FormSystem::single("x1^2 - x2^2".parse().unwrap());
        let x = [1.3, 2.7];
        let f: HomogeneousForm = "x1^2 - x2^2".parse().unwrap();
        assert_eq!(s.norm(&x).unwrap(), f.evaluate(&x).unwrap().abs());
    }

    #[test]
    fn system_norm_zero_on_common_zero_set() {
        let s = FormSystem::single("x1^2 - x2^2".parse().unwrap());
        assert_eq!(s.norm(&[2.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn squared_norm_single_product() {
        let s = FormSystem::single(product_form());
        let p = s.squared_norm_form();
        assert_eq!(p.degree(), 4);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].exponents, vec![2, 2]);
        assert_eq!(p.terms()[0].coeff, 1.0);
    }

    #[test]
    fn squared_norm_two_linear() {
        let s = FormSystem::from_exprs(&["x1", "x2"]).unwrap();
        let p = s.squared_norm_form();
        let expected: HomogeneousForm = "x1^2 + x2^2".parse().unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn squared_norm_binomial_expansion() {
        // symbolic oracle: (x1+x2)^2 = x1^2 + 2 x1 x2 + x2^2
        let s = FormSystem::single("x1 + x2".parse().unwrap());
        let expected: HomogeneousForm = "x1^2 + 2*x1*x2 + x2^2".parse().unwrap();
        assert_eq!(s.squared_norm_form(), expected);
    }

    #[test]
    fn gradient_product() {
        let g = product_form().gradient(&[3.0, 4.0]).unwrap();
        assert_eq!(g, vec![4.0, 3.0]);
    }

    #[test]
    fn gradient_sum_of_squares() {
        let f = HomogeneousForm::sum_of_squares(2);
        assert_eq!(f.gradient(&[1.0, 2.0]).unwrap(), vec![2.0, 4.0]);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        // central finite-difference oracle on pseudo-random points
        let f: HomogeneousForm = "x1^3 - 2*x1*x2*x3 + x3^3".parse().unwrap();
        let h = 1e-5;
        let mut x = [0.7, -1.3, 0.9];
        for trial in 0..5 {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = ((trial * 3 + i) as f64 * 0.7129 + 0.31).sin() * 2.0;
            }
            let grad = f.gradient(&x).unwrap();
            for i in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[i] += h;
                xm[i] -= h;
                let fd = (f.evaluate(&xp).unwrap() - f.evaluate(&xm).unwrap()) / (2.0 * h);
                assert_relative_eq!(grad[i], fd, max_relative = 1e-6, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn compose_with_identity() {
        let f: HomogeneousForm = "x1^2 + 3*x1*x2".parse().unwrap();
        let g = UnimodularMatrix::identity(2);
        assert_eq!(f.compose(&g).unwrap(), f);
    }

    #[test]
    fn compose_quarter_turn() {
        // exact 90 degree rotation sends x1^2 to x2^2
        let f = HomogeneousForm::from_str("x1^2")
            .unwrap()
            .widened(2)
            .unwrap();
        let g = UnimodularMatrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let expected: HomogeneousForm = "x2^2".parse().unwrap();
        assert_eq!(f.compose(&g).unwrap(), expected);
    }

    #[test]
    fn compose_defining_identity() {
        let f: HomogeneousForm = "x1^3 - x2^2*x3".parse().unwrap();
        let g = UnimodularMatrix::from_rows(&[
            vec![1.0, 0.5, 0.0],
            vec![0.0, 1.0, -0.25],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let composed = f.compose(&g).unwrap();
        for x in [[1.0, 2.0, 3.0], [-0.3, 0.9, 1.7], [0.0, 1.0, -1.0]] {
            let gx = g.apply(&x).unwrap();
            assert_relative_eq!(
                composed.evaluate(&x).unwrap(),
                f.evaluate(&gx).unwrap(),
                max_relative = 1e-9,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn unimodular_rejects_wrong_det() {
        let res = UnimodularMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]);
        assert!(res.is_err());
    }

    #[test]
    fn smooth_ci_two_linear_forms() {
        let s = FormSystem::new(vec![
            "x1 + 0*x2 + 0*x3".parse().unwrap(),
            "x2 + 0*x1 + 0*x3".parse().unwrap(),
        ])
        .unwrap();
        let res = s.smooth_ci_check(&[vec![1.0, 1.0, 1.0]]).unwrap();
        assert_eq!(res, vec![true]);
    }

    #[test]
    fn smooth_ci_product_at_origin() {
        let s = FormSystem::single(product_form());
        let res = s.smooth_ci_check(&[vec![0.0, 0.0]]).unwrap();
        assert_eq!(res, vec![false]);
    }

    #[test]
    fn smooth_ci_cone_points() {
        let s = FormSystem::single("x1^2 + x2^2 - x3^2".parse().unwrap());
        let res = s
            .smooth_ci_check(&[vec![3.0, 4.0, 5.0], vec![1.0, 0.0, 1.0]])
            .unwrap();
        assert_eq!(res, vec![true, true]);
    }

    #[test]
    fn smooth_ci_rejects_p_above_n() {
        let s3 = FormSystem::new(vec![
            "x1 + 0*x2".parse().unwrap(),
            "x2 + 0*x1".parse().unwrap(),
            "x1 + x2".parse().unwrap(),
        ])
        .unwrap();
        assert!(s3.smooth_ci_check(&[vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let f: HomogeneousForm = "x1^2 + x2^2 - x3^2".parse().unwrap();
        let again: HomogeneousForm = f.to_string().parse().unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn parse_rejects_inhomogeneous() {
        let res: Result<HomogeneousForm> = "x1^2 + x2".parse();
        assert!(res.is_err());
    }

    #[test]
    fn parse_scientific_coefficient() {
        let f: HomogeneousForm = "1e-2*x1^2 - 2.5e1*x2^2".parse().unwrap();
        assert_eq!(f.evaluate(&[1.0, 1.0]).unwrap(), 0.01 - 25.0);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let f: HomogeneousForm = "0.1*x1^2 + 0.3333333333333333*x1*x2".parse().unwrap();
        let json = serde_json::to_string(f.terms()).unwrap();
        let terms: Vec<Term> = serde_json::from_str(&json).unwrap();
        let g = HomogeneousForm::new(f.num_vars(), terms).unwrap();
        assert_eq!(f, g);
        for (a, b) in f.terms().iter().zip(g.terms()) {
            assert_eq!(a.coeff.to_bits(), b.coeff.to_bits());
        }
    }

    #[test]
    fn mixed_system_rejected() {
        let res = FormSystem::new(vec!["x1".parse().unwrap(), "x1*x2".parse().unwrap()]);
        assert!(res.is_err());
    }
}
