//! Monte Carlo experiments over random unimodular twists: uniform
//! Diophantine approximation trials and twisted band-count series.
//!
//! The matrix sampler draws Gaussian matrices rescaled to determinant one.
//! Its law is absolutely continuous with compact effective support rather
//! than Haar on SL_n(R)/SL_n(Z); almost-everywhere statements are
//! insensitive to that replacement, which is what these experiments probe.
//! All experiments are seed-pinned and reduce in fixed order, so results
//! are identical across runs and thread counts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fit::PolePair;
use crate::forms::{FormSystem, UnimodularMatrix};
use crate::lattice::count_twisted;

/// Give up after this many consecutive rejections.
const MAX_REJECTIONS: usize = 10_000;

/// Largest admissible search radius for exhaustive trials.
pub const SEARCH_RADIUS_LIMIT: f64 = 1e4;

/// Configuration of a twist experiment.
#[derive(Debug, Clone)]
pub struct TwistExperiment {
    pub system: FormSystem,
    pub pair: PolePair,
    pub eps_schedule: Vec<f64>,
    pub n_matrices: usize,
    pub kappa: f64,
    pub delta: f64,
    pub norm_bound: f64,
    pub seed: u64,
}

impl TwistExperiment {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        system: FormSystem,
        pair: PolePair,
        eps_schedule: Vec<f64>,
        n_matrices: usize,
        kappa: f64,
        delta: f64,
        norm_bound: f64,
        seed: u64,
    ) -> Result<Self> {
        if eps_schedule.is_empty()
            || !eps_schedule.windows(2).all(|w| w[0] > w[1])
            || !eps_schedule.iter().all(|e| *e > 0.0 && *e < 1.0)
        {
            return Err(Error::input(
                "eps schedule must be strictly decreasing within (0, 1)",
            ));
        }
        if n_matrices < 10 {
            return Err(Error::input("need at least 10 matrices"));
        }
        if !(kappa >= 1.0) {
            return Err(Error::input("kappa must be at least 1"));
        }
        if !(delta > 0.0) {
            return Err(Error::input("delta must be positive"));
        }
        if !(norm_bound > 1.0) {
            return Err(Error::input("norm bound must exceed 1"));
        }
        Ok(TwistExperiment {
            system,
            pair,
            eps_schedule,
            n_matrices,
            kappa,
            delta,
            norm_bound,
            seed,
        })
    }

    /// The threshold exponent `r / (n - r d)` of the convergence condition;
    /// powers above it (here, above by `delta`) make the search radius grow
    /// fast enough for the summability hypothesis.
    pub fn minimal_exponent(&self) -> Result<f64> {
        let n = self.system.num_vars() as f64;
        let d = self.system.degree() as f64;
        let denom = n - self.pair.r * d;
        if denom <= 0.0 {
            return Err(Error::input("minimal exponent undefined: need r < n/d"));
        }
        Ok(self.pair.r / denom)
    }

    /// `minimal_exponent() + delta`, the default trial exponent.
    pub fn trial_exponent(&self) -> Result<f64> {
        Ok(self.minimal_exponent()? + self.delta)
    }
}

/// Draws a determinant-one matrix: standard Gaussian entries, a column sign
/// flip when the determinant is negative, rescaling by det^(-1/n), and
/// rejection while the determinant is tiny or the operator norm exceeds
/// `norm_bound`. Deterministic in (n, seed).
pub fn sample_unimodular(n: usize, seed: u64, norm_bound: f64) -> Result<UnimodularMatrix> {
    if n < 2 {
        return Err(Error::input("matrix sampling needs n >= 2"));
    }
    if !(norm_bound > 1.0) {
        return Err(Error::input("norm bound must exceed 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let mut a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let det = a.determinant();
        if det.abs() < 1e-6 {
            continue;
        }
        if det < 0.0 {
            // negating one column flips the determinant sign
            for i in 0..n {
                a[(i, n - 1)] = -a[(i, n - 1)];
            }
        }
        let scale = a.determinant().powf(1.0 / n as f64);
        a /= scale;
        if (a.determinant() - 1.0).abs() > 1e-9 {
            continue;
        }
        let opnorm = a.singular_values().iter().cloned().fold(0.0f64, f64::max);
        if opnorm > norm_bound {
            continue;
        }
        return UnimodularMatrix::new(a);
    }
    Err(Error::RejectionLimit(MAX_REJECTIONS))
}

/// Whether some `m ∈ Z^n` with `1 <= ‖m‖ <= κ ε^(-θ)` satisfies
/// `‖F(g·m)‖ < ε`. The search enumerates max-norm shells outward, so an
/// early small witness is found quickly.
pub fn uniform_approx_trial(
    system: &FormSystem,
    g: &UnimodularMatrix,
    eps: f64,
    f_exponent: f64,
    kappa: f64,
) -> Result<bool> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::input("eps must lie in (0, 1)"));
    }
    if !(kappa >= 1.0) {
        return Err(Error::input("kappa must be at least 1"));
    }
    let n = system.num_vars();
    if g.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: g.dim(),
        });
    }
    if n > 16 {
        return Err(Error::input("trial search supports at most 16 variables"));
    }
    let radius = kappa * eps.powf(-f_exponent);
    if radius > SEARCH_RADIUS_LIMIT {
        return Err(Error::SearchBudget {
            radius,
            limit: SEARCH_RADIUS_LIMIT,
        });
    }
    if radius < 1.0 {
        return Ok(false);
    }
    let r = radius.floor() as i64;
    let r2 = radius * radius;
    let mut point = vec![0i64; n];
    let mut scratch_x = [0.0f64; 16];
    let mut scratch_g = [0.0f64; 16];
    for shell in 1..=r {
        if search_shell(
            system,
            g,
            eps,
            r2,
            shell,
            &mut point,
            0,
            false,
            &mut scratch_x[..n],
            &mut scratch_g[..n],
        ) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Recursively enumerates points with max-norm exactly `shell`; returns true
/// on the first witness.
#[allow(clippy::too_many_arguments)]
fn search_shell(
    system: &FormSystem,
    g: &UnimodularMatrix,
    eps: f64,
    r2: f64,
    shell: i64,
    point: &mut Vec<i64>,
    axis: usize,
    pinned: bool,
    x: &mut [f64],
    gx: &mut [f64],
) -> bool {
    let n = point.len();
    if axis == n {
        if !pinned {
            return false; // interior of the shell, already visited
        }
        let norm2: i64 = point.iter().map(|v| v * v).sum();
        if norm2 == 0 || (norm2 as f64) > r2 {
            return false;
        }
        for (xi, &p) in x.iter_mut().zip(point.iter()) {
            *xi = p as f64;
        }
        g.apply_into(x, gx);
        return system.norm_unchecked(gx) < eps;
    }
    for v in -shell..=shell {
        point[axis] = v;
        let now_pinned = pinned || v.abs() == shell;
        // remaining axes must reach the shell if none has yet
        if axis == n - 1 && !now_pinned {
            continue;
        }
        if search_shell(
            system,
            g,
            eps,
            r2,
            shell,
            point,
            axis + 1,
            now_pinned,
            x,
            gx,
        ) {
            return true;
        }
    }
    false
}

/// One point of a success curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuccessPoint {
    pub eps: f64,
    pub successes: usize,
    pub total: usize,
    pub fraction: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

/// Runs the paired success experiment: the same matrices are reused across
/// every ε of the schedule, and the per-matrix trial results are reduced in
/// matrix order.
pub fn success_curve(exp: &TwistExperiment, f_exponent: f64) -> Result<Vec<SuccessPoint>> {
    let n = exp.system.num_vars();
    let matrices: Vec<UnimodularMatrix> = (0..exp.n_matrices)
        .map(|i| {
            sample_unimodular(
                n,
                crate::volume::derive_seed(exp.seed, i as u64),
                exp.norm_bound,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut curve = Vec::with_capacity(exp.eps_schedule.len());
    for &eps in &exp.eps_schedule {
        let outcomes: Vec<bool> = matrices
            .par_iter()
            .map(|g| uniform_approx_trial(&exp.system, g, eps, f_exponent, exp.kappa))
            .collect::<Result<Vec<_>>>()?;
        let successes = outcomes.iter().filter(|b| **b).count();
        let total = outcomes.len();
        let (wilson_lo, wilson_hi) = wilson_interval(successes, total);
        curve.push(SuccessPoint {
            eps,
            successes,
            total,
            fraction: successes as f64 / total as f64,
            wilson_lo,
            wilson_hi,
        });
    }
    Ok(curve)
}

/// Wilson 95% interval for `successes` out of `total`.
pub fn wilson_interval(successes: usize, total: usize) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054; // 97.5% normal quantile
    let nf = total as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// One row of a twisted band-count series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistedCountRow {
    pub t: f64,
    pub count: u64,
    /// Count divided by `T^{n-rd} (b^r |log(b/T^d)|^{m-1} - a^r |log(a/T^d)|^{m-1})`.
    pub normalized: f64,
}

/// Exact band counts along a T grid, normalized by the growth prediction;
/// stability of the normalized column is the test.
pub fn twisted_count_series(
    system: &FormSystem,
    g: &UnimodularMatrix,
    a: f64,
    b: f64,
    t_grid: &[f64],
    pair: &PolePair,
) -> Result<Vec<TwistedCountRow>> {
    if !(a >= 0.0) || a >= b {
        return Err(Error::input("band must satisfy 0 <= a < b"));
    }
    let n = system.num_vars();
    let d = system.degree();
    if pair.r >= n as f64 / d as f64 {
        return Err(Error::input("prediction requires r < n/d"));
    }
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let count = count_twisted(system, g, a, b, t)?;
        let prediction = t.powf(n as f64 - pair.r * d as f64)
            * (band_term(b, t, d, pair) - band_term(a, t, d, pair));
        let normalized = count as f64 / prediction;
        rows.push(TwistedCountRow {
            t,
            count,
            normalized,
        });
    }
    Ok(rows)
}

fn band_term(v: f64, t: f64, d: u32, pair: &PolePair) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    v.powf(pair.r) * (v / t.powi(d as i32)).ln().abs().powi(pair.m as i32 - 1)
}
