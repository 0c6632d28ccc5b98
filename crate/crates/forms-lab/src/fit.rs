//! Recovery of the growth pair (r, m) and leading constant from volume or
//! count series, plus the count-versus-volume comparison table.
//!
//! The growth model is `V(T) = γ · T^n · c(T)^r · |log c(T)|^(m-1)` with
//! `c(T) = T^(-α)`. For each candidate log order m the model is linear in
//! log T after subtracting `(m-1)·log(α·log T)`; the candidate with the
//! smallest RMS log residual wins, ties to the smaller m.

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::forms::FormSystem;
use crate::lattice::{count_inequality, CountRequest};
use crate::volume::{ols_with_se, volume_sublevel, MCEstimate};

/// The pair (r, m): growth exponent and logarithm order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolePair {
    pub r: f64,
    pub m: u32,
}

impl PolePair {
    pub fn new(r: f64, m: u32) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(Error::input("growth exponent r must be nonnegative"));
        }
        if m < 1 {
            return Err(Error::input("log order m must be at least 1"));
        }
        Ok(PolePair { r, m })
    }
}

/// The total order on pairs induced by the asymptotic growth of
/// `x^(-a) (log x)^b`: `(a,b) ≼ (c,d)` iff `a < c`, or `a = c` and `b >= d`.
pub fn order_le(p1: &PolePair, p2: &PolePair) -> bool {
    p1.r < p2.r || (p1.r == p2.r && p1.m >= p2.m)
}

/// Result of a growth fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub gamma: f64,
    pub r: f64,
    pub m: u32,
    /// RMS of the log-model error over the fit window.
    pub residual: f64,
    /// (T_min, T_max) actually used after rejection and window trimming.
    pub window: (f64, f64),
    #[serde(skip)]
    n: usize,
    #[serde(skip)]
    d: u32,
}

impl FitResult {
    pub fn pair(&self) -> PolePair {
        PolePair {
            r: self.r,
            m: self.m,
        }
    }

    /// Whether the fitted exponent respects the a-priori range (0, n/d],
    /// with slack 0.1 for estimation error.
    pub fn pole_range_ok(&self) -> bool {
        self.r <= self.n as f64 / self.d as f64 + 0.1
    }
}

/// Fits γ, r and the log order m from positive samples `(T, value)`.
///
/// Samples with nonpositive value or `T <= e^(1/α)` are rejected; at least
/// five must survive. The smallest 20% of the surviving T are dropped to
/// reduce lower-order contamination before fitting.
pub fn fit_volume_growth(
    samples: &[(f64, f64)],
    n: usize,
    d: u32,
    alpha: f64,
    m_candidates: &[u32],
) -> Result<FitResult> {
    let _ = d; // degree enters only through the caller-side range check
    if !(alpha > 0.0) {
        return Err(Error::input("alpha must be positive"));
    }
    if samples.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "need at least 5 samples, got {}",
            samples.len()
        )));
    }
    if m_candidates.is_empty() || m_candidates.iter().any(|m| *m < 1) {
        return Err(Error::input(
            "m candidates must be a nonempty set of positive integers",
        ));
    }
    let t_min_valid = (1.0 / alpha).exp();
    let mut pts: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|(t, v)| *v > 0.0 && *t > t_min_valid)
        .collect();
    if pts.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "only {} samples survive rejection (positive value, T > e^(1/alpha))",
            pts.len()
        )));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let drop = pts.len() / 5;
    let pts = &pts[drop..];

    let mut best: Option<FitResult> = None;
    let mut ms: Vec<u32> = m_candidates.to_vec();
    ms.sort_unstable();
    ms.dedup();
    for &m in &ms {
        let logpts: Vec<(f64, f64)> = pts
            .iter()
            .map(|(t, v)| {
                let x = t.ln();
                let y = v.ln() - (m as f64 - 1.0) * (alpha * x).ln();
                (x, y)
            })
            .collect();
        let (slope, intercept, _se) = ols_with_se(&logpts);
        let residual = (logpts
            .iter()
            .map(|(x, y)| {
                let e = y - (slope * x + intercept);
                e * e
            })
            .sum::<f64>()
            / logpts.len() as f64)
            .sqrt();
        let candidate = FitResult {
            gamma: intercept.exp(),
            r: (n as f64 - slope) / alpha,
            m,
            residual,
            window: (pts[0].0, pts[pts.len() - 1].0),
        };
        let better = match &best {
            None => true,
            Some(b) => residual < b.residual,
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// One row of the count-versus-volume comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountVolumeRow {
    pub t: f64,
    pub count: u64,
    pub volume: MCEstimate,
    pub ratio: f64,
}

/// The comparison table with its convergence summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountVolumeTable {
    pub rows: Vec<CountVolumeRow>,
    /// max |N/V - 1| over the top half of the grid; absent for a single-T
    /// grid, where no convergence verdict is possible.
    pub max_deviation: Option<f64>,
}

/// Exact count, Monte Carlo volume and their ratio per T, for 0 < α < 1.
pub fn compare_count_volume(
    system: &FormSystem,
    domain: &Domain,
    alpha: f64,
    t_grid: &[f64],
    n_samples: u64,
    seed: u64,
) -> Result<CountVolumeTable> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::input("count-volume comparison needs 0 < alpha < 1"));
    }
    if t_grid.is_empty() {
        return Err(Error::input("empty T grid"));
    }
    let mut ts = t_grid.to_vec();
    ts.sort_by(f64::total_cmp);
    let mut rows = Vec::with_capacity(ts.len());
    for (i, &t) in ts.iter().enumerate() {
        let req = CountRequest::new(system.clone(), domain.clone(), t, alpha)?;
        let count = count_inequality(&req)?;
        let volume = volume_sublevel(
            system,
            domain,
            t,
            alpha,
            n_samples,
            crate::volume::derive_seed(seed, i as u64),
        )?;
        let ratio = count as f64 / volume.value;
        rows.push(CountVolumeRow {
            t,
            count,
            volume,
            ratio,
        });
    }
    let max_deviation = if rows.len() >= 2 {
        let top = rows.len().div_ceil(2);
        Some(
            rows[rows.len() - top..]
                .iter()
                .map(|r| (r.ratio - 1.0).abs())
                .fold(0.0, f64::max),
        )
    } else {
        None
    };
    Ok(CountVolumeTable {
        rows,
        max_deviation,
    })
}
