//! Monte Carlo volumes of sublevel sets, hyperplane slice volumes, and the
//! flatness profile.
//!
//! Sampling is plain indicator Monte Carlo with a counter-based generator:
//! every batch of points draws from a ChaCha stream keyed by (seed, batch
//! index), so estimates are bit-identical under any parallel schedule and
//! the standard error is the honest binomial one.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{rotation_to, Domain};
use crate::error::{Error, Result};
use crate::forms::FormSystem;
use crate::lattice::power_threshold;

const BATCH: u64 = 1 << 16;

/// Minimum sample count accepted by the estimators.
pub const MIN_SAMPLES: u64 = 1_000;

/// A Monte Carlo estimate with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    fn from_hits(hits: u64, n_samples: u64, reference_volume: f64, seed: u64) -> Self {
        let n = n_samples as f64;
        let p = hits as f64 / n;
        // sample standard deviation of the indicator, over sqrt(n), times
        // the reference volume
        let sd = (p * (1.0 - p) * n / (n - 1.0)).sqrt();
        MCEstimate {
            value: reference_volume * p,
            stderr: reference_volume * sd / n.sqrt(),
            n_samples,
            seed,
        }
    }
}

/// SplitMix64 step, used to derive independent sub-seeds from a master seed
/// and an experiment-local tag.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counts hits of `pred` over `n_samples` uniform points of the box,
/// batch-parallel, deterministic in (seed, n_samples) only. Each batch gets
/// fresh scratch state from `init` so predicates can reuse buffers.
fn mc_hits<S, I, P>(box_ranges: &[[f64; 2]], n_samples: u64, seed: u64, init: I, pred: P) -> u64
where
    S: Send,
    I: Fn() -> S + Sync,
    P: Fn(&mut S, &[f64]) -> bool + Sync,
{
    let n_batches = n_samples.div_ceil(BATCH);
    let dims = box_ranges.len();
    (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch);
            let lo = batch * BATCH;
            let hi = (lo + BATCH).min(n_samples);
            let mut x = vec![0.0f64; dims];
            let mut state = init();
            let mut hits: u64 = 0;
            for _ in lo..hi {
                for (xi, [a, b]) in x.iter_mut().zip(box_ranges) {
                    let u: f64 = rng.random();
                    *xi = a + u * (b - a);
                }
                if pred(&mut state, &x) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

/// Volume of `{x ∈ T·K : ‖F(x)‖ <= threshold}` by indicator Monte Carlo
/// over the bounding box of `T·K`.
pub fn volume_sublevel_threshold(
    system: &FormSystem,
    domain: &Domain,
    t: f64,
    threshold: f64,
    n_samples: u64,
    seed: u64,
) -> Result<MCEstimate> {
    if domain.dim() != system.num_vars() {
        return Err(Error::Dimension {
            expected: system.num_vars(),
            got: domain.dim(),
        });
    }
    if n_samples < MIN_SAMPLES {
        return Err(Error::input(format!(
            "need at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    let dilated = domain.dilate(t)?;
    let bb = dilated.bounding_box();
    let box_vol: f64 = bb.iter().map(|[a, b]| b - a).product();
    if !(box_vol > 0.0) {
        return Err(Error::input("zero-volume bounding box"));
    }
    let hits = mc_hits(
        &bb,
        n_samples,
        seed,
        || (),
        |_, x| dilated.contains_unchecked(x) && system.norm_unchecked(x) <= threshold,
    );
    Ok(MCEstimate::from_hits(hits, n_samples, box_vol, seed))
}

/// Volume of the sublevel set with the power-law threshold `T^{d-alpha}`.
pub fn volume_sublevel(
    system: &FormSystem,
    domain: &Domain,
    t: f64,
    alpha: f64,
    n_samples: u64,
    seed: u64,
) -> Result<MCEstimate> {
    let threshold = power_threshold(t, system.degree() as f64 - alpha);
    volume_sublevel_threshold(system, domain, t, threshold, n_samples, seed)
}

/// (n-1)-dimensional volume of `{x ∈ K ∩ v⊥(σ) : ‖F(x)‖ <= ε}`, sampled in
/// the rotated frame `x = R_v (y, σ)`.
pub fn slice_volume(
    system: &FormSystem,
    domain: &Domain,
    v: &[f64],
    sigma: f64,
    eps: f64,
    n_samples: u64,
    seed: u64,
) -> Result<MCEstimate> {
    let n = domain.dim();
    if system.num_vars() != n {
        return Err(Error::Dimension {
            expected: n,
            got: system.num_vars(),
        });
    }
    if n < 2 {
        return Err(Error::input("slicing needs dimension at least 2"));
    }
    if !(eps > 0.0) {
        return Err(Error::input("slice tolerance eps must be positive"));
    }
    if n_samples < MIN_SAMPLES {
        return Err(Error::input(format!(
            "need at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    let rotation = rotation_to(v)?;
    // y_i ranges over the support of K in direction R e_i
    let mut ranges = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let col: Vec<f64> = rotation.matrix().column(i).iter().copied().collect();
        ranges.push(domain.support_interval(&col)?);
    }
    let box_vol: f64 = ranges.iter().map(|[a, b]| b - a).product();
    if !(box_vol > 0.0) {
        return Err(Error::input("zero-volume slice sampling box"));
    }
    let hits = mc_hits(
        &ranges,
        n_samples,
        seed,
        || (vec![0.0f64; n], vec![0.0f64; n]),
        |(lifted, x), y| {
            lifted[..n - 1].copy_from_slice(y);
            lifted[n - 1] = sigma;
            rotation.apply_into(lifted, x);
            domain.contains_unchecked(x) && system.norm_unchecked(x) <= eps
        },
    );
    Ok(MCEstimate::from_hits(hits, n_samples, box_vol, seed))
}

/// The flatness profile: for each ε, the largest sampled slice volume.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatnessProfile {
    pub eps_grid: Vec<f64>,
    pub m_values: Vec<MCEstimate>,
    pub directions_sampled: usize,
    pub offsets_sampled: usize,
}

/// Geometric ε-grid with ratio 1/2 starting at `eps0`.
pub fn geometric_eps_grid(eps0: f64, points: usize) -> Vec<f64> {
    (0..points).map(|k| eps0 / (1u64 << k) as f64).collect()
}

/// Estimates `M(ε) = sup_{v,σ} μ(v, σ, ε)` over sampled directions and
/// offsets. The 2n signed coordinate directions are always included, and
/// the offset grid always contains σ = 0 when the support range allows it,
/// so sections along coordinate hyperplanes through the origin are never
/// missed.
pub fn flatness_profile(
    system: &FormSystem,
    domain: &Domain,
    eps_grid: &[f64],
    n_directions: usize,
    n_offsets: usize,
    n_samples: u64,
    seed: u64,
) -> Result<FlatnessProfile> {
    let n = domain.dim();
    if eps_grid.is_empty() {
        return Err(Error::input("empty eps grid"));
    }
    if !eps_grid.windows(2).all(|w| w[0] > w[1]) || !eps_grid.iter().all(|e| *e > 0.0) {
        return Err(Error::input(
            "eps grid must be positive and strictly decreasing",
        ));
    }
    if n_offsets == 0 {
        return Err(Error::input("need at least one offset"));
    }

    let mut directions: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = sign;
            directions.push(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xD1CE));
    for _ in 0..n_directions {
        directions.push(random_unit_vector(&mut rng, n));
    }

    let mut slices: Vec<(usize, Vec<f64>, f64)> = Vec::new(); // (dir idx, v, sigma)
    for (di, v) in directions.iter().enumerate() {
        let [lo, hi] = domain.support_interval(v)?;
        let mut offsets: Vec<f64> = if n_offsets == 1 {
            vec![0.5 * (lo + hi)]
        } else {
            (0..n_offsets)
                .map(|j| lo + (hi - lo) * j as f64 / (n_offsets - 1) as f64)
                .collect()
        };
        if lo <= 0.0 && 0.0 <= hi && !offsets.contains(&0.0) {
            offsets.push(0.0);
        }
        for sigma in offsets {
            slices.push((di, v.clone(), sigma));
        }
    }

    let mut m_values = Vec::with_capacity(eps_grid.len());
    for (ei, &eps) in eps_grid.iter().enumerate() {
        let estimates: Vec<MCEstimate> = slices
            .par_iter()
            .enumerate()
            .map(|(si, (_, v, sigma))| {
                let tag = (ei as u64) << 32 | si as u64;
                slice_volume(
                    system,
                    domain,
                    v,
                    *sigma,
                    eps,
                    n_samples,
                    derive_seed(seed, tag),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let best = estimates
            .into_iter()
            .reduce(|a, b| if b.value > a.value { b } else { a })
            .expect("at least one slice");
        m_values.push(best);
    }
    Ok(FlatnessProfile {
        eps_grid: eps_grid.to_vec(),
        m_values,
        directions_sampled: directions.len(),
        offsets_sampled: n_offsets,
    })
}

fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    use rand_distr::StandardNormal;
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Fitted flatness exponent with diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatnessExponent {
    /// Least-squares slope of log M against log ε over the small-ε half of
    /// the profile (a surrogate for the liminf).
    pub q_hat: f64,
    /// 95% half-width from the regression standard error of the slope.
    pub halfwidth: f64,
    /// Pointwise ratio log M(ε_min) / log ε_min at the smallest ε.
    pub pointwise_ratio: f64,
    /// Set when slope and pointwise ratio disagree by more than 0.1,
    /// indicating the profile may oscillate rather than follow a power law.
    pub oscillation_flag: bool,
}

/// Fits the flatness exponent `q` from a profile.
pub fn flatness_exponent(profile: &FlatnessProfile) -> Result<FlatnessExponent> {
    if profile.eps_grid.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "flatness fit needs at least 4 grid points, got {}",
            profile.eps_grid.len()
        )));
    }
    let survivors: Vec<(f64, f64)> = profile
        .eps_grid
        .iter()
        .zip(&profile.m_values)
        .filter(|(_, m)| m.value > 0.0)
        .map(|(e, m)| (*e, m.value))
        .collect();
    if survivors.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "only {} nonzero profile points",
            survivors.len()
        )));
    }
    // lower half of the grid: the smallest-ε points (grid is decreasing)
    let window = survivors.len().div_ceil(2).max(4);
    let start = survivors.len() - window.min(survivors.len());
    let pts: Vec<(f64, f64)> = survivors[start..]
        .iter()
        .map(|(e, m)| (e.ln(), m.ln()))
        .collect();
    let (slope, _intercept, se) = ols_with_se(&pts);
    let (eps_min, m_min) = *survivors.last().expect("nonempty");
    let pointwise = if eps_min.ln() != 0.0 {
        m_min.ln() / eps_min.ln()
    } else {
        f64::NAN
    };
    let oscillation_flag = pointwise.is_finite() && (slope - pointwise).abs() > 0.1;
    Ok(FlatnessExponent {
        q_hat: slope,
        halfwidth: 1.96 * se,
        pointwise_ratio: pointwise,
        oscillation_flag,
    })
}

/// OLS slope, intercept and the slope's standard error.
pub(crate) fn ols_with_se(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let k = pts.len() as f64;
    let mean_x = pts.iter().map(|(x, _)| x).sum::<f64>() / k;
    let mean_y = pts.iter().map(|(_, y)| y).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = pts
        .iter()
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let dof = (k - 2.0).max(1.0);
    let se = (sse / dof / sxx).sqrt();
    (slope, intercept, se)
}
