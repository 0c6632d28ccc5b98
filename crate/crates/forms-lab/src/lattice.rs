//! Exact integer-point counting for sublevel inequalities and twisted bands.
//!
//! Enumeration walks the integer points of the bounding box of the dilated
//! body slab by slab along the last coordinate; slabs are the unit of
//! parallel work and partial counts are reduced in slab order, so results do
//! not depend on the thread count. All counters are checked 64-bit.

use rayon::prelude::*;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::forms::{FormSystem, UnimodularMatrix};

/// Parameters of one exact counting run.
#[derive(Debug, Clone)]
pub struct CountRequest {
    pub system: FormSystem,
    pub domain: Domain,
    pub t: f64,
    pub alpha: f64,
    pub threads: usize,
}

impl CountRequest {
    pub fn new(system: FormSystem, domain: Domain, t: f64, alpha: f64) -> Result<Self> {
        if domain.dim() != system.num_vars() {
            return Err(Error::Dimension {
                expected: system.num_vars(),
                got: domain.dim(),
            });
        }
        if !(t >= 1.0 && t.is_finite()) {
            return Err(Error::input("dilation parameter T must be at least 1"));
        }
        Ok(CountRequest {
            system,
            domain,
            t,
            alpha,
            threads: 0, // 0 = rayon default
        })
    }

    pub fn with_threads(mut self, threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::input("thread count must be positive"));
        }
        self.threads = threads;
        Ok(self)
    }
}

/// `T^e` computed via `powi`/`sqrt` when `e` is a small nonnegative integer
/// or half-integer, so that integer-valued thresholds are not lost to
/// `powf` rounding.
pub fn power_threshold(t: f64, e: f64) -> f64 {
    if (0.0..=64.0).contains(&e) {
        if e.fract() == 0.0 {
            return t.powi(e as i32);
        }
        if e.fract() == 0.5 {
            return t.powi(e.floor() as i32) * t.sqrt();
        }
    }
    t.powf(e)
}

/// Exact count of `m` in `Z^n` with `m ∈ T·K` and `‖F(m)‖ <= T^{d-alpha}`.
pub fn count_inequality(req: &CountRequest) -> Result<u64> {
    let threshold = power_threshold(req.t, req.system.degree() as f64 - req.alpha);
    let dilated = req.domain.dilate(req.t)?;
    let system = req.system.clone();
    let run = move || {
        count_points(&dilated.bounding_box(), |m| {
            dilated.contains_unchecked(m) && system.norm_unchecked(m) <= threshold
        })
    };
    with_thread_cap(req.threads, run)
}

/// Exact count of `m` in `Z^n ∩ B_n(T)` with `a < ‖F(g·m)‖ <= b`.
pub fn count_twisted(
    system: &FormSystem,
    g: &UnimodularMatrix,
    a: f64,
    b: f64,
    t: f64,
) -> Result<u64> {
    if a >= b {
        return Err(Error::input(format!(
            "band bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    if !(t >= 1.0 && t.is_finite()) {
        return Err(Error::input("T must be at least 1"));
    }
    let n = system.num_vars();
    if g.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: g.dim(),
        });
    }
    if n > 16 {
        return Err(Error::input(
            "twisted counting supports at most 16 variables",
        ));
    }
    let ball = Domain::ball(n, t)?;
    let bb = ball.bounding_box();
    let system = system.clone();
    let g = g.clone();
    count_points(&bb, move |m| {
        if m.iter().map(|x| x * x).sum::<f64>() > t * t {
            return false;
        }
        let mut scratch = [0.0f64; 16];
        let v = system.norm_twisted_unchecked(&g, m, &mut scratch[..n]);
        a < v && v <= b
    })
}

/// Shared enumeration core: counts integer points of the closed box that
/// satisfy the predicate, slab-parallel over the last coordinate.
fn count_points<P>(bounding_box: &[[f64; 2]], pred: P) -> Result<u64>
where
    P: Fn(&[f64]) -> bool + Sync + Send,
{
    let n = bounding_box.len();
    let ranges: Vec<(i64, i64)> = bounding_box
        .iter()
        .map(|[lo, hi]| (lo.ceil() as i64, hi.floor() as i64))
        .collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Ok(0);
    }
    let (zlo, zhi) = ranges[n - 1];
    let slabs: Vec<i64> = (zlo..=zhi).collect();
    let partials: Vec<Result<u64>> = slabs
        .par_iter()
        .map(|&z| {
            let mut count: u64 = 0;
            let mut point = vec![0.0f64; n];
            point[n - 1] = z as f64;
            if n == 1 {
                if pred(&point) {
                    count = 1;
                }
                return Ok(count);
            }
            // odometer over the first n-1 coordinates
            let mut idx: Vec<i64> = ranges[..n - 1].iter().map(|(lo, _)| *lo).collect();
            'outer: loop {
                for (p, &i) in point.iter_mut().zip(&idx) {
                    *p = i as f64;
                }
                if pred(&point) {
                    count = count
                        .checked_add(1)
                        .ok_or(Error::Overflow("lattice point count"))?;
                }
                let mut axis = 0;
                loop {
                    idx[axis] += 1;
                    if idx[axis] <= ranges[axis].1 {
                        break;
                    }
                    idx[axis] = ranges[axis].0;
                    axis += 1;
                    if axis == n - 1 {
                        break 'outer;
                    }
                }
            }
            Ok(count)
        })
        .collect();
    // fixed slab-order reduction
    let mut total: u64 = 0;
    for p in partials {
        total = total
            .checked_add(p?)
            .ok_or(Error::Overflow("lattice point count"))?;
    }
    Ok(total)
}

/// Runs `f` under a rayon pool capped at `threads` (0 = default pool).
pub fn with_thread_cap<T, F>(threads: usize, f: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    if threads == 0 {
        f()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool construction");
        pool.install(f)
    }
}
