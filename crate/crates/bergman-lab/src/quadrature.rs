//! Monte Carlo integration over the supported domains, with optional
//! stratification on the first coordinate's radial quantile, batch-based
//! divergence detection, and exact volume formulas.
//!
//! Determinism contract: a fixed `QuadratureSpec` produces bit-identical
//! results. Every (stratum, batch) pair owns an independently seeded
//! substream and partial sums are merged in a fixed order, so the outcome
//! does not depend on the number of worker threads.

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{self, ComplexPoint, Domain};

/// Number of sample batches used for the running-estimate divergence check.
const NUM_BATCHES: usize = 10;

/// Batch-to-batch growth ratio beyond which the estimate is flagged divergent.
const GROWTH_RATIO: f64 = 1.05;

/// Fraction of non-finite draws beyond which no value is reported.
const NONFINITE_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    MonteCarlo,
    StratifiedMonteCarlo,
}

/// Fully deterministic description of one quadrature run.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub method: Method,
    pub samples: usize,
    pub seed: u64,
    /// Number of strata on the first coordinate's radial quantile
    /// (stratified method only).
    pub strata: usize,
}

impl QuadratureSpec {
    pub fn monte_carlo(samples: usize, seed: u64) -> Result<Self> {
        Self::new(Method::MonteCarlo, samples, seed, 1)
    }

    pub fn stratified(samples: usize, seed: u64, strata: usize) -> Result<Self> {
        Self::new(Method::StratifiedMonteCarlo, samples, seed, strata)
    }

    pub fn new(method: Method, samples: usize, seed: u64, strata: usize) -> Result<Self> {
        if samples < 1000 {
            return Err(Error::InvalidParameter(format!(
                "samples = {samples}: at least 1000 samples required for a reported result"
            )));
        }
        let strata = match method {
            Method::MonteCarlo => 1,
            Method::StratifiedMonteCarlo => strata,
        };
        if strata == 0 || strata > samples / 100 {
            return Err(Error::InvalidParameter(format!(
                "strata = {strata}: need 1 <= strata <= samples/100"
            )));
        }
        Ok(Self {
            method,
            samples,
            seed,
            strata,
        })
    }

    /// Same spec with a decorrelated seed; used when an independent
    /// measurement is required.
    pub fn reseeded(&self, salt: u64) -> Self {
        let mut spec = self.clone();
        spec.seed = splitmix64(self.seed ^ splitmix64(salt));
        spec
    }
}

/// Estimate of an integral over a domain, with its Monte Carlo standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult {
    pub value: Complex64,
    pub std_error: f64,
    pub samples_used: usize,
}

impl IntegralResult {
    /// Real part of the estimate; integrands of the form |f|^p land here.
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// Exact Lebesgue volume of the domain viewed in R^{2n}.
pub fn volume(domain: &Domain) -> f64 {
    let n = domain.dim();
    match domain {
        Domain::UnitBall { .. } => ball_volume(n),
        Domain::Polydisc { radii } => radii.iter().map(|r| PI * r * r).product(),
        Domain::Ellipsoid { semiaxes } => {
            ball_volume(n) * semiaxes.iter().map(|a| a * a).product::<f64>()
        }
    }
}

/// Volume of the unit ball of C^n: pi^n / n!.
fn ball_volume(n: usize) -> f64 {
    let mut v = 1.0;
    for k in 1..=n {
        v *= PI / k as f64;
    }
    v
}

/// Closed form of the polar integral over the disc of radius `r`:
/// int_0^{2pi} int_0^r rho^{-2 beta} rho d rho d theta = 2 pi r^{2-2beta} / (2-2beta).
pub fn radial_power_integral(r: f64, beta: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius {r} must be positive")));
    }
    if beta >= 1.0 {
        return Err(Error::NonIntegrable { beta });
    }
    Ok(2.0 * PI * r.powf(2.0 - 2.0 * beta) / (2.0 - 2.0 * beta))
}

/// Monte Carlo estimate of the Lebesgue integral of `f` over the domain.
///
/// The value is volume times the sample mean. Non-finite draws are excluded
/// from the sums; if they exceed 0.01% of all draws, or if the running
/// estimate grows monotonically with batch-to-batch ratio above 1.05, the
/// integral is flagged divergent and no value is reported.
pub fn integrate<F>(domain: &Domain, f: F, spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: Fn(&ComplexPoint) -> Complex64 + Sync,
{
    let tasks = plan_tasks(spec);
    let dim = domain.dim();

    let accs: Vec<TaskAcc> = tasks
        .par_iter()
        .map(|task| {
            let mut rng = ChaCha8Rng::seed_from_u64(task.seed);
            let mut point =
                ComplexPoint::from_coords_unchecked(vec![Complex64::new(0.0, 0.0); dim]);
            let mut acc = TaskAcc::default();
            for _ in 0..task.count {
                geometry::fill_interior(domain, &mut rng, task.u_range, point.coords_mut());
                let v = f(&point);
                if v.re.is_finite() && v.im.is_finite() {
                    acc.sum += v;
                    acc.sum_norm_sqr += v.norm_sqr();
                    acc.finite += 1;
                } else {
                    acc.nonfinite += 1;
                }
            }
            acc
        })
        .collect();

    reduce(spec, &tasks, &accs, volume(domain))
}

struct Task {
    stratum: usize,
    batch: usize,
    count: usize,
    u_range: (f64, f64),
    seed: u64,
}

/// One deterministic sampling pass: real integrand values stored in task
/// order, so several derived statistics can share the same draw.
pub(crate) struct RealSamplePass {
    pub values: Vec<f64>,
    /// (stratum, batch, index range into `values`).
    pub segments: Vec<(usize, usize, std::ops::Range<usize>)>,
    pub strata: usize,
}

pub(crate) fn real_sample_pass<F>(domain: &Domain, f: F, spec: &QuadratureSpec) -> RealSamplePass
where
    F: Fn(&ComplexPoint) -> f64 + Sync,
{
    let tasks = plan_tasks(spec);
    let dim = domain.dim();
    let chunks: Vec<Vec<f64>> = tasks
        .par_iter()
        .map(|task| {
            let mut rng = ChaCha8Rng::seed_from_u64(task.seed);
            let mut point =
                ComplexPoint::from_coords_unchecked(vec![Complex64::new(0.0, 0.0); dim]);
            let mut vals = Vec::with_capacity(task.count);
            for _ in 0..task.count {
                geometry::fill_interior(domain, &mut rng, task.u_range, point.coords_mut());
                vals.push(f(&point));
            }
            vals
        })
        .collect();
    let mut values = Vec::with_capacity(spec.samples);
    let mut segments = Vec::with_capacity(tasks.len());
    for (task, chunk) in tasks.iter().zip(chunks) {
        let start = values.len();
        values.extend(chunk);
        segments.push((task.stratum, task.batch, start..values.len()));
    }
    RealSamplePass {
        values,
        segments,
        strata: spec.strata,
    }
}

impl RealSamplePass {
    /// Stratification-weighted mean/std-error/divergence statistics of
    /// g(value) over the stored pass.
    pub(crate) fn statistics<G: Fn(f64) -> f64>(&self, g: G, vol: f64) -> PassStatistics {
        let s_total = self.strata;
        let w = 1.0 / s_total as f64;
        // Per (stratum, batch) partial sums, then the same reduction as
        // `integrate`.
        let mut sums = vec![[0.0f64; 2]; self.segments.len()];
        let mut counts = vec![[0usize; 2]; self.segments.len()];
        for (i, (_, _, range)) in self.segments.iter().enumerate() {
            for &v in &self.values[range.clone()] {
                let gv = g(v);
                if gv.is_finite() {
                    sums[i][0] += gv;
                    sums[i][1] += gv * gv;
                    counts[i][0] += 1;
                } else {
                    counts[i][1] += 1;
                }
            }
        }
        let mut cumulative = vec![0.0f64; NUM_BATCHES];
        for b_lim in 0..NUM_BATCHES {
            let mut est = 0.0;
            for s in 0..s_total {
                let mut sum = 0.0;
                let mut n = 0usize;
                for (i, (st, b, _)) in self.segments.iter().enumerate() {
                    if *st == s && *b <= b_lim {
                        sum += sums[i][0];
                        n += counts[i][0];
                    }
                }
                if n > 0 {
                    est += w * sum / n as f64;
                }
            }
            cumulative[b_lim] = (vol * est).abs();
        }
        let mut value = 0.0;
        let mut var_of_mean = 0.0;
        let mut finite = 0usize;
        let mut nonfinite = 0usize;
        for s in 0..s_total {
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            let mut n = 0usize;
            for (i, (st, _, _)) in self.segments.iter().enumerate() {
                if *st == s {
                    sum += sums[i][0];
                    sum_sq += sums[i][1];
                    n += counts[i][0];
                    nonfinite += counts[i][1];
                }
            }
            finite += n;
            if n > 0 {
                let mean = sum / n as f64;
                let var = (sum_sq / n as f64 - mean * mean).max(0.0);
                value += w * mean;
                var_of_mean += w * w * var / n as f64;
            }
        }
        let total = finite + nonfinite;
        PassStatistics {
            value: vol * value,
            std_error: vol * var_of_mean.sqrt(),
            growth_flag: grows_monotonically(&cumulative),
            nonfinite_excess: nonfinite as f64 > NONFINITE_FRACTION * total as f64,
        }
    }

    /// Probability-weighted dyadic shell fractions of the stored values:
    /// entry m estimates P(2^{-m-1} < value <= 2^{-m}), together with the raw
    /// hit count.
    pub(crate) fn dyadic_shell_fractions(&self, max_shell: usize) -> Vec<(f64, usize)> {
        let s_total = self.strata;
        let w = 1.0 / s_total as f64;
        let mut per_stratum_counts = vec![vec![0usize; max_shell + 1]; s_total];
        let mut per_stratum_n = vec![0usize; s_total];
        for (s, _, range) in &self.segments {
            per_stratum_n[*s] += range.len();
            for &v in &self.values[range.clone()] {
                if v > 0.0 && v <= 1.0 {
                    let m = (-v.log2()).floor() as usize;
                    if m <= max_shell {
                        per_stratum_counts[*s][m] += 1;
                    }
                }
            }
        }
        (0..=max_shell)
            .map(|m| {
                let mut frac = 0.0;
                let mut raw = 0usize;
                for s in 0..s_total {
                    if per_stratum_n[s] > 0 {
                        frac += w * per_stratum_counts[s][m] as f64 / per_stratum_n[s] as f64;
                        raw += per_stratum_counts[s][m];
                    }
                }
                (frac, raw)
            })
            .collect()
    }
}

/// Summary statistics of one derived quantity over a sample pass.
pub(crate) struct PassStatistics {
    pub value: f64,
    pub std_error: f64,
    pub growth_flag: bool,
    pub nonfinite_excess: bool,
}

#[derive(Default, Clone)]
struct TaskAcc {
    sum: Complex64,
    sum_norm_sqr: f64,
    finite: usize,
    nonfinite: usize,
}

fn plan_tasks(spec: &QuadratureSpec) -> Vec<Task> {
    let s_total = spec.strata;
    let mut tasks = Vec::with_capacity(s_total * NUM_BATCHES);
    for s in 0..s_total {
        let n_s = spec.samples / s_total + usize::from(s < spec.samples % s_total);
        let u_range = (s as f64 / s_total as f64, (s + 1) as f64 / s_total as f64);
        for b in 0..NUM_BATCHES {
            let count = n_s / NUM_BATCHES + usize::from(b < n_s % NUM_BATCHES);
            tasks.push(Task {
                stratum: s,
                batch: b,
                count,
                u_range,
                seed: splitmix64(spec.seed ^ splitmix64((s * NUM_BATCHES + b + 1) as u64)),
            });
        }
    }
    tasks
}

fn reduce(
    spec: &QuadratureSpec,
    tasks: &[Task],
    accs: &[TaskAcc],
    vol: f64,
) -> Result<IntegralResult> {
    let nonfinite: usize = accs.iter().map(|a| a.nonfinite).sum();
    if nonfinite as f64 > NONFINITE_FRACTION * spec.samples as f64 {
        return Err(Error::Divergent {
            reason: format!(
                "{nonfinite} of {} draws were non-finite (> {:.2}%)",
                spec.samples,
                100.0 * NONFINITE_FRACTION
            ),
        });
    }

    let s_total = spec.strata;
    let w = 1.0 / s_total as f64;

    // Running estimates over cumulative batches, stratification-weighted.
    let mut cumulative = vec![0.0f64; NUM_BATCHES];
    for b_lim in 0..NUM_BATCHES {
        let mut est = Complex64::new(0.0, 0.0);
        for s in 0..s_total {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut n = 0usize;
            for (t, a) in tasks.iter().zip(accs) {
                if t.stratum == s && t.batch <= b_lim {
                    sum += a.sum;
                    n += a.finite;
                }
            }
            if n > 0 {
                est += w * sum / n as f64;
            }
        }
        cumulative[b_lim] = (vol * est).norm();
    }
    if grows_monotonically(&cumulative) {
        return Err(Error::Divergent {
            reason: format!(
                "running estimate grew monotonically across {NUM_BATCHES} batches \
                 (ratios all > {GROWTH_RATIO}); magnitudes {cumulative:?}"
            ),
        });
    }

    let mut value = Complex64::new(0.0, 0.0);
    let mut var_of_mean = 0.0;
    let mut finite_total = 0usize;
    for s in 0..s_total {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum_norm_sqr = 0.0;
        let mut n = 0usize;
        for (t, a) in tasks.iter().zip(accs) {
            if t.stratum == s {
                sum += a.sum;
                sum_norm_sqr += a.sum_norm_sqr;
                n += a.finite;
            }
        }
        finite_total += n;
        if n == 0 {
            continue;
        }
        let mean = sum / n as f64;
        let var = (sum_norm_sqr / n as f64 - mean.norm_sqr()).max(0.0);
        value += w * mean;
        var_of_mean += w * w * var / n as f64;
    }

    Ok(IntegralResult {
        value: vol * value,
        std_error: vol * var_of_mean.sqrt(),
        samples_used: finite_total,
    })
}

/// The divergence heuristic: strict monotone growth with every consecutive
/// ratio above `GROWTH_RATIO`.
fn grows_monotonically(cumulative: &[f64]) -> bool {
    cumulative.windows(2).all(|w| {
        w[0].is_finite() && w[1].is_finite() && w[0] > 0.0 && w[1] > GROWTH_RATIO * w[0]
    })
}

/// SplitMix64 step; used to derive decorrelated substream seeds.
pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
