//! Poisson targets, total variation, empirical count laws and the
//! two-condition Poisson process checker.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::point_process::IntervalUnion;
use crate::rng::CounterRng;

const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// `e^{-lambda} lambda^j / j!`, evaluated in log space.
pub fn poisson_pmf(lambda: f64, j: u64) -> Result<f64> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(domain(format!("Poisson mean must be finite and >= 0, got {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(if j == 0 { 1.0 } else { 0.0 });
    }
    let jf = j as f64;
    Ok(libm::exp(-lambda + jf * libm::log(lambda) - libm::lgamma(jf + 1.0)))
}

/// Upper bound on `P(X > j)` for `X ~ Poisson(lambda)`, valid once `j + 2 > lambda`.
pub fn poisson_tail_bound(lambda: f64, j: u64) -> Result<f64> {
    let next = poisson_pmf(lambda, j + 1)?;
    let ratio = lambda / (j as f64 + 2.0);
    Ok(if ratio < 1.0 { next / (1.0 - ratio) } else { 1.0 })
}

/// `e^{-lambda} sum_j h(j) lambda^j / j!`, truncated where the tail mass drops
/// below `tail_tol`, so the absolute error is below `tail_tol` when `|h| <= 1`.
pub fn poisson_avg(lambda: f64, h: impl Fn(u64) -> f64, tail_tol: f64) -> Result<f64> {
    if !(tail_tol > 0.0) {
        return Err(domain("tail tolerance must be positive"));
    }
    let mut sum = 0.0;
    let mut j = 0u64;
    loop {
        let hj = h(j);
        if !(hj.abs() <= 1.0) {
            return Err(domain(format!("test function exceeds 1 in modulus at j = {j}")));
        }
        sum += hj * poisson_pmf(lambda, j)?;
        if (j as f64) + 2.0 > lambda && poisson_tail_bound(lambda, j)? < tail_tol {
            return Ok(sum);
        }
        j += 1;
    }
}

fn check_normalized(p: &[f64]) -> Result<()> {
    let total: f64 = p.iter().sum();
    if p.iter().any(|&x| !(x >= 0.0)) || (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(domain(format!("distribution is not normalized (total {total})")));
    }
    Ok(())
}

/// Set-supremum total variation `(1/2) sum_j |P_j - Q_j|`; missing entries are zero.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    check_normalized(p)?;
    check_normalized(q)?;
    let n = p.len().max(q.len());
    let mut acc = 0.0;
    for j in 0..n {
        let a = p.get(j).copied().unwrap_or(0.0);
        let b = q.get(j).copied().unwrap_or(0.0);
        acc += (a - b).abs();
    }
    Ok((0.5 * acc).min(1.0))
}

/// Both conventions of the total variation distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvPair {
    /// `sup_A |P(A) - Q(A)|`.
    pub set: f64,
    /// `sup_{|h| <= 1} |E_P h - E_Q h|`, twice the set convention.
    pub functional: f64,
}

impl TvPair {
    pub fn from_set(set: f64) -> Self {
        TvPair { set, functional: 2.0 * set }
    }
}

/// Support cut for histograms: `10 + 10 ceil(lambda)`.
pub fn histogram_cut(lambda: f64) -> u64 {
    10 + 10 * libm::ceil(lambda.max(0.0)) as u64
}

/// Poisson probabilities on `0..=j_max` plus the folded tail as the last entry.
pub fn poisson_binned(lambda: f64, j_max: u64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(j_max as usize + 2);
    let mut acc = 0.0;
    for j in 0..=j_max {
        let p = poisson_pmf(lambda, j)?;
        acc += p;
        out.push(p);
    }
    out.push((1.0 - acc).max(0.0));
    Ok(out)
}

/// Empirical law of a batch of counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    counts_histogram: BTreeMap<u64, u64>,
    n_samples: u64,
    mean: f64,
    variance: f64,
    truncated_fraction: f64,
}

impl EmpiricalDistribution {
    /// `truncated` flags samples whose count used an incomplete prefix.
    pub fn from_counts(counts: &[u64], truncated: &[bool]) -> Result<Self> {
        if counts.len() != truncated.len() {
            return Err(Error::Internal("count and truncation vectors differ in length".into()));
        }
        let mut hist = BTreeMap::new();
        for &c in counts {
            *hist.entry(c).or_insert(0u64) += 1;
        }
        Ok(Self::from_histogram(hist, truncated.iter().filter(|&&t| t).count() as u64))
    }

    pub fn from_histogram(counts_histogram: BTreeMap<u64, u64>, truncated: u64) -> Self {
        let n: u64 = counts_histogram.values().sum();
        let (mean, variance) = if n == 0 {
            (0.0, 0.0)
        } else {
            let nf = n as f64;
            let mean = counts_histogram.iter().map(|(&j, &f)| j as f64 * f as f64).sum::<f64>() / nf;
            let var = counts_histogram
                .iter()
                .map(|(&j, &f)| {
                    let d = j as f64 - mean;
                    d * d * f as f64
                })
                .sum::<f64>()
                / nf;
            (mean, var)
        };
        let truncated_fraction = if n == 0 { 0.0 } else { truncated as f64 / n as f64 };
        EmpiricalDistribution { counts_histogram, n_samples: n, mean, variance, truncated_fraction }
    }

    pub fn histogram(&self) -> &BTreeMap<u64, u64> {
        &self.counts_histogram
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population variance of the counts.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn truncated_fraction(&self) -> f64 {
        self.truncated_fraction
    }

    pub fn frequency(&self, j: u64) -> u64 {
        self.counts_histogram.get(&j).copied().unwrap_or(0)
    }

    pub fn prob(&self, j: u64) -> f64 {
        if self.n_samples == 0 {
            0.0
        } else {
            self.frequency(j) as f64 / self.n_samples as f64
        }
    }

    /// Probabilities on `0..=j_max` plus the folded tail as the last entry.
    pub fn binned(&self, j_max: u64) -> Vec<f64> {
        let n = self.n_samples.max(1) as f64;
        let mut out = alloc::vec![0.0; j_max as usize + 2];
        for (&j, &f) in &self.counts_histogram {
            let slot = if j > j_max { j_max as usize + 1 } else { j as usize };
            out[slot] += f as f64 / n;
        }
        out
    }

    /// Total variation against `Poisson(lambda)` on the cut support.
    pub fn tv_to_poisson(&self, lambda: f64) -> Result<TvPair> {
        if self.n_samples == 0 {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let j_max = histogram_cut(lambda).max(self.counts_histogram.keys().next_back().copied().unwrap_or(0));
        let set = tv_distance(&self.binned(j_max), &poisson_binned(lambda, j_max)?)?;
        Ok(TvPair::from_set(set))
    }

    /// Total variation against another empirical law.
    pub fn tv_to(&self, other: &EmpiricalDistribution) -> Result<TvPair> {
        let top = |d: &EmpiricalDistribution| d.counts_histogram.keys().next_back().copied().unwrap_or(0);
        let j_max = top(self).max(top(other));
        Ok(TvPair::from_set(tv_distance(&self.binned(j_max), &other.binned(j_max))?))
    }

    /// Rows for a histogram table against `Poisson(lambda)`, cut at
    /// [`histogram_cut`]; the final row (`overflow = true`) folds `j > j_max`.
    pub fn histogram_rows(&self, lambda: f64) -> Result<Vec<HistogramRow>> {
        let j_max = histogram_cut(lambda);
        let emp = self.binned(j_max);
        let poi = poisson_binned(lambda, j_max)?;
        let mut rows = Vec::with_capacity(emp.len());
        for j in 0..=j_max + 1 {
            let frequency = if j <= j_max {
                self.frequency(j)
            } else {
                self.counts_histogram.range(j_max + 1..).map(|(_, &f)| f).sum()
            };
            let (e, p) = (emp[j as usize], poi[j as usize]);
            rows.push(HistogramRow {
                j,
                overflow: j > j_max,
                frequency,
                empirical_prob: e,
                poisson_prob: p,
                abs_diff: (e - p).abs(),
            });
        }
        Ok(rows)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramRow {
    pub j: u64,
    pub overflow: bool,
    pub frequency: u64,
    pub empirical_prob: f64,
    pub poisson_prob: f64,
    pub abs_diff: f64,
}

/// Minimum batch size for the two-condition checker.
pub const KALLENBERG_MIN_SAMPLES: usize = 100;

/// Mean-measure and void-probability conditions for one test set.
#[derive(Debug, Clone, PartialEq)]
pub struct KallenbergEntry {
    pub length: f64,
    pub m: usize,
    pub n_samples: usize,
    pub mean: f64,
    pub mean_se: f64,
    pub mean_threshold: f64,
    pub mean_pass: bool,
    pub void_prob: f64,
    pub void_target: f64,
    pub void_se: f64,
    pub void_pass: bool,
}

impl KallenbergEntry {
    pub fn pass(&self) -> bool {
        self.mean_pass && self.void_pass
    }
}

/// Checks, per test set, that the sample mean is at most
/// `|S| + 3 SE + m * cylinder_bound` and that the empirical probability of a
/// zero count is within 3 binomial standard errors of `e^{-|S|}`.
/// `cylinder_bound` is `K rho^k` for the run's block length.
pub fn kallenberg_check(
    samples: &[&[u64]],
    s_list: &[IntervalUnion],
    cylinder_bound: f64,
) -> Result<Vec<KallenbergEntry>> {
    if samples.len() != s_list.len() {
        return Err(domain("one sample batch per test set is required"));
    }
    let mut out = Vec::with_capacity(samples.len());
    for (batch, s) in samples.iter().zip(s_list) {
        if batch.len() < KALLENBERG_MIN_SAMPLES {
            return Err(Error::InsufficientData { needed: KALLENBERG_MIN_SAMPLES, got: batch.len() });
        }
        let n = batch.len() as f64;
        let mean = batch.iter().map(|&c| c as f64).sum::<f64>() / n;
        let var = batch.iter().map(|&c| (c as f64 - mean) * (c as f64 - mean)).sum::<f64>() / (n - 1.0);
        let mean_se = libm::sqrt(var / n);
        let length = s.length_f64();
        let mean_threshold = length + 3.0 * mean_se + s.m() as f64 * cylinder_bound;
        let void_prob = batch.iter().filter(|&&c| c == 0).count() as f64 / n;
        let void_target = libm::exp(-length);
        let void_se = libm::sqrt(void_target * (1.0 - void_target) / n);
        out.push(KallenbergEntry {
            length,
            m: s.m(),
            n_samples: batch.len(),
            mean,
            mean_se,
            mean_threshold,
            mean_pass: mean <= mean_threshold,
            void_prob,
            void_target,
            void_se,
            void_pass: (void_prob - void_target).abs() <= 3.0 * void_se,
        });
    }
    Ok(out)
}

/// `min(lambda^{-1/2}, 1) (variance - lambda + (lambda + 1)^2 ln(n) / n)`,
/// the Chen-Stein bracket without its universal constant.
pub fn chen_stein_bracket(lambda: f64, variance: f64, n: u64) -> Result<f64> {
    if n < 3 {
        return Err(domain("the bracket needs n >= 3"));
    }
    if !(lambda > 0.0) {
        return Err(domain("the bracket needs lambda > 0"));
    }
    let nf = n as f64;
    let lead = (1.0 / libm::sqrt(lambda)).min(1.0);
    Ok(lead * (variance - lambda + (lambda + 1.0) * (lambda + 1.0) * libm::log(nf) / nf))
}

/// Result of comparing two Poisson averages of the same test function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamShift {
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `|P(lambda, h) - P(t, h)|` against its bound `2 |lambda - t|`.
pub fn poisson_param_shift(lambda: f64, t: f64, h: impl Fn(u64) -> f64) -> Result<ParamShift> {
    const TOL: f64 = 1e-15;
    let a = poisson_avg(lambda, &h, TOL)?;
    let b = poisson_avg(t, &h, TOL)?;
    let value = (a - b).abs();
    let bound = 2.0 * (lambda - t).abs();
    Ok(ParamShift { value, bound, holds: value <= bound + 2.0 * TOL })
}

/// Draws from `Poisson(lambda)` by sequential inversion; intended for modest `lambda`.
pub fn sample_poisson(rng: &mut CounterRng, lambda: f64) -> Result<u64> {
    let u = rng.next_f64();
    let mut j = 0u64;
    let mut p = poisson_pmf(lambda, 0)?;
    let mut cdf = p;
    while u >= cdf {
        j += 1;
        p *= lambda / j as f64;
        cdf += p;
        if p == 0.0 && j as f64 > lambda {
            break;
        }
    }
    Ok(j)
}
