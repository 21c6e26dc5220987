//! Eta-mixing coefficients, the `Delta` matrix and its norm, Lipschitz
//! weights, concentration bounds and the functionals `phi_{k,S}` and
//! `phi_{k,j,S}`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::measures::{IidModel, MeasureModel, MixingProfile, SequenceGenerator, Symbol};
use crate::point_process::{count_occurrences, j_set, IndexSet, IntervalUnion};
use crate::rational::to_f64;
use crate::rng::derive_seed;
use crate::words::{enumerate_words, word_count, Word};

/// Iteration cap for [`delta_norm`].
pub const DELTA_NORM_MAX_ITERATIONS: usize = 100_000;
/// Largest `|Omega|^k` for which `phi_{k,j,S}` is computed by enumeration.
pub const PHI2_EXACT_GUARD: u64 = 1 << 16;
/// Minimum number of sampled words for `phi_{k,j,S}`.
pub const PHI2_MIN_SAMPLES: usize = 100;
/// Minimum number of replicas for a concentration experiment.
pub const CONCENTRATION_MIN_REPLICAS: usize = 200;

/// `eta_{ij}` for a stationary chain, stored by lag `m = j - i >= 1`.
/// Lags past the table decay geometrically with `tail_ratio`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaMatrix {
    lags: Vec<f64>,
    tail_ratio: f64,
}

impl EtaMatrix {
    pub fn from_lags(lags: Vec<f64>, tail_ratio: f64) -> Result<Self> {
        if lags.iter().any(|&e| !(0.0..=1.0).contains(&e)) {
            return Err(domain("eta coefficients must lie in [0, 1]"));
        }
        if !(0.0..1.0).contains(&tail_ratio) {
            return Err(domain("eta tail ratio must lie in [0, 1)"));
        }
        Ok(EtaMatrix { lags, tail_ratio })
    }

    pub fn zero() -> Self {
        EtaMatrix { lags: Vec::new(), tail_ratio: 0.0 }
    }

    pub fn lags(&self) -> &[f64] {
        &self.lags
    }

    pub fn tail_ratio(&self) -> f64 {
        self.tail_ratio
    }

    /// `eta` at lag `m`; lag 0 is the unit diagonal.
    pub fn lag(&self, m: usize) -> f64 {
        if m == 0 {
            return 1.0;
        }
        match self.lags.get(m - 1) {
            Some(&e) => e,
            None => match self.lags.last() {
                Some(&last) => last * libm::pow(self.tail_ratio, (m - self.lags.len()) as f64),
                None => 0.0,
            },
        }
    }

    /// True if `eta_m <= T sigma^m` for every tabulated lag, up to a relative `1e-12`.
    pub fn dominated_by(&self, t: f64, sigma: f64) -> bool {
        self.lags.iter().enumerate().all(|(i, &e)| {
            let env = t * libm::pow(sigma, (i + 1) as f64);
            e <= env * (1.0 + 1e-12) + 1e-300
        })
    }
}

/// `max_{a,a'} (1/2) sum_b |P^m(a,b) - P^m(a',b)|` for `m = 1..=max_lag`, exactly.
pub fn eta_coefficients_exact(model: &MeasureModel, max_lag: usize) -> Result<Vec<BigRational>> {
    let m = match model {
        MeasureModel::Markov(m) => m,
        // identical rows: the future never depends on a past coordinate
        MeasureModel::Iid(_) => return Ok(vec![BigRational::zero(); max_lag]),
        MeasureModel::GaussCf => return Err(Error::UnsupportedModel("eta coefficients need a Markov chain")),
    };
    let n = m.states();
    let half = BigRational::new(1.into(), 2.into());
    let mut out = Vec::with_capacity(max_lag);
    for pm in m.transition().powers(max_lag) {
        let mut best = BigRational::zero();
        for a in 0..n {
            for a2 in a + 1..n {
                let mut acc = BigRational::zero();
                for b in 0..n {
                    acc += (pm.get(a, b) - pm.get(a2, b)).abs();
                }
                if acc > best {
                    best = acc;
                }
            }
        }
        out.push(best * &half);
    }
    Ok(out)
}

/// The eta lag table as floats, with the chain's second eigenvalue modulus
/// (or 0 for independent models) as the tail ratio.
pub fn eta_coefficients(model: &MeasureModel, max_lag: usize, tail_ratio: f64) -> Result<EtaMatrix> {
    let exact = eta_coefficients_exact(model, max_lag)?;
    EtaMatrix::from_lags(exact.iter().map(to_f64).collect(), tail_ratio)
}

/// Dense `n x n` upper-triangular `Delta` with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DeltaMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|i| (i..n).map(|j| self.data[i * n + j] * v[j]).sum()).collect()
    }

    pub fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|j| (0..=j).map(|i| self.data[i * n + j] * v[i]).sum()).collect()
    }
}

pub fn delta_matrix(eta: &EtaMatrix, n: usize) -> DeltaMatrix {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            data[i * n + j] = eta.lag(j - i);
        }
    }
    DeltaMatrix { n, data }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaNorm {
    pub value: f64,
    pub n: usize,
    pub iterations: usize,
}

fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// Largest singular value of `delta` by power iteration on `Delta^T Delta`.
pub fn delta_norm(delta: &DeltaMatrix, tol: f64) -> Result<DeltaNorm> {
    let n = delta.dim();
    if n == 0 {
        return Ok(DeltaNorm { value: 0.0, n, iterations: 0 });
    }
    let mut v = vec![1.0 / libm::sqrt(n as f64); n];
    let mut prev = 0.0;
    for it in 1..=DELTA_NORM_MAX_ITERATIONS {
        let u = delta.apply_transpose(&delta.apply(&v));
        let rayleigh: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        let len = norm2(&u);
        if len == 0.0 {
            return Ok(DeltaNorm { value: 0.0, n, iterations: it });
        }
        v = u.into_iter().map(|x| x / len).collect();
        if it > 1 && (rayleigh - prev).abs() <= tol * rayleigh {
            return Ok(DeltaNorm { value: libm::sqrt(rayleigh), n, iterations: it });
        }
        prev = rayleigh;
    }
    Err(Error::Numeric("power iteration for the Delta norm did not converge".into()))
}

/// `1 + 2 T sigma / (1 - sigma)`.
pub fn delta_norm_bound(profile: &MixingProfile) -> Result<f64> {
    let (t, s) = (profile.t.value, profile.sigma.value);
    if !(s < 1.0) {
        return Err(domain("sigma must be below 1"));
    }
    Ok(1.0 + 2.0 * t * s / (1.0 - s))
}

/// Coefficients `c_i = A min(B, C / i)` of a weighted-Hamming Lipschitz bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzWeights {
    /// Prefactor `A` (`2k^2` for `phi_{k,S}`, `2k` for `phi_{k,j,S}`).
    pub scale: f64,
    /// Plateau `B = K rho^k`.
    pub plateau: f64,
    /// `C = sup S`.
    pub sup_s: f64,
    /// Indices `i <= head_len` sit on the plateau.
    pub head_len: u64,
    pub norm_sq: f64,
    /// `2 A^2 (sup S) K^2 rho^k / 1`; see [`LipschitzWeights::majorant_holds`].
    pub majorant: f64,
}

impl LipschitzWeights {
    fn build(scale: f64, k_const: f64, rho: f64, k: usize, s: &IntervalUnion) -> Self {
        let plateau = k_const * libm::pow(rho, k as f64);
        let sup_s = s.sup_f64();
        let majorant = 2.0 * scale * scale * sup_s * k_const * k_const * libm::pow(rho, k as f64);
        if sup_s == 0.0 {
            return LipschitzWeights { scale, plateau, sup_s, head_len: 0, norm_sq: 0.0, majorant };
        }
        let head = libm::floor(sup_s / plateau);
        let head_len = if head >= 9.0e15 { u64::MAX } else { head as u64 };
        let tail = trigamma(head + 1.0);
        let norm_sq = scale * scale * (head * plateau * plateau + sup_s * sup_s * tail);
        LipschitzWeights { scale, plateau, sup_s, head_len, norm_sq, majorant }
    }

    /// `c_i` for `i >= 1`.
    pub fn c(&self, i: u64) -> f64 {
        if self.sup_s == 0.0 {
            return 0.0;
        }
        self.scale * self.plateau.min(self.sup_s / i as f64)
    }

    /// `c_1..c_n`.
    pub fn truncate(&self, n: usize) -> Vec<f64> {
        (1..=n as u64).map(|i| self.c(i)).collect()
    }

    /// Whether `||c||^2` sits below the closed-form majorant
    /// `2 A^2 (sup S) K^2 rho^k`; it can fail when `K < 1` or the plateau is short.
    pub fn majorant_holds(&self) -> bool {
        self.norm_sq <= self.majorant
    }
}

/// `sum_{i >= 0} 1 / (x + i)^2` for `x > 0`.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let x2 = x * x;
    // asymptotic series with Bernoulli numbers
    let series = 1.0 / x + 1.0 / (2.0 * x2)
        + 1.0 / (6.0 * x2 * x)
        - 1.0 / (30.0 * x2 * x2 * x)
        + 1.0 / (42.0 * x2 * x2 * x2 * x)
        - 1.0 / (30.0 * x2 * x2 * x2 * x2 * x);
    acc + series
}

/// Weights for `phi_{k,S}`: `c_i = 2k^2 min(K rho^k, sup S / i)`.
pub fn lipschitz_weights_phi1(k: usize, s: &IntervalUnion, profile: &MixingProfile) -> LipschitzWeights {
    let kf = k as f64;
    LipschitzWeights::build(2.0 * kf * kf, profile.k_const.value, profile.rho.value, k, s)
}

/// Weights for `phi_{k,j,S}`: `c_i = 2k min(K rho^k, sup S / i)`.
pub fn lipschitz_weights_phi2(k: usize, s: &IntervalUnion, profile: &MixingProfile) -> LipschitzWeights {
    LipschitzWeights::build(2.0 * k as f64, profile.k_const.value, profile.rho.value, k, s)
}

/// Upper bounds `d_i = sum_{j >= i} c_j eta_{ij}` on the martingale
/// differences, on a truncation to `c.len()` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AzumaBound {
    pub d: Vec<f64>,
    pub d_norm: f64,
    pub c_norm: f64,
    pub delta_norm: f64,
    /// `||d|| <= ||Delta|| ||c||`, up to `1e-9`.
    pub holds: bool,
}

pub fn azuma_bound(c: &[f64], eta: &EtaMatrix) -> Result<AzumaBound> {
    let n = c.len();
    let delta = delta_matrix(eta, n);
    let d = delta.apply(c);
    let norm = delta_norm(&delta, 1e-13)?;
    let d_norm = norm2(&d);
    let c_norm = norm2(c);
    Ok(AzumaBound {
        holds: d_norm <= norm.value * c_norm * (1.0 + 1e-9) + 1e-9,
        d,
        d_norm,
        c_norm,
        delta_norm: norm.value,
    })
}

/// `min(1, 2 exp(-t^2 / (2 ||Delta||^2 ||c||^2)))`.
pub fn mcdiarmid_tail(t: f64, delta_norm: f64, c_norm_sq: f64) -> f64 {
    let denom = 2.0 * delta_norm * delta_norm * c_norm_sq;
    if denom == 0.0 {
        return if t > 0.0 { 0.0 } else { 1.0 };
    }
    (2.0 * libm::exp(-t * t / denom)).min(1.0)
}

/// `min(1, 2 exp(-t^2 / (||Delta||^2 8 k^p (sup S) K^2 rho^k)))` with `p = 4`
/// for `phi_{k,S}` and `p = 2` for `phi_{k,j,S}`.
pub fn concentration_bound(t: f64, delta_norm: f64, k: usize, power: i32, sup_s: f64, profile: &MixingProfile) -> f64 {
    let k_const = profile.k_const.value;
    let denom = delta_norm
        * delta_norm
        * 8.0
        * libm::pow(k as f64, power as f64)
        * sup_s
        * k_const
        * k_const
        * libm::pow(profile.rho.value, k as f64);
    if denom == 0.0 {
        return if t > 0.0 { 0.0 } else { 1.0 };
    }
    (2.0 * libm::exp(-t * t / denom)).min(1.0)
}

/// Window masses and index sets, memoized by window content.
struct WindowCache<'m> {
    model: &'m MeasureModel,
    s: &'m IntervalUnion,
    entries: BTreeMap<Vec<Symbol>, Option<(f64, IndexSet)>>,
}

impl<'m> WindowCache<'m> {
    fn new(model: &'m MeasureModel, s: &'m IntervalUnion) -> Self {
        WindowCache { model, s, entries: BTreeMap::new() }
    }

    fn get(&mut self, w: &[Symbol]) -> Result<Option<&(f64, IndexSet)>> {
        if !self.entries.contains_key(w) {
            let mass = self.model.cylinder_mass(&Word::from(w))?;
            let entry = if mass.is_zero() { None } else { Some((mass.value(), j_set(&mass, self.s)?)) };
            self.entries.insert(w.to_vec(), entry);
        }
        Ok(self.entries[w].as_ref())
    }
}

/// `phi_{k,S}(x)` by a position scan over `i = 1..=n_cap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiScan {
    pub value: f64,
    pub n_cap: u64,
    /// True when no window past `n_cap` can contribute, so `value` is exact.
    pub complete: bool,
    /// Upper bound on the skipped contribution; `None` when no finite bound is known.
    pub skipped_bound: Option<f64>,
}

/// `phi_{k,S}(x) = sum_i mu_k(x[i, i+k)) 1{i mu_k(x[i, i+k)) in S}` over the
/// first `n_cap` positions of `x`, which must hold `n_cap + k - 1` symbols.
pub fn phi_k_s(model: &MeasureModel, x: &[Symbol], k: usize, s: &IntervalUnion, n_cap: u64) -> Result<PhiScan> {
    if k == 0 || n_cap < k as u64 {
        return Err(domain("phi scan needs k >= 1 and N_cap >= k"));
    }
    let needed = n_cap as usize + k - 1;
    if x.len() < needed {
        return Err(domain("sequence shorter than N_cap + k - 1"));
    }
    let mut cache = WindowCache::new(model, s);
    let mut value = 0.0;
    for i in 1..=n_cap {
        let start = (i - 1) as usize;
        if let Some((mu, j)) = cache.get(&x[start..start + k])? {
            if j.contains(i) {
                value += mu;
            }
        }
    }
    let sup = s.sup_f64();
    let (complete, skipped_bound) = match model.min_positive_cylinder(k) {
        _ if s.is_empty() => (true, Some(0.0)),
        Some(mu_min) => {
            let last = sup / mu_min;
            if (n_cap as f64) >= last {
                (true, Some(0.0))
            } else {
                // each skipped term is at most sup S / i
                let bound = sup * (libm::log(last) - libm::log(n_cap as f64) + 1.0 / n_cap as f64);
                (false, Some(bound))
            }
        }
        None => (false, None),
    };
    Ok(PhiScan { value, n_cap, complete, skipped_bound })
}

/// Convenience wrapper drawing the prefix from a generator.
pub fn phi_k_s_from_generator(
    gen: &mut SequenceGenerator<'_>,
    k: usize,
    s: &IntervalUnion,
    n_cap: u64,
) -> Result<PhiScan> {
    let model = gen.model();
    let x = gen.take(n_cap as usize + k - 1)?;
    phi_k_s(model, &x, k, s, n_cap)
}

/// `phi_{k,j,S}(x)`, exactly or by sampling words.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiEstimate {
    pub value: f64,
    pub se: f64,
    pub exact: bool,
    pub truncated_fraction: f64,
}

/// `mu_k({w : M_k^x(w)(S) = j})` against the fixed prefix `x`. Counts that
/// need symbols beyond `x` are kept as partial counts and flagged.
pub fn phi_k_j_s(
    model: &MeasureModel,
    x: &[Symbol],
    k: usize,
    j: u64,
    s: &IntervalUnion,
    n_word_samples: usize,
    word_seed: u64,
) -> Result<PhiEstimate> {
    if k == 0 {
        return Err(domain("word length must be positive"));
    }
    let exact_path = match (model, model.alphabet_size()) {
        (MeasureModel::Iid(IidModel::Finite { .. }) | MeasureModel::Markov(_), Some(a)) => {
            word_count(a, k).is_some_and(|c| c <= PHI2_EXACT_GUARD)
        }
        _ => false,
    };
    if exact_path {
        let a = model.alphabet_size().unwrap();
        let mut value = 0.0;
        let mut truncated_mass = 0.0;
        for w in enumerate_words(a, k)? {
            let mass = model.cylinder_mass(&w)?;
            let count = if mass.is_zero() {
                0
            } else {
                let c = count_occurrences(x, &w, &j_set(&mass, s)?);
                if c.truncated {
                    truncated_mass += mass.value();
                }
                c.count
            };
            if count == j {
                value += mass.value();
            }
        }
        return Ok(PhiEstimate { value, se: 0.0, exact: true, truncated_fraction: truncated_mass });
    }
    if n_word_samples < PHI2_MIN_SAMPLES {
        return Err(Error::InsufficientData { needed: PHI2_MIN_SAMPLES, got: n_word_samples });
    }
    let mut hits = 0usize;
    let mut truncated = 0usize;
    for idx in 0..n_word_samples {
        let w = Word::new(SequenceGenerator::streaming(model, derive_seed(word_seed, idx as u64)).take(k)?);
        let mass = model.cylinder_mass(&w)?;
        let c = count_occurrences(x, &w, &j_set(&mass, s)?);
        truncated += c.truncated as usize;
        hits += (c.count == j) as usize;
    }
    let n = n_word_samples as f64;
    let p = hits as f64 / n;
    Ok(PhiEstimate { value: p, se: libm::sqrt(p * (1.0 - p) / n), exact: false, truncated_fraction: truncated as f64 / n })
}

/// Which functional a concentration experiment tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    /// `phi_{k,S}`.
    Mean,
    /// `phi_{k,j,S}` for the given `j`.
    Void(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationSettings {
    pub k: usize,
    pub functional: Functional,
    pub t_grid: Vec<f64>,
    pub n_replicas: usize,
    pub n_cap: u64,
    pub n_word_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceedanceRow {
    pub t: f64,
    pub empirical_prob: f64,
    /// Exceedance probability when centering at the known mean, if any.
    pub empirical_prob_true_center: Option<f64>,
    pub theoretical_bound: f64,
    /// The McDiarmid bound with the computed `||c||^2` instead of the closed-form majorant.
    pub mcdiarmid_bound: f64,
    pub se: f64,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationReport {
    pub values: Vec<f64>,
    pub mean: f64,
    pub true_mean: Option<f64>,
    pub delta_norm_bound: f64,
    pub weights: LipschitzWeights,
    pub rows: Vec<ExceedanceRow>,
    pub incomplete_scans: usize,
}

impl ConcentrationReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.violation).count()
    }
}

/// Draws independent sequences, evaluates the functional on each, and
/// compares the centered exceedance frequencies with the concentration bound.
pub fn concentration_experiment(
    model: &MeasureModel,
    profile: &MixingProfile,
    s: &IntervalUnion,
    cfg: &ConcentrationSettings,
) -> Result<ConcentrationReport> {
    if cfg.n_replicas < CONCENTRATION_MIN_REPLICAS {
        return Err(Error::InsufficientData { needed: CONCENTRATION_MIN_REPLICAS, got: cfg.n_replicas });
    }
    let k = cfg.k;
    let mut values = Vec::with_capacity(cfg.n_replicas);
    let mut incomplete = 0usize;
    for r in 0..cfg.n_replicas {
        let mut gen = SequenceGenerator::streaming(model, derive_seed(cfg.seed, r as u64));
        let x = gen.take(cfg.n_cap as usize + k - 1)?;
        let v = match cfg.functional {
            Functional::Mean => {
                let scan = phi_k_s(model, &x, k, s, cfg.n_cap)?;
                incomplete += !scan.complete as usize;
                scan.value
            }
            Functional::Void(j) => {
                let word_seed = derive_seed(cfg.seed ^ 0x5755_4F52_4453_0000, r as u64);
                let est = phi_k_j_s(model, &x, k, j, s, cfg.n_word_samples, word_seed)?;
                incomplete += (est.truncated_fraction > 0.0) as usize;
                est.value
            }
        };
        values.push(v);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let true_mean = match cfg.functional {
        Functional::Mean => crate::oracles::annealed_exact_expectation(model, k, s).ok().map(|a| a.value),
        Functional::Void(_) => None,
    };
    let dn = delta_norm_bound(profile)?;
    let (weights, power) = match cfg.functional {
        Functional::Mean => (lipschitz_weights_phi1(k, s, profile), 4),
        Functional::Void(_) => (lipschitz_weights_phi2(k, s, profile), 2),
    };
    let mut rows = Vec::with_capacity(cfg.t_grid.len());
    for &t in &cfg.t_grid {
        let exceed = |c: f64| values.iter().filter(|&&v| (v - c).abs() >= t).count() as f64 / n;
        let p = exceed(mean);
        let bound = concentration_bound(t, dn, k, power, s.sup_f64(), profile);
        let se = libm::sqrt(bound * (1.0 - bound) / n);
        rows.push(ExceedanceRow {
            t,
            empirical_prob: p,
            empirical_prob_true_center: true_mean.map(exceed),
            theoretical_bound: bound,
            mcdiarmid_bound: mcdiarmid_tail(t, dn, weights.norm_sq),
            se,
            violation: bound < 1.0 && p > bound + 3.0 * se,
        });
    }
    Ok(ConcentrationReport {
        values,
        mean,
        true_mean,
        delta_norm_bound: dn,
        weights,
        rows,
        incomplete_scans: incomplete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::GaussMixingAssumption;
    use crate::rational::parse_rational;
    use crate::rng::CounterRng;

    fn two_state() -> MeasureModel {
        MeasureModel::markov_f64(&[vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap()
    }

    fn unit() -> IntervalUnion {
        IntervalUnion::unit_like(parse_rational("1").unwrap()).unwrap()
    }

    #[test]
    fn eta_examples() {
        let eta = eta_coefficients(&two_state(), 30, 0.7).unwrap();
        assert!((eta.lag(1) - 0.7).abs() < 1e-15);
        for m in 1..=30 {
            assert!((eta.lag(m) - libm::pow(0.7, m as f64)).abs() <= 1e-12, "m = {m}");
        }
        let exact = eta_coefficients_exact(&two_state(), 3).unwrap();
        assert_eq!(exact[2], parse_rational("343/1000").unwrap());
        let iid = eta_coefficients(&MeasureModel::uniform(3).unwrap(), 5, 0.0).unwrap();
        assert!(iid.lags().iter().all(|&e| e == 0.0));
        let same_rows = MeasureModel::markov_f64(&[vec![0.3, 0.7], vec![0.3, 0.7]]).unwrap();
        assert!(eta_coefficients(&same_rows, 4, 0.0).unwrap().lags().iter().all(|&e| e == 0.0));
        assert!(matches!(eta_coefficients(&MeasureModel::gauss_cf(), 3, 0.0), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn delta_examples() {
        let d = delta_matrix(&EtaMatrix::zero(), 4);
        assert_eq!(d.rows(), vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]]);
        let eta = EtaMatrix::from_lags(vec![0.7, 0.49], 0.7).unwrap();
        let d = delta_matrix(&eta, 3);
        assert_eq!(d.rows(), vec![vec![1.0, 0.7, 0.49], vec![0.0, 1.0, 0.7], vec![0.0, 0.0, 1.0]]);
        assert_eq!(delta_matrix(&eta, 1).rows(), vec![vec![1.0]]);
    }

    #[test]
    fn delta_norm_examples() {
        let id = delta_matrix(&EtaMatrix::zero(), 30);
        assert!((delta_norm(&id, 1e-12).unwrap().value - 1.0).abs() < 1e-12);
        let eta = eta_coefficients(&two_state(), 60, 0.7).unwrap();
        let mut last = 0.0;
        for n in [50, 100, 200] {
            let v = delta_norm(&delta_matrix(&eta, n), 1e-12).unwrap().value;
            assert!(v >= last);
            assert!((3.0..=10.0 / 3.0).contains(&v), "n = {n}: {v}");
            last = v;
        }
        let p = MixingProfile::assumed(1.0, 0.7, 0.9, 1.0, 1.0).unwrap();
        assert!(last <= delta_norm_bound(&p).unwrap());
    }

    #[test]
    fn delta_bound_examples() {
        let b = |t, s| delta_norm_bound(&MixingProfile::assumed(t, s, 0.5, 1.0, 1.0).unwrap()).unwrap();
        assert!((b(1.0, 0.5) - 3.0).abs() < 1e-15);
        assert!((b(0.5, 0.7) - (1.0 + 0.7 / 0.3)).abs() < 1e-12);
        let iid = MixingProfile::for_model(&MeasureModel::uniform(2).unwrap(), GaussMixingAssumption::default()).unwrap();
        assert_eq!(delta_norm_bound(&iid).unwrap(), 1.0);
    }

    #[test]
    fn azuma_examples() {
        let c = vec![1.0, 2.0, 3.0];
        assert_eq!(azuma_bound(&c, &EtaMatrix::zero()).unwrap().d, c);
        let eta = eta_coefficients(&two_state(), 400, 0.7).unwrap();
        let a = azuma_bound(&vec![1.0; 400], &eta).unwrap();
        assert!((a.d[100] - 10.0 / 3.0).abs() < 1e-9);
        assert!(a.holds);
        let mut spike = vec![0.0; 50];
        spike[0] = 1.0;
        let a = azuma_bound(&spike, &eta).unwrap();
        assert_eq!(a.d[0], 1.0);
        assert!(a.d[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn azuma_norm_inequality_on_random_instances() {
        let mut rng = CounterRng::new(8);
        for _ in 0..100 {
            let n = 2 + (rng.next_u64() % 60) as usize;
            let c: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            let lags: Vec<f64> = (0..(rng.next_u64() % 20)).map(|_| rng.next_f64()).collect();
            let eta = EtaMatrix::from_lags(lags, rng.next_f64() * 0.9).unwrap();
            assert!(azuma_bound(&c, &eta).unwrap().holds);
        }
    }

    #[test]
    fn mcdiarmid_examples() {
        assert_eq!(mcdiarmid_tail(1e-9, 1.0, 1.0), 1.0);
        let (d, c2) = (1.5f64, 2.0f64);
        let t = libm::sqrt(2.0 * d * d * c2);
        assert!((mcdiarmid_tail(t, d, c2) - 2.0 * libm::exp(-1.0)).abs() < 1e-15);
        assert!((mcdiarmid_tail(3.0, 1.0, 1.0) - 2.0 * libm::exp(-4.5)).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 1..50 {
            let v = mcdiarmid_tail(i as f64 * 0.2, 1.2, 0.7);
            assert!(v <= prev);
            assert!(mcdiarmid_tail(i as f64 * 0.2, 1.2, 0.8) >= v);
            prev = v;
        }
    }

    #[test]
    fn trigamma_matches_direct_sums() {
        // pi^2/6 - 1 - 1/4 = sum_{i >= 3} 1/i^2
        let target = core::f64::consts::PI * core::f64::consts::PI / 6.0 - 1.25;
        assert!((trigamma(3.0) - target).abs() < 1e-14);
        let direct: f64 = (0..2_000_000).map(|i| 1.0 / ((1000.5 + i as f64) * (1000.5 + i as f64))).sum::<f64>()
            + 1.0 / (1000.5 + 2_000_000.0);
        assert!((trigamma(1000.5) - direct).abs() < 1e-12);
    }

    #[test]
    fn lipschitz_examples() {
        let p = MixingProfile::assumed(1.0, 0.5, 0.5, 1.0, 1.0).unwrap();
        let w = lipschitz_weights_phi1(1, &unit(), &p);
        assert_eq!((w.c(1), w.c(2), w.c(3)), (1.0, 1.0, 2.0 / 3.0));
        let oracle = 2.0 + 4.0 * (core::f64::consts::PI * core::f64::consts::PI / 6.0 - 1.25);
        assert!((w.norm_sq - oracle).abs() < 1e-12);
        assert!((w.norm_sq - 3.5797).abs() < 1e-4);
        assert_eq!(lipschitz_weights_phi2(1, &unit(), &p), w);
        let w1 = lipschitz_weights_phi1(2, &unit(), &p);
        let w2 = lipschitz_weights_phi2(2, &unit(), &p);
        for i in 1..20 {
            assert!((w2.c(i) - w1.c(i) / 2.0).abs() < 1e-15);
        }
        let e = lipschitz_weights_phi1(3, &IntervalUnion::empty(), &p);
        assert_eq!((e.c(1), e.norm_sq), (0.0, 0.0));
        let mut prev = f64::INFINITY;
        for k in [10, 20, 30, 40] {
            let n = lipschitz_weights_phi1(k, &unit(), &p).norm_sq / (k as f64).powi(4);
            assert!(n < prev);
            prev = n;
        }
    }

    #[test]
    fn phi_scan_examples() {
        let fair = MeasureModel::uniform(2).unwrap();
        let x = [0, 1, 1, 0, 1];
        let v = phi_k_s(&fair, &x, 1, &unit(), 4).unwrap();
        assert_eq!(v.value, 1.0);
        let alt: Vec<Symbol> = (0..11).map(|i| i % 2).collect();
        let v = phi_k_s(&fair, &alt, 2, &unit(), 10).unwrap();
        assert_eq!(v.value, 1.0);
        assert!(v.complete);
        // p = (3/4, 1/4), k = 1: hand scan of x = 0,1,0,0,1,1
        let biased = MeasureModel::iid_f64(&[0.75, 0.25]).unwrap();
        let x = [0, 1, 0, 0, 1, 1];
        // i=1: 0.75 in S; i=2: 0.5; i=3: 2.25 no; i=4: 3 no; i=5: 1.25 no; i=6: 1.5 no
        let v = phi_k_s(&biased, &x, 1, &unit(), 6).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phi_scan_ignores_coordinates_past_the_cap() {
        let fair = MeasureModel::uniform(2).unwrap();
        let mut rng = CounterRng::new(21);
        let k = 4;
        let n_cap = 40;
        let x: Vec<Symbol> = (0..100).map(|_| rng.next_u64() % 2).collect();
        let base = phi_k_s(&fair, &x, k, &unit(), n_cap).unwrap().value;
        for i in (n_cap as usize + k - 1)..100 {
            let mut y = x.clone();
            y[i] ^= 1;
            assert_eq!(phi_k_s(&fair, &y, k, &unit(), n_cap).unwrap().value, base);
        }
    }

    #[test]
    fn phi_scan_is_lipschitz_with_the_stated_weights() {
        let s = IntervalUnion::unit_like(parse_rational("3/2").unwrap()).unwrap();
        let mut rng = CounterRng::new(2024);
        for model in [MeasureModel::iid_f64(&[0.6, 0.3, 0.1]).unwrap(), two_state()] {
            let profile = MixingProfile::for_model(&model, GaussMixingAssumption::default()).unwrap();
            let k = 5;
            let n_cap = 3000;
            let weights = lipschitz_weights_phi1(k, &s, &profile);
            let alphabet = model.alphabet_size().unwrap();
            let x = SequenceGenerator::new(&model, 77).take(n_cap as usize + k - 1).unwrap();
            let base = phi_k_s(&model, &x, k, &s, n_cap).unwrap().value;
            for _ in 0..500 {
                let i = (rng.next_u64() % x.len() as u64) as usize;
                let mut y = x.clone();
                y[i] = (y[i] + 1 + rng.next_u64() % (alphabet - 1)) % alphabet;
                let v = phi_k_s(&model, &y, k, &s, n_cap).unwrap().value;
                assert!((v - base).abs() <= weights.c(i as u64 + 1) + 1e-12, "coordinate {}", i + 1);
            }
        }
    }

    #[test]
    fn phi2_examples() {
        let fair = MeasureModel::uniform(2).unwrap();
        let x: Vec<Symbol> = vec![0, 1, 0, 1, 0, 1];
        let v = phi_k_j_s(&fair, &x, 2, 0, &unit(), 0, 0).unwrap();
        assert!(v.exact);
        assert_eq!(v.value, 0.5);
        assert_eq!(phi_k_j_s(&fair, &x, 2, 9, &unit(), 0, 0).unwrap().value, 0.0);
        let e = phi_k_j_s(&fair, &x, 2, 0, &IntervalUnion::empty(), 0, 0).unwrap();
        assert_eq!(e.value, 1.0);
        let g = MeasureModel::gauss_cf();
        assert!(matches!(phi_k_j_s(&g, &[1, 2, 3], 2, 0, &unit(), 10, 0), Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn phi2_sampling_agrees_with_enumeration() {
        let fair = MeasureModel::uniform(2).unwrap();
        let x = SequenceGenerator::new(&fair, 4).take(2000).unwrap();
        let exact = phi_k_j_s(&fair, &x, 8, 0, &unit(), 0, 0).unwrap();
        let s = IntervalUnion::unit_like(parse_rational("1").unwrap()).unwrap();
        // force sampling via a model the enumeration path does not take
        let mut hits = 0;
        let n = 20_000;
        for idx in 0..n {
            let w = Word::new(SequenceGenerator::new(&fair, derive_seed(9, idx)).take(8).unwrap());
            let mass = fair.cylinder_mass(&w).unwrap();
            hits += (count_occurrences(&x, &w, &j_set(&mass, &s).unwrap()).count == 0) as u64;
        }
        let p = hits as f64 / n as f64;
        let se = libm::sqrt(exact.value * (1.0 - exact.value) / n as f64);
        assert!((p - exact.value).abs() <= 4.0 * se);
    }

    #[test]
    fn concentration_formula_instance() {
        let p = MixingProfile::for_model(&MeasureModel::uniform(2).unwrap(), GaussMixingAssumption::default()).unwrap();
        let b = concentration_bound(30.0, 1.0, 10, 4, 1.0, &p);
        assert!((b - 2.0 * libm::exp(-900.0 / 78.125)).abs() < 1e-18);
        assert!((b - 2.0e-5).abs() < 1e-6);
        assert_eq!(concentration_bound(0.5, 1.0, 10, 4, 1.0, &p), 1.0);
    }

    #[test]
    fn concentration_small_run() {
        let model = two_state();
        let profile = MixingProfile::for_model(&model, GaussMixingAssumption::default()).unwrap();
        let cfg = ConcentrationSettings {
            k: 4,
            functional: Functional::Mean,
            t_grid: vec![0.5, 1.0, 2.0, 4.0],
            n_replicas: 200,
            n_cap: 400,
            n_word_samples: 0,
            seed: 1,
        };
        let rep = concentration_experiment(&model, &profile, &unit(), &cfg).unwrap();
        assert_eq!(rep.values.len(), 200);
        assert_eq!(rep.violations(), 0);
        assert!(rep.true_mean.is_some());
        let short = ConcentrationSettings { n_replicas: 10, ..cfg };
        assert!(concentration_experiment(&model, &profile, &unit(), &short).is_err());
    }
}
