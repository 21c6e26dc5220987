//! Annealed and quenched genericity experiments, the oracle suite and the
//! mixing/concentration drivers. Everything here is deterministic in the
//! config seed; IO and timing live in the `poissonlab` crate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::measures::{CylinderMass, GaussMixingAssumption, MeasureModel, MixingProfile, SequenceGenerator, Symbol};
use crate::mixing::{
    concentration_experiment, delta_matrix, delta_norm, delta_norm_bound, eta_coefficients, ConcentrationReport,
    ConcentrationSettings, DeltaNorm, Functional,
};
use crate::oracles;
use crate::point_process::{count_occurrences, j_set, required_prefix_length, scaled_in_set, IntervalUnion, WindowIndex};
use crate::poisson_stats::{kallenberg_check, EmpiricalDistribution, HistogramRow, KallenbergEntry, TvPair};
use crate::rng::derive_seed;
use crate::words::{enumerate_words, word_count, Word};

/// Smallest sample size for the statistical modes.
pub const MIN_STATISTICAL_SAMPLES: usize = 100;
/// Default scan cap for the Gauss measure.
pub const GAUSS_DEFAULT_N_CAP: u64 = 10_000_000;
/// Largest scan cap accepted for a single x prefix.
pub const MAX_N_CAP: u64 = 1 << 31;

// Stream tags for seed derivation.
const ANNEALED_WORDS: u64 = 0;
const ANNEALED_X: u64 = 1;
const QUENCHED_X: u64 = 2;
const QUENCHED_WORDS: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Annealed,
    Quenched,
    Oracle,
    Concentration,
    Mixing,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Annealed => "ANNEALED",
            Mode::Quenched => "QUENCHED",
            Mode::Oracle => "ORACLE",
            Mode::Concentration => "CONCENTRATION",
            Mode::Mixing => "MIXING",
        }
    }

    fn statistical(self) -> bool {
        matches!(self, Mode::Annealed | Mode::Quenched | Mode::Concentration)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: MeasureModel,
    pub gauss: GaussMixingAssumption,
    pub k: usize,
    pub sets: Vec<IntervalUnion>,
    pub mode: Mode,
    pub n_samples: usize,
    pub n_x_replicas: usize,
    /// Cap on the x prefix; `None` takes [`default_n_cap`].
    pub n_cap: Option<u64>,
    pub seed: u64,
    /// Reject sample sizes below [`MIN_STATISTICAL_SAMPLES`] instead of skipping the checks that need them.
    pub strict: bool,
    /// Per-set TV (set convention) tolerance for annealed and quenched runs.
    pub tv_tolerance: f64,
    /// Fraction of quenched replicas that must meet `tv_tolerance`.
    pub replica_pass_fraction: f64,
    pub t_grid: Vec<f64>,
    pub functional: Functional,
    pub n_word_samples: usize,
    pub delta_truncations: Vec<usize>,
    /// `(T, sigma)` replacing the profile's values for the `Delta` bound.
    pub assumed_t_sigma: Option<(f64, f64)>,
}

impl ExperimentConfig {
    pub fn new(model: MeasureModel, k: usize, sets: Vec<IntervalUnion>, mode: Mode) -> Self {
        ExperimentConfig {
            model,
            gauss: GaussMixingAssumption::default(),
            k,
            sets,
            mode,
            n_samples: 10_000,
            n_x_replicas: 10,
            n_cap: None,
            seed: 0,
            strict: true,
            tv_tolerance: 0.05,
            replica_pass_fraction: 0.9,
            t_grid: Vec::new(),
            functional: Functional::Mean,
            n_word_samples: 1000,
            delta_truncations: alloc::vec![50, 100, 200],
            assumed_t_sigma: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(domain("k must be at least 1"));
        }
        if self.mode.statistical() && self.strict && self.n_samples < MIN_STATISTICAL_SAMPLES {
            return Err(Error::InsufficientData { needed: MIN_STATISTICAL_SAMPLES, got: self.n_samples });
        }
        if self.mode == Mode::Quenched && self.n_x_replicas == 0 {
            return Err(domain("n_x_replicas must be positive"));
        }
        if let Some(cap) = self.n_cap {
            if cap < self.k as u64 || cap > MAX_N_CAP {
                return Err(domain("n_cap must lie in [k, 2^31]"));
            }
        }
        if !(0.0..=1.0).contains(&self.replica_pass_fraction) {
            return Err(domain("replica_pass_fraction must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<MixingProfile> {
        let mut p = MixingProfile::for_model(&self.model, self.gauss)?;
        if let Some((t, sigma)) = self.assumed_t_sigma {
            let a = MixingProfile::assumed(t, sigma, p.rho.value, p.k_const.value, p.r.value)?;
            p.t = a.t;
            p.sigma = a.sigma;
        }
        Ok(p)
    }

    /// The configured cap, or [`default_n_cap`].
    pub fn effective_n_cap(&self) -> Result<u64> {
        match self.n_cap {
            Some(c) => Ok(c),
            None => default_n_cap(&self.model, self.k, &self.sets),
        }
    }
}

/// `10 sup S / (K rho^k)` over the sets for finite alphabets, `10^7` for Gauss.
pub fn default_n_cap(model: &MeasureModel, k: usize, sets: &[IntervalUnion]) -> Result<u64> {
    if matches!(model, MeasureModel::GaussCf) {
        return Ok(GAUSS_DEFAULT_N_CAP);
    }
    let profile = MixingProfile::for_model(model, GaussMixingAssumption::default())?;
    let sup = sets.iter().map(|s| s.sup_f64()).fold(0.0, f64::max);
    let cap = libm::ceil(10.0 * sup / profile.cylinder_bound(k));
    Ok((cap as u64).clamp(k as u64, MAX_N_CAP))
}

/// Per-set outcome of one batch of counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SetReport {
    pub set_index: usize,
    pub lambda: f64,
    pub counts: Vec<u64>,
    pub truncated: Vec<bool>,
    pub distribution: EmpiricalDistribution,
    pub tv: TvPair,
    /// TV over the samples whose count saw the whole index set, if any did.
    pub complete_tv: Option<TvPair>,
    pub rows: Vec<HistogramRow>,
}

impl SetReport {
    fn build(set_index: usize, lambda: f64, counts: Vec<u64>, truncated: Vec<bool>) -> Result<Self> {
        let distribution = EmpiricalDistribution::from_counts(&counts, &truncated)?;
        let tv = distribution.tv_to_poisson(lambda)?;
        let complete: Vec<u64> = counts.iter().zip(&truncated).filter(|(_, &t)| !t).map(|(&c, _)| c).collect();
        let complete_tv = if complete.is_empty() {
            None
        } else {
            let flags = alloc::vec![false; complete.len()];
            Some(EmpiricalDistribution::from_counts(&complete, &flags)?.tv_to_poisson(lambda)?)
        };
        let rows = distribution.histogram_rows(lambda)?;
        Ok(SetReport { set_index, lambda, counts, truncated, distribution, tv, complete_tv, rows })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenericityReport {
    pub seed: u64,
    pub n_samples: usize,
    pub n_cap: u64,
    pub sets: Vec<SetReport>,
    /// Empty when the sample is below the two-condition minimum.
    pub kallenberg: Vec<KallenbergEntry>,
    pub truncated_fraction: f64,
    pub tv_tolerance: f64,
}

impl GenericityReport {
    fn assemble(
        cfg: &ExperimentConfig,
        seed: u64,
        n_cap: u64,
        per_set: Vec<(Vec<u64>, Vec<bool>)>,
        cylinder_bound: f64,
    ) -> Result<Self> {
        let mut sets = Vec::with_capacity(per_set.len());
        for (i, ((counts, truncated), s)) in per_set.into_iter().zip(&cfg.sets).enumerate() {
            sets.push(SetReport::build(i, s.length_f64(), counts, truncated)?);
        }
        let kallenberg = if cfg.n_samples >= crate::poisson_stats::KALLENBERG_MIN_SAMPLES {
            let batches: Vec<&[u64]> = sets.iter().map(|s| s.counts.as_slice()).collect();
            kallenberg_check(&batches, &cfg.sets, cylinder_bound)?
        } else {
            Vec::new()
        };
        let total: usize = sets.iter().map(|s| s.truncated.len()).sum();
        let hit: usize = sets.iter().map(|s| s.truncated.iter().filter(|&&t| t).count()).sum();
        Ok(GenericityReport {
            seed,
            n_samples: cfg.n_samples,
            n_cap,
            sets,
            kallenberg,
            truncated_fraction: if total == 0 { 0.0 } else { hit as f64 / total as f64 },
            tv_tolerance: cfg.tv_tolerance,
        })
    }

    /// Every set within the TV tolerance.
    pub fn tv_pass(&self) -> bool {
        self.sets.iter().all(|s| s.tv.set <= self.tv_tolerance)
    }

    pub fn kallenberg_pass(&self) -> bool {
        self.kallenberg.iter().all(|e| e.pass())
    }
}

/// Count with a fallback for words whose index set overflows `2^62`: the
/// occurrences inside `x` are tested one by one and the sample is marked truncated.
fn count_with_fallback(x: &[Symbol], w: &Word, mass: &CylinderMass, s: &IntervalUnion) -> Result<(u64, bool)> {
    match j_set(mass, s) {
        Ok(j) => {
            let c = count_occurrences(x, w, &j);
            Ok((c.count, c.truncated))
        }
        Err(Error::Resource(_)) => {
            let k = w.len();
            let mut count = 0;
            for (p, win) in x.windows(k).enumerate() {
                if win == w.symbols() && scaled_in_set(mass, p as u64 + 1, s)? {
                    count += 1;
                }
            }
            Ok((count, true))
        }
        Err(e) => Err(e),
    }
}

fn indexed_count(index: &WindowIndex<'_>, w: &Word, mass: &CylinderMass, s: &IntervalUnion) -> Result<(u64, bool)> {
    match j_set(mass, s) {
        Ok(j) => {
            let c = index.count(w, &j)?;
            Ok((c.count, c.truncated))
        }
        Err(Error::Resource(_)) => {
            let mut count = 0;
            for p in index.occurrences(w)? {
                if scaled_in_set(mass, p, s)? {
                    count += 1;
                }
            }
            Ok((count, true))
        }
        Err(e) => Err(e),
    }
}

fn sample_word(model: &MeasureModel, seed: u64, k: usize) -> Result<(Word, CylinderMass)> {
    let w = Word::new(SequenceGenerator::streaming(model, seed).take(k)?);
    let mass = model.cylinder_mass(&w)?;
    Ok((w, mass))
}

/// Independent pairs `(x, w)`: each x is extended only as far as the
/// largest index set needs, up to the cap.
pub fn run_annealed(cfg: &ExperimentConfig) -> Result<GenericityReport> {
    cfg.validate()?;
    let n_cap = cfg.effective_n_cap()?;
    let profile = cfg.profile()?;
    let k = cfg.k;
    let word_root = derive_seed(cfg.seed, ANNEALED_WORDS);
    let x_root = derive_seed(cfg.seed, ANNEALED_X);
    let mut per_set: Vec<(Vec<u64>, Vec<bool>)> =
        cfg.sets.iter().map(|_| (Vec::with_capacity(cfg.n_samples), Vec::with_capacity(cfg.n_samples))).collect();
    let limit = n_cap + k as u64 - 1;
    let mut x = Vec::new();
    for i in 0..cfg.n_samples as u64 {
        let (w, mass) = sample_word(&cfg.model, derive_seed(word_root, i), k)?;
        let mut need = 0u64;
        for s in &cfg.sets {
            need = need.max(match j_set(&mass, s) {
                Ok(j) => required_prefix_length(&w, &j),
                Err(Error::Resource(_)) => limit,
                Err(e) => return Err(e),
            });
        }
        x.clear();
        SequenceGenerator::streaming(&cfg.model, derive_seed(x_root, i)).fill_to(&mut x, need.min(limit) as usize)?;
        for (s, (counts, flags)) in cfg.sets.iter().zip(per_set.iter_mut()) {
            let (c, t) = count_with_fallback(&x, &w, &mass, s)?;
            counts.push(c);
            flags.push(t);
        }
    }
    GenericityReport::assemble(cfg, cfg.seed, n_cap, per_set, profile.cylinder_bound(k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuenchedReport {
    pub replicas: Vec<GenericityReport>,
    pub n_pass: usize,
    pub required_pass: usize,
}

impl QuenchedReport {
    pub fn pass(&self) -> bool {
        self.n_pass >= self.required_pass
    }

    /// All replicas' counts for one set, merged in replica order.
    pub fn pooled(&self, set_index: usize) -> Result<EmpiricalDistribution> {
        let mut counts = Vec::new();
        let mut flags = Vec::new();
        for r in &self.replicas {
            counts.extend_from_slice(&r.sets[set_index].counts);
            flags.extend_from_slice(&r.sets[set_index].truncated);
        }
        EmpiricalDistribution::from_counts(&counts, &flags)
    }
}

/// One fixed x per replica, scanned up to the cap through a window index;
/// words are drawn from independent realizations of the measure.
pub fn run_quenched(cfg: &ExperimentConfig) -> Result<QuenchedReport> {
    cfg.validate()?;
    let n_cap = cfg.effective_n_cap()?;
    let profile = cfg.profile()?;
    let k = cfg.k;
    let x_root = derive_seed(cfg.seed, QUENCHED_X);
    let word_root = derive_seed(cfg.seed, QUENCHED_WORDS);
    let mut replicas = Vec::with_capacity(cfg.n_x_replicas);
    for r in 0..cfg.n_x_replicas as u64 {
        let x_seed = derive_seed(x_root, r);
        let x = SequenceGenerator::streaming(&cfg.model, x_seed).take((n_cap + k as u64 - 1) as usize)?;
        let index = WindowIndex::new(&x, k)?;
        let words = derive_seed(word_root, r);
        let mut per_set: Vec<(Vec<u64>, Vec<bool>)> =
            cfg.sets.iter().map(|_| (Vec::with_capacity(cfg.n_samples), Vec::with_capacity(cfg.n_samples))).collect();
        for i in 0..cfg.n_samples as u64 {
            let (w, mass) = sample_word(&cfg.model, derive_seed(words, i), k)?;
            for (s, (counts, flags)) in cfg.sets.iter().zip(per_set.iter_mut()) {
                let (c, t) = indexed_count(&index, &w, &mass, s)?;
                counts.push(c);
                flags.push(t);
            }
        }
        replicas.push(GenericityReport::assemble(cfg, x_seed, n_cap, per_set, profile.cylinder_bound(k))?);
    }
    let n_pass = replicas.iter().filter(|r| r.tv_pass()).count();
    let required_pass = libm::ceil(cfg.replica_pass_fraction * cfg.n_x_replicas as f64 - 1e-9) as usize;
    Ok(QuenchedReport { replicas, n_pass, required_pass })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCheck {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl OracleCheck {
    fn new(name: &str, outcome: Result<(bool, String)>) -> Result<Self> {
        let (status, detail) = match outcome {
            Ok((true, d)) => (CheckStatus::Pass, d),
            Ok((false, d)) => (CheckStatus::Fail, d),
            Err(Error::UnsupportedModel(r)) => (CheckStatus::Skipped(String::from(r)), String::new()),
            Err(Error::Resource(r)) => (CheckStatus::Skipped(r), String::new()),
            Err(e) => return Err(e),
        };
        Ok(OracleCheck { name: String::from(name), status, detail })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    /// No check failed; skipped checks do not count against the suite.
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

/// Largest word count for which a check enumerates all words; above it 50
/// words are sampled instead.
const ORACLE_ENUMERATION: u64 = 4096;
const ORACLE_SAMPLED_WORDS: u64 = 50;
const PAIR_CHECK_GUARD: u64 = 1 << 20;

fn oracle_words(model: &MeasureModel, k: usize, seed: u64) -> Result<Vec<Word>> {
    if let Some(a) = model.alphabet_size() {
        if word_count(a, k).is_some_and(|c| c <= ORACLE_ENUMERATION) {
            return Ok(enumerate_words(a, k)?.collect());
        }
    }
    (0..ORACLE_SAMPLED_WORDS)
        .map(|i| Ok(Word::new(SequenceGenerator::streaming(model, derive_seed(seed, i)).take(k)?)))
        .collect()
}

fn finite_alphabet(model: &MeasureModel) -> Result<u64> {
    match (model, model.alphabet_size()) {
        (MeasureModel::GaussCf, _) => Err(Error::UnsupportedModel("no finite enumeration for the Gauss measure")),
        (_, Some(a)) => Ok(a),
        (_, None) => Err(Error::UnsupportedModel("countable alphabet has no finite enumeration")),
    }
}

/// `mu(C(w) and shifted C(w))` by summing every word of length `k + l` that
/// starts and ends with `w`.
fn pair_prob_by_enumeration(model: &MeasureModel, w: &Word, l: usize) -> Result<BigRational> {
    let a = finite_alphabet(model)?;
    let k = w.len();
    let total = k + l;
    if word_count(a, total).is_none_or(|c| c > PAIR_CHECK_GUARD) {
        return Err(Error::Resource(format!("{a}^{total} words exceed the pair-check guard")));
    }
    let mut acc = BigRational::zero();
    for v in enumerate_words(a, total)? {
        let s = v.symbols();
        if &s[..k] == w.symbols() && &s[l..] == w.symbols() {
            acc += model.cylinder_prob_exact(&v)?.expect("finite model");
        }
    }
    Ok(acc)
}

/// Runs every oracle check on the configured model, `k` and sets.
pub fn run_oracle_suite(cfg: &ExperimentConfig) -> Result<OracleReport> {
    if cfg.k == 0 {
        return Err(domain("k must be at least 1"));
    }
    let model = &cfg.model;
    let k = cfg.k;
    let mut checks = Vec::new();

    checks.push(OracleCheck::new("expectation_sandwich", (|| {
        let words = oracle_words(model, k, derive_seed(cfg.seed, 10))?;
        let mut n = 0usize;
        for w in &words {
            for s in &cfg.sets {
                let e = oracles::exact_expectation(model, w, s)?;
                if !e.sandwich_holds {
                    return Ok((false, format!("word {w} breaks the sandwich")));
                }
                n += 1;
            }
        }
        Ok((true, format!("{n} (word, set) pairs")))
    })())?);

    let small_k = k.min(4);
    checks.push(OracleCheck::new("variance_dual_path", (|| {
        let a = finite_alphabet(model)?;
        let mut n = 0usize;
        for w in enumerate_words(a, small_k)? {
            for s in &cfg.sets {
                let v = oracles::exact_variance(model, &w, s)?;
                let b = oracles::brute_force_distribution(model, &w, s)?;
                let exact = v.exact.as_ref().map(|e| e.variance.clone());
                let agrees = match exact {
                    Some(e) => e == b.variance(),
                    None => (v.variance - crate::rational::to_f64(&b.variance())).abs() <= 1e-9,
                };
                if !agrees || !oracles::sums_to_one(&b) {
                    return Ok((false, format!("word {w}: variance {} vs brute force", v.variance)));
                }
                n += 1;
            }
        }
        Ok((true, format!("{n} (word, set) pairs at length {small_k}")))
    })())?);

    checks.push(OracleCheck::new("period_class_dual_route", (|| {
        let mut detail = String::new();
        for l in 1..k {
            let a = oracles::period_class_measure(model, k, l)?;
            let b = oracles::period_class_measure_by_extension(model, k, l)?;
            if a != b {
                return Ok((false, format!("l = {l}: {} vs {}", crate::rational::to_string(&a), crate::rational::to_string(&b))));
            }
            if l > 1 {
                detail.push(' ');
            }
            detail.push_str(&crate::rational::to_string(&a));
        }
        Ok((true, detail))
    })())?);

    checks.push(OracleCheck::new("pair_probability", (|| {
        let a = finite_alphabet(model)?;
        let kk = k.min(4);
        let mut n = 0usize;
        for w in enumerate_words(a, kk)? {
            for l in 1..=kk + 1 {
                let fast = oracles::exact_pair_prob(model, &w, l)?;
                let slow = pair_prob_by_enumeration(model, &w, l)?;
                if fast != slow {
                    return Ok((false, format!("word {w}, lag {l}")));
                }
                n += 1;
            }
        }
        Ok((true, format!("{n} (word, lag) pairs")))
    })())?);

    checks.push(OracleCheck::new("annealed_expectation", (|| {
        let mut detail = String::new();
        for s in &cfg.sets {
            let e = oracles::annealed_exact_expectation(model, k, s)?;
            if !e.bound_holds {
                return Ok((false, format!("E = {} vs |S| = {}", e.value, s.length_f64())));
            }
            detail.push_str(&format!("{} ", crate::rational::to_string(&e.exact)));
        }
        Ok((true, String::from(detail.trim_end())))
    })())?);

    checks.push(OracleCheck::new("automaton_vs_brute_force", (|| {
        let a = finite_alphabet(model)?;
        let kk = k.min(4);
        let mut worst: f64 = 0.0;
        for w in enumerate_words(a, kk)? {
            for s in &cfg.sets {
                let b = oracles::brute_force_distribution(model, &w, s)?.to_f64();
                let d = oracles::automaton_distribution(model, &w, s, b.len() + 1)?;
                for j in 0..d.len() {
                    worst = worst.max((d[j] - b.get(j).copied().unwrap_or(0.0)).abs());
                }
            }
        }
        Ok((worst <= 1e-9, format!("max abs difference {worst:e}")))
    })())?);

    Ok(OracleReport { checks })
}

/// One concentration report per configured set.
pub fn run_concentration(cfg: &ExperimentConfig) -> Result<Vec<ConcentrationReport>> {
    cfg.validate()?;
    let profile = cfg.profile()?;
    let n_cap = cfg.effective_n_cap()?;
    let settings = ConcentrationSettings {
        k: cfg.k,
        functional: cfg.functional,
        t_grid: cfg.t_grid.clone(),
        n_replicas: cfg.n_samples,
        n_cap,
        n_word_samples: cfg.n_word_samples,
        seed: cfg.seed,
    };
    cfg.sets.iter().map(|s| concentration_experiment(&cfg.model, &profile, s, &settings)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    pub profile: MixingProfile,
    /// Eta lag table, or `None` when the model has no exact path.
    pub eta: Option<Vec<f64>>,
    pub unsupported_reason: Option<&'static str>,
    /// `eta_m <= T sigma^m` on every tabulated lag.
    pub eta_dominated: Option<bool>,
    pub truncations: Vec<DeltaNorm>,
    pub non_decreasing: bool,
    /// Difference of the norms at the two largest truncations.
    pub stabilization: Option<f64>,
    pub bound: f64,
    pub bound_holds: bool,
}

impl MixingReport {
    pub fn pass(&self) -> bool {
        self.non_decreasing && self.bound_holds && self.eta_dominated != Some(false)
    }
}

pub fn run_mixing(cfg: &ExperimentConfig) -> Result<MixingReport> {
    let profile = cfg.profile()?;
    let bound = delta_norm_bound(&profile)?;
    let max_n = cfg.delta_truncations.iter().copied().max().unwrap_or(0);
    let eta = match eta_coefficients(&cfg.model, max_n, profile.sigma.value) {
        Ok(e) => Ok(e),
        Err(Error::UnsupportedModel(r)) => Err(r),
        Err(e) => return Err(e),
    };
    let eta = match eta {
        Err(reason) => {
            return Ok(MixingReport {
                profile,
                eta: None,
                unsupported_reason: Some(reason),
                eta_dominated: None,
                truncations: Vec::new(),
                non_decreasing: true,
                stabilization: None,
                bound,
                bound_holds: true,
            })
        }
        Ok(e) => e,
    };
    let dominated = eta.dominated_by(profile.t.value, profile.sigma.value);
    let mut ns = cfg.delta_truncations.clone();
    ns.sort_unstable();
    let mut truncations = Vec::with_capacity(ns.len());
    for &n in &ns {
        truncations.push(delta_norm(&delta_matrix(&eta, n), 1e-13)?);
    }
    let non_decreasing = truncations.windows(2).all(|p| p[1].value >= p[0].value - 1e-12);
    let stabilization = match truncations.len() {
        0 | 1 => None,
        l => Some(truncations[l - 1].value - truncations[l - 2].value),
    };
    // the bound only applies when eta sits under T sigma^m
    let bound_holds = !dominated || truncations.iter().all(|d| d.value <= bound * (1.0 + 1e-12));
    Ok(MixingReport {
        profile,
        eta: Some(eta.lags().to_vec()),
        unsupported_reason: None,
        eta_dominated: Some(dominated),
        truncations,
        non_decreasing,
        stabilization,
        bound,
        bound_holds,
    })
}

/// A batch of independent synthetic `Poisson(|S|)` counts per
/// set, for validating the pass/fail harness itself.
pub fn synthetic_poisson_counts(sets: &[IntervalUnion], n: usize, seed: u64) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::with_capacity(sets.len());
    for (i, s) in sets.iter().enumerate() {
        let mut rng = crate::rng::CounterRng::new(derive_seed(seed, i as u64));
        let lambda = s.length_f64();
        out.push((0..n).map(|_| crate::poisson_stats::sample_poisson(&mut rng, lambda)).collect::<Result<_>>()?);
    }
    Ok(out)
}
