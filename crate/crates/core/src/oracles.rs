//! Exact small-scale ground truth: expectations, pair probabilities, the
//! three-term variance decomposition, period-class measures and exact count
//! distributions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{domain, resource, Error, Result};
use crate::measures::{contraction_profile, IidModel, MeasureModel, MixingProfile, Symbol};
use crate::point_process::{j_set, IndexSet, IntervalUnion};
use crate::rational::{from_u64, to_f64};
use crate::words::{enumerate_words, word_count, Word};

/// Largest `#J` accepted by [`exact_variance`].
pub const VARIANCE_INDEX_GUARD: u64 = 10_000_000;
/// Longest window enumerated by [`brute_force_distribution`].
pub const BRUTE_FORCE_MAX_LEN: usize = 26;
/// Largest number of sequences enumerated by [`brute_force_distribution`].
pub const BRUTE_FORCE_MAX_SEQUENCES: u64 = 1 << 26;
/// Largest `|Omega|^k` accepted by [`annealed_exact_expectation`].
pub const ANNEALED_GUARD: u64 = 1 << 20;
/// Longest lag range for which Markov variances are summed exactly.
pub const MARKOV_EXACT_LAG_LIMIT: u64 = 1024;

fn big(v: u64) -> BigRational {
    from_u64(v)
}

/// `E[M_k^w(S)] = #J * mu_k(w)` with the sandwich `|E - |S|| <= m mu_k(w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationResult {
    pub value: f64,
    /// Exact value when the cylinder mass is rational.
    pub exact: Option<BigRational>,
    pub index_count: u64,
    pub mu_w: f64,
    pub zero_measure: bool,
    pub sandwich_holds: bool,
}

pub fn exact_expectation(model: &MeasureModel, w: &Word, s: &IntervalUnion) -> Result<ExpectationResult> {
    let mass = model.cylinder_mass(w)?;
    if mass.is_zero() {
        return Ok(ExpectationResult {
            value: 0.0,
            exact: Some(BigRational::zero()),
            index_count: 0,
            mu_w: 0.0,
            zero_measure: true,
            sandwich_holds: true,
        });
    }
    let j = j_set(&mass, s)?;
    let n = j.len();
    let m = s.m() as u64;
    // (n - m) mu <= |S| <= (n + m) mu, decided exactly.
    let upper = mass.cmp_scaled(n + m, s.length())? != Ordering::Less;
    let lower = n < m || mass.cmp_scaled(n - m, s.length())? != Ordering::Greater;
    let exact = mass.as_rational().map(|mu| mu * big(n));
    Ok(ExpectationResult {
        value: n as f64 * mass.value(),
        exact,
        index_count: n,
        mu_w: mass.value(),
        zero_measure: false,
        sandwich_holds: upper && lower,
    })
}

/// Probability of a transition path of `gap` steps from `a` to `b`.
fn markov_gap_prob(model: &crate::measures::MarkovModel, a: usize, b: usize, steps: u64) -> BigRational {
    model.transition().pow(steps).get(a, b).clone()
}

/// `E[I_i I_{i+l}]` for `l >= 1`, exactly.
pub fn exact_pair_prob(model: &MeasureModel, w: &Word, l: usize) -> Result<BigRational> {
    if l == 0 {
        return Err(domain("pair lag must be at least 1"));
    }
    if matches!(model, MeasureModel::GaussCf) {
        return Err(Error::UnsupportedModel("pair probabilities have no exact path for the Gauss measure"));
    }
    let k = w.len();
    if l < k {
        if !w.has_period(l) {
            return Ok(BigRational::zero());
        }
        let merged = w.overlap_merge(l)?;
        return Ok(model.cylinder_prob_exact(&merged)?.expect("rational model"));
    }
    let mu = model.cylinder_prob_exact(w)?.expect("rational model");
    match model {
        MeasureModel::Iid(_) => Ok(&mu * &mu),
        MeasureModel::Markov(m) => {
            let first = w.symbols()[0] as usize;
            let last = w.symbols()[k - 1] as usize;
            let pi = &m.stationary()[first];
            if pi.is_zero() || mu.is_zero() {
                return Ok(BigRational::zero());
            }
            let steps = (l - k + 1) as u64;
            Ok(&mu * markov_gap_prob(m, last, first, steps) * &mu / pi)
        }
        MeasureModel::GaussCf => unreachable!(),
    }
}

/// Second-moment decomposition `E[M^2] = E_1 + E_2 + E_3` over diagonal,
/// overlapping and separated pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceBreakdown {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub expectation: f64,
    pub variance: f64,
    /// The same quantities in exact arithmetic, when every term was summed exactly.
    pub exact: Option<ExactBreakdown>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactBreakdown {
    pub e1: BigRational,
    pub e2: BigRational,
    pub e3: BigRational,
    pub variance: BigRational,
}

impl VarianceBreakdown {
    fn zero() -> Self {
        let z = BigRational::zero();
        VarianceBreakdown {
            e1: 0.0,
            e2: 0.0,
            e3: 0.0,
            expectation: 0.0,
            variance: 0.0,
            exact: Some(ExactBreakdown { e1: z.clone(), e2: z.clone(), e3: z.clone(), variance: z }),
        }
    }

    fn from_exact(e1: BigRational, e2: BigRational, e3: BigRational) -> Self {
        let variance = &e1 + &e2 + &e3 - &e1 * &e1;
        VarianceBreakdown {
            e1: to_f64(&e1),
            e2: to_f64(&e2),
            e3: to_f64(&e3),
            expectation: to_f64(&e1),
            variance: to_f64(&variance),
            exact: Some(ExactBreakdown { e1, e2, e3, variance }),
        }
    }
}

/// Exact variance of `M_k^w(S)` by per-lag pair counting.
pub fn exact_variance(model: &MeasureModel, w: &Word, s: &IntervalUnion) -> Result<VarianceBreakdown> {
    if matches!(model, MeasureModel::GaussCf) {
        return Err(Error::UnsupportedModel("variance has no exact path for the Gauss measure"));
    }
    let mu = model.cylinder_prob_exact(w)?.expect("rational model");
    if mu.is_zero() || s.is_empty() {
        return Ok(VarianceBreakdown::zero());
    }
    let j = j_set(&crate::measures::CylinderMass::Rational(mu.clone()), s)?;
    let n = j.len();
    if n > VARIANCE_INDEX_GUARD {
        return Err(resource(alloc::format!("#J = {n} exceeds the variance guard")));
    }
    if n == 0 {
        return Ok(VarianceBreakdown::zero());
    }
    let k = w.len();
    let e1 = &mu * big(n);
    let mut e2 = BigRational::zero();
    let mut near_pairs = 0u64; // ordered pairs with 1 <= |i - j| < k, counted once per direction
    for l in 1..k {
        let pairs = j.pairs_at_lag(l as u64);
        near_pairs += pairs;
        if pairs > 0 && w.has_period(l) {
            e2 += exact_pair_prob(model, w, l)? * big(2 * pairs);
        }
    }
    let total_half = n * (n - 1) / 2;
    let far_half = total_half - near_pairs;
    match model {
        MeasureModel::Iid(_) => {
            let e3 = &mu * &mu * big(2 * far_half);
            Ok(VarianceBreakdown::from_exact(e1, e2, e3))
        }
        MeasureModel::Markov(m) => {
            let span = j.max().unwrap() - j.min().unwrap();
            if span <= MARKOV_EXACT_LAG_LIMIT {
                let e3 = markov_far_exact(m, w, &mu, &j, span)?;
                Ok(VarianceBreakdown::from_exact(e1, e2, e3))
            } else {
                let e3 = markov_far_f64(m, w, to_f64(&mu), &j, far_half)?;
                let (e1f, e2f) = (to_f64(&e1), to_f64(&e2));
                Ok(VarianceBreakdown {
                    e1: e1f,
                    e2: e2f,
                    e3,
                    expectation: e1f,
                    variance: e1f + e2f + e3 - e1f * e1f,
                    exact: None,
                })
            }
        }
        MeasureModel::GaussCf => unreachable!(),
    }
}

fn markov_far_exact(
    m: &crate::measures::MarkovModel,
    w: &Word,
    mu: &BigRational,
    j: &IndexSet,
    span: u64,
) -> Result<BigRational> {
    let k = w.len() as u64;
    let first = w.symbols()[0] as usize;
    let last = w.symbols()[k as usize - 1] as usize;
    let pi = &m.stationary()[first];
    let p = m.transition();
    let states = p.dim();
    // row = P^g(last, .), starting from g = 1
    let mut row: Vec<BigRational> = (0..states).map(|b| p.get(last, b).clone()).collect();
    let scale = mu * mu / pi;
    let mut e3 = BigRational::zero();
    let mut l = k;
    while l <= span {
        let pairs = j.pairs_at_lag(l);
        if pairs > 0 {
            e3 += &scale * &row[first] * big(2 * pairs);
        }
        let mut next = vec![BigRational::zero(); states];
        for (a, ra) in row.iter().enumerate() {
            if ra.is_zero() {
                continue;
            }
            for (b, nb) in next.iter_mut().enumerate() {
                let pab = p.get(a, b);
                if !pab.is_zero() {
                    *nb += ra * pab;
                }
            }
        }
        row = next;
        l += 1;
    }
    Ok(e3)
}

fn markov_far_f64(m: &crate::measures::MarkovModel, w: &Word, mu: f64, j: &IndexSet, far_half: u64) -> Result<f64> {
    let k = w.len() as u64;
    let first = w.symbols()[0] as usize;
    let last = w.symbols()[k as usize - 1] as usize;
    let p = m.transition_f64();
    let pi = m.stationary_f64();
    let states = p.len();
    let mut row: Vec<f64> = p[last].clone();
    let mut e3 = 0.0;
    let mut seen_half = 0u64;
    let span = j.max().unwrap() - j.min().unwrap();
    let mut l = k;
    while l <= span {
        let pairs = j.pairs_at_lag(l);
        seen_half += pairs;
        e3 += 2.0 * pairs as f64 * mu * mu * row[first] / pi[first];
        let converged = row.iter().zip(pi).all(|(r, q)| (r - q).abs() <= 1e-17 * q);
        if converged {
            // remaining lags contribute mu^2 per pair
            e3 += 2.0 * (far_half - seen_half) as f64 * mu * mu;
            return Ok(e3);
        }
        let mut next = vec![0.0; states];
        for a in 0..states {
            for b in 0..states {
                next[b] += row[a] * p[a][b];
            }
        }
        row = next;
        l += 1;
    }
    Ok(e3)
}

fn finite_alphabet(model: &MeasureModel) -> Result<u64> {
    match model {
        MeasureModel::Iid(IidModel::Finite { .. }) | MeasureModel::Markov(_) => {
            Ok(model.alphabet_size().expect("finite model"))
        }
        _ => Err(Error::UnsupportedModel("enumeration needs a finite alphabet")),
    }
}

/// `mu_k(W_k^l)`: the mass of words of length `k` having period `l`, by
/// enumerating `Omega^k`.
pub fn period_class_measure(model: &MeasureModel, k: usize, l: usize) -> Result<BigRational> {
    if !(1 <= l && l < k) {
        return Err(domain("period class needs 1 <= l < k"));
    }
    let a = finite_alphabet(model)?;
    let mut total = BigRational::zero();
    for w in enumerate_words(a, k)? {
        if w.has_period(l) {
            total += model.cylinder_prob_exact(&w)?.expect("rational model");
        }
    }
    Ok(total)
}

/// Same quantity as [`period_class_measure`], summed over periodic extensions
/// `ext(v, k)` of all `v` in `Omega^l`.
pub fn period_class_measure_by_extension(model: &MeasureModel, k: usize, l: usize) -> Result<BigRational> {
    if !(1 <= l && l < k) {
        return Err(domain("period class needs 1 <= l < k"));
    }
    let a = finite_alphabet(model)?;
    let mut total = BigRational::zero();
    for v in enumerate_words(a, l)? {
        total += model.cylinder_prob_exact(&v.ext(k)?)?.expect("rational model");
    }
    Ok(total)
}

/// Exact law of a count, `probs[j] = P(M = j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    pub probs: Vec<BigRational>,
}

impl ExactDistribution {
    pub fn point_mass_at_zero() -> Self {
        ExactDistribution { probs: vec![BigRational::one()] }
    }

    pub fn total(&self) -> BigRational {
        self.probs.iter().cloned().sum()
    }

    pub fn mean(&self) -> BigRational {
        self.probs.iter().enumerate().map(|(j, p)| p * big(j as u64)).sum()
    }

    pub fn variance(&self) -> BigRational {
        let m = self.mean();
        let second: BigRational = self.probs.iter().enumerate().map(|(j, p)| p * big((j * j) as u64)).sum();
        second - &m * &m
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(to_f64).collect()
    }
}

// The window `[min J, max J + k - 1]` and the shifted index mask inside it.
// Stationarity makes the law of the window independent of where it starts.
fn relevant_window(w: &Word, j: &IndexSet) -> (usize, Vec<bool>) {
    let a = j.min().unwrap();
    let b = j.max().unwrap();
    let len = (b - a) as usize + w.len();
    let mut starts = vec![false; len + 1];
    for i in j.iter() {
        starts[(i - a) as usize + 1] = true;
    }
    (len, starts)
}

/// Exact law of `M_k^w(S)` by enumerating every sequence on the window of
/// positions that can contribute.
pub fn brute_force_distribution(model: &MeasureModel, w: &Word, s: &IntervalUnion) -> Result<ExactDistribution> {
    let alphabet = finite_alphabet(model)?;
    let mass = model.cylinder_mass(w)?;
    if mass.is_zero() || s.is_empty() {
        return Ok(ExactDistribution::point_mass_at_zero());
    }
    let j = j_set(&mass, s)?;
    if j.is_empty() {
        return Ok(ExactDistribution::point_mass_at_zero());
    }
    let (len, starts) = relevant_window(w, &j);
    let fits = len <= BRUTE_FORCE_MAX_LEN && word_count(alphabet, len).is_some_and(|c| c <= BRUTE_FORCE_MAX_SEQUENCES);
    if !fits {
        return Err(resource(alloc::format!("window of {len} symbols over {alphabet} letters exceeds the guard")));
    }
    let enumerator = Enumerator::new(model, w, len, &starts, alphabet as usize);
    enumerator.run()
}

/// Depth-first enumeration that tallies sequences by (count, sufficient
/// statistic of their probability), so exact arithmetic runs once per class.
struct Enumerator<'a> {
    model: &'a MeasureModel,
    word: &'a [Symbol],
    len: usize,
    starts: &'a [bool],
    alphabet: usize,
    allowed_first: Vec<bool>,
    allowed_step: Vec<Vec<bool>>,
}

impl<'a> Enumerator<'a> {
    fn new(model: &'a MeasureModel, w: &'a Word, len: usize, starts: &'a [bool], alphabet: usize) -> Self {
        let (allowed_first, allowed_step) = match model {
            MeasureModel::Iid(IidModel::Finite { probs, .. }) => {
                let ok: Vec<bool> = probs.iter().map(|p| !p.is_zero()).collect();
                (ok.clone(), vec![ok; alphabet])
            }
            MeasureModel::Markov(m) => (
                m.stationary().iter().map(|p| !p.is_zero()).collect(),
                (0..alphabet).map(|a| (0..alphabet).map(|b| !m.transition().get(a, b).is_zero()).collect()).collect(),
            ),
            _ => unreachable!(),
        };
        Enumerator { model, word: w.symbols(), len, starts, alphabet, allowed_first, allowed_step }
    }

    fn key_len(&self) -> usize {
        match self.model {
            MeasureModel::Markov(_) => 2 + self.alphabet * self.alphabet,
            _ => 1 + self.alphabet,
        }
    }

    fn run(self) -> Result<ExactDistribution> {
        let mut tally: BTreeMap<Vec<u16>, u64> = BTreeMap::new();
        let mut seq: Vec<Symbol> = vec![0; self.len];
        let mut key = vec![0u16; self.key_len()];
        self.visit(0, &mut seq, &mut key, &mut tally);
        let mut probs: Vec<BigRational> = Vec::new();
        for (key, mult) in tally {
            let count = key[0] as usize;
            if probs.len() <= count {
                probs.resize(count + 1, BigRational::zero());
            }
            probs[count] += self.class_prob(&key) * big(mult);
        }
        Ok(ExactDistribution { probs })
    }

    fn class_prob(&self, key: &[u16]) -> BigRational {
        match self.model {
            MeasureModel::Iid(IidModel::Finite { probs, .. }) => {
                let mut acc = BigRational::one();
                for (a, &e) in key[1..].iter().enumerate() {
                    if e > 0 {
                        acc *= Pow::pow(&probs[a], e as u32);
                    }
                }
                acc
            }
            MeasureModel::Markov(m) => {
                let mut acc = m.stationary()[key[1] as usize].clone();
                for (ab, &e) in key[2..].iter().enumerate() {
                    if e > 0 {
                        let p = m.transition().get(ab / self.alphabet, ab % self.alphabet);
                        acc *= Pow::pow(p, e as u32);
                    }
                }
                acc
            }
            _ => unreachable!(),
        }
    }

    fn visit(&self, depth: usize, seq: &mut [Symbol], key: &mut [u16], tally: &mut BTreeMap<Vec<u16>, u64>) {
        if depth == self.len {
            *tally.entry(key.to_vec()).or_insert(0) += 1;
            return;
        }
        let k = self.word.len();
        let markov = matches!(self.model, MeasureModel::Markov(_));
        for a in 0..self.alphabet {
            let allowed = if depth == 0 { self.allowed_first[a] } else { self.allowed_step[seq[depth - 1] as usize][a] };
            if !allowed {
                continue;
            }
            seq[depth] = a as Symbol;
            let stat = if markov {
                if depth == 0 {
                    key[1] = a as u16;
                    None
                } else {
                    Some(2 + seq[depth - 1] as usize * self.alphabet + a)
                }
            } else {
                Some(1 + a)
            };
            if let Some(slot) = stat {
                key[slot] += 1;
            }
            // a window ending here starts at depth + 2 - k (1-based)
            let hit = depth + 1 >= k && {
                let start = depth + 1 - k;
                self.starts[start + 1] && seq[start..=depth] == *self.word
            };
            if hit {
                key[0] += 1;
            }
            self.visit(depth + 1, seq, key, tally);
            if hit {
                key[0] -= 1;
            }
            if let Some(slot) = stat {
                key[slot] -= 1;
            }
        }
    }
}

/// Pattern-matching automaton over a finite alphabet: state `q` is the length
/// of the longest suffix of the input that is a prefix of `w`.
fn kmp_automaton(w: &[Symbol], alphabet: usize) -> Vec<Vec<usize>> {
    let k = w.len();
    let mut fail = vec![0usize; k + 1];
    for q in 1..k {
        let mut f = fail[q];
        while f > 0 && w[f] != w[q] {
            f = fail[f];
        }
        fail[q + 1] = if w[f] == w[q] && f < q { f + 1 } else { 0 };
    }
    let mut delta = vec![vec![0usize; alphabet]; k + 1];
    for q in 0..=k {
        for a in 0..alphabet {
            delta[q][a] = if q < k && w[q] as usize == a {
                q + 1
            } else if q == 0 {
                0
            } else {
                delta[fail[q]][a]
            };
        }
    }
    delta
}

/// Law of `M_k^w(S)` by dynamic programming over the matching automaton, in
/// floating point. `probs[j]` for `j <= count_cap`, then the mass above the cap.
pub fn automaton_distribution(
    model: &MeasureModel,
    w: &Word,
    s: &IntervalUnion,
    count_cap: usize,
) -> Result<Vec<f64>> {
    let alphabet = finite_alphabet(model)? as usize;
    let mass = model.cylinder_mass(w)?;
    let mut point = vec![0.0; count_cap + 2];
    point[0] = 1.0;
    if mass.is_zero() || s.is_empty() {
        return Ok(point);
    }
    let j = j_set(&mass, s)?;
    if j.is_empty() {
        return Ok(point);
    }
    if j.max().unwrap() - j.min().unwrap() > VARIANCE_INDEX_GUARD {
        return Err(resource("window too long for the automaton"));
    }
    let (len, starts) = relevant_window(w, &j);
    let k = w.len();
    let delta = kmp_automaton(w.symbols(), alphabet);
    let (first, step): (Vec<f64>, Vec<Vec<f64>>) = match model {
        MeasureModel::Iid(IidModel::Finite { probs_f64, .. }) => (probs_f64.clone(), vec![probs_f64.clone(); alphabet]),
        MeasureModel::Markov(m) => (m.stationary_f64().to_vec(), m.transition_f64().to_vec()),
        _ => unreachable!(),
    };
    let counts = count_cap + 2;
    // layout: [q][last][count]
    let idx = |q: usize, a: usize, c: usize| (q * alphabet + a) * counts + c;
    let size = (k + 1) * alphabet * counts;
    let mut cur = vec![0.0; size];
    for a in 0..alphabet {
        let q = delta[0][a];
        let hit = q == k && starts[1];
        cur[idx(q, a, hit as usize)] += first[a];
    }
    for pos in 2..=len {
        let mut next = vec![0.0; size];
        let start_ok = pos >= k && starts[pos + 1 - k];
        for q in 0..=k {
            for a in 0..alphabet {
                let base = idx(q, a, 0);
                if cur[base..base + counts].iter().all(|&x| x == 0.0) {
                    continue;
                }
                for b in 0..alphabet {
                    let p = step[a][b];
                    if p == 0.0 {
                        continue;
                    }
                    let q2 = delta[q][b];
                    let bump = (q2 == k && start_ok) as usize;
                    for c in 0..counts {
                        let v = cur[base + c];
                        if v != 0.0 {
                            let c2 = (c + bump).min(count_cap + 1);
                            next[idx(q2, b, c2)] += v * p;
                        }
                    }
                }
            }
        }
        cur = next;
    }
    let mut out = vec![0.0; counts];
    for q in 0..=k {
        for a in 0..alphabet {
            for c in 0..counts {
                out[c] += cur[idx(q, a, c)];
            }
        }
    }
    Ok(out)
}

/// `sum_w mu_k(w) E[M_k^w(S)]` with the check `|E - |S|| <= m K rho^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealedExpectation {
    pub exact: BigRational,
    pub value: f64,
    pub slack: f64,
    pub bound_holds: bool,
}

pub fn annealed_exact_expectation(model: &MeasureModel, k: usize, s: &IntervalUnion) -> Result<AnnealedExpectation> {
    let alphabet = finite_alphabet(model)?;
    if word_count(alphabet, k).is_none_or(|c| c > ANNEALED_GUARD) {
        return Err(resource(alloc::format!("{alphabet}^{k} words exceed the annealed guard")));
    }
    let mut total = BigRational::zero();
    for w in enumerate_words(alphabet, k)? {
        let mu = model.cylinder_prob_exact(&w)?.expect("rational model");
        if mu.is_zero() || s.is_empty() {
            continue;
        }
        let n = j_set(&crate::measures::CylinderMass::Rational(mu.clone()), s)?.len();
        total += &mu * &mu * big(n);
    }
    let c = contraction_profile(model)?;
    let slack = s.m() as f64 * c.k_const.value * libm::pow(c.rho.value, k as f64);
    let value = to_f64(&total);
    Ok(AnnealedExpectation {
        bound_holds: (value - s.length_f64()).abs() <= slack * (1.0 + 1e-12),
        exact: total,
        value,
        slack,
    })
}

/// `ln(n) / n` with `n = |S| / (2 K rho^k)`, or `None` when `n < 3`.
pub fn log_n_over_n_bound(k: usize, s: &IntervalUnion, profile: &MixingProfile) -> Option<f64> {
    let n = s.length_f64() / (2.0 * profile.cylinder_bound(k));
    if n >= 3.0 {
        Some(libm::log(n) / n)
    } else {
        None
    }
}

/// `k rho^k + sum_{l in periods(w)} rho^l`, the shape of the variance and
/// total-variation error terms.
pub fn overlap_error_shape(w: &Word, rho: f64) -> f64 {
    let k = w.len();
    let mut acc = k as f64 * libm::pow(rho, k as f64);
    for l in w.periods() {
        acc += libm::pow(rho, l as f64);
    }
    acc
}

/// Total variation between an exact count law and `Poisson(lambda)`.
pub fn tv_to_poisson(probs: &[f64], lambda: f64) -> Result<f64> {
    let j_max = crate::poisson_stats::histogram_cut(lambda).max(probs.len() as u64);
    let mut p = vec![0.0; j_max as usize + 2];
    for (j, &v) in probs.iter().enumerate() {
        p[j] += v;
    }
    let q = crate::poisson_stats::poisson_binned(lambda, j_max)?;
    crate::poisson_stats::tv_distance(&p, &q)
}

/// True if the probabilities sum to exactly one.
pub fn sums_to_one(d: &ExactDistribution) -> bool {
    d.total() == BigRational::one()
}
