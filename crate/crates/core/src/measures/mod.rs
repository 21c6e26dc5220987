//! Invariant measures on sequence space.
//!
//! Three families are supported: i.i.d. symbols (finite support or a
//! geometric tail), stationary Markov chains, and the Gauss measure that
//! drives continued-fraction digits. Parameters are held as exact rationals
//! so cylinder probabilities are exact wherever the model is rational.

mod profile;
mod sampler;

pub use profile::{
    contraction_profile, gauss_distortion_estimate, markov_deviation_exact, psi_mixing_profile, ContractionProfile, GaussMixingAssumption,
    MixingProfile, ProfileValue, Provenance, PsiMixingProfile, MARKOV_FIT_HORIZON,
};
pub use sampler::{draw_gauss_digit, Continuants, SequenceGenerator};

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::linalg::{is_primitive, stationary_vector, RatMatrix};
use crate::rational::{rational_from_f64, to_f64};
use crate::words::Word;

/// A digit of the ambient alphabet. Continued-fraction digits start at 1.
pub type Symbol = u64;

const SUM_TOLERANCE: f64 = 1e-12;
const STATIONARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum IidModel {
    /// Symbols `0..probs.len()` with the given probabilities.
    Finite { probs: Vec<BigRational>, probs_f64: Vec<f64> },
    /// `p_a = (1 - r) r^a` for `a = 0, 1, 2, ...`.
    Geometric { ratio: BigRational, ratio_f64: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovModel {
    transition: RatMatrix,
    transition_f64: Vec<Vec<f64>>,
    stationary: Vec<BigRational>,
    stationary_f64: Vec<f64>,
}

impl MarkovModel {
    pub fn states(&self) -> usize {
        self.transition.dim()
    }

    pub fn transition(&self) -> &RatMatrix {
        &self.transition
    }

    pub fn transition_f64(&self) -> &[Vec<f64>] {
        &self.transition_f64
    }

    pub fn stationary(&self) -> &[BigRational] {
        &self.stationary
    }

    pub fn stationary_f64(&self) -> &[f64] {
        &self.stationary_f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureModel {
    Iid(IidModel),
    Markov(MarkovModel),
    GaussCf,
}

impl MeasureModel {
    /// Finite-support i.i.d. model from exact probabilities.
    pub fn iid(probs: Vec<BigRational>) -> Result<Self> {
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidModel("negative symbol probability".into()));
        }
        let total: BigRational = probs.iter().cloned().sum();
        if (to_f64(&total) - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidModel(format!(
                "probabilities sum to {} instead of 1",
                to_f64(&total)
            )));
        }
        if probs.iter().filter(|p| p.is_positive()).count() < 2 {
            return Err(Error::InvalidModel(
                "at least two symbols must have positive probability".into(),
            ));
        }
        let probs_f64 = probs.iter().map(to_f64).collect();
        Ok(MeasureModel::Iid(IidModel::Finite { probs, probs_f64 }))
    }

    /// Finite-support i.i.d. model; each float is read as the decimal it prints as.
    pub fn iid_f64(probs: &[f64]) -> Result<Self> {
        let exact = probs.iter().map(|&p| rational_from_f64(p)).collect::<Result<Vec<_>>>()?;
        Self::iid(exact)
    }

    /// Uniform i.i.d. model over `base` symbols.
    pub fn uniform(base: usize) -> Result<Self> {
        let p = BigRational::new(BigInt::one(), BigInt::from(base));
        Self::iid(alloc::vec![p; base])
    }

    /// Geometric-tail i.i.d. model `p_a = (1 - r) r^a` on `{0, 1, 2, ...}`.
    pub fn geometric(ratio: BigRational) -> Result<Self> {
        if !ratio.is_positive() || ratio >= BigRational::one() {
            return Err(Error::InvalidModel("geometric ratio must lie in (0, 1)".into()));
        }
        let ratio_f64 = to_f64(&ratio);
        Ok(MeasureModel::Iid(IidModel::Geometric { ratio, ratio_f64 }))
    }

    /// Stationary Markov chain with the given row-stochastic matrix; the
    /// chain starts from its (exactly computed) stationary vector.
    pub fn markov(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let s = rows.len();
        if s < 2 {
            return Err(Error::InvalidModel("a Markov model needs at least two states".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != s {
                return Err(Error::InvalidModel(format!("row {i} has {} entries, expected {s}", row.len())));
            }
            if row.iter().any(|p| p.is_negative()) {
                return Err(Error::InvalidModel(format!("row {i} has a negative entry")));
            }
            let total: BigRational = row.iter().cloned().sum();
            if (to_f64(&total) - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidModel(format!("row {i} sums to {}", to_f64(&total))));
            }
        }
        let positive: Vec<Vec<bool>> =
            rows.iter().map(|r| r.iter().map(|p| p.is_positive()).collect()).collect();
        if !is_primitive(&positive, s * s) {
            return Err(Error::InvalidModel(
                "transition matrix is not irreducible and aperiodic".into(),
            ));
        }
        let transition = RatMatrix::from_rows(&rows);
        let stationary = stationary_vector(&transition)?;
        let stationary_f64: Vec<f64> = stationary.iter().map(to_f64).collect();
        let transition_f64 = transition.to_f64_rows();
        for j in 0..s {
            let image: f64 = (0..s).map(|i| stationary_f64[i] * transition_f64[i][j]).sum();
            if (image - stationary_f64[j]).abs() > STATIONARY_TOLERANCE {
                return Err(Error::Internal("stationary vector check failed".into()));
            }
        }
        Ok(MeasureModel::Markov(MarkovModel { transition, transition_f64, stationary, stationary_f64 }))
    }

    pub fn markov_f64(rows: &[Vec<f64>]) -> Result<Self> {
        let exact = rows
            .iter()
            .map(|r| r.iter().map(|&p| rational_from_f64(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::markov(exact)
    }

    pub fn gauss_cf() -> Self {
        MeasureModel::GaussCf
    }

    /// Number of symbols for finite-alphabet models.
    pub fn alphabet_size(&self) -> Option<u64> {
        match self {
            MeasureModel::Iid(IidModel::Finite { probs, .. }) => Some(probs.len() as u64),
            MeasureModel::Iid(IidModel::Geometric { .. }) => None,
            MeasureModel::Markov(m) => Some(m.states() as u64),
            MeasureModel::GaussCf => None,
        }
    }

    /// Smallest admissible symbol.
    pub fn min_symbol(&self) -> Symbol {
        match self {
            MeasureModel::GaussCf => 1,
            _ => 0,
        }
    }

    pub fn check_symbol(&self, a: Symbol) -> Result<()> {
        let ok = match self.alphabet_size() {
            Some(n) => a < n,
            None => a >= self.min_symbol(),
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("symbol {a} is outside the alphabet")))
        }
    }

    /// Exact mass `mu_k(w)` of the cylinder of `w`.
    pub fn cylinder_mass(&self, w: &Word) -> Result<CylinderMass> {
        if w.is_empty() {
            return Err(domain("cylinder of the empty word"));
        }
        for &a in w.symbols() {
            self.check_symbol(a)?;
        }
        let syms = w.symbols();
        match self {
            MeasureModel::Iid(IidModel::Finite { probs, .. }) => {
                let mut acc = BigRational::one();
                for &a in syms {
                    acc *= &probs[a as usize];
                }
                Ok(CylinderMass::Rational(acc))
            }
            MeasureModel::Iid(IidModel::Geometric { ratio, .. }) => {
                let total: u64 = syms.iter().sum();
                let one_minus = BigRational::one() - ratio;
                let acc = Pow::pow(&one_minus, syms.len() as u64) * Pow::pow(ratio, total);
                Ok(CylinderMass::Rational(acc))
            }
            MeasureModel::Markov(m) => {
                let mut acc = m.stationary[syms[0] as usize].clone();
                for pair in syms.windows(2) {
                    acc *= m.transition.get(pair[0] as usize, pair[1] as usize);
                }
                Ok(CylinderMass::Rational(acc))
            }
            MeasureModel::GaussCf => Ok(CylinderMass::Gauss(GaussMass::of_digits(syms))),
        }
    }

    /// `mu_k(w)` as a float.
    pub fn cylinder_prob(&self, w: &Word) -> Result<f64> {
        Ok(self.cylinder_mass(w)?.value())
    }

    /// `mu_k(w)` as an exact rational, when the model is rational.
    pub fn cylinder_prob_exact(&self, w: &Word) -> Result<Option<BigRational>> {
        Ok(match self.cylinder_mass(w)? {
            CylinderMass::Rational(r) => Some(r),
            CylinderMass::Gauss(_) => None,
        })
    }

    /// Lower bound on the positive cylinder masses of length `k`, when finite.
    pub fn min_positive_cylinder(&self, k: usize) -> Option<f64> {
        match self {
            MeasureModel::Iid(IidModel::Finite { probs_f64, .. }) => {
                let pmin = probs_f64.iter().copied().filter(|&p| p > 0.0).fold(f64::INFINITY, f64::min);
                Some(libm::pow(pmin, k as f64))
            }
            MeasureModel::Markov(m) => {
                let pi_min = m.stationary_f64.iter().copied().fold(f64::INFINITY, f64::min);
                let p_min = m
                    .transition_f64
                    .iter()
                    .flatten()
                    .copied()
                    .filter(|&p| p > 0.0)
                    .fold(f64::INFINITY, f64::min);
                Some(pi_min * libm::pow(p_min, k.saturating_sub(1) as f64))
            }
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MeasureModel::Iid(_) => "iid",
            MeasureModel::Markov(_) => "markov",
            MeasureModel::GaussCf => "gauss_cf",
        }
    }
}

/// The measure of a cylinder, kept exact.
#[derive(Debug, Clone, PartialEq)]
pub enum CylinderMass {
    Rational(BigRational),
    Gauss(GaussMass),
}

impl CylinderMass {
    pub fn value(&self) -> f64 {
        match self {
            CylinderMass::Rational(r) => to_f64(r),
            CylinderMass::Gauss(g) => g.value,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CylinderMass::Rational(r) => r.is_zero(),
            CylinderMass::Gauss(_) => false,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            CylinderMass::Rational(r) => Some(r),
            CylinderMass::Gauss(_) => None,
        }
    }

    /// Exact comparison of `i * mass` with `target`.
    pub fn cmp_scaled(&self, i: u64, target: &BigRational) -> Result<Ordering> {
        match self {
            CylinderMass::Rational(r) => Ok((r * BigRational::from_integer(BigInt::from(i))).cmp(target)),
            CylinderMass::Gauss(g) => g.cmp_scaled(i, target),
        }
    }
}

/// Gauss measure of a continued-fraction cylinder.
///
/// For digits `a_1..a_k` with continuants `p_k/q_k`, the cylinder is the
/// interval between `p_k/q_k` and `(p_k + p_{k-1})/(q_k + q_{k-1})`, and its
/// Gauss mass is `|log2(1 + s/B)|` with `B = q_k (q_k + p_k + q_{k-1} + p_{k-1})`
/// and `s = p_k q_{k-1} - q_k p_{k-1} = (-1)^(k+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussMass {
    denom: BigUint,
    plus: bool,
    value: f64,
    continuants: Continuants,
}

/// Relative half-width of the band in which float comparisons are not trusted.
const GUARD_BAND: f64 = 1e-12;

impl GaussMass {
    pub fn of_digits(digits: &[Symbol]) -> Self {
        let mut c = Continuants::start();
        for &a in digits {
            c.push(a);
        }
        Self::from_continuants(c)
    }

    pub fn from_continuants(c: Continuants) -> Self {
        let big_q = &c.q + &c.p;
        let big_q_prev = &c.q_prev + &c.p_prev;
        let denom = &c.q * (big_q + big_q_prev);
        let plus = c.determinant_positive();
        let y = 1.0 / crate::rational::uint_ratio(&denom, &BigUint::one());
        let ln = if plus { libm::log1p(y) } else { -libm::log1p(-y) };
        let value = ln / core::f64::consts::LN_2;
        Self { denom, plus, value, continuants: c }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn continuants(&self) -> &Continuants {
        &self.continuants
    }

    /// The cylinder endpoints `(p_k/q_k, (p_k+p_{k-1})/(q_k+q_{k-1}))`, unordered.
    pub fn endpoints(&self) -> (BigRational, BigRational) {
        let c = &self.continuants;
        let to_int = crate::rational::big_uint_to_int;
        let x1 = BigRational::new(to_int(&c.p), to_int(&c.q));
        let x2 = BigRational::new(to_int(&(&c.p + &c.p_prev)), to_int(&(&c.q + &c.q_prev)));
        (x1, x2)
    }

    pub fn cmp_scaled(&self, i: u64, target: &BigRational) -> Result<Ordering> {
        let t = to_f64(target);
        let lhs = i as f64 * self.value;
        let scale = lhs.abs().max(t.abs());
        if (lhs - t).abs() > GUARD_BAND * scale {
            return Ok(lhs.partial_cmp(&t).unwrap_or(Ordering::Equal));
        }
        crate::hiprec::compare_scaled_log(i, &self.denom, self.plus, target)
    }
}

impl Continuants {
    pub(crate) fn determinant_positive(&self) -> bool {
        &self.p * &self.q_prev >= &self.q * &self.p_prev
    }
}

/// Helper used by tests and oracles: `log2((1 + x1)/(1 + x2))` for rational endpoints.
pub fn gauss_interval_mass(x1: &BigRational, x2: &BigRational) -> f64 {
    let one = BigRational::one();
    let ratio = (&one + x1) / (&one + x2);
    libm::log2(to_f64(&ratio)).abs()
}
