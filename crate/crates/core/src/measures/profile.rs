//! Contraction and psi-mixing constants attached to each measure.

use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{IidModel, MeasureModel};
use crate::error::{Error, Result};
use crate::linalg::{spectral_radius, RatMatrix};
use crate::rational::to_f64;
use crate::words::Word;

/// Horizon `m_max` of the exact deviation table used to fit the Markov `T`.
pub const MARKOV_FIT_HORIZON: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    Assumed,
    Estimated,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Exact => "EXACT",
            Provenance::Assumed => "ASSUMED",
            Provenance::Estimated => "ESTIMATED",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValue {
    pub value: f64,
    pub provenance: Provenance,
}

impl ProfileValue {
    fn exact(value: f64) -> Self {
        Self { value, provenance: Provenance::Exact }
    }
    fn estimated(value: f64) -> Self {
        Self { value, provenance: Provenance::Estimated }
    }
    fn assumed(value: f64) -> Self {
        Self { value, provenance: Provenance::Assumed }
    }
}

/// `mu_k(w) <= K rho^k` for every word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionProfile {
    pub rho: ProfileValue,
    pub k_const: ProfileValue,
}

/// `|mu(I_i(u) I_j(v)) / (mu(u) mu(v)) - 1| <= T sigma^gap`, plus the
/// bounded-distortion constant `R`. `sigma == 0` encodes independence:
/// `T sigma^m` is taken to be `0` for every `m >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiMixingProfile {
    pub t: ProfileValue,
    pub sigma: ProfileValue,
    pub r: ProfileValue,
    /// Markov only: `dev(m) = max_{a,b} |P^m(a,b)/pi(b) - 1|` for `m = 1..=m_max`.
    pub deviation_table: Vec<f64>,
}

impl PsiMixingProfile {
    /// `T sigma^m` with the independence convention.
    pub fn envelope(&self, gap: u64) -> f64 {
        if self.sigma.value == 0.0 {
            if gap == 0 {
                self.t.value
            } else {
                0.0
            }
        } else {
            self.t.value * libm::pow(self.sigma.value, gap as f64)
        }
    }
}

/// User-supplied `(T, sigma)` for the Gauss measure, which has no computable
/// certified values here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussMixingAssumption {
    pub t: f64,
    pub sigma: f64,
}

impl Default for GaussMixingAssumption {
    fn default() -> Self {
        Self { t: 1.0, sigma: 0.303 }
    }
}

/// All constants for one measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingProfile {
    pub t: ProfileValue,
    pub sigma: ProfileValue,
    pub rho: ProfileValue,
    pub k_const: ProfileValue,
    pub r: ProfileValue,
    pub deviation_table: Vec<f64>,
}

impl MixingProfile {
    pub fn for_model(model: &MeasureModel, gauss: GaussMixingAssumption) -> Result<Self> {
        let c = contraction_profile(model)?;
        let p = psi_mixing_profile(model, gauss)?;
        let profile = Self {
            t: p.t,
            sigma: p.sigma,
            rho: c.rho,
            k_const: c.k_const,
            r: p.r,
            deviation_table: p.deviation_table,
        };
        profile.validate()?;
        Ok(profile)
    }

    /// Builds a profile from raw constants (all marked as assumed).
    pub fn assumed(t: f64, sigma: f64, rho: f64, k_const: f64, r: f64) -> Result<Self> {
        let profile = Self {
            t: ProfileValue::assumed(t),
            sigma: ProfileValue::assumed(sigma),
            rho: ProfileValue::assumed(rho),
            k_const: ProfileValue::assumed(k_const),
            r: ProfileValue::assumed(r),
            deviation_table: Vec::new(),
        };
        profile.validate()?;
        Ok(profile)
    }

    fn validate(&self) -> Result<()> {
        let ok = self.t.value > 0.0
            && (0.0..1.0).contains(&self.sigma.value)
            && self.rho.value > 0.0
            && self.rho.value < 1.0
            && self.k_const.value > 0.0
            && self.r.value >= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidModel("mixing constants outside their admissible ranges".into()))
        }
    }

    /// `K rho^k`.
    pub fn cylinder_bound(&self, k: usize) -> f64 {
        self.k_const.value * libm::pow(self.rho.value, k as f64)
    }
}

pub fn contraction_profile(model: &MeasureModel) -> Result<ContractionProfile> {
    match model {
        MeasureModel::Iid(IidModel::Finite { probs_f64, .. }) => {
            let rho = probs_f64.iter().copied().fold(0.0, f64::max);
            if rho >= 1.0 {
                return Err(Error::InvalidModel("single-symbol support has no contraction".into()));
            }
            Ok(ContractionProfile { rho: ProfileValue::exact(rho), k_const: ProfileValue::exact(1.0) })
        }
        MeasureModel::Iid(IidModel::Geometric { ratio_f64, .. }) => {
            // The largest mass is p_0 = 1 - r.
            Ok(ContractionProfile {
                rho: ProfileValue::exact(1.0 - ratio_f64),
                k_const: ProfileValue::exact(1.0),
            })
        }
        MeasureModel::Markov(m) => {
            let rho = m.transition_f64().iter().flatten().copied().fold(0.0, f64::max);
            if rho >= 1.0 {
                return Err(Error::InvalidModel("a transition of probability one gives no contraction".into()));
            }
            let pi_max = m.stationary_f64().iter().copied().fold(0.0, f64::max);
            Ok(ContractionProfile { rho: ProfileValue::exact(rho), k_const: ProfileValue::exact(pi_max / rho) })
        }
        // q_k >= 2^((k-1)/2) bounds cylinder lengths by 2^-(k-1), and the
        // Gauss density is at most 1/ln 2.
        MeasureModel::GaussCf => Ok(ContractionProfile {
            rho: ProfileValue::exact(0.5),
            k_const: ProfileValue::exact(2.0 / core::f64::consts::LN_2),
        }),
    }
}

pub fn psi_mixing_profile(model: &MeasureModel, gauss: GaussMixingAssumption) -> Result<PsiMixingProfile> {
    match model {
        MeasureModel::Iid(_) => Ok(PsiMixingProfile {
            t: ProfileValue::exact(1.0),
            sigma: ProfileValue::exact(0.0),
            r: ProfileValue::exact(1.0),
            deviation_table: Vec::new(),
        }),
        MeasureModel::Markov(m) => {
            let s = m.states();
            let pi = m.stationary();
            let pi_f = m.stationary_f64();
            let centered: Vec<f64> = (0..s)
                .flat_map(|a| (0..s).map(move |b| (a, b)))
                .map(|(a, b)| m.transition_f64()[a][b] - pi_f[b])
                .collect();
            let sigma = spectral_radius(&centered, s);
            let powers = m.transition().powers(MARKOV_FIT_HORIZON);
            let mut deviation_table = Vec::with_capacity(MARKOV_FIT_HORIZON);
            let mut r_max = BigRational::one();
            for pm in &powers {
                let mut dev = BigRational::from_integer(0.into());
                for a in 0..s {
                    for b in 0..s {
                        let ratio = pm.get(a, b) / &pi[b];
                        let d = (&ratio - BigRational::one()).abs();
                        if d > dev {
                            dev = d;
                        }
                        if ratio > r_max {
                            r_max = ratio;
                        }
                    }
                }
                deviation_table.push(to_f64(&dev));
            }
            let (t, sigma) = fit_envelope(&deviation_table, sigma);
            Ok(PsiMixingProfile {
                t: ProfileValue::estimated(t),
                sigma: ProfileValue::exact(sigma),
                r: ProfileValue::estimated(to_f64(&r_max)),
                deviation_table,
            })
        }
        MeasureModel::GaussCf => {
            if !(gauss.t > 0.0) || !(0.0..1.0).contains(&gauss.sigma) {
                return Err(Error::InvalidModel("assumed Gauss (T, sigma) out of range".into()));
            }
            Ok(PsiMixingProfile {
                t: ProfileValue::assumed(gauss.t),
                sigma: ProfileValue::assumed(gauss.sigma),
                r: ProfileValue::estimated(gauss_distortion_estimate(8, 2)?),
                deviation_table: Vec::new(),
            })
        }
    }
}

// Smallest T with dev(m) <= T sigma^m over the table; sigma == 0 (every
// power already equal to the rank-one limit) falls back to the independence
// sentinel.
fn fit_envelope(table: &[f64], sigma: f64) -> (f64, f64) {
    if sigma <= 1e-15 || table.iter().all(|&d| d == 0.0) {
        return (1.0, 0.0);
    }
    let mut t: f64 = 0.0;
    for (i, &d) in table.iter().enumerate() {
        let env = libm::pow(sigma, (i + 1) as f64);
        if env > 0.0 {
            t = t.max(d / env);
        }
    }
    (t.max(f64::MIN_POSITIVE), sigma)
}

/// `max mu(uv) / (mu(u) mu(v))` over adjacent words `u, v` with digits
/// `<= max_digit` and lengths `<= max_len`, floored at 1.
pub fn gauss_distortion_estimate(max_digit: u64, max_len: usize) -> Result<f64> {
    let model = MeasureModel::GaussCf;
    let mut words: Vec<Word> = Vec::new();
    for len in 1..=max_len {
        for w in crate::words::enumerate_words(max_digit, len)? {
            words.push(Word::new(w.symbols().iter().map(|a| a + 1).collect()));
        }
    }
    let masses: Vec<f64> = words.iter().map(|w| model.cylinder_prob(w)).collect::<Result<_>>()?;
    let mut best: f64 = 1.0;
    for (u, mu_u) in words.iter().zip(&masses) {
        for (v, mu_v) in words.iter().zip(&masses) {
            let joint = model.cylinder_prob(&u.concat(v))?;
            best = best.max(joint / (mu_u * mu_v));
        }
    }
    Ok(best)
}

/// Deviation `max_{a,b} |P^m(a,b)/pi(b) - 1|` computed exactly for one `m`.
pub fn markov_deviation_exact(p: &RatMatrix, pi: &[BigRational], m: u64) -> BigRational {
    let pm = p.pow(m);
    let s = p.dim();
    let mut dev = BigRational::from_integer(0.into());
    for a in 0..s {
        for b in 0..s {
            let d = (pm.get(a, b) / &pi[b] - BigRational::one()).abs();
            if d > dev {
                dev = d;
            }
        }
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sticky() -> MeasureModel {
        MeasureModel::markov_f64(&[vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap()
    }

    #[test]
    fn fair_coin_profile() {
        let p = MixingProfile::for_model(&MeasureModel::uniform(2).unwrap(), GaussMixingAssumption::default()).unwrap();
        assert_eq!((p.rho.value, p.k_const.value), (0.5, 1.0));
        assert_eq!(p.sigma.value, 0.0);
        assert_eq!(p.rho.provenance, Provenance::Exact);
        let psi = psi_mixing_profile(&MeasureModel::uniform(3).unwrap(), GaussMixingAssumption::default()).unwrap();
        assert_eq!(psi.envelope(0), 1.0);
        assert_eq!(psi.envelope(5), 0.0);
    }

    #[test]
    fn markov_profile() {
        let m = sticky();
        let p = MixingProfile::for_model(&m, GaussMixingAssumption::default()).unwrap();
        assert!((p.rho.value - 0.9).abs() < 1e-15);
        assert!((p.k_const.value - (2.0 / 3.0) / 0.9).abs() < 1e-12);
        assert!((p.sigma.value - 0.7).abs() < 1e-9);
        assert_eq!(p.deviation_table.len(), MARKOV_FIT_HORIZON);
        for (i, &d) in p.deviation_table.iter().enumerate() {
            assert!(d <= p.t.value * libm::pow(p.sigma.value, (i + 1) as f64) * (1.0 + 1e-12));
        }
        for w in p.deviation_table.windows(2).take(30) {
            assert!(w[1] <= 0.7 * w[0] * (1.0 + 1e-9));
        }
        assert!(p.r.value >= 1.0);
    }

    #[test]
    fn exact_deviation_matches_table() {
        let m = sticky();
        let MeasureModel::Markov(chain) = &m else { unreachable!() };
        let p = psi_mixing_profile(&m, GaussMixingAssumption::default()).unwrap();
        for step in [1u64, 7, 20] {
            let d = to_f64(&markov_deviation_exact(chain.transition(), chain.stationary(), step));
            assert_eq!(d, p.deviation_table[step as usize - 1]);
        }
    }

    #[test]
    fn gauss_profile_is_assumed() {
        let p = MixingProfile::for_model(&MeasureModel::gauss_cf(), GaussMixingAssumption { t: 2.0, sigma: 0.4 }).unwrap();
        assert_eq!(p.t.provenance, Provenance::Assumed);
        assert_eq!(p.sigma.value, 0.4);
        assert_eq!(p.rho.value, 0.5);
        assert!(p.r.value >= 1.0);
        let bad = GaussMixingAssumption { t: 1.0, sigma: 1.0 };
        assert!(MixingProfile::for_model(&MeasureModel::gauss_cf(), bad).is_err());
    }

    #[test]
    fn assumed_profiles_are_range_checked() {
        assert!(MixingProfile::assumed(1.0, 0.5, 0.5, 1.0, 1.0).is_ok());
        assert!(MixingProfile::assumed(1.0, 0.5, 1.0, 1.0, 1.0).is_err());
        assert!(MixingProfile::assumed(1.0, 0.5, 0.5, 1.0, 0.5).is_err());
        assert!(MixingProfile::assumed(0.0, 0.5, 0.5, 1.0, 1.0).is_err());
    }
}
