use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{IidModel, MeasureModel, Symbol};
use crate::error::{Error, Result};
use crate::rational::uint_ratio;
use crate::rng::CounterRng;

/// Continued-fraction continuants `(p_n, q_n)` and `(p_{n-1}, q_{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Continuants {
    pub p: BigUint,
    pub q: BigUint,
    pub p_prev: BigUint,
    pub q_prev: BigUint,
}

impl Continuants {
    /// `(p_0, q_0) = (0, 1)`, `(p_{-1}, q_{-1}) = (1, 0)`.
    pub fn start() -> Self {
        Self { p: BigUint::zero(), q: BigUint::one(), p_prev: BigUint::one(), q_prev: BigUint::zero() }
    }

    pub fn push(&mut self, digit: Symbol) {
        let a = BigUint::from(digit);
        let p_next = &a * &self.p + &self.p_prev;
        let q_next = &a * &self.q + &self.q_prev;
        self.p_prev = core::mem::replace(&mut self.p, p_next);
        self.q_prev = core::mem::replace(&mut self.q, q_next);
    }

    /// `|p_n q_{n-1} - p_{n-1} q_n| == 1`.
    pub fn is_unimodular(&self) -> bool {
        let a = &self.p * &self.q_prev;
        let b = &self.p_prev * &self.q;
        let d = if a >= b { a - b } else { b - a };
        d.is_one()
    }

    /// Ratios `(q_{n-1}/q_n, Q_{n-1}/Q_n, delta)` where `Q = p + q` and
    /// `delta = (p_{n-1} q_n - q_{n-1} p_n) / (Q_n q_n)`.
    fn ratios(&self) -> (f64, f64, f64) {
        let big_q = &self.p + &self.q;
        let big_q_prev = &self.p_prev + &self.q_prev;
        let s = uint_ratio(&self.q_prev, &self.q);
        let u = uint_ratio(&big_q_prev, &big_q);
        let mag = 1.0 / uint_ratio(&(&big_q * &self.q), &BigUint::one());
        let positive = &self.p_prev * &self.q >= &self.q_prev * &self.p;
        (s, u, if positive { mag } else { -mag })
    }
}

// Conditional law of the next continued-fraction digit.
//
// Given the digits so far, write x = (p_n + p_{n-1} t)/(q_n + q_{n-1} t) with
// t = T^n x in [0, 1). Under the Gauss measure restricted to the current
// cylinder, t has density proportional to 1 / ((1 + u t)(1 + s t)) where
// s = q_{n-1}/q_n and u = Q_{n-1}/Q_n, and the next digit is floor(1/t).
// G(y) below is the integral of that density over [0, y], written in terms of
// delta = u - s so it stays accurate when u and s nearly coincide.

fn ln1p_over(z: f64) -> f64 {
    if z.abs() < 1e-5 {
        1.0 - z / 2.0 + z * z / 3.0 - z * z * z / 4.0
    } else {
        libm::log1p(z) / z
    }
}

fn expm1_over(c: f64) -> f64 {
    if c.abs() < 1e-5 {
        1.0 + c / 2.0 + c * c / 6.0 + c * c * c / 24.0
    } else {
        libm::expm1(c) / c
    }
}

#[inline]
fn partial_mass(y: f64, s: f64, delta: f64) -> f64 {
    let base = y / (1.0 + s * y);
    base * ln1p_over(delta * base)
}

/// Largest digit value accepted before declaring the sampler broken.
const DIGIT_CAP: f64 = 9.223_372_036_854_775_807e18;

/// Draws the next continued-fraction digit for the state `(s, u, delta)`
/// from `v` uniform on `(0, 1]`: the digit `d` with
/// `tail(d + 1) < v <= tail(d)`, where `tail(d)` is the conditional
/// probability that the next digit is at least `d`.
pub fn draw_gauss_digit(s: f64, delta: f64, v: f64) -> Result<Symbol> {
    let total = partial_mass(1.0, s, delta);
    let tail = |d: f64| partial_mass(1.0 / d, s, delta) / total;
    // Closed-form inverse of G gives a starting guess.
    let g = v * total;
    let e = expm1_over(g * delta);
    let t = g * e / (1.0 - s * g * e);
    let guess = 1.0 / t;
    if !(guess < DIGIT_CAP) {
        return Err(Error::Internal("continued-fraction digit exceeded 2^63".into()));
    }
    let mut d = libm::floor(guess).max(1.0);
    while d > 1.0 && tail(d) < v {
        d -= 1.0;
    }
    while tail(d + 1.0) >= v {
        d += 1.0;
        if d >= DIGIT_CAP {
            return Err(Error::Internal("continued-fraction digit exceeded 2^63".into()));
        }
    }
    Ok(d as Symbol)
}

#[derive(Debug, Clone)]
enum SamplerState {
    IidFinite { cdf: Vec<f64> },
    IidGeometric { log_ratio: f64 },
    Markov { initial: Vec<f64>, rows: Vec<Vec<f64>>, current: Option<usize> },
    Gauss(GaussState),
}

#[derive(Debug, Clone)]
struct GaussState {
    s: f64,
    u: f64,
    delta: f64,
    exact: Option<Continuants>,
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|&p| {
            acc += p;
            acc
        })
        .collect()
}

fn invert_cdf(cdf: &[f64], probs_positive: impl Fn(usize) -> bool, u: f64) -> usize {
    let scaled = u * cdf[cdf.len() - 1];
    match cdf.iter().position(|&c| scaled < c) {
        Some(i) => i,
        // Rounding pushed u past the last cumulative value: take the last
        // symbol with positive mass.
        None => (0..cdf.len()).rev().find(|&i| probs_positive(i)).unwrap_or(cdf.len() - 1),
    }
}

/// Draws `x ~ mu` one coordinate at a time.
///
/// Identical `(model, seed)` pairs give identical streams. For the Gauss
/// measure the default generator carries the exact continuants of the
/// current cylinder; [`SequenceGenerator::streaming`] keeps only the
/// contracting ratio recurrences, which cost O(1) per digit and suit
/// multi-million-digit prefixes.
#[derive(Debug, Clone)]
pub struct SequenceGenerator<'m> {
    model: &'m MeasureModel,
    rng: CounterRng,
    state: SamplerState,
    emitted: u64,
}

impl<'m> SequenceGenerator<'m> {
    pub fn new(model: &'m MeasureModel, seed: u64) -> Self {
        Self::build(model, seed, true)
    }

    pub fn streaming(model: &'m MeasureModel, seed: u64) -> Self {
        Self::build(model, seed, false)
    }

    fn build(model: &'m MeasureModel, seed: u64, exact: bool) -> Self {
        let state = match model {
            MeasureModel::Iid(IidModel::Finite { probs_f64, .. }) => {
                SamplerState::IidFinite { cdf: cumulative(probs_f64) }
            }
            MeasureModel::Iid(IidModel::Geometric { ratio_f64, .. }) => {
                SamplerState::IidGeometric { log_ratio: libm::log(*ratio_f64) }
            }
            MeasureModel::Markov(m) => SamplerState::Markov {
                initial: cumulative(m.stationary_f64()),
                rows: m.transition_f64().iter().map(|r| cumulative(r)).collect(),
                current: None,
            },
            MeasureModel::GaussCf => SamplerState::Gauss(GaussState {
                s: 0.0,
                u: 1.0,
                delta: 1.0,
                exact: exact.then(Continuants::start),
            }),
        };
        Self { model, rng: CounterRng::new(seed), state, emitted: 0 }
    }

    pub fn model(&self) -> &'m MeasureModel {
        self.model
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Continuants of the current cylinder (exact Gauss generators only).
    pub fn continuants(&self) -> Option<&Continuants> {
        match &self.state {
            SamplerState::Gauss(g) => g.exact.as_ref(),
            _ => None,
        }
    }

    pub fn next_symbol(&mut self) -> Result<Symbol> {
        let model = self.model;
        let sym = match &mut self.state {
            SamplerState::IidFinite { cdf } => {
                let u = self.rng.next_f64();
                let probs = match model {
                    MeasureModel::Iid(IidModel::Finite { probs_f64, .. }) => probs_f64,
                    _ => unreachable!(),
                };
                invert_cdf(cdf, |i| probs[i] > 0.0, u) as Symbol
            }
            SamplerState::IidGeometric { log_ratio } => {
                // P(X >= a) = r^a
                let v = self.rng.next_f64_open_closed();
                libm::floor(libm::log(v) / *log_ratio) as Symbol
            }
            SamplerState::Markov { initial, rows, current } => {
                let u = self.rng.next_f64();
                let m = match model {
                    MeasureModel::Markov(m) => m,
                    _ => unreachable!(),
                };
                let next = match *current {
                    None => invert_cdf(initial, |i| m.stationary_f64()[i] > 0.0, u),
                    Some(a) => invert_cdf(&rows[a], |j| m.transition_f64()[a][j] > 0.0, u),
                };
                *current = Some(next);
                next as Symbol
            }
            SamplerState::Gauss(g) => {
                let v = self.rng.next_f64_open_closed();
                let d = draw_gauss_digit(g.s, g.delta, v)?;
                let df = d as f64;
                match &mut g.exact {
                    Some(c) => {
                        c.push(d);
                        let (s, u, delta) = c.ratios();
                        g.s = s;
                        g.u = u;
                        g.delta = delta;
                    }
                    None => {
                        g.s = 1.0 / (df + g.s);
                        g.u = 1.0 / (df + g.u);
                        g.delta = -g.delta * g.u * g.s;
                    }
                }
                d
            }
        };
        self.emitted += 1;
        Ok(sym)
    }

    /// Appends symbols to `out` until it holds `len` symbols.
    pub fn fill_to(&mut self, out: &mut Vec<Symbol>, len: usize) -> Result<()> {
        out.reserve(len.saturating_sub(out.len()));
        while out.len() < len {
            out.push(self.next_symbol()?);
        }
        Ok(())
    }

    pub fn take(&mut self, n: usize) -> Result<Vec<Symbol>> {
        let mut out = Vec::with_capacity(n);
        self.fill_to(&mut out, n)?;
        Ok(out)
    }
}
