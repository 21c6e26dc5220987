//! Fixed-point big-integer logarithms used to settle interval-membership
//! decisions for continued-fraction cylinder masses, which are irrational.
//!
//! A cylinder of the Gauss measure has mass `|log2(1 + s/B)|` with `B` a
//! positive integer and `s = +-1`. The routines here evaluate that value
//! to a requested number of fractional bits with an explicit error bound.

use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `2 * atanh(1/d) * 2^bits`, truncated, together with an error bound in
/// units of `2^-bits`. Requires `d >= 2`.
fn two_atanh_recip(d: &BigUint, bits: u64) -> (BigUint, u64) {
    let one = BigUint::one() << bits;
    let d2 = d * d;
    let mut power = d.clone(); // d^(2n+1)
    let mut sum = BigUint::zero();
    let mut n: u64 = 0;
    loop {
        let term = &one / (&power * BigUint::from(2 * n + 1));
        if term.is_zero() {
            break;
        }
        sum += term;
        power *= &d2;
        n += 1;
    }
    // Each truncated term loses < 1 ulp; the omitted tail is < 1 ulp.
    (sum << 1u32, 2 * (n + 1))
}

/// `ln 2 * 2^bits` with error bound (in ulps).
fn ln2_fixed(bits: u64) -> (BigUint, u64) {
    two_atanh_recip(&BigUint::from(3u32), bits)
}

/// `|ln(1 + sign/b)| * 2^bits` with error bound, for `b >= 2`.
fn ln1p_recip_fixed(b: &BigUint, plus: bool, bits: u64) -> (BigUint, u64) {
    // ln(1 + y) = 2 atanh(y / (2 + y)); y = +-1/b gives |z| = 1/(2b +- 1).
    let two_b = b << 1u32;
    let d = if plus { two_b + 1u32 } else { two_b - 1u32 };
    two_atanh_recip(&d, bits)
}

/// `|log2(1 + sign/b)| * 2^bits` with an error bound in ulps.
pub fn log2_1p_recip_fixed(b: &BigUint, plus: bool, bits: u64) -> (BigUint, u64) {
    let (num, e_num) = ln1p_recip_fixed(b, plus, bits);
    let (ln2, e_ln2) = ln2_fixed(bits);
    let value = (&num << bits) / &ln2;
    // value ~ num/ln2; perturbations of num and ln2 by their ulp errors move
    // it by at most (e_num + e_ln2) / ln2 < 1.5 (e_num + e_ln2) ulps (the mass
    // is below 1), plus one for the final truncation.
    let err = 2 * (e_num + e_ln2) + 2;
    (value, err)
}

/// Compares `i * log2(1 + sign/b)` (absolute value) against the rational
/// `target`, raising the working precision until the sign is certain.
pub fn compare_scaled_log(i: u64, b: &BigUint, plus: bool, target: &BigRational) -> Result<Ordering> {
    if target.is_negative() {
        return Ok(Ordering::Greater);
    }
    if i == 0 {
        return Ok(if target.is_zero() { Ordering::Equal } else { Ordering::Less });
    }
    let p = target.numer().magnitude().clone();
    let q = target.denom().magnitude().clone();
    let mut bits: u64 = 192;
    while bits <= 1 << 16 {
        let (mu, err) = log2_1p_recip_fixed(b, plus, bits);
        // i * q * mu vs p * 2^bits, uncertainty i * q * err.
        let iq = BigUint::from(i) * &q;
        let lhs = BigInt::from(&iq * &mu);
        let rhs = BigInt::from(&p << bits);
        let margin = BigInt::from(&iq * BigUint::from(err));
        let diff = &lhs - &rhs;
        if diff > margin {
            return Ok(Ordering::Greater);
        }
        if -&diff > margin {
            return Ok(Ordering::Less);
        }
        bits *= 2;
    }
    Err(Error::Numeric("precision cap reached while comparing a cylinder mass".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn approx(b: u32, plus: bool) -> f64 {
        let (v, err) = log2_1p_recip_fixed(&BigUint::from(b), plus, 128);
        assert!(err < 1000);
        crate::rational::uint_ratio(&v, &(BigUint::one() << 128u32))
    }

    #[test]
    fn matches_float_logs() {
        assert!((approx(3, true) - libm::log2(4.0 / 3.0)).abs() < 1e-15);
        assert!((approx(8, true) - libm::log2(9.0 / 8.0)).abs() < 1e-15);
        assert!((approx(5, false) - (-libm::log2(0.8))).abs() < 1e-15);
    }

    #[test]
    fn comparisons_are_decided() {
        // 2 * log2(4/3) = 0.830075... < 1 and > 0.83
        let b = BigUint::from(3u32);
        let one = parse_rational("1").unwrap();
        assert_eq!(compare_scaled_log(2, &b, true, &one).unwrap(), Ordering::Less);
        assert_eq!(compare_scaled_log(3, &b, true, &one).unwrap(), Ordering::Greater);
        let close = parse_rational("0.83007499855768763709").unwrap();
        assert_eq!(compare_scaled_log(2, &b, true, &close).unwrap(), Ordering::Greater);
        let close_above = parse_rational("0.83007499855768763710").unwrap();
        assert_eq!(compare_scaled_log(2, &b, true, &close_above).unwrap(), Ordering::Less);
    }
}
