//! Exact rational helpers shared by the measure and interval code.

use alloc::format;
use alloc::string::ToString;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

/// Parses `"p/q"`, a decimal such as `"0.25"` or `"-1.5e-3"`, or an integer.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(domain("empty rational literal"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| domain(format!("bad numerator in {text:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| domain(format!("bad denominator in {text:?}")))?;
        if d.is_zero() {
            return Err(domain(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| domain(format!("not a rational or decimal literal: {text:?}")))
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value: BigInt = all_digits.parse().ok()?;
    if negative {
        value = -value;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        BigRational::from_integer(value * Pow::pow(&ten, scale as u64))
    } else {
        BigRational::new(value, Pow::pow(&ten, scale.unsigned_abs()))
    };
    Some(r)
}

/// The rational whose shortest decimal rendering equals that of `x`
/// (so `0.9` maps to `9/10`, not to the binary value of the float).
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(domain("non-finite value has no rational form"));
    }
    parse_rational(&x.to_string())
}

/// Nearest-ish `f64` for a big rational (relative error a few ulps).
pub fn to_f64(r: &BigRational) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

/// `num / den` as `f64` without overflow in the intermediate conversion.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let (n, en) = top_bits(num.magnitude());
    let (d, ed) = top_bits(den.magnitude());
    let v = libm::ldexp(n / d, (en - ed) as i32);
    if negative {
        -v
    } else {
        v
    }
}

/// `uint_ratio(a, b) = a / b` for unsigned big integers.
pub fn uint_ratio(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let (n, en) = top_bits(num);
    let (d, ed) = top_bits(den);
    libm::ldexp(n / d, (en - ed) as i32)
}

// Leading 64 bits of `x` as a float together with the binary exponent that
// was shifted away.
fn top_bits(x: &BigUint) -> (f64, i64) {
    let bits = x.bits();
    if bits <= 64 {
        (x.to_u64().unwrap_or(0) as f64, 0)
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
        (top as f64, shift as i64)
    }
}

/// Exact floor of a non-negative rational as `u128`, saturating.
pub fn floor_u128(r: &BigRational) -> u128 {
    if r.is_negative() {
        return 0;
    }
    r.floor().to_integer().to_u128().unwrap_or(u128::MAX)
}

/// Exact ceiling of a non-negative rational as `u128`, saturating.
pub fn ceil_u128(r: &BigRational) -> u128 {
    if r.is_negative() {
        return 0;
    }
    r.ceil().to_integer().to_u128().unwrap_or(u128::MAX)
}

/// Renders a rational as `"p/q"` (or `"p"` for integers).
pub fn to_string(r: &BigRational) -> alloc::string::String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn from_u64(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn big_uint_to_int(v: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v.clone())
}
