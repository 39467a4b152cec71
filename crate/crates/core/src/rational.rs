//! Exact rational helpers: floors, fractional parts, integer roots,
//! literal parsing and cancellation-friendly summation.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type ExactRational = BigRational;

/// Longest literal accepted by [`parse_rational`].
pub const MAX_LITERAL_LEN: usize = 4096;
/// Largest decimal exponent magnitude accepted by [`parse_rational`].
pub const MAX_DECIMAL_EXPONENT: i64 = 4096;

pub fn int(n: i64) -> ExactRational {
    ExactRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> ExactRational {
    ExactRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_bigint(n: BigInt) -> ExactRational {
    ExactRational::from_integer(n)
}

/// `⌊x⌋`.
pub fn floor(x: &ExactRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// `{x} = x − ⌊x⌋ ∈ [0, 1)`.
pub fn frac(x: &ExactRational) -> ExactRational {
    let (n, d) = (x.numer(), x.denom());
    ExactRational::new(n.mod_floor(d), d.clone())
}

/// `⌊x⌋` as a `u64`, or `None` when it is negative or too large.
pub fn floor_u64(x: &ExactRational) -> Option<u64> {
    floor(x).to_u64()
}

/// Largest integer `n ≥ 0` with `n² ≤ x`, for `x ≥ 0`.
pub fn isqrt_floor(x: &ExactRational) -> BigInt {
    assert!(!x.is_negative(), "isqrt_floor of a negative rational");
    // ⌊√x⌋ = ⌊√⌊x⌋⌋ for x ≥ 0.
    floor(x).sqrt()
}

/// Largest integer `n ≥ 0` with `n^(p/q) ≤ x`, i.e. `n^p ≤ x^q`, for `x ≥ 0`
/// and a positive rational exponent `p/q`.
pub fn rational_root_floor(x: &ExactRational, p: u32, q: u32) -> BigInt {
    assert!(p > 0 && q > 0);
    assert!(!x.is_negative());
    let target = num_traits::pow(x.clone(), q as usize);
    let fits = |n: &BigInt| -> bool {
        let lhs = ExactRational::from_integer(num_traits::pow(n.clone(), p as usize));
        lhs <= target
    };
    // Initial guess from floating point, then correct exactly.
    let approx = x.to_f64().unwrap_or(f64::MAX).max(0.0).powf(q as f64 / p as f64);
    let mut n = if approx.is_finite() && approx < 1e15 {
        BigInt::from(approx.floor() as u64)
    } else {
        // Fall back to the integer q/p-th root of ⌊x⌋^q, which is within one.
        let base = num_traits::pow(floor(x), q as usize);
        base.nth_root(p)
    };
    while n.is_positive() && !fits(&n) {
        n -= 1;
    }
    loop {
        let next = &n + 1;
        if fits(&next) {
            n = next;
        } else {
            break;
        }
    }
    n
}

/// Sum of rationals by pairwise merging, which keeps intermediate
/// denominators balanced and is far cheaper than a left fold for long sums.
pub fn sum_exact<I>(terms: I) -> ExactRational
where
    I: IntoIterator<Item = ExactRational>,
{
    // Binary-counter cascade: stack[k] holds the sum of a block of 2^k terms.
    let mut stack: Vec<(u32, ExactRational)> = Vec::new();
    for t in terms {
        let mut level = 0u32;
        let mut acc = t;
        while let Some((l, _)) = stack.last() {
            if *l != level {
                break;
            }
            let (_, top) = stack.pop().unwrap();
            acc = top + acc;
            level += 1;
        }
        stack.push((level, acc));
    }
    stack
        .into_iter()
        .rev()
        .fold(ExactRational::zero(), |acc, (_, v)| acc + v)
}

/// Parses a rational literal.
///
/// Accepted forms: `p/q` with integer `p` and non-zero integer `q`, or a
/// decimal literal with optional sign, fraction and exponent
/// (`10`, `-2.5`, `.25`, `1e6`, `3.5E-2`).
pub fn parse_rational(input: &str) -> Result<ExactRational> {
    let err = |reason: &'static str| Error::ParseRational {
        input: input.chars().take(64).collect(),
        reason,
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty"));
    }
    if s.len() > MAX_LITERAL_LEN {
        return Err(err("literal too long"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_integer(p).ok_or_else(|| err("bad numerator"))?;
        let q = parse_integer(q).ok_or_else(|| err("bad denominator"))?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(ExactRational::new(p, q));
    }

    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(err("invalid digit"));
    }
    let mut exp10: i64 = match exponent {
        None => 0,
        Some(e) => {
            let (eneg, edigits) = match e.as_bytes().first() {
                Some(b'-') => (true, &e[1..]),
                Some(b'+') => (false, &e[1..]),
                _ => (false, e),
            };
            if edigits.is_empty() || !all_digits(edigits) || edigits.len() > 6 {
                return Err(err("bad exponent"));
            }
            let v: i64 = edigits.parse().map_err(|_| err("bad exponent"))?;
            if eneg {
                -v
            } else {
                v
            }
        }
    };
    exp10 -= frac_part.len() as i64;
    if exp10.abs() > MAX_DECIMAL_EXPONENT {
        return Err(err("exponent out of range"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n = BigUint::parse_bytes(digits.as_bytes(), 10)
        .map(|u| BigInt::from_biguint(Sign::Plus, u))
        .ok_or_else(|| err("invalid digit"))?;
    if negative {
        n = -n;
    }
    let ten = BigInt::from(10u32);
    let value = if exp10 >= 0 {
        ExactRational::from_integer(n * num_traits::pow(ten, exp10 as usize))
    } else {
        ExactRational::new(n, num_traits::pow(ten, (-exp10) as usize))
    };
    Ok(value)
}

fn parse_integer(t: &str) -> Option<BigInt> {
    let t = t.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn to_fraction_string(x: &ExactRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
