//! Certified real arithmetic.
//!
//! A [`BallReal`] is a closed interval `[lo, hi]` with MPFR endpoints. Every
//! operation rounds the lower endpoint toward −∞ and the upper one toward +∞,
//! so the exact result of the operation on any points of the inputs lies in
//! the output. The midpoint/radius view is derived on demand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use rug::float::{Constant, Round};
use rug::integer::Order;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::rational::ExactRational;

/// Default working precision, in bits.
pub const DEFAULT_BITS: u32 = 128;
/// Significant decimal digits used when rendering values.
pub const RENDER_DIGITS: usize = 20;

/// Working precision and retry budget for inconclusive comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub working_bits: u32,
    pub max_retries: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            working_bits: DEFAULT_BITS,
            max_retries: 4,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(working_bits: u32, max_retries: u32) -> crate::Result<Self> {
        if working_bits < 53 {
            return Err(crate::error::domain("working precision must be at least 53 bits"));
        }
        if max_retries == 0 {
            return Err(crate::error::domain("max_retries must be at least 1"));
        }
        Ok(Self {
            working_bits,
            max_retries,
        })
    }

    /// Precisions tried in order: the working precision, then doublings.
    pub fn ladder(&self) -> impl Iterator<Item = u32> {
        let base = self.working_bits;
        (0..=self.max_retries).map(move |i| base.saturating_mul(1 << i.min(16)))
    }
}

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "Pass",
            Status::Fail => "Fail",
            Status::Inconclusive => "Inconclusive",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Status {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "Pass" => Ok(Status::Pass),
            "Fail" => Ok(Status::Fail),
            "Inconclusive" => Ok(Status::Inconclusive),
            _ => Err(crate::Error::MalformedReport(format!("unknown status {s:?}"))),
        }
    }
}

/// `lhs ≤ rhs`: Pass iff `lhs.upper ≤ rhs.lower`, Fail iff `lhs.lower > rhs.upper`.
pub fn check_inequality(lhs: &BallReal, rhs: &BallReal) -> Status {
    if lhs.hi <= rhs.lo {
        Status::Pass
    } else if lhs.lo > rhs.hi {
        Status::Fail
    } else {
        Status::Inconclusive
    }
}

/// `lhs < rhs`: Pass iff `lhs.upper < rhs.lower`, Fail iff `lhs.lower ≥ rhs.upper`.
pub fn check_strict_inequality(lhs: &BallReal, rhs: &BallReal) -> Status {
    if lhs.hi < rhs.lo {
        Status::Pass
    } else if lhs.lo >= rhs.hi {
        Status::Fail
    } else {
        Status::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallReal {
    lo: Float,
    hi: Float,
}

macro_rules! rounded {
    ($prec:expr, $val:expr, $round:expr) => {
        Float::with_val_round($prec, $val, $round).0
    };
}

pub fn bigint_to_integer(n: &BigInt) -> Integer {
    let (sign, digits) = n.to_u32_digits();
    let v = Integer::from_digits(&digits, Order::Lsf);
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}

pub fn integer_to_bigint(n: &Integer) -> BigInt {
    let digits = n.to_digits::<u32>(Order::Lsf);
    let sign = match n.cmp0() {
        Ordering::Less => Sign::Minus,
        Ordering::Equal => Sign::NoSign,
        Ordering::Greater => Sign::Plus,
    };
    BigInt::from_slice(sign, &digits)
}

pub fn to_rug_rational(x: &ExactRational) -> Rational {
    Rational::from((bigint_to_integer(x.numer()), bigint_to_integer(x.denom())))
}

impl BallReal {
    pub fn from_bounds(lo: Float, hi: Float) -> Self {
        assert!(lo.is_finite() && hi.is_finite(), "ball endpoints must be finite");
        assert!(lo <= hi, "ball endpoints out of order");
        Self { lo, hi }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self {
            lo: rounded!(prec, n, Round::Down),
            hi: rounded!(prec, n, Round::Up),
        }
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        Self {
            lo: rounded!(prec, n, Round::Down),
            hi: rounded!(prec, n, Round::Up),
        }
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Self::from_integer(&bigint_to_integer(n), prec)
    }

    pub fn from_rug_rational(q: &Rational, prec: u32) -> Self {
        Self {
            lo: rounded!(prec, q, Round::Down),
            hi: rounded!(prec, q, Round::Up),
        }
    }

    pub fn from_rational(x: &ExactRational, prec: u32) -> Self {
        Self::from_rug_rational(&to_rug_rational(x), prec)
    }

    /// `p/q` for machine integers.
    pub fn ratio(p: i64, q: i64, prec: u32) -> Self {
        Self::from_rug_rational(&Rational::from((p, q)), prec)
    }

    /// The interval `[v·2^-shift, (v + err)·2^-shift]`, used for fixed-point
    /// lower bounds with a known one-sided error.
    pub fn from_fixed(v: u128, err: u128, shift: u32, prec: u32) -> Self {
        let lo = Float::with_val(256, v) >> shift;
        let hi = (Float::with_val(256, v) + Float::with_val(256, err)) >> shift;
        Self {
            lo: rounded!(prec, &lo, Round::Down),
            hi: rounded!(prec, &hi, Round::Up),
        }
    }

    /// `π`.
    pub fn pi(prec: u32) -> Self {
        Self {
            lo: rounded!(prec, Constant::Pi, Round::Down),
            hi: rounded!(prec, Constant::Pi, Round::Up),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn lower(&self) -> &Float {
        &self.lo
    }

    pub fn upper(&self) -> &Float {
        &self.hi
    }

    /// Midpoint, rounded to nearest.
    pub fn mid(&self) -> Float {
        let p = self.prec() + 1;
        let s = rounded!(p, &self.lo + &self.hi, Round::Nearest);
        s >> 1u32
    }

    /// Radius about [`Self::mid`], rounded up so that `[mid − rad, mid + rad]`
    /// still contains the interval.
    pub fn rad(&self) -> Float {
        let m = self.mid();
        let p = self.prec() + 1;
        let a = rounded!(p, &self.hi - &m, Round::Up);
        let b = rounded!(p, &m - &self.lo, Round::Up);
        if a > b {
            a
        } else {
            b
        }
    }

    /// Upper bound on `hi − lo`.
    pub fn width(&self) -> Float {
        rounded!(self.prec(), &self.hi - &self.lo, Round::Up)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn contains_rational(&self, x: &ExactRational) -> bool {
        let q = to_rug_rational(x);
        self.lo <= q && self.hi >= q
    }

    pub fn contains(&self, other: &BallReal) -> bool {
        self.lo <= other.lo && self.hi >= other.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &BallReal) -> BallReal {
        let p = self.prec().max(other.prec());
        let lo = if self.lo <= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi >= other.hi { &self.hi } else { &other.hi };
        Self {
            lo: rounded!(p, lo, Round::Down),
            hi: rounded!(p, hi, Round::Up),
        }
    }

    pub fn with_prec(&self, prec: u32) -> BallReal {
        Self {
            lo: rounded!(prec, &self.lo, Round::Down),
            hi: rounded!(prec, &self.hi, Round::Up),
        }
    }

    fn join_prec(&self, other: &BallReal) -> u32 {
        self.prec().max(other.prec())
    }

    pub fn abs(&self) -> BallReal {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            -self
        } else {
            let nlo = Float::with_val(self.lo.prec(), -&self.lo);
            let hi = if nlo > self.hi { nlo } else { self.hi.clone() };
            Self {
                lo: Float::with_val(self.prec(), 0),
                hi,
            }
        }
    }

    pub fn max(&self, other: &BallReal) -> BallReal {
        let p = self.join_prec(other);
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi >= other.hi { &self.hi } else { &other.hi };
        Self {
            lo: rounded!(p, lo, Round::Down),
            hi: rounded!(p, hi, Round::Up),
        }
    }

    pub fn sqr(&self) -> BallReal {
        let a = self.abs();
        let p = a.prec();
        Self {
            lo: rounded!(p, a.lo.square_ref(), Round::Down),
            hi: rounded!(p, a.hi.square_ref(), Round::Up),
        }
    }

    pub fn mul_i64(&self, k: i64) -> BallReal {
        self * &BallReal::from_i64(k, self.prec())
    }

    pub fn mul_rational(&self, q: &ExactRational) -> BallReal {
        self * &BallReal::from_rational(q, self.prec())
    }

    /// `self / other`, or `None` when `other` contains zero.
    pub fn checked_div(&self, other: &BallReal) -> Option<BallReal> {
        if other.contains_zero() {
            return None;
        }
        let p = self.join_prec(other);
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = cands
            .iter()
            .map(|(a, b)| rounded!(p, *a / *b, Round::Down))
            .reduce(|x, y| if x <= y { x } else { y })
            .unwrap();
        let hi = cands
            .iter()
            .map(|(a, b)| rounded!(p, *a / *b, Round::Up))
            .reduce(|x, y| if x >= y { x } else { y })
            .unwrap();
        Some(Self { lo, hi })
    }

    /// `√self`; a lower endpoint below zero is clamped to zero.
    pub fn sqrt(&self) -> BallReal {
        assert!(self.hi >= 0, "square root of a negative ball");
        let p = self.prec();
        let lo = if self.lo <= 0 {
            Float::with_val(p, 0)
        } else {
            rounded!(p, self.lo.sqrt_ref(), Round::Down)
        };
        Self {
            lo,
            hi: rounded!(p, self.hi.sqrt_ref(), Round::Up),
        }
    }

    /// Natural logarithm; `None` unless the ball is strictly positive.
    pub fn checked_ln(&self) -> Option<BallReal> {
        if self.lo <= 0 {
            return None;
        }
        let p = self.prec();
        Some(Self {
            lo: rounded!(p, self.lo.ln_ref(), Round::Down),
            hi: rounded!(p, self.hi.ln_ref(), Round::Up),
        })
    }

    pub fn ln(&self) -> BallReal {
        self.checked_ln().expect("logarithm of a non-positive ball")
    }

    pub fn exp(&self) -> BallReal {
        let p = self.prec();
        Self {
            lo: rounded!(p, self.lo.exp_ref(), Round::Down),
            hi: rounded!(p, self.hi.exp_ref(), Round::Up),
        }
    }

    /// `self^e` for a strictly positive ball.
    pub fn pow(&self, e: &BallReal) -> BallReal {
        (e * &self.ln()).exp()
    }

    pub fn pow_rational(&self, e: &ExactRational) -> BallReal {
        if e.is_integer() {
            if let Ok(k) = i32::try_from(e.numer()) {
                return self.powi(k);
            }
        }
        self.pow(&BallReal::from_rational(e, self.prec()))
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, k: i32) -> BallReal {
        if k < 0 {
            let r = self.powi(-k);
            return &BallReal::one(self.prec()) / &r;
        }
        let mut acc = BallReal::one(self.prec());
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// `(cos 2πr, sin 2πr)` for exact `r`, computed after reducing `r` mod 1.
    pub fn cos_sin_2pi(r: &ExactRational, prec: u32) -> (BallReal, BallReal) {
        let red = crate::rational::frac(r);
        let angle = &BallReal::pi(prec + 16) * &BallReal::from_rational(&red, prec + 16).mul_i64(2);
        angle.cos_sin(prec)
    }

    /// `(cos self, sin self)`. Both functions are 1-Lipschitz, so evaluating at
    /// the midpoint and widening by the radius gives an enclosure.
    pub fn cos_sin(&self, prec: u32) -> (BallReal, BallReal) {
        let m = self.mid();
        let r = self.rad();
        // Keep the midpoint's full precision so the argument is not rounded.
        let wp = (prec + 8).max(m.prec());
        let mut c = Float::with_val(wp, &m);
        let mut s = Float::with_val(wp, &m);
        c.cos_round(Round::Nearest);
        s.sin_round(Round::Nearest);
        // Correctly rounded results are within half an ulp; widen by one ulp.
        let slack = |v: &Float| -> Float {
            let e = v.get_exp().unwrap_or(-(wp as i32));
            let ulp = Float::with_val(32, 1) << (e - wp as i32);
            rounded!(prec, &r + &ulp, Round::Up)
        };
        let widen = |v: Float| -> BallReal {
            let d = slack(&v);
            let lo = rounded!(prec, &v - &d, Round::Down);
            let hi = rounded!(prec, &v + &d, Round::Up);
            let one = Float::with_val(prec, 1);
            let neg_one = Float::with_val(prec, -1);
            BallReal {
                lo: if lo < neg_one { neg_one } else { lo },
                hi: if hi > one { one } else { hi },
            }
        };
        (widen(c), widen(s))
    }

    /// Decimal rendering of the midpoint; see [`render_float`].
    pub fn render_mid(&self) -> String {
        render_float(&self.mid(), Round::Nearest)
    }

    /// Decimal rendering of the radius, rounded up.
    pub fn render_rad(&self) -> String {
        render_float(&self.rad(), Round::Up)
    }
}

/// Renders `d.ddddddddddddddddddde±N` with [`RENDER_DIGITS`] significant
/// digits. Zero renders as `0.0000000000000000000e0`.
pub fn render_float(v: &Float, round: Round) -> String {
    let (neg, digits, exp) = v.to_sign_string_exp_round(10, Some(RENDER_DIGITS), round);
    let sign = if neg && !v.is_zero() { "-" } else { "" };
    match exp {
        None => format!("{sign}0.{}e0", "0".repeat(RENDER_DIGITS - 1)),
        Some(e) => {
            let mut d = digits;
            while d.len() < RENDER_DIGITS {
                d.push('0');
            }
            format!("{sign}{}.{}e{}", &d[..1], &d[1..], e - 1)
        }
    }
}

/// Renders an exact rational the same way (round to nearest).
pub fn render_rational(x: &ExactRational) -> String {
    let q = to_rug_rational(x);
    let bits = 256 + (q.numer().significant_bits().max(q.denom().significant_bits()));
    render_float(&Float::with_val(bits, &q), Round::Nearest)
}

impl fmt::Display for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} ± {}]", self.render_mid(), self.render_rad())
    }
}

impl<'a> Add<&'a BallReal> for &'a BallReal {
    type Output = BallReal;
    fn add(self, o: &BallReal) -> BallReal {
        let p = self.join_prec(o);
        BallReal {
            lo: rounded!(p, &self.lo + &o.lo, Round::Down),
            hi: rounded!(p, &self.hi + &o.hi, Round::Up),
        }
    }
}

impl<'a> Sub<&'a BallReal> for &'a BallReal {
    type Output = BallReal;
    fn sub(self, o: &BallReal) -> BallReal {
        let p = self.join_prec(o);
        BallReal {
            lo: rounded!(p, &self.lo - &o.hi, Round::Down),
            hi: rounded!(p, &self.hi - &o.lo, Round::Up),
        }
    }
}

impl<'a> Mul<&'a BallReal> for &'a BallReal {
    type Output = BallReal;
    fn mul(self, o: &BallReal) -> BallReal {
        let p = self.join_prec(o);
        if self.lo >= 0 && o.lo >= 0 {
            return BallReal {
                lo: rounded!(p, &self.lo * &o.lo, Round::Down),
                hi: rounded!(p, &self.hi * &o.hi, Round::Up),
            };
        }
        let cands = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = cands
            .iter()
            .map(|(a, b)| rounded!(p, *a * *b, Round::Down))
            .reduce(|x, y| if x <= y { x } else { y })
            .unwrap();
        let hi = cands
            .iter()
            .map(|(a, b)| rounded!(p, *a * *b, Round::Up))
            .reduce(|x, y| if x >= y { x } else { y })
            .unwrap();
        BallReal { lo, hi }
    }
}

impl<'a> std::ops::Div<&'a BallReal> for &'a BallReal {
    type Output = BallReal;
    fn div(self, o: &BallReal) -> BallReal {
        self.checked_div(o).expect("division by a ball containing zero")
    }
}

impl Neg for &BallReal {
    type Output = BallReal;
    fn neg(self) -> BallReal {
        BallReal {
            lo: Float::with_val(self.hi.prec(), -&self.hi),
            hi: Float::with_val(self.lo.prec(), -&self.lo),
        }
    }
}

impl Neg for BallReal {
    type Output = BallReal;
    fn neg(self) -> BallReal {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<BallReal> for BallReal {
            type Output = BallReal;
            fn $m(self, o: BallReal) -> BallReal {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a BallReal> for BallReal {
            type Output = BallReal;
            fn $m(self, o: &'a BallReal) -> BallReal {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<BallReal> for &'a BallReal {
            type Output = BallReal;
            fn $m(self, o: BallReal) -> BallReal {
                self.$m(&o)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn ball(mid: f64, rad: f64) -> BallReal {
        let m = Float::with_val(128, mid);
        let r = Float::with_val(128, rad);
        BallReal::from_bounds(Float::with_val(128, &m - &r), Float::with_val(128, &m + &r))
    }

    #[test]
    fn check_inequality_examples() {
        assert_eq!(check_inequality(&ball(0.1, 0.001), &ball(0.5, 0.001)), Status::Pass);
        assert_eq!(check_inequality(&ball(0.5, 0.3), &ball(0.5, 0.3)), Status::Inconclusive);
        assert_eq!(check_inequality(&ball(1.0, 0.01), &ball(0.5, 0.01)), Status::Fail);
        let one = BallReal::one(128);
        assert_eq!(check_inequality(&one, &one), Status::Pass);
        assert_eq!(check_strict_inequality(&one, &one), Status::Fail);
    }

    #[test]
    fn rational_conversion_encloses_value() {
        let x = ratio(1, 3);
        let b = BallReal::from_rational(&x, 128);
        assert!(b.contains_rational(&x));
        assert!(!b.is_point());
        assert!(b.width() < Float::with_val(64, 1e-38));
        let y = int(12345);
        assert!(BallReal::from_rational(&y, 64).is_point());
    }

    #[test]
    fn elementary_functions_enclose_known_values() {
        let p = 128;
        let two = BallReal::from_i64(2, p);
        let ln2 = two.ln();
        // ln 2 = 0.69314718055994530941723212145817656807...
        let below = Float::with_val(200, Float::parse("0.6931471805599453094172321214581765680").unwrap());
        let above = Float::with_val(200, Float::parse("0.6931471805599453094172321214581765681").unwrap());
        assert!(ln2.lower() >= &below && ln2.upper() <= &above);
        let e = BallReal::one(p).exp();
        let e_lo = Float::with_val(200, Float::parse("2.7182818284590452353602874713526624977").unwrap());
        let e_hi = Float::with_val(200, Float::parse("2.7182818284590452353602874713526624978").unwrap());
        assert!(e.lower() <= &e_hi && e.upper() >= &e_lo);
        let s = two.sqrt();
        assert!(s.sqr().contains_rational(&int(2)));
        let (c, sn) = BallReal::cos_sin_2pi(&ratio(1, 4), p);
        assert!(c.contains_zero());
        assert!(sn.contains_rational(&int(1)));
        let (c, _) = BallReal::cos_sin_2pi(&ratio(7, 2), p);
        assert!(c.contains_rational(&int(-1)));
    }

    #[test]
    fn rendering_is_fixed_width_scientific() {
        assert_eq!(render_rational(&int(0)), "0.0000000000000000000e0");
        assert_eq!(render_rational(&int(300)), "3.0000000000000000000e2");
        assert_eq!(render_rational(&ratio(-1, 8)), "-1.2500000000000000000e-1");
        assert_eq!(render_rational(&ratio(2, 3)), "6.6666666666666666667e-1");
    }

    #[test]
    fn policy_ladder_doubles() {
        let p = PrecisionPolicy::default();
        assert_eq!(p.ladder().collect::<Vec<_>>(), vec![128, 256, 512, 1024, 2048]);
        assert!(PrecisionPolicy::new(52, 1).is_err());
    }

    #[test]
    fn mid_rad_view_contains_interval() {
        let b = BallReal::from_rational(&ratio(10, 7), 64).sqrt();
        let m = b.mid();
        let r = b.rad();
        assert!(Float::with_val(200, &m - &r) <= *b.lower());
        assert!(Float::with_val(200, &m + &r) >= *b.upper());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2500))]

        #[test]
        fn arithmetic_encloses_exact_rational_results(
            a in -10_000i64..10_000, b in 1i64..1000,
            c in -10_000i64..10_000, d in 1i64..1000,
        ) {
            let (x, y) = (ratio(a, b), ratio(c, d));
            let (bx, by) = (BallReal::from_rational(&x, 64), BallReal::from_rational(&y, 64));
            prop_assert!((&bx + &by).contains_rational(&(&x + &y)));
            prop_assert!((&bx - &by).contains_rational(&(&x - &y)));
            prop_assert!((&bx * &by).contains_rational(&(&x * &y)));
            if c != 0 {
                prop_assert!((&bx / &by).contains_rational(&(&x / &y)));
            }
            prop_assert!(bx.sqr().contains_rational(&(&x * &x)));
            prop_assert!(bx.abs().contains_rational(&num_traits::Signed::abs(&x)));
        }

        #[test]
        fn comparison_verdicts_agree_with_exact_order(
            a in -1000i64..1000, b in 1i64..100, c in -1000i64..1000, d in 1i64..100,
        ) {
            let (x, y) = (ratio(a, b), ratio(c, d));
            let st = check_inequality(&BallReal::from_rational(&x, 64), &BallReal::from_rational(&y, 64));
            match st {
                Status::Pass => prop_assert!(x <= y),
                Status::Fail => prop_assert!(x > y),
                Status::Inconclusive => {}
            }
        }

        #[test]
        fn doubling_precision_never_flips_a_verdict(a in 1i64..10_000, b in 1i64..10_000) {
            let lhs = |p| BallReal::from_i64(a, p).ln();
            let rhs = |p| BallReal::from_i64(b, p).sqrt();
            let s1 = check_inequality(&lhs(64), &rhs(64));
            let s2 = check_inequality(&lhs(128), &rhs(128));
            if s1 != Status::Inconclusive {
                prop_assert_eq!(s1, s2);
            }
        }
    }
}
