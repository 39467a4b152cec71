//! Bernoulli numbers and polynomials, periodic Bernoulli functions, and the
//! sup-norm constants `Γ_j`.
//!
//! The convention is the standard one: `B₂(t) = t² − t + 1/6`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ball::BallReal;
use crate::error::{Error, Result};
use crate::rational::{self, int, ratio, ExactRational};

/// `ψ(x) = {x} − 1/2`.
pub fn psi(x: &ExactRational) -> ExactRational {
    rational::frac(x) - ratio(1, 2)
}

/// `ψ₂(x) = ∫₁ˣ ψ(t) dt = ψ(x)²/2 − 1/8`.
pub fn psi2(x: &ExactRational) -> Result<ExactRational> {
    if *x < int(1) {
        return Err(crate::error::domain("psi2 needs x ≥ 1"));
    }
    let p = psi(x);
    Ok(&p * &p / int(2) - ratio(1, 8))
}

/// `B_j(t)` for `j ∈ {1, 2, 3}`.
pub fn bernoulli_polynomial(j: u32, t: &ExactRational) -> Result<ExactRational> {
    let half = ratio(1, 2);
    match j {
        1 => Ok(t - half),
        2 => Ok(t * t - t + ratio(1, 6)),
        3 => Ok(t * t * t - ratio(3, 2) * t * t + t * &half),
        _ => Err(Error::UnsupportedIndex(j)),
    }
}

/// `B_j({x})`.
pub fn periodic_bernoulli(j: u32, x: &ExactRational) -> Result<ExactRational> {
    bernoulli_polynomial(j, &rational::frac(x))
}

/// Bernoulli numbers `B_0, …, B_n` (with `B_1 = −1/2`), exact.
pub fn bernoulli_numbers(n: usize) -> Vec<ExactRational> {
    // Σ_{k<m+1} C(m+1, k) B_k = 0 for m ≥ 1.
    let mut b: Vec<ExactRational> = Vec::with_capacity(n + 1);
    b.push(int(1));
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(ExactRational::zero());
            continue;
        }
        let mut binom = BigInt::one();
        let mut acc = ExactRational::zero();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * ExactRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / ExactRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `Γ_j := 2η(j)j!/(2π)^j` with `η(j) = ζ(j)` for even `j` and `1` otherwise.
/// For even `j` this equals `|B_j|` exactly.
pub fn gamma_j(j: u32, prec: u32) -> Result<BallReal> {
    if j < 2 {
        return Err(crate::error::domain("Γ_j is defined here for j ≥ 2"));
    }
    if j.is_multiple_of(2) {
        let b = bernoulli_numbers(j as usize).pop().unwrap();
        return Ok(BallReal::from_rational(&b.abs(), prec));
    }
    let wp = prec + 16;
    let fact: BigInt = (1..=j as u64).map(BigInt::from).product();
    let num = BallReal::from_bigint(&(fact * 2), wp);
    let two_pi = BallReal::pi(wp).mul_i64(2);
    Ok((&num / &two_pi.powi(j as i32)).with_prec(prec))
}

/// `sup_z |B₃({z})| = √3/36`, attained at `t = 1/2 ± √3/6`.
pub fn sup_b3(prec: u32) -> BallReal {
    let wp = prec + 8;
    (&BallReal::from_i64(3, wp).sqrt() / &BallReal::from_i64(36, wp)).with_prec(prec)
}
