//! Certified enclosures of γ, γ₁ and ζ at half-integers.
//!
//! γ and γ₁ come from Euler–Maclaurin summation of `1/t` and `log t / t`
//! past a cut-off `N`, with the remainder bounded by the first omitted term
//! (valid because the relevant derivative keeps one sign on `[N, ∞)`).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ball::BallReal;
use crate::bernoulli::bernoulli_numbers;
use crate::error::Result;
use crate::rational::ExactRational;

/// Default truncation point for the ζ series.
pub const ZETA_TRUNCATION: u64 = 16_384;

struct EmPlan {
    n: u64,
    k: usize,
    bern: Vec<ExactRational>,
}

/// Smallest `K` (with `N = 8K`) whose tail bound `|B_2K|/(2K N^2K)` is below
/// `2^-(prec+12)`. The logarithmic factor in γ₁'s bound is at most `log N`,
/// which the extra margin covers.
fn plan(prec: u32) -> EmPlan {
    let kmax = prec as usize / 8 + 12;
    let bern = bernoulli_numbers(2 * kmax);
    let target = ExactRational::new(BigInt::one(), BigInt::one() << (prec as usize + 24));
    for k in 2..=kmax {
        let n = 8 * k as u64;
        let bound = em_tail(&bern, k, n);
        if bound < target {
            return EmPlan { n, k, bern };
        }
    }
    unreachable!("Euler–Maclaurin plan did not converge")
}

fn em_tail(bern: &[ExactRational], k: usize, n: u64) -> ExactRational {
    bern[2 * k].abs()
        / ExactRational::from_integer(BigInt::from(2 * k as u64) * num_traits::pow(BigInt::from(n), 2 * k))
}

fn harmonic_exact(n: u64) -> ExactRational {
    (1..=n).fold(ExactRational::zero(), |acc, k| {
        acc + ExactRational::new(BigInt::one(), BigInt::from(k))
    })
}

fn widen(b: &BallReal, r: &BallReal) -> BallReal {
    let rr = r.abs();
    (b - &rr).hull(&(b + &rr))
}

/// Euler's constant γ.
pub fn euler_gamma(prec: u32) -> BallReal {
    let p = plan(prec);
    let wp = prec + 32;
    let n = p.n;
    let mut exact = harmonic_exact(n - 1) + ExactRational::new(BigInt::one(), BigInt::from(2 * n));
    for k in 1..=p.k {
        exact += &p.bern[2 * k]
            / ExactRational::from_integer(BigInt::from(2 * k as u64) * num_traits::pow(BigInt::from(n), 2 * k));
    }
    let logn = BallReal::from_i64(n as i64, wp).ln();
    let core = &BallReal::from_rational(&exact, wp) - &logn;
    let tail = BallReal::from_rational(&em_tail(&p.bern, p.k, n), wp);
    widen(&core, &tail).with_prec(prec)
}

/// The first Stieltjes constant γ₁.
pub fn stieltjes_gamma1(prec: u32) -> BallReal {
    let p = plan(prec);
    let wp = prec + 32;
    let n = p.n;
    let logn = BallReal::from_i64(n as i64, wp).ln();
    // The sign condition for the remainder: log N > H_2K.
    let h2k = harmonic_exact(2 * p.k as u64);
    assert!(
        logn.lower() > &crate::ball::to_rug_rational(&h2k),
        "Euler–Maclaurin sign condition failed"
    );
    let mut acc = BallReal::zero(wp);
    for m in 2..n {
        let lm = BallReal::from_i64(m as i64, wp).ln();
        acc = &acc + &(&lm / &BallReal::from_i64(m as i64, wp));
    }
    acc = &acc - &(&logn.sqr() / &BallReal::from_i64(2, wp));
    acc = &acc + &(&logn / &BallReal::from_i64(2 * n as i64, wp));
    for k in 1..=p.k {
        let h = harmonic_exact(2 * k as u64 - 1);
        let coeff = &p.bern[2 * k]
            / ExactRational::from_integer(BigInt::from(2 * k as u64) * num_traits::pow(BigInt::from(n), 2 * k));
        let factor = &logn - &BallReal::from_rational(&h, wp);
        acc = &acc + &(&BallReal::from_rational(&coeff, wp) * &factor);
    }
    let h = harmonic_exact(2 * p.k as u64 - 1);
    let tail = &BallReal::from_rational(&em_tail(&p.bern, p.k, n), wp) * &(&logn - &BallReal::from_rational(&h, wp));
    widen(&acc, &tail).with_prec(prec)
}

/// `ζ(s)` for `s = k + 1/2`, `k ≥ 1`, given as `twice_s = 2s`.
///
/// Truncated series `Σ_{n≤T} n^{-s}` plus the integral tail, which lies in
/// `[(T+1)^{1−s}/(s−1), T^{1−s}/(s−1)]`.
pub fn zeta_half_integer(twice_s: u32, truncation: u64, prec: u32) -> Result<BallReal> {
    if twice_s < 3 || twice_s.is_multiple_of(2) {
        return Err(crate::error::domain("zeta_half_integer needs s ∈ {3/2, 5/2, …}"));
    }
    if truncation == 0 {
        return Err(crate::error::domain("truncation point must be positive"));
    }
    let k = (twice_s / 2) as i32; // s = k + 1/2
    let wp = prec + 32;
    let mut acc = BallReal::zero(wp);
    for n in 1..=truncation {
        let b = BallReal::from_i64(n as i64, wp);
        let denom = &b.powi(k) * &b.sqrt();
        acc = &acc + &(&BallReal::one(wp) / &denom);
    }
    // t^{1−s}/(s−1) = 1/((s−1) t^{k−1} √t)
    let sm1 = BallReal::ratio(twice_s as i64 - 2, 2, wp);
    let tail_at = |t: u64| -> BallReal {
        let b = BallReal::from_i64(t as i64, wp);
        &BallReal::one(wp) / &(&sm1 * &(&b.powi(k - 1) * &b.sqrt()))
    };
    let lo = &acc + &tail_at(truncation + 1);
    let hi = &acc + &tail_at(truncation);
    Ok(lo.hull(&hi).with_prec(prec))
}

/// `ζ(2k)` is not needed beyond `Γ_j`; this is kept for cross-checks of the
/// even-index identity `Γ_2k = |B_2k|`.
pub fn zeta_even(k: u32, prec: u32) -> BallReal {
    // ζ(2k) = (−1)^{k+1} B_2k (2π)^{2k} / (2 (2k)!)
    let b = bernoulli_numbers(2 * k as usize).pop().unwrap().abs();
    let wp = prec + 16;
    let fact: BigInt = (1..=2 * k as u64).map(BigInt::from).product();
    let two_pi = BallReal::pi(wp).mul_i64(2);
    let num = &BallReal::from_rational(&b, wp) * &two_pi.powi(2 * k as i32);
    (&num / &BallReal::from_bigint(&(fact * 2), wp)).with_prec(prec)
}
