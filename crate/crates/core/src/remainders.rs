//! The Euler–Maclaurin remainders
//!
//! * `R₁(x) = H(x) − log x − γ + ψ(x)/x`
//! * `R₂(x) = Σ_{n≤x} log(x/n)/n − (½log²x + γ log x − γ₁)`
//!
//! evaluated from their finite-sum definitions, and the range checks
//! `8x²|R₁| ≤ 1`, `x²|R₂| ≤ 0.132` and `x³|R₂ − R₁| ≤ 0.033`.

use crate::ball::BallReal;
use crate::bernoulli::psi;
use crate::context::{Comparison, Context, Engine};
use crate::error::Result;
use crate::rational::{self, int, ratio, ExactRational};
use crate::report::{scan, RangeSpec, Report};

pub const R1_BOUND: &str = "r1-bound";
pub const R2_BOUND: &str = "r2-bound";
pub const R2_MINUS_R1: &str = "r2-minus-r1";

/// `R₁` and `R₂` at one point.
#[derive(Clone, Debug)]
pub struct RemainderValue {
    pub x: ExactRational,
    pub r1: BallReal,
    pub r2: BallReal,
}

fn require_ge_one(x: &ExactRational) -> Result<()> {
    if *x < int(1) {
        return Err(crate::error::domain("remainders need x ≥ 1"));
    }
    Ok(())
}

/// `H(n) − log t − γ + (t − n − 1/2)/t` for `n = ⌊t⌋`.
fn r1_parts(ctx: &Context, n: u64, t: &BallReal, log_t: &BallReal, psi_t: &BallReal) -> Result<BallReal> {
    let h = ctx.harmonic(&int(n as i64))?;
    Ok(&(&(&h - log_t) - ctx.gamma()) + &(psi_t / t))
}

/// `log t · H(n) − L(n) − (½log²t + γ log t − γ₁)` with `L(n) = Σ_{k≤n} log k / k`.
fn r2_parts(ctx: &Context, n: u64, log_t: &BallReal) -> Result<BallReal> {
    let nn = int(n as i64);
    let h = ctx.harmonic(&nn)?;
    let l = ctx.log_harmonic(&nn)?;
    let main = &(&log_t.sqr() / &ctx.int(2)) + &(&(ctx.gamma() * log_t) - ctx.gamma1());
    Ok(&(&(log_t * &h) - &l) - &main)
}

/// Enclosure of `R₁(x)`.
pub fn r1(ctx: &Context, x: &ExactRational) -> Result<BallReal> {
    require_ge_one(x)?;
    let n = ctx.tables().index(x)?;
    let t = ctx.exact(x);
    r1_parts(ctx, n, &t, &t.ln(), &ctx.exact(&psi(x)))
}

/// Enclosure of `R₂(x)`.
pub fn r2(ctx: &Context, x: &ExactRational) -> Result<BallReal> {
    require_ge_one(x)?;
    let n = ctx.tables().index(x)?;
    r2_parts(ctx, n, &ctx.ln(x))
}

/// `√x` as a ball and `⌊√x⌋`, for `x ≥ 1`.
pub fn sqrt_parts(ctx: &Context, x: &ExactRational) -> Result<(BallReal, u64)> {
    require_ge_one(x)?;
    let y = rational::isqrt_floor(x);
    let y = num_traits::ToPrimitive::to_u64(&y).ok_or_else(|| crate::error::domain("√x does not fit in 64 bits"))?;
    Ok((ctx.exact(x).sqrt(), y))
}

/// `ψ(√x) = √x − ⌊√x⌋ − 1/2`. The integer part is exact, so the enclosure
/// never straddles a jump of ψ.
pub fn psi_sqrt(ctx: &Context, x: &ExactRational) -> Result<BallReal> {
    let (s, y) = sqrt_parts(ctx, x)?;
    Ok(&s - &ctx.exact(&(int(y as i64) + ratio(1, 2))))
}

/// Enclosure of `R₁(√x)`.
pub fn r1_sqrt(ctx: &Context, x: &ExactRational) -> Result<BallReal> {
    let (s, y) = sqrt_parts(ctx, x)?;
    let log_s = &ctx.ln(x) / &ctx.int(2);
    let p = psi_sqrt(ctx, x)?;
    r1_parts(ctx, y, &s, &log_s, &p)
}

/// Enclosure of `R₂(√x)`.
pub fn r2_sqrt(ctx: &Context, x: &ExactRational) -> Result<BallReal> {
    let (_, y) = sqrt_parts(ctx, x)?;
    r2_parts(ctx, y, &(&ctx.ln(x) / &ctx.int(2)))
}

pub fn remainder_value(ctx: &Context, x: &ExactRational) -> Result<RemainderValue> {
    Ok(RemainderValue {
        x: x.clone(),
        r1: r1(ctx, x)?,
        r2: r2(ctx, x)?,
    })
}

/// `8x²|R₁(x)| ≤ 1`.
pub fn r1_bound(ctx: &Context, x: &ExactRational) -> Result<Comparison> {
    let xb = ctx.exact(x);
    let lhs = (&xb.sqr() * &r1(ctx, x)?.abs()).mul_i64(8);
    Ok(Comparison::le(lhs, ctx.int(1)))
}

/// `x²|R₂(x)| ≤ 0.132`.
pub fn r2_bound(ctx: &Context, x: &ExactRational) -> Result<Comparison> {
    let xb = ctx.exact(x);
    let lhs = &xb.sqr() * &r2(ctx, x)?.abs();
    Ok(Comparison::le(lhs, ctx.ratio(132, 1000)))
}

/// `x³|R₂(x) − R₁(x)| ≤ 0.033`.
pub fn r2_minus_r1(ctx: &Context, x: &ExactRational) -> Result<Comparison> {
    let xb = ctx.exact(x);
    let d = &r2(ctx, x)? - &r1(ctx, x)?;
    let lhs = &xb.powi(3) * &d.abs();
    Ok(Comparison::le(lhs, ctx.ratio(33, 1000)))
}

pub fn check_harmonic_remainder(engine: &Engine, range: &RangeSpec) -> Result<Report> {
    scan(engine, R1_BOUND, range, r1_bound)
}

/// Both remainder bounds for `R₂`, as two record families.
pub fn check_log_harmonic_remainders(engine: &Engine, range: &RangeSpec) -> Result<Report> {
    let mut report = scan(engine, R2_BOUND, range, r2_bound)?;
    report.extend(scan(engine, R2_MINUS_R1, range, r2_minus_r1)?);
    report.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{PrecisionPolicy, Status};
    use crate::context::Tables;
    use crate::sieve::SieveConfig;
    use std::sync::Arc;

    fn engine() -> Engine {
        Engine::new(
            PrecisionPolicy::default(),
            Arc::new(Tables::new(SieveConfig::with_limit(20_000)).unwrap()),
        )
    }

    #[test]
    fn small_values() {
        let e = engine();
        let c = e.base();
        // R₁(1) = 1/2 − γ
        let want = &c.ratio(1, 2) - c.gamma();
        assert!((&r1(c, &int(1)).unwrap() - &want).abs().upper() < &1e-35);
        // R₁(2) = 5/4 − log 2 − γ
        let want = &(&c.ratio(5, 4) - &c.ln(&int(2))) - c.gamma();
        assert!((&r1(c, &int(2)).unwrap() - &want).abs().upper() < &1e-35);
        // R₂(1) = γ₁
        assert!((&r2(c, &int(1)).unwrap() - c.gamma1()).abs().upper() < &1e-35);
        assert!(r1(c, &ratio(1, 2)).is_err());
    }

    #[test]
    fn sqrt_forms_agree_with_rational_forms_at_squares() {
        let e = engine();
        let c = e.base();
        for k in [1i64, 2, 7, 30, 100] {
            let x = int(k * k);
            let a = r1_sqrt(c, &x).unwrap();
            let b = r1(c, &int(k)).unwrap();
            assert!((&a - &b).abs().upper() < &1e-30, "k = {k}");
            let a = r2_sqrt(c, &x).unwrap();
            let b = r2(c, &int(k)).unwrap();
            assert!((&a - &b).abs().upper() < &1e-30, "k = {k}");
        }
    }

    #[test]
    fn bounds_hold_on_small_ranges() {
        let e = engine();
        let range = RangeSpec::integers(1, 300).unwrap();
        assert!(check_harmonic_remainder(&e, &range).unwrap().all_pass());
        assert!(check_log_harmonic_remainders(&e, &range).unwrap().all_pass());
        let single = RangeSpec::point(ratio(10, 3)).unwrap();
        let r = check_harmonic_remainder(&e, &single).unwrap();
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.records[0].status, Status::Pass);
        let one = RangeSpec::point(int(1)).unwrap();
        assert_eq!(check_harmonic_remainder(&e, &one).unwrap().records.len(), 1);
    }

    #[test]
    fn r1_decays() {
        let e = engine();
        let v = r1(e.base(), &int(20_000)).unwrap();
        // |R₁(n)| ≈ 1/(12n²) for integers.
        assert!(v.abs().upper() < &3e-10);
        assert!(v.abs().lower() > &1e-10);
    }
}
