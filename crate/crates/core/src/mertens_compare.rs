//! `M(x) − x·m(x)` with `M(x) = Σ_{n≤x} μ(n)` and `m(x) = Σ_{n≤x} μ(n)/n`:
//! its first sign change and the comparison of `sup |m(t)|t` with `sup |M(t)|`.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};

use crate::ball::{BallReal, Status};
use crate::context::{Comparison, Engine};
use crate::error::{Error, Result};
use crate::rational::{int, ratio, ExactRational};
use crate::report::{Report, VerificationRecord};
use crate::sieve::MobiusTable;

pub const MERTENS_SIGN: &str = "mertens-sign";
pub const MERTENS_SIGN_CHANGE: &str = "mertens-sign-change";
pub const MERTENS_RATIO: &str = "mertens-ratio";

/// First `x` of the ratio statement.
pub const RATIO_THRESHOLD: u64 = 94;

/// Exact `M(x) − x·m(x)`.
pub fn mertens_gap(x: u64, mobius: &MobiusTable) -> Result<ExactRational> {
    if x == 0 {
        return Err(crate::error::domain("mertens_gap needs x ≥ 1"));
    }
    let (big, small) = crate::summatory::mertens(&int(x as i64), mobius)?;
    Ok(ExactRational::from_integer(big) - int(x as i64) * small)
}

/// Running `M(x)` and the numerator of `m(x)` over `L = lcm(1..=x)`.
struct GapSweep<'a> {
    mobius: &'a MobiusTable,
    x: u64,
    big_m: i64,
    lcm: BigUint,
    numer: BigInt,
}

impl<'a> GapSweep<'a> {
    fn new(mobius: &'a MobiusTable) -> Self {
        Self {
            mobius,
            x: 0,
            big_m: 0,
            lcm: BigUint::from(1u32),
            numer: BigInt::zero(),
        }
    }

    fn step(&mut self) {
        self.x += 1;
        let x = self.x;
        if let Some(p) = prime_power_base(x) {
            self.lcm *= p;
            self.numer *= p;
        }
        let mu = self.mobius.mu(x) as i64;
        if mu != 0 {
            self.big_m += mu;
            let cof = BigInt::from(&self.lcm / BigUint::from(x));
            if mu > 0 {
                self.numer += cof;
            } else {
                self.numer -= cof;
            }
        }
    }

    /// Numerator of the gap over `L`: `M·L − x·numer`.
    fn gap_numerator(&self) -> BigInt {
        BigInt::from(self.big_m) * BigInt::from(self.lcm.clone()) - &self.numer * BigInt::from(self.x)
    }

    fn gap(&self) -> ExactRational {
        ExactRational::new(self.gap_numerator(), BigInt::from(self.lcm.clone()))
    }

    fn gap_ball(&self, num: &BigInt, prec: u32) -> BallReal {
        let wp = prec + 16;
        (&BallReal::from_bigint(num, wp) / &BallReal::from_bigint(&BigInt::from(self.lcm.clone()), wp)).with_prec(prec)
    }
}

/// `p` when `n = p^k` for a prime `p` and `k ≥ 1`.
fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            return (m == 1).then_some(p);
        }
        p += 1;
    }
    Some(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignChangeReport {
    /// Smallest `x ≥ 2` with a non-negative gap, if any up to the limit.
    pub first_nonnegative_x: Option<u64>,
    /// Gaps at `x − 1` and `x`.
    pub values_before_after: Option<(ExactRational, ExactRational)>,
    pub scan_limit: u64,
}

fn check_limit(limit: u64, mobius: &MobiusTable) -> Result<()> {
    if limit > mobius.limit() {
        return Err(Error::SieveLimit {
            value: limit.to_string(),
            limit: mobius.limit(),
        });
    }
    Ok(())
}

/// Exact scan of the gap's sign on `[2, limit]`.
pub fn find_first_sign_change(limit: u64, mobius: &MobiusTable) -> Result<SignChangeReport> {
    let mut report = SignChangeReport {
        first_nonnegative_x: None,
        values_before_after: None,
        scan_limit: limit,
    };
    if limit < 2 {
        return Ok(report);
    }
    check_limit(limit, mobius)?;
    let mut sweep = GapSweep::new(mobius);
    sweep.step();
    let mut prev = sweep.gap();
    for _ in 2..=limit {
        sweep.step();
        if sweep.gap_numerator().sign() != Sign::Minus {
            report.first_nonnegative_x = Some(sweep.x);
            report.values_before_after = Some((prev, sweep.gap()));
            return Ok(report);
        }
        prev = sweep.gap();
    }
    Ok(report)
}

/// Per-`x` records of `gap(x) < 0` on `[2, limit]` up to the first sign
/// change, one record for the change itself, and a note with mean values of
/// `gap + 2` per decade.
pub fn check_sign(engine: &Engine, limit: u64) -> Result<Report> {
    let mobius = engine.tables().mobius();
    check_limit(limit, mobius)?;
    let prec = engine.base().bits();
    let mut report = Report::new(MERTENS_SIGN);
    let mut sweep = GapSweep::new(mobius);
    sweep.step();
    let zero = BallReal::zero(prec);
    let mut decade = (10u64, 0.0f64, 0u64);
    let mut hist = Vec::new();
    for _ in 2..=limit.max(1) {
        if limit < 2 {
            break;
        }
        sweep.step();
        let x = sweep.x;
        let num = sweep.gap_numerator();
        let ball = sweep.gap_ball(&num, prec);
        while x >= decade.0 {
            if decade.2 > 0 {
                hist.push(format!(
                    "[{}, {}): {:.4}",
                    decade.0 / 10,
                    decade.0,
                    decade.1 / decade.2 as f64
                ));
            }
            decade = (decade.0 * 10, 0.0, 0);
        }
        decade.1 += ball.to_f64() + 2.0;
        decade.2 += 1;
        let xr = int(x as i64);
        if num.sign() == Sign::Minus {
            let c = Comparison::lt(ball, zero.clone());
            report.push(
                &xr,
                VerificationRecord::from_comparison(MERTENS_SIGN, &xr, &c, Status::Pass),
            );
        } else {
            let c = Comparison::le(zero.clone(), ball);
            report.push(
                &xr,
                VerificationRecord::from_comparison(MERTENS_SIGN_CHANGE, &xr, &c, Status::Pass),
            );
            report.note(format!(
                "first non-negative gap at x = {x} (negative on [2, {}])",
                x - 1
            ));
            break;
        }
    }
    if report.records.iter().all(|r| r.claim_id == MERTENS_SIGN) {
        report.note(format!("no sign change on [2, {limit}]"));
    }
    if decade.2 > 0 {
        hist.push(format!(
            "[{}, {}]: {:.4}",
            decade.0 / 10,
            sweep.x,
            decade.1 / decade.2 as f64
        ));
    }
    if !hist.is_empty() {
        report.note(format!("mean of gap + 2 by decade: {}", hist.join("; ")));
    }
    Ok(report)
}

/// Scale of the fixed-point `m(n)`.
const RATIO_SHIFT: u32 = 100;

/// Outcome of the ratio scan at one integer `n`, covering real `t ∈ [n, n+1)`.
#[derive(Clone, Debug)]
pub struct RatioStep {
    pub n: u64,
    /// Enclosure of the range of `sup_{t≤x}|m(t)|t / sup_{t≤x}|M(t)|` over `x ∈ [n, n+1)`.
    pub ratio: BallReal,
    pub status: Status,
}

/// Runs the real-variable ratio scan on `[1, limit]`, calling `visit` for each
/// integer `n`.
///
/// For real `t ∈ [k, k+1)` the step functions give `|m(t)|t = |m(k)|t`, so
/// `sup_{t≤x}|m(t)|t = max(max_{k<n}|m(k)|(k+1), |m(n)|x)` for `x ∈ [n, n+1)`,
/// and `sup |M|` is a maximum over integers. `m(n)` is kept in fixed point
/// with a one-sided error count, so each verdict is certified.
pub fn ratio_scan<F>(limit: u64, mobius: &MobiusTable, prec: u32, mut visit: F) -> Result<()>
where
    F: FnMut(RatioStep),
{
    check_limit(limit, mobius)?;
    let one: i128 = 1 << RATIO_SHIFT;
    let mut v: i128 = 0; // ≈ 2^SHIFT · m(n), floor per term
    let mut err: i128 = 0; // |2^SHIFT · m(n) − v| < err
    let mut big_m: i64 = 0;
    let mut sup_m_abs: i64 = 0;
    // Running sup over closed-off unit intervals, as [lo, hi] in units 2^-SHIFT.
    let mut prev: (u128, u128) = (0, 0);
    let scale = BallReal::from_fixed(1, 0, RATIO_SHIFT, prec + 16);
    let lo_q = ratio(2, 3);
    let hi_q = ratio(3, 2);
    for n in 1..=limit {
        let mu = mobius.mu(n);
        if mu != 0 {
            let t = one.div_euclid(n as i128);
            v += mu as i128 * t;
            err += 1;
            big_m += mu as i64;
        }
        sup_m_abs = sup_m_abs.max(big_m.abs());
        let a = v.unsigned_abs();
        let e = err as u128;
        let (m_lo, m_hi) = (a.saturating_sub(e), a + e);
        let nn = n as u128;
        let at_n = (m_lo * nn, m_hi * nn);
        let at_end = (m_lo * (nn + 1), m_hi * (nn + 1));
        let low = (prev.0.max(at_n.0), prev.1.max(at_n.1));
        let high = (prev.0.max(at_end.0), prev.1.max(at_end.1));
        prev = high;
        if sup_m_abs == 0 {
            continue;
        }
        // ratio range over [n, n+1): [low/B, high/B].
        let b = BallReal::from_i64(sup_m_abs, prec + 16);
        let lo_ball = &(&BallReal::from_bigint(&BigInt::from(low.0), prec + 16) * &scale) / &b;
        let hi_ball = &(&BallReal::from_bigint(&BigInt::from(high.1), prec + 16) * &scale) / &b;
        let enclosure = lo_ball.hull(&hi_ball).with_prec(prec);
        // Exact integer comparisons in units of 2^-SHIFT.
        let bs = sup_m_abs as u128;
        let denom = |q: &ExactRational| -> (u128, u128) {
            let (p, d) = (q.numer(), q.denom());
            (
                num_traits::ToPrimitive::to_u128(p).unwrap(),
                num_traits::ToPrimitive::to_u128(d).unwrap(),
            )
        };
        let (lp, ld) = denom(&lo_q);
        let (hp, hd) = denom(&hi_q);
        let unit = 1u128 << RATIO_SHIFT;
        // 2/3 ≤ A/B ⇔ 3A ≥ 2B·unit
        let lower_pass = low.0 * ld >= lp * bs * unit;
        let lower_fail = low.1 * ld < lp * bs * unit;
        let upper_pass = high.1 * hd <= hp * bs * unit;
        let upper_fail = high.0 * hd > hp * bs * unit;
        let status = if lower_fail || upper_fail {
            Status::Fail
        } else if lower_pass && upper_pass {
            Status::Pass
        } else {
            Status::Inconclusive
        };
        visit(RatioStep {
            n,
            ratio: enclosure,
            status,
        });
    }
    Ok(())
}

/// One record per integer `x ∈ [max(lo, 94), limit]`; `x < 94` are summarised
/// in a note.
pub fn ratio_check(engine: &Engine, lo: u64, limit: u64) -> Result<Report> {
    if limit < RATIO_THRESHOLD {
        return Err(crate::error::domain("mertens-ratio needs limit ≥ 94"));
    }
    let prec = engine.base().bits();
    let band = BallReal::from_rational(&ratio(2, 3), prec).hull(&BallReal::from_rational(&ratio(3, 2), prec));
    let mut report = Report::new(MERTENS_RATIO);
    let mut outside_below = Vec::new();
    let mut min_lower: Option<(f64, u64)> = None;
    ratio_scan(limit, engine.tables().mobius(), prec, |step| {
        if step.n < RATIO_THRESHOLD {
            if step.status != Status::Pass {
                outside_below.push(step.n);
            }
            return;
        }
        if step.n < lo {
            return;
        }
        let low = step.ratio.lower().to_f64();
        if min_lower.is_none_or(|(m, _)| low < m) {
            min_lower = Some((low, step.n));
        }
        let xr = int(step.n as i64);
        let c = Comparison::le(step.ratio, band.clone());
        report.push(
            &xr,
            VerificationRecord::from_comparison(MERTENS_RATIO, &xr, &c, step.status),
        );
    })?;
    report.note(format!(
        "below 94 the ratio leaves [2/3, 3/2] at {} integers{}",
        outside_below.len(),
        outside_below
            .last()
            .map(|n| format!(", last at {n}"))
            .unwrap_or_default()
    ));
    if let Some((m, n)) = min_lower {
        report.note(format!(
            "smallest ratio on [{}, {limit}]: {m:.6} at x = {n}",
            lo.max(RATIO_THRESHOLD)
        ));
    }
    Ok(report)
}

/// Integer-variable variant: `max_{k≤n}|m(k)|k / max_{k≤n}|M(k)|`, exact.
/// Kept for comparison with the real-variable reading.
pub fn integer_ratio(n: u64, mobius: &MobiusTable) -> Result<ExactRational> {
    check_limit(n, mobius)?;
    let mut best = ExactRational::zero();
    let mut m = ExactRational::zero();
    let mut big = 0i64;
    let mut sup_big = 0i64;
    for k in 1..=n {
        let mu = mobius.mu(k) as i64;
        if mu != 0 {
            m += ratio(mu, k as i64);
            big += mu;
        }
        sup_big = sup_big.max(big.abs());
        let v = m.abs() * int(k as i64);
        if v > best {
            best = v;
        }
    }
    if sup_big == 0 {
        return Err(crate::error::domain("sup |M| is zero"));
    }
    Ok(best / int(sup_big))
}

/// `gap(x) + 2`, exact.
pub fn gap_residual(x: u64, mobius: &MobiusTable) -> Result<ExactRational> {
    Ok(mertens_gap(x, mobius)? + int(2))
}
