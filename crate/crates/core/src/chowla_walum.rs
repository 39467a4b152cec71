//! Generalized Chowla–Walum sums `G_{α,β,j}(x) = Σ_{n≤x^{1/α}} n^β B_j({x/n})`
//! and their explicit upper bounds.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};

use crate::ball::{BallReal, Status};
use crate::bernoulli::{gamma_j, periodic_bernoulli};
use crate::context::{Comparison, Context, Engine};
use crate::error::{Error, Result};
use crate::rational::{self, int, ratio, ExactRational};
use crate::report::{RangeSpec, Report, VerificationRecord};
use crate::summatory::UnitFractionBasis;

pub const PROP7: &str = "prop7";
pub const COR8: &str = "cor8";
pub const COR8_INTERMEDIATE: &str = "cor8-intermediate";
pub const COR8_CHAIN: &str = "cor8-chain";
pub const COR8_COEFFICIENT: &str = "cor8-coefficient";

/// Smallest `x` covered by the corollary.
pub const COR8_THRESHOLD: i64 = 300;

/// `α = alpha_num/alpha_den > 1`, `β ≥ 0`, `j ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GParams {
    alpha_num: u32,
    alpha_den: u32,
    pub beta: u32,
    pub j: u32,
}

impl GParams {
    pub fn new(alpha_num: u32, alpha_den: u32, beta: u32, j: u32) -> Result<Self> {
        if alpha_den == 0 || alpha_num <= alpha_den {
            return Err(crate::error::domain("α must be a rational greater than 1"));
        }
        if j < 2 {
            return Err(crate::error::domain("j must be at least 2"));
        }
        let g = num_integer::gcd(alpha_num, alpha_den);
        Ok(Self {
            alpha_num: alpha_num / g,
            alpha_den: alpha_den / g,
            beta,
            j,
        })
    }

    pub fn alpha(&self) -> ExactRational {
        ratio(self.alpha_num as i64, self.alpha_den as i64)
    }

    /// `⌊x^{1/α}⌋`: the largest `n` with `n^α ≤ x`.
    pub fn cutoff(&self, x: &ExactRational) -> BigInt {
        rational::rational_root_floor(x, self.alpha_num, self.alpha_den)
    }

    /// The sampled family `α ∈ {3/2, 2, 5/2}`, `β ∈ {0, 1, 2}`, `j ∈ {2, 3}`.
    pub fn sample_family() -> Vec<GParams> {
        let mut v = Vec::new();
        for (p, q) in [(3, 2), (2, 1), (5, 2)] {
            for beta in 0..3 {
                for j in 2..4 {
                    v.push(GParams::new(p, q, beta, j).unwrap());
                }
            }
        }
        v
    }
}

impl fmt::Display for GParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha_den == 1 {
            write!(f, "alpha={}:beta={}:j={}", self.alpha_num, self.beta, self.j)
        } else {
            write!(
                f,
                "alpha={}/{}:beta={}:j={}",
                self.alpha_num, self.alpha_den, self.beta, self.j
            )
        }
    }
}

fn require_gt_one(x: &ExactRational) -> Result<()> {
    if *x <= int(1) {
        return Err(crate::error::domain("G needs x > 1"));
    }
    Ok(())
}

fn cutoff_u64(p: &GParams, x: &ExactRational) -> Result<u64> {
    p.cutoff(x)
        .to_u64()
        .ok_or_else(|| crate::error::domain("cutoff does not fit in 64 bits"))
}

fn term(p: &GParams, x: &ExactRational, n: u64) -> Result<ExactRational> {
    let w = num_traits::pow(BigInt::from(n), p.beta as usize);
    let b = periodic_bernoulli(p.j, &(x / int(n as i64)))?;
    Ok(b * ExactRational::from_integer(w))
}

/// Exact `G_{α,β,j}(x)` for `j ∈ {2, 3}`.
pub fn g_sum(p: &GParams, x: &ExactRational) -> Result<ExactRational> {
    require_gt_one(x)?;
    if p.j > 3 {
        return Err(Error::UnsupportedIndex(p.j));
    }
    let y = cutoff_u64(p, x)?;
    let terms = (1..=y).map(|n| term(p, x, n)).collect::<Result<Vec<_>>>()?;
    Ok(rational::sum_exact(terms))
}

/// Enclosure of `G` from exactly computed terms summed in ball arithmetic.
/// Cheaper than [`g_sum`] when the cutoff is large.
pub fn g_sum_enclosure(ctx: &Context, p: &GParams, x: &ExactRational) -> Result<BallReal> {
    require_gt_one(x)?;
    if p.j > 3 {
        return Err(Error::UnsupportedIndex(p.j));
    }
    let y = cutoff_u64(p, x)?;
    let wp = ctx.bits() + 32;
    let mut acc = BallReal::zero(wp);
    for n in 1..=y {
        acc = &acc + &BallReal::from_rational(&term(p, x, n)?, wp);
    }
    Ok(acc.with_prec(ctx.bits()))
}

/// `G_{2,1,2}(n)` for an integer `n`, via `r = n mod k`:
/// `Σ_{k≤y} r²/k − Σ r + y(y+1)/12`. The first sum is accumulated over the
/// common denominator of `basis`, which must cover `⌊√n⌋`.
pub fn g212_integer(n: u64, basis: &UnitFractionBasis) -> Result<ExactRational> {
    if n < 2 {
        return Err(crate::error::domain("G needs x > 1"));
    }
    let y = (n as f64).sqrt() as u64;
    let y = (y.saturating_sub(2)..=y + 2).filter(|k| k * k <= n).max().unwrap();
    if y > basis.len() {
        return Err(crate::error::domain("unit-fraction basis too small"));
    }
    let mut num = BigUint::default();
    let mut rsum: u64 = 0;
    for k in 1..=y {
        let r = n % k;
        rsum += r;
        if r != 0 {
            num += basis.cofactor(k) * (r * r);
        }
    }
    let l = BigInt::from(basis.lcm().clone());
    let rest = BigInt::from(y * (y + 1)) - BigInt::from(12 * rsum);
    let numer = BigInt::from(num) * 12 + rest * &l;
    Ok(ExactRational::new(numer, l * 12))
}

/// `𝓛_{α,β}(x) = (3−α)/(2α(β+1)) · log x/log 2 + 1`.
pub fn log_factor(ctx: &Context, p: &GParams, x: &ExactRational) -> BallReal {
    let a = p.alpha();
    let c = (int(3) - &a) / (int(2) * &a * int(p.beta as i64 + 1));
    let ratio_log = &ctx.ln(x) / &ctx.ln(&int(2));
    &ratio_log.mul_rational(&c) + &ctx.int(1)
}

/// `4Γ_j((ζ(j−½)+¼)x^{β/α−1/(2α)+1/2} + ζ(j+½)x^{β/α+3/(2α)−1/2})·𝓛_{α,β}(x)`.
pub fn prop_main_bound(ctx: &Context, p: &GParams, x: &ExactRational) -> Result<BallReal> {
    let a = p.alpha();
    if a >= int(3) {
        return Err(crate::error::domain("the bound needs 1 < α < 3"));
    }
    if *x < int(1) {
        return Err(crate::error::domain("the bound needs x ≥ 1"));
    }
    let b = int(p.beta as i64);
    let e1 = &b / &a - ratio(1, 2) / &a + ratio(1, 2);
    let e2 = &b / &a + ratio(3, 2) / &a - ratio(1, 2);
    let xb = ctx.exact(x);
    let z_lo = ctx.zeta_half(2 * p.j - 1)?;
    let z_hi = ctx.zeta_half(2 * p.j + 1)?;
    let first = &(&z_lo + &ctx.ratio(1, 4)) * &xb.pow_rational(&e1);
    let second = &z_hi * &xb.pow_rational(&e2);
    let g = gamma_j(p.j, ctx.bits())?.mul_i64(4);
    Ok(&(&g * &(&first + &second)) * &log_factor(ctx, p, x))
}

/// `Γ_j x^{(β+1)/α}`.
pub fn trivial_bound(ctx: &Context, p: &GParams, x: &ExactRational) -> Result<BallReal> {
    if *x < int(1) {
        return Err(crate::error::domain("the bound needs x ≥ 1"));
    }
    let e = int(p.beta as i64 + 1) / p.alpha();
    Ok(&gamma_j(p.j, ctx.bits())? * &ctx.exact(x).pow_rational(&e))
}

/// `x^{3/4} log x`.
pub fn g212_bound(ctx: &Context, x: &ExactRational) -> BallReal {
    &ctx.exact(x).pow_rational(&ratio(3, 4)) * &ctx.ln(x)
}

/// `2.81 x^{3/4}(1 + log x/(8 log 2))`.
pub fn g212_intermediate_bound(ctx: &Context, x: &ExactRational) -> BallReal {
    let l = &ctx.ln(x) / &ctx.ln(&int(2)).mul_i64(8);
    let f = &ctx.exact(x).pow_rational(&ratio(3, 4)) * &(&l + &ctx.int(1));
    f.mul_rational(&ratio(281, 100))
}

/// The coefficient enclosures behind the intermediate constant:
/// `1.9 < 4Γ₂(ζ(3/2)+1/4) < 1.91` and `0.89 < 4Γ₂ζ(5/2) < 0.9`.
pub fn g212_coefficients(ctx: &Context) -> Result<Vec<(&'static str, Comparison)>> {
    let g = gamma_j(2, ctx.bits())?.mul_i64(4);
    let c1 = &g * &(&ctx.zeta_half(3)? + &ctx.ratio(1, 4));
    let c2 = &g * &ctx.zeta_half(5)?;
    Ok(vec![
        ("first-lower", Comparison::lt(ctx.ratio(19, 10), c1.clone())),
        ("first-upper", Comparison::lt(c1, ctx.ratio(191, 100))),
        ("second-lower", Comparison::lt(ctx.ratio(89, 100), c2.clone())),
        ("second-upper", Comparison::lt(c2, ctx.ratio(9, 10))),
    ])
}

fn basis_for(range: &RangeSpec) -> UnitFractionBasis {
    let y = rational::isqrt_floor(&range.x_max).to_u64().unwrap_or(1).max(1);
    UnitFractionBasis::new(y)
}

/// Exact `|G_{2,1,2}(x)|`, via the integer fast path when possible.
fn g212_abs(x: &ExactRational, basis: &UnitFractionBasis) -> Result<ExactRational> {
    let p = GParams::new(2, 1, 1, 2)?;
    let g = match (x.is_integer(), rational::floor_u64(x)) {
        (true, Some(n)) if rational::isqrt_floor(x).to_u64().unwrap_or(u64::MAX) <= basis.len() => {
            g212_integer(n, basis)?
        }
        _ => g_sum(&p, x)?,
    };
    Ok(g.abs())
}

/// The corollary's three comparisons at every sample point, plus the
/// coefficient enclosures (recorded at `x = x_min`).
pub fn check_g212(engine: &Engine, range: &RangeSpec) -> Result<Report> {
    if range.x_min < int(COR8_THRESHOLD) {
        return Err(crate::error::domain("cor8 needs x ≥ 300"));
    }
    let basis = basis_for(range);
    let mut report = Report::new(COR8);
    for (name, _) in g212_coefficients(engine.base())? {
        let (c, st) = engine.decide(|ctx| {
            let all = g212_coefficients(ctx)?;
            Ok(all.into_iter().find(|(n, _)| *n == name).unwrap().1)
        })?;
        let id = format!("{COR8_COEFFICIENT}:{name}");
        report.push(
            &range.x_min,
            VerificationRecord::from_comparison(&id, &range.x_min, &c, st),
        );
    }
    for x in range.points()? {
        let g = g212_abs(&x, &basis)?;
        let (c, st) = engine.decide(|ctx| Ok(Comparison::lt(ctx.exact(&g), g212_bound(ctx, &x))))?;
        report.push(&x, VerificationRecord::mixed(COR8, &x, &c, st, &g));
        let (c, st) = engine.decide(|ctx| Ok(Comparison::le(ctx.exact(&g), g212_intermediate_bound(ctx, &x))))?;
        report.push(&x, VerificationRecord::mixed(COR8_INTERMEDIATE, &x, &c, st, &g));
        let (c, st) = engine.decide(|ctx| Ok(Comparison::lt(g212_intermediate_bound(ctx, &x), g212_bound(ctx, &x))))?;
        report.push(&x, VerificationRecord::from_comparison(COR8_CHAIN, &x, &c, st));
    }
    report.sort();
    Ok(report)
}

/// `|G| ≤` the main bound and `|G| ≤` the trivial bound for every parameter
/// set in `params` and every sample point with `x > 1`.
pub fn check_g_family(engine: &Engine, range: &RangeSpec, params: &[GParams]) -> Result<Report> {
    let mut report = Report::new(PROP7);
    for x in range.points()? {
        if x <= int(1) {
            report.note(format!(
                "x = {} skipped: G needs x > 1",
                rational::to_fraction_string(&x)
            ));
            continue;
        }
        for p in params {
            let (c, st) = engine.decide(|ctx| {
                Ok(Comparison::le(
                    g_sum_enclosure(ctx, p, &x)?.abs(),
                    prop_main_bound(ctx, p, &x)?,
                ))
            })?;
            let id = format!("{PROP7}:{p}");
            report.push(&x, VerificationRecord::from_comparison(&id, &x, &c, st));
            let (c, st) = engine.decide(|ctx| {
                Ok(Comparison::le(
                    g_sum_enclosure(ctx, p, &x)?.abs(),
                    trivial_bound(ctx, p, &x)?,
                ))
            })?;
            let id = format!("{PROP7}-trivial:{p}");
            report.push(&x, VerificationRecord::from_comparison(&id, &x, &c, st));
        }
    }
    report.sort();
    Ok(report)
}

/// Status of a single `|G| ≤ main bound` comparison.
pub fn g_family_status(engine: &Engine, p: &GParams, x: &ExactRational) -> Result<Status> {
    let (_, st) = engine.decide(|ctx| {
        Ok(Comparison::le(
            g_sum_enclosure(ctx, p, x)?.abs(),
            prop_main_bound(ctx, p, x)?,
        ))
    })?;
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::PrecisionPolicy;
    use crate::bernoulli::bernoulli_polynomial;
    use crate::context::Tables;
    use crate::sieve::SieveConfig;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn engine() -> Engine {
        Engine::new(
            PrecisionPolicy::default(),
            Arc::new(Tables::new(SieveConfig::with_limit(1000)).unwrap()),
        )
    }

    fn p(a: u32, b: u32, beta: u32, j: u32) -> GParams {
        GParams::new(a, b, beta, j).unwrap()
    }

    #[test]
    fn g_sum_examples() {
        assert_eq!(g_sum(&p(2, 1, 1, 2), &int(4)).unwrap(), ratio(1, 2));
        assert_eq!(g_sum(&p(2, 1, 0, 3), &int(4)).unwrap(), int(0));
        let b = bernoulli_polynomial(2, &ratio(1, 3)).unwrap();
        let want = ratio(1, 6) + ratio(2, 6) + int(3) * b;
        assert_eq!(g_sum(&p(2, 1, 1, 2), &int(10)).unwrap(), want);
        assert!(matches!(
            g_sum(&p(2, 1, 1, 4), &int(10)),
            Err(Error::UnsupportedIndex(4))
        ));
        assert!(g_sum(&p(2, 1, 1, 2), &int(1)).is_err());
    }

    #[test]
    fn cutoff_is_exact_at_perfect_powers() {
        let q = p(3, 2, 0, 2);
        // n^{3/2} ≤ 27 ⇔ n ≤ 9.
        assert_eq!(q.cutoff(&int(27)), BigInt::from(9));
        assert_eq!(q.cutoff(&(int(27) - ratio(1, 1_000_000))), BigInt::from(8));
        assert_eq!(p(2, 1, 0, 2).cutoff(&int(99)), BigInt::from(9));
    }

    #[test]
    fn bound_examples() {
        let e = engine();
        let c = e.base();
        let l = log_factor(c, &p(2, 1, 1, 2), &int(4));
        assert!(l.contains_rational(&ratio(5, 4)));
        let t = trivial_bound(c, &p(2, 1, 1, 2), &int(4)).unwrap();
        assert!(t.contains_rational(&ratio(2, 3)));
        let t = trivial_bound(c, &p(3, 1, 0, 2), &int(8)).unwrap();
        assert!(t.contains_rational(&ratio(1, 3)));
        let t = trivial_bound(c, &p(5, 2, 2, 3), &int(1)).unwrap();
        assert!((&t - &gamma_j(3, 128).unwrap()).abs().upper() < &1e-30);
        assert!(prop_main_bound(c, &p(3, 1, 0, 2), &int(10)).is_err());
        let g = g_sum(&p(2, 1, 1, 2), &int(300)).unwrap().abs();
        assert!(prop_main_bound(c, &p(2, 1, 1, 2), &int(300)).unwrap().lower() > &crate::ball::to_rug_rational(&g));
    }

    #[test]
    fn coefficients_certified() {
        let e = engine();
        for (name, c) in g212_coefficients(e.base()).unwrap() {
            assert_eq!(c.status(), Status::Pass, "{name}");
        }
    }

    #[test]
    fn integer_fast_path_matches_definition() {
        let basis = UnitFractionBasis::new(40);
        for n in [2u64, 3, 4, 10, 99, 300, 301, 1000, 1599] {
            assert_eq!(
                g212_integer(n, &basis).unwrap(),
                g_sum(&p(2, 1, 1, 2), &int(n as i64)).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn g212_small_scan_and_domain() {
        let e = engine();
        let r = check_g212(&e, &RangeSpec::integers(300, 700).unwrap()).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.records.len(), 4 + 3 * 401);
        assert!(check_g212(&e, &RangeSpec::integers(100, 700).unwrap()).is_err());
    }

    #[test]
    fn g_family_on_a_few_points() {
        let e = engine();
        let range = RangeSpec::new(int(1), int(5000), crate::report::SampleMode::Geometric { count: 6 }).unwrap();
        let r = check_g_family(&e, &range, &GParams::sample_family()).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.notes.len(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn enclosure_contains_exact_sum(num in 2i64..200_000, den in 1i64..100, idx in 0usize..18) {
            let x = ratio(num, den);
            prop_assume!(x > int(1));
            let q = GParams::sample_family()[idx];
            let e = engine();
            let g = g_sum(&q, &x).unwrap();
            prop_assert!(g_sum_enclosure(e.base(), &q, &x).unwrap().contains_rational(&g));
        }
    }
}
