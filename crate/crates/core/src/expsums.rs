//! Exponential sums `Σ_{N<n≤N₁} e(f(n))` with `e(t) = exp(2πit)`, and the
//! explicit first- and second-derivative bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ball::BallReal;
use crate::context::{Comparison, Context, Engine};
use crate::error::Result;
use crate::rational::{self, int, ratio, ExactRational};
use crate::report::{RangeSpec, Report, VerificationRecord};

pub const KUSMIN_LANDAU: &str = "kusmin-landau";
pub const SECOND_DERIV: &str = "second-deriv";
pub const VDC: &str = "vdc";

/// A phase `f` with exact rational values at the integers.
pub trait PhaseFunction {
    /// `f(n)`, exact.
    fn at(&self, n: u64) -> ExactRational;
    fn f(&self, t: &BallReal) -> BallReal;
    fn f1(&self, t: &BallReal) -> BallReal;
    fn f2(&self, t: &BallReal) -> BallReal;
    /// Whether `f′` is monotonic on the whole domain.
    fn derivative_monotonic(&self) -> bool;
    /// `(λ₂, c₂λ₂)` bracketing `f″` on the declared block, when known.
    fn second_derivative_range(&self, _prec: u32) -> Option<(BallReal, BallReal)> {
        None
    }
}

/// `f(t) = θt`.
#[derive(Clone, Debug)]
pub struct LinearPhase {
    pub theta: ExactRational,
}

impl LinearPhase {
    pub fn new(theta: ExactRational) -> Self {
        Self { theta }
    }

    /// `‖θ‖`, the distance from `θ` to the nearest integer.
    pub fn lambda1(&self) -> ExactRational {
        let f = rational::frac(&self.theta);
        let g = int(1) - &f;
        if f < g {
            f
        } else {
            g
        }
    }
}

impl PhaseFunction for LinearPhase {
    fn at(&self, n: u64) -> ExactRational {
        &self.theta * int(n as i64)
    }
    fn f(&self, t: &BallReal) -> BallReal {
        t.mul_rational(&self.theta)
    }
    fn f1(&self, t: &BallReal) -> BallReal {
        BallReal::from_rational(&self.theta, t.prec())
    }
    fn f2(&self, t: &BallReal) -> BallReal {
        BallReal::zero(t.prec())
    }
    fn derivative_monotonic(&self) -> bool {
        true
    }
}

/// `f(t) = mx/t`, optionally tied to the dyadic block `(N, 2N]`.
#[derive(Clone, Debug)]
pub struct HyperbolicPhase {
    pub m: u64,
    pub x: ExactRational,
    block: Option<u64>,
}

pub fn hyperbolic_phase(m: u64, x: ExactRational) -> Result<HyperbolicPhase> {
    if m == 0 {
        return Err(crate::error::domain("m must be positive"));
    }
    if x <= int(0) {
        return Err(crate::error::domain("x must be positive"));
    }
    Ok(HyperbolicPhase { m, x, block: None })
}

impl HyperbolicPhase {
    /// Declares the block `(N, 2N]`, on which `f″ ∈ [λ₂, 8λ₂]` with `λ₂ = mx/(4N³)`.
    pub fn with_block(mut self, n: u64) -> Self {
        self.block = Some(n);
        self
    }

    pub fn mx(&self) -> ExactRational {
        &self.x * int(self.m as i64)
    }

    /// `mx/(4N³)`.
    pub fn block_lambda2(&self, n: u64) -> ExactRational {
        self.mx() / (int(4) * int(n as i64).pow(3))
    }
}

impl PhaseFunction for HyperbolicPhase {
    fn at(&self, n: u64) -> ExactRational {
        self.mx() / int(n as i64)
    }
    fn f(&self, t: &BallReal) -> BallReal {
        &BallReal::from_rational(&self.mx(), t.prec()) / t
    }
    fn f1(&self, t: &BallReal) -> BallReal {
        -(&BallReal::from_rational(&self.mx(), t.prec()) / &t.sqr())
    }
    fn f2(&self, t: &BallReal) -> BallReal {
        (&BallReal::from_rational(&self.mx(), t.prec()) / &t.powi(3)).mul_i64(2)
    }
    fn derivative_monotonic(&self) -> bool {
        true
    }
    fn second_derivative_range(&self, prec: u32) -> Option<(BallReal, BallReal)> {
        let n = self.block?;
        let l = BallReal::from_rational(&self.block_lambda2(n), prec);
        let hi = l.mul_i64(8);
        Some((l, hi))
    }
}

/// `−f`.
#[derive(Clone, Debug)]
pub struct Conjugate<P>(pub P);

impl<P: PhaseFunction> PhaseFunction for Conjugate<P> {
    fn at(&self, n: u64) -> ExactRational {
        -self.0.at(n)
    }
    fn f(&self, t: &BallReal) -> BallReal {
        -self.0.f(t)
    }
    fn f1(&self, t: &BallReal) -> BallReal {
        -self.0.f1(t)
    }
    fn f2(&self, t: &BallReal) -> BallReal {
        -self.0.f2(t)
    }
    fn derivative_monotonic(&self) -> bool {
        self.0.derivative_monotonic()
    }
    fn second_derivative_range(&self, prec: u32) -> Option<(BallReal, BallReal)> {
        self.0.second_derivative_range(prec).map(|(lo, hi)| (-hi, -lo))
    }
}

#[derive(Clone, Debug)]
pub struct ExpSumResult {
    pub re: BallReal,
    pub im: BallReal,
    pub modulus: BallReal,
    pub term_count: u64,
}

/// `Σ_{N<n≤N₁} e(f(n))`. Each phase is reduced mod 1 exactly before the
/// trigonometric evaluation.
pub fn exp_sum<P: PhaseFunction + ?Sized>(f: &P, n: u64, n1: u64, prec: u32) -> Result<ExpSumResult> {
    if n == 0 || n >= n1 {
        return Err(crate::error::domain("exp_sum needs 0 < N < N₁"));
    }
    let wp = prec + 16;
    let mut re = BallReal::zero(wp);
    let mut im = BallReal::zero(wp);
    for k in n + 1..=n1 {
        let (c, s) = BallReal::cos_sin_2pi(&f.at(k), wp);
        re = &re + &c;
        im = &im + &s;
    }
    let modulus = (&re.sqr() + &im.sqr()).sqrt().with_prec(prec);
    Ok(ExpSumResult {
        re: re.with_prec(prec),
        im: im.with_prec(prec),
        modulus,
        term_count: n1 - n,
    })
}

/// `2/(πλ₁)` for `0 < λ₁ < 1`.
pub fn kusmin_landau_bound(lambda1: &BallReal) -> Result<BallReal> {
    let one = BallReal::one(lambda1.prec());
    if !lambda1.is_positive() || !(&one - lambda1).is_positive() {
        return Err(crate::error::domain("Kusmin–Landau needs 0 < λ₁ < 1"));
    }
    let p = lambda1.prec();
    Ok(&BallReal::from_i64(2, p) / &(&BallReal::pi(p) * lambda1))
}

/// `4/√(πλ₂)` for `0 < λ₂ < 1/π`.
pub fn second_derivative_lemma_bound(lambda2: &BallReal) -> Result<BallReal> {
    let p = lambda2.prec();
    let pl = &BallReal::pi(p) * lambda2;
    if !lambda2.is_positive() || !(&BallReal::one(p) - &pl).is_positive() {
        return Err(crate::error::domain("the second-derivative bound needs 0 < λ₂ < 1/π"));
    }
    Ok(&BallReal::from_i64(4, p) / &pl.sqrt())
}

/// `(4/√π)(c₂Nλ₂^{1/2} + 2λ₂^{−1/2})`.
pub fn van_der_corput_bound(n: u64, lambda2: &BallReal, c2: &BallReal) -> Result<BallReal> {
    let p = lambda2.prec();
    if n == 0 || !lambda2.is_positive() || (c2 - &BallReal::one(p)).is_negative() {
        return Err(crate::error::domain("van der Corput needs N ≥ 1, λ₂ > 0, c₂ ≥ 1"));
    }
    let s = lambda2.sqrt();
    let inner = &(&(c2 * &s) * &BallReal::from_i64(n as i64, p)) + &(&BallReal::from_i64(2, p) / &s);
    Ok(&(&BallReal::from_i64(4, p) / &BallReal::pi(p).sqrt()) * &inner)
}

/// `|Σ_{N<n≤N₁} e(θn)| ≤ 2/(π‖θ‖)`.
pub fn kusmin_landau_case(ctx: &Context, theta: &ExactRational, n: u64, n1: u64) -> Result<Comparison> {
    let f = LinearPhase::new(theta.clone());
    let s = exp_sum(&f, n, n1, ctx.bits())?;
    let bound = kusmin_landau_bound(&ctx.exact(&f.lambda1()))?;
    Ok(Comparison::le(s.modulus, bound))
}

/// `|Σ_{N<n≤2N} e(mx/n)| ≤` the van der Corput bound with `λ₂ = mx/(4N³)`, `c₂ = 8`.
pub fn vdc_case(ctx: &Context, m: u64, x: &ExactRational, n: u64) -> Result<Comparison> {
    let f = hyperbolic_phase(m, x.clone())?.with_block(n);
    let s = exp_sum(&f, n, 2 * n, ctx.bits())?;
    let bound = van_der_corput_bound(n, &ctx.exact(&f.block_lambda2(n)), &ctx.int(8))?;
    Ok(Comparison::le(s.modulus, bound))
}

/// Block end for the second-derivative lemma with `f(t) = mx/t` on `(N, N₁]`:
/// with `u = mx/N²` and `k = ⌈u⌉ − 1`, `N₁ = min(2N, ⌊√(mx/k)⌋)` keeps `f′`
/// away from the integers on `(N, N₁)`. `None` when the block is empty.
pub fn second_deriv_block(m: u64, x: &ExactRational, n: u64) -> Option<u64> {
    let mx = x * int(m as i64);
    let u = &mx / int(n as i64).pow(2);
    let k = -rational::floor(&-&u) - 1;
    let n1 = if k <= 0.into() {
        2 * n
    } else {
        let lim = rational::isqrt_floor(&(&mx / ExactRational::from_integer(k)));
        let lim = num_traits::ToPrimitive::to_u64(&lim).unwrap_or(u64::MAX);
        lim.min(2 * n)
    };
    (n1 > n).then_some(n1)
}

/// `λ₂ = 2mx/N₁³`.
pub fn second_deriv_lambda2(m: u64, x: &ExactRational, n1: u64) -> ExactRational {
    x * int(2 * m as i64) / int(n1 as i64).pow(3)
}

/// Whether the second-derivative lemma applies to `mx/t` starting at `N`.
pub fn second_deriv_applicable(m: u64, x: &ExactRational, n: u64) -> Option<u64> {
    let n1 = second_deriv_block(m, x, n)?;
    // λ₂ < 1/π, checked with 1/π > 0.3183.
    (second_deriv_lambda2(m, x, n1) < ratio(3183, 10_000)).then_some(n1)
}

pub fn second_deriv_case(ctx: &Context, m: u64, x: &ExactRational, n: u64, n1: u64) -> Result<Comparison> {
    let f = hyperbolic_phase(m, x.clone())?;
    let s = exp_sum(&f, n, n1, ctx.bits())?;
    let bound = second_derivative_lemma_bound(&ctx.exact(&second_deriv_lambda2(m, x, n1)))?;
    Ok(Comparison::le(s.modulus, bound))
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

fn draw_block(rng: &mut ChaCha8Rng) -> u64 {
    (log_uniform(rng, 1.0, 1000.0).round() as u64).clamp(1, 1000)
}

fn draw_theta(rng: &mut ChaCha8Rng) -> ExactRational {
    loop {
        let d = rng.gen_range(2..=1000i64);
        let a = rng.gen_range(-10 * d..=10 * d);
        let t = ratio(a, d);
        if !t.is_integer() {
            return t;
        }
    }
}

/// Draws `x = a/d ∈ [1, x_max]`, log-uniform in size, `d ≤ 100`.
fn draw_x(rng: &mut ChaCha8Rng, x_max: f64) -> ExactRational {
    let d = rng.gen_range(1..=100i64);
    let v = log_uniform(rng, 1.0, x_max.max(1.0));
    let a = ((v * d as f64).round() as i64).max(d);
    ratio(a, d)
}

fn case_record(
    engine: &Engine,
    id: &str,
    x: &ExactRational,
    f: impl Fn(&Context) -> Result<Comparison>,
) -> Result<VerificationRecord> {
    let (c, st) = engine.decide(f)?;
    Ok(VerificationRecord::from_comparison(id, x, &c, st))
}

/// `cases` random linear phases `θn` with `N ≤ 1000`, `N < N₁ ≤ 2N`.
pub fn sweep_kusmin_landau(engine: &Engine, cases: u64, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(KUSMIN_LANDAU);
    for _ in 0..cases {
        let theta = draw_theta(&mut rng);
        let n = draw_block(&mut rng);
        let n1 = rng.gen_range(n + 1..=2 * n);
        let id = format!(
            "{KUSMIN_LANDAU}:theta={}:N={n}:N1={n1}",
            rational::to_fraction_string(&theta)
        );
        let x = int(n1 as i64);
        let rec = case_record(engine, &id, &x, |ctx| kusmin_landau_case(ctx, &theta, n, n1))?;
        report.push(&x, rec);
    }
    report.sort();
    Ok(report)
}

/// `cases` random hyperbolic phases, `m ≤ 20`, `x ≤ x_max`, `N ≤ 1000`.
pub fn sweep_vdc(engine: &Engine, cases: u64, seed: u64, x_max: f64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(VDC);
    for _ in 0..cases {
        let m = rng.gen_range(1..=20u64);
        let x = draw_x(&mut rng, x_max);
        let n = draw_block(&mut rng);
        let id = format!("{VDC}:m={m}:N={n}");
        let rec = case_record(engine, &id, &x, |ctx| vdc_case(ctx, m, &x, n))?;
        report.push(&x, rec);
    }
    report.sort();
    Ok(report)
}

/// `cases` random hyperbolic phases satisfying the second-derivative lemma's
/// hypotheses (drawn by rejection).
pub fn sweep_second_deriv(engine: &Engine, cases: u64, seed: u64, x_max: f64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(SECOND_DERIV);
    let mut made = 0;
    while made < cases {
        let m = rng.gen_range(1..=20u64);
        let x = draw_x(&mut rng, x_max);
        let n = draw_block(&mut rng);
        let Some(n1) = second_deriv_applicable(m, &x, n) else {
            continue;
        };
        let id = format!("{SECOND_DERIV}:m={m}:N={n}:N1={n1}");
        let rec = case_record(engine, &id, &x, |ctx| second_deriv_case(ctx, m, &x, n, n1))?;
        report.push(&x, rec);
        made += 1;
    }
    report.sort();
    Ok(report)
}

/// One case per sample point of `range`: the point is the `x` of the phase
/// (for the linear family it only keys the record); `m`, `N` and `θ` are
/// drawn from a generator seeded with `seed`.
pub fn check_range(engine: &Engine, claim: &str, range: &RangeSpec, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(claim);
    for x in range.points()? {
        match claim {
            KUSMIN_LANDAU => {
                let theta = draw_theta(&mut rng);
                let n = draw_block(&mut rng);
                let n1 = rng.gen_range(n + 1..=2 * n);
                let id = format!("{claim}:theta={}:N={n}:N1={n1}", rational::to_fraction_string(&theta));
                let rec = case_record(engine, &id, &x, |ctx| kusmin_landau_case(ctx, &theta, n, n1))?;
                report.push(&x, rec);
            }
            VDC => {
                let m = rng.gen_range(1..=20u64);
                let n = draw_block(&mut rng);
                let id = format!("{claim}:m={m}:N={n}");
                let rec = case_record(engine, &id, &x, |ctx| vdc_case(ctx, m, &x, n))?;
                report.push(&x, rec);
            }
            SECOND_DERIV => {
                let mut found = None;
                for _ in 0..64 {
                    let m = rng.gen_range(1..=20u64);
                    let n = draw_block(&mut rng);
                    if let Some(n1) = second_deriv_applicable(m, &x, n) {
                        found = Some((m, n, n1));
                        break;
                    }
                }
                match found {
                    Some((m, n, n1)) => {
                        let id = format!("{claim}:m={m}:N={n}:N1={n1}");
                        let rec = case_record(engine, &id, &x, |ctx| second_deriv_case(ctx, m, &x, n, n1))?;
                        report.push(&x, rec);
                    }
                    None => report.note(format!(
                        "x = {}: no admissible (m, N) found",
                        rational::to_fraction_string(&x)
                    )),
                }
            }
            _ => return Err(crate::error::Error::UnknownClaim(claim.to_string())),
        }
    }
    report.sort();
    Ok(report)
}
