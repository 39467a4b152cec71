//! Evaluation context: precision, cached constants and shared tables.
//!
//! A [`Context`] is tied to one working precision. An [`Engine`] owns the
//! precision ladder of a [`PrecisionPolicy`] and re-runs a comparison at the
//! next rung while the verdict is inconclusive. Tables are precision
//! independent and shared between rungs.

use std::sync::{Arc, OnceLock};

use crate::ball::{check_inequality, check_strict_inequality, BallReal, PrecisionPolicy, Status};
use crate::constants::{euler_gamma, stieltjes_gamma1, zeta_half_integer, ZETA_TRUNCATION};
use crate::error::{Error, Result};
use crate::rational::{self, ExactRational};
use crate::sieve::{sieve_mobius, sieve_tau, DivisorTable, MobiusTable, SieveConfig};
use crate::tables::{LogHarmonic, PrefixSums};

/// Lazily built tables up to the configured sieve limit.
#[derive(Debug)]
pub struct Tables {
    config: SieveConfig,
    tau: OnceLock<DivisorTable>,
    mobius: OnceLock<MobiusTable>,
    prefix: OnceLock<PrefixSums>,
    log_harmonic: OnceLock<LogHarmonic>,
}

impl Tables {
    pub fn new(config: SieveConfig) -> Result<Self> {
        if config.limit == 0 {
            return Err(crate::error::domain("sieve limit must be at least 1"));
        }
        if config.limit > config.budget {
            return Err(Error::Capacity {
                requested: config.limit,
                budget: config.budget,
            });
        }
        Ok(Self {
            config,
            tau: OnceLock::new(),
            mobius: OnceLock::new(),
            prefix: OnceLock::new(),
            log_harmonic: OnceLock::new(),
        })
    }

    pub fn limit(&self) -> u64 {
        self.config.limit
    }

    pub fn tau(&self) -> &DivisorTable {
        self.tau
            .get_or_init(|| sieve_tau(self.config.limit, &self.config).expect("admitted in new"))
    }

    pub fn mobius(&self) -> &MobiusTable {
        self.mobius
            .get_or_init(|| sieve_mobius(self.config.limit, &self.config).expect("admitted in new"))
    }

    pub fn prefix(&self) -> &PrefixSums {
        self.prefix.get_or_init(|| PrefixSums::build(self.tau()))
    }

    pub fn log_harmonic(&self) -> &LogHarmonic {
        self.log_harmonic.get_or_init(|| LogHarmonic::build(self.config.limit))
    }

    /// `⌊x⌋`, checked against the table limit.
    pub fn index(&self, x: &ExactRational) -> Result<u64> {
        match rational::floor_u64(x) {
            Some(n) if n <= self.limit() => Ok(n),
            _ => Err(Error::SieveLimit {
                value: rational::to_fraction_string(x),
                limit: self.limit(),
            }),
        }
    }
}

const ZETA_SLOTS: usize = 8;

/// Constants and table access at one working precision.
#[derive(Debug)]
pub struct Context {
    bits: u32,
    tables: Arc<Tables>,
    gamma: OnceLock<BallReal>,
    gamma1: OnceLock<BallReal>,
    zeta: [OnceLock<BallReal>; ZETA_SLOTS],
}

impl Context {
    pub fn new(bits: u32, tables: Arc<Tables>) -> Self {
        Self {
            bits,
            tables,
            gamma: OnceLock::new(),
            gamma1: OnceLock::new(),
            zeta: Default::default(),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn tables(&self) -> &Tables {
        &self.tables
    }

    pub fn gamma(&self) -> &BallReal {
        self.gamma.get_or_init(|| euler_gamma(self.bits))
    }

    pub fn gamma1(&self) -> &BallReal {
        self.gamma1.get_or_init(|| stieltjes_gamma1(self.bits))
    }

    /// `ζ(s)` for `s = twice_s / 2`, a half-integer ≥ 3/2.
    pub fn zeta_half(&self, twice_s: u32) -> Result<BallReal> {
        let slot = (twice_s as usize).wrapping_sub(3) / 2;
        if twice_s % 2 == 1 && twice_s >= 3 && slot < ZETA_SLOTS {
            return Ok(self.zeta[slot]
                .get_or_init(|| zeta_half_integer(twice_s, ZETA_TRUNCATION, self.bits).unwrap())
                .clone());
        }
        zeta_half_integer(twice_s, ZETA_TRUNCATION, self.bits)
    }

    pub fn int(&self, n: i64) -> BallReal {
        BallReal::from_i64(n, self.bits)
    }

    pub fn ratio(&self, p: i64, q: i64) -> BallReal {
        BallReal::ratio(p, q, self.bits)
    }

    pub fn exact(&self, x: &ExactRational) -> BallReal {
        BallReal::from_rational(x, self.bits)
    }

    pub fn pi(&self) -> BallReal {
        BallReal::pi(self.bits)
    }

    /// `log x` for `x > 0`.
    pub fn ln(&self, x: &ExactRational) -> BallReal {
        self.exact(x).ln()
    }

    /// `H(⌊x⌋)` from the fixed-point table.
    pub fn harmonic(&self, x: &ExactRational) -> Result<BallReal> {
        let n = self.tables.index(x)?;
        Ok(self.tables.prefix().harmonic(n, self.bits))
    }

    /// `Σ_{n≤x} τ(n)/n` from the fixed-point table.
    pub fn divisor_harmonic(&self, x: &ExactRational) -> Result<BallReal> {
        let n = self.tables.index(x)?;
        Ok(self.tables.prefix().divisor_harmonic(n, self.bits))
    }

    /// `Σ_{n≤x} log n / n` from the fixed-point table.
    pub fn log_harmonic(&self, x: &ExactRational) -> Result<BallReal> {
        let n = self.tables.index(x)?;
        Ok(self.tables.log_harmonic().value(n, self.bits))
    }
}

/// `lhs ≤ rhs` (or `<` when strict), evaluated at some precision.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub lhs: BallReal,
    pub rhs: BallReal,
    pub strict: bool,
}

impl Comparison {
    pub fn le(lhs: BallReal, rhs: BallReal) -> Self {
        Self {
            lhs,
            rhs,
            strict: false,
        }
    }

    pub fn lt(lhs: BallReal, rhs: BallReal) -> Self {
        Self { lhs, rhs, strict: true }
    }

    pub fn status(&self) -> Status {
        if self.strict {
            check_strict_inequality(&self.lhs, &self.rhs)
        } else {
            check_inequality(&self.lhs, &self.rhs)
        }
    }

    /// `rhs − lhs`; positive when the inequality holds.
    pub fn margin(&self) -> BallReal {
        &self.rhs - &self.lhs
    }
}

/// Evaluation engine: a precision ladder over shared tables.
#[derive(Debug)]
pub struct Engine {
    policy: PrecisionPolicy,
    tables: Arc<Tables>,
    rungs: Vec<OnceLock<Context>>,
    bits: Vec<u32>,
}

impl Engine {
    pub fn new(policy: PrecisionPolicy, tables: Arc<Tables>) -> Self {
        let bits: Vec<u32> = policy.ladder().collect();
        Self {
            policy,
            tables,
            rungs: bits.iter().map(|_| OnceLock::new()).collect(),
            bits,
        }
    }

    pub fn with_defaults() -> Result<Self> {
        Ok(Self::new(
            PrecisionPolicy::default(),
            Arc::new(Tables::new(SieveConfig::default())?),
        ))
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.policy
    }

    pub fn tables(&self) -> &Arc<Tables> {
        &self.tables
    }

    pub fn rung(&self, i: usize) -> &Context {
        self.rungs[i].get_or_init(|| Context::new(self.bits[i], self.tables.clone()))
    }

    /// Context at the base working precision.
    pub fn base(&self) -> &Context {
        self.rung(0)
    }

    /// Runs `f` at increasing precision until the verdict is decisive or the
    /// retry budget is spent.
    pub fn decide<F>(&self, f: F) -> Result<(Comparison, Status)>
    where
        F: Fn(&Context) -> Result<Comparison>,
    {
        let mut last = None;
        for i in 0..self.rungs.len() {
            let c = f(self.rung(i))?;
            let st = c.status();
            if st != Status::Inconclusive {
                return Ok((c, st));
            }
            last = Some(c);
        }
        let c = last.expect("ladder has at least one rung");
        Ok((c, Status::Inconclusive))
    }
}
