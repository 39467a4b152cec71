//! Claim identifiers and the dispatch from a claim to its range checker.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::ball::{BallReal, PrecisionPolicy, Status};
use crate::context::{Comparison, Engine, Tables};
use crate::error::{Error, Result};
use crate::rational::{self, int};
use crate::report::{RangeSpec, Report, SampleMode, VerificationRecord, DEFAULT_SEED};
use crate::sieve::{SieveConfig, DEFAULT_BUDGET, DEFAULT_SIEVE_LIMIT};
use crate::{chowla_walum as cw, divisor_theorem as dt, expsums, mertens_compare as mc, remainders};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClaimId {
    R1Bound,
    R2Bound,
    R2MinusR1,
    Lemma5,
    Lemma6,
    Lemma4,
    Lemma14,
    Prop7,
    Cor8,
    KusminLandau,
    SecondDeriv,
    Vdc,
    Theorem1General,
    Theorem1Large,
    Corollary2,
    TransferBbr,
    MertensSign,
    MertensRatio,
    DeltaLog2,
    /// Emits a record with the given status at every sample; used to
    /// exercise exit codes.
    Synthetic(Status),
}

const NAMES: [(&str, ClaimId); 19] = [
    ("r1-bound", ClaimId::R1Bound),
    ("r2-bound", ClaimId::R2Bound),
    ("r2-minus-r1", ClaimId::R2MinusR1),
    ("lemma5", ClaimId::Lemma5),
    ("lemma6", ClaimId::Lemma6),
    ("lemma4", ClaimId::Lemma4),
    ("lemma14", ClaimId::Lemma14),
    ("prop7", ClaimId::Prop7),
    ("cor8", ClaimId::Cor8),
    ("kusmin-landau", ClaimId::KusminLandau),
    ("second-deriv", ClaimId::SecondDeriv),
    ("vdc", ClaimId::Vdc),
    ("theorem1-general", ClaimId::Theorem1General),
    ("theorem1-large", ClaimId::Theorem1Large),
    ("corollary2", ClaimId::Corollary2),
    ("transfer-bbr", ClaimId::TransferBbr),
    ("mertens-sign", ClaimId::MertensSign),
    ("mertens-ratio", ClaimId::MertensRatio),
    ("delta-log-2", ClaimId::DeltaLog2),
];

const SYNTHETIC: [(&str, Status); 3] = [
    ("synthetic-pass", Status::Pass),
    ("synthetic-fail", Status::Fail),
    ("synthetic-inconclusive", Status::Inconclusive),
];

impl ClaimId {
    /// Public claims, in a stable order.
    pub fn all() -> impl Iterator<Item = ClaimId> {
        NAMES.iter().map(|(_, c)| *c)
    }

    pub fn as_str(&self) -> &'static str {
        if let ClaimId::Synthetic(s) = self {
            return SYNTHETIC.iter().find(|(_, t)| t == s).map(|(n, _)| *n).unwrap();
        }
        NAMES.iter().find(|(_, c)| c == self).map(|(n, _)| *n).unwrap()
    }

    /// Whether the checker reads the divisor or Möbius tables at `⌊x⌋`.
    fn needs_tables(&self) -> bool {
        !matches!(
            self,
            ClaimId::KusminLandau | ClaimId::SecondDeriv | ClaimId::Vdc | ClaimId::TransferBbr | ClaimId::Synthetic(_)
        )
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .map(|(n, c)| (*n, *c))
            .chain(SYNTHETIC.iter().map(|(n, st)| (*n, ClaimId::Synthetic(*st))))
            .find(|(n, _)| *n == s)
            .map(|(_, c)| c)
            .ok_or_else(|| Error::UnknownClaim(s.to_string()))
    }
}

/// Sieve size for a run: at least the default, and `⌈x_max⌉` when the claim
/// reads tables there.
pub fn table_limit(claim: ClaimId, range: &RangeSpec) -> Result<u64> {
    if !claim.needs_tables() {
        return Ok(DEFAULT_SIEVE_LIMIT);
    }
    let top = rational::floor_u64(&range.x_max).unwrap_or(u64::MAX).saturating_add(1);
    if top > DEFAULT_BUDGET {
        return Err(Error::Capacity {
            requested: top,
            budget: DEFAULT_BUDGET,
        });
    }
    Ok(top.max(DEFAULT_SIEVE_LIMIT))
}

/// Builds an engine sized for the run and dispatches.
pub fn run_claim(claim: ClaimId, range: &RangeSpec, policy: PrecisionPolicy) -> Result<Report> {
    range.validate()?;
    let tables = Tables::new(SieveConfig::with_limit(table_limit(claim, range)?))?;
    let engine = Engine::new(policy, Arc::new(tables));
    run_claim_with(&engine, claim, range)
}

fn seed_of(range: &RangeSpec) -> u64 {
    match range.mode {
        SampleMode::RandomRational { seed, .. } | SampleMode::Standard { seed, .. } => seed,
        _ => DEFAULT_SEED,
    }
}

fn integer_bound(x: &crate::ExactRational) -> Result<u64> {
    rational::floor(x)
        .to_u64()
        .ok_or_else(|| Error::InvalidRange("bound does not fit in 64 bits".into()))
}

fn only(mut report: Report, claim_id: &str) -> Report {
    report.records.retain(|r| r.claim_id == claim_id);
    report.claim_id = claim_id.to_string();
    report
}

/// Dispatch against an existing engine; its tables must cover the range.
pub fn run_claim_with(engine: &Engine, claim: ClaimId, range: &RangeSpec) -> Result<Report> {
    range.validate()?;
    let mut report = match claim {
        ClaimId::R1Bound => remainders::check_harmonic_remainder(engine, range)?,
        ClaimId::R2Bound => only(
            remainders::check_log_harmonic_remainders(engine, range)?,
            remainders::R2_BOUND,
        ),
        ClaimId::R2MinusR1 => only(
            remainders::check_log_harmonic_remainders(engine, range)?,
            remainders::R2_MINUS_R1,
        ),
        ClaimId::Lemma5 => dt::check_divisor_rearrangement_range(engine, range)?,
        ClaimId::Lemma6 => dt::check_smoothed_identity_range(engine, range, dt::SMOOTHED_EXACT_LIMIT)?,
        ClaimId::Lemma4 => dt::check_weighted_remainder(engine, range)?,
        ClaimId::Lemma14 => dt::check_weighted_remainder_large(engine, range)?,
        ClaimId::Prop7 => cw::check_g_family(engine, range, &cw::GParams::sample_family())?,
        ClaimId::Cor8 => cw::check_g212(engine, range)?,
        ClaimId::KusminLandau => expsums::check_range(engine, expsums::KUSMIN_LANDAU, range, seed_of(range))?,
        ClaimId::SecondDeriv => expsums::check_range(engine, expsums::SECOND_DERIV, range, seed_of(range))?,
        ClaimId::Vdc => expsums::check_range(engine, expsums::VDC, range, seed_of(range))?,
        ClaimId::Theorem1General => dt::verify_r_bound(engine, range, dt::Regime::General)?,
        ClaimId::Theorem1Large => dt::verify_r_bound(engine, range, dt::Regime::Large(dt::LargeConstant::Safe))?,
        ClaimId::Corollary2 => dt::verify_gap_positivity(engine, range)?,
        ClaimId::TransferBbr => dt::check_transfer(engine, range)?,
        ClaimId::MertensSign => mc::check_sign(engine, integer_bound(&range.x_max)?)?,
        ClaimId::MertensRatio => {
            let lo = rational::floor(&range.x_min).to_u64().unwrap_or(u64::MAX);
            let lo = if int(lo as i64) == range.x_min { lo } else { lo + 1 };
            mc::ratio_check(engine, lo, integer_bound(&range.x_max)?)?
        }
        ClaimId::DeltaLog2 => dt::check_delta_log_2(engine, range)?,
        ClaimId::Synthetic(status) => synthetic(engine, range, status)?,
    };
    report.sort();
    Ok(report)
}

fn synthetic(engine: &Engine, range: &RangeSpec, status: Status) -> Result<Report> {
    let id = ClaimId::Synthetic(status).as_str();
    let prec = engine.base().bits();
    let (lhs, rhs) = match status {
        Status::Pass => (BallReal::zero(prec), BallReal::one(prec)),
        Status::Fail => (BallReal::one(prec), BallReal::zero(prec)),
        Status::Inconclusive => (
            BallReal::zero(prec).hull(&BallReal::one(prec)),
            BallReal::ratio(1, 2, prec),
        ),
    };
    let mut report = Report::new(id);
    for x in range.points()? {
        let c = Comparison::le(lhs.clone(), rhs.clone());
        debug_assert_eq!(c.status(), status);
        report.push(&x, VerificationRecord::from_comparison(id, &x, &c, status));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in ClaimId::all() {
            assert_eq!(c.as_str().parse::<ClaimId>().unwrap(), c);
        }
        assert_eq!(ClaimId::all().count(), 19);
        assert_eq!(
            "synthetic-fail".parse::<ClaimId>().unwrap(),
            ClaimId::Synthetic(Status::Fail)
        );
        assert!(matches!("lemma99".parse::<ClaimId>(), Err(Error::UnknownClaim(_))));
    }

    #[test]
    fn domain_errors() {
        let r = RangeSpec::integers(100, 400).unwrap();
        assert!(run_claim(ClaimId::Cor8, &r, PrecisionPolicy::default()).is_err());
        assert!(run_claim(ClaimId::Theorem1Large, &r, PrecisionPolicy::default()).is_err());
    }

    #[test]
    fn synthetic_exit_codes() {
        let r = RangeSpec::integers(1, 3).unwrap();
        for (st, code) in [(Status::Pass, 0), (Status::Fail, 1), (Status::Inconclusive, 2)] {
            let rep = run_claim(ClaimId::Synthetic(st), &r, PrecisionPolicy::default()).unwrap();
            assert_eq!(rep.records.len(), 3);
            assert_eq!(rep.exit_code(), code);
        }
    }

    #[test]
    fn table_sizes() {
        let r = RangeSpec::integers(1, 3_000_000).unwrap();
        assert_eq!(table_limit(ClaimId::Lemma5, &r).unwrap(), 3_000_001);
        assert_eq!(table_limit(ClaimId::Vdc, &r).unwrap(), DEFAULT_SIEVE_LIMIT);
        let huge = RangeSpec::integers(1, 1_000_000_000).unwrap();
        assert!(table_limit(ClaimId::Lemma5, &huge).is_err());
    }
}
