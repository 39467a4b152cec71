//! Fixed-point prefix sums for fast certified evaluation of `H(n)`,
//! `S(n) = Σ τ(k)/k` and `L(n) = Σ log k / k` up to the sieve limit.
//!
//! Each entry is a lower bound on `2^SHIFT` times the true value, built from
//! per-term floors, so the error is one-sided and bounded by the number of
//! floors taken (weighted by τ for `S`).

use rug::float::Round;
use rug::Float;

use crate::ball::BallReal;
use crate::sieve::DivisorTable;
use crate::summatory::divisor_sum_u64;

/// Binary scale of the fixed-point entries.
pub const SHIFT: u32 = 120;

#[derive(Clone, Debug)]
pub struct PrefixSums {
    limit: u64,
    harmonic: Vec<u128>,
    divisor_harmonic: Vec<u128>,
}

impl PrefixSums {
    pub fn build(tau: &DivisorTable) -> Self {
        let limit = tau.limit();
        let n = limit as usize;
        let one: u128 = 1 << SHIFT;
        let mut harmonic = Vec::with_capacity(n + 1);
        let mut divisor_harmonic = Vec::with_capacity(n + 1);
        harmonic.push(0u128);
        divisor_harmonic.push(0u128);
        let (mut h, mut s) = (0u128, 0u128);
        for k in 1..=limit {
            let unit = one / k as u128;
            h += unit;
            s += unit * tau.tau(k) as u128;
            harmonic.push(h);
            divisor_harmonic.push(s);
        }
        Self {
            limit,
            harmonic,
            divisor_harmonic,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `H(n)` for `n ≤ limit`.
    pub fn harmonic(&self, n: u64, prec: u32) -> BallReal {
        BallReal::from_fixed(self.harmonic[n as usize], n as u128, SHIFT, prec)
    }

    /// `Σ_{k≤n} τ(k)/k` for `n ≤ limit`.
    pub fn divisor_harmonic(&self, n: u64, prec: u32) -> BallReal {
        let err = divisor_sum_u64(n) as u128;
        BallReal::from_fixed(self.divisor_harmonic[n as usize], err, SHIFT, prec)
    }
}

/// `Σ_{k≤n} log k / k`, fixed point.
#[derive(Clone, Debug)]
pub struct LogHarmonic {
    values: Vec<u128>,
}

impl LogHarmonic {
    pub fn build(limit: u64) -> Self {
        let mut values = Vec::with_capacity(limit as usize + 1);
        values.push(0u128);
        let mut acc = 0u128;
        let wp = SHIFT + 72;
        for k in 1..=limit {
            // floor(2^SHIFT · log k / k) from a value rounded down at wp bits:
            // the computed term is below the true one by less than 2 units.
            let mut l = Float::with_val(wp, k);
            l.ln_round(Round::Down);
            let t = Float::with_val_round(wp, (l << SHIFT) / k as u32, Round::Down).0;
            let term = t.to_integer_round(Round::Down).map(|(i, _)| i).unwrap();
            acc += term.to_u128().expect("log term fits");
            values.push(acc);
        }
        Self { values }
    }

    pub fn limit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn value(&self, n: u64, prec: u32) -> BallReal {
        BallReal::from_fixed(self.values[n as usize], 2 * n as u128, SHIFT, prec)
    }
}
