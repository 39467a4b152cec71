//! Exact summatory functions: `D(x) = Σ_{n≤x} τ(n)`, the harmonic sum `H(x)`,
//! `S(x) = Σ_{n≤x} τ(n)/n`, and the Mertens sums `M(x)`, `m(x)`.
//!
//! Everything here is exact. Long sums of unit fractions are accumulated over
//! a common denominator `lcm(1..=n)`, which turns each rational addition into
//! an integer multiply-add.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, ExactRational};
use crate::sieve::{DivisorTable, MobiusTable};

/// `D(n)` by the hyperbola method: `2 Σ_{k≤√n} ⌊n/k⌋ − ⌊√n⌋²`.
pub fn divisor_sum_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let y = n.sqrt();
    let s: u64 = if n <= u32::MAX as u64 {
        let n32 = n as u32;
        (1..=y as u32).map(|k| (n32 / k) as u64).sum()
    } else {
        (1..=y).map(|k| n / k).sum()
    };
    2 * s - y * y
}

/// `D(x) = Σ_{n≤x} τ(n)` for real `x ≥ 1`, in `O(√x)` divisions.
pub fn divisor_sum(x: &ExactRational) -> Result<BigInt> {
    require_at_least_one(x)?;
    let n = rational::floor(x);
    if let Some(n) = n.to_u64() {
        if n < (1u64 << 62) {
            return Ok(BigInt::from(divisor_sum_u64(n)));
        }
    }
    Ok(divisor_sum_bigint(&n))
}

fn divisor_sum_bigint(n: &BigInt) -> BigInt {
    let y = n.sqrt();
    let mut s = BigInt::zero();
    let mut k = BigInt::one();
    while k <= y {
        s += n / &k;
        k += 1;
    }
    2 * s - &y * &y
}

/// `H(x) = Σ_{n≤x} 1/n`, exact.
pub fn harmonic(x: &ExactRational) -> Result<ExactRational> {
    require_at_least_one(x)?;
    let n = floor_limited(x)?;
    Ok(harmonic_int(n))
}

pub(crate) fn harmonic_int(n: u64) -> ExactRational {
    if n == 0 {
        return ExactRational::zero();
    }
    UnitFractionBasis::new(n).sum(|_| BigInt::one())
}

/// `[H(0), H(1), …, H(n)]`.
pub fn harmonic_prefix(n: u64) -> Vec<ExactRational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = ExactRational::zero();
    out.push(acc.clone());
    for k in 1..=n {
        acc += rational::ratio(1, k as i64);
        out.push(acc.clone());
    }
    out
}

/// `S(x) = Σ_{n≤x} τ(n)/n` evaluated by the hyperbola form
/// `2 Σ_{k≤√x} H(x/k)/k − H(√x)²`.
pub fn divisor_harmonic_sum(x: &ExactRational) -> Result<ExactRational> {
    require_at_least_one(x)?;
    let n = floor_limited(x)?;
    let sweep = HarmonicSweep::run(&[n], None);
    Ok(sweep.hyperbola_value(0))
}

/// `S(x)` summed term by term from a divisor table.
pub fn divisor_harmonic_sum_direct(x: &ExactRational, tau: &DivisorTable) -> Result<ExactRational> {
    require_at_least_one(x)?;
    let n = floor_within(x, tau.limit())?;
    let basis = UnitFractionBasis::new(n);
    Ok(basis.sum(|k| BigInt::from(tau.tau(k))))
}

/// Every `n ≤ tau.limit()` at which the hyperbola count `D(n)` differs from
/// the sieved prefix sum; empty when they all agree.
pub fn divisor_sum_mismatches(tau: &DivisorTable) -> Vec<u64> {
    (1..=tau.limit())
        .filter(|&n| divisor_sum_u64(n) != tau.prefix_sum(n))
        .collect()
}

/// For each `n` in `points`, checks exactly that the direct sum
/// `Σ_{k≤n} τ(k)/k` equals the hyperbola form. One sweep serves all points.
pub fn hyperbola_agreement(points: &[u64], tau: &DivisorTable) -> Result<Vec<bool>> {
    if let Some(&bad) = points.iter().find(|&&n| n == 0 || n > tau.limit()) {
        return Err(Error::SieveLimit {
            value: bad.to_string(),
            limit: tau.limit(),
        });
    }
    let sweep = HarmonicSweep::run(points, Some(tau));
    Ok((0..points.len()).map(|i| sweep.agrees(i)).collect())
}

/// `M(x) = Σ_{n≤x} μ(n)` and `m(x) = Σ_{n≤x} μ(n)/n`, exact.
pub fn mertens(x: &ExactRational, mobius: &MobiusTable) -> Result<(BigInt, ExactRational)> {
    require_at_least_one(x)?;
    let n = floor_within(x, mobius.limit())?;
    let big_m: i64 = mobius.values()[1..=n as usize].iter().map(|&v| v as i64).sum();
    let small_m = rational::sum_exact(
        (1..=n)
            .filter(|&k| mobius.mu(k) != 0)
            .map(|k| rational::ratio(mobius.mu(k) as i64, k as i64)),
    );
    Ok((BigInt::from(big_m), small_m))
}

pub fn mertens_log(x: &ExactRational, mobius: &MobiusTable) -> Result<ExactRational> {
    mertens(x, mobius).map(|(_, m)| m)
}

/// `lcm(1..=n)`.
pub fn lcm_upto(n: u64) -> BigUint {
    let mut factors: Vec<BigUint> = Vec::new();
    let mut composite = vec![false; n as usize + 1];
    for p in 2..=n {
        if composite[p as usize] {
            continue;
        }
        let mut q = p * p;
        while q <= n {
            composite[q as usize] = true;
            q += p;
        }
        let mut pk = p;
        while pk <= n / p {
            pk *= p;
        }
        factors.push(BigUint::from(pk));
    }
    product_tree(factors)
}

fn product_tree(mut v: Vec<BigUint>) -> BigUint {
    if v.is_empty() {
        return BigUint::one();
    }
    while v.len() > 1 {
        v = v
            .chunks(2)
            .map(|c| if c.len() == 2 { &c[0] * &c[1] } else { c[0].clone() })
            .collect();
    }
    v.pop().unwrap()
}

/// Sums of the form `Σ_{k≤n} c_k / k` over the fixed denominator `lcm(1..=n)`.
#[derive(Clone, Debug)]
pub struct UnitFractionBasis {
    lcm: BigUint,
    cofactors: Vec<BigUint>,
}

impl UnitFractionBasis {
    pub fn new(n: u64) -> Self {
        let lcm = lcm_upto(n);
        let mut cofactors = Vec::with_capacity(n as usize + 1);
        cofactors.push(BigUint::zero());
        for k in 1..=n {
            cofactors.push(&lcm / BigUint::from(k));
        }
        Self { lcm, cofactors }
    }

    pub fn len(&self) -> u64 {
        self.cofactors.len() as u64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lcm(&self) -> &BigUint {
        &self.lcm
    }

    /// `lcm / k`.
    pub fn cofactor(&self, k: u64) -> &BigUint {
        &self.cofactors[k as usize]
    }

    /// Numerator of `Σ_{k≤upto} c_k/k` over `lcm`.
    pub fn numerator<F>(&self, upto: u64, mut coeff: F) -> BigInt
    where
        F: FnMut(u64) -> BigInt,
    {
        let mut acc = BigInt::zero();
        for k in 1..=upto {
            let c = coeff(k);
            if !c.is_zero() {
                acc += c * BigInt::from(self.cofactors[k as usize].clone());
            }
        }
        acc
    }

    /// `Σ_{k≤len} c_k/k` reduced to lowest terms.
    pub fn sum<F>(&self, coeff: F) -> ExactRational
    where
        F: FnMut(u64) -> BigInt,
    {
        self.sum_upto(self.len(), coeff)
    }

    pub fn sum_upto<F>(&self, upto: u64, coeff: F) -> ExactRational
    where
        F: FnMut(u64) -> BigInt,
    {
        let num = self.numerator(upto, coeff);
        ExactRational::new(num, BigInt::from(self.lcm.clone()))
    }
}

/// One pass over `1..=max(points)` that produces, for every point `n`, the
/// numerators over `L = lcm(1..=max)` of the direct sum `Σ τ(k)/k` and of the
/// hyperbola sum `Σ_{k≤√n} H(⌊n/k⌋)/k`.
struct HarmonicSweep {
    lcm: BigUint,
    points: Vec<u64>,
    direct: Vec<Option<BigUint>>,
    partial: Vec<BigUint>,
}

impl HarmonicSweep {
    fn run(points: &[u64], tau: Option<&DivisorTable>) -> Self {
        let max = points.iter().copied().max().unwrap_or(1);
        let lcm = lcm_upto(max);
        // (m, point index, k): add H(m)·L / k to the point's partial sum.
        let mut queries: Vec<(u64, u32, u64)> = Vec::new();
        for (i, &n) in points.iter().enumerate() {
            let y = n.sqrt();
            for k in 1..=y {
                queries.push((n / k, i as u32, k));
            }
        }
        queries.sort_unstable();
        let mut by_end: Vec<(u64, u32)> = points.iter().enumerate().map(|(i, &n)| (n, i as u32)).collect();
        by_end.sort_unstable();

        let mut partial = vec![BigUint::zero(); points.len()];
        let mut direct = vec![None; points.len()];
        let mut h_num = BigUint::zero();
        let mut s_num = BigUint::zero();
        let (mut qi, mut ei) = (0usize, 0usize);
        for j in 1..=max {
            let cof = &lcm / BigUint::from(j);
            if let Some(tau) = tau {
                s_num += &cof * BigUint::from(tau.tau(j));
            }
            h_num += cof;
            while qi < queries.len() && queries[qi].0 == j {
                let (_, i, k) = queries[qi];
                // Exact: every i·k ≤ n divides L.
                partial[i as usize] += &h_num / BigUint::from(k);
                qi += 1;
            }
            while ei < by_end.len() && by_end[ei].0 == j {
                if tau.is_some() {
                    direct[by_end[ei].1 as usize] = Some(s_num.clone());
                }
                ei += 1;
            }
        }
        Self {
            lcm,
            points: points.to_vec(),
            direct,
            partial,
        }
    }

    fn hyperbola_value(&self, i: usize) -> ExactRational {
        let y = self.points[i].sqrt();
        let h = harmonic_int(y);
        let twice = ExactRational::new(BigInt::from(&self.partial[i] * 2u32), BigInt::from(self.lcm.clone()));
        twice - &h * &h
    }

    /// `direct/L == 2·partial/L − H(y)²`, compared by cross-multiplication.
    fn agrees(&self, i: usize) -> bool {
        let direct = match &self.direct[i] {
            Some(d) => BigInt::from(d.clone()),
            None => return false,
        };
        let y = self.points[i].sqrt();
        let h = harmonic_int(y);
        let (hn, hd) = (h.numer(), h.denom());
        let hd2 = hd * hd;
        let lhs = &direct * &hd2;
        let rhs = BigInt::from(&self.partial[i] * 2u32) * &hd2 - hn * hn * BigInt::from(self.lcm.clone());
        lhs == rhs
    }
}

fn require_at_least_one(x: &ExactRational) -> Result<()> {
    if *x < ExactRational::one() {
        return Err(crate::error::domain(format!(
            "argument {} must be at least 1",
            rational::to_fraction_string(x)
        )));
    }
    Ok(())
}

fn floor_limited(x: &ExactRational) -> Result<u64> {
    rational::floor_u64(x)
        .filter(|&n| n <= u32::MAX as u64)
        .ok_or_else(|| crate::error::domain("argument too large for exact summation"))
}

fn floor_within(x: &ExactRational, limit: u64) -> Result<u64> {
    match rational::floor_u64(x) {
        Some(n) if n <= limit => Ok(n),
        _ => Err(Error::SieveLimit {
            value: rational::to_fraction_string(x),
            limit,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::sieve::{sieve_mobius, sieve_tau, SieveConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn divisor_sum_examples() {
        assert_eq!(divisor_sum(&int(1)).unwrap(), BigInt::from(1));
        assert_eq!(divisor_sum(&int(4)).unwrap(), BigInt::from(8));
        assert_eq!(divisor_sum(&ratio(21, 2)).unwrap(), BigInt::from(27));
        assert!(divisor_sum(&ratio(1, 2)).is_err());
    }

    #[test]
    fn divisor_sum_big_path_matches_u64_path() {
        for m in [1u64, 2, 99, 10_000, 10_000_019] {
            assert_eq!(divisor_sum_bigint(&BigInt::from(m)), BigInt::from(divisor_sum_u64(m)));
        }
    }

    #[test]
    fn divisor_sum_matches_sieve_prefix() {
        let t = sieve_tau(20_000, &SieveConfig::default()).unwrap();
        let mut prefix = 0u64;
        for n in 1..=20_000u64 {
            prefix += t.tau(n) as u64;
            assert_eq!(divisor_sum_u64(n), prefix, "n = {n}");
        }
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(&int(1)).unwrap(), int(1));
        assert_eq!(harmonic(&int(4)).unwrap(), ratio(25, 12));
        assert_eq!(harmonic(&ratio(29, 10)).unwrap(), ratio(3, 2));
        let prefix = harmonic_prefix(30);
        for n in 0..=30u64 {
            let direct = (1..=n).fold(int(0), |acc, k| acc + ratio(1, k as i64));
            assert_eq!(prefix[n as usize], direct);
        }
    }

    #[test]
    fn divisor_harmonic_sum_examples() {
        let t = sieve_tau(100, &SieveConfig::default()).unwrap();
        assert_eq!(divisor_harmonic_sum(&int(1)).unwrap(), int(1));
        assert_eq!(divisor_harmonic_sum(&int(4)).unwrap(), ratio(41, 12));
        assert_eq!(divisor_harmonic_sum(&int(2)).unwrap(), int(2));
        assert_eq!(divisor_harmonic_sum_direct(&int(4), &t).unwrap(), ratio(41, 12));
        assert_eq!(
            divisor_harmonic_sum(&ratio(11, 2)).unwrap(),
            divisor_harmonic_sum(&int(5)).unwrap()
        );
        // S(5) = 229/60 is the slope of Q_5.
        assert_eq!(divisor_harmonic_sum(&int(5)).unwrap(), ratio(229, 60));
    }

    #[test]
    fn hyperbola_agrees_with_direct_sum_small() {
        let t = sieve_tau(3000, &SieveConfig::default()).unwrap();
        let pts: Vec<u64> = (1..=3000).collect();
        let ok = hyperbola_agreement(&pts, &t).unwrap();
        assert!(ok.iter().all(|&b| b));
        for n in [1u64, 2, 3, 17, 100, 999] {
            let x = int(n as i64);
            assert_eq!(
                divisor_harmonic_sum(&x).unwrap(),
                divisor_harmonic_sum_direct(&x, &t).unwrap()
            );
        }
    }

    #[test]
    fn hyperbola_agreement_detects_a_wrong_table() {
        let mut t = sieve_tau(50, &SieveConfig::default()).unwrap();
        // A table that lies about τ(30) must break the identity from 30 on.
        let tampered = {
            let mut v = t.values().to_vec();
            v[30] += 1;
            v
        };
        t = DivisorTable::from_values_for_test(tampered);
        let ok = hyperbola_agreement(&[29, 30, 50], &t).unwrap();
        assert_eq!(ok, vec![true, false, false]);
    }

    #[test]
    fn hyperbola_agrees_on_random_rationals() {
        // Floors of random rationals in [1, 10^4]; the full-scale run to
        // 10^5 lives in the integration tests.
        let t = sieve_tau(10_000, &SieveConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<u64> = (0..200)
            .map(|_| {
                let d = rng.gen_range(1..=100i64);
                let n = rng.gen_range(d..=10_000 * d);
                rational::floor_u64(&ratio(n, d)).unwrap()
            })
            .collect();
        assert!(hyperbola_agreement(&pts, &t).unwrap().iter().all(|&b| b));
    }

    #[test]
    fn mertens_examples() {
        let m = sieve_mobius(100, &SieveConfig::default()).unwrap();
        assert_eq!(mertens(&int(1), &m).unwrap(), (BigInt::from(1), int(1)));
        assert_eq!(mertens(&int(2), &m).unwrap(), (BigInt::from(0), ratio(1, 2)));
        let (big, small) = mertens(&int(10), &m).unwrap();
        assert_eq!(big, BigInt::from(-1));
        // 1 − 1/2 − 1/3 − 1/5 + 1/6 − 1/7 + 1/10
        let expected = int(1) - ratio(1, 2) - ratio(1, 3) - ratio(1, 5) + ratio(1, 6) - ratio(1, 7) + ratio(1, 10);
        assert_eq!(small, expected);
        assert_eq!(small, ratio(19, 210));
        assert!(matches!(mertens(&int(101), &m), Err(Error::SieveLimit { .. })));
    }

    #[test]
    fn lcm_upto_small() {
        assert_eq!(lcm_upto(1), BigUint::one());
        assert_eq!(lcm_upto(10), BigUint::from(2520u32));
        let basis = UnitFractionBasis::new(6);
        assert_eq!(basis.sum(|_| BigInt::one()), ratio(49, 20));
    }
}
