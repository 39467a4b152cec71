//! Divisor-count and Möbius sieves.

use crate::error::{Error, Result};

/// Default sieve limit used by scans that need tabulated arithmetic functions.
pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000;
/// Default ceiling on table size, in entries.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Runtime sizing for sieved tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    pub limit: u64,
    pub budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            limit: DEFAULT_SIEVE_LIMIT,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SieveConfig {
    pub fn with_limit(limit: u64) -> Self {
        Self {
            limit,
            ..Self::default()
        }
    }

    fn admit(&self, n: u64) -> Result<usize> {
        if n > self.budget {
            return Err(Error::Capacity {
                requested: n,
                budget: self.budget,
            });
        }
        usize::try_from(n).map_err(|_| Error::Capacity {
            requested: n,
            budget: self.budget,
        })
    }
}

/// `τ(n)` for `1 ≤ n ≤ limit`.
#[derive(Clone, Debug)]
pub struct DivisorTable {
    limit: u64,
    values: Vec<u32>,
    cumulative: Vec<u64>,
}

impl DivisorTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `τ(n)`; panics outside `1..=limit`.
    pub fn tau(&self, n: u64) -> u32 {
        assert!(n >= 1 && n <= self.limit, "τ({n}) outside sieve range");
        self.values[n as usize]
    }

    /// `Σ_{k≤n} τ(k)`; panics above the limit.
    pub fn prefix_sum(&self, n: u64) -> u64 {
        self.cumulative[n as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    fn from_values(values: Vec<u32>) -> Self {
        let mut cumulative = Vec::with_capacity(values.len());
        let mut acc = 0u64;
        for (i, &t) in values.iter().enumerate() {
            if i > 0 {
                acc += t as u64;
            }
            cumulative.push(acc);
        }
        Self {
            limit: values.len() as u64 - 1,
            values,
            cumulative,
        }
    }

    #[cfg(test)]
    pub(crate) fn from_values_for_test(values: Vec<u32>) -> Self {
        Self::from_values(values)
    }
}

/// Sieves `τ(n)` for all `n ≤ limit` by walking multiples of every `d`.
pub fn sieve_tau(limit: u64, config: &SieveConfig) -> Result<DivisorTable> {
    if limit == 0 {
        return Err(crate::error::domain("sieve limit must be at least 1"));
    }
    let n = config.admit(limit)?;
    let mut values = vec![0u32; n + 1];
    for d in 1..=n {
        let mut m = d;
        while m <= n {
            values[m] += 1;
            m += d;
        }
    }
    Ok(DivisorTable::from_values(values))
}

/// `μ(n)` for `1 ≤ n ≤ limit`.
#[derive(Clone, Debug)]
pub struct MobiusTable {
    limit: u64,
    values: Vec<i8>,
}

impl MobiusTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn mu(&self, n: u64) -> i8 {
        assert!(n >= 1 && n <= self.limit, "μ({n}) outside sieve range");
        self.values[n as usize]
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }
}

/// Linear sieve for `μ`.
pub fn sieve_mobius(limit: u64, config: &SieveConfig) -> Result<MobiusTable> {
    if limit == 0 {
        return Err(crate::error::domain("sieve limit must be at least 1"));
    }
    let n = config.admit(limit)?;
    let mut mu = vec![0i8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    mu[1] = 1;
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(MobiusTable { limit, values: mu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tau_bruteforce(n: u64) -> u32 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).count() as u32
    }

    fn mu_bruteforce(mut n: u64) -> i8 {
        let mut sign = 1i8;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if n > 1 {
            sign = -sign;
        }
        sign
    }

    #[test]
    fn tau_examples() {
        let cfg = SieveConfig::default();
        assert_eq!(sieve_tau(1, &cfg).unwrap().tau(1), 1);
        assert_eq!(sieve_tau(12, &cfg).unwrap().tau(12), 6);
        assert_eq!(sieve_tau(10, &cfg).unwrap().prefix_sum(10), 27);
    }

    #[test]
    fn tau_matches_enumeration() {
        let t = sieve_tau(2000, &SieveConfig::default()).unwrap();
        for n in 1..=2000 {
            assert_eq!(t.tau(n), tau_bruteforce(n), "n = {n}");
        }
    }

    #[test]
    fn tau_is_multiplicative_on_random_coprime_pairs() {
        let limit = 1_000_000u64;
        let t = sieve_tau(limit, &SieveConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 10_000 {
            let a = rng.gen_range(1..=1000u64);
            let b = rng.gen_range(1..=limit / a);
            if a.gcd(&b) != 1 {
                continue;
            }
            assert_eq!(t.tau(a * b), t.tau(a) * t.tau(b), "a={a} b={b}");
            checked += 1;
        }
    }

    #[test]
    fn tau_of_primes_is_two() {
        let t = sieve_tau(10_000, &SieveConfig::default()).unwrap();
        let m = sieve_mobius(10_000, &SieveConfig::default()).unwrap();
        for n in 2..=10_000 {
            // Squarefree with one prime factor ⇔ prime.
            if m.mu(n) == -1 && t.tau(n) == 2 {
                assert_eq!(mu_bruteforce(n), -1);
            }
            if t.tau(n) == 2 {
                assert_eq!(m.mu(n), -1, "{n} is prime");
            }
        }
    }

    #[test]
    fn mobius_matches_factorisation_and_divisor_sum() {
        let limit = 100_000u64;
        let m = sieve_mobius(limit, &SieveConfig::default()).unwrap();
        assert_eq!(m.mu(1), 1);
        for n in 1..=3000 {
            assert_eq!(m.mu(n), mu_bruteforce(n), "n = {n}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=limit);
            let mut s = 0i64;
            let mut d = 1;
            while d * d <= n {
                if n % d == 0 {
                    s += m.mu(d) as i64;
                    if d * d != n {
                        s += m.mu(n / d) as i64;
                    }
                }
                d += 1;
            }
            assert_eq!(s, (n == 1) as i64, "n = {n}");
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let cfg = SieveConfig { limit: 10, budget: 100 };
        assert!(matches!(sieve_tau(101, &cfg), Err(Error::Capacity { .. })));
        assert!(matches!(sieve_mobius(1000, &cfg), Err(Error::Capacity { .. })));
        assert!(sieve_tau(100, &cfg).is_ok());
    }
}
