//! Canonical prime-power factorizations.
//!
//! Two routes produce the same [`Factorization`]: a smallest-prime-factor
//! table for bulk work over a range, and trial division followed by
//! Miller-Rabin and Pollard-Brent rho for isolated 64-bit inputs.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper limit for a sieve table, overridable through `NT_SIEVE_CAP`.
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

/// Seed for the randomized splitting step when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_0f_c0ffee;

/// Sieve cap in effect: `NT_SIEVE_CAP` when set and parseable, else the default.
pub fn sieve_cap() -> u64 {
    std::env::var("NT_SIEVE_CAP")
        .ok()
        .and_then(|s| s.trim().replace('_', "").parse().ok())
        .unwrap_or(DEFAULT_SIEVE_CAP)
}

/// A positive integer together with its prime factors in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFactorization")]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

#[derive(Deserialize)]
struct RawFactorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl TryFrom<RawFactorization> for Factorization {
    type Error = Error;

    fn try_from(raw: RawFactorization) -> Result<Self> {
        let f = Factorization::from_factors(raw.factors)?;
        if f.n != raw.n {
            return Err(Error::Domain(format!(
                "factor product {} does not match n = {}",
                f.n, raw.n
            )));
        }
        Ok(f)
    }
}

impl Factorization {
    /// The factorization of 1.
    pub fn one() -> Self {
        Self {
            n: 1,
            factors: Vec::new(),
        }
    }

    /// Builds a factorization from explicit `(prime, exponent)` pairs.
    ///
    /// Primes must be strictly increasing and actually prime, exponents at
    /// least one, and the product must fit in 64 bits.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut n: u64 = 1;
        let mut prev = 1;
        for &(p, k) in &factors {
            if p <= prev {
                return Err(Error::Domain(format!(
                    "primes must be strictly increasing, got {p} after {prev}"
                )));
            }
            if k == 0 {
                return Err(Error::Domain(format!("exponent of {p} is zero")));
            }
            if !is_prime(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
            let pk = p
                .checked_pow(k)
                .ok_or_else(|| Error::Domain(format!("{p}^{k} exceeds 64 bits")))?;
            n = n
                .checked_mul(pk)
                .ok_or_else(|| Error::Domain("product exceeds 64 bits".into()))?;
            prev = p;
        }
        Ok(Self { n, factors })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, primes ascending.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Exponent of `p` in `n`, zero when `p` does not divide `n`.
    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }

    /// True for n ≥ 2 that is not prime.
    pub fn is_composite(&self) -> bool {
        self.n >= 2 && !self.is_prime()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, k)| k == 1)
    }

    /// Every exponent is at least two. False for n = 1.
    pub fn is_powerful(&self) -> bool {
        !self.factors.is_empty() && self.factors.iter().all(|&(_, k)| k >= 2)
    }

    /// `Some((p, k))` when n = p^k with k ≥ 1.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [pk] => Some(*pk),
            _ => None,
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, k)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if k == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{k}")?;
            }
        }
        Ok(())
    }
}

/// Smallest-prime-factor table for every integer in `[2, limit]`.
///
/// Immutable once built; share it across threads by reference.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

/// Builds a sieve up to `limit`, bounded by [`sieve_cap`].
pub fn build_spf_sieve(limit: u64) -> Result<SieveTable> {
    build_spf_sieve_capped(limit, sieve_cap())
}

/// Builds a sieve up to `limit`, bounded by an explicit `cap`.
pub fn build_spf_sieve_capped(limit: u64, cap: u64) -> Result<SieveTable> {
    let max = cap.min(u32::MAX as u64);
    if limit < 2 || limit > max {
        return Err(Error::Bounds {
            what: "sieve limit",
            value: limit,
            min: 2,
            max,
        });
    }
    let len = limit as usize + 1;
    let mut spf = vec![0u32; len];
    let mut primes = Vec::new();
    // Linear sieve: each composite is written exactly once, by its smallest prime.
    for i in 2..len {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            if p > si {
                break;
            }
            let m = i * p as usize;
            if m >= len {
                break;
            }
            spf[m] = p;
        }
    }
    Ok(SieveTable { limit, spf, primes })
}

impl SieveTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `i`, for `2 ≤ i ≤ limit`.
    pub fn spf(&self, i: u64) -> Option<u64> {
        if i < 2 || i > self.limit {
            return None;
        }
        Some(self.spf[i as usize] as u64)
    }

    pub fn is_prime(&self, i: u64) -> bool {
        self.spf(i) == Some(i)
    }

    /// All primes up to `limit`, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().map(|&p| p as u64)
    }

    /// Factorizes `n ≤ limit` by repeated smallest-prime-factor lookups.
    pub fn factorize(&self, n: u64) -> Option<Factorization> {
        if n == 0 || n > self.limit {
            return None;
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            factors.push((p as u64, k));
        }
        Some(Factorization { n, factors })
    }
}

/// Canonical factorization of `n`, through the sieve when it covers `n`.
pub fn factorize(n: u64, sieve: Option<&SieveTable>) -> Result<Factorization> {
    factorize_seeded(n, sieve, DEFAULT_SEED)
}

/// As [`factorize`], with an explicit seed for the rho splitting step.
pub fn factorize_seeded(n: u64, sieve: Option<&SieveTable>, seed: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factorize 0".into()));
    }
    if let Some(f) = sieve.and_then(|s| s.factorize(n)) {
        return Ok(f);
    }
    let mut primes = Vec::new();
    let mut m = n;
    for p in SMALL_PRIMES {
        if p * p > m {
            break;
        }
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
    }
    if m > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        split_into(m, &mut rng, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn split_into(m: u64, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.push(m);
        return;
    }
    if let Some(r) = exact_sqrt(m) {
        split_into(r, rng, out);
        split_into(r, rng, out);
        return;
    }
    let d = pollard_brent(m, rng);
    split_into(d, rng, out);
    split_into(m / d, rng, out);
}

fn exact_sqrt(m: u64) -> Option<u64> {
    let mut r = (m as f64).sqrt() as u64;
    while r.saturating_mul(r) > m {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= m {
        r += 1;
    }
    (r * r == m).then_some(r)
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Nontrivial divisor of an odd composite `m` that is not a perfect square.
fn pollard_brent(m: u64, rng: &mut ChaCha8Rng) -> u64 {
    if m % 2 == 0 {
        return 2;
    }
    const BATCH: u64 = 128;
    loop {
        let c = rng.gen_range(1..m);
        let mut y = rng.gen_range(0..m);
        let f = |x: u64| ((mul_mod(x, x, m) as u128 + c as u128) % m as u128) as u64;
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), m);
                }
                g = gcd(q, m);
                k += BATCH;
            }
            r *= 2;
        }
        if g == m {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), m);
                if g > 1 {
                    break;
                }
            }
        }
        if g != m {
            return g;
        }
    }
}

/// Deterministic primality for the whole `u64` range.
///
/// Trial division by small primes, then Miller-Rabin with the first twelve
/// prime bases, which has no pseudoprimes below 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 97 * 97 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}
