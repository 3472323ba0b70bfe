//! Naive reference evaluators used to cross-check the factorization-based
//! formulas. None of them touch a [`Factorization`](crate::factorize::Factorization)
//! or a closed-form per-prime-power expression.

use crate::error::{Error, Result};

/// Largest argument the oracles accept.
pub const ORACLE_CAP: u64 = 1_000_000;

fn check(n: u64) -> Result<()> {
    if n == 0 || n > ORACLE_CAP {
        return Err(Error::Bounds {
            what: "oracle argument",
            value: n,
            min: 1,
            max: ORACLE_CAP,
        });
    }
    Ok(())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn divisor_sum(n: u64) -> u64 {
    let mut sum = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            sum += d;
            if d * d != n {
                sum += n / d;
            }
        }
        d += 1;
    }
    sum
}

fn coprime_count(n: u64) -> u64 {
    (1..=n).filter(|&m| gcd(m, n) == 1).count() as u64
}

/// Prime powers exactly dividing `n`, found by trial division.
fn prime_power_parts(mut n: u64) -> Vec<u64> {
    let mut parts = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut pk = 1;
            while n % d == 0 {
                n /= d;
                pk *= d;
            }
            parts.push(pk);
        }
        d += 1;
    }
    if n > 1 {
        parts.push(n);
    }
    parts
}

/// σ(n) as the sum of all divisors found by trial.
pub fn oracle_sigma(n: u64) -> Result<u64> {
    check(n)?;
    Ok(divisor_sum(n))
}

/// φ(n) by counting residues in `[1, n]` coprime to `n`.
pub fn oracle_phi(n: u64) -> Result<u64> {
    check(n)?;
    Ok(coprime_count(n))
}

/// S₂(n) as the number of m ≤ n with m and m + 1 both coprime to n.
pub fn oracle_schemmel2(n: u64) -> Result<u64> {
    check(n)?;
    Ok((1..=n)
        .filter(|&m| gcd(m, n) == 1 && gcd(m + 1, n) == 1)
        .count() as u64)
}

pub fn oracle_sigma_plus(n: u64) -> Result<u64> {
    check(n)?;
    Ok(prime_power_parts(n)
        .into_iter()
        .map(|pk| divisor_sum(pk) + 1)
        .product())
}

pub fn oracle_phi_plus(n: u64) -> Result<u64> {
    check(n)?;
    Ok(prime_power_parts(n)
        .into_iter()
        .map(|pk| coprime_count(pk) + 1)
        .product())
}
