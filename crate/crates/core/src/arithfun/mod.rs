//! σ, φ, Schemmel's S₂, the plus variants σ⁺ and φ⁺, and the abundancy index.
//!
//! Every evaluator reads a [`Factorization`] and multiplies per-prime-power
//! values. Quantities that can exceed 64 bits (σ and σ⁺) are carried in
//! `u128` with checked arithmetic; the others are bounded by `n`.

pub mod oracle;
mod rational;

use serde::{Deserialize, Serialize};

pub use self::rational::Rational;
use crate::error::{Error, Result};
use crate::factorize::{factorize, Factorization, SieveTable};

/// σ(p^k) = 1 + p + … + p^k.
pub fn sigma_prime_power(p: u64, k: u32) -> Option<u128> {
    let p = p as u128;
    let mut term: u128 = 1;
    let mut sum: u128 = 1;
    for _ in 0..k {
        term = term.checked_mul(p)?;
        sum = sum.checked_add(term)?;
    }
    Some(sum)
}

/// φ(p^k) = p^(k−1)(p − 1).
pub fn phi_prime_power(p: u64, k: u32) -> u64 {
    p.pow(k - 1) * (p - 1)
}

/// S₂(p^k): zero at p = 2, otherwise p^(k−1)(p − 2).
pub fn schemmel2_prime_power(p: u64, k: u32) -> u64 {
    if p == 2 {
        0
    } else {
        p.pow(k - 1) * (p - 2)
    }
}

fn overflow(what: &'static str, f: &Factorization) -> Error {
    Error::Overflow { what, n: f.n() }
}

pub fn sigma(f: &Factorization) -> Result<u128> {
    f.factors().iter().try_fold(1u128, |acc, &(p, k)| {
        sigma_prime_power(p, k)
            .and_then(|s| acc.checked_mul(s))
            .ok_or_else(|| overflow("sigma", f))
    })
}

pub fn phi(f: &Factorization) -> u64 {
    f.factors()
        .iter()
        .map(|&(p, k)| phi_prime_power(p, k))
        .product()
}

/// Schemmel's totient S₂; zero for even n and one for n = 1.
pub fn schemmel2(f: &Factorization) -> u64 {
    f.factors()
        .iter()
        .map(|&(p, k)| schemmel2_prime_power(p, k))
        .product()
}

/// σ⁺(n) = ∏ (σ(p^k) + 1) over the prime powers exactly dividing n.
pub fn sigma_plus(f: &Factorization) -> Result<u128> {
    f.factors().iter().try_fold(1u128, |acc, &(p, k)| {
        sigma_prime_power(p, k)
            .and_then(|s| s.checked_add(1))
            .and_then(|s| acc.checked_mul(s))
            .ok_or_else(|| overflow("sigma_plus", f))
    })
}

/// φ⁺(n) = ∏ (φ(p^k) + 1). Never exceeds n.
pub fn phi_plus(f: &Factorization) -> u64 {
    f.factors()
        .iter()
        .map(|&(p, k)| phi_prime_power(p, k) + 1)
        .product()
}

pub fn omega(f: &Factorization) -> usize {
    f.omega()
}

/// I(n) = σ(n)/n in lowest terms.
pub fn abundancy(f: &Factorization) -> Result<Rational> {
    Ok(Rational::new(sigma(f)?, f.n() as u128).expect("n is positive"))
}

/// Every function value for one n, computed from a single factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithProfile {
    pub n: u64,
    pub factorization: Factorization,
    #[serde(with = "crate::report::wide_int")]
    pub sigma: u128,
    pub phi: u64,
    pub schemmel2: u64,
    #[serde(with = "crate::report::wide_int")]
    pub sigma_plus: u128,
    pub phi_plus: u64,
    pub abundancy: Rational,
    pub omega: usize,
}

impl ArithProfile {
    pub fn from_factorization(f: Factorization) -> Result<Self> {
        let sigma_v = sigma(&f)?;
        Ok(Self {
            n: f.n(),
            sigma: sigma_v,
            phi: phi(&f),
            schemmel2: schemmel2(&f),
            sigma_plus: sigma_plus(&f)?,
            phi_plus: phi_plus(&f),
            abundancy: Rational::new(sigma_v, f.n() as u128).expect("n is positive"),
            omega: f.omega(),
            factorization: f,
        })
    }
}

pub fn profile(n: u64, sieve: Option<&SieveTable>) -> Result<ArithProfile> {
    ArithProfile::from_factorization(factorize(n, sieve)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::{build_spf_sieve, is_prime};

    fn f(n: u64) -> Factorization {
        factorize(n, None).unwrap()
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn single_values() {
        assert_eq!(sigma(&f(1)).unwrap(), 1);
        assert_eq!(sigma(&f(20)).unwrap(), 42);
        assert_eq!(sigma(&f(9)).unwrap(), 13);
        assert_eq!(phi(&f(1)), 1);
        assert_eq!(phi(&f(7)), 6);
        assert_eq!(phi(&f(561)), 320);
        assert_eq!(schemmel2(&f(2)), 0);
        assert_eq!(schemmel2(&f(9)), 3);
        assert_eq!(schemmel2(&f(15)), 3);
        assert_eq!(schemmel2(&f(1)), 1);
        assert_eq!(sigma_plus(&f(1)).unwrap(), 1);
        assert_eq!(sigma_plus(&f(7)).unwrap(), 9);
        assert_eq!(sigma_plus(&f(20)).unwrap(), 56);
        assert_eq!(phi_plus(&f(1)), 1);
        assert_eq!(phi_plus(&f(4)), 3);
        assert_eq!(phi_plus(&f(45)), 35);
        assert_eq!(abundancy(&f(1)).unwrap(), Rational::ONE);
        assert_eq!(abundancy(&f(6)).unwrap(), Rational::from_integer(2));
        assert_eq!(abundancy(&f(12)).unwrap().to_string(), "7/3");
    }

    #[test]
    fn profiles() {
        let p = profile(20, None).unwrap();
        assert_eq!(
            (p.sigma, p.sigma_plus, p.phi, p.phi_plus, p.schemmel2, p.omega),
            (42, 56, 8, 15, 0, 2)
        );
        assert_eq!(p.abundancy.to_string(), "21/10");
        let p = profile(1, None).unwrap();
        assert_eq!(
            (p.sigma, p.sigma_plus, p.phi, p.phi_plus, p.schemmel2, p.omega),
            (1, 1, 1, 1, 1, 0)
        );
        assert_eq!(p.abundancy, Rational::ONE);
        let p = profile(9, None).unwrap();
        assert_eq!(
            (p.sigma, p.sigma_plus, p.phi, p.phi_plus, p.schemmel2, p.omega),
            (13, 14, 6, 7, 3, 1)
        );
        assert_eq!(p.abundancy.to_string(), "13/9");
    }

    #[test]
    fn top_of_range_does_not_overflow() {
        let p = profile(u64::MAX, None).unwrap();
        assert!(p.sigma_plus > p.sigma);
        assert!(p.sigma > u64::MAX as u128);
        let back: ArithProfile =
            serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn multiplicative_over_coprime_pairs() {
        let s = build_spf_sieve(10_000).unwrap();
        let pr = |n| profile(n, Some(&s)).unwrap();
        for a in 1..=100u64 {
            let pa = pr(a);
            for b in 1..=10_000 / a {
                if gcd(a, b) != 1 {
                    continue;
                }
                let (pb, pab) = (pr(b), pr(a * b));
                assert_eq!(pab.sigma, pa.sigma * pb.sigma);
                assert_eq!(pab.phi, pa.phi * pb.phi);
                assert_eq!(pab.schemmel2, pa.schemmel2 * pb.schemmel2);
                assert_eq!(pab.sigma_plus, pa.sigma_plus * pb.sigma_plus);
                assert_eq!(pab.phi_plus, pa.phi_plus * pb.phi_plus);
            }
        }
    }

    #[test]
    fn structural_identities() {
        let s = build_spf_sieve(10_000).unwrap();
        for n in 2..=10_000u64 {
            let p = profile(n, Some(&s)).unwrap();
            assert!(p.phi_plus as u128 <= p.sigma_plus);
            assert!(p.sigma_plus > p.sigma);
            assert!(p.phi_plus > p.phi);
            assert_eq!(p.omega, p.factorization.factors().len());
            if p.factorization.is_squarefree() {
                assert_eq!(p.phi_plus, n);
            }
            if is_prime(n) {
                assert_eq!(p.sigma_plus, n as u128 + 2);
                assert_eq!(p.phi_plus, n);
                assert_eq!(p.schemmel2, n - 2);
            }
            if n % 2 == 0 {
                assert_eq!(p.schemmel2, 0);
            }
        }
    }
}
