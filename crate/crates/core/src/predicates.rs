//! The divisibility conditions under study and the two p²q equation solvers.
//!
//! All predicates require n ≥ 2. At n = 1 the relation φ⁺(1) | 0 holds
//! vacuously, which is never what a search for witnesses wants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arithfun::{phi, phi_plus, schemmel2, sigma, sigma_plus};
use crate::error::{Error, Result};
use crate::factorize::{factorize, Factorization};

/// Divisibility conditions a range scan can test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionId {
    /// Composite n with φ(n) | n − 1.
    Lehmer,
    /// Composite n with S₂(n) | φ(n) − 1.
    Deaconescu,
    /// (n + 1) | σ(n).
    SigmaShift,
    /// (n + 1) | σ⁺(n).
    SigmaPlusShift,
    /// φ⁺(n) | n − 1.
    PhiPlusShift,
    /// (n + 1) | σ(n + 1), i.e. n + 1 is multiperfect.
    SigmaShiftLiteral,
}

impl ConditionId {
    pub const ALL: [ConditionId; 6] = [
        ConditionId::Lehmer,
        ConditionId::Deaconescu,
        ConditionId::SigmaShift,
        ConditionId::SigmaPlusShift,
        ConditionId::PhiPlusShift,
        ConditionId::SigmaShiftLiteral,
    ];

    /// Kebab-case name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            ConditionId::Lehmer => "lehmer",
            ConditionId::Deaconescu => "deaconescu",
            ConditionId::SigmaShift => "sigma-shift",
            ConditionId::SigmaPlusShift => "sigma-plus-shift",
            ConditionId::PhiPlusShift => "phi-plus-shift",
            ConditionId::SigmaShiftLiteral => "sigma-shift-literal",
        }
    }

    /// Snake-case tag written into witnesses.
    pub fn tag(self) -> &'static str {
        match self {
            ConditionId::Lehmer => "lehmer",
            ConditionId::Deaconescu => "deaconescu",
            ConditionId::SigmaShift => "sigma_shift",
            ConditionId::SigmaPlusShift => "sigma_plus_shift",
            ConditionId::PhiPlusShift => "phi_plus_shift",
            ConditionId::SigmaShiftLiteral => "sigma_shift_literal",
        }
    }

    /// Whether the condition needs the factorization of n + 1 rather than n.
    pub fn reads_successor(self) -> bool {
        self == ConditionId::SigmaShiftLiteral
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('_', "-");
        ConditionId::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| Error::Unknown {
                kind: "condition",
                name: s.to_string(),
            })
    }
}

/// `a | b` with the ring convention `0 | b ⇔ b = 0`.
pub fn divides(a: u128, b: u128) -> bool {
    if a == 0 {
        b == 0
    } else {
        b % a == 0
    }
}

pub fn is_lehmer(f: &Factorization) -> bool {
    f.is_composite() && divides(phi(f) as u128, f.n() as u128 - 1)
}

/// The Deaconescu relation S₂(n) | φ(n) − 1 without the compositeness filter.
pub fn deaconescu_relation(f: &Factorization) -> bool {
    divides(schemmel2(f) as u128, phi(f) as u128 - 1)
}

pub fn is_deaconescu(f: &Factorization) -> bool {
    f.is_composite() && deaconescu_relation(f)
}

/// `Some(k)` with σ(n) = k(n + 1) when n + 1 divides σ(n).
pub fn sigma_shift_multiplier(f: &Factorization) -> Result<Option<u128>> {
    let s = sigma(f)?;
    let m = f.n() as u128 + 1;
    Ok((s % m == 0).then_some(s / m))
}

pub fn sigma_plus_shift_holds(f: &Factorization) -> Result<bool> {
    Ok(sigma_plus(f)? % (f.n() as u128 + 1) == 0)
}

pub fn phi_plus_shift_holds(f: &Factorization) -> bool {
    divides(phi_plus(f) as u128, f.n() as u128 - 1)
}

/// Prime pairs p ≠ q, both at most `prime_bound`, with σ(p²q) = 2(p²q + 1).
///
/// Candidates come from q = (p² + p − 1)/(p² − p − 1), which needs
/// p² − p − 1 to divide 2p; each candidate is confirmed by evaluating σ on
/// the factorization of p²q.
pub fn solve_sigma_p2q(prime_bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in primes_up_to(prime_bound) {
        let p = p as u128;
        let den = p * p - p - 1;
        let num = p * p + p - 1;
        if num % den != 0 {
            continue;
        }
        let q = num / den;
        if let Some(hit) = confirm_p2q(p, q, prime_bound, |f| sigma(f).ok()) {
            out.push(hit);
        }
    }
    out
}

/// Prime pairs p ≠ q with σ⁺(p²q) = 2(p²q + 1); none exist.
///
/// Candidates come from q = 2(p² + p + 1)/(p² − p − 2), defined for p > 2;
/// p = 2 is checked directly since the denominator vanishes there.
pub fn solve_sigma_plus_p2q(prime_bound: u64) -> Vec<(u64, u64)> {
    let primes = primes_up_to(prime_bound);
    let mut out = Vec::new();
    for &p in &primes {
        let p = p as u128;
        let candidates: Vec<u128> = match sigma_plus_p2q_candidate(p as u64) {
            Some(q) => vec![q as u128],
            None if p == 2 => primes.iter().map(|&q| q as u128).collect(),
            None => Vec::new(),
        };
        for q in candidates {
            if let Some(hit) = confirm_p2q(p, q, prime_bound, |f| sigma_plus(f).ok()) {
                out.push(hit);
            }
        }
    }
    out
}

/// The value q = 2(p² + p + 1)/(p² − p − 2) when it is a positive integer.
/// `None` for p ≤ 2 or when the division leaves a remainder (e.g. p = 3
/// gives 13/2, p = 5 gives 31/9).
pub fn sigma_plus_p2q_candidate(p: u64) -> Option<u64> {
    if p <= 2 {
        return None;
    }
    let p = p as u128;
    let num = 2 * (p * p + p + 1);
    let den = p * p - p - 2;
    (num % den == 0).then(|| (num / den) as u64)
}

fn confirm_p2q(
    p: u128,
    q: u128,
    prime_bound: u64,
    eval: impl Fn(&Factorization) -> Option<u128>,
) -> Option<(u64, u64)> {
    if q == p || q > prime_bound as u128 || !crate::factorize::is_prime(q as u64) {
        return None;
    }
    let n = u64::try_from(p * p * q).ok()?;
    let f = factorize(n, None).ok()?;
    (eval(&f)? == 2 * (n as u128 + 1)).then_some((p as u64, q as u64))
}

fn primes_up_to(bound: u64) -> Vec<u64> {
    match crate::factorize::build_spf_sieve(bound.max(2)) {
        Ok(s) => s.primes().filter(|&p| p <= bound).collect(),
        Err(_) => (2..=bound)
            .filter(|&p| crate::factorize::is_prime(p))
            .collect(),
    }
}
