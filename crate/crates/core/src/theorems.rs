//! Exhaustive verifiers for the structural results on σ, σ⁺ and φ⁺.
//!
//! Each verifier enumerates a hypothesis class up to a bound and returns the
//! counterexamples it finds. Nothing here panics on a failed claim; a
//! counterexample is data.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithfun::{abundancy, phi_plus, sigma, sigma_plus, Rational};
use crate::error::{Error, Result};
use crate::factorize::{build_spf_sieve, Factorization, SieveTable};
use crate::predicates::{phi_plus_shift_holds, sigma_plus_shift_holds, sigma_shift_multiplier};
use crate::report::Witness;

/// Lower-bound violations of the φ⁺ sandwich established by exact brute
/// force over every powerful n ≤ 10⁶.
pub const KNOWN_PHI_PLUS_LOWER_VIOLATIONS: &[u64] = &[4];

/// Bound up to which [`KNOWN_PHI_PLUS_LOWER_VIOLATIONS`] is complete.
pub const KNOWN_PHI_PLUS_LOWER_VIOLATIONS_BOUND: u64 = 1_000_000;

/// One evaluation of a three-term inequality chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub lower: Rational,
    pub middle: Rational,
    pub upper: Rational,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

fn overflow(what: &'static str, f: &Factorization) -> Error {
    Error::Overflow { what, n: f.n() }
}

/// I(n)/2 < σ⁺(n)/(n + 1) < 2^ω(n) · I(n), all strict.
pub fn check_sigma_plus_bounds(f: &Factorization) -> Result<BoundReport> {
    let index = abundancy(f)?;
    let lower = index
        .checked_div_int(2)
        .ok_or_else(|| overflow("abundancy / 2", f))?;
    let middle = Rational::new(sigma_plus(f)?, f.n() as u128 + 1).expect("positive denominator");
    let upper = index
        .checked_mul_int(1u128 << f.omega())
        .ok_or_else(|| overflow("2^omega * abundancy", f))?;
    Ok(BoundReport {
        n: f.n(),
        lower_ok: lower < middle,
        upper_ok: middle < upper,
        lower,
        middle,
        upper,
    })
}

/// ∏(1 + 1/p²) ≤ (n − 1)/φ⁺(n) < 2^ω(n) for powerful n ≥ 4.
pub fn check_phi_plus_bounds(f: &Factorization) -> Result<BoundReport> {
    if f.n() < 4 || !f.is_powerful() {
        return Err(Error::Domain(format!(
            "{} is not a powerful number at least 4",
            f.n()
        )));
    }
    let lower = f.factors().iter().try_fold(Rational::ONE, |acc, &(p, _)| {
        let p2 = (p as u128) * (p as u128);
        acc.checked_mul(Rational::new(p2 + 1, p2).expect("p > 0"))
            .ok_or_else(|| overflow("prod(1 + 1/p^2)", f))
    })?;
    let middle =
        Rational::new(f.n() as u128 - 1, phi_plus(f) as u128).expect("phi_plus is positive");
    let upper = Rational::from_integer(1u128 << f.omega());
    Ok(BoundReport {
        n: f.n(),
        lower_ok: lower <= middle,
        upper_ok: middle < upper,
        lower,
        middle,
        upper,
    })
}

/// The per-prime-power step (1 + 1/p²)(p^r − p^(r−1) + 1) < p^r, exactly.
pub fn phi_plus_lower_step_holds(p: u64, r: u32) -> bool {
    let (p, pr) = (p as u128, (p as u128).pow(r));
    let phi_plus_pk = pr - pr / p + 1;
    (p * p + 1) * phi_plus_pk < pr * p * p
}

/// The verifiable results, each naming its hypothesis class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// n = pq, p ≠ q: n + 1 ∤ σ(n).
    PqSigma,
    /// n = pq, p ≠ q: n + 1 ∤ σ⁺(n).
    PqSigmaPlus,
    /// n = p²q, p ≠ q: σ(n) = 2(n + 1) only at (2, 5). Returns the solutions.
    P2qSigma,
    /// n = p²q, p ≠ q: σ⁺(n) ≠ 2(n + 1).
    P2qSigmaPlus,
    /// Squarefree n ≥ 2: φ⁺(n) ∤ n − 1.
    SquarefreePhiPlus,
    /// n = p^r: φ⁺(n) | n − 1 only at n = 4.
    PrimePowerPhiPlus,
    /// Every n ≥ 2: the σ⁺ sandwich around the abundancy index.
    SigmaPlusBounds,
    /// Powerful n ≥ 4: the φ⁺ sandwich.
    PhiPlusBounds,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::PqSigma,
        TheoremId::PqSigmaPlus,
        TheoremId::P2qSigma,
        TheoremId::P2qSigmaPlus,
        TheoremId::SquarefreePhiPlus,
        TheoremId::PrimePowerPhiPlus,
        TheoremId::SigmaPlusBounds,
        TheoremId::PhiPlusBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::PqSigma => "pq-sigma",
            TheoremId::PqSigmaPlus => "pq-sigma-plus",
            TheoremId::P2qSigma => "p2q-sigma",
            TheoremId::P2qSigmaPlus => "p2q-sigma-plus",
            TheoremId::SquarefreePhiPlus => "squarefree-phi-plus",
            TheoremId::PrimePowerPhiPlus => "prime-power-phi-plus",
            TheoremId::SigmaPlusBounds => "sigma-plus-bounds",
            TheoremId::PhiPlusBounds => "phi-plus-bounds",
        }
    }

    pub fn tag(self) -> String {
        self.name().replace('-', "_")
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('_', "-");
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == key)
            .ok_or_else(|| Error::Unknown {
                kind: "theorem",
                name: s.to_string(),
            })
    }
}

/// Counterexamples (or, for [`TheoremId::P2qSigma`], solutions) up to `bound`,
/// ascending by n.
pub fn verify_theorem(id: TheoremId, bound: u64) -> Result<Vec<Witness>> {
    verify_theorem_counted(id, bound).map(|(_, w)| w)
}

/// As [`verify_theorem`], also returning the size of the hypothesis class.
pub fn verify_theorem_counted(id: TheoremId, bound: u64) -> Result<(u64, Vec<Witness>)> {
    if bound < 4 {
        return Err(Error::Bounds {
            what: "verify bound",
            value: bound,
            min: 4,
            max: u64::MAX,
        });
    }
    let sieve = build_spf_sieve(bound).map_err(|e| Error::Resource(e.to_string()))?;
    let candidates = hypothesis_class(id, &sieve);
    let tag = id.tag();
    let results: Vec<Result<Option<Witness>>> = candidates
        .par_iter()
        .map(|&n| {
            let f = sieve.factorize(n).expect("candidate within sieve");
            examine(id, &tag, f)
        })
        .collect();
    let witnesses = results
        .into_iter()
        .filter_map(Result::transpose)
        .collect::<Result<Vec<_>>>()?;
    Ok((candidates.len() as u64, witnesses))
}

/// Ascending list of every n ≤ sieve limit in the theorem's hypothesis class.
pub fn hypothesis_class(id: TheoremId, sieve: &SieveTable) -> Vec<u64> {
    let bound = sieve.limit();
    let primes: Vec<u64> = sieve.primes().collect();
    let mut out = Vec::new();
    match id {
        TheoremId::PqSigma | TheoremId::PqSigmaPlus => {
            for (i, &p) in primes.iter().enumerate() {
                if p * p > bound {
                    break;
                }
                for &q in &primes[i + 1..] {
                    if p * q > bound {
                        break;
                    }
                    out.push(p * q);
                }
            }
        }
        TheoremId::P2qSigma | TheoremId::P2qSigmaPlus => {
            for &p in &primes {
                if p * p * 2 > bound {
                    break;
                }
                for &q in &primes {
                    if p * p * q > bound {
                        break;
                    }
                    if q != p {
                        out.push(p * p * q);
                    }
                }
            }
        }
        TheoremId::SquarefreePhiPlus => {
            out.extend((2..=bound).filter(|&n| is_squarefree(sieve, n)));
        }
        TheoremId::PrimePowerPhiPlus => {
            for &p in &primes {
                let mut pk = p;
                loop {
                    out.push(pk);
                    match pk.checked_mul(p) {
                        Some(next) if next <= bound => pk = next,
                        _ => break,
                    }
                }
            }
        }
        TheoremId::SigmaPlusBounds => out.extend(2..=bound),
        TheoremId::PhiPlusBounds => {
            powerful_numbers(&primes, 0, 1, bound, &mut out);
            out.retain(|&n| n >= 4);
        }
    }
    out.sort_unstable();
    out
}

fn is_squarefree(sieve: &SieveTable, mut n: u64) -> bool {
    while n > 1 {
        let p = sieve.spf(n).expect("within sieve");
        n /= p;
        if n % p == 0 {
            return false;
        }
    }
    true
}

/// Every powerful number ≤ `bound` built from `primes[from..]` times `acc`.
fn powerful_numbers(primes: &[u64], from: usize, acc: u64, bound: u64, out: &mut Vec<u64>) {
    out.push(acc);
    for (i, &p) in primes.iter().enumerate().skip(from) {
        let Some(mut m) = acc.checked_mul(p * p) else {
            break;
        };
        if m > bound {
            break;
        }
        while m <= bound {
            powerful_numbers(primes, i + 1, m, bound, out);
            match m.checked_mul(p) {
                Some(next) => m = next,
                None => break,
            }
        }
    }
}

fn examine(id: TheoremId, tag: &str, f: Factorization) -> Result<Option<Witness>> {
    let n = f.n();
    let w = || Witness::new(tag, f.clone());
    Ok(match id {
        TheoremId::PqSigma => sigma_shift_multiplier(&f)?
            .map(|k| w().with("sigma", sigma(&f).unwrap_or(0)).with("k", k)),
        TheoremId::PqSigmaPlus => sigma_plus_shift_holds(&f)?
            .then(|| w().with("sigma_plus", sigma_plus(&f).unwrap_or(0))),
        TheoremId::P2qSigma | TheoremId::P2qSigmaPlus => {
            let value = if id == TheoremId::P2qSigma {
                sigma(&f)?
            } else {
                sigma_plus(&f)?
            };
            let (p, q) = p2q_parts(&f);
            (value == 2 * (n as u128 + 1)).then(|| {
                let name = if id == TheoremId::P2qSigma {
                    "sigma"
                } else {
                    "sigma_plus"
                };
                w().with("p", p).with("q", q).with(name, value)
            })
        }
        TheoremId::SquarefreePhiPlus | TheoremId::PrimePowerPhiPlus => {
            let allowed = id == TheoremId::PrimePowerPhiPlus && n == 4;
            (phi_plus_shift_holds(&f) && !allowed)
                .then(|| w().with("phi_plus", phi_plus(&f)))
        }
        TheoremId::SigmaPlusBounds => {
            let b = check_sigma_plus_bounds(&f)?;
            (!b.holds()).then(|| bound_witness(w(), &b))
        }
        TheoremId::PhiPlusBounds => {
            let b = check_phi_plus_bounds(&f)?;
            (!b.holds()).then(|| bound_witness(w(), &b))
        }
    })
}

fn p2q_parts(f: &Factorization) -> (u64, u64) {
    match f.factors() {
        [(a, 2), (b, 1)] => (*a, *b),
        [(a, 1), (b, 2)] => (*b, *a),
        _ => unreachable!("p2q hypothesis class"),
    }
}

fn bound_witness(w: Witness, b: &BoundReport) -> Witness {
    w.with("lower", b.lower)
        .with("middle", b.middle)
        .with("upper", b.upper)
        .with("lower_ok", b.lower_ok)
        .with("upper_ok", b.upper_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::factorize;

    fn f(n: u64) -> Factorization {
        factorize(n, None).unwrap()
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn sigma_plus_bound_examples() {
        let b = check_sigma_plus_bounds(&f(12)).unwrap();
        assert_eq!((b.lower, b.middle, b.upper), (r("7/6"), r("40/13"), r("28/3")));
        assert!(b.holds());
        let b = check_sigma_plus_bounds(&f(2)).unwrap();
        assert_eq!((b.lower, b.middle, b.upper), (r("3/4"), r("4/3"), r("3/1")));
        assert!(b.holds());
        let b = check_sigma_plus_bounds(&f(20)).unwrap();
        assert_eq!((b.lower, b.middle, b.upper), (r("21/20"), r("8/3"), r("42/5")));
        assert!(b.holds());
    }

    #[test]
    fn phi_plus_bound_examples() {
        let b = check_phi_plus_bounds(&f(36)).unwrap();
        assert_eq!((b.lower, b.middle, b.upper), (r("25/18"), r("5/3"), r("4/1")));
        assert!(b.holds());
        let b = check_phi_plus_bounds(&f(9)).unwrap();
        assert_eq!((b.lower, b.middle, b.upper), (r("10/9"), r("8/7"), r("2/1")));
        assert!(b.holds());
        let b = check_phi_plus_bounds(&f(4)).unwrap();
        assert_eq!((b.lower, b.middle, b.upper), (r("5/4"), r("1/1"), r("2/1")));
        assert!(!b.lower_ok && b.upper_ok);
        assert!(check_phi_plus_bounds(&f(12)).is_err());
        assert!(check_phi_plus_bounds(&f(1)).is_err());
    }

    #[test]
    fn lower_step_holds_for_every_prime_power_square_and_up() {
        for p in (2..1000u64).filter(|&p| crate::factorize::is_prime(p)) {
            let mut r = 2;
            while p.checked_pow(r).is_some_and(|v| v <= 1_000_000) {
                assert!(phi_plus_lower_step_holds(p, r), "{p}^{r}");
                r += 1;
            }
        }
    }

    #[test]
    fn theorem_names_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.name().parse::<TheoremId>().unwrap(), t);
            assert_eq!(t.tag().parse::<TheoremId>().unwrap(), t);
        }
        assert!("fermat".parse::<TheoremId>().is_err());
    }

    #[test]
    fn hypothesis_classes_match_filters() {
        let s = build_spf_sieve(5000).unwrap();
        let by_filter = |pred: &dyn Fn(&Factorization) -> bool| -> Vec<u64> {
            (2..=5000).filter(|&n| pred(&s.factorize(n).unwrap())).collect()
        };
        assert_eq!(
            hypothesis_class(TheoremId::PqSigma, &s),
            by_filter(&|f| matches!(f.factors(), [(_, 1), (_, 1)]))
        );
        assert_eq!(
            hypothesis_class(TheoremId::P2qSigma, &s),
            by_filter(&|f| matches!(f.factors(), [(_, 2), (_, 1)] | [(_, 1), (_, 2)]))
        );
        assert_eq!(
            hypothesis_class(TheoremId::PrimePowerPhiPlus, &s),
            by_filter(&|f| f.omega() == 1)
        );
        assert_eq!(
            hypothesis_class(TheoremId::PhiPlusBounds, &s),
            by_filter(&|f| f.is_powerful())
        );
        assert_eq!(
            hypothesis_class(TheoremId::SquarefreePhiPlus, &s),
            by_filter(&|f| f.is_squarefree())
        );
    }

    #[test]
    fn verifiers_at_ten_thousand() {
        for id in [
            TheoremId::PqSigma,
            TheoremId::PqSigmaPlus,
            TheoremId::P2qSigmaPlus,
            TheoremId::SquarefreePhiPlus,
            TheoremId::PrimePowerPhiPlus,
            TheoremId::SigmaPlusBounds,
        ] {
            assert!(verify_theorem(id, 10_000).unwrap().is_empty(), "{id}");
        }
        let sols = verify_theorem(TheoremId::P2qSigma, 10_000).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].n, 20);
        assert_eq!((sols[0].int("p"), sols[0].int("q")), (Some(2), Some(5)));
        let v = verify_theorem(TheoremId::PhiPlusBounds, 10_000).unwrap();
        assert_eq!(v.iter().map(|w| w.n).collect::<Vec<_>>(), [4]);
        assert!(verify_theorem(TheoremId::P2qSigma, 3).is_err());
    }
}
