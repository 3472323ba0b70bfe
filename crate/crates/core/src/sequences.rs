//! Value collisions and three-term value progressions in σ⁺ and φ⁺.
//!
//! A progression here is any three indices a < b < c whose values satisfy
//! 2f(b) = f(a) + f(c); the indices themselves need not be evenly spaced.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithfun::{phi_plus, sigma_plus};
use crate::error::{Error, Result};
use crate::factorize::{build_spf_sieve, factorize, is_prime, Factorization};

/// The two sequences under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqFunction {
    SigmaPlus,
    PhiPlus,
}

impl SeqFunction {
    pub fn name(self) -> &'static str {
        match self {
            SeqFunction::SigmaPlus => "sigma-plus",
            SeqFunction::PhiPlus => "phi-plus",
        }
    }

    pub fn eval(self, f: &Factorization) -> Result<u128> {
        match self {
            SeqFunction::SigmaPlus => sigma_plus(f),
            SeqFunction::PhiPlus => Ok(phi_plus(f) as u128),
        }
    }

    /// Direct evaluation at a single n, without a sieve.
    pub fn at(self, n: u64) -> Result<u128> {
        self.eval(&factorize(n, None)?)
    }

    /// `table[i]` = f(i + 1) for i + 1 in `[1, max_n]`.
    pub fn table(self, max_n: u64) -> Result<Vec<u128>> {
        let sieve = build_spf_sieve(max_n.max(2)).map_err(|e| Error::Resource(e.to_string()))?;
        (1..=max_n)
            .into_par_iter()
            .map(|n| self.eval(&sieve.factorize(n).expect("within sieve")))
            .collect()
    }
}

impl fmt::Display for SeqFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeqFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "sigma-plus" => Ok(SeqFunction::SigmaPlus),
            "phi-plus" => Ok(SeqFunction::PhiPlus),
            _ => Err(Error::Unknown {
                kind: "function",
                name: s.to_string(),
            }),
        }
    }
}

/// Indices sharing one function value; at least two, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionGroup {
    pub value: u128,
    pub members: Vec<u64>,
}

/// Indices a < b < c with 2f(b) = f(a) + f(c).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub values: (u128, u128, u128),
}

/// Outcome of evaluating one closed-form family instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub family: String,
    pub param: u64,
    pub members: Vec<u64>,
    pub values: Vec<u128>,
    pub valid: bool,
}

/// Every value shared by two or more n ≤ `max_n`, sorted by value.
pub fn find_collisions(func: SeqFunction, max_n: u64) -> Result<Vec<CollisionGroup>> {
    if max_n < 2 {
        return Err(Error::Domain("max_n must be at least 2".into()));
    }
    let table = func.table(max_n)?;
    let mut by_value: HashMap<u128, Vec<u64>> = HashMap::new();
    for (i, &v) in table.iter().enumerate() {
        by_value.entry(v).or_default().push(i as u64 + 1);
    }
    let mut groups: Vec<CollisionGroup> = by_value
        .into_iter()
        .filter(|(_, m)| m.len() >= 2)
        .map(|(value, members)| CollisionGroup { value, members })
        .collect();
    groups.sort_unstable_by_key(|g| g.value);
    Ok(groups)
}

/// Value progressions among indices ≤ `max_n`, lexicographic in (a, b, c),
/// truncated to the first `max_results`.
pub fn find_3term_aps(func: SeqFunction, max_n: u64, max_results: usize) -> Result<Vec<ApTriple>> {
    if max_n < 3 {
        return Err(Error::Domain("max_n must be at least 3".into()));
    }
    let table = func.table(max_n)?;
    let mut index: HashMap<u128, Vec<u64>> = HashMap::new();
    for (i, &v) in table.iter().enumerate() {
        index.entry(v).or_default().push(i as u64 + 1);
    }
    let value = |n: u64| table[n as usize - 1];

    let triples_from = |a: u64, cap: usize| -> Vec<ApTriple> {
        let mut out = Vec::new();
        let fa = value(a);
        for b in a + 1..max_n {
            let fb = value(b);
            let Some(fc) = (2 * fb).checked_sub(fa) else {
                continue;
            };
            let Some(cs) = index.get(&fc) else { continue };
            let start = cs.partition_point(|&c| c <= b);
            for &c in &cs[start..] {
                out.push(ApTriple {
                    a,
                    b,
                    c,
                    values: (fa, fb, fc),
                });
                if out.len() >= cap {
                    return out;
                }
            }
        }
        out
    };

    const BLOCK: u64 = 64;
    let mut out: Vec<ApTriple> = Vec::new();
    let mut lo = 1;
    while lo + 2 <= max_n && out.len() < max_results {
        let hi = (lo + BLOCK).min(max_n - 1);
        let remaining = max_results - out.len();
        let block: Vec<Vec<ApTriple>> = (lo..hi)
            .into_par_iter()
            .map(|a| triples_from(a, remaining))
            .collect();
        out.extend(block.into_iter().flatten().take(remaining));
        lo = hi;
    }
    Ok(out)
}

fn check(family: &str, param: u64, func: SeqFunction, members: Vec<u64>) -> Result<FamilyCheck> {
    let values = members
        .iter()
        .map(|&n| func.at(n))
        .collect::<Result<Vec<_>>>()?;
    let valid = match values.as_slice() {
        [x, y] => x == y,
        [x, y, z] => 2 * y == x + z,
        _ => false,
    };
    Ok(FamilyCheck {
        family: family.to_string(),
        param,
        members,
        values,
        valid,
    })
}

fn range_error(what: &str, param: u64) -> Error {
    Error::Domain(format!("{what} instance at {param} leaves the 64-bit range"))
}

fn pow2(k: u64) -> Option<u64> {
    (k < 64).then(|| 1u64 << k)
}

/// σ⁺(2^(k−1)·9) = σ⁺(2^k·5), evaluated for one k ≥ 2.
pub fn check_collision_sigma_plus(k: u64) -> Result<FamilyCheck> {
    if k < 2 {
        return Err(Error::Domain("k must be at least 2".into()));
    }
    let m = pow2(k - 1).and_then(|v| v.checked_mul(9));
    let n = pow2(k).and_then(|v| v.checked_mul(5));
    let (Some(m), Some(n)) = (m, n) else {
        return Err(range_error("collision", k));
    };
    check("sigma_plus_collision", k, SeqFunction::SigmaPlus, vec![m, n])
}

/// φ⁺(7p) = φ⁺(9p) for a prime p outside {3, 7}.
pub fn check_collision_phi_plus(p: u64) -> Result<FamilyCheck> {
    if !is_prime(p) || p == 3 || p == 7 {
        return Err(Error::Domain(format!("{p} must be a prime other than 3 and 7")));
    }
    let n = p.checked_mul(9).ok_or_else(|| range_error("collision", p))?;
    check("phi_plus_collision", p, SeqFunction::PhiPlus, vec![7 * p, n])
}

/// σ⁺ values at (2^k, 2^(k+2), 2^k·5), for one k ≥ 1.
pub fn check_ap_sigma_plus(k: u64) -> Result<FamilyCheck> {
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let a = pow2(k);
    let b = pow2(k + 2);
    let c = pow2(k).and_then(|v| v.checked_mul(5));
    let (Some(a), Some(b), Some(c)) = (a, b, c) else {
        return Err(range_error("progression", k));
    };
    check("sigma_plus_ap", k, SeqFunction::SigmaPlus, vec![a, b, c])
}

/// The variant with c = 2^(k+1)·5, which is not a progression.
pub fn check_ap_sigma_plus_variant(k: u64) -> Result<FamilyCheck> {
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let a = pow2(k);
    let b = pow2(k + 2);
    let c = pow2(k + 1).and_then(|v| v.checked_mul(5));
    let (Some(a), Some(b), Some(c)) = (a, b, c) else {
        return Err(range_error("progression", k));
    };
    check("sigma_plus_ap_variant", k, SeqFunction::SigmaPlus, vec![a, b, c])
}

/// φ⁺ values at (3p, 7p, 11p) for a prime p ≥ 13.
pub fn check_ap_phi_plus(p: u64) -> Result<FamilyCheck> {
    if p < 13 || !is_prime(p) {
        return Err(Error::Domain(format!("{p} must be a prime at least 13")));
    }
    let c = p.checked_mul(11).ok_or_else(|| range_error("progression", p))?;
    check("phi_plus_ap", p, SeqFunction::PhiPlus, vec![3 * p, 7 * p, c])
}

fn into_group(check: FamilyCheck) -> Result<CollisionGroup> {
    if !check.valid {
        return Err(Error::Domain(format!(
            "{} at {} failed validation: {:?}",
            check.family, check.param, check.values
        )));
    }
    Ok(CollisionGroup {
        value: check.values[0],
        members: check.members,
    })
}

fn into_triple(check: FamilyCheck) -> Result<ApTriple> {
    if !check.valid {
        return Err(Error::Domain(format!(
            "{} at {} failed validation: {:?}",
            check.family, check.param, check.values
        )));
    }
    let v = &check.values;
    let m = &check.members;
    Ok(ApTriple {
        a: m[0],
        b: m[1],
        c: m[2],
        values: (v[0], v[1], v[2]),
    })
}

pub fn family_collision_sigma_plus(k: u64) -> Result<CollisionGroup> {
    into_group(check_collision_sigma_plus(k)?)
}

pub fn family_collision_phi_plus(p: u64) -> Result<CollisionGroup> {
    into_group(check_collision_phi_plus(p)?)
}

pub fn family_ap_sigma_plus(k: u64) -> Result<ApTriple> {
    into_triple(check_ap_sigma_plus(k)?)
}

pub fn family_ap_phi_plus(p: u64) -> Result<ApTriple> {
    into_triple(check_ap_phi_plus(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collision_scan_examples() {
        let g = find_collisions(SeqFunction::SigmaPlus, 20).unwrap();
        let g56 = g.iter().find(|g| g.value == 56).unwrap();
        assert!(g56.members.contains(&18) && g56.members.contains(&20));
        let g = find_collisions(SeqFunction::PhiPlus, 45).unwrap();
        let g35 = g.iter().find(|g| g.value == 35).unwrap();
        assert!(g35.members.contains(&35) && g35.members.contains(&45));
        assert!(find_collisions(SeqFunction::PhiPlus, 3).unwrap().is_empty());
        assert!(g.windows(2).all(|w| w[0].value < w[1].value));
    }

    #[test]
    fn collision_families() {
        let g = family_collision_sigma_plus(2).unwrap();
        assert_eq!((g.members.as_slice(), g.value), (&[18, 20][..], 56));
        let g = family_collision_sigma_plus(3).unwrap();
        assert_eq!((g.members.as_slice(), g.value), (&[36, 40][..], 112));
        let g = family_collision_sigma_plus(10).unwrap();
        assert_eq!((g.members.as_slice(), g.value), (&[4608, 5120][..], 14336));
        assert!(family_collision_sigma_plus(1).is_err());
        assert!(family_collision_sigma_plus(62).is_err());

        let g = family_collision_phi_plus(5).unwrap();
        assert_eq!((g.members.as_slice(), g.value), (&[35, 45][..], 35));
        let g = family_collision_phi_plus(2).unwrap();
        assert_eq!((g.members.as_slice(), g.value), (&[14, 18][..], 14));
        let g = family_collision_phi_plus(13).unwrap();
        assert_eq!((g.members.as_slice(), g.value), (&[91, 117][..], 91));
        assert!(family_collision_phi_plus(3).is_err());
        assert!(family_collision_phi_plus(7).is_err());
        assert!(family_collision_phi_plus(9).is_err());
    }

    #[test]
    fn ap_families() {
        let t = family_ap_sigma_plus(1).unwrap();
        assert_eq!(((t.a, t.b, t.c), t.values), ((2, 8, 10), (4, 16, 28)));
        let t = family_ap_sigma_plus(2).unwrap();
        assert_eq!(((t.a, t.b, t.c), t.values), ((4, 16, 20), (8, 32, 56)));
        let t = family_ap_sigma_plus(5).unwrap();
        assert_eq!(((t.a, t.b, t.c), t.values), ((32, 128, 160), (64, 256, 448)));
        let v = check_ap_sigma_plus_variant(1).unwrap();
        assert_eq!(v.values, [4, 16, 56]);
        assert!(!v.valid);

        let t = family_ap_phi_plus(13).unwrap();
        assert_eq!(((t.a, t.b, t.c), t.values), ((39, 91, 143), (39, 91, 143)));
        let t = family_ap_phi_plus(17).unwrap();
        assert_eq!(((t.a, t.b, t.c), t.values), ((51, 119, 187), (51, 119, 187)));
        assert!(family_ap_phi_plus(11).is_err());
        assert!(family_ap_phi_plus(15).is_err());
    }

    #[test]
    fn ap_scan_examples() {
        let t = find_3term_aps(SeqFunction::SigmaPlus, 10, 100).unwrap();
        assert!(t.iter().any(|t| (t.a, t.b, t.c) == (2, 8, 10)));
        let t = find_3term_aps(SeqFunction::PhiPlus, 143, usize::MAX).unwrap();
        assert!(t.iter().any(|t| (t.a, t.b, t.c) == (39, 91, 143)));
        assert!(find_3term_aps(SeqFunction::SigmaPlus, 3, 100).unwrap().is_empty());
        assert!(find_3term_aps(SeqFunction::SigmaPlus, 2, 100).is_err());
    }

    #[test]
    fn ap_scan_truncates_to_a_prefix() {
        let all = find_3term_aps(SeqFunction::PhiPlus, 300, usize::MAX).unwrap();
        let some = find_3term_aps(SeqFunction::PhiPlus, 300, 57).unwrap();
        assert_eq!(some.as_slice(), &all[..57]);
        let mut sorted = all.clone();
        sorted.sort_by_key(|t| (t.a, t.b, t.c));
        assert_eq!(sorted, all);
    }

    #[test]
    fn function_names() {
        assert_eq!("sigma-plus".parse::<SeqFunction>().unwrap(), SeqFunction::SigmaPlus);
        assert_eq!("phi_plus".parse::<SeqFunction>().unwrap(), SeqFunction::PhiPlus);
        assert!("sigma".parse::<SeqFunction>().is_err());
    }
}
