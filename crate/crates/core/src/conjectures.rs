//! Evidence for the representation conjectures f(n) = 2p − q, the prime
//! ascent question, and the φ⁺ ascent lemma over A005382.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorize::{build_spf_sieve, is_prime, SieveTable};
use crate::report::Witness;
use crate::sequences::SeqFunction;

/// One solution of f(n) = 2p − q with p prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationHit {
    pub q: u64,
    pub n: u64,
    pub p: u128,
    pub func: SeqFunction,
}

/// One `<index> <value>` line of an OEIS b-file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BFileEntry {
    pub index: i64,
    pub value: u64,
}

fn sieve_for(max: u64) -> Result<SieveTable> {
    build_spf_sieve(max.max(2)).map_err(|e| Error::Resource(e.to_string()))
}

fn prime_u128(v: u128) -> bool {
    u64::try_from(v).is_ok_and(is_prime)
}

/// Every n ≤ `max_n` for which (f(n) + q)/2 is a prime p, ascending by n.
pub fn conjecture_evidence(
    func: SeqFunction,
    q: u64,
    max_n: u64,
) -> Result<Vec<RepresentationHit>> {
    if q < 3 || !is_prime(q) {
        return Err(Error::Domain(format!("q = {q} must be an odd prime")));
    }
    let sieve = sieve_for(max_n)?;
    let hits: Vec<Result<Option<RepresentationHit>>> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let v = func.eval(&sieve.factorize(n).expect("within sieve"))?;
            let twice = v + q as u128;
            // 2p = f(n) + q needs f(n) odd
            if twice % 2 != 0 {
                return Ok(None);
            }
            let p = twice / 2;
            Ok(prime_u128(p).then_some(RepresentationHit { q, n, p, func }))
        })
        .collect();
    hits.into_iter().filter_map(Result::transpose).collect()
}

/// Outcome of the φ⁺(2p − 1) < φ⁺(2p) check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AscentCheck {
    /// Primes 2 < p ≤ max_p with 2p − 1 prime.
    pub checked: u64,
    pub violations: Vec<Witness>,
}

/// Primes p ≤ `max_p` with 2p − 1 also prime, ascending (p = 2 included).
pub fn a005382_terms(max_p: u64) -> Result<Vec<u64>> {
    let sieve = sieve_for(2 * max_p)?;
    Ok(sieve
        .primes()
        .take_while(|&p| p <= max_p)
        .filter(|&p| sieve.is_prime(2 * p - 1))
        .collect())
}

/// Checks φ⁺(q) < φ⁺(q + 1) for q = 2p − 1 over every qualifying prime
/// 2 < p ≤ `max_p`. When a b-file is given, its terms up to `max_p` must
/// match the locally computed membership exactly.
pub fn a005382_check(max_p: u64, bfile: Option<&[BFileEntry]>) -> Result<AscentCheck> {
    if max_p < 3 {
        return Err(Error::Domain("max_p must be at least 3".into()));
    }
    let terms = a005382_terms(max_p)?;
    if let Some(entries) = bfile {
        cross_check(&terms, entries, max_p)?;
    }
    let sieve = sieve_for(2 * max_p)?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for &p in terms.iter().filter(|&&p| p > 2) {
        checked += 1;
        let q = 2 * p - 1;
        let fq = sieve.factorize(q).expect("within sieve");
        let fq1 = sieve.factorize(q + 1).expect("within sieve");
        let (lo, hi) = (crate::arithfun::phi_plus(&fq), crate::arithfun::phi_plus(&fq1));
        if lo >= hi {
            violations.push(
                Witness::new("a005382_ascent", fq)
                    .with("p", p)
                    .with("phi_plus_q", lo)
                    .with("phi_plus_q_plus_1", hi),
            );
        }
    }
    Ok(AscentCheck {
        checked,
        violations,
    })
}

fn cross_check(terms: &[u64], entries: &[BFileEntry], max_p: u64) -> Result<()> {
    let mismatch = |e: &BFileEntry, message: String| Error::DataMismatch {
        index: e.index as u64,
        value: e.value,
        message,
    };
    let Some(first) = entries.first() else {
        return Ok(());
    };
    let covered = entries.iter().take_while(|e| e.value <= max_p);
    for (pos, e) in covered.enumerate() {
        if e.index != first.index + pos as i64 {
            return Err(mismatch(e, format!("expected index {}", first.index + pos as i64)));
        }
        match terms.get(pos) {
            Some(&t) if t == e.value => {}
            Some(&t) => return Err(mismatch(e, format!("expected term {t}"))),
            None => return Err(mismatch(e, "no such term up to max_p".into())),
        }
    }
    // The b-file may stop before max_p; everything it does list must be complete.
    let listed = entries.iter().filter(|e| e.value <= max_p).count();
    if listed < terms.len() {
        if let Some(e) = entries.get(listed) {
            return Err(mismatch(
                e,
                format!("term {} is missing before this entry", terms[listed]),
            ));
        }
    }
    Ok(())
}

/// Primes p ≤ `max_p` with φ⁺(p) < φ⁺(p + 1), ascending.
pub fn ascent_scan(max_p: u64) -> Result<Vec<u64>> {
    if max_p < 2 {
        return Err(Error::Domain("max_p must be at least 2".into()));
    }
    let sieve = sieve_for(max_p + 1)?;
    let primes: Vec<u64> = sieve.primes().take_while(|&p| p <= max_p).collect();
    Ok(primes
        .into_par_iter()
        .filter(|&p| {
            let next = sieve.factorize(p + 1).expect("within sieve");
            p < crate::arithfun::phi_plus(&next)
        })
        .collect())
}

/// Parses an OEIS b-file.
///
/// Lines are `<index> <value>` with optional surrounding whitespace; blank
/// lines and `#` comments are skipped; LF and CRLF both work. Indices must
/// strictly increase.
pub fn parse_bfile(text: &[u8]) -> Result<Vec<BFileEntry>> {
    let text = std::str::from_utf8(text).map_err(|e| Error::Parse {
        line: 0,
        message: format!("not UTF-8: {e}"),
    })?;
    let mut out: Vec<BFileEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: &str| Error::Parse {
            line: line_no,
            message: format!("{message}: `{line}`"),
        };
        let mut fields = line.split_whitespace();
        let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad("expected `<index> <value>`"));
        };
        let index: i64 = index.parse().map_err(|_| bad("bad index"))?;
        let value: u64 = value.parse().map_err(|_| bad("bad value"))?;
        if let Some(prev) = out.last() {
            if index <= prev.index {
                return Err(Error::Format {
                    line: line_no,
                    message: format!("index {index} does not follow {}", prev.index),
                });
            }
        }
        out.push(BFileEntry { index, value });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(pairs: &[(i64, u64)]) -> Vec<BFileEntry> {
        pairs
            .iter()
            .map(|&(index, value)| BFileEntry { index, value })
            .collect()
    }

    #[test]
    fn evidence_examples() {
        let hits = conjecture_evidence(SeqFunction::SigmaPlus, 3, 20).unwrap();
        let pairs: Vec<(u64, u128)> = hits.iter().map(|h| (h.n, h.p)).collect();
        assert_eq!(pairs, [(1, 2), (5, 5), (15, 19), (17, 11)]);
        let hits = conjecture_evidence(SeqFunction::PhiPlus, 3, 10).unwrap();
        assert!(hits.iter().any(|h| (h.n, h.p) == (4, 3)));
        assert!(conjecture_evidence(SeqFunction::SigmaPlus, 4, 10).is_err());
        assert!(conjecture_evidence(SeqFunction::SigmaPlus, 2, 10).is_err());
        assert!(conjecture_evidence(SeqFunction::SigmaPlus, 9, 10).is_err());
    }

    #[test]
    fn evidence_grows_with_bound() {
        let mut last = 0;
        for b in [10, 100, 1000, 5000] {
            let hits = conjecture_evidence(SeqFunction::SigmaPlus, 5, b).unwrap();
            assert!(hits.len() >= last);
            for h in &hits {
                assert_eq!(SeqFunction::SigmaPlus.at(h.n).unwrap() + 5, 2 * h.p);
            }
            last = hits.len();
        }
    }

    #[test]
    fn a005382_examples() {
        assert_eq!(
            a005382_terms(400).unwrap(),
            [2, 3, 7, 19, 31, 37, 79, 97, 139, 157, 199, 211, 229, 271, 307, 331, 337, 367, 379]
        );
        let check = a005382_check(10_000, None).unwrap();
        assert!(check.violations.is_empty());
        assert_eq!(check.checked as usize, a005382_terms(10_000).unwrap().len() - 1);
    }

    #[test]
    fn bfile_cross_check() {
        let good = entries(&[(1, 2), (2, 3), (3, 7), (4, 19), (5, 31)]);
        assert!(a005382_check(20, Some(&good)).is_ok());
        let wrong = entries(&[(1, 2), (2, 3), (3, 5)]);
        match a005382_check(20, Some(&wrong)) {
            Err(Error::DataMismatch { index: 3, value: 5, .. }) => {}
            other => panic!("{other:?}"),
        }
        let gap = entries(&[(1, 2), (2, 3), (4, 7)]);
        assert!(matches!(
            a005382_check(20, Some(&gap)),
            Err(Error::DataMismatch { index: 4, .. })
        ));
        let missing = entries(&[(1, 2), (2, 3), (3, 31)]);
        assert!(matches!(
            a005382_check(20, Some(&missing)),
            Err(Error::DataMismatch { index: 3, value: 31, .. })
        ));
    }

    #[test]
    fn ascent_examples() {
        let a = ascent_scan(30).unwrap();
        assert_eq!(a, [2, 5, 13, 29]);
        let a = ascent_scan(10_000).unwrap();
        for p in a005382_terms(5000).unwrap().into_iter().filter(|&p| p > 2) {
            assert!(a.binary_search(&(2 * p - 1)).is_ok(), "{p}");
        }
    }

    #[test]
    fn bfile_parsing() {
        assert_eq!(
            parse_bfile(b"1 2\n2 3\n3 7\n").unwrap(),
            entries(&[(1, 2), (2, 3), (3, 7)])
        );
        assert_eq!(
            parse_bfile(b"# comment\n1 2\n").unwrap(),
            entries(&[(1, 2)])
        );
        assert_eq!(
            parse_bfile(b"  1 2  \r\n\r\n2\t3\r\n").unwrap(),
            entries(&[(1, 2), (2, 3)])
        );
        assert!(matches!(
            parse_bfile(b"1 2\nbogus\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_bfile(b"1 2\n1 3\n"),
            Err(Error::Format { line: 2, .. })
        ));
        assert!(matches!(
            parse_bfile(b"1 2 3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
