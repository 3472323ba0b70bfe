//! Deterministic range scans.
//!
//! The range is cut into fixed-size chunks that workers process against one
//! shared, read-only sieve. Each chunk owns its output; results are merged
//! by chunk index, so the report does not depend on the worker count.

use std::time::Instant;

use rayon::prelude::*;

use crate::arithfun::{phi, phi_plus, schemmel2, sigma, sigma_plus};
use crate::error::{Error, Result};
use crate::factorize::{build_spf_sieve_capped, sieve_cap, Factorization, SieveTable};
use crate::predicates::{divides, is_deaconescu, is_lehmer, ConditionId};
pub use crate::report::{ScanReport, Witness, WitnessValue};

pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;

/// Note attached to scans of the σ shift condition.
pub const SIGMA_SHIFT_NOTE: &str = "tests n+1 | sigma(n); \
     use condition sigma-shift-literal for n+1 | sigma(n+1)";

pub const SIGMA_SHIFT_LITERAL_NOTE: &str = "tests n+1 | sigma(n+1), \
     i.e. n+1 is multiperfect";

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub composite_only: bool,
    pub workers: usize,
    pub chunk_size: u64,
    /// Sieve size to build; raised to what the range needs.
    pub sieve_limit: Option<u64>,
    pub sieve_cap: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            composite_only: false,
            workers: 1,
            chunk_size: DEFAULT_CHUNK_SIZE,
            sieve_limit: None,
            sieve_cap: sieve_cap(),
        }
    }
}

/// Scans `[min, max]` for `condition` with default chunking and sieve cap.
pub fn scan_range(
    condition: ConditionId,
    min: u64,
    max: u64,
    composite_only: bool,
    workers: usize,
) -> Result<ScanReport> {
    let opts = ScanOptions {
        composite_only,
        workers,
        ..ScanOptions::default()
    };
    scan_range_with(condition, min, max, &opts)
}

#[derive(Default)]
struct ChunkOutput {
    checked: u64,
    witnesses: Vec<Witness>,
    overflow: Vec<u64>,
}

pub fn scan_range_with(
    condition: ConditionId,
    min: u64,
    max: u64,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    if min < 2 || min > max {
        return Err(Error::Domain(format!(
            "scan range [{min}, {max}] must satisfy 2 <= min <= max"
        )));
    }
    if opts.workers == 0 || opts.chunk_size == 0 {
        return Err(Error::Domain("workers and chunk size must be positive".into()));
    }
    let needed = if condition.reads_successor() {
        max.checked_add(1)
            .ok_or_else(|| Error::Resource("max + 1 exceeds 64 bits".into()))?
    } else {
        max
    };
    let limit = opts.sieve_limit.unwrap_or(needed).max(needed);
    if limit > opts.sieve_cap {
        return Err(Error::Resource(format!(
            "sieve limit {limit} exceeds the cap {} (set NT_SIEVE_CAP to raise it)",
            opts.sieve_cap
        )));
    }
    let started = Instant::now();
    let sieve = build_spf_sieve_capped(limit, opts.sieve_cap)
        .map_err(|e| Error::Resource(e.to_string()))?;

    let chunks = chunk_bounds(min, max, opts.chunk_size);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    let outputs: Vec<ChunkOutput> = pool.install(|| {
        chunks
            .par_iter()
            .map(|&(lo, hi)| scan_chunk(condition, lo, hi, opts.composite_only, &sieve))
            .collect()
    });

    let mut report = ScanReport::new("scan", (min, max))
        .param("condition", condition.name())
        .param("composite_only", opts.composite_only);
    for out in outputs {
        report.total_checked += out.checked;
        report.witnesses.extend(out.witnesses);
        report.skipped_overflow.extend(out.overflow);
    }
    match condition {
        ConditionId::SigmaShift => report.notes.push(SIGMA_SHIFT_NOTE.into()),
        ConditionId::SigmaShiftLiteral => report.notes.push(SIGMA_SHIFT_LITERAL_NOTE.into()),
        _ => {}
    }
    report.elapsed_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}

/// Contiguous, non-overlapping `[lo, hi]` pieces covering `[min, max]`.
fn chunk_bounds(min: u64, max: u64, size: u64) -> Vec<(u64, u64)> {
    let mut chunks = Vec::new();
    let mut lo = min;
    loop {
        let hi = lo.saturating_add(size - 1).min(max);
        chunks.push((lo, hi));
        if hi == max {
            break;
        }
        lo = hi + 1;
    }
    assert!(
        chunks.first().map(|c| c.0) == Some(min)
            && chunks.last().map(|c| c.1) == Some(max)
            && chunks.windows(2).all(|w| w[0].1 + 1 == w[1].0),
        "chunking must tile [{min}, {max}] exactly"
    );
    chunks
}

fn scan_chunk(
    condition: ConditionId,
    lo: u64,
    hi: u64,
    composite_only: bool,
    sieve: &SieveTable,
) -> ChunkOutput {
    let mut out = ChunkOutput::default();
    for n in lo..=hi {
        if composite_only && sieve.is_prime(n) {
            continue;
        }
        out.checked += 1;
        let f = sieve.factorize(n).expect("n within sieve");
        match evaluate(condition, f, sieve) {
            Ok(Some(w)) => out.witnesses.push(w),
            Ok(None) => {}
            Err(Error::Overflow { .. }) => out.overflow.push(n),
            Err(e) => unreachable!("scan evaluation cannot fail with {e}"),
        }
    }
    out
}

/// Tests one n; `Some` carries the values that prove the hit.
pub fn evaluate(
    condition: ConditionId,
    f: Factorization,
    sieve: &SieveTable,
) -> Result<Option<Witness>> {
    let n = f.n() as u128;
    let tag = condition.tag();
    Ok(match condition {
        ConditionId::Lehmer => {
            let phi_v = phi(&f) as u128;
            is_lehmer(&f).then(|| Witness::new(tag, f).with("phi", phi_v).with("k", (n - 1) / phi_v))
        }
        ConditionId::Deaconescu => {
            let s2 = schemmel2(&f) as u128;
            let phi_v = phi(&f) as u128;
            is_deaconescu(&f).then(|| Witness::new(tag, f).with("schemmel2", s2).with("phi", phi_v))
        }
        ConditionId::SigmaShift => {
            let s = sigma(&f)?;
            (s % (n + 1) == 0).then(|| Witness::new(tag, f).with("sigma", s).with("k", s / (n + 1)))
        }
        ConditionId::SigmaPlusShift => {
            let s = sigma_plus(&f)?;
            (s % (n + 1) == 0)
                .then(|| Witness::new(tag, f).with("sigma_plus", s).with("k", s / (n + 1)))
        }
        ConditionId::PhiPlusShift => {
            let pp = phi_plus(&f) as u128;
            divides(pp, n - 1).then(|| Witness::new(tag, f).with("phi_plus", pp).with("k", (n - 1) / pp))
        }
        ConditionId::SigmaShiftLiteral => {
            let m = n + 1;
            let fm = sieve
                .factorize(m as u64)
                .ok_or_else(|| Error::Domain(format!("{m} lies beyond the sieve")))?;
            let s = sigma(&fm)?;
            (s % m == 0).then(|| {
                Witness::new(tag, f)
                    .with("m", m)
                    .with("sigma_m", s)
                    .with("k", s / m)
            })
        }
    })
}
