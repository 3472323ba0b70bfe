//! Command-line front end: argument parsing, exit codes and report rendering.
//!
//! Exit codes: 0 completed as expected, 1 observation deviates from the
//! expected outcome, 2 usage error, 3 overflow or I/O failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::arithfun::ArithProfile;
use crate::conjectures::{a005382_check, ascent_scan, conjecture_evidence, parse_bfile};
use crate::error::Error;
use crate::factorize::{
    build_spf_sieve, factorize_seeded, is_prime, sieve_cap, DEFAULT_SEED,
};
use crate::predicates::ConditionId;
use crate::report::{ScanReport, Witness};
use crate::scan::{scan_range_with, ScanOptions, DEFAULT_CHUNK_SIZE};
use crate::sequences::{self, FamilyCheck, SeqFunction};
use crate::theorems::{
    verify_theorem_counted, TheoremId, KNOWN_PHI_PLUS_LOWER_VIOLATIONS,
    KNOWN_PHI_PLUS_LOWER_VIOLATIONS_BOUND,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DEVIATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

const DEFAULT_SIEVE_FLOOR: u64 = 1_000_000;

pub const AP_VARIANT_NOTE: &str = "sigma-plus progression family uses c = 2^k*5; \
     the variant c = 2^(k+1)*5 is evaluated alongside and is not a progression";

pub const PHI_PLUS_BOUNDS_NOTE: &str = "the lower bound prod(1+1/p^2) <= (n-1)/phi+(n) \
     fails at n = 4 (5/4 > 1); the per-prime-power step holds but the passage \
     from '< n' to '<= n-1' does not when the left side is not an integer";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "ntplus", version, about = "sigma+, phi+ and friends: evaluators and exhaustive scans")]
pub struct Cli {
    /// Seed for randomized factor splitting.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every function value for one n.
    Eval {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Factorize through a sieve of this size when it covers n.
        #[arg(long)]
        sieve_limit: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Test a divisibility condition over a range.
    Scan {
        #[arg(long)]
        condition: String,
        #[arg(long, default_value_t = 2)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long)]
        composite_only: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE)]
        chunk_size: u64,
        #[arg(long)]
        sieve_limit: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Exhaustively check one theorem's hypothesis class.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 100_000)]
        max: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Group indices by equal sigma+ or phi+ value.
    Collisions {
        #[arg(long)]
        function: String,
        #[arg(long)]
        max: Option<u64>,
        /// Family parameters, e.g. `k=2..20` or `p=2..100`.
        #[arg(long)]
        families: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Find index triples whose values form a 3-term progression.
    Aps {
        #[arg(long)]
        function: String,
        #[arg(long)]
        max: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
        /// Family parameters, e.g. `k=1..5` or `p=13..100`.
        #[arg(long)]
        families: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Collect n with f(n) = 2p - q, p prime.
    Conjecture {
        #[arg(long, default_value = "sigma-plus")]
        function: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        max: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Check phi+(2p-1) < phi+(2p) over primes p with 2p-1 prime.
    Oeis {
        /// Offline OEIS b-file for A005382.
        #[arg(long)]
        bfile: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        max_p: u64,
        #[command(flatten)]
        output: Output,
    },
    /// List primes p with phi+(p) < phi+(p+1).
    Ascent {
        #[arg(long)]
        max_p: u64,
        #[command(flatten)]
        output: Output,
    },
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Bounds { .. } | Error::Unknown { .. } => EXIT_USAGE,
            Error::DataMismatch { .. } => EXIT_DEVIATION,
            Error::Overflow { .. }
            | Error::Parse { .. }
            | Error::Format { .. }
            | Error::Resource(_)
            | Error::Io { .. } => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `args` (program name first), runs the command, returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Eval {
            n,
            sieve_limit,
            output,
        } => {
            let sieve = sieve_limit
                .filter(|&l| l >= n)
                .map(build_spf_sieve)
                .transpose()?;
            let f = factorize_seeded(n, sieve.as_ref(), cli.seed)?;
            let profile = ArithProfile::from_factorization(f)?;
            emit(&output, &render_profile(&profile, output.format)?)?;
            Ok(EXIT_OK)
        }
        Command::Scan {
            condition,
            min,
            max,
            composite_only,
            workers,
            chunk_size,
            sieve_limit,
            output,
        } => {
            let condition: ConditionId = condition.parse()?;
            let cap = sieve_cap();
            let opts = ScanOptions {
                composite_only,
                workers,
                chunk_size,
                sieve_limit: Some(sieve_limit.unwrap_or(max.max(DEFAULT_SIEVE_FLOOR.min(cap)))),
                sieve_cap: cap,
            };
            let report = scan_range_with(condition, min, max, &opts)?;
            emit(&output, &render_report(&report, output.format)?)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            theorem,
            max,
            output,
        } => {
            let id: TheoremId = theorem.parse()?;
            let (report, code) = verify_report(id, max)?;
            emit(&output, &render_report(&report, output.format)?)?;
            Ok(code)
        }
        Command::Collisions {
            function,
            max,
            families,
            output,
        } => {
            let func: SeqFunction = function.parse()?;
            let started = Instant::now();
            let mut report = ScanReport::new("collisions", (1, max.unwrap_or(0)))
                .param("function", func.name());
            if let Some(max) = max {
                report.collisions = sequences::find_collisions(func, max)?;
                report.total_checked = max;
                report = report.param("max", max);
            }
            if let Some(spec) = &families {
                report = report.param("families", spec);
                report.families = collision_families(func, spec)?;
            }
            if max.is_none() && families.is_none() {
                return Err(usage("give --max, --families, or both"));
            }
            report.elapsed_ms = started.elapsed().as_millis() as u64;
            let code = families_code(&report.families);
            emit(&output, &render_report(&report, output.format)?)?;
            Ok(code)
        }
        Command::Aps {
            function,
            max,
            limit,
            families,
            output,
        } => {
            let func: SeqFunction = function.parse()?;
            let started = Instant::now();
            let mut report =
                ScanReport::new("aps", (1, max.unwrap_or(0))).param("function", func.name());
            if let Some(max) = max {
                report.triples = sequences::find_3term_aps(func, max, limit)?;
                report.total_checked = max;
                report = report.param("max", max).param("limit", limit);
                if report.triples.len() == limit {
                    report.notes.push(format!("output truncated to the first {limit} triples"));
                }
            }
            if let Some(spec) = &families {
                report = report.param("families", spec);
                report.families = ap_families(func, spec)?;
                if func == SeqFunction::SigmaPlus {
                    report.notes.push(AP_VARIANT_NOTE.into());
                }
            }
            if max.is_none() && families.is_none() {
                return Err(usage("give --max, --families, or both"));
            }
            report.elapsed_ms = started.elapsed().as_millis() as u64;
            let code = families_code(&report.families);
            emit(&output, &render_report(&report, output.format)?)?;
            Ok(code)
        }
        Command::Conjecture {
            function,
            q,
            max,
            output,
        } => {
            let func: SeqFunction = function.parse()?;
            let started = Instant::now();
            let hits = conjecture_evidence(func, q, max)?;
            let mut report = ScanReport::new("conjecture", (1, max))
                .param("function", func.name())
                .param("q", q);
            report.total_checked = max;
            let tag = format!("{}_representation", func.name().replace('-', "_"));
            for h in hits {
                let f = factorize_seeded(h.n, None, cli.seed)?;
                report.witnesses.push(
                    Witness::new(tag.as_str(), f)
                        .with("p", h.p)
                        .with("q", h.q)
                        .with("value", 2 * h.p - h.q as u128),
                );
            }
            report.elapsed_ms = started.elapsed().as_millis() as u64;
            emit(&output, &render_report(&report, output.format)?)?;
            Ok(EXIT_OK)
        }
        Command::Oeis {
            bfile,
            max_p,
            output,
        } => {
            let started = Instant::now();
            let entries = match &bfile {
                Some(path) => {
                    let bytes = std::fs::read(path).map_err(|e| Error::Io {
                        path: path.clone(),
                        message: e.to_string(),
                    })?;
                    Some(parse_bfile(&bytes)?)
                }
                None => None,
            };
            let check = a005382_check(max_p, entries.as_deref())?;
            let mut report = ScanReport::new("oeis", (3, max_p)).param("max_p", max_p);
            if let Some(path) = &bfile {
                report = report.param("bfile", path.display());
            }
            report.total_checked = check.checked;
            report.witnesses = check.violations;
            report.elapsed_ms = started.elapsed().as_millis() as u64;
            let code = if report.witnesses.is_empty() {
                EXIT_OK
            } else {
                EXIT_DEVIATION
            };
            emit(&output, &render_report(&report, output.format)?)?;
            Ok(code)
        }
        Command::Ascent { max_p, output } => {
            let started = Instant::now();
            let primes = ascent_scan(max_p)?;
            let mut report = ScanReport::new("ascent", (2, max_p)).param("max_p", max_p);
            report.total_checked = (2..=max_p).filter(|&p| is_prime(p)).count() as u64;
            for p in primes {
                let next = factorize_seeded(p + 1, None, cli.seed)?;
                report.witnesses.push(
                    Witness::new("phi_plus_ascent", factorize_seeded(p, None, cli.seed)?)
                        .with("phi_plus_p", p)
                        .with("phi_plus_p_plus_1", crate::arithfun::phi_plus(&next)),
                );
            }
            report.elapsed_ms = started.elapsed().as_millis() as u64;
            emit(&output, &render_report(&report, output.format)?)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs a verifier and decides whether its observation matches expectation.
pub fn verify_report(id: TheoremId, max: u64) -> Result<(ScanReport, i32), Error> {
    let started = Instant::now();
    let (checked, witnesses) = verify_theorem_counted(id, max)?;
    let mut report = ScanReport::new("verify", (2, max)).param("theorem", id.name());
    report.total_checked = checked;
    let observed: Vec<u64> = witnesses.iter().map(|w| w.n).collect();
    let expected: Vec<u64> = match id {
        TheoremId::P2qSigma => {
            report
                .notes
                .push("witnesses are the solutions (p, q) of sigma(p^2 q) = 2(p^2 q + 1)".into());
            if max >= 20 {
                vec![20]
            } else {
                vec![]
            }
        }
        TheoremId::PhiPlusBounds => {
            report.notes.push(PHI_PLUS_BOUNDS_NOTE.into());
            if max > KNOWN_PHI_PLUS_LOWER_VIOLATIONS_BOUND {
                report.notes.push(format!(
                    "expected violation set is established only up to {KNOWN_PHI_PLUS_LOWER_VIOLATIONS_BOUND}"
                ));
            }
            KNOWN_PHI_PLUS_LOWER_VIOLATIONS
                .iter()
                .copied()
                .filter(|&n| n <= max)
                .collect()
        }
        _ => vec![],
    };
    let upper_ok = witnesses
        .iter()
        .all(|w| w.values.get("upper_ok") != Some(&crate::report::WitnessValue::Flag(false)));
    report.witnesses = witnesses;
    report.elapsed_ms = started.elapsed().as_millis() as u64;
    let code = if observed == expected && upper_ok {
        EXIT_OK
    } else {
        report
            .notes
            .push(format!("expected {expected:?}, observed {observed:?}"));
        EXIT_DEVIATION
    };
    Ok((report, code))
}

/// Parses `k=A..B`, `p=A..B` or `A..B` (inclusive); a lone number is A..A.
pub fn parse_family_range(spec: &str) -> Result<(u64, u64), Error> {
    let body = spec.split_once('=').map_or(spec, |(_, r)| r).trim();
    let bad = || Error::Domain(format!("bad family range `{spec}`; expected e.g. k=1..5"));
    let (lo, hi) = match body.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (body, body),
    };
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn collision_families(func: SeqFunction, spec: &str) -> Result<Vec<FamilyCheck>, Error> {
    let (lo, hi) = parse_family_range(spec)?;
    match func {
        SeqFunction::SigmaPlus => (lo.max(2)..=hi)
            .map(sequences::check_collision_sigma_plus)
            .collect(),
        SeqFunction::PhiPlus => (lo..=hi)
            .filter(|&p| is_prime(p) && p != 3 && p != 7)
            .map(sequences::check_collision_phi_plus)
            .collect(),
    }
}

fn ap_families(func: SeqFunction, spec: &str) -> Result<Vec<FamilyCheck>, Error> {
    let (lo, hi) = parse_family_range(spec)?;
    match func {
        SeqFunction::SigmaPlus => {
            let mut out = Vec::new();
            for k in lo.max(1)..=hi {
                out.push(sequences::check_ap_sigma_plus(k)?);
                if let Ok(v) = sequences::check_ap_sigma_plus_variant(k) {
                    out.push(v);
                }
            }
            Ok(out)
        }
        SeqFunction::PhiPlus => (lo.max(13)..=hi)
            .filter(|&p| is_prime(p))
            .map(sequences::check_ap_phi_plus)
            .collect(),
    }
}

/// Exit code for a family run: the variant is expected to fail, the rest to hold.
fn families_code(families: &[FamilyCheck]) -> i32 {
    let ok = families
        .iter()
        .all(|f| f.valid != f.family.ends_with("_variant"));
    if ok {
        EXIT_OK
    } else {
        EXIT_DEVIATION
    }
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    let io = |path: PathBuf, e: std::io::Error| Error::Io {
        path,
        message: e.to_string(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| io(path.clone(), e))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io(PathBuf::from("<stdout>"), e))?,
    }
    Ok(())
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: PathBuf::from("<csv>"),
        message: e.to_string(),
    }
}

pub fn render_profile(p: &ArithProfile, format: OutputFormat) -> Result<String, Error> {
    Ok(match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(p).map_err(csv_error)?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "n",
                "factorization",
                "sigma",
                "phi",
                "schemmel2",
                "sigma_plus",
                "phi_plus",
                "abundancy",
                "omega",
            ])
            .map_err(csv_error)?;
            w.write_record([
                p.n.to_string(),
                p.factorization.to_string(),
                p.sigma.to_string(),
                p.phi.to_string(),
                p.schemmel2.to_string(),
                p.sigma_plus.to_string(),
                p.phi_plus.to_string(),
                p.abundancy.to_string(),
                p.omega.to_string(),
            ])
            .map_err(csv_error)?;
            String::from_utf8(w.into_inner().map_err(csv_error)?).map_err(csv_error)?
        }
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "n            {}", p.n);
            let _ = writeln!(s, "factors      {}", p.factorization);
            let _ = writeln!(s, "sigma        {}", p.sigma);
            let _ = writeln!(s, "phi          {}", p.phi);
            let _ = writeln!(s, "schemmel2    {}", p.schemmel2);
            let _ = writeln!(s, "sigma_plus   {}", p.sigma_plus);
            let _ = writeln!(s, "phi_plus     {}", p.phi_plus);
            let _ = writeln!(
                s,
                "abundancy    {} (~{:.6})",
                p.abundancy,
                p.abundancy.approx()
            );
            let _ = writeln!(s, "omega        {}", p.omega);
            s
        }
    })
}

pub fn render_report(r: &ScanReport, format: OutputFormat) -> Result<String, Error> {
    Ok(match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(r).map_err(csv_error)?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => report_csv(r)?,
        OutputFormat::Text => report_text(r),
    })
}

/// One witness per row: `n`, `condition`, then every value name in sorted order.
fn report_csv(r: &ScanReport) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if !r.triples.is_empty() {
        w.write_record(["a", "b", "c", "fa", "fb", "fc"]).map_err(csv_error)?;
        for t in &r.triples {
            let (x, y, z) = t.values;
            w.write_record([t.a, t.b, t.c].map(|v| v.to_string()).into_iter().chain(
                [x, y, z].map(|v| v.to_string()),
            ))
            .map_err(csv_error)?;
        }
    } else if !r.collisions.is_empty() {
        w.write_record(["value", "members"]).map_err(csv_error)?;
        for g in &r.collisions {
            let members: Vec<String> = g.members.iter().map(u64::to_string).collect();
            w.write_record([g.value.to_string(), members.join(" ")])
                .map_err(csv_error)?;
        }
    } else if !r.families.is_empty() && r.witnesses.is_empty() {
        w.write_record(["family", "param", "members", "values", "valid"])
            .map_err(csv_error)?;
        for f in &r.families {
            let join = |v: Vec<String>| v.join(" ");
            w.write_record([
                f.family.clone(),
                f.param.to_string(),
                join(f.members.iter().map(u64::to_string).collect()),
                join(f.values.iter().map(u128::to_string).collect()),
                f.valid.to_string(),
            ])
            .map_err(csv_error)?;
        }
    } else {
        let mut names: Vec<&String> = r.witnesses.iter().flat_map(|w| w.values.keys()).collect();
        names.sort();
        names.dedup();
        let header = ["n", "condition"]
            .into_iter()
            .map(str::to_string)
            .chain(names.iter().map(|s| s.to_string()));
        w.write_record(header).map_err(csv_error)?;
        for wit in &r.witnesses {
            let row = [wit.n.to_string(), wit.condition.clone()].into_iter().chain(
                names
                    .iter()
                    .map(|k| wit.values.get(*k).map(|v| v.to_string()).unwrap_or_default()),
            );
            w.write_record(row).map_err(csv_error)?;
        }
    }
    String::from_utf8(w.into_inner().map_err(csv_error)?).map_err(csv_error)
}

fn report_text(r: &ScanReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} [{}, {}]", r.command, r.range.0, r.range.1);
    for (k, v) in &r.params {
        let _ = writeln!(s, "  {k} = {v}");
    }
    let _ = writeln!(s, "checked    {}", r.total_checked);
    let _ = writeln!(s, "witnesses  {}", r.witnesses.len());
    for w in &r.witnesses {
        let vals: Vec<String> = w.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "  n={} ({}) {}", w.n, w.factorization, vals.join(" "));
    }
    if !r.collisions.is_empty() {
        let _ = writeln!(s, "collision groups {}", r.collisions.len());
        for g in &r.collisions {
            let _ = writeln!(s, "  {} <- {:?}", g.value, g.members);
        }
    }
    if !r.triples.is_empty() {
        let _ = writeln!(s, "triples {}", r.triples.len());
        for t in &r.triples {
            let _ = writeln!(s, "  ({}, {}, {}) -> {:?}", t.a, t.b, t.c, t.values);
        }
    }
    for f in &r.families {
        let _ = writeln!(
            s,
            "  {} @ {}: {:?} -> {:?} {}",
            f.family,
            f.param,
            f.members,
            f.values,
            if f.valid { "valid" } else { "INVALID" }
        );
    }
    if !r.skipped_overflow.is_empty() {
        let _ = writeln!(s, "skipped (overflow) {:?}", r.skipped_overflow);
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let _ = writeln!(s, "elapsed    {} ms ({})", r.elapsed_ms, r.engine_version);
    s
}
