//! Arithmetic functions σ, φ, S₂, σ⁺ and φ⁺, the divisibility conditions
//! built on them, and deterministic exhaustive scanners.

pub mod arithfun;
pub mod cli;
pub mod conjectures;
pub mod error;
pub mod factorize;
pub mod predicates;
pub mod report;
pub mod scan;
pub mod sequences;
pub mod theorems;

pub use arithfun::{profile, ArithProfile, Rational};
pub use error::{Error, Result};
pub use factorize::{build_spf_sieve, factorize, is_prime, Factorization, SieveTable};
pub use predicates::ConditionId;
pub use report::{ScanReport, Witness, WitnessValue};
pub use scan::scan_range;
pub use sequences::SeqFunction;
pub use theorems::TheoremId;
