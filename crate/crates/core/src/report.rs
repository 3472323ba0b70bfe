//! Witness records and the report envelope shared by every command.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arithfun::Rational;
use crate::factorize::Factorization;
use crate::sequences::{ApTriple, CollisionGroup, FamilyCheck};

/// Version string stamped into every report.
pub const ENGINE_VERSION: &str = concat!("ntplus ", env!("CARGO_PKG_VERSION"));

/// A supporting value attached to a witness.
///
/// Integers serialize as JSON numbers when they fit in 64 bits and as
/// decimal strings beyond; rationals always as `"num/den"` strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessValue {
    Int(u128),
    Ratio(Rational),
    Flag(bool),
}

impl fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessValue::Int(v) => write!(f, "{v}"),
            WitnessValue::Ratio(r) => write!(f, "{r}"),
            WitnessValue::Flag(b) => write!(f, "{b}"),
        }
    }
}

impl From<u128> for WitnessValue {
    fn from(v: u128) -> Self {
        WitnessValue::Int(v)
    }
}

impl From<u64> for WitnessValue {
    fn from(v: u64) -> Self {
        WitnessValue::Int(v as u128)
    }
}

impl From<Rational> for WitnessValue {
    fn from(r: Rational) -> Self {
        WitnessValue::Ratio(r)
    }
}

impl From<bool> for WitnessValue {
    fn from(b: bool) -> Self {
        WitnessValue::Flag(b)
    }
}

impl Serialize for WitnessValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            WitnessValue::Int(v) => match u64::try_from(v) {
                Ok(small) => s.serialize_u64(small),
                Err(_) => s.collect_str(&v),
            },
            WitnessValue::Ratio(r) => r.serialize(s),
            WitnessValue::Flag(b) => s.serialize_bool(b),
        }
    }
}

/// u128 fields encoded like [`WitnessValue::Int`]: a JSON number when it
/// fits in u64, a decimal string otherwise.
pub(crate) mod wide_int {
    use super::WitnessValue;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        WitnessValue::Int(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        match WitnessValue::deserialize(d)? {
            WitnessValue::Int(v) => Ok(v),
            other => Err(D::Error::custom(format!("expected an integer, got {other:?}"))),
        }
    }
}

impl<'de> Deserialize<'de> for WitnessValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = WitnessValue;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer, a \"num/den\" string or a boolean")
            }

            fn visit_bool<E: de::Error>(self, b: bool) -> Result<WitnessValue, E> {
                Ok(WitnessValue::Flag(b))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<WitnessValue, E> {
                Ok(WitnessValue::Int(v as u128))
            }

            fn visit_u128<E: de::Error>(self, v: u128) -> Result<WitnessValue, E> {
                Ok(WitnessValue::Int(v))
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<WitnessValue, E> {
                if s.contains('/') {
                    s.parse().map(WitnessValue::Ratio).map_err(E::custom)
                } else {
                    s.parse().map(WitnessValue::Int).map_err(E::custom)
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// One integer satisfying a scanned condition, with the values that prove it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u64,
    pub condition: String,
    pub values: BTreeMap<String, WitnessValue>,
    pub factorization: Factorization,
}

impl Witness {
    pub fn new(condition: impl Into<String>, factorization: Factorization) -> Self {
        Self {
            n: factorization.n(),
            condition: condition.into(),
            values: BTreeMap::new(),
            factorization,
        }
    }

    pub fn with(mut self, name: &str, value: impl Into<WitnessValue>) -> Self {
        self.values.insert(name.to_string(), value.into());
        self
    }

    pub fn int(&self, name: &str) -> Option<u128> {
        match self.values.get(name)? {
            WitnessValue::Int(v) => Some(*v),
            _ => None,
        }
    }
}

/// Order-stable result of a scan, verifier or sequence search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub range: (u64, u64),
    pub total_checked: u64,
    pub witnesses: Vec<Witness>,
    pub skipped_overflow: Vec<u64>,
    pub elapsed_ms: u64,
    pub engine_version: String,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub collisions: Vec<CollisionGroup>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triples: Vec<ApTriple>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<FamilyCheck>,
}

impl ScanReport {
    pub fn new(command: impl Into<String>, range: (u64, u64)) -> Self {
        Self {
            command: command.into(),
            params: BTreeMap::new(),
            range,
            total_checked: 0,
            witnesses: Vec::new(),
            skipped_overflow: Vec::new(),
            elapsed_ms: 0,
            engine_version: ENGINE_VERSION.to_string(),
            notes: Vec::new(),
            collisions: Vec::new(),
            triples: Vec::new(),
            families: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Witness `n` values in report order.
    pub fn witness_ns(&self) -> Vec<u64> {
        self.witnesses.iter().map(|w| w.n).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::factorize;
    use proptest::prelude::*;

    fn arb_value() -> impl Strategy<Value = WitnessValue> {
        prop_oneof![
            any::<u128>().prop_map(WitnessValue::Int),
            (any::<u128>(), 1u128..).prop_map(|(a, b)| WitnessValue::Ratio(
                Rational::new(a, b).unwrap()
            )),
            any::<bool>().prop_map(WitnessValue::Flag),
        ]
    }

    proptest! {
        #[test]
        fn witness_json_round_trip(
            n in 1u64..1_000_000,
            vals in proptest::collection::btree_map("[a-z_]{1,8}", arb_value(), 0..5)
        ) {
            let mut w = Witness::new("sigma_shift", factorize(n, None).unwrap());
            w.values = vals;
            let mut r = ScanReport::new("scan", (2, n)).param("condition", "sigma-shift");
            r.witnesses.push(w);
            r.notes.push("note".into());
            let text = serde_json::to_string(&r).unwrap();
            let back: ScanReport = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, r);
        }
    }

    #[test]
    fn value_encodings() {
        let w = Witness::new("x", factorize(20, None).unwrap())
            .with("k", 2u64)
            .with("big", u128::MAX)
            .with("ratio", Rational::new(56, 21).unwrap())
            .with("ok", true);
        let v = serde_json::to_value(&w).unwrap();
        assert_eq!(v["values"]["k"], 2);
        assert_eq!(v["values"]["big"], u128::MAX.to_string());
        assert_eq!(v["values"]["ratio"], "8/3");
        assert_eq!(v["values"]["ok"], true);
        assert_eq!(v["factorization"]["factors"][0][0], 2);
    }
}
