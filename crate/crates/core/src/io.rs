//! JSON wire formats. Rationals always travel as `"p/q"` strings.
//!
//! Functional:
//!
//! ```json
//! { "alphabet": ["a", "b"], "max_order": 3, "values": { "a,b,a": "3/2" } }
//! ```
//!
//! Omitted words are zero. A cumulant envelope wraps a functional with its
//! kind: `{ "kind": "free", "functional": { ... } }`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cumulants::{CumulantFamily, Kind};
use crate::error::{Error, Result};
use crate::prelie::Functional;
use crate::Rational;

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let r: Rational = t.parse().map_err(|e| Error::Parse(format!("rational {s:?}: {e}")))?;
    Ok(r)
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionalJson {
    alphabet: Vec<String>,
    max_order: usize,
    #[serde(default)]
    values: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvelopeJson {
    kind: Kind,
    functional: FunctionalJson,
}

impl From<&Functional> for FunctionalJson {
    fn from(f: &Functional) -> Self {
        let values = f
            .entries()
            .filter(|(_, v)| !v.is_zero())
            .map(|(w, v)| (f.word_key(&w), format_rational(v)))
            .collect();
        FunctionalJson { alphabet: f.alphabet().to_vec(), max_order: f.max_order(), values }
    }
}

impl TryFrom<FunctionalJson> for Functional {
    type Error = Error;

    fn try_from(j: FunctionalJson) -> Result<Self> {
        let mut f = Functional::zero(j.alphabet, j.max_order)?;
        for (key, value) in &j.values {
            let w = f.parse_word_key(key)?;
            f.set(&w, parse_rational(value)?)?;
        }
        Ok(f)
    }
}

pub fn functional_to_json(f: &Functional) -> serde_json::Value {
    serde_json::to_value(FunctionalJson::from(f)).expect("plain data serializes")
}

pub fn functional_from_json(v: serde_json::Value) -> Result<Functional> {
    let j: FunctionalJson = serde_json::from_value(v)?;
    j.try_into()
}

pub fn functional_from_str(s: &str) -> Result<Functional> {
    let j: FunctionalJson = serde_json::from_str(s)?;
    j.try_into()
}

pub fn family_to_json(c: &CumulantFamily) -> serde_json::Value {
    serde_json::to_value(EnvelopeJson { kind: c.kind, functional: (&c.data).into() })
        .expect("plain data serializes")
}

/// Pretty-printed envelope with `kind` first.
pub fn family_to_string(c: &CumulantFamily) -> String {
    serde_json::to_string_pretty(&EnvelopeJson { kind: c.kind, functional: (&c.data).into() })
        .expect("plain data serializes")
}

pub fn family_from_str(s: &str) -> Result<CumulantFamily> {
    let j: EnvelopeJson = serde_json::from_str(s)?;
    Ok(CumulantFamily::new(j.kind, j.functional.try_into()?))
}
