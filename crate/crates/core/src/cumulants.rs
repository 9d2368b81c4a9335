//! Conversions among moments and free, Boolean and monotone cumulants.
//!
//! Every direct conversion is a sum over (irreducible) non-crossing
//! partitions of the word positions with a coefficient that depends only on
//! the partition's nesting forest:
//!
//! | target  | source    | partitions | coefficient                       |
//! |---------|-----------|------------|-----------------------------------|
//! | moment  | free      | NC         | 1                                 |
//! | moment  | Boolean   | interval   | 1                                 |
//! | moment  | monotone  | NC         | 1 / f(pi)!                        |
//! | Boolean | free      | NC irr     | 1                                 |
//! | free    | Boolean   | NC irr     | (-1)^(|pi|-1)                     |
//! | free    | monotone  | NC irr     | (-1)^(|pi|-1) / t(pi)!            |
//! | Boolean | monotone  | NC irr     | 1 / t(pi)!                        |
//! | monotone| free      | NC irr     | (-1)^(|pi|-1) omega(t(pi))        |
//! | monotone| Boolean   | NC irr     | omega(t(pi))                      |
//!
//! The last row follows from `rho = -Omega'(-beta)` by substituting `-beta`
//! into the free formula; the test suite checks it against the Magnus side.
//! Cumulants are recovered from moments by unitriangular back-substitution.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::partitions::{enumerate_nc_bounded, enumerate_nc_irr_bounded, NCPartition};
use crate::prelie::Functional;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Moment,
    Free,
    Boolean,
    Monotone,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Moment, Kind::Free, Kind::Boolean, Kind::Monotone];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Moment => "moment",
            Kind::Free => "free",
            Kind::Boolean => "boolean",
            Kind::Monotone => "monotone",
        }
    }

    /// Conventional symbol in printed expansions.
    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Moment => "phi",
            Kind::Free => "kappa",
            Kind::Boolean => "beta",
            Kind::Monotone => "rho",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moment" | "moments" => Ok(Kind::Moment),
            "free" => Ok(Kind::Free),
            "boolean" => Ok(Kind::Boolean),
            "monotone" => Ok(Kind::Monotone),
            other => Err(Error::Parse(format!("unknown kind {other:?}"))),
        }
    }
}

/// A functional tagged with what it represents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantFamily {
    pub kind: Kind,
    pub data: Functional,
}

impl CumulantFamily {
    pub fn new(kind: Kind, data: Functional) -> Self {
        CumulantFamily { kind, data }
    }

    pub fn convert(&self, to: Kind) -> Result<CumulantFamily> {
        Ok(CumulantFamily { kind: to, data: convert(self.kind, to, &self.data)? })
    }
}

/// One term of a partition expansion: 0-based blocks and a coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub partition: NCPartition,
    pub coeff: Rational,
    blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Expansion {
    MomentFromFree,
    MomentFromBoolean,
    MomentFromMonotone,
    BooleanFromFree,
    FreeFromBoolean,
    FreeFromMonotone,
    BooleanFromMonotone,
    MonotoneFromFree,
    MonotoneFromBoolean,
}

impl Expansion {
    fn between(from: Kind, to: Kind) -> Option<Expansion> {
        use Kind::*;
        Some(match (from, to) {
            (Free, Moment) => Expansion::MomentFromFree,
            (Boolean, Moment) => Expansion::MomentFromBoolean,
            (Monotone, Moment) => Expansion::MomentFromMonotone,
            (Free, Boolean) => Expansion::BooleanFromFree,
            (Boolean, Free) => Expansion::FreeFromBoolean,
            (Monotone, Free) => Expansion::FreeFromMonotone,
            (Monotone, Boolean) => Expansion::BooleanFromMonotone,
            (Free, Monotone) => Expansion::MonotoneFromFree,
            (Boolean, Monotone) => Expansion::MonotoneFromBoolean,
            _ => return None,
        })
    }

    fn irreducible(self) -> bool {
        !matches!(
            self,
            Expansion::MomentFromFree | Expansion::MomentFromBoolean | Expansion::MomentFromMonotone
        )
    }

    /// Coefficient of `p`, or `None` when `p` does not contribute.
    fn coeff(self, p: &NCPartition) -> Option<Rational> {
        let sign = |r: Rational| if p.num_blocks().is_multiple_of(2) { -r } else { r };
        let inv_factorial = || Rational::new(BigInt::one(), p.nesting_forest().factorial().into());
        let c = match self {
            Expansion::MomentFromFree | Expansion::BooleanFromFree => Rational::one(),
            Expansion::MomentFromBoolean => {
                if !p.is_interval() {
                    return None;
                }
                Rational::one()
            }
            Expansion::MomentFromMonotone | Expansion::BooleanFromMonotone => inv_factorial(),
            Expansion::FreeFromBoolean => sign(Rational::one()),
            Expansion::FreeFromMonotone => sign(inv_factorial()),
            Expansion::MonotoneFromFree => sign(p.nesting_forest().omega()),
            Expansion::MonotoneFromBoolean => p.nesting_forest().omega(),
        };
        (!c.is_zero()).then_some(c)
    }
}

type TermCache = Mutex<HashMap<(Expansion, usize), Arc<Vec<Term>>>>;

/// Terms of an expansion on words of length `len`, computed once per
/// process.
fn terms(kind: Expansion, len: usize) -> Result<Arc<Vec<Term>>> {
    static CACHE: OnceLock<TermCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(kind, len)) {
        return Ok(t.clone());
    }
    let partitions = if kind.irreducible() {
        enumerate_nc_irr_bounded(len, usize::MAX)?
    } else {
        enumerate_nc_bounded(len, usize::MAX)?
    };
    let mut built: Vec<Term> = partitions
        .into_iter()
        .filter_map(|p| {
            let coeff = kind.coeff(&p)?;
            let blocks = p.blocks().iter().map(|b| b.iter().map(|i| i - 1).collect()).collect();
            Some(Term { partition: p, coeff, blocks })
        })
        .collect();
    built.sort_by(|a, b| {
        (a.partition.num_blocks(), &a.partition).cmp(&(b.partition.num_blocks(), &b.partition))
    });
    let built = Arc::new(built);
    cache.lock().unwrap().insert((kind, len), built.clone());
    Ok(built)
}

fn term_value(c: &Functional, w: &[usize], t: &Term) -> Rational {
    let mut acc = t.coeff.clone();
    for b in &t.blocks {
        let v = c.at_positions(w, b);
        if v.is_zero() {
            return Rational::zero();
        }
        acc *= v;
    }
    acc
}

fn apply(kind: Expansion, c: &Functional) -> Result<Functional> {
    let mut out = Functional::zero(c.alphabet().to_vec(), c.max_order())?;
    for len in 1..=c.max_order() {
        let ts = terms(kind, len)?;
        for w in c.words(len) {
            let v = ts.iter().fold(Rational::zero(), |acc, t| acc + term_value(c, &w, t));
            out.set(&w, v)?;
        }
    }
    Ok(out)
}

/// Solves `apply(kind, c) = target` for `c`. The single-block partition
/// has coefficient 1 in every expansion and all other terms only read
/// shorter words.
fn invert(kind: Expansion, target: &Functional) -> Result<Functional> {
    let mut c = Functional::zero(target.alphabet().to_vec(), target.max_order())?;
    for len in 1..=target.max_order() {
        let ts = terms(kind, len)?;
        for w in target.words(len) {
            let mut v = target.get(&w)?.clone();
            for t in ts.iter().filter(|t| t.partition.num_blocks() > 1) {
                v -= term_value(&c, &w, t);
            }
            c.set(&w, v)?;
        }
    }
    Ok(c)
}

/// Moments from free, Boolean or monotone cumulants.
pub fn moments_from(kind: Kind, c: &Functional) -> Result<Functional> {
    match Expansion::between(kind, Kind::Moment) {
        Some(e) => apply(e, c),
        None => domain("moments_from expects a cumulant kind, not moments"),
    }
}

/// Free, Boolean or monotone cumulants from moments.
pub fn cumulants_from_moments(kind: Kind, phi: &Functional) -> Result<Functional> {
    match Expansion::between(kind, Kind::Moment) {
        Some(e) => invert(e, phi),
        None => domain("cumulants_from_moments expects a cumulant kind, not moments"),
    }
}

pub fn boolean_from_free(kappa: &Functional) -> Functional {
    apply(Expansion::BooleanFromFree, kappa).expect("irreducible partitions of a valid table")
}

pub fn free_from_boolean(beta: &Functional) -> Functional {
    apply(Expansion::FreeFromBoolean, beta).expect("irreducible partitions of a valid table")
}

pub fn free_from_monotone(rho: &Functional) -> Functional {
    apply(Expansion::FreeFromMonotone, rho).expect("irreducible partitions of a valid table")
}

pub fn boolean_from_monotone(rho: &Functional) -> Functional {
    apply(Expansion::BooleanFromMonotone, rho).expect("irreducible partitions of a valid table")
}

/// Monotone cumulants from free cumulants through the `omega` coefficients.
pub fn monotone_from_free(kappa: &Functional) -> Functional {
    apply(Expansion::MonotoneFromFree, kappa).expect("irreducible partitions of a valid table")
}

/// Monotone cumulants from Boolean cumulants; the closed form of
/// `rho = -Omega'(-beta)`.
pub fn monotone_from_boolean(beta: &Functional) -> Functional {
    apply(Expansion::MonotoneFromBoolean, beta).expect("irreducible partitions of a valid table")
}

/// Converts between any two of the four kinds.
pub fn convert(from: Kind, to: Kind, f: &Functional) -> Result<Functional> {
    if from == to {
        return Ok(f.clone());
    }
    match (from, to) {
        (Kind::Moment, _) => cumulants_from_moments(to, f),
        (_, _) => apply(Expansion::between(from, to).expect("all cumulant pairs are direct"), f),
    }
}

/// The partition expansion of `to` in terms of `from` on words of length
/// `order`, if the conversion is a closed partition sum.
pub fn expansion_terms(from: Kind, to: Kind, order: usize) -> Result<Vec<Term>> {
    if order == 0 {
        return domain("order must be positive");
    }
    if from == to {
        return Ok(vec![Term {
            partition: NCPartition::one(order),
            coeff: Rational::one(),
            blocks: vec![(0..order).collect()],
        }]);
    }
    match Expansion::between(from, to) {
        Some(e) => Ok(terms(e, order)?.as_ref().clone()),
        None => domain(format!("{to} from {from} has no closed partition expansion")),
    }
}

/// Human-readable expansion, e.g.
/// `rho(a1a2a3) = kappa(a1a2a3) + 1/2 kappa(a1a3)kappa(a2)`.
pub fn format_expansion(from: Kind, to: Kind, order: usize) -> Result<String> {
    let terms = expansion_terms(from, to, order)?;
    let word = |b: &[usize]| b.iter().map(|i| format!("a{i}")).collect::<String>();
    let mut s = format!("{}({}) =", to.symbol(), word(&(1..=order).collect::<Vec<_>>()));
    for (k, t) in terms.iter().enumerate() {
        let negative = t.coeff < Rational::zero();
        let magnitude = if negative { -t.coeff.clone() } else { t.coeff.clone() };
        let op = match (k, negative) {
            (0, false) => " ",
            (0, true) => " -",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        s.push_str(op);
        if !magnitude.is_one() {
            s.push_str(&format!("{magnitude} "));
        }
        for b in t.partition.blocks() {
            s.push_str(&format!("{}({})", from.symbol(), word(b)));
        }
    }
    Ok(s)
}
