//! Non-planar rooted trees and forests.
//!
//! Trees are kept in canonical form: children sorted by their bracket
//! encoding, so structural equality is equality of the derived values.
//! Besides factorials and leaf removal, this module computes the
//! quasi-monotone counts `omega_k` and the coefficient
//! `omega(t) = sum_k (-1)^(k+1) omega_k(t) / k`, both directly and through
//! the Bernoulli recursion over block subsets of a partition.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::partitions::NCPartition;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedTree {
    children: Vec<RootedTree>,
}

impl Ord for RootedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.encode().cmp(&other.encode())
    }
}

impl PartialOrd for RootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl RootedTree {
    /// The single-vertex tree.
    pub fn leaf() -> Self {
        RootedTree { children: Vec::new() }
    }

    /// Attaches `children` to a new root.
    pub fn from_children(mut children: Vec<RootedTree>) -> Self {
        children.sort_by_cached_key(RootedTree::encode);
        RootedTree { children }
    }

    /// The ladder with `n` vertices.
    pub fn ladder(n: usize) -> Self {
        assert!(n >= 1, "ladders have at least one vertex");
        (1..n).fold(RootedTree::leaf(), |t, _| RootedTree::from_children(vec![t]))
    }

    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    pub fn encode(&self) -> String {
        let mut s = String::with_capacity(2 * self.size());
        self.write_encoding(&mut s);
        s
    }

    fn write_encoding(&self, s: &mut String) {
        s.push('[');
        for c in &self.children {
            c.write_encoding(s);
        }
        s.push(']');
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(RootedTree::size).sum::<usize>()
    }

    /// Number of vertices on the longest root-to-leaf chain.
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(RootedTree::depth).max().unwrap_or(0)
    }

    pub fn num_leaves(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            self.children.iter().map(RootedTree::num_leaves).sum()
        }
    }

    /// `t! = |t| * t_1! * ... * t_n!`.
    pub fn factorial(&self) -> BigUint {
        self.children
            .iter()
            .fold(BigUint::from(self.size()), |acc, c| acc * c.factorial())
    }

    /// Every tree obtained by deleting one leaf, one entry per leaf.
    pub fn leaf_removals(&self) -> Result<Vec<RootedTree>> {
        if self.children.is_empty() {
            return domain("cannot remove a leaf from the single-vertex tree");
        }
        Ok(self.leaf_removals_inner())
    }

    fn leaf_removals_inner(&self) -> Vec<RootedTree> {
        let mut out = Vec::new();
        for (i, c) in self.children.iter().enumerate() {
            let replacements = if c.children.is_empty() {
                vec![None]
            } else {
                c.leaf_removals_inner().into_iter().map(Some).collect()
            };
            for r in replacements {
                let mut kids: Vec<RootedTree> = self.children.clone();
                match r {
                    Some(t) => kids[i] = t,
                    None => {
                        kids.remove(i);
                    }
                }
                out.push(RootedTree::from_children(kids));
            }
        }
        out
    }

    /// Number of linear extensions with the root minimal, `|t|! / t!`.
    pub fn monotone_count(&self) -> BigUint {
        factorial(self.size()) / self.factorial()
    }

    /// `F(j)` for `j = 0..=max`: maps from vertices into `{1..j}` strictly
    /// increasing from each vertex to its children. Not necessarily onto.
    fn strict_map_counts(&self, max: usize) -> Vec<BigUint> {
        let child_counts: Vec<Vec<BigUint>> =
            self.children.iter().map(|c| c.strict_map_counts(max)).collect();
        // the root takes label r, the children live in the j - r labels above it
        let below: Vec<BigUint> = (0..=max)
            .map(|s| child_counts.iter().fold(BigUint::one(), |acc, f| acc * &f[s]))
            .collect();
        let mut out = Vec::with_capacity(max + 1);
        let mut running = BigUint::zero();
        out.push(BigUint::zero());
        for b in below.iter().take(max) {
            running += b;
            out.push(running.clone());
        }
        out
    }

    /// `omega_k(t)` for `k = 0..=|t|`: surjective strict maps onto `{1..k}`.
    pub fn omega_counts(&self) -> Vec<BigUint> {
        let n = self.size();
        let f = self.strict_map_counts(n);
        (0..=n)
            .map(|k| {
                // F(i) = sum_j C(i, j) omega_j, inverted by inclusion-exclusion
                let mut acc = BigInt::zero();
                for (i, fi) in f.iter().enumerate().take(k + 1) {
                    let term = BigInt::from(binomial(k, i)) * BigInt::from(fi.clone());
                    if (k - i) % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc.to_biguint().expect("surjection counts are non-negative")
            })
            .collect()
    }

    /// Number of rank-`k` quasi-monotone orderings.
    pub fn omega_k(&self, k: usize) -> BigUint {
        if k > self.size() {
            return BigUint::zero();
        }
        self.omega_counts().swap_remove(k)
    }

    /// `sum_{k=1}^{|t|} (-1)^(k+1) omega_k(t) / k`, memoized by encoding.
    pub fn omega(&self) -> Rational {
        let key = self.encode();
        if let Some(v) = omega_cache().lock().unwrap().get(&key) {
            return v.clone();
        }
        let value = self
            .omega_counts()
            .into_iter()
            .enumerate()
            .skip(1)
            .fold(Rational::zero(), |acc, (k, c)| {
                let term = Rational::new(BigInt::from(c), BigInt::from(k));
                if k % 2 == 1 {
                    acc + term
                } else {
                    acc - term
                }
            });
        omega_cache().lock().unwrap().insert(key, value.clone());
        value
    }
}

fn omega_cache() -> &'static Mutex<HashMap<String, Rational>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Rational>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl FromStr for RootedTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut forest: Forest = s.parse()?;
        if forest.trees.len() != 1 {
            return Err(Error::Parse(format!(
                "expected a single tree, found {} in {s:?}",
                forest.trees.len()
            )));
        }
        Ok(forest.trees.pop().unwrap())
    }
}

/// A multiset of rooted trees, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Forest {
    trees: Vec<RootedTree>,
}

impl Forest {
    pub fn new(mut trees: Vec<RootedTree>) -> Self {
        trees.sort_by_cached_key(RootedTree::encode);
        Forest { trees }
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.trees
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn size(&self) -> usize {
        self.trees.iter().map(RootedTree::size).sum()
    }

    pub fn factorial(&self) -> BigUint {
        self.trees.iter().fold(BigUint::one(), |acc, t| acc * t.factorial())
    }

    pub fn monotone_count(&self) -> BigUint {
        factorial(self.size()) / self.factorial()
    }

    pub fn omega(&self) -> Rational {
        self.trees.iter().fold(Rational::one(), |acc, t| acc * t.omega())
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.trees {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Forest {
    type Err = Error;

    /// Parses concatenated bracket trees, e.g. `[[]][]`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut stack: Vec<Vec<RootedTree>> = vec![Vec::new()];
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            match c {
                '[' => stack.push(Vec::new()),
                ']' => {
                    if stack.len() < 2 {
                        return Err(Error::Parse(format!("unbalanced ']' in {s:?}")));
                    }
                    let kids = stack.pop().unwrap();
                    stack.last_mut().unwrap().push(RootedTree::from_children(kids));
                }
                other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
            }
        }
        if stack.len() != 1 {
            return Err(Error::Parse(format!("unbalanced '[' in {s:?}")));
        }
        Ok(Forest::new(stack.pop().unwrap()))
    }
}

/// Every canonical tree with exactly `n` vertices, sorted by encoding.
pub fn all_trees(n: usize) -> Vec<RootedTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: BTreeSet<RootedTree> = BTreeSet::from([RootedTree::leaf()]);
    for _ in 1..n {
        level = level.iter().flat_map(grow_by_one_leaf).collect();
    }
    level.into_iter().collect()
}

fn grow_by_one_leaf(t: &RootedTree) -> Vec<RootedTree> {
    let mut out = Vec::new();
    let mut kids = t.children.clone();
    kids.push(RootedTree::leaf());
    out.push(RootedTree::from_children(kids));
    for (i, c) in t.children.iter().enumerate() {
        for grown in grow_by_one_leaf(c) {
            let mut kids = t.children.clone();
            kids[i] = grown;
            out.push(RootedTree::from_children(kids));
        }
    }
    out
}

/// Bernoulli numbers with `B_1 = -1/2`, the convention of
/// `z / (e^z - 1) = sum_n B_n z^n / n!`. The Magnus expansion and the
/// `omega` recursion both depend on this sign.
pub fn bernoulli(n: usize) -> Rational {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let mut table = TABLE.get_or_init(|| Mutex::new(vec![Rational::one()])).lock().unwrap();
    while table.len() <= n {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let m = table.len();
        let s = table
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (k, b)| acc + b * BigInt::from(binomial(m + 1, k)));
        table.push(-s / BigInt::from(m + 1));
    }
    table[n].clone()
}

/// `omega` of an irreducible partition through the Bernoulli recursion
/// over block subsets of the partition with its outer block removed.
pub fn omega_recursive(p: &NCPartition) -> Result<Rational> {
    if !p.is_irreducible() {
        return domain(format!("{p} is not irreducible"));
    }
    let rest = p.without_block(0);
    let mut total = Rational::zero();
    for v in rest.sub_families() {
        let b = bernoulli(v.len());
        if b.is_zero() {
            continue;
        }
        let parts = v.v_components();
        let mut term = b / BigInt::from(parts.nu.nesting_forest().factorial());
        for c in &parts.comps {
            term *= omega_recursive(c)?;
        }
        total += term;
    }
    Ok(total)
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parse_and_canonicalize() {
        assert_eq!(t("[]"), RootedTree::leaf());
        assert_eq!(t("[[][[]]]"), t("[[[]][]]"));
        assert_eq!(t("[[][[]]]").encode(), "[[[]][]]");
        assert_eq!(t("[[][]]").size(), 3);
        for bad in ["", "[", "]", "[[]", "[]]", "[x]", "[][]"] {
            assert!(bad.parse::<RootedTree>().is_err(), "{bad:?}");
        }
        assert_eq!("".parse::<Forest>().unwrap(), Forest::default());
        assert_eq!("[][[]]".parse::<Forest>().unwrap().to_string(), "[[]][]");
    }

    #[test]
    fn factorials() {
        assert_eq!(t("[]").factorial(), 1u32.into());
        assert_eq!(t("[[][]]").factorial(), 3u32.into());
        assert_eq!(t("[[[]]]").factorial(), 6u32.into());
        assert_eq!(Forest::default().factorial(), 1u32.into());
        assert_eq!("[][]".parse::<Forest>().unwrap().factorial(), 1u32.into());
        assert_eq!("[[]][[][]]".parse::<Forest>().unwrap().factorial(), 6u32.into());
    }

    #[test]
    fn leaf_removal() {
        assert_eq!(t("[[]]").leaf_removals().unwrap(), vec![t("[]")]);
        assert_eq!(t("[[][]]").leaf_removals().unwrap(), vec![t("[[]]"), t("[[]]")]);
        let mut got = t("[[[]][]]").leaf_removals().unwrap();
        got.sort();
        let mut want = vec![t("[[][]]"), t("[[[]]]")];
        want.sort();
        assert_eq!(got, want);
        assert!(t("[]").leaf_removals().is_err());
        let big = t("[[[]][][]]");
        assert_eq!(big.leaf_removals().unwrap().len(), big.num_leaves());
    }

    #[test]
    fn monotone_counts() {
        assert_eq!(t("[]").monotone_count(), 1u32.into());
        assert_eq!(t("[[][]]").monotone_count(), 2u32.into());
        assert_eq!(t("[[[]]]").monotone_count(), 1u32.into());
    }

    #[test]
    fn omega_k_examples() {
        assert_eq!(t("[]").omega_k(1), 1u32.into());
        assert_eq!(t("[[]]").omega_k(1), 0u32.into());
        assert_eq!(t("[[]]").omega_k(2), 1u32.into());
        assert_eq!(t("[[][]]").omega_k(2), 1u32.into());
        assert_eq!(t("[[][]]").omega_k(3), 2u32.into());
        assert_eq!(t("[[][]]").omega_k(7), 0u32.into());
    }

    #[test]
    fn omega_examples() {
        assert_eq!(t("[]").omega(), r(1, 1));
        assert_eq!(t("[[][]]").omega(), r(1, 6));
        assert_eq!(t("[[][][]]").omega(), r(0, 1));
        assert_eq!(Forest::default().omega(), r(1, 1));
        assert_eq!("[][]".parse::<Forest>().unwrap().omega(), r(1, 1));
        assert_eq!("[[]][[[]]]".parse::<Forest>().unwrap().omega(), r(-1, 6));
    }

    #[test]
    fn ladders() {
        let want = [r(1, 1), r(-1, 2), r(1, 3), r(-1, 4), r(1, 5)];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(&RootedTree::ladder(n + 1).omega(), w);
        }
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), r(1, 1));
        assert_eq!(bernoulli(1), r(-1, 2));
        assert_eq!(bernoulli(2), r(1, 6));
        assert_eq!(bernoulli(3), r(0, 1));
        assert_eq!(bernoulli(4), r(-1, 30));
        assert_eq!(bernoulli(12), r(-691, 2730));
    }

    #[test]
    fn recursive_omega_examples() {
        let p = |s: &str| s.parse::<NCPartition>().unwrap();
        assert_eq!(omega_recursive(&p("{{1,2}}")).unwrap(), r(1, 1));
        assert_eq!(omega_recursive(&p("{{1,3},{2}}")).unwrap(), r(-1, 2));
        assert_eq!(omega_recursive(&p("{{1,3,5},{2},{4}}")).unwrap(), r(1, 6));
        assert!(omega_recursive(&p("{{1},{2}}")).is_err());
    }

    #[test]
    fn tree_census() {
        let counts: Vec<usize> = (1..=8).map(|n| all_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48, 115]);
    }
}
