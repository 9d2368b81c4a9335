//! Brute-force reference implementations.
//!
//! Everything here is exponential on purpose and guarded by hard size
//! limits. None of it calls the optimized enumerators or counters it is
//! meant to check; only the domain types are shared.

use serde::Serialize;
use serde_json::json;

use crate::cumulants::monotone_from_free;
use crate::error::{Error, Result};
use crate::partitions::NCPartition;
use crate::prelie::{magnus, prelie_product, Functional};
use crate::trees::RootedTree;

pub const MAX_BRUTE_N: usize = 8;
pub const MAX_BRUTE_TREE: usize = 7;

fn guard(what: &str, size: usize, max: usize) -> Result<()> {
    if size > max {
        return Err(Error::SizeGuard(format!("{what}: size {size} exceeds oracle limit {max}")));
    }
    Ok(())
}

/// Every set partition of `{1..n}` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == rgs.len() {
            let mut blocks = vec![Vec::new(); max];
            for (x, &b) in rgs.iter().enumerate() {
                blocks[b].push(x + 1);
            }
            out.push(blocks);
            return;
        }
        for b in 0..=max {
            rgs[i] = b;
            rec(i + 1, max.max(b + 1), rgs, out);
        }
    }
    if n > 0 {
        rec(0, 0, &mut rgs, &mut out);
    }
    out
}

/// Four-point test: some `a < b < c < d` with `a, c` in one block and
/// `b, d` in another.
fn has_crossing(blocks: &[Vec<usize>], n: usize) -> bool {
    let mut owner = vec![0; n + 1];
    for (i, b) in blocks.iter().enumerate() {
        for &x in b {
            owner[x] = i;
        }
    }
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    if owner[a] == owner[c] && owner[b] == owner[d] && owner[a] != owner[b] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// NC(n) by filtering all set partitions.
pub fn brute_enumerate_nc(n: usize) -> Result<Vec<NCPartition>> {
    guard("brute_enumerate_nc", n, MAX_BRUTE_N)?;
    set_partitions(n)
        .into_iter()
        .filter(|p| !has_crossing(p, n))
        .map(|p| NCPartition::new(n, p))
        .collect()
}

/// NC^irr(n) by filtering [`brute_enumerate_nc`].
pub fn brute_enumerate_nc_irr(n: usize) -> Result<Vec<NCPartition>> {
    Ok(brute_enumerate_nc(n)?
        .into_iter()
        .filter(|p| {
            let first = p.blocks().iter().find(|b| b.contains(&1)).unwrap();
            first.contains(&n)
        })
        .collect())
}

/// Direct reading of the nesting definition: every element of `inner`
/// lies strictly between two elements of `outer`.
fn nested_inside(outer: &[usize], inner: &[usize]) -> bool {
    outer
        .iter()
        .any(|&x| outer.iter().any(|&y| inner.iter().all(|&z| x < z && z < y)))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Bijective block labelings `1..|p|` with outer blocks labeled lower than
/// the blocks they surround.
pub fn brute_monotone_labelings(p: &NCPartition) -> Result<Vec<Vec<usize>>> {
    let k = p.num_blocks();
    guard("brute_monotone_orders", k, MAX_BRUTE_N)?;
    let blocks = p.blocks();
    Ok(permutations(k)
        .into_iter()
        .map(|perm| perm.into_iter().map(|x| x + 1).collect::<Vec<_>>())
        .filter(|labels| {
            (0..k).all(|i| {
                (0..k).all(|j| {
                    i == j || !nested_inside(&blocks[i], &blocks[j]) || labels[i] < labels[j]
                })
            })
        })
        .collect())
}

pub fn brute_monotone_orders(p: &NCPartition) -> Result<usize> {
    Ok(brute_monotone_labelings(p)?.len())
}

/// All irreducible monotone partitions of `{1..n}` with `k` blocks, as
/// (partition, labels) pairs, by labeling every irreducible partition.
pub fn brute_monotone_irr(n: usize, k: usize) -> Result<Vec<(NCPartition, Vec<usize>)>> {
    let mut out = Vec::new();
    for p in brute_enumerate_nc_irr(n)? {
        if p.num_blocks() != k {
            continue;
        }
        for labels in brute_monotone_labelings(&p)? {
            out.push((p.clone(), labels));
        }
    }
    Ok(out)
}

/// Flattens a tree into a parent array, root first.
fn parent_array(t: &RootedTree) -> Vec<Option<usize>> {
    fn walk(t: &RootedTree, parent: Option<usize>, out: &mut Vec<Option<usize>>) {
        let me = out.len();
        out.push(parent);
        for c in t.children() {
            walk(c, Some(me), out);
        }
    }
    let mut out = Vec::new();
    walk(t, None, &mut out);
    out
}

/// Surjections from the vertices onto `{1..k}` strictly increasing from
/// each vertex to its children, counted by exhaustive search.
pub fn brute_quasi_orders(t: &RootedTree, k: usize) -> Result<u64> {
    let parents = parent_array(t);
    let n = parents.len();
    guard("brute_quasi_orders", n, MAX_BRUTE_TREE)?;
    if k == 0 {
        return Ok(0);
    }
    let mut count = 0;
    let mut labels = vec![0usize; n];
    let total = (k as u64).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for l in labels.iter_mut() {
            *l = (c % k as u64) as usize;
            c /= k as u64;
        }
        let strict = parents
            .iter()
            .enumerate()
            .all(|(v, p)| p.is_none_or(|p| labels[p] < labels[v]));
        if !strict {
            continue;
        }
        let mut hit = vec![false; k];
        for &l in &labels {
            hit[l] = true;
        }
        if hit.iter().all(|&h| h) {
            count += 1;
        }
    }
    Ok(count)
}

/// Linear extensions of the tree poset, by brute force over permutations.
pub fn brute_tree_linear_extensions(t: &RootedTree) -> Result<usize> {
    let parents = parent_array(t);
    guard("brute_tree_linear_extensions", parents.len(), MAX_BRUTE_N)?;
    Ok(permutations(parents.len())
        .into_iter()
        .filter(|perm| {
            parents
                .iter()
                .enumerate()
                .all(|(v, p)| p.is_none_or(|p| perm[p] < perm[v]))
        })
        .count())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
}

impl Report {
    pub fn pass(check: impl Into<String>) -> Self {
        Report { check: check.into(), status: Status::Pass, counterexample: None }
    }

    pub fn fail(check: impl Into<String>, counterexample: serde_json::Value) -> Self {
        Report { check: check.into(), status: Status::Fail, counterexample: Some(counterexample) }
    }

    pub fn from_mismatch(check: impl Into<String>, mismatch: Option<serde_json::Value>) -> Self {
        match mismatch {
            None => Report::pass(check),
            Some(c) => Report::fail(check, c),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn mismatch_json(f: &Functional, w: &[usize], left: &Functional, right: &Functional) -> serde_json::Value {
    json!({
        "word": f.word_key(w),
        "left": left.get(w).map(ToString::to_string).unwrap_or_default(),
        "right": right.get(w).map(ToString::to_string).unwrap_or_default(),
    })
}

/// Compares the Magnus fixed point with the closed `omega` formula on every
/// word up to `max_order`.
pub fn check_magnus_vs_closed(kappa: &Functional) -> Result<Report> {
    let limit = if kappa.alphabet().len() == 1 { 9 } else { 7 };
    guard("check_magnus_vs_closed", kappa.max_order(), limit)?;
    let lhs = magnus(kappa);
    let rhs = monotone_from_free(kappa);
    Ok(Report::from_mismatch(
        "magnus-closed",
        lhs.first_difference(&rhs).map(|w| mismatch_json(kappa, &w, &lhs, &rhs)),
    ))
}

/// Checks `a|>(b|>c) - (a|>b)|>c = b|>(a|>c) - (b|>a)|>c` word by word.
pub fn check_prelie_identity(a: &Functional, b: &Functional, c: &Functional) -> Result<Report> {
    guard("check_prelie_identity", a.max_order(), 7)?;
    let assoc = |x: &Functional, y: &Functional| -> Result<Functional> {
        prelie_product(x, &prelie_product(y, c)?)?.sub(&prelie_product(&prelie_product(x, y)?, c)?)
    };
    let lhs = assoc(a, b)?;
    let rhs = assoc(b, a)?;
    Ok(Report::from_mismatch(
        "prelie-identity",
        lhs.first_difference(&rhs).map(|w| mismatch_json(a, &w, &lhs, &rhs)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn t(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    #[test]
    fn brute_nc_counts() {
        assert_eq!(brute_enumerate_nc(1).unwrap().len(), 1);
        assert_eq!(brute_enumerate_nc(3).unwrap().len(), 5);
        let nc4 = brute_enumerate_nc(4).unwrap();
        assert_eq!(nc4.len(), 14);
        assert_eq!(set_partitions(4).len(), 15);
        assert!(has_crossing(&[vec![1, 3], vec![2, 4]], 4));
        assert!(brute_enumerate_nc(9).is_err());
    }

    #[test]
    fn brute_quasi_order_examples() {
        assert_eq!(brute_quasi_orders(&t("[]"), 1).unwrap(), 1);
        assert_eq!(brute_quasi_orders(&t("[[]]"), 2).unwrap(), 1);
        assert_eq!(brute_quasi_orders(&t("[[]]"), 1).unwrap(), 0);
        assert_eq!(brute_quasi_orders(&t("[[][]]"), 3).unwrap(), 2);
        assert!(brute_quasi_orders(&RootedTree::ladder(8), 2).is_err());
    }

    #[test]
    fn brute_monotone_examples() {
        let p = |s: &str| s.parse::<NCPartition>().unwrap();
        assert_eq!(brute_monotone_orders(&p("{{1,2}}")).unwrap(), 1);
        assert_eq!(brute_monotone_orders(&p("{{1,3,5},{2},{4}}")).unwrap(), 2);
        assert_eq!(brute_monotone_orders(&p("{{1,5},{2,4},{3}}")).unwrap(), 1);
        assert_eq!(brute_tree_linear_extensions(&t("[[][]]")).unwrap(), 2);
    }

    #[test]
    fn magnus_check_trivial_inputs() {
        let zero = Functional::zero(Functional::default_alphabet(2), 5).unwrap();
        assert!(check_magnus_vs_closed(&zero).unwrap().passed());
        let low = Functional::from_fn(Functional::default_alphabet(2), 5, |w| {
            crate::Rational::from_integer(((w.len() <= 2) as i64 * (w[0] as i64 + 2)).into())
        })
        .unwrap();
        assert!(check_magnus_vs_closed(&low).unwrap().passed());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let k = Functional::random(Functional::default_alphabet(2), 6, &mut rng).unwrap();
        assert!(check_magnus_vs_closed(&k).unwrap().passed());
        let too_big = Functional::zero(Functional::default_alphabet(2), 8).unwrap();
        assert!(check_magnus_vs_closed(&too_big).is_err());
    }

    #[test]
    fn prelie_check_examples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut draw = || Functional::random(Functional::default_alphabet(2), 6, &mut rng).unwrap();
        let (a, b, c) = (draw(), draw(), draw());
        assert!(check_prelie_identity(&a, &a, &a).unwrap().passed());
        assert!(check_prelie_identity(&a, &b, &c).unwrap().passed());
        let short = Functional::random(Functional::default_alphabet(2), 3, &mut rng).unwrap();
        assert!(check_prelie_identity(&short, &short, &short).unwrap().passed());
    }

    #[test]
    fn failing_report_carries_counterexample() {
        let a = Functional::zero(vec!["a".into()], 2).unwrap();
        let mut b = a.clone();
        b.set(&[0, 0], crate::Rational::from_integer(1.into())).unwrap();
        assert_eq!(a.first_difference(&b), Some(vec![0, 0]));
        let r = Report::from_mismatch("x", a.first_difference(&b).map(|w| mismatch_json(&a, &w, &a, &b)));
        assert!(!r.passed());
        assert_eq!(r.counterexample.unwrap()["word"], "a,a");
    }
}
