//! Named verification suites, each a list of [`Report`]s.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cumulants::{convert, Kind};
use crate::error::{domain, Result};
use crate::oracle::{self, check_magnus_vs_closed, check_prelie_identity, Report};
use crate::partitions::{enumerate_monotone_irr, enumerate_nc, enumerate_nc_irr};
use crate::prelie::{prelie_product, Functional};
use crate::trees::{all_trees, RootedTree};
use crate::Rational;

pub const SUITES: [&str; 7] = ["tables", "kreimer", "prelie", "magnus-closed", "roundtrips", "counts", "all"];

/// Published `omega` values for every tree with at most five vertices and
/// the six-vertex trees listed alongside them.
pub const OMEGA_TABLE: [(&str, i64, i64); 17] = [
    ("[]", 1, 1),
    ("[[]]", -1, 2),
    ("[[[]]]", 1, 3),
    ("[[][]]", 1, 6),
    ("[[[][]]]", -1, 6),
    ("[[[[]]]]", -1, 4),
    ("[[][[]]]", -1, 12),
    ("[[][][]]", 0, 1),
    ("[[][][][]]", -1, 30),
    ("[[[][][]]]", 1, 30),
    ("[[[]][[]]]", 1, 30),
    ("[[][[][]]]", 1, 60),
    ("[[[[[]]]]]", 1, 5),
    ("[[][[[]]]]", 1, 20),
    ("[[[[][]]]]", 3, 20),
    ("[[[][[]]]]", 1, 10),
    ("[[][][[]]]", -1, 60),
];

pub fn run_suite(name: &str, seed: u64, max_order: usize) -> Result<Vec<Report>> {
    if max_order == 0 || max_order > 7 {
        return domain("max-order must lie in 1..=7");
    }
    match name {
        "tables" => Ok(tables()),
        "kreimer" => kreimer(8),
        "prelie" => prelie(seed, max_order),
        "magnus-closed" => magnus_closed(seed, max_order),
        "roundtrips" => roundtrips(seed, max_order),
        "counts" => counts(),
        "all" => {
            let mut out = Vec::new();
            for s in &SUITES[..SUITES.len() - 1] {
                out.extend(run_suite(s, seed, max_order)?);
            }
            Ok(out)
        }
        other => domain(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", "))),
    }
}

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn tables() -> Vec<Report> {
    OMEGA_TABLE
        .iter()
        .map(|&(tree, n, d)| {
            let t: RootedTree = tree.parse().expect("table trees parse");
            let got = t.omega();
            let name = format!("omega {tree}");
            if got == rational(n, d) {
                Report::pass(name)
            } else {
                Report::fail(name, json!({ "expected": rational(n, d).to_string(), "got": got.to_string() }))
            }
        })
        .collect()
}

/// `|t| / t! = sum over leaf removals t' of 1 / t'!` for every tree with
/// 2..=max_size vertices.
pub fn kreimer(max_size: usize) -> Result<Vec<Report>> {
    let mut bad = None;
    'outer: for n in 2..=max_size {
        for t in all_trees(n) {
            let lhs = Rational::new(BigInt::from(n), t.factorial().into());
            let rhs = t
                .leaf_removals()?
                .iter()
                .fold(Rational::zero(), |acc, s| acc + Rational::new(1.into(), s.factorial().into()));
            if lhs != rhs {
                bad = Some(json!({ "tree": t.encode(), "lhs": lhs.to_string(), "rhs": rhs.to_string() }));
                break 'outer;
            }
        }
    }
    Ok(vec![Report::from_mismatch(format!("kreimer up to {max_size} vertices"), bad)])
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn prelie(seed: u64, max_order: usize) -> Result<Vec<Report>> {
    let mut r = rng(seed);
    let alphabet = Functional::default_alphabet(2);
    let a = Functional::random(alphabet.clone(), max_order, &mut r)?;
    let b = Functional::random(alphabet.clone(), max_order, &mut r)?;
    let c = Functional::random(alphabet, max_order, &mut r)?;
    let mut out = vec![check_prelie_identity(&a, &b, &c)?];
    out.push(sticks(seed, 10)?);
    Ok(out)
}

/// Univariate product against
/// `(a |> b)(x^n) = -sum_l (n - l - 1) b(x^(n-l)) a(x^l)`.
pub fn sticks(seed: u64, max_exponent: usize) -> Result<Report> {
    let mut r = rng(seed.wrapping_add(1));
    let alphabet = vec!["x".to_string()];
    let a = Functional::random(alphabet.clone(), max_exponent, &mut r)?;
    let b = Functional::random(alphabet, max_exponent, &mut r)?;
    let p = prelie_product(&a, &b)?;
    let power = |f: &Functional, k: usize| f.get(&vec![0; k]).cloned();
    for n in 1..=max_exponent {
        let mut want = Rational::zero();
        // l = n - 1 has weight zero and l = n would need the empty word
        for l in 1..n.saturating_sub(1) {
            want -= Rational::from_integer(BigInt::from(n - l - 1)) * power(&b, n - l)? * power(&a, l)?;
        }
        if power(&p, n)? != want {
            return Ok(Report::fail(
                "univariate product",
                json!({ "exponent": n, "expected": want.to_string(), "got": power(&p, n)?.to_string() }),
            ));
        }
    }
    Ok(Report::pass(format!("univariate product up to exponent {max_exponent}")))
}

pub fn magnus_closed(seed: u64, max_order: usize) -> Result<Vec<Report>> {
    let mut r = rng(seed);
    let two = Functional::random(Functional::default_alphabet(2), max_order, &mut r)?;
    let uni = Functional::random(vec!["a".into()], (max_order + 2).min(9), &mut r)?;
    let mut a = check_magnus_vs_closed(&two)?;
    a.check = format!("magnus-closed 2 letters, order {max_order}");
    let mut b = check_magnus_vs_closed(&uni)?;
    b.check = format!("magnus-closed 1 letter, order {}", uni.max_order());
    Ok(vec![a, b])
}

pub fn roundtrips(seed: u64, max_order: usize) -> Result<Vec<Report>> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for from in Kind::ALL {
        let f = Functional::random(Functional::default_alphabet(2), max_order, &mut r)?;
        for to in Kind::ALL.into_iter().filter(|&k| k != from) {
            let back = convert(to, from, &convert(from, to, &f)?)?;
            out.push(Report::from_mismatch(
                format!("roundtrip {from} -> {to} -> {from}"),
                f.first_difference(&back).map(|w| json!({ "word": f.word_key(&w) })),
            ));
        }
    }
    Ok(out)
}

fn catalan(n: usize) -> BigUint {
    crate::trees::binomial(2 * n, n) / BigUint::from(n + 1)
}

pub fn counts() -> Result<Vec<Report>> {
    let mut out = Vec::new();
    let mut bad = None;
    for n in 1..=10 {
        let nc = enumerate_nc(n)?.len();
        let irr = enumerate_nc_irr(n)?.len();
        if BigUint::from(nc) != catalan(n) || BigUint::from(irr) != catalan(n - 1) {
            bad = Some(json!({ "n": n, "nc": nc, "nc_irr": irr }));
            break;
        }
    }
    out.push(Report::from_mismatch("catalan counts up to 10", bad));

    let mut bad = None;
    for n in 1..=oracle::MAX_BRUTE_N {
        let mut fast = enumerate_nc(n)?;
        let mut slow = oracle::brute_enumerate_nc(n)?;
        fast.sort();
        slow.sort();
        if fast != slow {
            bad = Some(json!({ "n": n }));
            break;
        }
    }
    out.push(Report::from_mismatch("NC(n) against set-partition filter", bad));

    let mut bad = None;
    'm: for n in 1..=7 {
        for p in enumerate_nc(n)? {
            let brute = oracle::brute_monotone_orders(&p)?;
            if p.monotone_count() != BigUint::from(brute) {
                bad = Some(json!({ "partition": p.to_string(), "brute": brute }));
                break 'm;
            }
        }
    }
    out.push(Report::from_mismatch("monotone counts against brute force", bad));

    let mut bad = None;
    'w: for n in 1..=oracle::MAX_BRUTE_TREE {
        for t in all_trees(n) {
            for k in 1..=n {
                let brute = oracle::brute_quasi_orders(&t, k)?;
                if t.omega_k(k) != BigUint::from(brute) {
                    bad = Some(json!({ "tree": t.encode(), "k": k, "brute": brute }));
                    break 'w;
                }
            }
        }
    }
    out.push(Report::from_mismatch("quasi-monotone counts against brute force", bad));

    let mut bad = None;
    for n in 1..=8 {
        let labeled: usize = (1..=n).map(|k| enumerate_monotone_irr(n, k).map(|v| v.len())).sum::<Result<_>>()?;
        let weighted: BigUint = enumerate_nc_irr(n)?.iter().map(|p| p.monotone_count()).sum();
        if BigUint::from(labeled) != weighted {
            bad = Some(json!({ "n": n, "enumerated": labeled, "weighted": weighted.to_string() }));
            break;
        }
    }
    out.push(Report::from_mismatch("irreducible monotone partitions", bad));
    Ok(out)
}
