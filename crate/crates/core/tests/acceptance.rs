//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or exceeds its time budget.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nc_cumulants::cumulants::{
    boolean_from_free, boolean_from_monotone, convert, cumulants_from_moments, expansion_terms, free_from_boolean,
    free_from_monotone, moments_from, monotone_from_boolean, monotone_from_free,
};
use nc_cumulants::oracle::{self, check_magnus_vs_closed, check_prelie_identity};
use nc_cumulants::partitions::{enumerate_monotone_irr, enumerate_nc, enumerate_nc_irr};
use nc_cumulants::prelie::{magnus, magnus_inverse, prelie_product};
use nc_cumulants::trees::{all_trees, omega_recursive};
use nc_cumulants::{Functional, Kind, NCPartition, Rational, RootedTree};

/// Seed for every randomized criterion.
const SEED: u64 = 20_240_607;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(name: &str, a: &Functional, b: &Functional) -> Result<(), String> {
    match a.first_difference(b) {
        None => Ok(()),
        Some(w) => Err(format!(
            "{name}: differ at {} ({} vs {})",
            a.word_key(&w),
            a.get(&w).unwrap(),
            b.get(&w).unwrap()
        )),
    }
}

fn rng(offset: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED + offset)
}

fn random(letters: usize, order: usize, r: &mut ChaCha8Rng) -> Functional {
    Functional::random(Functional::default_alphabet(letters), order, r).unwrap()
}

fn criterion_1() -> Outcome {
    let table = [
        ("[]", "1"),
        ("[[]]", "-1/2"),
        ("[[[]]]", "1/3"),
        ("[[][]]", "1/6"),
        ("[[[][]]]", "-1/6"),
        ("[[[[]]]]", "-1/4"),
        ("[[][[]]]", "-1/12"),
        ("[[][][]]", "0"),
        ("[[][][][]]", "-1/30"),
        ("[[[][][]]]", "1/30"),
        ("[[[]][[]]]", "1/30"),
        ("[[][[][]]]", "1/60"),
        ("[[[[[]]]]]", "1/5"),
        ("[[][[[]]]]", "1/20"),
        ("[[[[][]]]]", "3/20"),
        ("[[[][[]]]]", "1/10"),
        ("[[][][[]]]", "-1/60"),
    ];
    for (tree, want) in table {
        let t: RootedTree = tree.parse().map_err(|e| format!("{tree}: {e}"))?;
        let got = t.omega();
        ensure(got == q(want), || format!("omega({tree}) = {got}, expected {want}"))?;
    }
    Ok(format!("{} table values", table.len()))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for n in 1..=7 {
        for p in enumerate_nc_irr(n).map_err(|e| e.to_string())? {
            let direct = p.nesting_tree().map_err(|e| e.to_string())?.omega();
            let rec = omega_recursive(&p).map_err(|e| e.to_string())?;
            ensure(direct == rec, || format!("{p}: omega {direct} vs recursive {rec}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} irreducible partitions, n <= 7"))
}

fn inv_factorial(t: &RootedTree) -> Rational {
    Rational::new(BigInt::one(), t.factorial().into())
}

fn criterion_3() -> Outcome {
    // the four displayed instances: (tree, |t|/t!, leaf removals)
    let worked: [(&str, &str, &[&str]); 4] = [
        ("[[][]]", "1", &["[[]]", "[[]]"]),
        ("[[[]][]]", "1/2", &["[[][]]", "[[[]]]"]),
        ("[[[][]]]", "1/3", &["[[[]]]", "[[[]]]"]),
        ("[[[]][][]]", "1/2", &["[[[]][]]", "[[[]][]]", "[[][][]]"]),
    ];
    for (tree, ratio, removals) in worked {
        let t: RootedTree = tree.parse().unwrap();
        let lhs = Rational::new(BigInt::from(t.size()), t.factorial().into());
        ensure(lhs == q(ratio), || format!("{tree}: |t|/t! = {lhs}, expected {ratio}"))?;
        let mut got: Vec<String> = t.leaf_removals().map_err(|e| e.to_string())?.iter().map(|s| s.encode()).collect();
        let mut want: Vec<String> = removals.iter().map(|s| s.parse::<RootedTree>().unwrap().encode()).collect();
        got.sort();
        want.sort();
        ensure(got == want, || format!("{tree}: removals {got:?}, expected {want:?}"))?;
        let rhs: Rational = removals.iter().map(|s| inv_factorial(&s.parse().unwrap())).sum();
        ensure(rhs == lhs, || format!("{tree}: sum {rhs} != {lhs}"))?;
    }
    let mut checked = 0;
    for n in 2..=8 {
        for t in all_trees(n) {
            let lhs = Rational::new(BigInt::from(n), t.factorial().into());
            let rhs: Rational = t.leaf_removals().map_err(|e| e.to_string())?.iter().map(inv_factorial).sum();
            ensure(lhs == rhs, || format!("{}: {lhs} != {rhs}", t.encode()))?;
            checked += 1;
        }
    }
    Ok(format!("4 worked instances, {checked} trees with 2..8 vertices"))
}

/// Monotone-from-free coefficients of the irreducible partitions of
/// `{1..m}`, written out for m = 1..5.
fn low_order_relations() -> Vec<(usize, Vec<(&'static str, &'static str)>)> {
    vec![
        (1, vec![("{{1}}", "1")]),
        (2, vec![("{{1,2}}", "1")]),
        (3, vec![("{{1,2,3}}", "1"), ("{{1,3},{2}}", "1/2")]),
        (
            4,
            vec![
                ("{{1,2,3,4}}", "1"),
                ("{{1,4},{2,3}}", "1/2"),
                ("{{1,3,4},{2}}", "1/2"),
                ("{{1,2,4},{3}}", "1/2"),
                ("{{1,4},{2},{3}}", "1/6"),
            ],
        ),
        (
            5,
            vec![
                ("{{1,2,3,4,5}}", "1"),
                ("{{1,5},{2,3,4}}", "1/2"),
                ("{{1,4,5},{2,3}}", "1/2"),
                ("{{1,2,5},{3,4}}", "1/2"),
                ("{{1,3,4,5},{2}}", "1/2"),
                ("{{1,2,4,5},{3}}", "1/2"),
                ("{{1,2,3,5},{4}}", "1/2"),
                ("{{1,4,5},{2},{3}}", "1/6"),
                ("{{1,3,5},{2},{4}}", "1/6"),
                ("{{1,2,5},{3},{4}}", "1/6"),
                ("{{1,5},{2,3},{4}}", "1/6"),
                ("{{1,5},{3,4},{2}}", "1/6"),
                ("{{1,5},{2,4},{3}}", "1/3"),
            ],
        ),
    ]
}

/// Coefficient of `kappa_pi` in `magnus(kappa)(a1...am)`, read off by
/// setting `kappa = 1` on exactly the block words of `pi` over `m`
/// distinct letters.
fn magnus_coefficient(p: &NCPartition, m: usize) -> Result<Rational, String> {
    let mut kappa = Functional::zero(Functional::default_alphabet(m), m).map_err(|e| e.to_string())?;
    for b in p.blocks() {
        let word: Vec<usize> = b.iter().map(|&i| i - 1).collect();
        kappa.set(&word, Rational::one()).map_err(|e| e.to_string())?;
    }
    let rho = magnus(&kappa);
    rho.get(&(0..m).collect::<Vec<_>>()).cloned().map_err(|e| e.to_string())
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for (m, rel) in low_order_relations() {
        let want: BTreeMap<NCPartition, Rational> =
            rel.iter().map(|(p, c)| (p.parse::<NCPartition>().unwrap(), q(c))).collect();
        ensure(want.len() == rel.len(), || format!("order {m}: duplicate partitions in relation"))?;
        let terms = expansion_terms(Kind::Free, Kind::Monotone, m).map_err(|e| e.to_string())?;
        let got: BTreeMap<NCPartition, Rational> =
            terms.iter().map(|t| (t.partition.clone(), t.coeff.clone())).collect();
        ensure(got == want, || format!("order {m}: expansion {got:?} differs from {want:?}"))?;
        for p in enumerate_nc(m).map_err(|e| e.to_string())? {
            let c = magnus_coefficient(&p, m)?;
            let expected = want.get(&p).cloned().unwrap_or_else(Rational::zero);
            ensure(c == expected, || format!("order {m}: magnus coefficient of {p} is {c}, expected {expected}"))?;
            checked += 1;
        }
    }
    Ok(format!("orders 1..5 against the expansion and {checked} magnus extractions"))
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let two = random(2, 7, &mut r);
    let uni = random(1, 9, &mut r);
    for (name, kappa) in [("2 letters, N = 7", &two), ("1 letter, N = 9", &uni)] {
        let report = check_magnus_vs_closed(kappa).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("{name}: {:?}", report.counterexample))?;
    }
    Ok(format!("seed {SEED}, 2 letters N = 7 and 1 letter N = 9"))
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let f = random(2, 7, &mut r);
    same("free -> monotone -> free", &free_from_monotone(&monotone_from_free(&f)), &f)?;
    same("monotone -> free -> monotone", &monotone_from_free(&free_from_monotone(&f)), &f)?;
    same("magnus inverse", &magnus_inverse(&magnus(&f)), &f)?;
    same("magnus after inverse", &magnus(&magnus_inverse(&f)), &f)?;
    same("monotone from free = magnus", &monotone_from_free(&f), &magnus(&f))?;
    same("free from monotone = inverse", &free_from_monotone(&f), &magnus_inverse(&f))?;

    same("boolean -> monotone -> boolean", &boolean_from_monotone(&monotone_from_boolean(&f)), &f)?;
    same("monotone -> boolean -> monotone", &monotone_from_boolean(&boolean_from_monotone(&f)), &f)?;
    same("monotone from boolean", &monotone_from_boolean(&f), &magnus(&f.negate()).negate())?;

    same("free -> boolean -> free", &free_from_boolean(&boolean_from_free(&f)), &f)?;
    same("boolean -> free -> boolean", &boolean_from_free(&free_from_boolean(&f)), &f)?;

    for kind in [Kind::Free, Kind::Boolean, Kind::Monotone] {
        let phi = moments_from(kind, &f).map_err(|e| e.to_string())?;
        same(&format!("{kind} -> moments -> {kind}"), &cumulants_from_moments(kind, &phi).map_err(|e| e.to_string())?, &f)?;
        let back = cumulants_from_moments(kind, &f).map_err(|e| e.to_string())?;
        same(&format!("moments -> {kind} -> moments"), &moments_from(kind, &back).map_err(|e| e.to_string())?, &f)?;
    }

    // every cumulant family describes the same moments
    let kappa = f.clone();
    let phi = moments_from(Kind::Free, &kappa).map_err(|e| e.to_string())?;
    for kind in [Kind::Boolean, Kind::Monotone] {
        let c = convert(Kind::Free, kind, &kappa).map_err(|e| e.to_string())?;
        same(&format!("moments via {kind}"), &moments_from(kind, &c).map_err(|e| e.to_string())?, &phi)?;
    }
    Ok("all directions, 2 letters up to order 7".into())
}

/// `a^n` evaluated on a univariate functional.
fn power(f: &Functional, n: usize) -> Rational {
    f.get(&vec![0; n]).unwrap().clone()
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let (a, b, c) = (random(2, 7, &mut r), random(2, 7, &mut r), random(2, 7, &mut r));
    let report = check_prelie_identity(&a, &b, &c).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("pre-Lie identity: {:?}", report.counterexample))?;

    let alphabet = vec!["x".to_string()];
    let a = Functional::random(alphabet.clone(), 10, &mut r).unwrap();
    let b = Functional::random(alphabet, 10, &mut r).unwrap();
    let p = prelie_product(&a, &b).map_err(|e| e.to_string())?;
    for n in 1..=10 {
        let mut want = Rational::zero();
        for l in 1..n {
            want -= Rational::from_integer(BigInt::from(n - l - 1)) * power(&b, n - l) * power(&a, l);
        }
        let got = power(&p, n);
        ensure(got == want, || format!("univariate product at exponent {n}: {got} vs {want}"))?;
    }
    Ok("identity on 2 letters to order 7, univariate formula to exponent 10".into())
}

const CATALAN: [u64; 11] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];

fn criterion_8() -> Outcome {
    for n in 1..=10 {
        let nc = enumerate_nc(n).map_err(|e| e.to_string())?.len() as u64;
        let irr = enumerate_nc_irr(n).map_err(|e| e.to_string())?.len() as u64;
        ensure(nc == CATALAN[n], || format!("|NC({n})| = {nc}"))?;
        ensure(irr == CATALAN[n - 1], || format!("|NC^irr({n})| = {irr}"))?;
    }
    for n in 1..=7 {
        for p in enumerate_nc(n).map_err(|e| e.to_string())? {
            let brute = oracle::brute_monotone_orders(&p).map_err(|e| e.to_string())?;
            ensure(p.monotone_count() == brute.into(), || format!("m({p}) = {} vs {brute}", p.monotone_count()))?;
        }
    }
    for n in 1..=7 {
        for t in all_trees(n) {
            for k in 1..=n {
                let brute = oracle::brute_quasi_orders(&t, k).map_err(|e| e.to_string())?;
                ensure(t.omega_k(k) == brute.into(), || format!("omega_{k}({}) vs brute {brute}", t.encode()))?;
            }
        }
    }
    for n in 1..=8 {
        let mut labeled = 0usize;
        for k in 1..=n {
            labeled += enumerate_monotone_irr(n, k).map_err(|e| e.to_string())?.len();
        }
        let weighted: num_bigint::BigUint =
            enumerate_nc_irr(n).map_err(|e| e.to_string())?.iter().map(NCPartition::monotone_count).sum();
        ensure(weighted == labeled.into(), || format!("n = {n}: {labeled} labeled vs {weighted} weighted"))?;
    }
    Ok("Catalan counts to 10, brute-force m and omega_k to 7, monotone census to 8".into())
}

fn criterion_9() -> Outcome {
    let mut kappa = Functional::zero(vec!["a".into()], 10).map_err(|e| e.to_string())?;
    kappa.set(&[0, 0], Rational::one()).map_err(|e| e.to_string())?;
    let phi = moments_from(Kind::Free, &kappa).map_err(|e| e.to_string())?;
    for n in 1..=10 {
        let want = if n % 2 == 0 { Rational::from_integer(CATALAN[n / 2].into()) } else { Rational::zero() };
        let got = power(&phi, n);
        ensure(got == want, || format!("phi(a^{n}) = {got}, expected {want}"))?;
    }
    Ok("semicircle moments to order 10".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("omega table", Duration::from_secs(1), criterion_1),
        ("omega dual computation", Duration::from_secs(30), criterion_2),
        ("Kreimer identity", Duration::from_secs(10), criterion_3),
        ("low-order monotone-free relations", Duration::from_secs(1), criterion_4),
        ("Magnus expansion vs closed formula", Duration::from_secs(120), criterion_5),
        ("round trips", Duration::from_secs(60), criterion_6),
        ("pre-Lie identity and univariate product", Duration::from_secs(30), criterion_7),
        ("counting cross-checks", Duration::from_secs(60), criterion_8),
        ("semicircle moments", Duration::from_secs(1), criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let line = match outcome {
            Ok(detail) if elapsed <= budget => format!("PASS {}: {name} ({detail})", i + 1),
            Ok(detail) => {
                failed += 1;
                format!("FAIL {}: {name} ({detail}) exceeded {budget:?}", i + 1)
            }
            Err(msg) => {
                failed += 1;
                format!("FAIL {}: {name}: {msg}", i + 1)
            }
        };
        println!("{line} [{:.2}s]", elapsed.as_secs_f64());
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
