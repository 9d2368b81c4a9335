//! The pre-Lie algebra of multilinear functionals on words.
//!
//! A [`Functional`] is a dense table of exact values on every non-empty word
//! of length at most `max_order` over a finite alphabet. The product
//!
//! ```text
//! (a |> b)(w) = - sum_{w = w1 w2 w3, all parts non-empty} b(w1 w3) a(w2)
//! ```
//!
//! only reads values on strictly shorter words, which is what makes every
//! series below (Magnus expansion, its inverse, exponentials of left
//! multiplication) a finite exact computation once truncated at
//! `max_order`.

use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::trees::{bernoulli, factorial};
use crate::Rational;

/// A non-empty sequence of letter indices into an alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return domain("words are non-empty");
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The subword on the given 0-based positions, in increasing order.
    pub fn sub(&self, positions: &[usize]) -> Word {
        Word(positions.iter().map(|&i| self.0[i]).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    alphabet: Vec<String>,
    max_order: usize,
    values: Vec<Rational>,
}

impl Functional {
    pub fn zero(alphabet: Vec<String>, max_order: usize) -> Result<Self> {
        if alphabet.is_empty() {
            return domain("alphabet must be non-empty");
        }
        if max_order == 0 {
            return domain("max_order must be positive");
        }
        let mut sorted = alphabet.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != alphabet.len() {
            return domain("alphabet letters must be distinct");
        }
        let total = offset(alphabet.len(), max_order + 1);
        Ok(Functional { alphabet, max_order, values: vec![Rational::zero(); total] })
    }

    /// Alphabet `a, b, c, ...` (or `x0, x1, ...` past 26 letters).
    pub fn default_alphabet(size: usize) -> Vec<String> {
        (0..size)
            .map(|i| {
                if size <= 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("x{i}")
                }
            })
            .collect()
    }

    pub fn from_fn(
        alphabet: Vec<String>,
        max_order: usize,
        mut f: impl FnMut(&[usize]) -> Rational,
    ) -> Result<Self> {
        let mut out = Self::zero(alphabet, max_order)?;
        let q = out.alphabet.len();
        for len in 1..=max_order {
            for (idx, w) in WordIter::new(q, len).enumerate() {
                out.values[offset(q, len) + idx] = f(&w);
            }
        }
        Ok(out)
    }

    /// Random values with numerators in `[-9, 9]` and denominators in
    /// `{1, 2, 3, 5}`.
    pub fn random(alphabet: Vec<String>, max_order: usize, rng: &mut impl Rng) -> Result<Self> {
        const DENOMINATORS: [i64; 4] = [1, 2, 3, 5];
        Self::from_fn(alphabet, max_order, |_| {
            let num: i64 = rng.gen_range(-9..=9);
            let den = DENOMINATORS[rng.gen_range(0..DENOMINATORS.len())];
            Rational::new(num.into(), den.into())
        })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn q(&self) -> usize {
        self.alphabet.len()
    }

    /// Positions of all words of length `len` in the value table.
    fn stratum(&self, len: usize) -> Range<usize> {
        offset(self.q(), len)..offset(self.q(), len + 1)
    }

    /// All words of length `len`, in table order.
    pub fn words(&self, len: usize) -> impl Iterator<Item = Vec<usize>> {
        WordIter::new(self.q(), len)
    }

    fn index_of(&self, letters: impl ExactSizeIterator<Item = usize>) -> usize {
        let len = letters.len();
        let q = self.q();
        offset(q, len) + letters.fold(0, |acc, l| acc * q + l)
    }

    fn check_word(&self, letters: &[usize]) -> Result<()> {
        if letters.is_empty() {
            return domain("words are non-empty");
        }
        if letters.len() > self.max_order {
            return Err(Error::Truncation { len: letters.len(), max_order: self.max_order });
        }
        if let Some(l) = letters.iter().find(|&&l| l >= self.q()) {
            return domain(format!("letter index {l} outside the alphabet"));
        }
        Ok(())
    }

    pub fn get(&self, letters: &[usize]) -> Result<&Rational> {
        self.check_word(letters)?;
        Ok(&self.values[self.index_of(letters.iter().copied())])
    }

    pub fn set(&mut self, letters: &[usize], value: Rational) -> Result<()> {
        self.check_word(letters)?;
        let i = self.index_of(letters.iter().copied());
        self.values[i] = value;
        Ok(())
    }

    /// Value on the subword of `w` at the given 0-based positions.
    pub(crate) fn at_positions(&self, w: &[usize], positions: &[usize]) -> &Rational {
        &self.values[self.index_of(positions.iter().map(|&i| w[i]))]
    }

    /// `alpha_pi(w)`: product of values on the subwords cut out by `blocks`
    /// (1-based positions, as in partition blocks).
    pub fn eval_blocks(&self, w: &Word, blocks: &[Vec<usize>]) -> Result<Rational> {
        self.check_word(w.letters()).or_else(|e| match e {
            // the word itself may be longer than max_order as long as the blocks are not
            Error::Truncation { .. } => Ok(()),
            other => Err(other),
        })?;
        let mut seen = vec![false; w.len()];
        for b in blocks {
            for &i in b {
                if i == 0 || i > w.len() || seen[i - 1] {
                    return domain("blocks must partition the positions of the word");
                }
                seen[i - 1] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return domain("blocks must partition the positions of the word");
        }
        let mut acc = Rational::one();
        for b in blocks {
            if b.len() > self.max_order {
                return Err(Error::Truncation { len: b.len(), max_order: self.max_order });
            }
            let mut sorted = b.clone();
            sorted.sort_unstable();
            acc *= &self.values[self.index_of(sorted.iter().map(|&i| w.letters()[i - 1]))];
        }
        Ok(acc)
    }

    pub fn is_compatible(&self, other: &Functional) -> bool {
        self.alphabet == other.alphabet && self.max_order == other.max_order
    }

    fn require_compatible(&self, other: &Functional) -> Result<()> {
        if !self.is_compatible(other) {
            return domain("functionals differ in alphabet or max_order");
        }
        Ok(())
    }

    pub fn add(&self, other: &Functional) -> Result<Functional> {
        self.require_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Functional { values, ..self.clone_shape() })
    }

    pub fn sub(&self, other: &Functional) -> Result<Functional> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> Functional {
        Functional { values: self.values.iter().map(|v| -v).collect(), ..self.clone_shape() }
    }

    pub fn scale(&self, c: &Rational) -> Functional {
        Functional { values: self.values.iter().map(|v| v * c).collect(), ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Functional {
        Functional { alphabet: self.alphabet.clone(), max_order: self.max_order, values: Vec::new() }
    }

    /// Copy of `self` keeping only words up to length `max_order`.
    pub fn truncate(&self, max_order: usize) -> Result<Functional> {
        if max_order == 0 || max_order > self.max_order {
            return domain("truncation order must lie in 1..=max_order");
        }
        let end = offset(self.q(), max_order + 1);
        Ok(Functional {
            alphabet: self.alphabet.clone(),
            max_order,
            values: self.values[..end].to_vec(),
        })
    }

    /// First word (by length, then table order) where the two differ.
    pub fn first_difference(&self, other: &Functional) -> Option<Vec<usize>> {
        if !self.is_compatible(other) {
            return None;
        }
        (1..=self.max_order).find_map(|len| {
            self.words(len)
                .zip(self.stratum(len))
                .find(|(_, i)| self.values[*i] != other.values[*i])
                .map(|(w, _)| w)
        })
    }

    /// Iterates `(word, value)` over the whole table.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> {
        (1..=self.max_order)
            .flat_map(move |len| self.words(len))
            .zip(self.values.iter())
    }

    /// Letters of a word joined by commas, e.g. `a,b,a`.
    pub fn word_key(&self, letters: &[usize]) -> String {
        letters
            .iter()
            .map(|&l| self.alphabet[l].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Inverse of [`Functional::word_key`].
    pub fn parse_word_key(&self, key: &str) -> Result<Vec<usize>> {
        let letters = key
            .split(',')
            .map(|s| {
                self.alphabet
                    .iter()
                    .position(|a| a == s.trim())
                    .ok_or_else(|| Error::Parse(format!("letter {s:?} not in alphabet")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.check_word(&letters)?;
        Ok(letters)
    }
}

/// Index of the first word of length `len` in a table over `q` letters.
fn offset(q: usize, len: usize) -> usize {
    (1..len).map(|l| q.pow(l as u32)).sum()
}

/// Words of a fixed length in base-`q` order.
struct WordIter {
    q: usize,
    next: Option<Vec<usize>>,
}

impl WordIter {
    fn new(q: usize, len: usize) -> Self {
        WordIter { q, next: (len > 0).then(|| vec![0; len]) }
    }
}

impl Iterator for WordIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.q {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// `(alpha |> beta)(w)` on a single word.
fn product_at(alpha: &Functional, beta: &Functional, w: &[usize]) -> Rational {
    let m = w.len();
    let mut acc = Rational::zero();
    if m < 3 {
        return acc;
    }
    for i in 1..m - 1 {
        for j in i + 1..m {
            let middle = &alpha.values[alpha.index_of(w[i..j].iter().copied())];
            if middle.is_zero() {
                continue;
            }
            let outer_letters = w[..i].iter().chain(&w[j..]).copied();
            let outer = &beta.values[beta.index_of(ExactChain(outer_letters, m - (j - i)))];
            if !outer.is_zero() {
                acc -= outer * middle;
            }
        }
    }
    acc
}

/// Wraps an iterator with a known length.
struct ExactChain<I>(I, usize);

impl<I: Iterator<Item = usize>> Iterator for ExactChain<I> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let x = self.0.next();
        if x.is_some() {
            self.1 -= 1;
        }
        x
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.1, Some(self.1))
    }
}

impl<I: Iterator<Item = usize>> ExactSizeIterator for ExactChain<I> {}

/// Fills stratum `len` of `out` with `(alpha |> beta)`.
fn product_stratum(alpha: &Functional, beta: &Functional, out: &mut Functional, len: usize) {
    let range = out.stratum(len);
    for (w, i) in WordIter::new(out.q(), len).zip(range) {
        out.values[i] = product_at(alpha, beta, &w);
    }
}

/// The pre-Lie product `alpha |> beta`.
pub fn prelie_product(alpha: &Functional, beta: &Functional) -> Result<Functional> {
    alpha.require_compatible(beta)?;
    let mut out = Functional::zero(alpha.alphabet.clone(), alpha.max_order)?;
    for len in 3..=alpha.max_order {
        product_stratum(alpha, beta, &mut out, len);
    }
    Ok(out)
}

/// `L^n_{alpha |>}(beta) = alpha |> (alpha |> ( ... |> beta))`.
pub fn left_power(alpha: &Functional, beta: &Functional, n: usize) -> Result<Functional> {
    alpha.require_compatible(beta)?;
    let mut cur = beta.clone();
    for _ in 0..n {
        if cur.is_zero() {
            break;
        }
        cur = prelie_product(alpha, &cur)?;
    }
    Ok(cur)
}

/// `R^n_{|> alpha}(beta) = ((beta |> alpha) |> alpha) ... |> alpha`.
pub fn right_power(alpha: &Functional, beta: &Functional, n: usize) -> Result<Functional> {
    alpha.require_compatible(beta)?;
    let mut cur = beta.clone();
    for _ in 0..n {
        if cur.is_zero() {
            break;
        }
        cur = prelie_product(&cur, alpha)?;
    }
    Ok(cur)
}

/// `sum_{n >= 0} c_n L^n_{theta |>}(kappa)` for a fixed `theta`, cut where
/// the terms provably vanish (`L^n` lives on words of length >= n + 2).
fn left_series(
    theta: &Functional,
    kappa: &Functional,
    coeff: impl Fn(usize) -> Rational,
) -> Result<Functional> {
    theta.require_compatible(kappa)?;
    let mut acc = kappa.scale(&coeff(0));
    let mut term = kappa.clone();
    for n in 1..kappa.max_order {
        term = prelie_product(theta, &term)?;
        if term.is_zero() {
            break;
        }
        let c = coeff(n);
        if !c.is_zero() {
            acc = acc.add(&term.scale(&c))?;
        }
    }
    Ok(acc)
}

/// The pre-Lie Magnus expansion `Omega'(kappa)`, the solution of
/// `Omega' = sum_n B_n / n! L^n_{Omega' |>}(kappa)`.
///
/// Solved stratum by stratum: on words of length `m` the right-hand side
/// reads `Omega'` only on words of length at most `m - 2`, so each stratum
/// is a direct evaluation. `powers[n]` holds `L^n_{Omega' |>}(kappa)` on the
/// strata computed so far.
pub fn magnus(kappa: &Functional) -> Functional {
    let order = kappa.max_order;
    let mut omega = kappa.clone();
    let mut powers: Vec<Functional> = vec![kappa.clone()];
    let coeffs: Vec<Rational> = (0..order)
        .map(|n| bernoulli(n) / BigInt::from(factorial(n)))
        .collect();
    for _ in 1..order {
        powers.push(kappa.clone_zeroed());
    }
    for len in 3..=order {
        // L^n vanishes below length n + 2
        for n in 1..=len - 2 {
            let (done, rest) = powers.split_at_mut(n);
            product_stratum(&omega, &done[n - 1], &mut rest[0], len);
        }
        for i in omega.stratum(len) {
            let mut v = Rational::zero();
            for (n, p) in powers.iter().enumerate().take(len - 1) {
                if !coeffs[n].is_zero() && !p.values[i].is_zero() {
                    v += &coeffs[n] * &p.values[i];
                }
            }
            omega.values[i] = v;
        }
    }
    omega
}

/// `W(kappa) = sum_{n >= 0} L^n_{kappa |>}(kappa) / (n + 1)!`, the
/// compositional inverse of [`magnus`].
pub fn magnus_inverse(kappa: &Functional) -> Functional {
    left_series(kappa, kappa, |n| Rational::new(BigInt::one(), factorial(n + 1).into()))
        .expect("a functional is compatible with itself")
}

/// `exp(sign * L_{theta |>})(kappa)`.
pub fn exp_left(theta: &Functional, kappa: &Functional, negative: bool) -> Result<Functional> {
    left_series(theta, kappa, |n| {
        let c = Rational::new(BigInt::one(), factorial(n).into());
        if negative && n % 2 == 1 {
            -c
        } else {
            c
        }
    })
}

impl Functional {
    fn clone_zeroed(&self) -> Functional {
        Functional {
            alphabet: self.alphabet.clone(),
            max_order: self.max_order,
            values: vec![Rational::zero(); self.values.len()],
        }
    }
}

/// A bracketing of pre-Lie products over functional leaves.
#[derive(Clone, Debug)]
pub enum PreLieMonomial<'a> {
    Leaf(&'a Functional),
    Product(Box<PreLieMonomial<'a>>, Box<PreLieMonomial<'a>>),
}

impl<'a> PreLieMonomial<'a> {
    pub fn leaf(f: &'a Functional) -> Self {
        PreLieMonomial::Leaf(f)
    }

    pub fn product(left: PreLieMonomial<'a>, right: PreLieMonomial<'a>) -> Self {
        PreLieMonomial::Product(Box::new(left), Box::new(right))
    }

    /// Minimal word length on which the monomial can be non-zero:
    /// `#(P1 |> P2) = #(P1) + max(2, #(P2))`.
    pub fn effective_degree(&self) -> usize {
        match self {
            PreLieMonomial::Leaf(_) => 1,
            PreLieMonomial::Product(l, r) => l.effective_degree() + r.effective_degree().max(2),
        }
    }

    pub fn evaluate(&self) -> Result<Functional> {
        match self {
            PreLieMonomial::Leaf(f) => Ok((*f).clone()),
            PreLieMonomial::Product(l, r) => prelie_product(&l.evaluate()?, &r.evaluate()?),
        }
    }
}
