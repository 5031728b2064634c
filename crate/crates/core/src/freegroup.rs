//! Free groups, their integral group rings, and Fox calculus.
//!
//! Words are stored letter by letter with exponents `+1`/`-1` and are kept
//! freely reduced. The named generators `x, y, z, w` are indices `0..4`; the
//! word and Fox-derivative engine itself works for any rank.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cyclo::CyclotomicNumber;
use crate::{Error, Result};

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const W: usize = 3;

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    /// `+1` or `-1`.
    pub exponent: i8,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Self {
        assert!(exponent == 1 || exponent == -1, "letter exponents are +1 or -1");
        Letter {
            generator,
            exponent,
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            exponent: -self.exponent,
        }
    }
}

/// Freely reduced word in a free group of fixed rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<Letter>,
}

/// Freely reduce an arbitrary letter sequence.
pub fn reduce(rank: usize, letters: &[Letter]) -> FreeWord {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        assert!(l.generator < rank, "generator {} out of range for rank {}", l.generator, rank);
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    FreeWord { rank, letters: out }
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        FreeWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, g: usize) -> Self {
        reduce(rank, &[Letter::new(g, 1)])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        reduce(self.rank, &letters)
    }

    /// Image in the abelianization under "every generator maps to 1".
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.exponent as i64).sum()
    }
}

impl Mul<&FreeWord> for &FreeWord {
    type Output = FreeWord;
    fn mul(self, rhs: &FreeWord) -> FreeWord {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        reduce(self.rank, &letters)
    }
}

impl Mul for FreeWord {
    type Output = FreeWord;
    fn mul(self, rhs: FreeWord) -> FreeWord {
        &self * &rhs
    }
}

/// `[u, v] = u v u^-1 v^-1`.
pub fn commutator(u: &FreeWord, v: &FreeWord) -> FreeWord {
    &(&(u * v) * &u.inverse()) * &v.inverse()
}

/// Printed name of generator `g` in a free group of the given rank.
pub fn generator_name(rank: usize, g: usize) -> String {
    if rank <= NAMES.len() {
        NAMES[g].to_string()
    } else {
        format!("g{g}")
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let power = (j - i) as i64 * l.exponent as i64;
            let name = generator_name(self.rank, l.generator);
            parts.push(if power == 1 {
                name
            } else {
                format!("{name}^{power}")
            });
            i = j;
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Parse a word in `x, y, z, w` (rank 4).
///
/// Grammar: juxtaposed factors separated by whitespace; a factor is a letter,
/// a parenthesised word or a commutator `[u, v]`, optionally followed by an
/// integer power `^n`. Example: `z^-1 [z,w] z`.
pub fn parse_word(s: &str) -> Result<FreeWord> {
    let mut p = Parser {
        chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    let w = p.word()?;
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!(
            "unexpected {:?} at position {} in word {s:?}",
            p.chars[p.pos], p.pos
        )));
    }
    Ok(w)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?} at position {}", self.pos)))
        }
    }

    fn word(&mut self) -> Result<FreeWord> {
        let mut acc = FreeWord::identity(4);
        while let Some(c) = self.peek() {
            if c == ')' || c == ']' || c == ',' {
                break;
            }
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FreeWord> {
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                w
            }
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                commutator(&u, &v)
            }
            Some(c) => {
                let g = NAMES
                    .iter()
                    .position(|n| n.starts_with(c))
                    .ok_or_else(|| Error::Parse(format!("unknown generator {c:?}")))?;
                self.pos += 1;
                FreeWord::generator(4, g)
            }
            None => return Err(Error::Parse("unexpected end of word".into())),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let paren = self.peek() == Some('(');
        if paren {
            self.pos += 1;
        }
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let n = text
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent {text:?}")))?;
        if paren {
            self.expect(')')?;
        }
        Ok(n)
    }
}

/// Finite integer combination of free-group words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    rank: usize,
    terms: BTreeMap<FreeWord, i64>,
}

impl GroupRingElement {
    pub fn zero(rank: usize) -> Self {
        GroupRingElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::from_word(FreeWord::identity(rank))
    }

    pub fn from_word(w: FreeWord) -> Self {
        Self::from_term(w, 1)
    }

    pub fn from_term(w: FreeWord, c: i64) -> Self {
        let mut e = Self::zero(w.rank);
        e.add_term(w, c);
        e
    }

    /// `1 + g + ... + g^(k-1)` for `k >= 0`.
    pub fn geometric_sum(g: &FreeWord, k: u32) -> Self {
        let mut e = Self::zero(g.rank);
        for i in 0..k {
            e.add_term(g.pow(i as i64), 1);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coefficient(&self, w: &FreeWord) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    fn add_term(&mut self, w: FreeWord, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut e = Self::zero(self.rank);
        for (w, c) in self.terms() {
            e.add_term(w.clone(), c * k);
        }
        e
    }

    /// Apply the ring homomorphism sending every generator to `omega`.
    pub fn evaluate_diagonal(&self, omega: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        let order = omega
            .root_of_unity_order()
            .ok_or_else(|| Error::NotRootOfUnity(omega.to_string()))?;
        let mut acc = CyclotomicNumber::zero(omega.conductor());
        for (w, c) in self.terms() {
            let s = w.exponent_sum().rem_euclid(order as i64);
            let v = omega.pow(s)?;
            acc += &v.scale(&num_rational::BigRational::from_integer(c.into()));
        }
        Ok(acc)
    }
}

impl Add<&GroupRingElement> for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut e = self.clone();
        for (w, c) in rhs.terms() {
            e.add_term(w.clone(), c);
        }
        e
    }
}

impl Sub<&GroupRingElement> for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self + &(-rhs)
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.scale(-1)
    }
}

impl Mul<&GroupRingElement> for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut e = GroupRingElement::zero(self.rank);
        for (u, a) in self.terms() {
            for (v, b) in rhs.terms() {
                e.add_term(u * v, a * b);
            }
        }
        e
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<GroupRingElement> for GroupRingElement {
            type Output = GroupRingElement;
            fn $f(self, rhs: GroupRingElement) -> GroupRingElement {
                $tr::$f(&self, &rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl From<FreeWord> for GroupRingElement {
    fn from(w: FreeWord) -> Self {
        GroupRingElement::from_word(w)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms().enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mag, w.is_empty()) {
                (1, _) => write!(f, "{w}")?,
                (_, true) => write!(f, "{mag}")?,
                _ => write!(f, "{mag} {w}")?,
            }
        }
        Ok(())
    }
}

/// Fox derivative `d w / d g` in the integral group ring.
///
/// For `w = l_1 ... l_k` this is the sum over letters equal to `g` of the
/// prefix before it, and over letters equal to `g^-1` of minus the prefix
/// including it.
pub fn fox_derivative(w: &FreeWord, g: usize) -> GroupRingElement {
    assert!(g < w.rank, "generator {g} out of range for rank {}", w.rank);
    let mut e = GroupRingElement::zero(w.rank);
    for (i, l) in w.letters.iter().enumerate() {
        if l.generator != g {
            continue;
        }
        if l.exponent == 1 {
            e.add_term(reduce(w.rank, &w.letters[..i]), 1);
        } else {
            e.add_term(reduce(w.rank, &w.letters[..=i]), -1);
        }
    }
    e
}

/// The based curves `alpha = z^-1 [z,w] z` and
/// `beta(m, n) = [y, x^-1] [(y x^m)^-1, z^n w^-1]`.
pub fn build_alpha_beta(m: u32, n: u32) -> (FreeWord, FreeWord) {
    let g = |i| FreeWord::generator(4, i);
    let (x, y, z, w) = (g(X), g(Y), g(Z), g(W));
    let alpha = &(&z.inverse() * &commutator(&z, &w)) * &z;
    let yxm = &y * &x.pow(m as i64);
    let znw = &z.pow(n as i64) * &w.inverse();
    let beta = &commutator(&y, &x.inverse()) * &commutator(&yxm.inverse(), &znw);
    (alpha, beta)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoxEntry {
    /// `"alpha"` or `"beta"`.
    pub curve: &'static str,
    pub generator: usize,
    pub derivative: GroupRingElement,
}

/// The eight Fox derivatives of `alpha` and `beta(m, n)` with respect to
/// `x, y, z, w`.
pub fn fox_table(m: u32, n: u32) -> Vec<FoxEntry> {
    let (alpha, beta) = build_alpha_beta(m, n);
    [("alpha", &alpha), ("beta", &beta)]
        .into_iter()
        .flat_map(|(curve, word)| {
            [X, Y, Z, W].into_iter().map(move |g| FoxEntry {
                curve,
                generator: g,
                derivative: fox_derivative(word, g),
            })
        })
        .collect()
}

/// Coefficients of a word on the lifted generators `x, y, z, w` in the
/// twisted relative first homology, i.e. its four Fox derivatives evaluated
/// with every generator sent to `omega`.
pub fn abelianized_vector(w: &FreeWord, omega: &CyclotomicNumber) -> Result<[CyclotomicNumber; 4]> {
    if w.rank() != 4 {
        return Err(Error::Dimension(format!("expected a rank-4 word, got rank {}", w.rank())));
    }
    crate::cyclo::require_nontrivial_root(omega)?;
    let v = [X, Y, Z, W].map(|g| fox_derivative(w, g).evaluate_diagonal(omega));
    let [a, b, c, d] = v;
    Ok([a?, b?, c?, d?])
}

/// Integer Laurent polynomial in one variable, keyed by exponent.
pub type Laurent = BTreeMap<i64, i64>;

impl GroupRingElement {
    /// Image under the map sending every generator to a single variable `t`.
    pub fn diagonal_laurent(&self) -> Laurent {
        let mut out = Laurent::new();
        for (w, c) in self.terms() {
            *out.entry(w.exponent_sum()).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn laurent_sub(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(*e).or_insert(0) -= c;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Whether `p(omega) = 0` for a primitive `order`-th root of unity `omega`,
/// i.e. whether `Phi_order` divides `p`.
pub fn vanishes_at_primitive_root(p: &Laurent, order: u64) -> bool {
    let Some((&low, _)) = p.iter().next() else {
        return true;
    };
    let high = *p.keys().next_back().unwrap();
    let mut dense: Vec<BigInt> = vec![BigInt::zero(); (high - low + 1) as usize];
    for (e, c) in p {
        dense[(e - low) as usize] = BigInt::from(*c);
    }
    let phi = crate::cyclo::cyclotomic_coefficients(order);
    let d = phi.len() - 1;
    // Phi is monic: eliminate the top coefficients one by one.
    for top in (d..dense.len()).rev() {
        let c = std::mem::take(&mut dense[top]);
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(d) {
            dense[top - d + j] -= &c * pj;
        }
    }
    dense.iter().all(Zero::is_zero)
}

/// The six 2x2 minors of the pair of Fox-derivative vectors of `alpha` and
/// `beta(m, n)`, abelianized to Laurent polynomials in `t`.
pub fn independence_minors(m: u32, n: u32) -> Vec<Laurent> {
    let (alpha, beta) = build_alpha_beta(m, n);
    let a = [X, Y, Z, W].map(|g| fox_derivative(&alpha, g).diagonal_laurent());
    let b = [X, Y, Z, W].map(|g| fox_derivative(&beta, g).diagonal_laurent());
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            out.push(laurent_sub(&laurent_mul(&a[i], &b[j]), &laurent_mul(&a[j], &b[i])));
        }
    }
    out
}

/// Whether `alpha` and `beta(m, n)` give linearly independent vectors over
/// `Q(omega)`: some 2x2 minor is nonzero at `omega`. A minor is an integer
/// Laurent polynomial in `omega`, so it vanishes exactly when the cyclotomic
/// polynomial of the order of `omega` divides it.
pub fn independence_check(m: u32, n: u32, omega: &CyclotomicNumber) -> Result<bool> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    crate::cyclo::require_nontrivial_root(omega)?;
    let order = omega.root_of_unity_order().expect("checked above");
    Ok(independence_minors(m, n)
        .iter()
        .any(|p| !vanishes_at_primitive_root(p, order)))
}

/// The same test carried out by evaluating both vectors in `Q(omega)`.
pub fn independence_check_by_evaluation(m: u32, n: u32, omega: &CyclotomicNumber) -> Result<bool> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let (alpha, beta) = build_alpha_beta(m, n);
    let a = abelianized_vector(&alpha, omega)?;
    let b = abelianized_vector(&beta, omega)?;
    for i in 0..4 {
        for j in i + 1..4 {
            let minor = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
            if !minor.is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
