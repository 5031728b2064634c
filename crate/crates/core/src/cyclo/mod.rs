//! Exact arithmetic in cyclotomic fields `Q(zeta_m)`.
//!
//! An element is stored as the coefficient vector of a polynomial in
//! `zeta_m = exp(2 pi i / m)` of degree below `phi(m)`, reduced modulo the
//! cyclotomic polynomial `Phi_m`. Binary operations lift both operands to the
//! least common multiple of their conductors first.

mod interval;
mod poly;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};
use interval::Fixed;
pub use poly::{cyclotomic_coefficients, euler_phi};

static INITIAL_PRECISION_BITS: AtomicU32 = AtomicU32::new(64);

/// Set the starting precision of the interval evaluation used by
/// [`CyclotomicNumber::sign_of_real`]. The precision doubles until the sign is
/// decided, so this only affects speed, never results.
pub fn set_initial_precision_bits(bits: u32) {
    INITIAL_PRECISION_BITS.store(bits.max(8), Ordering::Relaxed);
}

pub fn initial_precision_bits() -> u32 {
    INITIAL_PRECISION_BITS.load(Ordering::Relaxed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match self.as_i8() * rhs.as_i8() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }
}

/// Element of `Q(zeta_m)` in canonical form.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

impl CyclotomicNumber {
    pub fn zero(conductor: u64) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        let phi = euler_phi(conductor) as usize;
        CyclotomicNumber {
            conductor,
            coeffs: vec![BigRational::zero(); phi],
        }
    }

    pub fn one(conductor: u64) -> Self {
        Self::from_rational_in(BigRational::one(), conductor)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_rational_in(q, 1)
    }

    pub fn from_rational_in(q: BigRational, conductor: u64) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = q;
        z
    }

    /// `zeta_m^power`; the power is reduced modulo `m`.
    pub fn root_of_unity(m: u64, power: i64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let p = power.rem_euclid(m as i64) as usize;
        let mut v = vec![BigRational::zero(); (m as usize).max(p + 1)];
        v[p] = BigRational::one();
        Self::from_poly(m, v)
    }

    /// Reduce an arbitrary polynomial in `zeta_m` (lowest degree first).
    pub fn from_poly(conductor: u64, coeffs: Vec<BigRational>) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        CyclotomicNumber {
            conductor,
            coeffs: reduce(conductor, coeffs),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Canonical coefficients, length `phi(conductor)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// Re-express in `Q(zeta_target)`; `target` must be a multiple of the conductor.
    pub fn lift(&self, target: u64) -> Result<Self> {
        if target == 0 || target % self.conductor != 0 {
            return Err(Error::InvalidParameter(format!(
                "cannot lift conductor {} to {}",
                self.conductor, target
            )));
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let k = (target / self.conductor) as usize;
        let mut v = vec![BigRational::zero(); target as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[j * k] = c.clone();
            }
        }
        Ok(Self::from_poly(target, v))
    }

    /// Express in the subfield `Q(zeta_target)` if the element lies there.
    pub fn reduce_conductor(&self, target: u64) -> Option<Self> {
        if target == 0 || self.conductor % target != 0 {
            return None;
        }
        let phi_t = euler_phi(target) as usize;
        let basis: Vec<Self> = (0..phi_t)
            .map(|i| Self::root_of_unity(target, i as i64).lift(self.conductor).unwrap())
            .collect();
        let rows = self.coeffs.len();
        let matrix: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| basis.iter().map(|b| b.coeffs[r].clone()).collect())
            .collect();
        let x = solve_linear(matrix, self.coeffs.clone())?;
        Some(CyclotomicNumber {
            conductor: target,
            coeffs: x,
        })
    }

    fn with_common(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let l = lcm(self.conductor, other.conductor);
        (self.lift(l).unwrap(), other.lift(l).unwrap())
    }

    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let m = self.conductor as usize;
        let mut v = vec![BigRational::zero(); m];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[(m - j) % m] = c.clone();
            }
        }
        Self::from_poly(self.conductor, v)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn mul_same(&self, other: &Self) -> Self {
        debug_assert_eq!(self.conductor, other.conductor);
        if let Some(q) = self.as_rational() {
            return other.scale(&q);
        }
        if let Some(q) = other.as_rational() {
            return self.scale(&q);
        }
        let n = self.coeffs.len();
        let mut v = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::from_poly(self.conductor, v)
    }

    /// Root-of-unity test: `Some(order)` when `self^order = 1`.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        // Roots of unity in Q(zeta_m) are the powers of zeta_l, l = lcm(2, m).
        // The float angle proposes the exponent; exact equality confirms it.
        let l = lcm(2, self.conductor);
        let (re, im) = self.to_complex_f64();
        if ((re * re + im * im) - 1.0).abs() > 1e-6 {
            return None;
        }
        let turn = im.atan2(re) / (2.0 * std::f64::consts::PI);
        let j = ((turn * l as f64).round() as i64).rem_euclid(l as i64);
        if *self != Self::root_of_unity(l, j) {
            return None;
        }
        Some(l / (j as u64).gcd(&l))
    }

    /// Inverse of a nonzero rational or a root of unity.
    pub fn inverse(&self) -> Result<Self> {
        if let Some(q) = self.as_rational() {
            if q.is_zero() {
                return Err(Error::NotInvertible("zero".into()));
            }
            return Ok(Self::from_rational_in(q.recip(), self.conductor));
        }
        if self.root_of_unity_order().is_some() {
            return Ok(self.conj());
        }
        Err(Error::NotInvertible(self.to_string()))
    }

    /// Field inverse of an arbitrary nonzero element, by solving the linear
    /// system of multiplication by `self` on the power basis.
    pub(crate) fn field_inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero".into()));
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational_in(q.recip(), self.conductor));
        }
        let n = self.coeffs.len();
        let columns: Vec<Self> = (0..n)
            .map(|i| self * &Self::root_of_unity(self.conductor, i as i64))
            .collect();
        let matrix: Vec<Vec<BigRational>> = (0..n)
            .map(|r| columns.iter().map(|c| c.coeffs[r].clone()).collect())
            .collect();
        let mut rhs = vec![BigRational::zero(); n];
        rhs[0] = BigRational::one();
        let x = solve_linear(matrix, rhs).expect("nonzero element of a field is invertible");
        Ok(CyclotomicNumber {
            conductor: self.conductor,
            coeffs: x,
        })
    }

    fn pow_nonneg(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents need [`inverse`](Self::inverse).
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow_nonneg(e as u64))
        } else {
            Ok(self.inverse()?.pow_nonneg(e.unsigned_abs()))
        }
    }

    /// Exact sign of a real element under `zeta_m -> exp(2 pi i / m)`.
    pub fn sign_of_real(&self) -> Result<Sign> {
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        if self.is_zero() {
            return Ok(Sign::Zero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(if q.is_positive() {
                Sign::Positive
            } else {
                Sign::Negative
            });
        }
        let mut bits = initial_precision_bits();
        loop {
            if let Some(s) = self.real_enclosure(bits).strict_sign() {
                return Ok(if s > 0 { Sign::Positive } else { Sign::Negative });
            }
            bits *= 2;
        }
    }

    fn real_enclosure(&self, bits: u32) -> interval::Interval {
        let f = Fixed::new(bits);
        let cosines = cosine_table(self.conductor, bits);
        let mut acc = f.zero();
        for (c, cos) in self.coeffs.iter().zip(cosines.iter()) {
            if !c.is_zero() {
                acc = f.add(&acc, &f.scale_rational(cos, c));
            }
        }
        acc
    }

    /// Floating-point value, for display only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let m = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (j, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                let a = 2.0 * std::f64::consts::PI * j as f64 / m;
                (re + c * a.cos(), im + c * a.sin())
            })
    }
}

/// Characters used throughout must be roots of unity other than 1.
pub(crate) fn require_nontrivial_root(omega: &CyclotomicNumber) -> Result<()> {
    if omega.root_of_unity_order().is_none() {
        return Err(Error::NotRootOfUnity(omega.to_string()));
    }
    if omega.is_one() {
        return Err(Error::TrivialCharacter);
    }
    Ok(())
}

type CosineTable = Arc<Vec<interval::Interval>>;

/// Enclosures of `cos(2 pi j / m)` for `j < phi(m)`, cached per precision.
fn cosine_table(m: u64, bits: u32) -> CosineTable {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), CosineTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(m, bits)) {
        return t.clone();
    }
    let f = Fixed::new(bits);
    let pi = f.pi();
    let table: CosineTable = Arc::new(
        (0..poly::euler_phi(m))
            .map(|j| f.cos_two_pi(&pi, &BigRational::new(BigInt::from(j), BigInt::from(m))))
            .collect(),
    );
    cache.lock().unwrap().insert((m, bits), table.clone());
    table
}

/// Reduce a polynomial in `zeta_m` modulo `Phi_m`.
fn reduce(m: u64, mut v: Vec<BigRational>) -> Vec<BigRational> {
    let phi = poly::cyclotomic_poly(m);
    let d = phi.degree;
    if v.len() < d {
        v.resize(d, BigRational::zero());
        return v;
    }
    for i in (d..v.len()).rev() {
        if v[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[i]);
        for (j, p) in &phi.lower {
            let delta = &c * BigRational::from_integer(p.clone());
            v[i - d + j] -= delta;
        }
    }
    v.truncate(d);
    v
}

/// Solve `A x = b` over Q for `A` with full column rank. `None` if inconsistent.
pub(crate) fn solve_linear(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for k in c..cols {
            a[r][k] = &a[r][k] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in c..cols {
                let t = &f * &a[r][k];
                a[i][k] -= t;
            }
            let t = &f * &b[r];
            b[i] -= t;
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|x| !x.is_zero()) || pivot_cols.len() < cols {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.with_common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn add_assign(&mut self, rhs: &CyclotomicNumber) {
        if self.conductor != rhs.conductor {
            let (a, b) = self.with_common(rhs);
            *self = a;
            return *self += &b;
        }
        for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !y.is_zero() {
                *x += y;
            }
        }
    }
}

impl SubAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn sub_assign(&mut self, rhs: &CyclotomicNumber) {
        if self.conductor != rhs.conductor {
            let (a, b) = self.with_common(rhs);
            *self = a;
            return *self -= &b;
        }
        for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !y.is_zero() {
                *x -= y;
            }
        }
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.conductor == rhs.conductor {
            self.mul_same(rhs)
        } else {
            let (a, b) = self.with_common(rhs);
            a.mul_same(&b)
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $f(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                $tr::$f(&self, &rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

impl From<i64> for CyclotomicNumber {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_rational_literal(s: &str) -> Result<BigRational> {
    parse_rational(s)
}

/// `p/q` (or `p` for integers), the textual form used for rationals.
pub fn format_rational(q: &BigRational) -> String {
    fmt_rational(q)
}

/// Serde adapter storing a rational as `"p/q"`; integers are also accepted.
pub mod rational_serde {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Int(i64),
    }

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Text(t) => super::parse_rational(&t).map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(BigRational::from_integer(n.into())),
        }
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        write!(f, "cyclo({}; {})", self.conductor, body.join(", "))
    }
}

impl FromStr for CyclotomicNumber {
    type Err = Error;

    /// Accepts `cyclo(m; c_0, ..., c_{phi(m)-1})`, `zeta(m)^p`, `zeta(m)`
    /// or a bare rational.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("cyclo(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("missing ')' in {t:?}")))?;
            let (m, body) = inner
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("missing ';' in {t:?}")))?;
            let m: u64 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad conductor in {t:?}")))?;
            if m == 0 {
                return Err(Error::Parse("conductor must be positive".into()));
            }
            let coeffs = body
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?;
            if coeffs.len() as u64 != euler_phi(m) {
                return Err(Error::Parse(format!(
                    "conductor {m} needs {} coefficients, got {}",
                    euler_phi(m),
                    coeffs.len()
                )));
            }
            return Ok(CyclotomicNumber {
                conductor: m,
                coeffs,
            });
        }
        if t.starts_with("zeta(") {
            return parse_root_of_unity(t);
        }
        parse_rational(t).map(Self::from_rational)
    }
}

/// Parse the root-of-unity grammar `zeta(m)` or `zeta(m)^p`.
pub fn parse_root_of_unity(s: &str) -> Result<CyclotomicNumber> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("expected zeta(m) or zeta(m)^p, got {s:?}"));
    let rest = t.strip_prefix("zeta(").ok_or_else(bad)?;
    let (m, tail) = rest.split_once(')').ok_or_else(bad)?;
    let m: u64 = m.parse().map_err(|_| bad())?;
    if m == 0 {
        return Err(bad());
    }
    let power: i64 = match tail {
        "" => 1,
        _ => tail
            .strip_prefix('^')
            .ok_or_else(bad)?
            .trim_start_matches('(')
            .trim_end_matches(')')
            .parse()
            .map_err(|_| bad())?,
    };
    Ok(CyclotomicNumber::root_of_unity(m, power))
}

impl serde::Serialize for CyclotomicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(CyclotomicNumber::from_integer)
                .ok_or_else(|| serde::de::Error::custom("entries must be integers or strings")),
            other => Err(serde::de::Error::custom(format!(
                "expected a cyclotomic literal, got {other}"
            ))),
        }
    }
}
