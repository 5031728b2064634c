//! Levine-Tristram signatures of knots from Seifert matrices, and their
//! circle average `rho0`, computed exactly by locating the jumps.

mod upoly;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{cyclotomic_coefficients, euler_phi, require_nontrivial_root, CyclotomicNumber};
use crate::hermitian::{HermitianMatrix, Matrix};
use crate::{Error, Result};
use upoly::Poly;

/// Integer Seifert matrix `V` of a knot: square, even size, `det(V - V^T) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SeifertMatrix {
    entries: Vec<Vec<i64>>,
}

impl SeifertMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSeifert("matrix is not square".into()));
        }
        if n % 2 != 0 {
            return Err(Error::InvalidSeifert(format!("odd dimension {n}")));
        }
        let skew: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(entries[i][j] - entries[j][i])).collect())
            .collect();
        let det = integer_determinant(skew);
        if !det.is_one() {
            return Err(Error::InvalidSeifert(format!("det(V - V^T) = {det}, expected 1")));
        }
        Ok(SeifertMatrix { entries })
    }

    pub fn unknot() -> Self {
        SeifertMatrix { entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        SeifertMatrix {
            entries: (0..n).map(|i| (0..n).map(|j| self.entries[j][i]).collect()).collect(),
        }
    }

    /// Seifert matrix of the mirror image, `-V^T`.
    pub fn mirror(&self) -> Self {
        let t = self.transpose();
        SeifertMatrix {
            entries: t.entries.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        }
    }

    /// One of the shipped knots: `unknot`, `trefoil_right`, `trefoil_left`,
    /// `figure8`.
    pub fn named(name: &str) -> Result<Self> {
        builtin_knots()
            .into_iter()
            .find(|k| k.name == name)
            .map(|k| k.seifert)
            .ok_or_else(|| Error::Parse(format!("unknown knot {name:?}")))
    }
}

impl<'de> Deserialize<'de> for SeifertMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<Vec<i64>>::deserialize(d)?;
        SeifertMatrix::new(entries).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for SeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// A shipped knot table entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub provenance: String,
    pub seifert: SeifertMatrix,
}

const KNOT_FILES: [&str; 4] = [
    include_str!("../../data/knots/unknot.json"),
    include_str!("../../data/knots/trefoil_right.json"),
    include_str!("../../data/knots/trefoil_left.json"),
    include_str!("../../data/knots/figure8.json"),
];

pub fn builtin_knots() -> Vec<KnotRecord> {
    KNOT_FILES
        .iter()
        .map(|s| serde_json::from_str(s).expect("shipped knot data is valid"))
        .collect()
}

/// Block sum of Seifert matrices.
pub fn connected_sum(v1: &SeifertMatrix, v2: &SeifertMatrix) -> SeifertMatrix {
    let (a, b) = (v1.dim(), v2.dim());
    let entries = (0..a + b)
        .map(|i| {
            (0..a + b)
                .map(|j| match (i < a, j < a) {
                    (true, true) => v1.entries[i][j],
                    (false, false) => v2.entries[i - a][j - a],
                    _ => 0,
                })
                .collect()
        })
        .collect();
    SeifertMatrix { entries }
}

fn integer_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// The Hermitian form `(1 - omega) V + (1 - conj omega) V^T`.
pub fn lt_form(v: &SeifertMatrix, omega: &CyclotomicNumber) -> Result<HermitianMatrix> {
    let n = v.dim();
    if n == 0 {
        return Ok(HermitianMatrix::empty());
    }
    let one = CyclotomicNumber::one(1);
    let a = &one - omega;
    let b = a.conj();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let vij = BigRational::from_integer(v.entries[i][j].into());
                    let vji = BigRational::from_integer(v.entries[j][i].into());
                    &a.scale(&vij) + &b.scale(&vji)
                })
                .collect()
        })
        .collect();
    HermitianMatrix::new(Matrix::from_rows(rows)?)
}

/// Levine-Tristram signature at a root of unity `omega != 1`.
pub fn lt_signature(v: &SeifertMatrix, omega: &CyclotomicNumber) -> Result<i64> {
    require_nontrivial_root(omega)?;
    Ok(lt_form(v, omega)?.signature().signature())
}

/// Coefficients of `Delta(t) = det(V - t V^T)`, lowest degree first,
/// recovered by interpolation from integer evaluations.
pub fn alexander_polynomial(v: &SeifertMatrix) -> Vec<BigInt> {
    let n = v.dim();
    let values: Vec<BigRational> = (0..=n as i64)
        .map(|t| {
            let m = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| BigInt::from(v.entries[i][j] - t * v.entries[j][i]))
                        .collect()
                })
                .collect();
            BigRational::from_integer(integer_determinant(m))
        })
        .collect();
    let vandermonde = (0..=n as i64)
        .map(|t| (0..=n as u32).map(|k| BigRational::from_integer(BigInt::from(t).pow(k))).collect())
        .collect();
    let coeffs = crate::cyclo::solve_linear(vandermonde, values).expect("Vandermonde is invertible");
    let mut out: Vec<BigInt> = coeffs
        .into_iter()
        .map(|c| {
            assert!(c.is_integer(), "Alexander coefficients are integers");
            c.to_integer()
        })
        .collect();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

/// A root of the Alexander polynomial on the unit circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitRoot {
    /// `exp(2 pi i power / order)` with `gcd(power, order) = 1`; the factor
    /// `Phi_order` divides `Delta` exactly `multiplicity` times.
    RootOfUnity { order: u64, power: u64, multiplicity: u32 },
    /// `exp(+-i theta)` with `2 cos theta` the unique root of `factor`
    /// (coefficients in `s = t + 1/t`, lowest first) in `[s_lo, s_hi]`.
    Isolated {
        factor: Vec<String>,
        s_lo: String,
        s_hi: String,
        upper_half: bool,
    },
}

impl UnitRoot {
    /// Position on the circle as a fraction of a full turn, when rational.
    pub fn turn_fraction(&self) -> Option<BigRational> {
        match self {
            UnitRoot::RootOfUnity { order, power, .. } => {
                Some(BigRational::new((*power).into(), (*order).into()))
            }
            UnitRoot::Isolated { .. } => None,
        }
    }
}

/// Unit-circle roots of `Delta`. Cyclotomic factors are divided out first;
/// the rest of the unit roots are roots of `gcd(P, t^deg P(1/t))`, which is
/// palindromic, and are found through the real roots in `(-2, 2)` of its
/// trace polynomial in `s = t + 1/t`.
pub fn alexander_unit_roots(v: &SeifertMatrix) -> Vec<UnitRoot> {
    let delta = alexander_polynomial(v);
    let mut p = upoly::from_ints(&delta);
    while p.first().is_some_and(Zero::is_zero) {
        p.remove(0);
    }
    let deg = upoly::degree(&p).unwrap_or(0);
    let mut out = Vec::new();
    // phi(d) >= sqrt(d / 2), so phi(d) <= deg forces d <= 2 deg^2.
    for d in 1..=(2 * deg * deg).max(2) as u64 {
        if euler_phi(d) as usize > upoly::degree(&p).unwrap_or(0) {
            continue;
        }
        let phi_d = upoly::from_ints(&cyclotomic_coefficients(d));
        let mut multiplicity = 0;
        loop {
            let (quot, rem) = upoly::divrem(&p, &phi_d);
            if !rem.is_empty() {
                break;
            }
            p = quot;
            multiplicity += 1;
        }
        if multiplicity > 0 {
            for power in (1..=d).filter(|k| k.gcd(&d) == 1) {
                out.push(UnitRoot::RootOfUnity { order: d, power: power % d, multiplicity });
            }
        }
    }
    out.extend(non_cyclotomic_unit_roots(&p));
    out
}

fn non_cyclotomic_unit_roots(p: &Poly) -> Vec<UnitRoot> {
    if upoly::degree(p).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let g = upoly::square_free(&upoly::gcd(p, &upoly::reciprocal(p)));
    let Some(two_e) = upoly::degree(&g) else {
        return Vec::new();
    };
    if two_e == 0 {
        return Vec::new();
    }
    // No roots at +-1 remain, so g is palindromic of even degree.
    debug_assert!(two_e % 2 == 0 && upoly::reciprocal(&g) == g);
    let e = two_e / 2;
    // t^-e g(t) = g_e + sum_k g_(e+k) P_k(s), P_k(t + 1/t) = t^k + t^-k.
    let mut r: Poly = vec![g[e].clone()];
    let (mut prev, mut cur): (Poly, Poly) = (
        vec![BigRational::from_integer(2.into())],
        vec![BigRational::zero(), BigRational::one()],
    );
    for k in 1..=e {
        r = add(&r, &upoly::scale(&cur, &g[e + k]));
        let s_cur = upoly::mul(&cur, &vec![BigRational::zero(), BigRational::one()]);
        let next = upoly::sub(&s_cur, &prev);
        prev = cur;
        cur = next;
    }
    let r = upoly::square_free(&r);
    let two = BigRational::from_integer(2.into());
    let factor: Vec<String> = r.iter().map(crate::cyclo::format_rational).collect();
    upoly::isolate_roots(&r, &-two.clone(), &two)
        .into_iter()
        .flat_map(|(lo, hi)| {
            let factor = factor.clone();
            [true, false].map(move |upper_half| UnitRoot::Isolated {
                factor: factor.clone(),
                s_lo: crate::cyclo::format_rational(&lo),
                s_hi: crate::cyclo::format_rational(&hi),
                upper_half,
            })
        })
        .collect()
}

fn add(a: &Poly, b: &Poly) -> Poly {
    upoly::sub(a, &upoly::scale(b, &-BigRational::one()))
}

/// An open arc of the circle between consecutive jump locations, given as
/// turn fractions, with the signature constant on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureArc {
    #[serde(with = "crate::cyclo::rational_serde")]
    pub start: BigRational,
    #[serde(with = "crate::cyclo::rational_serde")]
    pub end: BigRational,
    /// Sample `exp(2 pi i p / q)` used to evaluate the signature.
    pub sample: (u64, u64),
    pub signature: i64,
}

/// The fraction `p/q` with the smallest `q` strictly inside `(a, b)`.
pub fn simplest_fraction_between(a: &BigRational, b: &BigRational) -> (u64, u64) {
    assert!(a < b, "empty interval");
    for q in 1u64.. {
        let qq = BigRational::from_integer(q.into());
        let p: BigInt = (a * &qq).floor().to_integer() + 1;
        let x = BigRational::new(p.clone(), q.into());
        if &x < b {
            return (p.to_u64().expect("fraction in (0, 1)"), q);
        }
    }
    unreachable!()
}

/// Signature on each arc between consecutive jump locations. Fails with
/// [`Error::NonCyclotomicJump`] when some jump sits at a root that is not a
/// root of unity.
pub fn signature_arcs(v: &SeifertMatrix) -> Result<Vec<SignatureArc>> {
    let roots = alexander_unit_roots(v);
    let mut cuts: Vec<BigRational> = Vec::new();
    for r in &roots {
        cuts.push(r.turn_fraction().ok_or(Error::NonCyclotomicJump)?);
    }
    cuts.push(BigRational::zero());
    cuts.push(BigRational::one());
    cuts.sort();
    cuts.dedup();
    let mut arcs = Vec::new();
    for w in cuts.windows(2) {
        let (p, q) = simplest_fraction_between(&w[0], &w[1]);
        let omega = CyclotomicNumber::root_of_unity(q, p as i64);
        arcs.push(SignatureArc {
            start: w[0].clone(),
            end: w[1].clone(),
            sample: (p, q),
            signature: lt_signature(v, &omega)?,
        });
    }
    Ok(arcs)
}

/// Average of the Levine-Tristram signature over the circle (total mass 1).
pub fn rho0(v: &SeifertMatrix) -> Result<BigRational> {
    Ok(signature_arcs(v)?
        .iter()
        .fold(BigRational::zero(), |acc, arc| {
            acc + (&arc.end - &arc.start) * BigRational::from_integer(arc.signature.into())
        }))
}

/// Multiplicity of each distinct cyclotomic factor, keyed by order.
pub fn cyclotomic_factors(v: &SeifertMatrix) -> BTreeMap<u64, u32> {
    alexander_unit_roots(v)
        .into_iter()
        .filter_map(|r| match r {
            UnitRoot::RootOfUnity { order, multiplicity, .. } => Some((order, multiplicity)),
            UnitRoot::Isolated { .. } => None,
        })
        .collect()
}

#[cfg(test)]
mod tests;
