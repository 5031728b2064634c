//! Homology cylinders built from the identity cylinder by infection along
//! curves of declared lower-central depth, and their `rho_n` ledger.
//!
//! Infecting along a curve that lies in `G_(d-1)` but has no power in `G_d`
//! with a knot `K` leaves `rho_i` unchanged for `i < d` and shifts it by
//! `rho0(K)` for `i >= d`. The depth is taken as given; it is not verified
//! against any concrete curve.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::knotsig::{builtin_knots, rho0, SeifertMatrix};
use crate::{Error, Result};

/// A knot given by the name of a shipped table entry or by its matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawKnot", untagged)]
pub enum KnotSpec {
    Named(String),
    Matrix(SeifertMatrix),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawKnot {
    Named(String),
    Matrix(SeifertMatrix),
}

impl TryFrom<RawKnot> for KnotSpec {
    type Error = Error;

    fn try_from(raw: RawKnot) -> Result<Self> {
        match raw {
            RawKnot::Named(n) => KnotSpec::named(&n),
            RawKnot::Matrix(m) => Ok(KnotSpec::Matrix(m)),
        }
    }
}

impl KnotSpec {
    pub fn named(name: &str) -> Result<Self> {
        SeifertMatrix::named(name)?;
        Ok(KnotSpec::Named(name.to_string()))
    }

    pub fn seifert(&self) -> SeifertMatrix {
        match self {
            KnotSpec::Named(n) => SeifertMatrix::named(n).expect("validated at construction"),
            KnotSpec::Matrix(m) => m.clone(),
        }
    }

    /// `rho0` of the knot, memoised per matrix.
    pub fn rho0(&self) -> Result<BigRational> {
        static CACHE: OnceLock<Mutex<HashMap<SeifertMatrix, BigRational>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let v = self.seifert();
        if let Some(r) = cache.lock().unwrap().get(&v) {
            return Ok(r.clone());
        }
        let r = rho0(&v)?;
        cache.lock().unwrap().insert(v, r.clone());
        Ok(r)
    }
}

impl fmt::Display for KnotSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotSpec::Named(n) => write!(f, "{n}"),
            KnotSpec::Matrix(m) => write!(f, "{m}"),
        }
    }
}

fn one_copy() -> u64 {
    1
}

fn is_one_copy(c: &u64) -> bool {
    *c == 1
}

/// Infection along a curve of depth `depth` by `copies` copies of `knot`
/// (equivalently by their connected sum).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRecord")]
pub struct InfectionRecord {
    pub depth: u32,
    pub knot: KnotSpec,
    #[serde(default = "one_copy", skip_serializing_if = "is_one_copy")]
    pub copies: u64,
}

#[derive(Deserialize)]
struct RawRecord {
    depth: i64,
    knot: KnotSpec,
    #[serde(default = "one_copy")]
    copies: u64,
}

impl TryFrom<RawRecord> for InfectionRecord {
    type Error = Error;

    fn try_from(r: RawRecord) -> Result<Self> {
        InfectionRecord::with_copies(r.depth, r.knot, r.copies)
    }
}

impl InfectionRecord {
    pub fn new(depth: i64, knot: KnotSpec) -> Result<Self> {
        Self::with_copies(depth, knot, 1)
    }

    pub fn with_copies(depth: i64, knot: KnotSpec, copies: u64) -> Result<Self> {
        if depth < 2 {
            return Err(Error::DepthTooSmall(depth));
        }
        let depth = u32::try_from(depth)
            .map_err(|_| Error::InvalidParameter(format!("depth {depth} too large")))?;
        Ok(InfectionRecord { depth, knot, copies })
    }

    /// `copies * rho0(knot)`.
    pub fn contribution(&self) -> Result<BigRational> {
        Ok(self.knot.rho0()? * BigRational::from_integer(self.copies.into()))
    }
}

/// A homology cylinder over the genus-`g` surface with one boundary
/// component, obtained from the identity cylinder by the listed infections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawScript")]
pub struct InfectionScript {
    pub genus: u32,
    pub records: Vec<InfectionRecord>,
}

#[derive(Deserialize)]
struct RawScript {
    genus: u32,
    #[serde(default)]
    records: Vec<InfectionRecord>,
}

impl TryFrom<RawScript> for InfectionScript {
    type Error = Error;

    fn try_from(s: RawScript) -> Result<Self> {
        InfectionScript::new(s.genus, s.records)
    }
}

impl InfectionScript {
    pub fn new(genus: u32, records: Vec<InfectionRecord>) -> Result<Self> {
        if genus < 1 {
            return Err(Error::InvalidParameter("genus must be at least 1".into()));
        }
        Ok(InfectionScript { genus, records })
    }

    /// The identity cylinder.
    pub fn identity(genus: u32) -> Result<Self> {
        Self::new(genus, Vec::new())
    }

    pub fn push(&mut self, record: InfectionRecord) {
        self.records.push(record);
    }

    pub fn concat(&self, other: &InfectionScript) -> Result<InfectionScript> {
        if self.genus != other.genus {
            return Err(Error::InvalidParameter(format!(
                "genus mismatch: {} vs {}",
                self.genus, other.genus
            )));
        }
        let mut records = self.records.clone();
        records.extend(other.records.iter().cloned());
        Ok(InfectionScript { genus: self.genus, records })
    }

    /// Total `rho0` contribution per depth, omitting depths whose total is 0.
    /// Two scripts define the same `rho_n` for every `n` exactly when these
    /// agree.
    pub fn ledger(&self) -> Result<BTreeMap<u32, BigRational>> {
        let mut out: BTreeMap<u32, BigRational> = BTreeMap::new();
        for r in &self.records {
            *out.entry(r.depth).or_insert_with(BigRational::zero) += r.contribution()?;
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

/// Whether two scripts over the same surface have identical ledgers.
pub fn ledger_equivalent(a: &InfectionScript, b: &InfectionScript) -> Result<bool> {
    Ok(a.genus == b.genus && a.ledger()? == b.ledger()?)
}

/// `rho_i` of the cylinder: the sum of contributions of records with
/// depth at most `i`.
pub fn rho_n(script: &InfectionScript, i: i64) -> Result<BigRational> {
    if i < 2 {
        return Err(Error::DepthTooSmall(i));
    }
    script
        .records
        .iter()
        .filter(|r| (r.depth as i64) <= i)
        .try_fold(BigRational::zero(), |acc, r| Ok(acc + r.contribution()?))
}

/// `sum_k coeffs[k] * rho_(indices[k])(script)`.
pub fn evaluate_combination(
    script: &InfectionScript,
    indices: &[i64],
    coeffs: &[BigRational],
) -> Result<BigRational> {
    if indices.len() != coeffs.len() {
        return Err(Error::Dimension(format!(
            "{} indices but {} coefficients",
            indices.len(),
            coeffs.len()
        )));
    }
    indices
        .iter()
        .zip(coeffs)
        .try_fold(BigRational::zero(), |acc, (&i, a)| Ok(acc + a * rho_n(script, i)?))
}

/// Genus of the surface used for generated witnesses.
pub const WITNESS_GENUS: u32 = 2;

/// A script on which `sum_k coeffs[k] rho_(indices[k])` exceeds `bound` in
/// absolute value: a single infection at depth `n`, the largest index with a
/// nonzero coefficient `a`, by `c` right-handed trefoils with `c` the least
/// integer with `|a c rho0(trefoil)| > bound`. Every `rho_j` with `j < n`
/// vanishes on it.
pub fn independence_witness(
    indices: &[i64],
    coeffs: &[BigRational],
    bound: &BigRational,
) -> Result<InfectionScript> {
    if indices.is_empty() {
        return Err(Error::InvalidParameter("empty list of indices".into()));
    }
    if indices.len() != coeffs.len() {
        return Err(Error::Dimension(format!(
            "{} indices but {} coefficients",
            indices.len(),
            coeffs.len()
        )));
    }
    if let Some(&i) = indices.iter().find(|&&i| i < 2) {
        return Err(Error::DepthTooSmall(i));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("indices must be increasing".into()));
    }
    if !bound.is_positive() {
        return Err(Error::InvalidParameter("bound must be positive".into()));
    }
    let (n, a) = indices
        .iter()
        .zip(coeffs)
        .rfind(|(_, a)| !a.is_zero())
        .ok_or_else(|| Error::InvalidParameter("all coefficients are zero".into()))?;
    let trefoil = KnotSpec::named("trefoil_right")?;
    let step = (a * trefoil.rho0()?).abs();
    let copies = (bound / &step).floor().to_integer() + BigInt::one();
    let copies = copies
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter("bound too large".into()))?;
    let record = InfectionRecord::with_copies(*n, trefoil, copies)?;
    InfectionScript::new(WITNESS_GENUS, vec![record])
}

/// Greatest common divisor of a list of rationals, with integer
/// coefficients expressing it: `gcd = sum x_i values[i]`.
fn rational_gcd(values: &[BigRational]) -> (BigRational, Vec<BigInt>) {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = values.iter().map(|v| (v * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    let mut coeffs = vec![BigInt::zero(); values.len()];
    for (i, n) in ints.iter().enumerate() {
        if n.is_zero() {
            continue;
        }
        // g_new = s g + t n
        let e = g.extended_gcd(n);
        for c in coeffs.iter_mut() {
            *c *= &e.x;
        }
        coeffs[i] = e.y.clone();
        g = e.gcd;
    }
    (BigRational::new(g, lcm), coeffs)
}

/// A script whose `rho_n` for `n >= depth` lies within `tolerance` of
/// `target`, using integer combinations of the shipped knots' `rho0`
/// values (negative multiples via mirror images). Fails with
/// [`Error::InsufficientKnotBasis`] when the nearest reachable value is too
/// far away.
pub fn density_sample(
    target: &BigRational,
    tolerance: &BigRational,
    depth: i64,
) -> Result<InfectionScript> {
    if !tolerance.is_positive() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    if depth < 2 {
        return Err(Error::DepthTooSmall(depth));
    }
    if target.is_zero() {
        return InfectionScript::identity(WITNESS_GENUS);
    }
    let knots = builtin_knots();
    let values = knots
        .iter()
        .map(|k| rho0(&k.seifert))
        .collect::<Result<Vec<_>>>()?;
    let insufficient = |closest: &BigRational| Error::InsufficientKnotBasis {
        target: crate::cyclo::format_rational(target),
        closest: crate::cyclo::format_rational(closest),
        tolerance: crate::cyclo::format_rational(tolerance),
    };
    let (g, _) = rational_gcd(&values);
    if g.is_zero() {
        return Err(insufficient(&BigRational::zero()));
    }
    let k = (target / &g).round().to_integer();
    let closest = &g * BigRational::from_integer(k.clone());
    if (&closest - target).abs() > *tolerance {
        return Err(insufficient(&closest));
    }
    let mut records = Vec::new();
    let unit = if k.is_negative() { -g.clone() } else { g.clone() };
    if let Some(i) = values.iter().position(|v| *v == unit) {
        // a single knot generates the lattice with the right sign
        let copies = k.abs().to_u64().ok_or_else(|| Error::InvalidParameter("target too large".into()))?;
        records.push(InfectionRecord::with_copies(depth, KnotSpec::named(&knots[i].name)?, copies)?);
    } else {
        let (_, xs) = rational_gcd(&values);
        for (knot, x) in knots.iter().zip(xs) {
            let count = x * &k;
            if count.is_zero() {
                continue;
            }
            let spec = if count.is_positive() {
                KnotSpec::named(&knot.name)?
            } else {
                KnotSpec::Matrix(knot.seifert.mirror())
            };
            let copies = count
                .abs()
                .to_u64()
                .ok_or_else(|| Error::InvalidParameter("target too large".into()))?;
            records.push(InfectionRecord::with_copies(depth, spec, copies)?);
        }
    }
    InfectionScript::new(WITNESS_GENUS, records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rec(depth: i64, name: &str) -> InfectionRecord {
        InfectionRecord::new(depth, KnotSpec::named(name).unwrap()).unwrap()
    }

    fn script(records: Vec<InfectionRecord>) -> InfectionScript {
        InfectionScript::new(2, records).unwrap()
    }

    #[test]
    fn ledger_examples() {
        let empty = script(vec![]);
        assert_eq!(rho_n(&empty, 7).unwrap(), q(0, 1));
        let one = script(vec![rec(5, "trefoil_right")]);
        assert_eq!(rho_n(&one, 3).unwrap(), q(0, 1));
        assert_eq!(rho_n(&one, 5).unwrap(), q(-4, 3));
        assert_eq!(rho_n(&one, 9).unwrap(), q(-4, 3));
        let two = script(vec![rec(2, "trefoil_right"), rec(4, "trefoil_left")]);
        assert_eq!(rho_n(&two, 3).unwrap(), q(-4, 3));
        assert_eq!(rho_n(&two, 4).unwrap(), q(0, 1));
        assert_eq!(rho_n(&two, 1), Err(Error::DepthTooSmall(1)));
        assert!(ledger_equivalent(&empty, &script(vec![rec(3, "figure8")])).unwrap());
        assert!(!ledger_equivalent(&empty, &two).unwrap());
    }

    #[test]
    fn record_validation() {
        let t = KnotSpec::named("trefoil_right").unwrap();
        assert_eq!(InfectionRecord::new(1, t.clone()), Err(Error::DepthTooSmall(1)));
        assert!(KnotSpec::named("nope").is_err());
        assert!(InfectionScript::new(0, vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"genus": 2, "records": [
            {"depth": 3, "knot": "trefoil_right"},
            {"depth": 4, "knot": [[1, 0], [-1, 1]], "copies": 3}
        ]}"#;
        let s: InfectionScript = serde_json::from_str(text).unwrap();
        assert_eq!(s.records[1].copies, 3);
        assert_eq!(rho_n(&s, 4).unwrap(), q(-4, 3) + q(4, 1));
        let back: InfectionScript = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"genus": 2, "records": [{"depth": 1, "knot": "trefoil_right"}]}"#;
        assert!(serde_json::from_str::<InfectionScript>(bad).is_err());
        let bad = r#"{"genus": 2, "records": [{"depth": 3, "knot": "granny"}]}"#;
        assert!(serde_json::from_str::<InfectionScript>(bad).is_err());
    }

    #[test]
    fn witness_examples() {
        let w = independence_witness(&[3], &[q(1, 1)], &q(5, 1)).unwrap();
        assert_eq!((w.records[0].depth, w.records[0].copies), (3, 4));
        let w = independence_witness(&[2, 4], &[q(1, 1), q(1, 1)], &q(1, 1)).unwrap();
        assert_eq!((w.records[0].depth, w.records[0].copies), (4, 1));
        assert!(independence_witness(&[2, 3], &[q(0, 1), q(0, 1)], &q(1, 1)).is_err());
        assert!(independence_witness(&[], &[], &q(1, 1)).is_err());
        assert_eq!(independence_witness(&[1], &[q(1, 1)], &q(1, 1)), Err(Error::DepthTooSmall(1)));
        let w = independence_witness(&[2, 5], &[q(3, 1), q(0, 1)], &q(10, 1)).unwrap();
        assert_eq!(w.records[0].depth, 2);
    }

    #[test]
    fn density_examples() {
        let s = density_sample(&q(-4, 1), &q(1, 100), 3).unwrap();
        assert_eq!(s.records.len(), 1);
        assert_eq!((s.records[0].copies, &s.records[0].knot), (3, &KnotSpec::named("trefoil_right").unwrap()));
        assert_eq!(rho_n(&s, 3).unwrap(), q(-4, 1));
        assert!(density_sample(&q(0, 1), &q(1, 2), 2).unwrap().records.is_empty());
        assert!(matches!(
            density_sample(&q(1, 2), &q(1, 6), 2),
            Err(Error::InsufficientKnotBasis { .. })
        ));
        let s = density_sample(&q(3, 2), &q(1, 6), 2).unwrap();
        assert_eq!(rho_n(&s, 2).unwrap(), q(4, 3));
    }

    #[test]
    fn gcd_with_coefficients() {
        let values = [q(4, 3), q(2, 1), q(0, 1), q(-6, 5)];
        let (g, xs) = rational_gcd(&values);
        assert_eq!(g, q(2, 15));
        let sum = values
            .iter()
            .zip(&xs)
            .fold(BigRational::zero(), |acc, (v, x)| acc + v * BigRational::from_integer(x.clone()));
        assert_eq!(sum, g);
    }

    fn arb_record() -> impl Strategy<Value = InfectionRecord> {
        (2i64..=8, prop::sample::select(vec!["unknot", "trefoil_right", "trefoil_left", "figure8"]), 1u64..=3)
            .prop_map(|(d, k, c)| InfectionRecord::with_copies(d, KnotSpec::named(k).unwrap(), c).unwrap())
    }

    proptest! {
        #[test]
        fn concatenation_adds(
            a in prop::collection::vec(arb_record(), 0..6),
            b in prop::collection::vec(arb_record(), 0..6),
            i in 2i64..=9,
        ) {
            let (sa, sb) = (script(a), script(b));
            let joined = sa.concat(&sb).unwrap();
            prop_assert_eq!(rho_n(&joined, i).unwrap(), rho_n(&sa, i).unwrap() + rho_n(&sb, i).unwrap());
        }

        #[test]
        fn ledger_determines_rho(
            a in prop::collection::vec(arb_record(), 0..6),
        ) {
            let s = script(a);
            let ledger = s.ledger().unwrap();
            for i in 2..=9i64 {
                let from_ledger = ledger
                    .iter()
                    .filter(|(d, _)| (**d as i64) <= i)
                    .fold(BigRational::zero(), |acc, (_, v)| acc + v);
                prop_assert_eq!(rho_n(&s, i).unwrap(), from_ledger);
            }
        }
    }
}
