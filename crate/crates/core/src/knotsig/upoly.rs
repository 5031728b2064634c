//! Dense univariate polynomials over `Q`, lowest degree first, always trimmed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Poly = Vec<BigRational>;

pub(crate) fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub(crate) fn from_ints(c: &[BigInt]) -> Poly {
    trim(c.iter().cloned().map(BigRational::from_integer).collect())
}

pub(crate) fn degree(p: &Poly) -> Option<usize> {
    p.len().checked_sub(1)
}

pub(crate) fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

pub(crate) fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(i.into()))
            .collect(),
    )
}

pub(crate) fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

pub(crate) fn scale(p: &Poly, c: &BigRational) -> Poly {
    trim(p.iter().map(|x| x * c).collect())
}

pub(crate) fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r = a.clone();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[dr - db + i] -= &c * bi;
        }
        q[dr - db] = c;
        r = trim(r);
    }
    (trim(q), r)
}

pub(crate) fn monic(p: &Poly) -> Poly {
    match p.last() {
        Some(l) => scale(p, &l.recip()),
        None => Vec::new(),
    }
}

pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

/// `t^deg p(1/t)`.
pub(crate) fn reciprocal(p: &Poly) -> Poly {
    trim(p.iter().rev().cloned().collect())
}

pub(crate) fn square_free(p: &Poly) -> Poly {
    let g = gcd(p, &derivative(p));
    monic(&divrem(p, &g).0)
}

pub(crate) struct Sturm(Vec<Poly>);

impl Sturm {
    pub(crate) fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone(), derivative(p)];
        while !seq.last().unwrap().is_empty() {
            let n = seq.len();
            let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
            seq.push(scale(&r, &-BigRational::one()));
        }
        seq.pop();
        Sturm(seq)
    }

    fn variations(&self, x: &BigRational) -> usize {
        let signs: Vec<bool> = self
            .0
            .iter()
            .map(|p| eval(p, x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in `(a, b]`.
    pub(crate) fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Disjoint intervals `[lo, hi]`, each holding exactly one root of the
/// square-free `p` in the open interval `(a, b)`; `a` and `b` must not be
/// roots. A degenerate interval `lo == hi` is an exact rational root.
pub(crate) fn isolate_roots(p: &Poly, a: &BigRational, b: &BigRational) -> Vec<(BigRational, BigRational)> {
    let sturm = Sturm::new(p);
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), b.clone())];
    let two = BigRational::from_integer(2.into());
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / &two;
                if eval(p, &mid).is_zero() {
                    out.push((mid.clone(), mid.clone()));
                    let eps = (&hi - &lo) / BigRational::from_integer(1024.into());
                    let (l, r) = (&mid - &eps, &mid + &eps);
                    // shrink away from the exact root until both sides are clean
                    let (l, r) = shrink_around(p, &sturm, &mid, l, r);
                    stack.push((lo, l));
                    stack.push((r, hi));
                } else {
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
    }
    out.sort();
    out
}

fn shrink_around(
    p: &Poly,
    sturm: &Sturm,
    root: &BigRational,
    mut l: BigRational,
    mut r: BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    while eval(p, &l).is_zero() || eval(p, &r).is_zero() || sturm.count(&l, &r) != 1 {
        l = (&l + root) / &two;
        r = (&r + root) / &two;
    }
    (l, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        from_ints(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (quot, rem) = divrem(&a, &b);
        assert_eq!(quot, p(&[-1, 1]));
        assert!(rem.is_empty());
        assert_eq!(gcd(&p(&[-1, 0, 1]), &p(&[1, 2, 1])), p(&[1, 1]));
        assert_eq!(square_free(&p(&[1, 2, 1])), p(&[1, 1]));
    }

    #[test]
    fn sturm_counts_and_isolates() {
        // (s - 1)(s + 1/2)(s - 3)
        let f = mul(&mul(&p(&[-1, 1]), &vec![q(1, 2), q(1, 1)]), &p(&[-3, 1]));
        let s = Sturm::new(&f);
        assert_eq!(s.count(&q(-2, 1), &q(2, 1)), 2);
        assert_eq!(s.count(&q(-10, 1), &q(10, 1)), 3);
        let roots = isolate_roots(&f, &q(-2, 1), &q(2, 1));
        assert_eq!(roots.len(), 2);
        for (lo, hi) in roots {
            assert!(lo <= hi);
            assert!(eval(&f, &lo).is_zero() || eval(&f, &hi).is_zero() || s.count(&lo, &hi) == 1);
        }
    }
}
