//! Reference computations written independently of the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Diagonal, super-diagonal and sub-diagonal of `A + 2B` at size `n`.
pub fn a_plus_two_b(n: usize) -> (Vec<i64>, Vec<i64>, Vec<i64>) {
    (vec![0; n], vec![-1; n.saturating_sub(1)], vec![1; n.saturating_sub(1)])
}

/// Determinant of a tridiagonal matrix by the continuant recurrence
/// `f_k = a_k f_(k-1) - b_(k-1) c_(k-1) f_(k-2)`.
pub fn integer_determinant((diag, upper, lower): &(Vec<i64>, Vec<i64>, Vec<i64>)) -> i64 {
    let (mut prev, mut cur) = (0i64, 1i64);
    for k in 0..diag.len() {
        let next = if k == 0 {
            diag[0]
        } else {
            diag[k] * cur - upper[k - 1] * lower[k - 1] * prev
        };
        prev = cur;
        cur = next;
    }
    cur
}

/// Signature of the 2x2 form `(1 - w) V + (1 - conj w) V^T` at
/// `w = exp(2 pi i turn)`, from the signs of trace and determinant.
pub fn lt_signature_2x2(v: &[Vec<i64>], turn: f64) -> i64 {
    let (c, s) = ((2.0 * std::f64::consts::PI * turn).cos(), (2.0 * std::f64::consts::PI * turn).sin());
    // (1 - w) = (1 - c) - i s; entry = (1-w) v_ij + (1-conj w) v_ji
    let entry = |i: usize, j: usize| -> (f64, f64) {
        let (a, b) = (v[i][j] as f64, v[j][i] as f64);
        ((1.0 - c) * (a + b), -s * a + s * b)
    };
    let (d0, _) = entry(0, 0);
    let (d1, _) = entry(1, 1);
    let (re, im) = entry(0, 1);
    let det = d0 * d1 - (re * re + im * im);
    let trace = d0 + d1;
    let eps = 1e-9;
    if det > eps {
        if trace > 0.0 {
            2
        } else {
            -2
        }
    } else if det < -eps {
        0
    } else if trace > eps {
        1
    } else if trace < -eps {
        -1
    } else {
        0
    }
}

/// Best rational approximation with denominator at most `max_den`.
fn rationalize(x: f64, max_den: i64) -> BigRational {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    loop {
        let a = y.floor() as i64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = y - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    BigRational::new(p1.into(), q1.into())
}

/// `rho0` of a genus-one Seifert matrix: locate the unit roots of the
/// quadratic Alexander polynomial, evaluate the signature once per arc and
/// weight by arc length.
pub fn rho0_genus_one(v: &[Vec<i64>]) -> BigRational {
    let (a, b, c, d) = (v[0][0], v[0][1], v[1][0], v[1][1]);
    // det [[a(1-t), b - t c], [c - t b, d(1-t)]]
    let c0 = a * d - b * c;
    let c1 = -2 * a * d + b * b + c * c;
    let c2 = a * d - b * c;
    let mut cuts = vec![BigRational::zero()];
    if c2 != 0 && c0 == c2 {
        let s = -(c1 as f64) / c2 as f64;
        if s.abs() < 2.0 {
            let turn = (s / 2.0).acos() / (2.0 * std::f64::consts::PI);
            let f = rationalize(turn, 1000);
            assert!((f.to_f64().unwrap() - turn).abs() < 1e-9, "root is not a rational turn");
            cuts.push(f.clone());
            cuts.push(BigRational::one() - f);
        }
    }
    cuts.push(BigRational::one());
    cuts.sort();
    cuts.windows(2)
        .map(|w| {
            let mid = ((&w[0] + &w[1]) / BigRational::from_integer(2.into())).to_f64().unwrap();
            (&w[1] - &w[0]) * BigRational::from_integer(lt_signature_2x2(v, mid).into())
        })
        .fold(BigRational::zero(), |acc, x| acc + x)
}

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let f = r.last().unwrap() / b.last().unwrap();
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &f * bi;
        }
        r = trim(r);
    }
    r
}

fn poly_div(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db)];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let f = r.last().unwrap() / b.last().unwrap();
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &f * bi;
        }
        q[k] = f;
        r = trim(r);
    }
    trim(q)
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().unwrap().clone();
    a.iter().map(|c| c / &lead).collect()
}

fn deriv(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(i.into()))
            .collect(),
    )
}

/// Yun's square-free factorization: `(factor, multiplicity)` pairs.
fn square_free_factors(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let dp = deriv(p);
    let mut a = poly_gcd(p, &dp);
    let mut b = poly_div(p, &a);
    let mut c = poly_div(&dp, &a);
    let mut d = trim(
        (0..c.len().max(b.len()))
            .map(|i| {
                c.get(i).cloned().unwrap_or_default() - deriv(&b).get(i).cloned().unwrap_or_default()
            })
            .collect(),
    );
    let mut i = 1;
    while b.len() > 1 {
        a = poly_gcd(&b, &d);
        out.push((a.clone(), i));
        b = poly_div(&b, &a);
        c = poly_div(&d, &a);
        let db = deriv(&b);
        d = trim(
            (0..c.len().max(db.len()))
                .map(|k| c.get(k).cloned().unwrap_or_default() - db.get(k).cloned().unwrap_or_default())
                .collect(),
        );
        i += 1;
    }
    out.retain(|(f, _)| f.len() > 1);
    out
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), deriv(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let r = poly_rem(&chain[n - 2], &chain[n - 1]);
        chain.push(r.iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let s: Vec<i32> = signs.filter(|&s| s != 0).collect();
    s.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sign_of(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Distinct positive and negative roots of a square-free polynomial without
/// a root at zero.
fn sturm_positive_negative(p: &Poly) -> (usize, usize) {
    let chain = sturm_chain(p);
    let at_zero = sign_changes(chain.iter().map(|q| sign_of(&q[0])));
    let at_pos_inf = sign_changes(chain.iter().map(|q| sign_of(q.last().unwrap())));
    let at_neg_inf = sign_changes(chain.iter().map(|q| {
        let s = sign_of(q.last().unwrap());
        if (q.len() - 1) % 2 == 0 {
            s
        } else {
            -s
        }
    }));
    (at_zero - at_pos_inf, at_neg_inf - at_zero)
}

/// Characteristic polynomial of a square rational matrix by the
/// Faddeev-LeVerrier recurrence, lowest degree first.
fn char_poly(a: &[Vec<BigRational>]) -> Poly {
    let n = a.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_(k-1) + c_(n-k+1) I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !m[l][j].is_zero() {
                        s += &a[i][l] * &m[l][j];
                    }
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut trace = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -trace / BigRational::from_integer(BigInt::from(k));
    }
    coeffs
}

/// Inertia of the Hermitian matrix with entries `re + i im`, through the
/// characteristic polynomial of its real symmetric form `[[A, -B], [B, A]]`,
/// whose spectrum is that of the matrix with every eigenvalue doubled.
pub fn inertia_by_sturm(entries: &[Vec<(BigRational, BigRational)>]) -> (usize, usize, usize) {
    let n = entries.len();
    let mut real = vec![vec![BigRational::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let (re, im) = &entries[i][j];
            real[i][j] = re.clone();
            real[i + n][j + n] = re.clone();
            real[i][j + n] = -im.clone();
            real[i + n][j] = im.clone();
        }
    }
    let p = char_poly(&real);
    let zero = p.iter().position(|c| !c.is_zero()).unwrap();
    let rest: Poly = p[zero..].to_vec();
    let (mut pos, mut neg) = (0, 0);
    for (factor, mult) in square_free_factors(&rest) {
        let (fp, fneg) = sturm_positive_negative(&factor);
        pos += fp * mult;
        neg += fneg * mult;
    }
    assert_eq!(pos + neg + zero, 2 * n, "all eigenvalues of a symmetric matrix are real");
    (pos / 2, neg / 2, zero / 2)
}
