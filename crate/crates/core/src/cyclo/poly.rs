//! Integer cyclotomic polynomials, cached per conductor.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Sparse view of `Phi_m` below its (monic) leading term: `(power, coefficient)`.
#[derive(Debug)]
pub(crate) struct CyclotomicPoly {
    pub degree: usize,
    pub lower: Vec<(usize, BigInt)>,
}

pub fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Dense coefficients of `Phi_m`, lowest degree first.
pub fn cyclotomic_coefficients(m: u64) -> Vec<BigInt> {
    assert!(m > 0, "conductor must be positive");
    // x^m - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in divisors(m) {
        if d == m {
            continue;
        }
        num = exact_div_monic(&num, &cyclotomic_coefficients_cached(d));
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            if !d.is_zero() {
                rem[i + j] -= &c * d;
            }
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn dense_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cyclotomic_coefficients_cached(m: u64) -> Arc<Vec<BigInt>> {
    if let Some(p) = dense_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let p = Arc::new(cyclotomic_coefficients(m));
    dense_cache().lock().unwrap().insert(m, p.clone());
    p
}

pub(crate) fn cyclotomic_poly(m: u64) -> Arc<CyclotomicPoly> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    let dense = cyclotomic_coefficients_cached(m);
    let degree = dense.len() - 1;
    let lower = dense[..degree]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect();
    let p = Arc::new(CyclotomicPoly { degree, lower });
    cache.lock().unwrap().insert(m, p.clone());
    p
}
