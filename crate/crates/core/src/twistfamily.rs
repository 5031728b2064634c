//! Intersection forms and rho values for the cyclic family generated by
//! `h = D_alpha o D_beta(m, n)`, the product of Dehn twists about two bounding
//! curves in a genus-2 subsurface, under the character sending every
//! standard generator of the surface group to the root of unity `omega`.
//!
//! For `f = h^(N+1)` the rho value is `signature(C) - 2(N + 1)` where `C` is
//! the `2N x 2N` Hermitian matrix `[[A, conj(G) B^T], [G B, A]]`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{require_nontrivial_root as check_character, CyclotomicNumber};
use crate::hermitian::{prefix_inertias, HermitianMatrix, Inertia, Matrix};
use crate::{Error, Result};

/// First Betti number of the genus-`g` surface with one boundary component.
pub fn betti_one(genus: u32) -> u32 {
    2 * genus
}

/// `2 n beta_1` for an `n`-dimensional representation on a genus-`g` surface.
pub fn defect_bound(genus: u32, rep_dim: u32) -> i64 {
    2 * rep_dim as i64 * betti_one(genus) as i64
}

/// The primitive `4^k`-th root of unity `exp(2 pi i / 4^k)`.
pub fn omega_k(k: u32) -> CyclotomicNumber {
    CyclotomicNumber::root_of_unity(4u64.pow(k), 1)
}

/// Parameters `(m, n, N, omega)` naming `f = (D_alpha o D_beta(m,n))^(N+1)`
/// and the character `omega`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistFamilySpec {
    pub m: u32,
    pub n: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub omega: CyclotomicNumber,
}

impl TwistFamilySpec {
    /// `m = 0` is accepted here: only `G(omega)` enters the matrix, and the
    /// family `(4^j - 1, 4^j + 1)` starts at `j = 0`.
    pub fn new(m: u32, n: u32, big_n: u32, omega: CyclotomicNumber) -> Result<Self> {
        check_character(&omega)?;
        Ok(TwistFamilySpec { m, n, big_n, omega })
    }
}

fn tridiagonal(size: usize, diag: i64, upper: i64, lower: i64) -> Vec<Vec<i64>> {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if i == j {
                        diag
                    } else if j == i + 1 {
                        upper
                    } else if i == j + 1 {
                        lower
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// `N x N` matrix with 2 on the diagonal and -1 on both off-diagonals.
pub fn matrix_a(big_n: u32) -> HermitianMatrix {
    HermitianMatrix::from_integers(&tridiagonal(big_n as usize, 2, -1, -1)).expect("symmetric")
}

/// `N x N` matrix with -1 on the diagonal and 1 on the sub-diagonal.
pub fn matrix_b(big_n: u32) -> Matrix {
    Matrix::from_integers(&tridiagonal(big_n as usize, -1, 0, 1)).expect("rectangular")
}

/// `G_(m,n)(omega) = (omega^(n-1) - 1)(omega^-(m+1) - 1)`.
pub fn g_factor(m: u32, n: u32, omega: &CyclotomicNumber) -> Result<CyclotomicNumber> {
    if omega.root_of_unity_order().is_none() {
        return Err(Error::NotRootOfUnity(omega.to_string()));
    }
    let one = CyclotomicNumber::from_integer(1);
    let a = &omega.pow(n as i64 - 1)? - &one;
    let b = &omega.pow(-(m as i64 + 1))? - &one;
    Ok(&a * &b)
}

/// The `2N x 2N` block matrix `[[A, conj(G) B^T], [G B, A]]`.
pub fn matrix_c(spec: &TwistFamilySpec) -> Result<HermitianMatrix> {
    check_character(&spec.omega)?;
    let size = spec.big_n as usize;
    let g = g_factor(spec.m, spec.n, &spec.omega)?;
    let gbar = g.conj();
    let a = matrix_a(spec.big_n);
    let b = matrix_b(spec.big_n);
    let zero = CyclotomicNumber::zero(1);
    let entry = |i: usize, j: usize| -> CyclotomicNumber {
        match (i < size, j < size) {
            (true, true) => a.matrix().get(i, j).clone(),
            (false, false) => a.matrix().get(i - size, j - size).clone(),
            // conj(G) B^T: (i, j) -> conj(G) B[j][i]
            (true, false) => {
                let bji = b.get(j - size, i);
                if bji.is_zero() {
                    zero.clone()
                } else {
                    &gbar * bji
                }
            }
            (false, true) => {
                let bij = b.get(i - size, j);
                if bij.is_zero() {
                    zero.clone()
                } else {
                    &g * bij
                }
            }
        }
    };
    let rows = (0..2 * size)
        .map(|i| (0..2 * size).map(|j| entry(i, j)).collect())
        .collect();
    if size == 0 {
        return Ok(HermitianMatrix::empty());
    }
    HermitianMatrix::new(Matrix::from_rows(rows)?)
}

/// Interleaving `(alpha_0, beta_0, alpha_1, beta_1, ...)`; in this order `C`
/// is banded with bandwidth 3, which keeps elimination fill-in local.
fn interleaving(size: usize) -> Vec<usize> {
    (0..size).flat_map(|i| [i, size + i]).collect()
}

/// Inertia of `C_(m,n,N)(omega)`.
pub fn twist_inertia(spec: &TwistFamilySpec) -> Result<Inertia> {
    let c = matrix_c(spec)?;
    let banded = c.permuted(&interleaving(spec.big_n as usize))?;
    Ok(banded.signature())
}

/// `rho_omega(f_(m,n,N)) = signature(C_(m,n,N)(omega)) - 2(N + 1)`.
pub fn rho_twist(spec: &TwistFamilySpec) -> Result<i64> {
    let s = twist_inertia(spec)?.signature();
    Ok(s - 2 * (spec.big_n as i64 + 1))
}

/// `rho_omega(h^power)` for `h = D_alpha o D_beta(m, n)`, extended by
/// `rho(h^0) = 0` and `rho(h^-M) = -rho(h^M)`.
pub fn rho_power(m: u32, n: u32, omega: &CyclotomicNumber, power: i64) -> Result<i64> {
    check_character(omega)?;
    match power {
        0 => Ok(0),
        p if p < 0 => Ok(-rho_power(m, n, omega, -p)?),
        p => {
            let big_n = u32::try_from(p - 1)
                .map_err(|_| Error::InvalidParameter(format!("power {p} too large")))?;
            rho_twist(&TwistFamilySpec::new(m, n, big_n, omega.clone())?)
        }
    }
}

/// `rho_omega(h^M)` for `M = 0..=max_power` from one elimination: in the
/// interleaved order `C_(m,n,N)` is the leading block of `C_(m,n,N+1)`.
pub fn rho_powers(m: u32, n: u32, omega: &CyclotomicNumber, max_power: u32) -> Result<Vec<i64>> {
    check_character(omega)?;
    if max_power == 0 {
        return Ok(vec![0]);
    }
    let big_n = max_power - 1;
    let c = matrix_c(&TwistFamilySpec::new(m, n, big_n, omega.clone())?)?;
    let prefixes = prefix_inertias(&c.permuted(&interleaving(big_n as usize))?);
    let mut out = vec![0];
    out.extend((1..=max_power as i64).map(|p| {
        let size = 2 * (p as usize - 1);
        prefixes[size].signature() - 2 * p
    }));
    Ok(out)
}

/// `rho_omega(D^power)` for a Dehn twist `D` about a single bounding curve.
///
/// For `power = N + 1 >= 1` the twisted intersection form is `A` (size `N`)
/// and the untwisted signature is `N + 1`.
pub fn rho_dehn_power(power: i64, omega: &CyclotomicNumber) -> Result<i64> {
    check_character(omega)?;
    match power {
        0 => Ok(0),
        p if p < 0 => Ok(-rho_dehn_power(-p, omega)?),
        p => {
            let big_n = u32::try_from(p - 1)
                .map_err(|_| Error::InvalidParameter(format!("power {p} too large")))?;
            Ok(matrix_a(big_n).signature().signature() - p)
        }
    }
}

/// `sigma(h^a, h^b) = rho(h^a) + rho(h^b) - rho(h^(a+b))`.
pub fn cocycle_defect(a: i64, b: i64, m: u32, n: u32, omega: &CyclotomicNumber) -> Result<i64> {
    Ok(rho_power(m, n, omega, a)? + rho_power(m, n, omega, b)? - rho_power(m, n, omega, a + b)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectCell {
    pub a: i64,
    pub b: i64,
    pub defect: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectScan {
    pub m: u32,
    pub n: u32,
    pub omega: CyclotomicNumber,
    pub max_power: i64,
    /// `rho(h^M)` for `M = 0..=2 max_power`.
    pub rho: Vec<i64>,
    pub cells: Vec<DefectCell>,
    pub max_abs_defect: i64,
}

/// All defects `sigma(h^a, h^b)` for `1 <= a, b <= max_power`.
pub fn defect_scan(m: u32, n: u32, omega: &CyclotomicNumber, max_power: u32) -> Result<DefectScan> {
    check_character(omega)?;
    if max_power < 1 {
        return Err(Error::InvalidParameter("max power must be at least 1".into()));
    }
    let rho = rho_powers(m, n, omega, 2 * max_power)?;
    let max_power = max_power as i64;
    let mut cells = Vec::new();
    for a in 1..=max_power {
        for b in 1..=max_power {
            let defect = rho[a as usize] + rho[b as usize] - rho[(a + b) as usize];
            cells.push(DefectCell { a, b, defect });
        }
    }
    let max_abs_defect = cells.iter().map(|c| c.defect.abs()).max().unwrap_or(0);
    Ok(DefectScan {
        m,
        n,
        omega: omega.clone(),
        max_power,
        rho,
        cells,
        max_abs_defect,
    })
}

/// Finite witness that `sum_i a_i rho_(k_i)` is unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceWitness {
    /// Family index: the mapping class is `f_(4^j - 1, 4^j + 1, 2 N0)`.
    pub j: u32,
    #[serde(rename = "N0")]
    pub n0: u32,
    pub m: u32,
    pub n: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    /// `rho_(k_i)(f)` for each input `k_i`, recomputed from the matrices.
    pub rho_values: Vec<i64>,
    /// `sum_i a_i rho_(k_i)(f)`.
    #[serde(with = "crate::cyclo::rational_serde")]
    pub combination: BigRational,
}

/// Search `N0 = 0, 1, ...` for a member of the family
/// `f_(4^j - 1, 4^j + 1, 2 N0)` with `j = max(k) - 1` on which the
/// combination `sum a_i rho_(k_i)` exceeds `bound` in absolute value.
///
/// With `j = max(k) - 1`, `omega_(k_max)^(4^j) = i` so `rho_(k_max)` grows
/// like `-2(2 N0 + 1)` while `omega_k^(4^j) = 1` for every smaller `k`, whose
/// rho stays at `-2`. Every value is recomputed through [`rho_twist`].
pub fn independence_certificate(
    ks: &[u32],
    coeffs: &[BigRational],
    bound: &BigRational,
) -> Result<IndependenceWitness> {
    if ks.is_empty() {
        return Err(Error::InvalidParameter("empty list of indices".into()));
    }
    if ks.len() != coeffs.len() {
        return Err(Error::Dimension(format!(
            "{} indices but {} coefficients",
            ks.len(),
            coeffs.len()
        )));
    }
    if ks[0] < 1 || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "indices must be increasing positive integers".into(),
        ));
    }
    if coeffs.iter().any(Zero::is_zero) {
        return Err(Error::InvalidParameter("coefficients must be nonzero".into()));
    }
    if !bound.is_positive() {
        return Err(Error::InvalidParameter("bound must be positive".into()));
    }
    let k_max = *ks.last().unwrap();
    let j = k_max - 1;
    let base = 4u32
        .checked_pow(j)
        .ok_or_else(|| Error::InvalidParameter(format!("k = {k_max} too large")))?;
    let (m, n) = (base - 1, base + 1);
    for n0 in 0u32.. {
        let big_n = 2 * n0;
        let rho_values = ks
            .par_iter()
            .map(|&k| rho_twist(&TwistFamilySpec::new(m, n, big_n, omega_k(k))?))
            .collect::<Result<Vec<_>>>()?;
        let combination = rho_values
            .iter()
            .zip(coeffs)
            .fold(BigRational::zero(), |acc, (&r, a)| {
                acc + a * BigRational::from_integer(r.into())
            });
        if combination.abs() > *bound {
            return Ok(IndependenceWitness {
                j,
                n0,
                m,
                n,
                big_n,
                rho_values,
                combination,
            });
        }
        // |combination| grows by 4|a_max| per step in N0; stop if it does not.
        if n0 > 4 + (bound / (BigRational::from_integer(4.into()) * coeffs.last().unwrap().abs()))
            .to_integer()
            .try_into()
            .unwrap_or(u32::MAX - 8)
        {
            return Err(Error::InvalidParameter(
                "combination failed to grow along the family".into(),
            ));
        }
    }
    unreachable!()
}
