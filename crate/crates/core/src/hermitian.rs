//! Exact linear algebra over cyclotomic fields: rank, determinant, and the
//! inertia of Hermitian forms by congruence diagonalization.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cyclo::{CyclotomicNumber, Sign};
use crate::{Error, Result};

/// Dense matrix over `Q(zeta_m)`; all entries share one conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    conductor: u64,
    data: Vec<CyclotomicNumber>,
}

fn common_conductor<'a>(entries: impl Iterator<Item = &'a CyclotomicNumber>) -> u64 {
    entries.fold(1, |acc, e| num_integer::lcm(acc, e.conductor()))
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<CyclotomicNumber>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("rows of unequal length".into()));
        }
        let data: Vec<CyclotomicNumber> = rows.into_iter().flatten().collect();
        let conductor = common_conductor(data.iter());
        let data = data
            .into_iter()
            .map(|e| e.lift(conductor).expect("lcm is a multiple"))
            .collect();
        Ok(Matrix {
            rows: r,
            cols: c,
            conductor,
            data,
        })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| CyclotomicNumber::from_integer(x)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            conductor: 1,
            data: vec![CyclotomicNumber::zero(1); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = CyclotomicNumber::from_integer(1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.data[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<CyclotomicNumber>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[_]>::to_vec).collect()
    }

    /// Re-express every entry in `Q(zeta_target)`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|e| e.lift(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            conductor: target,
            data,
            ..*self
        })
    }

    fn map(&self, f: impl Fn(&CyclotomicNumber) -> CyclotomicNumber) -> Self {
        Matrix {
            data: self.data.iter().map(f).collect(),
            ..*self
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            conductor: self.conductor,
            data,
        }
    }

    pub fn conjugate_transpose(&self) -> Self {
        self.transpose().map(CyclotomicNumber::conj)
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        Self::from_rows(
            self.to_rows()
                .into_iter()
                .map(|r| r.iter().map(|e| e * c).collect())
                .collect(),
        )
        .expect("rectangular")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&CyclotomicNumber, &CyclotomicNumber) -> CyclotomicNumber) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rows = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| f(self.get(i, j), other.get(i, j))).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(other.cols);
            for j in 0..other.cols {
                let mut acc = CyclotomicNumber::zero(1);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                row.push(acc);
            }
            rows.push(row);
        }
        if other.cols == 0 {
            return Ok(Matrix::zeros(self.rows, 0));
        }
        Self::from_rows(rows)
    }

    /// Simultaneous permutation of rows and columns: entry `(i, j)` of the
    /// result is entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if self.rows != self.cols || perm.len() != self.rows {
            return Err(Error::Dimension("permutation size mismatch".into()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        let n = self.rows;
        let mut data = Vec::with_capacity(n * n);
        for &pi in perm {
            for &pj in perm {
                data.push(self.get(pi, pj).clone());
            }
        }
        Ok(Matrix { data, ..*self })
    }

    fn grid(&self) -> Vec<Vec<CyclotomicNumber>> {
        self.to_rows()
    }

    /// Rank by Gaussian elimination over the field.
    pub fn rank(&self) -> usize {
        let mut a = self.grid();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let inv = a[rank][c].field_inverse().expect("nonzero pivot");
            for i in rank + 1..self.rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = &a[i][c] * &inv;
                for k in c..self.cols {
                    if !a[rank][k].is_zero() {
                        let t = &f * &a[rank][k];
                        a[i][k] -= &t;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Determinant by Bareiss fraction-free elimination; each step divides
    /// exactly by the previous pivot.
    pub fn determinant(&self) -> Result<CyclotomicNumber> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(CyclotomicNumber::from_integer(1));
        }
        let mut a = self.grid();
        let mut negate = false;
        let mut prev = CyclotomicNumber::one(self.conductor);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(CyclotomicNumber::zero(self.conductor));
                };
                a.swap(k, p);
                negate = !negate;
            }
            let prev_inv = prev.field_inverse()?;
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = if prev.is_one() { t } else { &t * &prev_inv };
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<CyclotomicNumber>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn swapped(&self) -> Self {
        Inertia {
            positive: self.negative,
            negative: self.positive,
            zero: self.zero,
        }
    }
}

impl std::ops::Add for Inertia {
    type Output = Inertia;
    fn add(self, o: Inertia) -> Inertia {
        Inertia {
            positive: self.positive + o.positive,
            negative: self.negative + o.negative,
            zero: self.zero + o.zero,
        }
    }
}

/// Square matrix equal to its conjugate transpose.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HermitianMatrix(Matrix);

impl HermitianMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::Dimension(format!("{}x{} is not square", m.rows, m.cols)));
        }
        for i in 0..m.rows {
            for j in i..m.cols {
                if *m.get(i, j) != m.get(j, i).conj() {
                    return Err(Error::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(HermitianMatrix(m))
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(Matrix::from_integers(rows)?)
    }

    pub fn empty() -> Self {
        HermitianMatrix(Matrix::zeros(0, 0))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn neg(&self) -> Self {
        HermitianMatrix(self.0.map(|e| -e))
    }

    /// `P* H P`.
    pub fn congruent(&self, p: &Matrix) -> Result<Self> {
        let m = p.conjugate_transpose().mul(&self.0)?.mul(p)?;
        Self::new(m)
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Ok(HermitianMatrix(self.0.permuted(perm)?))
    }

    pub fn signature(&self) -> Inertia {
        signature(self)
    }

    /// Rows and columns `idx` (in that order); `idx` need not be a permutation.
    pub fn principal_submatrix(&self, idx: &[usize]) -> HermitianMatrix {
        if idx.is_empty() {
            return HermitianMatrix::empty();
        }
        let rows = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.0.get(i, j).clone()).collect())
            .collect();
        HermitianMatrix(Matrix::from_rows(rows).expect("square"))
    }

    pub fn determinant(&self) -> CyclotomicNumber {
        self.0.determinant().expect("square")
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        HermitianMatrix::new(Matrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Block-diagonal assembly `diag(h1, h2)`.
pub fn block_sum(h1: &HermitianMatrix, h2: &HermitianMatrix) -> HermitianMatrix {
    let (a, b) = (h1.dim(), h2.dim());
    let n = a + b;
    let zero = CyclotomicNumber::zero(1);
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i < a, j < a) {
                    (true, true) => h1.0.get(i, j).clone(),
                    (false, false) => h2.0.get(i - a, j - a).clone(),
                    _ => zero.clone(),
                })
                .collect()
        })
        .collect();
    if n == 0 {
        return HermitianMatrix::empty();
    }
    HermitianMatrix(Matrix::from_rows(rows).expect("square"))
}

/// Inertia by exact congruence diagonalization.
///
/// Each step either takes the first nonzero diagonal entry as a pivot and
/// replaces the rest by its Schur complement, or, when the remaining diagonal
/// vanishes, splits off a hyperbolic 2x2 block `[[0, h], [conj h, 0]]` after
/// trying the row/column addition that would make a diagonal entry nonzero.
pub fn signature(h: &HermitianMatrix) -> Inertia {
    let n = h.dim();
    let mut a = h.0.grid();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = Inertia::default();

    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&k| !a[k][k].is_zero()) {
            let k = active.remove(pos);
            match a[k][k].sign_of_real().expect("Hermitian diagonal is real") {
                Sign::Positive => out.positive += 1,
                Sign::Negative => out.negative += 1,
                Sign::Zero => unreachable!("pivot is nonzero"),
            }
            let inv = a[k][k].field_inverse().expect("nonzero pivot");
            let nz: Vec<usize> = active.iter().copied().filter(|&j| !a[k][j].is_zero()).collect();
            for &i in &nz {
                let f = &a[i][k] * &inv;
                for &j in &nz {
                    let t = &f * &a[k][j];
                    a[i][j] -= &t;
                }
            }
            continue;
        }

        let pair = active.iter().enumerate().find_map(|(pi, &i)| {
            active[pi + 1..]
                .iter()
                .find(|&&j| !a[i][j].is_zero())
                .map(|&j| (i, j))
        });
        let Some((i, j)) = pair else {
            out.zero += active.len();
            break;
        };

        if !(&a[i][j] + &a[j][i]).is_zero() {
            // row_i += row_j, col_i += col_j makes a[i][i] = 2 Re a[i][j] != 0
            for &l in &active {
                let t = a[j][l].clone();
                a[i][l] += &t;
            }
            for &l in &active {
                let t = a[l][j].clone();
                a[l][i] += &t;
            }
            continue;
        }

        out.positive += 1;
        out.negative += 1;
        active.retain(|&l| l != i && l != j);
        // K^-1 = [[0, 1/conj h], [1/h, 0]] for K = [[0, h], [conj h, 0]].
        let inv_h = a[i][j].field_inverse().expect("nonzero");
        let inv_hbar = inv_h.conj();
        let touched: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&p| !a[p][i].is_zero() || !a[p][j].is_zero())
            .collect();
        for &p in &touched {
            let left_i = &a[p][i] * &inv_hbar;
            let left_j = &a[p][j] * &inv_h;
            for &q in &touched {
                let mut t = &left_i * &a[j][q];
                t += &(&left_j * &a[i][q]);
                a[p][q] -= &t;
            }
        }
    }
    out
}

/// Inertia of every leading principal submatrix: entry `K` is the inertia of
/// the top-left `K x K` block, for `K = 0..=dim`.
///
/// Eliminates strictly in index order with 1x1 pivots, or 2x2 pivots
/// `[[0, b], [conj b, c]]` with `b != 0`, so each eliminated block lies inside
/// every later leading block and inertia adds up along the way. Cheap for
/// banded matrices. If neither pivot applies and the row is not already
/// decoupled, the remaining prefixes are computed one by one.
pub fn prefix_inertias(h: &HermitianMatrix) -> Vec<Inertia> {
    let n = h.dim();
    let mut a = h.0.grid();
    let mut out = vec![Inertia::default(); n + 1];
    let mut acc = Inertia::default();
    let mut k = 0;
    while k < n {
        let row_nz: Vec<usize> = (k + 1..n).filter(|&j| !a[k][j].is_zero()).collect();
        if !a[k][k].is_zero() {
            match a[k][k].sign_of_real().expect("Hermitian diagonal is real") {
                Sign::Positive => acc.positive += 1,
                _ => acc.negative += 1,
            }
            let inv = a[k][k].field_inverse().expect("nonzero pivot");
            for &i in &row_nz {
                let f = &a[i][k] * &inv;
                for &j in &row_nz {
                    let t = &f * &a[k][j];
                    a[i][j] -= &t;
                }
            }
            k += 1;
            out[k] = acc;
        } else if row_nz.is_empty() {
            acc.zero += 1;
            k += 1;
            out[k] = acc;
        } else if row_nz[0] == k + 1 {
            // E = [[0, b], [conj b, c]], E^-1 = [[c, -b], [-conj b, 0]] / det.
            let b = a[k][k + 1].clone();
            let c = a[k + 1][k + 1].clone();
            let det = -(&b * &b.conj());
            let inv_det = det.field_inverse().expect("nonzero");
            out[k + 1] = acc + Inertia { positive: 0, negative: 0, zero: 1 };
            acc.positive += 1;
            acc.negative += 1;
            let touched: Vec<usize> = (k + 2..n)
                .filter(|&p| !a[p][k].is_zero() || !a[p][k + 1].is_zero())
                .collect();
            for &p in &touched {
                let u = &a[p][k] * &inv_det;
                let v = &a[p][k + 1] * &inv_det;
                let left_k = &(&u * &c) - &(&v * &b.conj());
                let left_k1 = -(&u * &b);
                for &q in &touched {
                    let mut t = &left_k * &a[k][q];
                    t += &(&left_k1 * &a[k + 1][q]);
                    a[p][q] -= &t;
                }
            }
            k += 2;
            out[k] = acc;
        } else {
            for (size, slot) in out.iter_mut().enumerate().skip(k + 1) {
                let idx: Vec<usize> = (0..size).collect();
                *slot = signature(&h.principal_submatrix(&idx));
            }
            break;
        }
    }
    out
}

/// Real rational Hermitian matrices: convenience for tests and callers
/// working over `Q`.
pub fn from_rationals(rows: &[Vec<BigRational>]) -> Result<HermitianMatrix> {
    HermitianMatrix::new(Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|q| CyclotomicNumber::from_rational(q.clone())).collect())
            .collect(),
    )?)
}
