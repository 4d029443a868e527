//! Exact integer matrices and the handful of lattice algorithms built on them.
//!
//! Everything here is exact: entries are `BigInt`, and the few places that
//! need division go through `BigRational` or fraction-free elimination.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::poly::IntPolynomial;
use crate::serde_int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not unimodular (determinant {0})")]
    NonUnimodular(BigInt),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("expected a square matrix, row {row} has {len} entries but there are {n} rows")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

/// Integer row vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntVector {
    entries: Vec<BigInt>,
}

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector { entries }
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVector {
            entries: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        IntVector {
            entries: vec![BigInt::zero(); n],
        }
    }

    /// The standard basis vector `e_i` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.entries[i] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        assert_eq!(
            self.len(),
            other.len(),
            "dot product of vectors of different length"
        );
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// gcd of the entries; 0 for the zero vector.
    pub fn content(&self) -> BigInt {
        self.entries.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn negated(&self) -> IntVector {
        IntVector {
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;

    fn index(&self, i: usize) -> &BigInt {
        &self.entries[i]
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for IntVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_int::seq::serialize(&self.entries, s)
    }
}

impl<'de> Deserialize<'de> for IntVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        serde_int::seq::deserialize(d).map(IntVector::new)
    }
}

/// Dense square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

// Entries below this many bits take the i128 multiplication path.
const SMALL_BITS: u64 = 48;

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        IntMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(LinalgError::NotSquare {
                row,
                len: r.len(),
                n,
            });
        }
        Ok(IntMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_rows_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector::new((0..self.n).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows as `i64`, if every entry fits.
    pub fn to_rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `M · vᵀ` as a vector.
    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(v.len(), self.n, "matrix-vector dimension mismatch");
        IntVector::new(
            (0..self.n)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.entries())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        )
    }

    /// `v · M`.
    pub fn vec_mul(&self, v: &IntVector) -> IntVector {
        assert_eq!(v.len(), self.n, "vector-matrix dimension mismatch");
        IntVector::new(
            (0..self.n)
                .map(|j| (0..self.n).map(|i| &v[i] * self.get(i, j)).sum())
                .collect(),
        )
    }

    /// The matrix whose column `t` is column `cols[t]` of `self`.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        assert_eq!(cols.len(), self.n, "column selection must list n columns");
        Self::from_fn(self.n, |i, t| self.get(i, cols[t]).clone())
    }

    /// Permutation matrix `P` with `P[i][perm[i]] = 1`.
    pub fn permutation(perm: &[usize]) -> IntMatrix {
        Self::from_fn(perm.len(), |i, j| BigInt::from(u8::from(perm[i] == j)))
    }

    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut a = self.to_rows();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..n {
            let Some(r) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, r);
            for i in rank + 1..n {
                for j in col + 1..n {
                    let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        rank
    }

    fn small_entries(&self) -> Option<Vec<i64>> {
        self.entries
            .iter()
            .map(|x| {
                if x.bits() <= SMALL_BITS {
                    x.to_i64()
                } else {
                    None
                }
            })
            .collect()
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "matrix product dimension mismatch");
        let n = self.n;
        if let (Some(a), Some(b)) = (self.small_entries(), rhs.small_entries()) {
            let mut out = vec![0i128; n * n];
            for i in 0..n {
                for k in 0..n {
                    let x = a[i * n + k] as i128;
                    if x == 0 {
                        continue;
                    }
                    for j in 0..n {
                        out[i * n + j] += x * b[k * n + j] as i128;
                    }
                }
            }
            return IntMatrix {
                n,
                entries: out.into_iter().map(BigInt::from).collect(),
            };
        }
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += x * rhs.get(k, j);
                }
            }
        }
        IntMatrix { n, entries: out }
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "matrix sum dimension mismatch");
        IntMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "matrix difference dimension mismatch");
        IntMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.n {
            let line: Vec<String> = (0..self.n)
                .map(|j| format!("{:>width$}", cells[i * self.n + j]))
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Serialized as an array of rows.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [BigInt]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serde_int::seq::serialize(self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(self.n))?;
        for i in 0..self.n {
            seq.serialize_element(&Row(self.row(i)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<IntVector> = Vec::deserialize(d)?;
        IntMatrix::from_rows(rows.into_iter().map(IntVector::into_entries).collect())
            .map_err(de::Error::custom)
    }
}

/// Multiplicative order of a unimodular matrix, or a marker that it was not
/// reached within the cutoff. Serializes as the integer or as
/// `"exceeds_cutoff"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixOrder {
    Finite(u64),
    ExceedsCutoff,
}

impl MatrixOrder {
    pub fn finite(self) -> Option<u64> {
        match self {
            MatrixOrder::Finite(k) => Some(k),
            MatrixOrder::ExceedsCutoff => None,
        }
    }
}

impl fmt::Display for MatrixOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixOrder::Finite(k) => write!(f, "{k}"),
            MatrixOrder::ExceedsCutoff => f.write_str("exceeds cutoff"),
        }
    }
}

const EXCEEDS: &str = "exceeds_cutoff";

impl Serialize for MatrixOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MatrixOrder::Finite(k) => s.serialize_u64(*k),
            MatrixOrder::ExceedsCutoff => s.serialize_str(EXCEEDS),
        }
    }
}

impl<'de> Deserialize<'de> for MatrixOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(k) => Ok(MatrixOrder::Finite(k)),
            Raw::Text(t) if t == EXCEEDS => Ok(MatrixOrder::ExceedsCutoff),
            Raw::Text(t) => Err(de::Error::invalid_value(de::Unexpected::Str(&t), &EXCEEDS)),
        }
    }
}

/// Rank and semidefiniteness of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub rank: usize,
    pub positive_semidefinite: bool,
}

/// Inverse of a unimodular matrix. The result is integral.
pub fn mat_inverse_integral(m: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    let det = m.determinant();
    if !det.abs().is_one() {
        return Err(LinalgError::NonUnimodular(det));
    }
    let n = m.dim();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = m
                .row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            row.extend((0..n).map(|j| BigRational::from_integer(BigInt::from(u8::from(i == j)))));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("unimodular matrix has a pivot in every column");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
    }
    Ok(IntMatrix::from_fn(n, |i, j| {
        let x = &a[i][n + j];
        debug_assert!(x.is_integer());
        x.to_integer()
    }))
}

/// `det(tE − m)` by Berkowitz's division-free algorithm.
pub fn char_poly(m: &IntMatrix) -> IntPolynomial {
    let n = m.dim();
    // Coefficients highest degree first while building.
    let mut p: Vec<BigInt> = vec![BigInt::one()];
    for r in 0..n {
        let mut q = Vec::with_capacity(r + 2);
        q.push(BigInt::one());
        q.push(-m.get(r, r));
        let mut v: Vec<BigInt> = (0..r).map(|i| m.get(i, r).clone()).collect();
        for _ in 0..r {
            let rv: BigInt = (0..r).map(|j| m.get(r, j) * &v[j]).sum();
            q.push(-rv);
            v = (0..r)
                .map(|i| (0..r).map(|j| m.get(i, j) * &v[j]).sum())
                .collect();
        }
        let next: Vec<BigInt> = (0..r + 2)
            .map(|i| (0..=i.min(r)).map(|j| &q[i - j] * &p[j]).sum())
            .collect();
        p = next;
    }
    p.reverse();
    IntPolynomial::new(p)
}

/// Exact rank and positive-semidefiniteness of a symmetric matrix, by
/// congruence diagonalization with symmetric pivoting.
pub fn symmetric_signature(m: &IntMatrix) -> Result<Signature, LinalgError> {
    if !m.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    Ok(Signature {
        rank: m.rank(),
        positive_semidefinite: is_psd(m),
    })
}

fn is_psd(m: &IntMatrix) -> bool {
    let n = m.dim();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    loop {
        if active.iter().any(|&i| a[i][i].is_negative()) {
            return false;
        }
        let Some(pos) = active.iter().position(|&i| a[i][i].is_positive()) else {
            // All remaining diagonal entries vanish, so the rest must be zero.
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
        };
        let i = active.remove(pos);
        let pivot_row = a[i].clone();
        for &j in &active {
            if a[j][i].is_zero() {
                continue;
            }
            let f = &a[j][i] / &pivot_row[i];
            for &k in &active {
                let d = &f * &pivot_row[k];
                a[j][k] -= d;
            }
        }
    }
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Hermite-normal-form Z-basis of the integer kernel `{v : m·vᵀ = 0}`.
///
/// Basis vectors are returned as rows of the HNF: leading entries positive
/// and strictly increasing in column, entries above each pivot reduced
/// into `[0, pivot)`.
pub fn kernel_lattice_basis(m: &IntMatrix) -> Vec<IntVector> {
    let n = m.dim();
    // Column operations on `a` mirrored on `u` keep m·u = a.
    let mut a = m.to_rows();
    let mut u = IntMatrix::identity(n).to_rows();
    let col_op = |mat: &mut Vec<Vec<BigInt>>, p: usize, c: usize, co: [&BigInt; 4]| {
        for row in mat.iter_mut() {
            let x = row[p].clone();
            let y = row[c].clone();
            row[p] = co[0] * &x + co[1] * &y;
            row[c] = co[2] * &x + co[3] * &y;
        }
    };
    let swap_cols = |mat: &mut Vec<Vec<BigInt>>, p: usize, c: usize| {
        for row in mat.iter_mut() {
            row.swap(p, c);
        }
    };
    let mut piv = 0;
    for r in 0..n {
        if piv == n {
            break;
        }
        for c in piv + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            if a[r][piv].is_zero() {
                swap_cols(&mut a, piv, c);
                swap_cols(&mut u, piv, c);
                continue;
            }
            let (g, x, y) = ext_gcd(&a[r][piv], &a[r][c]);
            let bg = -(&a[r][c] / &g);
            let ag = &a[r][piv] / &g;
            col_op(&mut a, piv, c, [&x, &y, &bg, &ag]);
            col_op(&mut u, piv, c, [&x, &y, &bg, &ag]);
        }
        if !a[r][piv].is_zero() {
            piv += 1;
        }
    }
    let basis: Vec<Vec<BigInt>> = (piv..n)
        .map(|c| (0..n).map(|i| u[i][c].clone()).collect())
        .collect();
    row_hnf(basis).into_iter().map(IntVector::new).collect()
}

/// Row Hermite normal form of a full-row-rank integer matrix.
fn row_hnf(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let Some(width) = rows.first().map(Vec::len) else {
        return rows;
    };
    let mut top = 0;
    for col in 0..width {
        if top == rows.len() {
            break;
        }
        for r in top + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            if rows[top][col].is_zero() {
                rows.swap(top, r);
                continue;
            }
            let (g, x, y) = ext_gcd(&rows[top][col], &rows[r][col]);
            let bg = &rows[r][col] / &g;
            let ag = &rows[top][col] / &g;
            let t: Vec<BigInt> = rows[top]
                .iter()
                .zip(&rows[r])
                .map(|(p, q)| &x * p + &y * q)
                .collect();
            let s: Vec<BigInt> = rows[top]
                .iter()
                .zip(&rows[r])
                .map(|(p, q)| -&bg * p + &ag * q)
                .collect();
            rows[top] = t;
            rows[r] = s;
        }
        if rows[top][col].is_zero() {
            continue;
        }
        if rows[top][col].is_negative() {
            for x in rows[top].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot = rows[top][col].clone();
        for r in 0..top {
            let q = rows[r][col].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            let sub: Vec<BigInt> = rows[top].iter().map(|x| &q * x).collect();
            for (x, s) in rows[r].iter_mut().zip(sub) {
                *x -= s;
            }
        }
        top += 1;
    }
    rows
}

/// Least `k ≤ cutoff` with `m^k = E`.
pub fn matrix_order(m: &IntMatrix, cutoff: u64) -> Result<MatrixOrder, LinalgError> {
    let det = m.determinant();
    if !det.abs().is_one() {
        return Err(LinalgError::NonUnimodular(det));
    }
    let mut power = m.clone();
    for k in 1..=cutoff {
        if power.is_identity() {
            return Ok(MatrixOrder::Finite(k));
        }
        if k < cutoff {
            power = &power * m;
        }
    }
    Ok(MatrixOrder::ExceedsCutoff)
}
