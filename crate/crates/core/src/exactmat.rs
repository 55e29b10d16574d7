//! Exact arithmetic on dense symmetric matrices over the rationals.
//!
//! Everything here is exact: determinants and ranks use fraction-free
//! (Bareiss) elimination on integer-scaled rows, inertia is read off a
//! rational congruence diagonalization, and kernels come from a rational
//! reduced row echelon form. No floating point enters this module except in
//! the explicit `to_f64` conversions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExactMatError {
    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("row and column selections differ in size ({rows} vs {cols})")]
    SelectionMismatch { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("expected a square matrix, row {row} has {len} entries for order {order}")]
    NotSquare {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("matrix order must be at least 1")]
    EmptyMatrix,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactMatError> {
    Rational::from_str(s.trim()).map_err(|_| ExactMatError::ParseRational(s.to_string()))
}

/// Parses a comma separated list of rationals, e.g. `1,1,-2` or `1/3,2`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, ExactMatError> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(parse_rational)
        .collect()
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back through the exponent when the quotient overflows a direct
        // conversion of numerator and denominator.
        let num = r.numer().to_f64().unwrap_or(f64::NAN);
        let den = r.denom().to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

/// Serde adapter storing a [`Rational`] as its canonical string.
pub mod rational_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a list of strings.
pub mod rational_string_vec {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Dense symmetric matrix; only the upper triangle is stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    order: usize,
    upper: Vec<Rational>,
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        assert!(order >= 1, "matrix order must be at least 1");
        SymMatrix {
            order,
            upper: vec![Rational::zero(); order * (order + 1) / 2],
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_diagonal(&vec![Rational::one(); order])
    }

    pub fn from_diagonal(diag: &[Rational]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, v) in diag.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in i..order {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Validates symmetry of a full row-major matrix.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self, ExactMatError> {
        let order = rows.len();
        if order == 0 {
            return Err(ExactMatError::EmptyMatrix);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(ExactMatError::NotSquare {
                    row: i,
                    len: row.len(),
                    order,
                });
            }
        }
        for i in 0..order {
            for j in (i + 1)..order {
                if rows[i][j] != rows[j][i] {
                    return Err(ExactMatError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self::from_fn(order, |i, j| rows[i][j].clone()))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, ExactMatError> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Rank-one matrix `alpha alpha^T`.
    pub fn outer(alpha: &[Rational]) -> Self {
        Self::from_fn(alpha.len(), |i, j| &alpha[i] * &alpha[j])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.order && j < self.order);
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // Row i starts after order + (order - 1) + ... + (order - i + 1) entries.
        i * self.order - i * (i.max(1) - 1) / 2 + (j - i)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.upper[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        let idx = self.index(i, j);
        self.upper[idx] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| to_f64(self.get(i, j))).collect())
            .collect()
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.order).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Zero::is_zero)
    }

    pub fn max_abs_entry(&self) -> Rational {
        self.upper
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn checked_add(&self, other: &SymMatrix) -> Result<SymMatrix, ExactMatError> {
        self.ensure_same_order(other)?;
        Ok(SymMatrix {
            order: self.order,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: &Rational) -> SymMatrix {
        SymMatrix {
            order: self.order,
            upper: self.upper.iter().map(|v| v * factor).collect(),
        }
    }

    /// `s * self + r * other`.
    pub fn linear_combination(
        &self,
        s: &Rational,
        other: &SymMatrix,
        r: &Rational,
    ) -> Result<SymMatrix, ExactMatError> {
        self.ensure_same_order(other)?;
        Ok(SymMatrix {
            order: self.order,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a * s + b * r)
                .collect(),
        })
    }

    fn ensure_same_order(&self, other: &SymMatrix) -> Result<(), ExactMatError> {
        if self.order != other.order {
            return Err(ExactMatError::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, ExactMatError> {
        if v.len() != self.order {
            return Err(ExactMatError::OrderMismatch {
                left: self.order,
                right: v.len(),
            });
        }
        Ok((0..self.order)
            .map(|i| {
                (0..self.order)
                    .map(|j| self.get(i, j) * &v[j])
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect())
    }

    /// True when the all-ones vector lies in the kernel.
    pub fn annihilates_ones(&self) -> bool {
        (0..self.order).all(|i| {
            (0..self.order)
                .map(|j| self.get(i, j))
                .fold(Rational::zero(), |acc, x| acc + x)
                .is_zero()
        })
    }

    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<SymMatrix, ExactMatError> {
        if indices.is_empty() {
            return Err(ExactMatError::EmptyMatrix);
        }
        self.check_indices(indices)?;
        Ok(SymMatrix::from_fn(indices.len(), |a, b| {
            self.get(indices[a], indices[b]).clone()
        }))
    }

    /// Simultaneous row/column permutation: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<SymMatrix, ExactMatError> {
        if perm.len() != self.order {
            return Err(ExactMatError::OrderMismatch {
                left: self.order,
                right: perm.len(),
            });
        }
        self.principal_submatrix(perm)
    }

    /// Block embedding: places `self` at rows/columns `offset..offset+order`
    /// of a zero matrix of order `order`.
    pub fn embedded(&self, order: usize, offset: usize) -> SymMatrix {
        assert!(offset + self.order <= order);
        let mut out = SymMatrix::zeros(order);
        for i in 0..self.order {
            for j in i..self.order {
                out.set(offset + i, offset + j, self.get(i, j).clone());
            }
        }
        out
    }

    /// `D M D` for the diagonal matrix `D = diag(d)`.
    pub fn diagonal_congruence(&self, d: &[Rational]) -> Result<SymMatrix, ExactMatError> {
        if d.len() != self.order {
            return Err(ExactMatError::OrderMismatch {
                left: self.order,
                right: d.len(),
            });
        }
        Ok(SymMatrix::from_fn(self.order, |i, j| {
            &d[i] * self.get(i, j) * &d[j]
        }))
    }

    /// `S^T M S` for a square (not necessarily symmetric) `S`.
    pub fn congruence(&self, s: &[Vec<Rational>]) -> Result<SymMatrix, ExactMatError> {
        let n = self.order;
        if s.len() != n {
            return Err(ExactMatError::OrderMismatch {
                left: n,
                right: s.len(),
            });
        }
        // ms = M * S
        let ms: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| self.get(i, k) * &s[k][j])
                            .fold(Rational::zero(), |a, x| a + x)
                    })
                    .collect()
            })
            .collect();
        Ok(SymMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| &s[k][i] * &ms[k][j])
                .fold(Rational::zero(), |a, x| a + x)
        }))
    }

    fn check_indices(&self, indices: &[usize]) -> Result<(), ExactMatError> {
        match indices.iter().find(|&&i| i >= self.order) {
            Some(&index) => Err(ExactMatError::IndexOutOfRange {
                index,
                order: self.order,
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix({}) [", self.order)?;
        for i in 0..self.order {
            let row: Vec<String> = (0..self.order)
                .map(|j| self.get(i, j).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.order)
            .map(|i| {
                (0..self.order)
                    .map(|j| self.get(i, j).to_string())
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        let rows = raw
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        SymMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Inertia `(p, q, z)` of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Signature {
            positive,
            negative,
            zero,
        }
    }

    pub fn order(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

/// Scales each row by the lcm of its denominators so the entries become
/// integers. Returns the integer rows and the product of the row scales.
fn integer_rows(rows: &[Vec<Rational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let out = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    (out, scale)
}

/// Bareiss elimination on a square integer matrix.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&p| !a[p][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign_flip = !sign_flip;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        -d
    } else {
        d
    }
}

/// Fraction-free rank of a rectangular integer matrix.
fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&p| !a[p][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let v = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Exact determinant of a square dense rational matrix.
pub fn det_dense(rows: &[Vec<Rational>]) -> Rational {
    let (ints, scale) = integer_rows(rows);
    Rational::new(bareiss_det(ints), scale)
}

/// Exact rank of a rectangular dense rational matrix.
pub fn rank_dense(rows: &[Vec<Rational>]) -> usize {
    bareiss_rank(integer_rows(rows).0)
}

pub fn det(m: &SymMatrix) -> Rational {
    det_dense(&m.to_rows())
}

/// Determinant of the submatrix with the given rows and columns.
pub fn minor(m: &SymMatrix, rows: &[usize], cols: &[usize]) -> Result<Rational, ExactMatError> {
    if rows.len() != cols.len() {
        return Err(ExactMatError::SelectionMismatch {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    m.check_indices(rows)?;
    m.check_indices(cols)?;
    let sub: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect())
        .collect();
    Ok(det_dense(&sub))
}

/// All order-2 principal minors `m_ii m_jj - m_ij^2`, keyed by `(i, j)`
/// with `i < j`, in lexicographic order.
pub fn principal_minors_order2(m: &SymMatrix) -> Vec<((usize, usize), Rational)> {
    let n = m.order();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = m.get(i, i) * m.get(j, j) - m.get(i, j) * m.get(i, j);
            out.push(((i, j), v));
        }
    }
    out
}

/// All principal minors of order `k`, keyed by their (sorted) index set.
pub fn principal_minors(m: &SymMatrix, k: usize) -> Vec<(Vec<usize>, Rational)> {
    combinations(m.order(), k)
        .into_iter()
        .map(|idx| {
            let v = minor(m, &idx, &idx).expect("indices in range");
            (idx, v)
        })
        .collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // Rightmost position that can still advance.
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn rank(m: &SymMatrix) -> usize {
    rank_dense(&m.to_rows())
}

/// One step of a congruence diagonalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pivot {
    /// A nonzero diagonal pivot.
    Single(Rational),
    /// A `[[0, b], [b, 0]]` block, congruent to `diag(1, -1)`.
    Pair(Rational),
}

/// Result of `S^T M S = block-diag(pivots..., 0...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceDiagonalization {
    pub pivots: Vec<Pivot>,
    pub zero: usize,
}

impl CongruenceDiagonalization {
    pub fn signature(&self) -> Signature {
        let mut p = 0;
        let mut q = 0;
        for pivot in &self.pivots {
            match pivot {
                Pivot::Single(v) if v.is_positive() => p += 1,
                Pivot::Single(_) => q += 1,
                Pivot::Pair(_) => {
                    p += 1;
                    q += 1;
                }
            }
        }
        Signature::new(p, q, self.zero)
    }
}

/// Symmetric-pivoting rational `LDL^T`: diagonal pivots when available,
/// otherwise a 2x2 off-diagonal block.
pub fn congruence_diagonalize(m: &SymMatrix) -> CongruenceDiagonalization {
    let mut a = m.to_rows();
    let mut pivots = Vec::new();
    loop {
        let k = a.len();
        if k == 0 {
            return CongruenceDiagonalization { pivots, zero: 0 };
        }
        if let Some(p) = (0..k).find(|&i| !a[i][i].is_zero()) {
            let d = a[p][p].clone();
            let col: Vec<Rational> = (0..k).map(|i| a[i][p].clone()).collect();
            let rest: Vec<usize> = (0..k).filter(|&i| i != p).collect();
            a = rest
                .iter()
                .map(|&i| {
                    rest.iter()
                        .map(|&j| &a[i][j] - &col[i] * &col[j] / &d)
                        .collect()
                })
                .collect();
            pivots.push(Pivot::Single(d));
            continue;
        }
        let off = (0..k)
            .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero());
        match off {
            Some((p, r)) => {
                let b = a[p][r].clone();
                let cp: Vec<Rational> = (0..k).map(|i| a[i][p].clone()).collect();
                let cr: Vec<Rational> = (0..k).map(|i| a[i][r].clone()).collect();
                let rest: Vec<usize> = (0..k).filter(|&i| i != p && i != r).collect();
                a = rest
                    .iter()
                    .map(|&i| {
                        rest.iter()
                            .map(|&j| &a[i][j] - (&cp[i] * &cr[j] + &cr[i] * &cp[j]) / &b)
                            .collect()
                    })
                    .collect();
                pivots.push(Pivot::Pair(b));
            }
            None => return CongruenceDiagonalization { pivots, zero: k },
        }
    }
}

/// Exact inertia by rational congruence diagonalization.
pub fn signature(m: &SymMatrix) -> Signature {
    congruence_diagonalize(m).signature()
}

/// Kernel basis of a rectangular dense matrix, one vector per free column of
/// the reduced row echelon form.
pub fn null_space_dense(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let nrows = a.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&p| !a[p][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for j in c..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn null_space(m: &SymMatrix) -> Vec<Vec<Rational>> {
    null_space_dense(&m.to_rows(), m.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> SymMatrix {
        SymMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn packed_storage_round_trips() {
        let a = SymMatrix::from_fn(5, |i, j| int((10 * i + j) as i64));
        for i in 0..5 {
            for j in 0..5 {
                let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
                assert_eq!(a.get(i, j), &int((10 * lo + hi) as i64));
            }
        }
    }

    #[test]
    fn rejects_asymmetric_rows() {
        let rows = vec![vec![int(1), int(2)], vec![int(3), int(1)]];
        assert_eq!(
            SymMatrix::from_rows(&rows),
            Err(ExactMatError::NotSymmetric { row: 0, col: 1 })
        );
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det(&m(&[&[5]])), int(5));
        assert_eq!(det(&SymMatrix::from_diagonal(&[int(1), int(-1)])), int(-1));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), int(-1));
        let half =
            SymMatrix::from_rows(&[vec![int(1), ratio(1, 2)], vec![ratio(1, 2), int(1)]]).unwrap();
        assert_eq!(det(&half), ratio(3, 4));
    }

    #[test]
    fn minors() {
        let d = SymMatrix::from_diagonal(&[int(2), int(3)]);
        assert_eq!(minor(&d, &[0], &[0]).unwrap(), int(2));
        assert_eq!(
            minor(&d, &[2], &[0]),
            Err(ExactMatError::IndexOutOfRange { index: 2, order: 2 })
        );
        assert!(matches!(
            minor(&d, &[0, 1], &[0]),
            Err(ExactMatError::SelectionMismatch { .. })
        ));
        let pm = principal_minors_order2(&SymMatrix::identity(3));
        assert_eq!(pm.len(), 3);
        assert!(pm.iter().all(|(_, v)| v == &int(1)));
    }

    #[test]
    fn rank_and_kernel() {
        assert_eq!(rank(&SymMatrix::zeros(3)), 0);
        assert!(null_space(&SymMatrix::identity(3)).is_empty());
        let ones = m(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(rank(&ones), 1);
        let ker = null_space(&ones);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(ones.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn signature_with_zero_diagonal() {
        assert_eq!(signature(&m(&[&[0, 1], &[1, 0]])), Signature::new(1, 1, 0));
        assert_eq!(
            signature(&SymMatrix::from_diagonal(&[int(1), int(-1)])),
            Signature::new(1, 1, 0)
        );
        assert_eq!(signature(&SymMatrix::identity(4)), Signature::new(4, 0, 0));
        assert_eq!(
            signature(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]])),
            Signature::new(1, 1, 1)
        );
        assert_eq!(signature(&SymMatrix::zeros(2)), Signature::new(0, 0, 2));
    }

    #[test]
    fn combinations_enumerate_subsets() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(5, 5), vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(combinations(4, 3)[3], vec![1, 2, 3]);
    }

    #[test]
    fn parses_rational_lists() {
        assert_eq!(
            parse_rational_list("1,1/2, -3").unwrap(),
            vec![int(1), ratio(1, 2), int(-3)]
        );
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
    }

    #[test]
    fn diagonal_congruence_of_sign_matrix() {
        let c = m(&[&[1, -1], &[-1, 1]]);
        let a = c.diagonal_congruence(&[int(2), int(3)]).unwrap();
        assert_eq!(a, m(&[&[4, -6], &[-6, 9]]));
    }
}
