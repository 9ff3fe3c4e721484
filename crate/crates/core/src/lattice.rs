//! Exact lattice linear algebra: vectors in `Z^d`, integer matrices,
//! fraction-free determinants, and Smith normal form.
//!
//! All computations are exact. Determinants use the Bareiss fraction-free
//! elimination, which keeps every intermediate value an integer. The Smith
//! normal form always picks the smallest nonzero pivot by absolute value,
//! which bounds coefficient growth and makes the output deterministic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A point of the lattice `Z^d`, stored as exact big integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector {
            coords: vec![BigInt::zero(); rank],
        }
    }

    /// Number of coordinates.
    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &BigInt {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Greatest common divisor of the absolute values of all coordinates;
    /// zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// True when the coordinates are coprime, i.e. the vector generates
    /// `span(v) ∩ Z^d`.
    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The primitive generator of the ray through `self`.
    ///
    /// Divides out the content; errors on the zero vector, which spans no
    /// ray.
    pub fn primitivize(&self) -> Result<Self> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(LatticeVector {
            coords: self.coords.iter().map(|c| c / &g).collect(),
        })
    }

    pub fn dot(&self, other: &Self) -> BigInt {
        debug_assert_eq!(self.rank(), other.rank());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn negated(&self) -> Self {
        LatticeVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        LatticeVector {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        IntMatrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(IntMatrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("rows must be rectangular")
    }

    /// Matrix whose columns are the given vectors; all vectors must share
    /// one rank.
    pub fn from_columns(vs: &[LatticeVector]) -> Result<Self> {
        let rank = vs.first().map_or(0, LatticeVector::rank);
        for v in vs {
            if v.rank() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: v.rank(),
                });
            }
        }
        let mut m = IntMatrix::zero(rank, vs.len());
        for (j, v) in vs.iter().enumerate() {
            for i in 0..rank {
                m.set(i, j, v.coord(i).clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row_slice(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix shapes do not compose");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.at(k, j);
                    let cur = out.at(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix/vector shapes do not compose");
        (0..self.rows)
            .map(|i| {
                self.row_slice(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn map_vector(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector::new(self.mul_vec(v.coords()))
    }

    /// Determinant by Bareiss fraction-free elimination: every intermediate
    /// division is exact, so the whole computation stays in `Z`.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::NonSquareMatrix {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            // det of the empty matrix is 1 (the unique map on the zero
            // lattice is the identity).
            return Ok(BigInt::one());
        }
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.row_slice(i).to_vec())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(sign * m[n - 1][n - 1].clone())
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.determinant()?.abs().is_one())
    }

    /// Exact inverse of a unimodular matrix; `None` when the determinant is
    /// not `±1`. The result is always integral and is verified against the
    /// identity before being returned.
    pub fn inverse_unimodular(&self) -> Result<Option<IntMatrix>> {
        if self.rows != self.cols {
            return Err(Error::NonSquareMatrix {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !self.is_unimodular()? {
            return Ok(None);
        }
        let n = self.rows;
        let mut inv = IntMatrix::zero(n, n);
        for j in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            let col = self
                .solve_integer(&e)?
                .ok_or_else(|| Error::Internal("unimodular matrix must be invertible".into()))?;
            for i in 0..n {
                inv.set(i, j, col[i].clone());
            }
        }
        if self.mul(&inv) != IntMatrix::identity(n) {
            return Err(Error::Internal("inverse verification failed".into()));
        }
        Ok(Some(inv))
    }

    /// Solve `self * x = rhs` exactly over the rationals; `None` when the
    /// matrix is singular.
    pub fn solve_rational(&self, rhs: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
        if self.rows != self.cols {
            return Err(Error::NonSquareMatrix {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: rhs.len(),
            });
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                self.row_slice(i)
                    .iter()
                    .map(|x| BigRational::from(x.clone()))
                    .collect()
            })
            .collect();
        let mut b: Vec<BigRational> = rhs.iter().map(|x| BigRational::from(x.clone())).collect();
        for k in 0..n {
            let pivot = match (k..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => p,
                None => return Ok(None),
            };
            a.swap(k, pivot);
            b.swap(k, pivot);
            let inv = a[k][k].recip();
            for j in k..n {
                a[k][j] = &a[k][j] * &inv;
            }
            b[k] = &b[k] * &inv;
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let factor = a[i][k].clone();
                for j in k..n {
                    a[i][j] = &a[i][j] - &factor * &a[k][j];
                }
                b[i] = &b[i] - &factor * &b[k];
            }
        }
        Ok(Some(b))
    }

    /// Solve `self * x = rhs` over the integers; `None` when there is no
    /// rational solution or the rational solution is not integral.
    pub fn solve_integer(&self, rhs: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let sol = match self.solve_rational(rhs)? {
            Some(s) => s,
            None => return Ok(None),
        };
        let mut out = Vec::with_capacity(sol.len());
        for x in sol {
            if !x.is_integer() {
                return Ok(None);
            }
            out.push(x.to_integer());
        }
        Ok(Some(out))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// True when `vs` is a basis of the full lattice, i.e. the matrix with
/// columns `vs` has determinant `±1`.
pub fn is_unimodular_basis(vs: &[LatticeVector]) -> Result<bool> {
    if vs.is_empty() {
        // The empty family is the (unique) basis of the rank-zero lattice.
        return Ok(true);
    }
    let rank = vs[0].rank();
    if vs.len() != rank {
        return Ok(false);
    }
    let m = IntMatrix::from_columns(vs)?;
    m.is_unimodular()
}

/// Smith decomposition `u * a * v = s` with `u`, `v` unimodular and `s`
/// diagonal with nonnegative entries `s_1 | s_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of `s`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.at(i, i).clone())
            .collect()
    }
}

/// Smith normal form of an integer matrix.
///
/// Pivots are always chosen as the entry of smallest nonzero absolute value
/// in the remaining block (row-major order breaks ties), which keeps
/// intermediate entries small and makes the decomposition deterministic.
/// The identity `u * a * v = s` is verified before returning.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithForm> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let m = a.rows();
    let n = a.cols();
    let mut s: Vec<Vec<BigInt>> = (0..m).map(|i| a.row_slice(i).to_vec()).collect();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    // Row operation row_i -= q * row_t, mirrored on u.
    fn row_sub(s: &mut [Vec<BigInt>], u: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let tr = s[t].clone();
        for (x, y) in s[i].iter_mut().zip(&tr) {
            *x -= q * y;
        }
        for c in 0..u.cols() {
            let val = u.at(i, c) - q * u.at(t, c);
            u.set(i, c, val);
        }
    }

    // Column operation col_j -= q * col_t, mirrored on v.
    fn col_sub(s: &mut [Vec<BigInt>], v: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in s.iter_mut() {
            let sub = q * &row[t];
            row[j] -= sub;
        }
        for r in 0..v.rows() {
            let val = v.at(r, j) - q * v.at(r, t);
            v.set(r, j, val);
        }
    }

    let steps = m.min(n);
    for t in 0..steps {
        'pivot: loop {
            // Smallest nonzero |entry| in the remaining block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => s[i][j].abs() < s[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match best {
                Some(p) => p,
                None => break 'pivot, // remaining block is zero
            };
            if pi != t {
                s.swap(t, pi);
                for c in 0..m {
                    let tmp = u.at(t, c).clone();
                    u.set(t, c, u.at(pi, c).clone());
                    u.set(pi, c, tmp);
                }
            }
            if pj != t {
                for row in s.iter_mut() {
                    row.swap(t, pj);
                }
                for r in 0..n {
                    let tmp = v.at(r, t).clone();
                    v.set(r, t, v.at(r, pj).clone());
                    v.set(r, pj, tmp);
                }
            }

            // Reduce column t and row t by the pivot.
            let mut clean = true;
            for i in t + 1..m {
                if s[i][t].is_zero() {
                    continue;
                }
                let q = s[i][t].div_floor(&s[t][t]);
                row_sub(&mut s, &mut u, i, t, &q);
                if !s[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if s[t][j].is_zero() {
                    continue;
                }
                let q = s[t][j].div_floor(&s[t][t]);
                col_sub(&mut s, &mut v, j, t, &q);
                if !s[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue 'pivot; // smaller remainders exist; re-pivot
            }

            // Enforce divisibility: fold any non-multiple into row t.
            for i in t + 1..m {
                for j in t + 1..n {
                    if !(&s[i][j] % &s[t][t]).is_zero() {
                        let one = BigInt::one();
                        let q = -&one;
                        row_sub(&mut s, &mut u, t, i, &q); // row_t += row_i
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if s[t][t].is_negative() {
            for x in s[t].iter_mut() {
                *x = -x.clone();
            }
            for c in 0..m {
                let val = -u.at(t, c);
                u.set(t, c, val);
            }
        }
    }

    let s_mat = IntMatrix::from_rows(s)?;
    let form = SmithForm { u, s: s_mat, v };

    // Defensive verification of the decomposition.
    if form.u.mul(a).mul(&form.v) != form.s {
        return Err(Error::Internal("smith decomposition verification failed".into()));
    }
    if !form.u.is_unimodular()? || !form.v.is_unimodular()? {
        return Err(Error::Internal("smith transforms must be unimodular".into()));
    }
    let diag = form.diagonal();
    for w in diag.windows(2) {
        if !w[0].is_zero() && !(&w[1] % &w[0]).is_zero() {
            return Err(Error::Internal("smith diagonal must form a divisibility chain".into()));
        }
        if w[0].is_zero() && !w[1].is_zero() {
            return Err(Error::Internal("smith diagonal has a zero before a nonzero".into()));
        }
    }
    Ok(form)
}
