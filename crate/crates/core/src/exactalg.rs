//! Exact rational and integer linear algebra.
//!
//! A [`RowSystem`] is built once from an edge-vector matrix and then only read.
//! Construction goes through [`BigRational`] so that the coefficient matrix and
//! its denominators are never rounded; the resulting `R`, `C` and `N` blocks are
//! integer matrices and are stored as `i64` after a checked conversion. All the
//! membership tests the search performs millions of times run on those integer
//! blocks with `i128` accumulators.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("matrix is empty")]
    Empty,
    #[error("degenerate shape: need 1 < k < n, got k = {k}, n = {n}")]
    DegenerateShape { k: usize, n: usize },
    #[error("the first {k} columns are linearly dependent")]
    RankDeficient { k: usize },
    #[error("columns {first} and {second} are scalar multiples of each other")]
    ParallelColumns { first: usize, second: usize },
    #[error("row {row} of C is zero; no graph for this system is vector 2-connected")]
    ZeroRowInC { row: usize },
    #[error("integer overflow while forming R and N")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("vector has length {found}, expected {expected}")]
pub struct LengthMismatch {
    pub expected: usize,
    pub found: usize,
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let nrows = rows.len();
        Some(RationalMatrix {
            rows: nrows,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integer_rows<R: AsRef<[i64]>>(rows: &[R]) -> Option<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Columns `cols` of this matrix, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = RationalMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("; ")?;
            }
            for (c, x) in self.row(r).iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
        }
        f.write_str("]")
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Gauss-Jordan elimination over the rationals. The result is unique.
pub fn rref(m: &RationalMatrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = a.get(row, col).recip();
        for c in col..a.cols {
            let v = a.get(row, c) * &inv;
            a.set(row, c, v);
        }
        for r in 0..a.rows {
            if r == row || a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col).clone();
            for c in col..a.cols {
                let v = a.get(r, c) - &factor * a.get(row, c);
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    Rref {
        matrix: a,
        pivots,
        rank,
    }
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Option<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return None;
        }
        Some(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix product, or `None` on shape mismatch or overflow.
    pub fn checked_mul(&self, other: &IntMatrix) -> Option<IntMatrix> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0i64;
                for i in 0..self.cols {
                    acc = acc.checked_add(self.get(r, i).checked_mul(other.get(i, c))?)?;
                }
                out.set(r, c, acc);
            }
        }
        Some(out)
    }

    /// `self * x`, accumulated in `i128`.
    fn mul_vec_is_zero(&self, x: &[i64]) -> bool {
        (0..self.rows).all(|r| {
            self.row(r)
                .iter()
                .zip(x)
                .map(|(&a, &b)| a as i128 * b as i128)
                .sum::<i128>()
                == 0
        })
    }
}

/// The integer row matrix `R = [qI | C]` and null matrix `N = [C / -qI]` of an
/// edge-vector set, with `R * N = 0`.
///
/// Column `i` of `R` is the lattice displacement of edge vector `s_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowSystem {
    n: usize,
    k: usize,
    q: i64,
    r: IntMatrix,
    c: IntMatrix,
    null: IntMatrix,
    null_t: IntMatrix,
    columns: Vec<Vec<i64>>,
}

/// Normalizes an edge-vector matrix (or an already formed row matrix) into a
/// [`RowSystem`].
///
/// The rank of the input is taken as `k`; the first `k` columns must be a basis
/// of the column span.
pub fn build_row_system(edge_matrix: &RationalMatrix) -> Result<RowSystem, SystemError> {
    if edge_matrix.is_empty() {
        return Err(SystemError::Empty);
    }
    let n = edge_matrix.cols();
    let reduced = rref(edge_matrix);
    let k = reduced.rank;
    if k <= 1 || k >= n {
        return Err(SystemError::DegenerateShape { k, n });
    }
    if reduced.pivots != (0..k).collect::<Vec<_>>() {
        return Err(SystemError::RankDeficient { k });
    }
    // The rref is [I_k | C'] on its first k rows.
    for a in 0..n {
        for b in a + 1..n {
            let pair = edge_matrix.select_columns(&[a, b]);
            if rref(&pair).rank < 2 {
                return Err(SystemError::ParallelColumns { first: a, second: b });
            }
        }
    }
    let coeffs: Vec<Vec<Rational>> = (0..k)
        .map(|r| reduced.matrix.row(r)[k..].to_vec())
        .collect();
    if let Some(row) = coeffs.iter().position(|r| r.iter().all(Zero::is_zero)) {
        return Err(SystemError::ZeroRowInC { row });
    }
    let q_big = coeffs
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let q = q_big.to_i64().ok_or(SystemError::Overflow)?;
    let c_rows: Vec<Vec<i64>> = coeffs
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let scaled = x * Rational::from_integer(q_big.clone());
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer().to_i64().ok_or(SystemError::Overflow)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    RowSystem::from_blocks(q, IntMatrix::from_rows(&c_rows).expect("rectangular C"))
}

impl RowSystem {
    /// Assembles `R = [qI | C]` and `N = [C / -qI]` from `q` and the `k x (n-k)` block `C`.
    pub fn from_blocks(q: i64, c: IntMatrix) -> Result<RowSystem, SystemError> {
        let k = c.rows();
        let n = k + c.cols();
        if k <= 1 || k >= n {
            return Err(SystemError::DegenerateShape { k, n });
        }
        let mut r = IntMatrix::zeros(k, n);
        let mut null = IntMatrix::zeros(n, n - k);
        for i in 0..k {
            r.set(i, i, q);
            for j in 0..n - k {
                r.set(i, k + j, c.get(i, j));
                null.set(i, j, c.get(i, j));
            }
        }
        for j in 0..n - k {
            null.set(k + j, j, q.checked_neg().ok_or(SystemError::Overflow)?);
        }
        let product = r.checked_mul(&null).ok_or(SystemError::Overflow)?;
        debug_assert!(product.data.iter().all(|&x| x == 0));
        let columns = (0..n).map(|i| r.column(i)).collect();
        let null_t = null.transpose();
        Ok(RowSystem {
            n,
            k,
            q,
            r,
            c,
            null,
            null_t,
            columns,
        })
    }

    /// Number of edge vectors.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the lattice the graphs live in.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn row_matrix(&self) -> &IntMatrix {
        &self.r
    }

    pub fn c_block(&self) -> &IntMatrix {
        &self.c
    }

    pub fn null_matrix(&self) -> &IntMatrix {
        &self.null
    }

    /// Lattice displacement of edge vector `i` (column `i` of `R`).
    pub fn column(&self, i: usize) -> &[i64] {
        &self.columns[i]
    }

    /// `N^T x = 0` without a length check.
    pub(crate) fn row_space_contains(&self, x: &[i64]) -> bool {
        debug_assert_eq!(x.len(), self.n);
        self.null_t.mul_vec_is_zero(x)
    }

    /// `R x = 0` without a length check.
    pub(crate) fn null_space_contains(&self, x: &[i64]) -> bool {
        debug_assert_eq!(x.len(), self.n);
        self.r.mul_vec_is_zero(x)
    }

    fn check_len(&self, x: &[i64]) -> Result<(), LengthMismatch> {
        if x.len() == self.n {
            Ok(())
        } else {
            Err(LengthMismatch {
                expected: self.n,
                found: x.len(),
            })
        }
    }
}

/// Whether `x` is a rational combination of the rows of `R`.
pub fn in_row_space(x: &[i64], sys: &RowSystem) -> Result<bool, LengthMismatch> {
    sys.check_len(x)?;
    Ok(sys.row_space_contains(x))
}

/// Whether `R x = 0`.
pub fn in_null_space(x: &[i64], sys: &RowSystem) -> Result<bool, LengthMismatch> {
    sys.check_len(x)?;
    Ok(sys.null_space_contains(x))
}

/// All integer points of `Row(R)` with sup-norm at most `bound`, in ascending
/// lexicographic order. The zero vector is included.
///
/// A point `a^T R` is determined by its first block `q a`, so the scan runs
/// over integer first blocks in `[-bound, bound]^k` and keeps those whose
/// second block `(q a)^T C / q` is integral and in range.
pub fn enumerate_bounded_cuts(sys: &RowSystem, bound: u32) -> Vec<Vec<i64>> {
    let b = i64::from(bound);
    let (k, n, q) = (sys.k, sys.n, sys.q as i128);
    let mut head = vec![-b; k];
    let mut out = Vec::new();
    'scan: loop {
        let mut x = Vec::with_capacity(n);
        x.extend_from_slice(&head);
        let mut ok = true;
        for j in 0..n - k {
            let num: i128 = (0..k).map(|i| head[i] as i128 * sys.c.get(i, j) as i128).sum();
            if num % q != 0 || (num / q).abs() > b as i128 {
                ok = false;
                break;
            }
            x.push((num / q) as i64);
        }
        if ok {
            out.push(x);
        }
        // odometer, last coordinate fastest, so the output is already sorted
        for i in (0..k).rev() {
            if head[i] < b {
                head[i] += 1;
                continue 'scan;
            }
            head[i] = -b;
        }
        break;
    }
    out
}

/// Rank of the rational span of `vectors`.
///
/// Runs fraction-free integer elimination with gcd-normalised rows and falls
/// back to rational elimination if an intermediate would overflow.
pub fn span_rank(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    integer_rank(vectors).unwrap_or_else(|| {
        let m = RationalMatrix::from_integer_rows(vectors).expect("equal-length vectors");
        rref(&m).rank
    })
}

fn integer_rank(vectors: &[Vec<i64>]) -> Option<usize> {
    let cols = vectors[0].len();
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pv = pivot_row[col];
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[col];
            if f == 0 {
                continue;
            }
            let g = pv.gcd(&f);
            let (a, b) = (pv / g, f / g);
            let mut content = 0i128;
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = x.checked_mul(a)?.checked_sub(y.checked_mul(b)?)?;
                content = content.gcd(x);
            }
            if content > 1 {
                row.iter_mut().for_each(|x| *x /= content);
            }
        }
        rank += 1;
    }
    Some(rank)
}

/// Exact rational solve of `a^T R = x`; `None` when `x` is outside the row space.
/// Independent of the `N^T x` route used by [`in_row_space`].
pub fn row_space_coefficients(x: &[i64], sys: &RowSystem) -> Option<Vec<Rational>> {
    let k = sys.k;
    let q = Rational::from_integer(sys.q.into());
    let a: Vec<Rational> = x[..k]
        .iter()
        .map(|&v| Rational::from_integer(v.into()) / &q)
        .collect();
    for j in 0..sys.n - k {
        let s = (0..k).fold(Rational::zero(), |acc, i| {
            acc + &a[i] * Rational::from_integer(sys.c.get(i, j).into())
        });
        if s != Rational::from_integer(x[k + j].into()) {
            return None;
        }
    }
    Some(a)
}

pub(crate) fn is_zero_vec(x: &[i64]) -> bool {
    x.iter().all(|&v| v == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn r1() -> RowSystem {
        build_row_system(&RationalMatrix::from_integer_rows(&[[2, 0, 1, 1], [0, 2, 1, -1]]).unwrap())
            .unwrap()
    }

    fn triangle() -> RowSystem {
        build_row_system(&RationalMatrix::from_integer_rows(&[[1, 0, 1], [0, 1, 1]]).unwrap()).unwrap()
    }

    #[test]
    fn rref_identity() {
        let id = RationalMatrix::from_integer_rows(&[[1, 0], [0, 1]]).unwrap();
        let out = rref(&id);
        assert_eq!(out.matrix, id);
        assert_eq!(out.pivots, vec![0, 1]);
        assert_eq!(out.rank, 2);
    }

    #[test]
    fn rref_hand_elimination() {
        let m = RationalMatrix::from_integer_rows(&[[2, 0, 1, 1], [0, 2, 1, -1]]).unwrap();
        let expected = RationalMatrix::from_rows(vec![
            vec![rat(1, 1), rat(0, 1), rat(1, 2), rat(1, 2)],
            vec![rat(0, 1), rat(1, 1), rat(1, 2), rat(-1, 2)],
        ])
        .unwrap();
        let out = rref(&m);
        assert_eq!(out.matrix, expected);
        assert_eq!(out.rank, 2);
    }

    #[test]
    fn rref_zero_row_keeps_rank() {
        let m = RationalMatrix::from_integer_rows(&[[2, 0, 1, 1], [0, 2, 1, -1], [0, 0, 0, 0]]).unwrap();
        assert_eq!(rref(&m).rank, 2);
    }

    #[test]
    fn builds_r1() {
        let sys = r1();
        assert_eq!(sys.q(), 2);
        assert_eq!(sys.c_block().to_rows(), vec![vec![1, 1], vec![1, -1]]);
        assert_eq!(sys.row_matrix().to_rows(), vec![vec![2, 0, 1, 1], vec![0, 2, 1, -1]]);
        assert_eq!(
            sys.null_matrix().to_rows(),
            vec![vec![1, 1], vec![1, -1], vec![-2, 0], vec![0, -2]]
        );
        let prod = sys.row_matrix().checked_mul(sys.null_matrix()).unwrap();
        assert!(prod.to_rows().iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn builds_triangle() {
        let sys = triangle();
        assert_eq!(sys.q(), 1);
        assert_eq!(sys.row_matrix().to_rows(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(sys.null_matrix().to_rows(), vec![vec![1], vec![1], vec![-1]]);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let parallel = RationalMatrix::from_integer_rows(&[[1, 0, 2], [0, 1, 0]]).unwrap();
        assert_eq!(
            build_row_system(&parallel),
            Err(SystemError::ParallelColumns { first: 0, second: 2 })
        );
        let dependent = RationalMatrix::from_integer_rows(&[[1, 2, 0], [1, 2, 1]]).unwrap();
        assert!(matches!(build_row_system(&dependent), Err(SystemError::RankDeficient { .. })));
        let square = RationalMatrix::from_integer_rows(&[[1, 0], [0, 1]]).unwrap();
        assert!(matches!(build_row_system(&square), Err(SystemError::DegenerateShape { .. })));
        let c_zero = RationalMatrix::from_integer_rows(&[[1, 0, 0, 0], [0, 1, 1, 2]]).unwrap();
        assert_eq!(build_row_system(&c_zero), Err(SystemError::ParallelColumns { first: 1, second: 2 }));
        // s4 = s2 + s3 never involves s1
        let c_zero = RationalMatrix::from_integer_rows(&[[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 1]]).unwrap();
        assert_eq!(build_row_system(&c_zero), Err(SystemError::ZeroRowInC { row: 0 }));
    }

    #[test]
    fn row_space_examples() {
        let sys = r1();
        assert_eq!(in_row_space(&[1, 1, 1, 0], &sys), Ok(true));
        assert_eq!(in_row_space(&[0, 0, 0, 0], &sys), Ok(true));
        assert_eq!(in_row_space(&[1, 0, 0, 0], &sys), Ok(false));
        assert_eq!(
            in_row_space(&[1, 0], &sys),
            Err(LengthMismatch { expected: 4, found: 2 })
        );
        assert_eq!(
            row_space_coefficients(&[1, 1, 1, 0], &sys),
            Some(vec![rat(1, 2), rat(1, 2)])
        );
    }

    #[test]
    fn null_space_examples() {
        let sys = r1();
        for j in 0..2 {
            assert_eq!(in_null_space(&sys.null_matrix().column(j), &sys), Ok(true));
        }
        assert_eq!(in_null_space(&[-1, 0, 1, 1], &sys), Ok(true));
        assert_eq!(in_null_space(&[1, 0, 0, 0], &sys), Ok(false));
    }

    #[test]
    fn bounded_cuts_r1() {
        let cuts = enumerate_bounded_cuts(&r1(), 2);
        assert_eq!(cuts.len(), 13);
        assert!(cuts.windows(2).all(|w| w[0] < w[1]));
        assert!(cuts.contains(&vec![1, 1, 1, 0]));
        assert!(cuts.contains(&vec![2, 0, 1, 1]));
    }

    #[test]
    fn bounded_cuts_only_zero_when_nothing_else_fits() {
        // q = 3 and every nonzero lattice point of the row space has an entry >= 2
        let sys = build_row_system(&RationalMatrix::from_integer_rows(&[[3, 0, 1, 1], [0, 3, 1, 2]]).unwrap())
            .unwrap();
        assert_eq!(sys.q(), 3);
        assert_eq!(enumerate_bounded_cuts(&sys, 1), vec![vec![0, 0, 0, 0]]);
        // half-integer coefficients already fit at bound 1 for R1
        assert_eq!(
            enumerate_bounded_cuts(&r1(), 1),
            vec![vec![-1, -1, -1, 0], vec![-1, 1, 0, -1], vec![0, 0, 0, 0], vec![1, -1, 0, 1], vec![1, 1, 1, 0]]
        );
    }

    #[test]
    fn bounded_cuts_triangle() {
        let cuts = enumerate_bounded_cuts(&triangle(), 1);
        assert_eq!(cuts.len(), 7);
        assert!(!cuts.contains(&vec![1, 1, 2]));
    }

    #[test]
    fn span_rank_examples() {
        assert_eq!(span_rank(&[]), 0);
        let sys = r1();
        let cols: Vec<_> = (0..2).map(|j| sys.null_matrix().column(j)).collect();
        assert_eq!(span_rank(&cols), 2);
        assert_eq!(span_rank(&[vec![1, -2, 3], vec![2, -4, 6]]), 1);
    }
}
