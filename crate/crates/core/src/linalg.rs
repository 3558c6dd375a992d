//! Exact linear algebra over ℚ(i): sparse reduced row echelon forms, kernels,
//! linear solves, and a small dense matrix type for operator matrices.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use crate::rational::Rational;
use crate::scalar::Scalar;

/// Sparse vector as `(column, value)` pairs with strictly increasing columns
/// and no zero values.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `a + c·b`, merging two sorted sparse vectors.
pub fn axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_from_map(m: BTreeMap<usize, Scalar>) -> SparseVec {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn get(row: &SparseVec, col: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// Incrementally maintained reduced row echelon form. Every stored row has a
/// leading 1 in its pivot column and zeros in all other pivot columns.
#[derive(Clone, Debug, Default)]
pub struct Rref {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_of: BTreeMap<usize, usize>,
}

impl Rref {
    pub fn new(ncols: usize) -> Self {
        Rref { ncols, rows: Vec::new(), pivot_of: BTreeMap::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = SparseVec>>(ncols: usize, rows: I) -> Self {
        let mut r = Rref::new(ncols);
        for row in rows {
            r.insert(row);
        }
        r
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` modulo the current row space.
    pub fn reduce(&self, row: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = row.iter().cloned().collect();
        for (col, val) in row {
            if let Some(&r) = self.pivot_of.get(col) {
                let c = -val;
                for (k, w) in &self.rows[r] {
                    let e = acc.entry(*k).or_insert(Scalar::ZERO);
                    *e += &(&c * w);
                }
            }
        }
        sparse_from_map(acc)
    }

    /// Adds a row; returns true when the rank grew.
    pub fn insert(&mut self, row: SparseVec) -> bool {
        let red = self.reduce(&row);
        let Some((pc, lead)) = red.first().cloned() else {
            return false;
        };
        let inv = lead.recip();
        let newrow: SparseVec = red.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
        for r in self.rows.iter_mut() {
            if let Some(c) = get(r, pc).cloned() {
                *r = axpy(r, &-c, &newrow);
            }
        }
        self.pivot_of.insert(pc, self.rows.len());
        self.rows.push(newrow);
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.pivot_of.keys().copied().collect()
    }

    /// Rows sorted by pivot column: the canonical reduced basis of the row space.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.pivot_of.values().map(|&r| self.rows[r].clone()).collect()
    }

    pub fn contains(&self, row: &SparseVec) -> bool {
        self.reduce(row).is_empty()
    }

    /// Basis of `{x : R x = 0}`, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut out = Vec::new();
        // column -> list of (pivot col, coefficient) for rows containing it
        let mut by_col: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (&pc, &r) in &self.pivot_of {
            for (k, v) in &self.rows[r] {
                if *k != pc {
                    by_col.entry(*k).or_default().push((pc, v.clone()));
                }
            }
        }
        for f in 0..self.ncols {
            if self.pivot_of.contains_key(&f) {
                continue;
            }
            let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
            m.insert(f, Scalar::ONE);
            if let Some(list) = by_col.get(&f) {
                for (pc, v) in list {
                    m.insert(*pc, -v);
                }
            }
            out.push(sparse_from_map(m));
        }
        out
    }
}

/// Kernel basis of the matrix with the given sparse rows.
pub fn kernel(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    Rref::from_rows(ncols, rows.iter().cloned()).kernel()
}

pub fn rank(rows: &[SparseVec], ncols: usize) -> usize {
    Rref::from_rows(ncols, rows.iter().cloned()).rank()
}

/// Solution of `Σ_i x_i·cols[i] = target`, with free variables set to zero.
/// Returns `None` when the system is inconsistent; the bool flags uniqueness.
pub fn solve_columns(cols: &[SparseVec], target: &SparseVec) -> Option<(Vec<Scalar>, bool)> {
    let k = cols.len();
    let mut eqs: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
    for (i, c) in cols.iter().enumerate() {
        for (row, v) in c {
            eqs.entry(*row).or_default().insert(i, v.clone());
        }
    }
    for (row, v) in target {
        eqs.entry(*row).or_default().insert(k, v.clone());
    }
    let rref = Rref::from_rows(k + 1, eqs.into_values().map(sparse_from_map));
    if rref.pivot_of.contains_key(&k) {
        return None;
    }
    let mut x = vec![Scalar::ZERO; k];
    for (&pc, &r) in &rref.pivot_of {
        x[pc] = get(&rref.rows[r], k).cloned().unwrap_or(Scalar::ZERO);
    }
    Some((x, rref.rank() == k))
}

/// Dense row-major matrix over ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn conj(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        self.transpose().conj()
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::ZERO;
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    pub fn is_anti_hermitian(&self) -> bool {
        self.rows == self.cols && self.adjoint() == self.scale(&Scalar::int(-1))
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && self.adjoint() == *self
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    pub fn to_sparse_rows(&self) -> Vec<SparseVec> {
        (0..self.rows)
            .map(|i| self.row(i).iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.to_sparse_rows(), self.cols)
    }

    /// `Some(c)` when the matrix equals `c·Id`.
    pub fn scalar_value(&self) -> Option<Scalar> {
        if self.rows != self.cols {
            return None;
        }
        let c = if self.rows == 0 { Scalar::ZERO } else { self[(0, 0)].clone() };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect = if i == j { &c } else { &Scalar::ZERO };
                if self[(i, j)] != *expect {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// First entry where the two matrices differ.
    pub fn first_difference(&self, other: &Matrix) -> Option<(usize, usize, Scalar, Scalar)> {
        if self.shape() != other.shape() {
            return Some((self.rows, self.cols, Scalar::ZERO, Scalar::ZERO));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)] != other[(i, j)] {
                    return Some((i, j, self[(i, j)].clone(), other[(i, j)].clone()));
                }
            }
        }
        None
    }

    /// Submatrix with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::ZERO;
                for (a, b) in self.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Scales every row by a rational weight from the left: `diag(w)·self`.
    pub fn scale_rows(&self, w: &[Rational]) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = m[(i, j)].scale(&w[i]);
            }
        }
        m
    }

    /// Inverse via Gauss–Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let rows = (0..n).map(|i| {
            let mut r: SparseVec = self.row(i).iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect();
            r.push((n + i, Scalar::ONE));
            r
        });
        let rref = Rref::from_rows(2 * n, rows);
        if rref.pivots().iter().take(n).copied().ne(0..n) || rref.rank() != n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for (i, row) in rref.basis().into_iter().enumerate() {
            for (k, v) in row {
                if k >= n {
                    inv[(i, k - n)] = v;
                }
            }
        }
        Some(inv)
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut m = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] += &(a * b);
                    }
                }
            }
        }
        m
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sum");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in difference");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for x in self.row(i) {
                write!(f, "{} ", x)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[(usize, i64)]) -> SparseVec {
        v.iter().map(|&(k, x)| (k, Scalar::int(x))).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        // [1 2 3]
        let k = kernel(&[sv(&[(0, 1), (1, 2), (2, 3)])], 3);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], sv(&[(0, -2), (1, 1)]));
        assert_eq!(k[1], sv(&[(0, -3), (2, 1)]));
    }

    #[test]
    fn rank_and_dependent_rows() {
        let rows = [sv(&[(0, 1), (1, 1)]), sv(&[(1, 1), (2, 1)]), sv(&[(0, 1), (2, -1)])];
        assert_eq!(rank(&rows, 3), 2);
    }

    #[test]
    fn solve_unique_and_inconsistent() {
        let cols = [sv(&[(0, 1), (1, 1)]), sv(&[(0, 1), (1, -1)])];
        let (x, uniq) = solve_columns(&cols, &sv(&[(0, 3), (1, 1)])).unwrap();
        assert!(uniq);
        assert_eq!(x, vec![Scalar::int(2), Scalar::int(1)]);
        let cols = [sv(&[(0, 1)])];
        assert!(solve_columns(&cols, &sv(&[(1, 1)])).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn complex_kernel() {
        // [1 i] has kernel spanned by (-i, 1)
        let row: SparseVec = vec![(0, Scalar::ONE), (1, Scalar::I)];
        let k = kernel(&[row], 2);
        assert_eq!(k, vec![vec![(0, -Scalar::I), (1, Scalar::ONE)]]);
    }
}
