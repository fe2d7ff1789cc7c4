//! Dense matrices and row reduction over the small fields.
//!
//! Matrices act on column vectors: column `j` of a linear map is the image of
//! basis vector `e_j`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::FieldId;
use crate::vector::Vector;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Matrix {
    field: FieldId,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(field: FieldId, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: FieldId, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: FieldId, rows: &[Vec<u8>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            if let Some(&bad) = row.iter().find(|&&x| !field.is_valid_code(x)) {
                return Err(Error::Domain(format!("code {bad} is not an element of {field}")));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldId, cols: &[Vector]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vector::dim);
        let mut m = Self::zeros(field, r, c);
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.dim(), r);
            for i in 0..r {
                m.data[i * c + j] = v.coords()[i];
            }
        }
        m
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, code: u8) {
        debug_assert!(self.field.is_valid_code(code));
        self.data[i * self.cols + j] = code;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        let coords = (0..self.rows).map(|i| self.get(i, j)).collect();
        Vector::from_codes_unchecked(self.field, coords)
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Entry-wise conjugate (nontrivial over F4 only).
    pub fn conj(&self) -> Matrix {
        let f = self.field;
        Matrix { data: self.data.iter().map(|&x| f.conj(x)).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "mixed-field product");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = self.field;
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = Matrix::zeros(f, n, p);
        for i in 0..n {
            let out_row = &mut out.data[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == 0 {
                    continue;
                }
                let other_row = &other.data[k * p..(k + 1) * p];
                if a == 1 {
                    for (o, &b) in out_row.iter_mut().zip(other_row) {
                        *o = f.add(*o, b);
                    }
                } else {
                    for (o, &b) in out_row.iter_mut().zip(other_row) {
                        *o = f.add(*o, f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim(), "shape mismatch in matrix-vector product");
        let f = self.field;
        let coords = (0..self.rows)
            .map(|i| self.row(i).iter().zip(v.coords()).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect();
        Vector::from_codes_unchecked(f, coords)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u8::from(i == j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Multiplicative order, or an error if it exceeds `cap`.
    pub fn order(&self, cap: u32) -> Result<u32> {
        assert!(self.is_square());
        let mut power = self.clone();
        for k in 1..=cap {
            if power.is_identity() {
                return Ok(k);
            }
            power = power.mul(self);
        }
        Err(Error::OrderCapExceeded { cap })
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u8>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        rref(self.field, &mut rows, self.cols).len()
    }

    pub fn determinant(&self) -> u8 {
        assert!(self.is_square());
        let f = self.field;
        let n = self.rows;
        let mut a: Vec<Vec<u8>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut det = 1u8;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| a[r][col] != 0) else {
                return 0;
            };
            if p != col {
                a.swap(p, col);
                det = f.neg(det);
            }
            let pivot = a[col][col];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot);
            for r in col + 1..n {
                let factor = f.mul(a[r][col], inv);
                if factor == 0 {
                    continue;
                }
                let (top, bottom) = a.split_at_mut(r);
                let pivot_row = &top[col];
                for (x, &y) in bottom[0].iter_mut().zip(pivot_row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        assert!(self.is_square());
        let f = self.field;
        let n = self.rows;
        let mut aug: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| u8::from(i == j)));
                row
            })
            .collect();
        let pivots = rref(f, &mut aug, n);
        if pivots.len() < n {
            return Err(Error::Degenerate("matrix is singular".into()));
        }
        let rows: Vec<Vec<u8>> = aug.into_iter().map(|row| row[n..].to_vec()).collect();
        Matrix::from_rows(f, &rows)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("\n")?;
            }
            let syms: Vec<&str> = self.row(i).iter().map(|&c| self.field.symbol(c)).collect();
            f.write_str(&syms.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&c| self.field.symbol(c)).collect::<Vec<_>>().join(" "))
            .collect();
        rows.serialize(serializer)
    }
}

/// Reduces `rows` (each of length ≥ `ncols`) to reduced row echelon form,
/// considering only the first `ncols` columns for pivots. Zero rows are
/// dropped. Returns the pivot column of each remaining row.
pub fn rref(field: FieldId, rows: &mut Vec<Vec<u8>>, ncols: usize) -> Vec<usize> {
    let f = field;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][col]);
        if inv != 1 {
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Solution set of a linear system `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vector,
    pub kernel: Vec<Vector>,
}

impl AffineSolution {
    /// Number of solutions, saturating.
    pub fn count(&self) -> u64 {
        let q = u64::from(self.particular.field().order());
        q.saturating_pow(self.kernel.len() as u32)
    }

    /// Every solution, in lexicographic order of kernel coefficients.
    pub fn iter(&self) -> impl Iterator<Item = Vector> + '_ {
        let field = self.particular.field();
        let k = self.kernel.len();
        Vector::all(field, k).map(move |coeffs| {
            let mut x = self.particular.clone();
            for (c, basis) in coeffs.coords().iter().zip(&self.kernel) {
                x.axpy_code(*c, basis);
            }
            x
        })
    }
}

/// Solves `A x = b` where `A` has `rows.len()` equations in `ncols` unknowns.
/// Returns `None` for an inconsistent system.
pub fn solve_system(field: FieldId, rows: &[Vec<u8>], rhs: &[u8], ncols: usize) -> Option<AffineSolution> {
    assert_eq!(rows.len(), rhs.len());
    let f = field;
    let mut aug: Vec<Vec<u8>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            assert_eq!(row.len(), ncols);
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    let pivots = rref(f, &mut aug, ncols);
    let mut particular = vec![0u8; ncols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        particular[pc] = row[ncols];
    }
    let x = Vector::from_codes_unchecked(f, particular);
    // rref drops rows without a pivot among the unknowns, including any
    // `0 = b` contradictions, so consistency is checked on the original rows
    for (row, &b) in rows.iter().zip(rhs) {
        let lhs = row.iter().zip(x.coords()).fold(0, |acc, (&a, &c)| f.add(acc, f.mul(a, c)));
        if lhs != b {
            return None;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&fc| {
            let mut v = vec![0u8; ncols];
            v[fc] = 1;
            for (row, &pc) in aug.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            Vector::from_codes_unchecked(f, v)
        })
        .collect();
    Some(AffineSolution { particular: x, kernel })
}

/// Incrementally maintained row echelon basis, for span membership tests.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldId,
    dim: usize,
    rows: Vec<(usize, Vec<u8>)>,
}

impl Echelon {
    pub fn new(field: FieldId, dim: usize) -> Self {
        Echelon { field, dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let f = self.field;
        let mut x = v.to_vec();
        for (pc, row) in &self.rows {
            let c = x[*pc];
            if c != 0 {
                for (a, &b) in x.iter_mut().zip(row) {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
        }
        x
    }

    pub fn contains(&self, v: &Vector) -> bool {
        assert_eq!(v.dim(), self.dim);
        self.reduce(v.coords()).iter().all(|&c| c == 0)
    }

    /// Adds `v`; returns `false` (and leaves the basis unchanged) if `v` was
    /// already in the span.
    pub fn insert(&mut self, v: &Vector) -> bool {
        assert_eq!(v.dim(), self.dim);
        let f = self.field;
        let mut x = self.reduce(v.coords());
        let Some(pc) = x.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = f.inv(x[pc]);
        for a in x.iter_mut() {
            *a = f.mul(*a, inv);
        }
        // keep earlier rows reduced at the new pivot so reduce() stays exact
        for (_, row) in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (a, &b) in row.iter_mut().zip(&x) {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
        }
        self.rows.push((pc, x));
        true
    }
}

/// Rank of a list of vectors.
pub fn rank_of(field: FieldId, dim: usize, vs: &[Vector]) -> usize {
    let mut e = Echelon::new(field, dim);
    vs.iter().filter(|v| e.insert(v)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse_f3() {
        let m = Matrix::from_rows(FieldId::F3, &[vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 2]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        // det = 1·(2-0) - 2·(0-1) + 0 = 4 = 1 mod 3
        assert_eq!(m.determinant(), 1);
        let singular = Matrix::from_rows(FieldId::F3, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(singular.determinant(), 0);
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn determinant_multiplicative_f4() {
        let a = Matrix::from_rows(FieldId::F4, &[vec![2, 1], vec![1, 3]]).unwrap();
        let b = Matrix::from_rows(FieldId::F4, &[vec![1, 2], vec![3, 1]]).unwrap();
        let f = FieldId::F4;
        assert_eq!(a.mul(&b).determinant(), f.mul(a.determinant(), b.determinant()));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = FieldId::F2;
        let rows = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let sol = solve_system(f, &rows, &[1, 0], 3).unwrap();
        assert_eq!(sol.kernel.len(), 1);
        for x in sol.iter() {
            assert_eq!(f.add(x.coords()[0], x.coords()[1]), 1);
            assert_eq!(f.add(x.coords()[1], x.coords()[2]), 0);
        }
        assert!(solve_system(f, &[vec![1, 0], vec![1, 0]], &[0, 1], 2).is_none());
    }

    #[test]
    fn echelon_membership() {
        let f = FieldId::F3;
        let mut e = Echelon::new(f, 3);
        let a = Vector::from_codes(f, vec![1, 2, 0]).unwrap();
        let b = Vector::from_codes(f, vec![0, 1, 1]).unwrap();
        assert!(e.insert(&a));
        assert!(e.insert(&b));
        assert!(e.contains(&a.add(&b.scale_code(2))));
        assert!(!e.insert(&a.sub(&b)));
        assert!(!e.contains(&Vector::unit(f, 3, 2)));
        assert_eq!(rank_of(f, 3, &[a.clone(), b.clone(), a.add(&b)]), 2);
    }

    #[test]
    fn order_cap() {
        let f = FieldId::F2;
        let m = Matrix::from_rows(f, &[vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.order(12).unwrap(), 3);
        assert_eq!(m.order(2), Err(Error::OrderCapExceeded { cap: 2 }));
    }
}
