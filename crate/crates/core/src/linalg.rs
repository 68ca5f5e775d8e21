//! Dense matrices over the session field and a sparse homogeneous solver.

use crate::scalars::{Field, Scalar, ScalarError};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for k in 0..n {
            m.set(k, k, field.one());
        }
        m
    }

    pub fn scalar(field: &Field, n: usize, c: &Scalar) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for k in 0..n {
            m.set(k, k, c.clone());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|x| x * c)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn conj(&self) -> Matrix {
        self.map(|x| x.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        self.transpose().conj()
    }

    /// Row echelon reduction in place; returns pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let piv = if self.field.is_exact() {
                (r..self.rows).find(|&k| !self.get(k, c).is_zero())
            } else {
                (r..self.rows)
                    .filter(|&k| !self.get(k, c).is_zero())
                    .max_by(|&a, &b| self.get(a, c).magnitude().total_cmp(&self.get(b, c).magnitude()))
            };
            let Some(p) = piv else { continue };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for k in 0..self.rows {
                if k == r {
                    continue;
                }
                let f = self.get(k, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(k, j) - &(&f * self.get(r, j));
                    self.set(k, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// Basis of the right kernel {v : Mv = 0}.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.echelon();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, free);
            }
            out.push(v);
        }
        out
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if !self.field.is_exact() {
            return self.det_approx();
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&k| !m.get(k, c).is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let d = m.get(c, c).clone();
            det = &det * &d;
            let inv = d.inv().expect("nonzero pivot");
            for k in c + 1..n {
                if m.get(k, c).is_zero() {
                    continue;
                }
                let f = m.get(k, c) * &inv;
                for j in c..n {
                    let v = m.get(k, j) - &(&f * m.get(c, j));
                    m.set(k, j, v);
                }
            }
        }
        det
    }

    /// Partial-pivoting determinant in plain complex floats, without tolerance cutoffs.
    fn det_approx(&self) -> Scalar {
        let n = self.rows;
        let mut a: Vec<Vec<num_complex::Complex64>> =
            (0..n).map(|r| self.row(r).iter().map(|x| x.to_complex()).collect()).collect();
        let mut det = num_complex::Complex64::new(1.0, 0.0);
        for c in 0..n {
            let p = (c..n).max_by(|&x, &y| a[x][c].norm().total_cmp(&a[y][c].norm())).unwrap();
            if a[p][c].norm() == 0.0 {
                det = num_complex::Complex64::new(0.0, 0.0);
                break;
            }
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c];
            for k in c + 1..n {
                let f = a[k][c] / a[c][c];
                for j in c..n {
                    let v = a[c][j];
                    a[k][j] -= f * v;
                }
            }
        }
        self.field.complex(det.re, det.im).expect("approximate field")
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix, ScalarError> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, self.field.one());
        }
        let pivots = aug.echelon();
        if pivots.len() < n || pivots.iter().enumerate().any(|(k, &p)| p != k) {
            return Err(ScalarError::DivisionByZero);
        }
        let mut out = Matrix::zeros(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                acc
            })
            .collect()
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Matrix) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Homogeneous linear system with sparse rows, reduced incrementally to RREF.
pub struct SparseSystem {
    field: Field,
    ncols: usize,
    /// pivot column -> normalized row (pivot entry 1, zero in other pivot columns)
    pivots: BTreeMap<usize, BTreeMap<usize, Scalar>>,
}

impl SparseSystem {
    pub fn new(field: &Field, ncols: usize) -> SparseSystem {
        SparseSystem { field: field.clone(), ncols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn add_row(&mut self, entries: impl IntoIterator<Item = (usize, Scalar)>) {
        let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.ncols);
            let s = match row.remove(&c) {
                Some(old) => old + v,
                None => v,
            };
            if !s.is_zero() {
                row.insert(c, s);
            }
        }
        // Eliminate existing pivot columns; pivot rows contain no other pivot columns.
        let hits: Vec<usize> = row.keys().filter(|c| self.pivots.contains_key(c)).cloned().collect();
        for c in hits {
            let Some(f) = row.get(&c).cloned() else { continue };
            let prow = &self.pivots[&c];
            for (j, v) in prow {
                let s = match row.remove(j) {
                    Some(old) => old - &(&f * v),
                    None => -(&f * v),
                };
                if !s.is_zero() {
                    row.insert(*j, s);
                }
            }
        }
        row.retain(|_, v| !v.is_zero());
        let Some((&pc, pv)) = row.iter().next() else { return };
        let inv = pv.inv().expect("nonzero pivot");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        // Clear the new pivot column from existing rows.
        for prow in self.pivots.values_mut() {
            if let Some(f) = prow.get(&pc).cloned() {
                for (j, v) in &row {
                    let s = match prow.remove(j) {
                        Some(old) => old - &(&f * v),
                        None => -(&f * v),
                    };
                    if !s.is_zero() {
                        prow.insert(*j, s);
                    }
                }
            }
        }
        self.pivots.insert(pc, row);
    }

    /// Basis of the solution space.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|c| !self.pivots.contains_key(c)) {
            let mut v = vec![self.field.zero(); self.ncols];
            v[free] = self.field.one();
            for (p, row) in &self.pivots {
                if let Some(x) = row.get(&free) {
                    v[*p] = -x;
                }
            }
            out.push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(k: &Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(k, rows.iter().map(|r| r.iter().map(|&x| k.int(x)).collect()).collect())
    }

    #[test]
    fn det_and_inverse() {
        let k = Field::cyclotomic(1);
        let a = m(&k, &[&[2, 1], &[7, 4]]);
        assert_eq!(a.det(), k.one());
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(&k, 2));
        let s = m(&k, &[&[1, 2], &[2, 4]]);
        assert!(s.det().is_zero());
        assert!(s.inverse().is_err());
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn dense_and_sparse_kernels_agree() {
        let k = Field::cyclotomic(4);
        let a = m(&k, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let dense = a.nullspace();
        assert_eq!(dense.len(), 2);
        let mut sp = SparseSystem::new(&k, 4);
        for r in 0..3 {
            sp.add_row(a.row(r).iter().cloned().enumerate());
        }
        let sparse = sp.nullspace();
        assert_eq!(sparse.len(), 2);
        for v in dense.iter().chain(&sparse) {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }
}
