use std::fmt;
use std::hash::{Hash, Hasher};

use super::LinalgError;
use crate::gf::FieldRef;

/// Dense row-major matrix over a finite field.
#[derive(Clone)]
pub struct Matrix {
    field: FieldRef,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &FieldRef, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldRef, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row vectors; `cols` is needed when `rows` is empty.
    pub fn from_rows(field: &FieldRef, cols: usize, rows: &[Vec<u16>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, found: r.len() });
            }
            if let Some(&v) = r.iter().find(|&&v| v as u32 >= field.order()) {
                return Err(LinalgError::NotInField(v));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn from_flat(field: &FieldRef, rows: usize, cols: usize, data: Vec<u16>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if let Some(&v) = data.iter().find(|&&v| v as u32 >= field.order()) {
            return Err(LinalgError::NotInField(v));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u16>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u16> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn same_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(LinalgError::ContextMismatch)
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let f = &*self.field;
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, c)));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `v · M`.
    pub fn vec_mul(&self, v: &[u16]) -> Result<Vec<u16>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, found: v.len() });
        }
        let f = &*self.field;
        let mut out = vec![0u16; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(r, c)));
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols, data })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (i, &c) in cols.iter().enumerate() {
                out.set(r, i, self.get(r, c));
            }
        }
        out
    }

    /// Drops the listed columns, keeping the rest in order.
    pub fn remove_columns(&self, drop: &[usize]) -> Matrix {
        let keep: Vec<usize> = (0..self.cols).filter(|c| !drop.contains(c)).collect();
        self.select_columns(&keep)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    /// Reduced row echelon form. Pivots are listed by row.
    pub fn rref(&self) -> Rref {
        let f = &*self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = f.inv(m.get(row, col)).expect("nonzero pivot");
            if inv != 1 {
                for c in col..m.cols {
                    let v = m.get(row, c);
                    m.set(row, c, f.mul(v, inv));
                }
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { rank: row, matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Basis of the right null space `{x : M xᵀ = 0}`, one vector per row.
    pub fn kernel(&self) -> Matrix {
        let f = &*self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(&self.field, free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            out.set(i, fc, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(i, pc, f.neg(matrix.get(r, fc)));
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.field, n))?.rref();
        if aug.pivots.len() < n || aug.pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(aug.matrix.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Checks the three reduced-echelon conditions directly.
    pub fn is_rref(&self) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..self.rows {
            let lead = self.row(r).iter().position(|&v| v != 0);
            match lead {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || last_pivot.is_some_and(|p| c <= p) || self.get(r, c) != 1 {
                        return false;
                    }
                    if (0..self.rows).any(|o| o != r && self.get(o, c) != 0) {
                        return false;
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data && self.field.same_field(&other.field)
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} over GF({}) [", self.rows, self.cols, self.field.order())?;
        for r in 0..self.rows {
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}
