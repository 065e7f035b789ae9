use std::fmt;
use std::hash::{Hash, Hasher};

use super::{LinalgError, MaskedSubspace, Matrix};
use crate::gf::FieldRef;

/// A subspace of `F_q^n` held by its reduced row echelon basis.
///
/// The basis is canonical, so two subspaces are equal exactly when their
/// bases agree entry by entry.
#[derive(Clone)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &FieldRef, n: usize) -> Self {
        Subspace { basis: Matrix::zeros(field, 0, n), pivots: Vec::new() }
    }

    pub fn full(field: &FieldRef, n: usize) -> Self {
        Subspace { basis: Matrix::identity(field, n), pivots: (0..n).collect() }
    }

    /// Row space of `m`.
    pub fn from_matrix(m: &Matrix) -> Self {
        let r = m.rref();
        let keep: Vec<usize> = (0..r.rank).collect();
        Subspace { basis: r.matrix.select_rows(&keep), pivots: r.pivots }
    }

    pub fn from_rows(field: &FieldRef, n: usize, rows: &[Vec<u16>]) -> Result<Self, LinalgError> {
        Ok(Self::from_matrix(&Matrix::from_rows(field, n, rows)?))
    }

    /// Span of unit vectors `e_i`, zero based.
    pub fn span_units(field: &FieldRef, n: usize, idx: &[usize]) -> Self {
        let mut m = Matrix::zeros(field, idx.len(), n);
        for (r, &i) in idx.iter().enumerate() {
            m.set(r, i, 1);
        }
        Self::from_matrix(&m)
    }

    pub fn field(&self) -> &FieldRef {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> Vec<Vec<u16>> {
        self.basis.row_vecs()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check(&self, other: &Subspace) -> Result<(), LinalgError> {
        if !self.field().same_field(other.field()) {
            return Err(LinalgError::ContextMismatch);
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(LinalgError::AmbientMismatch { left: self.ambient_dim(), right: other.ambient_dim() });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        Ok(Self::from_matrix(&self.basis.vstack(&other.basis)?))
    }

    /// Zassenhaus: reduce `[[U | U], [V | 0]]`; rows whose left half vanishes
    /// carry a basis of `U ∩ V` in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        let n = self.ambient_dim();
        let top = self.basis.hstack(&self.basis)?;
        let bottom = other.basis.hstack(&Matrix::zeros(self.field(), other.dim(), n))?;
        let r = top.vstack(&bottom)?.rref();
        let sum_dim = r.pivots.iter().take_while(|&&p| p < n).count();
        let right: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (sum_dim..r.rank).collect();
        let inter = Self::from_matrix(&r.matrix.select_rows(&rows).select_columns(&right));
        if inter.dim() + sum_dim != self.dim() + other.dim() {
            return Err(LinalgError::Internal("intersection dimension identity violated"));
        }
        Ok(inter)
    }

    /// Grassmann distance `dim U + dim V − 2 dim(U ∩ V)`.
    pub fn distance(&self, other: &Subspace) -> Result<usize, LinalgError> {
        let s = self.sum(other)?;
        Ok(2 * s.dim() - self.dim() - other.dim())
    }

    pub fn contains_vector(&self, v: &[u16]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim() {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim(), found: v.len() });
        }
        Ok(self.reduce(v).iter().all(|&x| x == 0))
    }

    /// Residue of `v` after clearing every pivot column of the basis.
    pub fn reduce(&self, v: &[u16]) -> Vec<u16> {
        let f = &**self.field();
        let mut w = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = w[p];
            if c == 0 {
                continue;
            }
            for (j, x) in w.iter_mut().enumerate() {
                *x = f.sub(*x, f.mul(c, self.basis.get(r, j)));
            }
        }
        w
    }

    /// Coefficients of `v` in the canonical basis, when `v` lies in the space.
    pub fn coordinates_of(&self, v: &[u16]) -> Result<Option<Vec<u16>>, LinalgError> {
        if !self.contains_vector(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p]).collect()))
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check(other)?;
        for r in 0..other.dim() {
            if !self.contains_vector(other.basis.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction away from the coordinates in `erase`.
    pub fn project(&self, erase: &[usize]) -> Result<MaskedSubspace, LinalgError> {
        MaskedSubspace::from_subspace(self).erase_all(erase)
    }

    /// Deletes coordinate `j` (zero based), giving a subspace of `F_q^{n-1}`.
    pub fn puncture(&self, j: usize) -> Result<Subspace, LinalgError> {
        if j >= self.ambient_dim() {
            return Err(LinalgError::CoordinateOutOfRange { index: j, len: self.ambient_dim() });
        }
        Ok(Self::from_matrix(&self.basis.remove_columns(&[j])))
    }

    /// `{v · M : v ∈ self}`.
    pub fn image(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        Ok(Self::from_matrix(&self.basis.mul(m)?))
    }

    /// Every vector of the space; guarded at 10^7 elements.
    pub fn vectors(&self) -> Result<Vec<Vec<u16>>, LinalgError> {
        let q = self.field().order() as u64;
        let count = q.checked_pow(self.dim() as u32).filter(|&c| c <= 10_000_000);
        let count = count.ok_or(LinalgError::ScaleGuard { limit: 10_000_000 })?;
        let f = &**self.field();
        let mut out = Vec::with_capacity(count as usize);
        for idx in 0..count {
            let mut v = vec![0u16; self.ambient_dim()];
            let mut rest = idx;
            for r in 0..self.dim() {
                let c = (rest % q) as u16;
                rest /= q;
                if c == 0 {
                    continue;
                }
                for (j, x) in v.iter_mut().enumerate() {
                    *x = f.add(*x, f.mul(c, self.basis.get(r, j)));
                }
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// Applies the single-coordinate deletion to each member and removes duplicates.
pub fn puncture_codebook(code: &[Subspace], j: usize) -> Result<Vec<Subspace>, LinalgError> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for v in code {
        let p = v.puncture(j)?;
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, dim={}, {:?})", self.ambient_dim(), self.dim(), self.basis_rows())
    }
}
