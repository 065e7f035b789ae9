use super::{LinalgError, Matrix, Subspace};
use crate::gf::FieldRef;

/// A vector over `F_q ∪ {?}`. Erased entries are kept as zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaskedVector {
    values: Vec<u16>,
    mask: Vec<bool>,
}

impl MaskedVector {
    pub fn new(mut values: Vec<u16>, mask: Vec<bool>) -> Result<Self, LinalgError> {
        if values.len() != mask.len() {
            return Err(LinalgError::DimensionMismatch { expected: values.len(), found: mask.len() });
        }
        for (v, &m) in values.iter_mut().zip(&mask) {
            if m {
                *v = 0;
            }
        }
        Ok(MaskedVector { values, mask })
    }

    pub fn unmasked(values: Vec<u16>) -> Self {
        let mask = vec![false; values.len()];
        MaskedVector { values, mask }
    }

    /// Masks the sorted or unsorted coordinate list `erased`.
    pub fn with_erasures(values: Vec<u16>, erased: &[usize]) -> Result<Self, LinalgError> {
        let mut mask = vec![false; values.len()];
        for &j in erased {
            if j >= mask.len() {
                return Err(LinalgError::CoordinateOutOfRange { index: j, len: mask.len() });
            }
            mask[j] = true;
        }
        Self::new(values, mask)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u16] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn erased(&self) -> Vec<usize> {
        self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect()
    }

    pub fn erasure_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Values on the surviving coordinates, in order.
    pub fn compact(&self) -> Vec<u16> {
        self.values.iter().zip(&self.mask).filter(|(_, &m)| !m).map(|(&v, _)| v).collect()
    }

    /// Number of differing unmasked coordinates; the masks must agree.
    pub fn hamming_distance(&self, other: &MaskedVector) -> Result<usize, LinalgError> {
        if self.len() != other.len() {
            return Err(LinalgError::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        if self.mask != other.mask {
            return Err(LinalgError::MaskMismatch);
        }
        Ok(self.values.iter().zip(&other.values).filter(|(a, b)| a != b).count())
    }
}

/// A subspace restricted away from an erased coordinate set `S`.
///
/// The space lives on the `n − |S|` surviving coordinates, listed in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaskedSubspace {
    len: usize,
    erased: Vec<usize>,
    space: Subspace,
}

impl MaskedSubspace {
    pub fn from_subspace(v: &Subspace) -> Self {
        MaskedSubspace { len: v.ambient_dim(), erased: Vec::new(), space: v.clone() }
    }

    /// Builds from compact rows on the survivors of `erased`.
    pub fn from_compact(field: &FieldRef, len: usize, erased: &[usize], rows: &[Vec<u16>]) -> Result<Self, LinalgError> {
        let mut e = erased.to_vec();
        e.sort_unstable();
        e.dedup();
        if let Some(&j) = e.iter().find(|&&j| j >= len) {
            return Err(LinalgError::CoordinateOutOfRange { index: j, len });
        }
        let space = Subspace::from_rows(field, len - e.len(), rows)?;
        Ok(MaskedSubspace { len, erased: e, space })
    }

    /// Span of masked vectors that all carry the same mask.
    pub fn from_vectors(field: &FieldRef, len: usize, vectors: &[MaskedVector]) -> Result<Self, LinalgError> {
        let erased = match vectors.first() {
            Some(v) => v.erased(),
            None => Vec::new(),
        };
        let mut rows = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != len {
                return Err(LinalgError::DimensionMismatch { expected: len, found: v.len() });
            }
            if v.erased() != erased {
                return Err(LinalgError::MaskMismatch);
            }
            rows.push(v.compact());
        }
        Self::from_compact(field, len, &erased, &rows)
    }

    /// Full length `n`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn erased(&self) -> &[usize] {
        &self.erased
    }

    pub fn survivors(&self) -> Vec<usize> {
        (0..self.len).filter(|j| self.erased.binary_search(j).is_err()).collect()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Erases full-length coordinate `j`.
    pub fn erase(&self, j: usize) -> Result<Self, LinalgError> {
        if j >= self.len {
            return Err(LinalgError::CoordinateOutOfRange { index: j, len: self.len });
        }
        let pos = match self.erased.binary_search(&j) {
            Ok(_) => return Err(LinalgError::AlreadyErased(j)),
            Err(p) => p,
        };
        let compact_idx = j - pos;
        let space = Subspace::from_matrix(&self.space.basis().remove_columns(&[compact_idx]));
        let mut erased = self.erased.clone();
        erased.insert(pos, j);
        Ok(MaskedSubspace { len: self.len, erased, space })
    }

    pub fn erase_all(self, js: &[usize]) -> Result<Self, LinalgError> {
        js.iter().try_fold(self, |acc, &j| acc.erase(j))
    }

    /// Canonical basis expanded to full length with the erased entries masked.
    pub fn basis_vectors(&self) -> Vec<MaskedVector> {
        let survivors = self.survivors();
        self.space
            .basis_rows()
            .into_iter()
            .map(|row| {
                let mut values = vec![0u16; self.len];
                for (&j, v) in survivors.iter().zip(row) {
                    values[j] = v;
                }
                MaskedVector::with_erasures(values, &self.erased).expect("indices in range")
            })
            .collect()
    }

    /// Full-length matrix whose erased columns are zero.
    pub fn expanded_basis(&self) -> Matrix {
        let rows: Vec<Vec<u16>> = self.basis_vectors().into_iter().map(|v| v.values().to_vec()).collect();
        Matrix::from_rows(self.space.field(), self.len, &rows).expect("consistent widths")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    #[test]
    fn hamming_examples() {
        let u = MaskedVector::unmasked(vec![1, 0, 2]);
        let v = MaskedVector::unmasked(vec![1, 1, 0]);
        assert_eq!(u.hamming_distance(&v).unwrap(), 2);
        assert_eq!(u.hamming_distance(&u).unwrap(), 0);
        let a = MaskedVector::new(vec![1, 2], vec![true, true]).unwrap();
        let b = MaskedVector::new(vec![0, 1], vec![true, true]).unwrap();
        assert_eq!(a.hamming_distance(&b).unwrap(), 0);
        let c = MaskedVector::new(vec![0, 1], vec![true, false]).unwrap();
        assert_eq!(a.hamming_distance(&c).unwrap_err(), LinalgError::MaskMismatch);
    }

    #[test]
    fn erasures_commute() {
        let f = Field::new(3, 1).unwrap();
        let v = Subspace::from_rows(&f, 5, &[vec![1, 2, 0, 1, 1], vec![0, 1, 1, 2, 0]]).unwrap();
        let s = [0usize, 3, 4];
        let mut results = Vec::new();
        for perm in [[0, 1, 2], [2, 1, 0], [1, 0, 2], [2, 0, 1]] {
            let order: Vec<usize> = perm.iter().map(|&i| s[i]).collect();
            results.push(v.project(&order).unwrap());
        }
        assert!(results.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(results[0].erased(), &[0, 3, 4]);
    }

    #[test]
    fn double_erasure_rejected() {
        let f = Field::new(2, 1).unwrap();
        let v = Subspace::full(&f, 3);
        let m = v.project(&[1]).unwrap();
        assert_eq!(m.erase(1).unwrap_err(), LinalgError::AlreadyErased(1));
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn basis_vectors_rebuild_space() {
        let f = Field::new(5, 1).unwrap();
        let v = Subspace::from_rows(&f, 4, &[vec![1, 2, 3, 4], vec![0, 1, 1, 1]]).unwrap();
        let m = v.project(&[2]).unwrap();
        let bv = m.basis_vectors();
        assert!(bv.iter().all(|x| x.mask() == [false, false, true, false]));
        let back = MaskedSubspace::from_vectors(&f, 4, &bv).unwrap();
        assert_eq!(back, m);
    }
}
