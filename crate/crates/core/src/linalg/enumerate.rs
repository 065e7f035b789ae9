use num_bigint::BigUint;

use super::{LinalgError, Matrix, Subspace};
use crate::bounds::gaussian_coeff;
use crate::gf::FieldRef;

/// Enumeration refuses Grassmannians larger than this.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Every `ℓ`-dimensional subspace of `F_q^n`, each exactly once.
///
/// Walks pivot sets in lexicographic order; for each one the free entries
/// (right of a pivot, outside every pivot column) range over all of `F_q`.
pub fn enumerate_subspaces(field: &FieldRef, n: usize, ell: usize) -> Result<SubspaceIter, LinalgError> {
    if ell > n {
        return Err(LinalgError::DimensionMismatch { expected: n, found: ell });
    }
    let count = gaussian_coeff(n as u64, ell as u64, field.order() as u64);
    if count > BigUint::from(ENUMERATION_LIMIT) {
        return Err(LinalgError::ScaleGuard { limit: ENUMERATION_LIMIT });
    }
    let mut it = SubspaceIter { field: field.clone(), n, pivots: (0..ell).collect(), free: Vec::new(), idx: 0, total: 0, done: false };
    it.load_pivots();
    Ok(it)
}

pub struct SubspaceIter {
    field: FieldRef,
    n: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    idx: u64,
    total: u64,
    done: bool,
}

impl SubspaceIter {
    fn load_pivots(&mut self) {
        self.free.clear();
        for (r, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.n {
                if !self.pivots.contains(&c) {
                    self.free.push((r, c));
                }
            }
        }
        self.idx = 0;
        self.total = (self.field.order() as u64).pow(self.free.len() as u32);
    }

    fn next_pivots(&mut self) -> bool {
        let k = self.pivots.len();
        let n = self.n;
        let Some(i) = (0..k).rev().find(|&i| self.pivots[i] < n - k + i) else {
            return false;
        };
        self.pivots[i] += 1;
        for j in i + 1..k {
            self.pivots[j] = self.pivots[j - 1] + 1;
        }
        true
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        if self.idx == self.total {
            if !self.next_pivots() {
                self.done = true;
                return None;
            }
            self.load_pivots();
        }
        let q = self.field.order() as u64;
        let mut m = Matrix::zeros(&self.field, self.pivots.len(), self.n);
        for (r, &p) in self.pivots.iter().enumerate() {
            m.set(r, p, 1);
        }
        let mut rest = self.idx;
        for &(r, c) in &self.free {
            m.set(r, c, (rest % q) as u16);
            rest /= q;
        }
        self.idx += 1;
        if self.pivots.is_empty() {
            self.done = true;
        }
        Some(Subspace::from_matrix(&m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use std::collections::HashSet;

    #[test]
    fn counts_match_gaussian() {
        let f2 = Field::new(2, 1).unwrap();
        let all: Vec<_> = enumerate_subspaces(&f2, 4, 2).unwrap().collect();
        assert_eq!(all.len(), 35);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 35);
        assert!(all.iter().all(|s| s.dim() == 2));
        for q in [2u32, 3, 4, 5] {
            let f = Field::with_order(q).unwrap();
            assert_eq!(enumerate_subspaces(&f, 4, 3).unwrap().count() as u32, (q.pow(4) - 1) / (q - 1));
            assert_eq!(enumerate_subspaces(&f, 3, 3).unwrap().count(), 1);
            assert_eq!(enumerate_subspaces(&f, 3, 0).unwrap().count(), 1);
        }
    }

    #[test]
    fn guard_refuses_large_grassmannians() {
        let f = Field::new(2, 1).unwrap();
        assert!(matches!(enumerate_subspaces(&f, 12, 6), Err(LinalgError::ScaleGuard { .. })));
    }
}
