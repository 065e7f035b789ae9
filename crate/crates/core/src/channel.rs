//! Operator channel with dimension losses and gains, column-confined symbol
//! errors and symbol erasures.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::FieldRef;
use crate::linalg::{enumerate_subspaces, LinalgError, MaskedSubspace, MaskedVector, Matrix, Subspace};
use crate::subspace_code::random_full_rank;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChannelError {
    #[error("channel budget violated: {0}")]
    Budget(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `Θ` losses, `Ω` gains, `ρ` symbol errors and `μ` erasures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub theta: usize,
    pub omega: usize,
    pub rho: usize,
    pub mu: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mix: bool,
}

impl ChannelSpec {
    pub fn new(theta: usize, omega: usize, rho: usize, mu: usize) -> Self {
        ChannelSpec { theta, omega, rho, mu, seed: 0, mix: false }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mix(mut self, mix: bool) -> Self {
        self.mix = mix;
        self
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Everything the channel did, sufficient to replay it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelTruth {
    /// Rows span the surviving subspace; combinations of the transmitted RREF basis.
    pub loss_combination: Matrix,
    pub gain_vectors: Vec<Vec<u16>>,
    pub mixing: Option<Matrix>,
    pub error_columns: Vec<usize>,
    /// `error_patterns[i]` is added to column `error_columns[i]` of the basis.
    pub error_patterns: Vec<Vec<u16>>,
    pub erased: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelOutcome {
    pub received: MaskedSubspace,
    /// The received vectors in the order the channel produced them.
    pub received_basis: Vec<MaskedVector>,
    pub truth: ChannelTruth,
}

/// Per-trial stream derived from a master seed.
pub fn trial_rng(master: u64, cell: u32, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((cell as u64) << 32) | trial as u64);
    rng
}

fn random_word(field: &FieldRef, n: usize, rng: &mut dyn RngCore) -> Vec<u16> {
    let q = field.order();
    (0..n).map(|_| rng.random_range(0..q) as u16).collect()
}

fn random_nonzero(field: &FieldRef, n: usize, rng: &mut dyn RngCore) -> Vec<u16> {
    loop {
        let w = random_word(field, n, rng);
        if w.iter().any(|&x| x != 0) {
            return w;
        }
    }
}

/// Uniformly random `k`-dimensional subspace of `v`.
pub fn apply_dimension_loss(v: &Subspace, k: usize, rng: &mut dyn RngCore) -> Subspace {
    if k >= v.dim() {
        return v.clone();
    }
    let comb = random_full_rank(v.field(), k, v.dim(), rng);
    Subspace::from_matrix(&comb.mul(v.basis()).expect("shapes agree"))
}

/// Adds one uniformly random vector outside `v`.
pub fn apply_dimension_gain(v: &Subspace, rng: &mut dyn RngCore) -> Result<Subspace, ChannelError> {
    let w = random_outside(v, rng)?;
    Ok(v.sum(&Subspace::from_rows(v.field(), v.ambient_dim(), &[w])?)?)
}

fn random_outside(v: &Subspace, rng: &mut dyn RngCore) -> Result<Vec<u16>, ChannelError> {
    if v.dim() == v.ambient_dim() {
        return Err(ChannelError::Budget("no dimension gain possible on the full space".into()));
    }
    loop {
        let w = random_word(v.field(), v.ambient_dim(), rng);
        if !v.contains_vector(&w)? {
            return Ok(w);
        }
    }
}

/// Adds `pattern` to column `j` of the spanning rows.
pub fn add_column_pattern(rows: &mut [Vec<u16>], field: &FieldRef, j: usize, pattern: &[u16]) {
    for (r, &p) in rows.iter_mut().zip(pattern) {
        r[j] = field.add(r[j], p);
    }
}

/// Symbol error in coordinate `j` of `span(rows)`, realized as a random nonzero
/// pattern on column `j`. Returns the pattern, or `None` when `e_j` lies in the
/// span and no such error exists.
pub fn apply_symbol_error(
    field: &FieldRef,
    rows: &mut [Vec<u16>],
    j: usize,
    rng: &mut dyn RngCore,
) -> Result<Option<Vec<u16>>, ChannelError> {
    let n = rows.first().map_or(0, Vec::len);
    if j >= n {
        return Err(ChannelError::Budget(format!("coordinate {j} outside a space of length {n}")));
    }
    let span = Subspace::from_rows(field, n, rows)?;
    let mut unit = vec![0; n];
    unit[j] = 1;
    if span.contains_vector(&unit)? {
        return Ok(None);
    }
    let pattern = random_nonzero(field, rows.len(), rng);
    add_column_pattern(rows, field, j, &pattern);
    Ok(Some(pattern))
}

pub fn apply_symbol_erasure(v: &MaskedSubspace, j: usize) -> Result<MaskedSubspace, ChannelError> {
    Ok(v.erase(j)?)
}

/// Whether `after` is obtained from `before` by a symbol error in coordinate `j`.
pub fn satisfies_symbol_error(before: &Subspace, after: &Subspace, j: usize) -> Result<bool, LinalgError> {
    Ok(before != after && before.project(&[j])? == after.project(&[j])?)
}

/// Runs the channel with randomness from `spec.seed`.
pub fn transmit_seeded(v: &Subspace, spec: &ChannelSpec) -> Result<ChannelOutcome, ChannelError> {
    transmit(v, spec, &mut spec.rng())
}

/// Losses, then gains, then optional mixing, then symbol errors on distinct
/// columns, then erasures on further distinct columns.
pub fn transmit(v: &Subspace, spec: &ChannelSpec, rng: &mut dyn RngCore) -> Result<ChannelOutcome, ChannelError> {
    let field = v.field().clone();
    let n = v.ambient_dim();
    if spec.theta > v.dim() {
        return Err(ChannelError::Budget(format!("{} losses from a {}-dimensional space", spec.theta, v.dim())));
    }
    let kept = v.dim() - spec.theta;
    if kept + spec.omega > n {
        return Err(ChannelError::Budget(format!("{} gains exceed the ambient dimension {n}", spec.omega)));
    }
    if spec.rho + spec.mu > n {
        return Err(ChannelError::Budget(format!("{} errors and {} erasures on length {n}", spec.rho, spec.mu)));
    }

    let loss_combination = if spec.theta == 0 {
        Matrix::identity(&field, v.dim())
    } else {
        random_full_rank(&field, kept, v.dim(), rng)
    };
    let mut rows = loss_combination.mul(v.basis())?.row_vecs();
    let mut span = Subspace::from_rows(&field, n, &rows)?;
    let mut gain_vectors = Vec::with_capacity(spec.omega);
    for _ in 0..spec.omega {
        let w = random_outside(&span, rng)?;
        span = span.sum(&Subspace::from_rows(&field, n, std::slice::from_ref(&w))?)?;
        rows.push(w.clone());
        gain_vectors.push(w);
    }

    let mixing = if spec.mix && !rows.is_empty() {
        let m = random_full_rank(&field, rows.len(), rows.len(), rng);
        rows = m.mul(&Matrix::from_rows(&field, n, &rows)?)?.row_vecs();
        Some(m)
    } else {
        None
    };

    let mut error_columns = Vec::with_capacity(spec.rho);
    let mut error_patterns = Vec::with_capacity(spec.rho);
    for _ in 0..spec.rho {
        let current = Subspace::from_rows(&field, n, &rows)?;
        let mut eligible = Vec::new();
        for j in (0..n).filter(|j| !error_columns.contains(j)) {
            let mut unit = vec![0; n];
            unit[j] = 1;
            if !current.contains_vector(&unit)? {
                eligible.push(j);
            }
        }
        if eligible.is_empty() {
            return Err(ChannelError::Budget("no coordinate admits a further symbol error".into()));
        }
        let j = eligible[rng.random_range(0..eligible.len())];
        let pattern = random_nonzero(&field, rows.len(), rng);
        add_column_pattern(&mut rows, &field, j, &pattern);
        error_columns.push(j);
        error_patterns.push(pattern);
    }

    let free: Vec<usize> = (0..n).filter(|j| !error_columns.contains(j)).collect();
    let mut erased: Vec<usize> = sample(rng, free.len(), spec.mu).into_iter().map(|i| free[i]).collect();
    erased.sort_unstable();

    let truth = ChannelTruth { loss_combination, gain_vectors, mixing, error_columns, error_patterns, erased };
    finish(&field, n, rows, truth)
}

fn finish(field: &FieldRef, n: usize, rows: Vec<Vec<u16>>, truth: ChannelTruth) -> Result<ChannelOutcome, ChannelError> {
    let received_basis: Vec<MaskedVector> =
        rows.into_iter().map(|r| MaskedVector::with_erasures(r, &truth.erased)).collect::<Result<_, _>>()?;
    let compact: Vec<Vec<u16>> = received_basis.iter().map(MaskedVector::compact).collect();
    let received = MaskedSubspace::from_compact(field, n, &truth.erased, &compact)?;
    Ok(ChannelOutcome { received, received_basis, truth })
}

/// Reapplies a recorded channel realization to `v`.
pub fn replay(v: &Subspace, truth: &ChannelTruth) -> Result<ChannelOutcome, ChannelError> {
    let field = v.field().clone();
    let n = v.ambient_dim();
    let mut rows = truth.loss_combination.mul(v.basis())?.row_vecs();
    rows.extend(truth.gain_vectors.iter().cloned());
    if let Some(m) = &truth.mixing {
        rows = m.mul(&Matrix::from_rows(&field, n, &rows)?)?.row_vecs();
    }
    for (&j, p) in truth.error_columns.iter().zip(&truth.error_patterns) {
        add_column_pattern(&mut rows, &field, j, p);
    }
    finish(&field, n, rows, truth.clone())
}

/// Every subspace reachable from `v` by `theta` losses followed by `omega` gains.
pub fn enumerate_dimension_errors(v: &Subspace, theta: usize, omega: usize) -> Result<Vec<Subspace>, ChannelError> {
    let field = v.field().clone();
    let n = v.ambient_dim();
    if theta > v.dim() || v.dim() - theta + omega > n {
        return Err(ChannelError::Budget(format!("{theta} losses and {omega} gains from dimension {}", v.dim())));
    }
    let mut out = HashSet::new();
    for comb in enumerate_subspaces(&field, v.dim(), v.dim() - theta)? {
        let lost = v.basis().row_vecs();
        let lost = comb.image(&Matrix::from_rows(&field, n, &lost)?)?;
        let complement: Vec<usize> = (0..n).filter(|j| !lost.pivots().contains(j)).collect();
        for extra in enumerate_subspaces(&field, complement.len(), omega)? {
            let embed: Vec<Vec<u16>> = extra
                .basis_rows()
                .into_iter()
                .map(|r| {
                    let mut w = vec![0; n];
                    for (&j, x) in complement.iter().zip(r) {
                        w[j] = x;
                    }
                    w
                })
                .collect();
            out.insert(lost.sum(&Subspace::from_rows(&field, n, &embed)?)?);
        }
    }
    let mut out: Vec<Subspace> = out.into_iter().collect();
    out.sort_by_key(|s| s.basis_rows());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::gaussian_coeff;
    use crate::gf::Field;
    use num_bigint::BigUint;

    fn f2() -> FieldRef {
        Field::new(2, 1).unwrap()
    }

    #[test]
    fn loss_is_uniform_on_lines() {
        let f = f2();
        let v = Subspace::from_rows(&f, 3, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts = std::collections::HashMap::new();
        let draws = 30_000;
        for _ in 0..draws {
            let l = apply_dimension_loss(&v, 1, &mut rng);
            assert!(v.contains(&l).unwrap());
            *counts.entry(l).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 3);
        for c in counts.values() {
            let freq = *c as f64 / draws as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.05 / 3.0, "{freq}");
        }
        assert_eq!(apply_dimension_loss(&v, 2, &mut rng), v);
        assert!(apply_dimension_loss(&v, 0, &mut rng).is_zero());
    }

    #[test]
    fn gain_extends() {
        let f = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = Subspace::zero(&f, 4);
        let g = apply_dimension_gain(&z, &mut rng).unwrap();
        assert_eq!(g.dim(), 1);
        let v = Subspace::span_units(&f, 4, &[0, 2]);
        let g = apply_dimension_gain(&v, &mut rng).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.intersect(&v).unwrap(), v);
        assert!(apply_dimension_gain(&Subspace::full(&f, 4), &mut rng).is_err());
    }

    #[test]
    fn symbol_error_keeps_projection() {
        let f = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let v = Subspace::from_matrix(&random_full_rank(&f, 2, 5, &mut rng));
            let j = rng.random_range(0..5);
            let mut rows = v.basis_rows();
            let applied = apply_symbol_error(&f, &mut rows, j, &mut rng).unwrap();
            let after = Subspace::from_rows(&f, 5, &rows).unwrap();
            match applied {
                Some(_) => assert!(satisfies_symbol_error(&v, &after, j).unwrap()),
                None => assert_eq!(after, v),
            }
        }
    }

    #[test]
    fn symbol_error_can_raise_dimension() {
        let f = f2();
        let v = Subspace::from_rows(&f, 3, &[vec![1, 0, 0]]).unwrap();
        let after = Subspace::from_rows(&f, 3, &[vec![1, 0, 0], vec![1, 0, 1]]).unwrap();
        assert!(satisfies_symbol_error(&v, &after, 2).unwrap());
        assert_eq!(after.dim(), v.dim() + 1);
        let mut rows = vec![vec![1, 0, 0], vec![1, 0, 0]];
        add_column_pattern(&mut rows, &f, 2, &[0, 1]);
        assert_eq!(Subspace::from_rows(&f, 3, &rows).unwrap(), after);
    }

    #[test]
    fn identity_spec_is_identity() {
        let f = Field::new(5, 1).unwrap();
        let v = Subspace::from_rows(&f, 4, &[vec![1, 2, 3, 4], vec![0, 1, 1, 0]]).unwrap();
        let out = transmit_seeded(&v, &ChannelSpec::default()).unwrap();
        assert_eq!(out.received, MaskedSubspace::from_subspace(&v));
    }

    #[test]
    fn loss_and_gain_move_distance_two() {
        let f = Field::new(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for seed in 0..50 {
            let v = Subspace::from_matrix(&random_full_rank(&f, 3, 6, &mut rng));
            let out = transmit_seeded(&v, &ChannelSpec::new(1, 1, 0, 0).with_seed(seed)).unwrap();
            assert_eq!(out.received.space().distance(&v).unwrap(), 2);
        }
    }

    #[test]
    fn replay_reproduces() {
        let f = Field::new(7, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 0..1000u64 {
            let v = Subspace::from_matrix(&random_full_rank(&f, 3, 7, &mut rng));
            let spec = ChannelSpec {
                theta: rng.random_range(0..=2),
                omega: rng.random_range(0..=2),
                rho: rng.random_range(0..=2),
                mu: rng.random_range(0..=2),
                seed,
                mix: rng.random_bool(0.5),
            };
            let out = transmit_seeded(&v, &spec).unwrap();
            assert_eq!(replay(&v, &out.truth).unwrap(), out);
            assert_eq!(transmit_seeded(&v, &spec).unwrap(), out);
            let t = &out.truth;
            assert!(t.erased.iter().all(|j| !t.error_columns.contains(j)));
            assert_eq!(t.erased.len(), spec.mu);
        }
    }

    #[test]
    fn erasures_commute() {
        let f = Field::new(5, 1).unwrap();
        let v = MaskedSubspace::from_subspace(&Subspace::from_rows(&f, 5, &[vec![1, 2, 3, 4, 0], vec![0, 1, 1, 0, 2]]).unwrap());
        let a = apply_symbol_erasure(&apply_symbol_erasure(&v, 1).unwrap(), 3).unwrap();
        let b = apply_symbol_erasure(&apply_symbol_erasure(&v, 3).unwrap(), 1).unwrap();
        assert_eq!(a, b);
        assert!(apply_symbol_erasure(&a, 1).is_err());
    }

    #[test]
    fn dimension_error_enumeration_counts() {
        let f = Field::new(3, 1).unwrap();
        let v = Subspace::span_units(&f, 4, &[0, 1]);
        let losses = enumerate_dimension_errors(&v, 1, 0).unwrap();
        assert_eq!(BigUint::from(losses.len()), gaussian_coeff(2, 1, 3));
        let gains = enumerate_dimension_errors(&v, 0, 1).unwrap();
        assert_eq!(BigUint::from(gains.len()), gaussian_coeff(2, 1, 3));
        assert!(gains.iter().all(|g| g.contains(&v).unwrap() && g.dim() == 3));
        assert_eq!(enumerate_dimension_errors(&v, 0, 0).unwrap(), vec![v]);
    }
}
