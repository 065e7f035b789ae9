//! Univariate and linearized polynomials over a [`Field`].

use std::fmt;

use thiserror::Error;

use crate::gf::{Field, FieldElement, FieldError, FieldRef};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("interpolation points repeat x = {0}")]
    DuplicateX(u16),
    #[error("division by the zero polynomial")]
    ZeroDivisor,
}

/// Polynomial with coefficients lowest degree first and no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldRef,
    coeffs: Vec<u16>,
}

impl Poly {
    pub fn new(field: &FieldRef, mut coeffs: Vec<u16>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FieldRef) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &FieldRef, c: u16) -> Self {
        Self::new(field, vec![c])
    }

    /// `c · x^k`.
    pub fn monomial(field: &FieldRef, c: u16, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u16 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u16) -> u16 {
        let f = &*self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn eval_at<'f>(&'f self, x: FieldElement<'f>) -> Result<FieldElement<'f>, PolyError> {
        if !x.field().same_field(&self.field) {
            return Err(FieldError::ContextMismatch.into());
        }
        Ok(self.field.element(self.eval(x.value()) as u32)?)
    }

    fn check(&self, other: &Poly) -> Result<(), PolyError> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch.into())
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let f = &*self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Poly::new(&self.field, c))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, s: u16) -> Poly {
        let f = &*self.field;
        Poly::new(&self.field, self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let f = &*self.field;
        let mut out = vec![0u16; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Poly::new(&self.field, out))
    }

    /// Euclidean division: `self = q · divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.check(divisor)?;
        let f = &*self.field;
        let dd = divisor.degree().ok_or(PolyError::ZeroDivisor)?;
        let lead_inv = f.inv(divisor.coeffs[dd]).expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let mut quot = vec![0u16; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = rem[i + dd];
            if top == 0 {
                continue;
            }
            let c = f.mul(top, lead_inv);
            quot[i] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(&self.field, quot), Poly::new(&self.field, rem)))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let f = &*self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| {
                // i·c is c added to itself i mod p times
                let times = (i as u32 % f.characteristic()) as u16;
                f.mul(c, times)
            })
            .collect();
        Poly::new(&self.field, c)
    }

    /// Product of `(x - r)` over the given roots.
    pub fn from_roots(field: &FieldRef, roots: &[u16]) -> Poly {
        let mut p = Poly::constant(field, 1);
        for &r in roots {
            let lin = Poly::new(field, vec![field.neg(r), 1]);
            p = p.mul(&lin).expect("same field");
        }
        p
    }

    /// The unique polynomial of degree below `points.len()` through the points.
    pub fn lagrange_interpolate(field: &FieldRef, points: &[(u16, u16)]) -> Result<Poly, PolyError> {
        let f = &**field;
        for (i, &(x, _)) in points.iter().enumerate() {
            if x as u32 >= f.order() {
                return Err(FieldError::OutOfRange { value: x as u64, order: f.order() }.into());
            }
            if points[..i].iter().any(|&(y, _)| y == x) {
                return Err(PolyError::DuplicateX(x));
            }
        }
        let xs: Vec<u16> = points.iter().map(|p| p.0).collect();
        let full = Poly::from_roots(field, &xs);
        let mut acc = Poly::zero(field);
        for &(xi, yi) in points {
            if yi == 0 {
                continue;
            }
            let (basis, _) = full.div_rem(&Poly::new(field, vec![f.neg(xi), 1]))?;
            let denom = basis.eval(xi);
            let scale = f.div(yi, denom)?;
            acc = acc.add(&basis.scale(scale))?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}/GF({})", self.coeffs, self.field.order())
    }
}

/// `f(x) = Σ c_i x^{Q^i}` over an extension field, where `Q` is the base-field order.
#[derive(Clone, PartialEq, Eq)]
pub struct Linearized {
    field: FieldRef,
    coeffs: Vec<u16>,
}

/// Evaluates `Σ c_i x^{base_q^i}` in `field`.
pub fn linearized_eval(field: &Field, coeffs: &[u16], x: u16, base_q: u32) -> u16 {
    let mut acc = 0;
    let mut xp = x;
    for &c in coeffs {
        acc = field.add(acc, field.mul(c, xp));
        xp = field.pow(xp, base_q as u64);
    }
    acc
}

impl Linearized {
    pub fn new(field: &FieldRef, mut coeffs: Vec<u16>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Linearized { field: field.clone(), coeffs }
    }

    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Q-degree: the largest `i` with `c_i ≠ 0`.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn q(&self) -> u64 {
        self.field.base_order() as u64
    }

    pub fn eval(&self, x: u16) -> u16 {
        linearized_eval(&self.field, &self.coeffs, x, self.q() as u32)
    }

    /// `x ↦ x^{Q^e}` with `e` taken modulo the extension degree.
    fn frobenius(&self, x: u16, e: i64) -> u16 {
        let m = self.field.degree() as i64;
        let e = e.rem_euclid(m) as u32;
        self.field.pow(x, self.q().pow(e))
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Linearized) -> Linearized {
        let f = &*self.field;
        if self.is_zero() || other.is_zero() {
            return Linearized::new(&self.field, vec![]);
        }
        let mut out = vec![0u16; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let t = f.mul(a, self.frobenius(b, i as i64));
                out[i + j] = f.add(out[i + j], t);
            }
        }
        Linearized::new(&self.field, out)
    }

    pub fn add(&self, other: &Linearized) -> Linearized {
        let f = &*self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u16], i: usize| v.get(i).copied().unwrap_or(0);
        Linearized::new(&self.field, (0..n).map(|i| f.add(get(&self.coeffs, i), get(&other.coeffs, i))).collect())
    }

    pub fn neg(&self) -> Linearized {
        let f = &*self.field;
        Linearized::new(&self.field, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    /// Finds `(f, r)` with `self = divisor ∘ f + r` and `qdeg r < qdeg divisor`.
    pub fn left_divide(&self, divisor: &Linearized) -> Result<(Linearized, Linearized), PolyError> {
        let f = &*self.field;
        let db = divisor.q_degree().ok_or(PolyError::ZeroDivisor)?;
        let lead = divisor.coeffs[db];
        let mut rem = self.clone();
        let mut quot = vec![0u16; self.coeffs.len().saturating_sub(db)];
        while let Some(dr) = rem.q_degree() {
            if dr < db {
                break;
            }
            // divisor ∘ (c x^{Q^s}) leads with lead · c^{Q^db} x^{Q^{db+s}}
            let s = dr - db;
            let ratio = f.div(rem.coeffs[dr], lead)?;
            let c = self.frobenius(ratio, -(db as i64));
            quot[s] = f.add(quot[s], c);
            let mut mono = vec![0u16; s + 1];
            mono[s] = c;
            let sub = divisor.compose(&Linearized::new(&self.field, mono));
            rem = rem.add(&sub.neg());
            debug_assert!(rem.q_degree().is_none_or(|d| d < dr));
        }
        Ok((Linearized::new(&self.field, quot), rem))
    }
}

impl fmt::Debug for Linearized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Linearized{:?}", self.coeffs)
    }
}
