//! Finite fields GF(p^m) backed by log/antilog tables.
//!
//! Elements are stored as integers in `[0, q)`. The integer is the digit
//! expansion of the element's coordinates over the base field: for a field
//! built directly over GF(p) the digits are base-`p` polynomial coefficients,
//! and for an extension GF(Q^m) built over GF(Q) the digits are base-`Q`
//! coordinates in the polynomial basis `{1, β, …, β^(m-1)}`. Because every
//! base-field digit is itself a base-`p` expansion, addition is always
//! digit-wise modulo `p`, regardless of the tower height.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Shared handle to an immutable field.
pub type FieldRef = Arc<Field>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the table limit of 2^16")]
    TooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree {expected} with coefficients below {base_order}")]
    BadModulus { expected: usize, base_order: u32 },
    #[error("modulus is reducible over the base field")]
    Reducible,
    #[error("value {value} is not an element of GF({order})")]
    OutOfRange { value: u64, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    ContextMismatch,
}

/// Default moduli, lowest coefficient first, monic. For every entry `x` is a
/// primitive element; `default_table_is_primitive` in the tests checks that.
const DEFAULT_MODULI: &[(u32, &[u16])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, &[1, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (3, &[1, 2, 0, 0, 0, 1]),
    (3, &[2, 2, 1, 0, 2, 0, 1]),
    (5, &[3, 1]),
    (5, &[2, 4, 1]),
    (5, &[3, 3, 0, 1]),
    (5, &[2, 4, 4, 0, 1]),
    (7, &[4, 1]),
    (7, &[3, 6, 1]),
    (7, &[4, 0, 6, 1]),
    (11, &[9, 1]),
    (11, &[2, 7, 1]),
    (13, &[11, 1]),
    (13, &[2, 12, 1]),
];

/// A finite field with precomputed log/antilog tables.
///
/// Immutable after construction and shared through [`FieldRef`].
pub struct Field {
    p: u32,
    order: u32,
    degree: u32,
    base: Option<FieldRef>,
    modulus: Vec<u16>,
    primitive: u16,
    /// `exp[i] = g^i` for `i` in `0..2(q-1)`, doubled so products need no reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Field {
    /// GF(p^m) over the prime field with the default modulus.
    pub fn new(p: u32, m: u32) -> Result<FieldRef, FieldError> {
        check_prime(p)?;
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        check_order(p as u64, m)?;
        let modulus = default_modulus(p, None, m)?;
        Self::build(p, None, modulus)
    }

    /// GF(q) for a prime power `q`, default modulus.
    pub fn with_order(q: u32) -> Result<FieldRef, FieldError> {
        let (p, m) = factor_prime_power(q as u64).ok_or(FieldError::NotPrimePower(q as u64))?;
        Self::new(p, m)
    }

    /// GF(p^m) with a caller supplied modulus over GF(p), lowest coefficient first.
    pub fn with_modulus(p: u32, modulus: Vec<u16>) -> Result<FieldRef, FieldError> {
        check_prime(p)?;
        Self::build(p, None, modulus)
    }

    /// GF(Q^m) represented as polynomials over `base` = GF(Q).
    pub fn extension(base: &FieldRef, m: u32) -> Result<FieldRef, FieldError> {
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        check_order(base.order as u64, m)?;
        let modulus = default_modulus(base.p, Some(base), m)?;
        Self::build(base.p, Some(base.clone()), modulus)
    }

    /// GF(Q^m) over `base` with an explicit modulus whose coefficients are base elements.
    pub fn extension_with_modulus(base: &FieldRef, modulus: Vec<u16>) -> Result<FieldRef, FieldError> {
        Self::build(base.p, Some(base.clone()), modulus)
    }

    fn build(p: u32, base: Option<FieldRef>, modulus: Vec<u16>) -> Result<FieldRef, FieldError> {
        let base_order = base.as_ref().map_or(p, |b| b.order);
        if modulus.len() < 2 {
            return Err(FieldError::ZeroDegree);
        }
        let degree = (modulus.len() - 1) as u32;
        check_order(base_order as u64, degree)?;
        let ops = BaseOps { p, base: base.as_deref() };
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c as u32 >= base_order) {
            return Err(FieldError::BadModulus { expected: degree as usize, base_order });
        }
        if !ops.is_irreducible(&modulus) {
            return Err(FieldError::Reducible);
        }
        let order = base_order.pow(degree);
        let (primitive, exp) = find_primitive(&ops, &modulus, base_order, order)
            .ok_or(FieldError::Reducible)?;
        let mut log = vec![0u16; order as usize];
        for (i, &v) in exp.iter().enumerate().take(order as usize - 1) {
            log[v as usize] = i as u16;
        }
        Ok(Arc::new(Field { p, order, degree, base, modulus, primitive, exp, log }))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Number of elements `q`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree over the base field (the prime field when there is no explicit base).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn base(&self) -> Option<&FieldRef> {
        self.base.as_ref()
    }

    /// Order of the field the coordinates live in.
    pub fn base_order(&self) -> u32 {
        self.base.as_ref().map_or(self.p, |b| b.order)
    }

    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    pub fn primitive(&self) -> u16 {
        self.primitive
    }

    /// Degree over the prime field.
    pub fn prime_degree(&self) -> u32 {
        self.degree * self.base.as_ref().map_or(1, |b| b.prime_degree())
    }

    /// Structural identity: same characteristic, modulus and tower.
    pub fn same_field(&self, other: &Field) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        self.p == other.p
            && self.order == other.order
            && self.modulus == other.modulus
            && match (&self.base, &other.base) {
                (None, None) => true,
                (Some(a), Some(b)) => a.same_field(b),
                _ => false,
            }
    }

    pub fn contains(&self, value: u32) -> bool {
        value < self.order
    }

    pub fn element(&self, value: u32) -> Result<FieldElement<'_>, FieldError> {
        if value >= self.order {
            return Err(FieldError::OutOfRange { value: value as u64, order: self.order });
        }
        Ok(FieldElement { field: self, value: value as u16 })
    }

    pub fn zero(&self) -> FieldElement<'_> {
        FieldElement { field: self, value: 0 }
    }

    pub fn one(&self) -> FieldElement<'_> {
        FieldElement { field: self, value: 1 }
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.prime_degree() == 1 {
            return ((a as u32 + b as u32) % self.p) as u16;
        }
        let p = self.p;
        let (mut a, mut b) = (a as u32, b as u32);
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out as u16
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let mut a = a as u32;
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out as u16
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    pub fn inv(&self, a: u16) -> Option<u16> {
        if a == 0 {
            return None;
        }
        let n = self.order as usize - 1;
        Some(self.exp[(n - self.log[a as usize] as usize) % n])
    }

    pub fn div(&self, a: u16, b: u16) -> Result<u16, FieldError> {
        let inv = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.order as u64 - 1;
        let l = (self.log[a as usize] as u64 * (e % n)) % n;
        self.exp[l as usize]
    }

    /// Discrete logarithm to the base of [`Field::primitive`].
    pub fn log(&self, a: u16) -> Option<u16> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// `primitive^i`.
    pub fn exp(&self, i: u64) -> u16 {
        self.exp[(i % (self.order as u64 - 1)) as usize]
    }

    /// Coordinates over the base field in the polynomial basis `{1, β, …}`.
    pub fn coordinates(&self, a: u16) -> Vec<u16> {
        let q = self.base_order();
        let mut a = a as u32;
        (0..self.degree)
            .map(|_| {
                let d = a % q;
                a /= q;
                d as u16
            })
            .collect()
    }

    /// Inverse of [`Field::coordinates`]; missing trailing coordinates are zero.
    pub fn from_coordinates(&self, coords: &[u16]) -> Result<u16, FieldError> {
        let q = self.base_order();
        if coords.len() > self.degree as usize {
            return Err(FieldError::OutOfRange { value: coords.len() as u64, order: self.degree });
        }
        let mut v = 0u32;
        for &c in coords.iter().rev() {
            if c as u32 >= q {
                return Err(FieldError::OutOfRange { value: c as u64, order: q });
            }
            v = v * q + c as u32;
        }
        Ok(v as u16)
    }

    /// Iterator over all elements.
    pub fn elements(&self) -> impl Iterator<Item = u16> {
        (0..self.order).map(|v| v as u16)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            m: self.degree,
            modulus: self.modulus.clone(),
            primitive: self.primitive,
            base: self.base.as_ref().map(|b| Box::new(b.descriptor())),
        }
    }

    /// Rebuilds a field from its descriptor, validating the modulus.
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<FieldRef, FieldError> {
        let base = desc.base.as_ref().map(|b| Field::from_descriptor(b)).transpose()?;
        match base {
            Some(base) => Field::extension_with_modulus(&base, desc.modulus.clone()),
            None => Field::with_modulus(desc.p, desc.modulus.clone()),
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("order", &self.order)
            .field("modulus", &self.modulus)
            .field("base_order", &self.base_order())
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}

impl Eq for Field {}

/// Serializable field context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u16>,
    pub primitive: u16,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<FieldDescriptor>>,
}

/// An element bound to its field; mixed-field operations are rejected.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f Field,
    value: u16,
}

impl<'f> FieldElement<'f> {
    pub fn value(self) -> u16 {
        self.value
    }

    pub fn field(self) -> &'f Field {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: Self) -> Result<&'f Field, FieldError> {
        if self.field.same_field(other.field) {
            Ok(self.field)
        } else {
            Err(FieldError::ContextMismatch)
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, FieldError> {
        let f = self.check(rhs)?;
        Ok(FieldElement { field: f, value: f.add(self.value, rhs.value) })
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, FieldError> {
        let f = self.check(rhs)?;
        Ok(FieldElement { field: f, value: f.sub(self.value, rhs.value) })
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, FieldError> {
        let f = self.check(rhs)?;
        Ok(FieldElement { field: f, value: f.mul(self.value, rhs.value) })
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, FieldError> {
        let f = self.check(rhs)?;
        Ok(FieldElement { field: f, value: f.div(self.value, rhs.value)? })
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        let value = self.field.inv(self.value).ok_or(FieldError::DivisionByZero)?;
        Ok(FieldElement { field: self.field, value })
    }

    pub fn pow(self, e: u64) -> Self {
        FieldElement { field: self.field, value: self.field.pow(self.value, e) }
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field.same_field(other.field)
    }
}

impl Eq for FieldElement<'_> {}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈GF({})", self.value, self.field.order)
    }
}

impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! checked_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'f> $tr for FieldElement<'f> {
            type Output = FieldElement<'f>;
            /// Panics when the operands come from different fields.
            fn $method(self, rhs: Self) -> Self::Output {
                self.$checked(rhs).expect("field operation")
            }
        }
    };
}

checked_op!(Add, add, checked_add);
checked_op!(Sub, sub, checked_sub);
checked_op!(Mul, mul, checked_mul);
checked_op!(Div, div, checked_div);

impl<'f> Neg for FieldElement<'f> {
    type Output = FieldElement<'f>;
    fn neg(self) -> Self::Output {
        FieldElement { field: self.field, value: self.field.neg(self.value) }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^m`.
pub fn factor_prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

fn check_prime(p: u32) -> Result<(), FieldError> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(FieldError::NotPrime(p as u64))
    }
}

fn check_order(base_order: u64, m: u32) -> Result<(), FieldError> {
    let mut order = 1u64;
    for _ in 0..m {
        order = order.saturating_mul(base_order);
        if order > MAX_ORDER {
            return Err(FieldError::TooLarge(order));
        }
    }
    Ok(())
}

fn default_modulus(p: u32, base: Option<&FieldRef>, m: u32) -> Result<Vec<u16>, FieldError> {
    if base.is_none() {
        if let Some((_, c)) = DEFAULT_MODULI.iter().find(|(pp, c)| *pp == p && c.len() == m as usize + 1) {
            return Ok(c.to_vec());
        }
    }
    let ops = BaseOps { p, base: base.map(|b| &**b) };
    let base_order = base.map_or(p, |b| b.order);
    let order = base_order.pow(m);
    // Lexicographically smallest monic polynomial for which x is primitive. For
    // m = 1 over GF(p) this is x - g with g the least primitive root.
    let count = base_order.pow(m);
    for tail in 0..count {
        let mut poly = digits(tail, base_order, m as usize);
        poly.push(1);
        if poly[0] == 0 || !ops.is_irreducible(&poly) {
            continue;
        }
        let x = if m == 1 { ops.neg(poly[0]) } else { base_order as u16 };
        if generates(&ops, &poly, base_order, order, x).is_some() {
            return Ok(poly);
        }
    }
    Err(FieldError::Reducible)
}

fn digits(mut v: u32, radix: u32, len: usize) -> Vec<u16> {
    (0..len)
        .map(|_| {
            let d = v % radix;
            v /= radix;
            d as u16
        })
        .collect()
}

fn find_primitive(ops: &BaseOps<'_>, modulus: &[u16], base_order: u32, order: u32) -> Option<(u16, Vec<u16>)> {
    let degree = modulus.len() - 1;
    let mut candidates: Vec<u32> = Vec::new();
    if degree > 1 {
        candidates.push(base_order);
    } else {
        // x ≡ -c0 in a degree one extension.
        candidates.push(ops.neg(modulus[0]) as u32);
    }
    candidates.extend(1..order);
    candidates
        .into_iter()
        .filter(|&c| c != 0)
        .find_map(|c| generates(ops, modulus, base_order, order, c as u16).map(|exp| (c as u16, exp)))
}

/// Powers of `g` when it generates the multiplicative group, doubled for lookup.
fn generates(ops: &BaseOps<'_>, modulus: &[u16], base_order: u32, order: u32, g: u16) -> Option<Vec<u16>> {
    let degree = modulus.len() - 1;
    let n = order as usize - 1;
    let gp = digits(g as u32, base_order, degree);
    let mut exp = Vec::with_capacity(2 * n);
    let mut cur = digits(1, base_order, degree);
    for i in 0..n {
        let v = undigits(&cur, base_order);
        if i > 0 && v == 1 {
            return None;
        }
        exp.push(v);
        cur = ops.mulmod(&cur, &gp, modulus);
    }
    if undigits(&cur, base_order) != 1 {
        return None;
    }
    exp.extend_from_within(0..n);
    Some(exp)
}

fn undigits(d: &[u16], radix: u32) -> u16 {
    d.iter().rev().fold(0u32, |acc, &c| acc * radix + c as u32) as u16
}

/// Arithmetic in the coefficient field used while building tables.
struct BaseOps<'a> {
    p: u32,
    base: Option<&'a Field>,
}

impl BaseOps<'_> {
    fn add(&self, a: u16, b: u16) -> u16 {
        match self.base {
            Some(f) => f.add(a, b),
            None => ((a as u32 + b as u32) % self.p) as u16,
        }
    }

    fn neg(&self, a: u16) -> u16 {
        match self.base {
            Some(f) => f.neg(a),
            None => ((self.p - a as u32 % self.p) % self.p) as u16,
        }
    }

    fn mul(&self, a: u16, b: u16) -> u16 {
        match self.base {
            Some(f) => f.mul(a, b),
            None => ((a as u32 * b as u32) % self.p) as u16,
        }
    }

    fn inv(&self, a: u16) -> u16 {
        match self.base {
            Some(f) => f.inv(a).expect("nonzero"),
            None => {
                let p = self.p as u64;
                let mut r = 1u64;
                let mut b = a as u64 % p;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        r = r * b % p;
                    }
                    b = b * b % p;
                    e >>= 1;
                }
                r as u16
            }
        }
    }

    fn base_order(&self) -> u32 {
        self.base.map_or(self.p, |b| b.order)
    }

    /// Remainder of `a` modulo `m` (`m` need not be monic, its leading coefficient must be nonzero).
    fn rem(&self, a: &[u16], m: &[u16]) -> Vec<u16> {
        let mut r = a.to_vec();
        let dm = m.len() - 1;
        let lead_inv = self.inv(m[dm]);
        while r.len() > dm {
            let top = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            if top != 0 {
                let f = self.mul(top, lead_inv);
                for (i, &c) in m.iter().enumerate() {
                    r[shift + i] = self.add(r[shift + i], self.neg(self.mul(f, c)));
                }
            }
            r.pop();
        }
        r
    }

    fn mulmod(&self, a: &[u16], b: &[u16], m: &[u16]) -> Vec<u16> {
        let mut prod = vec![0u16; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = self.add(prod[i + j], self.mul(x, y));
            }
        }
        let mut r = self.rem(&prod, m);
        r.resize(m.len() - 1, 0);
        r
    }

    /// Trial division by every monic polynomial of degree at most deg/2.
    fn is_irreducible(&self, poly: &[u16]) -> bool {
        let deg = poly.len() - 1;
        if deg <= 1 {
            return true;
        }
        let q = self.base_order();
        for d in 1..=deg / 2 {
            for tail in 0..q.pow(d as u32) {
                let mut g = digits(tail, q, d);
                g.push(1);
                if self.rem(poly, &g).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }
}
