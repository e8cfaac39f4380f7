//! Concrete rings and exact element arithmetic.
//!
//! A [`Ring`] describes one of the supported unital rings: integers modulo
//! `n`, a prime field, `k×k` matrices over another supported ring (nestable),
//! or the rationals. An [`Element`] pairs a ring with a canonical payload, so
//! structural equality is ring equality.
//!
//! Finite rings are enumerated in lexicographic order of their canonical
//! payload: residues ascend from `0`, and matrices are ordered by their
//! row-major entry list, the first entry being the most significant digit.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;

const PARALLEL_SCAN_THRESHOLD: u64 = 4096;

/// Largest cardinality (or tuple-space size) that exhaustive operations accept
/// unless a ring is given a different bound.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingKind {
    ModularInt(u64),
    PrimeField(u64),
    Matrix { base: Ring, dim: usize },
    Rationals,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cardinality {
    Finite(BigUint),
    Infinite,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => f.write_str("infinite"),
        }
    }
}

struct Descriptor {
    kind: RingKind,
    cardinality: Cardinality,
    // cardinality, when finite and representable
    size: Option<u64>,
    enumeration_bound: u64,
    field: bool,
}

/// Handle to an immutable ring descriptor. Cheap to clone.
///
/// Two handles compare equal when they describe the same ring; the
/// enumeration bound is a capability setting and does not take part.
#[derive(Clone)]
pub struct Ring(Arc<Descriptor>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Ring {}

impl Hash for Ring {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state);
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            RingKind::ModularInt(n) => write!(f, "Z:{n}"),
            RingKind::PrimeField(p) => write!(f, "GF:{p}"),
            RingKind::Matrix { base, dim } => write!(f, "M:{dim}:{base}"),
            RingKind::Rationals => f.write_str("Q"),
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::literal::parse_ring(s)
    }
}

impl Ring {
    fn build(kind: RingKind, enumeration_bound: u64) -> Ring {
        let cardinality = match &kind {
            RingKind::ModularInt(n) | RingKind::PrimeField(n) => {
                Cardinality::Finite(BigUint::from(*n))
            }
            RingKind::Matrix { base, dim } => match base.cardinality() {
                Cardinality::Finite(n) => Cardinality::Finite(n.pow((dim * dim) as u32)),
                Cardinality::Infinite => Cardinality::Infinite,
            },
            RingKind::Rationals => Cardinality::Infinite,
        };
        let size = match &cardinality {
            Cardinality::Finite(n) => n.to_u64(),
            Cardinality::Infinite => None,
        };
        let field = match &kind {
            RingKind::ModularInt(n) => is_prime(*n),
            RingKind::PrimeField(_) | RingKind::Rationals => true,
            RingKind::Matrix { .. } => false,
        };
        Ring(Arc::new(Descriptor {
            kind,
            cardinality,
            size,
            enumeration_bound,
            field,
        }))
    }

    /// Integers modulo `modulus`.
    pub fn modular(modulus: u64) -> Result<Ring> {
        if modulus < 2 {
            return Err(Error::InvalidRing(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        Ok(Ring::build(
            RingKind::ModularInt(modulus),
            DEFAULT_ENUMERATION_BOUND,
        ))
    }

    /// The prime field of order `p`; `p` must pass a deterministic primality test.
    pub fn prime_field(p: u64) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(Ring::build(
            RingKind::PrimeField(p),
            DEFAULT_ENUMERATION_BOUND,
        ))
    }

    /// `dim×dim` matrices over `base`.
    pub fn matrix(base: &Ring, dim: usize) -> Result<Ring> {
        if dim == 0 {
            return Err(Error::InvalidRing(
                "matrix dimension must be at least 1".into(),
            ));
        }
        Ok(Ring::build(
            RingKind::Matrix {
                base: base.clone(),
                dim,
            },
            DEFAULT_ENUMERATION_BOUND,
        ))
    }

    pub fn rationals() -> Ring {
        Ring::build(RingKind::Rationals, DEFAULT_ENUMERATION_BOUND)
    }

    /// The same ring with a different cap on exhaustive operations.
    pub fn with_enumeration_bound(&self, bound: u64) -> Ring {
        Ring::build(self.0.kind.clone(), bound)
    }

    pub fn kind(&self) -> &RingKind {
        &self.0.kind
    }

    pub fn cardinality(&self) -> &Cardinality {
        &self.0.cardinality
    }

    pub fn enumeration_bound(&self) -> u64 {
        self.0.enumeration_bound
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.0.cardinality, Cardinality::Finite(_))
    }

    /// True for prime fields, the rationals and `Z:p` with `p` prime.
    pub fn is_field(&self) -> bool {
        self.0.field
    }

    /// Base ring and dimension of a matrix ring.
    pub fn matrix_parts(&self) -> Option<(&Ring, usize)> {
        match &self.0.kind {
            RingKind::Matrix { base, dim } => Some((base, *dim)),
            _ => None,
        }
    }

    /// The innermost non-matrix ring.
    pub fn scalar_ring(&self) -> &Ring {
        match &self.0.kind {
            RingKind::Matrix { base, .. } => base.scalar_ring(),
            _ => self,
        }
    }

    /// Side length of the scalar matrix obtained by flattening all nesting
    /// levels; 1 for scalar rings.
    pub fn flat_dim(&self) -> usize {
        match &self.0.kind {
            RingKind::Matrix { base, dim } => dim * base.flat_dim(),
            _ => 1,
        }
    }

    /// Whether the ring is a field or a (nested) matrix ring over one, so
    /// exact elimination applies.
    pub fn has_field_scalars(&self) -> bool {
        self.scalar_ring().is_field()
    }

    /// Number of elements, checked against the enumeration bound.
    pub fn size(&self) -> Result<u64> {
        match (&self.0.cardinality, self.0.size) {
            (Cardinality::Infinite, _) => Err(Error::Infinite {
                ring: self.to_string(),
            }),
            (Cardinality::Finite(n), size) => match size {
                Some(s) if s <= self.0.enumeration_bound => Ok(s),
                _ => Err(Error::BoundExceeded {
                    what: format!("ring {self}"),
                    size: n.to_string(),
                    bound: self.0.enumeration_bound,
                }),
            },
        }
    }

    /// Number of elements ignoring the enumeration bound, when the ring is
    /// finite and the count fits in 64 bits. Enough for sampling.
    pub fn finite_size(&self) -> Option<u64> {
        self.0.size
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> Result<Elements> {
        let end = self.size()?;
        Ok(Elements {
            ring: self.clone(),
            next: 0,
            end,
        })
    }

    /// The element at `index` in enumeration order.
    ///
    /// # Panics
    ///
    /// If the ring is infinite or `index` is out of range.
    pub fn element_at(&self, index: u64) -> Element {
        let size = self
            .0
            .size
            .expect("element_at on a ring without finite size");
        assert!(index < size, "index {index} out of range for {self}");
        Element {
            ring: self.clone(),
            value: self.value_at(index),
        }
    }

    fn value_at(&self, mut index: u64) -> Value {
        match &self.0.kind {
            RingKind::ModularInt(_) | RingKind::PrimeField(_) => Value::Residue(index),
            RingKind::Matrix { base, dim } => {
                let radix = base.0.size.expect("finite base");
                let count = dim * dim;
                let mut entries = vec![Value::Residue(0); count];
                for slot in entries.iter_mut().rev() {
                    *slot = base.value_at(index % radix);
                    index /= radix;
                }
                Value::Matrix(entries.into_boxed_slice())
            }
            RingKind::Rationals => unreachable!("rationals are not enumerable"),
        }
    }

    /// Position of `element` in enumeration order.
    ///
    /// # Panics
    ///
    /// If the ring is infinite or the element belongs to another ring.
    pub fn index_of(&self, element: &Element) -> u64 {
        assert!(
            element.ring == *self,
            "element of {} indexed in {self}",
            element.ring
        );
        self.index_of_value(&element.value)
    }

    fn index_of_value(&self, value: &Value) -> u64 {
        match (&self.0.kind, value) {
            (RingKind::ModularInt(_) | RingKind::PrimeField(_), Value::Residue(r)) => *r,
            (RingKind::Matrix { base, .. }, Value::Matrix(entries)) => {
                let radix = base.0.size.expect("finite base");
                entries
                    .iter()
                    .fold(0, |acc, v| acc * radix + base.index_of_value(v))
            }
            _ => panic!("{self} has no enumeration index"),
        }
    }

    /// First element in enumeration order satisfying `pred`. Large rings are
    /// scanned in parallel; the result is the same as a sequential scan.
    pub fn find_first<F>(&self, pred: F) -> Result<Option<Element>>
    where
        F: Fn(&Element) -> bool + Sync,
    {
        let size = self.size()?;
        if size < PARALLEL_SCAN_THRESHOLD {
            return Ok((0..size).map(|i| self.element_at(i)).find(|e| pred(e)));
        }
        Ok((0..size)
            .into_par_iter()
            .map(|i| self.element_at(i))
            .find_first(|e| pred(e)))
    }

    /// Every element satisfying `pred`, in enumeration order.
    pub fn filter_all<F>(&self, pred: F) -> Result<Vec<Element>>
    where
        F: Fn(&Element) -> bool + Sync,
    {
        let size = self.size()?;
        if size < PARALLEL_SCAN_THRESHOLD {
            return Ok((0..size)
                .map(|i| self.element_at(i))
                .filter(|e| pred(e))
                .collect());
        }
        Ok((0..size)
            .into_par_iter()
            .map(|i| self.element_at(i))
            .filter(|e| pred(e))
            .collect())
    }

    pub fn zero(&self) -> Element {
        Element {
            ring: self.clone(),
            value: self.zero_value(),
        }
    }

    pub fn one(&self) -> Element {
        Element {
            ring: self.clone(),
            value: self.one_value(),
        }
    }

    /// `n·1`.
    pub fn from_i64(&self, n: i64) -> Element {
        Element {
            ring: self.clone(),
            value: self.int_value(&BigInt::from(n)),
        }
    }

    /// A matrix element from its row-major entries.
    pub fn matrix_from_entries(&self, entries: Vec<Element>) -> Result<Element> {
        let (base, dim) = self
            .matrix_parts()
            .ok_or_else(|| Error::Precondition(format!("{self} is not a matrix ring")))?;
        if entries.len() != dim * dim {
            return Err(Error::Precondition(format!(
                "{self} needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mut values = Vec::with_capacity(entries.len());
        for entry in entries {
            if entry.ring != *base {
                return Err(Error::MixedRings {
                    left: base.to_string(),
                    right: entry.ring.to_string(),
                });
            }
            values.push(entry.value);
        }
        Ok(Element {
            ring: self.clone(),
            value: Value::Matrix(values.into_boxed_slice()),
        })
    }

    pub(crate) fn wrap(&self, value: Value) -> Element {
        Element {
            ring: self.clone(),
            value,
        }
    }

    pub(crate) fn zero_value(&self) -> Value {
        self.int_value(&BigInt::zero())
    }

    pub(crate) fn one_value(&self) -> Value {
        self.int_value(&BigInt::one())
    }

    pub(crate) fn int_value(&self, n: &BigInt) -> Value {
        match &self.0.kind {
            RingKind::ModularInt(m) | RingKind::PrimeField(m) => {
                let r = n.mod_floor(&BigInt::from(*m));
                Value::Residue(r.to_u64().expect("residue below modulus"))
            }
            RingKind::Rationals => Value::Fraction(BigRational::from_integer(n.clone())),
            RingKind::Matrix { base, dim } => {
                let zero = base.zero_value();
                let diag = base.int_value(n);
                let entries = (0..dim * dim)
                    .map(|i| {
                        if i % (dim + 1) == 0 {
                            diag.clone()
                        } else {
                            zero.clone()
                        }
                    })
                    .collect();
                Value::Matrix(entries)
            }
        }
    }

    pub(crate) fn add_values(&self, a: &Value, b: &Value) -> Value {
        match (&self.0.kind, a, b) {
            (
                RingKind::ModularInt(n) | RingKind::PrimeField(n),
                Value::Residue(x),
                Value::Residue(y),
            ) => Value::Residue(((*x as u128 + *y as u128) % *n as u128) as u64),
            (RingKind::Rationals, Value::Fraction(x), Value::Fraction(y)) => Value::Fraction(x + y),
            (RingKind::Matrix { base, .. }, Value::Matrix(x), Value::Matrix(y)) => Value::Matrix(
                x.iter()
                    .zip(y.iter())
                    .map(|(p, q)| base.add_values(p, q))
                    .collect(),
            ),
            _ => unreachable!("payload does not match {self}"),
        }
    }

    pub(crate) fn neg_value(&self, a: &Value) -> Value {
        match (&self.0.kind, a) {
            (RingKind::ModularInt(n) | RingKind::PrimeField(n), Value::Residue(x)) => {
                Value::Residue(if *x == 0 { 0 } else { n - x })
            }
            (RingKind::Rationals, Value::Fraction(x)) => Value::Fraction(-x),
            (RingKind::Matrix { base, .. }, Value::Matrix(x)) => {
                Value::Matrix(x.iter().map(|p| base.neg_value(p)).collect())
            }
            _ => unreachable!("payload does not match {self}"),
        }
    }

    pub(crate) fn sub_values(&self, a: &Value, b: &Value) -> Value {
        self.add_values(a, &self.neg_value(b))
    }

    pub(crate) fn mul_values(&self, a: &Value, b: &Value) -> Value {
        match (&self.0.kind, a, b) {
            (
                RingKind::ModularInt(n) | RingKind::PrimeField(n),
                Value::Residue(x),
                Value::Residue(y),
            ) => Value::Residue(((*x as u128 * *y as u128) % *n as u128) as u64),
            (RingKind::Rationals, Value::Fraction(x), Value::Fraction(y)) => Value::Fraction(x * y),
            (RingKind::Matrix { base, dim }, Value::Matrix(x), Value::Matrix(y)) => {
                let k = *dim;
                let mut out = Vec::with_capacity(k * k);
                for i in 0..k {
                    for j in 0..k {
                        let mut acc = base.mul_values(&x[i * k], &y[j]);
                        for l in 1..k {
                            acc = base
                                .add_values(&acc, &base.mul_values(&x[i * k + l], &y[l * k + j]));
                        }
                        out.push(acc);
                    }
                }
                Value::Matrix(out.into_boxed_slice())
            }
            _ => unreachable!("payload does not match {self}"),
        }
    }

    pub(crate) fn is_zero_value(&self, a: &Value) -> bool {
        match a {
            Value::Residue(r) => *r == 0,
            Value::Fraction(q) => q.is_zero(),
            Value::Matrix(entries) => {
                let (base, _) = self.matrix_parts().expect("matrix payload");
                entries.iter().all(|e| base.is_zero_value(e))
            }
        }
    }

    /// Multiplicative inverse of a scalar payload, if it is a unit.
    pub(crate) fn scalar_inverse(&self, a: &Value) -> Option<Value> {
        match (&self.0.kind, a) {
            (RingKind::ModularInt(n) | RingKind::PrimeField(n), Value::Residue(x)) => {
                mod_inverse(*x, *n).map(Value::Residue)
            }
            (RingKind::Rationals, Value::Fraction(q)) => {
                if q.is_zero() {
                    None
                } else {
                    Some(Value::Fraction(q.recip()))
                }
            }
            _ => unreachable!("scalar_inverse on {self}"),
        }
    }
}

/// Iterator over a finite ring in enumeration order.
pub struct Elements {
    ring: Ring,
    next: u64,
    end: u64,
}

impl Iterator for Elements {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        if self.next >= self.end {
            return None;
        }
        let e = self.ring.element_at(self.next);
        self.next += 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

/// Canonical payload. Residues lie in `[0, n)`, fractions are reduced with
/// positive denominator, matrices are row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Value {
    Residue(u64),
    Fraction(BigRational),
    Matrix(Box<[Value]>),
}

/// A value in a specific ring.
#[derive(Clone)]
pub struct Element {
    ring: Ring,
    pub(crate) value: Value,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.ring == other.ring
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::literal::write_value(f, &self.ring, &self.value)
    }
}

impl Element {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero_value(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.value == self.ring.one_value()
    }

    /// `e·e == e`.
    pub fn is_idempotent(&self) -> bool {
        &(self * self) == self
    }

    /// Residue of a modular or prime-field element.
    pub fn residue(&self) -> Option<u64> {
        match self.value {
            Value::Residue(r) => Some(r),
            _ => None,
        }
    }

    /// Row-major entries of a matrix element.
    pub fn entries(&self) -> Option<Vec<Element>> {
        let (base, _) = self.ring.matrix_parts()?;
        match &self.value {
            Value::Matrix(vs) => Some(vs.iter().map(|v| base.wrap(v.clone())).collect()),
            _ => None,
        }
    }

    pub fn same_ring(&self, other: &Element) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MixedRings {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            })
        }
    }

    pub fn checked_add(&self, rhs: &Element) -> Result<Element> {
        self.same_ring(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_sub(&self, rhs: &Element) -> Result<Element> {
        self.same_ring(rhs)?;
        Ok(self - rhs)
    }

    pub fn checked_mul(&self, rhs: &Element) -> Result<Element> {
        self.same_ring(rhs)?;
        Ok(self * rhs)
    }

    /// Two-sided inverse, or `None` when the element is not a unit.
    ///
    /// Matrices over fields are inverted by elimination, matrices over `Z:n`
    /// by determinant and adjugate. Both sides of the result are verified.
    pub fn try_invert(&self) -> Option<Element> {
        let inverse = match self.ring.kind() {
            RingKind::Matrix { .. } => {
                let flat = linalg::flatten(&self.ring, &self.value);
                let inv = linalg::invert(self.ring.scalar_ring(), &flat)?;
                self.ring.wrap(linalg::unflatten(&self.ring, &inv))
            }
            _ => self.ring.wrap(self.ring.scalar_inverse(&self.value)?),
        };
        let one = self.ring.one();
        (self * &inverse == one && &inverse * self == one).then_some(inverse)
    }

    pub fn is_unit(&self) -> bool {
        self.try_invert().is_some()
    }

    fn combine(&self, rhs: &Element, op: fn(&Ring, &Value, &Value) -> Value) -> Element {
        if self.ring != rhs.ring {
            panic!("mixed-ring operands: {} and {}", self.ring, rhs.ring);
        }
        Element {
            ring: self.ring.clone(),
            value: op(&self.ring, &self.value, &rhs.value),
        }
    }
}

macro_rules! element_binop {
    ($Trait:ident, $method:ident, $values:ident) => {
        /// # Panics
        ///
        /// On mixed-ring operands; use the `checked_` methods for a `Result`.
        impl $Trait<&Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                self.combine(rhs, Ring::$values)
            }
        }

        impl $Trait<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                self.combine(&rhs, Ring::$values)
            }
        }

        impl $Trait<&Element> for Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                self.combine(rhs, Ring::$values)
            }
        }

        impl $Trait<Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                self.combine(&rhs, Ring::$values)
            }
        }
    };
}

element_binop!(Add, add, add_values);
element_binop!(Sub, sub, sub_values);
element_binop!(Mul, mul, mul_values);

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            ring: self.ring.clone(),
            value: self.ring.neg_value(&self.value),
        }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

/// Inverse of `a` modulo `n`, if `gcd(a, n) = 1`.
pub(crate) fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let egcd = (a as i128).extended_gcd(&(n as i128));
    if egcd.gcd != 1 {
        return None;
    }
    Some(egcd.x.rem_euclid(n as i128) as u64)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Ring {
        Ring::modular(n).unwrap()
    }

    #[test]
    fn modular_multiplication_reduces() {
        let r = z(6);
        assert_eq!(r.from_i64(2) * r.from_i64(5), r.from_i64(4));
        assert_eq!(r.from_i64(-1).residue(), Some(5));
    }

    #[test]
    fn swap_matrix_is_an_involution() {
        let m = Ring::matrix(&z(2), 2).unwrap();
        let swap: Element = "[[0,1],[1,0]]".parse_in(&m);
        assert_eq!(&swap * &swap, m.one());
        assert_eq!(swap.try_invert(), Some(swap.clone()));
    }

    #[test]
    fn units_of_z6() {
        let r = z(6);
        assert_eq!(r.from_i64(5).try_invert(), Some(r.from_i64(5)));
        assert_eq!(r.from_i64(2).try_invert(), None);
        // scan oracle
        for a in r.elements().unwrap() {
            let scanned = r
                .elements()
                .unwrap()
                .find(|x| (&a * x).is_one() && (x * &a).is_one());
            assert_eq!(a.try_invert(), scanned);
        }
    }

    #[test]
    fn idempotents() {
        let r = z(6);
        assert!(r.from_i64(3).is_idempotent());
        assert!(r.one().is_idempotent());
        assert!(!r.from_i64(2).is_idempotent());
    }

    #[test]
    fn enumeration_order_and_counts() {
        let r = z(6);
        let all: Vec<u64> = r
            .elements()
            .unwrap()
            .map(|e| e.residue().unwrap())
            .collect();
        assert_eq!(all, vec![0, 1, 2, 3, 4, 5]);

        let m = Ring::matrix(&z(2), 2).unwrap();
        let elems: Vec<Element> = m.elements().unwrap().collect();
        assert_eq!(elems.len(), 16);
        assert_eq!(elems[1].to_string(), "[[0,0],[0,1]]");
        assert_eq!(elems[8].to_string(), "[[1,0],[0,0]]");
        for (i, e) in elems.iter().enumerate() {
            assert_eq!(m.index_of(e), i as u64);
        }
        let mut sorted = elems.clone();
        sorted.sort_by(|a, b| a.value.cmp(&b.value));
        assert_eq!(sorted, elems);
    }

    #[test]
    fn rationals_refuse_enumeration() {
        assert!(matches!(
            Ring::rationals().elements(),
            Err(Error::Infinite { .. })
        ));
    }

    #[test]
    fn bound_is_enforced() {
        let m = Ring::matrix(&z(6), 3).unwrap();
        match m.size() {
            Err(Error::BoundExceeded { bound, size, .. }) => {
                assert_eq!(bound, DEFAULT_ENUMERATION_BOUND);
                assert_eq!(size, "10077696");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(m.with_enumeration_bound(1 << 24).size(), Ok(10_077_696));
    }

    #[test]
    fn matrix_cardinality() {
        let m = Ring::matrix(&Ring::matrix(&z(3), 2).unwrap(), 2).unwrap();
        assert_eq!(
            m.cardinality(),
            &Cardinality::Finite(BigUint::from(3u32).pow(16))
        );
        assert_eq!(m.flat_dim(), 4);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
        assert!(Ring::prime_field(9).is_err());
        assert!(Ring::modular(1).is_err());
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let a = z(6).one();
        let b = z(4).one();
        assert!(matches!(a.checked_add(&b), Err(Error::MixedRings { .. })));
        assert!(a.checked_mul(&Ring::prime_field(2).unwrap().one()).is_err());
    }

    #[test]
    fn rational_inverse() {
        let q = Ring::rationals();
        let x: Element = "-3/4".parse_in(&q);
        assert_eq!(x.try_invert().unwrap().to_string(), "-4/3");
        assert_eq!(q.zero().try_invert(), None);
    }

    #[test]
    fn composite_modulus_matrix_inverse_uses_unit_determinant() {
        let m = Ring::matrix(&z(6), 2).unwrap();
        // det = 1*5 - 2*3 = -1, a unit
        let a: Element = "[[1,2],[3,5]]".parse_in(&m);
        let inv = a.try_invert().unwrap();
        assert_eq!(&a * &inv, m.one());
        // det = 2, not a unit mod 6
        let b: Element = "[[2,0],[0,1]]".parse_in(&m);
        assert_eq!(b.try_invert(), None);
    }

    trait ParseIn {
        fn parse_in(self, ring: &Ring) -> Element;
    }

    impl ParseIn for &str {
        fn parse_in(self, ring: &Ring) -> Element {
            crate::literal::parse_element(ring, self).unwrap()
        }
    }
}
