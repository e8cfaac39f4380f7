//! Von Neumann regularity: inner and reflexive inverses.

use crate::error::{Error, Result};
use crate::linalg;
use crate::ring::{Element, Ring};

/// How a decision procedure searches for its witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Elimination when the ring has field scalars, otherwise a scan.
    #[default]
    Auto,
    /// Exhaustive scan in enumeration order; finite rings only.
    Scan,
    /// Exact linear algebra; fields and matrix rings over fields only.
    Elimination,
}

impl Strategy {
    pub(crate) fn resolve(self, ring: &Ring, operation: &'static str) -> Result<Strategy> {
        match self {
            Strategy::Auto if ring.has_field_scalars() => Ok(Strategy::Elimination),
            Strategy::Auto if ring.is_finite() => Ok(Strategy::Scan),
            Strategy::Auto => Err(Error::Unsupported {
                operation,
                ring: ring.to_string(),
            }),
            Strategy::Elimination if !ring.has_field_scalars() => Err(Error::Unsupported {
                operation,
                ring: ring.to_string(),
            }),
            other => Ok(other),
        }
    }
}

/// An element together with a verified inner inverse `a⁻` and the reflexive
/// inverse `a⁺ = a⁻·a·a⁻` built from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityCertificate {
    pub a: Element,
    pub inner: Element,
    pub reflexive: Element,
}

impl RegularityCertificate {
    /// Certifies `a` with a caller-chosen inner inverse.
    pub fn from_inner(a: &Element, inner: &Element) -> Result<Self> {
        a.same_ring(inner)?;
        if &(a * inner) * a != *a {
            return Err(Error::Precondition(format!(
                "{inner} is not an inner inverse of {a}"
            )));
        }
        let reflexive = &(inner * a) * inner;
        Ok(RegularityCertificate {
            a: a.clone(),
            inner: inner.clone(),
            reflexive,
        })
    }

    /// Re-evaluates `a·a⁻·a = a`, `a·a⁺·a = a` and `a⁺·a·a⁺ = a⁺`.
    pub fn verify(&self) -> bool {
        let a = &self.a;
        let r = &self.reflexive;
        &(a * &self.inner) * a == *a
            && &(a * r) * a == *a
            && &(r * a) * r == *r
            && *r == &(&self.inner * a) * &self.inner
    }
}

/// An inner inverse of `a`, or `None` if `a` is not regular.
///
/// Over fields and matrix rings over fields the canonical rank-factorization
/// output `Q·diag(I_r, 0)·P` is returned; elsewhere the first inner inverse in
/// enumeration order.
pub fn inner_inverse(a: &Element) -> Result<Option<RegularityCertificate>> {
    inner_inverse_with(a, Strategy::Auto)
}

pub fn inner_inverse_with(
    a: &Element,
    strategy: Strategy,
) -> Result<Option<RegularityCertificate>> {
    let ring = a.ring();
    let inner = match strategy.resolve(ring, "inner inverse")? {
        Strategy::Elimination => {
            let s = ring.scalar_ring();
            let flat = linalg::flatten(ring, &a.value);
            let g = linalg::field_inner_inverse(s, &flat);
            Some(ring.wrap(linalg::unflatten(ring, &g)))
        }
        _ => ring.find_first(|x| &(a * x) * a == *a)?,
    };
    match inner {
        Some(x) => {
            let cert = RegularityCertificate::from_inner(a, &x)?;
            debug_assert!(cert.verify());
            Ok(Some(cert))
        }
        None => Ok(None),
    }
}

pub fn is_regular(a: &Element) -> Result<bool> {
    Ok(inner_inverse(a)?.is_some())
}

/// Every `x` with `a·x·a = a`, in enumeration order. Finite rings only.
pub fn all_inner_inverses(a: &Element) -> Result<Vec<Element>> {
    a.ring().filter_all(|x| &(a * x) * a == *a)
}
