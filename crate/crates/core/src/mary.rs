//! The inverse along an element.
//!
//! `a` is invertible along `d` when some `b` satisfies `d·a·b = d = b·a·d` and
//! `b ≤_H d`; such `b` is unique and written `a^∥d`. For regular `m` with
//! inner inverse `m⁻` the inverse along `m` exists exactly when
//! `u = m·a + 1 − m·m⁻` is a unit, and then `a^∥m = u⁻¹·m = m·v⁻¹` with
//! `v = a·m + 1 − m⁻·m`. When `m ≤_L p·m` and `m ≤_R m·q` the same holds along
//! the product `p·m·q` with `u = m·q·a·p + 1 − m·m⁻`,
//! `v = q·a·p·m + 1 − m⁻·m`, and `a^∥pmq = p·u⁻¹·m·q = p·m·v⁻¹·q`.
//!
//! [`mary_oracle`] searches the definition directly and is independent of the
//! unit criterion.

use crate::error::{Error, Result};
use crate::green::{self, GreenWitness};
use crate::regularity::{self, RegularityCertificate, Strategy};
use crate::ring::Element;

/// A computed inverse along `d` with every intermediate of the unit criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaryResult {
    pub a: Element,
    pub d: Element,
    /// The inner inverse of the regular factor that built `u` and `v`.
    pub inner_used: Element,
    pub u: Element,
    pub u_inv: Element,
    pub v: Element,
    pub v_inv: Element,
    /// `a^∥d`.
    pub b: Element,
    /// Certifies `b ≤_H d`.
    pub h_witness: GreenWitness,
}

impl MaryResult {
    /// Re-evaluates the defining equations, the unit inverses and the
    /// `≤_H` witness.
    pub fn verify(&self) -> bool {
        let (a, b, d) = (&self.a, &self.b, &self.d);
        let one = a.ring().one();
        &(d * a) * b == *d
            && &(b * a) * d == *d
            && &self.u * &self.u_inv == one
            && &self.u_inv * &self.u == one
            && &self.v * &self.v_inv == one
            && &self.v_inv * &self.v == one
            && self.h_witness.a == *b
            && self.h_witness.b == *d
            && self.h_witness.verify()
    }
}

/// The negative answer: `u` (and therefore `v`) is not a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotInvertibleAlong {
    pub a: Element,
    pub d: Element,
    pub inner_used: Element,
    pub u: Element,
    pub v: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlongOutcome {
    Exists(Box<MaryResult>),
    NotInvertible(Box<NotInvertibleAlong>),
    /// The element the inverse is taken along (or its regular factor `m`)
    /// is not regular, so no inverse along it can exist.
    NotRegular {
        element: Element,
    },
}

impl AlongOutcome {
    pub fn exists(&self) -> bool {
        matches!(self, AlongOutcome::Exists(_))
    }

    pub fn inverse(&self) -> Option<&Element> {
        match self {
            AlongOutcome::Exists(r) => Some(&r.b),
            _ => None,
        }
    }

    pub fn result(&self) -> Option<&MaryResult> {
        match self {
            AlongOutcome::Exists(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobsonInverses {
    pub inv_1ab: Element,
    /// Computed as `1 − b·(1 + a·b)⁻¹·a`.
    pub inv_1ba: Element,
}

/// `(1 + a·b)⁻¹` and `(1 + b·a)⁻¹`, the latter obtained from the former, or
/// `None` when `1 + a·b` is not a unit.
pub fn jacobson_invert(a: &Element, b: &Element) -> Result<Option<JacobsonInverses>> {
    a.same_ring(b)?;
    let one = a.ring().one();
    let one_ab = &one + &(a * b);
    let one_ba = &one + &(b * a);
    let Some(inv_1ab) = one_ab.try_invert() else {
        if one_ba.is_unit() {
            return Err(Error::Invariant(format!(
                "1+ab = {one_ab} is not a unit but 1+ba = {one_ba} is (a = {a}, b = {b})"
            )));
        }
        return Ok(None);
    };
    let inv_1ba = &one - &(&(b * &inv_1ab) * a);
    if &one_ba * &inv_1ba != one || &inv_1ba * &one_ba != one {
        return Err(Error::Invariant(format!(
            "1 - b(1+ab)^-1 a = {inv_1ba} does not invert 1+ba = {one_ba} (a = {a}, b = {b})"
        )));
    }
    Ok(Some(JacobsonInverses { inv_1ab, inv_1ba }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerReport {
    /// `e·x·e + 1 − e` is a unit of the ring.
    pub global_unit: bool,
    /// `e·x·e` is a unit of the corner ring `eRe`, whose unity is `e`.
    pub corner_unit: bool,
    /// The inverse of `e·x·e` in `eRe`, when it exists.
    pub corner_inverse: Option<Element>,
}

/// Decides both sides of the corner-ring equivalence independently and
/// reports an invariant violation if they disagree.
///
/// The corner side looks for `Y`, `Z` with `(exe)·Y = e = Z·(exe)`; then
/// `e·Y·e` is the two-sided inverse of `exe` in `eRe`. With `e = 0` the corner
/// ring is `{0}` and `0` is its own inverse.
pub fn corner_invertible(e: &Element, x: &Element) -> Result<CornerReport> {
    e.same_ring(x)?;
    if !e.is_idempotent() {
        return Err(Error::Precondition(format!("{e} is not idempotent")));
    }
    let one = e.ring().one();
    let exe = &(e * x) * e;
    let global_unit = (&(&exe + &one) - e).is_unit();

    let right = green::right_factor(e, &exe, Strategy::Auto)?;
    let left = green::left_factor(e, &exe, Strategy::Auto)?;
    let corner_inverse = match (right, left) {
        (Some(y), Some(_)) => {
            let y = &(e * &y) * e;
            if &exe * &y != *e || &y * &exe != *e {
                return Err(Error::Invariant(format!(
                    "{y} is not a two-sided inverse of {exe} in the corner of {e}"
                )));
            }
            Some(y)
        }
        _ => None,
    };
    let corner_unit = corner_inverse.is_some();
    if global_unit != corner_unit {
        return Err(Error::Invariant(format!(
            "e = {e}, x = {x}: exe+1-e unit is {global_unit} but exe corner unit is {corner_unit}"
        )));
    }
    Ok(CornerReport {
        global_unit,
        corner_unit,
        corner_inverse,
    })
}

/// `a^∥m` via the unit criterion. `inner`, when given, must be an inner
/// inverse of `m`; otherwise the canonical one is computed.
pub fn inverse_along(a: &Element, m: &Element, inner: Option<&Element>) -> Result<AlongOutcome> {
    a.same_ring(m)?;
    let cert = match inner {
        Some(g) => RegularityCertificate::from_inner(m, g)?,
        None => match regularity::inner_inverse(m)? {
            Some(cert) => cert,
            None => return Ok(AlongOutcome::NotRegular { element: m.clone() }),
        },
    };
    let one = a.ring().one();
    let g = &cert.inner;
    let u = &(&(m * a) + &one) - &(m * g);
    let v = &(&(a * m) + &one) - &(g * m);
    let (u_inv, v_inv) = match (u.try_invert(), v.try_invert()) {
        (Some(ui), Some(vi)) => (ui, vi),
        (None, None) => {
            return Ok(AlongOutcome::NotInvertible(Box::new(NotInvertibleAlong {
                a: a.clone(),
                d: m.clone(),
                inner_used: g.clone(),
                u,
                v,
            })))
        }
        _ => {
            return Err(Error::Invariant(format!(
                "u = {u} and v = {v} disagree on invertibility (a = {a}, m = {m})"
            )))
        }
    };
    let b = &u_inv * m;
    let b_right = m * &v_inv;
    if b != b_right {
        return Err(Error::Invariant(format!(
            "u^-1 m = {b} but m v^-1 = {b_right} (a = {a}, m = {m})"
        )));
    }
    let h_witness = GreenWitness::leq_h_from(&b, m, u_inv.clone(), v_inv.clone())?;
    let result = MaryResult {
        a: a.clone(),
        d: m.clone(),
        inner_used: g.clone(),
        u,
        u_inv,
        v,
        v_inv,
        b,
        h_witness,
    };
    if !result.verify() {
        return Err(Error::Invariant(format!(
            "{} fails the defining equations along {m}",
            result.b
        )));
    }
    Ok(AlongOutcome::Exists(Box::new(result)))
}

/// Inputs of the product criterion, with the witnesses `p′·p·m = m` and
/// `m·q·q′ = m` and a regularity certificate for `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductMaryProblem {
    pub a: Element,
    pub p: Element,
    pub m: Element,
    pub q: Element,
    pub p_prime: Element,
    pub q_prime: Element,
    pub m_cert: RegularityCertificate,
}

impl ProductMaryProblem {
    /// Validates caller-supplied witnesses.
    pub fn new(
        a: &Element,
        p: &Element,
        m: &Element,
        q: &Element,
        p_prime: &Element,
        q_prime: &Element,
        m_cert: RegularityCertificate,
    ) -> Result<Self> {
        for x in [p, m, q, p_prime, q_prime, &m_cert.a] {
            a.same_ring(x)?;
        }
        if m_cert.a != *m || !m_cert.verify() {
            return Err(Error::Precondition(format!(
                "certificate does not certify {m}"
            )));
        }
        if &(p_prime * p) * m != *m {
            return Err(Error::Precondition(format!(
                "p'·p·m ≠ m for p' = {p_prime}"
            )));
        }
        if &(m * q) * q_prime != *m {
            return Err(Error::Precondition(format!(
                "m·q·q' ≠ m for q' = {q_prime}"
            )));
        }
        Ok(ProductMaryProblem {
            a: a.clone(),
            p: p.clone(),
            m: m.clone(),
            q: q.clone(),
            p_prime: p_prime.clone(),
            q_prime: q_prime.clone(),
            m_cert,
        })
    }

    /// Derives the witnesses from Green's deciders. `Ok(None)` when `m` is
    /// not regular; a precondition error when `m ≤_L p·m` or `m ≤_R m·q`
    /// fails.
    pub fn derive(a: &Element, p: &Element, m: &Element, q: &Element) -> Result<Option<Self>> {
        for x in [p, m, q] {
            a.same_ring(x)?;
        }
        let Some(m_cert) = regularity::inner_inverse(m)? else {
            return Ok(None);
        };
        let pm = p * m;
        let mq = m * q;
        let p_prime = green::left_factor(m, &pm, Strategy::Auto)?
            .ok_or_else(|| Error::Precondition(format!("m ≤_L pm fails for m = {m}, p = {p}")))?;
        let q_prime = green::right_factor(m, &mq, Strategy::Auto)?
            .ok_or_else(|| Error::Precondition(format!("m ≤_R mq fails for m = {m}, q = {q}")))?;
        Ok(Some(ProductMaryProblem {
            a: a.clone(),
            p: p.clone(),
            m: m.clone(),
            q: q.clone(),
            p_prime,
            q_prime,
            m_cert,
        }))
    }

    /// The element the inverse is taken along, `p·m·q`.
    pub fn d(&self) -> Element {
        &(&self.p * &self.m) * &self.q
    }
}

/// `a^∥pmq` via the product criterion.
///
/// The `≤_H` witness is assembled from the factorizations
/// `b = (p·u⁻¹·p′)·pmq = pmq·(q′·v⁻¹·q)`, not searched for.
pub fn inverse_along_product(problem: &ProductMaryProblem) -> Result<AlongOutcome> {
    let ProductMaryProblem {
        a,
        p,
        m,
        q,
        p_prime,
        q_prime,
        m_cert,
    } = problem;
    let one = a.ring().one();
    let g = &m_cert.inner;
    let d = problem.d();
    let u = &(&(&(&(m * q) * a) * p) + &one) - &(m * g);
    let v = &(&(&(&(q * a) * p) * m) + &one) - &(g * m);
    let (u_inv, v_inv) = match (u.try_invert(), v.try_invert()) {
        (Some(ui), Some(vi)) => (ui, vi),
        (None, None) => {
            return Ok(AlongOutcome::NotInvertible(Box::new(NotInvertibleAlong {
                a: a.clone(),
                d,
                inner_used: g.clone(),
                u,
                v,
            })))
        }
        _ => {
            return Err(Error::Invariant(format!(
                "u = {u} and v = {v} disagree on invertibility (a = {a}, p = {p}, m = {m}, q = {q})"
            )))
        }
    };
    let b = &(&(p * &u_inv) * m) * q;
    let b_right = &(&(p * m) * &v_inv) * q;
    if b != b_right {
        return Err(Error::Invariant(format!(
            "p u^-1 m q = {b} but p m v^-1 q = {b_right} (a = {a}, p = {p}, m = {m}, q = {q})"
        )));
    }
    let left = &(p * &u_inv) * p_prime;
    let right = &(q_prime * &v_inv) * q;
    let h_witness = GreenWitness::leq_h_from(&b, &d, left, right)?;
    let result = MaryResult {
        a: a.clone(),
        d,
        inner_used: g.clone(),
        u,
        u_inv,
        v,
        v_inv,
        b,
        h_witness,
    };
    if !result.verify() {
        return Err(Error::Invariant(format!(
            "{} fails the defining equations along {}",
            result.b, result.d
        )));
    }
    Ok(AlongOutcome::Exists(Box::new(result)))
}

/// Builds the problem with derived witnesses and solves it.
pub fn inverse_along_pmq(
    a: &Element,
    p: &Element,
    m: &Element,
    q: &Element,
) -> Result<AlongOutcome> {
    match ProductMaryProblem::derive(a, p, m, q)? {
        Some(problem) => inverse_along_product(&problem),
        None => Ok(AlongOutcome::NotRegular { element: m.clone() }),
    }
}

/// Whether `d H d·a·d`, which holds exactly when `a^∥d` exists.
pub fn exists_via_h(a: &Element, d: &Element) -> Result<bool> {
    exists_via_h_with(a, d, Strategy::Auto)
}

pub fn exists_via_h_with(a: &Element, d: &Element, strategy: Strategy) -> Result<bool> {
    a.same_ring(d)?;
    let dad = &(d * a) * d;
    Ok(green::relate(green::GreenKind::H, d, &dad, strategy)?.is_some())
}

/// Every `b` with `d·a·b = d = b·a·d` and `b ≤_H d`, found by exhaustive
/// scan, in enumeration order.
pub fn oracle_candidates(a: &Element, d: &Element) -> Result<Vec<Element>> {
    a.same_ring(d)?;
    let ring = a.ring();
    ring.size()?;
    let da = d * a;
    let ad = a * d;
    ring.filter_all(|b| {
        &da * b == *d
            && b * &ad == *d
            && green::left_factor(b, d, Strategy::Scan)
                .expect("finite ring within bound")
                .is_some()
            && green::right_factor(b, d, Strategy::Scan)
                .expect("finite ring within bound")
                .is_some()
    })
}

/// The inverse of `a` along `d` straight from the definition. Finding two
/// candidates would contradict uniqueness and is reported as an invariant
/// violation.
pub fn mary_oracle(a: &Element, d: &Element) -> Result<Option<Element>> {
    let mut candidates = oracle_candidates(a, d)?;
    if candidates.len() > 1 {
        let list: Vec<String> = candidates.iter().map(|c| c.to_string()).collect();
        return Err(Error::Invariant(format!(
            "inverse of {a} along {d} is not unique: {}",
            list.join(", ")
        )));
    }
    Ok(candidates.pop())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::literal::{parse_element, parse_ring};
    use crate::ring::Ring;

    fn el(ring: &Ring, lit: &str) -> Element {
        parse_element(ring, lit).unwrap()
    }

    #[test]
    fn inverse_along_z6_examples() {
        let z6 = parse_ring("Z:6").unwrap();
        let out = inverse_along(&el(&z6, "5"), &el(&z6, "2"), None).unwrap();
        assert_eq!(out.inverse().unwrap().to_string(), "2");
        let r = out.result().unwrap();
        assert_eq!(
            (r.u.to_string(), r.inner_used.to_string()),
            ("1".into(), "2".into())
        );

        match inverse_along(&el(&z6, "3"), &el(&z6, "2"), None).unwrap() {
            AlongOutcome::NotInvertible(n) => assert_eq!(n.u.to_string(), "3"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn along_one_is_the_ordinary_inverse() {
        for ring in ["Z:7", "Z:10", "M:2:Z:3", "Q", "M:2:Q"] {
            let r = parse_ring(ring).unwrap();
            let a = r.from_i64(3);
            let out = inverse_along(&a, &r.one(), None).unwrap();
            assert_eq!(out.inverse(), a.try_invert().as_ref(), "{ring}");
        }
    }

    #[test]
    fn not_regular_along() {
        let z4 = parse_ring("Z:4").unwrap();
        let out = inverse_along(&z4.one(), &el(&z4, "2"), None).unwrap();
        assert_eq!(
            out,
            AlongOutcome::NotRegular {
                element: el(&z4, "2")
            }
        );
    }

    #[test]
    fn invalid_inner_is_rejected_not_recomputed() {
        let z6 = parse_ring("Z:6").unwrap();
        let res = inverse_along(&el(&z6, "5"), &el(&z6, "2"), Some(&el(&z6, "1")));
        assert!(matches!(res, Err(Error::Precondition(_))));
        let ok = inverse_along(&el(&z6, "5"), &el(&z6, "2"), Some(&el(&z6, "5"))).unwrap();
        assert_eq!(ok.inverse().unwrap().to_string(), "2");
    }

    #[test]
    fn jacobson_examples() {
        let z6 = parse_ring("Z:6").unwrap();
        let r = jacobson_invert(&el(&z6, "2"), &z6.zero()).unwrap().unwrap();
        assert!(r.inv_1ab.is_one() && r.inv_1ba.is_one());
        let r = jacobson_invert(&el(&z6, "2"), &el(&z6, "3"))
            .unwrap()
            .unwrap();
        assert_eq!(
            (r.inv_1ab.to_string(), r.inv_1ba.to_string()),
            ("1".into(), "1".into())
        );

        let m = parse_ring("M:2:Z:2").unwrap();
        assert_eq!(
            jacobson_invert(&el(&m, "[[0,1],[0,0]]"), &el(&m, "[[0,0],[1,0]]")).unwrap(),
            None
        );
    }

    #[test]
    fn corner_examples() {
        let z6 = parse_ring("Z:6").unwrap();
        let r = corner_invertible(&el(&z6, "3"), &z6.one()).unwrap();
        assert!(r.global_unit && r.corner_unit);
        assert_eq!(r.corner_inverse.unwrap().to_string(), "3");

        let r = corner_invertible(&z6.zero(), &el(&z6, "4")).unwrap();
        assert!(r.global_unit && r.corner_unit);
        assert!(r.corner_inverse.unwrap().is_zero());

        for x in z6.elements().unwrap() {
            let r = corner_invertible(&z6.one(), &x).unwrap();
            assert_eq!(r.corner_unit, x.is_unit());
        }
        assert!(matches!(
            corner_invertible(&el(&z6, "2"), &z6.one()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn corner_over_rational_matrices() {
        let m = parse_ring("M:2:Q").unwrap();
        let e = el(&m, "[[1,0],[0,0]]");
        let r = corner_invertible(&e, &el(&m, "[[1/2,3],[4,5]]")).unwrap();
        assert!(r.corner_unit);
        assert_eq!(r.corner_inverse.unwrap().to_string(), "[[2,0],[0,0]]");
        let r = corner_invertible(&e, &el(&m, "[[0,3],[4,5]]")).unwrap();
        assert!(!r.global_unit && !r.corner_unit);
    }

    #[test]
    fn exists_via_h_examples() {
        let z6 = parse_ring("Z:6").unwrap();
        assert!(exists_via_h(&el(&z6, "5"), &z6.one()).unwrap());
        assert!(!exists_via_h(&el(&z6, "3"), &el(&z6, "2")).unwrap());
        assert!(exists_via_h(&el(&z6, "5"), &el(&z6, "2")).unwrap());
    }

    #[test]
    fn oracle_examples() {
        let z6 = parse_ring("Z:6").unwrap();
        assert_eq!(
            mary_oracle(&el(&z6, "5"), &el(&z6, "2")).unwrap(),
            Some(el(&z6, "2"))
        );
        assert_eq!(mary_oracle(&el(&z6, "3"), &el(&z6, "2")).unwrap(), None);
        for ring in ["Z:6", "Z:12", "M:2:Z:2"] {
            let r = parse_ring(ring).unwrap();
            for e in r.elements().unwrap().filter(|e| e.is_idempotent()) {
                assert_eq!(
                    mary_oracle(&r.one(), &e).unwrap(),
                    Some(e.clone()),
                    "{ring}"
                );
            }
        }
        assert!(matches!(
            mary_oracle(&Ring::rationals().one(), &Ring::rationals().one()),
            Err(Error::Infinite { .. })
        ));
    }

    #[test]
    fn product_examples() {
        let z6 = parse_ring("Z:6").unwrap();
        let (a, p, m, q) = (el(&z6, "5"), el(&z6, "5"), el(&z6, "2"), z6.one());
        let problem = ProductMaryProblem::derive(&a, &p, &m, &q).unwrap().unwrap();
        assert_eq!(problem.d().to_string(), "4");
        let out = inverse_along_product(&problem).unwrap();
        let r = out.result().unwrap();
        assert_eq!(
            (r.u.to_string(), r.u_inv.to_string(), r.b.to_string()),
            ("5".into(), "5".into(), "2".into())
        );
        assert_eq!(mary_oracle(&a, &el(&z6, "4")).unwrap(), Some(el(&z6, "2")));

        let z4 = parse_ring("Z:4").unwrap();
        let out = inverse_along_pmq(&z4.one(), &z4.one(), &el(&z4, "2"), &z4.one()).unwrap();
        assert!(matches!(out, AlongOutcome::NotRegular { .. }));
    }

    #[test]
    fn product_with_trivial_factors_matches_inverse_along() {
        let r = parse_ring("M:2:Z:2").unwrap();
        for a in r.elements().unwrap() {
            for m in r.elements().unwrap() {
                let direct = inverse_along(&a, &m, None).unwrap();
                let product = inverse_along_pmq(&a, &r.one(), &m, &r.one()).unwrap();
                assert_eq!(direct, product);
            }
        }
    }

    #[test]
    fn product_witnesses_are_validated() {
        let z6 = parse_ring("Z:6").unwrap();
        let m = el(&z6, "2");
        let cert = regularity::inner_inverse(&m).unwrap().unwrap();
        let bad = ProductMaryProblem::new(
            &z6.one(),
            &z6.one(),
            &m,
            &z6.one(),
            &z6.zero(),
            &z6.one(),
            cert,
        );
        assert!(matches!(bad, Err(Error::Precondition(_))));
        // m = 2 is not ≤_L 3·2 = 0
        let res = ProductMaryProblem::derive(&z6.one(), &el(&z6, "3"), &m, &z6.one());
        assert!(matches!(res, Err(Error::Precondition(_))));
    }
}
