//! Inverses along `2×2` block matrices.
//!
//! Blocks are laid out as
//!
//! ```text
//! D = [d1 d3]      A = [a c]
//!     [d2 d4]          [b d]
//! ```
//!
//! so `A`'s entries occupy the same fields: `a = d1`, `b = d2`, `c = d3`,
//! `d = d4`. Both theorems write `D = P·M·Q` with invertible `P`, `Q` and a
//! lower triangular `M` whose idempotent `M·M⁻` has a closed form, then
//! factor `U = M·Q·A·P + I − M·M⁻` through Schur complements. The result is
//! `A^∥D = P·U⁻¹·M·Q`.
//!
//! The `*_closed_form` functions evaluate the formulas only. The plain
//! variants also compute `A^∥D` directly in the flattened matrix ring, when
//! that ring supports it, and report any disagreement as an invariant
//! violation.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::mary::{self, AlongOutcome};
use crate::regularity::{self, RegularityCertificate};
use crate::ring::{Element, Ring};

/// The matrix `[d1 d3; d2 d4]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block2x2 {
    pub d1: Element,
    pub d2: Element,
    pub d3: Element,
    pub d4: Element,
}

impl Block2x2 {
    pub fn new(d1: Element, d2: Element, d3: Element, d4: Element) -> Result<Self> {
        d1.same_ring(&d2)?;
        d1.same_ring(&d3)?;
        d1.same_ring(&d4)?;
        Ok(Block2x2 { d1, d2, d3, d4 })
    }

    /// `[top_left top_right; bottom_left bottom_right]`.
    pub fn from_rows(
        top_left: Element,
        top_right: Element,
        bottom_left: Element,
        bottom_right: Element,
    ) -> Result<Self> {
        Block2x2::new(top_left, bottom_left, top_right, bottom_right)
    }

    fn rows(tl: Element, tr: Element, bl: Element, br: Element) -> Self {
        Block2x2 {
            d1: tl,
            d2: bl,
            d3: tr,
            d4: br,
        }
    }

    pub fn identity(base: &Ring) -> Self {
        Block2x2::rows(base.one(), base.zero(), base.zero(), base.one())
    }

    pub fn base(&self) -> &Ring {
        self.d1.ring()
    }

    /// `M_2` over the base ring.
    pub fn matrix_ring(&self) -> Ring {
        Ring::matrix(self.base(), 2).expect("dimension 2 is valid")
    }

    /// The same matrix as one element of the `2×2` matrix ring.
    pub fn to_element(&self) -> Element {
        self.matrix_ring()
            .matrix_from_entries(vec![
                self.d1.clone(),
                self.d3.clone(),
                self.d2.clone(),
                self.d4.clone(),
            ])
            .expect("entries share the base ring")
    }

    pub fn from_element(m: &Element) -> Result<Self> {
        match m.ring().matrix_parts() {
            Some((_, 2)) => {
                let mut e = m.entries().expect("matrix element").into_iter();
                let (tl, tr, bl, br) = (
                    e.next().unwrap(),
                    e.next().unwrap(),
                    e.next().unwrap(),
                    e.next().unwrap(),
                );
                Ok(Block2x2::rows(tl, tr, bl, br))
            }
            _ => Err(Error::Precondition(format!("{m} is not a 2×2 matrix"))),
        }
    }

    pub fn same_base(&self, other: &Block2x2) -> Result<()> {
        self.d1.same_ring(&other.d1)
    }
}

impl Mul for &Block2x2 {
    type Output = Block2x2;
    fn mul(self, o: &Block2x2) -> Block2x2 {
        Block2x2::rows(
            &(&self.d1 * &o.d1) + &(&self.d3 * &o.d2),
            &(&self.d1 * &o.d3) + &(&self.d3 * &o.d4),
            &(&self.d2 * &o.d1) + &(&self.d4 * &o.d2),
            &(&self.d2 * &o.d3) + &(&self.d4 * &o.d4),
        )
    }
}

impl Add for &Block2x2 {
    type Output = Block2x2;
    fn add(self, o: &Block2x2) -> Block2x2 {
        Block2x2::rows(
            &self.d1 + &o.d1,
            &self.d3 + &o.d3,
            &self.d2 + &o.d2,
            &self.d4 + &o.d4,
        )
    }
}

impl Sub for &Block2x2 {
    type Output = Block2x2;
    fn sub(self, o: &Block2x2) -> Block2x2 {
        Block2x2::rows(
            &self.d1 - &o.d1,
            &self.d3 - &o.d3,
            &self.d2 - &o.d2,
            &self.d4 - &o.d4,
        )
    }
}

impl std::fmt::Display for Block2x2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.d1, self.d3, self.d2, self.d4)
    }
}

/// Inner inverses to use instead of the canonical ones. Reflexive inverses
/// are always rebuilt as `x⁻·x·x⁻` from whichever inner inverse is used.
#[derive(Debug, Clone, Default)]
pub struct InnerChoices {
    pub d2: Option<Element>,
    pub d3: Option<Element>,
    pub d4: Option<Element>,
    pub s: Option<Element>,
    pub w: Option<Element>,
    pub t: Option<Element>,
}

fn certify(x: &Element, choice: Option<&Element>) -> Result<Option<RegularityCertificate>> {
    match choice {
        Some(g) => RegularityCertificate::from_inner(x, g).map(Some),
        None => regularity::inner_inverse(x),
    }
}

fn require_regular(
    x: &Element,
    name: &str,
    choice: Option<&Element>,
) -> Result<RegularityCertificate> {
    certify(x, choice)?.ok_or_else(|| Error::Precondition(format!("{name} = {x} is not regular")))
}

fn invariant(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant(what()))
    }
}

/// The idempotent `M·M⁻` of `M = [d2 0; d1 d3]`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum LtRegularity {
    Regular {
        w: Element,
        w_inner: Element,
        mm_minus: Block2x2,
    },
    /// `w` is not regular, hence neither is `M`.
    NotRegular { w: Element },
}

/// Regularity of the lower triangular `M = [d2 0; d1 d3]` through
/// `w = (1 − d3·d3⁺)·d1·(1 − d2⁺·d2)`, with the closed form of `M·M⁻`.
pub fn lt_regular_inner(d2: &Element, d1: &Element, d3: &Element) -> Result<LtRegularity> {
    lt_regular_inner_with(d2, d1, d3, &InnerChoices::default())
}

/// As [`lt_regular_inner`], using `choices.d2`, `choices.d3` and `choices.w`.
pub fn lt_regular_inner_with(
    d2: &Element,
    d1: &Element,
    d3: &Element,
    choices: &InnerChoices,
) -> Result<LtRegularity> {
    d2.same_ring(d1)?;
    d2.same_ring(d3)?;
    let d2_plus = require_regular(d2, "d2", choices.d2.as_ref())?.reflexive;
    let d3_plus = require_regular(d3, "d3", choices.d3.as_ref())?.reflexive;
    let one = d2.ring().one();
    let g3 = &one - &(d3 * &d3_plus);
    let w = &(&g3 * d1) * &(&one - &(&d2_plus * d2));
    let Some(w_cert) = certify(&w, choices.w.as_ref())? else {
        return Ok(LtRegularity::NotRegular { w });
    };
    let ww = &w * &w_cert.inner;
    let mm_minus = Block2x2::rows(
        d2 * &d2_plus,
        d2.ring().zero(),
        &(&(&(&one - &ww) * &g3) * d1) * &d2_plus,
        &(d3 * &d3_plus) + &(&ww * &g3),
    );
    let m = Block2x2::rows(d2.clone(), d2.ring().zero(), d1.clone(), d3.clone());
    invariant(&mm_minus * &m == m, || format!("MM⁻·M ≠ M for M = {m}"))?;
    invariant(&mm_minus * &mm_minus == mm_minus, || {
        format!("MM⁻ = {mm_minus} is not idempotent")
    })?;
    Ok(LtRegularity::Regular {
        w,
        w_inner: w_cert.inner,
        mm_minus,
    })
}

/// `D = P·M·Q` with `P = [1 d3·d4⁺; 0 1]`, `M = [s d3·f; e·d2 d4]`,
/// `Q = [1 0; d4⁺·d2 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurData {
    pub d4_plus: Element,
    /// `1 − d4·d4⁺`
    pub e: Element,
    /// `1 − d4⁺·d4`
    pub f: Element,
    /// `d1 − d3·d4⁺·d2`
    pub s: Element,
    pub p: Block2x2,
    pub m: Block2x2,
    pub q: Block2x2,
}

/// `Ok(None)` when `d4` is not regular.
pub fn schur_decompose(d: &Block2x2) -> Result<Option<SchurData>> {
    schur_decompose_with(d, None)
}

pub fn schur_decompose_with(d: &Block2x2, d4_inner: Option<&Element>) -> Result<Option<SchurData>> {
    Block2x2::new(d.d1.clone(), d.d2.clone(), d.d3.clone(), d.d4.clone())?;
    let Some(cert) = certify(&d.d4, d4_inner)? else {
        return Ok(None);
    };
    let base = d.base();
    let (one, zero) = (base.one(), base.zero());
    let d4_plus = cert.reflexive;
    let e = &one - &(&d.d4 * &d4_plus);
    let f = &one - &(&d4_plus * &d.d4);
    let d3d4p = &d.d3 * &d4_plus;
    let s = &d.d1 - &(&d3d4p * &d.d2);
    let p = Block2x2::rows(one.clone(), d3d4p, zero.clone(), one.clone());
    let m = Block2x2::rows(s.clone(), &d.d3 * &f, &e * &d.d2, d.d4.clone());
    let q = Block2x2::rows(one.clone(), zero, &d4_plus * &d.d2, one);
    let pmq = &(&p * &m) * &q;
    invariant(pmq == *d, || format!("PMQ = {pmq} ≠ D = {d}"))?;
    Ok(Some(SchurData {
        d4_plus,
        e,
        f,
        s,
        p,
        m,
        q,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockVariant {
    /// `D` with a zero `(2,2)` entry.
    ZeroCorner,
    /// `d4` regular and `d3·f = 0`.
    General,
}

/// Intermediates of a block computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockData {
    pub variant: BlockVariant,
    /// `c^∥d2` (zero-corner variant) or `a^∥s` (general variant).
    pub along: Element,
    pub w: Option<Element>,
    pub t: Option<Element>,
    pub schur: Option<SchurData>,
    pub u: Element,
    pub u_inv: Element,
    pub alpha: Element,
    pub beta: Element,
    pub xi: Element,
    pub xi_inv: Option<Element>,
    pub x1: Option<Element>,
    pub x2: Option<Element>,
    pub mm_minus: Block2x2,
    /// `U = M·Q·A·P + I − M·M⁻`
    pub big_u: Block2x2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum BlockOutcome {
    Exists {
        result: Block2x2,
        data: Box<BlockData>,
    },
    /// `ξ` is not a unit.
    NotInvertible { data: Box<BlockData> },
    /// `D` is not regular (`w`, respectively `t`, is not regular).
    DNotRegular,
}

impl BlockOutcome {
    pub fn inverse(&self) -> Option<&Block2x2> {
        match self {
            BlockOutcome::Exists { result, .. } => Some(result),
            _ => None,
        }
    }

    pub fn data(&self) -> Option<&BlockData> {
        match self {
            BlockOutcome::Exists { data, .. } | BlockOutcome::NotInvertible { data } => Some(data),
            BlockOutcome::DNotRegular => None,
        }
    }
}

fn along_or_precondition(
    a: &Element,
    m: &Element,
    inner: Option<&Element>,
    what: &str,
) -> Result<Element> {
    match mary::inverse_along(a, m, inner)? {
        AlongOutcome::Exists(r) => Ok(r.b),
        _ => Err(Error::Precondition(format!("{what} does not exist"))),
    }
}

/// Checks `U = [1 0; α·u⁻¹ 1]·diag(u, ξ)·[1 κ; 0 1]` and returns
/// `U⁻¹ = [1 −κ; 0 1]·diag(u⁻¹, ξ⁻¹)·[1 0; −α·u⁻¹ 1]` when `ξ` is a unit.
fn schur_factor(
    big_u: &Block2x2,
    u: &Element,
    u_inv: &Element,
    alpha: &Element,
    xi: &Element,
    kappa: &Element,
) -> Result<Option<Block2x2>> {
    let base = u.ring();
    let (one, zero) = (base.one(), base.zero());
    let lower = Block2x2::rows(one.clone(), zero.clone(), alpha * u_inv, one.clone());
    let diag = Block2x2::rows(u.clone(), zero.clone(), zero.clone(), xi.clone());
    let upper = Block2x2::rows(one.clone(), kappa.clone(), zero.clone(), one.clone());
    let product = &(&lower * &diag) * &upper;
    invariant(product == *big_u, || {
        format!("Schur factorization {product} ≠ U = {big_u}")
    })?;
    let Some(xi_inv) = xi.try_invert() else {
        return Ok(None);
    };
    let upper_inv = Block2x2::rows(one.clone(), -kappa, zero.clone(), one.clone());
    let diag_inv = Block2x2::rows(u_inv.clone(), zero.clone(), zero.clone(), xi_inv);
    let lower_inv = Block2x2::rows(one.clone(), zero, -(alpha * u_inv), one);
    let u_big_inv = &(&upper_inv * &diag_inv) * &lower_inv;
    let identity = Block2x2::identity(base);
    invariant(
        &u_big_inv * big_u == identity && big_u * &u_big_inv == identity,
        || format!("{u_big_inv} does not invert U = {big_u}"),
    )?;
    Ok(Some(u_big_inv))
}

/// `A^∥D` for `D = [d1 d3; d2 0]` from the closed form, given that `d2`, `d3`
/// are regular and `c^∥d2` exists (precondition errors otherwise).
pub fn inverse_along_220_closed_form(
    a_mat: &Block2x2,
    d_mat: &Block2x2,
    choices: &InnerChoices,
) -> Result<BlockOutcome> {
    a_mat.same_base(d_mat)?;
    Block2x2::new(
        a_mat.d1.clone(),
        a_mat.d2.clone(),
        a_mat.d3.clone(),
        a_mat.d4.clone(),
    )?;
    Block2x2::new(
        d_mat.d1.clone(),
        d_mat.d2.clone(),
        d_mat.d3.clone(),
        d_mat.d4.clone(),
    )?;
    let Block2x2 {
        d1: a,
        d2: b,
        d3: c,
        d4: d,
    } = a_mat;
    let Block2x2 { d1, d2, d3, d4 } = d_mat;
    if !d4.is_zero() {
        return Err(Error::Precondition(format!("d4 = {d4} must be zero")));
    }
    let base = a.ring();
    let (one, zero) = (base.one(), base.zero());
    let d2_cert = require_regular(d2, "d2", choices.d2.as_ref())?;
    require_regular(d3, "d3", choices.d3.as_ref())?;
    let gamma = along_or_precondition(c, d2, Some(&d2_cert.inner), "c^∥d2")?;
    let d2_plus = &d2_cert.reflexive;

    let (w, mm_minus) = match lt_regular_inner_with(d2, d1, d3, choices)? {
        LtRegularity::Regular { w, mm_minus, .. } => (w, mm_minus),
        LtRegularity::NotRegular { .. } => return Ok(BlockOutcome::DNotRegular),
    };
    // MM⁻ = [d2d2⁺ 0; (1−ww⁻)(1−d3d3⁺)d1d2⁺ ...], so the (2,1) entry of I − MM⁻
    // and the (2,2) entry (1−ww⁻)(1−d3d3⁺) can be read off it.
    let id = Block2x2::identity(base);
    let complement = &id - &mm_minus;

    let u = &(&(d2 * c) + &one) - &(d2 * d2_plus);
    let u_inv = u
        .try_invert()
        .ok_or_else(|| Error::Invariant(format!("u = {u} is not a unit although c^∥d2 exists")))?;
    let alpha = &(&(d1 * c) + &(d3 * d)) + &complement.d2;
    let beta = &(&(d1 * a) + &(d3 * b)) + &complement.d4;
    let kappa = &gamma * a;
    let xi = &beta - &(&alpha * &kappa);

    let p = Block2x2::rows(zero.clone(), one.clone(), one.clone(), zero.clone());
    let m = Block2x2::rows(d2.clone(), zero.clone(), d1.clone(), d3.clone());
    let pm = &p * &m;
    invariant(pm == *d_mat, || format!("PMQ = {pm} ≠ D = {d_mat}"))?;
    let big_u = &(&(&(&m * a_mat) * &p) + &id) - &mm_minus;
    let expected_u = Block2x2::rows(u.clone(), d2 * a, alpha.clone(), beta.clone());
    invariant(big_u == expected_u, || {
        format!("U = {big_u} ≠ [u d2a; α β] = {expected_u}")
    })?;

    let factored = schur_factor(&big_u, &u, &u_inv, &alpha, &xi, &kappa)?;
    let mut data = BlockData {
        variant: BlockVariant::ZeroCorner,
        along: gamma.clone(),
        w: Some(w),
        t: None,
        schur: None,
        u,
        u_inv,
        alpha: alpha.clone(),
        beta,
        xi: xi.clone(),
        xi_inv: None,
        x1: None,
        x2: None,
        mm_minus,
        big_u,
    };
    let Some(u_big_inv) = factored else {
        return Ok(BlockOutcome::NotInvertible {
            data: Box::new(data),
        });
    };
    let xi_inv = xi.try_invert().expect("checked by schur_factor");
    let top = &xi_inv * &(d1 - &(&alpha * &gamma));
    let result = Block2x2::rows(
        top.clone(),
        &xi_inv * d3,
        &gamma * &(&one - &(a * &top)),
        -&(&(&(&gamma * a) * &xi_inv) * d3),
    );
    let via_u = &(&p * &u_big_inv) * &m;
    invariant(result == via_u, || {
        format!("closed form {result} ≠ P·U⁻¹·M = {via_u}")
    })?;
    data.xi_inv = Some(xi_inv);
    Ok(BlockOutcome::Exists {
        result,
        data: Box::new(data),
    })
}

/// `A^∥D` for `d4` regular and `d3·f = 0` from the closed form, given that
/// `a^∥s` exists (precondition errors otherwise).
pub fn inverse_along_general_closed_form(
    a_mat: &Block2x2,
    d_mat: &Block2x2,
    choices: &InnerChoices,
) -> Result<BlockOutcome> {
    a_mat.same_base(d_mat)?;
    Block2x2::new(
        a_mat.d1.clone(),
        a_mat.d2.clone(),
        a_mat.d3.clone(),
        a_mat.d4.clone(),
    )?;
    let Block2x2 {
        d1: a,
        d2: b,
        d3: c,
        d4: d,
    } = a_mat;
    let Block2x2 { d2, d3, d4, .. } = d_mat;
    let base = a.ring();
    let one = base.one();
    let schur = schur_decompose_with(d_mat, choices.d4.as_ref())?
        .ok_or_else(|| Error::Precondition(format!("d4 = {d4} is not regular")))?;
    let SchurData {
        d4_plus,
        e,
        f,
        s,
        p,
        m,
        q,
    } = &schur;
    if !(d3 * f).is_zero() {
        return Err(Error::Precondition(format!(
            "d3·f = {} is not zero",
            d3 * f
        )));
    }
    let s_cert = require_regular(s, "s", choices.s.as_ref())?;
    let gamma = along_or_precondition(a, s, Some(&s_cert.inner), "a^∥s")?;
    let s_plus = &s_cert.reflexive;

    let ed2 = e * d2;
    let t = &ed2 * &(&one - &(s_plus * s));
    let Some(t_cert) = certify(&t, choices.t.as_ref())? else {
        return Ok(BlockOutcome::DNotRegular);
    };
    let g_t = &one - &(&t * &t_cert.inner);
    let id = Block2x2::identity(base);
    let complement = Block2x2::rows(
        &one - &(s * s_plus),
        base.zero(),
        -&(&(&g_t * &ed2) * s_plus),
        &g_t * e,
    );
    let mm_minus = &id - &complement;
    invariant(&mm_minus * m == *m, || format!("MM⁻·M ≠ M for M = {m}"))?;
    invariant(&mm_minus * &mm_minus == mm_minus, || {
        format!("MM⁻ = {mm_minus} is not idempotent")
    })?;

    let d3d4p = d3 * d4_plus;
    let u = &(&(s * a) + &one) - &(s * s_plus);
    let u_inv = u
        .try_invert()
        .ok_or_else(|| Error::Invariant(format!("u = {u} is not a unit although a^∥s exists")))?;
    let lower_left = &(d2 * a) + &(d4 * b);
    let alpha = &lower_left + &complement.d2;
    let beta = &(&(&(&lower_left * &d3d4p) + &(d2 * c)) + &(d4 * d)) + &complement.d4;
    let top_right_factor = &(a * &d3d4p) + c;
    let kappa = &gamma * &top_right_factor;
    let xi = &beta - &(&alpha * &kappa);

    let big_u = &(&(&(&(m * q) * a_mat) * p) + &id) - &mm_minus;
    let expected_u = Block2x2::rows(
        u.clone(),
        s * &top_right_factor,
        alpha.clone(),
        beta.clone(),
    );
    invariant(big_u == expected_u, || {
        format!("U = {big_u} ≠ [u s(ad3d4⁺+c); α β] = {expected_u}")
    })?;

    let factored = schur_factor(&big_u, &u, &u_inv, &alpha, &xi, &kappa)?;
    let mut data = BlockData {
        variant: BlockVariant::General,
        along: gamma.clone(),
        w: None,
        t: Some(t),
        schur: Some(schur.clone()),
        u,
        u_inv: u_inv.clone(),
        alpha: alpha.clone(),
        beta,
        xi: xi.clone(),
        xi_inv: None,
        x1: None,
        x2: None,
        mm_minus,
        big_u,
    };
    let Some(u_big_inv) = factored else {
        return Ok(BlockOutcome::NotInvertible {
            data: Box::new(data),
        });
    };
    let xi_inv = xi.try_invert().expect("checked by schur_factor");
    let x1 = &(&(&(&one - &(&gamma * a)) * &d3d4p) - &(&gamma * c)) * &xi_inv;
    let x2 = &u_inv - &(&(&x1 * &alpha) * &u_inv);
    let result = Block2x2::rows(
        &(&x1 * d2) + &(&x2 * s),
        &x1 * d4,
        &xi_inv * &(d2 - &(&alpha * &gamma)),
        &xi_inv * d4,
    );
    let via_u = &(&(p * &u_big_inv) * m) * q;
    invariant(result == via_u, || {
        format!("closed form {result} ≠ P·U⁻¹·M·Q = {via_u}")
    })?;
    data.xi_inv = Some(xi_inv);
    data.x1 = Some(x1);
    data.x2 = Some(x2);
    Ok(BlockOutcome::Exists {
        result,
        data: Box::new(data),
    })
}

/// `A^∥D` computed directly in the flattened `2×2` matrix ring, or `None`
/// when that ring supports neither scanning nor elimination.
pub fn flattened_inverse_along(a_mat: &Block2x2, d_mat: &Block2x2) -> Result<Option<AlongOutcome>> {
    match mary::inverse_along(&a_mat.to_element(), &d_mat.to_element(), None) {
        Ok(out) => Ok(Some(out)),
        Err(Error::Unsupported { .. } | Error::Infinite { .. } | Error::BoundExceeded { .. }) => {
            Ok(None)
        }
        Err(err) => Err(err),
    }
}

fn cross_check(a_mat: &Block2x2, d_mat: &Block2x2, outcome: &BlockOutcome) -> Result<()> {
    let Some(flat) = flattened_inverse_along(a_mat, d_mat)? else {
        return Ok(());
    };
    let closed = outcome.inverse().map(Block2x2::to_element);
    let agree = match outcome {
        BlockOutcome::DNotRegular => matches!(flat, AlongOutcome::NotRegular { .. }),
        _ => flat.inverse() == closed.as_ref(),
    };
    invariant(agree, || {
        format!(
            "A = {a_mat}, D = {d_mat}: closed form gives {}, flattened ring gives {}",
            closed.map_or("none".to_string(), |c| c.to_string()),
            flat.inverse().map_or("none".to_string(), |c| c.to_string())
        )
    })
}

/// [`inverse_along_220_closed_form`] with canonical inner inverses, checked
/// against the flattened ring.
pub fn inverse_along_220(a_mat: &Block2x2, d_mat: &Block2x2) -> Result<BlockOutcome> {
    let outcome = inverse_along_220_closed_form(a_mat, d_mat, &InnerChoices::default())?;
    cross_check(a_mat, d_mat, &outcome)?;
    Ok(outcome)
}

/// [`inverse_along_general_closed_form`] with canonical inner inverses,
/// checked against the flattened ring.
pub fn inverse_along_general(a_mat: &Block2x2, d_mat: &Block2x2) -> Result<BlockOutcome> {
    let outcome = inverse_along_general_closed_form(a_mat, d_mat, &InnerChoices::default())?;
    cross_check(a_mat, d_mat, &outcome)?;
    Ok(outcome)
}

/// Special cases of the general closed form with simplified intermediates.
pub mod regimes {
    use super::*;

    /// `d4` a unit, so `e = f = 0` and `s = d1 − d3·d4⁻¹·d2`. `Ok(None)` when
    /// `ξ` is not a unit.
    pub fn d4_invertible(a_mat: &Block2x2, d_mat: &Block2x2) -> Result<Option<Block2x2>> {
        a_mat.same_base(d_mat)?;
        let Block2x2 {
            d1: a,
            d2: b,
            d3: c,
            d4: d,
        } = a_mat;
        let Block2x2 { d1, d2, d3, d4 } = d_mat;
        let one = a.ring().one();
        let d4_inv = d4
            .try_invert()
            .ok_or_else(|| Error::Precondition(format!("d4 = {d4} is not a unit")))?;
        let d3d4i = d3 * &d4_inv;
        let s = d1 - &(&d3d4i * d2);
        let s_plus = require_regular(&s, "s", None)?.reflexive;
        let gamma = along_or_precondition(a, &s, None, "a^∥s")?;
        let u_inv = (&(&(&s * a) + &one) - &(&s * &s_plus))
            .try_invert()
            .expect("a^∥s exists");
        let alpha = &(d2 * a) + &(d4 * b);
        let beta = &(&(&alpha * &d3d4i) + &(d2 * c)) + &(d4 * d);
        let xi = &beta - &(&(&alpha * &gamma) * &(&(a * &d3d4i) + c));
        let Some(xi_inv) = xi.try_invert() else {
            return Ok(None);
        };
        Ok(Some(assemble(
            &one, a, c, d2, d4, &s, &gamma, &u_inv, &alpha, &xi_inv, &d3d4i,
        )))
    }

    /// `d3 = 0`, so `s = d1` and `P = I`. `Ok(None)` when `ξ` is not a unit
    /// or `D` is not regular.
    ///
    /// The top-left entry is `γ − γ·c·ξ⁻¹·(d2 − α·γ)` with `γ = a^∥d1`; the
    /// correction term vanishes only in special cases such as `c = 0`.
    pub fn lower_triangular(a_mat: &Block2x2, d_mat: &Block2x2) -> Result<Option<Block2x2>> {
        a_mat.same_base(d_mat)?;
        let Block2x2 {
            d1: a,
            d2: b,
            d3: c,
            d4: d,
        } = a_mat;
        let Block2x2 { d1, d2, d3, d4 } = d_mat;
        if !d3.is_zero() {
            return Err(Error::Precondition(format!("d3 = {d3} must be zero")));
        }
        let one = a.ring().one();
        let d4_plus = require_regular(d4, "d4", None)?.reflexive;
        let d1_plus = require_regular(d1, "d1", None)?.reflexive;
        let gamma = along_or_precondition(a, d1, None, "a^∥d1")?;
        let e = &one - &(d4 * &d4_plus);
        let ed2 = &e * d2;
        let t = &ed2 * &(&one - &(&d1_plus * d1));
        let Some(t_cert) = regularity::inner_inverse(&t)? else {
            return Ok(None);
        };
        let g_t = &one - &(&t * &t_cert.inner);
        let alpha = &(&(d2 * a) + &(d4 * b)) - &(&(&g_t * &ed2) * &d1_plus);
        let beta = &(&(d2 * c) + &(d4 * d)) + &(&g_t * &e);
        let xi = &beta - &(&(&alpha * &gamma) * c);
        let Some(xi_inv) = xi.try_invert() else {
            return Ok(None);
        };
        let bottom_left = &xi_inv * &(d2 - &(&alpha * &gamma));
        let gc_xi = &(&gamma * c) * &xi_inv;
        Ok(Some(Block2x2::rows(
            &gamma - &(&gc_xi * &(d2 - &(&alpha * &gamma))),
            -&(&gc_xi * d4),
            bottom_left,
            &xi_inv * d4,
        )))
    }

    /// `e·d2 = 0` and `d3·f = 0`, so `t = 0`. `Ok(None)` when `ξ` is not a
    /// unit.
    pub fn ed2_zero(a_mat: &Block2x2, d_mat: &Block2x2) -> Result<Option<Block2x2>> {
        a_mat.same_base(d_mat)?;
        let Block2x2 {
            d1: a,
            d2: b,
            d3: c,
            d4: d,
        } = a_mat;
        let Block2x2 { d1, d2, d3, d4 } = d_mat;
        let one = a.ring().one();
        let d4_plus = require_regular(d4, "d4", None)?.reflexive;
        let e = &one - &(d4 * &d4_plus);
        let f = &one - &(&d4_plus * d4);
        if !(&e * d2).is_zero() || !(d3 * &f).is_zero() {
            return Err(Error::Precondition(
                "e·d2 and d3·f must both be zero".into(),
            ));
        }
        let d3d4p = d3 * &d4_plus;
        let s = d1 - &(&d3d4p * d2);
        let s_plus = require_regular(&s, "s", None)?.reflexive;
        let gamma = along_or_precondition(a, &s, None, "a^∥s")?;
        let u_inv = (&(&(&s * a) + &one) - &(&s * &s_plus))
            .try_invert()
            .expect("a^∥s exists");
        let alpha = &(d2 * a) + &(d4 * b);
        let beta = &(&(&(&alpha * &d3d4p) + &(d2 * c)) + &(d4 * d)) + &e;
        let xi = &beta - &(&(&alpha * &gamma) * &(&(a * &d3d4p) + c));
        let Some(xi_inv) = xi.try_invert() else {
            return Ok(None);
        };
        Ok(Some(assemble(
            &one, a, c, d2, d4, &s, &gamma, &u_inv, &alpha, &xi_inv, &d3d4p,
        )))
    }

    /// `[x1·d2 + x2·s, x1·d4; ξ⁻¹(d2 − α·γ), ξ⁻¹·d4]` with
    /// `x1 = [(1 − γ·a)·d3d4⁺ − γ·c]·ξ⁻¹` and `x2 = u⁻¹ − x1·α·u⁻¹`.
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        one: &Element,
        a: &Element,
        c: &Element,
        d2: &Element,
        d4: &Element,
        s: &Element,
        gamma: &Element,
        u_inv: &Element,
        alpha: &Element,
        xi_inv: &Element,
        d3d4p: &Element,
    ) -> Block2x2 {
        let x1 = &(&(&(one - &(gamma * a)) * d3d4p) - &(gamma * c)) * xi_inv;
        let x2 = u_inv - &(&(&x1 * alpha) * u_inv);
        Block2x2::rows(
            &(&x1 * d2) + &(&x2 * s),
            &x1 * d4,
            xi_inv * &(d2 - &(alpha * gamma)),
            xi_inv * d4,
        )
    }
}
