//! Dense matrices over a scalar ring.
//!
//! Matrix-ring elements, including nested ones, are flattened into a single
//! square matrix over the innermost scalar ring (`M_k(M_j(R)) ≅ M_kj(R)`),
//! processed here, and unflattened again.

use crate::ring::{Ring, RingKind, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Value>,
}

impl Mat {
    pub fn zeros(s: &Ring, rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![s.zero_value(); rows * cols],
        }
    }

    pub fn identity(s: &Ring, n: usize) -> Mat {
        let mut m = Mat::zeros(s, n, n);
        for i in 0..n {
            m.data[i * n + i] = s.one_value();
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Value {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Value) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Mat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, s: &Ring, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zeros(s, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = s.zero_value();
                for k in 0..self.cols {
                    acc = s.add_values(&acc, &s.mul_values(self.get(i, k), rhs.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn scale_row(&mut self, s: &Ring, row: usize, factor: &Value) {
        for j in 0..self.cols {
            let v = s.mul_values(factor, self.get(row, j));
            self.set(row, j, v);
        }
    }

    /// `row[target] -= factor · row[source]`
    fn sub_row(&mut self, s: &Ring, target: usize, source: usize, factor: &Value) {
        for j in 0..self.cols {
            let v = s.sub_values(
                self.get(target, j),
                &s.mul_values(factor, self.get(source, j)),
            );
            self.set(target, j, v);
        }
    }

    /// `col[target] -= col[source] · factor`
    fn sub_col(&mut self, s: &Ring, target: usize, source: usize, factor: &Value) {
        for i in 0..self.rows {
            let v = s.sub_values(
                self.get(i, target),
                &s.mul_values(self.get(i, source), factor),
            );
            self.set(i, target, v);
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Mat {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                data.push(self.get(i, j).clone());
            }
        }
        Mat {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }
}

pub(crate) fn flatten(ring: &Ring, value: &Value) -> Mat {
    match (ring.kind(), value) {
        (RingKind::Matrix { base, dim }, Value::Matrix(entries)) => {
            let bn = base.flat_dim();
            let n = dim * bn;
            let mut out = Mat::zeros(ring.scalar_ring(), n, n);
            for (idx, entry) in entries.iter().enumerate() {
                let (bi, bj) = (idx / dim, idx % dim);
                let block = flatten(base, entry);
                for i in 0..bn {
                    for j in 0..bn {
                        out.set(bi * bn + i, bj * bn + j, block.get(i, j).clone());
                    }
                }
            }
            out
        }
        _ => Mat {
            rows: 1,
            cols: 1,
            data: vec![value.clone()],
        },
    }
}

pub(crate) fn unflatten(ring: &Ring, m: &Mat) -> Value {
    match ring.kind() {
        RingKind::Matrix { base, dim } => {
            let bn = base.flat_dim();
            let mut entries = Vec::with_capacity(dim * dim);
            for bi in 0..*dim {
                for bj in 0..*dim {
                    let mut block = Mat::zeros(ring.scalar_ring(), bn, bn);
                    for i in 0..bn {
                        for j in 0..bn {
                            block.set(i, j, m.get(bi * bn + i, bj * bn + j).clone());
                        }
                    }
                    entries.push(unflatten(base, &block));
                }
            }
            Value::Matrix(entries.into_boxed_slice())
        }
        _ => m.data[0].clone(),
    }
}

/// Inverse of a square matrix over `s`: elimination over fields, determinant
/// and adjugate otherwise.
pub(crate) fn invert(s: &Ring, m: &Mat) -> Option<Mat> {
    if s.is_field() {
        invert_by_elimination(s, m)
    } else {
        let det = determinant(s, m);
        let det_inv = s.scalar_inverse(&det)?;
        let mut adj = adjugate(s, m);
        for v in adj.data.iter_mut() {
            *v = s.mul_values(&det_inv, v);
        }
        Some(adj)
    }
}

fn invert_by_elimination(s: &Ring, m: &Mat) -> Option<Mat> {
    let n = m.rows;
    let mut work = m.clone();
    let mut inv = Mat::identity(s, n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !s.is_zero_value(work.get(r, col)))?;
        work.swap_rows(col, pivot);
        inv.swap_rows(col, pivot);
        let scale = s
            .scalar_inverse(work.get(col, col))
            .expect("nonzero field element");
        work.scale_row(s, col, &scale);
        inv.scale_row(s, col, &scale);
        for r in 0..n {
            if r != col && !s.is_zero_value(work.get(r, col)) {
                let factor = work.get(r, col).clone();
                work.sub_row(s, r, col, &factor);
                inv.sub_row(s, r, col, &factor);
            }
        }
    }
    Some(inv)
}

/// Determinant over `Z:n` by Euclidean row reduction: only unimodular row
/// operations are used, so no division by non-units occurs.
pub(crate) fn determinant(s: &Ring, m: &Mat) -> Value {
    let modulus = match s.kind() {
        RingKind::ModularInt(n) | RingKind::PrimeField(n) => *n,
        _ => unreachable!("euclidean determinant needs a modular scalar ring"),
    };
    let n = m.rows;
    let res = |v: &Value| match v {
        Value::Residue(r) => *r,
        _ => unreachable!(),
    };
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| res(m.get(i, j))).collect())
        .collect();
    let mut negate = false;
    for col in 0..n {
        for row in col + 1..n {
            while a[row][col] != 0 {
                let t = a[col][col] / a[row][col];
                let (upper, lower) = a.split_at_mut(row);
                for (x, &y) in upper[col][col..].iter_mut().zip(&lower[0][col..]) {
                    let sub = (t as u128 * y as u128 % modulus as u128) as u64;
                    *x = (*x + modulus - sub) % modulus;
                }
                a.swap(col, row);
                negate = !negate;
            }
        }
    }
    let mut det = Value::Residue(1 % modulus);
    for (i, row) in a.iter().enumerate() {
        det = s.mul_values(&det, &Value::Residue(row[i]));
    }
    if negate {
        s.neg_value(&det)
    } else {
        det
    }
}

fn adjugate(s: &Ring, m: &Mat) -> Mat {
    let n = m.rows;
    if n == 1 {
        return Mat::identity(s, 1);
    }
    let mut adj = Mat::zeros(s, n, n);
    for i in 0..n {
        for j in 0..n {
            let cofactor = determinant(s, &m.minor(i, j));
            let signed = if (i + j) % 2 == 0 {
                cofactor
            } else {
                s.neg_value(&cofactor)
            };
            adj.set(j, i, signed);
        }
    }
    adj
}

/// Invertible `P`, `Q` with `P·A·Q = diag(I_r, 0)`, plus the rank `r`.
/// Pivots are chosen first in row-major order, so the output is canonical.
pub(crate) fn rank_normal_form(s: &Ring, a: &Mat) -> (Mat, Mat, usize) {
    let mut work = a.clone();
    let mut p = Mat::identity(s, a.rows);
    let mut q = Mat::identity(s, a.cols);
    let mut rank = 0;
    while rank < a.rows.min(a.cols) {
        let pivot = (rank..a.rows)
            .flat_map(|i| (rank..a.cols).map(move |j| (i, j)))
            .find(|&(i, j)| !s.is_zero_value(work.get(i, j)));
        let Some((pi, pj)) = pivot else { break };
        work.swap_rows(rank, pi);
        p.swap_rows(rank, pi);
        work.swap_cols(rank, pj);
        q.swap_cols(rank, pj);
        let scale = s
            .scalar_inverse(work.get(rank, rank))
            .expect("nonzero field element");
        work.scale_row(s, rank, &scale);
        p.scale_row(s, rank, &scale);
        for r in 0..a.rows {
            if r != rank && !s.is_zero_value(work.get(r, rank)) {
                let factor = work.get(r, rank).clone();
                work.sub_row(s, r, rank, &factor);
                p.sub_row(s, r, rank, &factor);
            }
        }
        for c in rank + 1..a.cols {
            if !s.is_zero_value(work.get(rank, c)) {
                let factor = work.get(rank, c).clone();
                work.sub_col(s, c, rank, &factor);
                q.sub_col(s, c, rank, &factor);
            }
        }
        rank += 1;
    }
    (p, q, rank)
}

/// `A⁻ = Q·diag(I_r, 0)·P` from the rank normal form.
pub(crate) fn field_inner_inverse(s: &Ring, a: &Mat) -> Mat {
    let (p, q, rank) = rank_normal_form(s, a);
    let mut middle = Mat::zeros(s, a.cols, a.rows);
    for i in 0..rank {
        middle.set(i, i, s.one_value());
    }
    q.mul(s, &middle).mul(s, &p)
}

/// Some `X` with `B·X = A` over a field, free variables set to zero.
pub(crate) fn solve_right(s: &Ring, b: &Mat, a: &Mat) -> Option<Mat> {
    assert_eq!(b.rows, a.rows);
    let (m, n, k) = (b.rows, b.cols, a.cols);
    let mut aug = Mat::zeros(s, m, n + k);
    for i in 0..m {
        for j in 0..n {
            aug.set(i, j, b.get(i, j).clone());
        }
        for j in 0..k {
            aug.set(i, n + j, a.get(i, j).clone());
        }
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(pivot) = (row..m).find(|&r| !s.is_zero_value(aug.get(r, col))) else {
            continue;
        };
        aug.swap_rows(row, pivot);
        let scale = s
            .scalar_inverse(aug.get(row, col))
            .expect("nonzero field element");
        aug.scale_row(s, row, &scale);
        for r in 0..m {
            if r != row && !s.is_zero_value(aug.get(r, col)) {
                let factor = aug.get(r, col).clone();
                aug.sub_row(s, r, row, &factor);
            }
        }
        pivots.push(col);
        row += 1;
    }
    for r in row..m {
        if (0..k).any(|j| !s.is_zero_value(aug.get(r, n + j))) {
            return None;
        }
    }
    let mut x = Mat::zeros(s, n, k);
    for (r, &col) in pivots.iter().enumerate() {
        for j in 0..k {
            x.set(col, j, aug.get(r, n + j).clone());
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::literal::parse_element;

    fn flat(ring: &Ring, lit: &str) -> Mat {
        flatten(ring, &parse_element(ring, lit).unwrap().value)
    }

    #[test]
    fn flatten_round_trip_nested() {
        let inner = Ring::matrix(&Ring::modular(3).unwrap(), 2).unwrap();
        let outer = Ring::matrix(&inner, 2).unwrap();
        let lit = "[[[[1,2],[0,1]],[[0,0],[2,2]]],[[[1,1],[1,1]],[[2,0],[0,2]]]]";
        let m = flat(&outer, lit);
        assert_eq!(m.rows, 4);
        // row 0 of the flat matrix: first rows of blocks (0,0) and (0,1)
        let row0: Vec<_> = (0..4).map(|j| m.get(0, j).clone()).collect();
        assert_eq!(
            row0,
            vec![
                Value::Residue(1),
                Value::Residue(2),
                Value::Residue(0),
                Value::Residue(0)
            ]
        );
        assert_eq!(outer.wrap(unflatten(&outer, &m)).to_string(), lit);
    }

    #[test]
    fn nested_multiplication_matches_flat_multiplication() {
        let inner = Ring::matrix(&Ring::modular(2).unwrap(), 2).unwrap();
        let outer = Ring::matrix(&inner, 2).unwrap();
        let s = outer.scalar_ring().clone();
        let a = parse_element(
            &outer,
            "[[[[1,1],[0,1]],[[0,1],[1,0]]],[[[1,0],[0,0]],[[1,1],[1,1]]]]",
        )
        .unwrap();
        let b = parse_element(
            &outer,
            "[[[[0,1],[1,1]],[[1,0],[0,1]]],[[[0,0],[1,0]],[[1,0],[1,1]]]]",
        )
        .unwrap();
        let nested = &a * &b;
        let via_flat = flatten(&outer, &a.value).mul(&s, &flatten(&outer, &b.value));
        assert_eq!(flatten(&outer, &nested.value), via_flat);
    }

    #[test]
    fn rank_normal_form_is_diagonal() {
        let ring = Ring::matrix(&Ring::prime_field(5).unwrap(), 3).unwrap();
        let s = ring.scalar_ring().clone();
        let a = flat(&ring, "[[1,2,3],[2,4,6],[0,1,4]]");
        let (p, q, r) = rank_normal_form(&s, &a);
        assert_eq!(r, 2);
        let d = p.mul(&s, &a).mul(&s, &q);
        let mut expected = Mat::zeros(&s, 3, 3);
        expected.set(0, 0, Value::Residue(1));
        expected.set(1, 1, Value::Residue(1));
        assert_eq!(d, expected);
        let g = field_inner_inverse(&s, &a);
        assert_eq!(a.mul(&s, &g).mul(&s, &a), a);
    }

    #[test]
    fn euclidean_determinant_mod_composite() {
        let ring = Ring::matrix(&Ring::modular(12).unwrap(), 3).unwrap();
        let s = ring.scalar_ring().clone();
        // integer determinant is 1*(5*9-6*8) - 2*(4*9-6*7) + 3*(4*8-5*7) = -3 + 12 - 9 = 0
        assert_eq!(
            determinant(&s, &flat(&ring, "[[1,2,3],[4,5,6],[7,8,9]]")),
            Value::Residue(0)
        );
        // integer determinant 2*3 - 1*1 = 5
        let ring2 = Ring::matrix(&Ring::modular(12).unwrap(), 2).unwrap();
        assert_eq!(
            determinant(&s, &flat(&ring2, "[[2,1],[1,3]]")),
            Value::Residue(5)
        );
        // integer determinant 0*0 - 1*1 = -1
        assert_eq!(
            determinant(&s, &flat(&ring2, "[[0,1],[1,0]]")),
            Value::Residue(11)
        );
    }

    #[test]
    fn solve_right_free_variables_zero() {
        let ring = Ring::matrix(&Ring::modular(2).unwrap(), 2).unwrap();
        let s = ring.scalar_ring().clone();
        let b = flat(&ring, "[[1,0],[0,0]]");
        let a = flat(&ring, "[[0,1],[0,0]]");
        let x = solve_right(&s, &b, &a).unwrap();
        assert_eq!(ring.wrap(unflatten(&ring, &x)).to_string(), "[[0,1],[0,0]]");
        let inconsistent = flat(&ring, "[[0,0],[1,0]]");
        assert!(solve_right(&s, &b, &inconsistent).is_none());
    }
}
