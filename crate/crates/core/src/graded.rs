//! Index parities, graded tensor products and the operators `P` and `θ`.
//!
//! Basis vectors `v_1..v_m` are even and `v_{m+1}..v_{m+n}` are odd.
//! Public index arguments are 1-based; internal matrix indices are
//! 0-based. An order-2 index `(α, β)` sits at `(α-1)(m+n) + (β-1)`.
//!
//! A matrix unit `E^i_j` maps `v_j` to `v_i` (row `i`, column `j`).
//! The graded tensor product of operators acts by
//! `(a ⊗ b)(v_x ⊗ v_y) = (-1)^{[b][x]} a v_x ⊗ b v_y`, which gives the
//! multiplication rule `(a⊗b)(c⊗d) = (-1)^{[b][c]} ac ⊗ bd`.

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::matrix::{Matrix, Ring};
use serde::{Deserialize, Serialize};

/// Element of Z₂, stored as 0 or 1.
pub type Parity = u8;

pub fn sign(p: u32) -> i64 {
    if p.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedDims {
    pub m: usize,
    pub n: usize,
}

impl GradedDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m + n == 0 {
            return Err(Error::InvalidDims("m + n must be at least 1".into()));
        }
        Ok(GradedDims { m, n })
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    /// Parity of the 1-based index `i`.
    pub fn parity(&self, i: usize) -> Result<Parity> {
        if i == 0 || i > self.dim() {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim() });
        }
        Ok(u8::from(i > self.m))
    }

    /// Parities of all basis vectors, 0-based.
    pub fn parities(&self) -> Vec<Parity> {
        (0..self.dim()).map(|k| u8::from(k >= self.m)).collect()
    }

    /// Parities of the order-`k` tensor power basis.
    pub fn tensor_parities(&self, order: usize) -> Vec<Parity> {
        (1..order).fold(self.parities(), |acc, _| tensor_parities(&acc, &self.parities()))
    }

    /// 0-based position of the 1-based pair `(α, β)`.
    pub fn pair_index(&self, a: usize, b: usize) -> usize {
        (a - 1) * self.dim() + (b - 1)
    }
}

/// Parities of `A ⊗ B` in row-major pair order.
pub fn tensor_parities(pa: &[Parity], pb: &[Parity]) -> Vec<Parity> {
    pa.iter().flat_map(|&x| pb.iter().map(move |&y| (x + y) % 2)).collect()
}

/// Even part of `m`: entries `(i, j)` with `[i] + [j] = 0`.
pub fn even_part<T: Ring>(m: &Matrix<T>, p: &[Parity]) -> Matrix<T> {
    Matrix::from_fn(m.n(), |i, j| if (p[i] + p[j]).is_multiple_of(2) { m.get(i, j).clone() } else { T::zero() })
}

/// Odd part of `m`.
pub fn odd_part<T: Ring>(m: &Matrix<T>, p: &[Parity]) -> Matrix<T> {
    Matrix::from_fn(m.n(), |i, j| if (p[i] + p[j]) % 2 == 1 { m.get(i, j).clone() } else { T::zero() })
}

/// Weight-conservation filter: `m` maps even vectors to even ones.
pub fn is_even<T: Ring>(m: &Matrix<T>, p: &[Parity]) -> bool {
    m.nonzeros().all(|(i, j, _)| (p[i] + p[j]).is_multiple_of(2))
}

/// Graded tensor product of operators on spaces with parities `pa`, `pb`.
///
/// `b` is split into homogeneous parts, each contributing
/// `(-1)^{[b_h][x]}` on the column index `x` of `a`.
pub fn graded_kron_spaces<T: Ring>(a: &Matrix<T>, pa: &[Parity], b: &Matrix<T>, pb: &[Parity]) -> Matrix<T> {
    graded_kron_with(a, pa, b, pb, true)
}

/// As [`graded_kron_spaces`], with the Koszul signs optionally dropped.
/// The sign-free variant exists only for negative controls.
pub fn graded_kron_with<T: Ring>(a: &Matrix<T>, pa: &[Parity], b: &Matrix<T>, pb: &[Parity], signs: bool) -> Matrix<T> {
    let (na, nb) = (a.n(), b.n());
    assert_eq!(pa.len(), na, "parity vector length");
    assert_eq!(pb.len(), nb, "parity vector length");
    let mut out = Matrix::zeros(na * nb);
    for (h, part) in [(0u8, even_part(b, pb)), (1u8, odd_part(b, pb))] {
        for (x2, x, ax) in a.nonzeros() {
            let neg = signs && h * pa[x] == 1;
            for (y2, y, by) in part.nonzeros() {
                let v = ax.mul(by);
                let v = if neg { v.neg() } else { v };
                let e: &mut T = out.entry_mut(x2 * nb + y2, x * nb + y);
                *e = e.add(&v);
            }
        }
    }
    out
}

/// Square matrix with parity-labelled indices on the `order`-th tensor
/// power of `V`.
#[derive(Clone, Debug)]
pub struct GradedMatrix<T> {
    dims: GradedDims,
    order: usize,
    mat: Matrix<T>,
}

impl<T: Ring> PartialEq for GradedMatrix<T> {
    fn eq(&self, o: &Self) -> bool {
        self.dims == o.dims && self.order == o.order && self.mat == o.mat
    }
}

impl<T: Ring> GradedMatrix<T> {
    pub fn new(dims: GradedDims, order: usize, mat: Matrix<T>) -> Result<Self> {
        if order == 0 || mat.n() != dims.dim().pow(order as u32) {
            return Err(Error::DimsMismatch(format!(
                "side {} is not ({})^{}",
                mat.n(),
                dims.dim(),
                order
            )));
        }
        Ok(GradedMatrix { dims, order, mat })
    }

    pub fn dims(&self) -> GradedDims {
        self.dims
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.mat
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.dims.tensor_parities(self.order)
    }

    /// Parity of a homogeneous matrix; `None` if mixed or zero.
    pub fn homogeneous_parity(&self) -> Option<Parity> {
        let p = self.parities();
        let mut it = self.mat.nonzeros().map(|(i, j, _)| (p[i] + p[j]) % 2);
        let first = it.next()?;
        it.all(|q| q == first).then_some(first)
    }

    pub fn is_weight_conserving(&self) -> bool {
        is_even(&self.mat, &self.parities())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(GradedMatrix { dims: self.dims, order: self.order, mat: self.mat.mul(&o.mat) })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(GradedMatrix { dims: self.dims, order: self.order, mat: self.mat.add(&o.mat) })
    }

    pub fn scale(&self, s: &T) -> Self {
        GradedMatrix { dims: self.dims, order: self.order, mat: self.mat.scale(s) }
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.dims != o.dims || self.order != o.order {
            return Err(Error::DimsMismatch("operands live on different spaces".into()));
        }
        Ok(())
    }
}

/// Graded tensor product of two order-1 matrices.
pub fn graded_kron<T: Ring>(a: &GradedMatrix<T>, b: &GradedMatrix<T>) -> Result<GradedMatrix<T>> {
    if a.dims != b.dims {
        return Err(Error::DimsMismatch("graded_kron operands have different dims".into()));
    }
    if a.order != 1 || b.order != 1 {
        return Err(Error::DimsMismatch("graded_kron expects order-1 operands".into()));
    }
    let p = a.dims.parities();
    GradedMatrix::new(a.dims, 2, graded_kron_spaces(&a.mat, &p, &b.mat, &p))
}

/// Matrix unit `E^i_j` (1-based), mapping `v_j` to `v_i`.
pub fn matrix_unit(dims: GradedDims, i: usize, j: usize) -> Result<GradedMatrix<Rat>> {
    dims.parity(i)?;
    dims.parity(j)?;
    let mut m = Matrix::zeros(dims.dim());
    m.set(i - 1, j - 1, Rat::from_integer(1.into()));
    GradedMatrix::new(dims, 1, m)
}

/// Graded permutation `P(v_α ⊗ v_β) = (-1)^{[α][β]} v_β ⊗ v_α`.
pub fn permutation_op(dims: GradedDims) -> GradedMatrix<Rat> {
    GradedMatrix { dims, order: 2, mat: permutation_matrix(&dims.parities()) }
}

/// Graded permutation on `W ⊗ W` for a space with parities `p`.
pub fn permutation_matrix<T: Ring>(p: &[Parity]) -> Matrix<T> {
    let d = p.len();
    let mut m = Matrix::zeros(d * d);
    for a in 0..d {
        for b in 0..d {
            let s = sign(u32::from(p[a] * p[b]));
            m.set(b * d + a, a * d + b, T::from_rat(&Rat::from_integer(s.into())));
        }
    }
    m
}

/// `θ = diag((-1)^{[α][β]})` on `V ⊗ V`.
pub fn theta_op(dims: GradedDims) -> GradedMatrix<Rat> {
    GradedMatrix { dims, order: 2, mat: theta_matrix(&dims.parities()) }
}

pub fn theta_matrix<T: Ring>(p: &[Parity]) -> Matrix<T> {
    let d = p.len();
    Matrix::diagonal(
        (0..d * d)
            .map(|k| T::from_rat(&Rat::from_integer(sign(u32::from(p[k / d] * p[k % d])).into())))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::matrix::Mat;

    fn gl(m: usize, n: usize) -> GradedDims {
        GradedDims::new(m, n).unwrap()
    }

    /// Oracle: act on basis vectors with the sign `(-1)^{[b][x]}`.
    fn basis_action(d: GradedDims, a: &Mat, b: &Mat) -> Mat {
        let p = d.parities();
        let n = d.dim();
        let mut out = Mat::zeros(n * n);
        for x in 0..n {
            for y in 0..n {
                for x2 in 0..n {
                    for y2 in 0..n {
                        let c = a.get(x2, x) * b.get(y2, y);
                        if c == int(0) {
                            continue;
                        }
                        let pb = (p[y2] + p[y]) % 2;
                        let s = int(sign(u32::from(pb * p[x])));
                        out.set(x2 * n + y2, x * n + y, c * s);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn parity_examples() {
        assert_eq!(gl(2, 1).parity(1).unwrap(), 0);
        assert_eq!(gl(2, 1).parity(3).unwrap(), 1);
        assert_eq!(gl(1, 1).parity(2).unwrap(), 1);
        assert!(gl(2, 1).parity(4).is_err());
        assert!(gl(2, 1).parity(0).is_err());
        assert!(GradedDims::new(0, 0).is_err());
    }

    #[test]
    fn identity_kron() {
        let d = gl(2, 1);
        let i = GradedMatrix::new(d, 1, Mat::identity(3)).unwrap();
        assert!(graded_kron(&i, &i).unwrap().matrix().is_identity());
    }

    #[test]
    fn gl11_unit_product_sign() {
        let d = gl(1, 1);
        let e21 = matrix_unit(d, 2, 1).unwrap();
        let e12 = matrix_unit(d, 1, 2).unwrap();
        let e22 = matrix_unit(d, 2, 2).unwrap();
        let lhs = graded_kron(&e21, &e21).unwrap().mul(&graded_kron(&e12, &e12).unwrap()).unwrap();
        let rhs = graded_kron(&e22, &e22).unwrap().scale(&int(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn permutation_from_units() {
        for (m, n) in [(1, 1), (2, 1), (1, 2)] {
            let d = gl(m, n);
            let mut acc = Mat::zeros(d.dim() * d.dim());
            for i in 1..=d.dim() {
                for j in 1..=d.dim() {
                    // With E^i_j = row i, column j the Koszul sign of the
                    // column index supplies (-1)^{[i]}.
                    let s = int(sign(u32::from(d.parity(i).unwrap())));
                    let t = graded_kron(&matrix_unit(d, j, i).unwrap(), &matrix_unit(d, i, j).unwrap()).unwrap();
                    acc = acc.add(&t.matrix().scale(&s));
                }
            }
            assert_eq!(&acc, permutation_op(d).matrix());
        }
    }

    #[test]
    fn permutation_examples() {
        let d = gl(1, 1);
        let p = permutation_op(d);
        // P(v2⊗v2) = -v2⊗v2, P(v1⊗v2) = v2⊗v1.
        assert_eq!(p.matrix().get(3, 3), &int(-1));
        assert_eq!(p.matrix().get(2, 1), &int(1));
        for (m, n) in [(1, 0), (0, 2), (1, 1), (2, 1), (2, 2), (3, 2), (1, 4)] {
            let p = permutation_op(gl(m, n));
            assert!(p.mul(&p).unwrap().matrix().is_identity());
            assert!(p.is_weight_conserving());
        }
    }

    #[test]
    fn theta_examples() {
        let t = theta_op(gl(1, 1));
        assert_eq!(t.matrix(), &Mat::diagonal(vec![int(1), int(1), int(1), int(-1)]));
        let t = theta_op(gl(2, 1));
        let negs: Vec<usize> = (0..9).filter(|&k| t.matrix().get(k, k) == &int(-1)).collect();
        assert_eq!(negs, vec![gl(2, 1).pair_index(3, 3)]);
        for (m, n) in [(1, 1), (2, 1), (2, 3), (0, 5)] {
            let t = theta_op(gl(m, n));
            assert!(t.mul(&t).unwrap().matrix().is_identity());
        }
    }

    #[test]
    fn composition_law_exhaustive() {
        for (m, n) in [(1, 1), (2, 1), (1, 2), (0, 2), (2, 0), (0, 3)] {
            let d = gl(m, n);
            let k = d.dim();
            let units: Vec<_> = (1..=k)
                .flat_map(|i| (1..=k).map(move |j| (i, j)))
                .map(|(i, j)| matrix_unit(d, i, j).unwrap())
                .collect();
            for a in &units {
                for b in &units {
                    let ab = graded_kron(a, b).unwrap();
                    assert_eq!(ab.matrix(), &basis_action(d, a.matrix(), b.matrix()));
                    for c in &units {
                        for e in &units {
                            let lhs = ab.mul(&graded_kron(c, e).unwrap()).unwrap();
                            let pb = b.homogeneous_parity().unwrap();
                            let pc = c.homogeneous_parity().unwrap();
                            let ac = a.mul(c).unwrap();
                            let be = b.mul(e).unwrap();
                            let rhs = graded_kron(&ac, &be).unwrap().scale(&int(sign(u32::from(pb * pc))));
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn non_homogeneous_split_matches_basis_action() {
        let d = gl(1, 1);
        let a = crate::matrix::mat_i(&[&[1, 2], &[3, 4]]);
        let b = crate::matrix::mat_i(&[&[5, 6], &[7, 8]]);
        let p = d.parities();
        assert_eq!(graded_kron_spaces(&a, &p, &b, &p), basis_action(d, &a, &b));
    }
}
