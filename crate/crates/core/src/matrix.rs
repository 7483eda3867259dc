//! Sparse square matrices over an exact ring.
//!
//! Products skip zero entries, which matters because every operator in
//! this engine is sparse (permutation-like plus diagonal).

use crate::exact::{Poly, Rat, RatFun};
use num_traits::{One, Zero};
use std::fmt;

/// Commutative ring with exact equality.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rat(r: &Rat) -> Self;
}

/// Ring in which nonzero elements are invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

impl Ring for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

impl Field for Rat {
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn from_rat(r: &Rat) -> Self {
        Poly::constant(r.clone())
    }
}

impl Ring for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFun::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFun::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFun::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFun::neg(self)
    }
    fn from_rat(r: &Rat) -> Self {
        RatFun::constant(r.clone())
    }
}

impl Field for RatFun {
    fn inv(&self) -> Option<Self> {
        RatFun::inv(self).ok()
    }
}

/// Square matrix stored as sorted sparse rows.
#[derive(Clone)]
pub struct Matrix<T> {
    n: usize,
    rows: Vec<Vec<(usize, T)>>,
    zero: T,
}

pub type Mat = Matrix<Rat>;

impl<T: Ring> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, rows: vec![Vec::new(); n], zero: T::zero() }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![T::one(); n])
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (j, f(i, j))).filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        Matrix { n, rows, zero: T::zero() }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        Matrix { n, rows, zero: T::zero() }
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let rows = d
            .into_iter()
            .enumerate()
            .map(|(i, x)| if x.is_zero() { Vec::new() } else { vec![(i, x)] })
            .collect();
        Matrix { n, rows, zero: T::zero() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "matrix index ({i}, {j}) out of range for size {}", self.n);
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        self.check(i, j);
        let row = &self.rows[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => &row[k].1,
            Err(_) => &self.zero,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.check(i, j);
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => {
                if x.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = x;
                }
            }
            Err(k) => {
                if !x.is_zero() {
                    row.insert(k, (j, x));
                }
            }
        }
    }

    /// Mutable access; may leave an explicit zero behind, which every
    /// other method ignores.
    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut T {
        self.check(i, j);
        let row = &mut self.rows[i];
        let k = match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => k,
            Err(k) => {
                row.insert(k, (j, T::zero()));
                k
            }
        };
        &mut row[k].1
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|(_, x)| x.is_zero()))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().filter(|(_, x)| !x.is_zero()).map(move |(j, x)| (i, *j, x)))
    }

    pub fn nnz(&self) -> usize {
        self.nonzeros().count()
    }

    fn merge(&self, o: &Self, f: impl Fn(Option<&T>, Option<&T>) -> T) -> Self {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len().max(b.len()));
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let (c, v) = match (a.get(i), b.get(j)) {
                        (Some((ca, x)), Some((cb, y))) if ca == cb => {
                            i += 1;
                            j += 1;
                            (*ca, f(Some(x), Some(y)))
                        }
                        (Some((ca, x)), Some((cb, _))) if ca < cb => {
                            i += 1;
                            (*ca, f(Some(x), None))
                        }
                        (Some((ca, x)), None) => {
                            i += 1;
                            (*ca, f(Some(x), None))
                        }
                        (_, Some((cb, y))) => {
                            j += 1;
                            (*cb, f(None, Some(y)))
                        }
                        (None, None) => unreachable!(),
                    };
                    if !v.is_zero() {
                        out.push((c, v));
                    }
                }
                out
            })
            .collect();
        Matrix { n: self.n, rows, zero: T::zero() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, |a, b| match (a, b) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => T::zero(),
        })
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, |a, b| match (a, b) {
            (Some(x), Some(y)) => x.sub(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.neg(),
            (None, None) => T::zero(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }

    pub fn sub_assign(&mut self, o: &Self) {
        *self = self.sub(o);
    }

    /// Applies a zero-preserving map to the nonzero entries.
    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(j, x)| (*j, f(x))).filter(|(_, y)| !y.is_zero()).collect())
            .collect();
        Matrix { n: self.n, rows, zero: U::zero() }
    }

    /// Fallible [`Matrix::map`].
    pub fn try_map<U: Ring, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        let mut rows = Vec::with_capacity(self.n);
        for r in &self.rows {
            let mut out = Vec::with_capacity(r.len());
            for (j, x) in r {
                let y = f(x)?;
                if !y.is_zero() {
                    out.push((*j, y));
                }
            }
            rows.push(out);
        }
        Ok(Matrix { n: self.n, rows, zero: U::zero() })
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        let n = self.n;
        let mut acc: Vec<Option<T>> = vec![None; n];
        let mut touched: Vec<usize> = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|ra| {
                for (k, a) in ra {
                    for (j, b) in &o.rows[*k] {
                        let t = a.mul(b);
                        match &mut acc[*j] {
                            Some(x) => *x = x.add(&t),
                            slot @ None => {
                                *slot = Some(t);
                                touched.push(*j);
                            }
                        }
                    }
                }
                touched.sort_unstable();
                let row: Vec<(usize, T)> = touched
                    .drain(..)
                    .filter_map(|j| acc[j].take().filter(|x| !x.is_zero()).map(|x| (j, x)))
                    .collect();
                row
            })
            .collect();
        Matrix { n, rows, zero: T::zero() }
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); self.n];
        for (i, j, x) in self.nonzeros() {
            rows[j].push((i, x.clone()));
        }
        Matrix { n: self.n, rows, zero: T::zero() }
    }

    /// Ordinary Kronecker product, `self` on the outer index.
    pub fn kron(&self, o: &Self) -> Self {
        let (a, b) = (self.n, o.n);
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); a * b];
        for (i, ri) in self.rows.iter().enumerate() {
            for (k, rk) in o.rows.iter().enumerate() {
                let row = &mut rows[i * b + k];
                for (j, x) in ri {
                    for (l, y) in rk {
                        let v = x.mul(y);
                        if !v.is_zero() {
                            row.push((j * b + l, v));
                        }
                    }
                }
            }
        }
        Matrix { n: a * b, rows, zero: T::zero() }
    }

    /// The `size x size` block at block position `(bi, bj)`.
    pub fn block(&self, bi: usize, bj: usize, size: usize) -> Self {
        let (lo, hi) = (bj * size, (bj + 1) * size);
        let rows = (0..size)
            .map(|i| {
                self.rows[bi * size + i]
                    .iter()
                    .filter(|(j, x)| *j >= lo && *j < hi && !x.is_zero())
                    .map(|(j, x)| (j - lo, x.clone()))
                    .collect()
            })
            .collect();
        Matrix { n: size, rows, zero: T::zero() }
    }

    /// Assembles a block matrix from a row-major grid of equal square blocks.
    pub fn from_blocks(blocks: &[Vec<Self>]) -> Self {
        let k = blocks.len();
        let s = blocks[0][0].n;
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); k * s];
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, b) in row.iter().enumerate() {
                for (i, j, x) in b.nonzeros() {
                    rows[bi * s + i].push((bj * s + j, x.clone()));
                }
            }
        }
        Matrix { n: k * s, rows, zero: T::zero() }
    }

    /// First entry, in row-major order, where `self` and `o` differ.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize)> {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        for i in 0..self.n {
            let a: Vec<(usize, &T)> = self.rows[i].iter().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (*j, x)).collect();
            let b: Vec<(usize, &T)> = o.rows[i].iter().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (*j, x)).collect();
            let (mut p, mut q) = (0, 0);
            while p < a.len() || q < b.len() {
                match (a.get(p), b.get(q)) {
                    (Some((ca, x)), Some((cb, y))) if ca == cb => {
                        if x != y {
                            return Some((i, *ca));
                        }
                        p += 1;
                        q += 1;
                    }
                    (Some((ca, _)), Some((cb, _))) => return Some((i, *ca.min(cb))),
                    (Some((ca, _)), None) => return Some((i, *ca)),
                    (None, Some((cb, _))) => return Some((i, *cb)),
                    (None, None) => unreachable!(),
                }
            }
        }
        None
    }
}

impl<T: Ring> PartialEq for Matrix<T> {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.first_difference(o).is_none()
    }
}

impl<T: Field> Matrix<T> {
    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a: Vec<Vec<T>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut inv: Vec<Vec<T>> = (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(p, c);
            inv.swap(p, c);
            let piv = a[c][c].inv()?;
            for j in 0..n {
                a[c][j] = a[c][j].mul(&piv);
                inv[c][j] = inv[c][j].mul(&piv);
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let x = a[c][j].mul(&f);
                    if !x.is_zero() {
                        a[r][j] = a[r][j].sub(&x);
                    }
                    let y = inv[c][j].mul(&f);
                    if !y.is_zero() {
                        inv[r][j] = inv[r][j].sub(&y);
                    }
                }
            }
        }
        Some(Self::from_rows(inv))
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}) ", self.n)?;
        f.debug_list().entries(self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, x)| (i, *j, x)))).finish()
    }
}

/// Matrix of rationals with integer entries, row-major.
pub fn mat_i(rows: &[&[i64]]) -> Mat {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| crate::exact::int(x)).collect())
            .collect(),
    )
}
