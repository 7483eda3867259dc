//! Gauss decomposition of Lax operators and the Drinfeld currents.
//!
//! `L = E·K·F` with `E` unit lower triangular, `K` diagonal and `F` unit
//! upper triangular, over a noncommutative entry ring. Entries are
//! either operator-valued series (`L±(u)`) or rational operators (the
//! common rational function behind both signs).

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, Assignment, Rat, RatFun, Var};
use crate::graded::{GradedDims, Parity};
use crate::lax::{LaxKernel, LaxOperator, Sign};
use crate::matrix::{Mat, Matrix};
use crate::report::{CheckReport, Witness};
use crate::series::{delta_eval, expand_matrix, partial_fractions, TruncSeries};
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;

const SUITE: &str = "gauss";

/// Entry ring of a Gauss decomposition. Products need not commute.
pub trait GaussEntry: Clone + Send + Sync {
    fn g_mul(&self, o: &Self) -> Result<Self>;
    fn g_add(&self, o: &Self) -> Result<Self>;
    fn g_sub(&self, o: &Self) -> Result<Self>;
    /// Two-sided inverse; `None` when not invertible.
    fn g_inverse(&self) -> Option<Self>;
}

impl GaussEntry for TruncSeries<Mat> {
    fn g_mul(&self, o: &Self) -> Result<Self> {
        self.mul(o)
    }
    fn g_add(&self, o: &Self) -> Result<Self> {
        self.add(o)
    }
    fn g_sub(&self, o: &Self) -> Result<Self> {
        self.sub(o)
    }
    fn g_inverse(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

impl GaussEntry for Matrix<RatFun> {
    fn g_mul(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(o))
    }
    fn g_add(&self, o: &Self) -> Result<Self> {
        Ok(self.add(o))
    }
    fn g_sub(&self, o: &Self) -> Result<Self> {
        Ok(self.sub(o))
    }
    fn g_inverse(&self) -> Option<Self> {
        self.inverse()
    }
}

impl GaussEntry for Mat {
    fn g_mul(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(o))
    }
    fn g_add(&self, o: &Self) -> Result<Self> {
        Ok(self.add(o))
    }
    fn g_sub(&self, o: &Self) -> Result<Self> {
        Ok(self.sub(o))
    }
    fn g_inverse(&self) -> Option<Self> {
        self.inverse()
    }
}

/// Elimination schedule. Both produce the same factors when the pivots
/// are invertible; running both is the order-robustness probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elimination {
    /// Top-left pivot, then recurse on the Schur complement.
    Schur,
    /// Doolittle order: each factor entry from the already computed ones,
    /// `k_s = L_ss - Σ_{t<s} e_st k_t f_ts`.
    Doolittle,
}

/// Factors of `L = E·K·F`, indices 0-based internally.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussFactors<T> {
    size: usize,
    /// `e[(i, j)]`, `i > j`.
    e: BTreeMap<(usize, usize), T>,
    k: Vec<T>,
    /// `k_i^{-1}`, as produced by the pivot step.
    k_inv: Vec<T>,
    /// `f[(i, j)]`, `i < j`.
    f: BTreeMap<(usize, usize), T>,
}

impl<T: GaussEntry> GaussFactors<T> {
    pub fn size(&self) -> usize {
        self.size
    }

    /// `e_{i,j}`, 1-based, `i > j`.
    pub fn e(&self, i: usize, j: usize) -> Result<&T> {
        self.e.get(&(i.wrapping_sub(1), j.wrapping_sub(1))).ok_or(Error::IndexOutOfRange { index: i, dim: self.size })
    }

    /// `f_{i,j}`, 1-based, `i < j`.
    pub fn f(&self, i: usize, j: usize) -> Result<&T> {
        self.f.get(&(i.wrapping_sub(1), j.wrapping_sub(1))).ok_or(Error::IndexOutOfRange { index: j, dim: self.size })
    }

    /// `k_i`, 1-based.
    pub fn k(&self, i: usize) -> Result<&T> {
        self.k.get(i.wrapping_sub(1)).ok_or(Error::IndexOutOfRange { index: i, dim: self.size })
    }

    /// `k_i^{-1}`, 1-based.
    pub fn k_inv(&self, i: usize) -> Result<&T> {
        self.k_inv.get(i.wrapping_sub(1)).ok_or(Error::IndexOutOfRange { index: i, dim: self.size })
    }

    /// `E·K·F` as an array of entries.
    pub fn reconstruct(&self) -> Result<Vec<Vec<T>>> {
        let d = self.size;
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            let mut row = Vec::with_capacity(d);
            for j in 0..d {
                // (EKF)_ij = Σ_{t ≤ min(i,j)} E_it k_t F_tj with unit diagonals.
                let mut acc: Option<T> = None;
                for t in 0..=i.min(j) {
                    let mut term = self.k[t].clone();
                    if t < i {
                        term = self.e[&(i, t)].g_mul(&term)?;
                    }
                    if t < j {
                        term = term.g_mul(&self.f[&(t, j)])?;
                    }
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.g_add(&term)?,
                    });
                }
                row.push(acc.expect("nonempty sum"));
            }
            out.push(row);
        }
        Ok(out)
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> Result<U>) -> Result<GaussFactors<U>> {
        let map_tree = |t: &BTreeMap<(usize, usize), T>| -> Result<BTreeMap<(usize, usize), U>> {
            t.iter().map(|(k, v)| Ok((*k, f(v)?))).collect()
        };
        Ok(GaussFactors {
            size: self.size,
            e: map_tree(&self.e)?,
            k: self.k.iter().map(&f).collect::<Result<_>>()?,
            k_inv: self.k_inv.iter().map(&f).collect::<Result<_>>()?,
            f: map_tree(&self.f)?,
        })
    }
}

fn pivot_inverse<T: GaussEntry>(p: &T, s: usize) -> Result<T> {
    p.g_inverse().ok_or(Error::PivotSingular { index: s + 1 })
}

/// Decomposes a square array of entries.
pub fn decompose<T: GaussEntry>(l: &[Vec<T>], how: Elimination) -> Result<GaussFactors<T>> {
    let d = l.len();
    if d == 0 || l.iter().any(|r| r.len() != d) {
        return Err(Error::DimsMismatch("Gauss decomposition needs a nonempty square array".into()));
    }
    match how {
        Elimination::Schur => schur(l),
        Elimination::Doolittle => doolittle(l),
    }
}

fn schur<T: GaussEntry>(l: &[Vec<T>]) -> Result<GaussFactors<T>> {
    let d = l.len();
    let mut cur: Vec<Vec<T>> = l.to_vec();
    let (mut e, mut f) = (BTreeMap::new(), BTreeMap::new());
    let (mut k, mut k_inv) = (Vec::with_capacity(d), Vec::with_capacity(d));
    for s in 0..d {
        // `cur` holds the Schur complement on indices s..d, offset by s.
        let piv = cur[0][0].clone();
        let inv = pivot_inverse(&piv, s)?;
        for j in 1..cur.len() {
            f.insert((s, s + j), inv.g_mul(&cur[0][j])?);
            e.insert((s + j, s), cur[j][0].g_mul(&inv)?);
        }
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 1..cur.len() {
            let left = cur[i][0].g_mul(&inv)?;
            let mut row = Vec::with_capacity(cur.len() - 1);
            for j in 1..cur.len() {
                row.push(cur[i][j].g_sub(&left.g_mul(&cur[0][j])?)?);
            }
            next.push(row);
        }
        k.push(piv);
        k_inv.push(inv);
        cur = next;
    }
    Ok(GaussFactors { size: d, e, k, k_inv, f })
}

fn doolittle<T: GaussEntry>(l: &[Vec<T>]) -> Result<GaussFactors<T>> {
    let d = l.len();
    let (mut e, mut f): (BTreeMap<(usize, usize), T>, BTreeMap<(usize, usize), T>) = (BTreeMap::new(), BTreeMap::new());
    let (mut k, mut k_inv): (Vec<T>, Vec<T>) = (Vec::with_capacity(d), Vec::with_capacity(d));
    // (EKF)_ij minus the terms t < min(i, j) already known.
    let reduced = |i: usize, j: usize, e: &BTreeMap<(usize, usize), T>, k: &[T], f: &BTreeMap<(usize, usize), T>| -> Result<T> {
        let mut acc = l[i][j].clone();
        for t in 0..i.min(j) {
            acc = acc.g_sub(&e[&(i, t)].g_mul(&k[t])?.g_mul(&f[&(t, j)])?)?;
        }
        Ok(acc)
    };
    for s in 0..d {
        let piv = reduced(s, s, &e, &k, &f)?;
        let inv = pivot_inverse(&piv, s)?;
        for j in s + 1..d {
            let r = reduced(s, j, &e, &k, &f)?;
            f.insert((s, j), inv.g_mul(&r)?);
        }
        for i in s + 1..d {
            let c = reduced(i, s, &e, &k, &f)?;
            e.insert((i, s), c.g_mul(&inv)?);
        }
        k.push(piv);
        k_inv.push(inv);
    }
    Ok(GaussFactors { size: d, e, k, k_inv, f })
}

/// Gauss factors of one Lax operator `L^sign(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussData {
    pub sign: Sign,
    pub dims: GradedDims,
    pub w_parities: Vec<Parity>,
    pub factors: GaussFactors<TruncSeries<Mat>>,
}

pub fn gauss_decompose(l: &LaxOperator) -> Result<GaussData> {
    gauss_decompose_with(l, Elimination::Schur)
}

pub fn gauss_decompose_with(l: &LaxOperator, how: Elimination) -> Result<GaussData> {
    let factors = decompose(&l.entries(), how)?;
    Ok(GaussData { sign: l.sign, dims: l.dims, w_parities: l.w_parities.clone(), factors })
}

/// Gauss factors of the rational operator behind `L±`.
pub fn gauss_decompose_rational(k: &LaxKernel) -> Result<GaussFactors<Matrix<RatFun>>> {
    let d = k.dims.dim();
    let w = k.w_dim();
    let blocks: Vec<Vec<Matrix<RatFun>>> =
        (0..d).map(|i| (0..d).map(|j| k.rational.block(i, j, w)).collect()).collect();
    decompose(&blocks, Elimination::Schur)
}

/// Sum `Σ_p R_p δ(u - p)` of operators supported at finitely many points.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSum {
    pub size: usize,
    /// Points ascending, residues nonzero.
    pub terms: Vec<(Rat, Mat)>,
}

impl DeltaSum {
    pub fn zero(size: usize) -> Self {
        DeltaSum { size, terms: Vec::new() }
    }

    /// `ι_∞ f - ι_0 f` for a rational operator with simple poles only.
    pub fn from_rational(f: &Matrix<RatFun>, var: Var) -> Result<Self> {
        let mut acc: BTreeMap<Rat, Mat> = BTreeMap::new();
        for (i, j, x) in f.nonzeros() {
            let pf = partial_fractions(x, var)?;
            for (p, cs) in pf.poles {
                if cs.len() > 1 && cs[1..].iter().any(|c| !c.is_zero()) {
                    return Err(Error::Pole { factor: format!("({var} - {}) of order {}", fmt_rat(&p), cs.len()) });
                }
                let slot = acc.entry(p).or_insert_with(|| Mat::zeros(f.n()));
                let v = slot.get(i, j) + &cs[0];
                slot.set(i, j, v);
            }
        }
        Ok(DeltaSum::from_map(f.n(), acc))
    }

    fn from_map(size: usize, acc: BTreeMap<Rat, Mat>) -> Self {
        DeltaSum { size, terms: acc.into_iter().filter(|(_, m)| !m.is_zero()).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut acc: BTreeMap<Rat, Mat> = self.terms.iter().cloned().collect();
        for (p, m) in &o.terms {
            let slot = acc.entry(p.clone()).or_insert_with(|| Mat::zeros(self.size));
            *slot = slot.add(m);
        }
        DeltaSum::from_map(self.size, acc)
    }

    /// Applies `g(p, R_p)` to every term.
    pub fn map_terms(&self, size: usize, g: impl Fn(&Rat, &Mat) -> Result<Mat>) -> Result<Self> {
        let mut acc = BTreeMap::new();
        for (p, m) in &self.terms {
            acc.insert(p.clone(), g(p, m)?);
        }
        Ok(DeltaSum::from_map(size, acc))
    }

    /// `f(u) · Σ R_p δ(u - p) = Σ f(p) R_p δ(u - p)`; `f` must be regular
    /// at every point.
    pub fn left_eval(&self, f: &Matrix<RatFun>, var: Var) -> Result<Self> {
        self.map_terms(self.size, |p, m| Ok(eval_at(f, var, p)?.mul(m)))
    }

    /// `Σ R_p δ(u - p) · f(u)`.
    pub fn right_eval(&self, f: &Matrix<RatFun>, var: Var) -> Result<Self> {
        self.map_terms(self.size, |p, m| Ok(m.mul(&eval_at(f, var, p)?)))
    }

    /// The series on `[-n, n]`.
    pub fn series(&self, var: Var, n: i32) -> TruncSeries<Mat> {
        let mut acc: Option<TruncSeries<Mat>> = None;
        for (p, m) in &self.terms {
            let s = delta_eval(p, var, n).map(|c| m.scale(c));
            acc = Some(match acc {
                None => s,
                Some(a) => a.add(&s).expect("same window"),
            });
        }
        acc.unwrap_or_else(|| delta_eval(&Rat::zero(), var, n).map(|_| Mat::zeros(self.size)))
    }
}

/// Evaluates a rational operator at `var = p`.
pub fn eval_at(f: &Matrix<RatFun>, var: Var, p: &Rat) -> Result<Mat> {
    let mut a = Assignment::new();
    a.insert(var, p.clone());
    f.try_map(|x| x.eval(&a))
}

/// Currents of one module (or tensor product) as rational data:
/// `k_j(u)` rational, `X±_i(u)` supported at points.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalCurrents {
    pub dims: GradedDims,
    pub w_parities: Vec<Parity>,
    /// `X+_i`, `i = 1..d-1`.
    pub xplus: Vec<DeltaSum>,
    pub xminus: Vec<DeltaSum>,
    /// `k_j`, `j = 1..d`; both signs expand this one function.
    pub k: Vec<Matrix<RatFun>>,
}

impl RationalCurrents {
    /// From the rational Gauss factors of an evaluation kernel.
    pub fn from_kernel(kernel: &LaxKernel) -> Result<Self> {
        let g = gauss_decompose_rational(kernel)?;
        let d = kernel.dims.dim();
        let mut xplus = Vec::with_capacity(d - 1);
        let mut xminus = Vec::with_capacity(d - 1);
        for i in 1..d {
            xplus.push(DeltaSum::from_rational(g.e(i + 1, i)?, Var::U)?);
            xminus.push(DeltaSum::from_rational(g.f(i, i + 1)?, Var::U)?);
        }
        Ok(RationalCurrents {
            dims: kernel.dims,
            w_parities: kernel.w_parities.clone(),
            xplus,
            xminus,
            k: g.k.clone(),
        })
    }

    pub fn w_dim(&self) -> usize {
        self.w_parities.len()
    }

    /// `k_{i+1} k_i^{-1}`, the common rational form of `ψ_i` and `φ_i`.
    pub fn ratio(&self, i: usize) -> Result<Matrix<RatFun>> {
        let inv = self.k[i - 1].inverse().ok_or(Error::PivotSingular { index: i })?;
        Ok(self.k[i].mul(&inv))
    }

    /// Expands into the series form used by the relation checker.
    pub fn to_system(&self, order: i32) -> Result<CurrentSystem> {
        let d = self.dims.dim();
        let ex = |f: &Matrix<RatFun>, s: Sign| expand_matrix(f, Var::U, s.direction(), order);
        let mut k_plus = Vec::with_capacity(d);
        let mut k_minus = Vec::with_capacity(d);
        let mut k_plus_inv = Vec::with_capacity(d);
        let mut k_minus_inv = Vec::with_capacity(d);
        for (j, kj) in self.k.iter().enumerate() {
            let inv = kj.inverse().ok_or(Error::PivotSingular { index: j + 1 })?;
            k_plus.push(ex(kj, Sign::Plus)?);
            k_minus.push(ex(kj, Sign::Minus)?);
            k_plus_inv.push(ex(&inv, Sign::Plus)?);
            k_minus_inv.push(ex(&inv, Sign::Minus)?);
        }
        let mut psi = Vec::with_capacity(d - 1);
        let mut phi = Vec::with_capacity(d - 1);
        for i in 1..d {
            let r = self.ratio(i)?;
            psi.push(ex(&r, Sign::Minus)?);
            phi.push(ex(&r, Sign::Plus)?);
        }
        Ok(CurrentSystem {
            dims: self.dims,
            w_parities: self.w_parities.clone(),
            order,
            xplus: self.xplus.iter().map(|x| x.series(Var::U, order)).collect(),
            xminus: self.xminus.iter().map(|x| x.series(Var::U, order)).collect(),
            k_plus,
            k_minus,
            k_plus_inv,
            k_minus_inv,
            psi,
            phi,
        })
    }
}

/// Currents as one-variable series in `u` with operator coefficients.
/// Vectors are 0-based: `xplus[i - 1]` is `X+_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentSystem {
    pub dims: GradedDims,
    pub w_parities: Vec<Parity>,
    pub order: i32,
    pub xplus: Vec<TruncSeries<Mat>>,
    pub xminus: Vec<TruncSeries<Mat>>,
    pub k_plus: Vec<TruncSeries<Mat>>,
    pub k_minus: Vec<TruncSeries<Mat>>,
    pub k_plus_inv: Vec<TruncSeries<Mat>>,
    pub k_minus_inv: Vec<TruncSeries<Mat>>,
    /// `ψ_i = k-_{i+1} (k-_i)^{-1}`.
    pub psi: Vec<TruncSeries<Mat>>,
    /// `φ_i = k+_{i+1} (k+_i)^{-1}`.
    pub phi: Vec<TruncSeries<Mat>>,
}

impl CurrentSystem {
    pub fn w_dim(&self) -> usize {
        self.w_parities.len()
    }

    /// Parity of `X±_i`: odd exactly at the odd simple root `i = m`.
    pub fn x_parity(&self, i: usize) -> Parity {
        u8::from(i == self.dims.m)
    }

    pub fn k(&self, sign: Sign, j: usize) -> &TruncSeries<Mat> {
        match sign {
            Sign::Plus => &self.k_plus[j - 1],
            Sign::Minus => &self.k_minus[j - 1],
        }
    }

    pub fn k_inv(&self, sign: Sign, j: usize) -> &TruncSeries<Mat> {
        match sign {
            Sign::Plus => &self.k_plus_inv[j - 1],
            Sign::Minus => &self.k_minus_inv[j - 1],
        }
    }

    /// `X+_i` for `sign = +`, `X-_i` for `sign = -`.
    pub fn x(&self, sign: Sign, i: usize) -> &TruncSeries<Mat> {
        match sign {
            Sign::Plus => &self.xplus[i - 1],
            Sign::Minus => &self.xminus[i - 1],
        }
    }

    /// The trivial module: `k = 1`, `X = 0`, on a one-dimensional even space.
    pub fn trivial(dims: GradedDims, order: i32) -> Self {
        let d = dims.dim();
        let one = TruncSeries::constant(Mat::identity(1));
        let zero = DeltaSum::zero(1).series(Var::U, order);
        CurrentSystem {
            dims,
            w_parities: vec![0],
            order,
            xplus: vec![zero.clone(); d - 1],
            xminus: vec![zero; d - 1],
            k_plus: vec![one.clone(); d],
            k_minus: vec![one.clone(); d],
            k_plus_inv: vec![one.clone(); d],
            k_minus_inv: vec![one.clone(); d],
            psi: vec![one.clone(); d - 1],
            phi: vec![one; d - 1],
        }
    }
}

/// Assembles the currents from the Gauss data of `L+` and `L-`:
/// `X-_i = f+_{i,i+1} - f-_{i,i+1}`, `X+_i = e+_{i+1,i} - e-_{i+1,i}`.
///
/// Only `c = 0` is representable, where all argument shifts vanish.
pub fn build_currents(plus: &GaussData, minus: &GaussData, c: &Rat) -> Result<CurrentSystem> {
    if !c.is_zero() {
        return Err(Error::Config("currents are only available at central charge 0".into()));
    }
    if plus.sign != Sign::Plus || minus.sign != Sign::Minus {
        return Err(Error::DimsMismatch("expected the Gauss data of L+ and L-, in that order".into()));
    }
    if plus.dims != minus.dims || plus.w_parities != minus.w_parities {
        return Err(Error::DimsMismatch("L+ and L- come from different modules".into()));
    }
    let d = plus.dims.dim();
    let (gp, gm) = (&plus.factors, &minus.factors);
    let mut xplus = Vec::with_capacity(d - 1);
    let mut xminus = Vec::with_capacity(d - 1);
    let mut psi = Vec::with_capacity(d - 1);
    let mut phi = Vec::with_capacity(d - 1);
    for i in 1..d {
        xplus.push(gp.e(i + 1, i)?.sub(gm.e(i + 1, i)?)?);
        xminus.push(gp.f(i, i + 1)?.sub(gm.f(i, i + 1)?)?);
        psi.push(gm.k(i + 1)?.mul(gm.k_inv(i)?)?);
        phi.push(gp.k(i + 1)?.mul(gp.k_inv(i)?)?);
    }
    Ok(CurrentSystem {
        dims: plus.dims,
        w_parities: plus.w_parities.clone(),
        order: plus.factors.k[0].windows().first().and_then(|w| w.lo).map_or(0, |lo| -lo),
        xplus,
        xminus,
        k_plus: gp.k.clone(),
        k_minus: gm.k.clone(),
        k_plus_inv: gp.k_inv.clone(),
        k_minus_inv: gm.k_inv.clone(),
        psi,
        phi,
    })
}

/// Currents of a Lax kernel through the series Gauss decomposition.
pub fn currents_from_kernel(kernel: &LaxKernel, order: i32) -> Result<CurrentSystem> {
    let (p, m) = rayon::join(|| kernel.lax(Sign::Plus, order), || kernel.lax(Sign::Minus, order));
    let (gp, gm) = rayon::join(|| gauss_decompose(&p?), || gauss_decompose(&m?));
    let mut cs = build_currents(&gp?, &gm?, &Rat::zero())?;
    cs.order = order;
    Ok(cs)
}

fn compare_entries(name: &str, sign: Sign, a: &[Vec<TruncSeries<Mat>>], b: &[Vec<TruncSeries<Mat>>]) -> CheckReport {
    let mut r = CheckReport::new(SUITE, name).param("sign", sign.symbol());
    for (i, (ra, rb)) in a.iter().zip(b).enumerate() {
        for (j, (x, y)) in ra.iter().zip(rb).enumerate() {
            match x.compare(y) {
                Ok(c) => {
                    let fresh = r.witness.is_none();
                    r.absorb(&c);
                    if fresh && r.witness.is_some() {
                        r = r.note(format!("first mismatch in entry ({}, {})", i + 1, j + 1));
                    }
                }
                Err(e) => return r.errored(&e),
            }
        }
    }
    r
}

fn factor_entries(g: &GaussFactors<TruncSeries<Mat>>) -> Vec<Vec<TruncSeries<Mat>>> {
    let d = g.size;
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Greater => g.e[&(i, j)].clone(),
                    std::cmp::Ordering::Equal => g.k[i].clone(),
                    std::cmp::Ordering::Less => g.f[&(i, j)].clone(),
                })
                .collect()
        })
        .collect()
}

fn one_sign(kernel: &LaxKernel, rational: &GaussFactors<Matrix<RatFun>>, sign: Sign, order: i32) -> Vec<CheckReport> {
    let run = || -> Result<Vec<CheckReport>> {
        let l = kernel.lax(sign, order)?;
        let g = gauss_decompose(&l)?;
        let mut out = Vec::new();
        out.push(compare_entries("reconstruction", sign, &g.factors.reconstruct()?, &l.entries()));
        let alt = gauss_decompose_with(&l, Elimination::Doolittle)?;
        out.push(compare_entries("elimination-order", sign, &factor_entries(&alt.factors), &factor_entries(&g.factors)));
        let expanded = rational.map(|m| expand_matrix(m, Var::U, sign.direction(), order))?;
        out.push(compare_entries("rational-agreement", sign, &factor_entries(&expanded), &factor_entries(&g.factors)));
        let mut inv = CheckReport::new(SUITE, "pivot-inverse").param("sign", sign.symbol());
        for (k, ki) in g.factors.k.iter().zip(&g.factors.k_inv) {
            let prod = k.mul(ki)?;
            let one = TruncSeries::constant(Mat::identity(kernel.w_dim()));
            inv.absorb(&prod.compare(&one)?);
        }
        out.push(inv);
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![CheckReport::new(SUITE, "decomposition").param("sign", sign.symbol()).errored(&e)])
}

/// Gauss suite on one kernel: reconstruction, order robustness,
/// agreement with the rational decomposition and pivot inverses, for
/// both signs.
pub fn check_gauss(kernel: &LaxKernel, order: i32) -> Result<Vec<CheckReport>> {
    let rational = gauss_decompose_rational(kernel)?;
    let mut out: Vec<CheckReport> = [Sign::Plus, Sign::Minus]
        .par_iter()
        .map(|&s| one_sign(kernel, &rational, s, order))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    out.extend(current_reports(kernel, order));
    Ok(out)
}

fn current_reports(kernel: &LaxKernel, order: i32) -> Vec<CheckReport> {
    let run = || -> Result<Vec<CheckReport>> {
        let series = currents_from_kernel(kernel, order)?;
        let rational = RationalCurrents::from_kernel(kernel)?.to_system(order)?;
        let d = kernel.dims.dim();
        let mut out = Vec::new();
        let mut agree = CheckReport::new(SUITE, "currents-delta-supported");
        for i in 0..d - 1 {
            agree.absorb(&series.xplus[i].compare(&rational.xplus[i])?);
            agree.absorb(&series.xminus[i].compare(&rational.xminus[i])?);
        }
        out.push(agree);
        let mut ratios = CheckReport::new(SUITE, "psi-phi-rational");
        for i in 0..d - 1 {
            ratios.absorb(&series.psi[i].compare(&rational.psi[i])?);
            ratios.absorb(&series.phi[i].compare(&rational.phi[i])?);
        }
        out.push(ratios);
        let mut grading = CheckReport::new(SUITE, "current-grading");
        for i in 1..d {
            let want = series.x_parity(i);
            for x in [&series.xplus[i - 1], &series.xminus[i - 1]] {
                for (e, c) in x.coeffs() {
                    match operator_parity(c, &kernel.w_parities) {
                        Some(p) if p == want => {}
                        got => {
                            if grading.witness.is_none() {
                                grading = grading.fail_with(Witness {
                                    at: [("u".to_string(), e[0].to_string())].into(),
                                    entry: None,
                                    lhs: got.map_or("inhomogeneous".into(), |p| format!("parity {p}")),
                                    rhs: format!("parity {want}"),
                                });
                            }
                        }
                    }
                    grading.compared += 1;
                }
            }
        }
        out.push(grading.param("odd", format!("X±_{}", kernel.dims.m)));
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![CheckReport::new(SUITE, "currents").errored(&e)])
}

/// Parity of a homogeneous operator on a graded space; `None` if zero or
/// inhomogeneous.
pub fn operator_parity(m: &Mat, p: &[Parity]) -> Option<Parity> {
    let mut seen: Option<Parity> = None;
    for (i, j, _) in m.nonzeros() {
        let q = p[i] ^ p[j];
        match seen {
            None => seen = Some(q),
            Some(s) if s != q => return None,
            _ => {}
        }
    }
    seen
}

/// JSON summary of the Gauss data for `gauss --dump`-style output.
pub fn summarize(g: &GaussData, full: bool) -> Value {
    let f = &g.factors;
    let entry = |s: &TruncSeries<Mat>| {
        if full {
            s.dump()
        } else {
            json!({"nonzero_terms": s.nonzero_count(), "windows": s.windows()})
        }
    };
    let d = f.size;
    json!({
        "sign": g.sign.symbol(),
        "k": (1..=d).map(|i| json!({"i": i, "series": entry(&f.k[i - 1])})).collect::<Vec<_>>(),
        "e": f.e.iter().map(|((i, j), s)| json!({"i": i + 1, "j": j + 1, "series": entry(s)})).collect::<Vec<_>>(),
        "f": f.f.iter().map(|((i, j), s)| json!({"i": i + 1, "j": j + 1, "series": entry(s)})).collect::<Vec<_>>(),
    })
}
