//! Yang's rational R-matrix for `gl(m|n)` and its structural checks.

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, Assignment, Poly, Rat, RatFun, Var};
use crate::graded::{
    graded_kron_spaces, is_even, permutation_matrix, theta_matrix, GradedDims, Parity,
};
use crate::matrix::{Matrix, Ring};
use crate::report::{CheckReport, Witness};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

const SUITE: &str = "rmatrix";

/// `R(u) = (u·I + 2ħ·P)/(u + 2ħ)` as a matrix of rational functions in `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    dims: GradedDims,
    hbar: Rat,
    mat: Matrix<RatFun>,
}

fn two_hbar(hbar: &Rat) -> Rat {
    hbar * Rat::from_integer(2.into())
}

impl RMatrix {
    /// Builds `R(u)` from the compact form and cross-checks it entrywise
    /// against the five-term matrix-element form.
    pub fn build(dims: GradedDims, hbar: &Rat) -> Result<Self> {
        if Zero::is_zero(hbar) {
            return Err(Error::ZeroHbar);
        }
        let mat = compact_form(dims, hbar);
        if mat != five_term_form(dims, hbar) {
            return Err(Error::Config("compact and five-term R-matrix forms disagree".into()));
        }
        Ok(RMatrix { dims, hbar: hbar.clone(), mat })
    }

    pub fn dims(&self) -> GradedDims {
        self.dims
    }

    pub fn hbar(&self) -> &Rat {
        &self.hbar
    }

    pub fn matrix(&self) -> &Matrix<RatFun> {
        &self.mat
    }

    /// `R(x)` for a polynomial argument `x` such as `u - v` or `u - a`.
    pub fn at(&self, x: &Poly) -> Matrix<RatFun> {
        self.mat.map(|f| f.substitute(Var::U, x))
    }

    /// `R(x)` at a number.
    pub fn at_value(&self, x: &Rat) -> Result<Matrix<Rat>> {
        let a: Assignment = [(Var::U, x.clone())].into_iter().collect();
        self.mat.try_map(|f| f.eval(&a))
    }

    /// `(x + 2ħ)·R(x) = x·I + 2ħ·P`, the denominator-cleared form.
    pub fn numerator_at(&self, x: &Poly) -> Matrix<Poly> {
        let den = Poly::var(Var::U).add(&Poly::constant(two_hbar(&self.hbar)));
        self.mat.map(|f| {
            let g = f.mul(&RatFun::from_poly(den.clone()));
            let (q, r) = g.num().to_upoly(Var::U).unwrap().div_rem(&g.den().to_upoly(Var::U).unwrap());
            debug_assert!(r.is_zero());
            Poly::from_upoly(Var::U, &q).substitute(Var::U, x)
        })
    }

    /// `R21(u) = R(-u)^{-1}`, computed by inversion.
    pub fn r21(&self) -> Matrix<RatFun> {
        let minus_u = Poly::var(Var::U).neg();
        self.at(&minus_u).inverse().expect("R(-u) is invertible as a rational matrix")
    }
}

/// `(u·I + 2ħ·P)/(u + 2ħ)`.
pub fn compact_form(dims: GradedDims, hbar: &Rat) -> Matrix<RatFun> {
    let p = dims.parities();
    let th = two_hbar(hbar);
    let den = Poly::var(Var::U).add(&Poly::constant(th.clone()));
    let perm: Matrix<Rat> = permutation_matrix(&p);
    let d2 = perm.n();
    Matrix::from_fn(d2, |i, j| {
        let mut num = Poly::constant(perm.get(i, j) * &th);
        if i == j {
            num = num.add(&Poly::var(Var::U));
        }
        RatFun::new(num, den.clone()).unwrap()
    })
}

/// Matrix elements `R = (-1)^{[α][β]} R̃` with `R̃` the sum of all five
/// displayed terms, `(α, β)` the row pair.
pub fn five_term_form(dims: GradedDims, hbar: &Rat) -> Matrix<RatFun> {
    let p = dims.parities();
    let d = dims.dim();
    let m = dims.m;
    let th = two_hbar(hbar);
    let u = Poly::var(Var::U);
    let den = u.add(&Poly::constant(th.clone()));
    let frac = |num: Poly| RatFun::new(num, den.clone()).unwrap();
    let unit = |i: usize, j: usize| {
        let mut e = Matrix::<RatFun>::zeros(d);
        e.set(i, j, RatFun::one());
        e
    };
    let mut rt = Matrix::<RatFun>::zeros(d * d);
    for i in 0..d {
        let c = if i < m { RatFun::one() } else { frac(Poly::constant(th.clone()).sub(&u)) };
        rt.add_assign(&unit(i, i).kron(&unit(i, i)).scale(&c));
    }
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let s = if p[i] * p[j] == 1 { -<Rat as One>::one() } else { <Rat as One>::one() };
            rt.add_assign(&unit(i, i).kron(&unit(j, j)).scale(&frac(u.scale(&s))));
            // Both the i<j and the i>j sums carry the same coefficient.
            rt.add_assign(&unit(j, i).kron(&unit(i, j)).scale(&frac(Poly::constant(th.clone()))));
        }
    }
    Matrix::from_fn(d * d, |r, c| {
        let v = rt.get(r, c).clone();
        if p[r / d] * p[r % d] == 1 {
            v.neg()
        } else {
            v
        }
    })
}

fn first_mismatch<T: Ring + std::fmt::Display>(a: &Matrix<T>, b: &Matrix<T>) -> Option<Witness> {
    a.first_difference(b).map(|(i, j)| Witness {
        at: BTreeMap::new(),
        entry: Some((i, j)),
        lhs: a.get(i, j).to_string(),
        rhs: b.get(i, j).to_string(),
    })
}

fn matrix_check<T: Ring + std::fmt::Display>(name: &str, dims: GradedDims, hbar: &Rat, a: &Matrix<T>, b: &Matrix<T>) -> CheckReport {
    let mut r = base(name, dims, hbar);
    r.compared = a.n() * a.n();
    match first_mismatch(a, b) {
        Some(w) => r.fail_with(w),
        None => r,
    }
}

fn base(name: &str, dims: GradedDims, hbar: &Rat) -> CheckReport {
    CheckReport::new(SUITE, name)
        .param("m", dims.m)
        .param("n", dims.n)
        .param("hbar", fmt_rat(hbar))
}

/// Five-term vs compact form, `R(0) = P`, unitarity, PT-symmetry,
/// `R21(0) = P`, and weight conservation.
pub fn check_structure(dims: GradedDims, hbar: &Rat) -> Result<Vec<CheckReport>> {
    if Zero::is_zero(hbar) {
        return Err(Error::ZeroHbar);
    }
    let p = dims.parities();
    let compact = compact_form(dims, hbar);
    let five = five_term_form(dims, hbar);
    let r = RMatrix { dims, hbar: hbar.clone(), mat: compact.clone() };
    let perm: Matrix<RatFun> = permutation_matrix(&p);
    let u = Poly::var(Var::U);
    let zero = Poly::zero();
    let mut out = vec![matrix_check("five-term-vs-compact", dims, hbar, &five, &compact)];
    out.push(matrix_check("r-at-zero", dims, hbar, &r.at(&zero), &perm));
    // PT-symmetry: P R(u) P = R21(u).
    let r21 = r.r21();
    out.push(matrix_check("pt-symmetry", dims, hbar, &perm.mul(&compact).mul(&perm), &r21));
    // Unitarity: R12(u) R21(-u) = 1, with R21 from its own definition.
    let r21_minus = r21.map(|f| f.substitute(Var::U, &u.neg()));
    out.push(matrix_check("unitarity", dims, hbar, &compact.mul(&r21_minus), &Matrix::identity(compact.n())));
    out.push(matrix_check("r21-at-zero", dims, hbar, &r21.map(|f| f.substitute(Var::U, &zero)), &perm));
    let mut w = base("weight-conservation", dims, hbar);
    w.compared = compact.nnz();
    if !is_even(&compact, &crate::graded::tensor_parities(&p, &p)) {
        w.status = crate::report::Status::Fail;
        w.reason = Some("R(u) has an entry that changes total parity".into());
    }
    out.push(w);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum YbeMode {
    /// Bivariate polynomial identity after clearing denominators.
    Symbolic,
    /// Exact evaluation at random rational points.
    Sampled { samples: usize, seed: u64 },
}

type Table<T> = BTreeMap<[usize; 6], T>;

/// Sparse rows: row index → nonzero `(col, value)`.
fn rows<T: Ring>(m: &Matrix<T>) -> Vec<Vec<(usize, T)>> {
    let mut out = vec![Vec::new(); m.n()];
    for (i, j, x) in m.nonzeros() {
        out[i].push((j, x.clone()));
    }
    out
}

fn acc<T: Ring>(t: &mut Table<T>, k: [usize; 6], v: T) {
    match t.get_mut(&k) {
        Some(x) => *x = x.add(&v),
        None => {
            t.insert(k, v);
        }
    }
}

/// Residual table `LHS - RHS` of the component form of the graded YBE
/// for `a = R(u-v)`, `b = R(u)`, `c = R(v)`; lower indices are rows.
/// Keys are `(α, β, γ, α'', β'', γ'')`; zero entries are dropped.
pub fn ybe_component_residual<T: Ring>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>, p: &[Parity], signs: bool) -> Table<T> {
    let d = p.len();
    let (ra, rb, rc) = (rows(a), rows(b), rows(c));
    let sg = |e: u32, v: T| if signs && e % 2 == 1 { v.neg() } else { v };
    let pi = |k: usize| u32::from(p[k]);
    let mut t: Table<T> = BTreeMap::new();
    for al in 0..d {
        for be in 0..d {
            for (col, x) in &ra[al * d + be] {
                let (a1, b1) = (col / d, col % d);
                for ga in 0..d {
                    for (col2, y) in &rb[a1 * d + ga] {
                        let (a2, g1) = (col2 / d, col2 % d);
                        for (col3, z) in &rc[b1 * d + g1] {
                            let (b2, g2) = (col3 / d, col3 % d);
                            let e = pi(al) * pi(be) + pi(ga) * pi(a1) + pi(g1) * pi(b1);
                            acc(&mut t, [al, be, ga, a2, b2, g2], sg(e, x.mul(y).mul(z)));
                        }
                    }
                }
            }
        }
    }
    for be in 0..d {
        for ga in 0..d {
            for (col, z) in &rc[be * d + ga] {
                let (b1, g1) = (col / d, col % d);
                for al in 0..d {
                    for (col2, y) in &rb[al * d + g1] {
                        let (a1, g2) = (col2 / d, col2 % d);
                        for (col3, x) in &ra[a1 * d + b1] {
                            let (a2, b2) = (col3 / d, col3 % d);
                            let e = pi(be) * pi(ga) + pi(g1) * pi(al) + pi(b1) * pi(a1);
                            acc(&mut t, [al, be, ga, a2, b2, g2], sg(e, z.mul(y).mul(x)).neg());
                        }
                    }
                }
            }
        }
    }
    t.retain(|_, v| !v.is_zero());
    t
}

/// Operator `L1` on `V1 ⊗ V2 ⊗ W` from blocks of `l` on `V1 ⊗ W`, with
/// `V2` of dimension `d` spectating. No signs: plain matrix embedding.
pub fn embed_first<T: Ring>(l: &Matrix<T>, d: usize, w: usize) -> Matrix<T> {
    let mut out = Matrix::zeros(d * d * w);
    for (r, c, x) in l.nonzeros() {
        let (al, g) = (r / w, r % w);
        let (alp, gp) = (c / w, c % w);
        for be in 0..d {
            out.set((al * d + be) * w + g, (alp * d + be) * w + gp, x.clone());
        }
    }
    out
}

/// Operator `L2` on `V1 ⊗ V2 ⊗ W` from blocks of `l` on `V2 ⊗ W`.
pub fn embed_second<T: Ring>(l: &Matrix<T>, d: usize, w: usize) -> Matrix<T> {
    let mut out = Matrix::zeros(d * d * w);
    for (r, c, x) in l.nonzeros() {
        let (be, g) = (r / w, r % w);
        let (bep, gp) = (c / w, c % w);
        for al in 0..d {
            out.set((al * d + be) * w + g, (al * d + bep) * w + gp, x.clone());
        }
    }
    out
}

/// `M ⊗ I_w` for an operator on `V1 ⊗ V2`.
pub fn aux_pair<T: Ring>(m: &Matrix<T>, w: usize) -> Matrix<T> {
    m.kron(&Matrix::identity(w))
}

/// `R12 L1 θ L2 θ - θ L2 θ L1 R12` with `L = R` on the third space.
fn ybe_theta_residual<T: Ring>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>, p: &[Parity]) -> Matrix<T> {
    let d = p.len();
    let r12 = aux_pair(a, d);
    let th = aux_pair(&theta_matrix::<T>(p), d);
    let l1 = embed_first(b, d, d);
    let l2 = th.mul(&embed_second(c, d, d)).mul(&th);
    r12.mul(&l1).mul(&l2).sub(&l2.mul(&l1).mul(&r12))
}

/// `R12(u-v) R13(u) R23(v) - R23(v) R13(u) R12(u-v)` with graded
/// embeddings.
fn ybe_operator_residual<T: Ring>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>, p: &[Parity]) -> Matrix<T> {
    let d = p.len();
    let p2 = crate::graded::tensor_parities(p, p);
    let id = Matrix::<T>::identity(d);
    let r12 = |m: &Matrix<T>| graded_kron_spaces(m, &p2, &id, p);
    let r23 = |m: &Matrix<T>| graded_kron_spaces(&id, p, m, &p2);
    let p23 = r23(&permutation_matrix::<T>(p));
    let (x, y, z) = (r12(a), p23.mul(&r12(b)).mul(&p23), r23(c));
    x.mul(&y).mul(&z).sub(&z.mul(&y).mul(&x))
}

fn table_witness<T: Ring + std::fmt::Display>(t: &Table<T>, d: usize) -> Option<Witness> {
    t.iter().next().map(|(k, v)| {
        let row = (k[0] * d + k[1]) * d + k[2];
        let col = (k[3] * d + k[4]) * d + k[5];
        Witness { at: BTreeMap::new(), entry: Some((row, col)), lhs: v.to_string(), rhs: "0".into() }
    })
}

fn matrix_witness<T: Ring + std::fmt::Display>(m: &Matrix<T>) -> Option<Witness> {
    m.nonzeros().next().map(|(i, j, v)| Witness {
        at: BTreeMap::new(),
        entry: Some((i, j)),
        lhs: v.to_string(),
        rhs: "0".into(),
    })
}

/// Residuals of all YBE forms for one triple of matrices.
struct YbeResiduals<T> {
    component: Table<T>,
    stripped: Table<T>,
    theta: Matrix<T>,
    operator: Matrix<T>,
}

fn ybe_residuals<T: Ring>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>, p: &[Parity]) -> YbeResiduals<T> {
    YbeResiduals {
        component: ybe_component_residual(a, b, c, p, true),
        stripped: ybe_component_residual(a, b, c, p, false),
        theta: ybe_theta_residual(a, b, c, p),
        operator: ybe_operator_residual(a, b, c, p),
    }
}

/// Whether the component residual table equals the θ-form residual
/// matrix entry by entry.
fn tables_agree<T: Ring>(t: &Table<T>, m: &Matrix<T>, d: usize) -> bool {
    let mut count = 0;
    for (k, v) in t {
        let row = (k[0] * d + k[1]) * d + k[2];
        let col = (k[3] * d + k[4]) * d + k[5];
        if m.get(row, col) != v {
            return false;
        }
        count += 1;
    }
    count == m.nnz()
}

/// Graded YBE in the component-sign form, the θ-dressed form and the
/// graded operator form, their equivalence, and the sign-stripped
/// negative control (run when `n ≥ 1`).
pub fn check_graded_ybe(dims: GradedDims, hbar: &Rat, mode: YbeMode) -> Result<Vec<CheckReport>> {
    let r = RMatrix::build(dims, hbar)?;
    let p = dims.parities();
    let d = dims.dim();
    let mode_s = match mode {
        YbeMode::Symbolic => "symbolic".to_string(),
        YbeMode::Sampled { samples, .. } => format!("sampled:{samples}"),
    };
    let names = ["ybe-component", "ybe-theta", "ybe-operator", "ybe-form-equivalence", "ybe-sign-stripped"];
    let mut reports: Vec<CheckReport> = names.iter().map(|n| base(n, dims, hbar).param("mode", &mode_s)).collect();
    let mut record = |k: usize, w: Option<Witness>, at: &BTreeMap<String, String>, count: usize| {
        reports[k].compared += count;
        if let Some(mut w) = w {
            if reports[k].witness.is_none() {
                w.at = at.clone();
                reports[k].status = crate::report::Status::Fail;
                reports[k].witness = Some(w);
            }
        }
    };
    let nn = d * d * d;
    match mode {
        YbeMode::Symbolic => {
            let u = Poly::var(Var::U);
            let v = Poly::var(Var::V);
            let (a, b, c) = (r.numerator_at(&u.sub(&v)), r.numerator_at(&u), r.numerator_at(&v));
            let res = ybe_residuals(&a, &b, &c, &p);
            let at = BTreeMap::from([("cleared".to_string(), "(u-v+2h)(u+2h)(v+2h)".to_string())]);
            record(0, table_witness(&res.component, d), &at, nn * nn);
            record(1, matrix_witness(&res.theta), &at, nn * nn);
            record(2, matrix_witness(&res.operator), &at, nn * nn);
            let eq = tables_agree(&res.component, &res.theta, d);
            record(3, (!eq).then(equivalence_witness), &at, nn * nn);
            record(4, table_witness(&res.stripped, d), &at, nn * nn);
        }
        YbeMode::Sampled { samples, seed } => {
            let th = two_hbar(hbar);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut points = Vec::new();
            let mut skipped = 0;
            while points.len() < samples {
                let x = Rat::new(rng.gen_range(-40i64..=40).into(), rng.gen_range(1i64..=9).into());
                let y = Rat::new(rng.gen_range(-40i64..=40).into(), rng.gen_range(1i64..=9).into());
                let poles = [&x + &th, &y + &th, &x - &y + &th];
                if poles.iter().any(Zero::is_zero) {
                    skipped += 1;
                    continue;
                }
                points.push((x, y));
            }
            let results: Vec<Result<(YbeResiduals<Rat>, BTreeMap<String, String>)>> = points
                .par_iter()
                .map(|(x, y)| {
                    let (a, b, c) = (r.at_value(&(x - y))?, r.at_value(x)?, r.at_value(y)?);
                    let at = BTreeMap::from([("u".to_string(), fmt_rat(x)), ("v".to_string(), fmt_rat(y))]);
                    Ok((ybe_residuals(&a, &b, &c, &p), at))
                })
                .collect();
            for res in results {
                let (res, at) = res?;
                record(0, table_witness(&res.component, d), &at, nn * nn);
                record(1, matrix_witness(&res.theta), &at, nn * nn);
                record(2, matrix_witness(&res.operator), &at, nn * nn);
                let eq = tables_agree(&res.component, &res.theta, d);
                record(3, (!eq).then(equivalence_witness), &at, nn * nn);
                record(4, table_witness(&res.stripped, d), &at, nn * nn);
            }
            if skipped > 0 {
                reports[0].notes.push(format!("{skipped} pole configurations skipped"));
            }
        }
    }
    let stripped = reports.pop().unwrap();
    // Without both parities the stripped matrix is Yang's R at ±ħ, which
    // still solves the equation: nothing to detect.
    if dims.m >= 1 && dims.n >= 1 {
        reports.push(stripped.as_control());
    }
    Ok(reports)
}

fn equivalence_witness() -> Witness {
    Witness {
        at: BTreeMap::new(),
        entry: None,
        lhs: "component residual table".into(),
        rhs: "theta residual table".into(),
    }
}
