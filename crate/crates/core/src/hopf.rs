//! Hopf structure at `c = 0`, checked inside tensor products of
//! evaluation modules.
//!
//! Coproduct images are built from [`RationalCurrents`]: a product such
//! as `ψ_i(u) ⊗ X+_i(u)` is not a formal product of series (one factor
//! is one-sided, the other bilateral), so it is evaluated on the
//! support of the delta terms, `ψ_i(u) δ(u - q) = ψ_i(q) δ(u - q)`.

use crate::error::{Error, Result};
use crate::exact::{Rat, RatFun, Var};
use crate::gauss::{CurrentSystem, DeltaSum, RationalCurrents};
use crate::graded::{graded_kron_with, GradedDims, Parity};
use crate::lax::{EvalModule, LaxKernel, Sign};
use crate::matrix::{Mat, Matrix, Ring};
use crate::relations::{check_relations, check_serre, RelationConfig};
use crate::report::{Category, CheckReport, Status};
use crate::series::TruncSeries;
use num_traits::Zero;
use rayon::prelude::*;

const SUITE: &str = "hopf";

/// Which central charge an argument shift refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Charge {
    /// `c ⊗ 1`.
    First,
    /// `1 ⊗ c`.
    Second,
    /// The charge of the module the antipode acts on.
    Own,
}

/// Argument shift `u -> u + (half_steps / 2) ħ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shift {
    pub half_steps: i32,
    pub charge: Charge,
}

impl Shift {
    pub const fn new(half_steps: i32, charge: Charge) -> Self {
        Shift { half_steps, charge }
    }

    /// Shift amount for charges `(c1, c2)`.
    pub fn amount(&self, hbar: &Rat, c1: &Rat, c2: &Rat) -> Rat {
        let c = match self.charge {
            Charge::First | Charge::Own => c1,
            Charge::Second => c2,
        };
        hbar * c * Rat::new(self.half_steps.into(), 2.into())
    }
}

/// Argument shifts appearing in the coproduct and antipode formulas.
pub mod shifts {
    use super::{Charge, Shift};
    /// `Δ(k±_j(u)) = k±_j(u ± ħc_2/2) ⊗ k±_j(u ∓ ħc_1/2)`, for `+`.
    pub const K_PLUS: [Shift; 2] = [Shift::new(1, Charge::Second), Shift::new(-1, Charge::First)];
    pub const K_MINUS: [Shift; 2] = [Shift::new(-1, Charge::Second), Shift::new(1, Charge::First)];
    /// `ψ_i(u + ħc_1/2) ⊗ X+_i(u + ħc_1)`.
    pub const XPLUS: [Shift; 2] = [Shift::new(1, Charge::First), Shift::new(2, Charge::First)];
    /// `X-_i(u + ħc_2) ⊗ φ_i(u + ħc_2/2)`.
    pub const XMINUS: [Shift; 2] = [Shift::new(2, Charge::Second), Shift::new(1, Charge::Second)];
    /// `S(X±_i(u))`: `X` at `u - ħc`, `ψ`/`φ` at `u - ħc/2`.
    pub const ANTIPODE: [Shift; 2] = [Shift::new(-2, Charge::Own), Shift::new(-1, Charge::Own)];
}

/// Fails unless every shift collapses, which is the only case the
/// modules here can represent.
pub fn require_unshifted(table: &[Shift], hbar: &Rat, c1: &Rat, c2: &Rat) -> Result<()> {
    if table.iter().all(|s| Zero::is_zero(&s.amount(hbar, c1, c2))) {
        Ok(())
    } else {
        Err(Error::Config("nonzero central charge: shifted arguments are not representable on evaluation modules".into()))
    }
}

fn kron<T: Ring>(a: &Matrix<T>, pa: &[Parity], b: &Matrix<T>, pb: &[Parity], signs: bool) -> Matrix<T> {
    graded_kron_with(a, pa, b, pb, signs)
}

/// The counit module: `k = 1`, `X = 0` on a one-dimensional even space.
pub fn trivial_currents(dims: GradedDims) -> RationalCurrents {
    let d = dims.dim();
    RationalCurrents {
        dims,
        w_parities: vec![0],
        xplus: vec![DeltaSum::zero(1); d - 1],
        xminus: vec![DeltaSum::zero(1); d - 1],
        k: vec![Matrix::identity(1); d],
    }
}

/// Coproduct images on `A ⊗ B` at `c = 0`. With `signs = false` the
/// Koszul signs of the graded tensor product are dropped (negative
/// control only).
pub fn coproduct(a: &RationalCurrents, b: &RationalCurrents, signs: bool) -> Result<RationalCurrents> {
    if a.dims != b.dims {
        return Err(Error::DimsMismatch(format!("coproduct of gl({}|{}) and gl({}|{}) modules", a.dims.m, a.dims.n, b.dims.m, b.dims.n)));
    }
    let (pa, pb) = (&a.w_parities, &b.w_parities);
    let (ia, ib) = (Mat::identity(a.w_dim()), Mat::identity(b.w_dim()));
    let d = a.dims.dim();
    let k = a.k.iter().zip(&b.k).map(|(x, y)| kron(x, pa, y, pb, signs)).collect();
    let mut xplus = Vec::with_capacity(d - 1);
    let mut xminus = Vec::with_capacity(d - 1);
    let size = a.w_dim() * b.w_dim();
    for i in 1..d {
        // X+_i ⊗ 1 + ψ_i ⊗ X+_i.
        let psi = a.ratio(i)?;
        let left = a.xplus[i - 1].map_terms(size, |_, r| Ok(kron(r, pa, &ib, pb, signs)))?;
        let right = b.xplus[i - 1].map_terms(size, |q, r| Ok(kron(&eval(&psi, q)?, pa, r, pb, signs)))?;
        xplus.push(left.add(&right));
        // 1 ⊗ X-_i + X-_i ⊗ φ_i.
        let phi = b.ratio(i)?;
        let left = b.xminus[i - 1].map_terms(size, |_, r| Ok(kron(&ia, pa, r, pb, signs)))?;
        let right = a.xminus[i - 1].map_terms(size, |p, r| Ok(kron(r, pa, &eval(&phi, p)?, pb, signs)))?;
        xminus.push(left.add(&right));
    }
    let w_parities = pa.iter().flat_map(|x| pb.iter().map(move |y| (x + y) % 2)).collect();
    Ok(RationalCurrents { dims: a.dims, w_parities, xplus, xminus, k })
}

fn eval(f: &Matrix<RatFun>, p: &Rat) -> Result<Mat> {
    crate::gauss::eval_at(f, Var::U, p)
}

fn gen_names(d: usize) -> Vec<(String, Gen)> {
    let mut out = Vec::new();
    for j in 1..=d {
        out.push((format!("k+_{j}"), Gen::K(Sign::Plus, j)));
        out.push((format!("k-_{j}"), Gen::K(Sign::Minus, j)));
    }
    for i in 1..d {
        out.push((format!("X+_{i}"), Gen::X(Sign::Plus, i)));
        out.push((format!("X-_{i}"), Gen::X(Sign::Minus, i)));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Gen {
    K(Sign, usize),
    X(Sign, usize),
}

fn series_of(cs: &CurrentSystem, g: Gen) -> &TruncSeries<Mat> {
    match g {
        Gen::K(s, j) => cs.k(s, j),
        Gen::X(s, i) => cs.x(s, i),
    }
}

fn rational_equal(a: &Matrix<RatFun>, b: &Matrix<RatFun>) -> bool {
    a.n() == b.n() && a.sub(b).is_zero()
}

fn delta_equal(a: &DeltaSum, b: &DeltaSum) -> bool {
    a.size == b.size && a.terms == b.terms
}

/// Compares two current systems generator by generator, both as
/// rational data and as series.
fn compare_generators(name: &str, x: &RationalCurrents, y: &RationalCurrents, order: i32) -> Vec<CheckReport> {
    let d = x.dims.dim();
    let systems = x.to_system(order).and_then(|a| Ok((a, y.to_system(order)?)));
    gen_names(d)
        .into_iter()
        .map(|(label, g)| {
            let mut r = CheckReport::new(SUITE, name).param("gen", &label);
            let (sx, sy) = match &systems {
                Ok(s) => s,
                Err(e) => return r.errored(e),
            };
            let exact = match g {
                Gen::K(_, j) => rational_equal(&x.k[j - 1], &y.k[j - 1]),
                Gen::X(Sign::Plus, i) => delta_equal(&x.xplus[i - 1], &y.xplus[i - 1]),
                Gen::X(Sign::Minus, i) => delta_equal(&x.xminus[i - 1], &y.xminus[i - 1]),
            };
            match series_of(sx, g).compare(series_of(sy, g)) {
                Ok(c) => r.absorb(&c),
                Err(e) => return r.errored(&e),
            }
            if !exact {
                r.status = Status::Fail;
                r = r.note("rational forms differ");
            }
            r
        })
        .collect()
}

/// Relation suite on `A ⊗ B` with every generator replaced by its
/// coproduct image, plus a summary matching it against the suite on `A`.
pub fn check_delta_homomorphism(a: &RationalCurrents, b: &RationalCurrents, hbar: &Rat, order: i32, cfg: &RelationConfig) -> Vec<CheckReport> {
    let run = || -> Result<(Vec<CheckReport>, Vec<CheckReport>)> {
        let t = coproduct(a, b, true)?.to_system(order)?;
        let single = a.to_system(order)?;
        let mut tensor = check_relations(&t, hbar, cfg);
        tensor.extend(check_serre(&t, hbar, cfg));
        let mut base = check_relations(&single, hbar, cfg);
        base.extend(check_serre(&single, hbar, cfg));
        Ok((tensor, base))
    };
    let (tensor, base) = match run() {
        Ok(x) => x,
        Err(e) => return vec![CheckReport::new(SUITE, "delta-homomorphism").errored(&e)],
    };
    let mut summary = CheckReport::new(SUITE, "delta-homomorphism-summary");
    let passes = |rs: &[CheckReport]| rs.iter().filter(|r| r.status == Status::Pass).count();
    let (pt, pb) = (passes(&tensor), passes(&base));
    summary.compared = tensor.len();
    summary = summary.note(format!("{pt} of {} instances pass on the tensor module, {pb} on the single module", tensor.len()));
    let ids = |rs: &[CheckReport]| rs.iter().map(|r| (r.name.clone(), r.params.clone(), r.status)).collect::<Vec<_>>();
    if ids(&tensor) != ids(&base) {
        summary.status = Status::Fail;
        summary = summary.note("statuses differ from the single-module suite");
    }
    let mut out: Vec<CheckReport> = tensor
        .into_iter()
        .map(|mut r| {
            r.params.insert("image".into(), "coproduct".into());
            r.params.insert("suite".into(), r.suite.clone());
            r.suite = SUITE.into();
            r
        })
        .collect();
    out.push(summary);
    out
}

/// Negative control: the relation suite on `A ⊗ B` assembled without
/// Koszul signs must lose at least one relation that holds with them.
pub fn check_sign_strip_control(a: &RationalCurrents, b: &RationalCurrents, hbar: &Rat, order: i32, cfg: &RelationConfig) -> CheckReport {
    let r = CheckReport::new(SUITE, "tensor-sign-strip");
    let run = || -> Result<(Vec<CheckReport>, Vec<CheckReport>)> {
        let good = coproduct(a, b, true)?.to_system(order)?;
        let bad = coproduct(a, b, false)?.to_system(order)?;
        let (g, b) = rayon::join(|| check_relations(&good, hbar, cfg), || check_relations(&bad, hbar, cfg));
        Ok((g, b))
    };
    let (good, bad) = match run() {
        Ok(x) => x,
        Err(e) => return r.errored(&e).category(Category::Control),
    };
    let broken: Vec<&CheckReport> = good
        .iter()
        .zip(&bad)
        .filter(|(g, b)| g.status == Status::Pass && b.status == Status::Fail)
        .map(|(_, b)| b)
        .collect();
    let mut r = r;
    match broken.first() {
        Some(b) => {
            r.status = Status::Fail;
            r.witness = b.witness.clone();
            r = r.note(format!("{} relation instances fail without signs, first {}", broken.len(), b.name));
        }
        None => r.status = Status::Pass,
    }
    r.as_control()
}

/// `(ε ⊗ id)Δ(g) = g` and `(id ⊗ ε)Δ(g) = g`, executed with the counit
/// module as a tensor factor.
pub fn check_counit(a: &RationalCurrents, order: i32) -> Vec<CheckReport> {
    let e = trivial_currents(a.dims);
    let mut out = Vec::new();
    for (name, left) in [("counit-left", true), ("counit-right", false)] {
        let image = if left { coproduct(&e, a, true) } else { coproduct(a, &e, true) };
        match image {
            Ok(t) => out.extend(compare_generators(name, &t, a, order)),
            Err(err) => out.push(CheckReport::new(SUITE, name).errored(&err)),
        }
    }
    out.push(CheckReport::new(SUITE, "counit-left").param("gen", "c").note("ε(c) = 0 and Δ(c) = 0 at c = 0"));
    out.push(CheckReport::new(SUITE, "counit-right").param("gen", "c").note("ε(c) = 0 and Δ(c) = 0 at c = 0"));
    out
}

/// `m(S ⊗ id)Δ(g) = ε(g) 1` and `m(id ⊗ S)Δ(g) = ε(g) 1` in one module.
pub fn check_antipode(a: &RationalCurrents, order: i32) -> Vec<CheckReport> {
    let d = a.dims.dim();
    let mut out = Vec::new();
    let system = a.to_system(order);
    for j in 1..=d {
        for s in [Sign::Plus, Sign::Minus] {
            for (name, left) in [("antipode-left", true), ("antipode-right", false)] {
                let mut r = CheckReport::new(SUITE, name).param("gen", format!("k{}_{j}", s.symbol()));
                let cs = match &system {
                    Ok(cs) => cs,
                    Err(e) => {
                        out.push(r.errored(e));
                        continue;
                    }
                };
                // S(k) = k^{-1}; ε(k) = 1.
                let prod = if left { cs.k_inv(s, j).mul(cs.k(s, j)) } else { cs.k(s, j).mul(cs.k_inv(s, j)) };
                let one = TruncSeries::constant(Mat::identity(a.w_dim()));
                match prod.and_then(|p| p.compare(&one)) {
                    Ok(c) => r.absorb(&c),
                    Err(e) => r = r.errored(&e),
                }
                out.push(r);
            }
        }
    }
    for i in 1..d {
        for s in [Sign::Plus, Sign::Minus] {
            for (name, left) in [("antipode-left", true), ("antipode-right", false)] {
                let r = CheckReport::new(SUITE, name).param("gen", format!("X{}_{i}", s.symbol()));
                out.push(match antipode_x(a, i, s, left) {
                    Ok(res) => {
                        let mut r = r;
                        let z = res.series(Var::U, order);
                        let zero = DeltaSum::zero(a.w_dim()).series(Var::U, order);
                        match z.compare(&zero) {
                            Ok(c) => r.absorb(&c),
                            Err(e) => return vec![r.errored(&e)],
                        }
                        if !res.terms.is_empty() {
                            r.status = Status::Fail;
                            r = r.note("nonzero residues remain");
                        }
                        r
                    }
                    Err(e) => r.errored(&e),
                });
            }
        }
    }
    out.push(CheckReport::new(SUITE, "antipode-left").param("gen", "c").note("S(c) = -c = 0 at c = 0"));
    out.push(CheckReport::new(SUITE, "antipode-right").param("gen", "c").note("S(c) = -c = 0 at c = 0"));
    out
}

/// The delta-supported operator `m(S ⊗ id)Δ(X±_i)` or `m(id ⊗ S)Δ(X±_i)`.
///
/// `ψ_i` has a pole or zero at the module's own points, so each term's
/// rational prefactors are multiplied out before evaluating on the
/// delta support.
fn antipode_x(a: &RationalCurrents, i: usize, s: Sign, left: bool) -> Result<DeltaSum> {
    let size = a.w_dim();
    let one = Matrix::<RatFun>::identity(size);
    let ratio = a.ratio(i)?;
    let ratio_inv = ratio.inverse().ok_or(Error::PivotSingular { index: i })?;
    // S(ψ_i) = S(k_i^{-1}) S(k_{i+1}) = k_i k_{i+1}^{-1}, and likewise for φ_i.
    let k_next_inv = a.k[i].inverse().ok_or(Error::PivotSingular { index: i + 1 })?;
    let s_ratio = a.k[i - 1].mul(&k_next_inv);
    let minus = |f: &Matrix<RatFun>| f.neg();
    // Prefactor of X in each of the two terms.
    let (p1, p2) = match (s, left) {
        // S(X+)·1 + S(ψ)·X+ = (-ψ^{-1} + S(ψ)) X+.
        (Sign::Plus, true) => (minus(&ratio_inv), s_ratio),
        // X+·S(1) + ψ·S(X+) = (1 - ψ ψ^{-1}) X+.
        (Sign::Plus, false) => (one, minus(&ratio.mul(&ratio_inv))),
        // S(1)·X- + S(X-)·φ = X- (1 - φ^{-1} φ).
        (Sign::Minus, true) => (one, minus(&ratio_inv.mul(&ratio))),
        // 1·S(X-) + X-·S(φ) = X- (-φ^{-1} + S(φ)).
        (Sign::Minus, false) => (minus(&ratio_inv), s_ratio),
    };
    let prefactor = p1.add(&p2);
    match s {
        Sign::Plus => a.xplus[i - 1].left_eval(&prefactor, Var::U),
        Sign::Minus => a.xminus[i - 1].right_eval(&prefactor, Var::U),
    }
}

/// `(Δ ⊗ id)Δ(g) = (id ⊗ Δ)Δ(g)` on `A ⊗ B ⊗ C`.
pub fn check_coassociativity(a: &RationalCurrents, b: &RationalCurrents, c: &RationalCurrents, order: i32) -> Vec<CheckReport> {
    let run = || -> Result<(RationalCurrents, RationalCurrents)> {
        let left = coproduct(&coproduct(a, b, true)?, c, true)?;
        let right = coproduct(a, &coproduct(b, c, true)?, true)?;
        Ok((left, right))
    };
    match run() {
        Ok((l, r)) => compare_generators("coassociativity", &l, &r, order),
        Err(e) => vec![CheckReport::new(SUITE, "coassociativity").errored(&e)],
    }
}

/// `Δ(ψ_i) = ψ_i ⊗ ψ_i` and `Δ(φ_i) = φ_i ⊗ φ_i` as series identities.
pub fn check_grouplike(a: &RationalCurrents, b: &RationalCurrents, order: i32) -> Vec<CheckReport> {
    let run = || -> Result<(CurrentSystem, CurrentSystem, CurrentSystem)> {
        Ok((coproduct(a, b, true)?.to_system(order)?, a.to_system(order)?, b.to_system(order)?))
    };
    let (t, sa, sb) = match run() {
        Ok(x) => x,
        Err(e) => return vec![CheckReport::new(SUITE, "grouplike").errored(&e)],
    };
    let (pa, pb) = (&a.w_parities, &b.w_parities);
    let mut out = Vec::new();
    for i in 1..a.dims.dim() {
        for (label, img, x, y) in [("psi", &t.psi, &sa.psi, &sb.psi), ("phi", &t.phi, &sa.phi, &sb.phi)] {
            let mut r = CheckReport::new(SUITE, "grouplike").param("gen", format!("{label}_{i}"));
            let rhs = x[i - 1].mul_with(&y[i - 1], |p, q| kron(p, pa, q, pb, true));
            match rhs.and_then(|rhs| img[i - 1].compare(&rhs)) {
                Ok(c) => r.absorb(&c),
                Err(e) => r = r.errored(&e),
            }
            out.push(r);
        }
    }
    out
}

/// Everything the Hopf suite runs for one set of points: the
/// Δ-homomorphism on the first two modules, counit and antipode on each,
/// grouplikeness, the sign control and coassociativity when three
/// points are given.
pub fn check_hopf(dims: GradedDims, hbar: &Rat, points: &[Rat], order: i32, cfg: &RelationConfig) -> Result<Vec<CheckReport>> {
    if points.len() < 2 || points.len() > 3 {
        return Err(Error::Config("the Hopf suite takes two or three evaluation points".into()));
    }
    let zero = <Rat as Zero>::zero();
    for t in [&shifts::K_PLUS[..], &shifts::K_MINUS, &shifts::XPLUS, &shifts::XMINUS, &shifts::ANTIPODE] {
        require_unshifted(t, hbar, &zero, &zero)?;
    }
    let modules: Vec<RationalCurrents> = points
        .par_iter()
        .map(|p| RationalCurrents::from_kernel(&LaxKernel::evaluation(&EvalModule::new(dims, p.clone(), hbar.clone())?)?))
        .collect::<Result<_>>()?;
    let (a, b) = (&modules[0], &modules[1]);
    let mut out = check_delta_homomorphism(a, b, hbar, order, cfg);
    out.push(check_sign_strip_control(a, b, hbar, order, cfg));
    out.extend(check_grouplike(a, b, order));
    for (p, m) in points.iter().zip(&modules) {
        let tag = crate::exact::fmt_rat(p);
        out.extend(check_counit(m, order).into_iter().map(|r| r.param("point", &tag)));
        out.extend(check_antipode(m, order).into_iter().map(|r| r.param("point", &tag)));
    }
    match modules.get(2) {
        Some(c) => out.extend(check_coassociativity(a, b, c, order)),
        None => out.push(
            CheckReport::new(SUITE, "coassociativity").category(Category::Stated).skipped("needs three evaluation points"),
        ),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::graded::graded_kron_spaces;
    use crate::relations::{describe, DeltaSign};

    fn module(m: usize, n: usize, a: i64) -> RationalCurrents {
        let d = GradedDims::new(m, n).unwrap();
        RationalCurrents::from_kernel(&LaxKernel::evaluation(&EvalModule::new(d, int(a), rat(1, 2)).unwrap()).unwrap()).unwrap()
    }

    fn not_passing(rs: &[CheckReport]) -> Vec<String> {
        rs.iter().filter(|r| r.status != Status::Pass && r.status != Status::Skipped).map(describe).collect()
    }

    #[test]
    fn coproduct_of_k_is_the_graded_tensor_square() {
        let (a, b) = (module(1, 1, 3), module(1, 1, 5));
        let t = coproduct(&a, &b, true).unwrap();
        for j in 0..2 {
            assert!(rational_equal(&t.k[j], &graded_kron_spaces(&a.k[j], &a.w_parities, &b.k[j], &b.w_parities)));
        }
        assert_eq!(t.w_parities, vec![0, 1, 1, 0]);
        // Both points carry X+ after the coproduct.
        let pts: Vec<Rat> = t.xplus[0].terms.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(pts, vec![int(3), int(5)]);
    }

    #[test]
    fn trivial_factor_reproduces_the_module() {
        let a = module(2, 1, 3);
        let e = trivial_currents(a.dims);
        let t = coproduct(&e, &a, true).unwrap();
        assert_eq!(t.xplus, a.xplus);
        assert_eq!(t.xminus, a.xminus);
        let rs = check_counit(&a, 6);
        assert!(not_passing(&rs).is_empty(), "{:?}", not_passing(&rs));
        assert_eq!(rs.len(), 2 * (6 + 4) + 2);
    }

    #[test]
    fn counit_module_satisfies_the_relations() {
        let e = trivial_currents(GradedDims::new(2, 1).unwrap()).to_system(6).unwrap();
        let rs = check_relations(&e, &rat(1, 2), &RelationConfig::default());
        assert!(not_passing(&rs).is_empty(), "{:?}", not_passing(&rs));
    }

    #[test]
    fn antipode_axioms_hold_per_generator() {
        for (m, n) in [(1, 1), (2, 1), (1, 2)] {
            let rs = check_antipode(&module(m, n, 3), 6);
            assert!(not_passing(&rs).is_empty(), "gl({m}|{n}) {:?}", not_passing(&rs));
            let d = m + n;
            assert_eq!(rs.len(), 2 * (2 * d + 2 * (d - 1)) + 2);
        }
    }

    #[test]
    fn antipode_on_xplus_cancels_exactly() {
        // -ψ^{-1} X+ + S(ψ) X+ assembled by hand on gl(1|1).
        let a = module(1, 1, 3);
        let psi_inv = a.ratio(1).unwrap().inverse().unwrap();
        let s_psi = a.k[0].mul(&a.k[1].inverse().unwrap());
        assert!(rational_equal(&psi_inv, &s_psi));
        let res = antipode_x(&a, 1, Sign::Plus, true).unwrap();
        assert!(res.terms.is_empty());
    }

    #[test]
    fn coassociativity_matches_three_term_oracle() {
        let (a, b, c) = (module(1, 1, 3), module(1, 1, 5), module(1, 1, 7));
        let rs = check_coassociativity(&a, &b, &c, 6);
        assert!(not_passing(&rs).is_empty(), "{:?}", not_passing(&rs));
        assert_eq!(rs.len(), 6);

        // X+ ⊗ 1 ⊗ 1 + ψ ⊗ X+ ⊗ 1 + ψ ⊗ ψ ⊗ X+ and the mirrored X- sum.
        let (pa, pb, pc) = (&a.w_parities, &b.w_parities, &c.w_parities);
        let pab: Vec<Parity> = pa.iter().flat_map(|x| pb.iter().map(move |y| (x + y) % 2)).collect();
        let k3 = |x: &Mat, y: &Mat, z: &Mat| graded_kron_spaces(&graded_kron_spaces(x, pa, y, pb), &pab, z, pc);
        let one = Mat::identity(2);
        let at = |m: &RationalCurrents, p: &Rat| eval(&m.ratio(1).unwrap(), p).unwrap();
        let mut plus = DeltaSum::zero(8);
        let mut minus = DeltaSum::zero(8);
        for (p, r) in &a.xplus[0].terms {
            plus = plus.add(&DeltaSum { size: 8, terms: vec![(p.clone(), k3(r, &one, &one))] });
        }
        for (p, r) in &b.xplus[0].terms {
            plus = plus.add(&DeltaSum { size: 8, terms: vec![(p.clone(), k3(&at(&a, p), r, &one))] });
        }
        for (p, r) in &c.xplus[0].terms {
            plus = plus.add(&DeltaSum { size: 8, terms: vec![(p.clone(), k3(&at(&a, p), &at(&b, p), r))] });
        }
        for (p, r) in &c.xminus[0].terms {
            minus = minus.add(&DeltaSum { size: 8, terms: vec![(p.clone(), k3(&one, &one, r))] });
        }
        for (p, r) in &b.xminus[0].terms {
            minus = minus.add(&DeltaSum { size: 8, terms: vec![(p.clone(), k3(&one, r, &at(&c, p)))] });
        }
        for (p, r) in &a.xminus[0].terms {
            minus = minus.add(&DeltaSum { size: 8, terms: vec![(p.clone(), k3(r, &at(&b, p), &at(&c, p)))] });
        }
        let left = coproduct(&coproduct(&a, &b, true).unwrap(), &c, true).unwrap();
        assert_eq!(left.xplus[0], plus);
        assert_eq!(left.xminus[0], minus);
    }

    #[test]
    fn psi_and_phi_are_grouplike() {
        let rs = check_grouplike(&module(2, 1, 3), &module(2, 1, 5), 6);
        assert_eq!(rs.len(), 4);
        assert!(not_passing(&rs).is_empty(), "{:?}", not_passing(&rs));
        assert!(rs.iter().all(|r| r.compared > 0));
    }

    #[test]
    fn delta_homomorphism_mirrors_single_module_suite() {
        for (m, n) in [(1, 1), (2, 1)] {
            let (a, b) = (module(m, n, 3), module(m, n, 5));
            let h = rat(1, 2);
            let stated = check_delta_homomorphism(&a, &b, &h, 6, &RelationConfig::default());
            let fails: Vec<&CheckReport> = stated.iter().filter(|r| r.status == Status::Fail).collect();
            assert_eq!(fails.len(), 1, "{:?}", not_passing(&stated));
            assert_eq!(fails[0].name, "XplusXminus-anticommutator");
            assert_eq!(stated.last().unwrap().status, Status::Pass);
            let cfg = RelationConfig { delta_sign: DeltaSign::Corrected, only: None };
            let fixed = check_delta_homomorphism(&a, &b, &h, 6, &cfg);
            assert!(not_passing(&fixed).is_empty(), "{:?}", not_passing(&fixed));
        }
    }

    #[test]
    fn dropping_tensor_signs_breaks_relations() {
        let r = check_sign_strip_control(&module(2, 1, 3), &module(2, 1, 5), &rat(1, 2), 6, &RelationConfig::default());
        assert_eq!(r.category, Category::Control);
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn shifts_vanish_only_at_zero_charge() {
        let h = rat(1, 2);
        let z = int(0);
        assert!(require_unshifted(&shifts::XPLUS, &h, &z, &z).is_ok());
        assert!(require_unshifted(&shifts::XPLUS, &h, &int(1), &z).is_err());
        assert!(require_unshifted(&shifts::XPLUS, &h, &z, &int(1)).is_ok());
        assert!(require_unshifted(&shifts::XMINUS, &h, &z, &int(1)).is_err());
        assert_eq!(shifts::K_PLUS[0].amount(&h, &z, &int(2)), rat(1, 2));
        assert_eq!(shifts::ANTIPODE[0].amount(&h, &int(1), &z), rat(-1, 2));
    }

    #[test]
    fn mismatched_modules_are_rejected() {
        assert!(coproduct(&module(1, 1, 3), &module(2, 1, 5), true).is_err());
        let d = GradedDims::new(1, 1).unwrap();
        assert!(check_hopf(d, &rat(1, 2), &[int(3)], 6, &RelationConfig::default()).is_err());
    }

    #[test]
    fn full_suite_on_three_points() {
        let pts = [int(3), int(5), int(7)];
        let rs = check_hopf(GradedDims::new(1, 1).unwrap(), &rat(1, 2), &pts, 6, &RelationConfig::default()).unwrap();
        let bad = not_passing(&rs);
        assert_eq!(bad.len(), 1, "{bad:?}");
        assert!(bad[0].contains("XplusXminus-anticommutator"));
        assert!(rs.iter().any(|r| r.name == "coassociativity" && r.status == Status::Pass));
    }
}
