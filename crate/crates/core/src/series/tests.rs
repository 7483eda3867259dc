use super::*;
use crate::exact::{int, rat, RatFun};
use crate::matrix::Mat;
use num_traits::Zero;
use proptest::prelude::*;

fn lin(v: Var, a: i64) -> Poly {
    Poly::var_minus(v, &int(a))
}

fn rf(num: Poly, den: Poly) -> RatFun {
    RatFun::new(num, den).unwrap()
}

fn table(s: &TruncSeries<Rat>) -> Vec<(i32, Rat)> {
    s.coeffs().iter().map(|(e, c)| (e[0], c.clone())).collect()
}

#[test]
fn geometric_at_infinity() {
    let s = expand_at_infinity(&rf(Poly::one(), lin(Var::U, 2)), Var::U, 3).unwrap();
    assert_eq!(table(&s), vec![(-3, int(4)), (-2, int(2)), (-1, int(1))]);
    assert_eq!(s.windows()[0], Window::at_least(-3));
    assert_eq!(s.supports()[0], Window::at_most(-1));
}

/// Coefficients of `num/den` at infinity by schoolbook long division.
fn long_division(num: &[Rat], den: &[Rat], n: i32) -> Vec<(i32, Rat)> {
    // num, den are highest degree first.
    let top = num.len() as i32 - den.len() as i32;
    let mut rem: Vec<Rat> = num.to_vec();
    rem.resize(num.len() + (n + top).max(0) as usize + 2, Rat::zero());
    let mut out = Vec::new();
    let mut e = top;
    let mut pos = 0;
    while e >= -n {
        let q = &rem[pos] / &den[0];
        for (k, d) in den.iter().enumerate() {
            rem[pos + k] -= &q * d;
        }
        if !Zero::is_zero(&q) {
            out.push((e, q));
        }
        pos += 1;
        e -= 1;
    }
    out.reverse();
    out
}

#[test]
fn shifted_pole_at_infinity() {
    // u/(u+2ħ) with ħ = 1/2.
    let f = rf(Poly::var(Var::U), lin(Var::U, -1));
    let s = expand_at_infinity(&f, Var::U, 2).unwrap();
    let oracle = long_division(&[int(1), int(0)], &[int(1), int(1)], 2);
    assert_eq!(table(&s), oracle);
    assert_eq!(table(&s), vec![(-2, int(1)), (-1, int(-1)), (0, int(1))]);
    let back = s.mul_poly(&lin(Var::U, -1)).unwrap();
    let exact = TruncSeries::from_poly(&Poly::var(Var::U)).restrict(&[(Var::U, back.windows()[0])]).unwrap();
    assert!(back.compare(&exact).unwrap().equal());
}

#[test]
fn constant_expansion() {
    let s = expand_at_infinity(&RatFun::one(), Var::U, 4).unwrap();
    assert_eq!(table(&s), vec![(0, int(1))]);
}

#[test]
fn taylor_at_zero() {
    let s = expand_at_zero(&rf(Poly::one(), lin(Var::U, 2)), Var::U, 2).unwrap();
    assert_eq!(table(&s), vec![(0, rat(-1, 2)), (1, rat(-1, 4)), (2, rat(-1, 8))]);
    assert_eq!(expand_at_zero(&rf(Poly::one(), Poly::var(Var::U)), Var::U, 2), Err(Error::PoleAtZero));
    // (2ħ - u)/(u + 2ħ) with ħ = 1/2; synthetic division of (1 - u) by (1 + u).
    let f = rf(Poly::one().sub(&Poly::var(Var::U)), lin(Var::U, -1));
    let s = expand_at_zero(&f, Var::U, 1).unwrap();
    let mut rem = [int(1), int(-1), int(0)];
    let mut oracle = Vec::new();
    for k in 0..2 {
        let q = rem[k].clone();
        rem[k] -= &q;
        rem[k + 1] -= &q;
        oracle.push((k as i32, q));
    }
    assert_eq!(table(&s), oracle);
    assert_eq!(table(&s), vec![(0, int(1)), (1, int(-2))]);
}

#[test]
fn delta_antidiagonal() {
    let d = delta_series(1);
    let keys: Vec<Vec<i32>> = d.coeffs().keys().cloned().collect();
    assert_eq!(keys, vec![vec![-1, 0], vec![0, -1], vec![1, -2]]);
    assert!(d.is_delta());
}

#[test]
fn delta_is_difference_of_expansions() {
    let f = rf(Poly::one(), lin(Var::U, 2));
    let diff = expand_at_infinity(&f, Var::U, 4)
        .unwrap()
        .sub(&expand_at_zero(&f, Var::U, 4).unwrap())
        .unwrap();
    let d = delta_eval(&int(2), Var::U, 4);
    let diff = diff.restrict(&[(Var::U, Window::new(-4, 4))]).unwrap();
    // Direct oracle: u^e has coefficient 2^{-e-1}.
    for e in -4..=4 {
        let want = if e >= 0 { rat(1, 1 << (e + 1)) } else { int(1 << (-e - 1)) };
        assert_eq!(diff.get(&[e]).unwrap().cloned().unwrap_or_default(), want);
    }
    assert!(diff.compare(&d).unwrap().equal());
    let dist = distribution_series(&int(2), 1, Var::U, 4).unwrap();
    assert!(dist.compare(&d).unwrap().equal());
}

fn u_minus_v() -> Poly {
    Poly::var(Var::U).sub(&Poly::var(Var::V))
}

#[test]
fn delta_annihilated_by_difference() {
    for n in [2, 4, 8] {
        let p = delta_series(n).mul_poly(&u_minus_v()).unwrap();
        assert!(p.is_zero(), "N={n}");
        assert!(p.windows()[0].len().unwrap() > 0);
    }
}

#[test]
fn telescoping_product() {
    let n = 6;
    let geo = TruncSeries::new(
        vec![Var::U],
        vec![Window::new(0, n)],
        vec![Window::at_least(0)],
        (0..=n).map(|k| (vec![k], int(1))),
    )
    .unwrap();
    let p = geo.mul_poly(&Poly::one().sub(&Poly::var(Var::U))).unwrap();
    assert_eq!(table(&p), vec![(0, int(1))]);
    // The top coefficient cancels exactly because geo_n is known; only
    // exponents above n are unknown.
    assert_eq!(p.windows()[0], Window::at_most(n));
}

#[test]
fn independent_variables_outer_product() {
    let s = expand_at_infinity(&rf(Poly::one(), lin(Var::U, 2)), Var::U, 3).unwrap();
    let t = expand_at_zero(&rf(Poly::one(), lin(Var::V, 3)), Var::V, 3).unwrap();
    let p = s.mul(&t).unwrap();
    for (es, cs) in s.coeffs() {
        for (et, ct) in t.coeffs() {
            assert_eq!(p.get(&[es[0], et[0]]).unwrap(), Some(&(cs * ct)));
        }
    }
    assert_eq!(p.nonzero_count(), s.nonzero_count() * t.nonzero_count());
}

#[test]
fn delta_times_current() {
    let n = 4;
    let k = expand_at_infinity(&rf(Poly::one(), lin(Var::V, 3)), Var::V, 4 * n).unwrap();
    let p = delta_series(n).mul(&k).unwrap();
    assert!(!p.is_zero());
    // Direct double sum Σ_k u^k v^{-k-1} · Σ_j 3^{-j-1} v^j, j ≤ -1.
    let mut oracle = std::collections::BTreeMap::new();
    for kk in -40..=40 {
        for j in -80..=-1 {
            let e = vec![kk, j - kk - 1];
            if p.windows()[0].contains(e[0]) && p.windows()[1].contains(e[1]) {
                *oracle.entry(e).or_insert_with(Rat::zero) += crate::exact::rat::pow_i(&int(3), -j - 1);
            }
        }
    }
    oracle.retain(|_, c: &mut Rat| !Zero::is_zero(c));
    assert_eq!(p.coeffs(), &oracle);
}

#[test]
fn inverse_examples() {
    let one = TruncSeries::constant(int(1));
    assert_eq!(one.inverse().unwrap(), one);
    let f = rf(lin(Var::U, 2), lin(Var::U, 3));
    let s = expand_at_infinity(&f, Var::U, 5).unwrap();
    let inv = s.inverse().unwrap();
    let direct = expand_at_infinity(&f.inv().unwrap(), Var::U, 5).unwrap();
    assert!(inv.compare(&direct).unwrap().equal());
    assert_eq!(inv.windows()[0], Window::at_least(-5));
    let prod = s.mul(&inv).unwrap();
    assert_eq!(table(&prod), vec![(0, int(1))]);
    // Zero constant term at zero.
    let z = expand_at_zero(&rf(Poly::var(Var::U), lin(Var::U, 1)), Var::U, 3)
        .unwrap()
        .restrict(&[(Var::U, Window::new(0, 3))])
        .unwrap();
    let z = TruncSeries::new(vec![Var::U], z.windows().to_vec(), vec![Window::at_least(0)], z.coeffs().clone()).unwrap();
    assert!(matches!(z.inverse(), Err(Error::PivotSingular { .. })));
}

#[test]
fn matrix_inverse_series() {
    // [[1, 1/u], [0, 1]] at infinity.
    let mut m = crate::matrix::Matrix::<RatFun>::identity(2);
    m.set(0, 1, rf(Poly::one(), Poly::var(Var::U)));
    let s = expand_matrix(&m, Var::U, Direction::AtInfinity, 4).unwrap();
    let inv = s.inverse().unwrap();
    let prod = s.mul(&inv).unwrap();
    assert_eq!(prod.coeffs().len(), 1);
    assert_eq!(prod.coeffs()[&vec![0]], Mat::identity(2));
}

#[test]
fn partial_fraction_reconstructs() {
    // (u^3 + 1) / ((u-1)^2 (u+2))
    let den = lin(Var::U, 1).pow(2).mul(&lin(Var::U, -2));
    let num = Poly::var(Var::U).pow(3).add(&Poly::one());
    let f = rf(num, den);
    let pf = partial_fractions(&f, Var::U).unwrap();
    for x in [-5, 0, 3, 7] {
        let a = [(Var::U, int(x))].into_iter().collect();
        assert_eq!(pf.eval(&int(x)), f.eval(&a).unwrap());
    }
    let irr = rf(Poly::one(), Poly::var(Var::U).pow(2).add(&Poly::one()));
    assert!(matches!(partial_fractions(&irr, Var::U), Err(Error::NonSplitDenominator(_))));
}

#[test]
fn shifted_expansion_matches_substitution() {
    // 1/(x + 1)^2 at x = u - v, u large.
    let f = rf(Poly::one(), lin(Var::U, -1).pow(2));
    let n = 6;
    let s = expand_shifted(&f, Var::U, (Var::U, 1), (Var::V, -1), n).unwrap();
    // Multiply back by (u - v + 1)^2; exact product is 1.
    let d = u_minus_v().add(&Poly::one()).pow(2);
    let back = s.mul_poly(&d).unwrap();
    let w = back.windows()[0];
    assert!(w.contains(-n + 2));
    for (e, c) in back.coeffs() {
        assert_eq!((e.as_slice(), c), (&[0, 0][..], &int(1)));
    }
    // Wrong direction: with v large the expansion is in v.
    let t = expand_shifted(&f, Var::U, (Var::V, -1), (Var::U, 1), n).unwrap();
    assert!(t.mul(&s).is_err());
}

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| rat(a, b))
}

/// Random expansion at zero of `(a + b u) / (1 + c u + d u^2)`.
fn arb_series(var: Var, n: i32) -> impl Strategy<Value = (RatFun, TruncSeries<Rat>)> {
    (arb_rat(), arb_rat(), arb_rat(), arb_rat()).prop_map(move |(a, b, c, d)| {
        let x = Poly::var(var);
        let num = Poly::constant(a).add(&x.scale(&b));
        let den = Poly::one().add(&x.scale(&c)).add(&x.pow(2).scale(&d));
        let f = rf(num, den);
        let s = expand_at_zero(&f, var, n).unwrap();
        (f, s)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn window_soundness((f, s) in arb_series(Var::U, 6), (g, t) in arb_series(Var::U, 6)) {
        let p = s.mul(&t).unwrap();
        let big = expand_at_zero(&f, Var::U, 8).unwrap().mul(&expand_at_zero(&g, Var::U, 8).unwrap()).unwrap();
        let restricted = big.restrict(&[(Var::U, p.windows()[0])]).unwrap();
        prop_assert!(p.compare(&restricted).unwrap().equal());
    }

    #[test]
    fn associativity((_, a) in arb_series(Var::U, 6), (_, b) in arb_series(Var::U, 5), (_, c) in arb_series(Var::V, 4)) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(l.compare(&r).unwrap().equal());
    }

    #[test]
    fn delta_kills_difference_for_any_scaling(k in 1i32..10, c in arb_rat()) {
        let p = delta_series(k).scale(&c).mul_poly(&u_minus_v()).unwrap();
        prop_assert!(p.is_zero());
    }
}
