//! Expansions of rational functions at infinity and at zero.

use super::window::Window;
use super::TruncSeries;
use crate::error::{Error, Result};
use crate::exact::{rat::binom, Rat, RatFun, UPoly, Var};
use crate::matrix::{Mat, Matrix};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Descending powers; the `+` convention.
    AtInfinity,
    /// Ascending powers; the `-` convention.
    AtZero,
}

fn univariate(f: &RatFun, var: Var) -> Result<(UPoly, UPoly)> {
    f.to_upolys(var)
        .ok_or_else(|| Error::DimsMismatch(format!("{f} is not a function of {var} alone")))
}

/// Coefficients `q_0..=q_k` of the power series `a(t)/b(t)`, `b_0 ≠ 0`.
fn series_quotient(a: &UPoly, b: &UPoly, k: usize) -> Vec<Rat> {
    let inv = b.coeff(0).recip();
    let mut q: Vec<Rat> = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let mut acc = a.coeff(j);
        for i in 1..=j.min(b.0.len().saturating_sub(1)) {
            acc -= b.coeff(i) * &q[j - i];
        }
        q.push(acc * &inv);
    }
    q
}

/// Expansion in descending powers of `var`, exact for exponents `≥ -n`.
/// The window is `[-n, ∞)`; the support ends at `deg(num) - deg(den)`.
pub fn expand_at_infinity(f: &RatFun, var: Var, n: i32) -> Result<TruncSeries<Rat>> {
    let (num, den) = univariate(f, var)?;
    let Some(dn) = num.degree() else {
        return TruncSeries::new(vec![var], vec![Window::at_least(-n)], vec![Window::point(0)], []);
    };
    let dd = den.degree().unwrap();
    let top = dn as i32 - dd as i32;
    let rev = |p: &UPoly| UPoly::new(p.0.iter().rev().cloned().collect());
    let coeffs = if top + n >= 0 {
        series_quotient(&rev(&num), &rev(&den), (top + n) as usize)
    } else {
        Vec::new()
    };
    TruncSeries::new(
        vec![var],
        vec![Window::at_least(-n)],
        vec![Window::at_most(top)],
        coeffs.into_iter().enumerate().map(|(j, c)| (vec![top - j as i32], c)),
    )
}

/// Taylor expansion at zero, exact for exponents `≤ n`.
pub fn expand_at_zero(f: &RatFun, var: Var, n: i32) -> Result<TruncSeries<Rat>> {
    let (num, den) = univariate(f, var)?;
    if den.coeff(0).is_zero() {
        return Err(Error::PoleAtZero);
    }
    let coeffs = if n >= 0 { series_quotient(&num, &den, n as usize) } else { Vec::new() };
    TruncSeries::new(
        vec![var],
        vec![Window::at_most(n)],
        vec![Window::at_least(0)],
        coeffs.into_iter().enumerate().map(|(j, c)| (vec![j as i32], c)),
    )
}

/// Entrywise expansion of a matrix of one-variable rational functions.
pub fn expand_matrix(m: &Matrix<RatFun>, var: Var, dir: Direction, n: i32) -> Result<TruncSeries<Mat>> {
    let size = m.n();
    let mut window = match dir {
        Direction::AtInfinity => Window::at_least(-n),
        Direction::AtZero => Window::at_most(n),
    };
    let mut support: Option<Window> = None;
    let mut acc: BTreeMap<Vec<i32>, Mat> = BTreeMap::new();
    for (i, j, f) in m.nonzeros() {
        let s = match dir {
            Direction::AtInfinity => expand_at_infinity(f, var, n)?,
            Direction::AtZero => expand_at_zero(f, var, n)?,
        };
        let s = s.embed(&[var]);
        window = window.intersect(&s.windows()[0]).expect("expansion windows overlap");
        support = Some(support.map_or(s.supports()[0], |x| x.hull(&s.supports()[0])));
        for (e, c) in s.coeffs() {
            acc.entry(e.clone()).or_insert_with(|| Mat::zeros(size)).set(i, j, c.clone());
        }
    }
    TruncSeries::new(vec![var], vec![window], vec![support.unwrap_or(Window::point(0))], acc)
}

/// `f = poly + Σ_p Σ_j c_{p,j} (x - p)^{-j}` over rational poles.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    pub poly: UPoly,
    /// `(p, [c_{p,1}, c_{p,2}, ...])`, poles ascending.
    pub poles: Vec<(Rat, Vec<Rat>)>,
}

impl PartialFractions {
    /// Evaluates the decomposition at a non-pole point.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = self.poly.eval(x);
        for (p, cs) in &self.poles {
            let d = x - p;
            for (j, c) in cs.iter().enumerate() {
                acc += c / num_traits::pow(d.clone(), j + 1);
            }
        }
        acc
    }
}

/// Partial fractions of a one-variable rational function whose
/// denominator splits over the rationals.
pub fn partial_fractions(f: &RatFun, var: Var) -> Result<PartialFractions> {
    let (num, den) = univariate(f, var)?;
    let (poly, rem) = num.div_rem(&den);
    let roots = den
        .rational_roots()
        .ok_or_else(|| Error::NonSplitDenominator(f.den().to_string()))?;
    let mut poles = Vec::new();
    for (p, k) in roots {
        let mut lin = UPoly::constant(Rat::one());
        for _ in 0..k {
            lin = lin.mul(&UPoly::linear_root(&p));
        }
        let (rest, _) = den.div_rem(&lin);
        let h = series_quotient(&rem.taylor_shift(&p), &rest.taylor_shift(&p), k - 1);
        // Coefficient of (x-p)^{-m} is h_{k-m}.
        let cs: Vec<Rat> = (1..=k).map(|m| h[k - m].clone()).collect();
        poles.push((p, cs));
    }
    Ok(PartialFractions { poly, poles })
}

/// Two-variable expansion of `f(x)` at `x = εb·big + εs·small` in
/// descending powers of `big`, exact for `big`-exponents `≥ -n`.
///
/// Each `big`-exponent row is a polynomial in `small`, so the `small`
/// window is unbounded and its support is `[0, ∞)`.
pub fn expand_shifted(f: &RatFun, x: Var, big: (Var, i32), small: (Var, i32), n: i32) -> Result<TruncSeries<Rat>> {
    let (b, eb) = big;
    let (s, es) = small;
    if b == s || eb.abs() != 1 || es.abs() != 1 {
        return Err(Error::DimsMismatch("expand_shifted needs distinct variables and unit signs".into()));
    }
    let pf = partial_fractions(f, x)?;
    let sgn = |e: i32, k: i64| -> Rat { if e < 0 && k % 2 != 0 { -Rat::one() } else { Rat::one() } };
    let mut acc: BTreeMap<(i32, i32), Rat> = BTreeMap::new();
    let mut add = |eb_exp: i32, es_exp: i32, c: Rat| {
        if c.is_zero() || eb_exp < -n {
            return;
        }
        let e = acc.entry((eb_exp, es_exp)).or_insert_with(Rat::zero);
        *e += c;
    };
    // Polynomial part.
    for (i, a) in pf.poly.0.iter().enumerate() {
        for r in 0..=i {
            let c = a * binom(i as u32, r as u32) * sgn(eb, (i - r) as i64) * sgn(es, r as i64);
            add((i - r) as i32, r as i32, c);
        }
    }
    // Pole part: (x-p)^{-j} = εb^j Σ_r C(r+j-1, j-1) w^r big^{-r-j},
    // w = α + β·small with α = εb·p, β = -εb·εs.
    for (p, cs) in &pf.poles {
        let alpha = if eb < 0 { -p.clone() } else { p.clone() };
        let beta = Rat::from_integer((-eb * es).into());
        for (jm1, c) in cs.iter().enumerate() {
            let j = jm1 as i32 + 1;
            let cj = c * sgn(eb, i64::from(j));
            for r in 0..=(n - j).max(-1) {
                if r < 0 {
                    break;
                }
                let head = &cj * binom((r + j - 1) as u32, (j - 1) as u32);
                for l in 0..=r {
                    let t = &head
                        * binom(r as u32, l as u32)
                        * num_traits::pow(alpha.clone(), (r - l) as usize)
                        * num_traits::pow(beta.clone(), l as usize);
                    add(-r - j, l, t);
                }
            }
        }
    }
    let top = pf.poly.degree().map_or(-1, |d| d as i32);
    let (vars, swap) = if b < s { (vec![b, s], false) } else { (vec![s, b], true) };
    let (wb, sb) = (Window::at_least(-n), Window::at_most(top));
    let (ws, ss) = (Window::ALL, Window::at_least(0));
    let (window, support) = if swap { (vec![ws, wb], vec![ss, sb]) } else { (vec![wb, ws], vec![sb, ss]) };
    let coeffs = acc.into_iter().map(|((x, y), c)| if swap { (vec![y, x], c) } else { (vec![x, y], c) });
    TruncSeries::new(vars, window, support, coeffs)
}
