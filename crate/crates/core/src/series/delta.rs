//! The formal delta `δ(u - v) = Σ_k u^k v^{-k-1}` and distributions
//! supported at a point.

use super::window::{ext_add, Window};
use super::{exhausted, expand_at_infinity, expand_at_zero, Coeff, TruncSeries};
use crate::error::{Error, Result};
use crate::exact::{rat::pow_i, Poly, Rat, RatFun, Var};
use num_traits::{One, Zero};

/// `δ(u - v)` with the antidiagonal terms `|k| ≤ n` stored.
///
/// Each stored `u`-exponent row is complete, so the known window is
/// `[-n, n]` in `u` and unbounded in `v`. Products with one-variable
/// series that are not finite convolutions go through [`delta_mul`].
pub fn delta_series(n: i32) -> TruncSeries<Rat> {
    let coeffs = (-n..=n).map(|k| (vec![k, -k - 1], Rat::one()));
    TruncSeries::new(
        vec![Var::U, Var::V],
        vec![Window::new(-n, n), Window::ALL],
        vec![Window::ALL, Window::ALL],
        coeffs,
    )
    .unwrap()
    .mark_delta()
}

/// `δ(x - y) · f(w)` for a one-variable `f` in `w ∈ {x, y}`.
///
/// The coefficient of `x^p y^q` is `f_{p+q+1}`, whichever of `x, y`
/// carries `f`. The result box is `p ∈ [-M, M]` and the largest `q`
/// range on which every needed `f` coefficient is known. `M` defaults to
/// a quarter of the known range of `f`, or to the largest stored
/// exponent when that range is unbounded.
pub fn delta_mul<C: Coeff, D>(delta: &TruncSeries<D>, f: &TruncSeries<C>, half_width: Option<i32>) -> Result<TruncSeries<C>>
where
    D: Coeff,
{
    let (x, y) = match delta.vars() {
        [x, y] => (*x, *y),
        _ => return Err(Error::DimsMismatch("delta needs two variables".into())),
    };
    delta_mul_vars(x, y, f, half_width)
}

/// [`delta_mul`] with the delta variables given directly.
pub fn delta_mul_vars<C: Coeff>(x: Var, y: Var, f: &TruncSeries<C>, half_width: Option<i32>) -> Result<TruncSeries<C>> {
    let (x, y) = if x < y { (x, y) } else { (y, x) };
    let w = match f.vars() {
        [w] if *w == x || *w == y => *w,
        [] => x,
        _ => return Err(Error::DimsMismatch("delta_mul expects a series in one of the delta variables".into())),
    };
    let f = f.embed(&[w]);
    let (fw, fs) = (f.windows()[0], f.supports()[0]);
    // Exponents s whose coefficient is known (inside the window or
    // outside the support).
    let k_lo = if fs.lo_ext() < fw.lo_ext() { fw.lo_ext() } else { -super::window::INF };
    let k_hi = if fs.hi_ext() > fw.hi_ext() { fw.hi_ext() } else { super::window::INF };
    let m = match half_width {
        Some(m) => m,
        None => {
            if k_lo > -super::window::INF && k_hi < super::window::INF {
                ((k_hi - k_lo) / 4) as i32
            } else {
                f.coeffs().keys().map(|e| e[0].abs()).max().unwrap_or(0)
            }
        }
    };
    let q_win = Window::from_ext(ext_add(ext_add(k_lo, -1), i64::from(m)), ext_add(ext_add(k_hi, -1), -i64::from(m)))
        .ok_or_else(|| exhausted(y))?;
    let mut coeffs = Vec::new();
    for p in -m..=m {
        for (e, c) in f.coeffs() {
            let q = e[0] - p - 1;
            if q_win.contains(q) {
                coeffs.push((vec![p, q], c.clone()));
            }
        }
    }
    TruncSeries::new(vec![x, y], vec![Window::new(-m, m), q_win], vec![Window::ALL, Window::ALL], coeffs)
}

/// `δ(u - a) = Σ_k a^k u^{-k-1}` on the window `[-n, n]`.
pub fn delta_eval(a: &Rat, var: Var, n: i32) -> TruncSeries<Rat> {
    let coeffs: Vec<(Vec<i32>, Rat)> = if Zero::is_zero(a) {
        vec![(vec![-1], Rat::one())]
    } else {
        (-n..=n).map(|e| (vec![e], pow_i(a, -e - 1))).collect()
    };
    TruncSeries::new(vec![var], vec![Window::new(-n, n)], vec![Window::ALL], coeffs.into_iter().filter(|(e, _)| e[0] >= -n && e[0] <= n))
        .unwrap()
}

/// `D_k(u, p) = ι_∞ (u-p)^{-k} - ι_0 (u-p)^{-k}` on `[-n, n]`; needs
/// `p ≠ 0`.
pub fn distribution_series(p: &Rat, k: u32, var: Var, n: i32) -> Result<TruncSeries<Rat>> {
    let f = RatFun::new(Poly::one(), Poly::var_minus(var, p).pow(k))?;
    let d = expand_at_infinity(&f, var, n)?.sub(&expand_at_zero(&f, var, n)?)?;
    d.restrict(&[(var, Window::new(-n, n))])
}
