//! Truncated multivariate Laurent series with validity windows.
//!
//! A [`TruncSeries`] stores finitely many coefficients together with, per
//! variable, a known window and a support hull. Inside the window box a
//! missing coefficient is zero; outside the support hull every
//! coefficient is zero; elsewhere it is unknown. Products contract the
//! windows so that every reported coefficient is exact.

mod coeff;
mod delta;
mod expand;
mod window;

pub use coeff::{Algebra, Coeff};
pub use delta::{delta_eval, delta_mul, delta_mul_vars, delta_series, distribution_series};
pub use expand::{
    expand_at_infinity, expand_at_zero, expand_matrix, expand_shifted, partial_fractions, Direction,
    PartialFractions,
};
pub use window::Window;

use crate::error::{Error, Result};
use crate::exact::{Poly, Rat, Var};
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use window::{product_is_finite, product_window};

pub type Exps = Vec<i32>;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C> {
    vars: Vec<Var>,
    window: Vec<Window>,
    support: Vec<Window>,
    coeffs: BTreeMap<Exps, C>,
    /// Set only on the output of [`delta_series`]: the true series is the
    /// full `δ(vars[0] - vars[1])`, whatever the stored window.
    delta: bool,
}

/// Location of the first mismatch found by [`TruncSeries::compare`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Witness {
    pub vars: Vec<Var>,
    pub exponents: Vec<i32>,
    pub entry: Option<(usize, usize)>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub vars: Vec<Var>,
    pub window: Vec<Window>,
    pub compared: usize,
    pub witness: Option<Witness>,
}

impl Comparison {
    pub fn equal(&self) -> bool {
        self.witness.is_none()
    }
}

impl<C: Coeff> TruncSeries<C> {
    /// Builds a series, validating variable order and stored exponents.
    pub fn new(
        vars: Vec<Var>,
        window: Vec<Window>,
        support: Vec<Window>,
        coeffs: impl IntoIterator<Item = (Exps, C)>,
    ) -> Result<Self> {
        if !vars.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::DimsMismatch("series variables must be strictly increasing".into()));
        }
        if window.len() != vars.len() || support.len() != vars.len() {
            return Err(Error::DimsMismatch("one window and one support per variable".into()));
        }
        let mut map = BTreeMap::new();
        for (e, c) in coeffs {
            if e.len() != vars.len() {
                return Err(Error::DimsMismatch("exponent tuple length".into()));
            }
            if c.is_zero() {
                continue;
            }
            let inside = e.iter().enumerate().all(|(k, &x)| window[k].contains(x) && support[k].contains(x));
            if !inside {
                return Err(Error::OutsideWindow { exps: e });
            }
            map.insert(e, c);
        }
        Ok(TruncSeries { vars, window, support, coeffs: map, delta: false })
    }

    /// Exactly known series with finitely many terms.
    pub fn from_terms(vars: Vec<Var>, terms: impl IntoIterator<Item = (Exps, C)>) -> Result<Self> {
        let terms: Vec<(Exps, C)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let support = (0..vars.len())
            .map(|k| {
                let lo = terms.iter().map(|(e, _)| e[k]).min().unwrap_or(0);
                let hi = terms.iter().map(|(e, _)| e[k]).max().unwrap_or(0);
                Window::new(lo, hi)
            })
            .collect();
        let n = vars.len();
        TruncSeries::new(vars, vec![Window::ALL; n], support, terms)
    }

    /// The constant series `c` in no variables.
    pub fn constant(c: C) -> Self {
        TruncSeries::from_terms(vec![], [(vec![], c)]).unwrap()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn windows(&self) -> &[Window] {
        &self.window
    }

    pub fn supports(&self) -> &[Window] {
        &self.support
    }

    pub fn window_of(&self, v: Var) -> Option<Window> {
        self.vars.iter().position(|&x| x == v).map(|k| self.window[k])
    }

    pub fn coeffs(&self) -> &BTreeMap<Exps, C> {
        &self.coeffs
    }

    pub fn is_delta(&self) -> bool {
        self.delta
    }

    pub(crate) fn mark_delta(mut self) -> Self {
        self.delta = true;
        self
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.len()
    }

    /// All stored coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at `exps`: `Ok(None)` for a known zero, an error if
    /// the value is unknown.
    pub fn get(&self, exps: &[i32]) -> Result<Option<&C>> {
        if exps.len() != self.vars.len() {
            return Err(Error::DimsMismatch("exponent tuple length".into()));
        }
        let outside_support = exps.iter().enumerate().any(|(k, &x)| !self.support[k].contains(x));
        if outside_support {
            return Ok(None);
        }
        if !exps.iter().enumerate().all(|(k, &x)| self.window[k].contains(x)) {
            return Err(Error::OutsideWindow { exps: exps.to_vec() });
        }
        Ok(self.coeffs.get(exps))
    }

    /// Re-expresses the series over the larger variable set `vars`.
    pub fn embed(&self, vars: &[Var]) -> Self {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let pos: Vec<Option<usize>> = vars.iter().map(|v| self.vars.iter().position(|x| x == v)).collect();
        assert!(self.vars.iter().all(|v| vars.contains(v)), "embedding must not drop variables");
        let window = pos.iter().map(|p| p.map_or(Window::ALL, |k| self.window[k])).collect();
        let support = pos.iter().map(|p| p.map_or(Window::point(0), |k| self.support[k])).collect();
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| (pos.iter().map(|p| p.map_or(0, |k| e[k])).collect(), c.clone()))
            .collect();
        TruncSeries { vars: vars.to_vec(), window, support, coeffs, delta: false }
    }

    fn union_vars(&self, o: &TruncSeries<impl Coeff>) -> Vec<Var> {
        let mut v = self.vars.clone();
        v.extend(o.vars.iter().copied());
        v.sort();
        v.dedup();
        v
    }

    fn combine(&self, o: &Self, f: impl Fn(&C, &C) -> C, g: impl Fn(&C) -> C) -> Result<Self> {
        let vars = self.union_vars(o);
        let (a, b) = (self.embed(&vars), o.embed(&vars));
        let mut window = Vec::with_capacity(vars.len());
        for k in 0..vars.len() {
            let w = a.window[k].intersect(&b.window[k]).ok_or_else(|| exhausted(vars[k]))?;
            window.push(w);
        }
        let support: Vec<Window> = (0..vars.len()).map(|k| a.support[k].hull(&b.support[k])).collect();
        let inside = |e: &Exps| e.iter().enumerate().all(|(k, &x)| window[k].contains(x));
        let mut coeffs = BTreeMap::new();
        for (e, c) in &a.coeffs {
            if inside(e) {
                coeffs.insert(e.clone(), c.clone());
            }
        }
        for (e, c) in &b.coeffs {
            if !inside(e) {
                continue;
            }
            match coeffs.remove(e) {
                Some(x) => {
                    let s = f(&x, c);
                    if !s.is_zero() {
                        coeffs.insert(e.clone(), s);
                    }
                }
                None => {
                    coeffs.insert(e.clone(), g(c));
                }
            }
        }
        Ok(TruncSeries { vars, window, support, coeffs, delta: false })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, |x, y| x.add(y), |y| y.clone())
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, |x, y| x.sub(y), |y| y.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let mut s = self.map(|c| c.scale(r));
        s.coeffs.retain(|_, c| !c.is_zero());
        s
    }

    /// Applies `f` to every coefficient; windows are kept.
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| (e.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        TruncSeries {
            vars: self.vars.clone(),
            window: self.window.clone(),
            support: self.support.clone(),
            coeffs,
            delta: false,
        }
    }

    /// Restricts the known window to the box `win` (intersected per
    /// variable, variables not listed unchanged).
    pub fn restrict(&self, win: &[(Var, Window)]) -> Result<Self> {
        let mut s = self.clone();
        s.delta = false;
        for (v, w) in win {
            if let Some(k) = s.vars.iter().position(|x| x == v) {
                s.window[k] = s.window[k].intersect(w).ok_or_else(|| exhausted(*v))?;
            }
        }
        let window = s.window.clone();
        s.coeffs.retain(|e, _| e.iter().enumerate().all(|(k, &x)| window[k].contains(x)));
        Ok(s)
    }

    /// Renames variables with `f`, which must be injective on `vars`.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Self {
        let new: Vec<Var> = self.vars.iter().map(|&v| f(v)).collect();
        let mut order: Vec<usize> = (0..new.len()).collect();
        order.sort_by_key(|&k| new[k]);
        let vars: Vec<Var> = order.iter().map(|&k| new[k]).collect();
        assert!(vars.windows(2).all(|w| w[0] < w[1]), "renaming must be injective");
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| (order.iter().map(|&k| e[k]).collect(), c.clone()))
            .collect();
        TruncSeries {
            vars,
            window: order.iter().map(|&k| self.window[k]).collect(),
            support: order.iter().map(|&k| self.support[k]).collect(),
            coeffs,
            delta: false,
        }
    }

    /// The stored coefficients as an exact finite series, treating every
    /// unknown coefficient as zero. Only for diagnostics of products that
    /// are not well defined.
    pub fn assume_exact(&self) -> Self {
        let terms = self.coeffs.clone();
        let mut s = TruncSeries::from_terms(self.vars.clone(), terms).unwrap();
        s.delta = false;
        s
    }

    /// Exchanges two variables.
    pub fn swap_vars(&self, a: Var, b: Var) -> Self {
        self.rename(|v| if v == a { b } else if v == b { a } else { v })
    }

    /// Generic product `Σ f(a_i, b_j) x^{i+j}` with exact window
    /// contraction. Shared variables convolve, disjoint ones form an
    /// outer product.
    pub fn mul_with<B: Coeff, O: Coeff>(&self, o: &TruncSeries<B>, f: impl Fn(&C, &B) -> O) -> Result<TruncSeries<O>> {
        let vars = self.union_vars(o);
        let (a, b) = (self.embed(&vars), o.embed(&vars));
        let mut window = Vec::with_capacity(vars.len());
        let mut support = Vec::with_capacity(vars.len());
        for k in 0..vars.len() {
            if !product_is_finite(&a.support[k], &b.support[k]) {
                return Err(Error::IllDefinedProduct { var: vars[k].to_string() });
            }
            let w = product_window(&a.window[k], &a.support[k], &b.window[k], &b.support[k])
                .ok_or_else(|| exhausted(vars[k]))?;
            window.push(w);
            support.push(a.support[k].sum(&b.support[k]));
        }
        // Index the right factor by its first exponent to prune pairs whose
        // sum leaves the window early.
        let mut acc: HashMap<Exps, O> = HashMap::new();
        let nv = vars.len();
        for (ea, ca) in &a.coeffs {
            for (eb, cb) in &b.coeffs {
                let mut e = Vec::with_capacity(nv);
                let mut ok = true;
                for k in 0..nv {
                    let x = ea[k] + eb[k];
                    if !window[k].contains(x) {
                        ok = false;
                        break;
                    }
                    e.push(x);
                }
                if !ok {
                    continue;
                }
                let t = f(ca, cb);
                if t.is_zero() {
                    continue;
                }
                match acc.get_mut(&e) {
                    Some(x) => *x = x.add(&t),
                    None => {
                        acc.insert(e, t);
                    }
                }
            }
        }
        let coeffs = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(TruncSeries { vars, window, support, coeffs, delta: false })
    }

    /// Multiplies by a scalar polynomial.
    pub fn mul_poly(&self, p: &Poly) -> Result<Self> {
        let s = TruncSeries::<Rat>::from_poly(p);
        s.mul_with(self, |r, c| c.scale(r))
    }

    /// Coefficientwise comparison on the intersection of both windows.
    pub fn compare(&self, o: &Self) -> Result<Comparison> {
        let vars = self.union_vars(o);
        let (a, b) = (self.embed(&vars), o.embed(&vars));
        let mut window = Vec::with_capacity(vars.len());
        for k in 0..vars.len() {
            window.push(a.window[k].intersect(&b.window[k]).ok_or_else(|| exhausted(vars[k]))?);
        }
        let inside = |e: &Exps| e.iter().enumerate().all(|(k, &x)| window[k].contains(x));
        let mut keys: Vec<&Exps> = a.coeffs.keys().chain(b.coeffs.keys()).filter(|e| inside(e)).collect();
        keys.sort();
        keys.dedup();
        let mut witness = None;
        for e in &keys {
            let (x, y) = match (a.coeffs.get(*e), b.coeffs.get(*e)) {
                (Some(x), Some(y)) => (x.clone(), y.clone()),
                (Some(x), None) => (x.clone(), x.zero_like()),
                (None, Some(y)) => (y.zero_like(), y.clone()),
                (None, None) => continue,
            };
            if let Some((entry, l, r)) = x.difference(&y) {
                witness = Some(Witness { vars: vars.clone(), exponents: (*e).clone(), entry, lhs: l, rhs: r });
                break;
            }
        }
        Ok(Comparison { vars, window, compared: keys.len(), witness })
    }

    /// JSON dump: variables, windows and nonzero coefficients.
    pub fn dump(&self) -> Value {
        json!({
            "vars": self.vars,
            "windows": self.window,
            "support": self.support,
            "coeffs": self.coeffs.iter().map(|(e, c)| json!({"exps": e, "value": c.to_json()})).collect::<Vec<_>>(),
        })
    }
}

impl<C: Algebra> TruncSeries<C> {
    /// Series product; a `δ` factor from [`delta_series`] is handled by
    /// coefficient extraction when plain convolution is not finite.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        match self.mul_with(o, |x, y| x.mul(y)) {
            Err(Error::IllDefinedProduct { var }) => {
                if self.delta && o.vars.len() == 1 {
                    delta_mul(self, o, None)
                } else if o.delta && self.vars.len() == 1 {
                    delta_mul(o, self, None)
                } else {
                    Err(Error::IllDefinedProduct { var })
                }
            }
            r => r,
        }
    }

    /// Inverse of a one-variable series whose leading coefficient (top
    /// exponent for an expansion at infinity, bottom for an expansion at
    /// zero) is invertible.
    pub fn inverse(&self) -> Result<Self> {
        if self.vars.is_empty() {
            let c = self.coeffs.get(&vec![]).ok_or(Error::PivotSingular { index: 0 })?;
            let inv = c.try_inverse().ok_or(Error::PivotSingular { index: 0 })?;
            return Ok(TruncSeries::constant(inv));
        }
        if self.vars.len() != 1 {
            return Err(Error::DimsMismatch("series_inverse needs a one-variable series".into()));
        }
        let (w, s) = (self.window[0], self.support[0]);
        let top_known = s.hi.is_some() && s.hi_ext() <= w.hi_ext();
        let bottom_known = s.lo.is_some() && s.lo_ext() >= w.lo_ext();
        if top_known {
            self.inverse_directed(true)
        } else if bottom_known {
            self.inverse_directed(false)
        } else {
            Err(Error::PivotSingular { index: 0 })
        }
    }

    fn inverse_directed(&self, at_infinity: bool) -> Result<Self> {
        // Work in t = u^{-1} for expansions at infinity so both cases are
        // power series in the direction of growth.
        let (w, s) = (self.window[0], self.support[0]);
        let sgn = if at_infinity { -1 } else { 1 };
        let lead_exp = if at_infinity { s.hi.unwrap() } else { s.lo.unwrap() };
        let lead = self
            .coeffs
            .get(&vec![lead_exp])
            .ok_or(Error::PivotSingular { index: 0 })?;
        let lead_inv = lead.try_inverse().ok_or(Error::PivotSingular { index: 0 })?;
        // Known depth in the growth direction.
        let depth: Option<i64> = if at_infinity {
            w.lo.map(|l| i64::from(lead_exp) - i64::from(l))
        } else {
            w.hi.map(|h| i64::from(h) - i64::from(lead_exp))
        };
        // Stored terms as (offset, coeff), offset = distance from lead.
        let terms: Vec<(i64, &C)> = self
            .coeffs
            .iter()
            .map(|(e, c)| (i64::from(sgn) * (i64::from(e[0]) - i64::from(lead_exp)), c))
            .collect();
        let max_offset = terms.iter().map(|(k, _)| *k).max().unwrap_or(0);
        let limit = match depth {
            Some(d) => d,
            None => {
                if max_offset == 0 {
                    0
                } else {
                    return Err(Error::TruncationExhausted { var: self.vars[0].to_string() });
                }
            }
        };
        // t_j: coefficient of offset j in the inverse.
        let mut t: Vec<C> = Vec::with_capacity(limit as usize + 1);
        for j in 0..=limit {
            let mut acc = if j == 0 { lead.one_like() } else { lead.zero_like() };
            for (k, c) in &terms {
                if *k >= 1 && *k <= j {
                    acc = acc.sub(&c.mul(&t[(j - k) as usize]));
                }
            }
            // Right inverse: s * t = 1 with t_j = lead^{-1} (δ_j - Σ s_k t_{j-k}).
            t.push(lead_inv.mul(&acc));
        }
        let inv_lead = -lead_exp;
        let coeffs: Vec<(Exps, C)> = t
            .into_iter()
            .enumerate()
            .map(|(j, c)| (vec![inv_lead + sgn * j as i32], c))
            .collect();
        let (window, support) = if at_infinity {
            let lo = depth.map(|d| i64::from(inv_lead) - d);
            (
                Window { lo: lo.map(|x| x as i32), hi: None },
                Window::at_most(inv_lead),
            )
        } else {
            let hi = depth.map(|d| i64::from(inv_lead) + d);
            (
                Window { lo: None, hi: hi.map(|x| x as i32) },
                Window::at_least(inv_lead),
            )
        };
        let support = if depth.is_none() { Window::point(inv_lead) } else { support };
        TruncSeries::new(self.vars.clone(), vec![window], vec![support], coeffs)
    }
}

impl TruncSeries<Rat> {
    /// Exact series of a polynomial.
    pub fn from_poly(p: &Poly) -> Self {
        let vars = p.variables();
        let terms: Vec<(Exps, Rat)> = p
            .terms()
            .map(|(m, c)| (vars.iter().map(|v| m[v.index()] as i32).collect(), c.clone()))
            .collect();
        TruncSeries::from_terms(vars, terms).unwrap()
    }
}

pub(crate) fn exhausted(v: Var) -> Error {
    Error::TruncationExhausted { var: v.to_string() }
}

#[cfg(test)]
mod tests;
