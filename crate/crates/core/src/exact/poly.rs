//! Sparse polynomials in the spectral variables `u, v, u1, u2, v1, v2`.
//!
//! Monomials are exponent arrays indexed by [`Var`]; the derived array
//! order is lexicographic in `(u, v, u1, u2, v1, v2)`, which is the
//! canonical monomial order.

use super::rat::{fmt_rat, int, Rat};
use super::upoly::UPoly;
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub const NVARS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    U,
    V,
    U1,
    U2,
    V1,
    V2,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::U, Var::V, Var::U1, Var::U2, Var::V1, Var::V2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::U => "u",
            Var::V => "v",
            Var::U1 => "u1",
            Var::U2 => "u2",
            Var::V1 => "v1",
            Var::V2 => "v2",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Monomial = [u32; NVARS];

/// Variable assignment for evaluation.
pub type Assignment = BTreeMap<Var, Rat>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::monomial([0; NVARS], c)
    }

    pub fn var(v: Var) -> Self {
        let mut m = [0; NVARS];
        m[v.index()] = 1;
        Poly::monomial(m, Rat::one())
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// `x - c`
    pub fn var_minus(v: Var, c: &Rat) -> Self {
        Poly::var(v).sub(&Poly::constant(c.clone()))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&[0; NVARS]).cloned().unwrap_or_else(Rat::zero)
    }

    /// Variables occurring with positive exponent, in canonical order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|m| m[v.index()] > 0))
            .collect()
    }

    /// Leading term under the canonical lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m[v.index()]).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let mut m = *ma;
                for k in 0..NVARS {
                    m[k] += mb[k];
                }
                r.add_term(m, ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Full evaluation; every occurring variable must be assigned.
    pub fn eval(&self, a: &Assignment) -> Result<Rat> {
        let p = self.partial_eval(a);
        if let Some(v) = p.variables().first() {
            return Err(Error::UnassignedVariable(v.to_string()));
        }
        Ok(p.constant_term())
    }

    /// Substitutes the assigned variables, keeping the others symbolic.
    pub fn partial_eval(&self, a: &Assignment) -> Self {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut m2 = *m;
            let mut c2 = c.clone();
            for (v, x) in a {
                let e = m[v.index()];
                if e > 0 {
                    c2 *= num_traits::pow(x.clone(), e as usize);
                    m2[v.index()] = 0;
                }
            }
            r.add_term(m2, c2);
        }
        r
    }

    /// Replaces `v` by the polynomial `q`.
    pub fn substitute(&self, v: Var, q: &Poly) -> Self {
        let mut r = Poly::zero();
        let mut powers: Vec<Poly> = vec![Poly::one()];
        for (m, c) in &self.terms {
            let e = m[v.index()] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(q);
                powers.push(next);
            }
            let mut m2 = *m;
            m2[v.index()] = 0;
            r = r.add(&Poly::monomial(m2, c.clone()).mul(&powers[e]));
        }
        r
    }

    /// Renames variables according to `f`.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Self {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut m2 = [0; NVARS];
            for v in Var::ALL {
                m2[f(v).index()] += m[v.index()];
            }
            r.add_term(m2, c.clone());
        }
        r
    }

    /// Dense coefficients in `v`, if no other variable occurs.
    pub fn to_upoly(&self, v: Var) -> Option<UPoly> {
        let deg = self.degree_in(v) as usize;
        let mut c = vec![Rat::zero(); deg + 1];
        for (m, x) in &self.terms {
            if m.iter().enumerate().any(|(k, &e)| k != v.index() && e > 0) {
                return None;
            }
            c[m[v.index()] as usize] = x.clone();
        }
        Some(UPoly::new(c))
    }

    pub fn from_upoly(v: Var, p: &UPoly) -> Self {
        Poly::from_terms(p.0.iter().enumerate().map(|(k, c)| {
            let mut m = [0; NVARS];
            m[v.index()] = k as u32;
            (m, c.clone())
        }))
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::constant(int(n))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = Var::ALL
                .iter()
                .filter(|v| m[v.index()] > 0)
                .map(|v| match m[v.index()] {
                    1 => v.name().to_string(),
                    e => format!("{}^{}", v.name(), e),
                })
                .collect();
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            let body = if mono.is_empty() {
                fmt_rat(&mag)
            } else if mag.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", fmt_rat(&mag), mono.join("*"))
            };
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn arithmetic_and_display() {
        let u = Poly::var(Var::U);
        let v = Poly::var(Var::V);
        let p = u.sub(&v).mul(&u.add(&v));
        assert_eq!(p, u.mul(&u).sub(&v.mul(&v)));
        assert_eq!(p.to_string(), "u^2 - v^2");
        assert_eq!(Poly::var_minus(Var::U, &rat(-1, 2)).to_string(), "u + 1/2");
    }

    #[test]
    fn substitution_and_evaluation() {
        let x = Poly::var(Var::U).pow(2).add(&Poly::from(1));
        let s = x.substitute(Var::U, &Poly::var(Var::U).sub(&Poly::var(Var::V)));
        let mut a = Assignment::new();
        a.insert(Var::U, int(5));
        a.insert(Var::V, int(2));
        assert_eq!(s.eval(&a).unwrap(), int(10));
        a.remove(&Var::V);
        assert!(matches!(s.eval(&a), Err(Error::UnassignedVariable(_))));
    }

    #[test]
    fn lexicographic_leading_term() {
        let p = Poly::var(Var::V).pow(3).add(&Poly::var(Var::U));
        let (m, _) = p.leading().unwrap();
        assert_eq!(m[Var::U.index()], 1);
    }
}
