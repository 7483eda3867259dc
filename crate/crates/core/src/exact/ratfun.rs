//! Rational functions in the spectral variables.
//!
//! Normal form: zero is `0/1`; otherwise the denominator is monic under
//! the canonical monomial order, and common factors are cancelled when
//! numerator and denominator involve at most one variable. Equality is
//! decided by cross-multiplication, so it holds for unreduced
//! multivariate fractions too.

use super::poly::{Assignment, Poly, Var};
use super::rat::{fmt_rat, Rat};
use super::upoly::UPoly;
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun { num, den }.normalized())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rat) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        RatFun::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }

    pub fn var(v: Var) -> Self {
        RatFun::from_poly(Poly::var(v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Re-normalizes. Idempotent.
    pub fn normalized(self) -> Self {
        let RatFun { mut num, mut den } = self;
        if num.is_zero() {
            return RatFun::zero();
        }
        let mut vars = num.variables();
        vars.extend(den.variables());
        vars.sort();
        vars.dedup();
        if vars.len() == 1 {
            let v = vars[0];
            let (n, d) = (num.to_upoly(v).unwrap(), den.to_upoly(v).unwrap());
            let g = n.gcd(&d);
            if g.degree().unwrap_or(0) > 0 {
                num = Poly::from_upoly(v, &n.div_rem(&g).0);
                den = Poly::from_upoly(v, &d.div_rem(&g).0);
            }
        }
        let lead = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::one);
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFun { num, den }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFun { num: self.num.add(&o.num), den: self.den.clone() }.normalized();
        }
        RatFun {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
        .normalized()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.normalized()
    }

    pub fn scale(&self, s: &Rat) -> Self {
        RatFun { num: self.num.scale(s), den: self.den.clone() }.normalized()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun { num: self.den.clone(), den: self.num.clone() }.normalized())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Exact evaluation. A vanishing denominator yields [`Error::Pole`]
    /// naming the linear factor responsible when the denominator is
    /// univariate, the whole denominator otherwise.
    pub fn eval(&self, a: &Assignment) -> Result<Rat> {
        let d = self.den.eval(a)?;
        if d.is_zero() {
            return Err(Error::Pole { factor: self.vanishing_factor(a) });
        }
        Ok(self.num.eval(a)? / d)
    }

    fn vanishing_factor(&self, a: &Assignment) -> String {
        let vars = self.den.variables();
        if let [v] = vars.as_slice() {
            if let Some(x) = a.get(v) {
                let lin = Poly::var_minus(*v, x);
                let k = self.den.to_upoly(*v).unwrap().root_multiplicity(x);
                return if k > 1 { format!("({lin})^{k}") } else { format!("({lin})") };
            }
        }
        format!("({})", self.den)
    }

    /// Replaces `v` by the polynomial `q`.
    pub fn substitute(&self, v: Var, q: &Poly) -> Self {
        RatFun { num: self.num.substitute(v, q), den: self.den.substitute(v, q) }.normalized()
    }

    /// Numerator and denominator as dense polynomials in `v`, if `v` is the
    /// only variable.
    pub fn to_upolys(&self, v: Var) -> Option<(UPoly, UPoly)> {
        Some((self.num.to_upoly(v)?, self.den.to_upoly(v)?))
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.num.variables();
        vs.extend(self.den.variables());
        vs.sort();
        vs.dedup();
        vs
    }
}

impl PartialEq for RatFun {
    fn eq(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            let c = self.den.constant_term();
            if c.is_one() {
                return write!(f, "{}", self.num);
            }
            return write!(f, "({})/{}", self.num, fmt_rat(&c));
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    fn u() -> Poly {
        Poly::var(Var::U)
    }

    fn at_u(x: Rat) -> Assignment {
        Assignment::from([(Var::U, x)])
    }

    #[test]
    fn common_denominator_sum() {
        let h = rat(1, 2);
        let two_h = Poly::constant(int(2) * &h);
        let d = u().add(&two_h);
        let a = RatFun::new(u(), d.clone()).unwrap();
        let b = RatFun::new(two_h, d).unwrap();
        let s = a.add(&b);
        assert_eq!(s, RatFun::one());
        assert!(s.is_polynomial());
    }

    #[test]
    fn odd_diagonal_coefficient_at_zero_is_one() {
        let f = RatFun::new(Poly::from(1).sub(&u()), u().add(&Poly::from(1))).unwrap();
        assert_eq!(f.eval(&at_u(int(0))).unwrap(), int(1));
        assert_eq!(f.eval(&at_u(int(1))).unwrap(), int(0));
    }

    #[test]
    fn cancellation_and_poles() {
        let a = int(3);
        let f = RatFun::new(Poly::one(), Poly::var_minus(Var::U, &a)).unwrap();
        let g = RatFun::from_poly(Poly::var_minus(Var::U, &a));
        assert_eq!(f.mul(&g), RatFun::one());
        let r = RatFun::new(u(), u().add(&Poly::from(1))).unwrap();
        assert_eq!(r.eval(&at_u(int(2))).unwrap(), rat(2, 3));
        let p = RatFun::new(Poly::from(1), u().add(&Poly::from(1))).unwrap();
        match p.eval(&at_u(int(-1))) {
            Err(Error::Pole { factor }) => assert_eq!(factor, "(u + 1)"),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(RatFun::one().div(&RatFun::zero()), Err(Error::DivisionByZero));
        assert_eq!(RatFun::new(Poly::one(), Poly::zero()).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn denominator_is_monic() {
        let f = RatFun::new(Poly::from(4), u().scale(&int(2)).add(&Poly::from(6))).unwrap();
        assert_eq!(f.den().leading().unwrap().1, &int(1));
        assert_eq!(f.num().constant_term(), int(2));
    }
}
