//! Dense univariate polynomials over `Rat`, lowest degree first.
//!
//! Used for gcd normalization of rational functions, Taylor shifts and
//! partial fractions. Always trimmed: no trailing zero coefficient.

use super::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<Rat>);

impl UPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Rat) -> Self {
        UPoly::new(vec![-r.clone(), Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.0.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        UPoly::new(self.0.iter().map(|x| x * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let Some(n) = self.degree() else {
            return (UPoly::zero(), UPoly::zero());
        };
        if n < dd {
            return (UPoly::zero(), self.clone());
        }
        let inv = d.lead().recip();
        let mut q = vec![Rat::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Coefficients of `p(x + s)` in powers of `x`.
    pub fn taylor_shift(&self, s: &Rat) -> Self {
        // Horner in the shifted variable.
        let mut acc = UPoly::zero();
        let lin = UPoly::new(vec![s.clone(), Rat::one()]);
        for c in self.0.iter().rev() {
            acc = acc.mul(&lin).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &Rat) -> usize {
        let lin = UPoly::linear_root(r);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            p = q;
            k += 1;
        }
        k
    }

    /// All rational roots with multiplicity, ascending. Returns `None` if
    /// the polynomial has an irreducible factor of degree at least two.
    pub fn rational_roots(&self) -> Option<Vec<(Rat, usize)>> {
        let mut p = self.monic();
        let mut out = Vec::new();
        // Clear denominators to an integer polynomial.
        while p.degree().unwrap_or(0) > 0 {
            let lcm = p
                .0
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = p.0.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect();
            let c0 = ints[0].abs();
            if c0.is_zero() {
                let k = p.root_multiplicity(&Rat::zero());
                out.push((Rat::zero(), k));
                let mut c = p.0.clone();
                c.drain(..k);
                p = UPoly::new(c);
                continue;
            }
            let lead = ints.last().unwrap().abs();
            let found = divisors(&c0).into_iter().find_map(|num| {
                divisors(&lead).into_iter().find_map(|den| {
                    [1i32, -1].into_iter().find_map(|s| {
                        let r = Rat::new(num.clone() * BigInt::from(s), den.clone());
                        p.eval(&r).is_zero().then_some(r)
                    })
                })
            });
            let r = found?;
            let k = p.root_multiplicity(&r);
            let mut lin = UPoly::constant(Rat::one());
            for _ in 0..k {
                lin = lin.mul(&UPoly::linear_root(&r));
            }
            p = p.div_rem(&lin).0;
            out.push((r, k));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Some(out)
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    fn p(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let (q, r) = a.div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let a = p(&[1, -3, 0, 2]);
        let s = rat(3, 2);
        let b = a.taylor_shift(&s);
        for x in [-2i64, 0, 1, 5] {
            assert_eq!(b.eval(&int(x)), a.eval(&(int(x) + &s)));
        }
    }

    #[test]
    fn roots_with_multiplicity() {
        // (2x-1)^2 (x+3) x
        let a = p(&[-1, 2]).mul(&p(&[-1, 2])).mul(&p(&[3, 1])).mul(&p(&[0, 1]));
        let r = a.rational_roots().unwrap();
        assert_eq!(r, vec![(int(-3), 1), (int(0), 1), (rat(1, 2), 2)]);
        assert!(p(&[1, 0, 1]).rational_roots().is_none());
    }
}
