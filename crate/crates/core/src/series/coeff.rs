//! Coefficient rings for truncated series.

use crate::exact::{fmt_rat, Rat};
use crate::matrix::{Mat, Ring};
use serde_json::{json, Value};
use std::fmt;

/// Additive group with rational scaling; values may carry a shape (a
/// matrix size), so zero is produced from an existing value.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, r: &Rat) -> Self;
    /// First differing component, as `(entry, self, other)`.
    fn difference(&self, o: &Self) -> Option<(Option<(usize, usize)>, String, String)>;
    fn to_json(&self) -> Value;
}

/// Coefficients closed under an associative product.
pub trait Algebra: Coeff {
    fn mul(&self, o: &Self) -> Self;
    fn try_inverse(&self) -> Option<Self>;
    fn one_like(&self) -> Self;
}

impl Coeff for Rat {
    fn is_zero(&self) -> bool {
        Ring::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        <Rat as Ring>::zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
    fn difference(&self, o: &Self) -> Option<(Option<(usize, usize)>, String, String)> {
        (self != o).then(|| (None, fmt_rat(self), fmt_rat(o)))
    }
    fn to_json(&self) -> Value {
        json!(fmt_rat(self))
    }
}

impl Algebra for Rat {
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn try_inverse(&self) -> Option<Self> {
        (!Ring::is_zero(self)).then(|| self.recip())
    }
    fn one_like(&self) -> Self {
        <Rat as Ring>::one()
    }
}

impl Coeff for Mat {
    fn is_zero(&self) -> bool {
        Mat::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Mat::zeros(self.n())
    }
    fn add(&self, o: &Self) -> Self {
        Mat::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Mat::sub(self, o)
    }
    fn neg(&self) -> Self {
        Mat::neg(self)
    }
    fn scale(&self, r: &Rat) -> Self {
        Mat::scale(self, r)
    }
    fn difference(&self, o: &Self) -> Option<(Option<(usize, usize)>, String, String)> {
        let (i, j) = self.first_difference(o)?;
        Some((Some((i, j)), fmt_rat(self.get(i, j)), fmt_rat(o.get(i, j))))
    }
    fn to_json(&self) -> Value {
        Value::Array(
            self.nonzeros()
                .map(|(i, j, x)| json!([i, j, fmt_rat(x)]))
                .collect(),
        )
    }
}

impl Algebra for Mat {
    fn mul(&self, o: &Self) -> Self {
        Mat::mul(self, o)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }
    fn one_like(&self) -> Self {
        Mat::identity(self.n())
    }
}
