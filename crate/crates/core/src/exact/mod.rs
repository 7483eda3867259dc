//! Exact scalar arithmetic: rationals, polynomials in the spectral
//! variables and their fraction field.

pub mod poly;
pub mod rat;
pub mod ratfun;
pub mod upoly;

pub use poly::{Assignment, Monomial, Poly, Var, NVARS};
pub use rat::{fmt_rat, int, parse_rat, rat, Rat};
pub use ratfun::RatFun;
pub use upoly::UPoly;
