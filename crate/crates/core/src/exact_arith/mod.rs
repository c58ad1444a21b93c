//! Exact scalars, polynomials in named parameters, and matrices over them.

mod frac;
mod linsolve;
mod matrix;
mod parse;
mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use frac::Frac;
pub use linsolve::{determinant, inverse, nullspace, rank, rref, solve_linear_exact, Field};
pub use matrix::{MatOp, Matrix};
pub use parse::{frac_to_poly, parse_frac, parse_poly, parse_rational};
pub use poly::{natural_cmp, Coeff, Monomial, Polynomial, Var};

pub type Rational = BigRational;
pub type Poly = Polynomial<BigRational>;
pub type PolyMatrix = Matrix<Poly>;
/// Rational functions in the parameters, for families with parameter denominators.
pub type RatFn = Frac<Poly>;

/// Exact commutative ring used for every tensor entry.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + From<BigRational>
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + From<BigRational>
        + Send
        + Sync
        + 'static
{
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("variable {0} has no assigned value")]
    MissingVariable(String),
    #[error("cannot parse {input:?} at offset {pos}: {msg}")]
    Parse { input: String, pos: usize, msg: String },
}

/// Which ring operation `poly_arith` performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Poly {
    match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    }
}

pub fn poly_eval(p: &Poly, assignment: &BTreeMap<String, Rational>) -> Result<Rational, ArithError> {
    p.eval(assignment)
}

pub fn q(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qq(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses a literal known to be valid; for built-in data and tests.
pub fn p(src: &str) -> Poly {
    parse_poly(src).unwrap_or_else(|e| panic!("{e}"))
}

/// Like [`p`], but allows parameter denominators.
pub fn pf(src: &str) -> RatFn {
    parse_frac(src).unwrap_or_else(|e| panic!("{e}"))
}

pub fn assignment<S: Clone>(pairs: &[(&str, S)]) -> BTreeMap<String, S> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Exact substitution of rational values into a rational function.
pub fn eval_frac(f: &RatFn, a: &BTreeMap<String, Rational>) -> Result<Option<Rational>, ArithError> {
    let d = f.den().eval(a)?;
    if d.is_zero() {
        return Ok(None);
    }
    Ok(Some(f.num().eval(a)? / d))
}

/// Lifts a polynomial into the rational-function ring.
pub fn to_frac(p: &Poly) -> RatFn {
    Frac::from_num(p.clone())
}
