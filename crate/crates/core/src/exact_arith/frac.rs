use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Scalar;

/// Unreduced fraction `num / den` over a scalar ring. Zero iff the
/// numerator is zero; equality by cross-multiplication.
#[derive(Clone, Debug)]
pub struct Frac<S> {
    num: S,
    den: S,
}

impl<S: Scalar> Frac<S> {
    /// Panics on a zero denominator.
    pub fn new(num: S, den: S) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Frac { num, den }
    }

    pub fn from_num(num: S) -> Self {
        Frac { num, den: S::one() }
    }

    pub fn num(&self) -> &S {
        &self.num
    }

    pub fn den(&self) -> &S {
        &self.den
    }

    pub fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Frac { num: self.den.clone(), den: self.num.clone() })
        }
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl<S: Scalar> PartialEq for Frac<S> {
    fn eq(&self, other: &Self) -> bool {
        self.num.clone() * other.den.clone() == other.num.clone() * self.den.clone()
    }
}

impl<S: Scalar> From<BigRational> for Frac<S> {
    fn from(q: BigRational) -> Self {
        Frac::from_num(S::from(q))
    }
}

impl<S: Scalar> Zero for Frac<S> {
    fn zero() -> Self {
        Frac::from_num(S::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<S: Scalar> One for Frac<S> {
    fn one() -> Self {
        Frac::from_num(S::one())
    }
}

impl<S: Scalar> Add for Frac<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.num.is_zero() {
            return rhs;
        }
        if rhs.num.is_zero() {
            return self;
        }
        if self.den == rhs.den {
            return Frac { num: self.num + rhs.num, den: self.den };
        }
        Frac { num: self.num * rhs.den.clone() + rhs.num * self.den.clone(), den: self.den * rhs.den }
    }
}

impl<S: Scalar> Sub for Frac<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Mul for Frac<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Self::zero();
        }
        let den = if self.den.is_one() {
            rhs.den
        } else if rhs.den.is_one() {
            self.den
        } else {
            self.den * rhs.den
        };
        Frac { num: self.num * rhs.num, den }
    }
}

impl<S: Scalar> Neg for Frac<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Frac { num: -self.num, den: self.den }
    }
}

impl<S: Scalar> fmt::Display for Frac<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
