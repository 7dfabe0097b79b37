//! The field abstraction the geometry layers are written against: exact
//! rationals for numeric metrics, rational functions for symbolic families.

use std::fmt;

use num_traits::{One, Zero};

use crate::exact::Q;

pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_q(q: Q) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Panics on division by zero.
    fn div(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;

    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }

    fn scale(&self, c: &Q) -> Self {
        self.mul(&Self::from_q(c.clone()))
    }

    fn square(&self) -> Self {
        self.mul(self)
    }
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_q(q: Q) -> Self {
        q
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        assert!(!Zero::is_zero(other), "division by zero");
        self / other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Sum of a sequence of scalars.
pub fn sum<S: Scalar>(items: impl IntoIterator<Item = S>) -> S {
    items.into_iter().fold(S::zero(), |acc, v| acc.add(&v))
}
