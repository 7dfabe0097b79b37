//! Quadratic surds `a + b·√d` with rational `a, b` and squarefree `d`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exact::{render_exact, sqrt_rational, square_free_split, to_f64, Q};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Q,
    b: Q,
    d: BigInt,
}

/// Wire form of a surd: `value = a + b·√d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurdData {
    pub a: String,
    pub b: String,
    pub d: String,
    pub decimal: f64,
}

impl Surd {
    /// Builds `a + b√d`; `d` must be positive and is reduced to its squarefree part.
    pub fn new(a: Q, b: Q, d: BigInt) -> Surd {
        assert!(d.is_positive(), "surd radicand must be positive");
        let (s, free) = square_free_split(&d);
        Surd { a, b: b * Q::from_integer(s), d: free }.normalized()
    }

    pub fn rational(a: Q) -> Surd {
        Surd { a, b: Q::zero(), d: BigInt::one() }
    }

    /// `√v` for a nonnegative rational.
    pub fn sqrt_of(v: &Q) -> Surd {
        let (c, d) = sqrt_rational(v);
        Surd { a: Q::zero(), b: c, d }.normalized()
    }

    fn normalized(mut self) -> Surd {
        if self.d.is_one() {
            self.a += &self.b;
            self.b = Q::zero();
        }
        if self.b.is_zero() {
            self.d = BigInt::one();
        }
        self
    }

    pub fn a(&self) -> &Q {
        &self.a
    }

    pub fn b(&self) -> &Q {
        &self.b
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_d(&self, other: &Surd) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "surds from different quadratic fields");
                self.d.clone()
            }
        }
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b²d
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Q::from_integer(self.d.clone());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn conjugate(&self) -> Surd {
        Surd { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    /// Field norm `a² - b²d`.
    pub fn norm(&self) -> Q {
        &self.a * &self.a - &self.b * &self.b * Q::from_integer(self.d.clone())
    }

    pub fn inv(&self) -> Surd {
        let n = self.norm();
        assert!(!n.is_zero(), "inverse of zero surd");
        Surd { a: &self.a / &n, b: -(&self.b / &n), d: self.d.clone() }.normalized()
    }

    pub fn div(&self, other: &Surd) -> Surd {
        self * &other.inv()
    }

    pub fn scale(&self, c: &Q) -> Surd {
        Surd { a: &self.a * c, b: &self.b * c, d: self.d.clone() }.normalized()
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        to_f64(&self.a) + to_f64(&self.b) * d.sqrt()
    }

    pub fn data(&self) -> SurdData {
        SurdData {
            a: render_exact(&self.a),
            b: render_exact(&self.b),
            d: self.d.to_string(),
            decimal: self.to_f64(),
        }
    }

    pub fn pow(&self, e: u32) -> Surd {
        let mut acc = Surd::rational(Q::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn sign(v: &Q) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    /// Numeric order; only defined within a single quadratic field.
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, rhs: &'a Surd) -> Surd {
        let d = self.common_d(rhs);
        Surd { a: &self.a + &rhs.a, b: &self.b + &rhs.b, d }.normalized()
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, rhs: &'a Surd) -> Surd {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, rhs: &'a Surd) -> Surd {
        let d = self.common_d(rhs);
        let dq = Q::from_integer(d.clone());
        Surd {
            a: &self.a * &rhs.a + &self.b * &rhs.b * dq,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        }
        .normalized()
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -self.a, b: -self.b, d: self.d }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", render_exact(&self.a));
        }
        let root = format!("sqrt({})", self.d);
        let bt = if self.b.abs().is_one() { root } else { format!("{}*{}", render_exact(&self.b.abs()), root) };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{bt}")
            } else {
                write!(f, "{bt}")
            }
        } else {
            let op = if self.b.is_negative() { "-" } else { "+" };
            write!(f, "{} {op} {bt}", render_exact(&self.a))
        }
    }
}

/// Evaluates a polynomial at a point whose coordinates lie in a common quadratic field.
pub fn eval_poly(p: &Poly, point: &BTreeMap<String, Surd>) -> Option<Surd> {
    let mut total = Surd::rational(Q::zero());
    for (m, c) in p.terms() {
        let mut t = Surd::rational(c.clone());
        for (v, e) in m.factors() {
            t = &t * &point.get(v)?.pow(*e);
        }
        total = &total + &t;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    #[test]
    fn arithmetic_in_q_sqrt10() {
        let s = Surd::new(qi(6), qi(2), BigInt::from(10));
        // s is a root of y^2 - 12y - 4
        let r = &(&(&s * &s) - &s.scale(&qi(12))) - &Surd::rational(qi(4));
        assert!(r.is_zero());
        assert!(s.is_positive());
        assert!(Surd::new(qi(6), qi(-2), BigInt::from(10)).signum() < 0);
    }

    #[test]
    fn radicand_is_reduced() {
        let s = Surd::new(qi(0), qi(1), BigInt::from(160));
        assert_eq!(s, Surd::new(qi(0), qi(4), BigInt::from(10)));
        assert_eq!(Surd::sqrt_of(&q(9, 4)), Surd::rational(q(3, 2)));
        assert_eq!(Surd::new(qi(1), qi(1), BigInt::from(4)), Surd::rational(qi(3)));
    }

    #[test]
    fn ordering_and_inverse() {
        let a = Surd::new(qi(3), qi(-2), BigInt::from(2));
        let b = Surd::new(qi(3), qi(2), BigInt::from(2));
        assert!(a < b);
        assert_eq!(&a * &b, Surd::rational(qi(1)));
        assert_eq!(a.inv(), b);
        assert_eq!(b.to_string(), "3 + 2*sqrt(2)");
    }
}
