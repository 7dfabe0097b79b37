//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are identified by name. Monomials are ordered lexicographically
//! with alphabetically earlier variables more significant, so the leading
//! term of `x^2 + x*y^3 + y^5` is `x^2`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Q;
use crate::upoly::UPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(name.to_string(), exp)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, u32)>) -> Self {
        let mut map: BTreeMap<String, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0.iter().find(|(v, _)| v == var).map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    out.push((a.0.clone(), a.1 + b.1));
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    out.push(a.clone());
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    out.push(b.clone());
                    j += 1;
                }
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(b.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        for (v, e) in &self.0 {
            let d = other.exponent(v);
            if d > *e {
                return None;
            }
            if e - d > 0 {
                out.push((v.clone(), e - d));
            }
        }
        if other.0.iter().any(|(v, _)| self.exponent(v) == 0) {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let m = (*e).min(other.exponent(v));
                    (m > 0).then(|| (v.clone(), m))
                })
                .collect(),
        )
    }

    pub fn sqrt(&self) -> Option<Monomial> {
        if self.0.iter().any(|(_, e)| e % 2 == 1) {
            return None;
        }
        Some(Monomial(self.0.iter().map(|(v, e)| (v.clone(), e / 2)).collect()))
    }

    fn without(&self, var: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(v, _)| v != var).cloned().collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(a), Some(b)) => {
                    if a.0 == b.0 {
                        match a.1.cmp(&b.1) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            o => return o,
                        }
                    } else if a.0 < b.0 {
                        return Ordering::Greater;
                    } else {
                        return Ordering::Less;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A multivariate polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(name: &str) -> Self {
        Poly::monomial(Monomial::var(name, 1), Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            Some(Q::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// True when every term has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::total_degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &BTreeMap<String, Q>) -> Option<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = point.get(v)?;
                t *= num_traits::pow(x.clone(), *e as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// Replaces `var` by the polynomial `value`.
    pub fn substitute(&self, var: &str, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        let mut powers: Vec<Poly> = vec![Poly::one()];
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = Poly::monomial(m.without(var), c.clone());
            out = out + &rest * &powers[e];
        }
        out
    }

    pub fn substitute_value(&self, var: &str, value: &Q) -> Poly {
        self.substitute(var, &Poly::constant(value.clone()))
    }

    /// Coefficients as polynomials in the remaining variables, indexed by the power of `var`.
    pub fn coeffs_in(&self, var: &str) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            out[m.exponent(var) as usize].add_term(m.without(var), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(var: &str, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            out = out + c.mul_monomial(&Monomial::var(var, k as u32), &Q::one());
        }
        out
    }

    /// Views the polynomial as univariate in `var`; `None` if another variable occurs.
    pub fn to_upoly(&self, var: &str) -> Option<UPoly> {
        let coeffs = self.coeffs_in(var);
        let mut out = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            out.push(c.constant_value()?);
        }
        Some(UPoly::new(out))
    }

    pub fn from_upoly(p: &UPoly, var: &str) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(Monomial::var(var, k as u32), c.clone());
        }
        out
    }

    /// Exact division; `None` unless `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&lm)?;
            let c = rc / &lc;
            rem = rem - divisor.mul_monomial(&m, &c);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut out = Poly::zero();
        for (k, c) in &self.terms {
            out.add_term(k.div(m)?, c.clone());
        }
        Some(out)
    }

    /// Positive rational `c` with `self / c` having coprime integer coefficients.
    pub fn content(&self) -> Q {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Q::one()
        } else {
            Q::new(num, den)
        }
    }

    /// Divides by the content; the sign of the leading coefficient is preserved.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        self.scale(&(Q::one() / c))
    }

    /// True when every coefficient is strictly positive (so the polynomial is
    /// positive on the open positive orthant).
    pub fn all_coefficients_positive(&self) -> bool {
        !self.is_zero() && self.terms.values().all(|c| c.is_positive())
    }

    pub fn all_coefficients_negative(&self) -> bool {
        !self.is_zero() && self.terms.values().all(|c| c.is_negative())
    }

    /// Square root when `self` is the square of a polynomial. The root is
    /// returned with positive leading coefficient.
    pub fn sqrt_exact(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.leading()?;
        let (c0, d0) = crate::exact::sqrt_rational(&if lc.is_negative() { return None } else { lc.clone() });
        if d0 != BigInt::one() {
            return None;
        }
        let m0 = lm.sqrt()?;
        let mut root = Poly::monomial(m0.clone(), c0.clone());
        let twice_lead_m = m0;
        let twice_lead_c = &c0 * Q::from_integer(BigInt::from(2));
        let bound = 2 * self.len() + 2;
        for _ in 0..bound {
            let rem = self - &(&root * &root);
            match rem.leading() {
                None => return Some(root),
                Some((rm, rc)) => {
                    let m = rm.div(&twice_lead_m)?;
                    if m >= twice_lead_m {
                        return None;
                    }
                    root.add_term(m, rc / &twice_lead_c);
                }
            }
        }
        let rem = self - &(&root * &root);
        rem.is_zero().then_some(root)
    }
}

impl From<Q> for Poly {
    fn from(c: Q) -> Self {
        Poly::constant(c)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -(self.clone())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let coef = crate::exact::render_exact(&a);
            if m.is_one() {
                write!(f, "{coef}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{coef}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    fn x() -> Poly {
        Poly::var("x")
    }
    fn y() -> Poly {
        Poly::var("y")
    }

    #[test]
    fn lex_leading_term() {
        let p = &(&x() * &x()) + &(&x() * &y().pow(3));
        assert_eq!(p.leading().unwrap().0, &Monomial::from_pairs([("x".to_string(), 2)]));
        assert_eq!(p.to_string(), "x^2 + x*y^3");
    }

    #[test]
    fn exact_division_and_failure() {
        let a = &x() + &y();
        let b = &x() - &y();
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.div_exact(&(&x() + &Poly::one())).is_none());
    }

    #[test]
    fn square_roots() {
        let r = &x().scale(&qi(3)) - &y().scale(&q(1, 2));
        let sq = &r * &r;
        let got = sq.sqrt_exact().unwrap();
        assert_eq!(got, r);
        let not_square = &(&(&x() * &x()) + &(&x() * &y()).scale(&qi(3))) + &(&y() * &y());
        assert!(not_square.sqrt_exact().is_none());
    }

    #[test]
    fn substitution_and_coefficients() {
        let p = &(&x() * &x()) - &y();
        let s = p.substitute("x", &(&y() + &Poly::one()));
        assert_eq!(s.to_string(), "y^2 + y + 1");
        let c = p.coeffs_in("x");
        assert_eq!(c.len(), 3);
        assert_eq!(c[0], -y());
        assert_eq!(Poly::from_coeffs_in("x", &c), p);
    }

    #[test]
    fn content_and_monomial_content() {
        let p = (&x() * &y()).scale(&q(2, 3)) + (&x() * &x()).scale(&q(4, 9));
        assert_eq!(p.content(), q(2, 9));
        assert_eq!(p.monomial_content(), Monomial::var("x", 1));
    }
}
