//! Rational functions whose denominators are kept as products of
//! normalized base polynomials.
//!
//! Every denominator arising in this engine is a product of metric entries,
//! so storing it factored keeps sums over many triples from blowing up and
//! makes cancellation a matter of trial division by known bases.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::Q;
use crate::poly::Poly;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

/// Splits `p` as `c · Π baseᵢ^eᵢ` where monomial factors become single
/// variables and the remaining cofactor is primitive with positive leading
/// coefficient.
pub fn factor_into_bases(p: &Poly) -> (Q, Vec<(Poly, u32)>) {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    let mono = p.monomial_content();
    let rest = p.div_monomial(&mono).expect("content divides");
    let mut bases: Vec<(Poly, u32)> = mono
        .factors()
        .iter()
        .map(|(v, e)| (Poly::var(v), *e))
        .collect();
    if let Some(c) = rest.constant_value() {
        return (c, bases);
    }
    let mut c = rest.content();
    let mut prim = rest.primitive();
    if prim.leading().unwrap().1.is_negative() {
        prim = -prim;
        c = -c;
    }
    bases.push((prim, 1));
    (c, bases)
}

impl RatFunc {
    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: BTreeMap::new() }
    }

    pub fn var(name: &str) -> Self {
        RatFunc::from_poly(Poly::var(name))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &BTreeMap<Poly, u32> {
        &self.den
    }

    pub fn denominator(&self) -> Poly {
        expand(&self.den)
    }

    /// True when the stored denominator is a product of variables only, hence
    /// positive on the open positive orthant.
    pub fn denominator_is_monomial(&self) -> bool {
        self.den.keys().all(Poly::is_monomial)
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let keys: Vec<Poly> = self.den.keys().cloned().collect();
        for base in keys {
            let e = self.den.get_mut(&base).unwrap();
            while *e > 0 {
                match self.num.div_exact(&base) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
            if *e == 0 {
                self.den.remove(&base);
            }
        }
        self
    }

    pub fn inv(&self) -> RatFunc {
        let (c, bases) = factor_into_bases(&self.num);
        let mut den = BTreeMap::new();
        for (b, e) in bases {
            *den.entry(b).or_insert(0) += e;
        }
        RatFunc { num: expand(&self.den).scale(&(<Q as num_traits::One>::one() / c)), den }.reduce()
    }

    pub fn eval(&self, point: &BTreeMap<String, Q>) -> Result<Q> {
        let missing = || Error::Domain("evaluation point misses a parameter".into());
        let d = expand(&self.den).eval(point).ok_or_else(missing)?;
        if num_traits::Zero::is_zero(&d) {
            return Err(Error::Domain("denominator vanishes at the evaluation point".into()));
        }
        Ok(self.num.eval(point).ok_or_else(missing)? / d)
    }

    pub fn substitute_value(&self, var: &str, value: &Q) -> RatFunc {
        let num = RatFunc::from_poly(self.num.substitute_value(var, value));
        let den = RatFunc::from_poly(expand(&self.den).substitute_value(var, value));
        num.div(&den)
    }

    /// Constant value when the function does not depend on any variable.
    pub fn constant_value(&self) -> Option<Q> {
        let n = self.num.constant_value()?;
        let d = expand(&self.den).constant_value()?;
        Some(n / d)
    }
}

fn expand(den: &BTreeMap<Poly, u32>) -> Poly {
    den.iter().fold(Poly::one(), |acc, (b, e)| &acc * &b.pow(*e))
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &expand(&other.den) == &other.num * &expand(&self.den)
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }
    fn from_q(q: Q) -> Self {
        RatFunc::from_poly(Poly::constant(q))
    }
    fn add(&self, other: &Self) -> Self {
        if other.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return other.clone();
        }
        let mut lcm = self.den.clone();
        for (b, e) in &other.den {
            let slot = lcm.entry(b.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        let lift = |r: &RatFunc| {
            let mut f = Poly::one();
            for (b, e) in &lcm {
                let have = r.den.get(b).copied().unwrap_or(0);
                if *e > have {
                    f = &f * &b.pow(e - have);
                }
            }
            &r.num * &f
        };
        let num = lift(self) + lift(other);
        RatFunc { num, den: lcm }.reduce()
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn neg(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
    fn mul(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (b, e) in &other.den {
            *den.entry(b.clone()).or_insert(0) += e;
        }
        RatFunc { num: &self.num * &other.num, den }.reduce()
    }
    fn div(&self, other: &Self) -> Self {
        assert!(!other.num.is_zero(), "division by the zero rational function");
        self.mul(&other.inv())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn scale(&self, c: &Q) -> Self {
        RatFunc { num: self.num.scale(c), den: self.den.clone() }.reduce()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(b, e)| {
                let base = if b.len() > 1 { format!("({b})") } else { b.to_string() };
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "{num}/{}", parts[0])
        } else {
            write!(f, "{num}/({})", parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    fn v(n: &str) -> RatFunc {
        RatFunc::var(n)
    }

    #[test]
    fn sums_share_denominators() {
        // 1/x + 1/x = 2/x, not 2x/x^2
        let a = RatFunc::one().div(&v("x"));
        let s = a.add(&a);
        assert_eq!(s.to_string(), "2/x");
        assert_eq!(s.denominator_factors().len(), 1);
    }

    #[test]
    fn cancellation_by_trial_division() {
        // (x^2 - y^2) / (x + y) = x - y
        let xp = Poly::var("x");
        let yp = Poly::var("y");
        let n = RatFunc::from_poly(&(&xp * &xp) - &(&yp * &yp));
        let d = RatFunc::from_poly(&xp + &yp);
        let r = n.div(&d);
        assert!(r.denominator_factors().is_empty());
        assert_eq!(r.numerator(), &(&xp - &yp));
    }

    #[test]
    fn equality_is_semantic() {
        let a = v("x").div(&v("y"));
        let b = v("x").mul(&v("x")).div(&v("x").mul(&v("y")));
        assert_eq!(a, b);
        let mut p = BTreeMap::new();
        p.insert("x".to_string(), qi(3));
        p.insert("y".to_string(), qi(4));
        assert_eq!(a.eval(&p).unwrap(), q(3, 4));
    }

    #[test]
    fn negative_leading_bases_fold_sign_into_numerator() {
        let base = RatFunc::from_poly(&Poly::constant(qi(2)) - &Poly::var("x").scale(&qi(4)));
        let r = RatFunc::one().div(&base);
        let mut p = BTreeMap::new();
        p.insert("x".to_string(), qi(1));
        assert_eq!(r.eval(&p).unwrap(), q(-1, 2));
    }
}
