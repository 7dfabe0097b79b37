//! Dense univariate polynomials over ℚ: Euclidean algorithm, square-free
//! decomposition, Sturm chains and Descartes sign counts.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{qi, Q};

/// Coefficients stored lowest degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly(Vec<Q>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| qi(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![Q::one()])
    }

    pub fn x() -> Self {
        UPoly(vec![Q::zero(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.0.iter().rev() {
            acc = acc * x + crate::exact::to_f64(c);
        }
        acc
    }

    pub fn sign_at(&self, x: &Q) -> i32 {
        sign(&self.eval(x))
    }

    pub fn scale(&self, c: &Q) -> UPoly {
        UPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.leading()))
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * qi(k as i64))
                .collect(),
        )
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        let dd = d.degree();
        let lc = d.leading();
        if rem.len() < d.0.len() {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Yun's algorithm: `self = c · Π fᵢ^i` with each `fᵢ` monic, square-free
    /// and pairwise coprime. Returns `(fᵢ, i)` for the non-constant factors.
    pub fn square_free_decomposition(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_exact(&a).expect("gcd divides");
        let mut c = df.div_exact(&a).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            if b.degree() == 0 {
                break;
            }
            c = d.div_exact(&a).expect("gcd divides");
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn square_free_part(&self) -> UPoly {
        if self.degree() == 0 {
            return UPoly::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Sturm chain `p, p', -rem(p, p'), …`.
    pub fn sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            chain.push(-r);
        }
        chain.pop();
        chain
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Q, b: &Q) -> usize {
        let chain = self.square_free_part().sturm_chain();
        let va = variations(chain.iter().map(|p| sign(&p.eval(a))));
        let vb = variations(chain.iter().map(|p| sign(&p.eval(b))));
        va.saturating_sub(vb)
    }

    /// Sign changes in the coefficient sequence (Descartes bound for positive roots).
    pub fn descartes_variations(&self) -> usize {
        variations(self.0.iter().map(sign))
    }

    /// Cauchy bound: every root has modulus below the returned value.
    pub fn cauchy_bound(&self) -> Q {
        let lc = self.leading().abs();
        let m = self.0[..self.degree()]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Q::zero);
        m + Q::one()
    }

    /// True when only even powers occur.
    pub fn is_even(&self) -> bool {
        self.0.iter().enumerate().all(|(k, c)| k % 2 == 0 || c.is_zero())
    }

    /// For an even polynomial `p(x) = q(x²)` returns `q`.
    pub fn deflate_even(&self) -> Option<UPoly> {
        self.is_even()
            .then(|| UPoly::new(self.0.iter().step_by(2).cloned().collect()))
    }

    /// Rational roots by the rational root theorem (distinct, ascending).
    pub fn rational_roots(&self) -> Vec<Q> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        // strip the zero root first
        let lowest = self.0.iter().position(|c| !c.is_zero()).unwrap();
        if lowest > 0 {
            roots.push(Q::zero());
        }
        let p = UPoly::new(self.0[lowest..].to_vec());
        if p.degree() == 0 {
            return roots;
        }
        let ints = p.integer_coefficients();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let (Some(da), Some(dn)) = (small_divisors(&a0), small_divisors(&an)) else {
            return roots;
        };
        for num in &da {
            for den in &dn {
                for s in [1, -1] {
                    let cand = Q::new(num * BigInt::from(s), den.clone());
                    if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Integer coefficients of a scalar multiple with content 1.
    pub fn integer_coefficients(&self) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for c in &self.0 {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Taylor coefficients at `x0`: `p(x0 + h) = Σ tₖ hᵏ`.
    pub fn taylor_at(&self, x0: &Q) -> Vec<Q> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut cur = self.clone();
        let mut fact = Q::one();
        for k in 0..self.0.len() {
            if k > 0 {
                fact *= qi(k as i64);
            }
            out.push(cur.eval(x0) / &fact);
            cur = cur.derivative();
        }
        out
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    use num_traits::ToPrimitive;
    let n = n.to_u64()?;
    if n == 0 || n > 10_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

pub(crate) fn sign(v: &Q) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs.filter(|s| *s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, rhs: &'a UPoly) -> UPoly {
        let n = self.0.len().max(rhs.0.len());
        UPoly::new(
            (0..n)
                .map(|k| {
                    self.0.get(k).cloned().unwrap_or_else(Q::zero) + rhs.0.get(k).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &'a UPoly) -> UPoly {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &'a UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly(self.0.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::poly::Poly::from_upoly(self, "x"))
    }
}
