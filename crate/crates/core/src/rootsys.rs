//! Root systems of simple Lie algebras in the Killing normalization.
//!
//! Roots are integer vectors over the simple roots. Inner products are the
//! Killing-dual form ⟨λ, μ⟩, normalized so that ⟨long, long⟩ = 1/h^∨ (h^∨ the
//! dual Coxeter number).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{q, qi, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    C,
    G2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootSystemSpec {
    pub family: Family,
    pub rank: usize,
}

impl RootSystemSpec {
    pub fn a(rank: usize) -> Self {
        RootSystemSpec { family: Family::A, rank }
    }

    pub fn c(rank: usize) -> Self {
        RootSystemSpec { family: Family::C, rank }
    }

    pub fn g2() -> Self {
        RootSystemSpec { family: Family::G2, rank: 2 }
    }
}

impl fmt::Display for RootSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A{}", self.rank),
            Family::C => write!(f, "C{}", self.rank),
            Family::G2 => write!(f, "G2"),
        }
    }
}

/// A root written in the basis of simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn simple(rank: usize, i: usize) -> Root {
        let mut c = vec![0; rank];
        c[i] = 1;
        Root(c)
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.0
    }

    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The positive root of the pair {α, −α}.
    pub fn abs(&self) -> Root {
        if self.is_positive() {
            self.clone()
        } else {
            -self.clone()
        }
    }

    pub fn scaled(&self, k: i32) -> Root {
        Root(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add for &Root {
    type Output = Root;
    fn add(self, rhs: &Root) -> Root {
        Root(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Root {
    type Output = Root;
    fn sub(self, rhs: &Root) -> Root {
        Root(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root(self.0.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    spec: RootSystemSpec,
    cartan: Vec<Vec<i32>>,
    gram: Vec<Vec<Q>>,
    simple_roots: Vec<Root>,
    positive_roots: Vec<Root>,
    all_roots: Vec<Root>,
    index: HashMap<Root, usize>,
}

/// Cartan matrix `a_ij = ⟨αᵢ, αⱼ^∨⟩` and the Killing-dual squared length of each simple root.
fn cartan_data(spec: RootSystemSpec) -> Result<(Vec<Vec<i32>>, Vec<Q>)> {
    let n = spec.rank;
    let unsupported = || Error::UnsupportedAlgebra(format!("{:?} of rank {n}", spec.family));
    match spec.family {
        Family::A => {
            if n < 1 {
                return Err(unsupported());
            }
            let mut a = vec![vec![0; n]; n];
            for i in 0..n {
                a[i][i] = 2;
                if i + 1 < n {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
            }
            let h = (n + 1) as i64;
            Ok((a, vec![q(1, h); n]))
        }
        Family::C => {
            if n < 2 {
                return Err(unsupported());
            }
            // αᵢ = eᵢ − eᵢ₊₁ (short), αₙ = 2eₙ (long)
            let mut a = vec![vec![0; n]; n];
            for i in 0..n {
                a[i][i] = 2;
                if i + 1 < n {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
            }
            a[n - 1][n - 2] = -2;
            let h = (n + 1) as i64;
            let mut len = vec![q(1, 2 * h); n];
            len[n - 1] = q(1, h);
            Ok((a, len))
        }
        Family::G2 => {
            if n != 2 {
                return Err(unsupported());
            }
            // α₁ long, α₂ short
            Ok((vec![vec![2, -3], vec![-1, 2]], vec![q(1, 4), q(1, 12)]))
        }
    }
}

pub fn build_root_system(spec: RootSystemSpec) -> Result<RootSystem> {
    let (cartan, lengths) = cartan_data(spec)?;
    let n = spec.rank;
    // ⟨αᵢ, αⱼ⟩ = a_ij · |αⱼ|² / 2
    let gram: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| qi(cartan[i][j] as i64) * &lengths[j] / qi(2)).collect())
        .collect();

    let simple_roots: Vec<Root> = (0..n).map(|i| Root::simple(n, i)).collect();
    let mut positive: Vec<Root> = simple_roots.clone();
    let mut known: std::collections::HashSet<Root> = positive.iter().cloned().collect();
    let mut frontier = positive.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for (i, alpha) in simple_roots.iter().enumerate() {
                // p = how far β − kαᵢ stays a (positive) root
                let mut p = 0;
                let mut probe = beta - alpha;
                while known.contains(&probe) {
                    p += 1;
                    probe = &probe - alpha;
                }
                let pairing: i32 = (0..n).map(|j| beta.0[j] * cartan[j][i]).sum();
                let qq = p - pairing;
                if qq > 0 {
                    let up = beta + alpha;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort_by_key(|r| (r.height(), std::cmp::Reverse(r.clone())));
        positive.extend(next.iter().cloned());
        frontier = next;
    }
    positive.sort_by_key(|r| (r.height(), std::cmp::Reverse(r.clone())));
    let mut all_roots = positive.clone();
    all_roots.extend(positive.iter().map(|r| -r.clone()));
    let index = all_roots.iter().cloned().enumerate().map(|(k, r)| (r, k)).collect();
    Ok(RootSystem { spec, cartan, gram, simple_roots, positive_roots: positive, all_roots, index })
}

impl RootSystem {
    pub fn spec(&self) -> RootSystemSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    pub fn simple_roots(&self) -> &[Root] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn all_roots(&self) -> &[Root] {
        &self.all_roots
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    fn check(&self, r: &Root) -> Result<()> {
        if r.0.len() == self.rank() && self.is_root(r) {
            Ok(())
        } else {
            Err(Error::NotARoot(r.to_string()))
        }
    }

    /// Killing-dual inner product of two weights in simple-root coordinates.
    pub fn inner(&self, a: &[i32], b: &[i32]) -> Q {
        let mut acc = Q::zero();
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if *bj != 0 {
                    acc += &self.gram[i][j] * qi((*ai as i64) * (*bj as i64));
                }
            }
        }
        acc
    }

    pub fn killing_norm_sq(&self, alpha: &Root) -> Result<Q> {
        self.check(alpha)?;
        Ok(self.inner(&alpha.0, &alpha.0))
    }

    /// `(p, q)` for the α-string `β − pα, …, β + qα` through β.
    pub fn root_string(&self, alpha: &Root, beta: &Root) -> Result<(u32, u32)> {
        self.check(alpha)?;
        self.check(beta)?;
        if alpha == beta || *alpha == -beta.clone() {
            return Err(Error::DegenerateString);
        }
        Ok(self.string_unchecked(alpha, beta))
    }

    fn string_unchecked(&self, alpha: &Root, beta: &Root) -> (u32, u32) {
        let mut p = 0;
        let mut probe = beta - alpha;
        while self.is_root(&probe) {
            p += 1;
            probe = &probe - alpha;
        }
        let mut qq = 0;
        let mut probe = beta + alpha;
        while self.is_root(&probe) {
            qq += 1;
            probe = &probe + alpha;
        }
        (p, qq)
    }

    /// Squared Weyl-basis structure constant `m²_{α,β} = q(p+1)⟨α,α⟩/2`
    /// (zero when α + β is not a root).
    pub fn structure_constant_sq(&self, alpha: &Root, beta: &Root) -> Result<Q> {
        self.check(alpha)?;
        self.check(beta)?;
        let sum = alpha + beta;
        if !self.is_root(&sum) {
            return Ok(Q::zero());
        }
        let (p, qq) = self.string_unchecked(alpha, beta);
        let len = self.inner(&alpha.0, &alpha.0);
        Ok(qi((qq * (p + 1)) as i64) * len / qi(2))
    }

    /// Roots are all short/long: returns true if `⟨α,α⟩` is the maximum length.
    pub fn is_long(&self, alpha: &Root) -> Result<bool> {
        let l = self.killing_norm_sq(alpha)?;
        let max = self.all_roots.iter().map(|r| self.inner(&r.0, &r.0)).max().unwrap();
        Ok(l == max)
    }

    pub fn lengths_positive(&self) -> bool {
        self.all_roots.iter().all(|r| self.inner(&r.0, &r.0).is_positive())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(c: &[i32]) -> Root {
        Root(c.to_vec())
    }

    #[test]
    fn root_counts() {
        let a2 = build_root_system(RootSystemSpec::a(2)).unwrap();
        assert_eq!(a2.all_roots().len(), 6);
        assert_eq!(a2.positive_roots(), &[r(&[1, 0]), r(&[0, 1]), r(&[1, 1])]);
        let c2 = build_root_system(RootSystemSpec::c(2)).unwrap();
        assert_eq!(c2.all_roots().len(), 8);
        // e1−e2, 2e2, e1+e2, 2e1
        assert_eq!(c2.positive_roots(), &[r(&[1, 0]), r(&[0, 1]), r(&[1, 1]), r(&[2, 1])]);
        let g2 = build_root_system(RootSystemSpec::g2()).unwrap();
        let mut pos = g2.positive_roots().to_vec();
        pos.sort();
        let mut expected = vec![r(&[1, 0]), r(&[0, 1]), r(&[1, 1]), r(&[1, 2]), r(&[1, 3]), r(&[2, 3])];
        expected.sort();
        assert_eq!(pos, expected);
        assert_eq!(build_root_system(RootSystemSpec::a(3)).unwrap().positive_roots().len(), 6);
        assert_eq!(build_root_system(RootSystemSpec::c(3)).unwrap().positive_roots().len(), 9);
    }

    #[test]
    fn unsupported_specs() {
        assert!(matches!(
            build_root_system(RootSystemSpec { family: Family::G2, rank: 3 }),
            Err(Error::UnsupportedAlgebra(_))
        ));
        assert!(build_root_system(RootSystemSpec::a(0)).is_err());
        assert!(build_root_system(RootSystemSpec::c(1)).is_err());
    }

    #[test]
    fn killing_lengths() {
        let a2 = build_root_system(RootSystemSpec::a(2)).unwrap();
        for root in a2.all_roots() {
            assert_eq!(a2.killing_norm_sq(root).unwrap(), q(1, 3));
        }
        let g2 = build_root_system(RootSystemSpec::g2()).unwrap();
        assert_eq!(g2.killing_norm_sq(&r(&[0, 1])).unwrap(), q(1, 12));
        assert_eq!(g2.killing_norm_sq(&r(&[1, 0])).unwrap(), q(1, 4));
        let c2 = build_root_system(RootSystemSpec::c(2)).unwrap();
        assert_eq!(c2.killing_norm_sq(&r(&[1, 0])).unwrap(), q(1, 6));
        assert_eq!(c2.killing_norm_sq(&r(&[2, 1])).unwrap(), q(1, 3));
        assert!(matches!(a2.killing_norm_sq(&r(&[1, -1])), Err(Error::NotARoot(_))));
    }

    #[test]
    fn strings() {
        let a2 = build_root_system(RootSystemSpec::a(2)).unwrap();
        assert_eq!(a2.root_string(&r(&[1, 0]), &r(&[0, 1])).unwrap(), (0, 1));
        assert_eq!(a2.root_string(&r(&[1, 0]), &r(&[-1, 0])), Err(Error::DegenerateString));
        let g2 = build_root_system(RootSystemSpec::g2()).unwrap();
        assert_eq!(g2.root_string(&r(&[0, 1]), &r(&[1, 1])).unwrap(), (1, 2));
        let a3 = build_root_system(RootSystemSpec::a(3)).unwrap();
        assert_eq!(a3.root_string(&r(&[1, 0, 0]), &r(&[0, 0, 1])).unwrap(), (0, 0));
    }

    #[test]
    fn structure_constants() {
        let a2 = build_root_system(RootSystemSpec::a(2)).unwrap();
        assert_eq!(a2.structure_constant_sq(&r(&[1, 0]), &r(&[0, 1])).unwrap(), q(1, 6));
        assert_eq!(a2.structure_constant_sq(&r(&[1, 0]), &r(&[1, 1])).unwrap(), q(0, 1));
        let g2 = build_root_system(RootSystemSpec::g2()).unwrap();
        assert_eq!(g2.structure_constant_sq(&r(&[1, 0]), &r(&[1, 3])).unwrap(), q(1, 8));
    }

    #[test]
    fn killing_sum_rule() {
        for spec in [RootSystemSpec::a(2), RootSystemSpec::a(3), RootSystemSpec::c(2), RootSystemSpec::c(3), RootSystemSpec::g2()] {
            let rs = build_root_system(spec).unwrap();
            let total: Q = rs.all_roots().iter().map(|a| rs.killing_norm_sq(a).unwrap()).sum();
            assert_eq!(total, qi(spec.rank as i64), "{spec}");
        }
    }
}
