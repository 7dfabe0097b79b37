//! Generalized flag manifolds `G/K` given by a root system and a subset Θ of
//! simple roots: complementary roots, isotropy summands and zero-sum triples.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{qi, Q};
use crate::rootsys::{build_root_system, Root, RootSystem, RootSystemSpec};

pub const BUILTIN_SPACES: [&str; 5] = ["su3-full", "cp3", "su4-full", "g2-u2", "g2-full"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropySummand {
    index: usize,
    roots: Vec<Root>,
}

impl IsotropySummand {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    /// Real dimension.
    pub fn dim(&self) -> usize {
        2 * self.roots.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SignClass {
    /// Two of the three roots are positive.
    Positive,
    /// Two of the three roots are negative.
    Negative,
}

/// Three complementary roots with α + β + γ = 0, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSumTriple {
    roots: [Root; 3],
    msq: Q,
    summand_indices: [usize; 3],
    sign_class: SignClass,
}

impl ZeroSumTriple {
    pub fn roots(&self) -> &[Root; 3] {
        &self.roots
    }

    /// Common value of m²_{α,β} = m²_{β,γ} = m²_{γ,α}.
    pub fn msq(&self) -> &Q {
        &self.msq
    }

    pub fn summand_indices(&self) -> [usize; 3] {
        self.summand_indices
    }

    pub fn sign_class(&self) -> SignClass {
        self.sign_class
    }

    /// The six orderings of the triple, each as root indices into `roots()`.
    pub fn orderings() -> [[usize; 3]; 6] {
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagSpace {
    name: Option<String>,
    rs: RootSystem,
    theta: Vec<usize>,
    complementary_positive: Vec<Root>,
    summands: Vec<IsotropySummand>,
    summand_of: HashMap<Root, usize>,
    triples: Vec<ZeroSumTriple>,
}

fn order_key(r: &Root) -> (i32, std::cmp::Reverse<Root>) {
    (r.height(), std::cmp::Reverse(r.clone()))
}

/// Solves `a · x = b` over ℚ for a nonsingular square `a`.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Vec<Q> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular Gram block");
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Q::one() / &a[col][col];
        for k in col..n {
            a[col][k] = &a[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..n {
                    let v = &a[col][k] * &f;
                    a[r][k] -= v;
                }
                let v = &b[col] * &f;
                b[r] -= v;
            }
        }
    }
    b
}

/// Orthogonal projection of a root onto span(Θ)^⊥, in simple-root coordinates.
fn t_root(rs: &RootSystem, theta: &[usize], beta: &Root) -> Vec<Q> {
    let mut v: Vec<Q> = beta.coeffs().iter().map(|&c| qi(c as i64)).collect();
    if theta.is_empty() {
        return v;
    }
    let gram = rs.gram();
    let block: Vec<Vec<Q>> = theta.iter().map(|&i| theta.iter().map(|&j| gram[i][j].clone()).collect()).collect();
    let rhs: Vec<Q> = theta
        .iter()
        .map(|&i| rs.inner(beta.coeffs(), rs.simple_roots()[i].coeffs()))
        .collect();
    let coef = solve(block, rhs);
    for (k, &i) in theta.iter().enumerate() {
        v[i] -= &coef[k];
    }
    v
}

pub fn build_flag(rs: RootSystem, theta: &[usize]) -> Result<FlagSpace> {
    let rank = rs.rank();
    let mut theta = theta.to_vec();
    theta.sort_unstable();
    theta.dedup();
    if let Some(&bad) = theta.iter().find(|&&i| i >= rank) {
        return Err(Error::InvalidTheta(bad));
    }
    if theta.len() == rank {
        return Err(Error::EmptyTangentSpace);
    }
    // Positive roots in span(Θ) are exactly those supported on Θ.
    let in_theta = |r: &Root| r.coeffs().iter().enumerate().all(|(i, &c)| c == 0 || theta.contains(&i));
    let mut complementary: Vec<Root> = rs.positive_roots().iter().filter(|r| !in_theta(r)).cloned().collect();
    complementary.sort_by_key(order_key);

    let mut groups: Vec<(Vec<Q>, Vec<Root>)> = Vec::new();
    for r in &complementary {
        let t = t_root(&rs, &theta, r);
        match groups.iter_mut().find(|(k, _)| *k == t) {
            Some((_, members)) => members.push(r.clone()),
            None => groups.push((t, vec![r.clone()])),
        }
    }
    let mut members: Vec<Vec<Root>> = groups.into_iter().map(|(_, m)| m).collect();
    for m in &mut members {
        m.sort_by_key(order_key);
    }
    members.sort_by_key(|m| order_key(&m[0]));
    let summands = members
        .into_iter()
        .enumerate()
        .map(|(index, roots)| IsotropySummand { index, roots })
        .collect();
    let mut fs = FlagSpace {
        name: None,
        rs,
        theta,
        complementary_positive: complementary,
        summands,
        summand_of: HashMap::new(),
        triples: Vec::new(),
    };
    fs.reindex();
    Ok(fs)
}

impl FlagSpace {
    fn reindex(&mut self) {
        self.summand_of.clear();
        for s in &self.summands {
            for r in &s.roots {
                self.summand_of.insert(r.clone(), s.index);
                self.summand_of.insert(-r.clone(), s.index);
            }
        }
        self.triples = self.enumerate_triples();
    }

    fn enumerate_triples(&self) -> Vec<ZeroSumTriple> {
        let mut roots: Vec<Root> = self.complementary_roots();
        roots.sort();
        let mut out = Vec::new();
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let gamma = -(&roots[i] + &roots[j]);
                if gamma > roots[j] && self.summand_of.contains_key(&gamma) {
                    let t = [roots[i].clone(), roots[j].clone(), gamma];
                    let msq = self
                        .rs
                        .structure_constant_sq(&t[0], &t[1])
                        .expect("complementary roots are roots");
                    let positives = t.iter().filter(|r| r.is_positive()).count();
                    out.push(ZeroSumTriple {
                        summand_indices: [self.summand_of[&t[0]], self.summand_of[&t[1]], self.summand_of[&t[2]]],
                        sign_class: if positives == 2 { SignClass::Positive } else { SignClass::Negative },
                        roots: t,
                        msq,
                    });
                }
            }
        }
        out.sort_by(|a, b| a.roots.cmp(&b.roots));
        out
    }

    /// Reorders summands so that summand `k` contains `representatives[k]`.
    pub fn with_summand_order(mut self, representatives: &[Root]) -> Result<FlagSpace> {
        if representatives.len() != self.summands.len() {
            return Err(Error::ArityMismatch { expected: self.summands.len(), got: representatives.len() });
        }
        let mut reordered = Vec::with_capacity(self.summands.len());
        for (k, rep) in representatives.iter().enumerate() {
            let idx = *self
                .summand_of
                .get(&rep.abs())
                .ok_or_else(|| Error::NotARoot(format!("{rep} is not a complementary root")))?;
            let mut s = self.summands[idx].clone();
            s.index = k;
            reordered.push(s);
        }
        let mut seen: Vec<&Root> = reordered.iter().map(|s| &s.roots[0]).collect();
        seen.sort();
        seen.dedup();
        if seen.len() != reordered.len() {
            return Err(Error::InvalidMetric("summand order repeats a summand".into()));
        }
        self.summands = reordered;
        self.reindex();
        Ok(self)
    }

    pub fn named(mut self, name: &str) -> FlagSpace {
        self.name = Some(name.to_string());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn theta(&self) -> &[usize] {
        &self.theta
    }

    pub fn complementary_positive(&self) -> &[Root] {
        &self.complementary_positive
    }

    /// Π_M: complementary roots of both signs.
    pub fn complementary_roots(&self) -> Vec<Root> {
        let mut all = self.complementary_positive.clone();
        all.extend(self.complementary_positive.iter().map(|r| -r.clone()));
        all
    }

    pub fn summands(&self) -> &[IsotropySummand] {
        &self.summands
    }

    pub fn summand_count(&self) -> usize {
        self.summands.len()
    }

    /// Index of the summand containing ±α, if α is complementary.
    pub fn summand_of(&self, alpha: &Root) -> Option<usize> {
        self.summand_of.get(alpha).copied()
    }

    /// Complex dimension (= number of positive complementary roots).
    pub fn complex_dim(&self) -> usize {
        self.complementary_positive.len()
    }

    pub fn zero_sum_triples(&self) -> &[ZeroSumTriple] {
        &self.triples
    }
}

impl fmt::Display for FlagSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let theta: Vec<String> = self.theta.iter().map(|i| format!("α{}", i + 1)).collect();
        write!(
            f,
            "{} ({}, Θ={{{}}})",
            self.name.as_deref().unwrap_or("flag"),
            self.rs.spec(),
            theta.join(",")
        )
    }
}

pub fn zero_sum_triples(fs: &FlagSpace) -> Vec<ZeroSumTriple> {
    fs.zero_sum_triples().to_vec()
}

pub fn builtin_space(name: &str) -> Result<FlagSpace> {
    let rv = |c: &[i32]| Root(c.to_vec());
    let fs = match name {
        "su3-full" => build_flag(build_root_system(RootSystemSpec::a(2))?, &[])?,
        // Θ = {2λ₂}, the long simple root of C₂
        "cp3" => build_flag(build_root_system(RootSystemSpec::c(2))?, &[1])?,
        "su4-full" => build_flag(build_root_system(RootSystemSpec::a(3))?, &[])?.with_summand_order(&[
            rv(&[1, 0, 0]),
            rv(&[1, 1, 0]),
            rv(&[1, 1, 1]),
            rv(&[0, 1, 0]),
            rv(&[0, 1, 1]),
            rv(&[0, 0, 1]),
        ])?,
        // U(2) generated by the short simple root α₂
        "g2-u2" => build_flag(build_root_system(RootSystemSpec::g2())?, &[1])?,
        "g2-full" => build_flag(build_root_system(RootSystemSpec::g2())?, &[])?.with_summand_order(&[
            rv(&[1, 0]),
            rv(&[0, 1]),
            rv(&[1, 1]),
            rv(&[1, 2]),
            rv(&[1, 3]),
            rv(&[2, 3]),
        ])?,
        other => return Err(Error::UnknownSpace(other.to_string())),
    };
    Ok(fs.named(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(c: &[i32]) -> Root {
        Root(c.to_vec())
    }

    #[test]
    fn su3_full_flag() {
        let fs = builtin_space("su3-full").unwrap();
        assert_eq!(fs.summand_count(), 3);
        assert!(fs.summands().iter().all(|s| s.dim() == 2));
        assert_eq!(fs.summands()[2].roots(), &[r(&[1, 1])]);
        assert_eq!(fs.zero_sum_triples().len(), 2);
        assert_eq!(fs.complex_dim(), 3);
    }

    #[test]
    fn cp3_summands() {
        let fs = builtin_space("cp3").unwrap();
        let dims: Vec<usize> = fs.summands().iter().map(|s| s.dim()).collect();
        assert_eq!(dims, vec![4, 2]);
        assert_eq!(fs.summands()[0].roots(), &[r(&[1, 0]), r(&[1, 1])]);
        assert_eq!(fs.summands()[1].roots(), &[r(&[2, 1])]);
        assert_eq!(fs.zero_sum_triples().len(), 2);
    }

    #[test]
    fn g2_spaces() {
        let u2 = builtin_space("g2-u2").unwrap();
        assert_eq!(u2.summands()[0].roots(), &[r(&[1, 0]), r(&[1, 1]), r(&[1, 2]), r(&[1, 3])]);
        assert_eq!(u2.summands()[1].roots(), &[r(&[2, 3])]);
        assert_eq!(u2.zero_sum_triples().len(), 4);
        let full = builtin_space("g2-full").unwrap();
        assert_eq!(full.summand_count(), 6);
        assert_eq!(full.zero_sum_triples().len(), 10);
    }

    #[test]
    fn su4_order_and_triples() {
        let fs = builtin_space("su4-full").unwrap();
        assert_eq!(fs.summands()[1].roots(), &[r(&[1, 1, 0])]);
        assert_eq!(fs.summands()[3].roots(), &[r(&[0, 1, 0])]);
        assert_eq!(fs.zero_sum_triples().len(), 8);
    }

    #[test]
    fn errors() {
        let a2 = build_root_system(RootSystemSpec::a(2)).unwrap();
        assert_eq!(build_flag(a2.clone(), &[0, 1]), Err(Error::EmptyTangentSpace));
        assert_eq!(build_flag(a2, &[5]), Err(Error::InvalidTheta(5)));
        assert!(matches!(builtin_space("su5"), Err(Error::UnknownSpace(_))));
    }

    #[test]
    fn sign_classes_pair_up() {
        for name in BUILTIN_SPACES {
            let fs = builtin_space(name).unwrap();
            let pos = fs.zero_sum_triples().iter().filter(|t| t.sign_class() == SignClass::Positive).count();
            assert_eq!(2 * pos, fs.zero_sum_triples().len(), "{name}");
        }
    }
}
