//! Riemannian scalar curvature from triple symbols, and the Hermitian scalar
//! curvatures `s₁`, `s₂(t)`, `s_J` together with the defect `2s₁ − s`.
//!
//! With `dᵢ = dim mᵢ`,
//! `s = ½ Σᵢ dᵢ/λᵢ − ¼ Σ_{i,j,k} [ijk] λ_k/(λᵢλⱼ)`,
//! the second sum over ordered index triples. Every Hermitian quantity is an
//! affine combination of `s` and the squared norms; the Lee form vanishes on
//! flag manifolds, so its terms are absent throughout.

use serde::Serialize;

use crate::error::Result;
use crate::exact::{q, qi, Q};
use crate::flagspace::{FlagSpace, ZeroSumTriple};
use crate::hermitian::{classify_norms, tensor_norms, AlmostComplexStructure, GrayHervellaClass, InvariantMetric, TensorNorms};
use crate::scalar::Scalar;

/// `[ijk]`: sum of `m²` over zero-sum triples (both sign classes) and over
/// each assignment of the triple's roots to the slots `(i, j, k)`.
pub fn triple_symbol(fs: &FlagSpace, i: usize, j: usize, k: usize) -> Q {
    let mut acc = qi(0);
    for t in fs.zero_sum_triples() {
        let idx = t.summand_indices();
        for ord in ZeroSumTriple::orderings() {
            if [idx[ord[0]], idx[ord[1]], idx[ord[2]]] == [i, j, k] {
                acc += t.msq();
            }
        }
    }
    acc
}

pub fn riemannian_scalar<S: Scalar>(metric: &InvariantMetric<S>) -> S {
    let fs = metric.space();
    let mut s = S::zero();
    for (summand, value) in fs.summands().iter().zip(metric.values()) {
        s = s.add(&S::from_q(q(summand.dim() as i64, 2)).div(value));
    }
    let mut quartic = S::zero();
    for t in fs.zero_sum_triples() {
        let l = t.summand_indices().map(|i| &metric.values()[i]);
        for ord in ZeroSumTriple::orderings() {
            let term = l[ord[2]].div(&l[ord[0]].mul(l[ord[1]]));
            quartic = quartic.add(&term.scale(t.msq()));
        }
    }
    s.sub(&quartic.scale(&q(1, 4)))
}

/// `s₂(t) = a t² + b t + c`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quadratic<S> {
    pub a: S,
    pub b: S,
    pub c: S,
}

impl<S: Scalar> Quadratic<S> {
    pub fn at(&self, t: &Q) -> S {
        self.a.scale(&(t * t)).add(&self.b.scale(t)).add(&self.c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport<S> {
    pub norms: TensorNorms<S>,
    pub s: S,
    pub s1: S,
    pub s2: Quadratic<S>,
    pub s_j: S,
    pub defect: S,
    pub gh_class: GrayHervellaClass,
}

/// `2s₁ − s` assembled from the norms alone.
pub fn defect_from_norms<S: Scalar>(n: &TensorNorms<S>) -> S {
    n.df_minus_sq
        .scale(&q(-5, 6))
        .add(&n.n0_sq.scale(&q(1, 8)))
        .add(&n.df_plus_sq.scale(&q(1, 2)))
}

pub fn curvature_report<S: Scalar>(metric: &InvariantMetric<S>, acs: &AlmostComplexStructure) -> Result<CurvatureReport<S>> {
    let norms = tensor_norms(metric, acs)?;
    let s = riemannian_scalar(metric);
    let half_s = s.scale(&q(1, 2));
    let s1 = half_s
        .sub(&norms.df_minus_sq.scale(&q(5, 12)))
        .add(&norms.n0_sq.scale(&q(1, 16)))
        .add(&norms.df_plus_sq.scale(&q(1, 4)));
    let a = norms.df_plus_sq.scale(&q(-1, 4));
    let s2 = Quadratic {
        b: a.scale(&qi(-2)),
        a,
        c: half_s.sub(&norms.df_minus_sq.scale(&q(1, 12))).add(&norms.n0_sq.scale(&q(1, 32))),
    };
    let s_j = s.sub(&norms.df_minus_sq.scale(&q(2, 3))).add(&norms.n0_sq.scale(&q(1, 4)));
    let defect = defect_from_norms(&norms);
    let gh_class = classify_norms(&norms);
    Ok(CurvatureReport { norms, s, s1, s2, s_j, defect, gh_class })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagspace::builtin_space;
    use crate::hermitian::{make_acs, make_metric, make_symbolic_metric};
    use crate::poly::Poly;
    use crate::ratfunc::RatFunc;
    use std::sync::Arc;

    fn space(name: &str) -> Arc<FlagSpace> {
        Arc::new(builtin_space(name).unwrap())
    }

    fn x() -> RatFunc {
        RatFunc::var("x")
    }
    fn y() -> RatFunc {
        RatFunc::var("y")
    }

    #[test]
    fn triple_symbols() {
        assert_eq!(triple_symbol(&space("su3-full"), 0, 1, 2), q(1, 3));
        assert_eq!(triple_symbol(&space("su3-full"), 2, 0, 1), q(1, 3));
        assert_eq!(triple_symbol(&space("su3-full"), 0, 0, 1), qi(0));
        assert_eq!(triple_symbol(&space("cp3"), 0, 0, 1), q(2, 3));
        assert_eq!(triple_symbol(&space("g2-u2"), 0, 0, 1), qi(1));
    }

    #[test]
    fn cp3_and_g2u2_scalar_curvature() {
        let fs = space("cp3");
        let g = make_symbolic_metric(fs, vec![Poly::var("x"), Poly::var("y")]).unwrap();
        let expected = RatFunc::from_q(qi(2)).div(&x())
            .add(&RatFunc::from_q(q(2, 3)).div(&y()))
            .sub(&y().div(&x().square()).scale(&q(1, 6)));
        assert_eq!(riemannian_scalar(&g), expected);

        let fs = space("g2-u2");
        let g = make_symbolic_metric(fs, vec![Poly::var("x"), Poly::var("y")]).unwrap();
        let expected = y().div(&x().square()).scale(&q(-1, 4))
            .add(&RatFunc::from_q(qi(4)).div(&x()))
            .add(&RatFunc::from_q(q(1, 2)).div(&y()));
        assert_eq!(riemannian_scalar(&g), expected);
    }

    #[test]
    fn su3_reports() {
        let fs = space("su3-full");
        let j1 = make_acs(fs.clone(), &[1, 1, 1]).unwrap();
        let j2 = make_acs(fs.clone(), &[1, 1, -1]).unwrap();
        let m = |v: [i64; 3]| make_metric(fs.clone(), v.iter().map(|&k| qi(k)).collect()).unwrap();

        let r = curvature_report(&m([1, 1, 1]), &j2).unwrap();
        assert_eq!(r.s, q(5, 2));
        assert_eq!(r.s1, qi(0));
        assert_eq!(r.defect, q(-5, 2));

        let r = curvature_report(&m([1, 1, 2]), &j2).unwrap();
        assert_eq!(r.s2.a, qi(0));
        assert_eq!(r.s2.c, q(5, 6));

        let r = curvature_report(&m([1, 1, 1]), &j1).unwrap();
        assert_eq!(r.s_j, r.s);
        assert_eq!(r.s2.at(&qi(0)), q(5, 4));
        assert_eq!(r.s1, q(4, 3));

        let r = curvature_report(&m([1, 1, 3]), &j1).unwrap();
        assert_eq!(r.defect, q(1, 18));
        assert_eq!(r.gh_class.label(), "W3");

        let r = curvature_report(&m([1, 1, 2]), &j1).unwrap();
        assert!(r.gh_class.is_kahler());
        assert_eq!(r.defect, qi(0));
        assert_eq!(r.s_j, r.s);
        assert_eq!(r.s1.scale(&qi(2)), r.s);
    }

    #[test]
    fn symbolic_su3_nearly_kahler_family() {
        let fs = space("su3-full");
        let g = make_symbolic_metric(fs.clone(), ["x", "y", "z"].iter().map(|v| Poly::var(v)).collect()).unwrap();
        let j2 = make_acs(fs, &[1, 1, -1]).unwrap();
        let r = curvature_report(&g, &j2).unwrap();
        assert!(r.s1.is_zero());
        assert_eq!(r.defect, r.s.neg());
        assert_eq!(r.defect, r.s1.scale(&qi(2)).sub(&r.s));
    }
}
