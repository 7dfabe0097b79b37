use std::collections::BTreeMap;
use std::sync::Arc;

use flagherm::curvature::curvature_report;
use flagherm::flagspace::{builtin_space, FlagSpace, BUILTIN_SPACES};
use flagherm::hermitian::{classify_triple, enumerate_acs, make_metric, tensor_norms, TripleType};
use flagherm::poly::Poly;
use flagherm::hermitian::make_symbolic_metric;
use flagherm::ratfunc::RatFunc;
use flagherm::scalar::Scalar;
use flagherm::Q;
use proptest::prelude::*;

fn spaces() -> Vec<Arc<FlagSpace>> {
    BUILTIN_SPACES.iter().map(|n| Arc::new(builtin_space(n).unwrap())).collect()
}

fn positive_q() -> impl Strategy<Value = Q> {
    (1i64..60, 1i64..25).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

/// (space index, metric values, structure index)
fn case() -> impl Strategy<Value = (usize, Vec<Q>, usize)> {
    (0..BUILTIN_SPACES.len()).prop_flat_map(|i| {
        let fs = builtin_space(BUILTIN_SPACES[i]).unwrap();
        let n = fs.summand_count();
        let structures = 1usize << (n - 1);
        (Just(i), prop::collection::vec(positive_q(), n), 0..structures)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn df_identity((i, values, k) in case()) {
        let fs = &spaces()[i];
        let g = make_metric(fs.clone(), values).unwrap();
        let j = &enumerate_acs(fs)[k];
        let n = tensor_norms(&g, j).unwrap();
        prop_assert_eq!(&n.big_df_sq, &n.identity_rhs());
    }

    #[test]
    fn norms_nonnegative((i, values, k) in case()) {
        let fs = &spaces()[i];
        let g = make_metric(fs.clone(), values).unwrap();
        let n = tensor_norms(&g, &enumerate_acs(fs)[k]).unwrap();
        for v in [&n.n0_sq, &n.df_minus_sq, &n.df_plus_sq, &n.big_df_sq] {
            prop_assert!(*v >= Q::from_integer(0.into()));
        }
    }

    #[test]
    fn conjugation_invariance((i, values, k) in case()) {
        let fs = &spaces()[i];
        let g = make_metric(fs.clone(), values).unwrap();
        let j = &enumerate_acs(fs)[k];
        let a = curvature_report(&g, j).unwrap();
        let b = curvature_report(&g, &j.conjugate()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn degree_minus_one_homogeneity((i, values, k) in case(), c in positive_q()) {
        let fs = &spaces()[i];
        let g = make_metric(fs.clone(), values).unwrap();
        let j = &enumerate_acs(fs)[k];
        let a = curvature_report(&g, j).unwrap();
        let b = curvature_report(&g.scaled(&c), j).unwrap();
        for (x, y) in [(&a.s, &b.s), (&a.s1, &b.s1), (&a.s_j, &b.s_j), (&a.defect, &b.defect)] {
            prop_assert_eq!(x, &(y * &c));
        }
        prop_assert_eq!(a.gh_class, b.gh_class);
    }

    #[test]
    fn s2_symmetric_about_one((i, values, k) in case(), t in -20i64..20) {
        let fs = &spaces()[i];
        let g = make_metric(fs.clone(), values).unwrap();
        let r = curvature_report(&g, &enumerate_acs(fs)[k]).unwrap();
        let t = Q::new(t.into(), 3.into());
        prop_assert_eq!(r.s2.at(&t), r.s2.at(&(Q::from_integer(2.into()) - &t)));
    }

    #[test]
    fn defect_and_hermitian_scalar((i, values, k) in case()) {
        let fs = &spaces()[i];
        let g = make_metric(fs.clone(), values).unwrap();
        let j = &enumerate_acs(fs)[k];
        let r = curvature_report(&g, j).unwrap();
        prop_assert_eq!(&r.defect, &(&r.s1 * Q::from_integer(2.into()) - &r.s));
        let zero_three = fs.zero_sum_triples().iter().any(|t| classify_triple(t, j) == TripleType::ZeroThree);
        if !zero_three {
            prop_assert_eq!(&r.s_j, &r.s);
        }
    }

    #[test]
    fn symbolic_agrees_with_numeric((i, values, k) in case()) {
        let fs = &spaces()[i];
        let j = &enumerate_acs(fs)[k];
        let names: Vec<String> = (0..values.len()).map(|n| format!("l{n}")).collect();
        let g = make_symbolic_metric(fs.clone(), names.iter().map(|n| Poly::var(n)).collect()).unwrap();
        let point: BTreeMap<String, Q> = names.iter().cloned().zip(values.iter().cloned()).collect();
        let sym = curvature_report(&g, j).unwrap();
        let num = curvature_report(&make_metric(fs.clone(), values).unwrap(), j).unwrap();
        let ev = |r: &RatFunc| r.eval(&point).unwrap();
        prop_assert_eq!(ev(&sym.s), num.s);
        prop_assert_eq!(ev(&sym.s1), num.s1);
        prop_assert_eq!(ev(&sym.defect), num.defect);
        prop_assert_eq!(ev(&sym.norms.n0_sq), num.norms.n0_sq);
    }
}

#[test]
fn triple_classification_partitions() {
    for fs in spaces() {
        for j in enumerate_acs(&fs) {
            let (mut a, mut b) = (0, 0);
            for t in fs.zero_sum_triples() {
                match classify_triple(t, &j) {
                    TripleType::ZeroThree => a += 1,
                    TripleType::OneTwo => b += 1,
                }
            }
            assert_eq!(a + b, fs.zero_sum_triples().len());
        }
    }
}

#[test]
fn integrable_exactly_when_no_w1_w2_part() {
    for fs in spaces() {
        // a generic metric: distinct, unrelated entries
        let values: Vec<Q> = (0..fs.summand_count()).map(|i| Q::new((3 + 2 * i as i64 * i as i64).into(), 5.into())).collect();
        let g = make_metric(fs.clone(), values).unwrap();
        for j in enumerate_acs(&fs) {
            let c = curvature_report(&g, &j).unwrap().gh_class;
            assert_eq!(j.is_integrable(), !c.w1 && !c.w2, "{:?} {}", fs.name(), j);
        }
    }
}

#[test]
fn scalar_trait_is_consistent() {
    let a = Q::new(3.into(), 7.into());
    assert_eq!(Scalar::mul(&a, &Scalar::div(&Q::from_integer(1.into()), &a)), Q::from_integer(1.into()));
}
