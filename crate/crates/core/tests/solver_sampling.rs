//! Closed-form branches checked pointwise: at random positive parameters
//! the branch value is positive exactly where its domain says so, and it
//! zeroes the defect numerator in exact surd arithmetic.

use std::collections::BTreeMap;
use std::sync::Arc;

use flagherm::flagspace::builtin_space;
use flagherm::hermitian::{make_acs, make_symbolic_metric};
use flagherm::parse::parse_poly_list;
use flagherm::solver::{solve_klsc, KlscSolution, SolutionKind};
use flagherm::surd::{eval_poly, Surd};
use flagherm::Q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn solve(space: &str, acs: &[i32], family: &str, var: &str) -> KlscSolution {
    let fs = Arc::new(builtin_space(space).unwrap());
    let g = make_symbolic_metric(fs.clone(), parse_poly_list(family).unwrap()).unwrap();
    solve_klsc(&g, &make_acs(fs, acs).unwrap(), var, 1e-10).unwrap()
}

fn sample(sol: &KlscSolution, samples: usize, seed: u64) {
    assert_eq!(sol.kind, SolutionKind::ClosedFormBranches);
    let others: Vec<&String> = sol.params.iter().filter(|p| **p != sol.var).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..samples {
        let point: BTreeMap<String, Q> = others
            .iter()
            .map(|p| ((*p).clone(), Q::new(rng.gen_range(1i64..400).into(), rng.gen_range(1i64..40).into())))
            .collect();
        for b in &sol.branches {
            let value = b.eval_at(&point).expect("radicand stays nonnegative on the positive orthant");
            let positive = value.is_positive();
            assert_eq!(b.domain.contains(&point), Some(positive), "{} at {point:?}", b.expression());
            let mut at: BTreeMap<String, Surd> = point.iter().map(|(k, v)| (k.clone(), Surd::rational(v.clone()))).collect();
            let poly = if b.substituted {
                // numerator in u = var²
                at.insert("u".into(), value);
                let deflated = sol.numerator.to_string().replace(&format!("{}^", sol.var), "u^");
                flagherm::parse::parse_poly(&deflated).unwrap()
            } else {
                at.insert(sol.var.clone(), value);
                sol.numerator.clone()
            };
            assert!(eval_poly(&poly, &at).unwrap().is_zero(), "{} does not zero the numerator", b.expression());
            hits += positive as usize;
        }
    }
    assert!(hits > 0);
}

#[test]
fn su3_nearly_kahler_family() {
    sample(&solve("su3-full", &[1, 1, -1], "x,y,z", "z"), 100, 1);
}

#[test]
fn su3_integrable_family() {
    sample(&solve("su3-full", &[1, 1, 1], "x,y,z", "z"), 100, 2);
}

#[test]
fn two_summand_families() {
    sample(&solve("cp3", &[1, -1], "x,y", "y"), 100, 3);
    sample(&solve("g2-u2", &[1, -1], "x,y", "y"), 100, 4);
    sample(&solve("cp3", &[1, 1], "x,y", "y"), 100, 5);
}
