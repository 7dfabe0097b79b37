//! Reproduction suites: each target recomputes a published result from
//! scratch and compares it exactly (or within the stated tolerance).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curvature::{curvature_report, riemannian_scalar};
use crate::error::{Error, Result};
use crate::exact::{q, qi, to_f64, Q};
use crate::flagspace::{builtin_space, FlagSpace, BUILTIN_SPACES};
use crate::hermitian::{
    classify_triple, enumerate_acs, gray_hervella, make_acs, make_metric, make_symbolic_metric, tensor_norms,
    AlmostComplexStructure, NumericMetric, SymbolicMetric, TripleType,
};
use crate::parse::{parse_poly, parse_poly_list};
use crate::ratfunc::RatFunc;
use crate::rootsys::{build_root_system, RootSystemSpec};
use crate::scalar::Scalar;
use crate::solver::{solve_klsc, Bound, Branch, ExactRoot, KlscSolution, SolutionKind};
use crate::surd::Surd;

pub const TARGETS: [&str; 6] = ["su3", "cp3", "g2-u2", "su4-table", "g2-table", "identities"];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproductionReport {
    pub target: String,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl ReproductionReport {
    fn new(target: &str) -> Self {
        ReproductionReport { target: target.to_string(), checks: Vec::new(), overall: true }
    }

    fn check(&mut self, name: impl Into<String>, expected: impl ToString, computed: impl ToString, pass: bool) {
        self.overall &= pass;
        self.checks.push(Check { name: name.into(), expected: expected.to_string(), computed: computed.to_string(), pass });
    }

    fn eq<T: PartialEq + ToString>(&mut self, name: impl Into<String>, expected: T, computed: T) {
        let pass = expected == computed;
        self.check(name, expected.to_string(), computed.to_string(), pass);
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("[{}] {}\n", if c.pass { "pass" } else { "FAIL" }, c.name));
            if !c.pass {
                out.push_str(&format!("       expected {}\n       computed {}\n", c.expected, c.computed));
            }
        }
        let n = self.checks.iter().filter(|c| c.pass).count();
        out.push_str(&format!("{}: {} ({n}/{} checks)\n", self.target, if self.overall { "pass" } else { "FAIL" }, self.checks.len()));
        out
    }
}

pub fn run(target: &str) -> Result<ReproductionReport> {
    match target {
        "su3" => su3(),
        "cp3" => two_summand("cp3"),
        "g2-u2" => two_summand("g2-u2"),
        "su4-table" => su4_table(),
        "g2-table" => g2_table(),
        "identities" => identities(100),
        other => Err(Error::Parse(format!("unknown target {other:?} (expected one of {})", TARGETS.join(", ")))),
    }
}

pub(crate) fn space(name: &str) -> Arc<FlagSpace> {
    Arc::new(builtin_space(name).expect("built-in space"))
}

pub(crate) fn family(name: &str, entries: &str) -> SymbolicMetric {
    make_symbolic_metric(space(name), parse_poly_list(entries).expect("family syntax")).expect("valid family")
}

pub(crate) fn rf(num: &str, den: &str) -> RatFunc {
    RatFunc::from_poly(parse_poly(num).expect("expression")).div(&RatFunc::from_poly(parse_poly(den).expect("expression")))
}

fn acs_of(m: &SymbolicMetric, signs: &[i32]) -> AlmostComplexStructure {
    make_acs(m.space().clone(), signs).expect("valid signs")
}

fn at(m: &SymbolicMetric, values: &[(&str, i64)]) -> NumericMetric {
    let point: BTreeMap<String, Q> = values.iter().map(|(k, v)| (k.to_string(), qi(*v))).collect();
    m.at(&point).expect("positive point")
}

fn surd(a: Q, b: Q, d: i64) -> Surd {
    Surd::new(a, b, BigInt::from(d))
}

fn branch_matches(b: &Branch, rational: &RatFunc, surd_coef: &RatFunc, d: i64, radicand: &str) -> bool {
    b.rational_part() == *rational
        && b.surd_part() == *surd_coef
        && b.d == BigInt::from(d)
        && b.radicand == parse_poly(radicand).expect("expression")
        && b.exact_residual_zero
}

/// A Kähler line recovered as a double root of a nonnegative defect.
fn double_root_check(r: &mut ReproductionReport, name: &str, sol: &KlscSolution, expected: &RatFunc) {
    let ok = sol.nonnegative_square
        && sol.branches.len() == 1
        && sol.branches[0].multiplicity == 2
        && sol.branches[0].rational_part() == *expected
        && sol.branches[0].exact_residual_zero;
    r.check(
        name,
        format!("{} = {expected} (double root, defect ≥ 0)", sol.var),
        sol.branches.iter().map(|b| format!("{} (multiplicity {})", b.expression(), b.multiplicity)).collect::<Vec<_>>().join("; "),
        ok,
    );
}

fn su3() -> Result<ReproductionReport> {
    let mut r = ReproductionReport::new("su3");
    let m = family("su3-full", "x,y,z");
    let j1 = acs_of(&m, &[1, 1, 1]);
    let j2 = acs_of(&m, &[1, 1, -1]);
    r.eq("s", rf("-(x^2+y^2-6*y*z+z^2-6*x*(y+z))", "6*x*y*z"), riemannian_scalar(&m));

    let n2 = tensor_norms(&m, &j2)?;
    r.eq("J2 |dF-|^2", rf("(x+y+z)^2", "3*x*y*z"), n2.df_minus_sq.clone());
    r.eq("J2 |N0|^2", rf("32*(x^2+y^2-y*z+z^2-x*(y+z))", "9*x*y*z"), n2.n0_sq.clone());
    r.eq("J2 |DF|^2", rf("3*x^2+3*y^2-2*y*z+3*z^2-2*x*(y+z)", "3*x*y*z"), n2.big_df_sq.clone());
    r.eq("J2 |dF+|^2", RatFunc::zero(), n2.df_plus_sq.clone());
    let n1 = tensor_norms(&m, &j1)?;
    r.eq("J1 |dF+|^2", rf("(x+y-z)^2", "3*x*y*z"), n1.df_plus_sq.clone());

    let c2 = curvature_report(&m, &j2)?;
    r.eq("J2 s1", RatFunc::zero(), c2.s1.clone());
    let c1 = curvature_report(&m, &j1)?;
    r.eq("J1 defect", rf("(x+y-z)^2", "6*x*y*z"), c1.defect.clone());
    r.eq("J2 class", "W1⊕W2".to_string(), c2.gh_class.label());
    r.eq("J1 class", "W3".to_string(), c1.gh_class.label());
    r.eq("J2 class at x=y=z", "W1".to_string(), gray_hervella(&at(&m, &[("x", 1), ("y", 1), ("z", 1)]), &j2)?.label());
    r.eq("J1 (1,1,2) class", "Kähler".to_string(), gray_hervella(&at(&m, &[("x", 1), ("y", 1), ("z", 2)]), &j1)?.label());

    let sol = solve_klsc(&m, &j2, "z", 1e-10)?;
    let minus = sol.branches.iter().find(|b| b.sign < 0);
    let plus = sol.branches.iter().find(|b| b.sign > 0);
    let centre = rf("3*x+3*y", "1");
    let ok_minus = minus.is_some_and(|b| branch_matches(b, &centre, &rf("-2", "1"), 2, "x^2+3*x*y+y^2"));
    let ok_plus = plus.is_some_and(|b| branch_matches(b, &centre, &rf("2", "1"), 2, "x^2+3*x*y+y^2"));
    r.check(
        "J2 Klsc branches",
        "z = 3(x+y) ± 2√2·√(x²+3xy+y²)",
        sol.branches.iter().map(|b| b.expression()).collect::<Vec<_>>().join("; "),
        ok_minus && ok_plus,
    );
    let dom_expected = vec![
        (Bound::Zero, Bound::Exact(surd(qi(3), qi(-2), 2))),
        (Bound::Exact(surd(qi(3), qi(2), 2)), Bound::Infinity),
    ];
    r.check(
        "J2 minus-branch domain",
        "y < (3 - 2√2)x or y > (3 + 2√2)x",
        minus.map(|b| b.domain.render()).unwrap_or_default(),
        minus.is_some_and(|b| b.domain.intervals == dom_expected && b.domain.normalized.as_deref() == Some("x")),
    );
    r.check(
        "J2 plus-branch domain",
        "always",
        plus.map(|b| b.domain.render()).unwrap_or_default(),
        plus.is_some_and(|b| b.domain.is_everything()),
    );
    let sol = solve_klsc(&m, &j1, "z", 1e-10)?;
    double_root_check(&mut r, "J1 Kähler line", &sol, &rf("x+y", "1"));
    nearly_kahler_check(&mut r, &m, &j2, &[("x", 1), ("y", 1), ("z", 1)])?;
    Ok(r)
}

fn nearly_kahler_check(r: &mut ReproductionReport, m: &SymbolicMetric, j: &AlmostComplexStructure, point: &[(&str, i64)]) -> Result<()> {
    let rep = curvature_report(&at(m, point), j)?;
    r.check(
        "nearly-Kähler point: N0 = 0, class W1, defect < 0",
        "W1, defect < 0",
        format!("{}, defect = {}", rep.gh_class.label(), rep.defect),
        rep.norms.n0_sq == qi(0) && rep.gh_class.label() == "W1" && rep.defect < qi(0),
    );
    Ok(())
}

fn two_summand(name: &str) -> Result<ReproductionReport> {
    let mut r = ReproductionReport::new(name);
    let m = family(if name == "cp3" { "cp3" } else { "g2-u2" }, "x,y");
    let expected_s = if name == "cp3" {
        rf("12*y+4*x", "6*x*y").sub(&rf("y", "6*x^2"))
    } else {
        rf("-y", "4*x^2").add(&rf("4", "x")).add(&rf("1", "2*y"))
    };
    r.eq("s", expected_s, riemannian_scalar(&m));
    let j1 = acs_of(&m, &[1, 1]);
    let j2 = acs_of(&m, &[1, -1]);
    r.eq("J1 class", "W3".to_string(), gray_hervella(&m, &j1)?.label());
    r.eq("J2 class", "W1⊕W2".to_string(), gray_hervella(&m, &j2)?.label());
    r.eq("J1 class at y=2x", "Kähler".to_string(), gray_hervella(&at(&m, &[("x", 1), ("y", 2)]), &j1)?.label());

    let sol = solve_klsc(&m, &j2, "y", 1e-10)?;
    let valid: Vec<&Branch> = sol.valid_branches().collect();
    let ok = valid.len() == 1
        && branch_matches(valid[0], &rf("6*x", "1"), &rf("2*x", "1"), 10, "1")
        && valid[0].domain.is_everything();
    r.check(
        "J2 Klsc line",
        "y = (6 + 2√10)x, all x > 0",
        valid.iter().map(|b| format!("{} ({})", b.expression(), b.domain.render())).collect::<Vec<_>>().join("; "),
        ok,
    );
    let excluded = sol.branches.iter().filter(|b| b.domain.is_empty()).count();
    r.eq("J2 minus branch excluded", 1usize, excluded);
    let sol = solve_klsc(&m, &j1, "y", 1e-10)?;
    double_root_check(&mut r, "J1 Kähler line", &sol, &rf("2*x", "1"));
    nearly_kahler_check(&mut r, &m, &j2, &[("x", 1), ("y", 1)])?;
    Ok(r)
}

const SU4_FAMILY: &str = "x^2,x^2,1,x^2,1,1";
const G2_FAMILY: &str = "1,1,x^2,1,x^2,1";

fn root_summary(sol: &KlscSolution) -> String {
    if sol.roots.is_empty() {
        return format!("{:?} {}", sol.kind, sol.certificate.as_ref().map(|c| c.to_string()).unwrap_or_default());
    }
    sol.roots
        .iter()
        .map(|r| format!("{:.12}{}", r.value_f64(), r.exact.as_ref().map(|e| format!(" = {e}")).unwrap_or_default()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn roots_match(sol: &KlscSolution, expected: &[ExactRoot], tol: f64) -> bool {
    sol.kind == SolutionKind::IsolatedRoots
        && sol.roots.len() == expected.len()
        && sol.roots.iter().zip(expected).all(|(r, e)| {
            r.exact.as_ref() == Some(e)
                && (r.value_f64() - e.to_f64()).abs() <= tol
                && to_f64(&r.width()) <= tol
                && r.residual <= r.residual_bound
        })
}

fn su4_table() -> Result<ReproductionReport> {
    let mut r = ReproductionReport::new("su4-table");
    let m = family("su4-full", SU4_FAMILY);
    r.eq("s", rf("3*(-x^4+8*x^2+5)", "8*x^2"), riemannian_scalar(&m));
    let rows: [(&str, [i32; 6], &str, &str, Vec<ExactRoot>); 4] = [
        ("J1", [1, 1, 1, 1, 1, 1], "W3", "W3", vec![]),
        ("J2", [-1, 1, 1, -1, 1, 1], "W1⊕W3", "W1⊕W3", vec![ExactRoot { value: surd(qi(0), qi(1), 5), sqrt_of: true }]),
        (
            "J3",
            [1, 1, 1, -1, 1, -1],
            "W1⊕W2⊕W3",
            "W1⊕W3",
            vec![
                ExactRoot { value: surd(q(8, 3), q(-1, 3), 61), sqrt_of: true },
                ExactRoot { value: surd(q(8, 3), q(1, 3), 61), sqrt_of: true },
            ],
        ),
        ("J4", [1, 1, -1, 1, 1, 1], "W1⊕W2⊕W3", "W1⊕W3", vec![ExactRoot { value: surd(qi(4), q(1, 3), 165), sqrt_of: true }]),
    ];
    for (label, signs, generic, at_one, expected) in rows {
        let j = acs_of(&m, &signs);
        r.eq(format!("{label} class (x ≠ 1)"), generic.to_string(), gray_hervella(&m, &j)?.label());
        let one = curvature_report(&at(&m, &[("x", 1)]), &j)?;
        r.eq(format!("{label} class at x = 1"), at_one.to_string(), one.gh_class.label());
        let sol = solve_klsc(&m, &j, "x", 1e-10)?;
        if expected.is_empty() {
            r.check(
                format!("{label} no positive root"),
                "NoSolution with certificate",
                root_summary(&sol),
                sol.kind == SolutionKind::NoSolution && sol.certificate.is_some(),
            );
        } else {
            let want: Vec<String> = expected.iter().map(|e| format!("{:.12} = {e}", e.to_f64())).collect();
            r.check(format!("{label} roots"), want.join(", "), root_summary(&sol), roots_match(&sol, &expected, 1e-10));
            if at_one != generic {
                r.check(format!("{label} no solution at x = 1"), "defect(1) ≠ 0", one.defect.to_string(), one.defect != qi(0));
            }
        }
    }
    Ok(r)
}

/// Set-level summary of the 32 structures on `G₂/T²` along the family.
pub struct G2Census {
    pub w3_without_root: usize,
    pub mixed_with_root: usize,
    pub anomalies: Vec<String>,
}

pub fn g2_census(tol: f64) -> Result<G2Census> {
    let m = family("g2-full", G2_FAMILY);
    let mut c = G2Census { w3_without_root: 0, mixed_with_root: 0, anomalies: Vec::new() };
    let point = at(&m, &[("x", 1)]);
    for j in enumerate_acs(m.space()) {
        let generic = gray_hervella(&m, &j)?.label();
        let one = curvature_report(&point, &j)?;
        let sol = solve_klsc(&m, &j, "x", tol)?;
        let certified = sol.roots.iter().any(|r| {
            !(r.lo <= qi(1) && qi(1) <= r.hi) && r.residual <= r.residual_bound && to_f64(&r.width()) <= tol
        });
        if generic == "W3" && one.gh_class.label() == "W3" && sol.kind == SolutionKind::NoSolution {
            c.w3_without_root += 1;
        } else if generic == "W1⊕W2⊕W3" && one.gh_class.label() == "W1⊕W3" && one.defect != qi(0) && certified {
            c.mixed_with_root += 1;
        } else {
            c.anomalies.push(format!("{j}: {generic}, at x=1 {}, {:?}", one.gh_class.label(), sol.kind));
        }
    }
    Ok(c)
}

fn g2_table() -> Result<ReproductionReport> {
    let mut r = ReproductionReport::new("g2-table");
    let m = family("g2-full", G2_FAMILY);
    r.eq("s", rf("2+12*x^2-2*x^4", "3*x^2"), riemannian_scalar(&m));
    r.eq("structures up to conjugation", 32usize, enumerate_acs(m.space()).len());
    let c = g2_census(1e-10)?;
    r.eq("W3 for all x, no positive root", 6usize, c.w3_without_root);
    r.eq("W1⊕W2⊕W3 (x ≠ 1), W1⊕W3 at x = 1, certified root x ≠ 1", 26usize, c.mixed_with_root);
    r.check("no other behaviour", "none", c.anomalies.join("; "), c.anomalies.is_empty());
    Ok(r)
}

/// Random positive rational with small numerator and denominator.
pub fn random_rational(rng: &mut impl Rng) -> Q {
    q(rng.gen_range(1..=30), rng.gen_range(1..=12))
}

fn identities(samples: usize) -> Result<ReproductionReport> {
    let mut r = ReproductionReport::new("identities");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for spec in [RootSystemSpec::a(2), RootSystemSpec::a(3), RootSystemSpec::c(2), RootSystemSpec::g2()] {
        let rs = build_root_system(spec)?;
        let total: Q = rs.all_roots().iter().map(|a| rs.killing_norm_sq(a).expect("root")).sum();
        r.eq(format!("Killing sum rule on {spec}"), qi(spec.rank as i64), total);
    }
    for name in BUILTIN_SPACES {
        let fs = space(name);
        let structures = enumerate_acs(&fs);
        let mut failures: Vec<String> = Vec::new();
        for _ in 0..samples {
            let values: Vec<Q> = (0..fs.summand_count()).map(|_| random_rational(&mut rng)).collect();
            let g = make_metric(fs.clone(), values)?;
            let g2 = g.scaled(&qi(2));
            let t = random_rational(&mut rng);
            for j in &structures {
                failures.extend(property_failures(&g, &g2, j, &t)?);
            }
        }
        failures.sort();
        failures.dedup();
        r.check(
            format!("{name}: identities on {samples} random metrics × {} structures", structures.len()),
            "all hold",
            if failures.is_empty() { "all hold".into() } else { failures.join("; ") },
            failures.is_empty(),
        );
    }
    Ok(r)
}

/// Every algebraic property expected of one `(g, J)`, as a list of violated names.
pub fn property_failures(g: &NumericMetric, g2: &NumericMetric, j: &AlmostComplexStructure, t: &Q) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let rep = curvature_report(g, j)?;
    let n = &rep.norms;
    if n.big_df_sq != n.identity_rhs() {
        bad.push("DF identity".into());
    }
    let conj = curvature_report(g, &j.conjugate())?;
    if conj.norms != rep.norms || conj.s1 != rep.s1 || conj.s_j != rep.s_j || conj.s2 != rep.s2 || conj.gh_class != rep.gh_class {
        bad.push("conjugation invariance".into());
    }
    let scaled = curvature_report(g2, j)?;
    let half = q(1, 2);
    let homogeneous = [
        (&scaled.s, &rep.s),
        (&scaled.s1, &rep.s1),
        (&scaled.s_j, &rep.s_j),
        (&scaled.defect, &rep.defect),
        (&scaled.norms.n0_sq, &rep.norms.n0_sq),
        (&scaled.norms.df_minus_sq, &rep.norms.df_minus_sq),
        (&scaled.norms.df_plus_sq, &rep.norms.df_plus_sq),
        (&scaled.norms.big_df_sq, &rep.norms.big_df_sq),
    ]
    .iter()
    .all(|(a, b)| **a == *b * &half);
    if !homogeneous {
        bad.push("degree -1 homogeneity".into());
    }
    if rep.s2.at(t) != rep.s2.at(&(qi(2) - t)) {
        bad.push("s2(t) = s2(2-t)".into());
    }
    if rep.s1.scale(&qi(2)).sub(&rep.s) != rep.defect {
        bad.push("defect = 2 s1 - s".into());
    }
    let triples = g.space().zero_sum_triples();
    let zero_three = triples.iter().filter(|tr| classify_triple(tr, j) == TripleType::ZeroThree).count();
    let one_two = triples.iter().filter(|tr| classify_triple(tr, j) == TripleType::OneTwo).count();
    if zero_three + one_two != triples.len() {
        bad.push("triple partition".into());
    }
    if zero_three == 0 && (rep.s_j != rep.s || n.n0_sq != qi(0) || n.df_minus_sq != qi(0)) {
        bad.push("integrable: sJ = s, N0 = dF- = 0".into());
    }
    if one_two == 0 && n.df_plus_sq != qi(0) {
        bad.push("no (1,2)-triples: dF+ = 0".into());
    }
    Ok(bad)
}
