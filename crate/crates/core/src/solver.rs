//! Solving `2s₁ − s = 0` over the positive parameter domain of a metric family.
//!
//! The defect is a rational function whose denominator is a product of metric
//! entries, hence positive; everything therefore happens on its numerator.
//! Numerators of degree ≤ 2 in the solve variable (possibly after `u = x²`)
//! get closed-form surd branches together with the region of the remaining
//! parameters where each branch is positive. Univariate numerators get every
//! positive root isolated by Sturm sequences and refined by bisection; exact
//! surd forms are attached whenever the polynomial allows them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::curvature::curvature_report;
use crate::error::{Error, Result};
use crate::exact::{abs, from_f64, q, qi, render_exact, sqrt_rational, to_f64, Q};
use crate::hermitian::{AlmostComplexStructure, SymbolicMetric};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::surd::{eval_poly, Surd};
use crate::upoly::{sign, UPoly};

/// Numerator of the defect after clearing its positive denominator and
/// removing the monomial and rational content (both positive on the domain).
pub fn defect_numerator(metric: &SymbolicMetric, acs: &AlmostComplexStructure) -> Result<Poly> {
    let report = curvature_report(metric, acs)?;
    let defect: &RatFunc = &report.defect;
    if let Some(b) = defect.denominator_factors().keys().find(|b| !b.all_coefficients_positive()) {
        return Err(Error::UnsupportedFamily(format!("denominator factor {b} is not manifestly positive")));
    }
    Ok(strip_positive_content(defect.numerator()))
}

fn strip_positive_content(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    p.div_monomial(&p.monomial_content()).expect("content divides").primitive()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolutionKind {
    NoSolution,
    ClosedFormBranches,
    IsolatedRoots,
    /// The defect vanishes identically on the family.
    Everywhere,
}

/// Why the numerator has no zero on the positive domain.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// Every coefficient has this sign, so the numerator cannot vanish for
    /// positive parameters.
    CoefficientSigns { sign: i32 },
    /// Univariate with no sign variation in the coefficient sequence.
    DescartesZero,
    /// A Sturm sequence counts no root in `(0, bound]`, and `bound` exceeds
    /// every root's modulus.
    SturmCount { bound: Q },
    /// Every closed-form branch is nonpositive or nonreal for all admissible
    /// values of the other parameters.
    BranchesNonpositive,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::CoefficientSigns { sign } => {
                write!(f, "all coefficients {}", if *sign > 0 { "positive" } else { "negative" })
            }
            Certificate::DescartesZero => write!(f, "no sign variation in the coefficients"),
            Certificate::SturmCount { bound } => write!(f, "Sturm count 0 on (0, {}]", render_exact(bound)),
            Certificate::BranchesNonpositive => write!(f, "every branch is nonpositive on the domain"),
        }
    }
}

/// An exact positive root: `var = value`, or `var = √value` after `u = var²`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactRoot {
    pub value: Surd,
    pub sqrt_of: bool,
}

impl ExactRoot {
    pub fn to_f64(&self) -> f64 {
        let v = self.value.to_f64();
        if self.sqrt_of {
            v.sqrt()
        } else {
            v
        }
    }

    /// Exact test `lo ≤ root ≤ hi` for `0 ≤ lo ≤ hi`.
    pub fn within(&self, lo: &Q, hi: &Q) -> bool {
        let (lo, hi) = if self.sqrt_of { (lo * lo, hi * hi) } else { (lo.clone(), hi.clone()) };
        (&self.value - &Surd::rational(lo)).signum() >= 0 && (&self.value - &Surd::rational(hi)).signum() <= 0
    }
}

impl fmt::Display for ExactRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt_of {
            write!(f, "sqrt({})", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// A positive root isolated in `[lo, hi]`, where the square-free factor
/// carrying it changes sign (or `lo = hi` is an exact rational root).
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedRoot {
    pub lo: Q,
    pub hi: Q,
    pub midpoint: Q,
    pub multiplicity: u32,
    /// `|p(midpoint)|`.
    pub residual: Q,
    /// Bound on `|p(midpoint)|` implied by a root in the interval: the Taylor
    /// expansion at the midpoint gives `|p(m)| ≤ Σ_{k≥1} |p⁽ᵏ⁾(m)/k!| (w/2)ᵏ`.
    pub residual_bound: Q,
    pub exact: Option<ExactRoot>,
}

impl CertifiedRoot {
    /// Even multiplicity: the polynomial touches zero without changing sign.
    pub fn even_multiplicity(&self) -> bool {
        self.multiplicity.is_multiple_of(2)
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn value_f64(&self) -> f64 {
        to_f64(&self.midpoint)
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

struct Sturm(Vec<UPoly>);

impl Sturm {
    fn new(p: &UPoly) -> Self {
        Sturm(p.sturm_chain())
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &Q, b: &Q) -> usize {
        let va = variations(self.0.iter().map(|p| sign(&p.eval(a))));
        let vb = variations(self.0.iter().map(|p| sign(&p.eval(b))));
        va.saturating_sub(vb)
    }
}

/// Positive roots of a square-free polynomial, as disjoint intervals `(lo, hi]`
/// of width at most `tol` (or `lo = hi` for exact hits).
fn isolate_square_free(f: &UPoly, tol: &Q) -> Vec<(Q, Q)> {
    if f.degree() == 0 {
        return Vec::new();
    }
    let chain = Sturm::new(f);
    let mut out = Vec::new();
    let mut stack = vec![(Q::zero(), f.cauchy_bound())];
    let two = qi(2);
    while let Some((lo, hi)) = stack.pop() {
        match chain.count(&lo, &hi) {
            0 => {}
            1 => {
                let (mut lo, mut hi) = (lo, hi);
                while &hi - &lo > *tol {
                    let mid = (&lo + &hi) / &two;
                    if f.eval(&mid).is_zero() {
                        lo = mid.clone();
                        hi = mid;
                        break;
                    }
                    if chain.count(&lo, &mid) == 1 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                if f.eval(&hi).is_zero() {
                    lo = hi.clone();
                }
                out.push((lo, hi));
            }
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort();
    out
}

fn checked_tolerance(tol: f64) -> Result<Q> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance);
    }
    from_f64(tol).ok_or(Error::InvalidTolerance)
}

/// Every positive real root of `p`, isolated and refined to width ≤ `tol`.
pub fn isolate_positive_roots(p: &UPoly, tol: f64) -> Result<Vec<CertifiedRoot>> {
    let tol = checked_tolerance(tol)?;
    isolate_with(p, &tol)
}

fn isolate_with(p: &UPoly, tol: &Q) -> Result<Vec<CertifiedRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    for (factor, mult) in p.square_free_decomposition() {
        for (lo, hi) in isolate_square_free(&factor, tol) {
            let midpoint = (&lo + &hi) / qi(2);
            let half = (&hi - &lo) / qi(2);
            let taylor = p.taylor_at(&midpoint);
            let mut bound = Q::zero();
            let mut h = Q::one();
            for t in &taylor[1..] {
                h *= &half;
                bound += abs(t) * &h;
            }
            roots.push(CertifiedRoot {
                residual: abs(&taylor[0]),
                residual_bound: bound,
                lo,
                hi,
                midpoint,
                multiplicity: mult,
                exact: None,
            });
        }
    }
    roots.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(roots)
}

/// Roots of `a u² + b u + c` (or lower degree) in `Q(√d)`.
fn quadratic_roots(p: &UPoly) -> Vec<Surd> {
    let c = p.coeffs();
    match p.degree() {
        1 => vec![Surd::rational(-&c[0] / &c[1])],
        2 => {
            let (a, b, c) = (&c[2], &c[1], &c[0]);
            let disc = b * b - qi(4) * a * c;
            if disc.is_negative() {
                return Vec::new();
            }
            let two_a = qi(2) * a;
            let centre = Surd::rational(-b / &two_a);
            let (k, d) = sqrt_rational(&disc);
            if k.is_zero() {
                return vec![centre];
            }
            let off = Surd::new(Q::zero(), k / &two_a, d);
            let mut r = vec![&centre - &off, &centre + &off];
            r.sort();
            r
        }
        _ => Vec::new(),
    }
}

/// Positive roots of `p` in closed form, with multiplicities; `None` when a
/// square-free factor has an irrational part of degree above 2.
fn exact_positive_roots(p: &UPoly) -> Option<Vec<(Surd, u32)>> {
    let mut out = Vec::new();
    for (factor, mult) in p.square_free_decomposition() {
        let mut rest = factor.clone();
        for r in factor.rational_roots() {
            rest = rest.div_exact(&UPoly::new(vec![-r.clone(), Q::one()])).expect("rational root divides");
            if r.is_positive() {
                out.push((Surd::rational(r), mult));
            }
        }
        if rest.degree() > 2 {
            return None;
        }
        for r in quadratic_roots(&rest) {
            if r.is_positive() {
                out.push((r, mult));
            }
        }
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Normalization {
    /// Parameter fixed to 1; solutions form cones `c·λ*`, `c > 0`.
    pub param: String,
    pub degree: u32,
}

/// Endpoint of a branch-domain interval in the normalized free parameter.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    Zero,
    Infinity,
    Exact(Surd),
    /// Irrational endpoint of degree > 2, known to lie in `[lo, hi]`.
    Approx { lo: Q, hi: Q },
}

impl Bound {
    pub fn to_f64(&self) -> f64 {
        match self {
            Bound::Zero => 0.0,
            Bound::Infinity => f64::INFINITY,
            Bound::Exact(s) => s.to_f64(),
            Bound::Approx { lo, hi } => (to_f64(lo) + to_f64(hi)) / 2.0,
        }
    }

    /// Exact `self < v` (approximate bounds compare through their interval).
    fn below(&self, v: &Q) -> bool {
        match self {
            Bound::Zero => v.is_positive(),
            Bound::Infinity => false,
            Bound::Exact(s) => (&Surd::rational(v.clone()) - s).signum() > 0,
            Bound::Approx { hi, .. } => v > hi,
        }
    }

    fn above(&self, v: &Q) -> bool {
        match self {
            Bound::Zero => false,
            Bound::Infinity => true,
            Bound::Exact(s) => (s - &Surd::rational(v.clone())).signum() > 0,
            Bound::Approx { lo, .. } => v < lo,
        }
    }

    fn render(&self) -> String {
        match self {
            Bound::Zero => "0".into(),
            Bound::Infinity => "inf".into(),
            Bound::Exact(s) => s.to_string(),
            Bound::Approx { lo, hi } => format!("{:.12}", (to_f64(lo) + to_f64(hi)) / 2.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchDomain {
    pub normalized: Option<String>,
    /// The remaining free parameter, measured in units of `normalized`.
    pub param: Option<String>,
    /// Open intervals of `param / normalized` on which the branch is positive.
    pub intervals: Vec<(Bound, Bound)>,
    /// False when more than one free parameter remains; no region is claimed.
    pub resolved: bool,
}

impl BranchDomain {
    pub fn is_empty(&self) -> bool {
        self.resolved && self.intervals.is_empty()
    }

    pub fn is_everything(&self) -> bool {
        self.resolved && self.intervals == [(Bound::Zero, Bound::Infinity)]
    }

    /// Membership of a positive parameter point; `None` when unresolved.
    pub fn contains(&self, point: &BTreeMap<String, Q>) -> Option<bool> {
        if !self.resolved {
            return None;
        }
        let Some(param) = &self.param else {
            return Some(!self.intervals.is_empty());
        };
        let mut t = point.get(param)?.clone();
        if let Some(n) = &self.normalized {
            t /= point.get(n)?;
        }
        Some(self.intervals.iter().any(|(lo, hi)| lo.below(&t) && hi.above(&t)))
    }

    fn scaled(&self, b: &Bound) -> String {
        match &self.normalized {
            Some(n) => {
                let r = b.render();
                if r == "1" {
                    n.clone()
                } else if r.contains(' ') {
                    format!("({r})*{n}")
                } else {
                    format!("{r}*{n}")
                }
            }
            None => b.render(),
        }
    }

    pub fn render(&self) -> String {
        if !self.resolved {
            return "unresolved (more than one free parameter)".into();
        }
        if self.intervals.is_empty() {
            return "never".into();
        }
        let Some(t) = &self.param else {
            return "always".into();
        };
        if self.is_everything() {
            return "always".into();
        }
        self.intervals
            .iter()
            .map(|(lo, hi)| match (lo, hi) {
                (Bound::Zero, Bound::Infinity) => "always".to_string(),
                (Bound::Zero, _) => format!("{t} < {}", self.scaled(hi)),
                (_, Bound::Infinity) => format!("{t} > {}", self.scaled(lo)),
                _ => format!("{} < {t} < {}", self.scaled(lo), self.scaled(hi)),
            })
            .collect::<Vec<_>>()
            .join(" or ")
    }
}

/// `var = (N + σ·K·√(d·R)) / D` with polynomial `N, K, R, D` in the other
/// parameters (or `u = var²` when `substituted`).
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub var: String,
    pub sign: i32,
    pub numer: Poly,
    pub surd_coef: Poly,
    pub d: BigInt,
    pub radicand: Poly,
    pub denom: Poly,
    pub substituted: bool,
    pub multiplicity: u32,
    pub domain: BranchDomain,
    /// Substituting the branch into the numerator gives exactly zero.
    pub exact_residual_zero: bool,
}

impl Branch {
    pub fn has_surd(&self) -> bool {
        self.sign != 0 && !self.surd_coef.is_zero()
    }

    pub fn rational_part(&self) -> RatFunc {
        RatFunc::from_poly(self.numer.clone()).div_rf(&self.denom)
    }

    pub fn surd_part(&self) -> RatFunc {
        RatFunc::from_poly(self.surd_coef.scale(&qi(self.sign as i64))).div_rf(&self.denom)
    }

    /// Value of the branch (of `u` when substituted) at a rational point.
    pub fn eval_at(&self, point: &BTreeMap<String, Q>) -> Option<Surd> {
        let den = self.denom.eval(point)?;
        if den.is_zero() {
            return None;
        }
        let mut v = Surd::rational(self.numer.eval(point)? / &den);
        if self.has_surd() {
            let inside = Q::from_integer(self.d.clone()) * self.radicand.eval(point)?;
            if inside.is_negative() {
                return None;
            }
            let k = self.surd_coef.eval(point)? * qi(self.sign as i64) / &den;
            v = &v + &Surd::sqrt_of(&inside).scale(&k);
        }
        Some(v)
    }

    /// Value of the solve variable itself, as a float.
    pub fn var_value_f64(&self, point: &BTreeMap<String, Q>) -> Option<f64> {
        let v = self.eval_at(point)?.to_f64();
        Some(if self.substituted { v.sqrt() } else { v })
    }

    pub fn expression(&self) -> String {
        let core = {
            let a = self.rational_part();
            let mut s = if a.is_zero_rf() { String::new() } else { rf_display(&a) };
            if self.has_surd() {
                let k = self.surd_part();
                let (neg, kabs) = match k.numerator().leading() {
                    Some((_, c)) if c.is_negative() => (true, k.neg_rf()),
                    _ => (false, k),
                };
                let mut root = if self.d.is_one() { String::new() } else { format!("sqrt({})", self.d) };
                if !self.radicand.is_one_poly() {
                    if !root.is_empty() {
                        root.push('*');
                    }
                    root.push_str(&format!("sqrt({})", self.radicand));
                }
                let kt = rf_display(&kabs);
                let single = kabs
                    .denominator()
                    .constant_value()
                    .map(|d| kabs.numerator().scale(&(Q::one() / d)))
                    .filter(|p| p.len() == 1);
                let term = if root.is_empty() {
                    paren(&kt)
                } else if kt == "1" {
                    root
                } else if let Some(p) = single {
                    let (m, c) = p.terms().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
                    let mut parts = Vec::new();
                    if !c.is_one() {
                        parts.push(render_exact(&c));
                    }
                    parts.push(root);
                    if !m.is_one() {
                        parts.push(Poly::monomial(m, Q::one()).to_string());
                    }
                    parts.join("*")
                } else {
                    format!("{}*{root}", paren(&kt))
                };
                if s.is_empty() {
                    s = if neg { format!("-{term}") } else { term };
                } else {
                    s = format!("{s} {} {term}", if neg { "-" } else { "+" });
                }
            }
            if s.is_empty() {
                "0".into()
            } else {
                s
            }
        };
        if self.substituted {
            format!("{} = sqrt({core})", self.var)
        } else {
            format!("{} = {core}", self.var)
        }
    }
}

fn paren(s: &str) -> String {
    if s.contains(' ') && !(s.starts_with('(') && s.ends_with(')') && !s[1..].contains('(')) {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn rf_display(r: &RatFunc) -> String {
    let den = r.denominator();
    match den.constant_value() {
        Some(c) => r.numerator().scale(&(Q::one() / c)).to_string(),
        None => format!("{}/({})", paren(&r.numerator().to_string()), den),
    }
}

/// Small helpers on the shared algebra types that only the solver needs.
trait SolverExt {
    fn is_one_poly(&self) -> bool;
}

impl SolverExt for Poly {
    fn is_one_poly(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}

trait RatExt {
    fn div_rf(&self, p: &Poly) -> RatFunc;
    fn is_zero_rf(&self) -> bool;
    fn neg_rf(&self) -> RatFunc;
}

impl RatExt for RatFunc {
    fn div_rf(&self, p: &Poly) -> RatFunc {
        use crate::scalar::Scalar;
        self.div(&RatFunc::from_poly(p.clone()))
    }
    fn is_zero_rf(&self) -> bool {
        self.numerator().is_zero()
    }
    fn neg_rf(&self) -> RatFunc {
        use crate::scalar::Scalar;
        self.neg()
    }
}

#[derive(Clone, Debug)]
pub struct KlscSolution {
    pub kind: SolutionKind,
    pub var: String,
    pub params: Vec<String>,
    /// Defect numerator in the original parameters.
    pub numerator: Poly,
    /// `Some("u = x^2")` when the numerator was solved in `u`.
    pub substitution: Option<String>,
    pub normalization: Option<Normalization>,
    pub branches: Vec<Branch>,
    pub roots: Vec<CertifiedRoot>,
    pub certificate: Option<Certificate>,
    pub tolerance: Q,
    /// The numerator is a positive constant times a square, so the defect
    /// never changes sign (`≥ 0` everywhere).
    pub nonnegative_square: bool,
}

impl KlscSolution {
    pub fn valid_branches(&self) -> impl Iterator<Item = &Branch> {
        self.branches.iter().filter(|b| !b.domain.is_empty())
    }

    pub fn has_solution(&self) -> bool {
        !matches!(self.kind, SolutionKind::NoSolution)
    }
}

/// Replaces `var^(2k)` by `var^k` when only even powers of `var` occur.
fn deflate_even_in(p: &Poly, var: &str) -> Option<Poly> {
    let coeffs = p.coeffs_in(var);
    if coeffs.len() < 3 || coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
        return None;
    }
    let even: Vec<Poly> = coeffs.into_iter().step_by(2).collect();
    Some(Poly::from_coeffs_in(var, &even))
}

fn sign_certificate(p: &Poly) -> Option<Certificate> {
    if p.all_coefficients_positive() {
        Some(Certificate::CoefficientSigns { sign: 1 })
    } else if p.all_coefficients_negative() {
        Some(Certificate::CoefficientSigns { sign: -1 })
    } else {
        None
    }
}

fn is_nonnegative_square(p: &Poly) -> bool {
    !p.is_zero()
        && p.leading().is_some_and(|(_, c)| c.is_positive())
        && p.scale(&(Q::one() / p.leading().unwrap().1)).sqrt_exact().is_some()
}

pub fn solve_klsc(
    metric: &SymbolicMetric,
    acs: &AlmostComplexStructure,
    var: &str,
    tolerance: f64,
) -> Result<KlscSolution> {
    let tol = checked_tolerance(tolerance)?;
    if !metric.params().iter().any(|p| p == var) {
        return Err(Error::UnsupportedFamily(format!("{var} is not a parameter of the family")));
    }
    let numerator = defect_numerator(metric, acs)?;
    let mut sol = KlscSolution {
        kind: SolutionKind::NoSolution,
        var: var.to_string(),
        params: metric.params().to_vec(),
        nonnegative_square: is_nonnegative_square(&numerator),
        numerator: numerator.clone(),
        substitution: None,
        normalization: None,
        branches: Vec::new(),
        roots: Vec::new(),
        certificate: None,
        tolerance: tol.clone(),
    };
    if numerator.is_zero() {
        sol.kind = SolutionKind::Everywhere;
        return Ok(sol);
    }
    if let Some(c) = sign_certificate(&numerator) {
        sol.certificate = Some(c);
        return Ok(sol);
    }
    if numerator.degree_in(var) == 0 {
        return Err(Error::UnsupportedFamily(format!("the defect does not depend on {var}")));
    }
    let others: Vec<String> = numerator.variables().into_iter().filter(|v| v != var).collect();
    if others.is_empty() {
        solve_univariate(&mut sol, &numerator.to_upoly(var).expect("univariate"), &tol)?;
        return Ok(sol);
    }

    let homogeneous = numerator.is_homogeneous();
    if homogeneous {
        sol.normalization = Some(Normalization { param: others[0].clone(), degree: numerator.total_degree() });
    }
    let (working, substituted) = match deflate_even_in(&numerator, var) {
        Some(p) => (p, true),
        None => (numerator.clone(), false),
    };
    if working.degree_in(var) <= 2 {
        if substituted {
            sol.substitution = Some(format!("u = {var}^2"));
        }
        let ctx = DomainContext::new(&others, sol.normalization.as_ref().map(|n| n.param.clone()));
        sol.branches = closed_form_branches(&working, var, substituted, &ctx)?;
        sol.kind = if sol.branches.iter().any(|b| !b.domain.is_empty()) {
            SolutionKind::ClosedFormBranches
        } else {
            sol.certificate = Some(Certificate::BranchesNonpositive);
            SolutionKind::NoSolution
        };
        return Ok(sol);
    }
    if homogeneous && others.len() == 1 {
        let dehom = numerator.substitute_value(&others[0], &Q::one());
        solve_univariate(&mut sol, &dehom.to_upoly(var).expect("univariate"), &tol)?;
        return Ok(sol);
    }
    Err(Error::UnsupportedFamily(format!(
        "degree {} in {var} with {} free parameters",
        working.degree_in(var),
        others.len()
    )))
}

fn solve_univariate(sol: &mut KlscSolution, p: &UPoly, tol: &Q) -> Result<()> {
    if p.descartes_variations() == 0 {
        sol.certificate = Some(Certificate::DescartesZero);
        return Ok(());
    }
    let mut roots = isolate_with(p, tol)?;
    if roots.is_empty() {
        sol.certificate = Some(Certificate::SturmCount { bound: p.cauchy_bound() });
        return Ok(());
    }
    let exact: Option<Vec<ExactRoot>> = match p.deflate_even().filter(|_| p.degree() > 2) {
        Some(u) => {
            sol.substitution = Some(format!("u = {}^2", sol.var));
            exact_positive_roots(&u).map(|v| v.into_iter().map(|(value, _)| ExactRoot { value, sqrt_of: true }).collect())
        }
        None => exact_positive_roots(p).map(|v| v.into_iter().map(|(value, _)| ExactRoot { value, sqrt_of: false }).collect()),
    };
    if let Some(exact) = exact {
        for r in &mut roots {
            r.exact = exact.iter().find(|e| e.within(&r.lo, &r.hi)).cloned();
        }
    }
    sol.roots = roots;
    sol.kind = SolutionKind::IsolatedRoots;
    Ok(())
}

/// How the branch regions are parametrized: at most one free parameter after
/// fixing the normalization parameter to 1.
struct DomainContext {
    normalized: Option<String>,
    free: Vec<String>,
}

impl DomainContext {
    fn new(others: &[String], normalized: Option<String>) -> Self {
        let free = others.iter().filter(|p| Some(*p) != normalized.as_ref()).cloned().collect();
        DomainContext { normalized, free }
    }

    fn restrict(&self, p: &Poly) -> Poly {
        match &self.normalized {
            Some(n) => p.substitute_value(n, &Q::one()),
            None => p.clone(),
        }
    }

    fn point(&self, t: Option<&Q>) -> BTreeMap<String, Q> {
        let mut m = BTreeMap::new();
        if let Some(n) = &self.normalized {
            m.insert(n.clone(), Q::one());
        }
        if let (Some(p), Some(t)) = (self.free.first(), t) {
            m.insert(p.clone(), t.clone());
        }
        m
    }
}

fn closed_form_branches(working: &Poly, var: &str, substituted: bool, ctx: &DomainContext) -> Result<Vec<Branch>> {
    let mut coeffs = working.coeffs_in(var);
    let lead_negative = coeffs.last().and_then(|c| c.leading()).is_some_and(|(_, c)| c.is_negative());
    if lead_negative {
        coeffs = coeffs.into_iter().map(|c| -c).collect();
    }
    let template = |sign: i32, numer: Poly, surd_coef: Poly, d: BigInt, radicand: Poly, denom: Poly, multiplicity: u32| Branch {
        var: var.to_string(),
        sign,
        numer,
        surd_coef,
        d,
        radicand,
        denom,
        substituted,
        multiplicity,
        domain: BranchDomain { normalized: None, param: None, intervals: Vec::new(), resolved: false },
        exact_residual_zero: false,
    };
    let mut branches = Vec::new();
    if coeffs.len() == 2 {
        branches.push(template(0, -coeffs[0].clone(), Poly::zero(), BigInt::one(), Poly::one(), coeffs[1].clone(), 1));
    } else {
        let (a, b, c) = (&coeffs[2], &coeffs[1], &coeffs[0]);
        let disc = &(b * b) - &(&(a * c) * &Poly::constant(qi(4)));
        let denom = a * &Poly::constant(qi(2));
        if disc.is_zero() {
            branches.push(template(0, -b.clone(), Poly::zero(), BigInt::one(), Poly::one(), denom, 2));
        } else if !disc.all_coefficients_negative() {
            let (k, d, s, radicand) = split_sqrt(&disc);
            for sign in [-1, 1] {
                branches.push(template(sign, -b.clone(), s.scale(&k), d.clone(), radicand.clone(), denom.clone(), 1));
            }
        }
    }
    for br in &mut branches {
        br.exact_residual_zero = residual_vanishes(&coeffs, br);
        br.domain = branch_domain(br, &coeffs, ctx)?;
    }
    Ok(branches)
}

/// `Δ = k²·d·S²·R` with `S` a polynomial positive on the domain.
fn split_sqrt(disc: &Poly) -> (Q, BigInt, Poly, Poly) {
    let mono = disc.monomial_content();
    let rest = disc.div_monomial(&mono).expect("content divides");
    let content = rest.content();
    let prim = rest.primitive();
    let (mut k, mut d) = (Q::one(), BigInt::one());
    let mut s = Poly::one();
    let mut radicand = Poly::one();
    let mut sign_fix = Q::one();
    if prim.leading().is_some_and(|(_, c)| c.is_negative()) {
        sign_fix = -sign_fix;
    }
    let (ck, cd) = sqrt_rational(&content);
    k *= ck;
    d *= cd;
    match mono.sqrt() {
        Some(m) => s = s.mul_monomial(&m, &Q::one()),
        None => radicand = radicand.mul_monomial(&mono, &Q::one()),
    }
    let prim = prim.scale(&sign_fix);
    match prim.constant_value() {
        Some(c) if c.is_one() => {}
        _ => match prim.sqrt_exact().filter(|r| r.all_coefficients_positive()) {
            Some(r) => s = &s * &r,
            None => radicand = &radicand * &prim,
        },
    }
    if sign_fix.is_negative() {
        radicand = -radicand;
    }
    (k, d, s, radicand)
}

/// Horner evaluation in `Q(params)[w]/(w² − dR)` at `(N + σKw)/D`.
fn residual_vanishes(coeffs: &[Poly], br: &Branch) -> bool {
    use crate::scalar::Scalar;
    let w2 = RatFunc::from_poly(br.radicand.scale(&Q::from_integer(br.d.clone())));
    let v0 = br.rational_part();
    let v1 = if br.has_surd() { br.surd_part() } else { RatFunc::zero() };
    let mut p0 = RatFunc::zero();
    let mut p1 = RatFunc::zero();
    for c in coeffs.iter().rev() {
        let n0 = p0.mul(&v0).add(&p1.mul(&v1).mul(&w2)).add(&RatFunc::from_poly(c.clone()));
        let n1 = p0.mul(&v1).add(&p1.mul(&v0));
        p0 = n0;
        p1 = n1;
    }
    p0.is_zero() && p1.is_zero()
}

/// Positive roots of a univariate polynomial: exact where the degree allows,
/// otherwise pooled for numeric isolation.
fn split_critical(p: &UPoly, exact: &mut Vec<Surd>, pool: &mut UPoly) {
    if p.degree() == 0 {
        return;
    }
    let mut rest = p.square_free_part();
    for r in p.rational_roots() {
        rest = rest.div_exact(&UPoly::new(vec![-r.clone(), Q::one()])).expect("rational root divides");
        if r.is_positive() {
            exact.push(Surd::rational(r));
        }
    }
    if rest.degree() <= 2 {
        exact.extend(quadratic_roots(&rest).into_iter().filter(|r| r.is_positive()));
    } else {
        *pool = &*pool * &rest;
    }
}

fn minimal_polynomial(s: &Surd) -> UPoly {
    if s.is_rational() {
        UPoly::new(vec![-s.a().clone(), Q::one()])
    } else {
        let a = s.a();
        let n = a * a - s.b() * s.b() * Q::from_integer(s.d().clone());
        UPoly::new(vec![n, -(a * qi(2)), Q::one()])
    }
}

fn rational_between(lo: &Bound, hi: &Bound) -> Option<Q> {
    let l = match lo {
        Bound::Approx { hi, .. } => to_f64(hi),
        b => b.to_f64(),
    };
    let cand = match hi {
        Bound::Infinity => from_f64(if l <= 0.0 { 1.0 } else { 2.0 * l + 1.0 })?,
        _ => {
            let h = match hi {
                Bound::Approx { lo, .. } => to_f64(lo),
                b => b.to_f64(),
            };
            simplest_between(l, h)?
        }
    };
    (lo.below(&cand) && hi.above(&cand)).then_some(cand)
}

/// A short rational strictly inside `(l, h)`, found by shrinking the
/// denominator search; falls back to the binary midpoint.
fn simplest_between(l: f64, h: f64) -> Option<Q> {
    for den in 1..=64i64 {
        let n = (l * den as f64).floor() as i64 + 1;
        let v = n as f64 / den as f64;
        if v > l && v < h && (v - l) > 1e-9 * den as f64 && (h - v) > 1e-9 * den as f64 {
            return Some(q(n, den));
        }
    }
    from_f64((l + h) / 2.0)
}

fn eval_surd(p: &Poly, var: &str, t: &Surd) -> Surd {
    let mut m = BTreeMap::new();
    m.insert(var.to_string(), t.clone());
    eval_poly(p, &m).expect("restricted polynomial in one variable")
}

fn branch_domain(br: &Branch, coeffs: &[Poly], ctx: &DomainContext) -> Result<BranchDomain> {
    let mut domain = BranchDomain {
        normalized: ctx.normalized.clone(),
        param: ctx.free.first().cloned(),
        intervals: Vec::new(),
        resolved: ctx.free.len() <= 1,
    };
    if !domain.resolved {
        return Ok(domain);
    }
    let positive_at = |t: Option<&Q>| br.eval_at(&ctx.point(t)).is_some_and(|v| v.is_positive());
    let Some(t) = ctx.free.first() else {
        if positive_at(None) {
            domain.intervals.push((Bound::Zero, Bound::Infinity));
        }
        return Ok(domain);
    };

    let a = ctx.restrict(coeffs.last().unwrap());
    let c = ctx.restrict(&coeffs[0]);
    let disc = (coeffs.len() == 3 && br.has_surd()).then(|| {
        let (a, b, c) = (&coeffs[2], &coeffs[1], &coeffs[0]);
        ctx.restrict(&(&(b * b) - &(&(a * c) * &Poly::constant(qi(4)))))
    });
    let mut critical = vec![a.clone(), c.clone()];
    critical.extend(disc.clone());
    let mut exact: Vec<Surd> = Vec::new();
    let mut pool = UPoly::one();
    for p in &critical {
        let u = p.to_upoly(t).expect("one free parameter");
        if !u.is_zero() {
            split_critical(&u, &mut exact, &mut pool);
        }
    }
    exact.sort();
    exact.dedup();
    let mut pool = pool.square_free_part();
    for e in &exact {
        let m = minimal_polynomial(e);
        while let Some(qt) = pool.div_exact(&m) {
            if pool.degree() == 0 {
                break;
            }
            pool = qt;
        }
    }
    let mut bounds: Vec<Bound> = exact.iter().cloned().map(Bound::Exact).collect();
    if pool.degree() > 0 {
        let tol = q(1, 1 << 40);
        for (mut lo, mut hi) in isolate_square_free(&pool, &tol) {
            let straddles = |lo: &Q, hi: &Q| {
                exact.iter().any(|e| {
                    let b = Bound::Exact(e.clone());
                    !b.below(lo) && !b.above(hi)
                })
            };
            while straddles(&lo, &hi) {
                let mid = (&lo + &hi) / qi(2);
                if pool.eval(&mid).is_zero() {
                    lo = mid.clone();
                    hi = mid;
                    break;
                }
                if pool.count_roots(&lo, &mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if lo == hi {
                bounds.push(Bound::Exact(Surd::rational(lo)));
            } else {
                bounds.push(Bound::Approx { lo, hi });
            }
        }
    }
    bounds.sort_by(|x, y| x.to_f64().total_cmp(&y.to_f64()));

    let mut edges = vec![Bound::Zero];
    edges.extend(bounds);
    edges.push(Bound::Infinity);
    let mut gap_valid = Vec::with_capacity(edges.len() - 1);
    for w in edges.windows(2) {
        let s = rational_between(&w[0], &w[1])
            .ok_or_else(|| Error::UnsupportedFamily("critical points too close to separate".into()))?;
        gap_valid.push(positive_at(Some(&s)));
    }

    // merge neighbouring gaps through exact endpoints where the branch stays positive
    let mut i = 0;
    while i < gap_valid.len() {
        if !gap_valid[i] {
            i += 1;
            continue;
        }
        let start = edges[i].clone();
        let mut j = i;
        while j + 1 < gap_valid.len() && gap_valid[j + 1] && positive_at_exact(br, coeffs, ctx, t, &edges[j + 1]) {
            j += 1;
        }
        domain.intervals.push((start, edges[j + 1].clone()));
        i = j + 1;
    }
    Ok(domain)
}

/// Positivity of the branch at an exact critical point (where one of the
/// leading coefficient, the constant term or the discriminant vanishes).
fn positive_at_exact(br: &Branch, coeffs: &[Poly], ctx: &DomainContext, t: &str, e: &Bound) -> bool {
    let Bound::Exact(e) = e else { return false };
    let at = |p: &Poly| eval_surd(&ctx.restrict(p), t, e);
    let a = at(coeffs.last().unwrap());
    if a.is_zero() {
        return false;
    }
    let centre = at(&br.numer).div(&at(&br.denom));
    if coeffs.len() == 2 || !br.has_surd() {
        return centre.is_positive();
    }
    let (a2, b2, c2) = (&coeffs[2], &coeffs[1], &coeffs[0]);
    let disc = at(&(&(b2 * b2) - &(&(a2 * c2) * &Poly::constant(qi(4)))));
    if disc.is_zero() {
        return centre.is_positive();
    }
    if at(c2).is_zero() {
        // one root is 0; this branch is it exactly when σ·K/D opposes the centre
        let k = at(&br.surd_coef).scale(&qi(br.sign as i64)).div(&at(&br.denom));
        let zero_here = k.signum() == -centre.signum();
        return !zero_here && centre.is_positive();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagspace::builtin_space;
    use crate::hermitian::{make_acs, make_symbolic_metric};
    use std::sync::Arc;

    fn family(space: &str, entries: &[&str]) -> SymbolicMetric {
        let fs = Arc::new(builtin_space(space).unwrap());
        let polys = entries
            .iter()
            .map(|e| match e.strip_suffix("^2") {
                Some(v) => Poly::var(v).pow(2),
                None => match e.parse::<i64>() {
                    Ok(k) => Poly::constant(qi(k)),
                    Err(_) => Poly::var(e),
                },
            })
            .collect();
        make_symbolic_metric(fs, polys).unwrap()
    }

    fn acs(m: &SymbolicMetric, signs: &[i32]) -> AlmostComplexStructure {
        make_acs(m.space().clone(), signs).unwrap()
    }

    #[test]
    fn isolation_examples() {
        let r = isolate_positive_roots(&UPoly::from_ints(&[-5, 0, 1]), 1e-12).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].value_f64() - 5f64.sqrt()).abs() < 1e-11);
        assert!(r[0].residual <= r[0].residual_bound);
        assert!(isolate_positive_roots(&UPoly::from_ints(&[1, 1]), 1e-12).unwrap().is_empty());
        // (u − 1)²(u − 2)
        let p = &(&UPoly::from_ints(&[-1, 1]) * &UPoly::from_ints(&[-1, 1])) * &UPoly::from_ints(&[-2, 1]);
        let r = isolate_positive_roots(&p, 1e-10).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].even_multiplicity() && r[0].midpoint == qi(1));
        assert!(!r[1].even_multiplicity());
        assert!(matches!(isolate_positive_roots(&UPoly::zero(), 1e-3), Err(Error::ZeroPolynomial)));
        assert!(matches!(isolate_positive_roots(&p, 0.0), Err(Error::InvalidTolerance)));
    }

    #[test]
    fn su3_nearly_kahler_branches() {
        let m = family("su3-full", &["x", "y", "z"]);
        let sol = solve_klsc(&m, &acs(&m, &[1, 1, -1]), "z", 1e-10).unwrap();
        assert_eq!(sol.kind, SolutionKind::ClosedFormBranches);
        let expected: Poly = &(&(&Poly::var("x").pow(2) + &Poly::var("y").pow(2)) + &Poly::var("z").pow(2))
            - &(&(&(&Poly::var("x") * &Poly::var("y")) + &(&Poly::var("x") * &Poly::var("z"))) + &(&Poly::var("y") * &Poly::var("z")))
                .scale(&qi(6));
        assert_eq!(sol.numerator, expected);
        let minus = &sol.branches[0];
        assert_eq!(minus.expression(), "z = 3*x + 3*y - 2*sqrt(2)*sqrt(x^2 + 3*x*y + y^2)");
        assert!(minus.exact_residual_zero);
        assert_eq!(minus.domain.render(), "y < (3 - 2*sqrt(2))*x or y > (3 + 2*sqrt(2))*x");
        assert!(sol.branches[1].domain.is_everything());
    }

    #[test]
    fn cp3_line() {
        let m = family("cp3", &["x", "y"]);
        let sol = solve_klsc(&m, &acs(&m, &[1, -1]), "y", 1e-10).unwrap();
        let valid: Vec<_> = sol.valid_branches().collect();
        assert_eq!(valid.len(), 1);
        assert_eq!(valid[0].expression(), "y = 6*x + 2*sqrt(10)*x");
        assert!(valid[0].domain.is_everything());

        let sol = solve_klsc(&m, &acs(&m, &[1, 1]), "y", 1e-10).unwrap();
        assert!(sol.nonnegative_square);
        assert_eq!(sol.branches.len(), 1);
        assert_eq!(sol.branches[0].multiplicity, 2);
        assert_eq!(sol.branches[0].expression(), "y = 2*x");
    }

    #[test]
    fn su4_table_rows() {
        let m = family("su4-full", &["x^2", "x^2", "1", "x^2", "1", "1"]);
        let s = solve_klsc(&m, &acs(&m, &[-1, 1, 1, -1, 1, 1]), "x", 1e-10).unwrap();
        assert_eq!(s.kind, SolutionKind::IsolatedRoots);
        assert_eq!(s.roots.len(), 1);
        assert!((s.roots[0].value_f64() - 5f64.powf(0.25)).abs() < 1e-10);
        assert_eq!(s.roots[0].exact.as_ref().unwrap().to_string(), "sqrt(sqrt(5))");
        let s = solve_klsc(&m, &acs(&m, &[1, 1, 1, 1, 1, 1]), "x", 1e-10).unwrap();
        assert_eq!(s.kind, SolutionKind::NoSolution);
    }

    #[test]
    fn constant_defect_has_no_solution() {
        let m = family("su3-full", &["x", "x", "x"]);
        let s = solve_klsc(&m, &acs(&m, &[1, 1, -1]), "x", 1e-10).unwrap();
        assert_eq!(s.kind, SolutionKind::NoSolution);
        assert_eq!(s.certificate, Some(Certificate::CoefficientSigns { sign: -1 }));
    }

    #[test]
    fn errors() {
        let m = family("su3-full", &["x", "y", "z"]);
        let j = acs(&m, &[1, 1, -1]);
        assert!(matches!(solve_klsc(&m, &j, "z", -1.0), Err(Error::InvalidTolerance)));
        assert!(matches!(solve_klsc(&m, &j, "w", 1e-6), Err(Error::UnsupportedFamily(_))));
    }
}
