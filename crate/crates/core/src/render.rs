//! Text, JSON and CSV renderings shared by the command line and the C ABI.
//!
//! Exact rationals travel as `{"num": "...", "den": "...", "decimal": "..."}`
//! with integer strings, so arbitrarily large values survive untouched.
//! Symbolic values carry their expression and the numerator/denominator pair.

use serde_json::{json, Map, Value};

use crate::curvature::CurvatureReport;
use crate::exact::{format_sig, render_decimal, render_exact, to_f64, Q};
use crate::flagspace::{builtin_space, FlagSpace, BUILTIN_SPACES};
use crate::hermitian::{AlmostComplexStructure, GrayHervellaClass, InvariantMetric};
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;
use crate::solver::{Bound, Branch, CertifiedRoot, KlscSolution, SolutionKind};
use crate::surd::Surd;

pub const DEFAULT_PRECISION: usize = 12;

pub trait Render: Scalar {
    fn to_json(&self, sig: usize) -> Value;
    fn to_text(&self, sig: usize) -> String;
    /// Float value for CSV cells; `None` for symbolic values.
    fn decimal(&self, sig: usize) -> Option<String>;
}

pub fn rational_json(v: &Q, sig: usize) -> Value {
    json!({
        "num": v.numer().to_string(),
        "den": v.denom().to_string(),
        "decimal": render_decimal(v, sig),
    })
}

impl Render for Q {
    fn to_json(&self, sig: usize) -> Value {
        rational_json(self, sig)
    }

    fn to_text(&self, sig: usize) -> String {
        if self.is_integer() {
            render_exact(self)
        } else {
            format!("{} ≈ {}", render_exact(self), render_decimal(self, sig))
        }
    }

    fn decimal(&self, sig: usize) -> Option<String> {
        Some(render_decimal(self, sig))
    }
}

impl Render for RatFunc {
    fn to_json(&self, _sig: usize) -> Value {
        json!({
            "expr": self.to_string(),
            "numerator": self.numerator().to_string(),
            "denominator": self.denominator().to_string(),
        })
    }

    fn to_text(&self, _sig: usize) -> String {
        self.to_string()
    }

    fn decimal(&self, _sig: usize) -> Option<String> {
        None
    }
}

pub fn surd_json(s: &Surd, sig: usize) -> Value {
    json!({
        "a": rational_json(s.a(), sig),
        "b": rational_json(s.b(), sig),
        "d": s.d().to_string(),
        "expr": s.to_string(),
        "decimal": format_sig(s.to_f64(), sig),
    })
}

pub fn space_json(fs: &FlagSpace) -> Value {
    json!({
        "name": fs.name(),
        "algebra": fs.root_system().spec().to_string(),
        "theta": fs.theta().iter().map(|i| i + 1).collect::<Vec<_>>(),
        "summands": fs.summands().iter().map(|s| json!({
            "index": s.index() + 1,
            "dim": s.dim(),
            "roots": s.roots().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "zero_sum_triples": fs.zero_sum_triples().len(),
        "real_dim": fs.summands().iter().map(|s| s.dim()).sum::<usize>(),
    })
}

pub fn spaces_json() -> Value {
    Value::Array(
        BUILTIN_SPACES
            .iter()
            .map(|n| space_json(&builtin_space(n).expect("built-in space")))
            .collect(),
    )
}

pub fn spaces_text() -> String {
    let mut out = String::new();
    for n in BUILTIN_SPACES {
        let fs = builtin_space(n).expect("built-in space");
        let dims: Vec<String> = fs.summands().iter().map(|s| s.dim().to_string()).collect();
        out.push_str(&format!(
            "{n}: {} summands, {} triples  [{}; dims {}]\n",
            fs.summand_count(),
            fs.zero_sum_triples().len(),
            fs.root_system().spec(),
            dims.join(",")
        ));
    }
    out
}

pub fn gh_json(c: &GrayHervellaClass) -> Value {
    json!({
        "members": c.members(),
        "label": c.label(),
        "code": c.code(),
        "descriptor": c.descriptor(),
    })
}

fn acs_json(acs: &AlmostComplexStructure) -> Value {
    json!(acs.signs().iter().map(|s| if *s > 0 { "+" } else { "-" }).collect::<Vec<_>>())
}

/// Everything except `solutions`, which callers fill in.
pub fn report_json<S: Render>(
    metric: &InvariantMetric<S>,
    acs: &AlmostComplexStructure,
    r: &CurvatureReport<S>,
    t: Option<&Q>,
    sig: usize,
) -> Value {
    let mut s2 = Map::new();
    s2.insert("a".into(), r.s2.a.to_json(sig));
    s2.insert("b".into(), r.s2.b.to_json(sig));
    s2.insert("c".into(), r.s2.c.to_json(sig));
    if let Some(t) = t {
        s2.insert("t".into(), rational_json(t, sig));
        s2.insert("value".into(), r.s2.at(t).to_json(sig));
    }
    json!({
        "space": metric.space().name(),
        "metric": metric.values().iter().map(|v| v.to_json(sig)).collect::<Vec<_>>(),
        "acs": acs_json(acs),
        "norms": {
            "n0_sq": r.norms.n0_sq.to_json(sig),
            "dF_minus_sq": r.norms.df_minus_sq.to_json(sig),
            "dF_plus_sq": r.norms.df_plus_sq.to_json(sig),
            "DF_sq": r.norms.big_df_sq.to_json(sig),
            "lee_form_sq": r.norms.lee_form_norm_sq().to_json(sig),
        },
        "curvatures": {
            "s": r.s.to_json(sig),
            "s1": r.s1.to_json(sig),
            "s2": Value::Object(s2),
            "sJ": r.s_j.to_json(sig),
        },
        "gh_class": gh_json(&r.gh_class),
        "defect": r.defect.to_json(sig),
        "solutions": Value::Null,
    })
}

pub fn report_text<S: Render>(
    metric: &InvariantMetric<S>,
    acs: &AlmostComplexStructure,
    r: &CurvatureReport<S>,
    t: Option<&Q>,
    sig: usize,
) -> String {
    let vals: Vec<String> = metric.values().iter().map(|v| v.to_text(sig)).collect();
    let mut out = format!(
        "space    {}\nmetric   ({})\nacs      {}\n",
        metric.space().name().unwrap_or("flag"),
        vals.join(", "),
        acs
    );
    let line = |out: &mut String, k: &str, v: String| out.push_str(&format!("{k:<9}{v}\n"));
    line(&mut out, "|N0|^2", r.norms.n0_sq.to_text(sig));
    line(&mut out, "|dF-|^2", r.norms.df_minus_sq.to_text(sig));
    line(&mut out, "|dF+|^2", r.norms.df_plus_sq.to_text(sig));
    line(&mut out, "|DF|^2", r.norms.big_df_sq.to_text(sig));
    line(&mut out, "s", r.s.to_text(sig));
    line(&mut out, "s1", r.s1.to_text(sig));
    line(
        &mut out,
        "s2(t)",
        format!("a t^2 + b t + c with a = {}, b = {}, c = {}", r.s2.a.to_text(sig), r.s2.b.to_text(sig), r.s2.c.to_text(sig)),
    );
    if let Some(t) = t {
        line(&mut out, &format!("s2({})", render_exact(t)), r.s2.at(t).to_text(sig));
    }
    line(&mut out, "sJ", r.s_j.to_text(sig));
    line(&mut out, "defect", r.defect.to_text(sig));
    line(&mut out, "class", format!("{} ({})", r.gh_class.label(), r.gh_class.descriptor()));
    out
}

pub const CSV_HEADER: [&str; 7] = ["var", "s", "s1", "s2_at_0", "sJ", "defect", "gh_class"];

/// One CSV row for a numeric report.
pub fn csv_row(var: &str, r: &CurvatureReport<Q>, sig: usize) -> Vec<String> {
    let d = |v: &Q| render_decimal(v, sig);
    vec![
        var.to_string(),
        d(&r.s),
        d(&r.s1),
        d(&r.s2.c),
        d(&r.s_j),
        d(&r.defect),
        r.gh_class.code(),
    ]
}

fn bound_json(b: &Bound, sig: usize) -> Value {
    match b {
        Bound::Zero => json!("zero"),
        Bound::Infinity => json!("infinity"),
        Bound::Exact(s) => json!({ "surd": surd_json(s, sig) }),
        Bound::Approx { lo, hi } => json!({ "approx": { "lo": rational_json(lo, sig), "hi": rational_json(hi, sig) } }),
    }
}

fn branch_json(b: &Branch, sig: usize) -> Value {
    json!({
        "expression": b.expression(),
        "sign": b.sign,
        "multiplicity": b.multiplicity,
        "substituted": b.substituted,
        "valid": !b.domain.is_empty(),
        "exact_residual_zero": b.exact_residual_zero,
        "parts": {
            "rational": b.rational_part().to_string(),
            "surd_coefficient": b.surd_part().to_string(),
            "d": b.d.to_string(),
            "radicand": b.radicand.to_string(),
        },
        "domain": {
            "text": b.domain.render(),
            "resolved": b.domain.resolved,
            "normalized": b.domain.normalized,
            "param": b.domain.param,
            "intervals": b.domain.intervals.iter().map(|(lo, hi)| json!({
                "lo": bound_json(lo, sig),
                "hi": bound_json(hi, sig),
            })).collect::<Vec<_>>(),
        },
    })
}

fn root_json(r: &CertifiedRoot, sig: usize) -> Value {
    json!({
        "interval": { "lo": rational_json(&r.lo, sig), "hi": rational_json(&r.hi, sig) },
        "midpoint": rational_json(&r.midpoint, sig),
        "decimal": format_sig(to_f64(&r.midpoint), sig),
        "multiplicity": r.multiplicity,
        "even_multiplicity": r.even_multiplicity(),
        "residual": format_sig(to_f64(&r.residual), 6),
        "residual_bound": format_sig(to_f64(&r.residual_bound), 6),
        "exact": r.exact.as_ref().map(|e| json!({
            "expr": e.to_string(),
            "sqrt_of": e.sqrt_of,
            "surd": surd_json(&e.value, sig),
            "decimal": format_sig(e.to_f64(), sig),
        })),
    })
}

fn kind_name(k: SolutionKind) -> &'static str {
    match k {
        SolutionKind::NoSolution => "NoSolution",
        SolutionKind::ClosedFormBranches => "ClosedFormBranches",
        SolutionKind::IsolatedRoots => "IsolatedRoots",
        SolutionKind::Everywhere => "Everywhere",
    }
}

pub fn solution_json(s: &KlscSolution, sig: usize) -> Value {
    json!({
        "kind": kind_name(s.kind),
        "var": s.var,
        "params": s.params,
        "numerator": s.numerator.to_string(),
        "substitution": s.substitution,
        "normalization": s.normalization.as_ref().map(|n| json!({ "param": n.param, "value": 1, "degree": n.degree })),
        "certificate": s.certificate.as_ref().map(|c| c.to_string()),
        "nonnegative_square": s.nonnegative_square,
        "tolerance": format_sig(to_f64(&s.tolerance), 6),
        "branches": s.branches.iter().map(|b| branch_json(b, sig)).collect::<Vec<_>>(),
        "roots": s.roots.iter().map(|r| root_json(r, sig)).collect::<Vec<_>>(),
    })
}

pub fn solution_text(s: &KlscSolution, sig: usize) -> String {
    let mut out = format!("numerator  {}\n", s.numerator);
    if let Some(sub) = &s.substitution {
        out.push_str(&format!("solved in  {sub}\n"));
    }
    if let Some(n) = &s.normalization {
        out.push_str(&format!("normalized {} = 1 (solutions are cones under positive scaling)\n", n.param));
    }
    out.push_str(&format!("kind       {}\n", kind_name(s.kind)));
    if let Some(c) = &s.certificate {
        out.push_str(&format!("certificate {c}\n"));
    }
    if s.nonnegative_square {
        out.push_str("defect is a nonnegative square\n");
    }
    for b in &s.branches {
        let tag = if b.domain.is_empty() { "excluded" } else { "branch" };
        let mult = if b.multiplicity > 1 { format!(" (multiplicity {})", b.multiplicity) } else { String::new() };
        out.push_str(&format!("{tag:<9}  {}{mult}\n           positive when: {}\n", b.expression(), b.domain.render()));
    }
    for r in &s.roots {
        let exact = r.exact.as_ref().map(|e| format!(" = {e}")).unwrap_or_default();
        let even = if r.even_multiplicity() { " [even multiplicity]" } else { "" };
        out.push_str(&format!(
            "root       {} ≈ {}{exact}{even}\n           in [{}, {}], residual ≤ {}\n",
            s.var,
            format_sig(r.value_f64(), sig),
            format_sig(to_f64(&r.lo), sig + 3),
            format_sig(to_f64(&r.hi), sig + 3),
            format_sig(to_f64(&r.residual_bound), 3),
        ));
    }
    out
}
