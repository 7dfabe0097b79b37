//! Invariant almost Hermitian structures `(g, J)` on flag manifolds: metrics,
//! almost complex structures, the (0,3)/(1,2) split of zero-sum triples, the
//! four squared tensor norms and the Gray–Hervella class they determine.
//!
//! # Summation convention
//!
//! Every norm is a sum over *ordered* triples `(α, β, γ)` of complementary
//! roots with `α + β + γ = 0`, both sign classes included, so each stored
//! [`ZeroSumTriple`] contributes six terms. With the Killing normalization
//! this gives, on `SU(3)/T²` with `J = (+,+,−)`,
//! `‖(dF)⁻‖² = 12 · (1/6) · (x+y+z)² / (6xyz) = (x+y+z)² / (3xyz)`.
//!
//! The per-term weight of `‖DF‖²` is `m² / (6 λ_α λ_β λ_γ)` times the bracket of
//! three squared terms; with that weight
//! `‖DF‖² = ‖(dF)⁺‖² + ¼‖N⁰‖² + ⅓‖(dF)⁻‖²` holds identically.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{q, qi, Q};
use crate::flagspace::{FlagSpace, ZeroSumTriple};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rootsys::Root;
use crate::scalar::Scalar;

/// Per-summand metric values `λᵢ`.
#[derive(Clone, Debug)]
pub struct InvariantMetric<S> {
    space: Arc<FlagSpace>,
    values: Vec<S>,
    params: Vec<String>,
}

pub type NumericMetric = InvariantMetric<Q>;
pub type SymbolicMetric = InvariantMetric<RatFunc>;

fn check_arity(space: &FlagSpace, got: usize) -> Result<()> {
    if space.summand_count() == got {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected: space.summand_count(), got })
    }
}

/// Numeric invariant metric; every value must be strictly positive.
pub fn make_metric(space: Arc<FlagSpace>, values: Vec<Q>) -> Result<NumericMetric> {
    check_arity(&space, values.len())?;
    if let Some(v) = values.iter().find(|v| !v.is_positive()) {
        return Err(Error::InvalidMetric(format!("metric values must be positive, got {v}")));
    }
    Ok(InvariantMetric { space, values, params: Vec::new() })
}

/// Symbolic metric family. Every parameter is constrained to be strictly
/// positive; positivity of non-monomial entries is re-checked whenever the
/// family is evaluated.
pub fn make_symbolic_metric(space: Arc<FlagSpace>, entries: Vec<Poly>) -> Result<SymbolicMetric> {
    check_arity(&space, entries.len())?;
    let mut params = std::collections::BTreeSet::new();
    for e in &entries {
        if e.is_zero() || e.all_coefficients_negative() || e.constant_value().is_some_and(|c| !c.is_positive()) {
            return Err(Error::InvalidMetric(format!("entry {e} is never positive")));
        }
        params.extend(e.variables());
    }
    Ok(InvariantMetric {
        space,
        values: entries.into_iter().map(RatFunc::from_poly).collect(),
        params: params.into_iter().collect(),
    })
}

impl<S: Scalar> InvariantMetric<S> {
    pub fn space(&self) -> &Arc<FlagSpace> {
        &self.space
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// λ of the summand containing ±α.
    pub fn lambda(&self, alpha: &Root) -> Option<&S> {
        self.space.summand_of(alpha).map(|i| &self.values[i])
    }

    /// Parameters of a symbolic family (empty for numeric metrics).
    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Multiplies every value by `c`.
    pub fn scaled(&self, c: &Q) -> Self {
        InvariantMetric {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v.scale(c)).collect(),
            params: self.params.clone(),
        }
    }
}

impl SymbolicMetric {
    /// Evaluates the family at a point, enforcing the positivity domain.
    pub fn at(&self, point: &BTreeMap<String, Q>) -> Result<NumericMetric> {
        for p in &self.params {
            match point.get(p) {
                Some(v) if v.is_positive() => {}
                Some(v) => return Err(Error::Domain(format!("parameter {p} = {v} is not positive"))),
                None => return Err(Error::Domain(format!("parameter {p} has no value"))),
            }
        }
        let values = self.values.iter().map(|v| v.eval(point)).collect::<Result<Vec<_>>>()?;
        if values.iter().any(|v| !v.is_positive()) {
            return Err(Error::Domain("metric entry is not positive at this point".into()));
        }
        make_metric(self.space.clone(), values)
    }

    pub fn entries(&self) -> Vec<Poly> {
        self.values.iter().map(|v| v.numerator().clone()).collect()
    }
}

impl NumericMetric {
    pub fn to_symbolic(&self) -> SymbolicMetric {
        InvariantMetric {
            space: self.space.clone(),
            values: self.values.iter().map(|v| RatFunc::from_q(v.clone())).collect(),
            params: Vec::new(),
        }
    }
}

/// Invariant almost complex structure: one sign per summand, with
/// `ε_{−α} = −ε_α` implied.
#[derive(Clone, Debug)]
pub struct AlmostComplexStructure {
    space: Arc<FlagSpace>,
    signs: Vec<i8>,
}

pub fn make_acs(space: Arc<FlagSpace>, signs: &[i32]) -> Result<AlmostComplexStructure> {
    check_arity(&space, signs.len())?;
    if let Some(s) = signs.iter().find(|s| s.abs() != 1) {
        return Err(Error::InvalidAcs(format!("signs must be ±1, got {s}")));
    }
    Ok(AlmostComplexStructure { space, signs: signs.iter().map(|&s| s as i8).collect() })
}

/// `2^{s−1}` structures up to conjugation, first sign fixed to `+`,
/// lexicographic with `+` before `−`.
pub fn enumerate_acs(space: &Arc<FlagSpace>) -> Vec<AlmostComplexStructure> {
    let s = space.summand_count();
    let free = s - 1;
    (0..1u64 << free)
        .map(|k| {
            let mut signs = vec![1i8; s];
            for bit in 0..free {
                if k >> (free - 1 - bit) & 1 == 1 {
                    signs[bit + 1] = -1;
                }
            }
            AlmostComplexStructure { space: space.clone(), signs }
        })
        .collect()
}

impl AlmostComplexStructure {
    pub fn space(&self) -> &Arc<FlagSpace> {
        &self.space
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn conjugate(&self) -> AlmostComplexStructure {
        AlmostComplexStructure { space: self.space.clone(), signs: self.signs.iter().map(|s| -s).collect() }
    }

    /// ε_α for a complementary root (of either sign).
    pub fn epsilon(&self, alpha: &Root) -> Option<i32> {
        let idx = self.space.summand_of(alpha)?;
        let s = self.signs[idx] as i32;
        Some(if alpha.is_positive() { s } else { -s })
    }

    /// Integrable iff there are no (0,3)-triples.
    pub fn is_integrable(&self) -> bool {
        self.space
            .zero_sum_triples()
            .iter()
            .all(|t| classify_triple(t, self) == TripleType::OneTwo)
    }

    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|s| if *s > 0 { "+" } else { "-" }).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for AlmostComplexStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.sign_string())
    }
}

pub fn conjugate(acs: &AlmostComplexStructure) -> AlmostComplexStructure {
    acs.conjugate()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TripleType {
    ZeroThree,
    OneTwo,
}

pub fn classify_triple(triple: &ZeroSumTriple, acs: &AlmostComplexStructure) -> TripleType {
    let e: Vec<i32> = triple.roots().iter().map(|r| acs.epsilon(r).expect("triple lives on the space")).collect();
    if e[0] == e[1] && e[1] == e[2] {
        TripleType::ZeroThree
    } else {
        TripleType::OneTwo
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorNorms<S> {
    pub n0_sq: S,
    pub df_minus_sq: S,
    pub df_plus_sq: S,
    pub big_df_sq: S,
}

impl<S: Scalar> TensorNorms<S> {
    /// The Lee form vanishes on every invariant structure of a flag manifold.
    pub fn lee_form_norm_sq(&self) -> S {
        S::zero()
    }

    pub fn df_sq(&self) -> S {
        self.df_minus_sq.add(&self.df_plus_sq)
    }

    /// `‖(dF)⁺‖² + ¼‖N⁰‖² + ⅓‖(dF)⁻‖²`.
    pub fn identity_rhs(&self) -> S {
        self.df_plus_sq
            .add(&self.n0_sq.scale(&q(1, 4)))
            .add(&self.df_minus_sq.scale(&q(1, 3)))
    }
}

fn same_space(a: &FlagSpace, b: &FlagSpace) -> bool {
    std::ptr::eq(a, b) || a == b
}

fn check_pair<S: Scalar>(metric: &InvariantMetric<S>, acs: &AlmostComplexStructure) -> Result<()> {
    if same_space(metric.space(), acs.space()) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

fn int<S: Scalar>(k: i32) -> S {
    S::from_q(qi(k as i64))
}

pub fn tensor_norms<S: Scalar>(metric: &InvariantMetric<S>, acs: &AlmostComplexStructure) -> Result<TensorNorms<S>> {
    check_pair(metric, acs)?;
    let mut n0 = S::zero();
    let mut dfm = S::zero();
    let mut dfp = S::zero();
    let mut big = S::zero();
    // Each summand is symmetric under permuting the slots (λ and ε move
    // together), so the six orderings of a triple contribute equally.
    for t in metric.space().zero_sum_triples() {
        let roots = t.roots();
        let [ea, eb, ec] = [0, 1, 2].map(|k| acs.epsilon(&roots[k]).unwrap());
        let [la, lb, lc] = [0, 1, 2].map(|k| metric.lambda(&roots[k]).unwrap().clone());
        let big_e = ea * eb * ec + ea + eb + ec;
        let lsum = la.add(&lb).add(&lc);
        let weight = S::from_q(t.msq() * qi(6)).div(&la.mul(&lb).mul(&lc));

        if big_e != 0 {
            let dev = |a: &S, b: &S, c: &S| int::<S>(-2).mul(a).add(b).add(c).square();
            let bracket = dev(&la, &lb, &lc).add(&dev(&lc, &la, &lb)).add(&dev(&lb, &la, &lc));
            n0 = n0.add(&weight.mul(&bracket).scale(&q((big_e * big_e) as i64, 54)));
            dfm = dfm.add(&weight.mul(&lsum.square()).scale(&q((big_e * big_e) as i64, 96)));
        }

        let flip = |a: &S, b: &S, c: &S| a.neg().add(b).add(c).square();
        let df_bracket = flip(&la, &lb, &lc)
            .scale(&q(((eb + ec) * (eb + ec)) as i64, 4))
            .add(&flip(&lb, &la, &lc).scale(&q(((ea + ec) * (ea + ec)) as i64, 4)))
            .add(&flip(&lc, &la, &lb).scale(&q(((ea + eb) * (ea + eb)) as i64, 4)));
        big = big.add(&weight.mul(&df_bracket).scale(&q(1, 6)));

        let signed = la.scale(&qi(ea as i64)).add(&lb.scale(&qi(eb as i64))).add(&lc.scale(&qi(ec as i64)));
        let brace = signed.scale(&qi(4)).sub(&lsum.scale(&qi(big_e as i64)));
        dfp = dfp.add(&weight.mul(&brace.square()).scale(&q(1, 96)));
    }
    Ok(TensorNorms { n0_sq: n0, df_minus_sq: dfm, df_plus_sq: dfp, big_df_sq: big })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TensorKind {
    /// Levi-Civita covariant derivative `DF`.
    BigDf,
    Df,
    DfMinus,
    DfPlus,
    N0,
}

impl TensorKind {
    pub const ALL: [TensorKind; 5] = [TensorKind::BigDf, TensorKind::Df, TensorKind::DfMinus, TensorKind::DfPlus, TensorKind::N0];

    /// Weight turning `Σ_ordered |component|²` into the squared norm: 1/3! for
    /// the 3-forms, 1/2! for tensors skew in two slots.
    pub fn norm_weight(self) -> Q {
        match self {
            TensorKind::BigDf | TensorKind::N0 => q(1, 2),
            _ => q(1, 6),
        }
    }
}

/// A component `T(E_α, E_β, E_γ) = (i?) · m_{α,β} · coefficient / √radicand`.
#[derive(Clone, Debug, PartialEq)]
pub struct Component<S> {
    pub coefficient: S,
    pub radicand: S,
    pub imaginary: bool,
    pub msq: Q,
}

impl<S: Scalar> Component<S> {
    pub fn modulus_sq(&self) -> S {
        if self.coefficient.is_zero() {
            return S::zero();
        }
        self.coefficient.square().div(&self.radicand).scale(&self.msq)
    }
}

/// Component of the chosen tensor on the orthonormal frame `E_α = X_α/√λ_α`.
/// Zero unless `α + β + γ = 0` with all three roots complementary.
pub fn tensor_component<S: Scalar>(
    kind: TensorKind,
    roots: &[Root; 3],
    metric: &InvariantMetric<S>,
    acs: &AlmostComplexStructure,
) -> Result<Component<S>> {
    check_pair(metric, acs)?;
    let zero = || Component {
        coefficient: S::zero(),
        radicand: S::one(),
        imaginary: kind != TensorKind::N0,
        msq: qi(0),
    };
    let space = metric.space();
    let sum = &(&roots[0] + &roots[1]) + &roots[2];
    if !sum.is_zero() || roots.iter().any(|r| space.summand_of(r).is_none()) {
        return Ok(zero());
    }
    let msq = space.root_system().structure_constant_sq(&roots[0], &roots[1])?;
    let [ea, eb, ec] = [0, 1, 2].map(|k| acs.epsilon(&roots[k]).unwrap());
    let [la, lb, lc] = [0, 1, 2].map(|k| metric.lambda(&roots[k]).unwrap().clone());
    let big_e = ea * eb * ec + ea + eb + ec;
    let lsum = la.add(&lb).add(&lc);
    let signed = la.scale(&qi(ea as i64)).add(&lb.scale(&qi(eb as i64))).add(&lc.scale(&qi(ec as i64)));
    let coefficient = match kind {
        TensorKind::BigDf => la.neg().add(&lb).add(&lc).scale(&q(-((eb + ec) as i64), 2)),
        TensorKind::Df => signed.neg(),
        TensorKind::DfMinus => lsum.scale(&q(-(big_e as i64), 4)),
        TensorKind::DfPlus => signed.scale(&qi(4)).sub(&lsum.scale(&qi(big_e as i64))).scale(&q(-1, 4)),
        TensorKind::N0 => la.scale(&qi(-2)).add(&lb).add(&lc).scale(&q(big_e as i64, 3)),
    };
    Ok(Component { coefficient, radicand: la.mul(&lb).mul(&lc), imaginary: kind != TensorKind::N0, msq })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GrayHervellaClass {
    pub w1: bool,
    pub w2: bool,
    pub w3: bool,
}

impl GrayHervellaClass {
    pub fn members(&self) -> Vec<&'static str> {
        let mut m = Vec::new();
        if self.w1 {
            m.push("W1");
        }
        if self.w2 {
            m.push("W2");
        }
        if self.w3 {
            m.push("W3");
        }
        m
    }

    pub fn is_kahler(&self) -> bool {
        !(self.w1 || self.w2 || self.w3)
    }

    pub fn label(&self) -> String {
        if self.is_kahler() {
            "Kähler".to_string()
        } else {
            self.members().join("⊕")
        }
    }

    /// ASCII label for CSV and shell use (`W1+W3`, `Kahler`).
    pub fn code(&self) -> String {
        if self.is_kahler() {
            "Kahler".to_string()
        } else {
            self.members().join("+")
        }
    }

    pub fn descriptor(&self) -> &'static str {
        match (self.w1, self.w2, self.w3) {
            (false, false, false) => "Kähler",
            (true, false, false) => "nearly-Kähler",
            (true, true, false) => "quasi-Kähler",
            (false, false, true) => "Hermitian",
            _ => "cosymplectic",
        }
    }
}

impl fmt::Display for GrayHervellaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

pub fn classify_norms<S: Scalar>(norms: &TensorNorms<S>) -> GrayHervellaClass {
    GrayHervellaClass {
        w1: !norms.df_minus_sq.is_zero(),
        w2: !norms.n0_sq.is_zero(),
        w3: !norms.df_plus_sq.is_zero(),
    }
}

pub fn gray_hervella<S: Scalar>(metric: &InvariantMetric<S>, acs: &AlmostComplexStructure) -> Result<GrayHervellaClass> {
    Ok(classify_norms(&tensor_norms(metric, acs)?))
}
