//! Cohomology dimensions of `(Ω•, df∧)`, `(Ω•, d − df∧)` and their log,
//! meromorphic and pole-graded variants.
//!
//! Koszul complexes with a zero-dimensional generator ideal are handled by
//! the staircase: the generators form a regular sequence, so cohomology sits
//! in top degree and equals the quotient ring. Everything else goes through
//! finite windows of the complex and exact ranks.
//!
//! # Windows
//!
//! Let `w` be quasi-homogeneous weights of `f` with weighted degree `N`
//! (or `w = (1, …, 1)` and `N = deg f` otherwise). A covector `dx_i` has
//! weight `w_i`, `dlog x_i` has weight 0, and a form's weight is its
//! coefficient weight plus its covector weights. Then `d` preserves weight
//! and `df∧` raises it by at most `N`, so
//!
//! ```text
//! C_k(L) = { k-forms of weight ≤ L − (n − k)·N }
//! ```
//!
//! is a finite subcomplex: every map has matching source and target windows.
//! Meromorphic windows also bound poles, measured after rewriting `dx_i` as
//! `x_i · dlog x_i` on divisor indices. Both `d` and `gr d` preserve this
//! order and `df∧` does not raise it. A per-degree bound on the raw
//! coefficient level would also be closed, but it does not factor over
//! variables and leaves spurious boundary classes.
//!
//! The window dims are reported at `L, 2L, 4L, …` (and `P, 2P, …`) until two
//! consecutive levels agree in every degree.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{CoefficientMode, DifferentialForm, FormContext, IndexSet, PoleConvention};
use crate::groebner::{buchberger, QuotientDimension};
use crate::linalg::SparseMatrix;
use crate::poly::{find_quasi_homogeneous_weights, Exponents, MonomialOrder, Polynomial, Rational, Ring, VarSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    /// `−df∧`
    Koszul,
    /// `d − df∧`
    Twisted,
    /// `gr^F d − df∧` on `Ω ⊗ gr^F O[*D]`, pole level per component
    GradedMeromorphic,
    /// The same with pole level summed over components
    GradedMeromorphicTotal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    /// Initial weighted degree bound; `None` selects the certified bound.
    pub initial_degree: Option<i64>,
    pub pole_bound: u32,
    pub max_doublings: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { initial_degree: None, pole_bound: 2, max_doublings: 4 }
    }
}

impl Truncation {
    fn validate(&self) -> Result<()> {
        if matches!(self.initial_degree, Some(d) if d <= 0) || self.pole_bound == 0 {
            return Err(Error::InvalidInput("truncation bounds must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ComplexSpec {
    pub context: FormContext,
    pub f: Polynomial,
    pub operator: Operator,
    pub truncation: Truncation,
}

/// Weights used for windows: quasi-homogeneous weights of `f` when they
/// exist, all ones otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grading {
    pub weights: Vec<u64>,
    pub degree: i64,
    pub quasi_homogeneous: bool,
}

impl Grading {
    pub fn of(f: &Polynomial) -> Result<Grading> {
        if f.is_zero() || f.is_constant() {
            return Err(Error::ConstantPolynomial);
        }
        if !f.is_polynomial() {
            return Err(Error::InvalidInput("f must not have poles".into()));
        }
        Ok(match find_quasi_homogeneous_weights(f) {
            Some(w) => {
                let degree = f.weighted_degree(&w)?.degree;
                Grading { weights: w, degree, quasi_homogeneous: true }
            }
            None => Grading {
                weights: vec![1; f.nvars()],
                degree: f.total_degree().expect("nonzero"),
                quasi_homogeneous: false,
            },
        })
    }

    /// Degree bound beyond which every top-degree class has a representative
    /// in the window, for quasi-homogeneous `f` with isolated critical
    /// locus: `Σ_i (N − w_i) + N`.
    pub fn certified_bound(&self) -> i64 {
        let n = self.degree;
        self.weights.iter().map(|&w| n - w as i64).sum::<i64>() + n
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub degree_bound: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pole_bound: Option<u32>,
    /// Window dimension of each term of the complex.
    pub sizes: Vec<usize>,
    pub ranks: Vec<usize>,
    pub dims: Vec<usize>,
    /// Classes of this window that survive into the next one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub persistent: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub dims: Vec<usize>,
    pub certified: bool,
    pub trace: Vec<TraceEntry>,
    /// Standard monomials when the top degree came from a staircase.
    #[serde(skip)]
    pub staircase: Vec<Exponents>,
    pub notes: Vec<String>,
}

impl DimensionReport {
    pub fn top(&self) -> usize {
        *self.dims.last().expect("n + 1 entries")
    }
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L={}", self.degree_bound)?;
        if let Some(p) = self.pole_bound {
            write!(f, ",P={p}")?;
        }
        write!(f, ":{:?}", self.dims)?;
        match &self.persistent {
            Some(p) if p != &self.dims => write!(f, "->{p:?}"),
            _ => Ok(()),
        }
    }
}

/// Generators of the Koszul complex `(Ω•, df∧)` in the basis of `ctx`:
/// `x_i ∂f/∂x_i` at log indices, `∂f/∂x_j` elsewhere, as polynomials
/// without divisor.
pub fn koszul_generators(ctx: &FormContext, f: &Polynomial) -> Result<Vec<Polynomial>> {
    if !f.is_polynomial() {
        return Err(Error::InvalidInput("f must not have poles".into()));
    }
    let g = f.in_ring(Ring::polynomial(ctx.nvars()))?;
    Ok(match ctx.mode() {
        CoefficientMode::Log => ctx.differential(&g),
        _ => FormContext::plain(ctx.nvars()).differential(&g),
    })
}

fn quotient_of(gens: &[Polynomial], order: &MonomialOrder) -> Result<QuotientDimension> {
    let nonzero: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(QuotientDimension::Infinite);
    }
    Ok(buchberger(&nonzero, order)?.quotient_dimension())
}

/// `(Ω•, df∧)` on affine space.
pub fn koszul_cohomology_dims(f: &Polynomial, order: &MonomialOrder, truncation: &Truncation) -> Result<DimensionReport> {
    let ctx = FormContext::plain(f.nvars());
    let f = f.in_ring(ctx.coefficient_ring())?;
    Grading::of(&f)?;
    let gens = koszul_generators(&ctx, &f)?;
    match quotient_of(&gens, order)? {
        QuotientDimension::Finite { dim, basis } => {
            let mut dims = vec![0; ctx.nvars() + 1];
            dims[ctx.nvars()] = dim;
            Ok(DimensionReport {
                dims,
                certified: true,
                trace: Vec::new(),
                staircase: basis,
                notes: vec!["Jacobian ideal is zero-dimensional: partials form a regular sequence".into()],
            })
        }
        QuotientDimension::Infinite => {
            let mut r = truncated_complex_dims(&ComplexSpec {
                context: ctx,
                f,
                operator: Operator::Koszul,
                truncation: truncation.clone(),
            })?;
            r.certified = false;
            r.notes.push("Jacobian ideal is not zero-dimensional".into());
            Ok(r)
        }
    }
}

/// `(Ω•(log D), df∧)` for the divisor `D = Σ_{i∈S} {x_i = 0}`.
pub fn log_koszul_cohomology_dims(
    f: &Polynomial,
    divisor: VarSet,
    order: &MonomialOrder,
    truncation: &Truncation,
) -> Result<DimensionReport> {
    let ctx = FormContext::log(f.nvars(), divisor)?;
    let f = f.in_ring(ctx.coefficient_ring())?;
    Grading::of(&f)?;
    let gens = koszul_generators(&ctx, &f)?;
    let quotient = quotient_of(&gens, order)?;
    let mut report = truncated_complex_dims(&ComplexSpec {
        context: ctx,
        f,
        operator: Operator::Koszul,
        truncation: truncation.clone(),
    })?;
    match quotient {
        QuotientDimension::Finite { dim, basis } => {
            let n = ctx.nvars();
            if report.dims[n] != dim {
                report.notes.push(format!(
                    "window top dimension {} below staircase dimension {dim}",
                    report.dims[n]
                ));
            }
            report.dims[n] = dim;
            let lower_vanish = report.dims[..n].iter().all(|&d| d == 0);
            report.certified = lower_vanish && report.trace.len() >= 2;
            report.staircase = basis;
            report.notes.push("modified generators are zero-dimensional".into());
        }
        QuotientDimension::Infinite => {
            report.certified = false;
            report.notes.push("modified generator ideal is not zero-dimensional".into());
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PoleRule {
    None,
    /// Pole order of `g · Π_{i ∈ I ∩ S} x_i` at most `P`.
    LogAdjusted(u32),
}

/// One truncation level of a complex.
#[derive(Clone, Debug)]
struct Window<'a> {
    spec: &'a ComplexSpec,
    grading: &'a Grading,
    level: i64,
    poles: PoleRule,
}

pub type BasisElement = (IndexSet, Exponents);

impl Window<'_> {
    fn n(&self) -> usize {
        self.spec.context.nvars()
    }

    fn covector_weight(&self, i: usize) -> i64 {
        if self.spec.context.is_log_index(i) {
            0
        } else {
            self.grading.weights[i] as i64
        }
    }

    fn weight_bound(&self, k: usize) -> i64 {
        self.level - (self.n() as i64 - k as i64) * self.grading.degree
    }

    /// Basis of `C_k`: index sets in lexicographic order, then monomials in
    /// increasing degrevlex order.
    fn basis(&self, k: usize) -> Vec<BasisElement> {
        let n = self.n();
        let s = self.spec.context.divisor();
        let weights = &self.grading.weights;
        let mut out = Vec::new();
        for idx in IndexSet::all(n, k) {
            let budget = self.weight_bound(k) - idx.as_slice().iter().map(|&i| self.covector_weight(i)).sum::<i64>();
            let lower: Vec<i64> = (0..n)
                .map(|i| match self.poles {
                    _ if !s.contains(i) => 0,
                    PoleRule::None => 0,
                    PoleRule::LogAdjusted(p) => -(p as i64) - idx.contains(i) as i64,
                })
                .collect();
            let mut monos = Vec::new();
            enumerate_monomials(weights, &lower, budget, &mut Vec::with_capacity(n), &mut monos);
            monos.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(a, b));
            out.extend(monos.into_iter().map(|m| (idx.clone(), m)));
        }
        out
    }

    fn apply(&self, form: &DifferentialForm) -> Result<DifferentialForm> {
        let f = &self.spec.f;
        match self.spec.operator {
            Operator::Koszul => form.twisted_operator(f, &Rational::zero()),
            Operator::Twisted => form.twisted_operator(f, &Rational::one()),
            Operator::GradedMeromorphic => form.graded_twisted_operator(f),
            Operator::GradedMeromorphicTotal => form.graded_twisted_operator_with(f, PoleConvention::Total),
        }
    }

    /// Matrix of `C_k → C_{k+1}`, one row per source basis element.
    fn assemble(&self, k: usize, source: &[BasisElement], target: &[BasisElement]) -> Result<SparseMatrix> {
        let ctx = self.spec.context;
        let ring = ctx.coefficient_ring();
        let index: HashMap<&BasisElement, usize> = target.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut m = SparseMatrix::new(target.len());
        for (idx, e) in source {
            let form = DifferentialForm::from_components(ctx, k, [(idx.clone(), ring.term(e.clone(), Rational::one()))])?;
            let image = self.apply(&form)?;
            let mut row = Vec::new();
            for (j, g) in image.components() {
                for (m_exp, c) in g.terms() {
                    let key = (j.clone(), m_exp.clone());
                    let col = index.get(&key).ok_or_else(|| {
                        Error::Internal(format!("image term {key:?} of {idx:?}·{e:?} leaves the window"))
                    })?;
                    row.push((*col, c.clone()));
                }
            }
            m.push_row(row);
        }
        Ok(m)
    }

    fn contains(&self, k: usize, (idx, e): &BasisElement) -> bool {
        let s = self.spec.context.divisor();
        let weight = e.weighted_degree(&self.grading.weights)
            + idx.as_slice().iter().map(|&i| self.covector_weight(i)).sum::<i64>();
        let poles_ok = match self.poles {
            PoleRule::None => true,
            PoleRule::LogAdjusted(p) => {
                s.iter().all(|i| e.get(i) as i64 >= -(p as i64) - idx.contains(i) as i64)
            }
        };
        weight <= self.weight_bound(k) && poles_ok
    }

    /// Window dims, plus for each map `C_{k-1} → C_k` the rank of its
    /// columns lying outside `inner` (the previous, smaller window).
    fn compute(&self, inner: Option<&Window>) -> Result<(TraceEntry, Vec<usize>)> {
        let n = self.n();
        let bases: Vec<Vec<BasisElement>> = (0..=n).map(|k| self.basis(k)).collect();
        let ranks: Vec<(usize, usize)> = (0..n)
            .into_par_iter()
            .map(|k| {
                let m = self.assemble(k, &bases[k], &bases[k + 1])?;
                let outside = match inner {
                    Some(w) => {
                        let keep: Vec<bool> = bases[k + 1].iter().map(|b| !w.contains(k + 1, b)).collect();
                        let mut r = SparseMatrix::new(m.ncols());
                        for row in m.rows() {
                            r.push_row(row.iter().filter(|(c, _)| keep[*c]).cloned().collect());
                        }
                        r.rank()?
                    }
                    None => 0,
                };
                Ok((m.rank()?, outside))
            })
            .collect::<Result<_>>()?;
        let (ranks, outside): (Vec<usize>, Vec<usize>) = ranks.into_iter().unzip();
        let sizes: Vec<usize> = bases.iter().map(Vec::len).collect();
        let dims = (0..=n)
            .map(|k| {
                let out = if k < n { ranks[k] } else { 0 };
                let inc = if k > 0 { ranks[k - 1] } else { 0 };
                sizes[k] - out - inc
            })
            .collect();
        let entry = TraceEntry {
            degree_bound: self.level,
            pole_bound: match self.poles {
                PoleRule::None => None,
                PoleRule::LogAdjusted(p) => Some(p),
            },
            sizes,
            ranks,
            dims,
            persistent: None,
        };
        Ok((entry, outside))
    }
}

/// Dimension of the image of `H^k(C(L)) → H^k(C(L'))`: cycles of the small
/// window minus those that become boundaries in the large one. Since `C(L)`
/// is spanned by a subset of the basis of `C(L')`, a boundary `T'(x)` lies
/// in `C(L)` iff its coordinates outside `C(L)` vanish, so
/// `dim(B' ∩ C(L)) = rank T' − rank(T' on the outside columns)`.
fn persistent_dims(small: &TraceEntry, large: &TraceEntry, outside: &[usize]) -> Vec<usize> {
    let n = small.sizes.len() - 1;
    (0..=n)
        .map(|k| {
            let cycles = small.sizes[k] - if k < n { small.ranks[k] } else { 0 };
            let dying = if k > 0 { large.ranks[k - 1] - outside[k - 1] } else { 0 };
            cycles - dying
        })
        .collect()
}

/// All exponent vectors `a ≥ lower` with `Σ a_i w_i ≤ budget`.
fn enumerate_monomials(weights: &[u64], lower: &[i64], budget: i64, cur: &mut Vec<i32>, out: &mut Vec<Exponents>) {
    let i = cur.len();
    if i == weights.len() {
        out.push(Exponents::new(cur.clone()));
        return;
    }
    let rest_min: i64 = (i + 1..weights.len()).map(|j| lower[j] * weights[j] as i64).sum();
    let w = weights[i] as i64;
    let hi = (budget - rest_min).div_euclid(w);
    let mut a = lower[i];
    while a <= hi {
        cur.push(a as i32);
        enumerate_monomials(weights, lower, budget - a * w, cur, out);
        cur.pop();
        a += 1;
    }
}

fn validate_spec(spec: &ComplexSpec) -> Result<()> {
    spec.truncation.validate()?;
    let graded = matches!(spec.operator, Operator::GradedMeromorphic | Operator::GradedMeromorphicTotal);
    if graded && spec.context.mode() != CoefficientMode::Meromorphic {
        return Err(Error::InvalidInput("the pole-graded complex needs meromorphic mode".into()));
    }
    if spec.f.nvars() != spec.context.nvars() {
        return Err(Error::RingMismatch("f and the form context differ in dimension".into()));
    }
    Ok(())
}

/// Matrix of the operator on one window, with its source and target bases.
pub fn truncated_operator_matrix(
    spec: &ComplexSpec,
    k: usize,
    level: i64,
) -> Result<(Vec<BasisElement>, Vec<BasisElement>, SparseMatrix)> {
    validate_spec(spec)?;
    let grading = Grading::of(&spec.f)?;
    let w = Window { spec, grading: &grading, level, poles: pole_rule(spec, spec.truncation.pole_bound) };
    let (s, t) = (w.basis(k), w.basis(k + 1));
    let m = w.assemble(k, &s, &t)?;
    Ok((s, t, m))
}

fn pole_rule(spec: &ComplexSpec, p: u32) -> PoleRule {
    match (spec.context.mode(), spec.operator) {
        (CoefficientMode::Meromorphic, _) => PoleRule::LogAdjusted(p),
        _ => PoleRule::None,
    }
}

/// Window cohomology with doubling until two consecutive levels agree.
///
/// Every level also records the persistent dimensions of the previous
/// level, the classes that survive into the next window. Quasi-homogeneous
/// polynomial and log windows are exact, so raw and persistent dimensions
/// coincide and two levels suffice. Otherwise boundary effects can leave
/// spurious classes in every window, and the persistent dimensions of two
/// consecutive levels must agree. Only levels at or above the certified
/// bound count towards stabilization.
pub fn truncated_complex_dims(spec: &ComplexSpec) -> Result<DimensionReport> {
    validate_spec(spec)?;
    let grading = Grading::of(&spec.f)?;
    let bound = grading.certified_bound();
    let exact_windows = grading.quasi_homogeneous && spec.context.mode() != CoefficientMode::Meromorphic;
    let mut level = spec.truncation.initial_degree.unwrap_or(bound);
    let mut pole = spec.truncation.pole_bound;
    let uses_poles = spec.context.mode() == CoefficientMode::Meromorphic;
    let mut trace: Vec<TraceEntry> = Vec::new();
    let mut previous: Option<(i64, u32)> = None;
    let mut result: Option<Vec<usize>> = None;
    for _ in 0..=spec.truncation.max_doublings {
        let window = Window { spec, grading: &grading, level, poles: pole_rule(spec, pole) };
        let inner = previous.map(|(l, p)| Window { spec, grading: &grading, level: l, poles: pole_rule(spec, p) });
        let (entry, outside) = window.compute(inner.as_ref())?;
        if let Some(prev) = trace.last_mut() {
            prev.persistent = Some(persistent_dims(prev, &entry, &outside));
        }
        trace.push(entry);
        let t = trace.len();
        if exact_windows && t >= 2 {
            let (a, b) = (&trace[t - 2], &trace[t - 1]);
            if a.degree_bound >= bound && a.dims == b.dims && a.persistent.as_ref() == Some(&a.dims) {
                result = Some(b.dims.clone());
                break;
            }
        }
        if !exact_windows && t >= 3 {
            let (a, b) = (&trace[t - 3], &trace[t - 2]);
            if a.degree_bound >= bound && a.persistent.is_some() && a.persistent == b.persistent {
                result = b.persistent.clone();
                break;
            }
        }
        previous = Some((level, pole));
        level *= 2;
        if uses_poles {
            pole *= 2;
        }
    }
    let Some(dims) = result else {
        let shown: Vec<String> = trace.iter().map(ToString::to_string).collect();
        return Err(Error::Unstable { doublings: spec.truncation.max_doublings, trace: shown.join(" ") });
    };
    let mut notes = vec![format!(
        "weights {:?}, weighted degree {}{}",
        grading.weights,
        grading.degree,
        if grading.quasi_homogeneous { "" } else { " (not quasi-homogeneous)" }
    )];
    if !exact_windows {
        notes.push("dimensions are persistent classes, surviving from one window into the next".into());
    }
    let isolated = match spec.context.mode() {
        CoefficientMode::Meromorphic => false,
        _ => quotient_of(&koszul_generators(&spec.context, &spec.f)?, &MonomialOrder::DegRevLex)?.is_finite(),
    };
    let certified = exact_windows && isolated;
    if !certified {
        notes.push("window dimensions are stable but not certified".into());
    }
    Ok(DimensionReport { dims, certified, trace, staircase: Vec::new(), notes })
}
