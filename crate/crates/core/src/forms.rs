//! Differential forms with polynomial, logarithmic or meromorphic
//! coefficients, and the operators `df∧`, `d`, `u·d − df∧` and the
//! pole-graded `gr d`.
//!
//! Sign convention, shared by every operator: for a covector `e_i` and a
//! sorted index set `I ∌ i`, `e_i ∧ e_I = (−1)^#{j ∈ I : j < i} · e_{I ∪ {i}}`.
//!
//! In log mode the basis covector at a divisor index `i` is `dlog x_i =
//! dx_i/x_i` and coefficients are polynomials, so `dx_i = x_i · dlog x_i`. In
//! meromorphic mode every covector is `dx_i` and coefficients may have poles
//! along the divisor.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::parse::render;
use crate::poly::{Exponents, MonomialOrder, Polynomial, Rational, Ring, VarSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientMode {
    Polynomial,
    Log,
    Meromorphic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormContext {
    nvars: usize,
    divisor: VarSet,
    mode: CoefficientMode,
}

impl FormContext {
    pub fn new(nvars: usize, divisor: VarSet, mode: CoefficientMode) -> Result<Self> {
        Ring::new(nvars, divisor)?;
        match mode {
            CoefficientMode::Polynomial if !divisor.is_empty() => {
                Err(Error::InvalidForm("polynomial mode takes no divisor".into()))
            }
            CoefficientMode::Log | CoefficientMode::Meromorphic if divisor.is_empty() => {
                Err(Error::InvalidForm("log and meromorphic modes need a nonempty divisor".into()))
            }
            _ => Ok(FormContext { nvars, divisor, mode }),
        }
    }

    pub fn plain(nvars: usize) -> Self {
        FormContext { nvars, divisor: VarSet::empty(), mode: CoefficientMode::Polynomial }
    }

    pub fn log(nvars: usize, divisor: VarSet) -> Result<Self> {
        Self::new(nvars, divisor, CoefficientMode::Log)
    }

    pub fn meromorphic(nvars: usize, divisor: VarSet) -> Result<Self> {
        Self::new(nvars, divisor, CoefficientMode::Meromorphic)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn divisor(&self) -> VarSet {
        self.divisor
    }

    pub fn mode(&self) -> CoefficientMode {
        self.mode
    }

    /// Ring holding the coefficients: Laurent only in meromorphic mode.
    pub fn coefficient_ring(&self) -> Ring {
        match self.mode {
            CoefficientMode::Meromorphic => Ring::new(self.nvars, self.divisor).expect("validated"),
            _ => Ring::polynomial(self.nvars),
        }
    }

    /// True when the basis covector at `i` is `dlog x_i`.
    pub fn is_log_index(&self, i: usize) -> bool {
        self.mode == CoefficientMode::Log && self.divisor.contains(i)
    }

    /// Coefficients of `dg` in the basis of this context.
    pub fn differential(&self, g: &Polynomial) -> Vec<Polynomial> {
        (0..self.nvars)
            .map(|i| {
                let d = g.partial_derivative(i);
                if self.is_log_index(i) {
                    d.mul_term(&Exponents::unit(self.nvars, i), &Rational::from_integer(1.into()))
                } else {
                    d
                }
            })
            .collect()
    }

    fn prepare_function(&self, f: &Polynomial) -> Result<Polynomial> {
        if !f.is_polynomial() {
            return Err(Error::InvalidForm("the function f must not have poles".into()));
        }
        f.in_ring(self.coefficient_ring())
    }
}

/// Sorted set of covector indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// `e_i ∧ e_I` as a sign and an index set, or `None` when `i ∈ I`.
    pub fn wedge_left(&self, i: usize) -> Option<(bool, IndexSet)> {
        match self.0.binary_search(&i) {
            Ok(_) => None,
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, i);
                Some((pos % 2 == 1, IndexSet(v)))
            }
        }
    }

    /// All `k`-element subsets of `{0, …, n−1}` in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<IndexSet> {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
            if cur.len() == k {
                out.push(IndexSet(cur.clone()));
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if k <= n {
            rec(0, n, k, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// A differential form of fixed degree. Degrees above `n` are representable
/// and always zero; they arise from `d` or `df∧` applied to top-degree forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialForm {
    ctx: FormContext,
    degree: usize,
    components: BTreeMap<IndexSet, Polynomial>,
}

impl DifferentialForm {
    pub fn zero(ctx: FormContext, degree: usize) -> Self {
        DifferentialForm { ctx, degree, components: BTreeMap::new() }
    }

    /// The 0-form `g`.
    pub fn function(ctx: FormContext, g: Polynomial) -> Result<Self> {
        Self::from_components(ctx, 0, [(IndexSet::empty(), g)])
    }

    pub fn from_components<I>(ctx: FormContext, degree: usize, comps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (IndexSet, Polynomial)>,
    {
        if degree > ctx.nvars {
            return Err(Error::InvalidForm(format!("degree {degree} exceeds dimension {}", ctx.nvars)));
        }
        let ring = ctx.coefficient_ring();
        let mut form = Self::zero(ctx, degree);
        for (idx, g) in comps {
            if idx.len() != degree || idx.as_slice().iter().any(|&i| i >= ctx.nvars) {
                return Err(Error::InvalidForm(format!("index set {:?} for a {degree}-form", idx.0)));
            }
            let g = g.in_ring(ring)?;
            form.add_component(idx, g);
        }
        Ok(form)
    }

    pub fn context(&self) -> FormContext {
        self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// True for the (necessarily zero) forms of degree above `n`.
    pub fn exceeds_dimension(&self) -> bool {
        self.degree > self.ctx.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&IndexSet, &Polynomial)> {
        self.components.iter()
    }

    pub fn component(&self, idx: &IndexSet) -> Option<&Polynomial> {
        self.components.get(idx)
    }

    fn add_component(&mut self, idx: IndexSet, g: Polynomial) {
        if g.is_zero() {
            return;
        }
        let sum = match self.components.remove(&idx) {
            Some(old) => &old + &g,
            None => g,
        };
        if !sum.is_zero() {
            self.components.insert(idx, sum);
        }
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (i, g) in &other.components {
            out.add_component(i.clone(), g.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Rational) -> DifferentialForm {
        let mut out = Self::zero(self.ctx, self.degree);
        if !c.is_zero() {
            for (i, g) in &self.components {
                out.add_component(i.clone(), g.scale(c));
            }
        }
        out
    }

    /// Multiplies every coefficient by a polynomial of the coefficient ring.
    pub fn mul_function(&self, h: &Polynomial) -> Result<DifferentialForm> {
        let h = h.in_ring(self.ctx.coefficient_ring())?;
        let mut out = Self::zero(self.ctx, self.degree);
        for (i, g) in &self.components {
            out.add_component(i.clone(), g * &h);
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &DifferentialForm) -> Result<()> {
        if self.ctx != other.ctx || self.degree != other.degree {
            return Err(Error::InvalidForm(format!(
                "cannot combine a {}-form in {:?} with a {}-form in {:?}",
                self.degree, self.ctx, other.degree, other.ctx
            )));
        }
        Ok(())
    }

    /// `Σ_i coeffs[i] · e_i ∧ self`.
    fn wedge_covectors(&self, coeffs: &[Polynomial]) -> DifferentialForm {
        let mut out = Self::zero(self.ctx, self.degree + 1);
        if self.degree >= self.ctx.nvars {
            return out;
        }
        for (idx, g) in &self.components {
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if let Some((negative, j)) = idx.wedge_left(i) {
                    let t = c * g;
                    out.add_component(j, if negative { -&t } else { t });
                }
            }
        }
        out
    }

    /// `df ∧ ω`, with `df` expanded in the basis of the context.
    pub fn wedge_df(&self, f: &Polynomial) -> Result<DifferentialForm> {
        let f = self.ctx.prepare_function(f)?;
        Ok(self.wedge_covectors(&self.ctx.differential(&f)))
    }

    pub fn exterior_derivative(&self) -> DifferentialForm {
        let mut out = Self::zero(self.ctx, self.degree + 1);
        if self.degree >= self.ctx.nvars {
            return out;
        }
        for (idx, g) in &self.components {
            let single = DifferentialForm {
                ctx: self.ctx,
                degree: self.degree,
                components: BTreeMap::from([(idx.clone(), self.ctx.coefficient_ring().one())]),
            };
            let part = single.wedge_covectors(&self.ctx.differential(g));
            for (j, h) in part.components {
                out.add_component(j, h);
            }
        }
        out
    }

    /// `u·dω − df∧ω`.
    pub fn twisted_operator(&self, f: &Polynomial, u: &Rational) -> Result<DifferentialForm> {
        let d = if u.is_zero() {
            Self::zero(self.ctx, self.degree + 1)
        } else {
            self.exterior_derivative().scale(u)
        };
        d.sub(&self.wedge_df(f)?)
    }

    /// Symbol of `d` on `gr^F_p → gr^F_{p+1}` for a form whose coefficient
    /// terms all have pole level exactly `p`.
    pub fn graded_exterior_derivative(&self, p: u32) -> Result<DifferentialForm> {
        self.require_meromorphic()?;
        let s = self.ctx.divisor;
        for g in self.components.values() {
            if let Some((e, _)) = g.terms().find(|(e, _)| e.pole_order(s) != p) {
                return Err(Error::InvalidForm(format!(
                    "term with pole level {} in a form of pure level {p}",
                    e.pole_order(s)
                )));
            }
        }
        Ok(self.exterior_derivative().filter_terms(|e| e.pole_order(s) > p))
    }

    /// `gr^F d − gr^F(df∧)` on `Ω ⊗ gr^F O[*D]`, applied term by term: each
    /// coefficient term of level `q` keeps the level-`q+1` part of its `d`
    /// and the level-`q` part of its product with `df`.
    pub fn graded_twisted_operator(&self, f: &Polynomial) -> Result<DifferentialForm> {
        self.graded_twisted_operator_with(f, PoleConvention::PerComponent)
    }

    /// As [`Self::graded_twisted_operator`] with levels measured by `convention`.
    pub fn graded_twisted_operator_with(&self, f: &Polynomial, convention: PoleConvention) -> Result<DifferentialForm> {
        self.require_meromorphic()?;
        let s = self.ctx.divisor;
        let level = |e: &Exponents| convention.level(e, s);
        let ring = self.ctx.coefficient_ring();
        let mut out = Self::zero(self.ctx, self.degree + 1);
        for (idx, g) in &self.components {
            for (e, c) in g.terms() {
                let q = level(e);
                let term = DifferentialForm {
                    ctx: self.ctx,
                    degree: self.degree,
                    components: BTreeMap::from([(idx.clone(), ring.term(e.clone(), c.clone()))]),
                };
                let d = term.exterior_derivative().filter_terms(|m| level(m) == q + 1);
                let w = term.wedge_df(f)?.filter_terms(|m| level(m) == q);
                out = out.add(&d)?.sub(&w)?;
            }
        }
        Ok(out)
    }

    fn require_meromorphic(&self) -> Result<()> {
        if self.ctx.mode != CoefficientMode::Meromorphic {
            return Err(Error::InvalidForm("graded operators need meromorphic mode".into()));
        }
        Ok(())
    }

    /// Drops coefficient terms whose exponent vector fails `keep`.
    pub fn filter_terms<F: Fn(&Exponents) -> bool>(&self, keep: F) -> DifferentialForm {
        let mut out = Self::zero(self.ctx, self.degree);
        for (i, g) in &self.components {
            out.add_component(i.clone(), g.filter_terms(&keep));
        }
        out
    }

    /// Rewrites a log form as a meromorphic one, `dlog x_i ↦ x_i⁻¹ dx_i`.
    pub fn log_to_meromorphic(&self) -> Result<DifferentialForm> {
        if self.ctx.mode != CoefficientMode::Log {
            return Err(Error::InvalidForm("expected a log form".into()));
        }
        let ctx = FormContext::meromorphic(self.ctx.nvars, self.ctx.divisor)?;
        let ring = ctx.coefficient_ring();
        let mut out = Self::zero(ctx, self.degree);
        for (idx, g) in &self.components {
            let mut shift = Exponents::zeros(self.ctx.nvars);
            for &i in idx.as_slice() {
                if self.ctx.divisor.contains(i) {
                    shift = shift.with(i, -1);
                }
            }
            let g = g.in_ring(ring)?.mul_term(&shift, &Rational::from_integer(1.into()));
            out.add_component(idx.clone(), g);
        }
        Ok(out)
    }

    /// Text form such as `(2*x) * dx^dlog y`.
    pub fn render(&self, names: &[String]) -> String {
        if self.components.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(idx, g)| {
                let coef = format!("({})", render(g, names, &MonomialOrder::DegRevLex));
                if idx.is_empty() {
                    coef
                } else {
                    let cov: Vec<String> = idx
                        .as_slice()
                        .iter()
                        .map(|&i| {
                            if self.ctx.is_log_index(i) {
                                format!("dlog {}", names[i])
                            } else {
                                format!("d{}", names[i])
                            }
                        })
                        .collect();
                    format!("{coef} * {}", cov.join("^"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// How the pole level of a monomial is read off its exponents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoleConvention {
    /// Largest pole order along any single component.
    #[default]
    PerComponent,
    /// Sum of the pole orders along all components.
    Total,
}

impl PoleConvention {
    pub fn level(self, e: &Exponents, divisor: VarSet) -> u32 {
        match self {
            PoleConvention::PerComponent => e.pole_order(divisor),
            PoleConvention::Total => e.total_pole_order(divisor),
        }
    }
}

/// Smallest `k` with `g ∈ F_k`: the largest pole order of any term along any
/// divisor component.
pub fn pole_filtration_level(g: &Polynomial) -> Result<u32> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let s = g.ring().divisor();
    Ok(g.terms().map(|(e, _)| e.pole_order(s)).max().unwrap_or(0))
}
