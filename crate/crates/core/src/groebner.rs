//! Buchberger's algorithm, normal forms and staircase quotient dimensions.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Exponents, MonomialOrder, Polynomial, Rational, Ring};

/// Terms sorted increasingly under the active order; the leading term is last.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Sorted {
    terms: Vec<(Exponents, Rational)>,
}

impl Sorted {
    fn from_poly(p: &Polynomial, order: &MonomialOrder) -> Self {
        let mut terms: Vec<_> = p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&a.0, &b.0));
        Sorted { terms }
    }

    fn to_poly(&self, ring: Ring) -> Polynomial {
        ring.from_terms(self.terms.iter().cloned()).expect("polynomial terms")
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Exponents {
        &self.terms.last().expect("nonzero").0
    }

    fn lc(&self) -> &Rational {
        &self.terms.last().expect("nonzero").1
    }

    fn make_monic(&mut self) {
        if let Some(lc) = self.terms.last().map(|t| t.1.clone()) {
            if !lc.is_one() {
                let inv = lc.recip();
                for t in self.terms.iter_mut() {
                    t.1 *= &inv;
                }
            }
        }
    }

    /// `self − c·x^shift·g`.
    fn sub_shifted(&self, c: &Rational, shift: &Exponents, g: &Sorted, order: &MonomialOrder) -> Sorted {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().map(|(e, v)| (e.add(shift), v * c)).peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            };
            match ord {
                Ordering::Less => out.push(a.next().expect("peeked").clone()),
                Ordering::Greater => {
                    let (e, v) = b.next().expect("peeked");
                    out.push((e, -v));
                }
                Ordering::Equal => {
                    let (e, v) = a.next().expect("peeked");
                    let (_, w) = b.next().expect("peeked");
                    let d = v - w;
                    if !d.is_zero() {
                        out.push((e.clone(), d));
                    }
                }
            }
        }
        Sorted { terms: out }
    }
}

/// Full reduction of `p` modulo `basis`: no term of the result is divisible
/// by a leading monomial of the basis.
fn reduce(p: &Sorted, basis: &[Sorted], order: &MonomialOrder) -> Sorted {
    let mut p = p.clone();
    let mut rem: Vec<(Exponents, Rational)> = Vec::new();
    while let Some((lead, lc)) = p.terms.last().cloned() {
        match basis.iter().find(|g| g.lm().divides(&lead)) {
            Some(g) => {
                let c = &lc / g.lc();
                let shift = lead.sub(g.lm());
                p = p.sub_shifted(&c, &shift, g, order);
            }
            None => {
                p.terms.pop();
                rem.push((lead, lc));
            }
        }
    }
    rem.reverse();
    Sorted { terms: rem }
}

fn s_poly(f: &Sorted, g: &Sorted, order: &MonomialOrder) -> Sorted {
    let l = f.lm().lcm(g.lm());
    let sf = Sorted { terms: Vec::new() }.sub_shifted(&-f.lc().recip(), &l.sub(f.lm()), f, order);
    sf.sub_shifted(&g.lc().recip(), &l.sub(g.lm()), g, order)
}

/// Reduced Gröbner basis of a polynomial ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    elements: Vec<Sorted>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Monic generators, sorted by decreasing leading monomial.
    pub fn generators(&self) -> Vec<Polynomial> {
        self.elements.iter().map(|g| g.to_poly(self.ring)).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Minimal generators of the leading-term ideal.
    pub fn leading_monomials(&self) -> Vec<Exponents> {
        self.elements.iter().map(|g| g.lm().clone()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elements.iter().any(|g| g.lm().is_zero())
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        self.check_input(p)?;
        Ok(reduce(&Sorted::from_poly(p, &self.order), &self.elements, &self.order).to_poly(self.ring))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Every pairwise S-polynomial reduces to zero.
    pub fn verify_s_pairs(&self) -> bool {
        let n = self.elements.len();
        (0..n).all(|i| {
            ((i + 1)..n).all(|j| {
                let s = s_poly(&self.elements[i], &self.elements[j], &self.order);
                reduce(&s, &self.elements, &self.order).is_zero()
            })
        })
    }

    /// No term of any element is divisible by the leading monomial of
    /// another, and all leading coefficients are one.
    pub fn is_reduced(&self) -> bool {
        self.elements.iter().enumerate().all(|(i, g)| {
            g.lc().is_one()
                && g.terms.iter().all(|(e, _)| {
                    self.elements
                        .iter()
                        .enumerate()
                        .all(|(j, h)| j == i || !h.lm().divides(e))
                })
        })
    }

    pub fn quotient_dimension(&self) -> QuotientDimension {
        let n = self.ring.nvars();
        if self.is_unit_ideal() {
            return QuotientDimension::Finite { dim: 0, basis: Vec::new() };
        }
        let lms = self.leading_monomials();
        let mut bounds = Vec::with_capacity(n);
        for i in 0..n {
            let pure = lms
                .iter()
                .filter(|m| m.as_slice().iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|m| m.get(i))
                .min();
            match pure {
                Some(b) => bounds.push(b),
                None => return QuotientDimension::Infinite,
            }
        }
        let mut basis = Vec::new();
        let mut cur = vec![0i32; n];
        loop {
            let e = Exponents::new(cur.clone());
            if !lms.iter().any(|m| m.divides(&e)) {
                basis.push(e);
            }
            // odometer over the box below the pure powers
            let mut i = 0;
            while i < n {
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        basis.sort_by(|a, b| self.order.cmp(a, b));
        QuotientDimension::Finite { dim: basis.len(), basis }
    }

    fn check_input(&self, p: &Polynomial) -> Result<()> {
        p.check_same_ring(&self.ring.zero())?;
        if !p.is_polynomial() {
            return Err(Error::LaurentInput);
        }
        Ok(())
    }
}

/// Dimension of `ℚ[x]/I` as a vector space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientDimension {
    /// `basis` lists the standard monomials in increasing order.
    Finite { dim: usize, basis: Vec<Exponents> },
    Infinite,
}

impl QuotientDimension {
    pub fn is_finite(&self) -> bool {
        matches!(self, QuotientDimension::Finite { .. })
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            QuotientDimension::Finite { dim, .. } => Some(*dim),
            QuotientDimension::Infinite => None,
        }
    }

    pub fn basis(&self) -> &[Exponents] {
        match self {
            QuotientDimension::Finite { basis, .. } => basis,
            QuotientDimension::Infinite => &[],
        }
    }
}

fn check_generators(gens: &[Polynomial]) -> Result<Ring> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let ring = first.ring();
    if ring.is_laurent() {
        return Err(Error::LaurentInput);
    }
    for g in gens {
        g.check_same_ring(first)?;
        if !g.is_polynomial() {
            return Err(Error::LaurentInput);
        }
    }
    Ok(ring)
}

/// Reduced Gröbner basis by Buchberger's algorithm with the coprime and
/// chain criteria and the normal selection strategy.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> Result<GroebnerBasis> {
    let ring = check_generators(gens)?;
    let mut basis: Vec<Sorted> = Vec::new();
    for g in gens {
        let mut s = Sorted::from_poly(g, order);
        if !s.is_zero() {
            s.make_monic();
            basis.push(s);
        }
    }
    if basis.is_empty() {
        // the zero ideal
        return Ok(GroebnerBasis { ring, order: order.clone(), elements: Vec::new() });
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, &(i1, j1)), (_, &(i2, j2))| {
                let l1 = basis[i1].lm().lcm(basis[j1].lm());
                let l2 = basis[i2].lm().lcm(basis[j2].lm());
                order.cmp(&l1, &l2).then((j1, i1).cmp(&(j2, i2)))
            })
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(idx);
        let (lm_i, lm_j) = (basis[i].lm(), basis[j].lm());
        if lm_i.is_coprime(lm_j) {
            continue;
        }
        let l = lm_i.lcm(lm_j);
        let has = |a: usize, b: usize| pairs.contains(&(a.min(b), a.max(b)));
        let chain = (0..basis.len())
            .any(|k| k != i && k != j && basis[k].lm().divides(&l) && !has(i, k) && !has(j, k));
        if chain {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j], order), &basis, order);
        if !r.is_zero() {
            let mut r = r;
            r.make_monic();
            let m = basis.len();
            basis.push(r);
            for k in 0..m {
                pairs.push((k, m));
            }
        }
    }
    Ok(GroebnerBasis { ring, order: order.clone(), elements: interreduce(basis, order) })
}

fn interreduce(basis: Vec<Sorted>, order: &MonomialOrder) -> Vec<Sorted> {
    // minimal basis: drop elements whose leading monomial is divisible by an
    // earlier or strictly smaller one
    let mut minimal: Vec<Sorted> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lm().divides(g.lm()) && (h.lm() != g.lm() || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Sorted> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let mut r = reduce(&minimal[i], &others, order);
        r.make_monic();
        reduced.push(r);
    }
    reduced.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    reduced
}

pub fn normal_form(p: &Polynomial, basis: &GroebnerBasis) -> Result<Polynomial> {
    basis.normal_form(p)
}

pub fn quotient_dimension(gens: &[Polynomial], order: &MonomialOrder) -> Result<QuotientDimension> {
    Ok(buchberger(gens, order)?.quotient_dimension())
}

pub fn is_zero_dimensional(gens: &[Polynomial], order: &MonomialOrder) -> Result<bool> {
    Ok(quotient_dimension(gens, order)?.is_finite())
}

pub fn ideal_membership(p: &Polynomial, gens: &[Polynomial], order: &MonomialOrder) -> Result<bool> {
    if p.is_zero() {
        p.check_same_ring(gens.first().ok_or(Error::EmptyGenerators)?)?;
        return Ok(true);
    }
    let g = buchberger(gens, order)?;
    g.contains(p)
}
