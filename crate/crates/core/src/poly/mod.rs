//! Exact rational scalars, exponent vectors and sparse Laurent polynomials.
//!
//! A [`Polynomial`] lives in a [`Ring`]: a number of variables together with
//! a divisor set `S` of variables that may carry negative exponents. With
//! `S = ∅` this is the ordinary polynomial ring `ℚ[x1, …, xn]`; otherwise it
//! is `ℚ[x1, …, xn][x_i⁻¹ : i ∈ S]`, the functions with poles along the
//! coordinate hyperplanes `{x_i = 0}`, `i ∈ S`.

mod order;
mod weights;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use order::MonomialOrder;
pub use weights::{find_quasi_homogeneous_weights, WeightedDegree};

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A subset of `{0, …, 63}`; iteration is in increasing order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct VarSet(u64);

impl VarSet {
    pub const fn empty() -> Self {
        VarSet(0)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = VarSet(0);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < 64, "variable index {i} out of range");
        self.0 |= 1 << i;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 & (1 << i) != 0)
    }
}

/// Per-variable integer exponents of a Laurent monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponents(Vec<i32>);

impl Exponents {
    pub fn new(exps: Vec<i32>) -> Self {
        Exponents(exps)
    }

    pub fn zeros(n: usize) -> Self {
        Exponents(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponents(e)
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i32 {
        self.0[i]
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn weighted_degree(&self, weights: &[u64]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w as i64)
            .sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Largest pole order over the given variables.
    pub fn pole_order(&self, divisor: VarSet) -> u32 {
        divisor
            .iter()
            .filter(|&i| i < self.0.len())
            .map(|i| (-self.0[i]).max(0) as u32)
            .max()
            .unwrap_or(0)
    }

    /// Sum of the pole orders over the given variables.
    pub fn total_pole_order(&self, divisor: VarSet) -> u32 {
        divisor.iter().filter(|&i| i < self.0.len()).map(|i| (-self.0[i]).max(0) as u32).sum()
    }

    pub fn add(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn with(&self, i: usize, delta: i32) -> Exponents {
        let mut e = self.0.clone();
        e[i] += delta;
        Exponents(e)
    }

    /// `self | other` for monomials with nonnegative exponents.
    pub fn divides(&self, other: &Exponents) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Exponents) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Ambient ring context: number of variables and divisor set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    nvars: usize,
    divisor: VarSet,
}

impl Ring {
    pub fn new(nvars: usize, divisor: VarSet) -> Result<Self> {
        if nvars > 64 {
            return Err(Error::InvalidRing(format!("{nvars} variables exceeds the limit of 64")));
        }
        if let Some(m) = divisor.max_index() {
            if m >= nvars {
                return Err(Error::InvalidRing(format!(
                    "divisor variable index {m} outside of {nvars} variables"
                )));
            }
        }
        Ok(Ring { nvars, divisor })
    }

    pub fn polynomial(nvars: usize) -> Self {
        Ring::new(nvars, VarSet::empty()).expect("at most 64 variables")
    }

    pub fn nvars(self) -> usize {
        self.nvars
    }

    pub fn divisor(self) -> VarSet {
        self.divisor
    }

    pub fn is_laurent(self) -> bool {
        !self.divisor.is_empty()
    }

    /// Same variables, no divisor.
    pub fn without_divisor(self) -> Ring {
        Ring { nvars: self.nvars, divisor: VarSet::empty() }
    }

    pub fn with_divisor(self, divisor: VarSet) -> Result<Ring> {
        Ring::new(self.nvars, divisor)
    }

    pub fn zero(self) -> Polynomial {
        Polynomial { ring: self, terms: BTreeMap::new() }
    }

    pub fn one(self) -> Polynomial {
        self.constant(Rational::one())
    }

    pub fn constant(self, c: Rational) -> Polynomial {
        self.term(Exponents::zeros(self.nvars), c)
    }

    pub fn var(self, i: usize) -> Polynomial {
        assert!(i < self.nvars, "variable index {i} out of range");
        self.term(Exponents::unit(self.nvars, i), Rational::one())
    }

    /// A single term; panics on a negative exponent outside the divisor.
    pub fn term(self, exps: Exponents, c: Rational) -> Polynomial {
        self.try_term(exps, c).expect("valid monomial")
    }

    pub fn try_term(self, exps: Exponents, c: Rational) -> Result<Polynomial> {
        self.check_exponents(&exps)?;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Ok(Polynomial { ring: self, terms })
    }

    pub fn from_terms<I>(self, terms: I) -> Result<Polynomial>
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = self.zero();
        for (e, c) in terms {
            self.check_exponents(&e)?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn check_exponents(self, exps: &Exponents) -> Result<()> {
        if exps.len() != self.nvars {
            return Err(Error::RingMismatch(format!(
                "exponent vector of length {} in a ring with {} variables",
                exps.len(),
                self.nvars
            )));
        }
        for (i, &e) in exps.as_slice().iter().enumerate() {
            if e < 0 && !self.divisor.contains(i) {
                return Err(Error::NegativeExponent(i));
            }
        }
        Ok(())
    }
}

/// Sparse Laurent polynomial with exact rational coefficients.
///
/// Terms are kept in a map keyed by exponent vector; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Exponents, Rational>,
}

impl Polynomial {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Exponents::is_zero)
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Exponents::is_nonnegative)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponents) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Exponents::degree).max()
    }

    pub fn check_same_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, other.ring)))
        }
    }

    /// Reinterprets the polynomial in another ring with the same number of
    /// variables; fails if a negative exponent would leave the divisor.
    pub fn in_ring(&self, ring: Ring) -> Result<Polynomial> {
        if ring.nvars != self.ring.nvars {
            return Err(Error::RingMismatch(format!(
                "cannot move a polynomial in {} variables to {}",
                self.ring.nvars, ring.nvars
            )));
        }
        ring.from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c.clone())))
    }

    pub(crate) fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_ring(other)?;
        let mut out = self.ring.zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by `c · x^e`; panics if the result leaves the ring.
    pub fn mul_term(&self, e: &Exponents, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms: BTreeMap<_, _> = self.terms.iter().map(|(m, v)| (m.add(e), v * c)).collect();
        let p = Polynomial { ring: self.ring, terms };
        debug_assert!(p.terms.keys().all(|k| p.ring.check_exponents(k).is_ok()));
        p
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i` (0-based).
    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        assert!(i < self.ring.nvars, "variable index {i} out of range");
        let mut out = self.ring.zero();
        for (e, c) in &self.terms {
            let a = e.get(i);
            if a != 0 {
                out.add_term(e.with(i, -1), c * rat(a as i64));
            }
        }
        out
    }

    /// Removes every term whose exponent vector fails `keep`.
    pub fn filter_terms<F: Fn(&Exponents) -> bool>(&self, keep: F) -> Polynomial {
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `x_i ↦ images[i]`. Requires nonnegative exponents.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars {
            return Err(Error::InvalidInput(format!(
                "substitution needs {} images, got {}",
                self.ring.nvars,
                images.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.ring,
            None => return Ok(self.clone()),
        };
        let mut out = target.zero();
        for (e, c) in &self.terms {
            if !e.is_nonnegative() {
                return Err(Error::LaurentInput);
            }
            let mut t = target.constant(c.clone());
            for (i, &a) in e.as_slice().iter().enumerate() {
                if a > 0 {
                    images[i].check_same_ring(&t)?;
                    t = &t * &images[i].pow(a as u32);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Multiplies through by the least common multiple of denominators and
    /// divides by the content, so that all coefficients are coprime integers.
    pub fn primitive_integer_part(&self) -> Polynomial {
        use num_integer::Integer;
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut gcd = BigInt::zero();
        for c in self.terms.values() {
            let v = (c * Rational::from_integer(lcm.clone())).to_integer();
            gcd = gcd.gcd(&v);
        }
        if gcd.is_zero() {
            return self.clone();
        }
        let factor = Rational::new(lcm, gcd);
        self.scale(&factor)
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::parse::default_names(self.nvars());
        f.write_str(&crate::parse::render(self, &names, &MonomialOrder::DegRevLex))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (Ring, Polynomial, Polynomial) {
        let r = Ring::polynomial(2);
        (r, r.var(0), r.var(1))
    }

    #[test]
    fn power_rule() {
        let (_, x, y) = xy();
        let p = &(&x * &x) * &y;
        let d = p.partial_derivative(0);
        assert_eq!(d, (&x * &y).scale(&rat(2)));
    }

    #[test]
    fn derivative_of_negative_power() {
        let r = Ring::new(1, VarSet::from_indices([0])).unwrap();
        let inv = r.term(Exponents::new(vec![-1]), rat(1));
        let expected = r.term(Exponents::new(vec![-2]), rat(-1));
        assert_eq!(inv.partial_derivative(0), expected);
        assert_eq!(inv.partial_derivative(0).ring(), r);
    }

    #[test]
    fn derivative_of_constant() {
        let r = Ring::polynomial(2);
        assert!(r.constant(rat(5)).partial_derivative(0).is_zero());
    }

    #[test]
    fn negative_exponent_needs_divisor() {
        let r = Ring::polynomial(2);
        assert_eq!(
            r.try_term(Exponents::new(vec![-1, 0]), rat(1)),
            Err(Error::NegativeExponent(0))
        );
    }

    #[test]
    fn mixing_divisors_is_an_error() {
        let a = Ring::polynomial(1).var(0);
        let b = Ring::new(1, VarSet::from_indices([0])).unwrap().var(0);
        assert!(matches!(a.try_add(&b), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let (_, x, y) = xy();
        let p = &(&x + &y) - &x;
        assert_eq!(p, y);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn pow_expands() {
        let (r, x, y) = xy();
        let s = &x + &y;
        let sq = s.pow(2);
        let expected = &(&(&x * &x) + &(&x * &y).scale(&rat(2))) + &(&y * &y);
        assert_eq!(sq, expected);
        assert_eq!(s.pow(0), r.one());
    }

    #[test]
    fn primitive_part() {
        let (_, x, y) = xy();
        let p = &x.scale(&ratio(3, 2)) + &y.scale(&ratio(9, 4));
        let q = p.primitive_integer_part();
        assert_eq!(q, &x.scale(&rat(2)) + &y.scale(&rat(3)));
    }
}
