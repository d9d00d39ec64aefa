use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rat, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightedDegree {
    pub degree: i64,
    pub homogeneous: bool,
}

impl Polynomial {
    /// Maximum weighted degree over the terms, and whether every term attains it.
    pub fn weighted_degree(&self, weights: &[u64]) -> Result<WeightedDegree> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if weights.len() != self.nvars() || weights.contains(&0) {
            return Err(Error::InvalidInput(format!(
                "need {} positive weights, got {weights:?}",
                self.nvars()
            )));
        }
        let degs: Vec<i64> = self.terms().map(|(e, _)| e.weighted_degree(weights)).collect();
        let degree = *degs.iter().max().expect("nonzero");
        Ok(WeightedDegree { degree, homogeneous: degs.iter().all(|&d| d == degree) })
    }
}

/// Positive integer weights making `p` weighted-homogeneous of positive
/// degree, if any exist.
///
/// The constraints "all exponent vectors share one weighted degree" form a
/// homogeneous linear system; a positive point of its null space is searched
/// over small integer values of the free variables and scaled to a primitive
/// integer vector.
pub fn find_quasi_homogeneous_weights(p: &Polynomial) -> Option<Vec<u64>> {
    if p.is_zero() || p.is_constant() || !p.is_polynomial() {
        return None;
    }
    let n = p.nvars();
    let exps: Vec<_> = p.terms().map(|(e, _)| e.clone()).collect();
    let base = &exps[0];
    let rows: Vec<Vec<Rational>> = exps[1..]
        .iter()
        .map(|e| e.sub(base).as_slice().iter().map(|&d| rat(d as i64)).collect())
        .collect();
    let basis = if rows.is_empty() {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        RationalMatrix::from_rows(rows).nullspace()
    };
    if basis.is_empty() {
        return None;
    }
    // Try coefficient vectors for the null-space basis in increasing size.
    let k = basis.len();
    for bound in 1..=8i64 {
        let mut coeffs = vec![-bound; k];
        loop {
            if coeffs.iter().any(|c| c.abs() == bound) {
                let mut v = vec![Rational::zero(); n];
                for (c, b) in coeffs.iter().zip(&basis) {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi += bi * rat(*c);
                    }
                }
                if v.iter().all(|x| x.is_positive()) {
                    let w = primitive_weights(&v);
                    let d = p.weighted_degree(&w).ok()?;
                    if d.homogeneous && d.degree > 0 {
                        return Some(w);
                    }
                }
            }
            // odometer increment over [-bound, bound]^k
            let mut i = 0;
            while i < k {
                if coeffs[i] < bound {
                    coeffs[i] += 1;
                    break;
                }
                coeffs[i] = -bound;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    None
}

fn primitive_weights(v: &[Rational]) -> Vec<u64> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter().map(|x| (x / &g).to_u64().expect("small weights")).collect()
}
