//! Exact linear algebra over ℚ.
//!
//! Ranks are computed by fraction-free elimination over the integers (dense
//! Bareiss for [`RationalMatrix`], sparse primitive-row elimination for
//! [`SparseMatrix`]) and cross-checked against the rank modulo a random
//! 61-bit prime. The modular rank never exceeds the rational one; when they
//! disagree a second prime is tried, and a persistent disagreement is
//! reported as [`Error::Internal`].

use std::collections::HashMap;
use std::mem;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::Rational;

/// Dense matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![vec![Rational::zero(); cols]; rows] }
    }

    /// Panics on ragged input.
    pub fn from_rows(data: Vec<Vec<Rational>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        RationalMatrix { rows, cols, data }
    }

    pub fn from_integers(data: &[Vec<i64>]) -> Self {
        Self::from_rows(
            data.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = RationalMatrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.data[j][i] = v.clone();
            }
        }
        t
    }

    /// Appends a column.
    pub fn with_column(&self, col: &[Rational]) -> RationalMatrix {
        assert_eq!(col.len(), self.rows);
        let data = self
            .data
            .iter()
            .zip(col)
            .map(|(r, c)| {
                let mut r = r.clone();
                r.push(c.clone());
                r
            })
            .collect();
        RationalMatrix { rows: self.rows, cols: self.cols + 1, data }
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].recip();
            for v in self.data[r].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && !self.data[i][c].is_zero() {
                    let factor = self.data[i][c].clone();
                    for (v, pv) in self.data[i].iter_mut().zip(&pivot_row) {
                        *v -= &factor * pv;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// A basis of `{v : M v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Rational::zero(); self.cols];
                v[fc] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.data[r][fc].clone();
                }
                v
            })
            .collect()
    }

    /// Rows scaled to integer vectors (rank-preserving).
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.data.iter().map(|r| clear_denominators(r.iter())).collect()
    }
}

fn clear_denominators<'a, I>(entries: I) -> Vec<BigInt>
where
    I: Iterator<Item = &'a Rational> + Clone,
{
    let lcm = entries.clone().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    entries
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}

/// Rank over ℚ by fraction-free Bareiss elimination, cross-checked modulo
/// random primes.
pub fn exact_rank(m: &RationalMatrix) -> Result<usize> {
    let rank = bareiss_rank(m.integer_rows(), m.cols);
    cross_check(rank, |p| {
        let rows: Option<Vec<Vec<(usize, u64)>>> = m
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| reduce_mod(v, p).map(|x| (j, x)))
                    .collect()
            })
            .collect();
        rows.map(|rows| modular_sparse_rank(rows, p))
    })
}

/// Fraction-free Gaussian elimination: every intermediate entry is a minor of
/// the input, so the division by the previous pivot is exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for j in (c + 1)..cols {
                let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Sparse matrix with rational entries; each row is sorted by column.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, Rational)>] {
        &self.rows
    }

    /// Adds a row given as `(column, value)` pairs in any order; zero entries
    /// and duplicates are merged.
    pub fn push_row(&mut self, mut entries: Vec<(usize, Rational)>) {
        entries.sort_by_key(|e| e.0);
        let mut row: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!(c < self.ncols, "column {c} out of range");
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| !e.1.is_zero());
        self.rows.push(row);
    }

    pub fn to_dense(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows.len(), self.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    /// Exact rank, cross-checked modulo random primes.
    pub fn rank(&self) -> Result<usize> {
        let int_rows: Vec<Vec<(usize, BigInt)>> = self
            .rows
            .iter()
            .map(|r| {
                let ints = clear_denominators(r.iter().map(|e| &e.1));
                r.iter().map(|e| e.0).zip(ints).collect()
            })
            .collect();
        let rank = sparse_integer_rank(int_rows);
        cross_check(rank, |p| self.modular_rank(p))
    }

    /// Rank modulo `p`, or `None` if `p` divides a denominator.
    pub fn modular_rank(&self, p: u64) -> Option<usize> {
        let rows: Option<Vec<Vec<(usize, u64)>>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(j, v)| reduce_mod(v, p).map(|x| (*j, x))).collect())
            .collect();
        rows.map(|rows| modular_sparse_rank(rows, p))
    }
}

fn cross_check<F>(rank: usize, modular: F) -> Result<usize>
where
    F: Fn(u64) -> Option<usize>,
{
    let mut rng = rand::thread_rng();
    let mut agreed_once = false;
    for _ in 0..2 {
        let r = loop {
            if let Some(r) = modular(random_prime(&mut rng)) {
                break r;
            }
        };
        if r == rank {
            agreed_once = true;
            break;
        }
        if r > rank {
            return Err(Error::Internal(format!(
                "modular rank {r} exceeds exact rank {rank}"
            )));
        }
    }
    if agreed_once {
        Ok(rank)
    } else {
        Err(Error::Internal(format!(
            "exact rank {rank} disagrees with two modular ranks"
        )))
    }
}

/// Incremental echelon form over ℤ. Each stored row is primitive and keyed by
/// its largest column; incoming rows are reduced against the stored rows by
/// integer cross-multiplication followed by content removal.
fn sparse_integer_rank(rows: Vec<Vec<(usize, BigInt)>>) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
    for row in rows {
        let mut row = make_primitive(row);
        while let Some((lead, _)) = row.last() {
            match pivots.get(lead) {
                Some(p) => row = make_primitive(eliminate(&row, p)),
                None => {
                    pivots.insert(*lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `a·row − b·pivot` where `a`, `b` cancel the common leading column.
fn eliminate(row: &[(usize, BigInt)], pivot: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let r_lead = &row.last().expect("nonempty").1;
    let p_lead = &pivot.last().expect("nonempty").1;
    let g = r_lead.gcd(p_lead);
    let a = p_lead / &g;
    let b = r_lead / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    let (rn, pn) = (row.len() - 1, pivot.len() - 1);
    while i < rn || j < pn {
        let take_row = j >= pn || (i < rn && row[i].0 < pivot[j].0);
        let take_piv = i >= rn || (j < pn && pivot[j].0 < row[i].0);
        if take_row {
            out.push((row[i].0, &a * &row[i].1));
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(&b * &pivot[j].1)));
            j += 1;
        } else {
            let v = &a * &row[i].1 - &b * &pivot[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn make_primitive(mut row: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    row.retain(|e| !e.1.is_zero());
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            return row;
        }
    }
    if !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v = mem::take(v) / &g;
        }
    }
    row
}

fn modular_sparse_rank(rows: Vec<Vec<(usize, u64)>>, p: u64) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for mut row in rows {
        row.sort_by_key(|e| e.0);
        row.retain(|e| e.1 != 0);
        while let Some(&(lead, lv)) = row.last() {
            match pivots.get(&lead) {
                Some(piv) => {
                    // pivot rows are monic
                    let mut out = Vec::with_capacity(row.len() + piv.len());
                    let (mut i, mut j) = (0, 0);
                    let (rn, pn) = (row.len() - 1, piv.len() - 1);
                    while i < rn || j < pn {
                        if j >= pn || (i < rn && row[i].0 < piv[j].0) {
                            out.push(row[i]);
                            i += 1;
                        } else if i >= rn || piv[j].0 < row[i].0 {
                            out.push((piv[j].0, sub_mod(0, mul_mod(lv, piv[j].1, p), p)));
                            j += 1;
                        } else {
                            let v = sub_mod(row[i].1, mul_mod(lv, piv[j].1, p), p);
                            if v != 0 {
                                out.push((row[i].0, v));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    row = out;
                }
                None => {
                    let inv = inv_mod(lv, p);
                    for e in row.iter_mut() {
                        e.1 = mul_mod(e.1, inv, p);
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Rank of a dense integer-valued matrix modulo `p`.
pub fn modular_rank(m: &RationalMatrix, p: u64) -> Option<usize> {
    let rows: Option<Vec<Vec<(usize, u64)>>> = m
        .data
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| reduce_mod(v, p).map(|x| (j, x)))
                .collect()
        })
        .collect();
    rows.map(|rows| modular_sparse_rank(rows, p))
}

pub fn reduce_mod(v: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = v.numer().mod_floor(&pb).to_u64().expect("reduced");
    let d = v.denom().mod_floor(&pb).to_u64().expect("reduced");
    (d != 0).then(|| mul_mod(n, inv_mod(d, p), p))
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// A uniformly drawn prime in `[2^60, 2^61)`.
pub fn random_prime<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let c = rng.gen_range((1u64 << 60)..(1u64 << 61)) | 1;
        if is_prime(c) {
            return c;
        }
    }
}
