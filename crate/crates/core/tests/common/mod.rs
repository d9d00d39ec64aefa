#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use tdw_core::forms::{DifferentialForm, FormContext, IndexSet};
use tdw_core::parse::{parse_polynomial, VarDecl};
use tdw_core::poly::{Exponents, Polynomial, Rational, Ring};

pub fn poly(text: &str, vars: &[&str]) -> Polynomial {
    parse_polynomial(text, &VarDecl::plain(vars).unwrap()).unwrap()
}

pub fn poly_with_divisor(text: &str, vars: &[&str], divisor: &[&str]) -> (Polynomial, VarDecl) {
    let decl = VarDecl::new(vars, divisor).unwrap();
    (parse_polynomial(text, &decl).unwrap(), decl)
}

/// Rank by plain Gaussian elimination over Q.
pub fn oracle_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let factor = &rows[r][c] / &pivot;
            for k in c..ncols {
                let v = &rows[rank][k] * &factor;
                rows[r][k] -= v;
            }
        }
        rank += 1;
    }
    rank
}

/// Exponent vectors `a ≥ 0` with `Σ a_i w_i ≤ bound`.
pub fn monomials_up_to(weights: &[u64], bound: i64) -> Vec<Vec<i32>> {
    fn go(w: &[u64], bound: i64, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == w.len() {
            out.push(cur.clone());
            return;
        }
        let wi = w[cur.len()] as i64;
        let mut a = 0;
        while a * wi <= bound {
            cur.push(a as i32);
            go(w, bound - a * wi, cur, out);
            cur.pop();
            a += 1;
        }
    }
    let mut out = Vec::new();
    if bound >= 0 {
        go(weights, bound, &mut Vec::new(), &mut out);
    }
    out
}

fn wdeg(e: &[i32], w: &[u64]) -> i64 {
    e.iter().zip(w).map(|(&a, &wi)| a as i64 * wi as i64).sum()
}

fn max_wdeg(g: &Polynomial, w: &[u64]) -> i64 {
    g.terms().map(|(e, _)| wdeg(e.as_slice(), w)).max().unwrap_or(0)
}

/// Rows `m · g` for all monomials `m` keeping weighted degree ≤ bound,
/// expressed over the monomials of weighted degree ≤ bound.
fn macaulay_rows(gens: &[Polynomial], w: &[u64], bound: i64) -> (Vec<Vec<i32>>, Vec<Vec<Rational>>) {
    let cols = monomials_up_to(w, bound);
    let index: std::collections::HashMap<&Vec<i32>, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        for m in monomials_up_to(w, bound - max_wdeg(g, w)) {
            let mut row = vec![Rational::zero(); cols.len()];
            for (e, c) in g.terms() {
                let prod: Vec<i32> = e.as_slice().iter().zip(&m).map(|(a, b)| a + b).collect();
                row[index[&prod]] += c;
            }
            rows.push(row);
        }
    }
    (cols, rows)
}

/// `dim Q[x]_{≤B} / span{m·g}` for weighted-homogeneous-compatible
/// generators: the quotient dimension once the bound passes the socle.
pub fn oracle_quotient_dim(gens: &[Polynomial], w: &[u64], bound: i64) -> usize {
    let (cols, rows) = macaulay_rows(gens, w, bound);
    cols.len() - oracle_rank(rows)
}

/// True when `p` is a combination `Σ h_i g_i` with every `h_i g_i` of
/// total degree at most `bound`.
pub fn oracle_member(p: &Polynomial, gens: &[Polynomial], bound: i64) -> bool {
    let w = vec![1; p.nvars()];
    if p.is_zero() {
        return true;
    }
    if max_wdeg(p, &w) > bound {
        return false;
    }
    let (cols, rows) = macaulay_rows(gens, &w, bound);
    let index: std::collections::HashMap<&Vec<i32>, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut target = vec![Rational::zero(); cols.len()];
    for (e, c) in p.terms() {
        target[index[&e.as_slice().to_vec()]] += c;
    }
    let r = oracle_rank(rows.clone());
    let mut with = rows;
    with.push(target);
    oracle_rank(with) == r
}

pub fn random_rational<R: Rng>(rng: &mut R, max: i64) -> Rational {
    let n = rng.gen_range(-max..=max);
    let d = rng.gen_range(1..=max.max(1));
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Random polynomial with up to `terms` terms, exponents in
/// `lo..=hi` on divisor variables and `0..=hi` elsewhere.
pub fn random_polynomial<R: Rng>(rng: &mut R, ring: Ring, terms: usize, hi: i32, lo: i32, max_total: i64) -> Polynomial {
    let n = ring.nvars();
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(0..=terms) {
        let e: Vec<i32> = (0..n)
            .map(|i| if ring.divisor().contains(i) { rng.gen_range(lo..=hi) } else { rng.gen_range(0..=hi) })
            .collect();
        if e.iter().map(|&a| a.max(0) as i64).sum::<i64>() > max_total {
            continue;
        }
        let mut c = random_rational(rng, 5);
        if c.is_zero() {
            c = Rational::one();
        }
        out.push((Exponents::new(e), c));
    }
    ring.from_terms(out).unwrap()
}

pub fn abs_max(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

pub fn random_form<R: Rng>(rng: &mut R, ctx: FormContext, k: usize) -> DifferentialForm {
    let ring = ctx.coefficient_ring();
    let comps: Vec<(IndexSet, Polynomial)> = IndexSet::all(ctx.nvars(), k)
        .into_iter()
        .map(|idx| (idx, random_polynomial(rng, ring, 3, 3, -2, 4)))
        .collect();
    DifferentialForm::from_components(ctx, k, comps).unwrap()
}
