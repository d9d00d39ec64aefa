use std::cmp::Ordering;

use super::Exponents;

/// Monomial orders on exponent vectors. `x1 > x2 > … > xn` throughout.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
    /// Weighted degree first, ties broken reverse-lexicographically.
    WeightedDegRevLex(Vec<u64>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Exponents, b: &Exponents) -> Ordering {
        match self {
            MonomialOrder::Lex => a.as_slice().cmp(b.as_slice()),
            MonomialOrder::DegRevLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| revlex(a.as_slice(), b.as_slice())),
            MonomialOrder::WeightedDegRevLex(w) => a
                .weighted_degree(w)
                .cmp(&b.weighted_degree(w))
                .then_with(|| revlex(a.as_slice(), b.as_slice())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::DegRevLex => "degrevlex",
            MonomialOrder::Lex => "lex",
            MonomialOrder::WeightedDegRevLex(_) => "weighted-degrevlex",
        }
    }
}

/// The monomial with the smaller exponent in the last differing variable is
/// the larger one.
fn revlex(a: &[i32], b: &[i32]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[i32]) -> Exponents {
        Exponents::new(v.to_vec())
    }

    #[test]
    fn degrevlex_basics() {
        let o = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 > x > y > 1
        let chain = [e(&[2, 0]), e(&[1, 1]), e(&[0, 2]), e(&[1, 0]), e(&[0, 1]), e(&[0, 0])];
        for w in chain.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater, "{:?} > {:?}", w[0], w[1]);
        }
        // x y^2... in three variables: x*z < y^2 in degrevlex
        assert_eq!(o.cmp(&e(&[1, 0, 1]), &e(&[0, 2, 0])), Ordering::Less);
    }

    #[test]
    fn lex_and_weighted() {
        assert_eq!(MonomialOrder::Lex.cmp(&e(&[1, 0]), &e(&[0, 5])), Ordering::Greater);
        let w = MonomialOrder::WeightedDegRevLex(vec![1, 3]);
        assert_eq!(w.cmp(&e(&[2, 0]), &e(&[0, 1])), Ordering::Less);
    }
}
