//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

pub type Exponents = SmallVec<[u16; 8]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Exponents);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Exponents::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// A monomial order on a fixed set of variables.
///
/// `Elimination` splits the variables into consecutive blocks at the given
/// indices; blocks are compared lexicographically (earliest block first) and
/// each block by graded reverse lex. A single split index gives the classic
/// two-block elimination order for the leading variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermOrder {
    GrevLex,
    Lex,
    Elimination(Vec<usize>),
}

impl TermOrder {
    pub fn elimination(split: usize) -> Self {
        TermOrder::Elimination(vec![split])
    }

    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, TermOrder::GrevLex)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::GrevLex => grevlex(&a.0, &b.0),
            TermOrder::Lex => a.0.cmp(&b.0),
            TermOrder::Elimination(splits) => {
                let mut start = 0;
                for &s in splits.iter().chain(std::iter::once(&a.0.len())) {
                    let s = s.min(a.0.len());
                    if s > start {
                        let o = grevlex(&a.0[start..s], &b.0[start..s]);
                        if o != Ordering::Equal {
                            return o;
                        }
                    }
                    start = s;
                }
                Ordering::Equal
            }
        }
    }
}

pub fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

/// All exponent vectors of total degree `deg` in `nvars` variables, in
/// decreasing grevlex order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut cur = vec![0u16; nvars];
    fill(&mut cur, 0, deg, &mut out);
    out.sort_by(|a, b| grevlex(&b.0, &a.0));
    out
}

fn fill(cur: &mut Vec<u16>, i: usize, rest: u32, out: &mut Vec<Monomial>) {
    if i + 1 == cur.len() {
        cur[i] = rest as u16;
        out.push(Monomial::from_exponents(cur));
        return;
    }
    for e in (0..=rest).rev() {
        cur[i] = e as u16;
        fill(cur, i + 1, rest - e, out);
    }
    cur[i] = 0;
}

/// Number of monomials of degree `deg` in `nvars` variables.
pub fn count_monomials(nvars: usize, deg: i64) -> u64 {
    if deg < 0 {
        return 0;
    }
    if nvars == 0 {
        return (deg == 0) as u64;
    }
    binomial(deg as u64 + nvars as u64 - 1, nvars as u64 - 1)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_examples() {
        // x0 > x1 > x2, and x1^2 > x0 x2 in grevlex
        let o = TermOrder::GrevLex;
        assert_eq!(o.cmp(&mono(&[1, 0, 0]), &mono(&[0, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&mono(&[0, 2, 0]), &mono(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&mono(&[0, 0, 2]), &mono(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn elimination_prefers_eliminated_block() {
        let o = TermOrder::elimination(1);
        assert_eq!(o.cmp(&mono(&[1, 0, 0]), &mono(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&mono(&[0, 1, 0]), &mono(&[0, 0, 1])), Ordering::Greater);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 3).len(), 10);
        assert_eq!(count_monomials(3, 3), 10);
        assert_eq!(count_monomials(4, 8), 165);
        assert_eq!(count_monomials(3, -1), 0);
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms[0], mono(&[2, 0, 0]));
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u16..5, 4).prop_map(|v| Monomial::from_exponents(&v))
    }

    fn orders() -> Vec<TermOrder> {
        vec![TermOrder::GrevLex, TermOrder::Lex, TermOrder::elimination(2), TermOrder::Elimination(vec![1, 3])]
    }

    proptest! {
        #[test]
        fn orders_are_total_and_multiplicative(a in arb_mono(), b in arb_mono(), w in arb_mono()) {
            for o in orders() {
                let ab = o.cmp(&a, &b);
                prop_assert_eq!(ab, o.cmp(&b, &a).reverse());
                if ab == Ordering::Equal { prop_assert_eq!(&a, &b); }
                prop_assert_eq!(o.cmp(&a.mul(&w), &b.mul(&w)), ab);
                prop_assert_ne!(o.cmp(&Monomial::one(4), &a), Ordering::Greater);
            }
        }
    }
}
