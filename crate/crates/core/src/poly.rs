//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept sorted by decreasing graded reverse lex order with no zero
//! coefficients, so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::{grevlex, Monomial, TermOrder};
use crate::ring::{check_same, same_ring, RingRef};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn sort_desc(terms: &mut [(Monomial, Scalar)]) {
    terms.sort_by(|a, b| grevlex(&b.0 .0, &a.0 .0));
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingRef, c: Scalar) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.push((Monomial::one(ring.nvars()), c));
        }
        p
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &RingRef, c: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(c))
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i), ring.field().one())
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.nvars(), ring.nvars());
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds a polynomial from arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(ring: &RingRef, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        sort_desc(&mut terms);
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Maximal total degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let first = self.ring.bidegree(&self.terms.first()?.0);
        if self.terms.iter().all(|(m, _)| self.ring.bidegree(m) == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Degree in the given subset of variables (maximum over terms).
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| vars.iter().map(|&v| m.exps()[v] as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exps()[var] > 0)
    }

    /// Leading term under grevlex.
    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn leading_in(&self, order: &TermOrder) -> Option<&(Monomial, Scalar)> {
        if matches!(order, TermOrder::GrevLex) {
            return self.terms.first();
        }
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .binary_search_by(|(t, _)| grevlex(&m.0, &t.0))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.ring.field().zero())
    }

    /// Scales so that the grevlex-leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match grevlex(&a[i].0 .0, &b[j].0 .0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        check_same(&self.ring, &other.ring)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        check_same(&self.ring, &other.ring)?;
        Ok(self.merge(other, true))
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        check_same(&self.ring, &other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        if other.terms.len() == 1 {
            return Ok(self.mul_monomial(&other.terms[0].0, &other.terms[0].1));
        }
        if self.terms.len() == 1 {
            return Ok(other.mul_monomial(&self.terms[0].0, &self.terms[0].1));
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        sort_desc(&mut terms);
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Quotient `q` with `divisor * q == self`; errors if the remainder is nonzero.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Result<Polynomial> {
        check_same(&self.ring, &divisor.ring)?;
        let (lm, lc) = divisor
            .leading()
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("division by zero polynomial".into()))?;
        let lc_inv = lc.inv();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let Some(qm) = m.div(&lm) else {
                return Err(Error::NotDivisible(format!("{self} by {divisor}")));
            };
            let qc = &c * &lc_inv;
            rem = rem.merge(&divisor.mul_monomial(&qm, &qc), true);
            quot.push((qm, qc));
        }
        Ok(Polynomial { ring: self.ring.clone(), terms: quot })
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.ring.nvars() {
            return Err(Error::LengthMismatch { expected: self.ring.nvars(), got: point.len() });
        }
        let field = self.ring.field();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t = &t * &x.pow(e as u32);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` for variable `i`; all images live in `target`.
    pub fn substitute(&self, target: &RingRef, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::LengthMismatch { expected: self.ring.nvars(), got: images.len() });
        }
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize])?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Re-embeds into `target` by moving variable `i` to position `index_map[i]`.
    /// Variables mapped to `None` must not occur.
    pub fn map_variables(&self, target: &RingRef, index_map: &[Option<usize>]) -> Result<Polynomial> {
        let n = target.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = Monomial::one(n);
            for (i, &x) in m.exps().iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match index_map[i] {
                    Some(j) => e.0[j] += x,
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "variable {} cannot be mapped",
                            self.ring.name(i)
                        )))
                    }
                }
            }
            terms.push((e, c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Homogeneous component of total degree `d`.
    pub fn component(&self, d: u32) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect(),
        }
    }

    /// Same exponents, coefficients mapped through `f` (e.g. reduction mod p).
    pub fn map_coefficients(&self, target: &RingRef, f: impl Fn(&Scalar) -> Scalar) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f(c))).filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { ring: target.clone(), terms }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.ring.name(i), e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::ring::Ring;
    use crate::scalar::Field;

    fn ring() -> RingRef {
        Ring::indexed("X", 3, Field::Rational)
    }

    fn p(r: &RingRef, s: &str) -> Polynomial {
        parse_polynomial(r, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring();
        let prod = p(&r, "X0+X1").mul(&p(&r, "X0-X1")).unwrap();
        assert_eq!(prod, p(&r, "X0^2-X1^2"));
        assert!(p(&r, "X0").mul(&Polynomial::zero(&r)).unwrap().is_zero());
    }

    #[test]
    fn exact_division() {
        let r = ring();
        assert_eq!(p(&r, "X0^2*X1").exact_divide(&p(&r, "X0")).unwrap(), p(&r, "X0*X1"));
        let err = p(&r, "X0+X1").exact_divide(&p(&r, "X2")).unwrap_err();
        assert!(matches!(err, Error::NotDivisible(_)));
        let f0 = p(&r, "X0*X1*(X0-X2)*(X0+X2)*(X0-2*X2)");
        let q = f0.exact_divide(&p(&r, "X0")).unwrap();
        assert_eq!(q, p(&r, "X1*(X0-X2)*(X0+X2)*(X0-2*X2)"));
    }

    #[test]
    fn evaluation() {
        let r = ring();
        let q = Field::Rational;
        let pt = |v: [i64; 3]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        assert_eq!(p(&r, "X0^2+X1").evaluate(&pt([2, 3, 0])).unwrap(), q.from_i64(7));
        let f0 = p(&r, "X0*X1*(X0-X2)*(X0+X2)*(X0-2*X2)");
        assert!(f0.evaluate(&pt([1, 1, 1])).unwrap().is_zero());
        assert!(f0.evaluate(&[q.one(), q.one()]).is_err());
    }

    #[test]
    fn display_round_trip() {
        let r = ring();
        let f = p(&r, "1/2*X0^2 - 3*X1*X2 + 7 - X2");
        assert_eq!(p(&r, &f.to_string()), f);
        assert_eq!(f.to_string(), "1/2*X0^2 - 3*X1*X2 - X2 + 7");
    }

    #[test]
    fn homogeneity() {
        let r = ring();
        assert!(p(&r, "X0^2 + X1*X2").is_homogeneous());
        assert!(!p(&r, "X0 + X1^2").is_homogeneous());
    }
}

