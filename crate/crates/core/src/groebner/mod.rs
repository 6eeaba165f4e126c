//! Reduced Gröbner bases, normal forms, kernels of free-module maps and
//! graded free resolutions.

pub(crate) mod engine;
mod module;
mod resolution;

pub use engine::ModuleOrder;
pub use module::{minimal_generators, FreeModuleMap, Lifter, ModuleGroebnerBasis, Vector};
pub use resolution::{free_resolution, BettiTable, FreeResolution};

use crate::error::Result;
use crate::monomial::{Monomial, TermOrder};
use crate::poly::Polynomial;
use crate::ring::{check_same, RingRef};

use engine::{Elem, Term};

/// A reduced Gröbner basis of an ideal for a fixed term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: RingRef,
    order: TermOrder,
    /// Monic elements, sorted by increasing leading monomial.
    basis: Vec<Polynomial>,
    elems: Vec<Elem>,
}

pub(crate) fn to_elem(p: &Polynomial, order: &ModuleOrder) -> Elem {
    let mut terms: Vec<Term> = p.terms().iter().map(|(m, c)| (0u32, m.clone(), c.clone())).collect();
    if !matches!(order.mono, TermOrder::GrevLex) {
        order.sort(&mut terms);
    }
    Elem { terms }
}

pub(crate) fn from_elem(ring: &RingRef, e: &Elem) -> Polynomial {
    Polynomial::from_terms(ring, e.terms.iter().map(|(_, m, c)| (m.clone(), c.clone())))
}

impl GroebnerBasis {
    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Leading monomials under the basis' term order.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elems.iter().map(|e| e.lead().1.clone()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elems.iter().any(|e| e.lead().1.is_one())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        check_same(&self.ring, f.ring())?;
        let o = ModuleOrder::ideal(self.order.clone());
        let r = engine::normal_form(&to_elem(f, &o).terms, &self.elems, &o);
        Ok(from_elem(&self.ring, &Elem { terms: r }))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn reduced_groebner(ring: &RingRef, gens: &[Polynomial], order: &TermOrder) -> Result<GroebnerBasis> {
    for g in gens {
        check_same(ring, g.ring())?;
    }
    let o = ModuleOrder::ideal(order.clone());
    let elems = engine::groebner(gens.iter().map(|g| to_elem(g, &o)).collect(), &o, ring.field());
    let basis = elems.iter().map(|e| from_elem(ring, e)).collect();
    Ok(GroebnerBasis { ring: ring.clone(), order: order.clone(), basis, elems })
}

/// Remainder of `f` on division by a reduced basis.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    gb.normal_form(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::ring::Ring;
    use crate::scalar::Field;

    fn polys(r: &RingRef, s: &[&str]) -> Vec<Polynomial> {
        s.iter().map(|x| parse_polynomial(r, x).unwrap()).collect()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = Ring::indexed("X", 3, Field::Rational);
        let gb = reduced_groebner(&r, &polys(&r, &["X0", "X1"]), &TermOrder::GrevLex).unwrap();
        assert_eq!(gb.basis(), &polys(&r, &["X1", "X0"])[..]);
    }

    #[test]
    fn two_generator_example() {
        let r = Ring::indexed("X", 3, Field::Rational);
        let gb = reduced_groebner(&r, &polys(&r, &["X0^2", "X0*X1+X1^2"]), &TermOrder::GrevLex).unwrap();
        let mut got: Vec<String> = gb.basis().iter().map(|p| p.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["X0*X1 + X1^2", "X0^2", "X1^3"]);
    }

    #[test]
    fn normal_forms() {
        let r = Ring::indexed("X", 3, Field::Rational);
        let gb = reduced_groebner(&r, &polys(&r, &["X0"]), &TermOrder::GrevLex).unwrap();
        assert!(gb.normal_form(&polys(&r, &["X0^2*X1"])[0]).unwrap().is_zero());
        let x1sq = &polys(&r, &["X1^2"])[0];
        assert_eq!(&gb.normal_form(x1sq).unwrap(), x1sq);
    }

    #[test]
    fn empty_input_is_zero_ideal() {
        let r = Ring::indexed("X", 2, Field::Rational);
        let gb = reduced_groebner(&r, &[], &TermOrder::GrevLex).unwrap();
        assert!(gb.is_empty());
        assert!(!gb.contains(&Polynomial::var(&r, 0)).unwrap());
    }

    #[test]
    fn lex_elimination() {
        // (T0 - t X0, T1 - t X1), eliminate t -> X1 T0 - X0 T1
        let r = Ring::new(&["t", "X0", "X1", "T0", "T1"], Field::Rational).unwrap();
        let gb = reduced_groebner(&r, &polys(&r, &["T0 - t*X0", "T1 - t*X1"]), &TermOrder::elimination(1)).unwrap();
        let free: Vec<&Polynomial> = gb.basis().iter().filter(|p| !p.involves(0)).collect();
        assert_eq!(free.len(), 1);
        let expect = parse_polynomial(&r, "X1*T0 - X0*T1").unwrap();
        assert!(free[0] == &expect || free[0] == &expect.neg());
    }
}
