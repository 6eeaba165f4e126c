//! Submodules of graded free modules `⊕ R(-a_c)` and maps between them.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{EchelonSpan, Matrix};
use crate::monomial::{monomials_of_degree, Monomial, TermOrder};
use crate::poly::Polynomial;
use crate::ring::{check_same, RingRef};
use crate::scalar::Scalar;

use super::engine::{self, Elem, ModuleOrder, Term};

/// An element of a free module, one polynomial per component.
pub type Vector = Vec<Polynomial>;

pub(crate) fn vector_to_elem(v: &[Polynomial], offset: u32, order: &ModuleOrder) -> Elem {
    let mut terms: Vec<Term> = Vec::new();
    for (c, p) in v.iter().enumerate() {
        for (m, s) in p.terms() {
            terms.push((c as u32 + offset, m.clone(), s.clone()));
        }
    }
    order.sort(&mut terms);
    Elem { terms }
}

/// Components `offset..offset+rank` of `e`, as a vector.
pub(crate) fn elem_to_vector(ring: &RingRef, e: &[Term], offset: u32, rank: usize) -> Vector {
    let mut parts: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); rank];
    for (c, m, s) in e {
        if *c >= offset && ((*c - offset) as usize) < rank {
            parts[(*c - offset) as usize].push((m.clone(), s.clone()));
        }
    }
    parts.into_iter().map(|t| Polynomial::from_terms(ring, t)).collect()
}

fn vector_degree(v: &[Polynomial], degrees: &[i64]) -> Option<i64> {
    let mut deg = None;
    for (p, &a) in v.iter().zip(degrees) {
        if p.is_zero() {
            continue;
        }
        if !p.is_homogeneous() {
            return None;
        }
        let d = p.degree().unwrap() as i64 + a;
        match deg {
            None => deg = Some(d),
            Some(e) if e != d => return None,
            _ => {}
        }
    }
    deg
}

/// A graded map `⊕ R(-b_j) → ⊕ R(-a_c)` given by its columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModuleMap {
    ring: RingRef,
    target_degrees: Vec<i64>,
    source_degrees: Vec<i64>,
    columns: Vec<Vector>,
}

impl FreeModuleMap {
    /// Source degrees are read off the (homogeneous, nonzero) columns.
    pub fn new(ring: &RingRef, target_degrees: Vec<i64>, columns: Vec<Vector>) -> Result<Self> {
        let mut source = Vec::with_capacity(columns.len());
        for col in &columns {
            if col.len() != target_degrees.len() {
                return Err(Error::LengthMismatch { expected: target_degrees.len(), got: col.len() });
            }
            for p in col {
                check_same(ring, p.ring())?;
            }
            match vector_degree(col, &target_degrees) {
                Some(d) => source.push(d),
                None => {
                    if col.iter().all(|p| p.is_zero()) {
                        return Err(Error::Shape("zero column needs an explicit degree".into()));
                    }
                    return Err(Error::Inhomogeneous("column is not homogeneous".into()));
                }
            }
        }
        Ok(FreeModuleMap { ring: ring.clone(), target_degrees, source_degrees: source, columns })
    }

    pub fn with_source_degrees(
        ring: &RingRef,
        target_degrees: Vec<i64>,
        source_degrees: Vec<i64>,
        columns: Vec<Vector>,
    ) -> Result<Self> {
        if source_degrees.len() != columns.len() {
            return Err(Error::LengthMismatch { expected: columns.len(), got: source_degrees.len() });
        }
        for (col, &b) in columns.iter().zip(&source_degrees) {
            if col.len() != target_degrees.len() {
                return Err(Error::LengthMismatch { expected: target_degrees.len(), got: col.len() });
            }
            if let Some(d) = vector_degree(col, &target_degrees) {
                if d != b {
                    return Err(Error::Inhomogeneous(format!("column of degree {d} declared as {b}")));
                }
            } else if col.iter().any(|p| !p.is_zero()) {
                return Err(Error::Inhomogeneous("column is not homogeneous".into()));
            }
        }
        Ok(FreeModuleMap { ring: ring.clone(), target_degrees, source_degrees, columns })
    }

    /// The map `R(-deg g_1) ⊕ ... → R` of an ideal's generators.
    pub fn from_ideal(ring: &RingRef, gens: &[Polynomial]) -> Result<Self> {
        let cols: Vec<Vector> = gens.iter().filter(|g| !g.is_zero()).map(|g| vec![g.clone()]).collect();
        Self::new(ring, vec![0], cols)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn target_degrees(&self) -> &[i64] {
        &self.target_degrees
    }

    pub fn source_degrees(&self) -> &[i64] {
        &self.source_degrees
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    pub fn target_rank(&self) -> usize {
        self.target_degrees.len()
    }

    pub fn source_rank(&self) -> usize {
        self.source_degrees.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &Polynomial {
        &self.columns[col][row]
    }

    pub fn apply(&self, v: &[Polynomial]) -> Result<Vector> {
        if v.len() != self.source_rank() {
            return Err(Error::LengthMismatch { expected: self.source_rank(), got: v.len() });
        }
        let mut out = vec![Polynomial::zero(&self.ring); self.target_rank()];
        for (c, col) in v.iter().zip(&self.columns) {
            if c.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(col) {
                if !e.is_zero() {
                    *o = o.add(&c.mul(e)?)?;
                }
            }
        }
        Ok(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeModuleMap) -> Result<FreeModuleMap> {
        if other.target_rank() != self.source_rank() {
            return Err(Error::LengthMismatch { expected: self.source_rank(), got: other.target_rank() });
        }
        let cols = other.columns.iter().map(|c| self.apply(c)).collect::<Result<Vec<_>>>()?;
        FreeModuleMap::with_source_degrees(&self.ring, self.target_degrees.clone(), other.source_degrees.clone(), cols)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(|p| p.is_zero()))
    }

    fn augmented_order(&self) -> ModuleOrder {
        let mut shifts = self.target_degrees.clone();
        shifts.extend(&self.source_degrees);
        ModuleOrder { mono: TermOrder::GrevLex, shifts, block: self.target_rank() }
    }

    fn augmented_basis(&self) -> (ModuleOrder, Vec<Elem>) {
        let order = self.augmented_order();
        let gens: Vec<Elem> = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, col)| {
                let mut v = col.clone();
                v.extend((0..self.source_rank()).map(|k| {
                    if k == j {
                        Polynomial::one(&self.ring)
                    } else {
                        Polynomial::zero(&self.ring)
                    }
                }));
                vector_to_elem(&v, 0, &order)
            })
            .collect();
        let gb = engine::groebner(gens, &order, self.ring.field());
        (order, gb)
    }

    /// The kernel, as a map onto a minimal generating set of syzygies.
    pub fn kernel(&self) -> Result<FreeModuleMap> {
        let (_, gb) = self.augmented_basis();
        let t = self.target_rank() as u32;
        let s = self.source_rank();
        let syz: Vec<Vector> = gb
            .iter()
            .filter(|e| e.lead().0 >= t)
            .map(|e| elem_to_vector(&self.ring, &e.terms, t, s))
            .collect();
        let kept = minimal_generators(&self.ring, &self.source_degrees, &syz)?;
        FreeModuleMap::new(&self.ring, self.source_degrees.clone(), kept)
    }

    /// Some `c` with `self(c) = w`, if `w` is in the image.
    pub fn lift(&self, w: &[Polynomial]) -> Result<Option<Vector>> {
        let lifter = Lifter::new(self);
        lifter.lift(w)
    }

    /// The image with a minimal generating set.
    pub fn minimalize(&self) -> Result<FreeModuleMap> {
        let cols = minimal_generators(&self.ring, &self.target_degrees, &self.columns)?;
        FreeModuleMap::new(&self.ring, self.target_degrees.clone(), cols)
    }

    pub fn image_basis(&self) -> ModuleGroebnerBasis {
        ModuleGroebnerBasis::new_unchecked(&self.ring, &self.target_degrees, &self.columns)
    }

    /// The k-linear map between degree-`deg` pieces, in monomial bases
    /// ordered by component, then decreasing grevlex.
    pub fn matrix_in_degree(&self, deg: i64) -> Matrix {
        let n = self.ring.nvars();
        let field = self.ring.field();
        let mut rows: HashMap<(usize, Monomial), usize> = HashMap::new();
        for (r, &a) in self.target_degrees.iter().enumerate() {
            if deg - a >= 0 {
                for m in monomials_of_degree(n, (deg - a) as u32) {
                    let k = rows.len();
                    rows.insert((r, m), k);
                }
            }
        }
        let mut cols: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for (s, &b) in self.source_degrees.iter().enumerate() {
            if deg - b < 0 {
                continue;
            }
            for m in monomials_of_degree(n, (deg - b) as u32) {
                let mut col = Vec::new();
                for (r, e) in self.columns[s].iter().enumerate() {
                    for (em, c) in e.terms() {
                        col.push((rows[&(r, em.mul(&m))], c.clone()));
                    }
                }
                cols.push(col);
            }
        }
        let mut mat = Matrix::zeros(field, rows.len(), cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            for (i, c) in col {
                let v = mat.get(i, j) + &c;
                mat.set(i, j, v);
            }
        }
        mat
    }

    /// The transposed map `Hom(target, R) → Hom(source, R)` with dual degrees.
    pub fn transpose(&self) -> FreeModuleMap {
        let cols: Vec<Vector> = (0..self.target_rank())
            .map(|r| self.columns.iter().map(|c| c[r].clone()).collect())
            .collect();
        FreeModuleMap {
            ring: self.ring.clone(),
            target_degrees: self.source_degrees.iter().map(|d| -d).collect(),
            source_degrees: self.target_degrees.iter().map(|d| -d).collect(),
            columns: cols,
        }
    }
}

/// Precomputed data for repeated lifting through one map.
pub struct Lifter {
    ring: RingRef,
    order: ModuleOrder,
    basis: Vec<Elem>,
    target_rank: usize,
    source_rank: usize,
}

impl Lifter {
    pub fn new(map: &FreeModuleMap) -> Self {
        let (order, basis) = map.augmented_basis();
        Lifter { ring: map.ring.clone(), order, basis, target_rank: map.target_rank(), source_rank: map.source_rank() }
    }

    pub fn lift(&self, w: &[Polynomial]) -> Result<Option<Vector>> {
        if w.len() != self.target_rank {
            return Err(Error::LengthMismatch { expected: self.target_rank, got: w.len() });
        }
        let t = self.target_rank as u32;
        let e = vector_to_elem(w, 0, &self.order);
        let r = engine::normal_form_where(&e.terms, &self.basis, &self.order, |c| c < t);
        if r.iter().any(|(c, _, _)| *c < t) {
            return Ok(None);
        }
        let v = elem_to_vector(&self.ring, &r, t, self.source_rank);
        Ok(Some(v.into_iter().map(|p| p.neg()).collect()))
    }
}

/// A Gröbner basis of a graded submodule for the degree-then-grevlex
/// position-last order.
#[derive(Clone, Debug)]
pub struct ModuleGroebnerBasis {
    ring: RingRef,
    degrees: Vec<i64>,
    order: ModuleOrder,
    elems: Vec<Elem>,
}

impl ModuleGroebnerBasis {
    pub fn new(ring: &RingRef, degrees: &[i64], gens: &[Vector]) -> Result<Self> {
        for g in gens {
            if g.len() != degrees.len() {
                return Err(Error::LengthMismatch { expected: degrees.len(), got: g.len() });
            }
            for p in g {
                check_same(ring, p.ring())?;
            }
        }
        Ok(Self::new_unchecked(ring, degrees, gens))
    }

    fn new_unchecked(ring: &RingRef, degrees: &[i64], gens: &[Vector]) -> Self {
        let order = ModuleOrder::graded(degrees.to_vec());
        let elems = engine::groebner(gens.iter().map(|g| vector_to_elem(g, 0, &order)).collect(), &order, ring.field());
        ModuleGroebnerBasis { ring: ring.clone(), degrees: degrees.to_vec(), order, elems }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `(component, leading monomial)` of every basis element.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.elems.iter().map(|e| (e.lead().0 as usize, e.lead().1.clone())).collect()
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.elems.iter().map(|e| elem_to_vector(&self.ring, &e.terms, 0, self.rank())).collect()
    }

    pub fn normal_form(&self, v: &[Polynomial]) -> Result<Vector> {
        if v.len() != self.rank() {
            return Err(Error::LengthMismatch { expected: self.rank(), got: v.len() });
        }
        let e = vector_to_elem(v, 0, &self.order);
        let r = engine::normal_form(&e.terms, &self.elems, &self.order);
        Ok(elem_to_vector(&self.ring, &r, 0, self.rank()))
    }

    pub fn contains(&self, v: &[Polynomial]) -> Result<bool> {
        Ok(self.normal_form(v)?.iter().all(|p| p.is_zero()))
    }
}

/// Coordinates of a vector in the monomial basis of its support, used to
/// test linear independence of normal forms.
fn coordinates(v: &[Polynomial], index: &mut HashMap<(usize, Monomial), usize>) -> Vec<(usize, Scalar)> {
    let mut out = Vec::new();
    for (c, p) in v.iter().enumerate() {
        for (m, s) in p.terms() {
            let n = index.len();
            let pos = *index.entry((c, m.clone())).or_insert(n);
            out.push((pos, s.clone()));
        }
    }
    out
}

/// A minimal homogeneous generating set of the submodule spanned by `gens`,
/// chosen among the given generators.
pub fn minimal_generators(ring: &RingRef, degrees: &[i64], gens: &[Vector]) -> Result<Vec<Vector>> {
    let mut graded: Vec<(i64, &Vector)> = Vec::new();
    for g in gens {
        if g.iter().all(|p| p.is_zero()) {
            continue;
        }
        let d = vector_degree(g, degrees).ok_or_else(|| Error::Inhomogeneous("generator is not homogeneous".into()))?;
        graded.push((d, g));
    }
    graded.sort_by_key(|(d, _)| *d);
    let mut kept: Vec<Vector> = Vec::new();
    let mut i = 0;
    while i < graded.len() {
        let d = graded[i].0;
        let mut j = i;
        while j < graded.len() && graded[j].0 == d {
            j += 1;
        }
        let lower = if kept.is_empty() { None } else { Some(ModuleGroebnerBasis::new_unchecked(ring, degrees, &kept)) };
        let mut index: HashMap<(usize, Monomial), usize> = HashMap::new();
        let mut nfs: Vec<(Vec<(usize, Scalar)>, &Vector)> = Vec::new();
        for (_, g) in &graded[i..j] {
            let nf = match &lower {
                Some(gb) => gb.normal_form(g)?,
                None => (*g).clone(),
            };
            if nf.iter().all(|p| p.is_zero()) {
                continue;
            }
            nfs.push((coordinates(&nf, &mut index), g));
        }
        let mut span = EchelonSpan::new(ring.field(), index.len());
        for (coords, g) in nfs {
            let mut dense = vec![ring.field().zero(); index.len()];
            for (p, s) in coords {
                dense[p] = s;
            }
            if span.insert(&dense) {
                kept.push(g.clone());
            }
        }
        i = j;
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::ring::Ring;
    use crate::scalar::Field;

    fn p(r: &RingRef, s: &str) -> Polynomial {
        parse_polynomial(r, s).unwrap()
    }

    #[test]
    fn koszul_syzygies_of_variables() {
        let r = Ring::indexed("X", 3, Field::Rational);
        let m = FreeModuleMap::from_ideal(&r, &[p(&r, "X0"), p(&r, "X1"), p(&r, "X2")]).unwrap();
        let k = m.kernel().unwrap();
        assert_eq!(k.source_rank(), 3);
        assert!(k.source_degrees().iter().all(|&d| d == 2));
        assert!(m.compose(&k).unwrap().is_zero());
        let k2 = k.kernel().unwrap();
        assert_eq!(k2.source_rank(), 1);
        assert_eq!(k2.source_degrees(), &[3]);
    }

    #[test]
    fn lift_recovers_coefficients() {
        let r = Ring::indexed("X", 3, Field::Rational);
        let m = FreeModuleMap::from_ideal(&r, &[p(&r, "X0^2"), p(&r, "X0*X1 + X1^2")]).unwrap();
        let w = vec![p(&r, "X0^3 + X0*X1*X2 + X1^2*X2")];
        let c = m.lift(&w).unwrap().unwrap();
        assert_eq!(m.apply(&c).unwrap(), w);
        assert!(m.lift(&[p(&r, "X1^2")]).unwrap().is_none());
    }

    #[test]
    fn minimal_generators_drop_redundant() {
        let r = Ring::indexed("X", 2, Field::Rational);
        let gens = vec![vec![p(&r, "X0")], vec![p(&r, "X0*X1")], vec![p(&r, "2*X0")], vec![p(&r, "X1^2")]];
        let kept = minimal_generators(&r, &[0], &gens).unwrap();
        assert_eq!(kept.len(), 2);
    }

    #[test]
    fn module_membership() {
        let r = Ring::indexed("X", 2, Field::Prime(7));
        let gb = ModuleGroebnerBasis::new(&r, &[0, 0], &[vec![p(&r, "X0"), p(&r, "X1")]]).unwrap();
        assert!(gb.contains(&[p(&r, "X0*X1"), p(&r, "X1^2")]).unwrap());
        assert!(!gb.contains(&[p(&r, "X0"), p(&r, "0")]).unwrap());
    }
}
