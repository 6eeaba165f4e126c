//! Base-field points of zero-dimensional projective schemes.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groebner::{reduced_groebner, GroebnerBasis};
use crate::ideal::Ideal;
use crate::linalg::Matrix;
use crate::monomial::{Monomial, TermOrder};
use crate::poly::Polynomial;
use crate::ring::{Ring, RingRef};
use crate::scalar::{Field, Scalar};
use crate::univariate::UniPoly;

/// Homogeneous coordinates normalized so the first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointProjective {
    coords: Vec<Scalar>,
}

impl PointProjective {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let Some(p) = coords.iter().position(|c| !c.is_zero()) else {
            return Err(Error::InvalidArgument("all coordinates are zero".into()));
        };
        let inv = coords[p].inv();
        Ok(PointProjective { coords: coords.iter().map(|c| c * &inv).collect() })
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Index of the first nonzero coordinate (which equals 1).
    pub fn pivot(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }

    /// Linear forms `T_j - p_j T_pivot` cutting out the point.
    pub fn vanishing_ideal(&self, ring: &RingRef) -> Ideal {
        let i = self.pivot();
        let ti = Polynomial::var(ring, i);
        let gens = (0..self.coords.len())
            .filter(|&j| j != i)
            .map(|j| Polynomial::var(ring, j).sub(&ti.scale(&self.coords[j])).unwrap())
            .collect();
        Ideal::new(ring, gens).unwrap()
    }

    pub fn cmp_canonical(&self, other: &PointProjective) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.cmp_canonical(b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }
}

impl fmt::Display for PointProjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl Serialize for PointProjective {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        parts.serialize(s)
    }
}

/// Points found together with whether they exhaust the scheme's support.
#[derive(Clone, Debug)]
pub struct PointSet {
    pub points: Vec<PointProjective>,
    /// Number of distinct points over the algebraic closure.
    pub geometric_count: usize,
    pub complete: bool,
}

/// Standard monomials of a zero-dimensional affine Gröbner basis.
fn standard_monomials(gb: &GroebnerBasis) -> Vec<Monomial> {
    let n = gb.ring().nvars();
    let lead = gb.leading_monomials();
    let mut out = Vec::new();
    let mut d = 0;
    loop {
        let layer: Vec<Monomial> = crate::monomial::monomials_of_degree(n, d)
            .into_iter()
            .filter(|m| !lead.iter().any(|l| l.divides(m)))
            .collect();
        if layer.is_empty() {
            return out;
        }
        out.extend(layer);
        d += 1;
    }
}

fn is_zero_dimensional_affine(gb: &GroebnerBasis) -> bool {
    let n = gb.ring().nvars();
    let lead = gb.leading_monomials();
    (0..n).all(|v| lead.iter().any(|m| m.exps()[v] > 0 && m.degree() == m.exps()[v] as u32))
}

/// Monic generator of `J ∩ k[x_v]` for zero-dimensional `J`.
fn eliminant(gb: &GroebnerBasis, v: usize) -> Result<UniPoly> {
    let ring = gb.ring();
    let field = ring.field();
    let x = Polynomial::var(ring, v);
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    let mut columns: Vec<Vec<(usize, Scalar)>> = Vec::new();
    let mut power = Polynomial::one(ring);
    loop {
        let nf = gb.normal_form(&power)?;
        let col: Vec<(usize, Scalar)> = nf
            .terms()
            .iter()
            .map(|(m, c)| {
                let k = index.len();
                (*index.entry(m.clone()).or_insert(k), c.clone())
            })
            .collect();
        columns.push(col);
        let rows = index.len();
        let k = columns.len();
        let mut a = Matrix::zeros(field, rows, k);
        for (j, col) in columns.iter().enumerate() {
            for (r, c) in col {
                a.set(*r, j, c.clone());
            }
        }
        let ns = a.nullspace();
        if let Some(v) = ns.first() {
            return Ok(UniPoly::new(field, v.clone()).monic());
        }
        power = power.mul(&x)?;
    }
}

/// Base-field solutions of an affine system, its number of geometric
/// solutions, and whether every solution was found.
pub(crate) fn affine_points(chart: &RingRef, gens: &[Polynomial]) -> Result<(Vec<Vec<Scalar>>, usize, bool)> {
    let gb = reduced_groebner(chart, gens, &TermOrder::GrevLex)?;
    if gb.is_unit_ideal() {
        return Ok((Vec::new(), 0, true));
    }
    let n = chart.nvars();
    if n == 0 {
        return Ok((vec![Vec::new()], 1, true));
    }
    if !is_zero_dimensional_affine(&gb) {
        return Err(Error::NotZeroDimensional);
    }
    let mut roots: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut radical = gens.to_vec();
    let mut ok = true;
    for v in 0..n {
        let e = eliminant(&gb, v)?;
        let sf = e.squarefree_part();
        radical.push(Polynomial::from_terms(
            chart,
            sf.coeffs().iter().enumerate().map(|(k, c)| {
                let mut ex = vec![0u16; n];
                ex[v] = k as u16;
                (Monomial::from_exponents(&ex), c.clone())
            }),
        ));
        let (r, complete) = e.roots();
        ok &= complete;
        roots.push(r);
    }
    let rad = reduced_groebner(chart, &radical, &TermOrder::GrevLex)?;
    let count = standard_monomials(&rad).len();
    // Assemble candidates coordinate by coordinate, pruning with the
    // generators that only involve the coordinates fixed so far.
    let mut partial: Vec<Vec<Scalar>> = vec![Vec::new()];
    for (v, coordinate_roots) in roots.iter().enumerate().take(n) {
        let mut next = Vec::new();
        for p in &partial {
            for r in coordinate_roots {
                let mut q = p.clone();
                q.push(r.clone());
                next.push(q);
            }
        }
        let fixed = v + 1;
        let checks: Vec<&Polynomial> = rad.basis().iter().filter(|g| (fixed..n).all(|w| !g.involves(w))).collect();
        next.retain(|q| {
            let mut full = q.clone();
            full.resize(n, chart.field().zero());
            checks.iter().all(|g| g.evaluate(&full).map(|x| x.is_zero()).unwrap_or(false))
        });
        partial = next;
    }
    Ok((partial, count, ok))
}

/// All base-field points of `V(J) ⊂ P^n` for a homogeneous `J` with
/// zero-dimensional projective scheme.
pub fn rational_points_zero_dim(j: &Ideal) -> Result<PointSet> {
    if !j.is_homogeneous() {
        return Err(Error::Inhomogeneous("point extraction needs a homogeneous ideal".into()));
    }
    let ring = j.ring();
    let (dim, _) = j.dim_deg()?;
    if dim > 1 {
        return Err(Error::NotZeroDimensional);
    }
    let n = ring.nvars();
    let field = ring.field();
    let mut points = Vec::new();
    let mut total = 0;
    let mut complete = true;
    if dim == 1 {
        for i in 0..n {
            // Chart: T_0 = ... = T_{i-1} = 0, T_i = 1.
            let free: Vec<String> = (i + 1..n).map(|k| ring.name(k).to_string()).collect();
            let chart = Ring::new(&free, field)?;
            let images: Vec<Polynomial> = (0..n)
                .map(|k| match k.cmp(&i) {
                    Ordering::Less => Polynomial::zero(&chart),
                    Ordering::Equal => Polynomial::one(&chart),
                    Ordering::Greater => Polynomial::var(&chart, k - i - 1),
                })
                .collect();
            let gens = j.gens().iter().map(|g| g.substitute(&chart, &images)).collect::<Result<Vec<_>>>()?;
            let (pts, count, ok) = affine_points(&chart, &gens)?;
            total += count;
            complete &= ok;
            for p in pts {
                let mut c = vec![field.zero(); i];
                c.push(field.one());
                c.extend(p);
                points.push(PointProjective::new(c)?);
            }
        }
    }
    points.sort_by(|a, b| a.cmp_canonical(b));
    complete &= points.len() == total;
    Ok(PointSet { points, geometric_count: total, complete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn ideal(r: &RingRef, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|s| parse_polynomial(r, s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn single_point() {
        let r = Ring::indexed("T", 4, Field::Rational);
        let s = rational_points_zero_dim(&ideal(&r, &["T1-T0", "T2-2*T0", "T3"])).unwrap();
        assert!(s.complete);
        assert_eq!(s.points, vec![PointProjective::from_i64(Field::Rational, &[1, 1, 2, 0]).unwrap()]);
    }

    #[test]
    fn irrational_points_flag_incomplete() {
        let r = Ring::indexed("T", 4, Field::Rational);
        let s = rational_points_zero_dim(&ideal(&r, &["T0", "T1", "T2^2+T3^2"])).unwrap();
        assert!(s.points.is_empty());
        assert_eq!(s.geometric_count, 2);
        assert!(!s.complete);
    }

    #[test]
    fn several_points_over_prime_field() {
        let r = Ring::indexed("T", 3, Field::Prime(7));
        // three points on the line T2 = 0 and the point (0:0:1), doubled
        let j = ideal(&r, &["T2*(T2-T0)", "T1*(T1-T0)*(T1-2*T0)*T2", "T1*(T1-T0)*(T1-2*T0)*(T2-T0)"]);
        let s = rational_points_zero_dim(&j).unwrap();
        assert!(s.complete, "{:?}", s);
        assert_eq!(s.points.len(), s.geometric_count);
        for p in &s.points {
            for g in j.gens() {
                assert!(g.evaluate(p.coords()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn rejects_curves() {
        let r = Ring::indexed("T", 3, Field::Rational);
        assert!(matches!(rational_points_zero_dim(&ideal(&r, &["T0"])), Err(Error::NotZeroDimensional)));
    }
}
