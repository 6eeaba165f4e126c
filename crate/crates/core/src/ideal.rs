//! Homogeneous ideals: colon, saturation, intersection, elimination,
//! powers, gcd of forms and initial degree.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groebner::{reduced_groebner, FreeModuleMap, GroebnerBasis};
use crate::hilbert::HilbertSeries;
use crate::linalg::EchelonSpan;
use crate::monomial::{monomials_of_degree, Monomial, TermOrder};
use crate::poly::Polynomial;
use crate::ring::{check_same, Ring, RingRef};

/// An ideal given by generators, with its grevlex Gröbner basis cached.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: RingRef,
    gens: Vec<Polynomial>,
    gb: Arc<OnceLock<GroebnerBasis>>,
}

impl Ideal {
    pub fn new(ring: &RingRef, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            check_same(ring, g.ring())?;
        }
        let mut gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let mut seen = BTreeSet::new();
        gens.retain(|g| seen.insert(g.to_string()));
        Ok(Ideal { ring: ring.clone(), gens, gb: Arc::new(OnceLock::new()) })
    }

    pub fn from_basis(gb: GroebnerBasis) -> Self {
        let ring = gb.ring().clone();
        let gens = gb.basis().to_vec();
        let cell = OnceLock::new();
        if matches!(gb.order(), TermOrder::GrevLex) {
            let _ = cell.set(gb);
        }
        Ideal { ring, gens, gb: Arc::new(cell) }
    }

    pub fn zero(ring: &RingRef) -> Self {
        Ideal { ring: ring.clone(), gens: Vec::new(), gb: Arc::new(OnceLock::new()) }
    }

    /// The irrelevant ideal generated by all variables.
    pub fn maximal(ring: &RingRef) -> Self {
        Ideal::new(ring, (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect()).unwrap()
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        self.gb.get_or_init(|| reduced_groebner(&self.ring, &self.gens, &TermOrder::GrevLex).expect("same ring"))
    }

    pub fn groebner_in(&self, order: &TermOrder) -> Result<GroebnerBasis> {
        if matches!(order, TermOrder::GrevLex) {
            return Ok(self.groebner().clone());
        }
        reduced_groebner(&self.ring, &self.gens, order)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().is_unit_ideal()
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        self.groebner().contains(f)
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in other.gens() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        check_same(&self.ring, &other.ring)?;
        Ok(self.groebner().basis() == other.groebner().basis())
    }

    fn require_homogeneous(&self) -> Result<()> {
        if self.is_homogeneous() {
            Ok(())
        } else {
            Err(Error::Inhomogeneous("operation requires a homogeneous ideal".into()))
        }
    }

    pub fn hilbert_series(&self) -> Result<HilbertSeries> {
        self.require_homogeneous()?;
        Ok(HilbertSeries::of_quotient(self.groebner()))
    }

    /// `(Krull dimension, degree)` of `R/J`.
    pub fn dim_deg(&self) -> Result<(usize, i64)> {
        let h = self.hilbert_series()?;
        if h.is_zero() {
            return Ok((0, 0));
        }
        Ok((h.dimension(), h.degree()))
    }

    pub fn hilbert_function(&self, t: i64) -> Result<i64> {
        Ok(self.hilbert_series()?.hilbert_function(t))
    }

    /// Smallest degree of a nonzero element; `None` for the zero ideal.
    pub fn initial_degree(&self) -> Option<u32> {
        self.groebner().basis().iter().filter_map(|g| g.min_degree()).min()
    }

    /// A k-basis of the degree-`d` part.
    pub fn component_basis(&self, d: u32) -> Result<Vec<Polynomial>> {
        self.require_homogeneous()?;
        let n = self.ring.nvars();
        let monos = monomials_of_degree(n, d);
        let index: std::collections::HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let field = self.ring.field();
        let mut span = EchelonSpan::new(field, monos.len());
        for g in self.groebner().basis() {
            let gd = g.degree().unwrap();
            if gd > d {
                continue;
            }
            for m in monomials_of_degree(n, d - gd) {
                let p = g.mul_monomial(&m, &field.one());
                let mut v = vec![field.zero(); monos.len()];
                for (mm, c) in p.terms() {
                    v[index[mm]] = c.clone();
                }
                span.insert(&v);
            }
        }
        Ok(span
            .basis()
            .into_iter()
            .map(|v| Polynomial::from_terms(&self.ring, monos.iter().cloned().zip(v).filter(|(_, c)| !c.is_zero())))
            .collect())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        check_same(&self.ring, &other.ring)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        check_same(&self.ring, &other.ring)?;
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a.mul(b)?);
            }
        }
        Ideal::new(&self.ring, g)
    }

    /// `J^s`, generated by the s-fold products of generators.
    pub fn power(&self, s: u32) -> Result<Ideal> {
        if s < 1 {
            return Err(Error::InvalidArgument("power exponent must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..s {
            acc = acc.product(self)?;
        }
        if s > 1 && self.is_homogeneous() {
            let m = FreeModuleMap::from_ideal(&self.ring, &acc.gens)?.minimalize()?;
            acc = Ideal::new(&self.ring, m.columns().iter().map(|c| c[0].clone()).collect())?;
        }
        Ok(acc)
    }

    /// `J : (f)`.
    pub fn colon(&self, f: &Polynomial) -> Result<Ideal> {
        check_same(&self.ring, f.ring())?;
        if f.is_zero() {
            return Err(Error::InvalidArgument("colon by the zero polynomial".into()));
        }
        self.require_homogeneous()?;
        if !f.is_homogeneous() {
            return Err(Error::Inhomogeneous("colon by an inhomogeneous polynomial".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut cols = vec![f.clone()];
        cols.extend(self.groebner().basis().iter().cloned());
        let k = FreeModuleMap::from_ideal(&self.ring, &cols)?.kernel()?;
        let gens: Vec<Polynomial> = k.columns().iter().map(|c| c[0].clone()).collect();
        Ideal::new(&self.ring, gens)?.minimal()
    }

    /// `J : K`.
    pub fn colon_ideal(&self, other: &Ideal) -> Result<Ideal> {
        let mut acc: Option<Ideal> = None;
        for g in other.gens() {
            let c = self.colon(g)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersection(&c)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::new(&self.ring, vec![Polynomial::one(&self.ring)]).unwrap()))
    }

    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        check_same(&self.ring, &other.ring)?;
        self.require_homogeneous()?;
        other.require_homogeneous()?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let a = self.groebner().basis();
        let b = other.groebner().basis();
        let mut cols: Vec<Polynomial> = a.to_vec();
        cols.extend(b.iter().cloned());
        let k = FreeModuleMap::from_ideal(&self.ring, &cols)?.kernel()?;
        let mut gens = Vec::new();
        for c in k.columns() {
            let mut acc = Polynomial::zero(&self.ring);
            for (u, g) in c.iter().zip(a) {
                if !u.is_zero() {
                    acc = acc.add(&u.mul(g)?)?;
                }
            }
            gens.push(acc);
        }
        Ideal::new(&self.ring, gens)?.minimal()
    }

    /// Same ideal with a minimal homogeneous generating set.
    pub fn minimal(&self) -> Result<Ideal> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        self.require_homogeneous()?;
        let m = FreeModuleMap::from_ideal(&self.ring, &self.gens)?.minimalize()?;
        let out = Ideal::new(&self.ring, m.columns().iter().map(|c| c[0].clone()).collect())?;
        if let Some(gb) = self.gb.get() {
            let _ = out.gb.set(gb.clone());
        }
        Ok(out)
    }

    /// `J : x_i^∞` for a variable, via a grevlex basis with `x_i` last.
    pub fn saturate_variable(&self, i: usize) -> Result<Ideal> {
        self.require_homogeneous()?;
        let n = self.ring.nvars();
        let last = n - 1;
        // Swap x_i and the last variable.
        let perm: Vec<Option<usize>> = (0..n)
            .map(|k| Some(if k == i { last } else if k == last { i } else { k }))
            .collect();
        let gens = self.gens.iter().map(|g| g.map_variables(&self.ring, &perm)).collect::<Result<Vec<_>>>()?;
        let gb = reduced_groebner(&self.ring, &gens, &TermOrder::GrevLex)?;
        let mut out = Vec::new();
        for g in gb.basis() {
            let e = g.terms().iter().map(|(m, _)| m.exps()[last]).min().unwrap_or(0);
            let mut ex = vec![0u16; n];
            ex[last] = e;
            let q = g.exact_divide(&Polynomial::monomial(&self.ring, Monomial::from_exponents(&ex), self.ring.field().one()))?;
            out.push(q.map_variables(&self.ring, &perm)?);
        }
        Ideal::new(&self.ring, out)
    }

    /// `J : ℓ^∞` for a linear form `ℓ`.
    pub fn saturate_linear(&self, l: &Polynomial) -> Result<Ideal> {
        self.require_homogeneous()?;
        let n = self.ring.nvars();
        let last = n - 1;
        let coeff_last = l.coefficient(&Monomial::var(n, last));
        if l.degree() != Some(1) || !l.is_homogeneous() {
            return Err(Error::InvalidArgument("expected a linear form".into()));
        }
        if coeff_last.is_zero() {
            return Err(Error::InvalidArgument("linear form must involve the last variable".into()));
        }
        // Automorphism with ℓ ↦ x_last: x_last ↦ (x_last - Σ_{k<last} a_k x_k)/a_last.
        let inv = coeff_last.inv();
        let mut fwd: Vec<Polynomial> = (0..n).map(|k| Polynomial::var(&self.ring, k)).collect();
        let mut back: Vec<Polynomial> = fwd.clone();
        let mut sub = Polynomial::var(&self.ring, last);
        for k in 0..last {
            let a = l.coefficient(&Monomial::var(n, k));
            if !a.is_zero() {
                sub = sub.sub(&Polynomial::var(&self.ring, k).scale(&a))?;
            }
        }
        fwd[last] = sub.scale(&inv);
        back[last] = l.clone();
        let moved = Ideal::new(&self.ring, self.gens.iter().map(|g| g.substitute(&self.ring, &fwd)).collect::<Result<Vec<_>>>()?)?;
        let sat = moved.saturate_variable(last)?;
        Ideal::new(&self.ring, sat.gens.iter().map(|g| g.substitute(&self.ring, &back)).collect::<Result<Vec<_>>>()?)
    }

    /// `J : 𝔪^∞` for the irrelevant ideal.
    pub fn saturation(&self) -> Result<Ideal> {
        self.require_homogeneous()?;
        if self.is_zero() || self.is_unit() {
            return Ok(self.clone());
        }
        let target = self.hilbert_series()?;
        let n = self.ring.nvars();
        let certify = |k: &Ideal| -> Result<bool> {
            // k ⊇ J^sat always; equal Hilbert polynomials force equality.
            let h = k.hilbert_series()?;
            let t = h.polynomial_threshold().max(target.polynomial_threshold()).max(0);
            Ok((0..=n as i64).all(|j| h.hilbert_polynomial(t + j) == target.hilbert_polynomial(t + j)))
        };
        let first = self.saturate_variable(n - 1)?;
        if certify(&first)? {
            return first.minimal();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let field = self.ring.field();
        for _ in 0..3 {
            let mut l = Polynomial::var(&self.ring, n - 1);
            for k in 0..n - 1 {
                let c = field.from_i64(rng.gen_range(-20..=20));
                l = l.add(&Polynomial::var(&self.ring, k).scale(&c))?;
            }
            let cand = self.saturate_linear(&l)?;
            if certify(&cand)? {
                return cand.minimal();
            }
        }
        let mut acc = self.saturate_variable(0)?;
        for i in 1..n {
            acc = acc.intersection(&self.saturate_variable(i)?)?;
        }
        acc.minimal()
    }

    /// `J : K^∞`.
    pub fn saturation_by(&self, k: &Ideal) -> Result<Ideal> {
        let mut cur = self.clone();
        loop {
            let next = cur.colon_ideal(k)?;
            if next.equals(&cur)? {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// `J ∩ k[keep]`, as an ideal of the same ring.
    pub fn eliminate(&self, eliminate: &[usize]) -> Result<Ideal> {
        if eliminate.is_empty() {
            return Ok(self.clone());
        }
        let n = self.ring.nvars();
        let mut order: Vec<usize> = eliminate.to_vec();
        order.extend((0..n).filter(|k| !eliminate.contains(k)));
        // position of old variable k in the new ring
        let mut pos = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let names: Vec<String> = order.iter().map(|&k| self.ring.name(k).to_string()).collect();
        let er = Ring::new(&names, self.ring.field())?;
        let fwd: Vec<Option<usize>> = pos.iter().map(|&p| Some(p)).collect();
        let back: Vec<Option<usize>> = order.iter().map(|&o| Some(o)).collect();
        let gens = self.gens.iter().map(|g| g.map_variables(&er, &fwd)).collect::<Result<Vec<_>>>()?;
        let gb = reduced_groebner(&er, &gens, &TermOrder::elimination(eliminate.len()))?;
        let kept = gb
            .basis()
            .iter()
            .filter(|g| (0..eliminate.len()).all(|v| !g.involves(v)))
            .map(|g| g.map_variables(&self.ring, &back))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&self.ring, kept)
    }
}

/// Greatest common divisor of two forms, normalized monic.
pub fn gcd2(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    check_same(a.ring(), b.ring())?;
    if a.is_zero() {
        return Ok(b.monic());
    }
    if b.is_zero() {
        return Ok(a.monic());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(Polynomial::one(a.ring()));
    }
    if !a.is_homogeneous() || !b.is_homogeneous() {
        return Err(Error::Inhomogeneous("gcd of inhomogeneous polynomials".into()));
    }
    // ker(a, b) is generated by (b/g, -a/g).
    let k = FreeModuleMap::from_ideal(a.ring(), &[a.clone(), b.clone()])?.kernel()?;
    if k.source_rank() != 1 {
        return Err(Error::NotPrincipal);
    }
    let u = &k.columns()[0][0];
    Ok(b.exact_divide(u)?.monic())
}

/// `gcd(f_1, ..., f_r)`, monic; zero entries are ignored.
pub fn poly_gcd(fs: &[Polynomial]) -> Result<Polynomial> {
    let nonzero: Vec<&Polynomial> = fs.iter().filter(|f| !f.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return Err(Error::InvalidArgument("gcd of zero polynomials".into()));
    };
    let mut g = first.monic();
    for f in &nonzero[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd2(&g, f)?;
    }
    Ok(g)
}

/// Least common multiple of two forms, normalized monic.
pub fn poly_lcm(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    let g = gcd2(a, b)?;
    Ok(a.mul(b)?.exact_divide(&g)?.monic())
}
