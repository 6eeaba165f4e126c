//! Rational maps `P^m ⇢ P^n` given by forms of a common degree, their Rees
//! ideals, images and fibers.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{reduced_groebner, FreeModuleMap};
use crate::ideal::{poly_gcd, Ideal};
use crate::monomial::TermOrder;
use crate::points::PointProjective;
use crate::poly::Polynomial;
use crate::ring::{Grading, Ring, RingRef};

/// Outcome of a checked statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

/// `x ↦ (f_0(x) : ... : f_n(x))`.
#[derive(Debug)]
pub struct ParameterizedMap {
    source: RingRef,
    target: RingRef,
    forms: Vec<Polynomial>,
    degree: u32,
    /// Common factor divided out of the input forms (1 when coprime).
    removed_factor: Polynomial,
    rees: OnceLock<ReesData>,
    saturated_powers: Mutex<BTreeMap<u32, Ideal>>,
}

impl Clone for ParameterizedMap {
    fn clone(&self) -> Self {
        let rees = OnceLock::new();
        if let Some(r) = self.rees.get() {
            let _ = rees.set(r.clone());
        }
        ParameterizedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            forms: self.forms.clone(),
            degree: self.degree,
            removed_factor: self.removed_factor.clone(),
            rees,
            saturated_powers: Mutex::new(self.saturated_powers.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for ParameterizedMap {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.forms == other.forms
    }
}

/// Target variables named `T0..Tn`.
pub fn build_map(forms: Vec<Polynomial>) -> Result<ParameterizedMap> {
    let Some(first) = forms.first() else {
        return Err(Error::Degenerate("no forms given".into()));
    };
    let source = first.ring().clone();
    let names: Vec<String> = (0..forms.len()).map(|j| format!("T{j}")).collect();
    let target = Ring::new(&names, source.field())?;
    build_map_with_target(forms, &target)
}

pub fn build_map_with_target(forms: Vec<Polynomial>, target: &RingRef) -> Result<ParameterizedMap> {
    let Some(first) = forms.first() else {
        return Err(Error::Degenerate("no forms given".into()));
    };
    let source = first.ring().clone();
    if target.nvars() != forms.len() {
        return Err(Error::LengthMismatch { expected: target.nvars(), got: forms.len() });
    }
    if target.field() != source.field() {
        return Err(Error::RingMismatch("source and target fields differ".into()));
    }
    if source.nvars() < 3 {
        return Err(Error::DimensionPrecondition("the source must be P^m with m >= 2".into()));
    }
    let mut degree = None;
    for f in &forms {
        crate::ring::check_same(&source, f.ring())?;
        if f.is_zero() {
            continue;
        }
        if !f.is_homogeneous() {
            return Err(Error::Inhomogeneous(format!("form {f} is not homogeneous")));
        }
        match degree {
            None => degree = f.degree(),
            Some(d) if Some(d) != f.degree() => {
                return Err(Error::Inhomogeneous("forms have different degrees".into()));
            }
            _ => {}
        }
    }
    if degree.is_none() {
        return Err(Error::Degenerate("all forms are zero".into()));
    }
    let g = poly_gcd(&forms)?;
    let forms: Vec<Polynomial> =
        if g.is_constant() { forms } else { forms.iter().map(|f| f.exact_divide(&g)).collect::<Result<_>>()? };
    let degree = forms.iter().find_map(|f| f.degree()).unwrap();
    if degree == 0 {
        return Err(Error::Degenerate("forms are constant after removing their common factor".into()));
    }
    Ok(ParameterizedMap {
        source,
        target: target.clone(),
        forms,
        degree,
        removed_factor: g,
        rees: OnceLock::new(),
        saturated_powers: Mutex::new(BTreeMap::new()),
    })
}

/// Rees ideal data in `S = k[X, T]` (bigraded) and the image ideal in `B`.
#[derive(Clone, Debug)]
pub struct ReesData {
    pub ring: RingRef,
    /// Kernel of `S → R[t]`, `T_j ↦ t f_j`.
    pub rees: Ideal,
    /// Linear syzygy forms `Σ a_j T_j`.
    pub linear: Ideal,
    /// `rees ∩ B`, as an ideal of the target ring.
    pub image: Ideal,
}

impl ParameterizedMap {
    pub fn source(&self) -> &RingRef {
        &self.source
    }

    pub fn target(&self) -> &RingRef {
        &self.target
    }

    pub fn forms(&self) -> &[Polynomial] {
        &self.forms
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `m` for a map out of `P^m`.
    pub fn source_dim(&self) -> usize {
        self.source.nvars() - 1
    }

    /// `n` for a map into `P^n`.
    pub fn target_dim(&self) -> usize {
        self.target.nvars() - 1
    }

    pub fn removed_factor(&self) -> &Polynomial {
        &self.removed_factor
    }

    pub fn base_ideal(&self) -> Ideal {
        Ideal::new(&self.source, self.forms.clone()).unwrap()
    }

    /// `(I^s)^sat`, cached.
    pub fn saturated_power(&self, s: u32) -> Result<Ideal> {
        if let Some(j) = self.saturated_powers.lock().unwrap().get(&s) {
            return Ok(j.clone());
        }
        let j = self.base_ideal().power(s)?.saturation()?;
        self.saturated_powers.lock().unwrap().insert(s, j.clone());
        Ok(j)
    }

    /// `f(x)` as a target point, or `None` on the base locus.
    pub fn apply(&self, x: &[crate::scalar::Scalar]) -> Result<Option<PointProjective>> {
        let v = self.forms.iter().map(|f| f.evaluate(x)).collect::<Result<Vec<_>>>()?;
        if v.iter().all(|c| c.is_zero()) {
            return Ok(None);
        }
        Ok(Some(PointProjective::new(v)?))
    }

    /// The ring `k[X, T]` with `deg X = (1,0)`, `deg T = (0,1)`.
    pub fn bigraded_ring(&self) -> Result<RingRef> {
        let mut names: Vec<String> = self.source.names().to_vec();
        names.extend(self.target.names().iter().cloned());
        Ring::with_grading(&names, self.source.field(), Grading::Bigraded { split: self.source.nvars() })
    }

    pub fn rees_data(&self) -> Result<&ReesData> {
        if let Some(r) = self.rees.get() {
            return Ok(r);
        }
        let r = self.compute_rees()?;
        Ok(self.rees.get_or_init(|| r))
    }

    fn compute_rees(&self) -> Result<ReesData> {
        let m1 = self.source.nvars();
        let n1 = self.target.nvars();
        let s = self.bigraded_ring()?;
        // Auxiliary ring k[t, X, T] with blocks t | X | T.
        let mut names = vec!["t_aux".to_string()];
        names.extend(s.names().iter().cloned());
        let aux = Ring::new(&names, self.source.field())?;
        let x_img: Vec<Option<usize>> = (0..m1).map(|i| Some(i + 1)).collect();
        let t = Polynomial::var(&aux, 0);
        let mut gens = Vec::with_capacity(n1);
        for (j, f) in self.forms.iter().enumerate() {
            let fa = f.map_variables(&aux, &x_img)?;
            gens.push(Polynomial::var(&aux, 1 + m1 + j).sub(&t.mul(&fa)?)?);
        }
        let order = TermOrder::Elimination(vec![1, 1 + m1]);
        let gb = reduced_groebner(&aux, &gens, &order)?;
        let back: Vec<Option<usize>> = (0..1 + m1 + n1).map(|k| if k == 0 { None } else { Some(k - 1) }).collect();
        let to_b: Vec<Option<usize>> = (0..1 + m1 + n1).map(|k| if k > m1 { Some(k - 1 - m1) } else { None }).collect();
        let mut rees_gens = Vec::new();
        let mut image_gens = Vec::new();
        for g in gb.basis() {
            if g.involves(0) {
                continue;
            }
            rees_gens.push(g.map_variables(&s, &back)?);
            if (1..=m1).all(|k| !g.involves(k)) {
                image_gens.push(g.map_variables(&self.target, &to_b)?);
            }
        }
        let syz = self.syzygies()?;
        let x_to_s: Vec<Option<usize>> = (0..m1).map(Some).collect();
        let mut linear = Vec::new();
        for col in syz.columns() {
            let mut acc = Polynomial::zero(&s);
            for (j, a) in col.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let a_s = a.map_variables(&s, &x_to_s)?;
                acc = acc.add(&a_s.mul(&Polynomial::var(&s, m1 + j))?)?;
            }
            linear.push(acc);
        }
        Ok(ReesData {
            ring: s.clone(),
            rees: Ideal::new(&s, rees_gens)?,
            linear: Ideal::new(&s, linear)?,
            image: Ideal::new(&self.target, image_gens)?,
        })
    }

    /// Syzygies of `(f_0, ..., f_n)` as a map `⊕ R(-d-a) → R(-d)^{n+1}`.
    pub fn syzygies(&self) -> Result<FreeModuleMap> {
        let d = self.degree as i64;
        let cols: Vec<Vec<Polynomial>> = self.forms.iter().map(|f| vec![f.clone()]).collect();
        FreeModuleMap::with_source_degrees(&self.source, vec![0], vec![d; cols.len()], cols)?.kernel()
    }

    /// Dimension of the closed image in `P^n`.
    pub fn image_dimension(&self) -> Result<i64> {
        let (dim, _) = self.rees_data()?.image.dim_deg()?;
        Ok(dim as i64 - 1)
    }

    pub fn is_generically_finite(&self) -> Result<bool> {
        Ok(self.image_dimension()? == self.source_dim() as i64)
    }

    /// Fiber ideals in `R` over `y`.
    pub fn fiber_ideals(&self, y: &PointProjective) -> Result<FiberIdeals> {
        if y.len() != self.target.nvars() {
            return Err(Error::LengthMismatch { expected: self.target.nvars(), got: y.len() });
        }
        let data = self.rees_data()?;
        let m1 = self.source.nvars();
        let mut images: Vec<Polynomial> = (0..m1).map(|i| Polynomial::var(&self.source, i)).collect();
        images.extend(y.coords().iter().map(|c| Polynomial::constant(&self.source, c.clone())));
        let spec = |j: &Ideal| -> Result<Ideal> {
            Ideal::new(&self.source, j.gens().iter().map(|g| g.substitute(&self.source, &images)).collect::<Result<_>>()?)
        };
        let i = y.pivot();
        let minors = (0..self.forms.len())
            .filter(|&j| j != i)
            .map(|j| self.forms[j].sub(&self.forms[i].scale(&y.coords()[j])))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiberIdeals {
            rees: spec(&data.rees)?,
            symmetric: spec(&data.linear)?,
            minors: Ideal::new(&self.source, minors)?,
        })
    }

    /// Projective dimension of the fiber over `y` (-1 when empty).
    pub fn fiber_dimension(&self, y: &PointProjective) -> Result<i64> {
        let f = self.fiber_ideals(y)?;
        let (d, _) = f.rees.dim_deg()?;
        Ok(d as i64 - 1)
    }
}

/// Specializations at a target point.
#[derive(Clone, Debug)]
pub struct FiberIdeals {
    /// Rees ideal at `T = y`.
    pub rees: Ideal,
    /// Linear syzygy forms at `T = y`.
    pub symmetric: Ideal,
    /// `f_j - p_j f_i` for the pivot `i` of `y`.
    pub minors: Ideal,
}
