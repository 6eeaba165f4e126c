//! Fibers of dimension `m-1` of the graph projection, their unmixed
//! divisors `h_y`, and the statements checked against them.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::approx::{presentation_matrix, PresentationData};
use crate::error::{Error, Result};
use crate::groebner::reduced_groebner;
use crate::ideal::{poly_gcd, Ideal};
use crate::map::{ParameterizedMap, Verdict};
use crate::monomial::{binomial, Monomial, TermOrder};
use crate::points::{affine_points, PointProjective};
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::{Field, Scalar};

/// How a fiber point was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Linear factors of a low-degree element of `(I^s)^sat`.
    Candidate,
    /// Support of the presentation of `N`.
    Fitting,
    /// Enumeration of source points over a finite field.
    Enumeration,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberRecord {
    pub point: PointProjective,
    /// First nonzero coordinate, normalized to 1.
    pub pivot: usize,
    pub divisor: Polynomial,
    pub divisor_degree: u32,
    pub fiber_dimension: i64,
    /// `g_j = (f_j - p_j f_i) / h_y` for `j ≠ i`, when materialized.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cofactors: Option<Vec<Polynomial>>,
    pub found_by: BTreeSet<Route>,
}

/// `h_y = gcd(f_j - p_j f_i)` over `j ≠ i`, `i` the pivot of `y`.
pub fn unmixed_part(map: &ParameterizedMap, y: &PointProjective) -> Result<Polynomial> {
    if y.len() != map.forms().len() {
        return Err(Error::LengthMismatch { expected: map.forms().len(), got: y.len() });
    }
    let i = y.pivot();
    let f = map.forms();
    let diffs = (0..f.len())
        .filter(|&j| j != i)
        .map(|j| f[j].sub(&f[i].scale(&y.coords()[j])))
        .collect::<Result<Vec<_>>>()?;
    if diffs.iter().all(|p| p.is_zero()) {
        return Err(Error::Degenerate(format!("the map is constant equal to {y}")));
    }
    poly_gcd(&diffs)
}

/// Every `y` with `f_j ≡ p_j f_i mod h` for all `j`.
pub fn recover_points_from_divisor(map: &ParameterizedMap, h: &Polynomial) -> Result<Vec<PointProjective>> {
    if h.is_constant() {
        return Err(Error::InvalidArgument("the divisor must be nonconstant".into()));
    }
    if !h.is_homogeneous() {
        return Err(Error::Inhomogeneous(format!("divisor {h} is not homogeneous")));
    }
    let gb = reduced_groebner(h.ring(), std::slice::from_ref(h), &TermOrder::GrevLex)?;
    let residues = map.forms().iter().map(|f| gb.normal_form(f)).collect::<Result<Vec<_>>>()?;
    let Some(i) = residues.iter().position(|r| !r.is_zero()) else {
        return Ok(Vec::new());
    };
    let (lm, lc) = residues[i].leading().cloned().unwrap();
    let field = h.ring().field();
    let mut coords = Vec::with_capacity(residues.len());
    for r in &residues {
        // r = λ r_i forces λ from the coefficient of lm(r_i).
        let lambda = &r.coefficient(&lm) * &lc.inv();
        if !r.sub(&residues[i].scale(&lambda))?.is_zero() {
            return Ok(Vec::new());
        }
        coords.push(lambda);
    }
    debug_assert!(!coords[i].is_zero() && coords[i] == field.one());
    Ok(vec![PointProjective::new(coords)?])
}

fn record_at(map: &ParameterizedMap, y: &PointProjective, route: Route) -> Result<Option<FiberRecord>> {
    let dim = map.fiber_dimension(y)?;
    if dim != map.source_dim() as i64 - 1 {
        return Ok(None);
    }
    let h = unmixed_part(map, y)?;
    if h.is_constant() {
        return Err(Error::Inconsistent(format!("fiber over {y} has dimension {dim} but no divisor")));
    }
    Ok(Some(FiberRecord {
        point: y.clone(),
        pivot: y.pivot(),
        divisor_degree: h.degree().unwrap(),
        divisor: h,
        fiber_dimension: dim,
        cofactors: None,
        found_by: BTreeSet::from([route]),
    }))
}

/// Linear forms dividing `g`, up to scaling, and whether every linear
/// factor over the algebraic closure was found.
///
/// `ℓ = X_i + Σ_{k>i} c_k X_k` divides `g` exactly when `g` vanishes on
/// `ℓ = 0`; the coefficients of the restriction are polynomials in the `c_k`.
pub fn linear_factors(g: &Polynomial) -> Result<(Vec<Polynomial>, bool)> {
    let r = g.ring();
    let nv = r.nvars();
    let field = r.field();
    let mut out = Vec::new();
    let mut complete = true;
    if g.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    for i in 0..nv {
        let unknowns: Vec<usize> = (i + 1..nv).collect();
        let u = unknowns.len();
        let mut names: Vec<String> = unknowns.iter().map(|k| format!("#c{k}")).collect();
        let xs: Vec<usize> = (0..nv).filter(|&j| j != i).collect();
        names.extend(xs.iter().map(|&j| r.name(j).to_string()));
        let big = Ring::new(&names, field)?;
        let mut images = Vec::with_capacity(nv);
        for j in 0..nv {
            if j == i {
                let mut acc = Polynomial::zero(&big);
                for (t, &k) in unknowns.iter().enumerate() {
                    let xk = u + xs.iter().position(|&x| x == k).unwrap();
                    acc = acc.sub(&Polynomial::var(&big, t).mul(&Polynomial::var(&big, xk))?)?;
                }
                images.push(acc);
            } else {
                images.push(Polynomial::var(&big, u + xs.iter().position(|&x| x == j).unwrap()));
            }
        }
        let restricted = g.substitute(&big, &images)?;
        let chart_names: Vec<String> = names[..u].to_vec();
        let chart = Ring::new(&chart_names, field)?;
        let mut groups: std::collections::HashMap<Vec<u16>, Vec<(Monomial, Scalar)>> = Default::default();
        for (m, c) in restricted.terms() {
            let e = m.exps();
            groups.entry(e[u..].to_vec()).or_default().push((Monomial::from_exponents(&e[..u]), c.clone()));
        }
        let gens: Vec<Polynomial> = groups.into_values().map(|t| Polynomial::from_terms(&chart, t)).collect();
        let (pts, count, ok) = affine_points(&chart, &gens)?;
        complete &= ok && pts.len() == count;
        for p in pts {
            let mut l = Polynomial::var(r, i);
            for (t, &k) in unknowns.iter().enumerate() {
                l = l.add(&Polynomial::var(r, k).scale(&p[t]))?;
            }
            out.push(l);
        }
    }
    Ok((out, complete))
}

/// One pass of the candidate-divisor search at a power `s`.
#[derive(Clone, Debug, Serialize)]
pub struct CandidatePass {
    pub s: u32,
    /// `indeg((I^s)^sat)`.
    pub nu: u32,
    pub sd: u32,
    /// `gcd` of a basis of `((I^s)^sat)_ν`, when `ν < sd`.
    pub candidate: Option<Polynomial>,
    pub linear_factors: Vec<Polynomial>,
    /// Degree of the candidate left after removing all linear factors.
    pub residual_degree: u32,
    /// The candidate split into base-field linear factors.
    pub splits: bool,
}

pub fn candidate_pass(map: &ParameterizedMap, s: u32) -> Result<CandidatePass> {
    let j = map.saturated_power(s)?;
    let sd = s * map.degree();
    let nu = j.initial_degree().ok_or_else(|| Error::Degenerate("zero base ideal".into()))?;
    let mut pass =
        CandidatePass { s, nu, sd, candidate: None, linear_factors: Vec::new(), residual_degree: 0, splits: false };
    if nu >= sd {
        return Ok(pass);
    }
    let g = poly_gcd(&j.component_basis(nu)?)?;
    let mut residual = g.clone();
    let mut complete = true;
    if !g.is_constant() {
        let (factors, ok) = linear_factors(&g)?;
        complete = ok;
        for l in &factors {
            while let Ok(q) = residual.exact_divide(l) {
                residual = q;
            }
        }
        pass.linear_factors = factors;
    }
    pass.residual_degree = residual.degree().unwrap_or(0);
    pass.splits = complete && pass.residual_degree == 0;
    pass.candidate = Some(g);
    Ok(pass)
}

/// Whether `𝔓 ⊆ 𝔓₁ : 𝔪^∞`, a proxy for `ℬ` being locally a complete intersection.
pub fn lci_proxy(map: &ParameterizedMap) -> Result<bool> {
    let data = map.rees_data()?;
    let mut sats = Vec::new();
    for i in 0..map.source().nvars() {
        sats.push(data.linear.saturate_variable(i)?);
    }
    for g in data.rees.gens() {
        for s in &sats {
            if !s.contains(g)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the Rees and symmetric fibers over `y` have the same saturation.
pub fn fibers_agree(map: &ParameterizedMap, y: &PointProjective) -> Result<bool> {
    let f = map.fiber_ideals(y)?;
    f.rees.saturation()?.equals(&f.symmetric.saturation()?)
}

#[derive(Clone, Debug, Serialize)]
pub struct FittingRoute {
    pub lci_proxy: bool,
    pub support: Vec<PointProjective>,
    pub extraction_complete: bool,
    /// Support points whose fiber is not of dimension `m-1`.
    pub rejected: Vec<PointProjective>,
}

/// All fibers of dimension `m-1` that were found, and whether that is all of them.
#[derive(Clone, Debug, Serialize)]
pub struct FiberInventory {
    pub records: Vec<FiberRecord>,
    pub complete: bool,
    /// Every reason the list is known to be complete.
    pub complete_because: Vec<String>,
    pub base_locus_empty: bool,
    pub candidate_passes: Vec<CandidatePass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitting: Option<FittingRoute>,
    pub notes: Vec<String>,
}

impl FiberInventory {
    pub fn divisor_degree_sum(&self) -> u32 {
        self.records.iter().map(|r| r.divisor_degree).sum()
    }

    pub fn points(&self) -> Vec<PointProjective> {
        self.records.iter().map(|r| r.point.clone()).collect()
    }

    fn add(&mut self, rec: FiberRecord) {
        if let Some(old) = self.records.iter_mut().find(|r| r.point == rec.point) {
            old.found_by.extend(rec.found_by);
        } else {
            self.records.push(rec);
        }
    }
}

/// Computes the presentation of `N` itself when the map is `P^2 ⇢ P^3`.
pub fn find_one_dim_fibers(map: &ParameterizedMap, s_max: u32) -> Result<FiberInventory> {
    let presentation = if map.source_dim() == 2 && map.target_dim() == 3 {
        Some(presentation_matrix(map)?)
    } else {
        None
    };
    find_one_dim_fibers_with(map, s_max, presentation.as_ref())
}

pub fn find_one_dim_fibers_with(
    map: &ParameterizedMap,
    s_max: u32,
    presentation: Option<&PresentationData>,
) -> Result<FiberInventory> {
    if !map.is_generically_finite()? {
        return Err(Error::NotGenericallyFinite {
            image_dim: map.image_dimension()?,
            expected: map.source_dim() as i64,
        });
    }
    let (base_dim, _) = map.base_ideal().dim_deg()?;
    let mut inv = FiberInventory {
        records: Vec::new(),
        complete: false,
        complete_because: Vec::new(),
        base_locus_empty: base_dim == 0,
        candidate_passes: Vec::new(),
        fitting: None,
        notes: Vec::new(),
    };
    if inv.base_locus_empty {
        inv.complete = true;
        inv.complete_because.push("the base locus is empty".into());
        return Ok(inv);
    }

    let mut tried: HashSet<PointProjective> = HashSet::new();
    for s in 1..=s_max {
        let pass = candidate_pass(map, s)?;
        for l in &pass.linear_factors {
            for y in recover_points_from_divisor(map, l)? {
                if !tried.insert(y.clone()) {
                    continue;
                }
                if let Some(rec) = record_at(map, &y, Route::Candidate)? {
                    inv.add(rec);
                }
            }
        }
        if pass.candidate.is_some() && pass.residual_degree > 0 {
            inv.notes.push(format!(
                "candidate divisor at s = {s} has a factor of degree {} without linear factors",
                pass.residual_degree
            ));
        }
        if pass.splits && inv.complete_because.is_empty() {
            inv.complete_because.push(format!("the candidate divisor at s = {s} splits into linear factors"));
        }
        inv.candidate_passes.push(pass);
    }

    if let Some(p) = presentation {
        let lci = lci_proxy(map)?;
        let mut route = FittingRoute {
            lci_proxy: lci,
            support: p.fitting.points.clone(),
            extraction_complete: p.fitting.zero_dimensional && p.fitting.complete,
            rejected: Vec::new(),
        };
        for y in &p.fitting.points {
            match record_at(map, y, Route::Fitting)? {
                Some(rec) => inv.add(rec),
                None => route.rejected.push(y.clone()),
            }
        }
        if !p.fitting.zero_dimensional {
            inv.notes.push("the Fitting ideal of the presentation is not zero-dimensional".into());
        }
        if lci && route.extraction_complete && route.rejected.is_empty() {
            inv.complete_because.push("the support of the presentation was fully extracted".into());
        }
        if !lci {
            inv.notes.push("the lci proxy fails; the presentation support is used only as a candidate list".into());
        }
        inv.fitting = Some(route);
    }
    inv.complete = !inv.complete_because.is_empty();
    if !inv.complete {
        inv.notes.push("sound, possibly incomplete".into());
    }
    inv.records.sort_by(|a, b| a.point.cmp_canonical(&b.point));
    Ok(inv)
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorBoundRecord {
    pub s: u32,
    pub nu: u32,
    pub divisor_degree_sum: u32,
    pub sd: u32,
    /// `Σ deg h_y ≤ ν` when `ν < sd`.
    pub verdict: Verdict,
    /// `⌊d/2⌋ d - 1`, reported for comparison only.
    pub prior_bound: i64,
}

pub fn verify_divisor_bound(map: &ParameterizedMap, s: u32, fibers: &[FiberRecord]) -> Result<DivisorBoundRecord> {
    let d = map.degree();
    let nu = map
        .saturated_power(s)?
        .initial_degree()
        .ok_or_else(|| Error::Degenerate("zero base ideal".into()))?;
    let sum: u32 = fibers.iter().map(|r| r.divisor_degree).sum();
    let sd = s * d;
    let verdict = if nu < sd { Verdict::from_bool(sum <= nu) } else { Verdict::NotApplicable };
    Ok(DivisorBoundRecord { s, nu, divisor_degree_sum: sum, sd, verdict, prior_bound: (d / 2 * d) as i64 - 1 })
}

#[derive(Clone, Debug, Serialize)]
pub struct CofactorCheck {
    pub cofactors: Vec<Polynomial>,
    /// `I = (f_i) + h_y (g_j : j ≠ i)`.
    pub generates: bool,
    /// `I^sat ⊆ (f_i, h_y)`.
    pub saturation_contained: bool,
}

impl CofactorCheck {
    pub fn holds(&self) -> bool {
        self.generates && self.saturation_contained
    }
}

/// Errors with `NotDivisible` when `h_y` does not divide some `f_j - p_j f_i`.
pub fn cofactor_check(map: &ParameterizedMap, rec: &FiberRecord) -> Result<CofactorCheck> {
    let f = map.forms();
    let i = rec.point.pivot();
    let h = &rec.divisor;
    let mut cofactors = Vec::new();
    for j in (0..f.len()).filter(|&j| j != i) {
        let diff = f[j].sub(&f[i].scale(&rec.point.coords()[j]))?;
        cofactors.push(diff.exact_divide(h)?);
    }
    let ring = map.source();
    let mut gens = vec![f[i].clone()];
    for g in &cofactors {
        gens.push(h.mul(g)?);
    }
    let rebuilt = Ideal::new(ring, gens)?;
    let generates = rebuilt.equals(&map.base_ideal())?;
    let pencil = Ideal::new(ring, vec![f[i].clone(), h.clone()])?;
    let saturation_contained = pencil.contains_ideal(&map.saturated_power(1)?)?;
    Ok(CofactorCheck { cofactors, generates, saturation_contained })
}

/// Fills in the cofactors of each record.
pub fn materialize_cofactors(map: &ParameterizedMap, records: &mut [FiberRecord]) -> Result<()> {
    for rec in records.iter_mut() {
        let f = map.forms();
        let i = rec.pivot;
        let mut g = Vec::new();
        for j in (0..f.len()).filter(|&j| j != i) {
            g.push(f[j].sub(&f[i].scale(&rec.point.coords()[j]))?.exact_divide(&rec.divisor)?);
        }
        rec.cofactors = Some(g);
    }
    Ok(())
}

const ORACLE_POINT_LIMIT: u64 = 200_000;

/// Image points over `GF(q)` whose fiber has dimension `m-1`, found by
/// enumerating `P^m(GF(q))`.
pub fn brute_force_fiber_oracle(map: &ParameterizedMap) -> Result<Vec<FiberRecord>> {
    let Field::Prime(q) = map.source().field() else {
        return Err(Error::InvalidArgument("enumeration needs a prime field".into()));
    };
    let field = map.source().field();
    let nv = map.source().nvars();
    let total: u64 = (0..nv as u32).map(|k| (q as u64).pow(k)).sum();
    if total > ORACLE_POINT_LIMIT {
        return Err(Error::InvalidArgument(format!("P^{}(GF({q})) has {total} points", nv - 1)));
    }
    let mut images: HashSet<PointProjective> = HashSet::new();
    for pivot in 0..nv {
        let free = nv - pivot - 1;
        let count = (q as u64).pow(free as u32);
        for code in 0..count {
            let mut x = vec![field.zero(); nv];
            x[pivot] = field.one();
            let mut c = code;
            for slot in x.iter_mut().skip(pivot + 1) {
                *slot = field.from_i64((c % q as u64) as i64);
                c /= q as u64;
            }
            if let Some(y) = map.apply(&x)? {
                images.insert(y);
            }
        }
    }
    let mut out = Vec::new();
    for y in images {
        if let Some(rec) = record_at(map, &y, Route::Enumeration)? {
            out.push(rec);
        }
    }
    out.sort_by(|a, b| a.point.cmp_canonical(&b.point));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeFormulaRecord {
    /// `Σ C(deg h_y + m - 1, m)`.
    pub predicted: i64,
    pub observed: Option<i64>,
    pub verdict: Verdict,
}

/// Compares `deg N` with the sum over the fibers; needs a complete list
/// and a stable value of `N_s`.
pub fn degree_formula_check(fibers: &[FiberRecord], observed: Option<i64>, m: usize, complete: bool) -> DegreeFormulaRecord {
    let predicted: i64 =
        fibers.iter().map(|r| binomial(r.divisor_degree as u64 + m as u64 - 1, m as u64) as i64).sum();
    let verdict = match observed {
        Some(v) if complete => Verdict::from_bool(v == predicted),
        _ => Verdict::NotApplicable,
    };
    DegreeFormulaRecord { predicted, observed, verdict }
}

/// The fiber points with `deg h_y ≥ μ + m + 1`, where `M_μ` is supported.
pub fn predicted_shifted_support(fibers: &[FiberRecord], mu: i64, m: usize) -> Vec<PointProjective> {
    fibers
        .iter()
        .filter(|r| r.divisor_degree as i64 > mu + m as i64)
        .map(|r| r.point.clone())
        .collect()
}
