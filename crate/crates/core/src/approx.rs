//! The approximation-complex presentation `B(-2)^m → B(-1)^n → N → 0` of
//! `N = ⊕_s H²_𝔪(I^s)_{sd-2}` for four forms in three variables.

use serde::Serialize;

use crate::cohomology::SerreData;
use crate::error::{Error, Result};
use crate::groebner::{FreeModuleMap, Lifter, ModuleGroebnerBasis, Vector};
use crate::hilbert::HilbertSeries;
use crate::ideal::Ideal;
use crate::linalg::Matrix;
use crate::map::{ParameterizedMap, Verdict};
use crate::monomial::{binomial, monomials_of_degree, Monomial};
use crate::points::{rational_points_zero_dim, PointProjective};
use crate::poly::Polynomial;
use crate::ring::RingRef;
use crate::scalar::Scalar;

const FORMS: usize = 4;

/// Subsets of `{0,1,2,3}` of size `q`, in lexicographic order.
fn subsets(q: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for j in start..FORMS {
            cur.push(j);
            rec(j + 1, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, q, &mut Vec::new(), &mut out);
    out
}

/// `e_i ⌟ e_S` as `(sign, index of S \ {i})`, or `None` when `i ∉ S`.
fn contract(i: usize, s: &[usize], lower: &[Vec<usize>]) -> Option<(bool, usize)> {
    let p = s.iter().position(|&j| j == i)?;
    let rest: Vec<usize> = s.iter().copied().filter(|&j| j != i).collect();
    Some((p % 2 == 0, lower.iter().position(|t| *t == rest).unwrap()))
}

/// Koszul complex on the four forms and its cycle modules.
#[derive(Clone, Debug)]
pub struct KoszulData {
    pub ring: RingRef,
    pub degree: i64,
    /// `differentials[q-1]` is `K_q → K_{q-1}`, `K_q = R(-qd)^{C(4,q)}`.
    pub differentials: Vec<FreeModuleMap>,
    /// `cycles[q]` maps a minimal generating set onto `Z_q ⊂ K_q`.
    pub cycles: Vec<FreeModuleMap>,
}

impl KoszulData {
    /// `∂_i(v)` for `v ∈ K_q`.
    pub fn contraction(&self, i: usize, q: usize, v: &[Polynomial]) -> Vector {
        let upper = subsets(q);
        let lower = subsets(q - 1);
        let mut out = vec![Polynomial::zero(&self.ring); lower.len()];
        for (s, p) in upper.iter().zip(v) {
            if let Some((plus, t)) = contract(i, s, &lower) {
                let term = if plus { p.clone() } else { p.neg() };
                out[t] = out[t].add(&term).unwrap();
            }
        }
        out
    }
}

pub fn koszul_cycles(map: &ParameterizedMap) -> Result<KoszulData> {
    if map.source().nvars() != 3 || map.forms().len() != FORMS {
        return Err(Error::Shape(format!(
            "the presentation needs a map P^2 ⇢ P^3, got P^{} ⇢ P^{}",
            map.source_dim(),
            map.target_dim()
        )));
    }
    let ring = map.source().clone();
    let d = map.degree() as i64;
    let f = map.forms();
    let mut differentials = Vec::new();
    for q in 1..=FORMS {
        let upper = subsets(q);
        let lower = subsets(q - 1);
        let columns: Vec<Vector> = upper
            .iter()
            .map(|s| {
                let mut col = vec![Polynomial::zero(&ring); lower.len()];
                for i in s {
                    let (plus, t) = contract(*i, s, &lower).unwrap();
                    col[t] = if plus { f[*i].clone() } else { f[*i].neg() };
                }
                col
            })
            .collect();
        differentials.push(FreeModuleMap::with_source_degrees(
            &ring,
            vec![(q as i64 - 1) * d; lower.len()],
            vec![q as i64 * d; upper.len()],
            columns,
        )?);
    }
    let mut cycles = vec![FreeModuleMap::with_source_degrees(
        &ring,
        vec![0],
        vec![0],
        vec![vec![Polynomial::one(&ring)]],
    )?];
    for diff in &differentials[..3] {
        cycles.push(diff.kernel()?);
    }
    Ok(KoszulData { ring, degree: d, differentials, cycles })
}

/// A k-basis of `Hom(Z, R)_deg`, where `gens` maps generators onto `Z`.
/// Elements are coordinate vectors over `hom_coordinates(gens, deg)`.
#[derive(Clone, Debug)]
struct HomPiece {
    coords: Vec<(usize, Monomial)>,
    basis: Vec<Vec<Scalar>>,
}

fn hom_coordinates(gens: &FreeModuleMap, deg: i64) -> Vec<(usize, Monomial)> {
    let n = gens.ring().nvars();
    let mut out = Vec::new();
    for (k, &a) in gens.source_degrees().iter().enumerate() {
        if deg + a >= 0 {
            for m in monomials_of_degree(n, (deg + a) as u32) {
                out.push((k, m));
            }
        }
    }
    out
}

fn hom_piece(gens: &FreeModuleMap, deg: i64) -> Result<HomPiece> {
    let relations = gens.kernel()?;
    let mat = relations.transpose().matrix_in_degree(deg);
    let coords = hom_coordinates(gens, deg);
    let basis = if relations.source_rank() == 0 {
        (0..coords.len())
            .map(|k| {
                let mut v = vec![gens.ring().field().zero(); coords.len()];
                v[k] = gens.ring().field().one();
                v
            })
            .collect()
    } else {
        debug_assert_eq!(mat.cols(), coords.len());
        mat.nullspace()
    };
    Ok(HomPiece { coords, basis })
}

/// `dim H³_𝔪(Z)_t = dim Hom(Z, R)_{-t-3}`.
pub fn dual_hdim(gens: &FreeModuleMap, t: i64) -> Result<usize> {
    Ok(hom_piece(gens, -t - 3)?.basis.len())
}

/// `(l, m, n)`: ranks of `B(-3)^l → B(-2)^m → B(-1)^n`.
pub fn complex_ranks(k: &KoszulData) -> Result<(usize, usize, usize)> {
    let d = k.degree;
    Ok((
        dual_hdim(&k.cycles[3], 3 * d - 2)?,
        dual_hdim(&k.cycles[2], 2 * d - 2)?,
        dual_hdim(&k.cycles[1], d - 2)?,
    ))
}

/// Support of the cokernel read off from maximal minors.
#[derive(Clone, Debug, Serialize)]
pub struct FittingSupport {
    /// All maximal minors, or generators of the cokernel's annihilator.
    pub generators: Vec<Polynomial>,
    pub exact_minors: bool,
    pub zero_dimensional: bool,
    /// Points of `V(Fitt_0)` over the base field, each certified by a rank drop.
    pub points: Vec<PointProjective>,
    /// No point of `V(Fitt_0)` is missing from `points`.
    pub complete: bool,
}

/// The presentation of `N` over `B` and what it determines.
#[derive(Clone, Debug)]
pub struct PresentationData {
    pub l: usize,
    pub mrank: usize,
    pub n: usize,
    /// `dim H¹_𝔪(R/I)_{d-2}`, computed from Hilbert functions.
    pub n_from_hilbert: i64,
    /// `n × mrank` matrix of linear forms in `B`.
    pub matrix: Vec<Vec<Polynomial>>,
    pub cokernel: HilbertSeries,
    pub fitting: FittingSupport,
}

impl PresentationData {
    pub fn coker_dim(&self, s: i64) -> i64 {
        self.cokernel.hilbert_function(s)
    }

    /// Degree of `N` (its Hilbert polynomial is constant).
    pub fn degree(&self) -> i64 {
        if self.cokernel.is_zero() || self.cokernel.dimension() == 0 {
            0
        } else {
            self.cokernel.degree()
        }
    }

    /// `M(y)`, the matrix evaluated at a target point.
    pub fn evaluate(&self, y: &PointProjective) -> Result<Matrix> {
        let field = y.coords()[0].field();
        let rows = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(y.coords())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Ok(Matrix::zeros(field, 0, self.mrank));
        }
        Ok(Matrix::from_rows(field, rows))
    }

    /// `y ∈ Supp N`, i.e. `rank M(y) < n`.
    pub fn in_support(&self, y: &PointProjective) -> Result<bool> {
        Ok(self.evaluate(y)?.rank() < self.n)
    }
}

/// Builds `Σ_i T_i φ_i`, where `φ_i` is dual to `α ↦ α ∘ ∂_i` on
/// `Hom(Z_1, R)_{-d-1} → Hom(Z_2, R)_{-2d-1}`.
pub fn presentation_matrix(map: &ParameterizedMap) -> Result<PresentationData> {
    let k = koszul_cycles(map)?;
    let d = k.degree;
    let (l, mrank, n) = complex_ranks(&k)?;
    let n_from_hilbert = SerreData::new(&map.base_ideal())?.h1(d - 2);
    if n as i64 != n_from_hilbert {
        return Err(Error::Inconsistent(format!(
            "n = {n} from the cycles but {n_from_hilbert} from Hilbert functions"
        )));
    }
    let z1 = &k.cycles[1];
    let z2 = &k.cycles[2];
    let a1 = hom_piece(z1, -d - 1)?;
    let a2 = hom_piece(z2, -2 * d - 1)?;
    debug_assert_eq!(a2.basis.len(), mrank);
    let ring = &k.ring;
    let field = ring.field();

    // α(z_k) for each basis element α of A_1.
    let values: Vec<Vec<Polynomial>> = a1
        .basis
        .iter()
        .map(|v| {
            let mut out = vec![Polynomial::zero(ring); z1.source_rank()];
            for ((c, m), s) in a1.coords.iter().zip(v) {
                if !s.is_zero() {
                    out[*c] = out[*c].add(&Polynomial::monomial(ring, m.clone(), s.clone())).unwrap();
                }
            }
            out
        })
        .collect();
    let lifter = Lifter::new(z1);
    let position: std::collections::HashMap<(usize, Monomial), usize> =
        a2.coords.iter().cloned().enumerate().map(|(k, c)| (c, k)).collect();
    let mut a2_mat = Matrix::zeros(field, a2.coords.len(), mrank);
    for (j, v) in a2.basis.iter().enumerate() {
        for (r, s) in v.iter().enumerate() {
            a2_mat.set(r, j, s.clone());
        }
    }
    let target = map.target();
    let mut matrix = vec![vec![Polynomial::zero(target); mrank]; n];
    for i in 0..FORMS {
        // Lifts of ∂_i(g_l) through the generators of Z_1.
        let lifts: Vec<Vector> = z2
            .columns()
            .iter()
            .map(|g| {
                let w = k.contraction(i, 2, g);
                lifter.lift(&w)?.ok_or_else(|| Error::Inconsistent("contraction left the cycles".into()))
            })
            .collect::<Result<_>>()?;
        let ti = Polynomial::var(target, i);
        for (r, alpha) in values.iter().enumerate() {
            let mut coords = vec![field.zero(); a2.coords.len()];
            for (lidx, c) in lifts.iter().enumerate() {
                let mut val = Polynomial::zero(ring);
                for (ck, ak) in c.iter().zip(alpha) {
                    if !ck.is_zero() && !ak.is_zero() {
                        val = val.add(&ck.mul(ak)?)?;
                    }
                }
                for (m, s) in val.terms() {
                    let pos = position.get(&(lidx, m.clone())).ok_or_else(|| {
                        Error::Inconsistent("composition landed outside the expected degree".into())
                    })?;
                    coords[*pos] = s.clone();
                }
            }
            let x = a2_mat
                .solve(&coords)
                .ok_or_else(|| Error::Inconsistent("composition is not a homomorphism".into()))?;
            for (c, s) in x.iter().enumerate() {
                if !s.is_zero() {
                    matrix[r][c] = matrix[r][c].add(&ti.scale(s))?;
                }
            }
        }
    }
    let mut data = PresentationData {
        l,
        mrank,
        n,
        n_from_hilbert,
        matrix,
        cokernel: HilbertSeries::of_free(target.nvars(), &[]),
        fitting: FittingSupport {
            generators: Vec::new(),
            exact_minors: false,
            zero_dimensional: false,
            points: Vec::new(),
            complete: false,
        },
    };
    let gb = ModuleGroebnerBasis::new(target, &vec![1; n], &nonzero_columns(&data))?;
    data.cokernel = HilbertSeries::of_module_quotient(&gb);
    data.fitting = fitting_support(&data, target)?;
    Ok(data)
}

/// Fraction-free elimination on a square polynomial matrix.
fn poly_determinant(mut m: Vec<Vec<Polynomial>>, ring: &RingRef) -> Result<Polynomial> {
    let n = m.len();
    if n == 0 {
        return Ok(Polynomial::one(ring));
    }
    let mut negate = false;
    let mut prev = Polynomial::one(ring);
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Ok(Polynomial::zero(ring));
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k])?.sub(&m[i][k].mul(&m[k][j])?)?;
                m[i][j] = num.exact_divide(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

const EXACT_MINOR_LIMIT: u64 = 40;

/// Columns of the presentation with zero columns dropped.
fn nonzero_columns(data: &PresentationData) -> Vec<Vector> {
    (0..data.mrank)
        .map(|c| data.matrix.iter().map(|row| row[c].clone()).collect::<Vector>())
        .filter(|v| v.iter().any(|p| !p.is_zero()))
        .collect()
}

/// `ann(coker M) = ∩_k (im M : e_k)`.
pub fn cokernel_annihilator(data: &PresentationData, target: &RingRef) -> Result<Ideal> {
    let n = data.n;
    let cols = nonzero_columns(data);
    let mut acc: Option<Ideal> = None;
    for k in 0..n {
        let mut all = vec![(0..n).map(|r| if r == k { Polynomial::one(target) } else { Polynomial::zero(target) }).collect()];
        all.extend(cols.iter().cloned());
        let mut degrees = vec![1];
        degrees.extend(std::iter::repeat_n(2, cols.len()));
        let syz = FreeModuleMap::with_source_degrees(target, vec![1; n], degrees, all)?.kernel()?;
        let gens: Vec<Polynomial> = syz.columns().iter().map(|c| c[0].clone()).filter(|p| !p.is_zero()).collect();
        let colon = Ideal::new(target, gens)?;
        acc = Some(match acc {
            None => colon,
            Some(a) => a.intersection(&colon)?,
        });
    }
    Ok(acc.unwrap_or_else(|| Ideal::new(target, vec![Polynomial::one(target)]).unwrap()))
}

/// `V(Fitt_0)`. With few maximal minors they are computed exactly;
/// otherwise the annihilator of the cokernel, which has the same radical,
/// stands in. Every point returned is certified by a rank drop of `M`.
pub fn fitting_support(data: &PresentationData, target: &RingRef) -> Result<FittingSupport> {
    let n = data.n;
    let mrank = data.mrank;
    if n == 0 {
        return Ok(FittingSupport {
            generators: vec![Polynomial::one(target)],
            exact_minors: true,
            zero_dimensional: true,
            points: Vec::new(),
            complete: true,
        });
    }
    let exact = binomial(mrank as u64, n as u64) <= EXACT_MINOR_LIMIT;
    let ideal = if mrank < n {
        Ideal::zero(target)
    } else if exact {
        let mut generators = Vec::new();
        for cols in combinations(mrank, n) {
            let sub: Vec<Vec<Polynomial>> =
                data.matrix.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
            let det = poly_determinant(sub, target)?;
            if !det.is_zero() {
                generators.push(det.monic());
            }
        }
        Ideal::new(target, generators)?
    } else {
        cokernel_annihilator(data, target)?.minimal()?
    };
    let generators = ideal.gens().to_vec();
    let (dim, _) = ideal.dim_deg()?;
    if dim > 1 {
        return Ok(FittingSupport { generators, exact_minors: exact, zero_dimensional: false, points: Vec::new(), complete: false });
    }
    let found = rational_points_zero_dim(&ideal)?;
    for p in &found.points {
        if !data.in_support(p)? {
            return Err(Error::Inconsistent(format!("M does not drop rank at {p}")));
        }
    }
    Ok(FittingSupport {
        generators,
        exact_minors: exact,
        zero_dimensional: true,
        points: found.points,
        complete: found.complete,
    })
}

/// Regularity, degree and base-locus bounds attached to the presentation.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsCheck {
    /// Cokernel dimensions on `[n, n + window]`.
    pub coker_window: Vec<(i64, i64)>,
    /// Constant on the window, witnessing `reg N ≤ n`.
    pub regularity: Verdict,
    pub degree_n: i64,
    /// `deg N ≤ C(n+2, 3)`.
    pub degree_bound: Verdict,
    pub base_degree: i64,
    /// `d(d+1)/2 ≤ deg ℬ ≤ d² - 2d + 3`.
    pub base_degree_sandwich: Verdict,
    /// `d ≤ n ≤ d(d-3)/2 + 3`.
    pub n_sandwich: Verdict,
    /// `n = deg ℬ - d(d-1)/2`.
    pub n_formula: Verdict,
}

/// Needs `ℬ` locally a complete intersection; the base-locus bounds
/// additionally need `indeg(I^sat) = d`.
pub fn presentation_bounds_check(
    data: &PresentationData,
    d: i64,
    base_degree: i64,
    indeg_sat: Option<u32>,
    lci: bool,
    window: i64,
) -> BoundsCheck {
    let n = data.n as i64;
    let coker_window: Vec<(i64, i64)> = (n..=n + window).map(|s| (s, data.coker_dim(s))).collect();
    let gate = |ok: bool| if lci { Verdict::from_bool(ok) } else { Verdict::NotApplicable };
    let regularity = gate(coker_window.windows(2).all(|w| w[0].1 == w[1].1));
    let degree_n = data.degree();
    let degree_bound = gate(degree_n <= binomial(n as u64 + 2, 3) as i64);
    let applicable = lci && indeg_sat == Some(d as u32);
    let gate44 = |ok: bool| if applicable { Verdict::from_bool(ok) } else { Verdict::NotApplicable };
    BoundsCheck {
        coker_window,
        regularity,
        degree_n,
        degree_bound,
        base_degree,
        base_degree_sandwich: gate44(d * (d + 1) / 2 <= base_degree && base_degree <= d * d - 2 * d + 3),
        n_sandwich: gate44(d <= n && n <= d * (d - 3) / 2 + 3),
        n_formula: gate44(n == base_degree - d * (d - 1) / 2),
    }
}
