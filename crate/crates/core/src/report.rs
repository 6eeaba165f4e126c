//! The full analysis of a map, assembled into a serializable report.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx::{presentation_matrix, presentation_bounds_check, BoundsCheck, FittingSupport, PresentationData};
use crate::cohomology::{m_mu_dims, CohomologyTable};
use crate::error::Result;
use crate::fibers::{
    find_one_dim_fibers_with, fibers_agree, lci_proxy, cofactor_check, materialize_cofactors,
    predicted_shifted_support, degree_formula_check, verify_divisor_bound, FiberInventory, DivisorBoundRecord, DegreeFormulaRecord,
};
use crate::groebner::{free_resolution, FreeModuleMap};
use crate::map::{ParameterizedMap, Verdict};
use crate::points::PointProjective;
use crate::poly::Polynomial;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

#[derive(Clone, Debug, Serialize)]
pub struct PipelineOptions {
    pub s_max: u32,
    pub seed: u64,
    /// Internal degree shift of `M_μ`; defaults to `-m`.
    pub mu: Option<i64>,
    /// Degrees past `n` over which the cokernel must be constant.
    pub window: i64,
    /// Wall-clock budget for the `N_s` table.
    #[serde(skip)]
    pub budget: Option<Duration>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { s_max: 3, seed: 0, mu: None, window: 2, budget: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub field: String,
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub forms: Vec<Polynomial>,
    pub degree: u32,
    pub removed_factor: Polynomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypotheses {
    pub generically_finite: bool,
    pub image_dimension: i64,
    pub gcd_one: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lci_proxy: Option<bool>,
    pub indeg_saturation: u32,
    pub indeg_saturation_equals_degree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseLocus {
    pub hilbert_numerator: String,
    pub dimension: usize,
    pub degree: i64,
    pub saturated: bool,
    pub resolution: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageBlock {
    pub equations: Vec<Polynomial>,
    pub dimension: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CofactorSummary {
    pub point: PointProjective,
    pub generates: bool,
    pub saturation_contained: bool,
    pub symmetric_fiber_agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RandomFiberCheck {
    pub point: PointProjective,
    pub symmetric_fiber_agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyBlock {
    #[serde(flatten)]
    pub table: CohomologyTable,
    /// Stopped early because the budget ran out.
    pub truncated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationBlock {
    pub l: usize,
    pub mrank: usize,
    pub n: usize,
    pub n_from_hilbert: i64,
    pub matrix: Vec<Vec<Polynomial>>,
    pub cokernel_numerator: String,
    pub coker_dims: Vec<(i64, i64)>,
    pub degree: i64,
    /// `dim (coker)_s = N_s` for every `s` computed on both sides.
    pub agrees_with_cohomology: Verdict,
    pub fitting: FittingSupport,
    pub bounds: BoundsCheck,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Complete,
    Incomplete,
    HypothesisFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub input: InputEcho,
    pub options: PipelineOptions,
    pub hypotheses: Hypotheses,
    pub base_locus: BaseLocus,
    pub image: ImageBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fibers: Option<FiberInventory>,
    pub divisor_bound: Vec<DivisorBoundRecord>,
    pub cofactor_checks: Vec<CofactorSummary>,
    pub random_fiber_checks: Vec<RandomFiberCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_formula: Option<DegreeFormulaRecord>,
    pub shifted_support: Vec<PointProjective>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationBlock>,
    pub status: Status,
    pub exit_code: i32,
    pub timings_ms: BTreeMap<String, u128>,
}

struct Clock(BTreeMap<String, u128>, Instant);

impl Clock {
    fn lap(&mut self, name: &str) {
        self.0.insert(name.to_string(), self.1.elapsed().as_millis());
        self.1 = Instant::now();
    }
}

fn random_image_points(map: &ParameterizedMap, seed: u64, count: usize) -> Result<Vec<PointProjective>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = map.source().field();
    let mut out = Vec::new();
    for _ in 0..count * 10 {
        if out.len() == count {
            break;
        }
        let x: Vec<_> = (0..map.source().nvars()).map(|_| field.from_i64(rng.gen_range(-5..=5))).collect();
        if let Some(y) = map.apply(&x)? {
            out.push(y);
        }
    }
    Ok(out)
}

pub fn run_pipeline(map: &ParameterizedMap, options: &PipelineOptions) -> Result<ReportDocument> {
    let mut clock = Clock(BTreeMap::new(), Instant::now());
    let m = map.source_dim();
    let d = map.degree();
    let i = map.base_ideal();

    let input = InputEcho {
        field: map.source().field().to_string(),
        source: map.source().names().to_vec(),
        target: map.target().names().to_vec(),
        forms: map.forms().to_vec(),
        degree: d,
        removed_factor: map.removed_factor().clone(),
    };

    let series = i.hilbert_series()?;
    let sat = map.saturated_power(1)?;
    let resolution = free_resolution(&FreeModuleMap::from_ideal(map.source(), i.gens())?)?;
    let base_locus = BaseLocus {
        hilbert_numerator: series.to_string(),
        dimension: series.dimension(),
        degree: series.degree(),
        saturated: sat.equals(&i)?,
        resolution: resolution.betti_table().to_string(),
    };
    clock.lap("base_locus");

    let rees = map.rees_data()?;
    let image_dimension = map.image_dimension()?;
    let image = ImageBlock { equations: rees.image.gens().to_vec(), dimension: image_dimension };
    let generically_finite = image_dimension == m as i64;
    let shape_fits = m == 2 && map.target_dim() == 3;
    let lci = if generically_finite && shape_fits { Some(lci_proxy(map)?) } else { None };
    let indeg_saturation = sat.initial_degree().unwrap_or(0);
    let hypotheses = Hypotheses {
        generically_finite,
        image_dimension,
        gcd_one: map.removed_factor().is_constant(),
        lci_proxy: lci,
        indeg_saturation,
        indeg_saturation_equals_degree: indeg_saturation == d,
    };
    clock.lap("image");

    let mut doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        input,
        options: options.clone(),
        hypotheses,
        base_locus,
        image,
        fibers: None,
        divisor_bound: Vec::new(),
        cofactor_checks: Vec::new(),
        random_fiber_checks: Vec::new(),
        cohomology: None,
        degree_formula: None,
        shifted_support: Vec::new(),
        presentation: None,
        status: Status::HypothesisFailure,
        exit_code: EXIT_HYPOTHESIS,
        timings_ms: BTreeMap::new(),
    };
    if !generically_finite {
        doc.timings_ms = clock.0;
        return Ok(doc);
    }

    let presentation: Option<PresentationData> = if shape_fits { Some(presentation_matrix(map)?) } else { None };
    clock.lap("presentation");

    let mut inv = find_one_dim_fibers_with(map, options.s_max, presentation.as_ref())?;
    materialize_cofactors(map, &mut inv.records)?;
    clock.lap("fibers");

    for s in 1..=options.s_max {
        doc.divisor_bound.push(verify_divisor_bound(map, s, &inv.records)?);
    }
    for rec in &inv.records {
        let c = cofactor_check(map, rec)?;
        doc.cofactor_checks.push(CofactorSummary {
            point: rec.point.clone(),
            generates: c.generates,
            saturation_contained: c.saturation_contained,
            symmetric_fiber_agrees: fibers_agree(map, &rec.point)?,
        });
    }
    for y in random_image_points(map, options.seed, 3)? {
        doc.random_fiber_checks.push(RandomFiberCheck { symmetric_fiber_agrees: fibers_agree(map, &y)?, point: y });
    }
    clock.lap("checks");

    let mu = options.mu.unwrap_or(-(m as i64));
    let started = Instant::now();
    let mut values = Vec::new();
    let mut truncated = false;
    for s in 1..=options.s_max {
        if options.budget.is_some_and(|b| started.elapsed() > b) {
            truncated = true;
            break;
        }
        values.extend(m_mu_dims(&i, d as i64, mu, &[s])?.values);
    }
    let route = if m == 2 { "serre" } else { "ext" };
    let table = CohomologyTable::from_values(mu, values, route);
    clock.lap("cohomology");

    doc.shifted_support = predicted_shifted_support(&inv.records, mu, m);
    if let Some(p) = &presentation {
        let agree = table.values.iter().all(|&(s, v)| p.coker_dim(s as i64) == v);
        let bounds = presentation_bounds_check(
            p,
            d as i64,
            doc.base_locus.degree,
            sat.initial_degree(),
            lci.unwrap_or(false),
            options.window,
        );
        let n = p.n as i64;
        doc.presentation = Some(PresentationBlock {
            l: p.l,
            mrank: p.mrank,
            n: p.n,
            n_from_hilbert: p.n_from_hilbert,
            matrix: p.matrix.clone(),
            cokernel_numerator: p.cokernel.to_string(),
            coker_dims: (0..=n + options.window).map(|s| (s, p.coker_dim(s))).collect(),
            degree: p.degree(),
            agrees_with_cohomology: if mu == -2 { Verdict::from_bool(agree) } else { Verdict::NotApplicable },
            fitting: p.fitting.clone(),
            bounds,
        });
    }
    // deg N from a stable tail of N_s, or from the presentation when the
    // lci proxy identifies its cokernel with N.
    let observed = if mu == -(m as i64) {
        table.stable_value.or_else(|| match (&presentation, lci) {
            (Some(p), Some(true)) => Some(p.degree()),
            _ => None,
        })
    } else {
        None
    };
    doc.degree_formula = Some(degree_formula_check(&inv.records, observed, m, inv.complete));
    doc.cohomology = Some(CohomologyBlock { table, truncated });
    clock.lap("bounds");

    let complete = inv.complete && !truncated;
    (doc.status, doc.exit_code) = if !doc.hypotheses.gcd_one {
        (Status::HypothesisFailure, EXIT_HYPOTHESIS)
    } else if complete {
        (Status::Complete, EXIT_OK)
    } else {
        (Status::Incomplete, EXIT_INCOMPLETE)
    };
    doc.fibers = Some(inv);
    doc.timings_ms = clock.0;
    Ok(doc)
}
