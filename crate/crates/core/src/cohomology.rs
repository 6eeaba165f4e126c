//! Graded pieces of local cohomology `H^i_𝔪(M)_t` with respect to the
//! irrelevant ideal, by the Grothendieck–Serre formula (quotients of
//! dimension at most one) and by graded local duality from a free
//! resolution.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{free_resolution, FreeModuleMap, FreeResolution};
use crate::hilbert::HilbertSeries;
use crate::ideal::Ideal;
use crate::monomial::count_monomials;

/// Hilbert data of `R/J` and `R/J^sat` for a quotient of dimension ≤ 1.
#[derive(Clone, Debug)]
pub struct SerreData {
    quotient: HilbertSeries,
    saturated: HilbertSeries,
}

impl SerreData {
    pub fn new(j: &Ideal) -> Result<Self> {
        let sat = j.saturation()?;
        Self::with_saturation(j, &sat)
    }

    pub fn with_saturation(j: &Ideal, sat: &Ideal) -> Result<Self> {
        let quotient = j.hilbert_series()?;
        if !quotient.is_zero() && quotient.dimension() > 1 {
            return Err(Error::DimensionPrecondition(format!(
                "quotient has Krull dimension {}, at most 1 required",
                quotient.dimension()
            )));
        }
        Ok(SerreData { quotient, saturated: sat.hilbert_series()? })
    }

    /// `dim (J^sat/J)_t`.
    pub fn h0(&self, t: i64) -> i64 {
        self.quotient.hilbert_function(t) - self.saturated.hilbert_function(t)
    }

    /// `HP_{R/J}(t) - HF_{R/J^sat}(t)`.
    pub fn h1(&self, t: i64) -> i64 {
        self.quotient.hilbert_polynomial(t) - self.saturated.hilbert_function(t)
    }

    pub fn quotient_series(&self) -> &HilbertSeries {
        &self.quotient
    }
}

/// `dim H^i_𝔪(R/J)_t` by the Grothendieck–Serre formula; needs `dim R/J ≤ 1`.
pub fn hdim_gs(j: &Ideal, i: usize, t: i64) -> Result<i64> {
    let data = SerreData::new(j)?;
    Ok(match i {
        0 => data.h0(t),
        1 => data.h1(t),
        _ => 0,
    })
}

/// Ranks of the dual complex `Hom(F_•, R)` in one degree.
fn dual_piece(res: &FreeResolution, j: usize, deg: i64) -> (usize, usize, usize) {
    // Hom(F_j, R) = ⊕ R(a): generators in degree -a.
    let free_dim: u64 = res
        .degrees(j)
        .iter()
        .map(|&a| count_monomials(res_nvars(res), deg + a))
        .sum();
    let rank_out = res.maps.get(j).map_or(0, |d| d.transpose().matrix_in_degree(deg).rank());
    let rank_in = if j == 0 { 0 } else { res.maps[j - 1].transpose().matrix_in_degree(deg).rank() };
    (free_dim as usize, rank_in, rank_out)
}

fn res_nvars(res: &FreeResolution) -> usize {
    res.ring.nvars()
}

/// `dim Ext^j_R(M, R)_deg` from a resolution of `M`.
pub fn ext_dim(res: &FreeResolution, j: usize, deg: i64) -> i64 {
    if j > res.length() {
        return 0;
    }
    let (free, rank_in, rank_out) = dual_piece(res, j, deg);
    free as i64 - rank_in as i64 - rank_out as i64
}

/// `dim H^i_𝔪(M)_t = dim Ext^{c-i}(M, R(-c))_{-t}`, `c` the number of variables.
pub fn hdim_ext(res: &FreeResolution, i: usize, t: i64) -> Result<i64> {
    let c = res_nvars(res);
    if i > c {
        return Ok(0);
    }
    if !res.complete {
        return Err(Error::ResolutionTooShort { length: res.length(), needed: c - i });
    }
    Ok(ext_dim(res, c - i, -t - c as i64))
}

/// Free resolution of `R/J`.
pub fn resolve_quotient(j: &Ideal) -> Result<FreeResolution> {
    free_resolution(&FreeModuleMap::from_ideal(j.ring(), j.gens())?)
}

/// `dim H^m_𝔪(R/(f))_μ` for a form of degree `d_f` in `m+1` variables.
pub fn hypersurface_hdim(d_f: i64, mu: i64, m: i64) -> i64 {
    if mu > d_f - m - 1 {
        return 0;
    }
    let k = d_f - m - 1 - mu;
    let n = (m + 1) as usize;
    count_monomials(n, k) as i64 - count_monomials(n, k - d_f) as i64
}

/// Graded dimensions of `N_s = H^m_𝔪(I^s)_{sd-m}` (more generally of
/// `H^m_𝔪(I^s)_{μ+sd}`) over a range of `s`.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyTable {
    pub mu: i64,
    pub values: Vec<(u32, i64)>,
    /// The common value of the last three entries, if they agree.
    pub stable_value: Option<i64>,
    /// Route used: "serre" or "ext".
    pub route: String,
}

impl CohomologyTable {
    pub fn from_values(mu: i64, values: Vec<(u32, i64)>, route: &str) -> Self {
        let stable_value = stable_tail(&values.iter().map(|(_, v)| *v).collect::<Vec<_>>());
        CohomologyTable { mu, values, stable_value, route: route.to_string() }
    }

    pub fn value(&self, s: u32) -> Option<i64> {
        self.values.iter().find(|(k, _)| *k == s).map(|(_, v)| *v)
    }
}

/// Common value of the last three entries.
pub fn stable_tail(values: &[i64]) -> Option<i64> {
    if values.len() < 3 {
        return None;
    }
    let k = values.len();
    (values[k - 1] == values[k - 2] && values[k - 2] == values[k - 3]).then_some(values[k - 1])
}

/// `dim H^m_𝔪(I^s)_{μ+sd}` for `s` in `s_values`, where `I` is generated in
/// degree `d` in `m+1` variables. Uses `H^m_𝔪(I^s) ≅ H^{m-1}_𝔪(R/I^s)`.
pub fn m_mu_dims(i: &Ideal, d: i64, mu: i64, s_values: &[u32]) -> Result<CohomologyTable> {
    let m = i.ring().nvars() as i64 - 1;
    let mut values = Vec::new();
    let route = if m == 2 { "serre" } else { "ext" };
    for &s in s_values {
        let is = i.power(s)?;
        let t = mu + s as i64 * d;
        let v = if m == 2 {
            SerreData::new(&is)?.h1(t)
        } else {
            hdim_ext(&resolve_quotient(&is)?, (m - 1) as usize, t)?
        };
        values.push((s, v));
    }
    Ok(CohomologyTable::from_values(mu, values, route))
}
