//! Hilbert series of graded quotients `R/J` and `F/U` computed from
//! initial (monomial) ideals.

use serde::{Deserialize, Serialize};

use crate::groebner::{GroebnerBasis, ModuleGroebnerBasis};
use crate::monomial::{Monomial, TermOrder};

/// `Σ_k c_k t^{low+k} / (1-t)^nvars`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    pub nvars: usize,
    pub low: i64,
    pub coeffs: Vec<i64>,
}

fn trim(low: i64, mut coeffs: Vec<i64>) -> (i64, Vec<i64>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    let lead = coeffs.iter().take_while(|&&c| c == 0).count();
    if lead == coeffs.len() {
        return (0, Vec::new());
    }
    (low + lead as i64, coeffs[lead..].to_vec())
}

fn poly_add(a: &mut Vec<i64>, b: &[i64], shift: usize, sign: i64) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, &c) in b.iter().enumerate() {
        a[shift + i] += sign * c;
    }
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator of `R/(gens)` over `(1-t)^nvars`, coefficients indexed by degree.
pub fn monomial_numerator(gens: &[Monomial]) -> Vec<i64> {
    numerator_rec(minimalize(gens.to_vec()))
}

fn numerator_rec(gens: Vec<Monomial>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return Vec::new();
    }
    let nvars = gens[0].nvars();
    // Pairwise coprime generators give a product of (1 - t^deg).
    let mut support = vec![0usize; nvars];
    for g in &gens {
        for (i, &e) in g.exps().iter().enumerate() {
            if e > 0 {
                support[i] += 1;
            }
        }
    }
    if support.iter().all(|&c| c <= 1) {
        let mut acc = vec![1i64];
        for g in &gens {
            let d = g.degree() as usize;
            let mut next = acc.clone();
            poly_add(&mut next, &acc, d, -1);
            acc = next;
        }
        return acc;
    }
    // Pivot on a power of the most frequent variable.
    let x = (0..nvars).max_by_key(|&i| (support[i], std::cmp::Reverse(i))).unwrap();
    let mut exps: Vec<u16> = gens
        .iter()
        .filter(|g| g.exps()[x] > 0 && g.exps()[x] as u32 != g.degree())
        .map(|g| g.exps()[x])
        .collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2];
    let mut pe = vec![0u16; nvars];
    pe[x] = e;
    let pivot = Monomial::from_exponents(&pe);
    // N(I) = N(I + p) + t^deg(p) N(I : p)
    let mut plus = gens.clone();
    plus.push(pivot.clone());
    let colon: Vec<Monomial> = gens.iter().map(|g| g.div(&g.gcd(&pivot)).unwrap()).collect();
    let mut out = numerator_rec(minimalize(plus));
    let c = numerator_rec(minimalize(colon));
    poly_add(&mut out, &c, e as usize, 1);
    out
}

fn binomial_i(n: i64, k: usize) -> i128 {
    // Polynomial binomial C(n, k) = n(n-1)...(n-k+1)/k!, valid for any integer n.
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k as i128 {
        num *= n as i128 - i;
        den *= i + 1;
    }
    num / den
}

impl HilbertSeries {
    pub fn from_numerator(nvars: usize, low: i64, coeffs: Vec<i64>) -> Self {
        let (low, coeffs) = trim(low, coeffs);
        HilbertSeries { nvars, low, coeffs }
    }

    /// Series of `R/J` from a Gröbner basis of `J` (any degree-compatible order).
    pub fn of_quotient(gb: &GroebnerBasis) -> Self {
        debug_assert!(matches!(gb.order(), TermOrder::GrevLex));
        let n = gb.ring().nvars();
        Self::from_numerator(n, 0, monomial_numerator(&gb.leading_monomials()))
    }

    /// Series of `F/U` for a graded submodule `U` of `F = ⊕ R(-a_c)`.
    pub fn of_module_quotient(gb: &ModuleGroebnerBasis) -> Self {
        let n = gb.ring().nvars();
        let degrees = gb.degrees();
        let lead = gb.leading_terms();
        let low = degrees.iter().copied().min().unwrap_or(0);
        let mut acc: Vec<i64> = Vec::new();
        for (c, &a) in degrees.iter().enumerate() {
            let gens: Vec<Monomial> = lead.iter().filter(|(lc, _)| *lc == c).map(|(_, m)| m.clone()).collect();
            let num = monomial_numerator(&gens);
            poly_add(&mut acc, &num, (a - low) as usize, 1);
        }
        Self::from_numerator(n, low, acc)
    }

    /// Series of the submodule `U` itself.
    pub fn of_submodule(gb: &ModuleGroebnerBasis) -> Self {
        let q = Self::of_module_quotient(gb);
        let free = Self::of_free(gb.ring().nvars(), gb.degrees());
        free.sub(&q)
    }

    pub fn of_free(nvars: usize, degrees: &[i64]) -> Self {
        let low = degrees.iter().copied().min().unwrap_or(0);
        let mut acc = Vec::new();
        for &a in degrees {
            poly_add(&mut acc, &[1], (a - low) as usize, 1);
        }
        Self::from_numerator(nvars, low, acc)
    }

    pub fn sub(&self, other: &HilbertSeries) -> HilbertSeries {
        assert_eq!(self.nvars, other.nvars);
        if self.coeffs.is_empty() {
            return other.negate();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let mut acc = Vec::new();
        poly_add(&mut acc, &self.coeffs, (self.low - low) as usize, 1);
        poly_add(&mut acc, &other.coeffs, (other.low - low) as usize, -1);
        Self::from_numerator(self.nvars, low, acc)
    }

    fn negate(&self) -> HilbertSeries {
        HilbertSeries { nvars: self.nvars, low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Numerator coefficients as `(exponent, coefficient)` pairs.
    pub fn numerator_terms(&self) -> Vec<(i64, i64)> {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (self.low + i as i64, c)).collect()
    }

    /// Reduced form `q(t)/(1-t)^dim` with `q(1) ≠ 0`.
    pub fn reduced(&self) -> (usize, Vec<i64>) {
        let mut q = self.coeffs.clone();
        let mut dim = self.nvars;
        while dim > 0 && !q.is_empty() && q.iter().sum::<i64>() == 0 {
            // Divide by (1 - t): running prefix sums.
            let mut out = Vec::with_capacity(q.len() - 1);
            let mut acc = 0i64;
            for &c in &q[..q.len() - 1] {
                acc += c;
                out.push(acc);
            }
            q = out;
            dim -= 1;
        }
        (dim, q)
    }

    /// Krull dimension of the module (0 for the zero module as well).
    pub fn dimension(&self) -> usize {
        if self.coeffs.is_empty() {
            return 0;
        }
        self.reduced().0
    }

    /// Multiplicity: the reduced numerator at `t = 1`.
    pub fn degree(&self) -> i64 {
        self.reduced().1.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn hilbert_function(&self, t: i64) -> i64 {
        let n = self.nvars;
        let mut acc: i128 = 0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i64;
            if k > t || c == 0 {
                continue;
            }
            let v = if n == 0 {
                i128::from(t == k)
            } else {
                binomial_i(t - k + n as i64 - 1, n - 1)
            };
            acc += c as i128 * v;
        }
        acc as i64
    }

    /// The Hilbert polynomial evaluated at `t` (any integer).
    pub fn hilbert_polynomial(&self, t: i64) -> i64 {
        let n = self.nvars;
        if n == 0 {
            return 0;
        }
        let mut acc: i128 = 0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i64;
            acc += c as i128 * binomial_i(t - k + n as i64 - 1, n - 1);
        }
        acc as i64
    }

    /// Degree beyond which the Hilbert function equals the polynomial.
    pub fn polynomial_threshold(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - self.nvars as i64
    }
}

impl std::fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", format_laurent(&self.numerator_terms()))
    }
}

/// Renders `Σ c t^e` as text such as `1 - 4*t^5 + 2*t^6 + t^8`.
pub fn format_laurent(terms: &[(i64, i64)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, &(e, c)) in terms.iter().enumerate() {
        let mag = c.abs();
        if k == 0 {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
        }
        let mono = match e {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{e}"),
        };
        if mono.is_empty() {
            s.push_str(&mag.to_string());
        } else if mag == 1 {
            s.push_str(&mono);
        } else {
            s.push_str(&format!("{mag}*{mono}"));
        }
    }
    s
}
