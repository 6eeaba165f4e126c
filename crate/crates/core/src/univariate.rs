//! Dense univariate polynomials over ℚ or GF(p): gcd, square-free part and
//! roots in the base field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Field, Scalar};

/// Coefficients from the constant term upwards, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn x(field: Field) -> Self {
        UniPoly::new(field, vec![field.zero(), field.one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv();
                UniPoly::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn evaluate(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.field.from_i64(i as i64) * c)
            .collect();
        UniPoly::new(self.field, c)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
            .collect();
        UniPoly::new(self.field, c)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        UniPoly::new(self.field, c)
    }

    /// `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.leading().unwrap().inv();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * dc);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UniPoly::new(self.field, q), UniPoly::new(self.field, r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return UniPoly::new(self.field, vec![self.field.one()]);
        }
        let d = self.derivative();
        if d.is_zero() {
            // f = g(x^p) = (Σ a_k x^k)^p over GF(p).
            let p = self.field.characteristic() as usize;
            let c = self.coeffs.iter().step_by(p).cloned().collect();
            return UniPoly::new(self.field, c).squarefree_part();
        }
        let mut g = self.gcd(&d);
        let q = self.div_rem(&g).0.monic();
        // Factors whose multiplicity is divisible by p appear only in g.
        loop {
            let c = g.gcd(&q);
            if c.degree().unwrap_or(0) == 0 {
                break;
            }
            g = g.div_rem(&c).0;
        }
        if g.degree().unwrap_or(0) == 0 {
            q
        } else {
            q.mul(&g.squarefree_part()).monic()
        }
    }

    fn pow_mod(&self, e: &BigInt, m: &UniPoly) -> UniPoly {
        let mut result = UniPoly::new(self.field, vec![self.field.one()]);
        let mut base = self.rem(m);
        let mut e = e.clone();
        let two = BigInt::from(2);
        while e > BigInt::zero() {
            if e.is_odd() {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e /= &two;
        }
        result
    }

    /// Distinct roots in the base field, sorted canonically. The flag is
    /// false when some rational candidate could not be enumerated.
    pub fn roots(&self) -> (Vec<Scalar>, bool) {
        if self.degree().unwrap_or(0) == 0 {
            return (Vec::new(), true);
        }
        let f = self.squarefree_part();
        let (mut roots, ok) = match self.field {
            Field::Rational => rational_roots(&f),
            Field::Prime(p) => (prime_field_roots(&f, p), true),
        };
        roots.sort_by(|a, b| a.cmp_canonical(b));
        roots.dedup();
        (roots, ok)
    }
}

fn prime_field_roots(f: &UniPoly, p: u32) -> Vec<Scalar> {
    let field = f.field;
    if p <= 1 << 12 {
        return field.elements().unwrap().into_iter().filter(|x| f.evaluate(x).is_zero()).collect();
    }
    // g = gcd(f, x^p - x) is the product of the linear factors.
    let x = UniPoly::x(field);
    let xp = x.pow_mod(&BigInt::from(p), f);
    let g = f.gcd(&xp.sub(&x));
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(p));
    split_linear(&g, p, &mut rng, &mut out);
    out
}

fn split_linear(g: &UniPoly, p: u32, rng: &mut ChaCha8Rng, out: &mut Vec<Scalar>) {
    let field = g.field;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = g.monic();
            out.push(-&m.coeffs[0]);
        }
        Some(_) => loop {
            // gcd(g, (x + a)^((p-1)/2) - 1) splits g with probability ~1/2.
            let a = field.from_i64(rng.gen_range(0..i64::from(p)));
            let h = UniPoly::new(field, vec![a, field.one()]);
            let e = BigInt::from((p - 1) / 2);
            let w = h.pow_mod(&e, g).sub(&UniPoly::new(field, vec![field.one()]));
            let d = g.gcd(&w);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && dd < g.degree().unwrap() {
                let rest = g.div_rem(&d).0;
                split_linear(&d, p, rng, out);
                split_linear(&rest, p, rng, out);
                return;
            }
        },
    }
}

/// Divisors of `|n|`, or `None` when `n` is too large to factor by trial division.
pub(crate) fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut rest = n.to_u128()?;
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut d: u128 = 2;
    while d * d <= rest {
        if d > 5_000_000 {
            if !is_probable_prime(rest) {
                return None;
            }
            break;
        }
        if rest % d == 0 {
            let mut e = 0;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for dv in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pk);
                pk *= BigInt::from(p);
            }
        }
        divs = next;
    }
    Some(divs)
}

fn is_probable_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    let n_big = BigInt::from(n);
    let one = BigInt::one();
    let nm1 = &n_big - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigInt::from(a);
        if a >= n_big {
            continue;
        }
        let mut x = a.modpow(&d, &n_big);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), &n_big);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rational_roots(f: &UniPoly) -> (Vec<Scalar>, bool) {
    let field = f.field;
    let mut roots = Vec::new();
    // Strip the root 0.
    let mut coeffs: Vec<Scalar> = f.coeffs.clone();
    if coeffs.first().is_some_and(|c| c.is_zero()) {
        roots.push(field.zero());
        let k = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..k);
    }
    if coeffs.len() <= 1 {
        return (roots, true);
    }
    // Clear denominators.
    let mut lcm = BigInt::one();
    for c in &coeffs {
        lcm = lcm.lcm(c.as_rational().unwrap().denom());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let g = UniPoly::new(field, coeffs);
    if g.degree() == Some(1) {
        roots.push(-&(&g.coeffs[0] / &g.coeffs[1]));
        return (roots, true);
    }
    let (Some(num), Some(den)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
        return (roots, false);
    };
    for a in &num {
        for b in &den {
            if a.gcd(b) != BigInt::one() {
                continue;
            }
            for sign in [1i64, -1] {
                let q = num_rational::BigRational::new(a * sign, b.clone());
                let x = Scalar::Rational(q);
                if g.evaluate(&x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    (roots, true)
}
