#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ratmap::ideal::Ideal;
use ratmap::map::{build_map, ParameterizedMap};
use ratmap::monomial::monomials_of_degree;
use ratmap::parse::parse_polynomial;
use ratmap::points::PointProjective;
use ratmap::{Field, Polynomial, Ring, RingRef};

pub const QUINTIC: [&str; 4] = [
    "X0*X1*(X0-X2)*(X0+X2)*(X0-2*X2)",
    "X0*X1*(X1-X2)*(X1+X2)*(X1-2*X2)",
    "X0*X2*(X0-X2)*(X0+X2)*(X0-2*X2)",
    "X1*X2*(X1-X2)*(X1+X2)*(X1-2*X2)",
];

pub fn polys(r: &RingRef, texts: &[&str]) -> Vec<Polynomial> {
    texts.iter().map(|s| parse_polynomial(r, s).unwrap()).collect()
}

pub fn map_from(field: Field, texts: &[&str]) -> ParameterizedMap {
    let r = Ring::indexed("X", 3, field);
    build_map(polys(&r, texts)).unwrap()
}

pub fn quintic() -> ParameterizedMap {
    map_from(Field::Rational, &QUINTIC)
}

/// Homogeneous of degree `deg`, each monomial present with probability `density`.
pub fn random_form(r: &RingRef, deg: u32, density: f64, rng: &mut ChaCha8Rng) -> Polynomial {
    let field = r.field();
    let q = match field.characteristic() {
        0 => 10,
        p => p as i64,
    };
    loop {
        let mut terms = Vec::new();
        for m in monomials_of_degree(r.nvars(), deg) {
            if rng.gen_bool(density) {
                terms.push((m, field.from_i64(rng.gen_range(1..q) * if rng.gen_bool(0.5) { 1 } else { -1 })));
            }
        }
        let p = Polynomial::from_terms(r, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_point(field: Field, n: usize, rng: &mut ChaCha8Rng) -> PointProjective {
    let q = field.characteristic() as i64;
    loop {
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        if c.iter().any(|&v| v != 0) {
            return PointProjective::from_i64(field, &c).unwrap();
        }
    }
}

pub fn random_prime_field(rng: &mut ChaCha8Rng) -> Field {
    Field::prime(*[7u32, 11].choose(rng).unwrap()).unwrap()
}

/// Vanishing ideal of a few random points, times a power of the maximal ideal.
pub fn points_times_maximal(r: &RingRef, rng: &mut ChaCha8Rng) -> (Ideal, Ideal) {
    let mut pts = random_point(r.field(), r.nvars(), rng).vanishing_ideal(r);
    for _ in 0..rng.gen_range(0..=2) {
        let p = random_point(r.field(), r.nvars(), rng);
        pts = pts.intersection(&p.vanishing_ideal(r)).unwrap();
    }
    let k = rng.gen_range(1..=2);
    let j = pts.product(&Ideal::maximal(r).power(k).unwrap()).unwrap();
    (j, pts)
}

fn scaled(p: &Polynomial, c: &ratmap::Scalar) -> Polynomial {
    p.scale(c)
}

/// Four cubics over `field` in three variables. Depending on `kind`, the map
/// is random, has one fiber along a random line or conic, or two fibers
/// along two random lines.
pub fn planted_cubic_map(field: Field, kind: usize, rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
    let r = Ring::indexed("X", 3, field);
    let form = |deg: u32, rng: &mut ChaCha8Rng| random_form(&r, deg, 0.6, rng);
    match kind % 4 {
        0 => (0..4).map(|_| form(3, rng)).collect(),
        1 | 2 => {
            let hdeg = if kind % 4 == 1 { 1 } else { 2 };
            let h = form(hdeg, rng);
            let a = form(3, rng);
            let y = random_point(field, 4, rng);
            (0..4)
                .map(|j| scaled(&a, &y.coords()[j]).add(&h.mul(&form(3 - hdeg, rng)).unwrap()).unwrap())
                .collect()
        }
        _ => {
            let (l1, l2) = (form(1, rng), form(1, rng));
            let (q1, q2) = (form(2, rng), form(2, rng));
            let (y1, y2) = (random_point(field, 4, rng), random_point(field, 4, rng));
            let l12 = l1.mul(&l2).unwrap();
            (0..4)
                .map(|j| {
                    let a = scaled(&l2.mul(&q1).unwrap(), &y1.coords()[j]);
                    let b = scaled(&l1.mul(&q2).unwrap(), &y2.coords()[j]);
                    a.add(&b).unwrap().add(&l12.mul(&form(1, rng)).unwrap()).unwrap()
                })
                .collect()
        }
    }
}
