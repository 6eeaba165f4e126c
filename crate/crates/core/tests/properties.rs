mod common;

use std::cmp::Ordering;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratmap::fibers::{find_one_dim_fibers, predicted_shifted_support};
use ratmap::groebner::{free_resolution, FreeModuleMap, ModuleGroebnerBasis};
use ratmap::hilbert::HilbertSeries;
use ratmap::ideal::{poly_gcd, Ideal};
use ratmap::linalg::Matrix;
use ratmap::map::build_map;
use ratmap::mapfile::{parse_map_file, print_map_file};
use ratmap::monomial::{count_monomials, monomials_of_degree};
use ratmap::{Field, Monomial, Polynomial, Ring, Scalar, TermOrder};

fn config(seed: u64, cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..ProptestConfig::default() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_gens(r: &ratmap::RingRef, rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
    (0..rng.gen_range(2..=4)).map(|_| random_form(r, rng.gen_range(1..=3), 0.5, rng)).collect()
}

fn random_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        Field::Rational => {
            let n = BigInt::from(rng.gen_range(-50i64..=50));
            let d = BigInt::from(rng.gen_range(1i64..=50));
            field.from_rational(&BigRational::new(n, d)).unwrap()
        }
        _ => field.from_i64(rng.gen_range(0..1000)),
    }
}

fn random_monomial(rng: &mut ChaCha8Rng) -> Monomial {
    Monomial::from_exponents(&(0..3).map(|_| rng.gen_range(0..4)).collect::<Vec<u16>>())
}

proptest! {
    #![proptest_config(config(11, 100))]

    #[test]
    fn product_degree_and_exact_division(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = Ring::indexed("X", 3, random_prime_field(&mut g));
        let a = random_form(&r, g.gen_range(0..=3), 0.6, &mut g);
        let b = random_form(&r, g.gen_range(0..=3), 0.6, &mut g);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
        prop_assert_eq!(ab.exact_divide(&b).unwrap(), a);
    }

    #[test]
    fn scalar_division_round_trips(seed in any::<u64>()) {
        let mut g = rng(seed);
        for field in [Field::Rational, Field::prime(7).unwrap(), Field::prime(11).unwrap()] {
            let x = random_scalar(field, &mut g);
            let y = random_scalar(field, &mut g);
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x);
            }
        }
    }

    #[test]
    fn term_orders_are_total_and_multiplicative(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (u, v, w) = (random_monomial(&mut g), random_monomial(&mut g), random_monomial(&mut g));
        for order in [TermOrder::GrevLex, TermOrder::Lex, TermOrder::elimination(1)] {
            let c = order.cmp(&u, &v);
            prop_assert_eq!(c, order.cmp(&v, &u).reverse());
            prop_assert_eq!(c == Ordering::Equal, u == v);
            prop_assert_eq!(order.cmp(&u.mul(&w), &v.mul(&w)), c);
            prop_assert_ne!(order.cmp(&Monomial::one(3), &u), Ordering::Greater);
        }
    }

    #[test]
    fn hilbert_function_counts_standard_monomials(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = Ring::indexed("X", 3, random_prime_field(&mut g));
        let i = Ideal::new(&r, random_gens(&r, &mut g)).unwrap();
        let leads = i.groebner().leading_monomials();
        let hs = i.hilbert_series().unwrap();
        let top = leads.iter().map(|m| m.degree()).max().unwrap_or(0);
        for t in 0..=2 * top {
            let standard = monomials_of_degree(3, t).into_iter().filter(|m| !leads.iter().any(|l| l.divides(m))).count();
            prop_assert_eq!(hs.hilbert_function(t as i64), standard as i64);
        }
        let from = hs.polynomial_threshold().max(0);
        for t in from..from + 4 {
            prop_assert_eq!(hs.hilbert_function(t), hs.hilbert_polynomial(t));
        }
    }

    #[test]
    fn syzygies_are_complete_up_to_a_degree(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = Ring::indexed("X", 3, random_prime_field(&mut g));
        let gens = random_gens(&r, &mut g);
        let map = FreeModuleMap::from_ideal(&r, &gens).unwrap();
        let k = map.kernel().unwrap();
        for col in k.columns() {
            let mut sum = Polynomial::zero(&r);
            for (a, b) in gens.iter().zip(col) {
                sum = sum.add(&a.mul(b).unwrap()).unwrap();
            }
            prop_assert!(sum.is_zero());
        }
        let ideal = Ideal::new(&r, gens.clone()).unwrap();
        let degs: Vec<i64> = gens.iter().map(|p| p.degree().unwrap() as i64).collect();
        let found = if k.source_rank() == 0 {
            None
        } else {
            Some(ModuleGroebnerBasis::new(&r, &degs, k.columns()).unwrap())
        };
        for d in 0..=degs.iter().max().unwrap() + 3 {
            // dim Syz_d = dim F_d - dim I_d, with dim I_d from the rank of the multiplication map.
            let free: i64 = degs.iter().map(|&e| count_monomials(3, d - e) as i64).sum();
            let basis = monomials_of_degree(3, d as u32);
            let mut rows = Vec::new();
            for p in &gens {
                let e = p.degree().unwrap() as i64;
                if e > d { continue; }
                for m in monomials_of_degree(3, (d - e) as u32) {
                    let q = p.mul_monomial(&m, &r.field().one());
                    rows.push(basis.iter().map(|b| q.coefficient(b)).collect());
                }
            }
            let rank = if rows.is_empty() { 0 } else { Matrix::from_rows(r.field(), rows).rank() as i64 };
            let by_kernel = found.as_ref().map_or(0, |gb| HilbertSeries::of_submodule(gb).hilbert_function(d));
            prop_assert_eq!(free - rank, by_kernel, "degree {}", d);
            prop_assert_eq!(rank, count_monomials(3, d) as i64 - ideal.hilbert_function(d).unwrap());
        }
    }

    #[test]
    fn resolutions_are_complexes_with_the_right_series(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = Ring::indexed("X", 3, random_prime_field(&mut g));
        let gens = random_gens(&r, &mut g);
        let res = free_resolution(&FreeModuleMap::from_ideal(&r, &gens).unwrap()).unwrap();
        prop_assert!(res.complete);
        for w in res.maps.windows(2) {
            prop_assert!(w[0].compose(&w[1]).unwrap().is_zero());
        }
        let mut euler = HilbertSeries::of_free(3, &[0]);
        for k in 1..=res.length() {
            let term = HilbertSeries::of_free(3, &res.degrees(k));
            euler = if k % 2 == 1 { euler.sub(&term) } else { euler.sub(&HilbertSeries::of_free(3, &[]).sub(&term)) };
        }
        let hs = Ideal::new(&r, gens).unwrap().hilbert_series().unwrap();
        for t in 0..12 {
            prop_assert_eq!(euler.hilbert_function(t), hs.hilbert_function(t));
        }
    }

    #[test]
    fn colon_is_intersection_divided(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = Ring::indexed("X", 3, random_prime_field(&mut g));
        let j = Ideal::new(&r, random_gens(&r, &mut g)).unwrap();
        let f = random_form(&r, g.gen_range(1..=2), 0.6, &mut g);
        let meet = j.intersection(&Ideal::new(&r, vec![f.clone()]).unwrap()).unwrap();
        let divided: Vec<Polynomial> = meet.gens().iter().map(|p| p.exact_divide(&f).unwrap()).collect();
        prop_assert!(j.colon(&f).unwrap().equals(&Ideal::new(&r, divided).unwrap()).unwrap());
    }

    #[test]
    fn elimination_is_sound(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = Ring::indexed("X", 3, random_prime_field(&mut g));
        let j = Ideal::new(&r, random_gens(&r, &mut g)).unwrap();
        let e = j.eliminate(&[0]).unwrap();
        for p in e.gens() {
            prop_assert!(!p.involves(0));
            prop_assert!(j.contains(p).unwrap());
        }
    }

    #[test]
    fn initial_degree_of_powers(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = Ring::indexed("X", 3, random_prime_field(&mut g));
        let d = g.gen_range(1..=2);
        let j = Ideal::new(&r, (0..3).map(|_| random_form(&r, d, 0.6, &mut g)).collect()).unwrap();
        for s in 1..=3 {
            prop_assert_eq!(j.power(s).unwrap().initial_degree(), Some(s * d));
        }
    }

    #[test]
    fn map_files_round_trip(seed in any::<u64>()) {
        let mut g = rng(seed);
        let field = if g.gen_bool(0.5) { Field::Rational } else { random_prime_field(&mut g) };
        let r = Ring::indexed("X", 3, field);
        let d = g.gen_range(1..=3);
        let forms: Vec<Polynomial> = (0..g.gen_range(3..=5)).map(|_| random_form(&r, d, 0.5, &mut g)).collect();
        if let Ok(map) = build_map(forms) {
            prop_assert_eq!(parse_map_file(&print_map_file(&map)).unwrap(), map);
        }
    }
}

proptest! {
    #![proptest_config(config(23, 12))]

    #[test]
    fn fiber_divisors_are_coprime_and_supports_shrink(seed in any::<u64>()) {
        let mut g = rng(seed);
        let field = Field::prime(7).unwrap();
        let Ok(map) = build_map(planted_cubic_map(field, g.gen_range(0..4), &mut g)) else { return Ok(()) };
        if map.degree() != 3 || !map.is_generically_finite().unwrap() {
            return Ok(());
        }
        let inv = find_one_dim_fibers(&map, 3).unwrap();
        for (k, a) in inv.records.iter().enumerate() {
            for b in &inv.records[k + 1..] {
                prop_assert!(poly_gcd(&[a.divisor.clone(), b.divisor.clone()]).unwrap().is_constant());
            }
        }
        let mut last = usize::MAX;
        for mu in -4..=1 {
            let support = predicted_shifted_support(&inv.records, mu, 2);
            prop_assert!(support.len() <= last);
            last = support.len();
        }
        prop_assert!(predicted_shifted_support(&inv.records, 0, 2).is_empty());
    }
}
