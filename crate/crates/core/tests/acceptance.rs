mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratmap::approx::{presentation_matrix, presentation_bounds_check};
use ratmap::cohomology::{hdim_ext, hdim_gs, m_mu_dims, resolve_quotient};
use ratmap::fibers::{
    brute_force_fiber_oracle, find_one_dim_fibers, cofactor_check, verify_divisor_bound,
};
use ratmap::groebner::{free_resolution, reduced_groebner, FreeModuleMap};
use ratmap::ideal::{poly_gcd, poly_lcm, Ideal};
use ratmap::linalg::Matrix;
use ratmap::map::Verdict;
use ratmap::monomial::{binomial, monomials_of_degree};
use ratmap::points::PointProjective;
use ratmap::report::{run_pipeline, PipelineOptions, EXIT_HYPOTHESIS};
use ratmap::{Polynomial, Ring, TermOrder};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn quintic_points() -> BTreeSet<String> {
    [
        "(0:0:0:1)", "(0:0:1:0)", "(0:1:0:-1)", "(0:1:0:1/2)", "(0:1:0:1)", "(1:0:-1:0)", "(1:0:1/2:0)", "(1:0:1:0)",
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

fn point_set(pts: &[PointProjective]) -> BTreeSet<String> {
    pts.iter().map(|p| p.to_string()).collect()
}

/// `dim (R/I)_t` from the rank of the coefficient matrix of `I_t`.
fn hilbert_function_by_rank(i: &Ideal, t: u32) -> i64 {
    let r = i.ring();
    let basis = monomials_of_degree(r.nvars(), t);
    let mut rows = Vec::new();
    for g in i.gens() {
        let dg = g.degree().unwrap();
        if dg > t {
            continue;
        }
        for m in monomials_of_degree(r.nvars(), t - dg) {
            let p = g.mul_monomial(&m, &r.field().one());
            rows.push(basis.iter().map(|b| p.coefficient(b)).collect());
        }
    }
    let rank = if rows.is_empty() { 0 } else { Matrix::from_rows(r.field(), rows).rank() };
    basis.len() as i64 - rank as i64
}

fn criterion_1() -> Outcome {
    let map = quintic();
    let i = map.base_ideal();
    ensure!(i.saturation().map_err(|e| e.to_string())?.equals(&i).unwrap(), "sat(I) != I");
    let nu = map.saturated_power(2).unwrap().initial_degree();
    ensure!(nu == Some(8), "indeg((I^2)^sat) = {nu:?}");
    let inv = find_one_dim_fibers(&map, 2).map_err(|e| e.to_string())?;
    let t = verify_divisor_bound(&map, 2, &inv.records).unwrap();
    ensure!((t.nu, t.divisor_degree_sum, t.sd) == (8, 8, 10), "(nu, sum, sd) = {:?}", (t.nu, t.divisor_degree_sum, t.sd));
    ensure!(t.verdict == Verdict::Holds, "verdict {:?}", t.verdict);
    Ok("sat(I) = I, indeg((I^2)^sat) = 8, (nu, sum, sd) = (8, 8, 10) holds".into())
}

fn criterion_2() -> Outcome {
    let map = quintic();
    let inv = find_one_dim_fibers(&map, 3).map_err(|e| e.to_string())?;
    ensure!(point_set(&inv.points()) == quintic_points(), "points {:?}", point_set(&inv.points()));
    let divisors: BTreeSet<String> = inv.records.iter().map(|r| r.divisor.to_string()).collect();
    let expected: BTreeSet<String> =
        ["X0", "X1", "X0 + X2", "X0 - X2", "X0 - 2*X2", "X1 + X2", "X1 - X2", "X1 - 2*X2"].iter().map(|s| s.to_string()).collect();
    ensure!(divisors == expected, "divisors {divisors:?}");
    ensure!(inv.complete, "inventory not flagged complete");
    Ok(format!("8 points, divisors {}, complete", divisors.into_iter().collect::<Vec<_>>().join(", ")))
}

fn criterion_3() -> Outcome {
    let map = quintic();
    let res = free_resolution(&FreeModuleMap::from_ideal(map.source(), map.base_ideal().gens()).unwrap()).unwrap();
    let mut d1 = res.degrees(1);
    let mut d2 = res.degrees(2);
    d1.sort();
    d2.sort();
    ensure!(d1 == vec![5, 5, 5, 5] && d2 == vec![6, 6, 8] && res.length() == 2, "shifts {d1:?} {d2:?}");
    Ok(res.betti_table().to_string())
}

fn criterion_4() -> Outcome {
    let map = quintic();
    let i = map.base_ideal();
    let hs = i.hilbert_series().unwrap();
    ensure!(hs.to_string() == "1 - 4*t^5 + 2*t^6 + t^8", "numerator {hs}");
    for t in 0..=14 {
        let direct = hilbert_function_by_rank(&i, t);
        ensure!(direct == hs.hilbert_function(t as i64), "HF({t}): rank {direct}, series {}", hs.hilbert_function(t as i64));
    }
    let (dim, deg) = (hs.dimension(), hs.degree());
    ensure!((dim, deg) == (1, 18), "dim, deg = {dim}, {deg}");
    let n = hdim_gs(&i, 1, 3).unwrap();
    ensure!(n == 8, "dim H^1(R/I)_3 = {n}");
    let p = presentation_matrix(&map).map_err(|e| e.to_string())?;
    ensure!(p.n == 8, "n from the cycles = {}", p.n);
    let d = 5i64;
    let (lo, hi) = (d * (d + 1) / 2, d * d - 2 * d + 3);
    let (nlo, nhi) = (d, d * (d - 3) / 2 + 3);
    ensure!((lo, hi, nlo, nhi) == (15, 18, 5, 8), "bounds {:?}", (lo, hi, nlo, nhi));
    let b = presentation_bounds_check(&p, d, deg, Some(5), true, 2);
    ensure!(b.base_degree_sandwich.holds() && b.n_sandwich.holds(), "sandwiches {:?}", b);
    Ok(format!("numerator {hs}, deg B = 18, n = 8, 15 <= 18 <= 18, 5 <= 8 <= 8"))
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let map = quintic();
    let p = presentation_matrix(&map).map_err(|e| e.to_string())?;
    let tail: Vec<i64> = (8..=10).map(|s| p.coker_dim(s)).collect();
    ensure!(tail == vec![8, 8, 8], "coker dims on [8, 10]: {tail:?}");
    ensure!(p.degree() == 8, "eventual coker dim {}", p.degree());
    let table = m_mu_dims(&map.base_ideal(), 5, -2, &[1, 2, 3, 4]).unwrap();
    for &(s, v) in &table.values {
        ensure!(v == p.coker_dim(s as i64), "N_{s} = {v}, coker {}", p.coker_dim(s as i64));
    }
    let inv = find_one_dim_fibers(&map, 2).unwrap();
    let predicted: u64 = inv.records.iter().map(|r| binomial(r.divisor_degree as u64 + 1, 2)).sum();
    ensure!(predicted == 8, "sum binom = {predicted}");
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(15 * 60), "took {elapsed:?}");
    let vals: Vec<String> = table.values.iter().map(|(s, v)| format!("{s}:{v}")).collect();
    Ok(format!("coker [8,10] = {tail:?}, N_s {} agree, stable 8, {:.1?}", vals.join(" "), elapsed))
}

fn criterion_6() -> Outcome {
    let map = quintic();
    let p = presentation_matrix(&map).map_err(|e| e.to_string())?;
    ensure!(p.fitting.zero_dimensional, "Fitting ideal not zero-dimensional");
    ensure!(p.fitting.complete, "support extraction incomplete");
    ensure!(point_set(&p.fitting.points) == quintic_points(), "support {:?}", point_set(&p.fitting.points));
    for y in &p.fitting.points {
        ensure!(p.in_support(y).unwrap(), "{y} has full rank");
    }
    Ok("V(Fitt_0) = the 8 fiber points, zero-dimensional".into())
}

fn runner(seed: u8) -> TestRunner {
    let config = Config { cases: 100, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn suite(name: &str, seed: u8, case: impl Fn(&mut ChaCha8Rng) -> Result<(), String>) -> Result<(), String> {
    runner(seed)
        .run(&any::<u64>(), |s| case(&mut ChaCha8Rng::seed_from_u64(s)).map_err(TestCaseError::fail))
        .map_err(|e| format!("{name}: {e}"))
}

fn gcd_lcm_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let field = random_prime_field(rng);
    let r = Ring::indexed("X", 3, field);
    let c = random_form(&r, rng.gen_range(0..=2), 0.7, rng);
    let a = c.mul(&random_form(&r, rng.gen_range(1..=2), 0.5, rng)).unwrap();
    let b = c.mul(&random_form(&r, rng.gen_range(1..=2), 0.5, rng)).unwrap();
    let g = poly_gcd(&[a.clone(), b.clone()]).unwrap();
    let l = poly_lcm(&a, &b).unwrap();
    let lhs = g.mul(&l).unwrap().monic();
    let rhs = a.mul(&b).unwrap().monic();
    ensure!(lhs == rhs, "gcd*lcm = {lhs}, a*b = {rhs}");
    ensure!(g.exact_divide(&c).is_ok() || c.is_constant(), "planted factor {c} missing from gcd {g}");
    Ok(())
}

fn saturation_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = Ring::indexed("X", 3, random_prime_field(rng));
    let (j, pts) = points_times_maximal(&r, rng);
    let sat = j.saturation().unwrap();
    ensure!(sat.saturation().unwrap().equals(&sat).unwrap(), "sat(sat J) != sat J");
    ensure!(sat.contains_ideal(&j).unwrap(), "J not in sat J");
    ensure!(sat.equals(&pts).unwrap(), "sat J differs from the vanishing ideal of the points");
    for t in 8..12 {
        ensure!(j.hilbert_function(t).unwrap() == sat.hilbert_function(t).unwrap(), "HF differs at {t}");
    }
    Ok(())
}

fn gs_ext_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = Ring::indexed("X", 3, random_prime_field(rng));
    let (mut j, _) = points_times_maximal(&r, rng);
    if rng.gen_bool(0.5) {
        let ci = Ideal::new(&r, vec![random_form(&r, 2, 0.5, rng), random_form(&r, 2, 0.5, rng)]).unwrap();
        if ci.dim_deg().unwrap().0 <= 1 {
            j = j.intersection(&ci).unwrap();
        }
    }
    let res = resolve_quotient(&j).unwrap();
    for t in -3..8 {
        let (a, b) = (hdim_gs(&j, 1, t).unwrap(), hdim_ext(&res, 1, t).unwrap());
        ensure!(a == b, "H^1 at {t}: GS {a}, Ext {b}");
    }
    Ok(())
}

fn normal_form_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = Ring::indexed("X", 3, random_prime_field(rng));
    let gens: Vec<Polynomial> = (0..rng.gen_range(2..=4)).map(|_| random_form(&r, rng.gen_range(1..=3), 0.5, rng)).collect();
    let gb = reduced_groebner(&r, &gens, &TermOrder::GrevLex).unwrap();
    let mut member = Polynomial::zero(&r);
    for g in &gens {
        let d = g.degree().unwrap();
        member = member.add(&g.mul(&random_form(&r, 4 - d.min(4), 0.5, rng)).unwrap()).unwrap();
    }
    ensure!(gb.normal_form(&member).unwrap().is_zero(), "combination of generators has nonzero normal form");
    let f = random_form(&r, rng.gen_range(1..=5), 0.5, rng);
    let nf = gb.normal_form(&f).unwrap();
    ensure!(gb.normal_form(&nf).unwrap() == nf, "normal form not idempotent");
    ensure!(gb.contains(&f.sub(&nf).unwrap()).unwrap(), "f - NF(f) not in the ideal");
    ensure!(gb.contains(&f).unwrap() == nf.is_zero(), "membership disagrees with the normal form");
    Ok(())
}

fn determinism_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    use rand::seq::SliceRandom;
    let r = Ring::indexed("X", 3, random_prime_field(rng));
    let gens: Vec<Polynomial> = (0..rng.gen_range(2..=4)).map(|_| random_form(&r, rng.gen_range(1..=3), 0.5, rng)).collect();
    let orders: Vec<Vec<Polynomial>> = (0..4)
        .map(|_| {
            let mut g = gens.clone();
            g.shuffle(rng);
            g
        })
        .collect();
    let bases: Vec<Vec<Polynomial>> = std::thread::scope(|s| {
        let handles: Vec<_> = orders
            .iter()
            .map(|g| s.spawn(|| reduced_groebner(&r, g, &TermOrder::GrevLex).unwrap().basis().to_vec()))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    ensure!(bases.windows(2).all(|w| w[0] == w[1]), "reduced bases differ across threads");
    Ok(())
}

fn criterion_7() -> Outcome {
    let started = Instant::now();
    suite("gcd*lcm", 1, gcd_lcm_case)?;
    suite("saturation", 2, saturation_case)?;
    suite("GS vs Ext", 3, gs_ext_case)?;
    suite("normal form", 4, normal_form_case)?;
    suite("GB determinism", 5, determinism_case)?;
    Ok(format!("5 suites x 100 cases over GF(7)/GF(11) in {:.1?}", started.elapsed()))
}

fn criterion_8() -> Outcome {
    let started = Instant::now();
    let field = ratmap::Field::prime(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut tested, mut with_fibers, mut found) = (0, 0, 0);
    let mut attempt = 0;
    while tested < 24 {
        attempt += 1;
        ensure!(attempt < 200, "only {tested} usable maps in 200 attempts");
        let forms = planted_cubic_map(field, attempt, &mut rng);
        let Ok(map) = ratmap::map::build_map(forms) else { continue };
        if map.degree() != 3 || !map.is_generically_finite().unwrap() {
            continue;
        }
        tested += 1;
        let inv = find_one_dim_fibers(&map, 3).map_err(|e| format!("map {attempt}: {e}"))?;
        let oracle = brute_force_fiber_oracle(&map).unwrap();
        let a = point_set(&inv.points());
        let b = point_set(&oracle.iter().map(|r| r.point.clone()).collect::<Vec<_>>());
        ensure!(a == b, "map {attempt} {:?}: found {a:?}, oracle {b:?}", map.forms().iter().map(|f| f.to_string()).collect::<Vec<_>>());
        with_fibers += !a.is_empty() as usize;
        found += a.len();
        let deg_b = map.base_ideal().hilbert_series().unwrap().degree();
        for rec in &inv.records {
            let c = cofactor_check(&map, rec).map_err(|e| e.to_string())?;
            ensure!(c.holds(), "map {attempt}: cofactor check fails at {}", rec.point);
            ensure!(rec.divisor_degree < 3, "map {attempt}: deg h = {}", rec.divisor_degree);
            ensure!(3 * rec.divisor_degree as i64 <= deg_b, "map {attempt}: d deg h > deg B = {deg_b}");
        }
    }
    Ok(format!("{tested} maps, {with_fibers} with fibers, {found} fibers, oracle agrees, in {:.1?}", started.elapsed()))
}

fn criterion_9() -> Outcome {
    let free = map_from(ratmap::Field::Rational, &["X0^2", "X1^2", "X2^2", "X0*X1"]);
    let inv = find_one_dim_fibers(&free, 3).map_err(|e| e.to_string())?;
    ensure!(inv.records.is_empty() && inv.base_locus_empty && inv.complete, "base-point-free map has fibers");
    let table = m_mu_dims(&free.base_ideal(), 2, -2, &[1, 2, 3, 4]).unwrap();
    ensure!(table.stable_value == Some(0), "N_s = {:?}", table.values);
    let flat = map_from(ratmap::Field::prime(7).unwrap(), &["X0", "X1", "X0 + X1", "2*X0 - X1"]);
    let doc = run_pipeline(&flat, &PipelineOptions::default()).unwrap();
    ensure!(doc.exit_code == EXIT_HYPOTHESIS && doc.fibers.is_none(), "exit code {}", doc.exit_code);
    Ok(format!("base-point-free: no fibers, N_s = {:?}; image a line: exit 2", table.values.iter().map(|v| v.1).collect::<Vec<_>>()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("worked example, saturation and fiber bound", criterion_1),
        ("fiber inventory", criterion_2),
        ("resolution of the base ideal", criterion_3),
        ("Hilbert series and degree sandwiches", criterion_4),
        ("degree of N from both sides", criterion_5),
        ("support of the presentation", criterion_6),
        ("property suites", criterion_7),
        ("oracle agreement on random cubics", criterion_8),
        ("negative controls", criterion_9),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({:.1?})", k + 1, t.elapsed()),
            Err(why) => {
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
