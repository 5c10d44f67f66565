//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistlab::arith::Prime;
use twistlab::curves::{HyperellipticTwist, MobiusTransform};
use twistlab::density::{sieve_s_f, SieveOptions, SieveReport};
use twistlab::fiber::twist_fiber_model;
use twistlab::localsol::{is_locally_soluble, verify_witness, Chart, SolubilityStatus, Witness};
use twistlab::poly::{FactorShape, IntPolynomial};
use twistlab::sieve::primes_up_to;

use common::Brute;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn poly(s: &str) -> IntPolynomial {
    s.parse().unwrap()
}

fn sieve(f: &str, bound: u64) -> (SieveReport, Duration) {
    let start = Instant::now();
    let r = sieve_s_f(&poly(f), bound, &SieveOptions::default()).unwrap();
    (r, start.elapsed())
}

/// Fraction of group elements fixing no point.
fn derangement_fraction(group: &[Vec<usize>]) -> f64 {
    let fixed_point_free = group
        .iter()
        .filter(|g| g.iter().enumerate().all(|(i, &j)| i != j))
        .count();
    fixed_point_free as f64 / group.len() as f64
}

fn density_criterion(x4p1: &(SieveReport, Duration)) -> Outcome {
    let s4 = common::permutations(4);
    let s4_expected = derangement_fraction(&s4);
    let v4_expected = derangement_fraction(&common::galois_x4_plus_1());
    let c2_expected = derangement_fraction(&[vec![0, 1], vec![1, 0]]);
    let mut ok = s4.len() == 24 && (s4_expected - 9.0 / 24.0).abs() < 1e-12;
    let mut parts = vec![format!("S4 derangements {}/24", (s4_expected * 24.0).round())];
    let x2 = sieve("x^2 + 1", 100_000);
    let x4x1 = sieve("x^4 + x + 1", 1_000_000);
    for (name, (report, took), expected) in [
        ("x^4+1", x4p1, v4_expected),
        ("x^2+1", &x2, c2_expected),
        ("x^4+x+1", &x4x1, s4_expected),
    ] {
        let good = (report.density_estimate - expected).abs() <= 0.02 && took.as_secs_f64() < 60.0;
        ok &= good;
        parts.push(format!(
            "{name}: {:.4} (expected {expected:.3}, {:.1}s)",
            report.density_estimate,
            took.as_secs_f64()
        ));
    }
    check(ok, parts.join("; "))
}

fn insoluble_twists_criterion() -> Outcome {
    let start = Instant::now();
    let f = poly("x^4 + 1");
    let base = HyperellipticTwist::new(f).unwrap();
    let mut agree = 0;
    let mut total = 0;
    for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
        let curve = base.twist(&BigInt::from(p)).unwrap();
        let v = is_locally_soluble(&curve, Prime::odd(p).unwrap(), None).unwrap();
        let expected = if p % 8 == 1 {
            SolubilityStatus::Soluble
        } else {
            SolubilityStatus::Insoluble
        };
        total += 1;
        if v.status == expected {
            agree += 1;
        }
    }
    let took = start.elapsed().as_secs_f64();
    check(
        agree == total && took < 10.0,
        format!("{agree}/{total} primes agree, {took:.2}s"),
    )
}

fn positive_control_criterion() -> Outcome {
    let start = Instant::now();
    let base = HyperellipticTwist::new(poly("x^4 - 1")).unwrap();
    let disc = base.discriminant().clone();
    let mut agree = 0;
    let mut total = 0;
    for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
        if &disc % p == BigInt::from(0) {
            continue;
        }
        total += 1;
        let curve = base.twist(&BigInt::from(p)).unwrap();
        let v = is_locally_soluble(&curve, Prime::odd(p).unwrap(), None).unwrap();
        let at_one = matches!(
            &v.witness,
            Some(Witness::Point { chart: Chart::Affine, center, y: None, .. }) if center == &BigInt::one()
        );
        if v.status == SolubilityStatus::Soluble && at_one {
            agree += 1;
        }
    }
    let took = start.elapsed().as_secs_f64();
    check(
        agree == total && took < 5.0,
        format!("{agree}/{total} primes give witness (1,0), {took:.2}s"),
    )
}

fn fiber_criterion() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for g in 1..=50u32 {
        let fib = twist_fiber_model(g).unwrap();
        let label = fib.type_label().unwrap();
        let label_ok = match g {
            1 => label == "I0*",
            2 => label == "[I*_{0-0-0}]",
            _ => true,
        };
        let ok = fib.len() == 2 * g as usize + 3
            && fib.satisfies_fiber_identity()
            && fib.has_fiber_radical()
            && fib.arithmetic_genus() == Ok(g as i64)
            && fib.check_minimality()
            && label_ok;
        if !ok {
            failures.push(g);
        }
    }
    let took = start.elapsed().as_secs_f64();
    check(
        failures.is_empty() && took < 1.0,
        format!("g = 1..50, failures {failures:?}, {took:.3}s"),
    )
}

fn soundness_criterion() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7715_7a11);
    let odd_primes: Vec<u64> = primes_up_to(50).into_iter().filter(|&p| p > 2).collect();
    let (mut soluble, mut insoluble, mut unknown, mut bad) = (0, 0, 0, Vec::new());
    for i in 0..1000 {
        let degree = if rng.gen_bool(0.5) { 4 } else { 6 };
        let f = common::random_separable(&mut rng, degree, 20);
        let p = odd_primes[rng.gen_range(0..odd_primes.len())];
        let mut d = common::random_twist(&mut rng, 30);
        if rng.gen_bool(0.5) && &d % p != BigInt::from(0) {
            d *= p;
        }
        let curve = HyperellipticTwist::with_twist(f.clone(), d.clone()).unwrap();
        let prime = Prime::odd(p).unwrap();
        let v = is_locally_soluble(&curve, prime, None).unwrap();
        let brute = common::brute_force(curve.f(), curve.d(), p, 5);
        let ok = match v.status {
            SolubilityStatus::Soluble => {
                soluble += 1;
                let w = v.witness.as_ref().unwrap();
                verify_witness(&curve, prime, w).is_ok() && brute != Brute::NoPoint
            }
            SolubilityStatus::Insoluble => {
                insoluble += 1;
                brute == Brute::NoPoint
            }
            SolubilityStatus::Unknown => {
                unknown += 1;
                false
            }
        };
        if !ok {
            bad.push(format!("#{i}: {curve} at p = {p}: {} vs {brute:?}", v.status));
        }
    }
    let took = start.elapsed().as_secs_f64();
    let mut detail = format!(
        "{soluble} soluble, {insoluble} insoluble, {unknown} unknown, {} disagreements, {took:.1}s",
        bad.len()
    );
    if let Some(first) = bad.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    check(bad.is_empty() && took < 120.0, detail)
}

fn shape_criterion(x4p1: &(SieveReport, Duration)) -> Outcome {
    let group = common::galois_x4_plus_1();
    let expected_for = |shape: &FactorShape| {
        group
            .iter()
            .filter(|g| common::cycle_type(g) == shape.degrees())
            .count() as f64
            / group.len() as f64
    };
    let report = &x4p1.0;
    let total = report.primes_scanned as f64;
    let freq = |s: &str| {
        let shape: FactorShape = s.parse().unwrap();
        report.shape_histogram.get(&shape).copied().unwrap_or(0) as f64 / total
    };
    let ones: FactorShape = "{1,1,1,1}".parse().unwrap();
    let twos: FactorShape = "{2,2}".parse().unwrap();
    let mut ok = (expected_for(&ones) - 0.25).abs() < 1e-12 && (expected_for(&twos) - 0.75).abs() < 1e-12;
    ok &= (freq("{1,1,1,1}") - 0.25).abs() <= 0.02 && (freq("{2,2}") - 0.75).abs() <= 0.02;
    let other_max = report
        .shape_histogram
        .iter()
        .filter(|(s, _)| **s != ones && **s != twos)
        .map(|(_, &c)| c as f64 / total)
        .fold(0.0, f64::max);
    ok &= other_max < 0.005;
    check(
        ok,
        format!(
            "{{1,1,1,1}} {:.4}, {{2,2}} {:.4}, max other {other_max:.4}",
            freq("{1,1,1,1}"),
            freq("{2,2}")
        ),
    )
}

fn random_unimodular<R: Rng>(rng: &mut R) -> MobiusTransform {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..3 {
        let k = rng.gen_range(-3..=3);
        let step = match rng.gen_range(0..3) {
            0 => [[1, k], [0, 1]],
            1 => [[1, 0], [k, 1]],
            _ => [[0, 1], [1, 0]],
        };
        m = [
            [
                m[0][0] * step[0][0] + m[0][1] * step[1][0],
                m[0][0] * step[0][1] + m[0][1] * step[1][1],
            ],
            [
                m[1][0] * step[0][0] + m[1][1] * step[1][0],
                m[1][0] * step[0][1] + m[1][1] * step[1][1],
            ],
        ];
    }
    MobiusTransform::new(m[0][0], m[0][1], m[1][0], m[1][1], BigRational::one()).unwrap()
}

fn algebra_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0a15_eb4a);
    let mut involution = 0;
    let mut round_trip = 0;
    let mut quadratic = 0;
    for _ in 0..1000 {
        let degree = rng.gen_range(3..=6);
        let f = common::random_separable(&mut rng, degree, 20);
        let d = common::random_twist(&mut rng, 50);
        let curve = HyperellipticTwist::with_twist(f.clone(), common::random_twist(&mut rng, 50)).unwrap();
        if curve.twist(&d).unwrap().twist(&d).unwrap() == curve {
            involution += 1;
        }

        let m = random_unimodular(&mut rng);
        let there = curve.transform(&m).unwrap();
        let back = there.transform(&m.inverse(curve.genus())).unwrap();
        if back == curve {
            round_trip += 1;
        }

        let a = loop {
            let a: i64 = rng.gen_range(-50..=50);
            if a != 0 {
                break a;
            }
        };
        let b: i64 = rng.gen_range(-1000..=1000);
        let c: i64 = rng.gen_range(-1000..=1000);
        let monic = IntPolynomial::from_coeffs([c, b, 1]);
        let general = IntPolynomial::from_coeffs([c, b, a]);
        if monic.discriminant().unwrap() == BigInt::from(b * b - 4 * c)
            && general.discriminant().unwrap() == BigInt::from(b * b - 4 * a * c)
        {
            quadratic += 1;
        }
    }
    check(
        involution == 1000 && round_trip == 1000 && quadratic == 1000,
        format!("involution {involution}/1000, round trip {round_trip}/1000, b^2-4ac {quadratic}/1000"),
    )
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let x4p1 = sieve("x^4 + 1", 1_000_000);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 density of S_f", Box::new(|| density_criterion(&x4p1))),
        ("2 insoluble twists of x^4+1", Box::new(insoluble_twists_criterion)),
        ("3 positive control x^4-1", Box::new(positive_control_criterion)),
        ("4 fiber invariants", Box::new(fiber_criterion)),
        ("5 oracle soundness", Box::new(soundness_criterion)),
        ("6 shape statistics", Box::new(|| shape_criterion(&x4p1))),
        ("7 algebraic properties", Box::new(algebra_criterion)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let out = run();
        let tag = if out.ok { "PASS" } else { "FAIL" };
        if !out.ok {
            failed += 1;
        }
        println!("[{tag}] criterion {name}: {}", out.detail);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
