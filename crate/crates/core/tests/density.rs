mod common;

use proptest::prelude::*;

use twistlab::curves::HyperellipticTwist;
use twistlab::density::{shape_distribution, sieve_s_f, SieveOptions};
use twistlab::fiber::twist_fiber_model;
use twistlab::poly::{FactorShape, IntPolynomial};
use twistlab::sieve::primes_up_to;

fn poly(s: &str) -> IntPolynomial {
    s.parse().unwrap()
}

fn with_members() -> SieveOptions<'static> {
    SieveOptions { keep_members: true, keep_rows: true, ..Default::default() }
}

#[test]
fn members_match_exhaustive_evaluation_below_1000() {
    for f in ["x^4 + 1", "x^2 + 1", "x^4 + x + 1", "x^3 - 2", "x^6 + x + 1"] {
        let f = poly(f);
        let report = sieve_s_f(&f, 1000, &with_members()).unwrap();
        let expected: Vec<u64> = primes_up_to(1000)
            .into_iter()
            .filter(|&p| p > 2 && !report.bad_primes.contains(&p))
            .filter(|&p| {
                let fb = f.reduce_mod_p(p).unwrap();
                (0..p).all(|x| fb.eval(x) != 0)
            })
            .collect();
        assert_eq!(report.members.unwrap(), expected, "{f}");
    }
}

#[test]
fn x4_plus_1_members_are_the_primes_not_1_mod_8() {
    let report = sieve_s_f(&poly("x^4 + 1"), 1000, &with_members()).unwrap();
    let expected: Vec<u64> = primes_up_to(1000).into_iter().filter(|&p| p > 2 && p % 8 != 1).collect();
    assert_eq!(report.members.unwrap(), expected);
}

#[test]
fn x4_plus_1_shapes_at_10_4() {
    // roots of x^4 + 1 mod p are primitive 8th roots of unity: all four
    // exist iff 8 | p - 1, and otherwise the polynomial splits into quadratics
    let report = sieve_s_f(&poly("x^4 + 1"), 10_000, &with_members()).unwrap();
    for row in report.rows.unwrap() {
        let expected: FactorShape = if row.p % 8 == 1 { "{1,1,1,1}" } else { "{2,2}" }.parse().unwrap();
        assert_eq!(row.shape, expected, "p = {}", row.p);
    }
}

#[test]
fn x4_plus_x_plus_1_disc_formula() {
    // x^4 + bx + c has discriminant -27 b^4 + 256 c^3
    let disc = poly("x^4 + x + 1").discriminant().unwrap();
    assert_eq!(disc, (-27 + 256).into());
}

#[test]
fn x2_plus_1_shapes_split_evenly() {
    let report = sieve_s_f(&poly("x^2 + 1"), 100_000, &SieveOptions::default()).unwrap();
    let dist = shape_distribution(&report);
    assert_eq!(dist.len(), 2);
    for s in dist {
        assert!((s.frequency - 0.5).abs() < 0.02, "{} {}", s.shape, s.frequency);
    }
}

#[test]
fn density_within_law_of_large_numbers_tolerance() {
    for bound in [100_000u64, 300_000] {
        let report = sieve_s_f(&poly("x^4 + 1"), bound, &SieveOptions::default()).unwrap();
        let pi = primes_up_to(bound).len() as f64;
        assert!((report.density_estimate - 0.75).abs() < 3.0 / pi.sqrt(), "N = {bound}");
        let (lo, hi) = report.wilson_95;
        assert!(lo <= report.density_estimate && report.density_estimate <= hi);
    }
}

#[test]
fn certified_irreducible_polynomials_have_positive_density() {
    for f in ["x^4 + x + 1", "x^3 - 2", "x^6 + x + 1", "x^4 + 1", "3x^4 - 5x + 7"] {
        let curve = HyperellipticTwist::new(poly(f)).unwrap();
        assert!(curve.certify_irreducible().holds(), "{f}");
        let report = sieve_s_f(curve.f(), 100_000, &SieveOptions::default()).unwrap();
        assert!(report.density_estimate > 0.0, "{f}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn report_invariants(coeffs in prop::collection::vec(-9i64..=9, 2..=6), lead in 1i64..=5, bound in 3u64..3000) {
        let mut c = coeffs;
        c.push(lead);
        let f = IntPolynomial::from_coeffs(c);
        prop_assume!(f.discriminant().unwrap() != 0.into());
        let r = sieve_s_f(&f, bound, &SieveOptions::default()).unwrap();
        let pi = primes_up_to(bound).len() as u64;
        prop_assert_eq!(r.primes_scanned + r.bad_primes.len() as u64 + 1, pi);
        prop_assert!((0.0..=1.0).contains(&r.density_estimate));
        prop_assert_eq!(r.shape_histogram.values().sum::<u64>(), r.primes_scanned);
        let no_root_mass: u64 = r
            .shape_histogram
            .iter()
            .filter(|(s, _)| !s.has_linear_factor())
            .map(|(_, &c)| c)
            .sum();
        prop_assert_eq!(no_root_mass, r.s_f_members);
        for s in r.shape_histogram.keys() {
            prop_assert_eq!(s.total_degree(), f.deg().unwrap());
        }
    }

    #[test]
    fn partition_does_not_change_the_report(workers in 1usize..9, bound in 3u64..20_000) {
        let f = poly("x^4 + x + 1");
        let single = sieve_s_f(&f, bound, &with_members()).unwrap();
        let split = sieve_s_f(&f, bound, &SieveOptions { workers, ..with_members() }).unwrap();
        prop_assert_eq!(single, split);
    }

    #[test]
    fn descent_rationality_matches_shape(g in 1u32..=8, split in prop::collection::vec(1u32..=4, 1..12), odd in any::<bool>()) {
        // cut the degrees so that they fill exactly 2g + 2 leaves
        let target = 2 * g + 2 - u32::from(odd);
        let mut degrees = Vec::new();
        let mut left = target;
        for d in split.into_iter().chain(std::iter::repeat(1)) {
            if left == 0 {
                break;
            }
            let d = d.min(left);
            degrees.push(d);
            left -= d;
        }
        let shape = FactorShape::new(degrees);
        let fib = twist_fiber_model(g).unwrap().descend_components(&shape, odd).unwrap();
        prop_assert_eq!(fib.rational_smooth_locus_nonempty(), shape.has_linear_factor() || odd);
        let rational_leaves = fib.components()[1..].iter().filter(|c| c.field_of_definition_degree == 1).count();
        prop_assert_eq!(rational_leaves, shape.linear_factors() + usize::from(odd));
    }
}
