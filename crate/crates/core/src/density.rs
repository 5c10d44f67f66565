//! Natural density of `S_f = {p : f has no root mod p}`, and the search for
//! locally insoluble twists `y^2 = p f(x)` over primes in `S_f`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{self, Prime};
use crate::curves::{HyperellipticTwist, Irreducibility, PrimeKind};
use crate::error::{Error, Result};
use crate::localsol::{self, Prediction, SolubilityStatus, SolubilityVerdict};
use crate::poly::{FactorShape, IntPolynomial};
use crate::registry::{GcdRootCounter, RootCounter, SolubilityMethod};
use crate::sieve;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

pub struct SieveOptions<'a> {
    pub workers: usize,
    pub root_counter: &'a dyn RootCounter,
    pub keep_members: bool,
    pub keep_rows: bool,
}

impl Default for SieveOptions<'_> {
    fn default() -> Self {
        SieveOptions {
            workers: 1,
            root_counter: &GcdRootCounter,
            keep_members: false,
            keep_rows: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeRow {
    pub p: u64,
    pub root_count: usize,
    pub shape: FactorShape,
    pub in_s_f: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SieveReport {
    pub bound: u64,
    pub primes_scanned: u64,
    pub s_f_members: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<u64>>,
    pub density_numerator: u64,
    pub density_denominator: u64,
    pub density_estimate: f64,
    pub wilson_95: (f64, f64),
    pub shape_histogram: BTreeMap<FactorShape, u64>,
    /// Odd primes where `f mod p` drops degree or is not squarefree. 2 is
    /// always left out as well.
    pub bad_primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<PrimeRow>>,
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let z2 = Z95 * Z95;
    let denom = n + z2;
    let centre = (k + z2 / 2.0) / denom;
    let half = Z95 / denom * (k * (n - k) / n + z2 / 4.0).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

enum Scan {
    Bad(u64),
    Row(PrimeRow),
}

fn scan_prime(
    f: &IntPolynomial,
    lc_disc: &BigInt,
    p: u64,
    counter: &dyn RootCounter,
) -> Result<Scan> {
    let fb = f.reduce_unchecked(p);
    if arith::residue(lc_disc, p) == 0
        && (fb.deg() != f.deg() || !fb.is_squarefree())
    {
        return Ok(Scan::Bad(p));
    }
    let shape = fb.factorization_shape()?;
    let root_count = counter.count_roots(&fb)?;
    if root_count != shape.linear_factors() {
        return Err(Error::Invariant(format!(
            "p = {p}: {} counts {root_count} roots but shape is {shape}",
            counter.name()
        )));
    }
    Ok(Scan::Row(PrimeRow { p, root_count, shape, in_s_f: root_count == 0 }))
}

fn scan_range(
    f: &IntPolynomial,
    lc_disc: &BigInt,
    lo: u64,
    hi: u64,
    counter: &dyn RootCounter,
) -> Result<Vec<Scan>> {
    sieve::primes_in_range(lo, hi)
        .into_iter()
        .map(|p| scan_prime(f, lc_disc, p, counter))
        .collect()
}

/// Scans the odd primes `p ≤ bound` at which `f` reduces to a squarefree
/// polynomial of the same degree, and records which of them lie in `S_f`.
///
/// Work is split into contiguous prime ranges, one per worker, and merged in
/// range order, so the report does not depend on the worker count.
pub fn sieve_s_f(f: &IntPolynomial, bound: u64, options: &SieveOptions<'_>) -> Result<SieveReport> {
    if bound < 3 {
        return Err(Error::BoundTooSmall);
    }
    let n = f.deg().ok_or(Error::ZeroPolynomial)?;
    if n < 1 {
        return Err(Error::DegreeTooSmall);
    }
    let disc = if n == 1 { BigInt::from(1) } else { f.discriminant()? };
    if disc == BigInt::from(0) {
        return Err(Error::SingularCurve);
    }
    let lc_disc = f.leading().expect("nonzero") * &disc;
    let ranges = sieve::partition(3, bound, options.workers);
    let counter = options.root_counter;
    let chunks: Vec<Result<Vec<Scan>>> = if ranges.len() <= 1 {
        ranges
            .iter()
            .map(|&(lo, hi)| scan_range(f, &lc_disc, lo, hi, counter))
            .collect()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(lo, hi)| {
                    let lc_disc = &lc_disc;
                    s.spawn(move || scan_range(f, lc_disc, lo, hi, counter))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sieve worker panicked"))
                .collect()
        })
    };

    let mut report = SieveReport {
        bound,
        primes_scanned: 0,
        s_f_members: 0,
        members: options.keep_members.then(Vec::new),
        density_numerator: 0,
        density_denominator: 0,
        density_estimate: 0.0,
        wilson_95: (0.0, 1.0),
        shape_histogram: BTreeMap::new(),
        bad_primes: Vec::new(),
        rows: options.keep_rows.then(Vec::new),
    };
    for chunk in chunks {
        for scan in chunk? {
            match scan {
                Scan::Bad(p) => report.bad_primes.push(p),
                Scan::Row(row) => {
                    report.primes_scanned += 1;
                    *report.shape_histogram.entry(row.shape.clone()).or_default() += 1;
                    if row.in_s_f {
                        report.s_f_members += 1;
                        if let Some(m) = report.members.as_mut() {
                            m.push(row.p);
                        }
                    }
                    if let Some(r) = report.rows.as_mut() {
                        r.push(row);
                    }
                }
            }
        }
    }
    report.density_numerator = report.s_f_members;
    report.density_denominator = report.primes_scanned;
    if report.primes_scanned > 0 {
        report.density_estimate = report.s_f_members as f64 / report.primes_scanned as f64;
    }
    report.wilson_95 = wilson_interval(report.s_f_members, report.primes_scanned);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeFrequency {
    pub shape: FactorShape,
    pub count: u64,
    pub frequency: f64,
}

/// Empirical frequencies of factorisation shapes, most common first.
pub fn shape_distribution(report: &SieveReport) -> Vec<ShapeFrequency> {
    let total = report.primes_scanned.max(1) as f64;
    let mut out: Vec<ShapeFrequency> = report
        .shape_histogram
        .iter()
        .map(|(shape, &count)| ShapeFrequency {
            shape: shape.clone(),
            count,
            frequency: count as f64 / total,
        })
        .collect();
    out.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.shape.cmp(&b.shape)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    /// Predicted insoluble and found insoluble.
    Confirmed,
    /// Predicted insoluble but a certified point exists.
    Falsification,
    /// The oracle ran out of depth.
    Inconclusive,
    /// No prediction was made; reported for completeness.
    Unpredicted,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Confirmed => "CONFIRMED",
            Outcome::Falsification => "FALSIFICATION",
            Outcome::Inconclusive => "INCONCLUSIVE",
            Outcome::Unpredicted => "UNPREDICTED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistRow {
    pub p: u64,
    pub shape: FactorShape,
    pub prediction: Prediction,
    pub verdict: SolubilityVerdict,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistSearchReport {
    pub bound: u64,
    pub irreducibility: Irreducibility,
    pub rows: Vec<TwistRow>,
    pub confirmed: usize,
    pub falsifications: usize,
    pub inconclusive: usize,
}

/// For each odd prime `p ≤ bound` where `f` has good reduction and no
/// F_p-rational branch point, decides local solubility of `y^2 = p f(x)` at
/// `p` and compares it with the prediction of insolubility.
pub fn search_insoluble_twists(
    f: &IntPolynomial,
    bound: u64,
    irreducibility: Irreducibility,
    method: &dyn SolubilityMethod,
) -> Result<TwistSearchReport> {
    if bound < 3 {
        return Err(Error::BoundTooSmall);
    }
    let base = HyperellipticTwist::new(f.clone())?;
    if !base.has_even_degree() {
        return Err(Error::OddDegreeUnsupported);
    }
    if !irreducibility.is_known() {
        return Err(Error::IrreducibilityUnknown);
    }
    let mut report = TwistSearchReport {
        bound,
        irreducibility,
        rows: Vec::new(),
        confirmed: 0,
        falsifications: 0,
        inconclusive: 0,
    };
    for p in sieve::primes_in_range(3, bound) {
        let prime = Prime::new_unchecked(p);
        let class = base.classify_prime(prime);
        if class.kind != PrimeKind::GoodNoRoot {
            continue;
        }
        let twisted = base.twist(&BigInt::from(p))?;
        let prediction = localsol::predict_insolubility(&twisted, prime, irreducibility);
        let verdict = method.decide(&twisted, prime, None)?;
        let outcome = match (prediction, verdict.status) {
            (Prediction::NoPrediction, _) => Outcome::Unpredicted,
            (_, SolubilityStatus::Insoluble) => Outcome::Confirmed,
            (_, SolubilityStatus::Soluble) => Outcome::Falsification,
            (_, SolubilityStatus::Unknown) => Outcome::Inconclusive,
        };
        match outcome {
            Outcome::Confirmed => report.confirmed += 1,
            Outcome::Falsification => report.falsifications += 1,
            Outcome::Inconclusive => report.inconclusive += 1,
            Outcome::Unpredicted => {}
        }
        report.rows.push(TwistRow {
            p,
            shape: class.shape.expect("good prime has a shape"),
            prediction,
            verdict,
            outcome,
        });
    }
    Ok(report)
}
