use std::fmt::Write as _;
use std::path::PathBuf;

use num_bigint::BigInt;
use serde::Serialize;

use twistlab::curves::{Irreducibility, PrimeClassification, PrimeKind};
use twistlab::density::{shape_distribution, SieveReport, TwistSearchReport};
use twistlab::fiber::{good_fiber, twist_fiber_model, FiberGraph};
use twistlab::localsol::{predict_insolubility, Prediction, SolubilityVerdict};
use twistlab::registry::{root_counters, solubility_methods};
use twistlab::{Error, HyperellipticTwist, IntPolynomial, Prime, SieveOptions};

use crate::failure::Failure;
use crate::Format;

const THREADS_VAR: &str = "TWISTLAB_THREADS";

pub fn read_poly(inline: &Option<String>, file: &Option<PathBuf>) -> Result<IntPolynomial, Failure> {
    let text = match (inline, file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => return Err(Failure::Usage("no polynomial given".into())),
    };
    Ok(text.trim().parse::<IntPolynomial>()?)
}

pub fn parse_twist(s: &str) -> Result<BigInt, Failure> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("twist parameter `{s}` is not an integer")).into())
}

/// Available parallelism, capped by `TWISTLAB_THREADS` when set.
pub fn worker_count() -> Result<usize, Failure> {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(cap) if cap >= 1 => Ok(available.min(cap)),
            _ => Err(Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(available),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

fn unsupported(format: Format, command: &str) -> Failure {
    let name = match format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Dot => "dot",
        Format::Text => "text",
    };
    Failure::Usage(format!("--format {name} is not available for {command}"))
}

fn prime(p: u64) -> Result<Prime, Failure> {
    Ok(Prime::new(p)?)
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    polynomial: String,
    f: &'a IntPolynomial,
    degree: usize,
    genus: u32,
    disc: String,
    leading_coefficient: String,
    bad_odd_primes: Vec<u64>,
    candidates: Vec<PrimeClassification>,
    /// Cofactors of `lc * disc` the factoriser left unsplit.
    unfactored: Vec<String>,
    irreducible: Irreducibility,
    irreducibility_evidence: Option<String>,
}

pub fn analyze(f: &IntPolynomial, assume_irreducible: bool, format: Format) -> Result<String, Failure> {
    let curve = HyperellipticTwist::new(f.clone())?;
    let (candidates, unfactored) = curve.bad_prime_candidates();
    let irreducible = curve.certify_irreducible().or_asserted(assume_irreducible);
    let report = AnalyzeReport {
        polynomial: f.to_string(),
        f,
        degree: curve.degree(),
        genus: curve.genus(),
        disc: curve.discriminant().to_string(),
        leading_coefficient: f.leading().expect("nonzero").to_string(),
        bad_odd_primes: candidates
            .iter()
            .filter(|c| c.kind == PrimeKind::Bad)
            .map(|c| c.p)
            .collect(),
        candidates,
        unfactored: unfactored.iter().map(|n| n.to_string()).collect(),
        irreducible,
        irreducibility_evidence: irreducible.evidence(),
    };
    match format {
        Format::Json => Ok(json(&report)),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "f        = {}", report.polynomial);
            let _ = writeln!(out, "genus    = {}", report.genus);
            let _ = writeln!(out, "disc(f)  = {}", report.disc);
            let _ = writeln!(out, "bad odd primes: {:?}", report.bad_odd_primes);
            for c in &report.candidates {
                let _ = writeln!(out, "  p = {}: {}", c.p, c.kind);
            }
            if !report.unfactored.is_empty() {
                let _ = writeln!(out, "unfactored cofactors: {}", report.unfactored.join(", "));
            }
            let _ = match irreducible.evidence() {
                Some(e) => writeln!(out, "irreducible: {} ({e})", irreducible.label()),
                None => writeln!(out, "irreducible: {}", irreducible.label()),
            };
            Ok(out)
        }
        other => Err(unsupported(other, "analyze")),
    }
}

#[derive(Serialize)]
struct FiberReport {
    p: u64,
    d: String,
    genus: u32,
    twisted: bool,
    #[serde(rename = "type")]
    type_label: String,
    rational_smooth_locus: bool,
    arithmetic_genus: i64,
    minimal: bool,
    #[serde(flatten)]
    graph: FiberGraph,
}

pub fn fiber(f: &IntPolynomial, d: &BigInt, p: u64, format: Format) -> Result<String, Failure> {
    let curve = HyperellipticTwist::with_twist(f.clone(), d.clone())?;
    let class = curve.classify_prime(prime(p)?);
    match class.kind {
        PrimeKind::Excluded => return Err(Error::ExcludedPrime.into()),
        PrimeKind::Bad => return Err(Error::BadPrime(p).into()),
        _ => {}
    }
    let g = curve.genus();
    let twisted = curve.d() % p == BigInt::from(0);
    let graph = if twisted {
        let shape = class.shape.as_ref().expect("good prime has a shape");
        let odd = class.reduced_degree.expect("good prime") % 2 == 1;
        twist_fiber_model(g)?.descend_components(shape, odd)?
    } else {
        good_fiber(g)?
    };
    let report = FiberReport {
        p,
        d: curve.d().to_string(),
        genus: g,
        twisted,
        type_label: graph.type_label()?,
        rational_smooth_locus: graph.rational_smooth_locus_nonempty(),
        arithmetic_genus: graph.arithmetic_genus()?,
        minimal: graph.check_minimality(),
        graph,
    };
    match format {
        Format::Json => Ok(json(&report)),
        Format::Dot => Ok(report.graph.to_dot()),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "{} at p = {p}: type {}", curve, report.type_label);
            for c in report.graph.components() {
                let _ = writeln!(
                    out,
                    "  {:<10} mult {}  C^2 = {:>3}  genus {}  orbit {}",
                    c.name, c.multiplicity, c.self_intersection, c.genus, c.field_of_definition_degree
                );
            }
            let _ = writeln!(out, "rational smooth locus: {}", report.rational_smooth_locus);
            Ok(out)
        }
        other => Err(unsupported(other, "fiber")),
    }
}

pub struct SolubilityOptions<'a> {
    pub max_depth: Option<u32>,
    pub method: &'a str,
    pub assume_irreducible: bool,
}

#[derive(Serialize)]
struct VerdictReport<'a> {
    #[serde(flatten)]
    verdict: &'a SolubilityVerdict,
    prediction: Prediction,
    method: &'a str,
    p: u64,
    curve: &'a HyperellipticTwist,
}

pub fn solubility(
    f: &IntPolynomial,
    d: &BigInt,
    p: u64,
    opts: &SolubilityOptions<'_>,
    format: Format,
) -> Result<String, Failure> {
    let methods = solubility_methods();
    let method = methods.get(opts.method)?;
    let curve = HyperellipticTwist::with_twist(f.clone(), d.clone())?;
    let p = prime(p)?;
    let verdict = method.decide(&curve, p, opts.max_depth)?;
    let irreducibility = if curve.has_even_degree() {
        curve.certify_irreducible().or_asserted(opts.assume_irreducible)
    } else {
        Irreducibility::Unknown
    };
    let prediction = predict_insolubility(&curve, p, irreducibility);
    let report = VerdictReport {
        verdict: &verdict,
        prediction,
        method: method.name(),
        p: p.get(),
        curve: &curve,
    };
    match format {
        Format::Json => Ok(json(&report)),
        Format::Text => {
            let mut out = format!(
                "{curve} over Q_{p}: {} (depth {} of {}, {} classes closed)\n",
                verdict.status, verdict.depth_used, verdict.max_depth, verdict.classes_closed
            );
            if let Some(w) = &verdict.witness {
                let _ = writeln!(out, "witness: {w}");
            }
            let _ = writeln!(out, "prediction: {prediction}");
            Ok(out)
        }
        other => Err(unsupported(other, "solubility")),
    }
}

#[derive(Serialize)]
struct SieveOutput<'a> {
    polynomial: String,
    root_method: &'a str,
    #[serde(flatten)]
    report: &'a SieveReport,
}

pub fn sieve(
    f: &IntPolynomial,
    bound: u64,
    root_method: &str,
    members: bool,
    workers: usize,
    format: Format,
) -> Result<String, Failure> {
    let counters = root_counters();
    let counter = counters.get(root_method)?;
    let options = SieveOptions {
        workers,
        root_counter: counter,
        keep_members: members,
        keep_rows: format == Format::Csv,
    };
    let report = twistlab::sieve_s_f(f, bound, &options)?;
    match format {
        Format::Json => Ok(json(&SieveOutput {
            polynomial: f.to_string(),
            root_method: counter.name(),
            report: &report,
        })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["p", "shape", "in_S_f"]).map_err(csv_failure)?;
            for row in report.rows.iter().flatten() {
                w.write_record([row.p.to_string(), row.shape.to_string(), row.in_s_f.to_string()])
                    .map_err(csv_failure)?;
            }
            csv_string(w)
        }
        Format::Text => {
            let (lo, hi) = report.wilson_95;
            let mut out = format!(
                "S_f for f = {f}, odd primes up to {bound}: {}/{} = {:.4} (95% interval {lo:.4}..{hi:.4})\n",
                report.s_f_members, report.primes_scanned, report.density_estimate
            );
            let _ = writeln!(out, "bad odd primes: {:?}", report.bad_primes);
            for s in shape_distribution(&report) {
                let _ = writeln!(out, "  {:<12} {:>8}  {:.4}", s.shape.to_string(), s.count, s.frequency);
            }
            Ok(out)
        }
        other => Err(unsupported(other, "sieve")),
    }
}

fn csv_failure(e: csv::Error) -> Failure {
    Failure::Usage(format!("csv output failed: {e}"))
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Usage(format!("csv output failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    polynomial: String,
    method: &'a str,
    #[serde(flatten)]
    report: &'a TwistSearchReport,
}

/// Returns the rendered table and whether any falsification occurred.
pub fn search_twists(
    f: &IntPolynomial,
    bound: u64,
    method: &str,
    assume_irreducible: bool,
    format: Format,
) -> Result<(String, bool), Failure> {
    let methods = solubility_methods();
    let method = methods.get(method)?;
    let curve = HyperellipticTwist::new(f.clone())?;
    if !curve.has_even_degree() {
        return Err(Error::OddDegreeUnsupported.into());
    }
    let irreducibility = curve.certify_irreducible().or_asserted(assume_irreducible);
    let report = twistlab::search_insoluble_twists(f, bound, irreducibility, method)?;
    let falsified = report.falsifications > 0;
    let text = match format {
        Format::Json => json(&SearchOutput {
            polynomial: f.to_string(),
            method: method.name(),
            report: &report,
        }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["p", "shape", "prediction", "status", "outcome"])
                .map_err(csv_failure)?;
            for row in &report.rows {
                w.write_record([
                    row.p.to_string(),
                    row.shape.to_string(),
                    row.prediction.to_string(),
                    row.verdict.status.to_string(),
                    row.outcome.to_string(),
                ])
                .map_err(csv_failure)?;
            }
            csv_string(w)?
        }
        Format::Text => {
            let mut out = format!(
                "twists p*y^2 = {f} for no-root primes p <= {bound} (irreducibility {})\n",
                irreducibility.label()
            );
            for row in &report.rows {
                let _ = writeln!(
                    out,
                    "  p = {:<6} shape {:<10} {:<10} {}",
                    row.p,
                    row.shape.to_string(),
                    row.verdict.status.to_string(),
                    row.outcome
                );
            }
            let _ = writeln!(
                out,
                "confirmed {}, falsifications {}, inconclusive {}",
                report.confirmed, report.falsifications, report.inconclusive
            );
            out
        }
        other => return Err(unsupported(other, "search-twists")),
    };
    Ok((text, falsified))
}

pub fn methods() -> String {
    let mut out = String::from("solubility methods (--method):\n");
    let sol = solubility_methods();
    for name in sol.names() {
        let _ = writeln!(out, "  {name:<16} {}", sol.get(name).expect("registered").summary());
    }
    out.push_str("root counters (--root-method):\n");
    let rc = root_counters();
    for name in rc.names() {
        let _ = writeln!(out, "  {name:<16} {}", rc.get(name).expect("registered").summary());
    }
    out
}
