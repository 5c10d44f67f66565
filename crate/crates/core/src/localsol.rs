//! Deciding whether `d y^2 = f(x)` has a point over Q_p, p odd.
//!
//! The search splits the projective line into the affine chart `x ∈ Z_p`
//! and the chart `x = 1/u` with `u ∈ pZ_p` (which also carries the points
//! at infinity). Inside a chart it walks residue classes: a class on which
//! `f` is a p-adic unit is settled by the square class of `d · f(r)`, a
//! simple root of `f mod p` lifts by Hensel's lemma, and a multiple root is
//! zoomed into by `x = r + p t` after removing the p-power content. Only the
//! parity of the accumulated valuation and the quadratic character of the
//! unit part of the twist are carried down the recursion.
//!
//! Every `Soluble` verdict carries a [`Witness`] that [`verify_witness`]
//! re-checks from scratch against `f` and `d`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::arith::{self, Prime};
use crate::curves::{HyperellipticTwist, Irreducibility, PrimeKind};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolubilityStatus {
    Soluble,
    Insoluble,
    Unknown,
}

impl fmt::Display for SolubilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolubilityStatus::Soluble => "SOLUBLE",
            SolubilityStatus::Insoluble => "INSOLUBLE",
            SolubilityStatus::Unknown => "UNKNOWN",
        })
    }
}

/// Which affine piece of the curve a witness lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    /// `x ∈ Z_p`, equation `d y^2 = f(x)`.
    Affine,
    /// `x = 1/u` with `u ∈ pZ_p`, equation `d z^2 = u^{2g+2} f(1/u)`.
    Inverted,
}

/// `y = p^valuation · w` with `w ≡ residue (mod p)` a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct YApprox {
    pub valuation: i64,
    pub residue: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// `d · F` has even valuation and square unit part at the centre, and
    /// `F(x) - F(centre)` has strictly larger valuation on the whole class.
    Square { value_valuation: u32 },
    /// Hensel: `v(F(centre)) > 2 v(F'(centre))` (`None` = exact root).
    SimpleRoot {
        value_valuation: Option<u32>,
        derivative_valuation: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A rational point at infinity: always for odd `deg f`, and for even
    /// `deg f` when `lc(f)/d` is a square in Q_p.
    Infinity { odd_degree: bool },
    /// Every point of the residue class `centre + p^precision Z_p` in the
    /// given chart lies under a Q_p-point (square certificate), or the class
    /// contains a root of `F` (root certificate).
    Point {
        chart: Chart,
        #[serde(serialize_with = "as_decimal")]
        center: BigInt,
        /// Number of certified p-adic digits of the centre; `None` for an
        /// exact root.
        precision: Option<u32>,
        /// `None` when the point has `y = 0`.
        y: Option<YApprox>,
        certificate: Certificate,
    },
}

fn as_decimal<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Infinity { .. } => f.write_str("point at infinity"),
            Witness::Point {
                chart,
                center,
                precision,
                y,
                ..
            } => {
                let y = match y {
                    None => "0".to_string(),
                    Some(YApprox { valuation: 0, residue }) => residue.to_string(),
                    Some(YApprox { valuation, residue }) => format!("p^{valuation}*{residue}"),
                };
                let prec = match precision {
                    Some(k) => format!(" mod p^{k}"),
                    None => String::new(),
                };
                match chart {
                    Chart::Affine => write!(f, "({center}, {y}){prec}"),
                    Chart::Inverted => write!(f, "(1/u, z) with u = {center}{prec}, z = {y}"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolubilityVerdict {
    pub status: SolubilityStatus,
    pub witness: Option<Witness>,
    pub depth_used: u32,
    pub max_depth: u32,
    /// Residue classes closed during the search; for `Insoluble` this is the
    /// size of the exhaustion certificate.
    pub classes_closed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Prediction {
    PredictedInsoluble,
    NoPrediction,
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prediction::PredictedInsoluble => "PREDICTED_INSOLUBLE",
            Prediction::NoPrediction => "NO_PREDICTION",
        })
    }
}

/// `v_p(disc f) + 2g + 4`.
pub fn default_max_depth(curve: &HyperellipticTwist, p: Prime) -> u32 {
    arith::valuation(curve.discriminant(), p.get()).unwrap_or(0) + 2 * curve.genus() + 4
}

/// The degree-`(2g+2)` reversal `u^{2g+2} f(1/u)`.
pub fn inverted_polynomial(curve: &HyperellipticTwist) -> IntPolynomial {
    curve.f().reversed(2 * curve.genus() as usize + 2)
}

fn chart_polynomial(curve: &HyperellipticTwist, chart: Chart) -> IntPolynomial {
    match chart {
        Chart::Affine => curve.f().clone(),
        Chart::Inverted => inverted_polynomial(curve),
    }
}

/// Square class of a nonzero p-adic number up to the data that matters for
/// p odd: parity of the valuation and quadratic character of the unit part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SquareClass {
    odd_valuation: bool,
    unit_is_square: bool,
}

impl SquareClass {
    fn of(n: &BigInt, p: u64) -> Self {
        let (v, u) = arith::split_valuation(n, p);
        SquareClass {
            odd_valuation: v % 2 == 1,
            unit_is_square: arith::euler_criterion(arith::residue(&u, p), p) == Some(true),
        }
    }

    fn shifted(self, e: u32) -> Self {
        SquareClass {
            odd_valuation: self.odd_valuation ^ (e % 2 == 1),
            ..self
        }
    }

    /// Is `self · w` a square for a unit `w ≡ w_residue (mod p)`?
    fn admits_unit(self, w_residue: u64, p: u64) -> bool {
        !self.odd_valuation
            && (arith::euler_criterion(w_residue, p) == Some(true)) == self.unit_is_square
    }
}

/// `x = base + p^k t` and `F(x) = p^content · g(t)`.
#[derive(Debug, Clone)]
struct Frame {
    base: BigInt,
    k: u32,
    content: u32,
}

struct Search<'a> {
    curve: &'a HyperellipticTwist,
    p: u64,
    pb: BigInt,
    max_depth: u32,
    depth_used: u32,
    classes_closed: u64,
    hit_cap: bool,
}

impl Search<'_> {
    fn chart(&mut self, chart: Chart) -> Result<Option<Witness>> {
        let f = chart_polynomial(self.curve, chart);
        let content = f.content_valuation(self.p).expect("nonzero");
        let g = f
            .div_exact(&self.pb.pow(content))
            .expect("content divides");
        let class = SquareClass::of(self.curve.d(), self.p).shifted(content);
        let frame = Frame {
            base: BigInt::zero(),
            k: 0,
            content,
        };
        let residues: Vec<u64> = match chart {
            Chart::Affine => (0..self.p).collect(),
            Chart::Inverted => vec![0],
        };
        self.explore(chart, &f, &g, class, &frame, &residues, 0)
    }

    #[allow(clippy::too_many_arguments)]
    fn explore(
        &mut self,
        chart: Chart,
        f: &IntPolynomial,
        g: &IntPolynomial,
        class: SquareClass,
        frame: &Frame,
        residues: &[u64],
        depth: u32,
    ) -> Result<Option<Witness>> {
        let p = self.p;
        let g_bar = g.reduce_unchecked(p);
        let dg_bar = g_bar.derivative();
        for &r in residues {
            let value = g_bar.eval(r);
            let center = &frame.base + self.pb.pow(frame.k) * BigInt::from(r);
            if value != 0 {
                self.classes_closed += 1;
                if class.admits_unit(value, p) {
                    return self.square_witness(chart, f, center, frame.k + 1).map(Some);
                }
                continue;
            }
            if dg_bar.eval(r) != 0 {
                self.classes_closed += 1;
                let t = self.refine_root(g, r, frame)?;
                let center = &frame.base + self.pb.pow(frame.k) * t;
                return self.root_witness(chart, f, center).map(Some);
            }
            if depth + 1 > self.max_depth {
                self.hit_cap = true;
                continue;
            }
            let zoomed = g.compose_affine(&BigInt::from(r), &self.pb);
            let e = zoomed.content_valuation(p).expect("nonzero");
            let next_g = zoomed.div_exact(&self.pb.pow(e)).expect("content divides");
            let next = Frame {
                base: center,
                k: frame.k + 1,
                content: frame.content + e,
            };
            self.depth_used = self.depth_used.max(depth + 1);
            let all: Vec<u64> = (0..p).collect();
            if let Some(w) =
                self.explore(chart, f, &next_g, class.shifted(e), &next, &all, depth + 1)?
            {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    /// Newton steps from `t ≡ r` until the root is visible to Hensel's
    /// criterion in the chart coordinate: `v(g(t)) > content - 2k`.
    fn refine_root(&self, g: &IntPolynomial, r: u64, frame: &Frame) -> Result<BigInt> {
        let target = (frame.content as i64 - 2 * frame.k as i64).max(0) as u32 + 1;
        let modulus = self.pb.pow(target + 1);
        let dg = g.derivative();
        let mut t = BigInt::from(r);
        let inv = dg
            .eval(&t)
            .modinv(&modulus)
            .ok_or_else(|| Error::Invariant("derivative is not a unit".into()))?;
        for _ in 0..=target {
            let gt = g.eval(&t);
            match arith::valuation(&gt, self.p) {
                None => return Ok(t),
                Some(v) if v >= target => return Ok(t),
                _ => {}
            }
            t = (t - gt * &inv).mod_floor(&modulus);
        }
        Err(Error::Invariant("Hensel refinement did not converge".into()))
    }

    fn square_witness(
        &self,
        chart: Chart,
        f: &IntPolynomial,
        center: BigInt,
        precision: u32,
    ) -> Result<Witness> {
        let p = self.p;
        let value = f.eval(&center);
        let (v, unit) = arith::split_valuation(&value, p);
        let (vd, ud) = arith::split_valuation(self.curve.d(), p);
        let ratio = arith::mul_mod(
            arith::residue(&unit, p),
            arith::inv_mod(arith::residue(&ud, p), p),
            p,
        );
        let residue = arith::sqrt_mod(ratio, p)
            .ok_or_else(|| Error::Invariant("square class mismatch".into()))?;
        if chart == Chart::Inverted && center.is_zero() {
            return Ok(Witness::Infinity { odd_degree: false });
        }
        Ok(Witness::Point {
            chart,
            center,
            precision: Some(precision),
            y: Some(YApprox {
                valuation: (v as i64 - vd as i64) / 2,
                residue,
            }),
            certificate: Certificate::Square { value_valuation: v },
        })
    }

    fn root_witness(&self, chart: Chart, f: &IntPolynomial, center: BigInt) -> Result<Witness> {
        let p = self.p;
        let value_valuation = arith::valuation(&f.eval(&center), p);
        let derivative_valuation = arith::valuation(&f.derivative().eval(&center), p)
            .ok_or_else(|| Error::Invariant("root is not simple".into()))?;
        Ok(Witness::Point {
            chart,
            center,
            precision: value_valuation.map(|v| v - derivative_valuation),
            y: None,
            certificate: Certificate::SimpleRoot {
                value_valuation,
                derivative_valuation,
            },
        })
    }
}

/// Decides whether the curve has a Q_p-point.
///
/// `max_depth` caps the number of nested zooms per residue class; `None`
/// uses [`default_max_depth`]. Hitting the cap without finding a point
/// yields `Unknown`.
pub fn is_locally_soluble(
    curve: &HyperellipticTwist,
    p: Prime,
    max_depth: Option<u32>,
) -> Result<SolubilityVerdict> {
    if !p.is_odd() {
        return Err(Error::ExcludedPrime);
    }
    let max_depth = match max_depth {
        Some(0) => return Err(Error::InvalidDepth),
        Some(m) => m,
        None => default_max_depth(curve, p),
    };
    let mut verdict = SolubilityVerdict {
        status: SolubilityStatus::Insoluble,
        witness: None,
        depth_used: 0,
        max_depth,
        classes_closed: 0,
    };
    if !curve.has_even_degree() {
        verdict.status = SolubilityStatus::Soluble;
        verdict.witness = Some(Witness::Infinity { odd_degree: true });
        return Ok(verdict);
    }
    let mut search = Search {
        curve,
        p: p.get(),
        pb: BigInt::from(p.get()),
        max_depth,
        depth_used: 0,
        classes_closed: 0,
        hit_cap: false,
    };
    let mut witness = search.chart(Chart::Affine)?;
    if witness.is_none() {
        witness = search.chart(Chart::Inverted)?;
    }
    verdict.depth_used = search.depth_used;
    verdict.classes_closed = search.classes_closed;
    match witness {
        Some(w) => {
            verify_witness(curve, p, &w).map_err(Error::Invariant)?;
            verdict.status = SolubilityStatus::Soluble;
            verdict.witness = Some(w);
        }
        None if search.hit_cap => verdict.status = SolubilityStatus::Unknown,
        None => {}
    }
    Ok(verdict)
}

/// Re-checks a witness directly against `d` and `f`, independently of the
/// search that produced it.
pub fn verify_witness(
    curve: &HyperellipticTwist,
    p: Prime,
    witness: &Witness,
) -> std::result::Result<(), String> {
    let p = p.get();
    let d = curve.d();
    match witness {
        Witness::Infinity { odd_degree: true } => {
            if curve.has_even_degree() {
                return Err("odd-degree infinity witness on an even-degree curve".into());
            }
            Ok(())
        }
        Witness::Infinity { odd_degree: false } => {
            if !curve.has_even_degree() {
                return Err("even-degree infinity witness on an odd-degree curve".into());
            }
            let lc = curve.f().leading().expect("nonzero");
            let (v, u) = arith::split_valuation(&(d * lc), p);
            if v % 2 == 0 && arith::euler_criterion(arith::residue(&u, p), p) == Some(true) {
                Ok(())
            } else {
                Err("lc(f)/d is not a square in Q_p".into())
            }
        }
        Witness::Point {
            chart,
            center,
            precision,
            certificate,
            ..
        } => {
            let f = chart_polynomial(curve, *chart);
            if *chart == Chart::Inverted && arith::residue(center, p) != 0 {
                return Err("inverted-chart centre must lie in pZ_p".into());
            }
            if *chart == Chart::Inverted && *precision == Some(0) {
                return Err("inverted-chart class must be inside pZ_p".into());
            }
            match certificate {
                Certificate::Square { value_valuation } => {
                    let value = d * f.eval(center);
                    if value.is_zero() {
                        return Err("square certificate at a root".into());
                    }
                    let (v, u) = arith::split_valuation(&value, p);
                    let fv = arith::valuation(&f.eval(center), p).expect("nonzero");
                    if fv != *value_valuation {
                        return Err("recorded valuation does not match".into());
                    }
                    if v % 2 != 0 {
                        return Err(format!("d*F has odd valuation {v}"));
                    }
                    if arith::euler_criterion(arith::residue(&u, p), p) != Some(true) {
                        return Err("unit part of d*F is a non-residue".into());
                    }
                    let precision = precision.ok_or("square certificate without precision")?;
                    let step = BigInt::from(p).pow(precision);
                    let shifted = f.compose_affine(center, &step).scale(d);
                    let drift = shifted.sub(&IntPolynomial::new(vec![value]));
                    match drift.content_valuation(p) {
                        Some(w) if w <= v => {
                            Err(format!("class too coarse: drift valuation {w} <= {v}"))
                        }
                        _ => Ok(()),
                    }
                }
                Certificate::SimpleRoot { .. } => {
                    let value = f.eval(center);
                    let dv = arith::valuation(&f.derivative().eval(center), p)
                        .ok_or("derivative vanishes at centre")?;
                    match arith::valuation(&value, p) {
                        None => Ok(()),
                        Some(v) if v > 2 * dv => Ok(()),
                        Some(v) => Err(format!("Hensel condition fails: {v} <= 2*{dv}")),
                    }
                }
            }
        }
    }
}

/// The one-sided prediction: an even-degree irreducible `f`, `p | d`, and
/// good reduction at `p` with no F_p-rational branch point force
/// `C_d(Q_p) = ∅`.
pub fn predict_insolubility(
    curve: &HyperellipticTwist,
    p: Prime,
    irreducibility: Irreducibility,
) -> Prediction {
    let predicted = p.is_odd()
        && curve.has_even_degree()
        && irreducibility.holds()
        && arith::residue(curve.d(), p.get()) == 0
        && curve.classify_prime(p).kind == PrimeKind::GoodNoRoot;
    if predicted {
        Prediction::PredictedInsoluble
    } else {
        Prediction::NoPrediction
    }
}

/// Finds a point on a twist with good reduction at `p`, by lifting a smooth
/// F_p-point. Requires `p ∤ d` and `p > 4g^2`, which makes a smooth F_p-point
/// exist by the Hasse-Weil bound.
pub fn good_reduction_soluble(curve: &HyperellipticTwist, p: Prime) -> Result<SolubilityVerdict> {
    let g = curve.genus() as u64;
    let pv = p.get();
    if !p.is_odd() {
        return Err(Error::ExcludedPrime);
    }
    if !curve.classify_prime(p).kind.is_good() {
        return Err(Error::PreconditionFailed(format!("p = {pv} is not a good prime")));
    }
    if arith::residue(curve.d(), pv) == 0 {
        return Err(Error::PreconditionFailed(format!("p = {pv} divides d")));
    }
    if pv <= 4 * g * g {
        return Err(Error::PreconditionFailed(format!("p = {pv} <= 4g^2")));
    }
    let f = curve.f();
    let f_bar = f.reduce_unchecked(pv);
    let d_bar = arith::residue(curve.d(), pv);
    let mut verdict = SolubilityVerdict {
        status: SolubilityStatus::Soluble,
        witness: None,
        depth_used: 0,
        max_depth: 0,
        classes_closed: 0,
    };
    let search = Search {
        curve,
        p: pv,
        pb: BigInt::from(pv),
        max_depth: 0,
        depth_used: 0,
        classes_closed: 0,
        hit_cap: false,
    };
    let witness = if let Some(x) = (0..pv).find(|&x| f_bar.eval(x) == 0) {
        Some(search.root_witness(Chart::Affine, f, x.into())?)
    } else if let Some(x) = (0..pv)
        .find(|&x| arith::euler_criterion(arith::mul_mod(d_bar, f_bar.eval(x), pv), pv) == Some(true))
    {
        Some(search.square_witness(Chart::Affine, f, x.into(), 1)?)
    } else if !curve.has_even_degree() {
        Some(Witness::Infinity { odd_degree: true })
    } else if f_bar.deg().unwrap_or(0) % 2 == 1 {
        let inv = inverted_polynomial(curve);
        Some(search.root_witness(Chart::Inverted, &inv, BigInt::zero())?)
    } else {
        let lc = arith::residue(f.leading().expect("nonzero"), pv);
        (arith::euler_criterion(arith::mul_mod(lc, d_bar, pv), pv) == Some(true))
            .then_some(Witness::Infinity { odd_degree: false })
    };
    let witness = witness.ok_or_else(|| {
        Error::Invariant(format!("no smooth F_{pv}-point despite p > 4g^2"))
    })?;
    verify_witness(curve, p, &witness).map_err(Error::Invariant)?;
    verdict.witness = Some(witness);
    verdict.classes_closed = 1;
    Ok(verdict)
}

impl SolubilityVerdict {
    pub fn is_soluble(&self) -> bool {
        self.status == SolubilityStatus::Soluble
    }
}
