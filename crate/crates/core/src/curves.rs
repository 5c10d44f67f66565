//! Hyperelliptic curves `d y^2 = f(x)` over Q and their reduction at primes.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{self, Prime};
use crate::error::{Error, Result};
use crate::poly::{FactorSearch, FactorShape, IntPolynomial};

/// Primes searched for a mod-p irreducibility certificate.
pub const IRREDUCIBILITY_SEARCH_BOUND: u64 = 1000;
/// Candidate factors tried by the fallback factor search.
pub const FACTOR_SEARCH_BUDGET: u64 = 200_000;

/// The curve `d y^2 = f(x)` with `d` squarefree. `d = 1` is the untwisted
/// curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticTwist {
    f: IntPolynomial,
    d: BigInt,
    genus: u32,
    disc: BigInt,
}

impl HyperellipticTwist {
    /// `y^2 = f(x)`.
    pub fn new(f: IntPolynomial) -> Result<Self> {
        Self::with_twist(f, BigInt::one())
    }

    /// `d y^2 = f(x)`; `d` is replaced by its squarefree part.
    pub fn with_twist(f: IntPolynomial, d: BigInt) -> Result<Self> {
        let n = f.deg().unwrap_or(0);
        if n < 3 {
            return Err(Error::GenusTooSmall);
        }
        let disc = f.discriminant()?;
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let d = arith::squarefree_part(&d)?;
        Ok(HyperellipticTwist {
            f,
            d,
            genus: ((n - 1) / 2) as u32,
            disc,
        })
    }

    pub fn f(&self) -> &IntPolynomial {
        &self.f
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn degree(&self) -> usize {
        self.f.deg().expect("deg f >= 3")
    }

    pub fn has_even_degree(&self) -> bool {
        self.degree().is_multiple_of(2)
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// The twist by `d0`, i.e. `(d · d0) y^2 = f(x)` reduced mod squares.
    pub fn twist(&self, d0: &BigInt) -> Result<Self> {
        if d0.is_zero() {
            return Err(Error::ZeroTwist);
        }
        Ok(HyperellipticTwist {
            d: arith::squarefree_part(&(&self.d * d0))?,
            ..self.clone()
        })
    }

    /// The untwisted curve `y^2 = f(x)`.
    pub fn untwisted(&self) -> Self {
        HyperellipticTwist {
            d: BigInt::one(),
            ..self.clone()
        }
    }

    /// Applies `x = (au + b)/(cu + d)`, `y = e z/(cu + d)^{g+1}`, returning
    /// the equation in `(u, z)`. The twist parameter is unchanged.
    pub fn transform(&self, m: &MobiusTransform) -> Result<Self> {
        let det = m.determinant();
        if det.is_zero() || m.e.is_zero() {
            return Err(Error::SingularTransform);
        }
        let n = 2 * self.genus as usize + 2;
        let num = IntPolynomial::new(vec![m.b.clone(), m.a.clone()]);
        let den = IntPolynomial::new(vec![m.d.clone(), m.c.clone()]);
        let mut acc = IntPolynomial::zero();
        for (i, c) in self.f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = num.pow(i as u32).mul(&den.pow((n - i) as u32));
            acc = acc.add(&term.scale(c));
        }
        // divide by e^2 = (en/ed)^2
        let scaled = acc.scale(&(m.e.denom() * m.e.denom()));
        let en2 = m.e.numer() * m.e.numer();
        let f_new = scaled.div_exact(&en2).ok_or(Error::NonIntegralTransform)?;
        let out = Self::with_twist(f_new, self.d.clone())?;
        if out.genus != self.genus {
            return Err(Error::Invariant("transform changed the genus".into()));
        }
        Ok(out)
    }

    /// `lc(f) · disc(f) mod p == 0`: the only primes that can be bad.
    pub fn is_bad_candidate(&self, p: u64) -> bool {
        let lc = self.f.leading().expect("nonzero");
        arith::residue(lc, p) == 0 || arith::residue(&self.disc, p) == 0
    }

    pub fn classify_prime(&self, p: Prime) -> PrimeClassification {
        let p = p.get();
        if p == 2 {
            return PrimeClassification::excluded();
        }
        let reduced = self.f.reduce_unchecked(p);
        let full = 2 * self.genus as usize + 1;
        if self.is_bad_candidate(p) {
            let deg = reduced.deg().unwrap_or(0);
            if reduced.is_zero() || deg < full || !reduced.is_squarefree() {
                return PrimeClassification {
                    p,
                    kind: PrimeKind::Bad,
                    reduced_degree: reduced.deg(),
                    root_count: None,
                    shape: None,
                };
            }
        }
        let shape = reduced
            .factorization_shape()
            .expect("good reduction is squarefree");
        let root_count = shape.linear_factors();
        let reduced_degree = reduced.deg().expect("nonzero");
        let kind = if root_count == 0 && reduced_degree.is_multiple_of(2) {
            PrimeKind::GoodNoRoot
        } else {
            PrimeKind::GoodWithRoot
        };
        PrimeClassification {
            p,
            kind,
            reduced_degree: Some(reduced_degree),
            root_count: Some(root_count),
            shape: Some(shape),
        }
    }

    /// The F_p-rational branch points of `x`: roots of `f mod p`, plus the
    /// point at infinity when `f mod p` has odd degree.
    pub fn ramification_points_mod_p(&self, p: Prime) -> Result<Vec<RamificationPoint>> {
        let class = self.classify_prime(p);
        match class.kind {
            PrimeKind::Excluded => return Err(Error::ExcludedPrime),
            PrimeKind::Bad => return Err(Error::BadPrime(p.get())),
            _ => {}
        }
        let reduced = self.f.reduce_unchecked(p.get());
        let mut points: Vec<_> = reduced
            .roots()?
            .into_iter()
            .map(RamificationPoint::Finite)
            .collect();
        if reduced.deg().unwrap_or(0) % 2 == 1 {
            points.push(RamificationPoint::Infinity);
        }
        Ok(points)
    }

    /// Decides irreducibility of `f` over Q where it can.
    ///
    /// First looks for a prime `p ≤ 1000` not dividing `lc(f)` with `f mod p`
    /// irreducible. Polynomials such as `x^4 + 1` split modulo every prime,
    /// so this falls back to a bounded search for an integer factor.
    pub fn certify_irreducible(&self) -> Irreducibility {
        let n = self.degree();
        let lc = self.f.leading().expect("nonzero");
        let by_prime = (3..=IRREDUCIBILITY_SEARCH_BOUND)
            .filter(|&p| arith::is_prime(p) && arith::residue(lc, p) != 0)
            .find(|&p| {
                let reduced = self.f.reduce_unchecked(p);
                reduced.is_squarefree()
                    && reduced
                        .factorization_shape()
                        .is_ok_and(|s| s.degrees() == [n as u32])
            });
        if let Some(prime) = by_prime {
            return Irreducibility::Certified { prime };
        }
        match self.f.find_factor(FACTOR_SEARCH_BUDGET) {
            FactorSearch::NoFactor => Irreducibility::Proven,
            FactorSearch::Found(g) => Irreducibility::Reducible {
                factor_degree: g.deg().expect("nonconstant"),
            },
            FactorSearch::GaveUp => Irreducibility::Unknown,
        }
    }

    /// Odd primes dividing `lc(f) · disc(f)`, with each one's classification.
    /// Also returns any cofactor the factoriser could not split.
    pub fn bad_prime_candidates(&self) -> (Vec<PrimeClassification>, Vec<BigUint>) {
        let lc = self.f.leading().expect("nonzero");
        let n: BigUint = (lc * &self.disc).abs().to_biguint().expect("nonnegative");
        let (factors, rest) = num_prime::nt_funcs::factors(n, None);
        let mut unresolved = rest.unwrap_or_default();
        let mut classes = Vec::new();
        for q in factors.into_keys() {
            match q.to_u64() {
                Some(2) => {}
                Some(q) => classes.push(self.classify_prime(Prime::new_unchecked(q))),
                // beyond word-sized primes; reported rather than classified
                None => unresolved.push(q),
            }
        }
        (classes, unresolved)
    }
}

impl Serialize for HyperellipticTwist {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("HyperellipticTwist", 3)?;
        s.serialize_field("f", &self.f)?;
        s.serialize_field("d", &self.d.to_string())?;
        s.serialize_field("genus", &self.genus)?;
        s.end()
    }
}

impl fmt::Display for HyperellipticTwist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d.is_one() {
            write!(f, "y^2 = {}", self.f)
        } else {
            write!(f, "{}*y^2 = {}", self.d, self.f)
        }
    }
}

/// `x = (au + b)/(cu + d)`, `y = e z/(cu + d)^{g+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTransform {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigRational,
}

impl MobiusTransform {
    pub fn new(a: i64, b: i64, c: i64, d: i64, e: BigRational) -> Result<Self> {
        let m = MobiusTransform {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
            e,
        };
        if m.determinant().is_zero() || m.e.is_zero() {
            return Err(Error::SingularTransform);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1, BigRational::one()).expect("nonsingular")
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// The transform undoing `self` on a genus-`g` equation: the adjugate
    /// matrix with `e' = det^{g+1}/e`.
    pub fn inverse(&self, genus: u32) -> Self {
        let det = BigRational::from_integer(self.determinant());
        let e = num_traits::pow(det, genus as usize + 1) / &self.e;
        MobiusTransform {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
            e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PrimeKind {
    Excluded,
    Bad,
    GoodWithRoot,
    GoodNoRoot,
}

impl PrimeKind {
    pub fn is_good(self) -> bool {
        matches!(self, PrimeKind::GoodWithRoot | PrimeKind::GoodNoRoot)
    }
}

impl fmt::Display for PrimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeKind::Excluded => "EXCLUDED",
            PrimeKind::Bad => "BAD",
            PrimeKind::GoodWithRoot => "GOOD_WITH_ROOT",
            PrimeKind::GoodNoRoot => "GOOD_NO_ROOT",
        })
    }
}

/// Reduction data of `f` at one prime.
///
/// `GoodNoRoot` means good reduction with no F_p-rational ramification
/// point: `f mod p` has no root and even degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeClassification {
    pub p: u64,
    pub kind: PrimeKind,
    pub reduced_degree: Option<usize>,
    pub root_count: Option<usize>,
    pub shape: Option<FactorShape>,
}

impl PrimeClassification {
    fn excluded() -> Self {
        PrimeClassification {
            p: 2,
            kind: PrimeKind::Excluded,
            reduced_degree: None,
            root_count: None,
            shape: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RamificationPoint {
    Finite(u64),
    Infinity,
}

impl Serialize for RamificationPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RamificationPoint::Finite(x) => serializer.collect_str(x),
            RamificationPoint::Infinity => serializer.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    /// `f mod prime` is irreducible of full degree.
    Certified { prime: u64 },
    /// The exhaustive factor search found no factor.
    Proven,
    /// Taken on trust from the caller.
    Asserted,
    Reducible { factor_degree: usize },
    Unknown,
}

impl Irreducibility {
    /// Whether irreducibility has been decided or asserted either way.
    pub fn is_known(self) -> bool {
        !matches!(self, Irreducibility::Unknown)
    }

    /// Whether `f` may be treated as irreducible.
    pub fn holds(self) -> bool {
        matches!(
            self,
            Irreducibility::Certified { .. } | Irreducibility::Proven | Irreducibility::Asserted
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            Irreducibility::Certified { .. } | Irreducibility::Proven => "CERTIFIED",
            Irreducibility::Asserted => "ASSERTED",
            Irreducibility::Reducible { .. } => "REDUCIBLE",
            Irreducibility::Unknown => "UNKNOWN",
        }
    }

    /// Human-readable evidence behind the label.
    pub fn evidence(self) -> Option<String> {
        match self {
            Irreducibility::Certified { prime } => Some(format!("irreducible mod {prime}")),
            Irreducibility::Proven => Some("no integer factor by Kronecker's method".into()),
            Irreducibility::Reducible { factor_degree } => {
                Some(format!("has a factor of degree {factor_degree}"))
            }
            Irreducibility::Asserted | Irreducibility::Unknown => None,
        }
    }

    /// Upgrades `Unknown` to `Asserted` when the caller vouches for it.
    pub fn or_asserted(self, asserted: bool) -> Self {
        match self {
            Irreducibility::Unknown if asserted => Irreducibility::Asserted,
            other => other,
        }
    }
}

impl Serialize for Irreducibility {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}
