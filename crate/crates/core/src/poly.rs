//! Exact univariate polynomials over Z and over prime fields F_p.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, add_mod, inv_mod, is_prime, mul_mod, sub_mod};
use crate::error::{Error, Result};

/// Degree of a polynomial. The zero polynomial has degree `MinusInfinity`,
/// which orders below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(n) => Some(n),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => f.write_str("-inf"),
            Degree::Finite(n) => write!(f, "{n}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Integer polynomials
// ---------------------------------------------------------------------------

/// Polynomial with arbitrary-precision integer coefficients, constant term
/// first. Trailing zeros are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::new(coeffs.into_iter().map(Into::into).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// The monomial `c x^n`.
    pub fn monomial(c: impl Into<BigInt>, n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = c.into();
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree as a plain integer; `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Divides every coefficient by `k`, failing if any division is inexact.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self::new(out))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::from_coeffs([1]);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `f(a + b t)` as a polynomial in `t`.
    pub fn compose_affine(&self, a: &BigInt, b: &BigInt) -> Self {
        let lin = Self::new(vec![a.clone(), b.clone()]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul(&lin).add(&Self::new(vec![c.clone()]))
        })
    }

    /// `t^n f(1/t)`; requires `n ≥ deg f`.
    pub fn reversed(&self, n: usize) -> Self {
        assert!(self.deg().is_none_or(|d| d <= n));
        Self::new((0..=n).map(|i| self.coeff(n - i)).collect())
    }

    /// Minimum p-adic valuation of the coefficients; `None` for zero.
    pub fn content_valuation(&self, p: u64) -> Option<u32> {
        self.coeffs
            .iter()
            .filter_map(|c| arith::valuation(c, p))
            .min()
    }

    /// Resultant `Res(self, other)` as the determinant of the Sylvester
    /// matrix, evaluated by fraction-free (Bareiss) elimination.
    pub fn resultant(&self, other: &Self) -> BigInt {
        let (m, n) = match (self.deg(), other.deg()) {
            (Some(m), Some(n)) => (m, n),
            _ => return BigInt::zero(),
        };
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut rows = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                rows[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                rows[n + i][i + j] = c.clone();
            }
        }
        bareiss_determinant(rows)
    }

    /// `disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<BigInt> {
        let n = match self.deg() {
            Some(n) if n >= 2 => n,
            _ => return Err(Error::DegreeTooSmall),
        };
        let res = self.resultant(&self.derivative());
        let lc = self.leading().expect("nonzero");
        let (q, r) = res.div_rem(lc);
        debug_assert!(r.is_zero(), "lc(f) divides Res(f, f')");
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -q } else { q })
    }

    pub fn reduce_mod_p(&self, p: u64) -> Result<FpPolynomial> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(self.reduce_unchecked(p))
    }

    pub(crate) fn reduce_unchecked(&self, p: u64) -> FpPolynomial {
        FpPolynomial::from_raw(p, self.coeffs.iter().map(|c| arith::residue(c, p)).collect())
    }

    /// Coefficients as decimal strings, constant term first.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

/// Result of a bounded search for a nontrivial factor over Z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorSearch {
    Found(IntPolynomial),
    NoFactor,
    GaveUp,
}

const KRONECKER_RADIUS: i64 = 12;
const KRONECKER_VALUE_LIMIT: u64 = 1 << 32;

impl IntPolynomial {
    /// Gcd of the coefficients, with the sign of the leading coefficient.
    pub fn content(&self) -> BigInt {
        let g = self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        match self.leading() {
            Some(lc) if lc.is_negative() => -g,
            _ => g,
        }
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.div_exact(&self.content()).expect("content divides")
    }

    /// `self / g` in Z[x] when `g` divides `self` there.
    pub fn div_poly_exact(&self, g: &Self) -> Option<Self> {
        let dg = g.deg()?;
        let lg = g.leading()?;
        let mut rem = self.clone();
        let mut quot = vec![BigInt::zero(); self.coeffs.len().saturating_sub(dg).max(1)];
        while let Some(dr) = rem.deg().filter(|&dr| dr >= dg) {
            let (q, r) = rem.leading().expect("nonzero").div_rem(lg);
            if !r.is_zero() {
                return None;
            }
            rem = rem.sub(&g.mul(&Self::monomial(q.clone(), dr - dg)));
            quot[dr - dg] = q;
        }
        rem.is_zero().then(|| Self::new(quot))
    }

    /// Kronecker's method: any factor `g` of degree `k` is pinned down by
    /// its values at `k + 1` integers, and each `g(a)` divides `f(a)`.
    /// Tries every such interpolant for `k ≤ deg/2`, stopping early once
    /// more than `budget` candidates would be needed.
    pub fn find_factor(&self, budget: u64) -> FactorSearch {
        let n = match self.deg() {
            Some(n) if n >= 2 => n,
            _ => return FactorSearch::NoFactor,
        };
        let f = self.primitive_part();
        let mut points: Vec<(BigInt, BigInt, Vec<i64>)> = Vec::new();
        for a in std::iter::once(0).chain((1..=KRONECKER_RADIUS).flat_map(|a| [a, -a])) {
            let a = BigInt::from(a);
            let v = f.eval(&a);
            if v.is_zero() {
                return FactorSearch::Found(Self::new(vec![-a, BigInt::one()]));
            }
            if let Some(m) = v.magnitude().to_u64().filter(|&m| m <= KRONECKER_VALUE_LIMIT) {
                points.push((a, v, positive_divisors(m)));
            }
        }
        points.sort_by_key(|(_, _, divs)| divs.len());
        let mut spent = 0u64;
        for k in 1..=n / 2 {
            if points.len() < k + 1 {
                return FactorSearch::GaveUp;
            }
            let chosen = &points[..=k];
            // the first value is taken positive: g and -g are both factors
            let candidates = chosen.iter().enumerate().try_fold(1u64, |acc, (i, (_, _, d))| {
                acc.checked_mul(d.len() as u64 * if i == 0 { 1 } else { 2 })
            });
            spent = match candidates.and_then(|c| spent.checked_add(c)) {
                Some(total) if total <= budget => total,
                _ => return FactorSearch::GaveUp,
            };
            if let Some(g) = kronecker_degree(&f, chosen) {
                return FactorSearch::Found(g);
            }
        }
        FactorSearch::NoFactor
    }
}

fn positive_divisors(m: u64) -> Vec<i64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= m {
        if m.is_multiple_of(i) {
            small.push(i as i64);
            if i * i != m {
                large.push((m / i) as i64);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn kronecker_degree(f: &IntPolynomial, chosen: &[(BigInt, BigInt, Vec<i64>)]) -> Option<IntPolynomial> {
    let xs: Vec<&BigInt> = chosen.iter().map(|(a, _, _)| a).collect();
    // Lagrange basis scaled to integers: L_i = basis[i] / denoms[i]
    let mut basis = Vec::with_capacity(xs.len());
    let mut denoms = Vec::with_capacity(xs.len());
    for (i, xi) in xs.iter().enumerate() {
        let mut num = IntPolynomial::from_coeffs([1]);
        let mut den = BigInt::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                num = num.mul(&IntPolynomial::new(vec![-(*xj).clone(), BigInt::one()]));
                den *= *xi - *xj;
            }
        }
        basis.push(num);
        denoms.push(den);
    }
    let common = denoms.iter().fold(BigInt::one(), |l, d| l.lcm(d));
    let scaled: Vec<IntPolynomial> = basis
        .iter()
        .zip(&denoms)
        .map(|(b, d)| b.scale(&(&common / d)))
        .collect();
    let options: Vec<Vec<BigInt>> = chosen
        .iter()
        .enumerate()
        .map(|(i, (_, _, divs))| {
            let signs: &[i64] = if i == 0 { &[1] } else { &[1, -1] };
            divs.iter()
                .flat_map(|&d| signs.iter().map(move |&s| BigInt::from(s * d)))
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; options.len()];
    loop {
        let combined = scaled
            .iter()
            .zip(&idx)
            .zip(&options)
            .fold(IntPolynomial::zero(), |acc, ((l, &j), opts)| acc.add(&l.scale(&opts[j])));
        if let Some(g) = combined.div_exact(&common) {
            if g.deg().is_some_and(|d| d >= 1) && f.div_poly_exact(&g).is_some() {
                return Some(g);
            }
        }
        // advance the odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub(crate) fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = abs.is_one();
            match i {
                0 => write!(f, "{abs}")?,
                1 if unit => f.write_str("x")?,
                1 => write!(f, "{abs}*x")?,
                _ if unit => write!(f, "x^{i}")?,
                _ => write!(f, "{abs}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Accepts either a comma-separated coefficient list, constant first
/// (`"1,0,0,0,1"`), or an expression in `x` with integer coefficients
/// (`"x^4 + 2x^2 + 1"`, `"3*x^2-x"`).
impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        if s.contains('x') {
            parse_expression(&s)
        } else {
            s.split(',')
                .map(|t| {
                    BigInt::from_str(t)
                        .map_err(|_| Error::Parse(format!("bad coefficient `{t}`")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Self::new)
        }
    }
}

fn parse_expression(s: &str) -> Result<IntPolynomial> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let mut coeffs: Vec<BigInt> = Vec::new();
    let digits = |pos: &mut usize| -> Option<&str> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start != *pos).then(|| &s[start..*pos])
    };
    let err = |msg: &str, at: usize| Error::Parse(format!("{msg} at offset {at} in `{s}`"));
    while pos < bytes.len() {
        let mut negative = false;
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                negative = true;
                pos += 1
            }
            _ if pos > 0 => return Err(err("expected `+` or `-`", pos)),
            _ => {}
        }
        let coef = digits(&mut pos).map(|d| BigInt::from_str(d).expect("digits"));
        let mut exponent = 0usize;
        if pos < bytes.len() && bytes[pos] == b'*' {
            if coef.is_none() {
                return Err(err("dangling `*`", pos));
            }
            pos += 1;
            if pos >= bytes.len() || bytes[pos] != b'x' {
                return Err(err("expected `x` after `*`", pos));
            }
        }
        if pos < bytes.len() && bytes[pos] == b'x' {
            pos += 1;
            exponent = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                exponent = digits(&mut pos)
                    .ok_or_else(|| err("expected exponent", pos))?
                    .parse()
                    .map_err(|_| err("exponent too large", pos))?;
                if exponent > 10_000 {
                    return Err(err("exponent too large", pos));
                }
            }
        } else if coef.is_none() {
            return Err(err("expected a term", pos));
        }
        let mut c = coef.unwrap_or_else(BigInt::one);
        if negative {
            c = -c;
        }
        if coeffs.len() <= exponent {
            coeffs.resize(exponent + 1, BigInt::zero());
        }
        coeffs[exponent] += c;
    }
    Ok(IntPolynomial::new(coeffs))
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(ToString::to_string))
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(deserializer)?;
        raw.iter()
            .map(|t| BigInt::from_str(t).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_p
// ---------------------------------------------------------------------------

/// Polynomial over the prime field F_p (p odd), constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPolynomial {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPolynomial {
    /// Reduces `coeffs` into F_p. Fails unless `p` is an odd prime.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Self::from_raw(p, coeffs.into_iter().map(|c| c % p).collect()))
    }

    pub fn from_signed(p: u64, coeffs: &[i64]) -> Result<Self> {
        Self::new(
            p,
            coeffs
                .iter()
                .map(|&c| c.rem_euclid(p as i64) as u64)
                .collect(),
        )
    }

    /// Caller guarantees `p` prime and every coefficient already reduced.
    pub(crate) fn from_raw(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPolynomial { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        FpPolynomial { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPolynomial { p, coeffs: vec![1] }
    }

    /// The polynomial `x`.
    pub fn x(p: u64) -> Self {
        FpPolynomial { p, coeffs: vec![0, 1] }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    pub fn leading(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.p, other.p))
        }
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let x = x % p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::from_raw(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(inv_mod(lc, self.p)),
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        let p = self.p;
        Self::from_raw(p, self.coeffs.iter().map(|&c| mul_mod(c, k, p)).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        Ok(Self::from_raw(
            p,
            (0..n).map(|i| add_mod(self.coeff(i), other.coeff(i), p)).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        Ok(Self::from_raw(
            p,
            (0..n).map(|i| sub_mod(self.coeff(i), other.coeff(i), p)).collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(self.mul_raw(other))
    }

    fn mul_raw(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % pp;
            }
        }
        Self::from_raw(p, out.into_iter().map(|c| c as u64).collect())
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_same_field(divisor)?;
        let dd = divisor.deg().ok_or(Error::ZeroPolynomial)?;
        let p = self.p;
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return Ok((Self::zero(p), self.clone()));
        }
        let inv_lc = inv_mod(divisor.coeffs[dd], p);
        let mut quot = vec![0u64; n - dd];
        for i in (dd..n).rev() {
            let c = mul_mod(rem[i], inv_lc, p);
            quot[i - dd] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = sub_mod(rem[i - dd + j], mul_mod(c, b, p), p);
            }
        }
        rem.truncate(dd);
        Ok((Self::from_raw(p, quot), Self::from_raw(p, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// `base^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Result<Self> {
        self.check_same_field(modulus)?;
        let mut base = self.rem(modulus)?;
        let mut acc = Self::one(self.p).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_raw(&base).rem(modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_raw(&base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    pub fn is_squarefree(&self) -> bool {
        match self.deg() {
            None => false,
            Some(0) => true,
            Some(_) => gcd_fp(self, &self.derivative())
                .map(|g| g.deg() == Some(0))
                .unwrap_or(false),
        }
    }

    /// Number of distinct roots in F_p, as `deg gcd(x^p - x, f)`.
    pub fn root_count(&self) -> Result<usize> {
        Ok(self.split_part()?.deg().unwrap_or(0))
    }

    /// Root count by evaluating at every element of F_p.
    pub fn root_count_exhaustive(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok((0..self.p).filter(|&x| self.eval(x) == 0).count())
    }

    /// `gcd(x^p - x, f)`: the product of the distinct linear factors of `f`.
    fn split_part(&self) -> Result<Self> {
        match self.deg() {
            None => Err(Error::ZeroPolynomial),
            Some(0) => Ok(Self::one(self.p)),
            Some(_) => {
                let xp = pow_x_mod(self.p, self)?;
                gcd_fp(&xp.sub(&Self::x(self.p))?, self)
            }
        }
    }

    /// The distinct roots in F_p, ascending.
    pub fn roots(&self) -> Result<Vec<u64>> {
        let split = self.split_part()?;
        let mut roots = Vec::new();
        self.split_linear(&split, &mut roots)?;
        roots.sort_unstable();
        Ok(roots)
    }

    // Equal-degree splitting of a product of distinct linear factors, using
    // the shifts (x + a)^((p-1)/2) - 1 for a = 0, 1, 2, ...
    fn split_linear(&self, g: &Self, out: &mut Vec<u64>) -> Result<()> {
        let p = self.p;
        match g.deg() {
            None | Some(0) => return Ok(()),
            Some(1) => {
                let g = g.monic();
                out.push((p - g.coeffs[0]) % p);
                return Ok(());
            }
            Some(_) => {}
        }
        for a in 0..p {
            let shifted = Self::from_raw(p, vec![a, 1]);
            let h = shifted.pow_mod((p - 1) / 2, g)?.sub(&Self::one(p))?;
            let d = gcd_fp(&h, g)?;
            let dd = d.deg().unwrap_or(0);
            if dd > 0 && Some(dd) < g.deg() {
                let (q, _) = g.div_rem(&d)?;
                self.split_linear(&d, out)?;
                return self.split_linear(&q, out);
            }
        }
        Err(Error::Invariant("root splitting exhausted all shifts".into()))
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, by
    /// distinct-degree splitting.
    pub fn factorization_shape(&self) -> Result<FactorShape> {
        let n = self.deg().ok_or(Error::ZeroPolynomial)?;
        if !self.is_squarefree() {
            return Err(Error::NotSquarefree(self.p));
        }
        let p = self.p;
        let mut degrees = Vec::new();
        let mut rest = self.monic();
        if n == 0 {
            return Ok(FactorShape(degrees));
        }
        let x = Self::x(p);
        let mut frob = x.clone();
        let mut d = 1usize;
        while let Some(rd) = rest.deg() {
            if rd == 0 {
                break;
            }
            if 2 * d > rd {
                degrees.push(rd as u32);
                break;
            }
            frob = frob.pow_mod(p, self)?;
            let g = gcd_fp(&frob.sub(&x)?, &rest)?;
            let gd = g.deg().unwrap_or(0);
            if gd > 0 {
                degrees.extend(std::iter::repeat_n(d as u32, gd / d));
                rest = rest.div_rem(&g)?.0;
            }
            d += 1;
        }
        degrees.sort_unstable();
        Ok(FactorShape(degrees))
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd_fp(a: &FpPolynomial, b: &FpPolynomial) -> Result<FpPolynomial> {
    a.check_same_field(b)?;
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    while !r1.is_zero() {
        let r = r0.rem(&r1)?;
        r0 = r1;
        r1 = r;
    }
    Ok(r0.monic())
}

/// `x^e mod f`, for `deg f ≥ 1`.
pub fn pow_x_mod(e: u64, f: &FpPolynomial) -> Result<FpPolynomial> {
    match f.deg() {
        Some(d) if d >= 1 => FpPolynomial::x(f.p).pow_mod(e, f),
        _ => Err(Error::DegreeTooSmall),
    }
}

impl fmt::Debug for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPolynomial(p={}, {:?})", self.p, self.coeffs)
    }
}

/// Multiset of irreducible-factor degrees, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FactorShape(Vec<u32>);

impl FactorShape {
    pub fn new(mut degrees: Vec<u32>) -> Self {
        degrees.sort_unstable();
        FactorShape(degrees)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> usize {
        self.0.iter().map(|&d| d as usize).sum()
    }

    pub fn linear_factors(&self) -> usize {
        self.0.iter().filter(|&&d| d == 1).count()
    }

    pub fn has_linear_factor(&self) -> bool {
        self.0.first() == Some(&1)
    }
}

impl fmt::Display for FactorShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for FactorShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("bad shape `{s}`")))?;
        if inner.is_empty() {
            return Ok(FactorShape(Vec::new()));
        }
        inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad shape `{s}`"))))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl Serialize for FactorShape {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl PartialOrd for IntPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntPolynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[i64]) -> FpPolynomial {
        FpPolynomial::from_signed(p, c).unwrap()
    }

    fn zp(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(c.iter().copied())
    }

    #[test]
    fn factor_search() {
        assert_eq!(zp(&[1, 0, 0, 0, 1]).find_factor(10_000), FactorSearch::NoFactor);
        assert_eq!(zp(&[1, 1, 0, 0, 0, 0, 1]).find_factor(100_000), FactorSearch::NoFactor);
        assert!(matches!(zp(&[-1, 0, 0, 0, 1]).find_factor(10_000), FactorSearch::Found(_)));
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2) has no rational root
        let f = zp(&[4, 0, 0, 0, 1]);
        match f.find_factor(10_000) {
            FactorSearch::Found(g) => {
                assert_eq!(g.deg(), Some(2));
                assert!(f.div_poly_exact(&g).is_some());
            }
            other => panic!("{other:?}"),
        }
        let product = zp(&[1, 1, 1]).mul(&zp(&[3, 0, 5]));
        assert!(matches!(product.scale(&BigInt::from(6)).find_factor(100_000), FactorSearch::Found(_)));
        assert_eq!(zp(&[1, 0, 0, 0, 1]).find_factor(3), FactorSearch::GaveUp);
    }

    #[test]
    fn exact_polynomial_division() {
        let a = zp(&[1, 1]);
        let b = zp(&[-2, 0, 3]);
        assert_eq!(a.mul(&b).div_poly_exact(&b), Some(a.clone()));
        assert_eq!(zp(&[1, 0, 1]).div_poly_exact(&a), None);
        assert_eq!(zp(&[2, 4]).div_poly_exact(&zp(&[1, 3])), None);
        assert_eq!(zp(&[-6, 0, -4]).content(), BigInt::from(-2));
        assert_eq!(zp(&[-6, 0, -4]).primitive_part(), zp(&[3, 0, 2]));
    }

    #[test]
    fn reduce_mod_p_examples() {
        assert_eq!(zp(&[1, 0, 0, 0, 1]).reduce_mod_p(3).unwrap(), fp(3, &[1, 0, 0, 0, 1]));
        let r = zp(&[6, 5, 3]).reduce_mod_p(3).unwrap();
        assert_eq!(r, fp(3, &[0, 2]));
        assert_eq!(r.deg(), Some(1));
        assert_eq!(zp(&[1, 1, 0, 0, 1]).reduce_mod_p(229).unwrap().coeffs(), &[1, 1, 0, 0, 1]);
        assert_eq!(zp(&[1, 1]).reduce_mod_p(2), Err(Error::InvalidPrime(2)));
        assert_eq!(zp(&[1, 1]).reduce_mod_p(9), Err(Error::InvalidPrime(9)));
        assert_eq!(FpPolynomial::new(15, vec![1]), Err(Error::InvalidPrime(15)));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(zp(&[1, 0, 0, 0, 1]).derivative(), zp(&[0, 0, 0, 4]));
        assert!(zp(&[5]).derivative().is_zero());
        assert_eq!(zp(&[1, 1, 0, 0, 1]).derivative(), zp(&[1, 0, 0, 4]));
        assert_eq!(fp(3, &[1, 0, 0, 0, 1]).derivative(), fp(3, &[0, 0, 0, 1]));
    }

    #[test]
    fn zero_polynomial_degree_is_sentinel() {
        assert_eq!(IntPolynomial::zero().degree(), Degree::MinusInfinity);
        assert!(Degree::MinusInfinity < Degree::Finite(0));
        assert_eq!(zp(&[0, 0, 0]).degree(), Degree::MinusInfinity);
    }

    #[test]
    fn gcd_examples() {
        let g = gcd_fp(&fp(5, &[-1, 0, 1]), &fp(5, &[-1, 1])).unwrap();
        assert_eq!(g, fp(5, &[-1, 1]));
        let f = fp(7, &[3, 0, 2]);
        assert_eq!(gcd_fp(&f, &FpPolynomial::zero(7)).unwrap(), f.monic());
        assert!(gcd_fp(&FpPolynomial::zero(7), &FpPolynomial::zero(7)).unwrap().is_zero());
        // x^4 + 1 = (x^2 + x + 2)(x^2 + 2x + 2) over F_3
        let a = fp(3, &[2, 1, 1]);
        let b = fp(3, &[2, 2, 1]);
        assert_eq!(a.mul(&b).unwrap(), fp(3, &[1, 0, 0, 0, 1]));
        let g = gcd_fp(&fp(3, &[1, 0, 0, 0, 1]), &fp(3, &[1, 0, 1])).unwrap();
        assert_eq!(g, FpPolynomial::one(3));
        assert_eq!(
            gcd_fp(&fp(3, &[1]), &fp(5, &[1])),
            Err(Error::ModulusMismatch(3, 5))
        );
    }

    #[test]
    fn pow_x_mod_examples() {
        assert_eq!(pow_x_mod(3, &fp(3, &[1, 0, 1])).unwrap(), fp(3, &[0, 2]));
        assert_eq!(pow_x_mod(1, &fp(7, &[1, 2, 3])).unwrap(), FpPolynomial::x(7));
        assert_eq!(pow_x_mod(5, &fp(7, &[3])), Err(Error::DegreeTooSmall));
        // x^2 + 1 is irreducible over F_7: x^7 = -x mod (x^2 + 1), no roots
        let f = fp(7, &[1, 0, 1]);
        assert_eq!(pow_x_mod(7, &f).unwrap(), fp(7, &[0, -1]));
        assert_eq!(f.root_count().unwrap(), 0);
    }

    #[test]
    fn root_count_examples() {
        assert_eq!(fp(3, &[1, 0, 0, 0, 1]).root_count().unwrap(), 0);
        assert_eq!(fp(5, &[-1, 0, 0, 0, 1]).root_count().unwrap(), 4);
        for p in [3u64, 5, 101] {
            assert_eq!(FpPolynomial::x(p).root_count().unwrap(), 1);
        }
        assert_eq!(FpPolynomial::zero(5).root_count(), Err(Error::ZeroPolynomial));
        assert_eq!(fp(5, &[-1, 0, 0, 0, 1]).roots().unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(fp(5, &[1, 0, 0, 1]).roots().unwrap(), vec![4]);
    }

    #[test]
    fn factorization_shape_examples() {
        assert_eq!(fp(3, &[1, 0, 0, 0, 1]).factorization_shape().unwrap(), FactorShape::new(vec![2, 2]));
        assert_eq!(
            fp(5, &[-1, 0, 0, 0, 1]).factorization_shape().unwrap(),
            FactorShape::new(vec![1, 1, 1, 1])
        );
        assert_eq!(fp(7, &[1, 0, 1]).factorization_shape().unwrap(), FactorShape::new(vec![2]));
        assert_eq!(
            fp(5, &[1, 2, 1]).factorization_shape(),
            Err(Error::NotSquarefree(5))
        );
        // x = 1 is a root of x^4 + x + 1 mod 3
        let s = fp(3, &[1, 1, 0, 0, 1]).factorization_shape().unwrap();
        assert_eq!(s.total_degree(), 4);
        assert!(s.has_linear_factor());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(zp(&[3, 5, 1]).discriminant().unwrap(), BigInt::from(25 - 12));
        assert_eq!(zp(&[1, 1, 0, 0, 1]).discriminant().unwrap(), BigInt::from(229));
        assert_eq!(zp(&[1, 0, 0, 0, 1]).discriminant().unwrap(), BigInt::from(256));
        assert_eq!(zp(&[1, 0, 2, 0, 1]).discriminant().unwrap(), BigInt::zero());
        assert_eq!(zp(&[1, 1]).discriminant(), Err(Error::DegreeTooSmall));
        // cubic x^3 + a x + b: -4a^3 - 27b^2
        assert_eq!(zp(&[1, 0, 0, 1]).discriminant().unwrap(), BigInt::from(-27));
    }

    #[test]
    fn parse_both_forms() {
        let a: IntPolynomial = "1,0,0,0,1".parse().unwrap();
        let b: IntPolynomial = "x^4+1".parse().unwrap();
        assert_eq!(a, b);
        let c: IntPolynomial = " 3*x^2 - x + 7 ".parse().unwrap();
        assert_eq!(c, zp(&[7, -1, 3]));
        let d: IntPolynomial = "-x^6+2x-2".parse().unwrap();
        assert_eq!(d, zp(&[-2, 2, 0, 0, 0, 0, -1]));
        assert!("x^4+1.5".parse::<IntPolynomial>().is_err());
        assert!("1,2.5".parse::<IntPolynomial>().is_err());
        assert!("x^^2".parse::<IntPolynomial>().is_err());
        assert!("".parse::<IntPolynomial>().is_err());
        assert_eq!(b.to_string(), "x^4 + 1");
        assert_eq!(c.to_string().parse::<IntPolynomial>().unwrap(), c);
    }

    #[test]
    fn shape_text_roundtrip() {
        let s = FactorShape::new(vec![2, 1, 1]);
        assert_eq!(s.to_string(), "{1,1,2}");
        assert_eq!("{1,1,2}".parse::<FactorShape>().unwrap(), s);
    }
}
