//! Test-only reference implementations, kept independent of the library's
//! search code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use twistlab::poly::IntPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Brute {
    Point,
    NoPoint,
    Undecided,
}

fn val(n: &BigInt, p: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    Some(v)
}

fn unit_part(n: &BigInt, p: &BigInt) -> BigInt {
    let mut n = n.clone();
    while (&n % p).is_zero() {
        n /= p;
    }
    n
}

fn is_qr(a: &BigInt, p: &BigInt) -> bool {
    let a = a.mod_floor(p);
    let e = (p - 1u32) / 2u32;
    a.modpow(&e, p).is_one()
}

/// Classifies the residue class `c + p^j Z_p` of the equation `z^2 = F(t)`:
/// `Some(true)` if it certainly contains a point, `Some(false)` if it
/// certainly has none, `None` if it must be split.
fn decide_class(f: &IntPolynomial, c: &BigInt, j: u32, p: &BigInt) -> Option<bool> {
    let value = f.eval(c);
    let deriv = f.derivative().eval(c);
    if value.is_zero() {
        return Some(true);
    }
    let v = val(&value, p).unwrap();
    // smallest valuation of F(c + p^j s) - F(c) over s ∈ Z_p
    let shifted = f.compose_affine(c, &p.pow(j));
    let drift = shifted.coeffs()[1..]
        .iter()
        .filter_map(|a| val(a, p))
        .min();
    if drift.is_none_or(|w| v < w) {
        return Some(v.is_multiple_of(2) && is_qr(&unit_part(&value, p), p));
    }
    if let Some(dv) = val(&deriv, p) {
        if v > 2 * dv {
            return Some(true);
        }
    }
    None
}

/// Searches `d y^2 = f(x)` for Q_p-points by splitting residue classes down
/// to modulus `p^max_exp`, on both `x ∈ Z_p` and `x = 1/u, u ∈ pZ_p`.
pub fn brute_force(f: &IntPolynomial, d: &BigInt, p: u64, max_exp: u32) -> Brute {
    let n = f.deg().unwrap();
    if n % 2 == 1 {
        return Brute::Point;
    }
    let pb = BigInt::from(p);
    let affine = f.scale(d);
    let inverted = f.reversed(n).scale(d);
    let mut stack: Vec<(bool, BigInt, u32)> = (0..p).map(|a| (false, BigInt::from(a), 1)).collect();
    stack.push((true, BigInt::zero(), 1));
    let mut undecided = false;
    while let Some((inv, c, j)) = stack.pop() {
        let poly = if inv { &inverted } else { &affine };
        match decide_class(poly, &c, j, &pb) {
            Some(true) => return Brute::Point,
            Some(false) => {}
            None if j < max_exp => {
                let step = pb.pow(j);
                for a in 0..p {
                    stack.push((inv, &c + &step * a, j + 1));
                }
            }
            None => undecided = true,
        }
    }
    if undecided {
        Brute::Undecided
    } else {
        Brute::NoPoint
    }
}

pub fn squarefree_small(mut n: i64) -> i64 {
    let sign = n.signum();
    n = n.abs();
    let mut out = 1;
    let mut q = 2;
    while q * q <= n {
        let mut e = 0;
        while n % q == 0 {
            n /= q;
            e += 1;
        }
        if e % 2 == 1 {
            out *= q;
        }
        q += 1;
    }
    sign * out * n
}

pub fn random_poly<R: Rng>(rng: &mut R, degree: usize, bound: i64) -> IntPolynomial {
    loop {
        let coeffs: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-bound..=bound)).collect();
        if coeffs[degree] != 0 {
            return IntPolynomial::from_coeffs(coeffs);
        }
    }
}

/// A squarefree polynomial of the given degree (nonzero discriminant).
pub fn random_separable<R: Rng>(rng: &mut R, degree: usize, bound: i64) -> IntPolynomial {
    loop {
        let f = random_poly(rng, degree, bound);
        if !f.discriminant().unwrap().is_zero() {
            return f;
        }
    }
}

pub fn random_twist<R: Rng>(rng: &mut R, bound: i64) -> BigInt {
    loop {
        let d = squarefree_small(rng.gen_range(-bound..=bound));
        if d != 0 {
            return BigInt::from(d);
        }
    }
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for sub in permutations(n - 1) {
        for pos in 0..n {
            let mut v = sub.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

/// Sorted cycle lengths of a permutation.
pub fn cycle_type(perm: &[usize]) -> Vec<u32> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

/// Galois group of `x^4 + 1` acting on its roots `ζ^k` (`k` odd, `ζ` a
/// primitive 8th root of unity) through `ζ ↦ ζ^a`.
pub fn galois_x4_plus_1() -> Vec<Vec<usize>> {
    let roots = [1usize, 3, 5, 7];
    roots
        .iter()
        .map(|&a| {
            roots
                .iter()
                .map(|&k| roots.iter().position(|&r| r == (a * k) % 8).unwrap())
                .collect()
        })
        .collect()
}

pub fn is_small_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|q| q * q <= n).all(|q| !n.is_multiple_of(q))
}
