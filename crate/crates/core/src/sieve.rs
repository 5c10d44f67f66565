//! Segmented sieve of Eratosthenes.

const SEGMENT: u64 = 1 << 16;

/// Primes up to `n` by the plain sieve.
pub fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Primes in `lo..=hi`, one fixed-size segment at a time.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if hi < 2 || lo > hi {
        return out;
    }
    let lo = lo.max(2);
    let base = small_primes(isqrt(hi));
    let mut start = lo;
    let mut marks = vec![false; SEGMENT as usize];
    while start <= hi {
        let end = hi.min(start + SEGMENT - 1);
        let len = (end - start + 1) as usize;
        marks[..len].iter_mut().for_each(|m| *m = false);
        for &q in &base {
            if q * q > end {
                break;
            }
            let first = (start.div_ceil(q) * q).max(q * q);
            let mut j = first;
            while j <= end {
                marks[(j - start) as usize] = true;
                j += q;
            }
        }
        out.extend((0..len).filter(|&i| !marks[i]).map(|i| start + i as u64));
        start = end + 1;
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    primes_in_range(2, n)
}

/// Splits `lo..=hi` into at most `parts` contiguous, ordered, nonempty ranges.
pub fn partition(lo: u64, hi: u64, parts: usize) -> Vec<(u64, u64)> {
    if lo > hi {
        return Vec::new();
    }
    let total = hi - lo + 1;
    let parts = (parts.max(1) as u64).min(total);
    let step = total / parts;
    let extra = total % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = lo;
    for i in 0..parts {
        let len = step + u64::from(i < extra);
        out.push((start, start + len - 1));
        start += len;
    }
    out
}
