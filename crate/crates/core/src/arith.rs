//! Integer primitives: square roots, primality, small factorizations and
//! quadratic congruences modulo a prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Int;

/// Moduli below this bound are solved by scanning every residue.
pub const SCAN_LIMIT: u64 = 1_000_000;

/// Inputs up to this bound are tested for primality by trial division.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000_000_000;

/// Trial-division bound used by [`factor`].
const FACTOR_TRIAL_BOUND: u64 = 10_000_000;

/// `⌊√n⌋` for `n ≥ 0`.
pub fn isqrt(n: &Int) -> Result<Int> {
    if n.is_negative() {
        return Err(Error::NegativeSqrt(n.clone()));
    }
    Ok(n.sqrt())
}

/// True when `n` is a perfect square (negative numbers never are).
pub fn is_square(n: &Int) -> bool {
    match isqrt(n) {
        Ok(r) => &r * &r == *n,
        Err(_) => false,
    }
}

/// Deterministic primality test.
///
/// Trial division for `n ≤ 10^12`; above that, Miller-Rabin with the first
/// thirteen prime bases, which is exact below 3.3·10^24.
pub fn is_prime(n: &Int) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    match n.to_u64() {
        Some(small) if small <= TRIAL_DIVISION_LIMIT => is_prime_trial(small),
        _ => is_prime_miller_rabin(n),
    }
}

fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut f = 5u64;
    while f * f <= n {
        if n.is_multiple_of(f) || n.is_multiple_of(f + 2) {
            return false;
        }
        f += 6;
    }
    true
}

fn is_prime_miller_rabin(n: &Int) -> bool {
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for &p in &BASES {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if n.is_multiple_of(&p) {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'bases: for &a in &BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of `n > 0` as ascending `(prime, exponent)` pairs.
///
/// Divides out every prime below 10^7; a remaining cofactor must then be
/// prime, otherwise [`Error::FactorizationTooHard`] is returned.
pub fn factor(n: &Int) -> Result<Vec<(Int, u32)>> {
    assert!(n.is_positive(), "factor expects a positive integer");
    let mut rest = n.clone();
    let mut out: Vec<(Int, u32)> = Vec::new();
    let mut push = |p: Int, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut f = 2u64;
    while f <= FACTOR_TRIAL_BOUND {
        let fb = BigInt::from(f);
        if &fb * &fb > rest {
            break;
        }
        let mut e = 0;
        while rest.is_multiple_of(&fb) {
            rest /= &fb;
            e += 1;
        }
        push(fb, e);
        f += if f == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let bound = BigInt::from(FACTOR_TRIAL_BOUND);
        if &bound * &bound >= rest || is_prime(&rest) {
            push(rest, 1);
        } else {
            return Err(Error::FactorizationTooHard(n.clone()));
        }
    }
    Ok(out)
}

/// Merge several factorizations into one, summing exponents.
pub fn merge_factorizations(parts: &[Vec<(Int, u32)>]) -> Vec<(Int, u32)> {
    let mut all: Vec<(Int, u32)> = parts.iter().flatten().cloned().collect();
    all.sort();
    let mut out: Vec<(Int, u32)> = Vec::new();
    for (p, e) in all {
        match out.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => out.push((p, e)),
        }
    }
    out
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// All residues `t ∈ [0, m)` with `a2·t² + a1·t + a0 ≡ 0 (mod m)`, ascending.
///
/// `m` must be prime and the coefficients must not all vanish modulo `m`.
pub fn solve_quadratic_congruence(a2: &Int, a1: &Int, a0: &Int, m: &Int) -> Result<Vec<Int>> {
    if !is_prime(m) {
        return Err(Error::NotPrime(m.clone()));
    }
    let (a2, a1, a0) = (a2.mod_floor(m), a1.mod_floor(m), a0.mod_floor(m));
    if a2.is_zero() && a1.is_zero() && a0.is_zero() {
        return Err(Error::DegenerateCongruence(m.clone()));
    }
    match m.to_u64() {
        Some(small) if small < SCAN_LIMIT => Ok(solve_by_scan(&a2, &a1, &a0, small)),
        _ => Ok(solve_by_sqrt(&a2, &a1, &a0, m)),
    }
}

pub(crate) fn solve_by_scan(a2: &Int, a1: &Int, a0: &Int, m: u64) -> Vec<Int> {
    let (a2, a1, a0) = (reduce_u64(a2, m), reduce_u64(a1, m), reduce_u64(a0, m));
    let m128 = m as u128;
    (0..m)
        .filter(|&t| {
            let t = t as u128;
            // Horner form keeps every intermediate below m^2.
            let v = ((a2 as u128 * t + a1 as u128) % m128 * t + a0 as u128) % m128;
            v == 0
        })
        .map(BigInt::from)
        .collect()
}

fn reduce_u64(x: &Int, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

/// Closed-form path: linear solve or quadratic formula with a modular square
/// root. Coefficients are already reduced modulo the prime `p`.
pub(crate) fn solve_by_sqrt(a2: &Int, a1: &Int, a0: &Int, p: &Int) -> Vec<Int> {
    if a2.is_zero() {
        if a1.is_zero() {
            return Vec::new();
        }
        let inv = mod_inverse(a1, p).expect("p is prime");
        return vec![(-a0 * inv).mod_floor(p)];
    }
    let two = BigInt::from(2);
    if p == &two {
        return solve_by_scan(a2, a1, a0, 2);
    }
    let disc = (a1 * a1 - BigInt::from(4) * a2 * a0).mod_floor(p);
    let Some(root) = sqrt_mod_prime(&disc, p) else {
        return Vec::new();
    };
    let inv = mod_inverse(&(&two * a2), p).expect("p is odd prime");
    let mut roots = vec![
        ((-a1 + &root) * &inv).mod_floor(p),
        ((-a1 - &root) * &inv).mod_floor(p),
    ];
    roots.sort();
    roots.dedup();
    roots
}

/// Tonelli-Shanks square root of `a` modulo an odd prime `p`.
pub(crate) fn sqrt_mod_prime(a: &Int, p: &Int) -> Option<Int> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(a);
    }
    let one = BigInt::one();
    let p_minus_one = p - &one;
    let half = &p_minus_one >> 1;
    if a.modpow(&half, p) != one {
        return None;
    }
    let mut q = p_minus_one.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while z.modpow(&half, p) != p_minus_one {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while t != one {
        let mut i = 0u32;
        let mut tt = t.clone();
        while tt != one {
            tt = (&tt * &tt) % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    Some(r)
}
