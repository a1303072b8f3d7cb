//! Small-integer number theory helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r: u128 = 1;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    r as u64
}

/// Multiplicative order of `a` modulo `m` (gcd(a, m) = 1).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let phi = euler_phi(m);
    let mut ord = phi;
    for (q, _) in factorize(phi) {
        while ord % q == 0 && pow_mod(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Valuation of a nonzero i128 at p.
pub fn val_i128(mut x: i128, p: u64) -> u32 {
    assert!(x != 0, "valuation of zero");
    let p = p as i128;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Valuation and unit part of a nonzero big integer at p.
pub fn val_big(x: &BigInt, p: u64) -> (u32, BigInt) {
    assert!(!x.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut u = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = u.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        u = q;
        v += 1;
    }
    (v, u)
}

/// Squarefree part s and square root q of the largest square: n = s * q^2.
pub fn squarefree_decompose(n: i128) -> (i128, i128) {
    assert!(n != 0);
    let sign = if n < 0 { -1 } else { 1 };
    let mut s: i128 = sign;
    let mut q: i128 = 1;
    for (p, e) in factorize(n.unsigned_abs() as u64) {
        let p = p as i128;
        q *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
    }
    (s, q)
}

/// Legendre symbol (a / p) for an odd prime p, via Euler's criterion on a big integer.
pub fn legendre_big(a: &BigInt, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let r = a.mod_floor(&pb);
    if r.is_zero() {
        return 0;
    }
    let e = r.modpow(&BigInt::from((p - 1) / 2), &pb);
    if e.is_one() {
        1
    } else {
        -1
    }
}

pub fn big_pow(b: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

pub fn abs_i128(x: i128) -> i128 {
    if x < 0 {
        -x
    } else {
        x
    }
}

pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}
