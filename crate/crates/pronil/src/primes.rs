//! Primality testing and integer factorization.
//!
//! Factoring here serves one job: turning a pseudodeterminant into the set
//! of primes it excludes. Inputs are expected to be modest, so trial
//! division plus Pollard's rho is plenty.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // This base set decides primality for every 64-bit integer.
    'bases: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Prime factorization of a positive 64-bit integer, ascending.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorization needs a positive integer");
    let mut n = n;
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut d = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while d <= 1 << 20 && d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += steps[i];
        i = (i + 1) % steps.len();
    }
    if n > 1 {
        let mut stack = vec![n];
        let mut rest: Vec<u64> = Vec::new();
        while let Some(v) = stack.pop() {
            if is_prime_u64(v) {
                rest.push(v);
            } else {
                let f = rho_u64(v);
                stack.push(f);
                stack.push(v / f);
            }
        }
        rest.sort_unstable();
        for v in rest {
            match out.iter_mut().find(|(p, _)| *p == v) {
                Some((_, e)) => *e += 1,
                None => out.push((v, 1)),
            }
        }
    }
    out.sort_unstable();
    out
}

/// Brent-style Pollard rho; input must be composite and odd.
fn rho_u64(n: u64) -> u64 {
    for c in 1.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

fn is_prime_bigint(n: &BigUint) -> bool {
    if let Ok(small) = u64::try_from(n) {
        return is_prime_u64(small);
    }
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    // Fixed-base Miller-Rabin; ample for the sizes factored here.
    'bases: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn rho_bigint(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
    }
    unreachable!()
}

/// Prime factorization of `|n|`, ascending. Errors when `n` is zero or a
/// prime factor does not fit in 64 bits.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::Precondition("cannot factor zero".into()));
    }
    let mut m = n.abs().to_biguint().expect("absolute value");
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in 2u64..1000 {
        if m.is_one() {
            break;
        }
        let bp = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if !m.is_one() {
        let mut stack = vec![m];
        let mut rest: Vec<u64> = Vec::new();
        while let Some(v) = stack.pop() {
            if v.is_one() {
                continue;
            }
            if is_prime_bigint(&v) {
                match u64::try_from(&v) {
                    Ok(p) => rest.push(p),
                    Err(_) => return Err(Error::PrimeTooLarge(v.to_string())),
                }
            } else {
                let f = rho_bigint(&v);
                stack.push(&v / &f);
                stack.push(f);
            }
        }
        rest.sort_unstable();
        for v in rest {
            match out.iter_mut().find(|(p, _)| *p == v) {
                Some((_, e)) => *e += 1,
                None => out.push((v, 1)),
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}
