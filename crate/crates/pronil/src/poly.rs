//! Exact polynomial arithmetic over the integers and over prime fields.
//!
//! [`IntPoly`] stores coefficients in ascending order with arbitrary
//! precision and a canonical form (no trailing zero coefficients; the zero
//! polynomial is the empty list). The module provides the subresultant gcd,
//! exact division, reciprocal polynomials, reduction mod p, and recognition
//! of products of cyclotomic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::primes::is_prime_u64;

/// Polynomial with integer coefficients, ascending degree order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        IntPoly { coeffs: vec![BigInt::zero(), BigInt::one()] }
    }

    /// Builds from ascending coefficients, dropping trailing zeros.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.normalize();
        p
    }

    /// Convenience constructor from machine integers, ascending order.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: BigInt) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Ascending coefficients without trailing zeros.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        IntPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        IntPoly::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly { coeffs }
    }

    pub fn mul_scalar(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// Gcd of the coefficients, non-negative; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// The polynomial divided by its content; the sign of the leading
    /// coefficient is preserved.
    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|a| a / &c).collect() }
    }

    /// Flips the sign so the leading coefficient is positive.
    pub fn with_positive_leading(&self) -> IntPoly {
        match self.leading() {
            Some(lc) if lc.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Pseudo-remainder: the `R` in `lc(b)^(deg a - deg b + 1) a = q b + R`.
    ///
    /// # Panics
    /// Panics when `b` is zero.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        assert!(!b.is_zero(), "pseudo-remainder by zero");
        let db = b.degree().unwrap();
        let lb = b.leading().unwrap().clone();
        if self.degree().map_or(true, |da| da < db) {
            // Convention: scale by the full power even when no step runs.
            let e = 1;
            return self.mul_scalar(&lb.pow(e));
        }
        let da = self.degree().unwrap();
        let mut e = (da - db + 1) as u32;
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().unwrap().clone();
            r = r.mul_scalar(&lb).sub(&b.shift_up(dr - db).mul_scalar(&lr));
            e -= 1;
        }
        r.mul_scalar(&lb.pow(e))
    }

    /// Exact division, `None` when `other` does not divide `self` over the
    /// integers.
    pub fn exact_div(&self, other: &IntPoly) -> Option<IntPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let db = other.degree().unwrap();
        let da = self.degree().unwrap();
        if da < db {
            return None;
        }
        let lb = other.leading().unwrap();
        let mut rem = self.clone();
        let mut q = vec![BigInt::zero(); da - db + 1];
        while let Some(dr) = rem.degree() {
            if dr < db {
                return None;
            }
            let lr = rem.leading().unwrap();
            let (quot, r) = lr.div_rem(lb);
            if !r.is_zero() {
                return None;
            }
            q[dr - db] = quot.clone();
            rem = rem.sub(&other.shift_up(dr - db).mul_scalar(&quot));
            if rem.is_zero() {
                break;
            }
        }
        Some(IntPoly::from_coeffs(q))
    }

    /// Greatest common divisor over the integers via the subresultant
    /// remainder sequence on primitive parts; the result has a positive
    /// leading coefficient and carries the gcd of the contents.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.with_positive_leading();
        }
        if other.is_zero() {
            return self.with_positive_leading();
        }
        let ca = self.content();
        let cb = other.content();
        let d = ca.gcd(&cb);
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = (a.degree().unwrap() - b.degree().unwrap()) as u32;
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                break;
            }
            if r.degree() == Some(0) {
                b = IntPoly::one();
                break;
            }
            a = std::mem::replace(&mut b, {
                let divisor = &g * h.pow(delta);
                r.exact_div(&IntPoly::from_coeffs(vec![divisor]))
                    .expect("subresultant divisor is exact")
            });
            g = a.leading().unwrap().clone();
            h = match delta {
                0 => h,
                1 => g.clone(),
                _ => g.pow(delta).div_rem(&h.pow(delta - 1)).0,
            };
        }
        b.primitive_part().with_positive_leading().mul_scalar(&d)
    }

    /// The reciprocal `x^n f(1/x)` with `n = deg f`; reverses the
    /// coefficients and renormalizes, so zero roots drop out.
    pub fn reciprocal(&self) -> Result<IntPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        let mut p = IntPoly { coeffs: std::mem::take(&mut coeffs) };
        p.normalize();
        Ok(p)
    }

    /// Coefficient-wise reduction mod a prime.
    pub fn reduce_mod(&self, p: u64) -> Result<ModPoly> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let bp = BigInt::from(p);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&bp);
                u64::try_from(r).expect("residue fits in u64")
            })
            .collect();
        Ok(ModPoly::from_coeffs(p, coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Polynomial over the prime field `Z/pZ`, ascending coefficients in `[0,p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn from_coeffs(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = ModPoly { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        while poly.coeffs.last() == Some(&0) {
            poly.coeffs.pop();
        }
        poly
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                _ => {
                    if c != 1 {
                        write!(f, "{c}")?;
                    }
                    write!(f, "x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `x^n - 1`.
pub fn x_pow_minus_one(n: usize) -> IntPoly {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = -BigInt::one();
    coeffs[n] = BigInt::one();
    IntPoly::from_coeffs(coeffs)
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut phi = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            phi -= phi / d;
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// The `n`-th cyclotomic polynomial, computed by dividing `x^n - 1` by the
/// cyclotomic polynomials of the proper divisors of `n`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1);
    let mut f = x_pow_minus_one(n as usize);
    for d in 1..n {
        if n % d == 0 {
            f = f.exact_div(&cyclotomic(d)).expect("cyclotomic division is exact");
        }
    }
    f
}

/// True when the polynomial is, up to sign, a product of cyclotomic
/// polynomials (the empty product 1 included).
///
/// Works by repeatedly extracting `gcd(f, x^N - 1)` for every `N` whose
/// totient does not exceed the residual degree, and checking that the
/// residual is a unit.
pub fn is_cyclotomic_product(f: &IntPoly) -> bool {
    let Some(lc) = f.leading() else { return false };
    if !lc.abs().is_one() {
        return false;
    }
    let mut g = f.with_positive_leading();
    let mut n = 1usize;
    while let Some(d) = g.degree().filter(|&d| d > 0) {
        if n > 2 * d * d + 1 {
            return false;
        }
        if euler_phi(n as u64) as usize <= d {
            loop {
                let h = g.gcd(&x_pow_minus_one(n));
                if h.degree() == Some(0) {
                    break;
                }
                g = g.exact_div(&h).expect("gcd divides");
                if g.degree() == Some(0) {
                    break;
                }
            }
        }
        n += 1;
    }
    g == IntPoly::one()
}

/// Factors a product of cyclotomic polynomials as `(n, multiplicity)` pairs,
/// sign discarded; `None` when the polynomial is not such a product.
pub fn cyclotomic_factorization(f: &IntPoly) -> Option<Vec<(u64, u32)>> {
    let lc = f.leading()?;
    if !lc.abs().is_one() {
        return None;
    }
    let mut g = f.with_positive_leading();
    let mut factors = Vec::new();
    let mut n = 1u64;
    while let Some(d) = g.degree().filter(|&d| d > 0) {
        if n as usize > 2 * d * d + 1 {
            return None;
        }
        if euler_phi(n) as usize <= d {
            let phi_n = cyclotomic(n);
            let mut mult = 0;
            while let Some(q) = g.exact_div(&phi_n) {
                g = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((n, mult));
            }
        }
        n += 1;
    }
    (g == IntPoly::one()).then_some(factors)
}

/// The unique coprime pair of cyclotomic products `(xi1, xi2)`, leading
/// coefficients positive, with `xi1 * a = ±(xi2 * b)`. Errors when no such
/// pair exists for the given polynomials.
pub fn xi_pair(a: &IntPoly, b: &IntPoly) -> Result<(IntPoly, IntPoly)> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::XiPair("inputs must be non-zero".into()));
    }
    let pa = a.primitive_part();
    let pb = b.primitive_part();
    let g = pa.gcd(&pb);
    let xi1 = pb.exact_div(&g).expect("gcd divides").with_positive_leading();
    let xi2 = pa.exact_div(&g).expect("gcd divides").with_positive_leading();

    let lhs = xi1.mul(a);
    let rhs = xi2.mul(b);
    if lhs != rhs && lhs != rhs.neg() {
        return Err(Error::XiPair(format!(
            "({xi1}) * ({a}) is not ({xi2}) * ({b}) up to sign"
        )));
    }
    if xi1.gcd(&xi2).degree() != Some(0) {
        return Err(Error::XiPair(format!("({xi1}) and ({xi2}) share a factor")));
    }
    if !is_cyclotomic_product(&xi1) {
        return Err(Error::XiPair(format!("({xi1}) is not a product of cyclotomic polynomials")));
    }
    if !is_cyclotomic_product(&xi2) {
        return Err(Error::XiPair(format!("({xi2}) is not a product of cyclotomic polynomials")));
    }
    Ok((xi1, xi2))
}
