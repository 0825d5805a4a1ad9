//! Exact integer matrices: incidence matrices of substitutions and
//! free-group endomorphisms, characteristic polynomials, nilpotency and
//! primitivity tests, pseudodeterminants, and reduction mod p.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{IntPoly, ModPoly};
use crate::primes::{is_prime_u64, pow_mod};
use crate::words::{count_occurrences, FreeGroupEndo, Substitution, Word};

/// Matrix with arbitrary-precision integer entries, row-major; the 0x0
/// matrix is permitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from machine integers.
    ///
    /// # Panics
    /// Panics on ragged rows.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|row| row.iter().map(|&x| BigInt::from(x))).collect(),
        }
    }

    /// Incidence matrix of a substitution: entry (a, b) counts the letter
    /// `a` in the image of `b`.
    pub fn incidence(s: &Substitution) -> Self {
        IntMatrix::incidence_words(s.size(), s.images())
    }

    /// Incidence matrix of a homomorphism between free monoids, given by the
    /// images of the source letters as words over a target alphabet of
    /// `rows` letters. Columns are indexed by the source alphabet.
    pub fn incidence_words(rows: usize, images: &[Word]) -> Self {
        let cols = images.len();
        let mut m = IntMatrix::zeros(rows, cols);
        for (b, img) in images.iter().enumerate() {
            for a in 0..rows {
                let n = count_occurrences(img, &[a]).expect("single letter pattern");
                m.data[a * cols + b] = BigInt::from(n);
            }
        }
        m
    }

    /// Incidence matrix of a free-group endomorphism: entry (a, b) is the
    /// exponent sum of `a` in the image of `b`.
    pub fn incidence_endo(e: &FreeGroupEndo) -> Self {
        let n = e.size();
        let mut m = IntMatrix::zeros(n, n);
        for b in 0..n {
            for a in 0..n {
                m.data[a * n + b] = BigInt::from(e.image(b).exponent_sum(a));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    /// Matrix product.
    ///
    /// # Panics
    /// Panics when the inner dimensions disagree.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = aik * other.get(k, j);
                    out.data[i * other.cols + j] += v;
                }
            }
        }
        out
    }

    /// `n`-th power of a square matrix; `n = 0` gives the identity.
    pub fn pow(&self, n: usize) -> IntMatrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> BigInt {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    fn add_scaled_identity(&self, c: &BigInt) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.rows {
            m.data[i * self.cols + i] += c;
        }
        m
    }

    /// Characteristic polynomial `det(x - M)`, monic of degree `rows`; the
    /// empty matrix gives the constant 1. Computed by the Faddeev-LeVerrier
    /// recurrence, which stays in exact integer arithmetic.
    pub fn char_poly(&self) -> Result<IntPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let d = self.rows;
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        let mut n = IntMatrix::identity(d);
        for k in 1..=d {
            let an = self.mul(&n);
            let (c, rem) = (-an.trace()).div_rem(&BigInt::from(k));
            debug_assert!(rem.is_zero(), "Faddeev-LeVerrier trace division is exact");
            n = an.add_scaled_identity(&c);
            coeffs[d - k] = c;
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }

    /// True iff some power vanishes; by Cayley-Hamilton, equivalent to the
    /// characteristic polynomial being `x^d`.
    pub fn is_nilpotent(&self) -> Result<bool> {
        let chi = self.char_poly()?;
        Ok(chi.coeffs().iter().take(self.rows).all(Zero::is_zero))
    }

    /// True iff some power of this non-negative square matrix is entrywise
    /// positive; decided at the Wielandt bound `d^2 - 2d + 2`.
    pub fn is_primitive(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j).is_negative() {
                    return Err(Error::NegativeEntry { row: i, col: j });
                }
            }
        }
        let d = self.rows;
        if d == 0 {
            return Ok(false);
        }
        let bound = if d == 1 { 1 } else { d * d - 2 * d + 2 };
        // Work over booleans: only the zero pattern matters.
        let sign: Vec<bool> = self.data.iter().map(|v| !v.is_zero()).collect();
        let mut power = sign.clone();
        for _ in 1..=bound {
            if power.iter().all(|&b| b) {
                return Ok(true);
            }
            let mut next = vec![false; d * d];
            for i in 0..d {
                for k in 0..d {
                    if power[i * d + k] {
                        for j in 0..d {
                            if sign[k * d + j] {
                                next[i * d + j] = true;
                            }
                        }
                    }
                }
            }
            power = next;
        }
        Ok(power.iter().all(|&b| b))
    }

    /// Product of the non-zero eigenvalues with multiplicity, with the sign
    /// fixed as the leading coefficient of `chi^rev` times
    /// `(-1)^deg(chi^rev)`; the empty matrix gives 1.
    pub fn pseudodeterminant(&self) -> Result<BigInt> {
        let rev = self.char_poly()?.reciprocal()?;
        let deg = rev.degree().unwrap();
        let lead = rev.leading().unwrap().clone();
        Ok(if deg % 2 == 0 { lead } else { -lead })
    }

    /// Entry-wise reduction mod a prime.
    pub fn reduce_mod(&self, p: u64) -> Result<ModMatrix> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let bp = BigInt::from(p);
        let data = self
            .data
            .iter()
            .map(|v| u64::try_from(v.mod_floor(&bp)).expect("residue fits in u64"))
            .collect();
        Ok(ModMatrix { p, rows: self.rows, cols: self.cols, data })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strings: Vec<String> = self.data.iter().map(BigInt::to_string).collect();
        let mut widths = vec![0usize; self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                widths[j] = widths[j].max(strings[i * self.cols + j].len());
            }
        }
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:>width$}", strings[i * self.cols + j], width = widths[j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Matrix over the prime field `Z/pZ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.p, other.p, "moduli must agree");
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let p = self.p as u128;
        let mut out = ModMatrix {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            data: vec![0; self.rows * other.cols],
        };
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k) as u128;
                if aik == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.data[i * other.cols + j] as u128;
                    out.data[i * other.cols + j] =
                        ((cur + aik * other.get(k, j) as u128) % p) as u64;
                }
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> ModMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = ModMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: vec![0; self.rows * self.cols],
        };
        for i in 0..self.rows {
            acc.data[i * self.cols + i] = 1 % self.p;
        }
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Rank over `Z/pZ` by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let (rows, cols, p) = (self.rows, self.cols, self.p);
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&i| m[i * cols + col] != 0) else {
                continue;
            };
            for j in 0..cols {
                m.swap(pivot * cols + j, rank * cols + j);
            }
            let inv = pow_mod(m[rank * cols + col], p - 2, p);
            for i in 0..rows {
                if i == rank || m[i * cols + col] == 0 {
                    continue;
                }
                let factor = (m[i * cols + col] as u128 * inv as u128 % p as u128) as u64;
                for j in col..cols {
                    let sub = factor as u128 * m[rank * cols + j] as u128 % p as u128;
                    let cur = m[i * cols + j] as u128;
                    m[i * cols + j] = ((cur + p as u128 * p as u128 - sub) % p as u128) as u64;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Characteristic polynomial over `Z/pZ`.
    pub fn char_poly(&self) -> Result<ModPoly> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let int = IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| BigInt::from(v)).collect(),
        };
        int.char_poly()?.reduce_mod(self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(text: &str) -> Substitution {
        Substitution::parse(text).unwrap()
    }

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    #[test]
    fn incidence_of_substitutions() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        assert_eq!(IntMatrix::incidence(&tau), IntMatrix::from_i64(&[&[1, 1], &[1, 1]]));

        let neg = sub("0 -> 120\n1 -> 121\n2 -> 200\n");
        assert_eq!(
            IntMatrix::incidence(&neg),
            IntMatrix::from_i64(&[&[1, 0, 2], &[1, 2, 0], &[1, 1, 1]])
        );
    }

    #[test]
    fn incidence_of_endomorphisms() {
        let psi = FreeGroupEndo::parse("0 -> 0 1 0' 1'\n1 -> 0\n").unwrap();
        assert_eq!(IntMatrix::incidence_endo(&psi), IntMatrix::from_i64(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn incidence_is_functorial_on_an_example() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        let m = IntMatrix::incidence(&tau);
        let m2 = IntMatrix::incidence(&tau.power(2).unwrap());
        assert_eq!(m2, m.mul(&m));
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(
            IntMatrix::from_i64(&[&[1, 1], &[1, 1]]).char_poly().unwrap(),
            p(&[0, -2, 1])
        );
        assert_eq!(IntMatrix::zeros(0, 0).char_poly().unwrap(), IntPoly::one());
        assert_eq!(IntMatrix::from_i64(&[&[0, 1], &[0, 0]]).char_poly().unwrap(), p(&[0, 0, 1]));

        // columns count the images 12, 22, 33, 00
        let tedious = IntMatrix::incidence(&sub("0 -> 12\n1 -> 22\n2 -> 33\n3 -> 00\n"));
        assert_eq!(tedious.char_poly().unwrap(), p(&[-8, -4, 0, 0, 1]));

        let cyclo = IntMatrix::incidence(&sub("0 -> 010\n1 -> 21\n2 -> 102\n"));
        assert_eq!(cyclo.char_poly().unwrap(), p(&[-1, 4, -4, 1]));

        assert!(IntMatrix::zeros(2, 3).char_poly().is_err());
    }

    #[test]
    fn reciprocal_of_char_poly_examples() {
        let m = IntMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(m.char_poly().unwrap().reciprocal().unwrap(), p(&[1, -2]));

        let neg = IntMatrix::from_i64(&[&[1, 0, 2], &[1, 2, 0], &[1, 1, 1]]);
        let rev = neg.char_poly().unwrap().reciprocal().unwrap();
        assert_eq!(rev, p(&[1, -4, 3])); // (3x-1)(x-1)
    }

    #[test]
    fn pseudodeterminants() {
        assert_eq!(
            IntMatrix::from_i64(&[&[1, 1], &[1, 1]]).pseudodeterminant().unwrap(),
            BigInt::from(2)
        );
        let tedious = IntMatrix::incidence(&sub("0 -> 12\n1 -> 22\n2 -> 33\n3 -> 00\n"));
        assert_eq!(tedious.pseudodeterminant().unwrap(), BigInt::from(-8));
        assert_eq!(
            IntMatrix::from_i64(&[&[0, 1], &[0, 0]]).pseudodeterminant().unwrap(),
            BigInt::one()
        );
        assert_eq!(IntMatrix::zeros(0, 0).pseudodeterminant().unwrap(), BigInt::one());

        // |pdet(M^n)| = |pdet(M)|^n
        let m = IntMatrix::from_i64(&[&[2, 3], &[2, 0]]);
        let p1 = m.pseudodeterminant().unwrap();
        let p3 = m.pow(3).pseudodeterminant().unwrap();
        assert_eq!(p3.magnitude(), &p1.magnitude().pow(3));
    }

    #[test]
    fn nilpotency() {
        assert!(IntMatrix::from_i64(&[&[0, 1], &[0, 0]]).is_nilpotent().unwrap());
        assert!(!IntMatrix::from_i64(&[&[1, 1], &[1, 1]]).is_nilpotent().unwrap());
        assert!(IntMatrix::zeros(0, 0).is_nilpotent().unwrap());
        assert!(!IntMatrix::from_i64(&[&[1]]).is_nilpotent().unwrap());
    }

    #[test]
    fn primitivity() {
        assert!(IntMatrix::from_i64(&[&[1, 1], &[1, 1]]).is_primitive().unwrap());
        assert!(!IntMatrix::identity(2).is_primitive().unwrap());
        let tedious = IntMatrix::incidence(&sub("0 -> 12\n1 -> 22\n2 -> 33\n3 -> 00\n"));
        assert!(tedious.is_primitive().unwrap());

        // 0 -> 01, 1 -> 1: the letter 0 never appears in images of 1
        assert!(!IntMatrix::from_i64(&[&[1, 0], &[1, 1]]).is_primitive().unwrap());

        assert!(!IntMatrix::from_i64(&[&[0]]).is_primitive().unwrap());
        assert!(IntMatrix::from_i64(&[&[3]]).is_primitive().unwrap());

        assert!(matches!(
            IntMatrix::from_i64(&[&[1, -1], &[1, 1]]).is_primitive(),
            Err(Error::NegativeEntry { row: 0, col: 1 })
        ));
    }

    #[test]
    fn reduction_and_rank() {
        let m = IntMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let m2 = m.reduce_mod(2).unwrap();
        assert_eq!(m2.get(0, 0), 1);
        assert_eq!(m2.rank(), 1);
        assert!(m2.pow(2).is_zero());

        let m3 = m.reduce_mod(3).unwrap();
        assert_eq!(m3.pow(2).rank(), 1);

        assert!(m.reduce_mod(6).is_err());

        let neg = IntMatrix::from_i64(&[&[-1, 2], &[0, 1]]);
        assert_eq!(neg.reduce_mod(3).unwrap().get(0, 0), 2);

        assert_eq!(IntMatrix::identity(3).reduce_mod(5).unwrap().rank(), 3);
        assert_eq!(IntMatrix::zeros(2, 2).reduce_mod(5).unwrap().rank(), 0);
    }

    #[test]
    fn mod_char_poly_matches_reduced_int_char_poly() {
        let m = IntMatrix::from_i64(&[&[2, 3], &[2, 0]]);
        let direct = m.reduce_mod(5).unwrap().char_poly().unwrap();
        let reduced = m.char_poly().unwrap().reduce_mod(5).unwrap();
        assert_eq!(direct, reduced);
    }

    #[test]
    fn display_aligns_columns() {
        let m = IntMatrix::from_i64(&[&[10, 2], &[3, 400]]);
        assert_eq!(m.to_string(), "[10    2]\n[ 3  400]\n");
    }
}
