//! Shared oracles for the integration suites: deliberately naive
//! reimplementations used to cross-check the optimized library paths.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use pronil::matrix::IntMatrix;
use pronil::poly::IntPoly;
use pronil::returns::{find_connections, return_substitution, Connection, ReturnData};
use pronil::words::{Alphabet, Letter, Substitution, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PRIMES_TO_97: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Deterministic generator so failures reproduce exactly.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries of an integer matrix reduced into [0, p).
pub fn grid_mod(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let q = BigInt::from(p);
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let r = ((m.get(i, j) % &q) + &q) % &q;
                    r.to_u64().expect("residue fits")
                })
                .collect()
        })
        .collect()
}

/// Schoolbook product over GF(p).
pub fn grid_mul(p: u64, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0u128;
            for k in 0..n {
                acc += a[i][k] as u128 * b[k][j] as u128;
            }
            out[i][j] = (acc % p as u128) as u64;
        }
    }
    out
}

/// Repeated multiplication, no squaring tricks.
pub fn grid_pow(p: u64, m: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let dim = m.len();
    let mut out = vec![vec![0u64; dim]; dim];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = 1 % p;
    }
    for _ in 0..n {
        out = grid_mul(p, &out, m);
    }
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p for prime p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Rank over GF(p) by plain Gaussian elimination.
pub fn gf_rank(p: u64, mut grid: Vec<Vec<u64>>) -> usize {
    let rows = grid.len();
    let cols = if rows == 0 { 0 } else { grid[0].len() };
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| grid[r][col] % p != 0) else {
            continue;
        };
        grid.swap(rank, pivot);
        let inv = inv_mod(grid[rank][col], p);
        for x in grid[rank].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        for r in 0..rows {
            if r != rank && grid[r][col] % p != 0 {
                let f = grid[r][col];
                for c in 0..cols {
                    let sub = f as u128 * grid[rank][c] as u128 % p as u128;
                    grid[r][c] = ((grid[r][c] as u128 + p as u128 * p as u128 - sub)
                        % p as u128) as u64;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn poly_det(rows: &[Vec<IntPoly>]) -> IntPoly {
    let n = rows.len();
    if n == 0 {
        return IntPoly::one();
    }
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut det = IntPoly::zero();
    for j in 0..n {
        let minor: Vec<Vec<IntPoly>> = rows[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = rows[0][j].mul(&poly_det(&minor));
        det = if j % 2 == 0 { det.add(&term) } else { det.sub(&term) };
    }
    det
}

/// det(xI - M) by cofactor expansion; exponential, for cross-checks only.
pub fn minor_char_poly(m: &IntMatrix) -> IntPoly {
    let n = m.rows();
    let entries: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let constant = IntPoly::from_coeffs(vec![-m.get(i, j).clone()]);
                    if i == j {
                        constant.add(&IntPoly::x())
                    } else {
                        constant
                    }
                })
                .collect()
        })
        .collect();
    poly_det(&entries)
}

/// Return words scanned out of an explicit prefix of u . psi^inf(v),
/// listed in order of first occurrence.
pub fn naive_return_words(s: &Substitution, c: &Connection, prefix_len: usize) -> Vec<Word> {
    let psi = s.power(c.order()).expect("power");
    let mut ray: Vec<Letter> = c.v().letters().to_vec();
    while ray.len() < prefix_len {
        let grown = psi.apply(&ray);
        assert!(grown.len() > ray.len(), "ray must grow");
        ray = grown.letters().to_vec();
    }
    ray.truncate(prefix_len);
    let off = c.u().len();
    let mut text: Vec<Letter> = c.u().letters().to_vec();
    text.extend_from_slice(&ray);
    let pattern: Vec<Letter> =
        c.u().letters().iter().chain(c.v().letters()).copied().collect();
    let starts: Vec<usize> = (0..=text.len().saturating_sub(pattern.len()))
        .filter(|&i| text[i..i + pattern.len()] == pattern[..])
        .collect();
    assert!(!starts.is_empty(), "uv must occur");
    let mut out: Vec<Word> = Vec::new();
    for pair in starts.windows(2) {
        let seg = Word::new(text[pair[0] + off..pair[1] + off].to_vec());
        if !out.contains(&seg) {
            out.push(seg);
        }
    }
    out
}

/// Square matrix with entries drawn uniformly from [lo, hi].
pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = (0..dim)
        .map(|_| (0..dim).map(|_| BigInt::from(rng.gen_range(lo..=hi))).collect())
        .collect();
    IntMatrix::from_rows(rows).expect("square")
}

/// Substitution with non-empty images of bounded length.
pub fn random_substitution(rng: &mut ChaCha8Rng, letters: usize, max_img: usize) -> Substitution {
    let images: Vec<Word> = (0..letters)
        .map(|_| {
            let len = rng.gen_range(1..=max_img);
            Word::new((0..len).map(|_| rng.gen_range(0..letters)).collect())
        })
        .collect();
    Substitution::new(Alphabet::of_size(letters), images).expect("valid images")
}

/// dimension_p against an elimination-based rank of M^dim mod p.
pub fn rank_oracle_suite(count: usize) {
    let mut rng = seeded(0x5eed_0001);
    for _ in 0..count {
        let dim = rng.gen_range(1..=6);
        let m = random_matrix(&mut rng, dim, -9, 9);
        let p = PRIMES_TO_97[rng.gen_range(0..PRIMES_TO_97.len())];
        let lib = pronil::analysis::dimension_p(&m, p).expect("dimension");
        let oracle = gf_rank(p, grid_pow(p, &grid_mod(&m, p), dim));
        assert_eq!(lib, oracle, "p={} m={:?}", p, m);
    }
}

/// incidence(s . t) == incidence(s) . incidence(t).
pub fn functoriality_suite(count: usize) {
    let mut rng = seeded(0x5eed_0002);
    for _ in 0..count {
        let letters = rng.gen_range(1..=4);
        let s = random_substitution(&mut rng, letters, 5);
        let t = random_substitution(&mut rng, letters, 5);
        let st = s.compose(&t).expect("same alphabet");
        assert_eq!(
            IntMatrix::incidence(&st),
            IntMatrix::incidence(&s).mul(&IntMatrix::incidence(&t))
        );
    }
}

/// incidence(s^order) . Theta == Theta . incidence(derived), where Theta
/// abelianizes the return words over the original alphabet.
pub fn assert_theta_intertwines(s: &Substitution, data: &ReturnData) {
    let psi = s.power(data.connection().order()).expect("power");
    let psi_m = IntMatrix::incidence(&psi);
    let theta = IntMatrix::incidence_words(s.size(), data.returns());
    let derived_m = IntMatrix::incidence(data.derived());
    assert_eq!(
        psi_m.mul(&theta),
        theta.mul(&derived_m),
        "connection {:?}",
        data.connection()
    );
}

/// Every single-letter connection of every fixture intertwines.
pub fn theta_conjugacy_suite() {
    for rules in [
        "0 -> 01\n1 -> 10\n",
        "0 -> 120\n1 -> 121\n2 -> 200\n",
        "0 -> 1001\n1 -> 000\n",
        "0 -> 010\n1 -> 21\n2 -> 102\n",
        "0 -> 01\n1 -> 0001\n",
    ] {
        let s = Substitution::parse(rules).expect("fixture rules");
        let connections = find_connections(&s, 1).expect("connections");
        assert!(!connections.is_empty(), "{rules:?} has a connection");
        for c in &connections {
            let data = return_substitution(&s, c).expect("return data");
            assert_theta_intertwines(&s, &data);
        }
    }
}

/// rev(rev(q)) == q whenever the constant term is non-zero.
pub fn reciprocal_involution_suite(count: usize) {
    let mut rng = seeded(0x5eed_0003);
    for _ in 0..count {
        let deg = rng.gen_range(0..=6);
        let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
        if coeffs[0] == 0 {
            coeffs[0] = 1 + rng.gen_range(0..=8);
        }
        let q = IntPoly::from_i64(&coeffs);
        let twice = q.reciprocal().expect("non-zero").reciprocal().expect("non-zero");
        assert_eq!(twice, q);
    }
}

/// |pdet(M^n)| == |pdet(M)|^n for n <= 4.
pub fn pdet_power_suite(count: usize) {
    let mut rng = seeded(0x5eed_0004);
    for _ in 0..count {
        let dim = rng.gen_range(1..=4);
        let m = random_matrix(&mut rng, dim, -4, 4);
        let base = m.pseudodeterminant().expect("pdet").abs();
        for n in 1..=4usize {
            let power = m.pow(n).pseudodeterminant().expect("pdet").abs();
            assert_eq!(power, num_traits::pow(base.clone(), n), "n={} m={:?}", n, m);
        }
    }
}
