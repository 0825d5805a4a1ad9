//! The factor language of a primitive substitution: factor enumeration,
//! factor complexity, periodicity classification, and structural flags.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::words::{Letter, Substitution, Word};

/// All factors of the shift language up to a fixed length, grouped by
/// length. The set is factor-closed and every member shorter than the
/// maximum extends to a member one letter longer.
#[derive(Clone, Debug)]
pub struct FactorSet {
    max_len: usize,
    by_len: Vec<BTreeSet<Word>>,
}

impl FactorSet {
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of factors of the given length; the empty word counts once.
    pub fn count(&self, len: usize) -> usize {
        if len == 0 {
            return 1;
        }
        assert!(len <= self.max_len, "length {} beyond enumerated bound {}", len, self.max_len);
        self.by_len[len - 1].len()
    }

    /// Factors of one exact length, in lexicographic order.
    pub fn of_length(&self, len: usize) -> impl Iterator<Item = &Word> {
        assert!(
            len >= 1 && len <= self.max_len,
            "length {} beyond enumerated bound {}",
            len,
            self.max_len
        );
        self.by_len[len - 1].iter()
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        if w.is_empty() {
            return true;
        }
        w.len() <= self.max_len && self.by_len[w.len() - 1].contains(&Word::new(w.to_vec()))
    }

    fn insert_factors_of(&mut self, w: &[Letter]) {
        for len in 1..=self.max_len.min(w.len()) {
            for window in w.windows(len) {
                self.by_len[len - 1].insert(Word::new(window.to_vec()));
            }
        }
    }

}

/// True iff the incidence matrix is primitive, so every letter eventually
/// occurs in every iterated image.
pub fn is_primitive_substitution(s: &Substitution) -> bool {
    IntMatrix::incidence(s).is_primitive().expect("incidence matrices are non-negative")
}

/// Letter on a cycle of the first-letter map, with the cycle length.
fn first_letter_cycle(s: &Substitution) -> (Letter, usize) {
    let f = s.first_letter_map();
    let mut seen = vec![usize::MAX; s.size()];
    let mut x = 0;
    let mut step = 0;
    loop {
        if seen[x] != usize::MAX {
            return (x, step - seen[x]);
        }
        seen[x] = step;
        x = f[x];
        step += 1;
    }
}

/// All factors of length at most `n` of the shift language.
///
/// Works with a power psi of the substitution whose iterates from a fixed
/// letter are nested prefixes of a one-sided fixed point; by minimality its
/// factors are exactly the language. Every length-n factor of psi(w) lies
/// in the psi-image of a length-n factor of w, so closing the length-n
/// factors of a long enough prefix under psi yields them all; shorter
/// factors are their subwords.
pub fn factors_up_to(s: &Substitution, n: usize) -> Result<FactorSet> {
    assert!(n >= 1, "factor bound must be positive");
    if !is_primitive_substitution(s) {
        return Err(Error::NotPrimitive);
    }
    let mut set = FactorSet { max_len: n, by_len: vec![BTreeSet::new(); n] };
    if s.size() == 1 {
        set.insert_factors_of(&vec![0; n]);
        return Ok(set);
    }
    let (a, q) = first_letter_cycle(s);
    let mut psi = s.power(q)?;
    // Primitivity on >= 2 letters forces growth of iterated images.
    while psi.image(a).len() < 2 {
        psi = psi.power(2)?;
    }
    let mut seed = Word::new(vec![a]);
    while seed.len() < n {
        seed = psi.apply(&seed);
    }
    let mut top: BTreeSet<Word> = seed.windows(n).map(|w| Word::new(w.to_vec())).collect();
    let mut frontier: Vec<Word> = top.iter().cloned().collect();
    while let Some(v) = frontier.pop() {
        let image = psi.apply(&v);
        for win in image.windows(n) {
            let w = Word::new(win.to_vec());
            if top.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    for w in &top {
        set.insert_factors_of(w);
    }
    Ok(set)
}

/// Factor complexity p(n), the number of distinct length-n factors.
pub fn complexity(s: &Substitution, n: usize) -> Result<usize> {
    if n == 0 {
        if !is_primitive_substitution(s) {
            return Err(Error::NotPrimitive);
        }
        return Ok(1);
    }
    Ok(factors_up_to(s, n)?.count(n))
}

/// Outcome of the periodicity scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Periodicity {
    /// The shift is a single periodic orbit; carries the lexicographically
    /// least word of minimal period.
    Periodic(Word),
    Aperiodic,
    /// The scan was inconclusive at a user-lowered bound.
    Unknown { bound: usize },
}

/// Bound at which the complexity scan is decisive.
pub fn default_periodicity_bound(s: &Substitution) -> usize {
    let m = s.max_image_len();
    s.size() * m * m + m
}

/// Classifies the shift of a primitive substitution as periodic or
/// aperiodic by scanning factor complexity: p(n) <= n for some n forces a
/// periodic orbit whose minimal period is that p(n), and complexity must
/// stall below the default bound in every periodic case.
pub fn classify_periodicity(s: &Substitution, bound: Option<usize>) -> Result<Periodicity> {
    let decisive = default_periodicity_bound(s);
    let b = bound.unwrap_or(decisive);
    assert!(b >= 1, "periodicity bound must be positive");
    let factors = factors_up_to(s, b)?;
    for n in 1..=b {
        let p = factors.count(n);
        if p <= n {
            let word = factors.of_length(p).next().expect("periodic language is non-empty");
            return Ok(Periodicity::Periodic(word.clone()));
        }
    }
    if b >= decisive {
        Ok(Periodicity::Aperiodic)
    } else {
        Ok(Periodicity::Unknown { bound: b })
    }
}

/// Shape flags read off the images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralFlags {
    /// Some iterate sends every letter to a word starting with one common
    /// letter and ending with another.
    pub proper: bool,
    /// Common image length, when all images have one.
    pub constant_length: Option<usize>,
}

/// Computes the structural flags; properness is decided by iterating the
/// first-letter and last-letter maps, which become constant within 2|A|
/// steps if they ever do.
pub fn structural_flags(s: &Substitution) -> StructuralFlags {
    let f = s.first_letter_map();
    let g = s.last_letter_map();
    let mut fk = f.clone();
    let mut gk = g.clone();
    let mut proper = false;
    for _ in 0..2 * s.size() {
        let f_const = fk.iter().all(|&x| x == fk[0]);
        let g_const = gk.iter().all(|&x| x == gk[0]);
        if f_const && g_const {
            proper = true;
            break;
        }
        fk = fk.iter().map(|&x| f[x]).collect();
        gk = gk.iter().map(|&x| g[x]).collect();
    }
    StructuralFlags { proper, constant_length: s.constant_length() }
}
