//! Words, substitutions and free-group endomorphisms.
//!
//! Letters are dense indices into an [`Alphabet`]. A [`Substitution`] maps
//! letters to non-empty positive words, a [`FreeGroupEndo`] maps letters to
//! reduced group words over the same alphabet. Both parse from a shared rule
//! format: one `<symbol> -> <symbols>` rule per line, `#` comments, symbols
//! either single code points or backtick-quoted names, and (for endomorphisms
//! only) a `'` suffix marking an inverse letter.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Index of a letter inside an [`Alphabet`].
pub type Letter = usize;

/// A finite alphabet with display names for its letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Alphabet of `n` letters named `0`, `1`, ... in decimal.
    pub fn of_size(n: usize) -> Self {
        Alphabet { names: (0..n).map(|i| i.to_string()).collect() }
    }

    /// Alphabet with explicit letter names, which must be unique, non-empty
    /// and free of whitespace and backticks.
    pub fn with_names(names: Vec<String>) -> Result<Self> {
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Precondition("empty letter name".into()));
            }
            if name.chars().any(|c| c.is_whitespace() || c == '`') {
                return Err(Error::Precondition(format!(
                    "letter name {name:?} contains whitespace or a backtick"
                )));
            }
            if names[..i].contains(name) {
                return Err(Error::Precondition(format!("duplicate letter name {name:?}")));
            }
        }
        Ok(Alphabet { names })
    }

    /// Number of letters.
    pub fn size(&self) -> usize {
        self.names.len()
    }

    /// Display name of a letter.
    pub fn name(&self, a: Letter) -> &str {
        &self.names[a]
    }

    /// All display names in letter order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Letter with the given name, if any.
    pub fn index_of(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name)
    }

    /// True when every letter name is a single code point, so words can be
    /// displayed without separators.
    pub fn all_single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Name quoted with backticks whenever the rule format requires it.
    pub fn quoted_name(&self, a: Letter) -> String {
        quote_symbol(self.name(a))
    }
}

fn quote_symbol(name: &str) -> String {
    let single = name.chars().count() == 1;
    let safe = single && !matches!(name.chars().next().unwrap(), '\'' | '#' | '-' | '>');
    if safe {
        name.to_string()
    } else {
        format!("`{name}`")
    }
}

/// A finite word: a sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn push(&mut self, a: Letter) {
        self.letters.push(a);
    }

    /// Renders the word using the alphabet's names: concatenated when all
    /// names are single code points, space-separated otherwise.
    pub fn display(&self, ab: &Alphabet) -> String {
        if ab.all_single_char() {
            self.letters.iter().map(|&a| ab.name(a)).collect()
        } else {
            self.letters.iter().map(|&a| ab.name(a)).collect::<Vec<_>>().join(" ")
        }
    }
}

impl std::ops::Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.letters
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word { letters }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word { letters: iter.into_iter().collect() }
    }
}

/// Number of (possibly overlapping) occurrences of `z` in `w`.
///
/// The pattern must be non-empty; `count_occurrences("000", "00")` is 2.
pub fn count_occurrences(w: &[Letter], z: &[Letter]) -> Result<usize> {
    if z.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if w.len() < z.len() {
        return Ok(0);
    }
    Ok((0..=w.len() - z.len()).filter(|&i| &w[i..i + z.len()] == z).count())
}

/// A substitution: a monoid endomorphism of `A*` sending every letter to a
/// non-empty word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Substitution {
    /// Builds a substitution, checking that there is one non-empty image per
    /// letter and that all image letters are in range.
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.size() {
            return Err(Error::Precondition(format!(
                "expected {} images, got {}",
                alphabet.size(),
                images.len()
            )));
        }
        for (a, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::Precondition(format!(
                    "empty image for letter {}",
                    alphabet.name(a)
                )));
            }
            if let Some(&b) = img.iter().find(|&&b| b >= alphabet.size()) {
                return Err(Error::Precondition(format!("letter index {b} out of range")));
            }
        }
        Ok(Substitution { alphabet, images })
    }

    /// Parses the rule format described in the module docs.
    pub fn parse(text: &str) -> Result<Self> {
        let rules = parse_rules(text, false)?;
        let alphabet = Alphabet::with_names(rules.names)?;
        let mut images = Vec::with_capacity(alphabet.size());
        for (line, rhs) in rules.images {
            if rhs.is_empty() {
                return Err(Error::Parse { line, msg: "empty image".into() });
            }
            images.push(Word::new(rhs.into_iter().map(|(a, _)| a).collect()));
        }
        Substitution::new(alphabet, images)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Alphabet size.
    pub fn size(&self) -> usize {
        self.alphabet.size()
    }

    pub fn image(&self, a: Letter) -> &Word {
        &self.images[a]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Image of a word under one application.
    pub fn apply(&self, w: &[Letter]) -> Word {
        let len: usize = w.iter().map(|&a| self.images[a].len()).sum();
        let mut out = Vec::with_capacity(len);
        for &a in w {
            out.extend_from_slice(self.images[a].letters());
        }
        Word::new(out)
    }

    /// Image of a word under `n` applications; `n = 0` is the identity.
    pub fn apply_power(&self, w: &[Letter], n: usize) -> Word {
        let mut cur = Word::new(w.to_vec());
        for _ in 0..n {
            cur = self.apply(&cur);
        }
        cur
    }

    /// Composition `self . inner` (first `inner`, then `self`).
    pub fn compose(&self, inner: &Substitution) -> Result<Substitution> {
        if self.alphabet != inner.alphabet {
            return Err(Error::Precondition("composition needs a common alphabet".into()));
        }
        let images = inner.images.iter().map(|img| self.apply(img)).collect();
        Substitution::new(self.alphabet.clone(), images)
    }

    /// The substitution applied `n` times, `n >= 1`, computed by repeated
    /// squaring.
    pub fn power(&self, n: usize) -> Result<Substitution> {
        if n == 0 {
            return Err(Error::Precondition("power needs n >= 1".into()));
        }
        let mut result: Option<Substitution> = None;
        let mut base = self.clone();
        let mut n = n;
        loop {
            if n & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => base.compose(&r)?,
                });
            }
            n >>= 1;
            if n == 0 {
                return Ok(result.unwrap());
            }
            base = base.compose(&base)?;
        }
    }

    /// `Some(k)` when every image has the same length `k`.
    pub fn constant_length(&self) -> Option<usize> {
        let k = self.images[0].len();
        self.images.iter().all(|img| img.len() == k).then_some(k)
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Maps each letter to the first letter of its image.
    pub fn first_letter_map(&self) -> Vec<Letter> {
        self.images.iter().map(|img| img[0]).collect()
    }

    /// Maps each letter to the last letter of its image.
    pub fn last_letter_map(&self) -> Vec<Letter> {
        self.images.iter().map(|img| img[img.len() - 1]).collect()
    }

    /// Rules in the parseable text format; `parse` of the result rebuilds an
    /// identical substitution.
    pub fn rules_text(&self) -> String {
        let mut out = String::new();
        for a in 0..self.size() {
            let rhs: Vec<String> =
                self.images[a].iter().map(|&b| self.alphabet.quoted_name(b)).collect();
            let _ = writeln!(out, "{} -> {}", self.alphabet.quoted_name(a), rhs.join(" "));
        }
        out
    }
}

/// A letter or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedLetter {
    pub letter: Letter,
    pub inverse: bool,
}

impl SignedLetter {
    pub fn plain(letter: Letter) -> Self {
        SignedLetter { letter, inverse: false }
    }

    pub fn inverted(letter: Letter) -> Self {
        SignedLetter { letter, inverse: true }
    }

    pub fn flipped(self) -> Self {
        SignedLetter { letter: self.letter, inverse: !self.inverse }
    }
}

fn push_reduced(stack: &mut Vec<SignedLetter>, f: SignedLetter) {
    if stack.last() == Some(&f.flipped()) {
        stack.pop();
    } else {
        stack.push(f);
    }
}

/// A reduced word in the free group over an alphabet.
///
/// The reduction invariant (no letter adjacent to its inverse) holds for
/// every value of this type; constructors reduce their input.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    factors: Vec<SignedLetter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    /// Reduces an arbitrary factor sequence. Reduction is idempotent, so
    /// feeding an already reduced word back in returns it unchanged.
    pub fn from_factors<I: IntoIterator<Item = SignedLetter>>(factors: I) -> Self {
        let mut stack = Vec::new();
        for f in factors {
            push_reduced(&mut stack, f);
        }
        GroupWord { factors: stack }
    }

    /// Embeds a positive word.
    pub fn from_positive(w: &[Letter]) -> Self {
        GroupWord { factors: w.iter().map(|&a| SignedLetter::plain(a)).collect() }
    }

    pub fn factors(&self) -> &[SignedLetter] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord { factors: self.factors.iter().rev().map(|f| f.flipped()).collect() }
    }

    /// Product `self * other`, reduced.
    pub fn concat(&self, other: &Self) -> Self {
        let mut stack = self.factors.clone();
        for &f in &other.factors {
            push_reduced(&mut stack, f);
        }
        GroupWord { factors: stack }
    }

    /// Net exponent of `a`: occurrences of `a` minus occurrences of its
    /// inverse. Additive under concatenation.
    pub fn exponent_sum(&self, a: Letter) -> i64 {
        self.factors
            .iter()
            .filter(|f| f.letter == a)
            .map(|f| if f.inverse { -1 } else { 1 })
            .sum()
    }

    /// Renders with `'` marking inverses, concatenated when all names are
    /// single code points.
    pub fn display(&self, ab: &Alphabet) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| {
                let mut s = ab.name(f.letter).to_string();
                if f.inverse {
                    s.push('\'');
                }
                s
            })
            .collect();
        if ab.all_single_char() {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

/// An endomorphism of the free group over an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGroupEndo {
    alphabet: Alphabet,
    images: Vec<GroupWord>,
}

impl FreeGroupEndo {
    pub fn new(alphabet: Alphabet, images: Vec<GroupWord>) -> Result<Self> {
        if images.len() != alphabet.size() {
            return Err(Error::Precondition(format!(
                "expected {} images, got {}",
                alphabet.size(),
                images.len()
            )));
        }
        for img in &images {
            if let Some(f) = img.factors().iter().find(|f| f.letter >= alphabet.size()) {
                return Err(Error::Precondition(format!(
                    "letter index {} out of range",
                    f.letter
                )));
            }
        }
        Ok(FreeGroupEndo { alphabet, images })
    }

    /// Parses the rule format with `'` allowed as an inverse suffix. Unlike
    /// substitutions, an endomorphism may send a letter to the empty word.
    pub fn parse(text: &str) -> Result<Self> {
        let rules = parse_rules(text, true)?;
        let alphabet = Alphabet::with_names(rules.names)?;
        let images = rules
            .images
            .into_iter()
            .map(|(_, rhs)| {
                GroupWord::from_factors(
                    rhs.into_iter().map(|(a, inv)| SignedLetter { letter: a, inverse: inv }),
                )
            })
            .collect();
        FreeGroupEndo::new(alphabet, images)
    }

    /// The induced endomorphism of the free group of a substitution.
    pub fn from_substitution(s: &Substitution) -> Self {
        FreeGroupEndo {
            alphabet: s.alphabet().clone(),
            images: s.images().iter().map(|img| GroupWord::from_positive(img)).collect(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.size()
    }

    pub fn image(&self, a: Letter) -> &GroupWord {
        &self.images[a]
    }

    pub fn images(&self) -> &[GroupWord] {
        &self.images
    }

    /// Image of a group word, reduced.
    pub fn apply(&self, w: &GroupWord) -> GroupWord {
        let mut stack = Vec::new();
        for f in w.factors() {
            let img = &self.images[f.letter];
            if f.inverse {
                for g in img.factors().iter().rev() {
                    push_reduced(&mut stack, g.flipped());
                }
            } else {
                for &g in img.factors() {
                    push_reduced(&mut stack, g);
                }
            }
        }
        GroupWord { factors: stack }
    }

    /// Image under `n` applications; `n = 0` is the identity.
    pub fn apply_power(&self, w: &GroupWord, n: usize) -> GroupWord {
        let mut cur = w.clone();
        for _ in 0..n {
            cur = self.apply(&cur);
        }
        cur
    }

    /// Composition `self . inner` (first `inner`, then `self`).
    pub fn compose(&self, inner: &FreeGroupEndo) -> Result<FreeGroupEndo> {
        if self.alphabet != inner.alphabet {
            return Err(Error::Precondition("composition needs a common alphabet".into()));
        }
        let images = inner.images.iter().map(|img| self.apply(img)).collect();
        FreeGroupEndo::new(self.alphabet.clone(), images)
    }

    /// Rules in the parseable text format.
    pub fn rules_text(&self) -> String {
        let mut out = String::new();
        for a in 0..self.size() {
            let rhs: Vec<String> = self.images[a]
                .factors()
                .iter()
                .map(|f| {
                    let mut s = self.alphabet.quoted_name(f.letter);
                    if f.inverse {
                        s.push('\'');
                    }
                    s
                })
                .collect();
            let _ = writeln!(out, "{} -> {}", self.alphabet.quoted_name(a), rhs.join(" "));
        }
        out
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Symbol(String),
    Arrow,
    Prime,
}

fn tokenize_line(line: &str, lineno: usize) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '#' => break,
            c if c.is_whitespace() => {}
            '`' => {
                let mut name = String::new();
                loop {
                    match chars.next() {
                        Some('`') => break,
                        Some(c) => name.push(c),
                        None => {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: "unterminated backtick quote".into(),
                            })
                        }
                    }
                }
                if name.is_empty() {
                    return Err(Error::Parse { line: lineno, msg: "empty quoted symbol".into() });
                }
                tokens.push(Token::Symbol(name));
            }
            '\'' => tokens.push(Token::Prime),
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                tokens.push(Token::Arrow);
            }
            c => tokens.push(Token::Symbol(c.to_string())),
        }
    }
    Ok(tokens)
}

struct RawRules {
    names: Vec<String>,
    /// Per letter: source line and the resolved right-hand side.
    images: Vec<(usize, Vec<(Letter, bool)>)>,
}

fn parse_rules(text: &str, allow_inverses: bool) -> Result<RawRules> {
    struct Line {
        lineno: usize,
        lhs: String,
        rhs: Vec<Token>,
    }

    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let mut tokens = tokenize_line(raw, lineno)?.into_iter();
        let Some(first) = tokens.next() else { continue };
        let Token::Symbol(lhs) = first else {
            return Err(Error::Parse { line: lineno, msg: "rule must start with a symbol".into() });
        };
        match tokens.next() {
            Some(Token::Arrow) => {}
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected `->` after symbol {lhs:?}"),
                })
            }
        }
        lines.push(Line { lineno, lhs, rhs: tokens.collect() });
    }
    if lines.is_empty() {
        return Err(Error::Parse { line: 0, msg: "no rules found".into() });
    }

    let mut names: Vec<String> = Vec::new();
    for line in &lines {
        if names.contains(&line.lhs) {
            return Err(Error::Parse {
                line: line.lineno,
                msg: format!("duplicate left-hand side {:?}", line.lhs),
            });
        }
        names.push(line.lhs.clone());
    }

    let mut images = Vec::new();
    for line in &lines {
        let mut rhs: Vec<(Letter, bool)> = Vec::new();
        for token in &line.rhs {
            match token {
                Token::Symbol(name) => {
                    let Some(a) = names.iter().position(|n| n == name) else {
                        return Err(Error::Parse {
                            line: line.lineno,
                            msg: format!("unknown symbol {name:?} on right-hand side"),
                        });
                    };
                    rhs.push((a, false));
                }
                Token::Prime => {
                    if !allow_inverses {
                        return Err(Error::Parse {
                            line: line.lineno,
                            msg: "inverse marker `'` is not allowed in a substitution".into(),
                        });
                    }
                    match rhs.last_mut() {
                        Some((_, inv @ false)) => *inv = true,
                        _ => {
                            return Err(Error::Parse {
                                line: line.lineno,
                                msg: "`'` must follow a symbol".into(),
                            })
                        }
                    }
                }
                Token::Arrow => {
                    return Err(Error::Parse {
                        line: line.lineno,
                        msg: "unexpected `->` in right-hand side".into(),
                    })
                }
            }
        }
        images.push((line.lineno, rhs));
    }

    Ok(RawRules { names, images })
}
