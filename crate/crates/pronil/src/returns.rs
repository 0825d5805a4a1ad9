//! Connections, return words, and return substitutions: how a designated
//! seed word reappears along the shift, and the substitution induced on the
//! gaps between consecutive appearances.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lang::{factors_up_to, is_primitive_substitution};
use crate::words::{Alphabet, Letter, Substitution, Word};

/// Environment variable overriding the ray emission cap.
pub const RAY_LIMIT_VAR: &str = "PRONIL_RAY_LIMIT";
const DEFAULT_RAY_LIMIT: u64 = 1 << 31;

fn ray_limit() -> Result<u64> {
    match std::env::var(RAY_LIMIT_VAR) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::Precondition(format!("{RAY_LIMIT_VAR} must be a positive integer, got {text:?}"))
        }),
        Err(_) => Ok(DEFAULT_RAY_LIMIT),
    }
}

/// A pair of non-empty words (u, v) with uv in the language, u a suffix of
/// its own n-th iterated image and v a prefix of its own; the order n is
/// minimal with this property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    u: Word,
    v: Word,
    order: usize,
}

impl Connection {
    /// Validates the pair against the substitution and computes its order.
    pub fn identify(s: &Substitution, u: Word, v: Word) -> Result<Connection> {
        if u.is_empty() || v.is_empty() {
            return Err(Error::InvalidConnection("connection words must be non-empty".into()));
        }
        if u.iter().chain(v.iter()).any(|&a| a >= s.size()) {
            return Err(Error::InvalidConnection("letter outside the alphabet".into()));
        }
        let uv: Vec<Letter> = u.iter().chain(v.iter()).copied().collect();
        let factors = factors_up_to(s, uv.len())?;
        if !factors.contains(&uv) {
            return Err(Error::InvalidConnection(format!(
                "{}{} is not a factor of the shift language",
                u.display(s.alphabet()),
                v.display(s.alphabet())
            )));
        }
        match connection_order(s, &u, &v) {
            Some(order) => Ok(Connection { u, v, order }),
            None => Err(Error::InvalidConnection(format!(
                "no iterate of the substitution fixes ({}, {}) as suffix and prefix",
                u.display(s.alphabet()),
                v.display(s.alphabet())
            ))),
        }
    }

    pub fn u(&self) -> &Word {
        &self.u
    }

    pub fn v(&self) -> &Word {
        &self.v
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// Least k with phi^k(u) ending in u and phi^k(v) starting with v, if any.
///
/// The length-|u| suffix of phi^k(u) is a function of the previous suffix
/// alone (images are non-empty), and likewise for prefixes, so the scan
/// walks a finite state space and a repeated state without a hit is a
/// proof of absence.
fn connection_order(s: &Substitution, u: &Word, v: &Word) -> Option<usize> {
    let mut su = u.clone();
    let mut pv = v.clone();
    let mut seen: HashMap<(Word, Word), usize> = HashMap::new();
    for k in 1.. {
        let iu = s.apply(&su);
        su = Word::new(iu[iu.len() - u.len()..].to_vec());
        let iv = s.apply(&pv);
        pv = Word::new(iv[..v.len()].to_vec());
        if &su == u && &pv == v {
            return Some(k);
        }
        if seen.insert((su.clone(), pv.clone()), k).is_some() {
            return None;
        }
    }
    unreachable!("the state scan terminates by cycle detection")
}

/// All connections with components of length at most `max_word_len`,
/// sorted by total length and then lexicographically.
pub fn find_connections(s: &Substitution, max_word_len: usize) -> Result<Vec<Connection>> {
    assert!(max_word_len >= 1, "connection length bound must be positive");
    let factors = factors_up_to(s, 2 * max_word_len)?;
    let mut found = Vec::new();
    for lu in 1..=max_word_len {
        for u in factors.of_length(lu) {
            for lv in 1..=max_word_len {
                for v in factors.of_length(lv) {
                    let uv: Vec<Letter> = u.iter().chain(v.iter()).copied().collect();
                    if !factors.contains(&uv) {
                        continue;
                    }
                    if let Some(order) = connection_order(s, u, v) {
                        found.push(Connection { u: u.clone(), v: v.clone(), order });
                    }
                }
            }
        }
    }
    found.sort_by(|a, b| {
        (a.u.len() + a.v.len(), &a.u, &a.v).cmp(&(b.u.len() + b.v.len(), &b.u, &b.v))
    });
    Ok(found)
}

/// Lazily emits the one-sided fixed point lim psi^k(v).
///
/// The fixed point telescopes as v w psi(w) psi^2(w) ... where psi(v) = vw;
/// each segment is expanded depth-first from its letters, so memory stays
/// proportional to expansion depth rather than emitted length.
struct Ray {
    images: Vec<Vec<Letter>>,
    pending_v: Vec<Letter>,
    tail: Vec<Letter>,
    stack: Vec<(Letter, u32)>,
    next_depth: u32,
    emitted: u64,
    limit: u64,
}

impl Ray {
    fn new(psi: &Substitution, v: &Word, limit: u64) -> Result<Ray> {
        let mut grow = psi.clone();
        let mut rounds = 0;
        while grow.apply(v).len() == v.len() {
            grow = grow.power(2)?;
            rounds += 1;
            if rounds > 64 {
                return Err(Error::Precondition(
                    "iterated images of the connection word do not grow".into(),
                ));
            }
        }
        let gv = grow.apply(v);
        let tail = gv[v.len()..].to_vec();
        let images = (0..grow.size()).map(|a| grow.image(a).to_vec()).collect();
        let mut pending_v: Vec<Letter> = v.to_vec();
        pending_v.reverse();
        Ok(Ray { images, pending_v, tail, stack: Vec::new(), next_depth: 0, emitted: 0, limit })
    }

    fn next_letter(&mut self) -> Result<Letter> {
        if self.emitted >= self.limit {
            return Err(Error::RayLimit { limit: self.limit, var: RAY_LIMIT_VAR });
        }
        self.emitted += 1;
        if let Some(a) = self.pending_v.pop() {
            return Ok(a);
        }
        loop {
            while let Some((a, d)) = self.stack.pop() {
                if d == 0 {
                    return Ok(a);
                }
                for &b in self.images[a].iter().rev() {
                    self.stack.push((b, d - 1));
                }
            }
            for &a in self.tail.iter().rev() {
                self.stack.push((a, self.next_depth));
            }
            self.next_depth += 1;
        }
    }
}

/// Streaming matcher reporting pattern occurrences.
struct Kmp {
    pat: Vec<Letter>,
    fail: Vec<usize>,
    state: usize,
}

impl Kmp {
    fn new(pat: Vec<Letter>) -> Kmp {
        let mut fail = vec![0; pat.len()];
        for i in 1..pat.len() {
            let mut k = fail[i - 1];
            while k > 0 && pat[i] != pat[k] {
                k = fail[k - 1];
            }
            if pat[i] == pat[k] {
                k += 1;
            }
            fail[i] = k;
        }
        Kmp { pat, fail, state: 0 }
    }

    /// Feeds one letter; true iff an occurrence ends here.
    fn feed(&mut self, a: Letter) -> bool {
        while self.state > 0 && self.pat[self.state] != a {
            self.state = self.fail[self.state - 1];
        }
        if self.pat[self.state] == a {
            self.state += 1;
        }
        if self.state == self.pat.len() {
            self.state = self.fail[self.state - 1];
            true
        } else {
            false
        }
    }
}

/// Start positions of all occurrences of `pat` in `text`, in order.
fn occurrences(pat: &[Letter], text: &[Letter]) -> Vec<usize> {
    let mut kmp = Kmp::new(pat.to_vec());
    let mut out = Vec::new();
    for (i, &a) in text.iter().enumerate() {
        if kmp.feed(a) {
            out.push(i + 1 - pat.len());
        }
    }
    out
}

/// A connection together with its return words, ordered by leftmost
/// appearance, and the substitution they carry.
#[derive(Clone, Debug)]
pub struct ReturnData {
    connection: Connection,
    returns: Vec<Word>,
    derived: Substitution,
}

impl ReturnData {
    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    /// Return words over the original alphabet, indexed by derived letter.
    pub fn returns(&self) -> &[Word] {
        &self.returns
    }

    /// The derived substitution on the return alphabet.
    pub fn derived(&self) -> &Substitution {
        &self.derived
    }

    /// The coding homomorphism: concatenates the return words named by a
    /// derived word.
    pub fn theta(&self, w: &[Letter]) -> Word {
        let mut out = Vec::new();
        for &i in w {
            out.extend_from_slice(&self.returns[i]);
        }
        Word::new(out)
    }
}

/// The return words of a valid connection, ordered by leftmost appearance.
pub fn return_words(s: &Substitution, c: &Connection) -> Result<Vec<Word>> {
    return_substitution(s, c).map(|d| d.returns)
}

/// Computes the complete return data of a valid connection.
///
/// The first return word is read off the fixed ray; the full set is its
/// closure under decomposing phi^n-images over known return words (the
/// image of a return word decomposes exactly, and the closure is complete
/// because the derived substitution is primitive); the ordering then comes
/// from first appearances along the ray.
pub fn return_substitution(s: &Substitution, c: &Connection) -> Result<ReturnData> {
    let fresh = Connection::identify(s, c.u.clone(), c.v.clone())?;
    if fresh.order != c.order {
        return Err(Error::InvalidConnection(format!(
            "stated order {} but computed order {}",
            c.order, fresh.order
        )));
    }
    let psi = s.power(c.order)?;
    let u = &c.u;
    let v = &c.v;
    let uv: Vec<Letter> = u.iter().chain(v.iter()).copied().collect();

    let mut ray = Ray::new(&psi, v, ray_limit()?)?;
    let mut kmp = Kmp::new(uv.clone());

    // Discovery-indexed state filled by saturation.
    let mut returns: Vec<Word> = Vec::new();
    let mut index: HashMap<Word, usize> = HashMap::new();
    let mut delta: Vec<Vec<usize>> = Vec::new();

    // First-appearance bookkeeping along the ray.
    let mut first_order: Vec<usize> = Vec::new();
    let mut seen: Vec<bool> = Vec::new();

    let mut buf: Vec<Letter> = Vec::new();
    let mut base: u64 = 0;
    let mut pos: u64 = 0;
    let mut prev_occ: Option<u64> = None;

    for &a in u.letters() {
        buf.push(a);
        let matched = kmp.feed(a);
        pos += 1;
        debug_assert!(!matched, "uv is longer than u");
    }

    loop {
        let a = ray.next_letter()?;
        buf.push(a);
        let matched = kmp.feed(a);
        pos += 1;
        if !matched {
            continue;
        }
        let occ = pos - uv.len() as u64;
        match prev_occ {
            None => {
                if occ != 0 {
                    return Err(Error::Internal(
                        "the ray with its left context does not begin at the connection".into(),
                    ));
                }
            }
            Some(prev) => {
                let lo = (prev - base) as usize + u.len();
                let hi = (occ - base) as usize + u.len();
                let r = Word::new(buf[lo..hi].to_vec());
                if returns.is_empty() {
                    saturate(&psi, u, v, &uv, r.clone(), &mut returns, &mut index, &mut delta)?;
                    seen = vec![false; returns.len()];
                }
                let Some(&i) = index.get(&r) else {
                    return Err(Error::Internal(
                        "ray produced a return word outside the closure".into(),
                    ));
                };
                if !seen[i] {
                    seen[i] = true;
                    first_order.push(i);
                    if first_order.len() == returns.len() {
                        break;
                    }
                }
                buf.drain(..(occ - base) as usize);
                base = occ;
            }
        }
        prev_occ = Some(occ);
    }

    // Renumber by first appearance.
    let mut rank = vec![usize::MAX; returns.len()];
    for (new, &old) in first_order.iter().enumerate() {
        rank[old] = new;
    }
    let final_returns: Vec<Word> = first_order.iter().map(|&i| returns[i].clone()).collect();
    let images: Vec<Word> = first_order
        .iter()
        .map(|&i| Word::new(delta[i].iter().map(|&j| rank[j]).collect()))
        .collect();
    let derived = Substitution::new(Alphabet::of_size(final_returns.len()), images)?;

    let data = ReturnData { connection: c.clone(), returns: final_returns, derived };
    for i in 0..data.returns.len() {
        if data.theta(data.derived.image(i)) != psi.apply(&data.returns[i]) {
            return Err(Error::Internal("return decomposition fails the defining equation".into()));
        }
    }
    if !is_primitive_substitution(&data.derived) {
        return Err(Error::Internal("derived substitution is not primitive".into()));
    }
    Ok(data)
}

/// Closes a first return word under image decomposition, recording each
/// image as a word over the discovered return indices.
#[allow(clippy::too_many_arguments)]
fn saturate(
    psi: &Substitution,
    u: &Word,
    v: &Word,
    uv: &[Letter],
    r0: Word,
    returns: &mut Vec<Word>,
    index: &mut HashMap<Word, usize>,
    delta: &mut Vec<Vec<usize>>,
) -> Result<()> {
    index.insert(r0.clone(), 0);
    returns.push(r0);
    delta.push(Vec::new());
    let mut work = vec![0];
    while let Some(i) = work.pop() {
        let image = psi.apply(&returns[i]);
        let mut z: Vec<Letter> = u.to_vec();
        z.extend_from_slice(&image);
        z.extend_from_slice(v);
        let occs = occurrences(uv, &z);
        if occs.first() != Some(&0) || occs.last() != Some(&image.len()) {
            return Err(Error::Internal(
                "image of a return word does not decompose between connections".into(),
            ));
        }
        let mut img = Vec::with_capacity(occs.len() - 1);
        for w in occs.windows(2) {
            let r = Word::new(z[w[0] + u.len()..w[1] + u.len()].to_vec());
            let j = *index.entry(r.clone()).or_insert_with(|| {
                returns.push(r);
                delta.push(Vec::new());
                work.push(returns.len() - 1);
                returns.len() - 1
            });
            img.push(j);
        }
        delta[i] = img;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(text: &str) -> Substitution {
        Substitution::parse(text).unwrap()
    }

    fn word(s: &Substitution, text: &str) -> Word {
        let letters = text
            .chars()
            .map(|c| s.alphabet().index_of(&c.to_string()).unwrap())
            .collect::<Vec<_>>();
        Word::new(letters)
    }

    fn rules(s: &Substitution) -> Vec<String> {
        (0..s.size()).map(|a| s.image(a).display(s.alphabet())).collect()
    }

    #[test]
    fn morse_connections_all_have_order_two() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        let conns = find_connections(&tau, 1).unwrap();
        assert_eq!(conns.len(), 4);
        assert!(conns.iter().all(|c| c.order() == 2));
        let pairs: Vec<(String, String)> = conns
            .iter()
            .map(|c| (c.u().display(tau.alphabet()), c.v().display(tau.alphabet())))
            .collect();
        let expect = [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")];
        assert_eq!(pairs, expect.map(|(a, b)| (a.to_string(), b.to_string())));
    }

    #[test]
    fn connection_orders_of_the_examples() {
        let neg = sub("0 -> 120\n1 -> 121\n2 -> 200\n");
        let c = Connection::identify(&neg, word(&neg, "0"), word(&neg, "1")).unwrap();
        assert_eq!(c.order(), 1);

        let tedious = sub("0 -> 12\n1 -> 22\n2 -> 33\n3 -> 00\n");
        let c = Connection::identify(&tedious, word(&tedious, "2"), word(&tedious, "3")).unwrap();
        assert_eq!(c.order(), 12);

        let cyclo = sub("0 -> 010\n1 -> 21\n2 -> 102\n");
        let c10 = Connection::identify(&cyclo, word(&cyclo, "1"), word(&cyclo, "0")).unwrap();
        assert_eq!(c10.order(), 1);
        let c01 = Connection::identify(&cyclo, word(&cyclo, "0"), word(&cyclo, "1")).unwrap();
        assert_eq!(c01.order(), 2);
    }

    #[test]
    fn invalid_connections_are_rejected() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        assert!(matches!(
            Connection::identify(&tau, word(&tau, "00"), word(&tau, "0")),
            Err(Error::InvalidConnection(_))
        ));

        let fib = sub("0 -> 01\n1 -> 0\n");
        assert!(matches!(
            Connection::identify(&fib, word(&fib, "0"), word(&fib, "1")),
            Err(Error::InvalidConnection(_))
        ));

        let c = Connection::identify(&tau, word(&tau, "0"), word(&tau, "1")).unwrap();
        assert!(matches!(
            return_substitution(&fib, &c),
            Err(Error::InvalidConnection(_))
        ));
    }

    #[test]
    fn morse_return_substitution_matches_the_known_presentation() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        let c = Connection::identify(&tau, word(&tau, "0"), word(&tau, "1")).unwrap();
        let data = return_substitution(&tau, &c).unwrap();
        let ret: Vec<String> =
            data.returns().iter().map(|r| r.display(tau.alphabet())).collect();
        assert_eq!(ret, ["100", "10", "1100", "110"]);
        assert_eq!(rules(data.derived()), ["0123", "013", "02123", "0213"]);
    }

    #[test]
    fn negative_example_return_substitution() {
        let neg = sub("0 -> 120\n1 -> 121\n2 -> 200\n");
        let c = Connection::identify(&neg, word(&neg, "0"), word(&neg, "1")).unwrap();
        let data = return_substitution(&neg, &c).unwrap();
        let ret: Vec<String> =
            data.returns().iter().map(|r| r.display(neg.alphabet())).collect();
        assert_eq!(ret, ["121200", "120"]);
        assert_eq!(rules(data.derived()), ["0011", "01"]);
    }

    #[test]
    fn unimodular_example_return_substitution() {
        let cyclo = sub("0 -> 010\n1 -> 21\n2 -> 102\n");
        let c = Connection::identify(&cyclo, word(&cyclo, "1"), word(&cyclo, "0")).unwrap();
        let data = return_substitution(&cyclo, &c).unwrap();
        assert_eq!(rules(data.derived()), ["01", "002", "0012"]);
    }

    #[test]
    fn weak_test_example_return_substitution() {
        let s = sub("0 -> 1001\n1 -> 000\n");
        let c = Connection::identify(&s, word(&s, "0"), word(&s, "0")).unwrap();
        assert_eq!(c.order(), 2);
        let data = return_substitution(&s, &c).unwrap();
        assert_eq!(
            rules(data.derived()),
            ["0012100", "0012101221012100", "0012101222221012100"]
        );
    }

    #[test]
    fn tedious_example_return_words() {
        let s = sub("0 -> 12\n1 -> 22\n2 -> 33\n3 -> 00\n");
        let c = Connection::identify(&s, word(&s, "2"), word(&s, "3")).unwrap();
        assert_eq!(c.order(), 12);
        let data = return_substitution(&s, &c).unwrap();
        assert_eq!(data.returns().len(), 12);
        let lens: Vec<usize> = data.returns().iter().map(Word::len).collect();
        assert_eq!(lens.iter().min(), Some(&4));
        assert_eq!(lens.iter().max(), Some(&274));
    }

    #[test]
    fn conjugacy_equation_holds_on_short_derived_words() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        let c = Connection::identify(&tau, word(&tau, "0"), word(&tau, "1")).unwrap();
        let data = return_substitution(&tau, &c).unwrap();
        let psi = tau.power(c.order()).unwrap();
        let d = data.derived().size();
        for a in 0..d {
            for b in 0..d {
                for e in 0..d {
                    let w = Word::new(vec![a, b, e]);
                    let lhs = data.theta(&data.derived().apply(&w));
                    let rhs = psi.apply(&data.theta(&w));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn return_words_form_a_code() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        let c = Connection::identify(&tau, word(&tau, "0"), word(&tau, "1")).unwrap();
        let data = return_substitution(&tau, &c).unwrap();
        // all concatenations of derived words up to length 3 are distinct
        let d = data.derived().size();
        let mut seen = std::collections::HashSet::new();
        let mut words = vec![Vec::new()];
        for _ in 0..3 {
            let mut next = Vec::new();
            for w in &words {
                for a in 0..d {
                    let mut e = w.clone();
                    e.push(a);
                    assert!(
                        seen.insert(data.theta(&e).letters().to_vec()),
                        "theta is not injective"
                    );
                    next.push(e);
                }
            }
            words = next;
        }
    }

    #[test]
    fn ordering_agrees_with_a_materialized_prefix() {
        for text in ["0 -> 01\n1 -> 10\n", "0 -> 120\n1 -> 121\n2 -> 200\n"] {
            let s = sub(text);
            let conns = find_connections(&s, 1).unwrap();
            for c in &conns {
                let data = return_substitution(&s, c).unwrap();
                // naive scan of u . psi^3(v)
                let psi = s.power(c.order()).unwrap();
                let mut y: Vec<Letter> = c.u().to_vec();
                y.extend_from_slice(&psi.apply_power(c.v(), 3));
                let uv: Vec<Letter> =
                    c.u().iter().chain(c.v().iter()).copied().collect();
                let occs = occurrences(&uv, &y);
                let mut naive: Vec<Word> = Vec::new();
                for w in occs.windows(2) {
                    let r = Word::new(y[w[0] + c.u().len()..w[1] + c.u().len()].to_vec());
                    if !naive.contains(&r) {
                        naive.push(r);
                    }
                }
                let prefix_len = naive.len().min(data.returns().len());
                assert_eq!(&naive[..prefix_len], &data.returns()[..prefix_len]);
            }
        }
    }

    #[test]
    fn ray_limit_is_reported() {
        let tau = sub("0 -> 01\n1 -> 10\n");
        let c = Connection::identify(&tau, word(&tau, "0"), word(&tau, "1")).unwrap();
        let psi = tau.power(c.order()).unwrap();
        let mut ray = Ray::new(&psi, c.v(), 5).unwrap();
        for _ in 0..5 {
            ray.next_letter().unwrap();
        }
        assert!(matches!(
            ray.next_letter(),
            Err(Error::RayLimit { limit: 5, var: RAY_LIMIT_VAR })
        ));
    }

    #[test]
    fn ray_matches_iterated_images() {
        let cyclo = sub("0 -> 010\n1 -> 21\n2 -> 102\n");
        let v = Word::new(vec![0]);
        let mut ray = Ray::new(&cyclo, &v, 1 << 20).unwrap();
        let expect = cyclo.apply_power(&v, 5);
        for i in 0..expect.len() {
            assert_eq!(ray.next_letter().unwrap(), expect[i], "position {}", i);
        }
    }
}
