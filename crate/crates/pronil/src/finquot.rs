//! Finite groups, the right action of free-group endomorphisms on letter
//! labelings, and the search for finite continuous quotients.
//!
//! A finite group H is a continuous quotient of the group presented by an
//! endomorphism exactly when some tuple in H^A generates H and returns to
//! itself after finitely many action steps.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::words::{FreeGroupEndo, GroupWord, SignedLetter};

/// State-space bound under which the search examines every tuple.
pub const EXHAUSTIVE_THRESHOLD: u64 = 1 << 24;

/// Conway polynomials over GF(2), bit i the coefficient of x^i, one per
/// degree 1..=12; each is primitive, which the table constructor verifies.
const CONWAY_BITS: [u32; 12] = [3, 7, 11, 19, 37, 91, 131, 285, 529, 1135, 2053, 4331];

/// GF(2^n) with multiplication through discrete-log tables; the class of x
/// generates the multiplicative group because the modulus is primitive.
#[derive(Clone, Debug)]
pub struct Gf2n {
    n: u32,
    poly: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Gf2n {
    pub fn new(n: u32) -> Result<Gf2n> {
        if !(1..=12).contains(&n) {
            return Err(Error::Precondition(format!("field degree {} outside 1..=12", n)));
        }
        let poly = CONWAY_BITS[(n - 1) as usize];
        let q = 1u32 << n;
        let mut exp = vec![0u16; (q - 1) as usize];
        let mut log = vec![0u16; q as usize];
        let mut seen = vec![false; q as usize];
        let mut cur = 1u32;
        for i in 0..q - 1 {
            if seen[cur as usize] {
                return Err(Error::Internal("reduction polynomial is not primitive".into()));
            }
            seen[cur as usize] = true;
            exp[i as usize] = cur as u16;
            log[cur as usize] = i as u16;
            cur <<= 1;
            if cur & q != 0 {
                cur ^= poly;
            }
        }
        if cur != 1 {
            return Err(Error::Internal("reduction polynomial is not primitive".into()));
        }
        Ok(Gf2n { n, poly, exp, log })
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Modulus bits, including the leading term.
    pub fn poly_bits(&self) -> u32 {
        self.poly
    }

    pub fn size(&self) -> u32 {
        1 << self.n
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let m = self.size() - 1;
        self.exp[((self.log[a as usize] as u32 + self.log[b as usize] as u32) % m) as usize]
    }

    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "zero has no inverse");
        let m = self.size() - 1;
        self.exp[((m - self.log[a as usize] as u32) % m) as usize]
    }

    /// The class of x, a generator of the multiplicative group.
    pub fn generator(&self) -> u16 {
        if self.n == 1 {
            1
        } else {
            2
        }
    }
}

/// Determinant-one 2x2 matrices over GF(2^n), packed row-major into the
/// four 16-bit lanes of a u64.
#[derive(Clone, Debug)]
pub struct Sl2Group {
    field: Gf2n,
}

impl Sl2Group {
    pub fn new(n: u32) -> Result<Sl2Group> {
        Ok(Sl2Group { field: Gf2n::new(n)? })
    }

    pub fn field(&self) -> &Gf2n {
        &self.field
    }

    pub fn pack(&self, a: u16, b: u16, c: u16, d: u16) -> u64 {
        (a as u64) | (b as u64) << 16 | (c as u64) << 32 | (d as u64) << 48
    }

    pub fn unpack(&self, x: u64) -> (u16, u16, u16, u16) {
        (x as u16, (x >> 16) as u16, (x >> 32) as u16, (x >> 48) as u16)
    }

    fn order(&self) -> u128 {
        let q = self.field.size() as u128;
        q * (q * q - 1)
    }

    fn identity(&self) -> u64 {
        self.pack(1, 0, 0, 1)
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        let f = &self.field;
        let (a1, b1, c1, d1) = self.unpack(x);
        let (a2, b2, c2, d2) = self.unpack(y);
        self.pack(
            f.mul(a1, a2) ^ f.mul(b1, c2),
            f.mul(a1, b2) ^ f.mul(b1, d2),
            f.mul(c1, a2) ^ f.mul(d1, c2),
            f.mul(c1, b2) ^ f.mul(d1, d2),
        )
    }

    /// Inverse of a determinant-one matrix; in characteristic two the
    /// adjugate swaps the diagonal and keeps the rest.
    fn inv(&self, x: u64) -> u64 {
        let (a, b, c, d) = self.unpack(x);
        self.pack(d, b, c, a)
    }

    pub fn det(&self, x: u64) -> u16 {
        let (a, b, c, d) = self.unpack(x);
        self.field.mul(a, d) ^ self.field.mul(b, c)
    }

    fn elements(&self) -> Result<Vec<u64>> {
        if self.order() > EXHAUSTIVE_THRESHOLD as u128 {
            return Err(Error::Precondition(format!(
                "group of order {} is too large to enumerate",
                self.order()
            )));
        }
        let f = &self.field;
        let q = f.size() as u16;
        let mut out = Vec::with_capacity(self.order() as usize);
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    if a != 0 {
                        let d = f.mul(f.inv(a), 1 ^ f.mul(b, c));
                        out.push(self.pack(a, b, c, d));
                    } else if f.mul(b, c) == 1 {
                        for d in 0..q {
                            out.push(self.pack(a, b, c, d));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn generators(&self) -> Vec<u64> {
        let g = self.field.generator();
        let mut v = vec![self.pack(1, 1, 0, 1), self.pack(1, 0, 1, 1)];
        if g != 1 {
            v.push(self.pack(g, 0, 0, self.field.inv(g)));
        }
        v
    }

    fn display_element(&self, x: u64) -> String {
        let (a, b, c, d) = self.unpack(x);
        format!("[[{}, {}], [{}, {}]]", a, b, c, d)
    }
}

fn perm_identity(points: usize) -> u64 {
    (0..points).map(|i| (i as u64) << (4 * i)).sum()
}

fn perm_apply(x: u64, i: usize) -> usize {
    ((x >> (4 * i)) & 0xf) as usize
}

/// Composition: (x * y)(i) = x(y(i)).
fn perm_mul(x: u64, y: u64, points: usize) -> u64 {
    let mut z = 0u64;
    for i in 0..points {
        z |= (perm_apply(x, perm_apply(y, i)) as u64) << (4 * i);
    }
    z
}

fn perm_inv(x: u64, points: usize) -> u64 {
    let mut z = 0u64;
    for i in 0..points {
        z |= (i as u64) << (4 * perm_apply(x, i));
    }
    z
}

/// A permutation group on up to 16 points, materialized by closing its
/// generators under multiplication.
#[derive(Clone, Debug)]
pub struct PermGroup {
    points: usize,
    gens: Vec<u64>,
    elements: Vec<u64>,
}

impl PermGroup {
    /// Number of points acted on.
    pub fn points(&self) -> usize {
        self.points
    }

    /// Parses comma-separated generators in cycle notation with 1-based
    /// points, e.g. `(1 2 3)(4 5), (1 4)`. An empty spec is the trivial
    /// group.
    pub fn from_generator_cycles(spec: &str) -> Result<PermGroup> {
        let mut gen_cycles: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut max_point = 0usize;
        for part in spec.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let mut cycles = Vec::new();
            let mut rest = part;
            while !rest.is_empty() {
                let rest2 = rest.trim_start();
                if !rest2.starts_with('(') {
                    return Err(Error::GroupSpec(format!("expected '(' in {:?}", part)));
                }
                let close = rest2
                    .find(')')
                    .ok_or_else(|| Error::GroupSpec(format!("unclosed cycle in {:?}", part)))?;
                let mut cycle = Vec::new();
                for tok in rest2[1..close].split_whitespace() {
                    let p: usize = tok
                        .parse()
                        .map_err(|_| Error::GroupSpec(format!("bad point {:?}", tok)))?;
                    if p == 0 {
                        return Err(Error::GroupSpec("points are 1-based".into()));
                    }
                    if p > 16 {
                        return Err(Error::GroupSpec("at most 16 points are supported".into()));
                    }
                    max_point = max_point.max(p);
                    cycle.push(p - 1);
                }
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
                rest = &rest2[close + 1..];
            }
            gen_cycles.push(cycles);
        }

        let points = max_point.max(1);
        let mut gens = Vec::new();
        for cycles in &gen_cycles {
            let mut image: Vec<usize> = (0..points).collect();
            let mut moved = vec![false; points];
            for cycle in cycles {
                for (i, &p) in cycle.iter().enumerate() {
                    if moved[p] {
                        return Err(Error::GroupSpec(format!(
                            "point {} appears twice in one generator",
                            p + 1
                        )));
                    }
                    moved[p] = true;
                    image[p] = cycle[(i + 1) % cycle.len()];
                }
            }
            let mut enc = 0u64;
            for (i, &img) in image.iter().enumerate() {
                enc |= (img as u64) << (4 * i);
            }
            gens.push(enc);
        }

        let id = perm_identity(points);
        let mut seen: HashSet<u64> = HashSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = perm_mul(x, g, points);
                if seen.insert(y) {
                    if seen.len() as u64 > EXHAUSTIVE_THRESHOLD {
                        return Err(Error::Precondition(
                            "permutation group is too large to materialize".into(),
                        ));
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<u64> = seen.into_iter().collect();
        elements.sort_unstable();
        Ok(PermGroup { points, gens, elements })
    }

    fn display_element(&self, x: u64) -> String {
        let mut out = String::new();
        let mut done = vec![false; self.points];
        for start in 0..self.points {
            if done[start] || perm_apply(x, start) == start {
                continue;
            }
            let mut cycle = vec![start];
            done[start] = true;
            let mut cur = perm_apply(x, start);
            while cur != start {
                done[cur] = true;
                cycle.push(cur);
                cur = perm_apply(x, cur);
            }
            out.push('(');
            out.push_str(
                &cycle.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(" "),
            );
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// A finite group the quotient search can run against.
#[derive(Clone, Debug)]
pub enum FiniteGroup {
    Sl2(Sl2Group),
    Perm(PermGroup),
}

impl FiniteGroup {
    /// SL2 over GF(2^n) for 1 <= n <= 12.
    pub fn sl2_over_gf2n(n: u32) -> Result<FiniteGroup> {
        Ok(FiniteGroup::Sl2(Sl2Group::new(n)?))
    }

    /// Permutation group from generators in cycle notation.
    pub fn permutation(spec: &str) -> Result<FiniteGroup> {
        Ok(FiniteGroup::Perm(PermGroup::from_generator_cycles(spec)?))
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::permutation("").expect("trivial group")
    }

    /// Parses `sl2:<n>` or `perm:<generators in cycle notation>`.
    pub fn parse_spec(spec: &str) -> Result<FiniteGroup> {
        if let Some(rest) = spec.strip_prefix("sl2:") {
            let n: u32 = rest
                .trim()
                .parse()
                .map_err(|_| Error::GroupSpec(format!("bad field degree {:?}", rest)))?;
            FiniteGroup::sl2_over_gf2n(n)
        } else if let Some(rest) = spec.strip_prefix("perm:") {
            FiniteGroup::permutation(rest)
        } else {
            Err(Error::GroupSpec("expected sl2:<n> or perm:<cycles>".into()))
        }
    }

    pub fn order(&self) -> u128 {
        match self {
            FiniteGroup::Sl2(g) => g.order(),
            FiniteGroup::Perm(g) => g.elements.len() as u128,
        }
    }

    pub fn identity(&self) -> u64 {
        match self {
            FiniteGroup::Sl2(g) => g.identity(),
            FiniteGroup::Perm(g) => perm_identity(g.points),
        }
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        match self {
            FiniteGroup::Sl2(g) => g.mul(x, y),
            FiniteGroup::Perm(g) => perm_mul(x, y, g.points),
        }
    }

    pub fn inv(&self, x: u64) -> u64 {
        match self {
            FiniteGroup::Sl2(g) => g.inv(x),
            FiniteGroup::Perm(g) => perm_inv(x, g.points),
        }
    }

    /// A generating set, used for seeding and for generation witnesses.
    pub fn generators(&self) -> Vec<u64> {
        match self {
            FiniteGroup::Sl2(g) => g.generators(),
            FiniteGroup::Perm(g) => {
                if g.gens.is_empty() {
                    vec![self.identity()]
                } else {
                    g.gens.clone()
                }
            }
        }
    }

    /// Every element; errors above the enumeration bound.
    pub fn elements(&self) -> Result<Vec<u64>> {
        match self {
            FiniteGroup::Sl2(g) => g.elements(),
            FiniteGroup::Perm(g) => Ok(g.elements.clone()),
        }
    }

    pub fn element_order(&self, x: u64) -> u64 {
        let id = self.identity();
        let mut cur = x;
        let mut n = 1;
        while cur != id {
            cur = self.mul(cur, x);
            n += 1;
        }
        n
    }

    pub fn display_element(&self, x: u64) -> String {
        match self {
            FiniteGroup::Sl2(g) => g.display_element(x),
            FiniteGroup::Perm(g) => g.display_element(x),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FiniteGroup::Sl2(g) => format!(
                "SL2(GF(2^{})), order {}, field modulus bits {:#b}",
                g.field.degree(),
                g.order(),
                g.field.poly_bits()
            ),
            FiniteGroup::Perm(g) => {
                format!("permutation group of order {} on {} points", g.elements.len(), g.points)
            }
        }
    }
}

/// One group element per letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tuple {
    entries: Vec<u64>,
}

impl Tuple {
    pub fn new(entries: Vec<u64>) -> Tuple {
        Tuple { entries }
    }

    pub fn identity(h: &FiniteGroup, letters: usize) -> Tuple {
        Tuple { entries: vec![h.identity(); letters] }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn evaluate_factors(h: &FiniteGroup, t: &Tuple, factors: &[SignedLetter]) -> u64 {
    let mut acc = h.identity();
    for f in factors {
        let x = t.entries[f.letter];
        acc = h.mul(acc, if f.inverse { h.inv(x) } else { x });
    }
    acc
}

/// Value in H of a free-group word under the labeling t.
pub fn evaluate_word(h: &FiniteGroup, t: &Tuple, w: &GroupWord) -> u64 {
    evaluate_factors(h, t, w.factors())
}

/// One step of the right action: letter a is sent to the value of e(a).
pub fn action_step(e: &FreeGroupEndo, h: &FiniteGroup, t: &Tuple) -> Tuple {
    assert_eq!(e.size(), t.len(), "alphabet sizes differ");
    Tuple::new((0..e.size()).map(|a| evaluate_word(h, t, e.image(a))).collect())
}

/// True iff the entries generate all of H, by closing them under right
/// multiplication.
fn generates(h: &FiniteGroup, entries: &[u64]) -> bool {
    let target = h.order();
    let id = h.identity();
    let mut seen: HashSet<u64> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        if seen.len() as u128 == target {
            return true;
        }
        for &g in entries {
            let y = h.mul(x, g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.len() as u128 == target
}

/// A product of tuple entries that reaches a stated group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationWitness {
    pub target: u64,
    pub expression: Vec<SignedLetter>,
}

/// Shortest products of tuple entries reaching each declared generator of
/// H; only called once generation is established.
fn generation_witnesses(h: &FiniteGroup, t: &Tuple) -> Vec<GenerationWitness> {
    let targets = h.generators();
    let mut words: HashMap<u64, Vec<SignedLetter>> = HashMap::new();
    words.insert(h.identity(), Vec::new());
    let mut queue = VecDeque::from([h.identity()]);
    let mut found = 0;
    'bfs: while let Some(x) = queue.pop_front() {
        for (a, &g) in t.entries.iter().enumerate() {
            let y = h.mul(x, g);
            if !words.contains_key(&y) {
                let mut w = words[&x].clone();
                w.push(SignedLetter::plain(a));
                words.insert(y, w);
                queue.push_back(y);
                if targets.contains(&y) {
                    found += 1;
                    if found == targets.len() {
                        break 'bfs;
                    }
                }
            }
        }
    }
    targets
        .iter()
        .filter_map(|g| {
            words.get(g).map(|w| GenerationWitness { target: *g, expression: w.clone() })
        })
        .collect()
}

/// Certificate that H is a continuous quotient: a generating tuple fixed
/// by `period` action steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCertificate {
    pub tuple: Tuple,
    pub period: usize,
    pub witnesses: Vec<GenerationWitness>,
}

/// Re-verifies a certificate from scratch: the tuple returns to itself in
/// exactly `period` steps, its entries generate H, and every witness
/// expression evaluates to its target. Linear in |H|.
pub fn certificate_check(e: &FreeGroupEndo, c: &QuotientCertificate, h: &FiniteGroup) -> bool {
    if c.period == 0 || c.tuple.len() != e.size() {
        return false;
    }
    let mut cur = c.tuple.clone();
    for _ in 0..c.period {
        cur = action_step(e, h, &cur);
    }
    if cur != c.tuple {
        return false;
    }
    if !generates(h, c.tuple.entries()) {
        return false;
    }
    c.witnesses.iter().all(|w| evaluate_factors(h, &c.tuple, &w.expression) == w.target)
}

/// Limits for the seeded search; the exhaustive route ignores them.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Fail instead of falling back to seeds when the state space is too
    /// large to sweep.
    pub force_exhaustive: bool,
    /// Action steps granted to the seeded search.
    pub step_limit: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { force_exhaustive: false, step_limit: 1 << 20 }
    }
}

/// Search verdict: a certificate, a budget-bounded failure with no
/// conclusion, or a proof of non-existence by exhaustion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(QuotientCertificate),
    NotFound { steps: u64 },
    Exhausted,
}

/// Searches H^A for a periodic generating tuple. Sweeps the whole space
/// when |H|^|A| is at most the exhaustive threshold (an Exhausted verdict
/// is then a proof that H is not a quotient); otherwise iterates the
/// action from deterministically ordered seed tuples within the budget.
pub fn quotient_search(
    e: &FreeGroupEndo,
    h: &FiniteGroup,
    budget: SearchBudget,
) -> Result<SearchOutcome> {
    let k = e.size() as u32;
    match h.order().checked_pow(k) {
        Some(total) if total <= EXHAUSTIVE_THRESHOLD as u128 => exhaustive_search(e, h),
        _ if budget.force_exhaustive => Err(Error::Precondition(format!(
            "state space |H|^{} exceeds the exhaustive threshold {}",
            k, EXHAUSTIVE_THRESHOLD
        ))),
        _ => Ok(seeded_search(e, h, budget.step_limit)),
    }
}

fn exhaustive_search(e: &FreeGroupEndo, h: &FiniteGroup) -> Result<SearchOutcome> {
    let k = e.size();
    let elems = h.elements()?;
    let nh = elems.len() as u64;
    let index: HashMap<u64, u64> =
        elems.iter().enumerate().map(|(i, &x)| (x, i as u64)).collect();
    let total = nh.pow(k as u32);
    let decode = |id: u64| -> Tuple {
        let mut rest = id;
        let mut entries = Vec::with_capacity(k);
        for _ in 0..k {
            entries.push(elems[(rest % nh) as usize]);
            rest /= nh;
        }
        Tuple::new(entries)
    };
    let encode = |t: &Tuple| -> u64 {
        let mut id = 0u64;
        for x in t.entries().iter().rev() {
            id = id * nh + index[x];
        }
        id
    };
    let step = |id: u64| -> u64 { encode(&action_step(e, h, &decode(id))) };

    // Mark the tuples lying on cycles of the action.
    let mut color = vec![0u8; total as usize];
    for s in 0..total {
        if color[s as usize] != 0 {
            continue;
        }
        let mut path: Vec<u64> = Vec::new();
        let mut pos: HashMap<u64, usize> = HashMap::new();
        let mut cur = s;
        loop {
            match color[cur as usize] {
                0 => {
                    color[cur as usize] = 1;
                    pos.insert(cur, path.len());
                    path.push(cur);
                    cur = step(cur);
                }
                1 => {
                    let start = pos[&cur];
                    for &x in &path[start..] {
                        color[x as usize] = 3;
                    }
                    for &x in &path[..start] {
                        color[x as usize] = 2;
                    }
                    break;
                }
                _ => {
                    for &x in &path {
                        color[x as usize] = 2;
                    }
                    break;
                }
            }
        }
    }

    for id in 0..total {
        if color[id as usize] != 3 {
            continue;
        }
        let t = decode(id);
        if !generates(h, t.entries()) {
            continue;
        }
        let mut period = 1usize;
        let mut cur = step(id);
        while cur != id {
            cur = step(cur);
            period += 1;
        }
        let witnesses = generation_witnesses(h, &t);
        return Ok(SearchOutcome::Found(QuotientCertificate { tuple: t, period, witnesses }));
    }
    Ok(SearchOutcome::Exhausted)
}

/// Seed pool ordered generators-first: decreasing element order, ties by
/// encoding. Falls back to generators and their pairwise products when the
/// group is too large to enumerate.
fn seed_pool(h: &FiniteGroup) -> Vec<u64> {
    let pool: Vec<u64> = if h.order() <= 1 << 16 {
        h.elements().expect("within the enumeration bound")
    } else {
        let gens = h.generators();
        let mut p = gens.clone();
        for &a in &gens {
            for &b in &gens {
                p.push(h.mul(a, b));
            }
        }
        p.sort_unstable();
        p.dedup();
        p
    };
    let mut keyed: Vec<(u64, u64)> = pool.into_iter().map(|x| (h.element_order(x), x)).collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, x)| x).collect()
}

fn seeded_search(e: &FreeGroupEndo, h: &FiniteGroup, step_limit: u64) -> SearchOutcome {
    let k = e.size() as u32;
    let pool = seed_pool(h);
    let pool_n = pool.len() as u128;
    let seed_count = pool_n.saturating_pow(k);
    let mut steps = 0u64;
    let mut seed_idx: u128 = 0;
    while seed_idx < seed_count {
        let mut rest = seed_idx;
        let mut entries = Vec::with_capacity(k as usize);
        for _ in 0..k {
            entries.push(pool[(rest % pool_n) as usize]);
            rest /= pool_n;
        }
        let seed = Tuple::new(entries);

        // Brent cycle detection on the orbit of the seed.
        let mut power: u64 = 1;
        let mut lam: u64 = 1;
        let mut tortoise = seed.clone();
        let mut hare = action_step(e, h, &seed);
        steps += 1;
        while tortoise != hare {
            if steps >= step_limit {
                return SearchOutcome::NotFound { steps };
            }
            if power == lam {
                tortoise = hare.clone();
                power *= 2;
                lam = 0;
            }
            hare = action_step(e, h, &hare);
            steps += 1;
            lam += 1;
        }

        // hare lies on the cycle; walk its lam members.
        let mut cur = hare;
        for _ in 0..lam {
            if generates(h, cur.entries()) {
                let witnesses = if h.order() <= 1 << 20 {
                    generation_witnesses(h, &cur)
                } else {
                    Vec::new()
                };
                return SearchOutcome::Found(QuotientCertificate {
                    tuple: cur,
                    period: lam as usize,
                    witnesses,
                });
            }
            if steps >= step_limit {
                return SearchOutcome::NotFound { steps };
            }
            cur = action_step(e, h, &cur);
            steps += 1;
        }
        seed_idx += 1;
    }
    SearchOutcome::NotFound { steps }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi() -> FreeGroupEndo {
        FreeGroupEndo::parse("0 -> 0 1 0' 1'\n1 -> 0\n").unwrap()
    }

    #[test]
    fn conway_fields_obey_the_field_laws() {
        for n in 1..=12 {
            let f = Gf2n::new(n).unwrap();
            let q = f.size() as u16;
            let sample: Vec<u16> = (0..q.min(8)).collect();
            for &a in &sample {
                for &b in &sample {
                    for &c in &sample {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
        }
        assert!(Gf2n::new(0).is_err());
        assert!(Gf2n::new(13).is_err());
    }

    #[test]
    fn sl2_orders_match_the_count_formula() {
        for (n, order) in [(1, 6), (2, 60), (3, 504)] {
            let h = FiniteGroup::sl2_over_gf2n(n).unwrap();
            assert_eq!(h.order(), order);
            let elems = h.elements().unwrap();
            assert_eq!(elems.len() as u128, order);
            if let FiniteGroup::Sl2(g) = &h {
                assert!(elems.iter().all(|&x| g.det(x) == 1));
            }
        }
    }

    #[test]
    fn sl2_group_laws_sampled() {
        let h = FiniteGroup::sl2_over_gf2n(2).unwrap();
        let elems = h.elements().unwrap();
        let id = h.identity();
        for &x in &elems {
            assert_eq!(h.mul(x, h.inv(x)), id);
            assert_eq!(h.mul(id, x), x);
        }
        for &x in &elems[..10] {
            for &y in &elems[..10] {
                for &z in &elems[..10] {
                    assert_eq!(h.mul(h.mul(x, y), z), h.mul(x, h.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn displayed_tuple_is_conjugated_after_two_steps() {
        let e = psi();
        let h = FiniteGroup::sl2_over_gf2n(2).unwrap();
        let g = match &h {
            FiniteGroup::Sl2(g) => g.clone(),
            _ => unreachable!(),
        };
        let gen = g.field().generator();
        let g2 = g.field().mul(gen, gen);
        let u = g.pack(1, 1, 1, 0);
        let v = g.pack(0, 1, 1, gen);
        let w = g.pack(gen, 1, 0, 1);
        let w_inv = g.pack(g2, g2, 0, 1);
        assert_eq!(g.mul(w, w_inv), h.identity());
        assert_eq!(h.mul(w, h.mul(w, w)), h.identity(), "w has order 3");

        let t = Tuple::new(vec![u, v]);
        let s2 = action_step(&e, &h, &action_step(&e, &h, &t));
        let conj = |x: u64| g.mul(g.mul(w, x), w_inv);
        assert_eq!(s2, Tuple::new(vec![conj(u), conj(v)]));

        let cert = QuotientCertificate { tuple: t.clone(), period: 6, witnesses: vec![] };
        assert!(certificate_check(&e, &cert, &h));

        let no_gen = QuotientCertificate {
            tuple: Tuple::identity(&h, 2),
            period: 1,
            witnesses: vec![],
        };
        assert!(!certificate_check(&e, &no_gen, &h));

        let trivial = FiniteGroup::trivial();
        let unique = QuotientCertificate {
            tuple: Tuple::identity(&trivial, 2),
            period: 1,
            witnesses: vec![],
        };
        assert!(certificate_check(&e, &unique, &trivial));
    }

    #[test]
    fn action_fixed_points() {
        let e = psi();
        let h = FiniteGroup::sl2_over_gf2n(2).unwrap();
        let id_tuple = Tuple::identity(&h, 2);
        assert_eq!(action_step(&e, &h, &id_tuple), id_tuple);

        let ident = FreeGroupEndo::parse("0 -> 0\n1 -> 1\n").unwrap();
        let elems = h.elements().unwrap();
        let t = Tuple::new(vec![elems[17], elems[42]]);
        assert_eq!(action_step(&ident, &h, &t), t);
    }

    #[test]
    fn action_respects_composition() {
        let e = psi();
        let h = FiniteGroup::sl2_over_gf2n(2).unwrap();
        let elems = h.elements().unwrap();
        let ee = e.compose(&e).unwrap();
        for (i, j) in [(3, 50), (11, 11), (59, 0)] {
            let t = Tuple::new(vec![elems[i], elems[j]]);
            let twice = action_step(&e, &h, &action_step(&e, &h, &t));
            assert_eq!(action_step(&ee, &h, &t), twice);
        }
    }

    #[test]
    fn sl2_f4_is_a_quotient() {
        let e = psi();
        let h = FiniteGroup::sl2_over_gf2n(2).unwrap();
        let out = quotient_search(&e, &h, SearchBudget::default()).unwrap();
        let cert = match &out {
            SearchOutcome::Found(c) => c,
            other => panic!("expected a certificate, got {:?}", other),
        };
        assert!(certificate_check(&e, cert, &h));
        assert!(!cert.witnesses.is_empty());
        // deterministic
        assert_eq!(quotient_search(&e, &h, SearchBudget::default()).unwrap(), out);
    }

    #[test]
    fn sl2_f8_is_a_quotient() {
        let e = psi();
        let h = FiniteGroup::sl2_over_gf2n(3).unwrap();
        match quotient_search(&e, &h, SearchBudget::default()).unwrap() {
            SearchOutcome::Found(cert) => assert!(certificate_check(&e, &cert, &h)),
            other => panic!("expected a certificate, got {:?}", other),
        }
    }

    #[test]
    fn abelian_groups_are_not_quotients() {
        let e = psi();
        for spec in ["(1 2)", "(1 2 3)", "(1 2 3 4)", "(1 2), (3 4)"] {
            let h = FiniteGroup::permutation(spec).unwrap();
            assert_eq!(
                quotient_search(&e, &h, SearchBudget::default()).unwrap(),
                SearchOutcome::Exhausted,
                "for {}",
                spec
            );
        }
    }

    #[test]
    fn trivial_group_is_always_a_quotient() {
        let e = psi();
        let h = FiniteGroup::trivial();
        match quotient_search(&e, &h, SearchBudget::default()).unwrap() {
            SearchOutcome::Found(cert) => {
                assert_eq!(cert.period, 1);
                assert_eq!(cert.tuple, Tuple::identity(&h, 2));
            }
            other => panic!("expected a certificate, got {:?}", other),
        }
    }

    #[test]
    fn verdicts_are_stable_under_relabeling() {
        let e = psi();
        let s3a = FiniteGroup::permutation("(1 2), (1 2 3)").unwrap();
        let s3b = FiniteGroup::permutation("(2 3), (1 3 2)").unwrap();
        assert_eq!(s3a.order(), 6);
        assert_eq!(s3b.order(), 6);
        let oa = quotient_search(&e, &s3a, SearchBudget::default()).unwrap();
        let ob = quotient_search(&e, &s3b, SearchBudget::default()).unwrap();
        assert_eq!(oa, SearchOutcome::Exhausted);
        assert_eq!(ob, SearchOutcome::Exhausted);

        // A5 in its permutation guise is found just like SL2(F4).
        let a5 = FiniteGroup::permutation("(1 2 3 4 5), (1 2 3)").unwrap();
        assert_eq!(a5.order(), 60);
        match quotient_search(&e, &a5, SearchBudget::default()).unwrap() {
            SearchOutcome::Found(cert) => assert!(certificate_check(&e, &cert, &a5)),
            other => panic!("expected a certificate, got {:?}", other),
        }
    }

    #[test]
    fn permutation_parsing_and_display() {
        let c6 = FiniteGroup::permutation("(1 2 3)(4 5)").unwrap();
        assert_eq!(c6.order(), 6);
        let g = match &c6 {
            FiniteGroup::Perm(g) => g.gens[0],
            _ => unreachable!(),
        };
        assert_eq!(c6.display_element(g), "(1 2 3)(4 5)");
        assert_eq!(c6.display_element(c6.identity()), "()");
        assert_eq!(c6.element_order(g), 6);

        assert!(matches!(FiniteGroup::permutation("(1 1)"), Err(Error::GroupSpec(_))));
        assert!(matches!(FiniteGroup::permutation("(17 18)"), Err(Error::GroupSpec(_))));
        assert!(matches!(FiniteGroup::permutation("1 2"), Err(Error::GroupSpec(_))));
        assert!(matches!(FiniteGroup::parse_spec("sl2:x"), Err(Error::GroupSpec(_))));
        assert!(matches!(FiniteGroup::parse_spec("zl2:1"), Err(Error::GroupSpec(_))));
        assert!(FiniteGroup::parse_spec("sl2:13").is_err());
        assert_eq!(FiniteGroup::parse_spec("sl2:2").unwrap().order(), 60);
        assert_eq!(FiniteGroup::parse_spec("perm:(1 2)").unwrap().order(), 2);
    }

    #[test]
    fn forced_exhaustive_fails_above_the_threshold() {
        let e = psi();
        let h = FiniteGroup::sl2_over_gf2n(5).unwrap();
        let budget = SearchBudget { force_exhaustive: true, step_limit: 0 };
        assert!(matches!(quotient_search(&e, &h, budget), Err(Error::Precondition(_))));
    }

    #[test]
    fn seeded_search_respects_its_budget() {
        let e = psi();
        let h = FiniteGroup::sl2_over_gf2n(5).unwrap();
        let budget = SearchBudget { force_exhaustive: false, step_limit: 500 };
        match quotient_search(&e, &h, budget).unwrap() {
            SearchOutcome::Found(cert) => assert!(certificate_check(&e, &cert, &h)),
            SearchOutcome::NotFound { steps } => assert!(steps <= 500),
            SearchOutcome::Exhausted => panic!("state space is too large to exhaust"),
        }
    }
}
