//! Words over `Z_q`, the extended `{0, 1, inf}` semimetric, exact
//! maximum-code search, and the coset constructions behind the lower bounds.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write as IoWrite};

#[derive(Clone, Debug, PartialEq)]
pub enum CodeError {
    ShapeMismatch,
    Domain(String),
    NotASubgroup,
    DuplicateCoset,
    /// `q^n` exceeded the configured vertex budget; carries the best
    /// independent set found greedily before giving up.
    BudgetExceeded {
        vertices: u64,
        budget: u64,
        partial: u64,
    },
    Parse {
        line: usize,
        msg: String,
    },
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::ShapeMismatch => write!(f, "words disagree on q or length"),
            CodeError::Domain(m) => write!(f, "domain error: {m}"),
            CodeError::NotASubgroup => write!(f, "code is not closed under addition mod q"),
            CodeError::DuplicateCoset => write!(f, "two representatives share a coset"),
            CodeError::BudgetExceeded { vertices, budget, partial } => write!(
                f,
                "search space of {vertices} vertices exceeds budget {budget}; greedy lower bound {partial}"
            ),
            CodeError::Parse { line, msg } => write!(f, "line {line}: {msg}"),
        }
    }
}

impl std::error::Error for CodeError {}

type Result<T> = std::result::Result<T, CodeError>;

/// Semimetric value: a nonnegative integer or infinity, with absorbing
/// addition. `Finite(_) < Infinite` under the derived order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtDist {
    Finite(u64),
    Infinite,
}

impl ExtDist {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }
}

impl std::ops::Add for ExtDist {
    type Output = ExtDist;
    fn add(self, rhs: ExtDist) -> ExtDist {
        match (self, rhs) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a + b),
            _ => ExtDist::Infinite,
        }
    }
}

impl fmt::Display for ExtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDist::Finite(v) => write!(f, "{v}"),
            ExtDist::Infinite => write!(f, "inf"),
        }
    }
}

/// A word of fixed length over `Z_q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    q: u16,
    symbols: Vec<u16>,
}

impl Word {
    /// Builds a word, rejecting symbols outside `[0, q)`.
    pub fn new(q: u16, symbols: Vec<u16>) -> Result<Word> {
        if q < 2 {
            return Err(CodeError::Domain(format!("alphabet size {q} < 2")));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= q) {
            return Err(CodeError::Domain(format!(
                "symbol {s} out of range for q = {q}"
            )));
        }
        Ok(Word { q, symbols })
    }

    pub fn zero(q: u16, n: usize) -> Word {
        Word {
            q,
            symbols: vec![0; n],
        }
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    /// Coordinatewise sum mod q.
    pub fn add(&self, other: &Word) -> Result<Word> {
        if self.q != other.q || self.symbols.len() != other.symbols.len() {
            return Err(CodeError::ShapeMismatch);
        }
        let symbols = self
            .symbols
            .iter()
            .zip(&other.symbols)
            .map(|(&a, &b)| (a + b) % self.q)
            .collect();
        Ok(Word { q: self.q, symbols })
    }

    /// Coordinatewise difference mod q.
    pub fn sub(&self, other: &Word) -> Result<Word> {
        if self.q != other.q || self.symbols.len() != other.symbols.len() {
            return Err(CodeError::ShapeMismatch);
        }
        let symbols = self
            .symbols
            .iter()
            .zip(&other.symbols)
            .map(|(&a, &b)| (a + self.q - b) % self.q)
            .collect();
        Ok(Word { q: self.q, symbols })
    }

    /// Semimetric weight: Hamming count if every symbol lies in `{0, 1, q-1}`,
    /// infinite otherwise.
    pub fn semimetric_weight(&self) -> ExtDist {
        let mut w = 0u64;
        for &s in &self.symbols {
            if s == 0 {
                continue;
            }
            if s == 1 || s == self.q - 1 {
                w += 1;
            } else {
                return ExtDist::Infinite;
            }
        }
        ExtDist::Finite(w)
    }
}

/// Per-coordinate cycle semimetric summed over coordinates: 0 for equal
/// symbols, 1 for adjacent ones (difference of 1 mod q), infinite otherwise.
pub fn dist(x: &Word, y: &Word) -> Result<ExtDist> {
    if x.q != y.q || x.symbols.len() != y.symbols.len() {
        return Err(CodeError::ShapeMismatch);
    }
    let q = x.q;
    let mut total = 0u64;
    for (&a, &b) in x.symbols.iter().zip(&y.symbols) {
        let d = (a + q - b) % q;
        if d == 0 {
            continue;
        }
        if d == 1 || d == q - 1 {
            total += 1;
        } else {
            return Ok(ExtDist::Infinite);
        }
    }
    Ok(ExtDist::Finite(total))
}

/// A deduplicated, lexicographically ordered set of words sharing `(q, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    q: u16,
    n: usize,
    words: Vec<Word>,
}

impl Code {
    pub fn new(q: u16, n: usize, mut words: Vec<Word>) -> Result<Code> {
        if words.is_empty() {
            return Err(CodeError::Domain("a code needs at least one word".into()));
        }
        for w in &words {
            if w.q != q || w.symbols.len() != n {
                return Err(CodeError::ShapeMismatch);
            }
        }
        words.sort();
        words.dedup();
        Ok(Code { q, n, words })
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }
}

/// Minimum pairwise distance; infinite for singleton codes.
pub fn dmin(code: &Code) -> ExtDist {
    let mut best = ExtDist::Infinite;
    for i in 0..code.words.len() {
        for j in i + 1..code.words.len() {
            let d = dist(&code.words[i], &code.words[j]).expect("uniform shape");
            if d < best {
                best = d;
            }
            if best == ExtDist::Finite(0) {
                return best;
            }
        }
    }
    best
}

/// Enumerates all words at finite semimetric distance <= radius from `w`.
fn ball_finite(w: &Word, radius: u64, out: &mut Vec<Word>) {
    out.clear();
    out.push(w.clone());
    let n = w.len();
    let q = w.q;
    // grow by one perturbed coordinate at a time, keeping coordinates sorted
    // to avoid duplicates: state also remembers last touched index
    let mut frontier: Vec<(Word, usize)> = vec![(w.clone(), 0)];
    for _ in 0..radius {
        let mut next = Vec::new();
        for (word, start) in frontier {
            for i in start..n {
                if word.symbols[i] != w.symbols[i] {
                    continue;
                }
                for step in [1u16, q - 1] {
                    let mut sym = word.symbols.clone();
                    sym[i] = (sym[i] + step) % q;
                    if q == 2 && step == q - 1 {
                        continue; // +1 and -1 coincide
                    }
                    let nw = Word { q, symbols: sym };
                    out.push(nw.clone());
                    next.push((nw, i + 1));
                }
            }
        }
        frontier = next;
    }
}

/// True iff every pair of distinct codewords is at distance >= d.
/// For finite d this enumerates radius-(d-1) balls instead of all pairs,
/// which is what makes large coset-lifted codes checkable.
pub fn min_dist_at_least(code: &Code, d: ExtDist) -> bool {
    match d {
        ExtDist::Infinite => {
            for i in 0..code.words.len() {
                for j in i + 1..code.words.len() {
                    if dist(&code.words[i], &code.words[j]).unwrap().is_finite() {
                        return false;
                    }
                }
            }
            true
        }
        ExtDist::Finite(0) => true,
        ExtDist::Finite(d) => {
            let set: HashSet<&Word> = code.words.iter().collect();
            let mut ball = Vec::new();
            for w in &code.words {
                ball_finite(w, d - 1, &mut ball);
                for candidate in &ball {
                    if candidate != w && set.contains(candidate) {
                        return false;
                    }
                }
            }
            true
        }
    }
}

fn word_from_index(mut i: u64, q: u16, n: usize) -> Word {
    let mut symbols = vec![0u16; n];
    for s in symbols.iter_mut() {
        *s = (i % q as u64) as u16;
        i /= q as u64;
    }
    Word { q, symbols }
}

const DEFAULT_BUDGET: u64 = 1000;

pub fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

struct BitSet {
    bits: Vec<u64>,
}

impl BitSet {
    fn empty(n: usize) -> BitSet {
        BitSet {
            bits: vec![0; n.div_ceil(64)],
        }
    }
    fn full(n: usize) -> BitSet {
        let mut b = BitSet::empty(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }
    fn set(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.bits[i / 64] &= !(1 << (i % 64));
    }
    fn get(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }
    fn and_not_assign(&mut self, other: &BitSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= !b;
        }
    }
    fn clone_from_set(&self) -> BitSet {
        BitSet {
            bits: self.bits.clone(),
        }
    }
    fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }
}

struct MisSearch<'a> {
    adj: &'a [BitSet],
    order: &'a [usize],
    best_size: usize,
    best_set: Vec<usize>,
}

impl MisSearch<'_> {
    /// Greedy clique cover of `cand`; the number of cliques bounds the
    /// independence number of the induced subgraph from above.
    fn clique_cover_bound(&self, cand: &BitSet) -> usize {
        let n_words = cand.bits.len();
        let mut cliques: Vec<BitSet> = Vec::new(); // common neighborhoods
        let mut count = 0usize;
        for &v in self.order {
            if !cand.get(v) {
                continue;
            }
            let mut placed = false;
            for common in cliques.iter_mut() {
                if common.get(v) {
                    for k in 0..n_words {
                        common.bits[k] &= self.adj[v].bits[k];
                    }
                    placed = true;
                    break;
                }
            }
            if !placed {
                count += 1;
                let mut common = self.adj[v].clone_from_set();
                for k in 0..n_words {
                    common.bits[k] &= cand.bits[k];
                }
                cliques.push(common);
            }
        }
        count
    }

    fn run(&mut self, cand: BitSet, current: &mut Vec<usize>) {
        if current.len() > self.best_size {
            self.best_size = current.len();
            self.best_set = current.clone();
        }
        if cand.is_empty() {
            return;
        }
        if current.len() + self.clique_cover_bound(&cand) <= self.best_size {
            return;
        }
        let v = *self
            .order
            .iter()
            .find(|&&v| cand.get(v))
            .expect("candidate set is nonempty");
        // branch 1: take v
        let mut with_v = cand.clone_from_set();
        with_v.and_not_assign(&self.adj[v]);
        with_v.clear(v);
        current.push(v);
        self.run(with_v, current);
        current.pop();
        // branch 2: skip v
        let mut without = cand;
        without.clear(v);
        self.run(without, current);
    }
}

/// Exact maximum code size `M_q(n, d)` with a witness, by branch-and-bound
/// maximum independent set on the conflict graph (edges join distinct words
/// at distance <= d-1; for `d = inf`, words at any finite distance).
///
/// Deterministic: vertex order is degree descending with lexicographic
/// tie-break, and the witness is the first maximum found in that order.
pub fn alpha_search(q: u16, n: usize, d: ExtDist, budget: u64) -> Result<(u64, Code)> {
    if q < 2 || n == 0 {
        return Err(CodeError::Domain("need q >= 2 and n >= 1".into()));
    }
    if d == ExtDist::Finite(0) {
        return Err(CodeError::Domain("minimum distance must be >= 1".into()));
    }
    let vertices = (q as u64)
        .checked_pow(n as u32)
        .ok_or_else(|| CodeError::Domain("q^n overflows".into()))?;
    let conflict = |a: &Word, b: &Word| -> bool {
        match (dist(a, b).unwrap(), d) {
            (ExtDist::Infinite, _) => false,
            (ExtDist::Finite(_), ExtDist::Infinite) => true,
            (ExtDist::Finite(x), ExtDist::Finite(dd)) => x <= dd - 1,
        }
    };
    if vertices > budget {
        // greedy lexicographic independent set as a reported lower bound,
        // with a work cap so the error path stays cheap on huge spaces
        let mut chosen: Vec<Word> = Vec::new();
        let mut work = 2_000_000u64;
        for i in 0..vertices {
            let w = word_from_index(i, q, n);
            if chosen.iter().all(|c| !conflict(c, &w)) {
                chosen.push(w);
            }
            work = work.saturating_sub(chosen.len().max(1) as u64);
            if work == 0 {
                break;
            }
        }
        return Err(CodeError::BudgetExceeded {
            vertices,
            budget,
            partial: chosen.len() as u64,
        });
    }
    let words: Vec<Word> = (0..vertices).map(|i| word_from_index(i, q, n)).collect();
    let nv = vertices as usize;
    let mut adj: Vec<BitSet> = (0..nv).map(|_| BitSet::empty(nv)).collect();
    let mut degree = vec![0usize; nv];
    for i in 0..nv {
        for j in i + 1..nv {
            if conflict(&words[i], &words[j]) {
                adj[i].set(j);
                adj[j].set(i);
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..nv).collect();
    // degree descending, lexicographic (= index) tie-break
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
    let mut search = MisSearch {
        adj: &adj,
        order: &order,
        best_size: 0,
        best_set: Vec::new(),
    };
    search.run(BitSet::full(nv), &mut Vec::new());
    let witness = Code::new(
        q,
        n,
        search.best_set.iter().map(|&i| words[i].clone()).collect(),
    )?;
    Ok((search.best_size as u64, witness))
}

/// Even-cycle construction: `{0, 2, ..., q-2}^n + binary_code`, which has
/// `(q/2)^n * |binary_code|` words and the minimum distance of the binary
/// code.
pub fn construct_even(q: u16, binary_code: &Code) -> Result<Code> {
    if q < 4 || q % 2 != 0 {
        return Err(CodeError::Domain(format!(
            "even cycle order >= 4 required, got {q}"
        )));
    }
    if binary_code.q() != 2 {
        return Err(CodeError::Domain("inner code must be binary".into()));
    }
    let n = binary_code.n();
    let half = (q / 2) as u64;
    let total = half.pow(n as u32);
    let mut words = Vec::with_capacity((total as usize) * binary_code.len());
    for e in 0..total {
        let mut idx = e;
        let mut even_word = vec![0u16; n];
        for s in even_word.iter_mut() {
            *s = 2 * (idx % half) as u16;
            idx /= half;
        }
        for b in binary_code.words() {
            let symbols = even_word
                .iter()
                .zip(b.symbols())
                .map(|(&ev, &bs)| (ev + bs) % q)
                .collect();
            words.push(Word { q, symbols });
        }
    }
    Code::new(q, n, words)
}

/// The `5^k`-word group code over `F_5` of length `2k` whose blocks are the
/// pairs `(a, 2a)`: coordinates `2i` carry `a_i` and `2i+1` carry `2 a_i`.
/// Its minimum semimetric distance is infinite.
pub fn pentagon_base_code(k: usize) -> Result<Code> {
    if k == 0 {
        return Err(CodeError::Domain("k >= 1 required".into()));
    }
    let n = 2 * k;
    let total = 5u64.pow(k as u32);
    let mut words = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut symbols = vec![0u16; n];
        for i in 0..k {
            let a = (idx % 5) as u16;
            idx /= 5;
            symbols[2 * i] = a;
            symbols[2 * i + 1] = (2 * a) % 5;
        }
        words.push(Word { q: 5, symbols });
    }
    Code::new(5, n, words)
}

/// Verifies closure of `code` under addition mod q (and membership of 0).
pub fn is_subgroup(code: &Code) -> Result<bool> {
    let q = code.q() as u64;
    let n = code.n();
    let space = q.checked_pow(n as u32).filter(|&s| s <= 1 << 24);
    if !code.contains(&Word::zero(code.q(), n)) {
        return Ok(false);
    }
    match space {
        Some(space) => {
            // index-table membership keeps the full pairwise check cheap
            let mut member = vec![false; space as usize];
            let index_of = |w: &Word| -> u64 {
                let mut i = 0u64;
                for &s in w.symbols().iter().rev() {
                    i = i * q + s as u64;
                }
                i
            };
            for w in code.words() {
                member[index_of(w) as usize] = true;
            }
            for a in code.words() {
                for b in code.words() {
                    if !member[index_of(&a.add(b)?) as usize] {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        None => {
            let set: HashSet<&Word> = code.words().iter().collect();
            for a in code.words() {
                for b in code.words() {
                    if !set.contains(&a.add(b)?) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Minimum semimetric weight over the coset `rep + group_code`.
pub fn factor_weight(group_code: &Code, rep: &Word) -> Result<ExtDist> {
    if !is_subgroup(group_code)? {
        return Err(CodeError::NotASubgroup);
    }
    if rep.q() != group_code.q() || rep.len() != group_code.n() {
        return Err(CodeError::ShapeMismatch);
    }
    let mut best = ExtDist::Infinite;
    for c in group_code.words() {
        let w = rep.add(c)?.semimetric_weight();
        if w < best {
            best = w;
        }
        if best == ExtDist::Finite(0) {
            break;
        }
    }
    Ok(best)
}

/// Union of the cosets `rep + group_code` over the given representatives.
/// Representatives must lie in pairwise distinct cosets.
pub fn coset_lift(group_code: &Code, factor_reps: &[Word]) -> Result<Code> {
    if !is_subgroup(group_code)? {
        return Err(CodeError::NotASubgroup);
    }
    for (i, a) in factor_reps.iter().enumerate() {
        for b in factor_reps.iter().skip(i + 1) {
            if group_code.contains(&a.sub(b)?) {
                return Err(CodeError::DuplicateCoset);
            }
        }
    }
    let mut words = Vec::with_capacity(group_code.len() * factor_reps.len());
    for rep in factor_reps {
        for c in group_code.words() {
            words.push(rep.add(c)?);
        }
    }
    Code::new(group_code.q(), group_code.n(), words)
}

/// Greedy code over `Z_q^k` under the additive weighted distance
/// `sum_i w(x_i - y_i)`, scanning words in lexicographic order and keeping
/// those at weighted distance >= d_w from all kept words. The returned code
/// is maximal, so its size meets the ball-covering guarantee
/// `q^k / |ball(d_w - 1)|`, which is asserted.
pub fn greedy_gv_factor(weights: &WeightTable, k: usize, d_w: u64) -> Result<Vec<Word>> {
    if k == 0 || d_w == 0 {
        return Err(CodeError::Domain("need k >= 1 and d_w >= 1".into()));
    }
    let q = weights.q();
    for x in 0..q {
        if !weights.weight(x).is_finite() {
            return Err(CodeError::Domain(
                "greedy construction needs finite weights".into(),
            ));
        }
    }
    let wdist = |a: &Word, b: &Word| -> u64 {
        a.symbols()
            .iter()
            .zip(b.symbols())
            .map(|(&x, &y)| match weights.weight((x + q - y) % q) {
                ExtDist::Finite(v) => v,
                ExtDist::Infinite => unreachable!("weights checked finite"),
            })
            .sum()
    };
    let total = (q as u64).pow(k as u32);
    let mut kept: Vec<Word> = Vec::new();
    for i in 0..total {
        let w = word_from_index(i, q, k);
        if kept.iter().all(|c| wdist(c, &w) >= d_w) {
            kept.push(w);
        }
    }
    // ball size |{x : sum_i w(x_i) <= d_w - 1}| by per-coordinate convolution
    let radius = (d_w - 1) as usize;
    let mut ball = vec![0u64; radius + 1];
    ball[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u64; radius + 1];
        for (have, &count) in ball.iter().enumerate() {
            if count == 0 {
                continue;
            }
            for x in 0..q {
                if let ExtDist::Finite(wx) = weights.weight(x) {
                    let t = have + wx as usize;
                    if t <= radius {
                        next[t] += count;
                    }
                }
            }
        }
        ball = next;
    }
    let ball_size: u64 = ball.iter().sum();
    assert!(
        kept.len() as u64 * ball_size >= total,
        "greedy code of {} words misses the covering guarantee",
        kept.len()
    );
    Ok(kept)
}

/// Pentagon lower-bound construction: the base code of length `2k` lifted by
/// a greedy distance-`d` Hamming code over `F_5^k` embedded on the odd
/// coordinates, `x' -> (0, x'_1, 0, x'_2, ...)`.
pub fn construct_pentagon(k: usize, d: u64) -> Result<Code> {
    if k == 0 || d == 0 || d > k as u64 {
        return Err(CodeError::Domain(format!(
            "need 1 <= d <= k, got d = {d}, k = {k}"
        )));
    }
    let base = pentagon_base_code(k)?;
    let factor = greedy_gv_factor(&WeightTable::hamming(5), k, d)?;
    let reps: Vec<Word> = factor
        .iter()
        .map(|x| {
            let mut symbols = vec![0u16; 2 * k];
            for (i, &s) in x.symbols().iter().enumerate() {
                symbols[2 * i + 1] = s;
            }
            Word { q: 5, symbols }
        })
        .collect();
    coset_lift(&base, &reps)
}

/// The group code over `Z_q`, `q = 2^r + 1`, spanned by
/// `[I_{(r-1)k} | 2 I_k; 4 I_k; ...; 2^{r-1} I_k]`: the first `(r-1)k`
/// coordinates are free and the last `k` are the weighted block sums.
/// For `k = 1` this is the maximal independent set of the strong cube
/// `C_q^r` behind the achievability bound.
pub fn two_r_one_group(r: u32, k: usize) -> Result<Code> {
    if r < 2 {
        return Err(CodeError::Domain(format!("group exponent r = {r} < 2")));
    }
    if k == 0 {
        return Err(CodeError::Domain("k >= 1 required".into()));
    }
    let q = ((1u32 << r) + 1) as u16;
    let n = r as usize * k;
    let free = (r as usize - 1) * k;
    let total = (q as u64).pow(free as u32);
    let mut words = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut symbols = vec![0u16; n];
        for s in symbols.iter_mut().take(free) {
            *s = (idx % q as u64) as u16;
            idx /= q as u64;
        }
        // determined block: sum of 2^j times the j-th free block
        for m in 0..k {
            let mut acc = 0u64;
            for j in 1..r as usize {
                acc += (1u64 << j) * symbols[(j - 1) * k + m] as u64;
            }
            symbols[free + m] = (acc % q as u64) as u16;
        }
        words.push(Word { q, symbols });
    }
    Code::new(q, n, words)
}

/// Lower-bound construction for `q = 2^r + 1`: the group code of
/// [`two_r_one_group`] lifted by representatives `(0, ..., 0, x')` with
/// `x'` from a greedy q-ary Hamming-distance-`d` code.
pub fn construct_2r1(r: u32, k: usize, d: u64) -> Result<Code> {
    if k == 0 || d == 0 || d > k as u64 {
        return Err(CodeError::Domain(format!(
            "need 1 <= d <= k, got d = {d}, k = {k}"
        )));
    }
    let group = two_r_one_group(r, k)?;
    let q = group.q();
    let n = group.n();
    let free = (r as usize - 1) * k;
    let factor = greedy_gv_factor(&WeightTable::hamming(q), k, d)?;
    let reps: Vec<Word> = factor
        .iter()
        .map(|x| {
            let mut symbols = vec![0u16; n];
            symbols[free..].copy_from_slice(x.symbols());
            Word { q, symbols }
        })
        .collect();
    coset_lift(&group, &reps)
}

/// Per-symbol weights on `Z_q` with `w(0) = 0` and `w(x) = w(q - x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    q: u16,
    w: Vec<ExtDist>,
}

impl WeightTable {
    pub fn new(q: u16, w: Vec<ExtDist>) -> Result<WeightTable> {
        if q < 2 || w.len() != q as usize {
            return Err(CodeError::Domain(format!(
                "need one weight per symbol of Z_{q}"
            )));
        }
        if w[0] != ExtDist::Finite(0) {
            return Err(CodeError::Domain("w(0) must be 0".into()));
        }
        for x in 1..q as usize {
            if w[x] != w[q as usize - x] {
                return Err(CodeError::Domain(format!(
                    "weights must satisfy w(x) = w(q - x), broken at x = {x}"
                )));
            }
        }
        Ok(WeightTable { q, w })
    }

    /// Hamming weights: 0 at the origin, 1 elsewhere.
    pub fn hamming(q: u16) -> WeightTable {
        let mut w = vec![ExtDist::Finite(1); q as usize];
        w[0] = ExtDist::Finite(0);
        WeightTable { q, w }
    }

    /// The exact factor-weight table of the 9-cycle quotient:
    /// `(0,1,1,2,1,1,2,1,1)`.
    pub fn nine_cycle() -> WeightTable {
        let w = [0u64, 1, 1, 2, 1, 1, 2, 1, 1]
            .iter()
            .map(|&v| ExtDist::Finite(v))
            .collect();
        WeightTable { q: 9, w }
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn weight(&self, x: u16) -> ExtDist {
        self.w[(x % self.q) as usize]
    }
}

/// Writes a code in the plain text interchange format:
/// line 1 `q n`, then one word per line as space-separated symbols, LF
/// line endings, words in canonical order.
pub fn write_code<W: IoWrite>(out: &mut W, code: &Code) -> std::io::Result<()> {
    writeln!(out, "{} {}", code.q(), code.n())?;
    for w in code.words() {
        let line: Vec<String> = w.symbols().iter().map(|s| s.to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Reads the format written by [`write_code`], rejecting malformed lines and
/// out-of-range symbols with their line number.
pub fn read_code<R: BufRead>(input: R) -> Result<Code> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or(CodeError::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header = header.map_err(|e| CodeError::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    let mut parts = header.split_whitespace();
    let q: u16 = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(CodeError::Parse {
            line: 1,
            msg: "expected `q n` header".into(),
        })?;
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(CodeError::Parse {
            line: 1,
            msg: "expected `q n` header".into(),
        })?;
    if parts.next().is_some() {
        return Err(CodeError::Parse {
            line: 1,
            msg: "trailing tokens in header".into(),
        });
    }
    let mut words = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line.map_err(|e| CodeError::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut symbols = Vec::with_capacity(n);
        for tok in line.split_whitespace() {
            let s: u16 = tok.parse().map_err(|_| CodeError::Parse {
                line: lineno,
                msg: format!("bad symbol `{tok}`"),
            })?;
            if s >= q {
                return Err(CodeError::Parse {
                    line: lineno,
                    msg: format!("symbol {s} out of range for q = {q}"),
                });
            }
            symbols.push(s);
        }
        if symbols.len() != n {
            return Err(CodeError::Parse {
                line: lineno,
                msg: format!("expected {n} symbols, found {}", symbols.len()),
            });
        }
        words.push(Word { q, symbols });
    }
    if words.is_empty() {
        return Err(CodeError::Parse {
            line: 1,
            msg: "no codewords".into(),
        });
    }
    Code::new(q, n, words)
}
