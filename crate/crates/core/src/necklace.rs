//! Perfect necklaces: astute graphs, Euler-tour necklaces, and expansions of
//! De Bruijn cycles.
//!
//! An `(a,n,t)`-perfect necklace is a cyclic word of length `t·a^n` in which,
//! for each residue `j` mod `t`, the `n`-windows at positions `≡ j` enumerate
//! `A^n` exactly once. A De Bruijn cycle is an `(a,n,1)`-perfect necklace.

use std::fmt;

use num_integer::gcd;

use crate::error::{check_cap, pow_capped, Error, Result};
use crate::pword::{index_word, CycPWord, Word};
use crate::verify::{necklace_defect, COVERAGE_CAP};

/// Largest edge count `t·a^(n+1)` of a materialised astute graph.
pub const GRAPH_CAP: u128 = 1 << 24;

/// A cyclic total word certified as an `(a,n,t)`-perfect necklace.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Necklace {
    word: CycPWord,
    pub a: u32,
    pub n: usize,
    pub t: usize,
}

impl Necklace {
    /// Certifies `word`; fails with the first defect found.
    pub fn certify(word: CycPWord, a: u32, n: usize, t: usize) -> Result<Self> {
        if word.alphabet() != a {
            return Err(Error::AlphabetMismatch {
                expected: a,
                found: word.alphabet(),
            });
        }
        match necklace_defect(&word, a, n, t) {
            None => Ok(Necklace { word, a, n, t }),
            Some(why) => Err(Error::NotNecklace(format!("({a},{n},{t}): {why}"))),
        }
    }

    pub fn word(&self) -> &CycPWord {
        &self.word
    }

    pub fn letters(&self) -> Vec<u32> {
        self.word.letters().expect("necklaces are total")
    }

    /// Parses a `NECKLACE a=<a> n=<n> t=<t>` header followed by the word.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or(Error::EmptyInput)?;
        let (a, n, t) = parse_header(header)?;
        let body: String = lines.collect();
        let word = CycPWord::parse(&body, a)?;
        Self::certify(word, a, n, t)
    }
}

fn parse_header(header: &str) -> Result<(u32, usize, usize)> {
    let mut parts = header.split_whitespace();
    if parts.next() != Some("NECKLACE") {
        return Err(Error::InvalidParameter("expected a NECKLACE header".into()));
    }
    let (mut a, mut n, mut t) = (None, None, None);
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("malformed header field {part:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("malformed header field {part:?}")))?;
        match key {
            "a" => a = Some(value as u32),
            "n" => n = Some(value),
            "t" => t = Some(value),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown header field {key:?}"
                )))
            }
        }
    }
    match (a, n, t) {
        (Some(a), Some(n), Some(t)) => Ok((a, n, t)),
        _ => Err(Error::InvalidParameter("header needs a=, n= and t=".into())),
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "NECKLACE a={} n={} t={}", self.a, self.n, self.t)?;
        write!(f, "{}", self.word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AstuteEdge {
    pub from: usize,
    pub to: usize,
    /// The letter `y` appended by the edge.
    pub label: u32,
    /// Index of the full label `xvy` in `A^(n+1)`.
    pub full: usize,
}

/// The astute graph `G(a,n,t)`: vertices `(w, s)` with `w ∈ A^n`, `s ∈ Z_t`,
/// edges `(xv, s) → (vy, s+1)`.
///
/// Vertex `(w, s)` has id `s·a^n + index(w)`; edge id `v·a + y` leaves vertex
/// `v` with label `y`, so each out-list is sorted by label.
#[derive(Debug, Clone)]
pub struct AstuteGraph {
    pub a: u32,
    pub n: usize,
    pub t: usize,
    words: usize,
    pub edges: Vec<AstuteEdge>,
}

impl AstuteGraph {
    pub fn vertex_count(&self) -> usize {
        self.words * self.t
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, word: &[u32], phase: usize) -> usize {
        let idx = word
            .iter()
            .fold(0usize, |acc, &x| acc * self.a as usize + x as usize);
        (phase % self.t) * self.words + idx
    }

    /// `(word, phase)` for a vertex id.
    pub fn vertex(&self, id: usize) -> (Vec<u32>, usize) {
        (index_word(id % self.words, self.a, self.n), id / self.words)
    }

    pub fn out_edges(&self, v: usize) -> std::ops::Range<usize> {
        let a = self.a as usize;
        v * a..(v + 1) * a
    }

    pub fn edge_from(&self, v: usize, label: u32) -> usize {
        v * self.a as usize + label as usize
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.to == v).count()
    }
}

pub fn build_astute(a: u32, n: usize, t: usize) -> Result<AstuteGraph> {
    if a == 0 || t == 0 {
        return Err(Error::InvalidParameter("a and t must be positive".into()));
    }
    let words = pow_capped("a^n", a as u64, n, GRAPH_CAP)?;
    check_cap(
        "t·a^(n+1)",
        (t as u128) * (words as u128) * (a as u128),
        GRAPH_CAP,
    )?;
    let au = a as usize;
    let mut edges = Vec::with_capacity(t * words * au);
    for phase in 0..t {
        for w in 0..words {
            let from = phase * words + w;
            for y in 0..au {
                let full = w * au + y;
                let to = ((phase + 1) % t) * words + full % words;
                edges.push(AstuteEdge {
                    from,
                    to,
                    label: y as u32,
                    full,
                });
            }
        }
    }
    Ok(AstuteGraph {
        a,
        n,
        t,
        words,
        edges,
    })
}

/// Hierholzer's algorithm restricted to unused edges, taking each vertex's
/// edges in ascending label order. Returns the edge sequence of a trail from
/// `start` that uses every edge reachable from it.
fn hierholzer(g: &AstuteGraph, used: &mut [bool], start: usize) -> Vec<usize> {
    let mut next: Vec<usize> = (0..g.vertex_count())
        .map(|v| g.out_edges(v).start)
        .collect();
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut trail = Vec::with_capacity(used.len());
    while let Some(&(v, via)) = stack.last() {
        let end = g.out_edges(v).end;
        while next[v] < end && used[next[v]] {
            next[v] += 1;
        }
        if next[v] < end {
            let e = next[v];
            used[e] = true;
            stack.push((g.edges[e].to, Some(e)));
        } else {
            stack.pop();
            if let Some(e) = via {
                trail.push(e);
            }
        }
    }
    trail.reverse();
    trail
}

/// Optional requirement on an Euler-tour necklace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    None,
    /// The necklace begins with `t` zeros.
    ZerosPrefix,
    /// The given word of length `n + 1` occurs in the necklace (needs `t ≥ n`).
    ContainWord(Vec<u32>),
}

/// An `(a,n,t)`-perfect necklace read off an Euler tour of `G(a,n-1,t)`.
///
/// Tours start at `(0^(n-1), 0)` and take edges in ascending label order, so
/// the output is a function of the inputs alone.
pub fn euler_necklace(a: u32, n: usize, t: usize, constraint: &Constraint) -> Result<Necklace> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let g = build_astute(a, n - 1, t)?;
    let mut used = vec![false; g.edge_count()];
    let edges: Vec<usize> = match constraint {
        Constraint::None => hierholzer(&g, &mut used, 0),
        Constraint::ZerosPrefix => {
            // the 0-labelled cycle through every (0^(n-1), s)
            let mut tour = Vec::with_capacity(g.edge_count());
            let mut v = 0;
            for _ in 0..t {
                let e = g.edge_from(v, 0);
                used[e] = true;
                tour.push(e);
                v = g.edges[e].to;
            }
            tour.extend(hierholzer(&g, &mut used, 0));
            tour
        }
        Constraint::ContainWord(x) => contain_word_tour(&g, &mut used, x)?,
    };
    if edges.len() != g.edge_count() {
        return Err(Error::Precondition(format!(
            "Euler tour covered {} of {} edges",
            edges.len(),
            g.edge_count()
        )));
    }
    let letters: Vec<u32> = edges.iter().map(|&e| g.edges[e].label).collect();
    Necklace::certify(CycPWord::from_letters(&letters, a)?, a, n, t)
}

/// Walks `x` from the start vertex prescribed for `t` versus `n`, removes the
/// walk, and closes it with an Euler trail of the remaining edges.
fn contain_word_tour(g: &AstuteGraph, used: &mut [bool], x: &[u32]) -> Result<Vec<usize>> {
    let (a, n, t) = (g.a, g.n + 1, g.t);
    if a < 2 || n < 2 || t < n {
        return Err(Error::Precondition(format!(
            "containing a word needs a > 1, n > 1 and t ≥ n (got a={a}, n={n}, t={t})"
        )));
    }
    if x.len() != n + 1 {
        return Err(Error::InvalidParameter(format!(
            "word must have length n + 1 = {}",
            n + 1
        )));
    }
    if let Some(&l) = x.iter().find(|&&l| l >= a) {
        return Err(Error::LetterOutOfRange {
            letter: l,
            alphabet: a,
        });
    }
    let start_word: Vec<u32> = if t == n {
        // (x_2', …, x_n') with x_i' ≠ x_i
        x[1..n].iter().map(|&l| (l + 1) % a).collect()
    } else {
        vec![0; n - 1]
    };
    let start = g.vertex_id(&start_word, 0);
    let mut walk = Vec::with_capacity(n + 1);
    let mut v = start;
    for &l in x {
        let e = g.edge_from(v, l);
        if std::mem::replace(&mut used[e], true) {
            return Err(Error::Precondition("the walk repeats an edge".into()));
        }
        walk.push(e);
        v = g.edges[e].to;
    }
    walk.extend(hierholzer(g, used, v));
    match walk.last() {
        Some(&e) if g.edges[e].to == start => Ok(walk),
        _ => Err(Error::Precondition(
            "the remaining trail does not close the tour".into(),
        )),
    }
}

/// Concatenation of `A^n` in lexicographic order: an `(a,n,n)`-necklace.
pub fn lex_necklace(a: u32, n: usize) -> Result<Necklace> {
    let count = pow_capped("a^n", a as u64, n, COVERAGE_CAP)?;
    check_cap("n·a^n", (n as u128) * (count as u128), COVERAGE_CAP)?;
    let letters: Vec<u32> = (0..count).flat_map(|i| index_word(i, a, n)).collect();
    Necklace::certify(CycPWord::from_letters(&letters, a)?, a, n, n)
}

/// From an `(a,n,n+r)`-necklace with `0 ≤ r < n`, the `(a,n,nq+r)`-necklace
/// whose blocks repeat their first `n` letters `q` times.
pub fn stretch_necklace(w: &Necklace, q: usize) -> Result<Necklace> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    let (n, t) = (w.n, w.t);
    if t < n || t >= 2 * n {
        return Err(Error::Precondition(format!(
            "t = {t} is not n + r with 0 ≤ r < n = {n}"
        )));
    }
    let letters = w.letters();
    let mut out = Vec::with_capacity(letters.len() / t * (n * q + t - n));
    for block in letters.chunks(t) {
        for _ in 0..q {
            out.extend_from_slice(&block[..n]);
        }
        out.extend_from_slice(&block[n..]);
    }
    Necklace::certify(CycPWord::from_letters(&out, w.a)?, w.a, n, n * q + t - n)
}

/// The `n` with `|w| = a^n`, after checking `w` is a De Bruijn cycle.
pub fn debruijn_order(w: &CycPWord) -> Result<usize> {
    let a = w.alphabet() as usize;
    let len = w.len();
    if a < 2 {
        return Err(Error::Alphabet(a as u32));
    }
    let mut n = 0;
    let mut p = 1usize;
    while p < len {
        p *= a;
        n += 1;
    }
    if p != len {
        return Err(Error::NotDeBruijn(format!(
            "length {len} is not a power of {a}"
        )));
    }
    match necklace_defect(w, a as u32, n, 1) {
        None => Ok(n),
        Some(why) => Err(Error::NotDeBruijn(why)),
    }
}

/// Blocks `w_{rp} … w_{rp+n-1} w_{rp} … w_{rp+r-1}` for `p = 0 … a^n - 1`
/// (indices mod `a^n`): an `(a,n,n+r)`-necklace when `gcd(a^n, r) = 1`.
pub fn rotate_expand(w: &CycPWord, r: usize) -> Result<Necklace> {
    let n = debruijn_order(w)?;
    let len = w.len();
    if r == 0 || r > n {
        return Err(Error::InvalidParameter(format!("r = {r} not in 1..={n}")));
    }
    if gcd(len as u128, r as u128) != 1 {
        return Err(Error::Divisibility(format!(
            "gcd(a^n, r) = gcd({len}, {r}) ≠ 1"
        )));
    }
    let letters = w.letters().expect("De Bruijn cycles are total");
    let mut out = Vec::with_capacity((n + r) * len);
    for p in 0..len {
        let s = r * p;
        out.extend((0..n).map(|j| letters[(s + j) % len]));
        out.extend((0..r).map(|j| letters[(s + j) % len]));
    }
    Necklace::certify(
        CycPWord::from_letters(&out, w.alphabet())?,
        w.alphabet(),
        n,
        n + r,
    )
}

/// Blocks `w_{-p} … w_{-p+n-1} w_{-p} … w_{-p+n-2}` for `p = 0 … a^n - 1`:
/// an `(a,n,2n-1)`-necklace.
pub fn reflect_expand(w: &CycPWord) -> Result<Necklace> {
    let n = debruijn_order(w)?;
    let len = w.len();
    let letters = w.letters().expect("De Bruijn cycles are total");
    let mut out = Vec::with_capacity((2 * n - 1) * len);
    for p in 0..len {
        let s = (len - p) % len;
        out.extend((0..n).map(|j| letters[(s + j) % len]));
        out.extend((0..n - 1).map(|j| letters[(s + j) % len]));
    }
    Necklace::certify(
        CycPWord::from_letters(&out, w.alphabet())?,
        w.alphabet(),
        n,
        2 * n - 1,
    )
}
