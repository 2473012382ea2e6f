//! Backtracking discovery of upcycles, and the cross-join rearrangement.
//!
//! The search fixes the diamond pattern, places the window covering `0^n`
//! near the start (one rotation per upcycle), then fills the cycle left to
//! right. Each completed window marks the `a^q` words it covers in a bitset;
//! a second mark on any word prunes the branch.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{check_cap, checked_pow, pow_capped, Error, Result};
use crate::nonexist::{feasibility, is_curtained, Status, MAX_D_N};
use crate::pword::{for_each_covered, AnyWord, Char, CycPWord, Frame, Mark, PWord, Word};
use crate::verify::{verify_upcycle, verify_upword, UpcycleParams, COVERAGE_CAP};

/// Largest cycle length `a^(n-d)` searched.
pub const SEARCH_LENGTH_CAP: u128 = 1 << 20;

/// Tasks handed to worker threads; fixed so that results do not depend on
/// the thread count.
const TASK_TARGET: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub a: u32,
    pub n: usize,
    pub d: usize,
    /// Diamond residues of 1-based positions mod `n`; defaults to `{0}`
    /// (diamond last in the first window) for `d = 1`.
    pub diamond_offsets: Option<BTreeSet<usize>>,
    /// Fixed prefix of the cycle. Without one the window covering `0^n`
    /// starts within the first frame period.
    pub seed: Option<PWord>,
    pub limit: Option<usize>,
    /// Explore every branch and return the least `limit` canonical words.
    /// Otherwise return the first `limit` (default 1) words in search order,
    /// which fills the cycle left to right trying letters in ascending order.
    pub exhaustive: bool,
    pub threads: Option<usize>,
}

impl SearchSpec {
    pub fn new(a: u32, n: usize, d: usize) -> Self {
        SearchSpec {
            a,
            n,
            d,
            diamond_offsets: None,
            seed: None,
            limit: None,
            exhaustive: false,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Fixed(Char),
    Free,
}

struct Plan {
    a: u32,
    n: usize,
    len: usize,
    /// One fill template per admissible placement of the diamond pattern.
    templates: Vec<Vec<Slot>>,
}

fn plan(spec: &SearchSpec) -> Result<Option<Plan>> {
    let (a, n, d) = (spec.a, spec.n, spec.d);
    if a < 2 || n == 0 || d >= n {
        return Err(Error::Infeasible(format!(
            "need a ≥ 2 and 0 ≤ d < n; got ({a},{n},{d})"
        )));
    }
    let len = pow_capped("a^(n-d)", a as u64, n - d, SEARCH_LENGTH_CAP)?;
    check_cap(
        "a^n",
        checked_pow(a as u64, n).unwrap_or(u128::MAX),
        COVERAGE_CAP,
    )?;
    if d > 0 && n <= MAX_D_N && feasibility(a, n, d)?.status == Status::RuledOut {
        return Ok(None);
    }
    let offsets = match (&spec.diamond_offsets, d) {
        (Some(o), _) => o.clone(),
        (None, 0) => BTreeSet::new(),
        (None, 1) => BTreeSet::from([0]),
        (None, _) => {
            return Err(Error::Infeasible(
                "diamond offsets are required for d > 1".into(),
            ))
        }
    };
    if offsets.len() != d || offsets.iter().any(|&o| o >= n) {
        return Err(Error::Infeasible(format!(
            "need {d} distinct offsets below {n}"
        )));
    }
    let g = num_integer::gcd(n, len);
    if offsets.iter().any(|&o| !offsets.contains(&((o + g) % n))) {
        return Err(Error::Infeasible(format!(
            "offsets must be invariant under +{g} on a cycle of length {len}"
        )));
    }
    let diamond_at = |i: usize| offsets.contains(&((i + 1) % n));
    let templates = match &spec.seed {
        Some(seed) => {
            if seed.len() > len || seed.alphabet() != a {
                return Err(Error::Infeasible(
                    "seed longer than the cycle or over another alphabet".into(),
                ));
            }
            if let Some(i) = (0..seed.len()).find(|&i| seed.at(i).is_diamond() != diamond_at(i)) {
                return Err(Error::Infeasible(format!(
                    "seed position {} breaks the diamond pattern",
                    i + 1
                )));
            }
            let template = (0..len)
                .map(|i| match i < seed.len() {
                    true => Slot::Fixed(seed.at(i)),
                    false if diamond_at(i) => Slot::Fixed(Char::Diamond),
                    false => Slot::Free,
                })
                .collect();
            vec![template]
        }
        None => {
            let frame = Frame::linear(
                (0..n)
                    .map(|i| {
                        if diamond_at(i) {
                            Mark::Diamond
                        } else {
                            Mark::Solid
                        }
                    })
                    .collect(),
            );
            let (m, _) = frame.period();
            // One rotation of each upcycle puts its 0^n window at a start in
            // 0..m; the template is read from that start, so the window is
            // first. A curtained window cannot cover 0^n.
            (0..m)
                .filter(|&s| d == 0 || is_curtained(&frame.rotate(s)).is_none())
                .map(|s| {
                    (0..len)
                        .map(|t| match (diamond_at(s + t), t < n) {
                            (true, _) => Slot::Fixed(Char::Diamond),
                            (false, true) => Slot::Fixed(Char::Letter(0)),
                            (false, false) => Slot::Free,
                        })
                        .collect()
                })
                .collect()
        }
    };
    Ok(Some(Plan {
        a,
        n,
        len,
        templates,
    }))
}

/// Backtracking state: the filled prefix and the words its windows cover.
struct Search<'p> {
    plan: &'p Plan,
    template: &'p [Slot],
    word: Vec<Char>,
    covered: Vec<bool>,
    log: Vec<usize>,
    frames: Vec<usize>,
    window: Vec<Char>,
    hits: Vec<usize>,
}

impl<'p> Search<'p> {
    fn new(plan: &'p Plan, template: &'p [Slot]) -> Self {
        Search {
            plan,
            template,
            word: Vec::with_capacity(plan.len),
            covered: vec![false; (plan.a as usize).pow(plan.n as u32)],
            log: Vec::new(),
            frames: Vec::new(),
            window: Vec::with_capacity(plan.n),
            hits: Vec::new(),
        }
    }

    /// Collects the words covered by the window at `t` into `hits`; false if
    /// one is already covered.
    fn window_free(&mut self, t: usize) -> bool {
        let len = self.plan.len;
        self.window.clear();
        self.window
            .extend((0..self.plan.n).map(|j| self.word[(t + j) % len]));
        self.hits.clear();
        let (hits, covered) = (&mut self.hits, &self.covered);
        let mut free = true;
        for_each_covered(&self.window, self.plan.a, |v| {
            free &= !covered[v];
            hits.push(v);
        });
        free
    }

    fn mark(&mut self, t: usize) -> bool {
        if !self.window_free(t) {
            return false;
        }
        for &v in &self.hits {
            self.covered[v] = true;
            self.log.push(v);
        }
        true
    }

    /// Appends `c`, marking every window it completes. On a clash the state
    /// is left unchanged.
    fn push(&mut self, c: Char) -> bool {
        let (n, len) = (self.plan.n, self.plan.len);
        self.frames.push(self.log.len());
        self.word.push(c);
        let q = self.word.len();
        let mut ok = q < n || self.mark(q - n);
        if ok && q == len {
            // windows that wrap around the end
            ok = (len + 1 - n.min(len)..len).all(|t| self.mark(t));
        }
        if !ok {
            self.pop();
        }
        ok
    }

    fn pop(&mut self) {
        let keep = self.frames.pop().expect("nonempty");
        for v in self.log.drain(keep..) {
            self.covered[v] = false;
        }
        self.word.pop();
    }

    fn options(&self) -> Vec<Char> {
        match self.template[self.word.len()] {
            Slot::Fixed(c) => vec![c],
            Slot::Free => (0..self.plan.a).map(Char::Letter).collect(),
        }
    }

    fn dfs(&mut self, found: &mut Vec<CycPWord>, stop: Option<usize>) {
        if stop.is_some_and(|s| found.len() >= s) {
            return;
        }
        if self.word.len() == self.plan.len {
            let u = CycPWord::new(self.word.clone(), self.plan.a)
                .expect("letters in range")
                .canonical_rotation();
            if !found.contains(&u) {
                found.push(u);
            }
            return;
        }
        for c in self.options() {
            if self.push(c) {
                self.dfs(found, stop);
                self.pop();
            }
        }
    }

    fn prefixes(&mut self, depth: usize, out: &mut Vec<Vec<Char>>) {
        if self.word.len() >= depth {
            out.push(self.word.clone());
            return;
        }
        for c in self.options() {
            if self.push(c) {
                self.prefixes(depth, out);
                self.pop();
            }
        }
    }
}

/// Splits each template into prefixes with about [`TASK_TARGET`] branches.
fn tasks(plan: &Plan) -> Vec<(usize, Vec<Char>)> {
    let mut out = Vec::new();
    for (s, template) in plan.templates.iter().enumerate() {
        let (mut depth, mut count) = (0, 1usize);
        while depth < plan.len && count < TASK_TARGET {
            if template[depth] == Slot::Free {
                count *= plan.a as usize;
            }
            depth += 1;
        }
        let mut prefixes = Vec::new();
        Search::new(plan, template).prefixes(depth, &mut prefixes);
        out.extend(prefixes.into_iter().map(|p| (s, p)));
    }
    out
}

fn run(plan: &Plan, spec: &SearchSpec) -> Vec<CycPWord> {
    let stop = if spec.exhaustive {
        None
    } else {
        Some(spec.limit.unwrap_or(1))
    };
    let per_task: Vec<Vec<CycPWord>> = tasks(plan)
        .into_par_iter()
        .map(|(s, prefix)| {
            let mut search = Search::new(plan, &plan.templates[s]);
            let mut found = Vec::new();
            if prefix.iter().all(|&c| search.push(c)) {
                search.dfs(&mut found, stop);
            }
            found
        })
        .collect();
    // tasks are in search order, so this is the search-order prefix
    let mut seen = BTreeSet::new();
    for u in per_task.into_iter().flatten() {
        if stop.is_some_and(|s| seen.len() >= s) {
            break;
        }
        seen.insert(u);
    }
    let mut all: Vec<CycPWord> = seen.into_iter().collect();
    if let Some(limit) = spec.limit {
        all.truncate(limit);
    }
    all
}

/// Upcycles with parameters `(a,n,d)` and the requested diamond pattern, as
/// canonical rotations in ascending order without duplicates.
///
/// Parameters ruled out by the feasibility filters give an empty result.
pub fn search_upcycles(spec: &SearchSpec) -> Result<Vec<CycPWord>> {
    let Some(plan) = plan(spec)? else {
        return Ok(Vec::new());
    };
    let results = match spec.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(|| run(&plan, spec)),
        None => run(&plan, spec),
    };
    let expected = UpcycleParams {
        a: spec.a,
        n: spec.n,
        d: spec.d,
    };
    for u in &results {
        let report = verify_upcycle(u, spec.n)?;
        if !report.valid || report.params != Some(expected) {
            return Err(Error::NotUpcycle(format!("search produced {u}: {report}")));
        }
    }
    Ok(results)
}

/// A cross-join: `x` starts at 1-based `ix` and `jx`, `y` at `iy` and `jy`,
/// with `ix < iy < jx < jy` in cyclic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CrossJoin {
    pub ix: usize,
    pub iy: usize,
    pub jx: usize,
    pub jy: usize,
}

fn slice_at(chars: &[Char], start: usize, k: usize) -> Vec<Char> {
    (0..k).map(|j| chars[(start + j) % chars.len()]).collect()
}

fn window_multiset(chars: &[Char], n: usize, cyclic: bool) -> BTreeMap<Vec<Char>, usize> {
    let count = if cyclic {
        chars.len()
    } else {
        (chars.len() + 1).saturating_sub(n)
    };
    let mut m = BTreeMap::new();
    for t in 0..count {
        *m.entry(slice_at(chars, t, n)).or_insert(0) += 1;
    }
    m
}

/// `u_1…u_(ix-1) u_jx…u_(jy-1) u_iy…u_(jx-1) u_ix…u_(iy-1) u_jy…` for
/// `(n-1)`-substrings `x` and `y`. The window multiset is checked unchanged.
pub fn cross_join(
    w: &AnyWord,
    n: usize,
    x: &[Char],
    y: &[Char],
    at: &CrossJoin,
) -> Result<AnyWord> {
    let chars = w.chars();
    let (len, cyclic) = (chars.len(), matches!(w, AnyWord::Cyclic(_)));
    if n < 2 || x.len() != n - 1 || y.len() != n - 1 {
        return Err(Error::Precondition(format!(
            "x and y must have length n-1 = {}",
            n.saturating_sub(1)
        )));
    }
    let positions = [at.ix, at.iy, at.jx, at.jy];
    if positions.iter().any(|&p| p == 0 || p > len) {
        return Err(Error::Precondition(format!(
            "positions must lie in 1..={len}"
        )));
    }
    let [ix, iy, jx, jy] = positions.map(|p| p - 1);
    let off = |p: usize| (p + len - ix) % len;
    if !(0 < off(iy) && off(iy) < off(jx) && off(jx) < off(jy)) {
        return Err(Error::Precondition(
            "need ix < iy < jx < jy in cyclic order".into(),
        ));
    }
    if !cyclic && !(ix < iy && jy + n - 1 <= len) {
        return Err(Error::Precondition(
            "linear cross-join needs ix < iy < jx < jy and room for y at jy".into(),
        ));
    }
    for (what, p, s) in [("x", ix, x), ("x", jx, x), ("y", iy, y), ("y", jy, y)] {
        if slice_at(chars, p, n - 1) != s {
            return Err(Error::Precondition(format!(
                "{what} does not occur at position {}",
                p + 1
            )));
        }
    }
    // rotate so that ix is first, apply the linear rule, rotate back
    let rot: Vec<Char> = (0..len).map(|j| chars[(ix + j) % len]).collect();
    let (b, c, dd) = (off(iy), off(jx), off(jy));
    let mut out = Vec::with_capacity(len);
    out.extend_from_slice(&rot[c..dd]);
    out.extend_from_slice(&rot[b..c]);
    out.extend_from_slice(&rot[..b]);
    out.extend_from_slice(&rot[dd..]);
    let out: Vec<Char> = (0..len).map(|j| out[(j + len - ix) % len]).collect();
    if window_multiset(&out, n, cyclic) != window_multiset(chars, n, cyclic) {
        return Err(Error::Precondition(
            "cross-join changed the window multiset".into(),
        ));
    }
    Ok(match w {
        AnyWord::Cyclic(u) => AnyWord::Cyclic(CycPWord::new(out, u.alphabet())?),
        AnyWord::Linear(u) => AnyWord::Linear(PWord::new(out, u.alphabet())?),
    })
}

/// Checks that the cross-join result passes the verifier its input passes.
pub fn cross_join_verified(
    w: &AnyWord,
    n: usize,
    x: &[Char],
    y: &[Char],
    at: &CrossJoin,
) -> Result<AnyWord> {
    let out = cross_join(w, n, x, y, at)?;
    let valid = |v: &AnyWord| -> Result<bool> {
        Ok(match v {
            AnyWord::Cyclic(u) => verify_upcycle(u, n)?.valid,
            AnyWord::Linear(u) => verify_upword(u, n)?.valid,
        })
    };
    if valid(w)? && !valid(&out)? {
        return Err(Error::NotUpcycle(
            "cross-join output fails verification".into(),
        ));
    }
    Ok(out)
}

/// Cross-joins of the cyclic word `u`: pairs of repeated `(n-1)`-substrings
/// whose occurrences interleave, ordered by position, skipping those that
/// leave `u` unchanged. At most `limit` are returned.
pub fn find_cross_joins(
    u: &CycPWord,
    n: usize,
    limit: usize,
) -> Vec<(Vec<Char>, Vec<Char>, CrossJoin)> {
    let len = u.len();
    if n < 2 {
        return Vec::new();
    }
    let mut occurrences: BTreeMap<Vec<Char>, Vec<usize>> = BTreeMap::new();
    for p in 0..len {
        occurrences
            .entry(slice_at(u.chars(), p, n - 1))
            .or_default()
            .push(p);
    }
    let key_at: Vec<Vec<Char>> = (0..len).map(|p| slice_at(u.chars(), p, n - 1)).collect();
    let mut out = Vec::new();
    for ix in 0..len {
        let xs = &occurrences[&key_at[ix]];
        if xs.len() < 2 {
            continue;
        }
        for iy in ix + 1..len {
            let ys = &occurrences[&key_at[iy]];
            if ys.len() < 2 {
                continue;
            }
            for &jx in xs.iter().filter(|&&jx| jx > iy) {
                for &jy in ys.iter().filter(|&&jy| jy > jx) {
                    let at = CrossJoin {
                        ix: ix + 1,
                        iy: iy + 1,
                        jx: jx + 1,
                        jy: jy + 1,
                    };
                    let w = AnyWord::Cyclic(u.clone());
                    let (x, y) = (key_at[ix].clone(), key_at[iy].clone());
                    match cross_join(&w, n, &x, &y, &at) {
                        Ok(AnyWord::Cyclic(v)) if v != *u => out.push((x, y, at)),
                        _ => continue,
                    }
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
    }
    out
}
