//! Partial words over `{0, …, a-1} ∪ {⋄}`, read linearly or cyclically.
//!
//! Positions reported to callers are 1-based; internal slices are 0-based.
//!
//! Text format: letters are `0-9` then `a-z` (so at most 36 letters), a diamond
//! is `*` (`⋄` and `◇` are accepted on input), a cyclic word is wrapped in
//! parentheses. Whitespace is ignored when parsing and never emitted.

use std::fmt;

use crate::error::{Error, Result};

/// Largest alphabet the text format can express.
pub const MAX_TEXT_ALPHABET: u32 = 36;

/// A letter or the wildcard. `Letter` sorts before `Diamond`, which is the
/// order canonical rotations are taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Char {
    Letter(u32),
    Diamond,
}

impl Char {
    pub fn is_diamond(self) -> bool {
        matches!(self, Char::Diamond)
    }

    pub fn letter(self) -> Option<u32> {
        match self {
            Char::Letter(x) => Some(x),
            Char::Diamond => None,
        }
    }

    /// Wildcard match: a diamond covers anything.
    pub fn covers_letter(self, y: u32) -> bool {
        match self {
            Char::Letter(x) => x == y,
            Char::Diamond => true,
        }
    }

    /// Partial-word cover: `self` covers `other` when it is a diamond or the
    /// two are equal.
    pub fn covers(self, other: Char) -> bool {
        self.is_diamond() || self == other
    }
}

pub fn letter_to_char(x: u32) -> char {
    std::char::from_digit(x, MAX_TEXT_ALPHABET).expect("letter exceeds text alphabet")
}

fn char_from_text(c: char) -> Option<Char> {
    match c {
        '*' | '⋄' | '◇' => Some(Char::Diamond),
        _ => c.to_digit(MAX_TEXT_ALPHABET).map(Char::Letter),
    }
}

fn format_chars(chars: &[Char]) -> String {
    chars
        .iter()
        .map(|c| match c {
            Char::Letter(x) => letter_to_char(*x),
            Char::Diamond => '*',
        })
        .collect()
}

/// Behaviour shared by linear and cyclic partial words.
pub trait Word {
    fn chars(&self) -> &[Char];
    fn alphabet(&self) -> u32;
    fn is_cyclic(&self) -> bool;

    fn len(&self) -> usize {
        self.chars().len()
    }

    fn is_empty(&self) -> bool {
        self.chars().is_empty()
    }

    /// Number of `k`-windows: `|u|` for cyclic words, `|u| - k + 1` for linear ones.
    fn window_count(&self, k: usize) -> usize {
        if self.is_cyclic() {
            self.len()
        } else {
            (self.len() + 1).saturating_sub(k)
        }
    }

    /// Character at 0-based index `i` (wrapping for cyclic words).
    fn at(&self, i: usize) -> Char {
        let chars = self.chars();
        if self.is_cyclic() {
            chars[i % chars.len()]
        } else {
            chars[i]
        }
    }

    /// The `k`-window starting at 0-based index `start`.
    fn window_at(&self, start: usize, k: usize) -> Vec<Char> {
        (start..start + k).map(|i| self.at(i)).collect()
    }

    fn diamond_count(&self) -> usize {
        self.chars().iter().filter(|c| c.is_diamond()).count()
    }

    fn is_total(&self) -> bool {
        self.chars().iter().all(|c| !c.is_diamond())
    }

    /// Letters of a total word; `None` if a diamond is present.
    fn letters(&self) -> Option<Vec<u32>> {
        self.chars().iter().map(|c| c.letter()).collect()
    }
}

fn check_letters(chars: &[Char], alphabet: u32) -> Result<()> {
    if alphabet == 0 {
        return Err(Error::Alphabet(alphabet));
    }
    for c in chars {
        if let Char::Letter(x) = *c {
            if x >= alphabet {
                return Err(Error::LetterOutOfRange {
                    letter: x,
                    alphabet,
                });
            }
        }
    }
    Ok(())
}

/// A linear partial word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PWord {
    chars: Vec<Char>,
    alphabet: u32,
}

/// A cyclic partial word; index `i` and `i + len` denote the same position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycPWord {
    chars: Vec<Char>,
    alphabet: u32,
}

impl PWord {
    pub fn new(chars: Vec<Char>, alphabet: u32) -> Result<Self> {
        check_letters(&chars, alphabet)?;
        Ok(PWord { chars, alphabet })
    }

    pub fn from_letters(letters: &[u32], alphabet: u32) -> Result<Self> {
        Self::new(letters.iter().map(|&x| Char::Letter(x)).collect(), alphabet)
    }

    pub fn parse(text: &str, alphabet: u32) -> Result<Self> {
        match parse_pword(text, alphabet, false)? {
            AnyWord::Linear(w) => Ok(w),
            AnyWord::Cyclic(_) => unreachable!(),
        }
    }

    pub fn into_chars(self) -> Vec<Char> {
        self.chars
    }

    pub fn apply_symmetry(&self, op: &SymmetryOp) -> Result<Self> {
        Ok(PWord {
            chars: transform(&self.chars, self.alphabet, op)?,
            alphabet: self.alphabet,
        })
    }
}

impl CycPWord {
    pub fn new(chars: Vec<Char>, alphabet: u32) -> Result<Self> {
        if chars.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_letters(&chars, alphabet)?;
        Ok(CycPWord { chars, alphabet })
    }

    pub fn from_letters(letters: &[u32], alphabet: u32) -> Result<Self> {
        Self::new(letters.iter().map(|&x| Char::Letter(x)).collect(), alphabet)
    }

    pub fn parse(text: &str, alphabet: u32) -> Result<Self> {
        match parse_pword(text, alphabet, true)? {
            AnyWord::Cyclic(w) => Ok(w),
            AnyWord::Linear(_) => unreachable!(),
        }
    }

    pub fn into_chars(self) -> Vec<Char> {
        self.chars
    }

    /// Same characters, larger alphabet (letters are unchanged).
    pub fn with_alphabet(&self, alphabet: u32) -> Result<Self> {
        Self::new(self.chars.clone(), alphabet)
    }

    /// `u^q`: `q` copies concatenated.
    pub fn power(&self, q: usize) -> CycPWord {
        let mut chars = Vec::with_capacity(self.chars.len() * q);
        for _ in 0..q {
            chars.extend_from_slice(&self.chars);
        }
        CycPWord {
            chars,
            alphabet: self.alphabet,
        }
    }

    /// Left rotation: the result starts at 0-based index `r` of `self`.
    pub fn rotate(&self, r: isize) -> CycPWord {
        CycPWord {
            chars: rotated(&self.chars, r),
            alphabet: self.alphabet,
        }
    }

    pub fn apply_symmetry(&self, op: &SymmetryOp) -> Result<Self> {
        Ok(CycPWord {
            chars: transform(&self.chars, self.alphabet, op)?,
            alphabet: self.alphabet,
        })
    }

    /// The same characters read linearly.
    pub fn to_linear(&self) -> PWord {
        PWord {
            chars: self.chars.clone(),
            alphabet: self.alphabet,
        }
    }

    /// Lexicographically least rotation (letters before diamonds).
    pub fn canonical_rotation(&self) -> CycPWord {
        let r = least_rotation(&self.chars);
        self.rotate(r as isize)
    }

    /// Whether `other` is a rotation of `self`; returns the 0-based shift `r`
    /// with `self.rotate(r) == other`.
    pub fn rotation_to(&self, other: &CycPWord) -> Option<usize> {
        if self.len() != other.len() || self.alphabet != other.alphabet {
            return None;
        }
        let n = self.len();
        (0..n).find(|&r| (0..n).all(|i| self.chars[(i + r) % n] == other.chars[i]))
    }
}

impl Word for PWord {
    fn chars(&self) -> &[Char] {
        &self.chars
    }
    fn alphabet(&self) -> u32 {
        self.alphabet
    }
    fn is_cyclic(&self) -> bool {
        false
    }
}

impl Word for CycPWord {
    fn chars(&self) -> &[Char] {
        &self.chars
    }
    fn alphabet(&self) -> u32 {
        self.alphabet
    }
    fn is_cyclic(&self) -> bool {
        true
    }
}

impl fmt::Display for PWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_chars(&self.chars))
    }
}

impl fmt::Display for CycPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", format_chars(&self.chars))
    }
}

/// Result of [`parse_pword`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyWord {
    Linear(PWord),
    Cyclic(CycPWord),
}

impl AnyWord {
    /// Parses a word whose cyclicity is given by the presence of parentheses.
    pub fn parse_auto(text: &str, alphabet: u32) -> Result<Self> {
        let cyclic = text.trim_start().starts_with('(');
        parse_pword(text, alphabet, cyclic)
    }

    pub fn chars(&self) -> &[Char] {
        match self {
            AnyWord::Linear(w) => w.chars(),
            AnyWord::Cyclic(w) => w.chars(),
        }
    }
}

impl fmt::Display for AnyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyWord::Linear(w) => w.fmt(f),
            AnyWord::Cyclic(w) => w.fmt(f),
        }
    }
}

/// Parses the text format. A cyclic word may be given with or without its
/// parentheses; a linear word must be bare.
pub fn parse_pword(text: &str, alphabet: u32, cyclic: bool) -> Result<AnyWord> {
    if alphabet == 0 {
        return Err(Error::Alphabet(alphabet));
    }
    let body: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let opens = body.matches('(').count();
    let closes = body.matches(')').count();
    let inner = if opens == 0 && closes == 0 {
        body.as_str()
    } else if opens == 1 && closes == 1 && body.starts_with('(') && body.ends_with(')') {
        if !cyclic {
            return Err(Error::Delimiters("a linear word cannot be parenthesised"));
        }
        &body[1..body.len() - 1]
    } else {
        return Err(Error::Delimiters(
            "expected a single enclosing pair of parentheses",
        ));
    };
    if inner.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut chars = Vec::with_capacity(inner.len());
    for (offset, c) in inner.chars().enumerate() {
        match char_from_text(c) {
            Some(Char::Letter(x)) if x >= alphabet => {
                return Err(Error::BadCharacter {
                    ch: c,
                    offset,
                    alphabet,
                })
            }
            Some(ch) => chars.push(ch),
            None => {
                return Err(Error::BadCharacter {
                    ch: c,
                    offset,
                    alphabet,
                })
            }
        }
    }
    Ok(if cyclic {
        AnyWord::Cyclic(CycPWord { chars, alphabet })
    } else {
        AnyWord::Linear(PWord { chars, alphabet })
    })
}

/// Smallest alphabet (at least 2) containing every letter in `text`.
pub fn infer_alphabet(text: &str) -> u32 {
    text.chars()
        .filter_map(|c| match char_from_text(c) {
            Some(Char::Letter(x)) => Some(x + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0)
        .max(2)
}

/// Every 1-based position whose `|y|`-window of `x` covers the total word `y`.
///
/// For cyclic `x` all `|x|` rotational alignments are tried, including when
/// `|y| == |x|`.
pub fn covers<W: Word>(x: &W, y: &[u32]) -> Result<Vec<usize>> {
    for &l in y {
        if l >= x.alphabet() {
            return Err(Error::AlphabetMismatch {
                expected: x.alphabet(),
                found: l + 1,
            });
        }
    }
    let ys: Vec<Char> = y.iter().map(|&l| Char::Letter(l)).collect();
    covers_partial(x, &ys)
}

/// Like [`covers`] but `y` may itself contain diamonds, which must then meet
/// diamonds of `x`.
pub fn covers_partial<W: Word>(x: &W, y: &[Char]) -> Result<Vec<usize>> {
    if y.len() > x.len() {
        return Err(Error::Precondition(format!(
            "pattern of length {} is longer than the word ({})",
            y.len(),
            x.len()
        )));
    }
    let k = y.len();
    Ok((0..x.window_count(k))
        .filter(|&i| (0..k).all(|j| x.at(i + j).covers(y[j])))
        .map(|i| i + 1)
        .collect())
}

/// The `|u|` windows of length `k`; element `i` starts at position `i + 1`.
pub fn windows(u: &CycPWord, k: usize) -> Result<Vec<PWord>> {
    if k == 0 || k > u.len() {
        return Err(Error::InvalidParameter(format!(
            "window length {k} not in 1..={}",
            u.len()
        )));
    }
    Ok((0..u.len())
        .map(|i| PWord {
            chars: u.window_at(i, k),
            alphabet: u.alphabet,
        })
        .collect())
}

/// Whether position `i` of `u` is a diamond exactly when position `i + n` is.
/// Returns the first 1-based breach position.
pub fn periodicity_breach(u: &CycPWord, n: usize) -> Option<usize> {
    let len = u.len();
    (0..len)
        .find(|&i| u.at(i).is_diamond() != u.at(i + n).is_diamond())
        .map(|i| {
            // report the letter side of the mismatch
            if u.at(i).is_diamond() {
                (i + n) % len + 1
            } else {
                i + 1
            }
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    Solid,
    Diamond,
}

/// Positions of diamonds in a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    pub marks: Vec<Mark>,
    pub cyclic: bool,
}

impl Frame {
    pub fn linear(marks: Vec<Mark>) -> Self {
        Frame {
            marks,
            cyclic: false,
        }
    }

    /// Parses `•`/`.` as solid and `⋄`/`*`/`◇` as diamond.
    pub fn parse(text: &str) -> Result<Self> {
        let body: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (inner, cyclic) = match body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
            Some(inner) => (inner.to_string(), true),
            None => (body, false),
        };
        let marks = inner
            .chars()
            .enumerate()
            .map(|(offset, c)| match c {
                '•' | '.' => Ok(Mark::Solid),
                '⋄' | '*' | '◇' => Ok(Mark::Diamond),
                _ => Err(Error::BadCharacter {
                    ch: c,
                    offset,
                    alphabet: 2,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        if marks.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Frame { marks, cyclic })
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn diamonds(&self) -> usize {
        self.marks.iter().filter(|&&m| m == Mark::Diamond).count()
    }

    /// 0-based 1-bit set for each solid position (frames longer than 64 marks
    /// are not representable).
    pub fn solid_mask(&self) -> u64 {
        assert!(self.marks.len() <= 64);
        self.marks
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == Mark::Solid)
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    }

    pub fn rotate(&self, r: usize) -> Frame {
        Frame {
            marks: rotated(&self.marks, r as isize),
            cyclic: self.cyclic,
        }
    }

    /// Minimal `m` with `self = p^(len/m)` for `|p| = m`, and that `p`.
    pub fn period(&self) -> (usize, Frame) {
        let len = self.marks.len();
        let m = (1..=len)
            .filter(|m| len.is_multiple_of(*m))
            .find(|&m| (m..len).all(|i| self.marks[i] == self.marks[i - m]))
            .unwrap_or(len);
        (
            m,
            Frame {
                marks: self.marks[..m].to_vec(),
                cyclic: self.cyclic,
            },
        )
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .marks
            .iter()
            .map(|m| if *m == Mark::Solid { '•' } else { '⋄' })
            .collect();
        if self.cyclic {
            write!(f, "({s})")
        } else {
            f.write_str(&s)
        }
    }
}

pub fn frame_of<W: Word>(u: &W) -> Frame {
    Frame {
        marks: u
            .chars()
            .iter()
            .map(|c| {
                if c.is_diamond() {
                    Mark::Diamond
                } else {
                    Mark::Solid
                }
            })
            .collect(),
        cyclic: u.is_cyclic(),
    }
}

/// Frame period and pane frame of the length-`n` window frame of `u`
/// (taken at position 1). Fails if the diamonds are not `n`-periodic.
pub fn frame_period(u: &CycPWord, n: usize) -> Result<(usize, Frame)> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if let Some(position) = periodicity_breach(u, n) {
        return Err(Error::NotPeriodic { n, position });
    }
    let window = Frame::linear(
        (0..n)
            .map(|i| {
                if u.at(i).is_diamond() {
                    Mark::Diamond
                } else {
                    Mark::Solid
                }
            })
            .collect(),
    );
    Ok(window.period())
}

/// Rotation, reversal and letter permutations of partial words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SymmetryOp {
    /// Left rotation by `r` places.
    Rotate(isize),
    Reverse,
    /// `perm[x]` is the image of letter `x`.
    Permute(Vec<u32>),
    /// `x ↦ a - 1 - x`.
    Complement,
}

impl fmt::Display for SymmetryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryOp::Rotate(r) => write!(f, "rotate({r})"),
            SymmetryOp::Reverse => f.write_str("reverse"),
            SymmetryOp::Complement => f.write_str("complement"),
            SymmetryOp::Permute(p) => {
                let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                write!(f, "permute({})", s.join(","))
            }
        }
    }
}

fn rotated<T: Copy>(v: &[T], r: isize) -> Vec<T> {
    if v.is_empty() {
        return Vec::new();
    }
    let n = v.len() as isize;
    let r = r.rem_euclid(n) as usize;
    v[r..].iter().chain(v[..r].iter()).copied().collect()
}

fn check_permutation(perm: &[u32], alphabet: u32) -> Result<()> {
    if perm.len() != alphabet as usize {
        return Err(Error::NotBijective);
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= alphabet || std::mem::replace(&mut seen[p as usize], true) {
            return Err(Error::NotBijective);
        }
    }
    Ok(())
}

fn transform(chars: &[Char], alphabet: u32, op: &SymmetryOp) -> Result<Vec<Char>> {
    Ok(match op {
        SymmetryOp::Rotate(r) => rotated(chars, *r),
        SymmetryOp::Reverse => chars.iter().rev().copied().collect(),
        SymmetryOp::Complement => chars
            .iter()
            .map(|c| match *c {
                Char::Letter(x) => Char::Letter(alphabet - 1 - x),
                Char::Diamond => Char::Diamond,
            })
            .collect(),
        SymmetryOp::Permute(perm) => {
            check_permutation(perm, alphabet)?;
            chars
                .iter()
                .map(|c| match *c {
                    Char::Letter(x) => Char::Letter(perm[x as usize]),
                    Char::Diamond => Char::Diamond,
                })
                .collect()
        }
    })
}

/// Booth's least-rotation algorithm; returns the 0-based start of the least
/// rotation (the smallest such start when the word is periodic).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let mut i = f[j - k - 1];
        while i != -1 && at(j) != at(k + i as usize + 1) {
            if at(j) < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && at(j) != at(k) {
            if at(j) < at(k) {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

/// Index of a total word in lexicographic order (big-endian base `a`).
pub fn word_index(letters: &[u32], a: u32) -> usize {
    letters
        .iter()
        .fold(0usize, |acc, &x| acc * a as usize + x as usize)
}

/// Inverse of [`word_index`] for words of length `n`.
pub fn index_word(mut idx: usize, a: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for slot in out.iter_mut().rev() {
        *slot = (idx % a as usize) as u32;
        idx /= a as usize;
    }
    out
}

pub fn format_letters(letters: &[u32]) -> String {
    letters.iter().map(|&x| letter_to_char(x)).collect()
}

/// Calls `f` with the index of every total word covered by `window`.
pub fn for_each_covered(window: &[Char], a: u32, mut f: impl FnMut(usize)) {
    let n = window.len();
    let a = a as usize;
    let mut base = 0usize;
    let mut weights = Vec::new();
    let mut w = 1usize;
    for i in (0..n).rev() {
        match window[i] {
            Char::Letter(x) => base += x as usize * w,
            Char::Diamond => weights.push(w),
        }
        w *= a;
    }
    if weights.is_empty() {
        f(base);
        return;
    }
    let mut digits = vec![0usize; weights.len()];
    loop {
        f(base
            + digits
                .iter()
                .zip(&weights)
                .map(|(d, w)| d * w)
                .sum::<usize>());
        let mut j = 0;
        loop {
            if j == digits.len() {
                return;
            }
            digits[j] += 1;
            if digits[j] < a {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
    }
}
