//! Pseudorandomness of upcycles and De Bruijn cycles.
//!
//! The expected multiplicity of a total word `w` in a partial word `u` is
//! `E(u,w) = Σ_q |C(u,w,q)| / a^q`, where `C(u,w,q)` collects the
//! `|w|`-windows of `u` with `q` diamonds that cover `w`. Balance and run
//! counts are special cases; autocorrelation is exact in `Z[ξ]`.

mod cyclo;
mod field;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

pub use cyclo::CycloInt;
pub use field::{is_prime, FiniteField, FIELD_CAP};

use crate::error::{pow_capped, Error, Result};
use crate::necklace::debruijn_order;
use crate::pword::{covers, for_each_covered, index_word, Char, CycPWord, Word};
use crate::verify::{diamondicity, COVERAGE_CAP};

/// A normalised rational with arbitrary-precision parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(pub BigRational);

impl ExactRational {
    pub fn new(num: i64, den: i64) -> Self {
        ExactRational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn integer(v: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `a^e` for a possibly negative exponent.
    pub fn power(a: u32, e: i64) -> Self {
        let base = BigRational::from_integer(BigInt::from(a));
        let mut r = BigRational::one();
        for _ in 0..e.unsigned_abs() {
            r *= &base;
        }
        ExactRational(if e < 0 { r.recip() } else { r })
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `q ↦ |C(u,w,q)|`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WindowClassCount(pub BTreeMap<usize, usize>);

pub fn window_class_counts<W: Word>(u: &W, w: &[u32]) -> Result<WindowClassCount> {
    let mut counts = BTreeMap::new();
    for pos in covers(u, w)? {
        let q = (0..w.len())
            .filter(|&j| u.at(pos - 1 + j).is_diamond())
            .count();
        *counts.entry(q).or_insert(0) += 1;
    }
    Ok(WindowClassCount(counts))
}

pub fn expected_multiplicity<W: Word>(u: &W, w: &[u32]) -> Result<ExactRational> {
    let classes = window_class_counts(u, w)?;
    let a = u.alphabet();
    let mut total = BigRational::zero();
    for (&q, &c) in &classes.0 {
        total += ExactRational::power(a, -(q as i64)).0 * BigInt::from(c);
    }
    Ok(ExactRational(total))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdCounterexample {
    pub word: Vec<u32>,
    pub expected: ExactRational,
    pub actual: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdReport {
    pub holds: bool,
    pub counterexample: Option<PsdCounterexample>,
}

/// Partial subwords distribution: `E(u,v) = |u|/a^k` for every `v ∈ A^k`,
/// `1 ≤ k ≤ n`. Compared as integers after scaling by `a^k`.
pub fn check_psd(u: &CycPWord, n: usize) -> Result<PsdReport> {
    let a = u.alphabet();
    pow_capped("a^n", a as u64, n, COVERAGE_CAP)?;
    for k in 1..=n {
        let size = (a as usize).pow(k as u32);
        let mut scaled = vec![0u64; size];
        for i in 0..u.len() {
            let window = u.window_at(i, k);
            let q = window.iter().filter(|c| c.is_diamond()).count();
            let weight = (a as u64).pow((k - q) as u32);
            for_each_covered(&window, a, |v| scaled[v] += weight);
        }
        if let Some(v) = scaled.iter().position(|&s| s != u.len() as u64) {
            let den = size as i64;
            return Ok(PsdReport {
                holds: false,
                counterexample: Some(PsdCounterexample {
                    word: index_word(v, a, k),
                    expected: ExactRational::new(u.len() as i64, den),
                    actual: ExactRational::new(scaled[v] as i64, den),
                }),
            });
        }
    }
    Ok(PsdReport {
        holds: true,
        counterexample: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    /// Every letter of the alphabet, including absent ones.
    pub counts: BTreeMap<u32, usize>,
    pub balanced: bool,
}

pub fn balance<W: Word>(u: &W) -> BalanceReport {
    let mut counts: BTreeMap<u32, usize> = (0..u.alphabet()).map(|l| (l, 0)).collect();
    for c in u.chars() {
        if let Char::Letter(l) = c {
            *counts.get_mut(l).expect("letters are in range") += 1;
        }
    }
    let mut values = counts.values();
    let first = values.next().copied();
    let balanced = values.all(|&c| Some(c) == first);
    BalanceReport { counts, balanced }
}

/// Per-letter count of an upcycle with parameters `(a,n,d)`: `((n-d)/n)·a^(n-d-1)`.
pub fn balance_target(a: u32, n: usize, d: usize) -> ExactRational {
    let scale = ExactRational::new((n - d) as i64, n as i64);
    ExactRational(scale.0 * ExactRational::power(a, n as i64 - d as i64 - 1).0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTable {
    pub a: u32,
    pub n: usize,
    /// `(ℓ, r) ↦ E(u, ℓ^r)` for every letter and `1 ≤ r ≤ n`.
    pub entries: BTreeMap<(u32, usize), ExactRational>,
    /// Diamondicity, when `u` is cyclic with `n`-periodic diamonds.
    pub d: Option<usize>,
    /// Every entry equals `a^(n-d-r)`; false when `d` is undefined.
    pub holds: bool,
}

pub fn run_counts<W: Word>(u: &W, n: usize) -> Result<RunTable> {
    let a = u.alphabet();
    let mut entries = BTreeMap::new();
    for l in 0..a {
        for r in 1..=n {
            entries.insert((l, r), expected_multiplicity(u, &vec![l; r])?);
        }
    }
    let d = if u.is_cyclic() {
        diamondicity(&CycPWord::new(u.chars().to_vec(), a)?, n).ok()
    } else {
        None
    };
    let holds = d.is_some_and(|d| {
        entries
            .iter()
            .all(|(&(_, r), e)| *e == ExactRational::power(a, n as i64 - d as i64 - r as i64))
    });
    Ok(RunTable {
        a,
        n,
        entries,
        d,
        holds,
    })
}

/// Deletes the zero at the last position of the `0^n` window of a De Bruijn
/// cycle. The result covers every nonzero word of `A^n` once.
pub fn puncture(w: &CycPWord) -> Result<CycPWord> {
    let n = debruijn_order(w)?;
    let start = covers(w, &vec![0; n])?[0] - 1;
    let drop = (start + n - 1) % w.len();
    let chars: Vec<Char> = w
        .chars()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != drop)
        .map(|(_, &c)| c)
        .collect();
    let out = CycPWord::new(chars, w.alphabet())?;
    let a = w.alphabet();
    let mut seen = vec![0u32; (a as usize).pow(n as u32)];
    for i in 0..out.len() {
        for_each_covered(&out.window_at(i, n), a, |v| seen[v] += 1);
    }
    if seen[0] != 0 || seen[1..].iter().any(|&c| c != 1) {
        return Err(Error::Precondition(
            "punctured cycle does not cover A^n ∖ {0^n} once".into(),
        ));
    }
    Ok(out)
}

fn total_letters(w: &CycPWord) -> Result<Vec<u32>> {
    w.letters()
        .ok_or_else(|| Error::Precondition("word must be total".into()))
}

/// `A(w,τ) = Σ_i ξ^Tr(w_(i+τ) - w_i)` with letters read as field elements.
pub fn autocorrelation(w: &CycPWord, tau: isize, field: &FiniteField) -> Result<CycloInt> {
    if field.order() != w.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: field.order(),
            found: w.alphabet(),
        });
    }
    let letters = total_letters(w)?;
    let len = letters.len();
    let shift = tau.rem_euclid(len as isize) as usize;
    let mut value = CycloInt::zero(field.p());
    for i in 0..len {
        value.add_root_power(field.trace(field.sub(letters[(i + shift) % len], letters[i])));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R3Report {
    pub holds: bool,
    /// Shifts `τ ∈ 1..N` of the punctured cycle with `A ≠ -1`, ascending.
    pub failing: Vec<usize>,
    pub punctured: CycPWord,
}

/// The R-3 property: the punctured cycle has `A(ŵ,τ) = -1` for every
/// nontrivial shift.
pub fn check_r3(w: &CycPWord, field: &FiniteField) -> Result<R3Report> {
    if field.order() != w.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: field.order(),
            found: w.alphabet(),
        });
    }
    let punctured = puncture(w)?;
    let len = punctured.len();
    let failing: Vec<usize> = (1..len)
        .into_par_iter()
        .map(|tau| {
            autocorrelation(&punctured, tau as isize, field).map(|v| (tau, v.is_minus_one()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&(_, ok)| !ok)
        .map(|(tau, _)| tau)
        .collect();
    Ok(R3Report {
        holds: failing.is_empty(),
        failing,
        punctured,
    })
}

/// `(#{i : w_(i+τ) = w_i}, #{i : w_(i+τ) ≠ w_i})`.
pub fn agreements(w: &CycPWord, tau: isize) -> Result<(usize, usize)> {
    let letters = total_letters(w)?;
    let len = letters.len();
    let shift = tau.rem_euclid(len as isize) as usize;
    let agree = (0..len)
        .filter(|&i| letters[(i + shift) % len] == letters[i])
        .count();
    Ok((agree, len - agree))
}
