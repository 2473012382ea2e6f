//! Certificates for upcycles, upwords and perfect necklaces.

use std::fmt;

use crate::error::{pow_capped, Error, Result};
use crate::pword::{
    covers, for_each_covered, format_letters, index_word, periodicity_breach, Char, CycPWord,
    PWord, SymmetryOp, Word,
};

/// Largest `a^n` for which coverage is counted.
pub const COVERAGE_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpcycleParams {
    pub a: u32,
    pub n: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Diamonds are not `n`-periodic; 1-based position of the breach.
    Periodicity {
        position: usize,
    },
    Length {
        expected: u128,
        found: usize,
    },
    Uncovered {
        word: Vec<u32>,
    },
    MultiplyCovered {
        word: Vec<u32>,
        positions: Vec<usize>,
    },
}

impl Violation {
    pub fn reason(&self) -> &'static str {
        match self {
            Violation::Periodicity { .. } => "periodicity",
            Violation::Length { .. } => "length",
            Violation::Uncovered { .. } => "uncovered",
            Violation::MultiplyCovered { .. } => "multiply-covered",
        }
    }

    pub fn witness(&self) -> String {
        match self {
            Violation::Periodicity { position } => format!("position:{position}"),
            Violation::Length { expected, found } => format!("expected:{expected},found:{found}"),
            Violation::Uncovered { word } => format_letters(word),
            Violation::MultiplyCovered { word, positions } => {
                let p: Vec<String> = positions.iter().map(|p| p.to_string()).collect();
                format!("{}@{}", format_letters(word), p.join(","))
            }
        }
    }
}

/// Outcome of a verification. `valid` holds exactly when `violation` is absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub valid: bool,
    pub a: u32,
    pub n: usize,
    /// Present for cyclic words whose diamonds are `n`-periodic.
    pub params: Option<UpcycleParams>,
    /// No diamonds, or nothing but diamonds.
    pub trivial: bool,
    pub violation: Option<Violation>,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => {
                write!(f, "VALID a={} n={}", self.a, self.n)?;
                if let Some(p) = self.params {
                    write!(f, " d={}", p.d)?;
                }
                if self.trivial {
                    f.write_str(" trivial")?;
                }
                Ok(())
            }
            Some(v) => write!(f, "INVALID reason={} witness={}", v.reason(), v.witness()),
        }
    }
}

/// Diamonds per `n`-window, after checking that diamonds are `n`-periodic.
pub fn diamondicity(u: &CycPWord, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if let Some(position) = periodicity_breach(u, n) {
        return Err(Error::NotPeriodic { n, position });
    }
    Ok((0..n).filter(|&i| u.at(i).is_diamond()).count())
}

/// Multiplicity of every word of `A^n` over the given windows (saturating at 255).
fn coverage_counts<W: Word>(u: &W, n: usize) -> Result<Vec<u8>> {
    let size = pow_capped("a^n", u.alphabet() as u64, n, COVERAGE_CAP)?;
    let mut counts = vec![0u8; size];
    for i in 0..u.window_count(n) {
        let w = u.window_at(i, n);
        for_each_covered(&w, u.alphabet(), |idx| {
            counts[idx] = counts[idx].saturating_add(1)
        });
    }
    Ok(counts)
}

fn coverage_violation<W: Word>(u: &W, n: usize, counts: &[u8]) -> Result<Option<Violation>> {
    let a = u.alphabet();
    if let Some(idx) = counts.iter().position(|&c| c >= 2) {
        let word = index_word(idx, a, n);
        let positions = covers(u, &word)?;
        return Ok(Some(Violation::MultiplyCovered { word, positions }));
    }
    if let Some(idx) = counts.iter().position(|&c| c == 0) {
        return Ok(Some(Violation::Uncovered {
            word: index_word(idx, a, n),
        }));
    }
    Ok(None)
}

/// Certifies `u` as an upcycle for `A^n`: diamonds `n`-periodic, length
/// `a^(n-d)`, and every word of `A^n` covered exactly once.
pub fn verify_upcycle(u: &CycPWord, n: usize) -> Result<VerifyReport> {
    let a = u.alphabet();
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let mut report = VerifyReport {
        valid: false,
        a,
        n,
        params: None,
        trivial: false,
        violation: None,
    };
    let d = match diamondicity(u, n) {
        Ok(d) => d,
        Err(Error::NotPeriodic { position, .. }) => {
            report.violation = Some(Violation::Periodicity { position });
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.params = Some(UpcycleParams { a, n, d });
    report.trivial = u.is_total() || u.diamond_count() == u.len();
    let expected = pow_capped("a^n", a as u64, n - d.min(n), COVERAGE_CAP)?;
    if u.len() != expected {
        report.violation = Some(Violation::Length {
            expected: expected as u128,
            found: u.len(),
        });
        return Ok(report);
    }
    let counts = coverage_counts(u, n)?;
    report.violation = coverage_violation(u, n, &counts)?;
    report.valid = report.violation.is_none();
    Ok(report)
}

/// Parameters of `u` as a certified upcycle for `A^n`; an invalid word is an
/// error carrying the report.
pub fn certified_params(u: &CycPWord, n: usize) -> Result<UpcycleParams> {
    let report = verify_upcycle(u, n)?;
    match report.params {
        Some(p) if report.valid => Ok(p),
        _ => Err(Error::NotUpcycle(report.to_string())),
    }
}

/// Certifies `w` as an upword: read linearly, every word of `A^n` is covered
/// exactly once.
pub fn verify_upword(w: &PWord, n: usize) -> Result<VerifyReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let counts = coverage_counts(w, n)?;
    let violation = coverage_violation(w, n, &counts)?;
    Ok(VerifyReport {
        valid: violation.is_none(),
        a: w.alphabet(),
        n,
        params: None,
        trivial: w.is_total(),
        violation,
    })
}

/// Checks the `(a,n,t)`-perfect necklace property: `|v| = t·a^n`, and for each
/// residue `j` mod `t` the `n`-windows at positions `≡ j` enumerate `A^n` once.
pub fn verify_perfect_necklace(v: &CycPWord, a: u32, n: usize, t: usize) -> bool {
    necklace_defect(v, a, n, t).is_none()
}

/// Reason the necklace check fails, if it does.
pub fn necklace_defect(v: &CycPWord, a: u32, n: usize, t: usize) -> Option<String> {
    if t == 0 || a == 0 {
        return Some("a and t must be positive".into());
    }
    let letters = match v.letters() {
        Some(l) => l,
        None => return Some("word contains a diamond".into()),
    };
    if let Some(&x) = letters.iter().find(|&&x| x >= a) {
        return Some(format!("letter {x} outside alphabet of size {a}"));
    }
    let size = match pow_capped("a^n", a as u64, n, COVERAGE_CAP) {
        Ok(s) => s,
        Err(e) => return Some(e.to_string()),
    };
    if letters.len() != t * size {
        return Some(format!(
            "length {} differs from t·a^n = {}",
            letters.len(),
            t * size
        ));
    }
    let len = letters.len();
    let mut seen = vec![false; size * t];
    for i in 0..len {
        let idx = (0..n).fold(0usize, |acc, j| {
            acc * a as usize + letters[(i + j) % len] as usize
        });
        let slot = (i % t) * size + idx;
        if std::mem::replace(&mut seen[slot], true) {
            return Some(format!(
                "word {} repeats in residue class {} (position {})",
                format_letters(&index_word(idx, a, n)),
                i % t,
                i + 1
            ));
        }
    }
    None
}

/// Multiset `W_u` of maximal diamond-free cyclic runs, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryMultiset(pub Vec<Vec<u32>>);

impl fmt::Display for BoundaryMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| format_letters(w)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn boundary_words(u: &CycPWord) -> Result<BoundaryMultiset> {
    let first = u.chars().iter().position(|c| c.is_diamond());
    let start = match first {
        Some(p) if !u.chars().iter().all(|c| c.is_diamond()) => p + 1,
        _ => {
            return Err(Error::Precondition(
                "trivial word has no boundary runs".into(),
            ))
        }
    };
    let mut runs = Vec::new();
    let mut current = Vec::new();
    for i in start..start + u.len() {
        match u.at(i) {
            Char::Letter(x) => current.push(x),
            Char::Diamond => {
                if !current.is_empty() {
                    runs.push(std::mem::take(&mut current));
                }
            }
        }
    }
    if !current.is_empty() {
        runs.push(current);
    }
    runs.sort();
    Ok(BoundaryMultiset(runs))
}

/// Letter permutations in lexicographic order (identity first).
pub fn all_permutations(a: u32) -> Vec<Vec<u32>> {
    use itertools::Itertools;
    (0..a).permutations(a as usize).collect()
}

/// Finds ops turning `u` into `v`: an optional letter permutation, then an
/// optional reversal, then a rotation. Identity steps are omitted from the
/// witness, so `u == v` yields `Some(vec![])`.
///
/// For `a ≤ 5` every permutation is tried; above that only the identity and
/// the complement (see [`equivalent_under_symmetry_with`]).
pub fn equivalent_under_symmetry(u: &CycPWord, v: &CycPWord) -> Option<Vec<SymmetryOp>> {
    let a = u.alphabet();
    let perms = if a <= 5 {
        all_permutations(a)
    } else {
        vec![(0..a).collect(), (0..a).rev().collect()]
    };
    equivalent_under_symmetry_with(u, v, &perms)
}

pub fn equivalent_under_symmetry_with(
    u: &CycPWord,
    v: &CycPWord,
    perms: &[Vec<u32>],
) -> Option<Vec<SymmetryOp>> {
    if u.len() != v.len() || u.alphabet() != v.alphabet() {
        return None;
    }
    let target_sig = boundary_words(v).ok();
    for perm in perms {
        let identity = perm.iter().enumerate().all(|(i, &p)| i as u32 == p);
        let permuted = match u.apply_symmetry(&SymmetryOp::Permute(perm.clone())) {
            Ok(w) => w,
            Err(_) => continue,
        };
        for reverse in [false, true] {
            let cand = if reverse {
                permuted
                    .apply_symmetry(&SymmetryOp::Reverse)
                    .expect("reversal is total")
            } else {
                permuted.clone()
            };
            if target_sig.is_some() && boundary_words(&cand).ok() != target_sig {
                continue;
            }
            if let Some(r) = cand.rotation_to(v) {
                let mut ops = Vec::new();
                if !identity {
                    ops.push(SymmetryOp::Permute(perm.clone()));
                }
                if reverse {
                    ops.push(SymmetryOp::Reverse);
                }
                if r != 0 {
                    ops.push(SymmetryOp::Rotate(r as isize));
                }
                return Some(ops);
            }
        }
    }
    None
}
