//! Lifts and folds between diamondicities.
//!
//! `w` is a lift of `u` when `w` has smaller diamondicity and is covered by
//! `u^(a^δ)`, `δ = d(u) - d(w)`, at some rotational alignment; `u` is then a
//! fold of `w`. Lifts are built by filling an `n`-periodic selection of the
//! diamonds of `u^(a^δ)` with an `(a, δ, δ·a^(n-d)/n)`-perfect necklace.
//!
//! Offsets are residues mod `n` of 1-based positions, so the diamond of
//! `(001⋄110⋄)` has offset 0.

use std::collections::BTreeSet;

use num_integer::gcd;
use rayon::prelude::*;

use crate::error::{check_cap, pow_capped, Error, Result};
use crate::necklace::{euler_necklace, Constraint, Necklace};
use crate::pword::{covers_partial, Char, CycPWord, Word};
use crate::verify::{all_permutations, certified_params, verify_upcycle, COVERAGE_CAP};

/// Default refusal bound on the number of filler candidates enumerated.
pub const LIFT_ENUMERATION_BOUND: u128 = 1 << 20;

#[derive(Debug, Clone)]
pub struct LiftSpec {
    pub base: CycPWord,
    pub n: usize,
    pub selected_offsets: BTreeSet<usize>,
    pub filler: Necklace,
}

/// A certified pair with `upper` a lift of `lower`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftRelation {
    pub upper: CycPWord,
    pub lower: CycPWord,
    pub delta: usize,
}

/// Offsets (residues mod `n`) of the diamonds in the first window of `u`.
pub fn diamond_offsets(u: &CycPWord, n: usize) -> BTreeSet<usize> {
    (1..=n)
        .filter(|&p| u.at(p - 1).is_diamond())
        .map(|p| p % n)
        .collect()
}

/// Checks that `selected` is a set of diamond offsets of `u` invariant under
/// shifts by `gcd(n, |u|)`, which makes it `n`-periodic on the cycle.
fn check_selection(u: &CycPWord, n: usize, selected: &BTreeSet<usize>) -> Result<()> {
    let available = diamond_offsets(u, n);
    if let Some(o) = selected.iter().find(|o| !available.contains(o)) {
        return Err(Error::Precondition(format!(
            "offset {o} is not a diamond offset"
        )));
    }
    let g = gcd(n, u.len());
    if selected.iter().any(|&o| !selected.contains(&((o + g) % n))) {
        return Err(Error::Precondition(format!(
            "selection is not invariant under shifts by gcd(n, |u|) = {g}"
        )));
    }
    Ok(())
}

/// Number of selected slots in `u^(a^δ)`: `δ·|u|/n·a^δ`.
fn slot_count(u: &CycPWord, n: usize, selected: &BTreeSet<usize>, copies: usize) -> usize {
    let per_copy = (1..=u.len())
        .filter(|&p| u.at(p - 1).is_diamond() && selected.contains(&(p % n)))
        .count();
    per_copy * copies
}

/// Fills the selected diamonds of `u^(a^δ)` with `filler` in reading order from
/// position 1. No certification.
pub fn lift_unchecked(
    base: &CycPWord,
    n: usize,
    selected: &BTreeSet<usize>,
    filler: &[u32],
) -> Result<CycPWord> {
    let a = base.alphabet();
    let copies = pow_capped("a^δ", a as u64, selected.len(), COVERAGE_CAP)?;
    check_cap("|u^(a^δ)|", (base.len() * copies) as u128, COVERAGE_CAP)?;
    let slots = slot_count(base, n, selected, copies);
    if filler.len() != slots {
        return Err(Error::Precondition(format!(
            "filler has length {}, the selection has {slots} slots",
            filler.len()
        )));
    }
    let mut fill = filler.iter();
    let chars: Vec<Char> = (1..=base.len() * copies)
        .map(|p| match base.at(p - 1) {
            Char::Diamond if selected.contains(&(p % n)) => {
                Char::Letter(*fill.next().expect("slot count checked"))
            }
            c => c,
        })
        .collect();
    CycPWord::new(chars, a)
}

/// Certified lift with diamondicity `d - δ`.
pub fn lift(spec: &LiftSpec) -> Result<CycPWord> {
    let (base, n) = (&spec.base, spec.n);
    let p = certified_params(base, n)?;
    check_selection(base, n, &spec.selected_offsets)?;
    let delta = spec.selected_offsets.len();
    if delta == 0 {
        return Ok(base.clone());
    }
    let t = filler_order(base.len(), n, delta)?;
    let f = &spec.filler;
    if (f.a, f.n, f.t) != (p.a, delta, t) {
        return Err(Error::Precondition(format!(
            "filler is a ({},{},{})-necklace, need ({},{delta},{t})",
            f.a, f.n, f.t, p.a
        )));
    }
    let w = lift_unchecked(base, n, &spec.selected_offsets, &f.letters())?;
    let report = verify_upcycle(&w, n)?;
    match report.params {
        Some(q) if report.valid && q.d == p.d - delta => Ok(w),
        _ => Err(Error::NotUpcycle(report.to_string())),
    }
}

/// `δ·|u|/n`, the filler's `t`.
fn filler_order(len: usize, n: usize, delta: usize) -> Result<usize> {
    if !(delta * len).is_multiple_of(n) {
        return Err(Error::Divisibility(format!(
            "n = {n} does not divide δ·|u| = {}",
            delta * len
        )));
    }
    Ok(delta * len / n)
}

pub fn lift_relation(upper: &CycPWord, lower: &CycPWord, n: usize) -> Result<Option<LiftRelation>> {
    if upper.alphabet() != lower.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: lower.alphabet(),
            found: upper.alphabet(),
        });
    }
    let pu = certified_params(upper, n)?;
    let pl = certified_params(lower, n)?;
    if pu.d >= pl.d {
        return Ok(None);
    }
    let delta = pl.d - pu.d;
    let copies = pow_capped("a^δ", pl.a as u64, delta, COVERAGE_CAP)?;
    let expanded = lower.power(copies);
    if expanded.len() != upper.len() {
        return Ok(None);
    }
    let aligned = !covers_partial(&expanded, upper.chars())?.is_empty();
    Ok(aligned.then(|| LiftRelation {
        upper: upper.clone(),
        lower: lower.clone(),
        delta,
    }))
}

pub fn is_lift(upper: &CycPWord, lower: &CycPWord, n: usize) -> Result<bool> {
    Ok(lift_relation(upper, lower, n)?.is_some())
}

/// Every De Bruijn lift of `base`, as sorted canonical rotations.
///
/// For `d = 1` the fillers are the `(a,1,t)`-necklaces, which are exactly the
/// words whose `t` residue columns are permutations of `A`; all `(a!)^t` are
/// tried unless that exceeds `bound`.
pub fn enumerate_debruijn_lifts(base: &CycPWord, n: usize, bound: u128) -> Result<Vec<CycPWord>> {
    let p = certified_params(base, n)?;
    match p.d {
        0 => return Ok(vec![base.canonical_rotation()]),
        1 => {}
        d => {
            return Err(Error::InvalidParameter(format!(
                "exhaustive lifting is limited to d ≤ 1 (d = {d}); use debruijn_lift for a witness"
            )))
        }
    }
    let selected = diamond_offsets(base, n);
    let t = filler_order(base.len(), n, 1)?;
    let perms = all_permutations(p.a);
    let count = (perms.len() as u128)
        .checked_pow(t as u32)
        .unwrap_or(u128::MAX);
    check_cap("(a!)^t filler candidates", count, bound)?;
    let a = p.a as usize;
    let lifts: Result<BTreeSet<CycPWord>> = (0..count as u64)
        .into_par_iter()
        .map(|c| {
            let mut filler = vec![0u32; a * t];
            let mut rest = c as usize;
            for col in 0..t {
                let perm = &perms[rest % perms.len()];
                rest /= perms.len();
                for (row, &x) in perm.iter().enumerate() {
                    filler[row * t + col] = x;
                }
            }
            let w = lift_unchecked(base, n, &selected, &filler)?;
            let report = verify_upcycle(&w, n)?;
            if !report.valid {
                return Err(Error::NotUpcycle(report.to_string()));
            }
            Ok(w.canonical_rotation())
        })
        .collect();
    Ok(lifts?.into_iter().collect())
}

/// One De Bruijn lift, filling every diamond with an Euler-tour necklace.
pub fn debruijn_lift(base: &CycPWord, n: usize) -> Result<CycPWord> {
    let p = certified_params(base, n)?;
    if p.d == 0 {
        return Ok(base.clone());
    }
    let t = filler_order(base.len(), n, p.d)?;
    let filler = euler_necklace(p.a, p.d, t, &Constraint::None)?;
    lift(&LiftSpec {
        base: base.clone(),
        n,
        selected_offsets: diamond_offsets(base, n),
        filler,
    })
}

/// The fold of `upper` with diamonds at `offsets`, aligned at position 1:
/// position `i` of the fold is a diamond if `i mod n` is an offset, and
/// otherwise the common character of `upper` at positions `≡ i` mod `|upper|/a^δ`.
/// Returns `None` unless that is well defined, certifies, and is a fold.
pub fn try_fold(
    upper: &CycPWord,
    n: usize,
    delta: usize,
    offsets: &BTreeSet<usize>,
) -> Option<CycPWord> {
    let pu = certified_params(upper, n).ok()?;
    let copies = pow_capped("a^δ", pu.a as u64, delta, COVERAGE_CAP).ok()?;
    if !upper.len().is_multiple_of(copies) {
        return None;
    }
    let m = upper.len() / copies;
    let mut chars = Vec::with_capacity(m);
    for p in 1..=m {
        if offsets.contains(&(p % n)) {
            chars.push(Char::Diamond);
            continue;
        }
        let c = upper.at(p - 1);
        if (1..copies).any(|k| upper.at(p - 1 + k * m) != c) {
            return None;
        }
        chars.push(c);
    }
    let u = CycPWord::new(chars, pu.a).ok()?;
    if delta == 0 {
        return (u == *upper).then_some(u);
    }
    let pl = certified_params(&u, n).ok()?;
    if pl.d != pu.d + delta || !is_lift(upper, &u, n).ok()? {
        return None;
    }
    Some(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cyc(s: &str) -> CycPWord {
        CycPWord::parse(s, 2).unwrap()
    }

    fn spec(filler: &str) -> LiftSpec {
        LiftSpec {
            base: fixtures::u4(),
            n: 4,
            selected_offsets: BTreeSet::from([0]),
            filler: Necklace::certify(cyc(filler), 2, 1, 2).unwrap(),
        }
    }

    #[test]
    fn lift_examples() {
        assert_eq!(diamond_offsets(&fixtures::u4(), 4), BTreeSet::from([0]));
        assert_eq!(lift(&spec("(0011)")).unwrap(), cyc("(0010110000111101)"));
        assert_eq!(lift(&spec("(0110)")).unwrap(), cyc("(0010110100111100)"));
        let db = cyc("(0010110000111101)");
        let same = LiftSpec {
            base: db.clone(),
            n: 4,
            selected_offsets: BTreeSet::new(),
            filler: Necklace::certify(cyc("(0)").with_alphabet(1).unwrap(), 1, 0, 1).unwrap(),
        };
        assert_eq!(lift(&same).unwrap(), db);
    }

    #[test]
    fn lift_rejects_bad_selection_and_filler() {
        let mut s = spec("(0011)");
        s.selected_offsets = BTreeSet::from([1]);
        assert!(matches!(lift(&s), Err(Error::Precondition(_))));
        let bad = lift_unchecked(&fixtures::u4(), 4, &BTreeSet::from([0]), &[0, 0, 0, 1]).unwrap();
        assert!(!verify_upcycle(&bad, 4).unwrap().valid);
    }

    #[test]
    fn is_lift_examples() {
        let u = fixtures::u4();
        assert!(is_lift(&cyc("(0010110000111101)"), &u, 4).unwrap());
        assert!(!is_lift(&cyc(fixtures::U4_NON_LIFT), &u, 4).unwrap());
        assert!(!is_lift(&u, &u, 4).unwrap());
        assert!(is_lift(&cyc("(0010110000111101)").rotate(5), &u.rotate(3), 4).unwrap());
        assert!(matches!(
            is_lift(&fixtures::u4_times_2(), &u, 4),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn enumeration_examples() {
        let lifts = enumerate_debruijn_lifts(&fixtures::u4(), 4, LIFT_ENUMERATION_BOUND).unwrap();
        let expected: Vec<CycPWord> = fixtures::u4_lifts()
            .iter()
            .map(|w| w.canonical_rotation())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(lifts, expected);
        let db = cyc("(0000100110101111)");
        assert_eq!(
            enumerate_debruijn_lifts(&db, 4, LIFT_ENUMERATION_BOUND).unwrap(),
            vec![db.canonical_rotation()]
        );
    }

    #[test]
    fn four_letter_enumeration_is_refused_but_a_witness_exists() {
        let u = fixtures::u4_times_2();
        // (4!)^16 candidates
        assert!(matches!(
            enumerate_debruijn_lifts(&u, 4, LIFT_ENUMERATION_BOUND),
            Err(Error::CapExceeded { .. })
        ));
        let w = debruijn_lift(&u, 4).unwrap();
        assert_eq!(certified_params(&w, 4).unwrap().d, 0);
        assert!(is_lift(&w, &u, 4).unwrap());
    }

    #[test]
    fn fold_examples() {
        let offsets = BTreeSet::from([0]);
        assert_eq!(
            try_fold(&cyc("(0010110000111101)"), 4, 1, &offsets),
            Some(fixtures::u4())
        );
        for o in 0..4 {
            assert_eq!(
                try_fold(&cyc(fixtures::U4_NON_LIFT), 4, 1, &BTreeSet::from([o])),
                None
            );
        }
        let db = cyc("(0000100110101111)");
        assert_eq!(try_fold(&db, 4, 0, &BTreeSet::new()), Some(db));
    }

    #[test]
    fn lift_then_fold_round_trips() {
        for w in fixtures::u4_lifts() {
            let u = try_fold(&w, 4, 1, &BTreeSet::from([0])).unwrap();
            assert_eq!(u.canonical_rotation(), fixtures::u4().canonical_rotation());
        }
    }
}
