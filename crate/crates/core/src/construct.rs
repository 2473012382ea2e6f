//! The alphabet multiplier: from an upcycle `u` for `{0..a-1}^n` and a perfect
//! necklace `v`, the upcycle `a·v + u^(k^(n-d))` for `{0..ak-1}^n`.
//!
//! The `p`-th filler letter lands on the `p`-th non-diamond position of
//! `u^(k^(n-d))`, counted in reading order from position 1.

use crate::error::{check_cap, pow_capped, Error, Result};
use crate::necklace::{euler_necklace, lex_necklace, stretch_necklace, Constraint, Necklace};
use crate::pword::{Char, CycPWord, Word};
use crate::verify::{certified_params, verify_upcycle, UpcycleParams, COVERAGE_CAP};

#[derive(Debug, Clone)]
pub struct MultiplierSpec {
    pub base: CycPWord,
    pub n: usize,
    pub k: u32,
    pub filler: Necklace,
}

/// Required filler parameters `(k, n-d, (n-d)·a^(n-d)/n)`.
pub fn filler_params(p: UpcycleParams, k: u32) -> Result<(u32, usize, usize)> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if p.d >= p.n {
        return Err(Error::Precondition("base must contain a letter".into()));
    }
    let m = p.n - p.d;
    let len = pow_capped("a^(n-d)", p.a as u64, m, COVERAGE_CAP)?;
    if !(m * len).is_multiple_of(p.n) {
        return Err(Error::Divisibility(format!(
            "n = {} does not divide (n-d)·a^(n-d) = {}",
            p.n,
            m * len
        )));
    }
    Ok((k, m, m * len / p.n))
}

/// `a·v + u^(q)` where `q = k^(n-d)` is inferred from the filler length; no
/// certification of either input or the output.
pub fn alphabet_multiply_unchecked(base: &CycPWord, k: u32, filler: &[u32]) -> Result<CycPWord> {
    let a = base.alphabet();
    let letters_per_copy = base.len() - base.diamond_count();
    if letters_per_copy == 0 || !filler.len().is_multiple_of(letters_per_copy) {
        return Err(Error::Precondition(format!(
            "filler length {} is not a multiple of {letters_per_copy}",
            filler.len()
        )));
    }
    if let Some(&x) = filler.iter().find(|&&x| x >= k) {
        return Err(Error::LetterOutOfRange {
            letter: x,
            alphabet: k,
        });
    }
    let copies = filler.len() / letters_per_copy;
    check_cap("|a·v + u^q|", (copies * base.len()) as u128, COVERAGE_CAP)?;
    let mut fill = filler.iter();
    let mut out = Vec::with_capacity(copies * base.len());
    for _ in 0..copies {
        for &c in base.chars() {
            out.push(match c {
                Char::Diamond => Char::Diamond,
                Char::Letter(x) => Char::Letter(a * fill.next().expect("length checked") + x),
            });
        }
    }
    CycPWord::new(out, a * k)
}

/// Certified `a·v + u^(k^(n-d))`.
pub fn alphabet_multiply(spec: &MultiplierSpec) -> Result<CycPWord> {
    let p = certified_params(&spec.base, spec.n)?;
    let (k, m, t) = filler_params(p, spec.k)?;
    let f = &spec.filler;
    if (f.a, f.n, f.t) != (k, m, t) {
        return Err(Error::Precondition(format!(
            "filler is a ({},{},{})-necklace, need ({k},{m},{t})",
            f.a, f.n, f.t
        )));
    }
    let w = alphabet_multiply_unchecked(&spec.base, k, &f.letters())?;
    let report = verify_upcycle(&w, spec.n)?;
    if !report.valid {
        return Err(Error::NotUpcycle(report.to_string()));
    }
    Ok(w)
}

/// Lexicographic filler `stretch(lex(k, n-d), a^(n-d)/n)`; needs `n | a^(n-d)`.
pub fn lex_filler(p: UpcycleParams, k: u32) -> Result<Necklace> {
    let (_, m, _) = filler_params(p, k)?;
    let len = pow_capped("a^(n-d)", p.a as u64, m, COVERAGE_CAP)?;
    if len % p.n != 0 {
        return Err(Error::Divisibility(format!(
            "n = {} does not divide a^(n-d) = {len}",
            p.n
        )));
    }
    stretch_necklace(&lex_necklace(k, m)?, len / p.n)
}

/// The lexicographic filler when `n | a^(n-d)`, an Euler-tour necklace otherwise.
pub fn default_filler(p: UpcycleParams, k: u32) -> Result<Necklace> {
    match lex_filler(p, k) {
        Err(Error::Divisibility(_)) => {
            let (k, m, t) = filler_params(p, k)?;
            euler_necklace(k, m, t, &Constraint::None)
        }
        other => other,
    }
}

pub fn alphabet_multiply_lex(base: &CycPWord, n: usize, k: u32) -> Result<CycPWord> {
    let p = certified_params(base, n)?;
    let filler = lex_filler(p, k)?;
    alphabet_multiply(&MultiplierSpec {
        base: base.clone(),
        n,
        k,
        filler,
    })
}

pub fn alphabet_multiply_default(base: &CycPWord, n: usize, k: u32) -> Result<CycPWord> {
    let p = certified_params(base, n)?;
    let filler = default_filler(p, k)?;
    alphabet_multiply(&MultiplierSpec {
        base: base.clone(),
        n,
        k,
        filler,
    })
}

/// `base` followed by one stage per multiplier. Each stage uses a filler that
/// begins with zeros, so it starts with the previous stage.
pub fn onion(base: &CycPWord, n: usize, multipliers: &[u32]) -> Result<Vec<CycPWord>> {
    certified_params(base, n)?;
    let mut stages = vec![base.clone()];
    for &k in multipliers {
        let prev = stages.last().expect("nonempty");
        let p = certified_params(prev, n)?;
        let (k, m, t) = filler_params(p, k)?;
        let filler = euler_necklace(k, m, t, &Constraint::ZerosPrefix)?;
        let next = alphabet_multiply(&MultiplierSpec {
            base: prev.clone(),
            n,
            k,
            filler,
        })?;
        stages.push(next);
    }
    Ok(stages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn lex_multiplier_reproduces_four_letter_upcycle() {
        let w = alphabet_multiply_lex(&fixtures::u4(), 4, 2).unwrap();
        assert_eq!(w, fixtures::u4_times_2());
    }

    #[test]
    fn de_bruijn_example() {
        let base = CycPWord::parse("(11101000)", 2).unwrap();
        let filler = CycPWord::parse(
            "(1111111101101101001001000000000010010010010010011011011011011011)",
            2,
        )
        .unwrap();
        let filler = Necklace::certify(filler, 2, 3, 8).unwrap();
        let w = alphabet_multiply(&MultiplierSpec {
            base,
            n: 3,
            k: 2,
            filler,
        })
        .unwrap();
        assert_eq!(
            w.to_string(),
            "(3332322213303202113012001110100031121020131030023132122033123022)"
        );
    }

    #[test]
    fn identity_multiplier() {
        let u = fixtures::u4();
        assert_eq!(
            alphabet_multiply_default(&u, 4, 1)
                .unwrap()
                .with_alphabet(2)
                .unwrap(),
            u
        );
    }

    #[test]
    fn reduction_mod_a_is_expanded_base() {
        let u = fixtures::u4();
        let w = alphabet_multiply_lex(&u, 4, 3).unwrap();
        assert!(verify_upcycle(&w, 4).unwrap().valid);
        let reduced: Vec<Char> = w
            .chars()
            .iter()
            .map(|c| match *c {
                Char::Letter(x) => Char::Letter(x % 2),
                Char::Diamond => Char::Diamond,
            })
            .collect();
        assert_eq!(reduced, u.power(27).into_chars());
    }

    #[test]
    fn corrupted_filler_breaks_the_upcycle() {
        let u = fixtures::u4();
        let mut v = lex_filler(certified_params(&u, 4).unwrap(), 2)
            .unwrap()
            .letters();
        v[0] = 1;
        let w = alphabet_multiply_unchecked(&u, 2, &v).unwrap();
        assert!(!verify_upcycle(&w, 4).unwrap().valid);
    }

    #[test]
    fn divisibility_errors() {
        // n = 3 does not divide 2^3
        let b = CycPWord::parse("(00010111)", 2).unwrap();
        assert!(matches!(
            alphabet_multiply_lex(&b, 3, 2),
            Err(Error::Divisibility(_))
        ));
        let w = alphabet_multiply_default(&b, 3, 2).unwrap();
        assert_eq!(
            certified_params(&w, 3).unwrap(),
            UpcycleParams { a: 4, n: 3, d: 0 }
        );
    }

    #[test]
    fn onion_examples() {
        let u = fixtures::u4();
        let stages = onion(&u, 4, &[2]).unwrap();
        assert_eq!(stages.len(), 2);
        assert_eq!(stages[1].chars()[..8], *u.chars());
        assert_eq!(onion(&u, 4, &[]).unwrap(), vec![u.clone()]);
        let chain = onion(&u, 4, &[2, 2]).unwrap();
        assert_eq!(chain.len(), 3);
        for pair in chain.windows(2) {
            assert_eq!(pair[1].chars()[..pair[0].len()], *pair[0].chars());
            assert!(verify_upcycle(&pair[1], 4).unwrap().valid);
        }
        assert_eq!(chain[2].alphabet(), 8);
    }
}
