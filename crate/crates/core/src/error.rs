use thiserror::Error;

/// Errors raised by constructions and parsers. Verification verdicts are
/// reported through [`crate::verify::VerifyReport`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("character {ch:?} at offset {offset} is not valid for an alphabet of size {alphabet}")]
    BadCharacter {
        ch: char,
        offset: usize,
        alphabet: u32,
    },
    #[error("malformed cyclic delimiters: {0}")]
    Delimiters(&'static str),
    #[error("alphabet size {0} is not supported here")]
    Alphabet(u32),
    #[error("alphabet mismatch: expected {expected}, found {found}")]
    AlphabetMismatch { expected: u32, found: u32 },
    #[error("letter {letter} outside alphabet of size {alphabet}")]
    LetterOutOfRange { letter: u32, alphabet: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size cap exceeded: {what} = {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },
    #[error("diamonds are not {n}-periodic: position {position} breaks the pattern")]
    NotPeriodic { n: usize, position: usize },
    #[error("not a valid upcycle: {0}")]
    NotUpcycle(String),
    #[error("not a De Bruijn cycle: {0}")]
    NotDeBruijn(String),
    #[error("not a perfect necklace: {0}")]
    NotNecklace(String),
    #[error("permutation is not a bijection on the alphabet")]
    NotBijective,
    #[error("divisibility requirement failed: {0}")]
    Divisibility(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parameters ruled out: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &'static str, value: u128, cap: u128) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}

/// `base^exp` with overflow reported as a cap violation.
pub(crate) fn checked_pow(base: u64, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

pub(crate) fn pow_capped(what: &'static str, base: u64, exp: usize, cap: u128) -> Result<usize> {
    match checked_pow(base, exp) {
        Some(v) if v <= cap => Ok(v as usize),
        Some(v) => Err(Error::CapExceeded {
            what,
            value: v,
            cap,
        }),
        None => Err(Error::CapExceeded {
            what,
            value: u128::MAX,
            cap,
        }),
    }
}
