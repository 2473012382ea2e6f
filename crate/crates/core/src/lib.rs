//! Universal partial cycles (upcycles), perfect necklaces and De Bruijn cycles.
//!
//! An upcycle for `A^n` is a cyclic word over the letters `0..a` and the
//! wildcard `⋄` in which every word of `A^n` is covered by exactly one
//! length-`n` window. This crate builds, certifies and transforms them:
//!
//! * [`pword`]: partial words, frames, covering and symmetries.
//! * [`verify`]: certificates for upcycles, upwords and perfect necklaces.
//! * [`necklace`]: astute graphs, Euler-tour necklaces and De Bruijn expansions.
//! * [`construct`]: the alphabet multiplier `a·v + u^(k^(n-d))`.
//! * [`liftfold`]: lifting towards De Bruijn cycles and folding back.
//! * [`graphview`]: the graphs `S(u)`, `T(u)`, perfect factors and DOT output.
//! * [`pseudorand`]: expected multiplicity, balance, runs and exact autocorrelation.
//! * [`nonexist`]: curtained frames, `D(n)` and the feasibility filters.
//! * [`search`]: backtracking discovery and the cross-join rearrangement.
//!
//! All arithmetic is exact; nothing here uses floating point.

pub mod construct;
pub mod error;
pub mod fixtures;
pub mod graphview;
pub mod liftfold;
pub mod necklace;
pub mod nonexist;
pub mod pseudorand;
pub mod pword;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use pword::{AnyWord, Char, CycPWord, Frame, Mark, PWord, SymmetryOp, Word};
pub use verify::{UpcycleParams, VerifyReport};
