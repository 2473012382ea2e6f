//! Curtained frames, the diamond bound `D(n)`, and feasibility filters for
//! upcycle parameters `(a,n,d)`.
//!
//! A frame `f` of length `n` is `k`-curtained when, for each `i ≤ k`, `f_i`
//! or `f_(n-k+i)` is a diamond. With `S` the solid mask that reads
//! `S & (S >> (n-k)) == 0`, so a frame escapes every curtain exactly when its
//! solid positions realise every distance `0..n`: they form a complete sparse
//! ruler of length `n-1`. `D(n)` is then `n + 1` minus the fewest marks on
//! such a ruler.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::{gcd, lcm};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pword::{covers, CycPWord, Frame, Mark, Word};
use crate::verify::certified_params;

/// Largest `n` for which `D(n)` is computed.
pub const MAX_D_N: usize = 26;

/// Whether `f` is `k`-curtained. Requires `1 ≤ k ≤ |f|`.
pub fn is_k_curtained(f: &Frame, k: usize) -> bool {
    let n = f.len();
    assert!((1..=n).contains(&k), "curtain width {k} outside 1..={n}");
    (0..k).all(|i| f.marks[i] == Mark::Diamond || f.marks[n - k + i] == Mark::Diamond)
}

/// Least `k` for which `f` is `k`-curtained.
pub fn is_curtained(f: &Frame) -> Option<usize> {
    (1..=f.len()).find(|&k| is_k_curtained(f, k))
}

fn mask_curtained(solid: u64, n: usize) -> bool {
    (0..n).any(|s| solid & (solid >> s) == 0)
}

/// Whether a complete ruler of length `len` with exactly `marks` marks exists.
fn ruler_exists(len: usize, marks: usize) -> bool {
    if len == 0 {
        return marks >= 1;
    }
    if marks < 2 || marks * (marks - 1) / 2 < len {
        return false;
    }
    let full: u64 = (1u64 << (len + 1)) - 2;
    if marks == 2 {
        return len == 1;
    }
    // marks 0 and len are forced; the branch is the second mark
    (1..len).into_par_iter().any(|second| {
        let placed = vec![0, second];
        let covered = (1u64 << second) | (1u64 << len) | (1u64 << (len - second));
        extend_ruler(len, marks - 3, &placed, covered, full)
    })
}

/// Places `rem` more interior marks above the last placed one, then closes
/// the ruler with the mark at `len`.
fn extend_ruler(len: usize, rem: usize, placed: &[usize], covered: u64, full: u64) -> bool {
    if rem == 0 {
        return covered == full;
    }
    // `rem` new marks add at most this many distances to the existing ones
    let fresh = rem * (placed.len() + 1) + rem * (rem - 1) / 2;
    if ((full & !covered).count_ones() as usize) > fresh {
        return false;
    }
    let last = *placed.last().expect("0 is placed");
    for next in last + 1..len {
        let mut c = covered | 1u64 << (len - next);
        for &p in placed {
            c |= 1u64 << (next - p);
        }
        let mut longer = placed.to_vec();
        longer.push(next);
        if extend_ruler(len, rem - 1, &longer, c, full) {
            return true;
        }
    }
    false
}

/// `D(n)`: the least `d` such that every frame of length `n` with at least
/// `d` diamonds is curtained.
pub fn compute_d(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if n > MAX_D_N {
        return Err(Error::CapExceeded {
            what: "n for D(n)",
            value: n as u128,
            cap: MAX_D_N as u128,
        });
    }
    let marks = (1..=n)
        .find(|&m| ruler_exists(n - 1, m))
        .expect("the full ruler has n marks");
    Ok(n + 1 - marks)
}

/// A frame of length `n` with `D(n) - 1` diamonds that is not curtained.
pub fn extremal_frame(n: usize) -> Result<Frame> {
    let d = compute_d(n)?;
    let solids = n - d + 1;
    let mut chosen = None;
    // least solid mask with the end marks set
    for inner in 0u64..1 << n.saturating_sub(2) {
        let solid = if n == 1 {
            1
        } else {
            1 | inner << 1 | 1 << (n - 1)
        };
        if solid.count_ones() as usize == solids && !mask_curtained(solid, n) {
            chosen = Some(solid);
            break;
        }
    }
    let solid = chosen.expect("D(n) is attained");
    Ok(Frame::linear(
        (0..n)
            .map(|i| {
                if solid >> i & 1 == 1 {
                    Mark::Solid
                } else {
                    Mark::Diamond
                }
            })
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurtainAudit {
    /// Frame of the window covering `0^n`.
    pub zero_window: Frame,
    /// Least curtain of that window; an upcycle needs none.
    pub zero_window_curtain: Option<usize>,
    pub pane: Frame,
    /// Least rotation of the pane frame that is not curtained.
    pub open_pane_shift: Option<usize>,
    pub passes: bool,
}

/// Audits the frame of the window covering a constant word.
pub fn audit_window_frame(zero_window: &Frame) -> CurtainAudit {
    let zero_window = Frame::linear(zero_window.marks.clone());
    let zero_window_curtain = is_curtained(&zero_window);
    let (_, pane) = zero_window.period();
    let open_pane_shift = (0..pane.len()).find(|&r| is_curtained(&pane.rotate(r)).is_none());
    let passes = zero_window_curtain.is_none() && open_pane_shift.is_some();
    CurtainAudit {
        zero_window,
        zero_window_curtain,
        pane,
        open_pane_shift,
        passes,
    }
}

/// Curtain audit of a certified nontrivial upcycle.
pub fn curtain_audit(u: &CycPWord, n: usize) -> Result<CurtainAudit> {
    let params = certified_params(u, n)?;
    if params.d == 0 {
        return Err(Error::Precondition(
            "curtain audit needs a nontrivial upcycle".into(),
        ));
    }
    let start = covers(u, &vec![0; n])?[0] - 1;
    let window = u.window_at(start, n);
    let frame = Frame::linear(
        window
            .iter()
            .map(|c| {
                if c.is_diamond() {
                    Mark::Diamond
                } else {
                    Mark::Solid
                }
            })
            .collect(),
    );
    Ok(audit_window_frame(&frame))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    RuledOut,
    Open,
    KnownToExist,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::RuledOut => "ruled-out",
            Status::Open => "open",
            Status::KnownToExist => "known-to-exist",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reason {
    pub rule: &'static str,
    pub citation: &'static str,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub a: u32,
    pub n: usize,
    pub d: usize,
    pub status: Status,
    /// Every failed rule; empty unless ruled out.
    pub reasons: Vec<Reason>,
    /// Frame periods that survive the pane bound.
    pub admissible_periods: Vec<usize>,
}

const SMALL_N: (&str, &str) = ("small-n", "no upcycle exists for n ≤ 3");
const WINDOW: (&str, &str) = ("window", "diamondicity is at most the window length");
const COPRIME: (&str, &str) = ("coprime", "an upcycle has gcd(a, n) > 1");
const DIVISIBILITY: (&str, &str) = (
    "divisibility",
    "balanced letter counts force n | d·a^(n-d-1)",
);
const SQRT: (&str, &str) = ("sqrt-bound", "d < n - √(n - 7/4) - 1/2");
const DIAMOND_BOUND: (&str, &str) = (
    "diamond-bound",
    "the window covering a constant word is not curtained, so d < D(n)",
);
const FRAME_PERIOD: (&str, &str) = (
    "frame-period",
    "the frame period m divides gcd(a^(n-d), n), is at least 4, and its pane carries d·m/n < D(m) diamonds",
);

/// Parameters witnessed by the binary `(2,4,1)` and `(2,8,1)` upcycles and
/// the alphabet multiplier.
fn constructed(a: u32, n: usize, d: usize) -> bool {
    (n == 4 || n == 8) && d == 1 && a.is_multiple_of(2)
}

fn pow_mod(base: u64, mut exp: usize, m: u64) -> u64 {
    let (mut acc, mut b) = (1 % m as u128, base as u128 % m as u128);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    acc as u64
}

/// `D(1..=max_n)`, shared across many feasibility queries.
#[derive(Debug, Clone)]
pub struct DTable(Vec<usize>);

impl DTable {
    pub fn new(max_n: usize) -> Result<Self> {
        let mut values = vec![0];
        for n in 1..=max_n {
            values.push(compute_d(n)?);
        }
        Ok(DTable(values))
    }

    pub fn get(&self, n: usize) -> usize {
        self.0[n]
    }

    pub fn max_n(&self) -> usize {
        self.0.len() - 1
    }

    /// The verdict for `(a,n,d)` with `d ≥ 1`.
    pub fn feasibility(&self, a: u32, n: usize, d: usize) -> Result<FeasibilityVerdict> {
        if d == 0 || a < 2 || n == 0 {
            return Err(Error::InvalidParameter(format!(
                "need a ≥ 2, n ≥ 1, d ≥ 1; got ({a},{n},{d})"
            )));
        }
        if n > self.max_n() {
            return Err(Error::CapExceeded {
                what: "n for D(n)",
                value: n as u128,
                cap: self.max_n() as u128,
            });
        }
        let mut reasons = Vec::new();
        let mut fail = |(rule, citation): (&'static str, &'static str), witness: String| {
            reasons.push(Reason {
                rule,
                citation,
                witness,
            })
        };
        if n <= 3 {
            fail(SMALL_N, format!("n={n}"));
        }
        if d > n {
            fail(WINDOW, format!("d={d} n={n}"));
        }
        let g = gcd(a as usize, n);
        if g == 1 {
            fail(COPRIME, format!("gcd({a},{n})=1"));
        }
        if d < n && !(pow_mod(a as u64, n - d - 1, n as u64) * d as u64).is_multiple_of(n as u64) {
            fail(DIVISIBILITY, format!("{n}∤{d}·{a}^{}", n - d - 1));
        }
        let slack = 2 * n as i64 - 2 * d as i64 - 1;
        if n >= 2 && !(slack > 0 && slack * slack > 4 * n as i64 - 7) {
            fail(SQRT, format!("2n-2d-1={slack}, 4n-7={}", 4 * n as i64 - 7));
        }
        let dn = self.get(n);
        if d >= dn {
            fail(DIAMOND_BOUND, format!("D({n})={dn}"));
        }
        let admissible_periods: Vec<usize> = if d <= n {
            let g = gcd(pow_mod(a as u64, n - d, n as u64) as usize, n);
            let periods: Vec<usize> = (4..=n)
                .filter(|&m| {
                    g.is_multiple_of(m) && d.is_multiple_of(n / m) && d * m / n < self.get(m)
                })
                .collect();
            if periods.is_empty() {
                fail(FRAME_PERIOD, format!("gcd({a}^{},{n})={g}", n - d));
            }
            periods
        } else {
            Vec::new()
        };
        let status = if !reasons.is_empty() {
            Status::RuledOut
        } else if constructed(a, n, d) {
            Status::KnownToExist
        } else {
            Status::Open
        };
        Ok(FeasibilityVerdict {
            a,
            n,
            d,
            status,
            reasons,
            admissible_periods,
        })
    }
}

pub fn feasibility(a: u32, n: usize, d: usize) -> Result<FeasibilityVerdict> {
    DTable::new(n)?.feasibility(a, n, d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityRow {
    pub n: usize,
    /// Congruence class such as `10k` or `5k (2∤k)`.
    pub class: String,
    /// Least alphabet size in the class.
    pub representative: u32,
    pub d_values: Vec<usize>,
}

impl FeasibilityRow {
    /// `1`, `1 ≤ d ≤ 6`, or a comma list when the values are not contiguous.
    pub fn d_range(&self) -> String {
        let (lo, hi) = (self.d_values[0], *self.d_values.last().expect("nonempty"));
        if lo == hi {
            lo.to_string()
        } else if hi - lo + 1 == self.d_values.len() {
            format!("{lo} ≤ d ≤ {hi}")
        } else {
            self.d_values
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

fn prime_divisors(n: usize) -> Vec<usize> {
    (2..=n)
        .filter(|&p| n.is_multiple_of(p) && (2..p).all(|q| p % q != 0))
        .collect()
}

/// Alphabet classes and diamondicities surviving every filter, for each `n`
/// in `lo..=hi`.
///
/// Every `a ≤ 2·lcm(1..n)` is tested and grouped by which primes of `n`
/// divide it; a group whose members disagree is split further.
pub fn feasibility_table(lo: usize, hi: usize) -> Result<Vec<FeasibilityRow>> {
    let table = DTable::new(hi.max(1))?;
    let mut rows = Vec::new();
    for n in lo.max(1)..=hi {
        let primes = prime_divisors(n);
        let bound = 2 * (1..=n).fold(1usize, lcm);
        let mut groups: BTreeMap<Vec<usize>, BTreeMap<Vec<usize>, u32>> = BTreeMap::new();
        for a in 2..=bound as u32 {
            let mut ds = Vec::new();
            for d in 1..n {
                if table.feasibility(a, n, d)?.status != Status::RuledOut {
                    ds.push(d);
                }
            }
            if ds.is_empty() {
                continue;
            }
            let key: Vec<usize> = primes
                .iter()
                .copied()
                .filter(|&p| (a as usize).is_multiple_of(p))
                .collect();
            groups.entry(key).or_default().entry(ds).or_insert(a);
        }
        let mut n_rows = Vec::new();
        for (key, variants) in groups {
            let base: usize = key.iter().product();
            let excluded: Vec<String> = primes
                .iter()
                .filter(|p| !key.contains(p))
                .map(|p| format!("{p}∤k"))
                .collect();
            let mut class = format!("{base}k");
            if !excluded.is_empty() {
                class = format!("{class} ({})", excluded.join(", "));
            }
            let split = variants.len() > 1;
            for (d_values, representative) in variants {
                let class = if split {
                    format!("{class} e.g. a={representative}")
                } else {
                    class.clone()
                };
                n_rows.push(FeasibilityRow {
                    n,
                    class,
                    representative,
                    d_values,
                });
            }
        }
        n_rows.sort_by_key(|r| std::cmp::Reverse(r.representative));
        rows.extend(n_rows);
    }
    Ok(rows)
}

/// All rotations of frames of length `≤ max_len` with at most two cyclically
/// consecutive solids are curtained. Returns the first counterexample.
pub fn three_solids_counterexample(max_len: usize) -> Option<Frame> {
    for n in 1..=max_len {
        for solid in 0u64..(1 << n) - 1 {
            let run_ok = (0..n).all(|i| (0..3).any(|j| solid >> ((i + j) % n) & 1 == 0));
            if !run_ok {
                continue;
            }
            let f = Frame::linear(
                (0..n)
                    .map(|i| {
                        if solid >> i & 1 == 1 {
                            Mark::Solid
                        } else {
                            Mark::Diamond
                        }
                    })
                    .collect(),
            );
            if (0..n).any(|r| is_curtained(&f.rotate(r)).is_none()) {
                return Some(f);
            }
        }
    }
    None
}
