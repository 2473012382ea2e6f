//! Exact elements of `Z[ξ]`, `ξ = e^(2πi/p)`, stored as `Σ c_j ξ^j`.
//!
//! Since `1 + ξ + … + ξ^(p-1) = 0`, two count vectors denote the same number
//! exactly when their reductions `c_j - c_(p-1)` (`j < p-1`) agree.

use std::fmt;
use std::ops::Add;

#[derive(Debug, Clone, Eq)]
pub struct CycloInt {
    counts: Vec<i64>,
}

impl CycloInt {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 2);
        CycloInt {
            counts: vec![0; p as usize],
        }
    }

    pub fn from_counts(counts: Vec<i64>) -> Self {
        assert!(counts.len() >= 2);
        CycloInt { counts }
    }

    pub fn from_integer(p: u32, value: i64) -> Self {
        let mut c = Self::zero(p);
        c.counts[0] = value;
        c
    }

    pub fn p(&self) -> u32 {
        self.counts.len() as u32
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// Adds `ξ^j`.
    pub fn add_root_power(&mut self, j: u32) {
        let p = self.counts.len();
        self.counts[j as usize % p] += 1;
    }

    /// Coordinates in the basis `1, ξ, …, ξ^(p-2)`.
    pub fn canonical(&self) -> Vec<i64> {
        let last = *self.counts.last().expect("p ≥ 2");
        self.counts[..self.counts.len() - 1]
            .iter()
            .map(|c| c - last)
            .collect()
    }

    /// The value when it is a rational integer.
    pub fn as_integer(&self) -> Option<i64> {
        let c = self.canonical();
        c[1..].iter().all(|&x| x == 0).then_some(c[0])
    }

    /// `c_1 = … = c_(p-1)` and `c_0 = c_(p-1) - 1`.
    pub fn is_minus_one(&self) -> bool {
        self.as_integer() == Some(-1)
    }
}

impl PartialEq for CycloInt {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p() && self.canonical() == other.canonical()
    }
}

impl Add for &CycloInt {
    type Output = CycloInt;
    fn add(self, rhs: &CycloInt) -> CycloInt {
        assert_eq!(self.p(), rhs.p());
        CycloInt {
            counts: self
                .counts
                .iter()
                .zip(&rhs.counts)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_integer() {
            return write!(f, "{v}");
        }
        let terms: Vec<String> = self
            .canonical()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, c)| match j {
                0 => c.to_string(),
                1 => format!("{c}ξ"),
                _ => format!("{c}ξ^{j}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_one_forms() {
        assert!(CycloInt::from_counts(vec![3, 4]).is_minus_one());
        assert!(CycloInt::from_counts(vec![1, 2, 2]).is_minus_one());
        assert!(!CycloInt::from_counts(vec![1, 2, 3]).is_minus_one());
        // 0 + ξ + ξ² = -1
        assert_eq!(
            CycloInt::from_counts(vec![0, 1, 1]),
            CycloInt::from_integer(3, -1)
        );
    }

    #[test]
    fn display() {
        assert_eq!(CycloInt::from_counts(vec![5, 2]).to_string(), "3");
        assert_eq!(CycloInt::from_counts(vec![2, 3, 0]).to_string(), "2 + 3ξ");
    }
}
