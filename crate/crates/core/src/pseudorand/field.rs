//! Small finite fields `F_{p^k}` with fixed moduli and a precomputed trace.
//!
//! Element `i` is the polynomial whose coefficient of `x^j` is the `j`-th
//! base-`p` digit of `i` (least significant first).

use crate::error::{Error, Result};

/// Largest field order supported.
pub const FIELD_CAP: u32 = 1 << 16;

/// Moduli for proper extensions, coefficients from the constant term up.
const MODULI: [(u32, u32, &[u32]); 6] = [
    (4, 2, &[1, 1, 1]),
    (8, 2, &[1, 1, 0, 1]),
    (9, 3, &[1, 0, 1]),
    (16, 2, &[1, 1, 0, 0, 1]),
    (25, 5, &[1, 1, 1]),
    (27, 3, &[1, 2, 0, 1]),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    k: usize,
    modulus: Vec<u32>,
    trace: Vec<u32>,
}

pub fn is_prime(x: u32) -> bool {
    x >= 2
        && (2..)
            .take_while(|d: &u32| d * d <= x)
            .all(|d| !x.is_multiple_of(d))
}

/// Remainder of `f` modulo the monic `g` over `F_p` (coefficients low to high).
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().expect("nonempty");
        if lead != 0 {
            let shift = r.len() - dg;
            for (j, &gj) in g[..dg].iter().enumerate() {
                let t = ((p - lead) as u64 * gj as u64 % p as u64) as u32;
                r[shift + j] = (r[shift + j] + t) % p;
            }
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Whether the monic `f` has no monic factor of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for dg in 1..=deg / 2 {
        let count = (p as usize).pow(dg as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(dg + 1);
            let mut rest = low;
            for _ in 0..dg {
                g.push((rest % p as usize) as u32);
                rest /= p as usize;
            }
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// The field of the given order: any prime, or one of 4, 8, 9, 16, 25, 27.
    pub fn new(order: u32) -> Result<Self> {
        if order > FIELD_CAP {
            return Err(Error::CapExceeded {
                what: "field order",
                value: order as u128,
                cap: FIELD_CAP as u128,
            });
        }
        if is_prime(order) {
            return Self::with_modulus(order, &[0, 1]);
        }
        match MODULI.iter().find(|m| m.0 == order) {
            Some(&(_, p, modulus)) => Self::with_modulus(p, modulus),
            None => Err(Error::Alphabet(order)),
        }
    }

    /// `F_p[x]/(modulus)` for a monic modulus, rejected unless irreducible.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameter(
                "modulus must be monic over F_p with degree ≥ 1".into(),
            ));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let k = modulus.len() - 1;
        let mut field = FiniteField {
            p,
            k,
            modulus: modulus.to_vec(),
            trace: Vec::new(),
        };
        let order = field.order();
        field.trace = (0..order).map(|x| field.compute_trace(x)).collect();
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.k as u32)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn pack_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        let (dx, dy) = (self.digits(x), self.digits(y));
        let s: Vec<u32> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % self.p).collect();
        self.pack_digits(&s)
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        let (dx, dy) = (self.digits(x), self.digits(y));
        let s: Vec<u32> = dx
            .iter()
            .zip(&dy)
            .map(|(a, b)| (a + self.p - b) % self.p)
            .collect();
        self.pack_digits(&s)
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        let (dx, dy) = (self.digits(x), self.digits(y));
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, &a) in dx.iter().enumerate() {
            for (j, &b) in dy.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u64 * b as u64) % self.p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.k, 0);
        self.pack_digits(&r)
    }

    fn compute_trace(&self, x: u32) -> u32 {
        let mut sum = 0;
        let mut power = x;
        for i in 0..self.k {
            sum = self.add(sum, power);
            if i + 1 == self.k {
                break;
            }
            let mut next = 1;
            for _ in 0..self.p {
                next = self.mul(next, power);
            }
            power = next;
        }
        debug_assert!(sum < self.p, "trace lies in the prime field");
        sum
    }

    /// `Tr(x) = x + x^p + … + x^(p^(k-1))`, an element of `F_p`.
    pub fn trace(&self, x: u32) -> u32 {
        self.trace[x as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supported_orders() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 31] {
            let f = FiniteField::new(q).unwrap();
            assert_eq!(f.order(), q);
        }
        assert!(FiniteField::new(6).is_err());
        assert!(FiniteField::new(32).is_err());
    }

    #[test]
    fn reducible_moduli_rejected() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(FiniteField::with_modulus(2, &[1, 0, 1]).is_err());
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2
        assert!(FiniteField::with_modulus(2, &[1, 0, 1, 0, 1]).is_err());
        // x^2 + 1 splits over F_5
        assert!(FiniteField::with_modulus(5, &[1, 0, 1]).is_err());
    }

    #[test]
    fn field_axioms_hold() {
        for q in [4, 8, 9, 16, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            for x in 1..q {
                // every nonzero element has an inverse
                assert!(
                    (1..q).any(|y| f.mul(x, y) == 1),
                    "F_{q}: {x} has no inverse"
                );
                assert_eq!(f.sub(f.add(x, 3 % q), 3 % q), x);
            }
        }
    }

    #[test]
    fn trace_is_balanced_and_additive() {
        for q in [2, 3, 4, 8, 9, 16, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            let p = f.p();
            for t in 0..p {
                assert_eq!((0..q).filter(|&x| f.trace(x) == t).count() as u32, q / p);
            }
            for x in 0..q {
                for y in 0..q {
                    assert_eq!(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % p);
                }
            }
        }
    }
}
