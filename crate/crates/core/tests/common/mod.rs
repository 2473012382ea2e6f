//! Strategies and property checks shared by the property suite and the
//! acceptance run.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use upcycle::fixtures;
use upcycle::nonexist::is_k_curtained;
use upcycle::pseudorand::{balance, run_counts, CycloInt, ExactRational};
use upcycle::pword::{covers, windows};
use upcycle::search::{cross_join, find_cross_joins};
use upcycle::verify::{certified_params, verify_upcycle};
use upcycle::{AnyWord, Char, CycPWord, Frame, Mark, SymmetryOp, Word};

pub type Check = Result<(), TestCaseError>;

fn char_strategy(a: u32) -> impl Strategy<Value = Char> {
    prop_oneof![4 => (0..a).prop_map(Char::Letter), 1 => Just(Char::Diamond)]
}

pub fn cyclic_word() -> impl Strategy<Value = CycPWord> {
    (2u32..=4).prop_flat_map(|a| {
        prop::collection::vec(char_strategy(a), 1..=16)
            .prop_map(move |c| CycPWord::new(c, a).unwrap())
    })
}

/// Every certified upcycle fixture with its window length.
pub fn upcycle_fixtures() -> Vec<(CycPWord, usize)> {
    let mut all = vec![(fixtures::u4(), 4), (fixtures::u4_times_2(), 4)];
    all.extend(fixtures::seven_upcycles().into_iter().map(|u| (u, 8)));
    all.extend(fixtures::u4_lifts().into_iter().map(|u| (u, 4)));
    all
}

pub fn cover_case() -> impl Strategy<Value = (CycPWord, usize, Vec<u32>)> {
    (
        cyclic_word(),
        0usize..16,
        prop::collection::vec(0u32..4, 1..=16),
    )
}

pub fn check_cover_rotation((x, r, y_seed): (CycPWord, usize, Vec<u32>)) -> Check {
    let len = x.len();
    let y: Vec<u32> = y_seed.iter().take(len).map(|l| l % x.alphabet()).collect();
    let rotated = x.rotate(r as isize);
    let mut shifted: Vec<usize> = covers(&x, &y)
        .unwrap()
        .into_iter()
        .map(|p| (p - 1 + len - r % len) % len + 1)
        .collect();
    shifted.sort_unstable();
    prop_assert_eq!(covers(&rotated, &y).unwrap(), shifted);
    Ok(())
}

pub fn check_canonical((x, r): (CycPWord, isize)) -> Check {
    let c = x.canonical_rotation();
    prop_assert_eq!(c.canonical_rotation(), c.clone());
    prop_assert_eq!(x.rotate(r).canonical_rotation(), c.clone());
    prop_assert!(x.rotation_to(&c).is_some());
    Ok(())
}

pub fn remove_m_case() -> impl Strategy<Value = (Vec<Mark>, usize, usize)> {
    (
        prop::collection::vec(prop_oneof![Just(Mark::Solid), Just(Mark::Diamond)], 1..=12),
        1usize..=5,
        0usize..12,
    )
}

/// A frame `p` and its power `p^s` have the same `k`-curtains for `k ≤ |p|`.
pub fn check_remove_m((p, s, k_seed): (Vec<Mark>, usize, usize)) -> Check {
    let k = k_seed % p.len() + 1;
    let f = Frame::linear(p.repeat(s));
    let p = Frame::linear(p);
    prop_assert_eq!(is_k_curtained(&p, k), is_k_curtained(&f, k));
    Ok(())
}

/// `Σ c_j ξ^j` as a complex number.
fn evaluate(counts: &[i64]) -> (f64, f64) {
    let p = counts.len() as f64;
    counts
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(re, im), (j, &c)| {
            let theta = std::f64::consts::TAU * j as f64 / p;
            (re + c as f64 * theta.cos(), im + c as f64 * theta.sin())
        })
}

pub fn count_vector() -> impl Strategy<Value = Vec<i64>> {
    prop::sample::select(vec![2usize, 3, 5, 7]).prop_flat_map(|p| {
        prop_oneof![
            prop::collection::vec(-4i64..=4, p),
            // −1 shifted by a multiple of 1 + ξ + … + ξ^(p-1), plus a small nudge
            (-4i64..=4, 0..p, -1i64..=1).prop_map(move |(k, j, nudge)| {
                let mut c = vec![k; p];
                c[0] -= 1;
                c[j] += nudge;
                c
            }),
        ]
    })
}

/// `is_minus_one` agrees with the structural form and with the complex value.
/// With |c_j| ≤ 5 and p ≤ 7 a nonzero `x + 1` has absolute value far above
/// the tolerance, since its norm is a nonzero integer.
pub fn check_minus_one(counts: Vec<i64>) -> Check {
    let p = counts.len();
    let structural =
        counts[1..].iter().all(|&c| c == counts[p - 1]) && counts[0] == counts[p - 1] - 1;
    let (re, im) = evaluate(&counts);
    let numeric = (re + 1.0).abs() < 1e-9 && im.abs() < 1e-9;
    let x = CycloInt::from_counts(counts);
    prop_assert_eq!(x.is_minus_one(), structural);
    prop_assert_eq!(x.is_minus_one(), numeric);
    Ok(())
}

/// `E(u, ℓ)` is the count of `ℓ` plus a `1/a` share of each diamond.
pub fn check_single_runs((u, n): (CycPWord, usize)) -> Check {
    if n > u.len() {
        return Ok(());
    }
    let a = u.alphabet();
    let table = run_counts(&u, n).unwrap();
    let bal = balance(&u);
    for l in 0..a {
        let expected = ExactRational::new(
            bal.counts[&l] as i64 * a as i64 + u.diamond_count() as i64,
            a as i64,
        );
        prop_assert_eq!(&table.entries[&(l, 1)], &expected);
    }
    Ok(())
}

fn symmetry_strategy(a: u32, len: usize) -> impl Strategy<Value = SymmetryOp> {
    let identity: Vec<u32> = (0..a).collect();
    prop_oneof![
        (0..len as isize).prop_map(SymmetryOp::Rotate),
        Just(SymmetryOp::Reverse),
        Just(SymmetryOp::Complement),
        Just(identity).prop_shuffle().prop_map(SymmetryOp::Permute),
    ]
}

pub fn symmetry_case() -> impl Strategy<Value = (usize, SymmetryOp)> {
    (0..upcycle_fixtures().len()).prop_flat_map(|i| {
        let (u, _) = &upcycle_fixtures()[i];
        (Just(i), symmetry_strategy(u.alphabet(), u.len()))
    })
}

pub fn check_symmetry((index, op): (usize, SymmetryOp)) -> Check {
    let (u, n) = &upcycle_fixtures()[index];
    let image = u.apply_symmetry(&op).unwrap();
    prop_assert!(
        verify_upcycle(&image, *n).unwrap().valid,
        "{} under {}",
        u,
        op
    );
    prop_assert_eq!(
        certified_params(&image, *n).unwrap(),
        certified_params(u, *n).unwrap()
    );
    Ok(())
}

fn window_multiset(u: &CycPWord, n: usize) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for w in windows(u, n).unwrap() {
        *m.entry(w.to_string()).or_insert(0) += 1;
    }
    m
}

pub fn cross_join_case() -> impl Strategy<Value = (usize, usize)> {
    (0..upcycle_fixtures().len(), 0usize..64)
}

pub fn check_cross_join((index, pick): (usize, usize)) -> Check {
    let (u, n) = &upcycle_fixtures()[index];
    let joins = find_cross_joins(u, *n, 64);
    if joins.is_empty() {
        return Ok(());
    }
    let (x, y, at) = &joins[pick % joins.len()];
    let AnyWord::Cyclic(out) = cross_join(&AnyWord::Cyclic(u.clone()), *n, x, y, at).unwrap()
    else {
        unreachable!("cyclic in, cyclic out")
    };
    prop_assert_eq!(window_multiset(&out, *n), window_multiset(u, *n));
    prop_assert!(verify_upcycle(&out, *n).unwrap().valid);
    Ok(())
}
