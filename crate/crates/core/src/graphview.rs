//! Graph views of an upcycle `u` for `A^n`.
//!
//! `S(u)` is the spanning subgraph of the De Bruijn graph `B(a,n)` joining
//! words covered at consecutive positions. `T(u)` is the same relation read as
//! pairs of edges of `B(a,n-1)`, together with the diamond vertices of
//! `B(a,n-1)` at which every in/out pairing is present.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{pow_capped, Error, Result};
use crate::pword::{for_each_covered, format_letters, index_word, Char, CycPWord, Word};
use crate::verify::certified_params;

/// Largest `a^n` materialised as a dense graph.
pub const GRAPH_VIEW_CAP: u128 = 1 << 16;

/// Vertices are the words of `A^n` (by lexicographic index); edges carry the
/// appended letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDigraph {
    pub a: u32,
    pub n: usize,
    /// Sorted, without duplicates.
    pub edges: Vec<(usize, usize, u32)>,
}

impl LabeledDigraph {
    pub fn empty(a: u32, n: usize) -> Result<Self> {
        pow_capped("a^n", a as u64, n, GRAPH_VIEW_CAP)?;
        Ok(LabeledDigraph {
            a,
            n,
            edges: Vec::new(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        (self.a as usize).pow(self.n as u32)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == v).count()
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|&(x, y, _)| (x, y)).collect()
    }
}

/// Ordered pairs of edges of `B(a,n-1)` (words of `A^n`) plus diamond vertices
/// (words of `A^(n-1)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePairSet {
    pub a: u32,
    pub n: usize,
    pub pairs: BTreeSet<(usize, usize)>,
    pub diamond_vertices: BTreeSet<usize>,
}

/// Walks the windows of `u` and calls `f(x, y, letter)` for each word `x`
/// covered at `i` and each `y` covered at `i + 1` that extends it.
fn consecutive_pairs(u: &CycPWord, n: usize, mut f: impl FnMut(usize, usize, u32)) {
    let a = u.alphabet();
    let size = (a as usize).pow(n as u32);
    for i in 0..u.len() {
        let next = u.at(i + n);
        for_each_covered(&u.window_at(i, n), a, |x| {
            let shifted = (x * a as usize) % size;
            for l in 0..a {
                if next.covers_letter(l) {
                    f(x, shifted + l as usize, l);
                }
            }
        });
    }
}

pub fn build_s(u: &CycPWord, n: usize) -> Result<LabeledDigraph> {
    let p = certified_params(u, n)?;
    let mut g = LabeledDigraph::empty(p.a, n)?;
    consecutive_pairs(u, n, |x, y, l| g.edges.push((x, y, l)));
    g.edges.sort_unstable();
    g.edges.dedup();
    Ok(g)
}

pub fn build_t(u: &CycPWord, n: usize) -> Result<EdgePairSet> {
    if n < 2 {
        return Err(Error::InvalidParameter("T(u) needs n ≥ 2".into()));
    }
    let p = certified_params(u, n)?;
    pow_capped("a^n", p.a as u64, n, GRAPH_VIEW_CAP)?;
    let mut pairs = BTreeSet::new();
    consecutive_pairs(u, n, |x, y, _| {
        pairs.insert((x, y));
    });
    let mut diamond_vertices = BTreeSet::new();
    for i in 0..u.len() {
        if u.at(i + n - 1).is_diamond() {
            for_each_covered(&u.window_at(i, n - 1), p.a, |v| {
                diamond_vertices.insert(v);
            });
        }
    }
    Ok(EdgePairSet {
        a: p.a,
        n,
        pairs,
        diamond_vertices,
    })
}

/// `a^d` vertex-disjoint cycles of length `a^(n-d)` covering `B(a,n)`.
///
/// For each word `x` covered by the first window, the diamonds of `u` are
/// filled cyclically with the letters `x` has at that window's diamonds; the
/// windows of the filled cycle form one factor.
pub fn perfect_factor(u: &CycPWord, n: usize) -> Result<Vec<Vec<usize>>> {
    let p = certified_params(u, n)?;
    let size = pow_capped("a^n", p.a as u64, n, GRAPH_VIEW_CAP)?;
    if !u.len().is_multiple_of(n) {
        return Err(Error::Divisibility(format!(
            "n = {n} does not divide a^(n-d) = {}",
            u.len()
        )));
    }
    let first = u.window_at(0, n);
    let slots: Vec<usize> = (0..n).filter(|&i| first[i].is_diamond()).collect();
    let mut cycles = Vec::new();
    let mut seen = vec![false; size];
    for_each_covered(&first, p.a, |x| {
        let word = index_word(x, p.a, n);
        let fill: Vec<u32> = slots.iter().map(|&i| word[i]).collect();
        let mut k = 0;
        let filled: Vec<u32> = u
            .chars()
            .iter()
            .map(|c| match *c {
                Char::Letter(l) => l,
                Char::Diamond => {
                    k += 1;
                    fill[(k - 1) % fill.len()]
                }
            })
            .collect();
        let len = filled.len();
        let cycle: Vec<usize> = (0..len)
            .map(|i| {
                (0..n).fold(0usize, |acc, j| {
                    acc * p.a as usize + filled[(i + j) % len] as usize
                })
            })
            .collect();
        cycles.push(cycle);
    });
    for cycle in &cycles {
        for &v in cycle {
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::Precondition(format!(
                    "factor cycles overlap at {}",
                    format_letters(&index_word(v, p.a, n))
                )));
            }
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Error::Precondition(format!(
            "factor misses {}",
            format_letters(&index_word(v, p.a, n))
        )));
    }
    Ok(cycles)
}

/// Graphviz DOT rendering with deterministic lexicographic ordering.
pub trait ToDot {
    fn to_dot(&self) -> String;
}

fn name(idx: usize, a: u32, len: usize) -> String {
    format!("\"{}\"", format_letters(&index_word(idx, a, len)))
}

impl ToDot for LabeledDigraph {
    fn to_dot(&self) -> String {
        let mut s = String::from("digraph S {\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "  {};", name(v, self.a, self.n));
        }
        for &(x, y, l) in &self.edges {
            let _ = writeln!(
                s,
                "  {} -> {} [label=\"{}\"];",
                name(x, self.a, self.n),
                name(y, self.a, self.n),
                format_letters(&[l])
            );
        }
        s.push_str("}\n");
        s
    }
}

impl ToDot for EdgePairSet {
    fn to_dot(&self) -> String {
        let (a, n) = (self.a, self.n);
        let vertices = (a as usize).pow(n as u32 - 1);
        let words = vertices * a as usize;
        let mut s = String::from("digraph T {\n");
        for v in 0..vertices {
            let shape = if self.diamond_vertices.contains(&v) {
                " [shape=diamond]"
            } else {
                ""
            };
            let _ = writeln!(s, "  {}{shape};", name(v, a, n - 1));
        }
        for w in 0..words {
            let _ = writeln!(
                s,
                "  {} -> {} [label={}];",
                name(w / a as usize, a, n - 1),
                name(w % vertices, a, n - 1),
                name(w, a, n)
            );
        }
        for &(x, y) in &self.pairs {
            let _ = writeln!(
                s,
                "  // pair {} {}",
                format_letters(&index_word(x, a, n)),
                format_letters(&index_word(y, a, n))
            );
        }
        s.push_str("}\n");
        s
    }
}

pub fn export_dot(g: &impl ToDot) -> String {
    g.to_dot()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cyc(s: &str) -> CycPWord {
        CycPWord::parse(s, 2).unwrap()
    }

    /// Out-degree `a` exactly when the covering window starts with a diamond.
    fn check_degree_law(u: &CycPWord, n: usize) {
        let g = build_s(u, n).unwrap();
        let a = u.alphabet() as usize;
        for i in 0..u.len() {
            let w = u.window_at(i, n);
            let expected_out = if w[0].is_diamond() { a } else { 1 };
            let expected_in = if w[n - 1].is_diamond() { a } else { 1 };
            for_each_covered(&w, u.alphabet(), |x| {
                assert_eq!(g.out_degree(x), expected_out);
                assert_eq!(g.in_degree(x), expected_in);
            });
        }
    }

    #[test]
    fn s_of_u4() {
        let g = build_s(&fixtures::u4(), 4).unwrap();
        assert_eq!(g.vertex_count(), 16);
        let wide = (0..16).filter(|&v| g.out_degree(v) == 2).count();
        // 4 words covered by ⋄110 and ⋄001, 12 of degree one
        assert_eq!(wide, 4);
        assert_eq!(g.edges.len(), 20);
        for &(x, y, l) in &g.edges {
            assert_eq!((x * 2) % 16, y - l as usize);
        }
        check_degree_law(&fixtures::u4(), 4);
    }

    #[test]
    fn s_of_de_bruijn_is_a_cycle() {
        let g = build_s(&cyc("(0000100110101111)"), 4).unwrap();
        assert_eq!(g.edges.len(), 16);
        assert!((0..16).all(|v| g.out_degree(v) == 1 && g.in_degree(v) == 1));
    }

    #[test]
    fn degree_law_on_product() {
        check_degree_law(&fixtures::u4_times_2(), 4);
    }

    #[test]
    fn t_of_u4() {
        let t = build_t(&fixtures::u4(), 4).unwrap();
        let names: Vec<String> = t
            .diamond_vertices
            .iter()
            .map(|&v| format_letters(&index_word(v, 2, 3)))
            .collect();
        assert_eq!(names, ["001", "110"]);
        assert_eq!(t.pairs, build_s(&fixtures::u4(), 4).unwrap().edge_set());
        assert!(build_t(&cyc("(0000100110101111)"), 4)
            .unwrap()
            .diamond_vertices
            .is_empty());
        assert_eq!(
            build_t(&fixtures::u4_times_2(), 4)
                .unwrap()
                .diamond_vertices
                .len(),
            16
        );
    }

    #[test]
    fn diamond_vertices_match_definition() {
        for (u, n) in [
            (fixtures::u4(), 4),
            (fixtures::u4_times_2(), 4),
            (fixtures::seven_upcycles()[3].clone(), 8),
        ] {
            let t = build_t(&u, n).unwrap();
            let a = u.alphabet() as usize;
            let vertices = a.pow(n as u32 - 1);
            let by_definition: BTreeSet<usize> = (0..vertices)
                .filter(|&v| {
                    (0..a)
                        .all(|c| (0..a).all(|c2| t.pairs.contains(&(c * vertices + v, v * a + c2))))
                })
                .collect();
            assert_eq!(t.diamond_vertices, by_definition);
        }
    }

    #[test]
    fn factor_examples() {
        let f = perfect_factor(&fixtures::u4(), 4).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|c| c.len() == 8));
        let f = perfect_factor(&cyc("(0000100110101111)"), 4).unwrap();
        assert_eq!((f.len(), f[0].len()), (1, 16));
        let f = perfect_factor(&fixtures::u4_times_2(), 4).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|c| c.len() == 64));
    }

    #[test]
    fn dot_examples() {
        let s = export_dot(&build_s(&cyc("(0011)"), 2).unwrap());
        assert_eq!(s.matches("->").count(), 4);
        assert!(s.contains("\"00\" -> \"01\" [label=\"1\"];"));
        let t = export_dot(&build_t(&fixtures::u4(), 4).unwrap());
        assert_eq!(t.matches("shape=diamond").count(), 2);
        assert_eq!(t.matches(" -> ").count(), 16);
        assert_eq!(
            t.lines()
                .filter(|l| l.starts_with("  \"") && !l.contains("->"))
                .count(),
            8
        );
        let e = export_dot(&LabeledDigraph::empty(2, 2).unwrap());
        assert_eq!(
            e,
            "digraph S {\n  \"00\";\n  \"01\";\n  \"10\";\n  \"11\";\n}\n"
        );
    }
}
