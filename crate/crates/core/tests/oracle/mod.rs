//! Brute-force references, written without the library's linear algebra.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use kgraph_core::exactalg::RowSystem;
use kgraph_core::vgraph::{canonicalize, is_kirchhoff, multiplicity, Coord, VectorGraph};

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rank by fraction-free elimination with row gcd reduction.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                let g = m[i].iter().fold(0, |g, &x| gcd(g, x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

pub fn row_matrix(sys: &RowSystem) -> Vec<Vec<i64>> {
    sys.row_matrix().to_rows()
}

/// x in Row(R) iff appending x does not raise the rank.
pub fn in_row(sys: &RowSystem, x: &[i64]) -> bool {
    let mut rows = row_matrix(sys);
    let base = rank(&rows);
    rows.push(x.to_vec());
    rank(&rows) == base
}

/// x in Null(R) iff R x = 0.
pub fn in_null(sys: &RowSystem, x: &[i64]) -> bool {
    row_matrix(sys)
        .iter()
        .all(|row| row.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>() == 0)
}

/// Every point of the box [-b, b]^n inside Row(R), lexicographically sorted.
pub fn box_cuts(sys: &RowSystem, b: i64) -> Vec<Vec<i64>> {
    let n = sys.n();
    let mut out = Vec::new();
    let mut x = vec![-b; n];
    loop {
        if in_row(sys, &x) {
            out.push(x.clone());
        }
        let mut d = n;
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            if x[d] < b {
                x[d] += 1;
                break;
            }
            x[d] = -b;
        }
    }
}

/// All splits of the edge multiset into two nonempty Kirchhoff graphs.
pub fn kirchhoff_splits(g: &VectorGraph) -> Vec<(VectorGraph, VectorGraph)> {
    let edges: Vec<(Coord, usize, u32)> = g.tails().map(|(t, i, c)| (t.clone(), i, c)).collect();
    let total: u32 = edges.iter().map(|e| e.2).sum();
    let mut take = vec![0u32; edges.len()];
    let mut found = Vec::new();
    loop {
        let a_total: u32 = take.iter().sum();
        if a_total > 0 && a_total < total {
            let a = VectorGraph::from_tails(
                g.system().clone(),
                edges.iter().zip(&take).map(|(e, &t)| (e.0.clone(), e.1, t)),
            )
            .unwrap();
            let b = VectorGraph::from_tails(
                g.system().clone(),
                edges.iter().zip(&take).map(|(e, &t)| (e.0.clone(), e.1, e.2 - t)),
            )
            .unwrap();
            if is_kirchhoff(&a).is_ok() && is_kirchhoff(&b).is_ok() {
                found.push((a, b));
            }
        }
        let mut d = 0;
        loop {
            if d == edges.len() {
                return found;
            }
            if take[d] < edges[d].2 {
                take[d] += 1;
                break;
            }
            take[d] = 0;
            d += 1;
        }
    }
}

/// Uniform Kirchhoff graphs with m <= m_max whose tails lie in `[0, w)^2`,
/// found by scanning every edge multiset with at most `m_max` copies per edge.
pub fn window_graphs(sys: &Arc<RowSystem>, w: i64, m_max: u32) -> BTreeSet<VectorGraph> {
    let n = sys.n();
    let mut slots = Vec::new();
    for x in 0..w {
        for y in 0..w {
            for i in 0..n {
                slots.push((Coord(vec![x, y]), i));
            }
        }
    }
    let mut counts = vec![0u32; slots.len()];
    let mut out = BTreeSet::new();
    loop {
        let g = VectorGraph::from_tails(
            sys.clone(),
            slots.iter().zip(&counts).map(|(s, &c)| (s.0.clone(), s.1, c)),
        )
        .unwrap();
        let m = multiplicity(&g);
        if m.m.is_some_and(|m| m >= 1 && m <= m_max) && is_kirchhoff(&g).is_ok() {
            out.insert(canonicalize(&g));
        }
        let mut d = 0;
        loop {
            if d == slots.len() {
                return out;
            }
            if counts[d] < m_max {
                counts[d] += 1;
                break;
            }
            counts[d] = 0;
            d += 1;
        }
    }
}

/// Multiset difference/sum arithmetic on (tail, vec) keys.
pub fn signed_sum(parts: &[(&VectorGraph, &[i64], i64)]) -> std::collections::BTreeMap<(Vec<i64>, usize), i64> {
    let mut acc = std::collections::BTreeMap::new();
    for (g, x, s) in parts {
        let g = canonicalize(g);
        for (t, i, c) in g.tails() {
            let key: (Vec<i64>, usize) = (t.iter().zip(x.iter()).map(|(a, b)| a + b).collect(), i);
            *acc.entry(key).or_insert(0) += s * c as i64;
        }
    }
    acc.retain(|_, v| *v != 0);
    acc
}
