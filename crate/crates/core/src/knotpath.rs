//! Connected-component knots.
//!
//! Scanning `|S_ij|` from largest to smallest and keeping an edge only when
//! its endpoints are still in different components yields the values at
//! which the graphical lasso estimate merges two blocks. This is Kruskal's
//! algorithm for a maximum spanning forest.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::correlation::{Edge, OrderedEdges};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub rho: f64,
    pub edge: (usize, usize),
    pub components_before: usize,
    pub components_after: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotSequence {
    pub knots: Vec<Knot>,
    pub p: usize,
    pub n: usize,
}

impl KnotSequence {
    /// Number of knots `M`.
    pub fn m(&self) -> usize {
        self.knots.len()
    }

    pub fn values(&self) -> Vec<f64> {
        self.knots.iter().map(|k| k.rho).collect()
    }
}

fn accept(e: &Edge) -> bool {
    // A zero correlation never connects anything along the path.
    e.value > 0.0
}

pub fn knot_sequence(e: &OrderedEdges) -> KnotSequence {
    let mut uf = UnionFind::new(e.p);
    let mut knots = Vec::with_capacity(e.p.saturating_sub(1));
    for edge in &e.edges {
        if uf.components() == 1 {
            break;
        }
        if !accept(edge) {
            continue;
        }
        let before = uf.components();
        if uf.union(edge.i, edge.j) {
            knots.push(Knot {
                rho: edge.value,
                edge: (edge.i, edge.j),
                components_before: before,
                components_after: before - 1,
            });
        }
    }
    KnotSequence {
        knots,
        p: e.p,
        n: e.n,
    }
}

fn reachable(adj: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = alloc::vec![false; adj.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            return true;
        }
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

fn count_components(adj: &[Vec<usize>]) -> usize {
    let mut seen = alloc::vec![false; adj.len()];
    let mut count = 0;
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = alloc::vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

/// Same contract as [`knot_sequence`], recomputing connectivity from scratch
/// for every candidate edge. Quartic in `p`; meant as a test oracle.
pub fn knot_sequence_bruteforce(e: &OrderedEdges) -> KnotSequence {
    let mut adj: Vec<Vec<usize>> = alloc::vec![Vec::new(); e.p];
    let mut knots = Vec::new();
    for edge in &e.edges {
        if !accept(edge) || reachable(&adj, edge.i, edge.j) {
            continue;
        }
        let before = count_components(&adj);
        adj[edge.i].push(edge.j);
        adj[edge.j].push(edge.i);
        knots.push(Knot {
            rho: edge.value,
            edge: (edge.i, edge.j),
            components_before: before,
            components_after: count_components(&adj),
        });
    }
    KnotSequence {
        knots,
        p: e.p,
        n: e.n,
    }
}

/// Partition of the variables induced by the knots strictly above `rho`.
/// Each group is sorted; groups are ordered by their smallest member.
pub fn components_at(ks: &KnotSequence, rho: f64) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(ks.p);
    for k in ks.knots.iter().take_while(|k| k.rho > rho) {
        uf.union(k.edge.0, k.edge.1);
    }
    uf.groups()
}
