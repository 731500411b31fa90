//! Single-linkage clustering on absolute correlations.
//!
//! Merging the two groups with the largest cross-correlation is exactly the
//! union step of the knot scan, so the dendrogram is read off the knot
//! sequence: every knot is one merge at height `ρ̃_k`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::correlation::{ordered_edges, CorrelationMatrix};
use crate::knotpath::{knot_sequence, KnotSequence};
use crate::unionfind::UnionFind;

/// Node ids: leaves are `0..p`, the merge at position `t` creates `p + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub height: f64,
    pub left: usize,
    pub right: usize,
    pub new_node: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: usize,
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn from_knots(ks: &KnotSequence) -> Self {
        let p = ks.p;
        let mut uf = UnionFind::new(p);
        // Tree node currently representing each union-find root.
        let mut node: Vec<usize> = (0..p).collect();
        let mut merges = Vec::with_capacity(ks.m());
        for (t, k) in ks.knots.iter().enumerate() {
            let (ra, rb) = (uf.find(k.edge.0), uf.find(k.edge.1));
            let (left, right) = (node[ra], node[rb]);
            uf.union(ra, rb);
            let root = uf.find(ra);
            let new_node = p + t;
            node[root] = new_node;
            merges.push(Merge {
                height: k.rho,
                left,
                right,
                new_node,
                size: uf.set_size(root),
            });
        }
        Self { leaves: p, merges }
    }

    pub fn heights(&self) -> Vec<f64> {
        self.merges.iter().map(|m| m.height).collect()
    }

    /// Members of tree node `id`, sorted.
    pub fn members(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![id];
        while let Some(v) = stack.pop() {
            if v < self.leaves {
                out.push(v);
            } else {
                let m = &self.merges[v - self.leaves];
                stack.push(m.left);
                stack.push(m.right);
            }
        }
        out.sort_unstable();
        out
    }

    /// Clusters formed by merges strictly above `level`, each sorted and
    /// ordered by smallest member.
    pub fn groups_at(&self, level: f64) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.leaves);
        // Any leaf below a node identifies the node's cluster.
        let mut rep: Vec<usize> = (0..self.leaves).collect();
        for m in self.merges.iter().take_while(|m| m.height > level) {
            uf.union(rep[m.left], rep[m.right]);
            rep.push(rep[m.left]);
        }
        uf.groups()
    }
}

pub fn single_linkage(c: &CorrelationMatrix) -> Dendrogram {
    Dendrogram::from_knots(&knot_sequence(&ordered_edges(c)))
}
