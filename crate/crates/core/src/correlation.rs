//! Sample correlation matrix and the decreasing order of its off-diagonal
//! absolute values.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{mean_and_ss, DataMatrix};

/// Symmetric `p × p` correlation matrix with unit diagonal, tagged with the
/// sample size that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    n: usize,
    p: usize,
    s: Vec<f64>,
}

impl CorrelationMatrix {
    /// Validates a row-major matrix supplied by the caller.
    pub fn from_values(n: usize, p: usize, s: Vec<f64>) -> Result<Self> {
        if p < 2 {
            return Err(Error::Dimension(format!("need p >= 2, got {p}")));
        }
        if n < 3 {
            return Err(Error::Dimension(format!("need n >= 3, got {n}")));
        }
        if s.len() != p * p {
            return Err(Error::Dimension(format!(
                "expected {} entries, got {}",
                p * p,
                s.len()
            )));
        }
        for i in 0..p {
            if s[i * p + i] != 1.0 {
                return Err(Error::InvalidCorrelation(format!(
                    "diagonal entry {i} is {}",
                    s[i * p + i]
                )));
            }
            for j in 0..i {
                let (a, b) = (s[i * p + j], s[j * p + i]);
                if !a.is_finite() || a.abs() > 1.0 + 1e-12 {
                    return Err(Error::InvalidCorrelation(format!(
                        "entry ({i}, {j}) = {a} outside [-1, 1]"
                    )));
                }
                if a != b {
                    return Err(Error::InvalidCorrelation(format!(
                        "asymmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self { n, p, s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.s[i * self.p + j]
    }

    /// Row-major entries.
    pub fn values(&self) -> &[f64] {
        &self.s
    }

    /// Copy with variables reordered so that new index `k` is old `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let p = self.p;
        let mut s = alloc::vec![0.0; p * p];
        for a in 0..p {
            for b in 0..p {
                s[a * p + b] = self.get(perm[a], perm[b]);
            }
        }
        Self { n: self.n, p, s }
    }
}

/// `S_ij = X_i·X_j / (‖X_i‖ ‖X_j‖)` after centering each column.
pub fn correlation_matrix(d: &DataMatrix) -> Result<CorrelationMatrix> {
    let (n, p) = (d.n(), d.p());
    let mut units: Vec<f64> = Vec::with_capacity(n * p);
    for j in 0..p {
        let col = d.column(j);
        let (mean, ss) = mean_and_ss(col);
        d.check_spread(j, mean, ss)?;
        let norm = libm::sqrt(ss);
        units.extend(col.iter().map(|v| (v - mean) / norm));
    }
    let mut s = alloc::vec![0.0; p * p];
    for i in 0..p {
        s[i * p + i] = 1.0;
        let ui = &units[i * n..(i + 1) * n];
        for j in i + 1..p {
            let uj = &units[j * n..(j + 1) * n];
            let dot: f64 = ui.iter().zip(uj).map(|(a, b)| a * b).sum();
            let v = dot.clamp(-1.0, 1.0);
            s[i * p + j] = v;
            s[j * p + i] = v;
        }
    }
    Ok(CorrelationMatrix { n, p, s })
}

/// An off-diagonal pair `i < j` with `value = |S_ij|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub value: f64,
    pub i: usize,
    pub j: usize,
}

impl Edge {
    /// Descending by value, then ascending by `(i, j)`.
    pub fn order(a: &Edge, b: &Edge) -> Ordering {
        b.value
            .total_cmp(&a.value)
            .then(a.i.cmp(&b.i))
            .then(a.j.cmp(&b.j))
    }

    pub fn touches(&self, other: &Edge) -> bool {
        self.i == other.i || self.i == other.j || self.j == other.i || self.j == other.j
    }
}

/// All `p(p-1)/2` absolute correlations in decreasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedEdges {
    pub p: usize,
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl OrderedEdges {
    /// Sorts arbitrary edges under the shared tie-break. Used by tests and by
    /// callers that build edge lists by hand.
    pub fn from_edges(p: usize, n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_by(Edge::order);
        Self { p, n, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether the `k` largest edges are pairwise vertex-disjoint.
    pub fn top_disjoint(&self, k: usize) -> bool {
        let top = &self.edges[..k.min(self.edges.len())];
        top.iter()
            .enumerate()
            .all(|(a, e)| top[..a].iter().all(|f| !e.touches(f)))
    }
}

pub fn ordered_edges(c: &CorrelationMatrix) -> OrderedEdges {
    let p = c.p;
    let mut edges = Vec::with_capacity(p * (p - 1) / 2);
    for i in 0..p {
        for j in i + 1..p {
            edges.push(Edge {
                value: c.get(i, j).abs(),
                i,
                j,
            });
        }
    }
    OrderedEdges::from_edges(p, c.n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn identical_and_negated_columns() {
        let d = DataMatrix::from_rows(&[
            vec![1.0, 1.0, -1.0],
            vec![2.0, 2.0, -2.0],
            vec![4.0, 4.0, -4.0],
        ])
        .unwrap();
        let c = correlation_matrix(&d).unwrap();
        assert_eq!(c.get(0, 1), 1.0);
        assert_eq!(c.get(0, 2), -1.0);
        assert_eq!(c.get(2, 2), 1.0);
    }

    #[test]
    fn three_variable_order() {
        let c = CorrelationMatrix::from_values(
            10,
            3,
            vec![1.0, 0.9, -0.8, 0.9, 1.0, 0.7, -0.8, 0.7, 1.0],
        )
        .unwrap();
        let e = ordered_edges(&c);
        let pairs: Vec<_> = e.edges.iter().map(|e| (e.value, e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0.9, 0, 1), (0.8, 0, 2), (0.7, 1, 2)]);
    }

    #[test]
    fn ties_break_lexicographically() {
        let c = CorrelationMatrix::from_values(
            10,
            3,
            vec![1.0, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 1.0],
        )
        .unwrap();
        let e = ordered_edges(&c);
        let idx: Vec<_> = e.edges.iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(idx, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn validation() {
        assert!(CorrelationMatrix::from_values(10, 2, vec![1.0, 0.5, 0.4, 1.0]).is_err());
        assert!(CorrelationMatrix::from_values(10, 2, vec![0.9, 0.5, 0.5, 1.0]).is_err());
        assert!(CorrelationMatrix::from_values(10, 2, vec![1.0, 1.5, 1.5, 1.0]).is_err());
    }

    #[test]
    fn disjoint_top_edges() {
        let e = OrderedEdges::from_edges(
            4,
            10,
            vec![
                Edge { value: 0.9, i: 0, j: 1 },
                Edge { value: 0.8, i: 2, j: 3 },
                Edge { value: 0.7, i: 1, j: 2 },
            ],
        );
        assert!(e.top_disjoint(2));
        assert!(!e.top_disjoint(3));
    }
}
