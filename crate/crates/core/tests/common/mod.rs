//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use glasso_knots_core::CorrelationMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric matrix with unit diagonal and off-diagonal entries uniform on
/// (-1, 1). Not necessarily positive definite, which the knot scan never
/// needs. With `levels > 0` the entries are drawn from a grid of that many
/// magnitudes, so ties are common.
pub fn random_corr(rng: &mut ChaCha8Rng, p: usize, levels: u32) -> CorrelationMatrix {
    let mut s = vec![0.0; p * p];
    for i in 0..p {
        s[i * p + i] = 1.0;
        for j in i + 1..p {
            let v = if levels == 0 {
                rng.random_range(-1.0..1.0)
            } else {
                let lvl = rng.random_range(1..=levels) as f64 / (levels + 1) as f64;
                if rng.random_bool(0.5) {
                    lvl
                } else {
                    -lvl
                }
            };
            s[i * p + j] = v;
            s[j * p + i] = v;
        }
    }
    CorrelationMatrix::from_values(100, p, s).unwrap()
}

fn abs_pairs(c: &CorrelationMatrix) -> Vec<(f64, usize, usize)> {
    let p = c.p();
    let mut out = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            out.push((c.get(i, j).abs(), i, j));
        }
    }
    out
}

/// Kruskal with relabelling instead of a disjoint-set forest.
pub fn kruskal(c: &CorrelationMatrix) -> Vec<(f64, usize, usize)> {
    let p = c.p();
    let mut pairs = abs_pairs(c);
    pairs.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut label: Vec<usize> = (0..p).collect();
    let mut out = Vec::new();
    for (v, i, j) in pairs {
        if v <= 0.0 || label[i] == label[j] {
            continue;
        }
        let (keep, drop) = (label[i], label[j]);
        for l in label.iter_mut() {
            if *l == drop {
                *l = keep;
            }
        }
        out.push((v, i, j));
    }
    out
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] != i + n - k {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Maximum-weight spanning tree by enumerating every `(p-1)`-subset of the
/// edges. Only sensible for small `p`.
pub fn max_spanning_tree_enumerated(c: &CorrelationMatrix) -> (f64, Vec<(usize, usize)>) {
    let p = c.p();
    let pairs = abs_pairs(c);
    let k = p - 1;
    let mut idx: Vec<usize> = (0..k).collect();
    let mut best: Option<(f64, Vec<(usize, usize)>)> = None;
    loop {
        let mut label: Vec<usize> = (0..p).collect();
        let mut acyclic = true;
        for &e in &idx {
            let (_, i, j) = pairs[e];
            if label[i] == label[j] {
                acyclic = false;
                break;
            }
            let (keep, drop) = (label[i], label[j]);
            for l in label.iter_mut() {
                if *l == drop {
                    *l = keep;
                }
            }
        }
        if acyclic {
            let w: f64 = idx.iter().map(|&e| pairs[e].0).sum();
            if best.as_ref().map_or(true, |(bw, _)| w > *bw) {
                let mut edges: Vec<_> = idx.iter().map(|&e| (pairs[e].1, pairs[e].2)).collect();
                edges.sort();
                best = Some((w, edges));
            }
        }
        if !next_combination(&mut idx, pairs.len()) {
            break;
        }
    }
    best.unwrap()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveMerge {
    pub height: f64,
    pub merged: Vec<usize>,
}

/// Textbook agglomerative single linkage: repeatedly merge the two clusters
/// with the largest maximum cross |S|. Ties go to the pair of clusters whose
/// closest members come first lexicographically.
pub fn naive_single_linkage(c: &CorrelationMatrix) -> Vec<NaiveMerge> {
    let p = c.p();
    let mut clusters: Vec<Vec<usize>> = (0..p).map(|i| vec![i]).collect();
    let mut out = Vec::new();
    while clusters.len() > 1 {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut link: Option<(f64, (usize, usize))> = None;
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        let key = (i.min(j), i.max(j));
                        let v = c.get(i, j).abs();
                        let better = match link {
                            None => true,
                            Some((lv, lk)) => v > lv || (v == lv && key < lk),
                        };
                        if better {
                            link = Some((v, key));
                        }
                    }
                }
                let (v, key) = link.unwrap();
                let better = match best {
                    None => true,
                    Some((bv, bk, _, _)) => v > bv || (v == bv && key < bk),
                };
                if better {
                    best = Some((v, key, a, b));
                }
            }
        }
        let (v, _, a, b) = best.unwrap();
        if v <= 0.0 {
            break;
        }
        let moved = clusters.remove(b);
        clusters[a].extend(moved);
        clusters[a].sort();
        out.push(NaiveMerge {
            height: v,
            merged: clusters[a].clone(),
        });
    }
    out
}
