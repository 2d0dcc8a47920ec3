//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// Every spanning tree of `(n, edges)` as a sorted list of edge indices,
/// found by exhaustive search over all `(n-1)`-subsets of the edges.
pub fn spanning_trees(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let m = edges.len();
    let k = n.saturating_sub(1);
    if k > m {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        if spans(n, edges, &pick) {
            out.push(pick.clone());
        }
        // advance to the next combination in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| pick[i] != i + m - k) else {
            return out;
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// The lightest of `trees` under `weights`.
pub fn lightest(trees: &[Vec<usize>], weights: &[f64]) -> Option<Vec<usize>> {
    trees
        .iter()
        .map(|t| (t.iter().map(|&i| weights[i]).sum::<f64>(), t))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, t)| t.clone())
}

/// `n-1` edges span iff they connect all `n` vertices (then they are acyclic).
fn spans(n: usize, edges: &[(usize, usize)], pick: &[usize]) -> bool {
    let mut label: Vec<usize> = (0..n).collect();
    for &i in pick {
        let (a, b) = (label[edges[i].0], label[edges[i].1]);
        if a == b {
            return false;
        }
        for l in label.iter_mut() {
            if *l == b {
                *l = a;
            }
        }
    }
    true
}

/// The `rows x cols` grid as vertex count and edge list, vertex `r*cols+c`.
pub fn grid(rows: usize, cols: usize) -> (usize, Vec<(usize, usize)>) {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    (rows * cols, edges)
}

/// Every connected subgraph of `(n, edges)` given by a non-empty edge
/// subset, with vertices relabelled `0..k`.
pub fn connected_edge_subgraphs(
    n: usize,
    edges: &[(usize, usize)],
) -> Vec<(usize, Vec<(usize, usize)>)> {
    let m = edges.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << m) {
        let chosen: Vec<(usize, usize)> = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| edges[i])
            .collect();
        let mut relabel = vec![usize::MAX; n];
        let mut k = 0;
        for &(a, b) in &chosen {
            for v in [a, b] {
                if relabel[v] == usize::MAX {
                    relabel[v] = k;
                    k += 1;
                }
            }
        }
        let local: Vec<(usize, usize)> = chosen
            .iter()
            .map(|&(a, b)| (relabel[a], relabel[b]))
            .collect();
        // connectivity by repeated relaxation
        let mut reach = vec![false; k];
        reach[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &local {
                if reach[a] != reach[b] {
                    reach[a] = true;
                    reach[b] = true;
                    changed = true;
                }
            }
        }
        if reach.iter().all(|&r| r) {
            out.push((k, local));
        }
    }
    out
}

/// Lattice of explicit coordinates for the brute-force dynamics evaluator.
#[derive(Debug, Clone)]
pub struct CoordLattice {
    pub sides: Vec<i64>,
    pub torus: bool,
}

impl CoordLattice {
    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut pts = vec![Vec::new()];
        for &l in &self.sides {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    (0..l).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        pts
    }

    /// Closed neighbourhood straight from `|x - y|_1 <= 1`, sorted.
    pub fn closed_neighbourhood(&self, x: &[i64]) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self
            .points()
            .into_iter()
            .filter(|y| {
                let dist: i64 = x
                    .iter()
                    .zip(y)
                    .zip(&self.sides)
                    .map(|((&a, &b), &l)| {
                        let d = (a - b).abs();
                        if self.torus {
                            d.min(l - d)
                        } else {
                            d
                        }
                    })
                    .sum();
                dist <= 1
            })
            .collect();
        out.sort();
        out
    }

    /// One step of the clustering rule where `choose(x, maximizers)` picks
    /// among ties. Returns the new configuration.
    pub fn step(
        &self,
        c: &BTreeMap<Vec<i64>, u64>,
        mut choose: impl FnMut(&[i64], &[Vec<i64>]) -> Vec<i64>,
    ) -> BTreeMap<Vec<i64>, u64> {
        let mut next: BTreeMap<Vec<i64>, u64> = c.keys().map(|k| (k.clone(), 0)).collect();
        for (x, &v) in c {
            let a = if v == 0 {
                x.clone()
            } else {
                let nb = self.closed_neighbourhood(x);
                let max = nb.iter().map(|y| c[y]).max().unwrap();
                let m: Vec<Vec<i64>> = nb.into_iter().filter(|y| c[y] == max).collect();
                if m.len() == 1 {
                    m[0].clone()
                } else {
                    choose(x, &m)
                }
            };
            *next.get_mut(&a).unwrap() += v;
        }
        next
    }

    /// Maximizer sets of every positive vertex.
    pub fn maximizers(&self, c: &BTreeMap<Vec<i64>, u64>) -> BTreeMap<Vec<i64>, Vec<Vec<i64>>> {
        c.iter()
            .filter(|(_, &v)| v > 0)
            .map(|(x, _)| {
                let nb = self.closed_neighbourhood(x);
                let max = nb.iter().map(|y| c[y]).max().unwrap();
                (x.clone(), nb.into_iter().filter(|y| c[y] == max).collect())
            })
            .collect()
    }
}

/// A small-sample random stream independent of the crate's generators.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn unit(&mut self) -> f64 {
        self.next_u64() as f64 / (1u64 << 53) as f64
    }
}
