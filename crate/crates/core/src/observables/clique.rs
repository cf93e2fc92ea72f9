//! Clique number of the simple view.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{SimpleView, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clique {
    pub size: usize,
    /// Members, sorted.
    pub members: Vec<VertexId>,
    /// Set when only a prefix of the vertices was searched, so `size` is a
    /// lower bound on the clique number.
    pub lower_bound_only: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct CliqueConfig {
    /// Exact search is run on at most this many (oldest) vertices.
    pub candidate_cap: usize,
    /// Branch-and-bound node budget.
    pub node_budget: u64,
}

impl Default for CliqueConfig {
    fn default() -> Self {
        Self {
            candidate_cap: 500,
            node_budget: 50_000_000,
        }
    }
}

pub fn is_clique(g: &SimpleView, members: &[VertexId]) -> bool {
    members
        .iter()
        .enumerate()
        .all(|(i, &a)| members[i + 1..].iter().all(|&b| a != b && g.adjacent(a, b)))
}

fn greedy_pass(g: &SimpleView, order: impl Iterator<Item = VertexId>) -> Vec<VertexId> {
    let mut clique: Vec<VertexId> = Vec::new();
    for v in order {
        if clique.iter().all(|&c| g.adjacent(c, v)) {
            clique.push(v);
        }
    }
    clique
}

/// Greedy clique: the better of a pass in birth order and a pass by
/// decreasing `degrees` (multigraph degrees, indexed by vertex).
pub fn clique_greedy(g: &SimpleView, degrees: &[u32]) -> Clique {
    let n = g.vertex_count() as VertexId;
    let by_birth = greedy_pass(g, 0..n);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.sort_unstable_by_key(|&v| (std::cmp::Reverse(degrees[v as usize]), v));
    let by_degree = greedy_pass(g, order.into_iter());
    let mut best = if by_degree.len() > by_birth.len() {
        by_degree
    } else {
        by_birth
    };
    debug_assert!(is_clique(g, &best));
    best.sort_unstable();
    Clique {
        size: best.len(),
        members: best,
        lower_bound_only: true,
    }
}

struct Bits {
    words: usize,
    rows: Vec<u64>,
}

impl Bits {
    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }
}

fn count(s: &[u64]) -> u32 {
    s.iter().map(|w| w.count_ones()).sum()
}

fn ones(s: &[u64]) -> impl Iterator<Item = usize> + '_ {
    s.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

struct Search<'a> {
    adj: &'a Bits,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn expand(&mut self, r: &mut Vec<usize>, p: Vec<u64>, x: Vec<u64>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::CliqueBudgetExceeded {
                budget: self.budget,
            });
        }
        let p_size = count(&p) as usize;
        if p_size == 0 {
            if r.len() > self.best.len() {
                self.best = r.clone();
            }
            return Ok(());
        }
        if r.len() + p_size <= self.best.len() {
            return Ok(());
        }
        // pivot from P or X with the most neighbours in P
        let pivot = ones(&p)
            .chain(ones(&x))
            .max_by_key(|&u| {
                self.adj
                    .row(u)
                    .iter()
                    .zip(&p)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
            })
            .expect("P non-empty");
        let candidates: Vec<usize> = {
            let prow = self.adj.row(pivot);
            let rest: Vec<u64> = p.iter().zip(prow).map(|(a, b)| a & !b).collect();
            ones(&rest).collect()
        };
        let mut p = p;
        let mut x = x;
        for v in candidates {
            let row = self.adj.row(v);
            let np: Vec<u64> = p.iter().zip(row).map(|(a, b)| a & b).collect();
            let nx: Vec<u64> = x.iter().zip(row).map(|(a, b)| a & b).collect();
            r.push(v);
            self.expand(r, np, nx)?;
            r.pop();
            p[v / 64] &= !(1u64 << (v % 64));
            x[v / 64] |= 1u64 << (v % 64);
        }
        Ok(())
    }
}

/// Maximum clique by pivoted Bron–Kerbosch with branch-and-bound.
///
/// Graphs larger than `candidate_cap` are restricted to their oldest
/// `candidate_cap` vertices and the result is flagged as a lower bound.
pub fn clique_exact(g: &SimpleView, cfg: &CliqueConfig) -> Result<Clique> {
    let n = g.vertex_count();
    let restricted = n > cfg.candidate_cap;
    let sub;
    let h = if restricted {
        let keep: Vec<VertexId> = (0..cfg.candidate_cap as VertexId).collect();
        sub = g.induced(&keep);
        &sub
    } else {
        g
    };
    let m = h.vertex_count();
    if m == 0 {
        return Ok(Clique {
            size: 0,
            members: Vec::new(),
            lower_bound_only: restricted,
        });
    }
    let words = m.div_ceil(64);
    let mut rows = vec![0u64; m * words];
    for v in 0..m {
        for &w in h.neighbors(v as VertexId) {
            rows[v * words + w as usize / 64] |= 1u64 << (w % 64);
        }
    }
    let adj = Bits { words, rows };
    let mut p = vec![0u64; words];
    for v in 0..m {
        p[v / 64] |= 1u64 << (v % 64);
    }
    let mut search = Search {
        adj: &adj,
        best: vec![0],
        nodes: 0,
        budget: cfg.node_budget,
    };
    search.expand(&mut Vec::new(), p, vec![0u64; words])?;
    let mut members: Vec<VertexId> = search.best.iter().map(|&v| v as VertexId).collect();
    members.sort_unstable();
    debug_assert!(is_clique(g, &members));
    Ok(Clique {
        size: members.len(),
        members,
        lower_bound_only: restricted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> SimpleView {
        let pairs: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        SimpleView::from_pairs(n as usize, pairs.into_iter())
    }

    #[test]
    fn complete_graphs() {
        for n in 1..8 {
            let g = complete(n);
            let c = clique_exact(&g, &CliqueConfig::default()).unwrap();
            assert_eq!(c.size, n as usize);
            assert!(!c.lower_bound_only);
            let deg = vec![n - 1; n as usize];
            assert_eq!(clique_greedy(&g, &deg).size, n as usize);
        }
    }

    #[test]
    fn hidden_clique_beats_greedy_order() {
        // path 0-1-2 then a 4-clique on {3,4,5,6} attached to 2
        let mut pairs = vec![(0, 1), (1, 2), (2, 3)];
        for a in 3..7 {
            for b in a + 1..7 {
                pairs.push((a, b));
            }
        }
        let g = SimpleView::from_pairs(7, pairs.into_iter());
        let c = clique_exact(&g, &CliqueConfig::default()).unwrap();
        assert_eq!(c.members, vec![3, 4, 5, 6]);
        let deg: Vec<u32> = (0..7).map(|v| g.degree(v) as u32).collect();
        let greedy = clique_greedy(&g, &deg);
        assert!(is_clique(&g, &greedy.members));
        assert_eq!(greedy.size, 4);
    }

    #[test]
    fn budget_and_cap() {
        let g = complete(12);
        let tight = CliqueConfig {
            candidate_cap: 500,
            node_budget: 3,
        };
        assert!(matches!(
            clique_exact(&g, &tight),
            Err(Error::CliqueBudgetExceeded { budget: 3 })
        ));
        let capped = CliqueConfig {
            candidate_cap: 5,
            node_budget: 1000,
        };
        let c = clique_exact(&g, &capped).unwrap();
        assert_eq!(c.size, 5);
        assert!(c.lower_bound_only);
    }
}
