//! Doubly-labelled random trees and the collapse map.
//!
//! A tree `T_t` is a Barabási–Albert tree in which every vertex `v_j` also
//! carries a ghost label `ell(v_j)`, drawn preferentially from `T_{j-1}`
//! independently of its attachment `w(v_j)`, and a uniform label `U_j`.
//! Collapsing `T_t` with an edge-step function `f` merges every `v_j` with
//! `U_j > f(j)` into the representative of `ell(v_j)`; the result has the law
//! of `G_t(f)`, and one tree serves every `f` at once.

use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::edgestep::EdgeStepFunction;
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexId};
use crate::rng::{StreamKey, DRAW_COIN, DRAW_FIRST, DRAW_SECOND};

/// Vertices are indexed `0..t` by birth, so the vertex born at step `j` has index `j-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyLabeledTree {
    attach: Vec<u32>,
    ell: Vec<u32>,
    u: Vec<f64>,
}

impl DoublyLabeledTree {
    /// Builds a tree from explicit labels, checking that every label points to
    /// an older vertex and every `U` lies in `[0, 1]`. Index 0 is the root and
    /// must point at itself.
    pub fn from_parts(attach: Vec<u32>, ell: Vec<u32>, u: Vec<f64>) -> Result<Self> {
        let t = attach.len();
        if t == 0 || ell.len() != t || u.len() != t {
            return Err(Error::InvalidTree("label vectors must share a positive length".into()));
        }
        if attach[0] != 0 || ell[0] != 0 {
            return Err(Error::InvalidTree("the root must label itself".into()));
        }
        for j in 1..t {
            if attach[j] as usize >= j || ell[j] as usize >= j {
                return Err(Error::InvalidTree(format!(
                    "labels of vertex {} must point to older vertices",
                    j + 1
                )));
            }
        }
        if let Some(x) = u.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidTree(format!("U label {x} outside [0, 1]")));
        }
        Ok(Self { attach, ell, u })
    }

    /// Grows `T_t` from `key`: step `j` uses the coin slot for `U_j` and the two
    /// preferential slots for `w` and `ell`.
    pub fn grow_with_key(t: u32, key: &StreamKey) -> Self {
        assert!(t >= 1, "horizon must be at least 1");
        let n = t as usize;
        let mut endpoints: Vec<u32> = Vec::with_capacity(2 * n);
        endpoints.push(0);
        endpoints.push(0);
        let mut attach = Vec::with_capacity(n);
        let mut ell = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        attach.push(0);
        ell.push(0);
        u.push(key.uniform(1, DRAW_COIN));
        for j in 2..=t as u64 {
            let slots = endpoints.len();
            let w = endpoints[key.index(j, DRAW_FIRST, slots)];
            let l = endpoints[key.index(j, DRAW_SECOND, slots)];
            let v = (j - 1) as u32;
            endpoints.push(w);
            endpoints.push(v);
            attach.push(w);
            ell.push(l);
            u.push(key.uniform(j, DRAW_COIN));
        }
        Self { attach, ell, u }
    }

    pub fn grow(t: u32, seed: u64) -> Self {
        Self::grow_with_key(t, &StreamKey::new(seed))
    }

    pub fn t(&self) -> u32 {
        self.attach.len() as u32
    }

    /// Attachment target `w` of the vertex with index `j`.
    pub fn attach(&self, j: usize) -> u32 {
        self.attach[j]
    }

    pub fn ell(&self, j: usize) -> u32 {
        self.ell[j]
    }

    pub fn u(&self, j: usize) -> f64 {
        self.u[j]
    }

    /// The labels ignored: the tree as a multigraph (identical to
    /// `evolve(f == 1)` driven by the same key).
    pub fn as_graph(&self) -> MultiGraph {
        let mut g = MultiGraph::with_capacity(self.attach.len());
        for &w in &self.attach[1..] {
            g.push_vertex_step(w);
        }
        g
    }

    /// The collapse `f(T_t)`.
    pub fn collapse(&self, f: &EdgeStepFunction) -> MultiGraph {
        let n = self.attach.len();
        // rep[j] is the graph id of the survivor absorbing tree vertex j; every
        // label points to an older vertex, so one forward pass settles it
        let mut rep: Vec<VertexId> = Vec::with_capacity(n);
        rep.push(0);
        let mut g = MultiGraph::with_capacity(n);
        for j in 1..n {
            let w = rep[self.attach[j] as usize];
            let time = (j + 1) as u64;
            if self.u[j] <= f.eval(time) {
                rep.push(g.push_vertex_step(w));
            } else {
                let l = rep[self.ell[j] as usize];
                g.push_edge_step(w, l);
                rep.push(l);
            }
        }
        g
    }

    /// One line per vertex: `j w ell u` with 1-based ids and `u` printed to
    /// round-trip exactly.
    pub fn write_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for j in 0..self.attach.len() {
            writeln!(
                w,
                "{} {} {} {:?}",
                j + 1,
                self.attach[j] + 1,
                self.ell[j] + 1,
                self.u[j]
            )?;
        }
        Ok(())
    }

    pub fn read_dump<R: BufRead>(r: R) -> Result<Self> {
        let (mut attach, mut ell, mut u) = (Vec::new(), Vec::new(), Vec::new());
        for (i, line) in r.lines().enumerate() {
            let ln = i + 1;
            let err = |reason: String| Error::Parse { line: ln, reason };
            let line = line.map_err(|e| err(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(err("expected `j w ell u`".into()));
            }
            let id = |s: &str| -> Result<u32> {
                match s.parse::<u32>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(err(format!("`{s}` is not a 1-based id"))),
                }
            };
            if id(f[0])? as usize != attach.len() {
                return Err(err("vertex lines must be consecutive from 1".into()));
            }
            attach.push(id(f[1])?);
            ell.push(id(f[2])?);
            u.push(
                f[3].parse::<f64>()
                    .map_err(|_| err(format!("`{}` is not a number", f[3])))?,
            );
        }
        Self::from_parts(attach, ell, u)
    }
}

/// `T_t` for `(t, seed)`.
pub fn grow_tree(t: u32, seed: u64) -> DoublyLabeledTree {
    DoublyLabeledTree::grow(t, seed)
}

pub fn collapse(tree: &DoublyLabeledTree, f: &EdgeStepFunction) -> MultiGraph {
    tree.collapse(f)
}

/// Collapses one tree against every function; outputs align with `fs`.
pub fn coupled_run(tree: &DoublyLabeledTree, fs: &[EdgeStepFunction]) -> Vec<MultiGraph> {
    fs.iter().map(|f| tree.collapse(f)).collect()
}

/// `sum_{s=2}^{horizon} |f(s) - h(s)|`.
pub fn tv_upper_bound(f: &EdgeStepFunction, h: &EdgeStepFunction, horizon: u64) -> f64 {
    (2..=horizon).map(|s| (f.eval(s) - h.eval(s)).abs()).sum()
}

/// Fraction of coupled replicates whose collapses under `f` and `h` differ
/// (compared by canonical form). Replicate `r` grows its tree from the
/// `(seed, r)` stream.
pub fn empirical_disagreement(
    f: &EdgeStepFunction,
    h: &EdgeStepFunction,
    t: u32,
    reps: u32,
    seed: u64,
) -> f64 {
    assert!(reps >= 1, "at least one replicate");
    let base = StreamKey::new(seed);
    let differing: u32 = (0..reps)
        .into_par_iter()
        .map(|r| {
            let tree = DoublyLabeledTree::grow_with_key(t, &base.replicate(r as u64));
            u32::from(tree.collapse(f).canonical() != tree.collapse(h).canonical())
        })
        .sum();
    differing as f64 / reps as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::StepType;

    #[test]
    fn tiny_trees() {
        let t1 = grow_tree(1, 4);
        assert_eq!(t1.t(), 1);
        assert_eq!(t1.as_graph(), MultiGraph::new_initial());
        for seed in 0..50 {
            let t2 = grow_tree(2, seed);
            assert_eq!((t2.attach(1), t2.ell(1)), (0, 0));
        }
    }

    #[test]
    fn third_vertex_labels_are_independent() {
        let n = 100_000u64;
        let (mut w1, mut l1, mut both) = (0u64, 0u64, 0u64);
        let key = StreamKey::new(31);
        for r in 0..n {
            let tree = DoublyLabeledTree::grow_with_key(3, &key.replicate(r));
            let (a, b) = (tree.attach(2) == 0, tree.ell(2) == 0);
            w1 += a as u64;
            l1 += b as u64;
            both += (a && b) as u64;
        }
        let check = |count: u64, p: f64| {
            let sd = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((count as f64 - n as f64 * p).abs() < 4.0 * sd, "{count} vs {p}");
        };
        check(w1, 0.75);
        check(l1, 0.75);
        check(both, 0.5625);
    }

    #[test]
    fn identity_and_total_collapse() {
        let tree = grow_tree(300, 8);
        assert_eq!(tree.collapse(&EdgeStepFunction::ba()), tree.as_graph());
        let zero = tree.collapse(&EdgeStepFunction::constant(0.0).unwrap());
        assert_eq!(zero.vertex_count(), 1);
        assert_eq!(zero.degrees(), vec![600]);
    }

    #[test]
    fn tree_matches_ba_process_on_same_key() {
        let key = StreamKey::new(12).replicate(4);
        let tree = DoublyLabeledTree::grow_with_key(500, &key);
        assert_eq!(
            tree.as_graph(),
            MultiGraph::evolve_with_key(&EdgeStepFunction::ba(), 500, &key)
        );
    }

    #[test]
    fn hand_traced_collapse() {
        // v2 collapses onto v1 (its tree edge becomes a loop), v3 survives
        // and attaches to v2, i.e. to v1 after the merge
        let tree =
            DoublyLabeledTree::from_parts(vec![0, 0, 1], vec![0, 0, 0], vec![0.0, 0.9, 0.1])
                .unwrap();
        let f = EdgeStepFunction::constant(0.5).unwrap();
        let g = tree.collapse(&f);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.birth_times(), &[1, 3]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0), (0, 0), (0, 1)]);
        assert_eq!(g.step_type(2), StepType::Edge);
        assert_eq!(g.step_type(3), StepType::Vertex);
        assert_eq!(g.parent(1), Some(0));
    }

    #[test]
    fn from_parts_validates() {
        assert!(DoublyLabeledTree::from_parts(vec![0, 1], vec![0, 0], vec![0.5, 0.5]).is_err());
        assert!(DoublyLabeledTree::from_parts(vec![0, 0], vec![0, 0], vec![0.5, 1.5]).is_err());
        assert!(DoublyLabeledTree::from_parts(vec![1], vec![0], vec![0.5]).is_err());
        assert!(DoublyLabeledTree::from_parts(vec![], vec![], vec![]).is_err());
    }

    #[test]
    fn coupled_run_extremes() {
        let tree = grow_tree(200, 1);
        let f = EdgeStepFunction::constant(0.4).unwrap();
        let out = coupled_run(&tree, &[f.clone(), f]);
        assert_eq!(out[0], out[1]);
        let out = coupled_run(
            &tree,
            &[EdgeStepFunction::ba(), EdgeStepFunction::constant(0.0).unwrap()],
        );
        assert_eq!(out[0], tree.as_graph());
        assert_eq!(out[1].vertex_count(), 1);
    }

    #[test]
    fn tv_bound_examples() {
        let f = EdgeStepFunction::constant(0.3).unwrap();
        let h = EdgeStepFunction::constant(0.4).unwrap();
        assert_eq!(tv_upper_bound(&f, &f, 1000), 0.0);
        assert!((tv_upper_bound(&f, &h, 101) - 10.0).abs() < 1e-12);
        let g = f
            .perturbed(100, 0.3, |s, v| if (10..=19).contains(&s) { v + 0.01 } else { v })
            .unwrap();
        assert!((tv_upper_bound(&f, &g, 1000) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn disagreement_trivial_cases() {
        let f = EdgeStepFunction::constant(0.5).unwrap();
        assert_eq!(empirical_disagreement(&f, &f, 300, 50, 2), 0.0);
        // differs only past the horizon
        let h = EdgeStepFunction::tabulated(vec![0.5; 299], 0.9).unwrap();
        assert_eq!(empirical_disagreement(&f, &h, 300, 50, 2), 0.0);
    }

    #[test]
    fn tree_dump_round_trip() {
        let tree = grow_tree(200, 77);
        let mut buf = Vec::new();
        tree.write_dump(&mut buf).unwrap();
        let back = DoublyLabeledTree::read_dump(&buf[..]).unwrap();
        assert_eq!(back, tree);
        let mut buf2 = Vec::new();
        back.write_dump(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }
}
