//! Pendant chains (isolated paths) and first-connection chains (vertex paths).

use crate::graph::{MultiGraph, StepType, VertexId};

/// Maximal isolated paths, each listed from its oldest vertex to its leaf.
///
/// A chain starts at a degree-1 vertex and climbs the parent pointers while
/// the parent has degree exactly 2. The initial vertex never joins a chain.
pub fn isolated_path_chains(g: &MultiGraph) -> Vec<Vec<VertexId>> {
    let deg = g.degrees();
    let mut out = Vec::new();
    for leaf in 1..g.vertex_count() as VertexId {
        if deg[leaf as usize] != 1 || g.step_type(g.birth_time(leaf)) != StepType::Vertex {
            continue;
        }
        let mut chain = vec![leaf];
        let mut v = leaf;
        while let Some(p) = g.parent(v) {
            if p == 0 || deg[p as usize] != 2 {
                break;
            }
            chain.push(p);
            v = p;
        }
        chain.reverse();
        out.push(chain);
    }
    out
}

/// Lengths of the maximal isolated paths, sorted.
pub fn isolated_paths(g: &MultiGraph) -> Vec<u32> {
    let mut lens: Vec<u32> = isolated_path_chains(g)
        .iter()
        .map(|c| c.len() as u32)
        .collect();
    lens.sort_unstable();
    lens
}

/// Number of isolated paths with exactly `l` vertices, all born at or after
/// `window_start`. Each maximal chain of length at least `l` holds exactly one
/// such path: the `l` vertices nearest its leaf.
pub fn count_isolated_paths(g: &MultiGraph, l: usize, window_start: u32) -> usize {
    if l == 0 {
        return 0;
    }
    isolated_path_chains(g)
        .iter()
        .filter(|c| c.len() >= l && g.birth_time(c[c.len() - l]) >= window_start)
        .count()
}

/// Length of the longest vertex path ending at each vertex, using only
/// vertices born by a vertex-step at time `>= t0`; 0 for the others.
pub fn vertex_path_depths(g: &MultiGraph, t0: u32) -> Vec<u32> {
    let n = g.vertex_count();
    let mut depth = vec![0u32; n];
    for v in 0..n as VertexId {
        let b = g.birth_time(v);
        if b < t0 || g.step_type(b) != StepType::Vertex {
            continue;
        }
        depth[v as usize] = match g.parent(v) {
            Some(p) if depth[p as usize] > 0 => depth[p as usize] + 1,
            _ => 1,
        };
    }
    depth
}

pub fn max_vertex_path(g: &MultiGraph, t0: u32) -> u32 {
    vertex_path_depths(g, t0).into_iter().max().unwrap_or(0)
}

/// Number of vertex paths with exactly `k` vertices born at or after `t0`.
pub fn count_vertex_paths(g: &MultiGraph, t0: u32, k: u32) -> usize {
    if k == 0 {
        return 0;
    }
    vertex_path_depths(g, t0)
        .into_iter()
        .filter(|&d| d >= k)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Ok(p)` is a vertex-step under `p`, `Err((a, b))` an edge-step.
    fn build(steps: &[Result<VertexId, (VertexId, VertexId)>]) -> MultiGraph {
        let mut g = MultiGraph::new_initial();
        for s in steps {
            match *s {
                Ok(p) => {
                    g.push_vertex_step(p);
                }
                Err((a, b)) => g.push_edge_step(a, b),
            }
        }
        g
    }

    #[test]
    fn line_graph() {
        let g = build(&[Ok(0), Ok(1)]);
        assert_eq!(isolated_paths(&g), vec![2]);
        assert_eq!(isolated_path_chains(&g), vec![vec![1, 2]]);
    }

    #[test]
    fn no_vertex_steps() {
        let g = build(&[Err((0, 0)), Err((0, 0))]);
        assert!(isolated_paths(&g).is_empty());
        assert_eq!(max_vertex_path(&g, 2), 0);
    }

    #[test]
    fn two_chains() {
        // chain 0 <- 1 <- 2 <- 3 and 0 <- 4 <- 5 <- 6 <- 7
        let g = build(&[Ok(0), Ok(1), Ok(2), Ok(0), Ok(4), Ok(5), Ok(6)]);
        assert_eq!(isolated_paths(&g), vec![3, 4]);
        assert_eq!(count_isolated_paths(&g, 3, 1), 2);
        assert_eq!(count_isolated_paths(&g, 4, 1), 1);
        assert_eq!(count_isolated_paths(&g, 3, 6), 1);
        assert_eq!(count_isolated_paths(&g, 5, 1), 0);
    }

    #[test]
    fn extra_edge_breaks_chain() {
        // 0 <- 1 <- 2 <- 3, then an edge-step hitting 1
        let g = build(&[Ok(0), Ok(1), Ok(2), Err((1, 0))]);
        assert_eq!(isolated_paths(&g), vec![2]);
        // a loop on the leaf kills the whole chain
        let g = build(&[Ok(0), Ok(1), Err((2, 2))]);
        assert!(isolated_paths(&g).is_empty());
    }

    #[test]
    fn forced_path_depth() {
        let steps: Vec<_> = (0..9).map(Ok).collect();
        let g = build(&steps);
        assert_eq!(g.t(), 10);
        assert_eq!(max_vertex_path(&g, 2), 9);
        assert_eq!(max_vertex_path(&g, 5), 6);
        assert_eq!(max_vertex_path(&g, 11), 0);
        assert_eq!(count_vertex_paths(&g, 2, 9), 1);
        assert_eq!(count_vertex_paths(&g, 2, 3), 7);
    }

    #[test]
    fn depth_restarts_at_edge_step_vertices() {
        // 1 born at 2; edge-step at 3; 2 born at 4 under 1; 3 born at 5 under 2
        let g = build(&[Ok(0), Err((0, 1)), Ok(1), Ok(2)]);
        assert_eq!(vertex_path_depths(&g, 2), vec![0, 1, 2, 3]);
        assert_eq!(vertex_path_depths(&g, 3), vec![0, 0, 1, 2]);
    }
}
