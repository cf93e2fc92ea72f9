//! Measurements on a single graph.

mod clique;
mod diameter;
mod paths;

use std::collections::BTreeMap;

use serde::Serialize;

pub use clique::{clique_exact, clique_greedy, is_clique, Clique, CliqueConfig};
pub use diameter::{
    diameter_bounds, diameter_exact, diameter_fringe_exact, measure_diameter, BoundsConfig,
    Diameter, DiameterMethod,
};
pub use paths::{
    count_isolated_paths, count_vertex_paths, isolated_path_chains, isolated_paths,
    max_vertex_path, vertex_path_depths,
};

use crate::edgestep::thirteenth_root_ceil;
use crate::error::{Error, Result};
use crate::graph::MultiGraph;

pub fn count_vertices(g: &MultiGraph) -> usize {
    g.vertex_count()
}

pub fn max_degree(g: &MultiGraph) -> u32 {
    g.degrees().into_iter().max().unwrap_or(0)
}

pub fn degree_histogram(g: &MultiGraph) -> BTreeMap<u32, u64> {
    let mut h = BTreeMap::new();
    for d in g.degrees() {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

/// `degree:count` pairs joined by `;`.
pub fn format_histogram(h: &BTreeMap<u32, u64>) -> String {
    h.iter()
        .map(|(d, c)| format!("{d}:{c}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Which measurements to take and with what limits.
#[derive(Debug, Clone)]
pub struct ObserveConfig {
    pub diameter: bool,
    /// Exact diameter up to this many vertices.
    pub exact_diameter_cap: usize,
    pub bounds: BoundsConfig,
    pub clique_greedy: bool,
    pub clique_exact: bool,
    pub clique: CliqueConfig,
    pub paths: bool,
    /// Vertex-path start time; defaults to `ceil(t^(1/13))`.
    pub t0: Option<u32>,
}

impl Default for ObserveConfig {
    fn default() -> Self {
        Self {
            diameter: true,
            exact_diameter_cap: 20_000,
            bounds: BoundsConfig::default(),
            clique_greedy: true,
            clique_exact: true,
            clique: CliqueConfig::default(),
            paths: true,
            t0: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableReport {
    pub t: u32,
    pub v: usize,
    pub simple_edges: usize,
    pub d_max: u32,
    pub degree_histogram: BTreeMap<u32, u64>,
    pub diameter: Option<Diameter>,
    pub clique_greedy: Option<usize>,
    /// `None` when not requested or when the search budget ran out.
    pub clique_exact: Option<Clique>,
    pub isolated_path_lengths: Option<Vec<u32>>,
    /// `(length, t0)`.
    pub max_vertex_path: Option<(u32, u32)>,
}

pub fn observe(g: &MultiGraph, cfg: &ObserveConfig) -> Result<ObservableReport> {
    let sv = g.simple_view();
    let degrees = g.degrees();
    let diameter = if cfg.diameter {
        Some(measure_diameter(&sv, cfg.exact_diameter_cap, &cfg.bounds)?)
    } else {
        None
    };
    let clique_greedy = cfg
        .clique_greedy
        .then(|| clique::clique_greedy(&sv, &degrees).size);
    let clique_exact = if cfg.clique_exact {
        match clique::clique_exact(&sv, &cfg.clique) {
            Ok(c) => Some(c),
            Err(Error::CliqueBudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let (isolated, vertex_path) = if cfg.paths {
        let t0 = cfg
            .t0
            .unwrap_or_else(|| thirteenth_root_ceil(g.t() as u64) as u32);
        (
            Some(isolated_paths(g)),
            Some((max_vertex_path(g, t0), t0)),
        )
    } else {
        (None, None)
    };
    Ok(ObservableReport {
        t: g.t(),
        v: g.vertex_count(),
        simple_edges: sv.edge_count(),
        d_max: degrees.iter().copied().max().unwrap_or(0),
        degree_histogram: degree_histogram(g),
        diameter,
        clique_greedy,
        clique_exact,
        isolated_path_lengths: isolated,
        max_vertex_path: vertex_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edgestep::EdgeStepFunction;

    #[test]
    fn initial_graph() {
        let g = MultiGraph::new_initial();
        assert_eq!(count_vertices(&g), 1);
        assert_eq!(max_degree(&g), 2);
        assert_eq!(format_histogram(&degree_histogram(&g)), "2:1");
    }

    #[test]
    fn tree_report() {
        let g = MultiGraph::evolve(&EdgeStepFunction::ba(), 100, 5);
        let r = observe(&g, &ObserveConfig::default()).unwrap();
        assert_eq!(r.v, 100);
        assert_eq!(r.degree_histogram.values().sum::<u64>(), 100);
        assert_eq!(r.clique_greedy, Some(2));
        assert_eq!(r.clique_exact.as_ref().map(|c| c.size), Some(2));
        let d = r.diameter.unwrap();
        assert_eq!(d.exact(), Some(diameter_exact(&g.simple_view()).unwrap()));
    }

    #[test]
    fn triangle_plus_pendant() {
        let mut g = MultiGraph::new_initial();
        g.push_vertex_step(0);
        g.push_vertex_step(1);
        g.push_edge_step(0, 2);
        g.push_vertex_step(2);
        let sv = g.simple_view();
        assert_eq!(clique_exact(&sv, &CliqueConfig::default()).unwrap().size, 3);
        assert_eq!(clique_greedy(&sv, &g.degrees()).size, 3);
    }
}
