//! Experiment execution and output records.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::spec::{ExperimentSpec, Format};
use crate::coupling::DoublyLabeledTree;
use crate::edgestep::{EdgeStepFunction, Family};
use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::observables::{format_histogram, observe, ObservableReport, ObserveConfig};
use crate::rng::StreamKey;
use crate::theory::{diameter_theory, TheoryParams};

pub const SCHEMA_VERSION: u32 = 1;

/// Epsilon used for the clique lower-bound overlay.
pub const CLIQUE_EPSILON: f64 = 0.1;

/// One flat output row per (family, t, replicate).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub spec_hash: String,
    pub mode: &'static str,
    pub family: String,
    pub t: u32,
    pub replicate: u32,
    pub seed: u64,
    pub v: Option<usize>,
    pub simple_edges: Option<usize>,
    pub d_max: Option<u32>,
    pub degree_histogram: Option<String>,
    pub diameter_lower: Option<u32>,
    pub diameter_upper: Option<u32>,
    pub diameter_method: Option<&'static str>,
    pub clique_greedy: Option<usize>,
    pub clique_exact: Option<usize>,
    /// Exact search ran on the oldest vertices only.
    pub clique_exact_partial: Option<bool>,
    pub isolated_path_count: Option<usize>,
    pub isolated_path_lengths: Option<String>,
    pub max_vertex_path: Option<u32>,
    pub vertex_path_t0: Option<u32>,
    pub theory_diameter_lower: Option<f64>,
    pub theory_diameter_upper_a: Option<f64>,
    pub theory_diameter_upper_b: Option<f64>,
    pub theory_rv_lower: Option<f64>,
    pub theory_rv_upper: Option<f64>,
    pub theory_clique_lower: Option<f64>,
    pub theory_clique_upper: Option<f64>,
    pub error: Option<String>,
    pub wall_ms: f64,
}

impl RunRecord {
    fn empty(hash: &str, mode: &'static str, family: &str, t: u32, r: u32, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            spec_hash: hash.to_string(),
            mode,
            family: family.to_string(),
            t,
            replicate: r,
            seed,
            v: None,
            simple_edges: None,
            d_max: None,
            degree_histogram: None,
            diameter_lower: None,
            diameter_upper: None,
            diameter_method: None,
            clique_greedy: None,
            clique_exact: None,
            clique_exact_partial: None,
            isolated_path_count: None,
            isolated_path_lengths: None,
            max_vertex_path: None,
            vertex_path_t0: None,
            theory_diameter_lower: None,
            theory_diameter_upper_a: None,
            theory_diameter_upper_b: None,
            theory_rv_lower: None,
            theory_rv_upper: None,
            theory_clique_lower: None,
            theory_clique_upper: None,
            error: None,
            wall_ms: 0.0,
        }
    }

    fn fill(&mut self, r: &ObservableReport) {
        self.v = Some(r.v);
        self.simple_edges = Some(r.simple_edges);
        self.d_max = Some(r.d_max);
        self.degree_histogram = Some(format_histogram(&r.degree_histogram));
        if let Some(d) = &r.diameter {
            self.diameter_lower = Some(d.lower);
            self.diameter_upper = Some(d.upper);
            self.diameter_method = Some(d.method.as_str());
        }
        self.clique_greedy = r.clique_greedy;
        if let Some(c) = &r.clique_exact {
            self.clique_exact = Some(c.size);
            self.clique_exact_partial = Some(c.lower_bound_only);
        }
        if let Some(l) = &r.isolated_path_lengths {
            self.isolated_path_count = Some(l.len());
            self.isolated_path_lengths = Some(
                l.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
            );
        }
        if let Some((len, t0)) = r.max_vertex_path {
            self.max_vertex_path = Some(len);
            self.vertex_path_t0 = Some(t0);
        }
    }

    fn overlay(&mut self, f: &EdgeStepFunction) {
        let gamma = match f.family() {
            Family::RvPower { gamma, .. } => Some(*gamma),
            _ => None,
        };
        let params = TheoryParams {
            kappa: None,
            gamma: gamma.filter(|g| *g > 0.0 && *g < 1.0),
            epsilon: None,
        };
        let Ok(b) = diameter_theory(f, self.t as u64, &params) else {
            return;
        };
        self.theory_diameter_lower = Some(b.diameter_lower);
        self.theory_diameter_upper_a = Some(b.diameter_upper_a);
        self.theory_diameter_upper_b = b.applicable.upper_b.then_some(b.diameter_upper_b);
        if let Some((lo, hi)) = b.rv_band {
            self.theory_rv_lower = Some(lo);
            self.theory_rv_upper = Some(hi);
        }
        self.theory_clique_upper = Some(b.clique_upper);
        if let Some(g) = gamma.filter(|g| *g < 1.0) {
            self.theory_clique_lower = crate::theory::clique_theory(self.t as u64, g, CLIQUE_EPSILON)
                .ok()
                .map(|c| c.0);
        }
    }
}

fn observe_config(spec: &ExperimentSpec) -> ObserveConfig {
    let o = spec.observables;
    ObserveConfig {
        diameter: o.diameter,
        exact_diameter_cap: spec.exact_diameter_cap,
        clique_greedy: o.clique_greedy,
        clique_exact: o.clique_exact,
        paths: o.paths,
        ..ObserveConfig::default()
    }
}

fn measure(
    rec: &mut RunRecord,
    g: &MultiGraph,
    f: &EdgeStepFunction,
    cfg: &ObserveConfig,
    started: Instant,
) {
    match observe(g, cfg) {
        Ok(r) => rec.fill(&r),
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec.overlay(f);
    rec.wall_ms = started.elapsed().as_secs_f64() * 1e3;
}

/// Runs an experiment: the Cartesian grid of families and horizons, `reps`
/// replicates each. With `family2` set, every replicate grows one tree and
/// collapses it against all families. Records come back sorted by family
/// (in the order given), horizon and replicate.
pub fn run(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let fs = spec.functions()?;
    let hash = spec.hash();
    let cfg = observe_config(spec);
    let base = StreamKey::new(spec.seed);
    let coupled = spec.family2.is_some();

    let mut units: Vec<(usize, u32, u32)> = Vec::new();
    for &t in &spec.horizons {
        for r in 0..spec.reps {
            if coupled {
                units.push((usize::MAX, t, r));
            } else {
                units.extend((0..fs.len()).map(|i| (i, t, r)));
            }
        }
    }

    let work = || -> Vec<(usize, RunRecord)> {
        units
            .par_iter()
            .flat_map_iter(|&(i, t, r)| {
                let key = base.replicate(r as u64);
                if i == usize::MAX {
                    let started = Instant::now();
                    let tree = DoublyLabeledTree::grow_with_key(t, &key);
                    fs.iter()
                        .enumerate()
                        .map(|(j, f)| {
                            let g = tree.collapse(f);
                            let mut rec = RunRecord::empty(&hash, "coupled", f.name(), t, r, spec.seed);
                            measure(&mut rec, &g, f, &cfg, started);
                            (j, rec)
                        })
                        .collect::<Vec<_>>()
                } else {
                    let started = Instant::now();
                    let f = &fs[i];
                    let g = MultiGraph::evolve_with_key(f, t, &key);
                    let mut rec = RunRecord::empty(&hash, "direct", f.name(), t, r, spec.seed);
                    measure(&mut rec, &g, f, &cfg, started);
                    vec![(i, rec)]
                }
            })
            .collect()
    };
    // jobs = 0 uses rayon's default pool size
    let mut rows = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::InvalidSpec(format!("cannot start {} workers: {e}", spec.jobs)))?
        .install(work);
    rows.sort_by_key(|(i, rec)| (*i, rec.t, rec.replicate));
    Ok(rows.into_iter().map(|(_, rec)| rec).collect())
}

/// Like [`run`], but insists on a non-empty grid first.
pub fn sweep(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    if spec.families.is_empty() {
        return Err(Error::EmptyGrid);
    }
    run(spec)
}

/// Writes records as CSV or a JSON array to `w`.
pub fn write_records<W: Write>(w: W, records: &[RunRecord], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            for r in records {
                out.serialize(r)?;
            }
            out.flush().map_err(|e| Error::io("<csv>", e))?;
        }
        Format::Json => {
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, records)?;
            writeln!(w).map_err(|e| Error::io("<json>", e))?;
        }
    }
    Ok(())
}

/// Writes records to `path` through a temporary file in the same directory,
/// so readers never see a partial file.
pub fn persist(path: &Path, records: &[RunRecord], format: Format) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    write_records(tmp.as_file_mut(), records, format)?;
    tmp.as_file_mut().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
