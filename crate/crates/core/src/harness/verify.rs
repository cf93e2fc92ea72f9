//! Named verification suites: statistical and exact checks of the simulator,
//! the coupling, the observables and the theoretical bounds.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::coupling::{empirical_disagreement, tv_upper_bound, DoublyLabeledTree};
use crate::edgestep::{thirteenth_root_ceil, EdgeStepFunction};
use crate::error::{Error, Result};
use crate::graph::{CanonicalGraph, MultiGraph, SimpleView, StepType, VertexId};
use crate::observables::{
    clique_exact, clique_greedy, count_isolated_paths, count_vertex_paths, diameter_bounds,
    diameter_exact, diameter_fringe_exact, is_clique, isolated_paths, measure_diameter,
    BoundsConfig, CliqueConfig,
};
use crate::oracle::{enumerate_collapse_law, enumerate_direct_law, law_distance, to_f64};
use crate::rng::StreamKey;
use crate::theory::{
    expected_degree, isolated_path_mean_lb, transition_probs, transition_probs_exact,
    vertex_path_mean_exact, vertex_path_mean_ub,
};

pub const SUITES: &[&str] = &[
    "oracle",
    "coupling",
    "scaling",
    "degree",
    "paths",
    "observables",
    "perf",
    "all",
];

const CLIQUE_AUDIT: u32 = 10;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub measured: String,
    pub expected: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:02} {}: measured {}; expected {} ({:.1} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.expected,
            self.seconds
        )
    }
}

struct Outcome {
    passed: bool,
    measured: String,
    expected: String,
}

fn outcome(passed: bool, measured: String, expected: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        measured,
        expected: expected.into(),
    }
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub suite: &'static str,
    check: fn() -> Outcome,
}

impl Criterion {
    pub fn run(&self) -> CriterionResult {
        let started = Instant::now();
        let o = (self.check)();
        CriterionResult {
            id: self.id,
            name: self.name,
            passed: o.passed,
            measured: o.measured,
            expected: o.expected,
            seconds: started.elapsed().as_secs_f64(),
        }
    }
}

static CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "oracle-law-equality", suite: "oracle", check: c01_oracle_laws },
    Criterion { id: 2, name: "generator-vs-oracle", suite: "oracle", check: c02_generator_frequencies },
    Criterion { id: 3, name: "increment-law", suite: "degree", check: c03_increment_law },
    Criterion { id: 4, name: "expected-degree", suite: "degree", check: c04_expected_degree },
    Criterion { id: 5, name: "vertex-count", suite: "degree", check: c05_vertex_count },
    Criterion { id: 6, name: "tv-coupling", suite: "coupling", check: c06_tv_coupling },
    Criterion { id: 7, name: "samplewise-monotonicity", suite: "coupling", check: c07_monotonicity },
    Criterion { id: 8, name: "ba-diameter-envelope", suite: "scaling", check: c08_ba_diameter },
    Criterion { id: 9, name: "rv-bounded-diameter", suite: "scaling", check: c09_rv_diameter },
    Criterion { id: 10, name: "clique-upper-bound", suite: "observables", check: c10_clique_audit },
    Criterion { id: 11, name: "clique-growth-slope", suite: "scaling", check: c11_clique_slope },
    Criterion { id: 12, name: "isolated-path-first-moment", suite: "paths", check: c12_isolated_paths },
    Criterion { id: 13, name: "vertex-path-first-moment", suite: "paths", check: c13_vertex_paths },
    Criterion { id: 14, name: "observable-oracles", suite: "observables", check: c14_observable_oracles },
    Criterion { id: 15, name: "oscillating-regime", suite: "scaling", check: c15_oscillating },
    Criterion { id: 16, name: "performance", suite: "perf", check: c16_performance },
];

pub fn criteria() -> &'static [Criterion] {
    CRITERIA
}

pub fn criterion(id: u32) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

/// Criteria of a suite in run order. The clique audit closes every suite so
/// it can inspect the cliques reported by the others.
pub fn suite_members(name: &str) -> Result<Vec<&'static Criterion>> {
    if !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.to_string()));
    }
    let mut out: Vec<&Criterion> = CRITERIA
        .iter()
        .filter(|c| c.id != CLIQUE_AUDIT && (name == "all" || c.suite == name))
        .collect();
    out.push(criterion(CLIQUE_AUDIT).expect("registered"));
    Ok(out)
}

/// Runs a suite, reporting each result as soon as it is known.
pub fn run_suite(
    name: &str,
    mut report: impl FnMut(&CriterionResult),
) -> Result<Vec<CriterionResult>> {
    let members = suite_members(name)?;
    Ok(members
        .into_iter()
        .map(|c| {
            let r = c.run();
            report(&r);
            r
        })
        .collect())
}

// ---------------------------------------------------------------------------
// shared helpers

#[derive(Default)]
struct AuditTally {
    checked: u64,
    violations: Vec<String>,
}

static AUDIT: Mutex<AuditTally> = Mutex::new(AuditTally {
    checked: 0,
    violations: Vec::new(),
});

/// Records a reported clique for the audit criterion.
fn audit_clique(sv: &SimpleView, t: u32, members: &[VertexId]) {
    let k = members.len() as u64;
    let ok = is_clique(sv, members)
        && k * k.saturating_sub(1) / 2 <= sv.edge_count() as u64
        && (k as f64) <= 7.0 * (t as f64).sqrt();
    let mut a = AUDIT.lock().expect("audit lock");
    a.checked += 1;
    if !ok {
        a.violations.push(format!("t={t} k={k} edges={}", sv.edge_count()));
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt())
}

fn median(xs: &mut [u32]) -> f64 {
    xs.sort_unstable();
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2] as f64
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) as f64 / 2.0
    }
}

fn func(descriptor: &str) -> EdgeStepFunction {
    crate::edgestep::make_family(descriptor).expect("valid built-in descriptor")
}

/// Sequential draws from one stream.
struct Draws {
    key: StreamKey,
    n: u64,
}

impl Draws {
    fn new(seed: u64) -> Self {
        Self {
            key: StreamKey::new(seed),
            n: 0,
        }
    }

    fn index(&mut self, n: usize) -> usize {
        self.n += 1;
        self.key.index(self.n, 0, n)
    }

    fn uniform(&mut self) -> f64 {
        self.n += 1;
        self.key.uniform(self.n, 0)
    }
}

/// Connected random graph: a random recursive tree plus `extra` random edges.
fn random_connected(d: &mut Draws, n: usize, extra: usize) -> SimpleView {
    let mut pairs: Vec<(VertexId, VertexId)> = (1..n)
        .map(|v| (d.index(v) as VertexId, v as VertexId))
        .collect();
    for _ in 0..extra {
        pairs.push((d.index(n) as VertexId, d.index(n) as VertexId));
    }
    SimpleView::from_pairs(n, pairs.into_iter())
}

fn random_gnp(d: &mut Draws, n: usize, p: f64) -> SimpleView {
    let mut pairs = Vec::new();
    for a in 0..n as VertexId {
        for b in a + 1..n as VertexId {
            if d.uniform() <= p {
                pairs.push((a, b));
            }
        }
    }
    SimpleView::from_pairs(n, pairs.into_iter())
}

/// All-pairs distances by Floyd–Warshall; `None` if disconnected.
pub fn floyd_warshall_diameter(g: &SimpleView) -> Option<u32> {
    const INF: u32 = u32::MAX / 4;
    let n = g.vertex_count();
    let mut d = vec![INF; n * n];
    for v in 0..n {
        d[v * n + v] = 0;
        for &w in g.neighbors(v as VertexId) {
            d[v * n + w as usize] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik == INF {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    let max = d.iter().copied().max().unwrap_or(0);
    (max < INF).then_some(max)
}

/// Clique number by enumerating every clique as an increasing vertex
/// sequence, stopping once a clique of size `limit + 1` is seen.
pub fn exhaustive_clique_number(g: &SimpleView, limit: usize) -> usize {
    fn grow(g: &SimpleView, current: &mut Vec<VertexId>, best: &mut usize, limit: usize) {
        *best = (*best).max(current.len());
        if *best > limit {
            return;
        }
        let start = current.last().map_or(0, |&v| v + 1);
        for v in start..g.vertex_count() as VertexId {
            if current.iter().all(|&c| g.adjacent(c, v)) {
                current.push(v);
                grow(g, current, best, limit);
                current.pop();
            }
        }
    }
    let mut best = 0;
    grow(g, &mut Vec::new(), &mut best, limit);
    best
}

// ---------------------------------------------------------------------------
// criteria

fn c01_oracle_laws() -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for desc in ["const:0.5", "const:1", "log_class:1"] {
        let f = func(desc);
        for t in 2..=4 {
            let tv = match (enumerate_direct_law(&f, t), enumerate_collapse_law(&f, t)) {
                (Ok(a), Ok(b)) => to_f64(&law_distance(&a, &b)),
                _ => f64::INFINITY,
            };
            worst = worst.max(tv);
            if !(tv < 1e-10) {
                failures.push(format!("{desc} t={t}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("max TV {worst:.3e} over 9 cases{}", fail_list(&failures)),
        "TV < 1e-10",
    )
}

fn fail_list(f: &[String]) -> String {
    if f.is_empty() {
        String::new()
    } else {
        format!(", failing: {}", f.join(", "))
    }
}

fn c02_generator_frequencies() -> Outcome {
    let f = func("const:0.5");
    let n: u64 = 1_000_000;
    let t = 4;
    let law = enumerate_direct_law(&f, t).expect("t within cap");
    let base = StreamKey::new(2);
    let counts: HashMap<CanonicalGraph, u64> = (0..n)
        .into_par_iter()
        .fold(HashMap::new, |mut m, r| {
            let g = MultiGraph::evolve_with_key(&f, t, &base.replicate(r));
            *m.entry(g.canonical()).or_insert(0) += 1;
            m
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let mut worst_z = 0.0f64;
    let mut unknown = 0;
    for (k, &c) in &counts {
        if !law.contains_key(k) {
            unknown += 1;
        }
        let _ = c;
    }
    for (k, p) in &law {
        let p = to_f64(p);
        let c = counts.get(k).copied().unwrap_or(0) as f64;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        let z = if sd > 0.0 { (c - n as f64 * p).abs() / sd } else { 0.0 };
        worst_z = worst_z.max(z);
    }
    outcome(
        worst_z <= 4.0 && unknown == 0,
        format!(
            "{} outcomes, max |z| = {worst_z:.2}, {unknown} outcomes outside the law",
            law.len()
        ),
        "every |z| <= 4 over 1e6 samples",
    )
}

fn c03_increment_law() -> Outcome {
    // degrees (4, 2, 1, 1) at t = 4; vertex 1 has D = 2
    let mut g = MultiGraph::new_initial();
    g.push_vertex_step(0);
    g.push_vertex_step(1);
    g.push_vertex_step(0);
    let target: VertexId = 1;
    let f = func("const:0.5");
    let n: u64 = 1_000_000;
    let base = StreamKey::new(3);
    let hist = (0..n)
        .into_par_iter()
        .fold(
            || [0u64; 3],
            |mut h, r| {
                let key = base.replicate(r);
                let mut h2 = g.clone();
                let coin = MultiGraph::coin(&f, &key, 5);
                h2.evolve_step(coin, &key);
                let (a, b) = h2.edge(5);
                let delta = (a == target) as usize + (b == target) as usize;
                h[delta] += 1;
                h
            },
        )
        .reduce(|| [0u64; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    let (p0, p1, p2) = transition_probs(2, 4, 0.5).expect("valid");
    let mut worst_z = 0.0f64;
    for (c, p) in hist.iter().zip([p0, p1, p2]) {
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        worst_z = worst_z.max((*c as f64 - n as f64 * p).abs() / sd);
    }

    let mut exact_ok = true;
    let one = BigRational::one();
    for t in 1..=100u64 {
        for i in 1..=100u64 {
            let d = (i * 2 * t).div_ceil(100);
            for j in 0..=10 {
                let fr = BigRational::new(BigInt::from(j), BigInt::from(10));
                let (a, b, c) = transition_probs_exact(d, t, &fr).expect("in domain");
                if a + b + c != one {
                    exact_ok = false;
                }
            }
        }
    }
    let freqs: Vec<String> = hist.iter().map(|&c| format!("{:.5}", c as f64 / n as f64)).collect();
    outcome(
        worst_z <= 3.0 && exact_ok,
        format!(
            "frequencies ({}), max |z| = {worst_z:.2}; exact sums {}",
            freqs.join(", "),
            if exact_ok { "all 1" } else { "NOT all 1" }
        ),
        "(0.65625, 0.3125, 0.03125) within 3 sigma; sums exactly 1 on 100x100x11",
    )
}

fn c04_expected_degree() -> Outcome {
    let f = func("const:0.5");
    let (t0, t, want) = (10u32, 2000u32, 10_000usize);
    let base = StreamKey::new(4);
    // replicates whose step t0 is a vertex-step, in replicate order
    let keys: Vec<StreamKey> = (0u64..)
        .map(|r| base.replicate(r))
        .filter(|k| MultiGraph::coin(&f, k, t0 as u64) == StepType::Vertex)
        .take(want)
        .collect();
    let degs: Vec<f64> = keys
        .par_iter()
        .map(|k| {
            let g = MultiGraph::evolve_with_key(&f, t, k);
            let v = g.birth_times().partition_point(|&b| b < t0) as VertexId;
            debug_assert_eq!(g.birth_time(v), t0);
            g.degree(v) as f64
        })
        .collect();
    let (mean, sd) = mean_sd(&degs);
    let se = sd / (degs.len() as f64).sqrt();
    let theory = expected_degree(&f, t0 as u64, t as u64).expect("valid");
    let z = (mean - theory).abs() / se;
    outcome(
        z <= 3.0,
        format!("mean {mean:.4} (se {se:.4}), z = {z:.2}"),
        format!("{theory:.4} within 3 standard errors"),
    )
}

fn c05_vertex_count() -> Outcome {
    let f = func("const:0.5");
    let (t, reps) = (100_000u32, 200u64);
    let base = StreamKey::new(5);
    let vs: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| MultiGraph::evolve_with_key(&f, t, &base.replicate(r)).vertex_count() as f64)
        .collect();
    let (mean, _) = mean_sd(&vs);
    let want = f.partial_sum(t as u64);
    let sd_mean = (f.vertex_count_variance(t as u64) / reps as f64).sqrt();
    let z = (mean - want).abs() / sd_mean;
    outcome(
        z <= 4.0,
        format!("mean V {mean:.2}, z = {z:.2}"),
        format!("F(t) = {want:.1} within 4 sigma (sigma of the mean {sd_mean:.2})"),
    )
}

fn c06_tv_coupling() -> Outcome {
    let t = 1000u32;
    let reps = 10_000u32;
    let f = func("const:0.5");
    let bump = 0.1 / (t - 1) as f64;
    let h = f
        .perturbed(t as u64, 0.5, |_, v| v + bump)
        .expect("values stay in [0, 1]");
    let l1 = tv_upper_bound(&f, &h, t as u64);
    let d = empirical_disagreement(&f, &h, t, reps, 6);
    let limit = 0.1 + 3.0 * (0.09f64 / reps as f64).sqrt();
    outcome(
        d <= limit,
        format!("disagreement {d:.4} with L1 distance {l1:.6}"),
        format!("<= {limit:.4}"),
    )
}

fn c07_monotonicity() -> Outcome {
    let f = func("const:0.3");
    let h = func("const:0.7");
    let t = 10_000u32;
    let base = StreamKey::new(7);
    let bad: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|r| {
            let tree = DoublyLabeledTree::grow_with_key(t, &base.replicate(r));
            let gf = tree.collapse(&f);
            let gh = tree.collapse(&h);
            let df = diameter_fringe_exact(&gf.simple_view()).ok()?;
            let dh = diameter_fringe_exact(&gh.simple_view()).ok()?;
            let (mf, mh) = (
                gf.degrees().into_iter().max().unwrap_or(0),
                gh.degrees().into_iter().max().unwrap_or(0),
            );
            let ok = df <= dh && mf >= mh && gf.vertex_count() <= gh.vertex_count();
            (!ok).then(|| format!("rep {r}: diam {df}/{dh} dmax {mf}/{mh}"))
        })
        .collect();
    outcome(
        bad.is_empty(),
        format!("{} of 1000 samples violate an ordering{}", bad.len(), fail_list(&bad)),
        "diam, V increasing and Dmax decreasing in all 1000 samples",
    )
}

fn c08_ba_diameter() -> Outcome {
    let f = EdgeStepFunction::ba();
    let t = 100_000u32;
    let lt = (t as f64).ln();
    let lower = lt / lt.ln() / 3.0;
    let base = StreamKey::new(8);
    let ds: Vec<(u32, u32)> = (0..50u64)
        .into_par_iter()
        .map(|r| {
            let g = MultiGraph::evolve_with_key(&f, t, &base.replicate(r));
            let d = diameter_bounds(&g.simple_view(), &BoundsConfig::default()).expect("connected");
            (d.lower, d.upper)
        })
        .collect();
    let below_upper = ds.iter().filter(|d| (d.1 as f64) <= lt).count();
    let above_lower = ds.iter().filter(|d| (d.0 as f64) >= lower).count();
    let mut lows: Vec<u32> = ds.iter().map(|d| d.0).collect();
    let med = median(&mut lows);
    outcome(
        below_upper >= 49 && above_lower == 50,
        format!(
            "diameters {}..{} (median {med}); {below_upper}/50 <= log t, {above_lower}/50 >= lower",
            lows[0],
            lows[lows.len() - 1]
        ),
        format!("<= {lt:.2} in >= 49/50 and >= {lower:.2} in 50/50"),
    )
}

fn c09_rv_diameter() -> Outcome {
    let f = func("rv:0.5");
    let base = StreamKey::new(9);
    let mut medians = Vec::new();
    let mut out_of_band = 0;
    let mut ranges = Vec::new();
    for t in [10_000u32, 100_000, 1_000_000] {
        let ds: Vec<(u32, u32)> = (0..20u64)
            .into_par_iter()
            .map(|r| {
                let g = MultiGraph::evolve_with_key(&f, t, &base.replicate(r));
                let d = measure_diameter(&g.simple_view(), 20_000, &BoundsConfig::default())
                    .expect("connected");
                (d.lower, d.upper)
            })
            .collect();
        out_of_band += ds.iter().filter(|d| d.0 < 1 || d.1 > 202).count();
        let mut mids: Vec<u32> = ds.iter().map(|d| d.0).collect();
        medians.push(median(&mut mids));
        ranges.push(format!("{}..{}", mids[0], mids[mids.len() - 1]));
    }
    let growth = medians[2] - medians[0];
    outcome(
        out_of_band == 0 && growth <= 1.0,
        format!(
            "ranges [{}], medians {:?}, {out_of_band} outside [1, 202]",
            ranges.join(", "),
            medians
        ),
        "all in [1, 202]; median growth from 1e4 to 1e6 <= 1",
    )
}

fn c10_clique_audit() -> Outcome {
    let base = StreamKey::new(10);
    let mut graphs = 0;
    for desc in ["const:0.3", "rv:0.5", "ba", "osc:base=10", "log_class:1"] {
        let f = func(desc);
        for t in [1_000u32, 10_000] {
            for r in 0..3u64 {
                let g = MultiGraph::evolve_with_key(&f, t, &base.replicate(r));
                let sv = g.simple_view();
                audit_clique(&sv, t, &clique_greedy(&sv, &g.degrees()).members);
                if let Ok(c) = clique_exact(&sv, &CliqueConfig::default()) {
                    audit_clique(&sv, t, &c.members);
                }
                graphs += 1;
            }
        }
    }
    let a = AUDIT.lock().expect("audit lock");
    outcome(
        a.violations.is_empty(),
        format!(
            "{} reported cliques audited ({graphs} graphs here), {} violations{}",
            a.checked,
            a.violations.len(),
            fail_list(&a.violations)
        ),
        "k(k-1)/2 <= simple edges and k <= 7 sqrt(t) for every clique",
    )
}

fn c11_clique_slope() -> Outcome {
    let f = func("rv:0.5");
    let base = StreamKey::new(11);
    let mut pts = Vec::new();
    for t in [10_000u32, 100_000, 1_000_000] {
        let ks: Vec<usize> = (0..10u64)
            .into_par_iter()
            .map(|r| {
                let g = MultiGraph::evolve_with_key(&f, t, &base.replicate(r));
                let sv = g.simple_view();
                let c = clique_greedy(&sv, &g.degrees());
                audit_clique(&sv, t, &c.members);
                c.size
            })
            .collect();
        pts.extend(ks.into_iter().map(|k| ((t as f64).ln(), (k as f64).ln())));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    outcome(
        (0.15..=0.35).contains(&slope),
        format!("slope {slope:.3}"),
        "in [0.15, 0.35]",
    )
}

fn c12_isolated_paths() -> Outcome {
    let f = func("const:0.5");
    let (t, l, xi) = (2000u32, 2u64, 0.5);
    let start = (xi * t as f64).ceil() as u32;
    let base = StreamKey::new(12);
    let counts: Vec<f64> = (0..1000u64)
        .into_par_iter()
        .map(|r| {
            let g = MultiGraph::evolve_with_key(&f, t, &base.replicate(r));
            count_isolated_paths(&g, l as usize, start) as f64
        })
        .collect();
    let (mean, sd) = mean_sd(&counts);
    let se = sd / (counts.len() as f64).sqrt();
    let lb = isolated_path_mean_lb(&f, t as u64, l, xi).expect("in domain");
    outcome(
        mean >= lb - 3.0 * se,
        format!("mean count {mean:.3} (se {se:.3})"),
        format!(">= {lb:.4e} - 3 se"),
    )
}

fn c13_vertex_paths() -> Outcome {
    let f = func("const:0.3");
    let (t, k) = (10_000u32, 4u32);
    let t0 = thirteenth_root_ceil(t as u64) as u32;
    let base = StreamKey::new(13);
    let counts: Vec<f64> = (0..1000u64)
        .into_par_iter()
        .map(|r| {
            let g = MultiGraph::evolve_with_key(&f, t, &base.replicate(r));
            count_vertex_paths(&g, t0, k) as f64
        })
        .collect();
    let (mean, sd) = mean_sd(&counts);
    let se = sd / (counts.len() as f64).sqrt();
    let ub = vertex_path_mean_ub(&f, t0 as u64, t as u64, k as u64).expect("in domain");
    let exact = vertex_path_mean_exact(&f, t0 as u64, t as u64, k as u64).expect("in domain");
    outcome(
        mean <= ub + 3.0 * se,
        format!("mean count {mean:.2} (se {se:.2}, exact mean {exact:.2}), t0 = {t0}"),
        format!("<= {ub:.2} + 3 se"),
    )
}

fn isolated_fixtures() -> Vec<(&'static str, MultiGraph, Vec<u32>)> {
    let chain = |targets: &[VertexId]| {
        let mut g = MultiGraph::new_initial();
        for &p in targets {
            g.push_vertex_step(p);
        }
        g
    };
    let mut loops = MultiGraph::new_initial();
    loops.push_edge_step(0, 0);
    loops.push_edge_step(0, 0);
    let mut broken = chain(&[0, 1, 2, 3]);
    broken.push_edge_step(2, 0);
    let mut star_chains = chain(&[0, 0, 0, 1, 2, 4, 6]);
    star_chains.push_edge_step(3, 3);
    vec![
        ("line t=3", chain(&[0, 1]), vec![2]),
        ("no vertex-steps", loops, vec![]),
        ("chains of 3 and 4", chain(&[0, 1, 2, 0, 4, 5, 6]), vec![3, 4]),
        ("edge into chain", broken, vec![2]),
        // 7 - 6 - 4 - 1 and 5 - 2 hang off the root; 3 carries a loop
        ("star of chains", star_chains, vec![2, 4]),
        ("branching", chain(&[0, 1, 1, 2]), vec![1, 2]),
    ]
}

fn c14_observable_oracles() -> Outcome {
    let mut d = Draws::new(14);
    let mut diam_bad = 0;
    for i in 0..100 {
        let g = if i % 2 == 0 {
            let n = 2 + d.index(199);
            let extra = d.index(2 * n + 1);
            random_connected(&mut d, n, extra)
        } else {
            let f = EdgeStepFunction::constant(d.uniform()).expect("unit interval");
            let t = 2 + d.index(199) as u32;
            let g = MultiGraph::evolve_with_key(&f, t, &StreamKey::new(1400 + i));
            g.simple_view()
        };
        let fw = floyd_warshall_diameter(&g);
        let exact = diameter_exact(&g).ok();
        let fringe = diameter_fringe_exact(&g).ok();
        let b = diameter_bounds(&g, &BoundsConfig { sweeps: 2, refine_budget: Some(0) }).ok();
        let bracket = matches!((b, fw), (Some(b), Some(x)) if b.lower <= x && x <= b.upper);
        if fw.is_none() || exact != fw || fringe != fw || !bracket {
            diam_bad += 1;
        }
    }
    let mut clique_bad = 0;
    let mut done = 0;
    while done < 50 {
        let p = 0.05 + 0.2 * d.uniform();
        let g = random_gnp(&mut d, 60, p);
        let oracle = exhaustive_clique_number(&g, 6);
        if oracle > 6 {
            continue;
        }
        done += 1;
        match clique_exact(&g, &CliqueConfig::default()) {
            Ok(c) => {
                let deg: Vec<u32> = (0..60).map(|v| g.degree(v) as u32).collect();
                let greedy = clique_greedy(&g, &deg);
                audit_clique(&g, 60 * 60, &c.members);
                audit_clique(&g, 60 * 60, &greedy.members);
                if c.size != oracle || greedy.size > c.size {
                    clique_bad += 1;
                }
            }
            Err(_) => clique_bad += 1,
        }
    }
    let fixtures = isolated_fixtures();
    let iso_bad: Vec<String> = fixtures
        .iter()
        .filter(|(_, g, want)| &isolated_paths(g) != want)
        .map(|(name, _, _)| name.to_string())
        .collect();
    outcome(
        diam_bad == 0 && clique_bad == 0 && iso_bad.is_empty(),
        format!(
            "diameter mismatches {diam_bad}/100, clique mismatches {clique_bad}/50, \
             isolated-path fixtures failing {}/{}{}",
            iso_bad.len(),
            fixtures.len(),
            fail_list(&iso_bad)
        ),
        "no mismatches",
    )
}

fn c15_oscillating() -> Outcome {
    let f = func("osc:base=10");
    let b = f.boundaries();
    // f = 0 on (b1, b2) and f = 1 on [b2, b3]
    let collapse_end = b[2] as u32 - 1;
    let tree_end = b[3] as u32;
    let base = StreamKey::new(15);
    let diam = |t: u32| -> Vec<u32> {
        (0..10u64)
            .into_par_iter()
            .map(|r| {
                let g = MultiGraph::evolve_with_key(&f, t, &base.replicate(r));
                let d = measure_diameter(&g.simple_view(), 20_000, &BoundsConfig::default())
                    .expect("connected");
                d.lower
            })
            .collect()
    };
    let small = diam(collapse_end);
    let large = diam(tree_end);
    let lt = (tree_end as f64).ln();
    let thr = lt / lt.ln() / 4.0;
    let ok_small = small.iter().filter(|&&x| x <= 3).count();
    let ok_large = large.iter().filter(|&&x| x as f64 >= thr).count();
    outcome(
        ok_small >= 9 && ok_large >= 9,
        format!(
            "t={collapse_end}: {small:?} ({ok_small}/10 <= 3); t={tree_end}: {large:?} ({ok_large}/10 >= {thr:.2})"
        ),
        ">= 9/10 at each boundary",
    )
}

fn c16_performance() -> Outcome {
    let f = func("const:0.5");
    let time = |t: u32| {
        let s = Instant::now();
        let g = MultiGraph::evolve(&f, t, 16);
        std::hint::black_box(g.vertex_count());
        s.elapsed().as_secs_f64()
    };
    let a = time(1_000_000);
    let b = time(10_000_000);
    outcome(
        a < 5.0 && b < 60.0,
        format!("t=1e6 in {a:.3} s, t=1e7 in {b:.3} s"),
        "< 5 s and < 60 s on one worker",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_resolve() {
        for s in SUITES {
            let m = suite_members(s).unwrap();
            assert_eq!(m.last().unwrap().id, CLIQUE_AUDIT);
        }
        assert_eq!(suite_members("all").unwrap().len(), 16);
        assert!(matches!(suite_members("nope"), Err(Error::UnknownSuite(_))));
        let ids: Vec<u32> = criteria().iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=16).collect::<Vec<_>>());
    }

    #[test]
    fn floyd_warshall_small() {
        let path = SimpleView::from_pairs(4, [(0, 1), (1, 2), (2, 3)].into_iter());
        assert_eq!(floyd_warshall_diameter(&path), Some(3));
        let split = SimpleView::from_pairs(3, [(0, 1)].into_iter());
        assert_eq!(floyd_warshall_diameter(&split), None);
    }

    #[test]
    fn exhaustive_clique_small() {
        let k4 = SimpleView::from_pairs(
            5,
            [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)].into_iter(),
        );
        assert_eq!(exhaustive_clique_number(&k4, 6), 4);
        assert_eq!(exhaustive_clique_number(&k4, 2), 3);
    }

    #[test]
    fn fixtures_are_as_described() {
        for (name, g, want) in isolated_fixtures() {
            assert_eq!(isolated_paths(&g), want, "{name}");
        }
    }
}
