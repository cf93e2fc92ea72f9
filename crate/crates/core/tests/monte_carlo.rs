//! Statistical checks that are not acceptance criteria on their own.

use pagraph::coupling::{empirical_disagreement, tv_upper_bound};
use pagraph::harness::{run, ExperimentSpec};
use pagraph::rng::StreamKey;
use pagraph::theory::{vertex_path_prob_exact, vertex_path_prob_ub};
use pagraph::{EdgeStepFunction, MultiGraph, StepType};

fn constant(p: f64) -> EdgeStepFunction {
    EdgeStepFunction::constant(p).unwrap()
}

#[test]
fn conditional_mean_increment() {
    // frozen graph at t = 6 with a vertex of degree 3
    let mut g = MultiGraph::new_initial();
    g.push_vertex_step(0);
    g.push_vertex_step(1);
    g.push_vertex_step(1);
    g.push_edge_step(2, 0);
    g.push_vertex_step(0);
    let v = 1;
    assert_eq!(g.degree(v), 3);
    for p in [0.0, 0.3, 1.0] {
        let f = constant(p);
        let n = 200_000u64;
        let base = StreamKey::new(77);
        let mut sum = 0.0;
        let mut sq = 0.0;
        for r in 0..n {
            let key = base.replicate(r);
            let mut h = g.clone();
            h.evolve_step(MultiGraph::coin(&f, &key, 7), &key);
            let d = (h.degree(v) - g.degree(v)) as f64;
            sum += d;
            sq += d * d;
        }
        let mean = sum / n as f64;
        let sd = ((sq / n as f64 - mean * mean) / n as f64).sqrt();
        let want = (1.0 - p / 2.0) * 3.0 / 6.0;
        assert!((mean - want).abs() <= 3.0 * sd.max(1e-12), "p={p}: {mean} vs {want}");
    }
}

#[test]
fn short_vertex_path_exceeds_per_path_bound() {
    // P(vertex 3 attaches to vertex 2) for f = 1 is exactly 1/4, above the
    // per-path bound 1/6, which only holds for long spans
    let ba = EdgeStepFunction::ba();
    let n = 400_000u64;
    let base = StreamKey::new(23);
    let hits = (0..n)
        .filter(|&r| MultiGraph::evolve_with_key(&ba, 3, &base.replicate(r)).parent(2) == Some(1))
        .count() as f64;
    let p = hits / n as f64;
    let sd = (0.25 * 0.75 / n as f64).sqrt();
    let exact = vertex_path_prob_exact(&ba, &[2, 3]).unwrap();
    let ub = vertex_path_prob_ub(&ba, &[2, 3]).unwrap();
    assert!((exact - 0.25).abs() < 1e-15);
    assert!((p - exact).abs() <= 4.0 * sd, "{p}");
    assert!(p > ub + 3.0 * sd);
}

#[test]
fn disagreement_within_l1_bound() {
    let t = 300u32;
    let reps = 4000u32;
    for (f, h) in [
        (constant(0.5), constant(0.5005)),
        (constant(0.2), constant(0.21)),
        (EdgeStepFunction::log_class(1.0).unwrap(), EdgeStepFunction::log_class(1.05).unwrap()),
    ] {
        let bound = tv_upper_bound(&f, &h, t as u64);
        let d = empirical_disagreement(&f, &h, t, reps, 5);
        let p = bound.min(1.0);
        assert!(d <= bound + 3.0 * (p * (1.0 - p) / reps as f64).sqrt() + 1e-12, "{f} vs {h}: {d} > {bound}");
    }
}

#[test]
fn vertex_steps_follow_the_coins() {
    let f = EdgeStepFunction::rv_power(0.5, 1.0).unwrap();
    let key = StreamKey::new(3);
    let g = MultiGraph::evolve_with_key(&f, 5000, &key);
    for s in 2..=5000u32 {
        assert_eq!(g.step_type(s), MultiGraph::coin(&f, &key, s as u64));
    }
    let vertex_steps = (2..=5000).filter(|&s| g.step_type(s) == StepType::Vertex).count();
    assert_eq!(vertex_steps + 1, g.vertex_count());
}

#[test]
fn regularly_varying_smoke_run() {
    let mut spec = ExperimentSpec::new("rv:0.5", vec![10_000, 100_000, 1_000_000], 20, 42);
    spec.jobs = 0;
    let records = run(&spec).unwrap();
    assert_eq!(records.len(), 60);
    for r in &records {
        assert!(r.error.is_none(), "{:?}", r.error);
        assert!(r.diameter_lower.is_some() && r.clique_greedy.is_some());
        let (lo, hi) = (r.theory_rv_lower.unwrap(), r.theory_rv_upper.unwrap());
        assert!(lo <= hi);
    }
}
