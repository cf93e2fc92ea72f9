//! Diameter of the simple view: all-sources BFS, double-sweep bounds, and an
//! iterative fringe refinement that closes the gap exactly when its BFS
//! budget allows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{SimpleView, VertexId};

const UNSEEN: u32 = u32::MAX;

/// Reusable BFS buffers.
pub(crate) struct Bfs {
    dist: Vec<u32>,
    order: Vec<VertexId>,
}

impl Bfs {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            dist: vec![UNSEEN; n],
            order: Vec::with_capacity(n),
        }
    }

    /// Runs BFS from `src`; returns the eccentricity, or `None` if some vertex
    /// is unreachable. Afterwards `order` holds vertices by distance.
    pub(crate) fn run(&mut self, g: &SimpleView, src: VertexId) -> Option<u32> {
        self.dist.fill(UNSEEN);
        self.order.clear();
        self.dist[src as usize] = 0;
        self.order.push(src);
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let d = self.dist[v as usize] + 1;
            for &w in g.neighbors(v) {
                if self.dist[w as usize] == UNSEEN {
                    self.dist[w as usize] = d;
                    self.order.push(w);
                }
            }
        }
        if self.order.len() != g.vertex_count() {
            return None;
        }
        Some(self.dist[*self.order.last().expect("non-empty") as usize])
    }

    fn farthest(&self) -> VertexId {
        *self.order.last().expect("bfs ran")
    }

    fn dist(&self, v: VertexId) -> u32 {
        self.dist[v as usize]
    }

    /// Vertex halfway along a shortest path from the BFS source to `target`.
    fn midpoint(&self, g: &SimpleView, target: VertexId) -> VertexId {
        let mut v = target;
        let half = self.dist(target) / 2;
        while self.dist(v) > half {
            v = *g
                .neighbors(v)
                .iter()
                .find(|&&w| self.dist(w) + 1 == self.dist(v))
                .expect("bfs predecessor");
        }
        v
    }
}

/// Exact diameter by BFS from every vertex.
pub fn diameter_exact(g: &SimpleView) -> Result<u32> {
    let n = g.vertex_count();
    let mut bfs = Bfs::new(n);
    let mut best = 0;
    for v in 0..n as VertexId {
        best = best.max(bfs.run(g, v).ok_or(Error::Disconnected)?);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiameterMethod {
    AllPairs,
    DoubleSweep,
    Fringe,
}

impl DiameterMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DiameterMethod::AllPairs => "all_pairs",
            DiameterMethod::DoubleSweep => "double_sweep",
            DiameterMethod::Fringe => "fringe",
        }
    }
}

/// A measured diameter: exact, or a `(lower, upper)` bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Diameter {
    pub lower: u32,
    pub upper: u32,
    pub method: DiameterMethod,
    pub bfs_runs: usize,
}

impl Diameter {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn exact(&self) -> Option<u32> {
        self.is_exact().then_some(self.lower)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BoundsConfig {
    /// Double sweeps, started from the highest-degree vertices.
    pub sweeps: usize,
    /// BFS runs allowed for the fringe refinement; `None` means unlimited.
    pub refine_budget: Option<usize>,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            sweeps: 16,
            refine_budget: Some(512),
        }
    }
}

/// Double-sweep bounds, refined by the fringe method while budget remains.
pub fn diameter_bounds(g: &SimpleView, cfg: &BoundsConfig) -> Result<Diameter> {
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(Diameter {
            lower: 0,
            upper: 0,
            method: DiameterMethod::DoubleSweep,
            bfs_runs: 0,
        });
    }
    let mut bfs = Bfs::new(n);
    let mut runs = 0;

    let mut seeds: Vec<VertexId> = (0..n as VertexId).collect();
    let k = cfg.sweeps.clamp(1, n);
    seeds.select_nth_unstable_by_key(k - 1, |&v| (std::cmp::Reverse(g.degree(v)), v));
    seeds.truncate(k);
    seeds.sort_unstable_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let mut lower = 0;
    let mut upper = u32::MAX;
    let mut center = seeds[0];
    for &r in &seeds {
        let ecc = bfs.run(g, r).ok_or(Error::Disconnected)?;
        runs += 1;
        lower = lower.max(ecc);
        if 2 * ecc < upper {
            upper = 2 * ecc;
            center = r;
        }
        let a = bfs.farthest();
        let ecc_a = bfs.run(g, a).expect("connected");
        runs += 1;
        lower = lower.max(ecc_a);
        // the midpoint of a long sweep is a good fringe root
        let mid = bfs.midpoint(g, bfs.farthest());
        let ecc_m = bfs.run(g, mid).expect("connected");
        runs += 1;
        lower = lower.max(ecc_m);
        if 2 * ecc_m < upper {
            upper = 2 * ecc_m;
            center = mid;
        }
    }
    let mut out = Diameter {
        lower,
        upper,
        method: DiameterMethod::DoubleSweep,
        bfs_runs: runs,
    };
    if out.lower < out.upper {
        refine(g, center, &mut out, &mut bfs, cfg.refine_budget);
    }
    Ok(out)
}

/// Fringe refinement from `root`: scan BFS levels of `root` from the top;
/// once the eccentricities of level `i` are known, every vertex below it
/// has eccentricity at most `max(lower, 2(i - 1))`.
fn refine(
    g: &SimpleView,
    root: VertexId,
    d: &mut Diameter,
    bfs: &mut Bfs,
    budget: Option<usize>,
) {
    let n = g.vertex_count();
    let ecc_root = bfs.run(g, root).expect("connected");
    d.bfs_runs += 1;
    d.lower = d.lower.max(ecc_root);
    d.upper = d.upper.min(2 * ecc_root);
    d.method = DiameterMethod::Fringe;

    let mut levels: Vec<Vec<VertexId>> = vec![Vec::new(); ecc_root as usize + 1];
    for &v in &bfs.order {
        levels[bfs.dist(v) as usize].push(v);
    }
    let mut inner = Bfs::new(n);
    let mut spent = 0usize;
    let mut i = ecc_root as usize;
    while d.lower < d.upper && i > 0 {
        let fringe = &levels[i];
        if budget.is_some_and(|b| spent + fringe.len() > b) {
            return;
        }
        let mut level_max = 0;
        for &v in fringe {
            level_max = level_max.max(inner.run(g, v).expect("connected"));
        }
        spent += fringe.len();
        d.bfs_runs += fringe.len();
        d.lower = d.lower.max(level_max);
        let below = 2 * (i as u32 - 1);
        if d.lower >= below {
            d.upper = d.lower;
            return;
        }
        d.upper = d.upper.min(below);
        i -= 1;
    }
    if i == 0 {
        d.upper = d.lower;
    }
}

/// Exact diameter by the fringe method with no budget.
pub fn diameter_fringe_exact(g: &SimpleView) -> Result<u32> {
    let d = diameter_bounds(
        g,
        &BoundsConfig {
            sweeps: 4,
            refine_budget: None,
        },
    )?;
    debug_assert!(d.is_exact());
    Ok(d.lower)
}

/// Diameter for reporting: exact (fringe method) up to `exact_cap` vertices,
/// budgeted bounds above it.
pub fn measure_diameter(g: &SimpleView, exact_cap: usize, cfg: &BoundsConfig) -> Result<Diameter> {
    if g.vertex_count() <= exact_cap {
        diameter_bounds(
            g,
            &BoundsConfig {
                sweeps: cfg.sweeps,
                refine_budget: None,
            },
        )
    } else {
        diameter_bounds(g, cfg)
    }
}
