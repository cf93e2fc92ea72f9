//! The time-indexed multigraph `G_t(f)` and its direct generator.
//!
//! Edges live in an append-only endpoint array with two slots per edge, so a
//! uniform slot is a vertex drawn with probability `degree / 2t`. Vertex ids
//! are birth-order indices starting at 0 for the initial vertex; dumps and
//! canonical forms print them 1-based or as birth times.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::edgestep::EdgeStepFunction;
use crate::error::{Error, Result};
use crate::rng::{StreamKey, DRAW_COIN, DRAW_FIRST, DRAW_SECOND};

pub type VertexId = u32;

/// Outcome of the coin `Z_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepType {
    Vertex,
    Edge,
}

impl StepType {
    /// `1` for a vertex-step, `0` for an edge-step.
    pub fn as_z(self) -> u8 {
        match self {
            StepType::Vertex => 1,
            StepType::Edge => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    endpoints: Vec<VertexId>,
    birth_time: Vec<u32>,
    /// `step_type[s - 1]`; the initial time is recorded as a vertex-step.
    step_type: Vec<StepType>,
    /// First-connection target; the initial vertex points at itself.
    parent: Vec<VertexId>,
}

impl Default for MultiGraph {
    fn default() -> Self {
        Self::new_initial()
    }
}

impl MultiGraph {
    /// `G_1`: one vertex carrying one loop (degree 2).
    pub fn new_initial() -> Self {
        Self {
            endpoints: vec![0, 0],
            birth_time: vec![1],
            step_type: vec![StepType::Vertex],
            parent: vec![0],
        }
    }

    pub fn with_capacity(t: usize) -> Self {
        let mut g = Self::new_initial();
        g.endpoints.reserve(2 * t);
        g.step_type.reserve(t);
        g
    }

    /// Current time, equal to the edge count.
    #[inline]
    pub fn t(&self) -> u32 {
        (self.endpoints.len() / 2) as u32
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.birth_time.len()
    }

    pub fn endpoints(&self) -> &[VertexId] {
        &self.endpoints
    }

    /// Edge added at time `s` (1-based).
    pub fn edge(&self, s: u32) -> (VertexId, VertexId) {
        let i = 2 * (s as usize - 1);
        (self.endpoints[i], self.endpoints[i + 1])
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.endpoints.chunks_exact(2).map(|e| (e[0], e[1]))
    }

    pub fn birth_time(&self, v: VertexId) -> u32 {
        self.birth_time[v as usize]
    }

    pub fn birth_times(&self) -> &[u32] {
        &self.birth_time
    }

    /// Step type at time `s` (1-based).
    pub fn step_type(&self, s: u32) -> StepType {
        self.step_type[s as usize - 1]
    }

    pub fn step_types(&self) -> &[StepType] {
        &self.step_type
    }

    /// First-connection target, `None` for the initial vertex.
    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        if v == 0 {
            None
        } else {
            Some(self.parent[v as usize])
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.vertex_count()];
        for &v in &self.endpoints {
            d[v as usize] += 1;
        }
        d
    }

    pub fn degree(&self, v: VertexId) -> u32 {
        self.endpoints.iter().filter(|&&x| x == v).count() as u32
    }

    /// Vertex at a uniform endpoint slot, i.e. with probability `degree / 2t`.
    #[inline]
    pub fn sample_preferential(&self, key: &StreamKey, step: u64, draw: u32) -> VertexId {
        self.endpoints[key.index(step, draw, self.endpoints.len())]
    }

    /// Appends a vertex-step attaching a new vertex to `target`.
    pub fn push_vertex_step(&mut self, target: VertexId) -> VertexId {
        assert!((target as usize) < self.vertex_count(), "unknown vertex {target}");
        let v = self.vertex_count() as VertexId;
        let s = self.t() + 1;
        self.birth_time.push(s);
        self.parent.push(target);
        self.endpoints.push(target);
        self.endpoints.push(v);
        self.step_type.push(StepType::Vertex);
        v
    }

    /// Appends an edge-step `{a, b}` between existing vertices.
    pub fn push_edge_step(&mut self, a: VertexId, b: VertexId) {
        let n = self.vertex_count();
        assert!((a as usize) < n && (b as usize) < n, "unknown vertex");
        self.endpoints.push(a);
        self.endpoints.push(b);
        self.step_type.push(StepType::Edge);
    }

    /// One step of the process. All preferential draws see the pre-step graph.
    pub fn evolve_step(&mut self, coin: StepType, key: &StreamKey) {
        let step = self.t() as u64 + 1;
        match coin {
            StepType::Vertex => {
                let u = self.sample_preferential(key, step, DRAW_FIRST);
                self.push_vertex_step(u);
            }
            StepType::Edge => {
                let u1 = self.sample_preferential(key, step, DRAW_FIRST);
                let u2 = self.sample_preferential(key, step, DRAW_SECOND);
                self.push_edge_step(u1, u2);
            }
        }
    }

    /// Coin `Z_s` for step `s` of the stream.
    #[inline]
    pub fn coin(f: &EdgeStepFunction, key: &StreamKey, s: u64) -> StepType {
        if key.uniform(s, DRAW_COIN) <= f.eval(s) {
            StepType::Vertex
        } else {
            StepType::Edge
        }
    }

    /// `G_t(f)` driven by `key`.
    pub fn evolve_with_key(f: &EdgeStepFunction, t: u32, key: &StreamKey) -> Self {
        assert!(t >= 1, "horizon must be at least 1");
        let mut g = Self::with_capacity(t as usize);
        for s in 2..=t as u64 {
            let coin = Self::coin(f, key, s);
            g.evolve_step(coin, key);
        }
        g
    }

    /// `G_t(f)`, deterministic in `(f, t, seed)`.
    pub fn evolve(f: &EdgeStepFunction, t: u32, seed: u64) -> Self {
        Self::evolve_with_key(f, t, &StreamKey::new(seed))
    }

    pub fn simple_view(&self) -> SimpleView {
        SimpleView::from_pairs(
            self.vertex_count(),
            self.edges().filter(|(a, b)| a != b),
        )
    }

    /// BFS connectivity over the multigraph.
    pub fn is_connected(&self) -> bool {
        self.simple_view().is_connected()
    }

    /// Birth-labelled edge multiset; see [`CanonicalGraph`].
    pub fn canonical(&self) -> CanonicalGraph {
        let mut edges: Vec<(u32, u32)> = self
            .edges()
            .map(|(a, b)| {
                let (x, y) = (self.birth_time(a), self.birth_time(b));
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        CanonicalGraph {
            births: self.birth_time.clone(),
            edges,
        }
    }

    /// Writes the text dump: header `t V seed family`, then `s u v z` per edge
    /// with 1-based vertex ids.
    pub fn write_dump<W: Write>(&self, mut w: W, seed: u64, family: &str) -> std::io::Result<()> {
        writeln!(w, "{} {} {} {}", self.t(), self.vertex_count(), seed, family)?;
        for s in 1..=self.t() {
            let (a, b) = self.edge(s);
            writeln!(w, "{} {} {} {}", s, a + 1, b + 1, self.step_type(s).as_z())?;
        }
        Ok(())
    }

    /// Parses a dump written by [`MultiGraph::write_dump`].
    pub fn read_dump<R: BufRead>(r: R) -> Result<(DumpHeader, Self)> {
        let mut lines = r.lines().enumerate();
        let parse_err = |line: usize, reason: String| Error::Parse { line, reason };
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty input".into()))?;
        let header = header.map_err(|e| parse_err(1, e.to_string()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(parse_err(1, "expected header `t V seed family`".into()));
        }
        let num = |line: usize, s: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| parse_err(line, format!("`{s}` is not an integer")))
        };
        let t = num(1, parts[0])? as u32;
        let v = num(1, parts[1])? as usize;
        let seed = num(1, parts[2])?;
        let family = parts[3].to_string();

        let mut g = Self::with_capacity(t as usize);
        for (i, line) in lines {
            let ln = i + 1;
            let line = line.map_err(|e| parse_err(ln, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(parse_err(ln, "expected `s u v z`".into()));
            }
            let (s, a, b, z) = (num(ln, f[0])?, num(ln, f[1])?, num(ln, f[2])?, num(ln, f[3])?);
            if a == 0 || b == 0 {
                return Err(parse_err(ln, "vertex ids are 1-based".into()));
            }
            let (a, b) = ((a - 1) as VertexId, (b - 1) as VertexId);
            if s == 1 {
                if (a, b, z) != (0, 0, 1) {
                    return Err(parse_err(ln, "time 1 must be the initial loop `1 1 1 1`".into()));
                }
                continue;
            }
            if s != g.t() as u64 + 1 {
                return Err(parse_err(ln, format!("expected time {}", g.t() + 1)));
            }
            let n = g.vertex_count() as VertexId;
            match z {
                1 => {
                    if b != n || a >= n {
                        return Err(parse_err(ln, "vertex-step must attach a new vertex to an existing one".into()));
                    }
                    g.push_vertex_step(a);
                }
                0 => {
                    if a >= n || b >= n {
                        return Err(parse_err(ln, "edge-step endpoints must exist".into()));
                    }
                    g.push_edge_step(a, b);
                }
                _ => return Err(parse_err(ln, "z must be 0 or 1".into())),
            }
        }
        if g.t() != t || g.vertex_count() != v {
            return Err(parse_err(
                1,
                format!(
                    "header says t={t} V={v}, body has t={} V={}",
                    g.t(),
                    g.vertex_count()
                ),
            ));
        }
        Ok((DumpHeader { seed, family }, g))
    }
}

/// Provenance recorded in a graph dump header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DumpHeader {
    pub seed: u64,
    pub family: String,
}

/// A graph keyed by birth times: the set of birth times (which fixes the step
/// types) and the sorted multiset of edges over those labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalGraph {
    pub births: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
}

impl CanonicalGraph {
    pub fn t(&self) -> usize {
        self.edges.len()
    }

    /// `a-b` pairs separated by spaces.
    pub fn edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn is_connected(&self) -> bool {
        let idx = |b: u32| self.births.binary_search(&b).expect("edge endpoint is a vertex") as u32;
        SimpleView::from_pairs(
            self.births.len(),
            self.edges
                .iter()
                .filter(|(a, b)| a != b)
                .map(|&(a, b)| (idx(a), idx(b))),
        )
        .is_connected()
    }
}

/// Loop-free, multiplicity-free adjacency in compressed rows; neighbour lists
/// are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleView {
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
}

impl SimpleView {
    pub fn from_pairs(n: usize, pairs: impl Iterator<Item = (VertexId, VertexId)>) -> Self {
        let mut keys: Vec<u64> = pairs
            .filter(|(a, b)| a != b)
            .map(|(a, b)| {
                let (x, y) = (a.min(b), a.max(b));
                ((x as u64) << 32) | y as u64
            })
            .collect();
        keys.sort_unstable();
        keys.dedup();
        let mut deg = vec![0usize; n + 1];
        for &k in &keys {
            deg[(k >> 32) as usize] += 1;
            deg[(k & 0xffff_ffff) as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        offsets.push(0);
        for d in deg.iter().take(n) {
            acc += d;
            offsets.push(acc);
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0; acc];
        for &k in &keys {
            let (x, y) = ((k >> 32) as usize, (k & 0xffff_ffff) as usize);
            neighbors[fill[x]] = y as VertexId;
            fill[x] += 1;
            neighbors[fill[y]] = x as VertexId;
            fill[y] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Self { offsets, neighbors }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        let (x, y) = if self.degree(a) <= self.degree(b) { (a, b) } else { (b, a) };
        self.neighbors(x).binary_search(&y).is_ok()
    }

    /// Induced subgraph on `keep`, relabelled `0..keep.len()` in `keep` order.
    pub fn induced(&self, keep: &[VertexId]) -> SimpleView {
        let mut map = vec![u32::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            map[v as usize] = i as u32;
        }
        let pairs = keep.iter().flat_map(|&v| {
            let map = &map;
            self.neighbors(v)
                .iter()
                .filter(move |&&w| map[w as usize] != u32::MAX && v < w)
                .map(move |&w| (map[v as usize], map[w as usize]))
        });
        SimpleView::from_pairs(keep.len(), pairs.collect::<Vec<_>>().into_iter())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0 as VertexId]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }
}
