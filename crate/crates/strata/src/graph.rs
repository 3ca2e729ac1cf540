//! Prestable marked graphs and their numeric invariants.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph: {0:?}")]
    InvalidGraph(Vec<GraphViolation>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GraphViolation {
    Empty,
    DuplicateVertex(VertexId),
    UnknownEdgeEndpoint(VertexId),
    UnknownMarkingVertex { prime: bool, index: usize, vertex: VertexId },
    Disconnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub id: VertexId,
    pub genus: u32,
}

/// Vertices sorted by id, edges as sorted unordered pairs, markings indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrestableGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(VertexId, VertexId)>,
    pub markings_p: Vec<VertexId>,
    pub markings_p_prime: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphReport {
    pub violations: Vec<GraphViolation>,
    pub stable: BTreeMap<VertexId, bool>,
}

impl GraphReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_stable(&self) -> bool {
        self.stable.values().all(|&s| s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub genus: i64,
    pub h1: i64,
    pub valences: BTreeMap<VertexId, u32>,
    pub stable: BTreeMap<VertexId, bool>,
    pub is_stable: bool,
}

fn normalize_edge((a, b): (VertexId, VertexId)) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl PrestableGraph {
    pub fn new(
        mut vertices: Vec<Vertex>,
        edges: Vec<(VertexId, VertexId)>,
        markings_p: Vec<VertexId>,
        markings_p_prime: Vec<VertexId>,
    ) -> Self {
        vertices.sort();
        let mut edges: Vec<_> = edges.into_iter().map(normalize_edge).collect();
        edges.sort();
        PrestableGraph {
            vertices,
            edges,
            markings_p,
            markings_p_prime,
        }
    }

    /// One vertex of genus `g` carrying `n` markings.
    pub fn single(g: u32, n: usize) -> Self {
        PrestableGraph::new(vec![Vertex { id: 0, genus: g }], vec![], vec![0; n], vec![])
    }

    pub fn n(&self) -> usize {
        self.markings_p.len()
    }

    pub fn ell(&self) -> usize {
        self.markings_p_prime.len()
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices.iter().map(|v| v.id).collect()
    }

    pub fn position(&self, id: VertexId) -> Option<usize> {
        self.vertices.binary_search_by_key(&id, |v| v.id).ok()
    }

    pub fn contains(&self, id: VertexId) -> bool {
        self.position(id).is_some()
    }

    pub fn genus_of(&self, id: VertexId) -> u32 {
        self.vertices[self.position(id).expect("vertex exists")].genus
    }

    pub fn valence(&self, id: VertexId) -> u32 {
        let edge_ends: usize = self
            .edges
            .iter()
            .map(|&(a, b)| (a == id) as usize + (b == id) as usize)
            .sum();
        let marks = self.markings_p.iter().filter(|&&v| v == id).count()
            + self.markings_p_prime.iter().filter(|&&v| v == id).count();
        (edge_ends + marks) as u32
    }

    pub fn is_stable_vertex(&self, id: VertexId) -> bool {
        2 * self.genus_of(id) as i64 - 2 + self.valence(id) as i64 > 0
    }

    pub fn edges_between(&self, a: VertexId, b: VertexId) -> usize {
        let key = normalize_edge((a, b));
        self.edges.iter().filter(|&&e| e == key).count()
    }

    pub fn neighbors(&self, id: VertexId) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for &(a, b) in &self.edges {
            if a == id && b != id {
                out.insert(b);
            }
            if b == id && a != id {
                out.insert(a);
            }
        }
        out
    }

    /// Connected components of the subgraph induced on `keep`.
    pub fn components_within(&self, keep: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
        let ids: Vec<VertexId> = keep.iter().copied().collect();
        let mut uf = UnionFind::new(ids.len());
        let idx = |v: VertexId| ids.binary_search(&v).ok();
        for &(a, b) in &self.edges {
            if let (Some(i), Some(j)) = (idx(a), idx(b)) {
                uf.union(i, j);
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
        for (i, &v) in ids.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().insert(v);
        }
        let mut comps: Vec<_> = groups.into_values().collect();
        comps.sort();
        comps
    }

    pub fn is_connected(&self) -> bool {
        let all: BTreeSet<VertexId> = self.vertex_ids().into_iter().collect();
        self.components_within(&all).len() == 1
    }

    pub fn h1(&self) -> i64 {
        1 - self.vertices.len() as i64 + self.edges.len() as i64
    }

    pub fn genus(&self) -> i64 {
        self.vertices.iter().map(|v| v.genus as i64).sum::<i64>() + self.h1()
    }

    /// Rename vertices through `f`, which must be injective on the vertex set.
    pub fn relabel(&self, f: impl Fn(VertexId) -> VertexId) -> PrestableGraph {
        PrestableGraph::new(
            self.vertices
                .iter()
                .map(|v| Vertex {
                    id: f(v.id),
                    genus: v.genus,
                })
                .collect(),
            self.edges.iter().map(|&(a, b)| (f(a), f(b))).collect(),
            self.markings_p.iter().map(|&v| f(v)).collect(),
            self.markings_p_prime.iter().map(|&v| f(v)).collect(),
        )
    }
}

pub fn validate_graph(g: &PrestableGraph) -> GraphReport {
    let mut violations = Vec::new();
    if g.vertices.is_empty() {
        violations.push(GraphViolation::Empty);
    }
    for w in g.vertices.windows(2) {
        if w[0].id == w[1].id {
            violations.push(GraphViolation::DuplicateVertex(w[0].id));
        }
    }
    let mut unknown = BTreeSet::new();
    for &(a, b) in &g.edges {
        for v in [a, b] {
            if !g.contains(v) {
                unknown.insert(v);
            }
        }
    }
    violations.extend(unknown.into_iter().map(GraphViolation::UnknownEdgeEndpoint));
    for (prime, marks) in [(false, &g.markings_p), (true, &g.markings_p_prime)] {
        for (index, &vertex) in marks.iter().enumerate() {
            if !g.contains(vertex) {
                violations.push(GraphViolation::UnknownMarkingVertex { prime, index, vertex });
            }
        }
    }
    if violations.is_empty() && !g.is_connected() {
        violations.push(GraphViolation::Disconnected);
    }
    let stable = if violations.is_empty() {
        g.vertices
            .iter()
            .map(|v| (v.id, g.is_stable_vertex(v.id)))
            .collect()
    } else {
        BTreeMap::new()
    };
    GraphReport { violations, stable }
}

pub fn graph_stats(g: &PrestableGraph) -> Result<GraphStats, GraphError> {
    let report = validate_graph(g);
    if !report.is_ok() {
        return Err(GraphError::InvalidGraph(report.violations));
    }
    let valences = g.vertices.iter().map(|v| (v.id, g.valence(v.id))).collect();
    let is_stable = report.is_stable();
    Ok(GraphStats {
        genus: g.genus(),
        h1: g.h1(),
        valences,
        stable: report.stable,
        is_stable,
    })
}

/// Acyclicity of the subgraph induced on `zero_set`; self-edges and parallel edges are cycles.
pub fn constant_locus_is_forest(
    g: &PrestableGraph,
    zero_set: &BTreeSet<VertexId>,
) -> Result<bool, GraphError> {
    if let Some(&v) = zero_set.iter().find(|&&v| !g.contains(v)) {
        return Err(GraphError::InvalidGraph(vec![GraphViolation::UnknownEdgeEndpoint(v)]));
    }
    let ids: Vec<VertexId> = zero_set.iter().copied().collect();
    let mut uf = UnionFind::new(ids.len());
    for &(a, b) in &g.edges {
        if let (Ok(i), Ok(j)) = (ids.binary_search(&a), ids.binary_search(&b)) {
            if !uf.union(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}
