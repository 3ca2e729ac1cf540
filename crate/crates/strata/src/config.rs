//! Configurations: components glued at junctions of arbitrary multiplicity,
//! with markings allowed anywhere, plus the stabilization loop.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::augment::{validate_augmented, AugViolation, AugmentedGraph, Decoration};
use crate::geom::{HomologyClass, TargetGeometry};
use crate::graph::{PrestableGraph, UnionFind, Vertex, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid augmentation: {0:?}")]
    InvalidAugmentation(Vec<AugViolation>),
    #[error("invalid configuration: {0:?}")]
    InvalidConfiguration(Vec<ConfigViolation>),
    #[error("configuration is disconnected")]
    Disconnected,
    #[error("configuration is not nodal: {0}")]
    NotNodal(String),
    #[error("invalid stabilization choice: {0}")]
    InvalidChoice(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConfigViolation {
    UnknownPoint(PointRef),
    DuplicateComponent(VertexId),
    PointInTwoJunctions(PointRef),
    ShortJunction(usize),
    Disconnected,
    OrderNotPermutation,
    BadSameImagePair(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointRef {
    pub comp: VertexId,
    pub point: u32,
}

impl PointRef {
    pub fn new(comp: VertexId, point: u32) -> Self {
        PointRef { comp, point }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub id: VertexId,
    pub genus: u32,
    pub m: u64,
    pub d: u64,
    pub class: HomologyClass,
    pub points: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub components: Vec<Component>,
    pub junctions: Vec<Vec<PointRef>>,
    pub markings_p: Vec<PointRef>,
    pub markings_p_prime: Vec<PointRef>,
    pub order: Vec<VertexId>,
    pub h: BTreeSet<(VertexId, VertexId)>,
}

/// A special point of an augmented graph, all indices 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpecialPoint {
    Edge { edge: usize, end: u8 },
    P(usize),
    Pp(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkRef {
    P(usize),
    Pp(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DestabilizingKind {
    ThreeBranches,
    MarkedNode,
    RepeatedMarking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Branch(PointRef),
    Mark(MarkRef, PointRef),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestabilizingPoint {
    pub junction: Option<usize>,
    pub kind: DestabilizingKind,
    pub branches: Vec<PointRef>,
    pub marks: Vec<(MarkRef, PointRef)>,
}

impl DestabilizingPoint {
    pub fn anchor(&self) -> PointRef {
        self.branches[0]
    }

    pub fn excess(&self) -> usize {
        self.branches.len() + self.marks.len() - 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilizationPolicy {
    Deterministic,
    /// One (a, b) pair of element indices per round, at the least destabilizing point.
    Explicit(Vec<(usize, usize)>),
}

impl Configuration {
    pub fn n(&self) -> usize {
        self.markings_p.len()
    }

    pub fn component(&self, id: VertexId) -> Option<&Component> {
        self.components
            .binary_search_by_key(&id, |c| c.id)
            .ok()
            .map(|i| &self.components[i])
    }

    pub fn component_mut(&mut self, id: VertexId) -> Option<&mut Component> {
        match self.components.binary_search_by_key(&id, |c| c.id) {
            Ok(i) => Some(&mut self.components[i]),
            Err(_) => None,
        }
    }

    pub fn max_id(&self) -> VertexId {
        self.components.iter().map(|c| c.id).max().unwrap_or(0)
    }

    pub fn fresh_point(&mut self, comp: VertexId) -> PointRef {
        let c = self.component_mut(comp).expect("component exists");
        let p = c.points.iter().max().map(|&p| p + 1).unwrap_or(0);
        c.points.push(p);
        PointRef::new(comp, p)
    }

    pub fn marking(&self, m: MarkRef) -> PointRef {
        match m {
            MarkRef::P(i) => self.markings_p[i],
            MarkRef::Pp(j) => self.markings_p_prime[j],
        }
    }

    fn mark_key(&self, m: MarkRef) -> usize {
        match m {
            MarkRef::P(i) => i,
            MarkRef::Pp(j) => self.n() + j,
        }
    }

    pub fn all_marks(&self) -> Vec<(MarkRef, PointRef)> {
        let p = self.markings_p.iter().enumerate().map(|(i, &x)| (MarkRef::P(i), x));
        let pp = self.markings_p_prime.iter().enumerate().map(|(j, &x)| (MarkRef::Pp(j), x));
        p.chain(pp).collect()
    }

    /// Map from point to the index of its junction.
    pub fn junction_of(&self) -> BTreeMap<PointRef, usize> {
        let mut out = BTreeMap::new();
        for (i, j) in self.junctions.iter().enumerate() {
            for &b in j {
                out.insert(b, i);
            }
        }
        out
    }

    /// Sorts points, branches and junctions and drops junctions with one branch.
    pub fn normalize(&mut self) {
        self.components.sort_by_key(|c| c.id);
        for c in &mut self.components {
            c.points.sort();
            c.points.dedup();
        }
        for j in &mut self.junctions {
            j.sort();
            j.dedup();
        }
        self.junctions.retain(|j| j.len() >= 2);
        self.junctions.sort();
    }

    /// Elements at a locus in the order used by stabilization choices.
    pub fn elements(&self, dp: &DestabilizingPoint) -> Vec<Element> {
        let mut keyed: Vec<((PointRef, usize), Element)> = dp
            .branches
            .iter()
            .map(|&b| ((b, 0), Element::Branch(b)))
            .chain(
                dp.marks
                    .iter()
                    .map(|&(m, p)| ((p, 1 + self.mark_key(m)), Element::Mark(m, p))),
            )
            .collect();
        keyed.sort();
        keyed.into_iter().map(|(_, e)| e).collect()
    }
}

pub fn validate_configuration(c: &Configuration) -> Vec<ConfigViolation> {
    let mut out = Vec::new();
    let ids: BTreeSet<VertexId> = c.components.iter().map(|x| x.id).collect();
    if ids.len() != c.components.len() {
        for w in c.components.windows(2) {
            if w[0].id == w[1].id {
                out.push(ConfigViolation::DuplicateComponent(w[0].id));
            }
        }
        return out;
    }
    let exists = |p: &PointRef| c.component(p.comp).is_some_and(|x| x.points.contains(&p.point));
    let mut seen = BTreeSet::new();
    for (i, j) in c.junctions.iter().enumerate() {
        if j.len() < 2 {
            out.push(ConfigViolation::ShortJunction(i));
        }
        for b in j {
            if !exists(b) {
                out.push(ConfigViolation::UnknownPoint(*b));
            } else if !seen.insert(*b) {
                out.push(ConfigViolation::PointInTwoJunctions(*b));
            }
        }
    }
    for (_, p) in c.all_marks() {
        if !exists(&p) {
            out.push(ConfigViolation::UnknownPoint(p));
        }
    }
    let mut order = c.order.clone();
    order.sort();
    if order != ids.iter().copied().collect::<Vec<_>>() {
        out.push(ConfigViolation::OrderNotPermutation);
    }
    for &(a, b) in &c.h {
        let ok = a < b && [a, b].iter().all(|x| c.component(*x).is_some_and(|y| y.d > 0));
        if !ok {
            out.push(ConfigViolation::BadSameImagePair(a, b));
        }
    }
    if out.is_empty() && !is_connected(c) {
        out.push(ConfigViolation::Disconnected);
    }
    out
}

fn is_connected(c: &Configuration) -> bool {
    if c.components.is_empty() {
        return false;
    }
    let idx: BTreeMap<VertexId, usize> = c.components.iter().enumerate().map(|(i, x)| (x.id, i)).collect();
    let mut uf = UnionFind::new(c.components.len());
    for j in &c.junctions {
        for w in j.windows(2) {
            uf.union(idx[&w[0].comp], idx[&w[1].comp]);
        }
    }
    let root = uf.find(0);
    (0..c.components.len()).all(|i| uf.find(i) == root)
}

/// Returns the configuration and the location of each special point.
pub fn from_augmented(
    ctx: &TargetGeometry,
    g: &AugmentedGraph,
) -> Result<(Configuration, BTreeMap<SpecialPoint, PointRef>), ConfigError> {
    let v = validate_augmented(ctx, g);
    if !v.is_empty() {
        return Err(ConfigError::InvalidAugmentation(v));
    }
    Ok(from_augmented_unchecked(g))
}

pub fn from_augmented_unchecked(g: &AugmentedGraph) -> (Configuration, BTreeMap<SpecialPoint, PointRef>) {
    let mut next: BTreeMap<VertexId, u32> = g.graph.vertex_ids().into_iter().map(|v| (v, 0)).collect();
    let mut alloc = |v: VertexId| {
        let slot = next.get_mut(&v).expect("vertex exists");
        *slot += 1;
        PointRef::new(v, *slot - 1)
    };
    let mut map = BTreeMap::new();
    let mut junctions = Vec::new();
    for (e, &(a, b)) in g.graph.edges.iter().enumerate() {
        let pa = alloc(a);
        let pb = alloc(b);
        map.insert(SpecialPoint::Edge { edge: e, end: 0 }, pa);
        map.insert(SpecialPoint::Edge { edge: e, end: 1 }, pb);
        junctions.push(vec![pa, pb]);
    }
    let markings_p: Vec<PointRef> = g.graph.markings_p.iter().map(|&v| alloc(v)).collect();
    let markings_p_prime: Vec<PointRef> = g.graph.markings_p_prime.iter().map(|&v| alloc(v)).collect();
    for (i, &p) in markings_p.iter().enumerate() {
        map.insert(SpecialPoint::P(i), p);
    }
    for (j, &p) in markings_p_prime.iter().enumerate() {
        map.insert(SpecialPoint::Pp(j), p);
    }
    let components = g
        .graph
        .vertices
        .iter()
        .zip(&g.deco)
        .map(|(v, dec)| Component {
            id: v.id,
            genus: v.genus,
            m: dec.m,
            d: dec.d,
            class: dec.class.clone(),
            points: (0..next[&v.id]).collect(),
        })
        .collect();
    let mut c = Configuration {
        components,
        junctions,
        markings_p,
        markings_p_prime,
        order: g.order.clone(),
        h: g.h_ones(),
    };
    c.normalize();
    (c, map)
}

pub fn arithmetic_genus(c: &Configuration) -> Result<i64, ConfigError> {
    if !is_connected(c) {
        return Err(ConfigError::Disconnected);
    }
    let genera: i64 = c.components.iter().map(|x| x.genus as i64).sum();
    let branches: i64 = c.junctions.iter().map(|j| j.len() as i64).sum();
    Ok(genera + branches - c.components.len() as i64 - c.junctions.len() as i64 + 1)
}

fn loci(c: &Configuration) -> Vec<DestabilizingPoint> {
    let jof = c.junction_of();
    let mut at_junction: Vec<Vec<(MarkRef, PointRef)>> = vec![Vec::new(); c.junctions.len()];
    let mut smooth: BTreeMap<PointRef, Vec<(MarkRef, PointRef)>> = BTreeMap::new();
    for (m, p) in c.all_marks() {
        match jof.get(&p) {
            Some(&j) => at_junction[j].push((m, p)),
            None => smooth.entry(p).or_default().push((m, p)),
        }
    }
    let mut out: Vec<DestabilizingPoint> = c
        .junctions
        .iter()
        .zip(at_junction)
        .enumerate()
        .map(|(i, (j, marks))| {
            let mut branches = j.clone();
            branches.sort();
            locus(Some(i), branches, marks)
        })
        .chain(smooth.into_iter().map(|(p, marks)| locus(None, vec![p], marks)))
        .collect();
    out.sort_by_key(|dp| dp.anchor());
    out
}

fn locus(junction: Option<usize>, branches: Vec<PointRef>, marks: Vec<(MarkRef, PointRef)>) -> DestabilizingPoint {
    let kind = match (branches.len(), marks.len()) {
        (b, _) if b >= 3 => DestabilizingKind::ThreeBranches,
        (2, _) => DestabilizingKind::MarkedNode,
        _ => DestabilizingKind::RepeatedMarking,
    };
    DestabilizingPoint {
        junction,
        kind,
        branches,
        marks,
    }
}

pub fn find_destabilizing(c: &Configuration) -> Vec<DestabilizingPoint> {
    loci(c)
        .into_iter()
        .filter(|dp| dp.branches.len() + dp.marks.len() >= 3)
        .collect()
}

/// Sum of excess over destabilizing points; each stabilization round lowers it by one.
pub fn destabilizing_measure(c: &Configuration) -> usize {
    find_destabilizing(c).iter().map(|dp| dp.excess()).sum()
}

/// One round at `dp` with elements `a`, `b` sent to 0 and 1 of a new weight-zero P¹.
pub fn stabilize_step(c: &Configuration, dp: &DestabilizingPoint, a: usize, b: usize) -> Result<Configuration, ConfigError> {
    let elems = c.elements(dp);
    if a == b || a >= elems.len() || b >= elems.len() {
        return Err(ConfigError::InvalidChoice(format!(
            "choice ({a}, {b}) among {} elements",
            elems.len()
        )));
    }
    let mut out = c.clone();
    let id = c.max_id() + 1;
    out.components.push(Component {
        id,
        genus: 0,
        m: 0,
        d: 0,
        class: HomologyClass::zero(c.components[0].class.rank()),
        points: vec![0, 1, 2],
    });
    out.order.push(id);
    if let Some(j) = dp.junction {
        out.junctions.remove(j);
    }
    let mut groups: [Vec<PointRef>; 3] = Default::default();
    for (i, e) in elems.iter().enumerate() {
        let pos = if i == a {
            0
        } else if i == b {
            1
        } else {
            2
        };
        let target = PointRef::new(id, pos as u32);
        match *e {
            Element::Branch(p) => groups[pos].push(p),
            Element::Mark(MarkRef::P(i), _) => out.markings_p[i] = target,
            Element::Mark(MarkRef::Pp(j), _) => out.markings_p_prime[j] = target,
        }
    }
    for (pos, branches) in groups.into_iter().enumerate() {
        if !branches.is_empty() {
            let mut j = vec![PointRef::new(id, pos as u32)];
            j.extend(branches);
            out.junctions.push(j);
        }
    }
    out.normalize();
    Ok(out)
}

pub fn stabilize(c: &Configuration, policy: &StabilizationPolicy) -> Result<Configuration, ConfigError> {
    let mut cur = c.clone();
    let mut round = 0;
    loop {
        let dps = find_destabilizing(&cur);
        let Some(dp) = dps.first() else {
            return Ok(cur);
        };
        let (a, b) = match policy {
            StabilizationPolicy::Deterministic => (0, 1),
            StabilizationPolicy::Explicit(choices) => *choices
                .get(round)
                .ok_or_else(|| ConfigError::InvalidChoice(format!("no choice supplied for round {}", round + 1)))?,
        };
        cur = stabilize_step(&cur, dp, a, b)?;
        round += 1;
    }
}

pub fn is_nodal(c: &Configuration) -> Result<(), ConfigError> {
    let jof = c.junction_of();
    if let Some(j) = c.junctions.iter().find(|j| j.len() != 2) {
        return Err(ConfigError::NotNodal(format!("junction {j:?} has {} branches", j.len())));
    }
    let mut seen = BTreeSet::new();
    for (m, p) in c.all_marks() {
        if jof.contains_key(&p) {
            return Err(ConfigError::NotNodal(format!("marking {m:?} sits at a node")));
        }
        if !seen.insert(p) {
            return Err(ConfigError::NotNodal(format!("marking {m:?} shares its point")));
        }
    }
    Ok(())
}

pub fn to_dual_graph(c: &Configuration) -> Result<AugmentedGraph, ConfigError> {
    is_nodal(c)?;
    if !is_connected(c) {
        return Err(ConfigError::Disconnected);
    }
    let graph = PrestableGraph::new(
        c.components.iter().map(|x| Vertex { id: x.id, genus: x.genus }).collect(),
        c.junctions.iter().map(|j| (j[0].comp, j[1].comp)).collect(),
        c.markings_p.iter().map(|p| p.comp).collect(),
        c.markings_p_prime.iter().map(|p| p.comp).collect(),
    );
    let deco = c
        .components
        .iter()
        .map(|x| Decoration {
            m: x.m,
            d: x.d,
            class: x.class.clone(),
        })
        .collect();
    let h: Vec<_> = c.h.iter().copied().collect();
    let mut g = AugmentedGraph::new(graph, deco, &h);
    g.order = c.order.clone();
    Ok(g)
}

/// Redirects every reference to a mapped point, merging junctions that meet.
pub fn identify_points(c: &Configuration, map: &BTreeMap<PointRef, PointRef>) -> Configuration {
    let f = |p: PointRef| *map.get(&p).unwrap_or(&p);
    let mut out = c.clone();
    for (&src, &dst) in map {
        if src != dst {
            if let Some(comp) = out.component_mut(src.comp) {
                comp.points.retain(|&x| x != src.point);
            }
        }
    }
    for &dst in map.values() {
        if let Some(comp) = out.component_mut(dst.comp) {
            if !comp.points.contains(&dst.point) {
                comp.points.push(dst.point);
            }
        }
    }
    let mapped: Vec<Vec<PointRef>> = c.junctions.iter().map(|j| j.iter().map(|&p| f(p)).collect()).collect();
    let mut uf = UnionFind::new(mapped.len());
    let mut owner: BTreeMap<PointRef, usize> = BTreeMap::new();
    for (i, j) in mapped.iter().enumerate() {
        for &p in j {
            if let Some(&k) = owner.get(&p) {
                uf.union(i, k);
            } else {
                owner.insert(p, i);
            }
        }
    }
    let mut merged: BTreeMap<usize, BTreeSet<PointRef>> = BTreeMap::new();
    for (i, j) in mapped.into_iter().enumerate() {
        merged.entry(uf.find(i)).or_default().extend(j);
    }
    out.junctions = merged.into_values().map(|s| s.into_iter().collect()).collect();
    for p in out.markings_p.iter_mut().chain(out.markings_p_prime.iter_mut()) {
        *p = f(*p);
    }
    out.normalize();
    out
}
