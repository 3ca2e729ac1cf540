//! The three partial simplifications (connected cover, disconnected glue,
//! contracted main) and the loop that applies them until the graph is simple.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::augment::{
    check_fixed_domain, class_summary_unchecked, compare_order, validate_augmented, AugViolation, AugmentedGraph,
    OrderRelation,
};
use crate::config::{
    from_augmented_unchecked, identify_points, stabilize, to_dual_graph, Component, ConfigError, Configuration,
    PointRef, SpecialPoint, StabilizationPolicy,
};
use crate::geom::{GeomError, HomologyClass, TargetGeometry};
use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplifyError {
    #[error("invalid augmentation: {0:?}")]
    InvalidAugmentation(Vec<AugViolation>),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("oracle error: {0}")]
    OracleError(String),
    #[error("simplification did not finish within {0} steps")]
    StepLimit(u64),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverDescriptor {
    pub vertex: VertexId,
    pub genus: u32,
    pub blocks: Vec<Vec<SpecialPoint>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GlueTarget {
    Existing(SpecialPoint),
    Fresh,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlueDescriptor {
    pub alpha: VertexId,
    pub beta: VertexId,
    pub map: Vec<(SpecialPoint, GlueTarget)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RewriteKind {
    Cover,
    Glue,
    Contract,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplifyOutcome {
    pub kind: RewriteKind,
    pub result: AugmentedGraph,
    pub involved_main: bool,
    pub class_check: bool,
    pub c1_check: bool,
    pub constraint_check: bool,
    pub descent_check: bool,
    pub edges: usize,
}

/// Special points of `v` in the numbering of `from_augmented`.
pub fn special_points(g: &AugmentedGraph, v: VertexId) -> Vec<SpecialPoint> {
    let (_, map) = from_augmented_unchecked(g);
    map.into_iter().filter(|(_, p)| p.comp == v).map(|(sp, _)| sp).collect()
}

/// Riemann–Hurwitz: (2g − 2) − d(2gs − 2) ≥ 0.
pub fn hurwitz_feasible(g: u32, d: u64, gs: u32) -> bool {
    let lhs = 2 * g as i128 - 2 - d as i128 * (2 * gs as i128 - 2);
    lhs >= 0
}

fn ensure_valid(ctx: &TargetGeometry, g: &AugmentedGraph) -> Result<(), SimplifyError> {
    let v = validate_augmented(ctx, g);
    if v.is_empty() {
        Ok(())
    } else {
        Err(SimplifyError::InvalidAugmentation(v))
    }
}

fn bad(msg: impl Into<String>) -> SimplifyError {
    SimplifyError::InvalidDescriptor(msg.into())
}

/// Stabilizes, moves new components to `slot` in the order, and reads off the dual graph.
fn finish(mut c: Configuration, old_max: VertexId, slot: usize) -> Result<AugmentedGraph, SimplifyError> {
    c.normalize();
    let mut c = stabilize(&c, &StabilizationPolicy::Deterministic)?;
    let (new, old): (Vec<VertexId>, Vec<VertexId>) = c.order.iter().partition(|&&v| v > old_max);
    let slot = slot.min(old.len());
    c.order = old[..slot].iter().chain(&new).chain(&old[slot..]).copied().collect();
    Ok(to_dual_graph(&c)?)
}

fn outcome(
    ctx: &TargetGeometry,
    kind: RewriteKind,
    before: &AugmentedGraph,
    result: AugmentedGraph,
    involved_main: bool,
) -> Result<SimplifyOutcome, SimplifyError> {
    let s0 = class_summary_unchecked(ctx, before)?;
    let s1 = class_summary_unchecked(ctx, &result)?;
    Ok(SimplifyOutcome {
        kind,
        involved_main,
        class_check: s0.weighted == s1.weighted,
        c1_check: s1.c1_total <= s0.c1_total,
        constraint_check: check_fixed_domain(&result).is_ok(),
        descent_check: compare_order(&result, before) == OrderRelation::Less,
        edges: result.graph.edges.len(),
        result,
    })
}

pub fn check_cover(g: &AugmentedGraph, desc: &CoverDescriptor) -> Result<(), SimplifyError> {
    let a = desc.vertex;
    if !g.graph.contains(a) {
        return Err(bad(format!("unknown vertex {a}")));
    }
    let d = g.d(a);
    let genus = g.graph.genus_of(a);
    if d < 1 {
        return Err(bad(format!("vertex {a} has degree 0")));
    }
    if desc.genus > genus {
        return Err(bad(format!("image genus {} exceeds genus {genus}", desc.genus)));
    }
    if !hurwitz_feasible(genus, d, desc.genus) {
        return Err(bad(format!("no degree-{d} cover of genus {} by genus {genus}", desc.genus)));
    }
    let mut seen = BTreeSet::new();
    for block in &desc.blocks {
        if block.is_empty() || block.len() as u64 > d {
            return Err(bad(format!("block of size {} with degree {d}", block.len())));
        }
        for sp in block {
            if !seen.insert(*sp) {
                return Err(bad(format!("{sp:?} appears twice")));
            }
        }
    }
    let expected: BTreeSet<SpecialPoint> = special_points(g, a).into_iter().collect();
    if seen != expected {
        return Err(bad(format!("blocks do not partition the special points of {a}")));
    }
    Ok(())
}

pub fn simplify_connected(
    ctx: &TargetGeometry,
    g: &AugmentedGraph,
    desc: &CoverDescriptor,
) -> Result<SimplifyOutcome, SimplifyError> {
    ensure_valid(ctx, g)?;
    check_cover(g, desc)?;
    let a = desc.vertex;
    let (mut c, loc) = from_augmented_unchecked(g);
    let mut map = BTreeMap::new();
    for block in &desc.blocks {
        let target = loc[&block[0]];
        for sp in block {
            map.insert(loc[sp], target);
        }
    }
    c = identify_points(&c, &map);
    let comp = c.component_mut(a).expect("vertex exists");
    comp.genus = desc.genus;
    comp.m *= comp.d;
    comp.d = 1;
    let slot = g.order_position(a).expect("ordered") + 1;
    let result = finish(c, g.graph.vertices.last().map(|v| v.id).unwrap_or(0), slot)?;
    outcome(ctx, RewriteKind::Cover, g, result, a == g.main())
}

pub fn check_glue(g: &AugmentedGraph, desc: &GlueDescriptor) -> Result<(), SimplifyError> {
    let (a, b) = (desc.alpha, desc.beta);
    if a == b || !g.graph.contains(a) || !g.graph.contains(b) {
        return Err(bad(format!("bad vertex pair ({a}, {b})")));
    }
    if g.d(a) != 1 || g.d(b) != 1 {
        return Err(bad(format!("degrees ({}, {}) are not both 1", g.d(a), g.d(b))));
    }
    if g.h_value(a, b) != 1 {
        return Err(bad(format!("h({a}, {b}) is not 1")));
    }
    if g.class(a) != g.class(b) {
        return Err(bad("classes differ"));
    }
    let on_a: BTreeSet<SpecialPoint> = special_points(g, a).into_iter().collect();
    let on_b: BTreeSet<SpecialPoint> = special_points(g, b).into_iter().collect();
    let keys: BTreeSet<SpecialPoint> = desc.map.iter().map(|(sp, _)| *sp).collect();
    if keys != on_a || keys.len() != desc.map.len() {
        return Err(bad(format!("map keys must be the special points of {a}, each once")));
    }
    let mut used = BTreeSet::new();
    for (_, t) in &desc.map {
        if let GlueTarget::Existing(sp) = t {
            if !on_b.contains(sp) {
                return Err(bad(format!("{sp:?} is not a special point of {b}")));
            }
            if !used.insert(*sp) {
                return Err(bad(format!("{sp:?} is hit twice")));
            }
        }
    }
    Ok(())
}

pub fn simplify_disconnected(
    ctx: &TargetGeometry,
    g: &AugmentedGraph,
    desc: &GlueDescriptor,
) -> Result<SimplifyOutcome, SimplifyError> {
    ensure_valid(ctx, g)?;
    check_glue(g, desc)?;
    let (a, b) = (desc.alpha, desc.beta);
    let old_max = g.graph.vertices.last().map(|v| v.id).unwrap_or(0);
    let (mut c, loc) = from_augmented_unchecked(g);
    let mut map = BTreeMap::new();
    for (sp, t) in &desc.map {
        let target = match t {
            GlueTarget::Existing(x) => loc[x],
            GlueTarget::Fresh => c.fresh_point(b),
        };
        map.insert(loc[sp], target);
    }
    c = identify_points(&c, &map);
    let m_a = g.m(a);
    c.component_mut(b).expect("vertex exists").m += m_a;
    c.components.retain(|x| x.id != a);
    let slot = g.order_position(a).expect("ordered");
    c.order.retain(|&v| v != a);
    c.h.retain(|&(x, y)| x != a && y != a);
    let result = finish(c, old_max, slot)?;
    outcome(ctx, RewriteKind::Glue, g, result, a == g.main() || b == g.main())
}

pub fn simplify_contracted_main(ctx: &TargetGeometry, g: &AugmentedGraph) -> Result<SimplifyOutcome, SimplifyError> {
    ensure_valid(ctx, g)?;
    let main = g.main();
    if g.d(main) != 0 {
        return Err(SimplifyError::PreconditionFailed(format!(
            "main vertex has degree {}",
            g.d(main)
        )));
    }
    let old_max = g.graph.vertices.last().map(|v| v.id).unwrap_or(0);
    let (mut c, _) = from_augmented_unchecked(g);
    let mut others: BTreeSet<PointRef> = BTreeSet::new();
    c.junctions.retain(|j| {
        if j.iter().any(|p| p.comp == main) {
            others.extend(j.iter().filter(|p| p.comp != main));
            false
        } else {
            true
        }
    });
    let others: Vec<PointRef> = others.into_iter().collect();
    let spot = match others.first() {
        Some(&p) => p,
        None => {
            let id = old_max + 1;
            c.components.push(Component {
                id,
                genus: 0,
                m: 0,
                d: 0,
                class: HomologyClass::zero(ctx.rank()),
                points: vec![0],
            });
            c.order.push(id);
            PointRef::new(id, 0)
        }
    };
    if others.len() >= 2 {
        c.junctions.push(others.clone());
    }
    for p in c.markings_p.iter_mut().chain(c.markings_p_prime.iter_mut()) {
        if p.comp == main {
            *p = spot;
        }
    }
    c.components.retain(|x| x.id != main);
    c.order.retain(|&v| v != main);
    let result = finish(c, old_max, 0)?;
    outcome(ctx, RewriteKind::Contract, g, result, true)
}

/// Supplies descriptors to the full simplification loop.
pub trait DescriptorOracle {
    fn cover(&self, g: &AugmentedGraph, vertex: VertexId) -> Option<CoverDescriptor>;
    fn glue(&self, g: &AugmentedGraph, alpha: VertexId, beta: VertexId) -> Option<GlueDescriptor>;
}

/// Largest feasible image genus, singleton blocks, and fresh glue targets.
#[derive(Debug, Clone, Copy, Default)]
pub struct DefaultOracle;

impl DescriptorOracle for DefaultOracle {
    fn cover(&self, g: &AugmentedGraph, vertex: VertexId) -> Option<CoverDescriptor> {
        let genus = g.graph.genus_of(vertex);
        let d = g.d(vertex);
        let gs = (0..=genus).rev().find(|&gs| hurwitz_feasible(genus, d, gs))?;
        Some(CoverDescriptor {
            vertex,
            genus: gs,
            blocks: special_points(g, vertex).into_iter().map(|sp| vec![sp]).collect(),
        })
    }

    fn glue(&self, g: &AugmentedGraph, alpha: VertexId, beta: VertexId) -> Option<GlueDescriptor> {
        Some(GlueDescriptor {
            alpha,
            beta,
            map: special_points(g, alpha).into_iter().map(|sp| (sp, GlueTarget::Fresh)).collect(),
        })
    }
}

/// Genus of the degree-zero connected piece containing the main vertex.
pub fn contracted_main_genus(g: &AugmentedGraph) -> i64 {
    let main = g.main();
    if g.d(main) != 0 {
        return 0;
    }
    let zero: BTreeSet<VertexId> = g.graph.vertex_ids().into_iter().filter(|&v| g.d(v) == 0).collect();
    let piece = g
        .graph
        .components_within(&zero)
        .into_iter()
        .find(|k| k.contains(&main))
        .unwrap_or_default();
    let genera: i64 = piece.iter().map(|&v| g.graph.genus_of(v) as i64).sum();
    let edges = g
        .graph
        .edges
        .iter()
        .filter(|(a, b)| piece.contains(a) && piece.contains(b))
        .count() as i64;
    genera + edges - piece.len() as i64 + 1
}

/// Next rewrite the loop would apply, or `None` on simple graphs.
pub fn next_rewrite(g: &AugmentedGraph) -> Option<RewriteKind> {
    if g.order.iter().any(|&v| g.d(v) > 1) {
        Some(RewriteKind::Cover)
    } else if !g.h_ones().is_empty() {
        Some(RewriteKind::Glue)
    } else if contracted_main_genus(g) > 0 {
        Some(RewriteKind::Contract)
    } else {
        None
    }
}

pub fn simplify_fully(
    ctx: &TargetGeometry,
    g: &AugmentedGraph,
    oracle: &dyn DescriptorOracle,
) -> Result<Vec<SimplifyOutcome>, SimplifyError> {
    ensure_valid(ctx, g)?;
    let limit = g.sum_degrees() + g.graph.vertices.len() as u64;
    let mut chain = Vec::new();
    let mut cur = g.clone();
    while let Some(kind) = next_rewrite(&cur) {
        if chain.len() as u64 >= limit {
            return Err(SimplifyError::StepLimit(limit));
        }
        let out = match kind {
            RewriteKind::Cover => {
                let v = *cur.order.iter().find(|&&v| cur.d(v) > 1).expect("cover target");
                let desc = oracle
                    .cover(&cur, v)
                    .ok_or_else(|| SimplifyError::OracleError(format!("no cover descriptor for {v}")))?;
                simplify_connected(ctx, &cur, &desc)
            }
            RewriteKind::Glue => {
                let (beta, alpha) = first_pair_in_order(&cur);
                let desc = oracle
                    .glue(&cur, alpha, beta)
                    .ok_or_else(|| SimplifyError::OracleError(format!("no glue descriptor for ({alpha}, {beta})")))?;
                simplify_disconnected(ctx, &cur, &desc)
            }
            RewriteKind::Contract => simplify_contracted_main(ctx, &cur),
        }
        .map_err(|e| match e {
            SimplifyError::InvalidDescriptor(m) => SimplifyError::OracleError(m),
            other => other,
        })?;
        cur = out.result.clone();
        chain.push(out);
    }
    Ok(chain)
}

/// The h = 1 pair whose members come first in the order, as (earlier, later).
pub fn first_pair_in_order(g: &AugmentedGraph) -> (VertexId, VertexId) {
    let pos = |v: VertexId| g.order_position(v).expect("ordered");
    g.h_ones()
        .into_iter()
        .map(|(a, b)| if pos(a) < pos(b) { (a, b) } else { (b, a) })
        .min_by_key(|&(a, b)| (pos(a), pos(b)))
        .expect("some pair")
}
