//! Bounded, deterministic enumeration of prestable graphs, augmentations and
//! simplification descriptors.

use std::collections::BTreeSet;

use num::{BigInt, Signed};
use thiserror::Error;

use crate::augment::{check_fixed_domain, validate_augmented, AugmentedGraph, Decoration};
use crate::geom::{GeomError, HomologyClass, TargetGeometry};
use crate::graph::{PrestableGraph, Vertex, VertexId};
use crate::simplify::{hurwitz_feasible, special_points, CoverDescriptor, GlueDescriptor, GlueTarget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("hypothesis mismatch: {0}")]
    HypothesisMismatch(String),
    #[error("bounds do not match the context: {0}")]
    BoundsMismatch(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// `g` is the total arithmetic genus of every enumerated graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumBounds {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_degree: u64,
    pub max_weight: u64,
    pub n: usize,
    pub ell: usize,
    pub g: u32,
    pub basis_rank: usize,
    pub max_c1_per_class: i64,
    /// Optional cap on c1(m·d·A) at each vertex.
    pub max_weighted_c1: Option<i64>,
}

/// All set partitions in restricted-growth order.
pub fn set_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    fn go<T: Clone>(items: &[T], i: usize, acc: &mut Vec<Vec<T>>, out: &mut Vec<Vec<Vec<T>>>) {
        if i == items.len() {
            out.push(acc.clone());
            return;
        }
        for b in 0..acc.len() {
            acc[b].push(items[i].clone());
            go(items, i + 1, acc, out);
            acc[b].pop();
        }
        acc.push(vec![items[i].clone()]);
        go(items, i + 1, acc, out);
        acc.pop();
    }
    let mut out = Vec::new();
    go(items, 0, &mut Vec::new(), &mut out);
    out
}

/// Every function `0..len -> 0..base`, lexicographically.
fn all_maps(len: usize, base: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..base).map(move |x| {
                    let mut m = m.clone();
                    m.push(x);
                    m
                })
            })
            .collect();
    }
    out
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multisets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        for mut rest in multisets(&items[i..], k - 1) {
            rest.insert(0, items[i].clone());
            out.push(rest);
        }
    }
    out
}

fn edge_valence(edges: &[(VertexId, VertexId)], v: VertexId) -> usize {
    edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
}

/// Vertex 0 is free; the rest carry non-increasing (genus, edge valence).
pub fn is_canonical(genera: &[u32], edges: &[(VertexId, VertexId)]) -> bool {
    let sig = |i: usize| (genera[i], edge_valence(edges, i as VertexId));
    (2..genera.len()).all(|i| sig(i - 1) >= sig(i))
}

fn connected(v: usize, edges: &[(VertexId, VertexId)]) -> bool {
    let mut uf = crate::graph::UnionFind::new(v);
    let joined = edges.iter().filter(|&&(a, b)| uf.union(a as usize, b as usize)).count();
    joined + 1 == v
}

/// Connected unmarked skeletons (genera, edges) of total genus `g`.
fn skeletons(b: &EnumBounds) -> Vec<(Vec<u32>, Vec<(VertexId, VertexId)>)> {
    let mut out = Vec::new();
    for v in 1..=b.max_vertices {
        let pairs: Vec<(VertexId, VertexId)> = (0..v as VertexId)
            .flat_map(|a| (a..v as VertexId).map(move |c| (a, c)))
            .collect();
        for e in (v - 1)..=b.max_edges {
            let h1 = e + 1 - v;
            if h1 > b.g as usize {
                continue;
            }
            let gsum = b.g - h1 as u32;
            let edge_sets: Vec<_> = multisets(&pairs, e).into_iter().filter(|es| connected(v, es)).collect();
            for genera in compositions(gsum, v) {
                for es in &edge_sets {
                    if is_canonical(&genera, es) {
                        out.push((genera.clone(), es.clone()));
                    }
                }
            }
        }
    }
    out
}

fn build(genera: &[u32], edges: &[(VertexId, VertexId)], p: Vec<VertexId>, pp: Vec<VertexId>) -> PrestableGraph {
    let vertices = genera
        .iter()
        .enumerate()
        .map(|(i, &genus)| Vertex { id: i as VertexId, genus })
        .collect();
    PrestableGraph::new(vertices, edges.to_vec(), p, pp)
}

/// Connected prestable graphs within the bounds, with every placement of the markings.
pub fn enum_prestable(b: &EnumBounds) -> Vec<PrestableGraph> {
    let mut out = Vec::new();
    for (genera, edges) in skeletons(b) {
        let v = genera.len();
        for p in all_maps(b.n, v) {
            for pp in all_maps(b.ell, v) {
                let id = |x: Vec<usize>| x.into_iter().map(|i| i as VertexId).collect();
                out.push(build(&genera, &edges, id(p.clone()), id(pp)));
            }
        }
    }
    out
}

/// Skeletons with markings placed as the fixed-domain constraint demands:
/// p_{ℓ+1..n} on vertex 0, p_1..p_ℓ on distinct other vertices, p' off both.
fn fixed_domain_graphs(b: &EnumBounds) -> Vec<PrestableGraph> {
    let mut out = Vec::new();
    for (genera, edges) in skeletons(b) {
        if genera[1..].iter().any(|&x| x != 0) {
            continue;
        }
        let v = genera.len();
        for carriers in all_maps(b.ell, v) {
            let set: BTreeSet<usize> = carriers.iter().copied().collect();
            if set.len() != carriers.len() || set.contains(&0) {
                continue;
            }
            let free: Vec<usize> = (1..v).filter(|x| !set.contains(x)).collect();
            for pp in all_maps(b.ell, free.len()) {
                let p: Vec<VertexId> = carriers
                    .iter()
                    .map(|&x| x as VertexId)
                    .chain(std::iter::repeat(0).take(b.n - b.ell))
                    .collect();
                let pp = pp.into_iter().map(|i| free[i] as VertexId).collect();
                let g = build(&genera, &edges, p, pp);
                let probe = AugmentedGraph::new(
                    g.clone(),
                    vec![
                        Decoration {
                            m: 1,
                            d: 1,
                            class: HomologyClass::zero(b.basis_rank)
                        };
                        v
                    ],
                    &[],
                );
                if check_fixed_domain(&probe).is_ok() {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// Decorations a single vertex may carry: constant, or (m, d, j·e_i) within the bounds.
pub fn decoration_choices(ctx: &TargetGeometry, b: &EnumBounds) -> Vec<Decoration> {
    let rank = b.basis_rank;
    let mut classes = Vec::new();
    for i in 0..rank {
        let c1 = &ctx.c1[i];
        if !c1.is_positive() {
            continue;
        }
        let mut j = BigInt::from(1);
        while &j * c1 <= BigInt::from(b.max_c1_per_class) {
            let a = HomologyClass::basis(rank, i).scale(&j);
            if ctx.is_positive_class(&a).unwrap_or(false) {
                classes.push(a);
            }
            j += 1;
        }
    }
    let mut out = vec![Decoration::constant(rank)];
    for d in 1..=b.max_degree {
        for m in 1..=b.max_weight {
            for a in &classes {
                let weighted = ctx.c1_pairing(a).unwrap_or_default() * BigInt::from(m * d);
                if b.max_weighted_c1.is_some_and(|cap| weighted > BigInt::from(cap)) {
                    continue;
                }
                out.push(Decoration { m, d, class: a.clone() });
            }
        }
    }
    out
}

/// Partitions of the positive-degree vertices into same-image blocks of equal class.
fn h_choices(deco: &[Decoration], ids: &[VertexId]) -> Vec<Vec<(VertexId, VertexId)>> {
    let pos: Vec<usize> = (0..deco.len()).filter(|&i| deco[i].d > 0).collect();
    set_partitions(&pos)
        .into_iter()
        .filter(|blocks| blocks.iter().all(|bl| bl.iter().all(|&i| deco[i].class == deco[bl[0]].class)))
        .map(|blocks| {
            blocks
                .iter()
                .flat_map(|bl| {
                    bl.iter()
                        .enumerate()
                        .flat_map(move |(x, &i)| bl[x + 1..].iter().map(move |&j| (ids[i], ids[j])))
                })
                .collect()
        })
        .collect()
}

fn check_bounds(ctx: &TargetGeometry, b: &EnumBounds) -> Result<(), EnumError> {
    ctx.check()?;
    if ctx.rank() != b.basis_rank {
        return Err(EnumError::BoundsMismatch(format!(
            "basis rank {} but the context has rank {}",
            b.basis_rank,
            ctx.rank()
        )));
    }
    if b.ell > b.n {
        return Err(EnumError::BoundsMismatch(format!("ell = {} exceeds n = {}", b.ell, b.n)));
    }
    Ok(())
}

/// Streams valid augmented graphs within the bounds in a deterministic order.
/// The visitor returns `false` to stop early.
pub fn for_each_augmented(
    ctx: &TargetGeometry,
    b: &EnumBounds,
    fixed_domain_only: bool,
    mut visit: impl FnMut(AugmentedGraph) -> bool,
) -> Result<(), EnumError> {
    check_bounds(ctx, b)?;
    let graphs = if fixed_domain_only {
        fixed_domain_graphs(b)
    } else {
        enum_prestable(b)
    };
    let choices = decoration_choices(ctx, b);
    for g in graphs {
        let ids = g.vertex_ids();
        let mut pick = vec![0usize; ids.len()];
        loop {
            let deco: Vec<Decoration> = pick.iter().map(|&i| choices[i].clone()).collect();
            for h in h_choices(&deco, &ids) {
                let a = AugmentedGraph::new(g.clone(), deco.clone(), &h);
                if !validate_augmented(ctx, &a).is_empty() {
                    continue;
                }
                if fixed_domain_only && !check_fixed_domain(&a).is_ok() {
                    continue;
                }
                if !visit(a) {
                    return Ok(());
                }
            }
            let Some(i) = (0..pick.len()).rev().find(|&i| pick[i] + 1 < choices.len()) else {
                break;
            };
            pick[i] += 1;
            pick[i + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    Ok(())
}

/// Valid augmented graphs within the bounds, deterministic in order.
pub fn enum_augmented(ctx: &TargetGeometry, b: &EnumBounds, fixed_domain_only: bool) -> Result<Vec<AugmentedGraph>, EnumError> {
    let mut out = Vec::new();
    for_each_augmented(ctx, b, fixed_domain_only, |a| {
        out.push(a);
        true
    })?;
    Ok(out)
}

pub fn count_augmented(ctx: &TargetGeometry, b: &EnumBounds, fixed_domain_only: bool) -> Result<usize, EnumError> {
    let mut n = 0;
    for_each_augmented(ctx, b, fixed_domain_only, |_| {
        n += 1;
        true
    })?;
    Ok(n)
}

/// Every cover descriptor of `v`: feasible image genera times partitions of the
/// special points into blocks of size at most d.
pub fn enum_cover_descriptors(g: &AugmentedGraph, v: VertexId) -> Result<Vec<CoverDescriptor>, EnumError> {
    if !g.graph.contains(v) {
        return Err(EnumError::HypothesisMismatch(format!("unknown vertex {v}")));
    }
    let d = g.d(v);
    if d <= 1 {
        return Err(EnumError::HypothesisMismatch(format!("vertex {v} has degree {d}")));
    }
    let genus = g.graph.genus_of(v);
    let parts: Vec<_> = set_partitions(&special_points(g, v))
        .into_iter()
        .filter(|p| p.iter().all(|bl| bl.len() as u64 <= d))
        .collect();
    Ok((0..=genus)
        .filter(|&gs| hurwitz_feasible(genus, d, gs))
        .flat_map(|gs| {
            parts.iter().map(move |blocks| CoverDescriptor {
                vertex: v,
                genus: gs,
                blocks: blocks.clone(),
            })
        })
        .collect())
}

/// Every injective assignment of α's special points to β's special points or fresh points.
pub fn enum_glue_descriptors(g: &AugmentedGraph, alpha: VertexId, beta: VertexId) -> Result<Vec<GlueDescriptor>, EnumError> {
    let mismatch = |m: String| Err(EnumError::HypothesisMismatch(m));
    if alpha == beta || !g.graph.contains(alpha) || !g.graph.contains(beta) {
        return mismatch(format!("bad vertex pair ({alpha}, {beta})"));
    }
    if g.d(alpha) != 1 || g.d(beta) != 1 || g.h_value(alpha, beta) != 1 || g.class(alpha) != g.class(beta) {
        return mismatch(format!("({alpha}, {beta}) is not a same-image pair of degree-1 vertices"));
    }
    let from = special_points(g, alpha);
    let to = special_points(g, beta);
    let mut maps: Vec<Vec<GlueTarget>> = vec![Vec::new()];
    for _ in &from {
        maps = maps
            .into_iter()
            .flat_map(|m| {
                let used: BTreeSet<GlueTarget> = m.iter().copied().collect();
                std::iter::once(GlueTarget::Fresh)
                    .chain(to.iter().map(|&sp| GlueTarget::Existing(sp)))
                    .filter(move |t| *t == GlueTarget::Fresh || !used.contains(t))
                    .map(move |t| {
                        let mut m = m.clone();
                        m.push(t);
                        m
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    Ok(maps
        .into_iter()
        .map(|targets| GlueDescriptor {
            alpha,
            beta,
            map: from.iter().copied().zip(targets).collect(),
        })
        .collect())
}
