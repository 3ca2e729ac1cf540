//! Augmented graphs: weights, cover degrees, classes, the same-image relation,
//! the fixed-domain constraint, the induction order and the comb construction.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, BigRational};
use thiserror::Error;

use crate::geom::{GeomError, HomologyClass, TargetGeometry};
use crate::graph::{constant_locus_is_forest, validate_graph, GraphViolation, PrestableGraph, Vertex, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AugmentError {
    #[error("invalid augmentation: {0:?}")]
    InvalidAugmentation(Vec<AugViolation>),
    #[error("comb shape error: {0}")]
    ShapeError(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum AugViolation {
    Graph(GraphViolation),
    DecorationCount { expected: usize, found: usize },
    OrderNotPermutation,
    EllExceedsN { n: usize, ell: usize },
    ClassRank(VertexId),
    ZeroEquivalence(VertexId),
    NotPositive(VertexId),
    HDomain(VertexId, VertexId),
    HValue(VertexId, VertexId),
    HAsymmetric(VertexId, VertexId),
    HClassMismatch(VertexId, VertexId),
    HNotTransitive(VertexId, VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decoration {
    pub m: u64,
    pub d: u64,
    pub class: HomologyClass,
}

impl Decoration {
    pub fn constant(rank: usize) -> Self {
        Decoration {
            m: 0,
            d: 0,
            class: HomologyClass::zero(rank),
        }
    }
}

/// `deco` is aligned with `graph.vertices`; `h` holds raw entries on ordered pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AugmentedGraph {
    pub graph: PrestableGraph,
    pub order: Vec<VertexId>,
    pub deco: Vec<Decoration>,
    pub h: BTreeMap<(VertexId, VertexId), u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSummary {
    pub total: HomologyClass,
    pub weighted: HomologyClass,
    pub c1_total: BigInt,
    pub c1_weighted: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub k: BigInt,
    pub rho: BigRational,
    pub bound_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FixedDomainClause {
    MainGenus,
    Markings,
    ConstantForest,
    EdgeMarkingMatch,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FixedDomainViolation {
    pub clause: FixedDomainClause,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedDomainReport {
    pub violations: Vec<FixedDomainViolation>,
    pub edges: usize,
    pub edges_at_least_2ell: bool,
}

impl FixedDomainReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, clause: FixedDomainClause) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderRelation {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl AugmentedGraph {
    /// Builds with `order` = ascending ids and `h` normalized over positive-degree pairs.
    pub fn new(graph: PrestableGraph, deco: Vec<Decoration>, h_ones: &[(VertexId, VertexId)]) -> Self {
        let order = graph.vertex_ids();
        let mut g = AugmentedGraph {
            graph,
            order,
            deco,
            h: BTreeMap::new(),
        };
        let ones: BTreeSet<_> = h_ones.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        g.h = g
            .positive_pairs()
            .into_iter()
            .map(|p| (p, ones.contains(&p) as u8))
            .collect();
        g
    }

    /// T_{g,n}: a single genus-`g` vertex carrying all markings.
    pub fn t_gn(g: u32, n: usize, m: u64, d: u64, class: HomologyClass) -> Self {
        let class = if d == 0 { HomologyClass::zero(class.rank()) } else { class };
        AugmentedGraph::new(PrestableGraph::single(g, n), vec![Decoration { m, d, class }], &[])
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn ell(&self) -> usize {
        self.graph.ell()
    }

    pub fn main(&self) -> VertexId {
        self.order[0]
    }

    /// Genus of the main vertex; the `g` of the budget and index formulas.
    pub fn main_genus(&self) -> u32 {
        self.graph.genus_of(self.main())
    }

    pub fn rank(&self) -> usize {
        self.deco.first().map(|d| d.class.rank()).unwrap_or(0)
    }

    pub fn deco_of(&self, v: VertexId) -> &Decoration {
        &self.deco[self.graph.position(v).expect("vertex exists")]
    }

    pub fn deco_of_mut(&mut self, v: VertexId) -> &mut Decoration {
        let i = self.graph.position(v).expect("vertex exists");
        &mut self.deco[i]
    }

    pub fn d(&self, v: VertexId) -> u64 {
        self.deco_of(v).d
    }

    pub fn m(&self, v: VertexId) -> u64 {
        self.deco_of(v).m
    }

    pub fn class(&self, v: VertexId) -> &HomologyClass {
        &self.deco_of(v).class
    }

    pub fn degree_vector(&self) -> Vec<u64> {
        self.order.iter().map(|&v| self.d(v)).collect()
    }

    pub fn positive_pairs(&self) -> Vec<(VertexId, VertexId)> {
        let pos: Vec<VertexId> = self
            .graph
            .vertices
            .iter()
            .zip(&self.deco)
            .filter(|(_, d)| d.d > 0)
            .map(|(v, _)| v.id)
            .collect();
        let mut out = Vec::new();
        for (i, &a) in pos.iter().enumerate() {
            for &b in &pos[i + 1..] {
                out.push((a, b));
            }
        }
        out
    }

    pub fn h_value(&self, a: VertexId, b: VertexId) -> u8 {
        self.h
            .get(&(a, b))
            .or_else(|| self.h.get(&(b, a)))
            .copied()
            .unwrap_or(0)
    }

    /// Unordered pairs with h = 1, as (smaller id, larger id).
    pub fn h_ones(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.h
            .iter()
            .filter(|(_, &v)| v == 1)
            .map(|(&(a, b), _)| (a.min(b), a.max(b)))
            .collect()
    }

    /// Rewrites `h` to one entry per positive-degree pair (smaller id first).
    pub fn normalize_h(&mut self) {
        let ones = self.h_ones();
        self.h = self
            .positive_pairs()
            .into_iter()
            .map(|p| (p, ones.contains(&p) as u8))
            .collect();
    }

    pub fn sum_degrees(&self) -> u64 {
        self.deco.iter().map(|d| d.d).sum()
    }

    pub fn order_position(&self, v: VertexId) -> Option<usize> {
        self.order.iter().position(|&x| x == v)
    }
}

pub fn validate_augmented(ctx: &TargetGeometry, g: &AugmentedGraph) -> Vec<AugViolation> {
    let mut out: Vec<AugViolation> = validate_graph(&g.graph)
        .violations
        .into_iter()
        .map(AugViolation::Graph)
        .collect();
    if !out.is_empty() {
        return out;
    }
    if g.deco.len() != g.graph.vertices.len() {
        out.push(AugViolation::DecorationCount {
            expected: g.graph.vertices.len(),
            found: g.deco.len(),
        });
        return out;
    }
    let mut sorted_order = g.order.clone();
    sorted_order.sort();
    if sorted_order != g.graph.vertex_ids() {
        out.push(AugViolation::OrderNotPermutation);
    }
    if g.ell() > g.n() {
        out.push(AugViolation::EllExceedsN { n: g.n(), ell: g.ell() });
    }
    for (v, dec) in g.graph.vertices.iter().zip(&g.deco) {
        if dec.class.rank() != ctx.rank() {
            out.push(AugViolation::ClassRank(v.id));
            continue;
        }
        let zeros = [dec.class.is_zero(), dec.d == 0, dec.m == 0];
        if zeros.iter().any(|&z| z) && !zeros.iter().all(|&z| z) {
            out.push(AugViolation::ZeroEquivalence(v.id));
        } else if !zeros[0] && !ctx.is_positive_class(&dec.class).unwrap_or(false) {
            out.push(AugViolation::NotPositive(v.id));
        }
    }
    for (&(a, b), &val) in &g.h {
        let known = g.graph.contains(a) && g.graph.contains(b);
        if !known || a == b || g.d(a) == 0 || g.d(b) == 0 {
            out.push(AugViolation::HDomain(a, b));
            continue;
        }
        if val > 1 {
            out.push(AugViolation::HValue(a, b));
        }
        if let Some(&rev) = g.h.get(&(b, a)) {
            if rev != val && a < b {
                out.push(AugViolation::HAsymmetric(a, b));
            }
        }
    }
    if out.iter().any(|v| matches!(v, AugViolation::HDomain(..) | AugViolation::ClassRank(_))) {
        return out;
    }
    let ones = g.h_ones();
    for &(a, b) in &ones {
        if g.class(a) != g.class(b) {
            out.push(AugViolation::HClassMismatch(a, b));
        }
    }
    let positive: Vec<VertexId> = g.graph.vertex_ids().into_iter().filter(|&v| g.d(v) > 0).collect();
    let related = |a: VertexId, b: VertexId| ones.contains(&(a.min(b), a.max(b)));
    for &a in &positive {
        for &b in &positive {
            for &c in &positive {
                if a < c && a != b && b != c && related(a, b) && related(b, c) && !related(a, c) {
                    out.push(AugViolation::HNotTransitive(a, b, c));
                }
            }
        }
    }
    out
}

fn ensure_valid(ctx: &TargetGeometry, g: &AugmentedGraph) -> Result<(), AugmentError> {
    let v = validate_augmented(ctx, g);
    if v.is_empty() {
        Ok(())
    } else {
        Err(AugmentError::InvalidAugmentation(v))
    }
}

pub fn class_summary(ctx: &TargetGeometry, g: &AugmentedGraph) -> Result<ClassSummary, AugmentError> {
    ensure_valid(ctx, g)?;
    Ok(class_summary_unchecked(ctx, g)?)
}

/// Sums without the validity gate; used on intermediate rewrite results.
pub fn class_summary_unchecked(ctx: &TargetGeometry, g: &AugmentedGraph) -> Result<ClassSummary, GeomError> {
    let mut total = HomologyClass::zero(ctx.rank());
    let mut weighted = HomologyClass::zero(ctx.rank());
    for dec in &g.deco {
        let t = dec.class.scale_u64(dec.d);
        weighted = &weighted + &t.scale_u64(dec.m);
        total = &total + &t;
    }
    Ok(ClassSummary {
        c1_total: ctx.c1_pairing(&total)?,
        c1_weighted: ctx.c1_pairing(&weighted)?,
        total,
        weighted,
    })
}

pub fn budget(ctx: &TargetGeometry, g: &AugmentedGraph, rho: &BigRational) -> Result<Budget, AugmentError> {
    let summary = class_summary(ctx, g)?;
    let n = BigInt::from(g.n());
    let genus = BigInt::from(g.main_genus());
    let r = BigInt::from(ctx.r);
    let k = &r * (&n + &genus - 1) - &summary.c1_weighted;
    Ok(Budget {
        bound_ok: k_within_bound(ctx.r, g.n(), &k, rho),
        k,
        rho: rho.clone(),
    })
}

/// k ≤ (r − 1 − ρ)·n / 5, exactly.
pub fn k_within_bound(r: i64, n: usize, k: &BigInt, rho: &BigRational) -> bool {
    let lhs = BigRational::from_integer(k.clone());
    let rhs = (BigRational::from_integer(BigInt::from(r - 1)) - rho) * BigRational::from_integer(BigInt::from(n))
        / BigRational::from_integer(BigInt::from(5));
    lhs <= rhs
}

pub fn check_fixed_domain(g: &AugmentedGraph) -> FixedDomainReport {
    use FixedDomainClause::*;
    let mut violations = Vec::new();
    let mut push = |clause, detail: String| violations.push(FixedDomainViolation { clause, detail });
    let main = g.main();
    let gr = &g.graph;
    let (n, ell) = (g.n(), g.ell());

    for v in &gr.vertices {
        if v.id != main && v.genus != 0 {
            push(MainGenus, format!("vertex {} has genus {} but is not the main vertex", v.id, v.genus));
        }
    }

    for i in ell..n {
        if gr.markings_p[i] != main {
            push(Markings, format!("p{} sits on vertex {} instead of the main vertex", i + 1, gr.markings_p[i]));
        }
    }
    let carriers: Vec<VertexId> = gr.markings_p[..ell.min(n)].to_vec();
    let distinct: BTreeSet<VertexId> = carriers.iter().copied().collect();
    if distinct.len() != carriers.len() {
        push(Markings, "carrier vertices are not distinct".to_string());
    }
    for (i, &a) in carriers.iter().enumerate() {
        if a == main {
            push(Markings, format!("p{} sits on the main vertex but i <= ell", i + 1));
            continue;
        }
        if gr.genus_of(a) != 0 {
            push(Markings, format!("carrier {a} of p{} has positive genus", i + 1));
        }
        if gr.valence(a) != 3 {
            push(Markings, format!("carrier {a} of p{} has valence {}", i + 1, gr.valence(a)));
        }
        if gr.edges_between(a, main) != 1 {
            push(
                Markings,
                format!("carrier {a} of p{} has {} edges to the main vertex", i + 1, gr.edges_between(a, main)),
            );
        }
    }
    for (j, &v) in gr.markings_p_prime.iter().enumerate() {
        if v == main || distinct.contains(&v) {
            push(Markings, format!("p'{} sits on vertex {v}, which is main or a carrier", j + 1));
        }
    }

    let zero_set: BTreeSet<VertexId> = gr.vertex_ids().into_iter().filter(|&v| g.d(v) == 0).collect();
    if !constant_locus_is_forest(gr, &zero_set).unwrap_or(false) {
        push(ConstantForest, "the degree-zero vertices contain a cycle".to_string());
    }

    let rest: BTreeSet<VertexId> = gr.vertex_ids().into_iter().filter(|&v| v != main).collect();
    for comp in gr.components_within(&rest) {
        let edges = gr
            .edges
            .iter()
            .filter(|&&(a, b)| (a == main && comp.contains(&b)) || (b == main && comp.contains(&a)))
            .count();
        let primes = gr.markings_p_prime.iter().filter(|v| comp.contains(v)).count();
        if edges != primes {
            push(
                EdgeMarkingMatch,
                format!("component {comp:?} has {edges} edges to the main vertex but {primes} p' markings"),
            );
        }
    }

    FixedDomainReport {
        edges: gr.edges.len(),
        edges_at_least_2ell: gr.edges.len() >= 2 * ell,
        violations,
    }
}

/// Shorter degree vectors are smaller; equal lengths compare at the first difference.
pub fn compare_order(a: &AugmentedGraph, b: &AugmentedGraph) -> OrderRelation {
    compare_degree_vectors(&a.degree_vector(), &b.degree_vector())
}

pub fn compare_degree_vectors(a: &[u64], b: &[u64]) -> OrderRelation {
    match a.len().cmp(&b.len()).then_with(|| a.cmp(b)) {
        Ordering::Less => OrderRelation::Less,
        Ordering::Greater => OrderRelation::Greater,
        Ordering::Equal => OrderRelation::Equal,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombVertex {
    pub d: u64,
    pub m: u64,
    pub class: HomologyClass,
}

impl CombVertex {
    pub fn constant(rank: usize) -> Self {
        CombVertex {
            d: 0,
            m: 0,
            class: HomologyClass::zero(rank),
        }
    }
}

/// A tree of genus-0 components hanging off the spine at `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tail {
    pub vertices: Vec<CombVertex>,
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
    pub markings: Vec<usize>,
}

impl Tail {
    pub fn single(v: CombVertex) -> Self {
        Tail {
            vertices: vec![v],
            edges: vec![],
            root: 0,
            markings: vec![0],
        }
    }
}

/// Ids: spine 0, carriers 1..=ell, then tail vertices in order. `h_pairs` use these ids.
pub fn build_comb(
    g: u32,
    n: usize,
    ell: usize,
    tails: &[Tail],
    spine: CombVertex,
    h_pairs: &[(VertexId, VertexId)],
) -> Result<AugmentedGraph, AugmentError> {
    if ell > n {
        return Err(AugmentError::ShapeError(format!("ell = {ell} exceeds n = {n}")));
    }
    if tails.len() != ell {
        return Err(AugmentError::ShapeError(format!("{} tails supplied for ell = {ell}", tails.len())));
    }
    let rank = spine.class.rank();
    let mut vertices = vec![Vertex { id: 0, genus: g }];
    let mut deco = vec![Decoration {
        m: spine.m,
        d: spine.d,
        class: spine.class.clone(),
    }];
    let mut edges = Vec::new();
    let mut markings_p = vec![0; n];
    let mut markings_pp = Vec::with_capacity(ell);
    for i in 0..ell {
        let id = 1 + i as VertexId;
        vertices.push(Vertex { id, genus: 0 });
        deco.push(Decoration::constant(rank));
        markings_p[i] = id;
        edges.push((0, id));
    }
    let mut next = 1 + ell as VertexId;
    for (i, tail) in tails.iter().enumerate() {
        if tail.markings.len() != 1 {
            return Err(AugmentError::ShapeError(format!(
                "tail {} carries {} original markings",
                i + 1,
                tail.markings.len()
            )));
        }
        if tail.vertices.is_empty() || tail.root >= tail.vertices.len() || tail.edges.len() + 1 != tail.vertices.len() {
            return Err(AugmentError::ShapeError(format!("tail {} is not a rooted tree", i + 1)));
        }
        let base = next;
        for v in &tail.vertices {
            vertices.push(Vertex { id: next, genus: 0 });
            deco.push(Decoration {
                m: v.m,
                d: v.d,
                class: v.class.clone(),
            });
            next += 1;
        }
        for &(a, b) in &tail.edges {
            if a >= tail.vertices.len() || b >= tail.vertices.len() {
                return Err(AugmentError::ShapeError(format!("tail {} edge out of range", i + 1)));
            }
            edges.push((base + a as VertexId, base + b as VertexId));
        }
        edges.push((1 + i as VertexId, base + tail.root as VertexId));
        markings_pp.push(base + tail.markings[0] as VertexId);
    }
    let graph = PrestableGraph::new(vertices, edges, markings_p, markings_pp);
    if !graph.is_connected() {
        return Err(AugmentError::ShapeError("tails are not trees".to_string()));
    }
    Ok(AugmentedGraph::new(graph, deco, h_pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;
    use proptest::prelude::*;

    fn ctx() -> TargetGeometry {
        TargetGeometry::uniform(3, 1, 1)
    }

    fn b(k: i64) -> HomologyClass {
        HomologyClass::from_i64s(&[k])
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cv(d: u64, m: u64, k: i64) -> CombVertex {
        CombVertex { d, m, class: b(k) }
    }

    fn two_vertex(d0: u64, m0: u64, d1: u64, m1: u64) -> AugmentedGraph {
        let g = PrestableGraph::new(
            vec![Vertex { id: 0, genus: 0 }, Vertex { id: 1, genus: 0 }],
            vec![(0, 1)],
            vec![0, 0],
            vec![],
        );
        let dec = |d: u64, m: u64| Decoration {
            m,
            d,
            class: if d == 0 { b(0) } else { b(1) },
        };
        AugmentedGraph::new(g, vec![dec(d0, m0), dec(d1, m1)], &[])
    }

    #[test]
    fn validate_examples() {
        assert!(validate_augmented(&ctx(), &two_vertex(1, 1, 0, 0)).is_empty());
        let mut g = two_vertex(1, 1, 0, 0);
        g.deco[1] = Decoration { m: 0, d: 1, class: b(1) };
        assert!(validate_augmented(&ctx(), &g).contains(&AugViolation::ZeroEquivalence(1)));
        let mut g = two_vertex(1, 1, 0, 0);
        g.h.insert((0, 1), 0);
        assert!(validate_augmented(&ctx(), &g).contains(&AugViolation::HDomain(0, 1)));
    }

    #[test]
    fn negative_class_is_not_positive() {
        let mut g = two_vertex(1, 1, 0, 0);
        g.deco[0].class = b(-1);
        assert!(validate_augmented(&ctx(), &g).contains(&AugViolation::NotPositive(0)));
    }

    #[test]
    fn h_must_be_transitive_and_class_preserving() {
        let gr = PrestableGraph::new(
            (0..3).map(|id| Vertex { id, genus: 0 }).collect(),
            vec![(0, 1), (1, 2)],
            vec![0],
            vec![],
        );
        let deco = vec![Decoration { m: 1, d: 1, class: b(1) }; 3];
        let g = AugmentedGraph::new(gr.clone(), deco.clone(), &[(0, 1), (1, 2)]);
        assert!(validate_augmented(&ctx(), &g)
            .iter()
            .any(|v| matches!(v, AugViolation::HNotTransitive(..))));
        let mut deco2 = deco;
        deco2[1].class = b(2);
        let g = AugmentedGraph::new(gr, deco2, &[(0, 1)]);
        assert!(validate_augmented(&ctx(), &g).contains(&AugViolation::HClassMismatch(0, 1)));
    }

    #[test]
    fn class_summary_examples() {
        let c = ctx();
        let s = class_summary(&c, &AugmentedGraph::t_gn(0, 1, 1, 1, b(1))).unwrap();
        assert_eq!((s.total.clone(), s.weighted.clone()), (b(1), b(1)));
        let s = class_summary(&c, &AugmentedGraph::t_gn(0, 1, 1, 2, b(1))).unwrap();
        assert_eq!((s.total.clone(), s.weighted.clone()), (b(2), b(2)));
        let mut g = two_vertex(1, 3, 2, 1);
        g.deco[0].class = b(1);
        let s = class_summary(&c, &g).unwrap();
        assert_eq!((s.total, s.weighted), (b(3), b(5)));
    }

    #[test]
    fn fixed_domain_examples() {
        let t = AugmentedGraph::t_gn(2, 4, 1, 1, b(1));
        assert!(check_fixed_domain(&t).is_ok());

        let comb = build_comb(1, 2, 1, &[Tail::single(cv(1, 1, 1))], cv(1, 1, 1), &[]).unwrap();
        let r = check_fixed_domain(&comb);
        assert!(r.is_ok(), "{:?}", r.violations);
        assert_eq!(r.edges, 2);
        assert!(r.edges_at_least_2ell);

        let g = PrestableGraph::new(
            (0..3).map(|id| Vertex { id, genus: 0 }).collect(),
            vec![(0, 1), (1, 2), (1, 2)],
            vec![0],
            vec![],
        );
        let deco = vec![
            Decoration { m: 1, d: 1, class: b(1) },
            Decoration::constant(1),
            Decoration::constant(1),
        ];
        let g = AugmentedGraph::new(g, deco, &[]);
        assert!(check_fixed_domain(&g).violates(FixedDomainClause::ConstantForest));
    }

    #[test]
    fn fixed_domain_reports_marking_and_matching_clauses() {
        let mut comb = build_comb(0, 2, 1, &[Tail::single(cv(1, 1, 1))], cv(1, 1, 1), &[]).unwrap();
        comb.graph.markings_p_prime[0] = 0;
        let r = check_fixed_domain(&comb);
        assert!(r.violates(FixedDomainClause::Markings));
        assert!(r.violates(FixedDomainClause::EdgeMarkingMatch));
    }

    #[test]
    fn order_examples() {
        assert_eq!(compare_degree_vectors(&[1, 2], &[1, 3]), OrderRelation::Less);
        assert_eq!(compare_degree_vectors(&[5, 5], &[0, 0, 0]), OrderRelation::Less);
        assert_eq!(compare_degree_vectors(&[2, 1], &[2, 1]), OrderRelation::Equal);
        assert_eq!(compare_degree_vectors(&[0, 0, 0], &[5, 5]), OrderRelation::Greater);
    }

    #[test]
    fn budget_examples() {
        let c = ctx();
        let t = AugmentedGraph::t_gn(2, 10, 1, 1, b(33));
        let bud = budget(&c, &t, &q(1, 2)).unwrap();
        assert_eq!(bud.k, BigInt::from(0));
        assert!(bud.bound_ok);
        assert!(budget(&c, &t, &q(19, 10)).unwrap().bound_ok);

        let t = AugmentedGraph::t_gn(0, 5, 1, 1, b(12));
        let bud = budget(&c, &t, &q(1, 2)).unwrap();
        assert_eq!(bud.k, BigInt::from(0));
        assert!(bud.bound_ok);

        let t = AugmentedGraph::t_gn(0, 5, 1, 1, b(6));
        let bud = budget(&c, &t, &q(1, 2)).unwrap();
        assert_eq!(bud.k, BigInt::from(6));
        assert!(!bud.bound_ok);
    }

    #[test]
    fn budget_reports_negative_k() {
        let t = AugmentedGraph::t_gn(0, 2, 1, 1, b(10));
        let bud = budget(&ctx(), &t, &q(1, 2)).unwrap();
        assert!(bud.k.is_negative());
        assert!(bud.bound_ok);
    }

    #[test]
    fn comb_examples() {
        let t = build_comb(1, 2, 0, &[], cv(1, 1, 2), &[]).unwrap();
        assert_eq!(t.graph.vertices.len(), 1);
        assert_eq!(t.graph.markings_p, vec![0, 0]);
        assert_eq!(t.deco[0].class, b(2));

        let c = build_comb(0, 3, 1, &[Tail::single(cv(1, 1, 1))], cv(1, 1, 1), &[]).unwrap();
        assert_eq!(c.graph.vertices.len(), 3);
        assert_eq!(c.graph.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(c.graph.markings_p, vec![1, 0, 0]);
        assert_eq!(c.graph.markings_p_prime, vec![2]);

        let tails = [Tail::single(cv(1, 1, 1)), Tail::single(cv(0, 0, 0))];
        let c = build_comb(0, 3, 2, &tails, cv(2, 1, 1), &[]).unwrap();
        // hand count: two carrier edges to the spine, two carrier-to-tail edges
        assert_eq!(c.graph.edges.len(), 4);
        assert!(check_fixed_domain(&c).is_ok());
    }

    #[test]
    fn comb_rejects_tails_with_wrong_marking_count() {
        let mut tail = Tail::single(cv(1, 1, 1));
        tail.markings.clear();
        assert!(matches!(
            build_comb(0, 2, 1, &[tail], cv(1, 1, 1), &[]),
            Err(AugmentError::ShapeError(_))
        ));
    }

    fn arb_tail() -> impl Strategy<Value = Tail> {
        (1usize..4, 0u64..3, 1u64..3, 1i64..3, any::<prop::sample::Index>()).prop_map(|(len, d, m, k, mark)| {
            let vertices: Vec<_> = (0..len)
                .map(|i| if i == 0 && d > 0 { cv(d, m, k) } else { CombVertex::constant(1) })
                .collect();
            Tail {
                edges: (1..len).map(|i| (i - 1, i)).collect(),
                vertices,
                root: 0,
                markings: vec![mark.index(len)],
            }
        })
    }

    proptest! {
        #[test]
        fn comb_is_fixed_domain_and_conserves_weighted_class(
            g in 0u32..3, extra in 0usize..3, tails in prop::collection::vec(arb_tail(), 0..3),
            d0 in 1u64..3, m0 in 1u64..3
        ) {
            let ell = tails.len();
            let spine = cv(d0, m0, 1);
            let comb = build_comb(g, ell + extra, ell, &tails, spine.clone(), &[]).unwrap();
            prop_assert!(validate_augmented(&ctx(), &comb).is_empty());
            let r = check_fixed_domain(&comb);
            prop_assert!(r.is_ok(), "{:?}", r.violations);
            let s = class_summary(&ctx(), &comb).unwrap();
            let mut expected = spine.class.scale_u64(spine.d * spine.m);
            for t in &tails {
                for v in &t.vertices {
                    expected = &expected + &v.class.scale_u64(v.d * v.m);
                }
            }
            prop_assert_eq!(s.weighted, expected);
        }

        #[test]
        fn order_is_a_strict_total_preorder(a in prop::collection::vec(0u64..3, 1..4), b in prop::collection::vec(0u64..3, 1..4), c in prop::collection::vec(0u64..3, 1..4)) {
            use OrderRelation::*;
            let ab = compare_degree_vectors(&a, &b);
            let ba = compare_degree_vectors(&b, &a);
            prop_assert_eq!(ab == Less, ba == Greater);
            prop_assert_eq!(ab == Equal, a == b);
            if ab == Less && compare_degree_vectors(&b, &c) == Less {
                prop_assert_eq!(compare_degree_vectors(&a, &c), Less);
            }
        }
    }
}
