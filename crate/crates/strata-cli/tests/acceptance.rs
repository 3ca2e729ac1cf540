//! Acceptance criteria 1 to 8. Each prints one PASS/FAIL line to stdout.
//!
//! Criteria 2 and 6 fail on measured counterexamples recorded in the
//! decision ledger. They are expected to fail in exactly the documented way:
//! the suite panics if one of them passes, fails differently, or if any
//! other criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Write;
use std::time::{Duration, Instant};

use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use strata::augment::{
    budget, build_comb, check_fixed_domain, AugmentedGraph, CombVertex, Decoration, FixedDomainClause, Tail,
};
use strata::config::{
    arithmetic_genus, destabilizing_measure, find_destabilizing, from_augmented_unchecked, identify_points, stabilize,
    stabilize_step, to_dual_graph, validate_configuration, Component, Configuration, PointRef, SpecialPoint, StabilizationPolicy,
};
use strata::enumerate::{enum_augmented, enum_cover_descriptors, enum_glue_descriptors, EnumBounds};
use strata::geom::{HomologyClass, TargetGeometry};
use strata::graph::{PrestableGraph, Vertex, VertexId};
use strata::index::{index_pi, index_report, index_tau};
use strata::simplify::{
    simplify_connected, simplify_contracted_main, simplify_disconnected, CoverDescriptor, DefaultOracle,
    DescriptorOracle, SimplifyOutcome,
};
use strata::verify::{
    run_induction_report, verify_base_i, verify_base_ii, BaseCaseParams, CaseId, Comparison, Param, SlackTable,
    Verdict,
};
use strata_cli::doc::{parse_document, serialize, Descriptor, Document};

struct Outcome {
    pass: bool,
    detail: String,
    /// For criteria with a recorded counterexample: whether the failure
    /// matches the recorded failure mode.
    documented: Option<bool>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ctx3() -> TargetGeometry {
    TargetGeometry::uniform(3, 1, 1)
}

fn reference_params() -> BaseCaseParams {
    BaseCaseParams::new(q(9, 10), q(2, 10), q(1, 2), SlackTable::uniform(&[("H", 0), ("L", 0), ("D", 0)])).unwrap()
}

fn cv(d: u64, m: u64, k: i64) -> CombVertex {
    CombVertex {
        d,
        m,
        class: HomologyClass::from_i64s(&[k]),
    }
}

fn report(n: u8, o: &Outcome, took: Duration) {
    let status = match (o.pass, o.documented) {
        (true, _) => "PASS",
        (false, Some(true)) => "FAIL (known, see ledger)",
        (false, _) => "FAIL",
    };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {n}: {status} [{:.1}s] {}", took.as_secs_f64(), o.detail);
    let _ = out.flush();
}

fn family_bounds() -> EnumBounds {
    EnumBounds {
        max_vertices: 4,
        max_edges: 4,
        max_degree: 3,
        max_weight: 3,
        n: 2,
        ell: 1,
        g: 0,
        basis_rank: 1,
        max_c1_per_class: 3,
        max_weighted_c1: Some(3),
    }
}

fn induction_bounds(g: u32, ell: usize) -> EnumBounds {
    EnumBounds {
        max_vertices: 3,
        max_edges: 3,
        max_degree: 2,
        max_weight: 2,
        n: 2,
        ell,
        g,
        basis_rank: 1,
        max_c1_per_class: 2,
        max_weighted_c1: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Site {
    Cover(VertexId),
    Glue(VertexId, VertexId),
    Contract,
}

/// Every feasible rewrite of `g` with its site.
fn all_rewrites(ctx: &TargetGeometry, g: &AugmentedGraph) -> (Vec<(Site, SimplifyOutcome)>, Vec<String>) {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for v in g.graph.vertex_ids() {
        if g.d(v) < 2 {
            continue;
        }
        match enum_cover_descriptors(g, v) {
            Ok(ds) => {
                for d in ds {
                    match simplify_connected(ctx, g, &d) {
                        Ok(o) => out.push((Site::Cover(v), o)),
                        Err(e) => errors.push(format!("cover {d:?}: {e}")),
                    }
                }
            }
            Err(e) => errors.push(format!("cover descriptors at {v}: {e}")),
        }
    }
    for (a, b) in g.h_ones() {
        if g.d(a) != 1 || g.d(b) != 1 || g.class(a) != g.class(b) {
            continue;
        }
        for (x, y) in [(a, b), (b, a)] {
            match enum_glue_descriptors(g, x, y) {
                Ok(ds) => {
                    for d in ds {
                        match simplify_disconnected(ctx, g, &d) {
                            Ok(o) => out.push((Site::Glue(x, y), o)),
                            Err(e) => errors.push(format!("glue {d:?}: {e}")),
                        }
                    }
                }
                Err(e) => errors.push(format!("glue descriptors at ({x}, {y}): {e}")),
            }
        }
    }
    if g.d(g.main()) == 0 {
        match simplify_contracted_main(ctx, g) {
            Ok(o) => out.push((Site::Contract, o)),
            Err(e) => errors.push(format!("contract: {e}")),
        }
    }
    (out, errors)
}

#[derive(Default, Clone)]
struct RewriteTally {
    graphs: usize,
    covers: usize,
    glues: usize,
    contracts: usize,
    class_failures: usize,
    c1_failures: usize,
    errors: Vec<String>,
    off_main: usize,
    off_main_broken: usize,
    broken_at_carrier: usize,
    broken_elsewhere: usize,
    clauses: BTreeMap<String, usize>,
}

impl RewriteTally {
    fn merge(mut self, o: RewriteTally) -> RewriteTally {
        self.graphs += o.graphs;
        self.covers += o.covers;
        self.glues += o.glues;
        self.contracts += o.contracts;
        self.class_failures += o.class_failures;
        self.c1_failures += o.c1_failures;
        self.errors.extend(o.errors);
        self.off_main += o.off_main;
        self.off_main_broken += o.off_main_broken;
        self.broken_at_carrier += o.broken_at_carrier;
        self.broken_elsewhere += o.broken_elsewhere;
        for (k, v) in o.clauses {
            *self.clauses.entry(k).or_insert(0) += v;
        }
        self
    }

    fn rewrites(&self) -> usize {
        self.covers + self.glues + self.contracts
    }
}

fn tally(ctx: &TargetGeometry, g: &AugmentedGraph) -> RewriteTally {
    let carriers: BTreeSet<VertexId> = g.graph.markings_p[..g.ell()].iter().copied().collect();
    let (outs, errors) = all_rewrites(ctx, g);
    let mut t = RewriteTally {
        graphs: 1,
        errors,
        ..Default::default()
    };
    for (site, o) in &outs {
        match site {
            Site::Cover(_) => t.covers += 1,
            Site::Glue(..) => t.glues += 1,
            Site::Contract => t.contracts += 1,
        }
        t.class_failures += !o.class_check as usize;
        t.c1_failures += !o.c1_check as usize;
        if o.involved_main {
            continue;
        }
        t.off_main += 1;
        if o.constraint_check {
            continue;
        }
        t.off_main_broken += 1;
        let touches = match *site {
            Site::Cover(v) => carriers.contains(&v),
            Site::Glue(a, b) => carriers.contains(&a) || carriers.contains(&b),
            Site::Contract => false,
        };
        if touches {
            t.broken_at_carrier += 1;
        } else {
            t.broken_elsewhere += 1;
        }
        let clauses: Vec<FixedDomainClause> = check_fixed_domain(&o.result).violations.iter().map(|v| v.clause).collect();
        *t.clauses.entry(format!("{clauses:?}")).or_insert(0) += 1;
    }
    t
}

fn criterion_1(t: &RewriteTally) -> Outcome {
    let pass = t.graphs > 0 && t.class_failures == 0 && t.c1_failures == 0 && t.errors.is_empty();
    Outcome {
        pass,
        detail: format!(
            "{} graphs, {} rewrites ({} cover, {} glue, {} contract), class failures {}, c1 failures {}, errors {}{}",
            t.graphs,
            t.rewrites(),
            t.covers,
            t.glues,
            t.contracts,
            t.class_failures,
            t.c1_failures,
            t.errors.len(),
            t.errors.first().map(|e| format!(" (first: {e})")).unwrap_or_default()
        ),
        documented: None,
    }
}

/// Main-component double cover with both markings in one block.
fn colliding_marking_witness() -> (bool, bool) {
    let t = AugmentedGraph::t_gn(1, 2, 1, 2, HomologyClass::from_i64s(&[1]));
    let desc = CoverDescriptor {
        vertex: 0,
        genus: 0,
        blocks: vec![vec![SpecialPoint::P(0), SpecialPoint::P(1)]],
    };
    let out = simplify_connected(&ctx3(), &t, &desc).unwrap();
    let before = check_fixed_domain(&t).is_ok();
    let breaks = out.involved_main && check_fixed_domain(&out.result).violates(FixedDomainClause::Markings);
    (before, breaks)
}

fn criterion_2(t: &RewriteTally) -> Outcome {
    let (input_ok, witness_breaks) = colliding_marking_witness();
    let pass = t.off_main_broken == 0 && input_ok && witness_breaks;
    let documented = t.off_main_broken > 0 && t.broken_elsewhere == 0 && input_ok && witness_breaks;
    Outcome {
        pass,
        detail: format!(
            "{} off-main rewrites, {} leave the fixed domain ({} at a marking carrier, {} elsewhere; clauses {:?}); main-cover witness breaks Markings: {}",
            t.off_main, t.off_main_broken, t.broken_at_carrier, t.broken_elsewhere, t.clauses, witness_breaks
        ),
        documented: Some(documented),
    }
}

fn weighted_classes(c: &Configuration) -> (Vec<BigInt>, Vec<BigInt>) {
    let rank = c.components.first().map(|x| x.class.rank()).unwrap_or(0);
    let mut total = vec![BigInt::zero(); rank];
    let mut weighted = vec![BigInt::zero(); rank];
    for comp in &c.components {
        for (i, a) in comp.class.coeffs.iter().enumerate() {
            total[i] += a * BigInt::from(comp.d);
            weighted[i] += a * BigInt::from(comp.d) * BigInt::from(comp.m);
        }
    }
    (total, weighted)
}

type Shape = (usize, usize, i64, Vec<BigInt>, Vec<BigInt>);

/// Follows one choice sequence to the end, checking the per-round invariants.
fn finish(c: &Configuration, pick: &mut dyn FnMut(usize, usize) -> (usize, usize)) -> Result<Shape, String> {
    let genus = arithmetic_genus(c).map_err(|e| e.to_string())?;
    let classes = weighted_classes(c);
    let bound = destabilizing_measure(c);
    let mut cur = c.clone();
    let mut rounds = 0;
    while let Some(dp) = find_destabilizing(&cur).first().cloned() {
        if rounds >= bound {
            return Err(format!("exceeded the step bound {bound}"));
        }
        let (a, b) = pick(rounds, cur.elements(&dp).len());
        let before = destabilizing_measure(&cur);
        cur = stabilize_step(&cur, &dp, a, b).map_err(|e| e.to_string())?;
        if destabilizing_measure(&cur) + 1 != before {
            return Err("a round did not lower the measure by one".into());
        }
        rounds += 1;
    }
    if !find_destabilizing(&cur).is_empty() {
        return Err("destabilizing points remain".into());
    }
    let g = arithmetic_genus(&cur).map_err(|e| e.to_string())?;
    if g != genus {
        return Err(format!("genus {genus} became {g}"));
    }
    let cl = weighted_classes(&cur);
    if cl != classes {
        return Err("weighted class changed".into());
    }
    let dual = to_dual_graph(&cur).map_err(|e| e.to_string())?;
    Ok((dual.graph.vertices.len(), dual.graph.edges.len(), g, cl.0, cl.1))
}

fn pairs(len: usize) -> Vec<(usize, usize)> {
    (0..len).flat_map(|a| (0..len).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

/// All choice sequences when there are at most `cap`, else `None`.
fn all_sequences(c: &Configuration, cap: usize) -> Option<Vec<Vec<(usize, usize)>>> {
    fn go(c: &Configuration, prefix: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>, cap: usize) -> bool {
        let Some(dp) = find_destabilizing(c).first().cloned() else {
            out.push(prefix.clone());
            return out.len() <= cap;
        };
        for (a, b) in pairs(c.elements(&dp).len()) {
            let Ok(next) = stabilize_step(c, &dp, a, b) else {
                return false;
            };
            prefix.push((a, b));
            let ok = go(&next, prefix, out, cap);
            prefix.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut out = Vec::new();
    go(c, &mut Vec::new(), &mut out, cap).then_some(out)
}

/// Returns (sequences checked, exhaustive) or a failure description.
fn check_stabilization(c: &Configuration, seed: u64) -> Result<(usize, bool), String> {
    let det = stabilize(c, &StabilizationPolicy::Deterministic).map_err(|e| e.to_string())?;
    let reference = finish(c, &mut |_, _| (0, 1))?;
    let dual = to_dual_graph(&det).map_err(|e| e.to_string())?;
    if (dual.graph.vertices.len(), dual.graph.edges.len()) != (reference.0, reference.1) {
        return Err("deterministic policy disagrees with its own step sequence".into());
    }
    let (seqs, exhaustive) = match all_sequences(c, 24) {
        Some(s) => (s, true),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seqs = Vec::new();
            for _ in 0..24 {
                let mut s = Vec::new();
                finish(c, &mut |_, len| {
                    let ps = pairs(len);
                    let p = ps[rng.gen_range(0..ps.len())];
                    s.push(p);
                    p
                })?;
                seqs.push(s);
            }
            (seqs, false)
        }
    };
    for s in &seqs {
        let shape = finish(c, &mut |i, _| s[i])?;
        if shape != reference {
            return Err(format!("sequence {s:?} gives {shape:?}, deterministic gives {reference:?}"));
        }
        let explicit = stabilize(c, &StabilizationPolicy::Explicit(s.clone())).map_err(|e| e.to_string())?;
        if !find_destabilizing(&explicit).is_empty() {
            return Err("explicit policy left destabilizing points".into());
        }
    }
    Ok((seqs.len(), exhaustive))
}

/// The configuration with decorations erased; stabilization only reads incidence data.
fn shape_key(c: &Configuration) -> Configuration {
    let mut k = c.clone();
    for comp in &mut k.components {
        comp.m = 0;
        comp.d = 0;
        comp.class = HomologyClass::zero(comp.class.rank());
    }
    k.h.clear();
    k
}

fn junction_ok(c: &Configuration) -> bool {
    if c.junctions.iter().any(|j| j.len() > 5) {
        return false;
    }
    let mut mult: BTreeMap<PointRef, usize> = BTreeMap::new();
    for p in c.markings_p.iter().chain(&c.markings_p_prime) {
        *mult.entry(*p).or_insert(0) += 1;
    }
    mult.values().all(|&m| m <= 3)
}

/// The configuration of `g` plus every identification of two, or all, special points on one component.
fn derived_configurations(g: &AugmentedGraph) -> Vec<Configuration> {
    let (base, _) = from_augmented_unchecked(g);
    let mut out = vec![base.clone()];
    for comp in &base.components {
        let pts: Vec<PointRef> = comp.points.iter().map(|&p| PointRef::new(comp.id, p)).collect();
        if pts.len() < 2 {
            continue;
        }
        let mut groups: Vec<Vec<PointRef>> = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                groups.push(vec![pts[i], pts[j]]);
            }
        }
        if pts.len() > 2 {
            groups.push(pts.clone());
        }
        for grp in groups {
            let map: BTreeMap<PointRef, PointRef> = grp[1..].iter().map(|&p| (p, grp[0])).collect();
            let c = identify_points(&base, &map);
            if validate_configuration(&c).is_empty() && junction_ok(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// Junctions of 2 to 5 branches with up to 3 markings at the junction and at a smooth point.
fn synthetic_configurations() -> Vec<Configuration> {
    let mut out = Vec::new();
    for size in 2..=5u32 {
        for genus in 0..=1u32 {
            for at_node in 0..=3usize {
                for smooth in 0..=3usize {
                    for looped in [false, true] {
                        let mut comps: Vec<Component> = (0..size)
                            .map(|i| Component {
                                id: i,
                                genus: if i == 0 { genus } else { 0 },
                                m: 1 + (i as u64 % 2),
                                d: 1,
                                class: HomologyClass::from_i64s(&[1 + i as i64]),
                                points: vec![0],
                            })
                            .collect();
                        let mut junctions = vec![(0..size).map(|i| PointRef::new(i, 0)).collect::<Vec<_>>()];
                        comps[0].points.push(1);
                        if looped {
                            comps[0].points.push(2);
                            comps[1].points.push(1);
                            junctions.push(vec![PointRef::new(0, 2), PointRef::new(1, 1)]);
                        }
                        let mut markings_p = vec![PointRef::new(0, 0); at_node];
                        markings_p.extend(vec![PointRef::new(0, 1); smooth]);
                        let mut c = Configuration {
                            components: comps,
                            junctions,
                            markings_p,
                            markings_p_prime: vec![],
                            order: (0..size).collect(),
                            h: BTreeSet::new(),
                        };
                        c.normalize();
                        if validate_configuration(&c).is_empty() && junction_ok(&c) {
                            out.push(c);
                        }
                    }
                }
            }
        }
    }
    out
}

fn criterion_3(family: &[AugmentedGraph]) -> Outcome {
    let derived: Vec<Configuration> = family.par_iter().flat_map_iter(derived_configurations).collect();
    let total = derived.len();
    let mut seen = HashSet::new();
    let mut configs: Vec<Configuration> = derived.into_iter().filter(|c| seen.insert(shape_key(c))).collect();
    configs.extend(synthetic_configurations());
    let results: Vec<Result<(usize, bool), String>> =
        configs.par_iter().enumerate().map(|(i, c)| check_stabilization(c, i as u64)).collect();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let sequences: usize = results.iter().filter_map(|r| r.as_ref().ok()).map(|r| r.0).sum();
    let exhaustive = results.iter().filter(|r| matches!(r, Ok((_, true)))).count();
    let nontrivial = configs.iter().filter(|c| !find_destabilizing(c).is_empty()).count();
    Outcome {
        pass: failures.is_empty() && nontrivial > 0,
        detail: format!(
            "{} derived configurations, {} distinct shapes checked with synthetic junctions ({} destabilized), {} choice sequences, {} exhausted, failures {}{}",
            total,
            configs.len(),
            nontrivial,
            sequences,
            exhaustive,
            failures.len(),
            failures.first().map(|e| format!(" (first: {e})")).unwrap_or_default()
        ),
        documented: None,
    }
}

fn twin_tail_comb(g: u32) -> AugmentedGraph {
    let tails = [Tail::single(cv(1, 1, 1)), Tail::single(cv(1, 1, 1))];
    build_comb(g, 2, 2, &tails, cv(1, 1, 1), &[(3, 4)]).unwrap()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut points = 0;
    let mut mismatches = Vec::new();
    for r in 3..=6i64 {
        let ctx = TargetGeometry::uniform(r, 1, 1);
        for g in 0..=3i64 {
            for n in 1..=20i64 {
                for k in 0..=5i64 {
                    points += 1;
                    let c1 = r * (n + g - 1) - k;
                    let cb = BigInt::from(c1);
                    // oracle: c1 + r(1 - g) - nr, with the class budget substituted
                    let oracle_tau = c1 + r * (1 - g) - n * r;
                    let tau = index_tau(r, g, n, &cb, 0);
                    let pi = index_pi(r, g, n, &cb, 0);
                    if tau != BigInt::from(-k) || tau != BigInt::from(oracle_tau) {
                        mismatches.push(format!("tau at r={r} g={g} n={n} k={k}: {tau}"));
                    }
                    if &pi - &tau != BigInt::from((3 * g - 3 + n) + r * n) {
                        mismatches.push(format!("pi - tau at r={r} g={g} n={n} k={k}"));
                    }
                    if c1 >= 1 {
                        let t = AugmentedGraph::t_gn(g as u32, n as usize, 1, 1, HomologyClass::from_i64s(&[c1]));
                        let rep = index_report(&ctx, &t).unwrap();
                        let b = budget(&ctx, &t, &q(1, 2)).unwrap();
                        if rep.ind_tau != BigInt::from(-k) || b.k != BigInt::from(k) || &rep.ind_pi - &rep.ind_tau != &pi - &tau {
                            mismatches.push(format!("report at r={r} g={g} n={n} k={k}"));
                        }
                    }
                }
            }
        }
    }
    let mut genera = Vec::new();
    for g in 0..=3u32 {
        let comb = twin_tail_comb(g);
        let desc = DefaultOracle.glue(&comb, 4, 3).unwrap();
        let out = simplify_disconnected(&ctx3(), &comb, &desc).unwrap();
        let genus = arithmetic_genus(&from_augmented_unchecked(&out.result).0).unwrap();
        genera.push(genus);
        if genus != g as i64 + 1 {
            mismatches.push(format!("twin-tail glue at g={g} has genus {genus}"));
        }
    }
    let took = start.elapsed();
    Outcome {
        pass: mismatches.is_empty() && took < Duration::from_secs(1),
        detail: format!(
            "{points} grid points, twin-tail genera {genera:?} for g = 0..3, mismatches {}, {:.3}s (limit 1s){}",
            mismatches.len(),
            took.as_secs_f64(),
            mismatches.first().map(|e| format!(" (first: {e})")).unwrap_or_default()
        ),
        documented: None,
    }
}

/// Small rooted tails: single components and two-component chains with the marking at either end.
fn tail_menu() -> Vec<Tail> {
    let mut out = vec![
        Tail::single(cv(1, 1, 1)),
        Tail::single(cv(2, 1, 1)),
        Tail::single(cv(1, 2, 1)),
        Tail::single(cv(1, 1, 2)),
    ];
    for marked in 0..2 {
        out.push(Tail {
            vertices: vec![cv(1, 1, 1), cv(1, 1, 1)],
            edges: vec![(0, 1)],
            root: 0,
            markings: vec![marked],
        });
    }
    out.push(Tail {
        vertices: vec![CombVertex::constant(1), cv(1, 1, 1), cv(1, 1, 1)],
        edges: vec![(0, 1), (0, 2)],
        root: 0,
        markings: vec![0],
    });
    out
}

fn multisets(k: usize, items: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(k - 1, items) {
        let lo = rest.last().copied().unwrap_or(0);
        for i in lo..items {
            let mut v = rest.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

fn contracted_main_inputs() -> Vec<AugmentedGraph> {
    let menu = tail_menu();
    let mut out = Vec::new();
    for n in 1..=6usize {
        for ell in 0..=n {
            for g in 0..=1u32 {
                for pick in multisets(ell, menu.len()) {
                    let tails: Vec<Tail> = pick.iter().map(|&i| menu[i].clone()).collect();
                    if let Ok(a) = build_comb(g, n, ell, &tails, CombVertex::constant(1), &[]) {
                        out.push(a);
                    }
                }
            }
        }
    }
    out
}

fn criterion_5(extra: &[AugmentedGraph]) -> Outcome {
    let ctx = ctx3();
    let mut inputs = contracted_main_inputs();
    inputs.extend(extra.iter().filter(|g| g.d(g.main()) == 0 && g.n() <= 6).cloned());
    let results: Vec<Result<bool, String>> = inputs
        .par_iter()
        .map(|g| {
            let out = simplify_contracted_main(&ctx, g).map_err(|e| e.to_string())?;
            let bound = g.n() as i64 + 2 * g.ell() as i64 - 3;
            Ok(out.edges as i64 >= bound && out.result.graph.edges.len() == out.edges)
        })
        .collect();
    let errors = results.iter().filter(|r| r.is_err()).count();
    let violations = results.iter().filter(|r| matches!(r, Ok(false))).count();
    let max_ell = inputs.iter().map(|g| g.ell()).max().unwrap_or(0);
    Outcome {
        pass: errors == 0 && violations == 0 && !inputs.is_empty(),
        detail: format!(
            "{} contracted-main inputs (n <= 6, ell up to {max_ell}), edge-bound violations {violations}, errors {errors}",
            inputs.len()
        ),
        documented: None,
    }
}

fn is_t_gn_stratum(g: &AugmentedGraph) -> bool {
    g.graph.vertices.len() == 1 && g.graph.edges.is_empty() && g.ell() == 0 && g.m(g.main()) == 1 && g.d(g.main()) == 1
}

fn criterion_6() -> Outcome {
    let ctx = ctx3();
    let params = reference_params();
    let mut sizes = Vec::new();
    let (mut ncm, mut descent, mut rewrites, mut overruns, mut errors, mut exceptional, mut wrong_tags, mut missed) =
        (0, 0, 0, 0, 0, 0, 0, 0);
    let mut inconclusive = 0;
    for (g, ell) in [(0, 1), (1, 1), (0, 0), (1, 0)] {
        let family = enum_augmented(&ctx, &induction_bounds(g, ell), true).unwrap();
        let rep = run_induction_report(&ctx, &family, &params);
        sizes.push(format!("g={g} ell={ell}: {}", family.len()));
        ncm += rep.no_case_matches();
        descent += rep.descent_failures();
        rewrites += rep.rewrites();
        overruns += rep.chain_overruns();
        errors += rep.errors();
        let tagged: BTreeSet<usize> = rep.exceptional().into_iter().collect();
        exceptional += tagged.len();
        for (i, a) in family.iter().enumerate() {
            match (tagged.contains(&i), is_t_gn_stratum(a)) {
                (true, false) => wrong_tags += 1,
                (false, true) => missed += 1,
                _ => {}
            }
        }
        inconclusive += rep
            .entries
            .iter()
            .filter(|e| e.verdict() == Some(&Verdict::Inconclusive))
            .count();
    }
    let rest_ok = ncm == 0 && overruns == 0 && errors == 0 && wrong_tags == 0 && missed == 0 && exceptional > 0;
    Outcome {
        pass: rest_ok && descent == 0,
        detail: format!(
            "families [{}], NoCaseMatches {ncm}, descent failures {descent} of {rewrites} rewrites, chain overruns {overruns}, errors {errors}, exceptional {exceptional} (misplaced {wrong_tags}, missed {missed}), inconclusive {inconclusive}",
            sizes.join(", ")
        ),
        documented: Some(rest_ok && descent > 0),
    }
}

fn comb_n(n: usize, d0: u64) -> AugmentedGraph {
    let tails: Vec<Tail> = (0..n - 1).map(|_| Tail::single(cv(1, 1, 1))).collect();
    build_comb(0, n, n - 1, &tails, cv(d0, 1, 1), &[]).unwrap()
}

fn criterion_7() -> Outcome {
    let ctx = ctx3();
    let params = reference_params();
    let mut notes = Vec::new();
    let mut ok = true;
    let checks = params.checks();
    ok &= checks.iter().all(|(_, c)| *c);
    notes.push(format!(
        "checks {}",
        checks.iter().map(|(n, c)| format!("{n}: {c}")).collect::<Vec<_>>().join("; ")
    ));

    let mut c2 = 0;
    for n in 2..=20 {
        let cert = verify_base_i(&ctx, &comb_n(n, 2), &params).unwrap();
        if cert.case == CaseId::Case2c {
            c2 += 1;
            ok &= cert.verdict == Verdict::CodimExceedsK && cert.chain.iter().all(|s| s.status == Comparison::Holds);
        }
    }
    ok &= c2 > 0;
    notes.push(format!("Case2c CodimExceedsK on {c2} grid points"));

    let mut thresholds = Vec::new();
    for d0 in [6u64, 8, 10] {
        let cert = verify_base_i(&ctx, &comb_n(20, d0), &params).unwrap();
        // oracle: n(1 - eps - delta) + 1 < 0 first holds at this n
        let oracle = (1..).find(|&n: &i64| q(n, 1) * (q(1, 1) - q(9, 10) - q(2, 10)) + q(1, 1) < q(0, 1)).unwrap();
        let expected = Verdict::NeedsThreshold(vec![(Param::N, BigInt::from(oracle))]);
        ok &= cert.case == CaseId::Case2b && cert.verdict == expected;
        thresholds.push(format!("{:?}", cert.verdict));
    }
    notes.push(format!("Case2b {}", thresholds.join(", ")));

    let diag = {
        let g = PrestableGraph::new(
            vec![Vertex { id: 0, genus: 0 }, Vertex { id: 1, genus: 0 }],
            vec![(0, 1)],
            vec![0; 10],
            vec![],
        );
        let deco = vec![
            Decoration::constant(1),
            Decoration {
                m: 1,
                d: 1,
                class: HomologyClass::from_i64s(&[27]),
            },
        ];
        AugmentedGraph::new(g, deco, &[])
    };
    let h1 = BaseCaseParams::new(q(9, 10), q(2, 10), q(1, 2), SlackTable::uniform(&[("H", 1), ("L", 0), ("D", 0)])).unwrap();
    let cd = verify_base_ii(&ctx, &diag, &h1).unwrap();
    ok &= cd.case == CaseId::BaseIIDiagonal && cd.verdict == Verdict::CodimExceedsK;
    let tails: Vec<Tail> = (0..9).map(|_| Tail::single(cv(1, 1, 3))).collect();
    let star = build_comb(0, 10, 9, &tails, CombVertex::constant(1), &[]).unwrap();
    let ci = verify_base_ii(&ctx, &star, &h1).unwrap();
    // oracle: smallest c1 with -c1/3 + 1 < 0
    let oracle = (1..).find(|&c: &i64| q(-c, 3) + BigRational::one() < BigRational::zero()).unwrap();
    ok &= ci.case == CaseId::BaseIIIndex
        && ci.verdict == Verdict::NeedsThreshold(vec![(Param::C1Weighted, BigInt::from(oracle))]);
    notes.push(format!("BaseII {:?}/{:?}, {:?}/{:?}", cd.case, cd.verdict, ci.case, ci.verdict));
    Outcome {
        pass: ok,
        detail: notes.join(" | "),
        documented: None,
    }
}

fn random_context(rng: &mut ChaCha8Rng, rank: usize) -> TargetGeometry {
    let labels = (0..rank).map(|i| format!("b{i}")).collect();
    let c1 = (0..rank)
        .map(|_| {
            if rng.gen_bool(0.2) {
                BigInt::from(rng.gen_range(1..1000u64)) * BigInt::from(10u64).pow(30)
            } else {
                BigInt::from(rng.gen_range(1..6i64))
            }
        })
        .collect();
    let omega = (0..rank).map(|_| q(rng.gen_range(1..50), rng.gen_range(1..20))).collect();
    let gens = (0..rank).map(|i| HomologyClass::basis(rank, i)).collect();
    TargetGeometry::new(rng.gen_range(3..8), labels, c1, omega, gens).unwrap()
}

fn lift(g: &AugmentedGraph, rank: usize, rng: &mut ChaCha8Rng) -> AugmentedGraph {
    let mut out = g.clone();
    for d in &mut out.deco {
        if d.d > 0 {
            let mut coeffs: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..4)).collect();
            coeffs[0] = coeffs[0].max(1);
            d.class = HomologyClass::from_i64s(&coeffs);
        } else {
            d.class = HomologyClass::zero(rank);
        }
    }
    out
}

fn random_document(rng: &mut ChaCha8Rng, pool: &[AugmentedGraph]) -> Document {
    let rank = rng.gen_range(1..=3);
    let ctx = random_context(rng, rank);
    let a = lift(&pool[rng.gen_range(0..pool.len())], rank, rng);
    let mut doc = Document::with_augmented(ctx, a.clone());
    match rng.gen_range(0..4) {
        0 => doc.augmentation = None,
        1 => {
            let (mut c, _) = from_augmented_unchecked(&a);
            if let Some(comp) = c.components.iter().find(|x| x.points.len() >= 2).cloned() {
                let map = BTreeMap::from([(PointRef::new(comp.id, comp.points[1]), PointRef::new(comp.id, comp.points[0]))]);
                c = identify_points(&c, &map);
            }
            doc.configuration = Some(c);
        }
        _ => {}
    }
    let covers: Vec<_> = a
        .graph
        .vertex_ids()
        .into_iter()
        .filter(|&v| a.d(v) >= 2)
        .flat_map(|v| enum_cover_descriptors(&a, v).unwrap_or_default())
        .collect();
    let glues: Vec<_> = a
        .h_ones()
        .into_iter()
        .flat_map(|(x, y)| enum_glue_descriptors(&a, x, y).unwrap_or_default())
        .collect();
    if rng.gen_bool(0.5) && !covers.is_empty() {
        doc.descriptor = Some(Descriptor::Cover(covers[rng.gen_range(0..covers.len())].clone()));
    } else if !glues.is_empty() {
        doc.descriptor = Some(Descriptor::Glue(glues[rng.gen_range(0..glues.len())].clone()));
    }
    doc
}

fn criterion_8(pool: &[AugmentedGraph]) -> Outcome {
    let make = || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        (0..100).map(|_| random_document(&mut rng, pool)).collect::<Vec<_>>()
    };
    let docs = make();
    let mut failures = Vec::new();
    for (i, d) in docs.iter().enumerate() {
        let text = serialize(d);
        match parse_document(&text) {
            Ok(back) if &back == d => {
                if serialize(&back) != text {
                    failures.push(format!("doc {i}: reserialization differs"));
                }
            }
            Ok(_) => failures.push(format!("doc {i}: parse differs")),
            Err(e) => failures.push(format!("doc {i}: {e}")),
        }
    }
    let first: Vec<String> = docs.iter().map(serialize).collect();
    let second: Vec<String> = make().iter().map(serialize).collect();
    let stable = first == second;
    let with_desc = docs.iter().filter(|d| d.descriptor.is_some()).count();
    let with_conf = docs.iter().filter(|d| d.configuration.is_some()).count();
    Outcome {
        pass: failures.is_empty() && stable,
        detail: format!(
            "100 documents ({with_desc} with descriptors, {with_conf} with configurations), round-trip failures {}, byte-stable {stable}{}",
            failures.len(),
            failures.first().map(|e| format!(" (first: {e})")).unwrap_or_default()
        ),
        documented: None,
    }
}

#[test]
fn acceptance() {
    let ctx = ctx3();
    let t0 = Instant::now();
    let family = enum_augmented(&ctx, &family_bounds(), true).unwrap();
    let t = family
        .par_iter()
        .map(|g| tally(&ctx, g))
        .reduce(RewriteTally::default, RewriteTally::merge);
    let shared = t0.elapsed();

    let mut results: Vec<(u8, Outcome)> = Vec::new();
    let mut timed = |n: u8, f: &mut dyn FnMut() -> Outcome, extra: Duration| {
        let s = Instant::now();
        let o = f();
        report(n, &o, s.elapsed() + extra);
        results.push((n, o));
    };
    timed(1, &mut || criterion_1(&t), shared);
    timed(2, &mut || criterion_2(&t), Duration::ZERO);
    timed(3, &mut || criterion_3(&family), Duration::ZERO);
    timed(4, &mut criterion_4, Duration::ZERO);
    timed(5, &mut || criterion_5(&family), Duration::ZERO);
    timed(6, &mut criterion_6, Duration::ZERO);
    timed(7, &mut criterion_7, Duration::ZERO);
    let pool = enum_augmented(&ctx, &induction_bounds(0, 1), true).unwrap();
    timed(8, &mut || criterion_8(&pool), Duration::ZERO);

    let unexpected: Vec<String> = results
        .iter()
        .filter(|(_, o)| match o.documented {
            None => !o.pass,
            Some(matches) => o.pass || !matches,
        })
        .map(|(n, o)| format!("criterion {n}: {}", o.detail))
        .collect();
    assert!(unexpected.is_empty(), "unexpected outcomes:\n{}", unexpected.join("\n"));
}
