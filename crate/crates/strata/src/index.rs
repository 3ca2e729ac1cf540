//! Complex Fredholm indices of the evaluation maps and Hurwitz-space estimates.

use num::BigInt;
use thiserror::Error;

use crate::augment::{class_summary, AugmentError, AugmentedGraph};
use crate::geom::TargetGeometry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error(transparent)]
    Augment(#[from] AugmentError),
    #[error("infeasible ramification: b = {b}, b_max = {b_max}")]
    InfeasibleRamification { b: i64, b_max: i64 },
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// c1(A) + (r − 3)(1 − g) − |E| + n
pub fn index_pi(r: i64, g: i64, n: i64, c1: &BigInt, edges: i64) -> BigInt {
    c1 + big((r - 3) * (1 - g) - edges + n)
}

/// c1(A) + r(1 − g) − |E| − nr
pub fn index_tau(r: i64, g: i64, n: i64, c1: &BigInt, edges: i64) -> BigInt {
    c1 + big(r * (1 - g) - edges - n * r)
}

/// Dimension of the moduli space of smooth genus-`g` curves with `n` markings.
pub fn dim_mgn(g: i64, n: i64) -> i64 {
    3 * g - 3 + n
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    pub ind_pi: BigInt,
    pub ind_tau: BigInt,
    pub ind_tau_tilde: BigInt,
    pub r: i64,
    pub g: i64,
    pub main_genus: i64,
    pub n: i64,
    pub ell: i64,
    pub edges: i64,
    pub h1: i64,
    pub c1_total: BigInt,
    pub c1_weighted: BigInt,
}

/// Index of the simple-stratum evaluation map, including the forgetful drop
/// by the dimension of the main component's moduli.
pub fn index_tau_tilde(ctx: &TargetGeometry, g: &AugmentedGraph) -> Result<BigInt, IndexError> {
    Ok(index_report(ctx, g)?.ind_tau_tilde)
}

pub fn tau_tilde_raw(r: i64, genus_sum: i64, main_genus: i64, h1: i64, n: i64, ell: i64, edges: i64, c1_total: &BigInt) -> BigInt {
    c1_total + big((r - 3) * (1 - genus_sum - h1) + (n + ell) - edges - n * r - dim_mgn(main_genus, n))
}

pub fn index_report(ctx: &TargetGeometry, g: &AugmentedGraph) -> Result<IndexReport, IndexError> {
    let s = class_summary(ctx, g)?;
    let r = ctx.r;
    let n = g.n() as i64;
    let ell = g.ell() as i64;
    let edges = g.graph.edges.len() as i64;
    let h1 = g.graph.h1();
    let genus = g.graph.genus();
    let genus_sum: i64 = g.graph.vertices.iter().map(|v| v.genus as i64).sum();
    let main_genus = g.main_genus() as i64;
    Ok(IndexReport {
        ind_pi: index_pi(r, genus, n + ell, &s.c1_total, edges),
        ind_tau: index_tau(r, genus, n + ell, &s.c1_total, edges),
        ind_tau_tilde: tau_tilde_raw(r, genus_sum, main_genus, h1, n, ell, edges, &s.c1_total),
        r,
        g: genus,
        main_genus,
        n,
        ell,
        edges,
        h1,
        c1_total: s.c1_total,
        c1_weighted: s.c1_weighted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HurwitzBounds {
    pub d0: i64,
    pub g: i64,
    pub gs: i64,
    pub m: i64,
    pub b: i64,
    pub dim_h: i64,
    pub rank_lb: i64,
    pub slack: i64,
    pub b_max: i64,
    /// slack − 4·d0; the part that must be absorbed by a function of (r, g).
    pub residual: i64,
}

pub fn b_max(d0: i64, g: i64, gs: i64) -> i64 {
    d0 * (2 - 2 * gs) - (2 - 2 * g)
}

pub fn hurwitz_bounds(d0: i64, g: i64, gs: i64, m: i64, b: i64) -> Result<HurwitzBounds, IndexError> {
    let bm = b_max(d0, g, gs);
    if bm < 0 || b > bm || b < 0 {
        return Err(IndexError::InfeasibleRamification { b, b_max: bm });
    }
    let dim_h = 3 * gs - 3 + m + b;
    let rank_lb = (m - b - 3).max(0);
    let slack = dim_h - rank_lb;
    Ok(HurwitzBounds {
        d0,
        g,
        gs,
        m,
        b,
        dim_h,
        rank_lb,
        slack,
        b_max: bm,
        residual: slack - 4 * d0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Composition {
    Stabilization { ind_f: BigInt, dim_u0: i64, dim_u1: i64 },
    FiberProduct { ind_f: BigInt, dim_coker: i64 },
}

pub fn compose_indices(kind: &Composition) -> BigInt {
    match kind {
        Composition::Stabilization { ind_f, dim_u0, dim_u1 } => ind_f + big(dim_u0 - dim_u1),
        Composition::FiberProduct { ind_f, dim_coker } => ind_f + big(*dim_coker),
    }
}
