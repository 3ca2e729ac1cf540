//! Exact affine inequality chains, case dispatch for the induction, and the
//! base-case certificate checkers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use thiserror::Error;

use crate::augment::{budget, class_summary, validate_augmented, AugmentError, AugmentedGraph};
use crate::enumerate::{enum_cover_descriptors, enum_glue_descriptors, EnumError};
use crate::geom::TargetGeometry;
use crate::graph::VertexId;
use crate::index::{b_max, hurwitz_bounds, index_report, IndexError};
use crate::simplify::{
    simplify_connected, simplify_disconnected, DefaultOracle, DescriptorOracle, SimplifyError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("hypothesis mismatch: {0}")]
    HypothesisMismatch(String),
    #[error("unbound parameter {0}")]
    UnboundParameter(Param),
    #[error("no slack value for {0}")]
    MissingSlack(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Augment(#[from] AugmentError),
    #[error(transparent)]
    Simplify(#[from] SimplifyError),
    #[error(transparent)]
    Enumerate(#[from] EnumError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    N,
    K,
    Ell,
    D0,
    M0,
    C1A0,
    C1Weighted,
    C1Total,
    M,
    B,
    Gs,
    E,
    H1,
}

impl Param {
    pub const ALL: [Param; 13] = [
        Param::N,
        Param::K,
        Param::Ell,
        Param::D0,
        Param::M0,
        Param::C1A0,
        Param::C1Weighted,
        Param::C1Total,
        Param::M,
        Param::B,
        Param::Gs,
        Param::E,
        Param::H1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::N => "n",
            Param::K => "k",
            Param::Ell => "ell",
            Param::D0 => "d0",
            Param::M0 => "m0",
            Param::C1A0 => "c1A0",
            Param::C1Weighted => "c1_weighted",
            Param::C1Total => "c1_total",
            Param::M => "m",
            Param::B => "b",
            Param::Gs => "gs",
            Param::E => "E",
            Param::H1 => "h1",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn qb(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResidualSign {
    BoundedAbove,
    BoundedBelow,
}

/// Σ cᵢ·pᵢ + constant + Σ c_R·R, with R a slack-table label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AffineExpr {
    pub terms: BTreeMap<Param, BigRational>,
    pub constant: BigRational,
    pub residuals: BTreeMap<String, BigRational>,
}

impl AffineExpr {
    pub fn zero() -> Self {
        AffineExpr::default()
    }

    pub fn param(p: Param) -> Self {
        AffineExpr::zero().with_term(p, q(1))
    }

    pub fn constant(c: BigRational) -> Self {
        AffineExpr {
            constant: c,
            ..AffineExpr::zero()
        }
    }

    pub fn int(c: i64) -> Self {
        AffineExpr::constant(q(c))
    }

    pub fn residual(label: &str) -> Self {
        let mut e = AffineExpr::zero();
        e.residuals.insert(label.to_string(), q(1));
        e
    }

    pub fn with_term(mut self, p: Param, c: BigRational) -> Self {
        *self.terms.entry(p).or_insert_with(BigRational::zero) += c;
        self.clean()
    }

    pub fn times(mut self, c: &BigRational) -> Self {
        for v in self.terms.values_mut().chain(self.residuals.values_mut()) {
            *v = &*v * c;
        }
        self.constant = &self.constant * c;
        self.clean()
    }

    fn clean(mut self) -> Self {
        self.terms.retain(|_, v| !v.is_zero());
        self.residuals.retain(|_, v| !v.is_zero());
        self
    }

    pub fn params(&self) -> BTreeSet<Param> {
        self.terms.keys().copied().collect()
    }

    pub fn residual_sign(&self, label: &str) -> Option<ResidualSign> {
        self.residuals.get(label).map(|c| {
            if c.is_positive() {
                ResidualSign::BoundedAbove
            } else {
                ResidualSign::BoundedBelow
            }
        })
    }

    /// Value with every parameter and residual substituted.
    pub fn eval(&self, values: &BTreeMap<Param, BigRational>, slack: &BTreeMap<String, BigRational>) -> Result<BigRational, VerifyError> {
        let mut v = self.constant.clone();
        for (p, c) in &self.terms {
            v += c * values.get(p).ok_or(VerifyError::UnboundParameter(*p))?;
        }
        for (l, c) in &self.residuals {
            v += c * slack.get(l).ok_or_else(|| VerifyError::MissingSlack(l.clone()))?;
        }
        Ok(v)
    }
}

impl Add for AffineExpr {
    type Output = AffineExpr;
    fn add(mut self, rhs: AffineExpr) -> AffineExpr {
        for (p, c) in rhs.terms {
            *self.terms.entry(p).or_insert_with(BigRational::zero) += c;
        }
        for (l, c) in rhs.residuals {
            *self.residuals.entry(l).or_insert_with(BigRational::zero) += c;
        }
        self.constant += rhs.constant;
        self.clean()
    }
}

impl Neg for AffineExpr {
    type Output = AffineExpr;
    fn neg(self) -> AffineExpr {
        self.times(&q(-1))
    }
}

impl Sub for AffineExpr {
    type Output = AffineExpr;
    fn sub(self, rhs: AffineExpr) -> AffineExpr {
        self + (-rhs)
    }
}

fn fmt_coef(f: &mut fmt::Formatter<'_>, first: bool, c: &BigRational, name: &str) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
        (true, false) => {}
    }
    if a.is_one() {
        write!(f, "{name}")
    } else {
        write!(f, "{a}*{name}")
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in &self.terms {
            fmt_coef(f, first, c, p.name())?;
            first = false;
        }
        if !self.constant.is_zero() || (self.terms.is_empty() && self.residuals.is_empty()) {
            let c = &self.constant;
            match (first, c.is_negative()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, " - {}", c.abs())?,
                (false, false) => write!(f, " + {c}")?,
            }
            first = false;
        }
        for (l, c) in &self.residuals {
            fmt_coef(f, first, c, l)?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Relation> {
        [Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge]
            .into_iter()
            .find(|r| r.symbol() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Holds,
    Fails,
    NeedsThreshold { param: Param, bound: BigInt },
}

/// Bound parameter values plus at most one free parameter ranging over integers ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    pub values: BTreeMap<Param, BigRational>,
    pub free: Option<Param>,
}

pub fn expr_compare(
    lhs: &AffineExpr,
    rhs: &AffineExpr,
    rel: Relation,
    asg: &Assignment,
    slack: &BTreeMap<String, BigRational>,
) -> Result<Comparison, VerifyError> {
    let diff = match rel {
        Relation::Lt | Relation::Le => lhs.clone() - rhs.clone(),
        Relation::Gt | Relation::Ge => rhs.clone() - lhs.clone(),
    };
    let strict = matches!(rel, Relation::Lt | Relation::Gt);
    let mut slope = BigRational::zero();
    let mut rest = diff.clone();
    if let Some(p) = asg.free {
        if let Some(c) = rest.terms.remove(&p) {
            slope = c;
        }
    }
    let v = rest.eval(&asg.values, slack)?;
    let ok = |x: &BigRational| if strict { x.is_negative() } else { !x.is_positive() };
    let Some(p) = asg.free.filter(|_| !slope.is_zero()) else {
        return Ok(if ok(&v) { Comparison::Holds } else { Comparison::Fails });
    };
    if slope.is_positive() {
        return Ok(Comparison::Fails);
    }
    if ok(&(&slope + &v)) {
        return Ok(Comparison::Holds);
    }
    let ratio = &v / (-&slope);
    let bound = if strict {
        ratio.floor().to_integer() + 1
    } else {
        ratio.ceil().to_integer()
    };
    Ok(Comparison::NeedsThreshold {
        param: p,
        bound: bound.max(BigInt::one()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlackEntry {
    pub default: Option<BigRational>,
    pub by_rg: BTreeMap<(i64, i64), BigRational>,
}

/// Values of the (r, g)-dependent constants absorbed by the inequality chains.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlackTable {
    pub entries: BTreeMap<String, SlackEntry>,
}

impl SlackTable {
    pub fn uniform(values: &[(&str, i64)]) -> Self {
        SlackTable {
            entries: values
                .iter()
                .map(|&(l, v)| {
                    (
                        l.to_string(),
                        SlackEntry {
                            default: Some(q(v)),
                            by_rg: BTreeMap::new(),
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn resolve(&self, r: i64, g: i64) -> BTreeMap<String, BigRational> {
        self.entries
            .iter()
            .filter_map(|(l, e)| e.by_rg.get(&(r, g)).or(e.default.as_ref()).map(|v| (l.clone(), v.clone())))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCaseParams {
    pub epsilon: BigRational,
    pub delta: BigRational,
    pub rho: BigRational,
    pub slack: SlackTable,
}

impl BaseCaseParams {
    pub fn new(epsilon: BigRational, delta: BigRational, rho: BigRational, slack: SlackTable) -> Result<Self, VerifyError> {
        let unit = |x: &BigRational| x.is_positive() && *x < q(1);
        if !unit(&epsilon) || !unit(&delta) {
            return Err(VerifyError::InvalidParams("epsilon and delta must lie in (0, 1)".into()));
        }
        if !rho.is_positive() {
            return Err(VerifyError::InvalidParams("rho must be positive".into()));
        }
        Ok(BaseCaseParams {
            epsilon,
            delta,
            rho,
            slack,
        })
    }

    /// The standing constraints on (ε, δ).
    pub fn checks(&self) -> Vec<(String, bool)> {
        let (e, d) = (&self.epsilon, &self.delta);
        vec![
            ("epsilon + delta > 1".to_string(), e + d > q(1)),
            ("4 delta < epsilon".to_string(), q(4) * d < *e),
            ("epsilon > 4/5".to_string(), *e > BigRational::new(4.into(), 5.into())),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseId {
    Case1,
    Case2a,
    Case2b,
    Case2c,
    Case3,
    BaseIIDiagonal,
    BaseIIIndex,
}

impl CaseId {
    pub fn name(self) -> &'static str {
        match self {
            CaseId::Case1 => "Case1",
            CaseId::Case2a => "Case2a",
            CaseId::Case2b => "Case2b",
            CaseId::Case2c => "Case2c",
            CaseId::Case3 => "Case3",
            CaseId::BaseIIDiagonal => "BaseII-diagonal",
            CaseId::BaseIIIndex => "BaseII-index",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    CodimExceedsK,
    Exceptional,
    /// Lower bounds on free parameters beyond which every chain closes.
    NeedsThreshold(Vec<(Param, BigInt)>),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub lhs: AffineExpr,
    pub rhs: AffineExpr,
    pub relation: Relation,
    pub citation: String,
    pub witness: String,
    pub status: Comparison,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub case: CaseId,
    pub chain: Vec<ChainStep>,
    pub verdict: Verdict,
    pub epsilon: BigRational,
    pub delta: BigRational,
    pub rho: BigRational,
    pub param_checks: Vec<(String, bool)>,
    pub witnesses: usize,
}

impl Certificate {
    pub fn has_failure(&self) -> bool {
        self.chain.iter().any(|s| s.status == Comparison::Fails) || self.verdict == Verdict::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InductionCase {
    CoverNonMain(VertexId),
    GlueNonMain(VertexId, VertexId),
    ContractedMain,
    MainGlue(VertexId),
    MultipleMain,
    SimpleBase,
    ExceptionalMainStratum,
}

impl InductionCase {
    pub fn label(self) -> &'static str {
        match self {
            InductionCase::CoverNonMain(_) => "i",
            InductionCase::GlueNonMain(..) => "ii",
            InductionCase::ContractedMain => "iii",
            InductionCase::MainGlue(_) => "iv",
            InductionCase::MultipleMain => "v",
            InductionCase::SimpleBase => "base",
            InductionCase::ExceptionalMainStratum => "exceptional",
        }
    }
}

pub fn is_exceptional_stratum(g: &AugmentedGraph) -> bool {
    g.graph.vertices.len() == 1 && g.graph.edges.is_empty() && g.ell() == 0 && g.m(g.main()) == 1 && g.d(g.main()) == 1
}

/// First matching case in the fixed list; `None` if nothing matches.
pub fn classify_case_opt(g: &AugmentedGraph) -> Option<InductionCase> {
    use InductionCase::*;
    if is_exceptional_stratum(g) {
        return Some(ExceptionalMainStratum);
    }
    let main = g.main();
    if let Some(&v) = g.order.iter().find(|&&v| v != main && g.d(v) > 1) {
        return Some(CoverNonMain(v));
    }
    let ones = g.h_ones();
    if let Some(&(a, b)) = ones
        .iter()
        .find(|&&(a, b)| a != main && b != main && g.d(a) == 1 && g.d(b) == 1)
    {
        return Some(GlueNonMain(a, b));
    }
    let d0 = g.d(main);
    let rest_ok = g.graph.vertex_ids().into_iter().all(|v| v == main || g.d(v) <= 1);
    if d0 == 0 && ones.is_empty() && rest_ok {
        return Some(ContractedMain);
    }
    if d0 > 0 && ones.len() == 1 && rest_ok {
        let (a, b) = *ones.iter().next().expect("one pair");
        if a == main || b == main {
            return Some(MainGlue(if a == main { b } else { a }));
        }
    }
    if d0 > 1 && ones.is_empty() && rest_ok {
        return Some(MultipleMain);
    }
    if d0 == 1 && ones.is_empty() && rest_ok {
        return Some(SimpleBase);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no induction case matches")]
pub struct NoCaseMatches;

pub fn classify_case(g: &AugmentedGraph) -> Result<InductionCase, NoCaseMatches> {
    classify_case_opt(g).ok_or(NoCaseMatches)
}

/// Numeric data of a stratum as used by the chains.
#[derive(Debug, Clone)]
struct Data {
    r: i64,
    g: i64,
    genus_sum: i64,
    n: i64,
    ell: i64,
    e: i64,
    h1: i64,
    d0: u64,
    m0: u64,
    c1a0: BigInt,
    c1w: BigInt,
    c1t: BigInt,
    k: BigInt,
    all_unit_weights: bool,
}

impl Data {
    fn new(ctx: &TargetGeometry, g: &AugmentedGraph, rho: &BigRational) -> Result<Data, VerifyError> {
        let s = class_summary(ctx, g)?;
        let k = budget(ctx, g, rho)?.k;
        let main = g.main();
        Ok(Data {
            r: ctx.r,
            g: g.main_genus() as i64,
            genus_sum: g.graph.vertices.iter().map(|v| v.genus as i64).sum(),
            n: g.n() as i64,
            ell: g.ell() as i64,
            e: g.graph.edges.len() as i64,
            h1: g.graph.h1(),
            d0: g.d(main),
            m0: g.m(main),
            c1a0: ctx.c1_pairing(g.class(main)).map_err(AugmentError::from)?,
            c1w: s.c1_weighted,
            c1t: s.c1_total,
            k,
            all_unit_weights: g.deco.iter().all(|d| d.d == 0 || d.m == 1),
        })
    }

    fn values(&self) -> BTreeMap<Param, BigRational> {
        BTreeMap::from([
            (Param::N, q(self.n)),
            (Param::K, qb(&self.k)),
            (Param::Ell, q(self.ell)),
            (Param::D0, q(self.d0 as i64)),
            (Param::M0, q(self.m0 as i64)),
            (Param::C1A0, qb(&self.c1a0)),
            (Param::C1Weighted, qb(&self.c1w)),
            (Param::C1Total, qb(&self.c1t)),
            (Param::E, q(self.e)),
            (Param::H1, q(self.h1)),
        ])
    }
}

use AffineExpr as X;

fn p(x: Param) -> X {
    X::param(x)
}

fn c(x: i64) -> X {
    X::int(x)
}

fn cq(x: BigRational) -> X {
    X::constant(x)
}

fn scaled(x: Param, k: BigRational) -> X {
    X::zero().with_term(x, k)
}

struct Chain<'a> {
    steps: Vec<ChainStep>,
    values: BTreeMap<Param, BigRational>,
    slack: &'a BTreeMap<String, BigRational>,
}

impl Chain<'_> {
    fn step(&mut self, lhs: X, rel: Relation, rhs: X, citation: &str, witness: &str, free: Option<Param>) -> Result<Comparison, VerifyError> {
        let mut values = self.values.clone();
        if let Some(f) = free {
            values.remove(&f);
        }
        let status = expr_compare(&lhs, &rhs, rel, &Assignment { values, free }, self.slack)?;
        self.steps.push(ChainStep {
            lhs,
            rhs,
            relation: rel,
            citation: citation.to_string(),
            witness: witness.to_string(),
            status: status.clone(),
        });
        Ok(status)
    }

    /// Tests a branch condition and records it only when it holds.
    fn branch(&mut self, lhs: X, rel: Relation, rhs: X, citation: &str, witness: &str) -> Result<bool, VerifyError> {
        let asg = Assignment {
            values: self.values.clone(),
            free: None,
        };
        let holds = expr_compare(&lhs, &rhs, rel, &asg, self.slack)? == Comparison::Holds;
        if holds {
            self.step(lhs, rel, rhs, citation, witness, None)?;
        }
        Ok(holds)
    }

    fn slack_value(&self, label: &str) -> Result<BigRational, VerifyError> {
        self.slack.get(label).cloned().ok_or_else(|| VerifyError::MissingSlack(label.to_string()))
    }
}

fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut thresholds: BTreeMap<Param, BigInt> = BTreeMap::new();
    let mut any = false;
    for v in verdicts {
        any = true;
        match v {
            Verdict::CodimExceedsK => {}
            Verdict::NeedsThreshold(ts) => {
                for (p, b) in ts {
                    let e = thresholds.entry(p).or_insert_with(|| b.clone());
                    if b > *e {
                        *e = b;
                    }
                }
            }
            other => return other,
        }
    }
    if !any {
        Verdict::Inconclusive
    } else if thresholds.is_empty() {
        Verdict::CodimExceedsK
    } else {
        Verdict::NeedsThreshold(thresholds.into_iter().collect())
    }
}

fn final_verdict(status: &Comparison) -> Verdict {
    match status {
        Comparison::Holds => Verdict::CodimExceedsK,
        Comparison::Fails => Verdict::Inconclusive,
        Comparison::NeedsThreshold { param, bound } => Verdict::NeedsThreshold(vec![(*param, bound.clone())]),
    }
}

/// Σ c1(A) + (r − 3)(1 − g − h1) + (n + ℓ) − |E| − nr − (3g − 3 + n)
fn tau_tilde_expr(d: &Data) -> X {
    let r = d.r;
    p(Param::C1Total) + c((r - 3) * (1 - d.genus_sum)) - scaled(Param::H1, q(r - 3)) + p(Param::N) + p(Param::Ell)
        - p(Param::E)
        - scaled(Param::N, q(r))
        - c(3 * d.g - 3)
        - p(Param::N)
}

fn case1(d: &Data, ch: &mut Chain) -> Result<Verdict, VerifyError> {
    let r = d.r;
    let lhs = tau_tilde_expr(d);
    let mid = p(Param::C1Weighted) + c((r - 3) * (1 - d.g)) - scaled(Param::N, q(r)) - c(3 * (d.g - 1));
    let minus_k = -p(Param::K);
    let s1 = ch.step(lhs.clone(), Relation::Le, mid.clone(), "simple main index", "", None)?;
    let s2 = ch.step(mid, Relation::Le, minus_k.clone(), "class budget", "", None)?;
    if s1 == Comparison::Fails || s2 == Comparison::Fails {
        return Ok(Verdict::Inconclusive);
    }
    if ch.branch(lhs, Relation::Lt, minus_k, "strict inequality", "")? {
        return Ok(Verdict::CodimExceedsK);
    }
    let no_edges = ch.branch(p(Param::E), Relation::Le, c(0), "equality case", "")?;
    let unit = ch.branch(p(Param::M0), Relation::Le, c(1), "equality case", "")?;
    Ok(if no_edges && unit && d.d0 == 1 && d.all_unit_weights {
        Verdict::Exceptional
    } else {
        Verdict::Inconclusive
    })
}

/// Index of the evaluation map after the cover simplification, with |E^s| ≥ |E|.
fn aux_expr(d: &Data) -> X {
    let r = d.r;
    let w = (d.m0 * d.d0) as i64 - 1;
    p(Param::C1Weighted) - scaled(Param::C1A0, q(w)) + c(r - 3) + p(Param::N) + p(Param::Ell)
        - p(Param::E)
        - scaled(Param::N, q(r))
}

/// Hurwitz witnesses grouped by (gs, slack), with the number of (b, m) pairs in each group.
fn hurwitz_groups(d: &Data) -> Vec<(i64, i64, usize)> {
    let mut groups: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let d0 = d.d0 as i64;
    let m_max = (d.n - d.ell).max(0);
    let m_min = if m_max > 0 { 1 } else { 0 };
    for gs in 0..=d.g {
        let bm = b_max(d0, d.g, gs);
        for b in 0..=bm {
            for m in m_min..=m_max {
                if let Ok(h) = hurwitz_bounds(d0, d.g, gs, m, b) {
                    *groups.entry((gs, h.slack)).or_default() += 1;
                }
            }
        }
    }
    groups.into_iter().map(|((gs, s), n)| (gs, s, n)).collect()
}

fn hurw_expr(d: &Data, slack: i64) -> X {
    aux_expr(d) + c(slack) - p(Param::N) - c(3 * d.g - 3)
}

fn case2(d: &Data, params: &BaseCaseParams, ch: &mut Chain) -> Result<(CaseId, Verdict, usize), VerifyError> {
    let (eps, del) = (&params.epsilon, &params.delta);
    let h = X::residual("H");
    let minus_k = -p(Param::K);
    if ch.branch(p(Param::Ell), Relation::Le, scaled(Param::N, eps.clone()), "few markings off the main component", "")? {
        let (v, w) = case2a(d, ch)?;
        return Ok((CaseId::Case2a, v, w));
    }
    ch.branch(p(Param::Ell), Relation::Ge, scaled(Param::N, eps.clone()), "many markings off the main component", "")?;
    if ch.branch(p(Param::D0), Relation::Ge, scaled(Param::N, del.clone()), "high degree main component", "")? {
        let bound = -p(Param::D0) + c(1) + p(Param::N) - p(Param::Ell) - p(Param::K);
        ch.step(aux_expr(d), Relation::Le, bound.clone() + h.clone(), "case-I inequality", "", None)?;
        let lin = scaled(Param::N, q(1) - eps - del) + c(1) - p(Param::K);
        ch.step(bound, Relation::Le, lin.clone(), "epsilon/delta split", "", None)?;
        let last = ch.step(lin + h, Relation::Lt, minus_k, "large n", "", Some(Param::N))?;
        let v = if ch.steps.iter().any(|s| s.status == Comparison::Fails) {
            Verdict::Inconclusive
        } else {
            final_verdict(&last)
        };
        return Ok((CaseId::Case2b, v, 1));
    }
    ch.branch(p(Param::D0), Relation::Le, scaled(Param::N, del.clone()), "low degree main component", "")?;
    let bound = scaled(Param::D0, q(4)) - p(Param::Ell) - p(Param::K);
    let mut witnesses = 0;
    for (gs, slack, count) in hurwitz_groups(d) {
        witnesses += count;
        let label = format!("gs={gs}, hurwitz slack={slack}, {count} (b,m) pairs");
        ch.step(hurw_expr(d, slack), Relation::Le, bound.clone() + h.clone(), "index after Hurwitz", &label, None)?;
    }
    let lin = scaled(Param::N, q(4) * del - eps) - p(Param::K);
    ch.step(bound, Relation::Le, lin.clone(), "epsilon/delta split", "", None)?;
    let last = ch.step(lin + h, Relation::Lt, minus_k, "4 delta < epsilon", "", Some(Param::N))?;
    let v = if witnesses == 0 || ch.steps.iter().any(|s| s.status == Comparison::Fails) {
        Verdict::Inconclusive
    } else {
        final_verdict(&last)
    };
    Ok((CaseId::Case2c, v, witnesses))
}

fn case2a(d: &Data, ch: &mut Chain) -> Result<(Verdict, usize), VerifyError> {
    let r = d.r;
    let h = X::residual("H");
    let minus_k = -p(Param::K);
    let groups = hurwitz_groups(d);
    let mut verdicts = Vec::new();
    let mut witnesses = 0;
    for gs in 0..=d.g {
        let here: Vec<_> = groups.iter().filter(|g| g.0 == gs).collect();
        if here.is_empty() {
            continue;
        }
        let count: usize = here.iter().map(|g| g.2).sum();
        witnesses += count;
        let tag = format!("gs={gs}");
        let dlb = scaled(Param::N, q(r - 1)) - scaled(Param::Ell, q(r - 1)) - c((r - 3) * (1 - gs)) - p(Param::K);
        if ch.branch(p(Param::C1A0), Relation::Lt, dlb.clone(), "degree lower bound fails: diagonal", &tag)? {
            verdicts.push(Verdict::CodimExceedsK);
            continue;
        }
        ch.branch(p(Param::C1A0), Relation::Ge, dlb, "degree lower bound", &tag)?;
        let big_d = X::residual("D");
        let big_l = X::residual("L");
        let high = ch.slack_value("D").map(|dv| q(d.d0 as i64) >= dv)?;
        let (bound, last) = if high {
            ch.branch(p(Param::D0), Relation::Ge, big_d.clone(), "d0 >= D", &tag)?;
            let bound = -p(Param::D0) - p(Param::K);
            let last = (bound.clone() + h.clone(), None);
            (bound, last)
        } else {
            ch.branch(p(Param::D0), Relation::Lt, big_d.clone(), "d0 < D", &tag)?;
            let many = ch.slack_value("L").map(|lv| q(d.ell) > lv)?;
            if many {
                ch.branch(p(Param::Ell), Relation::Gt, big_l.clone(), "ell > L", &tag)?;
                let bound = scaled(Param::D0, q(4)) - p(Param::Ell) - p(Param::K);
                let tail = big_d.times(&q(4)) - big_l - p(Param::K);
                ch.step(bound.clone(), Relation::Le, tail.clone(), "d0 < D and ell > L", &tag, None)?;
                (bound, (tail + h.clone(), None))
            } else {
                ch.branch(p(Param::Ell), Relation::Le, big_l, "ell <= L", &tag)?;
                let bound = -p(Param::C1A0) - p(Param::K);
                (bound.clone(), (bound + h.clone(), Some(Param::C1A0)))
            }
        };
        for (g2, slack, cnt) in &here {
            let label = format!("gs={g2}, hurwitz slack={slack}, {cnt} (b,m) pairs");
            ch.step(hurw_expr(d, *slack), Relation::Le, bound.clone() + h.clone(), "index after Hurwitz", &label, None)?;
        }
        let status = ch.step(last.0, Relation::Lt, minus_k.clone(), "closing estimate", &tag, last.1)?;
        verdicts.push(final_verdict(&status));
    }
    let v = if ch.steps.iter().any(|s| s.status == Comparison::Fails) {
        Verdict::Inconclusive
    } else {
        combine(verdicts)
    };
    Ok((v, witnesses))
}

fn base_i_hypotheses(g: &AugmentedGraph) -> Result<Option<VertexId>, VerifyError> {
    let main = g.main();
    if g.d(main) == 0 {
        return Err(VerifyError::HypothesisMismatch("main vertex has degree 0".into()));
    }
    if g.graph.vertex_ids().into_iter().any(|v| v != main && g.d(v) > 1) {
        return Err(VerifyError::HypothesisMismatch("a non-main vertex has degree above 1".into()));
    }
    let ones = g.h_ones();
    match ones.len() {
        0 => Ok(None),
        1 => {
            let (a, b) = *ones.iter().next().expect("one pair");
            if a == main || b == main {
                Ok(Some(if a == main { b } else { a }))
            } else {
                Err(VerifyError::HypothesisMismatch("same-image pair avoids the main vertex".into()))
            }
        }
        _ => Err(VerifyError::HypothesisMismatch("more than one same-image pair".into())),
    }
}

fn ensure_valid(ctx: &TargetGeometry, g: &AugmentedGraph) -> Result<(), VerifyError> {
    let v = validate_augmented(ctx, g);
    if v.is_empty() {
        Ok(())
    } else {
        Err(AugmentError::InvalidAugmentation(v).into())
    }
}

fn certificate(case: CaseId, chain: Vec<ChainStep>, verdict: Verdict, params: &BaseCaseParams, witnesses: usize) -> Certificate {
    let param_checks = params.checks();
    let verdict = if param_checks.iter().all(|(_, ok)| *ok) {
        verdict
    } else {
        Verdict::Inconclusive
    };
    Certificate {
        case,
        chain,
        verdict,
        epsilon: params.epsilon.clone(),
        delta: params.delta.clone(),
        rho: params.rho.clone(),
        param_checks,
        witnesses,
    }
}

pub fn verify_base_i(ctx: &TargetGeometry, g: &AugmentedGraph, params: &BaseCaseParams) -> Result<Certificate, VerifyError> {
    ensure_valid(ctx, g)?;
    let partner = base_i_hypotheses(g)?;
    let d = Data::new(ctx, g, &params.rho)?;
    let slack = params.slack.resolve(d.r, d.g);
    let mut ch = Chain {
        steps: Vec::new(),
        values: d.values(),
        slack: &slack,
    };
    let main = g.main();
    let (case, verdict, witnesses) = match partner {
        None if d.d0 == 1 => (CaseId::Case1, case1(&d, &mut ch)?, 1),
        None => case2(&d, params, &mut ch)?,
        Some(alpha) => {
            let mut cur = g.clone();
            if d.d0 > 1 {
                let desc = DefaultOracle.cover(&cur, main).ok_or_else(|| VerifyError::HypothesisMismatch("no feasible cover of the main vertex".into()))?;
                cur = simplify_connected(ctx, &cur, &desc)?.result;
            }
            let desc = DefaultOracle.glue(&cur, alpha, main).expect("default glue");
            let glued = simplify_disconnected(ctx, &cur, &desc)?.result;
            let rep = index_report(ctx, &glued)?;
            ch.step(
                cq(qb(&rep.c1_total)),
                Relation::Lt,
                p(Param::C1Total),
                "glue lowers c1",
                &format!("alpha={alpha}"),
                None,
            )?;
            if d.d0 == 1 {
                let gd = Data::new(ctx, &glued, &params.rho)?;
                let mut inner = Chain {
                    steps: Vec::new(),
                    values: gd.values(),
                    slack: &slack,
                };
                let v = case1(&gd, &mut inner)?;
                ch.steps.extend(inner.steps);
                let v = if v == Verdict::Exceptional { Verdict::Inconclusive } else { v };
                (CaseId::Case3, v, 1)
            } else {
                let (_, v, w) = case2(&d, params, &mut ch)?;
                (CaseId::Case3, v, w)
            }
        }
    };
    let verdict = if ch.steps.iter().any(|s| s.status == Comparison::Fails) && verdict != Verdict::Exceptional {
        Verdict::Inconclusive
    } else {
        verdict
    };
    Ok(certificate(case, ch.steps, verdict, params, witnesses))
}

pub fn verify_base_ii(ctx: &TargetGeometry, g: &AugmentedGraph, params: &BaseCaseParams) -> Result<Certificate, VerifyError> {
    ensure_valid(ctx, g)?;
    let main = g.main();
    if g.d(main) != 0 {
        return Err(VerifyError::HypothesisMismatch(format!("main vertex has degree {}", g.d(main))));
    }
    if g.deco.iter().any(|x| x.d > 1) {
        return Err(VerifyError::HypothesisMismatch("a vertex has degree above 1".into()));
    }
    if !g.h_ones().is_empty() {
        return Err(VerifyError::HypothesisMismatch("same-image pairs present".into()));
    }
    let d = Data::new(ctx, g, &params.rho)?;
    let r = d.r;
    let slack = params.slack.resolve(r, d.g);
    let mut ch = Chain {
        steps: Vec::new(),
        values: d.values(),
        slack: &slack,
    };
    let diag = scaled(Param::N, q(r)) - scaled(Param::Ell, q(r)) - c(r);
    if ch.branch(p(Param::K), Relation::Lt, diag.clone(), "union of diagonals", "")? {
        return Ok(certificate(CaseId::BaseIIDiagonal, ch.steps, Verdict::CodimExceedsK, params, 1));
    }
    ch.branch(p(Param::K), Relation::Ge, diag, "diagonal codimension at most k", "")?;
    let out = crate::simplify::simplify_contracted_main(ctx, g)?;
    let es = out.edges as i64;
    let rep = index_report(ctx, &out.result)?;
    let es_expr = c(es);
    ch.step(
        p(Param::N) + scaled(Param::Ell, q(2)) - c(3),
        Relation::Le,
        es_expr.clone(),
        "edges after contraction",
        &format!("|E^s|={es}"),
        None,
    )?;
    let lhs = c((r - 3) * (1 - rep.h1)) + p(Param::N) + p(Param::Ell) + cq(qb(&rep.c1_total)) - es_expr.clone()
        - scaled(Param::N, q(r));
    let rhs = c(r - 3) + p(Param::N) + p(Param::Ell) + p(Param::C1Total) - es_expr - scaled(Param::N, q(r));
    ch.step(lhs, Relation::Le, rhs.clone(), "contracted spine", "", None)?;
    let closing = c(d.g * (r + 1)) - scaled(Param::C1Weighted, BigRational::new(1.into(), r.into())) - p(Param::K);
    ch.step(rhs, Relation::Le, closing.clone() + X::residual("H"), "edge and class budget", "", None)?;
    let last = ch.step(closing + X::residual("H"), Relation::Lt, -p(Param::K), "large c1", "", Some(Param::C1Weighted))?;
    let verdict = if ch.steps.iter().any(|s| s.status == Comparison::Fails) {
        Verdict::Inconclusive
    } else {
        final_verdict(&last)
    };
    Ok(certificate(CaseId::BaseIIIndex, ch.steps, verdict, params, 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductionEntry {
    pub index: usize,
    pub case: Option<InductionCase>,
    pub certificate: Option<Certificate>,
    pub rewrites: usize,
    pub descent_failures: usize,
    pub class_failures: usize,
    pub c1_failures: usize,
    pub constraint_failures: usize,
    pub chain_length: usize,
    pub chain_bound: u64,
    pub base_case: Option<InductionCase>,
    pub error: Option<String>,
}

impl InductionEntry {
    pub fn verdict(&self) -> Option<&Verdict> {
        self.certificate.as_ref().map(|c| &c.verdict)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InductionReport {
    pub entries: Vec<InductionEntry>,
}

impl InductionReport {
    pub fn no_case_matches(&self) -> usize {
        self.entries.iter().filter(|e| e.case.is_none()).count()
    }

    pub fn descent_failures(&self) -> usize {
        self.entries.iter().map(|e| e.descent_failures).sum()
    }

    pub fn rewrites(&self) -> usize {
        self.entries.iter().map(|e| e.rewrites).sum()
    }

    pub fn chain_overruns(&self) -> usize {
        self.entries.iter().filter(|e| e.chain_length as u64 > e.chain_bound).count()
    }

    pub fn exceptional(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| e.verdict() == Some(&Verdict::Exceptional))
            .map(|e| e.index)
            .collect()
    }

    pub fn errors(&self) -> usize {
        self.entries.iter().filter(|e| e.error.is_some()).count()
    }
}

fn default_step(ctx: &TargetGeometry, g: &AugmentedGraph, case: InductionCase) -> Result<AugmentedGraph, VerifyError> {
    Ok(match case {
        InductionCase::CoverNonMain(v) => {
            let desc = DefaultOracle
                .cover(g, v)
                .ok_or_else(|| VerifyError::HypothesisMismatch(format!("no feasible cover of {v}")))?;
            simplify_connected(ctx, g, &desc)?.result
        }
        InductionCase::GlueNonMain(a, b) => {
            let (beta, alpha) = glue_pair(g, a, b);
            simplify_disconnected(ctx, g, &DefaultOracle.glue(g, alpha, beta).expect("default glue"))?.result
        }
        _ => unreachable!("only rewrite cases step"),
    })
}

/// The vertex kept and the vertex removed by the glue in case (ii).
fn glue_pair(g: &AugmentedGraph, a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    let pos = |v| g.order_position(v).expect("ordered");
    if pos(a) < pos(b) {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn induction_entry(ctx: &TargetGeometry, g: &AugmentedGraph, params: &BaseCaseParams, index: usize) -> InductionEntry {
    let mut e = InductionEntry {
        index,
        case: classify_case_opt(g),
        certificate: None,
        rewrites: 0,
        descent_failures: 0,
        class_failures: 0,
        c1_failures: 0,
        constraint_failures: 0,
        chain_length: 0,
        chain_bound: g.sum_degrees() + g.graph.vertices.len() as u64,
        base_case: None,
        error: None,
    };
    if let Err(err) = run_entry(ctx, g, params, &mut e) {
        e.error = Some(err.to_string());
    }
    e
}

fn run_entry(ctx: &TargetGeometry, g: &AugmentedGraph, params: &BaseCaseParams, e: &mut InductionEntry) -> Result<(), VerifyError> {
    ensure_valid(ctx, g)?;
    let Some(case) = e.case else {
        return Ok(());
    };
    let fixed = crate::augment::check_fixed_domain(g).is_ok();
    let mut record = |out: &crate::simplify::SimplifyOutcome| {
        e.rewrites += 1;
        e.descent_failures += !out.descent_check as usize;
        e.class_failures += !out.class_check as usize;
        e.c1_failures += !out.c1_check as usize;
        e.constraint_failures += (fixed && !out.involved_main && !out.constraint_check) as usize;
    };
    match case {
        InductionCase::CoverNonMain(v) => {
            for desc in enum_cover_descriptors(g, v)? {
                record(&simplify_connected(ctx, g, &desc)?);
            }
        }
        InductionCase::GlueNonMain(a, b) => {
            let (beta, alpha) = glue_pair(g, a, b);
            for desc in enum_glue_descriptors(g, alpha, beta)? {
                record(&simplify_disconnected(ctx, g, &desc)?);
            }
        }
        InductionCase::ContractedMain => e.certificate = Some(verify_base_ii(ctx, g, params)?),
        _ => e.certificate = Some(verify_base_i(ctx, g, params)?),
    }
    let mut cur = g.clone();
    let mut now = case;
    while matches!(now, InductionCase::CoverNonMain(_) | InductionCase::GlueNonMain(..)) {
        if e.chain_length as u64 > e.chain_bound {
            break;
        }
        cur = default_step(ctx, &cur, now)?;
        e.chain_length += 1;
        match classify_case_opt(&cur) {
            Some(c) => now = c,
            None => {
                e.case = None;
                return Ok(());
            }
        }
    }
    e.base_case = Some(now);
    Ok(())
}

pub fn run_induction_report(ctx: &TargetGeometry, family: &[AugmentedGraph], params: &BaseCaseParams) -> InductionReport {
    InductionReport {
        entries: family
            .iter()
            .enumerate()
            .map(|(i, g)| induction_entry(ctx, g, params, i))
            .collect(),
    }
}

/// Smallest integer strictly above `x`.
pub fn floor_plus_one(x: &BigRational) -> BigInt {
    x.floor().to_integer() + 1
}

/// Exact integer division rounding toward negative infinity.
pub fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}
