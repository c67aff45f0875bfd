//! Realizations of a given mass-action vector field.
//!
//! A target is a map from source monomials to nonzero net vectors. A
//! realization on a vertex pool is a mass-action system whose vertices lie in
//! the pool and whose net vectors equal the target.
//!
//! Searches:
//! * weakly reversible and consistent: the largest admissible edge set is a
//!   greatest fixpoint of two monotone pruning steps, so no subset
//!   enumeration is needed;
//! * conservative: one candidate edge set per face of the arrangement that
//!   contains a positive vector orthogonal to the net vectors;
//! * endotactic and strongly endotactic: per-source edge sets are
//!   enumerated, summarised by which atlas directions they move up or down,
//!   Pareto-pruned and combined by backtracking.

mod support;

pub use support::Support;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use self::support::{densify, edge_count, edges_of, strict_rates};
use crate::endotactic::{
    atlas_from_generators, decide, AtlasConfig, AtlasError, EndotacticVerdict, Strength,
};
use crate::equivalence::{compare_net_vectors, net_vectors, NetVectorMap};
use crate::exact::{
    lp_feasible, stiemke_alternative, FeasibilityCertificate, LpProblem, Rat, RatMat, RatVec,
    VarKind,
};
use crate::network::{
    deficiency, is_conservative, is_weakly_reversible, strong_components, MassActionSystem,
    ReactionNetwork, SpeciesContext,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizationError {
    #[error("species contexts differ")]
    ContextMismatch,
    #[error("net vector at [{0}] is zero")]
    ZeroNetVector(String),
    #[error("vector [{0}] has the wrong dimension")]
    Dimension(String),
    #[error("vertex pool is missing source [{0}]")]
    PoolMissingSource(String),
    #[error("target has no sources")]
    EmptyTarget,
    #[error("{edges} candidate edges exceed the cap of {cap}")]
    DenseEdgeCap { edges: usize, cap: usize },
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl RealizationError {
    /// Whether the error comes from a size cap rather than from the input.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            RealizationError::DenseEdgeCap { .. }
                | RealizationError::Atlas(
                    AtlasError::DimensionCap { .. } | AtlasError::CellCap { .. }
                )
        )
    }
}

/// A vector field given by its nonzero net vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetDynamics {
    context: SpeciesContext,
    map: NetVectorMap,
}

impl TargetDynamics {
    pub fn new(context: SpeciesContext, map: NetVectorMap) -> Result<Self, RealizationError> {
        let n = context.dim();
        for (y, w) in map.entries() {
            if y.dim() != n || w.dim() != n {
                return Err(RealizationError::Dimension(y.to_string()));
            }
            if w.is_zero() {
                return Err(RealizationError::ZeroNetVector(y.to_string()));
            }
        }
        Ok(TargetDynamics {
            context,
            map: NetVectorMap::new(n, map.entries().clone()),
        })
    }

    pub fn from_system(sys: &MassActionSystem) -> Self {
        TargetDynamics {
            context: sys.context().clone(),
            map: net_vectors(sys).comparison(),
        }
    }

    pub fn context(&self) -> &SpeciesContext {
        &self.context
    }

    pub fn map(&self) -> &NetVectorMap {
        &self.map
    }

    pub fn sources(&self) -> Vec<RatVec> {
        self.map.entries().keys().cloned().collect()
    }

    /// Whether `sys` generates exactly this vector field.
    pub fn is_realized_by(&self, sys: &MassActionSystem) -> bool {
        sys.context() == &self.context
            && compare_net_vectors(&net_vectors(sys), &self.map).equivalent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    WeaklyReversible,
    Endotactic,
    StronglyEndotactic,
    Consistent,
    Conservative,
    None,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::WeaklyReversible,
        Property::Endotactic,
        Property::StronglyEndotactic,
        Property::Consistent,
        Property::Conservative,
        Property::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::WeaklyReversible => "weakly-reversible",
            Property::Endotactic => "endotactic",
            Property::StronglyEndotactic => "strongly-endotactic",
            Property::Consistent => "consistent",
            Property::Conservative => "conservative",
            Property::None => "none",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.to_ascii_lowercase().replace('_', "-");
        Property::ALL
            .into_iter()
            .find(|p| p.name() == t)
            .or(match t.as_str() {
                "wr" => Some(Property::WeaklyReversible),
                "se" => Some(Property::StronglyEndotactic),
                _ => None,
            })
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Candidate-edge cap for the enumerating searches.
    pub max_dense_edges: usize,
    pub atlas: AtlasConfig,
    /// Lets pool vertices outside the target act as sources with zero net
    /// vector. Only honoured when no property is requested.
    pub allow_ghost_sources: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_dense_edges: 14,
            atlas: AtlasConfig::default(),
            allow_ghost_sources: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationQuery {
    pub target: TargetDynamics,
    pub property: Property,
    pub pool: Vec<RatVec>,
    pub config: SearchConfig,
}

impl RealizationQuery {
    /// Query over exactly the target's sources.
    pub fn new(target: TargetDynamics, property: Property) -> Self {
        let pool = target.sources();
        RealizationQuery {
            target,
            property,
            pool,
            config: SearchConfig::default(),
        }
    }

    pub fn with_pool(mut self, pool: Vec<RatVec>) -> Self {
        self.pool = pool;
        self
    }

    pub fn with_config(mut self, config: SearchConfig) -> Self {
        self.config = config;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyCertificate {
    None,
    WeaklyReversible,
    Endotactic(EndotacticVerdict),
    StronglyEndotactic(EndotacticVerdict),
    /// Positive weights on the reaction vectors summing to zero.
    Consistent(FeasibilityCertificate),
    /// Positive vector orthogonal to every reaction vector.
    Conservative(RatVec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationResult {
    pub found: bool,
    pub system: Option<MassActionSystem>,
    pub certificate: Option<PropertyCertificate>,
    /// For rate fitting on a fixed network: the separator of the rate LP.
    pub infeasibility: Option<FeasibilityCertificate>,
}

impl RealizationResult {
    fn found(system: MassActionSystem, certificate: PropertyCertificate) -> Self {
        RealizationResult {
            found: true,
            system: Some(system),
            certificate: Some(certificate),
            infeasibility: None,
        }
    }

    fn not_found() -> Self {
        RealizationResult {
            found: false,
            system: None,
            certificate: None,
            infeasibility: None,
        }
    }

    /// Re-checks equivalence to `target`, the pool constraint, and the property.
    pub fn verify(
        &self,
        target: &TargetDynamics,
        property: Property,
        pool: Option<&[RatVec]>,
        atlas: &AtlasConfig,
    ) -> bool {
        let Some(sys) = &self.system else {
            return !self.found;
        };
        if !self.found || !target.is_realized_by(sys) {
            return false;
        }
        if let Some(pool) = pool {
            if !sys.network().vertices().iter().all(|v| pool.contains(v)) {
                return false;
            }
        }
        check_property(sys.network(), property, atlas).unwrap_or(false)
    }
}

/// Decides `property` for `g` with the crate's own checks.
pub fn check_property(
    g: &ReactionNetwork,
    property: Property,
    atlas: &AtlasConfig,
) -> Result<bool, AtlasError> {
    Ok(match property {
        Property::None => true,
        Property::WeaklyReversible => is_weakly_reversible(g).weakly_reversible,
        Property::Endotactic => {
            g.num_reactions() > 0 && decide(g, Strength::Endotactic, atlas)?.is_pass()
        }
        Property::StronglyEndotactic => {
            g.num_reactions() > 0 && decide(g, Strength::StronglyEndotactic, atlas)?.is_pass()
        }
        Property::Consistent => {
            g.num_reactions() > 0
                && stiemke_alternative(&g.reaction_vectors())
                    .expect("nonempty")
                    .is_solution()
        }
        Property::Conservative => is_conservative(g).is_some(),
    })
}

fn check_context(target: &TargetDynamics, ctx: &SpeciesContext) -> Result<(), RealizationError> {
    if target.context() != ctx {
        return Err(RealizationError::ContextMismatch);
    }
    Ok(())
}

/// The rate LP of `g` against `target`: one strictly positive rate per
/// reaction, one block of rows per source of either.
pub fn rate_problem(
    target: &TargetDynamics,
    g: &ReactionNetwork,
) -> Result<LpProblem, RealizationError> {
    check_context(target, g.context())?;
    let n = g.dim();
    let mut keys: Vec<RatVec> = g
        .source_indices()
        .into_iter()
        .map(|s| g.vertex(s).clone())
        .collect();
    keys.extend(target.sources());
    keys.sort();
    keys.dedup();
    let mut a = RatMat::zeros(keys.len() * n, g.num_reactions());
    let mut b = Vec::with_capacity(keys.len() * n);
    for (blk, y) in keys.iter().enumerate() {
        for e in 0..g.num_reactions() {
            if g.source(e) == y {
                for (i, d) in g.reaction_vector(e).iter().enumerate() {
                    a.set(blk * n + i, e, d.clone());
                }
            }
        }
        match target.map().get(y) {
            Some(w) => b.extend(w.iter().cloned()),
            None => b.extend(std::iter::repeat_n(Rat::zero(), n)),
        }
    }
    Ok(LpProblem::new(
        a,
        RatVec::new(b),
        vec![VarKind::Positive; g.num_reactions()],
    )
    .expect("dimensions agree"))
}

/// Fits strictly positive rates on every reaction of `g` so that it realizes `target`.
pub fn find_rates(
    target: &TargetDynamics,
    g: &ReactionNetwork,
) -> Result<RealizationResult, RealizationError> {
    let p = rate_problem(target, g)?;
    let cert = lp_feasible(&p).map_err(|e| RealizationError::Internal(e.to_string()))?;
    Ok(match cert.solution() {
        Some(k) => {
            let sys = MassActionSystem::new(g.clone(), k.entries().to_vec())
                .map_err(|e| RealizationError::Internal(e.to_string()))?;
            RealizationResult::found(sys, PropertyCertificate::None)
        }
        None => RealizationResult {
            infeasibility: Some(cert),
            ..RealizationResult::not_found()
        },
    })
}

fn validate_pool(
    target: &TargetDynamics,
    pool: &[RatVec],
) -> Result<Vec<RatVec>, RealizationError> {
    let n = target.context().dim();
    if let Some(v) = pool.iter().find(|v| v.dim() != n) {
        return Err(RealizationError::Dimension(v.to_string()));
    }
    let mut pool = pool.to_vec();
    pool.sort();
    pool.dedup();
    if let Some(y) = target
        .sources()
        .into_iter()
        .find(|y| pool.binary_search(y).is_err())
    {
        return Err(RealizationError::PoolMissingSource(y.to_string()));
    }
    Ok(pool)
}

/// Net vectors for every potential source: the target's, plus zero for
/// ghost candidates.
fn net_table(target: &TargetDynamics, pool: &[RatVec], ghosts: bool) -> BTreeMap<RatVec, RatVec> {
    let mut nets = target.map().entries().clone();
    if ghosts {
        for z in pool {
            nets.entry(z.clone())
                .or_insert_with(|| RatVec::zeros(z.dim()));
        }
    }
    nets
}

fn all_candidates(nets: &BTreeMap<RatVec, RatVec>, pool: &[RatVec]) -> Support {
    nets.keys()
        .map(|y| {
            (
                y.clone(),
                pool.iter().filter(|t| *t != y).cloned().collect(),
            )
        })
        .collect()
}

fn dense_map(
    target: &TargetDynamics,
    pool: &[RatVec],
    ghosts: bool,
) -> (BTreeMap<RatVec, RatVec>, Option<Support>) {
    let nets = net_table(target, pool, ghosts);
    let dense = densify(&all_candidates(&nets, pool), &nets);
    (nets, dense)
}

/// Every edge `y → y′` (`y` a target source, `y′` in the pool) that carries
/// positive rate in some realization on the pool. Empty when the target has
/// no realization there.
pub fn dense_support(
    target: &TargetDynamics,
    pool: &[RatVec],
) -> Result<Vec<(RatVec, RatVec)>, RealizationError> {
    let pool = validate_pool(target, pool)?;
    Ok(dense_map(target, &pool, false)
        .1
        .map(|s| edges_of(&s))
        .unwrap_or_default())
}

fn network_of(ctx: &SpeciesContext, s: &Support) -> ReactionNetwork {
    ReactionNetwork::from_edges(ctx.clone(), &edges_of(s)).expect("support edges are valid")
}

/// A realization using every edge of `s` with positive rate.
fn realize(
    ctx: &SpeciesContext,
    nets: &BTreeMap<RatVec, RatVec>,
    s: &Support,
) -> Result<MassActionSystem, RealizationError> {
    let mut edges = Vec::new();
    for (y, ts) in s {
        let k = strict_rates(y, &nets[y], ts)
            .ok_or_else(|| RealizationError::Internal(format!("no strict rates at [{y}]")))?;
        for (t, k) in ts.iter().zip(k) {
            edges.push((y.clone(), t.clone(), k));
        }
    }
    MassActionSystem::from_weighted_edges(ctx.clone(), &edges)
        .map_err(|e| RealizationError::Internal(e.to_string()))
}

/// Largest weakly reversible edge set inside `s` admitting a realization.
fn wr_fixpoint(
    ctx: &SpeciesContext,
    nets: &BTreeMap<RatVec, RatVec>,
    mut s: Support,
) -> Option<Support> {
    loop {
        let g = network_of(ctx, &s);
        let comp = strong_components(&g);
        let idx = |v: &RatVec| g.vertex_index(v).expect("vertex of support");
        let pruned: Support = s
            .iter()
            .map(|(y, ts)| {
                (
                    y.clone(),
                    ts.iter()
                        .filter(|t| comp[idx(t)] == comp[idx(y)])
                        .cloned()
                        .collect(),
                )
            })
            .collect();
        let next = densify(&pruned, nets)?;
        if next == s {
            return Some(s);
        }
        s = next;
    }
}

/// Largest consistent edge set inside `s` admitting a realization.
fn consistent_fixpoint(nets: &BTreeMap<RatVec, RatVec>, mut s: Support) -> Option<Support> {
    loop {
        let mut alive = edges_of(&s);
        while !alive.is_empty() {
            let vs: Vec<RatVec> = alive.iter().map(|(y, t)| t.sub(y)).collect();
            match stiemke_alternative(&vs).expect("nonempty") {
                FeasibilityCertificate::Solution(_) => break,
                FeasibilityCertificate::Separator(w) => {
                    // edges with w·v < 0 cannot carry weight in any dependency
                    let keep: Vec<bool> = vs.iter().map(|v| !w.dot(v).is_negative()).collect();
                    alive = alive
                        .into_iter()
                        .zip(keep)
                        .filter(|(_, k)| *k)
                        .map(|(e, _)| e)
                        .collect();
                }
            }
        }
        let mut pruned: Support = s.keys().map(|y| (y.clone(), Vec::new())).collect();
        for (y, t) in alive {
            pruned.get_mut(&y).expect("source of support").push(t);
        }
        let next = densify(&pruned, nets)?;
        if next == s {
            return Some(s);
        }
        s = next;
    }
}

fn conservative_search(
    target: &TargetDynamics,
    nets: &BTreeMap<RatVec, RatVec>,
    dense: &Support,
    atlas: &AtlasConfig,
) -> Result<Option<(Support, RatVec)>, RealizationError> {
    let n = target.context().dim();
    let ws: Vec<RatVec> = target.map().entries().values().cloned().collect();
    let edges = edges_of(dense);
    let vectors: Vec<RatVec> = edges.iter().map(|(y, t)| t.sub(y)).collect();
    let mut gens = vectors.clone();
    gens.extend((0..n).map(|i| RatVec::unit(n, i)));
    gens.extend(ws.iter().cloned());
    let at = atlas_from_generators(n, &gens, atlas)?;
    let mut tried = HashSet::new();
    for r in &at.representatives {
        if !r.is_strictly_positive() || ws.iter().any(|w| !w.dot(r).is_zero()) {
            continue;
        }
        let mask: Vec<bool> = vectors.iter().map(|v| v.dot(r).is_zero()).collect();
        if !tried.insert(mask.clone()) {
            continue;
        }
        let mut allowed: Support = dense.keys().map(|y| (y.clone(), Vec::new())).collect();
        for ((y, t), ok) in edges.iter().zip(&mask) {
            if *ok {
                allowed.get_mut(y).expect("source").push(t.clone());
            }
        }
        if let Some(s) = densify(&allowed, nets) {
            let c: RatVec = r
                .primitive_integer()
                .into_iter()
                .map(Rat::from_integer)
                .collect();
            return Ok(Some((s, c)));
        }
    }
    Ok(None)
}

/// A feasible out-set of one source with its strictly positive rates.
#[derive(Clone, Debug)]
struct OutSet {
    targets: Vec<RatVec>,
    rates: Vec<Rat>,
}

/// Every nonempty subset of `candidates` that carries a strictly positive
/// decomposition of `w`, in increasing bitmask order.
fn feasible_out_sets(y: &RatVec, w: &RatVec, candidates: &[RatVec]) -> Vec<OutSet> {
    let a = candidates.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << a) {
        let ts: Vec<RatVec> = (0..a)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| candidates[i].clone())
            .collect();
        if let Some(rates) = strict_rates(y, w, &ts) {
            out.push(OutSet { targets: ts, rates });
        }
    }
    out
}

fn check_cap(s: &Support, cap: usize) -> Result<(), RealizationError> {
    let edges = edge_count(s);
    if edges > cap || s.values().any(|ts| ts.len() >= 63) {
        return Err(RealizationError::DenseEdgeCap { edges, cap });
    }
    Ok(())
}

struct Signature {
    pos: Vec<bool>,
    neg: Vec<bool>,
}

impl Signature {
    fn dominates(&self, other: &Signature) -> bool {
        self.pos.iter().zip(&other.pos).all(|(a, b)| *a || !*b)
            && self.neg.iter().zip(&other.neg).all(|(a, b)| !*a || *b)
    }
}

/// Whether direction `d` already fails for a partial choice, treating
/// unassigned sources optimistically (moving up, never down).
fn direction_fails(
    strength: Strength,
    heights: &[Rat],
    pos: &[Option<bool>],
    neg: &[Option<bool>],
) -> bool {
    let up = |s: usize| pos[s].unwrap_or(true);
    let down = |s: usize| neg[s].unwrap_or(false);
    let lowest_up = (0..heights.len())
        .filter(|&s| up(s))
        .map(|s| &heights[s])
        .min();
    let floor = heights.iter().min();
    (0..heights.len())
        .filter(|&s| down(s))
        .any(|s| match lowest_up {
            None => true,
            Some(h) => {
                *h >= heights[s] || (strength == Strength::StronglyEndotactic && Some(h) > floor)
            }
        })
}

fn endotactic_search(
    ctx: &SpeciesContext,
    nets: &BTreeMap<RatVec, RatVec>,
    dense: &Support,
    strength: Strength,
    config: &SearchConfig,
) -> Result<Option<MassActionSystem>, RealizationError> {
    check_cap(dense, config.max_dense_edges)?;
    let sources: Vec<&RatVec> = dense.keys().collect();
    let mut gens: Vec<RatVec> = edges_of(dense).iter().map(|(y, t)| t.sub(y)).collect();
    for (i, a) in sources.iter().enumerate() {
        for b in &sources[i + 1..] {
            gens.push(a.sub(b));
        }
    }
    let at = atlas_from_generators(ctx.dim(), &gens, &config.atlas)?;
    let dirs = &at.representatives;
    let heights: Vec<Vec<Rat>> = dirs
        .iter()
        .map(|d| sources.iter().map(|y| d.dot(y)).collect())
        .collect();

    let mut options: Vec<Vec<(OutSet, Signature)>> = Vec::new();
    for y in &sources {
        let mut opts: Vec<(OutSet, Signature)> = Vec::new();
        for o in feasible_out_sets(y, &nets[*y], &dense[*y]) {
            let moves: Vec<Vec<Rat>> = dirs
                .iter()
                .map(|d| o.targets.iter().map(|t| d.dot(&t.sub(y))).collect())
                .collect();
            let sig = Signature {
                pos: moves
                    .iter()
                    .map(|m| m.iter().any(Signed::is_positive))
                    .collect(),
                neg: moves
                    .iter()
                    .map(|m| m.iter().any(Signed::is_negative))
                    .collect(),
            };
            if opts.iter().any(|(_, s)| s.dominates(&sig)) {
                continue;
            }
            opts.retain(|(_, s)| !sig.dominates(s));
            opts.push((o, sig));
        }
        if opts.is_empty() {
            return Ok(None);
        }
        options.push(opts);
    }

    let m = sources.len();
    let mut choice = vec![0usize; m];
    let mut pos: Vec<Vec<Option<bool>>> = vec![vec![None; m]; dirs.len()];
    let mut neg: Vec<Vec<Option<bool>>> = vec![vec![None; m]; dirs.len()];
    let feasible = |pos: &Vec<Vec<Option<bool>>>, neg: &Vec<Vec<Option<bool>>>| {
        (0..dirs.len()).all(|d| !direction_fails(strength, &heights[d], &pos[d], &neg[d]))
    };
    fn assign(
        s: usize,
        opt: Option<&Signature>,
        pos: &mut [Vec<Option<bool>>],
        neg: &mut [Vec<Option<bool>>],
    ) {
        for d in 0..pos.len() {
            pos[d][s] = opt.map(|o| o.pos[d]);
            neg[d][s] = opt.map(|o| o.neg[d]);
        }
    }
    // depth-first over sources; `choice[s]` is the next option to try at depth s
    let mut depth = 0usize;
    if !feasible(&pos, &neg) {
        return Ok(None);
    }
    loop {
        if depth == m {
            break;
        }
        if choice[depth] >= options[depth].len() {
            choice[depth] = 0;
            assign(depth, None, &mut pos, &mut neg);
            if depth == 0 {
                return Ok(None);
            }
            depth -= 1;
            choice[depth] += 1;
            continue;
        }
        assign(
            depth,
            Some(&options[depth][choice[depth]].1),
            &mut pos,
            &mut neg,
        );
        if feasible(&pos, &neg) {
            depth += 1;
        } else {
            choice[depth] += 1;
        }
    }
    let mut edges = Vec::new();
    for (s, y) in sources.iter().enumerate() {
        let o = &options[s][choice[s]].0;
        for (t, k) in o.targets.iter().zip(&o.rates) {
            edges.push(((*y).clone(), t.clone(), k.clone()));
        }
    }
    MassActionSystem::from_weighted_edges(ctx.clone(), &edges)
        .map(Some)
        .map_err(|e| RealizationError::Internal(e.to_string()))
}

/// Searches the pool for a realization of the target with the property.
pub fn find_realization(q: &RealizationQuery) -> Result<RealizationResult, RealizationError> {
    let target = &q.target;
    if target.map().is_empty() {
        return Err(RealizationError::EmptyTarget);
    }
    let pool = validate_pool(target, &q.pool)?;
    let ctx = target.context();
    let ghosts = q.config.allow_ghost_sources && q.property == Property::None;
    let (nets, dense) = dense_map(target, &pool, ghosts);
    let Some(dense) = dense else {
        return Ok(RealizationResult::not_found());
    };
    let atlas = &q.config.atlas;
    let result = match q.property {
        Property::None => {
            RealizationResult::found(realize(ctx, &nets, &dense)?, PropertyCertificate::None)
        }
        Property::WeaklyReversible => match wr_fixpoint(ctx, &nets, dense) {
            Some(s) => RealizationResult::found(
                realize(ctx, &nets, &s)?,
                PropertyCertificate::WeaklyReversible,
            ),
            None => RealizationResult::not_found(),
        },
        Property::Consistent => match consistent_fixpoint(&nets, dense) {
            Some(s) => {
                let sys = realize(ctx, &nets, &s)?;
                let cert =
                    stiemke_alternative(&sys.network().reaction_vectors()).expect("nonempty");
                RealizationResult::found(sys, PropertyCertificate::Consistent(cert))
            }
            None => RealizationResult::not_found(),
        },
        Property::Conservative => {
            let sys = realize(ctx, &nets, &dense)?;
            if let Some(c) = is_conservative(sys.network()) {
                RealizationResult::found(sys, PropertyCertificate::Conservative(c))
            } else {
                match conservative_search(target, &nets, &dense, atlas)? {
                    Some((s, c)) => RealizationResult::found(
                        realize(ctx, &nets, &s)?,
                        PropertyCertificate::Conservative(c),
                    ),
                    None => RealizationResult::not_found(),
                }
            }
        }
        Property::Endotactic | Property::StronglyEndotactic => {
            let strength = if q.property == Property::Endotactic {
                Strength::Endotactic
            } else {
                Strength::StronglyEndotactic
            };
            let wrap = |v: EndotacticVerdict| {
                if strength == Strength::Endotactic {
                    PropertyCertificate::Endotactic(v)
                } else {
                    PropertyCertificate::StronglyEndotactic(v)
                }
            };
            let sys = realize(ctx, &nets, &dense)?;
            let verdict = decide(sys.network(), strength, atlas)?;
            if verdict.is_pass() {
                RealizationResult::found(sys, wrap(verdict))
            } else {
                match endotactic_search(ctx, &nets, &dense, strength, &q.config)? {
                    Some(sys) => {
                        let verdict = decide(sys.network(), strength, atlas)?;
                        if !verdict.is_pass() {
                            return Err(RealizationError::Internal(
                                "search result failed certification".into(),
                            ));
                        }
                        RealizationResult::found(sys, wrap(verdict))
                    }
                    None => RealizationResult::not_found(),
                }
            }
        }
    };
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeficiencyOneType {
    /// Deficiency one, every linkage class of deficiency zero.
    TypeI,
    /// Deficiency one, a single linkage class.
    TypeII,
    /// Deficiency one, several classes, exactly one of deficiency one.
    TypeIII,
    NotApplicable,
}

impl fmt::Display for DeficiencyOneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeficiencyOneType::TypeI => "type-i",
            DeficiencyOneType::TypeII => "type-ii",
            DeficiencyOneType::TypeIII => "type-iii",
            DeficiencyOneType::NotApplicable => "not-applicable",
        })
    }
}

pub fn classify_deficiency_one(g: &ReactionNetwork) -> DeficiencyOneType {
    let r = deficiency(g);
    if r.deficiency != 1 {
        return DeficiencyOneType::NotApplicable;
    }
    let ones = r.per_class_deficiency.iter().filter(|&&d| d == 1).count();
    let zeros = r.per_class_deficiency.iter().filter(|&&d| d == 0).count();
    let classes = r.per_class_deficiency.len();
    match (ones, zeros) {
        (0, z) if z == classes => DeficiencyOneType::TypeI,
        (1, _) if classes == 1 => DeficiencyOneType::TypeII,
        (1, z) if z + 1 == classes => DeficiencyOneType::TypeIII,
        _ => DeficiencyOneType::NotApplicable,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Type13Report {
    /// The rate LP of the type III network against the type I dynamics.
    pub problem: LpProblem,
    pub certificate: FeasibilityCertificate,
    /// Set when rates were found, contradicting non-equivalence.
    pub theorem_violation: Option<MassActionSystem>,
}

/// Confirms that no rates on `g3` reproduce the dynamics of `sys1`.
pub fn check_type1_vs_type3(
    sys1: &MassActionSystem,
    g3: &ReactionNetwork,
) -> Result<Type13Report, RealizationError> {
    let g1 = sys1.network();
    if g1.context() != g3.context() {
        return Err(RealizationError::ContextMismatch);
    }
    let pre = |ok: bool, msg: &str| {
        if ok {
            Ok(())
        } else {
            Err(RealizationError::Precondition(msg.to_string()))
        }
    };
    pre(
        is_weakly_reversible(g1).weakly_reversible,
        "first network is not weakly reversible",
    )?;
    pre(
        is_weakly_reversible(g3).weakly_reversible,
        "second network is not weakly reversible",
    )?;
    pre(
        classify_deficiency_one(g1) == DeficiencyOneType::TypeI,
        "first network is not of type I",
    )?;
    pre(
        classify_deficiency_one(g3) == DeficiencyOneType::TypeIII,
        "second network is not of type III",
    )?;
    pre(
        deficiency(g1).linkage_classes.len() == deficiency(g3).linkage_classes.len(),
        "networks have different numbers of linkage classes",
    )?;
    let target = TargetDynamics::from_system(sys1);
    let problem = rate_problem(&target, g3)?;
    let certificate =
        lp_feasible(&problem).map_err(|e| RealizationError::Internal(e.to_string()))?;
    let theorem_violation = certificate
        .solution()
        .map(|k| MassActionSystem::new(g3.clone(), k.entries().to_vec()).expect("positive rates"));
    Ok(Type13Report {
        problem,
        certificate,
        theorem_violation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UniquenessConstraint {
    WrDeficiencyZero,
    WrDeficiencyOne,
}

/// Every weakly reversible realization on the target's sources with the
/// requested deficiency, one per edge set, ordered by edge set.
pub fn uniqueness_probe(
    target: &TargetDynamics,
    constraint: UniquenessConstraint,
    config: &SearchConfig,
) -> Result<Vec<RealizationResult>, RealizationError> {
    if target.map().is_empty() {
        return Err(RealizationError::EmptyTarget);
    }
    let ctx = target.context();
    let pool = target.sources();
    let (nets, dense) = dense_map(target, &pool, false);
    let Some(wr) = dense.and_then(|d| wr_fixpoint(ctx, &nets, d)) else {
        return Ok(Vec::new());
    };
    check_cap(&wr, config.max_dense_edges)?;
    let want = match constraint {
        UniquenessConstraint::WrDeficiencyZero => 0,
        UniquenessConstraint::WrDeficiencyOne => 1,
    };
    let per_source: Vec<(RatVec, Vec<OutSet>)> = wr
        .iter()
        .map(|(y, ts)| (y.clone(), feasible_out_sets(y, &nets[y], ts)))
        .collect();
    if per_source.iter().any(|(_, opts)| opts.is_empty()) {
        return Ok(Vec::new());
    }
    let mut found = Vec::new();
    let mut idx = vec![0usize; per_source.len()];
    'outer: loop {
        let mut edges = Vec::new();
        for (s, (y, opts)) in per_source.iter().enumerate() {
            let o = &opts[idx[s]];
            for (t, k) in o.targets.iter().zip(&o.rates) {
                edges.push((y.clone(), t.clone(), k.clone()));
            }
        }
        let sys = MassActionSystem::from_weighted_edges(ctx.clone(), &edges)
            .map_err(|e| RealizationError::Internal(e.to_string()))?;
        let g = sys.network();
        if is_weakly_reversible(g).weakly_reversible && deficiency(g).deficiency == want {
            found.push(RealizationResult::found(
                sys,
                PropertyCertificate::WeaklyReversible,
            ));
        }
        for s in (0..idx.len()).rev() {
            idx[s] += 1;
            if idx[s] < per_source[s].1.len() {
                continue 'outer;
            }
            idx[s] = 0;
        }
        break;
    }
    found.sort_by_key(|r| r.system.as_ref().expect("found").network().edge_set());
    Ok(found)
}
