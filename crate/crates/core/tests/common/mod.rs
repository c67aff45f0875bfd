//! Seeded generators and hand-built fixtures shared by the integration tests.
#![allow(dead_code)]

use crnkit::exact::{frac, lp_feasible, rat, LpProblem, Rat, RatMat, RatVec, VarKind};
use crnkit::network::{is_weakly_reversible, MassActionSystem, ReactionNetwork, SpeciesContext};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn v(x: &[i64]) -> RatVec {
    RatVec::from_ints(x)
}

pub fn named(n: usize) -> SpeciesContext {
    let names: Vec<String> = ["A", "B", "C", "D", "E", "F"][..n]
        .iter()
        .map(|s| s.to_string())
        .collect();
    SpeciesContext::new(&names).unwrap()
}

pub fn system(ctx: &SpeciesContext, edges: &[(&[i64], &[i64], Rat)]) -> MassActionSystem {
    let e: Vec<_> = edges
        .iter()
        .map(|(s, t, k)| (v(s), v(t), k.clone()))
        .collect();
    MassActionSystem::from_weighted_edges(ctx.clone(), &e).unwrap()
}

pub fn network(ctx: &SpeciesContext, edges: &[(&[i64], &[i64])]) -> ReactionNetwork {
    let e: Vec<_> = edges.iter().map(|(s, t)| (v(s), v(t))).collect();
    ReactionNetwork::from_edges(ctx.clone(), &e).unwrap()
}

pub fn random_rate(r: &mut Rng8) -> Rat {
    frac(r.gen_range(1..=6), r.gen_range(1..=3))
}

pub fn random_point(r: &mut Rng8, n: usize, max: i64) -> RatVec {
    (0..n).map(|_| rat(r.gen_range(0..=max))).collect()
}

pub fn distinct_points(r: &mut Rng8, n: usize, count: usize, max: i64) -> Vec<RatVec> {
    assert!(
        (max as u128 + 1).pow(n as u32) >= count as u128,
        "not enough lattice points"
    );
    let mut pts: Vec<RatVec> = Vec::new();
    while pts.len() < count {
        let p = random_point(r, n, max);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// Random system on `count` distinct lattice points; each ordered pair is an
/// edge with probability `p`. At least one edge.
pub fn random_system(
    r: &mut Rng8,
    ctx: &SpeciesContext,
    count: usize,
    max: i64,
    p: f64,
) -> MassActionSystem {
    let pts = distinct_points(r, ctx.dim(), count, max);
    let mut edges = Vec::new();
    for a in &pts {
        for b in &pts {
            if a != b && r.gen_bool(p) {
                edges.push((a.clone(), b.clone(), random_rate(r)));
            }
        }
    }
    if edges.is_empty() {
        edges.push((pts[0].clone(), pts[1].clone(), random_rate(r)));
    }
    MassActionSystem::from_weighted_edges(ctx.clone(), &edges).unwrap()
}

/// Weakly reversible system: the points are split into `classes` groups,
/// each closed by a random cycle and decorated with extra internal edges.
pub fn random_wr_system(
    r: &mut Rng8,
    ctx: &SpeciesContext,
    count: usize,
    classes: usize,
    max: i64,
) -> MassActionSystem {
    let mut pts = distinct_points(r, ctx.dim(), count, max);
    pts.shuffle(r);
    let mut groups: Vec<Vec<RatVec>> = vec![Vec::new(); classes];
    for (i, p) in pts.into_iter().enumerate() {
        groups[if i < 2 * classes {
            i / 2
        } else {
            r.gen_range(0..classes)
        }]
        .push(p);
    }
    let mut edges = Vec::new();
    for g in groups.iter().filter(|g| g.len() >= 2) {
        for i in 0..g.len() {
            edges.push((g[i].clone(), g[(i + 1) % g.len()].clone(), random_rate(r)));
        }
        for a in g {
            for b in g {
                if a != b && r.gen_bool(0.3) {
                    edges.push((a.clone(), b.clone(), random_rate(r)));
                }
            }
        }
    }
    let sys = MassActionSystem::from_weighted_edges(ctx.clone(), &edges).unwrap();
    debug_assert!(is_weakly_reversible(sys.network()).weakly_reversible);
    sys
}

/// Adds a ghost source: `z → z + d` and `z → z − d` with equal rates, at a
/// point `z` that is not yet a source.
pub fn with_ghost(r: &mut Rng8, sys: &MassActionSystem, max: i64) -> MassActionSystem {
    let n = sys.context().dim();
    let g = sys.network();
    let sources: Vec<&RatVec> = g.source_indices().iter().map(|&i| g.vertex(i)).collect();
    loop {
        let z = random_point(r, n, max + 1);
        let d: RatVec = (0..n).map(|_| rat(r.gen_range(-1..=1))).collect();
        if d.is_zero() || sources.contains(&&z) {
            continue;
        }
        let (a, b) = (z.add(&d), z.sub(&d));
        if a.iter().chain(b.iter()).any(|x| x < &rat(0)) {
            continue;
        }
        let k = random_rate(r);
        let mut edges: Vec<(RatVec, RatVec, Rat)> = sys
            .weighted_edge_set()
            .into_iter()
            .map(|((s, t), k)| (s, t, k))
            .collect();
        edges.push((z.clone(), a, k.clone()));
        edges.push((z, b, k));
        return MassActionSystem::from_weighted_edges(sys.context().clone(), &edges).unwrap();
    }
}

/// Replaces one edge `y → y′` of rate `k` by `y → y + 2(y′ − y)` of rate
/// `k/2`, by two edges `y → y′ ± u` of rate `k/2` each, or by the midpoint
/// edge of rate `2k`. All keep the net vector at `y`.
pub fn split_edge(r: &mut Rng8, sys: &MassActionSystem) -> MassActionSystem {
    let mut edges: Vec<(RatVec, RatVec, Rat)> = sys
        .weighted_edge_set()
        .into_iter()
        .map(|((s, t), k)| (s, t, k))
        .collect();
    let i = r.gen_range(0..edges.len());
    let (y, t, k) = edges.remove(i);
    let half = &k / rat(2);
    let n = y.dim();
    for _ in 0..20 {
        if r.gen_bool(0.5) {
            let far = y.add(&t.sub(&y).scale(&rat(2)));
            if far.iter().all(|x| x >= &rat(0)) {
                edges.push((y, far, half));
                return MassActionSystem::from_weighted_edges(sys.context().clone(), &edges)
                    .unwrap();
            }
        } else {
            let u: RatVec = (0..n).map(|_| rat(r.gen_range(-1..=1))).collect();
            let (a, b) = (t.add(&u), t.sub(&u));
            if !u.is_zero() && a != y && b != y && a.iter().chain(b.iter()).all(|x| x >= &rat(0)) {
                edges.push((y.clone(), a, half.clone()));
                edges.push((y, b, half));
                return MassActionSystem::from_weighted_edges(sys.context().clone(), &edges)
                    .unwrap();
            }
        }
    }
    let mid = y.add(&t).scale(&frac(1, 2));
    edges.push((y, mid, k * rat(2)));
    MassActionSystem::from_weighted_edges(sys.context().clone(), &edges).unwrap()
}

/// Whether `z` lies in the convex hull of `pts`.
pub fn in_hull(z: &RatVec, pts: &[RatVec]) -> bool {
    let n = z.dim();
    let mut cols: Vec<RatVec> = pts.to_vec();
    for c in &mut cols {
        let mut e = c.entries().to_vec();
        e.push(rat(1));
        *c = RatVec::new(e);
    }
    let mut b = z.entries().to_vec();
    b.push(rat(1));
    let p = LpProblem::new(
        RatMat::from_columns(n + 1, &cols),
        RatVec::new(b),
        vec![VarKind::NonNeg; pts.len()],
    )
    .unwrap();
    lp_feasible(&p).unwrap().is_solution()
}

// Fixtures on two species. Named points of the square arrangement:
// P = (0,1), R = (2,1), U = (1,2), V = (1,0), Q = (1,1).
pub const P: &[i64] = &[0, 1];
pub const R: &[i64] = &[2, 1];
pub const U: &[i64] = &[1, 2];
pub const V: &[i64] = &[1, 0];
pub const Q: &[i64] = &[1, 1];

/// Single linkage class, complete bipartite between {P, R} and {U, V}.
pub fn bipartite_square() -> MassActionSystem {
    let one = rat(1);
    system(
        &named(2),
        &[
            (P, U, one.clone()),
            (P, V, one.clone()),
            (R, U, one.clone()),
            (R, V, one.clone()),
            (U, P, one.clone()),
            (U, R, one.clone()),
            (V, P, one.clone()),
            (V, R, one),
        ],
    )
}

/// `P ⇌ R` and `U ⇌ V`: deficiency zero, two linkage classes.
pub fn two_pairs() -> MassActionSystem {
    let one = rat(1);
    system(
        &named(2),
        &[
            (P, R, one.clone()),
            (R, P, one.clone()),
            (U, V, one.clone()),
            (V, U, one),
        ],
    )
}

/// `two_pairs` plus the ghost `Q` on the segment `PR`.
pub fn pairs_with_ghost() -> MassActionSystem {
    system(
        &named(2),
        &[
            (P, Q, rat(2)),
            (R, Q, rat(2)),
            (Q, P, rat(1)),
            (Q, R, rat(1)),
            (U, V, rat(1)),
            (V, U, rat(1)),
        ],
    )
}

pub const ZERO: &[i64] = &[0, 0];
pub const A: &[i64] = &[1, 0];
pub const B: &[i64] = &[0, 1];
pub const AB: &[i64] = &[1, 1];
pub const A2B2: &[i64] = &[2, 2];

/// Triangle `0 ⇌ A ⇌ B ⇌ 0` with `A+B ⇌ 2A+2B`: two classes of deficiency zero.
pub fn type1_unit() -> MassActionSystem {
    let one = rat(1);
    system(
        &named(2),
        &[
            (ZERO, A, one.clone()),
            (A, ZERO, one.clone()),
            (A, B, one.clone()),
            (B, A, one.clone()),
            (B, ZERO, one.clone()),
            (ZERO, B, one.clone()),
            (AB, A2B2, one.clone()),
            (A2B2, AB, one),
        ],
    )
}

/// `A ⇌ B` with the collinear chain `0 ⇌ A+B ⇌ 2A+2B`.
pub fn type3_unit() -> ReactionNetwork {
    network(
        &named(2),
        &[
            (A, B),
            (B, A),
            (ZERO, AB),
            (AB, ZERO),
            (AB, A2B2),
            (A2B2, AB),
        ],
    )
}

// Two equivalent weakly reversible deficiency-one systems on the vertices
// 0, A, A+B, 2A+B, A+2B, found by search over lattice points.
pub const A2B: &[i64] = &[2, 1];
pub const AB2: &[i64] = &[1, 2];

/// Triangle on {A+B, 2A+B, 0} with the pair `A ⇌ A+2B`.
pub fn triangle_and_pair() -> MassActionSystem {
    system(
        &named(2),
        &[
            (AB, A2B, rat(1)),
            (A2B, ZERO, rat(1)),
            (AB, ZERO, rat(1)),
            (ZERO, AB, rat(2)),
            (A, AB2, rat(3)),
            (AB2, A, rat(3)),
        ],
    )
}

/// Triangle on {2A+B, 0, A+2B} with the pair `A ⇌ A+B`.
pub fn triangle_and_pair_twin() -> MassActionSystem {
    system(
        &named(2),
        &[
            (AB, A, rat(1)),
            (A, AB, rat(6)),
            (A2B, ZERO, rat(1)),
            (ZERO, A2B, frac(2, 3)),
            (AB2, A2B, rat(2)),
            (ZERO, AB2, frac(2, 3)),
            (AB2, ZERO, rat(2)),
        ],
    )
}
