//! Endotactic and strongly endotactic networks.
//!
//! Both properties quantify over every direction `v ∈ ℝⁿ`, but the inner
//! condition depends on `v` only through the signs of `v·(y′ − y)` over
//! reactions and `v·(y_i − y_j)` over pairs of sources. Deciding them over
//! one representative per face of that arrangement is therefore exact.
//!
//! The strong condition asks, for a reaction `y → y′` with `v·(y′ − y) < 0`,
//! for a reaction `ỹ → ỹ′` with `v·(ỹ′ − ỹ) > 0`, `v·ỹ < v·y`, and `ỹ`
//! minimising `v` over all sources (`v·ỹ <= v·ŷ`).

mod atlas;

pub use atlas::{atlas_from_generators, AtlasConfig, AtlasError, DirectionAtlas};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{Rat, RatVec};
use crate::network::ReactionNetwork;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strength {
    Endotactic,
    StronglyEndotactic,
}

/// A direction and a reaction for which the defining condition fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub direction: RatVec,
    pub reaction: usize,
}

impl Counterexample {
    /// Re-checks the violation by direct dot products.
    pub fn verify(&self, g: &ReactionNetwork, strength: Strength) -> bool {
        self.reaction < g.num_reactions()
            && self.direction.dim() == g.dim()
            && !self.direction.is_zero()
            && reaction_violates(g, &self.direction, self.reaction, strength)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndotacticVerdict {
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    /// Directions examined before the verdict.
    pub directions_checked: usize,
}

impl EndotacticVerdict {
    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Reaction vectors and pairwise differences of sources.
pub fn network_generators(g: &ReactionNetwork) -> Vec<RatVec> {
    let mut gens = g.reaction_vectors();
    let sources = g.source_indices();
    for (i, &a) in sources.iter().enumerate() {
        for &b in &sources[i + 1..] {
            gens.push(g.vertex(a).sub(g.vertex(b)));
        }
    }
    gens
}

pub fn build_direction_atlas(
    g: &ReactionNetwork,
    config: &AtlasConfig,
) -> Result<DirectionAtlas, AtlasError> {
    if g.num_reactions() == 0 {
        return Err(AtlasError::Edgeless);
    }
    atlas_from_generators(g.dim(), &network_generators(g), config)
}

fn reaction_violates(g: &ReactionNetwork, v: &RatVec, e: usize, strength: Strength) -> bool {
    if !v.dot(&g.reaction_vector(e)).is_negative() {
        return false;
    }
    let level = v.dot(g.source(e));
    let floor = match strength {
        Strength::Endotactic => None,
        Strength::StronglyEndotactic => {
            g.source_indices().iter().map(|&s| v.dot(g.vertex(s))).min()
        }
    };
    !(0..g.num_reactions()).any(|f| {
        let h = v.dot(g.source(f));
        h < level
            && v.dot(&g.reaction_vector(f)).is_positive()
            && floor.as_ref().is_none_or(|m| h <= *m)
    })
}

/// First reaction whose condition fails in direction `v`, if any.
pub fn violation(g: &ReactionNetwork, v: &RatVec, strength: Strength) -> Option<usize> {
    let m = g.num_reactions();
    let heights: Vec<Rat> = (0..m).map(|e| v.dot(g.source(e))).collect();
    let moves: Vec<Rat> = (0..m).map(|e| v.dot(&g.reaction_vector(e))).collect();
    // Lowest source height among reactions that move up in direction v.
    let lowest_up = (0..m)
        .filter(|&f| moves[f].is_positive())
        .map(|f| &heights[f])
        .min();
    let floor = match strength {
        Strength::Endotactic => None,
        Strength::StronglyEndotactic => heights.iter().min(),
    };
    (0..m).find(|&e| {
        moves[e].is_negative()
            && match (lowest_up, floor) {
                (None, _) => true,
                (Some(h), None) => *h >= heights[e],
                (Some(h), Some(f)) => h > f || *h >= heights[e],
            }
    })
}

/// Checks the condition over the given directions in order.
pub fn decide_over(
    g: &ReactionNetwork,
    strength: Strength,
    directions: &[RatVec],
) -> EndotacticVerdict {
    for (i, v) in directions.iter().enumerate() {
        if let Some(e) = violation(g, v, strength) {
            return EndotacticVerdict {
                verdict: Verdict::Fail,
                counterexample: Some(Counterexample {
                    direction: v.clone(),
                    reaction: e,
                }),
                directions_checked: i + 1,
            };
        }
    }
    EndotacticVerdict {
        verdict: Verdict::Pass,
        counterexample: None,
        directions_checked: directions.len(),
    }
}

pub fn decide(
    g: &ReactionNetwork,
    strength: Strength,
    config: &AtlasConfig,
) -> Result<EndotacticVerdict, AtlasError> {
    let atlas = build_direction_atlas(g, config)?;
    Ok(decide_over(g, strength, &atlas.representatives))
}

pub fn is_endotactic(
    g: &ReactionNetwork,
    config: &AtlasConfig,
) -> Result<EndotacticVerdict, AtlasError> {
    decide(g, Strength::Endotactic, config)
}

pub fn is_strongly_endotactic(
    g: &ReactionNetwork,
    config: &AtlasConfig,
) -> Result<EndotacticVerdict, AtlasError> {
    decide(g, Strength::StronglyEndotactic, config)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepDisposition {
    Pass,
    Fail,
    /// Every level swept had only reactions parallel to the hyperplane.
    Continue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepLevel {
    pub value: Rat,
    pub sources: Vec<usize>,
    /// Reactions leaving these sources with their value of `v·(y′ − y)`.
    pub reactions: Vec<(usize, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub direction: RatVec,
    pub min_value: Rat,
    pub max_value: Rat,
    /// Sources on the supporting hyperplane `v·y = min_value`.
    pub supporting_sources: Vec<usize>,
    /// Levels visited in increasing order of `v·y`, up to the deciding one.
    pub levels: Vec<SweepLevel>,
    pub disposition: SweepDisposition,
}

/// Sweeps a hyperplane orthogonal to `v` across the sources, starting from
/// the side where `v·y` is smallest.
pub fn sweep_report(g: &ReactionNetwork, v: &RatVec) -> Result<SweepReport, AtlasError> {
    if v.is_zero() || v.dim() != g.dim() {
        return Err(AtlasError::ZeroDirection);
    }
    if g.num_reactions() == 0 {
        return Err(AtlasError::Edgeless);
    }
    let mut by_level: Vec<(Rat, usize)> = g
        .source_indices()
        .into_iter()
        .map(|s| (v.dot(g.vertex(s)), s))
        .collect();
    by_level.sort();
    let min_value = by_level[0].0.clone();
    let max_value = by_level[by_level.len() - 1].0.clone();
    let mut levels = Vec::new();
    let mut disposition = SweepDisposition::Continue;
    let mut i = 0;
    while i < by_level.len() {
        let value = by_level[i].0.clone();
        let mut sources = Vec::new();
        while i < by_level.len() && by_level[i].0 == value {
            sources.push(by_level[i].1);
            i += 1;
        }
        sources.sort_unstable();
        let reactions: Vec<(usize, Rat)> = g
            .reactions()
            .iter()
            .enumerate()
            .filter(|(_, r)| sources.contains(&r.source))
            .map(|(e, _)| (e, v.dot(&g.reaction_vector(e))))
            .collect();
        let any_neg = reactions.iter().any(|(_, d)| d.is_negative());
        let any_pos = reactions.iter().any(|(_, d)| d.is_positive());
        levels.push(SweepLevel {
            value,
            sources,
            reactions,
        });
        if any_neg {
            disposition = SweepDisposition::Fail;
            break;
        }
        if any_pos {
            disposition = SweepDisposition::Pass;
            break;
        }
    }
    Ok(SweepReport {
        direction: v.clone(),
        min_value,
        max_value,
        supporting_sources: levels[0].sources.clone(),
        levels,
        disposition,
    })
}

/// Random nonzero directions: small integer vectors, which often land on
/// lower-dimensional faces, alternating with generic rational vectors.
pub fn sample_directions(dim: usize, trials: usize, seed: u64) -> Vec<RatVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    while out.len() < trials && dim > 0 {
        let v: RatVec = if out.len() % 2 == 0 {
            (0..dim)
                .map(|_| Rat::from_integer(rng.gen_range(-2i64..=2).into()))
                .collect()
        } else {
            (0..dim)
                .map(|_| {
                    Rat::new(
                        rng.gen_range(-40i64..=40).into(),
                        rng.gen_range(1i64..=12).into(),
                    )
                })
                .collect()
        };
        if !v.iter().all(Zero::is_zero) {
            out.push(v);
        }
    }
    out
}

/// Refutation-only check: returns a verified counterexample if a sampled
/// direction violates the condition. `None` proves nothing.
pub fn sampling_oracle(
    g: &ReactionNetwork,
    strength: Strength,
    trials: usize,
    seed: u64,
) -> Option<Counterexample> {
    sample_directions(g.dim(), trials, seed)
        .into_iter()
        .find_map(|v| {
            violation(g, &v, strength).map(|e| Counterexample {
                direction: v,
                reaction: e,
            })
        })
}
