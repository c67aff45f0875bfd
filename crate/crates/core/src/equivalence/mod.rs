//! Net vectors, ghost vertices and dynamical equivalence.
//!
//! Grouping the mass-action vector field by monomial gives
//! `dx/dt = Σ_y x^y w_y` with `w_y = Σ_{y→y′} k_{y→y′} (y′ − y)`. Two systems
//! generate the same field exactly when their nonzero net vectors agree,
//! since distinct monomials are linearly independent functions.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{row_space_basis, Rat, RatVec};
use crate::network::{evaluate_vector_field, MassActionSystem, NetworkError};

/// Source vertex ↦ net vector. The raw form keeps zero entries (ghosts).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NetVectorMap {
    dim: usize,
    entries: BTreeMap<RatVec, RatVec>,
}

impl NetVectorMap {
    pub fn new(dim: usize, entries: BTreeMap<RatVec, RatVec>) -> Self {
        NetVectorMap { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &BTreeMap<RatVec, RatVec> {
        &self.entries
    }

    pub fn get(&self, y: &RatVec) -> Option<&RatVec> {
        self.entries.get(y)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keys whose net vector is zero.
    pub fn zero_keys(&self) -> Vec<&RatVec> {
        self.entries
            .iter()
            .filter(|(_, w)| w.is_zero())
            .map(|(y, _)| y)
            .collect()
    }

    /// The map with zero entries dropped.
    pub fn comparison(&self) -> NetVectorMap {
        NetVectorMap {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .filter(|(_, w)| !w.is_zero())
                .map(|(y, w)| (y.clone(), w.clone()))
                .collect(),
        }
    }
}

pub fn net_vectors(sys: &MassActionSystem) -> NetVectorMap {
    let g = sys.network();
    let mut entries: BTreeMap<RatVec, RatVec> = BTreeMap::new();
    for e in 0..g.num_reactions() {
        entries
            .entry(g.source(e).clone())
            .or_insert_with(|| RatVec::zeros(g.dim()))
            .add_scaled(sys.rate(e), &g.reaction_vector(e));
    }
    NetVectorMap::new(g.dim(), entries)
}

/// Source vertices of a system whose net vector is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GhostSet {
    /// Vertex indices into the system's network, ascending.
    pub vertices: Vec<usize>,
}

impl GhostSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

pub fn ghost_vertices(sys: &MassActionSystem) -> GhostSet {
    let g = sys.network();
    let map = net_vectors(sys);
    let vertices = g
        .source_indices()
        .into_iter()
        .filter(|&s| map.get(g.vertex(s)).is_some_and(RatVec::is_zero))
        .collect();
    GhostSet { vertices }
}

/// Removes every reaction leaving a ghost source, then prunes isolated vertices.
pub fn eliminate_ghosts(sys: &MassActionSystem) -> MassActionSystem {
    let ghosts = ghost_vertices(sys);
    let keep: Vec<usize> = sys
        .network()
        .reactions()
        .iter()
        .enumerate()
        .filter(|(_, r)| ghosts.vertices.binary_search(&r.source).is_err())
        .map(|(e, _)| e)
        .collect();
    sys.with_reactions(&keep).prune_isolated()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// First differing source in lexicographic order, with `w_a − w_b` there.
    pub witness: Option<(RatVec, RatVec)>,
}

/// Compares two comparison-form maps of the same dimension.
pub fn compare_net_vectors(a: &NetVectorMap, b: &NetVectorMap) -> EquivalenceVerdict {
    let (a, b) = (a.comparison(), b.comparison());
    let zero = RatVec::zeros(a.dim());
    let mut keys: Vec<&RatVec> = a.entries.keys().chain(b.entries.keys()).collect();
    keys.sort();
    keys.dedup();
    for y in keys {
        let wa = a.get(y).unwrap_or(&zero);
        let wb = b.get(y).unwrap_or(&zero);
        if wa != wb {
            return EquivalenceVerdict {
                equivalent: false,
                witness: Some((y.clone(), wa.sub(wb))),
            };
        }
    }
    EquivalenceVerdict {
        equivalent: true,
        witness: None,
    }
}

pub fn is_dynamically_equivalent(
    a: &MassActionSystem,
    b: &MassActionSystem,
) -> Result<EquivalenceVerdict, NetworkError> {
    if a.context() != b.context() {
        return Err(NetworkError::ContextMismatch);
    }
    Ok(compare_net_vectors(&net_vectors(a), &net_vectors(b)))
}

/// Random strictly positive rational points.
pub fn sample_points(dim: usize, trials: usize, seed: u64) -> Vec<RatVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    Rat::new(
                        rng.gen_range(1i64..=20).into(),
                        rng.gen_range(1i64..=7).into(),
                    )
                })
                .collect()
        })
        .collect()
}

/// Compares both vector fields exactly at `trials` random positive points.
/// Agreement is evidence, not proof.
pub fn random_point_oracle(
    a: &MassActionSystem,
    b: &MassActionSystem,
    trials: usize,
    seed: u64,
) -> Result<bool, NetworkError> {
    if a.context() != b.context() {
        return Err(NetworkError::ContextMismatch);
    }
    for x in sample_points(a.context().dim(), trials, seed) {
        if evaluate_vector_field(a, &x)? != evaluate_vector_field(b, &x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basis of the span of the nonzero net vectors.
pub fn stoichiometric_subspace_of_dynamics(m: &NetVectorMap) -> Vec<RatVec> {
    let ws: Vec<RatVec> = m
        .entries
        .values()
        .filter(|w| !w.is_zero())
        .cloned()
        .collect();
    row_space_basis(m.dim(), &ws)
}
