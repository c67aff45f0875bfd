//! Reaction networks as directed graphs embedded in ℚⁿ.

mod analysis;

pub(crate) use analysis::strong_components;
pub use analysis::{
    check_complex_balanced, cone_equals_span, conservation_problem, deficiency,
    evaluate_vector_field, is_conservative, is_consistent, is_weakly_reversible, linkage_classes,
    monomial, stoichiometric_subspace, ComplexBalance, StructuralReport, WeakReversibility,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Signed;

use crate::exact::{Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("duplicate species name `{0}`")]
    DuplicateSpecies(String),
    #[error("invalid species name `{0}`")]
    InvalidSpecies(String),
    #[error("vertex {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {0} appears twice")]
    DuplicateVertex(String),
    #[error("reaction {0} refers to a vertex index out of range")]
    IndexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(String),
    #[error("reaction {0} -> {1} appears twice")]
    DuplicateReaction(String, String),
    #[error("expected {expected} rates, got {found}")]
    RateCount { expected: usize, found: usize },
    #[error("rate {0} is not strictly positive")]
    NonPositiveRate(String),
    #[error("network has no reactions")]
    Edgeless,
    #[error("point {0} is not strictly positive")]
    NonPositivePoint(String),
    #[error("point has dimension {found}, expected {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("vertex {0} is not a nonnegative integer exponent vector")]
    NonIntegerExponent(String),
    #[error("species contexts differ")]
    ContextMismatch,
}

/// Ordered species names; the order fixes the coordinate order.
///
/// Anonymous contexts come from inputs that only use raw coordinates and
/// carry generated names `x1, x2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpeciesContext {
    names: Vec<String>,
    named: bool,
}

impl SpeciesContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, NetworkError> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(NetworkError::InvalidSpecies(n.to_string()));
            }
            if !seen.insert(n) {
                return Err(NetworkError::DuplicateSpecies(n.to_string()));
            }
            out.push(n.to_string());
        }
        Ok(SpeciesContext {
            names: out,
            named: true,
        })
    }

    pub fn anonymous(n: usize) -> Self {
        SpeciesContext {
            names: (1..=n).map(|i| format!("x{i}")).collect(),
            named: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_named(&self) -> bool {
        self.named
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Letters, digits and underscores, not starting with a digit.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Reaction {
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReactionNetwork {
    context: SpeciesContext,
    vertices: Vec<RatVec>,
    reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    pub fn new(
        context: SpeciesContext,
        vertices: Vec<RatVec>,
        reactions: Vec<Reaction>,
    ) -> Result<Self, NetworkError> {
        let n = context.dim();
        let mut index: HashMap<&RatVec, usize> = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.dim() != n {
                return Err(NetworkError::DimensionMismatch {
                    index: i,
                    expected: n,
                    found: v.dim(),
                });
            }
            if index.insert(v, i).is_some() {
                return Err(NetworkError::DuplicateVertex(format!("[{v}]")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for (e, r) in reactions.iter().enumerate() {
            if r.source >= vertices.len() || r.target >= vertices.len() {
                return Err(NetworkError::IndexOutOfRange(e));
            }
            if r.source == r.target {
                return Err(NetworkError::SelfLoop(format!("[{}]", vertices[r.source])));
            }
            if !seen.insert(*r) {
                return Err(NetworkError::DuplicateReaction(
                    format!("[{}]", vertices[r.source]),
                    format!("[{}]", vertices[r.target]),
                ));
            }
        }
        Ok(ReactionNetwork {
            context,
            vertices,
            reactions,
        })
    }

    /// Builds a network from coordinate pairs; vertices are numbered in order
    /// of first appearance.
    pub fn from_edges(
        context: SpeciesContext,
        edges: &[(RatVec, RatVec)],
    ) -> Result<Self, NetworkError> {
        Self::from_parts(context, &[], edges)
    }

    /// Like [`from_edges`](Self::from_edges), with `isolated` vertices listed first.
    pub fn from_parts(
        context: SpeciesContext,
        isolated: &[RatVec],
        edges: &[(RatVec, RatVec)],
    ) -> Result<Self, NetworkError> {
        let mut vertices = Vec::new();
        let mut index: HashMap<RatVec, usize> = HashMap::new();
        let mut intern = |v: &RatVec, vertices: &mut Vec<RatVec>| {
            *index.entry(v.clone()).or_insert_with(|| {
                vertices.push(v.clone());
                vertices.len() - 1
            })
        };
        for v in isolated {
            intern(v, &mut vertices);
        }
        let reactions = edges
            .iter()
            .map(|(s, t)| Reaction {
                source: intern(s, &mut vertices),
                target: intern(t, &mut vertices),
            })
            .collect();
        Self::new(context, vertices, reactions)
    }

    pub fn context(&self) -> &SpeciesContext {
        &self.context
    }

    pub fn dim(&self) -> usize {
        self.context.dim()
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &RatVec {
        &self.vertices[i]
    }

    pub fn vertex_index(&self, v: &RatVec) -> Option<usize> {
        self.vertices.iter().position(|w| w == v)
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn source(&self, e: usize) -> &RatVec {
        &self.vertices[self.reactions[e].source]
    }

    pub fn target(&self, e: usize) -> &RatVec {
        &self.vertices[self.reactions[e].target]
    }

    /// `y′ − y` for reaction `e`.
    pub fn reaction_vector(&self, e: usize) -> RatVec {
        self.target(e).sub(self.source(e))
    }

    pub fn reaction_vectors(&self) -> Vec<RatVec> {
        (0..self.reactions.len())
            .map(|e| self.reaction_vector(e))
            .collect()
    }

    /// Indices of vertices with at least one outgoing reaction, ascending.
    pub fn source_indices(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.reactions.iter().map(|r| r.source).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Indices of vertices that take part in no reaction.
    pub fn isolated_indices(&self) -> Vec<usize> {
        let mut used = vec![false; self.vertices.len()];
        for r in &self.reactions {
            used[r.source] = true;
            used[r.target] = true;
        }
        (0..self.vertices.len()).filter(|&i| !used[i]).collect()
    }

    /// Keeps the reactions whose indices are listed, and every vertex.
    pub fn with_reactions(&self, keep: &[usize]) -> ReactionNetwork {
        ReactionNetwork {
            context: self.context.clone(),
            vertices: self.vertices.clone(),
            reactions: keep.iter().map(|&e| self.reactions[e]).collect(),
        }
    }

    /// Drops vertices that take part in no reaction, renumbering the rest.
    pub fn prune_isolated(&self) -> ReactionNetwork {
        let isolated = self.isolated_indices();
        if isolated.is_empty() {
            return self.clone();
        }
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if isolated.binary_search(&i).is_err() {
                map[i] = vertices.len();
                vertices.push(v.clone());
            }
        }
        let reactions = self
            .reactions
            .iter()
            .map(|r| Reaction {
                source: map[r.source],
                target: map[r.target],
            })
            .collect();
        ReactionNetwork {
            context: self.context.clone(),
            vertices,
            reactions,
        }
    }

    /// Edge set as coordinate pairs in a canonical order, for structural comparison.
    pub fn edge_set(&self) -> Vec<(RatVec, RatVec)> {
        let mut out: Vec<_> = (0..self.reactions.len())
            .map(|e| (self.source(e).clone(), self.target(e).clone()))
            .collect();
        out.sort();
        out
    }

    /// Vertex coordinates in sorted order.
    pub fn vertex_set(&self) -> Vec<RatVec> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }
}

/// A network with one strictly positive rate per reaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassActionSystem {
    network: ReactionNetwork,
    rates: Vec<Rat>,
}

impl MassActionSystem {
    pub fn new(network: ReactionNetwork, rates: Vec<Rat>) -> Result<Self, NetworkError> {
        if rates.len() != network.num_reactions() {
            return Err(NetworkError::RateCount {
                expected: network.num_reactions(),
                found: rates.len(),
            });
        }
        if let Some(k) = rates.iter().find(|k| !k.is_positive()) {
            return Err(NetworkError::NonPositiveRate(crate::exact::fmt_rat(k)));
        }
        Ok(MassActionSystem { network, rates })
    }

    /// Builds a system from weighted coordinate pairs. Repeated pairs merge by
    /// summing their rates.
    pub fn from_weighted_edges(
        context: SpeciesContext,
        edges: &[(RatVec, RatVec, Rat)],
    ) -> Result<Self, NetworkError> {
        Self::from_weighted_parts(context, &[], edges)
    }

    pub fn from_weighted_parts(
        context: SpeciesContext,
        isolated: &[RatVec],
        edges: &[(RatVec, RatVec, Rat)],
    ) -> Result<Self, NetworkError> {
        let mut order: Vec<(RatVec, RatVec)> = Vec::new();
        let mut sums: HashMap<(RatVec, RatVec), Rat> = HashMap::new();
        for (s, t, k) in edges {
            let key = (s.clone(), t.clone());
            match sums.get_mut(&key) {
                Some(acc) => *acc += k,
                None => {
                    order.push(key.clone());
                    sums.insert(key, k.clone());
                }
            }
        }
        let rates = order.iter().map(|key| sums[key].clone()).collect();
        let network = ReactionNetwork::from_parts(context, isolated, &order)?;
        Self::new(network, rates)
    }

    pub fn network(&self) -> &ReactionNetwork {
        &self.network
    }

    pub fn rates(&self) -> &[Rat] {
        &self.rates
    }

    pub fn rate(&self, e: usize) -> &Rat {
        &self.rates[e]
    }

    pub fn context(&self) -> &SpeciesContext {
        self.network.context()
    }

    /// Keeps the listed reactions with their rates, and every vertex.
    pub fn with_reactions(&self, keep: &[usize]) -> MassActionSystem {
        MassActionSystem {
            network: self.network.with_reactions(keep),
            rates: keep.iter().map(|&e| self.rates[e].clone()).collect(),
        }
    }

    pub fn prune_isolated(&self) -> MassActionSystem {
        MassActionSystem {
            network: self.network.prune_isolated(),
            rates: self.rates.clone(),
        }
    }

    /// Weighted edge set in canonical order.
    pub fn weighted_edge_set(&self) -> BTreeMap<(RatVec, RatVec), Rat> {
        (0..self.network.num_reactions())
            .map(|e| {
                (
                    (
                        self.network.source(e).clone(),
                        self.network.target(e).clone(),
                    ),
                    self.rates[e].clone(),
                )
            })
            .collect()
    }
}

impl fmt::Display for ReactionNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, r) in self.reactions.iter().enumerate() {
            if e > 0 {
                write!(f, "; ")?;
            }
            write!(
                f,
                "[{}] -> [{}]",
                self.vertices[r.source], self.vertices[r.target]
            )?;
        }
        Ok(())
    }
}
