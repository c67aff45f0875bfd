use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;

use super::{MassActionSystem, NetworkError, ReactionNetwork};
use crate::exact::{
    lp_feasible, rank, row_space_basis, stiemke_alternative, FeasibilityCertificate, LpProblem,
    Rat, RatMat, RatVec, VarKind,
};

/// Connected components of the undirected graph, each sorted, ordered by
/// smallest vertex index. Isolated vertices form singleton classes.
pub fn linkage_classes(g: &ReactionNetwork) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let mut uf = UnionFind::<usize>::new(n);
    for r in g.reactions() {
        uf.union(r.source, r.target);
    }
    let labels = uf.into_labeling();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for v in 0..n {
        let root = labels[v];
        if slot[root] == usize::MAX {
            slot[root] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[root]].push(v);
    }
    classes
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakReversibility {
    pub weakly_reversible: bool,
    /// A reaction joining two different strong components, when not weakly reversible.
    pub witness: Option<usize>,
}

/// Strong component label of every vertex.
pub(crate) fn strong_components(g: &ReactionNetwork) -> Vec<usize> {
    let mut dg = DiGraph::<(), ()>::with_capacity(g.num_vertices(), g.num_reactions());
    let nodes: Vec<_> = (0..g.num_vertices()).map(|_| dg.add_node(())).collect();
    for r in g.reactions() {
        dg.add_edge(nodes[r.source], nodes[r.target], ());
    }
    let mut comp = vec![0; g.num_vertices()];
    for (c, scc) in tarjan_scc(&dg).into_iter().enumerate() {
        for v in scc {
            comp[v.index()] = c;
        }
    }
    comp
}

pub fn is_weakly_reversible(g: &ReactionNetwork) -> WeakReversibility {
    let comp = strong_components(g);
    let witness = g
        .reactions()
        .iter()
        .position(|r| comp[r.source] != comp[r.target]);
    WeakReversibility {
        weakly_reversible: witness.is_none(),
        witness,
    }
}

/// Basis of `S = span{y′ − y}`; empty for edgeless networks.
pub fn stoichiometric_subspace(g: &ReactionNetwork) -> Vec<RatVec> {
    row_space_basis(g.dim(), &g.reaction_vectors())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub num_vertices: usize,
    pub linkage_classes: Vec<Vec<usize>>,
    pub weakly_reversible: bool,
    pub stoich_basis: Vec<RatVec>,
    pub dim_s: usize,
    pub deficiency: i64,
    pub per_class_deficiency: Vec<i64>,
}

pub fn deficiency(g: &ReactionNetwork) -> StructuralReport {
    let classes = linkage_classes(g);
    let stoich_basis = stoichiometric_subspace(g);
    let dim_s = stoich_basis.len();
    let mut class_of = vec![0; g.num_vertices()];
    for (c, cl) in classes.iter().enumerate() {
        for &v in cl {
            class_of[v] = c;
        }
    }
    let mut vectors: Vec<Vec<RatVec>> = vec![Vec::new(); classes.len()];
    for (e, r) in g.reactions().iter().enumerate() {
        vectors[class_of[r.source]].push(g.reaction_vector(e));
    }
    let per_class_deficiency = classes
        .iter()
        .zip(&vectors)
        .map(|(cl, vs)| cl.len() as i64 - 1 - rank(&RatMat::from_rows(g.dim(), vs)) as i64)
        .collect();
    StructuralReport {
        num_vertices: g.num_vertices(),
        weakly_reversible: is_weakly_reversible(g).weakly_reversible,
        deficiency: g.num_vertices() as i64 - classes.len() as i64 - dim_s as i64,
        linkage_classes: classes,
        stoich_basis,
        dim_s,
        per_class_deficiency,
    }
}

/// Positive `λ` with `Σ λ_e (y′ − y) = 0`, or a Stiemke separator.
pub fn is_consistent(g: &ReactionNetwork) -> Result<FeasibilityCertificate, NetworkError> {
    if g.num_reactions() == 0 {
        return Err(NetworkError::Edgeless);
    }
    Ok(stiemke_alternative(&g.reaction_vectors()).expect("reaction vectors share a dimension"))
}

/// Whether every `−(y′ − y)` lies in the convex cone of the reaction vectors.
pub fn cone_equals_span(g: &ReactionNetwork) -> Result<bool, NetworkError> {
    if g.num_reactions() == 0 {
        return Err(NetworkError::Edgeless);
    }
    let vs = g.reaction_vectors();
    let a = RatMat::from_columns(g.dim(), &vs);
    for v in &vs {
        let p = LpProblem::nonneg(a.clone(), v.neg()).expect("dimensions agree");
        if !lp_feasible(&p).expect("certified LP").is_solution() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A c = 0` with `c > 0`, one row of `A` per reaction vector. A solution is a
/// conservation law; a separator is a nonpositive nonzero combination of
/// reaction vectors.
pub fn conservation_problem(g: &ReactionNetwork) -> LpProblem {
    let rows = g.reaction_vectors();
    LpProblem::new(
        RatMat::from_rows(g.dim(), &rows),
        RatVec::zeros(rows.len()),
        vec![VarKind::Positive; g.dim()],
    )
    .expect("dimensions agree")
}

/// A strictly positive vector orthogonal to `S`, scaled to a primitive
/// integer vector, or `None` if there is none.
pub fn is_conservative(g: &ReactionNetwork) -> Option<RatVec> {
    if g.num_reactions() == 0 {
        return Some(RatVec::ones(g.dim()));
    }
    let cert = lp_feasible(&conservation_problem(g)).expect("certified LP");
    cert.solution().map(|v| {
        v.primitive_integer()
            .into_iter()
            .map(Rat::from_integer)
            .collect()
    })
}

pub fn monomial(x: &RatVec, y: &RatVec) -> Result<Rat, NetworkError> {
    let mut acc = Rat::one();
    for (xi, yi) in x.iter().zip(y.iter()) {
        let e = (yi.is_integer() && !yi.is_negative())
            .then(|| yi.to_integer().to_u32())
            .flatten()
            .ok_or_else(|| NetworkError::NonIntegerExponent(format!("[{y}]")))?;
        if e > 0 {
            acc *= num_traits::pow::pow(xi.clone(), e as usize);
        }
    }
    Ok(acc)
}

fn check_point(g: &ReactionNetwork, x: &RatVec) -> Result<(), NetworkError> {
    if x.dim() != g.dim() {
        return Err(NetworkError::PointDimension {
            expected: g.dim(),
            found: x.dim(),
        });
    }
    if !x.is_strictly_positive() {
        return Err(NetworkError::NonPositivePoint(format!("[{x}]")));
    }
    Ok(())
}

/// `Σ_e k_e x^{y_e} (y′_e − y_e)`.
pub fn evaluate_vector_field(sys: &MassActionSystem, x: &RatVec) -> Result<RatVec, NetworkError> {
    let g = sys.network();
    check_point(g, x)?;
    let mut out = RatVec::zeros(g.dim());
    for e in 0..g.num_reactions() {
        let flux = sys.rate(e) * monomial(x, g.source(e))?;
        out.add_scaled(&flux, &g.reaction_vector(e));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBalance {
    pub balanced: bool,
    /// Inflow minus outflow at each vertex.
    pub residuals: Vec<Rat>,
}

pub fn check_complex_balanced(
    sys: &MassActionSystem,
    x0: &RatVec,
) -> Result<ComplexBalance, NetworkError> {
    let g = sys.network();
    check_point(g, x0)?;
    let mut residuals = vec![Rat::zero(); g.num_vertices()];
    for (e, r) in g.reactions().iter().enumerate() {
        let flux = sys.rate(e) * monomial(x0, g.source(e))?;
        residuals[r.target] += &flux;
        residuals[r.source] -= flux;
    }
    Ok(ComplexBalance {
        balanced: residuals.iter().all(Zero::is_zero),
        residuals,
    })
}
