//! Face enumeration for central hyperplane arrangements.
//!
//! Every face of the arrangement `{v : g·v = 0}` is relatively open inside
//! the subspace `L_Z` cut out by its zero set `Z`, which is a flat. Flats
//! are visited by increasing dimension. A chamber of the arrangement
//! restricted to `L_Y` always has a facet that is a face of a flat `X` of
//! one lower dimension, so pushing each face `q` of `X` off its hyperplane
//! in both directions, `N q ± n`, reaches every face of `Y`.
//!
//! All arithmetic is on primitive integer vectors.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::linalg::span_dim;
use crate::exact::{Rat, RatVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtlasConfig {
    /// Largest arrangement rank handled.
    pub max_dim: usize,
    /// Optional bound on the number of faces.
    pub max_cells: Option<usize>,
}

impl Default for AtlasConfig {
    fn default() -> Self {
        AtlasConfig {
            max_dim: 5,
            max_cells: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtlasError {
    #[error("network has no reactions")]
    Edgeless,
    #[error("arrangement rank {rank} exceeds the cap of {cap}; use the sampling oracle instead")]
    DimensionCap { rank: usize, cap: usize },
    #[error("more than {cap} cells; use the sampling oracle instead")]
    CellCap { cap: usize },
    #[error("zero direction")]
    ZeroDirection,
}

/// Representative directions for every face of an arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionAtlas {
    /// Distinct primitive generators, one per hyperplane.
    pub generators: Vec<RatVec>,
    /// One nonzero vector per face; the zero face has none.
    pub representatives: Vec<RatVec>,
    /// Sign of `g·r` for each representative and generator.
    pub covectors: Vec<Vec<i8>>,
    /// Number of faces, including the origin when it is a face by itself.
    pub num_cells: usize,
}

type IVec = Vec<BigInt>;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(mut v: IVec) -> IVec {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Primitive integer form with first nonzero entry positive.
fn normalize_line(v: &RatVec) -> Option<IVec> {
    if v.is_zero() {
        return None;
    }
    let mut p = v.primitive_integer();
    if p.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        for x in p.iter_mut() {
            *x = -x.clone();
        }
    }
    Some(p)
}

fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

struct Flat {
    zero: Vec<usize>,
    basis: Vec<IVec>,
    /// Distinct child flats with a generator that produces each.
    children: Vec<(usize, usize)>,
}

/// Builds the atlas of the arrangement defined by `generators` in `ℚ^dim`.
/// Zero generators and repeated lines are ignored.
pub fn atlas_from_generators(
    dim: usize,
    generators: &[RatVec],
    config: &AtlasConfig,
) -> Result<DirectionAtlas, AtlasError> {
    let mut gens: Vec<IVec> = Vec::new();
    let mut seen = HashSet::new();
    for g in generators {
        if let Some(p) = normalize_line(g) {
            if seen.insert(p.clone()) {
                gens.push(p);
            }
        }
    }

    let rank = span_dim(dim, generators);
    if rank > config.max_dim {
        return Err(AtlasError::DimensionCap {
            rank,
            cap: config.max_dim,
        });
    }

    let identity: Vec<IVec> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let closure = |basis: &[IVec]| -> Vec<usize> {
        (0..gens.len())
            .filter(|&h| basis.iter().all(|b| dot(&gens[h], b).is_zero()))
            .collect()
    };

    let mut flats = vec![Flat {
        zero: closure(&identity),
        basis: identity,
        children: Vec::new(),
    }];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(flats[0].zero.clone(), 0);
    let mut next = 0;
    while next < flats.len() {
        let (zero, basis) = (flats[next].zero.clone(), flats[next].basis.clone());
        let mut children = Vec::new();
        let mut child_seen = HashSet::new();
        for h in 0..gens.len() {
            if zero.binary_search(&h).is_ok() {
                continue;
            }
            let k = basis
                .iter()
                .position(|b| !dot(&gens[h], b).is_zero())
                .expect("h is not zero on the flat");
            let hk = dot(&gens[h], &basis[k]);
            let sub: Vec<IVec> = basis
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, b)| {
                    let hb = dot(&gens[h], b);
                    primitive(
                        b.iter()
                            .zip(&basis[k])
                            .map(|(x, y)| &hk * x - &hb * y)
                            .collect(),
                    )
                })
                .collect();
            let z = closure(&sub);
            let id = match index.get(&z) {
                Some(&id) => id,
                None => {
                    let id = flats.len();
                    index.insert(z.clone(), id);
                    flats.push(Flat {
                        zero: z,
                        basis: sub,
                        children: Vec::new(),
                    });
                    id
                }
            };
            if child_seen.insert(id) {
                children.push((id, h));
            }
        }
        flats[next].children = children;
        next += 1;
    }

    let mut order: Vec<usize> = (0..flats.len()).collect();
    order.sort_by_key(|&i| (flats[i].basis.len(), i));

    let covector = |p: &IVec| -> Vec<i8> { gens.iter().map(|g| sign(&dot(g, p))).collect() };
    let mut faces: Vec<Vec<IVec>> = vec![Vec::new(); flats.len()];
    let mut total = 0usize;
    let mut reps = Vec::new();
    let mut covectors = Vec::new();
    for &y in &order {
        let flat = &flats[y];
        let mut out: Vec<IVec> = Vec::new();
        if flat.children.is_empty() {
            let w = flat
                .basis
                .first()
                .cloned()
                .unwrap_or_else(|| vec![BigInt::zero(); dim]);
            out.push(w);
        } else {
            let mut local = HashSet::new();
            for &(x, h) in &flat.children {
                let n = flat
                    .basis
                    .iter()
                    .find(|b| !dot(&gens[h], b).is_zero())
                    .expect("child hyperplane is not zero on the flat");
                for q in &faces[x] {
                    let mut big = BigInt::zero();
                    for g in &gens {
                        let gq = dot(g, q).abs();
                        if !gq.is_zero() {
                            let r = dot(g, n).abs() / &gq;
                            if r > big {
                                big = r;
                            }
                        }
                    }
                    let big = big + 1;
                    for s in [1i32, -1] {
                        let p: IVec = primitive(
                            q.iter()
                                .zip(n)
                                .map(|(qi, ni)| &big * qi + ni * BigInt::from(s))
                                .collect(),
                        );
                        if local.insert(covector(&p)) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        total += out.len();
        if let Some(cap) = config.max_cells {
            if total > cap {
                return Err(AtlasError::CellCap { cap });
            }
        }
        for p in &out {
            if p.iter().any(|x| !x.is_zero()) {
                covectors.push(covector(p));
                reps.push(p.iter().map(|x| Rat::from_integer(x.clone())).collect());
            }
        }
        faces[y] = out;
    }

    Ok(DirectionAtlas {
        generators: gens
            .into_iter()
            .map(|g| g.into_iter().map(Rat::from_integer).collect())
            .collect(),
        representatives: reps,
        covectors,
        num_cells: total,
    })
}
