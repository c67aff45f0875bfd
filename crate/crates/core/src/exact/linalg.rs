//! Gauss-Jordan elimination over the rationals.

use num_traits::{One, Zero};

use super::{Rat, RatMat, RatVec};

/// Reduced row echelon form of `m` together with its pivot columns.
pub fn rref(m: &RatMat) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut rows: Vec<Vec<Rat>> = m
        .row_vectors()
        .into_iter()
        .map(RatVec::into_inner)
        .collect();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rat::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    // rows past the last pivot are identically zero
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(m: &RatMat) -> usize {
    rref(m).1.len()
}

/// Exact basis of `{x : m x = 0}`; empty when the kernel is trivial.
///
/// One vector per free column `f`, with `x_f = 1` and the other free
/// coordinates zero.
pub fn kernel_basis(m: &RatMat) -> Vec<RatVec> {
    let (rows, pivots) = rref(m);
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![Rat::zero(); n];
            x[f] = Rat::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            RatVec::new(x)
        })
        .collect()
}

/// Canonical basis (nonzero reduced rows) of the span of `vectors`.
pub fn row_space_basis(dim: usize, vectors: &[RatVec]) -> Vec<RatVec> {
    let m = RatMat::from_rows(dim, vectors);
    rref(&m).0.into_iter().map(RatVec::new).collect()
}

/// Dimension of the span of `vectors`.
pub fn span_dim(dim: usize, vectors: &[RatVec]) -> usize {
    rank(&RatMat::from_rows(dim, vectors))
}

/// Whether `v` lies in the span of `vectors`.
pub fn in_span(dim: usize, vectors: &[RatVec], v: &RatVec) -> bool {
    let base = span_dim(dim, vectors);
    let mut ext = vectors.to_vec();
    ext.push(v.clone());
    span_dim(dim, &ext) == base
}

/// Whether two families span the same subspace.
pub fn same_span(dim: usize, a: &[RatVec], b: &[RatVec]) -> bool {
    row_space_basis(dim, a) == row_space_basis(dim, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RatMat::identity(2)), 2);
        assert_eq!(rank(&RatMat::from_ints(&[&[-1, 1], &[-2, 2]])), 1);
        assert_eq!(rank(&RatMat::from_ints(&[&[-1, 1]])), 1);
        assert_eq!(rank(&RatMat::zeros(0, 3)), 0);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&RatMat::identity(2)).is_empty());
        let k = kernel_basis(&RatMat::from_ints(&[&[1, 1]]));
        assert_eq!(k, vec![RatVec::from_ints(&[-1, 1])]);

        // W with columns (-1,1) and (1,-1).
        let w = RatMat::from_columns(
            2,
            &[RatVec::from_ints(&[-1, 1]), RatVec::from_ints(&[1, -1])],
        );
        let k = kernel_basis(&w);
        assert_eq!(k.len(), 1);
        assert!(w.mul_vec(&k[0]).is_zero());
        // (1,1) is in the kernel: check by direct multiplication and proportionality.
        assert!(w.mul_vec(&RatVec::from_ints(&[1, 1])).is_zero());
        assert_eq!(k[0][0], k[0][1]);
    }

    #[test]
    fn span_helpers() {
        let a = vec![RatVec::from_ints(&[1, 0, 1]), RatVec::from_ints(&[0, 1, 1])];
        assert!(in_span(3, &a, &RatVec::from_ints(&[2, 3, 5])));
        assert!(!in_span(3, &a, &RatVec::from_ints(&[0, 0, 1])));
        let b = vec![
            RatVec::from_ints(&[1, 1, 2]),
            RatVec::from_ints(&[1, -1, 0]),
        ];
        assert!(same_span(3, &a, &b));
        assert_eq!(row_space_basis(3, &[]), Vec::<RatVec>::new());
    }

    fn small_matrix() -> impl Strategy<Value = RatMat> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |xs| {
                let rows: Vec<RatVec> = xs.chunks(c).map(RatVec::from_ints).collect();
                RatMat::from_rows(c, &rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            prop_assert_eq!(span_dim(m.cols(), &k), k.len());
        }

        #[test]
        fn rank_of_transpose(m in small_matrix()) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }

    #[test]
    fn rref_is_reduced() {
        let m = RatMat::from_ints(&[&[2, 4, 6], &[1, 2, 4]]);
        let (rows, piv) = rref(&m);
        assert_eq!(piv, vec![0, 2]);
        assert_eq!(rows[0], vec![rat(1), rat(2), rat(0)]);
        assert_eq!(rows[1], vec![rat(0), rat(0), rat(1)]);
    }
}
