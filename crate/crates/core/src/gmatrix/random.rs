//! Seeded generators of test matrices.

use std::sync::Arc;

use rand::Rng;

use super::{GradedMatrix, MatrixError};
use crate::algebra::{Algebra, AlgebraElement};
use crate::grading::{Degree, RankVector};
use crate::scalar::Scalar;

const MAX_RETRIES: usize = 200;

fn small<C: Scalar, R: Rng + ?Sized>(rng: &mut R) -> C {
    C::from_i64(rng.gen_range(-3..=3))
}

/// A random homogeneous element of degree `d`; may be zero.
pub fn random_element<C: Scalar, R: Rng + ?Sized>(alg: &Arc<Algebra<C>>, d: Degree, rng: &mut R) -> AlgebraElement<C> {
    let mut e = AlgebraElement::zero(alg);
    for m in alg.monomials_of_degree(d) {
        if rng.gen_bool(0.6) {
            e = e + AlgebraElement::monomial(alg, m, small(rng));
        }
    }
    e
}

/// A random homogeneous matrix of the given degree and shape.
pub fn random_matrix<C: Scalar, R: Rng + ?Sized>(
    alg: &Arc<Algebra<C>>,
    degree: Degree,
    rows: &RankVector,
    cols: &RankVector,
    rng: &mut R,
) -> GradedMatrix<C> {
    let expected =
        |i: usize, j: usize| rows.block_degree(rows.block_of(i)) + cols.block_degree(cols.block_of(j)) + degree;
    GradedMatrix::from_fn(alg, degree, rows.clone(), cols.clone(), |i, j| {
        random_element(alg, expected(i, j), rng)
    })
    .expect("generated entries respect the block rule")
}

/// A random degree-0 invertible matrix with zero off-diagonal blocks.
pub fn random_block_diagonal<C: Scalar, R: Rng + ?Sized>(
    alg: &Arc<Algebra<C>>,
    ranks: &RankVector,
    rng: &mut R,
) -> Result<GradedMatrix<C>, MatrixError> {
    let zero = Degree::zero(alg.n());
    for _ in 0..MAX_RETRIES {
        let m = GradedMatrix::from_fn(alg, zero, ranks.clone(), ranks.clone(), |i, j| {
            if ranks.block_of(i) == ranks.block_of(j) {
                let mut e = random_element(alg, zero, rng);
                if i == j && rng.gen_bool(0.5) {
                    e = e + AlgebraElement::one(alg);
                }
                e
            } else {
                AlgebraElement::zero(alg)
            }
        })?;
        if m.invert().is_ok() {
            return Ok(m);
        }
    }
    Err(MatrixError::NotInvertible)
}

/// Identity diagonal blocks and random entries strictly above (`upper`) or below them.
pub fn random_unitriangular<C: Scalar, R: Rng + ?Sized>(
    alg: &Arc<Algebra<C>>,
    ranks: &RankVector,
    upper: bool,
    rng: &mut R,
) -> GradedMatrix<C> {
    let zero = Degree::zero(alg.n());
    GradedMatrix::from_fn(alg, zero, ranks.clone(), ranks.clone(), |i, j| {
        let (u, v) = (ranks.block_of(i), ranks.block_of(j));
        if u == v {
            if i == j {
                AlgebraElement::one(alg)
            } else {
                AlgebraElement::zero(alg)
            }
        } else if (u < v) == upper {
            random_element(alg, ranks.block_degree(u) + ranks.block_degree(v), rng)
        } else {
            AlgebraElement::zero(alg)
        }
    })
    .expect("generated entries respect the block rule")
}

/// U·D·L with random factors; always decomposable in the forward order.
pub fn random_decomposable<C: Scalar, R: Rng + ?Sized>(
    alg: &Arc<Algebra<C>>,
    ranks: &RankVector,
    rng: &mut R,
) -> Result<GradedMatrix<C>, MatrixError> {
    let u = random_unitriangular(alg, ranks, true, rng);
    let d = random_block_diagonal(alg, ranks, rng)?;
    let l = random_unitriangular(alg, ranks, false, rng);
    u.checked_mul(&d)?.checked_mul(&l)
}
