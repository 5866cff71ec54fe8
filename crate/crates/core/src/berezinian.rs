//! Graded Berezinian of degree-0 invertible matrices.
//!
//! The value is fixed by two rules: on block-diagonal matrices it is
//! Π_{u≤q} det(Xᵤᵤ) · Π_{u>q} det(Xᵤᵤ)⁻¹, and on block-unitriangular ones it
//! is 1. We factor T into unitriangular·diagonal·unitriangular by block
//! elimination and apply the first rule to the middle factor.

use std::sync::Arc;

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraElement, AlgebraError, Monomial, Presentation};
use crate::gmatrix::{GradedMatrix, MatrixError};
use crate::grading::{Degree, GradingError, RankVector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BerError {
    #[error("matrix has degree {0}, degree 0 is required")]
    NotDegreeZero(Degree),
    #[error("matrix is not square")]
    NotSquare,
    #[error("entry ({0}, {1}) of a determinant block is not of degree 0")]
    NonCentralEntry(usize, usize),
    #[error("no block decomposition: a pivot block is not invertible in either elimination order")]
    DecompositionFailed,
    #[error("determinant is not invertible; the matrix is not in GL⁰")]
    NotInvertible,
    #[error("{0}")]
    WrongAlgebra(&'static str),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

type Grid<C> = Vec<Vec<AlgebraElement<C>>>;

/// Which elimination order produced the factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// T = upper · diag · lower, pivoting from the last block.
    Udl,
    /// T = lower · diag · upper, pivoting from the first block.
    Ldu,
}

#[derive(Clone)]
pub struct UDLFactors<C> {
    pub upper: GradedMatrix<C>,
    pub diag: GradedMatrix<C>,
    pub lower: GradedMatrix<C>,
    pub order: Order,
}

impl<C: Scalar> std::fmt::Debug for UDLFactors<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UDLFactors")
            .field("order", &self.order)
            .field("upper", &self.upper)
            .field("diag", &self.diag)
            .field("lower", &self.lower)
            .finish()
    }
}

impl<C: Scalar> UDLFactors<C> {
    /// Multiplies the factors back together in their order.
    pub fn recompose(&self) -> GradedMatrix<C> {
        let (a, b) = match self.order {
            Order::Udl => (&self.upper, &self.lower),
            Order::Ldu => (&self.lower, &self.upper),
        };
        a.checked_mul(&self.diag)
            .and_then(|m| m.checked_mul(b))
            .expect("factors share one shape")
    }
}

/// Determinant of a square array of degree-0 entries by cofactor expansion.
pub fn det_commutative<C: Scalar>(
    alg: &Arc<Algebra<C>>,
    block: &[Vec<AlgebraElement<C>>],
) -> Result<AlgebraElement<C>, BerError> {
    let zero = Degree::zero(alg.n());
    for (i, row) in block.iter().enumerate() {
        if row.len() != block.len() {
            return Err(BerError::NotSquare);
        }
        for (j, e) in row.iter().enumerate() {
            if !e.has_degree(zero) {
                return Err(BerError::NonCentralEntry(i, j));
            }
        }
    }
    let cols: Vec<usize> = (0..block.len()).collect();
    Ok(cofactor(alg, block, 0, &cols))
}

fn cofactor<C: Scalar>(
    alg: &Arc<Algebra<C>>,
    block: &[Vec<AlgebraElement<C>>],
    row: usize,
    cols: &[usize],
) -> AlgebraElement<C> {
    if cols.is_empty() {
        return AlgebraElement::one(alg);
    }
    let mut acc = AlgebraElement::zero(alg);
    for (pos, &c) in cols.iter().enumerate() {
        let e = &block[row][c];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = e * &cofactor(alg, block, row + 1, &rest);
        acc = if pos % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

struct Blocks<'a, C> {
    alg: &'a Arc<Algebra<C>>,
    ranks: &'a RankVector,
}

impl<C: Scalar> Blocks<'_, C> {
    fn get(&self, m: &Grid<C>, u: usize, v: usize) -> Grid<C> {
        self.ranks
            .block_range(u)
            .map(|i| self.ranks.block_range(v).map(|j| m[i][j].clone()).collect())
            .collect()
    }

    fn set(&self, m: &mut Grid<C>, u: usize, v: usize, b: &Grid<C>) {
        for (bi, i) in self.ranks.block_range(u).enumerate() {
            for (bj, j) in self.ranks.block_range(v).enumerate() {
                m[i][j] = b[bi][bj].clone();
            }
        }
    }

    fn zero_block(&self, u: usize, v: usize) -> Grid<C> {
        let w = self.ranks.ranks()[v];
        vec![vec![AlgebraElement::zero(self.alg); w]; self.ranks.ranks()[u]]
    }

    fn identity(&self) -> Grid<C> {
        let r = self.ranks.total();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        if i == j {
                            AlgebraElement::one(self.alg)
                        } else {
                            AlgebraElement::zero(self.alg)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Inverse of the degree-0 diagonal block `u`, or `None` if singular.
    fn invert(&self, u: usize, b: &Grid<C>) -> Option<Grid<C>> {
        let mut sizes = vec![0; self.ranks.blocks()];
        sizes[u] = self.ranks.ranks()[u];
        let single = RankVector::new(self.alg.n(), sizes).expect("valid sizes");
        let m = GradedMatrix::new(self.alg, Degree::zero(self.alg.n()), single.clone(), single, b.clone()).ok()?;
        m.invert().ok().map(|inv| inv.to_rows())
    }

    fn matrix(&self, m: Grid<C>) -> Result<GradedMatrix<C>, MatrixError> {
        GradedMatrix::new(
            self.alg,
            Degree::zero(self.alg.n()),
            self.ranks.clone(),
            self.ranks.clone(),
            m,
        )
    }
}

fn mul<C: Scalar>(alg: &Arc<Algebra<C>>, a: &Grid<C>, b: &Grid<C>) -> Grid<C> {
    let inner = b.len();
    let width = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..width)
                .map(|j| {
                    let mut acc = AlgebraElement::zero(alg);
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc + &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn sub<C: Scalar>(a: &Grid<C>, b: &Grid<C>) -> Grid<C> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

fn check_degree_zero_square<C: Scalar>(t: &GradedMatrix<C>) -> Result<(), BerError> {
    if !t.is_square() {
        return Err(BerError::NotSquare);
    }
    if !t.degree().is_zero() {
        return Err(BerError::NotDegreeZero(t.degree()));
    }
    Ok(())
}

/// Block elimination in one pivot order; `None` when a pivot block is singular.
fn eliminate<C: Scalar>(t: &GradedMatrix<C>, order: Order) -> Result<Option<UDLFactors<C>>, BerError> {
    let alg = t.algebra();
    let ranks = t.row_ranks();
    let bl = Blocks { alg, ranks };
    let live: Vec<usize> = (0..ranks.blocks()).filter(|&u| ranks.ranks()[u] > 0).collect();
    let pivots: Vec<usize> = match order {
        Order::Udl => live.iter().rev().copied().collect(),
        Order::Ldu => live.clone(),
    };
    let mut m = t.to_rows();
    // "left" collects column eliminations (above the pivot for UDL), "right" the row ones
    let mut left = bl.identity();
    let mut right = bl.identity();
    for (step, &p) in pivots.iter().enumerate() {
        let pivot = bl.get(&m, p, p);
        let Some(inv) = bl.invert(p, &pivot) else {
            return Ok(None);
        };
        let rest = &pivots[step + 1..];
        let col_factors: Vec<(usize, Grid<C>)> = rest.iter().map(|&u| (u, mul(alg, &bl.get(&m, u, p), &inv))).collect();
        let row_factors: Vec<(usize, Grid<C>)> = rest.iter().map(|&v| (v, mul(alg, &inv, &bl.get(&m, p, v)))).collect();
        for (u, x) in &col_factors {
            for &v in rest {
                let updated = sub(&bl.get(&m, *u, v), &mul(alg, x, &bl.get(&m, p, v)));
                bl.set(&mut m, *u, v, &updated);
            }
            bl.set(&mut left, *u, p, x);
            bl.set(&mut m, *u, p, &bl.zero_block(*u, p));
        }
        for (v, y) in &row_factors {
            bl.set(&mut right, p, *v, y);
            bl.set(&mut m, p, *v, &bl.zero_block(p, *v));
        }
    }
    let (left, diag, right) = (bl.matrix(left)?, bl.matrix(m)?, bl.matrix(right)?);
    let factors = match order {
        Order::Udl => UDLFactors {
            upper: left,
            diag,
            lower: right,
            order,
        },
        Order::Ldu => UDLFactors {
            lower: left,
            diag,
            upper: right,
            order,
        },
    };
    Ok(Some(factors))
}

/// Factors T as U·D·L (or L·D·U if the first order hits a singular pivot).
pub fn udl_decompose<C: Scalar>(t: &GradedMatrix<C>) -> Result<UDLFactors<C>, BerError> {
    check_degree_zero_square(t)?;
    for order in [Order::Udl, Order::Ldu] {
        if let Some(f) = eliminate(t, order)? {
            debug_assert!(f.recompose().approx_eq(t));
            return Ok(f);
        }
    }
    Err(BerError::DecompositionFailed)
}

/// Π_{u≤q} det(Dᵤᵤ) · Π_{u>q} det(Dᵤᵤ)⁻¹ for a block-diagonal D.
pub fn block_diagonal_ber<C: Scalar>(d: &GradedMatrix<C>) -> Result<AlgebraElement<C>, BerError> {
    let alg = d.algebra();
    let ranks = d.row_ranks();
    let mut acc = AlgebraElement::one(alg);
    for u in 0..ranks.blocks() {
        if ranks.ranks()[u] == 0 {
            continue;
        }
        let det = det_commutative(alg, &d.block(u, u))?;
        let factor = if u < ranks.q() {
            det
        } else {
            det.invert().map_err(|_| BerError::NotInvertible)?
        };
        acc = acc * factor;
    }
    Ok(acc)
}

/// The graded Berezinian through block decomposition.
pub fn gber<C: Scalar>(t: &GradedMatrix<C>) -> Result<AlgebraElement<C>, BerError> {
    let f = udl_decompose(t)?;
    let ber = block_diagonal_ber(&f.diag)?;
    if ber.invert().is_err() {
        return Err(BerError::NotInvertible);
    }
    Ok(ber)
}

/// Closed form det(A − BD⁻¹C)·det(D)⁻¹ on the (even | odd) partition; n = 1 only.
pub fn super_ber_oracle<C: Scalar>(t: &GradedMatrix<C>) -> Result<AlgebraElement<C>, BerError> {
    check_degree_zero_square(t)?;
    if t.algebra().n() != 1 {
        return Err(BerError::WrongAlgebra("the super closed form needs n = 1"));
    }
    let alg = t.algebra();
    let p = t.row_ranks().ranks()[0];
    let rows = t.to_rows();
    let split = |rs: std::ops::Range<usize>, cs: std::ops::Range<usize>| -> Grid<C> {
        rows[rs].iter().map(|r| r[cs.clone()].to_vec()).collect()
    };
    let r = rows.len();
    let (a, b, c, d) = (
        split(0..p, 0..p),
        split(0..p, p..r),
        split(p..r, 0..p),
        split(p..r, p..r),
    );
    let d_inv = GradedMatrix::new(
        alg,
        Degree::zero(1),
        RankVector::new(1, vec![0, r - p])?,
        RankVector::new(1, vec![0, r - p])?,
        d.clone(),
    )?
    .invert()
    .map_err(|_| BerError::NotInvertible)?
    .to_rows();
    let schur = sub(&a, &mul(alg, &mul(alg, &b, &d_inv), &c));
    let det_d = det_commutative(alg, &d)?
        .invert()
        .map_err(|_| BerError::NotInvertible)?;
    Ok(det_commutative(alg, &schur)? * det_d)
}

/// Study determinant of a quaternionic matrix: √|det| of its 2r × 2r complex image.
pub fn study_det_oracle<C: Scalar>(t: &GradedMatrix<C>) -> Result<f64, BerError> {
    check_degree_zero_square(t)?;
    if t.algebra().presentation() != &Presentation::quaternion() {
        return Err(BerError::WrongAlgebra(
            "the Study determinant needs the quaternion preset",
        ));
    }
    let r = t.nrows();
    let (i, j, k): (Monomial, Monomial, Monomial) = (0b01, 0b10, 0b11);
    let mut m = DMatrix::<Complex<f64>>::zeros(2 * r, 2 * r);
    for row in 0..r {
        for col in 0..r {
            let e = t.get(row, col);
            let coeff = |mono| e.coefficient(mono).to_f64();
            let (a, b, c, d) = (coeff(0), coeff(i), coeff(j), coeff(k));
            m[(2 * row, 2 * col)] = Complex::new(a, b);
            m[(2 * row, 2 * col + 1)] = Complex::new(c, d);
            m[(2 * row + 1, 2 * col)] = Complex::new(-c, d);
            m[(2 * row + 1, 2 * col + 1)] = Complex::new(a, -b);
        }
    }
    Ok(m.determinant().norm().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;
    use crate::gmatrix::random::{random_block_diagonal, random_decomposable, random_unitriangular};
    use crate::gmatrix::ranks;
    use crate::scalar::Rational;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = Rational;

    fn el(a: &Arc<Algebra<Q>>, s: &str) -> AlgebraElement<Q> {
        parse_element(a, s).unwrap()
    }

    fn mat(a: &Arc<Algebra<Q>>, r: &RankVector, rows: &[&[&str]]) -> GradedMatrix<Q> {
        let entries = rows.iter().map(|row| row.iter().map(|s| el(a, s)).collect()).collect();
        GradedMatrix::new(a, Degree::zero(a.n()), r.clone(), r.clone(), entries).unwrap()
    }

    fn grassmann(k: usize) -> Arc<Algebra<Q>> {
        Algebra::new(Presentation::grassmann(k).unwrap())
    }

    #[test]
    fn det_examples() {
        let g = grassmann(2);
        assert_eq!(det_commutative(&g, &[vec![el(&g, "2")]]).unwrap(), el(&g, "2"));
        let b = vec![vec![el(&g, "1 + t1*t2"), el(&g, "0")], vec![el(&g, "0"), el(&g, "1")]];
        assert_eq!(det_commutative(&g, &b).unwrap(), el(&g, "1 + t1*t2"));
        let odd = vec![vec![el(&g, "t1")]];
        assert_eq!(det_commutative(&g, &odd), Err(BerError::NonCentralEntry(0, 0)));
    }

    #[test]
    fn det_is_multiplicative() {
        let g = grassmann(3);
        let r = ranks(1, &[3, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = crate::gmatrix::random::random_matrix(&g, Degree::zero(1), &r, &r, &mut rng);
            let b = crate::gmatrix::random::random_matrix(&g, Degree::zero(1), &r, &r, &mut rng);
            let ab = a.checked_mul(&b).unwrap();
            let lhs = det_commutative(&g, &ab.to_rows()).unwrap();
            let rhs = det_commutative(&g, &a.to_rows()).unwrap() * det_commutative(&g, &b.to_rows()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gber_examples() {
        let g = grassmann(2);
        let r = ranks(1, &[1, 1]);
        let d = mat(&g, &r, &[&["2", "0"], &["0", "3"]]);
        assert_eq!(gber(&d).unwrap(), el(&g, "2/3"));
        let t = mat(&g, &r, &[&["1 + t1*t2", "t1"], &["t2", "1"]]);
        assert_eq!(gber(&t).unwrap(), el(&g, "1"));
        assert_eq!(super_ber_oracle(&t).unwrap(), el(&g, "1"));
        let u = mat(&g, &r, &[&["1", "t1"], &["0", "1"]]);
        assert_eq!(gber(&u).unwrap(), el(&g, "1"));
    }

    #[test]
    fn trivial_decompositions() {
        let g = grassmann(3);
        let r = ranks(1, &[2, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let id = GradedMatrix::identity(&g, &r);
        let d = random_block_diagonal(&g, &r, &mut rng).unwrap();
        let f = udl_decompose(&d).unwrap();
        assert_eq!(
            (f.upper.clone(), f.lower.clone(), f.diag.clone()),
            (id.clone(), id.clone(), d)
        );
        let u = random_unitriangular(&g, &r, true, &mut rng);
        assert_eq!(udl_decompose(&u).unwrap().diag, id);
    }

    #[test]
    fn reverse_order_fallback() {
        // zero odd block defeats pivoting from the last block
        let g = grassmann(2);
        let r = ranks(1, &[1, 1]);
        let t = mat(&g, &r, &[&["1", "t1"], &["t2", "0"]]);
        assert_eq!(udl_decompose(&t).unwrap_err(), BerError::DecompositionFailed);
        let s = mat(&g, &r, &[&["0", "t1"], &["t2", "1"]]);
        assert_eq!(udl_decompose(&s).unwrap_err(), BerError::DecompositionFailed);
        let h = Algebra::<Q>::new(Presentation::quaternion());
        let rq = ranks(3, &[1, 1, 0, 0, 0, 0, 0, 0]);
        let t = mat(&h, &rq, &[&["1", "i"], &["i", "0"]]);
        let f = udl_decompose(&t).unwrap();
        assert_eq!(f.order, Order::Ldu);
        assert_eq!(f.recompose(), t);
        assert_eq!(gber(&t).unwrap(), el(&h, "1"));
    }

    #[test]
    fn study_examples() {
        let h = Algebra::<Q>::new(Presentation::quaternion());
        let r = ranks(3, &[1, 0, 0, 0, 0, 0, 0, 0]);
        assert!((study_det_oracle(&GradedMatrix::identity(&h, &r)).unwrap() - 1.0).abs() < 1e-12);
        let r2 = ranks(3, &[1, 1, 0, 0, 0, 0, 0, 0]);
        let t = mat(&h, &r2, &[&["2", "i"], &["3*i", "5"]]);
        // (2 − i·5⁻¹·3i)·5 = 13
        assert!((study_det_oracle(&t).unwrap() - 13.0).abs() < 1e-9);
        assert_eq!(gber(&t).unwrap(), el(&h, "13"));
    }

    #[test]
    fn f64_scalars_agree() {
        let g = grassmann(2);
        let gf = Algebra::<f64>::new(Presentation::grassmann(2).unwrap());
        let r = ranks(1, &[1, 1]);
        let t = mat(&g, &r, &[&["2 + t1*t2", "t1"], &["t2", "4"]]);
        let tf = GradedMatrix::from_fn(&gf, Degree::zero(1), r.clone(), r.clone(), |i, j| {
            t.get(i, j).map_scalars(&gf, |c| c.to_f64())
        })
        .unwrap();
        let exact = gber(&t).unwrap().map_scalars(&gf, |c| c.to_f64());
        assert!(gber(&tf).unwrap().approx_eq(&exact));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn multiplicative_and_matches_closed_form(seed in any::<u64>()) {
            let g = grassmann(3);
            let r = ranks(1, &[2, 1]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_decomposable(&g, &r, &mut rng).unwrap();
            let t = random_decomposable(&g, &r, &mut rng).unwrap();
            let st = s.checked_mul(&t).unwrap();
            let (bs, bt, bst) = (gber(&s).unwrap(), gber(&t).unwrap(), gber(&st).unwrap());
            prop_assert_eq!(&bst, &(&bs * &bt));
            prop_assert_eq!(super_ber_oracle(&st).unwrap(), bst);
            prop_assert_eq!(gber(&s.invert().unwrap()).unwrap(), bs.invert().unwrap());
            prop_assert_eq!(udl_decompose(&st).unwrap().recompose(), st);
        }
    }
}
