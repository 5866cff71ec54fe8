//! Graded matrices over a (Z₂)ⁿ-commutative algebra.
//!
//! Modules are free with standard bases; elements are column vectors of right
//! coordinates and morphisms act by left multiplication. A homogeneous matrix
//! of degree t̄ from rank s⃗ ← r⃗ has, in block (u,v), entries of degree
//! γᵤ + γᵥ + t̄. The rule is checked on construction; zero entries are exempt.

pub mod random;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{koszul_sign, Algebra, AlgebraElement, AlgebraError, Monomial};
use crate::grading::{Degree, GradingError, RankVector};
use crate::linalg::DenseMatrix;
use crate::scalar::{sign, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("entry ({row}, {col}) violates the block degree rule: expected {expected}, found {found:?}")]
    DegreeViolation {
        row: usize,
        col: usize,
        expected: Degree,
        found: Vec<Degree>,
    },
    #[error("expected a {rows}x{cols} entry array, got {found_rows} rows (first row length {found_cols})")]
    Dimension {
        rows: usize,
        cols: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error("incompatible shapes: {left} and {right}")]
    ShapeMismatch { left: String, right: String },
    #[error("matrix degrees differ: {0} vs {1}")]
    DegreeMismatch(Degree, Degree),
    #[error("matrix is not square (row ranks {rows}, column ranks {cols})")]
    NotSquare { rows: RankVector, cols: RankVector },
    #[error("matrix has degree {0}, degree 0 is required")]
    NotDegreeZero(Degree),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

/// A homogeneous graded matrix with dense entries.
#[derive(Clone)]
pub struct GradedMatrix<C> {
    alg: Arc<Algebra<C>>,
    degree: Degree,
    rows: RankVector,
    cols: RankVector,
    entries: Vec<AlgebraElement<C>>,
}

impl<C: Scalar> GradedMatrix<C> {
    /// Validated constructor from a row-major entry array.
    pub fn new(
        alg: &Arc<Algebra<C>>,
        degree: Degree,
        row_ranks: RankVector,
        col_ranks: RankVector,
        entries: Vec<Vec<AlgebraElement<C>>>,
    ) -> Result<Self, MatrixError> {
        let (nr, nc) = (row_ranks.total(), col_ranks.total());
        let bad_shape = entries.len() != nr || entries.iter().any(|r| r.len() != nc);
        if bad_shape {
            return Err(MatrixError::Dimension {
                rows: nr,
                cols: nc,
                found_rows: entries.len(),
                found_cols: entries.first().map_or(0, |r| r.len()),
            });
        }
        Self::check_dims(alg, degree, &row_ranks, &col_ranks)?;
        let m = GradedMatrix {
            alg: alg.clone(),
            degree,
            rows: row_ranks,
            cols: col_ranks,
            entries: entries.into_iter().flatten().collect(),
        };
        m.validate()?;
        Ok(m)
    }

    fn check_dims(
        alg: &Arc<Algebra<C>>,
        degree: Degree,
        rows: &RankVector,
        cols: &RankVector,
    ) -> Result<(), MatrixError> {
        for n in [degree.n(), rows.n(), cols.n()] {
            if n != alg.n() {
                return Err(GradingError::DimensionMismatch {
                    left: alg.n(),
                    right: n,
                }
                .into());
            }
        }
        Ok(())
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(
        alg: &Arc<Algebra<C>>,
        degree: Degree,
        row_ranks: RankVector,
        col_ranks: RankVector,
        mut f: impl FnMut(usize, usize) -> AlgebraElement<C>,
    ) -> Result<Self, MatrixError> {
        let entries = (0..row_ranks.total())
            .map(|i| (0..col_ranks.total()).map(|j| f(i, j)).collect())
            .collect();
        Self::new(alg, degree, row_ranks, col_ranks, entries)
    }

    pub fn zero(alg: &Arc<Algebra<C>>, degree: Degree, row_ranks: RankVector, col_ranks: RankVector) -> Self {
        Self::from_fn(alg, degree, row_ranks, col_ranks, |_, _| AlgebraElement::zero(alg))
            .expect("zero matrix is valid")
    }

    pub fn identity(alg: &Arc<Algebra<C>>, ranks: &RankVector) -> Self {
        Self::from_fn(alg, Degree::zero(alg.n()), ranks.clone(), ranks.clone(), |i, j| {
            if i == j {
                AlgebraElement::one(alg)
            } else {
                AlgebraElement::zero(alg)
            }
        })
        .expect("identity is valid")
    }

    fn validate(&self) -> Result<(), MatrixError> {
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let expected = self.expected_degree(i, j);
                let e = self.get(i, j);
                if !e.has_degree(expected) {
                    return Err(MatrixError::DegreeViolation {
                        row: i,
                        col: j,
                        expected,
                        found: e.components().into_keys().collect(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Degree γᵤ + γᵥ + t̄ required at position (i, j).
    pub fn expected_degree(&self, i: usize, j: usize) -> Degree {
        self.row_degree(i) + self.col_degree(j) + self.degree
    }

    fn row_degree(&self, i: usize) -> Degree {
        self.rows.block_degree(self.rows.block_of(i))
    }

    fn col_degree(&self, j: usize) -> Degree {
        self.cols.block_degree(self.cols.block_of(j))
    }

    pub fn algebra(&self) -> &Arc<Algebra<C>> {
        &self.alg
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn row_ranks(&self) -> &RankVector {
        &self.rows
    }

    pub fn col_ranks(&self) -> &RankVector {
        &self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.total()
    }

    pub fn ncols(&self) -> usize {
        self.cols.total()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraElement<C> {
        &self.entries[i * self.ncols() + j]
    }

    /// Entries as nested rows.
    pub fn to_rows(&self) -> Vec<Vec<AlgebraElement<C>>> {
        self.entries
            .chunks(self.ncols().max(1))
            .map(|r| r.to_vec())
            .take(self.nrows())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn shape(&self) -> String {
        format!("{}x{} (degree {})", self.rows, self.cols, self.degree)
    }

    fn same_algebra(&self, other: &Self) -> Result<(), MatrixError> {
        if Arc::ptr_eq(&self.alg, &other.alg) || self.alg.presentation() == other.alg.presentation() {
            Ok(())
        } else {
            Err(AlgebraError::PresentationMismatch.into())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_algebra(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        // zero matrices carry any degree
        let degree = if self.is_zero() { other.degree } else { self.degree };
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(MatrixError::DegreeMismatch(self.degree, other.degree));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(GradedMatrix {
            alg: self.alg.clone(),
            degree,
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = -&*e;
        }
        out
    }

    /// Ordinary matrix product; the degrees add.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_algebra(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let (nr, nk, nc) = (self.nrows(), self.ncols(), other.ncols());
        let mut entries = Vec::with_capacity(nr * nc);
        for i in 0..nr {
            for j in 0..nc {
                let mut acc = AlgebraElement::zero(&self.alg);
                for k in 0..nk {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                entries.push(acc);
            }
        }
        Ok(GradedMatrix {
            alg: self.alg.clone(),
            degree: self.degree + other.degree,
            rows: self.rows.clone(),
            cols: other.cols.clone(),
            entries,
        })
    }

    /// The module action a·T: row block u is multiplied by (−1)^⟨ā, γᵤ⟩ a.
    pub fn scalar_mul(&self, a: &AlgebraElement<C>) -> Result<Self, MatrixError> {
        if a.is_zero() {
            return Ok(Self::zero(&self.alg, self.degree, self.rows.clone(), self.cols.clone()));
        }
        let a_deg = a.degree_of()?;
        let mut out = self.clone();
        out.degree = self.degree + a_deg;
        for i in 0..self.nrows() {
            let s: C = koszul_sign(a_deg, self.row_degree(i));
            let signed = a.scale(&s);
            for j in 0..self.ncols() {
                out.entries[i * self.ncols() + j] = &signed * self.get(i, j);
            }
        }
        Ok(out)
    }

    /// Graded transpose: block (v,u) of the result is (−1)^⟨γᵤ+γᵥ, t̄+γᵥ⟩ times the
    /// classical transpose of block (u,v).
    pub fn graded_transpose(&self) -> Self {
        let (nr, nc) = (self.nrows(), self.ncols());
        let mut entries = Vec::with_capacity(nr * nc);
        for j in 0..nc {
            let gv = self.col_degree(j);
            for i in 0..nr {
                let gu = self.row_degree(i);
                let e = self.get(i, j);
                entries.push(if (gu + gv).dot(self.degree + gv) { -e } else { e.clone() });
            }
        }
        GradedMatrix {
            alg: self.alg.clone(),
            degree: self.degree,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries,
        }
    }

    fn require_square(&self) -> Result<(), MatrixError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(MatrixError::NotSquare {
                rows: self.rows.clone(),
                cols: self.cols.clone(),
            })
        }
    }

    /// Γtr(T) = Σᵤ (−1)^⟨γᵤ + t̄, γᵤ⟩ tr(Tᵤᵤ).
    pub fn graded_trace(&self) -> Result<AlgebraElement<C>, MatrixError> {
        self.require_square()?;
        let mut acc = AlgebraElement::zero(&self.alg);
        for i in 0..self.nrows() {
            let g = self.row_degree(i);
            let s: C = sign((g + self.degree).dot(g));
            acc = acc + self.get(i, i).scale(&s);
        }
        Ok(acc)
    }

    /// [S, T] = ST − (−1)^⟨s̄, t̄⟩ TS.
    pub fn graded_commutator(&self, other: &Self) -> Result<Self, MatrixError> {
        self.require_square()?;
        other.require_square()?;
        let st = self.checked_mul(other)?;
        let ts = other.checked_mul(self)?;
        if self.degree.dot(other.degree) {
            st.checked_add(&ts)
        } else {
            st.checked_sub(&ts)
        }
    }

    /// Inverse of a degree-0 square matrix.
    ///
    /// Left multiplication by T is a linear operator on A^r ≅ C^{r·2^m}; the
    /// columns of T⁻¹ are the preimages of the standard basis vectors.
    pub fn invert(&self) -> Result<Self, MatrixError> {
        self.require_square()?;
        if !self.degree.is_zero() {
            return Err(MatrixError::NotDegreeZero(self.degree));
        }
        let r = self.nrows();
        let dim = self.alg.dimension();
        let mut op = DenseMatrix::<C>::zeros(r * dim, r * dim);
        for k in 0..r {
            for mu in 0..dim as Monomial {
                let basis = AlgebraElement::monomial(&self.alg, mu, C::one());
                for i in 0..r {
                    let t = self.get(i, k);
                    if t.is_zero() {
                        continue;
                    }
                    for (&row, c) in (t * &basis).terms() {
                        op.set(i * dim + row as usize, k * dim + mu as usize, c.clone());
                    }
                }
            }
        }
        let rhs: Vec<Vec<C>> = (0..r)
            .map(|j| {
                let mut v = vec![C::zero(); r * dim];
                v[j * dim] = C::one();
                v
            })
            .collect();
        let sol = op.solve(&rhs).ok_or(MatrixError::NotInvertible)?;
        let inv = Self::from_fn(&self.alg, self.degree, self.rows.clone(), self.cols.clone(), |k, j| {
            let mut e = AlgebraElement::zero(&self.alg);
            for mu in 0..dim {
                let c = &sol[j][k * dim + mu];
                if !c.is_zero() {
                    e = e + AlgebraElement::monomial(&self.alg, mu as Monomial, c.clone());
                }
            }
            e
        })?;
        let id = Self::identity(&self.alg, &self.rows);
        if !self.checked_mul(&inv)?.approx_eq(&id) || !inv.checked_mul(self)?.approx_eq(&id) {
            return Err(MatrixError::NotInvertible);
        }
        Ok(inv)
    }

    /// The same matrix over another scalar type; `alg` must share the presentation.
    pub fn map_scalars<D: Scalar>(&self, alg: &Arc<Algebra<D>>, f: impl Fn(&C) -> D) -> GradedMatrix<D> {
        GradedMatrix {
            alg: alg.clone(),
            degree: self.degree,
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().map(|e| e.map_scalars(alg, &f)).collect(),
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.approx_eq(b))
    }

    /// The (u, v) block as a plain entry array.
    pub fn block(&self, u: usize, v: usize) -> Vec<Vec<AlgebraElement<C>>> {
        self.rows
            .block_range(u)
            .map(|i| self.cols.block_range(v).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Whether all off-diagonal blocks vanish.
    pub fn is_block_diagonal(&self) -> bool {
        self.block_pairs()
            .all(|(u, v, i, j)| u == v || self.get(i, j).is_zero())
    }

    /// Identity diagonal blocks and zeros strictly below (`upper`) or above the block diagonal.
    pub fn is_block_unitriangular(&self, upper: bool) -> bool {
        self.block_pairs().all(|(u, v, i, j)| {
            let e = self.get(i, j);
            if u == v {
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            } else if (u > v) == upper {
                e.is_zero()
            } else {
                true
            }
        })
    }

    fn block_pairs(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        (0..self.nrows())
            .flat_map(move |i| (0..self.ncols()).map(move |j| (self.rows.block_of(i), self.cols.block_of(j), i, j)))
    }
}

impl<C: Scalar> PartialEq for GradedMatrix<C> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
            && (self.degree == other.degree || self.is_zero())
    }
}

impl<C: Scalar> fmt::Display for GradedMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|e| e.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for row in &cells {
            write!(f, "[")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c:>width$}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for GradedMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GradedMatrix(degree {}, {} x {})\n{self}",
            self.degree, self.rows, self.cols
        )
    }
}

/// Helper: square rank vector for `n` with the given block sizes.
pub fn ranks(n: usize, sizes: &[usize]) -> RankVector {
    RankVector::new(n, sizes.to_vec()).expect("rank vector")
}

#[cfg(test)]
mod tests;
