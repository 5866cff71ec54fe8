//! Finitely presented (Z₂)ⁿ-graded-commutative algebras.
//!
//! An algebra is presented by homogeneous generators g₁,…,g_m, each squaring
//! to a rational scalar (odd generators square to zero). Distinct generators
//! commute up to the sign (−1)^⟨deg gᵢ, deg gⱼ⟩, so the square-free monomials
//! in declaration order form a basis of dimension 2^m.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::grading::{Degree, GradingError};
use crate::linalg::DenseMatrix;
use crate::scalar::{sign, Rational, Scalar};

/// Square-free monomial as a bitmask over generator indices.
pub type Monomial = u32;

pub const MAX_GENERATORS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("elements belong to different algebra presentations")]
    PresentationMismatch,
    #[error("the zero element has no degree")]
    ZeroHasNoDegree,
    #[error("element is not homogeneous: components of degrees {0:?}")]
    NonHomogeneous(Vec<Degree>),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("odd generator `{0}` must square to 0")]
    OddSquareNonzero(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("invalid generator name `{0}`")]
    BadName(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("at most {MAX_GENERATORS} generators are supported, got {0}")]
    TooManyGenerators(usize),
    #[error("clifford square must be +1 or -1, got {0}")]
    BadCliffordSign(i64),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: Degree,
    /// The scalar c in g² = c·1.
    pub square: Rational,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: Degree, square: i64) -> Self {
        GeneratorSpec {
            name: name.into(),
            degree,
            square: Rational::from_integer(square.into()),
        }
    }
}

/// Named families of presentations.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    /// k odd generators θ₁…θ_k over (Z₂)¹.
    Grassmann(usize),
    /// Clifford algebra on p generators over (Z₂)^{p+1}; `signs[i]` is eᵢ².
    Clifford(Vec<i64>),
    /// Quaternions over (Z₂)³: i, j with k = ij.
    Quaternion,
    Custom {
        n: usize,
        generators: Vec<GeneratorSpec>,
    },
}

/// Generators and their relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    n: usize,
    generators: Vec<GeneratorSpec>,
    aliases: Vec<(String, Vec<usize>)>,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    pub fn new(n: usize, generators: Vec<GeneratorSpec>) -> Result<Self, AlgebraError> {
        // validates n
        Degree::zero_checked(n)?;
        if generators.len() > MAX_GENERATORS {
            return Err(AlgebraError::TooManyGenerators(generators.len()));
        }
        for (i, g) in generators.iter().enumerate() {
            if !valid_identifier(&g.name) {
                return Err(AlgebraError::BadName(g.name.clone()));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::DuplicateName(g.name.clone()));
            }
            if g.degree.n() != n {
                return Err(GradingError::DimensionMismatch {
                    left: n,
                    right: g.degree.n(),
                }
                .into());
            }
            if g.degree.is_odd() && !g.square.is_zero() {
                return Err(AlgebraError::OddSquareNonzero(g.name.clone()));
            }
        }
        Ok(Presentation {
            n,
            generators,
            aliases: Vec::new(),
        })
    }

    pub fn preset(kind: &Preset) -> Result<Self, AlgebraError> {
        match kind {
            Preset::Grassmann(k) => Self::grassmann(*k),
            Preset::Clifford(signs) => Self::clifford(signs),
            Preset::Quaternion => Ok(Self::quaternion()),
            Preset::Custom { n, generators } => Self::new(*n, generators.clone()),
        }
    }

    /// Exterior algebra on `k` odd generators `t1…tk`.
    pub fn grassmann(k: usize) -> Result<Self, AlgebraError> {
        let odd = Degree::ones(1);
        let gens = (1..=k).map(|i| GeneratorSpec::new(format!("t{i}"), odd, 0)).collect();
        Self::new(1, gens)
    }

    /// Clifford algebra with generators `e1…ep`; eᵢ has degree 1 at positions i and p+1.
    pub fn clifford(signs: &[i64]) -> Result<Self, AlgebraError> {
        let p = signs.len();
        let n = p + 1;
        let gens = signs
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                if s != 1 && s != -1 {
                    return Err(AlgebraError::BadCliffordSign(s));
                }
                Ok(GeneratorSpec::new(
                    format!("e{}", i + 1),
                    Degree::unit_at(n, &[i, p]),
                    s,
                ))
            })
            .collect::<Result<_, _>>()?;
        Self::new(n, gens)
    }

    /// Quaternions: deg i = (0,1,1), deg j = (1,0,1), i² = j² = −1, and `k` an alias for ij.
    pub fn quaternion() -> Self {
        let i = GeneratorSpec::new("i", Degree::unit_at(3, &[1, 2]), -1);
        let j = GeneratorSpec::new("j", Degree::unit_at(3, &[0, 2]), -1);
        let mut p = Self::new(3, vec![i, j]).expect("quaternion presentation");
        p.aliases.push(("k".into(), vec![0, 1]));
        p
    }

    /// Adds a name standing for a word in the generators (used by the expression parser).
    pub fn with_alias(mut self, name: &str, word: &[&str]) -> Result<Self, AlgebraError> {
        if !valid_identifier(name) {
            return Err(AlgebraError::BadName(name.into()));
        }
        if self.lookup(name).is_some() {
            return Err(AlgebraError::DuplicateName(name.into()));
        }
        let word = word
            .iter()
            .map(|w| {
                self.generator_index(w)
                    .ok_or_else(|| AlgebraError::UnknownGenerator(w.to_string()))
            })
            .collect::<Result<_, _>>()?;
        self.aliases.push((name.into(), word));
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn aliases(&self) -> &[(String, Vec<usize>)] {
        &self.aliases
    }

    /// Number of generators m.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Dimension 2^m of the algebra over the coefficient field.
    pub fn dimension(&self) -> usize {
        1 << self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Resolves a generator or alias name to a word.
    pub fn lookup(&self, name: &str) -> Option<Vec<usize>> {
        if let Some(i) = self.generator_index(name) {
            return Some(vec![i]);
        }
        self.aliases.iter().find(|(a, _)| a == name).map(|(_, w)| w.clone())
    }

    pub fn monomial_degree(&self, m: Monomial) -> Degree {
        self.generators
            .iter()
            .enumerate()
            .filter(|(i, _)| m >> i & 1 == 1)
            .fold(Degree::zero(self.n), |acc, (_, g)| acc + g.degree)
    }

    pub fn monomial_name(&self, m: Monomial) -> String {
        if m == 0 {
            return "1".into();
        }
        self.generators
            .iter()
            .enumerate()
            .filter(|(i, _)| m >> i & 1 == 1)
            .map(|(_, g)| g.name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A presentation together with its precomputed monomial multiplication table.
#[derive(Debug)]
pub struct Algebra<C> {
    presentation: Presentation,
    degrees: Vec<Degree>,
    table: Vec<(Monomial, C)>,
}

/// Product of basis monomials: e_A · e_B = ± Π_{g∈A∩B} g² · e_{A△B}.
fn monomial_product<C: Scalar>(p: &Presentation, squares: &[C], a: Monomial, b: Monomial) -> C {
    let mut coeff = C::one();
    let m = p.rank();
    for j in (0..m).filter(|j| b >> j & 1 == 1) {
        // g_j travels left past every generator of A with a larger index
        for i in (j + 1..m).filter(|i| a >> i & 1 == 1) {
            if p.generators[i].degree.dot(p.generators[j].degree) {
                coeff = -coeff;
            }
        }
        if a >> j & 1 == 1 {
            coeff = coeff * squares[j].clone();
        }
    }
    coeff
}

impl<C: Scalar> Algebra<C> {
    pub fn new(presentation: Presentation) -> Arc<Self> {
        let dim = presentation.dimension();
        let squares: Vec<C> = presentation
            .generators
            .iter()
            .map(|g| C::from_rational(&g.square))
            .collect();
        let degrees = (0..dim as Monomial).map(|m| presentation.monomial_degree(m)).collect();
        let mut table = Vec::with_capacity(dim * dim);
        for a in 0..dim as Monomial {
            for b in 0..dim as Monomial {
                table.push((a ^ b, monomial_product(&presentation, &squares, a, b)));
            }
        }
        Arc::new(Algebra {
            presentation,
            degrees,
            table,
        })
    }

    pub fn from_preset(kind: &Preset) -> Result<Arc<Self>, AlgebraError> {
        Ok(Self::new(Presentation::preset(kind)?))
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn n(&self) -> usize {
        self.presentation.n
    }

    pub fn dimension(&self) -> usize {
        self.presentation.dimension()
    }

    pub fn monomial_degree(&self, m: Monomial) -> Degree {
        self.degrees[m as usize]
    }

    /// All basis monomials of the given degree.
    pub fn monomials_of_degree(&self, d: Degree) -> Vec<Monomial> {
        (0..self.dimension() as Monomial)
            .filter(|&m| self.degrees[m as usize] == d)
            .collect()
    }

    fn product(&self, a: Monomial, b: Monomial) -> &(Monomial, C) {
        &self.table[a as usize * self.dimension() + b as usize]
    }
}

fn same_algebra<C>(a: &Arc<Algebra<C>>, b: &Arc<Algebra<C>>) -> bool {
    Arc::ptr_eq(a, b) || a.presentation == b.presentation
}

/// Canonical normal form of `coefficient · g_{w₁} ⋯ g_{w_k}`.
///
/// Sorts the word by adjacent transpositions, each contributing
/// (−1)^⟨deg gᵢ, deg gⱼ⟩, and collapses adjacent equal pairs to their square.
pub fn normal_form<C: Scalar>(alg: &Arc<Algebra<C>>, word: &[usize], coefficient: C) -> AlgebraElement<C> {
    let gens = alg.presentation.generators();
    let mut word = word.to_vec();
    let mut coeff = coefficient;
    'scan: loop {
        for p in 0..word.len().saturating_sub(1) {
            let (a, b) = (word[p], word[p + 1]);
            if a == b {
                coeff = coeff * C::from_rational(&gens[a].square);
                word.drain(p..p + 2);
                continue 'scan;
            }
            if a > b {
                if gens[a].degree.dot(gens[b].degree) {
                    coeff = -coeff;
                }
                word.swap(p, p + 1);
                continue 'scan;
            }
        }
        break;
    }
    let mask = word.iter().fold(0, |m, &g| m | 1 << g);
    AlgebraElement::monomial(alg, mask, coeff)
}

/// An element of the algebra: a linear combination of square-free monomials.
#[derive(Clone)]
pub struct AlgebraElement<C> {
    alg: Arc<Algebra<C>>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> AlgebraElement<C> {
    pub fn zero(alg: &Arc<Algebra<C>>) -> Self {
        AlgebraElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<Algebra<C>>) -> Self {
        Self::scalar(alg, C::one())
    }

    pub fn scalar(alg: &Arc<Algebra<C>>, c: C) -> Self {
        Self::monomial(alg, 0, c)
    }

    pub fn from_i64(alg: &Arc<Algebra<C>>, v: i64) -> Self {
        Self::scalar(alg, C::from_i64(v))
    }

    pub fn monomial(alg: &Arc<Algebra<C>>, m: Monomial, c: C) -> Self {
        let mut e = Self::zero(alg);
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn generator(alg: &Arc<Algebra<C>>, index: usize) -> Self {
        Self::monomial(alg, 1 << index, C::one())
    }

    /// Looks up a generator or alias by name.
    pub fn named(alg: &Arc<Algebra<C>>, name: &str) -> Result<Self, AlgebraError> {
        let word = alg
            .presentation
            .lookup(name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.into()))?;
        Ok(normal_form(alg, &word, C::one()))
    }

    pub fn algebra(&self) -> &Arc<Algebra<C>> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn coefficient(&self, m: Monomial) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of the unit monomial.
    pub fn scalar_part(&self) -> C {
        self.coefficient(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_algebra(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(AlgebraError::PresentationMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.alg);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                let (m, s) = self.alg.product(a, b);
                if s.is_zero() {
                    continue;
                }
                out.add_term(*m, s.clone() * ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &C) -> Self {
        let mut out = Self::zero(&self.alg);
        for (&m, c) in &self.terms {
            out.add_term(m, c.clone() * q.clone());
        }
        out
    }

    /// Splits into homogeneous components.
    pub fn components(&self) -> BTreeMap<Degree, Self> {
        let mut out: BTreeMap<Degree, Self> = BTreeMap::new();
        for (&m, c) in &self.terms {
            out.entry(self.alg.monomial_degree(m))
                .or_insert_with(|| Self::zero(&self.alg))
                .terms
                .insert(m, c.clone());
        }
        out
    }

    /// The common degree of all monomials.
    pub fn degree_of(&self) -> Result<Degree, AlgebraError> {
        let mut degrees: Vec<Degree> = self.terms.keys().map(|&m| self.alg.monomial_degree(m)).collect();
        degrees.sort();
        degrees.dedup();
        match degrees.len() {
            0 => Err(AlgebraError::ZeroHasNoDegree),
            1 => Ok(degrees[0]),
            _ => Err(AlgebraError::NonHomogeneous(degrees)),
        }
    }

    /// Whether every monomial has degree `d` (vacuously true for zero).
    pub fn has_degree(&self, d: Degree) -> bool {
        self.terms.keys().all(|&m| self.alg.monomial_degree(m) == d)
    }

    /// Σ (−1)^⟨deg μ, d⟩ c_μ μ: the sign picked up by moving this element past something of degree `d`.
    pub fn twist(&self, d: Degree) -> Self {
        let mut out = self.clone();
        for (&m, c) in out.terms.iter_mut() {
            if self.alg.monomial_degree(m).dot(d) {
                *c = -c.clone();
            }
        }
        out
    }

    /// Two-sided inverse, computed by solving a · b = 1 in the regular representation.
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::NotInvertible);
        }
        let dim = self.alg.dimension();
        let mut op = DenseMatrix::<C>::zeros(dim, dim);
        for col in 0..dim as Monomial {
            let image = self * &Self::monomial(&self.alg, col, C::one());
            for (&row, c) in &image.terms {
                op.set(row as usize, col as usize, c.clone());
            }
        }
        let mut unit = vec![C::zero(); dim];
        unit[0] = C::one();
        let solution = op.solve(&[unit]).ok_or(AlgebraError::NotInvertible)?;
        let mut inv = Self::zero(&self.alg);
        for (m, c) in solution[0].iter().enumerate() {
            inv.add_term(m as Monomial, c.clone());
        }
        let one = Self::one(&self.alg);
        if !(self * &inv).approx_eq(&one) || !(&inv * self).approx_eq(&one) {
            return Err(AlgebraError::NotInvertible);
        }
        Ok(inv)
    }

    /// Equality up to [`Scalar::is_negligible`] differences.
    pub fn approx_eq(&self, other: &Self) -> bool {
        match self.checked_sub(other) {
            Ok(d) => d.terms.values().all(|c| c.is_negligible()),
            Err(_) => false,
        }
    }

    /// Maps coefficients into another scalar type over the same presentation.
    pub fn map_scalars<D: Scalar>(&self, alg: &Arc<Algebra<D>>, f: impl Fn(&C) -> D) -> AlgebraElement<D> {
        assert_eq!(alg.presentation, self.alg.presentation);
        let mut out = AlgebraElement::zero(alg);
        for (&m, c) in &self.terms {
            out.add_term(m, f(c));
        }
        out
    }
}

impl<C: Scalar> PartialEq for AlgebraElement<C> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl<C: Scalar> fmt::Display for AlgebraElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::expr::write_element(self, f)
    }
}

impl<C: Scalar> fmt::Debug for AlgebraElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({self})")
    }
}

impl<C: Scalar> Neg for &AlgebraElement<C> {
    type Output = AlgebraElement<C>;

    fn neg(self) -> AlgebraElement<C> {
        self.scale(&-C::one())
    }
}

impl<C: Scalar> Neg for AlgebraElement<C> {
    type Output = AlgebraElement<C>;

    fn neg(self) -> AlgebraElement<C> {
        -&self
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<C: Scalar> $trait<&AlgebraElement<C>> for &AlgebraElement<C> {
            type Output = AlgebraElement<C>;

            fn $method(self, rhs: &AlgebraElement<C>) -> AlgebraElement<C> {
                self.$checked(rhs).expect("algebra presentation mismatch")
            }
        }

        impl<C: Scalar> $trait<AlgebraElement<C>> for AlgebraElement<C> {
            type Output = AlgebraElement<C>;

            fn $method(self, rhs: AlgebraElement<C>) -> AlgebraElement<C> {
                (&self).$method(&rhs)
            }
        }

        impl<C: Scalar> $trait<&AlgebraElement<C>> for AlgebraElement<C> {
            type Output = AlgebraElement<C>;

            fn $method(self, rhs: &AlgebraElement<C>) -> AlgebraElement<C> {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

/// (−1)^⟨a, b⟩ as a scalar.
pub(crate) fn koszul_sign<C: Scalar>(a: Degree, b: Degree) -> C {
    sign(a.dot(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = AlgebraElement<Rational>;

    fn quat() -> Arc<Algebra<Rational>> {
        Algebra::new(Presentation::quaternion())
    }

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn quaternion_basis_degrees() {
        let h = quat();
        assert_eq!(h.dimension(), 4);
        let k = E::named(&h, "k").unwrap();
        assert_eq!(k.degree_of().unwrap(), Degree::from_bits(&[1, 1, 0]).unwrap());
        assert_eq!(E::one(&h).degree_of().unwrap(), Degree::zero(3));
    }

    #[test]
    fn normal_form_examples() {
        let h = quat();
        // j·i = −ij
        assert_eq!(normal_form(&h, &[1, 0], q(1)), E::monomial(&h, 0b11, q(-1)));
        assert_eq!(normal_form(&h, &[0, 0], q(1)), E::from_i64(&h, -1));
        let g = Algebra::<Rational>::new(Presentation::grassmann(2).unwrap());
        assert!(normal_form(&g, &[0, 0], q(1)).is_zero());
        // t2 t1 t2 = −t1 t2 t2 = 0
        assert!(normal_form(&g, &[1, 0, 1], q(1)).is_zero());
    }

    #[test]
    fn grassmann_and_clifford_presets() {
        let g = Presentation::grassmann(2).unwrap();
        assert_eq!(g.dimension(), 4);
        assert!(g.generators().iter().all(|s| s.degree.is_odd() && s.square.is_zero()));
        let c = Presentation::clifford(&[1]).unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.generators()[0].degree, Degree::from_bits(&[1, 1]).unwrap());
        assert_eq!(c.generators()[0].square, q(1));
        assert!(Presentation::clifford(&[2]).is_err());
    }

    #[test]
    fn odd_generator_with_square_rejected() {
        let bad = GeneratorSpec::new("t", Degree::ones(1), 1);
        assert_eq!(
            Presentation::new(1, vec![bad]),
            Err(AlgebraError::OddSquareNonzero("t".into()))
        );
    }

    #[test]
    fn multiplication_examples() {
        let h = quat();
        let i = E::named(&h, "i").unwrap();
        let j = E::named(&h, "j").unwrap();
        let k = E::named(&h, "k").unwrap();
        assert_eq!(&i * &j, k);
        let g = Algebra::<Rational>::new(Presentation::grassmann(2).unwrap());
        let t12 = E::monomial(&g, 0b11, q(1));
        let one = E::one(&g);
        assert_eq!((&one + &t12) * (&one - &t12), one);
        assert_eq!(&t12 * &one, t12);
    }

    #[test]
    fn add_sub_scale() {
        let h = quat();
        let i = E::named(&h, "i").unwrap();
        assert_eq!(&i + &E::zero(&h), i);
        assert!((&i - &i).is_zero());
        assert_eq!(i.scale(&q(2)), E::monomial(&h, 0b01, q(2)));
    }

    #[test]
    fn degree_errors() {
        let g = Algebra::<Rational>::new(Presentation::grassmann(1).unwrap());
        assert_eq!(E::zero(&g).degree_of(), Err(AlgebraError::ZeroHasNoDegree));
        let mixed = E::one(&g) + E::generator(&g, 0);
        assert!(matches!(mixed.degree_of(), Err(AlgebraError::NonHomogeneous(_))));
    }

    #[test]
    fn inversion_examples() {
        let h = quat();
        assert!(E::one(&h).invert().unwrap().is_one());
        let i = E::named(&h, "i").unwrap();
        assert_eq!(i.invert().unwrap(), -&i);
        let g = Algebra::<Rational>::new(Presentation::grassmann(2).unwrap());
        let t12 = E::monomial(&g, 0b11, q(1));
        let one = E::one(&g);
        // nilpotent part squares to zero, so the geometric series stops after one term
        let oracle = &one - &t12;
        assert_eq!((&one + &t12).invert().unwrap(), oracle);
        assert_eq!(E::generator(&g, 0).invert(), Err(AlgebraError::NotInvertible));
        assert_eq!(E::zero(&g).invert(), Err(AlgebraError::NotInvertible));
    }

    #[test]
    fn mismatched_presentations() {
        let g = Algebra::<Rational>::new(Presentation::grassmann(1).unwrap());
        let h = quat();
        assert_eq!(
            E::one(&g).checked_mul(&E::one(&h)),
            Err(AlgebraError::PresentationMismatch)
        );
    }

    #[test]
    fn float_coefficients() {
        let h = Algebra::<f64>::new(Presentation::quaternion());
        let i = AlgebraElement::named(&h, "i").unwrap();
        let sq = &i * &i;
        assert_eq!(sq.scalar_part(), -1.0);
        let inv = (AlgebraElement::one(&h) + i.clone()).invert().unwrap();
        assert!((inv.scalar_part() - 0.5).abs() < 1e-12);
    }
}
