//! The Koszul complex 𝒦 = S•_A(ΠM ⊕ M*) of a free graded module M.
//!
//! Elements are polynomials in even variables xᵢ and odd variables ξᵢ with
//! coefficients in A, stored as ξ^α x^β a (coefficient on the right). With
//! r′ the number of even basis vectors:
//!
//! ```text
//! i ≤ r′:  xᵢ = εⁱ,    ξᵢ = Πeᵢ
//! i > r′:  xᵢ = Πeᵢ,   ξᵢ = −(−1)^⟨eᵢ,π⟩ εⁱ
//! ```
//!
//! The differential is left multiplication by Σ Πeᵢ εⁱ = Σ ξᵢ xᵢ. The only
//! cohomology sits at level r and is spanned by ξ₁⋯ξ_r; the group and the
//! derivation actions are read off on that class.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraElement, AlgebraError, Monomial};
use crate::gmatrix::{random::random_element, GradedMatrix, MatrixError};
use crate::grading::{standard_order, Degree, GradingError, RankVector};
use crate::linalg::sparse_rank;
use crate::scalar::Scalar;

/// ξ-masks are `u32`.
pub const MAX_RANK: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KoszulError {
    #[error("parity degree {0} is not odd")]
    PiNotOdd(Degree),
    #[error("total rank {0} exceeds the supported {MAX_RANK}")]
    RankTooLarge(usize),
    #[error("elements belong to different Koszul complexes")]
    ContextMismatch,
    #[error("matrix ranks {found} do not match the complex ranks {expected}")]
    RankMismatch { expected: RankVector, found: RankVector },
    #[error("matrix has degree {0}, degree 0 is required")]
    NotDegreeZero(Degree),
    #[error("odd matrix degree {0} is outside the derivation action")]
    OddDerivation(Degree),
    #[error("L_S does not commute with d: ⟨{degree}, {pi}⟩ = 1")]
    DifferentialNotInvariant { degree: Degree, pi: Degree },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

/// π = (1,…,1) for odd n; otherwise the last odd degree in standard order.
/// The flag is true when the second rule was used.
pub fn default_pi(n: usize) -> (Degree, bool) {
    if n % 2 == 1 {
        (Degree::ones(n), false)
    } else {
        let last = *standard_order(n).last().expect("n ≥ 1");
        (last, true)
    }
}

/// Generators of S•_A(ΠM ⊕ M*) in the module alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    PiE(usize),
    Eps(usize),
}

pub struct KoszulContext<C> {
    alg: Arc<Algebra<C>>,
    ranks: RankVector,
    pi: Degree,
    basis: Vec<Degree>,
    r_even: usize,
    x_deg: Vec<Degree>,
    xi_deg: Vec<Degree>,
}

/// Key of a monomial ξ^α x^β.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KMonomial {
    pub xi: u32,
    pub x: Vec<u32>,
}

impl KMonomial {
    fn one(r: usize) -> Self {
        KMonomial { xi: 0, x: vec![0; r] }
    }

    /// Cochain level |α|.
    pub fn weight(&self) -> usize {
        self.xi.count_ones() as usize
    }

    /// Total x-degree |β|.
    pub fn x_weight(&self) -> usize {
        self.x.iter().map(|&b| b as usize).sum()
    }
}

#[derive(Clone)]
pub struct KoszulElement<C> {
    ctx: Arc<KoszulContext<C>>,
    terms: BTreeMap<KMonomial, AlgebraElement<C>>,
}

impl<C: Scalar> KoszulContext<C> {
    pub fn new(alg: &Arc<Algebra<C>>, ranks: RankVector, pi: Degree) -> Result<Arc<Self>, KoszulError> {
        for n in [ranks.n(), pi.n()] {
            if n != alg.n() {
                return Err(GradingError::DimensionMismatch {
                    left: alg.n(),
                    right: n,
                }
                .into());
            }
        }
        if !pi.is_odd() {
            return Err(KoszulError::PiNotOdd(pi));
        }
        if ranks.total() > MAX_RANK {
            return Err(KoszulError::RankTooLarge(ranks.total()));
        }
        let basis = ranks.basis_degrees();
        let r_even = ranks.even_total();
        let x_deg: Vec<Degree> = basis
            .iter()
            .enumerate()
            .map(|(i, &e)| if i < r_even { e } else { e + pi })
            .collect();
        let xi_deg = x_deg.iter().map(|&d| d + pi).collect();
        Ok(Arc::new(KoszulContext {
            alg: alg.clone(),
            ranks,
            pi,
            basis,
            r_even,
            x_deg,
            xi_deg,
        }))
    }

    pub fn algebra(&self) -> &Arc<Algebra<C>> {
        &self.alg
    }

    pub fn ranks(&self) -> &RankVector {
        &self.ranks
    }

    pub fn pi(&self) -> Degree {
        self.pi
    }

    /// Number of variables of each kind.
    pub fn r(&self) -> usize {
        self.basis.len()
    }

    pub fn r_even(&self) -> usize {
        self.r_even
    }

    pub fn basis_degree(&self, i: usize) -> Degree {
        self.basis[i]
    }

    pub fn x_degree(&self, i: usize) -> Degree {
        self.x_deg[i]
    }

    pub fn xi_degree(&self, i: usize) -> Degree {
        self.xi_deg[i]
    }

    fn zero_degree(&self) -> Degree {
        Degree::zero(self.alg.n())
    }

    fn xi_mask_degree(&self, mask: u32) -> Degree {
        (0..self.r())
            .filter(|&i| mask >> i & 1 == 1)
            .fold(self.zero_degree(), |acc, i| acc + self.xi_deg[i])
    }

    fn x_degree_of(&self, beta: &[u32]) -> Degree {
        beta.iter()
            .enumerate()
            .filter(|(_, &b)| b % 2 == 1)
            .fold(self.zero_degree(), |acc, (i, _)| acc + self.x_deg[i])
    }

    /// Degree of ξ^α x^β.
    pub fn monomial_degree(&self, m: &KMonomial) -> Degree {
        self.xi_mask_degree(m.xi) + self.x_degree_of(&m.x)
    }

    /// Sign of ξ^α ξ^α′ → ξ^{α∪α′}; `None` if a variable repeats.
    fn xi_merge_sign(&self, a: u32, b: u32) -> Option<bool> {
        if a & b != 0 {
            return None;
        }
        let mut odd = false;
        for j in (0..self.r()).filter(|&j| b >> j & 1 == 1) {
            // ξⱼ moves left past every ξᵢ of the first factor with i > j
            let passed = self.xi_mask_degree(a & !((1u32 << (j + 1)) - 1));
            odd ^= passed.dot(self.xi_deg[j]);
        }
        Some(odd)
    }

    fn x_merge_sign(&self, beta: &[u32], gamma: &[u32]) -> bool {
        // only odd exponents contribute; xⱼ of the second factor passes every xᵢ, i > j, of the first
        let odd_in = |e: &[u32]| -> Vec<usize> { (0..e.len()).filter(|&i| e[i] % 2 == 1).collect() };
        let (left, right) = (odd_in(beta), odd_in(gamma));
        right
            .iter()
            .flat_map(|&j| left.iter().filter(move |&&i| i > j).map(move |&i| (i, j)))
            .fold(false, |odd, (i, j)| odd ^ self.x_deg[i].dot(self.x_deg[j]))
    }

    /// ξᵢ and xᵢ written in the module alphabet.
    fn letter_of_xi(&self, i: usize) -> (Letter, bool) {
        if i < self.r_even {
            (Letter::PiE(i), false)
        } else {
            (Letter::Eps(i), !self.basis[i].dot(self.pi))
        }
    }

    fn letter_of_x(&self, i: usize) -> Letter {
        if i < self.r_even {
            Letter::Eps(i)
        } else {
            Letter::PiE(i)
        }
    }

    fn check_matrix(&self, t: &GradedMatrix<C>) -> Result<(), KoszulError> {
        if t.row_ranks() != &self.ranks || t.col_ranks() != &self.ranks {
            return Err(KoszulError::RankMismatch {
                expected: self.ranks.clone(),
                found: t.row_ranks().clone(),
            });
        }
        if t.algebra().presentation() != self.alg.presentation() {
            return Err(AlgebraError::PresentationMismatch.into());
        }
        Ok(())
    }
}

impl<C: Scalar> KoszulElement<C> {
    pub fn zero(ctx: &Arc<KoszulContext<C>>) -> Self {
        KoszulElement {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// The constant a ∈ A ⊂ 𝒦⁰.
    pub fn constant(ctx: &Arc<KoszulContext<C>>, a: AlgebraElement<C>) -> Self {
        Self::term(ctx, KMonomial::one(ctx.r()), a)
    }

    pub fn one(ctx: &Arc<KoszulContext<C>>) -> Self {
        Self::constant(ctx, AlgebraElement::one(&ctx.alg))
    }

    /// ξ^α x^β a.
    pub fn term(ctx: &Arc<KoszulContext<C>>, m: KMonomial, a: AlgebraElement<C>) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(m, a);
        e
    }

    pub fn monomial(ctx: &Arc<KoszulContext<C>>, m: KMonomial) -> Self {
        Self::term(ctx, m, AlgebraElement::one(&ctx.alg))
    }

    pub fn xi(ctx: &Arc<KoszulContext<C>>, i: usize) -> Self {
        let mut m = KMonomial::one(ctx.r());
        m.xi = 1 << i;
        Self::monomial(ctx, m)
    }

    pub fn x(ctx: &Arc<KoszulContext<C>>, i: usize) -> Self {
        let mut m = KMonomial::one(ctx.r());
        m.x[i] = 1;
        Self::monomial(ctx, m)
    }

    /// Πeᵢ or εⁱ expressed in the x/ξ variables.
    pub fn letter(ctx: &Arc<KoszulContext<C>>, l: Letter) -> Self {
        match l {
            Letter::PiE(i) | Letter::Eps(i) if ctx.letter_of_x(i) == l => Self::x(ctx, i),
            Letter::PiE(i) | Letter::Eps(i) => {
                let (_, negate) = ctx.letter_of_xi(i);
                let v = Self::xi(ctx, i);
                if negate {
                    v.neg()
                } else {
                    v
                }
            }
        }
    }

    fn add_term(&mut self, m: KMonomial, a: AlgebraElement<C>) {
        if a.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = old + a;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, a);
            }
        }
    }

    pub fn context(&self) -> &Arc<KoszulContext<C>> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<KMonomial, AlgebraElement<C>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient a of ξ^α x^β a.
    pub fn coefficient(&self, m: &KMonomial) -> AlgebraElement<C> {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| AlgebraElement::zero(&self.ctx.alg))
    }

    fn same_context(&self, other: &Self) -> Result<(), KoszulError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(KoszulError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, KoszulError> {
        self.same_context(other)?;
        let mut out = self.clone();
        for (m, a) in &other.terms {
            out.add_term(m.clone(), a.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, KoszulError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        KoszulElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), -a)).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.scale(c));
        }
        out
    }

    /// P·b: multiplies every coefficient on the right.
    pub fn mul_right(&self, b: &AlgebraElement<C>) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * b);
        }
        out
    }

    /// Product in the graded-commutative algebra A[x, ξ].
    pub fn k_mul(&self, other: &Self) -> Result<Self, KoszulError> {
        self.same_context(other)?;
        let ctx = &self.ctx;
        let mut out = Self::zero(ctx);
        for (m2, a2) in &other.terms {
            let d2 = ctx.monomial_degree(m2);
            let xi2 = ctx.xi_mask_degree(m2.xi);
            for (m1, a1) in &self.terms {
                let Some(mut odd) = ctx.xi_merge_sign(m1.xi, m2.xi) else {
                    continue;
                };
                // x^β past ξ^α′, then the x's into order, then a past ξ^α′ x^β′
                odd ^= ctx.x_degree_of(&m1.x).dot(xi2);
                odd ^= ctx.x_merge_sign(&m1.x, &m2.x);
                let coeff = a1.twist(d2) * a2;
                let key = KMonomial {
                    xi: m1.xi | m2.xi,
                    x: m1.x.iter().zip(&m2.x).map(|(a, b)| a + b).collect(),
                };
                out.add_term(key, if odd { -coeff } else { coeff });
            }
        }
        Ok(out)
    }

    /// Homogeneous components by total degree.
    pub fn degrees(&self) -> Vec<Degree> {
        let mut out: Vec<Degree> = Vec::new();
        for (m, a) in &self.terms {
            let dm = self.ctx.monomial_degree(m);
            for d in a.components().into_keys() {
                if !out.contains(&(dm + d)) {
                    out.push(dm + d);
                }
            }
        }
        out.sort();
        out
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.checked_sub(other)
            .map(|d| {
                d.terms
                    .values()
                    .all(|a| a.approx_eq(&AlgebraElement::zero(&self.ctx.alg)))
            })
            .unwrap_or(false)
    }
}

impl<C: Scalar> PartialEq for KoszulElement<C> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl<C: Scalar> fmt::Display for KoszulElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, a)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let mut vars = Vec::new();
            for i in (0..self.ctx.r()).filter(|&i| m.xi >> i & 1 == 1) {
                vars.push(format!("ξ{}", i + 1));
            }
            for (i, &b) in m.x.iter().enumerate() {
                match b {
                    0 => {}
                    1 => vars.push(format!("x{}", i + 1)),
                    _ => vars.push(format!("x{}^{b}", i + 1)),
                }
            }
            if vars.is_empty() {
                write!(f, "({a})")?;
            } else {
                write!(f, "{}·({a})", vars.join(""))?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for KoszulElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KoszulElement({self})")
    }
}

/// Σ ξᵢ xᵢ.
pub fn d_element<C: Scalar>(ctx: &Arc<KoszulContext<C>>) -> KoszulElement<C> {
    let mut acc = KoszulElement::zero(ctx);
    for i in 0..ctx.r() {
        let t = KoszulElement::xi(ctx, i)
            .k_mul(&KoszulElement::x(ctx, i))
            .expect("same context");
        acc = acc.checked_add(&t).expect("same context");
    }
    acc
}

/// Σ Πeᵢ εⁱ in the module alphabet; equals [`d_element`].
pub fn d_element_from_letters<C: Scalar>(ctx: &Arc<KoszulContext<C>>) -> KoszulElement<C> {
    let mut acc = KoszulElement::zero(ctx);
    for i in 0..ctx.r() {
        let pe = KoszulElement::letter(ctx, Letter::PiE(i));
        let eps = KoszulElement::letter(ctx, Letter::Eps(i));
        acc = acc
            .checked_add(&pe.k_mul(&eps).expect("same context"))
            .expect("same context");
    }
    acc
}

/// d(P) = (Σ ξᵢ xᵢ)·P.
pub fn differential<C: Scalar>(p: &KoszulElement<C>) -> KoszulElement<C> {
    d_element(&p.ctx).k_mul(p).expect("same context")
}

/// ρ(P) = Σ ∂/∂xᵢ ∂/∂ξᵢ P, both partials acting from the left.
pub fn rho<C: Scalar>(p: &KoszulElement<C>) -> KoszulElement<C> {
    let ctx = &p.ctx;
    let mut out = KoszulElement::zero(ctx);
    for (m, a) in &p.terms {
        for i in 0..ctx.r() {
            if m.xi >> i & 1 == 0 || m.x[i] == 0 {
                continue;
            }
            let before = ctx.xi_mask_degree(m.xi & ((1u32 << i) - 1));
            let mut odd = ctx.xi_deg[i].dot(before);
            let xi = m.xi & !(1 << i);
            let passed = ctx.xi_mask_degree(xi) + ctx.x_degree_of(&m.x[..i]);
            odd ^= ctx.x_deg[i].dot(passed);
            let mut x = m.x.clone();
            x[i] -= 1;
            let c = a.scale(&C::from_i64(m.x[i] as i64));
            out.add_term(KMonomial { xi, x }, if odd { -c } else { c });
        }
    }
    out
}

/// ξ₁⋯ξ_r.
pub fn top_cocycle<C: Scalar>(ctx: &Arc<KoszulContext<C>>) -> KoszulElement<C> {
    let mut m = KMonomial::one(ctx.r());
    m.xi = full_mask(ctx.r());
    KoszulElement::monomial(ctx, m)
}

fn full_mask(r: usize) -> u32 {
    if r == 32 {
        u32::MAX
    } else {
        (1u32 << r) - 1
    }
}

/// r′π + Σ γᵤ rᵤ.
pub fn top_cocycle_degree<C: Scalar>(ctx: &KoszulContext<C>) -> Degree {
    let mut d = Degree::zero(ctx.alg.n());
    if ctx.r_even % 2 == 1 {
        d = d + ctx.pi;
    }
    for u in 0..ctx.ranks.blocks() {
        if ctx.ranks.ranks()[u] % 2 == 1 {
            d = d + ctx.ranks.block_degree(u);
        }
    }
    d
}

/// Coefficient B of the x-free top term ξ₁⋯ξ_r·B.
pub fn class_coefficient<C: Scalar>(p: &KoszulElement<C>) -> AlgebraElement<C> {
    let mut m = KMonomial::one(p.ctx.r());
    m.xi = full_mask(p.ctx.r());
    p.coefficient(&m)
}

/// Images of the x/ξ variables under a map given on Πeᵢ and εⁱ.
struct VariableImages<C> {
    xi: Vec<KoszulElement<C>>,
    x: Vec<KoszulElement<C>>,
}

impl<C: Scalar> VariableImages<C> {
    fn from_letters(ctx: &Arc<KoszulContext<C>>, pie: &[KoszulElement<C>], eps: &[KoszulElement<C>]) -> Self {
        let pick = |l: Letter| match l {
            Letter::PiE(i) => pie[i].clone(),
            Letter::Eps(i) => eps[i].clone(),
        };
        let xi = (0..ctx.r())
            .map(|i| {
                let (l, negate) = ctx.letter_of_xi(i);
                if negate {
                    pick(l).neg()
                } else {
                    pick(l)
                }
            })
            .collect();
        let x = (0..ctx.r()).map(|i| pick(ctx.letter_of_x(i))).collect();
        VariableImages { xi, x }
    }
}

/// An A-linear algebra endomorphism of 𝒦 given on the generators.
pub struct Morphism<C> {
    ctx: Arc<KoszulContext<C>>,
    images: VariableImages<C>,
}

impl<C: Scalar> Morphism<C> {
    /// φ̃ induced by T: Πeᵢ ↦ Σⱼ Πeⱼ tʲᵢ and εⁱ ↦ Σₖ εᵏ (−1)^⟨eᵢ+eₖ, eₖ⟩ t̃ⁱₖ with t̃ = T⁻¹.
    pub fn group_action(ctx: &Arc<KoszulContext<C>>, t: &GradedMatrix<C>) -> Result<Self, KoszulError> {
        ctx.check_matrix(t)?;
        if !t.degree().is_zero() {
            return Err(KoszulError::NotDegreeZero(t.degree()));
        }
        let inv = t.invert()?;
        let r = ctx.r();
        let pie: Vec<_> = (0..r)
            .map(|i| {
                (0..r).fold(KoszulElement::zero(ctx), |acc, j| {
                    let term = KoszulElement::letter(ctx, Letter::PiE(j)).mul_right(t.get(j, i));
                    acc.checked_add(&term).expect("same context")
                })
            })
            .collect();
        let eps: Vec<_> = (0..r)
            .map(|i| {
                (0..r).fold(KoszulElement::zero(ctx), |acc, k| {
                    let (ei, ek) = (ctx.basis[i], ctx.basis[k]);
                    let mut c = inv.get(i, k).clone();
                    if (ei + ek).dot(ek) {
                        c = -c;
                    }
                    let term = KoszulElement::letter(ctx, Letter::Eps(k)).mul_right(&c);
                    acc.checked_add(&term).expect("same context")
                })
            })
            .collect();
        Ok(Morphism {
            ctx: ctx.clone(),
            images: VariableImages::from_letters(ctx, &pie, &eps),
        })
    }

    pub fn apply(&self, p: &KoszulElement<C>) -> Result<KoszulElement<C>, KoszulError> {
        if !Arc::ptr_eq(&self.ctx, &p.ctx) {
            return Err(KoszulError::ContextMismatch);
        }
        let mut out = KoszulElement::zero(&self.ctx);
        for (m, a) in &p.terms {
            let mut acc = KoszulElement::one(&self.ctx);
            for i in (0..self.ctx.r()).filter(|&i| m.xi >> i & 1 == 1) {
                acc = acc.k_mul(&self.images.xi[i])?;
            }
            for (i, &b) in m.x.iter().enumerate() {
                for _ in 0..b {
                    acc = acc.k_mul(&self.images.x[i])?;
                }
            }
            out = out.checked_add(&acc.mul_right(a))?;
        }
        Ok(out)
    }
}

/// The graded derivation L_S, an A-linear derivation of degree deg S.
pub struct Derivation<C> {
    ctx: Arc<KoszulContext<C>>,
    degree: Degree,
    images: VariableImages<C>,
}

impl<C: Scalar> Derivation<C> {
    /// L_S(Πeᵢ) = Σₖ Πeₖ sᵏᵢ and L_S(εⁱ) = −(−1)^⟨eᵢ, S⟩ Σₖ sⁱₖ εᵏ.
    pub fn from_matrix(ctx: &Arc<KoszulContext<C>>, s: &GradedMatrix<C>) -> Result<Self, KoszulError> {
        ctx.check_matrix(s)?;
        let r = ctx.r();
        let pie: Vec<_> = (0..r)
            .map(|i| {
                (0..r).fold(KoszulElement::zero(ctx), |acc, k| {
                    let term = KoszulElement::letter(ctx, Letter::PiE(k)).mul_right(s.get(k, i));
                    acc.checked_add(&term).expect("same context")
                })
            })
            .collect();
        let eps: Vec<_> = (0..r)
            .map(|i| {
                let sum = (0..r).fold(KoszulElement::zero(ctx), |acc, k| {
                    let coeff = KoszulElement::constant(ctx, s.get(i, k).clone());
                    let term = coeff
                        .k_mul(&KoszulElement::letter(ctx, Letter::Eps(k)))
                        .expect("same context");
                    acc.checked_add(&term).expect("same context")
                });
                if ctx.basis[i].dot(s.degree()) {
                    sum
                } else {
                    sum.neg()
                }
            })
            .collect();
        Ok(Derivation {
            ctx: ctx.clone(),
            degree: s.degree(),
            images: VariableImages::from_letters(ctx, &pie, &eps),
        })
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    /// Extends the generator images by the graded Leibniz rule; L(a) = 0 on A.
    pub fn apply(&self, p: &KoszulElement<C>) -> Result<KoszulElement<C>, KoszulError> {
        let ctx = &self.ctx;
        if !Arc::ptr_eq(ctx, &p.ctx) {
            return Err(KoszulError::ContextMismatch);
        }
        let r = ctx.r();
        let mut out = KoszulElement::zero(ctx);
        for (m, a) in &p.terms {
            // the monomial as a word of variables in canonical order
            let mut word: Vec<(bool, usize)> = (0..r).filter(|&i| m.xi >> i & 1 == 1).map(|i| (true, i)).collect();
            for (i, &b) in m.x.iter().enumerate() {
                word.extend(std::iter::repeat_n((false, i), b as usize));
            }
            for p_idx in 0..word.len() {
                let split = |range: &[(bool, usize)]| {
                    let mut key = KMonomial::one(r);
                    for &(is_xi, i) in range {
                        if is_xi {
                            key.xi |= 1 << i;
                        } else {
                            key.x[i] += 1;
                        }
                    }
                    key
                };
                let prefix = split(&word[..p_idx]);
                let suffix = split(&word[p_idx + 1..]);
                let (is_xi, i) = word[p_idx];
                let image = if is_xi { &self.images.xi[i] } else { &self.images.x[i] };
                let mut term = KoszulElement::monomial(ctx, prefix.clone())
                    .k_mul(image)?
                    .k_mul(&KoszulElement::monomial(ctx, suffix))?
                    .mul_right(a);
                if self.degree.dot(ctx.monomial_degree(&prefix)) {
                    term = term.neg();
                }
                out = out.checked_add(&term)?;
            }
        }
        Ok(out)
    }
}

/// Φ(T): the coefficient B with φ̃(ξ₁⋯ξ_r) ≡ ξ₁⋯ξ_r·B on the top class.
pub fn group_action_class<C: Scalar>(
    ctx: &Arc<KoszulContext<C>>,
    t: &GradedMatrix<C>,
) -> Result<AlgebraElement<C>, KoszulError> {
    let phi = Morphism::group_action(ctx, t)?;
    Ok(class_coefficient(&phi.apply(&top_cocycle(ctx))?))
}

/// Whether L_S(Σ Πeᵢ εⁱ) vanishes, i.e. L_S commutes with d.
pub fn check_d_invariance<C: Scalar>(ctx: &Arc<KoszulContext<C>>, s: &GradedMatrix<C>) -> Result<bool, KoszulError> {
    if s.degree().is_odd() {
        return Err(KoszulError::OddDerivation(s.degree()));
    }
    let l = Derivation::from_matrix(ctx, s)?;
    Ok(l.apply(&d_element_from_letters(ctx))?.is_zero())
}

/// The action of L_S on the top class, as the left coefficient C in C·[ξ₁⋯ξ_r].
pub fn derivation_action_class<C: Scalar>(
    ctx: &Arc<KoszulContext<C>>,
    s: &GradedMatrix<C>,
) -> Result<AlgebraElement<C>, KoszulError> {
    if !check_d_invariance(ctx, s)? {
        return Err(KoszulError::DifferentialNotInvariant {
            degree: s.degree(),
            pi: ctx.pi,
        });
    }
    let l = Derivation::from_matrix(ctx, s)?;
    let right = class_coefficient(&l.apply(&top_cocycle(ctx))?);
    // ξ₁⋯ξ_r·B = twist(B)·ξ₁⋯ξ_r
    Ok(right.twist(ctx.monomial_degree(&top_monomial(ctx.r()))))
}

fn top_monomial(r: usize) -> KMonomial {
    let mut m = KMonomial::one(r);
    m.xi = full_mask(r);
    m
}

/// Cohomology of one (level, x-weight) layer of the truncated complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerCohomology {
    pub level: usize,
    pub x_weight: usize,
    /// Dimension over the scalar field.
    pub dimension: usize,
    /// The outgoing differential leaves the truncation.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelCohomology {
    pub level: usize,
    /// Sum over the truncation-safe layers.
    pub dimension: usize,
    /// `dimension / 2^m`, the rank over A.
    pub rank: usize,
    /// x-weights whose layer is affected by the truncation.
    pub unsafe_weights: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub weight_bound: usize,
    pub layers: Vec<LayerCohomology>,
    pub levels: Vec<LevelCohomology>,
}

fn x_exponents(r: usize, total: usize) -> Vec<Vec<u32>> {
    if r == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in x_exponents(r - 1, total - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

fn layer_basis<C: Scalar>(ctx: &KoszulContext<C>, k: usize, b: usize) -> Vec<(KMonomial, Monomial)> {
    let r = ctx.r();
    let dim = ctx.alg.dimension() as Monomial;
    let mut out = Vec::new();
    for xi in (0..=full_mask(r)).filter(|m| m.count_ones() as usize == k) {
        for x in x_exponents(r, b) {
            for mu in 0..dim {
                out.push((KMonomial { xi, x: x.clone() }, mu));
            }
        }
    }
    out
}

/// Rank of d: 𝒦^k_b → 𝒦^{k+1}_{b+1} over the scalar field.
fn layer_rank<C: Scalar>(ctx: &Arc<KoszulContext<C>>, k: usize, b: usize) -> usize {
    if k >= ctx.r() {
        return 0;
    }
    let target: HashMap<(KMonomial, Monomial), usize> = layer_basis(ctx, k + 1, b + 1)
        .into_iter()
        .enumerate()
        .map(|(i, key)| (key, i))
        .collect();
    let dgen = d_element(ctx);
    let columns = layer_basis(ctx, k, b)
        .into_iter()
        .map(|(m, mu)| {
            let src = KoszulElement::term(ctx, m, AlgebraElement::monomial(&ctx.alg, mu, C::one()));
            let img = dgen.k_mul(&src).expect("same context");
            let mut col = BTreeMap::new();
            for (km, a) in img.terms {
                for (&nu, c) in a.terms() {
                    col.insert(target[&(km.clone(), nu)], c.clone());
                }
            }
            col
        })
        .collect();
    sparse_rank(columns)
}

/// Cohomology of the complex truncated to x-weight ≤ W, split by x-weight.
///
/// d raises the x-weight by one, so the complex is a direct sum of strands
/// and layer (k, b) only sees the maps 𝒦^{k−1}_{b−1} → 𝒦^k_b → 𝒦^{k+1}_{b+1}.
/// The layer is exact information unless b = W and k < r.
pub fn cohomology_ranks<C: Scalar>(ctx: &Arc<KoszulContext<C>>, weight_bound: usize) -> CohomologyReport {
    let r = ctx.r();
    let dim_a = ctx.alg.dimension();
    let mut ranks = HashMap::new();
    let mut rank_of = |k: usize, b: usize| *ranks.entry((k, b)).or_insert_with(|| layer_rank(ctx, k, b));
    let mut layers = Vec::new();
    for k in 0..=r {
        for b in 0..=weight_bound {
            let size = layer_basis(ctx, k, b).len();
            let outgoing = if b < weight_bound { rank_of(k, b) } else { 0 };
            let incoming = if k > 0 && b > 0 { rank_of(k - 1, b - 1) } else { 0 };
            layers.push(LayerCohomology {
                level: k,
                x_weight: b,
                dimension: size - outgoing - incoming,
                truncated: b == weight_bound && k < r,
            });
        }
    }
    let levels = (0..=r)
        .map(|k| {
            let of_level: Vec<_> = layers.iter().filter(|l| l.level == k).collect();
            let dimension = of_level
                .iter()
                .filter(|l| !l.truncated)
                .map(|l| l.dimension)
                .sum::<usize>();
            LevelCohomology {
                level: k,
                dimension,
                rank: dimension / dim_a,
                unsafe_weights: of_level.iter().filter(|l| l.truncated).map(|l| l.x_weight).collect(),
            }
        })
        .collect();
    CohomologyReport {
        weight_bound,
        layers,
        levels,
    }
}

/// A random element with level ≤ `max_level` and x-weight ≤ `max_x`.
pub fn random_element_k<C: Scalar, R: Rng + ?Sized>(
    ctx: &Arc<KoszulContext<C>>,
    max_level: usize,
    max_x: usize,
    terms: usize,
    rng: &mut R,
) -> KoszulElement<C> {
    let r = ctx.r();
    let mut out = KoszulElement::zero(ctx);
    let degrees = standard_order(ctx.alg.n());
    for _ in 0..terms {
        let mut m = KMonomial::one(r);
        let level = rng.gen_range(0..=max_level.min(r));
        while (m.xi.count_ones() as usize) < level {
            m.xi |= 1 << rng.gen_range(0..r);
        }
        for _ in 0..rng.gen_range(0..=max_x) {
            m.x[rng.gen_range(0..r)] += 1;
        }
        let d = degrees[rng.gen_range(0..degrees.len())];
        out.add_term(m, random_element(&ctx.alg, d, rng));
    }
    out
}
