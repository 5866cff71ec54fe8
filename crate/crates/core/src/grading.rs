//! The grading group (Z₂)ⁿ.
//!
//! A [`Degree`] is an n-bit vector. Bits are stored in a mask with the leftmost
//! component as the most significant bit, so lexicographic order on vectors is
//! numeric order on masks.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const MAX_GRADING_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("degree length mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("degree component {0} is not 0 or 1")]
    NotABit(u64),
    #[error("grading dimension must be between 1 and {MAX_GRADING_DIM}, got {0}")]
    BadDimension(usize),
    #[error("rank vector has {found} entries, expected 2^{n} = {expected}")]
    RankLength { n: usize, expected: usize, found: usize },
    #[error("degree {0} is even, an odd degree is required")]
    NotOdd(Degree),
}

/// An element of (Z₂)ⁿ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    n: u8,
    mask: u32,
}

impl Degree {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_GRADING_DIM).contains(&n), "grading dimension {n} out of range");
        Degree { n: n as u8, mask: 0 }
    }

    pub fn zero_checked(n: usize) -> Result<Self, GradingError> {
        if !(1..=MAX_GRADING_DIM).contains(&n) {
            return Err(GradingError::BadDimension(n));
        }
        Ok(Degree { n: n as u8, mask: 0 })
    }

    /// The all-ones vector (1,…,1).
    pub fn ones(n: usize) -> Self {
        let mut d = Self::zero(n);
        d.mask = (1u32 << n) - 1;
        d
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self, GradingError> {
        let n = bits.len();
        if !(1..=MAX_GRADING_DIM).contains(&n) {
            return Err(GradingError::BadDimension(n));
        }
        let mut mask = 0u32;
        for &b in bits {
            if b > 1 {
                return Err(GradingError::NotABit(b as u64));
            }
            mask = (mask << 1) | b as u32;
        }
        Ok(Degree { n: n as u8, mask })
    }

    /// Builds a degree from a mask whose most significant of `n` bits is the first component.
    pub fn from_mask(n: usize, mask: u32) -> Self {
        let mut d = Self::zero(n);
        d.mask = mask & ((1u32 << n) - 1);
        d
    }

    /// Degree with a 1 exactly at the given (0-based) positions.
    pub fn unit_at(n: usize, positions: &[usize]) -> Self {
        let mut d = Self::zero(n);
        for &p in positions {
            assert!(p < n);
            d.mask |= 1 << (n - 1 - p);
        }
        d
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.n()).map(|i| self.bit(i)).collect()
    }

    /// Component `i` (0-based, from the left).
    pub fn bit(&self, i: usize) -> u8 {
        ((self.mask >> (self.n() - 1 - i)) & 1) as u8
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    pub fn checked_add(self, other: Degree) -> Result<Degree, GradingError> {
        self.same_dim(&other)?;
        Ok(Degree {
            n: self.n,
            mask: self.mask ^ other.mask,
        })
    }

    fn same_dim(&self, other: &Degree) -> Result<(), GradingError> {
        if self.n != other.n {
            return Err(GradingError::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// ⟨a, b⟩ as a boolean (true = 1). Panics if the lengths differ.
    pub fn dot(self, other: Degree) -> bool {
        assert_eq!(self.n, other.n, "mixing degrees of different grading dimension");
        (self.mask & other.mask).count_ones() % 2 == 1
    }

    /// Parity: odd iff ⟨a, a⟩ = 1.
    pub fn parity(self) -> Parity {
        if self.mask.count_ones() % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_even(self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn is_odd(self) -> bool {
        self.parity() == Parity::Odd
    }

    /// 0-based position of this degree in [`standard_order`].
    pub fn index(self) -> usize {
        let n = self.n();
        let q = 1usize << (n - 1);
        let rank_within = |odd: bool| (0..self.mask).filter(|m| (m.count_ones() % 2 == 1) == odd).count();
        match self.parity() {
            Parity::Even => rank_within(false),
            Parity::Odd => q + rank_within(true),
        }
    }

    /// Parses `011`, `0,1,1` or `[0,1,1]`.
    pub fn parse(s: &str) -> Result<Self, GradingError> {
        let bits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, '[' | ']' | ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(GradingError::NotABit(other as u64)),
            })
            .collect::<Result<_, _>>()?;
        Self::from_bits(&bits)
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        self.checked_add(rhs)
            .expect("mixing degrees of different grading dimension")
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.n() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.bit(i))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.bits().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        Degree::from_bits(&bits).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// ⟨a, b⟩ = Σ aᵢbᵢ mod 2.
pub fn scalar_product(a: Degree, b: Degree) -> Result<u8, GradingError> {
    a.same_dim(&b)?;
    Ok(a.dot(b) as u8)
}

/// All 2ⁿ degrees: the even ones in ascending lexicographic order, then the odd ones.
pub fn standard_order(n: usize) -> Vec<Degree> {
    assert!((1..=MAX_GRADING_DIM).contains(&n), "grading dimension {n} out of range");
    let all = (0..1u32 << n).map(|m| Degree::from_mask(n, m));
    let (even, odd): (Vec<_>, Vec<_>) = all.partition(|d| d.is_even());
    even.into_iter().chain(odd).collect()
}

/// 0-based position of `d` in [`standard_order`] (the block index of that degree).
pub fn degree_index(d: Degree) -> usize {
    d.index()
}

/// Block sizes (r₁,…,r_N) of a free graded module, indexed by the standard order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RankVector {
    n: usize,
    ranks: Vec<usize>,
    order: Vec<Degree>,
}

impl RankVector {
    pub fn new(n: usize, ranks: Vec<usize>) -> Result<Self, GradingError> {
        if !(1..=MAX_GRADING_DIM).contains(&n) {
            return Err(GradingError::BadDimension(n));
        }
        let expected = 1usize << n;
        if ranks.len() != expected {
            return Err(GradingError::RankLength {
                n,
                expected,
                found: ranks.len(),
            });
        }
        Ok(RankVector {
            n,
            ranks,
            order: standard_order(n),
        })
    }

    /// Rank vector with `count` basis elements in each listed degree.
    pub fn from_degrees(n: usize, degrees: &[(Degree, usize)]) -> Result<Self, GradingError> {
        let mut ranks = vec![0; 1 << n];
        for &(d, count) in degrees {
            if d.n() != n {
                return Err(GradingError::DimensionMismatch { left: n, right: d.n() });
            }
            ranks[d.index()] += count;
        }
        Self::new(n, ranks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Number of blocks N = 2ⁿ.
    pub fn blocks(&self) -> usize {
        self.ranks.len()
    }

    /// q = 2ⁿ⁻¹, the number of even degrees.
    pub fn q(&self) -> usize {
        self.ranks.len() / 2
    }

    /// Total rank r.
    pub fn total(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// r′: the number of even basis elements.
    pub fn even_total(&self) -> usize {
        self.ranks[..self.q()].iter().sum()
    }

    /// Degree γᵤ of block `u` (0-based).
    pub fn block_degree(&self, u: usize) -> Degree {
        self.order[u]
    }

    /// Index range of the basis elements in block `u`.
    pub fn block_range(&self, u: usize) -> std::ops::Range<usize> {
        let start: usize = self.ranks[..u].iter().sum();
        start..start + self.ranks[u]
    }

    /// Block containing basis element `i`.
    pub fn block_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (u, &r) in self.ranks.iter().enumerate() {
            acc += r;
            if i < acc {
                return u;
            }
        }
        panic!("basis index {i} out of range for total rank {}", self.total());
    }

    /// Degree of each basis element, in order.
    pub fn basis_degrees(&self) -> Vec<Degree> {
        self.ranks
            .iter()
            .zip(&self.order)
            .flat_map(|(&r, &d)| std::iter::repeat_n(d, r))
            .collect()
    }
}

impl fmt::Debug for RankVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RankVector{:?}", self.ranks)
    }
}

impl fmt::Display for RankVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.ranks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(bits: &[u8]) -> Degree {
        Degree::from_bits(bits).unwrap()
    }

    #[test]
    fn scalar_product_examples() {
        assert_eq!(scalar_product(deg(&[0, 1, 1]), deg(&[1, 0, 1])).unwrap(), 1);
        assert_eq!(scalar_product(deg(&[1, 1]), deg(&[1, 1])).unwrap(), 0);
        for g in standard_order(3) {
            assert_eq!(scalar_product(g, Degree::zero(3)).unwrap(), 0);
        }
        assert_eq!(
            scalar_product(deg(&[1, 0]), deg(&[1, 0, 0])),
            Err(GradingError::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn parity_examples() {
        assert_eq!(deg(&[1, 1]).parity(), Parity::Even);
        assert_eq!(Degree::zero(4).parity(), Parity::Even);
        assert_eq!(deg(&[0, 1, 1]).parity(), Parity::Even);
        assert_eq!(deg(&[1]).parity(), Parity::Odd);
    }

    #[test]
    fn standard_order_examples() {
        let two: Vec<_> = standard_order(2).iter().map(|d| d.bits()).collect();
        assert_eq!(two, vec![vec![0, 0], vec![1, 1], vec![0, 1], vec![1, 0]]);
        let one: Vec<_> = standard_order(1).iter().map(|d| d.bits()).collect();
        assert_eq!(one, vec![vec![0], vec![1]]);
        let three: Vec<_> = standard_order(3)[..4].iter().map(|d| d.bits()).collect();
        assert_eq!(three, vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn degree_index_examples() {
        assert_eq!(degree_index(deg(&[0, 0])), 0);
        assert_eq!(degree_index(deg(&[1, 0])), 3);
        assert_eq!(degree_index(deg(&[1, 1, 0])), 3);
    }

    #[test]
    fn group_laws_exhaustive() {
        for n in 1..=3 {
            let all = standard_order(n);
            assert_eq!(all.len(), 1 << n);
            for (u, &g) in all.iter().enumerate() {
                assert_eq!(g.index(), u);
                assert_eq!(g.is_even(), u < 1 << (n - 1));
                for &h in &all {
                    assert_eq!(g.dot(h), h.dot(g));
                    for &k in &all {
                        assert_eq!((g + h).dot(k), g.dot(k) ^ h.dot(k));
                    }
                }
            }
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), 1 << n);
        }
    }

    #[test]
    fn parse_and_serde() {
        assert_eq!(Degree::parse("011").unwrap(), deg(&[0, 1, 1]));
        assert_eq!(Degree::parse("[0, 1]").unwrap(), deg(&[0, 1]));
        assert!(Degree::parse("012").is_err());
        let json = serde_json::to_string(&deg(&[0, 1, 1])).unwrap();
        assert_eq!(json, "[0,1,1]");
        let back: Degree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, deg(&[0, 1, 1]));
        assert!(serde_json::from_str::<Degree>("[0,2]").is_err());
    }

    #[test]
    fn rank_vector_bookkeeping() {
        let rv = RankVector::new(2, vec![2, 0, 1, 3]).unwrap();
        assert_eq!(rv.total(), 6);
        assert_eq!(rv.even_total(), 2);
        assert_eq!(rv.q(), 2);
        assert_eq!(rv.block_range(2), 2..3);
        assert_eq!(rv.block_of(5), 3);
        assert_eq!(rv.basis_degrees()[3], deg(&[1, 0]));
        assert!(RankVector::new(2, vec![1, 1]).is_err());
    }
}
