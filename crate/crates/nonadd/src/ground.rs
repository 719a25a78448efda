//! Ground spaces and their decidable set algebras.
//!
//! Finite spaces carry the full power set, encoded as bitmasks. The
//! countable space carries the eventually-periodic subsets of the naturals,
//! which are closed under complement and finite Boolean combinations and
//! admit exact cardinality and membership queries. Every value here is
//! canonical after construction, so equality and hashing are structural.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported finite ground space; keeps table-based set functions
/// (2^n entries) and the variation DP tractable.
pub const MAX_FINITE_SPACE: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroundSpace {
    /// `Finite(n)` is the space {0, .., n-1} with the power set as algebra.
    Finite(u32),
    /// The naturals with the eventually-periodic sets as algebra.
    CountableNat,
}

impl GroundSpace {
    pub fn finite(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_FINITE_SPACE {
            return Err(Error::Invalid(format!(
                "finite space size must be in 1..={MAX_FINITE_SPACE}, got {n}"
            )));
        }
        Ok(GroundSpace::Finite(n))
    }

    pub fn nat() -> Self {
        GroundSpace::CountableNat
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroundSpace::Finite(_))
    }

    /// Ground spaces are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of points for finite spaces.
    pub fn len(&self) -> Option<u32> {
        match self {
            GroundSpace::Finite(n) => Some(*n),
            GroundSpace::CountableNat => None,
        }
    }

    pub fn full_mask(&self) -> Option<u64> {
        self.len().map(|n| (1u64 << n) - 1)
    }
}

/// Cardinality of a measurable set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetCardinality {
    Finite(u64),
    Infinite,
}

impl SetCardinality {
    pub fn is_infinite(&self) -> bool {
        matches!(self, SetCardinality::Infinite)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Cap on period blow-up in Boolean combinations.
const MAX_PERIOD: usize = 1 << 16;

/// An eventually-periodic subset of the naturals.
///
/// Membership of `n < prefix.len()` is `prefix[n]`; membership of
/// `n >= prefix.len()` is `period[(n - prefix.len()) % period.len()]`.
/// Constructors canonicalize to the minimal period (repetition reduced)
/// and the minimal prefix (leading periodic repetitions absorbed), so two
/// `EpSet`s denote the same subset iff they are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpSet {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
}

impl EpSet {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Invalid("EpSet period must be nonempty".into()));
        }
        let mut s = EpSet { prefix, period };
        s.canonicalize();
        Ok(s)
    }

    pub fn empty() -> Self {
        EpSet { prefix: vec![], period: vec![false] }
    }

    pub fn full() -> Self {
        EpSet { prefix: vec![], period: vec![true] }
    }

    /// Finite set given by its members.
    pub fn from_members(members: &[u64]) -> Self {
        let len = members.iter().max().map_or(0, |m| m + 1) as usize;
        let mut prefix = vec![false; len];
        for &m in members {
            prefix[m as usize] = true;
        }
        let mut s = EpSet { prefix, period: vec![false] };
        s.canonicalize();
        s
    }

    pub fn singleton(n: u64) -> Self {
        Self::from_members(&[n])
    }

    /// The arithmetic progression { n : n >= from, n ≡ from (mod step) }.
    pub fn progression(from: u64, step: u64) -> Result<Self> {
        if step == 0 || step as usize > MAX_PERIOD {
            return Err(Error::Invalid(format!("invalid progression step {step}")));
        }
        let mut period = vec![false; step as usize];
        period[0] = true;
        let prefix = vec![false; from as usize];
        // phase: membership(n) for n >= from is period[(n - from) % step],
        // which is true exactly when n ≡ from (mod step).
        let mut s = EpSet { prefix, period };
        s.canonicalize();
        Ok(s)
    }

    /// All naturals >= `from`.
    pub fn tail(from: u64) -> Self {
        let mut s = EpSet { prefix: vec![false; from as usize], period: vec![true] };
        s.canonicalize();
        s
    }

    pub fn contains(&self, n: u64) -> bool {
        let l = self.prefix.len() as u64;
        if n < l {
            self.prefix[n as usize]
        } else {
            self.period[((n - l) % self.period.len() as u64) as usize]
        }
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn prefix_bits(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period_bits(&self) -> &[bool] {
        &self.period
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.iter().all(|b| !b) && self.period.iter().all(|b| !b)
    }

    pub fn is_finite(&self) -> bool {
        self.period.iter().all(|b| !b)
    }

    pub fn cardinality(&self) -> SetCardinality {
        if self.is_finite() {
            SetCardinality::Finite(self.prefix.iter().filter(|b| **b).count() as u64)
        } else {
            SetCardinality::Infinite
        }
    }

    /// Pointwise Boolean combination, canonicalized.
    pub fn combine(&self, other: &EpSet, op: SetOp) -> Result<EpSet> {
        let l = self.prefix.len().max(other.prefix.len());
        let p = lcm(self.period.len() as u64, other.period.len() as u64) as usize;
        if p > MAX_PERIOD {
            return Err(Error::Invalid(format!("combined period {p} exceeds cap {MAX_PERIOD}")));
        }
        let f = |a: bool, b: bool| match op {
            SetOp::Union => a || b,
            SetOp::Intersection => a && b,
            SetOp::Difference => a && !b,
        };
        let prefix: Vec<bool> =
            (0..l as u64).map(|n| f(self.contains(n), other.contains(n))).collect();
        let period: Vec<bool> = (0..p as u64)
            .map(|i| f(self.contains(l as u64 + i), other.contains(l as u64 + i)))
            .collect();
        let mut s = EpSet { prefix, period };
        s.canonicalize();
        Ok(s)
    }

    pub fn union(&self, other: &EpSet) -> Result<EpSet> {
        self.combine(other, SetOp::Union)
    }

    pub fn intersection(&self, other: &EpSet) -> Result<EpSet> {
        self.combine(other, SetOp::Intersection)
    }

    pub fn difference(&self, other: &EpSet) -> Result<EpSet> {
        self.combine(other, SetOp::Difference)
    }

    pub fn complement(&self) -> EpSet {
        // difference from the full set never raises the period cap
        EpSet::full().combine(self, SetOp::Difference).expect("complement cannot overflow")
    }

    pub fn is_subset_of(&self, other: &EpSet) -> bool {
        self.difference(other).map(|d| d.is_empty()).unwrap_or(false)
    }

    pub fn is_disjoint_from(&self, other: &EpSet) -> bool {
        self.intersection(other).map(|d| d.is_empty()).unwrap_or(false)
    }

    /// Smallest member, if any.
    pub fn min_element(&self) -> Option<u64> {
        if let Some(i) = self.prefix.iter().position(|b| *b) {
            return Some(i as u64);
        }
        let l = self.prefix.len() as u64;
        self.period.iter().position(|b| *b).map(|i| l + i as u64)
    }

    /// Members below the bound, ascending.
    pub fn members_below(&self, bound: u64) -> Vec<u64> {
        (0..bound).filter(|&n| self.contains(n)).collect()
    }

    /// Members of a finite set, ascending. Errors on infinite sets.
    pub fn members(&self) -> Result<Vec<u64>> {
        if !self.is_finite() {
            return Err(Error::Unsupported("cannot enumerate an infinite set".into()));
        }
        Ok(self.members_below(self.prefix.len() as u64))
    }

    fn canonicalize(&mut self) {
        // minimal cyclic period: the smallest divisor d of p with the
        // pattern equal to its length-d root repeated
        let p = self.period.len();
        for d in 1..=p {
            if p % d == 0 && (d..p).all(|i| self.period[i] == self.period[i - d]) {
                self.period.truncate(d);
                break;
            }
        }
        // absorb periodic repetitions at the end of the prefix: dropping the
        // last prefix bit rotates the period right by one
        while let Some(&last) = self.prefix.last() {
            if last == *self.period.last().unwrap() {
                self.prefix.pop();
                let tail = self.period.pop().unwrap();
                self.period.insert(0, tail);
            } else {
                break;
            }
        }
    }
}

impl fmt::Display for EpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| v.iter().map(|b| if *b { '1' } else { '0' }).collect::<String>();
        write!(f, "prefix:{} period:{}", bits(&self.prefix), bits(&self.period))
    }
}

/// A member of a ground space's algebra: a bitmask subset of a finite space
/// or an eventually-periodic subset of the naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MeasurableSet {
    Finite { n: u32, mask: u64 },
    Nat(EpSet),
}

impl MeasurableSet {
    pub fn finite_from_mask(n: u32, mask: u64) -> Result<Self> {
        let space = GroundSpace::finite(n)?;
        if mask & !space.full_mask().unwrap() != 0 {
            return Err(Error::NotInAlgebra(format!("mask {mask:#b} exceeds space of {n} points")));
        }
        Ok(MeasurableSet::Finite { n, mask })
    }

    pub fn finite_from_members(n: u32, members: &[u64]) -> Result<Self> {
        let mut mask = 0u64;
        for &m in members {
            if m >= n as u64 {
                return Err(Error::NotInAlgebra(format!("point {m} outside space of {n} points")));
            }
            mask |= 1 << m;
        }
        Self::finite_from_mask(n, mask)
    }

    pub fn nat(set: EpSet) -> Self {
        MeasurableSet::Nat(set)
    }

    pub fn empty(space: GroundSpace) -> Self {
        match space {
            GroundSpace::Finite(n) => MeasurableSet::Finite { n, mask: 0 },
            GroundSpace::CountableNat => MeasurableSet::Nat(EpSet::empty()),
        }
    }

    pub fn full(space: GroundSpace) -> Self {
        match space {
            GroundSpace::Finite(n) => MeasurableSet::Finite { n, mask: (1 << n) - 1 },
            GroundSpace::CountableNat => MeasurableSet::Nat(EpSet::full()),
        }
    }

    pub fn space(&self) -> GroundSpace {
        match self {
            MeasurableSet::Finite { n, .. } => GroundSpace::Finite(*n),
            MeasurableSet::Nat(_) => GroundSpace::CountableNat,
        }
    }

    pub fn mask(&self) -> Option<u64> {
        match self {
            MeasurableSet::Finite { mask, .. } => Some(*mask),
            MeasurableSet::Nat(_) => None,
        }
    }

    pub fn as_ep(&self) -> Option<&EpSet> {
        match self {
            MeasurableSet::Nat(e) => Some(e),
            MeasurableSet::Finite { .. } => None,
        }
    }

    pub fn contains(&self, point: u64) -> bool {
        match self {
            MeasurableSet::Finite { mask, .. } => point < 64 && mask & (1 << point) != 0,
            MeasurableSet::Nat(e) => e.contains(point),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            MeasurableSet::Finite { mask, .. } => *mask == 0,
            MeasurableSet::Nat(e) => e.is_empty(),
        }
    }

    pub fn cardinality(&self) -> SetCardinality {
        match self {
            MeasurableSet::Finite { mask, .. } => SetCardinality::Finite(mask.count_ones() as u64),
            MeasurableSet::Nat(e) => e.cardinality(),
        }
    }

    fn check_same_space(&self, other: &MeasurableSet) -> Result<()> {
        if self.space() != other.space() {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn combine(&self, other: &MeasurableSet, op: SetOp) -> Result<MeasurableSet> {
        self.check_same_space(other)?;
        match (self, other) {
            (MeasurableSet::Finite { n, mask: a }, MeasurableSet::Finite { mask: b, .. }) => {
                let mask = match op {
                    SetOp::Union => a | b,
                    SetOp::Intersection => a & b,
                    SetOp::Difference => a & !b,
                };
                Ok(MeasurableSet::Finite { n: *n, mask })
            }
            (MeasurableSet::Nat(a), MeasurableSet::Nat(b)) => Ok(MeasurableSet::Nat(a.combine(b, op)?)),
            _ => Err(Error::SpaceMismatch),
        }
    }

    pub fn union(&self, other: &MeasurableSet) -> Result<MeasurableSet> {
        self.combine(other, SetOp::Union)
    }

    pub fn intersection(&self, other: &MeasurableSet) -> Result<MeasurableSet> {
        self.combine(other, SetOp::Intersection)
    }

    pub fn difference(&self, other: &MeasurableSet) -> Result<MeasurableSet> {
        self.combine(other, SetOp::Difference)
    }

    pub fn complement(&self) -> MeasurableSet {
        MeasurableSet::full(self.space())
            .difference(self)
            .expect("complement stays in the algebra")
    }

    pub fn is_subset_of(&self, other: &MeasurableSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_disjoint_from(&self, other: &MeasurableSet) -> Result<bool> {
        Ok(self.intersection(other)?.is_empty())
    }

    pub fn min_element(&self) -> Option<u64> {
        match self {
            MeasurableSet::Finite { mask, .. } => {
                if *mask == 0 {
                    None
                } else {
                    Some(mask.trailing_zeros() as u64)
                }
            }
            MeasurableSet::Nat(e) => e.min_element(),
        }
    }

    /// Ascending members of a finite set.
    pub fn members(&self) -> Result<Vec<u64>> {
        match self {
            MeasurableSet::Finite { n, mask } => {
                Ok((0..*n as u64).filter(|i| mask & (1 << i) != 0).collect())
            }
            MeasurableSet::Nat(e) => e.members(),
        }
    }
}

impl fmt::Display for MeasurableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurableSet::Finite { n, mask } => {
                let members: Vec<String> =
                    (0..*n as u64).filter(|i| mask & (1 << i) != 0).map(|i| i.to_string()).collect();
                write!(f, "{{{}}}", members.join(", "))
            }
            MeasurableSet::Nat(e) => write!(f, "{e}"),
        }
    }
}

impl Serialize for MeasurableSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
