//! Arithmetic, order and metric structure on the nonnegative closed
//! intervals `[lo, hi]` with `0 <= lo <= hi`, plus limits of interval
//! sequences.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonnegative closed interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn zero() -> Self {
        Interval { lo: 0.0, hi: 0.0 }
    }

    pub fn point(v: f64) -> Result<Self> {
        Self::new(v, v)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Minkowski sum.
    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo + other.lo, hi: self.hi + other.hi }
    }

    /// Scalar multiple, `lambda >= 0`.
    pub fn scale(&self, lambda: f64) -> Result<Interval> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::Invalid(format!("interval scale requires lambda >= 0, got {lambda}")));
        }
        Ok(Interval { lo: lambda * self.lo, hi: lambda * self.hi })
    }

    /// Endpointwise product `[r,s] • [x,y] = [rx, sy]`.
    pub fn mul(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo * other.lo, hi: self.hi * other.hi }
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Weak interval order: both endpoints dominated.
    pub fn leq(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi <= other.hi
    }

    /// Set inclusion.
    pub fn subset(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Hausdorff distance: max of the endpoint gaps.
    pub fn hausdorff(&self, other: &Interval) -> f64 {
        (other.lo - self.lo).abs().max((other.hi - self.hi).abs())
    }

    /// `‖[r,s]‖ = s` on nonnegative intervals.
    pub fn norm(&self) -> f64 {
        self.hi
    }

    pub fn sum<I: IntoIterator<Item = Interval>>(items: I) -> Interval {
        items.into_iter().fold(Interval::zero(), |acc, x| acc.add(&x))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Tail behavior of a truncated interval sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SeqTail {
    /// The last listed term repeats forever.
    EventuallyConstant,
    /// The listed pattern repeats forever after the listed terms.
    Periodic(Vec<Interval>),
    /// Terms approach this interval monotonically per component beyond the
    /// listed terms.
    ConvergesTo(Interval),
    /// Upper endpoints grow without bound.
    UnboundedAbove,
}

/// A sequence of intervals: explicit terms plus declared tail behavior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSeq {
    pub terms: Vec<Interval>,
    pub tail: SeqTail,
}

impl IntervalSeq {
    pub fn new(terms: Vec<Interval>, tail: SeqTail) -> Result<Self> {
        match &tail {
            SeqTail::EventuallyConstant if terms.is_empty() => {
                Err(Error::Invalid("eventually-constant sequence needs at least one term".into()))
            }
            SeqTail::Periodic(p) if p.is_empty() => {
                Err(Error::Invalid("periodic tail needs a nonempty pattern".into()))
            }
            _ => Ok(IntervalSeq { terms, tail }),
        }
    }

    fn tail_candidates(&self) -> Result<Vec<Interval>> {
        Ok(match &self.tail {
            SeqTail::EventuallyConstant => vec![*self.terms.last().unwrap()],
            SeqTail::Periodic(p) => p.clone(),
            SeqTail::ConvergesTo(l) => vec![*l],
            SeqTail::UnboundedAbove => return Err(Error::UnboundedSup),
        })
    }

    /// Componentwise infimum over the whole sequence.
    pub fn inf(&self) -> Result<Interval> {
        let mut c = self.terms.clone();
        c.extend(self.tail_candidates().map_err(|_| {
            Error::Unsupported("infimum of a sequence with unbounded tail".into())
        })?);
        c.into_iter()
            .reduce(|a, b| a.meet(&b))
            .ok_or_else(|| Error::Invalid("empty interval sequence".into()))
    }

    /// Componentwise supremum over the whole sequence.
    pub fn sup(&self) -> Result<Interval> {
        let mut c = self.terms.clone();
        c.extend(self.tail_candidates()?);
        c.into_iter()
            .reduce(|a, b| a.join(&b))
            .ok_or_else(|| Error::Invalid("empty interval sequence".into()))
    }

    /// Componentwise limit inferior; listed terms do not matter, only the
    /// tail does.
    pub fn liminf(&self) -> Result<Interval> {
        match &self.tail {
            SeqTail::EventuallyConstant => Ok(*self.terms.last().unwrap()),
            SeqTail::Periodic(p) => Ok(p.iter().copied().reduce(|a, b| a.meet(&b)).unwrap()),
            SeqTail::ConvergesTo(l) => Ok(*l),
            SeqTail::UnboundedAbove => Err(Error::UnboundedSup),
        }
    }
}
