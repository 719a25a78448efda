//! Real-valued functions on ground spaces in exactly-evaluable form.
//!
//! On a finite space a function is a value table. On the naturals it is a
//! finite prefix of explicit values followed by a periodically-modulated
//! tail: for `n >= L` the value is a finite sum of geometric terms
//! `c * r^n` (with `0 < r <= 1`, `r = 1` meaning a constant contribution)
//! attached to the residue class of `n - L`. The family is closed under
//! sum, scalar multiple, pointwise product and restriction by a measurable
//! set, and single-term tails are closed under powers, so series, extrema
//! and sign queries stay exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{EpSet, GroundSpace, MeasurableSet};

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

/// One geometric tail term `coeff * ratio^n` (absolute index `n`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeomTerm {
    pub coeff: f64,
    pub ratio: f64,
}

impl GeomTerm {
    pub fn new(coeff: f64, ratio: f64) -> Result<Self> {
        if !coeff.is_finite() || !ratio.is_finite() || ratio <= 0.0 || ratio > 1.0 {
            return Err(Error::Invalid(format!(
                "geometric term requires finite coeff and ratio in (0,1], got coeff={coeff} ratio={ratio}"
            )));
        }
        Ok(GeomTerm { coeff, ratio })
    }
}

/// Exponential sum `k |-> sum_t a_t * s_t^k` with `s_t` in (0,1]; the
/// analysis core behind exact extrema and sign decisions on tails.
#[derive(Debug, Clone)]
struct ExpSum {
    terms: Vec<(f64, f64)>, // (a, s), merged by s, zero coefficients dropped
}

const DOMINANCE_CAP: u64 = 100_000;

impl ExpSum {
    fn new(raw: &[(f64, f64)]) -> ExpSum {
        let mut terms: Vec<(f64, f64)> = Vec::new();
        for &(a, s) in raw {
            if let Some(t) = terms.iter_mut().find(|t| t.1 == s) {
                t.0 += a;
            } else {
                terms.push((a, s));
            }
        }
        terms.retain(|t| t.0 != 0.0);
        terms.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap());
        ExpSum { terms }
    }

    fn value_at(&self, k: u64) -> f64 {
        self.terms.iter().map(|&(a, s)| a * powi(s, k)).sum()
    }

    fn limit(&self) -> f64 {
        self.terms.iter().filter(|t| t.1 == 1.0).map(|t| t.0).sum()
    }

    /// Smallest k from which the leading term strictly dominates the rest,
    /// so the sign of the sum equals the sign of the leading coefficient.
    fn dominance_index(&self) -> Result<u64> {
        if self.terms.len() <= 1 {
            return Ok(0);
        }
        let (a0, s0) = self.terms[0];
        let mut k = 0u64;
        loop {
            let rest: f64 =
                self.terms[1..].iter().map(|&(a, s)| a.abs() * powi(s / s0, k)).sum();
            if a0.abs() > rest {
                return Ok(k);
            }
            k += 1;
            if k > DOMINANCE_CAP {
                return Err(Error::Unsupported(
                    "tail dominance analysis exceeded iteration cap".into(),
                ));
            }
        }
    }

    /// Exact extrema of the sequence over k >= 0.
    fn extrema(&self) -> Result<SeqBounds> {
        if self.terms.is_empty() {
            return Ok(SeqBounds::point(0.0));
        }
        // difference sequence d(k) = value(k+1) - value(k); its eventual
        // sign fixes monotonicity beyond the dominance index
        let diff = ExpSum::new(
            &self.terms.iter().map(|&(a, s)| (a * (s - 1.0), s)).collect::<Vec<_>>(),
        );
        if diff.terms.is_empty() {
            return Ok(SeqBounds::point(self.value_at(0)));
        }
        let k0 = diff.dominance_index()?;
        let mut bounds = SeqBounds::point(self.value_at(0));
        for k in 1..=k0 {
            bounds.add_attained(self.value_at(k));
        }
        // beyond k0 the sequence moves monotonically from value(k0) to the
        // limit without reaching it
        bounds.add_limit(self.limit());
        Ok(bounds)
    }
}

fn powi(base: f64, exp: u64) -> f64 {
    if exp <= i32::MAX as u64 {
        base.powi(exp as i32)
    } else {
        base.powf(exp as f64)
    }
}

/// Extremum value together with whether some point attains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub value: f64,
    pub attained: bool,
}

/// Exact bounds of a function restricted to a set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub inf: Extremum,
    pub sup: Extremum,
}

#[derive(Debug, Clone, Copy)]
struct SeqBounds {
    inf: f64,
    inf_attained: bool,
    sup: f64,
    sup_attained: bool,
}

impl SeqBounds {
    fn point(v: f64) -> SeqBounds {
        SeqBounds { inf: v, inf_attained: true, sup: v, sup_attained: true }
    }

    fn add_attained(&mut self, v: f64) {
        if v < self.inf || (v == self.inf && !self.inf_attained) {
            self.inf = v;
            self.inf_attained = true;
        }
        if v > self.sup || (v == self.sup && !self.sup_attained) {
            self.sup = v;
            self.sup_attained = true;
        }
    }

    fn add_limit(&mut self, v: f64) {
        if v < self.inf {
            self.inf = v;
            self.inf_attained = false;
        }
        if v > self.sup {
            self.sup = v;
            self.sup_attained = false;
        }
    }

    fn merge(&mut self, other: &SeqBounds) {
        if other.inf < self.inf || (other.inf == self.inf && other.inf_attained) {
            self.inf = other.inf;
            self.inf_attained = other.inf_attained || (other.inf == self.inf && self.inf_attained);
        }
        if other.sup > self.sup || (other.sup == self.sup && other.sup_attained) {
            self.sup = other.sup;
            self.sup_attained = other.sup_attained || (other.sup == self.sup && self.sup_attained);
        }
    }

    fn into_bounds(self) -> Bounds {
        Bounds {
            inf: Extremum { value: self.inf, attained: self.inf_attained },
            sup: Extremum { value: self.sup, attained: self.sup_attained },
        }
    }
}

/// Outcome of summing a function over a set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SeriesSum {
    Convergent(f64),
    /// Absolute convergence fails; the witness carries leading partial sums.
    Divergent { partial_sums: Vec<f64> },
}

/// Function on the naturals: explicit prefix plus periodic geometric tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NatFunction {
    prefix: Vec<f64>,
    /// Tail classes by residue of `n - prefix.len()`; length is the period.
    classes: Vec<Vec<GeomTerm>>,
}

impl NatFunction {
    pub fn new(prefix: Vec<f64>, classes: Vec<Vec<GeomTerm>>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Invalid("tail must have at least one residue class".into()));
        }
        if prefix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("prefix values must be finite".into()));
        }
        for class in &classes {
            for t in class {
                GeomTerm::new(t.coeff, t.ratio)?;
            }
        }
        let mut f = NatFunction { prefix, classes };
        f.normalize();
        Ok(f)
    }

    /// Prefix values followed by a single uniform tail.
    pub fn with_tail(prefix: Vec<f64>, tail: Vec<GeomTerm>) -> Result<Self> {
        Self::new(prefix, vec![tail])
    }

    pub fn constant(c: f64) -> Self {
        NatFunction { prefix: vec![], classes: vec![vec![GeomTerm { coeff: c, ratio: 1.0 }]] }
    }

    /// `n |-> coeff * ratio^n`.
    pub fn geometric(coeff: f64, ratio: f64) -> Result<Self> {
        let t = GeomTerm::new(coeff, ratio)?;
        Ok(NatFunction { prefix: vec![], classes: vec![vec![t]] })
    }

    pub fn zero() -> Self {
        NatFunction { prefix: vec![], classes: vec![vec![]] }
    }

    fn normalize(&mut self) {
        for class in &mut self.classes {
            let merged = ExpSum::new(
                &class.iter().map(|t| (t.coeff, t.ratio)).collect::<Vec<_>>(),
            );
            *class = merged
                .terms
                .into_iter()
                .map(|(coeff, ratio)| GeomTerm { coeff, ratio })
                .collect();
        }
    }

    pub fn prefix_len(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn period(&self) -> u64 {
        self.classes.len() as u64
    }

    pub fn eval(&self, n: u64) -> f64 {
        let l = self.prefix_len();
        if n < l {
            self.prefix[n as usize]
        } else {
            let class = &self.classes[((n - l) % self.period()) as usize];
            class.iter().map(|t| t.coeff * powi(t.ratio, n)).sum()
        }
    }

    /// Re-express with a longer prefix and/or finer period.
    fn aligned(&self, prefix_len: u64, period: u64) -> NatFunction {
        debug_assert!(prefix_len >= self.prefix_len());
        debug_assert!(period % self.period() == 0);
        let prefix: Vec<f64> = (0..prefix_len).map(|n| self.eval(n)).collect();
        let l = self.prefix_len();
        let classes: Vec<Vec<GeomTerm>> = (0..period)
            .map(|i| {
                let orig = ((prefix_len - l + i) % self.period()) as usize;
                self.classes[orig].clone()
            })
            .collect();
        NatFunction { prefix, classes }
    }

    fn common_shape(&self, other: &NatFunction) -> (u64, u64) {
        (
            self.prefix_len().max(other.prefix_len()),
            lcm(self.period(), other.period()),
        )
    }

    pub fn add(&self, other: &NatFunction) -> NatFunction {
        let (l, p) = self.common_shape(other);
        let a = self.aligned(l, p);
        let b = other.aligned(l, p);
        let prefix = a.prefix.iter().zip(&b.prefix).map(|(x, y)| x + y).collect();
        let classes = a
            .classes
            .iter()
            .zip(&b.classes)
            .map(|(ca, cb)| {
                let mut c = ca.clone();
                c.extend(cb.iter().cloned());
                c
            })
            .collect();
        let mut f = NatFunction { prefix, classes };
        f.normalize();
        f
    }

    pub fn scale(&self, alpha: f64) -> NatFunction {
        let prefix = self.prefix.iter().map(|x| alpha * x).collect();
        let classes = self
            .classes
            .iter()
            .map(|c| c.iter().map(|t| GeomTerm { coeff: alpha * t.coeff, ratio: t.ratio }).collect())
            .collect();
        let mut f = NatFunction { prefix, classes };
        f.normalize();
        f
    }

    pub fn mul(&self, other: &NatFunction) -> NatFunction {
        let (l, p) = self.common_shape(other);
        let a = self.aligned(l, p);
        let b = other.aligned(l, p);
        let prefix = a.prefix.iter().zip(&b.prefix).map(|(x, y)| x * y).collect();
        let classes = a
            .classes
            .iter()
            .zip(&b.classes)
            .map(|(ca, cb)| {
                let mut c = Vec::new();
                for ta in ca {
                    for tb in cb {
                        c.push(GeomTerm { coeff: ta.coeff * tb.coeff, ratio: ta.ratio * tb.ratio });
                    }
                }
                c
            })
            .collect();
        let mut f = NatFunction { prefix, classes };
        f.normalize();
        f
    }

    /// Pointwise `|f|^p`. Exact for tails of at most one geometric term per
    /// class when `p > 0`; `p = 1` additionally accepts sign-constant
    /// multi-term classes.
    pub fn abs_pow(&self, p: f64) -> Result<NatFunction> {
        if p <= 0.0 {
            return Err(Error::Unsupported(
                "nonpositive powers are not representable in the tail model".into(),
            ));
        }
        let prefix = self.prefix.iter().map(|x| x.abs().powf(p)).collect();
        let mut classes = Vec::with_capacity(self.classes.len());
        for (i, class) in self.classes.iter().enumerate() {
            match class.len() {
                0 => classes.push(vec![]),
                1 => {
                    let t = class[0];
                    classes.push(vec![GeomTerm {
                        coeff: t.coeff.abs().powf(p),
                        ratio: t.ratio.powf(p),
                    }]);
                }
                _ if p == 1.0 => {
                    let sign = self.class_sign(i)?;
                    match sign {
                        ClassSign::NonNegative => classes.push(class.clone()),
                        ClassSign::NonPositive => classes.push(
                            class.iter().map(|t| GeomTerm { coeff: -t.coeff, ratio: t.ratio }).collect(),
                        ),
                        ClassSign::Mixed => {
                            return Err(Error::Unsupported(
                                "absolute value of a sign-changing multi-term tail".into(),
                            ))
                        }
                    }
                }
                _ => {
                    return Err(Error::Unsupported(
                        "powers of multi-term tails are not representable".into(),
                    ))
                }
            }
        }
        NatFunction::new(prefix, classes)
    }

    fn class_expsum(&self, class_index: usize) -> ExpSum {
        let l = self.prefix_len();
        let p = self.period();
        let base = l + class_index as u64;
        ExpSum::new(
            &self.classes[class_index]
                .iter()
                .map(|t| (t.coeff * powi(t.ratio, base), powi(t.ratio, p)))
                .collect::<Vec<_>>(),
        )
    }

    fn class_sign(&self, class_index: usize) -> Result<ClassSign> {
        let b = self.class_expsum(class_index).extrema()?;
        Ok(if b.inf >= 0.0 {
            ClassSign::NonNegative
        } else if b.sup <= 0.0 {
            ClassSign::NonPositive
        } else {
            ClassSign::Mixed
        })
    }

    /// Exact extrema over a nonempty eventually-periodic set.
    pub fn extrema_on(&self, set: &EpSet) -> Result<Bounds> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let l = self.prefix_len().max(set.prefix_len() as u64);
        let p = lcm(self.period(), set.period_len() as u64);
        let f = self.aligned(l, p);
        let mut acc: Option<SeqBounds> = None;
        let mut push = |b: SeqBounds| match &mut acc {
            None => acc = Some(b),
            Some(a) => a.merge(&b),
        };
        for n in 0..l {
            if set.contains(n) {
                push(SeqBounds::point(f.eval(n)));
            }
        }
        for i in 0..p {
            if set.contains(l + i) {
                push(f.class_expsum(i as usize).extrema()?);
            }
        }
        Ok(acc.expect("nonempty set yields at least one candidate").into_bounds())
    }

    /// Exact sum over an eventually-periodic set, with absolute-convergence
    /// detection.
    pub fn sum_over(&self, set: &EpSet) -> SeriesSum {
        let l = self.prefix_len().max(set.prefix_len() as u64);
        let p = lcm(self.period(), set.period_len() as u64);
        let f = self.aligned(l, p);
        // divergence: some active class keeps a nonzero constant component
        for i in 0..p {
            if set.contains(l + i) {
                let constant: f64 = f.classes[i as usize]
                    .iter()
                    .filter(|t| t.ratio == 1.0)
                    .map(|t| t.coeff)
                    .sum();
                if constant != 0.0 {
                    let members = set.members_below(l + 20 * p);
                    let mut partial = 0.0;
                    let partial_sums =
                        members.iter().map(|&n| {
                            partial += self.eval(n);
                            partial
                        }).collect();
                    return SeriesSum::Divergent { partial_sums };
                }
            }
        }
        let mut total = 0.0;
        for n in 0..l {
            if set.contains(n) {
                total += f.eval(n);
            }
        }
        for i in 0..p {
            if set.contains(l + i) {
                for t in &f.classes[i as usize] {
                    if t.ratio < 1.0 {
                        // sum_k coeff * ratio^(l+i+k*p)
                        total += t.coeff * powi(t.ratio, l + i) / (1.0 - powi(t.ratio, p));
                    }
                }
            }
        }
        SeriesSum::Convergent(total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClassSign {
    NonNegative,
    NonPositive,
    Mixed,
}

/// A function on a ground space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GroundFunction {
    /// Value table over a finite space; index is the point.
    Finite(Vec<f64>),
    Nat(NatFunction),
}

impl GroundFunction {
    pub fn finite(values: Vec<f64>) -> Result<Self> {
        GroundSpace::finite(values.len() as u32)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("function values must be finite".into()));
        }
        Ok(GroundFunction::Finite(values))
    }

    pub fn nat(f: NatFunction) -> Self {
        GroundFunction::Nat(f)
    }

    pub fn constant(space: GroundSpace, c: f64) -> Self {
        match space {
            GroundSpace::Finite(n) => GroundFunction::Finite(vec![c; n as usize]),
            GroundSpace::CountableNat => GroundFunction::Nat(NatFunction::constant(c)),
        }
    }

    pub fn zero(space: GroundSpace) -> Self {
        Self::constant(space, 0.0)
    }

    /// Characteristic function of a set.
    pub fn indicator(set: &MeasurableSet) -> Self {
        match set {
            MeasurableSet::Finite { n, mask } => GroundFunction::Finite(
                (0..*n as u64).map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 }).collect(),
            ),
            MeasurableSet::Nat(e) => {
                let prefix = (0..e.prefix_len() as u64)
                    .map(|n| if e.contains(n) { 1.0 } else { 0.0 })
                    .collect();
                let classes = (0..e.period_len())
                    .map(|i| {
                        if e.period_bits()[i] {
                            vec![GeomTerm { coeff: 1.0, ratio: 1.0 }]
                        } else {
                            vec![]
                        }
                    })
                    .collect();
                GroundFunction::Nat(NatFunction::new(prefix, classes).expect("indicator is valid"))
            }
        }
    }

    pub fn space(&self) -> GroundSpace {
        match self {
            GroundFunction::Finite(v) => GroundSpace::Finite(v.len() as u32),
            GroundFunction::Nat(_) => GroundSpace::CountableNat,
        }
    }

    pub fn eval(&self, point: u64) -> f64 {
        match self {
            GroundFunction::Finite(v) => v[point as usize],
            GroundFunction::Nat(f) => f.eval(point),
        }
    }

    pub fn values(&self) -> Option<&[f64]> {
        match self {
            GroundFunction::Finite(v) => Some(v),
            GroundFunction::Nat(_) => None,
        }
    }

    fn zip(&self, other: &GroundFunction) -> Result<()> {
        if self.space() != other.space() {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &GroundFunction) -> Result<GroundFunction> {
        self.zip(other)?;
        Ok(match (self, other) {
            (GroundFunction::Finite(a), GroundFunction::Finite(b)) => {
                GroundFunction::Finite(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroundFunction::Nat(a), GroundFunction::Nat(b)) => GroundFunction::Nat(a.add(b)),
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &GroundFunction) -> Result<GroundFunction> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, alpha: f64) -> GroundFunction {
        match self {
            GroundFunction::Finite(v) => GroundFunction::Finite(v.iter().map(|x| alpha * x).collect()),
            GroundFunction::Nat(f) => GroundFunction::Nat(f.scale(alpha)),
        }
    }

    pub fn mul(&self, other: &GroundFunction) -> Result<GroundFunction> {
        self.zip(other)?;
        Ok(match (self, other) {
            (GroundFunction::Finite(a), GroundFunction::Finite(b)) => {
                GroundFunction::Finite(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            (GroundFunction::Nat(a), GroundFunction::Nat(b)) => GroundFunction::Nat(a.mul(b)),
            _ => unreachable!(),
        })
    }

    /// Restriction `f * chi_E`, implemented literally as the product with
    /// the indicator so both routes of the restriction identity evaluate
    /// through identical arithmetic.
    pub fn restrict(&self, set: &MeasurableSet) -> Result<GroundFunction> {
        if self.space() != set.space() {
            return Err(Error::SpaceMismatch);
        }
        self.mul(&GroundFunction::indicator(set))
    }

    /// Pointwise `|f|^p`, `p > 0`.
    pub fn abs_pow(&self, p: f64) -> Result<GroundFunction> {
        match self {
            GroundFunction::Finite(v) => {
                if p <= 0.0 && v.iter().any(|x| *x == 0.0) {
                    return Err(Error::Invalid("zero raised to a nonpositive power".into()));
                }
                Ok(GroundFunction::Finite(v.iter().map(|x| x.abs().powf(p)).collect()))
            }
            GroundFunction::Nat(f) => Ok(GroundFunction::Nat(f.abs_pow(p)?)),
        }
    }

    /// Pointwise power for possibly negative exponents; finite spaces only,
    /// requires strictly positive values when `p < 0`.
    pub fn abs_pow_signed(&self, p: f64) -> Result<GroundFunction> {
        if p > 0.0 {
            return self.abs_pow(p);
        }
        match self {
            GroundFunction::Finite(v) => {
                if v.iter().any(|x| *x == 0.0) {
                    return Err(Error::Invalid(
                        "nonpositive power requires strictly positive values".into(),
                    ));
                }
                Ok(GroundFunction::Finite(v.iter().map(|x| x.abs().powf(p)).collect()))
            }
            GroundFunction::Nat(_) => Err(Error::Unsupported(
                "nonpositive powers are not representable on the countable space".into(),
            )),
        }
    }

    /// Exact extrema on a nonempty set.
    pub fn extrema_on(&self, set: &MeasurableSet) -> Result<Bounds> {
        if self.space() != set.space() {
            return Err(Error::SpaceMismatch);
        }
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        match (self, set) {
            (GroundFunction::Finite(v), MeasurableSet::Finite { mask, .. }) => {
                let mut acc: Option<SeqBounds> = None;
                for (i, x) in v.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        match &mut acc {
                            None => acc = Some(SeqBounds::point(*x)),
                            Some(a) => a.add_attained(*x),
                        }
                    }
                }
                Ok(acc.unwrap().into_bounds())
            }
            (GroundFunction::Nat(f), MeasurableSet::Nat(e)) => f.extrema_on(e),
            _ => unreachable!(),
        }
    }

    /// Supremum of |f| over the whole space.
    pub fn sup_abs(&self) -> f64 {
        let b = self
            .extrema_on(&MeasurableSet::full(self.space()))
            .expect("full space is nonempty");
        b.inf.value.abs().max(b.sup.value.abs())
    }

    pub fn is_nonneg(&self) -> bool {
        self.extrema_on(&MeasurableSet::full(self.space()))
            .map(|b| b.inf.value >= 0.0)
            .unwrap_or(false)
    }

    /// Pointwise `self <= other` everywhere.
    pub fn le_pointwise(&self, other: &GroundFunction) -> Result<bool> {
        Ok(other.sub(self)?.is_nonneg())
    }

    /// Sum of `f` over the set, in ascending point order on finite spaces
    /// and in closed form on the naturals.
    pub fn sum_over(&self, set: &MeasurableSet) -> Result<SeriesSum> {
        if self.space() != set.space() {
            return Err(Error::SpaceMismatch);
        }
        match (self, set) {
            (GroundFunction::Finite(v), MeasurableSet::Finite { mask, .. }) => {
                let mut total = 0.0;
                for (i, x) in v.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        total += x;
                    }
                }
                Ok(SeriesSum::Convergent(total))
            }
            (GroundFunction::Nat(f), MeasurableSet::Nat(e)) => Ok(f.sum_over(e)),
            _ => unreachable!(),
        }
    }
}
