//! Non-additive set functions: exactly evaluable representations,
//! property classification with witnesses, variation and semivariation,
//! atoms, and the variation distance behind setwise convergence.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::{GroundFunction, SeriesSum};
use crate::ground::{EpSet, GroundSpace, MeasurableSet, SetCardinality};

/// Absolute tolerance for equality-style checks on stored 64-bit values
/// (additivity, agreement of two evaluation routes). Order comparisons are
/// exact.
pub const EQ_TOL: f64 = 1e-12;

/// Exhaustive property scans are limited to this many points.
pub const MAX_CLASSIFY_SPACE: u32 = 12;

/// A monotone distortion with g(0) = 0, applied on top of additive weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DistortionMap {
    /// g(t) = t^gamma, gamma > 0.
    Power { gamma: f64 },
    /// g(t) = min(scale * t, cap).
    Clamp { scale: f64, cap: f64 },
    /// Piecewise table over attainable base values; exact-match lookup.
    Table { pairs: Vec<(f64, f64)> },
}

impl DistortionMap {
    fn validate(&self) -> Result<()> {
        match self {
            DistortionMap::Power { gamma } => {
                if !gamma.is_finite() || *gamma <= 0.0 {
                    return Err(Error::Invalid(format!("distortion power must be > 0, got {gamma}")));
                }
            }
            DistortionMap::Clamp { scale, cap } => {
                if !scale.is_finite() || *scale < 0.0 || !cap.is_finite() || *cap < 0.0 {
                    return Err(Error::Invalid("clamp distortion requires scale, cap >= 0".into()));
                }
            }
            DistortionMap::Table { pairs } => {
                if pairs.first() != Some(&(0.0, 0.0)) {
                    return Err(Error::Invalid("distortion table must start at (0, 0)".into()));
                }
                for w in pairs.windows(2) {
                    if w[1].0 <= w[0].0 || w[1].1 < w[0].1 {
                        return Err(Error::Invalid(
                            "distortion table must be strictly increasing in t and monotone in g(t)".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn apply(&self, t: f64) -> Result<f64> {
        match self {
            DistortionMap::Power { gamma } => Ok(t.powf(*gamma)),
            DistortionMap::Clamp { scale, cap } => Ok((scale * t).min(*cap)),
            DistortionMap::Table { pairs } => pairs
                .iter()
                .find(|(x, _)| (x - t).abs() <= EQ_TOL)
                .map(|(_, y)| *y)
                .ok_or_else(|| {
                    Error::Unsupported(format!("distortion table has no entry for base value {t}"))
                }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
enum Repr {
    /// Values indexed by subset bitmask; finite spaces.
    Table(Vec<f64>),
    /// Additive measure given by per-point weights.
    AdditiveWeights(GroundFunction),
    Distortion { g: DistortionMap, base: GroundFunction },
    /// Value depends only on finiteness of the argument; empty set maps to 0.
    CardinalityRule { finite: f64, infinite: f64 },
    Scaled { alpha: f64, inner: Box<SetFunction> },
    Sum(Vec<SetFunction>),
}

/// A set function `nu` on a ground space's algebra, `nu(empty) = 0`,
/// values nonnegative and finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetFunction {
    space: GroundSpace,
    repr: Repr,
}

fn validate_weights(weights: &GroundFunction) -> Result<()> {
    if !weights.is_nonneg() {
        return Err(Error::Invalid("weights must be nonnegative".into()));
    }
    if weights.space() == GroundSpace::CountableNat {
        match weights.sum_over(&MeasurableSet::full(GroundSpace::CountableNat))? {
            SeriesSum::Convergent(_) => {}
            SeriesSum::Divergent { .. } => {
                return Err(Error::Invalid("weights on the naturals must be summable".into()))
            }
        }
    }
    Ok(())
}

impl SetFunction {
    /// Table over all subsets of a finite space; index is the bitmask.
    pub fn table(space: GroundSpace, values: Vec<f64>) -> Result<Self> {
        let n = space.len().ok_or_else(|| {
            Error::Unsupported("table representation requires a finite space".into())
        })?;
        if values.len() != 1usize << n {
            return Err(Error::Invalid(format!(
                "table must have 2^{n} = {} entries, got {}",
                1usize << n,
                values.len()
            )));
        }
        if values[0] != 0.0 {
            return Err(Error::Invalid("nu(empty) must be exactly 0".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Invalid("table values must be finite and nonnegative".into()));
        }
        Ok(SetFunction { space, repr: Repr::Table(values) })
    }

    /// Finitely additive measure from per-point weights.
    pub fn additive(weights: GroundFunction) -> Result<Self> {
        validate_weights(&weights)?;
        Ok(SetFunction { space: weights.space(), repr: Repr::AdditiveWeights(weights) })
    }

    /// Distorted additive measure `g(base(A))`.
    pub fn distortion(g: DistortionMap, base: GroundFunction) -> Result<Self> {
        g.validate()?;
        validate_weights(&base)?;
        Ok(SetFunction { space: base.space(), repr: Repr::Distortion { g, base } })
    }

    pub fn cardinality_rule(space: GroundSpace, finite: f64, infinite: f64) -> Result<Self> {
        if !finite.is_finite() || finite < 0.0 || !infinite.is_finite() || infinite < 0.0 {
            return Err(Error::Invalid("cardinality rule values must be finite and >= 0".into()));
        }
        Ok(SetFunction { space, repr: Repr::CardinalityRule { finite, infinite } })
    }

    pub fn scaled(alpha: f64, inner: SetFunction) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Invalid(format!("scale factor must be >= 0, got {alpha}")));
        }
        Ok(SetFunction { space: inner.space, repr: Repr::Scaled { alpha, inner: Box::new(inner) } })
    }

    pub fn sum(parts: Vec<SetFunction>) -> Result<Self> {
        let space = parts
            .first()
            .map(|p| p.space)
            .ok_or_else(|| Error::Invalid("sum of set functions needs at least one part".into()))?;
        if parts.iter().any(|p| p.space != space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(SetFunction { space, repr: Repr::Sum(parts) })
    }

    pub fn zero(space: GroundSpace) -> Self {
        SetFunction::additive(GroundFunction::zero(space)).expect("zero weights are valid")
    }

    pub fn space(&self) -> GroundSpace {
        self.space
    }

    fn check_set(&self, set: &MeasurableSet) -> Result<()> {
        if set.space() != self.space {
            return Err(Error::NotInAlgebra(format!(
                "set {set} does not belong to the space of this set function"
            )));
        }
        Ok(())
    }

    /// Exact evaluation.
    pub fn evaluate(&self, set: &MeasurableSet) -> Result<f64> {
        self.check_set(set)?;
        if set.is_empty() {
            return Ok(0.0);
        }
        match &self.repr {
            Repr::Table(values) => Ok(values[set.mask().unwrap() as usize]),
            Repr::AdditiveWeights(w) => match w.sum_over(set)? {
                SeriesSum::Convergent(v) => Ok(v),
                SeriesSum::Divergent { .. } => unreachable!("weights validated summable"),
            },
            Repr::Distortion { g, base } => {
                let t = match base.sum_over(set)? {
                    SeriesSum::Convergent(v) => v,
                    SeriesSum::Divergent { .. } => unreachable!("weights validated summable"),
                };
                g.apply(t)
            }
            Repr::CardinalityRule { finite, infinite } => Ok(match set.cardinality() {
                SetCardinality::Finite(_) => *finite,
                SetCardinality::Infinite => *infinite,
            }),
            Repr::Scaled { alpha, inner } => Ok(alpha * inner.evaluate(set)?),
            Repr::Sum(parts) => {
                let mut total = 0.0;
                for p in parts {
                    total += p.evaluate(set)?;
                }
                Ok(total)
            }
        }
    }

    pub fn evaluate_mask(&self, mask: u64) -> Result<f64> {
        let n = self
            .space
            .len()
            .ok_or_else(|| Error::Unsupported("mask evaluation requires a finite space".into()))?;
        self.evaluate(&MeasurableSet::finite_from_mask(n, mask)?)
    }

    /// The per-point weights `s |-> nu({s})`, as a ground function. This is
    /// the measure the singleton partition sees.
    pub fn singleton_weights(&self) -> Result<GroundFunction> {
        match (&self.repr, self.space) {
            (Repr::Table(values), GroundSpace::Finite(n)) => {
                GroundFunction::finite((0..n as u64).map(|s| values[1usize << s]).collect())
            }
            (Repr::Table(_), GroundSpace::CountableNat) => unreachable!("tables are finite-space"),
            (Repr::AdditiveWeights(w), _) => Ok(w.clone()),
            (Repr::Distortion { g, base }, space) => match space {
                GroundSpace::Finite(n) => {
                    let mut v = Vec::with_capacity(n as usize);
                    for s in 0..n as u64 {
                        v.push(g.apply(base.eval(s))?);
                    }
                    GroundFunction::finite(v)
                }
                GroundSpace::CountableNat => distorted_weights(g, base),
            },
            (Repr::CardinalityRule { finite, .. }, space) => {
                Ok(GroundFunction::constant(space, *finite))
            }
            (Repr::Scaled { alpha, inner }, _) => Ok(inner.singleton_weights()?.scale(*alpha)),
            (Repr::Sum(parts), _) => {
                let mut acc = GroundFunction::zero(self.space);
                for p in parts {
                    acc = acc.add(&p.singleton_weights()?)?;
                }
                Ok(acc)
            }
        }
    }

    /// sup over finite disjoint families inside `set` of the summed values.
    /// Returns `f64::INFINITY` when the supremum is infinite.
    pub fn variation(&self, set: &MeasurableSet) -> Result<f64> {
        self.check_set(set)?;
        match self.space {
            GroundSpace::Finite(_) => {
                let e = set.mask().unwrap();
                Ok(variation_dp(&|m| self.evaluate_mask(m).unwrap(), e))
            }
            GroundSpace::CountableNat => self.variation_nat(set),
        }
    }

    fn variation_nat(&self, set: &MeasurableSet) -> Result<f64> {
        match &self.repr {
            Repr::CardinalityRule { finite, infinite } => match set.cardinality() {
                // best family: all singletons
                SetCardinality::Finite(k) => Ok(finite * k as f64),
                SetCardinality::Infinite => {
                    if *finite > 0.0 || *infinite > 0.0 {
                        // arbitrarily many finite pieces (each worth `finite`)
                        // or infinite pieces (each worth `infinite`) fit inside
                        Ok(f64::INFINITY)
                    } else {
                        Ok(0.0)
                    }
                }
            },
            Repr::AdditiveWeights(_) => self.evaluate(set),
            Repr::Scaled { alpha, inner } => Ok(alpha * inner.variation(set)?),
            _ => Err(Error::Unsupported(
                "variation on the naturals is only decidable for cardinality rules, additive weights and scalings".into(),
            )),
        }
    }

    /// inf of the variation over algebra members containing `set`. Every
    /// represented set is itself an algebra member and the variation is
    /// monotone, so the infimum is attained at `set`.
    pub fn semivariation(&self, set: &MeasurableSet) -> Result<f64> {
        self.variation(set)
    }

    /// All atoms: sets of positive value such that every measurable subset
    /// has value zero or leaves a value-zero remainder.
    pub fn find_atoms(&self) -> Result<Vec<MeasurableSet>> {
        let n = self.space.len().ok_or_else(|| {
            Error::Unsupported("atom search is exhaustive and requires a finite space".into())
        })?;
        if n > MAX_CLASSIFY_SPACE {
            return Err(Error::Unsupported(format!(
                "atom search supports at most {MAX_CLASSIFY_SPACE} points, space has {n}"
            )));
        }
        let full = (1u64 << n) - 1;
        let vals: Vec<f64> = (0..=full).map(|m| self.evaluate_mask(m).unwrap()).collect();
        let mut atoms = Vec::new();
        for a in 1..=full {
            if vals[a as usize] <= 0.0 {
                continue;
            }
            if is_atom_mask(&vals, a) {
                atoms.push(MeasurableSet::finite_from_mask(n, a)?);
            }
        }
        Ok(atoms)
    }

    /// Variation of the pointwise difference `|nu1 - nu2|` over families
    /// inside `set`; the distance driving setwise convergence.
    pub fn variation_distance(&self, other: &SetFunction, set: &MeasurableSet) -> Result<f64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        self.check_set(set)?;
        if !self.space.is_finite() {
            return Err(Error::Unsupported(
                "variation distance is only computed on finite spaces".into(),
            ));
        }
        let e = set.mask().unwrap();
        Ok(variation_dp(
            &|m| (self.evaluate_mask(m).unwrap() - other.evaluate_mask(m).unwrap()).abs(),
            e,
        ))
    }

    /// Pointwise `self(A) <= other(A)` over the whole algebra: exhaustive
    /// on finite spaces, structural on the naturals (matching
    /// representation pairs whose comparison is decidable).
    pub fn le_setwise(&self, other: &SetFunction) -> Result<bool> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        match self.space {
            GroundSpace::Finite(n) => {
                let full = (1u64 << n) - 1;
                for m in 0..=full {
                    if self.evaluate_mask(m)? > other.evaluate_mask(m)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            GroundSpace::CountableNat => match (&self.repr, &other.repr) {
                (
                    Repr::CardinalityRule { finite: f1, infinite: i1 },
                    Repr::CardinalityRule { finite: f2, infinite: i2 },
                ) => Ok(f1 <= f2 && i1 <= i2),
                (Repr::AdditiveWeights(w1), Repr::AdditiveWeights(w2)) => {
                    Ok(w2.sub(w1)?.is_nonneg())
                }
                (
                    Repr::Distortion { g: g1, base: b1 },
                    Repr::Distortion { g: g2, base: b2 },
                ) if g1 == g2 => Ok(b2.sub(b1)?.is_nonneg()),
                (Repr::Scaled { alpha: a1, inner: i1 }, Repr::Scaled { alpha: a2, inner: i2 })
                    if i1 == i2 =>
                {
                    Ok(a1 <= a2)
                }
                (Repr::Scaled { alpha, inner }, _) if inner.repr == other.repr => {
                    Ok(*alpha <= 1.0)
                }
                (_, Repr::Scaled { alpha, inner }) if inner.repr == self.repr => Ok(*alpha >= 1.0),
                _ => Err(Error::Unsupported(
                    "setwise comparison is not decidable for this representation pair".into(),
                )),
            },
        }
    }

    /// Classify against the standard property list. Exhaustive on finite
    /// spaces up to `MAX_CLASSIFY_SPACE`; case analysis for the decidable
    /// representations on the naturals, `NotDecidable` otherwise.
    pub fn classify(&self) -> PropertyReport {
        match self.space {
            GroundSpace::Finite(n) if n <= MAX_CLASSIFY_SPACE => self.classify_finite(n),
            GroundSpace::Finite(_) => PropertyReport::all_not_decidable(),
            GroundSpace::CountableNat => self.classify_nat(),
        }
    }

    fn classify_finite(&self, n: u32) -> PropertyReport {
        let full = (1u64 << n) - 1;
        let vals: Vec<f64> = (0..=full).map(|m| self.evaluate_mask(m).unwrap()).collect();
        let set = |m: u64| MeasurableSet::finite_from_mask(n, m).unwrap();

        let monotone = scan_monotone(&vals, full, &set);
        let subadditive = scan_subadditive(&vals, full, &set);
        let finitely_additive = scan_additive(&vals, full, &set);
        let null_additive = scan_null_additive(&vals, full, &set);
        let property_sigma = scan_property_sigma(&vals, full, &set);

        PropertyReport {
            sigma_subadditive: subadditive
                .clone()
                .with_rationale("coincides with finite subadditivity on a finite space"),
            sigma_additive: finitely_additive
                .clone()
                .with_rationale("coincides with finite additivity on a finite space"),
            monotone,
            subadditive,
            finitely_additive,
            null_additive,
            property_sigma,
            o_continuous: Flag::holds_because(
                "finite space: decreasing sequences stabilize at their intersection",
            ),
            exhaustive: Flag::holds_because(
                "finite space: disjoint sequences are eventually empty",
            ),
            regular: Flag::holds_because("discrete finite space: every set is compact and open"),
        }
    }

    fn classify_nat(&self) -> PropertyReport {
        match &self.repr {
            Repr::CardinalityRule { finite, infinite } => {
                cardinality_rule_report(*finite, *infinite)
            }
            Repr::AdditiveWeights(_) => {
                PropertyReport::all_holds("finitely additive with nonnegative summable weights")
            }
            Repr::Scaled { alpha, inner } => {
                if *alpha == 0.0 {
                    PropertyReport::all_holds("zero set function")
                } else {
                    // positive scaling preserves every property and every
                    // violation verbatim
                    inner.classify()
                }
            }
            Repr::Sum(parts) => {
                let reports: Vec<PropertyReport> = parts.iter().map(|p| p.classify()).collect();
                PropertyReport::combine_sum(&reports)
            }
            _ => PropertyReport::all_not_decidable(),
        }
    }
}

fn distorted_weights(g: &DistortionMap, base: &GroundFunction) -> Result<GroundFunction> {
    match g {
        DistortionMap::Power { gamma } => base.abs_pow(*gamma),
        DistortionMap::Clamp { scale, cap } => clamp_weights(base, *scale, *cap),
        DistortionMap::Table { .. } => Err(Error::Unsupported(
            "table distortions have no closed singleton form on the naturals".into(),
        )),
    }
}

/// min(scale * w(n), cap) as a tail-model function: beyond a computable
/// index the scaled weights stay below the cap, so only a prefix needs
/// explicit clamping.
fn clamp_weights(base: &GroundFunction, scale: f64, cap: f64) -> Result<GroundFunction> {
    let scaled = base.scale(scale);
    if cap == 0.0 {
        return Ok(GroundFunction::zero(GroundSpace::CountableNat));
    }
    if scaled.sup_abs() <= cap {
        return Ok(scaled);
    }
    let mut horizon = 1u64;
    loop {
        let tail = MeasurableSet::nat(EpSet::tail(horizon));
        let b = scaled.extrema_on(&tail)?;
        if b.sup.value <= cap {
            break;
        }
        horizon += 1;
        if horizon > 100_000 {
            return Err(Error::Unsupported(
                "clamp distortion does not settle below the cap".into(),
            ));
        }
    }
    let tail_ind = GroundFunction::indicator(&MeasurableSet::nat(EpSet::tail(horizon)));
    let tail_part = scaled.mul(&tail_ind)?;
    let prefix_vals: Vec<f64> = (0..horizon).map(|k| scaled.eval(k).min(cap)).collect();
    let prefix_part =
        GroundFunction::nat(crate::func::NatFunction::with_tail(prefix_vals, vec![])?);
    prefix_part.add(&tail_part)
}

fn is_atom_mask(vals: &[f64], a: u64) -> bool {
    // proper nonempty subsets; the empty and full subset are trivially fine
    let mut b = (a - 1) & a;
    while b != 0 {
        if vals[b as usize] != 0.0 && vals[(a & !b) as usize] != 0.0 {
            return false;
        }
        b = (b - 1) & a;
    }
    true
}

/// Variation DP over submasks: a family inside `e` either skips the lowest
/// element of the remaining mask or includes it in exactly one block. Each
/// family is visited once, with a canonical right-nested summation order.
fn variation_dp(vals: &dyn Fn(u64) -> f64, e: u64) -> f64 {
    if e == 0 {
        return 0.0;
    }
    let mut var = vec![0.0f64; (e + 1) as usize];
    for m in 1..=e {
        if m & !e != 0 {
            continue;
        }
        let low = m & m.wrapping_neg();
        let rest = m & !low;
        let mut best = var[rest as usize]; // lowest element left out
        let mut sub = rest;
        loop {
            let a = low | sub;
            let v = vals(a) + var[(m & !a) as usize];
            if v > best {
                best = v;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        var[m as usize] = best;
    }
    var[e as usize]
}

// ---------------------------------------------------------------------------
// property report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Monotone,
    Subadditive,
    SigmaSubadditive,
    FinitelyAdditive,
    SigmaAdditive,
    NullAdditive,
    PropertySigma,
    OContinuous,
    Exhaustive,
    Regular,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::Monotone,
        Property::Subadditive,
        Property::SigmaSubadditive,
        Property::FinitelyAdditive,
        Property::SigmaAdditive,
        Property::NullAdditive,
        Property::PropertySigma,
        Property::OContinuous,
        Property::Exhaustive,
        Property::Regular,
    ];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Property::Monotone => "monotone",
            Property::Subadditive => "subadditive",
            Property::SigmaSubadditive => "sigma_subadditive",
            Property::FinitelyAdditive => "finitely_additive",
            Property::SigmaAdditive => "sigma_additive",
            Property::NullAdditive => "null_additive",
            Property::PropertySigma => "property_sigma",
            Property::OContinuous => "o_continuous",
            Property::Exhaustive => "exhaustive",
            Property::Regular => "regular",
        };
        f.write_str(s)
    }
}

/// Concrete violation evidence, re-checkable by evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Witness {
    /// A pair of sets violating the defining inequality.
    Pair { a: MeasurableSet, b: MeasurableSet },
    /// A finite family of sets (a null family with non-null union, the head
    /// of a decreasing or disjoint sequence, or a regularity obstruction).
    Sets(Vec<MeasurableSet>),
    /// The countable partition of this infinite set into singletons.
    SingletonSplit(MeasurableSet),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Flag {
    Holds { rationale: Option<String> },
    Fails { witness: Witness },
    NotDecidable,
}

impl Flag {
    pub fn holds() -> Flag {
        Flag::Holds { rationale: None }
    }

    pub fn holds_because(s: &str) -> Flag {
        Flag::Holds { rationale: Some(s.to_string()) }
    }

    pub fn fails(witness: Witness) -> Flag {
        Flag::Fails { witness }
    }

    pub fn is_holds(&self) -> bool {
        matches!(self, Flag::Holds { .. })
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Flag::Fails { .. })
    }

    fn with_rationale(self, s: &str) -> Flag {
        match self {
            Flag::Holds { .. } => Flag::holds_because(s),
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub monotone: Flag,
    pub subadditive: Flag,
    pub sigma_subadditive: Flag,
    pub finitely_additive: Flag,
    pub sigma_additive: Flag,
    pub null_additive: Flag,
    pub property_sigma: Flag,
    pub o_continuous: Flag,
    pub exhaustive: Flag,
    pub regular: Flag,
}

impl PropertyReport {
    pub fn get(&self, p: Property) -> &Flag {
        match p {
            Property::Monotone => &self.monotone,
            Property::Subadditive => &self.subadditive,
            Property::SigmaSubadditive => &self.sigma_subadditive,
            Property::FinitelyAdditive => &self.finitely_additive,
            Property::SigmaAdditive => &self.sigma_additive,
            Property::NullAdditive => &self.null_additive,
            Property::PropertySigma => &self.property_sigma,
            Property::OContinuous => &self.o_continuous,
            Property::Exhaustive => &self.exhaustive,
            Property::Regular => &self.regular,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Property, &Flag)> {
        Property::ALL.iter().map(move |p| (*p, self.get(*p)))
    }

    /// Monotone and subadditive.
    pub fn is_submeasure(&self) -> bool {
        self.monotone.is_holds() && self.subadditive.is_holds()
    }

    fn all_holds(rationale: &str) -> PropertyReport {
        let f = || Flag::holds_because(rationale);
        PropertyReport {
            monotone: f(),
            subadditive: f(),
            sigma_subadditive: f(),
            finitely_additive: f(),
            sigma_additive: f(),
            null_additive: f(),
            property_sigma: f(),
            o_continuous: f(),
            exhaustive: f(),
            regular: f(),
        }
    }

    fn all_not_decidable() -> PropertyReport {
        let f = || Flag::NotDecidable;
        PropertyReport {
            monotone: f(),
            subadditive: f(),
            sigma_subadditive: f(),
            finitely_additive: f(),
            sigma_additive: f(),
            null_additive: f(),
            property_sigma: f(),
            o_continuous: f(),
            exhaustive: f(),
            regular: f(),
        }
    }

    /// Sum of set functions: each property listed here is preserved by
    /// sums, so unanimous Holds propagates; anything else is undecided.
    fn combine_sum(reports: &[PropertyReport]) -> PropertyReport {
        let combine = |p: Property| {
            if reports.iter().all(|r| r.get(p).is_holds()) {
                Flag::holds_because("every summand satisfies the property")
            } else {
                Flag::NotDecidable
            }
        };
        PropertyReport {
            monotone: combine(Property::Monotone),
            subadditive: combine(Property::Subadditive),
            sigma_subadditive: combine(Property::SigmaSubadditive),
            finitely_additive: combine(Property::FinitelyAdditive),
            sigma_additive: combine(Property::SigmaAdditive),
            null_additive: combine(Property::NullAdditive),
            property_sigma: combine(Property::PropertySigma),
            o_continuous: combine(Property::OContinuous),
            exhaustive: combine(Property::Exhaustive),
            regular: combine(Property::Regular),
        }
    }
}

fn scan_monotone(vals: &[f64], full: u64, set: &dyn Fn(u64) -> MeasurableSet) -> Flag {
    for b in 1..=full {
        let mut a = (b - 1) & b;
        loop {
            if vals[a as usize] > vals[b as usize] {
                return Flag::fails(Witness::Pair { a: set(a), b: set(b) });
            }
            if a == 0 {
                break;
            }
            a = (a - 1) & b;
        }
    }
    Flag::holds()
}

fn scan_subadditive(vals: &[f64], full: u64, set: &dyn Fn(u64) -> MeasurableSet) -> Flag {
    for a in 1..=full {
        let comp = full & !a;
        let mut b = comp;
        while b != 0 {
            if vals[(a | b) as usize] > vals[a as usize] + vals[b as usize] {
                return Flag::fails(Witness::Pair { a: set(a), b: set(b) });
            }
            b = (b - 1) & comp;
        }
    }
    Flag::holds()
}

fn scan_additive(vals: &[f64], full: u64, set: &dyn Fn(u64) -> MeasurableSet) -> Flag {
    for a in 1..=full {
        let comp = full & !a;
        let mut b = comp;
        while b != 0 {
            if (vals[(a | b) as usize] - vals[a as usize] - vals[b as usize]).abs() > EQ_TOL {
                return Flag::fails(Witness::Pair { a: set(a), b: set(b) });
            }
            b = (b - 1) & comp;
        }
    }
    Flag::holds()
}

fn scan_null_additive(vals: &[f64], full: u64, set: &dyn Fn(u64) -> MeasurableSet) -> Flag {
    for b in 0..=full {
        if vals[b as usize] != 0.0 {
            continue;
        }
        for a in 0..=full {
            if (vals[(a | b) as usize] - vals[a as usize]).abs() > EQ_TOL {
                return Flag::fails(Witness::Pair { a: set(a), b: set(b) });
            }
        }
    }
    Flag::holds()
}

fn scan_property_sigma(vals: &[f64], full: u64, set: &dyn Fn(u64) -> MeasurableSet) -> Flag {
    let nulls: Vec<u64> = (0..=full).filter(|&m| vals[m as usize] == 0.0).collect();
    let mut seen: HashSet<u64> = nulls.iter().copied().collect();
    let mut parents: HashMap<u64, (u64, u64)> = HashMap::new();
    let mut queue: Vec<u64> = nulls.clone();
    let mut qi = 0;
    while qi < queue.len() {
        let x = queue[qi];
        qi += 1;
        for &g in &nulls {
            let u = x | g;
            if seen.contains(&u) {
                continue;
            }
            parents.insert(u, (x, g));
            if vals[u as usize] != 0.0 {
                // reconstruct the null family whose union is u
                let mut family = vec![g];
                let mut cur = x;
                while let Some(&(px, pg)) = parents.get(&cur) {
                    family.push(pg);
                    cur = px;
                }
                family.push(cur);
                family.sort_unstable();
                family.dedup();
                return Flag::fails(Witness::Sets(family.into_iter().map(set).collect()));
            }
            seen.insert(u);
            queue.push(u);
        }
    }
    Flag::holds()
}

fn cardinality_rule_report(alpha: f64, beta: f64) -> PropertyReport {
    let nat = GroundSpace::CountableNat;
    let full = MeasurableSet::full(nat);
    let evens = MeasurableSet::nat(EpSet::progression(0, 2).unwrap());
    let singleton = |k: u64| MeasurableSet::nat(EpSet::singleton(k));
    let tails: Vec<MeasurableSet> = (0..4).map(|k| MeasurableSet::nat(EpSet::tail(k))).collect();

    let monotone = if alpha <= beta {
        Flag::holds()
    } else {
        Flag::fails(Witness::Pair { a: singleton(0), b: full.clone() })
    };
    let subadditive =
        Flag::holds_because("values are nonnegative and depend only on cardinality class");
    let sigma_subadditive = if alpha > 0.0 || beta == 0.0 {
        Flag::holds()
    } else {
        Flag::fails(Witness::SingletonSplit(full.clone()))
    };
    let additive = if alpha == 0.0 && beta == 0.0 {
        Flag::holds()
    } else if alpha > 0.0 {
        Flag::fails(Witness::Pair { a: singleton(0), b: singleton(1) })
    } else {
        Flag::fails(Witness::Pair {
            a: evens.clone(),
            b: MeasurableSet::nat(EpSet::progression(1, 2).unwrap()),
        })
    };
    let null_additive = if alpha > 0.0 && beta == 0.0 {
        Flag::fails(Witness::Pair { a: singleton(0), b: evens.clone() })
    } else {
        Flag::holds()
    };
    let property_sigma = if alpha == 0.0 && beta > 0.0 {
        Flag::fails(Witness::SingletonSplit(full.clone()))
    } else {
        Flag::holds()
    };
    let o_continuous =
        if beta == 0.0 { Flag::holds() } else { Flag::fails(Witness::Sets(tails)) };
    let exhaustive = if alpha == 0.0 && beta == 0.0 {
        Flag::holds()
    } else if alpha > 0.0 {
        Flag::fails(Witness::Sets((0..4).map(singleton).collect()))
    } else {
        // pairwise disjoint infinite residue classes all carry value beta
        Flag::fails(Witness::Sets(
            (0..4u32)
                .map(|k| MeasurableSet::nat(EpSet::progression(1 << k, 1 << (k + 1)).unwrap()))
                .collect(),
        ))
    };
    let regular =
        if beta == 0.0 { Flag::holds() } else { Flag::fails(Witness::Sets(vec![full])) };

    PropertyReport {
        monotone,
        subadditive,
        sigma_subadditive,
        finitely_additive: additive.clone(),
        sigma_additive: additive,
        null_additive,
        property_sigma,
        o_continuous,
        exhaustive,
        regular,
    }
}

/// Re-evaluates a failure witness against the set function; `true` means
/// the witness indeed violates the property's defining condition.
pub fn witness_violates(nu: &SetFunction, property: Property, witness: &Witness) -> Result<bool> {
    match (property, witness) {
        (Property::Monotone, Witness::Pair { a, b }) => {
            Ok(a.is_subset_of(b)? && nu.evaluate(a)? > nu.evaluate(b)?)
        }
        (Property::Subadditive | Property::SigmaSubadditive, Witness::Pair { a, b }) => {
            let union = a.union(b)?;
            Ok(a.is_disjoint_from(b)? && nu.evaluate(&union)? > nu.evaluate(a)? + nu.evaluate(b)?)
        }
        (Property::SigmaSubadditive | Property::PropertySigma, Witness::SingletonSplit(a)) => {
            // infinite set of positive value split into null singletons
            let head: Vec<u64> = a.as_ep().map(|e| e.members_below(64)).unwrap_or_default();
            let mut singles_null = true;
            for k in head.iter().take(8) {
                singles_null &= nu.evaluate(&MeasurableSet::nat(EpSet::singleton(*k)))? == 0.0;
            }
            Ok(a.cardinality().is_infinite() && nu.evaluate(a)? > 0.0 && singles_null)
        }
        (Property::FinitelyAdditive | Property::SigmaAdditive, Witness::Pair { a, b }) => {
            let union = a.union(b)?;
            Ok(a.is_disjoint_from(b)?
                && (nu.evaluate(&union)? - nu.evaluate(a)? - nu.evaluate(b)?).abs() > EQ_TOL)
        }
        (Property::NullAdditive, Witness::Pair { a, b }) => {
            let union = a.union(b)?;
            Ok(nu.evaluate(b)? == 0.0 && (nu.evaluate(&union)? - nu.evaluate(a)?).abs() > EQ_TOL)
        }
        (Property::PropertySigma, Witness::Sets(family)) => {
            let mut union = MeasurableSet::empty(nu.space());
            for s in family {
                if nu.evaluate(s)? != 0.0 {
                    return Ok(false);
                }
                union = union.union(s)?;
            }
            Ok(nu.evaluate(&union)? > 0.0)
        }
        (Property::OContinuous, Witness::Sets(seq)) => {
            // decreasing head with values bounded away from zero
            let mut decreasing = true;
            for w in seq.windows(2) {
                decreasing &= w[1].is_subset_of(&w[0])?;
            }
            let mut all_positive = true;
            for s in seq {
                all_positive &= nu.evaluate(s)? > 0.0;
            }
            Ok(decreasing && all_positive)
        }
        (Property::Exhaustive, Witness::Sets(seq)) => {
            let mut disjoint = true;
            for i in 0..seq.len() {
                for j in i + 1..seq.len() {
                    disjoint &= seq[i].is_disjoint_from(&seq[j])?;
                }
            }
            let mut all_positive = true;
            for s in seq {
                all_positive &= nu.evaluate(s)? > 0.0;
            }
            Ok(disjoint && all_positive)
        }
        (Property::Regular, Witness::Sets(seq)) => {
            // an infinite set whose value stays positive after removing any
            // small compact head
            let a = seq.first().ok_or(Error::EmptySet)?;
            if !a.cardinality().is_infinite() {
                return Ok(false);
            }
            let mut positive = nu.evaluate(a)? > 0.0;
            for k in 0..3u64 {
                let head = a.as_ep().unwrap().members_below(16 + k);
                let compact = MeasurableSet::nat(EpSet::from_members(&head));
                positive &= nu.evaluate(&a.difference(&compact)?)? > 0.0;
            }
            Ok(positive)
        }
        _ => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::NatFunction;

    fn evens() -> MeasurableSet {
        MeasurableSet::nat(EpSet::progression(0, 2).unwrap())
    }

    #[test]
    fn cardinality_rule_evaluation() {
        let nu = SetFunction::cardinality_rule(GroundSpace::CountableNat, 0.0, 1.0).unwrap();
        assert_eq!(nu.evaluate(&evens()).unwrap(), 1.0);
        assert_eq!(nu.evaluate(&MeasurableSet::empty(GroundSpace::CountableNat)).unwrap(), 0.0);
        assert_eq!(nu.evaluate(&MeasurableSet::nat(EpSet::from_members(&[3, 7]))).unwrap(), 0.0);
    }

    #[test]
    fn additive_weights_evaluation() {
        let w = GroundFunction::finite(vec![1.0, 2.0, 3.0]).unwrap();
        let nu = SetFunction::additive(w).unwrap();
        let a = MeasurableSet::finite_from_members(3, &[0, 2]).unwrap();
        assert_eq!(nu.evaluate(&a).unwrap(), 4.0);
        assert_eq!(nu.evaluate(&MeasurableSet::empty(GroundSpace::Finite(3))).unwrap(), 0.0);
    }

    #[test]
    fn table_requires_zero_at_empty() {
        let space = GroundSpace::finite(1).unwrap();
        assert!(SetFunction::table(space, vec![0.1, 1.0]).is_err());
        assert!(SetFunction::table(space, vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn classify_additive_finite() {
        let nu =
            SetFunction::additive(GroundFunction::finite(vec![0.5, 0.25, 1.0]).unwrap()).unwrap();
        let r = nu.classify();
        assert!(r.finitely_additive.is_holds());
        assert!(r.monotone.is_holds());
        assert!(r.sigma_additive.is_holds());
        assert!(r.o_continuous.is_holds());
        assert!(r.regular.is_holds());
        assert!(r.is_submeasure());
    }

    #[test]
    fn classify_cardinality_rule_counterexample() {
        let nu = SetFunction::cardinality_rule(GroundSpace::CountableNat, 0.0, 1.0).unwrap();
        let r = nu.classify();
        assert!(r.monotone.is_holds());
        assert!(r.subadditive.is_holds());
        assert!(r.sigma_subadditive.is_fails());
        assert!(r.property_sigma.is_fails());
        match &r.o_continuous {
            Flag::Fails { witness } => {
                assert!(witness_violates(&nu, Property::OContinuous, witness).unwrap());
                if let Witness::Sets(seq) = witness {
                    for s in seq {
                        assert_eq!(nu.evaluate(s).unwrap(), 1.0);
                    }
                }
            }
            other => panic!("expected o-continuity failure, got {other:?}"),
        }
    }

    #[test]
    fn classify_non_monotone_table() {
        let space = GroundSpace::finite(2).unwrap();
        let nu = SetFunction::table(space, vec![0.0, 1.0, 1.0, 0.5]).unwrap();
        let r = nu.classify();
        match &r.monotone {
            Flag::Fails { witness } => {
                assert!(witness_violates(&nu, Property::Monotone, witness).unwrap());
            }
            other => panic!("expected monotonicity failure, got {other:?}"),
        }
    }

    #[test]
    fn variation_of_additive_is_the_measure() {
        let w = GroundFunction::finite(vec![0.5, 0.25, 1.0, 0.125]).unwrap();
        let nu = SetFunction::additive(w).unwrap();
        for mask in 0..16u64 {
            let a = MeasurableSet::finite_from_mask(4, mask).unwrap();
            assert_eq!(nu.variation(&a).unwrap(), nu.evaluate(&a).unwrap());
        }
    }

    #[test]
    fn variation_of_zero_is_zero() {
        let nu = SetFunction::zero(GroundSpace::Finite(3));
        let full = MeasurableSet::full(GroundSpace::Finite(3));
        assert_eq!(nu.variation(&full).unwrap(), 0.0);
    }

    #[test]
    fn variation_of_two_point_table() {
        let space = GroundSpace::finite(2).unwrap();
        let nu = SetFunction::table(space, vec![0.0, 1.0, 1.0, 0.5]).unwrap();
        let full = MeasurableSet::full(space);
        assert_eq!(nu.variation(&full).unwrap(), 2.0);
        assert_eq!(nu.semivariation(&full).unwrap(), 2.0);
    }

    #[test]
    fn variation_on_nat_cardinality_rule() {
        let nu = SetFunction::cardinality_rule(GroundSpace::CountableNat, 0.0, 1.0).unwrap();
        assert_eq!(nu.variation(&evens()).unwrap(), f64::INFINITY);
        let fin = MeasurableSet::nat(EpSet::from_members(&[1, 2, 3]));
        assert_eq!(nu.variation(&fin).unwrap(), 0.0);
        let nu2 = SetFunction::cardinality_rule(GroundSpace::CountableNat, 0.5, 1.0).unwrap();
        assert_eq!(nu2.variation(&fin).unwrap(), 1.5);
    }

    #[test]
    fn variation_on_nat_additive_weights() {
        let w = GroundFunction::nat(NatFunction::geometric(1.0, 0.5).unwrap());
        let nu = SetFunction::additive(w).unwrap();
        let full = MeasurableSet::full(GroundSpace::CountableNat);
        assert!((nu.variation(&full).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn atoms_of_point_loaded_capacity() {
        // nu(A) = 1 iff 0 in A: atoms are exactly the sets containing 0
        let space = GroundSpace::finite(3).unwrap();
        let vals: Vec<f64> = (0..8u64).map(|m| if m & 1 != 0 { 1.0 } else { 0.0 }).collect();
        let nu = SetFunction::table(space, vals).unwrap();
        let atoms = nu.find_atoms().unwrap();
        assert_eq!(atoms.len(), 4);
        for a in &atoms {
            assert!(a.contains(0));
        }
    }

    #[test]
    fn atoms_of_strictly_positive_additive_are_singletons() {
        let nu =
            SetFunction::additive(GroundFunction::finite(vec![0.5, 0.25, 1.0]).unwrap()).unwrap();
        let atoms = nu.find_atoms().unwrap();
        assert_eq!(atoms.len(), 3);
        for a in &atoms {
            assert_eq!(a.cardinality(), SetCardinality::Finite(1));
        }
    }

    #[test]
    fn atoms_of_zero_function_empty() {
        let nu = SetFunction::zero(GroundSpace::Finite(3));
        assert!(nu.find_atoms().unwrap().is_empty());
    }

    #[test]
    fn variation_distance_basics() {
        let w1 = GroundFunction::finite(vec![0.5, 0.25, 1.0]).unwrap();
        let nu1 = SetFunction::additive(w1).unwrap();
        let full = MeasurableSet::full(GroundSpace::Finite(3));
        assert_eq!(nu1.variation_distance(&nu1, &full).unwrap(), 0.0);

        // additive pair: distance is the sum of the pointwise gaps
        let w2 = GroundFunction::finite(vec![0.75, 0.25, 0.5]).unwrap();
        let nu2 = SetFunction::additive(w2).unwrap();
        let d = nu1.variation_distance(&nu2, &full).unwrap();
        assert!((d - (0.25 + 0.5)).abs() < 1e-15);

        // scaling identity: distance to (1 - eps) nu is eps * total mass
        let eps = 0.125;
        let nu3 = SetFunction::scaled(1.0 - eps, nu1.clone()).unwrap();
        let d = nu1.variation_distance(&nu3, &full).unwrap();
        assert!((d - eps * 1.75).abs() < 1e-15);
    }

    #[test]
    fn distortion_evaluation() {
        let base = GroundFunction::finite(vec![1.0, 4.0]).unwrap();
        let nu = SetFunction::distortion(DistortionMap::Power { gamma: 0.5 }, base).unwrap();
        let s = MeasurableSet::finite_from_members(2, &[0, 1]).unwrap();
        assert!((nu.evaluate(&s).unwrap() - 5.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn clamped_distortion_singleton_weights_on_nat() {
        let base = GroundFunction::nat(NatFunction::geometric(4.0, 0.5).unwrap());
        let nu = SetFunction::distortion(
            DistortionMap::Clamp { scale: 1.0, cap: 1.0 },
            base.clone(),
        )
        .unwrap();
        let w = nu.singleton_weights().unwrap();
        for n in 0..10u64 {
            assert_eq!(w.eval(n), (4.0 * 0.5f64.powi(n as i32)).min(1.0), "at {n}");
        }
    }

    #[test]
    fn singleton_weights_roundtrip() {
        let space = GroundSpace::finite(2).unwrap();
        let nu = SetFunction::table(space, vec![0.0, 0.25, 0.75, 0.5]).unwrap();
        let w = nu.singleton_weights().unwrap();
        assert_eq!(w.values().unwrap(), &[0.25, 0.75]);
    }
}
