//! Interval-valued layer: multisubmeasures held as endpoint pairs of set
//! functions, interval-valued functions as endpoint pairs of ground
//! functions, the interval Riemann-Lebesgue integral via endpoint
//! decomposition (with a direct Minkowski-sum cross-check on finite
//! spaces), the integral set operator, the order/inclusion suite, and the
//! atom formulas.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::GroundFunction;
use crate::ground::{GroundSpace, MeasurableSet};
use crate::interval::Interval;
use crate::rl_integral::{rl_integrate, IntegralReport};
use crate::setfunc::{Property, SetFunction};

/// Interval-valued set function `A |-> [nu1(A), nu2(A)]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IvSetFunction {
    nu1: SetFunction,
    nu2: SetFunction,
}

impl IvSetFunction {
    pub fn new(nu1: SetFunction, nu2: SetFunction) -> Result<Self> {
        if nu1.space() != nu2.space() {
            return Err(Error::SpaceMismatch);
        }
        if !nu1.le_setwise(&nu2)? {
            return Err(Error::Invalid(
                "lower endpoint must be setwise dominated by the upper endpoint".into(),
            ));
        }
        Ok(IvSetFunction { nu1, nu2 })
    }

    /// Degenerate interval-valued set function `[nu, nu]`.
    pub fn degenerate(nu: SetFunction) -> Self {
        IvSetFunction { nu1: nu.clone(), nu2: nu }
    }

    pub fn nu1(&self) -> &SetFunction {
        &self.nu1
    }

    pub fn nu2(&self) -> &SetFunction {
        &self.nu2
    }

    pub fn space(&self) -> GroundSpace {
        self.nu1.space()
    }

    pub fn value(&self, set: &MeasurableSet) -> Result<Interval> {
        Interval::new(self.nu1.evaluate(set)?, self.nu2.evaluate(set)?)
    }

    pub fn scale(&self, alpha: f64) -> Result<IvSetFunction> {
        Ok(IvSetFunction {
            nu1: SetFunction::scaled(alpha, self.nu1.clone())?,
            nu2: SetFunction::scaled(alpha, self.nu2.clone())?,
        })
    }

    /// Minkowski sum of interval-valued set functions.
    pub fn add(&self, other: &IvSetFunction) -> Result<IvSetFunction> {
        Ok(IvSetFunction {
            nu1: SetFunction::sum(vec![self.nu1.clone(), other.nu1.clone()])?,
            nu2: SetFunction::sum(vec![self.nu2.clone(), other.nu2.clone()])?,
        })
    }

    /// A multisubmeasure is monotone and subadditive for the weak interval
    /// order, which holds exactly when both endpoints are submeasures.
    pub fn is_multisubmeasure(&self) -> bool {
        self.nu1.classify().is_submeasure() && self.nu2.classify().is_submeasure()
    }

    /// The variation of the interval-valued set function for bound
    /// purposes: finite variation of the pair is equivalent to finite
    /// variation of the upper endpoint, so bounds use `nu2`'s variation.
    /// Both endpoint variations are reported.
    pub fn variation_bounds(&self, set: &MeasurableSet) -> Result<(f64, f64)> {
        Ok((self.nu1.variation(set)?, self.nu2.variation(set)?))
    }

    pub fn setwise_le(&self, other: &IvSetFunction) -> Result<bool> {
        Ok(self.nu1.le_setwise(&other.nu1)? && self.nu2.le_setwise(&other.nu2)?)
    }
}

/// Interval-valued function `s |-> [h1(s), h2(s)]` with `0 <= h1 <= h2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IvFunction {
    h1: GroundFunction,
    h2: GroundFunction,
}

impl IvFunction {
    pub fn new(h1: GroundFunction, h2: GroundFunction) -> Result<Self> {
        if h1.space() != h2.space() {
            return Err(Error::SpaceMismatch);
        }
        if !h1.is_nonneg() {
            return Err(Error::Invalid("lower endpoint function must be nonnegative".into()));
        }
        if !h1.le_pointwise(&h2)? {
            return Err(Error::Invalid(
                "lower endpoint function must not exceed the upper endpoint".into(),
            ));
        }
        Ok(IvFunction { h1, h2 })
    }

    pub fn degenerate(h: GroundFunction) -> Result<Self> {
        Self::new(h.clone(), h)
    }

    pub fn constant(space: GroundSpace, value: Interval) -> Self {
        IvFunction {
            h1: GroundFunction::constant(space, value.lo()),
            h2: GroundFunction::constant(space, value.hi()),
        }
    }

    pub fn h1(&self) -> &GroundFunction {
        &self.h1
    }

    pub fn h2(&self) -> &GroundFunction {
        &self.h2
    }

    pub fn space(&self) -> GroundSpace {
        self.h1.space()
    }

    pub fn eval(&self, point: u64) -> Interval {
        Interval::new(self.h1.eval(point), self.h2.eval(point))
            .expect("endpoint order is enforced at construction")
    }

    /// Supremum of the interval norms, `sup h2`.
    pub fn sup_norm(&self) -> f64 {
        self.h2.sup_abs()
    }

    /// Pointwise Minkowski sum.
    pub fn add(&self, other: &IvFunction) -> Result<IvFunction> {
        Ok(IvFunction { h1: self.h1.add(&other.h1)?, h2: self.h2.add(&other.h2)? })
    }

    pub fn scale(&self, alpha: f64) -> Result<IvFunction> {
        if alpha < 0.0 {
            return Err(Error::Invalid("interval functions scale by alpha >= 0".into()));
        }
        Ok(IvFunction { h1: self.h1.scale(alpha), h2: self.h2.scale(alpha) })
    }

    /// Pointwise lattice meet (finite spaces).
    pub fn meet(&self, other: &IvFunction) -> Result<IvFunction> {
        Ok(IvFunction {
            h1: pointwise_min(&self.h1, &other.h1)?,
            h2: pointwise_min(&self.h2, &other.h2)?,
        })
    }

    /// Pointwise lattice join (finite spaces).
    pub fn join(&self, other: &IvFunction) -> Result<IvFunction> {
        Ok(IvFunction {
            h1: pointwise_max(&self.h1, &other.h1)?,
            h2: pointwise_max(&self.h2, &other.h2)?,
        })
    }

    pub fn restrict(&self, set: &MeasurableSet) -> Result<IvFunction> {
        Ok(IvFunction { h1: self.h1.restrict(set)?, h2: self.h2.restrict(set)? })
    }

    /// `G(s) <= H(s)` in the weak interval order, everywhere.
    pub fn le_pointwise(&self, other: &IvFunction) -> Result<bool> {
        Ok(self.h1.le_pointwise(&other.h1)? && self.h2.le_pointwise(&other.h2)?)
    }

    /// `G(s)` included in `H(s)`, everywhere.
    pub fn subset_pointwise(&self, other: &IvFunction) -> Result<bool> {
        Ok(other.h1.le_pointwise(&self.h1)? && self.h2.le_pointwise(&other.h2)?)
    }

    /// `sup_s d_H(G(s), H(s))`, exact through endpoint extrema.
    pub fn uniform_distance(&self, other: &IvFunction) -> Result<f64> {
        let d1 = self.h1.sub(&other.h1)?.sup_abs();
        let d2 = self.h2.sub(&other.h2)?.sup_abs();
        Ok(d1.max(d2))
    }
}

fn pointwise_min(a: &GroundFunction, b: &GroundFunction) -> Result<GroundFunction> {
    match (a.values(), b.values()) {
        (Some(x), Some(y)) => {
            GroundFunction::finite(x.iter().zip(y).map(|(p, q)| p.min(*q)).collect())
        }
        _ => Err(Error::Unsupported(
            "pointwise lattice operations require a finite space".into(),
        )),
    }
}

fn pointwise_max(a: &GroundFunction, b: &GroundFunction) -> Result<GroundFunction> {
    match (a.values(), b.values()) {
        (Some(x), Some(y)) => {
            GroundFunction::finite(x.iter().zip(y).map(|(p, q)| p.max(*q)).collect())
        }
        _ => Err(Error::Unsupported(
            "pointwise lattice operations require a finite space".into(),
        )),
    }
}

/// Report of one interval integral: the value, both endpoint reports, and
/// the Hausdorff gap between the direct Minkowski evaluation and the
/// endpoint decomposition (finite spaces).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IvIntegralReport {
    pub value: Interval,
    pub lo: IntegralReport,
    pub hi: IntegralReport,
    pub cross_check: Option<f64>,
}

/// Interval Riemann-Lebesgue integral via the endpoint decomposition
/// `[RL(h1, nu1), RL(h2, nu2)]`. On finite spaces a direct evaluator folds
/// the singleton Minkowski sums and the Hausdorff distance to the endpoint
/// pair is reported (and must stay within 1e-12).
pub fn iv_rl_integrate(
    h: &IvFunction,
    gamma: &IvSetFunction,
    set: &MeasurableSet,
) -> Result<IvIntegralReport> {
    if h.space() != gamma.space() || set.space() != h.space() {
        return Err(Error::SpaceMismatch);
    }
    let lo = rl_integrate(h.h1(), gamma.nu1(), set)?;
    let hi = rl_integrate(h.h2(), gamma.nu2(), set)?;
    let lo_v = lo
        .value_or_err()
        .map_err(|e| Error::SeriesDiverges(format!("lower endpoint h1 d(nu1): {e}")))?;
    let hi_v = hi
        .value_or_err()
        .map_err(|e| Error::SeriesDiverges(format!("upper endpoint h2 d(nu2): {e}")))?;
    let value = Interval::new(lo_v, hi_v)?;
    let cross_check = match set.space() {
        GroundSpace::Finite(_) => {
            let direct = direct_minkowski(h, gamma, set)?;
            let d = direct.hausdorff(&value);
            if d > 1e-12 {
                return Err(Error::Invalid(format!(
                    "direct Minkowski evaluation deviates from the endpoint decomposition by {d}"
                )));
            }
            Some(d)
        }
        GroundSpace::CountableNat => None,
    };
    Ok(IvIntegralReport { value, lo, hi, cross_check })
}

/// Direct evaluation of the singleton tagged sum as a fold of interval
/// Minkowski additions.
fn direct_minkowski(
    h: &IvFunction,
    gamma: &IvSetFunction,
    set: &MeasurableSet,
) -> Result<Interval> {
    let w1 = gamma.nu1().singleton_weights()?;
    let w2 = gamma.nu2().singleton_weights()?;
    let mut acc = Interval::zero();
    for s in set.members()? {
        let term = Interval::new(h.h1().eval(s) * w1.eval(s), h.h2().eval(s) * w2.eval(s))?;
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// One structural check in a report: whether it held, the worst deviation
/// seen, and a witness description when it did not.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub holds: bool,
    pub max_deviation: f64,
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn passed(max_deviation: f64) -> Self {
        CheckOutcome { holds: true, max_deviation, witness: None }
    }

    fn failed(max_deviation: f64, witness: String) -> Self {
        CheckOutcome { holds: false, max_deviation, witness: Some(witness) }
    }
}

/// The indefinite interval integral operator together with its property
/// checks on a finite space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IvIndefiniteReport {
    /// Endpoint indefinite integrals (tables over the space).
    pub t_lo: SetFunction,
    pub t_hi: SetFunction,
    /// d_H(T(A u B), T(A) + T(B)) over all disjoint pairs.
    pub finitely_additive: CheckOutcome,
    /// norm of T_H(S) against the upper endpoint integral.
    pub norm_identity: CheckOutcome,
    /// variation of T_H at S against the upper endpoint integral.
    pub variation_identity: CheckOutcome,
    /// monotonicity of T_H, checked when Gamma is monotone.
    pub monotone: Option<CheckOutcome>,
    /// Gamma countably additive in d_H (on a finite space: finitely
    /// additive endpoints), implying countable additivity of T_H.
    pub gamma_dh_multimeasure: bool,
}

impl IvIndefiniteReport {
    pub fn operator_value(&self, set: &MeasurableSet) -> Result<Interval> {
        Interval::new(self.t_lo.evaluate(set)?, self.t_hi.evaluate(set)?)
    }
}

/// Builds `T_H(E) = interval integral of H over E` and verifies its
/// structural properties exhaustively. Finite spaces.
pub fn iv_indefinite(h: &IvFunction, gamma: &IvSetFunction) -> Result<IvIndefiniteReport> {
    let n = h.space().len().ok_or_else(|| {
        Error::Unsupported("the indefinite-operator report requires a finite space".into())
    })?;
    if h.space() != gamma.space() {
        return Err(Error::SpaceMismatch);
    }
    let t_lo = crate::rl_integral::indefinite_integral(h.h1(), gamma.nu1())?;
    let t_hi = crate::rl_integral::indefinite_integral(h.h2(), gamma.nu2())?;
    let full_mask = (1u64 << n) - 1;
    let set = |m: u64| MeasurableSet::finite_from_mask(n, m).unwrap();
    let t = |m: u64| -> Result<Interval> {
        Interval::new(t_lo.evaluate(&set(m))?, t_hi.evaluate(&set(m))?)
    };

    // finite additivity over every disjoint pair
    let mut max_dev = 0.0f64;
    let mut witness = None;
    for a in 0..=full_mask {
        let comp = full_mask & !a;
        let mut b = comp;
        loop {
            let d = t(a | b)?.hausdorff(&t(a)?.add(&t(b)?));
            if d > max_dev {
                max_dev = d;
                if d > 1e-12 {
                    witness = Some(format!("A={} B={}", set(a), set(b)));
                }
            }
            if b == 0 {
                break;
            }
            b = (b - 1) & comp;
        }
    }
    let finitely_additive = if max_dev <= 1e-12 {
        CheckOutcome::passed(max_dev)
    } else {
        CheckOutcome::failed(max_dev, witness.unwrap())
    };

    let full = MeasurableSet::full(h.space());
    let hi_integral = rl_integrate(h.h2(), gamma.nu2(), &full)?.value_or_err()?;
    let norm_gap = (t(full_mask)?.norm() - hi_integral).abs();
    let norm_identity = if norm_gap <= 1e-12 {
        CheckOutcome::passed(norm_gap)
    } else {
        CheckOutcome::failed(norm_gap, "norm of T_H(S) differs from the h2 integral".into())
    };

    // the interval variation of T_H reduces to the variation of the upper
    // endpoint table
    let var_gap = (t_hi.variation(&full)? - hi_integral).abs();
    let variation_identity = if var_gap <= 1e-12 {
        CheckOutcome::passed(var_gap)
    } else {
        CheckOutcome::failed(var_gap, "variation of T_H differs from the h2 integral".into())
    };

    let monotone = if gamma.nu1().classify().monotone.is_holds()
        && gamma.nu2().classify().monotone.is_holds()
    {
        let mut worst = 0.0f64;
        let mut w = None;
        for b in 0..=full_mask {
            let tb = t(b)?;
            let mut a = (b.wrapping_sub(1)) & b;
            loop {
                let ta = t(a)?;
                if !ta.leq(&tb) {
                    let gap = (ta.lo() - tb.lo()).max(ta.hi() - tb.hi());
                    if gap > worst {
                        worst = gap;
                        w = Some(format!("A={} B={}", set(a), set(b)));
                    }
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & b;
            }
            if b == 0 {
                break;
            }
        }
        Some(match w {
            None => CheckOutcome::passed(worst),
            Some(wit) => CheckOutcome::failed(worst, wit),
        })
    } else {
        None
    };

    let gamma_dh_multimeasure = gamma.nu1().classify().finitely_additive.is_holds()
        && gamma.nu2().classify().finitely_additive.is_holds();

    Ok(IvIndefiniteReport {
        t_lo,
        t_hi,
        finitely_additive,
        norm_identity,
        variation_identity,
        monotone,
        gamma_dh_multimeasure,
    })
}

/// One relation row of the order/inclusion suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationRow {
    pub name: String,
    pub applicable: bool,
    pub cases: usize,
    pub violations: usize,
    pub worst_gap: f64,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IvSuiteReport {
    pub rows: Vec<RelationRow>,
    pub hypotheses: BTreeMap<String, bool>,
}

impl IvSuiteReport {
    pub fn all_applicable_hold(&self) -> bool {
        self.rows.iter().all(|r| !r.applicable || r.violations == 0)
    }
}

const SUITE_TOL: f64 = 1e-12;

/// Order, inclusion, lattice, additivity and distance-bound checks for the
/// interval integral, per measurable set, exhaustively on a finite space.
pub fn iv_monotonicity_suite(
    g: &IvFunction,
    h: &IvFunction,
    gamma: &IvSetFunction,
    gamma1: &IvSetFunction,
    gamma2: &IvSetFunction,
) -> Result<IvSuiteReport> {
    let n = g.space().len().ok_or_else(|| {
        Error::Unsupported("the order/inclusion suite requires a finite space".into())
    })?;
    let full_mask = (1u64 << n) - 1;
    let sets: Vec<MeasurableSet> =
        (0..=full_mask).map(|m| MeasurableSet::finite_from_mask(n, m).unwrap()).collect();

    let mut hypotheses = BTreeMap::new();
    let g_le_h = g.le_pointwise(h)?;
    let g_sub_h = g.subset_pointwise(h)?;
    let gamma1_le_gamma2 = gamma1.setwise_le(gamma2)?;
    let mut gamma1_sub_gamma2 = true;
    for e in &sets {
        gamma1_sub_gamma2 &= gamma1.value(e)?.subset(&gamma2.value(e)?);
    }
    hypotheses.insert("g_le_h_pointwise".into(), g_le_h);
    hypotheses.insert("g_subset_h_pointwise".into(), g_sub_h);
    hypotheses.insert("gamma1_le_gamma2_setwise".into(), gamma1_le_gamma2);
    hypotheses.insert("gamma1_subset_gamma2_setwise".into(), gamma1_sub_gamma2);
    hypotheses.insert("gamma_multisubmeasure".into(), gamma.is_multisubmeasure());

    let integral = |hh: &IvFunction, gg: &IvSetFunction, e: &MeasurableSet| -> Result<Interval> {
        Ok(iv_rl_integrate(hh, gg, e)?.value)
    };

    let mut rows: Vec<RelationRow> = Vec::new();
    let mut run = |name: &str,
                   applicable: bool,
                   check: &mut dyn FnMut(&MeasurableSet) -> Result<Option<(f64, String)>>|
     -> Result<()> {
        let mut row = RelationRow {
            name: name.into(),
            applicable,
            cases: 0,
            violations: 0,
            worst_gap: 0.0,
            witness: None,
        };
        if applicable {
            for e in &sets {
                row.cases += 1;
                if let Some((gap, wit)) = check(e)? {
                    row.violations += 1;
                    if gap > row.worst_gap {
                        row.worst_gap = gap;
                        row.witness = Some(wit);
                    }
                }
            }
        }
        rows.push(row);
        Ok(())
    };

    run("order_monotone_in_H", g_le_h, &mut |e| {
        let tg = integral(g, gamma, e)?;
        let th = integral(h, gamma, e)?;
        let gap = (tg.lo() - th.lo()).max(tg.hi() - th.hi());
        Ok((gap > SUITE_TOL).then(|| (gap, format!("E={e}: {tg} vs {th}"))))
    })?;

    run("inclusion_monotone_in_H", g_sub_h, &mut |e| {
        let tg = integral(g, gamma, e)?;
        let th = integral(h, gamma, e)?;
        let gap = (th.lo() - tg.lo()).max(tg.hi() - th.hi());
        Ok((gap > SUITE_TOL).then(|| (gap, format!("E={e}: {tg} not within {th}"))))
    })?;

    let meet = g.meet(h)?;
    let join = g.join(h)?;
    run("lattice_meet_bound", true, &mut |e| {
        let lhs = integral(&meet, gamma, e)?;
        let rhs = integral(g, gamma, e)?.meet(&integral(h, gamma, e)?);
        let gap = (lhs.lo() - rhs.lo()).max(lhs.hi() - rhs.hi());
        Ok((gap > SUITE_TOL).then(|| (gap, format!("E={e}: {lhs} vs {rhs}"))))
    })?;
    run("lattice_join_bound", true, &mut |e| {
        let lhs = integral(g, gamma, e)?.join(&integral(h, gamma, e)?);
        let rhs = integral(&join, gamma, e)?;
        let gap = (lhs.lo() - rhs.lo()).max(lhs.hi() - rhs.hi());
        Ok((gap > SUITE_TOL).then(|| (gap, format!("E={e}: {lhs} vs {rhs}"))))
    })?;

    let gamma_sum = gamma1.add(gamma2)?;
    run("additive_in_gamma", true, &mut |e| {
        let lhs = integral(h, &gamma_sum, e)?;
        let rhs = integral(h, gamma1, e)?.add(&integral(h, gamma2, e)?);
        let gap = lhs.hausdorff(&rhs);
        Ok((gap > SUITE_TOL).then(|| (gap, format!("E={e}: {lhs} vs {rhs}"))))
    })?;

    run("order_monotone_in_gamma", gamma1_le_gamma2, &mut |e| {
        let t1 = integral(h, gamma1, e)?;
        let t2 = integral(h, gamma2, e)?;
        let gap = (t1.lo() - t2.lo()).max(t1.hi() - t2.hi());
        Ok((gap > SUITE_TOL).then(|| (gap, format!("E={e}: {t1} vs {t2}"))))
    })?;

    run("inclusion_monotone_in_gamma", gamma1_sub_gamma2, &mut |e| {
        let t1 = integral(h, gamma1, e)?;
        let t2 = integral(h, gamma2, e)?;
        let gap = (t2.lo() - t1.lo()).max(t1.hi() - t2.hi());
        Ok((gap > SUITE_TOL).then(|| (gap, format!("E={e}: {t1} not within {t2}"))))
    })?;

    // distance bound against the uniform endpoint distance and the upper
    // endpoint variation
    let full = MeasurableSet::full(g.space());
    let bound = g.uniform_distance(h)? * gamma.nu2().variation(&full)?;
    run("hausdorff_distance_bound", true, &mut |e| {
        if e.mask() != Some(full_mask) {
            return Ok(None);
        }
        let d = integral(g, gamma, e)?.hausdorff(&integral(h, gamma, e)?);
        let gap = d - bound;
        Ok((gap > SUITE_TOL).then(|| (gap, format!("d_H = {d} exceeds bound {bound}"))))
    })?;

    Ok(IvSuiteReport { rows, hypotheses })
}

/// Result of evaluating the interval integral on an atom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomIntegralReport {
    /// The single point carrying the atom's mass.
    pub point: u64,
    /// `H(b) * Gamma({b})`.
    pub value: Interval,
    /// The integral over the atom, for comparison.
    pub integral: Interval,
    /// Exact equality of the two (summing the null remainder adds zeros).
    pub exact_match: bool,
    pub hypotheses: BTreeMap<String, String>,
}

/// Integral of an interval-valued function over an atom of the
/// multisubmeasure: locates the unique point `b` with the atom's whole
/// mass and returns `H(b) * Gamma({b})`, checked against the integral.
pub fn iv_atom_integral(
    h: &IvFunction,
    gamma: &IvSetFunction,
    atom: &MeasurableSet,
) -> Result<AtomIntegralReport> {
    let n = h.space().len().ok_or_else(|| {
        Error::Unsupported("atom integrals are evaluated on finite spaces".into())
    })?;
    if gamma.space() != h.space() || atom.space() != h.space() {
        return Err(Error::SpaceMismatch);
    }
    let mut hypotheses = BTreeMap::new();
    hypotheses.insert(
        "regular".into(),
        "holds (discrete finite space: every set is compact and open)".into(),
    );
    let r1 = gamma.nu1().classify();
    let r2 = gamma.nu2().classify();
    if !(r1.is_submeasure() && r2.is_submeasure()) {
        return Err(Error::HypothesisViolated {
            name: "multisubmeasure".into(),
            detail: "both endpoints must be monotone and subadditive".into(),
        });
    }
    hypotheses.insert("multisubmeasure".into(), "holds".into());
    if !(r1.get(Property::PropertySigma).is_holds() && r2.get(Property::PropertySigma).is_holds())
    {
        return Err(Error::HypothesisViolated {
            name: "property_sigma".into(),
            detail: "countable unions of null sets must be null at both endpoints".into(),
        });
    }
    hypotheses.insert("property_sigma".into(), "holds".into());
    hypotheses.insert("finite_variation".into(), "holds (finite space)".into());

    // atom of Gamma: nonzero value and every measurable subset either null
    // or carrying a null remainder, at both endpoints
    let v2 = gamma.nu2().evaluate(atom)?;
    if v2 <= 0.0 {
        return Err(Error::NotAnAtom { witness: atom.to_string() });
    }
    let amask = atom.mask().unwrap();
    let endpoint_atom = |nu: &SetFunction| -> Result<Option<MeasurableSet>> {
        if nu.evaluate(atom)? == 0.0 {
            // the endpoint vanishes on the atom; its conditions hold
            // trivially under monotonicity
            return Ok(None);
        }
        let mut b = (amask.wrapping_sub(1)) & amask;
        while b != 0 {
            let bs = MeasurableSet::finite_from_mask(n, b)?;
            let rest = atom.difference(&bs)?;
            if nu.evaluate(&bs)? != 0.0 && nu.evaluate(&rest)? != 0.0 {
                return Ok(Some(bs));
            }
            b = (b - 1) & amask;
        }
        Ok(None)
    };
    if let Some(w) = endpoint_atom(gamma.nu2())? {
        return Err(Error::NotAnAtom { witness: w.to_string() });
    }
    if let Some(w) = endpoint_atom(gamma.nu1())? {
        return Err(Error::NotAnAtom { witness: w.to_string() });
    }

    // the unique point with nu_i({b}) = nu_i(atom) and nu_i(atom - {b}) = 0
    let mut found: Vec<u64> = Vec::new();
    for s in atom.members()? {
        let single = MeasurableSet::finite_from_members(n, &[s])?;
        let rest = atom.difference(&single)?;
        let ok1 = gamma.nu1().evaluate(&single)? == gamma.nu1().evaluate(atom)?
            && gamma.nu1().evaluate(&rest)? == 0.0;
        let ok2 = gamma.nu2().evaluate(&single)? == gamma.nu2().evaluate(atom)?
            && gamma.nu2().evaluate(&rest)? == 0.0;
        if ok1 && ok2 {
            found.push(s);
        }
    }
    if found.len() != 1 {
        return Err(Error::NoSinglePoint(format!(
            "{} candidate points carry the atom's mass in {atom}",
            found.len()
        )));
    }
    let b = found[0];
    let single = MeasurableSet::finite_from_members(n, &[b])?;
    let value = h.eval(b).mul(&gamma.value(&single)?);
    let integral = iv_rl_integrate(h, gamma, atom)?.value;
    let exact_match = value.lo() == integral.lo() && value.hi() == integral.hi();
    Ok(AtomIntegralReport { point: b, value, integral, exact_match, hypotheses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::GroundSpace;

    fn space3() -> GroundSpace {
        GroundSpace::finite(3).unwrap()
    }

    fn additive(weights: Vec<f64>) -> SetFunction {
        SetFunction::additive(GroundFunction::finite(weights).unwrap()).unwrap()
    }

    #[test]
    fn endpoint_order_is_validated() {
        let nu1 = additive(vec![0.5, 0.5, 0.5]);
        let nu2 = additive(vec![0.25, 0.5, 0.5]);
        assert!(IvSetFunction::new(nu1.clone(), nu1.clone()).is_ok());
        assert!(IvSetFunction::new(nu1, nu2).is_err());
    }

    #[test]
    fn interval_integral_endpoint_values() {
        // two-point example with hand-computed endpoint sums
        let space = GroundSpace::finite(2).unwrap();
        let gamma = IvSetFunction::new(
            SetFunction::additive(GroundFunction::finite(vec![0.1, 0.2]).unwrap()).unwrap(),
            SetFunction::additive(GroundFunction::finite(vec![0.3, 0.4]).unwrap()).unwrap(),
        )
        .unwrap();
        let h = IvFunction::new(
            GroundFunction::finite(vec![1.0, 1.0]).unwrap(),
            GroundFunction::finite(vec![2.0, 3.0]).unwrap(),
        )
        .unwrap();
        let full = MeasurableSet::full(space);
        let r = iv_rl_integrate(&h, &gamma, &full).unwrap();
        assert!((r.value.lo() - 0.3).abs() <= 1e-15);
        assert!((r.value.hi() - 1.8).abs() <= 1e-15);
        assert_eq!(r.cross_check, Some(0.0));
    }

    #[test]
    fn zero_function_integrates_to_zero_interval() {
        let gamma = IvSetFunction::degenerate(additive(vec![0.5, 0.25, 1.0]));
        let h = IvFunction::constant(space3(), Interval::zero());
        let r = iv_rl_integrate(&h, &gamma, &MeasurableSet::full(space3())).unwrap();
        assert_eq!(r.value, Interval::zero());
    }

    #[test]
    fn countable_signal_integral() {
        use crate::func::NatFunction;
        let nat = GroundSpace::CountableNat;
        let gamma = IvSetFunction::new(
            SetFunction::additive(GroundFunction::nat(NatFunction::geometric(0.5, 0.5).unwrap()))
                .unwrap(),
            SetFunction::additive(GroundFunction::nat(NatFunction::geometric(1.0, 0.5).unwrap()))
                .unwrap(),
        )
        .unwrap();
        let h = IvFunction::new(
            GroundFunction::nat(NatFunction::geometric(1.0, 0.5).unwrap()),
            GroundFunction::constant(nat, 1.0),
        )
        .unwrap();
        let r = iv_rl_integrate(&h, &gamma, &MeasurableSet::full(nat)).unwrap();
        // lower endpoint: sum 0.5 * 0.25^n = 2/3; upper: sum 0.5^n = 2
        assert!((r.value.lo() - 2.0 / 3.0).abs() <= 1e-12);
        assert!((r.value.hi() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn indefinite_operator_checks_hold() {
        let gamma = IvSetFunction::new(
            SetFunction::table(space3(), vec![0.0, 0.1, 0.2, 0.3, 0.1, 0.25, 0.3, 0.5]).unwrap(),
            SetFunction::table(space3(), vec![0.0, 0.3, 0.3, 0.6, 0.2, 0.5, 0.5, 1.0]).unwrap(),
        )
        .unwrap();
        let h = IvFunction::new(
            GroundFunction::finite(vec![0.5, 1.0, 0.25]).unwrap(),
            GroundFunction::finite(vec![1.5, 1.0, 2.0]).unwrap(),
        )
        .unwrap();
        let rep = iv_indefinite(&h, &gamma).unwrap();
        assert!(rep.finitely_additive.holds);
        assert!(rep.norm_identity.holds);
        assert!(rep.variation_identity.holds);
        assert!(rep.monotone.as_ref().map(|m| m.holds).unwrap_or(true));
        assert_eq!(
            rep.operator_value(&MeasurableSet::empty(space3())).unwrap(),
            Interval::zero()
        );
    }

    #[test]
    fn suite_holds_on_ordered_pair() {
        let g = IvFunction::new(
            GroundFunction::finite(vec![0.25, 0.5, 0.0]).unwrap(),
            GroundFunction::finite(vec![0.5, 1.0, 0.5]).unwrap(),
        )
        .unwrap();
        let h = IvFunction::new(
            GroundFunction::finite(vec![0.5, 0.5, 0.25]).unwrap(),
            GroundFunction::finite(vec![1.0, 1.5, 0.75]).unwrap(),
        )
        .unwrap();
        let gamma1 = IvSetFunction::new(
            additive(vec![0.1, 0.2, 0.05]),
            additive(vec![0.2, 0.3, 0.1]),
        )
        .unwrap();
        let gamma2 = gamma1.scale(2.0).unwrap();
        let gamma = gamma1.add(&gamma2).unwrap();
        let report = iv_monotonicity_suite(&g, &h, &gamma, &gamma1, &gamma2).unwrap();
        assert!(report.hypotheses["g_le_h_pointwise"]);
        assert!(report.hypotheses["gamma1_le_gamma2_setwise"]);
        assert!(report.all_applicable_hold(), "{:#?}", report.rows);
    }

    #[test]
    fn scaled_gamma_scales_the_integral() {
        let h = IvFunction::new(
            GroundFunction::finite(vec![0.5, 1.0, 0.25]).unwrap(),
            GroundFunction::finite(vec![1.0, 1.25, 0.5]).unwrap(),
        )
        .unwrap();
        let gamma1 = IvSetFunction::new(
            additive(vec![0.1, 0.2, 0.05]),
            additive(vec![0.2, 0.3, 0.1]),
        )
        .unwrap();
        let gamma2 = gamma1.scale(2.0).unwrap();
        let full = MeasurableSet::full(space3());
        let t1 = iv_rl_integrate(&h, &gamma1, &full).unwrap().value;
        let t2 = iv_rl_integrate(&h, &gamma2, &full).unwrap().value;
        assert!((t2.lo() - 2.0 * t1.lo()).abs() <= 1e-12);
        assert!((t2.hi() - 2.0 * t1.hi()).abs() <= 1e-12);
    }

    #[test]
    fn atom_integral_finds_the_single_point() {
        // nu(A) = 1 iff 0 in A is a submeasure with property sigma; B = {0, 1}
        let vals: Vec<f64> = (0..8u64).map(|m| if m & 1 != 0 { 1.0 } else { 0.0 }).collect();
        let nu = SetFunction::table(space3(), vals).unwrap();
        let gamma = IvSetFunction::degenerate(nu);
        let h = IvFunction::new(
            GroundFunction::finite(vec![0.5, 2.0, 1.0]).unwrap(),
            GroundFunction::finite(vec![1.5, 3.0, 2.0]).unwrap(),
        )
        .unwrap();
        let atom = MeasurableSet::finite_from_members(3, &[0, 1]).unwrap();
        let rep = iv_atom_integral(&h, &gamma, &atom).unwrap();
        assert_eq!(rep.point, 0);
        assert!(rep.exact_match);
        assert_eq!(rep.value.lo(), 0.5);
        assert_eq!(rep.value.hi(), 1.5);
    }

    #[test]
    fn singleton_atom_is_forced() {
        let nu = additive(vec![0.0, 0.7, 0.0]);
        let gamma = IvSetFunction::degenerate(nu);
        let h = IvFunction::degenerate(GroundFunction::finite(vec![1.0, 2.0, 3.0]).unwrap())
            .unwrap();
        let atom = MeasurableSet::finite_from_members(3, &[1]).unwrap();
        let rep = iv_atom_integral(&h, &gamma, &atom).unwrap();
        assert_eq!(rep.point, 1);
        assert!((rep.value.lo() - 1.4).abs() <= 1e-15);
    }

    #[test]
    fn non_atom_is_rejected_with_witness() {
        let nu = additive(vec![0.5, 0.5, 0.0]);
        let gamma = IvSetFunction::degenerate(nu);
        let h = IvFunction::degenerate(GroundFunction::finite(vec![1.0, 1.0, 1.0]).unwrap())
            .unwrap();
        let atom = MeasurableSet::finite_from_members(3, &[0, 1]).unwrap();
        match iv_atom_integral(&h, &gamma, &atom) {
            Err(Error::NotAnAtom { witness }) => {
                assert!(!witness.is_empty());
            }
            other => panic!("expected NotAnAtom, got {other:?}"),
        }
    }
}
