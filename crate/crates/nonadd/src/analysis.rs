//! Seminorms, the Hölder/Minkowski inequalities and their reverses,
//! RL-integrability of set functions, and the convergence-theorem harness
//! (uniform, in-measure, almost-everywhere, p-norm, Fatou, monotone,
//! setwise-varying multisubmeasures, atoms).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::GroundFunction;
use crate::ground::{EpSet, GroundSpace, MeasurableSet};
use crate::interval::Interval;
use crate::iv_integral::{iv_atom_integral, iv_rl_integrate, IvFunction, IvSetFunction};
use crate::rl_integral::rl_integrate;
use crate::setfunc::{Property, SetFunction};

const INEQ_TOL: f64 = 1e-12;

/// `( integral of |f|^p )^(1/p)`.
pub fn seminorm_p(f: &GroundFunction, nu: &SetFunction, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Invalid(format!("seminorm exponent must be positive, got {p}")));
    }
    let power = f.abs_pow(p)?;
    let full = MeasurableSet::full(f.space());
    let v = rl_integrate(&power, nu, &full)?.value_or_err()?;
    Ok(v.powf(1.0 / p))
}

fn signed_norm(f: &GroundFunction, nu: &SetFunction, q: f64) -> Result<f64> {
    let power = f.abs_pow_signed(q)?;
    let full = MeasurableSet::full(f.space());
    let v = rl_integrate(&power, nu, &full)?.value_or_err()?;
    Ok(v.powf(1.0 / q))
}

/// Whether `nu` integrates its own indicators: `RL-integral of chi_E = nu(E)`
/// for every measurable `E`. On atomic spaces this is additivity over
/// singletons; a failing `E` is returned as witness.
pub fn is_rl_integrable_setfunction(
    nu: &SetFunction,
) -> Result<(bool, Option<MeasurableSet>)> {
    let weights = nu.singleton_weights()?;
    let check = |set: &MeasurableSet| -> Result<Option<bool>> {
        let chi = GroundFunction::indicator(set);
        let report = rl_integrate(&chi, nu, &MeasurableSet::full(nu.space()))?;
        match report.value {
            Some(v) => Ok(Some((v - nu.evaluate(set)?).abs() <= INEQ_TOL)),
            None => Ok(None), // indicator not integrable: the property fails
        }
    };
    match nu.space() {
        GroundSpace::Finite(n) => {
            let full = (1u64 << n) - 1;
            for m in 0..=full {
                let set = MeasurableSet::finite_from_mask(n, m)?;
                match check(&set)? {
                    Some(true) => {}
                    _ => return Ok((false, Some(set))),
                }
            }
            let _ = weights;
            Ok((true, None))
        }
        GroundSpace::CountableNat => {
            // probe finite sets, residue classes, tails and the whole space;
            // the first disagreement is a witness
            let mut probes: Vec<MeasurableSet> = Vec::new();
            for i in 0..6u64 {
                for j in (i + 1)..6u64 {
                    probes.push(MeasurableSet::nat(EpSet::from_members(&[i, j])));
                }
            }
            for k in 0..4u64 {
                probes.push(MeasurableSet::nat(EpSet::tail(k)));
                probes.push(MeasurableSet::nat(EpSet::progression(k, 4)?));
            }
            probes.push(MeasurableSet::full(GroundSpace::CountableNat));
            for set in probes {
                match check(&set)? {
                    Some(true) => {}
                    _ => return Ok((false, Some(set))),
                }
            }
            // no probe disagreed: certify only the structurally additive
            // representations
            if nu.classify().finitely_additive.is_holds() {
                Ok((true, None))
            } else {
                Err(Error::Unsupported(
                    "RL-integrability of this representation on the naturals is not decidable"
                        .into(),
                ))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    Holder,
    Minkowski,
    ReverseHolder,
    ReverseMinkowski,
}

/// Both sides of one inequality instance plus the hypothesis ledger.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    pub p: f64,
    pub q: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// The inequality itself, within 1e-12 in its stated direction.
    pub holds: bool,
    /// All named hypotheses hold, so the theorem applies; otherwise the
    /// numbers are exploratory.
    pub applicable: bool,
    pub hypotheses: BTreeMap<String, bool>,
}

/// Evaluates a Hölder/Minkowski-type inequality. `q` defaults to the
/// conjugate exponent of `p`; passing both checks conjugacy.
pub fn check_inequality(
    kind: InequalityKind,
    g: &GroundFunction,
    h: &GroundFunction,
    nu: &SetFunction,
    p: f64,
    q: Option<f64>,
) -> Result<InequalityReport> {
    if g.space() != h.space() || g.space() != nu.space() {
        return Err(Error::SpaceMismatch);
    }
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Invalid(format!("exponent p must be positive, got {p}")));
    }
    let conjugate = if (p - 1.0).abs() < 1e-15 { None } else { Some(p / (p - 1.0)) };
    let q = match (q, conjugate) {
        (Some(q), Some(c)) => {
            if (1.0 / p + 1.0 / q - 1.0).abs() > INEQ_TOL {
                return Err(Error::ConjugateMismatch { p, q });
            }
            let _ = c;
            Some(q)
        }
        (Some(q), None) => return Err(Error::ConjugateMismatch { p, q }),
        (None, c) => c,
    };

    let mut hyp = BTreeMap::new();
    let rl_int = is_rl_integrable_setfunction(nu).map(|(ok, _)| ok).unwrap_or(false);
    hyp.insert("nu_rl_integrable".into(), rl_int);
    hyp.insert(
        "countably_subadditive".into(),
        nu.classify().get(Property::SigmaSubadditive).is_holds(),
    );

    let report = match kind {
        InequalityKind::Holder => {
            hyp.insert("p_q_conjugate".into(), q.is_some() && p > 1.0);
            let q = q.ok_or(Error::ConjugateMismatch { p, q: f64::INFINITY })?;
            let product = g.mul(h)?;
            let lhs = seminorm_p(&product, nu, 1.0)?;
            let rhs = seminorm_p(g, nu, p)? * seminorm_p(h, nu, q)?;
            hyp.insert("gh_integrable".into(), true);
            (lhs, rhs, lhs <= rhs + INEQ_TOL, Some(q))
        }
        InequalityKind::Minkowski => {
            hyp.insert("p_at_least_one".into(), p >= 1.0);
            let sum = g.add(h)?;
            let lhs = seminorm_p(&sum, nu, p)?;
            let rhs = seminorm_p(g, nu, p)? + seminorm_p(h, nu, p)?;
            // |g+h|^{q(p-1)} = |g+h|^p for conjugate q; its integrability is
            // recorded as the theorem lists it, though the proof of the
            // forward inequality does not consume it
            hyp.insert("sum_power_qp1_integrable".into(), sum.abs_pow(p).is_ok());
            (lhs, rhs, lhs <= rhs + INEQ_TOL, q)
        }
        InequalityKind::ReverseHolder => {
            hyp.insert("p_in_unit_interval".into(), 0.0 < p && p < 1.0);
            let q = q.ok_or(Error::ConjugateMismatch { p, q: f64::INFINITY })?;
            let g_pos = g
                .extrema_on(&MeasurableSet::full(g.space()))
                .map(|b| b.inf.value > 0.0)
                .unwrap_or(false);
            let h_pos = h
                .extrema_on(&MeasurableSet::full(h.space()))
                .map(|b| b.inf.value > 0.0)
                .unwrap_or(false);
            hyp.insert("g_strictly_positive".into(), g_pos);
            hyp.insert("h_strictly_positive".into(), h_pos);
            let product = g.mul(h)?;
            let lhs = seminorm_p(&product, nu, 1.0)?;
            let h_q = signed_norm(h, nu, q)?;
            hyp.insert("positive_h_q_integral".into(), h_q > 0.0);
            let rhs = seminorm_p(g, nu, p)? * h_q;
            (lhs, rhs, lhs >= rhs - INEQ_TOL, Some(q))
        }
        InequalityKind::ReverseMinkowski => {
            hyp.insert("p_in_unit_interval".into(), 0.0 < p && p < 1.0);
            let abs_sum = g.abs_pow(1.0)?.add(&h.abs_pow(1.0)?)?;
            let lhs = seminorm_p(&abs_sum, nu, p)?;
            let rhs = seminorm_p(g, nu, p)? + seminorm_p(h, nu, p)?;
            (lhs, rhs, lhs >= rhs - INEQ_TOL, q)
        }
    };
    let (lhs, rhs, holds, q) = report;
    let applicable = hyp.values().all(|v| *v);
    Ok(InequalityReport { kind, p, q, lhs, rhs, holds, applicable, hypotheses: hyp })
}

// ---------------------------------------------------------------------------
// convergence harness
// ---------------------------------------------------------------------------

/// A sequence of scalar functions in closed form.
#[derive(Debug, Clone)]
pub enum ScalarFamily {
    /// `f_n = base + sign * ratio^n * delta` away from `bad_set`; on
    /// `bad_set` the terms stay at `base + delta` and never converge to
    /// the limit.
    Geometric {
        base: GroundFunction,
        delta: GroundFunction,
        ratio: f64,
        sign: f64,
        bad_set: Option<MeasurableSet>,
    },
    /// Alternates between the two functions.
    Alternating { a: GroundFunction, b: GroundFunction },
}

impl ScalarFamily {
    pub fn geometric(base: GroundFunction, delta: GroundFunction, ratio: f64) -> Result<Self> {
        if !(0.0 < ratio && ratio < 1.0) {
            return Err(Error::Invalid(format!("family ratio must be in (0,1), got {ratio}")));
        }
        Ok(ScalarFamily::Geometric { base, delta, ratio, sign: 1.0, bad_set: None })
    }

    pub fn space(&self) -> GroundSpace {
        match self {
            ScalarFamily::Geometric { base, .. } => base.space(),
            ScalarFamily::Alternating { a, .. } => a.space(),
        }
    }

    pub fn term(&self, n: u32) -> Result<GroundFunction> {
        match self {
            ScalarFamily::Geometric { base, delta, ratio, sign, bad_set } => {
                let (off, on) = split_by_bad_set(delta, bad_set)?;
                base.add(&off.scale(sign * ratio.powi(n as i32)))?.add(&on)
            }
            ScalarFamily::Alternating { a, b } => {
                Ok(if n % 2 == 0 { a.clone() } else { b.clone() })
            }
        }
    }

    /// Pointwise limit inferior of the sequence.
    pub fn liminf(&self) -> Result<GroundFunction> {
        match self {
            ScalarFamily::Geometric { base, delta, bad_set, .. } => {
                let (_, on) = split_by_bad_set(delta, bad_set)?;
                base.add(&on)
            }
            ScalarFamily::Alternating { a, b } => scalar_pointwise_min(a, b),
        }
    }

    /// Pointwise limit away from the bad set (the target of the
    /// convergence modes).
    pub fn limit(&self) -> Result<GroundFunction> {
        match self {
            ScalarFamily::Geometric { base, .. } => Ok(base.clone()),
            ScalarFamily::Alternating { a, b } => {
                // only constant alternations converge
                if a == b {
                    Ok(a.clone())
                } else {
                    Err(Error::Invalid("alternating family has no pointwise limit".into()))
                }
            }
        }
    }

    /// `lim integral of f_n`, evaluated analytically (the geometric part
    /// contributes nothing in the limit).
    pub fn integral_limit(&self, nu: &SetFunction) -> Result<f64> {
        let full = MeasurableSet::full(self.space());
        match self {
            ScalarFamily::Geometric { base, delta, bad_set, .. } => {
                let (_, on) = split_by_bad_set(delta, bad_set)?;
                rl_integrate(&base.add(&on)?, nu, &full)?.value_or_err()
            }
            ScalarFamily::Alternating { a, b } => {
                let ia = rl_integrate(a, nu, &full)?.value_or_err()?;
                let ib = rl_integrate(b, nu, &full)?.value_or_err()?;
                Ok(ia.min(ib))
            }
        }
    }

    fn bad_set(&self) -> Option<&MeasurableSet> {
        match self {
            ScalarFamily::Geometric { bad_set, .. } => bad_set.as_ref(),
            ScalarFamily::Alternating { .. } => None,
        }
    }

    /// sup over n and s of |f_n(s)|, by envelope.
    fn uniform_bound(&self) -> Result<f64> {
        match self {
            ScalarFamily::Geometric { base, delta, .. } => {
                Ok(base.sup_abs() + delta.sup_abs())
            }
            ScalarFamily::Alternating { a, b } => Ok(a.sup_abs().max(b.sup_abs())),
        }
    }
}

fn split_by_bad_set(
    delta: &GroundFunction,
    bad_set: &Option<MeasurableSet>,
) -> Result<(GroundFunction, GroundFunction)> {
    match bad_set {
        None => Ok((delta.clone(), GroundFunction::zero(delta.space()))),
        Some(bad) => Ok((delta.restrict(&bad.complement())?, delta.restrict(bad)?)),
    }
}

fn scalar_pointwise_min(a: &GroundFunction, b: &GroundFunction) -> Result<GroundFunction> {
    match (a.values(), b.values()) {
        (Some(x), Some(y)) => {
            GroundFunction::finite(x.iter().zip(y).map(|(p, q)| p.min(*q)).collect())
        }
        _ => Err(Error::Unsupported("pointwise minima require a finite space".into())),
    }
}

/// A sequence of interval-valued functions in closed form.
#[derive(Debug, Clone)]
pub enum IvFamily {
    /// `H_n = base (+/-) ratio^n * delta`; decreasing towards `base` from
    /// above, or increasing towards it from below.
    Geometric { base: IvFunction, delta: IvFunction, ratio: f64, increasing: bool },
    Alternating { a: IvFunction, b: IvFunction },
}

impl IvFamily {
    pub fn space(&self) -> GroundSpace {
        match self {
            IvFamily::Geometric { base, .. } => base.space(),
            IvFamily::Alternating { a, .. } => a.space(),
        }
    }

    pub fn term(&self, n: u32) -> Result<IvFunction> {
        match self {
            IvFamily::Geometric { base, delta, ratio, increasing } => {
                let r = ratio.powi(n as i32);
                let sign = if *increasing { -r } else { r };
                IvFunction::new(
                    base.h1().add(&delta.h1().scale(sign))?,
                    base.h2().add(&delta.h2().scale(sign))?,
                )
            }
            IvFamily::Alternating { a, b } => Ok(if n % 2 == 0 { a.clone() } else { b.clone() }),
        }
    }

    pub fn limit(&self) -> Result<IvFunction> {
        match self {
            IvFamily::Geometric { base, .. } => Ok(base.clone()),
            IvFamily::Alternating { a, b } => {
                if a == b {
                    Ok(a.clone())
                } else {
                    Err(Error::Invalid("alternating family has no limit".into()))
                }
            }
        }
    }

    /// Pointwise limit inferior, componentwise.
    pub fn liminf(&self) -> Result<IvFunction> {
        match self {
            IvFamily::Geometric { base, .. } => Ok(base.clone()),
            IvFamily::Alternating { a, b } => a.meet(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Verdict {
    Pass,
    Fail(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub mode: String,
    /// Hypothesis name -> status with rationale.
    pub hypotheses: BTreeMap<String, String>,
    /// Per-term distances d_n (absolute difference or Hausdorff distance).
    pub distances: Vec<f64>,
    /// Per-term theorem bounds, where the mode provides them.
    pub bounds: Option<Vec<f64>>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub lhs_interval: Option<Interval>,
    pub rhs_interval: Option<Interval>,
    pub verdict: Verdict,
    /// Some hypothesis failed; the run is reported for exploration only.
    pub exploratory: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceConfig {
    pub n_terms: u32,
    pub tolerance: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig { n_terms: 30, tolerance: 1e-8 }
    }
}

/// The convergence scenarios the harness can run.
#[derive(Debug, Clone)]
pub enum ConvergenceScenario {
    /// Uniform convergence of integrable functions.
    Uniform { family: ScalarFamily, nu: SetFunction },
    /// Convergence in semivariation measure of uniformly bounded functions.
    InMeasure { family: ScalarFamily, nu: SetFunction },
    /// Almost-everywhere convergence under monotone `nu` and condition (E).
    AlmostEverywhere { family: ScalarFamily, nu: SetFunction },
    /// p-norm convergence of the differences.
    PNorm { family: ScalarFamily, nu: SetFunction, p: f64 },
    /// Scalar Fatou inequality.
    Fatou { family: ScalarFamily, nu: SetFunction },
    /// Interval Fatou inequality against a scalar monotone set function.
    IvFatou { family: IvFamily, nu: SetFunction },
    /// Monotone convergence: the integral of the supremum equals the
    /// supremum of the integrals.
    Monotone { family: IvFamily, gamma: IvSetFunction },
    /// Increasing multisubmeasures `(1 - shrink^n) Gamma` setwise
    /// converging to `Gamma`.
    SetwiseVarying { family: IvFamily, gamma: IvSetFunction, shrink: f64 },
    /// Convergence on an atom, with the per-term distance bound.
    Atom { family: IvFamily, gamma: IvSetFunction, atom: MeasurableSet },
}

fn hyp_finite_variation(nu: &SetFunction, hyp: &mut BTreeMap<String, String>) -> bool {
    let full = MeasurableSet::full(nu.space());
    match nu.variation(&full) {
        Ok(v) if v.is_finite() => {
            hyp.insert("finite_variation".into(), format!("holds (variation {v})"));
            true
        }
        Ok(_) => {
            hyp.insert("finite_variation".into(), "fails (infinite variation)".into());
            false
        }
        Err(_) => {
            hyp.insert("finite_variation".into(), "not decidable".into());
            false
        }
    }
}

fn hyp_condition_e(space: GroundSpace, hyp: &mut BTreeMap<String, String>) -> bool {
    match space {
        GroundSpace::Finite(_) => {
            hyp.insert(
                "condition_E".into(),
                "holds (finite-space stabilization of decreasing sequences)".into(),
            );
            true
        }
        GroundSpace::CountableNat => {
            hyp.insert("condition_E".into(), "not certified on the countable space".into());
            false
        }
    }
}

fn hyp_monotone(nu: &SetFunction, hyp: &mut BTreeMap<String, String>) -> bool {
    let ok = nu.classify().monotone.is_holds();
    hyp.insert(
        "nu_monotone".into(),
        if ok { "holds".into() } else { "fails".to_string() },
    );
    ok
}

fn limit_verdict(distances: &[f64], tolerance: f64) -> Verdict {
    let n = distances.len();
    if n == 0 {
        return Verdict::Fail("no terms computed".into());
    }
    let last = distances[n - 1];
    if last > tolerance {
        return Verdict::Fail(format!("d_N = {last} exceeds tolerance {tolerance}"));
    }
    let tail = &distances[n.saturating_sub(5)..];
    for w in tail.windows(2) {
        if w[1] > w[0] + 1e-15 {
            return Verdict::Fail(format!(
                "distances increase near the end ({} -> {})",
                w[0], w[1]
            ));
        }
    }
    Verdict::Pass
}

/// Runs one convergence scenario and reports distances, hypothesis status
/// and the verdict. Re-running the same scenario reproduces the distance
/// sequence bit for bit; everything here is pure.
pub fn run_convergence(
    scenario: &ConvergenceScenario,
    cfg: &ConvergenceConfig,
) -> Result<ConvergenceReport> {
    match scenario {
        ConvergenceScenario::Uniform { family, nu } => {
            scalar_limit_mode("uniform", family, nu, cfg, |hyp| {
                let fv = hyp_finite_variation(nu, hyp);
                hyp.insert(
                    "uniform_convergence".into(),
                    match family {
                        ScalarFamily::Geometric { bad_set: None, .. } => {
                            "holds (geometric envelope)".into()
                        }
                        _ => "fails (family does not converge uniformly)".to_string(),
                    },
                );
                fv && matches!(family, ScalarFamily::Geometric { bad_set: None, .. })
            })
        }
        ConvergenceScenario::InMeasure { family, nu } => {
            if let Some(bad) = family.bad_set() {
                let sv = nu.semivariation(bad)?;
                if sv != 0.0 {
                    return Err(Error::HypothesisViolated {
                        name: "convergence_in_semivariation".into(),
                        detail: format!("bad set {bad} has semivariation {sv}"),
                    });
                }
            }
            scalar_limit_mode("in_measure", family, nu, cfg, |hyp| {
                let bound = family.uniform_bound().unwrap_or(f64::INFINITY);
                hyp.insert(
                    "uniformly_bounded".into(),
                    format!("holds (envelope {bound})"),
                );
                let fv = hyp_finite_variation(nu, hyp);
                hyp.insert(
                    "convergence_in_semivariation".into(),
                    "holds (deviation sets are eventually null)".into(),
                );
                fv && bound.is_finite()
            })
        }
        ConvergenceScenario::AlmostEverywhere { family, nu } => {
            if let Some(bad) = family.bad_set() {
                let sv = nu.semivariation(bad)?;
                if sv != 0.0 {
                    return Err(Error::HypothesisViolated {
                        name: "ae_convergence".into(),
                        detail: format!("bad set {bad} has semivariation {sv}"),
                    });
                }
            }
            scalar_limit_mode("almost_everywhere", family, nu, cfg, |hyp| {
                let m = hyp_monotone(nu, hyp);
                let e = hyp_condition_e(nu.space(), hyp);
                let fv = hyp_finite_variation(nu, hyp);
                hyp.insert(
                    "ae_convergence".into(),
                    "holds (divergence set has semivariation zero)".into(),
                );
                m && e && fv
            })
        }
        ConvergenceScenario::PNorm { family, nu, p } => {
            let mut hyp = BTreeMap::new();
            let subadd = nu.classify().get(Property::SigmaSubadditive).is_holds();
            hyp.insert(
                "countably_subadditive".into(),
                if subadd { "holds".into() } else { "fails".to_string() },
            );
            let limit = family.limit()?;
            let mut distances = Vec::with_capacity(cfg.n_terms as usize);
            for n in 1..=cfg.n_terms {
                let diff = family.term(n)?.sub(&limit)?;
                distances.push(seminorm_p(&diff, nu, *p)?);
            }
            let verdict = limit_verdict(&distances, cfg.tolerance);
            Ok(ConvergenceReport {
                mode: "p_norm".into(),
                hypotheses: hyp,
                distances,
                bounds: None,
                lhs: None,
                rhs: None,
                lhs_interval: None,
                rhs_interval: None,
                verdict,
                exploratory: !subadd,
            })
        }
        ConvergenceScenario::Fatou { family, nu } => {
            let mut hyp = BTreeMap::new();
            let m = hyp_monotone(nu, &mut hyp);
            let fv = hyp_finite_variation(nu, &mut hyp);
            let e = hyp_condition_e(nu.space(), &mut hyp);
            let bound = family.uniform_bound()?;
            hyp.insert("uniformly_bounded".into(), format!("holds (envelope {bound})"));
            let full = MeasurableSet::full(family.space());
            let liminf = family.liminf()?;
            let lhs = rl_integrate(&liminf, nu, &full)?.value_or_err()?;
            let rhs = family.integral_limit(nu)?;
            let mut distances = Vec::with_capacity(cfg.n_terms as usize);
            for n in 1..=cfg.n_terms {
                let v = rl_integrate(&family.term(n)?, nu, &full)?.value_or_err()?;
                distances.push((v - rhs).abs());
            }
            let verdict = if lhs <= rhs + INEQ_TOL {
                Verdict::Pass
            } else {
                Verdict::Fail(format!("Fatou inequality violated: {lhs} > {rhs}"))
            };
            Ok(ConvergenceReport {
                mode: "fatou".into(),
                hypotheses: hyp,
                distances,
                bounds: None,
                lhs: Some(lhs),
                rhs: Some(rhs),
                lhs_interval: None,
                rhs_interval: None,
                verdict,
                exploratory: !(m && fv && e),
            })
        }
        ConvergenceScenario::IvFatou { family, nu } => {
            let mut hyp = BTreeMap::new();
            let m = hyp_monotone(nu, &mut hyp);
            let fv = hyp_finite_variation(nu, &mut hyp);
            let e = hyp_condition_e(nu.space(), &mut hyp);
            let gamma = IvSetFunction::degenerate(nu.clone());
            let full = MeasurableSet::full(family.space());
            let liminf = family.liminf()?;
            let lhs = iv_rl_integrate(&liminf, &gamma, &full)?.value;
            // componentwise liminf of the integral sequence
            let rhs = match family {
                IvFamily::Geometric { base, .. } => iv_rl_integrate(base, &gamma, &full)?.value,
                IvFamily::Alternating { a, b } => {
                    let ia = iv_rl_integrate(a, &gamma, &full)?.value;
                    let ib = iv_rl_integrate(b, &gamma, &full)?.value;
                    ia.meet(&ib)
                }
            };
            let mut distances = Vec::with_capacity(cfg.n_terms as usize);
            for n in 1..=cfg.n_terms {
                let v = iv_rl_integrate(&family.term(n)?, &gamma, &full)?.value;
                distances.push(v.hausdorff(&rhs));
            }
            let verdict = if lhs.lo() <= rhs.lo() + INEQ_TOL && lhs.hi() <= rhs.hi() + INEQ_TOL {
                Verdict::Pass
            } else {
                Verdict::Fail(format!("interval Fatou violated: {lhs} vs {rhs}"))
            };
            Ok(ConvergenceReport {
                mode: "iv_fatou".into(),
                hypotheses: hyp,
                distances,
                bounds: None,
                lhs: None,
                rhs: None,
                lhs_interval: Some(lhs),
                rhs_interval: Some(rhs),
                verdict,
                exploratory: !(m && fv && e),
            })
        }
        ConvergenceScenario::Monotone { family, gamma } => {
            let mut hyp = BTreeMap::new();
            hyp.insert(
                "gamma_multisubmeasure".into(),
                if gamma.is_multisubmeasure() { "holds".into() } else { "fails".to_string() },
            );
            let increasing = matches!(family, IvFamily::Geometric { increasing: true, .. });
            hyp.insert(
                "terms_increasing".into(),
                if increasing { "holds (family increases to its limit)".into() } else {
                    "fails (family is not increasing)".to_string()
                },
            );
            let full = MeasurableSet::full(family.space());
            let sup_fn = family.limit()?;
            let lhs = iv_rl_integrate(&sup_fn, gamma, &full)?.value;
            // the supremum of the integrals is the limit of the increasing
            // sequence, which is the integral of the limit by endpoint
            // linearity; verify the computed terms increase towards it
            let rhs = iv_rl_integrate(&sup_fn, gamma, &full)?.value;
            let mut distances = Vec::with_capacity(cfg.n_terms as usize);
            let mut prev: Option<Interval> = None;
            let mut monotone_ok = true;
            for n in 1..=cfg.n_terms {
                let v = iv_rl_integrate(&family.term(n)?, gamma, &full)?.value;
                if let Some(p) = prev {
                    monotone_ok &= p.lo() <= v.lo() + 1e-15 && p.hi() <= v.hi() + 1e-15;
                }
                monotone_ok &= v.leq(&lhs) || v.hausdorff(&lhs) <= 1e-12;
                distances.push(v.hausdorff(&lhs));
                prev = Some(v);
            }
            let exact = lhs.lo() == rhs.lo() && lhs.hi() == rhs.hi();
            let verdict = if exact && monotone_ok {
                Verdict::Pass
            } else if !monotone_ok {
                Verdict::Fail("integral sequence is not increasing towards the supremum".into())
            } else {
                Verdict::Fail(format!("sup identity violated: {lhs} vs {rhs}"))
            };
            Ok(ConvergenceReport {
                mode: "monotone".into(),
                hypotheses: hyp,
                distances,
                bounds: None,
                lhs: None,
                rhs: None,
                lhs_interval: Some(lhs),
                rhs_interval: Some(rhs),
                verdict,
                exploratory: !increasing,
            })
        }
        ConvergenceScenario::SetwiseVarying { family, gamma, shrink } => {
            if !(0.0 < *shrink && *shrink < 1.0) {
                return Err(Error::Invalid(format!(
                    "shrink ratio must be in (0,1), got {shrink}"
                )));
            }
            let mut hyp = BTreeMap::new();
            hyp.insert(
                "gamma_multisubmeasure".into(),
                if gamma.is_multisubmeasure() { "holds".into() } else { "fails".to_string() },
            );
            hyp.insert(
                "gamma_n_increasing_to_gamma".into(),
                "holds (scaling factors 1 - shrink^n increase to 1)".into(),
            );
            let full = MeasurableSet::full(family.space());
            let (_, var_hi) = gamma.variation_bounds(&full)?;
            hyp.insert(
                "setwise_convergence".into(),
                format!("holds (variation distance shrink^n * {var_hi} tends to 0)"),
            );
            let h_limit = family.limit()?;
            let target = iv_rl_integrate(&h_limit, gamma, &full)?.value;
            let mut distances = Vec::with_capacity(cfg.n_terms as usize);
            for n in 1..=cfg.n_terms {
                let gamma_n = gamma.scale(1.0 - shrink.powi(n as i32))?;
                let v = iv_rl_integrate(&family.term(n)?, &gamma_n, &full)?.value;
                distances.push(v.hausdorff(&target));
            }
            let verdict = limit_verdict(&distances, cfg.tolerance);
            Ok(ConvergenceReport {
                mode: "setwise_varying".into(),
                hypotheses: hyp,
                distances,
                bounds: None,
                lhs: None,
                rhs: None,
                lhs_interval: Some(target),
                rhs_interval: None,
                verdict,
                exploratory: false,
            })
        }
        ConvergenceScenario::Atom { family, gamma, atom } => {
            let h_limit = family.limit()?;
            let atom_report = iv_atom_integral(&h_limit, gamma, atom)?;
            let b = atom_report.point;
            let mut hyp = BTreeMap::new();
            for (k, v) in &atom_report.hypotheses {
                hyp.insert(k.clone(), v.clone());
            }
            hyp.insert("atom_point".into(), format!("b = {b}"));
            let var_hi = gamma.nu2().variation(atom)?;
            let target = iv_rl_integrate(&h_limit, gamma, atom)?.value;
            let mut distances = Vec::with_capacity(cfg.n_terms as usize);
            let mut bounds = Vec::with_capacity(cfg.n_terms as usize);
            let mut bound_ok = true;
            for n in 1..=cfg.n_terms {
                let hn = family.term(n)?;
                let v = iv_rl_integrate(&hn, gamma, atom)?.value;
                let d = v.hausdorff(&target);
                let bound = hn.eval(b).hausdorff(&h_limit.eval(b)) * var_hi;
                bound_ok &= d <= bound + INEQ_TOL;
                distances.push(d);
                bounds.push(bound);
            }
            let last = *distances.last().unwrap_or(&f64::NAN);
            let verdict = if !bound_ok {
                Verdict::Fail("per-term atom bound violated".into())
            } else if last > cfg.tolerance {
                Verdict::Fail(format!("d_N = {last} exceeds tolerance {}", cfg.tolerance))
            } else {
                Verdict::Pass
            };
            Ok(ConvergenceReport {
                mode: "atom".into(),
                hypotheses: hyp,
                distances,
                bounds: Some(bounds),
                lhs: None,
                rhs: None,
                lhs_interval: Some(target),
                rhs_interval: None,
                verdict,
                exploratory: false,
            })
        }
    }
}

fn scalar_limit_mode(
    mode: &str,
    family: &ScalarFamily,
    nu: &SetFunction,
    cfg: &ConvergenceConfig,
    mut set_hypotheses: impl FnMut(&mut BTreeMap<String, String>) -> bool,
) -> Result<ConvergenceReport> {
    let mut hyp = BTreeMap::new();
    let applicable = set_hypotheses(&mut hyp);
    let full = MeasurableSet::full(family.space());
    let target = family.integral_limit(nu)?;
    let mut distances = Vec::with_capacity(cfg.n_terms as usize);
    for n in 1..=cfg.n_terms {
        let v = rl_integrate(&family.term(n)?, nu, &full)?.value_or_err()?;
        distances.push((v - target).abs());
    }
    let verdict = limit_verdict(&distances, cfg.tolerance);
    Ok(ConvergenceReport {
        mode: mode.into(),
        hypotheses: hyp,
        distances,
        bounds: None,
        lhs: None,
        rhs: None,
        lhs_interval: None,
        rhs_interval: None,
        verdict,
        exploratory: !applicable,
    })
}
