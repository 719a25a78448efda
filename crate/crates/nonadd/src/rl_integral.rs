//! Scalar integration against non-additive set functions: the
//! Riemann-Lebesgue integral, the Gould integral over finite partitions,
//! the Birkhoff-simple integral, the indefinite integral operator, and the
//! comparison harness.
//!
//! On both supported spaces the refinement order of representable
//! partitions has a maximum (the all-singletons partition), so the
//! Riemann-Lebesgue value is the singleton series, evaluated in closed
//! form. The Gould integral genuinely explores finite partitions: it runs a
//! divergence probe (splitting into ever more infinite residue blocks) and
//! a convergence probe (peeling singletons off the front) and reports what
//! the tag-sum ranges do.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::{GroundFunction, SeriesSum};
use crate::ground::{EpSet, GroundSpace, MeasurableSet};
use crate::partition::{refine_stream, Partition, RefineStrategy};
use crate::setfunc::SetFunction;

/// One step of a refinement trace: the tag-sum range of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub partition_index: usize,
    pub block_count: usize,
    pub sum_lo: f64,
    pub sum_hi: f64,
}

/// A concrete tagged partition with its evaluated sum; witnesses stay
/// re-checkable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessPartition {
    pub blocks: Vec<MeasurableSet>,
    pub tags: Vec<u64>,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum NonIntegrability {
    /// The singleton series fails absolute convergence.
    SeriesDiverges { partial_sums: Vec<f64> },
    /// Two explored tagged partitions keep their sums apart.
    SeparatedSums { a: WitnessPartition, b: WitnessPartition, separation: f64 },
    /// The probes neither settled nor separated within the budget.
    BudgetExhausted { explored: usize, last_width: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum IntegralStatus {
    /// Closed-form value on a finite space or a countable singleton series.
    Exact,
    Converged { achieved: f64 },
    /// Sums grow without bound along the witness chain.
    Diverged { chain: Vec<WitnessPartition> },
    NotIntegrable { witness: NonIntegrability },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralReport {
    pub value: Option<f64>,
    pub status: IntegralStatus,
    pub trace: Vec<TraceRow>,
}

impl IntegralReport {
    pub fn value_or_err(&self) -> Result<f64> {
        match (&self.status, self.value) {
            (IntegralStatus::Exact | IntegralStatus::Converged { .. }, Some(v)) => Ok(v),
            (IntegralStatus::Diverged { .. }, _) => {
                Err(Error::SeriesDiverges("integral diverges".into()))
            }
            (IntegralStatus::NotIntegrable { .. }, _) => {
                Err(Error::SeriesDiverges("function is not integrable".into()))
            }
            _ => Err(Error::Invalid("integral report carries no value".into())),
        }
    }

    fn exact(value: f64, trace: Vec<TraceRow>) -> IntegralReport {
        IntegralReport { value: Some(value), status: IntegralStatus::Exact, trace }
    }
}

/// Budgets and tolerances for the Gould net exploration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GouldConfig {
    /// Maximum partitions per probe chain.
    pub budget: usize,
    /// Range width below which the net counts as converged.
    pub tolerance: f64,
    /// Minimum per-step increment that counts towards divergence.
    pub divergence_delta: f64,
    /// Consecutive qualifying increments required to declare divergence.
    pub divergence_run: usize,
}

impl Default for GouldConfig {
    fn default() -> Self {
        GouldConfig { budget: 64, tolerance: 1e-9, divergence_delta: 0.5, divergence_run: 5 }
    }
}

fn check_spaces(f: &GroundFunction, nu: &SetFunction, set: Option<&MeasurableSet>) -> Result<()> {
    if f.space() != nu.space() {
        return Err(Error::SpaceMismatch);
    }
    if let Some(s) = set {
        if s.space() != f.space() {
            return Err(Error::NotInAlgebra(format!("set {s} is outside the integrand's space")));
        }
    }
    Ok(())
}

/// The Riemann-Lebesgue integral of `f` over `set` with respect to `nu`.
///
/// The all-singletons partition is the maximum of the refinement order, so
/// the integral exists exactly when the singleton series converges
/// absolutely, and then equals it. Restriction goes through `f * chi_E`
/// so that integrating over `set` and integrating the masked function over
/// the whole space run through identical arithmetic.
pub fn rl_integrate(
    f: &GroundFunction,
    nu: &SetFunction,
    set: &MeasurableSet,
) -> Result<IntegralReport> {
    check_spaces(f, nu, Some(set))?;
    let space = f.space();
    let weights = nu.singleton_weights()?;
    let masked = f.restrict(set)?;
    let series = masked.mul(&weights)?;
    let full = MeasurableSet::full(space);
    match series.sum_over(&full)? {
        SeriesSum::Convergent(v) => {
            let block_count = match space {
                GroundSpace::Finite(n) => n as usize,
                GroundSpace::CountableNat => usize::MAX,
            };
            let trace = vec![TraceRow {
                partition_index: 0,
                block_count: block_count.min(u32::MAX as usize),
                sum_lo: v,
                sum_hi: v,
            }];
            Ok(IntegralReport::exact(v, trace))
        }
        SeriesSum::Divergent { partial_sums } => Ok(IntegralReport {
            value: None,
            status: IntegralStatus::NotIntegrable {
                witness: NonIntegrability::SeriesDiverges { partial_sums },
            },
            trace: vec![],
        }),
    }
}

/// Exact tagged sum of a partition: tagged explicit blocks plus the exact
/// series over the singleton-tail region.
pub fn sigma_sum(
    blocks: &[MeasurableSet],
    tags: &[u64],
    tail: Option<&MeasurableSet>,
    f: &GroundFunction,
    nu: &SetFunction,
) -> Result<f64> {
    if blocks.len() != tags.len() {
        return Err(Error::Invalid("one tag per block required".into()));
    }
    let mut total = 0.0;
    for (b, t) in blocks.iter().zip(tags) {
        if !b.contains(*t) {
            return Err(Error::Invalid(format!("tag {t} outside its block {b}")));
        }
        total += f.eval(*t) * nu.evaluate(b)?;
    }
    if let Some(region) = tail {
        let weights = nu.singleton_weights()?;
        match f.restrict(region)?.mul(&weights)?.sum_over(&MeasurableSet::full(f.space()))? {
            SeriesSum::Convergent(v) => total += v,
            SeriesSum::Divergent { partial_sums } => {
                return Err(Error::SeriesDiverges(format!(
                    "singleton-tail series diverges (partial sums start {:?})",
                    &partial_sums[..partial_sums.len().min(4)]
                )))
            }
        }
    }
    Ok(total)
}

/// Range of tagged sums over all tag choices: blocks contribute
/// `[inf_B f * nu(B), sup_B f * nu(B)]` independently.
fn tag_sum_range(p: &Partition, f: &GroundFunction, nu: &SetFunction) -> Result<(f64, f64)> {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for b in p.blocks() {
        let v = nu.evaluate(b)?;
        if v == 0.0 {
            // blocks of measure zero contribute nothing for any tag
            continue;
        }
        let bounds = f.extrema_on(b)?;
        lo += bounds.inf.value * v;
        hi += bounds.sup.value * v;
    }
    if let Some(region) = p.singleton_tail() {
        let weights = nu.singleton_weights()?;
        match f.restrict(region)?.mul(&weights)?.sum_over(&MeasurableSet::full(f.space()))? {
            SeriesSum::Convergent(v) => {
                lo += v;
                hi += v;
            }
            SeriesSum::Divergent { partial_sums } => {
                return Err(Error::SeriesDiverges(format!(
                    "singleton-tail series diverges (partial sums start {:?})",
                    &partial_sums[..partial_sums.len().min(4)]
                )))
            }
        }
    }
    Ok((lo, hi))
}

/// A tag in `block` whose value is as close as scanning permits to
/// `target` (an extremum of `f` on the block, possibly unattained).
fn tag_near(f: &GroundFunction, block: &MeasurableSet, target: f64) -> u64 {
    let candidates: Vec<u64> = match block {
        MeasurableSet::Finite { .. } => block.members().unwrap(),
        MeasurableSet::Nat(e) => {
            let mut pts: Vec<u64> = e.members_below(e.prefix_len() as u64).to_vec();
            let l = e.prefix_len() as u64;
            let p = e.period_len() as u64;
            for cycle in 0..64u64 {
                for i in 0..p {
                    let n = l + cycle * p + i;
                    if e.contains(n) {
                        pts.push(n);
                    }
                }
            }
            pts
        }
    };
    let mut best = (f64::INFINITY, block.min_element().expect("block is nonempty"));
    for pt in candidates {
        let d = (f.eval(pt) - target).abs();
        if d < best.0 {
            best = (d, pt);
        }
        if d == 0.0 {
            break;
        }
    }
    best.1
}

fn witness_for(p: &Partition, f: &GroundFunction, nu: &SetFunction, low_side: bool) -> Result<WitnessPartition> {
    let mut tags = Vec::with_capacity(p.blocks().len());
    for b in p.blocks() {
        let bounds = f.extrema_on(b)?;
        let target = if low_side { bounds.inf.value } else { bounds.sup.value };
        tags.push(tag_near(f, b, target));
    }
    let sum = sigma_sum(p.blocks(), &tags, p.singleton_tail(), f, nu)?;
    Ok(WitnessPartition { blocks: p.blocks().to_vec(), tags, sum })
}

/// Chain of finite partitions of the naturals with k infinite blocks at
/// step k: odds, then 2 mod 4, then 4 mod 8, ... with the final residue
/// class carrying the rest.
fn infinite_split_chain(len: usize) -> Result<Vec<Partition>> {
    let space = GroundSpace::CountableNat;
    let len = len.min(16);
    let mut chain = Vec::with_capacity(len);
    for k in 1..=len as u32 {
        let mut blocks = Vec::with_capacity(k as usize);
        for j in 1..k {
            blocks.push(MeasurableSet::nat(EpSet::progression(1 << (j - 1), 1 << j)?));
        }
        blocks.push(MeasurableSet::nat(EpSet::progression(0, 1 << (k - 1))?));
        chain.push(Partition::new(space, blocks)?);
    }
    Ok(chain)
}

/// The Gould integral of `f` over the whole space: the limit of tagged
/// sums over the net of finite partitions, explored within a budget.
pub fn gould_integrate(
    f: &GroundFunction,
    nu: &SetFunction,
    cfg: &GouldConfig,
) -> Result<IntegralReport> {
    check_spaces(f, nu, None)?;
    match f.space() {
        GroundSpace::Finite(_) => {
            // the net terminates at the singleton partition, so the Gould
            // integral equals the Riemann-Lebesgue value exactly
            let full = MeasurableSet::full(f.space());
            let rl = rl_integrate(f, nu, &full)?;
            let value = rl.value.expect("finite-space integral is exact");
            let chain = refine_stream(f.space(), RefineStrategy::SingletonFirst, cfg.budget)?;
            let mut trace = Vec::with_capacity(chain.len());
            for (i, p) in chain.iter().enumerate() {
                let (lo, hi) = tag_sum_range(p, f, nu)?;
                trace.push(TraceRow {
                    partition_index: i,
                    block_count: p.block_count(),
                    sum_lo: lo,
                    sum_hi: hi,
                });
            }
            Ok(IntegralReport { value: Some(value), status: IntegralStatus::Exact, trace })
        }
        GroundSpace::CountableNat => gould_nat(f, nu, cfg),
    }
}

fn gould_nat(f: &GroundFunction, nu: &SetFunction, cfg: &GouldConfig) -> Result<IntegralReport> {
    let mut trace = Vec::new();

    // divergence probe: ever more infinite residue-class blocks
    let split_chain = infinite_split_chain(cfg.budget)?;
    let mut split_lo = Vec::with_capacity(split_chain.len());
    for (i, p) in split_chain.iter().enumerate() {
        let (lo, hi) = tag_sum_range(p, f, nu)?;
        split_lo.push(lo);
        trace.push(TraceRow { partition_index: i, block_count: p.block_count(), sum_lo: lo, sum_hi: hi });
    }
    let mut run = 0usize;
    let mut diverged = false;
    for i in 1..split_lo.len() {
        if split_lo[i] - split_lo[i - 1] >= cfg.divergence_delta {
            run += 1;
            if run >= cfg.divergence_run {
                diverged = true;
            }
        } else {
            run = 0;
        }
    }
    if diverged {
        let mut chain = Vec::with_capacity(split_chain.len());
        for p in &split_chain {
            chain.push(witness_for(p, f, nu, true)?);
        }
        return Ok(IntegralReport {
            value: None,
            status: IntegralStatus::Diverged { chain },
            trace,
        });
    }

    // convergence probe: singleton-first finite partitions
    let chain = refine_stream(GroundSpace::CountableNat, RefineStrategy::SingletonFirst, cfg.budget)?;
    let mut widths = Vec::with_capacity(chain.len());
    let mut last = (0.0f64, 0.0f64);
    let mut converged_at = None;
    let base = trace.len();
    for (i, p) in chain.iter().enumerate() {
        let (lo, hi) = tag_sum_range(p, f, nu)?;
        widths.push(hi - lo);
        last = (lo, hi);
        trace.push(TraceRow {
            partition_index: base + i,
            block_count: p.block_count(),
            sum_lo: lo,
            sum_hi: hi,
        });
        if hi - lo <= cfg.tolerance {
            converged_at = Some(i);
            break;
        }
    }
    if let Some(i) = converged_at {
        let value = 0.5 * (last.0 + last.1);
        // the divergence probe must be consistent with the candidate value:
        // its final range has to admit sums near the candidate
        let (alo, ahi) = tag_sum_range(split_chain.last().unwrap(), f, nu)?;
        if value < alo - cfg.tolerance || value > ahi + cfg.tolerance {
            let a = witness_for(split_chain.last().unwrap(), f, nu, value < alo)?;
            let b = witness_for(&chain[i], f, nu, true)?;
            let separation = (a.sum - b.sum).abs();
            return Ok(IntegralReport {
                value: None,
                status: IntegralStatus::NotIntegrable {
                    witness: NonIntegrability::SeparatedSums { a, b, separation },
                },
                trace,
            });
        }
        return Ok(IntegralReport {
            value: Some(value),
            status: IntegralStatus::Converged { achieved: widths[i] },
            trace,
        });
    }

    // no convergence: separated sums if the width stagnates, otherwise an
    // explicit budget exhaustion
    let stagnated = widths.len() >= cfg.divergence_run + 1 && {
        let k = widths.len();
        (k - cfg.divergence_run..k).all(|i| widths[i] > 0.9 * widths[i - 1] && widths[i] > cfg.tolerance)
    };
    let witness = if stagnated {
        let p = chain.last().unwrap();
        let a = witness_for(p, f, nu, true)?;
        let b = witness_for(p, f, nu, false)?;
        let separation = (b.sum - a.sum).abs();
        NonIntegrability::SeparatedSums { a, b, separation }
    } else {
        NonIntegrability::BudgetExhausted {
            explored: chain.len() + split_chain.len(),
            last_width: *widths.last().unwrap_or(&f64::NAN),
        }
    };
    Ok(IntegralReport {
        value: None,
        status: IntegralStatus::NotIntegrable { witness },
        trace,
    })
}

/// The Birkhoff-simple integral: countable partitions with a
/// limsup-of-partial-sums acceptance, evaluated under the canonical
/// ascending enumeration of the singleton partition. Whenever the
/// Riemann-Lebesgue integral exists the two coincide.
pub fn birkhoff_simple_integrate(f: &GroundFunction, nu: &SetFunction) -> Result<IntegralReport> {
    check_spaces(f, nu, None)?;
    let full = MeasurableSet::full(f.space());
    rl_integrate(f, nu, &full)
}

/// The indefinite integral operator `E |-> integral of f over E`, as a set
/// function. Finitely additive by construction regardless of `nu`;
/// requires the per-point masses `f(s) nu({s})` to be nonnegative so the
/// result is again a set function.
pub fn indefinite_integral(f: &GroundFunction, nu: &SetFunction) -> Result<SetFunction> {
    check_spaces(f, nu, None)?;
    let weights = nu.singleton_weights()?;
    let masses = f.mul(&weights)?;
    if !masses.is_nonneg() {
        return Err(Error::Invalid(
            "indefinite integral needs nonnegative point masses f(s) * nu({s})".into(),
        ));
    }
    match f.space() {
        GroundSpace::Finite(n) => {
            // materialize as a table; same ascending summation as the
            // integrals themselves
            let full = (1u64 << n) - 1;
            let mut values = Vec::with_capacity(1 << n);
            for mask in 0..=full {
                let set = MeasurableSet::finite_from_mask(n, mask)?;
                match masses.sum_over(&set)? {
                    SeriesSum::Convergent(v) => values.push(v),
                    SeriesSum::Divergent { .. } => unreachable!("finite sums always converge"),
                }
            }
            SetFunction::table(GroundSpace::Finite(n), values)
        }
        GroundSpace::CountableNat => SetFunction::additive(masses),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub rl: IntegralReport,
    pub gould: IntegralReport,
    pub birkhoff: IntegralReport,
    /// All integrals that produced a value agree within the tolerance.
    pub agree: bool,
    pub tolerance: f64,
    pub disagreement: Option<String>,
}

/// Runs the three integrals over the whole space and compares values.
pub fn compare_integrals(
    f: &GroundFunction,
    nu: &SetFunction,
    cfg: &GouldConfig,
) -> Result<ComparisonReport> {
    let full = MeasurableSet::full(f.space());
    let rl = rl_integrate(f, nu, &full)?;
    let gould = gould_integrate(f, nu, cfg)?;
    let birkhoff = birkhoff_simple_integrate(f, nu)?;
    let mut values: Vec<(&str, f64)> = Vec::new();
    if let Some(v) = rl.value {
        values.push(("rl", v));
    }
    if let Some(v) = gould.value {
        values.push(("gould", v));
    }
    if let Some(v) = birkhoff.value {
        values.push(("birkhoff", v));
    }
    let statuses_integrable =
        [&rl, &gould, &birkhoff].iter().filter(|r| r.value.is_some()).count();
    let mut agree = statuses_integrable == 3;
    let mut disagreement = None;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if (values[i].1 - values[j].1).abs() > cfg.tolerance {
                agree = false;
                disagreement = Some(format!(
                    "{} = {} vs {} = {}",
                    values[i].0, values[i].1, values[j].0, values[j].1
                ));
            }
        }
    }
    if statuses_integrable < 3 && disagreement.is_none() {
        let name = if rl.value.is_none() {
            "rl"
        } else if gould.value.is_none() {
            "gould"
        } else {
            "birkhoff"
        };
        disagreement = Some(format!("{name} did not produce a value"));
    }
    Ok(ComparisonReport { rl, gould, birkhoff, agree, tolerance: cfg.tolerance, disagreement })
}
