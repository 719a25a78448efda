//! Seeded suites for the interval-valued layer: endpoint decomposition,
//! homogeneity and Minkowski additivity, the order/inclusion relations,
//! and the operator checks, on random finite instances.

mod common;

use common::*;

use nonadd::func::GroundFunction;
use nonadd::ground::{GroundSpace, MeasurableSet};
use nonadd::interval::Interval;
use nonadd::iv_integral::{
    iv_indefinite, iv_monotonicity_suite, iv_rl_integrate, IvFunction, IvSetFunction,
};
use nonadd::setfunc::SetFunction;
use rand_chacha::ChaCha8Rng;

fn random_iv_setfunction(rng: &mut ChaCha8Rng, n: u32) -> IvSetFunction {
    let nu1 = random_table(rng, n);
    // dominate pointwise by adding a nonnegative table
    let bump = random_table(rng, n);
    let nu2 = SetFunction::sum(vec![nu1.clone(), bump]).unwrap();
    IvSetFunction::new(nu1, nu2).unwrap()
}

fn random_iv_function(rng: &mut ChaCha8Rng, n: u32, scale: f64) -> IvFunction {
    let h1 = random_nonneg_function(rng, n, scale);
    let h2 = h1.add(&random_nonneg_function(rng, n, scale)).unwrap();
    IvFunction::new(h1, h2).unwrap()
}

#[test]
fn endpoint_decomposition_cross_check() {
    let mut rng = rng(0xdeca);
    for case in 0..400 {
        let n = 2 + (case % 7) as u32;
        let gamma = random_iv_setfunction(&mut rng, n);
        let h = random_iv_function(&mut rng, n, 2.0);
        let e_mask: u64 = rand::Rng::gen_range(&mut rng, 0..(1u64 << n));
        let e = MeasurableSet::finite_from_mask(n, e_mask).unwrap();
        let r = iv_rl_integrate(&h, &gamma, &e).unwrap();
        // the direct Minkowski fold agreed within 1e-12 or the call errors
        assert!(r.cross_check.unwrap() <= 1e-12, "case {case}");
    }
}

#[test]
fn homogeneity_and_minkowski_additivity() {
    let mut rng = rng(0x0a0);
    for case in 0..300 {
        let n = 2 + (case % 6) as u32;
        let gamma = random_iv_setfunction(&mut rng, n);
        let h1 = random_iv_function(&mut rng, n, 2.0);
        let h2 = random_iv_function(&mut rng, n, 2.0);
        let alpha = dyadic(&mut rng, 3.0);
        let full = MeasurableSet::full(GroundSpace::Finite(n));

        // scaling the multifunction
        let lhs = iv_rl_integrate(&h1.scale(alpha).unwrap(), &gamma, &full).unwrap().value;
        let rhs = iv_rl_integrate(&h1, &gamma, &full).unwrap().value.scale(alpha).unwrap();
        assert!(lhs.hausdorff(&rhs) <= 1e-12, "H homogeneity case {case}");

        // scaling the multisubmeasure
        let lhs = iv_rl_integrate(&h1, &gamma.scale(alpha).unwrap(), &full).unwrap().value;
        assert!(lhs.hausdorff(&rhs) <= 1e-12, "Gamma homogeneity case {case}");

        // Minkowski additivity in the multifunction
        let sum = h1.add(&h2).unwrap();
        let lhs = iv_rl_integrate(&sum, &gamma, &full).unwrap().value;
        let rhs = iv_rl_integrate(&h1, &gamma, &full)
            .unwrap()
            .value
            .add(&iv_rl_integrate(&h2, &gamma, &full).unwrap().value);
        assert!(lhs.hausdorff(&rhs) <= 1e-12, "H additivity case {case}");
    }
}

#[test]
fn operator_is_additive_even_for_wild_gamma() {
    let mut rng = rng(0x7ab1e);
    for case in 0..150 {
        let n = 2 + (case % 5) as u32;
        let gamma = random_iv_setfunction(&mut rng, n);
        let h = random_iv_function(&mut rng, n, 2.0);
        let rep = iv_indefinite(&h, &gamma).unwrap();
        assert!(rep.finitely_additive.holds, "case {case}: {:?}", rep.finitely_additive);
        assert!(rep.norm_identity.holds, "case {case}");
        assert!(rep.variation_identity.holds, "case {case}");
    }
}

#[test]
fn order_suite_has_no_violations_on_ordered_instances() {
    let mut rng = rng(0x0c0);
    for case in 0..200 {
        let n = 2 + (case % 5) as u32;
        let g = random_iv_function(&mut rng, n, 1.5);
        // h dominates g pointwise in the weak order
        let h = IvFunction::new(
            g.h1().add(&random_nonneg_function(&mut rng, n, 1.0)).unwrap(),
            g.h2().add(&random_nonneg_function(&mut rng, n, 1.0)).unwrap(),
        );
        let h = match h {
            Ok(h) if g.le_pointwise(&h).unwrap() => h,
            _ => continue,
        };
        let gamma1 = random_iv_setfunction(&mut rng, n);
        let gamma2 = gamma1.scale(1.0 + dyadic(&mut rng, 1.0)).unwrap();
        let gamma = gamma1.add(&gamma2).unwrap();
        let report = iv_monotonicity_suite(&g, &h, &gamma, &gamma1, &gamma2).unwrap();
        assert!(report.hypotheses["g_le_h_pointwise"]);
        assert!(report.hypotheses["gamma1_le_gamma2_setwise"]);
        assert!(report.all_applicable_hold(), "case {case}: {:#?}", report.rows);
    }
}

#[test]
fn inclusion_monotonicity_via_nested_instances() {
    let mut rng = rng(0x1c1);
    for case in 0..200 {
        let n = 2 + (case % 5) as u32;
        // G(s) inside H(s): widen both ends
        let g = random_iv_function(&mut rng, n, 1.5);
        let shrink = random_nonneg_function(&mut rng, n, 1.0);
        let widen = random_nonneg_function(&mut rng, n, 1.0);
        let h1 = match g.h1().sub(&shrink) {
            Ok(f) if f.is_nonneg() => f,
            _ => continue,
        };
        let h = IvFunction::new(h1, g.h2().add(&widen).unwrap()).unwrap();
        assert!(g.subset_pointwise(&h).unwrap());

        let gamma = random_iv_setfunction(&mut rng, n);
        let full = MeasurableSet::full(GroundSpace::Finite(n));
        let tg = iv_rl_integrate(&g, &gamma, &full).unwrap().value;
        let th = iv_rl_integrate(&h, &gamma, &full).unwrap().value;
        assert!(tg.subset(&th), "case {case}: {tg} not within {th}");
    }
}

#[test]
fn distance_bound_between_integrals() {
    let mut rng = rng(0xd157);
    for case in 0..300 {
        let n = 2 + (case % 6) as u32;
        let g = random_iv_function(&mut rng, n, 2.0);
        let h = random_iv_function(&mut rng, n, 2.0);
        let gamma = random_iv_setfunction(&mut rng, n);
        let full = MeasurableSet::full(GroundSpace::Finite(n));
        let d = iv_rl_integrate(&g, &gamma, &full)
            .unwrap()
            .value
            .hausdorff(&iv_rl_integrate(&h, &gamma, &full).unwrap().value);
        let bound = g.uniform_distance(&h).unwrap() * gamma.nu2().variation(&full).unwrap();
        assert!(d <= bound + 1e-12, "case {case}: {d} > {bound}");
    }
}

#[test]
fn degenerate_interval_instances_reduce_to_scalars() {
    let mut rng = rng(0xde9);
    for _ in 0..50 {
        let n = 3;
        let nu = random_table(&mut rng, n);
        let f = random_nonneg_function(&mut rng, n, 2.0);
        let gamma = IvSetFunction::degenerate(nu.clone());
        let h = IvFunction::degenerate(f.clone()).unwrap();
        let full = MeasurableSet::full(GroundSpace::Finite(n));
        let iv = iv_rl_integrate(&h, &gamma, &full).unwrap().value;
        let scalar =
            nonadd::rl_integral::rl_integrate(&f, &nu, &full).unwrap().value_or_err().unwrap();
        assert_eq!(iv, Interval::new(scalar, scalar).unwrap());
    }
}
