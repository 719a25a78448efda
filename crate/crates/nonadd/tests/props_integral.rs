//! Seeded theorem-invariant suites for the scalar integral: linearity,
//! measure homogeneity/additivity, bounds, monotonicity, almost-everywhere
//! equality, restriction, and the indefinite-integral operator.

mod common;

use common::*;

use nonadd::func::GroundFunction;
use nonadd::ground::{GroundSpace, MeasurableSet};
use nonadd::rl_integral::{indefinite_integral, rl_integrate};
use nonadd::setfunc::SetFunction;

fn integral(f: &GroundFunction, nu: &SetFunction, e: &MeasurableSet) -> f64 {
    rl_integrate(f, nu, e).unwrap().value_or_err().unwrap()
}

#[test]
fn linearity_in_the_integrand() {
    let mut rng = rng(0x11eaf);
    for case in 0..300 {
        let n = 2 + (case % 7) as u32;
        let nu = random_table(&mut rng, n);
        let g = random_function(&mut rng, n, 2.0);
        let h = random_function(&mut rng, n, 2.0);
        let alpha = dyadic(&mut rng, 4.0) - 2.0;
        let beta = dyadic(&mut rng, 4.0) - 2.0;
        let full = MeasurableSet::full(GroundSpace::Finite(n));
        let combo = g.scale(alpha).add(&h.scale(beta)).unwrap();
        let lhs = integral(&combo, &nu, &full);
        let rhs = alpha * integral(&g, &nu, &full) + beta * integral(&h, &nu, &full);
        assert!((lhs - rhs).abs() <= 1e-12, "case {case}: {lhs} vs {rhs}");
    }
}

#[test]
fn homogeneity_and_additivity_in_the_measure() {
    let mut rng = rng(0x0e05);
    for case in 0..300 {
        let n = 2 + (case % 7) as u32;
        let nu1 = random_table(&mut rng, n);
        let nu2 = random_table(&mut rng, n);
        let f = random_function(&mut rng, n, 2.0);
        let alpha = dyadic(&mut rng, 3.0);
        let full = MeasurableSet::full(GroundSpace::Finite(n));

        let scaled = SetFunction::scaled(alpha, nu1.clone()).unwrap();
        let lhs = integral(&f, &scaled, &full);
        let rhs = alpha * integral(&f, &nu1, &full);
        assert!((lhs - rhs).abs() <= 1e-12, "homogeneity case {case}");

        let sum = SetFunction::sum(vec![nu1.clone(), nu2.clone()]).unwrap();
        let lhs = integral(&f, &sum, &full);
        let rhs = integral(&f, &nu1, &full) + integral(&f, &nu2, &full);
        assert!((lhs - rhs).abs() <= 1e-12, "measure additivity case {case}");
    }
}

#[test]
fn integral_bounded_by_sup_times_variation() {
    let mut rng = rng(0xb0b);
    for case in 0..300 {
        let n = 2 + (case % 7) as u32;
        let nu = random_table(&mut rng, n);
        let f = random_function(&mut rng, n, 2.0);
        let full = MeasurableSet::full(GroundSpace::Finite(n));
        let lhs = integral(&f, &nu, &full).abs();
        let rhs = f.sup_abs() * nu.variation(&full).unwrap();
        assert!(lhs <= rhs + 1e-12, "case {case}: {lhs} > {rhs}");
    }
}

#[test]
fn pointwise_monotonicity_in_integrand_and_measure() {
    let mut rng = rng(0x303);
    for case in 0..300 {
        let n = 2 + (case % 7) as u32;
        let nu = random_table(&mut rng, n);
        let g = random_function(&mut rng, n, 2.0);
        let bump = random_nonneg_function(&mut rng, n, 1.0);
        let h = g.add(&bump).unwrap();
        let full = MeasurableSet::full(GroundSpace::Finite(n));
        assert!(
            integral(&g, &nu, &full) <= integral(&h, &nu, &full) + 1e-12,
            "integrand monotonicity case {case}"
        );

        // nu2 dominates nu1 on singletons; nonnegative f preserves order
        let f = random_nonneg_function(&mut rng, n, 2.0);
        let w1 = nu.singleton_weights().unwrap();
        let w2 = w1.add(&random_nonneg_function(&mut rng, n, 0.5)).unwrap();
        let m1 = SetFunction::additive(w1).unwrap();
        let m2 = SetFunction::additive(w2).unwrap();
        assert!(
            integral(&f, &m1, &full) <= integral(&f, &m2, &full) + 1e-12,
            "measure monotonicity case {case}"
        );
    }
}

#[test]
fn ae_equal_functions_integrate_equally() {
    let mut rng = rng(0xae);
    for case in 0..200 {
        let n = 3 + (case % 5) as u32;
        // carve out a null region: all values vanish on subsets of `null`
        let null_mask: u64 = rand::Rng::gen_range(&mut rng, 0..(1u64 << n));
        let len = 1usize << n;
        let mut vals = vec![0.0f64; len];
        for (m, v) in vals.iter_mut().enumerate() {
            if m as u64 & !null_mask != 0 {
                *v = dyadic(&mut rng, 1.0);
            }
        }
        let nu = SetFunction::table(GroundSpace::finite(n).unwrap(), vals).unwrap();
        let null = MeasurableSet::finite_from_mask(n, null_mask).unwrap();
        assert_eq!(nu.semivariation(&null).unwrap(), 0.0);

        let g = random_function(&mut rng, n, 2.0);
        // h agrees with g off the null set and deviates wildly on it
        let noise = random_function(&mut rng, n, 7.0).restrict(&null).unwrap();
        let h = g.add(&noise).unwrap();
        let full = MeasurableSet::full(GroundSpace::Finite(n));
        assert_eq!(
            integral(&g, &nu, &full),
            integral(&h, &nu, &full),
            "case {case}"
        );
    }
}

#[test]
fn restriction_matches_masked_integrand_exactly() {
    let mut rng = rng(0x4e57);
    for case in 0..300 {
        let n = 2 + (case % 7) as u32;
        let nu = random_table(&mut rng, n);
        let f = random_function(&mut rng, n, 2.0);
        let e_mask: u64 = rand::Rng::gen_range(&mut rng, 0..(1u64 << n));
        let e = MeasurableSet::finite_from_mask(n, e_mask).unwrap();
        let full = MeasurableSet::full(GroundSpace::Finite(n));
        let lhs = integral(&f, &nu, &e);
        let rhs = integral(&f.restrict(&e).unwrap(), &nu, &full);
        assert_eq!(lhs, rhs, "case {case}");
    }
}

#[test]
fn indefinite_integral_operator_properties() {
    let mut rng = rng(0x70f);
    for case in 0..200 {
        let n = 2 + (case % 7) as u32;
        let nu = random_monotone_table(&mut rng, n);
        let f = random_nonneg_function(&mut rng, n, 2.0);
        let t = indefinite_integral(&f, &nu).unwrap();
        let report = t.classify();
        // additive for arbitrary nu; monotone because f >= 0 and nu is
        // monotone on singletons
        assert!(report.finitely_additive.is_holds(), "case {case}");
        assert!(report.monotone.is_holds(), "case {case}");
        assert!(report.o_continuous.is_holds());

        let full = MeasurableSet::full(GroundSpace::Finite(n));
        let sup = f.sup_abs();
        let nu_var = nu.variation(&full).unwrap();
        let t_var = t.variation(&full).unwrap();
        assert!(t_var <= sup * nu_var + 1e-12, "variation bound case {case}");

        // absolute continuity in the quantitative form: the variation of
        // T_f on any set is controlled by sup|f| times the variation of nu
        for _ in 0..8 {
            let a_mask: u64 = rand::Rng::gen_range(&mut rng, 0..(1u64 << n));
            let a = MeasurableSet::finite_from_mask(n, a_mask).unwrap();
            let lhs = t.variation(&a).unwrap();
            let rhs = sup * nu.variation(&a).unwrap();
            assert!(lhs <= rhs + 1e-12, "abs continuity case {case}");
        }
    }
}
