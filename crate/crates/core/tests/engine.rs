mod common;

use common::{grid_points, increasing_on, inside, integrator_on, interior, linear_piece, piecewise_on, points_on_rat, quad_piece, small_rat, step_on};
use num_traits::Signed;
use proptest::prelude::*;
use stieltjes::engine::{
    discrepancy, ds_integrate, ds_step_integral, enclose_increasing, parts_correction, rds_enclosure, rds_integrate,
    rds_step_integral, ross_sums,
};
use stieltjes::numerics::{int, pow2_neg, rat};
use stieltjes::{Function, Integrator, Partition, PiecewiseFn, Poly, Rational, Settings, StepFn};

fn rds(f: impl Into<Function>, alpha: &Integrator) -> Rational {
    let r = rds_integrate(&f.into(), alpha, &Settings::default()).unwrap();
    r.value.exact().cloned().expect("exact value")
}

fn ds(f: impl Into<Function>, alpha: &Integrator) -> Rational {
    let r = ds_integrate(&f.into(), alpha, &Settings::default()).unwrap();
    r.value.exact().cloned().expect("exact value")
}

fn quad_on(pts: Vec<Rational>) -> impl Strategy<Value = PiecewiseFn> {
    piecewise_on(pts, quad_piece().boxed())
}

/// A step function and an integrator sharing one domain.
fn step_and_integrator() -> impl Strategy<Value = (StepFn, Integrator)> {
    grid_points(0).prop_flat_map(|d| {
        let (a, b) = (d[0].clone(), d[1].clone());
        (
            points_on_rat(a.clone(), b.clone(), 5).prop_flat_map(step_on),
            points_on_rat(a, b, 5).prop_flat_map(integrator_on),
        )
    })
}

fn quad_and_integrator() -> impl Strategy<Value = (PiecewiseFn, Integrator)> {
    grid_points(0).prop_flat_map(|d| {
        let (a, b) = (d[0].clone(), d[1].clone());
        (
            points_on_rat(a.clone(), b.clone(), 4).prop_flat_map(quad_on),
            points_on_rat(a, b, 4).prop_flat_map(integrator_on),
        )
    })
}

fn quad_and_increasing(inner: usize) -> impl Strategy<Value = (PiecewiseFn, Integrator)> {
    grid_points(0).prop_flat_map(move |d| {
        let (a, b) = (d[0].clone(), d[1].clone());
        (
            points_on_rat(a.clone(), b.clone(), inner).prop_flat_map(quad_on),
            points_on_rat(a, b, inner).prop_flat_map(increasing_on),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn step_integrals_match_engine((s, alpha) in step_and_integrator()) {
        prop_assert_eq!(rds(s.clone(), &alpha), rds_step_integral(&s, &alpha).unwrap());
        prop_assert_eq!(ds(s.clone(), &alpha), ds_step_integral(&s, &alpha).unwrap());
    }

    #[test]
    fn refining_a_step_changes_nothing((s, alpha) in step_and_integrator(), extra in proptest::collection::vec(0u32..1000, 1..8)) {
        let t = s.refine(extra.iter().map(|&k| interior(s.a(), s.b(), k)));
        prop_assert_eq!(rds_step_integral(&t, &alpha).unwrap(), rds_step_integral(&s, &alpha).unwrap());
        prop_assert_eq!(ds_step_integral(&t, &alpha).unwrap(), ds_step_integral(&s, &alpha).unwrap());
    }

    #[test]
    fn linear_in_the_integrand(
        (f, alpha) in quad_and_integrator(),
        g_piece in quad_piece(),
        r in small_rat(),
    ) {
        let g = PiecewiseFn::from_poly(f.a().clone(), f.b().clone(), g_piece).unwrap();
        let combo = f.scale(&r).add(&g).unwrap();
        prop_assert_eq!(rds(combo.clone(), &alpha), &r * rds(f.clone(), &alpha) + rds(g.clone(), &alpha));
        prop_assert_eq!(ds(combo, &alpha), &r * ds(f, &alpha) + ds(g, &alpha));
    }

    #[test]
    fn linear_in_the_integrator((f, alpha) in quad_and_integrator(), r in small_rat(), k in 0u32..1000) {
        let (a, b) = (f.a().clone(), f.b().clone());
        let beta = Integrator::heaviside(a.clone(), b.clone(), int((k % 2) as i64), inside(&a, &b, k)).unwrap()
            .add(&Integrator::identity(a, b).unwrap()).unwrap();
        let combo = alpha.scale(&r).add(&beta).unwrap();
        prop_assert_eq!(rds(f.clone(), &combo), &r * rds(f.clone(), &alpha) + rds(f.clone(), &beta));
        prop_assert_eq!(ds(f.clone(), &combo), &r * ds(f.clone(), &alpha) + ds(f, &beta));
    }

    #[test]
    fn additive_over_adjacent_intervals((f, alpha) in quad_and_integrator(), k in 0u32..1000) {
        // the grid of `interior` lands on breakpoints and jumps of both
        let m = interior(f.a(), f.b(), k);
        let whole = rds(f.clone(), &alpha);
        let left = rds(f.restrict(f.a(), &m).unwrap(), &alpha.restrict(alpha.a(), &m).unwrap());
        let right = rds(f.restrict(&m, f.b()).unwrap(), &alpha.restrict(&m, alpha.b()).unwrap());
        prop_assert_eq!(whole, left + right);
    }

    #[test]
    fn monotone_in_the_integrand((f, beta) in quad_and_increasing(4), h in linear_piece()) {
        let h = PiecewiseFn::from_poly(f.a().clone(), f.b().clone(), h).unwrap();
        let g = f.sub(&h.abs().unwrap()).unwrap();
        prop_assert!(rds(g, &beta) <= rds(f, &beta));
    }

    #[test]
    fn independent_of_decomposition((f, alpha) in quad_and_integrator()) {
        let (p, n) = alpha.jordan();
        let a = alpha.a().clone();
        let b = alpha.b().clone();
        let gamma = Integrator::identity(a.clone(), b.clone()).unwrap()
            .add(&Integrator::heaviside(a.clone(), b.clone(), int(1), interior(&a, &b, 7)).unwrap()).unwrap();
        let direct = rds(f.clone(), &alpha);
        let via_jordan = rds(f.clone(), &p) - rds(f.clone(), &n);
        let shifted = rds(f.clone(), &p.add(&gamma).unwrap()) - rds(f, &n.add(&gamma).unwrap());
        prop_assert_eq!(&direct, &via_jordan);
        prop_assert_eq!(direct, shifted);
    }

    #[test]
    fn triangle_inequality((s, alpha) in step_and_integrator()) {
        let total = rds(s.clone(), &alpha);
        let bound = rds(s.abs().unwrap(), &alpha.variation());
        prop_assert!(total.abs() <= bound);
    }

    #[test]
    fn discrepancy_accounts_for_the_difference((f, alpha) in quad_and_integrator()) {
        let fx = Function::from(f.clone());
        prop_assert_eq!(rds(f.clone(), &alpha) - ds(f, &alpha), discrepancy(&fx, &alpha).unwrap());
    }

    #[test]
    fn continuous_integrands_see_no_difference((_, alpha) in quad_and_integrator(), p in quad_piece()) {
        let f = PiecewiseFn::from_poly(alpha.a().clone(), alpha.b().clone(), p).unwrap();
        prop_assert_eq!(discrepancy(&Function::from(f.clone()), &alpha).unwrap(), int(0));
        prop_assert_eq!(rds(f.clone(), &alpha), ds(f, &alpha));
    }

    #[test]
    fn normalization_preserves_the_integral((f, alpha) in quad_and_integrator()) {
        // make α continuous at b so it can be left-normalized
        let g = alpha.to_piecewise().unwrap();
        let mut values = g.values().to_vec();
        let last = values.len() - 1;
        values[last] = g.limit_left(g.b()).unwrap();
        let alpha = Integrator::from_piecewise(&PiecewiseFn::new(g.breakpoints().to_vec(), g.pieces().to_vec(), values).unwrap()).unwrap();
        let beta = alpha.normalize_left().unwrap();
        prop_assert_eq!(rds(f.clone(), &beta), rds(f, &alpha));
    }

    #[test]
    fn sums_bracket_the_integral((f, beta) in quad_and_increasing(4), cuts in proptest::collection::vec(0u32..1000, 0..10)) {
        let p = Partition::from_points(f.a(), f.b(), cuts.iter().map(|&k| interior(f.a(), f.b(), k))).unwrap();
        let (u, l) = ross_sums(&f, &beta, &p, &rat(1, 1000)).unwrap();
        let exact = rds(f, &beta);
        prop_assert!(l <= exact && exact <= u, "{} not in [{}, {}]", exact, l, u);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn enclosure_is_bracketed_by_best_fit_steps((f, beta) in quad_and_increasing(3)) {
        let tol = rat(1, 10);
        let run = enclose_increasing(&f, &beta, &tol, 40).unwrap();
        prop_assert!(run.converged);
        prop_assert!(&run.upper - &run.lower <= &tol / int(2));
        let (u, v) = f.best_fit_steps(&run.partition, &run.slack).unwrap();
        prop_assert!(rds_step_integral(&v, &beta).unwrap() <= run.lower);
        prop_assert!(run.upper <= rds_step_integral(&u, &beta).unwrap());
        let exact = rds(f, &beta);
        prop_assert!(run.lower <= exact && exact <= run.upper);
    }

    #[test]
    fn signed_enclosure_contains_exact((f, alpha) in quad_and_integrator()) {
        let tol = rat(1, 10);
        let r = rds_enclosure(&f, &alpha, &Settings::enclosure(tol.clone(), 40)).unwrap();
        prop_assert!(r.converged);
        prop_assert!(r.value.width() <= tol);
        prop_assert!(r.value.contains(&rds(f, &alpha)));
    }

    #[test]
    fn uniform_sums_close_at_rate((f, beta) in quad_and_increasing(3), p in quad_piece()) {
        // continuous f and continuous β: U - L ≤ Lip(f)·Lip(β)·(b - a)²/n
        let (a, b) = (f.a().clone(), f.b().clone());
        let f = PiecewiseFn::from_poly(a.clone(), b.clone(), p.clone()).unwrap();
        let g = Integrator::from_piecewise(beta.continuous()).unwrap();
        let lip_f = p.lipschitz_bound(&a, &b);
        let lip_g = g.continuous().breakpoints().windows(2).zip(g.continuous().pieces())
            .map(|(w, q)| q.lipschitz_bound(&w[0], &w[1]))
            .max().unwrap();
        let c = lip_f * lip_g * (&b - &a) * (&b - &a);
        for k in 0..6u32 {
            let part = Partition::uniform(&a, &b, 1usize << k).unwrap();
            let (u, l) = ross_sums(&f, &g, &part, &int(0)).unwrap();
            prop_assert!(&u - &l <= &c * pow2_neg(k), "k = {}: gap {}", k, &u - &l);
        }
    }
}

#[test]
fn parts_correction_vanishes_for_continuous_pair() {
    let a = Integrator::identity(int(0), int(1)).unwrap();
    let b = Integrator::from_piecewise(&PiecewiseFn::from_poly(int(0), int(1), Poly::monomial(2)).unwrap()).unwrap();
    assert_eq!(parts_correction(&a, &b, &rat(1, 2)).unwrap(), int(0));
}

#[test]
fn disjoint_jumps_give_no_discrepancy() {
    let f = StepFn::heaviside(int(0), int(1), rat(1, 2), rat(1, 2)).unwrap();
    let alpha = Integrator::heaviside(int(0), int(1), int(0), rat(1, 4)).unwrap();
    assert_eq!(discrepancy(&Function::from(f), &alpha).unwrap(), int(0));
}
