use dnwr_core::problem::scalar_fn;
use dnwr_core::theory::{
    kernel_closed_form, kernel_series, predict_trace, symbol_power, tail_bound, Coefficient, Geometry, InitialTrace,
    Quantity, SymbolSpec,
};
use dnwr_core::waveform::{run, InitialGuess};
use dnwr_core::{Discretization, Method, StartMode, WaveProblem, WrConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn geometry(a: f64, b: f64) -> Geometry {
    Geometry::new(a, b, 1.0).unwrap()
}

#[test]
fn series_matches_closed_form_on_the_lemma_grid() {
    let points = [
        Complex64::new(0.5, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(5.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(1.0, -1.0),
    ];
    for (a, b) in [(3.0, 2.0), (1.0, 1.0), (0.5, 2.5)] {
        let series = kernel_series(geometry(a, b), 60.0).unwrap();
        for s in points {
            let diff = (series.evaluate(s) - kernel_closed_form(a, b, 1.0, s).unwrap()).norm();
            let bound = tail_bound(a, b, 1.0, 60.0, s.re).unwrap().max(1e-12);
            assert!(diff <= bound, "a={a} b={b} s={s}: {diff:e} > {bound:e}");
        }
    }
}

#[test]
fn equal_lengths_cancel_in_the_series() {
    let series = kernel_series(geometry(1.0, 1.0), 10.0).unwrap();
    assert!(series.groups().iter().all(|g| g.coefficient.is_zero()));
    for sigma in [0.5, 1.0, 3.0] {
        let v = series.evaluate(Complex64::new(sigma, 0.0)).norm();
        assert!(v <= tail_bound(1.0, 1.0, 1.0, 10.0, sigma).unwrap());
    }
}

/// Leading coefficient at delay `2k min(a,b)/c` (DNWR) or `4k min(a,b)/c` (NNWR).
fn expected_leading(method: Method, a: i64, b: i64, k: u32) -> i64 {
    let alternating = if k.is_multiple_of(2) { 1 } else { -1 };
    match method {
        // (-1)^k on e^{-2aks/c}, +1 on e^{-2bks/c}
        Method::Dnwr if a < b => alternating,
        Method::Dnwr => 1,
        _ => alternating,
    }
}

fn check_minimum_delay(method: Method, a: i64, b: i64, k: u32) -> Result<(), String> {
    let theta = if method == Method::Dnwr {
        Quantity::exact(1, 2)
    } else {
        Quantity::exact(1, 4)
    }
    .unwrap();
    let g = Geometry::new(Quantity::integer(a), Quantity::integer(b), Quantity::integer(1)).unwrap();
    let reach = if method == Method::Dnwr { 2 } else { 4 };
    let lead = reach * k as i64 * a.min(b);
    let p = symbol_power(
        &SymbolSpec::new(method, theta, g).unwrap(),
        k,
        Quantity::integer(lead + 1),
    )
    .unwrap();
    if !p.is_exact() || !p.exact_delays() {
        return Err("expected exact arithmetic".into());
    }
    let groups = p.groups();
    if let Some(early) = groups
        .iter()
        .find(|g| g.delay < lead as f64 && !g.coefficient.is_zero())
    {
        return Err(format!(
            "nonzero coefficient {} at delay {}",
            early.coefficient, early.delay
        ));
    }
    let at = p.coefficient_at_delay(lead as f64);
    let expected = if a == b { 0 } else { expected_leading(method, a, b, k) };
    if at != Coefficient::integer(expected) {
        return Err(format!("coefficient {at} at delay {lead}, expected {expected}"));
    }
    Ok(())
}

#[test]
fn minimum_delay_law_for_listed_geometries() {
    for (a, b) in [(3, 2), (1, 3)] {
        for k in 1..=6 {
            for method in [Method::Dnwr, Method::Nnwr] {
                check_minimum_delay(method, a, b, k).unwrap_or_else(|e| panic!("{method} a={a} b={b} k={k}: {e}"));
            }
        }
    }
}

#[test]
fn nnwr_cancels_the_single_reflection() {
    let spec = SymbolSpec::new(Method::Nnwr, 0.25, geometry(3.0, 2.0)).unwrap();
    let p = symbol_power(&spec, 1, 16.0).unwrap();
    assert!(p.coefficient(1, 0).is_zero());
    assert!(p.coefficient(0, 1).is_zero());
    assert_eq!(p.leading().unwrap().delay, 8.0);
}

#[test]
fn predicted_trace_vanishes_past_the_finite_step_count() {
    let h0 = |t: f64| t * t;
    for (method, theta, reach) in [(Method::Dnwr, 0.5, 2.0), (Method::Nnwr, 0.25, 4.0)] {
        for (a, b) in [(3.0, 2.0), (0.5, 2.5), (1.0, 1.0)] {
            let spec = SymbolSpec::new(method, theta, geometry(a, b)).unwrap();
            for k in 1..4u32 {
                let t_end = reach * k as f64 * f64::min(a, b);
                let dt = t_end / 200.0;
                let h = predict_trace(&spec, k, InitialTrace::Function(&h0), dt, 200).unwrap();
                assert!(h.max_abs() < 1e-12, "{method} a={a} b={b} k={k}");
            }
        }
    }
}

fn oracle_discrepancy(dx: f64, dt: f64, k: usize, h0: fn(f64) -> f64) -> f64 {
    let problem = WaveProblem::zero_data(-3.0, 0.0, 2.0, 1.0).unwrap();
    let disc = Discretization::with_window(dx, dt, 16.0).unwrap();
    let cfg = WrConfig::new(Method::Dnwr)
        .with_theta(0.5)
        .with_start(StartMode::ExactDalembert)
        .with_guess(InitialGuess::Function(scalar_fn(h0)))
        .with_max_iterations(k)
        .with_tolerance(0.0);
    let out = run(&problem, &disc, &cfg, None).unwrap();
    let spec = SymbolSpec::new(Method::Dnwr, 0.5, geometry(3.0, 2.0)).unwrap();
    let predicted = predict_trace(&spec, k as u32, InitialTrace::Function(&h0), dt, disc.n_time).unwrap();
    out.interface[0].sub(&predicted).unwrap().l2() / predicted.l2()
}

#[test]
fn drivers_follow_the_delay_series_at_cfl_one() {
    for k in [1, 2] {
        let d = oracle_discrepancy(0.02, 0.02, k, |t| t * t);
        assert!(d <= 1e-8, "k={k}: {d:e}");
    }
}

#[test]
fn oracle_discrepancy_is_second_order_for_smooth_data() {
    let quartic: fn(f64) -> f64 = |t| t * t * t * t;
    for k in [1, 2] {
        let coarse = oracle_discrepancy(0.02, 0.01, k, quartic);
        let fine = oracle_discrepancy(0.01, 0.005, k, quartic);
        let ratio = coarse / fine;
        assert!((3.6..=4.4).contains(&ratio), "k={k}: {coarse:e} / {fine:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn truncation_error_within_tail_bound(
        a in 0.2f64..3.0,
        b in 0.2f64..3.0,
        re in 0.3f64..5.0,
        im in -3.0f64..3.0,
        horizon in 10.0f64..40.0,
    ) {
        let s = Complex64::new(re, im);
        let series = kernel_series(geometry(a, b), horizon).unwrap();
        let diff = (series.evaluate(s) - kernel_closed_form(a, b, 1.0, s).unwrap()).norm();
        let bound = tail_bound(a, b, 1.0, horizon, re).unwrap();
        prop_assert!(diff <= bound + 1e-12, "{diff:e} > {bound:e}");
    }

    #[test]
    fn power_agrees_with_power_of_evaluation(
        method in prop_oneof![Just(Method::Dnwr), Just(Method::Nnwr)],
        theta in 0.05f64..1.0,
        a in 0.5f64..3.0,
        b in 0.5f64..3.0,
        k in 1u32..4,
        re in 1.0f64..3.0,
        im in -2.0f64..2.0,
    ) {
        let horizon = 30.0;
        let spec = SymbolSpec::new(method, theta, geometry(a, b)).unwrap();
        let base = spec.base_symbol(horizon).unwrap();
        let s = Complex64::new(re, im);
        let lhs = symbol_power(&spec, k, horizon).unwrap().evaluate(s);
        let rhs = base.evaluate(s).powu(k);
        let l1: f64 = base.terms().map(|(_, c)| c.to_f64().abs()).sum();
        let bound = l1.powi(k as i32) * (-horizon * re).exp() + 1e-11;
        prop_assert!((lhs - rhs).norm() <= bound, "{:e} > {bound:e}", (lhs - rhs).norm());
        let closed = spec.closed_form(s).unwrap();
        let tails = (1 + (method == Method::Nnwr) as i32) as f64 * theta * tail_bound(a, b, 1.0, horizon, re).unwrap().max(tail_bound(b, a, 1.0, horizon, re).unwrap());
        prop_assert!((base.evaluate(s) - closed).norm() <= tails + 1e-12);
    }

    #[test]
    fn minimum_delay_law_on_integer_geometries(a in 1i64..6, b in 1i64..6, k in 1u32..5) {
        for method in [Method::Dnwr, Method::Nnwr] {
            prop_assert!(check_minimum_delay(method, a, b, k).is_ok(), "{method}: {:?}", check_minimum_delay(method, a, b, k));
        }
    }
}
