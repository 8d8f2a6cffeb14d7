use l2fractal::builders::{build_carpet_complex, build_gasket, dual_exhaustion};
use l2fractal::invariants::{
    monte_carlo_returns, return_probability_pipeline, WalkMode, WindowPolicy,
};
use l2fractal::tolerances::{ALPHA_FIT, MC_BUDGET};
use l2fractal::trace::power_trace;

#[test]
fn monte_carlo_agrees_with_exact_returns() {
    let ex = build_gasket(6).unwrap();
    let policy = WindowPolicy::walk_default();
    let exact = return_probability_pipeline(&ex, 5, 6, 200, WalkMode::Exact, policy, 1).unwrap();
    let mode = WalkMode::MonteCarlo {
        seed: 2024,
        budget: MC_BUDGET,
    };
    let mc = return_probability_pipeline(&ex, 5, 6, 200, mode, policy, 2).unwrap();
    assert_eq!(mc.gamma.window, exact.gamma.window);
    let two_se = 2.0 * mc.gamma.exponent_error.unwrap();
    assert!(
        (mc.gamma.exponent - exact.gamma.exponent).abs() <= two_se,
        "{} vs {} ± {two_se}",
        mc.gamma.exponent,
        exact.gamma.exponent
    );
    assert!((exact.alpha - 2.0 * 3f64.ln() / 5f64.ln()).abs() < ALPHA_FIT);
}

#[test]
fn walks_do_not_depend_on_thread_count() {
    let ex = build_gasket(5).unwrap();
    let one = monte_carlo_returns(&ex, 3, 4, 40, 9, 50_000, 1).unwrap();
    let four = monte_carlo_returns(&ex, 3, 4, 40, 9, 50_000, 4).unwrap();
    assert_eq!(one, four);
    let other = monte_carlo_returns(&ex, 3, 4, 40, 10, 50_000, 1).unwrap();
    assert_ne!(one.samples, other.samples);
}

#[test]
fn exact_returns_start_at_one() {
    let ex = build_gasket(5).unwrap();
    let pt = power_trace(&ex, 3, 4, 20).unwrap();
    assert!((pt.single[0] - 1.0).abs() < 1e-12);
    assert!(pt.single[1].abs() < 1e-12);
    for k in 0..20 {
        assert!((pt.paired[k] - pt.single[k] - pt.single[k + 1]).abs() < 1e-15);
    }
}

#[test]
fn bipartite_carpet_dual_has_no_odd_returns() {
    let ex = dual_exhaustion(&build_carpet_complex(3).unwrap()).unwrap();
    let pt = power_trace(&ex, 2, 3, 30).unwrap();
    for k in (1..30).step_by(2) {
        assert!(pt.single[k].abs() < 1e-12, "k = {k}: {}", pt.single[k]);
    }
}
