use l2fractal::builders::{build_gasket, build_vicsek};
use l2fractal::invariants::log_grid;
use l2fractal::operators::{spec_matrix, LaplacianKind, OperatorSpec};
use l2fractal::spectral::{constant_kernel, window_spectrum, SpectralMethod, SpectrumOptions};
use l2fractal::tolerances::SPECTRAL;
use l2fractal::trace::{lanczos_steps_for, Normalization, WindowedOperator};

#[test]
fn lanczos_quadrature_matches_dense_on_the_gasket() {
    let ex = build_gasket(7).unwrap();
    let cx = ex.level(7);
    let a = spec_matrix(cx, 0, OperatorSpec::delta(LaplacianKind::Full)).unwrap();
    let window: Vec<usize> = (0..ex.level(6).count(0)).collect();
    let dense = window_spectrum(&a, &window, &SpectrumOptions::default()).unwrap();
    let opts = SpectrumOptions {
        dense_limit: 1,
        lanczos_steps: lanczos_steps_for(1e4, a.max_abs_row_sum()),
        known: constant_kernel(cx),
    };
    let lz = window_spectrum(&a, &window, &opts).unwrap();
    assert!(matches!(lz.method, SpectralMethod::Lanczos { .. }));
    assert!((dense.total() - lz.total()).abs() < 1e-10 * dense.total());
    let beta = dense.weight_below(1e-9);
    assert!((beta - lz.weight_below(1e-9)).abs() < 1e-10);
    for t in log_grid(0.1, 1e4, 21) {
        let x = dense.integrate(|l| (-t * l).exp());
        let y = lz.integrate(|l| (-t * l).exp());
        assert!((x - y).abs() <= SPECTRAL * x, "t = {t}: {x} vs {y}");
        // the decaying part alone, which is what the α fit sees
        assert!((x - y).abs() <= 1e-6 * (x - beta), "t = {t}: {x} vs {y}");
    }
}

#[test]
fn heat_at_zero_is_the_volume_ratio() {
    let ex = build_vicsek(3).unwrap();
    let w = WindowedOperator::new(&ex, OperatorSpec::delta(LaplacianKind::Full), 0, 2, 3, 10.0)
        .unwrap();
    let c = w.heat(&[0.0], Normalization::Volume);
    let (v, e) = (ex.level(2).count(0) as f64, ex.level(2).count(1) as f64);
    assert!((c.samples[0].1.value - v / e).abs() < 1e-12);
    let c = w.heat(&[0.0], Normalization::State);
    assert!((c.samples[0].1.value - 1.0).abs() < 1e-12);
}

#[test]
fn heat_and_resolvent_are_comparable() {
    let ex = build_gasket(7).unwrap();
    let w =
        WindowedOperator::new(&ex, OperatorSpec::delta(LaplacianKind::Full), 0, 6, 7, 1e4).unwrap();
    let ts = log_grid(0.1, 1e4, 41);
    let heat = w.heat(&ts, Normalization::Volume).values();
    let res = w.resolvent(&ts, Normalization::Volume).values();
    let k = heat
        .iter()
        .zip(&res)
        .map(|(h, r)| (h / r).max(r / h))
        .fold(1.0, f64::max);
    // e^{-x} ≤ 1/(1+x) pointwise, and the resolvent stays within a bounded factor
    assert!(heat.iter().zip(&res).all(|(h, r)| h <= r));
    assert!(k < 3.0, "k = {k}");
}

#[test]
fn relative_window_skips_boundary_cells() {
    let ex = l2fractal::builders::build_carpet_complex(3).unwrap();
    let spec = OperatorSpec::Laplacian {
        kind: LaplacianKind::Full,
        relative: true,
    };
    let w = WindowedOperator::new(&ex, spec, 1, 2, 3, 10.0).unwrap();
    let c = w.heat(&[0.0], Normalization::State);
    // every remaining window cell contributes exactly 1 at t = 0
    assert!((c.samples[0].1.value - 1.0).abs() < 1e-12);
    let v = w.heat(&[0.0], Normalization::Volume).samples[0].1.value;
    assert!(v * (ex.level(2).count(2) as f64) < ex.level(2).count(1) as f64);
}
