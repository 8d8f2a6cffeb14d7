use l2fractal::invariants::{
    log_grid, phi_gamma, phi_gamma_integral, phi_gamma_scaled, tauberian_check,
};
use statrs::function::gamma::{gamma, gamma_lr};

// φ_γ(x) = γ Γ(γ) e^x x^{-γ} P(γ, x) with P the regularized lower incomplete gamma
fn incomplete_gamma_oracle(x: f64, g: f64) -> f64 {
    g * gamma(g) * x.exp() * x.powf(-g) * gamma_lr(g, x)
}

#[test]
fn series_matches_quadrature() {
    for g in [0.3, 0.5, 0.9] {
        for i in 0..=60 {
            let x = 0.5 * i as f64;
            let s = phi_gamma(x, g);
            let q = phi_gamma_integral(x, g).unwrap();
            assert!(
                (s - q).abs() <= 1e-10 * s.abs().max(1.0),
                "γ={g} x={x}: {s} vs {q}"
            );
        }
    }
}

#[test]
fn series_matches_incomplete_gamma() {
    for g in [0.3, 0.5, 0.7, 0.9] {
        for x in [0.1, 1.0, 5.0, 20.0] {
            let s = phi_gamma(x, g);
            let o = incomplete_gamma_oracle(x, g);
            assert!((s - o).abs() <= 1e-9 * s, "γ={g} x={x}: {s} vs {o}");
        }
    }
    assert_eq!(phi_gamma(0.0, 0.5), 1.0);
}

#[test]
fn asymptote_at_fifty() {
    let g = 0.7;
    let limit = g * gamma(g);
    let v = phi_gamma_scaled(50.0, g);
    assert!((v - limit).abs() < 0.01 * limit, "{v} vs {limit}");
}

#[test]
fn inverse_square_root_is_tauberian() {
    let ts = log_grid(1e-3, 1e6, 181);
    let fs: Vec<f64> = ts.iter().map(|&t| t.powf(-0.5).min(1.0)).collect();
    let rep = tauberian_check(&ts, &fs).unwrap();
    assert!(rep.k <= 2.0, "k = {}", rep.k);
    // f̂(1/t)/f(t) → Γ(1/2) for large t
    let &(_, f, fh) = rep.samples.last().unwrap();
    assert!((fh / f - gamma(0.5)).abs() < 1e-2, "{}", fh / f);
    assert!((rep.or1_alpha - 0.5).abs() < 1e-6);
}

#[test]
fn constants_are_fixed_points() {
    let ts = log_grid(1e-2, 1e4, 61);
    let rep = tauberian_check(&ts, &vec![3.0; ts.len()]).unwrap();
    assert!((rep.k - 1.0).abs() < 1e-9);
}
