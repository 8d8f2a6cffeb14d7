use l2fractal::builders::{build_gasket, Family};
use l2fractal::invariants::{
    compute_invariants, log_grid, FitStatus, InvariantConfig, WalkConfig, WalkMode, WindowPolicy,
};
use l2fractal::tolerances::ALPHA_FIT;
use l2fractal::LaplacianKind;

fn config(j: usize, level: usize, ambient: usize) -> InvariantConfig {
    InvariantConfig {
        j,
        level,
        ambient,
        kind: LaplacianKind::Full,
        relative: false,
        times: log_grid(0.1, 1e4, 41),
        policy: None,
        identity_levels: vec![level - 1],
        walk: None,
    }
}

#[test]
fn gasket_edges_report_alpha_zero() {
    let ex = build_gasket(6).unwrap();
    let v = compute_invariants(&ex, &config(0, 5, 6)).unwrap();
    let e = compute_invariants(&ex, &config(1, 5, 6)).unwrap();
    assert!(e.alpha.note.as_deref().unwrap().contains("α_0"));
    assert_eq!(v.alpha.fit, e.alpha.fit);
    assert_eq!(e.alpha.tolerance, ALPHA_FIT);
    assert!(e.identities_passed());
    // β_1 sits near 1/2, β_0 near zero
    assert!((e.beta.estimate - 0.5).abs() < 1e-2);
    assert!(v.beta.estimate < 1e-2);
}

#[test]
fn walk_pipeline_runs_on_graphs_only() {
    let ex = build_gasket(6).unwrap();
    let mut cfg = config(0, 5, 6);
    cfg.walk = Some(WalkConfig {
        mode: WalkMode::Exact,
        k_max: 200,
        policy: WindowPolicy::walk_default(),
        threads: 1,
    });
    let rep = compute_invariants(&ex, &cfg).unwrap();
    let walk = rep.returns.unwrap();
    let heat = rep.alpha.fit.unwrap().alpha();
    assert!(
        (walk.alpha - heat).abs() < 2.0 * ALPHA_FIT,
        "{} vs {heat}",
        walk.alpha
    );

    let carpet = Family::Carpet2.build(2).unwrap();
    let mut cfg = config(2, 1, 2);
    cfg.walk = Some(WalkConfig {
        mode: WalkMode::Exact,
        k_max: 20,
        policy: WindowPolicy::walk_default(),
        threads: 1,
    });
    assert!(compute_invariants(&carpet, &cfg).is_err());
}

#[test]
fn relative_carpet_top_dimension() {
    let ex = Family::Carpet2.build(3).unwrap();
    let mut cfg = config(2, 2, 3);
    cfg.relative = true;
    let rep = compute_invariants(&ex, &cfg).unwrap();
    assert!(rep.relative);
    assert!(rep.identities_passed());
    // a single relative 2-cycle per level, the fundamental class
    for l in &rep.beta.levels {
        assert_eq!(l.kernel_dim, 1);
        assert_eq!(l.top_cells, 8usize.pow(l.level as u32));
    }
    assert!(matches!(
        rep.alpha.status,
        FitStatus::Ok | FitStatus::Indeterminate { .. }
    ));
}
