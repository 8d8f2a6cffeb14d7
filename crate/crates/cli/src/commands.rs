use crate::config::{Kind, RunConfig};
use crate::error::CliError;
use clap::ValueEnum;
use l2fractal::builders::{
    build_gasket, certify_dual_isomorphism, dual_exhaustion, verify_self_similarity,
    IntersectionCondition,
};
use l2fractal::complex::write_complex;
use l2fractal::invariants::{
    check_identities, closed_form_euler, compute_invariants, euler_characteristic, FitStatus,
    IdentityTable, InvariantConfig, WalkConfig, WindowPolicy,
};
use l2fractal::operators::{laplacian, norm_bound_check, verify_geometric, NormBoundReport};
use l2fractal::trace::{power_trace, Normalization, WindowedOperator};
use l2fractal::{Exhaustion, Family, OperatorSpec};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Heat,
    Resolvent,
    Density,
    Power,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    Volume,
    State,
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(cfg: &RunConfig, name: &str, text: &str) -> Result<(), CliError> {
    std::io::stdout().write_all(text.as_bytes())?;
    if let Some(dir) = &cfg.out_dir {
        write_file(&dir.join(name), text)?;
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn build(cfg: &RunConfig) -> Result<Exhaustion, CliError> {
    Ok(cfg.family.build(cfg.levels)?)
}

fn dual_of(ex: Exhaustion) -> Result<Exhaustion, CliError> {
    if ex.dim() != 2 {
        return Err(CliError::Usage("--dual needs a 2-complex family".into()));
    }
    Ok(dual_exhaustion(&ex)?)
}

pub fn cmd_build(cfg: &RunConfig) -> Result<(), CliError> {
    let ex = build(cfg)?;
    let dir = cfg.out_dir_or_default().join(cfg.family.name());
    for (n, cx) in ex.levels().iter().enumerate() {
        write_file(&dir.join(format!("level_{n}.cx")), &write_complex(cx))?;
        if n < ex.top_level() {
            write_file(&dir.join(format!("copies_{n}.txt")), &ex.write_copy_maps(n))?;
        }
    }
    let report = verify_self_similarity(&ex);
    write_file(&dir.join("report.json"), &to_json(&report))?;
    let mut out = String::new();
    for l in &report.levels {
        let cond = match l.intersection {
            IntersectionCondition::Strict => "strict".to_string(),
            IntersectionCondition::Relaxed { r } => format!("relaxed (r = {r})"),
        };
        let _ = writeln!(
            out,
            "level {}: {} copies, covering {}, intersection {cond}",
            l.level, l.copies, l.covering
        );
        for f in &l.failures {
            let _ = writeln!(out, "  failure: {f}");
        }
    }
    let _ = writeln!(
        out,
        "intersection condition: {}",
        if report.needs_relaxed_intersection() {
            "relaxed (copies meet near, not inside, the frontiers)"
        } else {
            "strict at every level"
        }
    );
    let _ = writeln!(
        out,
        "wrote {} levels to {}",
        ex.levels().len(),
        dir.display()
    );
    if report.passed {
        let _ = writeln!(out, "all checks passed");
        print!("{out}");
        Ok(())
    } else {
        print!("{out}");
        Err(CliError::Contract("self-similarity checks failed".into()))
    }
}

pub fn cmd_invariants(cfg: &RunConfig) -> Result<(), CliError> {
    let mut ex = build(cfg)?;
    let (mut j, mut relative, mut kind) = (cfg.j, cfg.relative, cfg.kind);
    if cfg.dual {
        ex = dual_of(ex)?;
        (j, relative, kind) = (0, false, Kind::Full);
    }
    let walk = cfg.walk_mode().map(|mode| WalkConfig {
        mode,
        k_max: cfg.k_max,
        policy: cfg.policy.unwrap_or(WindowPolicy::walk_default()),
        threads: cfg.threads,
    });
    let icfg = InvariantConfig {
        j,
        level: cfg.window,
        ambient: cfg.ambient,
        kind: kind.into(),
        relative,
        times: cfg.times.clone(),
        policy: cfg.policy,
        identity_levels: cfg.identity_levels.clone(),
        walk,
    };
    let mut report = compute_invariants(&ex, &icfg)?;
    if cfg.dual {
        report.family = Some(cfg.family.name().to_string());
        report.alpha.note = Some(format!(
            "α_{p}(M, ∂M) of the 2-complex, computed as α_0 of its dual graph",
            p = 2
        ));
    }
    emit(
        cfg,
        &format!("invariants_{}_j{}.json", cfg.family.name(), cfg.j),
        &to_json(&report),
    )?;
    if let Some(f) = &report.alpha.fit {
        eprintln!(
            "alpha = {:.4} on t in [{:.3e}, {:.3e}]; ±{} is a finite-size fitting tolerance",
            f.alpha(),
            f.window.0,
            f.window.1,
            report.alpha.tolerance
        );
    }
    if let Some(r) = &report.returns {
        eprintln!(
            "alpha from return probabilities = {:.4} on k in [{:.0}, {:.0}]",
            r.alpha, r.gamma.window.0, r.gamma.window.1
        );
    }
    if !report.identities_passed() {
        return Err(CliError::Contract("identity suite failed".into()));
    }
    if let FitStatus::Indeterminate { reason } = &report.alpha.status {
        return Err(CliError::Indeterminate(format!(
            "alpha fit indeterminate: {reason} (try a wider time grid or --fit-lo/--fit-hi)"
        )));
    }
    Ok(())
}

pub fn cmd_curve(
    cfg: &RunConfig,
    which: CurveKind,
    normalization: NormalizationArg,
    with_zero: bool,
) -> Result<(), CliError> {
    let mut ex = build(cfg)?;
    let (mut j, mut relative, mut kind) = (cfg.j, cfg.relative, cfg.kind);
    if cfg.dual {
        ex = dual_of(ex)?;
        (j, relative, kind) = (0, false, Kind::Full);
    }
    let norm = match normalization {
        NormalizationArg::Volume => Normalization::Volume,
        NormalizationArg::State => Normalization::State,
    };
    let csv = if which == CurveKind::Power {
        let pt = power_trace(&ex, cfg.window, cfg.ambient, cfg.k_max + 1)?;
        let mut s = String::from("k,value,paired,paired_error\n");
        for k in 0..=cfg.k_max {
            let err = pt.paired_error[k].map_or("nan".to_string(), |e| format!("{e:.16e}"));
            let _ = writeln!(s, "{k},{:.16e},{:.16e},{err}", pt.single[k], pt.paired[k]);
        }
        s
    } else {
        let spec = OperatorSpec::Laplacian {
            kind: kind.into(),
            relative,
        };
        let t_max = *cfg.times.last().unwrap();
        let w = WindowedOperator::new(&ex, spec, j, cfg.window, cfg.ambient, t_max)?;
        let mut xs = cfg.times.clone();
        if with_zero {
            xs.insert(0, 0.0);
        }
        let curve = match which {
            CurveKind::Heat => w.heat(&xs, norm),
            CurveKind::Resolvent => w.resolvent(&xs, norm),
            _ => w.density(&xs, norm),
        };
        curve.to_csv()
    };
    let name = format!(
        "{}_{}.csv",
        cfg.family.name(),
        which.to_possible_value().unwrap().get_name()
    );
    emit(cfg, &name, &csv)
}

#[derive(Serialize)]
struct GeometricSummary {
    level: usize,
    ambient: usize,
    j: usize,
    copy: usize,
    testable: usize,
    failures: Vec<usize>,
}

#[derive(Serialize)]
struct VerifyReport {
    family: String,
    levels: usize,
    self_similarity_passed: bool,
    relaxed_intersection: bool,
    identities: Vec<IdentityTable>,
    geometric: Vec<GeometricSummary>,
    norm_bounds: Vec<NormBoundReport>,
    passed: bool,
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<(), CliError> {
    let ex = build(cfg)?;
    let p = ex.dim();
    let ss = verify_self_similarity(&ex);
    let mut identities = Vec::new();
    for &n in &cfg.identity_levels {
        for j in 0..=p {
            identities.push(check_identities(&ex, n, j)?);
        }
    }
    let mut geometric = Vec::new();
    let top = ex.top_level();
    if top > 0 {
        let amb = ex.top();
        for j in 0..=p {
            let l = laplacian(amb, j, kind_full(), false)?;
            for copy in 0..ex.copy_maps(top - 1).len() {
                let iso = ex.local_isomorphism(top - 1, top, copy)?;
                let rep = verify_geometric(l.as_integer().unwrap(), amb, &iso, j, 1);
                geometric.push(GeometricSummary {
                    level: top - 1,
                    ambient: top,
                    j,
                    copy,
                    testable: rep.testable,
                    failures: rep.failures,
                });
            }
        }
    }
    let norm_bounds = (1..=p)
        .map(|j| norm_bound_check(ex.top(), j))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = ss.passed
        && identities.iter().all(|t| t.passed())
        && geometric.iter().all(|g| g.failures.is_empty())
        && norm_bounds.iter().all(|b| b.passed);
    let report = VerifyReport {
        family: cfg.family.name().to_string(),
        levels: cfg.levels,
        self_similarity_passed: ss.passed,
        relaxed_intersection: ss.needs_relaxed_intersection(),
        identities,
        geometric,
        norm_bounds,
        passed,
    };
    emit(
        cfg,
        &format!("verify_{}.json", cfg.family.name()),
        &to_json(&report),
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Contract("verification failed".into()))
    }
}

fn kind_full() -> l2fractal::LaplacianKind {
    l2fractal::LaplacianKind::Full
}

#[derive(Serialize)]
struct DualSummary {
    family: String,
    counts: Vec<Vec<usize>>,
    directory: PathBuf,
    /// Whether each level's dual graph was certified isomorphic to the gasket.
    gasket_certified: Option<bool>,
}

pub fn cmd_dual_graph(cfg: &RunConfig) -> Result<(), CliError> {
    let ex = build(cfg)?;
    let dual = dual_of(ex.clone())?;
    let dir = cfg
        .out_dir_or_default()
        .join(format!("{}-dual", cfg.family.name()));
    for (n, g) in dual.levels().iter().enumerate() {
        write_file(&dir.join(format!("level_{n}.cx")), &write_complex(g))?;
    }
    let certified = (cfg.family == Family::Dodecagon2).then(|| {
        let gasket = build_gasket(cfg.levels).ok();
        match (ex.dual_certificate(), gasket) {
            (Some(cert), Some(g)) => certify_dual_isomorphism(&ex, &g, &cert[0]).is_ok(),
            _ => false,
        }
    });
    let summary = DualSummary {
        family: cfg.family.name().to_string(),
        counts: dual.levels().iter().map(|g| g.counts().to_vec()).collect(),
        directory: dir,
        gasket_certified: certified,
    };
    std::io::stdout().write_all(to_json(&summary).as_bytes())?;
    if certified == Some(false) {
        return Err(CliError::Contract(
            "dual graph is not certified isomorphic to the gasket".into(),
        ));
    }
    Ok(())
}

pub fn cmd_euler(cfg: &RunConfig) -> Result<(), CliError> {
    let report = match closed_form_euler(cfg.family, cfg.levels) {
        Some(r) => r,
        None => euler_characteristic(&build(cfg)?),
    };
    emit(
        cfg,
        &format!("euler_{}.json", cfg.family.name()),
        &to_json(&report),
    )
}
