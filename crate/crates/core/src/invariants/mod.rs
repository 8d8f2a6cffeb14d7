//! Betti and Novikov–Shubin estimates, Euler characteristics, identity
//! suites and the special functions used to calibrate them.

mod euler;
mod fit;
mod identities;
mod special;
mod walk;

pub use euler::{
    aitken, closed_form_euler, closed_form_limit, euler_characteristic, first_betti_limit,
    kernel_dimension, EulerLevel, EulerReport, Rational,
};
pub use fit::{estimate_alpha, fit_power_law, FitResult, WindowPolicy};
pub use identities::{
    check_identities, min_rule_check, sandwich_check, IdentityRow, IdentityTable, SandwichReport,
    SandwichSample,
};
pub use special::{
    phi_gamma, phi_gamma_integral, phi_gamma_scaled, tauberian_check, TauberianReport,
};
pub use walk::{
    monte_carlo_returns, return_probability_pipeline, MonteCarloReturns, ReturnProbabilityReport,
    ReturnSample, WalkMode, MC_BATCHES,
};

use crate::builders::Exhaustion;
use crate::error::{Error, Result};
use crate::operators::{LaplacianKind, OperatorSpec};
use crate::tolerances::{ALPHA_FIT, FINITE_SIZE_FACTOR};
use crate::trace::{Normalization, TraceCurve, WindowedOperator};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelLevel {
    pub level: usize,
    pub kernel_dim: usize,
    pub top_cells: usize,
    #[serde(serialize_with = "euler::as_text")]
    pub ratio: Rational,
    pub value: f64,
    /// `ε_n` of the exhaustion in the same dimension, when known.
    pub epsilon: Option<f64>,
}

/// `dim ker Δ_j(K_n) / |E_p K_n|` on each requested level.
pub fn kernel_levels(
    ex: &Exhaustion,
    j: usize,
    relative: bool,
    levels: impl IntoIterator<Item = usize>,
) -> Result<Vec<KernelLevel>> {
    levels
        .into_iter()
        .map(|n| {
            let cx = ex.level(n);
            let kd = kernel_dimension(cx, j, relative)?;
            let top = cx.count(cx.dim());
            let ratio = Rational::new(kd as i128, top as i128);
            Ok(KernelLevel {
                level: n,
                kernel_dim: kd,
                top_cells: top,
                ratio,
                value: kd as f64 / top as f64,
                epsilon: ex.epsilon(n, j),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaEstimate {
    /// Primary estimator: normalized kernel dimensions per level.
    pub levels: Vec<KernelLevel>,
    /// Level-to-level differences of the primary estimator.
    pub trend: Vec<f64>,
    pub estimate: f64,
    /// Ambient kernel weight seen from the window.
    pub windowed: Option<f64>,
    /// Heat-curve value at the largest sampled time.
    pub tail: Option<f64>,
    /// `|tail - windowed|`.
    pub discrepancy: Option<f64>,
}

pub fn estimate_beta(
    levels: Vec<KernelLevel>,
    curve: Option<&TraceCurve>,
    windowed: Option<f64>,
) -> Result<BetaEstimate> {
    let estimate = levels
        .last()
        .map(|l| l.value)
        .ok_or_else(|| Error::InvalidArgument("no levels given".into()))?;
    let trend = levels.windows(2).map(|w| w[1].value - w[0].value).collect();
    let tail = curve.and_then(|c| c.samples.last().map(|s| s.1.value));
    let discrepancy = match (tail, windowed) {
        (Some(a), Some(b)) => Some((a - b).abs()),
        _ => None,
    };
    Ok(BetaEstimate {
        levels,
        trend,
        estimate,
        windowed,
        tail,
        discrepancy,
    })
}

/// Log-spaced grid with `count` points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![lo];
    }
    (0..count)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantConfig {
    pub j: usize,
    pub level: usize,
    pub ambient: usize,
    pub kind: LaplacianKind,
    pub relative: bool,
    pub times: Vec<f64>,
    pub policy: Option<WindowPolicy>,
    /// Levels at which the identity suite runs.
    pub identity_levels: Vec<usize>,
    /// Also fit return probabilities (graphs only).
    pub walk: Option<WalkConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkConfig {
    pub mode: WalkMode,
    pub k_max: usize,
    pub policy: WindowPolicy,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitStatus {
    Ok,
    Indeterminate { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub status: FitStatus,
    pub fit: Option<FitResult>,
    /// Upper time cut from the smallest nonzero ambient eigenvalue.
    pub finite_size_cut: Option<f64>,
    /// Finite-size fitting tolerance: `α` is a `t → ∞` limit, fits see finite levels.
    pub tolerance: f64,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub family: Option<String>,
    pub operator: String,
    pub j: usize,
    pub relative: bool,
    pub level: usize,
    pub ambient: usize,
    pub beta: BetaEstimate,
    pub alpha: AlphaEstimate,
    pub euler: EulerReport,
    pub identities: Vec<IdentityTable>,
    pub returns: Option<ReturnProbabilityReport>,
}

impl InvariantReport {
    pub fn identities_passed(&self) -> bool {
        self.identities.iter().all(|t| t.passed())
    }
}

/// Heat curve, `β` and automatic-window `α` for one operator.
pub fn alpha_from_heat(
    ex: &Exhaustion,
    spec: OperatorSpec,
    j: usize,
    n: usize,
    m: usize,
    times: &[f64],
    policy: Option<WindowPolicy>,
) -> Result<(TraceCurve, f64, AlphaEstimate)> {
    let t_max = times.last().copied().unwrap_or(1.0);
    let w = WindowedOperator::new(ex, spec, j, n, m, t_max)?;
    let curve = w.heat(times, Normalization::Volume);
    let beta = w.kernel_weight(Normalization::Volume);
    let cut = w.lambda_min().map(|l| FINITE_SIZE_FACTOR / l);
    let policy = policy.unwrap_or(WindowPolicy::Automatic {
        lower: 1.0,
        upper: cut,
    });
    let alpha = match estimate_alpha(&curve, beta, policy) {
        Ok(fit) => AlphaEstimate {
            status: FitStatus::Ok,
            fit: Some(fit),
            finite_size_cut: cut,
            tolerance: ALPHA_FIT,
            note: None,
        },
        Err(Error::EmptyWindow(reason)) => AlphaEstimate {
            status: FitStatus::Indeterminate { reason },
            fit: None,
            finite_size_cut: cut,
            tolerance: ALPHA_FIT,
            note: None,
        },
        Err(e) => return Err(e),
    };
    Ok((curve, beta, alpha))
}

/// Full pipeline for one `(j, variant, relative)` triple.
pub fn compute_invariants(ex: &Exhaustion, cfg: &InvariantConfig) -> Result<InvariantReport> {
    let p = ex.dim();
    if cfg.j > p {
        return Err(Error::InvalidArgument(format!(
            "j = {} exceeds dimension {p}",
            cfg.j
        )));
    }
    // on graphs Δ_1 = Δ_{1-}, whose nonzero spectrum is that of Δ_{0+} = Δ_0
    let graph_edges = p == 1 && cfg.j == 1 && !cfg.relative;
    let (fit_j, fit_kind) = if graph_edges {
        (0, LaplacianKind::Full)
    } else {
        (cfg.j, cfg.kind)
    };
    let spec = OperatorSpec::Laplacian {
        kind: fit_kind,
        relative: cfg.relative,
    };
    let (curve, windowed_beta, mut alpha) = alpha_from_heat(
        ex,
        spec,
        fit_j,
        cfg.level,
        cfg.ambient,
        &cfg.times,
        cfg.policy,
    )?;
    if graph_edges {
        alpha.note = Some(
            "α_1 is reported as α_0: Δ_1 = Δ_{1-} on a graph, and α_{1-} = α_{0+} = α_0".into(),
        );
    }
    let beta_spec = OperatorSpec::Laplacian {
        kind: cfg.kind,
        relative: cfg.relative,
    };
    let windowed = if graph_edges {
        let w = WindowedOperator::new(ex, beta_spec, cfg.j, cfg.level, cfg.ambient, 1.0)?;
        w.kernel_weight(Normalization::Volume)
    } else {
        windowed_beta
    };
    let levels = kernel_levels(ex, cfg.j, cfg.relative, 0..=cfg.ambient)?;
    let beta = estimate_beta(levels, (!graph_edges).then_some(&curve), Some(windowed))?;
    let identities = cfg
        .identity_levels
        .iter()
        .map(|&n| check_identities(ex, n, cfg.j))
        .collect::<Result<_>>()?;
    let returns = match cfg.walk {
        Some(w) if p == 1 => Some(return_probability_pipeline(
            ex,
            cfg.level,
            cfg.ambient,
            w.k_max,
            w.mode,
            w.policy,
            w.threads,
        )?),
        Some(_) => {
            return Err(Error::InvalidArgument(
                "return probabilities need a graph; use the dual graph".into(),
            ))
        }
        None => None,
    };
    Ok(InvariantReport {
        family: ex.family.map(|f| f.name().to_string()),
        operator: beta_spec.tag(cfg.j),
        j: cfg.j,
        relative: cfg.relative,
        level: cfg.level,
        ambient: cfg.ambient,
        beta,
        alpha,
        euler: euler_characteristic(ex),
        identities,
        returns,
    })
}
