//! Exhaustion traces on finite truncations and the curves built from them.
//!
//! Operators are assembled on an ambient level `K_m` and traced over the
//! cells of a window `K_n`, `n < m`. The state normalization divides by the
//! number of `j`-cells of the window, the volume normalization by the number
//! of top cells.

use crate::builders::Exhaustion;
use crate::complex::{boundary_subcomplex, CellId};
use crate::error::{Error, Result};
use crate::operators::{spec_matrix, walk_operators, LaplacianKind, OperatorSpec, SparseMatrix};
use crate::spectral::{
    constant_kernel, window_spectrum, SpectralMethod, SpectrumOptions, WindowSpectrum,
};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Rigorous,
    Heuristic,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Rigorous => "rigorous",
            BoundKind::Heuristic => "heuristic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divide by `|E_j K_n|`.
    State,
    /// Divide by `|E_p K_n|`.
    Volume,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceEstimate {
    pub value: f64,
    pub level: usize,
    pub error_bound: Option<f64>,
    pub kind: BoundKind,
    pub normalization: Normalization,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceCurve {
    pub operator_tag: String,
    pub j: usize,
    pub level: usize,
    pub ambient: usize,
    pub normalization: Normalization,
    pub samples: Vec<(f64, TraceEstimate)>,
}

impl TraceCurve {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1.value).collect()
    }

    /// `t,value,error_bound,kind` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,value,error_bound,kind\n");
        for (t, e) in &self.samples {
            let err = e
                .error_bound
                .map_or(String::from("nan"), |b| format!("{b:.16e}"));
            let _ = writeln!(s, "{t:.16e},{:.16e},{err},{}", e.value, e.kind.name());
        }
        s
    }
}

fn check_window(ex: &Exhaustion, n: usize, m: usize) -> Result<()> {
    if n >= m || m > ex.top_level() {
        return Err(Error::Margin(format!(
            "need window < ambient <= {}, got window {n}, ambient {m}",
            ex.top_level()
        )));
    }
    Ok(())
}

/// Confirms that the `r`-ball around the window's `j`-cells, measured in
/// the top level, stays inside the ambient level.
pub fn margin_check(ex: &Exhaustion, j: usize, n: usize, m: usize, r: usize) -> Result<()> {
    check_window(ex, n, m)?;
    let window: Vec<usize> = (0..ex.level(n).count(j)).collect();
    let inside = ex.level(m).count(j);
    let ball = ex.top().ball_of_set(j, &window, r);
    if let Some(&c) = ball.iter().find(|&&c| c >= inside) {
        return Err(Error::Margin(format!(
            "{r}-ball of level {n} reaches {j}-cell {c} outside level {m}"
        )));
    }
    Ok(())
}

fn window_trace(op: &SparseMatrix<f64>, count: usize) -> f64 {
    (0..count).map(|i| op.get(i, i)).sum()
}

/// `5 ‖T‖ ε_n μ^r`, with `‖T‖` bounded by the largest absolute row sum.
pub fn cauchy_bound(
    ex: &Exhaustion,
    op: &SparseMatrix<f64>,
    j: usize,
    n: usize,
    r: usize,
) -> Option<f64> {
    let eps = ex.epsilon(n, j)?;
    let mu = ex.top().degree_bounds().mu[j] as f64;
    Some(5.0 * op.max_abs_row_sum() * eps * mu.powi(r as i32))
}

fn windowed_estimate(
    op: &SparseMatrix<f64>,
    ex: &Exhaustion,
    j: usize,
    n: usize,
    m: usize,
    r: usize,
    normalization: Normalization,
) -> Result<TraceEstimate> {
    if op.rows() != ex.level(m).count(j) || op.cols() != op.rows() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, level {m} has {} {j}-cells",
            op.rows(),
            op.cols(),
            ex.level(m).count(j)
        )));
    }
    margin_check(ex, j, n, m, r)?;
    let count = ex.level(n).count(j);
    let denom = match normalization {
        Normalization::State => count,
        Normalization::Volume => ex.level(n).count(ex.dim()),
    } as f64;
    let value = window_trace(op, count) / denom;
    let scale = count as f64 / denom;
    let (error_bound, kind) = match cauchy_bound(ex, op, j, n, r) {
        Some(b) => (Some(b * scale), BoundKind::Rigorous),
        None => (None, BoundKind::Heuristic),
    };
    Ok(TraceEstimate {
        value,
        level: n,
        error_bound,
        kind,
        normalization,
    })
}

/// `Tr(E(E_j K_n) T) / |E_j K_n|` for an operator `T` on the `j`-cells of
/// `K_m` with propagation `r`.
pub fn trace_state(
    op: &SparseMatrix<f64>,
    ex: &Exhaustion,
    j: usize,
    n: usize,
    m: usize,
    r: usize,
) -> Result<TraceEstimate> {
    windowed_estimate(op, ex, j, n, m, r, Normalization::State)
}

/// `Tr(E(E_j K_n) T) / |E_p K_n|`.
pub fn trace_volume(
    op: &SparseMatrix<f64>,
    ex: &Exhaustion,
    j: usize,
    n: usize,
    m: usize,
    r: usize,
) -> Result<TraceEstimate> {
    windowed_estimate(op, ex, j, n, m, r, Normalization::Volume)
}

/// Spectral data of one ambient operator seen from a window, with the same
/// data one ambient level lower for the heuristic error.
#[derive(Clone, Debug)]
pub struct WindowedOperator {
    pub tag: String,
    pub j: usize,
    pub level: usize,
    pub ambient: usize,
    pub cells: usize,
    pub top_cells: usize,
    pub spectrum: WindowSpectrum,
    pub previous: Option<WindowSpectrum>,
}

/// Lanczos steps sufficient for `e^{-tλ}` on `[0, λ_max]` up to `t_max`.
pub fn lanczos_steps_for(t_max: f64, lambda_max: f64) -> usize {
    let k = 2.5 * (t_max * lambda_max).max(0.0).sqrt() + 60.0;
    (k.ceil() as usize).clamp(100, 1500)
}

impl WindowedOperator {
    /// Spectral data for `spec` on the `j`-cells; `t_max` sizes the Lanczos
    /// runs when the ambient operator is too large for dense decomposition.
    pub fn new(
        ex: &Exhaustion,
        spec: OperatorSpec,
        j: usize,
        n: usize,
        m: usize,
        t_max: f64,
    ) -> Result<Self> {
        check_window(ex, n, m)?;
        let (spectrum, cells) = Self::spectrum_at(ex, spec, j, n, m, t_max)?;
        let previous = if m - 1 > n {
            Some(Self::spectrum_at(ex, spec, j, n, m - 1, t_max)?.0)
        } else {
            None
        };
        Ok(WindowedOperator {
            tag: spec.tag(j),
            j,
            level: n,
            ambient: m,
            cells,
            top_cells: ex.level(n).count(ex.dim()),
            spectrum,
            previous,
        })
    }

    fn spectrum_at(
        ex: &Exhaustion,
        spec: OperatorSpec,
        j: usize,
        n: usize,
        m: usize,
        t_max: f64,
    ) -> Result<(WindowSpectrum, usize)> {
        let cx = ex.level(m);
        let a = spec_matrix(cx, j, spec)?;
        let mut opts = SpectrumOptions {
            lanczos_steps: lanczos_steps_for(t_max, a.max_abs_row_sum()),
            ..Default::default()
        };
        let graph_laplacian = matches!(
            spec,
            OperatorSpec::Laplacian {
                kind: LaplacianKind::Full | LaplacianKind::Plus,
                relative: false
            }
        ) && j == 0;
        if graph_laplacian {
            opts.known = constant_kernel(cx);
        }
        let mut window: Vec<usize> = (0..ex.level(n).count(j)).collect();
        if let OperatorSpec::Laplacian { relative: true, .. } = spec {
            // cells of ∂K_m carry no relative chains
            let bd = boundary_subcomplex(cx)?;
            window.retain(|&i| !bd.contains(CellId::new(j, i)));
        }
        let len = window.len();
        Ok((window_spectrum(&a, &window, &opts)?, len))
    }

    pub fn denominator(&self, normalization: Normalization) -> f64 {
        match normalization {
            Normalization::State => self.cells as f64,
            Normalization::Volume => self.top_cells as f64,
        }
    }

    pub fn method(&self) -> SpectralMethod {
        self.spectrum.method
    }

    /// Sample `f(x, ·)` integrated against the window spectrum at each `x`.
    pub fn curve(
        &self,
        xs: &[f64],
        normalization: Normalization,
        f: impl Fn(f64, f64) -> f64,
    ) -> TraceCurve {
        let d = self.denominator(normalization);
        let samples = xs
            .iter()
            .map(|&x| {
                let value = self.spectrum.integrate(|l| f(x, l)) / d;
                let error_bound = self
                    .previous
                    .as_ref()
                    .map(|p| (value - p.integrate(|l| f(x, l)) / d).abs());
                (
                    x,
                    TraceEstimate {
                        value,
                        level: self.level,
                        error_bound,
                        kind: BoundKind::Heuristic,
                        normalization,
                    },
                )
            })
            .collect();
        TraceCurve {
            operator_tag: self.tag.clone(),
            j: self.j,
            level: self.level,
            ambient: self.ambient,
            normalization,
            samples,
        }
    }

    pub fn heat(&self, times: &[f64], normalization: Normalization) -> TraceCurve {
        self.curve(times, normalization, |t, l| (-t * l.max(0.0)).exp())
    }

    pub fn resolvent(&self, ts: &[f64], normalization: Normalization) -> TraceCurve {
        self.curve(ts, normalization, |t, l| 1.0 / (1.0 + t * l.max(0.0)))
    }

    /// Normalized counting function `N(λ)`; nodes within `zero_tol` of zero count as zero.
    pub fn density(&self, lambdas: &[f64], normalization: Normalization) -> TraceCurve {
        let tol = self.zero_tolerance();
        self.curve(lambdas, normalization, move |x, l| {
            if l <= x || l.abs() <= tol {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Normalized weight of the kernel seen from the window.
    pub fn kernel_weight(&self, normalization: Normalization) -> f64 {
        let tol = self.zero_tolerance();
        self.spectrum.weight_below(tol) / self.denominator(normalization)
    }

    /// Smallest nonzero node of the ambient spectrum.
    pub fn lambda_min(&self) -> Option<f64> {
        self.spectrum.smallest_above(self.zero_tolerance())
    }

    fn zero_tolerance(&self) -> f64 {
        let top = self
            .spectrum
            .nodes
            .iter()
            .fold(1.0f64, |a, &b| a.max(b.abs()));
        1e-9 * top
    }
}

fn ascending(xs: &[f64], name: &str) -> Result<()> {
    if xs.iter().any(|&x| !x.is_finite() || x < 0.0) || xs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(format!(
            "{name} must be non-negative and ascending"
        )));
    }
    Ok(())
}

/// `t ↦ Tr(E(E_j K_n) e^{-tΔ}) / |E_p K_n|` with `Δ` assembled on `K_m`.
pub fn heat_trace(
    ex: &Exhaustion,
    spec: OperatorSpec,
    j: usize,
    n: usize,
    m: usize,
    times: &[f64],
) -> Result<TraceCurve> {
    ascending(times, "times")?;
    let t_max = times.last().copied().unwrap_or(0.0);
    Ok(WindowedOperator::new(ex, spec, j, n, m, t_max)?.heat(times, Normalization::Volume))
}

/// `t ↦ τ((1 + tΔ)^{-1})`.
pub fn resolvent_trace(
    ex: &Exhaustion,
    spec: OperatorSpec,
    j: usize,
    n: usize,
    m: usize,
    ts: &[f64],
    normalization: Normalization,
) -> Result<TraceCurve> {
    ascending(ts, "t values")?;
    let t_max = ts.last().copied().unwrap_or(0.0);
    Ok(WindowedOperator::new(ex, spec, j, n, m, t_max)?.resolvent(ts, normalization))
}

/// `λ ↦ N_λ`, volume-normalized.
pub fn spectral_density(
    ex: &Exhaustion,
    spec: OperatorSpec,
    j: usize,
    n: usize,
    m: usize,
    lambdas: &[f64],
) -> Result<TraceCurve> {
    ascending(lambdas, "lambdas")?;
    Ok(WindowedOperator::new(ex, spec, j, n, m, 1e3)?.density(lambdas, Normalization::Volume))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerTrace {
    pub level: usize,
    pub ambient: usize,
    /// `τ(P^k)` for `k = 0..=k_max`.
    pub single: Vec<f64>,
    /// `τ(P^k + P^{k+1})` for `k = 0..k_max`.
    pub paired: Vec<f64>,
    /// Heuristic errors of `paired` from the next lower ambient level.
    pub paired_error: Vec<Option<f64>>,
    /// Window average of `2π(x)`, the limit of `paired` on the finite ambient graph.
    pub plateau: f64,
    pub method: SpectralMethod,
}

fn walk_spectrum(
    ex: &Exhaustion,
    n: usize,
    m: usize,
    k_max: usize,
) -> Result<(WindowSpectrum, f64)> {
    let cx = ex.level(m);
    let w = walk_operators(cx)?;
    let s = w.symmetric_transition();
    let total: i64 = w.degrees.iter().sum();
    let norm = (total as f64).sqrt();
    let top: Vec<f64> = w
        .degrees
        .iter()
        .map(|&d| (d as f64).sqrt() / norm)
        .collect();
    let window: Vec<usize> = (0..ex.level(n).count(0)).collect();
    let opts = SpectrumOptions {
        lanczos_steps: (k_max / 2 + 20).max(60),
        known: vec![(1.0, top)],
        ..Default::default()
    };
    let plateau = window
        .iter()
        .map(|&x| 2.0 * w.degrees[x] as f64 / total as f64)
        .sum::<f64>()
        / window.len() as f64;
    Ok((window_spectrum(&s, &window, &opts)?, plateau))
}

/// Window-averaged return probabilities of the simple random walk on `K_m`,
/// started in `K_n`.
pub fn power_trace(ex: &Exhaustion, n: usize, m: usize, k_max: usize) -> Result<PowerTrace> {
    if ex.dim() != 1 {
        return Err(Error::InvalidArgument("power traces need a graph".into()));
    }
    if k_max < 2 {
        return Err(Error::InvalidArgument("k_max must be at least 2".into()));
    }
    check_window(ex, n, m)?;
    if !ex.level(m).is_connected(0, crate::complex::Flavor::D) {
        return Err(Error::Disconnected);
    }
    let count = ex.level(n).count(0) as f64;
    // P^0 = I restricted to the window has state exactly 1
    let powers = |sp: &WindowSpectrum| -> Vec<f64> {
        std::iter::once(1.0)
            .chain((1..=k_max).map(|k| sp.integrate(|l| l.powi(k as i32)) / count))
            .collect()
    };
    let (sp, plateau) = walk_spectrum(ex, n, m, k_max)?;
    let single = powers(&sp);
    let pair = |v: &[f64]| -> Vec<f64> { v.windows(2).map(|w| w[0] + w[1]).collect() };
    let paired = pair(&single);
    let paired_error = if m - 1 > n {
        let (prev, _) = walk_spectrum(ex, n, m - 1, k_max)?;
        pair(&powers(&prev))
            .iter()
            .zip(&paired)
            .map(|(a, b)| Some((a - b).abs()))
            .collect()
    } else {
        vec![None; paired.len()]
    };
    Ok(PowerTrace {
        level: n,
        ambient: m,
        single,
        paired,
        paired_error,
        plateau,
        method: sp.method,
    })
}
