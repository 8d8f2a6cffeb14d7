use crate::error::{Error, Result};
use crate::tolerances::{MIN_DECADES, SLOPE_SPREAD};
use crate::trace::TraceCurve;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowPolicy {
    /// Widest window with stable one-decade slopes inside `[lower, upper]`.
    Automatic {
        lower: f64,
        upper: Option<f64>,
    },
    Fixed {
        lo: f64,
        hi: f64,
    },
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy::Automatic {
            lower: 1.0,
            upper: None,
        }
    }
}

/// Power law `value - β ≈ amplitude · x^{-exponent}` fitted on a window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub exponent: f64,
    pub amplitude: f64,
    pub window: (f64, f64),
    /// Largest absolute deviation in log-log coordinates.
    pub residual: f64,
    pub beta_subtracted: f64,
    pub points: usize,
    /// Standard error of the exponent from per-point uncertainties, when given.
    pub exponent_error: Option<f64>,
}

impl FitResult {
    /// `α = 2 · exponent`.
    pub fn alpha(&self) -> f64 {
        2.0 * self.exponent
    }
}

struct Line {
    slope: f64,
    intercept: f64,
    residual: f64,
    slope_error: Option<f64>,
}

fn least_squares(x: &[f64], y: &[f64], sigma: Option<&[f64]>) -> Line {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).abs())
        .fold(0.0, f64::max);
    let slope_error = sigma.map(|s| {
        let v: f64 = x
            .iter()
            .zip(s)
            .map(|(a, si)| (a - mx).powi(2) * si * si)
            .sum();
        v.sqrt() / sxx
    });
    Line {
        slope,
        intercept,
        residual,
        slope_error,
    }
}

/// Fits `y - β ≈ A x^{-s}`. `sigma`, if given, holds absolute uncertainties of `y`.
pub fn fit_power_law(
    xs: &[f64],
    ys: &[f64],
    beta: f64,
    policy: WindowPolicy,
    sigma: Option<&[f64]>,
) -> Result<FitResult> {
    if xs.len() != ys.len() || sigma.is_some_and(|s| s.len() != xs.len()) {
        return Err(Error::DimensionMismatch(
            "fit inputs differ in length".into(),
        ));
    }
    let (lo, hi) = match policy {
        WindowPolicy::Fixed { lo, hi } => (lo, hi),
        WindowPolicy::Automatic { lower, upper } => (lower, upper.unwrap_or(f64::INFINITY)),
    };
    let mut px = Vec::new();
    let mut py = Vec::new();
    let mut ps = Vec::new();
    for i in 0..xs.len() {
        let d = ys[i] - beta;
        if xs[i] > 0.0 && xs[i] >= lo && xs[i] <= hi && d > 1e-8 * ys[i].abs().max(1e-300) {
            px.push(xs[i].ln());
            py.push(d.ln());
            ps.push(sigma.map_or(0.0, |s| s[i] / d));
        }
    }
    if px.len() < 3 {
        return Err(Error::EmptyWindow(format!(
            "{} usable samples in [{lo}, {hi}]",
            px.len()
        )));
    }
    let (a, b) = match policy {
        WindowPolicy::Fixed { .. } => (0, px.len() - 1),
        WindowPolicy::Automatic { .. } => stable_window(&px, &py)?,
    };
    let sig = sigma.map(|_| &ps[a..=b]);
    let line = least_squares(&px[a..=b], &py[a..=b], sig);
    Ok(FitResult {
        exponent: -line.slope,
        amplitude: line.intercept.exp(),
        window: (px[a].exp(), px[b].exp()),
        residual: line.residual,
        beta_subtracted: beta,
        points: b - a + 1,
        exponent_error: line.slope_error,
    })
}

// Widest index range whose one-decade secant slopes agree to SLOPE_SPREAD.
fn stable_window(x: &[f64], y: &[f64]) -> Result<(usize, usize)> {
    let decade = MIN_DECADES * std::f64::consts::LN_10;
    let n = x.len();
    // secant partner of each start point
    let partner: Vec<Option<usize>> = (0..n)
        .map(|i| (i + 1..n).find(|&k| x[k] >= x[i] + decade - 1e-12))
        .collect();
    let slope = |i: usize, k: usize| (y[k] - y[i]) / (x[k] - x[i]);
    let mut best: Option<(f64, usize, usize)> = None;
    for a in 0..n {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for b in a + 1..n {
            // add the secants that now fit inside [a, b]
            for i in a..b {
                if partner[i] == Some(b) {
                    let s = slope(i, b);
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
            }
            if lo > hi {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            if mid.abs() < 1e-12 || (hi - lo) > SLOPE_SPREAD * mid.abs() {
                break;
            }
            let width = x[b] - x[a];
            if best.is_none_or(|(w, _, _)| width >= w) {
                best = Some((width, a, b));
            }
        }
    }
    best.map(|(_, a, b)| (a, b)).ok_or_else(|| {
        Error::EmptyWindow("no sub-window with stable local slopes spanning a decade".into())
    })
}

/// `α` from a heat curve: slope of `log(value - β)` against `log t`.
pub fn estimate_alpha(curve: &TraceCurve, beta: f64, policy: WindowPolicy) -> Result<FitResult> {
    fit_power_law(&curve.times(), &curve.values(), beta, policy, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn pure_power_law() {
        let t = grid(0.1, 1e4, 60);
        let v: Vec<f64> = t.iter().map(|t| t.powf(-0.6826) + 0.25).collect();
        let f = fit_power_law(&t, &v, 0.25, WindowPolicy::default(), None).unwrap();
        assert!((f.alpha() - 1.3652).abs() < 1e-6);
        assert!(f.window.0 >= 1.0);
        assert!(f.residual < 1e-9);
    }

    #[test]
    fn crossover_is_excluded() {
        // power law that turns exponential past t = 300
        let t = grid(1.0, 1e5, 80);
        let v: Vec<f64> = t
            .iter()
            .map(|&t| {
                t.powf(-0.5)
                    * if t > 300.0 {
                        (-(t - 300.0) / 300.0).exp()
                    } else {
                        1.0
                    }
            })
            .collect();
        let f = fit_power_law(&t, &v, 0.0, WindowPolicy::default(), None).unwrap();
        assert!((f.exponent - 0.5).abs() < 0.02, "{f:?}");
        assert!(f.window.1 <= 1000.0);
    }

    #[test]
    fn too_short_is_indeterminate() {
        let t = grid(1.0, 5.0, 10);
        let v: Vec<f64> = t.iter().map(|t| t.powf(-1.0)).collect();
        assert!(matches!(
            fit_power_law(&t, &v, 0.0, WindowPolicy::default(), None),
            Err(Error::EmptyWindow(_))
        ));
    }

    #[test]
    fn fixed_window_and_errors() {
        let t: Vec<f64> = (1..=64).map(|k| k as f64).collect();
        let v: Vec<f64> = t.iter().map(|t| 2.0 * t.powf(-0.7)).collect();
        let s = vec![1e-3; t.len()];
        let f = fit_power_law(
            &t,
            &v,
            0.0,
            WindowPolicy::Fixed { lo: 4.0, hi: 32.0 },
            Some(&s),
        )
        .unwrap();
        assert_eq!(f.points, 29);
        assert!((f.amplitude - 2.0).abs() < 1e-9);
        assert!(f.exponent_error.unwrap() > 0.0);
    }
}
