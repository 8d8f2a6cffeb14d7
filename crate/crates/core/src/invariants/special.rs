use crate::error::{Error, Result};
use serde::Serialize;

/// `φ_γ(x) = Σ_n x^n / n! · C(n+γ, n)^{-1}`, summed until the terms stop
/// mattering in double precision.
pub fn phi_gamma(x: f64, gamma: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        term *= x / (n + 1.0 + gamma);
        sum += term;
        n += 1.0;
        if n > x && term <= f64::EPSILON * 1e-2 * sum {
            return sum;
        }
        if n > 1e6 {
            return sum;
        }
    }
}

/// `e^x x^{-γ} ∫_0^x e^{-t} d(t^γ)`, by double-exponential quadrature after
/// the substitution `t = s^{1/γ}`.
pub fn phi_gamma_integral(x: f64, gamma: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(1.0);
    }
    if !(x > 0.0 && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need x >= 0 and γ > 0, got x = {x}, γ = {gamma}"
        )));
    }
    let upper = x.powf(gamma);
    let out = quadrature::double_exponential::integrate(
        |s: f64| (-s.powf(1.0 / gamma)).exp(),
        0.0,
        upper,
        1e-15,
    );
    if !out.integral.is_finite() || out.error_estimate > 1e-10 * out.integral.abs().max(1e-300) {
        return Err(Error::Quadrature(format!(
            "φ integral at x = {x}: estimate {} ± {}",
            out.integral, out.error_estimate
        )));
    }
    Ok(x.exp() * x.powf(-gamma) * out.integral)
}

/// `e^{-x} x^γ φ_γ(x)`, which tends to `γ Γ(γ)` as `x → ∞`.
pub fn phi_gamma_scaled(x: f64, gamma: f64) -> f64 {
    (-x).exp() * x.powf(gamma) * phi_gamma(x, gamma)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauberianReport {
    /// `(t, f(t), f̂(1/t))` at interior grid points.
    pub samples: Vec<(f64, f64, f64)>,
    /// Smallest `k` with `k^{-1} f̂(1/t) ≤ f(t) ≤ k f̂(1/t)` on the samples.
    pub k: f64,
    /// Empirical constants of `f(λt)/f(t) ≤ c λ^{-α}`, `λ ≥ 1`.
    pub or1_c: f64,
    pub or1_alpha: f64,
}

/// Sampled function with log-log interpolation, constant below the grid and
/// power-law extrapolation above it.
struct Sampled<'a> {
    lt: Vec<f64>,
    lf: Vec<f64>,
    f: &'a [f64],
}

impl Sampled<'_> {
    fn eval(&self, t: f64) -> f64 {
        let n = self.lt.len();
        if t <= 0.0 {
            return self.f[0];
        }
        let x = t.ln();
        if x <= self.lt[0] {
            return self.f[0];
        }
        let k = if x >= self.lt[n - 1] {
            n - 2
        } else {
            self.lt.partition_point(|&v| v <= x) - 1
        };
        let s = (self.lf[k + 1] - self.lf[k]) / (self.lt[k + 1] - self.lt[k]);
        (self.lf[k] + s * (x - self.lt[k])).exp()
    }
}

/// Compares a positive non-increasing sampled `f` with `f̂(1/t) = ∫ e^{-y} f(ty) dy`.
pub fn tauberian_check(ts: &[f64], fs: &[f64]) -> Result<TauberianReport> {
    if ts.len() != fs.len() || ts.len() < 4 {
        return Err(Error::InvalidArgument("need at least four samples".into()));
    }
    if ts.iter().any(|&t| t <= 0.0) || fs.iter().any(|&f| f <= 0.0 || !f.is_finite()) {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("grid must be increasing".into()));
    }
    let g = Sampled {
        lt: ts.iter().map(|t| t.ln()).collect(),
        lf: fs.iter().map(|f| f.ln()).collect(),
        f: fs,
    };
    // interior points: the transform looks a decade either side of t
    let (lo, hi) = (ts[0] * 10.0, ts[ts.len() - 1] / 10.0);
    let mut samples = Vec::new();
    let mut k: f64 = 1.0;
    for (&t, &f) in ts.iter().zip(fs) {
        if t < lo || t > hi {
            continue;
        }
        let mut total = 0.0;
        // split [0, 60] at the grid nodes mapped to y = s / t for accuracy
        let mut cuts = vec![0.0];
        cuts.extend(ts.iter().map(|&s| s / t).filter(|&y| y > 0.0 && y < 60.0));
        cuts.push(60.0);
        for w in cuts.windows(2) {
            let out = quadrature::double_exponential::integrate(
                |y: f64| (-y).exp() * g.eval(t * y),
                w[0],
                w[1],
                1e-13,
            );
            if !out.integral.is_finite() {
                return Err(Error::Quadrature(format!("transform at t = {t}")));
            }
            total += out.integral;
        }
        k = k.max(total / f).max(f / total);
        samples.push((t, f, total));
    }
    if samples.is_empty() {
        return Err(Error::Quadrature(
            "grid spans less than two decades; no interior points".into(),
        ));
    }
    // OR(1): tail exponent from the upper half of the grid, then the constant
    let half = ts.len() / 2;
    let (x, y): (Vec<f64>, Vec<f64>) = (half..ts.len()).map(|i| (g.lt[i], g.lf[i])).unzip();
    let mx = x.iter().sum::<f64>() / x.len() as f64;
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let or1_alpha = (-sxy / sxx).max(0.0);
    let mut or1_c: f64 = 0.0;
    for i in 0..ts.len() {
        for k2 in i..ts.len() {
            let lambda = ts[k2] / ts[i];
            or1_c = or1_c.max(fs[k2] / fs[i] * lambda.powf(or1_alpha));
        }
    }
    Ok(TauberianReport {
        samples,
        k,
        or1_c,
        or1_alpha,
    })
}
