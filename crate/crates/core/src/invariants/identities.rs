use crate::builders::Exhaustion;
use crate::complex::CwComplex;
use crate::error::{Error, Result};
use crate::invariants::kernel_dimension;
use crate::operators::{
    ambient_laplacian, boundary_matrix, laplacian, walk_operators, LaplacianKind, OperatorSpec,
    SparseMatrix,
};
use crate::spectral::{eigenvalues, general_eigenvalues, largest_eigenvalue, rank, DENSE_LIMIT};
use crate::tolerances::{ALPHA_FIT, IDENTITY};
use crate::trace::{margin_check, Normalization, WindowedOperator};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRow {
    pub name: String,
    pub passed: bool,
    /// Measured discrepancy (zero for exact identities that hold).
    pub value: f64,
    /// Allowed discrepancy.
    pub bound: f64,
    pub detail: String,
}

impl IdentityRow {
    fn exact(name: &str, ok: bool, detail: String) -> Self {
        IdentityRow {
            name: name.into(),
            passed: ok,
            value: if ok { 0.0 } else { 1.0 },
            bound: 0.0,
            detail,
        }
    }

    fn within(name: &str, value: f64, bound: f64, detail: String) -> Self {
        IdentityRow {
            name: name.into(),
            passed: value <= bound,
            value,
            bound,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityTable {
    pub level: usize,
    pub ambient: Option<usize>,
    pub j: usize,
    pub rows: Vec<IdentityRow>,
}

impl IdentityTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn row(&self, name: &str) -> Option<&IdentityRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

fn window_trace_i64(m: &SparseMatrix<i64>, count: usize) -> i64 {
    (0..count).map(|i| m.get(i, i)).sum()
}

fn frac(a: usize, b: usize) -> f64 {
    a as f64 / b as f64
}

/// Runs the identity suite for dimension `j` on level `n`. Window checks use
/// level `n + 1` as ambient when it exists.
pub fn check_identities(ex: &Exhaustion, n: usize, j: usize) -> Result<IdentityTable> {
    let cx = ex.level(n);
    let p = cx.dim();
    if j > p {
        return Err(Error::InvalidArgument(format!(
            "j = {j} exceeds dimension {p}"
        )));
    }
    let mut rows = Vec::new();

    // ∂∂ = 0 in every degree
    let mut bad = Vec::new();
    for k in 2..=p {
        let a = boundary_matrix(cx, k - 1)?;
        let b = boundary_matrix(cx, k)?;
        if !a
            .as_integer()
            .unwrap()
            .matmul(b.as_integer().unwrap())
            .is_zero()
        {
            bad.push(k);
        }
    }
    rows.push(IdentityRow::exact(
        "boundary_squared",
        bad.is_empty(),
        format!("checked degrees 2..={p}; failing {bad:?}"),
    ));

    let plus = laplacian(cx, j, LaplacianKind::Plus, false)?;
    let minus = laplacian(cx, j, LaplacianKind::Minus, false)?;
    let (pi, mi) = (plus.as_integer().unwrap(), minus.as_integer().unwrap());
    rows.push(IdentityRow::exact(
        "laplacian_product",
        pi.matmul(mi).is_zero() && mi.matmul(pi).is_zero(),
        "Δ+Δ- = Δ-Δ+ = 0 in integers".into(),
    ));

    let kd = kernel_dimension(cx, j, false)?;
    let (rp, rm) = (rank(pi), rank(mi));
    rows.push(IdentityRow::exact(
        "hodge_rank",
        rp + rm + kd == cx.count(j),
        format!(
            "rank Δ+ = {rp}, rank Δ- = {rm}, dim ker Δ = {kd}, |E_j| = {}",
            cx.count(j)
        ),
    ));

    if j >= 1 {
        rows.push(singular_spectra(cx, j)?);
    }
    if n < ex.top_level() {
        let m = n + 1;
        if j >= 1 {
            for k in 1..=3 {
                rows.push(power_trace_bound(ex, n, m, j, k)?);
            }
        }
        rows.push(heat_identity(ex, n, m, j)?);
        rows.push(commutator_bound(ex, n, m, j)?);
    }
    if n + 1 < ex.top_level() {
        rows.push(cauchy_across_levels(ex, n, j)?);
    }
    if p == 1 && j == 0 && cx.count(0) <= DENSE_LIMIT {
        rows.push(walk_similarity(cx)?);
    }
    Ok(IdentityTable {
        level: n,
        ambient: (n < ex.top_level()).then_some(n + 1),
        j,
        rows,
    })
}

fn singular_spectra(cx: &CwComplex, j: usize) -> Result<IdentityRow> {
    let d = boundary_matrix(cx, j)?.to_f64();
    let dt = d.transpose();
    let a = d.matmul(&dt);
    let b = dt.matmul(&d);
    if a.rows().max(b.rows()) > DENSE_LIMIT {
        return Ok(IdentityRow::exact(
            "singular_spectra",
            true,
            "skipped: above the dense limit".into(),
        ));
    }
    let scale = a.max_abs_row_sum().max(1.0);
    let nz = |v: Vec<f64>| -> Vec<f64> { v.into_iter().filter(|&x| x > 1e-9 * scale).collect() };
    let (ea, eb) = (nz(eigenvalues(&a)?), nz(eigenvalues(&b)?));
    if ea.len() != eb.len() {
        return Ok(IdentityRow::exact(
            "singular_spectra",
            false,
            format!("{} vs {} nonzero eigenvalues", ea.len(), eb.len()),
        ));
    }
    let diff = ea
        .iter()
        .zip(&eb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(IdentityRow::within(
        "singular_spectra",
        diff,
        IDENTITY * scale,
        format!("{} nonzero eigenvalues of ∂∂* and ∂*∂", ea.len()),
    ))
}

fn eps(ex: &Exhaustion, n: usize, dims: &[usize]) -> f64 {
    dims.iter()
        .filter_map(|&d| ex.epsilon(n, d))
        .fold(0.0, f64::max)
}

fn mu(ex: &Exhaustion, dims: &[usize]) -> f64 {
    let db = ex.top().degree_bounds();
    dims.iter().map(|&d| db.mu[d]).max().unwrap_or(0) as f64
}

fn power_trace_bound(ex: &Exhaustion, n: usize, m: usize, j: usize, k: u32) -> Result<IdentityRow> {
    let cx = ex.level(m);
    let d = boundary_matrix(cx, j)?;
    let d = d.as_integer().unwrap();
    let a = d.matmul(&d.transpose());
    let b = d.transpose().matmul(d);
    let (mut ak, mut bk) = (a.clone(), b.clone());
    for _ in 1..k {
        ak = ak.matmul(&a);
        bk = bk.matmul(&b);
    }
    let win = ex.level(n);
    let top = win.count(win.dim());
    let lhs = (window_trace_i64(&ak, win.count(j - 1)) - window_trace_i64(&bk, win.count(j))).abs()
        as f64
        / top as f64;
    let norm = largest_eigenvalue(&a.to_f64())?;
    let e = eps(ex, n, &[j - 1, j]);
    let bound = (mu(ex, &[j - 1, j]) + 1.0)
        * (norm.value + norm.residual).powi(k as i32)
        * frac(win.count(j - 1), top)
        * e;
    Ok(IdentityRow::within(
        &format!("power_trace_bound_k{k}"),
        lhs,
        bound,
        format!("ε_n = {e:.6e}, ‖∂∂*‖ = {:.6}", norm.value),
    ))
}

fn heat_identity(ex: &Exhaustion, n: usize, m: usize, j: usize) -> Result<IdentityRow> {
    let ts = [0.1, 1.0, 10.0, 100.0];
    let curves: Vec<Vec<f64>> = [
        LaplacianKind::Full,
        LaplacianKind::Plus,
        LaplacianKind::Minus,
    ]
    .iter()
    .map(|&k| {
        WindowedOperator::new(ex, OperatorSpec::delta(k), j, n, m, 100.0)
            .map(|w| w.heat(&ts, Normalization::Volume).values())
    })
    .collect::<Result<_>>()?;
    let vol = frac(ex.level(n).count(j), ex.level(n).count(ex.dim()));
    let diff = (0..ts.len())
        .map(|i| (curves[0][i] - curves[1][i] - curves[2][i] + vol).abs())
        .fold(0.0, f64::max);
    Ok(IdentityRow::within(
        "heat_identity",
        diff,
        IDENTITY,
        format!("e^-tΔ = e^-tΔ+ + e^-tΔ- - I at t = {ts:?}"),
    ))
}

// A = Δ_j and B = D Δ_j with D the diagonal of Δ_j; both have propagation 1.
fn commutator_bound(ex: &Exhaustion, n: usize, m: usize, j: usize) -> Result<IdentityRow> {
    let a = ambient_laplacian(ex, m, m, j, LaplacianKind::Full, false)?;
    let a = a.as_integer().unwrap();
    let diag = a.diagonal();
    let b = SparseMatrix::from_triplets(
        a.rows(),
        a.cols(),
        a.triplets().map(|(r, c, v)| (r, c, diag[r] * v)).collect(),
    );
    if let Err(e) = margin_check(ex, j, n, m, 2) {
        return Ok(IdentityRow::exact(
            "commutator_bound",
            true,
            format!("skipped: {e}"),
        ));
    }
    let count = ex.level(n).count(j);
    let ab = window_trace_i64(&a.matmul(&b), count);
    let ba = window_trace_i64(&b.matmul(a), count);
    let lhs = (ab - ba).abs() as f64 / count as f64;
    let e = eps(ex, n, &[j]);
    let bound = 2.0 * a.max_abs_row_sum() as f64 * b.max_abs_row_sum() as f64 * e * mu(ex, &[j]);
    Ok(IdentityRow::within(
        "commutator_bound",
        lhs,
        bound,
        format!("|Φ(AB) - Φ(BA)| with A = Δ_j, B = diag(Δ_j)Δ_j; ε_n = {e:.6e}"),
    ))
}

fn cauchy_across_levels(ex: &Exhaustion, n: usize, j: usize) -> Result<IdentityRow> {
    let top = ex.top_level();
    let t = ambient_laplacian(ex, top, top, j, LaplacianKind::Full, false)?;
    let t = t.as_integer().unwrap();
    let phi =
        |k: usize| window_trace_i64(t, ex.level(k).count(j)) as f64 / ex.level(k).count(j) as f64;
    let lhs = (phi(n) - phi(n + 1)).abs();
    let e = eps(ex, n, &[j]);
    let bound = 5.0 * t.max_abs_row_sum() as f64 * e * mu(ex, &[j]);
    Ok(IdentityRow::within(
        "cauchy_bound",
        lhs,
        bound,
        format!("|Φ^(n)(Δ_j) - Φ^(n+1)(Δ_j)| on level {top}; ε_n = {e:.6e}"),
    ))
}

fn walk_similarity(cx: &CwComplex) -> Result<IdentityRow> {
    let w = walk_operators(cx)?;
    let q = eigenvalues(&w.q.to_f64())?;
    let dc = general_eigenvalues(&w.delta_c.to_f64())?;
    let diff = q
        .iter()
        .zip(&dc)
        .map(|(a, (re, im))| (a - re).abs().max(im.abs()))
        .fold(0.0, f64::max);
    Ok(IdentityRow::within(
        "walk_similarity",
        diff,
        IDENTITY,
        "spectra of Q and Δ_c".into(),
    ))
}

/// `α_j = min(α_{j+}, α_{j-})` up to the fit tolerance.
pub fn min_rule_check(
    alpha: f64,
    alpha_plus: Option<f64>,
    alpha_minus: Option<f64>,
) -> IdentityRow {
    let m = [alpha_plus, alpha_minus]
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
    IdentityRow::within(
        "min_rule",
        (alpha - m).abs(),
        ALPHA_FIT,
        format!("α = {alpha:.6}, α+ = {alpha_plus:?}, α- = {alpha_minus:?}"),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichSample {
    pub t: f64,
    /// `τ((1 + μtΔ_c)^{-1})`
    pub left: f64,
    /// `τ((1 + tΔ)^{-1})`
    pub middle: f64,
    /// `τ((1 + tΔ_c)^{-1})`
    pub right: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub mu: usize,
    pub samples: Vec<SandwichSample>,
    pub max_violation: f64,
    pub passed: bool,
}

/// Resolvent comparison between `Δ = C - A` and `Δ_c = I - P` using full
/// normalized traces on a finite graph (the 1-skeleton of higher complexes).
pub fn sandwich_check(cx: &CwComplex, ts: &[f64]) -> Result<SandwichReport> {
    if cx.dim() == 0 {
        return Err(Error::InvalidArgument("sandwich check needs edges".into()));
    }
    // Δ_0 and the walk only see the 1-skeleton
    let skeleton;
    let cx = if cx.dim() > 1 {
        skeleton = cx.skeleton(1);
        &skeleton
    } else {
        cx
    };
    if cx.count(0) > DENSE_LIMIT {
        return Err(Error::Budget(format!(
            "{} vertices exceed the dense limit {DENSE_LIMIT}",
            cx.count(0)
        )));
    }
    let w = walk_operators(cx)?;
    let mu = w.degrees.iter().copied().max().unwrap_or(0) as usize;
    let lq = eigenvalues(&w.q.to_f64())?;
    let ld = eigenvalues(&laplacian(cx, 0, LaplacianKind::Full, false)?.to_f64())?;
    let nv = cx.count(0) as f64;
    let tau = |ev: &[f64], s: f64| {
        ev.iter()
            .map(|&l| 1.0 / (1.0 + s * l.max(0.0)))
            .sum::<f64>()
            / nv
    };
    let mut max_violation: f64 = 0.0;
    let samples = ts
        .iter()
        .map(|&t| {
            let s = SandwichSample {
                t,
                left: tau(&lq, mu as f64 * t),
                middle: tau(&ld, t),
                right: tau(&lq, t),
            };
            max_violation = max_violation.max(s.left - s.middle).max(s.middle - s.right);
            s
        })
        .collect();
    Ok(SandwichReport {
        mu,
        samples,
        max_violation,
        passed: max_violation <= IDENTITY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_carpet_complex, build_gasket};
    use crate::complex::fixtures::graph;

    #[test]
    fn gasket_suite_passes() {
        let ex = build_gasket(4).unwrap();
        for j in 0..=1 {
            let t = check_identities(&ex, 2, j).unwrap();
            assert!(t.passed(), "{t:#?}");
        }
    }

    #[test]
    fn carpet_suite_passes() {
        let ex = build_carpet_complex(2).unwrap();
        for j in 0..=2 {
            let t = check_identities(&ex, 1, j).unwrap();
            assert!(t.passed(), "{t:#?}");
        }
    }

    #[test]
    fn triangle_collapses_left_and_middle() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let r = sandwich_check(&g, &[0.0, 0.5, 2.0]).unwrap();
        assert!(r.passed);
        assert_eq!(r.mu, 2);
        for s in &r.samples {
            assert!((s.left - s.middle).abs() < 1e-12);
        }
        assert!((r.samples[0].right - 1.0).abs() < 1e-12);
    }
}
