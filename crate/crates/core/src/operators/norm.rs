use super::boundary_matrix;
use crate::complex::CwComplex;
use crate::error::{Error, Result};
use crate::spectral::{largest_eigenvalue, SpectralMethod};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormBoundReport {
    pub j: usize,
    /// Largest eigenvalue of `∂*_j ∂_j`, i.e. the squared operator norm of `∂_j`.
    pub sigma_max_sq: f64,
    /// Uncertainty of `sigma_max_sq` (zero for dense decompositions).
    pub residual: f64,
    /// `(V_j⁻)² V_{j-1}⁺`.
    pub bound: usize,
    pub slack: f64,
    pub method: SpectralMethod,
    pub passed: bool,
}

/// Compares the norm of `∂_j` with the bound from the incidence degrees.
pub fn norm_bound_check(cx: &CwComplex, j: usize) -> Result<NormBoundReport> {
    if j == 0 || j > cx.dim() {
        return Err(Error::InvalidArgument(format!(
            "norm bound needs 1 <= j <= {}, got {j}",
            cx.dim()
        )));
    }
    let d = boundary_matrix(cx, j)?.to_f64();
    // the smaller Gram matrix has the same top eigenvalue
    let gram = if d.rows() < d.cols() {
        d.matmul(&d.transpose())
    } else {
        d.transpose().matmul(&d)
    };
    let top = largest_eigenvalue(&gram)?;
    let db = cx.degree_bounds();
    let bound = db.v_minus[j] * db.v_minus[j] * db.v_plus[j - 1];
    let slack = bound as f64 - top.value;
    Ok(NormBoundReport {
        j,
        sigma_max_sq: top.value,
        residual: top.residual,
        bound,
        slack,
        method: top.method,
        passed: top.value - top.residual <= bound as f64 + 1e-9,
    })
}
