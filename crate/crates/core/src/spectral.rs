//! Eigenvalues, window-restricted spectral measures and exact ranks.
//!
//! A [`WindowSpectrum`] is a discrete measure `Σ w_k δ_{λ_k}` such that
//! `Σ_{i ∈ window} (f(A))_{ii} = Σ_k w_k f(λ_k)` for every function `f`
//! (exactly for dense decompositions, up to Gauss quadrature error for
//! Lanczos).

use crate::complex::{CwComplex, Flavor};
use crate::error::{Error, Result};
use crate::operators::SparseMatrix;
use faer::{Mat, Side};
use serde::Serialize;

/// Largest operator size handled by dense decomposition.
pub const DENSE_LIMIT: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMethod {
    Dense,
    Lanczos { steps: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowSpectrum {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub method: SpectralMethod,
}

impl WindowSpectrum {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Weight carried by nodes `≤ x`.
    pub fn weight_below(&self, x: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(&l, _)| l <= x)
            .map(|(_, &w)| w)
            .sum()
    }

    /// Smallest node above `cut` that carries non-negligible weight.
    pub fn smallest_above(&self, cut: f64) -> Option<f64> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(&l, &w)| l > cut && w > 1e-14)
            .map(|(&l, _)| l)
            .min_by(f64::total_cmp)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SpectrumOptions {
    /// Dense decomposition up to this size; 0 means [`DENSE_LIMIT`].
    pub dense_limit: usize,
    /// Lanczos steps per window vector; 0 picks a default.
    pub lanczos_steps: usize,
    /// Known orthonormal eigenpairs, projected out before Lanczos and added
    /// back as exact nodes.
    pub known: Vec<(f64, Vec<f64>)>,
}

fn to_dense(a: &SparseMatrix<f64>) -> Mat<f64> {
    let mut m = Mat::<f64>::zeros(a.rows(), a.cols());
    for (r, c, v) in a.triplets() {
        m[(r, c)] = v;
    }
    m
}

fn check_square(a: &SparseMatrix<f64>) -> Result<()> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// Ascending eigenvalues and eigenvectors (columns) of a symmetric matrix.
pub fn symmetric_eigen(a: &SparseMatrix<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    check_square(a)?;
    let n = a.rows();
    if n == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let eig = to_dense(a)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = eig.S();
    let values = (0..n).map(|k| s[k]).collect();
    Ok((values, eig.U().to_owned()))
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn eigenvalues(a: &SparseMatrix<f64>) -> Result<Vec<f64>> {
    check_square(a)?;
    if a.rows() == 0 {
        return Ok(Vec::new());
    }
    let mut v = to_dense(a)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Eigenvalues `(re, im)` of a general square matrix, sorted by real part.
pub fn general_eigenvalues(a: &SparseMatrix<f64>) -> Result<Vec<(f64, f64)>> {
    check_square(a)?;
    if a.rows() == 0 {
        return Ok(Vec::new());
    }
    let v = to_dense(a)
        .eigenvalues()
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let mut out: Vec<(f64, f64)> = v.iter().map(|z| (z.re, z.im)).collect();
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(out)
}

/// Spectral measure of `a` seen from the basis vectors in `window`.
pub fn window_spectrum(
    a: &SparseMatrix<f64>,
    window: &[usize],
    opts: &SpectrumOptions,
) -> Result<WindowSpectrum> {
    check_square(a)?;
    let n = a.rows();
    if let Some(&i) = window.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange {
            dim: 0,
            index: i,
            count: n,
        });
    }
    let limit = if opts.dense_limit == 0 {
        DENSE_LIMIT
    } else {
        opts.dense_limit
    };
    if n <= limit {
        let (values, u) = symmetric_eigen(a)?;
        let weights = (0..n)
            .map(|k| window.iter().map(|&i| u[(i, k)] * u[(i, k)]).sum())
            .collect();
        return Ok(WindowSpectrum {
            nodes: values,
            weights,
            method: SpectralMethod::Dense,
        });
    }
    let steps = if opts.lanczos_steps == 0 {
        400
    } else {
        opts.lanczos_steps
    };
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut known_weight = vec![0.0; opts.known.len()];
    let basis: Vec<Vec<f64>> = opts.known.iter().map(|(_, b)| b.clone()).collect();
    let mut v = vec![0.0; n];
    for &i in window {
        v.iter_mut().for_each(|x| *x = 0.0);
        v[i] = 1.0;
        for (k, b) in basis.iter().enumerate() {
            let c = b[i];
            known_weight[k] += c * c;
            axpy(-c, b, &mut v);
        }
        let norm2 = dot(&v, &v);
        if norm2 < 1e-14 {
            continue;
        }
        let (alpha, beta) = lanczos(a, &v, steps, &basis);
        let (theta, z) = tridiagonal_eigen(&alpha, &beta, &[0])?;
        for (k, &t) in theta.iter().enumerate() {
            nodes.push(t);
            weights.push(norm2 * z[0][k] * z[0][k]);
        }
    }
    for ((lambda, _), w) in opts.known.iter().zip(known_weight) {
        nodes.push(*lambda);
        weights.push(w);
    }
    Ok(WindowSpectrum {
        nodes,
        weights,
        method: SpectralMethod::Lanczos { steps },
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

/// Plain three-term Lanczos from `start` (normalized internally), keeping the
/// iterates orthogonal to the vectors in `deflate`. Returns the diagonal and off-diagonal of
/// the tridiagonal matrix.
pub fn lanczos(
    a: &SparseMatrix<f64>,
    start: &[f64],
    steps: usize,
    deflate: &[Vec<f64>],
) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let norm = dot(start, start).sqrt();
    let mut q: Vec<f64> = start.iter().map(|x| x / norm).collect();
    let mut q_prev = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    for s in 0..steps.min(n) {
        a.matvec(&q, &mut w);
        if s > 0 {
            axpy(-beta[s - 1], &q_prev, &mut w);
        }
        let al = dot(&q, &w);
        axpy(-al, &q, &mut w);
        for b in deflate {
            let c = dot(b, &w);
            axpy(-c, b, &mut w);
        }
        alpha.push(al);
        let be = dot(&w, &w).sqrt();
        if s + 1 == steps.min(n) || be <= 1e-12 * (al.abs() + 1.0) {
            break;
        }
        beta.push(be);
        std::mem::swap(&mut q_prev, &mut q);
        for (qi, wi) in q.iter_mut().zip(&w) {
            *qi = wi / be;
        }
    }
    (alpha, beta)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off`, with the requested rows of the eigenvector matrix.
/// Implicit QL with Wilkinson shifts; cost is quadratic in the size.
pub fn tridiagonal_eigen(
    diag: &[f64],
    off: &[f64],
    rows: &[usize],
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    if off.len() + 1 != n && !(n == 0 && off.is_empty()) {
        return Err(Error::DimensionMismatch(format!(
            "tridiagonal: {} diagonal vs {} off-diagonal entries",
            n,
            off.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z: Vec<Vec<f64>> = rows
        .iter()
        .map(|&r| (0..n).map(|k| if k == r { 1.0 } else { 0.0 }).collect())
        .collect();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Eigen("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let z = z
        .into_iter()
        .map(|row| order.iter().map(|&k| row[k]).collect())
        .collect();
    Ok((values, z))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TopEigenvalue {
    pub value: f64,
    /// Half-width of an interval around `value` known to contain an eigenvalue.
    pub residual: f64,
    pub method: SpectralMethod,
}

/// Largest eigenvalue of a symmetric matrix: dense below the limit, Lanczos
/// with full reorthogonalization above it.
pub fn largest_eigenvalue(a: &SparseMatrix<f64>) -> Result<TopEigenvalue> {
    check_square(a)?;
    let n = a.rows();
    if n == 0 {
        return Ok(TopEigenvalue {
            value: 0.0,
            residual: 0.0,
            method: SpectralMethod::Dense,
        });
    }
    if n <= DENSE_LIMIT {
        let v = eigenvalues(a)?;
        return Ok(TopEigenvalue {
            value: v[n - 1],
            residual: 0.0,
            method: SpectralMethod::Dense,
        });
    }
    let steps = 300.min(n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut q: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i * 7919) % 101) as f64 / 101.0)
        .collect();
    let norm = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|x| *x /= norm);
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut w = vec![0.0; n];
    let mut last_beta = 0.0;
    for s in 0..steps {
        a.matvec(&q, &mut w);
        let al = dot(&q, &w);
        alpha.push(al);
        basis.push(q.clone());
        for b in &basis {
            let c = dot(b, &w);
            axpy(-c, b, &mut w);
        }
        let be = dot(&w, &w).sqrt();
        last_beta = be;
        if s + 1 == steps || be < 1e-12 {
            break;
        }
        beta.push(be);
        q = w.iter().map(|x| x / be).collect();
    }
    let k = alpha.len();
    let (theta, z) = tridiagonal_eigen(&alpha, &beta, &[k - 1])?;
    Ok(TopEigenvalue {
        value: theta[k - 1],
        residual: (last_beta * z[0][k - 1]).abs(),
        method: SpectralMethod::Lanczos { steps: k },
    })
}

/// Orthonormal basis of locally constant functions on the vertices, one
/// vector per connected component: the kernel of `Δ_0`.
pub fn constant_kernel(cx: &CwComplex) -> Vec<(f64, Vec<f64>)> {
    let labels = component_labels(cx);
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &l in &labels {
        sizes[l] += 1;
    }
    (0..k)
        .map(|c| {
            let v = 1.0 / (sizes[c] as f64).sqrt();
            let b = labels
                .iter()
                .map(|&l| if l == c { v } else { 0.0 })
                .collect();
            (0.0, b)
        })
        .collect()
}

/// Component label of every vertex, numbered by lowest vertex.
pub fn component_labels(cx: &CwComplex) -> Vec<usize> {
    let n = cx.count(0);
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let dist = cx.bfs(0, &[s], Flavor::D, None);
        for (v, &d) in dist.iter().enumerate() {
            if d != usize::MAX {
                label[v] = next;
            }
        }
        next += 1;
    }
    label
}

const PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank of an integer matrix over `Z/p`.
pub fn rank_mod_p(m: &SparseMatrix<i64>, p: u64) -> usize {
    let (rows, cols) = if m.rows() <= m.cols() {
        (m.rows(), m.cols())
    } else {
        (m.cols(), m.rows())
    };
    let transposed = m.rows() > m.cols();
    let mut a = vec![0u64; rows * cols];
    for (r, c, v) in m.triplets() {
        let (r, c) = if transposed { (c, r) } else { (r, c) };
        a[r * cols + c] = v.rem_euclid(p as i64) as u64;
    }
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for c in col..cols {
                a.swap(piv * cols + c, rank * cols + c);
            }
        }
        let inv = pow_mod(a[rank * cols + col], p - 2, p);
        for r in rank + 1..rows {
            let f = a[r * cols + col];
            if f == 0 {
                continue;
            }
            let f = f * inv % p;
            for c in col..cols {
                let x = a[rank * cols + c];
                if x != 0 {
                    a[r * cols + c] = (a[r * cols + c] + p - f * x % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over `Q`, as the largest rank over two large primes.
pub fn rank(m: &SparseMatrix<i64>) -> usize {
    if m.nnz() == 0 {
        return 0;
    }
    PRIMES.iter().map(|&p| rank_mod_p(m, p)).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::*;
    use crate::operators::{laplacian, LaplacianKind};

    fn path_laplacian(n: usize) -> SparseMatrix<f64> {
        let mut t = Vec::new();
        for i in 0..n {
            let deg = if i == 0 || i + 1 == n { 1.0 } else { 2.0 };
            t.push((i, i, deg));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        SparseMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn path_spectrum_closed_form() {
        let n = 12;
        let v = eigenvalues(&path_laplacian(n)).unwrap();
        for (k, &x) in v.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * k as f64 / n as f64).cos();
            assert!((x - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let diag: Vec<f64> = (0..30)
            .map(|i| ((i * 37) % 11) as f64 * 0.3 - 1.0)
            .collect();
        let off: Vec<f64> = (0..29).map(|i| ((i * 13) % 7) as f64 * 0.2 + 0.1).collect();
        let mut t = Vec::new();
        for i in 0..30 {
            t.push((i, i, diag[i]));
            if i < 29 {
                t.push((i, i + 1, off[i]));
                t.push((i + 1, i, off[i]));
            }
        }
        let m = SparseMatrix::from_triplets(30, 30, t);
        let (vals, u) = symmetric_eigen(&m).unwrap();
        let (theta, z) = tridiagonal_eigen(&diag, &off, &[0, 29]).unwrap();
        for k in 0..30 {
            assert!((vals[k] - theta[k]).abs() < 1e-12);
            assert!((u[(0, k)].abs() - z[0][k].abs()).abs() < 1e-9);
            assert!((u[(29, k)].abs() - z[1][k].abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn window_weights_sum_to_window_size() {
        let a = path_laplacian(40);
        let w: Vec<usize> = (0..15).collect();
        let s = window_spectrum(&a, &w, &SpectrumOptions::default()).unwrap();
        assert!((s.total() - 15.0).abs() < 1e-10);
        let diag: f64 = (0..15).map(|i| a.get(i, i)).sum();
        assert!((s.integrate(|x| x) - diag).abs() < 1e-10);
    }

    #[test]
    fn lanczos_quadrature_matches_dense() {
        let a = path_laplacian(300);
        let w: Vec<usize> = (100..140).collect();
        let dense = window_spectrum(&a, &w, &SpectrumOptions::default()).unwrap();
        let opts = SpectrumOptions {
            dense_limit: 10,
            lanczos_steps: 200,
            known: vec![(0.0, vec![1.0 / (300f64).sqrt(); 300])],
        };
        let lz = window_spectrum(&a, &w, &opts).unwrap();
        for t in [0.1, 1.0, 10.0, 100.0, 1000.0] {
            let x = dense.integrate(|l| (-t * l).exp());
            let y = lz.integrate(|l| (-t * l).exp());
            assert!((x - y).abs() < 1e-9 * x.max(1.0), "t={t}: {x} vs {y}");
        }
    }

    #[test]
    fn top_eigenvalue_lanczos_vs_dense() {
        let a = path_laplacian(4100);
        let top = largest_eigenvalue(&a).unwrap();
        let exact = 2.0 + 2.0 * (std::f64::consts::PI / 4100.0).cos();
        assert!(matches!(top.method, SpectralMethod::Lanczos { .. }));
        assert!((top.value - exact).abs() < 1e-6 + top.residual);
    }

    #[test]
    fn ranks_of_boundaries() {
        let sq = square();
        let d1 = crate::operators::boundary_matrix(&sq, 1).unwrap();
        let d2 = crate::operators::boundary_matrix(&sq, 2).unwrap();
        assert_eq!(rank(d1.as_integer().unwrap()), 3);
        assert_eq!(rank(d2.as_integer().unwrap()), 1);
        // Δ_0 of the 4-cycle has rank 3
        let l = laplacian(&sq, 0, LaplacianKind::Full, false).unwrap();
        assert_eq!(rank(l.as_integer().unwrap()), 3);
    }

    #[test]
    fn components_of_disjoint_graph() {
        let g = graph(5, &[(0, 1), (3, 4)]);
        assert_eq!(component_labels(&g), vec![0, 0, 1, 2, 2]);
        let k = constant_kernel(&g);
        assert_eq!(k.len(), 3);
        assert!((dot(&k[0].1, &k[0].1) - 1.0).abs() < 1e-15);
    }
}
