use super::{OperatorMatrix, SparseMatrix, Storage, Variant};
use crate::builders::Exhaustion;
use crate::complex::{boundary_subcomplex, CellId, CwComplex};
use crate::error::{Error, Result};
use num_rational::Rational64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianKind {
    Plus,
    Minus,
    Full,
}

impl LaplacianKind {
    fn variant(self, relative: bool) -> Variant {
        match (self, relative) {
            (LaplacianKind::Plus, false) => Variant::DeltaPlus,
            (LaplacianKind::Minus, false) => Variant::DeltaMinus,
            (LaplacianKind::Full, false) => Variant::Delta,
            (LaplacianKind::Plus, true) => Variant::RelDeltaPlus,
            (LaplacianKind::Minus, true) => Variant::RelDeltaMinus,
            (LaplacianKind::Full, true) => Variant::RelDelta,
        }
    }
}

/// A symmetric operator on `j`-cells, chosen for spectral evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorSpec {
    Laplacian {
        kind: LaplacianKind,
        relative: bool,
    },
    /// `Δ_c = I - P`, represented by its symmetric conjugate `Q`.
    DeltaC,
}

impl OperatorSpec {
    pub fn delta(kind: LaplacianKind) -> Self {
        OperatorSpec::Laplacian {
            kind,
            relative: false,
        }
    }

    pub fn tag(&self, j: usize) -> String {
        match self {
            OperatorSpec::Laplacian { kind, relative } => {
                format!("{}[j={j}]", kind.variant(*relative).name())
            }
            OperatorSpec::DeltaC => "delta_c[j=0]".to_string(),
        }
    }
}

fn check_j(cx: &CwComplex, j: usize) -> Result<()> {
    if j > cx.dim() {
        return Err(Error::InvalidVariant(format!(
            "j = {j} exceeds complex dimension {}",
            cx.dim()
        )));
    }
    Ok(())
}

fn boundary_raw(
    cx: &CwComplex,
    j: usize,
    keep: Option<&dyn Fn(CellId) -> bool>,
) -> SparseMatrix<i64> {
    let trips = cx
        .records(j)
        .iter()
        .filter(|r| keep.is_none_or(|k| k(r.cell) && k(r.face)))
        .map(|r| (r.face.index, r.cell.index, r.number as i64))
        .collect();
    SparseMatrix::from_triplets(cx.count(j - 1), cx.count(j), trips)
}

/// `∂_j` as an `|E_{j-1}| × |E_j|` integer matrix.
pub fn boundary_matrix(cx: &CwComplex, j: usize) -> Result<OperatorMatrix> {
    if j == 0 || j > cx.dim() {
        return Err(Error::InvalidVariant(format!(
            "boundary_j needs 1 <= j <= {}, got {j}",
            cx.dim()
        )));
    }
    Ok(OperatorMatrix::integer(
        Variant::Boundary,
        j,
        boundary_raw(cx, j, None),
    ))
}

/// `∂̄_j`: the boundary restricted to cells outside the boundary subcomplex,
/// zero-extended to the full index spaces.
pub fn rel_boundary_matrix(cx: &CwComplex, j: usize) -> Result<OperatorMatrix> {
    if j == 0 || j > cx.dim() {
        return Err(Error::InvalidVariant(format!(
            "rel_boundary_j needs 1 <= j <= {}, got {j}",
            cx.dim()
        )));
    }
    let bd = boundary_subcomplex(cx)?;
    let keep = |c: CellId| !bd.contains(c);
    Ok(OperatorMatrix::integer(
        Variant::RelBoundary,
        j,
        boundary_raw(cx, j, Some(&keep)),
    ))
}

/// `Δ_{j+} = ∂_{j+1}∂*_{j+1}`, `Δ_{j-} = ∂*_j∂_j` or their sum; the relative
/// versions use `∂̄`. Half-Laplacians past either end of the complex are zero.
pub fn laplacian(
    cx: &CwComplex,
    j: usize,
    kind: LaplacianKind,
    relative: bool,
) -> Result<OperatorMatrix> {
    check_j(cx, j)?;
    let n = cx.count(j);
    let bd = if relative {
        Some(boundary_subcomplex(cx)?)
    } else {
        None
    };
    let keep_fn = |c: CellId| bd.as_ref().is_none_or(|m| !m.contains(c));
    let keep: Option<&dyn Fn(CellId) -> bool> = if relative { Some(&keep_fn) } else { None };
    let plus = || {
        if j < cx.dim() {
            let b = boundary_raw(cx, j + 1, keep);
            b.matmul(&b.transpose())
        } else {
            SparseMatrix::zeros(n, n)
        }
    };
    let minus = || {
        if j >= 1 {
            let b = boundary_raw(cx, j, keep);
            b.transpose().matmul(&b)
        } else {
            SparseMatrix::zeros(n, n)
        }
    };
    let m = match kind {
        LaplacianKind::Plus => plus(),
        LaplacianKind::Minus => minus(),
        LaplacianKind::Full => plus().add(&minus()),
    };
    Ok(OperatorMatrix::integer(kind.variant(relative), j, m))
}

/// The Laplacian assembled on `K_m` and compressed to the `j`-cells of `K_n`.
pub fn ambient_laplacian(
    ex: &Exhaustion,
    n: usize,
    m: usize,
    j: usize,
    kind: LaplacianKind,
    relative: bool,
) -> Result<OperatorMatrix> {
    if n > m || m > ex.top_level() {
        return Err(Error::InvalidArgument(format!(
            "need n <= m <= {}, got n = {n}, m = {m}",
            ex.top_level()
        )));
    }
    let op = laplacian(ex.level(m), j, kind, relative)?;
    let k = ex.level(n).count(j);
    let block = op.as_integer().expect("integer").leading_block(k, k);
    Ok(OperatorMatrix::integer(op.variant, j, block).at_level(n))
}

/// Symmetric real matrix for the given spec on `j`-cells.
pub fn spec_matrix(cx: &CwComplex, j: usize, spec: OperatorSpec) -> Result<SparseMatrix<f64>> {
    match spec {
        OperatorSpec::Laplacian { kind, relative } => {
            Ok(laplacian(cx, j, kind, relative)?.to_f64())
        }
        OperatorSpec::DeltaC => {
            if j != 0 {
                return Err(Error::InvalidVariant(
                    "delta_c acts on vertices (j = 0)".into(),
                ));
            }
            Ok(walk_operators(cx)?.q.to_f64())
        }
    }
}

/// `A`, `C`, `P = C⁻¹A`, `Δ_c = I - P` and `Q = C^{-1/2}ΔC^{-1/2}` of the 1-skeleton.
#[derive(Clone, Debug)]
pub struct WalkOperators {
    pub adjacency: OperatorMatrix,
    pub degree: OperatorMatrix,
    pub transition: OperatorMatrix,
    pub delta_c: OperatorMatrix,
    pub q: OperatorMatrix,
    pub degrees: Vec<i64>,
}

impl WalkOperators {
    /// `S = C^{-1/2} A C^{-1/2}`, symmetric and similar to `P`.
    pub fn symmetric_transition(&self) -> SparseMatrix<f64> {
        let a = self.adjacency.as_integer().expect("integer adjacency");
        let d = &self.degrees;
        let trips = a
            .triplets()
            .map(|(r, c, v)| (r, c, v as f64 / ((d[r] * d[c]) as f64).sqrt()))
            .collect();
        SparseMatrix::from_triplets(a.rows(), a.cols(), trips)
    }
}

pub fn walk_operators(cx: &CwComplex) -> Result<WalkOperators> {
    if cx.dim() < 1 {
        return Err(Error::InvalidArgument("walk operators need edges".into()));
    }
    let n = cx.count(0);
    let mut trips = Vec::new();
    for e in 0..cx.count(1) {
        let f = cx.faces(1, e);
        if f.len() == 2 && f[0].0 != f[1].0 {
            trips.push((f[0].0, f[1].0, 1i64));
            trips.push((f[1].0, f[0].0, 1i64));
        }
    }
    let a = SparseMatrix::from_triplets(n, n, trips);
    let degrees: Vec<i64> = (0..n).map(|r| a.row(r).map(|(_, v)| v).sum()).collect();
    if let Some(x) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedVertex(x));
    }
    let c = SparseMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, degrees[i])).collect());
    let p = SparseMatrix::from_triplets(
        n,
        n,
        a.triplets()
            .map(|(r, col, v)| (r, col, Rational64::new(v, degrees[r])))
            .collect(),
    );
    let dc = SparseMatrix::<Rational64>::identity(n).sub(&p);
    let delta = c.sub(&a);
    let q = SparseMatrix::from_triplets(
        n,
        n,
        delta
            .triplets()
            .map(|(r, col, v)| {
                (
                    r,
                    col,
                    v as f64 / ((degrees[r] * degrees[col]) as f64).sqrt(),
                )
            })
            .collect(),
    );
    let wrap = |variant, storage| OperatorMatrix {
        variant,
        j: 0,
        level: None,
        storage,
    };
    Ok(WalkOperators {
        adjacency: wrap(Variant::Adjacency, Storage::Integer(a)),
        degree: wrap(Variant::Degree, Storage::Integer(c)),
        transition: wrap(Variant::Transition, Storage::Rational(p)),
        delta_c: wrap(Variant::DeltaC, Storage::Rational(dc)),
        q: wrap(Variant::Q, Storage::Real(q)),
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_carpet_complex, build_gasket, dual_graph};
    use crate::complex::fixtures::*;
    use num_traits::{One, Zero};

    #[test]
    fn triangle_boundary_columns_sum_to_zero() {
        let t = triangle();
        let b = boundary_matrix(&t, 1).unwrap();
        let m = b.as_integer().unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 3));
        for c in 0..3 {
            assert_eq!((0..3).map(|r| m.get(r, c)).sum::<i64>(), 0);
        }
        assert!(boundary_matrix(&t, 0).is_err());
        assert!(boundary_matrix(&t, 3).is_err());
    }

    #[test]
    fn boundary_of_boundary_on_square() {
        let sq = square();
        let b1 = boundary_matrix(&sq, 1).unwrap();
        let b2 = boundary_matrix(&sq, 2).unwrap();
        assert!(b1
            .as_integer()
            .unwrap()
            .matmul(b2.as_integer().unwrap())
            .is_zero());
    }

    #[test]
    fn triangle_graph_laplacian() {
        let t = triangle().skeleton(1);
        let l = laplacian(&t, 0, LaplacianKind::Full, false).unwrap();
        let d = l.as_integer().unwrap().to_dense();
        assert_eq!(d, vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]);
    }

    #[test]
    fn square_minus_diagonal_is_two() {
        let l = laplacian(&square(), 1, LaplacianKind::Minus, false).unwrap();
        assert_eq!(l.as_integer().unwrap().diagonal(), vec![2, 2, 2, 2]);
    }

    #[test]
    fn plus_diagonal_counts_cofaces() {
        let cx = two_squares();
        let l = laplacian(&cx, 1, LaplacianKind::Plus, false).unwrap();
        let diag = l.as_integer().unwrap().diagonal();
        for (e, d) in diag.iter().enumerate() {
            assert_eq!(*d as usize, cx.cofaces(1, e).len());
        }
    }

    #[test]
    fn edge_cases_are_zero_or_errors() {
        let g = graph(2, &[(0, 1)]);
        let z = laplacian(&g, 0, LaplacianKind::Minus, false).unwrap();
        assert!(z.as_integer().unwrap().is_zero());
        let z = laplacian(&g, 1, LaplacianKind::Plus, false).unwrap();
        assert!(z.as_integer().unwrap().is_zero());
        assert!(laplacian(&g, 2, LaplacianKind::Full, false).is_err());
    }

    #[test]
    fn relative_vanishes_on_boundary_cells() {
        let ex = build_carpet_complex(2).unwrap();
        let cx = ex.level(2);
        let bd = boundary_subcomplex(cx).unwrap();
        let l = laplacian(cx, 1, LaplacianKind::Full, true).unwrap();
        for (r, c, _) in l.as_integer().unwrap().triplets() {
            assert!(!bd.contains(CellId::new(1, r)) && !bd.contains(CellId::new(1, c)));
        }
    }

    #[test]
    fn carpet_rel_minus_is_dual_cycle_laplacian() {
        let ex = build_carpet_complex(1).unwrap();
        let cx = ex.level(1);
        let rel = laplacian(cx, 2, LaplacianKind::Minus, true).unwrap();
        let dual = dual_graph(cx).unwrap();
        let w = walk_operators(&dual).unwrap();
        let m = rel.as_integer().unwrap();
        let a = w.adjacency.as_integer().unwrap();
        for r in 0..8 {
            for c in 0..8 {
                let want = if r == c { w.degrees[r] } else { -a.get(r, c) };
                assert_eq!(m.get(r, c).abs(), want.abs());
                if r == c {
                    assert_eq!(m.get(r, c), want);
                }
            }
        }
    }

    #[test]
    fn walk_operators_basic() {
        let t = triangle().skeleton(1);
        let w = walk_operators(&t).unwrap();
        let p = w.transition.as_rational().unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let want = if r == c {
                    Rational64::zero()
                } else {
                    Rational64::new(1, 2)
                };
                assert_eq!(p.get(r, c), want);
            }
        }
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let w = walk_operators(&star).unwrap();
        let p = w.transition.as_rational().unwrap();
        assert_eq!(p.get(0, 1), Rational64::new(1, 3));
        assert_eq!(p.get(1, 0), Rational64::one());
        assert!(matches!(
            walk_operators(&graph(3, &[(0, 1)])),
            Err(Error::IsolatedVertex(2))
        ));
    }

    #[test]
    fn gasket_transition_rows_sum_to_one() {
        let ex = build_gasket(2).unwrap();
        let w = walk_operators(ex.level(2)).unwrap();
        let p = w.transition.as_rational().unwrap();
        for r in 0..p.rows() {
            let s: Rational64 = p
                .row(r)
                .map(|(_, v)| v)
                .fold(Rational64::zero(), |a, b| a + b);
            assert_eq!(s, Rational64::one());
        }
        let delta = laplacian(ex.level(2), 0, LaplacianKind::Full, false).unwrap();
        let c = w.degree.as_integer().unwrap();
        let a = w.adjacency.as_integer().unwrap();
        assert_eq!(c.sub(a), *delta.as_integer().unwrap());
    }

    #[test]
    fn ambient_block_matches_interior_rows() {
        let ex = build_gasket(3).unwrap();
        let amb = ambient_laplacian(&ex, 2, 3, 0, LaplacianKind::Full, false).unwrap();
        let m = amb.as_integer().unwrap();
        assert_eq!(m.rows(), ex.level(2).count(0));
        // corner A of K_2 keeps degree 2 in K_3; glued corners gain neighbors
        let intrinsic = laplacian(ex.level(2), 0, LaplacianKind::Full, false).unwrap();
        let diff = m.sub(intrinsic.as_integer().unwrap());
        assert_eq!(diff.nnz(), 2);
    }
}
