use super::SparseMatrix;
use crate::builders::LocalIsomorphism;
use crate::complex::{CellId, CwComplex};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::ops::{Add, Mul};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricReport {
    /// Source cells whose `r`-ball and the image's `r`-ball stay inside source and range.
    pub testable: usize,
    /// Source cells where `T V σ ≠ V T σ` or `T V* γσ ≠ V* T γσ`.
    pub failures: Vec<usize>,
}

impl GeometricReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `op` (on the `j`-cells of `ambient`) commutes with the partial
/// isometry of `iso` on every cell that is at least `r` away from the edges of
/// the source and the range.
pub fn verify_geometric<T>(
    op: &SparseMatrix<T>,
    ambient: &CwComplex,
    iso: &LocalIsomorphism,
    j: usize,
    r: usize,
) -> GeometricReport
where
    T: Copy + Zero + Add<Output = T> + Mul<Output = T> + PartialEq,
{
    let n_src = iso.source_len(j);
    let mut inverse = BTreeMap::new();
    for i in 0..n_src {
        inverse.insert(iso.map.cells[j][i], i);
    }
    let transpose = op.transpose();
    let col = |c: usize| -> BTreeMap<usize, T> { transpose.row(c).collect() };

    let mut testable = 0;
    let mut failures = Vec::new();
    for s in 0..n_src {
        let img = iso.map.cells[j][s];
        let ball_s = ambient.ball_of_set(j, &[s], r);
        let ball_i = ambient.ball_of_set(j, &[img], r);
        if !ball_s
            .iter()
            .all(|&c| iso.source.contains(CellId::new(j, c)))
            || !ball_i
                .iter()
                .all(|&c| iso.target.contains(CellId::new(j, c)))
        {
            continue;
        }
        testable += 1;
        // T V σ = column img of T; V T σ = image of column s restricted to the source
        let tv: BTreeMap<usize, T> = col(img);
        let mut vt: BTreeMap<usize, T> = BTreeMap::new();
        for (row, v) in col(s) {
            if row < n_src {
                vt.insert(iso.map.cells[j][row], v);
            }
        }
        // T V* (γσ) = column s of T; V* T (γσ) = preimage of column img within the range
        let tvs: BTreeMap<usize, T> = col(s);
        let mut vst: BTreeMap<usize, T> = BTreeMap::new();
        for (row, v) in col(img) {
            if let Some(&pre) = inverse.get(&row) {
                vst.insert(pre, v);
            }
        }
        if tv != vt || tvs != vst {
            failures.push(s);
        }
    }
    GeometricReport { testable, failures }
}
