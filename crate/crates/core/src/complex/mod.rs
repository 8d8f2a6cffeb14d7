//! Finite regular CW-complexes stored as signed incidence tables.
//!
//! Cells are addressed by `(dim, index)` with dense indices per dimension.
//! Incidence numbers are kept as integers so that malformed input can be
//! diagnosed by [`CwComplex::validate`] instead of rejected at parse time.

mod io;
mod mask;
mod metric;

pub use io::{read_complex, write_complex};
pub use mask::{boundary_subcomplex, SubcomplexMask};
pub use metric::{Distance, Flavor};

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellId {
    pub dim: usize,
    pub index: usize,
}

impl CellId {
    pub fn new(dim: usize, index: usize) -> Self {
        CellId { dim, index }
    }
}

impl std::fmt::Display for CellId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.dim, self.index)
    }
}

/// `[cell : face] = number`, with `face.dim + 1 == cell.dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct IncidenceRecord {
    pub cell: CellId,
    pub face: CellId,
    pub number: i32,
}

impl IncidenceRecord {
    pub fn new(dim: usize, cell: usize, face: usize, number: i32) -> Self {
        IncidenceRecord {
            cell: CellId::new(dim, cell),
            face: CellId::new(dim - 1, face),
            number,
        }
    }
}

/// Per-dimension maxima of coface counts, face counts and 1-ball sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBounds {
    pub v_plus: Vec<usize>,
    pub v_minus: Vec<usize>,
    pub mu: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    NonRegular {
        record: IncidenceRecord,
    },
    DuplicateRecord {
        cell: CellId,
        face: CellId,
    },
    BoundaryOfBoundary {
        cell: CellId,
        face: CellId,
        sum: i64,
    },
    EdgeOrientation {
        edge: usize,
        sum: i64,
    },
    EdgeEndpoints {
        edge: usize,
        count: usize,
    },
    Unattached {
        cell: CellId,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonRegular { record } => write!(
                f,
                "non-regular incidence [{} : {}] = {}",
                record.cell, record.face, record.number
            ),
            Violation::DuplicateRecord { cell, face } => {
                write!(f, "duplicate incidence record [{cell} : {face}]")
            }
            Violation::BoundaryOfBoundary { cell, face, sum } => {
                write!(
                    f,
                    "boundary of boundary nonzero: cell {cell}, face {face}, sum {sum}"
                )
            }
            Violation::EdgeOrientation { edge, sum } => {
                write!(f, "edge {edge} endpoint incidences sum to {sum}")
            }
            Violation::EdgeEndpoints { edge, count } => {
                write!(f, "edge {edge} has {count} endpoint records")
            }
            Violation::Unattached { cell } => write!(f, "cell {cell} has no faces"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An immutable finite CW-complex of dimension `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwComplex {
    counts: Vec<usize>,
    // records[j] holds the incidences of j-cells, sorted; records[0] is empty
    records: Vec<Vec<IncidenceRecord>>,
    faces: Vec<Vec<Vec<(usize, i32)>>>,
    cofaces: Vec<Vec<Vec<(usize, i32)>>>,
}

impl CwComplex {
    /// Builds a complex from cell counts (`counts[j] = |E_j|`) and incidence records.
    pub fn new(counts: Vec<usize>, mut records: Vec<IncidenceRecord>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidArgument(
                "complex needs at least one dimension".into(),
            ));
        }
        let p = counts.len() - 1;
        for r in &records {
            if r.cell.dim == 0 || r.cell.dim > p || r.face.dim + 1 != r.cell.dim {
                return Err(Error::DimensionMismatch(format!(
                    "record [{} : {}] in a complex of dimension {p}",
                    r.cell, r.face
                )));
            }
            for c in [r.cell, r.face] {
                if c.index >= counts[c.dim] {
                    return Err(Error::IndexOutOfRange {
                        dim: c.dim,
                        index: c.index,
                        count: counts[c.dim],
                    });
                }
            }
        }
        records.sort();
        let mut by_dim = vec![Vec::new(); p + 1];
        for r in records {
            by_dim[r.cell.dim].push(r);
        }
        let mut faces: Vec<Vec<Vec<(usize, i32)>>> =
            counts.iter().map(|&n| vec![Vec::new(); n]).collect();
        let mut cofaces: Vec<Vec<Vec<(usize, i32)>>> =
            counts.iter().map(|&n| vec![Vec::new(); n]).collect();
        for recs in &by_dim {
            for r in recs {
                faces[r.cell.dim][r.cell.index].push((r.face.index, r.number));
                cofaces[r.face.dim][r.face.index].push((r.cell.index, r.number));
            }
        }
        for list in cofaces.iter_mut().flatten() {
            list.sort();
        }
        Ok(CwComplex {
            counts,
            records: by_dim,
            faces,
            cofaces,
        })
    }

    pub fn dim(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of `j`-cells; zero above the top dimension.
    pub fn count(&self, j: usize) -> usize {
        self.counts.get(j).copied().unwrap_or(0)
    }

    /// Incidence records of the `j`-cells, sorted lexicographically.
    pub fn records(&self, j: usize) -> &[IncidenceRecord] {
        self.records.get(j).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn all_records(&self) -> impl Iterator<Item = &IncidenceRecord> {
        self.records.iter().flatten()
    }

    /// `(face index, incidence)` pairs of a `j`-cell.
    pub fn faces(&self, j: usize, index: usize) -> &[(usize, i32)] {
        &self.faces[j][index]
    }

    /// `(coface index, incidence)` pairs of a `j`-cell, sorted by coface.
    pub fn cofaces(&self, j: usize, index: usize) -> &[(usize, i32)] {
        &self.cofaces[j][index]
    }

    pub fn total_cells(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Alternating sum of cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(j, &n)| if j % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// The subcomplex of cells of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> CwComplex {
        let k = k.min(self.dim());
        let counts = self.counts[..=k].to_vec();
        let records = self.records[..=k].iter().flatten().copied().collect();
        CwComplex::new(counts, records).expect("skeleton of a valid complex")
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for recs in &self.records {
            for r in recs {
                if r.number != 1 && r.number != -1 {
                    violations.push(Violation::NonRegular { record: *r });
                }
            }
            for w in recs.windows(2) {
                if w[0].cell == w[1].cell && w[0].face == w[1].face {
                    violations.push(Violation::DuplicateRecord {
                        cell: w[0].cell,
                        face: w[0].face,
                    });
                }
            }
        }
        for j in 1..=self.dim() {
            for i in 0..self.counts[j] {
                if self.faces[j][i].is_empty() {
                    violations.push(Violation::Unattached {
                        cell: CellId::new(j, i),
                    });
                }
            }
        }
        if self.dim() >= 1 {
            for e in 0..self.counts[1] {
                let f = &self.faces[1][e];
                if !f.is_empty() && f.len() != 2 {
                    violations.push(Violation::EdgeEndpoints {
                        edge: e,
                        count: f.len(),
                    });
                }
                let sum: i64 = f.iter().map(|&(_, s)| s as i64).sum();
                if sum != 0 {
                    violations.push(Violation::EdgeOrientation { edge: e, sum });
                }
            }
        }
        for j in 2..=self.dim() {
            for t in 0..self.counts[j] {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(s, a) in &self.faces[j][t] {
                    for &(r, b) in &self.faces[j - 1][s] {
                        *acc.entry(r).or_insert(0) += a as i64 * b as i64;
                    }
                }
                for (r, sum) in acc {
                    if sum != 0 {
                        violations.push(Violation::BoundaryOfBoundary {
                            cell: CellId::new(j, t),
                            face: CellId::new(j - 2, r),
                            sum,
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn degree_bounds(&self) -> DegreeBounds {
        let p = self.dim();
        let mut v_plus = vec![0; p + 1];
        let mut v_minus = vec![0; p + 1];
        let mut mu = vec![0; p + 1];
        for j in 0..=p {
            for i in 0..self.counts[j] {
                v_plus[j] = v_plus[j].max(self.cofaces[j][i].len());
                v_minus[j] = v_minus[j].max(self.faces[j][i].len());
                let b = self.neighbors(CellId::new(j, i), Flavor::D).len() + 1;
                mu[j] = mu[j].max(b);
            }
        }
        DegreeBounds {
            v_plus,
            v_minus,
            mu,
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Oriented triangle: vertices 0,1,2; edges 0→1, 1→2, 2→0; one 2-cell.
    pub fn triangle() -> CwComplex {
        let recs = vec![
            IncidenceRecord::new(1, 0, 0, -1),
            IncidenceRecord::new(1, 0, 1, 1),
            IncidenceRecord::new(1, 1, 1, -1),
            IncidenceRecord::new(1, 1, 2, 1),
            IncidenceRecord::new(1, 2, 2, -1),
            IncidenceRecord::new(1, 2, 0, 1),
            IncidenceRecord::new(2, 0, 0, 1),
            IncidenceRecord::new(2, 0, 1, 1),
            IncidenceRecord::new(2, 0, 2, 1),
        ];
        CwComplex::new(vec![3, 3, 1], recs).unwrap()
    }

    /// Graph from an edge list, edges oriented tail → head.
    pub fn graph(n: usize, edges: &[(usize, usize)]) -> CwComplex {
        let mut recs = Vec::new();
        for (e, &(a, b)) in edges.iter().enumerate() {
            recs.push(IncidenceRecord::new(1, e, a, -1));
            recs.push(IncidenceRecord::new(1, e, b, 1));
        }
        CwComplex::new(vec![n, edges.len()], recs).unwrap()
    }

    /// Two unit squares side by side sharing the middle vertical edge.
    ///
    /// Vertices (x,y) with index x + 3y for x∈0..3, y∈0..2.
    /// Horizontal edges 0..4: h(x,y) = x + 2y; vertical edges 4..7: v(x) = 4 + x.
    pub fn two_squares() -> CwComplex {
        let v = |x: usize, y: usize| x + 3 * y;
        let mut recs = Vec::new();
        for y in 0..2 {
            for x in 0..2 {
                let e = x + 2 * y;
                recs.push(IncidenceRecord::new(1, e, v(x, y), -1));
                recs.push(IncidenceRecord::new(1, e, v(x + 1, y), 1));
            }
        }
        for x in 0..3 {
            recs.push(IncidenceRecord::new(1, 4 + x, v(x, 0), -1));
            recs.push(IncidenceRecord::new(1, 4 + x, v(x, 1), 1));
        }
        for s in 0..2 {
            recs.push(IncidenceRecord::new(2, s, s, 1));
            recs.push(IncidenceRecord::new(2, s, 4 + s + 1, 1));
            recs.push(IncidenceRecord::new(2, s, 2 + s, -1));
            recs.push(IncidenceRecord::new(2, s, 4 + s, -1));
        }
        CwComplex::new(vec![6, 7, 2], recs).unwrap()
    }

    /// A single unit square.
    pub fn square() -> CwComplex {
        let recs = vec![
            IncidenceRecord::new(1, 0, 0, -1),
            IncidenceRecord::new(1, 0, 1, 1),
            IncidenceRecord::new(1, 1, 1, -1),
            IncidenceRecord::new(1, 1, 2, 1),
            IncidenceRecord::new(1, 2, 3, -1),
            IncidenceRecord::new(1, 2, 2, 1),
            IncidenceRecord::new(1, 3, 0, -1),
            IncidenceRecord::new(1, 3, 3, 1),
            IncidenceRecord::new(2, 0, 0, 1),
            IncidenceRecord::new(2, 0, 1, 1),
            IncidenceRecord::new(2, 0, 2, -1),
            IncidenceRecord::new(2, 0, 3, -1),
        ];
        CwComplex::new(vec![4, 4, 1], recs).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn triangle_validates() {
        assert!(triangle().validate().is_ok());
        assert!(square().validate().is_ok());
        assert!(two_squares().validate().is_ok());
    }

    #[test]
    fn bad_edge_orientation_is_named() {
        let cx = CwComplex::new(
            vec![2, 1],
            vec![
                IncidenceRecord::new(1, 0, 0, 1),
                IncidenceRecord::new(1, 0, 1, 1),
            ],
        )
        .unwrap();
        let rep = cx.validate();
        assert_eq!(
            rep.violations,
            vec![Violation::EdgeOrientation { edge: 0, sum: 2 }]
        );
    }

    #[test]
    fn boundary_of_boundary_witness() {
        let mut recs: Vec<_> = triangle().all_records().copied().collect();
        let last = recs.len() - 1;
        recs[last].number = -1;
        let cx = CwComplex::new(vec![3, 3, 1], recs).unwrap();
        let rep = cx.validate();
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, Violation::BoundaryOfBoundary { .. })));
    }

    #[test]
    fn non_regular_and_duplicates_reported() {
        let cx = CwComplex::new(
            vec![2, 1],
            vec![
                IncidenceRecord::new(1, 0, 0, -2),
                IncidenceRecord::new(1, 0, 1, 1),
                IncidenceRecord::new(1, 0, 1, 1),
            ],
        )
        .unwrap();
        let rep = cx.validate();
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonRegular { .. })));
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateRecord { .. })));
    }

    #[test]
    fn out_of_range_rejected() {
        let r = CwComplex::new(vec![2, 1], vec![IncidenceRecord::new(1, 0, 5, 1)]);
        assert!(matches!(r, Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn degree_bounds_of_path() {
        let cx = graph(3, &[(0, 1), (1, 2)]);
        let b = cx.degree_bounds();
        assert_eq!(b.v_plus, vec![2, 0]);
        assert_eq!(b.v_minus, vec![0, 2]);
        assert_eq!(b.mu, vec![3, 2]);
        for j in 0..=cx.dim() {
            assert!(b.mu[j] <= b.v_plus[j] + b.v_minus[j] + 1);
        }
    }

    #[test]
    fn skeleton_and_euler() {
        let t = triangle();
        assert_eq!(t.euler_characteristic(), 1);
        let s = t.skeleton(1);
        assert_eq!(s.counts(), &[3, 3]);
        assert_eq!(s.euler_characteristic(), 0);
    }
}
