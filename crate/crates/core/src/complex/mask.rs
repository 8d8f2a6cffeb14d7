use super::{CellId, CwComplex};
use crate::error::{Error, Result};

/// Per-dimension membership of cells of a parent complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcomplexMask {
    members: Vec<Vec<bool>>,
}

impl SubcomplexMask {
    pub fn empty(cx: &CwComplex) -> Self {
        SubcomplexMask {
            members: cx.counts().iter().map(|&n| vec![false; n]).collect(),
        }
    }

    pub fn whole(cx: &CwComplex) -> Self {
        SubcomplexMask {
            members: cx.counts().iter().map(|&n| vec![true; n]).collect(),
        }
    }

    /// Mask of the first `counts[j]` cells in every dimension.
    pub fn prefix(cx: &CwComplex, counts: &[usize]) -> Self {
        SubcomplexMask {
            members: cx
                .counts()
                .iter()
                .enumerate()
                .map(|(j, &n)| {
                    let k = counts.get(j).copied().unwrap_or(0).min(n);
                    (0..n).map(|i| i < k).collect()
                })
                .collect(),
        }
    }

    /// Smallest closed mask containing the given cells.
    pub fn from_cells(cx: &CwComplex, cells: &[CellId]) -> Self {
        let mut m = Self::empty(cx);
        for &c in cells {
            m.members[c.dim][c.index] = true;
        }
        m.close(cx);
        m
    }

    pub fn contains(&self, c: CellId) -> bool {
        self.members
            .get(c.dim)
            .and_then(|v| v.get(c.index))
            .copied()
            .unwrap_or(false)
    }

    pub fn insert(&mut self, c: CellId) {
        self.members[c.dim][c.index] = true;
    }

    pub fn bits(&self, j: usize) -> &[bool] {
        &self.members[j]
    }

    pub fn cells(&self, j: usize) -> Vec<usize> {
        self.members[j]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn count(&self, j: usize) -> usize {
        self.members
            .get(j)
            .map_or(0, |v| v.iter().filter(|&&b| b).count())
    }

    /// Adds all faces of members, top-down.
    pub fn close(&mut self, cx: &CwComplex) {
        for j in (1..self.members.len()).rev() {
            for i in 0..self.members[j].len() {
                if self.members[j][i] {
                    for &(f, _) in cx.faces(j, i) {
                        self.members[j - 1][f] = true;
                    }
                }
            }
        }
    }

    /// First member with a face outside the mask, if any.
    pub fn closure_witness(&self, cx: &CwComplex) -> Option<(CellId, CellId)> {
        for j in 1..self.members.len() {
            for i in 0..self.members[j].len() {
                if self.members[j][i] {
                    for &(f, _) in cx.faces(j, i) {
                        if !self.members[j - 1][f] {
                            return Some((CellId::new(j, i), CellId::new(j - 1, f)));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_closed(&self, cx: &CwComplex) -> bool {
        self.closure_witness(cx).is_none()
    }

    /// First non-member whose faces all lie in the mask, if any.
    pub fn fullness_witness(&self, cx: &CwComplex) -> Option<CellId> {
        for j in 1..self.members.len() {
            for i in 0..self.members[j].len() {
                if !self.members[j][i]
                    && cx.faces(j, i).iter().all(|&(f, _)| self.members[j - 1][f])
                {
                    return Some(CellId::new(j, i));
                }
            }
        }
        None
    }

    pub fn is_full(&self, cx: &CwComplex) -> bool {
        self.is_closed(cx) && self.fullness_witness(cx).is_none()
    }

    pub fn union(&self, other: &SubcomplexMask) -> SubcomplexMask {
        SubcomplexMask {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x || *y).collect())
                .collect(),
        }
    }
}

/// Cells on `(p-1)`-cells lying in at most one `p`-cell, together with their closure.
pub fn boundary_subcomplex(cx: &CwComplex) -> Result<SubcomplexMask> {
    let p = cx.dim();
    if p == 0 {
        return Err(Error::InvalidArgument(
            "boundary subcomplex needs dimension at least 1".into(),
        ));
    }
    let mut m = SubcomplexMask::empty(cx);
    for i in 0..cx.count(p - 1) {
        if cx.cofaces(p - 1, i).len() <= 1 {
            m.insert(CellId::new(p - 1, i));
        }
    }
    m.close(cx);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn square_boundary_is_everything_but_face() {
        let sq = square();
        let b = boundary_subcomplex(&sq).unwrap();
        assert_eq!(b.count(1), 4);
        assert_eq!(b.count(0), 4);
        assert_eq!(b.count(2), 0);
        assert!(b.is_closed(&sq));
    }

    #[test]
    fn shared_edge_excluded() {
        let cx = two_squares();
        let b = boundary_subcomplex(&cx).unwrap();
        assert_eq!(b.count(1), 6);
        assert!(!b.contains(CellId::new(1, 5)));
        assert_eq!(b.count(0), 6);
    }

    #[test]
    fn closure_and_fullness() {
        let t = triangle();
        let edges = SubcomplexMask::from_cells(
            &t,
            &[CellId::new(1, 0), CellId::new(1, 1), CellId::new(1, 2)],
        );
        assert!(edges.is_closed(&t));
        assert_eq!(edges.fullness_witness(&t), Some(CellId::new(2, 0)));
        assert!(SubcomplexMask::whole(&t).is_full(&t));
        let mut bad = SubcomplexMask::empty(&t);
        bad.insert(CellId::new(1, 0));
        assert_eq!(
            bad.closure_witness(&t),
            Some((CellId::new(1, 0), CellId::new(0, 0)))
        );
    }

    #[test]
    fn dimension_zero_rejected() {
        let cx = CwComplex::new(vec![3], vec![]).unwrap();
        assert!(boundary_subcomplex(&cx).is_err());
    }
}
