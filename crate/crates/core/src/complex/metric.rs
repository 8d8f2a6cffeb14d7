use super::{CellId, CwComplex, SubcomplexMask};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::VecDeque;

/// Step relation used for combinatorial distances between same-dimension cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Flavor {
    /// A step is either a shared face or a shared coface.
    D,
    /// Steps through a common `(j+1)`-coface.
    DPlus,
    /// Steps through a common `(j-1)`-face.
    DMinus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl CwComplex {
    /// Same-dimension cells one step away from `cell`, sorted, excluding `cell`.
    pub fn neighbors(&self, cell: CellId, flavor: Flavor) -> Vec<usize> {
        let j = cell.dim;
        let mut out = Vec::new();
        if matches!(flavor, Flavor::D | Flavor::DMinus) && j >= 1 {
            for &(f, _) in self.faces(j, cell.index) {
                out.extend(self.cofaces(j - 1, f).iter().map(|&(c, _)| c));
            }
        }
        if matches!(flavor, Flavor::D | Flavor::DPlus) && j < self.dim() {
            for &(t, _) in self.cofaces(j, cell.index) {
                out.extend(self.faces(j + 1, t).iter().map(|&(c, _)| c));
            }
        }
        out.sort_unstable();
        out.dedup();
        out.retain(|&c| c != cell.index);
        out
    }

    fn check_cell(&self, c: CellId) -> Result<()> {
        if c.dim > self.dim() || c.index >= self.count(c.dim) {
            return Err(Error::IndexOutOfRange {
                dim: c.dim,
                index: c.index,
                count: self.count(c.dim),
            });
        }
        Ok(())
    }

    /// Breadth-first distance in the chosen step relation.
    pub fn distance(&self, a: CellId, b: CellId, flavor: Flavor) -> Result<Distance> {
        if a.dim != b.dim {
            return Err(Error::DimensionMismatch(format!(
                "distance between cells {a} and {b}"
            )));
        }
        self.check_cell(a)?;
        self.check_cell(b)?;
        let dist = self.bfs(a.dim, &[a.index], flavor, None);
        Ok(match dist[b.index] {
            usize::MAX => Distance::Infinite,
            d => Distance::Finite(d),
        })
    }

    /// BFS distances from a seed set, optionally truncated at `radius`.
    /// Unreached cells hold `usize::MAX`.
    pub(crate) fn bfs(
        &self,
        j: usize,
        seeds: &[usize],
        flavor: Flavor,
        radius: Option<usize>,
    ) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.count(j)];
        let mut queue = VecDeque::new();
        for &s in seeds {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(c) = queue.pop_front() {
            let d = dist[c];
            if radius.is_some_and(|r| d >= r) {
                continue;
            }
            for n in self.neighbors(CellId::new(j, c), flavor) {
                if dist[n] == usize::MAX {
                    dist[n] = d + 1;
                    queue.push_back(n);
                }
            }
        }
        dist
    }

    /// Cells within `d`-distance `r` of `center`, sorted.
    pub fn ball(&self, center: CellId, r: usize) -> Result<Vec<usize>> {
        self.check_cell(center)?;
        Ok(self.ball_of_set(center.dim, &[center.index], r))
    }

    /// Cells within `d`-distance `r` of any cell in `seeds`, sorted.
    pub fn ball_of_set(&self, j: usize, seeds: &[usize], r: usize) -> Vec<usize> {
        self.bfs(j, seeds, Flavor::D, Some(r))
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != usize::MAX)
            .map(|(i, _)| i)
            .collect()
    }

    /// `j`-cells of the mask at distance one from some `j`-cell outside it.
    pub fn frontier(&self, mask: &SubcomplexMask, j: usize) -> Vec<usize> {
        (0..self.count(j))
            .filter(|&i| mask.contains(CellId::new(j, i)))
            .filter(|&i| {
                self.neighbors(CellId::new(j, i), Flavor::D)
                    .iter()
                    .any(|&n| !mask.contains(CellId::new(j, n)))
            })
            .collect()
    }

    /// Whether all `j`-cells are mutually reachable in the given step relation.
    pub fn is_connected(&self, j: usize, flavor: Flavor) -> bool {
        if self.count(j) == 0 {
            return true;
        }
        self.bfs(j, &[0], flavor, None)
            .iter()
            .all(|&d| d != usize::MAX)
    }
}
