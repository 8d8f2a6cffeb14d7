use super::CopyMap;
use crate::complex::{CellId, CwComplex, IncidenceRecord};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Identification of cell `a` of copy `copy_a` with cell `b` of copy `copy_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Glue {
    pub copy_a: usize,
    pub a: CellId,
    pub copy_b: usize,
    pub b: CellId,
}

impl Glue {
    pub fn new(copy_a: usize, a: CellId, copy_b: usize, b: CellId) -> Self {
        Glue {
            copy_a,
            a,
            copy_b,
            b,
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // the smaller node stays the root, so roots are first occurrences
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Glues `copies` copies of `base` along the given identifications.
///
/// Copy 0 is embedded as the identity, so the cells of `base` form an index
/// prefix of the result; cells first seen in later copies follow in copy order.
pub fn substitute(
    base: &CwComplex,
    copies: usize,
    glue: &[Glue],
) -> Result<(CwComplex, Vec<CopyMap>)> {
    let p = base.dim();
    let counts = base.counts();
    let offset: Vec<usize> = (0..=p).map(|j| counts[..j].iter().sum()).collect();
    let per_copy = base.total_cells();
    let node = |c: usize, cell: CellId| c * per_copy + offset[cell.dim] + cell.index;

    let mut uf = UnionFind::new(per_copy * copies);
    for g in glue {
        if g.a.dim != g.b.dim {
            return Err(Error::Construction(format!(
                "glue pairs cells of different dimension: {} ~ {}",
                g.a, g.b
            )));
        }
        if g.copy_a >= copies || g.copy_b >= copies {
            return Err(Error::Construction("glue refers to a missing copy".into()));
        }
        for cell in [g.a, g.b] {
            if cell.index >= base.count(cell.dim) {
                return Err(Error::IndexOutOfRange {
                    dim: cell.dim,
                    index: cell.index,
                    count: base.count(cell.dim),
                });
            }
        }
        uf.union(node(g.copy_a, g.a), node(g.copy_b, g.b));
    }

    let mut new_index = vec![usize::MAX; per_copy * copies];
    let mut new_counts = vec![0usize; p + 1];
    let mut maps: Vec<CopyMap> = (0..copies)
        .map(|_| CopyMap {
            cells: counts.iter().map(|&n| vec![0; n]).collect(),
        })
        .collect();
    for j in 0..=p {
        for (c, map) in maps.iter_mut().enumerate() {
            for i in 0..counts[j] {
                let root = uf.find(node(c, CellId::new(j, i)));
                if new_index[root] == usize::MAX {
                    new_index[root] = new_counts[j];
                    new_counts[j] += 1;
                }
                map.cells[j][i] = new_index[root];
            }
        }
    }
    for c in 1..copies {
        for j in 0..=p {
            let mut seen = maps[c].cells[j].clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Construction(format!(
                    "copy {c} folds two {j}-cells onto one"
                )));
            }
        }
    }

    let mut merged: BTreeMap<(usize, usize, usize), i32> = BTreeMap::new();
    for map in &maps {
        for r in base.all_records() {
            let key = (
                r.cell.dim,
                map.cells[r.cell.dim][r.cell.index],
                map.cells[r.face.dim][r.face.index],
            );
            match merged.get(&key) {
                Some(&s) if s != r.number => {
                    return Err(Error::Construction(format!(
                        "orientation clash on [{}:{} : {}:{}]",
                        key.0,
                        key.1,
                        key.0 - 1,
                        key.2
                    )))
                }
                _ => {
                    merged.insert(key, r.number);
                }
            }
        }
    }
    let records = merged
        .into_iter()
        .map(|((j, c, f), s)| IncidenceRecord::new(j, c, f, s))
        .collect();
    Ok((CwComplex::new(new_counts, records)?, maps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::graph;

    #[test]
    fn path_glued_into_longer_path() {
        let edge = graph(2, &[(0, 1)]);
        let glue = [Glue::new(0, CellId::new(0, 1), 1, CellId::new(0, 0))];
        let (cx, maps) = substitute(&edge, 2, &glue).unwrap();
        assert_eq!(cx.counts(), &[3, 2]);
        assert_eq!(maps[0].cells, vec![vec![0, 1], vec![0]]);
        assert_eq!(maps[1].cells, vec![vec![1, 2], vec![1]]);
        assert!(cx.validate().is_ok());
    }

    #[test]
    fn orientation_clash_detected() {
        let edge = graph(2, &[(0, 1)]);
        let glue = [
            Glue::new(0, CellId::new(0, 0), 1, CellId::new(0, 1)),
            Glue::new(0, CellId::new(0, 1), 1, CellId::new(0, 0)),
            Glue::new(0, CellId::new(1, 0), 1, CellId::new(1, 0)),
        ];
        assert!(matches!(
            substitute(&edge, 2, &glue),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn folding_detected() {
        let edge = graph(2, &[(0, 1)]);
        let glue = [
            Glue::new(0, CellId::new(0, 0), 1, CellId::new(0, 0)),
            Glue::new(0, CellId::new(0, 0), 1, CellId::new(0, 1)),
        ];
        assert!(substitute(&edge, 2, &glue).is_err());
    }
}
