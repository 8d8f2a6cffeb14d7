use super::OperatorMatrix;
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::VecDeque;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphLike {
    /// Per-cell sign flips making every off-diagonal entry 0 or -1.
    Yes { orientation: Vec<i8> },
    /// Cells forming an obstruction: an off-diagonal entry of modulus > 1
    /// (two cells), or a cycle whose sign constraints cannot all be met.
    No { witness: Vec<usize> },
}

impl GraphLike {
    pub fn is_yes(&self) -> bool {
        matches!(self, GraphLike::Yes { .. })
    }
}

/// Searches for a reorientation `s_i ∈ {±1}` with `s_i s_j a_ij ∈ {0, -1}` for `i ≠ j`.
///
/// Each nonzero off-diagonal entry constrains the product `s_i s_j = -a_ij`;
/// the search is a BFS 2-coloring, visiting cells in increasing index order.
pub fn is_graph_like(op: &OperatorMatrix, try_reorientation: bool) -> Result<GraphLike> {
    let m = op
        .as_integer()
        .ok_or_else(|| Error::InvalidVariant(format!("{} is not an integer operator", op.tag())))?;
    if m.rows() != m.cols() {
        return Err(Error::InvalidVariant(format!("{} is not square", op.tag())));
    }
    let n = m.rows();
    for (r, c, v) in m.triplets() {
        if r != c && v.abs() > 1 {
            return Ok(GraphLike::No {
                witness: vec![r.min(c), r.max(c)],
            });
        }
    }
    if !try_reorientation {
        return Ok(match m.triplets().find(|&(r, c, v)| r != c && v == 1) {
            None => GraphLike::Yes {
                orientation: vec![1; n],
            },
            Some((r, c, _)) => GraphLike::No {
                witness: vec![r.min(c), r.max(c)],
            },
        });
    }
    let mut sign = vec![0i8; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if sign[root] != 0 {
            continue;
        }
        sign[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for (y, v) in m.row(x) {
                if y == x {
                    continue;
                }
                // required product s_x s_y = -v
                let want = -(v as i8) * sign[x];
                if sign[y] == 0 {
                    sign[y] = want;
                    parent[y] = x;
                    depth[y] = depth[x] + 1;
                    queue.push_back(y);
                } else if sign[y] != want {
                    return Ok(GraphLike::No {
                        witness: cycle_through(x, y, &parent, &depth),
                    });
                }
            }
        }
    }
    Ok(GraphLike::Yes { orientation: sign })
}

// Tree paths from x and y up to their common ancestor, joined into a cycle.
fn cycle_through(x: usize, y: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (x, y);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::*;
    use crate::operators::{laplacian, LaplacianKind, SparseMatrix, Variant};

    #[test]
    fn graph_laplacian_is_graph_like() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let l = laplacian(&g, 0, LaplacianKind::Plus, false).unwrap();
        assert_eq!(
            is_graph_like(&l, true).unwrap(),
            GraphLike::Yes {
                orientation: vec![1; 4]
            }
        );
    }

    #[test]
    fn triangle_face_obstruction() {
        let l = laplacian(&triangle(), 1, LaplacianKind::Plus, false).unwrap();
        match is_graph_like(&l, true).unwrap() {
            GraphLike::No { witness } => {
                let mut w = witness.clone();
                w.sort();
                assert_eq!(w, vec![0, 1, 2]);
            }
            other => panic!("expected obstruction, got {other:?}"),
        }
    }

    #[test]
    fn square_face_obstruction_is_odd_cycle() {
        let l = laplacian(&square(), 1, LaplacianKind::Plus, false).unwrap();
        let m = l.as_integer().unwrap();
        match is_graph_like(&l, true).unwrap() {
            GraphLike::No { witness } => {
                assert_eq!(witness.len() % 2, 1);
                let k = witness.len();
                let prod: i64 = (0..k)
                    .map(|i| -m.get(witness[i], witness[(i + 1) % k]))
                    .product();
                assert_eq!(prod, -1);
            }
            other => panic!("expected obstruction, got {other:?}"),
        }
    }

    #[test]
    fn reorientation_needed_for_minus_on_path() {
        // Δ_{1-} of a path oriented head to head has a +1 entry, fixed by a flip
        let g = graph(3, &[(0, 1), (2, 1)]);
        let l = laplacian(&g, 1, LaplacianKind::Minus, false).unwrap();
        assert!(!is_graph_like(&l, false).unwrap().is_yes());
        assert_eq!(
            is_graph_like(&l, true).unwrap(),
            GraphLike::Yes {
                orientation: vec![1, -1]
            }
        );
    }

    #[test]
    fn large_entries_are_witnessed() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 1, 2i64), (1, 0, 2)]);
        let op = OperatorMatrix::integer(Variant::Delta, 0, m);
        assert_eq!(
            is_graph_like(&op, true).unwrap(),
            GraphLike::No {
                witness: vec![0, 1]
            }
        );
    }
}
