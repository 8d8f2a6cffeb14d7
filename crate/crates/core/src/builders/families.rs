//! Prefractal graphs glued at labeled corner vertices.

use super::{substitute, CopyMap, Exhaustion, Family, Glue};
use crate::complex::{CellId, CwComplex, IncidenceRecord};
use crate::error::{Error, Result};

fn cycle(n: usize) -> CwComplex {
    let mut recs = Vec::with_capacity(2 * n);
    for k in 0..n {
        recs.push(IncidenceRecord::new(1, k, k, -1));
        recs.push(IncidenceRecord::new(1, k, (k + 1) % n, 1));
    }
    CwComplex::new(vec![n, n], recs).expect("cycle graph")
}

fn vertex(i: usize) -> CellId {
    CellId::new(0, i)
}

/// Repeated corner substitution: `gluing` lists `(copy_a, corner_a, copy_b, corner_b)`,
/// `new_corners[k] = (copy, corner)` relabels the corners of the next level.
fn corner_exhaustion(
    family: Family,
    levels: usize,
    mut current: CwComplex,
    mut corners: Vec<usize>,
    first: Option<(usize, Vec<Glue>, Vec<(usize, usize)>)>,
    copies: usize,
    gluing: &[(usize, usize, usize, usize)],
    new_corners: &[(usize, usize)],
) -> Result<Exhaustion> {
    if levels < 1 {
        return Err(Error::InvalidArgument(
            "at least one level is required".into(),
        ));
    }
    let mut all = vec![current.clone()];
    let mut maps_all = Vec::new();
    let mut start = 0;
    if let Some((q, glue, relabel)) = first {
        let (next, maps) = substitute(&current, q, &glue)?;
        corners = relabel_corners(&maps, &relabel, &corners);
        current = next;
        all.push(current.clone());
        maps_all.push(maps);
        start = 1;
    }
    for _ in start..levels {
        let glue: Vec<Glue> = gluing
            .iter()
            .map(|&(ca, a, cb, b)| Glue::new(ca, vertex(corners[a]), cb, vertex(corners[b])))
            .collect();
        let (next, maps) = substitute(&current, copies, &glue)?;
        corners = relabel_corners(&maps, new_corners, &corners);
        current = next;
        all.push(current.clone());
        maps_all.push(maps);
    }
    Exhaustion::new(Some(family), all, maps_all)
}

fn relabel_corners(maps: &[CopyMap], spec: &[(usize, usize)], corners: &[usize]) -> Vec<usize> {
    spec.iter()
        .map(|&(c, k)| maps[c].cells[0][corners[k]])
        .collect()
}

/// Gasket graphs: `K_0` is one edge, `K_1` a triangle, and `K_{n+1}` is three
/// copies of `K_n` glued pairwise at corner vertices.
pub fn build_gasket(levels: usize) -> Result<Exhaustion> {
    let edge = CwComplex::new(
        vec![2, 1],
        vec![
            IncidenceRecord::new(1, 0, 0, -1),
            IncidenceRecord::new(1, 0, 1, 1),
        ],
    )?;
    // three copies of the edge close up into a triangle
    let first = (
        3,
        vec![
            Glue::new(0, vertex(1), 1, vertex(0)),
            Glue::new(1, vertex(1), 2, vertex(0)),
            Glue::new(2, vertex(1), 0, vertex(0)),
        ],
        vec![(0, 0), (1, 0), (2, 0)],
    );
    // corners A, B, C; copy k sits at corner k
    corner_exhaustion(
        Family::Gasket,
        levels,
        edge,
        vec![0, 1],
        Some(first),
        3,
        &[(0, 1, 1, 0), (0, 2, 2, 0), (1, 2, 2, 1)],
        &[(0, 0), (1, 1), (2, 2)],
    )
}

/// Vicsek graphs: `K_0` is a 4-cycle with corners NE, NW, SW, SE; `K_{n+1}` is a
/// center copy plus one copy per corner, each touching the center at one vertex.
pub fn build_vicsek(levels: usize) -> Result<Exhaustion> {
    const NE: usize = 0;
    const NW: usize = 1;
    const SW: usize = 2;
    const SE: usize = 3;
    corner_exhaustion(
        Family::Vicsek,
        levels,
        cycle(4),
        vec![0, 1, 2, 3],
        None,
        5,
        &[
            (0, NE, 1, SW),
            (0, NW, 2, SE),
            (0, SW, 3, NE),
            (0, SE, 4, NW),
        ],
        &[(1, NE), (2, NW), (3, SW), (4, SE)],
    )
}

/// Lindström graphs: `K_0` is a hexagon; `K_{n+1}` is a center copy and a ring
/// of six outer copies, each touching the center and both ring neighbors.
pub fn build_lindstrom(levels: usize) -> Result<Exhaustion> {
    let mut gluing = Vec::new();
    for k in 0..6 {
        gluing.push((0, k, k + 1, (k + 3) % 6));
    }
    for k in 0..6 {
        let next = (k + 1) % 6;
        gluing.push((k + 1, (k + 2) % 6, next + 1, (next + 4) % 6));
    }
    let new_corners: Vec<(usize, usize)> = (0..6).map(|k| (k + 1, k)).collect();
    corner_exhaustion(
        Family::Lindstrom,
        levels,
        cycle(6),
        (0..6).collect(),
        None,
        7,
        &gluing,
        &new_corners,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_counts(f: Family, ex: &Exhaustion) {
        for (n, lvl) in ex.levels().iter().enumerate() {
            let want = f.closed_form_counts(n as u32).unwrap();
            let got: Vec<u64> = lvl.counts().iter().map(|&c| c as u64).collect();
            assert_eq!(got, want, "{f} level {n}");
            assert!(lvl.validate().is_ok());
        }
    }

    #[test]
    fn gasket_counts() {
        let ex = build_gasket(5).unwrap();
        check_counts(Family::Gasket, &ex);
        assert_eq!(ex.level(1).counts(), &[3, 3]);
        assert_eq!(ex.level(2).counts(), &[6, 9]);
    }

    #[test]
    fn vicsek_counts() {
        let ex = build_vicsek(3).unwrap();
        check_counts(Family::Vicsek, &ex);
        assert_eq!(ex.level(1).counts(), &[16, 20]);
    }

    #[test]
    fn lindstrom_counts() {
        let ex = build_lindstrom(2).unwrap();
        check_counts(Family::Lindstrom, &ex);
        assert_eq!(ex.level(1).counts(), &[30, 42]);
    }

    fn degree_histogram(cx: &CwComplex) -> Vec<usize> {
        let mut h = vec![0; 8];
        for v in 0..cx.count(0) {
            h[cx.cofaces(0, v).len()] += 1;
        }
        h
    }

    fn diameter(cx: &CwComplex) -> usize {
        (0..cx.count(0))
            .map(|v| {
                cx.bfs(0, &[v], crate::complex::Flavor::D, None)
                    .into_iter()
                    .max()
                    .unwrap()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn gasket_shape() {
        let ex = build_gasket(5).unwrap();
        for n in 1..=5 {
            let h = degree_histogram(ex.level(n));
            assert_eq!(h[2], 3, "level {n}");
            assert_eq!(h[4], ex.level(n).count(0) - 3);
            assert_eq!(diameter(ex.level(n)), 1 << (n - 1));
        }
    }

    #[test]
    fn vicsek_shape() {
        let ex = build_vicsek(3).unwrap();
        for n in 0..=3u32 {
            let h = degree_histogram(ex.level(n as usize));
            assert_eq!(h[4], 5usize.pow(n) - 1);
            assert_eq!(diameter(ex.level(n as usize)), 2 * 3usize.pow(n));
        }
    }

    #[test]
    fn lindstrom_shape() {
        let ex = build_lindstrom(2).unwrap();
        // every gluing point joins exactly two hexagon copies
        let h = degree_histogram(ex.level(2));
        assert_eq!(h[4], 7 * 12 + 12);
        assert_eq!(h[2] + h[4], ex.level(2).count(0));
    }

    #[test]
    fn zero_levels_rejected() {
        assert!(build_gasket(0).is_err());
    }
}
