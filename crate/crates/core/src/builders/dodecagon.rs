//! 2-complexes of 12-gons whose dual graphs are gasket graphs.
//!
//! Each 12-gon has vertices `u0..u11` and edges `e_i = (u_i, u_{i+1})`.
//! Two three-vertex slots, `u0 u1 u2` and `u6 u7 u8`, are where neighboring
//! polygons attach: the slot edges run from the outer vertex to the slot
//! center `u1` (resp. `u7`). Three polygons meeting at a common slot center
//! form `K_1`; later levels glue corner polygons of three copies, turning one
//! copy's polygon by six positions so its free slot receives the other's.

use super::{
    build_gasket, certify_dual_isomorphism, substitute, CopyMap, Exhaustion, Family, Glue,
};
use crate::complex::{CellId, CwComplex, IncidenceRecord};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug)]
struct Patch {
    face: usize,
    u: [usize; 12],
    e: [usize; 12],
}

impl Patch {
    fn map(&self, m: &CopyMap) -> Patch {
        Patch {
            face: m.cells[2][self.face],
            u: self.u.map(|v| m.cells[0][v]),
            e: self.e.map(|v| m.cells[1][v]),
        }
    }
}

fn slot_sign(i: usize) -> i32 {
    match i {
        1 | 7 => -1,
        _ => 1,
    }
}

// Stored (tail, head) of edge `e_i` of a polygon.
fn edge_ends(u: &[usize; 12], i: usize) -> (usize, usize) {
    match i {
        0 | 6 => (u[i], u[i + 1]),
        1 | 7 => (u[i + 1], u[i]),
        _ => (u[i], u[(i + 1) % 12]),
    }
}

fn polygon_records(p: &Patch, out: &mut BTreeSet<IncidenceRecord>) {
    for i in 0..12 {
        let (tail, head) = edge_ends(&p.u, i);
        out.insert(IncidenceRecord::new(1, p.e[i], tail, -1));
        out.insert(IncidenceRecord::new(1, p.e[i], head, 1));
        out.insert(IncidenceRecord::new(2, p.face, p.e[i], slot_sign(i)));
    }
}

/// Two 12-gons sharing the slot center and one slot edge.
fn base() -> (CwComplex, [Patch; 2]) {
    let mut u0 = [0usize; 12];
    let mut e0 = [0usize; 12];
    for i in 0..12 {
        u0[i] = i;
        e0[i] = i;
    }
    // y01 = 0, c = 1, y20 = 2 on the first polygon
    let mut u1 = [0usize; 12];
    u1[0] = 12;
    u1[1] = 1;
    u1[2] = 0;
    for (i, v) in u1.iter_mut().enumerate().skip(3) {
        *v = 10 + i;
    }
    let mut e1 = [0usize; 12];
    e1[0] = 12;
    e1[1] = 0;
    for (i, v) in e1.iter_mut().enumerate().skip(2) {
        *v = 11 + i;
    }
    let p0 = Patch {
        face: 0,
        u: u0,
        e: e0,
    };
    let p1 = Patch {
        face: 1,
        u: u1,
        e: e1,
    };
    let mut recs = BTreeSet::new();
    polygon_records(&p0, &mut recs);
    polygon_records(&p1, &mut recs);
    let cx = CwComplex::new(vec![22, 23, 2], recs.into_iter().collect()).expect("two 12-gons");
    (cx, [p0, p1])
}

fn patch_glue(copy_a: usize, a: &Patch, copy_b: usize, b: &Patch, shift: usize) -> Vec<Glue> {
    let mut g = vec![Glue::new(
        copy_a,
        CellId::new(2, a.face),
        copy_b,
        CellId::new(2, b.face),
    )];
    for i in 0..12 {
        let k = (i + shift) % 12;
        g.push(Glue::new(
            copy_a,
            CellId::new(0, a.u[k]),
            copy_b,
            CellId::new(0, b.u[i]),
        ));
        g.push(Glue::new(
            copy_a,
            CellId::new(1, a.e[k]),
            copy_b,
            CellId::new(1, b.e[i]),
        ));
    }
    g
}

/// Builds the exhaustion and certifies, level by level, that its dual graph
/// is isomorphic to the gasket graph of the same level.
pub fn build_dodecagon_complex(levels: usize) -> Result<Exhaustion> {
    if levels < 1 {
        return Err(Error::InvalidArgument(
            "at least one level is required".into(),
        ));
    }
    let (k0, [p0, p1]) = base();
    let mut all = vec![k0.clone()];
    let mut maps_all = Vec::new();

    let mut glue = Vec::new();
    for k in 0..3 {
        glue.extend(patch_glue(k, &p1, (k + 1) % 3, &p0, 0));
    }
    let (mut current, maps) = substitute(&k0, 3, &glue)?;
    let mut corners: Vec<Patch> = (0..3).map(|k| p0.map(&maps[k])).collect();
    all.push(current.clone());
    maps_all.push(maps);

    for _ in 1..levels {
        let (a, b, c) = (0, 1, 2);
        let mut glue = patch_glue(0, &corners[b], 1, &corners[a], 6);
        glue.extend(patch_glue(0, &corners[c], 2, &corners[a], 6));
        glue.extend(patch_glue(1, &corners[c], 2, &corners[b], 6));
        let (next, maps) = substitute(&current, 3, &glue)?;
        corners = vec![
            corners[a].map(&maps[0]),
            corners[b].map(&maps[1]),
            corners[c].map(&maps[2]),
        ];
        current = next;
        all.push(current.clone());
        maps_all.push(maps);
    }

    let ex = Exhaustion::new(Some(Family::Dodecagon2), all, maps_all)?;
    let gasket = build_gasket(levels)?;
    let cert = certify_dual_isomorphism(&ex, &gasket, &[0, 1])?;
    Ok(ex.with_certificate(cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::dual_graph;

    #[test]
    fn small_levels() {
        let ex = build_dodecagon_complex(2).unwrap();
        assert_eq!(ex.level(0).counts(), &[22, 23, 2]);
        assert_eq!(ex.level(1).counts(), &[31, 33, 3]);
        assert_eq!(ex.level(2).count(2), 6);
        for l in ex.levels() {
            assert!(l.validate().is_ok(), "{:?}", l.validate());
        }
        let d = dual_graph(ex.level(1)).unwrap();
        assert_eq!(d.counts(), &[3, 3]);
    }

    #[test]
    fn top_cells_match_gasket_vertices() {
        let ex = build_dodecagon_complex(4).unwrap();
        for (n, l) in ex.levels().iter().enumerate() {
            assert_eq!(l.count(2) as u64, (3u64.pow(n as u32) + 3) / 2);
        }
        assert_eq!(ex.dual_certificate().unwrap().len(), 5);
    }
}
