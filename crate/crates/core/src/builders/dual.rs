use super::{CopyMap, Exhaustion};
use crate::complex::{CwComplex, IncidenceRecord};
use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashMap};

/// Graph on the top cells, with an edge for each pair sharing a codimension-one face.
///
/// Edges join `a < b`, are oriented `a → b` and ordered by `(b, a)`, so the
/// dual of a prefix subcomplex is a prefix of the dual.
pub fn dual_graph(cx: &CwComplex) -> Result<CwComplex> {
    let p = cx.dim();
    if p < 2 {
        return Err(Error::InvalidArgument(format!(
            "dual graph needs dimension at least 2, got {p}"
        )));
    }
    let mut pairs = BTreeSet::new();
    for r in 0..cx.count(p - 1) {
        let co = cx.cofaces(p - 1, r);
        for a in 0..co.len() {
            for b in a + 1..co.len() {
                let (x, y) = (co[a].0, co[b].0);
                pairs.insert((x.max(y), x.min(y)));
            }
        }
    }
    let mut recs = Vec::with_capacity(2 * pairs.len());
    for (e, &(b, a)) in pairs.iter().enumerate() {
        recs.push(IncidenceRecord::new(1, e, a, -1));
        recs.push(IncidenceRecord::new(1, e, b, 1));
    }
    CwComplex::new(vec![cx.count(p), pairs.len()], recs)
}

/// Dual graphs of every level, with copy maps induced by the top-cell maps.
pub fn dual_exhaustion(ex: &Exhaustion) -> Result<Exhaustion> {
    let p = ex.dim();
    let graphs = ex
        .levels()
        .iter()
        .map(dual_graph)
        .collect::<Result<Vec<_>>>()?;
    let mut maps = Vec::with_capacity(ex.top_level());
    for n in 0..ex.top_level() {
        let (small, big) = (&graphs[n], &graphs[n + 1]);
        let index: HashMap<(usize, usize), usize> = (0..big.count(1))
            .map(|e| {
                let f = big.faces(1, e);
                let (a, b) = (f[0].0, f[1].0);
                ((a.min(b), a.max(b)), e)
            })
            .collect();
        let mut level = Vec::new();
        for m in ex.copy_maps(n) {
            let verts = m.cells[p].clone();
            let edges = (0..small.count(1))
                .map(|e| {
                    let f = small.faces(1, e);
                    let (a, b) = (verts[f[0].0], verts[f[1].0]);
                    index.get(&(a.min(b), a.max(b))).copied().ok_or_else(|| {
                        Error::Construction(format!(
                            "level {n}: dual edge {e} has no image in level {}",
                            n + 1
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            level.push(CopyMap {
                cells: vec![verts, edges],
            });
        }
        maps.push(level);
    }
    Exhaustion::new(None, graphs, maps)
}

fn edge_set(g: &CwComplex, relabel: impl Fn(usize) -> usize) -> BTreeSet<(usize, usize)> {
    (0..g.count(1))
        .map(|e| {
            let f = g.faces(1, e);
            let (a, b) = (relabel(f[0].0), relabel(f[1].0));
            (a.min(b), a.max(b))
        })
        .collect()
}

/// Propagates a level-0 bijection (top cells of `ex` → vertices of `graphs`)
/// through both families of copy maps and checks at every level that it is
/// a bijection carrying dual-graph edges exactly onto graph edges.
pub fn certify_dual_isomorphism(
    ex: &Exhaustion,
    graphs: &Exhaustion,
    base: &[usize],
) -> Result<Vec<Vec<usize>>> {
    let p = ex.dim();
    if graphs.top_level() < ex.top_level() {
        return Err(Error::InvalidArgument(
            "graph exhaustion is too short".into(),
        ));
    }
    let mut phi = base.to_vec();
    let mut out = Vec::new();
    for n in 0..=ex.top_level() {
        if n > 0 {
            let (dm, gm) = (ex.copy_maps(n - 1), graphs.copy_maps(n - 1));
            if dm.len() != gm.len() {
                return Err(Error::Construction(format!(
                    "copy counts differ at level {n}"
                )));
            }
            let mut next = vec![usize::MAX; ex.level(n).count(p)];
            for (d, g) in dm.iter().zip(gm) {
                for (x, &img) in d.cells[p].iter().enumerate() {
                    let v = g.cells[0][phi[x]];
                    if next[img] != usize::MAX && next[img] != v {
                        return Err(Error::Construction(format!(
                            "dual map is not well defined at level {n}, cell {img}"
                        )));
                    }
                    next[img] = v;
                }
            }
            phi = next;
        }
        let dual = dual_graph(ex.level(n))?;
        let graph = graphs.level(n);
        let mut seen = vec![false; graph.count(0)];
        if phi.len() != graph.count(0) {
            return Err(Error::Construction(format!(
                "level {n}: {} top cells vs {} vertices",
                phi.len(),
                graph.count(0)
            )));
        }
        for &v in &phi {
            if v >= seen.len() || seen[v] {
                return Err(Error::Construction(format!(
                    "level {n}: map is not a bijection"
                )));
            }
            seen[v] = true;
        }
        if edge_set(&dual, |x| phi[x]) != edge_set(graph, |x| x) {
            return Err(Error::Construction(format!(
                "level {n}: dual edges do not match graph edges"
            )));
        }
        out.push(phi.clone());
    }
    Ok(out)
}
