//! Self-similar exhaustions `K_0 ⊂ K_1 ⊂ … ⊂ K_N` built by substitution.
//!
//! Every builder embeds `K_n` into `K_{n+1}` as copy 0, so the cells of
//! `K_n` are an index prefix of every later level. The copy maps of
//! `G(n, n+1)` are stored per level; longer products are composed on demand.

mod carpet;
mod dodecagon;
mod dual;
mod families;
mod substitution;

pub use carpet::build_carpet_complex;
pub use dodecagon::build_dodecagon_complex;
pub use dual::{certify_dual_isomorphism, dual_exhaustion, dual_graph};
pub use families::{build_gasket, build_lindstrom, build_vicsek};
pub use substitution::{substitute, Glue};

use crate::complex::{CellId, CwComplex, SubcomplexMask};
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gasket,
    Vicsek,
    Lindstrom,
    Carpet2,
    Dodecagon2,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Gasket,
        Family::Vicsek,
        Family::Lindstrom,
        Family::Carpet2,
        Family::Dodecagon2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gasket => "gasket",
            Family::Vicsek => "vicsek",
            Family::Lindstrom => "lindstrom",
            Family::Carpet2 => "carpet2",
            Family::Dodecagon2 => "dodecagon2",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn build(self, levels: usize) -> Result<Exhaustion> {
        match self {
            Family::Gasket => build_gasket(levels),
            Family::Vicsek => build_vicsek(levels),
            Family::Lindstrom => build_lindstrom(levels),
            Family::Carpet2 => build_carpet_complex(levels),
            Family::Dodecagon2 => build_dodecagon_complex(levels),
        }
    }

    /// Top cell dimension of the family.
    pub fn dim(self) -> usize {
        match self {
            Family::Gasket | Family::Vicsek | Family::Lindstrom => 1,
            Family::Carpet2 | Family::Dodecagon2 => 2,
        }
    }

    /// Closed-form `[|E_0 K_n|, |E_1 K_n|, …]` where the family has one.
    pub fn closed_form_counts(self, n: u32) -> Option<Vec<u64>> {
        match self {
            Family::Gasket => Some(vec![(3u64.pow(n) + 3) / 2, 3u64.pow(n)]),
            Family::Vicsek => Some(vec![3 * 5u64.pow(n) + 1, 4 * 5u64.pow(n)]),
            Family::Lindstrom => Some(vec![4 * 7u64.pow(n) + 2, 6 * 7u64.pow(n)]),
            Family::Carpet2 | Family::Dodecagon2 => None,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-dimension cell map of one copy `K_n → K_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyMap {
    pub cells: Vec<Vec<usize>>,
}

impl CopyMap {
    pub fn identity(cx: &CwComplex) -> Self {
        CopyMap {
            cells: cx.counts().iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    pub fn apply(&self, c: CellId) -> CellId {
        CellId::new(c.dim, self.cells[c.dim][c.index])
    }

    /// `outer ∘ self`, where `outer` acts on the range of `self`.
    pub fn then(&self, outer: &CopyMap) -> CopyMap {
        CopyMap {
            cells: self
                .cells
                .iter()
                .enumerate()
                .map(|(j, v)| v.iter().map(|&i| outer.cells[j][i]).collect())
                .collect(),
        }
    }
}

/// Incidence-preserving bijection between two full subcomplexes of one ambient complex.
#[derive(Clone, Debug)]
pub struct LocalIsomorphism {
    pub source: SubcomplexMask,
    pub target: SubcomplexMask,
    /// `map.cells[j][i]` is the image of source cell `i` (source cells are an index prefix).
    pub map: CopyMap,
}

impl LocalIsomorphism {
    pub fn apply(&self, c: CellId) -> Option<CellId> {
        self.map
            .cells
            .get(c.dim)
            .and_then(|v| v.get(c.index))
            .map(|&i| CellId::new(c.dim, i))
    }

    pub fn source_len(&self, j: usize) -> usize {
        self.map.cells.get(j).map_or(0, |v| v.len())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrontierStat {
    pub level: usize,
    pub cells: usize,
    pub frontier: usize,
    pub frontier_g: usize,
    pub epsilon: f64,
}

/// A nested family of finite complexes with its copy maps.
#[derive(Clone, Debug)]
pub struct Exhaustion {
    pub family: Option<Family>,
    levels: Vec<CwComplex>,
    copy_maps: Vec<Vec<CopyMap>>,
    dual_certificate: Option<Vec<Vec<usize>>>,
}

impl Exhaustion {
    pub fn new(
        family: Option<Family>,
        levels: Vec<CwComplex>,
        copy_maps: Vec<Vec<CopyMap>>,
    ) -> Result<Self> {
        if levels.is_empty() || copy_maps.len() + 1 != levels.len() {
            return Err(Error::Construction(
                "need one set of copy maps per level transition".into(),
            ));
        }
        for n in 0..copy_maps.len() {
            let (a, b) = (&levels[n], &levels[n + 1]);
            if a.dim() != b.dim() || a.counts().iter().zip(b.counts()).any(|(x, y)| x > y) {
                return Err(Error::Construction(format!(
                    "level {n} is not a prefix of level {}",
                    n + 1
                )));
            }
            for m in &copy_maps[n] {
                let bad_shape = m.cells.len() != a.dim() + 1
                    || m.cells.iter().zip(a.counts()).any(|(v, &k)| v.len() != k)
                    || (0..m.cells.len()).any(|j| m.cells[j].iter().any(|&i| i >= b.count(j)));
                if bad_shape {
                    return Err(Error::Construction(format!(
                        "copy map at level {n} has the wrong shape"
                    )));
                }
            }
        }
        Ok(Exhaustion {
            family,
            levels,
            copy_maps,
            dual_certificate: None,
        })
    }

    pub(crate) fn with_certificate(mut self, cert: Vec<Vec<usize>>) -> Self {
        self.dual_certificate = Some(cert);
        self
    }

    /// For each level, the gasket vertex assigned to each top cell, when certified.
    pub fn dual_certificate(&self) -> Option<&[Vec<usize>]> {
        self.dual_certificate.as_deref()
    }

    pub fn levels(&self) -> &[CwComplex] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &CwComplex {
        &self.levels[n]
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn top(&self) -> &CwComplex {
        self.levels.last().expect("nonempty")
    }

    pub fn dim(&self) -> usize {
        self.top().dim()
    }

    /// Maps of `G(n, n+1)`.
    pub fn copy_maps(&self, n: usize) -> &[CopyMap] {
        &self.copy_maps[n]
    }

    /// All admissible products in `G(n, m)`, as maps from `K_n` indices to `K_m` indices.
    pub fn compose(&self, n: usize, m: usize) -> Vec<CopyMap> {
        assert!(n <= m && m <= self.top_level());
        let mut current = vec![CopyMap::identity(&self.levels[n])];
        for k in n..m {
            let mut next = Vec::with_capacity(current.len() * self.copy_maps[k].len());
            for g in &current {
                for c in &self.copy_maps[k] {
                    next.push(g.then(c));
                }
            }
            current = next;
        }
        current
    }

    /// The `which`-th element of `G(n, m)` as a local isomorphism of `K_m`.
    pub fn local_isomorphism(&self, n: usize, m: usize, which: usize) -> Result<LocalIsomorphism> {
        let maps = self.compose(n, m);
        let map = maps
            .into_iter()
            .nth(which)
            .ok_or_else(|| Error::InvalidArgument(format!("no element {which} in G({n},{m})")))?;
        let ambient = &self.levels[m];
        let source = SubcomplexMask::prefix(ambient, self.levels[n].counts());
        let mut target = SubcomplexMask::empty(ambient);
        for (j, v) in map.cells.iter().enumerate() {
            for &i in v {
                target.insert(CellId::new(j, i));
            }
        }
        Ok(LocalIsomorphism {
            source,
            target,
            map,
        })
    }

    /// `ε_n = |F_G(E_j K_n)| / |E_j K_n|` for every level below the top,
    /// with frontiers taken inside the top level.
    pub fn frontier_stats(&self, j: usize) -> Vec<FrontierStat> {
        let top = self.top();
        let nn = self.top_level();
        let mut stamp = vec![usize::MAX; top.count(j)];
        let mut generation = 0usize;
        let mut out = Vec::new();
        for n in 0..nn {
            let cells = self.levels[n].count(j);
            let mut in_fg = vec![false; cells];
            let plain = SubcomplexMask::prefix(top, self.levels[n].counts());
            let frontier = top.frontier(&plain, j).len();
            for m in n..=nn {
                for g in self.compose(n, m) {
                    generation += 1;
                    for &i in &g.cells[j] {
                        stamp[i] = generation;
                    }
                    for (src, &i) in g.cells[j].iter().enumerate() {
                        let outside = top
                            .neighbors(CellId::new(j, i), crate::complex::Flavor::D)
                            .iter()
                            .any(|&nb| stamp[nb] != generation);
                        if outside {
                            in_fg[src] = true;
                        }
                    }
                }
            }
            let frontier_g = in_fg.iter().filter(|&&b| b).count();
            out.push(FrontierStat {
                level: n,
                cells,
                frontier,
                frontier_g,
                epsilon: if cells == 0 {
                    0.0
                } else {
                    frontier_g as f64 / cells as f64
                },
            });
        }
        out
    }

    /// `ε_n` for dimension `j`, if `n` is below the top level.
    pub fn epsilon(&self, n: usize, j: usize) -> Option<f64> {
        self.frontier_stats(j).get(n).map(|s| s.epsilon)
    }

    /// Sidecar text listing the copy maps of `G(n, n+1)`.
    pub fn write_copy_maps(&self, n: usize) -> String {
        let mut s = String::new();
        let maps = &self.copy_maps[n];
        let _ = writeln!(s, "copymaps from {} to {} copies {}", n, n + 1, maps.len());
        for (c, m) in maps.iter().enumerate() {
            for (j, v) in m.cells.iter().enumerate() {
                for (src, dst) in v.iter().enumerate() {
                    let _ = writeln!(s, "{c} {j} {src} {dst}");
                }
            }
        }
        s
    }
}

/// Parses a copy-map sidecar back into `(from_level, maps)`.
pub fn read_copy_maps(text: &str, source: &CwComplex) -> Result<(usize, Vec<CopyMap>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let bad = |line: usize, msg: &str| Error::Parse {
        line: line + 1,
        msg: msg.to_string(),
    };
    let (ln, head) = lines.next().ok_or_else(|| bad(0, "empty copy-map file"))?;
    let f: Vec<&str> = head.split_whitespace().collect();
    if f.len() != 7 || f[0] != "copymaps" || f[1] != "from" || f[3] != "to" || f[5] != "copies" {
        return Err(bad(ln, "expected `copymaps from n to n+1 copies q`"));
    }
    let from: usize = f[2].parse().map_err(|_| bad(ln, "bad level"))?;
    let q: usize = f[6].parse().map_err(|_| bad(ln, "bad copy count"))?;
    let mut maps: Vec<CopyMap> = (0..q)
        .map(|_| CopyMap {
            cells: source
                .counts()
                .iter()
                .map(|&n| vec![usize::MAX; n])
                .collect(),
        })
        .collect();
    for (ln, l) in lines {
        let v: Vec<usize> = l
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| bad(ln, "bad integer")))
            .collect::<Result<_>>()?;
        if v.len() != 4 || v[0] >= q || v[1] > source.dim() || v[2] >= source.count(v[1]) {
            return Err(bad(ln, "expected `copy j src dst` within range"));
        }
        maps[v[0]].cells[v[1]][v[2]] = v[3];
    }
    if maps
        .iter()
        .flat_map(|m| m.cells.iter().flatten())
        .any(|&d| d == usize::MAX)
    {
        return Err(bad(0, "copy map is incomplete"));
    }
    Ok((from, maps))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionCondition {
    /// Overlaps of distinct copies lie in both copies' frontiers.
    Strict,
    /// Overlaps lie within distance `r` of both frontiers.
    Relaxed { r: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub copies: usize,
    pub covering: bool,
    pub intersection: IntersectionCondition,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfSimilarityReport {
    pub levels: Vec<LevelReport>,
    /// `frontier[j]` lists the per-level frontier statistics in dimension `j`.
    pub frontier: Vec<Vec<FrontierStat>>,
    pub epsilon_decreasing: bool,
    pub passed: bool,
}

impl SelfSimilarityReport {
    pub fn needs_relaxed_intersection(&self) -> bool {
        self.levels
            .iter()
            .any(|l| matches!(l.intersection, IntersectionCondition::Relaxed { .. }))
    }
}

/// Checks covering, copy-overlap, local-isomorphism and fullness conditions
/// at every stored level transition, and tabulates `ε_n`.
pub fn verify_self_similarity(ex: &Exhaustion) -> SelfSimilarityReport {
    let top = ex.top();
    let p = ex.dim();
    let mut levels = Vec::new();
    for n in 0..ex.top_level() {
        let (src, dst) = (ex.level(n), ex.level(n + 1));
        let maps = ex.copy_maps(n);
        let mut failures = Vec::new();

        let prefix = SubcomplexMask::prefix(dst, src.counts());
        if let Some(c) = prefix.fullness_witness(dst) {
            failures.push(format!(
                "level {n} is not full in level {}: cell {c}",
                n + 1
            ));
        }

        let mut covering = true;
        for j in 0..=p {
            let mut hit = vec![false; dst.count(j)];
            for m in maps {
                for &i in &m.cells[j] {
                    hit[i] = true;
                }
            }
            if let Some(i) = hit.iter().position(|&h| !h) {
                covering = false;
                failures.push(format!("copies miss cell {}", CellId::new(j, i)));
            }
        }

        let mut images = Vec::new();
        for (c, m) in maps.iter().enumerate() {
            let mut img = SubcomplexMask::empty(dst);
            for j in 0..=p {
                let mut seen = vec![false; dst.count(j)];
                for &i in &m.cells[j] {
                    if seen[i] {
                        failures.push(format!("copy {c} is not injective on {j}-cells"));
                    }
                    seen[i] = true;
                    img.insert(CellId::new(j, i));
                }
            }
            for r in src.all_records() {
                let (cell, face) = (m.apply(r.cell), m.apply(r.face));
                let found = dst
                    .faces(cell.dim, cell.index)
                    .iter()
                    .find(|&&(f, _)| f == face.index)
                    .map(|&(_, s)| s);
                if found != Some(r.number) {
                    failures.push(format!(
                        "copy {c} at level {n} breaks record [{} : {}] = {} (image has {:?})",
                        r.cell, r.face, r.number, found
                    ));
                }
            }
            for j in 1..=p {
                for i in 0..src.count(j) {
                    if dst.faces(j, m.cells[j][i]).len() != src.faces(j, i).len() {
                        failures.push(format!(
                            "copy {c} at level {n}: image of {} has extra faces",
                            CellId::new(j, i)
                        ));
                    }
                }
            }
            if let Some(w) = img.fullness_witness(dst) {
                failures.push(format!("image of copy {c} is not full: cell {w}"));
            }
            images.push(img);
        }

        let intersection = overlap_condition(top, dst, &images);
        levels.push(LevelReport {
            level: n,
            copies: maps.len(),
            covering,
            intersection,
            failures,
        });
    }

    let frontier: Vec<Vec<FrontierStat>> = (0..=p).map(|j| ex.frontier_stats(j)).collect();
    let epsilon_decreasing = frontier.iter().all(|stats| {
        stats
            .windows(2)
            .filter(|w| w[0].level >= 1)
            .all(|w| w[1].epsilon < w[0].epsilon)
    });
    let passed = levels.iter().all(|l| l.failures.is_empty() && l.covering);
    SelfSimilarityReport {
        levels,
        frontier,
        epsilon_decreasing,
        passed,
    }
}

// Smallest r such that every pairwise overlap lies in the r-balls of both
// copies' frontiers (r = 0 is the strict condition). Frontiers are taken in `top`.
fn overlap_condition(
    top: &CwComplex,
    level: &CwComplex,
    images: &[SubcomplexMask],
) -> IntersectionCondition {
    let mut r_needed = 0usize;
    for j in 0..=level.dim() {
        let dists: Vec<Vec<usize>> = images
            .iter()
            .map(|img| {
                let mut lifted = SubcomplexMask::empty(top);
                for i in img.cells(j) {
                    lifted.insert(CellId::new(j, i));
                }
                let f = top.frontier(&lifted, j);
                top.bfs(j, &f, crate::complex::Flavor::D, None)
            })
            .collect();
        for a in 0..images.len() {
            for b in a + 1..images.len() {
                for i in 0..level.count(j) {
                    let c = CellId::new(j, i);
                    if images[a].contains(c) && images[b].contains(c) {
                        r_needed = r_needed.max(dists[a][i]).max(dists[b][i]);
                    }
                }
            }
        }
    }
    if r_needed == 0 {
        IntersectionCondition::Strict
    } else {
        IntersectionCondition::Relaxed { r: r_needed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::from_name(f.name()), Some(f));
        }
        assert_eq!(Family::from_name("nosuch"), None);
    }

    #[test]
    fn copy_map_sidecar_round_trip() {
        let ex = build_gasket(3).unwrap();
        let text = ex.write_copy_maps(1);
        assert!(text.starts_with("copymaps from 1 to 2 copies 3\n"));
        let (from, maps) = read_copy_maps(&text, ex.level(1)).unwrap();
        assert_eq!(from, 1);
        assert_eq!(maps, ex.copy_maps(1).to_vec());
    }

    #[test]
    fn composition_counts() {
        let ex = build_gasket(4).unwrap();
        assert_eq!(ex.compose(1, 4).len(), 27);
        assert_eq!(ex.compose(2, 2), vec![CopyMap::identity(ex.level(2))]);
        let iso = ex.local_isomorphism(2, 3, 1).unwrap();
        assert!(iso.source.is_full(ex.level(3)));
        assert!(iso.target.is_full(ex.level(3)));
    }
}
