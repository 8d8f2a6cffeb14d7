//! Sierpiński carpet 2-complexes on the integer grid.

use super::{substitute, Exhaustion, Family, Glue};
use crate::complex::{CellId, CwComplex, IncidenceRecord};
use crate::error::{Error, Result};
use std::collections::HashMap;

// Grid keys of cells; discarded once the complex is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    Vertex(i64, i64),
    // lower/left endpoint and direction (false = +x, true = +y)
    Edge(i64, i64, bool),
    Square(i64, i64),
}

impl Key {
    fn shift(self, dx: i64, dy: i64) -> Key {
        match self {
            Key::Vertex(x, y) => Key::Vertex(x + dx, y + dy),
            Key::Edge(x, y, d) => Key::Edge(x + dx, y + dy, d),
            Key::Square(x, y) => Key::Square(x + dx, y + dy),
        }
    }
}

const BLOCKS: [(i64, i64); 8] = [
    (0, 0),
    (1, 0),
    (2, 0),
    (0, 1),
    (2, 1),
    (0, 2),
    (1, 2),
    (2, 2),
];

fn unit_square() -> (CwComplex, Vec<Vec<Key>>) {
    // vertices (0,0) (1,0) (1,1) (0,1); edges bottom, right, top, left
    let vertices = vec![
        Key::Vertex(0, 0),
        Key::Vertex(1, 0),
        Key::Vertex(1, 1),
        Key::Vertex(0, 1),
    ];
    let edges = vec![
        Key::Edge(0, 0, false),
        Key::Edge(1, 0, true),
        Key::Edge(0, 1, false),
        Key::Edge(0, 0, true),
    ];
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
    let cx = CwComplex::new(vec![4, 4, 1], recs).expect("unit square");
    (cx, vec![vertices, edges, vec![Key::Square(0, 0)]])
}

/// Level `n` holds the `8^n` unit squares of the level-`n` carpet on a
/// `3^n × 3^n` grid; copy maps are the eight block translations, with the
/// lower-left block as copy 0.
pub fn build_carpet_complex(levels: usize) -> Result<Exhaustion> {
    if levels < 1 {
        return Err(Error::InvalidArgument(
            "at least one level is required".into(),
        ));
    }
    let (mut current, mut keys) = unit_square();
    let mut all = vec![current.clone()];
    let mut maps_all = Vec::new();
    let mut side = 1i64;
    for _ in 0..levels {
        let mut first: HashMap<Key, (usize, CellId)> = HashMap::new();
        let mut glue = Vec::new();
        for (c, &(bx, by)) in BLOCKS.iter().enumerate() {
            for (j, ks) in keys.iter().enumerate() {
                for (i, k) in ks.iter().enumerate() {
                    let shifted = k.shift(bx * side, by * side);
                    let cell = CellId::new(j, i);
                    match first.get(&shifted) {
                        Some(&(c0, cell0)) => glue.push(Glue::new(c0, cell0, c, cell)),
                        None => {
                            first.insert(shifted, (c, cell));
                        }
                    }
                }
            }
        }
        let (next, maps) = substitute(&current, BLOCKS.len(), &glue)?;
        let mut next_keys: Vec<Vec<Option<Key>>> =
            next.counts().iter().map(|&n| vec![None; n]).collect();
        for (c, &(bx, by)) in BLOCKS.iter().enumerate() {
            for (j, ks) in keys.iter().enumerate() {
                for (i, k) in ks.iter().enumerate() {
                    next_keys[j][maps[c].cells[j][i]] = Some(k.shift(bx * side, by * side));
                }
            }
        }
        keys = next_keys
            .into_iter()
            .map(|v| v.into_iter().map(|k| k.expect("covered")).collect())
            .collect();
        current = next;
        all.push(current.clone());
        maps_all.push(maps);
        side *= 3;
    }
    Exhaustion::new(Some(Family::Carpet2), all, maps_all)
}
