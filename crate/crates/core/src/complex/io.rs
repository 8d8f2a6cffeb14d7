use super::{CwComplex, IncidenceRecord};
use crate::error::{Error, Result};
use std::fmt::Write as _;

/// Renders the structured-text form: `dim p`, one `count j n` line per
/// dimension, then `j cell face sign` lines in lexicographic order.
pub fn write_complex(cx: &CwComplex) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dim {}", cx.dim());
    for (j, n) in cx.counts().iter().enumerate() {
        let _ = writeln!(s, "count {j} {n}");
    }
    for r in cx.all_records() {
        let _ = writeln!(
            s,
            "{} {} {} {}",
            r.cell.dim, r.cell.index, r.face.index, r.number
        );
    }
    s
}

pub fn read_complex(text: &str) -> Result<CwComplex> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let parse_err = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let (ln, head) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
    let p: usize = head
        .strip_prefix("dim ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| parse_err(ln, "expected `dim p`"))?;
    let mut counts = Vec::with_capacity(p + 1);
    let mut last = ln;
    for j in 0..=p {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(last, "missing count line"))?;
        last = ln;
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 3 || f[0] != "count" || f[1].parse::<usize>().ok() != Some(j) {
            return Err(parse_err(ln, &format!("expected `count {j} n`")));
        }
        counts.push(f[2].parse().map_err(|_| parse_err(ln, "bad count"))?);
    }
    let mut records = Vec::new();
    for (ln, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 4 {
            return Err(parse_err(ln, "expected `j cell face sign`"));
        }
        let j: usize = f[0].parse().map_err(|_| parse_err(ln, "bad dimension"))?;
        let c: usize = f[1].parse().map_err(|_| parse_err(ln, "bad cell index"))?;
        let b: usize = f[2].parse().map_err(|_| parse_err(ln, "bad face index"))?;
        let s: i32 = f[3].parse().map_err(|_| parse_err(ln, "bad incidence"))?;
        if j == 0 {
            return Err(parse_err(ln, "0-cells have no faces"));
        }
        records.push(IncidenceRecord::new(j, c, b, s));
    }
    CwComplex::new(counts, records)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn triangle_text_is_stable() {
        let text = write_complex(&triangle());
        let expected = "dim 2\ncount 0 3\ncount 1 3\ncount 2 1\n\
1 0 0 -1\n1 0 1 1\n1 1 1 -1\n1 1 2 1\n1 2 0 1\n1 2 2 -1\n\
2 0 0 1\n2 0 1 1\n2 0 2 1\n";
        assert_eq!(text, expected);
        assert_eq!(read_complex(&text).unwrap(), triangle());
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(read_complex(""), Err(Error::Parse { .. })));
        assert!(matches!(
            read_complex("dim 1\ncount 0 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_complex("dim 1\ncount 0 2\ncount 1 1\n1 0 0\n"),
            Err(Error::Parse { line: 4, .. })
        ));
    }
}
