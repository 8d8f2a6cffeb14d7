use crate::builders::{Exhaustion, Family};
use crate::complex::{boundary_subcomplex, CwComplex};
use crate::error::Result;
use crate::operators::{boundary_matrix, rel_boundary_matrix};
use crate::spectral::{component_labels, rank};
use num_rational::Ratio;
use serde::{Serialize, Serializer};

pub type Rational = Ratio<i128>;

pub(crate) fn as_text<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub(crate) fn opt_as_text<S: Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerLevel {
    pub level: usize,
    pub counts: Vec<usize>,
    pub chi: i64,
    /// `χ(K_n) / |E_p K_n|`.
    #[serde(serialize_with = "as_text")]
    pub ratio: Rational,
    /// `Σ (-1)^j |E_j K_n| / |E_p K_n|`, the alternating sum of normalized volumes.
    #[serde(serialize_with = "as_text")]
    pub alternating_volume: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerReport {
    pub family: Option<String>,
    pub levels: Vec<EulerLevel>,
    /// Exact limit, when closed-form counts are known.
    #[serde(serialize_with = "opt_as_text")]
    pub limit: Option<Rational>,
    /// Levels whose closed-form ratios certify the limit.
    pub limit_certificate: Option<(usize, usize)>,
}

/// Limit of a sequence `a + b ρ^n` from three consecutive terms (Aitken's Δ²).
pub fn aitken(r0: Rational, r1: Rational, r2: Rational) -> Option<Rational> {
    let den = r0 + r2 - r1 * 2;
    if den == Rational::from_integer(0) {
        return (r0 == r1 && r1 == r2).then_some(r0);
    }
    Some((r0 * r2 - r1 * r1) / den)
}

fn counts_ratio(counts: &[u64]) -> Rational {
    let chi: i128 = counts
        .iter()
        .enumerate()
        .map(|(j, &c)| if j % 2 == 0 { c as i128 } else { -(c as i128) })
        .sum();
    Rational::new(chi, *counts.last().unwrap() as i128)
}

/// Exact limit of a ratio sequence given by closed-form counts, certified by
/// two overlapping Aitken extrapolations that agree. Returns the limit and the
/// first and last level used.
pub fn closed_form_limit(
    f: impl Fn(u32) -> Option<Rational>,
    from: u32,
) -> Option<(Rational, (usize, usize))> {
    let r: Vec<Rational> = (from..from + 4).map(&f).collect::<Option<_>>()?;
    let a = aitken(r[0], r[1], r[2])?;
    let b = aitken(r[1], r[2], r[3])?;
    (a == b).then_some((a, (from as usize, from as usize + 3)))
}

fn euler_level(level: usize, counts: Vec<usize>) -> EulerLevel {
    let top = *counts.last().unwrap() as i128;
    let mut chi = 0i64;
    let mut alternating = Rational::from_integer(0);
    for (j, &c) in counts.iter().enumerate() {
        let v = Rational::new(c as i128, top);
        if j % 2 == 0 {
            chi += c as i64;
            alternating += v;
        } else {
            chi -= c as i64;
            alternating -= v;
        }
    }
    EulerLevel {
        level,
        counts,
        chi,
        ratio: Rational::new(chi as i128, top),
        alternating_volume: alternating,
    }
}

fn family_limit(family: Option<Family>) -> Option<(Rational, (usize, usize))> {
    family.and_then(|f| closed_form_limit(|n| f.closed_form_counts(n).map(|c| counts_ratio(&c)), 6))
}

/// `χ(K_n)/|E_p K_n|` per stored level, with the exact limit when the family
/// has closed-form counts.
pub fn euler_characteristic(ex: &Exhaustion) -> EulerReport {
    let levels = ex
        .levels()
        .iter()
        .enumerate()
        .map(|(n, cx)| euler_level(n, cx.counts().to_vec()))
        .collect();
    let limit = family_limit(ex.family);
    EulerReport {
        family: ex.family.map(|f| f.name().to_string()),
        levels,
        limit: limit.map(|l| l.0),
        limit_certificate: limit.map(|l| l.1),
    }
}

/// Same report as [`euler_characteristic`] for levels `0..=levels`, from
/// closed-form counts alone.
pub fn closed_form_euler(family: Family, levels: usize) -> Option<EulerReport> {
    let levels = (0..=levels)
        .map(|n| {
            let c = family.closed_form_counts(n as u32)?;
            Some(euler_level(n, c.into_iter().map(|x| x as usize).collect()))
        })
        .collect::<Option<Vec<_>>>()?;
    let limit = family_limit(Some(family));
    Some(EulerReport {
        family: Some(family.name().to_string()),
        levels,
        limit: limit.map(|l| l.0),
        limit_certificate: limit.map(|l| l.1),
    })
}

/// Exact limit of `dim ker Δ_1 / |E_1|` for graph families with closed-form counts.
pub fn first_betti_limit(f: Family) -> Option<Rational> {
    if f.dim() != 1 {
        return None;
    }
    closed_form_limit(
        |n| {
            let c = f.closed_form_counts(n)?;
            let (v, e) = (c[0] as i128, c[1] as i128);
            Some(Rational::new(e - v + 1, e))
        },
        6,
    )
    .map(|l| l.0)
}

fn boundary_rank(cx: &CwComplex, j: usize, relative: bool) -> Result<usize> {
    if j == 0 || j > cx.dim() {
        return Ok(0);
    }
    if j == 1 && !relative {
        let comps = component_labels(cx).into_iter().max().map_or(0, |m| m + 1);
        return Ok(cx.count(0) - comps);
    }
    let m = if relative {
        rel_boundary_matrix(cx, j)?
    } else {
        boundary_matrix(cx, j)?
    };
    Ok(rank(m.as_integer().expect("integer boundary")))
}

/// `dim ker Δ_j = |E_j| - rank ∂_j - rank ∂_{j+1}`; for the relative
/// Laplacian the count runs over cells outside the boundary subcomplex.
pub fn kernel_dimension(cx: &CwComplex, j: usize, relative: bool) -> Result<usize> {
    let cells = if relative {
        let b = boundary_subcomplex(cx)?;
        cx.count(j) - b.count(j)
    } else {
        cx.count(j)
    };
    Ok(cells - boundary_rank(cx, j, relative)? - boundary_rank(cx, j + 1, relative)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_gasket, build_lindstrom, build_vicsek};
    use crate::complex::fixtures::*;

    #[test]
    fn gasket_sequence_and_limit() {
        let ex = build_gasket(5).unwrap();
        let r = euler_characteristic(&ex);
        for l in &r.levels {
            let p = 3i128.pow(l.level as u32);
            assert_eq!(l.ratio, Rational::new(3 - p, 2 * p));
            assert_eq!(l.ratio, l.alternating_volume);
        }
        assert_eq!(r.limit, Some(Rational::new(-1, 2)));
    }

    #[test]
    fn vicsek_and_lindstrom_limits() {
        assert_eq!(
            euler_characteristic(&build_vicsek(1).unwrap()).limit,
            Some(Rational::new(-1, 4))
        );
        assert_eq!(
            euler_characteristic(&build_lindstrom(1).unwrap()).limit,
            Some(Rational::new(-1, 3))
        );
    }

    #[test]
    fn betti_limits_are_minus_chi() {
        assert_eq!(first_betti_limit(Family::Gasket), Some(Rational::new(1, 2)));
        assert_eq!(first_betti_limit(Family::Vicsek), Some(Rational::new(1, 4)));
        assert_eq!(
            first_betti_limit(Family::Lindstrom),
            Some(Rational::new(1, 3))
        );
    }

    #[test]
    fn kernel_dims_of_small_complexes() {
        // a filled triangle is contractible
        let t = triangle();
        assert_eq!(kernel_dimension(&t, 0, false).unwrap(), 1);
        assert_eq!(kernel_dimension(&t, 1, false).unwrap(), 0);
        assert_eq!(kernel_dimension(&t, 2, false).unwrap(), 0);
        // a hollow 4-cycle has one loop
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(kernel_dimension(&g, 1, false).unwrap(), 1);
        // a disk relative to its boundary circle has one relative 2-cycle
        let sq = square();
        assert_eq!(kernel_dimension(&sq, 2, true).unwrap(), 1);
        assert_eq!(kernel_dimension(&sq, 1, true).unwrap(), 0);
    }

    #[test]
    fn aitken_is_exact_on_geometric_sequences() {
        let f = |n: u32| Rational::new(1, 3) + Rational::new(2, 5i128.pow(n));
        assert_eq!(aitken(f(1), f(2), f(3)), Some(Rational::new(1, 3)));
    }
}
