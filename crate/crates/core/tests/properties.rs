use l2fractal::complex::{read_complex, write_complex};
use l2fractal::invariants::{fit_power_law, kernel_dimension, WindowPolicy};
use l2fractal::operators::{
    boundary_matrix, laplacian, read_matrix_market, write_matrix_market, LaplacianKind,
    MarketMatrix, OperatorMatrix, SparseMatrix, Variant,
};
use l2fractal::spectral::rank;
use l2fractal::{CwComplex, IncidenceRecord};
use proptest::prelude::*;
use std::collections::BTreeSet;

// Simplicial 2-complex on `n` vertices from a triangle list and extra edges,
// oriented by increasing vertex labels.
fn simplicial(
    n: usize,
    triangles: &[(usize, usize, usize)],
    extra: &[(usize, usize)],
) -> CwComplex {
    let mut tris = BTreeSet::new();
    for &(a, b, c) in triangles {
        let mut v = [a % n, b % n, c % n];
        v.sort();
        if v[0] < v[1] && v[1] < v[2] {
            tris.insert((v[0], v[1], v[2]));
        }
    }
    let mut edges = BTreeSet::new();
    for &(a, b, c) in &tris {
        edges.extend([(a, b), (a, c), (b, c)]);
    }
    for &(a, b) in extra {
        let (a, b) = (a % n, b % n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    let index = |e: (usize, usize)| edges.binary_search(&e).unwrap();
    let mut recs = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        recs.push(IncidenceRecord::new(1, i, a, -1));
        recs.push(IncidenceRecord::new(1, i, b, 1));
    }
    for (t, &(a, b, c)) in tris.iter().enumerate() {
        recs.push(IncidenceRecord::new(2, t, index((b, c)), 1));
        recs.push(IncidenceRecord::new(2, t, index((a, c)), -1));
        recs.push(IncidenceRecord::new(2, t, index((a, b)), 1));
    }
    CwComplex::new(vec![n, edges.len(), tris.len()], recs).unwrap()
}

fn complexes() -> impl Strategy<Value = CwComplex> {
    (3usize..12).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n, 0..n), 0..14),
            prop::collection::vec((0..n, 0..n), 0..10),
        )
            .prop_map(|(n, t, e)| simplicial(n, &t, &e))
    })
}

fn sparse_ints(max: usize) -> impl Strategy<Value = SparseMatrix<i64>> {
    (1..max, 1..max).prop_flat_map(|(r, c)| {
        prop::collection::vec((0..r, 0..c, -3i64..4), 0..3 * r.max(c))
            .prop_map(move |t| SparseMatrix::from_triplets(r, c, t))
    })
}

fn dense_product(a: &SparseMatrix<i64>, b: &SparseMatrix<i64>) -> Vec<Vec<i64>> {
    let (x, y) = (a.to_dense(), b.to_dense());
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| (0..a.cols()).map(|k| x[i][k] * y[k][j]).sum())
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_of_boundary_vanishes(cx in complexes()) {
        let d1 = boundary_matrix(&cx, 1).unwrap();
        let d2 = boundary_matrix(&cx, 2).unwrap();
        prop_assert!(d1.as_integer().unwrap().matmul(d2.as_integer().unwrap()).is_zero());
        prop_assert!(cx.validate().is_ok());
    }

    #[test]
    fn half_laplacians_annihilate_each_other(cx in complexes(), j in 0usize..3) {
        let p = laplacian(&cx, j, LaplacianKind::Plus, false).unwrap();
        let m = laplacian(&cx, j, LaplacianKind::Minus, false).unwrap();
        let (p, m) = (p.as_integer().unwrap(), m.as_integer().unwrap());
        prop_assert!(p.matmul(m).is_zero());
        prop_assert!(m.matmul(p).is_zero());
        let full = laplacian(&cx, j, LaplacianKind::Full, false).unwrap();
        prop_assert_eq!(full.as_integer().unwrap(), &p.add(m));
    }

    #[test]
    fn hodge_ranks_add_up(cx in complexes(), j in 0usize..3) {
        let p = laplacian(&cx, j, LaplacianKind::Plus, false).unwrap();
        let m = laplacian(&cx, j, LaplacianKind::Minus, false).unwrap();
        let k = kernel_dimension(&cx, j, false).unwrap();
        prop_assert_eq!(
            rank(p.as_integer().unwrap()) + rank(m.as_integer().unwrap()) + k,
            cx.count(j)
        );
    }

    #[test]
    fn euler_characteristic_is_alternating_kernel_sum(cx in complexes()) {
        let betti: Vec<i64> = (0..=2).map(|j| kernel_dimension(&cx, j, false).unwrap() as i64).collect();
        prop_assert_eq!(betti[0] - betti[1] + betti[2], cx.euler_characteristic());
    }

    #[test]
    fn sparse_products_match_dense(a in sparse_ints(7), b in sparse_ints(7)) {
        let b = SparseMatrix::from_triplets(a.cols(), b.cols(),
            b.triplets().filter(|t| t.0 < a.cols()).collect());
        prop_assert_eq!(a.matmul(&b).to_dense(), dense_product(&a, &b));
        prop_assert_eq!(a.matmul(&b).transpose(), b.transpose().matmul(&a.transpose()));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert!(a.matmul(&a.transpose()).is_symmetric());
    }

    #[test]
    fn matrix_market_round_trip(a in sparse_ints(9)) {
        let op = OperatorMatrix::integer(Variant::Boundary, 1, a.clone());
        let text = write_matrix_market(&op);
        prop_assert_eq!(read_matrix_market(&text).unwrap(), MarketMatrix::Integer(a));
    }

    #[test]
    fn complex_text_round_trip(cx in complexes()) {
        prop_assert_eq!(read_complex(&write_complex(&cx)).unwrap(), cx);
    }

    #[test]
    fn power_law_fits_are_exact(s in 0.2f64..2.0, beta in 0.0f64..1.0, amp in 0.1f64..10.0) {
        let t: Vec<f64> = (0..70).map(|i| 10f64.powf(-1.0 + 6.0 * i as f64 / 69.0)).collect();
        let v: Vec<f64> = t.iter().map(|&x| beta + amp * x.powf(-s)).collect();
        let f = fit_power_law(&t, &v, beta, WindowPolicy::default(), None).unwrap();
        prop_assert!((f.exponent - s).abs() < 1e-6);
        prop_assert!((f.amplitude - amp).abs() < 1e-6 * amp);
    }
}
