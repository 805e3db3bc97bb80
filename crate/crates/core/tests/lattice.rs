use bmlattice::lattice::{
    build_lattice, check_primitivity, classify_pairs, edge_dimension, probe_upper, verify_gram_h, NodeId,
    DEFAULT_PROBE_DEPTH, EDGES,
};
use bmlattice::linalg::{self, Mat};
use bmlattice::matspace::{self, intersect_space, product_space, span, sum_space};
use bmlattice::{build_named, Family, Scheme, Tolerances};
use proptest::prelude::*;

fn scheme(family: Family, params: &[usize]) -> Scheme {
    Scheme::new(build_named(family, params).unwrap(), Tolerances::default()).unwrap()
}

fn labels(prefix: &str, k: usize) -> Vec<String> {
    (0..k).map(|i| format!("{prefix}{i}")).collect()
}

#[test]
fn cube_subspace_examples() {
    let s = scheme(Family::Hypercube, &[3]);
    let t = Tolerances::default();
    let da = s.dual(0).unwrap();
    let m = span(8, &s.bm.a, &labels("A", 4), &t);
    let estar: Vec<Mat> = (0..4).map(|i| da.estar_matrix(i)).collect();
    let mstar = span(8, &estar, &labels("E*", 4), &t);
    assert_eq!(m.dim(), 4);
    assert_eq!(mstar.dim(), 4);
    assert_eq!(sum_space(&m, &mstar, &t).unwrap().dim(), 7);
    let cap = intersect_space(&m, &mstar, &t).unwrap();
    assert_eq!(cap.dim(), 1);
    assert!(cap.contains(&Mat::identity(8, 8), &t));
    let mms = product_space(&m, &mstar, &t).unwrap();
    let msm = product_space(&mstar, &m, &t).unwrap();
    assert_eq!(mms.dim(), 16);
    assert_eq!(intersect_space(&mms, &msm, &t).unwrap().dim(), 12);
    assert!(!mstar.contains(&s.bm.a[1], &t));
    // the A*_i span the same space as the E*_i
    let astar: Vec<Mat> = (0..4).map(|i| da.astar_matrix(i)).collect();
    assert!(mstar.containment_residual(&span(8, &astar, &labels("A*", 4), &t)) < 1e-10);
}

#[test]
fn gram_ranks_agree_with_stacked_svd() {
    let s = scheme(Family::Cycle, &[7]);
    let t = Tolerances::default();
    let da = s.dual(3).unwrap();
    let mut prods: Vec<Mat> = Vec::new();
    for i in 0..=3 {
        for j in 0..=3 {
            prods.push(&s.bm.a[i] * da.astar_matrix(j) + da.astar_matrix(j) * &s.bm.a[i]);
        }
    }
    let r = matspace::gram_rank(&prods, &t);
    assert_eq!(r, matspace::stacked_rank(&prods, &t));
    assert_eq!(r, span(7, &prods, &labels("S", prods.len()), &t).dim());
}

fn expected_dims(d: usize, p: usize) -> [usize; 8] {
    [1, d + 1, d + 1, 2 * d + 1, 2 * d + 1 + p, (d + 1) * (d + 1), (d + 1) * (d + 1), 2 * d * d + 2 * d + 1 - p]
}

fn lattice_dims(s: &Scheme, x: usize) -> (usize, Vec<usize>, bool) {
    let t = Tolerances::default();
    let da = s.dual(x).unwrap();
    let pc = classify_pairs(&s.spec, &t).unwrap();
    let lat = build_lattice(s, &da, &pc, &t).unwrap();
    let dims = NodeId::ALL.iter().map(|&id| lat.node(id).numeric.dim()).collect();
    (pc.p, dims, lat.passed())
}

#[test]
fn cube_and_heptagon_dimensions() {
    let (p, dims, ok) = lattice_dims(&scheme(Family::Hypercube, &[3]), 0);
    assert_eq!(p, 5);
    assert_eq!(dims, vec![1, 4, 4, 7, 12, 16, 16, 20]);
    assert!(ok);
    let (p, dims, ok) = lattice_dims(&scheme(Family::Cycle, &[7]), 0);
    assert_eq!(p, 0);
    assert_eq!(dims, vec![1, 4, 4, 7, 7, 16, 16, 25]);
    assert!(ok);
}

#[test]
fn pair_count_from_u_table() {
    // count |u_i(θ_j)| = 1 over 1 <= i, j <= D directly
    for (s, p) in [
        (scheme(Family::Hypercube, &[3]), 5),
        (scheme(Family::Hypercube, &[4]), 7),
        (scheme(Family::Cycle, &[6]), 5),
        (scheme(Family::Cycle, &[7]), 0),
        (scheme(Family::Hamming, &[3, 3]), 0),
    ] {
        let d = s.diameter();
        let count = (1..=d)
            .flat_map(|i| (1..=d).map(move |j| (i, j)))
            .filter(|&(i, j)| (s.spec.u(i, j).abs() - 1.0).abs() < 1e-8)
            .count();
        assert_eq!(count, p);
        assert_eq!(classify_pairs(&s.spec, &Tolerances::default()).unwrap().p, p);
    }
}

#[test]
fn primitivity_agrees_with_pair_count() {
    let t = Tolerances::default();
    for (s, primitive) in [
        (scheme(Family::Hamming, &[3, 3]), true),
        (scheme(Family::Cycle, &[7]), true),
        (scheme(Family::Hypercube, &[3]), false),
        (scheme(Family::Cycle, &[6]), false),
        // antipodal: distance-3 graph is a perfect matching
        (scheme(Family::Johnson, &[6, 3]), false),
    ] {
        let pc = classify_pairs(&s.spec, &t).unwrap();
        let pr = check_primitivity(&s.graph, &pc).unwrap();
        assert_eq!(pr.primitive, primitive);
        assert_eq!(pc.p == 0, primitive);
    }
}

#[test]
fn gram_h_examples() {
    let s = scheme(Family::Hypercube, &[3]);
    let da = s.dual(0).unwrap();
    let t = Tolerances::default();
    let g = verify_gram_h(&s, &da, 1, 1, &t).unwrap();
    let want = [[72.0, 24.0], [24.0, 72.0]];
    for r in 0..2 {
        for c in 0..2 {
            assert!((g.gram[r][c] - want[r][c]).abs() < 1e-9);
        }
    }
    assert!((g.det - (72.0 * 72.0 - 24.0 * 24.0)).abs() < 1e-6);
    let g = verify_gram_h(&s, &da, 0, 0, &t).unwrap();
    assert!((g.gram[0][1] - 8.0).abs() < 1e-12 && g.det.abs() < 1e-9);
}

#[test]
fn degenerate_pairs_commute_or_anticommute() {
    let s = scheme(Family::Hypercube, &[3]);
    let da = s.dual(0).unwrap();
    let pc = classify_pairs(&s.spec, &Tolerances::default()).unwrap();
    for (i, j) in pc.pairs(1, true) {
        let a = &s.bm.a[i] * da.astar_matrix(j);
        let b = da.astar_matrix(j) * &s.bm.a[i];
        let sign = s.spec.u(i, j).signum();
        let diff = &a - &b * sign;
        assert!(linalg::max_abs(&diff) / linalg::max_abs(&a) < 1e-8, "({i},{j})");
        assert!(linalg::norm(&a) > 1e-3);
    }
}

#[test]
fn probe_counts_on_corpus() {
    let t = Tolerances::default();
    for s in [
        scheme(Family::Hypercube, &[3]),
        scheme(Family::Cycle, &[7]),
        scheme(Family::Hamming, &[3, 3]),
        scheme(Family::Johnson, &[6, 3]),
    ] {
        let da = s.dual(0).unwrap();
        let pc = classify_pairs(&s.spec, &t).unwrap();
        let lat = build_lattice(&s, &da, &pc, &t).unwrap();
        let pr = probe_upper(&s, &da, &lat, DEFAULT_PROBE_DEPTH, &t).unwrap();
        let d = s.diameter();
        let p_count = (0..=d)
            .flat_map(|h| (0..=d).flat_map(move |i| (0..=d).map(move |j| (h, i, j))))
            .filter(|&(h, i, j)| s.ia.p(h, i, j) != 0)
            .count();
        assert_eq!(pr.mstar_m_mstar, p_count);
        assert_eq!(pr.m_mstar_m, pr.q_nonzero);
        assert_eq!(pr.m_mstar_m, pr.m_mstar_m_gram_rank);
        assert_eq!(pr.mstar_m_mstar, pr.mstar_m_mstar_gram_rank);
        assert!(pr.converged);
        assert!(pr.t_dim >= pr.sum && pr.sum >= pr.m_mstar_m.max(pr.mstar_m_mstar));
        assert!(pr.verdicts.iter().all(|v| v.passed));
    }
}

#[test]
fn cube_generated_algebra_dimension() {
    // the algebra generated by M and M* on the D-cube has dimension C(D+3, 3)
    let t = Tolerances::default();
    for (d, want) in [(3, 20), (4, 35)] {
        let s = scheme(Family::Hypercube, &[d]);
        let da = s.dual(0).unwrap();
        let pc = classify_pairs(&s.spec, &t).unwrap();
        let lat = build_lattice(&s, &da, &pc, &t).unwrap();
        assert_eq!(probe_upper(&s, &da, &lat, DEFAULT_PROBE_DEPTH, &t).unwrap().t_dim, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dimensions_hold_at_every_base_vertex(which in 0usize..4, x in any::<prop::sample::Index>()) {
        let (family, params): (Family, &[usize]) = [
            (Family::Hypercube, &[3][..]),
            (Family::Cycle, &[7]),
            (Family::Johnson, &[6, 3]),
            (Family::Hamming, &[3, 3]),
        ][which];
        let s = scheme(family, params);
        let x = x.index(s.n());
        let (p, dims, ok) = lattice_dims(&s, x);
        prop_assert!(ok);
        prop_assert_eq!(dims, expected_dims(s.diameter(), p).to_vec());
        for (lo, hi) in EDGES {
            prop_assert_eq!(
                edge_dimension(lo, hi, s.diameter(), p),
                hi.dimension(s.diameter(), p) - lo.dimension(s.diameter(), p)
            );
        }
    }
}
