use bmlattice::graph::check_distance_regular;
use bmlattice::{build_named, intersection_array, is_distance_regular, Error, Family, Graph};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn digits(mut v: usize, q: usize, d: usize) -> Vec<usize> {
    (0..d)
        .map(|_| {
            let r = v % q;
            v /= q;
            r
        })
        .collect()
}

#[test]
fn hamming_distances_match_word_distance() {
    let g = build_named(Family::Hamming, &[3, 3]).unwrap();
    assert_eq!(g.n(), 27);
    for x in 0..27 {
        for y in 0..27 {
            let (a, b) = (digits(x, 3, 3), digits(y, 3, 3));
            let hd = a.iter().zip(&b).filter(|(s, t)| s != t).count();
            assert_eq!(g.dist(x, y), hd, "{x} {y}");
        }
    }
}

#[test]
fn hamming_intersection_array() {
    // b_i = (D - i)(q - 1), c_i = i
    let ia = intersection_array(&build_named(Family::Hamming, &[3, 3]).unwrap()).unwrap();
    assert_eq!(ia.b, vec![6, 4, 2]);
    assert_eq!(ia.c, vec![1, 2, 3]);
    assert_eq!(ia.k, vec![1, 6, 12, 8]);
}

#[test]
fn johnson_intersection_array() {
    // b_i = (k - i)(n - k - i), c_i = i²
    let ia = intersection_array(&build_named(Family::Johnson, &[7, 3]).unwrap()).unwrap();
    assert_eq!(ia.b, vec![12, 6, 2]);
    assert_eq!(ia.c, vec![1, 4, 9]);
    assert_eq!(ia.vertex_count(), 35);
}

fn sorted_distance_profile(g: &Graph) -> Vec<Vec<usize>> {
    let mut rows: Vec<Vec<usize>> = (0..g.n())
        .map(|x| {
            let mut r: Vec<usize> = (0..g.n()).map(|y| g.dist(x, y)).collect();
            r.sort_unstable();
            r
        })
        .collect();
    rows.sort();
    rows
}

#[test]
fn edge_list_cube_matches_family() {
    let text = "# cube with scrambled labels\n8\n0 1\n0 2\n0 4\n1 3\n1 5\n2 3\n2 6\n3 7\n4 5\n4 6\n5 7\n6 7\n";
    let g = Graph::load_edge_list(text).unwrap();
    let q3 = build_named(Family::Hypercube, &[3]).unwrap();
    assert_eq!(sorted_distance_profile(&g), sorted_distance_profile(&q3));
    assert_eq!(intersection_array(&g).unwrap(), intersection_array(&q3).unwrap());
}

#[test]
fn path_has_counting_witness() {
    let g = Graph::load_edge_list("0 1\n1 2\n2 3\n3 4\n").unwrap();
    let (ok, witness) = is_distance_regular(&g);
    assert!(!ok);
    let w = witness.unwrap();
    // recount both pairs by brute force
    let count = |x: usize, y: usize| (0..g.n()).filter(|&z| g.dist(x, z) == w.i && g.dist(y, z) == w.j).count();
    let (x, y, c) = w.first;
    let (x2, y2, c2) = w.second;
    assert_eq!(g.dist(x, y), w.h);
    assert_eq!(g.dist(x2, y2), w.h);
    assert_eq!(count(x, y), c);
    assert_eq!(count(x2, y2), c2);
    assert_ne!(c, c2);
    assert!(matches!(intersection_array(&g), Err(Error::NotDistanceRegular(_))));
}

#[test]
fn regular_but_not_distance_regular() {
    // triangular prism: 3-regular, diameter 2, not distance-regular
    let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]).unwrap();
    assert!(!is_distance_regular(&g).0);
}

fn corpus() -> Vec<Graph> {
    vec![
        build_named(Family::Hypercube, &[3]).unwrap(),
        build_named(Family::Hypercube, &[4]).unwrap(),
        build_named(Family::Cycle, &[7]).unwrap(),
        build_named(Family::Hamming, &[3, 3]).unwrap(),
        build_named(Family::Johnson, &[6, 3]).unwrap(),
    ]
}

#[test]
fn intersection_number_symmetry() {
    for g in corpus() {
        let ia = intersection_array(&g).unwrap();
        let d = ia.diameter;
        for h in 0..=d {
            for i in 0..=d {
                let row: u64 = (0..=d).map(|j| ia.p(h, i, j)).sum();
                assert_eq!(row, ia.k[i]);
                for j in 0..=d {
                    assert_eq!(ia.k[h] * ia.p(h, i, j), ia.k[i] * ia.p(i, h, j));
                    assert_eq!(ia.p(h, i, j), ia.p(h, j, i));
                    // triangle inequality support
                    if ia.p(h, i, j) > 0 {
                        assert!(h <= i + j && i <= h + j && j <= h + i);
                    }
                }
            }
        }
    }
}

#[test]
fn tensor_counts_match_brute_force() {
    let g = build_named(Family::Johnson, &[6, 3]).unwrap();
    let ia = match check_distance_regular(&g) {
        bmlattice::graph::Regularity::Regular(ia) => ia,
        _ => panic!("J(6,3) is distance-regular"),
    };
    for x in [0, 7, 19] {
        for y in 0..g.n() {
            let h = g.dist(x, y);
            for i in 0..=3 {
                for j in 0..=3 {
                    let c = (0..g.n()).filter(|&z| g.dist(x, z) == i && g.dist(y, z) == j).count();
                    assert_eq!(c as u64, ia.p(h, i, j));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_preserves_the_array(seed in any::<u64>(), which in 0usize..5) {
        let g = corpus().swap_remove(which);
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(intersection_array(&h).unwrap(), intersection_array(&g).unwrap());
        for x in 0..g.n() {
            for y in 0..g.n() {
                prop_assert_eq!(h.dist(perm[x], perm[y]), g.dist(x, y));
            }
        }
    }

    #[test]
    fn deleting_an_edge_breaks_regularity(which in 0usize..5, e in any::<prop::sample::Index>()) {
        let g = corpus().swap_remove(which);
        let mut edges = g.edges();
        edges.remove(e.index(edges.len()));
        match Graph::from_edges(g.n(), &edges) {
            Ok(h) => prop_assert!(!is_distance_regular(&h).0),
            Err(err) => prop_assert!(matches!(err, Error::Disconnected { .. }), "{}", err),
        }
    }
}
