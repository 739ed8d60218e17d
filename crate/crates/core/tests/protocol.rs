mod common;

use std::collections::BTreeSet;

use common::{closure_simplices, fubini, naive_family, partition_profiles, sigma1, sigma2, simplex_of, v};
use wrcollapse::complexes::{Complex, Simplex, Vertex};
use wrcollapse::procset::ProcSet;
use wrcollapse::protocol::{
    build_iterated, build_wr, chromatic_iterated, chromatic_lambda, chromatic_standard,
    in_next_level, matrix_form, ordered_partitions, sigma_parts, snapshot_subcomplex,
    standard_simplex, ProtocolError, Tower,
};

#[test]
fn chromatic_matches_ordered_partitions() {
    for n in 0..=3usize {
        let chi = chromatic_standard(n).unwrap();
        let expected: BTreeSet<Simplex<Vertex>> = partition_profiles(n).iter().map(simplex_of).collect();
        assert_eq!(chi.maximal_set(), &expected, "n={n}");
        assert_eq!(chi.maximal_count() as u64, fubini(n + 1));
        assert_eq!(ordered_partitions(ProcSet::full(n)).len() as u64, fubini(n + 1));
        assert_eq!(chi.euler_characteristic().unwrap(), 1);
    }
}

#[test]
fn wr_complexes_match_closure_of_brute_force_families() {
    for n in 0..=2usize {
        for l in 0..=n {
            let wr = build_wr(n, l).unwrap();
            let oracle = closure_simplices(&naive_family(n, l));
            let got: BTreeSet<_> = wr.complex.simplices().into_iter().filter(|s| !s.is_empty()).collect();
            assert_eq!(got, oracle, "n={n} l={l}");
        }
    }
}

#[test]
fn wr_census_n2() {
    let wr0 = build_wr(2, 0).unwrap().complex.census();
    assert_eq!(wr0.faces, vec![12, 36, 25]);
    assert_eq!(wr0.total, 73);
    assert_eq!(wr0.euler, Some(1));
    let wr1 = build_wr(2, 1).unwrap().complex;
    assert_eq!(wr1.census().faces, vec![12, 24, 13]);
    assert_eq!(wr1, chromatic_standard(2).unwrap());
}

#[test]
fn wr_levels_are_nested_and_contractible() {
    for n in 0..=3usize {
        for l in 0..=n {
            let c = build_wr(n, l).unwrap().complex;
            assert_eq!(c.euler_characteristic().unwrap(), 1, "n={n} l={l}");
            if l < n {
                let next = build_wr(n, l + 1).unwrap().complex;
                assert!(next.is_subcomplex_of(&c));
            }
        }
        assert_eq!(build_wr(n, n).unwrap().complex, chromatic_standard(n).unwrap());
    }
}

#[test]
fn next_level_test_agrees_with_brute_force() {
    let n = 2;
    for l in 0..n {
        let here = build_wr(n, l).unwrap().complex;
        let next = closure_simplices(&naive_family(n, l + 1));
        for s in here.simplices().into_iter().filter(|s| !s.is_empty()) {
            assert_eq!(in_next_level(&s, n, l), next.contains(&s), "{s} at l={l}");
        }
    }
}

#[test]
fn next_level_test_n3_agrees_with_built_complexes() {
    let n = 3;
    for l in 0..n {
        let here = build_wr(n, l).unwrap().complex;
        let next = build_wr(n, l + 1).unwrap().complex;
        for s in here.simplices().into_iter().filter(|s| !s.is_empty()) {
            assert_eq!(in_next_level(&s, n, l), next.contains(&s), "{s} at l={l}");
        }
    }
}

#[test]
fn worked_simplices() {
    let wr0 = build_wr(2, 0).unwrap().complex;
    let chi = chromatic_standard(2).unwrap();
    for s in [sigma1(), sigma2()] {
        assert!(wr0.contains(&s));
        assert!(!chi.contains(&s));
        assert!(!in_next_level(&s, 2, 0));
    }
    let parts = sigma_parts(&sigma1(), 2, 0);
    assert_eq!(parts.less.len(), 2);
    assert_eq!(parts.equal, Simplex::new([v(0, &[0, 1, 2])]));
    assert_eq!(parts.i_less, ProcSet::full(2));
}

#[test]
fn matrix_form_round_trips_on_wr() {
    for n in 0..=3usize {
        for s in build_wr(n, 0).unwrap().complex.simplices() {
            let m = matrix_form(&s, n).unwrap();
            assert!(m.is_valid(n), "{s}");
            assert_eq!(m.to_simplex(), s);
        }
    }
    let bad = Simplex::new([v(0, &[0, 1]), v(1, &[1, 2]), v(2, &[0, 2])]);
    assert!(matches!(matrix_form(&bad, 2), Err(ProtocolError::NotAProtocolSimplex(_))));
}

#[test]
fn lambda_is_a_subcomplex_without_the_inner_vertex() {
    for n in 0..=3usize {
        let chi = chromatic_standard(n).unwrap();
        for p in 0..=n as u8 {
            let lam = chromatic_lambda(n, p).unwrap();
            assert!(lam.is_subcomplex_of(&chi));
            let inner = Vertex::new(p, ProcSet::full(n));
            assert!(!lam.vertices().contains(&inner));
            if n > 0 {
                assert_eq!(lam.euler_characteristic().unwrap(), 1);
            }
        }
    }
}

#[test]
fn snapshot_part_contains_chromatic() {
    let wr = build_wr(2, 0).unwrap();
    let snap = snapshot_subcomplex(&wr);
    assert!(chromatic_standard(2).unwrap().is_subcomplex_of(&snap));
    assert!(snap.is_subcomplex_of(&wr.complex));
}

#[test]
fn iterated_counts() {
    let mut tower = Tower::new(1);
    for k in 0..=3usize {
        let c = chromatic_iterated(1, k, &mut tower).unwrap();
        assert_eq!(c.maximal_count(), 3usize.pow(k as u32));
    }
    let mut tower = Tower::new(2);
    assert_eq!(chromatic_iterated(2, 2, &mut tower).unwrap().maximal_count(), 169);

    let one = build_iterated(2, 1).unwrap();
    assert_eq!(one.complex.maximal_count(), 25);
    assert_eq!(one.tower.lower(&one.complex).unwrap(), build_wr(2, 0).unwrap().complex);
    assert_eq!(one.lower, one.tower.base_complex());

    let two = build_iterated(1, 2).unwrap();
    assert_eq!(two.complex.maximal_count(), 9);
    assert_eq!(two.complex.euler_characteristic().unwrap(), 1);
    for (node, carrier) in two.carrier() {
        assert!(two.lower.contains(&carrier), "{node:?}");
    }
}

#[test]
fn base_and_void() {
    assert_eq!(standard_simplex(2).maximal_count(), 1);
    assert!(Complex::<Vertex>::void(2).is_void());
    assert!(matches!(build_wr(2, 3), Err(ProtocolError::InvalidLevel { .. })));
    assert!(matches!(build_wr(4, 0), Err(ProtocolError::DimensionTooLarge(_))));
}
