mod common;

use std::collections::BTreeSet;

use common::{naive_family, naive_round_profiles, partition_profiles};
use wrcollapse::executions::{
    enumerate_round_views, enumerate_view_family, wr_profiles, ExecutionError, IsExecution,
    Operation, ViewProfile, WrExecution,
};
use wrcollapse::procset::ProcSet;

fn running_example() -> WrExecution {
    use Operation::*;
    let r = |reader, target| Read { reader, target };
    WrExecution::from_ops(
        Some(2),
        vec![
            Write(0),
            r(0, 0),
            r(0, 1),
            Write(2),
            r(2, 0),
            r(2, 2),
            Write(1),
            r(0, 2),
            r(1, 0),
            r(1, 1),
            r(1, 2),
            r(2, 1),
        ],
    )
    .unwrap()
}

#[test]
fn running_example_views_and_winner() {
    let e = running_example();
    let p = e.view_profile();
    assert_eq!(p.get(0), Some(ProcSet::from([0, 2])));
    assert_eq!(p.get(1), Some(ProcSet::full(2)));
    assert_eq!(p.get(2), Some(ProcSet::from([0, 1, 2])));
    assert_eq!(e.winner(), Some(1));
    assert!(!e.is_snapshot_view(0).unwrap());
}

#[test]
fn round_profiles_match_brute_force_interleavings() {
    for n in 0..=2usize {
        for p in ProcSet::full(n).subsets().filter(|p| !p.is_empty()) {
            let fast: BTreeSet<ViewProfile> = wr_profiles(p).into_iter().collect();
            assert_eq!(fast, naive_round_profiles(p), "participants {p}");
        }
    }
}

#[test]
fn families_match_brute_force() {
    for n in 0..=2usize {
        for l in 0..=n {
            assert_eq!(enumerate_view_family(n, l).unwrap(), naive_family(n, l), "n={n} l={l}");
        }
    }
}

#[test]
fn family_counts() {
    let counts = |n: usize| -> Vec<usize> {
        (0..=n).map(|l| enumerate_view_family(n, l).unwrap().len()).collect()
    };
    assert_eq!(counts(1), vec![3, 3]);
    assert_eq!(counts(2), vec![25, 13, 13]);
    assert_eq!(counts(3), vec![543, 123, 75, 75]);
}

#[test]
fn families_are_nested() {
    for n in 1..=3usize {
        for l in 0..n {
            let hi = enumerate_view_family(n, l).unwrap();
            let lo = enumerate_view_family(n, l + 1).unwrap();
            assert!(lo.is_subset(&hi), "n={n} l={l}");
        }
    }
}

#[test]
fn last_family_is_immediate_snapshot() {
    for n in 0..=3usize {
        let fam = enumerate_view_family(n, n).unwrap();
        assert_eq!(fam, partition_profiles(n), "n={n}");
        assert!(fam.iter().all(ViewProfile::is_immediate_snapshot_profile));
    }
}

#[test]
fn someone_sees_everyone_in_one_round() {
    let full = ProcSet::full(2);
    for p in enumerate_view_family(2, 0).unwrap() {
        assert!(p.iter().any(|(_, v)| v == full), "{p}");
        let e = WrExecution::realize(2, full, &p).unwrap();
        let w = e.winner().unwrap();
        assert_eq!(e.view_profile().get(w), Some(full));
        assert_eq!(e.view_profile(), p);
    }
}

#[test]
fn equal_round_views_give_equal_profiles() {
    // Executions with the same view at every round share the final profile.
    let rounds = enumerate_round_views(2, 2).unwrap();
    let mut by_rounds = std::collections::HashMap::new();
    for r in &rounds {
        let mut fin = ViewProfile::new();
        for p in r {
            fin.extend(p);
        }
        if let Some(prev) = by_rounds.insert(r.clone(), fin.clone()) {
            assert_eq!(prev, fin);
        }
    }
}

#[test]
fn sequential_is_execution() {
    let e = IsExecution::new(
        2,
        vec![
            WrExecution::sequential(2, &[0, 1, 2]),
            WrExecution::sequential(2, &[0, 1]),
            WrExecution::solo(2, 0),
        ],
    )
    .unwrap();
    let fin = e.is_view();
    assert_eq!(fin.get(0), Some(ProcSet::from([0])));
    assert_eq!(fin.get(1), Some(ProcSet::from([0, 1])));
    assert_eq!(fin.get(2), Some(ProcSet::full(2)));
    let short = e.compress_last_round().unwrap();
    assert_eq!(short.len(), 2);
    assert_eq!(short.is_view(), fin);
}

#[test]
fn malformed_rounds_are_rejected() {
    let e = IsExecution::new(
        2,
        vec![WrExecution::sequential(2, &[0, 1, 2]), WrExecution::solo(2, 2)],
    );
    assert!(matches!(e, Err(ExecutionError::MalformedRound { round: 1, .. })));
    let bad = WrExecution::from_ops(Some(1), vec![Operation::Read { reader: 0, target: 0 }]);
    assert!(bad.is_err());
}

#[test]
fn relabeling_commutes_with_profiles() {
    let e = running_example();
    let map = [2, 0, 1];
    assert_eq!(e.relabel(&map).view_profile(), e.view_profile().relabel(&map));
}

#[test]
fn execution_json_round_trip() {
    let e = IsExecution::new(2, vec![running_example()]).unwrap();
    let text = serde_json::to_string(&e).unwrap();
    let back: IsExecution = serde_json::from_str(&text).unwrap();
    assert_eq!(back, e);
}
