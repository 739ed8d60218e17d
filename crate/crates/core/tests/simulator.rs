mod common;

use std::collections::BTreeSet;

use common::{partition_profiles, simplex_of};
use wrcollapse::executions::{enumerate_view_family, ViewProfile};
use wrcollapse::procset::ProcSet;
use wrcollapse::protocol::chromatic_standard;
use wrcollapse::simulator::{fuzz, run, run_exhaustive, RunDescriptor, Scheduler, SimulatorError};

fn self_including_comparable_immediate(p: &ViewProfile) -> bool {
    let views: Vec<(u8, ProcSet)> = p.iter().collect();
    views.iter().all(|&(i, vi)| {
        vi.contains(i)
            && views.iter().all(|&(j, vj)| {
                (vi.is_subset(vj) || vj.is_subset(vi)) && (!vi.contains(j) || vj.is_subset(vi))
            })
    })
}

#[test]
fn sequential_schedule() {
    let r = run(2, &Scheduler::sequential(2, &[0, 1, 2])).unwrap();
    assert_eq!(r.profile.get(0), Some(ProcSet::from([0])));
    assert_eq!(r.profile.get(1), Some(ProcSet::from([0, 1])));
    assert_eq!(r.profile.get(2), Some(ProcSet::full(2)));
    assert_eq!(r.execution.is_view(), r.profile);
    assert_eq!(r.round_sizes[&0], vec![1, 1, 1]);
}

#[test]
fn lock_step_schedule() {
    let r = run(2, &Scheduler::lock_step(2)).unwrap();
    assert!(r.profile.iter().all(|(_, v)| v == ProcSet::full(2)));
    assert_eq!(r.execution.len(), 1);
}

#[test]
fn exhaustive_matches_the_chromatic_subdivision() {
    assert_eq!(run_exhaustive(0).unwrap().len(), 1);
    assert_eq!(run_exhaustive(1).unwrap(), enumerate_view_family(1, 0).unwrap());
    let got = run_exhaustive(2).unwrap();
    assert_eq!(got, partition_profiles(2));
    let chi = chromatic_standard(2).unwrap();
    let facets: BTreeSet<_> = got.iter().map(simplex_of).collect();
    assert_eq!(&facets, chi.maximal_set());
    assert!(got.iter().all(self_including_comparable_immediate));
    assert!(matches!(run_exhaustive(3), Err(SimulatorError::DimensionTooLarge(_))));
}

#[test]
fn seeded_runs_are_sound_and_deterministic() {
    for n in 0..=3usize {
        let fam = enumerate_view_family(n, n).unwrap();
        for seed in 0..50u64 {
            let s = Scheduler::SeededRandom { seed };
            let a = run(n, &s).unwrap();
            assert!(fam.contains(&a.profile), "n={n} seed={seed}");
            assert!(self_including_comparable_immediate(&a.profile));
            assert_eq!(a, run(n, &s).unwrap());
            for (i, sizes) in &a.round_sizes {
                let k = sizes.len() - 1;
                assert_eq!(a.profile.get(*i).unwrap().len(), n + 1 - k);
            }
        }
    }
}

#[test]
fn fuzz_reports() {
    let big = fuzz(2, 10_000, 42).unwrap();
    assert!(big.violations.is_empty());
    assert!(big.full_coverage());
    assert_eq!(big.total_maximal, 13);
    let small = fuzz(1, 100, 7).unwrap();
    assert_eq!(small.distinct_maximal, 3);
    let one = fuzz(2, 1, 3).unwrap();
    assert!(one.violations.is_empty());
    assert_eq!(one.distinct_maximal, 1);
}

#[test]
fn bad_scripts_are_rejected() {
    let short = Scheduler::Scripted { script: vec![0, 1] };
    assert!(matches!(run(1, &short), Err(SimulatorError::IncompleteScript { .. })));
    let unknown = Scheduler::Scripted { script: vec![5] };
    assert!(matches!(run(1, &unknown), Err(SimulatorError::UnknownProcess { .. })));
    let Scheduler::Scripted { mut script } = Scheduler::lock_step(1) else {
        unreachable!()
    };
    script.push(0);
    assert!(matches!(
        run(1, &Scheduler::Scripted { script }),
        Err(SimulatorError::NotEnabled { .. })
    ));
}

#[test]
fn descriptors_parse() {
    let d: RunDescriptor = serde_json::from_str(r#"{"n":2,"scheduler":{"kind":"seeded-random","seed":9}}"#).unwrap();
    assert_eq!(d.scheduler, Scheduler::SeededRandom { seed: 9 });
    let d: RunDescriptor = serde_json::from_str(r#"{"n":1,"scheduler":{"kind":"scripted","script":[0,0,0,0,0,0,1,1,1]}}"#).unwrap();
    let r = run(d.n, &d.scheduler).unwrap();
    assert_eq!(r.profile.get(1), Some(ProcSet::full(1)));
    assert_eq!(r.profile.get(0), Some(ProcSet::from([0])));
}
