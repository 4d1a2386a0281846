//! Compiled step circuits against the structured walk: matrix equivalence
//! at small sizes, trajectory agreement where matrices get large, format
//! round trips, and pinned gate-count regressions.

use qwalk_core::analysis::default_marked;
use qwalk_core::compiler::{build_step_circuit, lower};
use qwalk_core::format::{parse, serialize};
use qwalk_core::graphs::{FamilySpec, NodeId};
use qwalk_core::verify::{verify_step_circuit, verify_trajectory};

fn marked_nodes(spec: &FamilySpec) -> Vec<NodeId> {
    let n = spec.node_count();
    let mut picks = vec![0, n / 3, n - 1];
    picks.dedup();
    picks.into_iter().map(NodeId).collect()
}

#[test]
fn step_circuit_matches_structured_walk() {
    // full-matrix check for every compilable spec small enough to
    // reconstruct (≤ 10 qubits)
    let specs = [
        FamilySpec::Hypercube { n: 2 },
        FamilySpec::Hypercube { n: 4 },
        FamilySpec::CompleteSelfLoop { n: 1 },
        FamilySpec::CompleteSelfLoop { n: 2 },
        FamilySpec::CompleteSelfLoop { n: 3 },
        FamilySpec::TwistedToroid { n: 1, m: 1 },
        FamilySpec::TwistedToroid { n: 2, m: 2 },
    ];
    for spec in specs {
        for marked in marked_nodes(&spec) {
            let lowered = lower(&build_step_circuit(&spec, marked).unwrap()).unwrap();
            let report = verify_step_circuit(&spec, marked, &lowered, 14).unwrap();
            assert!(
                report.max_deviation <= 1e-10,
                "{spec:?} marked {marked:?}: deviation {}",
                report.max_deviation
            );
            assert!(
                report.restoration_deviation <= 1e-10,
                "{spec:?} marked {marked:?}: ancilla escape {}",
                report.restoration_deviation
            );
        }
    }
}

#[test]
fn bigger_specs_agree_along_trajectories() {
    // beyond the unitary-reconstruction budget, check 25 steps of the
    // lowered circuit against the structured trajectory
    let specs = [
        FamilySpec::CompleteSelfLoop { n: 4 },
        FamilySpec::CompleteSelfLoop { n: 5 },
        FamilySpec::TwistedToroid { n: 2, m: 3 },
        FamilySpec::TwistedToroid { n: 3, m: 2 },
    ];
    for spec in specs {
        let marked = default_marked(&spec);
        let lowered = lower(&build_step_circuit(&spec, marked).unwrap()).unwrap();
        let report = verify_trajectory(&spec, marked, &lowered, 25).unwrap();
        assert!(report.max_amplitude_deviation <= 1e-8, "{spec:?}");
        assert!(report.max_probability_deviation <= 1e-10, "{spec:?}");
        assert!(report.max_leak <= 1e-10, "{spec:?}");
    }
}

#[test]
fn lowered_two_qubit_counts_regression() {
    // counts pinned from the chosen decompositions
    let cases: [(FamilySpec, usize); 9] = [
        (FamilySpec::Hypercube { n: 2 }, 19),
        (FamilySpec::Hypercube { n: 4 }, 74),
        (FamilySpec::Hypercube { n: 8 }, 204),
        (FamilySpec::Hypercube { n: 16 }, 502),
        (FamilySpec::CompleteSelfLoop { n: 2 }, 32),
        (FamilySpec::CompleteSelfLoop { n: 8 }, 182),
        (FamilySpec::TwistedToroid { n: 2, m: 2 }, 298),
        (FamilySpec::TwistedToroid { n: 4, m: 4 }, 682),
        (FamilySpec::TwistedToroid { n: 6, m: 6 }, 1258),
    ];
    for (spec, want) in cases {
        let lowered = lower(&build_step_circuit(&spec, default_marked(&spec)).unwrap()).unwrap();
        assert_eq!(
            lowered.count_two_qubit_gates().unwrap(),
            want,
            "{spec:?}"
        );
    }
}

#[test]
fn counts_do_not_depend_on_marked_node() {
    let spec = FamilySpec::Hypercube { n: 4 };
    let counts: Vec<usize> = marked_nodes(&spec)
        .into_iter()
        .map(|marked| {
            lower(&build_step_circuit(&spec, marked).unwrap())
                .unwrap()
                .count_two_qubit_gates()
                .unwrap()
        })
        .collect();
    assert!(counts.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn lowered_step_circuit_round_trips_as_text() {
    let spec = FamilySpec::TwistedToroid { n: 2, m: 2 };
    let lowered = lower(&build_step_circuit(&spec, NodeId(5)).unwrap()).unwrap();
    let text = serialize(&lowered);
    let back = parse(&text).unwrap();
    assert_eq!(back, lowered);
    assert_eq!(serialize(&back), text);
    assert_eq!(
        back.count_two_qubit_gates().unwrap(),
        lowered.count_two_qubit_gates().unwrap()
    );
}
