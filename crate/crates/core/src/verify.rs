//! Equivalence checks between compiled step circuits and the structured
//! walk simulator.

use ndarray::Array2;
use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gatesim::{embed_walk_state, extract_walk_state, run};
use crate::graphs::{FamilySpec, NodeId, SubnodeId};
use crate::walk::{SearchConfig, WalkState};

/// Outcome of a matrix-level comparison (up to one global phase).
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceReport {
    /// Max |U_circuit − φ·U_structured| over the embedded block.
    pub max_deviation: f64,
    /// Max probability leaving the ancilla-|0⟩ embedded subspace across
    /// embedded basis columns.
    pub restoration_deviation: f64,
    /// The aligned global phase φ.
    pub global_phase: Complex64,
}

/// Outcome of a stepwise gate-level trajectory comparison.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryReport {
    pub steps: usize,
    /// Max per-step amplitude deviation after per-step phase alignment.
    pub max_amplitude_deviation: f64,
    /// Max per-step difference in marked-node probability.
    pub max_probability_deviation: f64,
    /// Max per-step probability outside the embedded subspace.
    pub max_leak: f64,
}

/// The structured step operator as a dense matrix, built by stepping every
/// basis state (real entries: Grover blocks and a permutation).
pub fn structured_step_matrix(spec: &FamilySpec, marked: NodeId) -> Result<Array2<f64>> {
    let (n, d) = (spec.node_count(), spec.degree());
    let dim = n * d;
    let cfg = SearchConfig::marked(marked);
    let mut m = Array2::zeros((dim, dim));
    for col in 0..dim {
        let mut state = WalkState::basis(*spec, NodeId(col / d), SubnodeId(col % d))?;
        state.step(&cfg);
        for (row, amp) in state.amps().iter().enumerate() {
            m[[row, col]] = amp.re;
        }
    }
    Ok(m)
}

/// Compares the unitary of a lowered step circuit, restricted to the
/// ancilla-|0⟩ embedded block, against the structured step operator, up to
/// one global phase.
pub fn verify_step_circuit(
    spec: &FamilySpec,
    marked: NodeId,
    lowered: &Circuit,
    unitary_cap: usize,
) -> Result<EquivalenceReport> {
    let layout = lowered.layout().clone();
    let (n, d) = (spec.node_count(), spec.degree());
    let dim = n * d;
    let u = lowered.to_unitary_with_cap(unitary_cap)?;
    let m = structured_step_matrix(spec, marked)?;

    // embedded basis index per walk index
    let sub_w = layout
        .register("subnode")
        .ok_or(Error::LayoutMismatch)?
        .width;
    let anc_w = layout.register("ancilla").map_or(0, |r| r.width);
    let embed = |walk_idx: usize| -> usize {
        let (v, a) = (walk_idx / d, walk_idx % d);
        ((v << sub_w) | a) << anc_w
    };

    // phase reference: the largest-magnitude structured entry
    let (mut best, mut best_val) = ((0, 0), 0.0f64);
    for j in 0..dim {
        for i in 0..dim {
            if m[[i, j]].abs() > best_val {
                best_val = m[[i, j]].abs();
                best = (i, j);
            }
        }
    }
    let phase_raw = u[[embed(best.0), embed(best.1)]] / m[[best.0, best.1]];
    let norm = phase_raw.norm();
    let phase = if norm > 0.0 {
        phase_raw / norm
    } else {
        Complex64::new(1.0, 0.0)
    };

    let mut max_dev = 0.0f64;
    for j in 0..dim {
        for i in 0..dim {
            let dev = (u[[embed(i), embed(j)]] - phase * m[[i, j]]).norm();
            max_dev = max_dev.max(dev);
        }
    }

    // ancilla restoration / subspace preservation: column mass outside the
    // embedded block
    let full_dim = u.nrows();
    let mut max_escape = 0.0f64;
    let mut embedded_rows = vec![false; full_dim];
    for i in 0..dim {
        embedded_rows[embed(i)] = true;
    }
    for j in 0..dim {
        let col = embed(j);
        let escape: f64 = (0..full_dim)
            .filter(|&r| !embedded_rows[r])
            .map(|r| u[[r, col]].norm_sqr())
            .sum();
        max_escape = max_escape.max(escape);
    }

    Ok(EquivalenceReport {
        max_deviation: max_dev,
        restoration_deviation: max_escape,
        global_phase: phase,
    })
}

/// Runs `steps` lowered-circuit steps on the embedded uniform state and
/// compares each step against the structured trajectory.
pub fn verify_trajectory(
    spec: &FamilySpec,
    marked: NodeId,
    lowered: &Circuit,
    steps: usize,
) -> Result<TrajectoryReport> {
    let layout = lowered.layout().clone();
    let cfg = SearchConfig::marked(marked);
    let mut structured = WalkState::uniform(*spec)?;
    let mut gate_state = embed_walk_state(&structured, &layout)?;

    let mut report = TrajectoryReport {
        steps,
        max_amplitude_deviation: 0.0,
        max_probability_deviation: 0.0,
        max_leak: 0.0,
    };
    for _ in 0..steps {
        structured.step(&cfg);
        run(lowered, &mut gate_state)?;
        let (extracted, leak) = extract_walk_state(spec, &gate_state, &layout)?;
        report.max_leak = report.max_leak.max(leak);

        // align one global phase per step, referenced at the structured
        // state's largest amplitude
        let (mut ref_idx, mut ref_mag) = (0usize, 0.0f64);
        for (i, amp) in structured.amps().iter().enumerate() {
            if amp.norm() > ref_mag {
                ref_mag = amp.norm();
                ref_idx = i;
            }
        }
        let raw = extracted.amps()[ref_idx] / structured.amps()[ref_idx];
        let phase = if raw.norm() > 0.0 {
            raw / raw.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for (got, want) in extracted.amps().iter().zip(structured.amps()) {
            let dev = (got - phase * want).norm();
            report.max_amplitude_deviation = report.max_amplitude_deviation.max(dev);
        }
        let p_dev = (extracted.marked_probability(marked)
            - structured.marked_probability(marked))
        .abs();
        report.max_probability_deviation = report.max_probability_deviation.max(p_dev);
    }
    Ok(report)
}
