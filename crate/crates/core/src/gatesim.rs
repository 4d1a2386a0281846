//! Gate-level state-vector simulator for lowered circuits, with the
//! embedding between the walk's (node, subnode) space and the qubit
//! registers of the compiled circuits.

use num_complex::Complex64;

use crate::circuit::{apply_gate, Circuit, Level, RegisterLayout};
use crate::error::{Error, Result};
use crate::graphs::FamilySpec;
use crate::walk::WalkState;

/// Dense state over `qubits` qubits (2^q amplitudes).
#[derive(Debug, Clone)]
pub struct QubitState {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl QubitState {
    /// |00…0⟩.
    pub fn zero(qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        QubitState { qubits, amps }
    }

    pub fn from_amps(qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << qubits {
            return Err(Error::InvalidArgument(format!(
                "state of {qubits} qubits needs {} amplitudes, got {}",
                1usize << qubits,
                amps.len()
            )));
        }
        Ok(QubitState { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Applies each gate of an elementary circuit in order.
pub fn run(circuit: &Circuit, state: &mut QubitState) -> Result<()> {
    if circuit.level() != Level::Elementary {
        return Err(Error::CompositeCircuit);
    }
    if circuit.qubit_count() != state.qubits {
        return Err(Error::InvalidArgument(format!(
            "circuit has {} qubits, state has {}",
            circuit.qubit_count(),
            state.qubits
        )));
    }
    for gate in circuit.gates() {
        apply_gate(&mut state.amps, state.qubits, gate);
    }
    Ok(())
}

/// Widths (node, subnode, ancilla) of a step layout, validated against the
/// spec's index spaces.
fn embedding_widths(spec: &FamilySpec, layout: &RegisterLayout) -> Result<(usize, usize, usize)> {
    let node_w = spec.node_bits();
    let sub = layout
        .register("subnode")
        .ok_or(Error::LayoutMismatch)?
        .width;
    if sub != spec.subnode_bits() {
        return Err(Error::LayoutMismatch);
    }
    let anc = layout.register("ancilla").map_or(0, |r| r.width);
    let data_w = match spec {
        FamilySpec::TwistedToroid { .. } => {
            let x = layout.register("xcoord").ok_or(Error::LayoutMismatch)?;
            let y = layout.register("ycoord").ok_or(Error::LayoutMismatch)?;
            x.width + y.width
        }
        _ => layout.register("node").ok_or(Error::LayoutMismatch)?.width,
    };
    if data_w != node_w || node_w + sub + anc != layout.total_qubits() {
        return Err(Error::LayoutMismatch);
    }
    Ok((node_w, sub, anc))
}

/// Basis index of walk state (v, a) in the circuit's qubit space: node bits,
/// then subnode bits, then ancilla zeros.
fn embedded_index(v: usize, a: usize, sub_w: usize, anc_w: usize) -> usize {
    ((v << sub_w) | a) << anc_w
}

/// Places each (node, subnode) amplitude at its register basis index;
/// unused subnode patterns and nonzero-ancilla states get amplitude 0.
pub fn embed_walk_state(walk: &WalkState, layout: &RegisterLayout) -> Result<QubitState> {
    let spec = walk.spec();
    let (_, sub_w, anc_w) = embedding_widths(&spec, layout)?;
    let mut state = QubitState::zero(layout.total_qubits());
    state.amps[0] = Complex64::new(0.0, 0.0);
    let d = spec.degree();
    for v in 0..spec.node_count() {
        for a in 0..d {
            state.amps[embedded_index(v, a, sub_w, anc_w)] = walk.amps()[v * d + a];
        }
    }
    Ok(state)
}

/// Inverts the embedding; the second component is the total probability
/// found outside the embedded subspace.
pub fn extract_walk_state(
    spec: &FamilySpec,
    state: &QubitState,
    layout: &RegisterLayout,
) -> Result<(WalkState, f64)> {
    let (_, sub_w, anc_w) = embedding_widths(spec, layout)?;
    if state.qubits != layout.total_qubits() {
        return Err(Error::LayoutMismatch);
    }
    let d = spec.degree();
    let mut amps = vec![Complex64::new(0.0, 0.0); spec.node_count() * d];
    let mut embedded_mass = 0.0;
    for v in 0..spec.node_count() {
        for a in 0..d {
            let amp = state.amps[embedded_index(v, a, sub_w, anc_w)];
            amps[v * d + a] = amp;
            embedded_mass += amp.norm_sqr();
        }
    }
    let total: f64 = state.amps.iter().map(|z| z.norm_sqr()).sum();
    let leak = (total - embedded_mass).max(0.0);
    Ok((WalkState::from_amps(*spec, amps)?, leak))
}
