//! Builds explicit step circuits for each family and lowers them to
//! elementary gates.
//!
//! The step circuit realizes U = S·C with one marked node. The coin stage
//! computes a match bit for the marked-node pattern into an ancilla,
//! applies the Grover operator to the subnode register anti-controlled on
//! that bit, applies the π phase on the matched block, and uncomputes. The
//! shift stage is family-specific: pattern-controlled node-bit flips
//! (hypercube), register swaps (complete graph), or pattern-controlled
//! increment/decrement ladders with twisted-boundary corrections (toroid).
//!
//! Lowering rewrites negative controls by X conjugation and reduces
//! multi-controlled gates through a compute/uncompute ancilla chain.
//! Chain links use the 3-CX relative-phase Toffoli form (the deposited
//! basis-state phases cancel between compute and uncompute); the gate that
//! finally writes a data qubit is a full Toffoli in the standard 6-CX
//! decomposition.

use std::f64::consts::PI;

use crate::circuit::{Circuit, Control, Gate, GateKind, Level, Polarity, RegisterLayout};
use crate::error::{Error, Result};
use crate::graphs::{FamilySpec, NodeId};

/// Layout and ancilla bookkeeping for one compilable spec.
#[derive(Debug, Clone)]
pub struct StepCircuitPlan {
    pub spec: FamilySpec,
    pub marked: NodeId,
    pub layout: RegisterLayout,
    /// Width of the ancilla register (match bit plus chain qubits).
    pub ancilla_budget: usize,
}

impl StepCircuitPlan {
    pub fn new(spec: FamilySpec, marked: NodeId) -> Result<Self> {
        if marked.0 >= spec.node_count() {
            return Err(Error::InvalidArgument(format!(
                "marked node {} out of range for {} nodes",
                marked.0,
                spec.node_count()
            )));
        }
        let layout = step_layout(&spec)?;
        let ancilla_budget = layout.register("ancilla").map_or(0, |r| r.width);
        Ok(StepCircuitPlan {
            spec,
            marked,
            layout,
            ancilla_budget,
        })
    }
}

/// Checks the power-of-two constraints for circuit compilation.
///
/// Hypercube circuits need the subnode register to be exactly log₂(n)
/// qubits with every basis value used, so n must be a power of two (and at
/// least 2). The other families are compilable at every valid size.
pub fn compilable(spec: &FamilySpec) -> Result<()> {
    spec.validate()?;
    if let FamilySpec::Hypercube { n } = *spec {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotCompilable(format!(
                "hypercube degree n = {n} must be a power of two (n >= 2)"
            )));
        }
    }
    Ok(())
}

/// Register layout for a family's step circuit, ancilla register included.
pub fn step_layout(spec: &FamilySpec) -> Result<RegisterLayout> {
    compilable(spec)?;
    let chain = |controls: usize| controls.saturating_sub(2);
    Ok(match *spec {
        FamilySpec::Hypercube { n } => {
            let k = spec.subnode_bits();
            // widest multi-control: the n-bit marked-node match
            let ancilla = 1 + chain(n).max(chain(k));
            RegisterLayout::new(&[("node", n), ("subnode", k), ("ancilla", ancilla)])
        }
        FamilySpec::CompleteSelfLoop { n } => {
            let ancilla = 1 + chain(n);
            RegisterLayout::new(&[("node", n), ("subnode", n), ("ancilla", ancilla)])
        }
        FamilySpec::TwistedToroid { n, m } => {
            // match on n+m node bits; twist matches on 2+n or 2+m bits
            let ancilla = 1 + chain(n + m).max(chain(n + 2)).max(chain(m + 2));
            RegisterLayout::new(&[
                ("xcoord", n),
                ("ycoord", m),
                ("subnode", 2),
                ("ancilla", ancilla),
            ])
        }
    })
}

/// Gate list of the Grover operator G = 2/d·J − I on the given qubits,
/// as −(H⊗..·(X⊗..·C^{k−1}Z·X⊗..)·H⊗..) with the −1 kept as an explicit
/// global phase.
fn grover_gates(qubits: &[usize]) -> Vec<Gate> {
    assert!(!qubits.is_empty());
    let mut gates = Vec::with_capacity(4 * qubits.len() + 2);
    for &q in qubits {
        gates.push(Gate::h(q));
    }
    for &q in qubits {
        gates.push(Gate::x(q));
    }
    let (&last, rest) = qubits.split_last().unwrap();
    gates.push(Gate::z(last).with_controls(rest.iter().map(|&q| Control::pos(q)).collect()));
    for &q in qubits {
        gates.push(Gate::x(q));
    }
    for &q in qubits {
        gates.push(Gate::h(q));
    }
    gates.push(Gate::global_phase(PI));
    gates
}

/// Elementary circuit for the Grover operator on d = 2^k dimensions.
///
/// For k ≤ 3 the circuit is exactly on k qubits; for k ≥ 4 the reflection
/// core needs a chain and the layout carries k−3 ancillas (restored to 0).
pub fn build_grover(k: usize) -> Circuit {
    assert!(k >= 1, "Grover operator needs at least one qubit");
    let layout = if k >= 4 {
        RegisterLayout::new(&[("subnode", k), ("ancilla", k - 3)])
    } else {
        RegisterLayout::new(&[("subnode", k)])
    };
    let qubits: Vec<usize> = (0..k).collect();
    let composite =
        Circuit::from_gates(layout, grover_gates(&qubits), Level::Composite).expect("valid gates");
    lower(&composite).expect("grover lowering is ancilla-sufficient")
}

/// Ladder mapping |x⟩ → |x+1 mod 2^k⟩ on a most-significant-first register:
/// a C^{k−1}X ... C¹X ... X cascade.
fn increment_gates(reg: &[usize]) -> Vec<Gate> {
    (0..reg.len())
        .map(|j| {
            Gate::x(reg[j])
                .with_controls(reg[j + 1..].iter().map(|&q| Control::pos(q)).collect())
        })
        .collect()
}

fn decrement_gates(reg: &[usize]) -> Vec<Gate> {
    let mut gates = increment_gates(reg);
    gates.reverse();
    gates
}

/// Composite cyclic-increment circuit on k qubits.
pub fn build_increment(k: usize) -> Circuit {
    assert!(k >= 1);
    let layout = RegisterLayout::single(k);
    let qubits: Vec<usize> = (0..k).collect();
    Circuit::from_gates(layout, increment_gates(&qubits), Level::Composite).expect("valid gates")
}

/// Composite cyclic-decrement circuit on k qubits; the inverse ladder.
pub fn build_decrement(k: usize) -> Circuit {
    assert!(k >= 1);
    let layout = RegisterLayout::single(k);
    let qubits: Vec<usize> = (0..k).collect();
    Circuit::from_gates(layout, decrement_gates(&qubits), Level::Composite).expect("valid gates")
}

/// Elementary multi-controlled X on a `num_qubits`-wide register, using the
/// given ancilla qubits for the chain. Needs max(0, controls − 2) ancillas;
/// all ancillas are returned to their initial state.
pub fn build_mcx(
    num_qubits: usize,
    controls: &[Control],
    target: usize,
    ancillas: &[usize],
) -> Result<Circuit> {
    let gate = Gate::mcx(controls.to_vec(), target);
    check_ancillas(&gate, ancillas, num_qubits)?;
    let mut gates = Vec::new();
    lower_gate(&gate, ancillas, &mut gates)?;
    Circuit::from_gates(RegisterLayout::single(num_qubits), gates, Level::Elementary)
}

/// Elementary circuit applying the scalar −1 exactly on basis states
/// matching the pattern: a polarity-aware multi-controlled Z.
pub fn build_controlled_phase_pi(
    num_qubits: usize,
    pattern: &[Control],
    ancillas: &[usize],
) -> Result<Circuit> {
    if pattern.is_empty() {
        return Err(Error::InvalidArgument(
            "controlled-pi needs a nonempty pattern".into(),
        ));
    }
    let (&anchor, rest) = pattern.split_last().unwrap();
    let core = Gate::z(anchor.qubit).with_controls(rest.to_vec());
    check_ancillas(&core, ancillas, num_qubits)?;
    let mut gates = Vec::new();
    // a negative anchor is handled by X conjugation of the Z target
    if anchor.polarity == Polarity::Negative {
        gates.push(Gate::x(anchor.qubit));
    }
    lower_gate(&core, ancillas, &mut gates)?;
    if anchor.polarity == Polarity::Negative {
        gates.push(Gate::x(anchor.qubit));
    }
    Circuit::from_gates(RegisterLayout::single(num_qubits), gates, Level::Elementary)
}

/// Applies `body` exactly when the pattern matches: the pattern conjunction
/// is computed into `ancillas[0]` with buildMCX machinery, every body gate
/// (global phases included) is single-controlled on that bit, and the bit
/// is uncomputed. Composite output; body must not touch the pattern qubits
/// or the match ancilla.
pub fn build_controlled(body: &Circuit, pattern: &[Control], ancillas: &[usize]) -> Result<Circuit> {
    if pattern.is_empty() {
        return Err(Error::InvalidArgument(
            "controlled application needs a nonempty pattern".into(),
        ));
    }
    let Some((&match_bit, _)) = ancillas.split_first() else {
        return Err(Error::InsufficientAncilla {
            needed: 1,
            available: 0,
        });
    };
    let mut reserved: Vec<usize> = pattern.iter().map(|c| c.qubit).collect();
    reserved.push(match_bit);
    for gate in body.gates() {
        if gate.qubits().any(|q| reserved.contains(&q)) {
            return Err(Error::InvalidArgument(
                "body acts on pattern or match-ancilla qubits".into(),
            ));
        }
    }
    let mut gates = Vec::with_capacity(body.gate_count() + 2);
    gates.push(Gate::mcx(pattern.to_vec(), match_bit));
    for gate in body.gates() {
        gates.push(gate.clone().controlled(Control::pos(match_bit)));
    }
    gates.push(Gate::mcx(pattern.to_vec(), match_bit));
    Circuit::from_gates(body.layout().clone(), gates, Level::Composite)
}

fn check_ancillas(gate: &Gate, ancillas: &[usize], num_qubits: usize) -> Result<()> {
    let mut seen = Vec::with_capacity(ancillas.len());
    for &a in ancillas {
        if a >= num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: a,
                total: num_qubits,
            });
        }
        if gate.qubits().any(|q| q == a) || seen.contains(&a) {
            return Err(Error::OverlappingQubits(a));
        }
        seen.push(a);
    }
    Ok(())
}

/// Node-register qubits in bit-string order (toroid: x bits then y bits).
pub(crate) fn node_register_qubits(spec: &FamilySpec, layout: &RegisterLayout) -> Vec<usize> {
    match spec {
        FamilySpec::TwistedToroid { .. } => {
            let mut qs = layout.qubits("xcoord");
            qs.extend(layout.qubits("ycoord"));
            qs
        }
        _ => layout.qubits("node"),
    }
}

/// Polarity pattern selecting the marked node on the node register.
fn marked_pattern(spec: &FamilySpec, marked: NodeId, layout: &RegisterLayout) -> Vec<Control> {
    let bits = spec.encode_node(marked);
    node_register_qubits(spec, layout)
        .into_iter()
        .zip(bits)
        .map(|(q, b)| {
            if b {
                Control::pos(q)
            } else {
                Control::neg(q)
            }
        })
        .collect()
}

/// Polarity pattern selecting subnode value `a` on the subnode register.
fn subnode_pattern(layout: &RegisterLayout, a: usize) -> Vec<Control> {
    let qubits = layout.qubits("subnode");
    let k = qubits.len();
    qubits
        .into_iter()
        .enumerate()
        .map(|(j, q)| {
            if (a >> (k - 1 - j)) & 1 == 1 {
                Control::pos(q)
            } else {
                Control::neg(q)
            }
        })
        .collect()
}

/// Composite circuit implementing one search step U = S·C with the
/// marked-node coin perturbation.
pub fn build_step_circuit(spec: &FamilySpec, marked: NodeId) -> Result<Circuit> {
    let plan = StepCircuitPlan::new(*spec, marked)?;
    let layout = plan.layout;
    let match_bit = layout.qubit("ancilla", 0);
    let subnode = layout.qubits("subnode");
    let mut gates: Vec<Gate> = Vec::new();

    // Coin: C = G ⊗ (I − |x⟩⟨x|) − I·|x⟩⟨x|, realized as a match bit with
    // the Grover body anti-controlled on it and a Z supplying the π.
    let pattern = marked_pattern(spec, marked, &layout);
    gates.push(Gate::mcx(pattern.clone(), match_bit));
    for gate in grover_gates(&subnode) {
        gates.push(gate.controlled(Control::neg(match_bit)));
    }
    gates.push(Gate::z(match_bit));
    gates.push(Gate::mcx(pattern, match_bit));

    // Shift.
    match *spec {
        FamilySpec::Hypercube { n } => {
            // Subnode value a flips node bit a (qubit n-1-a of the register).
            for a in 0..n {
                gates.push(
                    Gate::x(layout.qubit("node", n - 1 - a))
                        .with_controls(subnode_pattern(&layout, a)),
                );
            }
        }
        FamilySpec::CompleteSelfLoop { n } => {
            // |v, a⟩ → |a, v⟩: swap node and subnode registers bitwise.
            for i in 0..n {
                let (a, b) = (layout.qubit("node", i), layout.qubit("subnode", i));
                gates.push(Gate::cx(a, b));
                gates.push(Gate::cx(b, a));
                gates.push(Gate::cx(a, b));
            }
        }
        FamilySpec::TwistedToroid { .. } => {
            emit_toroid_shift(&layout, match_bit, &mut gates);
        }
    }

    Circuit::from_gates(layout, gates, Level::Composite)
}

/// The four coin-conditioned moves of the twisted toroid, each followed by
/// its boundary-twist correction, then the flip-flop sign flip.
fn emit_toroid_shift(layout: &RegisterLayout, match_bit: usize, gates: &mut Vec<Gate>) {
    let x = layout.qubits("xcoord");
    let y = layout.qubits("ycoord");

    let mut block = |coin: usize, body: Vec<Gate>, wrapped: Option<(&[usize], Polarity)>| {
        let mut pattern = subnode_pattern(layout, coin);
        if let Some((reg, polarity)) = wrapped {
            // after the move, the register equals all-zeros (wrapped
            // increment) or all-ones (wrapped decrement)
            pattern.extend(reg.iter().map(|&q| Control { qubit: q, polarity }));
        }
        gates.push(Gate::mcx(pattern.clone(), match_bit));
        for gate in body {
            gates.push(gate.controlled(Control::pos(match_bit)));
        }
        gates.push(Gate::mcx(pattern, match_bit));
    };

    // +x: increment x; on wrap (x == 0), decrement y.
    block(0, increment_gates(&x), None);
    block(0, decrement_gates(&y), Some((&x, Polarity::Negative)));
    // -x: decrement x; on wrap (x == all-ones), increment y.
    block(1, decrement_gates(&x), None);
    block(1, increment_gates(&y), Some((&x, Polarity::Positive)));
    // +y: increment y; on wrap (y == 0), decrement x.
    block(2, increment_gates(&y), None);
    block(2, decrement_gates(&x), Some((&y, Polarity::Negative)));
    // -y: decrement y; on wrap (y == all-ones), increment x.
    block(3, decrement_gates(&y), None);
    block(3, increment_gates(&x), Some((&y, Polarity::Positive)));

    // Flip-flop relabeling: +x ↔ −x, +y ↔ −y (sign is the subnode LSB).
    gates.push(Gate::x(layout.qubit("subnode", 1)));
}

/// Lowers a composite circuit to elementary gates, drawing chain ancillas
/// from the layout's `ancilla` register. The unitary is preserved on the
/// non-ancilla subspace and every ancilla is restored.
pub fn lower(circuit: &Circuit) -> Result<Circuit> {
    let pool = match circuit.layout().register("ancilla") {
        Some(_) => circuit.layout().qubits("ancilla"),
        None => Vec::new(),
    };
    let mut gates = Vec::new();
    for gate in circuit.gates() {
        lower_gate(gate, &pool, &mut gates)?;
    }
    Circuit::from_gates(circuit.layout().clone(), gates, Level::Elementary)
}

/// Lowers one gate, using `pool` (minus the gate's own qubits) for chains.
fn lower_gate(gate: &Gate, pool: &[usize], out: &mut Vec<Gate>) -> Result<()> {
    if gate.is_elementary() {
        out.push(gate.clone());
        return Ok(());
    }
    let used: Vec<usize> = gate.qubits().collect();
    let free: Vec<usize> = pool
        .iter()
        .copied()
        .filter(|q| !used.contains(q))
        .collect();
    // rewrite negative controls by X conjugation
    let negs: Vec<usize> = gate
        .controls
        .iter()
        .filter(|c| c.polarity == Polarity::Negative)
        .map(|c| c.qubit)
        .collect();
    for &q in &negs {
        out.push(Gate::x(q));
    }
    let controls: Vec<usize> = gate.controls.iter().map(|c| c.qubit).collect();
    lower_positive(gate.kind, &controls, gate.target, &free, out)?;
    for &q in &negs {
        out.push(Gate::x(q));
    }
    Ok(())
}

/// Lowers a gate whose controls are all positive.
fn lower_positive(
    kind: GateKind,
    controls: &[usize],
    target: Option<usize>,
    free: &[usize],
    out: &mut Vec<Gate>,
) -> Result<()> {
    let k = controls.len();
    match kind {
        GateKind::GlobalPhase(theta) => {
            if k == 0 {
                out.push(Gate::global_phase(theta));
            } else {
                // a controlled scalar is a phase on one control
                lower_positive(
                    GateKind::Phase(theta),
                    &controls[1..],
                    Some(controls[0]),
                    free,
                    out,
                )?;
            }
        }
        GateKind::Phase(theta) => {
            let t = target.expect("phase has a target");
            match k {
                0 => out.push(Gate::phase(theta, t)),
                1 => out.push(Gate::cphase(theta, controls[0], t)),
                2 => emit_ccphase(theta, controls[0], controls[1], t, out),
                _ => {
                    let (chain, and_bit) = and_chain(&controls[..k - 1], free)?;
                    out.extend(chain.iter().cloned());
                    emit_ccphase(theta, controls[k - 1], and_bit, t, out);
                    out.extend(chain.iter().rev().map(Gate::inverse));
                }
            }
        }
        GateKind::X => {
            let t = target.expect("x has a target");
            match k {
                0 => out.push(Gate::x(t)),
                1 => out.push(Gate::cx(controls[0], t)),
                2 => emit_toffoli(controls[0], controls[1], t, out),
                _ => {
                    let (chain, and_bit) = and_chain(&controls[..k - 1], free)?;
                    out.extend(chain.iter().cloned());
                    emit_toffoli(controls[k - 1], and_bit, t, out);
                    out.extend(chain.iter().rev().map(Gate::inverse));
                }
            }
        }
        GateKind::Z => {
            let t = target.expect("z has a target");
            match k {
                0 => out.push(Gate::z(t)),
                1 => out.push(Gate::cz(controls[0], t)),
                _ => {
                    out.push(Gate::h(t));
                    lower_positive(GateKind::X, controls, target, free, out)?;
                    out.push(Gate::h(t));
                }
            }
        }
        GateKind::H => {
            let t = target.expect("h has a target");
            if k == 0 {
                out.push(Gate::h(t));
            } else {
                // RY(π/4)·Z·RY(−π/4) = H, so conjugate a controlled Z
                emit_ry(-PI / 4.0, t, out);
                lower_positive(GateKind::Z, controls, target, free, out)?;
                emit_ry(PI / 4.0, t, out);
            }
        }
    }
    Ok(())
}

/// Relative-phase Toffoli chain computing the conjunction of `controls`
/// into an ancilla; returns the gate list and the qubit holding the AND.
fn and_chain(controls: &[usize], free: &[usize]) -> Result<(Vec<Gate>, usize)> {
    debug_assert!(controls.len() >= 2);
    let need = controls.len() - 1;
    if free.len() < need {
        return Err(Error::InsufficientAncilla {
            needed: need,
            available: free.len(),
        });
    }
    let mut gates = Vec::new();
    emit_rtoffoli(controls[0], controls[1], free[0], &mut gates);
    for i in 2..controls.len() {
        emit_rtoffoli(controls[i], free[i - 2], free[i - 1], &mut gates);
    }
    Ok((gates, free[need - 1]))
}

/// RY(θ) as Phase/H gates: S·H·RZ(θ)·H·S† with the RZ global phase kept.
fn emit_ry(theta: f64, q: usize, out: &mut Vec<Gate>) {
    out.push(Gate::phase(-PI / 2.0, q));
    out.push(Gate::h(q));
    out.push(Gate::global_phase(-theta / 2.0));
    out.push(Gate::phase(theta, q));
    out.push(Gate::h(q));
    out.push(Gate::phase(PI / 2.0, q));
}

/// Margolus relative-phase Toffoli: 3 CX. Exact X-on-conjunction value map
/// with a Z phase on the (c1=1, c2=0) branch; valid only in
/// compute/uncompute pairs.
fn emit_rtoffoli(c1: usize, c2: usize, t: usize, out: &mut Vec<Gate>) {
    emit_ry(PI / 4.0, t, out);
    out.push(Gate::cx(c2, t));
    emit_ry(PI / 4.0, t, out);
    out.push(Gate::cx(c1, t));
    emit_ry(-PI / 4.0, t, out);
    out.push(Gate::cx(c2, t));
    emit_ry(-PI / 4.0, t, out);
}

/// Standard 6-CX Toffoli decomposition.
fn emit_toffoli(c1: usize, c2: usize, t: usize, out: &mut Vec<Gate>) {
    let tq = PI / 4.0;
    out.push(Gate::h(t));
    out.push(Gate::cx(c2, t));
    out.push(Gate::phase(-tq, t));
    out.push(Gate::cx(c1, t));
    out.push(Gate::phase(tq, t));
    out.push(Gate::cx(c2, t));
    out.push(Gate::phase(-tq, t));
    out.push(Gate::cx(c1, t));
    out.push(Gate::phase(tq, c2));
    out.push(Gate::phase(tq, t));
    out.push(Gate::h(t));
    out.push(Gate::cx(c1, c2));
    out.push(Gate::phase(tq, c1));
    out.push(Gate::phase(-tq, c2));
    out.push(Gate::cx(c1, c2));
}

/// Doubly-controlled phase from two CX and three CPHASE gates:
/// θ/2·(a + b − a⊕b) = θ·ab.
fn emit_ccphase(theta: f64, c1: usize, c2: usize, t: usize, out: &mut Vec<Gate>) {
    out.push(Gate::cphase(theta / 2.0, c1, t));
    out.push(Gate::cx(c1, c2));
    out.push(Gate::cphase(-theta / 2.0, c2, t));
    out.push(Gate::cx(c1, c2));
    out.push(Gate::cphase(theta / 2.0, c2, t));
}
