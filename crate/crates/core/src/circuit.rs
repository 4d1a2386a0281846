//! Circuit intermediate representation: register layouts, gate records with
//! polarity controls, composition, small-size unitary reconstruction, and
//! 2-qubit gate counting.
//!
//! A gate is a base kind (H, X, Z, PHASE(θ), GLOBALPHASE(θ)) plus an
//! arbitrary list of polarity-carrying controls. The familiar named gates
//! are special cases: CX is X with one positive control, TOFFOLI is X with
//! two, MCX is X with any mix, CZ/CPHASE likewise for Z and PHASE. Lowered
//! (elementary) circuits contain only uncontrolled 1-qubit gates,
//! singly-positively-controlled X/Z/PHASE, and GLOBALPHASE.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on qubit count for unitary reconstruction (16384-dim).
pub const DEFAULT_UNITARY_QUBIT_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

/// A control qubit together with the bit value that activates the gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn pos(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Positive,
        }
    }

    pub fn neg(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Negative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    Z,
    Phase(f64),
    /// A scalar phase e^{iθ} on the whole state. Tracked explicitly:
    /// controlling a composite gate promotes its global phase to a physical
    /// relative phase, so it must not be dropped.
    GlobalPhase(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    /// Exactly one target for H/X/Z/PHASE; none for GLOBALPHASE.
    pub target: Option<usize>,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn h(target: usize) -> Self {
        Gate {
            kind: GateKind::H,
            target: Some(target),
            controls: Vec::new(),
        }
    }

    pub fn x(target: usize) -> Self {
        Gate {
            kind: GateKind::X,
            target: Some(target),
            controls: Vec::new(),
        }
    }

    pub fn z(target: usize) -> Self {
        Gate {
            kind: GateKind::Z,
            target: Some(target),
            controls: Vec::new(),
        }
    }

    pub fn phase(theta: f64, target: usize) -> Self {
        Gate {
            kind: GateKind::Phase(theta),
            target: Some(target),
            controls: Vec::new(),
        }
    }

    pub fn global_phase(theta: f64) -> Self {
        Gate {
            kind: GateKind::GlobalPhase(theta),
            target: None,
            controls: Vec::new(),
        }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::x(target).controlled(Control::pos(control))
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Gate::z(target).controlled(Control::pos(control))
    }

    pub fn cphase(theta: f64, control: usize, target: usize) -> Self {
        Gate::phase(theta, target).controlled(Control::pos(control))
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Gate::x(target)
            .controlled(Control::pos(c2))
            .controlled(Control::pos(c1))
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        Gate {
            kind: GateKind::X,
            target: Some(target),
            controls,
        }
    }

    /// The same gate with one more control (prepended).
    pub fn controlled(mut self, control: Control) -> Self {
        self.controls.insert(0, control);
        self
    }

    pub fn with_controls(mut self, controls: Vec<Control>) -> Self {
        self.controls = controls;
        self
    }

    pub fn inverse(&self) -> Gate {
        let kind = match self.kind {
            GateKind::Phase(theta) => GateKind::Phase(-theta),
            GateKind::GlobalPhase(theta) => GateKind::GlobalPhase(-theta),
            other => other,
        };
        Gate {
            kind,
            target: self.target,
            controls: self.controls.clone(),
        }
    }

    /// All qubits the gate touches (target first, then controls).
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.target
            .into_iter()
            .chain(self.controls.iter().map(|c| c.qubit))
    }

    /// Elementary gates are what lowered circuits may contain: uncontrolled
    /// H/X/Z/PHASE/GLOBALPHASE, plus X/Z/PHASE with one positive control
    /// (CX, CZ, CPHASE).
    pub fn is_elementary(&self) -> bool {
        match self.kind {
            GateKind::GlobalPhase(_) => self.controls.is_empty(),
            GateKind::H => self.controls.is_empty(),
            GateKind::X | GateKind::Z | GateKind::Phase(_) => {
                self.controls.is_empty()
                    || (self.controls.len() == 1
                        && self.controls[0].polarity == Polarity::Positive)
            }
        }
    }
}

/// A named contiguous block of qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub width: usize,
    pub offset: usize,
}

/// Ordered disjoint registers; global qubit index = register offset + local
/// index. Qubit 0 is the most significant bit of a basis-state index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    regs: Vec<Register>,
    total: usize,
}

impl RegisterLayout {
    pub fn new(widths: &[(&str, usize)]) -> Self {
        let mut regs = Vec::with_capacity(widths.len());
        let mut offset = 0;
        for &(name, width) in widths {
            assert!(width > 0, "register {name} must have positive width");
            regs.push(Register {
                name: name.to_string(),
                width,
                offset,
            });
            offset += width;
        }
        RegisterLayout { regs, total: offset }
    }

    /// A single anonymous register `q` of the given width.
    pub fn single(width: usize) -> Self {
        Self::new(&[("q", width)])
    }

    pub fn total_qubits(&self) -> usize {
        self.total
    }

    pub fn registers(&self) -> &[Register] {
        &self.regs
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.regs.iter().find(|r| r.name == name)
    }

    /// Global index of qubit `i` in register `name`. Panics on bad names or
    /// out-of-range indices; layouts are fixed by construction.
    pub fn qubit(&self, name: &str, i: usize) -> usize {
        let reg = self
            .register(name)
            .unwrap_or_else(|| panic!("no register named {name}"));
        assert!(i < reg.width, "qubit {i} out of range for register {name}");
        reg.offset + i
    }

    /// All global indices of one register, in order.
    pub fn qubits(&self, name: &str) -> Vec<usize> {
        let reg = self
            .register(name)
            .unwrap_or_else(|| panic!("no register named {name}"));
        (reg.offset..reg.offset + reg.width).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// May contain multi-controlled and negatively-controlled gates.
    Composite,
    /// Only the lowered gate set.
    Elementary,
}

/// An ordered gate list over a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    layout: RegisterLayout,
    gates: Vec<Gate>,
    level: Level,
}

impl Circuit {
    pub fn new(layout: RegisterLayout, level: Level) -> Self {
        Circuit {
            layout,
            gates: Vec::new(),
            level,
        }
    }

    pub fn from_gates(layout: RegisterLayout, gates: Vec<Gate>, level: Level) -> Result<Self> {
        let mut c = Circuit::new(layout, level);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Appends a gate after validating qubit ranges, target/control
    /// disjointness, and (for elementary circuits) the gate set.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let total = self.layout.total;
        for q in gate.qubits() {
            if q >= total {
                return Err(Error::QubitOutOfRange { qubit: q, total });
            }
        }
        let mut seen = Vec::with_capacity(1 + gate.controls.len());
        for q in gate.qubits() {
            if seen.contains(&q) {
                return Err(Error::OverlappingQubits(q));
            }
            seen.push(q);
        }
        match gate.kind {
            GateKind::GlobalPhase(_) => {
                if gate.target.is_some() {
                    return Err(Error::InvalidArgument(
                        "global phase takes no target".into(),
                    ));
                }
            }
            _ => {
                if gate.target.is_none() {
                    return Err(Error::InvalidArgument("gate requires a target".into()));
                }
            }
        }
        if self.level == Level::Elementary && !gate.is_elementary() {
            return Err(Error::CompositeCircuit);
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn qubit_count(&self) -> usize {
        self.layout.total
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Gates of `self` followed by gates of `other`. Layouts must match.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        let level = if self.level == Level::Elementary && other.level == Level::Elementary {
            Level::Elementary
        } else {
            Level::Composite
        };
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(Circuit {
            layout: self.layout.clone(),
            gates,
            level,
        })
    }

    /// Reversed gate order with each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            level: self.level,
        }
    }

    /// Number of gates acting on exactly two qubits. Rejects composite
    /// circuits: the cost model counts the lowered gate set only.
    pub fn count_two_qubit_gates(&self) -> Result<usize> {
        if self.level != Level::Elementary {
            return Err(Error::CompositeCircuit);
        }
        Ok(self
            .gates
            .iter()
            .filter(|g| g.qubits().count() == 2)
            .count())
    }

    /// The 2^q × 2^q matrix of the circuit, gates applied in order.
    pub fn to_unitary(&self) -> Result<Array2<Complex64>> {
        self.to_unitary_with_cap(DEFAULT_UNITARY_QUBIT_CAP)
    }

    pub fn to_unitary_with_cap(&self, cap: usize) -> Result<Array2<Complex64>> {
        let q = self.layout.total;
        if q > cap {
            return Err(Error::UnitaryCap { qubits: q, cap });
        }
        let dim = 1usize << q;
        let mut u = Array2::zeros((dim, dim));
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        for c in 0..dim {
            col.fill(Complex64::new(0.0, 0.0));
            col[c] = Complex64::new(1.0, 0.0);
            for gate in &self.gates {
                apply_gate(&mut col, q, gate);
            }
            for (r, amp) in col.iter().enumerate() {
                u[[r, c]] = *amp;
            }
        }
        Ok(u)
    }
}

/// Applies one gate to a dense state of `total` qubits. Qubit `q`
/// corresponds to bit `total − 1 − q` of the basis index (qubit 0 is the
/// most significant). Controls gate the whole 2x2 target action.
pub(crate) fn apply_gate(amps: &mut [Complex64], total: usize, gate: &Gate) {
    debug_assert_eq!(amps.len(), 1 << total);
    let bit = |q: usize| 1usize << (total - 1 - q);
    let mut cmask = 0usize;
    let mut cval = 0usize;
    for c in &gate.controls {
        let b = bit(c.qubit);
        cmask |= b;
        if c.polarity == Polarity::Positive {
            cval |= b;
        }
    }
    match gate.kind {
        GateKind::GlobalPhase(theta) => {
            let ph = Complex64::from_polar(1.0, theta);
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & cmask == cval {
                    *amp *= ph;
                }
            }
        }
        kind => {
            let t = bit(gate.target.expect("targeted gate"));
            match kind {
                GateKind::H => {
                    let s = std::f64::consts::FRAC_1_SQRT_2;
                    for i in 0..amps.len() {
                        if i & t == 0 && i & cmask == cval {
                            let (a, b) = (amps[i], amps[i | t]);
                            amps[i] = s * (a + b);
                            amps[i | t] = s * (a - b);
                        }
                    }
                }
                GateKind::X => {
                    for i in 0..amps.len() {
                        if i & t == 0 && i & cmask == cval {
                            amps.swap(i, i | t);
                        }
                    }
                }
                GateKind::Z => {
                    for (i, amp) in amps.iter_mut().enumerate() {
                        if i & t != 0 && i & cmask == cval {
                            *amp = -*amp;
                        }
                    }
                }
                GateKind::Phase(theta) => {
                    let ph = Complex64::from_polar(1.0, theta);
                    for (i, amp) in amps.iter_mut().enumerate() {
                        if i & t != 0 && i & cmask == cval {
                            *amp *= ph;
                        }
                    }
                }
                GateKind::GlobalPhase(_) => unreachable!(),
            }
        }
    }
}
