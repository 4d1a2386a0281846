//! Structured (non-gate-level) simulator of the search walk U = S·C on the
//! (node, subnode) amplitude space.
//!
//! Amplitudes are stored node-major (`node * degree + subnode`), the coin is
//! a per-node block operation, and the shift is a precomputed index
//! permutation built once per spec.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::{FamilySpec, NodeId, SubnodeId};

/// Default cap on `node_count * degree` amplitudes.
pub const DEFAULT_AMP_CAP: usize = 1 << 26;

/// Search configuration: which node carries the perturbed coin.
///
/// The perturbed coin is fixed to the negative identity. `marked: None`
/// disables the perturbation entirely (plain Grover-coin walk).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub marked: Option<NodeId>,
}

impl SearchConfig {
    pub fn marked(node: NodeId) -> Self {
        SearchConfig { marked: Some(node) }
    }

    pub fn unperturbed() -> Self {
        SearchConfig { marked: None }
    }
}

/// Dense complex state over the extended position space of one spec.
#[derive(Debug, Clone)]
pub struct WalkState {
    spec: FamilySpec,
    amps: Vec<Complex64>,
    /// Involutive index permutation realizing the flip-flop shift.
    shift: Vec<u32>,
}

impl WalkState {
    /// The equal superposition of all (node, subnode) states.
    pub fn uniform(spec: FamilySpec) -> Result<Self> {
        Self::uniform_with_cap(spec, DEFAULT_AMP_CAP)
    }

    pub fn uniform_with_cap(spec: FamilySpec, cap: usize) -> Result<Self> {
        spec.validate()?;
        let (n, d) = (spec.node_count(), spec.degree());
        let len = n
            .checked_mul(d)
            .filter(|&len| len <= cap)
            .ok_or(Error::SizeCap {
                needed: n.saturating_mul(d),
                cap,
            })?;
        let amp = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        let mut shift = vec![0u32; len];
        for v in 0..n {
            for a in 0..d {
                let (v2, a2) = spec.neighbor(NodeId(v), SubnodeId(a));
                shift[v * d + a] = (v2.0 * d + a2.0) as u32;
            }
        }
        Ok(WalkState {
            spec,
            amps: vec![amp; len],
            shift,
        })
    }

    /// A basis state concentrated on one (node, subnode) pair. Test aid.
    pub fn basis(spec: FamilySpec, v: NodeId, a: SubnodeId) -> Result<Self> {
        let mut state = Self::uniform(spec)?;
        state.amps.fill(Complex64::new(0.0, 0.0));
        state.amps[v.0 * spec.degree() + a.0] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// Wraps a raw amplitude vector (length node_count × degree).
    pub fn from_amps(spec: FamilySpec, amps: Vec<Complex64>) -> Result<Self> {
        let mut state = Self::uniform(spec)?;
        if amps.len() != state.amps.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes, got {}",
                state.amps.len(),
                amps.len()
            )));
        }
        state.amps = amps;
        Ok(state)
    }

    pub fn spec(&self) -> FamilySpec {
        self.spec
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amp(&self, v: NodeId, a: SubnodeId) -> Complex64 {
        self.amps[v.0 * self.spec.degree() + a.0]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies the coin: the Grover operator G = 2/d·J − I on every node
    /// block, replaced by −I on the marked block. Each unmarked amplitude
    /// becomes `2·mean(block) − amp`; the node marginals are untouched.
    pub fn apply_coin(&mut self, cfg: &SearchConfig) {
        let d = self.spec.degree();
        let marked = cfg.marked.map(|m| m.0);
        if let Some(m) = marked {
            assert!(m < self.spec.node_count(), "marked node out of range");
        }
        for (v, block) in self.amps.chunks_mut(d).enumerate() {
            if marked == Some(v) {
                for amp in block.iter_mut() {
                    *amp = -*amp;
                }
            } else {
                let mean = block.iter().sum::<Complex64>() / d as f64;
                for amp in block.iter_mut() {
                    *amp = 2.0 * mean - *amp;
                }
            }
        }
    }

    /// Applies the flip-flop shift: a bit-exact amplitude permutation.
    /// Involutive, so it is realized as in-place pair swaps.
    pub fn apply_shift(&mut self) {
        for i in 0..self.amps.len() {
            let j = self.shift[i] as usize;
            if i < j {
                self.amps.swap(i, j);
            }
        }
    }

    /// One step of the search walk: coin, then shift.
    pub fn step(&mut self, cfg: &SearchConfig) {
        self.apply_coin(cfg);
        self.apply_shift();
    }

    /// Total probability on `marked`, summed over its subnodes.
    pub fn marked_probability(&self, marked: NodeId) -> f64 {
        let d = self.spec.degree();
        self.amps[marked.0 * d..(marked.0 + 1) * d]
            .iter()
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Probability marginal of a single node.
    pub fn node_marginal(&self, v: NodeId) -> f64 {
        self.marked_probability(v)
    }
}

/// Success probability after t = 0..=steps walk steps from the uniform
/// state; entry t is recorded before the (t+1)-th step.
pub fn evolve(spec: FamilySpec, cfg: &SearchConfig, steps: usize) -> Result<Vec<f64>> {
    evolve_with_cap(spec, cfg, steps, DEFAULT_AMP_CAP)
}

pub fn evolve_with_cap(
    spec: FamilySpec,
    cfg: &SearchConfig,
    steps: usize,
    cap: usize,
) -> Result<Vec<f64>> {
    let marked = cfg
        .marked
        .ok_or_else(|| Error::InvalidArgument("evolve requires a marked node".into()))?;
    if marked.0 >= spec.node_count() {
        return Err(Error::InvalidArgument(format!(
            "marked node {} out of range for {} nodes",
            marked.0,
            spec.node_count()
        )));
    }
    let mut state = WalkState::uniform_with_cap(spec, cap)?;
    let mut probs = Vec::with_capacity(steps + 1);
    probs.push(state.marked_probability(marked));
    for _ in 0..steps {
        state.step(cfg);
        probs.push(state.marked_probability(marked));
    }
    Ok(probs)
}
