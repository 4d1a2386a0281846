//! The three graph families and the flip-flop neighbor map realizing the
//! shift operator's combinatorics.
//!
//! Node and subnode index spaces are powers of two wherever a circuit exists
//! for them; the neighbor map is an involution on (node, subnode) pairs for
//! every family, which is what makes the shift operator square to the
//! identity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest node-register width accepted, so index arithmetic stays well
/// inside `usize` on every host.
pub const MAX_NODE_BITS: usize = 30;

/// A node index in `[0, node_count)`.
///
/// For the twisted toroid the index decomposes as `x * 2^m + y` (x in the
/// high bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

/// A coin position in `[0, degree)`.
///
/// Twisted-toroid labeling: 0 = +x, 1 = −x, 2 = +y, 3 = −y; bit 0 is the
/// sign, bit 1 the axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubnodeId(pub usize);

/// Which graph family to walk on, with its size exponents.
///
/// In JSON form: `{"family":"hypercube","n":5}`, `{"family":"complete","n":5}`,
/// `{"family":"twisted_toroid","n":5,"m":5}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    /// The n-dimensional hypercube: 2^n nodes, each of degree n, adjacent
    /// exactly when the node bit strings differ in one position.
    Hypercube { n: usize },
    /// The complete graph on 2^n nodes with a self loop at every node, so
    /// each node has degree 2^n.
    #[serde(rename = "complete")]
    CompleteSelfLoop { n: usize },
    /// The 2^n × 2^m grid with twisted boundary identifications:
    /// (0, t) ↔ (2^n−1, (t+1) mod 2^m) and (s, 0) ↔ ((s+1) mod 2^n, 2^m−1).
    TwistedToroid { n: usize, m: usize },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let check = |bits: usize, what: &str| {
            if bits == 0 {
                Err(Error::InvalidSpec(format!("{what} must be at least 1")))
            } else if bits > MAX_NODE_BITS {
                Err(Error::InvalidSpec(format!(
                    "{what} = {bits} exceeds the cap of {MAX_NODE_BITS} bits"
                )))
            } else {
                Ok(())
            }
        };
        match *self {
            FamilySpec::Hypercube { n } => check(n, "n"),
            FamilySpec::CompleteSelfLoop { n } => check(n, "n"),
            FamilySpec::TwistedToroid { n, m } => {
                check(n, "n")?;
                check(m, "m")?;
                check(n + m, "n+m")
            }
        }
    }

    pub fn node_count(&self) -> usize {
        1 << self.node_bits()
    }

    pub fn degree(&self) -> usize {
        match *self {
            FamilySpec::Hypercube { n } => n,
            FamilySpec::CompleteSelfLoop { n } => 1 << n,
            FamilySpec::TwistedToroid { .. } => 4,
        }
    }

    /// Width of the node bit string (for the toroid, x bits plus y bits).
    pub fn node_bits(&self) -> usize {
        match *self {
            FamilySpec::Hypercube { n } => n,
            FamilySpec::CompleteSelfLoop { n } => n,
            FamilySpec::TwistedToroid { n, m } => n + m,
        }
    }

    /// Width of a register holding one subnode label: ⌈log₂ degree⌉.
    pub fn subnode_bits(&self) -> usize {
        let d = self.degree();
        let mut bits = 0;
        while (1 << bits) < d {
            bits += 1;
        }
        bits
    }

    /// The flip-flop shift target of `(v, a)`.
    ///
    /// Hypercube: flips node bit `a`, keeps the subnode. Complete graph:
    /// swaps node and subnode (self loop when they are equal). Twisted
    /// toroid: moves one step along the coin's axis, applying the twisted
    /// wrap at the boundary, and flips the coin's sign bit. Involutive for
    /// every family.
    ///
    /// Panics if the subnode is out of range for the family's degree.
    pub fn neighbor(&self, v: NodeId, a: SubnodeId) -> (NodeId, SubnodeId) {
        assert!(
            v.0 < self.node_count(),
            "node {} out of range for {} nodes",
            v.0,
            self.node_count()
        );
        assert!(
            a.0 < self.degree(),
            "subnode {} out of range for degree {}",
            a.0,
            self.degree()
        );
        match *self {
            FamilySpec::Hypercube { .. } => (NodeId(v.0 ^ (1 << a.0)), a),
            FamilySpec::CompleteSelfLoop { .. } => (NodeId(a.0), SubnodeId(v.0)),
            FamilySpec::TwistedToroid { n, m } => {
                let (xs, ys) = (1usize << n, 1usize << m);
                let (x, y) = (v.0 >> m, v.0 & (ys - 1));
                let (x2, y2) = match a.0 {
                    0 => {
                        // +x, wrapping into the previous y row
                        if x < xs - 1 {
                            (x + 1, y)
                        } else {
                            (0, (y + ys - 1) % ys)
                        }
                    }
                    1 => {
                        if x > 0 {
                            (x - 1, y)
                        } else {
                            (xs - 1, (y + 1) % ys)
                        }
                    }
                    2 => {
                        // +y, wrapping into the previous x column
                        if y < ys - 1 {
                            (x, y + 1)
                        } else {
                            ((x + xs - 1) % xs, 0)
                        }
                    }
                    3 => {
                        if y > 0 {
                            (x, y - 1)
                        } else {
                            ((x + 1) % xs, ys - 1)
                        }
                    }
                    _ => unreachable!(),
                };
                (NodeId((x2 << m) | y2), SubnodeId(a.0 ^ 1))
            }
        }
    }

    /// Toroid coordinates `(x, y)` of a node index.
    pub fn toroid_coords(&self, v: NodeId) -> (usize, usize) {
        match *self {
            FamilySpec::TwistedToroid { m, .. } => (v.0 >> m, v.0 & ((1 << m) - 1)),
            _ => panic!("toroid_coords on a non-toroid spec"),
        }
    }

    /// Node index as a bit string, most significant bit first. For the
    /// toroid this is the x bits concatenated with the y bits.
    pub fn encode_node(&self, v: NodeId) -> Vec<bool> {
        assert!(v.0 < self.node_count());
        let w = self.node_bits();
        (0..w).map(|j| (v.0 >> (w - 1 - j)) & 1 == 1).collect()
    }

    /// Inverse of [`encode_node`](Self::encode_node).
    pub fn decode_node(&self, bits: &[bool]) -> Result<NodeId> {
        let w = self.node_bits();
        if bits.len() != w {
            return Err(Error::BitWidth {
                expected: w,
                got: bits.len(),
            });
        }
        let mut v = 0usize;
        for &b in bits {
            v = (v << 1) | usize::from(b);
        }
        Ok(NodeId(v))
    }
}
