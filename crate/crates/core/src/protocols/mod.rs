//! Per-node protocol state machines behind one round-structured interface.
//!
//! A round has two phases: every node emits one message per neighbor
//! (communication phase), absorbs whatever survived the network, then runs
//! its computation phase exactly once. The simulator enforces the phase
//! barrier; the node states enforce per-round single-compute and
//! known-sender checks.

mod mdfu;
mod mdfu_lp;
mod push_synopses;

pub use mdfu::MdfuNodeState;
pub use mdfu_lp::MdfuLpNodeState;
pub use push_synopses::PushSynopsesNodeState;

use crate::topology::NodeId;
use thiserror::Error;

/// Cumulative-flow message for MDFU and MDFU-LP: `⟨sender, F_out(j)⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowMessage {
    pub sender: NodeId,
    pub flow: f64,
}

/// Push-Synopses message: the sum and weight shares pushed to one neighbor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassShareMessage {
    pub sender: NodeId,
    pub sum_share: f64,
    pub weight_share: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error("node has an empty neighborhood")]
    EmptyNeighborhood,
    #[error("pair degree must be at least 1")]
    InvalidPairDegree,
    #[error("message from {0}, which is not a neighbor")]
    UnknownSender(NodeId),
    #[error("computation phase ran twice in one round")]
    DoubleCompute,
    #[error("push-synopses weight underflow ({0:e})")]
    WeightUnderflow(f64),
    #[error("set_input is not supported by this protocol")]
    SetInputUnsupported,
}

/// Protocol selector used by the simulator and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProtocolKind {
    Mdfu,
    MdfuLp,
    PushSynopses,
}

impl ProtocolKind {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Mdfu => "mdfu",
            ProtocolKind::MdfuLp => "mdfu-lp",
            ProtocolKind::PushSynopses => "push-synopses",
        }
    }
}

/// One node's view of a round-structured averaging protocol.
///
/// Call order within a round: `emit`, then `absorb` for each surviving
/// inbound message, then `compute` exactly once. `estimate` is the current
/// average estimate (sampled after `compute`).
pub trait ProtocolNode {
    type Msg: Copy;

    fn id(&self) -> NodeId;

    /// Communication phase: one addressed message per neighbor, ascending.
    fn emit(&mut self) -> Vec<(NodeId, Self::Msg)>;

    /// Absorbs one received message; rejects senders outside the neighborhood.
    fn absorb(&mut self, msg: Self::Msg) -> Result<(), ProtocolError>;

    /// Computation phase; errors on a second call within the same round.
    fn compute(&mut self) -> Result<(), ProtocolError>;

    fn estimate(&self) -> f64;

    fn input(&self) -> f64;

    /// Replaces the input value `v_i`; rejected by mass-distribution
    /// protocols that cannot absorb input changes without a restart.
    fn set_input(&mut self, value: f64) -> Result<(), ProtocolError>;
}

/// Sorted neighbor table shared by the three protocols: neighbor ids
/// ascending plus the per-edge share `1/(2·D_ij)`.
#[derive(Clone, Debug)]
pub(crate) struct Neighborhood {
    ids: Vec<NodeId>,
    shares: Vec<f64>,
}

impl Neighborhood {
    pub(crate) fn new(neighbors: &[(NodeId, usize)]) -> Result<Self, ProtocolError> {
        if neighbors.is_empty() {
            return Err(ProtocolError::EmptyNeighborhood);
        }
        let mut sorted: Vec<(NodeId, usize)> = neighbors.to_vec();
        sorted.sort_unstable_by_key(|&(id, _)| id);
        let mut ids = Vec::with_capacity(sorted.len());
        let mut shares = Vec::with_capacity(sorted.len());
        for (id, pair_degree) in sorted {
            if pair_degree == 0 {
                return Err(ProtocolError::InvalidPairDegree);
            }
            ids.push(id);
            shares.push(1.0 / (2.0 * pair_degree as f64));
        }
        Ok(Neighborhood { ids, shares })
    }

    pub(crate) fn len(&self) -> usize {
        self.ids.len()
    }

    pub(crate) fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub(crate) fn shares(&self) -> &[f64] {
        &self.shares
    }

    pub(crate) fn index_of(&self, id: NodeId) -> Result<usize, ProtocolError> {
        self.ids
            .binary_search(&id)
            .map_err(|_| ProtocolError::UnknownSender(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighborhood_sorts_and_validates() {
        let nb = Neighborhood::new(&[(NodeId(5), 2), (NodeId(1), 4)]).unwrap();
        assert_eq!(nb.ids(), &[NodeId(1), NodeId(5)]);
        assert_eq!(nb.shares(), &[0.125, 0.25]);
        assert_eq!(nb.index_of(NodeId(5)).unwrap(), 1);
        assert_eq!(nb.index_of(NodeId(2)), Err(ProtocolError::UnknownSender(NodeId(2))));
        assert_eq!(Neighborhood::new(&[]).unwrap_err(), ProtocolError::EmptyNeighborhood);
        assert_eq!(
            Neighborhood::new(&[(NodeId(0), 0)]).unwrap_err(),
            ProtocolError::InvalidPairDegree
        );
    }
}
