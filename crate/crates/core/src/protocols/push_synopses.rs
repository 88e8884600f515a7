//! Push-Synopses baseline: a push-sum mass-distribution protocol.
//!
//! Each node carries a sum and a weight, pushes the share `1/(2·D_ij)` of
//! both to each neighbor every round, and keeps the complement. The share
//! scheme mirrors the flow-updating transition matrix, so the loss-free
//! trajectories of all three protocols coincide and the comparison isolates
//! fault tolerance. Dropped shares are gone for good: the conserved totals
//! Σs and Σw shrink and never recover.

use super::{MassShareMessage, Neighborhood, ProtocolError, ProtocolNode};
use crate::topology::NodeId;

/// Below this weight the node's estimate is numerically meaningless;
/// reaching it signals pathological message loss.
const WEIGHT_UNDERFLOW: f64 = 1e-300;

#[derive(Clone, Debug)]
pub struct PushSynopsesNodeState {
    id: NodeId,
    input: f64,
    sum: f64,
    weight: f64,
    neighbors: Neighborhood,
    /// Share of (sum, weight) kept for self: `1 − Σ_j 1/(2·D_ij)`.
    keep_share: f64,
    pending_sum: f64,
    pending_weight: f64,
    computed_this_round: bool,
}

impl PushSynopsesNodeState {
    /// Initialization: `s ← v`, `w ← 1`.
    pub fn new(
        id: NodeId,
        input: f64,
        neighbors: &[(NodeId, usize)],
    ) -> Result<Self, ProtocolError> {
        let neighbors = Neighborhood::new(neighbors)?;
        let keep_share = 1.0 - neighbors.shares().iter().sum::<f64>();
        Ok(PushSynopsesNodeState {
            id,
            input,
            sum: input,
            weight: 1.0,
            neighbors,
            keep_share,
            pending_sum: 0.0,
            pending_weight: 0.0,
            computed_this_round: false,
        })
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

impl ProtocolNode for PushSynopsesNodeState {
    type Msg = MassShareMessage;

    fn id(&self) -> NodeId {
        self.id
    }

    fn emit(&mut self) -> Vec<(NodeId, MassShareMessage)> {
        self.computed_this_round = false;
        self.neighbors
            .ids()
            .iter()
            .zip(self.neighbors.shares())
            .map(|(&j, &share)| {
                (
                    j,
                    MassShareMessage {
                        sender: self.id,
                        sum_share: self.sum * share,
                        weight_share: self.weight * share,
                    },
                )
            })
            .collect()
    }

    fn absorb(&mut self, msg: MassShareMessage) -> Result<(), ProtocolError> {
        self.neighbors.index_of(msg.sender)?;
        self.pending_sum += msg.sum_share;
        self.pending_weight += msg.weight_share;
        Ok(())
    }

    fn compute(&mut self) -> Result<(), ProtocolError> {
        if self.computed_this_round {
            return Err(ProtocolError::DoubleCompute);
        }
        self.sum = self.keep_share * self.sum + self.pending_sum;
        self.weight = self.keep_share * self.weight + self.pending_weight;
        self.pending_sum = 0.0;
        self.pending_weight = 0.0;
        self.computed_this_round = true;
        if self.weight < WEIGHT_UNDERFLOW {
            return Err(ProtocolError::WeightUnderflow(self.weight));
        }
        Ok(())
    }

    fn estimate(&self) -> f64 {
        self.sum / self.weight
    }

    fn input(&self) -> f64 {
        self.input
    }

    /// Mass-distribution protocols must restart to change inputs.
    fn set_input(&mut self, _value: f64) -> Result<(), ProtocolError> {
        Err(ProtocolError::SetInputUnsupported)
    }
}
