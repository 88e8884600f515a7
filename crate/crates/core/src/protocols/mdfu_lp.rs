//! MDFU-LP: MDFU with linear prediction of missing inflows.
//!
//! Each node tracks per-neighbor inflow velocity. When a round brings no
//! message from neighbor `j`, the estimate uses the prediction
//! `F_in(j) + V(j)·R(j)` in place of the stale inflow, which removes the
//! per-loss deviation MDFU suffers once velocities converge.

use super::{FlowMessage, Neighborhood, ProtocolError, ProtocolNode};
use crate::topology::NodeId;

#[derive(Clone, Debug)]
pub struct MdfuLpNodeState {
    id: NodeId,
    input: f64,
    estimate: f64,
    neighbors: Neighborhood,
    flow_in: Vec<f64>,
    flow_out: Vec<f64>,
    /// Per-neighbor inflow velocity V(j).
    velocity: Vec<f64>,
    /// Rounds since the last message from each neighbor, R(j); starts at 1.
    rounds_since_receipt: Vec<u64>,
    computed_this_round: bool,
}

impl MdfuLpNodeState {
    /// As MDFU, plus `V(j) ← 0` and `R(j) ← 1`.
    pub fn new(
        id: NodeId,
        input: f64,
        neighbors: &[(NodeId, usize)],
    ) -> Result<Self, ProtocolError> {
        let neighbors = Neighborhood::new(neighbors)?;
        let flow_out = neighbors.shares().iter().map(|&s| input * s).collect();
        Ok(MdfuLpNodeState {
            id,
            input,
            estimate: input,
            flow_in: vec![0.0; neighbors.len()],
            flow_out,
            velocity: vec![0.0; neighbors.len()],
            rounds_since_receipt: vec![1; neighbors.len()],
            neighbors,
            computed_this_round: false,
        })
    }

    pub fn velocity(&self, from: NodeId) -> Result<f64, ProtocolError> {
        Ok(self.velocity[self.neighbors.index_of(from)?])
    }

    pub fn rounds_since_receipt(&self, from: NodeId) -> Result<u64, ProtocolError> {
        Ok(self.rounds_since_receipt[self.neighbors.index_of(from)?])
    }
}

impl ProtocolNode for MdfuLpNodeState {
    type Msg = FlowMessage;

    fn id(&self) -> NodeId {
        self.id
    }

    fn emit(&mut self) -> Vec<(NodeId, FlowMessage)> {
        self.computed_this_round = false;
        self.neighbors
            .ids()
            .iter()
            .zip(&self.flow_out)
            .map(|(&j, &flow)| (j, FlowMessage { sender: self.id, flow }))
            .collect()
    }

    /// On receipt: `V(j) ← (F − F_in(j))/R(j)`, `R(j) ← 0`, `F_in(j) ← F`.
    fn absorb(&mut self, msg: FlowMessage) -> Result<(), ProtocolError> {
        let k = self.neighbors.index_of(msg.sender)?;
        debug_assert!(self.rounds_since_receipt[k] >= 1, "one message per edge per round");
        self.velocity[k] = (msg.flow - self.flow_in[k]) / self.rounds_since_receipt[k] as f64;
        self.rounds_since_receipt[k] = 0;
        self.flow_in[k] = msg.flow;
        Ok(())
    }

    /// `e_i ← v_i + Σ_j (F_in(j) + V(j)·R(j) − F_out(j))`, then the MDFU
    /// outflow increment and `R(j) ← R(j) + 1` for every neighbor.
    fn compute(&mut self) -> Result<(), ProtocolError> {
        if self.computed_this_round {
            return Err(ProtocolError::DoubleCompute);
        }
        let mut balance = 0.0;
        for k in 0..self.neighbors.len() {
            let predicted_in = self.flow_in[k] + self.velocity[k] * self.rounds_since_receipt[k] as f64;
            balance += predicted_in - self.flow_out[k];
        }
        self.estimate = self.input + balance;
        for k in 0..self.neighbors.len() {
            self.flow_out[k] += self.estimate * self.neighbors.shares()[k];
            self.rounds_since_receipt[k] += 1;
        }
        self.computed_this_round = true;
        Ok(())
    }

    fn estimate(&self) -> f64 {
        self.estimate
    }

    fn input(&self) -> f64 {
        self.input
    }

    fn set_input(&mut self, value: f64) -> Result<(), ProtocolError> {
        self.input = value;
        Ok(())
    }
}
