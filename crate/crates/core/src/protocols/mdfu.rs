//! MDFU: mass distribution with flow updating.
//!
//! Inputs stay immutable; nodes exchange cumulative flows and recompute the
//! estimate from scratch each round, so a lost message only leaves the
//! receiver with a one-round-stale inflow instead of destroying mass.

use super::{FlowMessage, Neighborhood, ProtocolError, ProtocolNode};
use crate::topology::NodeId;

#[derive(Clone, Debug)]
pub struct MdfuNodeState {
    id: NodeId,
    input: f64,
    estimate: f64,
    neighbors: Neighborhood,
    /// Last cumulative flow received from each neighbor.
    flow_in: Vec<f64>,
    /// Cumulative flow sent to each neighbor.
    flow_out: Vec<f64>,
    computed_this_round: bool,
}

impl MdfuNodeState {
    /// Initialization: `e ← v`, `F_in(j) ← 0`, `F_out(j) ← e/(2·D_ij)`.
    pub fn new(
        id: NodeId,
        input: f64,
        neighbors: &[(NodeId, usize)],
    ) -> Result<Self, ProtocolError> {
        let neighbors = Neighborhood::new(neighbors)?;
        let flow_out = neighbors.shares().iter().map(|&s| input * s).collect();
        Ok(MdfuNodeState {
            id,
            input,
            estimate: input,
            flow_in: vec![0.0; neighbors.len()],
            flow_out,
            neighbors,
            computed_this_round: false,
        })
    }

    pub fn flow_in(&self, from: NodeId) -> Result<f64, ProtocolError> {
        Ok(self.flow_in[self.neighbors.index_of(from)?])
    }

    pub fn flow_out(&self, to: NodeId) -> Result<f64, ProtocolError> {
        Ok(self.flow_out[self.neighbors.index_of(to)?])
    }
}

impl ProtocolNode for MdfuNodeState {
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

    fn absorb(&mut self, msg: FlowMessage) -> Result<(), ProtocolError> {
        let k = self.neighbors.index_of(msg.sender)?;
        self.flow_in[k] = msg.flow;
        Ok(())
    }

    /// `e_i ← v_i + Σ_j (F_in(j) − F_out(j))`, then
    /// `F_out(j) ← F_out(j) + e_i/(2·D_ij)` for every neighbor.
    fn compute(&mut self) -> Result<(), ProtocolError> {
        if self.computed_this_round {
            return Err(ProtocolError::DoubleCompute);
        }
        let mut balance = 0.0;
        for k in 0..self.neighbors.len() {
            balance += self.flow_in[k] - self.flow_out[k];
        }
        self.estimate = self.input + balance;
        for (out, &share) in self.flow_out.iter_mut().zip(self.neighbors.shares()) {
            *out += self.estimate * share;
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
