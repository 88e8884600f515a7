//! Deterministic synchronous round engine.
//!
//! Each round: apply scheduled input changes, emit every message, drop each
//! one independently per the loss model, absorb the survivors, run the
//! computation phase, and record metrics from the post-compute estimates.
//! Round indices start at 1; round 0 reports the initial inputs as
//! estimates. Equal configs produce bit-identical metric series.

mod loss;
mod metrics;
mod scenario;

pub use loss::LossModel;
pub use metrics::{AggregatedRoundMetrics, MeanStd, RoundMetrics};
pub use scenario::{sample_trace_nodes, InputChange, Scenario, ScheduledChange, Section6Options};

use std::path::PathBuf;

use crate::protocols::{
    MdfuLpNodeState, MdfuNodeState, ProtocolError, ProtocolKind, ProtocolNode,
    PushSynopsesNodeState,
};
use crate::topology::{self, Graph, NodeId, TopologyError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("loss rate {0} outside [0, 1)")]
    InvalidLossRate(f64),
    #[error("scenario has no nodes")]
    EmptyScenario,
    #[error("invalid value range [{lo}, {hi})")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("scheduled change targets node {node} but the scenario has {n} nodes")]
    ChangeNodeOutOfRange { node: NodeId, n: usize },
    #[error("scheduled change for node {node} in round 0; changes start at round 1")]
    ChangeInRoundZero { node: NodeId },
    #[error("scenario covers {scenario} nodes but the graph has {graph}")]
    ScenarioSizeMismatch { scenario: usize, graph: usize },
    #[error("round count must be at least 1")]
    NoRounds,
    #[error("run_many needs at least one loss seed")]
    NoSeeds,
    #[error("relative metrics are undefined: true mean is 0 in round {round}")]
    UndefinedMetrics { round: u64 },
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// Where the experiment's graph comes from.
#[derive(Clone, Debug)]
pub enum GraphSource {
    Generate { n: usize, m: usize, seed: u64 },
    EdgeListFile(PathBuf),
    Prebuilt(Graph),
}

impl GraphSource {
    pub fn resolve(&self) -> Result<Graph, SimError> {
        match self {
            GraphSource::Generate { n, m, seed } => Ok(topology::generate_er(*n, *m, *seed)?),
            GraphSource::EdgeListFile(path) => {
                let file = std::fs::File::open(path).map_err(TopologyError::Io)?;
                let loaded = topology::load_edge_list(std::io::BufReader::new(file))?;
                Ok(loaded.graph)
            }
            GraphSource::Prebuilt(g) => Ok(g.clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    pub protocol: ProtocolKind,
    pub loss: LossModel,
    pub rounds: u64,
    pub scenario: Scenario,
    /// Record the full per-node estimate vector for every round.
    pub record_estimates: bool,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    /// `rounds + 1` entries; entry 0 reports the initial inputs.
    pub metrics: Vec<RoundMetrics>,
    /// Per-round estimate vectors, same length as `metrics`, when recorded.
    pub estimates: Option<Vec<Vec<f64>>>,
}

/// Runs one experiment. Fully deterministic given the config.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput, SimError> {
    let graph = config.graph.resolve()?;
    run_on(&graph, config)
}

/// As [`run`], but on an already-resolved graph (spares re-generation when
/// sweeping loss seeds).
pub fn run_on(graph: &Graph, config: &ExperimentConfig) -> Result<RunOutput, SimError> {
    if config.rounds == 0 {
        return Err(SimError::NoRounds);
    }
    if config.scenario.n() != graph.node_count() {
        return Err(SimError::ScenarioSizeMismatch {
            scenario: config.scenario.n(),
            graph: graph.node_count(),
        });
    }
    let initial = config.scenario.initial();
    match config.protocol {
        ProtocolKind::Mdfu => {
            let nodes = init_nodes(graph, initial, MdfuNodeState::new)?;
            simulate(graph, nodes, config)
        }
        ProtocolKind::MdfuLp => {
            let nodes = init_nodes(graph, initial, MdfuLpNodeState::new)?;
            simulate(graph, nodes, config)
        }
        ProtocolKind::PushSynopses => {
            let nodes = init_nodes(graph, initial, PushSynopsesNodeState::new)?;
            simulate(graph, nodes, config)
        }
    }
}

/// Runs the experiment once per loss seed and averages each metric per
/// round across seeds (mean and sample standard deviation).
pub fn run_many(
    config: &ExperimentConfig,
    loss_seeds: &[u64],
) -> Result<Vec<AggregatedRoundMetrics>, SimError> {
    if loss_seeds.is_empty() {
        return Err(SimError::NoSeeds);
    }
    let graph = config.graph.resolve()?;
    let mut runs = Vec::with_capacity(loss_seeds.len());
    for &seed in loss_seeds {
        let cfg = ExperimentConfig {
            loss: config.loss.with_seed(seed),
            record_estimates: false,
            ..config.clone()
        };
        runs.push(run_on(&graph, &cfg)?.metrics);
    }
    Ok(metrics::aggregate(&runs))
}

fn init_nodes<N>(
    graph: &Graph,
    initial: &[f64],
    make: impl Fn(NodeId, f64, &[(NodeId, usize)]) -> Result<N, ProtocolError>,
) -> Result<Vec<N>, SimError> {
    graph
        .nodes()
        .map(|i| {
            let neighbors = graph.neighbor_pair_degrees(i);
            Ok(make(i, initial[i.index()], &neighbors)?)
        })
        .collect()
}

fn simulate<N: ProtocolNode>(
    graph: &Graph,
    mut nodes: Vec<N>,
    config: &ExperimentConfig,
) -> Result<RunOutput, SimError> {
    let n = graph.node_count();
    let mut inputs: Vec<f64> = config.scenario.initial().to_vec();
    let changes = config.scenario.changes();
    let mut next_change = 0;

    let mut all_metrics = Vec::with_capacity(config.rounds as usize + 1);
    let mut estimate_log = config.record_estimates.then(Vec::new);

    let record = |round: u64,
                      nodes: &[N],
                      inputs: &[f64],
                      log: &mut Option<Vec<Vec<f64>>>|
     -> Result<RoundMetrics, SimError> {
        let estimates: Vec<f64> = nodes.iter().map(|node| node.estimate()).collect();
        let m = metrics::compute_metrics(round, &estimates, inputs)?;
        if let Some(log) = log {
            log.push(estimates);
        }
        Ok(m)
    };

    all_metrics.push(record(0, &nodes, &inputs, &mut estimate_log)?);

    let mut inboxes: Vec<Vec<N::Msg>> = (0..n).map(|_| Vec::new()).collect();
    for round in 1..=config.rounds {
        while next_change < changes.len() && changes[next_change].round <= round {
            let c = &changes[next_change];
            let value = match c.change {
                InputChange::Multiply(factor) => inputs[c.node.index()] * factor,
                InputChange::Set(value) => value,
            };
            inputs[c.node.index()] = value;
            nodes[c.node.index()].set_input(value)?;
            next_change += 1;
        }

        for inbox in &mut inboxes {
            inbox.clear();
        }
        for src in 0..n {
            for (dst, msg) in nodes[src].emit() {
                if !config.loss.drops(round, NodeId(src as u32), dst) {
                    inboxes[dst.index()].push(msg);
                }
            }
        }
        for (dst, inbox) in inboxes.iter().enumerate() {
            for &msg in inbox {
                nodes[dst].absorb(msg)?;
            }
        }
        for node in &mut nodes {
            node.compute()?;
        }

        all_metrics.push(record(round, &nodes, &inputs, &mut estimate_log)?);
    }

    Ok(RunOutput { metrics: all_metrics, estimates: estimate_log })
}
