//! Input scenarios: initial values plus scheduled input changes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SimError;
use crate::topology::NodeId;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputChange {
    /// Multiply the current input by the factor (applied as an exact
    /// double multiplication).
    Multiply(f64),
    /// Replace the input with an absolute value.
    Set(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduledChange {
    /// Applied at the start of this round, before the communication phase.
    pub round: u64,
    pub node: NodeId,
    pub change: InputChange,
}

/// Initial inputs for every node plus a round-sorted change schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    initial: Vec<f64>,
    changes: Vec<ScheduledChange>,
}

impl Scenario {
    pub fn constant(initial: Vec<f64>) -> Result<Self, SimError> {
        Scenario::with_changes(initial, Vec::new())
    }

    /// Changes are stably sorted by round; rounds start at 1 and nodes must
    /// be valid for the initial vector.
    pub fn with_changes(
        initial: Vec<f64>,
        mut changes: Vec<ScheduledChange>,
    ) -> Result<Self, SimError> {
        if initial.is_empty() {
            return Err(SimError::EmptyScenario);
        }
        for c in &changes {
            if c.node.index() >= initial.len() {
                return Err(SimError::ChangeNodeOutOfRange { node: c.node, n: initial.len() });
            }
            if c.round == 0 {
                return Err(SimError::ChangeInRoundZero { node: c.node });
            }
        }
        changes.sort_by_key(|c| c.round);
        Ok(Scenario { initial, changes })
    }

    pub fn n(&self) -> usize {
        self.initial.len()
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn changes(&self) -> &[ScheduledChange] {
        &self.changes
    }

    /// Counting scenario: all inputs 0 except one seeded-uniform node with 1,
    /// so the true mean is 1/n and converging estimates count the network.
    pub fn counting(n: usize, seed: u64) -> Result<Self, SimError> {
        if n == 0 {
            return Err(SimError::EmptyScenario);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chosen = rng.random_range(0..n);
        let mut initial = vec![0.0; n];
        initial[chosen] = 1.0;
        Scenario::constant(initial)
    }

    /// Seeded-uniform inputs in `[lo, hi)`, no changes.
    pub fn uniform(n: usize, lo: f64, hi: f64, seed: u64) -> Result<Self, SimError> {
        if n == 0 {
            return Err(SimError::EmptyScenario);
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(SimError::InvalidRange { lo, hi });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let initial = (0..n).map(|_| rng.random_range(lo..hi)).collect();
        Scenario::constant(initial)
    }

    /// The time-varying-inputs scenario with default parameters: inputs
    /// uniform in [25, 35); a random half of the nodes gets ×1.05 per round
    /// for 50 rounds starting at round 50, then ×0.95 per round for the
    /// next 50 rounds.
    pub fn section6(n: usize, seed: u64) -> Result<Self, SimError> {
        Scenario::section6_with(n, seed, &Section6Options::default())
    }

    pub fn section6_with(n: usize, seed: u64, opts: &Section6Options) -> Result<Self, SimError> {
        if n == 0 {
            return Err(SimError::EmptyScenario);
        }
        let (lo, hi) = opts.value_range;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(SimError::InvalidRange { lo, hi });
        }
        let changed_count = opts.changed_nodes.unwrap_or(n / 2);
        if changed_count > n {
            return Err(SimError::ChangeNodeOutOfRange { node: NodeId(changed_count as u32), n });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let initial: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
        let mut changed = sample_without_replacement(&mut rng, n, changed_count);
        changed.sort_unstable();
        let mut changes = Vec::with_capacity(2 * opts.window_len as usize * changed_count);
        for (offset, factor) in [(0, opts.up_factor), (opts.window_len, opts.down_factor)] {
            for round in 0..opts.window_len {
                let round = opts.start_round + offset + round;
                for &node in &changed {
                    changes.push(ScheduledChange {
                        round,
                        node: NodeId(node as u32),
                        change: InputChange::Multiply(factor),
                    });
                }
            }
        }
        Scenario::with_changes(initial, changes)
    }
}

/// Parameters for scaled variants of the time-varying scenario.
#[derive(Clone, Copy, Debug)]
pub struct Section6Options {
    pub value_range: (f64, f64),
    /// Nodes whose inputs change; defaults to half the network.
    pub changed_nodes: Option<usize>,
    /// First round of the increase window.
    pub start_round: u64,
    /// Length of each window in rounds.
    pub window_len: u64,
    pub up_factor: f64,
    pub down_factor: f64,
}

impl Default for Section6Options {
    fn default() -> Self {
        Section6Options {
            value_range: (25.0, 35.0),
            changed_nodes: None,
            start_round: 50,
            window_len: 50,
            up_factor: 1.05,
            down_factor: 0.95,
        }
    }
}

/// Partial Fisher–Yates over `0..n`: the first `k` entries of a seeded
/// uniform permutation.
fn sample_without_replacement(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

/// Seeded uniform sample of `k` node indices without replacement, ascending;
/// used to pick which nodes a trace reports.
pub fn sample_trace_nodes(seed: u64, n: usize, k: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample_without_replacement(&mut rng, n, k);
    picked.sort_unstable();
    picked
}
