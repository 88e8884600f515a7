//! Monte Carlo particle random walk: the proof device behind the node-mass
//! bound, made executable.
//!
//! Input mass is discretized into equal-value particles. Each round a
//! particle at node i picks its next location from row i of the transition
//! matrix; a particle that tries to cross an edge is delayed in that edge's
//! buffer with probability f each round until it gets through. Comparing
//! the fraction of particles at nodes against `1 − f` checks the expected
//! node-mass bound; the per-node occupancy checks uniformity after mixing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AnalysisError;
use crate::topology::Graph;

#[derive(Clone, Debug)]
pub struct ParticleWalkConfig {
    /// Value ν carried by every particle; ν·|S| equals the total input mass.
    pub particle_value: f64,
    /// Initial particle count per node.
    pub initial_counts: Vec<u64>,
    pub loss_rate: f64,
    pub rounds: u64,
    pub seed: u64,
}

impl ParticleWalkConfig {
    /// Discretizes non-negative inputs into `total_particles` particles of
    /// value ν = Σv/|S|, placing ⌊v_i/ν⌋ per node and handing the remaining
    /// particles to the nodes with the largest residuals.
    pub fn from_inputs(
        inputs: &[f64],
        total_particles: u64,
        loss_rate: f64,
        rounds: u64,
        seed: u64,
    ) -> Result<Self, AnalysisError> {
        if inputs.is_empty() || total_particles == 0 {
            return Err(AnalysisError::Domain("need inputs and a positive particle budget".into()));
        }
        if inputs.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(AnalysisError::Domain("particle placement needs non-negative inputs".into()));
        }
        let total: f64 = inputs.iter().sum();
        if total <= 0.0 {
            return Err(AnalysisError::Domain("total input mass must be positive".into()));
        }
        let particle_value = total / total_particles as f64;
        let mut counts = Vec::with_capacity(inputs.len());
        let mut residuals: Vec<(f64, usize)> = Vec::with_capacity(inputs.len());
        let mut placed = 0u64;
        for (i, &v) in inputs.iter().enumerate() {
            let exact = v / particle_value;
            let base = exact.floor() as u64;
            placed += base;
            counts.push(base);
            residuals.push((exact - base as f64, i));
        }
        residuals.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        // floor placement undershoots by < n particles (or overshoots by a
        // hair when v_i/ν rounds up to an integer); settle the difference on
        // the largest- resp. smallest-residual nodes
        let mut remaining = total_particles as i64 - placed as i64;
        let mut rank = 0usize;
        while remaining > 0 {
            counts[residuals[rank % residuals.len()].1] += 1;
            remaining -= 1;
            rank += 1;
        }
        let mut rank = residuals.len();
        while remaining < 0 {
            rank = if rank == 0 { residuals.len() - 1 } else { rank - 1 };
            let i = residuals[rank].1;
            if counts[i] > 0 {
                counts[i] -= 1;
                remaining += 1;
            }
        }
        Ok(ParticleWalkConfig {
            particle_value,
            initial_counts: counts,
            loss_rate,
            rounds,
            seed,
        })
    }

    pub fn total_particles(&self) -> u64 {
        self.initial_counts.iter().sum()
    }
}

/// One round's census of the walk.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticleRound {
    pub round: u64,
    pub at_nodes: u64,
    pub in_buffers: u64,
    /// Particles at each node.
    pub occupancy: Vec<u64>,
}

impl ParticleRound {
    /// |S_V| / |S|: the fraction of particles currently at nodes.
    pub fn node_fraction(&self) -> f64 {
        self.at_nodes as f64 / (self.at_nodes + self.in_buffers) as f64
    }
}

#[derive(Clone, Copy)]
enum Location {
    AtNode(u32),
    /// Held in an edge buffer, waiting to reach the destination node.
    InBuffer(u32),
}

/// Runs the seeded walk; entry 0 reports the initial placement (everything
/// at nodes), followed by one entry per round.
pub fn particle_walk(
    g: &Graph,
    config: &ParticleWalkConfig,
) -> Result<Vec<ParticleRound>, AnalysisError> {
    let n = g.node_count();
    if config.initial_counts.len() != n {
        return Err(AnalysisError::Domain(format!(
            "initial placement covers {} nodes, graph has {n}",
            config.initial_counts.len()
        )));
    }
    if !(0.0..1.0).contains(&config.loss_rate) {
        return Err(AnalysisError::Domain(format!(
            "loss rate {} outside [0, 1)",
            config.loss_rate
        )));
    }
    // Row i of the transition matrix, as (cumulative probability, destination)
    // over neighbors ascending; the residual mass is the self-loop p_ii.
    let rows: Vec<Vec<(f64, u32)>> = g
        .nodes()
        .map(|i| {
            let mut acc = 0.0;
            g.neighbor_pair_degrees(i)
                .into_iter()
                .map(|(j, d)| {
                    acc += 1.0 / (2.0 * d as f64);
                    (acc, j.0)
                })
                .collect()
        })
        .collect();

    let mut particles: Vec<Location> = Vec::with_capacity(config.total_particles() as usize);
    for (i, &count) in config.initial_counts.iter().enumerate() {
        particles.extend(std::iter::repeat_n(Location::AtNode(i as u32), count as usize));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let f = config.loss_rate;
    let mut history = Vec::with_capacity(config.rounds as usize + 1);
    history.push(census(0, &particles, n));

    for round in 1..=config.rounds {
        for particle in &mut particles {
            match *particle {
                Location::AtNode(i) => {
                    let u: f64 = rng.random();
                    let row = &rows[i as usize];
                    let hit = row.iter().find(|&&(cum, _)| u < cum);
                    if let Some(&(_, dst)) = hit {
                        // the particle moves along an edge: delayed with prob f
                        if f > 0.0 && rng.random::<f64>() < f {
                            *particle = Location::InBuffer(dst);
                        } else {
                            *particle = Location::AtNode(dst);
                        }
                    }
                    // otherwise the self-loop keeps it in place, no message
                }
                Location::InBuffer(dst) => {
                    if !(f > 0.0 && rng.random::<f64>() < f) {
                        *particle = Location::AtNode(dst);
                    }
                }
            }
        }
        history.push(census(round, &particles, n));
    }
    Ok(history)
}

fn census(round: u64, particles: &[Location], n: usize) -> ParticleRound {
    let mut occupancy = vec![0u64; n];
    let mut in_buffers = 0u64;
    for p in particles {
        match *p {
            Location::AtNode(i) => occupancy[i as usize] += 1,
            Location::InBuffer(_) => in_buffers += 1,
        }
    }
    let at_nodes = particles.len() as u64 - in_buffers;
    ParticleRound { round, at_nodes, in_buffers, occupancy }
}
