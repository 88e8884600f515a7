//! Fault-tolerant distributed averaging over lossy synchronous networks.
//!
//! This crate provides:
//!
//! * [`topology`] — undirected connected graphs, G(n, m) random generation,
//!   and edge-list file I/O;
//! * [`protocols`] — the per-node state machines for MDFU (mass distribution
//!   with flow updating), MDFU-LP (its linear-prediction refinement), and a
//!   Push-Synopses baseline, all behind one round-structured interface;
//! * [`simulator`] — a deterministic synchronous round engine with a seeded
//!   per-directed-edge message-loss model, input-change scenarios, and
//!   per-round error metrics;
//! * [`analysis`] — the transition matrix of a loss-free round, its second
//!   eigenvalue, exact graph conductance, convergence/overhead/bias bound
//!   calculators, and a particle random-walk oracle for the node-mass bound.
//!
//! Every seeded operation uses ChaCha8 (via `rand_chacha`) or a fixed
//! splitmix64-style keyed hash, so equal seeds give identical results on
//! every platform.

pub mod analysis;
pub mod protocols;
pub mod simulator;
pub mod topology;
