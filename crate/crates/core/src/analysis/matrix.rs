//! The transition matrix of one loss-free round.

use crate::topology::Graph;

/// Dense symmetric doubly stochastic matrix with `p_ij = 1/(2·D_ij)` on
/// edges, `p_ii = 1 − Σ_k 1/(2·D_ik)`, and 0 elsewhere. One loss-free round
/// maps the estimate row vector e to e·P.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    data: Vec<f64>, // row-major
}

impl TransitionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Row-vector product x·P.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        let mut y = vec![0.0; self.n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, yj) in y.iter_mut().enumerate() {
                *yj += xi * self.get(i, j);
            }
        }
        y
    }
}

/// Builds P from the graph and verifies its invariants (symmetry, double
/// stochasticity within 1e-12, `p_ii ≥ 1/2`, zeros exactly on non-edges).
pub fn build_transition_matrix(g: &Graph) -> TransitionMatrix {
    let n = g.node_count();
    let mut data = vec![0.0; n * n];
    for i in g.nodes() {
        let mut off_diagonal = 0.0;
        for &j in g.neighbors(i) {
            let share = 1.0 / (2.0 * g.pair_degree(i, j).unwrap() as f64);
            data[i.index() * n + j.index()] = share;
            off_diagonal += share;
        }
        data[i.index() * n + i.index()] = 1.0 - off_diagonal;
    }
    let p = TransitionMatrix { n, data };
    verify_invariants(&p, g);
    p
}

fn verify_invariants(p: &TransitionMatrix, g: &Graph) {
    let n = p.n;
    const TOL: f64 = 1e-12;
    for i in 0..n {
        assert!(p.get(i, i) >= 0.5 - TOL, "p_{i}{i} = {} < 1/2", p.get(i, i));
        let row_sum: f64 = p.row(i).iter().sum();
        assert!((row_sum - 1.0).abs() <= TOL, "row {i} sums to {row_sum}");
        let col_sum: f64 = (0..n).map(|k| p.get(k, i)).sum();
        assert!((col_sum - 1.0).abs() <= TOL, "column {i} sums to {col_sum}");
        for j in 0..n {
            assert_eq!(p.get(i, j), p.get(j, i), "asymmetry at ({i}, {j})");
            if i != j {
                let is_edge = g.has_edge(crate::topology::NodeId(i as u32), crate::topology::NodeId(j as u32));
                assert_eq!(p.get(i, j) != 0.0, is_edge, "support mismatch at ({i}, {j})");
            }
        }
    }
}

/// Reference trajectory e(0)·Pʳ by repeated vector-matrix multiplication.
pub fn matrix_power_reference(p: &TransitionMatrix, e0: &[f64], rounds: u64) -> Vec<f64> {
    let mut e = e0.to_vec();
    for _ in 0..rounds {
        e = p.apply(&e);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{Graph, NodeId};

    fn two_node() -> Graph {
        Graph::from_edges(2, [(NodeId(0), NodeId(1))]).unwrap()
    }

    fn path3() -> Graph {
        Graph::from_edges(3, [(NodeId(0), NodeId(1)), (NodeId(1), NodeId(2))]).unwrap()
    }

    fn complete(n: u32) -> Graph {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (NodeId(i), NodeId(j))));
        Graph::from_edges(n as usize, edges).unwrap()
    }

    #[test]
    fn two_node_matrix_is_uniform() {
        let p = build_transition_matrix(&two_node());
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(p.get(i, j), 0.5);
            }
        }
    }

    #[test]
    fn path_matrix_entries() {
        let p = build_transition_matrix(&path3());
        assert_eq!(p.get(0, 1), 0.25);
        assert_eq!(p.get(1, 2), 0.25);
        assert_eq!(p.get(0, 0), 0.75);
        assert_eq!(p.get(1, 1), 0.5);
        assert_eq!(p.get(2, 2), 0.75);
        assert_eq!(p.get(0, 2), 0.0);
    }

    #[test]
    fn triangle_matrix_entries() {
        let p = build_transition_matrix(&complete(3));
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 0.5 } else { 0.25 };
                assert_eq!(p.get(i, j), expected);
            }
        }
    }

    #[test]
    fn power_reference_examples() {
        let p = build_transition_matrix(&two_node());
        let e0 = vec![1.0, 0.0];
        assert_eq!(matrix_power_reference(&p, &e0, 0), e0);
        assert_eq!(matrix_power_reference(&p, &e0, 1), vec![0.5, 0.5]);
    }

    #[test]
    fn long_powers_reach_the_uniform_average() {
        let g = crate::topology::generate_er(25, 60, 2).unwrap();
        let p = build_transition_matrix(&g);
        let e0: Vec<f64> = (0..25).map(|i| (i as f64) * 0.37 - 2.0).collect();
        let mean = e0.iter().sum::<f64>() / 25.0;
        let e = matrix_power_reference(&p, &e0, 5000);
        for v in e {
            assert!((v - mean).abs() < 1e-9);
        }
    }
}
