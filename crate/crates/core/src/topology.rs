//! Graph representation, random-graph generation, and edge-list file I/O.
//!
//! Graphs are simple, undirected, and connected; construction rejects
//! anything else. Node ids are dense integers in `[0, n)`.

use std::fmt;
use std::io::{self, BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Dense node index in `[0, n)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("failed to generate a connected graph after {attempts} attempts")]
    GenerationFailure { attempts: u32 },
    #[error("({a}, {b}) is not an edge")]
    NotAnEdge { a: NodeId, b: NodeId },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge ({a}, {b})")]
    DuplicateEdge { a: NodeId, b: NodeId },
    #[error("node {node} out of range for {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A simple undirected connected graph with dense node ids.
///
/// Immutable after construction; every constructor enforces symmetry,
/// no self-loops, no duplicate edges, and connectivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Canonical unordered pairs `(a, b)` with `a < b`, lexicographically sorted.
    edges: Vec<(NodeId, NodeId)>,
    /// Per-node neighbor lists, ascending.
    adjacency: Vec<Vec<NodeId>>,
}

impl Graph {
    /// Builds a graph from `n` and an edge list, validating all invariants.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, TopologyError> {
        if n < 2 {
            return Err(TopologyError::InvalidParameters(format!(
                "need at least 2 nodes, got {n}"
            )));
        }
        let mut canonical: Vec<(NodeId, NodeId)> = Vec::new();
        for (a, b) in edges {
            for node in [a, b] {
                if node.index() >= n {
                    return Err(TopologyError::NodeOutOfRange { node, n });
                }
            }
            if a == b {
                return Err(TopologyError::SelfLoop(a));
            }
            canonical.push((a.min(b), a.max(b)));
        }
        canonical.sort_unstable();
        for w in canonical.windows(2) {
            if w[0] == w[1] {
                return Err(TopologyError::DuplicateEdge { a: w[0].0, b: w[0].1 });
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &canonical {
            adjacency[a.index()].push(b);
            adjacency[b.index()].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = Graph { n, edges: canonical, adjacency };
        if !g.is_connected() {
            return Err(TopologyError::Disconnected);
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list: unordered pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n as u32).map(NodeId)
    }

    /// Neighbors of `i`, ascending.
    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        &self.adjacency[i.index()]
    }

    pub fn degree(&self, i: NodeId) -> usize {
        self.adjacency[i.index()].len()
    }

    /// Maximum degree over all nodes (the network's Δ).
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.adjacency[i.index()].binary_search(&j).is_ok()
    }

    /// The pairwise maximum degree `D_ij = max(|N_i|, |N_j|)` of an edge.
    pub fn pair_degree(&self, i: NodeId, j: NodeId) -> Result<usize, TopologyError> {
        if !self.has_edge(i, j) {
            return Err(TopologyError::NotAnEdge { a: i, b: j });
        }
        Ok(self.degree(i).max(self.degree(j)))
    }

    /// Neighbor list of `i` paired with `D_ij`, as the protocol constructors expect.
    pub fn neighbor_pair_degrees(&self, i: NodeId) -> Vec<(NodeId, usize)> {
        self.neighbors(i)
            .iter()
            .map(|&j| (j, self.degree(i).max(self.degree(j))))
            .collect()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![NodeId(0)];
        seen[0] = true;
        let mut visited = 1;
        while let Some(i) = stack.pop() {
            for &j in self.neighbors(i) {
                if !seen[j.index()] {
                    seen[j.index()] = true;
                    visited += 1;
                    stack.push(j);
                }
            }
        }
        visited == self.n
    }
}

const ER_MAX_ATTEMPTS: u32 = 1000;

/// Generates a connected G(n, m) Erdős–Rényi graph: exactly `m` edges drawn
/// uniformly among m-subsets of the possible edges, rejection-sampled until
/// connected. Deterministic for fixed `(n, m, seed)` (ChaCha8 stream).
pub fn generate_er(n: usize, m: usize, seed: u64) -> Result<Graph, TopologyError> {
    if n < 2 {
        return Err(TopologyError::InvalidParameters(format!(
            "need at least 2 nodes, got {n}"
        )));
    }
    let total = n as u64 * (n as u64 - 1) / 2;
    if (m as u64) < (n as u64 - 1) || m as u64 > total {
        return Err(TopologyError::InvalidParameters(format!(
            "edge count {m} outside [{}, {total}] for {n} nodes",
            n - 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ER_MAX_ATTEMPTS {
        let picks = sample_indices(&mut rng, total, m as u64);
        let edges = picks.into_iter().map(|t| edge_from_index(n, t));
        match Graph::from_edges(n, edges) {
            Ok(g) => return Ok(g),
            Err(TopologyError::Disconnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(TopologyError::GenerationFailure { attempts: ER_MAX_ATTEMPTS })
}

/// Floyd's algorithm: a uniform `amount`-subset of `[0, total)`, returned sorted.
fn sample_indices(rng: &mut ChaCha8Rng, total: u64, amount: u64) -> Vec<u64> {
    use std::collections::BTreeSet;
    let mut chosen = BTreeSet::new();
    for j in (total - amount)..total {
        let t = rng.random_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    chosen.into_iter().collect()
}

/// Maps a linear index in `[0, n(n-1)/2)` to the pair `(i, j)`, `i < j`,
/// under lexicographic ordering of pairs.
fn edge_from_index(n: usize, t: u64) -> (NodeId, NodeId) {
    let base = |i: u64| -> u64 { i * (2 * n as u64 - i - 1) / 2 };
    let (mut lo, mut hi) = (0u64, n as u64 - 1);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if base(mid) <= t {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let i = lo;
    let j = i + 1 + (t - base(i));
    (NodeId(i as u32), NodeId(j as u32))
}

/// A graph loaded from an edge-list file, with the original file ids kept
/// so results can be reported in the caller's id space.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `original_ids[dense]` is the id that appeared in the file.
    pub original_ids: Vec<u64>,
}

impl LoadedGraph {
    /// True when the file already used dense ids `0..n-1`.
    pub fn ids_were_dense(&self) -> bool {
        self.original_ids
            .iter()
            .enumerate()
            .all(|(k, &orig)| orig == k as u64)
    }
}

/// Parses the edge-list text format: one undirected edge per line as two
/// whitespace-separated non-negative integers, `#`-prefixed comment lines
/// ignored. Arbitrary ids are remapped to dense form by sorted order, so
/// `load(save(g))` is the identity.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph, TopologyError> {
    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(TopologyError::Parse {
                    line: lineno,
                    msg: format!("expected two node ids, got {trimmed:?}"),
                })
            }
        };
        let parse = |s: &str| -> Result<u64, TopologyError> {
            s.parse().map_err(|_| TopologyError::Parse {
                line: lineno,
                msg: format!("invalid node id {s:?}"),
            })
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a == b {
            return Err(TopologyError::Parse {
                line: lineno,
                msg: format!("self-loop on node {a}"),
            });
        }
        if raw_edges.iter().any(|&(x, y)| (x, y) == (a.min(b), a.max(b))) {
            return Err(TopologyError::Parse {
                line: lineno,
                msg: format!("duplicate edge {a} {b}"),
            });
        }
        raw_edges.push((a.min(b), a.max(b)));
    }
    if raw_edges.is_empty() {
        return Err(TopologyError::InvalidParameters("no edges in input".into()));
    }
    let mut ids: Vec<u64> = raw_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let dense = |orig: u64| NodeId(ids.binary_search(&orig).unwrap() as u32);
    let graph = Graph::from_edges(ids.len(), raw_edges.iter().map(|&(a, b)| (dense(a), dense(b))))?;
    Ok(LoadedGraph { graph, original_ids: ids })
}

/// Writes the edge-list text format with dense ids, newline-terminated.
pub fn save_edge_list<W: Write>(g: &Graph, mut writer: W) -> io::Result<()> {
    for &(a, b) in g.edges() {
        writeln!(writer, "{a} {b}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(NodeId(0), NodeId(1)), (NodeId(1), NodeId(2))]).unwrap()
    }

    #[test]
    fn er_two_nodes_is_the_single_edge_graph() {
        for seed in [0, 1, 99] {
            let g = generate_er(2, 1, seed).unwrap();
            assert_eq!(g.edges(), &[(NodeId(0), NodeId(1))]);
        }
    }

    #[test]
    fn er_max_edges_is_complete_graph() {
        let g = generate_er(4, 6, 7).unwrap();
        assert_eq!(g.edge_count(), 6);
        for i in g.nodes() {
            assert_eq!(g.degree(i), 3);
        }
    }

    #[test]
    fn er_paper_scale_network() {
        let g = generate_er(1000, 5000, 1).unwrap();
        assert_eq!(g.node_count(), 1000);
        assert_eq!(g.edge_count(), 5000);
        let total_degree: usize = g.nodes().map(|i| g.degree(i)).sum();
        assert_eq!(total_degree, 2 * 5000); // average degree 10
    }

    #[test]
    fn er_is_reproducible() {
        let a = generate_er(50, 120, 42).unwrap();
        let b = generate_er(50, 120, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_er(50, 120, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn er_rejects_bad_parameters() {
        assert!(matches!(generate_er(5, 3, 0), Err(TopologyError::InvalidParameters(_))));
        assert!(matches!(generate_er(5, 11, 0), Err(TopologyError::InvalidParameters(_))));
        assert!(matches!(generate_er(1, 0, 0), Err(TopologyError::InvalidParameters(_))));
    }

    #[test]
    fn pair_degree_path() {
        let g = path3();
        assert_eq!(g.pair_degree(NodeId(0), NodeId(1)).unwrap(), 2);
        assert_eq!(g.pair_degree(NodeId(1), NodeId(0)).unwrap(), 2);
        assert!(matches!(
            g.pair_degree(NodeId(0), NodeId(2)),
            Err(TopologyError::NotAnEdge { .. })
        ));
    }

    #[test]
    fn pair_degree_complete_and_star() {
        let k4 = generate_er(4, 6, 0).unwrap();
        for &(a, b) in k4.edges() {
            assert_eq!(k4.pair_degree(a, b).unwrap(), 3);
        }
        let star = Graph::from_edges(6, (1..6).map(|leaf| (NodeId(0), NodeId(leaf)))).unwrap();
        assert_eq!(star.pair_degree(NodeId(0), NodeId(3)).unwrap(), 5);
    }

    #[test]
    fn load_basic_and_comments() {
        let g = load_edge_list("0 1\n1 2\n".as_bytes()).unwrap();
        assert_eq!(g.graph, path3());
        assert!(g.ids_were_dense());

        let g = load_edge_list("# comment\n0 1\n".as_bytes()).unwrap();
        assert_eq!(g.graph.edges(), &[(NodeId(0), NodeId(1))]);
    }

    #[test]
    fn load_rejects_self_loop_and_duplicates() {
        let err = load_edge_list("0 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TopologyError::Parse { line: 1, .. }), "{err}");
        let err = load_edge_list("0 1\n1 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TopologyError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn load_reports_line_numbers() {
        let err = load_edge_list("# header\n0 1\n2 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TopologyError::Parse { line: 3, .. }), "{err}");
        let err = load_edge_list("0 1 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TopologyError::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn load_rejects_disconnected() {
        let err = load_edge_list("0 1\n2 3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TopologyError::Disconnected));
    }

    #[test]
    fn load_remaps_sparse_ids() {
        let g = load_edge_list("10 30\n30 20\n".as_bytes()).unwrap();
        assert_eq!(g.original_ids, vec![10, 20, 30]);
        assert!(!g.ids_were_dense());
        // 10->0, 20->1, 30->2: edges (0,2) and (1,2)
        assert_eq!(g.graph.edges(), &[(NodeId(0), NodeId(2)), (NodeId(1), NodeId(2))]);
    }

    #[test]
    fn save_load_round_trip() {
        let g = generate_er(30, 60, 5).unwrap();
        let mut buf = Vec::new();
        save_edge_list(&g, &mut buf).unwrap();
        let loaded = load_edge_list(buf.as_slice()).unwrap();
        assert_eq!(loaded.graph, g);
        assert!(loaded.ids_were_dense());
    }

    #[test]
    fn edge_index_mapping_is_a_bijection() {
        let n = 13;
        let total = n as u64 * (n as u64 - 1) / 2;
        let mut seen = std::collections::HashSet::new();
        for t in 0..total {
            let (a, b) = edge_from_index(n, t);
            assert!(a < b && b.index() < n);
            assert!(seen.insert((a, b)));
        }
        assert_eq!(seen.len() as u64, total);
    }

    proptest! {
        #[test]
        fn er_degree_sum_and_symmetry(n in 3usize..40, extra in 0usize..30, seed in 0u64..1000) {
            let max_m = n * (n - 1) / 2;
            let m = (n - 1 + extra).min(max_m);
            // very sparse draws may legitimately exhaust the rejection cap;
            // either way the outcome must be reproducible
            match (generate_er(n, m, seed), generate_er(n, m, seed)) {
                (Ok(g), Ok(g2)) => {
                    let degree_sum: usize = g.nodes().map(|i| g.degree(i)).sum();
                    prop_assert_eq!(degree_sum, 2 * m);
                    for &(a, b) in g.edges() {
                        prop_assert_eq!(g.pair_degree(a, b).unwrap(), g.pair_degree(b, a).unwrap());
                    }
                    prop_assert_eq!(g, g2);
                }
                (Err(TopologyError::GenerationFailure { .. }), Err(TopologyError::GenerationFailure { .. })) => {}
                (a, b) => prop_assert!(false, "outcomes diverged: {a:?} vs {b:?}"),
            }
        }
    }
}
