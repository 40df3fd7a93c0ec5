//! Undirected networks whose edges carry a success probability.
//!
//! Edge weights are `−log₂ p` (bits), so a path's weight is additive and its
//! success probability is `2^{−weight}`. Node order is insertion order; it is
//! the order used for every deterministic tie-break.

mod construct;
mod evolve;
mod io;
mod matrices;
mod metrics;
mod percolation;
mod topology;

pub use construct::{construct_network, ConstructedNetwork, DisjointCertificate};
pub use evolve::{evolve, EvolveStep};
pub use io::{parse_edge_list, read_edge_list, write_edge_list, write_matrix_csv};
pub use matrices::{
    all_pairs_weights, effective_weight, f_star_row, matrices, shortest_path, EffectiveMatrices,
    PathResult, PathStatus,
};
pub use metrics::{
    average_effective_weight, centrality, centrality_all, clustering_coefficient,
    connection_strength, connection_strengths, critical_parameters, link_sparsity,
    rank_critical, sparsity_index, total_connection_strength, CriticalValue, NodeReport,
    StrategyKind,
};
pub use percolation::{critically_large_check, task_reachability, CriticallyLarge, Reachability};
pub use topology::{build_topology, CellKind, TopologySpec};

use std::collections::{BTreeMap, HashMap};

use crate::error::GraphError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Network {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeMap<usize, f64>>,
    coords: Vec<Option<(f64, f64)>>,
    edge_count: usize,
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a network from node ids and `(a, b, p)` triples over those ids.
    pub fn from_edges<S: AsRef<str>>(
        nodes: &[S],
        edges: &[(&str, &str, f64)],
    ) -> Result<Self, GraphError> {
        let mut g = Network::new();
        for n in nodes {
            g.add_node(n.as_ref())?;
        }
        for &(a, b, p) in edges {
            g.add_edge(a, b, p)?;
        }
        Ok(g)
    }

    pub fn add_node(&mut self, id: &str) -> Result<usize, GraphError> {
        if self.index.contains_key(id) {
            return Err(GraphError::DuplicateNode(id.to_string()));
        }
        Ok(self.push_node(id))
    }

    /// Returns the index of `id`, adding it if it is new.
    pub fn ensure_node(&mut self, id: &str) -> usize {
        match self.index.get(id) {
            Some(&i) => i,
            None => self.push_node(id),
        }
    }

    fn push_node(&mut self, id: &str) -> usize {
        let i = self.ids.len();
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        self.adj.push(BTreeMap::new());
        self.coords.push(None);
        i
    }

    pub fn set_coords(&mut self, i: usize, lat: f64, lon: f64) {
        self.coords[i] = Some((lat, lon));
    }

    pub fn coords(&self, i: usize) -> Option<(f64, f64)> {
        self.coords[i]
    }

    /// Adds or replaces the undirected edge `a–b`.
    pub fn add_edge(&mut self, a: &str, b: &str, p: f64) -> Result<(), GraphError> {
        let i = self.idx(a)?;
        let j = self.idx(b)?;
        self.add_edge_idx(i, j, p)
    }

    pub fn add_edge_idx(&mut self, i: usize, j: usize, p: f64) -> Result<(), GraphError> {
        if i == j {
            return Err(GraphError::SelfLoop(self.ids[i].clone()));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(GraphError::BadProbability(p));
        }
        if self.adj[i].insert(j, p).is_none() {
            self.edge_count += 1;
        }
        self.adj[j].insert(i, p);
        Ok(())
    }

    pub fn remove_edge_idx(&mut self, i: usize, j: usize) -> bool {
        let had = self.adj[i].remove(&j).is_some();
        self.adj[j].remove(&i);
        if had {
            self.edge_count -= 1;
        }
        had
    }

    pub fn idx(&self, id: &str) -> Result<usize, GraphError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(id.to_string()))
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `p_ij`, with `p_ii = 1` and `0` for a missing edge.
    pub fn p(&self, i: usize, j: usize) -> f64 {
        if i == j {
            1.0
        } else {
            self.adj[i].get(&j).copied().unwrap_or(0.0)
        }
    }

    /// Neighbours of `i` in ascending index order with their probabilities.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adj[i].iter().map(|(&j, &p)| (j, p))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Every edge once, as `(i, j, p)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (i, row) in self.adj.iter().enumerate() {
            for (&j, &p) in row.range(i + 1..) {
                out.push((i, j, p));
            }
        }
        out
    }

    /// The network induced on `keep`, in the given order.
    pub fn induced(&self, keep: &[usize]) -> Network {
        let mut g = Network::new();
        let mut map = HashMap::with_capacity(keep.len());
        for &k in keep {
            let new = g.push_node(&self.ids[k]);
            g.coords[new] = self.coords[k];
            map.insert(k, new);
        }
        for &k in keep {
            for (j, p) in self.neighbors(k) {
                if let Some(&nj) = map.get(&j) {
                    let ni = map[&k];
                    if ni < nj {
                        g.add_edge_idx(ni, nj, p).expect("edge copied from valid graph");
                    }
                }
            }
        }
        g
    }

    /// Same graph with nodes re-inserted in the order `perm` (new position →
    /// old index).
    pub fn relabeled(&self, perm: &[usize]) -> Network {
        assert_eq!(perm.len(), self.node_count());
        self.induced(perm)
    }

    /// Largest edge probability, or `None` for an edgeless graph.
    pub fn max_probability(&self) -> Option<f64> {
        self.edges().iter().map(|e| e.2).reduce(f64::max)
    }
}

pub(crate) fn check_p_star(p_star: f64) -> Result<(), GraphError> {
    if p_star > 0.0 && p_star < 1.0 {
        Ok(())
    } else {
        Err(GraphError::OutOfRange {
            name: "p_star",
            value: p_star,
            range: "(0, 1)",
        })
    }
}
