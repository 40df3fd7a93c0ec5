use std::collections::VecDeque;

use super::matrices::path_between;
use super::{Network, PathStatus};
use crate::error::GraphError;

/// Post-construction checks on a network built by [`construct_network`].
#[derive(Debug, Clone, PartialEq)]
pub struct DisjointCertificate {
    /// Maximum number of vertex-disjoint A→B paths.
    pub max_disjoint_paths: usize,
    /// Every A node reaches every B node.
    pub all_pairs_connected: bool,
    /// The shortest paths of the pairing `a_i → b_i` share no vertex.
    pub pairing_shortest_disjoint: bool,
}

impl DisjointCertificate {
    pub fn holds(&self, n_a: usize, n_b: usize) -> bool {
        self.max_disjoint_paths == n_a.min(n_b) && self.all_pairs_connected
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructedNetwork {
    pub network: Network,
    pub a_nodes: Vec<usize>,
    pub b_nodes: Vec<usize>,
    pub certificate: DisjointCertificate,
}

/// Complete mesh of `n_a + n_b` core nodes (`c1, …`) with every `a_i` and
/// `b_j` attached to its own core node, assigned from the end of the core.
///
/// `mesh_p[i][j]` gives the core edge probabilities (upper triangle is read)
/// and `attach_p[k]` the probability of the attachment to core node `k`.
pub fn construct_network(
    n_a: usize,
    n_b: usize,
    mesh_p: &[Vec<f64>],
    attach_p: &[f64],
) -> Result<ConstructedNetwork, GraphError> {
    if n_a == 0 || n_b == 0 {
        return Err(GraphError::InvalidTopology("both parties need at least one node".into()));
    }
    let k = n_a + n_b;
    if mesh_p.len() < k || mesh_p.iter().take(k).any(|r| r.len() < k) {
        return Err(GraphError::InvalidTopology(format!(
            "core of {k} nodes needs a {k}x{k} probability table"
        )));
    }
    if attach_p.len() < k {
        return Err(GraphError::InvalidTopology(format!(
            "core of {k} nodes needs {k} attachment probabilities"
        )));
    }
    let mut g = Network::new();
    for i in 1..=k {
        g.add_node(&format!("c{i}"))?;
    }
    for i in 0..k {
        for j in i + 1..k {
            g.add_edge_idx(i, j, mesh_p[i][j])?;
        }
    }
    let mut count = k;
    let mut a_nodes = Vec::with_capacity(n_a);
    for i in 1..=n_a {
        let v = g.add_node(&format!("a{i}"))?;
        count -= 1;
        g.add_edge_idx(v, count, attach_p[count])?;
        a_nodes.push(v);
    }
    let mut b_nodes = Vec::with_capacity(n_b);
    for j in 1..=n_b {
        let v = g.add_node(&format!("b{j}"))?;
        count -= 1;
        g.add_edge_idx(v, count, attach_p[count])?;
        b_nodes.push(v);
    }
    let certificate = certify(&g, &a_nodes, &b_nodes);
    Ok(ConstructedNetwork {
        network: g,
        a_nodes,
        b_nodes,
        certificate,
    })
}

fn certify(g: &Network, a: &[usize], b: &[usize]) -> DisjointCertificate {
    let comp = components(g);
    let all_pairs_connected = a.iter().all(|&x| b.iter().all(|&y| comp[x] == comp[y]));

    let m = a.len().min(b.len());
    let mut used = vec![false; g.node_count()];
    let mut disjoint = true;
    for i in 0..m {
        let path = path_between(g, a[i], b[i], f64::MIN_POSITIVE, None);
        if path.status != PathStatus::Found {
            disjoint = false;
            break;
        }
        for &v in &path.nodes {
            if used[v] {
                disjoint = false;
            }
            used[v] = true;
        }
    }
    DisjointCertificate {
        max_disjoint_paths: vertex_disjoint_paths(g, a, b),
        all_pairs_connected,
        pairing_shortest_disjoint: disjoint,
    }
}

fn components(g: &Network) -> Vec<usize> {
    let n = g.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut c = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut queue = VecDeque::from([s]);
        comp[s] = c;
        while let Some(u) = queue.pop_front() {
            for (v, _) in g.neighbors(u) {
                if comp[v] == usize::MAX {
                    comp[v] = c;
                    queue.push_back(v);
                }
            }
        }
        c += 1;
    }
    comp
}

/// Maximum number of vertex-disjoint paths from any node of `a` to any node
/// of `b`, by unit-capacity max-flow on the split graph.
pub(crate) fn vertex_disjoint_paths(g: &Network, a: &[usize], b: &[usize]) -> usize {
    let n = g.node_count();
    // node v -> in = 2v, out = 2v+1; source 2n, sink 2n+1
    let size = 2 * n + 2;
    let (src, sink) = (2 * n, 2 * n + 1);
    let mut cap = vec![std::collections::HashMap::<usize, i32>::new(); size];
    let add = |cap: &mut Vec<std::collections::HashMap<usize, i32>>, u: usize, v: usize, c: i32| {
        *cap[u].entry(v).or_insert(0) += c;
        cap[v].entry(u).or_insert(0);
    };
    for v in 0..n {
        add(&mut cap, 2 * v, 2 * v + 1, 1);
        for (w, _) in g.neighbors(v) {
            add(&mut cap, 2 * v + 1, 2 * w, 1);
        }
    }
    for &x in a {
        add(&mut cap, src, 2 * x, 1);
    }
    for &y in b {
        add(&mut cap, 2 * y + 1, sink, 1);
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; size];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            let mut next: Vec<usize> = cap[u].iter().filter(|(_, &c)| c > 0).map(|(&v, _)| v).collect();
            next.sort_unstable();
            for v in next {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            return flow;
        }
        let mut v = sink;
        while v != src {
            let u = prev[v];
            *cap[u].get_mut(&v).unwrap() -= 1;
            *cap[v].get_mut(&u).unwrap() += 1;
            v = u;
        }
        flow += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(k: usize, p: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
        (vec![vec![p; k]; k], vec![p; k])
    }

    #[test]
    fn two_by_two() {
        let (m, a) = uniform(4, 0.9);
        let c = construct_network(2, 2, &m, &a).unwrap();
        assert_eq!(c.network.node_count(), 8);
        assert_eq!(c.network.edge_count(), 6 + 4);
        assert_eq!(c.certificate.max_disjoint_paths, 2);
        assert!(c.certificate.holds(2, 2));
        assert!(c.certificate.pairing_shortest_disjoint);
    }

    #[test]
    fn single_pair_and_uneven() {
        let (m, a) = uniform(2, 0.8);
        let c = construct_network(1, 1, &m, &a).unwrap();
        assert_eq!(c.certificate.max_disjoint_paths, 1);
        assert!(c.certificate.holds(1, 1));
        let (m, a) = uniform(5, 0.8);
        let c = construct_network(3, 2, &m, &a).unwrap();
        assert!(c.certificate.max_disjoint_paths >= 2);
        assert!(c.certificate.holds(3, 2));
    }

    #[test]
    fn table_size_checked() {
        let (m, a) = uniform(3, 0.8);
        assert!(construct_network(2, 2, &m, &a).is_err());
        assert!(construct_network(0, 2, &m, &a).is_err());
    }
}
