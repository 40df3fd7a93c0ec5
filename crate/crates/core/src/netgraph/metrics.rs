use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use super::matrices::{dijkstra, f_star_row, next_hops};
use super::{check_p_star, Network};
use crate::error::GraphError;

/// Whether interior nodes may relay (`Cooperative`) or only direct edges
/// count (`NonCooperative`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    NonCooperative,
    Cooperative,
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyKind::NonCooperative => "non-cooperative",
            StrategyKind::Cooperative => "cooperative",
        })
    }
}

fn direct_row(g: &Network, i: usize, p_star: f64) -> Vec<(usize, f64)> {
    g.neighbors(i).filter(|&(_, p)| p >= p_star).collect()
}

/// `1 − n*/N²`, `n*` the number of off-diagonal pairs usable under the
/// strategy.
pub fn link_sparsity(g: &Network, p_star: f64, strategy: StrategyKind) -> Result<f64, GraphError> {
    check_p_star(p_star)?;
    let n = g.node_count();
    if n == 0 {
        return Ok(1.0);
    }
    let count: usize = match strategy {
        StrategyKind::NonCooperative => {
            2 * g.edges().iter().filter(|e| e.2 >= p_star).count()
        }
        StrategyKind::Cooperative => (0..n)
            .into_par_iter()
            .map(|i| f_star_row(g, i, p_star).iter().filter(|&&x| x > 0.0).count())
            .sum(),
    };
    Ok(1.0 - count as f64 / (n as f64 * n as f64))
}

/// Connection strength of every node, `(Σ_{j≠i} x_ij [+1]) / N`.
pub fn connection_strengths(
    g: &Network,
    strategy: StrategyKind,
    p_star: f64,
    include_self: bool,
) -> Result<Vec<f64>, GraphError> {
    check_p_star(p_star)?;
    let n = g.node_count() as f64;
    let extra = if include_self { 1.0 } else { 0.0 };
    Ok((0..g.node_count())
        .into_par_iter()
        .map(|i| {
            let sum: f64 = match strategy {
                StrategyKind::NonCooperative => direct_row(g, i, p_star).iter().map(|e| e.1).sum(),
                StrategyKind::Cooperative => f_star_row(g, i, p_star).iter().sum(),
            };
            (sum + extra) / n
        })
        .collect())
}

pub fn connection_strength(
    g: &Network,
    v: &str,
    strategy: StrategyKind,
    p_star: f64,
    include_self: bool,
) -> Result<f64, GraphError> {
    check_p_star(p_star)?;
    let i = g.idx(v)?;
    let sum: f64 = match strategy {
        StrategyKind::NonCooperative => direct_row(g, i, p_star).iter().map(|e| e.1).sum(),
        StrategyKind::Cooperative => f_star_row(g, i, p_star).iter().sum(),
    };
    let extra = if include_self { 1.0 } else { 0.0 };
    Ok((sum + extra) / g.node_count() as f64)
}

pub fn total_connection_strength(g: &Network, strategy: StrategyKind, p_star: f64) -> Result<f64, GraphError> {
    Ok(connection_strengths(g, strategy, p_star, false)?.iter().sum())
}

/// Lorenz-style concentration of connection strength.
///
/// Nodes are sorted by ascending strength, the cumulative share is integrated
/// with the trapezoid rule over `N` equal steps, and the area is divided by
/// the area under the diagonal (`1/2`). Uniform strength gives 1.
pub fn sparsity_index(g: &Network, strategy: StrategyKind, p_star: f64) -> Result<f64, GraphError> {
    let mut z = connection_strengths(g, strategy, p_star, false)?;
    Ok(lorenz_ratio(&mut z))
}

pub(crate) fn lorenz_ratio(z: &mut [f64]) -> f64 {
    let total: f64 = z.iter().sum();
    if z.is_empty() || total <= 0.0 {
        return 0.0;
    }
    z.sort_by(f64::total_cmp);
    let step = 1.0 / z.len() as f64;
    let mut prev = 0.0;
    let mut cum = 0.0;
    let mut area = 0.0;
    for x in z.iter() {
        cum += x;
        let y = cum / total;
        area += 0.5 * (prev + y) * step;
        prev = y;
    }
    area / 0.5
}

/// `2e_i / (n_i(n_i − 1))` over the neighbours of `v`; `e_i` counts only
/// neighbour–neighbour edges with `p ≥ p*`.
pub fn clustering_coefficient(g: &Network, v: &str, p_star: f64) -> Result<f64, GraphError> {
    check_p_star(p_star)?;
    Ok(clustering_idx(g, g.idx(v)?, p_star))
}

fn clustering_idx(g: &Network, i: usize, p_star: f64) -> f64 {
    let nb: Vec<usize> = g.neighbors(i).map(|e| e.0).collect();
    let k = nb.len();
    if k < 2 {
        return 0.0;
    }
    let mut e = 0usize;
    for (a, &u) in nb.iter().enumerate() {
        for &w in &nb[a + 1..] {
            if g.p(u, w) >= p_star {
                e += 1;
            }
        }
    }
    2.0 * e as f64 / (k * (k - 1)) as f64
}

/// Mean shortest-path weight (bits) over ordered pairs; `+∞` if any pair is
/// not connected at `p*`.
pub fn average_effective_weight(g: &Network, p_star: f64) -> Result<f64, GraphError> {
    check_p_star(p_star)?;
    let n = g.node_count();
    if n < 2 {
        return Err(GraphError::OutOfRange {
            name: "node count",
            value: n as f64,
            range: "[2, inf)",
        });
    }
    let mut sum = 0.0;
    for i in 0..n {
        let sp = dijkstra(g, i, p_star, None);
        for (j, &d) in sp.dist.iter().enumerate() {
            if j == i {
                continue;
            }
            if d.is_infinite() || (-d).exp2() < p_star {
                return Ok(f64::INFINITY);
            }
            sum += d;
        }
    }
    Ok(sum / (n * (n - 1)) as f64)
}

/// How many node pairs route through each node as an interior hop.
///
/// Each unordered connected pair contributes its single deterministic path,
/// read from the endpoint with the smaller id.
pub fn centrality_all(g: &Network, p_star: f64) -> Result<Vec<u64>, GraphError> {
    check_p_star(p_star)?;
    let n = g.node_count();
    let counts = (0..n)
        .into_par_iter()
        .map(|t| {
            let mut local = vec![0u64; n];
            let sp = dijkstra(g, t, p_star, None);
            let next = next_hops(g, &sp, p_star, None);
            for s in (0..n).filter(|&s| g.id(s) < g.id(t)) {
                let d = sp.dist[s];
                if d.is_infinite() || (-d).exp2() < p_star {
                    continue;
                }
                let mut u = next[s].expect("reachable");
                while u != t {
                    local[u] += 1;
                    u = next[u].expect("reachable");
                }
            }
            local
        })
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(counts)
}

pub fn centrality(g: &Network, v: &str, p_star: f64) -> Result<u64, GraphError> {
    let i = g.idx(v)?;
    Ok(centrality_all(g, p_star)?[i])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalValue {
    Defined(f64),
    /// Zero clustering, or a neighbour-subgraph weight of 0 or `+∞`.
    Undefined,
}

impl CriticalValue {
    pub fn value(&self) -> Option<f64> {
        match *self {
            CriticalValue::Defined(v) => Some(v),
            CriticalValue::Undefined => None,
        }
    }
}

impl fmt::Display for CriticalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalValue::Defined(v) => write!(f, "{v}"),
            CriticalValue::Undefined => f.write_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeReport {
    pub index: usize,
    pub id: String,
    pub clustering: f64,
    pub centrality: u64,
    /// Cooperative connection strength without the self term.
    pub strength: f64,
    /// Average effective weight of the neighbour subgraph.
    pub neighbor_weight: f64,
    pub nu: CriticalValue,
}

/// `ν_i = τ_i / (C_i · w̃*(G_i))` for every node, in node order.
pub fn critical_parameters(g: &Network, p_star: f64) -> Result<Vec<NodeReport>, GraphError> {
    let tau = centrality_all(g, p_star)?;
    let strength = connection_strengths(g, StrategyKind::Cooperative, p_star, false)?;
    let reports = (0..g.node_count())
        .into_par_iter()
        .map(|i| {
            let c = clustering_idx(g, i, p_star);
            let nb: Vec<usize> = g.neighbors(i).map(|e| e.0).collect();
            let w = if nb.len() >= 2 {
                average_effective_weight(&g.induced(&nb), p_star).expect("p_star checked")
            } else {
                f64::INFINITY
            };
            let nu = if c > 0.0 && w > 0.0 && w.is_finite() {
                CriticalValue::Defined(tau[i] as f64 / (c * w))
            } else {
                CriticalValue::Undefined
            };
            NodeReport {
                index: i,
                id: g.id(i).to_string(),
                clustering: c,
                centrality: tau[i],
                strength: strength[i],
                neighbor_weight: w,
                nu,
            }
        })
        .collect();
    Ok(reports)
}

/// Defined values descending, then undefined; ties by centrality descending,
/// then node index.
pub fn rank_critical(reports: &[NodeReport]) -> Vec<NodeReport> {
    let mut out = reports.to_vec();
    out.sort_by(|a, b| {
        let primary = match (a.nu, b.nu) {
            (CriticalValue::Defined(x), CriticalValue::Defined(y)) => y.total_cmp(&x),
            (CriticalValue::Defined(_), CriticalValue::Undefined) => Ordering::Less,
            (CriticalValue::Undefined, CriticalValue::Defined(_)) => Ordering::Greater,
            (CriticalValue::Undefined, CriticalValue::Undefined) => Ordering::Equal,
        };
        primary
            .then_with(|| b.centrality.cmp(&a.centrality))
            .then_with(|| a.index.cmp(&b.index))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_with_diagonal() -> Network {
        Network::from_edges(
            &["1", "2", "3", "4"],
            &[
                ("1", "2", 0.5),
                ("2", "3", 0.5),
                ("3", "4", 0.5),
                ("4", "1", 0.5),
                ("1", "3", 0.5),
            ],
        )
        .unwrap()
    }

    fn star(n: usize, p: f64) -> Network {
        let ids: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut g = Network::new();
        for id in &ids {
            g.add_node(id).unwrap();
        }
        for j in 1..n {
            g.add_edge_idx(0, j, p).unwrap();
        }
        g
    }

    #[test]
    fn mesh_sparsity() {
        let mut g = Network::new();
        for i in 0..6 {
            g.add_node(&i.to_string()).unwrap();
        }
        for i in 0..6 {
            for j in i + 1..6 {
                g.add_edge_idx(i, j, 0.9).unwrap();
            }
        }
        for s in [StrategyKind::NonCooperative, StrategyKind::Cooperative] {
            assert!((link_sparsity(&g, 0.5, s).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn star_strengths_and_centrality() {
        let g = star(8, 0.5);
        let hub = connection_strength(&g, "1", StrategyKind::NonCooperative, 0.1, true).unwrap();
        assert!((hub - 0.5625).abs() < 1e-12);
        assert_eq!(centrality(&g, "1", 0.1).unwrap(), 21);
        assert_eq!(centrality(&g, "2", 0.1).unwrap(), 0);
        let total = total_connection_strength(&g, StrategyKind::NonCooperative, 0.1).unwrap();
        assert!((total - 14.0 * 0.5 / 8.0).abs() < 1e-12);
        assert_eq!(
            total_connection_strength(&star(1, 0.5), StrategyKind::Cooperative, 0.1).unwrap(),
            0.0
        );
    }

    #[test]
    fn lorenz_extremes() {
        assert!((lorenz_ratio(&mut [0.3; 8]) - 1.0).abs() < 1e-12);
        let mut point = [0.0; 8];
        point[3] = 1.0;
        assert!((lorenz_ratio(&mut point) - 0.125).abs() < 1e-12);
        assert_eq!(lorenz_ratio(&mut [0.0; 4]), 0.0);
    }

    #[test]
    fn clustering_examples() {
        let tri = Network::from_edges(
            &["a", "b", "c"],
            &[("a", "b", 0.9), ("b", "c", 0.9), ("a", "c", 0.9)],
        )
        .unwrap();
        assert_eq!(clustering_coefficient(&tri, "a", 0.5).unwrap(), 1.0);
        let g = Network::from_edges(
            &["h", "x", "y", "z"],
            &[("h", "x", 0.9), ("h", "y", 0.9), ("h", "z", 0.9), ("x", "y", 0.9), ("y", "z", 0.2)],
        )
        .unwrap();
        assert!((clustering_coefficient(&g, "h", 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(clustering_coefficient(&g, "z", 0.5).unwrap(), 1.0);
        let leaf = star(3, 0.9);
        assert_eq!(clustering_coefficient(&leaf, "2", 0.5).unwrap(), 0.0);
    }

    #[test]
    fn average_weight_examples() {
        let two = Network::from_edges(&["a", "b"], &[("a", "b", 0.5)]).unwrap();
        assert_eq!(average_effective_weight(&two, 0.25).unwrap(), 1.0);
        let path = Network::from_edges(&["2", "3", "4"], &[("2", "3", 0.5), ("3", "4", 0.5)]).unwrap();
        assert!((average_effective_weight(&path, 1e-9).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        let split = Network::from_edges(&["a", "b", "c"], &[("a", "b", 0.5)]).unwrap();
        assert!(average_effective_weight(&split, 0.25).unwrap().is_infinite());
    }

    #[test]
    fn worked_critical_parameter() {
        let g = square_with_diagonal();
        let r = critical_parameters(&g, 0.1).unwrap();
        assert_eq!(r[0].centrality, 1);
        assert!((r[0].clustering - 2.0 / 3.0).abs() < 1e-12);
        assert!((r[0].neighbor_weight - 4.0 / 3.0).abs() < 1e-12);
        assert!((r[0].nu.value().unwrap() - 1.125).abs() < 1e-12);
        let ranked = rank_critical(&r);
        assert_eq!(ranked[0].id, "1");
    }

    #[test]
    fn undefined_guards() {
        let leaf = star(4, 0.9);
        let r = critical_parameters(&leaf, 0.5).unwrap();
        assert_eq!(r[1].nu, CriticalValue::Undefined);
        // hub with clustered neighbours at p = 1: zero neighbour weight
        let g = Network::from_edges(
            &["h", "a", "b"],
            &[("h", "a", 0.9), ("h", "b", 0.9), ("a", "b", 1.0)],
        )
        .unwrap();
        let r = critical_parameters(&g, 0.5).unwrap();
        assert_eq!(r[0].nu, CriticalValue::Undefined);
        let ranked = rank_critical(&r);
        assert_eq!(ranked.last().unwrap().id, "h");
    }
}
