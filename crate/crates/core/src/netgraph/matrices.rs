use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::{check_p_star, Network};
use crate::error::GraphError;

/// `−log₂ p` if `p ≥ p*`, else `+∞`.
pub fn effective_weight(p: f64, p_star: f64) -> f64 {
    if p >= p_star && p > 0.0 {
        -p.log2()
    } else {
        f64::INFINITY
    }
}

fn tol(x: f64) -> f64 {
    1e-12 * (1.0 + x.abs())
}

#[derive(Copy, Clone, PartialEq)]
struct Item {
    dist: f64,
    hops: u32,
    node: usize,
}

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed for a min-heap
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.hops.cmp(&self.hops))
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source distances over edges with `p ≥ p*`; ties in weight are
/// resolved towards fewer hops.
pub(crate) struct Sssp {
    pub dist: Vec<f64>,
    pub hops: Vec<u32>,
}

pub(crate) fn dijkstra(g: &Network, src: usize, p_star: f64, allowed: Option<&[bool]>) -> Sssp {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut hops = vec![u32::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    hops[src] = 0;
    heap.push(Item {
        dist: 0.0,
        hops: 0,
        node: src,
    });
    while let Some(Item { dist: d, hops: h, node: u }) = heap.pop() {
        if done[u] || d != dist[u] || h != hops[u] {
            continue;
        }
        done[u] = true;
        for (v, p) in g.neighbors(u) {
            if done[v] || p < p_star || allowed.is_some_and(|a| !a[v]) {
                continue;
            }
            let nd = d - p.log2();
            let nh = h + 1;
            let better = if dist[v].is_infinite() {
                true
            } else if nd < dist[v] - tol(nd) {
                true
            } else {
                (nd - dist[v]).abs() <= tol(nd) && nh < hops[v]
            };
            if better {
                dist[v] = nd;
                hops[v] = nh;
                heap.push(Item {
                    dist: nd,
                    hops: nh,
                    node: v,
                });
            }
        }
    }
    Sssp { dist, hops }
}

/// Next hop towards the Dijkstra root for every node: the neighbour with the
/// smallest id lying on a weight-minimal, hop-minimal path.
pub(crate) fn next_hops(g: &Network, sp: &Sssp, p_star: f64, allowed: Option<&[bool]>) -> Vec<Option<usize>> {
    (0..g.node_count())
        .map(|u| {
            if sp.dist[u].is_infinite() || sp.hops[u] == 0 {
                return None;
            }
            g.neighbors(u)
                .filter(|&(v, p)| {
                    if p < p_star || allowed.is_some_and(|a| !a[v]) || sp.dist[v].is_infinite() {
                        return false;
                    }
                    let via = sp.dist[v] - p.log2();
                    (via - sp.dist[u]).abs() <= tol(sp.dist[u]) && sp.hops[v] + 1 == sp.hops[u]
                })
                .map(|(v, _)| v)
                .min_by(|&a, &b| g.id(a).cmp(g.id(b)))
        })
        .collect()
}

/// Row `i` of the effective success matrix: best path probability if it is at
/// least `p*`, else 0; the diagonal is 0.
pub fn f_star_row(g: &Network, i: usize, p_star: f64) -> Vec<f64> {
    let sp = dijkstra(g, i, p_star, None);
    sp.dist
        .iter()
        .enumerate()
        .map(|(j, &d)| {
            if j == i {
                return 0.0;
            }
            let p = (-d).exp2();
            if p >= p_star {
                p
            } else {
                0.0
            }
        })
        .collect()
}

/// All-pairs shortest effective weights (bits), `+∞` where unreachable.
pub fn all_pairs_weights(g: &Network, p_star: f64) -> Vec<Vec<f64>> {
    (0..g.node_count())
        .into_par_iter()
        .map(|i| dijkstra(g, i, p_star, None).dist)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveMatrices {
    /// `−log₂ p_ij`, 0 on the diagonal, `+∞` for missing edges.
    pub a: Vec<Vec<f64>>,
    /// As `a`, with `+∞` where `p_ij < p*`.
    pub a_star: Vec<Vec<f64>>,
    /// Best path probability where it is at least `p*`, else 0; diagonal 0.
    pub f_star: Vec<Vec<f64>>,
}

pub fn matrices(g: &Network, p_star: f64) -> Result<EffectiveMatrices, GraphError> {
    check_p_star(p_star)?;
    let n = g.node_count();
    let mut a = vec![vec![f64::INFINITY; n]; n];
    let mut a_star = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        a[i][i] = 0.0;
        a_star[i][i] = 0.0;
        for (j, p) in g.neighbors(i) {
            a[i][j] = -p.log2();
            a_star[i][j] = effective_weight(p, p_star);
        }
    }
    let f_star = (0..n)
        .into_par_iter()
        .map(|i| f_star_row(g, i, p_star))
        .collect();
    Ok(EffectiveMatrices { a, a_star, f_star })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStatus {
    Found,
    Disconnected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub nodes: Vec<usize>,
    /// Sum of edge weights in bits; `+∞` when disconnected.
    pub weight: f64,
    pub probability: f64,
    pub status: PathStatus,
}

impl PathResult {
    fn disconnected() -> Self {
        PathResult {
            nodes: Vec::new(),
            weight: f64::INFINITY,
            probability: 0.0,
            status: PathStatus::Disconnected,
        }
    }
}

/// Most probable path from `source` to `target`.
///
/// Among paths of equal weight the one with fewer hops wins, then the
/// lexicographically smallest sequence of node ids.
pub fn shortest_path(g: &Network, source: &str, target: &str, p_star: f64) -> Result<PathResult, GraphError> {
    check_p_star(p_star)?;
    let s = g.idx(source)?;
    let t = g.idx(target)?;
    Ok(path_between(g, s, t, p_star, None))
}

pub(crate) fn path_between(g: &Network, s: usize, t: usize, p_star: f64, allowed: Option<&[bool]>) -> PathResult {
    let sp = dijkstra(g, t, p_star, allowed);
    if sp.dist[s].is_infinite() {
        return PathResult::disconnected();
    }
    let next = next_hops(g, &sp, p_star, allowed);
    let mut nodes = vec![s];
    let mut weight = 0.0;
    let mut probability = 1.0;
    let mut u = s;
    while u != t {
        let v = next[u].expect("reachable node has a next hop");
        let p = g.p(u, v);
        weight += -p.log2();
        probability *= p;
        nodes.push(v);
        u = v;
    }
    if probability >= p_star {
        PathResult {
            nodes,
            weight,
            probability,
            status: PathStatus::Found,
        }
    } else {
        PathResult::disconnected()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(p: f64) -> Network {
        Network::from_edges(&["1", "2", "3"], &[("1", "2", p), ("2", "3", p)]).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(effective_weight(0.5, 0.25), 1.0);
        assert!(effective_weight(0.2, 0.25).is_infinite());
        assert!((effective_weight(0.54173, 0.5) - 0.884354).abs() < 1e-6);
    }

    #[test]
    fn f_star_on_chain() {
        let m = matrices(&chain(0.8), 0.5).unwrap();
        assert!((m.f_star[0][2] - 0.64).abs() < 1e-12);
        assert_eq!(m.f_star[0][0], 0.0);
        assert!(m.a[0][2].is_infinite());
        let m = matrices(&chain(0.8), 0.7).unwrap();
        assert_eq!(m.f_star[0][2], 0.0);
        assert!((m.f_star[0][1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn indirect_route_beats_direct_edge() {
        let g = Network::from_edges(
            &["1", "2", "3"],
            &[("1", "2", 0.198), ("1", "3", 0.79), ("3", "2", 0.6857)],
        )
        .unwrap();
        let m = matrices(&g, 0.1).unwrap();
        assert!((m.f_star[0][1] - 0.541703).abs() < 1e-6);
        assert!((m.a[0][1] - -(0.198f64).log2()).abs() < 1e-12);
        let path = shortest_path(&g, "1", "2", 0.1).unwrap();
        assert_eq!(path.nodes, vec![0, 2, 1]);
    }

    #[test]
    fn path_examples() {
        let g = Network::from_edges(&["a", "b"], &[("a", "b", 0.9)]).unwrap();
        let r = shortest_path(&g, "a", "b", 0.5).unwrap();
        assert_eq!(r.status, PathStatus::Found);
        assert!((r.probability - 0.9).abs() < 1e-12);

        let g = Network::from_edges(
            &["a", "b", "c"],
            &[("a", "c", 0.7), ("a", "b", 0.9), ("b", "c", 0.9)],
        )
        .unwrap();
        let r = shortest_path(&g, "a", "c", 0.5).unwrap();
        assert_eq!(r.nodes, vec![0, 1, 2]);
        assert!((r.probability - 0.81).abs() < 1e-12);
        assert!(((-r.weight).exp2() - r.probability).abs() < 1e-12);

        let r = shortest_path(&chain(0.6), "1", "3", 0.5).unwrap();
        assert_eq!(r.status, PathStatus::Disconnected);
        assert!(shortest_path(&chain(0.6), "1", "9", 0.5).is_err());
    }

    #[test]
    fn ties_prefer_fewer_hops_then_smaller_ids() {
        // 1-2-4 and 1-3-4 tie; direct 1-4 has the same weight with one hop.
        let g = Network::from_edges(
            &["1", "2", "3", "4"],
            &[("1", "3", 0.5), ("3", "4", 0.5), ("1", "2", 0.5), ("2", "4", 0.5)],
        )
        .unwrap();
        assert_eq!(shortest_path(&g, "1", "4", 0.1).unwrap().nodes, vec![0, 1, 3]);
        let mut g2 = g.clone();
        g2.add_edge("1", "4", 0.25).unwrap();
        assert_eq!(shortest_path(&g2, "1", "4", 0.1).unwrap().nodes, vec![0, 3]);
    }
}
