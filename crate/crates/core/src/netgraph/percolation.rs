use std::collections::VecDeque;

use rayon::prelude::*;

use super::matrices::f_star_row;
use super::{check_p_star, Network};
use crate::error::GraphError;

#[derive(Debug, Clone, PartialEq)]
pub struct CriticallyLarge {
    pub is_critically_large: bool,
    /// Smallest `n` with `cⁿ < p*`.
    pub n0: u32,
    /// Hop distance at or beyond which no path can reach `p*`.
    pub required_distance: u32,
    /// First pair (by index) at that distance.
    pub witness_pair: Option<(usize, usize)>,
}

/// Looks for a connected pair whose hop distance is at least
/// `⌈log p*/log c⌉ + 1`, given that every edge probability is at most `c`.
pub fn critically_large_check(g: &Network, p_star: f64, c: f64) -> Result<CriticallyLarge, GraphError> {
    check_p_star(p_star)?;
    if !(c > 0.0 && c < 1.0) {
        return Err(GraphError::OutOfRange {
            name: "c",
            value: c,
            range: "(0, 1)",
        });
    }
    if let Some(pmax) = g.max_probability() {
        if pmax > c {
            return Err(GraphError::OutOfRange {
                name: "max edge probability",
                value: pmax,
                range: "[0, c]",
            });
        }
    }
    let mut n0 = 1u32;
    while c.powi(n0 as i32) >= p_star {
        n0 += 1;
    }
    let mut m = 1u32;
    while c.powi(m as i32) > p_star {
        m += 1;
    }
    let required = m + 1;
    let n = g.node_count();
    let witness = (0..n)
        .into_par_iter()
        .filter_map(|i| {
            let d = bfs(g, i);
            (i + 1..n).find(|&j| d[j] != u32::MAX && d[j] >= required).map(|j| (i, j))
        })
        .min();
    Ok(CriticallyLarge {
        is_critically_large: witness.is_some(),
        n0,
        required_distance: required,
        witness_pair: witness,
    })
}

fn bfs(g: &Network, s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; g.node_count()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for (v, _) in g.neighbors(u) {
            if d[v] == u32::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reachability {
    /// Nodes (including itself) each node reaches with probability `≥ p*`.
    pub per_node: Vec<usize>,
    pub max_fraction: f64,
}

pub fn task_reachability(g: &Network, p_star: f64) -> Result<Reachability, GraphError> {
    check_p_star(p_star)?;
    let n = g.node_count();
    let per_node: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|i| 1 + f_star_row(g, i, p_star).iter().filter(|&&x| x > 0.0).count())
        .collect();
    let max = per_node.iter().copied().max().unwrap_or(0);
    Ok(Reachability {
        max_fraction: if n == 0 { 0.0 } else { max as f64 / n as f64 },
        per_node,
    })
}
