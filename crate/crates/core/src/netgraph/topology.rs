use super::Network;
use crate::error::GraphError;

/// Unit cells of superconducting processor lattices, modelled as cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    /// 4-cycle.
    Square,
    /// 8-cycle.
    Octagonal,
    /// 12-cycle.
    HeavyHexagonal,
}

impl CellKind {
    pub fn cycle_len(self) -> usize {
        match self {
            CellKind::Square => 4,
            CellKind::Octagonal => 8,
            CellKind::HeavyHexagonal => 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TopologySpec {
    /// Node 1 is the hub.
    Star { n: usize, p: f64 },
    FullMesh { n: usize, p: f64 },
    /// Edges given as zero-based index pairs.
    PartialMesh { n: usize, edges: Vec<(usize, usize)>, p: f64 },
    /// Every node linked to its `d` nearest ring neighbours; offset `k` has
    /// probability `p^k`. Odd `d` needs even `n` and adds the antipodal node
    /// with `p^{(d+1)/2}`.
    Circulant { n: usize, d: usize, p: f64 },
    /// `w × h` grid, row-major ids.
    Grid { w: usize, h: usize, p: f64 },
    ProcessorCell { kind: CellKind, p: f64 },
    /// 32 × 32 square lattice.
    Square1024 { p: f64 },
}

fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidTopology(msg.into())
}

fn numbered(n: usize) -> Network {
    let mut g = Network::new();
    for i in 1..=n {
        g.ensure_node(&i.to_string());
    }
    g
}

fn cycle(n: usize, p: f64) -> Result<Network, GraphError> {
    let mut g = numbered(n);
    for i in 0..n {
        g.add_edge_idx(i, (i + 1) % n, p)?;
    }
    Ok(g)
}

pub fn build_topology(spec: &TopologySpec) -> Result<Network, GraphError> {
    match *spec {
        TopologySpec::Star { n, p } => {
            if n < 2 {
                return Err(invalid("star needs at least 2 nodes"));
            }
            let mut g = numbered(n);
            for j in 1..n {
                g.add_edge_idx(0, j, p)?;
            }
            Ok(g)
        }
        TopologySpec::FullMesh { n, p } => {
            if n < 2 {
                return Err(invalid("mesh needs at least 2 nodes"));
            }
            let mut g = numbered(n);
            for i in 0..n {
                for j in i + 1..n {
                    g.add_edge_idx(i, j, p)?;
                }
            }
            Ok(g)
        }
        TopologySpec::PartialMesh { n, ref edges, p } => {
            let mut g = numbered(n);
            for &(a, b) in edges {
                if a >= n || b >= n {
                    return Err(invalid(format!("edge ({a}, {b}) outside {n} nodes")));
                }
                g.add_edge_idx(a, b, p)?;
            }
            Ok(g)
        }
        TopologySpec::Circulant { n, d, p } => {
            if n < 3 || d == 0 || d >= n {
                return Err(invalid(format!("circulant needs 1 <= d < n, n >= 3 (n={n}, d={d})")));
            }
            if d % 2 == 1 && n % 2 == 1 {
                return Err(invalid("odd degree needs an even node count"));
            }
            let mut g = numbered(n);
            for i in 0..n {
                for k in 1..=d / 2 {
                    g.add_edge_idx(i, (i + k) % n, p.powi(k as i32))?;
                }
                if d % 2 == 1 {
                    let j = (i + n / 2) % n;
                    if i < j {
                        g.add_edge_idx(i, j, p.powi((d as i32 + 1) / 2))?;
                    }
                }
            }
            Ok(g)
        }
        TopologySpec::Grid { w, h, p } => {
            if w == 0 || h == 0 {
                return Err(invalid("grid sides must be positive"));
            }
            let mut g = numbered(w * h);
            for r in 0..h {
                for c in 0..w {
                    let i = r * w + c;
                    if c + 1 < w {
                        g.add_edge_idx(i, i + 1, p)?;
                    }
                    if r + 1 < h {
                        g.add_edge_idx(i, i + w, p)?;
                    }
                }
            }
            Ok(g)
        }
        TopologySpec::ProcessorCell { kind, p } => cycle(kind.cycle_len(), p),
        TopologySpec::Square1024 { p } => build_topology(&TopologySpec::Grid { w: 32, h: 32, p }),
    }
}
