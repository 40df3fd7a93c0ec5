use super::metrics::{link_sparsity, StrategyKind};
use super::{check_p_star, Network};
use crate::error::GraphError;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveStep {
    pub t: u32,
    pub network: Network,
    /// Cooperative link sparsity at this step.
    pub sparsity: f64,
}

/// Time-varying network: `p(t+1) = w e^{−kt} p(t)` while that stays above
/// `p*`; an edge that drops to `p*` or below is closed for good.
///
/// Returns the states for `t = 1, …, steps`, the first being `g` itself.
pub fn evolve(g: &Network, w: f64, k: f64, p_star: f64, steps: u32) -> Result<Vec<EvolveStep>, GraphError> {
    check_p_star(p_star)?;
    if !(w > 0.0 && w <= 1.0) {
        return Err(GraphError::OutOfRange {
            name: "w",
            value: w,
            range: "(0, 1]",
        });
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(GraphError::OutOfRange {
            name: "k",
            value: k,
            range: "[0, inf)",
        });
    }
    let mut out = Vec::with_capacity(steps as usize);
    let mut cur = g.clone();
    for t in 1..=steps {
        let sparsity = link_sparsity(&cur, p_star, StrategyKind::Cooperative)?;
        let factor = w * (-k * t as f64).exp();
        let mut next = cur.clone();
        for (i, j, p) in cur.edges() {
            let np = factor * p;
            if np > p_star {
                next.add_edge_idx(i, j, np)?;
            } else {
                next.remove_edge_idx(i, j);
            }
        }
        out.push(EvolveStep {
            t,
            network: cur,
            sparsity,
        });
        cur = next;
    }
    Ok(out)
}
