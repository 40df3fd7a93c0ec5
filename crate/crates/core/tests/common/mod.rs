//! Reference implementations used to cross-check the library.
//!
//! Everything here is deliberately naive: real 4×4 arrays instead of
//! nalgebra, exhaustive search instead of Dijkstra, a linear scan instead of
//! a heap.
#![allow(dead_code)]

use qnetlim::netgraph::Network;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type M4 = [[f64; 4]; 4];
pub type M2 = [[f64; 2]; 2];

pub fn psi_plus() -> M4 {
    let mut m = [[0.0; 4]; 4];
    for &(r, c) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[r][c] = 0.5;
    }
    m
}

pub fn fidelity_psi_plus(m: &M4) -> f64 {
    (m[0][0] + m[0][3] + m[3][0] + m[3][3]) / 2.0
}

/// Index of basis state `|a b>`.
fn ix(a: usize, b: usize) -> usize {
    2 * a + b
}

/// `ρ ↦ (1−p)ρ + p · I/2 ⊗ Tr_q ρ` on qubit `q` (0 = left).
pub fn depolarize(m: &M4, p: f64, q: usize) -> M4 {
    let mut out = [[0.0; 4]; 4];
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let keep = (1.0 - p) * m[ix(a, b)][ix(a2, b2)];
                    let mixed = if q == 0 {
                        if a == a2 {
                            0.5 * (m[ix(0, b)][ix(0, b2)] + m[ix(1, b)][ix(1, b2)])
                        } else {
                            0.0
                        }
                    } else if b == b2 {
                        0.5 * (m[ix(a, 0)][ix(a2, 0)] + m[ix(a, 1)][ix(a2, 1)])
                    } else {
                        0.0
                    };
                    out[ix(a, b)][ix(a2, b2)] = keep + p * mixed;
                }
            }
        }
    }
    out
}

/// Real Kraus set of the generalised amplitude-damping channel.
pub fn gadc_kraus(eta: f64, kappa: f64) -> Vec<M2> {
    let (e, k) = (eta.sqrt(), kappa.sqrt());
    vec![
        [[(1.0 - kappa).sqrt(), 0.0], [0.0, (1.0 - kappa).sqrt() * e]],
        [[0.0, ((1.0 - eta) * (1.0 - kappa)).sqrt()], [0.0, 0.0]],
        [[k * e, 0.0], [0.0, k]],
        [[0.0, 0.0], [(kappa * (1.0 - eta)).sqrt(), 0.0]],
    ]
}

/// `Σ_k (K on qubit q) ρ (K on qubit q)ᵀ` for a real Kraus set.
pub fn apply_local(m: &M4, kraus: &[M2], q: usize) -> M4 {
    let mut out = [[0.0; 4]; 4];
    for k in kraus {
        let full = |r: usize, c: usize| -> f64 {
            let (ra, rb, ca, cb) = (r / 2, r % 2, c / 2, c % 2);
            if q == 0 {
                if rb == cb { k[ra][ca] } else { 0.0 }
            } else if ra == ca {
                k[rb][cb]
            } else {
                0.0
            }
        };
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        acc += full(r, i) * m[i][j] * full(c, j);
                    }
                }
                out[r][c] += acc;
            }
        }
    }
    out
}

/// Ψ+ fidelity after `n` rounds of two-sided depolarising noise.
pub fn depol_fidelity(p: f64, n: u32) -> f64 {
    let mut m = psi_plus();
    for _ in 0..n {
        m = depolarize(&depolarize(&m, p, 0), p, 1);
    }
    fidelity_psi_plus(&m)
}

pub fn thermal_fidelity(eta: f64, kappa: f64) -> f64 {
    let k = gadc_kraus(eta, kappa);
    fidelity_psi_plus(&apply_local(&apply_local(&psi_plus(), &k, 0), &k, 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Finite(u32),
    Unbounded,
    None,
}

/// Counts repeaters by multiplying the visibility out one link at a time.
pub fn brute_force_repeaters(lambda: f64, q: f64, threshold: f64) -> Count {
    if lambda <= threshold {
        return Count::None;
    }
    let mut v = lambda;
    let mut n = 0u32;
    loop {
        let next = v * q * lambda;
        if next <= threshold {
            return Count::Finite(n);
        }
        if next >= v {
            return Count::Unbounded;
        }
        v = next;
        n += 1;
    }
}

/// Best product over all simple paths using edges with `p ≥ p*`, and one
/// path achieving it.
pub fn best_path(g: &Network, s: usize, t: usize, p_star: f64) -> Option<(f64, Vec<usize>)> {
    fn go(
        g: &Network,
        u: usize,
        t: usize,
        p_star: f64,
        prob: f64,
        path: &mut Vec<usize>,
        seen: &mut Vec<bool>,
        best: &mut Option<(f64, Vec<usize>)>,
    ) {
        if u == t {
            if best.as_ref().is_none_or(|b| prob > b.0) {
                *best = Some((prob, path.clone()));
            }
            return;
        }
        for (v, p) in g.neighbors(u).collect::<Vec<_>>() {
            if seen[v] || p < p_star {
                continue;
            }
            seen[v] = true;
            path.push(v);
            go(g, v, t, p_star, prob * p, path, seen, best);
            path.pop();
            seen[v] = false;
        }
    }
    let mut seen = vec![false; g.node_count()];
    seen[s] = true;
    let mut best = None;
    go(g, s, t, p_star, 1.0, &mut vec![s], &mut seen, &mut best);
    best
}

/// Random graph on `n` nodes; each pair is linked with probability
/// `density`, edge probabilities drawn from a few repeated values so that
/// ties occur.
pub fn random_graph(seed: u64, n: usize, density: f64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Network::new();
    for i in 0..n {
        g.ensure_node(&format!("v{i}"));
    }
    let pool = [0.5, 0.6, 0.7, 0.8, 0.9, 0.25];
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                let p = if rng.random_bool(0.5) {
                    pool[rng.random_range(0..pool.len())]
                } else {
                    rng.random_range(0.05..1.0)
                };
                g.add_edge_idx(i, j, p).unwrap();
            }
        }
    }
    g
}

pub fn shuffled(seed: u64, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut rng);
    v
}

/// Satellite yield as a plain product of its factors.
#[allow(clippy::too_many_arguments)]
pub fn satellite_product(
    n: u32,
    length_km: f64,
    eta_e: f64,
    eta_s: f64,
    p: f64,
    q: f64,
    eta_g: f64,
    kappa_g: f64,
) -> f64 {
    let fibre = (-length_km / 22.0).exp();
    let mut links = 1.0;
    for _ in 1..n {
        links *= eta_e * eta_e * q * eta_s;
    }
    // one memory step: two-sided depolarising written out term by term
    let memory = (1.0 - p) * (1.0 - p) + p * (2.0 - p) / 4.0;
    let thermal = (1.0 + eta_g * eta_g) / 2.0 - kappa_g * (1.0 - kappa_g) * (1.0 - eta_g) * (1.0 - eta_g);
    fibre * links * memory * thermal
}

/// One dispatched pair in the buffer replay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Served {
    pub flow: u32,
    pub tick: u64,
    pub finish: u64,
}

/// Replays a noiseless buffer: all `pairs` fidelities arrive at tick 0,
/// flows `(id, arrival, t_p, demand)` are served round-robin in id order,
/// best pair first.
pub fn replay(pairs: &[f64], flows: &[(u32, u64, u64, u32)], horizon: u64) -> Vec<Served> {
    let mut pool: Vec<f64> = pairs.to_vec();
    let mut served = vec![0u32; flows.len()];
    let mut last = vec![0u64; flows.len()];
    let mut out = Vec::new();
    let mut cursor = 0usize;
    for tick in 0..horizon {
        let active: Vec<usize> = (0..flows.len())
            .filter(|&i| flows[i].1 <= tick && served[i] < flows[i].3)
            .collect();
        if active.is_empty() {
            continue;
        }
        let first = active.iter().position(|&i| i >= cursor).unwrap_or(0);
        for k in 0..active.len() {
            if pool.is_empty() {
                break;
            }
            let i = active[(first + k) % active.len()];
            let best = (0..pool.len()).fold(0, |b, j| if pool[j] > pool[b] { j } else { b });
            pool.remove(best);
            let start = if last[i] > tick { last[i] } else { tick };
            last[i] = start + flows[i].2;
            served[i] += 1;
            cursor = i + 1;
            out.push(Served {
                flow: flows[i].0,
                tick,
                finish: last[i],
            });
        }
        if cursor >= flows.len() {
            cursor = 0;
        }
    }
    out
}
