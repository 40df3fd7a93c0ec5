mod common;

use common::*;
use qnetlim::buffersim::{run, Arrival, FlowRequest, Producer, SimConfig};
use qnetlim::netgraph::{
    critical_parameters, matrices, parse_edge_list, shortest_path, CriticalValue, Network, PathStatus,
};
use qnetlim::qstate::{
    apply_pair_channel, bell_swap, depol_yield, fidelity_psi_plus as lib_fidelity, make_bell, make_isotropic,
    thermal_yield, BellKind, ChannelModel, DepolYieldMode,
};
use qnetlim::repeater::{max_repeaters, RepeaterCount, TaskKind, TaskSpec};
use qnetlim::scenario::{load_airport_network, satellite_yield, AirportDataset, SatelliteYieldParams};

fn grid(step: f64, hi: f64) -> Vec<f64> {
    let k = (hi / step).round() as usize;
    (0..=k).map(|i| i as f64 * step).collect()
}

#[test]
fn depolarizing_yield_matches_density_matrix() {
    for p in grid(0.1, 1.0) {
        for n in 0..=5 {
            let want = depol_fidelity(p, n);
            let got = depol_yield(p, n, DepolYieldMode::IteratedChannel);
            assert!((got - want).abs() < 1e-10, "p={p} n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn thermal_yield_matches_density_matrix() {
    for eta in grid(0.25, 1.0) {
        for kappa in grid(0.25, 1.0) {
            let want = thermal_fidelity(eta, kappa);
            assert!((thermal_yield(eta, kappa) - want).abs() < 1e-10, "{eta} {kappa}");
            let ch = ChannelModel::thermal(eta, kappa).unwrap();
            let out = apply_pair_channel(&make_bell(BellKind::PsiPlus), &ch);
            assert!((lib_fidelity(out.state()) - want).abs() < 1e-10);
        }
    }
}

#[test]
fn depolarizing_kraus_matches_direct_map() {
    for p in grid(0.1, 1.0) {
        let ch = ChannelModel::depolarizing(p).unwrap();
        let out = apply_pair_channel(&make_bell(BellKind::PsiPlus), &ch);
        assert!((lib_fidelity(out.state()) - depol_fidelity(p, 1)).abs() < 1e-12, "{p}");
    }
}

#[test]
fn swap_of_isotropic_pairs_is_isotropic() {
    for &l1 in &[0.2, 0.5, 0.8, 1.0] {
        for &l2 in &[0.1, 0.45, 0.9, 1.0] {
            for &q in &[0.0, 0.6, 1.0] {
                let a = make_isotropic(l1).unwrap();
                let b = make_isotropic(l2).unwrap();
                let out = bell_swap(&a, &b, q).unwrap();
                assert!((out.total_probability() - 1.0).abs() < 1e-12);
                let want = make_isotropic(q * l1 * l2).unwrap();
                assert!(out.corrected_state.max_abs_diff(&want) < 1e-10, "{l1} {l2} {q}");
            }
        }
    }
}

#[test]
fn repeater_counts_match_iteration() {
    let tasks = [
        TaskKind::Entanglement,
        TaskKind::Teleportation,
        TaskKind::Chsh,
        TaskKind::Diqkd { theta: std::f64::consts::FRAC_PI_4 },
    ];
    for kind in tasks {
        let spec = TaskSpec::new(kind).unwrap();
        for i in 0..=5 {
            let lambda = 0.75 + 0.05 * i as f64;
            for &q in &[0.625, 0.9, 0.95, 0.99, 1.0] {
                let want = brute_force_repeaters(lambda, q, spec.threshold());
                let got = max_repeaters(lambda, q, &spec).unwrap();
                let same = match (got, want) {
                    (RepeaterCount::Count(a), Count::Finite(b)) => a == b,
                    (RepeaterCount::Unbounded, Count::Unbounded) => true,
                    (RepeaterCount::NoneFeasible, Count::None) => true,
                    _ => false,
                };
                assert!(same, "{spec} lambda={lambda} q={q}: {got:?} vs {want:?}");
            }
        }
    }
}

#[test]
fn shortest_path_matches_enumeration() {
    for seed in 0..100u64 {
        let n = 3 + (seed % 6) as usize;
        let g = random_graph(seed, n, 0.5);
        let p_star = [0.1, 0.3, 0.5][(seed % 3) as usize];
        let m = matrices(&g, p_star).unwrap();
        for s in 0..n {
            for t in 0..n {
                if s == t {
                    continue;
                }
                let best = best_path(&g, s, t, p_star).filter(|b| b.0 >= p_star);
                let r = shortest_path(&g, g.id(s), g.id(t), p_star).unwrap();
                match best {
                    Some((prob, _)) => {
                        assert_eq!(r.status, PathStatus::Found, "seed {seed} {s}->{t}");
                        assert!((r.probability - prob).abs() < 1e-12 * prob.max(1.0), "seed {seed}");
                        let walked: f64 = r.nodes.windows(2).map(|w| g.p(w[0], w[1])).product();
                        assert!((walked - prob).abs() < 1e-12, "seed {seed}");
                        assert_eq!((r.nodes[0], *r.nodes.last().unwrap()), (s, t));
                        assert!((m.f_star[s][t] - prob).abs() < 1e-12, "seed {seed}");
                    }
                    None => {
                        assert_eq!(r.status, PathStatus::Disconnected, "seed {seed} {s}->{t}");
                        assert_eq!(m.f_star[s][t], 0.0);
                    }
                }
            }
        }
    }
}

#[test]
fn relaying_beats_weak_direct_link() {
    let g = parse_edge_list("1,2,0.198\n1,3,0.79\n3,2,0.6857\n").unwrap();
    let r = shortest_path(&g, "1", "2", 0.1).unwrap();
    assert!((r.probability - 0.541703).abs() < 1e-6);
    assert_eq!(r.nodes.len(), 3);
}

#[test]
fn critical_value_survives_relabeling() {
    let g = Network::from_edges(
        &["1", "2", "3", "4"],
        &[("1", "2", 0.5), ("2", "3", 0.5), ("3", "4", 0.5), ("4", "1", 0.5), ("1", "3", 0.5)],
    )
    .unwrap();
    let nu = |g: &Network| -> CriticalValue {
        let i = g.idx("1").unwrap();
        critical_parameters(g, 0.1).unwrap()[i].nu
    };
    assert!((nu(&g).value().unwrap() - 1.125).abs() < 1e-9);
    for seed in 0..20 {
        let h = g.relabeled(&shuffled(seed, 4));
        assert!((nu(&h).value().unwrap() - 1.125).abs() < 1e-9, "seed {seed}");
    }
}

#[test]
fn satellite_yield_matches_factor_product() {
    for n in 1..=10 {
        for &l in &[10.0, 20.0, 40.0] {
            let p = SatelliteYieldParams {
                n,
                l_b: l / 2.0,
                l_m: l / 2.0,
                ..Default::default()
            };
            let want = satellite_product(n, l, 0.95, 0.9, 0.1, 1.0, 0.5, 0.5);
            assert!((satellite_yield(&p).unwrap() - want).abs() < 1e-12, "n={n} L={l}");
        }
    }
}

const AIRPORTS: &str = include_str!("fixtures/airports_small/airports.csv");
const ROUTES: &str = include_str!("fixtures/airports_small/routes.csv");

fn shuffle_lines(text: &str, seed: u64) -> String {
    let mut lines: Vec<&str> = text.lines().collect();
    let body = lines.split_off(1);
    let order = shuffled(seed, body.len());
    for i in order {
        lines.push(body[i]);
    }
    lines.join("\n") + "\n"
}

#[test]
fn airport_loader_ignores_row_order() {
    let base = load_airport_network(&AirportDataset::parse(AIRPORTS, ROUTES).unwrap()).unwrap();
    assert_eq!(base.network.node_count(), 8);
    assert_eq!(base.network.edge_count(), 9);
    assert_eq!(base.skipped_routes, 1);
    for seed in 0..5 {
        let data = AirportDataset::parse(&shuffle_lines(AIRPORTS, seed), &shuffle_lines(ROUTES, seed + 7)).unwrap();
        let net = load_airport_network(&data).unwrap();
        assert_eq!(net.network, base.network, "seed {seed}");
    }
}

#[test]
fn airport_loader_reports_bad_lines() {
    let bad = AIRPORTS.replacen("51.47", "north", 1);
    let err = AirportDataset::parse(&bad, ROUTES).unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
    let short = format!("{ROUTES}5\n");
    assert!(AirportDataset::parse(AIRPORTS, &short).is_err());
}

#[test]
fn buffer_finish_times_match_replay() {
    let fidelities = [0.97, 0.81, 0.9, 0.99, 0.85, 0.93, 0.88, 0.95, 0.8, 0.91, 0.86, 0.98, 0.83, 0.94, 0.89];
    let flows = [(0u32, 0u64, 3u64, 5u32), (1, 2, 1, 5), (2, 4, 2, 5)];
    let horizon = 30;
    let cfg = SimConfig {
        capacity: 16,
        p_mem: 0.0,
        eta_crit: 0.0,
        horizon: horizon as i64,
        decay: Default::default(),
        service: Default::default(),
        producers: vec![Producer {
            id: 0,
            arrivals: fidelities.iter().map(|&fidelity| Arrival { tick: 0, fidelity }).collect(),
        }],
        flows: flows
            .iter()
            .map(|&(id, arrival, t_p, demand)| FlowRequest {
                id,
                arrival,
                t_p,
                demand,
            })
            .collect(),
    };
    let trace = run(&cfg).unwrap();
    let want = replay(&fidelities, &flows, horizon);
    assert_eq!(trace.completions.len(), 15);
    let got: Vec<Served> = trace
        .completions
        .iter()
        .map(|c| Served {
            flow: c.flow_id,
            tick: c.dispatch_tick,
            finish: c.finish_tick,
        })
        .collect();
    assert_eq!(got, want);
    assert_eq!(run(&cfg).unwrap().to_csv(), trace.to_csv());
}
