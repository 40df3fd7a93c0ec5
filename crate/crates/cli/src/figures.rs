//! Data series behind the paper's plots, one CSV per figure id.

use qnetlim::repeater::{
    critical_length_time_bound, f_fold_bound, floor_form_max_repeaters, EntanglementMode, LinkBudget,
    TaskKind, TaskSpec,
};
use qnetlim::scenario::{
    airport_yield, atmospheric_transmittance, satellite_yield, AtmosphereParams, SatelliteYieldParams,
};

use crate::table::{num, Table};

pub const IDS: &[&str] = &[
    "fig4", "fig7", "fig8", "fig12", "fig13", "fig17", "fig18", "fig19", "fig20", "fig21", "fig33", "fig34",
    "fig35", "fig36",
];

pub fn figure(id: &str) -> Option<Table> {
    Some(match id {
        "fig4" => floor_counts("fig4", 0.7445, &[0.95, 0.99, 1.0], 745, "diqkd"),
        "fig7" => single_repeater(),
        "fig8" => multiple_repeaters(),
        "fig12" => eta_r(),
        "fig13" => f_fold(),
        "fig17" => sat_sweep("fig17", "L", &[10.0, 20.0, 40.0], |p, v| {
            p.l_b = v / 2.0;
            p.l_m = v / 2.0;
        }),
        "fig18" => sat_sweep("fig18", "eta_s", &[0.95, 0.99, 1.0], |p, v| {
            p.eta_s = v;
            p.p = 0.95;
            p.l_b = 5.0;
            p.l_m = 5.0;
        }),
        "fig19" => sat_sweep("fig19", "q", &[0.85, 0.9, 0.95, 1.0], |p, v| p.q = v),
        "fig20" => airport_spacing("fig20", "q", &[0.85, 0.9, 0.95, 1.0], 4000, |v| (4000.0, v)),
        "fig21" => airport_spacing("fig21", "L", &[2000.0, 4000.0, 8000.0], 2000, |v| (v, 1.0)),
        "fig33" => atmosphere(),
        "fig34" => task_counts("fig34", TaskKind::Teleportation, "teleportation"),
        "fig35" => task_counts("fig35", TaskKind::Chsh, "chsh"),
        "fig36" => task_counts("fig36", TaskKind::Entanglement, "entanglement"),
        _ => return None,
    })
}

fn curve_cols(x: &str, name: &str, values: &[f64]) -> Vec<String> {
    let mut c = vec![x.to_string()];
    c.extend(values.iter().map(|v| format!("{name}={v}")));
    c
}

/// Largest `n` with `n < ⌊log(λ/γ)/log(1/(qλ))⌋`; blank when no `n`
/// qualifies or the bound is unbounded.
fn floor_counts(id: &str, threshold: f64, qs: &[f64], start_milli: u32, task: &str) -> Table {
    let mut t = Table::new(&format!("figure {id}: allowed relay stations vs lambda"))
        .param("task", task)
        .param("threshold", threshold)
        .param("q", qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" "))
        .columns(&curve_cols("lambda", "q", qs));
    for i in start_milli..=1000 {
        let lambda = i as f64 / 1000.0;
        let mut row = vec![num(lambda)];
        for &q in qs {
            let n = if lambda > threshold {
                floor_form_max_repeaters(lambda, q, threshold).filter(|&n| n >= 0)
            } else {
                None
            };
            row.push(n.map(|n| n.to_string()).unwrap_or_default());
        }
        t.row(row);
    }
    t
}

fn task_counts(id: &str, kind: TaskKind, task: &str) -> Table {
    let spec = TaskSpec::new(kind)
        .expect("fixed task")
        .with_entanglement_mode(EntanglementMode::PaperAppendixH);
    floor_counts(id, spec.threshold(), &[0.625, 0.95, 0.99], 300, task)
}

fn tradeoff_table(id: &str, what: &str, budgets: &[(String, LinkBudget)], alpha: f64, beta: f64) -> Table {
    let mut t = Table::new(&format!("figure {id}: critical storage time vs critical fibre length, {what}"))
        .param("alpha_per_km", alpha)
        .param("beta_per_s", beta)
        .param("p_star", budgets[0].1.p_star)
        .param("q", budgets[0].1.q);
    let mut cols = vec!["l_km".to_string()];
    cols.extend(budgets.iter().map(|b| b.0.clone()));
    t = t.columns(&cols);
    let bounds: Vec<_> = budgets
        .iter()
        .map(|(_, b)| critical_length_time_bound(*b).expect("fixed parameters"))
        .collect();
    for i in 0..=160 {
        let l = i as f64 / 20.0;
        let mut row = vec![num(l)];
        for b in &bounds {
            let tc = (b.bound - alpha * l) / beta;
            row.push(if tc >= 0.0 { num(tc) } else { String::new() });
        }
        t.row(row);
    }
    t
}

fn single_repeater() -> Table {
    let budgets: Vec<_> = [0.97, 0.88, 0.84]
        .iter()
        .map(|&eta_s| {
            (
                format!("eta_s={eta_s}"),
                LinkBudget {
                    q: 1.0,
                    eta_s,
                    r: 1,
                    p_star: 0.5,
                },
            )
        })
        .collect();
    tradeoff_table("fig7", "one repeater", &budgets, 1.0 / 22.0, 1.0 / 50.0)
}

fn multiple_repeaters() -> Table {
    let budgets: Vec<_> = [1, 2, 3, 4, 5]
        .iter()
        .map(|&r| {
            (
                format!("r={r}"),
                LinkBudget {
                    q: 1.0,
                    eta_s: 0.999,
                    r,
                    p_star: 0.5,
                },
            )
        })
        .collect();
    tradeoff_table("fig8", "eta_s=0.999", &budgets, 1.0 / 22.0, 1.0 / 50.0)
}

fn eta_r() -> Table {
    let fs = [1.0, 2.0, 3.0, 4.0];
    let alpha = 1.0 / 22.0;
    let mut t = Table::new("figure fig12: eta_R = exp(-alpha l / f) vs l")
        .param("alpha_per_km", alpha)
        .param("beta_per_s", 0)
        .columns(&curve_cols("l_km", "f", &fs));
    for l in 0..=100 {
        let l = l as f64;
        let mut row = vec![num(l)];
        row.extend(fs.iter().map(|f| num((-alpha * l / f).exp())));
        t.row(row);
    }
    t
}

fn f_fold() -> Table {
    let fs = [1.0, 2.0, 3.0, 4.0];
    let (alpha, beta, p_star) = (1.0 / 22.0, 1.0 / 10.0, 0.5);
    let mut t = Table::new("figure fig13: critical time vs critical length with f-fold advantage")
        .param("alpha_per_km", alpha)
        .param("beta_per_s", beta)
        .param("p_star", p_star)
        .columns(&curve_cols("l_km", "f", &fs));
    for i in 0..=128 {
        let l = i as f64 / 2.0;
        let mut row = vec![num(l)];
        for &f in &fs {
            let tc = (f_fold_bound(f, p_star).expect("fixed parameters") - alpha * l) / beta;
            row.push(if tc >= 0.0 { num(tc) } else { String::new() });
        }
        t.row(row);
    }
    t
}

fn sat_sweep(id: &str, name: &str, values: &[f64], set: impl Fn(&mut SatelliteYieldParams, f64)) -> Table {
    let base = SatelliteYieldParams::default();
    let mut t = Table::new(&format!("figure {id}: satellite network yield vs number of satellites"));
    let mut probe = base;
    set(&mut probe, values[0]);
    for (k, v) in [
        ("eta_e", probe.eta_e),
        ("eta_s", probe.eta_s),
        ("q", probe.q),
        ("p", probe.p),
        ("s", probe.s as f64),
        ("alpha_per_km", probe.alpha),
        ("L_km", probe.l_b + probe.l_m),
        ("eta_g", probe.eta_g),
        ("kappa_g", probe.kappa_g),
    ] {
        if k.trim_end_matches("_km") != name && k != name {
            t = t.param(k, v);
        }
    }
    t = t.columns(&curve_cols("n", name, values));
    for n in 1..=20u32 {
        let mut row = vec![n.to_string()];
        for &v in values {
            let mut p = base;
            set(&mut p, v);
            p.n = n;
            row.push(num(satellite_yield(&p).expect("fixed parameters")));
        }
        t.row(row);
    }
    t
}

fn airport_spacing(id: &str, name: &str, values: &[f64], max_l0: u32, lq: impl Fn(f64) -> (f64, f64)) -> Table {
    let mut t = Table::new(&format!("figure {id}: airport link yield vs node spacing L0"))
        .param("eta_e", 0.95)
        .param("eta_g", 0.5)
        .param("kappa_g", 0.5);
    t = if name == "q" { t.param("L_km", 4000) } else { t.param("q", 1) };
    t = t.columns(&curve_cols("L0_km", name, values));
    for l0 in (100..=max_l0).step_by(50) {
        let l0 = l0 as f64;
        let mut row = vec![num(l0)];
        for &v in values {
            let (len, q) = lq(v);
            row.push(num(airport_yield(len, l0, q, 0.95, 0.5, 0.5).expect("L0 <= L")));
        }
        t.row(row);
    }
    t
}

fn atmosphere() -> Table {
    let zs = [0.0, 250.0, 500.0, 1000.0];
    let d = AtmosphereParams::default();
    let mut t = Table::new("figure fig33: free-space transmittance vs telescope radius")
        .param("omega0_m", d.omega0)
        .param("z_r_m", d.z_r)
        .param("sigma_r", d.sigma_r)
        .param("fresnel", d.fresnel)
        .param("xi_r", d.xi_r)
        .param("xi_t", d.xi_t)
        .param("xi_as", d.xi_as)
        .param("eta", d.eta)
        .columns(&curve_cols("r_m", "z_m", &zs));
    for i in 0..=150 {
        let r = i as f64 / 500.0;
        let mut row = vec![num(r)];
        for &z in &zs {
            let p = AtmosphereParams { r, z, ..d };
            row.push(num(atmospheric_transmittance(&p).expect("fixed parameters")));
        }
        t.row(row);
    }
    t
}
