//! `qnetlim`: quantum network feasibility calculators and figure data.
//!
//! Exit status: 0 on success, 2 for usage or range errors, 1 for data errors
//! (unreadable or malformed input, infeasible parameters).

mod figures;
mod table;

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qnetlim::buffersim::{run, EventKind, SimConfig};
use qnetlim::netgraph::{
    average_effective_weight, build_topology, critical_parameters, evolve, link_sparsity, matrices, rank_critical,
    read_edge_list, shortest_path, sparsity_index, total_connection_strength, write_edge_list, write_matrix_csv,
    CellKind, Network, PathStatus, StrategyKind, TopologySpec,
};
use qnetlim::repeater::{
    chain_visibility, critical_length_time_bound, floor_form_max_repeaters, max_repeaters, nqi_alpha_bound,
    ChainConfig, EntanglementMode, LinkBudget, TaskKind, TaskSpec,
};
use qnetlim::scenario::{
    airport_report, airport_yield, atmospheric_transmittance, load_airport_network, satellite_yield,
    simple_satellite_yield, AirportDataset, AtmosphereParams, SatelliteYieldParams, YieldVariant,
};
use qnetlim::{BufferError, GraphError, QStateError, RepeaterError, ScenarioError};

use table::{num, Table};

#[derive(Parser)]
#[command(name = "qnetlim", version, about = "Limits and figures of merit for quantum networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum repeater count of a linear chain of isotropic links.
    Chain(ChainArgs),
    /// Critical fibre length / storage time bound for a repeater relay.
    Tradeoff(TradeoffArgs),
    /// Upper bound on the fibre loss coefficient alpha (1/km) over a relay.
    Nqi(NqiArgs),
    /// Robustness metrics of an edge-list network.
    Graph(GraphArgs),
    /// Nodes ranked by critical parameter.
    CriticalNodes(CriticalArgs),
    /// Most probable path between two nodes.
    Path(PathArgs),
    /// Generate a standard topology as an edge list.
    Topology(TopologyArgs),
    /// Average entanglement yield of a satellite relay network.
    Satellite(SatelliteArgs),
    /// Free-space ground-satellite transmittance.
    Atmosphere(AtmosphereArgs),
    /// Airport network: link yield or dataset report.
    #[command(subcommand)]
    Airport(AirportCommand),
    /// Run the entanglement buffer simulator on a TOML config.
    Buffer(BufferArgs),
    /// Time evolution of edge probabilities.
    Evolve(EvolveArgs),
    /// Write the data behind a figure (`list` shows the ids).
    Figure(FigureArgs),
}

fn unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn open_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 1)"))
    }
}

fn p_star(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 1]"))
    }
}

fn nonneg(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} must be a finite non-negative number"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = nonneg(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err("must be positive".into())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Entanglement,
    Teleportation,
    Chsh,
    Diqkd,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntModeArg {
    Ppt,
    AppendixH,
}

#[derive(Args)]
struct ChainArgs {
    /// Visibility of each elementary link.
    #[arg(long, value_parser = unit)]
    lambda: f64,
    /// Bell-measurement success probability.
    #[arg(long, value_parser = unit, default_value_t = 1.0)]
    q: f64,
    #[arg(long, value_enum, default_value = "diqkd")]
    task: TaskArg,
    /// DI-QKD measurement angle (rad).
    #[arg(long, default_value_t = FRAC_PI_4)]
    theta: f64,
    /// Visibility threshold for `--task custom`.
    #[arg(long, value_parser = open_unit)]
    threshold: Option<f64>,
    #[arg(long, value_enum, default_value = "ppt")]
    entanglement_mode: EntModeArg,
    /// Also report the end-to-end visibility with this many repeaters.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TradeoffArgs {
    #[arg(long, value_parser = unit, default_value_t = 1.0)]
    q: f64,
    /// Source efficiency.
    #[arg(long, value_parser = unit)]
    eta_s: f64,
    /// Repeater stations.
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, value_parser = open_unit, default_value_t = 0.5)]
    p_star: f64,
    /// Fibre loss (1/km).
    #[arg(long, value_parser = positive, default_value_t = 1.0 / 22.0)]
    alpha: f64,
    /// Memory decay rate (1/s).
    #[arg(long, value_parser = nonneg, default_value_t = 1.0 / 50.0)]
    beta: f64,
    /// Storage time (s) at which to report the critical length.
    #[arg(long, value_parser = nonneg, default_value_t = 0.0)]
    t: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NqiArgs {
    /// End-to-end distance (km).
    #[arg(long, value_parser = positive)]
    length: f64,
    /// Repeater count.
    #[arg(long)]
    n: u32,
    #[arg(long, value_parser = unit, default_value_t = 1.0)]
    q: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list (`a,b,p` per line).
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = p_star, default_value_t = 0.5)]
    p_star: f64,
    /// Print the metric table (default unless only `--matrix` is given).
    #[arg(long)]
    metrics: bool,
    /// Write the effective success matrix here.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CriticalArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = p_star, default_value_t = 0.5)]
    p_star: f64,
    /// Only the first `top` nodes.
    #[arg(long)]
    top: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PathArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    #[arg(long, value_parser = p_star, default_value_t = 0.5)]
    p_star: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyKind {
    Star,
    FullMesh,
    PartialMesh,
    Circulant,
    Grid,
    Cell,
    Square1024,
}

#[derive(Clone, Copy, ValueEnum)]
enum CellArg {
    Square,
    Octagonal,
    HeavyHexagonal,
}

#[derive(Args)]
struct TopologyArgs {
    #[arg(long, value_enum)]
    kind: TopologyKind,
    /// Node count (star, meshes, circulant).
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability.
    #[arg(long, value_parser = p_star)]
    p: f64,
    /// Circulant degree.
    #[arg(long)]
    d: Option<usize>,
    /// Grid width and height.
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long, value_enum, default_value = "square")]
    cell: CellArg,
    /// Partial-mesh edges as zero-based pairs, e.g. `0-1,1-2`.
    #[arg(long)]
    edges: Option<String>,
    /// Write the edge list here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the metric table of the generated network.
    #[arg(long, requires = "out")]
    metrics: bool,
    #[arg(long, value_parser = p_star, default_value_t = 0.5)]
    p_star: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Derivation,
    Summary,
}

#[derive(Args)]
struct SatelliteArgs {
    /// Satellite links.
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, value_parser = unit, default_value_t = 0.95)]
    eta_e: f64,
    #[arg(long, value_parser = unit, default_value_t = 0.9)]
    eta_s: f64,
    #[arg(long, value_parser = unit, default_value_t = 1.0)]
    q: f64,
    /// Memory depolarising parameter.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Memory steps.
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Fibre loss (1/km).
    #[arg(long, value_parser = nonneg, default_value_t = 1.0 / 22.0)]
    alpha: f64,
    /// Total ground fibre length l_B + l_M (km).
    #[arg(long, value_parser = nonneg, default_value_t = 20.0)]
    length: f64,
    #[arg(long, value_parser = unit, default_value_t = 0.5)]
    eta_g: f64,
    #[arg(long, value_parser = unit, default_value_t = 0.5)]
    kappa_g: f64,
    #[arg(long, value_parser = unit, default_value_t = 0.0)]
    eta_crit: f64,
    #[arg(long, value_enum, default_value = "derivation")]
    variant: VariantArg,
    /// Ignore memory, source and fibre losses.
    #[arg(long)]
    simple: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AtmosphereArgs {
    /// Telescope radius (m).
    #[arg(long, value_parser = nonneg, default_value_t = 0.1)]
    r: f64,
    /// Link distance (m).
    #[arg(long, value_parser = nonneg, default_value_t = 0.0)]
    z: f64,
    /// Beam waist (m).
    #[arg(long, value_parser = positive, default_value_t = 0.0021)]
    omega0: f64,
    /// Rayleigh range (m).
    #[arg(long, value_parser = positive, default_value_t = 17.8)]
    z_r: f64,
    #[arg(long, value_parser = nonneg, default_value_t = 0.1)]
    sigma_r: f64,
    #[arg(long, value_parser = nonneg, default_value_t = 0.1)]
    fresnel: f64,
    #[arg(long, value_parser = unit, default_value_t = 0.99)]
    xi_t: f64,
    #[arg(long, value_parser = unit, default_value_t = 0.99)]
    xi_r: f64,
    #[arg(long, value_parser = unit, default_value_t = 0.5)]
    xi_as: f64,
    #[arg(long, value_parser = nonneg, default_value_t = 0.95)]
    eta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AirportCommand {
    /// Yield between airports `length` km apart with relays every `spacing` km.
    Yield {
        #[arg(long, value_parser = positive)]
        length: f64,
        #[arg(long, value_parser = positive)]
        spacing: f64,
        #[arg(long, value_parser = unit, default_value_t = 1.0)]
        q: f64,
        #[arg(long, value_parser = unit, default_value_t = 0.95)]
        eta_e: f64,
        #[arg(long, value_parser = unit, default_value_t = 0.5)]
        eta_g: f64,
        #[arg(long, value_parser = unit, default_value_t = 0.5)]
        kappa_g: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Route statistics and critical airports from airports.csv and routes.csv.
    Report {
        #[arg(long, env = "QNETLIM_DATA_DIR")]
        data_dir: PathBuf,
        #[arg(long, value_parser = p_star, default_value_t = 0.05)]
        p_star: f64,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BufferArgs {
    /// TOML configuration.
    #[arg(long)]
    config: PathBuf,
    /// Write the event trace here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-dispatch completion times.
    #[arg(long)]
    completions: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = unit)]
    w: f64,
    #[arg(long, value_parser = nonneg)]
    k: f64,
    #[arg(long, value_parser = p_star, default_value_t = 0.5)]
    p_star: f64,
    #[arg(long, default_value_t = 10)]
    steps: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    id: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Data(String),
}

macro_rules! range_is_usage {
    ($($t:ident),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                let msg = e.to_string();
                if matches!(e, $t::OutOfRange { .. }) {
                    Failure::Usage(msg)
                } else {
                    Failure::Data(msg)
                }
            }
        }
    )*};
}

range_is_usage!(RepeaterError, GraphError, ScenarioError, BufferError, QStateError);

type Res<T = ()> = Result<T, Failure>;

fn emit(out: Option<&Path>, text: &str) -> Res {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Data(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_text(p: &Path) -> Res<String> {
    std::fs::read_to_string(p).map_err(|e| Failure::Data(format!("{}: {e}", p.display())))
}

fn task_spec(a: &ChainArgs) -> Res<TaskSpec> {
    let kind = match a.task {
        TaskArg::Entanglement => TaskKind::Entanglement,
        TaskArg::Teleportation => TaskKind::Teleportation,
        TaskArg::Chsh => TaskKind::Chsh,
        TaskArg::Diqkd => TaskKind::Diqkd { theta: a.theta },
        TaskArg::Custom => TaskKind::Custom {
            threshold: a
                .threshold
                .ok_or_else(|| Failure::Usage("--task custom needs --threshold".into()))?,
        },
    };
    let mode = match a.entanglement_mode {
        EntModeArg::Ppt => EntanglementMode::PptThreshold,
        EntModeArg::AppendixH => EntanglementMode::PaperAppendixH,
    };
    Ok(TaskSpec::new(kind)?.with_entanglement_mode(mode))
}

fn chain(a: ChainArgs) -> Res {
    let task = task_spec(&a)?;
    let th = task.threshold();
    let count = max_repeaters(a.lambda, a.q, &task)?;
    let mut t = Table::new("chain")
        .param("lambda", a.lambda)
        .param("q", a.q)
        .param("task", task)
        .param("threshold", th);
    let floor = floor_form_max_repeaters(a.lambda, a.q, th)
        .map(|n| n.to_string())
        .unwrap_or_else(|| "unbounded".into());
    let mut cols = vec!["max_repeaters", "floor_form_max"];
    let mut row = vec![count.to_string(), floor];
    if let Some(n) = a.n {
        t = t.param("n", n);
        cols.push("visibility");
        row.push(num(chain_visibility(ChainConfig::new(a.lambda, a.q, n)?)));
    }
    let mut t = t.columns(&cols);
    t.row(row);
    emit(a.out.as_deref(), &t.render())
}

fn tradeoff(a: TradeoffArgs) -> Res {
    let b = critical_length_time_bound(LinkBudget {
        q: a.q,
        eta_s: a.eta_s,
        r: a.r,
        p_star: a.p_star,
    })?;
    let mut t = Table::new("tradeoff: alpha*l + beta*t < bound")
        .param("q", a.q)
        .param("eta_s", a.eta_s)
        .param("r", a.r)
        .param("p_star", a.p_star)
        .param("alpha_per_km", a.alpha)
        .param("beta_per_s", a.beta)
        .param("t_s", a.t)
        .columns(&["bound", "feasible", "critical_length_km"]);
    t.row(vec![
        num(b.bound),
        (!b.infeasible()).to_string(),
        b.critical_length(a.alpha, a.beta, a.t).map(num).unwrap_or_default(),
    ]);
    emit(a.out.as_deref(), &t.render())
}

fn nqi(a: NqiArgs) -> Res {
    let alpha = nqi_alpha_bound(a.length, a.n, a.q).map_err(|e| match e {
        RepeaterError::NoPositiveBound(m) => Failure::Data(format!("infeasible: {m}")),
        other => other.into(),
    })?;
    let mut t = Table::new("nqi: upper bound on alpha")
        .param("length_km", a.length)
        .param("n", a.n)
        .param("q", a.q)
        .columns(&["alpha_bound_per_km"]);
    t.row(vec![num(alpha)]);
    emit(a.out.as_deref(), &t.render())
}

fn metric_table(g: &Network, p: f64, source: &str) -> Res<Table> {
    let mut t = Table::new("graph metrics")
        .param("source", source)
        .param("p_star", p)
        .columns(&["metric", "value"]);
    let mut add = |k: &str, v: String| t.row(vec![k.to_string(), v]);
    add("nodes", g.node_count().to_string());
    add("edges", g.edge_count().to_string());
    for s in [StrategyKind::NonCooperative, StrategyKind::Cooperative] {
        let tag = match s {
            StrategyKind::NonCooperative => "noncoop",
            StrategyKind::Cooperative => "coop",
        };
        add(&format!("link_sparsity_{tag}"), num(link_sparsity(g, p, s)?));
        add(&format!("total_connection_strength_{tag}"), num(total_connection_strength(g, s, p)?));
        add(&format!("sparsity_index_{tag}"), num(sparsity_index(g, s, p)?));
    }
    add("average_effective_weight", num(average_effective_weight(g, p)?));
    Ok(t)
}

fn graph(a: GraphArgs) -> Res {
    let g = read_edge_list(&a.input)?;
    if let Some(m) = &a.matrix {
        let mats = matrices(&g, a.p_star)?;
        emit(Some(m), &write_matrix_csv(g.ids(), &mats.f_star))?;
    }
    if a.metrics || a.matrix.is_none() {
        let t = metric_table(&g, a.p_star, "input")?;
        emit(a.out.as_deref(), &t.render())?;
    }
    Ok(())
}

fn critical_nodes(a: CriticalArgs) -> Res {
    let g = read_edge_list(&a.input)?;
    let ranked = rank_critical(&critical_parameters(&g, a.p_star)?);
    let mut t = Table::new("critical nodes, highest nu first")
        .param("p_star", a.p_star)
        .columns(&["rank", "node", "nu", "centrality", "clustering", "neighbor_weight", "strength"]);
    for (k, r) in ranked.iter().take(a.top.unwrap_or(usize::MAX)).enumerate() {
        t.row(vec![
            (k + 1).to_string(),
            r.id.clone(),
            r.nu.value().map(num).unwrap_or_else(|| "undefined".into()),
            r.centrality.to_string(),
            num(r.clustering),
            num(r.neighbor_weight),
            num(r.strength),
        ]);
    }
    emit(a.out.as_deref(), &t.render())
}

fn path(a: PathArgs) -> Res {
    let g = read_edge_list(&a.input)?;
    let r = shortest_path(&g, &a.from, &a.to, a.p_star)?;
    let mut t = Table::new("path")
        .param("from", &a.from)
        .param("to", &a.to)
        .param("p_star", a.p_star)
        .columns(&["status", "probability", "weight_bits", "hops", "nodes"]);
    let found = r.status == PathStatus::Found;
    t.row(vec![
        if found { "found" } else { "disconnected" }.into(),
        num(r.probability),
        num(r.weight),
        if found { (r.nodes.len() - 1).to_string() } else { String::new() },
        r.nodes.iter().map(|&i| g.id(i)).collect::<Vec<_>>().join(" "),
    ]);
    emit(a.out.as_deref(), &t.render())
}

fn need<T>(v: Option<T>, flag: &str) -> Res<T> {
    v.ok_or_else(|| Failure::Usage(format!("this topology needs --{flag}")))
}

fn topology(a: TopologyArgs) -> Res {
    let spec = match a.kind {
        TopologyKind::Star => TopologySpec::Star { n: need(a.n, "n")?, p: a.p },
        TopologyKind::FullMesh => TopologySpec::FullMesh { n: need(a.n, "n")?, p: a.p },
        TopologyKind::PartialMesh => {
            let text = need(a.edges.as_deref(), "edges")?;
            let mut edges = Vec::new();
            for item in text.split(',').filter(|s| !s.trim().is_empty()) {
                let (x, y) = item
                    .split_once('-')
                    .ok_or_else(|| Failure::Usage(format!("bad edge `{item}`, expected i-j")))?;
                let parse = |s: &str| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Failure::Usage(format!("bad node index `{s}`")))
                };
                edges.push((parse(x)?, parse(y)?));
            }
            TopologySpec::PartialMesh {
                n: need(a.n, "n")?,
                edges,
                p: a.p,
            }
        }
        TopologyKind::Circulant => TopologySpec::Circulant {
            n: need(a.n, "n")?,
            d: need(a.d, "d")?,
            p: a.p,
        },
        TopologyKind::Grid => TopologySpec::Grid {
            w: need(a.w, "w")?,
            h: need(a.h, "h")?,
            p: a.p,
        },
        TopologyKind::Cell => TopologySpec::ProcessorCell {
            kind: match a.cell {
                CellArg::Square => CellKind::Square,
                CellArg::Octagonal => CellKind::Octagonal,
                CellArg::HeavyHexagonal => CellKind::HeavyHexagonal,
            },
            p: a.p,
        },
        TopologyKind::Square1024 => TopologySpec::Square1024 { p: a.p },
    };
    let g = build_topology(&spec).map_err(|e| match e {
        GraphError::InvalidTopology(m) => Failure::Usage(format!("invalid topology: {m}")),
        other => other.into(),
    })?;
    emit(a.out.as_deref(), &write_edge_list(&g))?;
    if a.metrics {
        print!("{}", metric_table(&g, a.p_star, "input")?.render());
    }
    Ok(())
}

fn satellite(a: SatelliteArgs) -> Res {
    let mut t = Table::new("satellite yield")
        .param("n", a.n)
        .param("eta_e", a.eta_e)
        .param("q", a.q)
        .param("eta_g", a.eta_g)
        .param("kappa_g", a.kappa_g);
    let y = if a.simple {
        t = t.param("form", "simple");
        simple_satellite_yield(a.n, a.eta_e, a.q, a.eta_g, a.kappa_g)?
    } else {
        let p = SatelliteYieldParams {
            n: a.n,
            eta_e: a.eta_e,
            eta_s: a.eta_s,
            q: a.q,
            p: a.p,
            s: a.s,
            alpha: a.alpha,
            l_b: a.length / 2.0,
            l_m: a.length / 2.0,
            eta_g: a.eta_g,
            kappa_g: a.kappa_g,
            eta_crit: a.eta_crit,
            variant: match a.variant {
                VariantArg::Derivation => YieldVariant::Derivation,
                VariantArg::Summary => YieldVariant::SummaryCompat,
            },
        };
        t = t
            .param("eta_s", a.eta_s)
            .param("p", a.p)
            .param("s", a.s)
            .param("alpha_per_km", a.alpha)
            .param("length_km", a.length)
            .param("eta_crit", a.eta_crit)
            .param(
                "form",
                match a.variant {
                    VariantArg::Derivation => "derivation",
                    VariantArg::Summary => "summary",
                },
            );
        satellite_yield(&p)?
    };
    let mut t = t.columns(&["yield"]);
    t.row(vec![num(y)]);
    emit(a.out.as_deref(), &t.render())
}

fn atmosphere(a: AtmosphereArgs) -> Res {
    let p = AtmosphereParams {
        omega0: a.omega0,
        z_r: a.z_r,
        z: a.z,
        r: a.r,
        sigma_r: a.sigma_r,
        fresnel: a.fresnel,
        xi_t: a.xi_t,
        xi_r: a.xi_r,
        xi_as: a.xi_as,
        eta: a.eta,
    };
    let v = atmospheric_transmittance(&p)?;
    let mut t = Table::new("atmospheric transmittance")
        .param("r_m", a.r)
        .param("z_m", a.z)
        .param("omega0_m", a.omega0)
        .param("z_r_m", a.z_r)
        .param("sigma_r", a.sigma_r)
        .param("fresnel", a.fresnel)
        .param("xi_t", a.xi_t)
        .param("xi_r", a.xi_r)
        .param("xi_as", a.xi_as)
        .param("eta", a.eta)
        .columns(&["transmittance"]);
    t.row(vec![num(v)]);
    emit(a.out.as_deref(), &t.render())
}

fn airport(cmd: AirportCommand) -> Res {
    match cmd {
        AirportCommand::Yield {
            length,
            spacing,
            q,
            eta_e,
            eta_g,
            kappa_g,
            out,
        } => {
            let y = airport_yield(length, spacing, q, eta_e, eta_g, kappa_g)?;
            let mut t = Table::new("airport link yield")
                .param("length_km", length)
                .param("spacing_km", spacing)
                .param("q", q)
                .param("eta_e", eta_e)
                .param("eta_g", eta_g)
                .param("kappa_g", kappa_g)
                .columns(&["relays", "yield"]);
            t.row(vec![((length / spacing).floor() as u64).to_string(), num(y)]);
            emit(out.as_deref(), &t.render())
        }
        AirportCommand::Report {
            data_dir,
            p_star,
            top,
            out,
        } => {
            let data = AirportDataset::load(&data_dir)?;
            let net = load_airport_network(&data)?;
            let r = airport_report(&net.network, p_star, top)?;
            let mut t = Table::new("airport network report")
                .param("data_dir", data_dir.display())
                .param("p_star", p_star)
                .param("skipped_routes", net.skipped_routes)
                .columns(&["metric", "value"]);
            let rows = [
                ("nodes", r.nodes.to_string()),
                ("edges", r.edges.to_string()),
                ("longest_route_km", num(r.longest_route_km)),
                (
                    "longest_route",
                    r.longest_pair.map(|(a, b)| format!("{a} {b}")).unwrap_or_default(),
                ),
                ("mean_route_km", num(r.mean_route_km)),
                ("link_sparsity", num(r.link_sparsity)),
                ("total_connection_strength", num(r.total_connection_strength)),
            ];
            for (k, v) in rows {
                t.row(vec![k.into(), v]);
            }
            for (k, n) in r.top_critical.iter().enumerate() {
                t.row(vec![format!("critical_{}", k + 1), format!("{} {}", n.id, n.nu)]);
            }
            emit(out.as_deref(), &t.render())
        }
    }
}

fn buffer(a: BufferArgs) -> Res {
    let cfg = SimConfig::from_toml(&read_text(&a.config)?).map_err(|e| Failure::Data(e.to_string()))?;
    let trace = run(&cfg)?;
    emit(a.out.as_deref(), &trace.to_csv())?;
    if let Some(p) = &a.completions {
        emit(Some(p), &trace.completions_csv())?;
    }
    if a.out.is_some() {
        let mut t = Table::new("buffer summary")
            .param("config", a.config.display())
            .columns(&["inserts", "dispatches", "evictions", "rejects", "residual"]);
        t.row(vec![
            trace.count(EventKind::Insert).to_string(),
            trace.count(EventKind::Dispatch).to_string(),
            trace.count(EventKind::Evict).to_string(),
            trace.count(EventKind::Reject).to_string(),
            trace.residual.to_string(),
        ]);
        print!("{}", t.render());
    }
    Ok(())
}

fn evolve_cmd(a: EvolveArgs) -> Res {
    let g = read_edge_list(&a.input)?;
    let steps = evolve(&g, a.w, a.k, a.p_star, a.steps)?;
    let mut t = Table::new("time-varying network")
        .param("w", a.w)
        .param("k", a.k)
        .param("p_star", a.p_star)
        .columns(&["t", "open_edges", "link_sparsity_coop"]);
    for s in steps {
        t.row(vec![s.t.to_string(), s.network.edge_count().to_string(), num(s.sparsity)]);
    }
    emit(a.out.as_deref(), &t.render())
}

fn figure(a: FigureArgs) -> Res {
    if a.id == "list" {
        return emit(a.out.as_deref(), &(figures::IDS.join("\n") + "\n"));
    }
    let t = figures::figure(&a.id).ok_or_else(|| {
        Failure::Usage(format!("unknown figure `{}`; known: {}", a.id, figures::IDS.join(", ")))
    })?;
    emit(a.out.as_deref(), &t.render())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Chain(a) => chain(a),
        Command::Tradeoff(a) => tradeoff(a),
        Command::Nqi(a) => nqi(a),
        Command::Graph(a) => graph(a),
        Command::CriticalNodes(a) => critical_nodes(a),
        Command::Path(a) => path(a),
        Command::Topology(a) => topology(a),
        Command::Satellite(a) => satellite(a),
        Command::Atmosphere(a) => atmosphere(a),
        Command::Airport(c) => airport(c),
        Command::Buffer(a) => buffer(a),
        Command::Evolve(a) => evolve_cmd(a),
        Command::Figure(a) => figure(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
