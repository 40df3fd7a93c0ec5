//! Linear repeater chains of isotropic links.
//!
//! A chain of `n` repeaters joins `n + 1` links of visibility `λ` through `n`
//! Bell measurements of success probability `q`, which leaves the end nodes
//! with an isotropic state of visibility `q^n λ^{n+1}`. All logarithms in this
//! module are natural.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;

use crate::error::RepeaterError;
use crate::qstate::{depol_yield, DepolYieldMode};

fn unit(name: &'static str, value: f64) -> Result<f64, RepeaterError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(RepeaterError::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

fn open_unit(name: &'static str, value: f64) -> Result<f64, RepeaterError> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(RepeaterError::OutOfRange {
            name,
            value,
            range: "(0, 1)",
        })
    }
}

/// Which threshold to use for plain entanglement distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntanglementMode {
    /// Isotropic two-qubit states are entangled iff `λ > 1/3`.
    #[default]
    PptThreshold,
    /// The looser `2/√3 − 1` threshold quoted alongside the teleportation
    /// and CHSH bounds. Kept for figure parity; it disagrees with the
    /// concurrence of isotropic states.
    PaperAppendixH,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TaskKind {
    Entanglement,
    Teleportation,
    Chsh,
    /// CHSH-based DI-QKD with measurement angle `θ ∈ (0, π/2)`.
    Diqkd { theta: f64 },
    /// Arbitrary visibility threshold in `(0, 1)`.
    Custom { threshold: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskSpec {
    pub kind: TaskKind,
    pub entanglement_mode: EntanglementMode,
}

impl TaskSpec {
    pub fn new(kind: TaskKind) -> Result<Self, RepeaterError> {
        match kind {
            TaskKind::Diqkd { theta } => {
                critical_visibility_diqkd(theta)?;
            }
            TaskKind::Custom { threshold } => {
                open_unit("threshold", threshold)?;
            }
            _ => {}
        }
        Ok(TaskSpec {
            kind,
            entanglement_mode: EntanglementMode::default(),
        })
    }

    pub fn with_entanglement_mode(mut self, mode: EntanglementMode) -> Self {
        self.entanglement_mode = mode;
        self
    }

    /// Visibility the end-to-end state must strictly exceed.
    pub fn threshold(&self) -> f64 {
        match self.kind {
            TaskKind::Entanglement => match self.entanglement_mode {
                EntanglementMode::PptThreshold => 1.0 / 3.0,
                EntanglementMode::PaperAppendixH => 2.0 / 3f64.sqrt() - 1.0,
            },
            TaskKind::Teleportation => 1.0 / 3.0,
            TaskKind::Chsh => FRAC_1_SQRT_2,
            TaskKind::Diqkd { theta } => {
                critical_visibility_diqkd(theta).expect("theta validated on construction")
            }
            TaskKind::Custom { threshold } => threshold,
        }
    }
}

impl fmt::Display for TaskSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TaskKind::Entanglement => f.write_str("entanglement"),
            TaskKind::Teleportation => f.write_str("teleportation"),
            TaskKind::Chsh => f.write_str("chsh"),
            TaskKind::Diqkd { theta } => write!(f, "diqkd(theta={theta})"),
            TaskKind::Custom { threshold } => write!(f, "custom(threshold={threshold})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConfig {
    lambda: f64,
    q: f64,
    n: u32,
}

impl ChainConfig {
    pub fn new(lambda: f64, q: f64, n: u32) -> Result<Self, RepeaterError> {
        Ok(ChainConfig {
            lambda: unit("lambda", lambda)?,
            q: unit("q", q)?,
            n,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

/// `q^n λ^{n+1}`.
pub fn chain_visibility(cfg: ChainConfig) -> f64 {
    visibility(cfg.lambda, cfg.q, cfg.n)
}

fn visibility(lambda: f64, q: f64, n: u32) -> f64 {
    q.powi(n as i32) * lambda.powi(n as i32 + 1)
}

/// `γ_L = 1/(cos θ + sin θ)`.
pub fn gamma_l(theta: f64) -> f64 {
    1.0 / (theta.cos() + theta.sin())
}

/// Critical isotropic visibility for CHSH-based DI-QKD,
/// `(γ_L + 1)/(3 − γ_L)`.
pub fn critical_visibility_diqkd(theta: f64) -> Result<f64, RepeaterError> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(RepeaterError::OutOfRange {
            name: "theta",
            value: theta,
            range: "(0, pi/2)",
        });
    }
    let g = gamma_l(theta);
    Ok((g + 1.0) / (3.0 - g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepeaterCount {
    Count(u32),
    /// `q = λ = 1`: any number of repeaters works.
    Unbounded,
    /// Even the direct link is at or below threshold.
    NoneFeasible,
}

impl fmt::Display for RepeaterCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepeaterCount::Count(n) => write!(f, "{n}"),
            RepeaterCount::Unbounded => f.write_str("unbounded"),
            RepeaterCount::NoneFeasible => f.write_str("none"),
        }
    }
}

/// Largest `n` with `q^n λ^{n+1} > threshold`.
pub fn max_repeaters(lambda: f64, q: f64, task: &TaskSpec) -> Result<RepeaterCount, RepeaterError> {
    unit("lambda", lambda)?;
    unit("q", q)?;
    Ok(max_repeaters_for_threshold(lambda, q, task.threshold()))
}

pub fn max_repeaters_for_threshold(lambda: f64, q: f64, threshold: f64) -> RepeaterCount {
    if lambda <= threshold {
        return RepeaterCount::NoneFeasible;
    }
    if q * lambda >= 1.0 {
        return RepeaterCount::Unbounded;
    }
    if q == 0.0 {
        return RepeaterCount::Count(0);
    }
    let x = (lambda / threshold).ln() / -(q * lambda).ln();
    let mut n = (x.ceil() - 1.0).clamp(0.0, u32::MAX as f64 - 1.0) as u32;
    while visibility(lambda, q, n + 1) > threshold {
        n += 1;
    }
    while n > 0 && visibility(lambda, q, n) <= threshold {
        n -= 1;
    }
    RepeaterCount::Count(n)
}

/// `⌊log(λ/γ)/log(1/(qλ))⌋`, the strict upper bound on `n` in the
/// floor-placed form of the repeater bound. `None` when `qλ = 1`.
pub fn floor_form_bound(lambda: f64, q: f64, threshold: f64) -> Option<i64> {
    let ql = q * lambda;
    if ql >= 1.0 {
        return None;
    }
    if ql <= 0.0 {
        return Some(if lambda > threshold { 1 } else { 0 });
    }
    let x = (lambda / threshold).ln() / (1.0 / ql).ln();
    Some(x.floor() as i64)
}

/// Largest `n` admitted by the floor form (`n < F`); `-1` if none is.
pub fn floor_form_max_repeaters(lambda: f64, q: f64, threshold: f64) -> Option<i64> {
    floor_form_bound(lambda, q, threshold).map(|f| (f - 1).max(-1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Open { lo: f64, hi: f64 },
    Empty,
}

/// Visibilities for which a single link supports DI-QKD while the chain of
/// `n` repeaters does not: `(γ, min(1, (γ/q^n)^{1/(n+1)}))`.
pub fn zero_key_window(q: f64, n: u32, theta: f64) -> Result<Window, RepeaterError> {
    unit("q", q)?;
    let g = critical_visibility_diqkd(theta)?;
    let qn = q.powi(n as i32);
    let hi = if qn == 0.0 {
        1.0
    } else {
        (g / qn).powf(1.0 / (n as f64 + 1.0)).min(1.0)
    };
    if g >= hi {
        Ok(Window::Empty)
    } else {
        Ok(Window::Open { lo: g, hi })
    }
}

/// Parameters of the length/time trade-off for `r` repeaters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub q: f64,
    pub eta_s: f64,
    pub r: u32,
    pub p_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffBound {
    /// Upper bound on `α l + β t`.
    pub bound: f64,
}

impl TradeoffBound {
    /// A non-positive bound rules out even zero-length links.
    pub fn infeasible(&self) -> bool {
        !(self.bound > 0.0)
    }

    pub fn admits(&self, alpha: f64, l: f64, beta: f64, t: f64) -> bool {
        alpha * l + beta * t < self.bound
    }

    /// Critical fibre length at storage time `t`, or `None` if negative.
    pub fn critical_length(&self, alpha: f64, beta: f64, t: f64) -> Option<f64> {
        let l = (self.bound - beta * t) / alpha;
        (l >= 0.0).then_some(l)
    }
}

/// `(1/2r) ln(q^r η_s^{r+1} / p*)`.
pub fn critical_length_time_bound(budget: LinkBudget) -> Result<TradeoffBound, RepeaterError> {
    unit("q", budget.q)?;
    unit("eta_s", budget.eta_s)?;
    open_unit("p_star", budget.p_star)?;
    if budget.r == 0 {
        return Err(RepeaterError::OutOfRange {
            name: "r",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    let r = budget.r as f64;
    let num = budget.q.powf(r) * budget.eta_s.powf(r + 1.0);
    Ok(TradeoffBound {
        bound: (num / budget.p_star).ln() / (2.0 * r),
    })
}

/// `−f ln p*`: bound on `α l_c + β t_c` under an `f`-fold advantage.
pub fn f_fold_bound(f: f64, p_star: f64) -> Result<f64, RepeaterError> {
    if !(f >= 1.0) {
        return Err(RepeaterError::OutOfRange {
            name: "f",
            value: f,
            range: "[1, inf)",
        });
    }
    open_unit("p_star", p_star)?;
    Ok(-f * p_star.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarFactor {
    pub f: f64,
    pub advantage: bool,
}

/// `2 sin(π/n)` for a star repeater serving `n` users on a circle.
pub fn star_repeater_factor(n: u32) -> Result<StarFactor, RepeaterError> {
    if n < 3 {
        return Err(RepeaterError::OutOfRange {
            name: "n",
            value: n as f64,
            range: "[3, inf)",
        });
    }
    Ok(StarFactor {
        f: 2.0 * (std::f64::consts::PI / n as f64).sin(),
        advantage: n < 6,
    })
}

fn eps_check(eps: f64) -> Result<(), RepeaterError> {
    open_unit("epsilon", eps).map(|_| ())
}

/// `r L α / ln(1/ε)`.
pub fn required_f_lattice(r: f64, link_km: f64, alpha: f64, eps: f64) -> Result<f64, RepeaterError> {
    eps_check(eps)?;
    Ok(r * link_km * alpha / (1.0 / eps).ln())
}

/// `(f/α) ln(1/ε)`.
pub fn max_link_length_lattice(f: f64, alpha: f64, eps: f64) -> Result<f64, RepeaterError> {
    eps_check(eps)?;
    Ok(f / alpha * (1.0 / eps).ln())
}

/// Inputs of the DI-QKD improvement-factor estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiqkdFactorParams {
    pub alpha: f64,
    pub l: f64,
    pub t: f64,
    pub p_mem: f64,
    pub s: u32,
    pub gamma: f64,
    pub exponent_factor: f64,
}

impl Default for DiqkdFactorParams {
    fn default() -> Self {
        DiqkdFactorParams {
            alpha: 0.04,
            l: 25.0,
            t: 10.0,
            p_mem: 0.01,
            s: 1,
            gamma: 0.7445,
            exponent_factor: 1.0,
        }
    }
}

/// Smallest `f` with `η² exp(−k α l t / f) ≥ γ`, `η` the memory fidelity.
/// Infinite when the memory alone does not clear `γ`.
pub fn required_f_diqkd(p: DiqkdFactorParams) -> f64 {
    let eta = depol_yield(p.p_mem, p.s, DepolYieldMode::PaperFormula);
    let head = (eta * eta / p.gamma).ln();
    let loss = p.exponent_factor * p.alpha * p.l * p.t;
    if head < 0.0 || (head == 0.0 && loss > 0.0) {
        return f64::INFINITY;
    }
    if loss == 0.0 {
        return 0.0;
    }
    loss / head
}

/// Upper bound on fibre loss `α` (1/km) for entanglement over `L` km with
/// `n` nodes: `ln(3qⁿ)/(L(1 + 1/n))`.
pub fn nqi_alpha_bound(length_km: f64, n: u32, q: f64) -> Result<f64, RepeaterError> {
    if !(length_km > 0.0) {
        return Err(RepeaterError::OutOfRange {
            name: "L",
            value: length_km,
            range: "(0, inf)",
        });
    }
    if n == 0 {
        return Err(RepeaterError::OutOfRange {
            name: "n",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(RepeaterError::OutOfRange {
            name: "q",
            value: q,
            range: "(0, 1]",
        });
    }
    let arg = 3.0 * q.powi(n as i32);
    if arg <= 1.0 {
        return Err(RepeaterError::NoPositiveBound(format!(
            "3 q^n = {arg} does not exceed 1"
        )));
    }
    let n = n as f64;
    Ok(arg.ln() / (length_km * (1.0 + 1.0 / n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbabilityTask {
    Entanglement,
    Teleportation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalProbability {
    pub value: f64,
    /// `true` when the success probability must strictly exceed `value`.
    pub strict: bool,
}

impl CriticalProbability {
    pub fn admits(&self, p: f64) -> bool {
        if self.strict {
            p > self.value
        } else {
            p >= self.value
        }
    }
}

/// `1/d` for both tasks; teleportation needs a strict inequality.
pub fn critical_probability(task: ProbabilityTask, d: u32) -> Result<CriticalProbability, RepeaterError> {
    if d < 2 {
        return Err(RepeaterError::OutOfRange {
            name: "d",
            value: d as f64,
            range: "[2, inf)",
        });
    }
    Ok(CriticalProbability {
        value: 1.0 / d as f64,
        strict: task == ProbabilityTask::Teleportation,
    })
}
