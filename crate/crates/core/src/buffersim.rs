//! Discrete-time simulation of a ground-station entanglement buffer.
//!
//! Stored pairs live in a max-heap keyed by fidelity and decay under a
//! depolarising memory. Each tick runs three phases in a fixed order:
//! producer arrivals (by producer id), decay with eviction below `η_crit`, then
//! one dispatch per active flow in round-robin order.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::BufferError;
use crate::qstate::{depol_yield, DepolYieldMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayMode {
    /// `(1 + (4F₀−1)(1−p)^{2s})/4`.
    #[default]
    Iterated,
    /// Closed-form memory yield, mapped affinely for `F₀ < 1`.
    PaperFormula,
}

/// Which stored pair a flow receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ServiceMode {
    #[default]
    HighestFidelity,
    LatestFirst,
}

/// Fidelity of a pair stored for `s` ticks.
pub fn decay(f0: f64, p: f64, s: u32, mode: DecayMode) -> f64 {
    match mode {
        DecayMode::Iterated => (1.0 + (4.0 * f0 - 1.0) * (1.0 - p).powi(2 * s as i32)) / 4.0,
        DecayMode::PaperFormula => {
            let y = depol_yield(p, s, DepolYieldMode::PaperFormula);
            0.25 + (f0 - 0.25) * (y - 0.25) / 0.75
        }
    }
}

/// `max(t_f_prev, t_r) + t_p`.
pub fn finish_time(t_f_prev: u64, t_r: u64, t_p: u64) -> u64 {
    t_f_prev.max(t_r) + t_p
}

/// Ticks to move heap slot `pos` to the root: `⌈log₂(pos+1)⌉`.
pub fn sift_time(pos: usize) -> u64 {
    (pos + 1).next_power_of_two().trailing_zeros() as u64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoredPair {
    pub id: u64,
    pub insertion_tick: u64,
    pub initial_fidelity: f64,
    pub age: u32,
    pub current_fidelity: f64,
}

impl StoredPair {
    pub fn new(id: u64, tick: u64, fidelity: f64) -> Self {
        StoredPair {
            id,
            insertion_tick: tick,
            initial_fidelity: fidelity,
            age: 0,
            current_fidelity: fidelity,
        }
    }
}

/// Heap priority: fidelity, ties to the smaller id.
fn above(a: &StoredPair, b: &StoredPair) -> bool {
    match a.current_fidelity.total_cmp(&b.current_fidelity) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.id < b.id,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InsertOutcome {
    Stored,
    /// Stored after evicting the minimum entry.
    Replaced(StoredPair),
    Rejected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryHeap {
    capacity: usize,
    eta_crit: f64,
    p_mem: f64,
    mode: DecayMode,
    entries: Vec<StoredPair>,
}

impl MemoryHeap {
    pub fn new(capacity: usize, eta_crit: f64, p_mem: f64, mode: DecayMode) -> Result<Self, BufferError> {
        if capacity == 0 {
            return Err(BufferError::Capacity);
        }
        if !(0.0..=1.0).contains(&eta_crit) {
            return Err(BufferError::OutOfRange {
                name: "eta_crit",
                value: eta_crit,
                range: "[0, 1]",
            });
        }
        if !(0.0..=1.0).contains(&p_mem) {
            return Err(BufferError::OutOfRange {
                name: "p_mem",
                value: p_mem,
                range: "[0, 1]",
            });
        }
        Ok(MemoryHeap {
            capacity,
            eta_crit,
            p_mem,
            mode,
            entries: Vec::with_capacity(capacity),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Entries in heap-array order.
    pub fn entries(&self) -> &[StoredPair] {
        &self.entries
    }

    pub fn peek(&self) -> Option<&StoredPair> {
        self.entries.first()
    }

    pub fn is_heap(&self) -> bool {
        (1..self.entries.len()).all(|i| !above(&self.entries[i], &self.entries[(i - 1) / 2]))
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !above(&self.entries[i], &self.entries[parent]) {
                break;
            }
            self.entries.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.entries.len();
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < n && above(&self.entries[l], &self.entries[best]) {
                best = l;
            }
            if r < n && above(&self.entries[r], &self.entries[best]) {
                best = r;
            }
            if best == i {
                return;
            }
            self.entries.swap(i, best);
            i = best;
        }
    }

    fn remove_at(&mut self, i: usize) -> StoredPair {
        let last = self.entries.len() - 1;
        self.entries.swap(i, last);
        let out = self.entries.pop().expect("non-empty");
        if i < self.entries.len() {
            self.sift_down(i);
            self.sift_up(i);
        }
        out
    }

    fn min_index(&self) -> Option<usize> {
        (0..self.entries.len()).reduce(|m, i| if above(&self.entries[m], &self.entries[i]) { i } else { m })
    }

    pub fn insert(&mut self, pair: StoredPair) -> InsertOutcome {
        let mut outcome = InsertOutcome::Stored;
        if self.entries.len() >= self.capacity {
            let m = self.min_index().expect("full heap");
            if pair.current_fidelity <= self.entries[m].current_fidelity {
                return InsertOutcome::Rejected;
            }
            outcome = InsertOutcome::Replaced(self.remove_at(m));
        }
        self.entries.push(pair);
        self.sift_up(self.entries.len() - 1);
        outcome
    }

    pub fn extract_max(&mut self) -> Option<StoredPair> {
        (!self.entries.is_empty()).then(|| self.remove_at(0))
    }

    /// Removes the most recently inserted pair; returns it with its slot.
    pub fn extract_latest(&mut self) -> Option<(StoredPair, usize)> {
        let i = (0..self.entries.len()).max_by_key(|&i| (self.entries[i].insertion_tick, self.entries[i].id))?;
        Some((self.remove_at(i), i))
    }

    /// Ages entries inserted before `now` by one tick and returns those that
    /// fell below `η_crit`, in id order.
    pub fn tick_decay(&mut self, now: u64) -> Vec<StoredPair> {
        for e in &mut self.entries {
            if e.insertion_tick < now {
                e.age += 1;
                e.current_fidelity = decay(e.initial_fidelity, self.p_mem, e.age, self.mode);
            }
        }
        let (mut gone, keep): (Vec<_>, Vec<_>) =
            self.entries.drain(..).partition(|e| e.current_fidelity < self.eta_crit);
        self.entries = keep;
        for i in (0..self.entries.len() / 2).rev() {
            self.sift_down(i);
        }
        gone.sort_by_key(|e| e.id);
        gone
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EventKind {
    Insert,
    Decay,
    Evict,
    Dispatch,
    Reject,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Insert => "insert",
            EventKind::Decay => "decay",
            EventKind::Evict => "evict",
            EventKind::Dispatch => "dispatch",
            EventKind::Reject => "reject",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub tick: u64,
    pub kind: EventKind,
    pub pair_id: u64,
    pub flow_id: Option<u32>,
    pub fidelity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Completion {
    pub flow_id: u32,
    pub pair_id: u64,
    pub dispatch_tick: u64,
    pub ready_tick: u64,
    pub finish_tick: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimTrace {
    pub events: Vec<Event>,
    pub completions: Vec<Completion>,
    /// Pairs still stored after the last tick.
    pub residual: usize,
}

impl SimTrace {
    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("tick,event,pair_id,flow_id,fidelity\n");
        for e in &self.events {
            let flow = e.flow_id.map(|f| f.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{},{},{},{},{}", e.tick, e.kind.as_str(), e.pair_id, flow, e.fidelity);
        }
        s
    }

    pub fn completions_csv(&self) -> String {
        let mut s = String::from("flow_id,pair_id,dispatch_tick,ready_tick,finish_tick\n");
        for c in &self.completions {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                c.flow_id, c.pair_id, c.dispatch_tick, c.ready_tick, c.finish_tick
            );
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arrival {
    pub tick: u64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Producer {
    pub id: u32,
    pub arrivals: Vec<Arrival>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowRequest {
    pub id: u32,
    /// First tick the flow is served.
    pub arrival: u64,
    /// Processing time per pair.
    pub t_p: u64,
    /// Pairs wanted.
    pub demand: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub capacity: usize,
    pub p_mem: f64,
    pub eta_crit: f64,
    pub horizon: i64,
    #[serde(default)]
    pub decay: DecayMode,
    #[serde(default)]
    pub service: ServiceMode,
    #[serde(default)]
    pub producers: Vec<Producer>,
    #[serde(default)]
    pub flows: Vec<FlowRequest>,
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<Self, BufferError> {
        toml::from_str(text).map_err(|e| BufferError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), BufferError> {
        if self.horizon <= 0 {
            return Err(BufferError::Horizon);
        }
        for p in &self.producers {
            for a in &p.arrivals {
                if !(0.0..=1.0).contains(&a.fidelity) {
                    return Err(BufferError::OutOfRange {
                        name: "fidelity",
                        value: a.fidelity,
                        range: "[0, 1]",
                    });
                }
            }
        }
        MemoryHeap::new(self.capacity, self.eta_crit, self.p_mem, self.decay).map(|_| ())
    }
}

struct FlowState {
    req: FlowRequest,
    served: u32,
    last_finish: u64,
}

pub fn run(cfg: &SimConfig) -> Result<SimTrace, BufferError> {
    cfg.validate()?;
    let mut heap = MemoryHeap::new(cfg.capacity, cfg.eta_crit, cfg.p_mem, cfg.decay)?;
    let mut producers: Vec<&Producer> = cfg.producers.iter().collect();
    producers.sort_by_key(|p| p.id);
    let mut flows: Vec<FlowState> = cfg
        .flows
        .iter()
        .map(|&req| FlowState {
            req,
            served: 0,
            last_finish: 0,
        })
        .collect();
    flows.sort_by_key(|f| f.req.id);

    let mut trace = SimTrace::default();
    let mut next_id = 0u64;
    let mut rr = 0usize;
    for tick in 0..cfg.horizon as u64 {
        for p in &producers {
            for a in p.arrivals.iter().filter(|a| a.tick == tick) {
                let pair = StoredPair::new(next_id, tick, a.fidelity);
                next_id += 1;
                let ev = |kind, pair_id, fidelity| Event {
                    tick,
                    kind,
                    pair_id,
                    flow_id: None,
                    fidelity,
                };
                if a.fidelity < cfg.eta_crit {
                    trace.events.push(ev(EventKind::Reject, pair.id, a.fidelity));
                    continue;
                }
                match heap.insert(pair) {
                    InsertOutcome::Rejected => trace.events.push(ev(EventKind::Reject, pair.id, a.fidelity)),
                    InsertOutcome::Stored => trace.events.push(ev(EventKind::Insert, pair.id, a.fidelity)),
                    InsertOutcome::Replaced(old) => {
                        trace.events.push(ev(EventKind::Evict, old.id, old.current_fidelity));
                        trace.events.push(ev(EventKind::Insert, pair.id, a.fidelity));
                    }
                }
            }
        }

        let evicted = heap.tick_decay(tick);
        let mut aged: Vec<&StoredPair> = heap.entries().iter().filter(|e| e.insertion_tick < tick).collect();
        aged.extend(evicted.iter());
        aged.sort_by_key(|e| e.id);
        for e in aged {
            trace.events.push(Event {
                tick,
                kind: EventKind::Decay,
                pair_id: e.id,
                flow_id: None,
                fidelity: e.current_fidelity,
            });
        }
        for e in &evicted {
            trace.events.push(Event {
                tick,
                kind: EventKind::Evict,
                pair_id: e.id,
                flow_id: None,
                fidelity: e.current_fidelity,
            });
        }

        let active: Vec<usize> = (0..flows.len())
            .filter(|&i| flows[i].req.arrival <= tick && flows[i].served < flows[i].req.demand)
            .collect();
        if active.is_empty() {
            continue;
        }
        let start = active.iter().position(|&i| i >= rr).unwrap_or(0);
        for k in 0..active.len() {
            let i = active[(start + k) % active.len()];
            let taken = match cfg.service {
                ServiceMode::HighestFidelity => heap.extract_max().map(|p| (p, 0)),
                ServiceMode::LatestFirst => heap.extract_latest(),
            };
            let Some((pair, pos)) = taken else { break };
            let f = &mut flows[i];
            let ready = tick + sift_time(pos);
            let finish = finish_time(f.last_finish, ready, f.req.t_p);
            f.last_finish = finish;
            f.served += 1;
            rr = i + 1;
            trace.events.push(Event {
                tick,
                kind: EventKind::Dispatch,
                pair_id: pair.id,
                flow_id: Some(f.req.id),
                fidelity: pair.current_fidelity,
            });
            trace.completions.push(Completion {
                flow_id: f.req.id,
                pair_id: pair.id,
                dispatch_tick: tick,
                ready_tick: ready,
                finish_tick: finish,
            });
        }
        if rr >= flows.len() {
            rr = 0;
        }
    }
    trace.residual = heap.len();
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heap(cap: usize) -> MemoryHeap {
        MemoryHeap::new(cap, 0.0, 0.0, DecayMode::Iterated).unwrap()
    }

    #[test]
    fn heap_order_and_replacement() {
        let mut h = heap(8);
        for (i, f) in [0.6, 0.9, 0.7].into_iter().enumerate() {
            h.insert(StoredPair::new(i as u64, 0, f));
        }
        assert_eq!(h.extract_max().unwrap().current_fidelity, 0.9);
        assert_eq!(h.extract_max().unwrap().current_fidelity, 0.7);
        assert_eq!(h.extract_max().unwrap().current_fidelity, 0.6);
        assert!(h.extract_max().is_none());

        let mut h = heap(2);
        h.insert(StoredPair::new(0, 0, 0.9));
        h.insert(StoredPair::new(1, 0, 0.8));
        assert_eq!(h.insert(StoredPair::new(2, 0, 0.7)), InsertOutcome::Rejected);
        let mut h = heap(2);
        h.insert(StoredPair::new(0, 0, 0.9));
        h.insert(StoredPair::new(1, 0, 0.6));
        assert!(matches!(h.insert(StoredPair::new(2, 0, 0.7)), InsertOutcome::Replaced(p) if p.id == 1));
        assert!(h.is_heap());
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn decay_values() {
        assert!((decay(1.0, 0.1, 1, DecayMode::Iterated) - 0.8575).abs() < 1e-12);
        assert!((decay(1.0, 0.1, 1, DecayMode::PaperFormula) - 0.8575).abs() < 1e-12);
        assert!((decay(1.0, 0.1, 5, DecayMode::Iterated) - 0.5115).abs() < 1e-4);
        assert!((decay(1.0, 0.1, 6, DecayMode::Iterated) - 0.4618).abs() < 1e-4);
        assert_eq!(decay(0.7, 0.0, 9, DecayMode::Iterated), 0.7);
    }

    #[test]
    fn eviction_age() {
        let mut h = MemoryHeap::new(4, 0.5, 0.1, DecayMode::Iterated).unwrap();
        h.insert(StoredPair::new(0, 0, 1.0));
        for t in 1..=5 {
            assert!(h.tick_decay(t).is_empty());
        }
        let gone = h.tick_decay(6);
        assert_eq!(gone.len(), 1);
        assert_eq!(gone[0].age, 6);
    }

    #[test]
    fn finish_and_sift() {
        assert_eq!(finish_time(5, 3, 2), 7);
        assert_eq!(finish_time(0, 1, 2), 3);
        assert_eq!(finish_time(2, 4, 1), 5);
        let expect = [0, 1, 2, 2, 3, 3, 3, 3, 4];
        for (pos, &e) in expect.iter().enumerate() {
            assert_eq!(sift_time(pos), e, "pos {pos}");
        }
    }

    #[test]
    fn single_flow_drains_everything() {
        let cfg = SimConfig {
            capacity: 10,
            p_mem: 0.0,
            eta_crit: 0.0,
            horizon: 10,
            decay: DecayMode::Iterated,
            service: ServiceMode::HighestFidelity,
            producers: vec![Producer {
                id: 0,
                arrivals: (0..4).map(|t| Arrival { tick: t, fidelity: 0.9 }).collect(),
            }],
            flows: vec![FlowRequest {
                id: 0,
                arrival: 0,
                t_p: 1,
                demand: 100,
            }],
        };
        let t = run(&cfg).unwrap();
        assert_eq!(t.count(EventKind::Dispatch), 4);
        assert_eq!(t.residual, 0);
        assert_eq!(t.completions.last().unwrap().finish_tick, 4);
        assert!(run(&SimConfig { horizon: 0, ..cfg }).is_err());
    }

    #[test]
    fn toml_config() {
        let cfg = SimConfig::from_toml(
            r#"
            capacity = 3
            p_mem = 0.1
            eta_crit = 0.5
            horizon = 5
            decay = "paper_formula"
            [[producers]]
            id = 1
            arrivals = [{ tick = 0, fidelity = 1.0 }]
            [[flows]]
            id = 0
            arrival = 2
            t_p = 1
            demand = 1
            "#,
        )
        .unwrap();
        assert_eq!(cfg.decay, DecayMode::PaperFormula);
        let t = run(&cfg).unwrap();
        assert_eq!(t.count(EventKind::Dispatch), 1);
        assert!(SimConfig::from_toml("capacity = 1\nbogus = 2").is_err());
    }
}
