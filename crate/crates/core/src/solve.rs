//! Anytime solver: decompose at almost-clique separators, improve upper bounds
//! on the parts, lift lower bounds on the parts from largest down, and stop
//! when the bounds meet or time runs out.

use std::fmt::Write as _;
use std::sync::mpsc;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::SharedBounds;
use crate::cancel::CancelToken;
use crate::certificate::{verify_certificate, MinorCertificate};
use crate::graph::Graph;
use crate::lower::{LbParams, LbRun, LbStop};
use crate::preprocess::{decompose, recombine, AcsDecomposition};
use crate::td::TreeDecomposition;
use crate::upper::{UbParams, UbRun};

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub timeout: Option<Duration>,
    pub seed: u64,
    /// Interleave both bounds on one thread for reproducible runs.
    pub serial: bool,
    pub ub: UbParams,
    pub lb: LbParams,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { timeout: None, seed: 1, serial: false, ub: UbParams::default(), lb: LbParams::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Clone, Debug)]
pub struct Event {
    pub at: Duration,
    pub kind: BoundKind,
    pub value: usize,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub n: usize,
    pub m: usize,
    pub parts: usize,
    pub lower: usize,
    pub upper: usize,
    /// Decomposition of width `upper`.
    pub td: TreeDecomposition,
    /// Certificate for `lower`.
    pub certificate: MinorCertificate,
    /// Every published bound in order, with the time since the start.
    pub events: Vec<Event>,
    pub timed_out: bool,
}

impl Report {
    pub fn solved(&self) -> bool {
        self.lower == self.upper
    }

    fn last_time(&self, kind: BoundKind) -> Duration {
        self.events.iter().rev().find(|e| e.kind == kind).map_or(Duration::ZERO, |e| e.at)
    }

    /// Time of the final lower-bound improvement.
    pub fn lower_time(&self) -> Duration {
        self.last_time(BoundKind::Lower)
    }

    pub fn upper_time(&self) -> Duration {
        self.last_time(BoundKind::Upper)
    }

    /// Timing-free text; identical across serial runs with the same seed.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph {} vertices {} edges, {} parts", self.n, self.m, self.parts);
        if self.solved() {
            let _ = writeln!(s, "treewidth {}", self.lower);
        } else {
            let _ = writeln!(s, "treewidth in [{}, {}]", self.lower, self.upper);
        }
        let trace = |kind| {
            let v: Vec<String> = self.events.iter().filter(|e| e.kind == kind).map(|e| e.value.to_string()).collect();
            v.join(" ")
        };
        let _ = writeln!(s, "upper trace: {}", trace(BoundKind::Upper));
        let _ = writeln!(s, "lower trace: {}", trace(BoundKind::Lower));
        let _ = writeln!(s, "decomposition: {} bags, width {}", self.td.bags.len(), self.td.width);
        let _ = writeln!(
            s,
            "certificate: {} minor vertices from {} graph vertices",
            self.certificate.groups.len(),
            self.certificate.groups.iter().map(|g| g.len()).sum::<usize>()
        );
        s
    }
}

fn stream(seed: u64, s: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(s);
    r
}

/// Upper bounds per part; the graph's bound is the largest.
struct UbSide<'a> {
    g: &'a Graph,
    dec: &'a AcsDecomposition,
    runs: Vec<UbRun>,
    best: usize,
}

impl<'a> UbSide<'a> {
    fn start(g: &'a Graph, dec: &'a AcsDecomposition, params: &UbParams, rng: &mut ChaCha8Rng) -> (Self, TreeDecomposition) {
        let runs: Vec<UbRun> = dec.parts.iter().map(|p| UbRun::start(&p.graph, params.clone(), rng)).collect();
        let mut side = UbSide { g, dec, runs, best: usize::MAX };
        side.best = side.value();
        let td = side.td();
        (side, td)
    }

    fn value(&self) -> usize {
        self.runs.iter().map(|r| r.value()).max().unwrap_or(0)
    }

    fn td(&self) -> TreeDecomposition {
        let tds: Vec<TreeDecomposition> = self.runs.iter().map(|r| r.sol.best_td.clone()).collect();
        let td = recombine(self.dec, &tds).expect("part decompositions recombine");
        debug_assert!(td.validate(self.g).is_ok());
        td
    }

    fn done(&self, lower: usize) -> bool {
        self.best <= lower
    }

    /// Takes an optimal decomposition of part `i` found by the other side.
    fn absorb(&mut self, i: usize, td: &TreeDecomposition, cancel: &CancelToken) -> Option<(usize, TreeDecomposition)> {
        self.runs[i].absorb(&self.dec.parts[i].graph, td, cancel);
        self.publish_if_better()
    }

    fn publish_if_better(&mut self) -> Option<(usize, TreeDecomposition)> {
        let v = self.value();
        if v < self.best {
            self.best = v;
            let td = self.td();
            td.validate(self.g).ok()?;
            Some((v, td))
        } else {
            None
        }
    }

    /// One improve on the part with the largest value.
    fn step(&mut self, rng: &mut ChaCha8Rng, cancel: &CancelToken) -> Option<(usize, TreeDecomposition)> {
        let i0 = (0..self.runs.len()).max_by_key(|&i| (self.runs[i].value(), std::cmp::Reverse(i)))?;
        self.runs[i0].step(&self.dec.parts[i0].graph, rng, cancel);
        self.publish_if_better()
    }
}

/// Lower bounds lifted on one part at a time, largest first.
struct LbSide<'a> {
    g: &'a Graph,
    dec: &'a AcsDecomposition,
    params: LbParams,
    order: Vec<usize>,
    pos: usize,
    run: Option<(usize, LbRun)>,
    best: Option<usize>,
    finished: bool,
    /// Optimal part decompositions found while bounding from below.
    exact_parts: Vec<(usize, TreeDecomposition)>,
}

impl<'a> LbSide<'a> {
    fn new(g: &'a Graph, dec: &'a AcsDecomposition, params: &LbParams) -> Self {
        let mut order: Vec<usize> = (0..dec.len()).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(dec.parts[i].graph.n()), i));
        LbSide { g, dec, params: params.clone(), order, pos: 0, run: None, best: None, finished: dec.is_empty(), exact_parts: Vec::new() }
    }

    fn lower(&self) -> usize {
        self.best.unwrap_or(0)
    }

    /// Maps the run's certificate to the input graph and verifies it.
    fn publish(&mut self, part: usize, run: &LbRun, cancel: &CancelToken) -> Option<(usize, MinorCertificate)> {
        let k = run.k();
        if self.best.is_some_and(|b| k <= b) {
            return None;
        }
        let local = run.certificate();
        let groups = local.groups.iter().map(|grp| self.dec.lift_group(part, grp, self.g.n())).collect();
        let cert = MinorCertificate { claimed_k: k, groups };
        verify_certificate(self.g, &cert, cancel).ok()?;
        self.best = Some(k);
        Some((k, cert))
    }

    fn step(&mut self, upper: usize, rng: &mut ChaCha8Rng, cancel: &CancelToken) -> Option<(usize, MinorCertificate)> {
        if self.finished {
            return None;
        }
        let Some((part, mut run)) = self.run.take() else {
            // Parts with at most lower + 1 vertices cannot raise the bound.
            while self.pos < self.order.len()
                && self.best.is_some_and(|b| self.dec.parts[self.order[self.pos]].graph.n() <= b + 1)
            {
                self.pos += 1;
            }
            if self.pos >= self.order.len() {
                self.finished = true;
                return None;
            }
            let part = self.order[self.pos];
            return match LbRun::start(&self.dec.parts[part].graph, self.params.clone(), rng, cancel) {
                Ok(mut run) => {
                    if let Some(td) = run.exact_td.take() {
                        self.exact_parts.push((part, td));
                    }
                    let out = self.publish(part, &run, cancel);
                    self.run = Some((part, run));
                    out
                }
                Err(_) => {
                    if cancel.is_cancelled() {
                        self.finished = true;
                    } else {
                        self.pos += 1;
                    }
                    None
                }
            };
        };
        let out = if run.step(upper, rng, cancel) { self.publish(part, &run, cancel) } else { None };
        match run.stopped {
            None => self.run = Some((part, run)),
            Some(LbStop::Exhausted) | Some(LbStop::Failed(_)) => self.pos += 1,
            Some(LbStop::ReachedUpper) | Some(LbStop::Cancelled) => self.finished = true,
        }
        out
    }
}

enum Msg {
    Upper(usize, TreeDecomposition),
    Lower(usize, MinorCertificate),
}

/// Collects published bounds; the latest of each kind is the best.
struct Log {
    start: Instant,
    events: Vec<Event>,
    td: Option<TreeDecomposition>,
    cert: Option<MinorCertificate>,
}

impl Log {
    fn record(&mut self, msg: Msg) {
        let at = self.start.elapsed();
        match msg {
            Msg::Upper(v, td) => {
                self.events.push(Event { at, kind: BoundKind::Upper, value: v });
                self.td = Some(td);
            }
            Msg::Lower(k, c) => {
                self.events.push(Event { at, kind: BoundKind::Lower, value: k });
                self.cert = Some(c);
            }
        }
    }
}

pub fn solve(g: &Graph, config: &SolveConfig) -> Report {
    let start = Instant::now();
    let cancel = match config.timeout {
        Some(t) => CancelToken::with_deadline(start + t),
        None => CancelToken::new(),
    };
    solve_with(g, config, &cancel, start)
}

/// [`solve`] with an external cancellation token.
pub fn solve_with(g: &Graph, config: &SolveConfig, cancel: &CancelToken, start: Instant) -> Report {
    let mut log = Log { start, events: Vec::new(), td: None, cert: None };
    let dec = if g.n() == 0 { AcsDecomposition::trivial(g) } else { decompose(g, &mut stream(config.seed, 0)) };
    if g.n() == 0 {
        log.record(Msg::Upper(0, TreeDecomposition::new(Vec::new(), Vec::new())));
        log.record(Msg::Lower(0, MinorCertificate { claimed_k: 0, groups: Vec::new() }));
    } else if config.serial {
        run_serial(g, &dec, config, cancel, &mut log);
    } else {
        run_threaded(g, &dec, config, cancel, &mut log);
    }
    let lower = log.events.iter().filter(|e| e.kind == BoundKind::Lower).map(|e| e.value).max().unwrap_or(0);
    let upper = log.td.as_ref().map_or(g.n().saturating_sub(1), |t| t.width);
    Report {
        n: g.n(),
        m: g.edge_count(),
        parts: dec.len(),
        lower,
        upper,
        td: log.td.unwrap_or_else(|| TreeDecomposition::trivial(g.n())),
        certificate: log.cert.unwrap_or(MinorCertificate { claimed_k: 0, groups: Vec::new() }),
        events: log.events,
        timed_out: lower < upper && cancel.is_cancelled(),
    }
}

fn run_serial(g: &Graph, dec: &AcsDecomposition, config: &SolveConfig, cancel: &CancelToken, log: &mut Log) {
    let (mut ub_rng, mut lb_rng) = (stream(config.seed, 1), stream(config.seed, 2));
    let (mut ub, td) = UbSide::start(g, dec, &config.ub, &mut ub_rng);
    log.record(Msg::Upper(ub.best, td));
    let mut lb = LbSide::new(g, dec, &config.lb);
    loop {
        if !lb.finished {
            if let Some((k, c)) = lb.step(ub.best, &mut lb_rng, cancel) {
                log.record(Msg::Lower(k, c));
            }
            for (i, td) in std::mem::take(&mut lb.exact_parts) {
                if let Some((v, td)) = ub.absorb(i, &td, cancel) {
                    log.record(Msg::Upper(v, td));
                }
            }
        }
        if ub.done(lb.lower()) || cancel.is_cancelled() {
            break;
        }
        if let Some((v, td)) = ub.step(&mut ub_rng, cancel) {
            log.record(Msg::Upper(v, td));
        }
        if ub.done(lb.lower()) || cancel.is_cancelled() {
            break;
        }
    }
}

fn run_threaded(g: &Graph, dec: &AcsDecomposition, config: &SolveConfig, cancel: &CancelToken, log: &mut Log) {
    let bounds = Arc::new(SharedBounds::new());
    let met = {
        let b = Arc::clone(&bounds);
        cancel.child_when(move || b.met())
    };
    let (tx, rx) = mpsc::channel::<Msg>();
    let (part_tx, part_rx) = mpsc::channel::<(usize, TreeDecomposition)>();
    std::thread::scope(|s| {
        let (ub_tx, lb_tx) = (tx.clone(), tx);
        let (ub_cancel, lb_cancel) = (met.clone(), met.clone());
        let (ub_bounds, lb_bounds) = (Arc::clone(&bounds), Arc::clone(&bounds));
        s.spawn(move || {
            let mut rng = stream(config.seed, 1);
            let (mut ub, td) = UbSide::start(g, dec, &config.ub, &mut rng);
            ub_bounds.offer_upper(ub.best);
            let _ = ub_tx.send(Msg::Upper(ub.best, td));
            while !ub.done(ub_bounds.lower()) && !ub_cancel.is_cancelled() {
                let absorbed: Vec<_> = part_rx.try_iter().collect();
                let found = absorbed.iter().filter_map(|(i, td)| ub.absorb(*i, td, &ub_cancel)).last();
                if let Some((v, td)) = found.or_else(|| ub.step(&mut rng, &ub_cancel)) {
                    ub_bounds.offer_upper(v);
                    let _ = ub_tx.send(Msg::Upper(v, td));
                }
            }
        });
        s.spawn(move || {
            let mut rng = stream(config.seed, 2);
            let mut lb = LbSide::new(g, dec, &config.lb);
            while !lb.finished && !lb_cancel.is_cancelled() {
                if let Some((k, c)) = lb.step(lb_bounds.upper(), &mut rng, &lb_cancel) {
                    lb_bounds.offer_lower(k);
                    let _ = lb_tx.send(Msg::Lower(k, c));
                }
                for part in lb.exact_parts.drain(..) {
                    let _ = part_tx.send(part);
                }
            }
        });
        for msg in rx {
            log.record(msg);
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_certificate;

    fn serial() -> SolveConfig {
        SolveConfig { serial: true, timeout: Some(Duration::from_secs(30)), ..SolveConfig::default() }
    }

    #[test]
    fn tree_is_width_one() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        for cfg in [serial(), SolveConfig { timeout: Some(Duration::from_secs(30)), ..SolveConfig::default() }] {
            let r = solve(&g, &cfg);
            assert_eq!((r.lower, r.upper), (1, 1));
            r.td.validate(&g).unwrap();
            verify_certificate(&g, &r.certificate, &CancelToken::new()).unwrap();
        }
    }

    #[test]
    fn edgeless_and_empty() {
        let r = solve(&Graph::new(3), &serial());
        assert_eq!((r.lower, r.upper), (0, 0));
        verify_certificate(&Graph::new(3), &r.certificate, &CancelToken::new()).unwrap();
        let r = solve(&Graph::new(0), &serial());
        assert_eq!((r.lower, r.upper), (0, 0));
    }

    #[test]
    fn serial_runs_repeat() {
        let g = Graph::from_edges(8, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 7), (7, 4), (1, 5)]).unwrap();
        let a = solve(&g, &serial());
        let b = solve(&g, &serial());
        assert_eq!(a.summary(), b.summary());
        assert!(a.solved());
    }
}
