//! Runners for quantum-classical machines: sampled trajectories
//! (Monte-Carlo) and breadth-first expansion of the measurement tree
//! (exact mode).
//!
//! Both runners cut a run into deterministic segments: maximal stretches
//! of unitary steps that end at a halting state or at a measurement.
//! Segments are cached by their start node, so the repeated phases of a
//! machine are simulated once per run.

use std::collections::HashMap;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::angle::Angle;
use crate::error::{QuantumError, RunError, StepError};
use crate::machine::{StateId, Verdict, Word};
use crate::qcfa::{BranchNode, Operation, QuantumAction, QuantumClassicalMachine};
use crate::quantum::{ProjectiveMeasurement, QuantumRegister, UnitaryOp, UnitaryTag};
use crate::run::{apply_transition, undefined, Configuration, Status};

/// Default bound on elementary transitions per Monte-Carlo trial.
pub const DEFAULT_MAX_EVENTS: u64 = 1_000_000;
pub const DEFAULT_MASS_THRESHOLD: f64 = 1e-4;
pub const DEFAULT_TRIALS: u64 = 1000;

/// Registers whose amplitudes agree on this grid (after removing the
/// global phase) are treated as the same node.
const KEY_SCALE: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloOptions {
    pub trials: u64,
    pub seed: u64,
    pub max_events: u64,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        MonteCarloOptions {
            trials: DEFAULT_TRIALS,
            seed: 0,
            max_events: DEFAULT_MAX_EVENTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions {
    /// Stop once accept and reject mass leave less than this unresolved.
    pub mass_threshold: f64,
    /// Maximum number of measurement levels to expand.
    pub max_events: u64,
    /// Maximum number of distinct live nodes in one level.
    pub node_cap: usize,
    /// Longest deterministic segment before it counts as divergent.
    pub segment_cap: u64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            mass_threshold: DEFAULT_MASS_THRESHOLD,
            max_events: DEFAULT_MAX_EVENTS,
            node_cap: 1 << 20,
            segment_cap: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct NodeKey {
    state: StateId,
    heads: SmallVec<[usize; 4]>,
    active: usize,
    register: SmallVec<[(i64, i64); 4]>,
}

fn node_key(config: &Configuration, register: &QuantumRegister) -> NodeKey {
    let canonical = register.phase_normalized();
    NodeKey {
        state: config.state,
        heads: config.heads.clone(),
        active: config.active,
        register: canonical
            .amplitudes()
            .iter()
            .map(|a| ((a.re * KEY_SCALE).round() as i64, (a.im * KEY_SCALE).round() as i64))
            .collect(),
    }
}

#[derive(Debug, Clone)]
enum SegmentEnd {
    Halted(Verdict),
    Stopped,
    Measure,
    Diverged,
    Failed(StepError),
}

#[derive(Debug)]
struct Segment {
    end: SegmentEnd,
    config: Configuration,
    register: QuantumRegister,
    steps: u64,
}

struct Segments<'m> {
    machine: &'m QuantumClassicalMachine,
    word: &'m Word,
    stops: Vec<bool>,
    cap: u64,
    cache: HashMap<NodeKey, Rc<Segment>>,
}

impl<'m> Segments<'m> {
    fn new(machine: &'m QuantumClassicalMachine, word: &'m Word, stops: &[StateId], cap: u64) -> Self {
        let mut flags = vec![false; machine.control().states().len()];
        for s in stops {
            flags[s.index()] = true;
        }
        Segments {
            machine,
            word,
            stops: flags,
            cap,
            cache: HashMap::new(),
        }
    }

    fn run(&mut self, config: &Configuration, register: &QuantumRegister) -> Rc<Segment> {
        let key = node_key(config, register);
        if let Some(seg) = self.cache.get(&key) {
            return Rc::clone(seg);
        }
        let seg = Rc::new(self.compute(config, register));
        self.cache.insert(key, Rc::clone(&seg));
        seg
    }

    fn compute(&self, start: &Configuration, register: &QuantumRegister) -> Segment {
        let control = self.machine.control();
        let mut config = start.clone();
        config.steps = 0;
        let mut register = register.clone();
        let end = loop {
            if let Some(v) = control.halting(config.state) {
                break SegmentEnd::Halted(v);
            }
            if self.stops[config.state.index()] {
                break SegmentEnd::Stopped;
            }
            if config.steps >= self.cap {
                break SegmentEnd::Diverged;
            }
            let sym = config.scan(control, self.word);
            let next = match self.machine.action(config.state, sym) {
                None => break SegmentEnd::Failed(undefined(control, &config, sym)),
                Some(QuantumAction::Measure { .. }) => break SegmentEnd::Measure,
                Some(QuantumAction::Unitary { op, next }) => {
                    let Operation::Unitary(u) = &self.machine.operation(*op).op else {
                        unreachable!("unitary action bound to a measurement")
                    };
                    match register.apply(u) {
                        Ok(r) => register = r,
                        Err(e) => break SegmentEnd::Failed(e.into()),
                    }
                    next
                }
            };
            if let Err(e) = apply_transition(
                control,
                &mut config,
                next.target,
                &next.moves,
                self.word.len(),
                sym,
            ) {
                break SegmentEnd::Failed(e);
            }
        };
        let steps = config.steps;
        Segment {
            end,
            config,
            register,
            steps,
        }
    }

    fn measure(&self, seg: &Segment) -> Result<crate::qcfa::StepBranches, StepError> {
        let node = BranchNode {
            config: seg.config.clone(),
            register: seg.register.clone(),
            probability: 1.0,
        };
        self.machine.step(&node, self.word)
    }
}

/// Per-trial random stream: the run seed selects the generator and the
/// trial index selects the stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TrialEnd {
    Halted(Verdict),
    Stopped(StateId),
    Truncated,
}

fn run_trial(
    segments: &mut Segments<'_>,
    start: &BranchNode,
    rng: &mut ChaCha8Rng,
    max_events: u64,
) -> Result<(TrialEnd, u64), StepError> {
    let mut config = start.config.clone();
    let mut register = start.register.clone();
    let mut steps = 0u64;
    loop {
        let seg = segments.run(&config, &register);
        steps += seg.steps;
        if steps > max_events {
            return Ok((TrialEnd::Truncated, max_events));
        }
        match &seg.end {
            SegmentEnd::Halted(v) => return Ok((TrialEnd::Halted(*v), steps)),
            SegmentEnd::Stopped => return Ok((TrialEnd::Stopped(seg.config.state), steps)),
            SegmentEnd::Diverged => return Ok((TrialEnd::Truncated, steps)),
            SegmentEnd::Failed(e) => return Err(e.clone()),
            SegmentEnd::Measure => {
                let mut out = segments.measure(&seg)?;
                let pick = if out.successors.len() == 1 {
                    0
                } else {
                    let total: f64 = out.successors.iter().map(|(n, _)| n.probability).sum();
                    let u = rng.gen::<f64>() * total;
                    let mut acc = 0.0;
                    let mut chosen = out.successors.len() - 1;
                    for (i, (n, _)) in out.successors.iter().enumerate() {
                        acc += n.probability;
                        if u < acc {
                            chosen = i;
                            break;
                        }
                    }
                    chosen
                };
                let (node, _) = out.successors.swap_remove(pick);
                steps += 1;
                config = node.config;
                config.steps = 0;
                register = node.register;
            }
        }
    }
}

/// Aggregated Monte-Carlo statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloOutcome {
    pub trials: u64,
    pub accepts: u64,
    pub rejects: u64,
    pub truncated: u64,
    pub seed: u64,
    /// Steps summed over all trials (truncated trials count their bound).
    pub total_steps: u64,
    /// Steps summed over accepted trials.
    pub accept_steps: u64,
}

impl MonteCarloOutcome {
    pub fn accept_fraction(&self) -> f64 {
        self.accepts as f64 / self.trials as f64
    }

    pub fn reject_fraction(&self) -> f64 {
        self.rejects as f64 / self.trials as f64
    }

    pub fn truncated_fraction(&self) -> f64 {
        self.truncated as f64 / self.trials as f64
    }

    pub fn mean_steps(&self) -> f64 {
        self.total_steps as f64 / self.trials as f64
    }

    pub fn mean_accept_steps(&self) -> Option<f64> {
        (self.accepts > 0).then(|| self.accept_steps as f64 / self.accepts as f64)
    }
}

/// Samples `trials` independent trajectories. Trials run in index order,
/// each on its own random stream, so outcomes are reproducible.
pub fn run_monte_carlo(
    machine: &QuantumClassicalMachine,
    input: &str,
    options: &MonteCarloOptions,
) -> Result<MonteCarloOutcome, RunError> {
    if options.trials == 0 {
        return Err(RunError::Options("trials must be at least 1".into()));
    }
    let word = machine.control().encode(input)?;
    let mut segments = Segments::new(machine, &word, &[], options.max_events);
    let start = machine.initial_node();
    let mut out = MonteCarloOutcome {
        trials: options.trials,
        accepts: 0,
        rejects: 0,
        truncated: 0,
        seed: options.seed,
        total_steps: 0,
        accept_steps: 0,
    };
    for t in 0..options.trials {
        let mut rng = trial_rng(options.seed, t);
        let (end, steps) = run_trial(&mut segments, &start, &mut rng, options.max_events)?;
        out.total_steps += steps;
        match end {
            TrialEnd::Halted(Verdict::Accept) => {
                out.accepts += 1;
                out.accept_steps += steps;
            }
            TrialEnd::Halted(Verdict::Reject) => out.rejects += 1,
            TrialEnd::Stopped(_) | TrialEnd::Truncated => out.truncated += 1,
        }
    }
    Ok(out)
}

/// Outcome of [`probe`]: how often each stop state was reached first.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOutcome {
    pub trials: u64,
    pub stopped: Vec<(String, u64)>,
    pub accepts: u64,
    pub rejects: u64,
    pub truncated: u64,
}

impl ProbeOutcome {
    pub fn count(&self, state: &str) -> u64 {
        self.stopped
            .iter()
            .find(|(s, _)| s == state)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }
}

/// Samples trajectories from an arbitrary start node until one of the
/// `stops` states (or a halting state) is entered. Used to measure the
/// behaviour of one phase of a machine in isolation.
pub fn probe(
    machine: &QuantumClassicalMachine,
    input: &str,
    start: &BranchNode,
    stops: &[&str],
    options: &MonteCarloOptions,
) -> Result<ProbeOutcome, RunError> {
    let word = machine.control().encode(input)?;
    let ids = stops
        .iter()
        .map(|s| {
            machine
                .control()
                .state_id(s)
                .ok_or_else(|| RunError::Options(format!("unknown state `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if start.config.heads.len() != machine.tapes()
        || start.config.heads.iter().any(|&h| h > word.len() + 1)
    {
        return Err(RunError::Options("start configuration does not fit the input".into()));
    }
    let mut segments = Segments::new(machine, &word, &ids, options.max_events);
    let mut counts = vec![0u64; ids.len()];
    let mut out = ProbeOutcome {
        trials: options.trials,
        stopped: Vec::new(),
        accepts: 0,
        rejects: 0,
        truncated: 0,
    };
    for t in 0..options.trials {
        let mut rng = trial_rng(options.seed, t);
        match run_trial(&mut segments, start, &mut rng, options.max_events)?.0 {
            TrialEnd::Stopped(s) => {
                let i = ids.iter().position(|&x| x == s).expect("stop state");
                counts[i] += 1;
            }
            TrialEnd::Halted(Verdict::Accept) => out.accepts += 1,
            TrialEnd::Halted(Verdict::Reject) => out.rejects += 1,
            TrialEnd::Truncated => out.truncated += 1,
        }
    }
    out.stopped = stops.iter().map(|s| s.to_string()).zip(counts).collect();
    Ok(out)
}

/// Mass bookkeeping after one level of exact expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthRecord {
    pub depth: u64,
    pub accept: f64,
    pub reject: f64,
    pub live: f64,
    pub lost: f64,
    pub nodes: usize,
}

impl DepthRecord {
    pub fn total(&self) -> f64 {
        self.accept + self.reject + self.live + self.lost
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactOutcome {
    pub accept_mass: f64,
    pub reject_mass: f64,
    /// Live mass when expansion stopped, plus mass lost to dropped
    /// branches and divergent segments.
    pub unresolved_mass: f64,
    /// Expected steps over the halted mass.
    pub expected_steps: f64,
    /// Expected steps over the accepted mass.
    pub expected_accept_steps: f64,
    /// Measurement levels expanded.
    pub depth: u64,
    pub max_nodes: usize,
    pub trace: Vec<DepthRecord>,
}

struct Live {
    config: Configuration,
    register: QuantumRegister,
    mass: f64,
    mass_steps: f64,
}

#[derive(Default)]
struct Tally {
    accept: f64,
    reject: f64,
    lost: f64,
    steps: f64,
    accept_steps: f64,
}

fn settle(
    seg: &Segment,
    mass: f64,
    mass_steps: f64,
    tally: &mut Tally,
    next: &mut Vec<Live>,
    index: &mut HashMap<NodeKey, usize>,
) -> Result<(), StepError> {
    let mass_steps = mass_steps + mass * seg.steps as f64;
    match &seg.end {
        SegmentEnd::Halted(v) => {
            match v {
                Verdict::Accept => {
                    tally.accept += mass;
                    tally.accept_steps += mass_steps;
                }
                Verdict::Reject => tally.reject += mass,
            }
            tally.steps += mass_steps;
        }
        SegmentEnd::Measure => {
            let key = node_key(&seg.config, &seg.register);
            match index.get(&key) {
                Some(&i) => {
                    next[i].mass += mass;
                    next[i].mass_steps += mass_steps;
                }
                None => {
                    index.insert(key, next.len());
                    next.push(Live {
                        config: seg.config.clone(),
                        register: seg.register.clone(),
                        mass,
                        mass_steps,
                    });
                }
            }
        }
        SegmentEnd::Diverged | SegmentEnd::Stopped => tally.lost += mass,
        SegmentEnd::Failed(e) => return Err(e.clone()),
    }
    Ok(())
}

/// Expands the measurement tree level by level, merging identical nodes,
/// until the unresolved mass drops below the threshold or `max_events`
/// levels have been expanded.
pub fn run_exact(
    machine: &QuantumClassicalMachine,
    input: &str,
    options: &ExactOptions,
) -> Result<ExactOutcome, RunError> {
    if !(options.mass_threshold > 0.0) {
        return Err(RunError::Options("mass threshold must be positive".into()));
    }
    let word = machine.control().encode(input)?;
    let mut segments = Segments::new(machine, &word, &[], options.segment_cap);
    let mut tally = Tally::default();
    let mut live: Vec<Live> = Vec::new();
    let mut index = HashMap::new();
    let start = machine.initial_node();
    let seg = segments.run(&start.config, &start.register);
    settle(&seg, 1.0, 0.0, &mut tally, &mut live, &mut index)?;

    let record = |depth: u64, tally: &Tally, live: &[Live]| DepthRecord {
        depth,
        accept: tally.accept,
        reject: tally.reject,
        live: live.iter().map(|l| l.mass).sum(),
        lost: tally.lost,
        nodes: live.len(),
    };
    let mut trace = vec![record(0, &tally, &live)];
    let mut depth = 0u64;
    let mut max_nodes = live.len();
    loop {
        let last = trace.last().expect("nonempty");
        if live.is_empty() || last.live + last.lost < options.mass_threshold || depth >= options.max_events {
            break;
        }
        let mut next = Vec::with_capacity(live.len());
        let mut next_index = HashMap::with_capacity(live.len());
        for node in &live {
            let seg = Segment {
                end: SegmentEnd::Measure,
                config: node.config.clone(),
                register: node.register.clone(),
                steps: 0,
            };
            let out = segments.measure(&seg)?;
            tally.lost += out.dropped * node.mass;
            for (succ, _) in &out.successors {
                let p = succ.probability;
                let mass = node.mass * p;
                let mass_steps = node.mass_steps * p + mass;
                let seg = segments.run(&succ.config, &succ.register);
                settle(&seg, mass, mass_steps, &mut tally, &mut next, &mut next_index)?;
            }
        }
        depth += 1;
        if next.len() > options.node_cap {
            return Err(RunError::BranchExplosion {
                nodes: next.len(),
                depth,
            });
        }
        max_nodes = max_nodes.max(next.len());
        live = next;
        trace.push(record(depth, &tally, &live));
    }
    let last = trace.last().expect("nonempty");
    let halted = tally.accept + tally.reject;
    Ok(ExactOutcome {
        accept_mass: tally.accept,
        reject_mass: tally.reject,
        unresolved_mass: last.live + last.lost,
        expected_steps: if halted > 0.0 { tally.steps / halted } else { 0.0 },
        expected_accept_steps: if tally.accept > 0.0 {
            tally.accept_steps / tally.accept
        } else {
            0.0
        },
        depth,
        max_nodes,
        trace,
    })
}

/// Hadamard followed by a standard-basis measurement; returns the result
/// bit and the collapsed register.
pub fn simulate_coin_flip(
    register: &QuantumRegister,
    rng: &mut impl Rng,
) -> Result<(u8, QuantumRegister), QuantumError> {
    let m = ProjectiveMeasurement::standard(2);
    let spread = register.apply(&UnitaryOp::hadamard())?;
    let p = spread.probabilities(&m)?;
    let bit = if rng.gen::<f64>() < p[0] { 0 } else { 1 };
    Ok((bit, spread.collapse(&m, bit as usize)?))
}

/// Result of following a run deterministically up to a given state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub config: Configuration,
    pub register: QuantumRegister,
    /// Net rotation taking `|q0⟩` to the register (up to global phase),
    /// known when only rotations, identities and basis-state collapses
    /// were applied.
    pub net_rotation: Option<Angle>,
}

/// Steps from the initial node until the machine enters `stop`, as long
/// as every measurement on the way has a single possible result. Returns
/// `None` if the run halts, branches, or exceeds `max_steps` first.
pub fn trace_until(
    machine: &QuantumClassicalMachine,
    input: &str,
    stop: &str,
    max_steps: u64,
) -> Result<Option<Trace>, RunError> {
    let control = machine.control();
    let stop = control
        .state_id(stop)
        .ok_or_else(|| RunError::Options(format!("unknown state `{stop}`")))?;
    let word = control.encode(input)?;
    let mut node = machine.initial_node();
    let mut net = Some(Angle::ZERO);
    loop {
        if node.config.state == stop {
            return Ok(Some(Trace {
                config: node.config,
                register: node.register,
                net_rotation: net,
            }));
        }
        if control.halting(node.config.state).is_some() || node.config.steps >= max_steps {
            return Ok(None);
        }
        let sym = node.config.scan(control, &word);
        let action = machine.action(node.config.state, sym).cloned();
        let mut out = machine.step(&node, &word)?;
        if out.successors.len() != 1 {
            return Ok(None);
        }
        net = match (net, &action) {
            (Some(a), Some(QuantumAction::Unitary { op, .. })) => match &machine.operation(*op).op {
                Operation::Unitary(u) => match u.tag() {
                    UnitaryTag::Identity => Some(a),
                    UnitaryTag::Rotation(r) => Some(a + r),
                    _ => None,
                },
                Operation::Measure(_) => None,
            },
            (_, Some(QuantumAction::Measure { op, .. })) => {
                let standard = matches!(&machine.operation(*op).op, Operation::Measure(m) if m.is_standard());
                match (standard, machine.dim(), out.results[0]) {
                    (true, 2, 0) => Some(Angle::ZERO),
                    (true, 2, 1) => Some(Angle::pi_frac(1, 2)),
                    _ => None,
                }
            }
            _ => None,
        };
        let (mut next, status) = out.successors.swap_remove(0);
        next.probability = 1.0;
        node = next;
        if let Status::Halted(_) = status {
            if node.config.state != stop {
                return Ok(None);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcfa::QuantumBuilder;

    /// Flips coins on the left end-marker until two heads in a row.
    fn two_heads() -> QuantumClassicalMachine {
        let mut b = QuantumBuilder::new("two-heads", 1, &['a'], &["q0", "q1"]);
        b.initial("f0").accept("acc");
        b.unitary("H", UnitaryOp::hadamard()).unwrap();
        b.measure("M", ProjectiveMeasurement::standard(2)).unwrap();
        b.theta_unitary("f0", "LM1", "H", "m0", "S").unwrap();
        b.theta_measure("m0", "LM1", "M", &[("0", "f1", "S"), ("1", "f0", "S")]).unwrap();
        b.theta_unitary("f1", "LM1", "H", "m1", "S").unwrap();
        b.theta_measure("m1", "LM1", "M", &[("0", "acc", "S"), ("1", "f0", "S")]).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn exact_mode_conserves_mass_and_converges() {
        let m = two_heads();
        let out = run_exact(&m, "", &ExactOptions { mass_threshold: 1e-9, ..Default::default() }).unwrap();
        assert!(out.accept_mass > 1.0 - 1e-9);
        assert_eq!(out.reject_mass, 0.0);
        for rec in &out.trace {
            assert!((rec.total() - 1.0).abs() < 1e-9);
        }
        // Expected flips to see HH is 6, and each flip takes two steps.
        assert!((out.expected_steps - 12.0).abs() < 1e-5, "{}", out.expected_steps);
        assert!(out.max_nodes <= 4);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let m = two_heads();
        let opts = MonteCarloOptions { trials: 500, seed: 3, max_events: 10 };
        let a = run_monte_carlo(&m, "", &opts).unwrap();
        let b = run_monte_carlo(&m, "", &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.accepts + a.rejects + a.truncated, 500);
        assert!(a.truncated > 0);
        let c = run_monte_carlo(&m, "", &MonteCarloOptions { seed: 4, ..opts }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn coin_flip_is_fair() {
        let mut rng = trial_rng(42, 0);
        let q0 = QuantumRegister::basis(2, 0);
        let mut heads = 0;
        for _ in 0..20_000 {
            let (bit, after) = simulate_coin_flip(&q0, &mut rng).unwrap();
            assert!(after.approx_eq_up_to_phase(&QuantumRegister::basis(2, bit as usize), 1e-12));
            heads += (bit == 0) as u32;
        }
        assert!((heads as f64 / 20_000.0 - 0.5).abs() < 0.015);
    }

    #[test]
    fn trace_stops_at_branching() {
        let m = two_heads();
        let t = trace_until(&m, "", "m0", 10).unwrap().unwrap();
        assert_eq!(t.net_rotation, None);
        assert_eq!(t.config.steps, 1);
        assert!(trace_until(&m, "", "m1", 10).unwrap().is_none());
    }
}
