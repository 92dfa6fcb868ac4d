//! Measurement patterns: command sequences, standardization, and the
//! round trip to open graphs with flows.
//!
//! A pattern is a finite command sequence over named qudits of odd prime
//! dimension d, stored in *execution order* (first command acts first):
//!
//! - `N(target)` prepares a fresh non-input qudit as |+⟩;
//! - `E(u, v, w)` entangles two qudits with the phase ω^{w·m_u·m_v};
//! - `M(target, label, angles)` measures a qudit in the member of the
//!   measurement space named by `label` selected by `angles`;
//! - `X(target, signal, c)` / `Z(target, signal, c)` apply X^{c·m_s} or
//!   Z^{c·m_s}, where m_s is the outcome of the signal vertex s.
//!
//! A *runnable* pattern satisfies three disciplines: every command acts on
//! prepared qudits (inputs count as prepared, preparations are unique and
//! never target inputs), nothing touches a qudit after its measurement
//! (each non-output is measured exactly once, outputs never, and in-pattern
//! signals fire only after their measurement), and the vertex universe is
//! exhausted by measurements and outputs. Signals naming vertices outside
//! the pattern are *external* — free parameters, useful for composition.
//!
//! The *standard form* lists preparations, then entanglements, then any
//! externally-signalled corrections on measured vertices, then one group
//! per measurement in the original measurement order — the `M` followed by
//! the X- then Z-corrections it signals — and finally externally-signalled
//! corrections on the remaining (never-measured) vertices.
//! [`standardize`] reaches it in a single
//! left-to-right walk, pushing entangling commands through pending X
//! corrections with the rewrite E·X_u^c = X_u^c·Z_v^{w·c}·E and
//! accumulating correction coefficients mod d. Standardization is
//! idempotent and preserves branch semantics up to global phase.
//!
//! [`from_flow`] emits the standard pattern realizing a flow's correction
//! strategy; [`extract_open_graph`] inverts it, recovering the labelled
//! open graph and correction sets from any runnable pattern.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{corrections, CorrectionSets, FlowError, ZdFlow};
use crate::gfp::{GfpError, PrimeModulus};
use crate::graph::{GraphError, LabelledOpenGraph, Multiset, OpenGraph, Vertex};
use crate::meas::{eigenbasis, measurement_unitary, odd_prime, MeasError, MeasurementSpec, C64};
use crate::sim::{BranchOutcome, QuditState, SimError};

/// Errors from pattern validation, rewriting and execution.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PatternError {
    /// Underlying graph error.
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// Underlying field error.
    #[error(transparent)]
    Field(#[from] GfpError),
    /// Underlying measurement-space error.
    #[error(transparent)]
    Meas(#[from] MeasError),
    /// Underlying flow error.
    #[error(transparent)]
    Flow(#[from] FlowError),
    /// Underlying simulation error.
    #[error(transparent)]
    Sim(#[from] SimError),
    /// A command targets a qudit before it is prepared.
    #[error("vertex {0} used before preparation")]
    Unprepared(Vertex),
    /// A qudit is prepared twice.
    #[error("vertex {0} prepared twice")]
    DoublePreparation(Vertex),
    /// Inputs arrive prepared; a preparation on one is malformed.
    #[error("input vertex {0} must not be prepared")]
    PreparedInput(Vertex),
    /// A command targets a qudit after its measurement.
    #[error("vertex {0} acted on after measurement")]
    ActedAfterMeasurement(Vertex),
    /// A qudit is measured twice.
    #[error("vertex {0} measured twice")]
    DoubleMeasurement(Vertex),
    /// An output is measured.
    #[error("output vertex {0} measured")]
    MeasuredOutput(Vertex),
    /// A non-output vertex is never measured.
    #[error("vertex {0} is neither measured nor an output")]
    Unmeasured(Vertex),
    /// An in-pattern signal fires before its vertex is measured.
    #[error("signal {signal} used on {target} before its measurement")]
    EarlySignal {
        /// The signal vertex.
        signal: Vertex,
        /// The corrected vertex.
        target: Vertex,
    },
    /// A signal has no outcome available (external and unsupplied, or not
    /// attributable during extraction).
    #[error("signal {0} is not bound by the pattern")]
    UnboundSignal(Vertex),
    /// The zero label names no measurement space.
    #[error("zero label (0,0) on measurement of {0}")]
    ZeroLabel(Vertex),
    /// An entangling command needs two distinct qudits.
    #[error("self-loop entangling command on {0}")]
    SelfLoop(Vertex),
    /// A branch execution lacks an outcome digit.
    #[error("missing outcome for {0}")]
    MissingOutcome(Vertex),
    /// The JSON document failed to parse or had the wrong shape.
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// One pattern command. Serialized externally tagged, e.g.
/// `{"E": {"u": "1", "v": "2", "weight": 1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Command {
    /// Prepare a fresh qudit as |+⟩.
    N {
        /// The prepared vertex.
        target: Vertex,
    },
    /// Entangle two qudits with weight `weight`.
    E {
        /// First endpoint.
        u: Vertex,
        /// Second endpoint.
        v: Vertex,
        /// Edge weight in Z_d.
        weight: u64,
    },
    /// Measure a qudit.
    M {
        /// The measured vertex.
        target: Vertex,
        /// The measurement-space label (a, b) ≠ (0, 0).
        label: (u64, u64),
        /// The d−1 angles selecting the space member.
        angles: Vec<f64>,
    },
    /// Outcome-conditioned X correction X^{coeff·m_signal}.
    X {
        /// The corrected vertex.
        target: Vertex,
        /// The vertex whose outcome scales the correction.
        signal: Vertex,
        /// Coefficient in Z_d.
        coeff: u64,
    },
    /// Outcome-conditioned Z correction Z^{coeff·m_signal}.
    Z {
        /// The corrected vertex.
        target: Vertex,
        /// The vertex whose outcome scales the correction.
        signal: Vertex,
        /// Coefficient in Z_d.
        coeff: u64,
    },
}

impl Command {
    /// The vertices the command acts on (signals excluded).
    fn targets(&self) -> Vec<&Vertex> {
        match self {
            Command::N { target } => vec![target],
            Command::E { u, v, .. } => vec![u, v],
            Command::M { target, .. } => vec![target],
            Command::X { target, .. } => vec![target],
            Command::Z { target, .. } => vec![target],
        }
    }
}

/// A measurement pattern in execution order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    /// Qudit dimension (odd prime).
    pub d: u64,
    /// Input vertices (arrive prepared, possibly in arbitrary joint states).
    pub inputs: Vec<Vertex>,
    /// Output vertices (never measured).
    pub outputs: Vec<Vertex>,
    /// Commands, first-acting first.
    pub commands: Vec<Command>,
}

impl Pattern {
    /// The vertex universe: inputs, outputs and command targets, sorted.
    pub fn universe(&self) -> Vec<Vertex> {
        let mut set: BTreeSet<Vertex> = self.inputs.iter().cloned().collect();
        set.extend(self.outputs.iter().cloned());
        for c in &self.commands {
            set.extend(c.targets().into_iter().cloned());
        }
        set.into_iter().collect()
    }

    /// Measured vertices in measurement order.
    pub fn measurement_order(&self) -> Vec<Vertex> {
        self.commands
            .iter()
            .filter_map(|c| match c {
                Command::M { target, .. } => Some(target.clone()),
                _ => None,
            })
            .collect()
    }
}

/// Checks the three runnability disciplines; see the module docs.
pub fn check_runnable(p: &Pattern) -> Result<(), PatternError> {
    let d = odd_prime(p.d)?;
    let inputs: BTreeSet<&Vertex> = p.inputs.iter().collect();
    let outputs: BTreeSet<&Vertex> = p.outputs.iter().collect();
    let mut prepared: BTreeSet<&Vertex> = inputs.clone();
    let mut measured: BTreeSet<&Vertex> = BTreeSet::new();
    let in_pattern: BTreeSet<&Vertex> = {
        let mut s: BTreeSet<&Vertex> = inputs.iter().copied().collect();
        s.extend(outputs.iter().copied());
        for c in &p.commands {
            s.extend(c.targets());
        }
        s
    };
    let check_live = |v: &Vertex,
                      prepared: &BTreeSet<&Vertex>,
                      measured: &BTreeSet<&Vertex>|
     -> Result<(), PatternError> {
        if !prepared.contains(v) {
            return Err(PatternError::Unprepared(v.clone()));
        }
        if measured.contains(v) {
            return Err(PatternError::ActedAfterMeasurement(v.clone()));
        }
        Ok(())
    };
    for c in &p.commands {
        match c {
            Command::N { target } => {
                if inputs.contains(target) {
                    return Err(PatternError::PreparedInput(target.clone()));
                }
                if !prepared.insert(target) {
                    return Err(PatternError::DoublePreparation(target.clone()));
                }
            }
            Command::E { u, v, .. } => {
                if u == v {
                    return Err(PatternError::SelfLoop(u.clone()));
                }
                check_live(u, &prepared, &measured)?;
                check_live(v, &prepared, &measured)?;
            }
            Command::M { target, label, .. } => {
                check_live(target, &prepared, &measured)?;
                if outputs.contains(target) {
                    return Err(PatternError::MeasuredOutput(target.clone()));
                }
                if measured.contains(target) {
                    return Err(PatternError::DoubleMeasurement(target.clone()));
                }
                if (d.reduce(label.0), d.reduce(label.1)) == (0, 0) {
                    return Err(PatternError::ZeroLabel(target.clone()));
                }
                measured.insert(target);
            }
            Command::X { target, signal, .. } | Command::Z { target, signal, .. } => {
                check_live(target, &prepared, &measured)?;
                if in_pattern.contains(signal) && !measured.contains(signal) {
                    return Err(PatternError::EarlySignal {
                        signal: signal.clone(),
                        target: target.clone(),
                    });
                }
            }
        }
    }
    for v in &in_pattern {
        if !prepared.contains(v) {
            return Err(PatternError::Unprepared((*v).clone()));
        }
        if !outputs.contains(v) && !measured.contains(v) {
            return Err(PatternError::Unmeasured((*v).clone()));
        }
    }
    Ok(())
}

/// Pending correction coefficients: target → signal → coefficient.
type PendingMap = BTreeMap<Vertex, BTreeMap<Vertex, u64>>;

fn bump(map: &mut PendingMap, target: &Vertex, signal: &Vertex, add: u64, d: PrimeModulus) {
    if add == 0 {
        return;
    }
    let cell = map
        .entry(target.clone())
        .or_default()
        .entry(signal.clone())
        .or_insert(0);
    *cell = d.add(*cell, add);
}

/// Rewrites a runnable pattern into standard form; see the module docs.
pub fn standardize(p: &Pattern) -> Result<Pattern, PatternError> {
    check_runnable(p)?;
    let d = odd_prime(p.d)?;
    let mut px: PendingMap = BTreeMap::new();
    let mut pz: PendingMap = BTreeMap::new();
    let mut weights: BTreeMap<(Vertex, Vertex), u64> = BTreeMap::new();
    let mut prepared: Vec<Vertex> = Vec::new();
    let mut measurements: Vec<(Vertex, (u64, u64), Vec<f64>)> = Vec::new();
    for c in &p.commands {
        match c {
            Command::N { target } => prepared.push(target.clone()),
            Command::E { u, v, weight } => {
                let w = d.reduce(*weight);
                // E·X_u^c = X_u^c·Z_v^{w·c}·E — pushing the entangler left
                // past every pending X spawns the matching Z on the other
                // endpoint, before the edge weight is recorded.
                let crossings: Vec<(Vertex, Vertex, u64)> = [(u, v), (v, u)]
                    .into_iter()
                    .flat_map(|(src, dst)| {
                        px.get(src).into_iter().flat_map(move |signals| {
                            signals
                                .iter()
                                .map(move |(s, &c)| (dst.clone(), s.clone(), d.mul(w, c)))
                        })
                    })
                    .collect();
                for (dst, s, add) in crossings {
                    bump(&mut pz, &dst, &s, add, d);
                }
                let key = if u <= v {
                    (u.clone(), v.clone())
                } else {
                    (v.clone(), u.clone())
                };
                let cell = weights.entry(key).or_insert(0);
                *cell = d.add(*cell, w);
            }
            Command::M {
                target,
                label,
                angles,
            } => {
                measurements.push((
                    target.clone(),
                    (d.reduce(label.0), d.reduce(label.1)),
                    angles.clone(),
                ));
            }
            Command::X {
                target,
                signal,
                coeff,
            } => bump(&mut px, target, signal, d.reduce(*coeff), d),
            Command::Z {
                target,
                signal,
                coeff,
            } => bump(&mut pz, target, signal, d.reduce(*coeff), d),
        }
    }
    let mut commands: Vec<Command> = Vec::new();
    prepared.sort();
    for target in prepared {
        commands.push(Command::N { target });
    }
    for ((u, v), w) in &weights {
        if *w != 0 {
            commands.push(Command::E {
                u: u.clone(),
                v: v.clone(),
                weight: *w,
            });
        }
    }
    let emit_signalled = |commands: &mut Vec<Command>,
                          map: &PendingMap,
                          signal: &Vertex,
                          x: bool,
                          keep: &dyn Fn(&Vertex) -> bool| {
        for (target, signals) in map {
            if !keep(target) {
                continue;
            }
            let Some(&coeff) = signals.get(signal) else {
                continue;
            };
            if coeff == 0 {
                continue;
            }
            let (target, signal) = (target.clone(), signal.clone());
            commands.push(if x {
                Command::X {
                    target,
                    signal,
                    coeff,
                }
            } else {
                Command::Z {
                    target,
                    signal,
                    coeff,
                }
            });
        }
    };
    let measured: BTreeSet<Vertex> = measurements.iter().map(|(v, _, _)| v.clone()).collect();
    let mut externals: BTreeSet<Vertex> = BTreeSet::new();
    for map in [&px, &pz] {
        for signals in map.values() {
            externals.extend(signals.keys().filter(|s| !measured.contains(*s)).cloned());
        }
    }
    // The walk commutes every pending correction past the entanglers, so an
    // externally-signalled correction on a measured vertex is valid exactly
    // here — after the edges, ahead of every measurement.
    for s in &externals {
        emit_signalled(&mut commands, &px, s, true, &|t| measured.contains(t));
        emit_signalled(&mut commands, &pz, s, false, &|t| measured.contains(t));
    }
    for (target, label, angles) in &measurements {
        commands.push(Command::M {
            target: target.clone(),
            label: *label,
            angles: angles.clone(),
        });
        emit_signalled(&mut commands, &px, target, true, &|_| true);
        emit_signalled(&mut commands, &pz, target, false, &|_| true);
    }
    // Externally-signalled corrections on never-measured vertices close the
    // pattern.
    for s in &externals {
        emit_signalled(&mut commands, &px, s, true, &|t| !measured.contains(t));
        emit_signalled(&mut commands, &pz, s, false, &|t| !measured.contains(t));
    }
    Ok(Pattern {
        d: p.d,
        inputs: p.inputs.clone(),
        outputs: p.outputs.clone(),
        commands,
    })
}

/// Emits the standard pattern realizing a flow on a labelled open graph:
/// preparations for the non-inputs, every weighted edge, then — walking the
/// layers in execution order, each sorted internally — the measurement of
/// each vertex followed by the X- and Z-corrections its outcome signals,
/// all with zero angles.
pub fn from_flow(lg: &LabelledOpenGraph, f: &ZdFlow) -> Result<Pattern, PatternError> {
    let g = &lg.graph;
    let d = g.d();
    let cs = corrections(lg, f)?;
    let mut commands = Vec::new();
    for v in g.vertices() {
        if !g.is_input(v) {
            commands.push(Command::N { target: v.clone() });
        }
    }
    for u in 0..g.vertex_count() {
        for v in u + 1..g.vertex_count() {
            let w = g.adjacency().get(u, v);
            if w != 0 {
                commands.push(Command::E {
                    u: g.name(u).clone(),
                    v: g.name(v).clone(),
                    weight: w,
                });
            }
        }
    }
    for layer in f.execution_layers() {
        for v in layer {
            if g.is_output(v) {
                continue;
            }
            let label = lg
                .labelling
                .get(v)
                .ok_or_else(|| FlowError::MissingLabels(vec![v.clone()]))?;
            commands.push(Command::M {
                target: v.clone(),
                label,
                angles: vec![0.0; d.get() as usize - 1],
            });
            for (family, x) in [(&cs.x, true), (&cs.z, false)] {
                let Some(ms) = family.get(v) else { continue };
                for (target, coeff) in ms.to_named(g) {
                    if target == *v {
                        continue;
                    }
                    commands.push(if x {
                        Command::X {
                            target,
                            signal: v.clone(),
                            coeff,
                        }
                    } else {
                        Command::Z {
                            target,
                            signal: v.clone(),
                            coeff,
                        }
                    });
                }
            }
        }
    }
    let p = Pattern {
        d: d.get(),
        inputs: g.inputs().iter().cloned().collect(),
        outputs: g.outputs().iter().cloned().collect(),
        commands,
    };
    check_runnable(&p)?;
    Ok(p)
}

/// Recovers the labelled open graph and correction sets underlying a
/// runnable pattern: edges from accumulated entangling weights, labels from
/// measurements, and correction multisets keyed by signal. Every signal
/// must be measured in the pattern.
pub fn extract_open_graph(
    p: &Pattern,
) -> Result<(OpenGraph, crate::graph::Labelling, CorrectionSets), PatternError> {
    let std_p = standardize(p)?;
    let d = PrimeModulus::new(std_p.d)?;
    let vertices = std_p.universe();
    let mut edges = Vec::new();
    let mut labels: BTreeMap<Vertex, (u64, u64)> = BTreeMap::new();
    let mut xz: Vec<(bool, Vertex, Vertex, u64)> = Vec::new();
    for c in &std_p.commands {
        match c {
            Command::N { .. } => {}
            Command::E { u, v, weight } => edges.push((u.clone(), v.clone(), *weight)),
            Command::M { target, label, .. } => {
                labels.insert(target.clone(), *label);
            }
            Command::X {
                target,
                signal,
                coeff,
            } => xz.push((true, target.clone(), signal.clone(), *coeff)),
            Command::Z {
                target,
                signal,
                coeff,
            } => xz.push((false, target.clone(), signal.clone(), *coeff)),
        }
    }
    let g = OpenGraph::new(d, vertices, &edges, &std_p.inputs, &std_p.outputs)?;
    let mut x: BTreeMap<Vertex, Multiset> = BTreeMap::new();
    let mut z: BTreeMap<Vertex, Multiset> = BTreeMap::new();
    for v in g.measured() {
        x.insert(v.clone(), Multiset::zero(&g));
        z.insert(v.clone(), Multiset::zero(&g));
    }
    for (is_x, target, signal, coeff) in xz {
        let family = if is_x { &mut x } else { &mut z };
        let ms = family
            .get_mut(&signal)
            .ok_or(PatternError::UnboundSignal(signal.clone()))?;
        let ti = g.index_of(&target)?;
        let mut entries = ms.entries().to_vec();
        entries[ti] = d.add(entries[ti], d.reduce(coeff));
        *ms = Multiset::from_entries(&g, entries)?;
    }
    let labelling = crate::graph::Labelling::new(&g, labels)?;
    Ok((g, labelling, CorrectionSets { x, z }))
}

/// Executes one branch of a pattern on explicit outcome digits.
///
/// The state register covers the sorted vertex universe; inputs carry
/// `psi_in` (length d^{|I|}, digits by ascending input position in the
/// register, uniform when `None`) and prepared vertices start as |+⟩.
/// `outcomes` must bind every measured vertex, and may additionally bind
/// external signals.
pub fn execute_branch(
    p: &Pattern,
    outcomes: &BTreeMap<Vertex, u64>,
    psi_in: Option<&[C64]>,
) -> Result<BranchOutcome, PatternError> {
    check_runnable(p)?;
    let d = odd_prime(p.d)?;
    let universe = p.universe();
    let site: BTreeMap<&Vertex, usize> = universe.iter().zip(0..).map(|(v, i)| (v, i)).collect();
    let input_set: BTreeSet<&Vertex> = p.inputs.iter().collect();
    let n = universe.len();
    let dn = (p.d as usize).pow(n as u32);
    let uniform;
    let psi_in = match psi_in {
        Some(v) => v,
        None => {
            let len = (p.d as usize).pow(p.inputs.len() as u32);
            uniform = vec![C64::new(1.0 / (len as f64).sqrt(), 0.0); len];
            &uniform
        }
    };
    let expected = (p.d as usize).pow(p.inputs.len() as u32);
    if psi_in.len() != expected {
        return Err(PatternError::Sim(SimError::Dimension(format!(
            "input state has {} amplitudes, expected {expected}",
            psi_in.len()
        ))));
    }
    let rest = n - p.inputs.len();
    let scale = C64::new(1.0 / (p.d as f64).powi(rest as i32).sqrt(), 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); dn];
    let input_sites: Vec<usize> = universe
        .iter()
        .enumerate()
        .filter(|(_, v)| input_set.contains(v))
        .map(|(i, _)| i)
        .collect();
    let probe = QuditState::from_amps(p.d, n, amps.clone())?;
    for (idx, a) in amps.iter_mut().enumerate() {
        let mut in_idx = 0usize;
        for &s in &input_sites {
            in_idx = in_idx * p.d as usize + probe.digit(idx, s) as usize;
        }
        *a = psi_in[in_idx] * scale;
    }
    let mut state = QuditState::from_amps(p.d, n, amps)?;
    let mut recorded: BTreeMap<Vertex, u64> = BTreeMap::new();
    let mut probability = 1.0;
    let signal_value = |v: &Vertex,
                        recorded: &BTreeMap<Vertex, u64>|
     -> Result<u64, PatternError> {
        if let Some(&m) = recorded.get(v) {
            return Ok(m);
        }
        outcomes
            .get(v)
            .copied()
            .map(|m| m % p.d)
            .ok_or_else(|| PatternError::UnboundSignal(v.clone()))
    };
    for c in &p.commands {
        match c {
            Command::N { .. } => {}
            Command::E { u, v, weight } => {
                state.controlled_phase(site[u], site[v], *weight);
            }
            Command::M {
                target,
                label,
                angles,
            } => {
                let m = outcomes
                    .get(target)
                    .copied()
                    .map(|m| m % p.d)
                    .ok_or_else(|| PatternError::MissingOutcome(target.clone()))?;
                let spec = MeasurementSpec {
                    label: *label,
                    angles: angles.clone(),
                };
                spec.validate(p.d)?;
                let basis = eigenbasis(&measurement_unitary(&spec, p.d)?, *label, p.d)?;
                let prob = state
                    .measure_collapse(site[target], &basis[m as usize])
                    .map_err(PatternError::Sim)?;
                probability *= prob;
                recorded.insert(target.clone(), m);
                if prob == 0.0 {
                    probability = 0.0;
                    break;
                }
            }
            Command::X {
                target,
                signal,
                coeff,
            } => {
                let m = signal_value(signal, &recorded)?;
                state.apply_pauli((d.mul(d.reduce(*coeff), m), 0), site[target]);
            }
            Command::Z {
                target,
                signal,
                coeff,
            } => {
                let m = signal_value(signal, &recorded)?;
                state.apply_pauli((0, d.mul(d.reduce(*coeff), m)), site[target]);
            }
        }
    }
    Ok(BranchOutcome {
        outcomes: recorded,
        probability,
        state,
    })
}

/// Whether a serialized pattern lists commands first-acting-first
/// (`execution`) or in operator-composition order, rightmost first
/// (`composition`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderFlag {
    /// First command acts first.
    #[default]
    Execution,
    /// Last command acts first (reversed on load).
    Composition,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternFile {
    d: u64,
    inputs: Vec<Vertex>,
    outputs: Vec<Vertex>,
    #[serde(default)]
    order: OrderFlag,
    commands: Vec<Command>,
}

/// Parses a pattern from JSON, reversing composition-ordered command lists.
pub fn pattern_from_json_str(s: &str) -> Result<Pattern, PatternError> {
    let file: PatternFile =
        serde_json::from_str(s).map_err(|e| PatternError::Json(e.to_string()))?;
    let mut commands = file.commands;
    if file.order == OrderFlag::Composition {
        commands.reverse();
    }
    Ok(Pattern {
        d: file.d,
        inputs: file.inputs,
        outputs: file.outputs,
        commands,
    })
}

/// Serializes a pattern to JSON under the given order convention.
pub fn pattern_to_json(p: &Pattern, order: OrderFlag) -> String {
    let mut commands = p.commands.clone();
    if order == OrderFlag::Composition {
        commands.reverse();
    }
    let file = PatternFile {
        d: p.d,
        inputs: p.inputs.clone(),
        outputs: p.outputs.clone(),
        order,
        commands,
    };
    serde_json::to_string(&file).expect("pattern serialization cannot fail")
}
