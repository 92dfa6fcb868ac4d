//! Shared instance generators for the integration suites.
//!
//! Each test binary compiles this module independently, so not every helper
//! is used everywhere.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use zdflow::gfp::PrimeModulus;
use zdflow::graph::{LabelledOpenGraph, OpenGraph, Vertex};
use zdflow::meas::MeasurementSpec;
use zdflow::pattern::{Command, Pattern};

pub fn pm(d: u64) -> PrimeModulus {
    PrimeModulus::new(d).unwrap()
}

/// Every nonzero measurement label mod d.
pub fn nonzero_labels(d: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for a in 0..d {
        for b in 0..d {
            if (a, b) != (0, 0) {
                out.push((a, b));
            }
        }
    }
    out
}

/// A uniformly random nonzero label mod d.
pub fn random_label(rng: &mut ChaCha20Rng, d: u64) -> (u64, u64) {
    let a = rng.random_range(0..d);
    let b = if a == 0 {
        rng.random_range(1..d)
    } else {
        rng.random_range(0..d)
    };
    (a, b)
}

/// Mixed-radix odometer: calls `f` on every digit string of the given length.
pub fn odometer(radix: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut digits = vec![0usize; len];
    loop {
        f(&digits);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < radix {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// A random labelled open graph: `n` vertices, each edge present with the
/// given probability (random nonzero weight), inputs with probability 1/4,
/// outputs with probability 1/3, uniform nonzero labels on measured vertices.
pub fn random_instance(
    rng: &mut ChaCha20Rng,
    d: u64,
    n: usize,
    edge_p: f64,
) -> LabelledOpenGraph {
    let vertices: Vec<Vertex> = (1..=n).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_range(0.0..1.0) < edge_p {
                edges.push((
                    vertices[i].clone(),
                    vertices[j].clone(),
                    rng.random_range(1..d),
                ));
            }
        }
    }
    let inputs: Vec<Vertex> = vertices
        .iter()
        .filter(|_| rng.random_range(0..4) == 0)
        .cloned()
        .collect();
    let outputs: Vec<Vertex> = vertices
        .iter()
        .filter(|_| rng.random_range(0..3) == 0)
        .cloned()
        .collect();
    let g = OpenGraph::new(pm(d), vertices, &edges, &inputs, &outputs).unwrap();
    let labels: BTreeMap<Vertex, (u64, u64)> = g
        .measured()
        .into_iter()
        .map(|v| (v, random_label(rng, d)))
        .collect();
    LabelledOpenGraph::new(g, labels).unwrap()
}

/// A random measurement spec with uniform angles in [0, 2π).
pub fn random_spec(label: (u64, u64), d: u64, rng: &mut ChaCha20Rng) -> MeasurementSpec {
    MeasurementSpec {
        label,
        angles: (1..d)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect(),
    }
}

/// Random specs for every measured vertex of an instance.
pub fn random_specs(
    lg: &LabelledOpenGraph,
    rng: &mut ChaCha20Rng,
) -> BTreeMap<Vertex, MeasurementSpec> {
    let d = lg.graph.d().get();
    lg.graph
        .measured()
        .into_iter()
        .map(|v| {
            let label = lg.labelling.get(&v).unwrap();
            (v, random_spec(label, d, rng))
        })
        .collect()
}

/// A random runnable pattern over ≤ 4 qudits at d = 3, built left to right
/// against the runnability disciplines. Signals are drawn from
/// already-measured vertices, with an occasional external signal "s".
pub fn random_runnable_pattern(rng: &mut ChaCha20Rng) -> Pattern {
    let d = 3u64;
    let n = rng.random_range(1..=4usize);
    let vertices: Vec<Vertex> = (1..=n).map(|i| i.to_string()).collect();
    let outputs: Vec<Vertex> = vertices
        .iter()
        .filter(|_| rng.random_range(0..3) == 0)
        .cloned()
        .collect();
    let inputs: Vec<Vertex> = vertices
        .iter()
        .filter(|_| rng.random_range(0..4) == 0)
        .cloned()
        .collect();
    let mut to_measure: Vec<Vertex> = vertices
        .iter()
        .filter(|v| !outputs.contains(v))
        .cloned()
        .collect();
    to_measure.shuffle(rng);
    let mut to_prepare: Vec<Vertex> = vertices
        .iter()
        .filter(|v| !inputs.contains(v))
        .cloned()
        .collect();
    to_prepare.shuffle(rng);

    let mut alive: BTreeSet<Vertex> = inputs.iter().cloned().collect();
    let mut done: Vec<Vertex> = Vec::new();
    let mut commands = Vec::new();
    while !to_prepare.is_empty() || !to_measure.is_empty() {
        match rng.random_range(0..10) {
            0..4 if !to_prepare.is_empty() => {
                let v = to_prepare.pop().unwrap();
                commands.push(Command::N { target: v.clone() });
                alive.insert(v);
            }
            4..6 if alive.len() >= 2 => {
                let pick: Vec<&Vertex> = alive.iter().collect();
                let i = rng.random_range(0..pick.len());
                let j = rng.random_range(0..pick.len());
                if i != j {
                    commands.push(Command::E {
                        u: pick[i].clone(),
                        v: pick[j].clone(),
                        weight: rng.random_range(1..d),
                    });
                }
            }
            6..8 if !alive.is_empty() => {
                let pick: Vec<&Vertex> = alive.iter().collect();
                let target = pick[rng.random_range(0..pick.len())].clone();
                let signal = if !done.is_empty() && rng.random_range(0..4) > 0 {
                    done[rng.random_range(0..done.len())].clone()
                } else {
                    "s".to_string()
                };
                let coeff = rng.random_range(1..d);
                commands.push(if rng.random_range(0..2) == 0 {
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
            _ if !to_measure.is_empty() => {
                let v = to_measure[0].clone();
                if alive.contains(&v) {
                    to_measure.remove(0);
                    alive.remove(&v);
                    commands.push(Command::M {
                        target: v.clone(),
                        label: random_label(rng, d),
                        angles: (1..d)
                            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                            .collect(),
                    });
                    done.push(v);
                } else if let Some(pos) = to_prepare.iter().position(|p| p == &v) {
                    let v = to_prepare.remove(pos);
                    commands.push(Command::N { target: v.clone() });
                    alive.insert(v);
                }
            }
            _ => {}
        }
    }
    Pattern {
        d,
        inputs,
        outputs,
        commands,
    }
}
