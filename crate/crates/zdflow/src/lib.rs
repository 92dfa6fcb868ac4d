//! Correction flows for measurement-based computing on qudits of prime
//! dimension.
//!
//! The crate is organized bottom-up:
//!
//! - [`gfp`] — exact arithmetic and dense linear algebra over the prime field
//!   Z_d, with an operation counter used to measure solver cost empirically.
//! - [`graph`] — labelled open graphs: a weighted graph over Z_d with input
//!   and output vertex sets and measurement labels on the measured vertices.
//! - [`flow`] — the flow object (a correction matrix plus an ordered
//!   partition of the vertices into layers), its validity conditions, the
//!   correction sets it induces, and the delay/depth preorder on partitions.
//! - [`finder`] — the polynomial-time algorithm producing the maximally
//!   delayed flow when one exists, plus a variant that also searches over
//!   measurement labellings.
//! - [`oracle`] — brute-force ground truth for small instances, used to
//!   validate the finder independently.
//! - [`meas`] — single-qudit measurement spaces: the unitaries sharing a
//!   fixed commutation relation with a given Pauli operator, and their
//!   eigenbases.
//! - [`sim`] — a dense state-vector simulator for graph states, branch-wise
//!   pattern execution, and determinism classification.
//! - [`pattern`] — a command-list representation of measurement patterns,
//!   standardization into normal form, and round-trips to and from flows.
//!
//! The `zdflow` binary exposes all of it behind a JSON-speaking CLI.

pub mod finder;
pub mod flow;
pub mod gfp;
pub mod graph;
pub mod meas;
pub mod oracle;
pub mod pattern;
pub mod sim;
