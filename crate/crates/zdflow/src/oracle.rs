//! Brute-force ground truth for small instances.
//!
//! Two independent oracles validate the finder:
//!
//! - [`brute_delayed_layers`] rebuilds the layered partition from its
//!   closed-form characterization: layer 0 is the outputs plus all isolated
//!   vertices, and layer k+1 holds every remaining vertex that admits *some*
//!   correction column supported on the layers below. Candidate columns are
//!   found by raw enumeration of Z_d assignments, not linear algebra, so the
//!   oracle shares no code path with the finder's solver.
//! - [`brute_min_depth`] enumerates every ordered partition of the vertices
//!   (ascending depth, lexicographic within a depth) and reports the first
//!   satisfiable one, which is therefore a minimum-depth flow witness.
//!
//! Candidate enumeration respects the validity conditions exactly: a column
//! for a measured u with label (a, b) has the diagonal entry a (impossible
//! for inputs unless a = 0), is otherwise supported on later-measured
//! non-input vertices, and must reproduce b at u and 0 at every other vertex
//! not measured strictly later.
//!
//! Costs are exponential, so both oracles enforce instance caps and report
//! anything larger as an error instead of silently grinding.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::flow::{FlowError, ZdFlow};
use crate::gfp::{FieldMatrix, GfpError};
use crate::graph::{GraphError, LabelledOpenGraph, Vertex};

/// Errors from the oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// Underlying graph error.
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// Underlying field error.
    #[error(transparent)]
    Field(#[from] GfpError),
    /// Underlying flow error.
    #[error(transparent)]
    Flow(#[from] FlowError),
    /// The labelling does not cover every measured vertex.
    #[error("missing measurement labels on {0:?}")]
    MissingLabels(Vec<Vertex>),
    /// The instance exceeds the configured brute-force caps.
    #[error("instance too large for brute force: {0}")]
    InstanceTooLarge(String),
}

/// Size caps for the two oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Max |V| for [`brute_delayed_layers`].
    pub max_vertices_layers: usize,
    /// Max |V| for [`brute_min_depth`] (full ordered-partition sweep).
    pub max_vertices_depth: usize,
    /// Max modulus for either oracle.
    pub max_d: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices_layers: 6,
            max_vertices_depth: 4,
            max_d: 5,
        }
    }
}

/// Everything the oracles know about an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Whether any valid flow exists.
    pub exists: bool,
    /// Minimum depth over all valid flows, when one exists.
    pub min_depth: Option<usize>,
    /// The maximally delayed layer partition, when a flow exists.
    pub delayed_layers: Option<Vec<BTreeSet<Vertex>>>,
    /// A minimum-depth witness flow (first in enumeration order).
    pub witness: Option<ZdFlow>,
}

fn require_labels(lg: &LabelledOpenGraph) -> Result<(), OracleError> {
    let missing = lg.labelling.missing(&lg.graph);
    if missing.is_empty() {
        Ok(())
    } else {
        Err(OracleError::MissingLabels(missing))
    }
}

fn check_caps(lg: &LabelledOpenGraph, max_vertices: usize, max_d: u64, what: &str) -> Result<(), OracleError> {
    let n = lg.graph.vertex_count();
    let d = lg.graph.d().get();
    if n > max_vertices || d > max_d {
        return Err(OracleError::InstanceTooLarge(format!(
            "{what} handles |V| ≤ {max_vertices} and d ≤ {max_d}, got |V| = {n}, d = {d}"
        )));
    }
    Ok(())
}

/// Finds the lexicographically-first correction column for `u` supported on
/// `later ∖ I` (plus the diagonal), or `None`.
///
/// Enumeration walks the support positions in canonical order with the first
/// position most significant, starting from the all-zero assignment.
fn first_column(lg: &LabelledOpenGraph, u: usize, later: &[usize]) -> Option<Vec<u64>> {
    let g = &lg.graph;
    let d = g.d();
    let n = g.vertex_count();
    let (a, b) = lg
        .labelling
        .get(g.name(u))
        .expect("labels checked before enumeration");
    if g.is_input(g.name(u)) && a != 0 {
        return None;
    }
    let support: Vec<usize> = later
        .iter()
        .copied()
        .filter(|&v| v != u && !g.is_input(g.name(v)))
        .collect();
    let in_later = |v: usize| later.contains(&v);
    let k = support.len();
    let dd = d.get();
    let mut assignment = vec![0u64; k];
    loop {
        let mut col = vec![0u64; n];
        col[u] = a;
        for (i, &v) in support.iter().enumerate() {
            col[v] = assignment[i];
        }
        // gc = G · col, checked against the label and the zero requirements.
        let mut ok = true;
        for v in 0..n {
            let mut acc = 0u64;
            for (w, &cw) in col.iter().enumerate() {
                if cw != 0 {
                    acc = d.add(acc, d.mul(g.adjacency().get(v, w), cw));
                }
            }
            let required = if v == u {
                Some(b)
            } else if in_later(v) {
                None
            } else {
                Some(0)
            };
            if let Some(r) = required {
                if acc != r {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(col);
        }
        // Odometer increment, last position fastest.
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < dd {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// Rebuilds the maximally delayed layer partition from the closed form, or
/// returns `None` when the recursion stalls before covering every vertex.
///
/// Layer 0 is taken literally as outputs ∪ isolated vertices (no label
/// check); on instances where a flow actually exists this agrees with the
/// finder. An empty layer 0 on a non-empty graph already means no flow.
pub fn brute_delayed_layers(
    lg: &LabelledOpenGraph,
    limits: &OracleLimits,
) -> Result<Option<Vec<BTreeSet<Vertex>>>, OracleError> {
    check_caps(lg, limits.max_vertices_layers, limits.max_d, "brute_delayed_layers")?;
    require_labels(lg)?;
    let g = &lg.graph;
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Some(vec![]));
    }
    let mut placed = vec![false; n];
    let mut layer0: BTreeSet<Vertex> = g.outputs().clone();
    for v in g.isolated_vertices() {
        layer0.insert(v);
    }
    if layer0.is_empty() {
        return Ok(None);
    }
    for v in &layer0 {
        placed[g.index_of(v)?] = true;
    }
    let mut layers = vec![layer0];
    loop {
        if placed.iter().all(|&p| p) {
            return Ok(Some(layers));
        }
        let later: Vec<usize> = (0..n).filter(|&i| placed[i]).collect();
        let mut next = BTreeSet::new();
        for u in 0..n {
            if placed[u] {
                continue;
            }
            if first_column(lg, u, &later).is_some() {
                next.insert(g.name(u).clone());
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        for v in &next {
            placed[g.index_of(v)?] = true;
        }
        layers.push(next);
    }
}

/// Minimum-depth existence report by exhaustive ordered-partition search.
///
/// Partitions are enumerated by ascending layer count, lexicographically
/// within a count (each vertex's layer index read as a digit, first vertex
/// most significant), so the first satisfiable partition found gives both
/// the minimum depth and a deterministic witness.
pub fn brute_min_depth(
    lg: &LabelledOpenGraph,
    limits: &OracleLimits,
) -> Result<OracleReport, OracleError> {
    check_caps(lg, limits.max_vertices_depth, limits.max_d, "brute_min_depth")?;
    require_labels(lg)?;
    let g = &lg.graph;
    let n = g.vertex_count();
    if n == 0 {
        let witness = ZdFlow::new(g, FieldMatrix::zeros(0, 0, g.d()), vec![])?;
        return Ok(OracleReport {
            exists: true,
            min_depth: Some(0),
            delayed_layers: Some(vec![]),
            witness: Some(witness),
        });
    }
    for block_count in 1..=n {
        let mut assignment = vec![0usize; n];
        loop {
            if is_surjective(&assignment, block_count) {
                if let Some(flow) = try_partition(lg, &assignment, block_count)? {
                    return Ok(OracleReport {
                        exists: true,
                        min_depth: Some(block_count - 1),
                        delayed_layers: None,
                        witness: Some(flow),
                    });
                }
            }
            // Lexicographic increment with the last vertex fastest.
            let mut pos = n;
            let done = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                assignment[pos] += 1;
                if assignment[pos] < block_count {
                    break false;
                }
                assignment[pos] = 0;
            };
            if done {
                break;
            }
        }
    }
    Ok(OracleReport {
        exists: false,
        min_depth: None,
        delayed_layers: None,
        witness: None,
    })
}

fn is_surjective(assignment: &[usize], block_count: usize) -> bool {
    let mut hit = vec![false; block_count];
    for &b in assignment {
        hit[b] = true;
    }
    hit.into_iter().all(|h| h)
}

/// Tries to satisfy one ordered partition; returns the witness flow on
/// success.
fn try_partition(
    lg: &LabelledOpenGraph,
    assignment: &[usize],
    block_count: usize,
) -> Result<Option<ZdFlow>, OracleError> {
    let g = &lg.graph;
    let n = g.vertex_count();
    let mut c = FieldMatrix::zeros(n, n, g.d());
    for u in 0..n {
        if g.is_output(g.name(u)) {
            continue;
        }
        let later: Vec<usize> = (0..n).filter(|&v| assignment[v] < assignment[u]).collect();
        match first_column(lg, u, &later) {
            Some(col) => {
                for (v, &cv) in col.iter().enumerate() {
                    if cv != 0 {
                        c.set(v, u, cv);
                    }
                }
            }
            None => return Ok(None),
        }
    }
    let mut layers: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); block_count];
    for (v, &b) in assignment.iter().enumerate() {
        layers[b].insert(g.name(v).clone());
    }
    Ok(Some(ZdFlow::new(g, c, layers)?))
}

/// Runs both oracles and assembles the combined report. The delayed layers
/// are only attached when a flow exists (the closed-form recursion can cover
/// non-existent instances with isolated vertices, where its output is
/// meaningless).
pub fn oracle_report(
    lg: &LabelledOpenGraph,
    limits: &OracleLimits,
) -> Result<OracleReport, OracleError> {
    let mut report = brute_min_depth(lg, limits)?;
    if report.exists {
        report.delayed_layers = brute_delayed_layers(lg, limits)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finder::{find_flow, FlowOutcome};
    use crate::flow::{depth, validate_flow};
    use crate::gfp::PrimeModulus;
    use crate::graph::OpenGraph;
    use std::collections::BTreeMap;

    fn pm(d: u64) -> PrimeModulus {
        PrimeModulus::new(d).unwrap()
    }

    fn names(v: &[&str]) -> Vec<Vertex> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn set(v: &[&str]) -> BTreeSet<Vertex> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn limits() -> OracleLimits {
        OracleLimits::default()
    }

    fn path_free() -> LabelledOpenGraph {
        let g = OpenGraph::new(
            pm(3),
            names(&["1", "2"]),
            &[("1".into(), "2".into(), 1)],
            &[],
            &names(&["2"]),
        )
        .unwrap();
        LabelledOpenGraph::new(g, BTreeMap::from([("1".into(), (1, 0))])).unwrap()
    }

    #[test]
    fn path_oracle_matches_reference_values() {
        let lg = path_free();
        let layers = brute_delayed_layers(&lg, &limits()).unwrap().unwrap();
        assert_eq!(layers, vec![set(&["2"]), set(&["1"])]);
        let report = brute_min_depth(&lg, &limits()).unwrap();
        assert!(report.exists);
        assert_eq!(report.min_depth, Some(1));
        let witness = report.witness.unwrap();
        assert!(validate_flow(&lg, &witness).unwrap().ok);
        assert_eq!(depth(&witness), 1);
        assert_eq!(witness.c().get(0, 0), 1);
    }

    #[test]
    fn oracle_agrees_with_finder_on_path() {
        let lg = path_free();
        let found = match find_flow(&lg).unwrap().outcome {
            FlowOutcome::Found(f) => f,
            other => panic!("expected flow, got {other:?}"),
        };
        let layers = brute_delayed_layers(&lg, &limits()).unwrap().unwrap();
        assert_eq!(found.layers(), &layers[..]);
    }

    #[test]
    fn all_output_graph_is_depth_zero() {
        let g = OpenGraph::new(
            pm(3),
            names(&["1", "2"]),
            &[("1".into(), "2".into(), 1)],
            &[],
            &names(&["1", "2"]),
        )
        .unwrap();
        let lg = LabelledOpenGraph::new(g, BTreeMap::new()).unwrap();
        let report = oracle_report(&lg, &limits()).unwrap();
        assert!(report.exists);
        assert_eq!(report.min_depth, Some(0));
        assert_eq!(report.delayed_layers.unwrap(), vec![set(&["1", "2"])]);
    }

    #[test]
    fn triangle_without_outputs_has_no_flow() {
        let g = OpenGraph::new(
            pm(3),
            names(&["a", "b", "c"]),
            &[
                ("a".into(), "b".into(), 1),
                ("b".into(), "c".into(), 1),
                ("a".into(), "c".into(), 1),
            ],
            &[],
            &[],
        )
        .unwrap();
        let lg = LabelledOpenGraph::new(
            g,
            BTreeMap::from([
                ("a".into(), (1, 0)),
                ("b".into(), (1, 0)),
                ("c".into(), (1, 0)),
            ]),
        )
        .unwrap();
        assert_eq!(brute_delayed_layers(&lg, &limits()).unwrap(), None);
        let report = brute_min_depth(&lg, &limits()).unwrap();
        assert!(!report.exists);
        assert_eq!(report.min_depth, None);
        assert!(report.witness.is_none());
    }

    #[test]
    fn isolated_vertex_depends_on_label() {
        let lone = |label: (u64, u64)| {
            let g = OpenGraph::new(pm(3), names(&["u"]), &[], &[], &[]).unwrap();
            LabelledOpenGraph::new(g, BTreeMap::from([("u".into(), label)])).unwrap()
        };
        let good = lone((1, 0));
        let report = brute_min_depth(&good, &limits()).unwrap();
        assert!(report.exists);
        assert_eq!(report.min_depth, Some(0));
        // The literal closed form still covers the vertex even under a label
        // admitting no flow — existence must come from brute_min_depth.
        let bad = lone((0, 1));
        assert_eq!(
            brute_delayed_layers(&bad, &limits()).unwrap(),
            Some(vec![set(&["u"])])
        );
        let report = brute_min_depth(&bad, &limits()).unwrap();
        assert!(!report.exists);
        let combined = oracle_report(&bad, &limits()).unwrap();
        assert!(combined.delayed_layers.is_none());
    }

    #[test]
    fn instance_caps_are_enforced() {
        let big = OpenGraph::new(
            pm(3),
            (0..7).map(|i| i.to_string()).collect(),
            &[],
            &[],
            &[],
        )
        .unwrap();
        let lg = LabelledOpenGraph::new(
            big,
            (0..7).map(|i| (i.to_string(), (1, 0))).collect(),
        )
        .unwrap();
        assert!(matches!(
            brute_delayed_layers(&lg, &limits()).unwrap_err(),
            OracleError::InstanceTooLarge(_)
        ));
        let five = OpenGraph::new(
            pm(3),
            (0..5).map(|i| i.to_string()).collect(),
            &[],
            &[],
            &[],
        )
        .unwrap();
        let lg5 = LabelledOpenGraph::new(
            five,
            (0..5).map(|i| (i.to_string(), (1, 0))).collect(),
        )
        .unwrap();
        assert!(matches!(
            brute_min_depth(&lg5, &limits()).unwrap_err(),
            OracleError::InstanceTooLarge(_)
        ));
        // But the layer oracle still accepts 5 ≤ 6 vertices.
        assert!(brute_delayed_layers(&lg5, &limits()).is_ok());
    }

    #[test]
    fn missing_labels_are_reported() {
        let g = OpenGraph::new(pm(3), names(&["u"]), &[], &[], &[]).unwrap();
        let lg = LabelledOpenGraph::new(g, BTreeMap::new()).unwrap();
        assert_eq!(
            brute_min_depth(&lg, &limits()).unwrap_err(),
            OracleError::MissingLabels(names(&["u"]))
        );
    }

    #[test]
    fn min_depth_can_beat_delayed_depth() {
        // A 3-path with both ends measured: the maximally delayed flow
        // spreads over three layers, but no shallower flow exists here; use
        // a graph where a flat partition works to check the minimum is
        // genuinely searched: two disjoint edges, one output each.
        let g = OpenGraph::new(
            pm(3),
            names(&["a", "b", "x", "y"]),
            &[
                ("a".into(), "b".into(), 1),
                ("x".into(), "y".into(), 1),
            ],
            &[],
            &names(&["b", "y"]),
        )
        .unwrap();
        let lg = LabelledOpenGraph::new(
            g,
            BTreeMap::from([("a".into(), (1, 0)), ("x".into(), (1, 0))]),
        )
        .unwrap();
        let report = brute_min_depth(&lg, &limits()).unwrap();
        assert_eq!(report.min_depth, Some(1), "both measurements fit one layer");
        let layers = brute_delayed_layers(&lg, &limits()).unwrap().unwrap();
        assert_eq!(layers, vec![set(&["b", "y"]), set(&["a", "x"])]);
    }
}
