//! Correction flows: the central object of the crate.
//!
//! A flow for a labelled open graph is a pair (C, Λ) of a correction matrix
//! C ∈ Z_d^{V×V} and an ordered partition Λ of the vertices into layers.
//! Layer 0 is the *last*-measured layer (it holds the outputs), and execution
//! proceeds from the highest-indexed layer down to layer 0, so corrections
//! for a vertex in layer k may only touch vertices in layers j < k.
//!
//! Validity of (C, Λ) is three conditions, checked in order with a
//! deterministic first-violation witness:
//!
//! 1. **Label match** — for every measured u, the diagonal pair
//!    (C_uu, (GC)_uu) equals the measurement label λ(u).
//! 2. **Zero blocks** — rows of C at input vertices and columns of C at
//!    output vertices vanish (diagonal included: a measured input therefore
//!    only admits labels of the form (0, b)).
//! 3. **Layer structure** — within a layer, C and GC are diagonal; between
//!    layers, the block of rows at an earlier-measured layer and columns at a
//!    later-measured layer vanishes, for both C and GC.
//!
//! A valid flow induces per-vertex correction multisets (the X corrections
//! are C's column with the diagonal label removed; the Z corrections are
//! GC's column likewise), a partial "signal precedes target" order on the
//! measured vertices, and the triangular form of the correction matrix under
//! every totalisation of the layer order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gfp::{FieldMatrix, GfpError};
use crate::graph::{GraphError, LabelledOpenGraph, Multiset, OpenGraph, Vertex};

/// Errors from flow construction and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    /// Underlying graph error.
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// Underlying field error.
    #[error(transparent)]
    Field(#[from] GfpError),
    /// Layers fail to partition the vertex set (empty block, overlap, or a
    /// missed / unknown vertex).
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    /// Requested layer index past the end of the partition.
    #[error("layer index {index} out of range ({len} layers)")]
    IndexOutOfRange { index: usize, len: usize },
    /// The labelling does not cover every measured vertex.
    #[error("missing measurement labels on {0:?}")]
    MissingLabels(Vec<Vertex>),
    /// An operation that requires a valid flow received an invalid one.
    #[error("invalid flow: {0}")]
    InvalidFlow(String),
    /// The correction sets order the measured vertices cyclically.
    #[error("correction dependencies are cyclic on {0:?}")]
    CyclicDependency(Vec<Vertex>),
    /// Two partitions range over different vertex sets.
    #[error("partitions range over different vertex sets")]
    PartitionMismatch,
    /// A totalisation is not a permutation of the vertex set.
    #[error("malformed order: {0}")]
    MalformedOrder(String),
    /// The JSON document failed to parse or had the wrong shape.
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// A flow candidate: correction matrix plus layered partition (layer 0 =
/// measured last). Construction validates shapes and the partition property,
/// not the flow conditions; see [`validate_flow`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZdFlow {
    c: FieldMatrix,
    layers: Vec<BTreeSet<Vertex>>,
}

impl ZdFlow {
    /// Builds a flow candidate over `g`, checking that `c` is |V|×|V| over
    /// the right modulus and that `layers` is an ordered partition of V with
    /// no empty block.
    pub fn new(
        g: &OpenGraph,
        c: FieldMatrix,
        layers: Vec<BTreeSet<Vertex>>,
    ) -> Result<Self, FlowError> {
        let n = g.vertex_count();
        if c.row_count() != n || c.col_count() != n {
            return Err(FlowError::Field(GfpError::DimensionMismatch(format!(
                "correction matrix is {}x{} over {} vertices",
                c.row_count(),
                c.col_count(),
                n
            ))));
        }
        if c.modulus() != g.d() {
            return Err(FlowError::Field(GfpError::ModulusMismatch(
                c.modulus().get(),
                g.d().get(),
            )));
        }
        let mut seen: BTreeSet<&Vertex> = BTreeSet::new();
        for (k, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(FlowError::MalformedPartition(format!(
                    "layer {k} is empty"
                )));
            }
            for v in layer {
                g.index_of(v)?;
                if !seen.insert(v) {
                    return Err(FlowError::MalformedPartition(format!(
                        "vertex {v:?} appears in two layers"
                    )));
                }
            }
        }
        if seen.len() != n {
            let missing: Vec<&Vertex> =
                g.vertices().iter().filter(|v| !seen.contains(v)).collect();
            return Err(FlowError::MalformedPartition(format!(
                "vertices {missing:?} are in no layer"
            )));
        }
        Ok(ZdFlow { c, layers })
    }

    /// The correction matrix in canonical vertex order.
    pub fn c(&self) -> &FieldMatrix {
        &self.c
    }

    /// The layers, index 0 first (measured last).
    pub fn layers(&self) -> &[BTreeSet<Vertex>] {
        &self.layers
    }

    /// Per-vertex layer index in canonical vertex order.
    pub fn layer_map(&self, g: &OpenGraph) -> Vec<usize> {
        let mut map = vec![0usize; g.vertex_count()];
        for (k, layer) in self.layers.iter().enumerate() {
            for v in layer {
                map[g.index_of(v).expect("validated at construction")] = k;
            }
        }
        map
    }

    /// Measurement execution order of the layers: highest index first.
    pub fn execution_layers(&self) -> impl Iterator<Item = &BTreeSet<Vertex>> {
        self.layers.iter().rev()
    }
}

/// Flow depth: one less than the number of layers (a single layer has
/// depth 0, as does the degenerate empty partition).
pub fn depth(f: &ZdFlow) -> usize {
    f.layers().len().saturating_sub(1)
}

/// Layer k of the flow, erroring past the end.
pub fn layer_at(f: &ZdFlow, k: usize) -> Result<&BTreeSet<Vertex>, FlowError> {
    f.layers().get(k).ok_or(FlowError::IndexOutOfRange {
        index: k,
        len: f.layers().len(),
    })
}

/// Which flow condition a violation witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolatedCondition {
    /// Condition 1: diagonal pair differs from the measurement label.
    LabelMatch,
    /// Condition 2: nonzero entry in an input row or output column of C.
    ZeroBlocks,
    /// Condition 3: off-diagonal entry within a layer, or a nonzero entry
    /// from an earlier-measured row into a later-measured column.
    LayerStructure,
    /// Total-order triangularity (the totalised form of condition 3).
    Triangularity,
}

/// A first-violation witness: the condition, the (row, column) vertex pair
/// it was detected at, and a human-readable detail string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Violated condition.
    pub condition: ViolatedCondition,
    /// Row and column vertex of the offending entry (equal for label
    /// mismatches).
    pub witness: (Vertex, Vertex),
    /// Explanation of the offending value.
    pub detail: String,
}

/// Pass/fail verdict with the first violation found, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    /// True when all conditions hold.
    pub ok: bool,
    /// First violation in scan order (conditions 1, 2, 3; row-major within
    /// each).
    pub violation: Option<Violation>,
}

fn require_total_labelling(lg: &LabelledOpenGraph) -> Result<(), FlowError> {
    let missing = lg.labelling.missing(&lg.graph);
    if missing.is_empty() {
        Ok(())
    } else {
        Err(FlowError::MissingLabels(missing))
    }
}

/// Checks the three flow conditions, reporting the first violation.
///
/// Structural problems (wrong shapes, labels missing on measured vertices)
/// are errors; condition violations are a non-ok report.
pub fn validate_flow(lg: &LabelledOpenGraph, f: &ZdFlow) -> Result<ValidityReport, FlowError> {
    require_total_labelling(lg)?;
    let g = &lg.graph;
    let n = g.vertex_count();
    let gc = g.adjacency().mat_mul(f.c())?;
    let fail = |condition, u: usize, v: usize, detail: String| ValidityReport {
        ok: false,
        violation: Some(Violation {
            condition,
            witness: (g.name(u).clone(), g.name(v).clone()),
            detail,
        }),
    };

    // Condition 1: diagonal pairs match the labels on measured vertices.
    for u in 0..n {
        if g.is_output(g.name(u)) {
            continue;
        }
        let label = lg
            .labelling
            .get(g.name(u))
            .expect("labelling checked total");
        let actual = (f.c().get(u, u), gc.get(u, u));
        if actual != label {
            return Ok(fail(
                ViolatedCondition::LabelMatch,
                u,
                u,
                format!("diagonal pair {actual:?} differs from label {label:?}"),
            ));
        }
    }

    // Condition 2: input rows and output columns of C vanish.
    for u in 0..n {
        for v in 0..n {
            let entry = f.c().get(u, v);
            if entry == 0 {
                continue;
            }
            if g.is_input(g.name(u)) {
                return Ok(fail(
                    ViolatedCondition::ZeroBlocks,
                    u,
                    v,
                    format!("C[{u},{v}] = {entry} lies in an input row"),
                ));
            }
            if g.is_output(g.name(v)) {
                return Ok(fail(
                    ViolatedCondition::ZeroBlocks,
                    u,
                    v,
                    format!("C[{u},{v}] = {entry} lies in an output column"),
                ));
            }
        }
    }

    // Condition 3: within-layer diagonality and the between-layer zero
    // blocks, for C first and then GC.
    let layer_of = f.layer_map(g);
    for (matrix, name) in [(f.c(), "C"), (&gc, "GC")] {
        for u in 0..n {
            for v in 0..n {
                if u == v || matrix.get(u, v) == 0 {
                    continue;
                }
                // Row layer measured earlier (higher index) than or equal to
                // the column layer means the entry targets a vertex that is
                // not measured strictly later than its signal.
                if layer_of[u] == layer_of[v] {
                    return Ok(fail(
                        ViolatedCondition::LayerStructure,
                        u,
                        v,
                        format!("{name} is not diagonal within layer {}", layer_of[u]),
                    ));
                }
                if layer_of[u] > layer_of[v] {
                    return Ok(fail(
                        ViolatedCondition::LayerStructure,
                        u,
                        v,
                        format!(
                            "{name}[{u},{v}] targets layer {} from the later layer {}",
                            layer_of[u], layer_of[v]
                        ),
                    ));
                }
            }
        }
    }
    Ok(ValidityReport {
        ok: true,
        violation: None,
    })
}

/// The X and Z correction multisets of a valid flow, keyed by measured
/// vertex.
///
/// For a measured v with label (a, b): x(v) is C's column at v with `a`
/// removed from the diagonal entry, z(v) is (GC)'s column with `b` removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionSets {
    /// X-correction multiset per measured vertex.
    pub x: BTreeMap<Vertex, Multiset>,
    /// Z-correction multiset per measured vertex.
    pub z: BTreeMap<Vertex, Multiset>,
}

impl CorrectionSets {
    /// True if every multiset in both families is zero.
    pub fn is_zero(&self) -> bool {
        self.x.values().all(Multiset::is_zero) && self.z.values().all(Multiset::is_zero)
    }

    /// A copy with every multiset zeroed (used as a negative control when
    /// probing determinism).
    pub fn zeroed(&self, g: &OpenGraph) -> CorrectionSets {
        let zero = |m: &BTreeMap<Vertex, Multiset>| {
            m.keys()
                .map(|v| (v.clone(), Multiset::zero(g)))
                .collect::<BTreeMap<_, _>>()
        };
        CorrectionSets {
            x: zero(&self.x),
            z: zero(&self.z),
        }
    }
}

/// Extracts the correction sets of a flow, validating it first.
pub fn corrections(lg: &LabelledOpenGraph, f: &ZdFlow) -> Result<CorrectionSets, FlowError> {
    let report = validate_flow(lg, f)?;
    if let Some(v) = report.violation {
        return Err(FlowError::InvalidFlow(format!(
            "{:?} at {:?}: {}",
            v.condition, v.witness, v.detail
        )));
    }
    let g = &lg.graph;
    let n = g.vertex_count();
    let gc = g.adjacency().mat_mul(f.c())?;
    let d = g.d();
    let mut x = BTreeMap::new();
    let mut z = BTreeMap::new();
    for v in 0..n {
        let name = g.name(v);
        if g.is_output(name) {
            continue;
        }
        let (a, b) = lg.labelling.get(name).expect("validated total");
        let mut xcol: Vec<u64> = (0..n).map(|u| f.c().get(u, v)).collect();
        xcol[v] = d.sub(xcol[v], a);
        let mut zcol: Vec<u64> = (0..n).map(|u| gc.get(u, v)).collect();
        zcol[v] = d.sub(zcol[v], b);
        x.insert(name.clone(), Multiset::from_entries(g, xcol)?);
        z.insert(name.clone(), Multiset::from_entries(g, zcol)?);
    }
    Ok(CorrectionSets { x, z })
}

/// A strict partial order on the measured vertices, transitively closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrder {
    elements: Vec<Vertex>,
    index: BTreeMap<Vertex, usize>,
    // precedes[a][b] = true ⟺ a ≺ b (strict).
    precedes: Vec<Vec<bool>>,
}

impl PartialOrder {
    /// The ordered elements (canonical vertex order).
    pub fn elements(&self) -> &[Vertex] {
        &self.elements
    }

    /// True when `a ≺ b`.
    pub fn precedes(&self, a: &str, b: &str) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.precedes[i][j],
            _ => false,
        }
    }

    /// All strict pairs (a, b) with a ≺ b.
    pub fn pairs(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for i in 0..self.elements.len() {
            for j in 0..self.elements.len() {
                if self.precedes[i][j] {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    /// True when `order` is a permutation of the elements compatible with
    /// the partial order.
    pub fn is_linear_extension(&self, order: &[Vertex]) -> bool {
        if order.len() != self.elements.len() {
            return false;
        }
        let mut pos: BTreeMap<&Vertex, usize> = BTreeMap::new();
        for (k, v) in order.iter().enumerate() {
            if !self.index.contains_key(v) || pos.insert(v, k).is_some() {
                return false;
            }
        }
        for i in 0..self.elements.len() {
            for j in 0..self.elements.len() {
                if self.precedes[i][j] && pos[&self.elements[i]] >= pos[&self.elements[j]] {
                    return false;
                }
            }
        }
        true
    }

    /// A random linear extension (Kahn's algorithm with a shuffled frontier).
    pub fn random_linear_extension<R: rand::Rng>(&self, rng: &mut R) -> Vec<Vertex> {
        let n = self.elements.len();
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut out = Vec::with_capacity(n);
        while !remaining.is_empty() {
            let frontier: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&j| !remaining.iter().any(|&i| self.precedes[i][j]))
                .collect();
            let pick = frontier[rng.random_range(0..frontier.len())];
            out.push(self.elements[pick].clone());
            remaining.retain(|&i| i != pick);
        }
        out
    }
}

/// Derives the correction-dependency order: v ≺ u whenever measuring v
/// requires a correction on the still-unmeasured u (x(v)_u ≠ 0 or
/// z(v)_u ≠ 0 for measured u ≠ v), transitively closed. A cycle means the
/// corrections cannot be scheduled and is an error.
pub fn induced_order(g: &OpenGraph, c: &CorrectionSets) -> Result<PartialOrder, FlowError> {
    // Every measured vertex participates: vertices without correction
    // entries are unconstrained but still need a slot in the order.
    let elements: Vec<Vertex> = g.measured();
    let index: BTreeMap<Vertex, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();
    let m = elements.len();
    let mut precedes = vec![vec![false; m]; m];
    for (v, vi) in index.iter() {
        for fam in [&c.x, &c.z] {
            let Some(ms) = fam.get(v) else { continue };
            for u_idx in ms.support() {
                let u = g.name(u_idx);
                if u == v {
                    continue;
                }
                if let Some(&ui) = index.get(u) {
                    precedes[*vi][ui] = true;
                }
            }
        }
    }
    // Transitive closure.
    for k in 0..m {
        for i in 0..m {
            if !precedes[i][k] {
                continue;
            }
            for j in 0..m {
                if precedes[k][j] {
                    precedes[i][j] = true;
                }
            }
        }
    }
    let cycle: Vec<Vertex> = (0..m)
        .filter(|&i| precedes[i][i])
        .map(|i| elements[i].clone())
        .collect();
    if !cycle.is_empty() {
        return Err(FlowError::CyclicDependency(cycle));
    }
    Ok(PartialOrder {
        elements,
        index,
        precedes,
    })
}

/// Triangular-form verdict for a totalised measurement order; same witness
/// structure as [`ValidityReport`].
pub type TriangularReport = ValidityReport;

/// Checks the totalised form of validity for a full measurement order
/// (earliest-measured first, outputs at the end in any position after every
/// measured vertex that corrects them).
///
/// Conditions 1 and 2 are as in [`validate_flow`]; condition 3 becomes: a
/// nonzero off-diagonal entry of C or GC at (u, v) demands that u comes
/// strictly after v in `order`.
pub fn check_triangular_form(
    lg: &LabelledOpenGraph,
    c: &FieldMatrix,
    order: &[Vertex],
) -> Result<TriangularReport, FlowError> {
    require_total_labelling(lg)?;
    let g = &lg.graph;
    let n = g.vertex_count();
    if c.row_count() != n || c.col_count() != n {
        return Err(FlowError::Field(GfpError::DimensionMismatch(format!(
            "correction matrix is {}x{} over {} vertices",
            c.row_count(),
            c.col_count(),
            n
        ))));
    }
    if order.len() != n {
        return Err(FlowError::MalformedOrder(format!(
            "order lists {} of {} vertices",
            order.len(),
            n
        )));
    }
    let mut pos = vec![usize::MAX; n];
    for (k, v) in order.iter().enumerate() {
        let i = g.index_of(v)?;
        if pos[i] != usize::MAX {
            return Err(FlowError::MalformedOrder(format!(
                "vertex {v:?} listed twice"
            )));
        }
        pos[i] = k;
    }
    let gc = g.adjacency().mat_mul(c)?;
    let fail = |condition, u: usize, v: usize, detail: String| ValidityReport {
        ok: false,
        violation: Some(Violation {
            condition,
            witness: (g.name(u).clone(), g.name(v).clone()),
            detail,
        }),
    };
    for u in 0..n {
        if g.is_output(g.name(u)) {
            continue;
        }
        let label = lg.labelling.get(g.name(u)).expect("labelling total");
        let actual = (c.get(u, u), gc.get(u, u));
        if actual != label {
            return Ok(fail(
                ViolatedCondition::LabelMatch,
                u,
                u,
                format!("diagonal pair {actual:?} differs from label {label:?}"),
            ));
        }
    }
    for u in 0..n {
        for v in 0..n {
            let entry = c.get(u, v);
            if entry == 0 {
                continue;
            }
            if g.is_input(g.name(u)) {
                return Ok(fail(
                    ViolatedCondition::ZeroBlocks,
                    u,
                    v,
                    format!("C[{u},{v}] = {entry} lies in an input row"),
                ));
            }
            if g.is_output(g.name(v)) {
                return Ok(fail(
                    ViolatedCondition::ZeroBlocks,
                    u,
                    v,
                    format!("C[{u},{v}] = {entry} lies in an output column"),
                ));
            }
        }
    }
    for (matrix, name) in [(c, "C"), (&gc, "GC")] {
        for u in 0..n {
            for v in 0..n {
                if u == v || matrix.get(u, v) == 0 {
                    continue;
                }
                if pos[u] <= pos[v] {
                    return Ok(fail(
                        ViolatedCondition::Triangularity,
                        u,
                        v,
                        format!(
                            "{name}[{u},{v}] ≠ 0 but the target is measured at position {} ≤ signal position {}",
                            pos[u], pos[v]
                        ),
                    ));
                }
            }
        }
    }
    Ok(ValidityReport {
        ok: true,
        violation: None,
    })
}

/// All totalisations of a flow's layer order (execution order: last layer
/// first), up to `cap` many. Each totalisation lists all vertices, outputs
/// included.
pub fn layer_totalisations(f: &ZdFlow, cap: usize) -> Vec<Vec<Vertex>> {
    fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, v) in items.iter().enumerate() {
            let mut rest: Vec<Vertex> = items.to_vec();
            rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, v.clone());
                out.push(tail);
            }
        }
        out
    }
    let mut acc: Vec<Vec<Vertex>> = vec![vec![]];
    for layer in f.execution_layers() {
        let items: Vec<Vertex> = layer.iter().cloned().collect();
        let perms = permutations(&items);
        let mut next = Vec::new();
        'outer: for prefix in &acc {
            for p in &perms {
                let mut full = prefix.clone();
                full.extend(p.iter().cloned());
                next.push(full);
                if next.len() >= cap {
                    break 'outer;
                }
            }
        }
        acc = next;
    }
    acc
}

/// Outcome of comparing two layered partitions by cumulative prefix size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DelayComparison {
    /// First argument is strictly more delayed (≥ everywhere, > somewhere).
    More,
    /// Neither strictly more delayed nor crossing (equal or dominated).
    NotMore,
    /// Prefix sums cross: strictly greater at one index, strictly smaller at
    /// another.
    Incomparable,
}

/// Compares two partitions of the same vertex set by delay: partition `a` is
/// more delayed than `b` when every cumulative layer-size prefix
/// |a_0| + … + |a_k| is at least the corresponding prefix of `b`, with
/// strict inequality somewhere.
pub fn is_more_delayed(
    a: &[BTreeSet<Vertex>],
    b: &[BTreeSet<Vertex>],
) -> Result<DelayComparison, FlowError> {
    let flatten = |p: &[BTreeSet<Vertex>]| -> Result<BTreeSet<Vertex>, FlowError> {
        let mut all = BTreeSet::new();
        for (k, layer) in p.iter().enumerate() {
            if layer.is_empty() {
                return Err(FlowError::MalformedPartition(format!("layer {k} is empty")));
            }
            for v in layer {
                if !all.insert(v.clone()) {
                    return Err(FlowError::MalformedPartition(format!(
                        "vertex {v:?} appears in two layers"
                    )));
                }
            }
        }
        Ok(all)
    };
    let va = flatten(a)?;
    let vb = flatten(b)?;
    if va != vb {
        return Err(FlowError::PartitionMismatch);
    }
    let total = va.len();
    let cumulative = |p: &[BTreeSet<Vertex>], k: usize| -> usize {
        p.iter().take(k + 1).map(BTreeSet::len).sum::<usize>().min(total)
    };
    let depth = a.len().max(b.len());
    let (mut some_gt, mut some_lt) = (false, false);
    for k in 0..depth {
        let ca = cumulative(a, k);
        let cb = cumulative(b, k);
        some_gt |= ca > cb;
        some_lt |= ca < cb;
    }
    Ok(match (some_gt, some_lt) {
        (true, true) => DelayComparison::Incomparable,
        (true, false) => DelayComparison::More,
        _ => DelayComparison::NotMore,
    })
}

/// On-disk JSON schema for flows:
///
/// ```json
/// { "C": [[0, 0], [1, 0]], "layers": [["2"], ["1"]] }
/// ```
///
/// `C` is indexed by the graph's canonical vertex order; `layers` lists
/// layer 0 (measured last) first. Entries must be non-negative and are
/// reduced mod d.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlowFile {
    #[serde(rename = "C")]
    c: Vec<Vec<i64>>,
    layers: Vec<Vec<String>>,
}

/// Parses a flow for `g` from JSON.
pub fn flow_from_json_str(s: &str, g: &OpenGraph) -> Result<ZdFlow, FlowError> {
    let file: FlowFile = serde_json::from_str(s).map_err(|e| FlowError::Json(e.to_string()))?;
    let n = g.vertex_count();
    if file.c.len() != n {
        return Err(FlowError::Field(GfpError::DimensionMismatch(format!(
            "C has {} rows over {} vertices",
            file.c.len(),
            n
        ))));
    }
    let mut c = FieldMatrix::zeros(n, n, g.d());
    for (r, row) in file.c.iter().enumerate() {
        if row.len() != n {
            return Err(FlowError::Field(GfpError::DimensionMismatch(format!(
                "C row {r} has {} entries over {} vertices",
                row.len(),
                n
            ))));
        }
        for (cc, &v) in row.iter().enumerate() {
            if v < 0 {
                return Err(FlowError::Graph(GraphError::NegativeValue {
                    value: v,
                    context: format!("C[{r},{cc}]"),
                }));
            }
            c.set(r, cc, v as u64);
        }
    }
    let layers: Vec<BTreeSet<Vertex>> = file
        .layers
        .into_iter()
        .map(|l| l.into_iter().collect())
        .collect();
    ZdFlow::new(g, c, layers)
}

/// Serializes a flow to the JSON schema.
pub fn flow_to_json(f: &ZdFlow) -> String {
    let n = f.c().row_count();
    let c: Vec<Vec<i64>> = (0..n)
        .map(|r| (0..n).map(|cc| f.c().get(r, cc) as i64).collect())
        .collect();
    let layers: Vec<Vec<String>> = f
        .layers()
        .iter()
        .map(|l| l.iter().cloned().collect())
        .collect();
    serde_json::to_string(&FlowFile { c, layers }).expect("flow serialization cannot fail")
}
