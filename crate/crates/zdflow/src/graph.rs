//! Labelled open graphs over Z_d.
//!
//! An open graph is an undirected graph with edge weights in Z_d together
//! with two distinguished (possibly overlapping) vertex subsets: inputs and
//! outputs. Non-output vertices are the *measured* vertices; a labelling
//! assigns each of them a measurement label (a, b) ≠ (0, 0), naming the Pauli
//! X^a·Z^b whose measurement space the vertex is measured in.
//!
//! Vertices are opaque strings. All matrix-facing APIs use the canonical
//! (lexicographic, byte-wise) vertex order, so a graph's adjacency matrix and
//! any flow matrix over it are indexed identically regardless of the order
//! the vertices were listed in.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gfp::{FieldMatrix, GfpError, PrimeModulus};

/// Vertex names are opaque strings.
pub type Vertex = String;

/// Errors from graph construction and the JSON loader.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    /// Underlying field/modulus error (non-prime d, etc.).
    #[error(transparent)]
    Field(#[from] GfpError),
    /// A vertex name was referenced but never declared.
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    /// The same vertex name was declared twice.
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    /// Two edges connect the same unordered pair (no implicit merging).
    #[error("duplicate edge between {0:?} and {1:?}")]
    DuplicateEdge(String, String),
    /// An edge connects a vertex to itself.
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    /// A weight or label component was negative.
    #[error("negative value {value} for {context}")]
    NegativeValue { value: i64, context: String },
    /// A measurement label was (0, 0), which names no Pauli.
    #[error("zero label (0,0) on vertex {0:?}")]
    ZeroLabel(String),
    /// A measurement label was assigned to a non-measured (output) vertex.
    #[error("label on output vertex {0:?}")]
    LabelOnOutput(String),
    /// Neither the file nor the command line provided a modulus.
    #[error("no modulus: the file has no \"d\" field and no override was given")]
    MissingModulus,
    /// Both the file and the command line provided a modulus.
    #[error("conflicting moduli: file declares d={file}, override gives d={override_}")]
    ConflictingModulus { file: u64, override_: u64 },
    /// The JSON document failed to parse or had the wrong shape.
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// An open graph: weighted adjacency over Z_d plus input/output sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenGraph {
    d: PrimeModulus,
    vertices: Vec<Vertex>,
    index: BTreeMap<Vertex, usize>,
    adjacency: FieldMatrix,
    inputs: BTreeSet<Vertex>,
    outputs: BTreeSet<Vertex>,
}

impl OpenGraph {
    /// Builds a graph from explicit parts.
    ///
    /// Vertex names are deduplicated with an error, then sorted into the
    /// canonical order. Edge weights are reduced mod d; a weight of 0 is the
    /// same as no edge. Duplicate unordered pairs and self-loops are
    /// rejected. Inputs and outputs may overlap.
    pub fn new(
        d: PrimeModulus,
        vertices: Vec<Vertex>,
        edges: &[(Vertex, Vertex, u64)],
        inputs: &[Vertex],
        outputs: &[Vertex],
    ) -> Result<Self, GraphError> {
        let mut sorted = vertices;
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex(w[0].clone()));
            }
        }
        let index: BTreeMap<Vertex, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let n = sorted.len();
        let mut adjacency = FieldMatrix::zeros(n, n, d);
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (u, v, w) in edges {
            let ui = *index
                .get(u)
                .ok_or_else(|| GraphError::UnknownVertex(u.clone()))?;
            let vi = *index
                .get(v)
                .ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
            if ui == vi {
                return Err(GraphError::SelfLoop(u.clone()));
            }
            let key = (ui.min(vi), ui.max(vi));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(u.clone(), v.clone()));
            }
            adjacency.set(ui, vi, *w);
            adjacency.set(vi, ui, *w);
        }
        let check_set = |names: &[Vertex]| -> Result<BTreeSet<Vertex>, GraphError> {
            let mut out = BTreeSet::new();
            for v in names {
                if !index.contains_key(v) {
                    return Err(GraphError::UnknownVertex(v.clone()));
                }
                out.insert(v.clone());
            }
            Ok(out)
        };
        let inputs = check_set(inputs)?;
        let outputs = check_set(outputs)?;
        Ok(OpenGraph {
            d,
            vertices: sorted,
            index,
            adjacency,
            inputs,
            outputs,
        })
    }

    /// The modulus.
    pub fn d(&self) -> PrimeModulus {
        self.d
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Vertices in canonical order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Canonical index of a vertex.
    pub fn index_of(&self, v: &str) -> Result<usize, GraphError> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(v.to_owned()))
    }

    /// Vertex name at a canonical index.
    pub fn name(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    /// The symmetric adjacency matrix in canonical order.
    pub fn adjacency(&self) -> &FieldMatrix {
        &self.adjacency
    }

    /// Edge weight between two vertices (0 = no edge).
    pub fn weight(&self, u: &str, v: &str) -> Result<u64, GraphError> {
        Ok(self.adjacency.get(self.index_of(u)?, self.index_of(v)?))
    }

    /// The input set I.
    pub fn inputs(&self) -> &BTreeSet<Vertex> {
        &self.inputs
    }

    /// The output set O.
    pub fn outputs(&self) -> &BTreeSet<Vertex> {
        &self.outputs
    }

    /// True if `v` is an input.
    pub fn is_input(&self, v: &str) -> bool {
        self.inputs.contains(v)
    }

    /// True if `v` is an output.
    pub fn is_output(&self, v: &str) -> bool {
        self.outputs.contains(v)
    }

    /// Measured vertices (complement of the outputs), canonical order.
    pub fn measured(&self) -> Vec<Vertex> {
        self.vertices
            .iter()
            .filter(|v| !self.outputs.contains(*v))
            .cloned()
            .collect()
    }

    /// Canonical indices of the measured vertices.
    pub fn measured_indices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| !self.outputs.contains(&self.vertices[i]))
            .collect()
    }

    /// Canonical indices of the inputs.
    pub fn input_indices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| self.inputs.contains(&self.vertices[i]))
            .collect()
    }

    /// Canonical indices of the outputs.
    pub fn output_indices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| self.outputs.contains(&self.vertices[i]))
            .collect()
    }

    /// Vertices with no incident nonzero-weight edge.
    pub fn isolated_vertices(&self) -> Vec<Vertex> {
        (0..self.vertices.len())
            .filter(|&i| (0..self.vertices.len()).all(|j| self.adjacency.get(i, j) == 0))
            .map(|i| self.vertices[i].clone())
            .collect()
    }
}

/// Adjacency submatrix selected by named row and column vertex lists.
pub fn submatrix(g: &OpenGraph, rows: &[Vertex], cols: &[Vertex]) -> Result<FieldMatrix, GraphError> {
    let r: Vec<usize> = rows
        .iter()
        .map(|v| g.index_of(v))
        .collect::<Result<_, _>>()?;
    let c: Vec<usize> = cols
        .iter()
        .map(|v| g.index_of(v))
        .collect::<Result<_, _>>()?;
    Ok(g.adjacency.select(&r, &c))
}

/// A multiset over the vertices: a vector in Z_d^V in canonical vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiset {
    entries: Vec<u64>,
}

impl Multiset {
    /// The zero multiset on `g`.
    pub fn zero(g: &OpenGraph) -> Self {
        Multiset {
            entries: vec![0; g.vertex_count()],
        }
    }

    /// Builds a multiset from raw entries in canonical order (reduced mod d).
    pub fn from_entries(g: &OpenGraph, entries: Vec<u64>) -> Result<Self, GraphError> {
        if entries.len() != g.vertex_count() {
            return Err(GraphError::Field(GfpError::DimensionMismatch(format!(
                "multiset of length {} over {} vertices",
                entries.len(),
                g.vertex_count()
            ))));
        }
        Ok(Multiset {
            entries: entries.into_iter().map(|v| g.d().reduce(v)).collect(),
        })
    }

    /// Builds a multiset from a name → multiplicity map (absent names = 0).
    pub fn from_named(g: &OpenGraph, named: &BTreeMap<Vertex, u64>) -> Result<Self, GraphError> {
        let mut entries = vec![0u64; g.vertex_count()];
        for (v, &m) in named {
            entries[g.index_of(v)?] = g.d().reduce(m);
        }
        Ok(Multiset { entries })
    }

    /// Entries in canonical vertex order.
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Multiplicity at canonical index `i`.
    pub fn get(&self, i: usize) -> u64 {
        self.entries[i]
    }

    /// True if all multiplicities are zero.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// Canonical indices with nonzero multiplicity.
    pub fn support(&self) -> Vec<usize> {
        (0..self.entries.len())
            .filter(|&i| self.entries[i] != 0)
            .collect()
    }

    /// Name → multiplicity map of the nonzero entries.
    pub fn to_named(&self, g: &OpenGraph) -> BTreeMap<Vertex, u64> {
        self.support()
            .into_iter()
            .map(|i| (g.name(i).clone(), self.entries[i]))
            .collect()
    }
}

/// Indicator multiset of a vertex set (multiplicity 1 on each member).
pub fn indicator(g: &OpenGraph, set: &[Vertex]) -> Result<Multiset, GraphError> {
    let mut entries = vec![0u64; g.vertex_count()];
    for v in set {
        entries[g.index_of(v)?] = 1 % g.d().get();
    }
    Ok(Multiset { entries })
}

/// A (possibly partial) measurement labelling of the measured vertices.
///
/// Maps measured vertices to labels (a, b) ∈ Z_d² ∖ {(0,0)}. Output vertices
/// cannot be labelled.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Labelling {
    map: BTreeMap<Vertex, (u64, u64)>,
}

impl Labelling {
    /// The empty labelling.
    pub fn empty() -> Self {
        Labelling::default()
    }

    /// Validates a name → label map against a graph.
    pub fn new(g: &OpenGraph, map: BTreeMap<Vertex, (u64, u64)>) -> Result<Self, GraphError> {
        let mut out = Labelling::default();
        for (v, (a, b)) in map {
            out = out.with_label(g, &v, (a, b))?;
        }
        Ok(out)
    }

    /// Returns a copy with one more label, validated against `g`.
    pub fn with_label(
        mut self,
        g: &OpenGraph,
        v: &str,
        (a, b): (u64, u64),
    ) -> Result<Self, GraphError> {
        g.index_of(v)?;
        if g.is_output(v) {
            return Err(GraphError::LabelOnOutput(v.to_owned()));
        }
        let a = g.d().reduce(a);
        let b = g.d().reduce(b);
        if a == 0 && b == 0 {
            return Err(GraphError::ZeroLabel(v.to_owned()));
        }
        self.map.insert(v.to_owned(), (a, b));
        Ok(self)
    }

    /// The label of `v`, if assigned.
    pub fn get(&self, v: &str) -> Option<(u64, u64)> {
        self.map.get(v).copied()
    }

    /// Iterates over (vertex, label) pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vertex, (u64, u64))> {
        self.map.iter().map(|(v, &l)| (v, l))
    }

    /// Number of labelled vertices.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    /// True if no vertex is labelled.
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Measured vertices of `g` that have no label yet.
    pub fn missing(&self, g: &OpenGraph) -> Vec<Vertex> {
        g.measured()
            .into_iter()
            .filter(|v| !self.map.contains_key(v))
            .collect()
    }

    /// True if every measured vertex of `g` is labelled.
    pub fn is_total(&self, g: &OpenGraph) -> bool {
        self.missing(g).is_empty()
    }
}

/// An open graph together with a labelling of its measured vertices.
///
/// The labelling may be partial; operations that need it total (validity
/// checks, the fixed-labelling finder) say so and report the missing
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledOpenGraph {
    /// The underlying open graph.
    pub graph: OpenGraph,
    /// Measurement labels on (a subset of) the measured vertices.
    pub labelling: Labelling,
}

impl LabelledOpenGraph {
    /// Pairs a graph with a validated labelling built from a raw map.
    pub fn new(graph: OpenGraph, labels: BTreeMap<Vertex, (u64, u64)>) -> Result<Self, GraphError> {
        let labelling = Labelling::new(&graph, labels)?;
        Ok(LabelledOpenGraph { graph, labelling })
    }
}

/// On-disk JSON schema for graphs.
///
/// ```json
/// {
///   "d": 3,
///   "vertices": ["1", "2"],
///   "edges": [["1", "2", 1]],
///   "inputs": [],
///   "outputs": ["2"],
///   "labels": { "1": [1, 0] }
/// }
/// ```
///
/// `d` may be omitted when the caller supplies an override; `edges`,
/// `inputs`, `outputs` default to empty and `labels` to absent. Weights and
/// label components must be non-negative and are reduced mod d.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<u64>,
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<(String, String, i64)>,
    #[serde(default)]
    inputs: Vec<String>,
    #[serde(default)]
    outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<String, (i64, i64)>>,
}

/// Parses a graph (and its labelling, when present) from JSON.
///
/// `d_override` supplies the modulus for files that omit `"d"`; providing
/// both is an error, as is providing neither.
pub fn graph_from_json_str(
    s: &str,
    d_override: Option<u64>,
) -> Result<(OpenGraph, Option<Labelling>), GraphError> {
    let file: GraphFile = serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))?;
    let d_value = match (file.d, d_override) {
        (Some(f), Some(o)) => {
            return Err(GraphError::ConflictingModulus {
                file: f,
                override_: o,
            })
        }
        (Some(f), None) => f,
        (None, Some(o)) => o,
        (None, None) => return Err(GraphError::MissingModulus),
    };
    let d = PrimeModulus::new(d_value)?;
    let mut edges = Vec::with_capacity(file.edges.len());
    for (u, v, w) in &file.edges {
        if *w < 0 {
            return Err(GraphError::NegativeValue {
                value: *w,
                context: format!("edge ({u:?}, {v:?})"),
            });
        }
        edges.push((u.clone(), v.clone(), *w as u64));
    }
    let graph = OpenGraph::new(d, file.vertices, &edges, &file.inputs, &file.outputs)?;
    let labelling = match file.labels {
        None => None,
        Some(raw) => {
            let mut map = BTreeMap::new();
            for (v, (a, b)) in raw {
                if a < 0 || b < 0 {
                    return Err(GraphError::NegativeValue {
                        value: a.min(b),
                        context: format!("label on {v:?}"),
                    });
                }
                map.insert(v, (a as u64, b as u64));
            }
            Some(Labelling::new(&graph, map)?)
        }
    };
    Ok((graph, labelling))
}

/// Serializes a graph (and optional labelling) to the JSON schema.
pub fn graph_to_json(g: &OpenGraph, labelling: Option<&Labelling>) -> String {
    let mut edges = Vec::new();
    for i in 0..g.vertex_count() {
        for j in i + 1..g.vertex_count() {
            let w = g.adjacency().get(i, j);
            if w != 0 {
                edges.push((g.name(i).clone(), g.name(j).clone(), w as i64));
            }
        }
    }
    let file = GraphFile {
        d: Some(g.d().get()),
        vertices: g.vertices().to_vec(),
        edges,
        inputs: g.inputs().iter().cloned().collect(),
        outputs: g.outputs().iter().cloned().collect(),
        labels: labelling.map(|l| {
            l.iter()
                .map(|(v, (a, b))| (v.clone(), (a as i64, b as i64)))
                .collect()
        }),
    };
    serde_json::to_string(&file).expect("graph serialization cannot fail")
}
