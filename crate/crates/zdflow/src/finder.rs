//! Polynomial-time construction of maximally delayed flows.
//!
//! The finder builds the layered partition backwards: layer 0 holds the
//! outputs (plus those isolated measured vertices whose labels need no
//! corrections at all), and each subsequent round solves, for every
//! still-unfinished vertex v with label (a, b), the linear system
//!
//! ```text
//! G[unfinished, finished ∖ I] · c  =  b·1_v − a·G[unfinished, v]
//! ```
//!
//! A solution c gives v's correction column: c spread over the finished
//! non-input vertices plus the diagonal entry a at v. Every vertex solvable
//! in a round is finished in that round (one echelon pass solves all
//! candidates at once — per-vertex solving is available as a debug mode and
//! must agree). When a round finishes nobody, no flow exists and the stuck
//! vertex set is reported.
//!
//! Two guards keep the output valid rather than merely structured:
//! a measured *input* vertex can only ever satisfy labels of the form (0, b)
//! (its row of C must stay zero), so inputs with a ≠ 0 are never offered to
//! the solver; and an isolated measured vertex enters layer 0 only when its
//! label has the solvable shape (a, 0) with a ≠ 0 and it is not an input, in
//! which case its diagonal entry is written immediately.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::flow::{FlowError, ZdFlow};
use crate::gfp::{self, FieldMatrix, GfpError};
use crate::graph::{GraphError, LabelledOpenGraph, Labelling, OpenGraph, Vertex};

/// Errors from the finder (structural problems; a missing flow is an
/// outcome, not an error).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinderError {
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
}

/// Work counters for one finder run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FinderStats {
    /// Layers produced so far (including layer 0 when non-empty).
    pub layers_produced: usize,
    /// Candidate linear systems handed to the solver.
    pub systems_solved: u64,
    /// Scalar multiply-accumulate operations spent in elimination.
    pub row_ops: u64,
}

/// Whether a flow was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowOutcome {
    /// The maximally delayed flow.
    Found(ZdFlow),
    /// No flow exists; `stuck` is the unfinished vertex set when progress
    /// stopped.
    NoFlow {
        /// Vertices that could not be corrected.
        stuck: BTreeSet<Vertex>,
    },
}

/// Outcome plus work counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinderResult {
    /// Found / NoFlow.
    pub outcome: FlowOutcome,
    /// Work counters.
    pub stats: FinderStats,
}

/// How candidate systems are solved each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    /// One echelon pass per round over all candidate columns.
    #[default]
    Batched,
    /// One echelon pass per candidate (debug mode; must agree with
    /// [`SolveMode::Batched`]).
    PerVertex,
}

/// Result of the labelling-searching variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnyLabellingResult {
    /// Outcome and counters, as in [`find_flow`].
    pub result: FinderResult,
    /// The fixed labels plus the labels chosen along the way (total on the
    /// measured vertices when a flow was found).
    pub labelling: Labelling,
}

/// Finds the maximally delayed flow for a totally labelled open graph.
pub fn find_flow(lg: &LabelledOpenGraph) -> Result<FinderResult, FinderError> {
    find_flow_with_mode(lg, SolveMode::Batched)
}

/// [`find_flow`] with an explicit solve mode.
pub fn find_flow_with_mode(
    lg: &LabelledOpenGraph,
    mode: SolveMode,
) -> Result<FinderResult, FinderError> {
    let missing = lg.labelling.missing(&lg.graph);
    if !missing.is_empty() {
        return Err(FinderError::MissingLabels(missing));
    }
    let mut search = Search::new(&lg.graph, lg.labelling.clone(), mode, false);
    let result = search.run()?;
    Ok(result)
}

/// Finds a flow while completing a (possibly empty) partial labelling.
///
/// Fixed labels are honoured. For an unlabelled vertex the search prefers
/// labels with a = 1 (free b), falling back to b = 1 (free a) for
/// non-inputs; inputs can only carry (0, 1)-shaped labels. The returned flow
/// is the maximally delayed flow of the returned labelling.
pub fn find_flow_any_labelling(
    g: &OpenGraph,
    fixed: &Labelling,
) -> Result<AnyLabellingResult, FinderError> {
    let mut search = Search::new(g, fixed.clone(), SolveMode::Batched, true);
    let result = search.run()?;
    Ok(AnyLabellingResult {
        result,
        labelling: search.labelling,
    })
}

/// Shared state of one finder run.
struct Search<'g> {
    g: &'g OpenGraph,
    labelling: Labelling,
    mode: SolveMode,
    complete_labels: bool,
    finished: Vec<bool>,
    c: FieldMatrix,
    layers: Vec<BTreeSet<Vertex>>,
    stats: FinderStats,
}

impl<'g> Search<'g> {
    fn new(g: &'g OpenGraph, labelling: Labelling, mode: SolveMode, complete_labels: bool) -> Self {
        let n = g.vertex_count();
        Search {
            g,
            labelling,
            mode,
            complete_labels,
            finished: vec![false; n],
            c: FieldMatrix::zeros(n, n, g.d()),
            layers: Vec::new(),
            stats: FinderStats::default(),
        }
    }

    fn run(&mut self) -> Result<FinderResult, FinderError> {
        self.seed_layer_zero()?;
        loop {
            let unfinished: Vec<usize> = (0..self.g.vertex_count())
                .filter(|&i| !self.finished[i])
                .collect();
            if unfinished.is_empty() {
                let flow = ZdFlow::new(self.g, self.c.clone(), self.layers.clone())?;
                return Ok(FinderResult {
                    outcome: FlowOutcome::Found(flow),
                    stats: self.stats,
                });
            }
            let layer = self.round(&unfinished)?;
            if layer.is_empty() {
                return Ok(FinderResult {
                    outcome: FlowOutcome::NoFlow {
                        stuck: unfinished
                            .into_iter()
                            .map(|i| self.g.name(i).clone())
                            .collect(),
                    },
                    stats: self.stats,
                });
            }
            self.layers.push(layer);
            self.stats.layers_produced = self.layers.len();
        }
    }

    /// Layer 0: outputs, plus correctable isolated measured vertices.
    fn seed_layer_zero(&mut self) -> Result<(), FinderError> {
        let g = self.g;
        let mut layer0 = BTreeSet::new();
        for i in 0..g.vertex_count() {
            if g.is_output(g.name(i)) {
                self.finished[i] = true;
                layer0.insert(g.name(i).clone());
            }
        }
        for name in g.isolated_vertices() {
            let i = g.index_of(&name)?;
            if self.finished[i] || g.is_input(&name) {
                continue;
            }
            let label = match self.labelling.get(&name) {
                Some(l) => Some(l),
                // An isolated vertex is correctable only with labels of the
                // shape (a, 0); the canonical free choice is (1, 0).
                None if self.complete_labels => {
                    self.labelling = self
                        .labelling
                        .clone()
                        .with_label(g, &name, (1, 0))
                        .map_err(FinderError::Graph)?;
                    Some((1, 0))
                }
                None => None,
            };
            if let Some((a, b)) = label {
                if a != 0 && b == 0 {
                    self.c.set(i, i, a);
                    self.finished[i] = true;
                    layer0.insert(name.clone());
                }
            }
        }
        if !layer0.is_empty() {
            self.layers.push(layer0);
            self.stats.layers_produced = self.layers.len();
        }
        Ok(())
    }

    /// One round: solve every candidate, finish the solvable ones, and
    /// return the new layer.
    fn round(&mut self, unfinished: &[usize]) -> Result<BTreeSet<Vertex>, FinderError> {
        let g = self.g;
        let cols: Vec<usize> = (0..g.vertex_count())
            .filter(|&i| self.finished[i] && !g.is_input(g.name(i)))
            .collect();
        let a_mat = g.adjacency().select(unfinished, &cols);

        // Labelled candidates: inputs whose label demands a ≠ 0 can never be
        // corrected and are not offered to the solver.
        let mut labelled: Vec<(usize, (u64, u64))> = Vec::new();
        let mut unlabelled: Vec<usize> = Vec::new();
        for &v in unfinished {
            let name = g.name(v);
            match self.labelling.get(name) {
                Some((a, _)) if g.is_input(name) && a != 0 => {}
                Some(label) => labelled.push((v, label)),
                None if self.complete_labels => unlabelled.push(v),
                None => unreachable!("fixed-labelling search checked totality"),
            }
        }

        let mut layer = BTreeSet::new();
        let d = g.d();
        let row_of = |v: usize| unfinished.iter().position(|&u| u == v).expect("candidate row");

        if !labelled.is_empty() {
            let mut b = FieldMatrix::zeros(unfinished.len(), labelled.len(), d);
            for (j, &(v, (av, bv))) in labelled.iter().enumerate() {
                for (r, &u) in unfinished.iter().enumerate() {
                    let target = if u == v { bv } else { 0 };
                    b.set(r, j, d.sub(target, d.mul(av, g.adjacency().get(u, v))));
                }
            }
            let solutions: Vec<Option<Vec<u64>>> = match self.mode {
                SolveMode::Batched => {
                    let rep = gfp::solve_all(&a_mat, &b)?;
                    self.stats.systems_solved += labelled.len() as u64;
                    self.stats.row_ops += rep.row_ops;
                    rep.solutions
                }
                SolveMode::PerVertex => {
                    let mut out = Vec::with_capacity(labelled.len());
                    for j in 0..labelled.len() {
                        let rep = gfp::solve(&a_mat, &b.column(j))?;
                        self.stats.systems_solved += 1;
                        self.stats.row_ops += rep.row_ops;
                        out.push(rep.solutions.into_iter().next().unwrap());
                    }
                    out
                }
            };
            for (&(v, (av, _)), sol) in labelled.iter().zip(solutions) {
                if let Some(coeffs) = sol {
                    self.commit(v, av, &cols, &coeffs);
                    layer.insert(g.name(v).clone());
                }
            }
        }

        for v in unlabelled {
            if let Some((label, coeffs)) = self.solve_unlabelled(v, unfinished, &cols, &a_mat, row_of(v))? {
                self.labelling = self
                    .labelling
                    .clone()
                    .with_label(g, g.name(v), label)
                    .map_err(FinderError::Graph)?;
                self.commit(v, label.0, &cols, &coeffs);
                layer.insert(g.name(v).clone());
            }
        }
        Ok(layer)
    }

    /// Writes a solved correction column: coefficients over `cols` plus the
    /// diagonal entry `a`.
    fn commit(&mut self, v: usize, a: u64, cols: &[usize], coeffs: &[u64]) {
        for (k, &cv) in coeffs.iter().enumerate() {
            if cv != 0 {
                self.c.set(cols[k], v, cv);
            }
        }
        if a != 0 {
            self.c.set(v, v, a);
        }
        self.finished[v] = true;
    }

    /// Branch systems for an unlabelled vertex. Returns the chosen label and
    /// the correction coefficients over `cols`.
    ///
    /// For v ∉ I, the a = 1 branch treats b as one more unknown:
    /// `[A | −1_v]·(c; b) = −G[unfinished, v]`; the b = 1 fallback treats a
    /// as the unknown: `[A | G[unfinished, v]]·(c; a) = 1_v`. For v ∈ I only
    /// (0, 1) is possible (up to a scalar on the label): `A·c = 1_v`.
    fn solve_unlabelled(
        &mut self,
        v: usize,
        unfinished: &[usize],
        cols: &[usize],
        a_mat: &FieldMatrix,
        vrow: usize,
    ) -> Result<Option<((u64, u64), Vec<u64>)>, FinderError> {
        let g = self.g;
        let d = g.d();
        let m = unfinished.len();
        if g.is_input(g.name(v)) {
            let mut rhs = vec![0u64; m];
            rhs[vrow] = 1;
            let rep = gfp::solve(a_mat, &rhs)?;
            self.stats.systems_solved += 1;
            self.stats.row_ops += rep.row_ops;
            if let Some(c) = rep.solutions.into_iter().next().unwrap() {
                return Ok(Some(((0, 1), c)));
            }
            return Ok(None);
        }
        // Branch a = 1, unknown b.
        let mut aug = FieldMatrix::zeros(m, cols.len() + 1, d);
        for r in 0..m {
            for k in 0..cols.len() {
                aug.set(r, k, a_mat.get(r, k));
            }
        }
        aug.set(vrow, cols.len(), d.neg(1));
        let rhs: Vec<u64> = unfinished
            .iter()
            .map(|&u| d.neg(g.adjacency().get(u, v)))
            .collect();
        let rep = gfp::solve(&aug, &rhs)?;
        self.stats.systems_solved += 1;
        self.stats.row_ops += rep.row_ops;
        if let Some(mut sol) = rep.solutions.into_iter().next().unwrap() {
            let b = sol.pop().expect("augmented unknown");
            return Ok(Some(((1, b), sol)));
        }
        // Branch b = 1, unknown a.
        let mut aug = FieldMatrix::zeros(m, cols.len() + 1, d);
        for r in 0..m {
            for k in 0..cols.len() {
                aug.set(r, k, a_mat.get(r, k));
            }
            aug.set(r, cols.len(), g.adjacency().get(unfinished[r], v));
        }
        let mut rhs = vec![0u64; m];
        rhs[vrow] = 1;
        let rep = gfp::solve(&aug, &rhs)?;
        self.stats.systems_solved += 1;
        self.stats.row_ops += rep.row_ops;
        if let Some(mut sol) = rep.solutions.into_iter().next().unwrap() {
            let a = sol.pop().expect("augmented unknown");
            return Ok(Some(((a, 1), sol)));
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{depth, validate_flow};
    use crate::gfp::PrimeModulus;
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

    fn path(d: u64, w: u64, inputs: &[&str], label: (u64, u64)) -> LabelledOpenGraph {
        let g = OpenGraph::new(
            pm(d),
            names(&["1", "2"]),
            &[("1".into(), "2".into(), w)],
            &names(inputs),
            &names(&["2"]),
        )
        .unwrap();
        LabelledOpenGraph::new(g, BTreeMap::from([("1".into(), label)])).unwrap()
    }

    fn expect_found(r: &FinderResult) -> &ZdFlow {
        match &r.outcome {
            FlowOutcome::Found(f) => f,
            FlowOutcome::NoFlow { stuck } => panic!("expected a flow, stuck on {stuck:?}"),
        }
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
        let r = find_flow(&lg).unwrap();
        let f = expect_found(&r);
        assert_eq!(depth(f), 0);
        assert_eq!(f.layers(), &[set(&["1", "2"])]);
        assert!(f.c().is_zero());
        assert_eq!(r.stats.systems_solved, 0);
        assert!(validate_flow(&lg, f).unwrap().ok);
    }

    #[test]
    fn path_without_inputs_reproduces_reference_flow() {
        let lg = path(3, 1, &[], (1, 0));
        let r = find_flow(&lg).unwrap();
        let f = expect_found(&r);
        assert_eq!(f.layers(), &[set(&["2"]), set(&["1"])]);
        assert_eq!(f.c().get(0, 0), 1, "C₁₁ = a = 1");
        assert_eq!(
            (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).filter(|&(r, c)| f.c().get(r, c) != 0).count(),
            1
        );
        assert_eq!(depth(f), 1);
        assert_eq!(r.stats.systems_solved, 1);
        assert_eq!(r.stats.layers_produced, 2);
        assert!(validate_flow(&lg, f).unwrap().ok);
    }

    #[test]
    fn input_path_with_zero_a_label_gets_x_correction() {
        // w = 2 over d = 3: the correction coefficient is w⁻¹ = 2.
        let lg = path(3, 2, &["1"], (0, 1));
        let r = find_flow(&lg).unwrap();
        let f = expect_found(&r);
        assert_eq!(f.layers(), &[set(&["2"]), set(&["1"])]);
        assert_eq!(f.c().get(1, 0), 2, "C₂₁ = w⁻¹");
        assert_eq!(f.c().get(0, 0), 0);
        assert!(validate_flow(&lg, f).unwrap().ok);
    }

    #[test]
    fn input_with_nonzero_a_label_has_no_flow() {
        let lg = path(3, 1, &["1"], (1, 0));
        let r = find_flow(&lg).unwrap();
        assert_eq!(
            r.outcome,
            FlowOutcome::NoFlow {
                stuck: set(&["1"])
            }
        );
    }

    fn triangle_no_outputs(d: u64) -> LabelledOpenGraph {
        let g = OpenGraph::new(
            pm(d),
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
        LabelledOpenGraph::new(
            g,
            BTreeMap::from([
                ("a".into(), (1, 0)),
                ("b".into(), (1, 0)),
                ("c".into(), (1, 0)),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn graph_without_outputs_has_no_flow() {
        let r = find_flow(&triangle_no_outputs(3)).unwrap();
        assert_eq!(
            r.outcome,
            FlowOutcome::NoFlow {
                stuck: set(&["a", "b", "c"])
            }
        );
        assert_eq!(r.stats.layers_produced, 0);
    }

    #[test]
    fn isolated_vertex_labels_decide_layer_zero() {
        let lone = |label, input: bool| {
            let input_set = if input { names(&["u"]) } else { vec![] };
            let g = OpenGraph::new(pm(3), names(&["u"]), &[], &input_set, &[]).unwrap();
            let lg = LabelledOpenGraph::new(g, BTreeMap::from([("u".into(), label)])).unwrap();
            find_flow(&lg).unwrap()
        };
        // (a, 0) with a ≠ 0 on a non-input: depth-0 flow with C_uu = a.
        let r = lone((2, 0), false);
        let f = expect_found(&r);
        assert_eq!(f.layers(), &[set(&["u"])]);
        assert_eq!(f.c().get(0, 0), 2);
        // (0, b) needs a Z source but the vertex has no neighbours.
        assert!(matches!(lone((0, 1), false).outcome, FlowOutcome::NoFlow { .. }));
        // Inputs cannot carry a ≠ 0.
        assert!(matches!(lone((1, 0), true).outcome, FlowOutcome::NoFlow { .. }));
    }

    #[test]
    fn missing_labels_are_reported() {
        let g = OpenGraph::new(
            pm(3),
            names(&["1", "2"]),
            &[("1".into(), "2".into(), 1)],
            &[],
            &names(&["2"]),
        )
        .unwrap();
        let lg = LabelledOpenGraph::new(g, BTreeMap::new()).unwrap();
        assert_eq!(
            find_flow(&lg).unwrap_err(),
            FinderError::MissingLabels(names(&["1"]))
        );
    }

    #[test]
    fn per_vertex_mode_agrees_with_batched() {
        for (lg, _) in [
            (path(3, 1, &[], (1, 0)), 0),
            (path(5, 3, &["1"], (0, 2)), 1),
            (triangle_no_outputs(3), 2),
        ] {
            let a = find_flow_with_mode(&lg, SolveMode::Batched).unwrap();
            let b = find_flow_with_mode(&lg, SolveMode::PerVertex).unwrap();
            assert_eq!(a.outcome, b.outcome);
        }
    }

    #[test]
    fn any_labelling_prefers_a_equal_one() {
        let g = OpenGraph::new(
            pm(3),
            names(&["1", "2"]),
            &[("1".into(), "2".into(), 1)],
            &[],
            &names(&["2"]),
        )
        .unwrap();
        let r = find_flow_any_labelling(&g, &Labelling::empty()).unwrap();
        let f = expect_found(&r.result);
        assert_eq!(r.labelling.get("1"), Some((1, 0)), "a = 1 branch, free b = 0");
        assert_eq!(f.layers(), &[set(&["2"]), set(&["1"])]);
        let lg = LabelledOpenGraph {
            graph: g,
            labelling: r.labelling.clone(),
        };
        assert!(validate_flow(&lg, f).unwrap().ok);
    }

    #[test]
    fn any_labelling_gives_inputs_zero_a() {
        let g = OpenGraph::new(
            pm(3),
            names(&["1", "2"]),
            &[("1".into(), "2".into(), 2)],
            &names(&["1"]),
            &names(&["2"]),
        )
        .unwrap();
        let r = find_flow_any_labelling(&g, &Labelling::empty()).unwrap();
        let f = expect_found(&r.result);
        assert_eq!(r.labelling.get("1"), Some((0, 1)));
        assert_eq!(f.c().get(1, 0), 2, "C₂₁ = w⁻¹ = 2 over d = 3");
    }

    #[test]
    fn any_labelling_honours_fixed_labels() {
        let g = OpenGraph::new(
            pm(3),
            names(&["1", "2"]),
            &[("1".into(), "2".into(), 1)],
            &[],
            &names(&["2"]),
        )
        .unwrap();
        let fixed = Labelling::empty().with_label(&g, "1", (0, 2)).unwrap();
        let r = find_flow_any_labelling(&g, &fixed).unwrap();
        let f = expect_found(&r.result);
        assert_eq!(r.labelling.get("1"), Some((0, 2)));
        assert_eq!(f.c().get(1, 0), 2, "(Gc)₁ = 2 needs c₂ = 2");
    }

    #[test]
    fn any_labelling_cannot_rescue_missing_outputs() {
        let g = triangle_no_outputs(3).graph;
        let r = find_flow_any_labelling(&g, &Labelling::empty()).unwrap();
        assert!(matches!(r.result.outcome, FlowOutcome::NoFlow { .. }));
    }

    #[test]
    fn any_labelling_uses_canonical_isolated_label() {
        let g = OpenGraph::new(pm(3), names(&["u"]), &[], &[], &[]).unwrap();
        let r = find_flow_any_labelling(&g, &Labelling::empty()).unwrap();
        let f = expect_found(&r.result);
        assert_eq!(r.labelling.get("u"), Some((1, 0)));
        assert_eq!(depth(f), 0);
    }

    #[test]
    fn found_flows_repeat_under_their_completed_labelling() {
        // Running the fixed-labelling finder on the labelling the search
        // chose must reproduce the exact same flow.
        let g = OpenGraph::new(
            pm(5),
            names(&["1", "2", "3"]),
            &[
                ("1".into(), "2".into(), 1),
                ("2".into(), "3".into(), 4),
            ],
            &names(&["1"]),
            &names(&["3"]),
        )
        .unwrap();
        let any = find_flow_any_labelling(&g, &Labelling::empty()).unwrap();
        let f1 = expect_found(&any.result).clone();
        let lg = LabelledOpenGraph {
            graph: g,
            labelling: any.labelling,
        };
        let again = find_flow(&lg).unwrap();
        assert_eq!(expect_found(&again), &f1);
    }
}
