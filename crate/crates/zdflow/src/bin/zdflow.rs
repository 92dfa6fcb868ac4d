//! Command-line interface for flow finding, verification and simulation.
//!
//! Every subcommand prints a machine-readable JSON report on stdout
//! (compact by default, pretty with `--json`) and a one-line prose summary
//! on stderr (silenced by `--quiet`). Exit codes: 0 when the queried
//! property holds, 1 for usage problems (unreadable or malformed inputs,
//! conflicting flags, exceeded budgets), 2 when the property fails (no
//! flow, a violated validity condition, a non-deterministic strategy, a
//! non-runnable pattern).
//!
//! Any input path may be `-` for stdin, and flow arguments also accept a
//! whole `find` report, so `find g.json | verify g.json -` composes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use zdflow::finder::{find_flow, find_flow_any_labelling, FinderStats, FlowOutcome};
use zdflow::flow::{
    corrections, depth, flow_from_json_str, flow_to_json, induced_order, validate_flow,
    CorrectionSets, ZdFlow,
};
use zdflow::graph::{
    graph_from_json_str, graph_to_json, LabelledOpenGraph, Labelling, OpenGraph, Vertex,
};
use zdflow::oracle::{oracle_report, OracleLimits};
use zdflow::pattern::{
    extract_open_graph, pattern_from_json_str, pattern_to_json, standardize, OrderFlag,
    PatternError,
};
use zdflow::sim::{
    canonical_specs, classify_determinism, graph_state, run_branch, DeterminismConfig, SimError,
    Verdict,
};

#[derive(Parser)]
#[command(
    name = "zdflow",
    version,
    about = "Flows, measurement patterns and determinism over qudit open graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Silence the stderr summary line.
    #[arg(long, global = true)]
    quiet: bool,
    /// RNG seed for randomized phases.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Randomized robustness runs in `classify`.
    #[arg(long, global = true)]
    draws: Option<usize>,
    /// Branch-exploration budget in `classify`.
    #[arg(long, global = true, value_name = "N")]
    max_branches: Option<u64>,
    /// Modulus for graph files that omit "d" (conflicts when both given).
    #[arg(long, global = true, value_name = "D")]
    d_override: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find the maximally delayed flow of a labelled open graph.
    Find {
        /// Graph JSON file (must carry labels).
        graph: PathBuf,
    },
    /// Find a flow over all labellings extending the file's partial one.
    FindAnyLabelling {
        /// Graph JSON file (labels optional, treated as fixed).
        graph: PathBuf,
    },
    /// Check the validity conditions of a flow against a graph.
    Verify {
        /// Graph JSON file (must carry labels).
        graph: PathBuf,
        /// Flow JSON file ("C" and "layers"), a find report, or - for stdin.
        flow: PathBuf,
    },
    /// Classify the determinism of a flow's correction strategy.
    Classify {
        /// Graph JSON file (must carry labels).
        graph: PathBuf,
        /// Flow JSON file ("C" and "layers"), a find report, or - for stdin.
        flow: PathBuf,
    },
    /// Run one measurement branch under a flow's corrections.
    Simulate {
        /// Graph JSON file (must carry labels).
        graph: PathBuf,
        /// Flow JSON file ("C" and "layers"), a find report, or - for stdin.
        flow: PathBuf,
        /// Outcome digits as "vertex=digit,…" (unlisted vertices get 0).
        #[arg(long)]
        outcomes: Option<String>,
    },
    /// Brute-force ground truth: existence, minimum depth, delayed layers.
    Oracle {
        /// Graph JSON file (must carry labels).
        graph: PathBuf,
    },
    /// Rewrite a pattern into standard form.
    Standardize {
        /// Pattern JSON file.
        pattern: PathBuf,
    },
    /// Recover the labelled open graph and corrections behind a pattern.
    Extract {
        /// Pattern JSON file.
        pattern: PathBuf,
    },
}

/// FNV-1a 64-bit digest of raw input bytes.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// A completed command: report, summary line, and whether the property
/// failed (exit 2).
struct CmdOutcome {
    value: Value,
    summary: String,
    failed: bool,
}

fn usage<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn read_input(path: &Path) -> Result<(String, String), String> {
    let raw = if path == Path::new("-") {
        use std::io::Read;
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        buf
    } else {
        std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?
    };
    let digest = format!("{:016x}", fnv1a64(&raw));
    let text = String::from_utf8(raw).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((text, digest))
}

fn load_graph(
    path: &Path,
    d_override: Option<u64>,
) -> Result<(OpenGraph, Option<Labelling>, String), String> {
    let (text, digest) = read_input(path)?;
    let (g, labelling) = graph_from_json_str(&text, d_override).map_err(usage)?;
    Ok((g, labelling, digest))
}

fn load_labelled(
    path: &Path,
    d_override: Option<u64>,
) -> Result<(LabelledOpenGraph, String), String> {
    let (graph, labelling, digest) = load_graph(path, d_override)?;
    let labelling = labelling.ok_or_else(|| {
        format!(
            "{} carries no labels; this subcommand needs a labelled graph",
            path.display()
        )
    })?;
    Ok((LabelledOpenGraph { graph, labelling }, digest))
}

fn load_flow(path: &Path, g: &OpenGraph) -> Result<(ZdFlow, String), String> {
    let (text, digest) = read_input(path)?;
    match flow_from_json_str(&text, g) {
        Ok(f) => Ok((f, digest)),
        // `find` reports carry the flow as a "flow" member; accept them so
        // `find … | verify … -` composes.
        Err(primary) => match serde_json::from_str::<Value>(&text)
            .ok()
            .and_then(|v| v.get("flow").cloned())
        {
            Some(inner) => {
                let f = flow_from_json_str(&inner.to_string(), g).map_err(usage)?;
                Ok((f, digest))
            }
            None => Err(usage(primary)),
        },
    }
}

fn flow_value(f: &ZdFlow) -> Value {
    serde_json::from_str(&flow_to_json(f)).expect("flow JSON round-trips")
}

fn graph_value(g: &OpenGraph, labelling: Option<&Labelling>) -> Value {
    serde_json::from_str(&graph_to_json(g, labelling)).expect("graph JSON round-trips")
}

fn labelling_value(l: &Labelling) -> Value {
    let map: BTreeMap<&Vertex, (u64, u64)> = l.iter().collect();
    serde_json::to_value(map).expect("labelling serializes")
}

fn stats_value(s: &FinderStats) -> Value {
    json!({
        "layers_produced": s.layers_produced,
        "systems_solved": s.systems_solved,
        "row_ops": s.row_ops,
    })
}

fn corrections_value(g: &OpenGraph, cs: &CorrectionSets) -> Value {
    let named = |fam: &BTreeMap<Vertex, zdflow::graph::Multiset>| -> Value {
        let map: BTreeMap<&Vertex, BTreeMap<Vertex, u64>> =
            fam.iter().map(|(v, m)| (v, m.to_named(g))).collect();
        serde_json::to_value(map).expect("correction maps serialize")
    };
    json!({ "x": named(&cs.x), "z": named(&cs.z) })
}

fn state_value(state: &zdflow::sim::QuditState, vertices: &[Vertex]) -> Value {
    let amps: Vec<[f64; 2]> = state.amps().iter().map(|a| [a.re, a.im]).collect();
    json!({
        "d": state.d(),
        "sites": vertices,
        "amps": amps,
    })
}

fn parse_outcomes(spec: &str, lg: &LabelledOpenGraph) -> Result<BTreeMap<Vertex, u64>, String> {
    let mut map = BTreeMap::new();
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let (v, m) = part
            .split_once('=')
            .ok_or_else(|| format!("outcome {part:?} is not of the form vertex=digit"))?;
        let v = v.trim().to_string();
        lg.graph.index_of(&v).map_err(usage)?;
        if lg.graph.is_output(&v) {
            return Err(format!("vertex {v} is an output and is never measured"));
        }
        let m: u64 = m
            .trim()
            .parse()
            .map_err(|e| format!("outcome digit for {v}: {e}"))?;
        map.insert(v, m);
    }
    Ok(map)
}

/// The flow's execution order: layers from last index to first, each sorted,
/// outputs skipped. Always a linear extension of the induced order.
fn execution_order(lg: &LabelledOpenGraph, f: &ZdFlow) -> Vec<Vertex> {
    f.execution_layers()
        .flatten()
        .filter(|v| !lg.graph.is_output(v))
        .cloned()
        .collect()
}

fn cmd_find(graph: &Path, d_override: Option<u64>) -> Result<CmdOutcome, String> {
    let (lg, digest) = load_labelled(graph, d_override)?;
    let res = find_flow(&lg).map_err(usage)?;
    let mut value = json!({
        "command": "find",
        "digest": { "graph": digest },
        "d": lg.graph.d().get(),
        "stats": stats_value(&res.stats),
    });
    let (summary, failed) = match &res.outcome {
        FlowOutcome::Found(f) => {
            value["outcome"] = json!("found");
            value["flow"] = flow_value(f);
            value["depth"] = json!(depth(f));
            (
                format!(
                    "flow found: depth {}, {} layers, {} systems solved, {} row ops",
                    depth(f),
                    f.layers().len(),
                    res.stats.systems_solved,
                    res.stats.row_ops
                ),
                false,
            )
        }
        FlowOutcome::NoFlow { stuck } => {
            value["outcome"] = json!("no-flow");
            value["stuck"] = serde_json::to_value(stuck).expect("vertex sets serialize");
            (
                format!(
                    "no flow: {} vertices stuck after {} layers",
                    stuck.len(),
                    res.stats.layers_produced
                ),
                true,
            )
        }
    };
    Ok(CmdOutcome {
        value,
        summary,
        failed,
    })
}

fn cmd_find_any_labelling(graph: &Path, d_override: Option<u64>) -> Result<CmdOutcome, String> {
    let (g, labelling, digest) = load_graph(graph, d_override)?;
    let fixed = labelling.unwrap_or_else(Labelling::empty);
    let res = find_flow_any_labelling(&g, &fixed).map_err(usage)?;
    let mut value = json!({
        "command": "find-any-labelling",
        "digest": { "graph": digest },
        "d": g.d().get(),
        "stats": stats_value(&res.result.stats),
        "labelling": labelling_value(&res.labelling),
    });
    let (summary, failed) = match &res.result.outcome {
        FlowOutcome::Found(f) => {
            value["outcome"] = json!("found");
            value["flow"] = flow_value(f);
            value["depth"] = json!(depth(f));
            (
                format!(
                    "flow found under a chosen labelling: depth {}, {} layers",
                    depth(f),
                    f.layers().len()
                ),
                false,
            )
        }
        FlowOutcome::NoFlow { stuck } => {
            value["outcome"] = json!("no-flow");
            value["stuck"] = serde_json::to_value(stuck).expect("vertex sets serialize");
            (
                format!("no flow under any labelling: {} vertices stuck", stuck.len()),
                true,
            )
        }
    };
    Ok(CmdOutcome {
        value,
        summary,
        failed,
    })
}

fn cmd_verify(graph: &Path, flow: &Path, d_override: Option<u64>) -> Result<CmdOutcome, String> {
    let (lg, g_digest) = load_labelled(graph, d_override)?;
    let (f, f_digest) = load_flow(flow, &lg.graph)?;
    let report = validate_flow(&lg, &f).map_err(usage)?;
    let mut value = json!({
        "command": "verify",
        "digest": { "graph": g_digest, "flow": f_digest },
        "d": lg.graph.d().get(),
        "depth": depth(&f),
        "report": serde_json::to_value(&report).expect("validity reports serialize"),
    });
    if report.ok {
        let cs = corrections(&lg, &f).map_err(usage)?;
        let po = induced_order(&lg.graph, &cs).map_err(usage)?;
        value["corrections"] = corrections_value(&lg.graph, &cs);
        value["induced_order"] =
            serde_json::to_value(po.pairs()).expect("order pairs serialize");
        Ok(CmdOutcome {
            value,
            summary: format!(
                "flow is valid: depth {}, {} layers",
                depth(&f),
                f.layers().len()
            ),
            failed: false,
        })
    } else {
        let violation = report.violation.as_ref().expect("failed reports carry one");
        Ok(CmdOutcome {
            value,
            summary: format!(
                "flow is invalid: {} at ({}, {})",
                serde_json::to_value(violation.condition)
                    .expect("conditions serialize")
                    .as_str()
                    .unwrap_or("violation"),
                violation.witness.0,
                violation.witness.1
            ),
            failed: true,
        })
    }
}

fn determinism_config(cli: &Cli) -> DeterminismConfig {
    let mut cfg = DeterminismConfig::default();
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(draws) = cli.draws {
        cfg.draws = draws;
    }
    if let Some(max) = cli.max_branches {
        cfg.max_branches = max;
    }
    cfg
}

fn cmd_classify(
    graph: &Path,
    flow: &Path,
    cli: &Cli,
) -> Result<CmdOutcome, String> {
    let (lg, g_digest) = load_labelled(graph, cli.d_override)?;
    let (f, f_digest) = load_flow(flow, &lg.graph)?;
    let mut value = json!({
        "command": "classify",
        "digest": { "graph": g_digest, "flow": f_digest },
        "d": lg.graph.d().get(),
    });
    let report = validate_flow(&lg, &f).map_err(usage)?;
    if !report.ok {
        value["report"] = serde_json::to_value(&report).expect("validity reports serialize");
        return Ok(CmdOutcome {
            value,
            summary: "flow is invalid; nothing to classify".into(),
            failed: true,
        });
    }
    let cs = corrections(&lg, &f).map_err(usage)?;
    let cfg = determinism_config(cli);
    let classification = match classify_determinism(&lg, &cs, &cfg) {
        Ok(c) => c,
        Err(SimError::TooManyBranches { explored, max }) => {
            return Err(format!(
                "branch budget exceeded ({explored} > {max}); raise --max-branches"
            ))
        }
        Err(e) => return Err(e.to_string()),
    };
    value["classification"] =
        serde_json::to_value(&classification).expect("classification serializes");
    value["config"] = serde_json::to_value(&cfg).expect("config serializes");

    // The report also carries every branch probability and the minimum
    // pairwise branch-output fidelity, whenever full enumeration fits the
    // branch budget (it always does at the default budget, whose value is
    // the documented branch-count cap).
    let order = execution_order(&lg, &f);
    let d = lg.graph.d().get();
    value["order"] = serde_json::to_value(&order).expect("vertex lists serialize");
    let total = d.checked_pow(order.len() as u32);
    match total {
        Some(t) if t <= cfg.max_branches => {
            let specs = canonical_specs(&lg).map_err(usage)?;
            let initial = graph_state(&lg.graph).map_err(usage)?;
            let mut per_branch = Vec::with_capacity(t as usize);
            let mut states = Vec::new();
            for code in 0..t {
                let mut digits = vec![0u64; order.len()];
                let mut rest = code;
                for slot in (0..order.len()).rev() {
                    digits[slot] = rest % d;
                    rest /= d;
                }
                let branch = run_branch(&lg, &specs, Some(&cs), &order, &digits, &initial)
                    .map_err(|e| e.to_string())?;
                if branch.probability > 1e-12 {
                    states.push(branch.state.clone());
                }
                per_branch.push(json!({
                    "outcomes": digits,
                    "probability": branch.probability,
                }));
            }
            let mut min_fidelity: Option<f64> = None;
            for i in 0..states.len() {
                for j in i + 1..states.len() {
                    let fid = states[i].overlap(&states[j]);
                    min_fidelity = Some(min_fidelity.map_or(fid, |m: f64| m.min(fid)));
                }
            }
            value["branch_enumeration"] = json!("full");
            value["branch_probabilities"] = Value::Array(per_branch);
            value["min_fidelity"] = serde_json::to_value(min_fidelity).expect("floats serialize");
        }
        _ => {
            value["branch_enumeration"] = json!("skipped: branch count exceeds --max-branches");
            value["branch_probabilities"] = Value::Null;
            value["min_fidelity"] = Value::Null;
        }
    }

    let failed = classification.verdict == Verdict::NotDeterministic;
    Ok(CmdOutcome {
        value,
        summary: format!(
            "verdict: {} ({} branches explored, {} robust runs)",
            classification.verdict, classification.branches_explored, classification.robust_runs
        ),
        failed,
    })
}

fn cmd_simulate(
    graph: &Path,
    flow: &Path,
    outcomes: Option<&str>,
    cli: &Cli,
) -> Result<CmdOutcome, String> {
    let (lg, g_digest) = load_labelled(graph, cli.d_override)?;
    let (f, f_digest) = load_flow(flow, &lg.graph)?;
    let report = validate_flow(&lg, &f).map_err(usage)?;
    if !report.ok {
        return Ok(CmdOutcome {
            value: json!({
                "command": "simulate",
                "digest": { "graph": g_digest, "flow": f_digest },
                "report": serde_json::to_value(&report).expect("validity reports serialize"),
            }),
            summary: "flow is invalid; nothing to simulate".into(),
            failed: true,
        });
    }
    let cs = corrections(&lg, &f).map_err(usage)?;
    let specs = canonical_specs(&lg).map_err(usage)?;
    let order = execution_order(&lg, &f);
    let chosen = match outcomes {
        Some(s) => parse_outcomes(s, &lg)?,
        None => BTreeMap::new(),
    };
    let digits: Vec<u64> = order
        .iter()
        .map(|v| chosen.get(v).copied().unwrap_or(0))
        .collect();
    let initial = graph_state(&lg.graph).map_err(usage)?;
    let branch = run_branch(&lg, &specs, Some(&cs), &order, &digits, &initial)
        .map_err(|e| e.to_string())?;
    let value = json!({
        "command": "simulate",
        "digest": { "graph": g_digest, "flow": f_digest },
        "d": lg.graph.d().get(),
        "order": order,
        "outcomes": branch.outcomes,
        "probability": branch.probability,
        "state": state_value(&branch.state, lg.graph.vertices()),
    });
    Ok(CmdOutcome {
        value,
        summary: format!(
            "branch probability {:.6} over {} measurements",
            branch.probability,
            order.len()
        ),
        failed: false,
    })
}

fn cmd_oracle(graph: &Path, d_override: Option<u64>) -> Result<CmdOutcome, String> {
    let (lg, digest) = load_labelled(graph, d_override)?;
    let report = oracle_report(&lg, &OracleLimits::default()).map_err(usage)?;
    let mut value = json!({
        "command": "oracle",
        "digest": { "graph": digest },
        "d": lg.graph.d().get(),
        "exists": report.exists,
    });
    value["min_depth"] = serde_json::to_value(report.min_depth).expect("depths serialize");
    value["delayed_layers"] =
        serde_json::to_value(&report.delayed_layers).expect("layer lists serialize");
    if let Some(w) = &report.witness {
        value["witness"] = flow_value(w);
    }
    let summary = if report.exists {
        format!(
            "flow exists: minimum depth {}",
            report.min_depth.expect("existing flows have a depth")
        )
    } else {
        "no flow exists".to_string()
    };
    Ok(CmdOutcome {
        value,
        summary,
        failed: !report.exists,
    })
}

/// Property-level pattern failures (exit 2) versus malformed inputs (1).
fn pattern_failure(e: &PatternError) -> bool {
    !matches!(
        e,
        PatternError::Json(_) | PatternError::Field(_) | PatternError::Meas(_)
    )
}

fn cmd_standardize(pattern: &Path) -> Result<CmdOutcome, String> {
    let (text, digest) = read_input(pattern)?;
    let p = pattern_from_json_str(&text).map_err(usage)?;
    let mut value = json!({
        "command": "standardize",
        "digest": { "pattern": digest },
        "d": p.d,
    });
    match standardize(&p) {
        Ok(std_p) => {
            value["runnable"] = json!(true);
            value["pattern"] = serde_json::from_str(&pattern_to_json(&std_p, OrderFlag::Execution))
                .expect("pattern JSON round-trips");
            Ok(CmdOutcome {
                value,
                summary: format!(
                    "standard form: {} commands over {} vertices",
                    std_p.commands.len(),
                    std_p.universe().len()
                ),
                failed: false,
            })
        }
        Err(e) if pattern_failure(&e) => {
            value["runnable"] = json!(false);
            value["violation"] = json!(e.to_string());
            Ok(CmdOutcome {
                value,
                summary: format!("pattern is not runnable: {e}"),
                failed: true,
            })
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_extract(pattern: &Path) -> Result<CmdOutcome, String> {
    let (text, digest) = read_input(pattern)?;
    let p = pattern_from_json_str(&text).map_err(usage)?;
    let mut value = json!({
        "command": "extract",
        "digest": { "pattern": digest },
        "d": p.d,
    });
    match extract_open_graph(&p) {
        Ok((g, labelling, cs)) => {
            value["graph"] = graph_value(&g, Some(&labelling));
            value["corrections"] = corrections_value(&g, &cs);
            Ok(CmdOutcome {
                value,
                summary: format!(
                    "extracted {} vertices, {} measured, modulus {}",
                    g.vertex_count(),
                    g.measured().len(),
                    g.d().get()
                ),
                failed: false,
            })
        }
        Err(e) if pattern_failure(&e) => {
            value["violation"] = json!(e.to_string());
            Ok(CmdOutcome {
                value,
                summary: format!("pattern does not describe an open graph: {e}"),
                failed: true,
            })
        }
        Err(e) => Err(e.to_string()),
    }
}

fn run(cli: &Cli) -> Result<CmdOutcome, String> {
    match &cli.command {
        Cmd::Find { graph } => cmd_find(graph, cli.d_override),
        Cmd::FindAnyLabelling { graph } => cmd_find_any_labelling(graph, cli.d_override),
        Cmd::Verify { graph, flow } => cmd_verify(graph, flow, cli.d_override),
        Cmd::Classify { graph, flow } => cmd_classify(graph, flow, cli),
        Cmd::Simulate {
            graph,
            flow,
            outcomes,
        } => cmd_simulate(graph, flow, outcomes.as_deref(), cli),
        Cmd::Oracle { graph } => cmd_oracle(graph, cli.d_override),
        Cmd::Standardize { pattern } => cmd_standardize(pattern),
        Cmd::Extract { pattern } => cmd_extract(pattern),
    }
}

fn emit(value: &Value, pretty: bool) {
    use std::io::Write;
    let text = if pretty {
        serde_json::to_string_pretty(value).expect("reports serialize")
    } else {
        serde_json::to_string(value).expect("reports serialize")
    };
    // A closed pipe downstream is not our problem; never panic on it.
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn note(message: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr(), "{message}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let started = Instant::now();
    match run(&cli) {
        Ok(mut outcome) => {
            let elapsed = started.elapsed().as_secs_f64() * 1e3;
            outcome.value["elapsed_ms"] = json!(elapsed);
            emit(&outcome.value, cli.json);
            if !cli.quiet {
                note(format_args!("{} [{elapsed:.2} ms]", outcome.summary));
            }
            if outcome.failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(message) => {
            emit(&json!({ "error": message }), cli.json);
            if !cli.quiet {
                note(format_args!("error: {message}"));
            }
            ExitCode::from(1)
        }
    }
}
