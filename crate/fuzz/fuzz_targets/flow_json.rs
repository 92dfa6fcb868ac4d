//! Fuzzes the flow JSON decoder against a fixed two-vertex graph.

#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use zdflow::flow::flow_from_json_str;
use zdflow::graph::{graph_from_json_str, OpenGraph};

fn graph() -> &'static OpenGraph {
    static GRAPH: OnceLock<OpenGraph> = OnceLock::new();
    GRAPH.get_or_init(|| {
        graph_from_json_str(
            r#"{"d":3,"vertices":["1","2"],"edges":[["1","2",1]],"outputs":["2"]}"#,
            None,
        )
        .expect("the fixed graph parses")
        .0
    })
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = flow_from_json_str(text, graph());
    }
});
