//! Fuzzes the graph JSON decoder, with and without a modulus override.

#![no_main]

use libfuzzer_sys::fuzz_target;
use zdflow::graph::graph_from_json_str;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = graph_from_json_str(text, None);
        let _ = graph_from_json_str(text, Some(3));
    }
});
