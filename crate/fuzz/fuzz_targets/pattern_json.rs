//! Fuzzes the pattern JSON decoder and the symbolic passes behind it
//! (runnability checking, standardization, open-graph extraction). The
//! simulator is deliberately not driven: state vectors are exponential in
//! the number of vertices.

#![no_main]

use libfuzzer_sys::fuzz_target;
use zdflow::pattern::{check_runnable, extract_open_graph, pattern_from_json_str, standardize};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = pattern_from_json_str(text) {
            let _ = check_runnable(&p);
            let _ = standardize(&p);
            let _ = extract_open_graph(&p);
        }
    }
});
