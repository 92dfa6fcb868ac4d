//! Fuzzes the measurement-spec JSON decoder and, for specs that validate,
//! the (small, fixed-dimension) unitary construction.

#![no_main]

use libfuzzer_sys::fuzz_target;
use zdflow::meas::{measurement_unitary, MeasurementSpec};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = MeasurementSpec::from_json_str(text) {
            for d in [3u64, 5] {
                if spec.validate(d).is_ok() {
                    let _ = measurement_unitary(&spec, d);
                }
            }
        }
    }
});
