#![no_main]

use std::path::Path;

use libfuzzer_sys::fuzz_target;
use sins_core::scenario::parse_scenario;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cfg) = parse_scenario(text) else { return };
    // Resolution must not panic either; csv inputs point at files that do
    // not exist under this directory and come back as errors.
    if let Ok(s) = cfg.into_scenario(Path::new("/nonexistent")) {
        if s.duration / s.dt < 1e5 {
            let _ = s.imu_samples();
        }
        let _ = s.analytic_state(s.duration);
    }
});
