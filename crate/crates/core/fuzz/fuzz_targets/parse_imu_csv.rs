#![no_main]

use libfuzzer_sys::fuzz_target;
use sins_core::scenario::parse_imu_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(samples) = parse_imu_csv(text) {
        assert!(!samples.is_empty());
        assert!(samples.iter().all(|s| s.dt > 0.0 && s.dt.is_finite()));
    }
});
