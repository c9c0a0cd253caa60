#![no_main]

use libfuzzer_sys::fuzz_target;
use tma_cli::methods::parse_method_spec;
use tma_core::estimators::EstimatorConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(m) = parse_method_spec(text, &EstimatorConfig::default()) {
            assert!(m.config.validate().is_ok());
            assert!(!m.label.is_empty());
        }
    }
});
