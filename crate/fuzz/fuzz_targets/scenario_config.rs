#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = tma_cli::config::parse_scenario(text) {
            // A config that validates must be simulable without panicking.
            let s = &cfg.scenario;
            if s.observation_count() <= 10_000 {
                let mut rng = tma_core::sensing::rng_from_seed(s.seed);
                let _ = tma_core::sensing::observe(s, &mut rng);
            }
        }
    }
});
