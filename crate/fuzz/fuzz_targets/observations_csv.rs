#![no_main]

use libfuzzer_sys::fuzz_target;
use tma_cli::csvio::{observations_csv, read_observations};

fuzz_target!(|data: &[u8]| {
    if let Ok(series) = read_observations(data) {
        // Whatever parses must survive a write/read round trip unchanged.
        let text = observations_csv(&series);
        let again = read_observations(&text).expect("re-read of written observations");
        assert_eq!(series, again);
    }
});
