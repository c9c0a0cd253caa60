#![no_main]

use libfuzzer_sys::fuzz_target;
use tma_cli::csvio::read_observations;
use tma_core::estimators::MethodSpec;
use tma_core::polybasis::BasisKind;

// First byte picks basis, degree and refinement; the rest is an
// observations file.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(series) = read_observations(rest) else { return };
    let basis = BasisKind::ALL[(sel % 3) as usize];
    let mut method = MethodSpec::n_polynomials(basis, ((sel >> 2) % 5) as usize);
    method.config.refine = sel & 0x80 != 0;
    if let Ok(est) = method.estimate(&series) {
        for t in series.times() {
            let _ = est.predict(t);
            let _ = est.position_stderr(t);
        }
    }
});
