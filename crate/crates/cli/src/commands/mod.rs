pub mod compare;
pub mod estimate;
pub mod simulate;
pub mod sweep;

use tma_core::estimators::MethodSpec;

use crate::config::ScenarioConfig;
use crate::error::{CliError, CliResult};
use crate::methods::parse_method_list;
use crate::RunArgs;

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub(crate) fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Methods from the command line, or the scenario's list when none given.
pub(crate) fn resolve_methods(args: &RunArgs, cfg: &ScenarioConfig) -> CliResult<Vec<MethodSpec>> {
    if args.methods.is_empty() {
        Ok(cfg.methods.clone())
    } else {
        parse_method_list(&args.methods, &cfg.estimation)
    }
}

pub(crate) fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}
