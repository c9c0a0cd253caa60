use std::path::PathBuf;

use tma_core::sensing::{observe, rng_from_seed, split_seed};

use super::warn;
use crate::config::load_scenario;
use crate::csvio::{observations_csv, truth_csv};
use crate::error::CliResult;
use crate::output::{OutputDir, RunManifest};
use crate::SimulateArgs;

pub const OBSERVATIONS_FILE: &str = "observations.csv";
pub const TRUTH_FILE: &str = "truth.csv";

#[derive(Debug)]
pub struct SimulateOutput {
    pub observations: PathBuf,
    pub truth: PathBuf,
    pub count: usize,
}

/// Draws the series of Monte Carlo run 0 for the scenario's seed, so a
/// simulated file matches the first run of `compare`.
pub fn run(args: &SimulateArgs) -> CliResult<SimulateOutput> {
    let (cfg, bytes) = load_scenario(&args.scenario)?;
    let mut scenario = cfg.scenario;
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    for w in &cfg.warnings {
        warn(&w.to_string());
    }
    let mut rng = rng_from_seed(split_seed(scenario.seed, 0));
    let (series, truth) = observe(&scenario, &mut rng)?;

    let mut out = OutputDir::create(&args.out_dir)?;
    let observations = out.write(OBSERVATIONS_FILE, &observations_csv(&series))?;
    let truth_path = out.write(TRUTH_FILE, &truth_csv(&truth))?;
    let mut manifest = RunManifest::new("simulate").scenario(&args.scenario, &bytes);
    manifest.master_seed = Some(scenario.seed);
    manifest.warnings = cfg.warnings.iter().map(ToString::to_string).collect();
    manifest.write_into(&mut out)?;

    println!(
        "{}: {} observations, sigma {} deg, seed {} -> {}",
        scenario.name,
        series.len(),
        scenario.bearing_sigma.to_degrees(),
        scenario.seed,
        args.out_dir.display()
    );
    Ok(SimulateOutput {
        observations,
        truth: truth_path,
        count: series.len(),
    })
}
