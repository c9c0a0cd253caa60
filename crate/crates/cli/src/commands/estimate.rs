use std::path::PathBuf;

use serde::Serialize;
use tma_core::estimators::{EstimatorConfig, MethodKind, MethodSpec, TrajectoryEstimate};
use tma_core::polybasis::BasisKind;

use crate::csvio::{read_observations, track_csv};
use crate::error::{CliError, CliResult};
use crate::methods::{default_label, parse_method_spec};
use crate::output::{OutputDir, RunManifest};
use crate::EstimateArgs;

pub const ESTIMATE_FILE: &str = "estimate.json";
pub const TRACK_FILE: &str = "track.csv";

#[derive(Debug, Serialize)]
struct EstimateReport<'a> {
    method: &'a MethodSpec,
    observations: usize,
    estimate: &'a TrajectoryEstimate,
}

#[derive(Debug)]
pub struct EstimateOutput {
    pub estimate: TrajectoryEstimate,
    pub track: PathBuf,
}

fn method_from_args(args: &EstimateArgs) -> CliResult<MethodSpec> {
    if let Some(spec) = &args.method {
        return parse_method_spec(spec, &EstimatorConfig::default());
    }
    let basis = args
        .basis
        .parse::<BasisKind>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let config = EstimatorConfig {
        basis,
        degree: args.degree as usize,
        refine: args.refine,
        ..EstimatorConfig::default()
    };
    Ok(MethodSpec {
        label: default_label(MethodKind::NPolynomials, &config),
        kind: MethodKind::NPolynomials,
        config,
    })
}

fn fmt_list(v: &[f64]) -> String {
    v.iter()
        .map(|c| format!("{c:.6e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run(args: &EstimateArgs) -> CliResult<EstimateOutput> {
    let method = method_from_args(args)?;
    let bytes =
        std::fs::read(&args.observations).map_err(|e| CliError::io(&args.observations, e))?;
    let series = read_observations(&bytes)?;
    let estimate = method.estimate(&series).map_err(|e| {
        if let tma_core::Error::Unobservable { condition_number } = e {
            eprintln!("condition number: {condition_number:.6e}");
        }
        CliError::data(e)
    })?;

    let mut out = OutputDir::create(&args.out_dir)?;
    let report = EstimateReport {
        method: &method,
        observations: series.len(),
        estimate: &estimate,
    };
    let mut json = serde_json::to_vec_pretty(&report).expect("estimate serializes");
    json.push(b'\n');
    out.write(ESTIMATE_FILE, &json)?;
    let track = out.write(TRACK_FILE, &track_csv(&estimate, &series.times())?)?;
    let mut manifest = RunManifest::new("estimate");
    manifest.methods = vec![method.clone()];
    manifest.write_into(&mut out)?;

    let d = &estimate.diagnostics;
    let (t0, tf) = estimate.basis.window();
    println!(
        "method: {} ({} observations, window [{t0}, {tf}] s)",
        method.label,
        series.len()
    );
    println!("coeffs_x: {}", fmt_list(&estimate.coeffs_x));
    println!("coeffs_y: {}", fmt_list(&estimate.coeffs_y));
    println!("condition_number: {:.6e}", d.condition_number);
    println!("residual_rms_m: {:.6e}", d.residual_rms);
    println!("angular_residual_rms_rad: {:.6e}", d.angular_residual_rms);
    println!(
        "stderr_m: x {:.6e} y {:.6e}",
        d.per_coordinate_stderr.0, d.per_coordinate_stderr.1
    );
    if let Some(r) = &d.refinement {
        println!(
            "refinement: {} iterations, converged {}, objective {:.6e} -> {:.6e}",
            r.iterations, r.converged, r.initial_objective, r.final_objective
        );
    }
    Ok(EstimateOutput { estimate, track })
}
