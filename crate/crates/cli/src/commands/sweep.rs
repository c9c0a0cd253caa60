use tma_core::estimators::{MethodKind, MethodSpec};
use tma_core::evaluation::{run_monte_carlo, MonteCarloReport};
use tma_core::kinematics::Scenario;
use tma_core::sensing::split_seed;

use super::{resolve_methods, warn, with_threads};
use crate::config::{load_scenario, nearest_class};
use crate::csvio::{fmt_f64, CsvText};
use crate::error::{CliError, CliResult};
use crate::methods::default_label;
use crate::output::{OutputDir, RunManifest};
use crate::report::{metric_values, REPORT_HEADER};
use crate::{SweepArgs, SweepParam};

pub fn sweep_file(param: SweepParam) -> String {
    format!("sweep_{}.csv", param.name())
}

/// Results of one swept value.
#[derive(Debug)]
pub struct SweepCell {
    pub value: f64,
    pub seed: u64,
    pub reports: Vec<MonteCarloReport>,
}

fn whole(param: SweepParam, v: f64) -> CliResult<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(CliError::Usage(format!(
            "{} values must be non-negative integers, got {v}",
            param.name()
        )))
    }
}

/// Applies one swept value to the scenario and methods.
fn apply(
    param: SweepParam,
    value: f64,
    base: &Scenario,
    methods: &[MethodSpec],
) -> CliResult<(Scenario, Vec<MethodSpec>)> {
    let mut scenario = base.clone();
    let mut methods = methods.to_vec();
    match param {
        SweepParam::InitialRange => {
            scenario = base.with_initial_range(value).map_err(CliError::config)?;
            scenario.range_class = nearest_class(value);
        }
        SweepParam::SigmaDeg => {
            if !value.is_finite() || value < 0.0 {
                return Err(CliError::Usage(format!(
                    "sigma_deg values must be non-negative, got {value}"
                )));
            }
            scenario.bearing_sigma = value.to_radians();
        }
        SweepParam::Degree => {
            let d = whole(param, value)?;
            for m in methods
                .iter_mut()
                .filter(|m| m.kind == MethodKind::NPolynomials)
            {
                let relabel = m.label == default_label(m.kind, &m.config);
                m.config.degree = d;
                m.config
                    .validate()
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                if relabel {
                    m.label = default_label(m.kind, &m.config);
                }
            }
        }
        SweepParam::NObs => {
            scenario = base
                .with_observation_count(whole(param, value)?)
                .map_err(CliError::config)?;
        }
    }
    Ok((scenario, methods))
}

/// Runs the comparison once per value. Cell `i` uses the sub-seed
/// `split_seed(master, i)`, shared by all methods of the cell.
pub fn run(args: &SweepArgs) -> CliResult<Vec<SweepCell>> {
    if args.values.is_empty() {
        return Err(CliError::Usage("--values needs at least one value".into()));
    }
    let (cfg, bytes) = load_scenario(&args.run.scenario)?;
    let methods = resolve_methods(&args.run, &cfg)?;
    let master = args.run.seed.unwrap_or(cfg.scenario.seed);
    let runs = args.runs as usize;

    let mut cells = Vec::with_capacity(args.values.len());
    let mut all_methods = Vec::new();
    let mut warnings = Vec::new();
    for (i, &value) in args.values.iter().enumerate() {
        let (mut scenario, cell_methods) = apply(args.param, value, &cfg.scenario, &methods)?;
        scenario.seed = split_seed(master, i as u64);
        let reports = with_threads(args.run.threads, || {
            run_monte_carlo(&scenario, &cell_methods, runs)
        })??;
        for r in reports.iter().filter(|r| r.is_degenerate()) {
            warnings.push(format!(
                "{}={}: {} failed in {} of {} runs",
                args.param.name(),
                value,
                r.label(),
                r.failure_count,
                r.n_runs
            ));
        }
        for m in cell_methods {
            if !all_methods.contains(&m) {
                all_methods.push(m);
            }
        }
        cells.push(SweepCell {
            value,
            seed: scenario.seed,
            reports,
        });
    }
    for w in &warnings {
        warn(w);
    }

    let mut header = vec!["param_value", "method", "cell_seed"];
    header.extend(REPORT_HEADER);
    header.push("failures");
    let mut csv = CsvText::new(&header);
    for cell in &cells {
        for r in &cell.reports {
            for row in &r.rows {
                let mut fields = vec![
                    fmt_f64(cell.value),
                    r.label().to_string(),
                    cell.seed.to_string(),
                    fmt_f64(row.t),
                ];
                fields.extend(metric_values(row).map(fmt_f64));
                fields.push(r.failure_count.to_string());
                csv.row(&fields);
            }
        }
    }

    let mut out = OutputDir::create(&args.run.out_dir)?;
    let name = sweep_file(args.param);
    out.write(&name, &csv.finish())?;
    let mut manifest = RunManifest::new("sweep").scenario(&args.run.scenario, &bytes);
    manifest.master_seed = Some(master);
    manifest.runs = Some(runs);
    manifest.methods = all_methods;
    manifest.warnings = warnings;
    manifest.write_into(&mut out)?;

    println!(
        "{} over {} values of {} -> {}",
        cfg.scenario.name,
        cells.len(),
        args.param.name(),
        name
    );
    for cell in &cells {
        let parts: Vec<String> = cell
            .reports
            .iter()
            .map(|r| format!("{} {:.3}", r.label(), r.final_row().position.rmse))
            .collect();
        println!(
            "  {} = {}: final RMSE {}",
            args.param.name(),
            cell.value,
            parts.join(", ")
        );
    }
    Ok(cells)
}
