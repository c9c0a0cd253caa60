use tma_core::evaluation::{compare_table, run_monte_carlo, ComparisonTable, MonteCarloReport};

use super::{resolve_methods, warn, with_threads};
use crate::config::load_scenario;
use crate::error::CliResult;
use crate::output::{OutputDir, RunManifest};
use crate::report::{comparison_csv, file_stem, gnuplot_script, plot_data, report_csv};
use crate::CompareArgs;

pub const COMPARISON_FILE: &str = "comparison.csv";

pub fn report_file(label: &str) -> String {
    format!("report_{}.csv", file_stem(label))
}

#[derive(Debug)]
pub struct CompareOutput {
    pub reports: Vec<MonteCarloReport>,
    pub table: ComparisonTable,
}

impl CompareOutput {
    /// Final-time summary for the terminal.
    pub fn print_summary(&self) {
        let (reports, table) = (&self.reports, &self.table);
        let Some(first) = reports.first() else { return };
        println!(
            "{} ({} range), {} runs, seed {}",
            first.scenario, first.range_class, first.n_runs, first.master_seed
        );
        for r in reports {
            let f = r.final_row();
            println!(
                "  {:<28} final position RMSE {:>12.3} m  failures {}",
                r.label(),
                f.position.rmse,
                r.failure_count
            );
        }
        if let (Some(b), Some(last)) = (table.baseline, table.rows.last()) {
            for (&k, ratio) in table.compared.iter().zip(&last.ratios) {
                if let Some(v) = ratio {
                    println!(
                        "  {} / {} final RMSE ratio {v:.3}",
                        table.methods[b], table.methods[k]
                    );
                }
            }
        }
    }
}

pub fn run(args: &CompareArgs) -> CliResult<CompareOutput> {
    let (cfg, bytes) = load_scenario(&args.run.scenario)?;
    let methods = resolve_methods(&args.run, &cfg)?;
    let mut scenario = cfg.scenario.clone();
    if let Some(seed) = args.run.seed {
        scenario.seed = seed;
    }
    let runs = args.runs as usize;
    let reports = with_threads(args.run.threads, || {
        run_monte_carlo(&scenario, &methods, runs)
    })??;
    let table = compare_table(&reports)?;

    let mut manifest = RunManifest::new("compare").scenario(&args.run.scenario, &bytes);
    manifest.master_seed = Some(scenario.seed);
    manifest.runs = Some(runs);
    manifest.methods = methods.clone();
    manifest.warnings = cfg.warnings.iter().map(ToString::to_string).collect();
    for r in &reports {
        if r.successes() == 0 {
            manifest.failed_methods.push(r.label().to_string());
            manifest
                .warnings
                .push(format!("{} failed in all {} runs", r.label(), r.n_runs));
        } else if r.is_degenerate() {
            manifest.warnings.push(format!(
                "{} failed in {} of {} runs",
                r.label(),
                r.failure_count,
                r.n_runs
            ));
        }
    }
    for w in &manifest.warnings {
        warn(w);
    }

    let mut out = OutputDir::create(&args.run.out_dir)?;
    for r in &reports {
        out.write(&report_file(r.label()), &report_csv(r))?;
    }
    out.write(COMPARISON_FILE, &comparison_csv(&table))?;
    let stem = format!("plot_{}", file_stem(&scenario.name));
    let dat = format!("{stem}.dat");
    out.write(&dat, &plot_data(&table))?;
    if args.plot_script {
        out.write(&format!("{stem}.gp"), &gnuplot_script(&table, &dat))?;
    }
    manifest.write_into(&mut out)?;

    Ok(CompareOutput { reports, table })
}
