//! Tabular and plot-data renderings of Monte Carlo results.

use tma_core::evaluation::{ComparisonTable, MonteCarloReport, TimeStats};

use crate::csvio::{fmt_f64, CsvText};

pub const REPORT_HEADER: [&str; 11] = [
    "t",
    "mean_pos_err",
    "rmse_pos_err",
    "p5",
    "median",
    "p95",
    "mean_range_err",
    "rmse_range_err",
    "mean_x_err",
    "mean_y_err",
    "mean_vel_err",
];

/// Metric values in `REPORT_HEADER` order, without `t`. Percentiles are of
/// the position error.
pub fn metric_values(row: &TimeStats) -> [f64; 10] {
    [
        row.position.mean,
        row.position.rmse,
        row.position.p5,
        row.position.median,
        row.position.p95,
        row.range.mean,
        row.range.rmse,
        row.x.mean,
        row.y.mean,
        row.velocity.mean,
    ]
}

pub fn report_csv(report: &MonteCarloReport) -> Vec<u8> {
    let mut out = CsvText::new(&REPORT_HEADER);
    for row in &report.rows {
        let mut v = vec![row.t];
        v.extend(metric_values(row));
        out.numbers(&v);
    }
    out.finish()
}

fn ratio_names(table: &ComparisonTable) -> Vec<String> {
    match table.baseline {
        Some(b) => table
            .compared
            .iter()
            .map(|&k| format!("ratio_{}_over_{}", table.methods[b], table.methods[k]))
            .collect(),
        None => Vec::new(),
    }
}

/// One row per time: each method's position and range figures, then
/// `RMSE(baseline) / RMSE(method)` for every other method. A ratio whose
/// denominator vanishes is left empty.
pub fn comparison_csv(table: &ComparisonTable) -> Vec<u8> {
    let mut header = vec!["t".to_string()];
    for m in &table.methods {
        for suffix in [
            "mean_pos_err",
            "rmse_pos_err",
            "mean_range_err",
            "rmse_range_err",
        ] {
            header.push(format!("{m}_{suffix}"));
        }
    }
    header.extend(ratio_names(table));
    let mut out = CsvText::new(&header);
    for row in &table.rows {
        let mut fields = vec![fmt_f64(row.t)];
        for c in &row.cells {
            fields.extend([c.mean_pos, c.rmse_pos, c.mean_range, c.rmse_range].map(fmt_f64));
        }
        fields.extend(
            row.ratios
                .iter()
                .map(|r| r.map(fmt_f64).unwrap_or_default()),
        );
        out.row(&fields);
    }
    out.finish()
}

/// Whitespace-separated plot data: time and position RMSE per method.
pub fn plot_data(table: &ComparisonTable) -> Vec<u8> {
    let mut s = format!("# {} ({} range)\n# t", table.scenario, table.range_class);
    for m in &table.methods {
        s.push_str(&format!(" {m}_rmse_pos_err"));
    }
    s.push('\n');
    for row in &table.rows {
        s.push_str(&fmt_f64(row.t));
        for c in &row.cells {
            s.push(' ');
            s.push_str(&fmt_f64(c.rmse_pos));
        }
        s.push('\n');
    }
    s.into_bytes()
}

/// A gnuplot script that draws `data_file` as one line per method.
pub fn gnuplot_script(table: &ComparisonTable, data_file: &str) -> Vec<u8> {
    let mut s = String::new();
    s.push_str("set terminal pngcairo size 900,600\n");
    s.push_str(&format!(
        "set output '{}.png'\n",
        data_file.trim_end_matches(".dat")
    ));
    s.push_str(&format!(
        "set title '{} ({} range)'\n",
        table.scenario, table.range_class
    ));
    s.push_str("set xlabel 't, s'\nset ylabel 'position RMSE, m'\nset key top left\n");
    let series: Vec<String> = table
        .methods
        .iter()
        .enumerate()
        .map(|(i, m)| format!("'{data_file}' using 1:{} with lines title '{m}'", i + 2))
        .collect();
    s.push_str(&format!("plot {}\n", series.join(", \\\n     ")));
    s.into_bytes()
}

/// Keeps file names portable.
pub fn file_stem(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() {
        "scenario".into()
    } else {
        s
    }
}
