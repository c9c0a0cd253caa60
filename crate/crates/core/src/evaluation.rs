//! Error metrics and the paired Monte Carlo comparison harness.
//!
//! Every run draws one observation series from its own sub-seed and hands the
//! same series to every method, so method differences are never noise
//! differences. Runs are independent and may execute on any number of
//! threads; results are gathered in run order before aggregation, so reports
//! are bit-identical regardless of scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{MethodKind, MethodSpec, TrajectoryEstimate};
use crate::kinematics::{RangeClass, Scenario, WorldPoint};
use crate::sensing::{observe, rng_from_seed, split_seed, ObservationSeries, TruthTrack};

/// Per-time errors of one estimate against the truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSeries {
    pub times: Vec<f64>,
    /// `|p_hat - p_true|`, meters.
    pub position: Vec<f64>,
    /// `| |p_hat - p_obs| - |p_true - p_obs| |`, meters.
    pub range: Vec<f64>,
    /// Signed `x_hat - x_true`, meters.
    pub x: Vec<f64>,
    /// Signed `y_hat - y_true`, meters.
    pub y: Vec<f64>,
    /// `|v_hat - v_true|`, m/s.
    pub velocity: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorField {
    Position,
    Range,
    X,
    Y,
    Velocity,
}

impl ErrorField {
    pub const ALL: [ErrorField; 5] = [
        ErrorField::Position,
        ErrorField::Range,
        ErrorField::X,
        ErrorField::Y,
        ErrorField::Velocity,
    ];
}

impl ErrorSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn field(&self, field: ErrorField) -> &[f64] {
        match field {
            ErrorField::Position => &self.position,
            ErrorField::Range => &self.range,
            ErrorField::X => &self.x,
            ErrorField::Y => &self.y,
            ErrorField::Velocity => &self.velocity,
        }
    }
}

/// Scores `estimate` against the target truth, with `observer` giving the
/// observer position at each truth time.
pub fn score_run(
    estimate: &TrajectoryEstimate,
    truth: &TruthTrack,
    observer: &[WorldPoint],
) -> Result<ErrorSeries> {
    if observer.len() != truth.samples.len() {
        return Err(Error::Shape {
            what: "observer track",
            expected: truth.samples.len(),
            got: observer.len(),
        });
    }
    let n = truth.samples.len();
    let mut out = ErrorSeries {
        times: Vec::with_capacity(n),
        position: Vec::with_capacity(n),
        range: Vec::with_capacity(n),
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        velocity: Vec::with_capacity(n),
    };
    for (s, obs) in truth.samples.iter().zip(observer) {
        let (p, v) = estimate.predict(s.t)?;
        out.times.push(s.t);
        out.position.push(p.distance(&s.position));
        out.range
            .push((p.distance(obs) - s.position.distance(obs)).abs());
        out.x.push(p.x - s.position.x);
        out.y.push(p.y - s.position.y);
        out.velocity.push((v - s.velocity).norm());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldStats {
    pub mean: f64,
    pub rmse: f64,
    pub median: f64,
    pub p5: f64,
    pub p95: f64,
}

impl FieldStats {
    fn undefined() -> Self {
        Self {
            mean: f64::NAN,
            rmse: f64::NAN,
            median: f64::NAN,
            p5: f64::NAN,
            p95: f64::NAN,
        }
    }
}

/// Aggregates at one observation time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeStats {
    pub t: f64,
    pub position: FieldStats,
    pub range: FieldStats,
    pub x: FieldStats,
    pub y: FieldStats,
    pub velocity: FieldStats,
}

impl TimeStats {
    pub fn field(&self, field: ErrorField) -> &FieldStats {
        match field {
            ErrorField::Position => &self.position,
            ErrorField::Range => &self.range,
            ErrorField::X => &self.x,
            ErrorField::Y => &self.y,
            ErrorField::Velocity => &self.velocity,
        }
    }

    fn field_mut(&mut self, field: ErrorField) -> &mut FieldStats {
        match field {
            ErrorField::Position => &mut self.position,
            ErrorField::Range => &mut self.range,
            ErrorField::X => &mut self.x,
            ErrorField::Y => &mut self.y,
            ErrorField::Velocity => &mut self.velocity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub method: MethodSpec,
    pub scenario: String,
    pub range_class: RangeClass,
    pub master_seed: u64,
    pub n_runs: usize,
    /// Runs rejected by the estimator; excluded from the statistics.
    pub failure_count: usize,
    pub rows: Vec<TimeStats>,
}

impl MonteCarloReport {
    pub fn label(&self) -> &str {
        &self.method.label
    }

    pub fn successes(&self) -> usize {
        self.n_runs - self.failure_count
    }

    /// More than half of the runs failed.
    pub fn is_degenerate(&self) -> bool {
        2 * self.failure_count > self.n_runs
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn final_row(&self) -> &TimeStats {
        self.rows.last().expect("reports have at least one time")
    }
}

/// Everything one run produced: the shared series, the truth, and each
/// method's scored outcome.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub series: ObservationSeries,
    pub truth: TruthTrack,
    pub results: Vec<Result<ErrorSeries>>,
}

/// Executes run `index` of a Monte Carlo batch in isolation.
pub fn simulate_run(scenario: &Scenario, methods: &[MethodSpec], index: u64) -> Result<RunOutcome> {
    let mut rng = rng_from_seed(split_seed(scenario.seed, index));
    let (series, truth) = observe(scenario, &mut rng)?;
    let observer = series.observer_positions();
    let results = methods
        .iter()
        .map(|m| {
            m.estimate(&series)
                .and_then(|est| score_run(&est, &truth, &observer))
        })
        .collect();
    Ok(RunOutcome {
        series,
        truth,
        results,
    })
}

/// Runs `n_runs` paired trials of every method and aggregates per method.
///
/// Parallelism comes from the ambient rayon pool; wrap the call in
/// `ThreadPool::install` to bound it.
pub fn run_monte_carlo(
    scenario: &Scenario,
    methods: &[MethodSpec],
    n_runs: usize,
) -> Result<Vec<MonteCarloReport>> {
    if n_runs == 0 {
        return Err(Error::invalid("runs", "must be at least 1"));
    }
    if methods.is_empty() {
        return Err(Error::invalid("methods", "at least one method is required"));
    }
    for m in methods {
        m.config.validate()?;
    }
    let max_degree = methods
        .iter()
        .map(MethodSpec::effective_degree)
        .max()
        .unwrap_or(1);
    scenario.validate(max_degree)?;
    let times = scenario.sample_times();

    let outcomes: Vec<Vec<Option<ErrorSeries>>> = (0..n_runs as u64)
        .into_par_iter()
        .map(|j| {
            simulate_run(scenario, methods, j)
                .map(|o| o.results.into_iter().map(|r| r.ok()).collect())
        })
        .collect::<Result<_>>()?;

    Ok(methods
        .iter()
        .enumerate()
        .map(|(k, method)| {
            let runs: Vec<Option<&ErrorSeries>> = outcomes.iter().map(|o| o[k].as_ref()).collect();
            let failure_count = runs.iter().filter(|r| r.is_none()).count();
            MonteCarloReport {
                method: method.clone(),
                scenario: scenario.name.clone(),
                range_class: scenario.range_class,
                master_seed: scenario.seed,
                n_runs,
                failure_count,
                rows: aggregate(&times, &runs),
            }
        })
        .collect())
}

/// Per-time statistics over successful runs, in run order.
pub fn aggregate(times: &[f64], runs: &[Option<&ErrorSeries>]) -> Vec<TimeStats> {
    let ok: Vec<&ErrorSeries> = runs.iter().flatten().copied().collect();
    times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut row = TimeStats {
                t,
                position: FieldStats::undefined(),
                range: FieldStats::undefined(),
                x: FieldStats::undefined(),
                y: FieldStats::undefined(),
                velocity: FieldStats::undefined(),
            };
            if !ok.is_empty() {
                for field in ErrorField::ALL {
                    let values: Vec<f64> = ok.iter().map(|e| e.field(field)[i]).collect();
                    *row.field_mut(field) = field_stats(&values);
                }
            }
            row
        })
        .collect()
}

fn field_stats(values: &[f64]) -> FieldStats {
    let n = values.len() as f64;
    let (sum, sum_sq) = values
        .iter()
        .fold((0.0, 0.0), |(s, q), v| (s + v, q + v * v));
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    FieldStats {
        mean: sum / n,
        rmse: (sum_sq / n).sqrt(),
        median: percentile(&sorted, 0.5),
        p5: percentile(&sorted, 0.05),
        p95: percentile(&sorted, 0.95),
    }
}

/// Linear interpolation between order statistics of `sorted`.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let h = (n - 1) as f64 * q.clamp(0.0, 1.0);
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        }
    }
}

/// Absolute figures of one method at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MethodCell {
    pub mean_pos: f64,
    pub rmse_pos: f64,
    pub mean_range: f64,
    pub rmse_range: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub t: f64,
    /// One cell per report, in report order.
    pub cells: Vec<MethodCell>,
    /// `RMSE(baseline) / RMSE(method)` for each compared method; `None` when
    /// the method's RMSE is below `1e-12`.
    pub ratios: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub scenario: String,
    pub range_class: RangeClass,
    pub methods: Vec<String>,
    /// Index of the report the ratios are taken against.
    pub baseline: Option<usize>,
    /// Report indices that get a ratio column, in column order.
    pub compared: Vec<usize>,
    pub rows: Vec<ComparisonRow>,
}

/// Aligns reports on their shared time grid. The baseline is the first
/// N-Bearings report, or the first report when none is N-Bearings; every
/// other report gets a position-RMSE ratio against it.
pub fn compare_table(reports: &[MonteCarloReport]) -> Result<ComparisonTable> {
    let first = reports
        .first()
        .ok_or_else(|| Error::invalid("reports", "at least one report is required"))?;
    let times = first.times();
    for r in &reports[1..] {
        if r.scenario != first.scenario {
            return Err(Error::invalid(
                "reports",
                format!(
                    "scenario '{}' differs from '{}'",
                    r.scenario, first.scenario
                ),
            ));
        }
        if r.rows.len() != times.len() {
            return Err(Error::Shape {
                what: "report time grid",
                expected: times.len(),
                got: r.rows.len(),
            });
        }
        if r.rows.iter().zip(&times).any(|(row, t)| row.t != *t) {
            return Err(Error::invalid("reports", "time grids differ"));
        }
    }
    let baseline = if reports.len() < 2 {
        None
    } else {
        Some(
            reports
                .iter()
                .position(|r| r.method.kind == MethodKind::NBearings)
                .unwrap_or(0),
        )
    };
    let compared: Vec<usize> = match baseline {
        Some(b) => (0..reports.len()).filter(|&i| i != b).collect(),
        None => Vec::new(),
    };
    let rows = times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let cells = reports
                .iter()
                .map(|r| {
                    let row = &r.rows[i];
                    MethodCell {
                        mean_pos: row.position.mean,
                        rmse_pos: row.position.rmse,
                        mean_range: row.range.mean,
                        rmse_range: row.range.rmse,
                    }
                })
                .collect::<Vec<_>>();
            let ratios = match baseline {
                Some(b) => compared
                    .iter()
                    .map(|&k| {
                        let denom = cells[k].rmse_pos;
                        (denom >= 1e-12).then(|| cells[b].rmse_pos / denom)
                    })
                    .collect(),
                None => Vec::new(),
            };
            ComparisonRow { t, cells, ratios }
        })
        .collect();
    Ok(ComparisonTable {
        scenario: first.scenario.clone(),
        range_class: first.range_class,
        methods: reports.iter().map(|r| r.method.label.clone()).collect(),
        baseline,
        compared,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::MethodKind;
    use crate::kinematics::WorldVector;
    use crate::polybasis::{BasisKind, PolyBasis};
    use crate::sensing::TruthSample;
    use approx::assert_relative_eq;

    fn constant_estimate(x: f64, y: f64) -> TrajectoryEstimate {
        let basis = PolyBasis::new(BasisKind::Legendre, 0, 0.0, 10.0).unwrap();
        TrajectoryEstimate::from_coefficients(MethodKind::NPolynomials, basis, vec![x], vec![y])
            .unwrap()
    }

    fn truth_at(points: &[(f64, f64, f64)]) -> TruthTrack {
        TruthTrack {
            samples: points
                .iter()
                .map(|&(t, x, y)| TruthSample {
                    t,
                    position: WorldPoint::new(x, y),
                    velocity: WorldVector::default(),
                })
                .collect(),
        }
    }

    #[test]
    fn perfect_estimate_scores_zero() {
        let truth = truth_at(&[(0.0, 5.0, 7.0), (5.0, 5.0, 7.0), (10.0, 5.0, 7.0)]);
        let obs = vec![WorldPoint::new(0.0, 0.0); 3];
        let e = score_run(&constant_estimate(5.0, 7.0), &truth, &obs).unwrap();
        for f in ErrorField::ALL {
            assert!(e.field(f).iter().all(|v| v.abs() <= 1e-9));
        }
    }

    #[test]
    fn offset_and_range_errors() {
        let truth = truth_at(&[(0.0, 0.0, 90.0), (10.0, 0.0, 90.0)]);
        let obs = vec![WorldPoint::new(0.0, 0.0); 2];
        let e = score_run(&constant_estimate(0.0, 100.0), &truth, &obs).unwrap();
        assert_eq!(e.range, vec![10.0, 10.0]);
        assert_eq!(e.y, vec![10.0, 10.0]);

        let truth = truth_at(&[(0.0, 1.0, 2.0), (4.0, 1.0, 2.0)]);
        let e = score_run(&constant_estimate(4.0, 6.0), &truth, &obs).unwrap();
        assert_eq!(e.position, vec![5.0, 5.0]);
        assert_eq!(e.x, vec![3.0, 3.0]);
    }

    #[test]
    fn observer_length_mismatch() {
        let truth = truth_at(&[(0.0, 0.0, 90.0), (10.0, 0.0, 90.0)]);
        let err = score_run(
            &constant_estimate(0.0, 0.0),
            &truth,
            &[WorldPoint::default()],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Shape { .. }));
    }

    #[test]
    fn truth_outside_window_is_domain_error() {
        let truth = truth_at(&[(0.0, 0.0, 90.0), (12.0, 0.0, 90.0)]);
        let err = score_run(
            &constant_estimate(0.0, 0.0),
            &truth,
            &[WorldPoint::default(); 2],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
    }

    #[test]
    fn percentile_interpolates() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(percentile(&v, 0.5), 3.0);
        assert_eq!(percentile(&v, 0.0), 1.0);
        assert_eq!(percentile(&v, 1.0), 5.0);
        assert_relative_eq!(percentile(&v, 0.05), 1.2);
        assert_eq!(percentile(&[7.0], 0.95), 7.0);
        assert!(percentile(&[], 0.5).is_nan());
    }

    #[test]
    fn single_run_statistics_collapse() {
        let e = ErrorSeries {
            times: vec![0.0],
            position: vec![3.0],
            range: vec![1.0],
            x: vec![-2.0],
            y: vec![1.0],
            velocity: vec![0.5],
        };
        let rows = aggregate(&[0.0], &[Some(&e)]);
        let p = rows[0].position;
        assert_eq!(
            (p.mean, p.rmse, p.median, p.p5, p.p95),
            (3.0, 3.0, 3.0, 3.0, 3.0)
        );
        assert_eq!(rows[0].x.mean, -2.0);
        assert_eq!(rows[0].x.rmse, 2.0);
        let none = aggregate(&[0.0], &[None]);
        assert!(none[0].position.mean.is_nan());
    }
}
