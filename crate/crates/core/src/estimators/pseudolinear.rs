//! Pseudo-linear least squares on the bearing-line constraint.
//!
//! A bearing `beta` taken from `(x_O, y_O)` confines the target to the line
//! `(x - x_O) cos beta - (y - y_O) sin beta = 0`. With the target coordinates
//! expanded in the basis, each observation contributes one row that is linear
//! in the coefficients. The row uses `sin` and `cos` only, never `tan`, so no
//! bearing is a singular case.

use nalgebra::{DMatrix, DVector};

use super::lsq;
use super::refine::angular_residuals;
use super::{
    basis_for, basis_table, position_stderr_from, Diagnostics, EstimatorConfig, MethodKind,
    TrajectoryEstimate,
};
use crate::error::Result;
use crate::polybasis::{BasisKind, Extrapolation, PolyBasis};
use crate::sensing::{BearingObservation, ObservationSeries};

/// One design row `[phi cos beta, -phi sin beta]` and its right-hand side
/// `x_O cos beta - y_O sin beta`.
pub fn design_row(obs: &BearingObservation, basis: &PolyBasis) -> Result<(Vec<f64>, f64)> {
    let phi = basis.values_at(obs.t, Extrapolation::Reject)?;
    Ok(row_from_values(obs, &phi))
}

fn row_from_values(obs: &BearingObservation, phi: &[f64]) -> (Vec<f64>, f64) {
    let (s, c) = obs.beta.sin_cos();
    let row = phi
        .iter()
        .map(|p| p * c)
        .chain(phi.iter().map(|p| -p * s))
        .collect();
    (row, obs.observer.x * c - obs.observer.y * s)
}

/// Fits the N-Polynomials model by pseudo-linear least squares.
pub fn solve_pseudolinear(
    series: &ObservationSeries,
    cfg: &EstimatorConfig,
) -> Result<TrajectoryEstimate> {
    cfg.validate()?;
    let basis = basis_for(series, cfg.basis, cfg.degree)?;
    fit(series, basis, MethodKind::NPolynomials, cfg.cond_limit)
}

/// The N-Bearings baseline: uniform rectilinear motion, i.e. the degree-1
/// fit `x = x0 + vx t`, `y = y0 + vy t`.
///
/// Only `cond_limit` is taken from `cfg`; basis and degree are fixed.
pub fn estimate_n_bearings(
    series: &ObservationSeries,
    cfg: &EstimatorConfig,
) -> Result<TrajectoryEstimate> {
    cfg.validate()?;
    // T_0 = 1 and T_1 = tau, so degree-1 Chebyshev is the monomial model in
    // normalized time.
    let basis = basis_for(series, BasisKind::Chebyshev1, 1)?;
    fit(series, basis, MethodKind::NBearings, cfg.cond_limit)
}

fn fit(
    series: &ObservationSeries,
    basis: PolyBasis,
    method: MethodKind,
    cond_limit: f64,
) -> Result<TrajectoryEstimate> {
    let n = series.len();
    let p = basis.len();
    let table = basis_table(&basis, series);
    let mut a = DMatrix::<f64>::zeros(n, 2 * p);
    let mut b = DVector::<f64>::zeros(n);
    for (i, (obs, phi)) in series.observations().iter().zip(&table).enumerate() {
        let (row, rhs) = row_from_values(obs, phi);
        for (j, v) in row.into_iter().enumerate() {
            a[(i, j)] = v;
        }
        b[i] = rhs;
    }

    let ls = lsq::solve(&a, &b, cond_limit)?;
    let theta = ls.solution.as_slice();
    let coeffs_x = theta[..p].to_vec();
    let coeffs_y = theta[p..].to_vec();

    let dof = n.saturating_sub(2 * p);
    // An exactly determined system leaves no redundancy to estimate noise
    // from; its residual is zero and so is the reported spread.
    let s2 = if dof > 0 {
        ls.residual_sum_squares / dof as f64
    } else {
        0.0
    };
    let covariance: Vec<f64> = ls
        .unscaled_covariance
        .transpose()
        .iter()
        .map(|v| v * s2)
        .collect();

    let per_coordinate_stderr = rms_stderr(&covariance, &table);
    let angular = angular_residuals(series, &basis, &coeffs_x, &coeffs_y);
    let diagnostics = Diagnostics {
        condition_number: ls.condition_number,
        residual_rms: (ls.residual_sum_squares / n as f64).sqrt(),
        angular_residual_rms: rms(&angular),
        per_coordinate_stderr,
        refinement: None,
    };
    Ok(TrajectoryEstimate::new(
        method,
        basis,
        coeffs_x,
        coeffs_y,
        covariance,
        diagnostics,
    ))
}

pub(crate) fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

pub(crate) fn rms_stderr(covariance: &[f64], table: &[Vec<f64>]) -> (f64, f64) {
    let (mut sx, mut sy) = (0.0, 0.0);
    for phi in table {
        let (ex, ey) = position_stderr_from(covariance, phi);
        sx += ex * ex;
        sy += ey * ey;
    }
    let n = table.len().max(1) as f64;
    ((sx / n).sqrt(), (sy / n).sqrt())
}

/// Pseudo-linear residual RMS for arbitrary coefficients, meters.
pub(crate) fn residual_rms(
    series: &ObservationSeries,
    basis: &PolyBasis,
    coeffs_x: &[f64],
    coeffs_y: &[f64],
) -> f64 {
    let table = basis_table(basis, series);
    let theta: Vec<f64> = coeffs_x.iter().chain(coeffs_y).copied().collect();
    let resid: Vec<f64> = series
        .observations()
        .iter()
        .zip(&table)
        .map(|(obs, phi)| {
            let (row, rhs) = row_from_values(obs, phi);
            row.iter().zip(&theta).map(|(r, t)| r * t).sum::<f64>() - rhs
        })
        .collect();
    rms(&resid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::kinematics::WorldPoint;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn obs(t: f64, x: f64, y: f64, beta: f64) -> BearingObservation {
        BearingObservation::new(t, WorldPoint::new(x, y), beta, 0.0).unwrap()
    }

    #[test]
    fn design_row_examples() {
        let b0 = PolyBasis::new(BasisKind::Legendre, 0, 0.0, 10.0).unwrap();
        let (row, rhs) = design_row(&obs(1.0, 7.0, -3.0, 0.0), &b0).unwrap();
        assert_eq!(row, vec![1.0, -0.0]);
        assert_eq!(rhs, 7.0);

        let (row, rhs) = design_row(&obs(1.0, 7.0, -3.0, FRAC_PI_2), &b0).unwrap();
        assert!(row[0].abs() < 1e-16);
        assert_eq!(row[1], -1.0);
        assert_relative_eq!(rhs, 3.0, epsilon = 1e-15);

        // tau = 0.5 at t = 7.5 on [0, 10]
        let b1 = PolyBasis::new(BasisKind::Chebyshev1, 1, 0.0, 10.0).unwrap();
        let (row, _) = design_row(&obs(7.5, 0.0, 0.0, FRAC_PI_4), &b1).unwrap();
        let expected = [SQRT_2 / 2.0, SQRT_2 / 4.0, -SQRT_2 / 2.0, -SQRT_2 / 4.0];
        for (g, e) in row.iter().zip(expected) {
            assert_relative_eq!(*g, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn design_row_outside_window() {
        let b = PolyBasis::new(BasisKind::Legendre, 1, 0.0, 10.0).unwrap();
        assert!(matches!(
            design_row(&obs(11.0, 0.0, 0.0, 0.3), &b),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn two_line_intersection() {
        let series = ObservationSeries::new(vec![
            obs(0.0, 0.0, 0.0, FRAC_PI_4),
            obs(1.0, 100.0, 0.0, -FRAC_PI_4),
        ])
        .unwrap();
        let cfg = EstimatorConfig {
            degree: 0,
            ..Default::default()
        };
        let est = solve_pseudolinear(&series, &cfg).unwrap();
        let (p, v) = est.predict(0.5).unwrap();
        assert_relative_eq!(p.x, 50.0, epsilon = 1e-9);
        assert_relative_eq!(p.y, 50.0, epsilon = 1e-9);
        assert_eq!((v.vx, v.vy), (0.0, 0.0));
        assert!(est.diagnostics.residual_rms < 1e-9);
        assert_eq!(est.diagnostics.per_coordinate_stderr, (0.0, 0.0));
    }

    #[test]
    fn insufficient_data() {
        let series = ObservationSeries::new(vec![
            obs(0.0, 0.0, 0.0, 0.1),
            obs(1.0, 10.0, 0.0, 0.2),
            obs(2.0, 20.0, 5.0, 0.3),
        ])
        .unwrap();
        match solve_pseudolinear(&series, &EstimatorConfig::default()) {
            Err(Error::InsufficientData { needed: 6, got: 3 }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            estimate_n_bearings(&series, &EstimatorConfig::default()),
            Err(Error::InsufficientData { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn residual_rms_matches_fit() {
        let series = ObservationSeries::new(
            (0..12)
                .map(|i| {
                    let t = i as f64;
                    obs(
                        t,
                        10.0 * t,
                        (t * 0.7).sin() * 50.0,
                        0.3 + 0.02 * t + 0.001 * (i % 3) as f64,
                    )
                })
                .collect(),
        )
        .unwrap();
        let est = solve_pseudolinear(&series, &EstimatorConfig::default()).unwrap();
        let again = residual_rms(&series, &est.basis, &est.coeffs_x, &est.coeffs_y);
        assert_relative_eq!(
            again,
            est.diagnostics.residual_rms,
            max_relative = 1e-6,
            epsilon = 1e-9
        );
    }
}
