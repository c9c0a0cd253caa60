//! Gauss-Newton refinement on the true angular residuals.
//!
//! Pseudo-linear least squares weights each bearing by the target range and
//! is biased when noise is large. Refinement minimizes
//! `sum wrap(beta_i - beta_hat_i)^2 / sigma^2` directly, starting from the
//! pseudo-linear fit. Steps are accepted only when they decrease the
//! objective (halving the step up to 30 times), so the result is never worse
//! than the starting point.

use nalgebra::{DMatrix, DVector};

use super::lsq;
use super::pseudolinear::{residual_rms, rms, rms_stderr};
use super::{basis_table, Diagnostics, EstimatorConfig, RefinementInfo, TrajectoryEstimate};
use crate::error::{Error, Result};
use crate::polybasis::PolyBasis;
use crate::sensing::{wrap_angle, ObservationSeries};

const MAX_HALVINGS: usize = 30;

/// Closest the predicted target may come to the observer, meters.
const MIN_PREDICTED_RANGE: f64 = 1e-6;

/// `wrap(beta_i - beta_hat_i)` in radians for the given coefficients.
///
/// A predicted position on top of the observer yields `atan2(0, 0) = 0`.
pub fn angular_residuals(
    series: &ObservationSeries,
    basis: &PolyBasis,
    coeffs_x: &[f64],
    coeffs_y: &[f64],
) -> Vec<f64> {
    let table = basis_table(basis, series);
    series
        .observations()
        .iter()
        .zip(&table)
        .map(|(o, phi)| {
            let x = dot(coeffs_x, phi) - o.observer.x;
            let y = dot(coeffs_y, phi) - o.observer.y;
            wrap_angle(o.beta - x.atan2(y))
        })
        .collect()
}

/// `sum r_i^2 / sigma^2`, with unit weight for a noiseless series.
pub fn angular_objective(
    series: &ObservationSeries,
    basis: &PolyBasis,
    coeffs_x: &[f64],
    coeffs_y: &[f64],
) -> f64 {
    let r = angular_residuals(series, basis, coeffs_x, coeffs_y);
    r.iter().map(|v| v * v).sum::<f64>() * weight(series)
}

fn weight(series: &ObservationSeries) -> f64 {
    let sigma = series.sigma();
    if sigma > 0.0 {
        1.0 / (sigma * sigma)
    } else {
        1.0
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobian of the predicted bearings with respect to `(a, b)`, row-major
/// `N x 2(d+1)`.
///
/// With `dx = x_hat - x_O`, `dy = y_hat - y_O` and `r^2 = dx^2 + dy^2`,
/// `d beta_hat / d a_k = phi_k dy / r^2` and `d beta_hat / d b_k = -phi_k dx / r^2`.
pub fn angular_jacobian(
    series: &ObservationSeries,
    basis: &PolyBasis,
    coeffs_x: &[f64],
    coeffs_y: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let table = basis_table(basis, series);
    series
        .observations()
        .iter()
        .zip(&table)
        .map(|(o, phi)| {
            let dx = dot(coeffs_x, phi) - o.observer.x;
            let dy = dot(coeffs_y, phi) - o.observer.y;
            let r2 = dx * dx + dy * dy;
            if !(r2.sqrt() > MIN_PREDICTED_RANGE) {
                return Err(Error::DegenerateGeometry { t: o.t });
            }
            Ok(phi
                .iter()
                .map(|p| p * dy / r2)
                .chain(phi.iter().map(|p| -p * dx / r2))
                .collect())
        })
        .collect()
}

fn min_predicted_range(
    series: &ObservationSeries,
    table: &[Vec<f64>],
    theta: &[f64],
    p: usize,
) -> (f64, f64) {
    let mut worst = (f64::INFINITY, f64::NAN);
    for (o, phi) in series.observations().iter().zip(table) {
        let dx = dot(&theta[..p], phi) - o.observer.x;
        let dy = dot(&theta[p..], phi) - o.observer.y;
        let r = dx.hypot(dy);
        if !(r >= worst.0) {
            worst = (r, o.t);
        }
    }
    worst
}

/// Refines `init` by Gauss-Newton on the angular residuals.
///
/// Stops when a step would move no predicted bearing by more than
/// `cfg.refine_tol`, when no halved step decreases the objective, or after
/// `cfg.refine_max_iters` iterations (reported as not converged).
pub fn refine_gauss_newton(
    series: &ObservationSeries,
    init: &TrajectoryEstimate,
    cfg: &EstimatorConfig,
) -> Result<TrajectoryEstimate> {
    cfg.validate()?;
    let basis = init.basis;
    let p = basis.len();
    let n = series.len();
    if init.coeffs_x.len() != p || init.coeffs_y.len() != p {
        return Err(Error::Shape {
            what: "initial coefficients",
            expected: p,
            got: init.coeffs_x.len().min(init.coeffs_y.len()),
        });
    }
    let (t0, tf) = basis.window();
    let (s0, s1) = series.time_span();
    if s0 < t0 || s1 > tf {
        return Err(Error::Domain {
            t: if s0 < t0 { s0 } else { s1 },
            t0,
            tf,
        });
    }
    let table = basis_table(&basis, series);
    let w = weight(series);

    let objective_of = |theta: &[f64]| -> f64 {
        angular_residuals(series, &basis, &theta[..p], &theta[p..])
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            * w
    };

    let mut theta = init.params();
    let (r_min, t_min) = min_predicted_range(series, &table, &theta, p);
    if !(r_min > MIN_PREDICTED_RANGE) {
        return Err(Error::DegenerateGeometry { t: t_min });
    }
    let initial_objective = objective_of(&theta);
    let mut objective = initial_objective;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.refine_max_iters {
        let jac_rows = angular_jacobian(series, &basis, &theta[..p], &theta[p..])?;
        let jac = DMatrix::from_fn(n, 2 * p, |i, j| jac_rows[i][j]);
        let resid = DVector::from_vec(angular_residuals(series, &basis, &theta[..p], &theta[p..]));
        let step = lsq::solve(&jac, &resid, f64::INFINITY)?.solution;

        let predicted_change = (&jac * &step).amax();
        if !(predicted_change >= cfg.refine_tol) {
            converged = true;
            break;
        }

        iterations += 1;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = theta
                .iter()
                .zip(step.iter())
                .map(|(t, d)| t + scale * d)
                .collect();
            let (r_min, _) = min_predicted_range(series, &table, &trial, p);
            if r_min > MIN_PREDICTED_RANGE {
                let trial_objective = objective_of(&trial);
                if trial_objective < objective {
                    theta = trial;
                    objective = trial_objective;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !accepted {
            // No descent along the Gauss-Newton direction: stationary to
            // working precision.
            converged = true;
            break;
        }
    }

    let coeffs_x = theta[..p].to_vec();
    let coeffs_y = theta[p..].to_vec();

    // Covariance from the angular Jacobian at the final iterate, with the
    // noise level estimated from the residuals.
    let rows = angular_jacobian(series, &basis, &coeffs_x, &coeffs_y)?;
    let jac = DMatrix::from_fn(n, 2 * p, |i, j| rows[i][j]);
    let angular = angular_residuals(series, &basis, &coeffs_x, &coeffs_y);
    let dof = n.saturating_sub(2 * p);
    let s2 = if dof > 0 {
        angular.iter().map(|v| v * v).sum::<f64>() / dof as f64
    } else {
        0.0
    };
    let covariance = match lsq::solve(&jac, &DVector::zeros(n), f64::INFINITY) {
        Ok(ls) => ls
            .unscaled_covariance
            .transpose()
            .iter()
            .map(|v| v * s2)
            .collect(),
        Err(_) => init.covariance().to_vec(),
    };

    let diagnostics = Diagnostics {
        condition_number: init.diagnostics.condition_number,
        residual_rms: residual_rms(series, &basis, &coeffs_x, &coeffs_y),
        angular_residual_rms: rms(&angular),
        per_coordinate_stderr: rms_stderr(&covariance, &table),
        refinement: Some(RefinementInfo {
            iterations,
            converged,
            initial_objective,
            final_objective: objective,
        }),
    };
    Ok(TrajectoryEstimate::new(
        init.method,
        basis,
        coeffs_x,
        coeffs_y,
        covariance,
        diagnostics,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::WorldPoint;
    use crate::polybasis::BasisKind;
    use crate::sensing::{true_bearing, BearingObservation};
    use approx::assert_relative_eq;

    fn series_from_truth(sigma: f64, noise: impl Fn(usize) -> f64) -> ObservationSeries {
        // target x = 1000 + 3t + 0.01 t^2, y = 5000 - 2t; observer dogleg
        let obs = (0..25)
            .map(|i| {
                let t = 10.0 * i as f64;
                let target = WorldPoint::new(1000.0 + 3.0 * t + 0.01 * t * t, 5000.0 - 2.0 * t);
                let observer = if t <= 120.0 {
                    WorldPoint::new(0.0, 5.0 * t)
                } else {
                    WorldPoint::new(5.0 * (t - 120.0), 600.0)
                };
                let beta = true_bearing(observer, target).unwrap() + noise(i);
                BearingObservation::new(t, observer, beta, sigma).unwrap()
            })
            .collect();
        ObservationSeries::new(obs).unwrap()
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let series = series_from_truth(0.01, |i| 0.01 * ((i * 7919) % 13) as f64 / 13.0 - 0.005);
        let basis = PolyBasis::new(BasisKind::Legendre, 2, 0.0, 240.0).unwrap();
        let theta = [1800.0, 700.0, 110.0, 4750.0, -240.0, 3.0];
        let jac = angular_jacobian(&series, &basis, &theta[..3], &theta[3..]).unwrap();
        let predicted = |th: &[f64]| -> Vec<f64> {
            let table = basis_table(&basis, &series);
            series
                .observations()
                .iter()
                .zip(&table)
                .map(|(o, phi)| {
                    (dot(&th[..3], phi) - o.observer.x).atan2(dot(&th[3..], phi) - o.observer.y)
                })
                .collect()
        };
        for j in 0..6 {
            let h = 1e-6 * theta[j].abs().max(1.0);
            let mut hi = theta;
            let mut lo = theta;
            hi[j] += h;
            lo[j] -= h;
            let (b_hi, b_lo) = (predicted(&hi), predicted(&lo));
            for i in 0..series.len() {
                let fd = (b_hi[i] - b_lo[i]) / (2.0 * h);
                assert_relative_eq!(jac[i][j], fd, max_relative = 1e-5, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn noiseless_input_is_a_fixed_point() {
        let series = series_from_truth(0.0, |_| 0.0);
        let cfg = EstimatorConfig::default();
        let init = super::super::solve_pseudolinear(&series, &cfg).unwrap();
        let refined = refine_gauss_newton(&series, &init, &cfg).unwrap();
        for (a, b) in refined.params().iter().zip(init.params()) {
            assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()), "{a} vs {b}");
        }
        let info = refined.diagnostics.refinement.unwrap();
        assert!(info.converged);
        assert!(info.final_objective <= info.initial_objective);
    }

    #[test]
    fn refinement_decreases_objective() {
        let sigma = 1.0_f64.to_radians();
        let series = series_from_truth(sigma, |i| {
            sigma * (((i * 2654435761) % 1000) as f64 / 500.0 - 1.0)
        });
        let cfg = EstimatorConfig::default();
        let init = super::super::solve_pseudolinear(&series, &cfg).unwrap();
        let refined = refine_gauss_newton(&series, &init, &cfg).unwrap();
        let before = angular_objective(&series, &init.basis, &init.coeffs_x, &init.coeffs_y);
        let after = angular_objective(
            &series,
            &refined.basis,
            &refined.coeffs_x,
            &refined.coeffs_y,
        );
        assert!(after <= before);
        assert!(refined.diagnostics.angular_residual_rms <= init.diagnostics.angular_residual_rms);
    }

    #[test]
    fn degenerate_start_is_an_error() {
        let series = series_from_truth(0.0, |_| 0.0);
        let cfg = EstimatorConfig::default();
        let mut init = super::super::solve_pseudolinear(&series, &cfg).unwrap();
        // place the predicted target on the observer's starting point
        let phi0 = init
            .basis
            .values_at(0.0, crate::polybasis::Extrapolation::Reject)
            .unwrap();
        init.coeffs_x = vec![0.0; 3];
        init.coeffs_y = vec![0.0; 3];
        assert_eq!(phi0[0], 1.0);
        assert!(matches!(
            refine_gauss_newton(&series, &init, &cfg),
            Err(Error::DegenerateGeometry { t }) if t == 0.0
        ));
    }
}
