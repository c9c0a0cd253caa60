//! Trajectory reconstruction from bearings only.
//!
//! Both methods model the target coordinates as polynomial series in time,
//! `x(t) = sum a_k phi_k(tau)` and `y(t) = sum b_k phi_k(tau)`, and fit the
//! coefficients to the bearing constraints by least squares:
//!
//! * **N-Polynomials** uses an orthogonal family of configurable degree, so
//!   nonlinear target motion is representable.
//! * **N-Bearings** is the classical uniform-rectilinear fit, i.e. the same
//!   machinery fixed at degree one.
//!
//! The primary solve is pseudo-linear and singularity free; an optional
//! Gauss-Newton pass then minimizes the true angular residuals.

mod lsq;
mod pseudolinear;
mod refine;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{WorldPoint, WorldVector};
use crate::polybasis::{fill_values, BasisKind, Extrapolation, PolyBasis, MAX_DEGREE};
use crate::sensing::ObservationSeries;

pub use pseudolinear::{design_row, estimate_n_bearings, solve_pseudolinear};
pub use refine::{angular_jacobian, angular_objective, angular_residuals, refine_gauss_newton};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    NBearings,
    NPolynomials,
}

impl MethodKind {
    pub fn short_name(self) -> &'static str {
        match self {
            MethodKind::NBearings => "nbearings",
            MethodKind::NPolynomials => "npoly",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MethodKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nbearings" | "n-bearings" | "n_bearings" => Ok(MethodKind::NBearings),
            "npoly" | "npolynomials" | "n-polynomials" | "n_polynomials" => {
                Ok(MethodKind::NPolynomials)
            }
            other => Err(Error::invalid(
                "method",
                format!("unknown method '{other}' (expected nbearings or npoly)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub basis: BasisKind,
    pub degree: usize,
    /// Run Gauss-Newton refinement of the angular residuals.
    pub refine: bool,
    pub refine_max_iters: usize,
    /// Stop when the step changes no predicted bearing by more than this
    /// many radians.
    pub refine_tol: f64,
    /// Reject designs whose condition number exceeds this.
    pub cond_limit: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            basis: BasisKind::Legendre,
            degree: 2,
            refine: false,
            refine_max_iters: 20,
            refine_tol: 1e-10,
            cond_limit: 1e12,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.degree > MAX_DEGREE {
            return Err(Error::invalid(
                "degree",
                format!("{} exceeds the maximum of {MAX_DEGREE}", self.degree),
            ));
        }
        if self.refine_max_iters < 1 {
            return Err(Error::invalid("refine_max_iters", "must be at least 1"));
        }
        if !(self.refine_tol > 0.0) || !self.refine_tol.is_finite() {
            return Err(Error::invalid("refine_tol", "must be positive"));
        }
        if !(self.cond_limit >= 1.0) {
            return Err(Error::invalid("cond_limit", "must be at least 1"));
        }
        Ok(())
    }
}

/// A named estimator setup, as compared in Monte Carlo runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub label: String,
    pub kind: MethodKind,
    pub config: EstimatorConfig,
}

impl MethodSpec {
    pub fn n_bearings() -> Self {
        Self {
            label: "nbearings".into(),
            kind: MethodKind::NBearings,
            config: EstimatorConfig {
                basis: BasisKind::Chebyshev1,
                degree: 1,
                ..EstimatorConfig::default()
            },
        }
    }

    pub fn n_polynomials(basis: BasisKind, degree: usize) -> Self {
        Self {
            label: format!("npoly-{basis}-d{degree}"),
            kind: MethodKind::NPolynomials,
            config: EstimatorConfig {
                basis,
                degree,
                ..EstimatorConfig::default()
            },
        }
    }

    /// Degree actually fitted.
    pub fn effective_degree(&self) -> usize {
        match self.kind {
            MethodKind::NBearings => 1,
            MethodKind::NPolynomials => self.config.degree,
        }
    }

    /// Runs the method, including refinement when configured.
    pub fn estimate(&self, series: &ObservationSeries) -> Result<TrajectoryEstimate> {
        let initial = match self.kind {
            MethodKind::NBearings => estimate_n_bearings(series, &self.config)?,
            MethodKind::NPolynomials => solve_pseudolinear(series, &self.config)?,
        };
        if self.config.refine {
            refine_gauss_newton(series, &initial, &self.config)
        } else {
            Ok(initial)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementInfo {
    pub iterations: usize,
    pub converged: bool,
    /// Angular objective `sum wrap(beta - beta_hat)^2 / sigma^2` before and
    /// after refinement.
    pub initial_objective: f64,
    pub final_objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// 2-norm condition number of the pseudo-linear design matrix.
    pub condition_number: f64,
    /// RMS of the pseudo-linear residuals (distance-to-bearing-line), meters.
    pub residual_rms: f64,
    /// RMS of the angular residuals, radians.
    pub angular_residual_rms: f64,
    /// RMS over observation times of the position standard error of x and y.
    pub per_coordinate_stderr: (f64, f64),
    pub refinement: Option<RefinementInfo>,
}

/// Fitted trajectory: one coefficient vector per coordinate over a shared
/// basis, with the joint coefficient covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEstimate {
    pub method: MethodKind,
    pub basis: PolyBasis,
    pub coeffs_x: Vec<f64>,
    pub coeffs_y: Vec<f64>,
    pub diagnostics: Diagnostics,
    /// Row-major `2(d+1)` square covariance of `(a_0..a_d, b_0..b_d)`, m^2.
    covariance: Vec<f64>,
}

impl TrajectoryEstimate {
    pub(crate) fn new(
        method: MethodKind,
        basis: PolyBasis,
        coeffs_x: Vec<f64>,
        coeffs_y: Vec<f64>,
        covariance: Vec<f64>,
        diagnostics: Diagnostics,
    ) -> Self {
        debug_assert_eq!(coeffs_x.len(), basis.len());
        debug_assert_eq!(coeffs_y.len(), basis.len());
        debug_assert_eq!(covariance.len(), 4 * basis.len() * basis.len());
        Self {
            method,
            basis,
            coeffs_x,
            coeffs_y,
            diagnostics,
            covariance,
        }
    }

    /// An estimate with given coefficients, zero covariance and neutral
    /// diagnostics.
    pub fn from_coefficients(
        method: MethodKind,
        basis: PolyBasis,
        coeffs_x: Vec<f64>,
        coeffs_y: Vec<f64>,
    ) -> Result<Self> {
        for c in [&coeffs_x, &coeffs_y] {
            if c.len() != basis.len() {
                return Err(Error::Shape {
                    what: "coefficients",
                    expected: basis.len(),
                    got: c.len(),
                });
            }
        }
        let p = basis.len();
        let diagnostics = Diagnostics {
            condition_number: 1.0,
            residual_rms: 0.0,
            angular_residual_rms: 0.0,
            per_coordinate_stderr: (0.0, 0.0),
            refinement: None,
        };
        Ok(Self::new(
            method,
            basis,
            coeffs_x,
            coeffs_y,
            vec![0.0; 4 * p * p],
            diagnostics,
        ))
    }

    /// Concatenated parameter vector `(a, b)`.
    pub fn params(&self) -> Vec<f64> {
        self.coeffs_x
            .iter()
            .chain(&self.coeffs_y)
            .copied()
            .collect()
    }

    pub fn covariance(&self) -> &[f64] {
        &self.covariance
    }

    pub fn predict(&self, t: f64) -> Result<(WorldPoint, WorldVector)> {
        predict(self, t)
    }

    pub fn predict_with(
        &self,
        t: f64,
        extrapolation: Extrapolation,
    ) -> Result<(WorldPoint, WorldVector)> {
        let b = &self.basis;
        let x = b.eval_series(&self.coeffs_x, t, extrapolation)?;
        let y = b.eval_series(&self.coeffs_y, t, extrapolation)?;
        let vx = b.eval_series_deriv(&self.coeffs_x, t, extrapolation)?;
        let vy = b.eval_series_deriv(&self.coeffs_y, t, extrapolation)?;
        Ok((WorldPoint::new(x, y), WorldVector::new(vx, vy)))
    }

    /// Standard errors of the predicted x and y at `t`, meters.
    pub fn position_stderr(&self, t: f64) -> Result<(f64, f64)> {
        let phi = self.basis.values_at(t, Extrapolation::Reject)?;
        Ok(position_stderr_from(&self.covariance, &phi))
    }
}

pub(crate) fn position_stderr_from(covariance: &[f64], phi: &[f64]) -> (f64, f64) {
    let p = phi.len();
    let n = 2 * p;
    let quad = |offset: usize| {
        let mut acc = 0.0;
        for i in 0..p {
            for j in 0..p {
                acc += phi[i] * covariance[(offset + i) * n + offset + j] * phi[j];
            }
        }
        acc.max(0.0).sqrt()
    };
    (quad(0), quad(p))
}

/// Position and velocity of the fitted trajectory at `t`. Velocity is the
/// analytic derivative of the series.
pub fn predict(estimate: &TrajectoryEstimate, t: f64) -> Result<(WorldPoint, WorldVector)> {
    estimate.predict_with(t, Extrapolation::Reject)
}

pub(crate) fn basis_for(
    series: &ObservationSeries,
    kind: BasisKind,
    degree: usize,
) -> Result<PolyBasis> {
    let needed = (2 * (degree + 1)).max(2);
    if series.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: series.len(),
        });
    }
    let (t0, tf) = series.time_span();
    PolyBasis::new(kind, degree, t0, tf)
}

/// Basis values at each observation time.
pub(crate) fn basis_table(basis: &PolyBasis, series: &ObservationSeries) -> Vec<Vec<f64>> {
    series
        .observations()
        .iter()
        .map(|o| {
            let mut v = vec![0.0; basis.len()];
            fill_values(basis.kind(), basis.map_time_unchecked(o.t), &mut v);
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(EstimatorConfig::default().validate().is_ok());
        let bad = EstimatorConfig {
            degree: 13,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = EstimatorConfig {
            refine_max_iters: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = EstimatorConfig {
            refine_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn method_names() {
        assert_eq!(
            "npoly".parse::<MethodKind>().unwrap(),
            MethodKind::NPolynomials
        );
        assert_eq!(
            "NBearings".parse::<MethodKind>().unwrap(),
            MethodKind::NBearings
        );
        assert!("kalman".parse::<MethodKind>().is_err());
        assert_eq!(MethodSpec::n_bearings().effective_degree(), 1);
    }
}
