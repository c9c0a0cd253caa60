//! Orthogonal polynomial families used to parametrize trajectory coordinates.
//!
//! Every family lives on `[-1, 1]`, so observation times are mapped affinely
//! from the fitted window `[t0, tf]` onto that interval before evaluation.
//! Values and derivatives come from forward three-term recurrences, one point
//! at a time. For the degrees allowed here (at most [`MAX_DEGREE`]) forward
//! recurrence is as accurate as Clenshaw summation and keeps the design-row
//! construction simple, since each row needs every basis value anyway.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest polynomial degree accepted by [`PolyBasis`].
pub const MAX_DEGREE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// Chebyshev polynomials of the first kind, `T_n`.
    Chebyshev1,
    /// Chebyshev polynomials of the second kind, `U_n`.
    Chebyshev2,
    /// Legendre polynomials, `P_n`.
    Legendre,
}

impl BasisKind {
    pub const ALL: [BasisKind; 3] = [
        BasisKind::Chebyshev1,
        BasisKind::Chebyshev2,
        BasisKind::Legendre,
    ];

    /// Short name used on the command line and in output files.
    pub fn short_name(self) -> &'static str {
        match self {
            BasisKind::Chebyshev1 => "cheb1",
            BasisKind::Chebyshev2 => "cheb2",
            BasisKind::Legendre => "legendre",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cheb1" | "chebyshev1" | "t" => Ok(BasisKind::Chebyshev1),
            "cheb2" | "chebyshev2" | "u" => Ok(BasisKind::Chebyshev2),
            "legendre" | "p" => Ok(BasisKind::Legendre),
            other => Err(Error::invalid(
                "basis",
                format!("unknown basis '{other}' (expected cheb1, cheb2 or legendre)"),
            )),
        }
    }
}

/// Whether series evaluation may leave the fitted window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Extrapolation {
    #[default]
    Reject,
    Allow,
}

/// A polynomial family of fixed degree over the time window `[t0, tf]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyBasis {
    kind: BasisKind,
    degree: usize,
    t0: f64,
    tf: f64,
}

impl PolyBasis {
    pub fn new(kind: BasisKind, degree: usize, t0: f64, tf: f64) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::invalid(
                "degree",
                format!("{degree} exceeds the maximum of {MAX_DEGREE}"),
            ));
        }
        if !t0.is_finite() || !tf.is_finite() || tf <= t0 {
            return Err(Error::invalid(
                "time window",
                format!("need finite t0 < tf, got [{t0}, {tf}]"),
            ));
        }
        Ok(Self {
            kind,
            degree,
            t0,
            tf,
        })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of coefficients per coordinate.
    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t0, self.tf)
    }

    /// `d tau / d t`.
    pub fn time_scale(&self) -> f64 {
        2.0 / (self.tf - self.t0)
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t0 && t <= self.tf
    }

    /// Maps `t` in `[t0, tf]` onto `[-1, 1]`.
    pub fn map_time(&self, t: f64) -> Result<f64> {
        if !self.contains(t) {
            return Err(Error::Domain {
                t,
                t0: self.t0,
                tf: self.tf,
            });
        }
        Ok(self.map_time_unchecked(t))
    }

    /// The affine map without the window check.
    pub fn map_time_unchecked(&self, t: f64) -> f64 {
        if t == self.tf {
            return 1.0;
        }
        2.0 * (t - self.t0) / (self.tf - self.t0) - 1.0
    }

    /// Inverse of [`PolyBasis::map_time`].
    pub fn unmap_time(&self, tau: f64) -> f64 {
        self.t0 + 0.5 * (tau + 1.0) * (self.tf - self.t0)
    }

    fn tau_for(&self, t: f64, extrapolation: Extrapolation) -> Result<f64> {
        match extrapolation {
            Extrapolation::Reject => self.map_time(t),
            Extrapolation::Allow if t.is_finite() => Ok(self.map_time_unchecked(t)),
            Extrapolation::Allow => Err(Error::Domain {
                t,
                t0: self.t0,
                tf: self.tf,
            }),
        }
    }

    fn check_coeffs(&self, coeffs: &[f64]) -> Result<()> {
        if coeffs.len() != self.len() {
            return Err(Error::Shape {
                what: "coefficients",
                expected: self.len(),
                got: coeffs.len(),
            });
        }
        Ok(())
    }

    /// Basis values `phi_0(tau) .. phi_d(tau)` at time `t`.
    pub fn values_at(&self, t: f64, extrapolation: Extrapolation) -> Result<Vec<f64>> {
        let tau = self.tau_for(t, extrapolation)?;
        let mut out = vec![0.0; self.len()];
        fill_values(self.kind, tau, &mut out);
        Ok(out)
    }

    /// `sum_k c_k phi_k(tau(t))`.
    pub fn eval_series(&self, coeffs: &[f64], t: f64, extrapolation: Extrapolation) -> Result<f64> {
        self.check_coeffs(coeffs)?;
        let phi = self.values_at(t, extrapolation)?;
        Ok(dot(coeffs, &phi))
    }

    /// Time derivative of the series, in coefficient units per second.
    pub fn eval_series_deriv(
        &self,
        coeffs: &[f64],
        t: f64,
        extrapolation: Extrapolation,
    ) -> Result<f64> {
        self.check_coeffs(coeffs)?;
        let tau = self.tau_for(t, extrapolation)?;
        let mut phi = vec![0.0; self.len()];
        let mut dphi = vec![0.0; self.len()];
        fill_values_and_derivs(self.kind, tau, &mut phi, &mut dphi);
        Ok(dot(coeffs, &dphi) * self.time_scale())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Value of the `n`-th polynomial of `kind` at `tau`.
///
/// The recurrences are polynomial identities, so any finite `tau` is
/// accepted; orthogonality only holds on `[-1, 1]`.
pub fn eval_basis(kind: BasisKind, n: usize, tau: f64) -> f64 {
    let mut values = vec![0.0; n + 1];
    fill_values(kind, tau, &mut values);
    values[n]
}

/// Exact derivative `d/dtau` of the `n`-th polynomial of `kind` at `tau`.
pub fn eval_basis_deriv(kind: BasisKind, n: usize, tau: f64) -> f64 {
    let mut values = vec![0.0; n + 1];
    let mut derivs = vec![0.0; n + 1];
    fill_values_and_derivs(kind, tau, &mut values, &mut derivs);
    derivs[n]
}

/// Fills `out[k] = phi_k(tau)` for `k < out.len()`.
pub fn fill_values(kind: BasisKind, tau: f64, out: &mut [f64]) {
    let len = out.len();
    if len == 0 {
        return;
    }
    out[0] = 1.0;
    if len == 1 {
        return;
    }
    out[1] = match kind {
        BasisKind::Chebyshev1 | BasisKind::Legendre => tau,
        BasisKind::Chebyshev2 => 2.0 * tau,
    };
    for n in 1..len - 1 {
        out[n + 1] = next_value(kind, n, tau, out[n], out[n - 1]);
    }
}

/// Fills values and their `tau`-derivatives in one pass.
///
/// The derivative recurrence is the term-by-term derivative of the value
/// recurrence.
pub fn fill_values_and_derivs(kind: BasisKind, tau: f64, values: &mut [f64], derivs: &mut [f64]) {
    debug_assert_eq!(values.len(), derivs.len());
    let len = values.len().min(derivs.len());
    if len == 0 {
        return;
    }
    values[0] = 1.0;
    derivs[0] = 0.0;
    if len == 1 {
        return;
    }
    let (v1, d1) = match kind {
        BasisKind::Chebyshev1 | BasisKind::Legendre => (tau, 1.0),
        BasisKind::Chebyshev2 => (2.0 * tau, 2.0),
    };
    values[1] = v1;
    derivs[1] = d1;
    for n in 1..len - 1 {
        values[n + 1] = next_value(kind, n, tau, values[n], values[n - 1]);
        derivs[n + 1] = match kind {
            // f_{n+1}' = 2 f_n + 2 tau f_n' - f_{n-1}'
            BasisKind::Chebyshev1 | BasisKind::Chebyshev2 => {
                2.0 * values[n] + 2.0 * tau * derivs[n] - derivs[n - 1]
            }
            // (n+1) P_{n+1}' = (2n+1) (P_n + tau P_n') - n P_{n-1}'
            BasisKind::Legendre => {
                let nf = n as f64;
                ((2.0 * nf + 1.0) * (values[n] + tau * derivs[n]) - nf * derivs[n - 1]) / (nf + 1.0)
            }
        };
    }
}

#[inline]
fn next_value(kind: BasisKind, n: usize, tau: f64, f_n: f64, f_prev: f64) -> f64 {
    match kind {
        BasisKind::Chebyshev1 | BasisKind::Chebyshev2 => 2.0 * tau * f_n - f_prev,
        BasisKind::Legendre => {
            let nf = n as f64;
            ((2.0 * nf + 1.0) * tau * f_n - nf * f_prev) / (nf + 1.0)
        }
    }
}
