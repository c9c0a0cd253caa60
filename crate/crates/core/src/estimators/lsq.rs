//! Dense linear least squares via column-pivoted Householder QR.

use nalgebra::{DMatrix, DVector, SVD};

use crate::error::{Error, Result};

const SVD_MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone)]
pub(crate) struct LeastSquares {
    pub solution: DVector<f64>,
    /// `(A^T A)^-1`.
    pub unscaled_covariance: DMatrix<f64>,
    pub residual_sum_squares: f64,
    pub condition_number: f64,
}

/// 2-norm condition number `s_max / s_min`; infinite when rank deficient.
pub(crate) fn condition_number(a: &DMatrix<f64>) -> f64 {
    if a.iter().any(|v| !v.is_finite()) {
        return f64::INFINITY;
    }
    let Some(svd) = SVD::try_new(a.clone(), false, false, f64::EPSILON, SVD_MAX_ITERATIONS) else {
        return f64::INFINITY;
    };
    let s = svd.singular_values;
    let max = s.max();
    let min = s.min();
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Minimizes `|A x - b|` for tall `A` (rows >= cols), rejecting systems whose
/// condition number exceeds `cond_limit`.
pub(crate) fn solve(a: &DMatrix<f64>, b: &DVector<f64>, cond_limit: f64) -> Result<LeastSquares> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(Error::Shape {
            what: "right-hand side",
            expected: m,
            got: b.len(),
        });
    }
    if m < n {
        return Err(Error::InsufficientData { needed: n, got: m });
    }
    if b.iter().any(|v| !v.is_finite()) || a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSeries(
            "non-finite value in the least-squares system".into(),
        ));
    }
    let condition_number = condition_number(a);
    if !(condition_number <= cond_limit) {
        return Err(Error::Unobservable { condition_number });
    }

    let qr = a.clone().col_piv_qr();
    let mut qtb = b.clone();
    qr.q_tr_mul(&mut qtb);
    let residual_sum_squares = qtb.rows(n, m - n).norm_squared();
    let (_, r, perm) = qr.unpack();
    let r = r.rows(0, n).into_owned();

    let mut x = qtb.rows(0, n).into_owned();
    if !r.solve_upper_triangular_mut(&mut x) {
        return Err(Error::Unobservable {
            condition_number: f64::INFINITY,
        });
    }
    perm.inv_permute_rows(&mut x);

    // (A^T A)^-1 = P R^-1 R^-T P^T
    let mut r_inv = DMatrix::<f64>::identity(n, n);
    if !r.solve_upper_triangular_mut(&mut r_inv) {
        return Err(Error::Unobservable {
            condition_number: f64::INFINITY,
        });
    }
    let mut cov = &r_inv * r_inv.transpose();
    perm.inv_permute_rows(&mut cov);
    perm.inv_permute_columns(&mut cov);

    Ok(LeastSquares {
        solution: x,
        unscaled_covariance: cov,
        residual_sum_squares,
        condition_number,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample_system() -> (DMatrix<f64>, DVector<f64>) {
        // columns deliberately out of order of magnitude to force pivoting
        let a = DMatrix::from_row_slice(
            6,
            3,
            &[
                0.1, 5.0, -1.0, //
                0.2, -3.0, 2.0, //
                -0.3, 1.0, 0.5, //
                0.4, 2.0, 1.5, //
                0.05, -4.0, -2.5, //
                -0.15, 0.5, 3.0,
            ],
        );
        let b = DVector::from_row_slice(&[1.0, -2.0, 0.5, 3.0, -1.0, 2.0]);
        (a, b)
    }

    #[test]
    fn matches_normal_equations() {
        let (a, b) = sample_system();
        let ls = solve(&a, &b, 1e12).unwrap();
        let ata = a.transpose() * &a;
        let ata_inv = ata.clone().try_inverse().unwrap();
        let x_ne = &ata_inv * a.transpose() * &b;
        for i in 0..3 {
            assert_relative_eq!(ls.solution[i], x_ne[i], max_relative = 1e-10);
            for j in 0..3 {
                assert_relative_eq!(
                    ls.unscaled_covariance[(i, j)],
                    ata_inv[(i, j)],
                    max_relative = 1e-9
                );
            }
        }
        let resid = &a * &ls.solution - &b;
        assert_relative_eq!(
            ls.residual_sum_squares,
            resid.norm_squared(),
            max_relative = 1e-10
        );
        assert!(ls.condition_number >= 1.0);
    }

    #[test]
    fn rejects_rank_deficient() {
        let a = DMatrix::from_row_slice(4, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0, -1.0, -2.0]);
        let b = DVector::from_row_slice(&[1.0, 2.0, 3.0, 4.0]);
        match solve(&a, &b, 1e12) {
            Err(Error::Unobservable { condition_number }) => assert!(condition_number > 1e12),
            other => panic!("expected unobservable, got {other:?}"),
        }
    }

    #[test]
    fn identity_condition() {
        let a = DMatrix::<f64>::identity(4, 4);
        assert_relative_eq!(condition_number(&a), 1.0, epsilon = 1e-14);
    }
}
