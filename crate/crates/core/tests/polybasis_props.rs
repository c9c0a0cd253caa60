use proptest::prelude::*;
use tma_core::polybasis::{eval_basis, eval_basis_deriv, BasisKind, Extrapolation, PolyBasis};

fn kind_strategy() -> impl Strategy<Value = BasisKind> {
    prop_oneof![
        Just(BasisKind::Chebyshev1),
        Just(BasisKind::Chebyshev2),
        Just(BasisKind::Legendre),
    ]
}

proptest! {
    #[test]
    fn derivative_matches_central_difference(kind in kind_strategy(), n in 0usize..=8, tau in -0.99f64..0.99) {
        let h = 1e-6;
        let fd = (eval_basis(kind, n, tau + h) - eval_basis(kind, n, tau - h)) / (2.0 * h);
        let exact = eval_basis_deriv(kind, n, tau);
        prop_assert!((exact - fd).abs() <= 1e-6 * exact.abs().max(1.0), "{kind} n={n} tau={tau}: {exact} vs {fd}");
    }

    #[test]
    fn degree3_series_matches_monomials(
        kind in kind_strategy(),
        c in prop::array::uniform4(-10.0f64..10.0),
        frac in 0.0f64..=1.0,
    ) {
        let (t0, tf) = (-40.0, 260.0);
        let basis = PolyBasis::new(kind, 3, t0, tf).unwrap();
        let t = t0 + frac * (tf - t0);
        let s = 2.0 * (t - t0) / (tf - t0) - 1.0;
        let (s2, s3) = (s * s, s * s * s);
        let phi = match kind {
            BasisKind::Chebyshev1 => [1.0, s, 2.0 * s2 - 1.0, 4.0 * s3 - 3.0 * s],
            BasisKind::Chebyshev2 => [1.0, 2.0 * s, 4.0 * s2 - 1.0, 8.0 * s3 - 4.0 * s],
            BasisKind::Legendre => [1.0, s, 1.5 * s2 - 0.5, 2.5 * s3 - 1.5 * s],
        };
        let expected: f64 = c.iter().zip(phi).map(|(a, b)| a * b).sum();
        let got = basis.eval_series(&c, t, Extrapolation::Reject).unwrap();
        prop_assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1.0), "{got} vs {expected}");
    }

    #[test]
    fn series_derivative_matches_difference_in_time(
        kind in kind_strategy(),
        c in prop::collection::vec(-5.0f64..5.0, 1..=7),
        frac in 0.05f64..0.95,
    ) {
        let (t0, tf) = (100.0, 1900.0);
        let basis = PolyBasis::new(kind, c.len() - 1, t0, tf).unwrap();
        let t = t0 + frac * (tf - t0);
        let h = 1e-3;
        let f = |t| basis.eval_series(&c, t, Extrapolation::Reject).unwrap();
        let fd = (f(t + h) - f(t - h)) / (2.0 * h);
        let exact = basis.eval_series_deriv(&c, t, Extrapolation::Reject).unwrap();
        prop_assert!((exact - fd).abs() <= 1e-6 * exact.abs().max(1e-3));
    }
}

/// Composite Simpson rule with `panels` panels (two subintervals each) on
/// [-1, 1].
fn simpson(f: impl Fn(f64) -> f64, panels: usize) -> f64 {
    let intervals = 2 * panels;
    let h = 2.0 / intervals as f64;
    let mut acc = f(-1.0) + f(1.0);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(-1.0 + i as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn legendre_orthogonality_by_quadrature() {
    for m in 0..=5 {
        for n in 0..=5 {
            let integral = simpson(
                |x| eval_basis(BasisKind::Legendre, m, x) * eval_basis(BasisKind::Legendre, n, x),
                256,
            );
            if m == n {
                let norm = 2.0 / (2.0 * n as f64 + 1.0);
                assert!(
                    (integral - norm).abs() < 1e-6,
                    "P{n} norm {integral} vs {norm}"
                );
            } else {
                assert!(integral.abs() < 1e-6, "<P{m}, P{n}> = {integral}");
            }
        }
    }
}

#[test]
fn chebyshev_cosine_identity() {
    for n in 0..=12 {
        for i in 0..=50 {
            let theta = std::f64::consts::PI * i as f64 / 50.0;
            let x = theta.cos();
            let t = eval_basis(BasisKind::Chebyshev1, n, x);
            assert!((t - (n as f64 * theta).cos()).abs() < 1e-12, "T{n}({x})");
            if theta.sin().abs() > 1e-3 {
                let u = eval_basis(BasisKind::Chebyshev2, n, x);
                let expected = ((n as f64 + 1.0) * theta).sin() / theta.sin();
                assert!(
                    (u - expected).abs() < 1e-9 * expected.abs().max(1.0),
                    "U{n}({x})"
                );
            }
        }
    }
}
