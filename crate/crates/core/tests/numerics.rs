use alphadpp_core::numerics::{airy, integrate_1d, GaussLegendre, QuadratureSpec};
use proptest::prelude::*;

/// `Ai''(x)` by a fourth-order central difference of `Ai'`.
fn ai_second_derivative(x: f64, h: f64) -> f64 {
    let d = |t: f64| airy(t).unwrap().ai_prime;
    (-d(x + 2.0 * h) + 8.0 * d(x + h) - 8.0 * d(x - h) + d(x - 2.0 * h)) / (12.0 * h)
}

#[test]
fn airy_solves_its_equation() {
    for i in 0..=300 {
        let x = -10.0 + 15.0 * i as f64 / 300.0;
        let residual = ai_second_derivative(x, 1e-3) - x * airy(x).unwrap().ai;
        assert!(residual.abs() <= 1e-8, "x = {x}: residual {residual:e}");
    }
}

#[test]
fn airy_origin_matches_series_constants() {
    // Ai(0) = 3^{-2/3}/Γ(2/3), Ai'(0) = -3^{-1/3}/Γ(1/3).
    let v = airy(0.0).unwrap();
    assert!((v.ai - 0.355_028_053_887_817_2).abs() < 1e-15);
    assert!((v.ai_prime + 0.258_819_403_792_806_8).abs() < 1e-15);
}

#[test]
fn airy_wronskian_with_derivative_identity() {
    // d/dx (Ai'² - x Ai²) = -Ai², checked by central differences.
    let h = 1e-4;
    let f = |x: f64| {
        let v = airy(x).unwrap();
        v.ai_prime * v.ai_prime - x * v.ai * v.ai
    };
    for x in [-8.0, -3.3, 0.0, 2.0, 6.0] {
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        let ai = airy(x).unwrap().ai;
        assert!((fd + ai * ai).abs() < 1e-8, "x = {x}");
    }
}

proptest! {
    #[test]
    fn gauss_legendre_is_exact_for_low_degree(coeffs in prop::collection::vec(-1.0f64..1.0, 1..=20), a in -3.0f64..0.0, b in 0.1f64..3.0) {
        let rule = GaussLegendre::new(10);
        let poly = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let exact: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0))
            .sum();
        let approx = rule.integrate(poly, a, b);
        prop_assert!((approx - exact).abs() < 1e-10 * exact.abs().max(1.0) * 3f64.powi(coeffs.len() as i32));
    }

    #[test]
    fn adaptive_integral_is_additive(a in -5.0f64..0.0, m in 0.0f64..1.0, b in 1.0f64..5.0, w in 0.5f64..20.0) {
        let q = QuadratureSpec::default();
        let f = |x: f64| (w * x).sin() * (-0.1 * x * x).exp();
        let whole = integrate_1d(f, a, b, &q).unwrap();
        let split = integrate_1d(f, a, m, &q).unwrap() + integrate_1d(f, m, b, &q).unwrap();
        prop_assert!((whole - split).abs() < 1e-9);
    }
}
