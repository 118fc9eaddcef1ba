//! Goodness-of-fit tests used by the verification suite.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Upper tail of the Kolmogorov distribution, `Q(λ) = 2 Σ_{k≥1} (-1)^{k-1} e^{-2k²λ²}`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let en = ((n * m) as f64 / (n + m) as f64).sqrt();
    (d, kolmogorov_q((en + 0.12 + 0.11 / en) * d))
}

/// Pearson chi-square statistic and its upper-tail p-value with
/// `observed.len() - 1` degrees of freedom.
pub fn chi_square(observed: &[f64], expected: &[f64]) -> (f64, f64) {
    let x: f64 = observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = (observed.len() - 1) as f64;
    let p = ChiSquared::new(dof).map(|d| d.sf(x)).unwrap_or(f64::NAN);
    (x, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_reference_values() {
        // Q(1.36) ≈ 0.049, Q(1.63) ≈ 0.0098.
        assert!((kolmogorov_q(1.36) - 0.0494).abs() < 5e-4);
        assert!((kolmogorov_q(1.63) - 0.0098).abs() < 2e-4);
        assert_eq!(kolmogorov_q(0.0), 1.0);
    }

    #[test]
    fn identical_samples_do_not_reject() {
        let a: Vec<f64> = (0..500).map(|i| i as f64).collect();
        let (d, p) = ks_two_sample(&a, &a);
        assert_eq!(d, 0.0);
        assert_eq!(p, 1.0);
        let b: Vec<f64> = a.iter().map(|x| x + 250.0).collect();
        assert!(ks_two_sample(&a, &b).1 < 1e-10);
    }

    #[test]
    fn chi_square_reference() {
        let (x, p) = chi_square(&[10.0, 10.0], &[10.0, 10.0]);
        assert_eq!(x, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
        // χ² = 3.841 with one degree of freedom is the 5% point.
        let (_, p) = chi_square(&[14.382_6, 5.617_4], &[10.0, 10.0]);
        assert!((p - 0.05).abs() < 1e-3);
    }
}
