//! Small statistics helpers shared by the estimators, the verification
//! suites, and the benchmark drivers.

/// Arithmetic mean; zero on empty input.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (Bessel-corrected); zero below two samples.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    var.sqrt()
}

/// Standard error of the mean.
pub fn std_error(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    sample_std(values) / (values.len() as f64).sqrt()
}

/// Absolute slack in [`z_score`] under which a deviation counts as zero.
/// Summing thousands of f64 samples leaves rounding residue around 1e-16;
/// without the slack, a numerically constant sample (SE also at rounding
/// scale) would turn that residue into an arbitrary large z.
pub const Z_ABS_TOLERANCE: f64 = 1e-9;

/// `(mean - reference) / SE`, with deviations below [`Z_ABS_TOLERANCE`]
/// reported as 0 and genuinely nonzero deviations over a zero SE as +-inf.
pub fn z_score(values: &[f64], reference: f64) -> f64 {
    let m = mean(values);
    let se = std_error(values);
    let diff = m - reference;
    if diff.abs() <= Z_ABS_TOLERANCE {
        0.0
    } else if se == 0.0 {
        f64::INFINITY * diff.signum()
    } else {
        diff / se
    }
}

/// Least-squares slope of `ln(y)` against `ln(x)`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "slope fit needs at least two points");
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = mean(&logs.iter().map(|p| p.0).collect::<Vec<_>>());
    let my = mean(&logs.iter().map(|p| p.1).collect::<Vec<_>>());
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Median of a sample; zero on empty input.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let mid = sorted.len() / 2;
    if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&v), 2.5);
        assert!((sample_std(&v) - 1.2909944487358056).abs() < 1e-12);
        assert_eq!(median(&v), 2.5);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
    }

    #[test]
    fn z_score_degenerate_cases() {
        assert_eq!(z_score(&[2.0, 2.0], 2.0), 0.0);
        assert_eq!(z_score(&[2.0, 2.0], 1.0), f64::INFINITY);
    }

    #[test]
    fn slope_recovers_exact_power_laws() {
        let quadratic: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0]
            .iter()
            .map(|&x| (x, 3.0 * x * x))
            .collect();
        assert!((log_log_slope(&quadratic) - 2.0).abs() < 1e-12);
        let linear: Vec<(f64, f64)> = [2.0, 4.0, 8.0].iter().map(|&x| (x, 5.0 * x)).collect();
        assert!((log_log_slope(&linear) - 1.0).abs() < 1e-12);
    }
}
