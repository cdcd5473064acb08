use serde::{Deserialize, Serialize};

/// Outcome of a single identity check.
///
/// `passed` is always `residual < tolerance`. Checks that demand a quantity
/// be *large* (e.g. a commutator that must not vanish) encode it as the
/// ratio `threshold / value` against a tolerance of 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    pub fn within(residual: f64, tolerance: f64) -> Self {
        // NaN residuals must fail
        let passed = residual < tolerance;
        Self {
            residual,
            tolerance,
            passed,
        }
    }

    /// Passes iff `value > threshold`.
    pub fn above(value: f64, threshold: f64) -> Self {
        let ratio = if value > 0.0 {
            threshold / value
        } else {
            f64::INFINITY
        };
        Self::within(ratio, 1.0)
    }

    /// Worst of several results: max residual, and passes only if all pass.
    /// Tolerance is taken from the first entry.
    pub fn combine(results: impl IntoIterator<Item = CheckResult>) -> Self {
        let mut iter = results.into_iter();
        let Some(first) = iter.next() else {
            return Self::within(0.0, f64::MIN_POSITIVE);
        };
        iter.fold(first, |acc, r| CheckResult {
            residual: acc.residual.max(r.residual),
            tolerance: acc.tolerance,
            passed: acc.passed && r.passed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn within_is_strict() {
        assert!(CheckResult::within(0.0, 1e-12).passed);
        assert!(!CheckResult::within(1e-12, 1e-12).passed);
        assert!(!CheckResult::within(f64::NAN, 1.0).passed);
    }

    #[test]
    fn above_encodes_lower_bounds() {
        assert!(CheckResult::above(2e-3, 1e-3).passed);
        assert!(!CheckResult::above(5e-4, 1e-3).passed);
        assert!(!CheckResult::above(0.0, 1e-3).passed);
    }

    #[test]
    fn combine_keeps_worst() {
        let r = CheckResult::combine([
            CheckResult::within(1e-14, 1e-12),
            CheckResult::within(1e-11, 1e-12),
        ]);
        assert!(!r.passed);
        assert_eq!(r.residual, 1e-11);
    }
}
