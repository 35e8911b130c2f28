//! Maximum likelihood estimation of a log-concave density.
//!
//! The estimate has the form `f(x) = exp(phi(x))` where `phi` is piecewise
//! linear on the sample range with kinks ("knots") at a subset of the
//! observations and `-inf` outside. [`fit_logconcave`] maximizes
//!
//! ```text
//!     L(phi) = sum_i w_i phi(x_i) - int exp(phi(t)) dt
//! ```
//!
//! over concave piecewise-linear `phi`, which normalizes the density
//! implicitly: at the optimum the integral of `exp(phi)` is 1 and the fitted
//! mean equals the sample mean (stationarity along the constant and linear
//! directions). Optimality is certified through the directional derivatives
//! of all single-knot perturbations; see `solver.rs`.

mod io;
mod segment;
mod solver;

pub use io::{fit_from_json, fit_to_json, FitJsonError};
pub use segment::segment_integral;

use thiserror::Error;

use segment::j00;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("sample has {distinct} distinct value(s); need at least 2")]
    DegenerateSample { distinct: usize },

    #[error("non-finite value {value} at input position {index}")]
    NonFiniteInput { index: usize, value: f64 },

    #[error(
        "no certified optimum within {} iterations (gap {:.3e}, tolerance {tolerance:.3e})",
        diagnostics.iterations,
        diagnostics.final_gap
    )]
    NotConverged {
        diagnostics: FitDiagnostics,
        tolerance: f64,
    },

    #[error("invalid fit data: {0}")]
    InvalidFit(String),
}

/// A sorted, deduplicated weighted sample.
///
/// Ties in the raw input are merged into a single point carrying the
/// combined weight `multiplicity / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleData {
    points: Vec<f64>,
    weights: Vec<f64>,
    raw_n: usize,
}

impl SampleData {
    /// Builds a [`SampleData`] from raw observations.
    pub fn prepare(raw: &[f64]) -> Result<Self, FitError> {
        if let Some((index, &value)) = raw.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(FitError::NonFiniteInput { index, value });
        }
        let mut sorted = raw.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));

        let mut points = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for &x in &sorted {
            if points.last() == Some(&x) {
                *counts.last_mut().unwrap() += 1;
            } else {
                points.push(x);
                counts.push(1);
            }
        }
        if points.len() < 2 {
            return Err(FitError::DegenerateSample {
                distinct: points.len(),
            });
        }
        let n = raw.len() as f64;
        let weights = counts.iter().map(|&c| c as f64 / n).collect();
        Ok(Self {
            points,
            weights,
            raw_n: raw.len(),
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of distinct points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Original sample size before tie merging.
    pub fn raw_n(&self) -> usize {
        self.raw_n
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Weighted sample mean.
    pub fn mean(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| x * w)
            .sum()
    }
}

/// Solver configuration. The defaults certify optimality to a directional
/// derivative gap of 1e-8 (measured relative to the sample range).
#[derive(Debug, Clone)]
pub struct FitConfig {
    /// Certificate threshold: largest admissible directional derivative of a
    /// single-knot perturbation, relative to the sample range.
    pub gap_tolerance: f64,
    /// Slack allowed on the non-increasing-slope constraint, relative to the
    /// slope magnitude.
    pub concavity_slack: f64,
    /// Outer active-set iteration cap.
    pub max_outer_iterations: usize,
    /// Newton iteration cap per reduced solve.
    pub max_newton_iterations: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            gap_tolerance: 1e-8,
            concavity_slack: 1e-12,
            max_outer_iterations: 500,
            max_newton_iterations: 60,
        }
    }
}

impl FitConfig {
    pub fn with_tolerance(gap_tolerance: f64) -> Self {
        Self {
            gap_tolerance,
            ..Self::default()
        }
    }
}

/// Convergence report for a fit.
#[derive(Debug, Clone, Copy)]
pub struct FitDiagnostics {
    /// Outer active-set iterations used.
    pub iterations: usize,
    /// Largest directional-derivative violation at the returned solution,
    /// relative to the sample range.
    pub final_gap: f64,
    /// `sum_i w_i phi(x_i)` at the returned solution.
    pub log_likelihood: f64,
    /// Number of knots of the returned log density.
    pub active_knots: usize,
}

/// The fitted piecewise-exponential density.
///
/// `phi` holds the fitted log density at every sample point; between
/// consecutive points it interpolates linearly, outside the sample range it
/// is `-inf`. `cum_mass` is the fitted distribution function at the sample
/// points, normalized so that it is exactly 0 at the first point and 1 at
/// the last.
#[derive(Debug, Clone)]
pub struct LogConcaveFit {
    points: Vec<f64>,
    phi: Vec<f64>,
    slopes: Vec<f64>,
    segment_mass: Vec<f64>,
    cum_mass: Vec<f64>,
    total_mass: f64,
    knot_indices: Vec<usize>,
    raw_n: usize,
    tolerance: f64,
    log_likelihood: f64,
}

impl LogConcaveFit {
    /// Assembles a fit from the optimized log-density values. `phi` must be
    /// concave over `points` up to the documented slack.
    pub(crate) fn assemble(
        points: Vec<f64>,
        phi: Vec<f64>,
        raw_n: usize,
        tolerance: f64,
        log_likelihood: f64,
    ) -> Self {
        let m = points.len();
        let slopes: Vec<f64> = (0..m - 1)
            .map(|i| (phi[i + 1] - phi[i]) / (points[i + 1] - points[i]))
            .collect();
        let segment_mass: Vec<f64> = (0..m - 1)
            .map(|i| (points[i + 1] - points[i]) * j00(phi[i], phi[i + 1]))
            .collect();
        let total_mass: f64 = segment_mass.iter().sum();
        let mut cum_mass = Vec::with_capacity(m);
        cum_mass.push(0.0);
        let mut acc = 0.0;
        for &s in &segment_mass {
            acc += s;
            cum_mass.push(acc / total_mass);
        }
        // The last entry is total/total; force the exact endpoint identity.
        cum_mass[m - 1] = 1.0;

        let knot_indices = knot_indices_of(&points, &slopes);
        Self {
            points,
            phi,
            slopes,
            segment_mass,
            cum_mass,
            total_mass,
            knot_indices,
            raw_n,
            tolerance,
            log_likelihood,
        }
    }

    /// Rebuilds a fit from its knot representation, validating concavity.
    /// This is the import path for the fit JSON document.
    pub fn from_parts(
        knots: Vec<f64>,
        phi: Vec<f64>,
        raw_n: usize,
        tolerance: f64,
        log_likelihood: f64,
    ) -> Result<Self, FitError> {
        if knots.len() < 2 {
            return Err(FitError::InvalidFit(format!(
                "need at least 2 knots, got {}",
                knots.len()
            )));
        }
        if knots.len() != phi.len() {
            return Err(FitError::InvalidFit(format!(
                "{} knots but {} log-density values",
                knots.len(),
                phi.len()
            )));
        }
        if !knots.windows(2).all(|w| w[0] < w[1]) {
            return Err(FitError::InvalidFit(
                "knots must be strictly increasing".into(),
            ));
        }
        if let Some(v) = phi.iter().find(|v| !v.is_finite()) {
            return Err(FitError::InvalidFit(format!(
                "non-finite log-density value {v}"
            )));
        }
        let slopes: Vec<f64> = knots
            .windows(2)
            .zip(phi.windows(2))
            .map(|(x, p)| (p[1] - p[0]) / (x[1] - x[0]))
            .collect();
        let scale = slopes.iter().fold(1.0f64, |a, s| a.max(s.abs()));
        if !slopes.windows(2).all(|s| s[1] <= s[0] + 1e-10 * scale) {
            return Err(FitError::InvalidFit(
                "log density is not concave: slopes increase".into(),
            ));
        }
        Ok(Self::assemble(knots, phi, raw_n, tolerance, log_likelihood))
    }

    /// Sample points the fit is defined on (knots only, for imported fits).
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Fitted log density at the sample points.
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Per-segment slopes of the log density; non-increasing.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// Per-segment masses of the unnormalized fit; they sum to
    /// `total_mass()`, which is 1 up to the certificate tolerance.
    pub fn segment_mass(&self) -> &[f64] {
        &self.segment_mass
    }

    /// Normalized distribution function at the sample points; exactly 0 at
    /// the first point and 1 at the last.
    pub fn cum_mass(&self) -> &[f64] {
        &self.cum_mass
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Knot locations (points where the log density changes slope, always
    /// including both extremes).
    pub fn knots(&self) -> Vec<f64> {
        self.knot_indices.iter().map(|&i| self.points[i]).collect()
    }

    pub fn knot_count(&self) -> usize {
        self.knot_indices.len()
    }

    /// Log density at the knots only.
    pub fn phi_at_knots(&self) -> Vec<f64> {
        self.knot_indices.iter().map(|&i| self.phi[i]).collect()
    }

    pub fn raw_n(&self) -> usize {
        self.raw_n
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `sum_i w_i phi(x_i)` recorded at fit time.
    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Fitted log density at an arbitrary point; `-inf` outside the range.
    pub fn log_density(&self, x: f64) -> f64 {
        if x < self.min() || x > self.max() || x.is_nan() {
            return f64::NEG_INFINITY;
        }
        let i = self.segment_of(x);
        self.phi[i] + self.slopes.get(i).copied().unwrap_or(0.0) * (x - self.points[i])
    }

    /// Fitted density, normalized to unit mass.
    pub fn density(&self, x: f64) -> f64 {
        let l = self.log_density(x);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            l.exp() / self.total_mass
        }
    }

    /// Index of the segment containing `x` (last segment for `x = max`).
    pub(crate) fn segment_of(&self, x: f64) -> usize {
        let pos = self.points.partition_point(|&p| p <= x);
        pos.saturating_sub(1).min(self.points.len() - 2)
    }
}

/// A point is a knot when its slope change exceeds the reporting threshold
/// (relative to the slope magnitude); the extremes always count.
fn knot_indices_of(points: &[f64], slopes: &[f64]) -> Vec<usize> {
    let m = points.len();
    let scale = slopes.iter().fold(1.0f64, |a, s| a.max(s.abs()));
    let mut idx = vec![0];
    for j in 1..m - 1 {
        if slopes[j - 1] - slopes[j] > 1e-8 * scale {
            idx.push(j);
        }
    }
    idx.push(m - 1);
    idx
}

/// Log likelihood of a fit under a weighted sample:
/// `sum_i w_i phi(x_i)`.
pub fn log_likelihood(fit: &LogConcaveFit, data: &SampleData) -> f64 {
    data.points()
        .iter()
        .zip(data.weights())
        .map(|(&x, &w)| w * fit.log_density(x))
        .sum()
}

/// Fits the log-concave maximum likelihood density.
///
/// Returns the fit together with diagnostics; fails if no certified optimum
/// is reached within the iteration cap. The returned fit never violates
/// concavity beyond the configured slack.
pub fn fit_logconcave(
    data: &SampleData,
    config: &FitConfig,
) -> Result<(LogConcaveFit, FitDiagnostics), FitError> {
    solver::solve(data, config)
}

/// [`fit_logconcave`] with the default configuration.
pub fn fit(data: &SampleData) -> Result<(LogConcaveFit, FitDiagnostics), FitError> {
    fit_logconcave(data, &FitConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prepare_sorts() {
        let d = SampleData::prepare(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(d.points(), &[1.0, 2.0, 3.0]);
        for w in d.weights() {
            assert!((w - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(d.raw_n(), 3);
    }

    #[test]
    fn prepare_merges_ties() {
        let d = SampleData::prepare(&[1.0, 1.0, 2.0]).unwrap();
        assert_eq!(d.points(), &[1.0, 2.0]);
        assert!((d.weights()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((d.weights()[1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.raw_n(), 3);
    }

    #[test]
    fn prepare_rejects_degenerate_and_nonfinite() {
        assert!(matches!(
            SampleData::prepare(&[5.0, 5.0, 5.0]),
            Err(FitError::DegenerateSample { distinct: 1 })
        ));
        assert!(matches!(
            SampleData::prepare(&[1.0]),
            Err(FitError::DegenerateSample { .. })
        ));
        assert!(matches!(
            SampleData::prepare(&[]),
            Err(FitError::DegenerateSample { .. })
        ));
        assert!(matches!(
            SampleData::prepare(&[1.0, f64::NAN]),
            Err(FitError::NonFiniteInput { index: 1, .. })
        ));
        assert!(matches!(
            SampleData::prepare(&[f64::INFINITY, 0.0]),
            Err(FitError::NonFiniteInput { index: 0, .. })
        ));
    }

    #[test]
    fn weights_sum_to_one() {
        let d = SampleData::prepare(&[0.3, 0.1, 0.1, 0.9, 0.3, 0.3]).unwrap();
        let total: f64 = d.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(d.points().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn from_parts_validates() {
        assert!(LogConcaveFit::from_parts(vec![0.0], vec![0.0], 1, 1e-8, 0.0).is_err());
        assert!(LogConcaveFit::from_parts(vec![0.0, 1.0], vec![0.0], 2, 1e-8, 0.0).is_err());
        assert!(
            LogConcaveFit::from_parts(vec![1.0, 0.0], vec![0.0, 0.0], 2, 1e-8, 0.0).is_err()
        );
        // convex shape rejected
        assert!(LogConcaveFit::from_parts(
            vec![0.0, 0.5, 1.0],
            vec![0.0, -1.0, 0.0],
            3,
            1e-8,
            0.0
        )
        .is_err());
        // concave shape accepted
        assert!(LogConcaveFit::from_parts(
            vec![0.0, 0.5, 1.0],
            vec![-1.0, 0.0, -1.0],
            3,
            1e-8,
            0.0
        )
        .is_ok());
    }

    #[test]
    fn log_density_interpolates() {
        let fit =
            LogConcaveFit::from_parts(vec![0.0, 1.0], vec![0.0, 0.0], 2, 1e-8, 0.0).unwrap();
        assert_eq!(fit.log_density(0.5), 0.0);
        assert_eq!(fit.log_density(-0.1), f64::NEG_INFINITY);
        assert_eq!(fit.log_density(1.1), f64::NEG_INFINITY);
        assert!((fit.density(0.25) - 1.0).abs() < 1e-12);
    }
}
