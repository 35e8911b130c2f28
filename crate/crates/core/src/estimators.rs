//! Tail index estimators over an abstract quantile source.
//!
//! Each estimator is a function of quantiles `H^{-1}(q)` at levels of the
//! form `(n - j + 1)/n`, where `H` may be the empirical distribution
//! function, the smooth distribution function of a log-concave fit, or a
//! known true quantile function (for tests). Swapping the empirical source
//! for the smoothed one is what produces the smoothed estimators.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logcon::LogConcaveFit;
use crate::smoothdist::{SmoothCdf, SmoothDistError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Empirical,
    Smoothed,
    Oracle,
}

impl SourceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SourceKind::Empirical => "empirical",
            SourceKind::Smoothed => "smoothed",
            SourceKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Pickands,
    Falk,
    Mvue,
}

impl EstimatorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorKind::Pickands => "pickands",
            EstimatorKind::Falk => "falk",
            EstimatorKind::Mvue => "mvue",
        }
    }

    /// Valid range of the order-statistic count `k` for sample size `n`.
    pub fn k_range(&self, n: usize) -> (usize, usize) {
        match self {
            EstimatorKind::Pickands => (4, n),
            EstimatorKind::Falk => (3, n.saturating_sub(1)),
            EstimatorKind::Mvue => (2, n.saturating_sub(1)),
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error("k = {k} outside the valid range [{min}, {max}] for {estimator}")]
    InvalidK {
        estimator: EstimatorKind,
        k: usize,
        min: usize,
        max: usize,
    },

    #[error("estimate undefined at k = {k}: {reason}")]
    Undefined { k: usize, reason: &'static str },

    #[error("endpoint {omega} does not exceed the sample maximum {x_max}")]
    InvalidEndpoint { omega: f64, x_max: f64 },

    #[error("quantile level {q} outside (0, 1]")]
    LevelOutOfRange { q: f64 },

    #[error("quantile source returned non-finite value at level {q}")]
    NonFiniteQuantile { q: f64 },
}

impl From<SmoothDistError> for EstimateError {
    fn from(e: SmoothDistError) -> Self {
        match e {
            SmoothDistError::LevelOutOfRange { q } => EstimateError::LevelOutOfRange { q },
        }
    }
}

/// Source of quantiles at levels in (0, 1].
pub trait QuantileSource {
    fn quantile(&self, q: f64) -> Result<f64, EstimateError>;
    fn sample_size(&self) -> usize;
    fn kind(&self) -> SourceKind;
}

/// Order statistics of an observed sample: `H^{-1}(q) = X_(ceil(q n))`.
#[derive(Debug, Clone)]
pub struct EmpiricalQuantiles {
    sorted: Vec<f64>,
}

impl EmpiricalQuantiles {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        Self { sorted: values }
    }

    pub fn from_sorted(sorted: Vec<f64>) -> Self {
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        Self { sorted }
    }

    pub fn max(&self) -> f64 {
        *self.sorted.last().expect("non-empty sample")
    }
}

impl QuantileSource for EmpiricalQuantiles {
    fn quantile(&self, q: f64) -> Result<f64, EstimateError> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(EstimateError::LevelOutOfRange { q });
        }
        let n = self.sorted.len();
        // ceil(q n), guarded against the product landing a hair above an
        // integer it should equal exactly.
        let idx = (q * n as f64 - 1e-9).ceil() as usize;
        Ok(self.sorted[idx.clamp(1, n) - 1])
    }

    fn sample_size(&self) -> usize {
        self.sorted.len()
    }

    fn kind(&self) -> SourceKind {
        SourceKind::Empirical
    }
}

/// Quantiles of the smooth distribution function of a log-concave fit.
#[derive(Debug, Clone, Copy)]
pub struct SmoothedQuantiles<'a> {
    cdf: SmoothCdf<'a>,
    n: usize,
}

impl<'a> SmoothedQuantiles<'a> {
    pub fn new(fit: &'a LogConcaveFit) -> Self {
        Self {
            cdf: SmoothCdf::new(fit),
            n: fit.raw_n(),
        }
    }
}

impl QuantileSource for SmoothedQuantiles<'_> {
    fn quantile(&self, q: f64) -> Result<f64, EstimateError> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(EstimateError::LevelOutOfRange { q });
        }
        Ok(self.cdf.inverse(q)?)
    }

    fn sample_size(&self) -> usize {
        self.n
    }

    fn kind(&self) -> SourceKind {
        SourceKind::Smoothed
    }
}

/// A known true quantile function, for tests and diagnostics only.
pub struct OracleQuantiles {
    quantile_fn: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    n: usize,
}

impl OracleQuantiles {
    pub fn new(n: usize, quantile_fn: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            quantile_fn: Box::new(quantile_fn),
            n,
        }
    }
}

impl QuantileSource for OracleQuantiles {
    fn quantile(&self, q: f64) -> Result<f64, EstimateError> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(EstimateError::LevelOutOfRange { q });
        }
        let v = (self.quantile_fn)(q);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EstimateError::NonFiniteQuantile { q })
        }
    }

    fn sample_size(&self) -> usize {
        self.n
    }

    fn kind(&self) -> SourceKind {
        SourceKind::Oracle
    }
}

/// One tail index estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    /// The reported value; equals `raw_value` clamped to [-1, 0] when
    /// truncation was requested and needed.
    pub value: f64,
    /// The untruncated estimate.
    pub raw_value: f64,
    pub k: usize,
    pub estimator: EstimatorKind,
    pub source: SourceKind,
    /// Set iff truncation was requested and the raw value fell outside
    /// [-1, 0].
    pub truncated: bool,
}

fn finish(
    raw: f64,
    k: usize,
    estimator: EstimatorKind,
    source: SourceKind,
    truncate: bool,
) -> TailEstimate {
    let outside = !(-1.0..=0.0).contains(&raw);
    if truncate && outside {
        TailEstimate {
            value: raw.clamp(-1.0, 0.0),
            raw_value: raw,
            k,
            estimator,
            source,
            truncated: true,
        }
    } else {
        TailEstimate {
            value: raw,
            raw_value: raw,
            k,
            estimator,
            source,
            truncated: false,
        }
    }
}

fn check_k(estimator: EstimatorKind, k: usize, n: usize) -> Result<(), EstimateError> {
    let (min, max) = estimator.k_range(n);
    if k < min || k > max {
        return Err(EstimateError::InvalidK {
            estimator,
            k,
            min,
            max,
        });
    }
    Ok(())
}

/// Ratio-of-spacings estimator at three explicit levels `q1 > q2 > q3`:
/// `log2((H^{-1}(q1) - H^{-1}(q2)) / (H^{-1}(q2) - H^{-1}(q3)))`.
///
/// On an exact GPD quantile function with levels of tail probability
/// `p, 2p, 4p` this recovers the tail index exactly.
pub fn pickands_at_levels<H: QuantileSource + ?Sized>(
    h: &H,
    q1: f64,
    q2: f64,
    q3: f64,
) -> Result<f64, EstimateError> {
    let upper = h.quantile(q1)?;
    let mid = h.quantile(q2)?;
    let lower = h.quantile(q3)?;
    let num = upper - mid;
    let den = mid - lower;
    if !(num > 0.0) {
        return Err(EstimateError::Undefined {
            k: 0,
            reason: "non-positive upper spacing",
        });
    }
    if !(den > 0.0) {
        return Err(EstimateError::Undefined {
            k: 0,
            reason: "non-positive lower spacing",
        });
    }
    Ok((num / den).ln() / std::f64::consts::LN_2)
}

/// Pickands-type estimator at `k` upper order statistics.
///
/// The spacing radius is `floor(k/4)` for the empirical source and the
/// fractional `k/4` for continuous sources, which avoids quantiles
/// coinciding across four consecutive `k`.
pub fn pickands<H: QuantileSource + ?Sized>(
    h: &H,
    k: usize,
    truncate: bool,
) -> Result<TailEstimate, EstimateError> {
    let n = h.sample_size();
    check_k(EstimatorKind::Pickands, k, n)?;
    let r = match h.kind() {
        SourceKind::Empirical => (k / 4) as f64,
        SourceKind::Smoothed | SourceKind::Oracle => k as f64 / 4.0,
    };
    let nf = n as f64;
    let raw = pickands_at_levels(
        h,
        (nf - r + 1.0) / nf,
        (nf - 2.0 * r + 1.0) / nf,
        (nf - 4.0 * r + 1.0) / nf,
    )
    .map_err(|e| match e {
        EstimateError::Undefined { reason, .. } => EstimateError::Undefined { k, reason },
        other => other,
    })?;
    Ok(finish(raw, k, EstimatorKind::Pickands, h.kind(), truncate))
}

/// Negative-Hill-type estimator anchored at the sample maximum:
/// `(k-1)^-1 sum_{j=2}^{k} log((x_max - H^{-1}((n-j+1)/n)) / (x_max - H^{-1}((n-k)/n)))`.
///
/// `x_max` is the largest observation of the underlying sample, for the
/// smoothed source as well.
pub fn falk<H: QuantileSource + ?Sized>(
    h: &H,
    k: usize,
    x_max: f64,
    truncate: bool,
) -> Result<TailEstimate, EstimateError> {
    let n = h.sample_size();
    check_k(EstimatorKind::Falk, k, n)?;
    let nf = n as f64;
    let anchor = x_max - h.quantile((nf - k as f64) / nf)?;
    if !(anchor > 0.0) {
        return Err(EstimateError::Undefined {
            k,
            reason: "non-positive anchor spacing",
        });
    }
    let mut total = 0.0;
    for j in 2..=k {
        let num = x_max - h.quantile((nf - j as f64 + 1.0) / nf)?;
        if !(num > 0.0) {
            return Err(EstimateError::Undefined {
                k,
                reason: "non-positive log argument",
            });
        }
        total += (num / anchor).ln();
    }
    let raw = total / (k - 1) as f64;
    Ok(finish(raw, k, EstimatorKind::Falk, h.kind(), truncate))
}

/// Minimum-variance unbiased estimator for a known upper endpoint `omega`:
/// `k^-1 sum_{j=1}^{k} log((omega - H^{-1}((n-j+1)/n)) / (omega - H^{-1}((n-k)/n)))`.
pub fn mvue<H: QuantileSource + ?Sized>(
    h: &H,
    k: usize,
    omega: f64,
    truncate: bool,
) -> Result<TailEstimate, EstimateError> {
    let n = h.sample_size();
    check_k(EstimatorKind::Mvue, k, n)?;
    let x_max = h.quantile(1.0)?;
    if !(omega > x_max) {
        return Err(EstimateError::InvalidEndpoint { omega, x_max });
    }
    let nf = n as f64;
    let anchor = omega - h.quantile((nf - k as f64) / nf)?;
    if !(anchor > 0.0) {
        return Err(EstimateError::Undefined {
            k,
            reason: "non-positive anchor spacing",
        });
    }
    let mut total = 0.0;
    for j in 1..=k {
        let num = omega - h.quantile((nf - j as f64 + 1.0) / nf)?;
        if !(num > 0.0) {
            return Err(EstimateError::Undefined {
                k,
                reason: "non-positive log argument",
            });
        }
        total += (num / anchor).ln();
    }
    let raw = total / k as f64;
    Ok(finish(raw, k, EstimatorKind::Mvue, h.kind(), truncate))
}

/// An estimator together with the auxiliary quantity it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorSpec {
    Pickands,
    /// Needs the sample maximum.
    Falk { x_max: f64 },
    /// Needs the known true upper endpoint.
    Mvue { omega: f64 },
}

impl EstimatorSpec {
    pub fn kind(&self) -> EstimatorKind {
        match self {
            EstimatorSpec::Pickands => EstimatorKind::Pickands,
            EstimatorSpec::Falk { .. } => EstimatorKind::Falk,
            EstimatorSpec::Mvue { .. } => EstimatorKind::Mvue,
        }
    }
}

/// Single estimate at one `k`.
pub fn estimate<H: QuantileSource + ?Sized>(
    h: &H,
    spec: &EstimatorSpec,
    k: usize,
    truncate: bool,
) -> Result<TailEstimate, EstimateError> {
    match *spec {
        EstimatorSpec::Pickands => pickands(h, k, truncate),
        EstimatorSpec::Falk { x_max } => falk(h, k, x_max, truncate),
        EstimatorSpec::Mvue { omega } => mvue(h, k, omega, truncate),
    }
}

/// Estimates for every valid `k`; undefined estimates are recorded as
/// missing entries, never silently dropped.
#[derive(Debug, Clone)]
pub struct HillSeries {
    pub estimator: EstimatorKind,
    pub source: SourceKind,
    pub entries: Vec<(usize, Option<TailEstimate>)>,
}

impl HillSeries {
    pub fn defined_count(&self) -> usize {
        self.entries.iter().filter(|(_, e)| e.is_some()).count()
    }

    pub const CSV_HEADER: &'static str = "estimator,source,k,value,truncated,defined";

    pub fn csv_rows(&self) -> impl Iterator<Item = String> + '_ {
        self.entries.iter().map(move |(k, e)| match e {
            Some(est) => format!(
                "{},{},{},{},{},true",
                self.estimator, self.source, k, est.value, est.truncated
            ),
            None => format!("{},{},{},,false,false", self.estimator, self.source, k),
        })
    }
}

/// Computes the per-`k` series of an estimator over `h`, optionally
/// restricted to `k` in `[k_min, k_max]` (intersected with the valid range).
pub fn hill_series<H: QuantileSource + ?Sized>(
    h: &H,
    spec: &EstimatorSpec,
    truncate: bool,
    k_restrict: Option<(usize, usize)>,
) -> HillSeries {
    let kind = spec.kind();
    let (mut lo, mut hi) = kind.k_range(h.sample_size());
    if let Some((a, b)) = k_restrict {
        lo = lo.max(a);
        hi = hi.min(b);
    }
    let entries = (lo..=hi)
        .map(|k| (k, estimate(h, spec, k, truncate).ok()))
        .collect();
    HillSeries {
        estimator: kind,
        source: h.kind(),
        entries,
    }
}
