//! Monte Carlo engine for relative-efficiency experiments.
//!
//! Three experiment families, all comparing estimation through empirical
//! order statistics against estimation through the smoothed distribution
//! function of a log-concave fit:
//!
//! * quantile relative efficiency on GPD samples,
//! * tail index estimation on GPD samples (fit on the full sample),
//! * tail index estimation under a beta domain-of-attraction scenario,
//!   where estimation runs on the largest order statistics and the fit is
//!   built on that subsample alone.
//!
//! Replicates are independent work units driven by seed-split child streams;
//! aggregation reduces in replicate order, so parallel and serial runs
//! produce identical tables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::{BetaParams, GpdParams};
use crate::estimators::{
    estimate, EmpiricalQuantiles, EstimatorKind, EstimatorSpec, SmoothedQuantiles,
};
use crate::logcon::{fit_logconcave, FitConfig, LogConcaveFit, SampleData};
use crate::rng::RngState;
use crate::smoothdist::SmoothCdf;

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("invalid manifest: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    /// Order-statistic vs smoothed quantile estimation on GPD samples.
    QuantileRe,
    /// Tail index estimation on GPD samples.
    GpdSetting1,
    /// Tail index estimation on the upper half of beta samples.
    BetaSetting2,
}

impl Setting {
    pub fn as_str(&self) -> &'static str {
        match self {
            Setting::QuantileRe => "quantile_re",
            Setting::GpdSetting1 => "gpd_setting1",
            Setting::BetaSetting2 => "beta_setting2",
        }
    }
}

fn default_sigma() -> f64 {
    1.0
}

fn default_theta1() -> f64 {
    0.5
}

fn default_sharpen() -> f64 {
    0.5
}

fn default_estimators() -> Vec<EstimatorKind> {
    vec![
        EstimatorKind::Pickands,
        EstimatorKind::Falk,
        EstimatorKind::Mvue,
    ]
}

/// Experiment manifest. Serialized as JSON; unknown fields are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingSpec {
    pub setting: Setting,
    /// Sample size drawn per replicate.
    pub n: usize,
    /// Number of Monte Carlo replicates.
    pub replicates: usize,
    /// Tail indices to sweep (GPD settings).
    #[serde(default)]
    pub gammas: Vec<f64>,
    /// Second beta shape parameters to sweep (beta setting).
    #[serde(default)]
    pub theta2s: Vec<f64>,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_theta1")]
    pub theta1: f64,
    /// Fraction of upper order statistics kept as the working sample in the
    /// beta setting.
    #[serde(default = "default_sharpen")]
    pub sharpen_fraction: f64,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<EstimatorKind>,
    #[serde(default)]
    pub truncate: bool,
    pub seed: u64,
}

impl SettingSpec {
    pub fn validate(&self) -> Result<(), SimulationError> {
        let mut problems = Vec::new();
        if self.n < 8 {
            problems.push(format!("n must be at least 8, got {}", self.n));
        }
        if self.replicates < 1 {
            problems.push("replicates must be at least 1".to_string());
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            problems.push(format!("sigma must be positive, got {}", self.sigma));
        }
        match self.setting {
            Setting::QuantileRe => {
                if self.gammas.is_empty() {
                    problems.push("gammas must not be empty".to_string());
                }
                for &g in &self.gammas {
                    if !(-1.0..=0.0).contains(&g) {
                        problems.push(format!("gamma {g} outside [-1, 0]"));
                    }
                }
            }
            Setting::GpdSetting1 => {
                if self.gammas.is_empty() {
                    problems.push("gammas must not be empty".to_string());
                }
                for &g in &self.gammas {
                    if !(-1.0..=-0.05).contains(&g) {
                        problems.push(format!("gamma {g} outside [-1, -0.05]"));
                    }
                }
                if self.estimators.is_empty() {
                    problems.push("estimators must not be empty".to_string());
                }
            }
            Setting::BetaSetting2 => {
                if self.theta2s.is_empty() {
                    problems.push("theta2s must not be empty".to_string());
                }
                for &t in &self.theta2s {
                    if !(t.is_finite() && t > 0.0) {
                        problems.push(format!("theta2 {t} must be positive"));
                    }
                }
                if !(self.theta1.is_finite() && self.theta1 > 0.0) {
                    problems.push(format!("theta1 must be positive, got {}", self.theta1));
                }
                if !(self.sharpen_fraction > 0.0 && self.sharpen_fraction <= 1.0) {
                    problems.push(format!(
                        "sharpen_fraction {} outside (0, 1]",
                        self.sharpen_fraction
                    ));
                }
                if self.working_size() < 8 {
                    problems.push(format!(
                        "working sample of {} order statistics is too small",
                        self.working_size()
                    ));
                }
                if self.estimators.is_empty() {
                    problems.push("estimators must not be empty".to_string());
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(SimulationError::InvalidSpec(problems.join("; ")))
        }
    }

    /// Size of the working sample: `ceil(sharpen_fraction * n)` upper order
    /// statistics in the beta setting, the full sample otherwise.
    pub fn working_size(&self) -> usize {
        match self.setting {
            Setting::BetaSetting2 => {
                ((self.sharpen_fraction * self.n as f64).ceil() as usize).min(self.n)
            }
            _ => self.n,
        }
    }
}

/// One aggregated cell of the efficiency table.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyRow {
    pub setting: Setting,
    /// gamma for GPD settings, theta2 for the beta setting.
    pub param: f64,
    /// "quantile" for the quantile experiment, the estimator name otherwise.
    pub estimator: &'static str,
    /// Order-statistic index (quantile experiment) or upper order statistic
    /// count (tail experiments).
    pub k: usize,
    pub bias_emp: f64,
    pub var_emp: f64,
    pub mse_emp: f64,
    pub bias_smooth: f64,
    pub var_smooth: f64,
    pub mse_smooth: f64,
    /// `mse_smooth / mse_emp`; values below 1 favor smoothing.
    pub rho: f64,
    /// Replicates where the empirical estimate was defined.
    pub defined_emp: usize,
    /// Replicates where the smoothed estimate was defined.
    pub defined_smooth: usize,
}

/// Bookkeeping across all replicates of a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunSummary {
    pub replicates: usize,
    pub fit_failures: usize,
    pub undefined_empirical: usize,
    pub undefined_smoothed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyTable {
    pub rows: Vec<EfficiencyRow>,
    pub summary: RunSummary,
}

impl EfficiencyTable {
    pub const CSV_HEADER: &'static str = "setting,param,estimator,k,bias_emp,var_emp,mse_emp,\
         bias_smooth,var_smooth,mse_smooth,rho,defined_emp,defined_smooth";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.setting.as_str(),
                r.param,
                r.estimator,
                r.k,
                r.bias_emp,
                r.var_emp,
                r.mse_emp,
                r.bias_smooth,
                r.var_smooth,
                r.mse_smooth,
                r.rho,
                r.defined_emp,
                r.defined_smooth
            ));
        }
        out
    }
}

/// Bias, variance (divisor `count - 1`) and their MSE against a target.
/// Empty cells are NaN throughout; single-value cells have NaN variance.
fn stats(values: impl Iterator<Item = f64> + Clone, target: f64) -> (f64, f64, f64) {
    let count = values.clone().count();
    if count == 0 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / count as f64;
    let bias = mean - target;
    let var = if count >= 2 {
        values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64
    } else {
        f64::NAN
    };
    (bias, var, bias * bias + var)
}

/// Aggregates paired per-replicate estimates into one row. Pairs where
/// either side is undefined are excluded from both sides, keeping the ratio
/// comparison paired.
fn cell_row(
    setting: Setting,
    param: f64,
    estimator: &'static str,
    k: usize,
    per_replicate: &[(Option<f64>, Option<f64>)],
    target: f64,
) -> EfficiencyRow {
    let pairs: Vec<(f64, f64)> = per_replicate
        .iter()
        .filter_map(|&(e, s)| Some((e?, s?)))
        .collect();
    let (bias_emp, var_emp, mse_emp) = stats(pairs.iter().map(|p| p.0), target);
    let (bias_smooth, var_smooth, mse_smooth) = stats(pairs.iter().map(|p| p.1), target);
    EfficiencyRow {
        setting,
        param,
        estimator,
        k,
        bias_emp,
        var_emp,
        mse_emp,
        bias_smooth,
        var_smooth,
        mse_smooth,
        rho: mse_smooth / mse_emp,
        defined_emp: per_replicate.iter().filter(|(e, _)| e.is_some()).count(),
        defined_smooth: per_replicate.iter().filter(|(_, s)| s.is_some()).count(),
    }
}

fn fit_sample(sorted: &[f64]) -> Option<LogConcaveFit> {
    let data = SampleData::prepare(sorted).ok()?;
    fit_logconcave(&data, &FitConfig::default()).ok().map(|(f, _)| f)
}

/// Runs the experiment described by the manifest. Deterministic in the
/// manifest seed, independent of thread count.
pub fn run_experiment(spec: &SettingSpec) -> Result<EfficiencyTable, SimulationError> {
    spec.validate()?;
    match spec.setting {
        Setting::QuantileRe => Ok(quantile_re_experiment(spec)),
        Setting::GpdSetting1 => Ok(setting1_experiment(spec)),
        Setting::BetaSetting2 => Ok(setting2_experiment(spec)),
    }
}

/// [`run_experiment`] on a dedicated pool of `threads` workers. The table is
/// identical for every thread count.
pub fn run_experiment_with_threads(
    spec: &SettingSpec,
    threads: usize,
) -> Result<EfficiencyTable, SimulationError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SimulationError::InvalidSpec(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_experiment(spec))
}

/// Per replicate: order statistics and their smoothed counterparts
/// `Fhat^{-1}(i/n)`.
fn quantile_re_experiment(spec: &SettingSpec) -> EfficiencyTable {
    let root = RngState::new(spec.seed);
    let n = spec.n;
    let m = spec.replicates;
    let mut rows = Vec::new();
    let mut summary = RunSummary {
        replicates: m,
        ..RunSummary::default()
    };

    for (pi, &gamma) in spec.gammas.iter().enumerate() {
        let gpd = GpdParams::new(gamma, spec.sigma).expect("validated parameters");
        let reps: Vec<Option<(Vec<f64>, Vec<f64>)>> = (0..m)
            .into_par_iter()
            .map(|j| {
                let mut rng = root.child((pi * m + j) as u64);
                let mut sorted = gpd.sample(n, &mut rng);
                sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let fit = fit_sample(&sorted)?;
                let cdf = SmoothCdf::new(&fit);
                let smoothed: Vec<f64> = (1..=n)
                    .map(|i| cdf.inverse(i as f64 / n as f64).expect("level in [0,1]"))
                    .collect();
                Some((sorted, smoothed))
            })
            .collect();
        summary.fit_failures += reps.iter().filter(|r| r.is_none()).count();

        for i in 1..=n {
            let target = match gpd.quantile(i as f64 / n as f64) {
                Ok(t) => t,
                // unbounded true quantile (gamma = 0 at the top level)
                Err(_) => continue,
            };
            let per_replicate: Vec<(Option<f64>, Option<f64>)> = reps
                .iter()
                .map(|r| match r {
                    Some((emp, smooth)) => (Some(emp[i - 1]), Some(smooth[i - 1])),
                    None => (Some(f64::NAN), None),
                })
                .collect();
            // empirical side is always defined, but stays paired
            let per_replicate: Vec<(Option<f64>, Option<f64>)> = per_replicate
                .into_iter()
                .map(|(e, s)| if s.is_none() { (e, None) } else { (e, s) })
                .collect();
            rows.push(cell_row(
                spec.setting,
                gamma,
                "quantile",
                i,
                &per_replicate,
                target,
            ));
        }
    }
    tally_undefined(&mut summary, &rows, m);
    EfficiencyTable { rows, summary }
}

/// Per-replicate tail index estimates over every valid `k`, for the
/// empirical and the smoothed source. `cells[e][ki]` follows
/// `spec.estimators` and the per-estimator `k` range.
struct TailRep {
    cells: Vec<Vec<(Option<f64>, Option<f64>)>>,
    fit_failed: bool,
}

fn tail_replicate(
    sorted: &[f64],
    estimators: &[EstimatorKind],
    truncate: bool,
    omega: f64,
) -> TailRep {
    let n = sorted.len();
    let x_max = *sorted.last().unwrap();
    let emp = EmpiricalQuantiles::from_sorted(sorted.to_vec());
    let fit = fit_sample(sorted);

    let cells = estimators
        .iter()
        .map(|kind| {
            let spec = match kind {
                EstimatorKind::Pickands => EstimatorSpec::Pickands,
                EstimatorKind::Falk => EstimatorSpec::Falk { x_max },
                EstimatorKind::Mvue => EstimatorSpec::Mvue { omega },
            };
            let (lo, hi) = kind.k_range(n);
            (lo..=hi)
                .map(|k| {
                    let e = estimate(&emp, &spec, k, truncate).ok().map(|t| t.value);
                    let s = fit.as_ref().and_then(|f| {
                        let src = SmoothedQuantiles::new(f);
                        estimate(&src, &spec, k, truncate).ok().map(|t| t.value)
                    });
                    (e, s)
                })
                .collect()
        })
        .collect();
    TailRep {
        cells,
        fit_failed: fit.is_none(),
    }
}

fn aggregate_tail(
    spec: &SettingSpec,
    param: f64,
    target: f64,
    working_n: usize,
    reps: &[TailRep],
    rows: &mut Vec<EfficiencyRow>,
    summary: &mut RunSummary,
) {
    summary.fit_failures += reps.iter().filter(|r| r.fit_failed).count();
    for (ei, kind) in spec.estimators.iter().enumerate() {
        let (lo, hi) = kind.k_range(working_n);
        for (ki, k) in (lo..=hi).enumerate() {
            let per_replicate: Vec<(Option<f64>, Option<f64>)> =
                reps.iter().map(|r| r.cells[ei][ki]).collect();
            rows.push(cell_row(
                spec.setting,
                param,
                kind.as_str(),
                k,
                &per_replicate,
                target,
            ));
        }
    }
}

fn tally_undefined(summary: &mut RunSummary, rows: &[EfficiencyRow], m: usize) {
    summary.undefined_empirical = rows.iter().map(|r| m - r.defined_emp).sum();
    summary.undefined_smoothed = rows.iter().map(|r| m - r.defined_smooth).sum();
}

/// GPD samples, fit on the full sample, known endpoint for the MVUE.
fn setting1_experiment(spec: &SettingSpec) -> EfficiencyTable {
    let root = RngState::new(spec.seed);
    let m = spec.replicates;
    let mut rows = Vec::new();
    let mut summary = RunSummary {
        replicates: m,
        ..RunSummary::default()
    };

    for (pi, &gamma) in spec.gammas.iter().enumerate() {
        let gpd = GpdParams::new(gamma, spec.sigma).expect("validated parameters");
        let omega = gpd.upper_endpoint().expect("gamma < 0 validated");
        let reps: Vec<TailRep> = (0..m)
            .into_par_iter()
            .map(|j| {
                let mut rng = root.child((pi * m + j) as u64);
                let mut sorted = gpd.sample(spec.n, &mut rng);
                sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                tail_replicate(&sorted, &spec.estimators, spec.truncate, omega)
            })
            .collect();
        aggregate_tail(spec, gamma, gamma, spec.n, &reps, &mut rows, &mut summary);
    }
    tally_undefined(&mut summary, &rows, m);
    EfficiencyTable { rows, summary }
}

/// Beta samples; the working sample is the `ceil(sharpen_fraction * n)`
/// largest order statistics, the fit is built on that subsample, and the
/// estimators run with the subsample size. The true tail index is
/// `-1/theta2` and the true endpoint is 1.
fn setting2_experiment(spec: &SettingSpec) -> EfficiencyTable {
    let root = RngState::new(spec.seed);
    let m = spec.replicates;
    let working = spec.working_size();
    let mut rows = Vec::new();
    let mut summary = RunSummary {
        replicates: m,
        ..RunSummary::default()
    };

    for (pi, &theta2) in spec.theta2s.iter().enumerate() {
        let beta = BetaParams::new(spec.theta1, theta2).expect("validated parameters");
        let target = beta.tail_index();
        let reps: Vec<TailRep> = (0..m)
            .into_par_iter()
            .map(|j| {
                let mut rng = root.child((pi * m + j) as u64);
                let mut sorted = beta.sample(spec.n, &mut rng);
                sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let upper = &sorted[spec.n - working..];
                tail_replicate(upper, &spec.estimators, spec.truncate, 1.0)
            })
            .collect();
        aggregate_tail(spec, theta2, target, working, &reps, &mut rows, &mut summary);
    }
    tally_undefined(&mut summary, &rows, m);
    EfficiencyTable { rows, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_setting1() -> SettingSpec {
        SettingSpec {
            setting: Setting::GpdSetting1,
            n: 32,
            replicates: 20,
            gammas: vec![-0.5],
            theta2s: vec![],
            sigma: 1.0,
            theta1: 0.5,
            sharpen_fraction: 0.5,
            estimators: vec![EstimatorKind::Pickands, EstimatorKind::Mvue],
            truncate: false,
            seed: 7,
        }
    }

    #[test]
    fn validation_enumerates_problems() {
        let mut spec = small_setting1();
        spec.n = 4;
        spec.replicates = 0;
        spec.gammas = vec![0.5];
        let err = spec.validate().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("n must be at least 8"));
        assert!(msg.contains("replicates"));
        assert!(msg.contains("0.5"));
    }

    #[test]
    fn aliased_sources_give_unit_rho() {
        // identical inputs on both sides is the aliasing hook: rho must be
        // exactly 1
        let per_replicate: Vec<(Option<f64>, Option<f64>)> = (0..50)
            .map(|i| {
                let v = -0.4 + 0.01 * (i as f64);
                (Some(v), Some(v))
            })
            .collect();
        let row = cell_row(Setting::QuantileRe, -0.5, "quantile", 3, &per_replicate, -0.3);
        assert_eq!(row.rho, 1.0);
        assert_eq!(row.bias_emp, row.bias_smooth);
    }

    #[test]
    fn constant_estimator_has_zero_bias_and_variance() {
        let target = 1.234;
        let per_replicate: Vec<(Option<f64>, Option<f64>)> =
            (0..10).map(|_| (Some(target), Some(target))).collect();
        let row = cell_row(Setting::QuantileRe, -0.5, "quantile", 1, &per_replicate, target);
        assert_eq!(row.bias_emp, 0.0);
        assert_eq!(row.var_emp, 0.0);
        assert_eq!(row.mse_emp, 0.0);
    }

    #[test]
    fn mse_is_bias_squared_plus_variance() {
        let per_replicate: Vec<(Option<f64>, Option<f64>)> = (0..40)
            .map(|i| (Some(-0.5 + 0.003 * i as f64), Some(-0.45 + 0.002 * i as f64)))
            .collect();
        let row = cell_row(Setting::GpdSetting1, -0.5, "pickands", 8, &per_replicate, -0.5);
        assert!((row.mse_emp - (row.bias_emp * row.bias_emp + row.var_emp)).abs() < 1e-12);
        assert!(
            (row.mse_smooth - (row.bias_smooth * row.bias_smooth + row.var_smooth)).abs()
                < 1e-12
        );
        assert!(row.var_emp >= 0.0 && row.var_smooth >= 0.0);
        assert!(row.rho > 0.0);
    }

    #[test]
    fn pairwise_exclusion_drops_both_sides() {
        let per_replicate = vec![
            (Some(1.0), Some(2.0)),
            (None, Some(3.0)),
            (Some(5.0), None),
            (Some(2.0), Some(1.0)),
        ];
        let row = cell_row(Setting::GpdSetting1, -0.5, "falk", 5, &per_replicate, 0.0);
        // only the two complete pairs enter the aggregates
        assert!((row.bias_emp - 1.5).abs() < 1e-12);
        assert!((row.bias_smooth - 1.5).abs() < 1e-12);
        assert_eq!(row.defined_emp, 3);
        assert_eq!(row.defined_smooth, 3);
    }

    #[test]
    fn single_replicate_has_undefined_variance() {
        let mut spec = small_setting1();
        spec.replicates = 1;
        let table = run_experiment(&spec).unwrap();
        assert!(table.rows.iter().all(|r| r.var_emp.is_nan()));
        assert!(table.rows.iter().all(|r| r.mse_emp.is_nan()));
    }

    #[test]
    fn tables_are_deterministic() {
        let spec = small_setting1();
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn thread_count_does_not_change_the_table() {
        let spec = small_setting1();
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_experiment(&spec).unwrap());
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| run_experiment(&spec).unwrap());
        assert_eq!(serial.to_csv(), parallel.to_csv());
    }

    #[test]
    fn defined_plus_undefined_accounts_for_every_replicate() {
        let mut spec = small_setting1();
        spec.n = 16;
        spec.replicates = 30;
        let table = run_experiment(&spec).unwrap();
        for row in &table.rows {
            assert!(row.defined_emp <= spec.replicates);
            assert!(row.defined_smooth <= spec.replicates);
        }
        let undef_emp: usize = table
            .rows
            .iter()
            .map(|r| spec.replicates - r.defined_emp)
            .sum();
        assert_eq!(undef_emp, table.summary.undefined_empirical);
    }

    #[test]
    fn quantile_re_has_expected_shape() {
        let spec = SettingSpec {
            setting: Setting::QuantileRe,
            n: 16,
            replicates: 10,
            gammas: vec![-1.0, 0.0],
            theta2s: vec![],
            sigma: 1.0,
            theta1: 0.5,
            sharpen_fraction: 0.5,
            estimators: vec![],
            truncate: false,
            seed: 11,
        };
        let table = run_experiment(&spec).unwrap();
        let g1_rows = table.rows.iter().filter(|r| r.param == -1.0).count();
        // gamma = 0 has an unbounded top quantile, so one fewer row
        let g0_rows = table.rows.iter().filter(|r| r.param == 0.0).count();
        assert_eq!(g1_rows, 16);
        assert_eq!(g0_rows, 15);
        assert!(table.rows.iter().all(|r| r.estimator == "quantile"));
    }

    #[test]
    fn setting2_uses_the_working_sample_size() {
        let spec = SettingSpec {
            setting: Setting::BetaSetting2,
            n: 32,
            replicates: 8,
            gammas: vec![],
            theta2s: vec![3.0],
            sigma: 1.0,
            theta1: 0.5,
            sharpen_fraction: 0.5,
            estimators: vec![EstimatorKind::Pickands],
            truncate: false,
            seed: 13,
        };
        assert_eq!(spec.working_size(), 16);
        let table = run_experiment(&spec).unwrap();
        let ks: Vec<usize> = table.rows.iter().map(|r| r.k).collect();
        assert_eq!(*ks.first().unwrap(), 4);
        assert_eq!(*ks.last().unwrap(), 16);
    }

    #[test]
    fn manifest_round_trips_through_json() {
        let spec = small_setting1();
        let text = serde_json::to_string_pretty(&spec).unwrap();
        let back: SettingSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.n, spec.n);
        assert_eq!(back.seed, spec.seed);
        assert!(serde_json::from_str::<SettingSpec>("{\"bogus\": 1}").is_err());
    }
}
