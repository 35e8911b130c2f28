//! Command-line front end: fit log-concave densities, evaluate smooth
//! quantiles, compute tail index estimates and per-k series, and run Monte
//! Carlo experiment manifests. All outputs are machine-readable (CSV or
//! JSON).
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 numerical failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use tailsmooth::estimators::{
    estimate, hill_series, EmpiricalQuantiles, EstimateError, EstimatorSpec, HillSeries,
    QuantileSource, SmoothedQuantiles,
};
use tailsmooth::logcon::{
    fit_from_json, fit_logconcave, fit_to_json, FitConfig, FitError, LogConcaveFit, SampleData,
};
use tailsmooth::simulation::{run_experiment, run_experiment_with_threads, SettingSpec};
use tailsmooth::smoothdist::SmoothCdf;

#[derive(Parser)]
#[command(
    name = "tailsmooth",
    version,
    about = "Smooth tail index estimation via log-concave density fitting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the log-concave maximum likelihood density to a data file.
    Fit {
        /// Input data: newline-delimited numbers, or a single-column CSV
        /// whose header is detected automatically.
        #[arg(long)]
        input: PathBuf,
        /// Where to write the fit JSON document.
        #[arg(long)]
        output: PathBuf,
        /// Optimality certificate tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Outer iteration cap of the active-set solver.
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
    },
    /// Evaluate quantiles of a fitted distribution function.
    Quantiles {
        /// Fit JSON document produced by `fit`.
        #[arg(long)]
        fit: PathBuf,
        /// Comma-separated probability levels in [0, 1].
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<f64>,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tail index estimate at one k.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        estimator: EstimatorArg,
        #[arg(long, value_enum, default_value_t = SourceArg::Both)]
        source: SourceArg,
        /// Number of upper order statistics.
        #[arg(long)]
        k: usize,
        /// Known true upper endpoint (required by the MVUE estimator).
        #[arg(long)]
        omega: Option<f64>,
        /// Clamp estimates into [-1, 0].
        #[arg(long)]
        truncate: bool,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Per-k series of tail index estimates (plot-ready CSV).
    Hillplot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        estimator: EstimatorArg,
        #[arg(long, value_enum, default_value_t = SourceArg::Both)]
        source: SourceArg,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        truncate: bool,
        /// Restrict the series to k >= this value.
        #[arg(long)]
        k_min: Option<usize>,
        /// Restrict the series to k <= this value.
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a Monte Carlo experiment described by a manifest JSON.
    Simulate {
        #[arg(long)]
        manifest: PathBuf,
        /// Output CSV path for the efficiency table.
        #[arg(long)]
        output: PathBuf,
        /// Run metadata JSON path.
        #[arg(long)]
        metadata: Option<PathBuf>,
        /// Worker threads (output is identical for any value).
        #[arg(long)]
        threads: Option<usize>,
        /// Overrides the manifest seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Pickands,
    Falk,
    Mvue,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum SourceArg {
    Empirical,
    Smoothed,
    Both,
}

enum CliError {
    /// Bad input, arguments, or manifest: exit code 1.
    Validation(String),
    /// The computation itself failed: exit code 2.
    Numerical(String),
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        match e {
            FitError::NotConverged { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<EstimateError> for CliError {
    fn from(e: EstimateError) -> Self {
        match e {
            EstimateError::Undefined { .. } | EstimateError::NonFiniteQuantile { .. } => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Fit {
            input,
            output,
            tolerance,
            max_iterations,
        } => cmd_fit(&input, &output, tolerance, max_iterations),
        Command::Quantiles {
            fit,
            levels,
            output,
        } => cmd_quantiles(&fit, &levels, output.as_deref()),
        Command::Estimate {
            input,
            estimator,
            source,
            k,
            omega,
            truncate,
            tolerance,
            output,
        } => cmd_estimate(
            &input,
            estimator,
            source,
            k,
            omega,
            truncate,
            tolerance,
            output.as_deref(),
        ),
        Command::Hillplot {
            input,
            estimator,
            source,
            omega,
            truncate,
            k_min,
            k_max,
            tolerance,
            output,
        } => cmd_hillplot(
            &input, estimator, source, omega, truncate, k_min, k_max, tolerance,
            output.as_deref(),
        ),
        Command::Simulate {
            manifest,
            output,
            metadata,
            threads,
            seed,
        } => cmd_simulate(&manifest, &output, metadata.as_deref(), threads, seed),
    }
}

/// Reads newline-delimited numbers; a non-numeric first line is treated as a
/// CSV header. Multi-column input is rejected.
fn read_numbers(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    let mut first_data_line = true;
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed
            .split(',')
            .map(str::trim)
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 1 {
            return Err(CliError::Validation(format!(
                "{}:{}: expected a single column, found {} fields",
                path.display(),
                lineno + 1,
                fields.len()
            )));
        }
        match fields[0].parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if first_data_line => {} // header line
            Err(_) => {
                return Err(CliError::Validation(format!(
                    "{}:{}: cannot parse `{}` as a number",
                    path.display(),
                    lineno + 1,
                    fields[0]
                )));
            }
        }
        first_data_line = false;
    }
    if values.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no numeric data",
            path.display()
        )));
    }
    Ok(values)
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn fit_data(values: &[f64], tolerance: f64, max_iterations: usize) -> Result<LogConcaveFit, CliError> {
    let data = SampleData::prepare(values)?;
    let config = FitConfig {
        gap_tolerance: tolerance,
        max_outer_iterations: max_iterations,
        ..FitConfig::default()
    };
    let (fit, _) = fit_logconcave(&data, &config)?;
    Ok(fit)
}

fn cmd_fit(
    input: &Path,
    output: &Path,
    tolerance: f64,
    max_iterations: usize,
) -> Result<(), CliError> {
    let values = read_numbers(input)?;
    let data = SampleData::prepare(&values)?;
    let config = FitConfig {
        gap_tolerance: tolerance,
        max_outer_iterations: max_iterations,
        ..FitConfig::default()
    };
    let (fit, diag) = fit_logconcave(&data, &config)?;
    fs::write(output, fit_to_json(&fit))
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", output.display())))?;
    println!(
        "n={} knots={} log_likelihood={} final_gap={:e}",
        data.raw_n(),
        fit.knot_count(),
        diag.log_likelihood,
        diag.final_gap
    );
    Ok(())
}

fn cmd_quantiles(
    fit_path: &Path,
    levels: &[f64],
    output: Option<&Path>,
) -> Result<(), CliError> {
    let text = fs::read_to_string(fit_path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", fit_path.display())))?;
    let fit = fit_from_json(&text).map_err(|e| CliError::Validation(e.to_string()))?;
    let cdf = SmoothCdf::new(&fit);
    let mut out = String::from("level,quantile\n");
    for &q in levels {
        let x = cdf
            .inverse(q)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        writeln!(out, "{q},{x}").expect("in-memory write");
    }
    write_output(output, &out)
}

fn build_spec(
    estimator: EstimatorArg,
    x_max: f64,
    omega: Option<f64>,
) -> Result<EstimatorSpec, CliError> {
    match estimator {
        EstimatorArg::Pickands => Ok(EstimatorSpec::Pickands),
        EstimatorArg::Falk => Ok(EstimatorSpec::Falk { x_max }),
        EstimatorArg::Mvue => {
            let omega = omega.ok_or_else(|| {
                CliError::Validation("--omega is required for the mvue estimator".into())
            })?;
            Ok(EstimatorSpec::Mvue { omega })
        }
    }
}

fn selected_sources(source: SourceArg) -> (bool, bool) {
    match source {
        SourceArg::Empirical => (true, false),
        SourceArg::Smoothed => (false, true),
        SourceArg::Both => (true, true),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_estimate(
    input: &Path,
    estimator: EstimatorArg,
    source: SourceArg,
    k: usize,
    omega: Option<f64>,
    truncate: bool,
    tolerance: f64,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let values = read_numbers(input)?;
    let x_max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spec = build_spec(estimator, x_max, omega)?;
    let (want_emp, want_smooth) = selected_sources(source);

    let mut out = String::from(HillSeries::CSV_HEADER);
    out.push('\n');
    let mut push_row = |h: &dyn QuantileSource| -> Result<(), CliError> {
        let est = estimate(h, &spec, k, truncate)?;
        writeln!(
            out,
            "{},{},{},{},{},true",
            est.estimator, est.source, est.k, est.value, est.truncated
        )
        .expect("in-memory write");
        Ok(())
    };
    if want_emp {
        push_row(&EmpiricalQuantiles::new(values.clone()))?;
    }
    if want_smooth {
        let fit = fit_data(&values, tolerance, FitConfig::default().max_outer_iterations)?;
        push_row(&SmoothedQuantiles::new(&fit))?;
    }
    write_output(output, &out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_hillplot(
    input: &Path,
    estimator: EstimatorArg,
    source: SourceArg,
    omega: Option<f64>,
    truncate: bool,
    k_min: Option<usize>,
    k_max: Option<usize>,
    tolerance: f64,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let values = read_numbers(input)?;
    let x_max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spec = build_spec(estimator, x_max, omega)?;
    let restrict = match (k_min, k_max) {
        (None, None) => None,
        (a, b) => Some((a.unwrap_or(1), b.unwrap_or(usize::MAX))),
    };
    let (want_emp, want_smooth) = selected_sources(source);

    let mut out = String::from(HillSeries::CSV_HEADER);
    out.push('\n');
    if want_emp {
        let src = EmpiricalQuantiles::new(values.clone());
        for row in hill_series(&src, &spec, truncate, restrict).csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
    }
    if want_smooth {
        let fit = fit_data(&values, tolerance, FitConfig::default().max_outer_iterations)?;
        let src = SmoothedQuantiles::new(&fit);
        for row in hill_series(&src, &spec, truncate, restrict).csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
    }
    write_output(output, &out)
}

fn cmd_simulate(
    manifest_path: &Path,
    output: &Path,
    metadata: Option<&Path>,
    threads: Option<usize>,
    seed_override: Option<u64>,
) -> Result<(), CliError> {
    let text = fs::read_to_string(manifest_path).map_err(|e| {
        CliError::Validation(format!("cannot read {}: {e}", manifest_path.display()))
    })?;
    let mut spec: SettingSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("invalid manifest: {e}")))?;
    if let Some(seed) = seed_override {
        spec.seed = seed;
    }

    let started = Instant::now();
    let table = match threads {
        Some(t) => run_experiment_with_threads(&spec, t),
        None => run_experiment(&spec),
    }
    .map_err(|e| CliError::Validation(e.to_string()))?;
    let elapsed = started.elapsed().as_secs_f64();

    fs::write(output, table.to_csv())
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", output.display())))?;

    if let Some(meta_path) = metadata {
        let meta = serde_json::json!({
            "setting": spec.setting.as_str(),
            "seed": spec.seed,
            "replicates": spec.replicates,
            "n": spec.n,
            "threads": threads,
            "wall_time_seconds": elapsed,
            "fit_failures": table.summary.fit_failures,
            "undefined_empirical": table.summary.undefined_empirical,
            "undefined_smoothed": table.summary.undefined_smoothed,
            "degenerate_variance": spec.replicates < 2,
        });
        fs::write(meta_path, format!("{:#}\n", meta)).map_err(|e| {
            CliError::Validation(format!("cannot write {}: {e}", meta_path.display()))
        })?;
    }
    println!(
        "setting={} rows={} seed={} wall_time={:.3}s",
        spec.setting.as_str(),
        table.rows.len(),
        spec.seed,
        elapsed
    );
    Ok(())
}
