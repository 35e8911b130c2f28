//! Fit import/export as a JSON document.
//!
//! The document stores the fit at knot resolution; the log density is exactly
//! linear between knots, so the knot representation reconstructs the
//! identical density. Every number is written with 17 significant digits,
//! which round-trips any f64 exactly.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use thiserror::Error;

use super::{FitError, LogConcaveFit};

#[derive(Debug, Error)]
pub enum FitJsonError {
    #[error("malformed fit document: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("inconsistent fit document: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Invalid(#[from] FitError),
}

#[derive(Debug, Serialize, Deserialize)]
struct FitDocument {
    knots: Vec<f64>,
    phi: Vec<f64>,
    slopes: Vec<f64>,
    cum_mass: Vec<f64>,
    raw_n: usize,
    tolerance: f64,
    log_likelihood: f64,
}

struct PreciseFormatter;

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        // 17 significant digits: one before the decimal point, 16 after.
        write!(writer, "{value:.16e}")
    }
}

/// Serializes a fit. The arrays are knot-resolution; re-importing yields a
/// fit that evaluates to the identical distribution function.
pub fn fit_to_json(fit: &LogConcaveFit) -> String {
    let knot_fit = LogConcaveFit::assemble(
        fit.knots(),
        fit.phi_at_knots(),
        fit.raw_n(),
        fit.tolerance(),
        fit.log_likelihood(),
    );
    let doc = FitDocument {
        knots: knot_fit.points.clone(),
        phi: knot_fit.phi.clone(),
        slopes: knot_fit.slopes.clone(),
        cum_mass: knot_fit.cum_mass.clone(),
        raw_n: knot_fit.raw_n,
        tolerance: knot_fit.tolerance,
        log_likelihood: knot_fit.log_likelihood,
    };
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter);
    doc.serialize(&mut ser).expect("in-memory serialization");
    out.push(b'\n');
    String::from_utf8(out).expect("json is utf-8")
}

/// Parses and validates a fit document.
pub fn fit_from_json(text: &str) -> Result<LogConcaveFit, FitJsonError> {
    let doc: FitDocument = serde_json::from_str(text)?;
    if doc.slopes.len() + 1 != doc.knots.len() {
        return Err(FitJsonError::Inconsistent(format!(
            "{} knots need {} slopes, got {}",
            doc.knots.len(),
            doc.knots.len().saturating_sub(1),
            doc.slopes.len()
        )));
    }
    if doc.cum_mass.len() != doc.knots.len() {
        return Err(FitJsonError::Inconsistent(format!(
            "{} knots but {} cumulative masses",
            doc.knots.len(),
            doc.cum_mass.len()
        )));
    }
    if doc.raw_n < 2 {
        return Err(FitJsonError::Inconsistent(format!(
            "raw_n must be at least 2, got {}",
            doc.raw_n
        )));
    }
    let fit = LogConcaveFit::from_parts(
        doc.knots,
        doc.phi,
        doc.raw_n,
        doc.tolerance,
        doc.log_likelihood,
    )?;
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logcon::{fit, SampleData};
    use crate::rng::RngState;

    fn sample_fit() -> LogConcaveFit {
        let p = crate::distributions::GpdParams::new(-0.5, 1.0).unwrap();
        let xs = p.sample(40, &mut RngState::new(808));
        fit(&SampleData::prepare(&xs).unwrap()).unwrap().0
    }

    #[test]
    fn round_trip_preserves_the_distribution() {
        let original = sample_fit();
        let json = fit_to_json(&original);
        let back = fit_from_json(&json).unwrap();
        assert_eq!(back.points(), original.knots().as_slice());
        assert_eq!(back.phi(), original.phi_at_knots().as_slice());
        assert_eq!(back.raw_n(), original.raw_n());
        // identical log density everywhere, not just at knots
        for i in 0..=100 {
            let x = original.min() + (original.max() - original.min()) * i as f64 / 100.0;
            let d = (back.log_density(x) - original.log_density(x)).abs();
            assert!(d < 1e-12, "x={x} diff={d}");
        }
    }

    #[test]
    fn double_export_is_byte_identical() {
        let original = sample_fit();
        let once = fit_to_json(&original);
        let twice = fit_to_json(&fit_from_json(&once).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn numbers_carry_seventeen_significant_digits() {
        let json = fit_to_json(&sample_fit());
        // every float is rendered in scientific notation with 16 decimals
        assert!(json.contains("e"));
        let field = json.split("\"tolerance\":").nth(1).unwrap();
        let number: String = field
            .chars()
            .take_while(|c| !matches!(c, ',' | '}'))
            .collect();
        let mantissa = number.split('e').next().unwrap();
        let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
        assert_eq!(digits, 17, "mantissa {mantissa}");
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(
            fit_from_json("not json"),
            Err(FitJsonError::Parse(_))
        ));
        assert!(matches!(
            fit_from_json(
                r#"{"knots":[0.0,1.0],"phi":[0.0,0.0],"slopes":[],"cum_mass":[0.0,1.0],
                    "raw_n":2,"tolerance":1e-8,"log_likelihood":0.0}"#
            ),
            Err(FitJsonError::Inconsistent(_))
        ));
        // convex log density rejected by validation
        assert!(matches!(
            fit_from_json(
                r#"{"knots":[0.0,0.5,1.0],"phi":[0.0,-2.0,0.0],"slopes":[-4.0,4.0],
                    "cum_mass":[0.0,0.5,1.0],"raw_n":3,"tolerance":1e-8,"log_likelihood":0.0}"#
            ),
            Err(FitJsonError::Invalid(_))
        ));
    }
}
