//! Closed-form integrals over exp-linear segments.
//!
//! A piecewise-linear log density reduces every mass and moment computation
//! to unit-interval integrals of the form
//!
//! ```text
//!     j_pq(a, b) = int_0^1 (1-t)^p t^q exp((1-t) a + t b) dt
//! ```
//!
//! for a segment whose log density runs from `a` on the left to `b` on the
//! right. `j_00` is the mass factor, the first-order terms are gradient
//! weights, the second-order terms Hessian weights. Every closed form has a
//! removable singularity at `b = a`, handled by a truncated power series in
//! `d = b - a`; away from it the forms are rearranged around `expm1` so no
//! leading-order cancellation remains.

/// Below this |b - a| the series branch is used.
const SERIES_CUTOFF: f64 = 1e-2;

/// Sum_{k=0}^{12} d^k / k! * c(k). With |d| < SERIES_CUTOFF the truncation
/// error is far below f64 resolution.
fn series(d: f64, c: impl Fn(f64) -> f64) -> f64 {
    let mut term = 1.0;
    let mut acc = c(0.0);
    for k in 1..=12 {
        term *= d / k as f64;
        acc += term * c(k as f64);
    }
    acc
}

/// j_00: unit mass factor, `(e^b - e^a) / (b - a)`.
pub(crate) fn j00(a: f64, b: f64) -> f64 {
    let d = b - a;
    let core = if d.abs() < SERIES_CUTOFF {
        series(d, |k| 1.0 / (k + 1.0))
    } else {
        d.exp_m1() / d
    };
    a.exp() * core
}

/// j_10: weight of the left endpoint in the segment mass derivative.
pub(crate) fn j10(a: f64, b: f64) -> f64 {
    let d = b - a;
    let core = if d.abs() < SERIES_CUTOFF {
        series(d, |k| 1.0 / ((k + 1.0) * (k + 2.0)))
    } else {
        (d.exp_m1() - d) / (d * d)
    };
    a.exp() * core
}

/// j_01: weight of the right endpoint in the segment mass derivative.
pub(crate) fn j01(a: f64, b: f64) -> f64 {
    let d = b - a;
    let core = if d.abs() < SERIES_CUTOFF {
        series(d, |k| 1.0 / (k + 2.0))
    } else {
        let e = d.exp_m1();
        (d * (e + 1.0) - e) / (d * d)
    };
    a.exp() * core
}

/// j_20: second derivative weight, left endpoint squared.
pub(crate) fn j20(a: f64, b: f64) -> f64 {
    let d = b - a;
    let core = if d.abs() < SERIES_CUTOFF {
        series(d, |k| 2.0 / ((k + 1.0) * (k + 2.0) * (k + 3.0)))
    } else {
        (2.0 * d.exp_m1() - 2.0 * d - d * d) / (d * d * d)
    };
    a.exp() * core
}

/// j_11: mixed second derivative weight.
pub(crate) fn j11(a: f64, b: f64) -> f64 {
    let d = b - a;
    let core = if d.abs() < SERIES_CUTOFF {
        series(d, |k| 1.0 / ((k + 2.0) * (k + 3.0)))
    } else {
        (d.exp_m1() * (d - 2.0) + 2.0 * d) / (d * d * d)
    };
    a.exp() * core
}

/// j_02: second derivative weight, right endpoint squared.
pub(crate) fn j02(a: f64, b: f64) -> f64 {
    let d = b - a;
    let core = if d.abs() < SERIES_CUTOFF {
        series(d, |k| 1.0 / (k + 3.0))
    } else {
        (d.exp_m1() * (d * d - 2.0 * d + 2.0) + d * (d - 2.0)) / (d * d * d)
    };
    a.exp() * core
}

/// Mass of one exp-linear segment: the integral of `exp(phi(t))` over
/// `[a, b]` where `phi` runs linearly from `phi_a` to `phi_b`.
///
/// Equals `(b - a) (e^phi_b - e^phi_a) / (phi_b - phi_a)`, with a series
/// branch near `phi_b = phi_a`. Always positive for `a < b`.
pub fn segment_integral(a: f64, b: f64, phi_a: f64, phi_b: f64) -> f64 {
    (b - a) * j00(phi_a, phi_b)
}
