//! Parametric distributions: generalized Pareto (GPD), generalized extreme
//! value (GEV) and beta, with densities, distribution and quantile functions,
//! inverse-transform samplers, and the qualitative shape classification of
//! the GPD density by tail index.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::rng::RngState;

/// Below this |gamma| the GPD/GEV formulas switch to their exponential and
/// Gumbel limit forms; the generic power form loses all precision there.
pub const GAMMA_ZERO_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum DistributionError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("quantile level {q} outside [0, 1]")]
    LevelOutOfRange { q: f64 },

    #[error("quantile level 1 is unbounded for tail index {gamma}")]
    UnboundedQuantile { gamma: f64 },
}

/// Generalized Pareto distribution with tail index `gamma` and scale `sigma`.
///
/// The support is `[0, -sigma/gamma]` for `gamma < 0` and `[0, inf)`
/// otherwise; `gamma = 0` is the exponential distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpdParams {
    gamma: f64,
    sigma: f64,
}

impl GpdParams {
    pub fn new(gamma: f64, sigma: f64) -> Result<Self, DistributionError> {
        if !gamma.is_finite() {
            return Err(DistributionError::InvalidParameter {
                name: "gamma",
                reason: format!("must be finite, got {gamma}"),
            });
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(DistributionError::InvalidParameter {
                name: "sigma",
                reason: format!("must be positive and finite, got {sigma}"),
            });
        }
        Ok(Self { gamma, sigma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Upper endpoint of the support, `-sigma/gamma`, finite iff `gamma < 0`.
    pub fn upper_endpoint(&self) -> Option<f64> {
        (self.gamma < 0.0).then(|| -self.sigma / self.gamma)
    }

    /// Mean, `sigma / (1 - gamma)`, finite iff `gamma < 1`.
    pub fn mean(&self) -> Option<f64> {
        (self.gamma < 1.0).then(|| self.sigma / (1.0 - self.gamma))
    }

    /// Density `sigma^-1 (1 + gamma x / sigma)^-(1 + 1/gamma)` on the
    /// support, 0 outside.
    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 || x.is_nan() {
            return 0.0;
        }
        if self.gamma.abs() < GAMMA_ZERO_EPS {
            return (-x / self.sigma).exp() / self.sigma;
        }
        if let Some(omega) = self.upper_endpoint() {
            if x > omega {
                return 0.0;
            }
        }
        // z >= 0 on the support; clamp guards rounding at the endpoint.
        let z = (1.0 + self.gamma * x / self.sigma).max(0.0);
        z.powf(-(1.0 + 1.0 / self.gamma)) / self.sigma
    }

    /// Distribution function `1 - (1 + gamma x / sigma)^(-1/gamma)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 || x.is_nan() {
            return 0.0;
        }
        if self.gamma.abs() < GAMMA_ZERO_EPS {
            return -(-x / self.sigma).exp_m1();
        }
        if let Some(omega) = self.upper_endpoint() {
            if x >= omega {
                return 1.0;
            }
        }
        // log1p/expm1 route keeps precision for small gamma and small x.
        let w = self.gamma * x / self.sigma;
        -(-w.ln_1p() / self.gamma).exp_m1()
    }

    /// Quantile function `sigma ((1-q)^-gamma - 1) / gamma`.
    ///
    /// `q = 1` is admitted only for `gamma < 0`, where it returns the upper
    /// endpoint.
    pub fn quantile(&self, q: f64) -> Result<f64, DistributionError> {
        if !(0.0..=1.0).contains(&q) {
            return Err(DistributionError::LevelOutOfRange { q });
        }
        if q == 1.0 {
            return self
                .upper_endpoint()
                .ok_or(DistributionError::UnboundedQuantile { gamma: self.gamma });
        }
        let log1mq = (-q).ln_1p();
        if self.gamma.abs() < GAMMA_ZERO_EPS {
            Ok(-self.sigma * log1mq)
        } else {
            Ok(self.sigma * (-self.gamma * log1mq).exp_m1() / self.gamma)
        }
    }

    /// Draws `n` i.i.d. values by inverse transform.
    pub fn sample(&self, n: usize, rng: &mut RngState) -> Vec<f64> {
        (0..n)
            .map(|_| {
                // uniform() is strictly inside (0,1), so the level is valid.
                self.quantile(rng.uniform()).expect("open-interval uniform")
            })
            .collect()
    }
}

/// Generalized extreme value distribution with tail index `gamma`,
/// location 0 and scale 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GevParams {
    gamma: f64,
}

impl GevParams {
    pub fn new(gamma: f64) -> Result<Self, DistributionError> {
        if !gamma.is_finite() {
            return Err(DistributionError::InvalidParameter {
                name: "gamma",
                reason: format!("must be finite, got {gamma}"),
            });
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `exp(-(1 + gamma x)^(-1/gamma))` where `1 + gamma x > 0`, with the
    /// Gumbel limit `exp(-exp(-x))` at `gamma = 0` and the appropriate
    /// boundary value outside.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.gamma.abs() < GAMMA_ZERO_EPS {
            return (-(-x).exp()).exp();
        }
        let z = 1.0 + self.gamma * x;
        if z <= 0.0 {
            // gamma > 0: x is below the lower endpoint; gamma < 0: above the
            // upper endpoint.
            return if self.gamma > 0.0 { 0.0 } else { 1.0 };
        }
        (-z.powf(-1.0 / self.gamma)).exp()
    }
}

/// Beta distribution with shape parameters `theta1, theta2 > 0` on `[0, 1]`.
///
/// Its upper tail behaves like a GPD with tail index `-1/theta2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    theta1: f64,
    theta2: f64,
}

impl BetaParams {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self, DistributionError> {
        for (name, v) in [("theta1", theta1), ("theta2", theta2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(DistributionError::InvalidParameter {
                    name,
                    reason: format!("must be positive and finite, got {v}"),
                });
            }
        }
        Ok(Self { theta1, theta2 })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    /// Tail index of the distribution the normalized maxima converge to,
    /// `-1/theta2`.
    pub fn tail_index(&self) -> f64 {
        -1.0 / self.theta2
    }

    pub fn mean(&self) -> f64 {
        self.theta1 / (self.theta1 + self.theta2)
    }

    /// Draws `n` i.i.d. values as a ratio of two gamma deviates; every value
    /// is strictly inside (0, 1).
    pub fn sample(&self, n: usize, rng: &mut RngState) -> Vec<f64> {
        (0..n)
            .map(|_| loop {
                let g1 = sample_gamma(self.theta1, rng);
                let g2 = sample_gamma(self.theta2, rng);
                let x = g1 / (g1 + g2);
                if x > 0.0 && x < 1.0 {
                    return x;
                }
            })
            .collect()
    }
}

/// Gamma(shape, 1) deviate.
///
/// Shape >= 1 uses the Marsaglia-Tsang squeeze; shape < 1 uses the boost
/// `G(a) = G(a + 1) * U^(1/a)`.
fn sample_gamma(shape: f64, rng: &mut RngState) -> f64 {
    debug_assert!(shape > 0.0);
    if shape < 1.0 {
        return sample_gamma(shape + 1.0, rng) * rng.uniform().powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.uniform();
        if u < 1.0 - 0.0331 * x.powi(4) {
            return d * v;
        }
        if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Qualitative form of the GPD density, independent of the scale parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ShapeClass {
    /// gamma <= -1
    ConvexNonDecreasing,
    /// -1 <= gamma <= -1/2
    ConcaveNonIncreasing,
    /// gamma >= -1/2
    ConvexNonIncreasing,
    /// -1 <= gamma <= 0
    LogConcave,
    /// gamma <= -1 or gamma >= 0
    LogConvex,
}

impl ShapeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ShapeClass::ConvexNonDecreasing => "convex non-decreasing",
            ShapeClass::ConcaveNonIncreasing => "concave non-increasing",
            ShapeClass::ConvexNonIncreasing => "convex non-increasing",
            ShapeClass::LogConcave => "log-concave",
            ShapeClass::LogConvex => "log-convex",
        }
    }
}

/// All shape labels applying to the GPD density with the given tail index.
/// Boundary values belong to every adjacent closed range.
pub fn gpd_shape_class(gamma: f64) -> BTreeSet<ShapeClass> {
    let mut set = BTreeSet::new();
    if gamma <= -1.0 {
        set.insert(ShapeClass::ConvexNonDecreasing);
    }
    if (-1.0..=-0.5).contains(&gamma) {
        set.insert(ShapeClass::ConcaveNonIncreasing);
    }
    if gamma >= -0.5 {
        set.insert(ShapeClass::ConvexNonIncreasing);
    }
    if (-1.0..=0.0).contains(&gamma) {
        set.insert(ShapeClass::LogConcave);
    }
    if gamma <= -1.0 || gamma >= 0.0 {
        set.insert(ShapeClass::LogConvex);
    }
    set
}
