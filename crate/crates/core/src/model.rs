//! Domain types shared by every other module: the normalized source, the
//! MAC, distortion and rate pairs, the Reduction-style source normalization
//! and the time-sharing combination of two operating points.

use std::fmt;

use crate::error::{Error, Result};

/// Memoryless bivariate Gaussian source with equal component variances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    sigma2: f64,
    rho: f64,
}

impl SourceParams {
    /// `rho` must lie in `[0, 1)`; negative correlations are folded in by
    /// [`normalize_source`].
    pub fn new(sigma2: f64, rho: f64) -> Result<Self> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::NonPositiveVariance(sigma2));
        }
        if rho == 1.0 {
            return Err(Error::DegenerateCorrelation);
        }
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidCorrelation(rho));
        }
        Ok(Self { sigma2, rho })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `sigma^2 (1 - rho^2)`, the conditional variance of one component given the other.
    pub fn conditional_variance(&self) -> f64 {
        self.sigma2 * (1.0 - self.rho * self.rho)
    }
}

/// Record needed to map normalized distortions back to the original source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleBack {
    pub alpha1: f64,
    pub alpha2: f64,
    pub rho_sign: i8,
}

impl ScaleBack {
    pub const IDENTITY: ScaleBack = ScaleBack {
        alpha1: 1.0,
        alpha2: 1.0,
        rho_sign: 1,
    };
}

/// Two-user Gaussian MAC `Y = X1 + X2 + Z`, `Z ~ N(0, noise)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacChannel {
    p1: f64,
    p2: f64,
    noise: f64,
}

impl MacChannel {
    pub fn new(p1: f64, p2: f64, noise: f64) -> Result<Self> {
        for (name, value) in [("p1", p1), ("p2", p2), ("noise", noise)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidChannel { name, value });
            }
        }
        Ok(Self { p1, p2, noise })
    }

    /// Symmetric channel `P1 = P2 = p`.
    pub fn symmetric(p: f64, noise: f64) -> Result<Self> {
        Self::new(p, p, noise)
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    /// Received signal power when the inputs carry correlation `rho`:
    /// `P1 + P2 + 2 rho sqrt(P1 P2)`.
    pub fn coherent_power(&self, rho: f64) -> f64 {
        self.p1 + self.p2 + 2.0 * rho * (self.p1 * self.p2).sqrt()
    }
}

/// Expected squared-error distortions on the two source components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionPair {
    pub d1: f64,
    pub d2: f64,
}

impl DistortionPair {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        if !(d1 >= 0.0 && d1.is_finite() && d2 >= 0.0 && d2.is_finite()) {
            return Err(Error::OutOfDomain(format!(
                "distortions must be finite and nonnegative, got ({d1}, {d2})"
            )));
        }
        Ok(Self { d1, d2 })
    }

    pub fn symmetric(d: f64) -> Result<Self> {
        Self::new(d, d)
    }
}

/// Rates in bits per source symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1 >= 0.0 && r1.is_finite() && r2 >= 0.0 && r2.is_finite()) {
            return Err(Error::OutOfDomain(format!(
                "rates must be finite and nonnegative, got ({r1}, {r2})"
            )));
        }
        Ok(Self { r1, r2 })
    }

    pub fn symmetric(r: f64) -> Result<Self> {
        Self::new(r, r)
    }
}

/// A real value that may be `+inf`; rendered as `inf` in text output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    /// Lossy conversion for arithmetic comparisons.
    pub fn to_f64(&self) -> f64 {
        match *self {
            Extended::Finite(v) => v,
            Extended::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// Maps a general source `(sigma1^2, sigma2^2, rho_raw)` to the equal-variance,
/// nonnegative-correlation form. The second component is rescaled to the
/// first component's variance.
pub fn normalize_source(
    sigma1_sq: f64,
    sigma2_sq: f64,
    rho_raw: f64,
) -> Result<(SourceParams, ScaleBack)> {
    for v in [sigma1_sq, sigma2_sq] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveVariance(v));
        }
    }
    if !rho_raw.is_finite() || rho_raw.abs() > 1.0 {
        return Err(Error::InvalidCorrelation(rho_raw));
    }
    if rho_raw.abs() == 1.0 {
        return Err(Error::DegenerateCorrelation);
    }
    let src = SourceParams::new(sigma1_sq, rho_raw.abs())?;
    let sb = ScaleBack {
        alpha1: 1.0,
        alpha2: sigma1_sq / sigma2_sq,
        rho_sign: if rho_raw < 0.0 { -1 } else { 1 },
    };
    Ok((src, sb))
}

/// Inverse of the variance scaling applied by [`normalize_source`].
pub fn denormalize_distortions(pair: DistortionPair, sb: ScaleBack) -> DistortionPair {
    DistortionPair {
        d1: pair.d1 / sb.alpha1,
        d2: pair.d2 / sb.alpha2,
    }
}

/// Convex combination `lambda * first + (1 - lambda) * second` of two
/// operating points (distortions and powers) sharing the same noise.
pub fn timeshare(
    first: (DistortionPair, MacChannel),
    second: (DistortionPair, MacChannel),
    lambda: f64,
) -> Result<(DistortionPair, MacChannel)> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfDomain(format!("lambda = {lambda} not in [0, 1]")));
    }
    let (da, ca) = first;
    let (db, cb) = second;
    if ca.noise != cb.noise {
        return Err(Error::MismatchedNoise(ca.noise, cb.noise));
    }
    let mix = |x: f64, y: f64| lambda * x + (1.0 - lambda) * y;
    let d = DistortionPair {
        d1: mix(da.d1, db.d1),
        d2: mix(da.d2, db.d2),
    };
    let ch = MacChannel {
        p1: mix(ca.p1, cb.p1),
        p2: mix(ca.p2, cb.p2),
        noise: ca.noise,
    };
    Ok((d, ch))
}
