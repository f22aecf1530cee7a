//! Geometry on the `n`-sphere: uniform sampling, polar-cap area bounds, the
//! law of the angle between a fixed direction and a uniform point, and the
//! ratio `Gamma(x + 1/2) / Gamma(x)`.

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Uniform point on the centred sphere of the given radius in `R^n`.
pub fn sample_sphere<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> Vec<f64> {
    assert!(n >= 2, "sphere dimension must be at least 2");
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            let scale = radius / norm;
            v.iter_mut().for_each(|x| *x *= scale);
            return v;
        }
    }
}

/// Shannon's bounds on the fraction of the sphere covered by a polar cap of
/// half-angle `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapBounds {
    pub n: usize,
    pub phi: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Bounds on `C_n(phi) / C_n(pi)` for `0 < phi < pi/2`.
pub fn cap_ratio_bounds(n: usize, phi: f64) -> Result<CapBounds> {
    if n < 2 {
        return Err(Error::OutOfDomain(format!("dimension {n} must be at least 2")));
    }
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return Err(Error::OutOfDomain(format!("half-angle {phi} must lie in (0, pi/2)")));
    }
    let nf = n as f64;
    let ln_upper = ln_gamma(nf / 2.0 + 1.0) + (nf - 1.0) * phi.sin().ln()
        - nf.ln()
        - ln_gamma((nf + 1.0) / 2.0)
        - 0.5 * PI.ln()
        - phi.cos().ln();
    let raw = ln_upper.exp();
    let tan = phi.tan();
    let lower = (raw * (1.0 - tan * tan / nf)).max(0.0);
    Ok(CapBounds {
        n,
        phi,
        lower: lower.min(1.0),
        upper: raw.min(1.0),
    })
}

/// Exact `C_n(phi) / C_n(pi)` through the regularized incomplete beta
/// function.
pub fn cap_fraction_exact(n: usize, phi: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::OutOfDomain(format!("dimension {n} must be at least 2")));
    }
    if !(phi > 0.0 && phi <= PI) {
        return Err(Error::OutOfDomain(format!("half-angle {phi} must lie in (0, pi]")));
    }
    let nf = n as f64;
    let s2 = phi.sin().powi(2);
    let half = 0.5 * beta_reg((nf - 1.0) / 2.0, 0.5, s2);
    Ok(if phi <= FRAC_PI_2 { half } else { 1.0 - half })
}

/// Log-density of the cosine of the angle between a fixed unit vector and a
/// uniform point on the sphere in `R^n`, at `t` in `(-1, 1)`.
pub fn ln_cosine_density(n: usize, t: f64) -> f64 {
    let nf = n as f64;
    ln_gamma(nf / 2.0) - ln_gamma((nf - 1.0) / 2.0) - 0.5 * PI.ln()
        + 0.5 * (nf - 3.0) * (1.0 - t * t).ln()
}

const GAUSS_LEGENDRE_8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Natural log of the probability that the cosine between a fixed unit
/// vector and a uniform point on the sphere in `R^n` lies in `[lo, hi]`.
///
/// Stays accurate when the probability underflows `f64`; returns negative
/// infinity for an empty interval.
pub fn ln_cosine_band_prob(n: usize, lo: f64, hi: f64) -> f64 {
    let lo = lo.max(-1.0);
    let hi = hi.min(1.0);
    if !(hi > lo) {
        return f64::NEG_INFINITY;
    }
    let edge = lo.abs().max(hi.abs());
    // Panels sized so the log-density changes by O(1) across each.
    let slope = if edge < 1.0 {
        n as f64 * edge / (1.0 - edge * edge)
    } else {
        f64::INFINITY
    };
    let panels = (4.0 + slope * (hi - lo)).min(8192.0).ceil() as usize;
    let width = (hi - lo) / panels as f64;
    let mut values = Vec::with_capacity(panels * 8);
    for k in 0..panels {
        let mid = lo + (k as f64 + 0.5) * width;
        for &(x, w) in &GAUSS_LEGENDRE_8 {
            for t in [mid - 0.5 * width * x, mid + 0.5 * width * x] {
                values.push((ln_cosine_density(n, t), w));
            }
        }
    }
    let top = values
        .iter()
        .map(|v| v.0)
        .fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return top;
    }
    let sum: f64 = values.iter().map(|&(v, w)| w * (v - top).exp()).sum();
    top + (0.5 * width * sum).ln()
}

const SERIES_SWITCH: f64 = 5.0;

/// Asymptotic series of `Gamma(x + 1/2) / Gamma(x)`.
pub fn gamma_half_ratio_series(x: f64) -> f64 {
    let y = 1.0 / x;
    let poly = 1.0 - y / 8.0 + y * y / 128.0 + 5.0 * y.powi(3) / 1024.0
        - 21.0 * y.powi(4) / 32768.0
        - 399.0 * y.powi(5) / 262144.0;
    x.sqrt() * poly
}

/// `Gamma(x + 1/2) / Gamma(x)`: asymptotic series for `x >= 5`, log-gamma
/// below.
pub fn gamma_half_ratio(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::OutOfDomain(format!("argument {x} must be positive")));
    }
    if x >= SERIES_SWITCH {
        Ok(gamma_half_ratio_series(x))
    } else {
        Ok((ln_gamma(x + 0.5) - ln_gamma(x)).exp())
    }
}
