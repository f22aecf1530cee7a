//! Distortions and rate constraints of the transmission schemes: uncoded
//! (point-to-point and over the MAC), vector quantizer, and superposition of
//! the two.
//!
//! Achievability regions are open; every distortion returned here is the
//! infimum approached by the scheme.

use crate::error::{Error, Result};
use crate::model::{DistortionPair, Extended, MacChannel, RatePair, SourceParams};

/// Smallest rate accepted by [`sp_derive`]; `K` is singular at zero rate.
pub const R_MIN: f64 = 1e-6;

/// Residual bound for the `K gamma = c` solve.
const SOLVE_RESIDUAL: f64 = 1e-10;

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidChannel { name, value })
    }
}

/// Distortions of sending `alpha S1 + beta S2` over a point-to-point AWGN
/// channel of power `p` and noise `noise`, with MMSE estimation of each
/// component.
pub fn pt2pt_uncoded(
    alpha: f64,
    beta: f64,
    src: &SourceParams,
    p: f64,
    noise: f64,
) -> Result<DistortionPair> {
    if alpha < 0.0 || beta < 0.0 {
        return Err(Error::OutOfDomain(format!(
            "weights must be nonnegative, got ({alpha}, {beta})"
        )));
    }
    if alpha == 0.0 && beta == 0.0 {
        return Err(Error::ZeroInput);
    }
    check_positive("power", p)?;
    check_positive("noise", noise)?;
    let s = src.sigma2();
    let rho = src.rho();
    let r2 = rho * rho;
    let scale = alpha * alpha + 2.0 * rho * alpha * beta + beta * beta;
    let denom = (p + noise) * (p + noise) * scale;
    // D1 with weights (a, b); D2 is the same expression with the weights swapped.
    let dist = |a: f64, b: f64| {
        s * (p * p * b * b * (1.0 - r2)
            + p * noise * (a * a + 2.0 * rho * a * b + b * b * (2.0 - r2))
            + noise * noise * scale)
            / denom
    };
    Ok(DistortionPair {
        d1: dist(alpha, beta),
        d2: dist(beta, alpha),
    })
}

/// SNR below which uncoded transmission achieves `d1` optimally on the
/// point-to-point channel; infinite once `d1 >= sigma^2 (1 - rho^2)`.
pub fn pt2pt_threshold_gamma(d1: f64, src: &SourceParams) -> Result<Extended> {
    if !(d1 > 0.0) {
        return Err(Error::OutOfDomain(format!("distortion {d1} must be positive")));
    }
    let s = src.sigma2();
    let cond = src.conditional_variance();
    if d1 >= cond {
        return Ok(Extended::Infinite);
    }
    let num = s * cond - 2.0 * d1 * cond + d1 * d1;
    Ok(Extended::Finite(num / (d1 * (cond - d1))))
}

/// Distortions of the uncoded MAC scheme: each sender scales its sample to
/// full power and the receiver forms the MMSE estimates.
pub fn mac_uncoded(src: &SourceParams, ch: &MacChannel) -> DistortionPair {
    let s = src.sigma2();
    let r2 = src.rho() * src.rho();
    let total = ch.coherent_power(src.rho()) + ch.noise();
    DistortionPair {
        d1: s * ((1.0 - r2) * ch.p2() + ch.noise()) / total,
        d2: s * ((1.0 - r2) * ch.p1() + ch.noise()) / total,
    }
}

/// Whether the uncoded MAC distortions are optimal, with the slack of the
/// defining inequality (nonnegative exactly when optimal).
pub fn mac_uncoded_is_optimal(src: &SourceParams, ch: &MacChannel) -> (bool, f64) {
    let rho = src.rho();
    let one_m = 1.0 - rho * rho;
    let (p1, p2, n) = (ch.p1(), ch.p2(), ch.noise());
    let lhs = p2 * one_m * one_m * (p1 + 2.0 * rho * (p1 * p2).sqrt());
    let rhs = n * rho * rho * (2.0 * p2 * one_m + n);
    let slack = rhs - lhs;
    (slack >= 0.0 && rho > 0.0, slack)
}

/// Asymptotic correlation of the two quantizer codewords.
pub fn rho_tilde(r: RatePair, rho: f64) -> f64 {
    rho * ((1.0 - (-2.0 * r.r1).exp2()) * (1.0 - (-2.0 * r.r2).exp2())).sqrt()
}

/// Distortions of the vector-quantizer scheme at rates `r`.
pub fn vq_distortions(r: RatePair, src: &SourceParams) -> DistortionPair {
    let s = src.sigma2();
    let rho = src.rho();
    let rt = rho_tilde(r, rho);
    let q1 = (-2.0 * r.r1).exp2();
    let q2 = (-2.0 * r.r2).exp2();
    let denom = 1.0 - rt * rt;
    DistortionPair {
        d1: s * q1 * (1.0 - rho * rho * (1.0 - q2)) / denom,
        d2: s * q2 * (1.0 - rho * rho * (1.0 - q1)) / denom,
    }
}

/// Slack of each strict rate inequality (bound minus rate), ordered
/// `[R1, R2, R1 + R2]`.
pub type RateSlacks = [f64; 3];

/// Whether `r` satisfies the three rate constraints of the vector-quantizer
/// scheme on channel `ch`.
pub fn vq_rate_feasible(r: RatePair, src: &SourceParams, ch: &MacChannel) -> (bool, RateSlacks) {
    let rt = rho_tilde(r, src.rho());
    let n = ch.noise();
    let one_m = 1.0 - rt * rt;
    let (p1, p2) = (ch.p1(), ch.p2());
    let c1 = 0.5 * ((p1 * one_m + n) / (n * one_m)).log2();
    let c2 = 0.5 * ((p2 * one_m + n) / (n * one_m)).log2();
    let csum = 0.5 * ((p1 + p2 + 2.0 * rt * (p1 * p2).sqrt() + n) / (n * one_m)).log2();
    let slacks = [c1 - r.r1, c2 - r.r2, csum - r.r1 - r.r2];
    (slacks.iter().all(|&x| x > 0.0), slacks)
}

/// Codeword correlation, channel scalings and estimator weights of the
/// vector-quantizer scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VqDerived {
    pub rho_tilde: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma11: f64,
    pub gamma12: f64,
    pub gamma21: f64,
    pub gamma22: f64,
}

/// Channel scaling that brings a codeword of variance `sigma^2 (1 - 2^{-2R})`
/// to power `p`; zero at zero rate, where the codeword is the origin.
fn vq_scaling(p: f64, rate: f64, sigma2: f64) -> f64 {
    let var = sigma2 * (1.0 - (-2.0 * rate).exp2());
    if var > 0.0 {
        (p / var).sqrt()
    } else {
        0.0
    }
}

/// Estimator weights `S_i ~ gamma_i1 U1 + gamma_i2 U2` and channel scalings
/// of the vector-quantizer scheme.
pub fn vq_estimator_coeffs(r: RatePair, src: &SourceParams, ch: &MacChannel) -> VqDerived {
    let rho = src.rho();
    let rt = rho_tilde(r, rho);
    let q1 = (-2.0 * r.r1).exp2();
    let q2 = (-2.0 * r.r2).exp2();
    let one_m = 1.0 - rt * rt;
    VqDerived {
        rho_tilde: rt,
        alpha1: vq_scaling(ch.p1(), r.r1, src.sigma2()),
        alpha2: vq_scaling(ch.p2(), r.r2, src.sigma2()),
        gamma11: (1.0 - rho * rho * (1.0 - q2)) / one_m,
        gamma12: rho * q1,
        gamma21: rho * q2,
        gamma22: (1.0 - rho * rho * (1.0 - q1)) / one_m,
    }
}

/// Asymptotic mean squared error of the linear estimates built from `coeffs`
/// when the codewords have the asymptotic second moments at rates `r`.
pub fn vq_estimator_mse(coeffs: &VqDerived, r: RatePair, src: &SourceParams) -> DistortionPair {
    let s = src.sigma2();
    let rho = src.rho();
    let k11 = s * (1.0 - (-2.0 * r.r1).exp2());
    let k22 = s * (1.0 - (-2.0 * r.r2).exp2());
    let k12 = rho * k11 * k22 / s;
    // E[S1 U1] = k11, E[S1 U2] = rho k22, E[S2 U1] = rho k11, E[S2 U2] = k22.
    // Weight g_own on the own codeword (variance k_own), g_other on the other.
    let mse = |g_own: f64, g_other: f64, k_own: f64, k_other: f64| {
        s - 2.0 * (g_own * k_own + g_other * rho * k_other)
            + g_own * g_own * k_own
            + 2.0 * g_own * g_other * k12
            + g_other * g_other * k_other
    };
    DistortionPair {
        d1: mse(coeffs.gamma11, coeffs.gamma12, k11, k22),
        d2: mse(coeffs.gamma22, coeffs.gamma21, k22, k11),
    }
}

/// Rates and direct-path gains of the superposition scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionConfig {
    pub r1: f64,
    pub r2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl SuperpositionConfig {
    pub fn symmetric(rate: f64, alpha: f64) -> Self {
        Self {
            r1: rate,
            r2: rate,
            alpha1: alpha,
            alpha2: alpha,
        }
    }
}

/// Everything derived from a [`SuperpositionConfig`]: codeword gains, the
/// covariance `K` of `(U1, U2, Y)`, the cross-covariances `c_i` with `S_i`,
/// the estimator weights, and the effective decoding channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionDerived {
    pub cfg: SuperpositionConfig,
    pub beta1: f64,
    pub beta2: f64,
    pub rho_tilde: f64,
    pub a1: f64,
    pub a2: f64,
    pub beta1p: f64,
    pub beta2p: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub nu3: f64,
    pub n_prime: f64,
    pub k: [[f64; 3]; 3],
    pub c1: [f64; 3],
    pub c2: [f64; 3],
    pub gamma1: [f64; 3],
    pub gamma2: [f64; 3],
}

/// Solves a 3x3 system by Gaussian elimination with partial pivoting and
/// verifies the residual.
pub fn solve3(k: &[[f64; 3]; 3], c: &[f64; 3]) -> Result<[f64; 3]> {
    let mut m = [[0.0; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&k[i]);
        m[i][3] = c[i];
    }
    let scale = k
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if !(scale > 0.0) {
        return Err(Error::SingularK);
    }
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("nonempty range");
        if m[pivot][col].abs() <= 1e-14 * scale {
            return Err(Error::SingularK);
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for j in col..4 {
                m[row][j] -= f * m[col][j];
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let tail: f64 = (i + 1..3).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][3] - tail) / m[i][i];
    }
    let residual = (0..3)
        .map(|i| {
            let r: f64 = (0..3).map(|j| k[i][j] * x[j]).sum::<f64>() - c[i];
            r * r
        })
        .sum::<f64>()
        .sqrt();
    let c_norm = c.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    if !(residual <= SOLVE_RESIDUAL * c_norm) {
        return Err(Error::SingularK);
    }
    Ok(x)
}

/// Residual norm `|K gamma - c|`.
pub fn residual3(k: &[[f64; 3]; 3], gamma: &[f64; 3], c: &[f64; 3]) -> f64 {
    (0..3)
        .map(|i| {
            let r: f64 = (0..3).map(|j| k[i][j] * gamma[j]).sum::<f64>() - c[i];
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Largest admissible direct-path gain for power `p`.
pub fn sp_alpha_max(p: f64, sigma2: f64) -> f64 {
    (p / sigma2).sqrt()
}

fn codeword_gain(index: usize, alpha: f64, p: f64, q: f64, s: f64) -> Result<f64> {
    let max = sp_alpha_max(p, s);
    if !(alpha >= 0.0) || alpha > max * (1.0 + 1e-12) {
        return Err(Error::InfeasibleAlpha { index, alpha, max });
    }
    let alpha = alpha.min(max);
    let radicand = ((p - alpha * alpha * s * q) / (s * (1.0 - q))).max(0.0);
    Ok((radicand.sqrt() - alpha).max(0.0))
}

/// Derives every quantity of the superposition scheme for `cfg`.
pub fn sp_derive(
    cfg: SuperpositionConfig,
    src: &SourceParams,
    ch: &MacChannel,
) -> Result<SuperpositionDerived> {
    if !(cfg.r1 >= R_MIN && cfg.r2 >= R_MIN) || !cfg.r1.is_finite() || !cfg.r2.is_finite() {
        return Err(Error::SingularK);
    }
    let s = src.sigma2();
    let rho = src.rho();
    let n = ch.noise();
    let (al1, al2) = (cfg.alpha1, cfg.alpha2);
    let q1 = (-2.0 * cfg.r1).exp2();
    let q2 = (-2.0 * cfg.r2).exp2();
    let (aa1, aa2) = (1.0 - q1, 1.0 - q2);
    let b1 = codeword_gain(1, al1, ch.p1(), q1, s)?;
    let b2 = codeword_gain(2, al2, ch.p2(), q2, s)?;

    let k11 = s * aa1;
    let k12 = s * rho * aa1 * aa2;
    let k13 = (al1 + b1 + al2 * rho) * k11 + b2 * k12;
    let k22 = s * aa2;
    let k23 = (al2 + b2 + al1 * rho) * k22 + b1 * k12;
    let k33 = al1 * al1 * s
        + 2.0 * al1 * b1 * k11
        + 2.0 * al1 * al2 * rho * s
        + 2.0 * al1 * b2 * rho * k22
        + b1 * b1 * k11
        + 2.0 * b1 * al2 * rho * k11
        + 2.0 * b1 * b2 * k12
        + 2.0 * al2 * b2 * k22
        + al2 * al2 * s
        + b2 * b2 * k22
        + n;
    let k = [[k11, k12, k13], [k12, k22, k23], [k13, k23, k33]];
    let c1 = [
        k11,
        rho * k22,
        (al1 + al2 * rho) * s + b1 * k11 + b2 * rho * k22,
    ];
    let c2 = [
        rho * k11,
        k22,
        (al2 + al1 * rho) * s + b1 * rho * k11 + b2 * k22,
    ];
    let gamma1 = solve3(&k, &c1)?;
    let gamma2 = solve3(&k, &c2)?;

    let rt = rho * (aa1 * aa2).sqrt();
    let rt2 = rt * rt;
    let cross = 2.0 * rt2 * (aa1 * aa2).sqrt();
    let a1 = rho * q1 * aa2 / (aa2 - cross + rt2 * aa1);
    let a2 = rho * q2 * aa1 / (aa1 - cross + rt2 * aa2);
    let beta1p = al1 * (1.0 - a1 * rt) + b1 + al2 * a2;
    let beta2p = al2 * (1.0 - a2 * rt) + b2 + al1 * a1;
    let (m1, m2) = (1.0 - a1 * rt, 1.0 - a2 * rt);
    let nu1 = s - m1 * m1 * k11 - 2.0 * m1 * a1 * k12 - a1 * a1 * k22;
    let nu2 = s - m2 * m2 * k22 - 2.0 * m2 * a2 * k12 - a2 * a2 * k11;
    let nu3 = rho * s - (m1 * m2 + a1 * a2) * k12 - m1 * a2 * k11 - m2 * a1 * k22;
    let n_prime = al1 * al1 * nu1 + al2 * al2 * nu2 + 2.0 * al1 * al2 * nu3 + n;

    Ok(SuperpositionDerived {
        cfg,
        beta1: b1,
        beta2: b2,
        rho_tilde: rt,
        a1,
        a2,
        beta1p,
        beta2p,
        nu1,
        nu2,
        nu3,
        n_prime,
        k,
        c1,
        c2,
        gamma1,
        gamma2,
    })
}

/// Distortions `sigma^2 - gamma_i . c_i` of the superposition scheme.
pub fn sp_distortions(derived: &SuperpositionDerived, src: &SourceParams) -> DistortionPair {
    let dot = |g: &[f64; 3], c: &[f64; 3]| g.iter().zip(c).map(|(a, b)| a * b).sum::<f64>();
    let s = src.sigma2();
    DistortionPair {
        d1: s - dot(&derived.gamma1, &derived.c1),
        d2: s - dot(&derived.gamma2, &derived.c2),
    }
}

/// Whether the rates of `derived` satisfy the superposition rate
/// constraints, with slacks ordered `[R1, R2, R1 + R2]`.
pub fn sp_rate_feasible(derived: &SuperpositionDerived, _src: &SourceParams) -> (bool, RateSlacks) {
    let d = derived;
    let rt = d.rho_tilde;
    let one_m = 1.0 - rt * rt;
    let np = d.n_prime;
    let (k11, k22) = (d.k[0][0], d.k[1][1]);
    let g1 = d.beta1p * d.beta1p * k11;
    let g2 = d.beta2p * d.beta2p * k22;
    let c1 = 0.5 * ((g1 * one_m + np) / (np * one_m)).log2();
    let c2 = 0.5 * ((g2 * one_m + np) / (np * one_m)).log2();
    let csum = 0.5
        * ((g1 + g2 + 2.0 * rt * d.beta1p * d.beta2p * (k11 * k22).sqrt() + np) / (np * one_m))
            .log2();
    let slacks = [c1 - d.cfg.r1, c2 - d.cfg.r2, csum - d.cfg.r1 - d.cfg.r2];
    (slacks.iter().all(|&x| x > 0.0), slacks)
}
