//! Random spherical codebooks, the angle-window quantizer, the joint
//! minimum-distance decoder, and an exact sampler for the quantizer output
//! when the codebook is too large to draw.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::spheregeom::{ln_cosine_band_prob, ln_cosine_density, sample_sphere};

/// Largest codebook index size accepted by [`build_codebook`].
pub const MAX_CODEBOOK_BITS: u64 = 30;
/// Largest number of stored coordinates (words times blocklength).
pub const MAX_CODEBOOK_ENTRIES: u64 = 1 << 26;

/// Codewords drawn uniformly on the sphere of radius
/// `sqrt(n sigma^2 (1 - 2^{-2R}))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub n: usize,
    pub rate: f64,
    pub radius: f64,
    words: Vec<f64>,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.words.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, index: usize) -> &[f64] {
        &self.words[index * self.n..(index + 1) * self.n]
    }

    pub fn words(&self) -> impl Iterator<Item = &[f64]> {
        self.words.chunks_exact(self.n)
    }
}

/// Index size `ceil(n R)` in bits.
pub fn codebook_bits(n: usize, rate: f64) -> u64 {
    // Tolerate rounding in products such as 16 * 0.25.
    (n as f64 * rate - 1e-9).ceil().max(0.0) as u64
}

/// Quantizer codeword radius.
pub fn codeword_radius(n: usize, rate: f64, sigma2: f64) -> f64 {
    (n as f64 * sigma2 * (1.0 - (-2.0 * rate).exp2())).sqrt()
}

/// Draws `2^{ceil(n R)}` independent uniform codewords.
pub fn build_codebook<R: Rng + ?Sized>(
    n: usize,
    rate: f64,
    sigma2: f64,
    rng: &mut R,
) -> Result<Codebook> {
    if n < 2 {
        return Err(Error::OutOfDomain(format!("blocklength {n} must be at least 2")));
    }
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::OutOfDomain(format!("rate {rate} must be nonnegative")));
    }
    let bits = codebook_bits(n, rate);
    if bits > MAX_CODEBOOK_BITS {
        return Err(Error::BudgetExceeded {
            bits,
            limit: MAX_CODEBOOK_BITS,
        });
    }
    let count = 1u64 << bits;
    if count.saturating_mul(n as u64) > MAX_CODEBOOK_ENTRIES {
        return Err(Error::BudgetExceeded {
            bits,
            limit: (MAX_CODEBOOK_ENTRIES / n as u64).max(1).ilog2() as u64,
        });
    }
    let radius = codeword_radius(n, rate, sigma2);
    let mut words = Vec::with_capacity(count as usize * n);
    if radius == 0.0 {
        words.resize(n, 0.0);
    } else {
        for _ in 0..count {
            words.extend(sample_sphere(n, radius, rng));
        }
    }
    Ok(Codebook {
        n,
        rate,
        radius,
        words,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Target cosine `sqrt(1 - 2^{-2R})` between a source block and its codeword.
pub fn target_cosine(rate: f64) -> f64 {
    (1.0 - (-2.0 * rate).exp2()).sqrt()
}

/// Index of the codeword whose angle to `s` is closest to the target angle,
/// among those with cosine within a factor `1 +- epsilon` of the target.
///
/// `None` means encoding failed and the all-zero word is sent. A zero-rate
/// codebook always returns its single (zero) word.
pub fn vq_encode(s: &[f64], cb: &Codebook, epsilon: f64) -> Option<usize> {
    if cb.radius == 0.0 {
        return Some(0);
    }
    let s_norm = norm(s);
    if s_norm == 0.0 {
        return None;
    }
    let target = target_cosine(cb.rate);
    let window = epsilon * target;
    let scale = 1.0 / (s_norm * cb.radius);
    let mut best: Option<(usize, f64)> = None;
    for (i, u) in cb.words().enumerate() {
        let gap = (dot(s, u) * scale - target).abs();
        if gap <= window && best.is_none_or(|(_, g)| gap < g) {
            best = Some((i, gap));
        }
    }
    best.map(|(i, _)| i)
}

/// Minimum-distance joint decoder over codeword pairs whose cosine is within
/// `7 epsilon` of `rho_tilde`; `None` is the all-zero decision when no pair
/// qualifies. `g1`, `g2` are the gains the codewords arrive with.
pub fn vq_joint_decode(
    y: &[f64],
    cb1: &Codebook,
    cb2: &Codebook,
    g1: f64,
    g2: f64,
    rho_tilde: f64,
    epsilon: f64,
) -> Option<(usize, usize)> {
    let yu1: Vec<f64> = cb1.words().map(|u| dot(y, u)).collect();
    let yu2: Vec<f64> = cb2.words().map(|u| dot(y, u)).collect();
    let (r1, r2) = (cb1.radius, cb2.radius);
    let base = g1 * g1 * r1 * r1 + g2 * g2 * r2 * r2;
    let mut best: Option<((usize, usize), f64)> = None;
    for (i, u1) in cb1.words().enumerate() {
        for (j, u2) in cb2.words().enumerate() {
            let inner = dot(u1, u2);
            let cos = if r1 > 0.0 && r2 > 0.0 {
                inner / (r1 * r2)
            } else {
                0.0
            };
            if (rho_tilde - cos).abs() > 7.0 * epsilon {
                continue;
            }
            // |y - g1 u1 - g2 u2|^2 without the constant |y|^2.
            let dist = base - 2.0 * (g1 * yu1[i] + g2 * yu2[j]) + 2.0 * g1 * g2 * inner;
            if best.is_none_or(|(_, d)| dist < d) {
                best = Some(((i, j), dist));
            }
        }
    }
    best.map(|(pair, _)| pair)
}

/// Draws the quantizer output for `s` with the exact law it has under a
/// fresh codebook of `2^{ceil(n R)}` uniform words, without drawing the
/// codebook. `None` is an encoding failure.
///
/// The cosines of the words with `s` are i.i.d., so the smallest distance
/// `d` to the target cosine has `P(d* > d) = (1 - q(d))^M`, where `q(d)` is
/// the probability of the band `[target - d, target + d]`. Inverting this at
/// a uniform draw gives `d*`; the side is picked in proportion to the
/// cosine density, and the orthogonal part is uniform.
pub fn sample_selected_codeword<R: Rng + ?Sized>(
    s: &[f64],
    rate: f64,
    sigma2: f64,
    epsilon: f64,
    rng: &mut R,
) -> Option<Vec<f64>> {
    let n = s.len();
    let radius = codeword_radius(n, rate, sigma2);
    if radius == 0.0 {
        return Some(vec![0.0; n]);
    }
    let s_norm = norm(s);
    if s_norm == 0.0 {
        return None;
    }
    let target = target_cosine(rate);
    let ln_words = codebook_bits(n, rate) as f64 * std::f64::consts::LN_2;

    let v: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    // q* = 1 - V^{1/M}, in log scale.
    let ln_q_star = if ln_words < 30.0 {
        (-(v.ln() * (-ln_words).exp()).exp_m1()).ln()
    } else {
        (-v.ln()).ln() - ln_words
    };
    let ln_q = |d: f64| ln_cosine_band_prob(n, target - d, target + d);
    let window = epsilon * target;
    if ln_q(window) < ln_q_star {
        return None;
    }
    let (mut lo, mut hi) = (0.0, window);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ln_q(mid) < ln_q_star {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let d = 0.5 * (lo + hi);
    let below = target - d;
    let above = target + d;
    let t = if above >= 1.0 {
        below
    } else {
        let (fb, fa) = (ln_cosine_density(n, below), ln_cosine_density(n, above));
        let p_below = 1.0 / (1.0 + (fa - fb).exp());
        if rng.random::<f64>() < p_below {
            below
        } else {
            above
        }
    };

    // Uniform direction orthogonal to s.
    let unit: Vec<f64> = s.iter().map(|x| x / s_norm).collect();
    let ortho = loop {
        let mut g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let proj = dot(&g, &unit);
        g.iter_mut().zip(&unit).for_each(|(x, e)| *x -= proj * e);
        let g_norm = norm(&g);
        if g_norm > 0.0 {
            g.iter_mut().for_each(|x| *x /= g_norm);
            break g;
        }
    };
    let sin = (1.0 - t * t).max(0.0).sqrt();
    Some(
        unit.iter()
            .zip(&ortho)
            .map(|(e, o)| radius * (t * e + sin * o))
            .collect(),
    )
}
