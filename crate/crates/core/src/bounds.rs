//! Converse bounds and benchmark curves: the necessary condition, the
//! separation region, symmetric closed forms, the symmetric optimizers of the
//! vector-quantizer and superposition schemes, and high-SNR asymptotics.

use crate::error::{Error, Result};
use crate::model::{DistortionPair, MacChannel, RatePair, SourceParams};
use crate::ratedist::rd_rate;
use crate::schemes::{
    sp_alpha_max, sp_derive, sp_distortions, sp_rate_feasible, SuperpositionConfig, R_MIN,
};

/// Slack below which an equality of rates is accepted as satisfied.
const RATE_TOL: f64 = 1e-12;

fn log2_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.log2()
    } else {
        0.0
    }
}

/// Checks `R(D1, D2) <= 1/2 log2(1 + (P1 + P2 + 2 rho sqrt(P1 P2)) / N)`.
///
/// Returns whether it holds and the slack (capacity minus rate). Equality up
/// to a relative `1e-12` counts as satisfied.
pub fn necessary_condition(
    d: DistortionPair,
    src: &SourceParams,
    ch: &MacChannel,
) -> Result<(bool, f64)> {
    let rate = rd_rate(d, src)?;
    let cap = 0.5 * (1.0 + ch.coherent_power(src.rho()) / ch.noise()).log2();
    let slack = cap - rate;
    Ok((slack >= -RATE_TOL * cap.max(1.0), slack))
}

/// Smallest symmetric distortion allowed by the necessary condition.
pub fn lower_bound_sym(src: &SourceParams, p: f64, noise: f64) -> f64 {
    let s = src.sigma2();
    let rho = src.rho();
    let one_m = 1.0 - rho * rho;
    let total = 2.0 * p * (1.0 + rho) + noise;
    if p / noise <= rho / one_m {
        s * (p * one_m + noise) / total
    } else {
        s * (one_m * noise / total).sqrt()
    }
}

/// Minimum rates of the Gaussian two-terminal source coding region at a
/// given rate pair, for unit-variance components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OohamaCheck {
    pub beta_d: f64,
    pub r1_min: f64,
    pub r2_min: f64,
    pub rsum_min: f64,
}

impl OohamaCheck {
    /// Slacks `[R1 - r1_min, R2 - r2_min, R1 + R2 - rsum_min]`.
    pub fn slacks(&self, r: RatePair) -> [f64; 3] {
        [
            r.r1 - self.r1_min,
            r.r2 - self.r2_min,
            r.r1 + r.r2 - self.rsum_min,
        ]
    }
}

/// Evaluates the two-terminal region thresholds at `r` for unit-variance
/// sources; `d` must already be divided by `sigma^2`.
pub fn oohama_check(r: RatePair, d: DistortionPair, rho: f64) -> Result<OohamaCheck> {
    if !(d.d1 > 0.0 && d.d2 > 0.0) {
        return Err(Error::OutOfDomain(format!(
            "distortions must be positive, got ({}, {})",
            d.d1, d.d2
        )));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidCorrelation(rho));
    }
    if !(r.r1 >= 0.0 && r.r2 >= 0.0) {
        return Err(Error::OutOfDomain(format!(
            "rates must be nonnegative, got ({}, {})",
            r.r1, r.r2
        )));
    }
    let r2 = rho * rho;
    let one_m = 1.0 - r2;
    let beta_d = 1.0 + (1.0 + 4.0 * r2 * d.d1 * d.d2 / (one_m * one_m)).sqrt();
    Ok(OohamaCheck {
        beta_d,
        r1_min: 0.5 * log2_plus((1.0 - r2 * (1.0 - (-2.0 * r.r2).exp2())) / d.d1),
        r2_min: 0.5 * log2_plus((1.0 - r2 * (1.0 - (-2.0 * r.r1).exp2())) / d.d2),
        rsum_min: 0.5 * log2_plus(one_m * beta_d / (2.0 * d.d1 * d.d2)),
    })
}

/// Outcome of the separation feasibility search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub witness: Option<RatePair>,
    pub slacks: [f64; 3],
}

const SEPARATION_GRID: usize = 2048;

/// Whether `d` is achievable by quantizing each component separately
/// (two-terminal source coding) and sending the indices with a capacity-
/// achieving MAC code for independent inputs.
///
/// Scans the dominant face of the MAC capacity region, where the rate pair
/// is largest, and maximizes the smallest source-coding slack along it.
pub fn separation_feasible(
    d: DistortionPair,
    src: &SourceParams,
    ch: &MacChannel,
) -> Result<FeasibilityReport> {
    let s = src.sigma2();
    let rho = src.rho();
    let dn = DistortionPair {
        d1: d.d1 / s,
        d2: d.d2 / s,
    };
    let n = ch.noise();
    let c1 = 0.5 * (1.0 + ch.p1() / n).log2();
    let c2 = 0.5 * (1.0 + ch.p2() / n).log2();
    let csum = 0.5 * (1.0 + (ch.p1() + ch.p2()) / n).log2();
    let r1_lo = (csum - c2).max(0.0);
    let r1_hi = c1.min(csum);

    let eval = |r1: f64| -> Result<(f64, RatePair, [f64; 3])> {
        let r = RatePair {
            r1,
            r2: c2.min(csum - r1).max(0.0),
        };
        let slacks = oohama_check(r, dn, rho)?.slacks(r);
        let worst = slacks.iter().copied().fold(f64::INFINITY, f64::min);
        Ok((worst, r, slacks))
    };

    let mut best = eval(r1_lo)?;
    let mut best_i = 0;
    let step = (r1_hi - r1_lo) / (SEPARATION_GRID - 1) as f64;
    for i in 1..SEPARATION_GRID {
        let cand = eval(r1_lo + step * i as f64)?;
        if cand.0 > best.0 {
            best = cand;
            best_i = i;
        }
    }
    if best.0 < 0.0 && step > 0.0 {
        // Refine inside the neighbouring cells; the worst slack is unimodal there.
        let lo = r1_lo + step * best_i.saturating_sub(1) as f64;
        let hi = (r1_lo + step * (best_i + 1) as f64).min(r1_hi);
        let x = golden_max(lo, hi, 1e-13, |x| eval(x).map(|v| v.0).unwrap_or(f64::NEG_INFINITY));
        let cand = eval(x)?;
        if cand.0 > best.0 {
            best = cand;
        }
    }
    let feasible = best.0 >= -RATE_TOL;
    Ok(FeasibilityReport {
        feasible,
        witness: feasible.then_some(best.1),
        slacks: best.2,
    })
}

/// Golden-section search for the maximizer of `f` on `[lo, hi]`.
fn golden_max(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        x1
    } else {
        x2
    }
}

/// Smallest symmetric distortion achievable by separation.
pub fn separation_sym(src: &SourceParams, p: f64, noise: f64) -> f64 {
    let rho = src.rho();
    src.sigma2() * (noise * (noise + 2.0 * p * (1.0 - rho * rho))).sqrt() / (2.0 * p + noise)
}

/// Symmetric uncoded distortion and whether it is optimal at this SNR.
pub fn uncoded_sym_dstar(src: &SourceParams, p: f64, noise: f64) -> (f64, bool) {
    let rho = src.rho();
    let one_m = 1.0 - rho * rho;
    let value = src.sigma2() * (p * one_m + noise) / (2.0 * p * (1.0 + rho) + noise);
    (value, p / noise <= rho / one_m)
}

/// Optimized symmetric operating point of a scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymOptimum {
    pub distortion: f64,
    pub rate: f64,
    pub alpha: f64,
}

fn vq_sym_distortion(rate: f64, src: &SourceParams) -> f64 {
    let rho = src.rho();
    let q = (-2.0 * rate).exp2();
    let a = 1.0 - q;
    src.sigma2() * q * (1.0 - rho * rho * a) / (1.0 - rho * rho * a * a)
}

fn bisect_root(mut lo: f64, mut hi: f64, h: impl Fn(f64) -> f64) -> f64 {
    // h(lo) > 0 >= h(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

const FIXED_POINT_SCAN: usize = 64;

/// Best symmetric vector-quantizer distortion: the largest rate satisfying
/// the symmetric sum-rate fixed point.
pub fn vq_sym_opt(src: &SourceParams, p: f64, noise: f64) -> Result<SymOptimum> {
    let rho = src.rho();
    let h = |r: f64| {
        let a = 1.0 - (-2.0 * r).exp2();
        0.25 * ((2.0 * p * (1.0 + rho * a) + noise) / (noise * (1.0 - rho * rho * a * a))).log2()
            - r
    };
    let cap = 0.5 * (1.0 + 2.0 * p / noise).log2() + 2.0;
    if !(h(0.0) > 0.0 && h(cap) < 0.0) {
        return Err(Error::NoSignChange);
    }
    let step = cap / FIXED_POINT_SCAN as f64;
    let mut best: Option<f64> = None;
    for i in 0..FIXED_POINT_SCAN {
        let (lo, hi) = (step * i as f64, step * (i + 1) as f64);
        if h(lo) > 0.0 && h(hi) <= 0.0 {
            let root = bisect_root(lo, hi, h);
            let better = best.is_none_or(|b| vq_sym_distortion(root, src) < vq_sym_distortion(b, src));
            if better {
                best = Some(root);
            }
        }
    }
    let rate = best.ok_or(Error::NoSignChange)?;
    Ok(SymOptimum {
        distortion: vq_sym_distortion(rate, src),
        rate,
        alpha: 0.0,
    })
}

const SP_GRID: usize = 64;

/// Distortion at the largest feasible symmetric rate for direct-path gain
/// `alpha`, searching rates in `(R_MIN, cap]`.
fn sp_best_rate(alpha: f64, cap: f64, src: &SourceParams, ch: &MacChannel) -> Option<(f64, f64)> {
    let eval = |r: f64| -> Option<(bool, f64)> {
        let d = sp_derive(SuperpositionConfig::symmetric(r, alpha), src, ch).ok()?;
        let feasible = sp_rate_feasible(&d, src).0;
        Some((feasible, sp_distortions(&d, src).d1))
    };
    let step = (cap - R_MIN) / (SP_GRID - 1) as f64;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..SP_GRID {
        let r = R_MIN + step * i as f64;
        let Some((feasible, dist)) = eval(r) else { continue };
        if !feasible {
            continue;
        }
        // Push to the feasibility boundary inside the next cell.
        let (mut lo, mut hi) = (r, (r + step).min(cap));
        let mut dist_lo = dist;
        if hi > lo && eval(hi).is_some_and(|v| !v.0) {
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                match eval(mid) {
                    Some((true, d)) => {
                        lo = mid;
                        dist_lo = d;
                    }
                    _ => hi = mid,
                }
            }
        }
        if best.is_none_or(|(d, _)| dist_lo < d) {
            best = Some((dist_lo, lo));
        }
    }
    best
}

/// Best symmetric superposition distortion over rate and direct-path gain.
///
/// Candidates are the zero-rate limit at full direct-path gain (the uncoded
/// scheme), the zero-gain optimum (the vector quantizer), and a grid over the
/// gain refined by golden-section search, each gain paired with its largest
/// feasible rate.
pub fn sp_sym_opt(src: &SourceParams, p: f64, noise: f64) -> Result<SymOptimum> {
    let ch = MacChannel::symmetric(p, noise)?;
    let alpha_max = sp_alpha_max(p, src.sigma2());
    let (uncoded, _) = uncoded_sym_dstar(src, p, noise);
    let mut best = SymOptimum {
        distortion: uncoded,
        rate: 0.0,
        alpha: alpha_max,
    };
    if let Ok(vq) = vq_sym_opt(src, p, noise) {
        if vq.distortion < best.distortion {
            best = vq;
        }
    }

    let mut cap = 0.5 * (1.0 + 2.0 * p / noise).log2() + 2.0;
    // Grow the rate range until the top of it is infeasible for every gain.
    for _ in 0..8 {
        let top_feasible = (0..SP_GRID).any(|j| {
            let alpha = alpha_max * j as f64 / (SP_GRID - 1) as f64;
            sp_derive(SuperpositionConfig::symmetric(cap, alpha), src, &ch)
                .map(|d| sp_rate_feasible(&d, src).0)
                .unwrap_or(false)
        });
        if !top_feasible {
            break;
        }
        cap *= 2.0;
    }

    let profile = |alpha: f64| sp_best_rate(alpha, cap, src, &ch);
    let step = alpha_max / (SP_GRID - 1) as f64;
    let mut grid_best: Option<(usize, f64, f64)> = None;
    for j in 0..SP_GRID {
        if let Some((dist, rate)) = profile(step * j as f64) {
            if grid_best.is_none_or(|(_, d, _)| dist < d) {
                grid_best = Some((j, dist, rate));
            }
        }
    }
    let Some((j, dist, rate)) = grid_best else {
        return if best.distortion.is_finite() {
            Ok(best)
        } else {
            Err(Error::EmptyFeasible)
        };
    };
    let mut cand = SymOptimum {
        distortion: dist,
        rate,
        alpha: step * j as f64,
    };
    let lo = step * j.saturating_sub(1) as f64;
    let hi = (step * (j + 1) as f64).min(alpha_max);
    let alpha = golden_max(lo, hi, 1e-9 * alpha_max.max(1e-300), |a| {
        profile(a).map_or(f64::NEG_INFINITY, |(d, _)| -d)
    });
    if let Some((d, r)) = profile(alpha) {
        if d < cand.distortion {
            cand = SymOptimum {
                distortion: d,
                rate: r,
                alpha,
            };
        }
    }
    if cand.distortion < best.distortion {
        best = cand;
    }
    Ok(best)
}

/// High-SNR approximation `sigma^2 sqrt((1 - rho) / 2) sqrt(N / P)` of the
/// symmetric optimum.
pub fn high_snr_asymptote_sym(src: &SourceParams, p: f64, noise: f64) -> f64 {
    src.sigma2() * ((1.0 - src.rho()) / 2.0).sqrt() * (noise / p).sqrt()
}

/// `((P1 + P2 + 2 rho sqrt(P1 P2)) / N) D1 D2 / (sigma^4 (1 - rho^2))`,
/// which tends to one along optimal distortion pairs as the noise vanishes.
pub fn high_snr_product_check(src: &SourceParams, ch: &MacChannel, d: DistortionPair) -> f64 {
    let s = src.sigma2();
    let rho = src.rho();
    ch.coherent_power(rho) / ch.noise() * d.d1 * d.d2 / (s * s * (1.0 - rho * rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratedist::{classify_region, RdRegion};
    use crate::schemes::mac_uncoded;
    use proptest::prelude::*;

    fn src(rho: f64) -> SourceParams {
        SourceParams::new(1.0, rho).unwrap()
    }

    #[test]
    fn necessary_condition_examples() {
        let s = src(0.5);
        let ch = MacChannel::symmetric(1.0, 2.0).unwrap();
        let d = mac_uncoded(&s, &ch);
        let (ok, slack) = necessary_condition(d, &s, &ch).unwrap();
        assert!(ok && slack.abs() <= 1e-9);
        let (ok, slack) = necessary_condition(DistortionPair { d1: 1.0, d2: 1.0 }, &s, &ch).unwrap();
        assert!(ok && (slack - 0.5 * 2.5f64.log2()).abs() < 1e-15);
        let (ok, _) = necessary_condition(DistortionPair { d1: 1e-9, d2: 1e-9 }, &s, &ch).unwrap();
        assert!(!ok);
    }

    #[test]
    fn lower_bound_examples() {
        assert!((lower_bound_sym(&src(0.5), 1.0, 2.0) - 0.55).abs() < 1e-15);
        assert!((lower_bound_sym(&src(0.5), 3.0, 1.0) - (0.075f64).sqrt()).abs() < 1e-15);
        assert!((lower_bound_sym(&src(0.5), 3.0, 1.0) - 0.273861).abs() < 1e-6);
        for &snr in &[0.1, 1.0, 30.0] {
            let lb = lower_bound_sym(&src(0.0), snr, 1.0);
            assert!((lb - (1.0 / (2.0 * snr + 1.0)).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn oohama_examples() {
        let d = DistortionPair { d1: 0.3, d2: 0.6 };
        let r = RatePair { r1: 0.5, r2: 0.7 };
        let o = oohama_check(r, d, 0.0).unwrap();
        assert_eq!(o.beta_d, 2.0);
        assert!((o.r1_min - 0.5 * (1.0f64 / 0.3).log2()).abs() < 1e-15);
        assert!((o.rsum_min - o.r1_min - o.r2_min).abs() < 1e-14);

        let o = oohama_check(r, DistortionPair { d1: 1.0, d2: 1.0 }, 0.5).unwrap();
        assert_eq!((o.r1_min, o.r2_min, o.rsum_min), (0.0, 0.0, 0.0));

        let o = oohama_check(r, DistortionPair { d1: 0.3, d2: 0.3 }, 0.5).unwrap();
        let beta = 1.0 + (1.0f64 + 0.09 / 0.5625).sqrt();
        assert!((o.beta_d - beta).abs() < 1e-15);
        assert!((o.beta_d - 2.077033).abs() < 1e-6);
        let expect = 0.5 * (0.75 * beta / 0.18).log2();
        assert!((o.rsum_min - expect).abs() < 1e-14);
        assert!((o.rsum_min - 1.556709).abs() < 1e-6);
        let joint = rd_rate(DistortionPair { d1: 0.3, d2: 0.3 }, &src(0.5)).unwrap();
        assert!(o.rsum_min >= joint);
        assert!(oohama_check(r, DistortionPair { d1: 0.0, d2: 0.3 }, 0.5).is_err());
    }

    #[test]
    fn separation_examples() {
        let s = src(0.5);
        let sep = separation_sym(&s, 1.0, 2.0);
        assert!((sep - 7f64.sqrt() / 4.0).abs() < 1e-15);
        let ch = MacChannel::symmetric(1.0, 2.0).unwrap();
        assert!(separation_feasible(DistortionPair::symmetric(sep + 1e-6).unwrap(), &s, &ch)
            .unwrap()
            .feasible);
        assert!(!separation_feasible(DistortionPair::symmetric(sep - 1e-6).unwrap(), &s, &ch)
            .unwrap()
            .feasible);
        let rep = separation_feasible(DistortionPair { d1: 1.0, d2: 1.0 }, &s, &ch).unwrap();
        assert!(rep.feasible && rep.witness.is_some());

        // Independent sources: separation meets the lower bound.
        for &snr in &[0.3, 2.0, 50.0] {
            let a = separation_sym(&src(0.0), snr, 1.0);
            assert!((a - lower_bound_sym(&src(0.0), snr, 1.0)).abs() < 1e-15);
        }
        let p: f64 = 1e8;
        let approx = (0.75 / (2.0 * p)).sqrt();
        assert!((separation_sym(&s, p, 1.0) / approx - 1.0).abs() < 1e-6);
    }

    #[test]
    fn uncoded_sym_examples() {
        let (v, exact) = uncoded_sym_dstar(&src(0.5), 1.0, 2.0);
        assert!((v - 0.55).abs() < 1e-15 && exact);
        assert!(uncoded_sym_dstar(&src(0.5), 2.0, 3.0).1);
        assert!(!uncoded_sym_dstar(&src(0.5), 3.0, 1.0).1);
    }

    #[test]
    fn vq_sym_examples() {
        for &snr in &[0.5, 2.0, 10.0] {
            let opt = vq_sym_opt(&src(0.0), snr, 1.0).unwrap();
            assert!((opt.rate - 0.25 * (1.0 + 2.0 * snr).log2()).abs() < 1e-12);
            assert!((opt.distortion - (1.0 / (2.0 * snr + 1.0)).sqrt()).abs() < 1e-12);
        }
        let opt = vq_sym_opt(&src(0.5), 1e6, 1.0).unwrap();
        assert!((opt.distortion * 1e3 / 0.5 - 1.0).abs() < 0.01);
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let snr = 10f64.powf(-1.0 + 0.1 * i as f64);
            let d = vq_sym_opt(&src(0.5), snr, 1.0).unwrap().distortion;
            assert!(d <= prev + 1e-12);
            prev = d;
        }
    }

    #[test]
    fn sp_sym_examples() {
        let s = src(0.5);
        for &snr in &[0.25, 0.5, 1.0, 2.0, 4.0] {
            let sp = sp_sym_opt(&s, snr, 1.0).unwrap();
            let (unc, _) = uncoded_sym_dstar(&s, snr, 1.0);
            let vq = vq_sym_opt(&s, snr, 1.0).unwrap().distortion;
            assert!(sp.distortion <= unc.min(vq) + 1e-9);
            assert!(sp.distortion >= lower_bound_sym(&s, snr, 1.0) - 1e-12);
            if snr <= 0.5 / 0.75 {
                assert!((sp.distortion - lower_bound_sym(&s, snr, 1.0)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn asymptote_examples() {
        assert!((high_snr_asymptote_sym(&src(0.5), 4.0, 1.0) - 0.25).abs() < 1e-15);
        assert!((high_snr_asymptote_sym(&src(0.0), 8.0, 1.0) - 0.25).abs() < 1e-15);
        let r = lower_bound_sym(&src(0.5), 1e8, 1.0) / high_snr_asymptote_sym(&src(0.5), 1e8, 1.0);
        assert!((r - 1.0).abs() < 1e-3);
    }

    #[test]
    fn product_check_examples() {
        let s = src(0.0);
        let snr = 1e6;
        let ch = MacChannel::symmetric(snr, 1.0).unwrap();
        let d = lower_bound_sym(&s, snr, 1.0);
        let ratio = high_snr_product_check(&s, &ch, DistortionPair::symmetric(d).unwrap());
        assert!((ratio - 1.0).abs() < 1e-5);
        let ch = MacChannel::symmetric(1.0, 100.0).unwrap();
        let d = lower_bound_sym(&s, 1.0, 100.0);
        let ratio = high_snr_product_check(&s, &ch, DistortionPair::symmetric(d).unwrap());
        assert!(ratio < 0.1);
    }

    proptest! {
        #[test]
        fn symmetric_ordering(rho in 0.01f64..0.95, log_snr in -1.5f64..2.0) {
            let s = src(rho);
            let snr = 10f64.powf(log_snr);
            let lb = lower_bound_sym(&s, snr, 1.0);
            let vq = vq_sym_opt(&s, snr, 1.0).unwrap().distortion;
            let (unc, _) = uncoded_sym_dstar(&s, snr, 1.0);
            let sep = separation_sym(&s, snr, 1.0);
            prop_assert!(lb <= unc + 1e-12);
            prop_assert!(lb <= vq + 1e-12);
            prop_assert!(vq <= sep + 1e-9);
        }

        #[test]
        fn joint_rate_below_distributed_sum_rate(
            rho in 0.01f64..0.95, d1 in 0.01f64..1.0, d2 in 0.01f64..1.0,
        ) {
            let s = src(rho);
            let d = DistortionPair { d1, d2 };
            prop_assume!(classify_region(d, &s).unwrap() == RdRegion::Region2);
            let o = oohama_check(RatePair { r1: 0.0, r2: 0.0 }, d, rho).unwrap();
            prop_assert!(rd_rate(d, &s).unwrap() <= o.rsum_min + 1e-12);
        }
    }
}
