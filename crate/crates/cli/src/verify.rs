//! Self-checks of the library against independent oracles and invariants.

use std::f64::consts::PI;
use std::io::Write;

use gaussmac::bounds::{lower_bound_sym, separation_sym, sp_sym_opt, uncoded_sym_dstar, vq_sym_opt};
use gaussmac::model::{DistortionPair, MacChannel, RatePair, SourceParams};
use gaussmac::ratedist::{classify_region, marginal_rd, rd_rate, waterfill_oracle_rate, RdRegion};
use gaussmac::schemes::{
    mac_uncoded, mac_uncoded_is_optimal, residual3, sp_derive, sp_distortions, sp_rate_feasible,
    vq_distortions, vq_rate_feasible, SuperpositionConfig,
};
use gaussmac::spheregeom::{cap_fraction_exact, cap_ratio_bounds, gamma_half_ratio_series};
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::Result;
use crate::output::{fmt_f64, writer};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

/// Deterministic equidistributed sequence in `[0, 1)`.
fn weyl(k: usize, step: f64) -> f64 {
    (k as f64 * step).fract()
}

const STEPS: [f64; 4] = [
    0.414_213_562_373_095_1,
    0.732_050_807_568_877_3,
    0.236_067_977_499_789_7,
    0.645_751_311_064_590_6,
];

fn src(rho: f64) -> SourceParams {
    SourceParams::new(1.0, rho).expect("valid correlation")
}

fn rd_vs_waterfill() -> gaussmac::Result<f64> {
    let mut worst = 0.0f64;
    for rho in [0.1, 0.5, 0.9] {
        let s = src(rho);
        let errs: Vec<f64> = (1..=100usize)
            .into_par_iter()
            .flat_map_iter(|i| (1..=100usize).map(move |j| (i, j)))
            .map(|(i, j)| {
                let d = DistortionPair {
                    d1: 0.01 * i as f64,
                    d2: 0.01 * j as f64,
                };
                let closed = rd_rate(d, &s)?;
                let other = if classify_region(d, &s)? == RdRegion::Region1 {
                    marginal_rd(d.d1.min(d.d2), 1.0)?
                } else {
                    waterfill_oracle_rate(d, &s, 1e-12).unwrap_or(f64::INFINITY)
                };
                Ok((closed - other).abs())
            })
            .collect::<gaussmac::Result<_>>()?;
        worst = errs.into_iter().fold(worst, f64::max);
    }
    Ok(worst)
}

fn boundary_continuity() -> gaussmac::Result<f64> {
    let mut worst = 0.0f64;
    for k in 1..=200 {
        let s = src(0.05 + 0.9 * weyl(k, STEPS[0]));
        let a = (0.01 + 0.99 * weyl(k, STEPS[1]), 0.01 + 0.99 * weyl(k, STEPS[2]));
        let b = (0.01 + 0.99 * weyl(k, STEPS[3]), 0.01 + 0.99 * weyl(k + 7, STEPS[0]));
        let at = |t: f64| DistortionPair {
            d1: a.0 + t * (b.0 - a.0),
            d2: a.1 + t * (b.1 - a.1),
        };
        let steps = 200;
        for i in 0..steps {
            let (mut lo, mut hi) = (i as f64 / steps as f64, (i + 1) as f64 / steps as f64);
            let r_lo = classify_region(at(lo), &s)?;
            if r_lo == classify_region(at(hi), &s)? {
                continue;
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if classify_region(at(mid), &s)? == r_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            worst = worst.max((rd_rate(at(lo), &s)? - rd_rate(at(hi), &s)?).abs());
        }
    }
    Ok(worst)
}

/// Gap between the converse and the uncoded pair where uncoded is optimal;
/// infinite if the optimality flag disagrees with a visible gap.
fn uncoded_converse_equality() -> gaussmac::Result<f64> {
    let mut worst = 0.0f64;
    for k in 1..=300 {
        let s = src(0.95 * weyl(k, STEPS[0]));
        let p1 = 10f64.powf(3.0 * weyl(k, STEPS[1]) - 1.5);
        let p2 = 10f64.powf(3.0 * weyl(k, STEPS[2]) - 1.5);
        let noise = 10f64.powf(2.0 * weyl(k, STEPS[3]) - 1.0);
        let ch = MacChannel::new(p1, p2, noise)?;
        let cap = 0.5 * (1.0 + ch.coherent_power(s.rho()) / noise).log2();
        let gap = cap - rd_rate(mac_uncoded(&s, &ch), &s)?;
        let (optimal, _) = mac_uncoded_is_optimal(&s, &ch);
        if gap < -1e-9 || (!optimal && gap <= 1e-9) {
            return Ok(f64::INFINITY);
        }
        if optimal {
            worst = worst.max(gap.abs());
        }
    }
    Ok(worst)
}

fn superposition_reduction() -> gaussmac::Result<f64> {
    let s = src(0.5);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let rate = 0.05 * 60f64.powf(i as f64 / 9.0);
        for j in 0..10 {
            let snr = 0.1 * 1000f64.powf(j as f64 / 9.0);
            let ch = MacChannel::symmetric(snr, 1.0)?;
            let r = RatePair { r1: rate, r2: rate };
            let d = sp_derive(SuperpositionConfig::symmetric(rate, 0.0), &s, &ch)?;
            let got = sp_distortions(&d, &s);
            let want = vq_distortions(r, &s);
            if sp_rate_feasible(&d, &s).0 != vq_rate_feasible(r, &s, &ch).0 {
                return Ok(f64::INFINITY);
            }
            worst = worst
                .max((got.d1 - want.d1).abs())
                .max((got.d2 - want.d2).abs())
                .max(residual3(&d.k, &d.gamma1, &d.c1))
                .max(residual3(&d.k, &d.gamma2, &d.c2));
        }
    }
    Ok(worst)
}

/// Relative amount by which the exact cap fraction leaves the bounds.
fn cap_sandwich() -> gaussmac::Result<f64> {
    let mut worst = 0.0f64;
    for n in [3usize, 10, 20, 50, 100, 500] {
        for deg in [5.0f64, 15.0, 30.0, 45.0, 60.0, 75.0, 85.0] {
            let phi = deg * PI / 180.0;
            let b = cap_ratio_bounds(n, phi)?;
            let exact = cap_fraction_exact(n, phi)?;
            if exact > 0.0 {
                let out = (b.lower - exact).max(exact - b.upper).max(0.0) / exact;
                worst = worst.max(out);
            }
        }
    }
    Ok(worst)
}

fn gamma_ratio() -> gaussmac::Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..2000 {
        let x = 5.0 * 1e6f64.powf(i as f64 / 1999.0);
        let exact = (ln_gamma(x + 0.5) - ln_gamma(x)).exp();
        worst = worst.max((gamma_half_ratio_series(x) / exact - 1.0).abs());
    }
    Ok(worst)
}

/// Largest violation of lower <= superposition <= min(uncoded, VQ) and
/// VQ <= separation over symmetric sweeps.
fn symmetric_ordering() -> gaussmac::Result<f64> {
    let cases: Vec<(f64, f64)> = [0.25, 0.5, 0.75]
        .into_iter()
        .flat_map(|rho| (0..20).map(move |i| (rho, 0.05 * 2000f64.powf(i as f64 / 19.0))))
        .collect();
    let violations: Vec<f64> = cases
        .into_par_iter()
        .map(|(rho, snr)| {
            let s = src(rho);
            let lb = lower_bound_sym(&s, snr, 1.0);
            let sp = sp_sym_opt(&s, snr, 1.0)?.distortion;
            let vq = vq_sym_opt(&s, snr, 1.0)?.distortion;
            let (unc, _) = uncoded_sym_dstar(&s, snr, 1.0);
            let sep = separation_sym(&s, snr, 1.0);
            Ok((lb - sp).max(sp - unc.min(vq)).max(vq - sep).max(0.0))
        })
        .collect::<gaussmac::Result<_>>()?;
    Ok(violations.into_iter().fold(0.0, f64::max))
}

/// Runs every check; a check that errors is reported with infinite error.
pub fn run_verify() -> Vec<CheckResult> {
    let checks: [(&'static str, fn() -> gaussmac::Result<f64>, f64); 7] = [
        ("rd_vs_waterfill", rd_vs_waterfill, 1e-6),
        ("boundary_continuity", boundary_continuity, 1e-6),
        ("uncoded_converse_equality", uncoded_converse_equality, 1e-9),
        ("superposition_vq_reduction", superposition_reduction, 1e-9),
        ("cap_bound_sandwich", cap_sandwich, 0.0),
        ("gamma_ratio_series", gamma_ratio, 1e-6),
        ("symmetric_ordering", symmetric_ordering, 1e-9),
    ];
    checks
        .into_iter()
        .map(|(name, f, tolerance)| CheckResult {
            name,
            max_error: f().unwrap_or(f64::INFINITY),
            tolerance,
        })
        .collect()
}

pub fn write_report<W: Write>(results: &[CheckResult], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["check", "max_error", "tolerance", "status"])?;
    for r in results {
        w.write_record([
            r.name.to_string(),
            fmt_f64(r.max_error),
            fmt_f64(r.tolerance),
            if r.passed() { "pass" } else { "fail" }.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_sequence_spreads() {
        let xs: Vec<f64> = (1..=1000).map(|k| weyl(k, STEPS[0])).collect();
        assert!(xs.iter().all(|x| (0.0..1.0).contains(x)));
        let low = xs.iter().filter(|&&x| x < 0.5).count();
        assert!((480..=520).contains(&low));
    }

    #[test]
    fn report_format() {
        let results = [
            CheckResult {
                name: "a",
                max_error: 0.0,
                tolerance: 1e-9,
            },
            CheckResult {
                name: "b",
                max_error: f64::INFINITY,
                tolerance: 1e-9,
            },
        ];
        let mut buf = Vec::new();
        write_report(&results, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "check,max_error,tolerance,status\na,0.00000000e0,1.00000000e-9,pass\nb,inf,1.00000000e-9,fail\n"
        );
    }
}
