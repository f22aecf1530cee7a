//! Rate-distortion function of the bivariate Gaussian source.
//!
//! [`rd_rate`] is the three-region closed form. [`waterfill_forward`] is the
//! constructive route: scale the second component by `c`, rotate onto the
//! eigenbasis of `cov(S1, c S2)`, reverse-waterfill the rate over the two
//! eigen-components and map the component distortions back. Inverting that
//! forward map numerically ([`waterfill_oracle_rate`]) gives an oracle for the
//! closed form that shares no formulas with it.

use crate::error::{Error, Result};
use crate::model::{DistortionPair, Extended, SourceParams};

/// Region of the distortion plane, in order of precedence on shared boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RdRegion {
    /// The larger distortion comes for free from describing the other component.
    Region1,
    /// Both components are reverse-waterfilled below the smaller eigenvalue.
    Region2,
    /// One eigen-component receives no rate.
    Region3,
}

/// Intermediate quantities of one forward waterfilling evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaterfillState {
    pub c: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub a1_sq: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub rate: f64,
}

fn log2_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.log2()
    } else {
        0.0
    }
}

fn checked_clamp(d: DistortionPair, src: &SourceParams) -> Result<(f64, f64)> {
    if !(d.d1 > 0.0 && d.d2 > 0.0) {
        return Err(Error::OutOfDomain(format!(
            "distortions must be strictly positive, got ({}, {})",
            d.d1, d.d2
        )));
    }
    let s = src.sigma2();
    Ok((d.d1.min(s), d.d2.min(s)))
}

fn region_of(d1: f64, d2: f64, src: &SourceParams) -> RdRegion {
    let s = src.sigma2();
    let rho2 = src.rho() * src.rho();
    let c = src.conditional_variance();
    let upper = c + rho2 * d1;
    let in_region1 = if d1 <= c {
        d2 >= upper
    } else {
        // d1 > c only happens for rho > 0.
        d2 >= upper || d2 <= (d1 - c) / rho2
    };
    if in_region1 {
        return RdRegion::Region1;
    }
    // (c - d1) s / (s - d1); equals s identically when rho = 0.
    let region2_bound = if s - d1 > 0.0 { (c - d1) * s / (s - d1) } else { s };
    if d1 <= c && d2 < region2_bound {
        RdRegion::Region2
    } else {
        RdRegion::Region3
    }
}

/// Region containing `d`; distortions above `sigma^2` are clamped first.
pub fn classify_region(d: DistortionPair, src: &SourceParams) -> Result<RdRegion> {
    let (d1, d2) = checked_clamp(d, src)?;
    Ok(region_of(d1, d2, src))
}

/// `R_{S1,S2}(D1, D2)` in bits.
pub fn rd_rate(d: DistortionPair, src: &SourceParams) -> Result<f64> {
    let (d1, d2) = checked_clamp(d, src)?;
    let s = src.sigma2();
    let rho = src.rho();
    let num = s * s * (1.0 - rho * rho);
    let rate = match region_of(d1, d2, src) {
        RdRegion::Region1 => 0.5 * log2_plus(s / d1.min(d2)),
        RdRegion::Region2 => 0.5 * log2_plus(num / (d1 * d2)),
        RdRegion::Region3 => {
            let cross = rho * s - ((s - d1) * (s - d2)).sqrt();
            0.5 * log2_plus(num / (d1 * d2 - cross * cross))
        }
    };
    Ok(rate)
}

/// [`rd_rate`] extended to the boundary: a zero distortion maps to `Infinite`.
pub fn rd_rate_extended(d: DistortionPair, src: &SourceParams) -> Result<Extended> {
    if d.d1 == 0.0 || d.d2 == 0.0 {
        if d.d1 < 0.0 || d.d2 < 0.0 {
            return Err(Error::OutOfDomain("negative distortion".into()));
        }
        return Ok(Extended::Infinite);
    }
    rd_rate(d, src).map(Extended::Finite)
}

/// Scalar Gaussian rate-distortion function `1/2 log2+(sigma^2 / d)`.
pub fn marginal_rd(d: f64, sigma2: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::OutOfDomain(format!("distortion {d} must be positive")));
    }
    Ok(0.5 * log2_plus(sigma2 / d))
}

/// Eigenvalues of `cov(S1, c S2)`, smallest first.
fn eigenvalues(c: f64, src: &SourceParams) -> (f64, f64) {
    let s = src.sigma2();
    let rho = src.rho();
    let c2 = c * c;
    let root = (1.0 - 2.0 * c2 * (1.0 - 2.0 * rho * rho) + c2 * c2).max(0.0).sqrt();
    let lambda2 = 0.5 * s * (1.0 + c2 + root);
    // Product of the eigenvalues is the determinant; avoids cancellation.
    let lambda1 = s * s * c2 * (1.0 - rho * rho) / lambda2;
    (lambda1, lambda2)
}

/// Squared first coordinate of the eigenvector `(a1, -a2)` belonging to `lambda1`.
fn eigenvector_weight(c: f64, rho: f64) -> f64 {
    let c2 = c * c;
    let u = 1.0 - c2;
    let w = (1.0 - 2.0 * c2 * (1.0 - 2.0 * rho * rho) + c2 * c2).max(0.0).sqrt();
    if w == 0.0 {
        // rho = 0, c = 1: isotropic, any basis works.
        return 0.5;
    }
    if u > 0.0 {
        2.0 * c2 * rho * rho / (w * (w + u))
    } else {
        // Same expression with the denominator rationalized.
        (w - u) / (2.0 * w)
    }
}

/// Reverse-waterfills `rate` bits over the eigen-components of `(S1, c S2)`
/// and maps the component distortions back to `(D1, D2)`.
pub fn waterfill_forward(
    c: f64,
    rate: f64,
    src: &SourceParams,
) -> Result<(DistortionPair, WaterfillState)> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::OutOfDomain(format!("scaling c = {c} must be positive")));
    }
    if !(rate >= 0.0) {
        return Err(Error::OutOfDomain(format!("rate {rate} must be nonnegative")));
    }
    let (lambda1, lambda2) = eigenvalues(c, src);
    let a1_sq = eigenvector_weight(c, src.rho());
    let a2_sq = 1.0 - a1_sq;

    let equal_level = (lambda1 * lambda2).sqrt() * (-rate).exp2();
    let (delta1, delta2) = if equal_level <= lambda1 {
        (equal_level, equal_level)
    } else {
        (lambda1, lambda2 * (-2.0 * rate).exp2())
    };

    let c2 = c * c;
    let d = DistortionPair {
        d1: a1_sq * delta1 + a2_sq * delta2,
        d2: (a2_sq * delta1 + a1_sq * delta2) / c2,
    };
    let state = WaterfillState {
        c,
        lambda1,
        lambda2,
        a1_sq,
        delta1,
        delta2,
        rate,
    };
    Ok((d, state))
}

const LOG10_C_RANGE: (f64, f64) = (-6.0, 6.0);
const RATE_RANGE: (f64, f64) = (0.0, 60.0);
const ITERATION_CAP: usize = 200;

/// Rate at which the forward map hits `d1` for the given scaling.
fn rate_for_d1(c: f64, d1: f64, src: &SourceParams) -> Result<f64> {
    let (mut lo, mut hi) = RATE_RANGE;
    for _ in 0..ITERATION_CAP {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (d, _) = waterfill_forward(c, mid, src)?;
        if d.d1 > d1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Numerically inverts [`waterfill_forward`]: finds `(c, R)` reproducing `d`
/// and returns `R`.
///
/// Only covers pairs outside region 1; there the D2 mismatch has no sign
/// change over the scaling range and the call fails with `NoConvergence`.
pub fn waterfill_oracle_rate(d: DistortionPair, src: &SourceParams, tol: f64) -> Result<f64> {
    let s = src.sigma2();
    if !(d.d1 > 0.0 && d.d2 > 0.0 && d.d1 <= s && d.d2 <= s) {
        return Err(Error::OutOfDomain(format!(
            "oracle needs (d1, d2) in (0, sigma^2]^2, got ({}, {})",
            d.d1, d.d2
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::OutOfDomain(format!("tolerance {tol} must be positive")));
    }

    // D2 mismatch at the rate matching D1; decreasing in log c.
    let mismatch = |log_c: f64| -> Result<(f64, f64, DistortionPair)> {
        let c = 10f64.powf(log_c);
        let rate = rate_for_d1(c, d.d1, src)?;
        let (got, _) = waterfill_forward(c, rate, src)?;
        Ok((got.d2 - d.d2, rate, got))
    };

    let (mut lo, mut hi) = LOG10_C_RANGE;
    let (g_lo, _, _) = mismatch(lo)?;
    let (g_hi, _, _) = mismatch(hi)?;
    if !(g_lo >= 0.0 && g_hi <= 0.0) {
        return Err(Error::NoConvergence(format!(
            "no scaling in 1e{lo}..1e{hi} balances ({}, {})",
            d.d1, d.d2
        )));
    }
    let mut best = None;
    for _ in 0..ITERATION_CAP {
        let mid = 0.5 * (lo + hi);
        let (g, rate, got) = mismatch(mid)?;
        best = Some((rate, got));
        if g.abs() <= tol * 1e-3 || mid <= lo || mid >= hi {
            break;
        }
        if g > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (rate, got) = best.expect("at least one bisection step");
    if (got.d1 - d.d1).abs() > tol || (got.d2 - d.d2).abs() > tol {
        return Err(Error::NoConvergence(format!(
            "oracle residual ({:.3e}, {:.3e}) exceeds tolerance {tol:.3e}",
            got.d1 - d.d1,
            got.d2 - d.d2
        )));
    }
    Ok(rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn src(rho: f64) -> SourceParams {
        SourceParams::new(1.0, rho).unwrap()
    }

    fn pair(d1: f64, d2: f64) -> DistortionPair {
        DistortionPair { d1, d2 }
    }

    #[test]
    fn classification_examples() {
        let s = src(0.5);
        assert_eq!(classify_region(pair(1.0, 1.0), &s).unwrap(), RdRegion::Region1);
        assert_eq!(classify_region(pair(0.3, 0.3), &s).unwrap(), RdRegion::Region2);
        assert_eq!(classify_region(pair(0.3, 0.7), &s).unwrap(), RdRegion::Region3);
        // Clamped above sigma^2.
        assert_eq!(classify_region(pair(5.0, 5.0), &s).unwrap(), RdRegion::Region1);
        assert!(matches!(
            classify_region(pair(0.0, 0.5), &s),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn rate_examples() {
        let s = src(0.5);
        assert_eq!(rd_rate(pair(1.0, 1.0), &s).unwrap(), 0.0);
        assert!((rd_rate(pair(0.5, 0.5), &src(0.0)).unwrap() - 1.0).abs() < 1e-15);
        let r = rd_rate(pair(0.3, 0.3), &s).unwrap();
        assert!((r - 0.5 * (0.75f64 / 0.09).log2()).abs() < 1e-14);
        assert!((r - 1.529447).abs() < 1e-6);
        let r = rd_rate(pair(0.3, 0.7), &s).unwrap();
        let expect = 0.5 * (0.75 / (0.21 - (0.5 - 0.21f64.sqrt()).powi(2))).log2();
        assert!((r - expect).abs() < 1e-14);
        assert!((r - 0.924261).abs() < 1e-6);
    }

    #[test]
    fn extended_rate_at_zero() {
        let s = src(0.5);
        assert_eq!(rd_rate_extended(pair(0.0, 0.3), &s).unwrap(), Extended::Infinite);
        assert_eq!(
            rd_rate_extended(pair(1.0, 1.0), &s).unwrap(),
            Extended::Finite(0.0)
        );
    }

    #[test]
    fn marginal_examples() {
        assert_eq!(marginal_rd(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(marginal_rd(0.25, 1.0).unwrap(), 1.0);
        assert_eq!(marginal_rd(0.5, 2.0).unwrap(), 1.0);
        assert!(marginal_rd(0.0, 1.0).is_err());
    }

    #[test]
    fn eigen_decomposition_matches_direct_solution() {
        for &rho in &[0.0, 0.1, 0.5, 0.9, 0.999] {
            for &c in &[1e-3, 0.2, 0.9, 1.0, 1.1, 7.0, 1e3] {
                let s = src(rho);
                let (l1, l2) = eigenvalues(c, &s);
                // Direct 2x2 symmetric eigen-solution of [[1, c rho], [c rho, c^2]].
                let (a, b, d) = (1.0, c * rho, c * c);
                let mean = 0.5 * (a + d);
                let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
                assert!((l1 - (mean - rad)).abs() <= 1e-12 * l2.max(1.0), "rho={rho} c={c}");
                assert!((l2 - (mean + rad)).abs() <= 1e-12 * l2.max(1.0));
                if b != 0.0 {
                    // Eigenvector for the small eigenvalue: (b, l1 - a).
                    let (vx, vy) = (b, l1 - a);
                    let direct = vx * vx / (vx * vx + vy * vy);
                    let w = eigenvector_weight(c, rho);
                    assert!((w - direct).abs() < 1e-9, "rho={rho} c={c}: {w} vs {direct}");
                }
            }
        }
    }

    #[test]
    fn waterfill_examples() {
        let (d, st) = waterfill_forward(1.0, 0.0, &src(0.5)).unwrap();
        assert!((d.d1 - 1.0).abs() < 1e-14 && (d.d2 - 1.0).abs() < 1e-14);
        assert_eq!(st.delta1, st.lambda1);

        let r = 0.8;
        let (d, _) = waterfill_forward(1.0, r, &src(0.0)).unwrap();
        // Total rate split evenly over two unit-variance components.
        let expect = (-r).exp2();
        assert!((d.d1 - expect).abs() < 1e-14 && (d.d2 - expect).abs() < 1e-14);

        let rate = 0.5 * (0.75f64 / 0.09).log2();
        let (d, st) = waterfill_forward(1.0, rate, &src(0.5)).unwrap();
        assert!((d.d1 - 0.3).abs() < 1e-12 && (d.d2 - 0.3).abs() < 1e-12);
        assert!(st.lambda1 <= st.lambda2 && st.delta1 <= st.lambda1 && st.delta2 <= st.lambda2);
    }

    #[test]
    fn oracle_examples() {
        let r = waterfill_oracle_rate(pair(0.3, 0.3), &src(0.5), 1e-9).unwrap();
        assert!((r - 1.529447).abs() < 1e-6);
        let r = waterfill_oracle_rate(pair(0.3, 0.7), &src(0.5), 1e-9).unwrap();
        assert!((r - 0.924261).abs() < 1e-6);
        let r = waterfill_oracle_rate(pair(0.5, 0.5), &src(0.0), 1e-9).unwrap();
        assert!((r - 1.0).abs() < 1e-6);
    }

    #[test]
    fn oracle_rejects_region1_interior() {
        let err = waterfill_oracle_rate(pair(0.2, 0.95), &src(0.5), 1e-9).unwrap_err();
        assert!(matches!(err, Error::NoConvergence(_)));
    }

    #[test]
    fn rho_zero_splits_into_marginals() {
        let s = src(0.0);
        for i in 1..50 {
            for j in 1..50 {
                let (d1, d2) = (i as f64 / 50.0, j as f64 / 50.0);
                let joint = rd_rate(pair(d1, d2), &s).unwrap();
                let sum = marginal_rd(d1, 1.0).unwrap() + marginal_rd(d2, 1.0).unwrap();
                assert!((joint - sum).abs() <= 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn rate_nonincreasing_along_chains(
            rho in 0.0f64..0.99, d1 in 0.01f64..1.0, d2 in 0.01f64..1.0,
            steps in proptest::collection::vec((0.0f64..0.05, 0.0f64..0.05), 1..20),
        ) {
            let s = src(rho);
            let (mut a, mut b) = (d1, d2);
            let mut prev = rd_rate(pair(a, b), &s).unwrap();
            for (x, y) in steps {
                a = (a + x).min(1.0);
                b = (b + y).min(1.0);
                let r = rd_rate(pair(a, b), &s).unwrap();
                prop_assert!(r <= prev + 1e-12, "{r} > {prev} at ({a}, {b})");
                prev = r;
            }
        }

        #[test]
        fn unit_scaling_gives_equal_distortions(rho in 0.0f64..0.99, rate in 0.0f64..8.0) {
            let (d, _) = waterfill_forward(1.0, rate, &src(rho)).unwrap();
            prop_assert!((d.d1 - d.d2).abs() <= 1e-12 * d.d1.max(1e-300) + 1e-300);
        }

        #[test]
        fn forward_map_lands_on_closed_form(
            rho in 0.05f64..0.95, log_c in -2.0f64..2.0, rate in 0.05f64..6.0,
        ) {
            // Every waterfilling output lies on the boundary of the region of rate R.
            let s = src(rho);
            let (d, _) = waterfill_forward(10f64.powf(log_c), rate, &s).unwrap();
            let closed = rd_rate(d, &s).unwrap();
            prop_assert!((closed - rate).abs() < 1e-9, "{closed} vs {rate} at {d:?}");
        }
    }
}
