//! Block-level Monte-Carlo simulation of the transmission schemes.
//!
//! Every trial draws its source block, codebooks and channel noise from its
//! own substreams, so results are bit-identical for a given seed regardless
//! of how trials are spread over threads.

pub mod codebook;
pub mod rng;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{MacChannel, RatePair, SourceParams};
use crate::schemes::{sp_derive, vq_estimator_coeffs, SuperpositionConfig};

pub use codebook::{
    build_codebook, codebook_bits, codeword_radius, sample_selected_codeword, target_cosine,
    vq_encode, vq_joint_decode, Codebook,
};
pub use rng::{substream, Role};

/// Typicality window used when none is configured.
pub const DEFAULT_EPSILON: f64 = 0.05;
/// Largest total index size `ceil(n R1) + ceil(n R2)` for joint decoding.
pub const FULL_JOINT_MAX_BITS: u64 = 24;
/// Genie-aided runs draw explicit codebooks up to this index size and
/// sample the quantizer output directly beyond it.
const EXPLICIT_MAX_BITS: u64 = 12;
const EXPLICIT_MAX_ENTRIES: u64 = 1 << 20;

/// How the receiver obtains the codewords.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderMode {
    /// The transmitted codewords are handed to the estimator.
    Genie,
    /// Minimum-distance decoding over all codeword pairs.
    FullJoint,
}

/// Blocklength, trial count, typicality window, seed and decoder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub trials: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub decoder_mode: DecoderMode,
}

impl SimConfig {
    pub fn new(
        n: usize,
        trials: usize,
        epsilon: f64,
        seed: u64,
        decoder_mode: DecoderMode,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!("blocklength {n} must be at least 2")));
        }
        if trials == 0 {
            return Err(Error::InvalidConfig("at least one trial is required".into()));
        }
        if !(epsilon > 0.0 && epsilon < 0.3) {
            return Err(Error::InvalidConfig(format!(
                "epsilon {epsilon} must lie in (0, 0.3)"
            )));
        }
        Ok(Self {
            n,
            trials,
            epsilon,
            seed,
            decoder_mode,
        })
    }
}

/// Empirical performance of a scheme over all trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeEmpirics {
    pub d1_hat: f64,
    pub d2_hat: f64,
    /// Standard errors of the two distortion estimates.
    pub d1_se: f64,
    pub d2_se: f64,
    /// Fraction of decoded trials (both encoders succeeded) with a wrong pair.
    pub decode_error_rate: f64,
    /// Fraction of encoder runs that found no codeword in the window.
    pub encode_failure_rate: f64,
    pub power_used: (f64, f64),
    pub trials_run: usize,
    /// Trials entering the decode error rate.
    pub decoded_trials: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct TrialOutcome {
    sse: [f64; 2],
    sq_err4: [f64; 2],
    energy: [f64; 2],
    encoders: u32,
    encode_failures: u32,
    decoded: bool,
    decode_error: bool,
}

impl TrialOutcome {
    fn record(&mut self, s1: &[f64], s2: &[f64], e1: &[f64], e2: &[f64]) {
        for (k, (s, e)) in [(s1, e1), (s2, e2)].into_iter().enumerate() {
            for (a, b) in s.iter().zip(e) {
                let sq = (a - b) * (a - b);
                self.sse[k] += sq;
                self.sq_err4[k] += sq * sq;
            }
        }
    }
}

fn run_trials<F>(cfg: &SimConfig, trial: F) -> Result<Vec<TrialOutcome>>
where
    F: Fn(u64) -> Result<TrialOutcome> + Sync + Send,
{
    (0..cfg.trials as u64).into_par_iter().map(trial).collect()
}

/// Combines trial outcomes in trial order. Memoryless schemes use the
/// per-symbol spread for standard errors, coded ones the per-trial spread.
fn aggregate(cfg: &SimConfig, outcomes: &[TrialOutcome], memoryless: bool) -> SchemeEmpirics {
    let n = cfg.n as f64;
    let trials = outcomes.len() as f64;
    let symbols = n * trials;
    let mut d = [0.0; 2];
    let mut se = [0.0; 2];
    for k in 0..2 {
        let total: f64 = outcomes.iter().map(|o| o.sse[k]).sum();
        let mean = total / symbols;
        d[k] = mean;
        se[k] = if memoryless || outcomes.len() < 2 {
            let fourth: f64 = outcomes.iter().map(|o| o.sq_err4[k]).sum::<f64>() / symbols;
            ((fourth - mean * mean).max(0.0) / symbols).sqrt()
        } else {
            let var = outcomes
                .iter()
                .map(|o| (o.sse[k] / n - mean).powi(2))
                .sum::<f64>()
                / (trials - 1.0);
            (var / trials).sqrt()
        };
    }
    let power = |k: usize| outcomes.iter().map(|o| o.energy[k]).sum::<f64>() / symbols;
    let encoders: u32 = outcomes.iter().map(|o| o.encoders).sum();
    let failures: u32 = outcomes.iter().map(|o| o.encode_failures).sum();
    let decoded = outcomes.iter().filter(|o| o.decoded).count();
    let errors = outcomes.iter().filter(|o| o.decoded && o.decode_error).count();
    SchemeEmpirics {
        d1_hat: d[0],
        d2_hat: d[1],
        d1_se: se[0],
        d2_se: se[1],
        decode_error_rate: if decoded > 0 {
            errors as f64 / decoded as f64
        } else {
            0.0
        },
        encode_failure_rate: if encoders > 0 {
            failures as f64 / encoders as f64
        } else {
            0.0
        },
        power_used: (power(0), power(1)),
        trials_run: outcomes.len(),
        decoded_trials: decoded,
    }
}

/// Scheme to simulate over the MAC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    Uncoded,
    Vq(RatePair),
    Superposition(SuperpositionConfig),
}

/// Per-trial results, distortions and powers averaged over the block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub d1: f64,
    pub d2: f64,
    pub power1: f64,
    pub power2: f64,
    pub encode_failures: u32,
    pub decoded: bool,
    pub decode_error: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRun {
    pub empirics: SchemeEmpirics,
    pub trials: Vec<TrialRecord>,
}

/// Runs `scheme` and keeps the per-trial records alongside the aggregate.
pub fn simulate(
    cfg: &SimConfig,
    src: &SourceParams,
    ch: &MacChannel,
    scheme: Scheme,
) -> Result<SimRun> {
    let (outcomes, memoryless) = match scheme {
        Scheme::Uncoded => (uncoded_outcomes(cfg, src, ch)?, true),
        Scheme::Vq(r) => (vq_outcomes(cfg, src, ch, r)?, false),
        Scheme::Superposition(sp) => (sp_outcomes(cfg, src, ch, sp)?, false),
    };
    let n = cfg.n as f64;
    let trials = outcomes
        .iter()
        .enumerate()
        .map(|(t, o)| TrialRecord {
            trial: t as u64,
            d1: o.sse[0] / n,
            d2: o.sse[1] / n,
            power1: o.energy[0] / n,
            power2: o.energy[1] / n,
            encode_failures: o.encode_failures,
            decoded: o.decoded,
            decode_error: o.decoded && o.decode_error,
        })
        .collect();
    Ok(SimRun {
        empirics: aggregate(cfg, &outcomes, memoryless),
        trials,
    })
}

/// Draws `n` source pairs `S1 = sigma Z1`, `S2 = sigma (rho Z1 + sqrt(1 - rho^2) Z2)`.
pub fn gen_source<R: Rng + ?Sized>(
    src: &SourceParams,
    n: usize,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let sigma = src.sigma2().sqrt();
    let rho = src.rho();
    let tail = (1.0 - rho * rho).sqrt();
    let mut s1 = Vec::with_capacity(n);
    let mut s2 = Vec::with_capacity(n);
    for _ in 0..n {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        s1.push(sigma * z1);
        s2.push(sigma * (rho * z1 + tail * z2));
    }
    (s1, s2)
}

fn gen_noise<R: Rng + ?Sized>(noise: f64, n: usize, rng: &mut R) -> Vec<f64> {
    let sd = noise.sqrt();
    (0..n).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect()
}

fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Uncoded MAC: each sender scales its samples to full power; the receiver
/// forms per-symbol MMSE estimates from the channel output.
pub fn sim_uncoded_mac(
    cfg: &SimConfig,
    src: &SourceParams,
    ch: &MacChannel,
) -> Result<SchemeEmpirics> {
    Ok(aggregate(cfg, &uncoded_outcomes(cfg, src, ch)?, true))
}

fn uncoded_outcomes(
    cfg: &SimConfig,
    src: &SourceParams,
    ch: &MacChannel,
) -> Result<Vec<TrialOutcome>> {
    let s = src.sigma2();
    let rho = src.rho();
    let (sp1, sp2) = (ch.p1().sqrt(), ch.p2().sqrt());
    let (a1, a2) = (sp1 / s.sqrt(), sp2 / s.sqrt());
    let total = ch.coherent_power(rho) + ch.noise();
    let c1 = s.sqrt() * (sp1 + rho * sp2) / total;
    let c2 = s.sqrt() * (sp2 + rho * sp1) / total;
    run_trials(cfg, |t| {
        let (s1, s2) = gen_source(src, cfg.n, &mut substream(cfg.seed, t, Role::Source));
        let z = gen_noise(ch.noise(), cfg.n, &mut substream(cfg.seed, t, Role::Noise));
        let x1: Vec<f64> = s1.iter().map(|v| a1 * v).collect();
        let x2: Vec<f64> = s2.iter().map(|v| a2 * v).collect();
        let y: Vec<f64> = (0..cfg.n).map(|k| x1[k] + x2[k] + z[k]).collect();
        let e1: Vec<f64> = y.iter().map(|v| c1 * v).collect();
        let e2: Vec<f64> = y.iter().map(|v| c2 * v).collect();
        let mut o = TrialOutcome {
            energy: [energy(&x1), energy(&x2)],
            ..Default::default()
        };
        o.record(&s1, &s2, &e1, &e2);
        Ok(o)
    })
}

/// Point-to-point uncoded: `X = k (alpha S1 + beta S2)` at power `p`, with
/// per-symbol MMSE estimates of both components. The single encoder's power
/// is reported in the first slot.
pub fn sim_pt2pt_uncoded(
    cfg: &SimConfig,
    alpha: f64,
    beta: f64,
    src: &SourceParams,
    p: f64,
    noise: f64,
) -> Result<SchemeEmpirics> {
    if alpha < 0.0 || beta < 0.0 {
        return Err(Error::OutOfDomain(format!(
            "weights must be nonnegative, got ({alpha}, {beta})"
        )));
    }
    if alpha == 0.0 && beta == 0.0 {
        return Err(Error::ZeroInput);
    }
    let s = src.sigma2();
    let rho = src.rho();
    let k = (p / (s * (alpha * alpha + 2.0 * rho * alpha * beta + beta * beta))).sqrt();
    let c1 = k * s * (alpha + rho * beta) / (p + noise);
    let c2 = k * s * (beta + rho * alpha) / (p + noise);
    let outcomes = run_trials(cfg, |t| {
        let (s1, s2) = gen_source(src, cfg.n, &mut substream(cfg.seed, t, Role::Source));
        let z = gen_noise(noise, cfg.n, &mut substream(cfg.seed, t, Role::Noise));
        let x: Vec<f64> = (0..cfg.n).map(|i| k * (alpha * s1[i] + beta * s2[i])).collect();
        let y: Vec<f64> = x.iter().zip(&z).map(|(a, b)| a + b).collect();
        let e1: Vec<f64> = y.iter().map(|v| c1 * v).collect();
        let e2: Vec<f64> = y.iter().map(|v| c2 * v).collect();
        let mut o = TrialOutcome {
            energy: [energy(&x), 0.0],
            ..Default::default()
        };
        o.record(&s1, &s2, &e1, &e2);
        Ok(o)
    })?;
    Ok(aggregate(cfg, &outcomes, true))
}

/// Output of one quantizer run.
struct Quantized {
    index: Option<usize>,
    word: Vec<f64>,
    codebook: Option<Codebook>,
}

fn quantize<R: Rng + ?Sized>(
    s: &[f64],
    rate: f64,
    sigma2: f64,
    epsilon: f64,
    keep_codebook: bool,
    rng: &mut R,
) -> Result<Quantized> {
    let n = s.len();
    let bits = codebook_bits(n, rate);
    let small = bits <= EXPLICIT_MAX_BITS && (1u64 << bits) * n as u64 <= EXPLICIT_MAX_ENTRIES;
    if keep_codebook || small {
        let cb = build_codebook(n, rate, sigma2, rng)?;
        let index = vq_encode(s, &cb, epsilon);
        let word = index.map_or_else(|| vec![0.0; n], |i| cb.word(i).to_vec());
        Ok(Quantized {
            index,
            word,
            codebook: keep_codebook.then_some(cb),
        })
    } else {
        let word = sample_selected_codeword(s, rate, sigma2, epsilon, rng);
        Ok(Quantized {
            index: word.as_ref().map(|_| 0),
            word: word.unwrap_or_else(|| vec![0.0; n]),
            codebook: None,
        })
    }
}

fn check_joint_budget(cfg: &SimConfig, r: RatePair) -> Result<()> {
    if cfg.decoder_mode == DecoderMode::FullJoint {
        let bits = codebook_bits(cfg.n, r.r1) + codebook_bits(cfg.n, r.r2);
        if bits > FULL_JOINT_MAX_BITS {
            return Err(Error::BudgetExceeded {
                bits,
                limit: FULL_JOINT_MAX_BITS,
            });
        }
    }
    Ok(())
}

/// Codeword estimates at the receiver: the transmitted words under the genie,
/// the jointly decoded words otherwise. Also reports a decoding mismatch.
fn receive(
    cfg: &SimConfig,
    q1: &Quantized,
    q2: &Quantized,
    y: &[f64],
    gains: (f64, f64),
    rho_tilde: f64,
) -> (Vec<f64>, Vec<f64>, bool) {
    match (cfg.decoder_mode, &q1.codebook, &q2.codebook) {
        (DecoderMode::FullJoint, Some(cb1), Some(cb2)) => {
            let decision = vq_joint_decode(y, cb1, cb2, gains.0, gains.1, rho_tilde, cfg.epsilon);
            let (u1, u2) = match decision {
                Some((i, j)) => (cb1.word(i).to_vec(), cb2.word(j).to_vec()),
                None => (vec![0.0; cfg.n], vec![0.0; cfg.n]),
            };
            let sent = q1.index.zip(q2.index);
            (u1, u2, decision != sent)
        }
        _ => (q1.word.clone(), q2.word.clone(), false),
    }
}

/// Vector-quantizer scheme with fresh random codebooks per trial.
pub fn sim_vq(
    cfg: &SimConfig,
    src: &SourceParams,
    ch: &MacChannel,
    r: RatePair,
) -> Result<SchemeEmpirics> {
    Ok(aggregate(cfg, &vq_outcomes(cfg, src, ch, r)?, false))
}

fn vq_outcomes(
    cfg: &SimConfig,
    src: &SourceParams,
    ch: &MacChannel,
    r: RatePair,
) -> Result<Vec<TrialOutcome>> {
    check_joint_budget(cfg, r)?;
    let coeffs = vq_estimator_coeffs(r, src, ch);
    let keep = cfg.decoder_mode == DecoderMode::FullJoint;
    let s = src.sigma2();
    run_trials(cfg, |t| {
        let (s1, s2) = gen_source(src, cfg.n, &mut substream(cfg.seed, t, Role::Source));
        let q1 = quantize(&s1, r.r1, s, cfg.epsilon, keep, &mut substream(cfg.seed, t, Role::Codebook1))?;
        let q2 = quantize(&s2, r.r2, s, cfg.epsilon, keep, &mut substream(cfg.seed, t, Role::Codebook2))?;
        let z = gen_noise(ch.noise(), cfg.n, &mut substream(cfg.seed, t, Role::Noise));
        let x1: Vec<f64> = q1.word.iter().map(|u| coeffs.alpha1 * u).collect();
        let x2: Vec<f64> = q2.word.iter().map(|u| coeffs.alpha2 * u).collect();
        let y: Vec<f64> = (0..cfg.n).map(|k| x1[k] + x2[k] + z[k]).collect();
        let gains = (coeffs.alpha1, coeffs.alpha2);
        let (u1, u2, mismatch) = receive(cfg, &q1, &q2, &y, gains, coeffs.rho_tilde);
        let e1: Vec<f64> = (0..cfg.n)
            .map(|k| coeffs.gamma11 * u1[k] + coeffs.gamma12 * u2[k])
            .collect();
        let e2: Vec<f64> = (0..cfg.n)
            .map(|k| coeffs.gamma21 * u1[k] + coeffs.gamma22 * u2[k])
            .collect();
        let both = q1.index.is_some() && q2.index.is_some();
        let mut o = TrialOutcome {
            energy: [energy(&x1), energy(&x2)],
            encoders: 2,
            encode_failures: q1.index.is_none() as u32 + q2.index.is_none() as u32,
            decoded: both,
            decode_error: mismatch,
            ..Default::default()
        };
        o.record(&s1, &s2, &e1, &e2);
        Ok(o)
    })
}

/// Superposition scheme: `X_i = alpha_i S_i + beta_i U_i`, estimates linear
/// in the two codewords and the channel output.
pub fn sim_superposition(
    cfg: &SimConfig,
    src: &SourceParams,
    ch: &MacChannel,
    sp: SuperpositionConfig,
) -> Result<SchemeEmpirics> {
    Ok(aggregate(cfg, &sp_outcomes(cfg, src, ch, sp)?, false))
}

fn sp_outcomes(
    cfg: &SimConfig,
    src: &SourceParams,
    ch: &MacChannel,
    sp: SuperpositionConfig,
) -> Result<Vec<TrialOutcome>> {
    let r = RatePair { r1: sp.r1, r2: sp.r2 };
    check_joint_budget(cfg, r)?;
    let d = sp_derive(sp, src, ch)?;
    let keep = cfg.decoder_mode == DecoderMode::FullJoint;
    let s = src.sigma2();
    run_trials(cfg, |t| {
        let (s1, s2) = gen_source(src, cfg.n, &mut substream(cfg.seed, t, Role::Source));
        let q1 = quantize(&s1, r.r1, s, cfg.epsilon, keep, &mut substream(cfg.seed, t, Role::Codebook1))?;
        let q2 = quantize(&s2, r.r2, s, cfg.epsilon, keep, &mut substream(cfg.seed, t, Role::Codebook2))?;
        let z = gen_noise(ch.noise(), cfg.n, &mut substream(cfg.seed, t, Role::Noise));
        let x1: Vec<f64> = (0..cfg.n)
            .map(|k| sp.alpha1 * s1[k] + d.beta1 * q1.word[k])
            .collect();
        let x2: Vec<f64> = (0..cfg.n)
            .map(|k| sp.alpha2 * s2[k] + d.beta2 * q2.word[k])
            .collect();
        let y: Vec<f64> = (0..cfg.n).map(|k| x1[k] + x2[k] + z[k]).collect();
        let (u1, u2, mismatch) = receive(cfg, &q1, &q2, &y, (d.beta1p, d.beta2p), d.rho_tilde);
        let estimate = |g: &[f64; 3]| -> Vec<f64> {
            (0..cfg.n)
                .map(|k| g[0] * u1[k] + g[1] * u2[k] + g[2] * y[k])
                .collect()
        };
        let e1 = estimate(&d.gamma1);
        let e2 = estimate(&d.gamma2);
        let both = q1.index.is_some() && q2.index.is_some();
        let mut o = TrialOutcome {
            energy: [energy(&x1), energy(&x2)],
            encoders: 2,
            encode_failures: q1.index.is_none() as u32 + q2.index.is_none() as u32,
            decoded: both,
            decode_error: mismatch,
            ..Default::default()
        };
        o.record(&s1, &s2, &e1, &e2);
        Ok(o)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{mac_uncoded, pt2pt_uncoded, sp_distortions, vq_distortions};

    fn src(rho: f64) -> SourceParams {
        SourceParams::new(1.0, rho).unwrap()
    }

    fn cfg(n: usize, trials: usize, mode: DecoderMode) -> SimConfig {
        SimConfig::new(n, trials, DEFAULT_EPSILON, 2024, mode).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(1, 1, 0.05, 0, DecoderMode::Genie).is_err());
        assert!(SimConfig::new(10, 0, 0.05, 0, DecoderMode::Genie).is_err());
        assert!(SimConfig::new(10, 1, 0.3, 0, DecoderMode::Genie).is_err());
        assert!(SimConfig::new(10, 1, 0.0, 0, DecoderMode::Genie).is_err());
    }

    #[test]
    fn source_statistics() {
        let mut rng = substream(1, 0, Role::Source);
        let n = 1_000_000;
        let (s1, s2) = gen_source(&src(0.5), n, &mut rng);
        let m = n as f64;
        let v1 = energy(&s1) / m;
        let v2 = energy(&s2) / m;
        let c = s1.iter().zip(&s2).map(|(a, b)| a * b).sum::<f64>() / m;
        assert!((v1 - 1.0).abs() < 0.01 && (v2 - 1.0).abs() < 0.01);
        assert!((c / (v1 * v2).sqrt() - 0.5).abs() < 0.005);

        let n = 10_000;
        let (s1, s2) = gen_source(&src(0.0), n, &mut rng);
        let r = s1.iter().zip(&s2).map(|(a, b)| a * b).sum::<f64>()
            / (energy(&s1) * energy(&s2)).sqrt();
        assert!(r.abs() < 4.0 / (n as f64).sqrt());
    }

    #[test]
    fn uncoded_mac_matches_closed_form() {
        let s = src(0.5);
        let ch = MacChannel::symmetric(1.0, 2.0).unwrap();
        let e = sim_uncoded_mac(&cfg(10_000, 100, DecoderMode::Genie), &s, &ch).unwrap();
        let d = mac_uncoded(&s, &ch);
        assert!((e.d1_hat - d.d1).abs() < 0.005 && (e.d2_hat - d.d2).abs() < 0.005);
        assert!((e.d1_hat - d.d1).abs() < 4.0 * e.d1_se);
        assert!((e.power_used.0 - 1.0).abs() < 0.01 && (e.power_used.1 - 1.0).abs() < 0.01);
        assert_eq!(e.decode_error_rate, 0.0);

        let ch = MacChannel::symmetric(1.0, 1e-9).unwrap();
        let e = sim_uncoded_mac(&cfg(10_000, 20, DecoderMode::Genie), &s, &ch).unwrap();
        assert!((e.d1_hat - 0.25).abs() < 0.01);
    }

    #[test]
    fn pt2pt_matches_closed_form() {
        let s = src(0.5);
        let c = cfg(10_000, 100, DecoderMode::Genie);
        for &(a, b) in &[(1.0, 1.0), (1.0, 0.0), (0.3, 1.2)] {
            let e = sim_pt2pt_uncoded(&c, a, b, &s, 1.0, 2.0).unwrap();
            let d = pt2pt_uncoded(a, b, &s, 1.0, 2.0).unwrap();
            assert!((e.d1_hat - d.d1).abs() < 4.0 * e.d1_se, "{} vs {}", e.d1_hat, d.d1);
            assert!((e.d2_hat - d.d2).abs() < 4.0 * e.d2_se, "{} vs {}", e.d2_hat, d.d2);
        }
        assert!(sim_pt2pt_uncoded(&c, 0.0, 0.0, &s, 1.0, 1.0).is_err());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let s = src(0.5);
        let ch = MacChannel::symmetric(10.0, 1.0).unwrap();
        let c = cfg(200, 16, DecoderMode::Genie);
        let r = RatePair { r1: 0.5, r2: 0.5 };
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sim_vq(&c, &s, &ch, r).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn genie_vq_independent_sources_reach_marginal_distortion() {
        let s = src(0.0);
        let ch = MacChannel::symmetric(10.0, 1.0).unwrap();
        let r = RatePair { r1: 0.5, r2: 0.5 };
        let e = sim_vq(&cfg(1000, 30, DecoderMode::Genie), &s, &ch, r).unwrap();
        assert!((e.d1_hat / 0.5 - 1.0).abs() < 0.05, "{}", e.d1_hat);
        assert_eq!(e.encode_failure_rate, 0.0);
        assert!((e.power_used.0 / 10.0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn genie_vq_close_to_closed_form() {
        let s = src(0.5);
        let ch = MacChannel::symmetric(10.0, 1.0).unwrap();
        let r = RatePair { r1: 0.5, r2: 0.5 };
        let e = sim_vq(&cfg(1000, 30, DecoderMode::Genie), &s, &ch, r).unwrap();
        let d = vq_distortions(r, &s);
        assert!((e.d1_hat / d.d1 - 1.0).abs() < 0.1);
        assert!(e.d1_hat >= d.d1 - 3.0 * e.d1_se);
    }

    #[test]
    fn superposition_genie_close_to_closed_form() {
        let s = src(0.5);
        let ch = MacChannel::symmetric(2.0, 1.0).unwrap();
        let sp = SuperpositionConfig::symmetric(0.6, 0.5);
        let e = sim_superposition(&cfg(1000, 30, DecoderMode::Genie), &s, &ch, sp).unwrap();
        let d = sp_distortions(&sp_derive(sp, &s, &ch).unwrap(), &s);
        assert!((e.d1_hat / d.d1 - 1.0).abs() < 0.1, "{} vs {}", e.d1_hat, d.d1);
        assert!((e.power_used.0 / 2.0 - 1.0).abs() < 0.02);
    }

    #[test]
    fn superposition_without_direct_path_tracks_vq() {
        let s = src(0.5);
        let ch = MacChannel::symmetric(10.0, 1.0).unwrap();
        let c = cfg(600, 30, DecoderMode::Genie);
        let r = RatePair { r1: 0.5, r2: 0.5 };
        let vq = sim_vq(&c, &s, &ch, r).unwrap();
        let sp = sim_superposition(&c, &s, &ch, SuperpositionConfig::symmetric(0.5, 0.0)).unwrap();
        let margin = 3.0 * (vq.d1_se.powi(2) + sp.d1_se.powi(2)).sqrt();
        assert!((vq.d1_hat - sp.d1_hat).abs() < margin + 0.005 * vq.d1_hat);
    }

    #[test]
    fn simulate_records_match_aggregate() {
        let s = src(0.5);
        let ch = MacChannel::symmetric(10.0, 1.0).unwrap();
        let c = cfg(300, 12, DecoderMode::Genie);
        let r = RatePair { r1: 0.5, r2: 0.5 };
        let run = simulate(&c, &s, &ch, Scheme::Vq(r)).unwrap();
        assert_eq!(run.empirics, sim_vq(&c, &s, &ch, r).unwrap());
        assert_eq!(run.trials.len(), 12);
        let mean = run.trials.iter().map(|t| t.d1).sum::<f64>() / 12.0;
        assert!((mean - run.empirics.d1_hat).abs() < 1e-12);
        assert!(run.trials.iter().enumerate().all(|(i, t)| t.trial == i as u64));
    }

    #[test]
    fn full_joint_budget_enforced() {
        let s = src(0.5);
        let ch = MacChannel::symmetric(10.0, 1.0).unwrap();
        let c = cfg(64, 1, DecoderMode::FullJoint);
        let err = sim_vq(&c, &s, &ch, RatePair { r1: 0.25, r2: 0.25 }).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { bits: 32, limit: 24 }));
    }

    #[test]
    fn full_joint_decoding_small_blocks() {
        let s = src(0.5);
        let ch = MacChannel::symmetric(100.0, 1.0).unwrap();
        let c = SimConfig::new(16, 400, 0.1, 7, DecoderMode::FullJoint).unwrap();
        let e = sim_vq(&c, &s, &ch, RatePair { r1: 0.25, r2: 0.25 }).unwrap();
        assert!(e.decoded_trials > 0);
        assert!(e.decode_error_rate < 0.2, "{}", e.decode_error_rate);
        assert!(e.encode_failure_rate > 0.0 && e.encode_failure_rate < 1.0);
    }
}
