//! Flat `key = value` configuration for simulations. Blank lines and lines
//! starting with `#` are ignored; unknown keys are errors.

use clap::{Args, ValueEnum};
use gaussmac::mcsim::{DecoderMode, Scheme, SimConfig, DEFAULT_EPSILON};
use gaussmac::model::{MacChannel, RatePair, SourceParams};
use gaussmac::schemes::SuperpositionConfig;

use crate::error::{CliError, Result};

pub const SEED_ENV: &str = "GAUSSMAC_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeKind {
    Uncoded,
    Vq,
    Superposition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeKind {
    Genie,
    Full,
}

impl From<ModeKind> for DecoderMode {
    fn from(m: ModeKind) -> Self {
        match m {
            ModeKind::Genie => DecoderMode::Genie,
            ModeKind::Full => DecoderMode::FullJoint,
        }
    }
}

/// Simulation settings; every field is optional so files and flags can be
/// layered.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct SimOptions {
    /// Source variance
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Source correlation coefficient
    #[arg(long)]
    pub rho: Option<f64>,
    /// Power of transmitter 1
    #[arg(long)]
    pub p1: Option<f64>,
    /// Power of transmitter 2 (defaults to p1)
    #[arg(long)]
    pub p2: Option<f64>,
    /// Channel noise variance
    #[arg(long)]
    pub noise: Option<f64>,
    /// Blocklength
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Typicality window of the encoders and the joint decoder
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub rate1: Option<f64>,
    /// Defaults to rate1
    #[arg(long)]
    pub rate2: Option<f64>,
    /// Direct-path gain of transmitter 1 (superposition)
    #[arg(long)]
    pub alpha1: Option<f64>,
    /// Defaults to alpha1
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeKind>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeKind>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| format!("cannot parse `{value}` for `{key}`: {e}"))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> std::result::Result<T, String> {
    T::from_str(value, true).map_err(|_| {
        let options: Vec<String> = T::value_variants()
            .iter()
            .filter_map(|v| v.to_possible_value().map(|p| p.get_name().to_string()))
            .collect();
        format!("`{value}` is not a valid `{key}` (expected one of {})", options.join(", "))
    })
}

impl SimOptions {
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "sigma2" => self.sigma2 = Some(parse_value(key, value)?),
            "rho" => self.rho = Some(parse_value(key, value)?),
            "p1" => self.p1 = Some(parse_value(key, value)?),
            "p2" => self.p2 = Some(parse_value(key, value)?),
            "noise" => self.noise = Some(parse_value(key, value)?),
            "n" => self.n = Some(parse_value(key, value)?),
            "trials" => self.trials = Some(parse_value(key, value)?),
            "epsilon" => self.epsilon = Some(parse_value(key, value)?),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "rate1" => self.rate1 = Some(parse_value(key, value)?),
            "rate2" => self.rate2 = Some(parse_value(key, value)?),
            "alpha1" => self.alpha1 = Some(parse_value(key, value)?),
            "alpha2" => self.alpha2 = Some(parse_value(key, value)?),
            "mode" => self.mode = Some(parse_enum(key, value)?),
            "scheme" => self.scheme = Some(parse_enum(key, value)?),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(self, other: SimOptions) -> SimOptions {
        SimOptions {
            sigma2: other.sigma2.or(self.sigma2),
            rho: other.rho.or(self.rho),
            p1: other.p1.or(self.p1),
            p2: other.p2.or(self.p2),
            noise: other.noise.or(self.noise),
            n: other.n.or(self.n),
            trials: other.trials.or(self.trials),
            epsilon: other.epsilon.or(self.epsilon),
            seed: other.seed.or(self.seed),
            rate1: other.rate1.or(self.rate1),
            rate2: other.rate2.or(self.rate2),
            alpha1: other.alpha1.or(self.alpha1),
            alpha2: other.alpha2.or(self.alpha2),
            mode: other.mode.or(self.mode),
            scheme: other.scheme.or(self.scheme),
        }
    }
}

/// Parses a configuration file; `source_name` labels diagnostics.
pub fn parse_config(text: &str, source_name: &str) -> Result<SimOptions> {
    let mut opts = SimOptions::default();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let err = |msg: String| CliError::ConfigLine {
            source_name: source_name.to_string(),
            line: i + 1,
            msg,
        };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        opts.set(key, value).map_err(err)?;
    }
    Ok(opts)
}

/// Fully resolved simulation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub src: SourceParams,
    pub ch: MacChannel,
    pub sim: SimConfig,
    pub scheme: Scheme,
}

/// Applies defaults and validates. `env_seed` replaces the configured seed
/// unless `flag_seed` says it came from the command line.
pub fn resolve(opts: &SimOptions, env_seed: Option<&str>, flag_seed: bool) -> Result<SimSettings> {
    let field = |key: &str, e: gaussmac::Error| CliError::Field {
        key: key.into(),
        msg: e.to_string(),
    };
    let sigma2 = opts.sigma2.unwrap_or(1.0);
    let rho = opts.rho.unwrap_or(0.5);
    let src = SourceParams::new(sigma2, rho).map_err(|e| field("sigma2/rho", e))?;
    let p1 = opts.p1.unwrap_or(1.0);
    let ch = MacChannel::new(p1, opts.p2.unwrap_or(p1), opts.noise.unwrap_or(1.0))
        .map_err(|e| field("p1/p2/noise", e))?;

    let seed = match (env_seed, flag_seed) {
        (Some(v), false) => v.trim().parse().map_err(|_| CliError::Field {
            key: SEED_ENV.into(),
            msg: format!("`{v}` is not an unsigned integer"),
        })?,
        _ => opts.seed.unwrap_or(0),
    };
    let sim = SimConfig::new(
        opts.n.unwrap_or(1000),
        opts.trials.unwrap_or(50),
        opts.epsilon.unwrap_or(DEFAULT_EPSILON),
        seed,
        opts.mode.unwrap_or(ModeKind::Genie).into(),
    )
    .map_err(|e| field("n/trials/epsilon", e))?;

    let rate1 = opts.rate1.unwrap_or(0.5);
    let rate2 = opts.rate2.unwrap_or(rate1);
    let rates = RatePair::new(rate1, rate2).map_err(|e| field("rate1/rate2", e))?;
    let alpha1 = opts.alpha1.unwrap_or(0.0);
    let alpha2 = opts.alpha2.unwrap_or(alpha1);
    let scheme = match opts.scheme.unwrap_or(SchemeKind::Uncoded) {
        SchemeKind::Uncoded => Scheme::Uncoded,
        SchemeKind::Vq => Scheme::Vq(rates),
        SchemeKind::Superposition => Scheme::Superposition(SuperpositionConfig {
            r1: rates.r1,
            r2: rates.r2,
            alpha1,
            alpha2,
        }),
    };
    Ok(SimSettings {
        src,
        ch,
        sim,
        scheme,
    })
}
