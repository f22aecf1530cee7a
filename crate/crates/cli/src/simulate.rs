//! Monte-Carlo runs of one scheme with closed-form references.

use std::io::Write;

use gaussmac::mcsim::{simulate, Scheme, SimRun};
use gaussmac::model::DistortionPair;
use gaussmac::schemes::{
    mac_uncoded, sp_derive, sp_distortions, sp_rate_feasible, vq_distortions, vq_rate_feasible,
};

use crate::config::SimSettings;
use crate::error::Result;
use crate::output::{fmt_f64, fmt_opt, writer};

/// Closed-form distortions of the configured scheme and, for coded
/// schemes, whether its rates satisfy the channel constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub distortions: DistortionPair,
    pub rates_feasible: Option<bool>,
}

pub fn reference(s: &SimSettings) -> Result<Reference> {
    Ok(match s.scheme {
        Scheme::Uncoded => Reference {
            distortions: mac_uncoded(&s.src, &s.ch),
            rates_feasible: None,
        },
        Scheme::Vq(r) => Reference {
            distortions: vq_distortions(r, &s.src),
            rates_feasible: Some(vq_rate_feasible(r, &s.src, &s.ch).0),
        },
        Scheme::Superposition(cfg) => {
            let d = sp_derive(cfg, &s.src, &s.ch)?;
            Reference {
                distortions: sp_distortions(&d, &s.src),
                rates_feasible: Some(sp_rate_feasible(&d, &s.src).0),
            }
        }
    })
}

pub struct SimulateOutput {
    pub run: SimRun,
    pub reference: Reference,
}

pub fn run_simulate(s: &SimSettings) -> Result<SimulateOutput> {
    let reference = reference(s)?;
    let run = simulate(&s.sim, &s.src, &s.ch, s.scheme)?;
    Ok(SimulateOutput { run, reference })
}

fn z_score(value: f64, se: f64, reference: f64) -> Option<f64> {
    (se > 0.0).then(|| (value - reference) / se)
}

/// Summary table: `metric,value,std_error,reference,z_score`.
pub fn write_summary<W: Write>(out: &SimulateOutput, w: W) -> Result<()> {
    let e = &out.run.empirics;
    let d = out.reference.distortions;
    let mut w = writer(w);
    w.write_record(["metric", "value", "std_error", "reference", "z_score"])?;
    let estimate = |metric: &str, value: f64, se: f64, reference: f64| {
        [
            metric.to_string(),
            fmt_f64(value),
            fmt_f64(se),
            fmt_f64(reference),
            fmt_opt(z_score(value, se, reference)),
        ]
    };
    let plain = |metric: &str, value: String| {
        [metric.to_string(), value, String::new(), String::new(), String::new()]
    };
    w.write_record(estimate("d1", e.d1_hat, e.d1_se, d.d1))?;
    w.write_record(estimate("d2", e.d2_hat, e.d2_se, d.d2))?;
    w.write_record(plain("power1", fmt_f64(e.power_used.0)))?;
    w.write_record(plain("power2", fmt_f64(e.power_used.1)))?;
    w.write_record(plain("encode_failure_rate", fmt_f64(e.encode_failure_rate)))?;
    w.write_record(plain("decode_error_rate", fmt_f64(e.decode_error_rate)))?;
    w.write_record(plain("trials", e.trials_run.to_string()))?;
    w.write_record(plain("decoded_trials", e.decoded_trials.to_string()))?;
    if let Some(ok) = out.reference.rates_feasible {
        w.write_record(plain("rates_feasible", ok.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// One row per trial.
pub fn write_trials<W: Write>(run: &SimRun, w: W) -> Result<()> {
    let mut w = writer(w);
    w.write_record([
        "trial",
        "d1",
        "d2",
        "power1",
        "power2",
        "encode_failures",
        "decoded",
        "decode_error",
    ])?;
    for t in &run.trials {
        w.write_record([
            t.trial.to_string(),
            fmt_f64(t.d1),
            fmt_f64(t.d2),
            fmt_f64(t.power1),
            fmt_f64(t.power2),
            t.encode_failures.to_string(),
            (t.decoded as u8).to_string(),
            (t.decode_error as u8).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, resolve};

    fn settings(text: &str) -> SimSettings {
        resolve(&parse_config(text, "t").unwrap(), None, false).unwrap()
    }

    #[test]
    fn uncoded_summary_within_three_sigma() {
        let s = settings("rho = 0.5\np1 = 1\nnoise = 2\nn = 5000\ntrials = 20\nseed = 3\n");
        let out = run_simulate(&s).unwrap();
        assert!((out.reference.distortions.d1 - 0.55).abs() < 1e-12);
        let e = out.run.empirics;
        assert!(((e.d1_hat - 0.55) / e.d1_se).abs() <= 3.0);
        let mut buf = Vec::new();
        write_summary(&out, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("metric,value,std_error,reference,z_score\nd1,"));
        assert!(!text.contains("rates_feasible"));
    }

    #[test]
    fn trial_table_shape() {
        let s = settings("scheme = vq\nn = 100\ntrials = 4\np1 = 10\n");
        let out = run_simulate(&s).unwrap();
        assert_eq!(out.reference.rates_feasible, Some(true));
        let mut buf = Vec::new();
        write_trials(&out.run, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(1).unwrap().starts_with("0,"));
    }

    #[test]
    fn budget_error_maps_to_exit_code_two() {
        let s = settings("scheme = vq\nmode = full\nn = 200\ntrials = 1\n");
        let err = run_simulate(&s).err().unwrap();
        assert_eq!(err.exit_code(), 2);
    }
}
