//! Symmetric distortion bounds over a range of `P/N`, normalized by `sigma^2`.

use std::io::Write;

use clap::ValueEnum;
use gaussmac::bounds::{
    high_snr_asymptote_sym, lower_bound_sym, separation_sym, sp_sym_opt, uncoded_sym_dstar,
    vq_sym_opt,
};
use gaussmac::model::SourceParams;
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::output::{fmt_f64, fmt_opt, writer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

/// Sweep columns, in output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Column {
    Lower,
    Separation,
    Uncoded,
    Vq,
    Superposition,
    Asymptote,
}

pub const ALL_COLUMNS: [Column; 6] = [
    Column::Lower,
    Column::Separation,
    Column::Uncoded,
    Column::Vq,
    Column::Superposition,
    Column::Asymptote,
];

pub const HEADER: [&str; 7] = ["snr", "d_lower", "d_sep", "d_uncoded", "d_vq", "d_sup", "d_asym"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub rho: f64,
    pub sigma2: f64,
    pub snr_min: f64,
    pub snr_max: f64,
    pub points: usize,
    pub scale: Scale,
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr: f64,
    /// Indexed like [`ALL_COLUMNS`]; `None` when not requested.
    pub values: [Option<f64>; 6],
}

impl SweepSpec {
    fn validate(&self) -> Result<SourceParams> {
        let bad = |key: &str, msg: String| CliError::Field {
            key: key.into(),
            msg,
        };
        if !(self.snr_min > 0.0 && self.snr_min.is_finite()) {
            return Err(bad("snr-min", format!("{} must be positive", self.snr_min)));
        }
        if !(self.snr_max >= self.snr_min && self.snr_max.is_finite()) {
            return Err(bad(
                "snr-max",
                format!("{} must be finite and at least snr-min", self.snr_max),
            ));
        }
        if self.points < 2 {
            return Err(bad("points", format!("{} must be at least 2", self.points)));
        }
        SourceParams::new(self.sigma2, self.rho).map_err(|e| bad("sigma2/rho", e.to_string()))
    }

    pub fn snr_grid(&self) -> Vec<f64> {
        let k = self.points - 1;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / k as f64;
                match self.scale {
                    Scale::Linear => self.snr_min + t * (self.snr_max - self.snr_min),
                    Scale::Log => (self.snr_min.ln() + t * (self.snr_max / self.snr_min).ln()).exp(),
                }
            })
            .collect()
    }
}

fn column_value(c: Column, src: &SourceParams, snr: f64) -> Result<f64> {
    Ok(match c {
        Column::Lower => lower_bound_sym(src, snr, 1.0),
        Column::Separation => separation_sym(src, snr, 1.0),
        Column::Uncoded => uncoded_sym_dstar(src, snr, 1.0).0,
        Column::Vq => vq_sym_opt(src, snr, 1.0)?.distortion,
        Column::Superposition => sp_sym_opt(src, snr, 1.0)?.distortion,
        Column::Asymptote => high_snr_asymptote_sym(src, snr, 1.0),
    })
}

/// One row per grid point, computed in parallel and returned in grid order.
pub fn run_sweep(plan: &SweepSpec) -> Result<Vec<SweepRow>> {
    let src = plan.validate()?;
    plan.snr_grid()
        .into_par_iter()
        .map(|snr| {
            let mut values = [None; 6];
            for (slot, &c) in ALL_COLUMNS.iter().enumerate() {
                if plan.columns.contains(&c) {
                    values[slot] = Some(column_value(c, &src, snr)? / plan.sigma2);
                }
            }
            Ok(SweepRow { snr, values })
        })
        .collect()
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        let mut record = vec![fmt_f64(row.snr)];
        record.extend(row.values.iter().map(|v| fmt_opt(*v)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
