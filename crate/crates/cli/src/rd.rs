use std::io::Write;

use gaussmac::model::{DistortionPair, SourceParams};
use gaussmac::ratedist::{classify_region, rd_rate_extended, RdRegion};

use crate::error::Result;
use crate::output::{fmt_f64, writer};

pub fn region_tag(r: RdRegion) -> &'static str {
    match r {
        RdRegion::Region1 => "D1",
        RdRegion::Region2 => "D2",
        RdRegion::Region3 => "D3",
    }
}

/// `d1,d2,region,rate_bits` for one distortion pair. Zero distortion has
/// infinite rate and no region.
pub fn write_rd<W: Write>(src: &SourceParams, d1: f64, d2: f64, out: W) -> Result<()> {
    let d = DistortionPair::new(d1, d2)?;
    let rate = rd_rate_extended(d, src)?;
    let region = if rate.is_infinite() {
        ""
    } else {
        region_tag(classify_region(d, src)?)
    };
    let mut w = writer(out);
    w.write_record(["d1", "d2", "region", "rate_bits"])?;
    w.write_record([fmt_f64(d1), fmt_f64(d2), region.to_string(), fmt_f64(rate.to_f64())])?;
    w.flush()?;
    Ok(())
}
