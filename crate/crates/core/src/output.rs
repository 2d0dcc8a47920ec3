//! File formats: trace CSVs, plain PGM snapshots, and the config digest
//! embedded in every output.

use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::closed_form::PeelRecord;
use crate::dynamics::StepRecord;
use crate::error::Result;
use crate::field::ResourceField;
use crate::quantity::Quantity;

pub const TRACE_HEADER: &str = "step,total,sink,positive,ties";
pub const PEEL_HEADER: &str = "step,alive,total,sink,flux_stab";

/// First 16 hex digits of the SHA-256 of the value's JSON serialization.
pub fn digest<T: Serialize>(value: &T) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    Ok(hex::encode(&Sha256::digest(&bytes)[..8]))
}

pub fn write_trace_csv<Q: Quantity, W: Write>(
    mut w: W,
    digest: &str,
    records: &[StepRecord<Q>],
) -> Result<()> {
    writeln!(w, "# config_digest={digest}")?;
    writeln!(w, "{TRACE_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.step, r.total, r.sink, r.positive, r.ties
        )?;
    }
    Ok(())
}

pub fn write_peel_csv<Q: Quantity, W: Write>(
    mut w: W,
    digest: &str,
    records: &[PeelRecord<Q>],
) -> Result<()> {
    writeln!(w, "# config_digest={digest}")?;
    writeln!(w, "{PEEL_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.step, r.alive, r.total, r.sink, r.flux_stab
        )?;
    }
    Ok(())
}

/// Plain (P2) graymap of the slice with all coordinates past the second
/// set to zero. Rows follow the first coordinate. Gray level is
/// `round(255 * value / scale)`, clamped to 255.
pub fn write_pgm<Q: Quantity, W: Write>(
    mut w: W,
    digest: &str,
    field: &ResourceField<Q>,
    scale: f64,
) -> Result<()> {
    let sides = field.spec().sides();
    let (rows, cols) = match sides.len() {
        1 => (1, sides[0]),
        _ => (sides[0], sides[1]),
    };
    // stride of the first coordinate in a row-major layout
    let row_stride: usize = sides.iter().skip(1).product();
    let col_stride: usize = if sides.len() > 1 {
        sides.iter().skip(2).product()
    } else {
        1
    };
    writeln!(w, "P2")?;
    writeln!(w, "# config_digest={digest} step={}", field.step())?;
    writeln!(w, "{cols} {rows}")?;
    writeln!(w, "255")?;
    for r in 0..rows {
        let line: Vec<String> = (0..cols)
            .map(|c| {
                let v = field.get(r * row_stride + c * col_stride).to_f64();
                let g = if scale > 0.0 {
                    (255.0 * v / scale).round().min(255.0)
                } else {
                    0.0
                };
                (g as u32).to_string()
            })
            .collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}
