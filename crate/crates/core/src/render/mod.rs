//! Trace files and per-evaluation SVG frames.

mod export;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

pub use export::{export_trace, fmt_f64, TraceFormat, CSV_HEADER};
pub use svg::{render_frame, y_range, FrameStyle};

use crate::error::{Error, Result};
use crate::lti::StepResponse;
use crate::objective::SettlingBand;
use crate::search::SearchTrace;

/// Playback rate written to `index.json`.
pub const FRAMES_PER_SECOND: u32 = 12;

pub fn frame_name(index: usize) -> String {
    format!("film_{index}.svg")
}

#[derive(Serialize)]
struct BandLines {
    upper: f64,
    lower: f64,
}

#[derive(Serialize)]
struct FrameIndex<'a> {
    frames: Vec<String>,
    fps: u32,
    band: BandLines,
    plant: &'a str,
}

fn write_file(path: PathBuf, bytes: &[u8]) -> Result<()> {
    fs::write(&path, bytes).map_err(|source| Error::OutputUnwritable { path, source })
}

/// Writes `film_1.svg .. film_N.svg` and then `index.json` into `out_dir`.
/// Returns the number of frames.
pub fn render_animation(
    trace: &SearchTrace,
    responses: &[StepResponse],
    band: &SettlingBand,
    style: &FrameStyle,
    out_dir: &Path,
    plant: &str,
) -> Result<usize> {
    if responses.len() != trace.len() {
        return Err(Error::InvalidConfig(format!(
            "{} responses for {} records",
            responses.len(),
            trace.len()
        )));
    }
    fs::create_dir_all(out_dir).map_err(|source| Error::OutputUnwritable {
        path: out_dir.to_path_buf(),
        source,
    })?;

    trace
        .records
        .par_iter()
        .zip(responses.par_iter())
        .try_for_each(|(record, response)| {
            let svg = render_frame(record, response, band, style);
            write_file(out_dir.join(frame_name(record.index)), svg.as_bytes())
        })?;

    let index = FrameIndex {
        frames: trace.records.iter().map(|r| frame_name(r.index)).collect(),
        fps: FRAMES_PER_SECOND,
        band: BandLines {
            upper: band.upper,
            lower: band.lower,
        },
        plant,
    };
    let mut json = serde_json::to_vec_pretty(&index).expect("index serializes");
    json.push(b'\n');
    write_file(out_dir.join("index.json"), &json)?;
    Ok(trace.len())
}
