//! Plain-text spectrum ingestion.
//!
//! Format: UTF-8 text, one real level per line (decimal or scientific
//! notation), lines starting with '#' and blank lines ignored. Levels are
//! sorted ascending; pairs coinciding to 1e-13 relative precision are
//! flagged in the provenance metadata.

use crate::error::{Error, Result};
use crate::spectrum::{Spectrum, SpectrumSource};
use std::fs;
use std::path::Path;

pub fn ingest_spectrum_file(path: &Path) -> Result<Spectrum> {
    let text = fs::read_to_string(path)?;
    let mut levels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("cannot parse {trimmed:?} as a real number"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse { line: i + 1, message: "level must be finite".into() });
        }
        levels.push(value);
    }
    if levels.is_empty() {
        return Err(Error::Parse { line: 0, message: "file contains no levels".into() });
    }
    let mut s = Spectrum::from_unsorted(levels, SpectrumSource::File(path.display().to_string()));
    s.near_duplicates = s.count_near_duplicates(1e-13);
    Ok(s)
}

/// Spectrum decimation for symmetry-transmutation studies (e.g. GSE
/// statistics from half a spectrum with every second level dropped).
/// The operation order is explicit: a prefix of `take_fraction` of the
/// levels is kept first, then every `keep_every`-th of those starting at
/// `offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecimationSpec {
    /// Fraction of the (sorted) spectrum's prefix to keep, in (0, 1].
    pub take_fraction: f64,
    /// Keep one level in every `keep_every` (1 keeps all).
    pub keep_every: usize,
    /// Index offset of the first kept level within the prefix.
    pub offset: usize,
}

impl Default for DecimationSpec {
    fn default() -> Self {
        DecimationSpec { take_fraction: 1.0, keep_every: 1, offset: 0 }
    }
}

pub fn decimate(s: &Spectrum, d: &DecimationSpec) -> Result<Spectrum> {
    if !(d.take_fraction > 0.0 && d.take_fraction <= 1.0) {
        return Err(Error::parameter("take_fraction must be in (0, 1]"));
    }
    if d.keep_every == 0 {
        return Err(Error::parameter("keep_every must be >= 1"));
    }
    let prefix = ((s.len() as f64) * d.take_fraction).round() as usize;
    let prefix = prefix.min(s.len());
    let levels: Vec<f64> = s.levels()[..prefix]
        .iter()
        .copied()
        .skip(d.offset)
        .step_by(d.keep_every)
        .collect();
    if levels.is_empty() {
        return Err(Error::parameter("decimation removed every level"));
    }
    let mut out = Spectrum::from_sorted(levels, s.source.clone())?;
    out.seed = s.seed;
    Ok(out)
}
