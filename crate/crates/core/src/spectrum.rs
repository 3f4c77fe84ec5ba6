//! Ordered eigenvalue sequences with provenance.

use crate::error::{Error, Result};

/// Where a spectrum came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectrumSource {
    /// Sampled from an ensemble; the string is a compact spec like
    /// "hermite n=1000 beta=2".
    Ensemble(String),
    /// Produced by a physical model ("billiard a^4=2 b^4=5", "ising L=14 ...").
    Model(String),
    /// Ingested from a text file.
    File(String),
}

/// An ascending sequence of real levels. The universal input of every
/// statistic in the crate.
#[derive(Debug, Clone)]
pub struct Spectrum {
    levels: Vec<f64>,
    pub source: SpectrumSource,
    pub seed: Option<u64>,
    /// Count of level pairs closer than 1e-13 relative, flagged at ingestion.
    pub near_duplicates: usize,
}

impl Spectrum {
    /// Build from levels that are already sorted ascending.
    pub fn from_sorted(levels: Vec<f64>, source: SpectrumSource) -> Result<Self> {
        if levels.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::parameter("levels must be ascending"));
        }
        Ok(Spectrum { levels, source, seed: None, near_duplicates: 0 })
    }

    /// Build from unordered levels; sorts them.
    pub fn from_unsorted(mut levels: Vec<f64>, source: SpectrumSource) -> Self {
        levels.sort_by(f64::total_cmp);
        Spectrum { levels, source, seed: None, near_duplicates: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Nearest-neighbor spacings s_n = λ_{n+1} − λ_n.
    pub fn spacings(&self) -> Vec<f64> {
        self.levels.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Count pairs of consecutive levels equal to within `rel` relative
    /// precision (scale taken from the larger magnitude, with an absolute
    /// floor for levels near zero).
    pub fn count_near_duplicates(&self, rel: f64) -> usize {
        self.levels
            .windows(2)
            .filter(|w| {
                let scale = w[0].abs().max(w[1].abs()).max(1e-300);
                (w[1] - w[0]).abs() <= rel * scale
            })
            .count()
    }
}
