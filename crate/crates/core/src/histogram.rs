//! Binned empirical densities with an explicit edge convention.
//!
//! Bins are left-closed right-open `[e_i, e_{i+1})`; a value equal to an
//! interior edge lands in the right bin. Values outside the edge range are
//! tracked in underflow/overflow counters rather than a catch-all bin, so the
//! r^{−2−β} tails never distort the in-window normalization: density is
//! count / (total · width) with `total` counting every value offered.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    /// All values offered, including out-of-range ones.
    pub total: u64,
}

impl Histogram {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::parameter("histogram needs at least 2 edges"));
        }
        if edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parameter("histogram edges must be strictly ascending"));
        }
        let n = edges.len() - 1;
        Ok(Histogram { edges, counts: vec![0; n], underflow: 0, overflow: 0, total: 0 })
    }

    /// Uniform grid [lo, hi] with `bins` bins.
    pub fn uniform(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(hi > lo) {
            return Err(Error::parameter("histogram: need bins >= 1 and hi > lo"));
        }
        let w = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..=bins).map(|i| lo + w * i as f64).collect();
        // force exact endpoints
        edges[0] = lo;
        edges[bins] = hi;
        Self::new(edges)
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn num_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn add(&mut self, x: f64) {
        self.total += 1;
        let lo = self.edges[0];
        let hi = *self.edges.last().expect("edges nonempty");
        if x < lo {
            self.underflow += 1;
            return;
        }
        if x >= hi {
            self.overflow += 1;
            return;
        }
        // binary search for the bin with edges[i] <= x < edges[i+1]
        let i = match self.edges.binary_search_by(|e| e.total_cmp(&x)) {
            Ok(i) => i,             // exactly on edge i -> right bin = bin i
            Err(i) => i - 1,        // insertion point, bin to the left
        };
        let i = i.min(self.counts.len() - 1);
        self.counts[i] += 1;
    }

    pub fn add_all<I: IntoIterator<Item = f64>>(&mut self, values: I) {
        for v in values {
            self.add(v);
        }
    }

    /// Exact integer merge of two histograms with identical edges.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(Error::parameter("histogram merge requires identical edges"));
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        self.total += other.total;
        Ok(())
    }

    /// Normalized density per bin: count / (total · width). Empty histograms
    /// yield zeros.
    pub fn density(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, w)| c as f64 / (total * (w[1] - w[0])))
            .collect()
    }

    /// Statistical standard error of each density value (binomial).
    pub fn density_std_err(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, w)| {
                let p = c as f64 / total;
                (p * (1.0 - p) / total).sqrt() / (w[1] - w[0])
            })
            .collect()
    }
}
