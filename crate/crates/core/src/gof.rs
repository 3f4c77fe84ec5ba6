//! Goodness-of-fit machinery for comparing empirical histograms and samples
//! against reference densities: per-bin residuals, sup-norm, χ², and
//! Kolmogorov–Smirnov statistics.

use crate::error::Result;
use crate::histogram::Histogram;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// One bin of a residual table.
#[derive(Debug, Clone, Copy)]
pub struct ResidualBin {
    pub left: f64,
    pub right: f64,
    pub empirical: f64,
    pub reference: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub bins: Vec<ResidualBin>,
    /// max |empirical − reference| over bins.
    pub sup_norm: f64,
    pub chi2: f64,
    pub chi2_dof: usize,
    pub chi2_p: f64,
}

/// Bin-averaged reference density by Simpson's rule (exact enough for any
/// smooth density at the bin widths used here).
pub fn bin_average<F: Fn(f64) -> Result<f64>>(pdf: &F, left: f64, right: f64) -> Result<f64> {
    let mid = 0.5 * (left + right);
    Ok((pdf(left)? + 4.0 * pdf(mid)? + pdf(right)?) / 6.0)
}

/// Residuals of an empirical histogram against a reference density.
///
/// The reference value per bin is the bin average of the pdf, so the
/// comparison is unbiased for curved densities. χ² pools bins with expected
/// count below 10 (plus out-of-range mass) into one tail cell.
pub fn compare_histogram<F: Fn(f64) -> Result<f64>>(
    h: &Histogram,
    pdf: F,
) -> Result<ResidualReport> {
    let density = h.density();
    let total = h.total.max(1) as f64;
    let mut bins = Vec::with_capacity(h.num_bins());
    let mut sup = 0.0f64;
    let mut chi2 = 0.0f64;
    let mut cells = 0usize;
    let mut pooled_obs = (h.underflow + h.overflow) as f64;
    let mut pooled_exp = 0.0f64;
    let mut covered_prob = 0.0f64;

    for (i, w) in h.edges().windows(2).enumerate() {
        let reference = bin_average(&pdf, w[0], w[1])?;
        let width = w[1] - w[0];
        let expected = reference * width * total;
        covered_prob += reference * width;
        let observed = h.counts()[i] as f64;
        let empirical = density[i];
        let residual = empirical - reference;
        sup = sup.max(residual.abs());
        bins.push(ResidualBin { left: w[0], right: w[1], empirical, reference, residual });
        if expected >= 10.0 {
            chi2 += (observed - expected) * (observed - expected) / expected;
            cells += 1;
        } else {
            pooled_obs += observed;
            pooled_exp += expected;
        }
    }
    // out-of-window probability mass joins the pooled cell
    pooled_exp += (1.0 - covered_prob).max(0.0) * total;
    if pooled_exp >= 10.0 {
        chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        cells += 1;
    }
    let dof = cells.saturating_sub(1).max(1);
    let chi2_p = chi2_sf(chi2, dof);
    Ok(ResidualReport { bins, sup_norm: sup, chi2, chi2_dof: dof, chi2_p })
}

fn chi2_sf(x: f64, dof: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    match ChiSquared::new(dof as f64) {
        Ok(d) => 1.0 - d.cdf(x),
        Err(_) => f64::NAN,
    }
}

/// Two-sample χ² homogeneity test on histograms with identical edges
/// (bins pooled below an expected count of 10 on either side).
pub fn chi2_two_sample(a: &Histogram, b: &Histogram) -> Result<(f64, usize, f64)> {
    let na: f64 = a.counts().iter().sum::<u64>() as f64;
    let nb: f64 = b.counts().iter().sum::<u64>() as f64;
    let ka = (nb / na).sqrt();
    let kb = (na / nb).sqrt();
    let mut chi2 = 0.0;
    let mut cells = 0usize;
    let mut pool_a = 0.0;
    let mut pool_b = 0.0;
    for (&ca, &cb) in a.counts().iter().zip(b.counts()) {
        let (ca, cb) = (ca as f64, cb as f64);
        if ca + cb >= 10.0 {
            let d = ka * ca - kb * cb;
            chi2 += d * d / (ca + cb);
            cells += 1;
        } else {
            pool_a += ca;
            pool_b += cb;
        }
    }
    if pool_a + pool_b >= 10.0 {
        let d = ka * pool_a - kb * pool_b;
        chi2 += d * d / (pool_a + pool_b);
        cells += 1;
    }
    let dof = cells.saturating_sub(1).max(1);
    Ok((chi2, dof, chi2_sf(chi2, dof)))
}

/// One-sample Kolmogorov–Smirnov statistic of sorted samples against a CDF.
pub fn ks_statistic_sorted<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let c = cdf(x);
        sup = sup.max((c - i as f64 / n).abs());
        sup = sup.max(((i as f64 + 1.0) / n - c).abs());
    }
    sup
}

/// Two-sample KS statistic; inputs must be sorted.
pub fn ks_two_sample_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (mut i, mut j) = (0usize, 0usize);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut sup = 0.0f64;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// Asymptotic Kolmogorov p-value Q(√n_eff · D).
pub fn ks_p_value(statistic: f64, n_eff: f64) -> f64 {
    let lambda = (n_eff.sqrt() + 0.12 + 0.11 / n_eff.sqrt()) * statistic;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let t = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        sum += sign * t;
        sign = -sign;
        if t < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Effective sample size of a two-sample KS comparison.
pub fn ks_two_sample_n_eff(na: usize, nb: usize) -> f64 {
    let (na, nb) = (na as f64, nb as f64);
    na * nb / (na + nb)
}
