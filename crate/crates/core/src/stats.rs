//! Empirical ratio observables of a spectrum.
//!
//! All observables are invariant under translation and positive rescaling of
//! the levels, which is the entire point: no unfolding is ever applied.

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    /// r_n = s_{n+1}/s_n
    Consecutive,
    /// r̃_n = min(r_n, 1/r_n)
    Tilde,
    /// r_n^(k) = (λ_{n+k+1} − λ_n)/(λ_{n+k} − λ_{n−1}), k shared spacings
    Overlapping(usize),
}

/// A derived series of positive ratio observables.
#[derive(Debug, Clone)]
pub struct RatioSeries {
    pub values: Vec<f64>,
    pub kind: RatioKind,
}

impl RatioSeries {
    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return f64::NAN;
        }
        kahan_sum(self.values.iter().copied()) / self.values.len() as f64
    }
}

/// Relative disjoint spacings f_j = (λ_{j+2} − λ₂)/(λ₂ − λ₁), ascending.
#[derive(Debug, Clone)]
pub struct RdsVector {
    f: Vec<f64>,
}

impl RdsVector {
    /// Construct directly from a strictly ascending positive sequence.
    pub fn new(f: Vec<f64>) -> Result<Self> {
        if f.is_empty() {
            return Err(Error::parameter("RDS vector must be nonempty"));
        }
        let mut prev = 0.0;
        for (i, &x) in f.iter().enumerate() {
            if !(x > prev) {
                return Err(Error::parameter(format!(
                    "RDS vector must satisfy 0 < f1 < f2 < ... (violated at index {i})"
                )));
            }
            prev = x;
        }
        Ok(RdsVector { f })
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// The consecutive ratios corresponding to this RDS vector:
    /// r₁ = f₁, r_j = (f_j − f_{j−1})/(f_{j−1} − f_{j−2}) with f₀ = 0.
    pub fn to_ratios(&self) -> Vec<f64> {
        let p = self.f.len();
        let mut r = Vec::with_capacity(p);
        r.push(self.f[0]);
        for j in 1..p {
            let prev_gap = if j == 1 { self.f[0] } else { self.f[j - 1] - self.f[j - 2] };
            r.push((self.f[j] - self.f[j - 1]) / prev_gap);
        }
        r
    }
}

fn kahan_sum<I: Iterator<Item = f64>>(iter: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in iter {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

fn check_spacings(s: &Spectrum) -> Result<Vec<f64>> {
    let spacings = s.spacings();
    for (i, &sp) in spacings.iter().enumerate() {
        let scale = s.levels()[i].abs().max(s.levels()[i + 1].abs()).max(1.0);
        if sp <= 0.0 || sp <= 1e-300 * scale {
            return Err(Error::DegenerateSpectrum { index: i });
        }
    }
    Ok(spacings)
}

/// Consecutive spacing ratios r_n = (λ_{n+2} − λ_{n+1})/(λ_{n+1} − λ_n),
/// n = 1..N−2.
pub fn consecutive_ratios(s: &Spectrum) -> Result<RatioSeries> {
    if s.len() < 3 {
        return Err(Error::parameter("need at least 3 levels for a ratio"));
    }
    let spacings = check_spacings(s)?;
    let values = spacings.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(RatioSeries { values, kind: RatioKind::Consecutive })
}

/// r̃_n = min(r_n, 1/r_n) ∈ (0, 1].
pub fn tilde_ratios(r: &RatioSeries) -> Result<RatioSeries> {
    if r.kind != RatioKind::Consecutive {
        return Err(Error::parameter("tilde_ratios expects consecutive ratios"));
    }
    let values = r.values.iter().map(|&x| x.min(1.0 / x)).collect();
    Ok(RatioSeries { values, kind: RatioKind::Tilde })
}

/// kth overlapping ratios r_n^(k) = (λ_{n+k+1} − λ_n)/(λ_{n+k} − λ_{n−1}).
/// Numerator and denominator share k spacings.
pub fn overlapping_ratios(s: &Spectrum, k: usize) -> Result<RatioSeries> {
    if k == 0 {
        return Err(Error::parameter("overlap order k must be >= 1"));
    }
    if s.len() < k + 3 {
        return Err(Error::parameter(format!(
            "need at least k+3 = {} levels for k = {k} overlapping ratios",
            k + 3
        )));
    }
    let lv = s.levels();
    let mut values = Vec::with_capacity(lv.len() - k - 2);
    // window [n-1 .. n+k+1] of length k+3, n starting at 1
    for n in 1..lv.len() - k - 1 {
        let num = lv[n + k + 1] - lv[n];
        let den = lv[n + k] - lv[n - 1];
        if den <= 0.0 {
            return Err(Error::DegenerateSpectrum { index: n - 1 });
        }
        values.push(num / den);
    }
    Ok(RatioSeries { values, kind: RatioKind::Overlapping(k) })
}

/// Relative disjoint spacings of a spectrum, computed by two algebraically
/// equivalent routes (direct quotient and cumulative products of ratios) that
/// must agree to 1e-12 relative; disagreement signals a float pathology.
pub fn rds_vector(s: &Spectrum) -> Result<RdsVector> {
    if s.len() < 3 {
        return Err(Error::parameter("need at least 3 levels for an RDS vector"));
    }
    let lv = s.levels();
    let first = lv[1] - lv[0];
    if first <= 0.0 {
        return Err(Error::DegenerateSpectrum { index: 0 });
    }
    // direct quotient form
    let f_direct: Vec<f64> = (2..lv.len()).map(|j| (lv[j] - lv[1]) / first).collect();
    // cumulative-product form from the ratios: f_j = Σ_{l<=j} Π_{k<=l} r_k
    let ratios = consecutive_ratios(s)?;
    let mut prod = 1.0;
    let mut acc = 0.0;
    let mut f_prod = Vec::with_capacity(f_direct.len());
    for &r in &ratios.values {
        prod *= r;
        acc += prod;
        f_prod.push(acc);
    }
    debug_assert_eq!(f_prod.len(), f_direct.len());
    for (j, (&a, &b)) in f_direct.iter().zip(&f_prod).enumerate() {
        let scale = a.abs().max(b.abs()).max(1e-300);
        if (a - b).abs() > 1e-12 * scale {
            return Err(Error::Validation(format!(
                "RDS route disagreement at f_{}: quotient {a:e} vs product {b:e}",
                j + 1
            )));
        }
    }
    RdsVector::new(f_direct)
}

/// Wait-free mean helper for spectra streams: mean of r and of r̃ in one pass.
pub fn ratio_means(s: &Spectrum) -> Result<(f64, f64)> {
    let r = consecutive_ratios(s)?;
    let t = tilde_ratios(&r)?;
    Ok((r.mean(), t.mean()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SpectrumSource;
    use proptest::prelude::*;

    fn spec(levels: &[f64]) -> Spectrum {
        Spectrum::from_sorted(levels.to_vec(), SpectrumSource::Model("test".into())).unwrap()
    }

    #[test]
    fn consecutive_basic() {
        let r = consecutive_ratios(&spec(&[0.0, 1.0, 3.0, 7.0])).unwrap();
        assert_eq!(r.values, vec![2.0, 2.0]);
    }

    #[test]
    fn consecutive_equal_spacings() {
        let r = consecutive_ratios(&spec(&[0.0, 1.0, 2.0])).unwrap();
        assert_eq!(r.values, vec![1.0]);
    }

    #[test]
    fn consecutive_scale_invariant() {
        // powers of two rescale exactly; general scales to rounding
        let r = consecutive_ratios(&spec(&[0.0, 2.0, 6.0, 14.0])).unwrap();
        assert_eq!(r.values, vec![2.0, 2.0]);
        for c in [1e-6, 1e6] {
            let scaled: Vec<f64> = [0.0, 1.0, 3.0, 7.0].iter().map(|&x| c * x).collect();
            let r = consecutive_ratios(&spec(&scaled)).unwrap();
            for v in &r.values {
                assert!((v - 2.0).abs() < 1e-12, "scale {c}: {v}");
            }
        }
    }

    #[test]
    fn zero_spacing_reports_index() {
        let err = consecutive_ratios(&spec(&[0.0, 1.0, 1.0, 2.0])).unwrap_err();
        match err {
            Error::DegenerateSpectrum { index } => assert_eq!(index, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn tilde_maps_and_bounds() {
        let r = RatioSeries { values: vec![2.0, 0.5, 1.0], kind: RatioKind::Consecutive };
        let t = tilde_ratios(&r).unwrap();
        assert_eq!(t.values, vec![0.5, 0.5, 1.0]);
        assert!(t.values.iter().all(|&x| x <= 1.0));
    }

    #[test]
    fn tilde_rejects_wrong_kind() {
        let t = RatioSeries { values: vec![0.5], kind: RatioKind::Tilde };
        assert!(tilde_ratios(&t).is_err());
    }

    #[test]
    fn overlapping_single_window() {
        let r = overlapping_ratios(&spec(&[0.0, 1.0, 2.0, 4.0]), 1).unwrap();
        assert_eq!(r.values, vec![(4.0 - 1.0) / (2.0 - 0.0)]);
    }

    #[test]
    fn overlapping_equally_spaced_is_one() {
        let levels: Vec<f64> = (0..30).map(f64::from).collect();
        for k in 1..4 {
            let r = overlapping_ratios(&spec(&levels), k).unwrap();
            assert!(r.values.iter().all(|&x| (x - 1.0).abs() < 1e-14), "k={k}");
            assert_eq!(r.values.len(), 30 - k - 2);
        }
    }

    #[test]
    fn overlapping_needs_enough_levels() {
        assert!(overlapping_ratios(&spec(&[0.0, 1.0, 2.0]), 1).is_err());
    }

    #[test]
    fn rds_matches_hand_value() {
        let f = rds_vector(&spec(&[0.0, 1.0, 3.0, 7.0])).unwrap();
        assert_eq!(f.values(), &[2.0, 6.0]);
    }

    #[test]
    fn rds_unit_spacings() {
        let f = rds_vector(&spec(&[0.0, 1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(f.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn rds_to_ratios_roundtrip() {
        let s = spec(&[0.0, 0.7, 1.9, 4.1, 9.3, 9.9]);
        let f = rds_vector(&s).unwrap();
        let r = consecutive_ratios(&s).unwrap();
        for (a, b) in f.to_ratios().iter().zip(&r.values) {
            assert!((a - b).abs() < 1e-12 * b.abs());
        }
    }

    proptest! {
        // translation+scale invariance on random well-spaced spectra
        #[test]
        fn prop_ratio_invariance(
            gaps in prop::collection::vec(0.05f64..10.0, 3..40),
            shift in -100.0f64..100.0,
            log_c in -3.0f64..3.0,
        ) {
            let mut levels = vec![0.0];
            for g in &gaps {
                levels.push(levels.last().unwrap() + g);
            }
            let c = 10f64.powf(log_c);
            let transformed: Vec<f64> = levels.iter().map(|&x| c * (x + shift)).collect();
            let r1 = consecutive_ratios(&spec(&levels)).unwrap();
            let r2 = consecutive_ratios(&spec(&transformed)).unwrap();
            for (a, b) in r1.values.iter().zip(&r2.values) {
                prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
            }
            let k = 1;
            let o1 = overlapping_ratios(&spec(&levels), k).unwrap();
            let o2 = overlapping_ratios(&spec(&transformed), k).unwrap();
            for (a, b) in o1.values.iter().zip(&o2.values) {
                prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
            }
        }

        #[test]
        fn prop_rds_routes_agree(
            gaps in prop::collection::vec(0.05f64..10.0, 3..40),
        ) {
            let mut levels = vec![0.0];
            for g in &gaps {
                levels.push(levels.last().unwrap() + g);
            }
            // rds_vector errors internally if the two routes disagree
            prop_assert!(rds_vector(&spec(&levels)).is_ok());
        }
    }
}
