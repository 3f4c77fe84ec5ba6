//! Closed-form reference densities: Poisson-ν spacing and ratio laws, the
//! 3×3 ratio surmise, the 4×4 β = 2 ratio density, Wigner and 3×3
//! nearest-neighbor spacing forms, Poisson overlapping-ratio laws, and the
//! β-Hermite k = 1 overlapping-ratio density in both its one-dimensional
//! integral form and its closed form.
//!
//! Polynomial coefficient tables are stored as exact integers so that a
//! transcription error shows up in the cross-mode agreement tests rather
//! than hiding in rounding noise.

use crate::error::{Error, Result};
use crate::joint::ln_z_hermite;
use crate::quad;
use crate::special::{erfc, ln_gamma};
use std::f64::consts::PI;

/// Asymptotic power laws of a ratio density: ρ ~ c·r^a (r → 0) and
/// ρ ~ r^b (r → ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticLaw {
    pub small_r_exponent: f64,
    pub large_r_exponent: f64,
    pub small_r_prefactor: Option<f64>,
}

/// Spacing density of the Poisson-ν family,
/// P_ν(s) = [Γ(ν+2)^{ν+1}/Γ(ν+1)^{ν+2}] s^ν exp(−(ν+1)s),
/// normalized with ⟨s⟩ = 1. ν = 0 Poisson, ν = 1 semi-Poisson.
pub fn poisson_nu_spacing(nu: f64, s: f64) -> Result<f64> {
    if !(nu >= 0.0) {
        return Err(Error::parameter(format!("nu must be >= 0, got {nu}")));
    }
    if s < 0.0 {
        return Err(Error::domain(format!("spacing s must be >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let ln_pref = (nu + 1.0) * ln_gamma(nu + 2.0) - (nu + 2.0) * ln_gamma(nu + 1.0);
    Ok((ln_pref + nu * s.ln() - (nu + 1.0) * s).exp())
}

/// Ratio density of the Poisson-ν family,
/// 𝒫_ν(r) = [Γ(2ν+2)Γ²(ν+2)/((ν+1)²Γ⁴(ν+1))] r^ν/(1+r)^{2ν+2}.
pub fn poisson_nu_ratio(nu: f64, r: f64) -> Result<f64> {
    if !(nu >= 0.0) {
        return Err(Error::parameter(format!("nu must be >= 0, got {nu}")));
    }
    if r < 0.0 {
        return Err(Error::domain(format!("ratio r must be >= 0, got {r}")));
    }
    if r == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let ln_pref = ln_gamma(2.0 * nu + 2.0) + 2.0 * ln_gamma(nu + 2.0)
        - 2.0 * (nu + 1.0).ln()
        - 4.0 * ln_gamma(nu + 1.0);
    Ok((ln_pref + nu * r.ln() - (2.0 * nu + 2.0) * (1.0 + r).ln()).exp())
}

/// Normalization constant Z_β of the 3×3 ratio surmise.
pub fn surmise3_z(beta: f64) -> f64 {
    (((2.0 * PI).ln() + ln_gamma(1.0 + beta) - 2.0 * ln_gamma(1.0 + beta / 2.0))
        - 1.5 * (1.0 + beta) * 3.0f64.ln())
    .exp()
}

/// 3×3 β-Hermite ratio density ("the surmise"):
/// ρ(r) = (1/Z_β)(r + r²)^β / (1 + r + r²)^{1+3β/2}, any β > 0.
pub fn surmise3_ratio(beta: f64, r: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::parameter(format!("beta must be > 0, got {beta}")));
    }
    if r < 0.0 {
        return Err(Error::domain(format!("ratio r must be >= 0, got {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let ln_val = beta * (r.ln() + (1.0 + r).ln())
        - (1.0 + 1.5 * beta) * (1.0 + r + r * r).ln()
        - surmise3_z(beta).ln();
    Ok(ln_val.exp())
}

// 4×4 β = 2 closed form: integer coefficient tables of Q1 (degree 14) and
// Q2 (degree 6).
const Q1_N4B2: [i64; 15] = [
    41664, 291648, 946144, 1885440, 2588464, 2610064, 2182624, 1894048, 1973866, 2026558, 1687399,
    1037676, 449635, 124362, 17766,
];
const Q2_N4B2: [i64; 7] = [14, 42, 39, 8, 39, 42, 14];

fn poly_i64(cs: &[i64], x: f64) -> f64 {
    let mut v = 0.0;
    for &c in cs.iter().rev() {
        v = v * x + c as f64;
    }
    v
}

fn hermite4_beta2_f(r: f64) -> f64 {
    let u = 4.0 + 4.0 * r + 3.0 * r * r;
    let w = 1.0 + r + r * r;
    let bracket = 9.0 * 3.0f64.sqrt() * poly_i64(&Q2_N4B2, r)
        - (r + 2.0) * poly_i64(&Q1_N4B2, r) / (u.powi(4) * u.sqrt());
    r * r * (r + 1.0) * (r + 1.0) * bracket / w.powi(7)
}

/// 4×4 β = 2 β-Hermite ratio density,
/// ρ(r) = (1/4π)[f(r) + r^{−2} f(1/r)].
pub fn hermite4_beta2_ratio(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("ratio r must be > 0, got {r}")));
    }
    Ok((hermite4_beta2_f(r) + hermite4_beta2_f(1.0 / r) / (r * r)) / (4.0 * PI))
}

/// Q1(0) and Q2(0), exposed so the coefficient tables stay testable.
pub fn hermite4_beta2_q_at_zero() -> (i64, i64) {
    (Q1_N4B2[0], Q2_N4B2[0])
}

fn check_beta124(beta: u32) -> Result<()> {
    if matches!(beta, 1 | 2 | 4) {
        Ok(())
    } else {
        Err(Error::parameter(format!(
            "closed forms are available for beta in {{1, 2, 4}}, got {beta}"
        )))
    }
}

/// Wigner surmise A_β s^β e^{−B_β s²} for β ∈ {1, 2, 4}.
pub fn wigner_surmise(beta: u32, s: f64) -> Result<f64> {
    check_beta124(beta)?;
    if s < 0.0 {
        return Err(Error::domain(format!("spacing s must be >= 0, got {s}")));
    }
    let (a, b) = wigner_constants(beta);
    Ok(a * s.powi(beta as i32) * (-b * s * s).exp())
}

/// (A_β, B_β) of the Wigner surmise.
pub fn wigner_constants(beta: u32) -> (f64, f64) {
    match beta {
        1 => (PI / 2.0, PI / 4.0),
        2 => (32.0 / (PI * PI), 4.0 / PI),
        4 => (262144.0 / (729.0 * PI.powi(3)), 64.0 / (9.0 * PI)),
        _ => unreachable!("validated upstream"),
    }
}

// unnormalized 3x3 nearest-neighbor integrals p_beta(s)
fn nn3_p(beta: u32, s: f64) -> f64 {
    let s2 = s * s;
    let e3 = (-0.75 * s2).exp();
    let e4 = (-s2).exp();
    let sqrt_pi = PI.sqrt();
    let ec = erfc(0.5 * s);
    match beta {
        1 => s / 8.0 * (-sqrt_pi * ec * (s2 - 2.0) * e3 + 2.0 * s * e4),
        2 => {
            s2 / 32.0
                * (sqrt_pi * ec * (s2 * s2 - 4.0 * s2 + 12.0) * e3 - 2.0 * s * (s2 - 6.0) * e4)
        }
        4 => {
            let s4 = s2 * s2;
            s4 / 512.0
                * (sqrt_pi * ec * (s4 * s4 - 8.0 * s4 * s2 + 72.0 * s4 - 480.0 * s2 + 1680.0) * e3
                    - 2.0 * s * (s4 * s2 - 10.0 * s4 + 100.0 * s2 - 840.0) * e4)
        }
        _ => unreachable!("validated upstream"),
    }
}

/// (a_β, b_β) scaling constants of the 3×3 nearest-neighbor distribution.
pub fn nn3_constants(beta: u32) -> (f64, f64) {
    let sqrt_pi = PI.sqrt();
    match beta {
        1 => (27.0 / (2.0 * PI), 3.0 / (2.0 * sqrt_pi)),
        2 => (729.0 / (32.0 * PI.powf(1.5)), 3.0f64.powf(2.5) / (8.0 * sqrt_pi)),
        4 => (59049.0 / (25600.0 * PI.powf(1.5)), 3.0f64.powf(5.5) / (160.0 * sqrt_pi)),
        _ => unreachable!("validated upstream"),
    }
}

/// 3×3 nearest-neighbor spacing distribution P_β(s) = a_β p_β(b_β s),
/// β ∈ {1, 2, 4}; one order of magnitude closer to the large-N law than the
/// Wigner surmise.
pub fn nn3_spacing(beta: u32, s: f64) -> Result<f64> {
    check_beta124(beta)?;
    if s < 0.0 {
        return Err(Error::domain(format!("spacing s must be >= 0, got {s}")));
    }
    let (a, b) = nn3_constants(beta);
    Ok(a * nn3_p(beta, b * s))
}

/// Poisson kth overlapping-ratio density,
/// P_k(r) = r^k(k+1+kr)/(1+r)² for r < 1 and (k + r(k+1))/(r^{k+1}(1+r)²)
/// for r > 1; both branches equal (2k+1)/4 at r = 1.
pub fn poisson_overlap(k: usize, r: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::parameter("overlap order k must be >= 1"));
    }
    if !(r > 0.0) {
        return Err(Error::domain(format!("ratio r must be > 0, got {r}")));
    }
    let kf = k as f64;
    let denom = (1.0 + r) * (1.0 + r);
    Ok(if r < 1.0 {
        r.powi(k as i32) * (kf + 1.0 + kf * r) / denom
    } else {
        (kf + r * (kf + 1.0)) / (r.powi(k as i32 + 1) * denom)
    })
}

/// Evaluation mode for the β-Hermite k = 1 overlapping-ratio density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapMode {
    /// One-dimensional quadrature of the exact z-integral.
    Integral,
    /// Closed form (−1)^{β+1} Λ^{(β)}(r) + Λ^{(β)}(−r).
    ClosedForm,
}

// Q^{(beta)} coefficient tables (ascending powers of w = r + 1/r) and d_beta.
const Q_OVERLAP_B1: [i64; 4] = [12, -36, 20, 15];
const Q_OVERLAP_B2: [i64; 7] = [1920, -10560, 19184, -8552, -9124, 5454, 2727];
const Q_OVERLAP_B4: [i64; 13] = [
    3244032,
    -34062336,
    146853888,
    -320587776,
    322416384,
    12364416,
    -318898752,
    172975392,
    113704048,
    -96136152,
    -26756676,
    19539090,
    5861727,
];

fn overlap_q_poly(beta: u32, w: f64) -> f64 {
    match beta {
        1 => poly_i64(&Q_OVERLAP_B1, w),
        2 => poly_i64(&Q_OVERLAP_B2, w),
        4 => poly_i64(&Q_OVERLAP_B4, w),
        _ => unreachable!("validated upstream"),
    }
}

fn overlap_d(beta: u32) -> f64 {
    match beta {
        1 => 8.0,
        2 => 8.0 / PI,
        4 => 32.0 / (3.0 * PI),
        _ => unreachable!("validated upstream"),
    }
}

/// Λ^{(β)}(x) of the closed form; defined for any x ≠ 0 (x = −r enters the
/// parity combination as a formal term).
fn overlap_lambda(beta: u32, x: f64) -> f64 {
    let b = beta as f64;
    let h = 3.0 - 2.0 * x + 3.0 * x * x;
    let w = x + 1.0 / x;
    overlap_d(beta) * x.abs().powf(4.0 * b) / (1.0 + x * x).powf(3.0 * b + 1.0)
        * (x - 1.0).abs().powf(2.0 * b + 1.0)
        / h.powf(0.5 + 2.0 * b)
        * overlap_q_poly(beta, w)
}

/// Quadratic form in the integrand denominator, written cancellation-free:
/// G(r, z) = h(r)(z − (1+r)²/h)² + 8(1−r)²(1+r²)/h, strictly positive except
/// at r = z = 1.
fn overlap_g(r: f64, z: f64) -> f64 {
    let h = 3.0 - 2.0 * r + 3.0 * r * r;
    let c = (1.0 + r) * (1.0 + r) / h;
    let d = z - c;
    h * d * d + 8.0 * (1.0 - r) * (1.0 - r) * (1.0 + r * r) / h
}

/// Normalization constant c_β = √π 8^{3β+1} Γ(3/2+3β) / Z_{4,β}.
fn overlap_c(beta: u32) -> f64 {
    let b = beta as f64;
    (0.5 * PI.ln() + (3.0 * b + 1.0) * 8.0f64.ln() + ln_gamma(1.5 + 3.0 * b) - ln_z_hermite(4, b))
        .exp()
}

fn overlap_integral_mode(beta: u32, r: f64) -> Result<f64> {
    let b = beta as f64;
    let expo = 1.5 + 3.0 * b;
    let ln_cb = 0.5 * PI.ln() + (3.0 * b + 1.0) * 8.0f64.ln() + ln_gamma(1.5 + 3.0 * b)
        - ln_z_hermite(4, b);
    if r == 1.0 {
        // the density is continuous across the branch point
        let lo = overlap_integral_mode(beta, 1.0 - 1e-9)?;
        let hi = overlap_integral_mode(beta, 1.0 + 1e-9)?;
        return Ok(0.5 * (lo + hi));
    }
    // The integrand develops an enormous peak near z = 1 when r → 1 (the
    // quadratic form G nearly vanishes there), balanced by the (1−r)^{2β+1}
    // prefactor; a probed log-scale keeps the quadrature in range and makes
    // the tolerance act relatively.
    if r < 1.0 {
        // substitute z = r t; the exact r^{3β+1} prefactor sits outside
        let ln_pref = ln_cb + (3.0 * b + 1.0) * r.ln() + (2.0 * b + 1.0) * (1.0 - r).ln();
        let ln_ig = |t: f64| -> f64 {
            if t <= 0.0 || t >= 1.0 {
                return f64::NEG_INFINITY;
            }
            let z = r * t;
            b * (t.ln() + (1.0 - t).ln() + (1.0 - r * r * t).ln())
                + (2.0 * b + 1.0) * (1.0 - z).ln()
                - expo * overlap_g(r, z).ln()
        };
        // the integrand is edge-peaked at t → 1 with boundary-layer width
        // ~ (1 − r); the probe ladder must reach into that layer
        let mut probes = vec![0.05, 0.3, 0.6];
        let mut u = 0.1;
        while u > 1e-14 {
            probes.push(1.0 - u);
            u *= 0.1;
        }
        for c in [0.3, 1.0, 3.0] {
            let t = 1.0 - c * (1.0 - r);
            if t > 0.0 && t < 1.0 {
                probes.push(t);
            }
        }
        let scale = probes.iter().map(|&t| ln_ig(t)).fold(f64::NEG_INFINITY, f64::max);
        let integral = quad::integrate(|t| (ln_ig(t) - scale).exp(), 0.0, 1.0, 1e-12)?;
        Ok((ln_pref + scale).exp() * integral)
    } else {
        // z = tan(theta) compactifies (r, ∞)
        let ln_pref = ln_cb + b * r.ln() + (2.0 * b + 1.0) * (r - 1.0).ln();
        let ln_ig = |theta: f64| -> f64 {
            let z = theta.tan();
            if !(z > r) || !z.is_finite() {
                return f64::NEG_INFINITY;
            }
            b * (z.ln() + (r * z - 1.0).ln() + (z - r).ln())
                + (2.0 * b + 1.0) * (z - 1.0).ln()
                - expo * overlap_g(r, z).ln()
                + (1.0 + z * z).ln()
        };
        let theta0 = r.atan();
        let scale = [1e-4, 0.01, 0.1, 0.5, 0.9]
            .iter()
            .map(|&u| ln_ig(theta0 + u * (0.5 * PI - theta0)))
            .fold(f64::NEG_INFINITY, f64::max);
        let integral =
            quad::integrate(|t| (ln_ig(t) - scale).exp(), theta0, 0.5 * PI, 1e-12)?;
        Ok((ln_pref + scale).exp() * integral)
    }
}

/// β-Hermite k = 1 overlapping-ratio density, β ∈ {1, 2, 4}.
///
/// `Integral` evaluates the exact one-dimensional z-integral (accurate at any
/// r, including deep in the r^{3β+1} small-r regime); `ClosedForm` evaluates
/// the Λ-combination with the printed coefficient tables (fast, but subject
/// to floating-point cancellation for very small r at large β).
pub fn hermite_overlap_k1(beta: u32, r: f64, mode: OverlapMode) -> Result<f64> {
    check_beta124(beta)?;
    if !(r > 0.0) {
        return Err(Error::domain(format!("ratio r must be > 0, got {r}")));
    }
    match mode {
        OverlapMode::ClosedForm => {
            let sign = if beta % 2 == 1 { 1.0 } else { -1.0 };
            Ok(sign * overlap_lambda(beta, r) + overlap_lambda(beta, -r))
        }
        OverlapMode::Integral => overlap_integral_mode(beta, r),
    }
}

/// Printed small-r prefactors ξ_β of P_β(r) ~ ξ_β r^{3β+1}.
pub fn overlap_xi(beta: u32) -> Result<f64> {
    check_beta124(beta)?;
    let sqrt3 = 3.0f64.sqrt();
    Ok(match beta {
        1 => 2240.0 / (81.0 * sqrt3),
        2 => 512512.0 / (729.0 * PI * sqrt3),
        4 => 174054932480.0 / (4782969.0 * PI * sqrt3),
        _ => unreachable!(),
    })
}

/// A pointwise-evaluable reference density with known support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityModel {
    PoissonNuSpacing { nu: f64 },
    PoissonNuRatio { nu: f64 },
    Surmise3 { beta: f64 },
    Hermite4Beta2Ratio,
    WignerSurmise { beta: u32 },
    Nn3Spacing { beta: u32 },
    PoissonOverlap { k: usize },
    HermiteOverlapK1 { beta: u32, mode: OverlapMode },
}

impl DensityModel {
    pub fn pdf(&self, x: f64) -> Result<f64> {
        match *self {
            DensityModel::PoissonNuSpacing { nu } => poisson_nu_spacing(nu, x),
            DensityModel::PoissonNuRatio { nu } => poisson_nu_ratio(nu, x),
            DensityModel::Surmise3 { beta } => surmise3_ratio(beta, x),
            DensityModel::Hermite4Beta2Ratio => hermite4_beta2_ratio(x),
            DensityModel::WignerSurmise { beta } => wigner_surmise(beta, x),
            DensityModel::Nn3Spacing { beta } => nn3_spacing(beta, x),
            DensityModel::PoissonOverlap { k } => poisson_overlap(k, x),
            DensityModel::HermiteOverlapK1 { beta, mode } => hermite_overlap_k1(beta, x, mode),
        }
    }

    /// Support as (lo, hi).
    pub fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    /// ∫ pdf − 1 by adaptive quadrature (split at 1, compactified tail).
    pub fn normalization_defect(&self, atol: f64) -> Result<f64> {
        let f = |x: f64| self.pdf(x).unwrap_or(0.0);
        let head = quad::integrate(f, 0.0, 1.0, atol / 2.0)?;
        let tail = quad::integrate_semi_infinite(f, 1.0, atol / 2.0)?;
        Ok(head + tail - 1.0)
    }

    /// The exponent pair (and prefactor, where printed) of the r → 0 and
    /// r → ∞ power laws; None for spacing densities.
    pub fn asymptotic_law(&self) -> Option<AsymptoticLaw> {
        match *self {
            DensityModel::PoissonNuRatio { nu } => Some(AsymptoticLaw {
                small_r_exponent: nu,
                large_r_exponent: -(2.0 * nu + 2.0),
                small_r_prefactor: None,
            }),
            DensityModel::Surmise3 { beta } => Some(AsymptoticLaw {
                small_r_exponent: beta,
                large_r_exponent: -(2.0 + beta),
                small_r_prefactor: None,
            }),
            DensityModel::Hermite4Beta2Ratio => Some(AsymptoticLaw {
                small_r_exponent: 2.0,
                large_r_exponent: -4.0,
                small_r_prefactor: None,
            }),
            // Small-r exponent k (with prefactor k+1) follows from the exact
            // branch formula and is the only exponent consistent with the
            // functional relation P(1/r) = r² P(r) and the r^{−k−2} tail.
            DensityModel::PoissonOverlap { k } => Some(AsymptoticLaw {
                small_r_exponent: k as f64,
                large_r_exponent: -(k as f64 + 2.0),
                small_r_prefactor: Some(k as f64 + 1.0),
            }),
            DensityModel::HermiteOverlapK1 { beta, .. } => Some(AsymptoticLaw {
                small_r_exponent: 3.0 * beta as f64 + 1.0,
                large_r_exponent: -(3.0 * beta as f64 + 3.0),
                small_r_prefactor: overlap_xi(beta).ok(),
            }),
            _ => None,
        }
    }
}

/// Symmetric log-log slope of `f` at `r` with half-width `h` in log space.
pub fn log_log_slope<F: Fn(f64) -> Result<f64>>(f: F, r: f64, h: f64) -> Result<f64> {
    let hi = f(r * h.exp())?;
    let lo = f(r * (-h).exp())?;
    if hi <= 0.0 || lo <= 0.0 {
        return Err(Error::domain("log-log slope needs positive density values"));
    }
    Ok((hi.ln() - lo.ln()) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_spacing_values() {
        assert_eq!(poisson_nu_spacing(0.0, 0.0).unwrap(), 1.0);
        // P_1(1) = 4 e^{-2}
        let got = poisson_nu_spacing(1.0, 1.0).unwrap();
        let want = 4.0 * (-2.0f64).exp();
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        assert!(poisson_nu_spacing(1.0, -0.1).is_err());
    }

    #[test]
    fn poisson_spacing_normalized_and_unit_mean() {
        for nu in [0.0, 0.5, 1.0, 2.0, 3.7] {
            let m = DensityModel::PoissonNuSpacing { nu };
            assert!(m.normalization_defect(1e-10).unwrap().abs() < 1e-8, "nu={nu}");
            let mean = quad::integrate(|s| s * poisson_nu_spacing(nu, s).unwrap(), 0.0, 1.0, 5e-11)
                .unwrap()
                + quad::integrate_semi_infinite(
                    |s| s * poisson_nu_spacing(nu, s).unwrap(),
                    1.0,
                    5e-11,
                )
                .unwrap();
            assert!((mean - 1.0).abs() < 1e-8, "nu={nu}: mean {mean}");
        }
    }

    #[test]
    fn poisson_ratio_values() {
        assert!((poisson_nu_ratio(0.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((poisson_nu_ratio(1.0, 1.0).unwrap() - 0.375).abs() < 1e-14);
        // nu=1 is 6r/(1+r)^4
        let r: f64 = 2.3;
        let want = 6.0 * r / (1.0 + r).powi(4);
        assert!((poisson_nu_ratio(1.0, r).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn poisson_ratio_duality_pointwise() {
        for nu in [0.0, 1.0, 2.0] {
            for r in [0.1, 0.37, 1.0, 2.0, 17.0] {
                let a = poisson_nu_ratio(nu, r).unwrap();
                let b = poisson_nu_ratio(nu, 1.0 / r).unwrap() / (r * r);
                assert!((a - b).abs() <= 1e-12 * a.max(1e-12), "nu={nu} r={r}");
            }
        }
    }

    #[test]
    fn surmise3_reference_points() {
        // beta=1, r=1: sqrt(3)/4; beta=2, r=1: sqrt(3)/pi
        let got = surmise3_ratio(1.0, 1.0).unwrap();
        assert!((got - 3.0f64.sqrt() / 4.0).abs() < 1e-14, "{got}");
        let got = surmise3_ratio(2.0, 1.0).unwrap();
        assert!((got - 3.0f64.sqrt() / PI).abs() < 1e-14, "{got}");
        // Z_1 = 8/27, Z_2 = 4 pi / 3^{9/2}
        assert!((surmise3_z(1.0) - 8.0 / 27.0).abs() < 1e-14);
        assert!((surmise3_z(2.0) - 4.0 * PI / 3.0f64.powf(4.5)).abs() < 1e-14);
    }

    #[test]
    fn surmise3_small_r_slope_is_beta() {
        for beta in [1.0, 2.0, 4.0] {
            let slope = log_log_slope(|r| surmise3_ratio(beta, r), 1e-4, 0.05).unwrap();
            assert!((slope - beta).abs() < 1e-3, "beta={beta}: slope {slope}");
        }
    }

    #[test]
    fn hermite4_q_constant_terms() {
        assert_eq!(hermite4_beta2_q_at_zero(), (41664, 14));
    }

    #[test]
    fn hermite4_duality_pointwise() {
        for i in 0..50 {
            let r = 10f64.powf(-1.5 + 3.0 * i as f64 / 49.0);
            let a = hermite4_beta2_ratio(r).unwrap();
            let b = hermite4_beta2_ratio(1.0 / r).unwrap() / (r * r);
            assert!((a - b).abs() < 1e-12 * a.max(1e-3), "r={r}: {a} vs {b}");
        }
    }

    #[test]
    fn hermite4_normalized() {
        let m = DensityModel::Hermite4Beta2Ratio;
        assert!(m.normalization_defect(1e-9).unwrap().abs() < 1e-7);
    }

    #[test]
    fn hermite4_reference_value() {
        // 30-digit quadrature of the two-slice integral formula at r = 1
        let got = hermite4_beta2_ratio(1.0).unwrap();
        assert!((got - 0.543146217535417834).abs() < 1e-13, "{got}");
    }

    #[test]
    fn wigner_constants_and_value() {
        let (a1, b1) = wigner_constants(1);
        assert_eq!((a1, b1), (PI / 2.0, PI / 4.0));
        // P_1(1) = (pi/2) e^{-pi/4} by direct substitution
        let got = wigner_surmise(1, 1.0).unwrap();
        let want = (PI / 2.0) * (-PI / 4.0).exp();
        assert!((got - want).abs() < 1e-15);
        assert!((want - 0.716185936340569153).abs() < 1e-15);
        assert!(wigner_surmise(3, 1.0).is_err());
    }

    #[test]
    fn wigner_normalization_both_integrals() {
        for beta in [1u32, 2, 4] {
            let p = |s: f64| wigner_surmise(beta, s).unwrap();
            let n0 = quad::integrate(p, 0.0, 12.0, 1e-11).unwrap();
            let n1 = quad::integrate(|s| s * p(s), 0.0, 12.0, 1e-11).unwrap();
            assert!((n0 - 1.0).abs() < 1e-9, "beta={beta}: ∫P = {n0}");
            assert!((n1 - 1.0).abs() < 1e-9, "beta={beta}: ∫sP = {n1}");
        }
    }

    #[test]
    fn nn3_normalization_both_integrals() {
        for beta in [1u32, 2, 4] {
            let p = |s: f64| nn3_spacing(beta, s).unwrap();
            let n0 = quad::integrate(p, 0.0, 12.0, 1e-11).unwrap();
            let n1 = quad::integrate(|s| s * p(s), 0.0, 12.0, 1e-11).unwrap();
            assert!((n0 - 1.0).abs() < 1e-8, "beta={beta}: ∫P = {n0}");
            assert!((n1 - 1.0).abs() < 1e-8, "beta={beta}: ∫sP = {n1}");
        }
    }

    #[test]
    fn nn3_small_s_slope_is_beta() {
        for beta in [1u32, 2, 4] {
            let slope = log_log_slope(|s| nn3_spacing(beta, s), 1e-4, 0.05).unwrap();
            assert!((slope - beta as f64).abs() < 1e-3, "beta={beta}: slope {slope}");
        }
    }

    #[test]
    fn poisson_overlap_branch_continuity() {
        for k in 1..=3 {
            let at_one = poisson_overlap(k, 1.0).unwrap();
            let want = (2.0 * k as f64 + 1.0) / 4.0;
            assert_eq!(at_one, want, "k={k}");
            let lo = poisson_overlap(k, 1.0 - 1e-9).unwrap();
            let hi = poisson_overlap(k, 1.0 + 1e-9).unwrap();
            assert!((lo - want).abs() < 1e-8 && (hi - want).abs() < 1e-8);
        }
    }

    #[test]
    fn poisson_overlap_normalized() {
        for k in 1..=3 {
            let m = DensityModel::PoissonOverlap { k };
            assert!(m.normalization_defect(1e-10).unwrap().abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn poisson_overlap_asymptotics() {
        for k in 1..=3 {
            let small = log_log_slope(|r| poisson_overlap(k, r), 1e-4, 0.05).unwrap();
            let large = log_log_slope(|r| poisson_overlap(k, r), 1e4, 0.05).unwrap();
            let law = DensityModel::PoissonOverlap { k }.asymptotic_law().unwrap();
            assert!((small - law.small_r_exponent).abs() < 1e-2, "k={k}: {small}");
            assert!((large - law.large_r_exponent).abs() < 1e-2, "k={k}: {large}");
            // prefactor (k+1): P_k(r)/r^k → k+1
            let pre = poisson_overlap(k, 1e-6).unwrap() / 1e-6f64.powi(k as i32);
            assert!((pre - (k as f64 + 1.0)).abs() < 1e-4, "k={k}: prefactor {pre}");
        }
    }

    #[test]
    fn poisson_overlap_functional_relation() {
        for k in 1..=3 {
            for r in [0.2, 0.9, 3.5] {
                let lhs = poisson_overlap(k, 1.0 / r).unwrap();
                let rhs = r * r * poisson_overlap(k, r).unwrap();
                assert!((lhs - rhs).abs() < 1e-13 * lhs.max(1.0), "k={k} r={r}");
            }
        }
    }

    #[test]
    fn overlap_q1_printed_coefficients() {
        // Q^{(1)}(w) = 12 - 36w + 20w^2 + 15w^3, d_1 = 8
        assert_eq!(Q_OVERLAP_B1, [12, -36, 20, 15]);
        assert_eq!(overlap_d(1), 8.0);
    }

    #[test]
    fn overlap_modes_agree() {
        for beta in [1u32, 2, 4] {
            for r in [0.05, 0.4, 0.97, 1.0, 1.7, 6.0, 20.0] {
                let a = hermite_overlap_k1(beta, r, OverlapMode::Integral).unwrap();
                let b = hermite_overlap_k1(beta, r, OverlapMode::ClosedForm).unwrap();
                assert!((a - b).abs() < 1e-8, "beta={beta} r={r}: integral {a} vs closed {b}");
            }
        }
    }

    #[test]
    fn overlap_reference_values() {
        // 30-digit slice-integral references
        let cases = [
            (1u32, 0.4, 0.252355027736870852),
            (1, 1.7, 0.235176042463248462),
            (2, 0.4, 0.0938575183293886923),
            (2, 1.7, 0.190373937426773491),
            (4, 0.4, 0.0103456879063169327),
            (4, 1.7, 0.100494320066843928),
        ];
        for (beta, r, want) in cases {
            let got = hermite_overlap_k1(beta, r, OverlapMode::Integral).unwrap();
            assert!((got - want).abs() < 2e-9 * want.max(1e-6), "beta={beta} r={r}: {got} vs {want}");
        }
    }

    #[test]
    fn overlap_functional_relation_closed_form() {
        for beta in [1u32, 2, 4] {
            for r in [0.07, 0.37, 0.81, 2.6, 9.0] {
                let lhs = hermite_overlap_k1(beta, 1.0 / r, OverlapMode::ClosedForm).unwrap();
                let rhs = r * r * hermite_overlap_k1(beta, r, OverlapMode::ClosedForm).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0),
                    "beta={beta} r={r}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn overlap_small_r_prefactor() {
        for beta in [1u32, 2, 4] {
            let r = 1e-3;
            let p = hermite_overlap_k1(beta, r, OverlapMode::Integral).unwrap();
            let xi_emp = p / r.powi(3 * beta as i32 + 1);
            let xi = overlap_xi(beta).unwrap();
            assert!(
                ((xi_emp - xi) / xi).abs() < 0.02,
                "beta={beta}: empirical {xi_emp} vs printed {xi}"
            );
        }
    }

    #[test]
    fn overlap_normalized_integral_mode() {
        for beta in [1u32, 2, 4] {
            let m = DensityModel::HermiteOverlapK1 { beta, mode: OverlapMode::Integral };
            let defect = m.normalization_defect(1e-8).unwrap();
            assert!(defect.abs() < 1e-6, "beta={beta}: defect {defect}");
        }
    }
}
