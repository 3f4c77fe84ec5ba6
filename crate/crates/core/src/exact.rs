//! Exact rational evaluation of ratio moments over the β-Laguerre joint RDS
//! density.
//!
//! For integer β the integrand of ⟨r⟩ is a polynomial in the RDS coordinates
//! (every ratio denominator cancels against a factor of Π f_j^β or the
//! Vandermonde), so each monomial reduces to nested sums of Γ-factors of
//! integer arguments. Everything is carried in arbitrary-precision rationals,
//! with √π powers from half-integer Γ values tracked separately; they cancel
//! identically in the final result.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= big(k as i64);
    }
    acc
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Γ(m/2) as (rational, power of √π): even m gives a factorial, odd m gives
/// (2n)!/(4ⁿ n!) · √π for m = 2n+1.
fn gamma_half(m: u64) -> (BigRational, i64) {
    assert!(m >= 1, "gamma argument must be positive");
    if m % 2 == 0 {
        (BigRational::from_integer(factorial(m / 2 - 1)), 0)
    } else {
        let n = (m - 1) / 2;
        let num = factorial(2 * n);
        let den = BigInt::from(4u32).pow(n as u32) * factorial(n);
        (BigRational::new(num, den), 1)
    }
}

// multivariate polynomial: exponent vector -> coefficient
type Poly = BTreeMap<Vec<u16>, BigInt>;

fn poly_one(p: usize) -> Poly {
    let mut m = BTreeMap::new();
    m.insert(vec![0u16; p], BigInt::one());
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Factor {
    /// f_j
    Var(usize),
    /// 1 + f_j
    OnePlus(usize),
    /// f_k − f_j (k > j)
    Diff(usize, usize),
}

fn factor_poly(p: usize, f: Factor) -> Poly {
    let mut m = BTreeMap::new();
    match f {
        Factor::Var(j) => {
            let mut e = vec![0u16; p];
            e[j] = 1;
            m.insert(e, BigInt::one());
        }
        Factor::OnePlus(j) => {
            m.insert(vec![0u16; p], BigInt::one());
            let mut e = vec![0u16; p];
            e[j] = 1;
            m.insert(e, BigInt::one());
        }
        Factor::Diff(k, j) => {
            let mut e1 = vec![0u16; p];
            e1[k] = 1;
            m.insert(e1, BigInt::one());
            let mut e2 = vec![0u16; p];
            e2[j] = 1;
            m.insert(e2, -BigInt::one());
        }
    }
    m
}

const MONOMIAL_BUDGET: usize = 2_000_000;

fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly> {
    let mut out: Poly = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let entry = out.entry(e).or_insert_with(BigInt::zero);
            *entry += ca * cb;
        }
        if out.len() > MONOMIAL_BUDGET {
            return Err(Error::unsupported(
                "polynomial expansion exceeds the monomial budget; n or beta too large",
            ));
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// The nested-sum reduction of
/// I(m) ∝ ∫_{0<f₁<…<f_p} Π f_j^{m_j} (N−1+Σf)^{1−s},
/// up to the global 1/((N−1)^{s−1} Γ(s−1)) factor restored by the caller.
fn nested_sum(ms: &[u64], n_total: usize, s: u64) -> Result<BigRational> {
    let p = ms.len();
    let msum: u64 = ms.iter().sum();
    let gamma_arg = s as i64 - 2 - p as i64 - msum as i64 + 1; // s−1−p−Σm
    if gamma_arg < 1 {
        return Err(Error::unsupported(format!(
            "gamma-domain violation: s−1−p−Σm = {gamma_arg} must be >= 1"
        )));
    }

    fn rec(ms: &[u64], t: usize, carry: u64, partial: BigRational, acc: &mut BigRational, p: usize) {
        let m_eff = ms[t - 1] + carry;
        let c = (p - t + 1) as u64;
        if t == 1 {
            let term = BigRational::new(
                factorial(m_eff),
                BigInt::from(c).pow((1 + m_eff) as u32),
            );
            *acc += partial * term;
            return;
        }
        for k in 0..=m_eff {
            let w = BigRational::new(
                binomial(m_eff, k) * factorial(m_eff - k),
                BigInt::from(c).pow((1 + m_eff - k) as u32),
            );
            rec(ms, t - 1, k, partial.clone() * w, acc, p);
        }
    }

    let mut acc = BigRational::zero();
    rec(ms, p, 0, BigRational::one(), &mut acc, p);

    let scale = BigRational::from_integer(
        BigInt::from((n_total - 1) as u64).pow((p as u64 + msum) as u32),
    ) * BigRational::from_integer(factorial(s - 2 - p as u64 - msum));
    Ok(acc * scale)
}

/// Exact mean consecutive-spacing ratio ⟨r⟩ of the β-Laguerre ensemble
/// (α = 1) at matrix size n, integer β, as an exact rational.
pub fn laguerre_mean_ratio_exact(n: usize, beta: u32) -> Result<BigRational> {
    if n < 3 {
        return Err(Error::parameter("need n >= 3"));
    }
    if beta == 0 {
        return Err(Error::parameter("beta must be a positive integer"));
    }
    let p = n - 2;
    let beta_u = beta as usize;
    let s = (n + beta_u * n * (n - 1) / 2) as u64;

    // base factor multiset: Π f_j^β (1+f_j)^β Π_{j<k}(f_k−f_j)^β
    let mut base: Vec<Factor> = Vec::new();
    for j in 0..p {
        for _ in 0..beta_u {
            base.push(Factor::Var(j));
            base.push(Factor::OnePlus(j));
        }
    }
    for j in 0..p {
        for k in j + 1..p {
            for _ in 0..beta_u {
                base.push(Factor::Diff(k, j));
            }
        }
    }

    // Σ_j r_j with the denominators cancelled against base factors:
    // r₁ = f₁ appends Var(0); r₂ = (f₂−f₁)/f₁ replaces one Var(0) with
    // Diff(1,0); r_j (j ≥ 3) replaces one Diff(j−2, j−3) with Diff(j−1, j−2)
    let mut total: Poly = BTreeMap::new();
    for j in 1..=p {
        let mut factors = base.clone();
        match j {
            1 => factors.push(Factor::Var(0)),
            2 => {
                let pos = factors
                    .iter()
                    .position(|&f| f == Factor::Var(0))
                    .expect("beta >= 1 guarantees a Var(0) factor");
                factors.remove(pos);
                factors.push(Factor::Diff(1, 0));
            }
            _ => {
                let denom = Factor::Diff(j - 2, j - 3);
                let pos = factors
                    .iter()
                    .position(|&f| f == denom)
                    .expect("beta >= 1 guarantees the Vandermonde factor");
                factors.remove(pos);
                factors.push(Factor::Diff(j - 1, j - 2));
            }
        }
        let mut acc = poly_one(p);
        for f in factors {
            acc = poly_mul(&acc, &factor_poly(p, f))?;
        }
        for (e, c) in acc {
            let entry = total.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
        }
    }

    // Σ_m c_m I(m), with the 1/((N−1)^{s−1} Γ(s−1)) factor deferred
    let mut sum = BigRational::zero();
    for (e, c) in &total {
        if c.is_zero() {
            continue;
        }
        let ms: Vec<u64> = e.iter().map(|&x| x as u64).collect();
        sum += BigRational::from_integer(c.clone()) * nested_sum(&ms, n, s)?;
    }

    // Z^L_{n,1,β} as (rational, √π power); the √π powers must cancel
    let mut z = BigRational::new(
        BigInt::from(2u32).pow(s as u32),
        factorial(n as u64),
    );
    let mut pi_pow: i64 = 0;
    for j in 1..=n {
        let (a1, p1) = gamma_half((2 + (j - 1) * beta_u) as u64);
        let (a2, p2) = gamma_half((2 + j * beta_u) as u64);
        let (a3, p3) = gamma_half((2 + beta_u) as u64);
        z *= a1 * a2 / a3;
        pi_pow += p1 + p2 - p3;
    }
    if pi_pow != 0 {
        return Err(Error::unsupported(format!(
            "√π bookkeeping did not cancel (residual power {pi_pow})"
        )));
    }

    // ⟨r⟩ = (1/p) · Γ(s−1) 2^s/(N Z) · Σ c_m I(m) / ((N−1)^{s−1} Γ(s−1))
    let front = BigRational::new(BigInt::from(2u32).pow(s as u32), BigInt::from(n as u64))
        / z
        / BigRational::from_integer(big(p as i64));
    let denom = BigRational::from_integer(BigInt::from((n - 1) as u64).pow((s - 1) as u32));
    Ok(front * sum / denom)
}

/// "p/q" display of an exact rational.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal approximation of an exact rational.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back on a scaled division for extreme magnitudes
        let scale = BigInt::from(10u64).pow(18);
        let scaled = (r * BigRational::from_integer(scale)).to_integer();
        scaled.to_f64().unwrap_or(f64::NAN) / 1e18
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(big(n), big(d))
    }

    #[test]
    fn gamma_half_values() {
        // Γ(1) = 1, Γ(2) = 1, Γ(3) = 2
        assert_eq!(gamma_half(2), (rat(1, 1), 0));
        assert_eq!(gamma_half(4), (rat(1, 1), 0));
        assert_eq!(gamma_half(6), (rat(2, 1), 0));
        // Γ(1/2) = √π, Γ(3/2) = √π/2, Γ(5/2) = 3√π/4
        assert_eq!(gamma_half(1), (rat(1, 1), 1));
        assert_eq!(gamma_half(3), (rat(1, 2), 1));
        assert_eq!(gamma_half(5), (rat(3, 4), 1));
    }

    #[test]
    fn mean_ratio_n5_beta1_exact() {
        let got = laguerre_mean_ratio_exact(5, 1).unwrap();
        assert_eq!(got, rat(175271, 52488));
        assert!((rational_to_f64(&got) - 3.339258497180308).abs() < 1e-14);
    }

    #[test]
    fn mean_ratio_other_anchors() {
        // independently computed with exact rational arithmetic elsewhere
        assert_eq!(laguerre_mean_ratio_exact(3, 1).unwrap(), rat(14, 3));
        assert_eq!(laguerre_mean_ratio_exact(4, 1).unwrap(), rat(1223, 324));
        assert_eq!(laguerre_mean_ratio_exact(4, 2).unwrap(), rat(554683, 186624));
        assert_eq!(
            laguerre_mean_ratio_exact(6, 1).unwrap(),
            BigRational::new(big(645904338421), big(209952000000))
        );
        assert_eq!(
            laguerre_mean_ratio_exact(5, 2).unwrap(),
            BigRational::new(big(17543146803577), big(6687075336192))
        );
    }

    #[test]
    fn mean_ratio_rejects_bad_params() {
        assert!(laguerre_mean_ratio_exact(2, 1).is_err());
        assert!(laguerre_mean_ratio_exact(5, 0).is_err());
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&rat(14, 3)), "14/3");
        assert_eq!(format_rational(&rat(7, 1)), "7");
    }
}
