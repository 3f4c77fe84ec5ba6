//! Energy levels of a free particle in a rectangular billiard with periodic
//! boundary conditions: λ_{l,m} = (2πl/a)² + (2πm/b)², l, m = 0, 1, ….
//!
//! With a⁴/b⁴ irrational the sequence behaves like a Poisson process; the
//! sides are usually given through their fourth powers (a⁴ = 2, b⁴ = 5 in
//! the reference setup).

use crate::error::{Error, Result};
use crate::spectrum::{Spectrum, SpectrumSource};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilliardSpec {
    pub a: f64,
    pub b: f64,
    pub max_levels: usize,
}

impl BilliardSpec {
    pub fn new(a: f64, b: f64, max_levels: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::parameter("billiard sides must be positive"));
        }
        if max_levels == 0 {
            return Err(Error::parameter("max_levels must be >= 1"));
        }
        Ok(BilliardSpec { a, b, max_levels })
    }

    /// Sides given as fourth powers, e.g. a⁴ = 2, b⁴ = 5.
    pub fn from_fourth_powers(a4: f64, b4: f64, max_levels: usize) -> Result<Self> {
        if !(a4 > 0.0 && b4 > 0.0) {
            return Err(Error::parameter("fourth powers must be positive"));
        }
        Self::new(a4.powf(0.25), b4.powf(0.25), max_levels)
    }
}

/// Number of lattice levels with λ_{l,m} ≤ cutoff.
fn count_below(spec: &BilliardSpec, cutoff: f64) -> usize {
    let ka = 2.0 * PI / spec.a;
    let kb = 2.0 * PI / spec.b;
    let l_max = (cutoff.sqrt() / ka).floor() as usize;
    let mut count = 0usize;
    for l in 0..=l_max {
        let rem = cutoff - (ka * l as f64).powi(2);
        if rem < 0.0 {
            break;
        }
        count += (rem.sqrt() / kb).floor() as usize + 1;
    }
    count
}

/// The sorted lowest `max_levels` billiard levels, enumerated completely
/// below an adaptively grown energy cutoff: no level below the last returned
/// one is ever missing.
pub fn billiard_levels(spec: &BilliardSpec) -> Result<Spectrum> {
    let ka = 2.0 * PI / spec.a;
    let kb = 2.0 * PI / spec.b;
    // Weyl-type estimate of the cutoff holding max_levels quarter-lattice
    // points, with head room; grown geometrically if short.
    let mut cutoff =
        (4.0 * PI * PI * (spec.max_levels as f64 + 4.0) * 4.0 / (spec.a * spec.b)).max(ka * ka + kb * kb) * 1.2;
    for _ in 0..64 {
        if count_below(spec, cutoff) > spec.max_levels {
            break;
        }
        cutoff *= 2.0;
    }
    if count_below(spec, cutoff) <= spec.max_levels {
        return Err(Error::Quadrature("billiard cutoff search failed to converge".into()));
    }

    let l_max = (cutoff.sqrt() / ka).floor() as usize;
    let mut levels = Vec::with_capacity(spec.max_levels * 2);
    for l in 0..=l_max {
        let la = (ka * l as f64).powi(2);
        let rem = cutoff - la;
        if rem < 0.0 {
            break;
        }
        let m_max = (rem.sqrt() / kb).floor() as usize;
        for m in 0..=m_max {
            levels.push(la + (kb * m as f64).powi(2));
        }
    }
    levels.sort_by(f64::total_cmp);
    levels.truncate(spec.max_levels);
    Spectrum::from_sorted(
        levels,
        SpectrumSource::Model(format!(
            "billiard a^4={:.6} b^4={:.6}",
            spec.a.powi(4),
            spec.b.powi(4)
        )),
    )
}
