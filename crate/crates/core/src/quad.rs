//! Adaptive Gauss–Kronrod quadrature.
//!
//! One-dimensional 15-point Kronrod / 7-point Gauss panels with worst-first
//! interval subdivision. Semi-infinite ranges are compactified with
//! x = a + t/(1−t), which handles the polynomially decaying tails of the
//! ratio densities. Multi-dimensional slice integrals nest the 1-D routine.
//!
//! Evaluation is sequential and allocation-order deterministic, so repeated
//! runs are bit-identical.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// QUADPACK dqk15 nodes and weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Kronrod panel: returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_gauss = 0.0;
    let mut result_kronrod = fc * WGK[7];
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    result_gauss += WG[3] * fc;
    let integral = result_kronrod * half;
    let err = ((result_kronrod - result_gauss) * half).abs();
    // conservative rescale as in QUADPACK
    let err = if err != 0.0 {
        let resasc: f64 = {
            let mean = result_kronrod / 2.0;
            let mut s = WGK[7] * (fc - mean).abs();
            for j in 0..7 {
                s += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
            }
            s * half.abs()
        };
        if resasc != 0.0 {
            resasc * 1.0f64.min((200.0 * err / resasc).powf(1.5))
        } else {
            err
        }
    } else {
        err
    };
    (integral, err)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    seq: u64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.seq == other.seq
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // worst error first; tie-break on insertion order for determinism
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Adaptive integral of `f` over the finite interval `[a, b]` to absolute
/// tolerance `atol`. Returns the estimate and an error bound.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, atol: f64) -> Result<f64> {
    let (value, err) = integrate_with_err(&f, a, b, atol, 4000)?;
    if err > 10.0 * atol.max(1e-300) {
        return Err(Error::Quadrature(format!(
            "error estimate {err:e} above tolerance {atol:e} on [{a}, {b}]"
        )));
    }
    Ok(value)
}

/// Like [`integrate`] but returns (value, error estimate) and never fails on
/// tolerance; `max_panels` bounds the subdivision work.
pub fn integrate_with_err<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    atol: f64,
    max_panels: usize,
) -> Result<(f64, f64)> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::parameter("integrate: endpoints must be finite"));
    }
    if a == b {
        return Ok((0.0, 0.0));
    }
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let (v, e) = gk15(f, a, b);
    heap.push(Panel { a, b, value: v, err: e, seq });
    let mut total_err = e;
    while total_err > atol && heap.len() < max_panels {
        let worst = heap.pop().expect("heap nonempty");
        if worst.err <= 0.0 || (worst.b - worst.a).abs() < 1e-15 * (worst.b.abs() + worst.a.abs() + 1e-30) {
            // cannot subdivide further
            heap.push(worst);
            break;
        }
        total_err -= worst.err;
        let mid = 0.5 * (worst.a + worst.b);
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            seq += 1;
            let (v, e) = gk15(f, lo, hi);
            total_err += e;
            heap.push(Panel { a: lo, b: hi, value: v, err: e, seq });
        }
    }
    // deterministic summation: order panels by left endpoint
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a).then(p.b.total_cmp(&q.b)));
    let mut sum = 0.0;
    let mut comp = 0.0; // Neumaier compensation
    for p in &panels {
        let t = sum + p.value;
        comp += if sum.abs() >= p.value.abs() {
            (sum - t) + p.value
        } else {
            (p.value - t) + sum
        };
        sum = t;
    }
    Ok((sum + comp, total_err))
}

/// Adaptive integral over `[a, ∞)` via x = a + t/(1−t).
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, atol: f64) -> Result<f64> {
    let g = |t: f64| {
        let om = 1.0 - t;
        let x = a + t / om;
        let jac = 1.0 / (om * om);
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    };
    integrate(g, 0.0, 1.0, atol)
}

/// (value, error) form of [`integrate_semi_infinite`].
pub fn integrate_semi_infinite_with_err<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    atol: f64,
    max_panels: usize,
) -> Result<(f64, f64)> {
    let g = |t: f64| {
        let om = 1.0 - t;
        let x = a + t / om;
        let jac = 1.0 / (om * om);
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    };
    integrate_with_err(&g, 0.0, 1.0, atol, max_panels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory() {
        let v = integrate(|x| x.sin(), 0.0, 5.0 * PI, 1e-11).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn semi_infinite_exponential() {
        let v = integrate_semi_infinite(|x| (-x).exp(), 0.0, 1e-11).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn semi_infinite_polynomial_tail() {
        // ∫_0^∞ dr/(1+r)^2 = 1
        let v = integrate_semi_infinite(|x| (1.0 + x).powi(-2), 0.0, 1e-11).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn endpoint_singularity_integrable() {
        // ∫_0^1 x^{-1/2} dx = 2
        let v = integrate(|x| if x > 0.0 { x.sqrt().recip() } else { 0.0 }, 0.0, 1.0, 1e-9);
        // GK handles this only approximately; accept the error path or closeness
        if let Ok(v) = v {
            assert!((v - 2.0).abs() < 1e-6, "got {v}");
        }
    }

    #[test]
    fn deterministic_reruns() {
        let f = |x: f64| (x * 3.7).sin() / (1.0 + x * x);
        let a = integrate(f, 0.0, 20.0, 1e-12).unwrap();
        let b = integrate(f, 0.0, 20.0, 1e-12).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
