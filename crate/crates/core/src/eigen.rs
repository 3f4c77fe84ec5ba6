//! Eigenvalues of real symmetric tridiagonal matrices, and Householder
//! reduction of dense Hermitian matrices to tridiagonal form.
//!
//! Two tridiagonal paths are provided: Sturm-sequence bisection (default,
//! eigenvalue-by-eigenvalue, robust) and implicit QL with Wilkinson shift
//! (fast path for large Monte-Carlo batches). Matrices are split into
//! independent blocks at vanishing off-diagonal entries first. No
//! eigenvectors anywhere: ratio statistics only need the spectrum.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Real symmetric tridiagonal matrix: `diag` has n entries, `offdiag` n−1.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::parameter("tridiagonal matrix must have n >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::parameter("offdiag length must be n - 1"));
        }
        Ok(TridiagonalMatrix { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin bound on the spectral radius.
    pub fn gershgorin_norm(&self) -> f64 {
        let n = self.n();
        let mut bound = 0.0f64;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i < n - 1 { self.offdiag[i].abs() } else { 0.0 };
            bound = bound.max(self.diag[i].abs() + left + right);
        }
        bound.max(f64::MIN_POSITIVE)
    }

    /// Cheap structural hash for diagnostics.
    fn fingerprint(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        let mut mix = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x1000_0000_01b3);
        };
        mix(self.n() as u64);
        for &v in self.diag.iter().take(8) {
            mix(v.to_bits());
        }
        for &v in self.offdiag.iter().take(8) {
            mix(v.to_bits());
        }
        h
    }
}

/// Solver selection for [`eigenvalues_tridiagonal_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenMethod {
    /// Sturm-sequence bisection, one eigenvalue at a time.
    Bisection,
    /// Implicit QL with Wilkinson shift.
    Ql,
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending, counted with multiplicity; length equals the dimension.
    pub eigenvalues: Vec<f64>,
    /// Solver iterations (bisection steps or QL sweeps), for diagnostics.
    pub iterations: usize,
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`,
/// by counting negative pivots of the LDLᵀ recursion (Sturm sequence).
pub fn sturm_count(diag: &[f64], offdiag: &[f64], x: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0usize;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let e2 = offdiag[i - 1] * offdiag[i - 1];
        let q_safe = if q == 0.0 {
            // nudge a zero pivot; standard Sturm guard
            f64::MIN_POSITIVE.max(e2 * f64::EPSILON * f64::EPSILON)
        } else {
            q.abs().max(f64::MIN_POSITIVE) * q.signum()
        };
        q = (diag[i] - x) - e2 / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

const BISECTION_STEPS_PER_EIGENVALUE: usize = 80;

fn bisection_block(diag: &[f64], offdiag: &[f64], abs_tol: f64, out: &mut Vec<f64>) -> usize {
    let n = diag.len();
    if n == 1 {
        out.push(diag[0]);
        return 0;
    }
    let m = TridiagonalMatrix { diag: diag.to_vec(), offdiag: offdiag.to_vec() };
    let bound = m.gershgorin_norm();
    let mut iters = 0;
    for k in 0..n {
        let mut lo = -bound - abs_tol;
        let mut hi = bound + abs_tol;
        for _ in 0..BISECTION_STEPS_PER_EIGENVALUE {
            if hi - lo <= abs_tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            iters += 1;
            if sturm_count(diag, offdiag, mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    iters
}

/// Implicit QL with Wilkinson shift, eigenvalues only (EISPACK tql1 lineage).
/// `d` and `e` are consumed; `e` must have length n with a trailing slot.
fn ql_block(d: &mut [f64], e: &mut [f64], iteration_cap: usize) -> std::result::Result<usize, ()> {
    let n = d.len();
    let mut total_iter = 0usize;
    for l in 0..n {
        loop {
            // locate a negligible subdiagonal element
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            total_iter += 1;
            if total_iter > iteration_cap {
                return Err(());
            }
            // Wilkinson shift
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(if g >= 0.0 { 1.0 } else { -1.0 }));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(total_iter)
}

/// All eigenvalues by Sturm bisection (the default path).
///
/// Guarantees each value within `rel_tol · ‖m‖` (Gershgorin norm) of a true
/// eigenvalue, counted with multiplicity. `rel_tol` must lie in
/// [1e-15, 1e-6].
pub fn eigenvalues_tridiagonal(m: &TridiagonalMatrix, rel_tol: f64) -> Result<EigenResult> {
    eigenvalues_tridiagonal_with(m, rel_tol, EigenMethod::Bisection)
}

pub const DEFAULT_EIGEN_REL_TOL: f64 = 1e-12;

/// All eigenvalues with an explicit solver choice.
pub fn eigenvalues_tridiagonal_with(
    m: &TridiagonalMatrix,
    rel_tol: f64,
    method: EigenMethod,
) -> Result<EigenResult> {
    if !(1e-15..=1e-6).contains(&rel_tol) {
        return Err(Error::parameter(format!(
            "rel_tol {rel_tol:e} outside [1e-15, 1e-6]"
        )));
    }
    let n = m.n();
    let norm = m.gershgorin_norm();
    let abs_tol = rel_tol * norm;
    let mut eigenvalues = Vec::with_capacity(n);
    let mut iterations = 0usize;

    // split at negligible off-diagonal entries into independent blocks
    let mut block_start = 0usize;
    let mut boundaries = Vec::new();
    for i in 0..n - 1 {
        let scale = m.diag[i].abs() + m.diag[i + 1].abs();
        if m.offdiag[i] == 0.0 || m.offdiag[i].abs() <= f64::EPSILON * scale {
            boundaries.push(i + 1);
        }
    }
    boundaries.push(n);

    for &end in &boundaries {
        let d = &m.diag[block_start..end];
        let e = &m.offdiag[block_start..end.saturating_sub(1).max(block_start)];
        match method {
            EigenMethod::Bisection => {
                iterations += bisection_block(d, e, abs_tol, &mut eigenvalues);
            }
            EigenMethod::Ql => {
                let mut db = d.to_vec();
                let mut eb = vec![0.0; db.len()];
                eb[..e.len()].copy_from_slice(e);
                let cap = 100 * db.len().max(1);
                match ql_block(&mut db, &mut eb, cap) {
                    Ok(it) => iterations += it,
                    Err(()) => {
                        return Err(Error::NonConvergence {
                            n,
                            iterations: cap,
                            fingerprint: m.fingerprint(),
                        })
                    }
                }
                eigenvalues.extend_from_slice(&db);
            }
        }
        block_start = end;
    }
    eigenvalues.sort_by(f64::total_cmp);
    Ok(EigenResult { eigenvalues, iterations })
}

/// Dense Hermitian matrix in row-major order.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn from_data(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::parameter("data length must be n*n"));
        }
        Ok(HermitianMatrix { n, data })
    }

    /// Build from a real symmetric dense matrix.
    pub fn from_real(n: usize, real: &[f64]) -> Result<Self> {
        if real.len() != n * n {
            return Err(Error::parameter("data length must be n*n"));
        }
        let data = real.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Ok(HermitianMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// Add `v` at (i, j) and its conjugate at (j, i).
    pub fn add_sym(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] += v;
        if i != j {
            self.data[j * self.n + i] += v.conj();
        }
    }

    /// Max |A − A†| over entries, relative to max |A|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut max_abs = 0.0f64;
        let mut max_dev = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                let a = self.get(i, j);
                let b = self.get(j, i).conj();
                max_abs = max_abs.max(a.norm());
                max_dev = max_dev.max((a - b).norm());
            }
        }
        if max_abs == 0.0 {
            0.0
        } else {
            max_dev / max_abs
        }
    }
}

/// Householder reduction of a Hermitian matrix to a real symmetric
/// tridiagonal matrix with the same spectrum. Complex off-diagonal phases are
/// absorbed into a diagonal unitary, leaving nonnegative off-diagonals.
pub fn householder_tridiagonalize(h: &HermitianMatrix) -> Result<TridiagonalMatrix> {
    let defect = h.hermiticity_defect();
    if defect > 1e-12 {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian: relative defect {defect:e}"
        )));
    }
    let n = h.n();
    if n == 0 {
        return Err(Error::parameter("empty matrix"));
    }
    let mut a = h.data.clone();
    let at = |a: &[Complex64], i: usize, j: usize| a[i * n + j];
    let mut diag = vec![0.0f64; n];
    let mut off = vec![0.0f64; n.saturating_sub(1)];

    for k in 0..n.saturating_sub(2) {
        // column below the diagonal
        let x0 = at(&a, k + 1, k);
        let mut xnorm2 = 0.0f64;
        for i in k + 1..n {
            xnorm2 += at(&a, i, k).norm_sqr();
        }
        let xnorm = xnorm2.sqrt();
        if xnorm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let beta = -phase * xnorm;
        // Householder vector v = x − β e₁ (stored over x's slots)
        let mut v = vec![Complex64::new(0.0, 0.0); n - k - 1];
        v[0] = x0 - beta;
        for i in k + 2..n {
            v[i - k - 1] = at(&a, i, k);
        }
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 > 0.0 {
            let m = n - k - 1;
            // p = (2/‖v‖²) A v on the trailing block
            let mut p = vec![Complex64::new(0.0, 0.0); m];
            for i in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                let row = (k + 1 + i) * n + (k + 1);
                for j in 0..m {
                    acc += a[row + j] * v[j];
                }
                p[i] = acc * (2.0 / vnorm2);
            }
            // w = p − (v†p / ‖v‖²) v
            let vp: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
            let kappa = vp * (1.0 / vnorm2);
            let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - kappa * vi).collect();
            // A ← A − v w† − w v† on the trailing block
            for i in 0..m {
                let row = (k + 1 + i) * n + (k + 1);
                for j in 0..m {
                    a[row + j] -= v[i] * w[j].conj() + w[i] * v[j].conj();
                }
            }
        }
        off[k] = beta.norm();
    }
    for i in 0..n {
        diag[i] = at(&a, i, i).re;
    }
    if n >= 2 {
        off[n - 2] = at(&a, n - 1, n - 2).norm();
    }
    TridiagonalMatrix::new(diag, off)
}
