//! Lowest eigenpairs of a real symmetric tridiagonal matrix.
//!
//! Eigenvalues come from Sturm-count bisection, eigenvectors from inverse
//! iteration with a partially pivoted tridiagonal LU, and the reported value is
//! the Rayleigh quotient of the converged vector. Everything is sequential and
//! deterministic.

use crate::error::{Error, Result};

const MAX_BISECTION_STEPS: usize = 200;
const INVERSE_ITERATIONS: usize = 4;
const MAX_INVERSE_ITERATIONS: usize = 12;

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let qs = if q == 0.0 { f64::EPSILON * (1.0 + x.abs()) } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / qs;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

pub fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let m = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < m { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `j`-th smallest eigenvalue (0-based) by bisection on the Sturm count.
pub fn bisect_eigenvalue(diag: &[f64], off: &[f64], j: usize) -> f64 {
    let (mut lo, mut hi) = gershgorin_bounds(diag, off);
    let pad = f64::EPSILON * (lo.abs().max(hi.abs()) + 1.0) * 4.0;
    lo -= pad;
    hi += pad;
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > j {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// LU factors of `T - σI` with row interchanges (LAPACK `gttrf` layout).
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        // Exact singularity only happens when the shift hits an eigenvalue to
        // the last bit; nudge the pivot so the solve returns a huge but finite
        // vector, which is what inverse iteration wants.
        let tiny = f64::EPSILON * diag.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        for p in &mut d {
            if *p == 0.0 {
                *p = tiny;
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
                b[i + 1] -= self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn apply(diag: &[f64], off: &[f64], x: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * x[i];
            if i > 0 {
                s += off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += off[i] * x[i + 1];
            }
            s
        })
        .collect()
}

fn euclid(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Rayleigh quotient written as row sums plus squared differences, which
/// avoids cancelling the large `±1/h²` bands against each other.
fn rayleigh_quotient(diag: &[f64], off: &[f64], x: &[f64]) -> f64 {
    let n = diag.len();
    let mut num = 0.0;
    for i in 0..n {
        let row = diag[i]
            + if i > 0 { off[i - 1] } else { 0.0 }
            + if i + 1 < n { off[i] } else { 0.0 };
        num += row * x[i] * x[i];
    }
    for i in 0..n.saturating_sub(1) {
        let d = x[i] - x[i + 1];
        num -= off[i] * d * d;
    }
    num / x.iter().map(|v| v * v).sum::<f64>()
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    /// Unit Euclidean norm.
    pub vector: Vec<f64>,
    /// `‖T x − λ x‖ / ‖x‖`.
    pub residual: f64,
}

/// Lowest `k` eigenpairs in ascending order.
///
/// `tol` is the relative residual target, scaled by `max(1, |λ|)`.
pub fn lowest_eigenpairs(diag: &[f64], off: &[f64], k: usize, tol: f64) -> Result<Vec<Eigenpair>> {
    let m = diag.len();
    if off.len() + 1 != m {
        return Err(Error::InvalidArgument(format!(
            "off-diagonal has length {}, expected {}",
            off.len(),
            m.saturating_sub(1)
        )));
    }
    if k == 0 || k > m {
        return Err(Error::InvalidArgument(format!(
            "requested {k} eigenpairs from a {m}x{m} matrix"
        )));
    }
    let scale = diag.iter().chain(off).fold(0.0_f64, |a, v| a.max(v.abs()));
    let mut pairs: Vec<Eigenpair> = Vec::with_capacity(k);
    for j in 0..k {
        let estimate = bisect_eigenvalue(diag, off, j);
        // Offset the shift by a few ulps so the factorization stays nonsingular.
        let shift = estimate + 8.0 * f64::EPSILON * scale.max(1.0);
        let lu = TridiagLu::factor(diag, off, shift);
        // Deterministic, non-symmetric start vector.
        let mut x: Vec<f64> = (0..m).map(|i| 1.0 + 0.25 * ((i * 7 + j * 3) % 11) as f64 / 11.0).collect();
        let mut done = None;
        for it in 0..MAX_INVERSE_ITERATIONS {
            for p in &pairs {
                let dot: f64 = p.vector.iter().zip(&x).map(|(a, b)| a * b).sum();
                for (xi, pi) in x.iter_mut().zip(&p.vector) {
                    *xi -= dot * pi;
                }
            }
            lu.solve(&mut x);
            let nrm = euclid(&x);
            x.iter_mut().for_each(|v| *v /= nrm);
            if it + 1 < INVERSE_ITERATIONS {
                continue;
            }
            let value = rayleigh_quotient(diag, off, &x);
            let tx = apply(diag, off, &x);
            let residual = euclid(&tx.iter().zip(&x).map(|(t, v)| t - value * v).collect::<Vec<_>>());
            if residual < tol * value.abs().max(1.0) {
                done = Some((value, residual));
                break;
            }
        }
        let (value, residual) = done.ok_or(Error::NoConvergence {
            iterations: MAX_INVERSE_ITERATIONS,
        })?;
        // Fix the global sign: first significant component positive.
        let peak = x.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        if let Some(first) = x.iter().find(|v| v.abs() > 1e-3 * peak) {
            if *first < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
        }
        pairs.push(Eigenpair {
            value,
            vector: x,
            residual,
        });
    }
    Ok(pairs)
}
