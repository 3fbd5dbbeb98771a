//! The Riccati equation `y′ = −y² + f` and its one-parameter general solution
//!
//! ```text
//! y₁ = y₀ + g / (λ_r + ∫ˣ g),   g = exp(−∫ˣ 2 y₀)
//! ```
//!
//! built from a particular solution `y₀`.

use crate::error::{Error, Result};
use crate::grid::{cumulative_integral, derivative, GridFunction};
use crate::isospectral::DENOMINATOR_FLOOR;
use crate::spectral::ZeroMode;
use crate::susy::superpotential_from_mode;

/// Largest residual accepted for the particular solution of an instance.
pub const PARTICULAR_TOLERANCE: f64 = 1e-6;

/// `max |y′ + y² − f| / (1 + max|f|)` over samples where everything is unmasked.
pub fn riccati_residual(y: &GridFunction, f_rhs: &GridFunction) -> f64 {
    let dy = derivative(y);
    let scale = 1.0 + f_rhs.max_abs();
    dy.values()
        .iter()
        .zip(y.values())
        .zip(f_rhs.values())
        .map(|((d, v), f)| d + v * v - f)
        .filter(|r| r.is_finite())
        .fold(0.0_f64, |m, r| m.max(r.abs()))
        / scale
}

#[derive(Debug, Clone)]
pub struct RiccatiInstance {
    pub y0: GridFunction,
    pub f_rhs: GridFunction,
    pub lambda_r: f64,
}

impl RiccatiInstance {
    pub fn new(y0: GridFunction, f_rhs: GridFunction, lambda_r: f64) -> Result<Self> {
        y0.check_same_grid(&f_rhs)?;
        let r = riccati_residual(&y0, &f_rhs);
        if r.is_nan() || r >= PARTICULAR_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "y0 is not a particular solution: residual {r:.3e}"
            )));
        }
        Ok(Self { y0, f_rhs, lambda_r })
    }

    /// Instance seeded by the superpotential of `u`: `y₀ = W′ = −u′/u` and
    /// `f = W′² + W″`, which is the fermionic partner potential `V₊`.
    ///
    /// `lambda` is the family parameter of `Ψ_λ = u / (λ + ∫ˣ u²)`. Because
    /// `g` is integrated from the left edge of the trusted window (where
    /// `g = 1` instead of `u²`), the matching constant is
    /// `λ_r = (λ + ∫^a u²) / u(a)²` with `a` that window edge.
    pub fn from_zero_mode(u: &ZeroMode, lambda: f64) -> Result<Self> {
        let s = superpotential_from_mode(u)?;
        let w2 = s.w_double_prime();
        let f_rhs = s.w_prime.zip_with(&w2, |w, d| w * w + d)?;
        let a = s.trusted_window.start;
        let ua = u.psi().values()[a];
        let i_a = cumulative_integral(&u.psi().map(|v| v * v)).values()[a];
        Self::new(s.w_prime, f_rhs, (lambda + i_a) / (ua * ua))
    }
}

/// `g = exp(−2 ∫ˣ y₀)` with the trapezoid primitive.
pub fn integrating_factor(y0: &GridFunction) -> GridFunction {
    cumulative_integral(y0).map(|c| (-2.0 * c).exp())
}

pub fn riccati_general_solution(inst: &RiccatiInstance) -> Result<GridFunction> {
    let g = integrating_factor(&inst.y0);
    let denom = cumulative_integral(&g).map(|c| inst.lambda_r + c);
    let d = denom.values();
    let first = d.iter().find(|v| v.is_finite()).copied().unwrap_or(0.0);
    if let Some(i) = d
        .iter()
        .position(|v| v.is_finite() && (v.abs() <= DENOMINATOR_FLOOR || v.signum() != first.signum()))
    {
        let finite = d.iter().filter(|v| v.is_finite());
        let hi = -finite.clone().fold(f64::INFINITY, |a, &v| a.min(v - inst.lambda_r));
        let lo = -finite.fold(f64::NEG_INFINITY, |a, &v| a.max(v - inst.lambda_r));
        return Err(Error::SingularParameter {
            lambda: inst.lambda_r,
            x: Some(g.grid().x(i)),
            lo,
            hi,
        });
    }
    let q = g.zip_with(&denom, |gv, dv| gv / dv)?;
    inst.y0.add(&q)
}
