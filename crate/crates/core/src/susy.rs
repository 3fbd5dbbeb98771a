//! Factorization `H₋ = A†A`, the partner `H₊ = AA†`, second solutions, general
//! zero modes and the first-order transformation operators.
//!
//! Anything that divides by a mode is evaluated on that mode's trusted window
//! and masked (NaN) elsewhere.

use crate::error::{Error, Result};
use crate::grid::{
    cumulative_integral_from, derivative, second_derivative, GridFunction,
    IntegralOrigin,
};
use crate::spectral::{TrustedWindow, ZeroMode};

/// Minimum trusted-window width for the second-solution quadratures.
pub const MIN_WINDOW_POINTS: usize = 10;

/// `W′ = −u′/u` for a nodeless zero mode `u`.
#[derive(Debug, Clone)]
pub struct Superpotential {
    pub w_prime: GridFunction,
    pub source_mode: ZeroMode,
    pub trusted_window: TrustedWindow,
}

impl Superpotential {
    /// `W″`, masked one point inside the window edges.
    pub fn w_double_prime(&self) -> GridFunction {
        derivative(&self.w_prime)
    }
}

pub fn superpotential_from_mode(u: &ZeroMode) -> Result<Superpotential> {
    u.require_nodeless()?;
    let w = u.window();
    let du = derivative(u.psi());
    let w_prime = du
        .zip_with(u.psi(), |d, v| -d / v)?
        .masked_outside(w.start, w.end);
    Ok(Superpotential {
        w_prime,
        source_mode: u.clone(),
        trusted_window: w,
    })
}

/// `A f = (D + W′) f`.
pub fn apply_a(s: &Superpotential, f: &GridFunction) -> Result<GridFunction> {
    derivative(f).add(&s.w_prime.mul(f)?)
}

/// `A† f = (−D + W′) f`.
pub fn apply_a_dagger(s: &Superpotential, f: &GridFunction) -> Result<GridFunction> {
    s.w_prime.mul(f)?.sub(&derivative(f))
}

#[derive(Debug, Clone)]
pub struct PartnerPair {
    /// Bosonic potential `V₋ = u″/u`.
    pub v_minus: GridFunction,
    /// Fermionic potential `V₊ = V₋ + 2W″`.
    pub v_plus: GridFunction,
    pub superpotential: Superpotential,
}

impl PartnerPair {
    /// `V₊` on the whole grid, for diagonalization.
    ///
    /// Inside the trusted window this is `v_minus_full + 2W″`; outside, `W″`
    /// is held at its value on the nearest window edge.
    pub fn v_plus_extended(&self, v_minus_full: &GridFunction) -> Result<GridFunction> {
        let w2 = self.superpotential.w_double_prime();
        let (lo, hi) = w2
            .finite_range()
            .ok_or(Error::WindowTooSmall { points: 0, required: 3 })?;
        let vals = w2.values();
        let w2_full: Vec<f64> = (0..vals.len())
            .map(|i| vals[i.clamp(lo, hi)])
            .collect();
        let w2_full = GridFunction::new(*w2.grid(), w2_full)?;
        v_minus_full.add(&w2_full.scale(2.0))
    }
}

pub fn partner_potential(s: &Superpotential) -> Result<PartnerPair> {
    let u = s.source_mode.psi();
    let w = s.trusted_window;
    let v_minus = second_derivative(u)
        .zip_with(u, |d2, v| d2 / v)?
        .masked_outside(w.start, w.end);
    let v_plus = v_minus.add(&s.w_double_prime().scale(2.0))?;
    Ok(PartnerPair {
        v_minus,
        v_plus,
        superpotential: s.clone(),
    })
}

fn require_window(u: &ZeroMode) -> Result<TrustedWindow> {
    u.require_nodeless()?;
    let w = u.window();
    if w.len() < MIN_WINDOW_POINTS {
        return Err(Error::WindowTooSmall {
            points: w.len(),
            required: MIN_WINDOW_POINTS,
        });
    }
    Ok(w)
}

/// `v₋ = u ∫ˣ u⁻²`.
///
/// With [`IntegralOrigin::Left`] the integral starts at the left edge of the
/// trusted window.
pub fn second_solution_minus(u: &ZeroMode, origin: IntegralOrigin) -> Result<GridFunction> {
    let w = require_window(u)?;
    let inv_sq = u.psi().map(|v| 1.0 / (v * v)).masked_outside(w.start, w.end);
    u.psi().mul(&cumulative_integral_from(&inv_sq, origin))
}

/// `v₊ = u⁻¹ ∫ˣ u²`.
pub fn second_solution_plus(u: &ZeroMode, origin: IntegralOrigin) -> Result<GridFunction> {
    fermionic_zero_mode(u, 0.0, origin)
}

/// `Φ₋ = λ_s u + v₋`.
pub fn general_zero_mode_minus(
    u: &ZeroMode,
    lambda_s: f64,
    origin: IntegralOrigin,
) -> Result<GridFunction> {
    let v = second_solution_minus(u, origin)?;
    if lambda_s == 0.0 {
        return Ok(v);
    }
    u.psi().scale(lambda_s).add(&v)
}

/// `Φ₊ = (λ_s + ∫ˣ u²) / u`.
pub fn fermionic_zero_mode(
    u: &ZeroMode,
    lambda_s: f64,
    origin: IntegralOrigin,
) -> Result<GridFunction> {
    let w = require_window(u)?;
    let primitive = cumulative_integral_from(&u.psi().map(|v| v * v), origin);
    primitive
        .zip_with(u.psi(), |i, v| (lambda_s + i) / v)
        .map(|f| f.masked_outside(w.start, w.end))
}

/// `T₁ f = (D − u′/u) f`.
pub fn apply_t1(u: &ZeroMode, f: &GridFunction) -> Result<GridFunction> {
    apply_a(&superpotential_from_mode(u)?, f)
}

/// `T₁† f = (−D − u′/u) f`.
pub fn apply_t1_dagger(u: &ZeroMode, f: &GridFunction) -> Result<GridFunction> {
    apply_a_dagger(&superpotential_from_mode(u)?, f)
}

// Both intertwiners fold the `Ψ′/Ψ` term into a product-rule derivative, so
// `T⁻Φ₊ = Ψ` and `T⁺Ψ = Φ₊` hold to rounding on the grid: the derivative then
// acts on `ΨΦ₊ = 1` instead of on the rapidly growing `Φ₊`.

/// `T⁻_λ f = (−D + Ψ² − Ψ′/Ψ) f`, evaluated as `−Ψ⁻¹ D(Ψf) + Ψ² f`.
pub fn apply_t_minus_lambda(psi: &ZeroMode, f: &GridFunction) -> Result<GridFunction> {
    let w = psi.window();
    let p = psi.psi();
    let d = derivative(&p.mul(f)?);
    let out = d.zip_with(p, |dv, pv| -dv / pv)?.add(&p.mul(p)?.mul(f)?)?;
    Ok(out.masked_outside(w.start, w.end))
}

/// `T⁺_λ f = (D + Ψ⁻² − Ψ′/Ψ) f`, evaluated as `Ψ D(f/Ψ) + Ψ⁻² f`.
pub fn apply_t_plus_lambda(psi: &ZeroMode, f: &GridFunction) -> Result<GridFunction> {
    let w = psi.window();
    let p = psi.psi();
    let ratio = f.zip_with(p, |fv, pv| fv / pv)?.masked_outside(w.start, w.end);
    let out = derivative(&ratio).mul(p)?.add(&ratio.zip_with(p, |r, pv| r / pv)?)?;
    Ok(out.masked_outside(w.start, w.end))
}
