//! Strictly isospectral deformations.
//!
//! From a zero mode `u` and a parameter `λ` the family mode is
//! `Ψ_λ = u / (λ + ∫ˣ u²)` and the deformed potential is
//!
//! ```text
//! V_λ = V₋ − 4 u u′ / (λ + ∫ˣ u²) + 2 u⁴ / (λ + ∫ˣ u²)²
//! ```
//!
//! `λ` is admissible only when the denominator keeps one sign over the whole
//! grid. Chains repeat the construction with the renormalized output mode.

use crate::error::{Error, Result};
use crate::grid::{cumulative_integral_from, derivative, second_derivative, GridFunction, IntegralOrigin};
use crate::spectral::ZeroMode;

/// Smallest `|λ + ∫ˣ u²|` accepted anywhere on the grid.
pub const DENOMINATOR_FLOOR: f64 = 1e-9;
/// Distance from an interval endpoint that counts as hitting the named limit.
pub const LIMIT_TOLERANCE: f64 = 1e-9;
/// How far `‖u‖` may stray from 1 and still be treated as unit-normalized.
const UNIT_NORM_TOLERANCE: f64 = 1e-6;

fn primitive_of_square(u: &ZeroMode, origin: IntegralOrigin) -> GridFunction {
    cumulative_integral_from(&u.psi().map(|v| v * v), origin)
}

fn interval_of(primitive: &GridFunction) -> (f64, f64) {
    let (lo, hi) = primitive
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    // `+ 0.0` turns the −0 of an empty primitive into +0 for display.
    (-hi + 0.0, -lo + 0.0)
}

/// Closed set of `λ` for which `λ + ∫ˣ u²` vanishes somewhere on the grid.
pub fn excluded_interval(u: &ZeroMode, origin: IntegralOrigin) -> (f64, f64) {
    interval_of(&primitive_of_square(u, origin))
}

/// Returns the denominator `λ + ∫ˣ u²` if `λ` is admissible.
fn admissible_denominator(
    u: &ZeroMode,
    lambda: f64,
    origin: IntegralOrigin,
) -> Result<GridFunction> {
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("lambda must be finite, got {lambda}")));
    }
    let primitive = primitive_of_square(u, origin);
    let (lo, hi) = interval_of(&primitive);
    if (lambda - lo).abs() <= LIMIT_TOLERANCE {
        return Err(Error::AbrahamMosesLimit { lambda, lo, hi });
    }
    if (lambda - hi).abs() <= LIMIT_TOLERANCE {
        return Err(Error::PurseyLimit { lambda, lo, hi });
    }
    let denom = primitive.map(|i| lambda + i);
    let d = denom.values();
    let sign = d[0].signum();
    if let Some(i) = d
        .iter()
        .position(|v| v.abs() <= DENOMINATOR_FLOOR || v.signum() != sign)
    {
        return Err(Error::SingularParameter {
            lambda,
            x: Some(u.grid().x(i)),
            lo,
            hi,
        });
    }
    Ok(denom)
}

/// `N = √(λ(λ+1))`, the norm factor of `Ψ_λ` built from a unit-normalized `u`.
pub fn normalization_constant(lambda: f64) -> Result<f64> {
    let radicand = lambda * (lambda + 1.0);
    if (-1.0..=0.0).contains(&lambda) || !radicand.is_finite() {
        return Err(Error::SingularParameter {
            lambda,
            x: None,
            lo: -1.0,
            hi: 0.0,
        });
    }
    Ok(radicand.sqrt())
}

/// Raw and normalized forms of `Ψ_λ`.
#[derive(Debug, Clone)]
pub struct MielnikMode {
    pub lambda: f64,
    pub origin: IntegralOrigin,
    /// `u / (λ + ∫ˣ u²)`, sign kept.
    pub raw: ZeroMode,
    /// `|raw|` rescaled to unit discrete norm.
    pub normalized: ZeroMode,
    pub normalization: f64,
    pub denominator: GridFunction,
}

fn build_mode(
    u: &ZeroMode,
    lambda: f64,
    origin: IntegralOrigin,
    unit_seed: bool,
) -> Result<MielnikMode> {
    u.require_nodeless()?;
    let denominator = admissible_denominator(u, lambda, origin)?;
    let raw_psi = u.psi().zip_with(&denominator, |v, d| v / d)?;
    let normalization = if unit_seed {
        normalization_constant(lambda)?
    } else {
        // ∫ Ψ² = 1/(λ + I_first) − 1/(λ + I_last) for a general seed and origin.
        let d = denominator.values();
        let (a, b) = (d[0], d[d.len() - 1]);
        (a * b / (b - a)).sqrt()
    };
    let raw = ZeroMode::from_function(raw_psi, u.energy_shift())?;
    // N fixes the norm only up to quadrature error; the seed for the next step
    // is rescaled by the discrete norm so it is exactly unit on the grid.
    let normalized = raw.normalized();
    Ok(MielnikMode {
        lambda,
        origin,
        raw,
        normalized,
        normalization,
        denominator,
    })
}

/// `Ψ_λ = u / (λ + ∫ˣ u²)`.
///
/// The reported `N` is the closed form `√(λ(λ+1))` for a unit-normalized seed
/// with the left origin; otherwise it follows from the end values of the
/// denominator.
pub fn psi_lambda(u: &ZeroMode, lambda: f64, origin: IntegralOrigin) -> Result<MielnikMode> {
    let unit_seed =
        origin == IntegralOrigin::Left && (u.norm() - 1.0).abs() < UNIT_NORM_TOLERANCE;
    build_mode(u, lambda, origin, unit_seed)
}

pub fn deformed_potential(
    v_minus: &GridFunction,
    u: &ZeroMode,
    lambda: f64,
    origin: IntegralOrigin,
) -> Result<GridFunction> {
    v_minus.check_same_grid(u.psi())?;
    u.require_nodeless()?;
    let denom = admissible_denominator(u, lambda, origin)?;
    let du = derivative(u.psi());
    let values = (0..v_minus.len())
        .map(|i| {
            let (v, p, dp, d) = (v_minus.values()[i], u.psi().values()[i], du.values()[i], denom.values()[i]);
            v - 4.0 * p * dp / d + 2.0 * p.powi(4) / (d * d)
        })
        .collect();
    GridFunction::new(*v_minus.grid(), values)
}

/// `ψ″/ψ` on the trusted window of `psi`.
pub fn reconstruct_potential_from_mode(psi: &ZeroMode) -> Result<GridFunction> {
    psi.require_nodeless()?;
    let w = psi.window();
    Ok(second_derivative(psi.psi())
        .zip_with(psi.psi(), |d2, p| d2 / p)?
        .masked_outside(w.start, w.end))
}

#[derive(Debug, Clone)]
pub struct DeformationStep {
    pub lambda: f64,
    pub u_in: ZeroMode,
    /// Normalized `Ψ_λ`, the seed for the next step.
    pub u_out: ZeroMode,
    /// Unnormalized `Ψ_λ`, kept for audit.
    pub raw: ZeroMode,
    pub v_out: GridFunction,
    pub normalization: f64,
    pub valid: bool,
}

#[derive(Debug, Clone)]
pub struct DeformationChain {
    pub base_potential: GridFunction,
    pub base_mode: ZeroMode,
    pub steps: Vec<DeformationStep>,
}

impl DeformationChain {
    pub fn final_potential(&self) -> &GridFunction {
        self.steps.last().map_or(&self.base_potential, |s| &s.v_out)
    }

    pub fn final_mode(&self) -> &ZeroMode {
        self.steps.last().map_or(&self.base_mode, |s| &s.u_out)
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.lambda).collect()
    }
}

/// Repeats the deformation; each step reports `N_i = √(λ_i(λ_i+1))` and hands a
/// unit-norm mode to the next.
///
/// The base mode is taken as already unit-normalized. The first inadmissible
/// parameter aborts the whole chain with its step index.
pub fn chain_deform(v_minus: &GridFunction, u: &ZeroMode, lambdas: &[f64]) -> Result<DeformationChain> {
    let mut steps: Vec<DeformationStep> = Vec::with_capacity(lambdas.len());
    for (i, &lambda) in lambdas.iter().enumerate() {
        let (v_in, u_in) = match steps.last() {
            Some(prev) => (&prev.v_out, &prev.u_out),
            None => (v_minus, u),
        };
        let wrap = |e: Error| Error::ChainStep {
            step: i,
            source: Box::new(e),
        };
        let mode = build_mode(u_in, lambda, IntegralOrigin::Left, true).map_err(wrap)?;
        let v_out = deformed_potential(v_in, u_in, lambda, IntegralOrigin::Left).map_err(wrap)?;
        steps.push(DeformationStep {
            lambda,
            u_in: u_in.clone(),
            u_out: mode.normalized,
            raw: mode.raw,
            v_out,
            normalization: mode.normalization,
            valid: true,
        });
    }
    Ok(DeformationChain {
        base_potential: v_minus.clone(),
        base_mode: u.clone(),
        steps,
    })
}
