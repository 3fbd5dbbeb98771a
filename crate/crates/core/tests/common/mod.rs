#![allow(dead_code)]

use isospec_core::catalog::CatalogPotential;
use isospec_core::grid::{Grid1D, GridFunction};
use isospec_core::spectral::{ground_state, GroundState, ZeroMode};

/// Analytic oscillator ground state `π^{-1/4} e^{−x²/2}` on `[−10, 10]`.
pub fn gaussian_mode(n: usize) -> ZeroMode {
    let g = Grid1D::new(-10.0, 10.0, n).unwrap();
    let c = std::f64::consts::PI.powf(-0.25);
    ZeroMode::from_function(GridFunction::from_fn(g, |x| c * (-x * x / 2.0).exp()), 0.0).unwrap()
}

/// `e^{−x²/2}` without normalization.
pub fn bare_gaussian_mode(n: usize) -> ZeroMode {
    let g = Grid1D::new(-10.0, 10.0, n).unwrap();
    ZeroMode::from_function(GridFunction::from_fn(g, |x| (-x * x / 2.0).exp()), 0.0).unwrap()
}

/// `x² − 1` on the grid of `u`.
pub fn oscillator_v_minus(u: &ZeroMode) -> GridFunction {
    GridFunction::from_fn(*u.grid(), |x| x * x - 1.0)
}

pub fn catalog_ground(name: &str) -> (CatalogPotential, GroundState) {
    let p = CatalogPotential::from_name(name, None, None).unwrap();
    let v = p.sample(p.default_grid());
    (p, ground_state(&v).unwrap())
}

/// Largest `|a − b|` over samples where both are finite.
pub fn max_dev(a: &GridFunction, b: &GridFunction) -> f64 {
    max_dev_where(a, b, |_, _| true)
}

pub fn max_dev_where(a: &GridFunction, b: &GridFunction, keep: impl Fn(usize, f64) -> bool) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .enumerate()
        .filter(|&(i, (x, y))| x.is_finite() && y.is_finite() && keep(i, a.grid().x(i)))
        .fold(0.0, |m, (_, (x, y))| m.max((x - y).abs()))
}

/// `‖a − b‖ / ‖b‖` in the discrete l2 sense, over samples where both are finite.
pub fn rel_l2(a: &GridFunction, b: &GridFunction) -> f64 {
    let (num, den) = a
        .values()
        .iter()
        .zip(b.values())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .fold((0.0, 0.0), |(n, d), (x, y)| (n + (x - y).powi(2), d + y * y));
    (num / den).sqrt()
}

/// `‖a‖ / ‖b‖` over samples where both are finite.
pub fn norm_ratio(a: &GridFunction, b: &GridFunction) -> f64 {
    let (num, den) = a
        .values()
        .iter()
        .zip(b.values())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .fold((0.0, 0.0), |(n, d), (x, y)| (n + x * x, d + y * y));
    (num / den).sqrt()
}

/// Largest `|a/b − 1|` over finite samples.
pub fn max_rel_dev(a: &GridFunction, b: &GridFunction) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .fold(0.0, |m, (x, y)| m.max((x / y - 1.0).abs()))
}

/// Sup-norm relative error `max|a − b| / max|b|`.
pub fn sup_rel(a: &GridFunction, b: &GridFunction) -> f64 {
    let scale = b
        .values()
        .iter()
        .zip(a.values())
        .filter(|(y, x)| x.is_finite() && y.is_finite())
        .fold(0.0_f64, |m, (y, _)| m.max(y.abs()));
    max_dev(a, b) / scale
}
