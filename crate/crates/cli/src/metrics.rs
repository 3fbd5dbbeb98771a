//! Norms over the samples where every operand is unmasked.

use isospec_core::grid::GridFunction;

fn finite_pairs<'a>(a: &'a GridFunction, b: &'a GridFunction) -> impl Iterator<Item = (f64, f64)> + 'a {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| (x, y))
        .filter(|(x, y)| x.is_finite() && y.is_finite())
}

/// `‖a‖ / ‖b‖`.
pub fn norm_ratio(a: &GridFunction, b: &GridFunction) -> f64 {
    let (n, d) = finite_pairs(a, b).fold((0.0, 0.0), |(n, d), (x, y)| (n + x * x, d + y * y));
    (n / d).sqrt()
}

/// `‖a − b‖ / ‖b‖`.
pub fn relative_l2(a: &GridFunction, b: &GridFunction) -> f64 {
    let (n, d) = finite_pairs(a, b).fold((0.0, 0.0), |(n, d), (x, y)| (n + (x - y).powi(2), d + y * y));
    (n / d).sqrt()
}

/// `max |a − b|` over indices accepted by `keep`.
pub fn sup_distance(a: &GridFunction, b: &GridFunction, keep: impl Fn(usize) -> bool) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .enumerate()
        .filter(|&(i, (x, y))| x.is_finite() && y.is_finite() && keep(i))
        .fold(0.0, |m, (_, (x, y))| m.max((x - y).abs()))
}
