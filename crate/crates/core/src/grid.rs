//! Uniform 1-D grids and the sampled functions that live on them.
//!
//! Masking convention: a sample that is not finite (NaN) is *masked*. Masked
//! samples come from operations that divide by a vanishing zero mode; they
//! propagate through the derivative stencils and are skipped by quadrature
//! and norms.

use crate::error::{Error, Result};

/// Lower limit used for every running integral `∫^x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegralOrigin {
    /// Start at the first finite sample (the left edge for unmasked data).
    #[default]
    Left,
    /// Shift so the primitive vanishes at the grid midpoint.
    Mid,
}

impl std::str::FromStr for IntegralOrigin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(IntegralOrigin::Left),
            "mid" => Ok(IntegralOrigin::Mid),
            other => Err(Error::InvalidArgument(format!(
                "unknown integral origin `{other}` (expected left|mid)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
    h: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidArgument("grid bounds must be finite".into()));
        }
        if x_min >= x_max {
            return Err(Error::InvalidArgument(format!(
                "grid needs x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 3 points, got {n}"
            )));
        }
        let h = (x_max - x_min) / (n - 1) as f64;
        Ok(Self { x_min, x_max, n, h })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Coordinate of point `i`, computed directly from the index. The last
    /// point is `x_max` itself so that written grids read back identically.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.h
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Simpson quadrature requires an even number of intervals.
    pub fn supports_simpson(&self) -> bool {
        self.n % 2 == 1
    }
}

/// `make_grid` under its operational name.
pub fn make_grid(x_min: f64, x_max: f64, n: usize) -> Result<Grid1D> {
    Grid1D::new(x_min, x_max, n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid1D,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.x(i))).collect();
        Self { grid, values }
    }

    pub fn constant(grid: Grid1D, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_masked(&self, i: usize) -> bool {
        !self.values[i].is_finite()
    }

    pub fn has_mask(&self) -> bool {
        self.values.iter().any(|v| !v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination; fails when the two functions live on different grids.
    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Masks every sample whose index lies outside `start..=end`.
    pub fn masked_outside(&self, start: usize, end: usize) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| if i < start || i > end { f64::NAN } else { v })
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    /// First and last unmasked index.
    pub fn finite_range(&self) -> Option<(usize, usize)> {
        let first = self.values.iter().position(|v| v.is_finite())?;
        let last = self.values.iter().rposition(|v| v.is_finite())?;
        Some((first, last))
    }

    /// Largest magnitude among unmasked samples (0 when everything is masked).
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// First derivative: central differences inside, second-order one-sided stencils at the ends.
pub fn derivative(f: &GridFunction) -> GridFunction {
    let v = &f.values;
    let n = v.len();
    let h = f.grid.h;
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    GridFunction {
        grid: f.grid,
        values: out,
    }
}

/// Second derivative: three-point central stencil inside, one-sided at the ends
/// (four-point second-order when n ≥ 4).
pub fn second_derivative(f: &GridFunction) -> GridFunction {
    let v = &f.values;
    let n = v.len();
    let h2 = f.grid.h * f.grid.h;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
    }
    if n >= 4 {
        out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
        out[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
    } else {
        out[0] = out[1];
        out[n - 1] = out[n - 2];
    }
    GridFunction {
        grid: f.grid,
        values: out,
    }
}

/// Running trapezoid integral with the lower limit at `x_min`.
pub fn cumulative_integral(f: &GridFunction) -> GridFunction {
    cumulative_integral_from(f, IntegralOrigin::Left)
}

/// Running trapezoid integral.
///
/// With [`IntegralOrigin::Left`] the sum starts at the first unmasked sample
/// and stops at the next masked one. With [`IntegralOrigin::Mid`] it runs
/// outward in both directions from the midpoint (linear interpolation between
/// the two central samples for an even point count), so the result vanishes
/// there without subtracting two large partial sums. Samples the sweep cannot
/// reach stay masked.
pub fn cumulative_integral_from(f: &GridFunction, origin: IntegralOrigin) -> GridFunction {
    let n = f.len();
    let h = f.grid.h;
    let v = &f.values;
    let mut out = vec![f64::NAN; n];
    let sweep_right = |out: &mut [f64], start: usize| {
        let mut acc = out[start];
        for i in start + 1..n {
            if !v[i].is_finite() {
                break;
            }
            acc += 0.5 * h * (v[i - 1] + v[i]);
            out[i] = acc;
        }
    };
    let sweep_left = |out: &mut [f64], start: usize| {
        let mut acc = out[start];
        for i in (0..start).rev() {
            if !v[i].is_finite() {
                break;
            }
            acc -= 0.5 * h * (v[i] + v[i + 1]);
            out[i] = acc;
        }
    };
    match origin {
        IntegralOrigin::Left => {
            if let Some(start) = v.iter().position(|x| x.is_finite()) {
                out[start] = 0.0;
                sweep_right(&mut out, start);
            }
        }
        IntegralOrigin::Mid => {
            let c = n / 2;
            if n % 2 == 1 {
                if v[c].is_finite() {
                    out[c] = 0.0;
                    sweep_right(&mut out, c);
                    sweep_left(&mut out, c);
                }
            } else if v[c - 1].is_finite() && v[c].is_finite() {
                // Trapezoid on the half cell from the midpoint to each neighbour.
                let mid = 0.5 * (v[c - 1] + v[c]);
                out[c] = 0.25 * h * (mid + v[c]);
                out[c - 1] = -0.25 * h * (mid + v[c - 1]);
                sweep_right(&mut out, c);
                sweep_left(&mut out, c - 1);
            }
        }
    }
    GridFunction {
        grid: f.grid,
        values: out,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    Simpson,
    /// Fallback used when the grid has an odd number of intervals.
    Trapezoid,
}

/// Whole-domain quadrature, reporting which rule was applied. Masked samples count as zero.
pub fn integrate_with_rule(f: &GridFunction) -> (f64, QuadratureRule) {
    let h = f.grid.h;
    let n = f.len();
    let val = |i: usize| {
        let v = f.values[i];
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    if f.grid.supports_simpson() {
        let mut odd = 0.0;
        let mut even = 0.0;
        for i in 1..n - 1 {
            if i % 2 == 1 {
                odd += val(i);
            } else {
                even += val(i);
            }
        }
        let s = val(0) + val(n - 1) + 4.0 * odd + 2.0 * even;
        (s * h / 3.0, QuadratureRule::Simpson)
    } else {
        let inner: f64 = (1..n - 1).map(val).sum();
        (
            h * (0.5 * (val(0) + val(n - 1)) + inner),
            QuadratureRule::Trapezoid,
        )
    }
}

pub fn integrate(f: &GridFunction) -> f64 {
    integrate_with_rule(f).0
}

pub fn l2_norm(f: &GridFunction) -> f64 {
    integrate(&f.map(|v| v * v)).sqrt()
}
