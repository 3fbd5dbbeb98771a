//! Built-in potentials and their default grids (units `ħ = 2m = 1`).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, GridFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogPotential {
    /// `V = ω² x²`.
    Harmonic { omega: f64 },
    /// `V = 0` between Dirichlet walls at the grid edges.
    Box,
    /// `V = −a(a+1) sech² x`.
    PoschlTeller { a: f64 },
}

impl CatalogPotential {
    pub const NAMES: [&'static str; 3] = ["harmonic", "box", "poschl_teller"];

    /// Looks up a catalog entry; `omega` and `a` fall back to 1.
    pub fn from_name(name: &str, omega: Option<f64>, a: Option<f64>) -> Result<Self> {
        match name {
            "harmonic" => Ok(Self::Harmonic { omega: omega.unwrap_or(1.0) }),
            "box" => Ok(Self::Box),
            "poschl_teller" => Ok(Self::PoschlTeller { a: a.unwrap_or(1.0) }),
            other => Err(Error::InvalidArgument(format!(
                "unknown catalog potential `{other}` (expected one of {})",
                Self::NAMES.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Harmonic { .. } => "harmonic",
            Self::Box => "box",
            Self::PoschlTeller { .. } => "poschl_teller",
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::Harmonic { omega } => omega * omega * x * x,
            Self::Box => 0.0,
            Self::PoschlTeller { a } => -a * (a + 1.0) / x.cosh().powi(2),
        }
    }

    /// `[−10, 10]` with 2001 points, or `[0, π]` with 629 points for the box.
    pub fn default_grid(&self) -> Grid1D {
        let grid = match self {
            Self::Box => Grid1D::new(0.0, PI, 629),
            _ => Grid1D::new(-10.0, 10.0, 2001),
        };
        grid.expect("default grids are valid")
    }

    pub fn sample(&self, grid: Grid1D) -> GridFunction {
        GridFunction::from_fn(grid, |x| self.eval(x))
    }
}
