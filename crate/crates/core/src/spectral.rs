//! Finite-difference Hamiltonians `−D² + V` with Dirichlet walls, their lowest
//! eigenpairs, and extraction of the nodeless zero mode.

use crate::error::{Error, Result};
use crate::grid::{l2_norm, second_derivative, Grid1D, GridFunction};
use crate::tridiag;

/// Relative residual every returned eigenpair must meet.
pub const SOLVER_TOLERANCE: f64 = 1e-8;
/// Samples below this fraction of the peak are ignored when counting nodes.
pub const NODE_NOISE_FLOOR: f64 = 1e-8;
/// Operations dividing by a mode only use samples above this fraction of its peak.
pub const TRUSTED_WINDOW_EPS: f64 = 1e-6;
/// Tail amplitude (relative) above which the box is reported as truncating the mode.
pub const DOMAIN_TAIL_WARNING: f64 = 1e-8;

/// Symmetric tridiagonal matrix over the interior grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub grid: Grid1D,
}

impl TridiagonalOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }
}

pub fn build_hamiltonian(v: &GridFunction) -> Result<TridiagonalOperator> {
    if let Some(i) = v.values().iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "potential is not finite at x = {}",
            v.grid().x(i)
        )));
    }
    let grid = *v.grid();
    let h2 = grid.spacing() * grid.spacing();
    let n = grid.len();
    let diag = v.values()[1..n - 1].iter().map(|vi| 2.0 / h2 + vi).collect();
    let offdiag = vec![-1.0 / h2; n - 3];
    Ok(TridiagonalOperator {
        diag,
        offdiag,
        grid,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub k: usize,
    pub residual_norms: Vec<f64>,
    pub tolerance: f64,
    pub ground_energy_shift: f64,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub report: SpectrumReport,
    /// Eigenvectors on the full grid (zero at both walls), orthonormal under
    /// the `h`-weighted Euclidean product.
    pub eigenvectors: Vec<GridFunction>,
}

pub fn lowest_eigenpairs(h: &TridiagonalOperator, k: usize) -> Result<Spectrum> {
    let pairs = tridiag::lowest_eigenpairs(&h.diag, &h.offdiag, k, SOLVER_TOLERANCE)?;
    let scale = h.grid.spacing().sqrt();
    let n = h.grid.len();
    let mut eigenvalues = Vec::with_capacity(k);
    let mut residual_norms = Vec::with_capacity(k);
    let mut eigenvectors = Vec::with_capacity(k);
    for p in pairs {
        let mut values = vec![0.0; n];
        for (dst, src) in values[1..n - 1].iter_mut().zip(&p.vector) {
            *dst = src / scale;
        }
        eigenvalues.push(p.value);
        residual_norms.push(p.residual);
        eigenvectors.push(GridFunction::new(h.grid, values)?);
    }
    Ok(Spectrum {
        report: SpectrumReport {
            eigenvalues,
            k,
            residual_norms,
            tolerance: SOLVER_TOLERANCE,
            ground_energy_shift: 0.0,
        },
        eigenvectors,
    })
}

/// `h`-weighted Euclidean inner product (the trapezoid rule for functions
/// vanishing at the walls).
pub fn grid_inner(a: &GridFunction, b: &GridFunction) -> f64 {
    a.grid().spacing() * a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum::<f64>()
}

/// Sign changes between successive samples above `floor · max|ψ|`.
pub fn count_nodes(psi: &GridFunction, floor: f64) -> usize {
    let cutoff = floor * psi.max_abs();
    let mut last_sign = 0.0;
    let mut changes = 0;
    for &v in psi.values() {
        if !v.is_finite() || v.abs() <= cutoff {
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            changes += 1;
        }
        last_sign = s;
    }
    changes
}

/// Inclusive index range where a mode is large enough to divide by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrustedWindow {
    pub start: usize,
    pub end: usize,
}

impl TrustedWindow {
    pub fn of(psi: &GridFunction, eps: f64) -> Option<Self> {
        let cutoff = eps * psi.max_abs();
        let v = psi.values();
        let start = v.iter().position(|x| x.is_finite() && x.abs() >= cutoff && *x != 0.0)?;
        let end = v.iter().rposition(|x| x.is_finite() && x.abs() >= cutoff && *x != 0.0)?;
        Some(Self { start, end })
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= self.start && i <= self.end
    }

    pub fn intersect(&self, other: &TrustedWindow) -> Option<TrustedWindow> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start <= end).then_some(TrustedWindow { start, end })
    }
}

/// A sampled zero-energy solution used as the factorization seed `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroMode {
    psi: GridFunction,
    norm: f64,
    nodes: usize,
    energy_shift: f64,
    window: TrustedWindow,
}

impl ZeroMode {
    /// Wraps samples as they are: no normalization, no sign flip.
    pub fn from_function(psi: GridFunction, energy_shift: f64) -> Result<Self> {
        if psi.has_mask() {
            return Err(Error::InvalidInput("zero mode samples must be finite".into()));
        }
        let window = TrustedWindow::of(&psi, TRUSTED_WINDOW_EPS)
            .ok_or_else(|| Error::InvalidInput("zero mode vanishes identically".into()))?;
        Ok(Self {
            norm: l2_norm(&psi),
            nodes: count_nodes(&psi, NODE_NOISE_FLOOR),
            psi,
            energy_shift,
            window,
        })
    }

    /// Copy rescaled to unit `L²` norm and positive sign.
    pub fn normalized(&self) -> Self {
        let peak_sign = self
            .psi
            .values()
            .iter()
            .copied()
            .fold(0.0_f64, |a, v| if v.abs() > a.abs() { v } else { a })
            .signum();
        let c = peak_sign / self.norm;
        let psi = self.psi.scale(c);
        Self {
            norm: l2_norm(&psi),
            psi,
            nodes: self.nodes,
            energy_shift: self.energy_shift,
            window: self.window,
        }
    }

    pub fn psi(&self) -> &GridFunction {
        &self.psi
    }

    pub fn grid(&self) -> &Grid1D {
        self.psi.grid()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_nodeless(&self) -> bool {
        self.nodes == 0
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn energy_shift(&self) -> f64 {
        self.energy_shift
    }

    pub fn window(&self) -> TrustedWindow {
        self.window
    }

    pub fn require_nodeless(&self) -> Result<()> {
        if self.is_nodeless() {
            Ok(())
        } else {
            Err(Error::BrokenSusy {
                sign_changes: self.nodes,
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub mode: ZeroMode,
    /// `V − E₀`, so that `H₋ u = 0`.
    pub v_minus: GridFunction,
    pub warnings: Vec<String>,
}

pub fn ground_state(v: &GridFunction) -> Result<GroundState> {
    let h = build_hamiltonian(v)?;
    let k = 2.min(h.dim());
    let spec = lowest_eigenpairs(&h, k)?;
    let e0 = spec.report.eigenvalues[0];
    if k > 1 && spec.report.eigenvalues[1] - e0 <= SOLVER_TOLERANCE * e0.abs().max(1.0) {
        return Err(Error::InvalidInput(
            "lowest eigenvalue is not isolated".into(),
        ));
    }
    let raw = ZeroMode::from_function(spec.eigenvectors[0].clone(), e0)?;
    raw.require_nodeless()?;
    let mode = raw.normalized();

    let mut warnings = Vec::new();
    let u = mode.psi().values();
    let n = u.len();
    let peak = mode.psi().max_abs();
    if u[1].abs() > DOMAIN_TAIL_WARNING * peak || u[n - 2].abs() > DOMAIN_TAIL_WARNING * peak {
        warnings.push(format!(
            "ground state tail reaches the box edge (|u| = {:.3e}, {:.3e} of peak at the walls); the box truncates the mode",
            u[1].abs() / peak,
            u[n - 2].abs() / peak
        ));
    }
    Ok(GroundState {
        mode,
        v_minus: v.map(|x| x - e0),
        warnings,
    })
}

/// `(−D² + V) f`, masked where `f` or `V` is.
pub fn apply_hamiltonian(v: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
    let d2 = second_derivative(f);
    v.mul(f)?.sub(&d2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsospectralComparison {
    pub eigenvalues_a: Vec<f64>,
    pub eigenvalues_b: Vec<f64>,
    pub differences: Vec<f64>,
    pub max_abs_difference: f64,
    pub skip_ground_of_a: bool,
}

/// Compares the lowest `k` levels of two potentials; with `skip_ground_of_a`
/// level `n + 1` of `a` is paired with level `n` of `b`.
pub fn verify_isospectral(
    v_a: &GridFunction,
    v_b: &GridFunction,
    k: usize,
    skip_ground_of_a: bool,
) -> Result<IsospectralComparison> {
    v_a.check_same_grid(v_b)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let offset = usize::from(skip_ground_of_a);
    let ea = lowest_eigenpairs(&build_hamiltonian(v_a)?, k + offset)?.report.eigenvalues;
    let eb = lowest_eigenpairs(&build_hamiltonian(v_b)?, k)?.report.eigenvalues;
    let differences: Vec<f64> = (0..k).map(|j| eb[j] - ea[j + offset]).collect();
    let max_abs_difference = differences.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    Ok(IsospectralComparison {
        eigenvalues_a: ea,
        eigenvalues_b: eb,
        differences,
        max_abs_difference,
        skip_ground_of_a,
    })
}
