//! The four workflows. Each returns a report; any failing check in it maps to
//! exit code 1.

use isospec_core::grid::{integrate, second_derivative, GridFunction, IntegralOrigin};
use isospec_core::isospectral::{
    chain_deform, deformed_potential, excluded_interval, psi_lambda, MielnikMode,
};
use isospec_core::riccati::{riccati_general_solution, riccati_residual, RiccatiInstance};
use isospec_core::spectral::{
    apply_hamiltonian, build_hamiltonian, ground_state, lowest_eigenpairs, verify_isospectral,
    GroundState, IsospectralComparison, ZeroMode,
};
use isospec_core::susy::{
    apply_a, apply_a_dagger, apply_t1, apply_t_minus_lambda, apply_t_plus_lambda,
    fermionic_zero_mode, general_zero_mode_minus, partner_potential, superpotential_from_mode,
    PartnerPair, Superpotential,
};
use serde_json::{json, Value};

use crate::config::Prepared;
use crate::error::{CliError, Result};
use crate::metrics::{norm_ratio, relative_l2, sup_distance};
use crate::report::{column, x_column, Check, Report};

pub const DEFAULT_LAMBDA: f64 = 1.5;

pub const ISOSPECTRAL_TOLERANCE: f64 = 5e-3;
pub const CHAIN_ISOSPECTRAL_TOLERANCE: f64 = 8e-3;
pub const LADDER_TOLERANCE: f64 = 5e-3;
pub const ANNIHILATION_TOLERANCE: f64 = 1e-6;
pub const FACTORIZATION_TOLERANCE: f64 = 1e-3;
pub const PARTNER_GAP_TOLERANCE: f64 = 1e-8;
pub const INTERTWINING_TOLERANCE: f64 = 1e-3;
pub const MAPPING_TOLERANCE: f64 = 1e-6;
pub const RICCATI_TOLERANCE: f64 = 1e-4;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-4;
pub const UNIT_NORM_TOLERANCE: f64 = 1e-6;
pub const ZERO_MODE_TOLERANCE: f64 = 1e-3;
pub const REFACTORIZATION_TOLERANCE: f64 = 2e-3;
/// Sup-norm distance below which a deformation counts as the original potential.
pub const RECOVERY_TOLERANCE: f64 = 1e-4;

/// What `--format csv` writes for a command.
#[derive(Debug, Clone)]
pub enum PrimaryTable {
    Potential(GridFunction),
    Checks(Vec<Check>),
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub table: PrimaryTable,
}

/// Ground state, superpotential and partner, shared by every command.
struct Susy {
    ground: GroundState,
    superpotential: Superpotential,
    pair: PartnerPair,
    v_plus: GridFunction,
}

fn susy(v: &GridFunction) -> Result<Susy> {
    let ground = ground_state(v)?;
    let superpotential = superpotential_from_mode(&ground.mode)?;
    let pair = partner_potential(&superpotential)?;
    let v_plus = pair.v_plus_extended(&ground.v_minus)?;
    Ok(Susy {
        ground,
        superpotential,
        pair,
        v_plus,
    })
}

fn levels(k: usize) -> Value {
    json!((0..k).collect::<Vec<_>>())
}

fn eigenvalues(v: &GridFunction, k: usize) -> Result<Vec<f64>> {
    Ok(lowest_eigenpairs(&build_hamiltonian(v)?, k)?.report.eigenvalues)
}

fn comparison_columns(report: &mut Report, name: &str, cmp: &IsospectralComparison) {
    report.spectra.insert("level".into(), levels(cmp.differences.len()));
    report.spectra.insert("v_minus".into(), json!(cmp.eigenvalues_a));
    report.spectra.insert(name.into(), json!(cmp.eigenvalues_b));
    report.spectra.insert("difference".into(), json!(cmp.differences));
    report
        .spectra
        .insert("max_spectral_deviation".into(), json!(cmp.max_abs_difference));
}

fn ground_facts(report: &mut Report, s: &Susy) {
    report
        .spectra
        .insert("ground_energy_shift".into(), json!(s.ground.mode.energy_shift()));
    report.warnings.extend(s.ground.warnings.iter().cloned());
}

fn ladder(s: &Susy, k: usize) -> Result<IsospectralComparison> {
    Ok(verify_isospectral(&s.ground.v_minus, &s.v_plus, k, true)?)
}

fn annihilation(s: &Susy) -> Result<f64> {
    let u = s.ground.mode.psi();
    Ok(norm_ratio(&apply_a(&s.superpotential, u)?, u))
}

fn partner_gap(s: &Susy) -> Result<f64> {
    let gap = s
        .pair
        .v_plus
        .sub(&s.pair.v_minus)?
        .sub(&s.superpotential.w_double_prime().scale(2.0))?;
    Ok(gap.max_abs() / s.pair.v_plus.max_abs().max(1.0))
}

pub fn solve(p: &Prepared, report: &mut Report) -> Result<PrimaryTable> {
    let k = p.config.k;
    let s = susy(&p.potential)?;
    let minus = eigenvalues(&s.ground.v_minus, k)?;
    let plus = eigenvalues(&s.v_plus, k)?;
    let lad = ladder(&s, k)?;

    ground_facts(report, &s);
    report.spectra.insert("level".into(), levels(k));
    report.spectra.insert("v_minus".into(), json!(minus));
    report.spectra.insert("v_plus".into(), json!(plus));
    report.spectra.insert("ladder_difference".into(), json!(lad.differences));

    let v = &p.potential;
    report.potentials.insert("x".into(), x_column(v));
    report.potentials.insert("v_input".into(), column(v));
    report.potentials.insert("v_minus".into(), column(&s.ground.v_minus));
    report.potentials.insert("v_plus".into(), column(&s.pair.v_plus));
    report.modes.insert("x".into(), x_column(v));
    report.modes.insert("u".into(), column(s.ground.mode.psi()));
    report.modes.insert("w_prime".into(), column(&s.superpotential.w_prime));

    report.checks = vec![
        Check::new("annihilation", annihilation(&s)?, ANNIHILATION_TOLERANCE),
        Check::new("partner_gap", partner_gap(&s)?, PARTNER_GAP_TOLERANCE),
        Check::new("partner_ladder", lad.max_abs_difference, LADDER_TOLERANCE),
    ];
    Ok(PrimaryTable::Potential(s.ground.v_minus))
}

fn single_lambda(p: &Prepared, default: Option<f64>) -> Result<f64> {
    match (p.config.lambdas.as_slice(), default) {
        ([l], _) => Ok(*l),
        ([], Some(d)) => Ok(d),
        (ls, _) => Err(CliError::Usage(format!(
            "{} needs exactly one lambda, got {}",
            p.config.command,
            ls.len()
        ))),
    }
}

fn family_facts(report: &mut Report, u: &ZeroMode, lambda: f64, origin: IntegralOrigin, mode: &MielnikMode) {
    let (lo, hi) = excluded_interval(u, origin);
    report.facts.insert("lambda".into(), json!(lambda));
    report.facts.insert("excluded_interval".into(), json!([lo, hi]));
    report.facts.insert("normalization".into(), json!(mode.normalization));
}

/// `∫ raw Ψ_λ²`, which should equal `1/N²`.
fn raw_norm_squared(mode: &MielnikMode) -> f64 {
    integrate(&mode.raw.psi().map(|v| v * v))
}

fn normalization_check(mode: &MielnikMode) -> Check {
    let area = raw_norm_squared(mode);
    Check::new(
        "normalization_identity",
        (area * mode.normalization.powi(2) - 1.0).abs(),
        NORMALIZATION_TOLERANCE,
    )
}

fn zero_mode_residual(v_lambda: &GridFunction, mode: &MielnikMode) -> Result<f64> {
    let psi = mode.raw.psi();
    let r = apply_hamiltonian(v_lambda, psi)?;
    Ok(norm_ratio(&r, &v_lambda.mul(psi)?))
}

pub fn deform(p: &Prepared, report: &mut Report) -> Result<PrimaryTable> {
    let lambda = single_lambda(p, None)?;
    let origin: IntegralOrigin = p.config.integral_origin.into();
    let s = susy(&p.potential)?;
    let u = &s.ground.mode;
    let mode = psi_lambda(u, lambda, origin)?;
    let v_lambda = deformed_potential(&s.ground.v_minus, u, lambda, origin)?;
    let cmp = verify_isospectral(&s.ground.v_minus, &v_lambda, p.config.k, false)?;
    let window = u.window();
    let recovery = sup_distance(&v_lambda, &s.ground.v_minus, |i| window.contains(i));

    ground_facts(report, &s);
    comparison_columns(report, "v_lambda", &cmp);
    let v = &p.potential;
    report.potentials.insert("x".into(), x_column(v));
    report.potentials.insert("v_minus".into(), column(&s.ground.v_minus));
    report.potentials.insert("v_lambda".into(), column(&v_lambda));
    report.modes.insert("x".into(), x_column(v));
    report.modes.insert("u".into(), column(u.psi()));
    report.modes.insert("psi_lambda".into(), column(mode.normalized.psi()));
    report.modes.insert("psi_lambda_raw".into(), column(mode.raw.psi()));

    family_facts(report, u, lambda, origin, &mode);
    report.facts.insert("raw_norm_squared".into(), json!(raw_norm_squared(&mode)));
    report.facts.insert("recovery_sup_norm".into(), json!(recovery));
    report
        .facts
        .insert("recovered_original".into(), json!(recovery < RECOVERY_TOLERANCE));

    report.checks = vec![
        Check::new("strict_isospectrality", cmp.max_abs_difference, ISOSPECTRAL_TOLERANCE),
        normalization_check(&mode),
        Check::new("zero_mode_residual", zero_mode_residual(&v_lambda, &mode)?, ZERO_MODE_TOLERANCE),
    ];
    Ok(PrimaryTable::Potential(v_lambda))
}

pub fn chain(p: &Prepared, report: &mut Report) -> Result<PrimaryTable> {
    let lambdas = &p.config.lambdas;
    if lambdas.is_empty() {
        return Err(CliError::Usage("chain needs at least one lambda (--lambdas L1,L2,...)".into()));
    }
    if p.config.integral_origin != crate::args::OriginArg::Left {
        return Err(CliError::Usage("chain integrates from the left edge; --integral-origin mid is not supported".into()));
    }
    let s = susy(&p.potential)?;
    let chain = chain_deform(&s.ground.v_minus, &s.ground.mode, lambdas)?;
    let last = chain.final_potential().clone();
    let cmp = verify_isospectral(&s.ground.v_minus, &last, p.config.k, false)?;

    ground_facts(report, &s);
    comparison_columns(report, "v_final", &cmp);
    let v = &p.potential;
    report.potentials.insert("x".into(), x_column(v));
    report.potentials.insert("v_minus".into(), column(&s.ground.v_minus));
    report.modes.insert("x".into(), x_column(v));
    report.modes.insert("u".into(), column(s.ground.mode.psi()));

    let mut checks = vec![Check::new(
        "strict_isospectrality",
        cmp.max_abs_difference,
        CHAIN_ISOSPECTRAL_TOLERANCE,
    )];
    for (i, step) in chain.steps.iter().enumerate() {
        report.potentials.insert(format!("v_step_{i}"), column(&step.v_out));
        report.modes.insert(format!("psi_step_{i}"), column(step.u_out.psi()));
        let area = integrate(&step.raw.psi().map(|v| v * v));
        checks.push(Check::new(
            format!("normalization_identity_step_{i}"),
            (area * step.normalization.powi(2) - 1.0).abs(),
            NORMALIZATION_TOLERANCE,
        ));
        checks.push(Check::new(
            format!("unit_norm_step_{i}"),
            (step.u_out.norm() - 1.0).abs(),
            UNIT_NORM_TOLERANCE,
        ));
    }
    report.facts.insert("lambdas".into(), json!(chain.lambdas()));
    report.facts.insert(
        "normalizations".into(),
        json!(chain.steps.iter().map(|s| s.normalization).collect::<Vec<_>>()),
    );
    report.checks = checks;
    Ok(PrimaryTable::Potential(last))
}

/// Gaussian centred in the trusted window of `u`, width one twelfth of it.
fn test_function(u: &ZeroMode) -> GridFunction {
    let g = *u.grid();
    let w = u.window();
    let (a, b) = (g.x(w.start), g.x(w.end));
    let (c, sigma) = ((a + b) / 2.0, (b - a) / 12.0);
    GridFunction::from_fn(g, |x| (-((x - c) / sigma).powi(2) / 2.0).exp())
}

fn refactorization_spread(u: &ZeroMode, origin: IntegralOrigin) -> Result<f64> {
    let mut rebuilt = Vec::new();
    for ls in [-2.0, 0.3, 7.0] {
        let phi = general_zero_mode_minus(u, ls, origin)?;
        let floor = 1e-6 * phi.max_abs();
        rebuilt.push(
            second_derivative(&phi)
                .zip_with(&phi, |d2, v| if v.abs() >= floor { d2 / v } else { f64::NAN })?,
        );
    }
    let mut worst = 0.0_f64;
    for i in 0..rebuilt.len() {
        for j in i + 1..rebuilt.len() {
            worst = worst.max(sup_distance(&rebuilt[i], &rebuilt[j], |_| true));
        }
    }
    Ok(worst)
}

pub fn verify(p: &Prepared, report: &mut Report) -> Result<PrimaryTable> {
    let lambda = single_lambda(p, Some(DEFAULT_LAMBDA))?;
    let origin: IntegralOrigin = p.config.integral_origin.into();
    let k = p.config.k;
    let s = susy(&p.potential)?;
    let u = &s.ground.mode;
    let sp = &s.superpotential;
    let lad = ladder(&s, k)?;

    let f = test_function(u);
    let factorization = {
        let lhs = apply_a_dagger(sp, &apply_a(sp, &f)?)?;
        let rhs = apply_hamiltonian(&s.pair.v_minus, &f)?;
        norm_ratio(&lhs.sub(&rhs)?, &f)
    };
    let intertwining = {
        let t1f = apply_t1(u, &f)?;
        let lhs = apply_hamiltonian(&s.pair.v_plus, &t1f)?;
        let rhs = apply_t1(u, &apply_hamiltonian(&s.pair.v_minus, &f)?)?;
        norm_ratio(&lhs.sub(&rhs)?, &t1f)
    };

    let mode = psi_lambda(u, lambda, origin)?;
    let phi_plus = fermionic_zero_mode(u, lambda, origin)?;
    let t_minus = relative_l2(&apply_t_minus_lambda(&mode.raw, &phi_plus)?, mode.raw.psi());
    let t_plus = relative_l2(&apply_t_plus_lambda(&mode.raw, mode.raw.psi())?, &phi_plus);
    let v_lambda = deformed_potential(&s.ground.v_minus, u, lambda, origin)?;
    let cmp = verify_isospectral(&s.ground.v_minus, &v_lambda, k, false)?;

    let riccati = RiccatiInstance::from_zero_mode(u, lambda)?;
    let y1 = riccati_general_solution(&riccati)?;

    ground_facts(report, &s);
    comparison_columns(report, "v_lambda", &cmp);
    report.spectra.insert("ladder_difference".into(), json!(lad.differences));
    let v = &p.potential;
    report.potentials.insert("x".into(), x_column(v));
    report.potentials.insert("v_minus".into(), column(&s.ground.v_minus));
    report.potentials.insert("v_plus".into(), column(&s.pair.v_plus));
    report.potentials.insert("v_lambda".into(), column(&v_lambda));
    report.modes.insert("x".into(), x_column(v));
    report.modes.insert("u".into(), column(u.psi()));
    report.modes.insert("psi_lambda".into(), column(mode.normalized.psi()));

    family_facts(report, u, lambda, origin, &mode);
    let area = raw_norm_squared(&mode);
    report.facts.insert("raw_norm_squared".into(), json!(area));
    report
        .facts
        .insert("raw_norm_squared_expected".into(), json!(1.0 / mode.normalization.powi(2)));

    report.checks = vec![
        Check::new("annihilation", annihilation(&s)?, ANNIHILATION_TOLERANCE),
        Check::new("factorization", factorization, FACTORIZATION_TOLERANCE),
        Check::new("partner_gap", partner_gap(&s)?, PARTNER_GAP_TOLERANCE),
        Check::new("partner_ladder", lad.max_abs_difference, LADDER_TOLERANCE),
        Check::new("t1_intertwining", intertwining, INTERTWINING_TOLERANCE),
        Check::new("t_minus_mapping", t_minus, MAPPING_TOLERANCE),
        Check::new("t_plus_mapping", t_plus, MAPPING_TOLERANCE),
        Check::new("riccati_residual", riccati_residual(&y1, &riccati.f_rhs), RICCATI_TOLERANCE),
        normalization_check(&mode),
        Check::new("zero_mode_residual", zero_mode_residual(&v_lambda, &mode)?, ZERO_MODE_TOLERANCE),
        Check::new("strict_isospectrality", cmp.max_abs_difference, ISOSPECTRAL_TOLERANCE),
        Check::new("refactorization", refactorization_spread(u, origin)?, REFACTORIZATION_TOLERANCE),
    ];
    Ok(PrimaryTable::Checks(report.checks.clone()))
}

/// Formats an interval endpoint compactly, so `−0.9999999999999996` reads `-1`.
pub fn compact(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn interval_text(lo: f64, hi: f64) -> String {
    format!("[{}, {}]", compact(lo), compact(hi))
}

