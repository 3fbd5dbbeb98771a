//! Acceptance gate: one line per criterion, non-zero exit if any fails.

mod common;

use common::*;
use isospec_core::grid::{
    derivative, integrate, l2_norm, second_derivative, Grid1D, GridFunction, IntegralOrigin,
};
use isospec_core::isospectral::*;
use isospec_core::riccati::{riccati_general_solution, riccati_residual, RiccatiInstance};
use isospec_core::spectral::{apply_hamiltonian, ground_state, verify_isospectral, GroundState, ZeroMode};
use isospec_core::susy::*;
use isospec_core::catalog::CatalogPotential;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn window_pred(u: &ZeroMode) -> impl Fn(usize, f64) -> bool {
    let w = u.window();
    move |i, _| w.contains(i)
}

fn strict_isospectrality() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0_f64, "", 0.0);
    for name in ["harmonic", "poschl_teller"] {
        let (_, gs) = catalog_ground(name);
        for lambda in [-3.0, 0.7, 1.5, 12.0] {
            let v = deformed_potential(&gs.v_minus, &gs.mode, lambda, IntegralOrigin::Left).unwrap();
            let d = verify_isospectral(&gs.v_minus, &v, 6, false).unwrap().max_abs_difference;
            if d >= worst.0 {
                worst = (d, name, lambda);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        worst.0 < 5e-3 && secs < 30.0,
        format!("max |ΔE| = {:.2e} ({} λ = {}), {secs:.1} s", worst.0, worst.1, worst.2),
    )
}

fn partner_ladder() -> Outcome {
    let (_, gs) = catalog_ground("harmonic");
    let pair = partner_potential(&superpotential_from_mode(&gs.mode).unwrap()).unwrap();
    let v_plus = pair.v_plus_extended(&gs.v_minus).unwrap();
    let cmp = verify_isospectral(&gs.v_minus, &v_plus, 5, true).unwrap();
    Outcome::new(
        cmp.max_abs_difference < 5e-3,
        format!("max |E_n(V₊) − E_n+1(V₋)| = {:.2e}", cmp.max_abs_difference),
    )
}

fn excluded_interval_constants() -> Outcome {
    let (_, gs) = catalog_ground("harmonic");
    let (lo, hi) = excluded_interval(&gs.mode, IntegralOrigin::Left);
    let unit_err = (lo + 1.0).abs().max(hi.abs());
    let (glo, ghi) = excluded_interval(&bare_gaussian_mode(2001), IntegralOrigin::Mid);
    let half = std::f64::consts::PI.sqrt() / 2.0;
    let gauss_err = (glo + half).abs().max((ghi - half).abs());
    Outcome::new(
        unit_err < 2e-3 && gauss_err < 2e-3,
        format!("unit seed [{lo:.6}, {hi:.6}], bare Gaussian [{glo:.6}, {ghi:.6}]"),
    )
}

fn normalization_identity() -> Outcome {
    let (_, gs) = catalog_ground("harmonic");
    let worst = [0.5, 2.0, 10.0, -2.0, -5.0]
        .iter()
        .map(|&l| {
            let m = psi_lambda(&gs.mode, l, IntegralOrigin::Left).unwrap();
            (integrate(&m.raw.psi().map(|p| p * p)) * l * (l + 1.0) - 1.0).abs()
        })
        .fold(0.0_f64, f64::max);
    Outcome::new(worst < 1e-4, format!("max |λ(λ+1)∫Ψ² − 1| = {worst:.2e}"))
}

fn intertwining_mappings() -> Outcome {
    let (_, gs) = catalog_ground("harmonic");
    let (mut minus, mut plus) = (0.0_f64, 0.0_f64);
    for lambda in [0.7, 1.5, 12.0] {
        let psi = psi_lambda(&gs.mode, lambda, IntegralOrigin::Left).unwrap().raw;
        let phi = fermionic_zero_mode(&gs.mode, lambda, IntegralOrigin::Left).unwrap();
        minus = minus.max(rel_l2(&apply_t_minus_lambda(&psi, &phi).unwrap(), psi.psi()));
        plus = plus.max(rel_l2(&apply_t_plus_lambda(&psi, psi.psi()).unwrap(), &phi));
    }
    Outcome::new(
        minus < 1e-6 && plus < 1e-6,
        format!("‖T⁻Φ₊ − Ψ‖/‖Ψ‖ = {minus:.2e}, ‖T⁺Ψ − Φ₊‖/‖Φ₊‖ = {plus:.2e}"),
    )
}

fn intertwining_relation() -> Outcome {
    let (_, gs) = catalog_ground("harmonic");
    let pair = partner_potential(&superpotential_from_mode(&gs.mode).unwrap()).unwrap();
    let g = *gs.mode.grid();
    let tests = [
        GridFunction::from_fn(g, |x| (-x * x).exp()),
        GridFunction::from_fn(g, |x| x * (-(x - 0.5).powi(2)).exp()),
        GridFunction::from_fn(g, |x| (2.0 * x).cos() * (-x * x / 2.0).exp()),
    ];
    let worst = tests
        .iter()
        .map(|f| {
            let t1f = apply_t1(&gs.mode, f).unwrap();
            let lhs = apply_hamiltonian(&pair.v_plus, &t1f).unwrap();
            let rhs = apply_t1(&gs.mode, &apply_hamiltonian(&pair.v_minus, f).unwrap()).unwrap();
            norm_ratio(&lhs.sub(&rhs).unwrap(), &t1f)
        })
        .fold(0.0_f64, f64::max);
    Outcome::new(worst < 1e-3, format!("max ‖(H₊T₁ − T₁H₋)f‖/‖T₁f‖ = {worst:.2e}"))
}

fn refined_harmonic() -> GroundState {
    let p = CatalogPotential::from_name("harmonic", None, None).unwrap();
    ground_state(&p.sample(Grid1D::new(-10.0, 10.0, 8001).unwrap())).unwrap()
}

fn riccati_general_solution_check() -> Outcome {
    let lambdas = [0.5, 1.0, 3.0, 10.0];
    let g = Grid1D::new(0.0, 3.0, 3001).unwrap();
    let mut analytic = 0.0_f64;
    for &lr in &lambdas {
        let inst = RiccatiInstance::new(
            GridFunction::from_fn(g, |x| x),
            GridFunction::from_fn(g, |x| 1.0 + x * x),
            lr,
        )
        .unwrap();
        analytic = analytic.max(riccati_residual(&riccati_general_solution(&inst).unwrap(), &inst.f_rhs));
    }
    let (_, gs) = catalog_ground("harmonic");
    let mut catalog = 0.0_f64;
    for &lr in &lambdas {
        let inst = RiccatiInstance::from_zero_mode(&gs.mode, lr).unwrap();
        catalog = catalog.max(riccati_residual(&riccati_general_solution(&inst).unwrap(), &inst.f_rhs));
    }

    // The bridge needs the second-order grid error of V₋ = u″/u below 2e-3,
    // which the default spacing does not give; use h = 2.5e-3.
    let fine = refined_harmonic();
    let pair = partner_potential(&superpotential_from_mode(&fine.mode).unwrap()).unwrap();
    let (mut literal, mut lifted) = (0.0_f64, 0.0_f64);
    for &lr in &lambdas {
        let inst = RiccatiInstance::from_zero_mode(&fine.mode, lr).unwrap();
        let dy = derivative(&riccati_general_solution(&inst).unwrap()).scale(2.0);
        let v_lambda = deformed_potential(&fine.v_minus, &fine.mode, lr, IntegralOrigin::Left).unwrap();
        literal = literal.max(max_dev(&pair.v_minus.sub(&dy).unwrap(), &v_lambda));
        lifted = lifted.max(max_dev(&inst.f_rhs.sub(&dy).unwrap(), &v_lambda));
    }
    Outcome::new(
        analytic < 1e-4 && catalog < 1e-4 && literal < 2e-3,
        format!(
            "residual {analytic:.2e} (y₀ = x), {catalog:.2e} (y₀ = −u′/u); \
             max |V₋ − 2y₁′ − V_λ| = {literal:.2e}; max |V₊ − 2y₁′ − V_λ| = {lifted:.2e}"
        ),
    )
}

fn two_parameter_chain() -> Outcome {
    let (_, gs) = catalog_ground("harmonic");
    let whole = chain_deform(&gs.v_minus, &gs.mode, &[1.5, 2.0]).unwrap();
    let d = verify_isospectral(&gs.v_minus, whole.final_potential(), 6, false)
        .unwrap()
        .max_abs_difference;
    let first = chain_deform(&gs.v_minus, &gs.mode, &[1.5]).unwrap();
    let nested = chain_deform(first.final_potential(), first.final_mode(), &[2.0]).unwrap();
    let bits = |f: &GridFunction| f.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    let exact = bits(nested.final_potential()) == bits(whole.final_potential())
        && nested.final_mode() == whole.final_mode();
    Outcome::new(
        d < 8e-3 && exact,
        format!("max |ΔE| = {d:.2e}, nesting bit-exact = {exact}"),
    )
}

fn refactorization_invariance() -> Outcome {
    let (_, gs) = catalog_ground("harmonic");
    let rebuilt: Vec<GridFunction> = [-2.0, 0.3, 7.0]
        .iter()
        .map(|&ls| {
            let phi = general_zero_mode_minus(&gs.mode, ls, IntegralOrigin::Left).unwrap();
            let floor = 1e-6 * phi.max_abs();
            second_derivative(&phi)
                .zip_with(&phi, |d2, p| if p.abs() >= floor { d2 / p } else { f64::NAN })
                .unwrap()
        })
        .collect();
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in i + 1..3 {
            worst = worst.max(max_dev(&rebuilt[i], &rebuilt[j]));
        }
    }
    Outcome::new(worst < 2e-3, format!("max pairwise deviation = {worst:.2e}"))
}

fn limit_recovery() -> Outcome {
    let (_, gs) = catalog_ground("harmonic");
    let inside = window_pred(&gs.mode);
    let single = deformed_potential(&gs.v_minus, &gs.mode, 1e6, IntegralOrigin::Left).unwrap();
    let single = max_dev_where(&single, &gs.v_minus, &inside);
    let chain = chain_deform(&gs.v_minus, &gs.mode, &[1e6, 1e6]).unwrap();
    let chained = max_dev_where(chain.final_potential(), &gs.v_minus, &inside);
    let unit = (l2_norm(chain.final_mode().psi()) - 1.0).abs();
    Outcome::new(
        single < 1e-4 && chained < 1e-4,
        format!("sup |V_λ − V₋| = {single:.2e} single, {chained:.2e} chained (‖u_out‖ − 1 = {unit:.1e})"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("strict isospectrality", strict_isospectrality),
        ("partner ladder", partner_ladder),
        ("excluded-interval constants", excluded_interval_constants),
        ("normalization identity", normalization_identity),
        ("intertwining mappings", intertwining_mappings),
        ("intertwining relation", intertwining_relation),
        ("Riccati general solution", riccati_general_solution_check),
        ("two-parameter chain", two_parameter_chain),
        ("refactorization invariance", refactorization_invariance),
        ("limit recovery", limit_recovery),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Outcome::new(false, "panicked"));
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", n + 1, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
