//! Acceptance suite: every criterion measured against its bound, one report
//! line each. The `auxsync acceptance` command and the `acceptance` test
//! target both run it.

use std::f64::consts::{PI, TAU};

use auxsync_core::oracles::{case_i_solution, case_ii_solution, case_iii_solution, OracleParams};
use auxsync_core::perturbative::split_effective_model;
use auxsync_core::{
    beta_scaled_model, closed_form_sq, effective_parameters, evolve, husimi_max, husimi_q,
    ideal_spin_model, liouvillian, mhz, perturbative_steady_effective, perturbative_steady_full,
    steady_state, sync_measure, BetaApproach, ClosedForm, ComplexOperator, DensityMatrix,
    DriveConfig, EffectiveModel, IdealSpinModel, LindbladTerm, PhysicalConstants,
};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use auxsync_core::models::{effective_exact, full_exact, with_alpha};
use auxsync_core::Result;

/// Table of effective parameters, 2π×MHz; rows |Δ_eff|, |H23|, Γ_control,
/// Γ_probe, Γ_decay, √(Γ_control Γ_probe); columns Δ_B = 0, 0.2, 0.4 MHz.
pub const PARAMETER_TABLE: [[f64; 3]; 6] = [
    [0.0, 0.725, 1.437],
    [0.0, 0.026, 0.051],
    [4.961, 4.939, 4.875],
    [0.055, 0.055, 0.055],
    [0.783, 0.781, 0.776],
    [0.522, 0.521, 0.518],
];
pub const TABLE_DELTA_B_MHZ: [f64; 3] = [0.0, 0.2, 0.4];

const SEED: u64 = 20_241_016;

fn fmt_bound(b: f64) -> String {
    if b != 0.0 && (b.abs() < 1e-3 || b.abs() >= 1e4) {
        format!("{b:e}")
    } else {
        format!("{b}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub label: String,
    pub value: f64,
    /// Human-readable bound, e.g. `<= 0.005`.
    pub bound: String,
    pub pass: bool,
}

impl Check {
    pub fn at_most(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            label: label.into(),
            value,
            bound: format!("<= {}", fmt_bound(bound)),
            pass: value <= bound,
        }
    }

    pub fn at_least(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            label: label.into(),
            value,
            bound: format!(">= {}", fmt_bound(bound)),
            pass: value >= bound,
        }
    }

    pub fn above(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            label: label.into(),
            value,
            bound: format!("> {}", fmt_bound(bound)),
            pass: value > bound,
        }
    }

    pub fn flag(label: impl Into<String>, ok: bool) -> Self {
        Self {
            label: label.into(),
            value: if ok { 1.0 } else { 0.0 },
            bound: "== 1".into(),
            pass: ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub checks: Vec<Check>,
    /// Set when the computation itself failed.
    pub error: Option<String>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.pass)
    }

    /// `PASS|FAIL <id> <name> | label=value (bound) ; ...`
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let body = match &self.error {
            Some(e) => format!("error: {e}"),
            None => self
                .checks
                .iter()
                .map(|c| {
                    let mark = if c.pass { "" } else { " !" };
                    format!("{}={:.6e} ({}){mark}", c.label, c.value, c.bound)
                })
                .collect::<Vec<_>>()
                .join("; "),
        };
        format!("{status} {:>2} {} | {body}", self.id, self.name)
    }
}

type CriterionFn = fn(&PhysicalConstants) -> Result<Vec<Check>>;

pub const CRITERIA: [(u8, &str, CriterionFn); 11] = [
    (1, "parameter-table", table_regression),
    (2, "oracle-equivalence", oracle_equivalence),
    (3, "full-vs-effective", full_vs_effective),
    (4, "blockade", blockade),
    (5, "cosine-law", cosine_law),
    (6, "zero-field-synchronization", zero_field),
    (7, "husimi-localization", husimi_localization),
    (8, "beta-consistency", beta_consistency),
    (9, "limit-cycle", limit_cycle),
    (10, "structural-invariants", structural_invariants),
    (11, "phase-sensitivity", phase_sensitivity),
];

pub fn run_criterion(id: u8, c: &PhysicalConstants) -> Option<CriterionReport> {
    let (id, name, f) = CRITERIA.iter().find(|(k, _, _)| *k == id)?;
    Some(match f(c) {
        Ok(checks) => CriterionReport {
            id: *id,
            name,
            checks,
            error: None,
        },
        Err(e) => CriterionReport {
            id: *id,
            name,
            checks: Vec::new(),
            error: Some(e.to_string()),
        },
    })
}

/// All criteria, in order. Criteria run concurrently.
pub fn run_acceptance(c: &PhysicalConstants) -> Vec<CriterionReport> {
    CRITERIA
        .par_iter()
        .map(|(id, _, _)| run_criterion(*id, c).expect("listed criterion"))
        .collect()
}

fn fig2(c: &PhysicalConstants, delta_b_mhz: f64) -> DriveConfig {
    DriveConfig::standard(0.0).with_delta_b(mhz(delta_b_mhz), c)
}

fn first_order_sq(d: &DriveConfig, c: &PhysicalConstants) -> Result<f64> {
    let (r, p) = split_effective_model(d, c)?;
    let sol = perturbative_steady_effective(&r, &p, 1)?;
    sync_measure(&sol.sum_to(1), 2)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect()
}

fn random_operator(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> ComplexOperator {
    ComplexOperator::from_fn(dim, |_, _| {
        C64::new(
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
        )
    })
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let a = random_operator(rng, dim, 1.0);
    let p = &a * &a.adjoint();
    let tr = p.trace().re;
    DensityMatrix::from_operator((p * (1.0 / tr)).hermitian_part()).expect("valid density")
}

fn table_regression(c: &PhysicalConstants) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for (col, &db) in TABLE_DELTA_B_MHZ.iter().enumerate() {
        let p = effective_parameters(&fig2(c, db), c)?;
        let got = [
            p.delta_eff.abs(),
            p.h23_abs(),
            p.gamma_control,
            p.gamma_probe,
            p.gamma_decay,
            p.sqrt_control_probe(),
        ];
        for (row, g) in got.iter().enumerate() {
            worst = worst.max((g / TAU - PARAMETER_TABLE[row][col]).abs());
        }
    }
    Ok(vec![Check::at_most("max|dev| [2pi MHz]", worst, 1e-3)])
}

fn oracle_equivalence(c: &PhysicalConstants) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let times = linspace(0.0, 2.0, 20);
    let base = fig2(c, 0.0);
    let probe_free = DriveConfig {
        omega_0: 0.0,
        ..base
    };

    let case_i_drive = DriveConfig {
        omega_prime: 0.0,
        phi_plus1: 0.7,
        phi_minus1: -0.4,
        ..probe_free
    };
    let case_ii_drive = probe_free;
    let case_iii_drive = DriveConfig {
        omega_plus1: 0.0,
        omega_minus1: 0.0,
        ..probe_free
    }
    .with_delta_b(mhz(0.4), c);

    let gen = |d: &DriveConfig| -> Result<_> {
        EffectiveModel::from_config(d, c)?
            .master_equation()
            .liouvillian()
    };
    let (l1, l2, l3) = (
        gen(&case_i_drive)?,
        gen(&case_ii_drive)?,
        gen(&case_iii_drive)?,
    );
    let p1 = OracleParams::new(case_i_drive.omega_plus1, 0.0, -1.1, c);
    let p2 = OracleParams::new(case_ii_drive.omega_plus1, case_ii_drive.omega_prime, 0.0, c);
    let p3 = OracleParams::new(0.0, case_iii_drive.omega_prime, 0.0, c)
        .with_zeeman(case_iii_drive.delta_b, case_iii_drive.delta_b_prime);

    let (mut e1, mut e2, mut e3) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..3 {
        let rho0 = random_density(&mut rng, 3);
        for (t, r) in times.iter().zip(evolve(&l1, &rho0, &times)?) {
            e1 = e1.max(r.max_abs_diff(case_i_solution(&rho0, *t, &p1)?.op()));
        }
        for (t, r) in times.iter().zip(evolve(&l2, &rho0, &times)?) {
            let exact = case_ii_solution(&rho0, *t, &p2)?;
            e2 = e2
                .max((r[(1, 1)].re - exact.rho22).abs())
                .max((r[(0, 2)] - exact.rho13).norm());
        }
        for (t, r) in times.iter().zip(evolve(&l3, &rho0, &times)?) {
            e3 = e3.max(r.max_abs_diff(case_iii_solution(&rho0, *t, &p3)?.op()));
        }
    }
    Ok(vec![
        Check::at_most("case(i)", e1, 1e-8),
        Check::at_most("case(ii)", e2, 1e-8),
        Check::at_most("case(iii)", e3, 1e-8),
    ])
}

fn full_vs_effective(c: &PhysicalConstants) -> Result<Vec<Check>> {
    let base = fig2(c, 0.4);
    let rows = linspace(-PI, PI, 25)
        .into_par_iter()
        .map(|alpha| -> Result<(f64, f64)> {
            let d = with_alpha(&base, alpha);
            let full = full_exact(&d, c)?;
            let eff = effective_exact(&d, c)?;
            let dsq = match (full.sq(), eff.sq()) {
                (Some(a), Some(b)) => (a - b).abs(),
                _ => f64::INFINITY,
            };
            Ok((dsq, full.rho.max_abs_diff(&eff.rho)))
        })
        .collect::<Result<Vec<_>>>()?;
    let dsq = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let drho = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(vec![
        Check::at_most("max|dS_q|", dsq, 5e-3),
        Check::at_most("max|d rho_ij|", drho, 5e-3),
    ])
}

fn blockade(c: &PhysicalConstants) -> Result<Vec<Check>> {
    let base = fig2(c, 0.4);
    let (mut first, mut closed, mut exact) = (0.0f64, 0.0f64, 0.0f64);
    for alpha in [PI, 3.0 * PI, -3.0 * PI] {
        let d = with_alpha(&base, alpha);
        first = first.max(first_order_sq(&d, c)?);
        let p = effective_parameters(&d, c)?;
        closed = closed.max(closed_form_sq(&p, ClosedForm::FirstOrder));
        exact = exact.max(effective_exact(&d, c)?.sq().unwrap_or(f64::INFINITY));
    }
    let ideal = IdealSpinModel {
        delta: mhz(0.3),
        omega: mhz(0.5),
        phi_s: 0.4,
        gamma_g: mhz(1.0),
        gamma_d: mhz(1.0),
        expanded: false,
    };
    let full = ideal_spin_model(&ideal)?.liouvillian()?;
    let reference = ideal_spin_model(&IdealSpinModel {
        omega: 0.0,
        ..ideal
    })?
    .liouvillian()?;
    let sol = perturbative_steady_full(&reference, &(&full - &reference), 1)?;
    let ideal_sq = sync_measure(&sol.sum_to(1), 2)?;
    Ok(vec![
        Check::at_most("first-order", first, 1e-12),
        Check::at_most("first-order closed", closed, 1e-12),
        Check::at_most("exact effective", exact, 2e-3),
        Check::at_most("ideal equal rates", ideal_sq, 1e-12),
    ])
}

fn cosine_law(c: &PhysicalConstants) -> Result<Vec<Check>> {
    let base = fig2(c, 0.4);
    let s0 = first_order_sq(&with_alpha(&base, 0.0), c)?;
    let worst = linspace(-2.0 * PI, 2.0 * PI, 50)
        .into_par_iter()
        .map(|alpha| -> Result<f64> {
            let s = first_order_sq(&with_alpha(&base, alpha), c)?;
            Ok((s - s0 * (alpha / 2.0).cos().abs()).abs())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(vec![Check::at_most(
        "max|S(a)-S(0)|cos(a/2)||",
        worst,
        1e-10,
    )])
}

fn zero_field(c: &PhysicalConstants) -> Result<Vec<Check>> {
    let d = fig2(c, 0.0);
    let p = effective_parameters(&d, c)?;
    let formula = closed_form_sq(&p, ClosedForm::ZeroZeeman);
    let state = effective_exact(&d, c)?;
    let exact = state.sq().unwrap_or(f64::NAN);
    let m = husimi_max(&husimi_q(&state.rho, 181, 360)?);
    let theta = m.theta().unwrap_or(f64::NAN);
    let phi = m.phi().unwrap_or(f64::NAN);
    Ok(vec![
        Check::at_most("|formula-0.100|", (formula - 0.100).abs(), 2e-3),
        Check::at_most("|exact/formula-1|", (exact / formula - 1.0).abs(), 0.1),
        Check::at_most("|theta_max-pi/2|", (theta - PI / 2.0).abs(), 0.05),
        Check::at_most("|phi_max|-pi [pi]", (PI - phi.abs()) / PI, 0.02),
    ])
}

fn husimi_localization(c: &PhysicalConstants) -> Result<Vec<Check>> {
    let base = fig2(c, 0.4);
    let b = effective_exact(&with_alpha(&base, 0.0), c)?;
    let m = husimi_max(&husimi_q(&b.rho, 181, 360)?);
    let theta = m.theta().unwrap_or(f64::NAN);
    let phi = m.phi().unwrap_or(f64::NAN);
    let point_c = effective_exact(&with_alpha(&base, PI), c)?;
    let spread = husimi_q(&point_c.rho, 181, 360)?.phi_profile_spread();
    Ok(vec![
        Check::at_most("B |theta_max-pi/2|", (theta - PI / 2.0).abs(), 0.05),
        Check::at_most("B |phi_max-0.815pi| [pi]", (phi / PI - 0.815).abs(), 0.02),
        Check::at_most("C phi-profile spread", spread, 1e-6),
    ])
}

fn beta_consistency(c: &PhysicalConstants) -> Result<Vec<Check>> {
    let mut identity: f64 = 0.0;
    for &db in &TABLE_DELTA_B_MHZ {
        let p = effective_parameters(&fig2(c, db), c)?;
        let f = closed_form_sq(&p, ClosedForm::FirstOrder);
        let pairs = [
            (ClosedForm::BetaApproach1(1.0), f),
            (ClosedForm::BetaApproach2(1.0), f),
            (
                ClosedForm::BetaApproach1(0.0),
                closed_form_sq(&p, ClosedForm::Approach1Limit),
            ),
            (
                ClosedForm::BetaApproach2(0.0),
                closed_form_sq(&p, ClosedForm::Approach2Limit),
            ),
        ];
        for (variant, expected) in pairs {
            identity = identity.max((closed_form_sq(&p, variant) - expected).abs());
        }
    }

    let d = fig2(c, 0.4);
    let model = EffectiveModel::from_config(&d, c)?;
    let params = model.params.expect("ideal mapping");
    let mut checks = vec![Check::at_most("closed-form endpoints", identity, 1e-12)];
    for approach in [BetaApproach::One, BetaApproach::Two] {
        let worst = linspace(0.0, 1.0, 11)
            .into_par_iter()
            .map(|beta| -> Result<f64> {
                let scaled = beta_scaled_model(&model, beta, approach)?;
                let s = steady_state(&scaled.master_equation().liouvillian()?)?;
                let numeric = sync_measure(s.rho.op(), 2)?;
                let variant = match approach {
                    BetaApproach::One => ClosedForm::BetaApproach1(beta),
                    BetaApproach::Two => ClosedForm::BetaApproach2(beta),
                };
                Ok((numeric / closed_form_sq(&params, variant) - 1.0).abs())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::at_most(
            format!("approach {} max rel dev", approach.number()),
            worst,
            0.02,
        ));
    }
    Ok(checks)
}

fn limit_cycle(c: &PhysicalConstants) -> Result<Vec<Check>> {
    let base = fig2(c, 0.0);
    let probe_free = DriveConfig {
        omega_0: 0.0,
        ..base
    };
    let gen = |d: &DriveConfig| -> Result<_> {
        EffectiveModel::from_config(d, c)?
            .master_equation()
            .liouvillian()
    };
    let l1 = gen(&DriveConfig {
        omega_prime: 0.0,
        ..probe_free
    })?;
    let s1 = steady_state(&l1)?;
    let t = [0.0, 5.0];
    let from_top = evolve(&l1, &DensityMatrix::basis_state(3, 0), &t)?;
    let from_mid = evolve(&l1, &DensityMatrix::basis_state(3, 1), &t)?;
    let d_rho11 = (from_top[1].population(0) - from_mid[1].population(0)).abs();

    let middle = ComplexOperator::projector(3, 1);
    let mut checks = vec![
        Check::at_least(
            "case(i) null multiplicity",
            s1.null_multiplicity as f64,
            2.0,
        ),
        Check::at_least("case(i) d rho_11", d_rho11, 0.1),
    ];
    let ideal = ideal_spin_model(&IdealSpinModel {
        delta: mhz(0.3),
        omega: 0.0,
        phi_s: 0.0,
        gamma_g: mhz(1.0),
        gamma_d: mhz(0.4),
        expanded: false,
    })?
    .liouvillian()?;
    let others = [
        ("case(ii)", gen(&probe_free)?),
        (
            "case(iii)",
            gen(&DriveConfig {
                omega_plus1: 0.0,
                omega_minus1: 0.0,
                ..probe_free
            }
            .with_delta_b(mhz(0.4), c))?,
        ),
        ("ideal", ideal),
    ];
    for (label, l) in others {
        let s = steady_state(&l)?;
        checks.push(Check::flag(format!("{label} unique"), s.unique));
        checks.push(Check::at_most(
            format!("{label} |rho-P|"),
            s.rho.max_abs_diff(&middle),
            1e-8,
        ));
    }
    Ok(checks)
}

fn random_terms(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<LindbladTerm> {
    (0..count)
        .map(|_| {
            let op = random_operator(rng, dim, 1.0);
            if rng.random_bool(0.5) {
                LindbladTerm::absorbed(op)
            } else {
                LindbladTerm::with_rate(op, rng.random_range(0.0..3.0)).expect("valid rate")
            }
        })
        .collect()
}

fn random_drive(rng: &mut ChaCha8Rng, c: &PhysicalConstants) -> DriveConfig {
    let wc = mhz(rng.random_range(2.0..15.0));
    DriveConfig {
        omega_plus1: wc,
        omega_0: mhz(rng.random_range(0.1..3.0)),
        omega_minus1: wc,
        omega_prime: mhz(rng.random_range(1.0..6.0)),
        phi_plus1: rng.random_range(-PI..PI),
        phi_0: rng.random_range(-PI..PI),
        phi_minus1: rng.random_range(-PI..PI),
        phi_prime: rng.random_range(-PI..PI),
        ..DriveConfig::default()
    }
    .with_delta_b(mhz(rng.random_range(0.0..1.0)), c)
}

fn structural_invariants(c: &PhysicalConstants) -> Result<Vec<Check>> {
    const N: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    let (mut trace, mut herm, mut psd, mut tr0, mut trk, mut norm) =
        (0.0f64, 0.0f64, f64::INFINITY, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..N {
        let dim = rng.random_range(2..=4);
        let h = random_operator(&mut rng, dim, 2.0).hermitian_part();
        let terms = random_terms(&mut rng, dim, 3);
        let l = liouvillian(&h, &terms)?;
        trace = trace.max(l.trace_defect());
        let rho = random_operator(&mut rng, dim, 1.0).hermitian_part();
        herm = herm.max(l.apply(&rho)?.hermiticity_error());
        psd = psd.min(steady_state(&l)?.rho.min_eigenvalue());

        let d = random_drive(&mut rng, c);
        let (r, p) = split_effective_model(&d, c)?;
        let sol = perturbative_steady_effective(&r, &p, 3)?;
        tr0 = tr0.max((sol.orders[0].trace() - 1.0).norm());
        for o in &sol.orders[1..] {
            trk = trk.max(o.trace().norm());
        }

        let q = husimi_q(random_density(&mut rng, 3).op(), 91, 72)?;
        norm = norm.max((q.normalization() - 1.0).abs());
    }
    Ok(vec![
        Check::at_most("trace defect", trace, 1e-10),
        Check::at_most("hermiticity defect", herm, 1e-10),
        Check::at_least("steady min eigenvalue", psd, -1e-10),
        Check::at_most("|Tr rho0-1|", tr0, 1e-10),
        Check::at_most("max|Tr rho_k|", trk, 1e-10),
        Check::at_most("|norm Q-1|", norm, 1e-6),
    ])
}

fn phase_sensitivity(c: &PhysicalConstants) -> Result<Vec<Check>> {
    let zero = fig2(c, 0.4);
    let quarter = DriveConfig {
        phi_plus1: PI / 2.0,
        phi_minus1: -PI / 2.0,
        ..zero
    };
    let phi_max = |d: &DriveConfig| -> Result<f64> {
        let s = effective_exact(d, c)?;
        Ok(husimi_max(&husimi_q(&s.rho, 181, 360)?)
            .phi()
            .unwrap_or(f64::NAN))
    };
    let (a, b) = (phi_max(&zero)?, phi_max(&quarter)?);
    let diff = auxsync_core::observables::wrap_phase(a - b).abs();
    Ok(vec![Check::above("|d phi_max| [pi]", diff / PI, 0.02)])
}
