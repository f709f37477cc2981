//! `steady` and `evolve` commands.

use auxsync_core::models::{
    effective_exact, effective_perturbative, full_exact, full_perturbative, ideal_exact,
    ideal_perturbative,
};
use auxsync_core::rb87::full_master_equation;
use auxsync_core::{
    closed_form_sq, effective_parameters, evolve, ground_block, husimi_max, husimi_q,
    ideal_spin_model, sync_measure, DensityMatrix, EffectiveModel, SpinState, Superoperator,
};
use serde::Serialize;

use crate::config::{ModelKind, RunConfig, SolverMethod};
use crate::error::{CliError, CliResult};
use crate::table::{Cell, Table};

/// Steady state of the configured model with the configured solver.
pub fn configured_state(cfg: &RunConfig) -> CliResult<SpinState> {
    let order = cfg.solver.order;
    let exact = match cfg.solver.method {
        SolverMethod::Exact => true,
        SolverMethod::Perturbative => false,
        SolverMethod::ClosedForm => {
            return Err(CliError::config(
                "field `solver.method`: closed forms give S_q only, not a state",
            ))
        }
    };
    let state = match cfg.model {
        ModelKind::Full | ModelKind::Effective => {
            let drive = cfg.drive()?;
            let c = cfg.constants()?;
            match (cfg.model, exact) {
                (ModelKind::Full, true) => full_exact(&drive, &c),
                (ModelKind::Full, false) => full_perturbative(&drive, &c, order),
                (_, true) => effective_exact(&drive, &c),
                (_, false) => effective_perturbative(&drive, &c, order),
            }
        }
        ModelKind::Ideal | ModelKind::ExpandedIdeal => {
            let m = cfg.ideal_model();
            if exact {
                ideal_exact(&m)
            } else {
                ideal_perturbative(&m, order)
            }
        }
    };
    Ok(state?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SteadyReport {
    pub model: String,
    pub method: String,
    pub unique: Option<bool>,
    pub null_multiplicity: Option<usize>,
    pub relative_residual: Option<f64>,
    pub sq: Option<f64>,
    pub theta_max: Option<f64>,
    pub phi_max: Option<f64>,
    /// Spin-1 density matrix, real and imaginary parts.
    pub rho_re: Option<Vec<Vec<f64>>>,
    pub rho_im: Option<Vec<Vec<f64>>>,
}

pub fn run_steady(cfg: &RunConfig) -> CliResult<SteadyReport> {
    let method = match cfg.solver.method {
        SolverMethod::Exact => "exact".to_string(),
        SolverMethod::Perturbative => format!("perturbative({})", cfg.solver.order),
        SolverMethod::ClosedForm => format!("closed-form({})", cfg.solver.variant),
    };
    let mut report = SteadyReport {
        model: cfg.model.name().into(),
        method,
        unique: None,
        null_multiplicity: None,
        relative_residual: None,
        sq: None,
        theta_max: None,
        phi_max: None,
        rho_re: None,
        rho_im: None,
    };
    if cfg.solver.method == SolverMethod::ClosedForm {
        if !matches!(cfg.model, ModelKind::Effective | ModelKind::Full) {
            return Err(CliError::config(
                "field `model`: closed forms exist for the atomic models only",
            ));
        }
        let p = effective_parameters(&cfg.drive()?, &cfg.constants()?)?;
        report.sq = Some(closed_form_sq(
            &p,
            cfg.closed_form_variant(cfg.beta.unwrap_or(1.0))?,
        ));
        return Ok(report);
    }
    let s = configured_state(cfg)?;
    report.unique = Some(s.unique);
    report.null_multiplicity = s.null_multiplicity;
    report.relative_residual = s.residual;
    report.sq = s.sq();
    if s.unique {
        let field = husimi_q(&s.rho, cfg.husimi.n_theta, cfg.husimi.n_phi)?;
        let m = husimi_max(&field);
        report.theta_max = m.theta();
        report.phi_max = m.phi();
    }
    let n = s.rho.dim();
    report.rho_re = Some(
        (0..n)
            .map(|i| (0..n).map(|j| s.rho[(i, j)].re).collect())
            .collect(),
    );
    report.rho_im = Some(
        (0..n)
            .map(|i| (0..n).map(|j| s.rho[(i, j)].im).collect())
            .collect(),
    );
    Ok(report)
}

fn generator(cfg: &RunConfig) -> CliResult<Superoperator> {
    let l = match cfg.model {
        ModelKind::Full => full_master_equation(&cfg.drive()?, &cfg.constants()?)?.liouvillian()?,
        ModelKind::Effective => EffectiveModel::from_config(&cfg.drive()?, &cfg.constants()?)?
            .master_equation()
            .liouvillian()?,
        ModelKind::Ideal | ModelKind::ExpandedIdeal => {
            ideal_spin_model(&cfg.ideal_model())?.liouvillian()?
        }
    };
    Ok(l)
}

/// Populations and S_q on a uniform time grid. For the 6-level model S_q is
/// taken on the (unnormalized) ground block.
pub fn run_evolve(cfg: &RunConfig) -> CliResult<Table> {
    let l = generator(cfg)?;
    let dim = l.hilbert_dim();
    let spec = cfg.evolve;
    if spec.initial_state >= dim {
        return Err(CliError::config(format!(
            "field `evolve.initial_state`: {} is out of range for a {dim}-level model",
            spec.initial_state
        )));
    }
    let times: Vec<f64> = if spec.points == 1 {
        vec![0.0]
    } else {
        (0..spec.points)
            .map(|k| spec.t_stop * k as f64 / (spec.points - 1) as f64)
            .collect()
    };
    let states = evolve(
        &l,
        &DensityMatrix::basis_state(dim, spec.initial_state),
        &times,
    )?;
    let mut header: Vec<String> = vec!["t".into()];
    header.extend((1..=dim).map(|k| format!("p{k}")));
    header.push("sq".into());
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for (t, rho) in times.iter().zip(&states) {
        let spin = if dim == 3 {
            rho.op().clone()
        } else {
            ground_block(rho.op(), false)?
        };
        let mut row = vec![Cell::Num(*t)];
        row.extend((0..dim).map(|k| Cell::Num(rho.population(k))));
        row.push(Cell::Num(sync_measure(&spin, 2)?));
        table.rows.push(row);
    }
    Ok(table)
}
