//! α, Δ_B and β sweeps. Points are evaluated in parallel; rows keep sweep
//! order.

use auxsync_core::{
    beta_scaled_model, closed_form_sq, effective_parameters, mhz, steady_state, sync_measure,
    BetaApproach, ClosedForm, DriveConfig, EffectiveModel, PhysicalConstants,
};
use rayon::prelude::*;

use crate::config::{ModelKind, RunConfig, SweepSpec, SweepVariable};
use crate::error::{CliError, CliResult};
use crate::table::{Cell, Table};
use auxsync_core::models::{
    allow_degenerate, effective_exact, effective_perturbative, full_exact, with_alpha,
};

pub const ALPHA_HEADER: [&str; 5] = ["alpha", "sq_full", "sq_eff", "sq_pert", "sq_closed"];
pub const DELTA_B_HEADER: [&str; 7] = [
    "delta_b_mhz",
    "sq_full",
    "sq_eff",
    "sq_pert",
    "phi_max_full",
    "phi_max_eff",
    "phi_max_pert",
];
pub const BETA_HEADER: [&str; 4] = ["beta", "approach", "sq_eff", "sq_closed"];

/// Cells and whether every steady state in the row was unique.
type Row = (Vec<Cell>, bool);

struct Context<'a> {
    cfg: &'a RunConfig,
    drive: DriveConfig,
    constants: PhysicalConstants,
}

impl Context<'_> {
    fn closed(&self, drive: &DriveConfig, variant: ClosedForm) -> CliResult<Cell> {
        if !drive.ideal_mapping {
            return Ok(Cell::Empty);
        }
        let p = effective_parameters(drive, &self.constants)?;
        Ok(Cell::Num(closed_form_sq(&p, variant)))
    }

    fn alpha_row(&self, alpha: f64) -> CliResult<Row> {
        let d = with_alpha(&self.drive, alpha);
        let c = &self.constants;
        let full = allow_degenerate(full_exact(&d, c))?;
        let eff = allow_degenerate(effective_exact(&d, c))?;
        let pert = allow_degenerate(effective_perturbative(&d, c, self.cfg.solver.order))?;
        let variant = self.cfg.closed_form_variant(self.cfg.beta.unwrap_or(1.0))?;
        let cells = vec![
            Cell::Num(alpha),
            Cell::from_option(full.sq()),
            Cell::from_option(eff.sq()),
            Cell::from_option(pert.sq()),
            self.closed(&d, variant)?,
        ];
        Ok((cells, full.unique && eff.unique && pert.unique))
    }

    fn delta_b_row(&self, delta_b_mhz: f64) -> CliResult<Row> {
        let c = &self.constants;
        let d = self.drive.with_delta_b(mhz(delta_b_mhz), c);
        let grid = &self.cfg.husimi;
        let states = [
            allow_degenerate(full_exact(&d, c))?,
            allow_degenerate(effective_exact(&d, c))?,
            allow_degenerate(effective_perturbative(&d, c, self.cfg.solver.order))?,
        ];
        let mut row = vec![Cell::Num(delta_b_mhz)];
        row.extend(states.iter().map(|s| Cell::from_option(s.sq())));
        for s in &states {
            row.push(Cell::from_option(s.phi_max(grid.n_theta, grid.n_phi)?));
        }
        Ok((row, states.iter().all(|s| s.unique)))
    }

    fn beta_row(&self, beta: f64) -> CliResult<Row> {
        let number = self.cfg.approach_number();
        let approach = BetaApproach::from_number(number)
            .map_err(|e| CliError::config(format!("field `approach`: {e}")))?;
        let model = EffectiveModel::from_config(&self.drive, &self.constants)?;
        let scaled = beta_scaled_model(&model, beta, approach)?;
        let s = steady_state(&scaled.master_equation().liouvillian()?)?;
        let sq = s.unique.then(|| sync_measure(s.rho.op(), 2)).transpose()?;
        let variant = match approach {
            BetaApproach::One => ClosedForm::BetaApproach1(beta),
            BetaApproach::Two => ClosedForm::BetaApproach2(beta),
        };
        let cells = vec![
            Cell::Num(beta),
            Cell::Int(number.into()),
            Cell::from_option(sq),
            self.closed(&self.drive, variant)?,
        ];
        Ok((cells, s.unique))
    }
}

fn header(v: SweepVariable) -> &'static [&'static str] {
    match v {
        SweepVariable::Alpha => &ALPHA_HEADER,
        SweepVariable::DeltaB => &DELTA_B_HEADER,
        SweepVariable::Beta => &BETA_HEADER,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutput {
    pub table: Table,
    /// Row indices with a non-unique steady state (their S_q fields are empty).
    pub non_unique: Vec<usize>,
}

/// Runs the configured sweep on at most `jobs` threads (all cores if `None`).
pub fn run_sweep(cfg: &RunConfig, jobs: Option<usize>) -> CliResult<SweepOutput> {
    let spec: SweepSpec = cfg
        .sweep
        .ok_or_else(|| CliError::config("field `sweep`: required by the sweep command"))?;
    if !matches!(cfg.model, ModelKind::Full | ModelKind::Effective) {
        return Err(CliError::config(format!(
            "field `model`: sweeps use the atomic models, not `{}`",
            cfg.model.name()
        )));
    }
    let ctx = Context {
        cfg,
        drive: cfg.drive()?,
        constants: cfg.constants()?,
    };
    if spec.variable == SweepVariable::Beta && !ctx.drive.ideal_mapping {
        return Err(CliError::config(
            "field `drive.ideal_mapping`: β sweeps need the ideal mapping",
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::config(format!("--jobs: {e}")))?;
    let values = spec.values();
    let rows = pool.install(|| {
        values
            .par_iter()
            .map(|&v| match spec.variable {
                SweepVariable::Alpha => ctx.alpha_row(v),
                SweepVariable::DeltaB => ctx.delta_b_row(v),
                SweepVariable::Beta => ctx.beta_row(v),
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    let mut table = Table::new(header(spec.variable));
    let mut non_unique = Vec::new();
    for (i, (cells, unique)) in rows.into_iter().enumerate() {
        if !unique {
            non_unique.push(i);
        }
        table.rows.push(cells);
    }
    Ok(SweepOutput { table, non_unique })
}
