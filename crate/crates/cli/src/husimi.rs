use auxsync_core::{husimi_q, HusimiField};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::state::configured_state;
use crate::table::{format_g, Cell, Table};

pub const HUSIMI_HEADER: [&str; 3] = ["theta", "phi", "q"];

/// Husimi field of the configured steady state.
pub fn run_husimi(cfg: &RunConfig) -> CliResult<HusimiField> {
    let state = configured_state(cfg)?;
    Ok(husimi_q(&state.rho, cfg.husimi.n_theta, cfg.husimi.n_phi)?)
}

/// θ-major `(θ, φ, Q)` rows.
pub fn husimi_table(field: &HusimiField) -> Table {
    let mut t = Table::new(&HUSIMI_HEADER);
    for (i, &theta) in field.theta.iter().enumerate() {
        for (j, &phi) in field.phi.iter().enumerate() {
            t.rows.push(vec![
                Cell::Num(theta),
                Cell::Num(phi),
                Cell::Num(field.values[i][j]),
            ]);
        }
    }
    t
}

/// Comment line carrying `∫Q dΩ`.
pub fn normalization_comment(field: &HusimiField) -> String {
    format!("normalization={}", format_g(field.normalization()))
}
