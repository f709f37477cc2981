//! JSON run configuration. Frequencies are in MHz (multiplied by 2π on
//! ingestion), phases in rad, times in µs.

use std::path::{Path, PathBuf};

use auxsync_core::{mhz, ClosedForm, DriveConfig, IdealSpinModel, PhysicalConstants};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Full,
    #[default]
    Effective,
    Ideal,
    ExpandedIdeal,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Full => "full",
            Self::Effective => "effective",
            Self::Ideal => "ideal",
            Self::ExpandedIdeal => "expanded-ideal",
        }
    }
}

/// Drive parameters in user units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveInput {
    pub omega_plus1: f64,
    pub omega_0: f64,
    pub omega_minus1: f64,
    pub omega_prime: f64,
    pub phi_plus1: f64,
    pub phi_0: f64,
    pub phi_minus1: f64,
    pub phi_prime: f64,
    pub delta_b: f64,
    /// Defaults to `delta_b` times the excited/ground Zeeman ratio.
    pub delta_b_prime: Option<f64>,
    pub delta_pi_dprime: f64,
    pub delta_sigma_dprime: f64,
    pub delta_pi_prime: f64,
    pub ideal_mapping: bool,
}

impl Default for DriveInput {
    fn default() -> Self {
        Self {
            omega_plus1: 9.5,
            omega_0: 1.0,
            omega_minus1: 9.5,
            omega_prime: 3.0,
            phi_plus1: 0.0,
            phi_0: 0.0,
            phi_minus1: 0.0,
            phi_prime: 0.0,
            delta_b: 0.4,
            delta_b_prime: None,
            delta_pi_dprime: 0.0,
            delta_sigma_dprime: 0.0,
            delta_pi_prime: 0.0,
            ideal_mapping: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsInput {
    pub gamma_aux_dprime: f64,
    pub gamma_aux_prime: f64,
    /// MHz per gauss.
    pub zeeman_ground: f64,
    pub zeeman_excited: f64,
}

impl Default for ConstantsInput {
    fn default() -> Self {
        Self {
            gamma_aux_dprime: 6.065,
            gamma_aux_prime: 5.746,
            zeeman_ground: 0.70,
            zeeman_excited: 0.23,
        }
    }
}

/// Ideal spin-1 parameters (MHz, phase in rad).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdealInput {
    pub delta: f64,
    pub omega: f64,
    pub phi_s: f64,
    pub gamma_g: f64,
    pub gamma_d: f64,
}

impl Default for IdealInput {
    fn default() -> Self {
        Self {
            delta: 0.0,
            omega: 0.1,
            phi_s: 0.0,
            gamma_g: 1.0,
            gamma_d: 0.2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// rad
    Alpha,
    /// MHz
    DeltaB,
    Beta,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    #[default]
    Exact,
    Perturbative,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    pub method: SolverMethod,
    /// Perturbative order `K`.
    pub order: usize,
    /// Closed-form variant name, e.g. `first-order` or `beta-approach2`.
    pub variant: String,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            method: SolverMethod::Exact,
            order: 1,
            variant: "first-order".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HusimiGrid {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for HusimiGrid {
    fn default() -> Self {
        Self {
            n_theta: auxsync_core::observables::DEFAULT_N_THETA,
            n_phi: auxsync_core::observables::DEFAULT_N_PHI,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveSpec {
    /// µs
    pub t_stop: f64,
    pub points: usize,
    /// Basis index of the initial pure state.
    pub initial_state: usize,
}

impl Default for EvolveSpec {
    fn default() -> Self {
        Self {
            t_stop: 2.0,
            points: 21,
            initial_state: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelKind,
    pub drive: DriveInput,
    pub constants: ConstantsInput,
    pub ideal: IdealInput,
    pub sweep: Option<SweepSpec>,
    pub beta: Option<f64>,
    pub approach: Option<u8>,
    pub solver: SolverSpec,
    pub output: Option<PathBuf>,
    pub husimi: HusimiGrid,
    pub evolve: EvolveSpec,
}

/// Sets `a.b.c = value` in a JSON tree, creating objects on the way.
fn set_path(root: &mut Value, assignment: &str) -> CliResult<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("--set expects key=value, got `{assignment}`")))?;
    let value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(CliError::config(format!("empty component in key `{key}`")));
        }
        if !node.is_object() {
            *node = Value::Object(Default::default());
        }
        let map = node.as_object_mut().expect("just made an object");
        if i + 1 == parts.len() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        node = map.entry(part.to_string()).or_insert(Value::Null);
    }
    Ok(())
}

impl RunConfig {
    /// Reads the optional JSON file, applies `--set` overrides and validates.
    pub fn load(path: Option<&Path>, sets: &[String]) -> CliResult<Self> {
        let mut tree = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::config(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::config(format!("{}: {e}", p.display())))?
            }
            None => Value::Object(Default::default()),
        };
        for s in sets {
            set_path(&mut tree, s)?;
        }
        Self::from_value(tree)
    }

    pub fn from_value(tree: Value) -> CliResult<Self> {
        let cfg: Self = serde_path_to_error::deserialize(tree)
            .map_err(|e| CliError::config(format!("field `{}`: {}", e.path(), e.inner())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.constants()?;
        self.drive()?;
        if let Some(s) = &self.sweep {
            if s.points < 2 {
                return Err(CliError::config(format!(
                    "field `sweep.points`: need at least 2, got {}",
                    s.points
                )));
            }
            if !(s.start.is_finite() && s.stop.is_finite()) {
                return Err(CliError::config(
                    "field `sweep.start`/`sweep.stop`: must be finite",
                ));
            }
            let unit = 0.0..=1.0;
            if s.variable == SweepVariable::Beta
                && !(unit.contains(&s.start) && unit.contains(&s.stop))
            {
                return Err(CliError::config("field `sweep`: beta must stay in [0, 1]"));
            }
        }
        if let Some(b) = self.beta {
            if !(0.0..=1.0).contains(&b) {
                return Err(CliError::config(format!(
                    "field `beta`: {b} is outside [0, 1]"
                )));
            }
        }
        if let Some(a) = self.approach {
            if a != 1 && a != 2 {
                return Err(CliError::config(format!(
                    "field `approach`: expected 1 or 2, got {a}"
                )));
            }
        }
        if self.solver.order == 0 {
            return Err(CliError::config("field `solver.order`: must be at least 1"));
        }
        self.closed_form_variant(self.beta.unwrap_or(1.0))?;
        if self.husimi.n_theta < 2 || self.husimi.n_phi < 3 {
            return Err(CliError::config(
                "field `husimi`: need n_theta >= 2 and n_phi >= 3",
            ));
        }
        if !(self.evolve.t_stop.is_finite() && self.evolve.t_stop >= 0.0) || self.evolve.points < 1
        {
            return Err(CliError::config(
                "field `evolve`: t_stop must be non-negative and points at least 1",
            ));
        }
        Ok(())
    }

    pub fn constants(&self) -> CliResult<PhysicalConstants> {
        let c = &self.constants;
        PhysicalConstants::new(
            mhz(c.gamma_aux_dprime),
            mhz(c.gamma_aux_prime),
            mhz(c.zeeman_ground),
            mhz(c.zeeman_excited),
        )
        .map_err(|e| CliError::config(format!("field `constants`: {e}")))
    }

    /// Drive in rad/µs.
    pub fn drive(&self) -> CliResult<DriveConfig> {
        let d = &self.drive;
        let c = self.constants()?;
        let delta_b = mhz(d.delta_b);
        let cfg = DriveConfig {
            omega_plus1: mhz(d.omega_plus1),
            omega_0: mhz(d.omega_0),
            omega_minus1: mhz(d.omega_minus1),
            omega_prime: mhz(d.omega_prime),
            phi_plus1: d.phi_plus1,
            phi_0: d.phi_0,
            phi_minus1: d.phi_minus1,
            phi_prime: d.phi_prime,
            delta_b,
            delta_b_prime: d.delta_b_prime.map_or(delta_b * c.zeeman_ratio(), mhz),
            delta_pi_dprime: mhz(d.delta_pi_dprime),
            delta_sigma_dprime: mhz(d.delta_sigma_dprime),
            delta_pi_prime: mhz(d.delta_pi_prime),
            ideal_mapping: d.ideal_mapping,
        };
        cfg.validate()
            .map_err(|e| CliError::config(format!("field `drive`: {e}")))?;
        Ok(cfg)
    }

    pub fn ideal_model(&self) -> IdealSpinModel {
        let i = &self.ideal;
        IdealSpinModel {
            delta: mhz(i.delta),
            omega: mhz(i.omega),
            phi_s: i.phi_s,
            gamma_g: mhz(i.gamma_g),
            gamma_d: mhz(i.gamma_d),
            expanded: self.model == ModelKind::ExpandedIdeal,
        }
    }

    pub fn approach_number(&self) -> u8 {
        self.approach.unwrap_or(1)
    }

    pub fn closed_form_variant(&self, beta: f64) -> CliResult<ClosedForm> {
        ClosedForm::parse(&self.solver.variant, beta).ok_or_else(|| {
            CliError::config(format!(
                "field `solver.variant`: unknown closed form `{}`",
                self.solver.variant
            ))
        })
    }
}
