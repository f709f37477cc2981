//! First-order closed forms for the synchronization measure of the reduced
//! model.

use num_complex::Complex64 as C64;

use crate::effective::EffectiveParameters;

/// Which closed form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedForm {
    /// Unscaled first-order result.
    FirstOrder,
    /// First-order result with approach-1 scaling by β.
    BetaApproach1(f64),
    /// Approach 1 at β = 0.
    Approach1Limit,
    /// First-order result with approach-2 scaling by β.
    BetaApproach2(f64),
    /// Approach 2 at β = 0.
    Approach2Limit,
    /// First-order result at zero Zeeman splitting.
    ZeroZeeman,
    /// Zero Zeeman splitting with control-mediated processes dominant:
    /// `|cos(α/2)| √(Γ_probe/Γ_control)`.
    ZeroZeemanStrongControl,
}

impl ClosedForm {
    /// Stable names used on the command line and in CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            Self::FirstOrder => "first-order",
            Self::BetaApproach1(_) => "beta-approach1",
            Self::Approach1Limit => "approach1-limit",
            Self::BetaApproach2(_) => "beta-approach2",
            Self::Approach2Limit => "approach2-limit",
            Self::ZeroZeeman => "zero-zeeman",
            Self::ZeroZeemanStrongControl => "zero-zeeman-strong-control",
        }
    }

    /// Parses a name; the β variants take `beta`.
    pub fn parse(name: &str, beta: f64) -> Option<Self> {
        Some(match name {
            "first-order" => Self::FirstOrder,
            "beta-approach1" => Self::BetaApproach1(beta),
            "approach1-limit" => Self::Approach1Limit,
            "beta-approach2" => Self::BetaApproach2(beta),
            "approach2-limit" => Self::Approach2Limit,
            "zero-zeeman" => Self::ZeroZeeman,
            "zero-zeeman-strong-control" => Self::ZeroZeemanStrongControl,
            _ => return None,
        })
    }
}

pub fn closed_form_sq(p: &EffectiveParameters, variant: ClosedForm) -> f64 {
    let cos_factor = (p.alpha / 2.0).cos().abs();
    let h23 = p.h23_abs();
    let d = p.delta_eff.abs();
    let gc = p.gamma_control;
    let gp = p.gamma_probe;
    let gd = p.gamma_decay;
    let i = C64::i();
    let scaled = |b2_decay: f64, w_cp: f64, w_hc: f64, w_den: f64| -> f64 {
        // Decay rate enters as ((1 + β²)/2) Γ_decay in every scaled form.
        let gd_b = b2_decay * gd;
        let dd = C64::new(d, -gd_b);
        let num = 2.0 * h23 * dd + i * w_cp * (gc * gp).sqrt() * dd - i * w_hc * h23 * gc;
        let den = p.delta_eff * p.delta_eff + w_den * gd_b * gc + gd_b * gd_b;
        cos_factor * num.norm() / den
    };
    match variant {
        ClosedForm::FirstOrder => scaled(1.0, 3.0, 6.0, 3.0),
        ClosedForm::BetaApproach1(b) => {
            let b2 = b * b;
            scaled((1.0 + b2) / 2.0, 3.0 * b2, 6.0 * b2, 3.0 * b2)
        }
        ClosedForm::Approach1Limit => {
            let num = 2.0 * h23 * C64::new(d, -gd / 2.0);
            cos_factor * num.norm() / (p.delta_eff * p.delta_eff + 0.25 * gd * gd)
        }
        ClosedForm::BetaApproach2(b) => {
            let b2 = b * b;
            scaled(
                (1.0 + b2) / 2.0,
                b + 2.0 * b2,
                2.0 * (1.0 + 2.0 * b2),
                1.0 + 2.0 * b2,
            )
        }
        ClosedForm::Approach2Limit => {
            let num = 2.0 * h23 * C64::new(d, -gd / 2.0) - 2.0 * i * h23 * gc;
            cos_factor * num.norm() / (p.delta_eff * p.delta_eff + 0.5 * gc * gd + 0.25 * gd * gd)
        }
        ClosedForm::ZeroZeeman => 3.0 * cos_factor * (gc * gp).sqrt() / (gd + 3.0 * gc),
        ClosedForm::ZeroZeemanStrongControl => cos_factor * (gp / gc).sqrt(),
    }
}
