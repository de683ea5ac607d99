//! Heteroclinic closed forms of the Euler equations and the energy level.

use crate::model::{InertiaTensor, SuslovParams};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OmegaForm {
    General,
    SpecialI13Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnergyForm {
    /// `I11 ω1² + I22 ω2²`.
    OriginalF1,
    /// `(d² + 1) ω1² + ω2²` of the special family.
    RescaledF1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaSolution {
    pub params: SuslovParams,
    pub form: OmegaForm,
}

impl OmegaSolution {
    pub fn new(params: SuslovParams, form: OmegaForm) -> Self {
        OmegaSolution { params, form }
    }

    pub fn eval(&self, t: f64) -> (f64, f64) {
        match (self.form, self.params.special) {
            (OmegaForm::SpecialI13Zero, Some(sp)) => {
                let (w1, w2) = omega_special(t, sp.a(), sp.c());
                (w1, -self.params.sign_branch.sign() * w2)
            }
            _ => omega_general(t, &self.params),
        }
    }

    /// Analytic time derivative.
    pub fn eval_dot(&self, t: f64) -> (f64, f64) {
        let p = &self.params;
        let (th, sh) = (t.tanh(), sech(t));
        let s2 = sh * sh;
        (p.a * s2 - 0.5 * p.c1 * sh * th, p.b * s2 - 0.5 * p.c2 * sh * th)
    }
}

/// `sech t`, finite for all real `t`.
pub fn sech(t: f64) -> f64 {
    let e = (-t.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// `ω1 = a tanh t + (c1/2) sech t`, `ω2 = b tanh t + (c2/2) sech t`.
pub fn omega_general(t: f64, params: &SuslovParams) -> (f64, f64) {
    let (th, sh) = (t.tanh(), sech(t));
    (params.a * th + 0.5 * params.c1 * sh, params.b * th + 0.5 * params.c2 * sh)
}

/// `ω1 = a tanh t`, `ω2 = −a c sech t`.
pub fn omega_special(t: f64, a: f64, c: f64) -> (f64, f64) {
    (a * t.tanh(), -a * c * sech(t))
}

/// Value of the chosen energy function on the closed form.
pub fn energy_level(params: &SuslovParams, form: EnergyForm) -> f64 {
    match form {
        EnergyForm::OriginalF1 => match params.inertia {
            Some(i) => 1.0 / (i.i13 * i.i13 * i.i22 + i.i23 * i.i23 * i.i11),
            None => energy_on_orbit(params, form, 0.0),
        },
        EnergyForm::RescaledF1 => match params.special {
            Some(sp) => {
                let (a, c) = (params.a, sp.c());
                a * a * c * c
            }
            None => f64::NAN,
        },
    }
}

/// Energy function evaluated at `ω(t)`.
pub fn energy_on_orbit(params: &SuslovParams, form: EnergyForm, t: f64) -> f64 {
    let (w1, w2) = omega_general(t, params);
    match form {
        EnergyForm::OriginalF1 => match params.inertia {
            Some(i) => i.i11 * w1 * w1 + i.i22 * w2 * w2,
            None => f64::NAN,
        },
        EnergyForm::RescaledF1 => match params.special {
            Some(sp) => (sp.d * sp.d + 1.0) * w1 * w1 + w2 * w2,
            None => f64::NAN,
        },
    }
}

/// Euler equations with `ω3 = 0`.
pub fn euler_rhs(t: &InertiaTensor, w1: f64, w2: f64) -> (f64, f64) {
    let l = t.i13 * w1 + t.i23 * w2;
    (t.i22 * l * w2, -t.i11 * l * w1)
}
