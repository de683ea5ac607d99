//! Angle `Δψ` between the limiting rotation axes of the heteroclinic
//! motion for `I13 = 0`: closed formula and boundary-value integration.

use crate::closed_form::{OmegaForm, OmegaSolution};
use crate::hyper::odd_integer;
use crate::integrator::{solve, uniform_samples, IntegratorError, OdeSystem, Options};
use crate::model::{SignBranch, SuslovParams};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatterError {
    #[error("tail variation {variation:e} exceeds 10·tol; increase the horizon")]
    HorizonTooShort { variation: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Integration(#[from] IntegratorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Formula,
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatteringResult {
    pub delta_psi_rad: f64,
    pub method: Method,
    pub residual: Option<f64>,
    pub p: f64,
    pub d: f64,
    /// Tail average of `γ1` (numerical only).
    pub lim_gamma1: Option<f64>,
    /// Half-angle amplitude `cos(Δψ/2)` from the spin lift (numerical only).
    pub half_angle_cos: Option<f64>,
}

/// `cos(Δψ/2) = cos(πp/2)/cosh(πp/(2d))`.
pub fn half_angle_cos(p: f64, d: f64) -> f64 {
    if odd_integer(p).is_some() {
        return 0.0;
    }
    let x = PI * p / (2.0 * d);
    if x.abs() > 700.0 {
        return 0.0;
    }
    (PI * p / 2.0).cos() / x.cosh()
}

/// `Δψ = 2 arccos(cos(πp/2)/cosh(πp/(2d)))`; exactly `π` for odd integer `p`.
pub fn delta_psi_formula(p: f64, d: f64) -> f64 {
    if !(d > 0.0) {
        return f64::NAN;
    }
    if odd_integer(p).is_some() {
        return PI;
    }
    2.0 * half_angle_cos(p, d).clamp(-1.0, 1.0).acos()
}

/// `lim_{t→+∞} γ1 = 1 − 2cos²(πp/2)/cosh²(πp/(2d))`, equal to `−cos Δψ`.
pub fn limit_gamma1(p: f64, d: f64) -> f64 {
    let h = half_angle_cos(p, d);
    1.0 - 2.0 * h * h
}

pub fn formula_result(p: f64, d: f64) -> ScatteringResult {
    ScatteringResult {
        delta_psi_rad: delta_psi_formula(p, d),
        method: Method::Formula,
        residual: None,
        p,
        d,
        lim_gamma1: None,
        half_angle_cos: None,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NumericOptions {
    pub horizon: f64,
    pub tol: f64,
    pub branch: SignBranch,
    /// Energy rescaling `ω_A(t) = A ω(A t)`.
    pub energy_scale: f64,
    /// Samples over the averaging period.
    pub tail_samples: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions { horizon: 20.0, tol: 1e-10, branch: SignBranch::Minus, energy_scale: 1.0, tail_samples: 64 }
    }
}

/// Poisson equations with `γ(−T) = (−1, 0, 0)` together with the spin lift
/// `ψ̇ = [[0, A], [−C, 0]] ψ` and `Φ = ∫ ω1`.
struct Lifted {
    omega: OmegaSolution,
    scale: f64,
}

impl Lifted {
    fn w(&self, t: f64) -> (f64, f64) {
        let (w1, w2) = self.omega.eval(self.scale * t);
        (self.scale * w1, self.scale * w2)
    }
}

impl OdeSystem<8> for Lifted {
    fn rhs(&self, t: f64, x: &[f64; 8]) -> [f64; 8] {
        let (w1, w2) = self.w(t);
        let a = Complex64::new(w2, -w1) * 0.5;
        let c = Complex64::new(w2, w1) * 0.5;
        let p1 = Complex64::new(x[3], x[4]);
        let p2 = Complex64::new(x[5], x[6]);
        let d1 = a * p2;
        let d2 = -c * p1;
        [-x[2] * w2, x[2] * w1, x[0] * w2 - x[1] * w1, d1.re, d1.im, d2.re, d2.im, w1]
    }
}

/// Boundary-value estimate: start at `−T`, integrate past `+T`, average `γ1`
/// over one period `2π/(aA)`; the sign of `cos(Δψ/2)` from the spin lift
/// selects `Δψ` or `2π − Δψ`.
pub fn delta_psi_numeric(p: f64, d: f64, opts: &NumericOptions) -> Result<ScatteringResult, ScatterError> {
    if !(d > 0.0) || !(p > 0.0) {
        return Err(ScatterError::InvalidInput(format!("need p > 0 and d > 0, got p = {p}, d = {d}")));
    }
    if opts.horizon < 20.0 || !(opts.tol <= 1e-8) || !(opts.energy_scale > 0.0) {
        return Err(ScatterError::InvalidInput("need T ≥ 20, tol ≤ 1e-8, A > 0".into()));
    }
    let omega = OmegaSolution::new(SuslovParams::special(p, d, opts.branch), OmegaForm::SpecialI13Zero);
    let sys = Lifted { omega, scale: opts.energy_scale };
    let t_end = opts.horizon * opts.energy_scale.recip().max(1.0);
    let period = 2.0 * PI / (p / d * opts.energy_scale);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let x0 = [-1.0, 0.0, 0.0, r, 0.0, r, 0.0, 0.0];
    let o = Options::new(opts.tol.max(1e-13), opts.tol.max(1e-13) * 1e-2);
    let head = solve(&sys, -t_end, x0, t_end, &[t_end], &o)?;
    let xt = head.x[0];
    let n = opts.tail_samples.max(8);
    let samples = uniform_samples(t_end, t_end + period, n);
    let tail = solve(&sys, t_end, xt, t_end + period, &samples, &o)?;
    // periodic trapezoid: drop the duplicated endpoint
    let g1: Vec<f64> = tail.x.iter().map(|x| x[0]).collect();
    let lim = g1[..n].iter().sum::<f64>() / n as f64;
    let (lo, hi) = g1.iter().fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
    let variation = hi - lo;
    if variation > 10.0 * opts.tol.max(1e-8) {
        return Err(ScatterError::HorizonTooShort { variation });
    }
    let phi = xt[7];
    let s11 = (Complex64::new(0.0, phi / 2.0).exp() * (Complex64::new(xt[3], xt[4]) + Complex64::new(xt[5], xt[6])) * r).re;
    let base = (-lim).clamp(-1.0, 1.0).acos();
    let delta = if s11 < 0.0 { 2.0 * PI - base } else { base };
    Ok(ScatteringResult {
        delta_psi_rad: delta,
        method: Method::Numerical,
        residual: Some(variation),
        p,
        d,
        lim_gamma1: Some(lim),
        half_angle_cos: Some(s11),
    })
}
