//! Dormand–Prince 5(4) integration of the Euler–Poisson system and of the
//! Poisson equations driven by a prescribed `ω(t)`.

use crate::closed_form::{omega_general, OmegaSolution};
use crate::model::{InertiaTensor, SuslovParams, SwapSymmetry};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegratorError {
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("tolerances must lie in (1e-14, 1e-2), got rel = {rel:e}, abs = {abs:e}")]
    InvalidTolerance { rel: f64, abs: f64 },
    #[error("empty integration interval")]
    EmptyInterval,
    #[error("maximum number of steps ({0}) exceeded")]
    MaxSteps(usize),
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
}

/// Autonomous or time-dependent first-order system of dimension `N`.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, x: &[f64; N]) -> [f64; N];
}

impl<const N: usize, F> OdeSystem<N> for F
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    fn rhs(&self, t: f64, x: &[f64; N]) -> [f64; N] {
        self(t, x)
    }
}

pub struct Options<'a, const N: usize> {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Applied to each accepted state.
    pub projection: Option<&'a dyn Fn(&mut [f64; N])>,
}

impl<const N: usize> Options<'_, N> {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        Options { rel_tol, abs_tol, max_steps: 10_000_000, projection: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Stats {
    pub steps: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub t: Vec<f64>,
    pub x: Vec<[f64; N]>,
    pub stats: Stats,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn lin<const N: usize>(x: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut y = *x;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..N {
                y[i] += h * c * k[i];
            }
        }
    }
    y
}

fn rms_norm<const N: usize>(e: &[f64; N], x0: &[f64; N], x1: &[f64; N], rel: f64, abs: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        let sk = abs + rel * x0[i].abs().max(x1[i].abs());
        s += (e[i] / sk).powi(2);
    }
    (s / N as f64).sqrt()
}

/// Integrates from `t0` to `t1` (either direction) and returns the state at
/// each entry of `samples`, which must be monotone in the direction of
/// integration and lie in the closed interval.
pub fn solve<const N: usize, S: OdeSystem<N> + ?Sized>(
    sys: &S,
    t0: f64,
    x0: [f64; N],
    t1: f64,
    samples: &[f64],
    opts: &Options<'_, N>,
) -> Result<Solution<N>, IntegratorError> {
    let (rel, abs) = (opts.rel_tol, opts.abs_tol);
    let ok = |v: f64| v > 1e-14 && v < 1e-2;
    if !ok(rel) || !ok(abs) {
        return Err(IntegratorError::InvalidTolerance { rel, abs });
    }
    if !(t1 != t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(IntegratorError::EmptyInterval);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let h_min = 1e-14 * span;
    let mut stats = Stats { rel_tol: rel, abs_tol: abs, ..Default::default() };
    let mut out_t = Vec::with_capacity(samples.len());
    let mut out_x = Vec::with_capacity(samples.len());
    let mut si = 0;
    while si < samples.len() && dir * (samples[si] - t0) <= 0.0 {
        out_t.push(samples[si]);
        out_x.push(x0);
        si += 1;
    }

    let mut t = t0;
    let mut x = x0;
    let mut k1 = sys.rhs(t, &x);
    stats.rhs_evals += 1;

    // initial step (Hairer & Wanner, II.4)
    let mut h = {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            let sk = abs + rel * x[i].abs();
            d0 += (x[i] / sk).powi(2);
            d1 += (k1[i] / sk).powi(2);
        }
        let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span);
        let x1 = lin(&x, dir * h0, &[(1.0, &k1)]);
        let f1 = sys.rhs(t + dir * h0, &x1);
        stats.rhs_evals += 1;
        let mut d2 = 0.0;
        for i in 0..N {
            let sk = abs + rel * x[i].abs();
            d2 += ((f1[i] - k1[i]) / sk).powi(2);
        }
        let d2 = (d2 / N as f64).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(span)
    };

    let mut facold = 1e-4f64;
    let mut last_rejected = false;
    loop {
        if stats.steps + stats.rejected >= opts.max_steps {
            return Err(IntegratorError::MaxSteps(opts.max_steps));
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining * (1.0 - 1e-12);
        if last {
            h = remaining;
        }
        if h < h_min {
            return Err(IntegratorError::StepSizeUnderflow { t, h });
        }
        let hs = dir * h;
        let k2 = sys.rhs(t + C2 * hs, &lin(&x, hs, &[(A21, &k1)]));
        let k3 = sys.rhs(t + C3 * hs, &lin(&x, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = sys.rhs(t + C4 * hs, &lin(&x, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = sys.rhs(
            t + C5 * hs,
            &lin(&x, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = sys.rhs(
            t + hs,
            &lin(&x, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let xn = lin(&x, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let tn = if last { t1 } else { t + hs };
        let k7 = sys.rhs(tn, &xn);
        stats.rhs_evals += 6;
        let mut e = [0.0; N];
        for i in 0..N {
            e[i] = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = rms_norm(&e, &x, &xn, rel, abs);
        if !err.is_finite() {
            h *= 0.1;
            stats.rejected += 1;
            last_rejected = true;
            continue;
        }
        let fac11 = err.powf(0.17);
        if err <= 1.0 {
            // dense output coefficients
            let mut r1 = [0.0; N];
            let mut r2 = [0.0; N];
            let mut r3 = [0.0; N];
            let mut r4 = [0.0; N];
            for i in 0..N {
                let ydiff = xn[i] - x[i];
                let bspl = hs * k1[i] - ydiff;
                r1[i] = ydiff;
                r2[i] = bspl;
                r3[i] = ydiff - hs * k7[i] - bspl;
                r4[i] = hs
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            while si < samples.len() && dir * (samples[si] - tn) <= 0.0 {
                let th = (samples[si] - t) / hs;
                let th1 = 1.0 - th;
                let mut y = [0.0; N];
                for i in 0..N {
                    y[i] = x[i] + th * (r1[i] + th1 * (r2[i] + th * (r3[i] + th1 * r4[i])));
                }
                if samples[si] == tn {
                    y = xn;
                }
                if let Some(proj) = opts.projection {
                    proj(&mut y);
                }
                out_t.push(samples[si]);
                out_x.push(y);
                si += 1;
            }
            stats.steps += 1;
            t = tn;
            x = xn;
            if let Some(proj) = opts.projection {
                proj(&mut x);
                k1 = sys.rhs(t, &x);
                stats.rhs_evals += 1;
            } else {
                k1 = k7;
            }
            if !x.iter().all(|v| v.is_finite()) {
                return Err(IntegratorError::NonFinite(t));
            }
            if last {
                break;
            }
            let fac = (fac11 / facold.powf(0.04) / 0.9).clamp(0.1, 5.0);
            let mut hnew = h / fac;
            if last_rejected {
                hnew = hnew.min(h);
            }
            facold = err.max(1e-4);
            last_rejected = false;
            h = hnew;
        } else {
            h /= (fac11 / 0.9).min(5.0);
            stats.rejected += 1;
            last_rejected = true;
        }
    }
    Ok(Solution { t: out_t, x: out_x, stats })
}

/// `n + 1` equispaced sample times from `t0` to `t1` inclusive.
pub fn uniform_samples(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|k| if k == n { t1 } else { t0 + (t1 - t0) * k as f64 / n as f64 }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyState {
    pub omega1: f64,
    pub omega2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
}

impl BodyState {
    pub fn new(omega1: f64, omega2: f64, gamma1: f64, gamma2: f64, gamma3: f64) -> Self {
        BodyState { omega1, omega2, gamma1, gamma2, gamma3 }
    }
    pub fn to_array(&self) -> [f64; 5] {
        [self.omega1, self.omega2, self.gamma1, self.gamma2, self.gamma3]
    }
    pub fn from_array(a: &[f64; 5]) -> Self {
        BodyState::new(a[0], a[1], a[2], a[3], a[4])
    }
    pub fn gamma(&self) -> [f64; 3] {
        [self.gamma1, self.gamma2, self.gamma3]
    }
    /// Geometric integral `|γ|²`.
    pub fn f2(&self) -> f64 {
        self.gamma1 * self.gamma1 + self.gamma2 * self.gamma2 + self.gamma3 * self.gamma3
    }
}

impl SwapSymmetry for BodyState {
    fn swapped(&self) -> Self {
        BodyState::new(-self.omega2, -self.omega1, self.gamma2, self.gamma1, self.gamma3)
    }
}

/// Euler–Poisson vector field in one of its two parametrizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Dynamics {
    Tensor(InertiaTensor),
    /// Special family with `I13 = 0`, parameters `(p, d)`.
    Special { p: f64, d: f64 },
}

impl Dynamics {
    /// Energy: `I11 ω1² + I22 ω2²` or `(d² + 1) ω1² + ω2²`.
    pub fn f1(&self, x: &BodyState) -> f64 {
        match self {
            Dynamics::Tensor(i) => i.i11 * x.omega1 * x.omega1 + i.i22 * x.omega2 * x.omega2,
            Dynamics::Special { d, .. } => (d * d + 1.0) * x.omega1 * x.omega1 + x.omega2 * x.omega2,
        }
    }
}

impl OdeSystem<5> for Dynamics {
    fn rhs(&self, _t: f64, x: &[f64; 5]) -> [f64; 5] {
        euler_poisson_rhs(&BodyState::from_array(x), self).to_array()
    }
}

pub fn euler_poisson_rhs(x: &BodyState, dynamics: &Dynamics) -> BodyState {
    let (w1, w2) = (x.omega1, x.omega2);
    let (dw1, dw2) = match dynamics {
        Dynamics::Tensor(i) => {
            let l = i.i13 * w1 + i.i23 * w2;
            (i.i22 * l * w2, -i.i11 * l * w1)
        }
        Dynamics::Special { p, d } => (d / (p * (d * d + 1.0)) * w2 * w2, -d / p * w1 * w2),
    };
    let [g1, g2, g3] = poisson_step(w1, w2, &x.gamma());
    BodyState::new(dw1, dw2, g1, g2, g3)
}

fn poisson_step(w1: f64, w2: f64, g: &[f64; 3]) -> [f64; 3] {
    [-w2 * g[2], w1 * g[2], w2 * g[0] - w1 * g[1]]
}

/// Poisson equations along the closed-form `ω(t)`.
pub fn poisson_rhs_timedep(t: f64, gamma: &[f64; 3], params: &SuslovParams) -> [f64; 3] {
    let (w1, w2) = omega_general(t, params);
    poisson_step(w1, w2, gamma)
}

/// Poisson system driven by an arbitrary `ω(t)`.
pub struct DrivenPoisson<F: Fn(f64) -> (f64, f64)>(pub F);

impl<F: Fn(f64) -> (f64, f64)> OdeSystem<3> for DrivenPoisson<F> {
    fn rhs(&self, t: f64, g: &[f64; 3]) -> [f64; 3] {
        let (w1, w2) = (self.0)(t);
        poisson_step(w1, w2, g)
    }
}

impl OdeSystem<3> for OmegaSolution {
    fn rhs(&self, t: f64, g: &[f64; 3]) -> [f64; 3] {
        let (w1, w2) = self.eval(t);
        poisson_step(w1, w2, g)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub t: f64,
    pub state: BodyState,
    pub f1: f64,
    pub f2: f64,
    pub f3: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    /// In integration order (decreasing `t` for backward runs).
    pub samples: Vec<Sample>,
    pub stats: Stats,
}

impl Trajectory {
    pub fn attach_f3(&mut self, f3: impl Fn(&BodyState) -> f64) {
        for s in &mut self.samples {
            s.f3 = Some(f3(&s.state));
        }
    }
    pub fn has_f3(&self) -> bool {
        self.samples.first().is_some_and(|s| s.f3.is_some())
    }
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }
}

/// Integrates the Euler–Poisson system with `n_samples + 1` equispaced outputs.
pub fn integrate(
    dynamics: &Dynamics,
    x0: BodyState,
    t0: f64,
    t1: f64,
    n_samples: usize,
    opts: &Options<'_, 5>,
) -> Result<Trajectory, IntegratorError> {
    let times = uniform_samples(t0, t1, n_samples);
    let sol = solve(dynamics, t0, x0.to_array(), t1, &times, opts)?;
    let samples = sol
        .t
        .iter()
        .zip(&sol.x)
        .map(|(&t, a)| {
            let state = BodyState::from_array(a);
            Sample { t, f1: dynamics.f1(&state), f2: state.f2(), f3: None, state }
        })
        .collect();
    Ok(Trajectory { samples, stats: sol.stats })
}

/// Normalizes `γ` to the unit sphere; usable as [`Options::projection`].
pub fn project_unit_gamma(x: &mut [f64; 5]) {
    let n = (x[2] * x[2] + x[3] * x[3] + x[4] * x[4]).sqrt();
    if n > 0.0 {
        for v in &mut x[2..] {
            *v /= n;
        }
    }
}

pub type NamedIntegral<'a> = (&'a str, &'a dyn Fn(&BodyState) -> f64);

/// Maximum `|F(x(t)) − F(x(t0))|` over the samples, per integral.
pub fn conservation_report(traj: &Trajectory, integrals: &[NamedIntegral<'_>]) -> Vec<(String, f64)> {
    integrals
        .iter()
        .map(|(name, f)| {
            let f0 = traj.samples.first().map(|s| f(&s.state)).unwrap_or(0.0);
            let drift = traj.samples.iter().map(|s| (f(&s.state) - f0).abs()).fold(0.0, f64::max);
            (name.to_string(), drift)
        })
        .collect()
}
