//! Explicit meromorphic solutions of the Poisson equations for odd `p` along
//! `ω = (a tanh t, −a c sech t)`, `a = p/d`, `c = √(d²+1)`.

use crate::hyper::{f1_polynomial, f23_polynomials, odd_integer, Branch};
use crate::jet::Jet;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeroError {
    #[error("odd positive integer p required, got {0}")]
    ParityError(f64),
    #[error("t = {0} is a pole")]
    PoleHit(Complex64),
    #[error("t = 0 requires the limit routine")]
    EvaluationAtZero,
    #[error("fixtures exist for p in {{1, 3}}, got {0}")]
    UnsupportedP(f64),
    #[error("d must be positive, got {0}")]
    InvalidD(f64),
    #[error("degenerate normalization")]
    Degenerate,
}

/// Jet order used for completion.
pub const JET_ORDER: usize = 24;
type J = Jet<JET_ORDER>;

/// Radius around `t = 0` inside which completion uses the removable limit.
const LIMIT_RADIUS: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormKind {
    /// `γ1 = tanh t · ℱ1(sech² t)`.
    Symmetric,
    /// `e^{±ipt/d} Σ b_k e^{(2k+1−p)t} / (2 cosh t)^p`.
    Rotating(Branch),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gamma1Form {
    pub kind: FormKind,
    pub coeffs: Vec<Complex64>,
    pub p: i64,
    pub d: f64,
}

fn check(p: f64, d: f64) -> Result<i64, MeroError> {
    if !(d > 0.0) {
        return Err(MeroError::InvalidD(d));
    }
    odd_integer(p).ok_or(MeroError::ParityError(p))
}

/// `a_k = 4^k c_k` with `c_k` the coefficients of the truncated `ℱ1`.
pub fn ak_coefficients(p: f64, d: f64) -> Result<Vec<f64>, MeroError> {
    check(p, d)?;
    let c = f1_polynomial(p, d).map_err(|_| MeroError::ParityError(p))?;
    Ok(c.iter().enumerate().map(|(k, v)| 4f64.powi(k as i32) * v).collect())
}

/// Coefficients `b_0..b_{p−1}` of `F·F̂` with the `+` parameters.
pub fn bk_coefficients(p: f64, d: f64) -> Result<Vec<Complex64>, MeroError> {
    check(p, d)?;
    f23_polynomials(p, d, Branch::Plus).map_err(|_| MeroError::ParityError(p))
}

impl Gamma1Form {
    pub fn symmetric(p: f64, d: f64) -> Result<Self, MeroError> {
        let n = check(p, d)?;
        let coeffs = ak_coefficients(p, d)?.into_iter().map(|a| Complex64::new(a, 0.0)).collect();
        Ok(Gamma1Form { kind: FormKind::Symmetric, coeffs, p: n, d })
    }

    pub fn rotating(p: f64, d: f64, branch: Branch) -> Result<Self, MeroError> {
        let n = check(p, d)?;
        let mut coeffs = bk_coefficients(p, d)?;
        if branch == Branch::Minus {
            coeffs.iter_mut().for_each(|c| *c = c.conj());
        }
        Ok(Gamma1Form { kind: FormKind::Rotating(branch), coeffs, p: n, d })
    }

    fn pole_check(t: Complex64) -> Result<(), MeroError> {
        let m = ((t.im - PI / 2.0) / PI).round();
        if t.re.abs() <= 1e-12 && (t.im - PI / 2.0 - m * PI).abs() <= 1e-12 {
            return Err(MeroError::PoleHit(t));
        }
        Ok(())
    }

    /// Taylor jet of `γ1` at `t0`.
    pub fn jet<const N: usize>(&self, t0: Complex64) -> Jet<N> {
        let s = if t0.re < 0.0 { -1.0 } else { 1.0 };
        let t = Jet::<N>::var(t0);
        let u = (t * (-2.0 * s)).exp();
        let onepu = u + 1.0;
        match self.kind {
            FormKind::Symmetric => {
                // (sech t / 2)² = (e^{−st}/(1+u))²
                let q = (t * (-s)).exp() / onepu;
                let q2 = q * q;
                let mut sum = Jet::<N>::constant(Complex64::new(0.0, 0.0));
                for c in self.coeffs.iter().rev() {
                    sum = sum * q2 + *c;
                }
                let th = (u * (-1.0) + 1.0) / onepu * s;
                th * sum
            }
            FormKind::Rotating(b) => {
                let p = self.p as f64;
                let phase = (t * Complex64::new(0.0, b.sign() * p / self.d)).exp();
                let mut sum = Jet::<N>::constant(Complex64::new(0.0, 0.0));
                for (k, c) in self.coeffs.iter().enumerate() {
                    let e = (2 * k) as f64 + 1.0 - p - p * s;
                    sum = sum + (t * e).exp() * *c;
                }
                phase * sum / onepu.powi(self.p as i32)
            }
        }
    }

    pub fn eval(&self, t: Complex64) -> Result<Complex64, MeroError> {
        Self::pole_check(t)?;
        Ok(self.jet::<1>(t).value())
    }
}

pub fn gamma1_eval(form: &Gamma1Form, t: Complex64) -> Result<Complex64, MeroError> {
    form.eval(t)
}

/// Jets of `ω1 = a tanh t` and `ω2 = −a c sech t`.
pub fn omega_jets<const N: usize>(p: f64, d: f64, t0: Complex64) -> (Jet<N>, Jet<N>) {
    let (a, c) = (p / d, (d * d + 1.0).sqrt());
    let s = if t0.re < 0.0 { -1.0 } else { 1.0 };
    let t = Jet::<N>::var(t0);
    let u = (t * (-2.0 * s)).exp();
    let onepu = u + 1.0;
    let th = (u * (-1.0) + 1.0) / onepu * s;
    let sh = (t * (-s)).exp() / onepu * 2.0;
    (th * a, sh * (-a * c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionMode {
    /// Removable singularity of `γ2` at `t = 0` resolved by series division.
    Limit,
    /// Plain division; fails at `t = 0`.
    Direct,
}

/// Jets of `(γ1, γ2, γ3)` with `γ3 = −γ̇1/ω2` and `γ2 = (ω2 γ1 − γ̇3)/ω1`.
/// Jets at `t0 = 0` use the removable quotient; the top orders are lost.
pub fn complete_gamma_jets(form: &Gamma1Form, t0: Complex64, mode: CompletionMode) -> Result<[J; 3], MeroError> {
    Gamma1Form::pole_check(t0)?;
    let p = form.p as f64;
    let g1 = form.jet::<JET_ORDER>(t0);
    let (w1, w2) = omega_jets::<JET_ORDER>(p, form.d, t0);
    let g3 = -(g1.diff() / w2);
    let num = w2 * g1 - g3.diff();
    let g2 = if w1.value().norm() == 0.0 {
        match mode {
            CompletionMode::Limit => num.div_removable(&w1, 1e-14),
            CompletionMode::Direct => return Err(MeroError::EvaluationAtZero),
        }
    } else {
        num / w1
    };
    Ok([g1, g2, g3])
}

/// Values and first derivatives of the completed triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaPoint {
    pub value: [Complex64; 3],
    pub derivative: [Complex64; 3],
}

pub fn complete_gamma(form: &Gamma1Form, t: Complex64, mode: CompletionMode) -> Result<GammaPoint, MeroError> {
    Gamma1Form::pole_check(t)?;
    let (t0, h) = if mode == CompletionMode::Limit && t.norm() < LIMIT_RADIUS {
        (Complex64::new(0.0, 0.0), t)
    } else {
        (t, Complex64::new(0.0, 0.0))
    };
    let jets = complete_gamma_jets(form, t0, mode)?;
    let mut value = [Complex64::new(0.0, 0.0); 3];
    let mut derivative = value;
    for k in 0..3 {
        let j = if h == Complex64::new(0.0, 0.0) { jets[k] } else { jets[k].shift(h) };
        value[k] = j.0[0];
        derivative[k] = j.0[1];
    }
    Ok(GammaPoint { value, derivative })
}

/// Residual of `γ̇ = γ × ω` (`ω3 = 0`) at a completed point.
pub fn poisson_residual(p: f64, d: f64, t: f64, pt: &GammaPoint) -> f64 {
    let (a, c) = (p / d, (d * d + 1.0).sqrt());
    let (w1, w2) = crate::closed_form::omega_special(t, a, c);
    let [g1, g2, g3] = pt.value;
    let r = [
        pt.derivative[0] + g3 * w2,
        pt.derivative[1] - g3 * w1,
        pt.derivative[2] - (g1 * w2 - g2 * w1),
    ];
    r.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Real orthonormal triple: `γ^{(1)}` from the symmetric form and the real
/// and imaginary parts of the normalized rotating solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealBasis {
    pub p: i64,
    pub d: f64,
    pub branch: Branch,
    symmetric: Gamma1Form,
    rotating: Gamma1Form,
    scale: Complex64,
}

impl RealBasis {
    /// Normalized so that `Γ1(0)` is real positive and `|Γ|² = 2`.
    pub fn new(p: f64, d: f64, branch: Branch) -> Result<Self, MeroError> {
        let symmetric = Gamma1Form::symmetric(p, d)?;
        let rotating = Gamma1Form::rotating(p, d, branch)?;
        let g0 = complete_gamma(&rotating, Complex64::new(0.0, 0.0), CompletionMode::Limit)?.value;
        let h: f64 = g0.iter().map(|z| z.norm_sqr()).sum();
        if !(h > 0.0) || g0[0].norm() == 0.0 {
            return Err(MeroError::Degenerate);
        }
        let scale = (2.0 / h).sqrt() * g0[0].conj() / g0[0].norm();
        Ok(RealBasis { p: symmetric.p, d, branch, symmetric, rotating, scale })
    }

    /// Rows `γ^{(1)}, γ^{(2)}, γ^{(3)}` at real `t`.
    pub fn eval(&self, t: f64) -> Result<[[f64; 3]; 3], MeroError> {
        Ok(self.eval_with_derivative(t)?.0)
    }

    pub fn eval_with_derivative(&self, t: f64) -> Result<([[f64; 3]; 3], [[f64; 3]; 3]), MeroError> {
        let tc = Complex64::new(t, 0.0);
        let s = complete_gamma(&self.symmetric, tc, CompletionMode::Limit)?;
        let r = complete_gamma(&self.rotating, tc, CompletionMode::Limit)?;
        let mut v = [[0.0; 3]; 3];
        let mut dv = [[0.0; 3]; 3];
        for k in 0..3 {
            let z = r.value[k] * self.scale;
            let dz = r.derivative[k] * self.scale;
            v[0][k] = s.value[k].re;
            v[1][k] = z.re;
            v[2][k] = z.im;
            dv[0][k] = s.derivative[k].re;
            dv[1][k] = dz.re;
            dv[2][k] = dz.im;
        }
        Ok((v, dv))
    }
}

/// Inner products `⟨γ^{(i)}, γ^{(j)}⟩`.
pub fn gram_matrix(solutions: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = (0..3).map(|k| solutions[i][k] * solutions[j][k]).sum();
        }
    }
    g
}

/// Closed-form orthonormal triples for `p ∈ {1, 3}` in hyperbolic and
/// trigonometric functions.
pub fn fixture(p: f64, d: f64, t: f64) -> Result<[[f64; 3]; 3], MeroError> {
    if !(d > 0.0) {
        return Err(MeroError::InvalidD(d));
    }
    let c = (d * d + 1.0).sqrt();
    let th = t.tanh();
    let sh = crate::closed_form::sech(t);
    if p == 1.0 {
        let (cs, sn) = ((t / d).cos(), (t / d).sin());
        return Ok([
            [th, -sh / c, d * sh / c],
            [cs * sh, (cs * th - d * sn) / c, -(d * cs * th + sn) / c],
            [sn * sh, (sn * th + d * cs) / c, -(d * sn * th - cs) / c],
        ]);
    }
    if p == 3.0 {
        let d2 = d * d;
        let al = 1.0 / (c * (d2 + 9.0));
        let s2 = sh * sh;
        let (cs, sn) = ((3.0 * t / d).cos(), (3.0 * t / d).sin());
        // cosh 2t / cosh² t = 1 + tanh² t
        let ch = 1.0 + th * th;
        let g1 = [
            al * c * (9.0 + d2 - 4.0 * d2 * s2) * th,
            al * (4.0 * d2 * s2 - 9.0 * (d2 + 1.0)) * sh,
            al * d * (3.0 * (d2 + 1.0) - 4.0 * d2 * s2) * sh,
        ];
        let k1 = d2 * (6.0 * ch - 10.0 * s2) - 36.0;
        let g2 = [
            -al * c / 4.0 * sh * (k1 * cs + 48.0 * d * th * sn),
            al / 2.0
                * (d * ((d2 - 15.0) * ch + (9.0 + d2) * s2) * sn
                    + th * ((9.0 - 7.0 * d2) * ch + (9.0 + d2) * s2) * cs),
            al / 2.0
                * (((7.0 * d2 - 9.0) * ch - (9.0 + 17.0 * d2) * s2) * sn
                    + d * th * ((d2 - 15.0) * ch - (15.0 + 7.0 * d2) * s2) * cs),
        ];
        let g3 = [
            al * c / 4.0 * sh * (k1 * sn - 48.0 * d * th * cs),
            al / 2.0
                * (d * ((d2 - 15.0) * ch + (9.0 + d2) * s2) * cs
                    + th * ((7.0 * d2 - 9.0) * ch - (9.0 + d2) * s2) * sn),
            -al / 2.0
                * (((9.0 - 7.0 * d2) * ch + (9.0 + 17.0 * d2) * s2) * cs
                    + d * th * ((d2 - 15.0) * ch - (15.0 + 7.0 * d2) * s2) * sn),
        ];
        return Ok([g1, g2, g3]);
    }
    Err(MeroError::UnsupportedP(p))
}

/// Orientation of the rotating pair in the closed-form fixtures.
pub fn fixture_branch(p: f64) -> Branch {
    if p == 3.0 {
        Branch::Minus
    } else {
        Branch::Plus
    }
}
