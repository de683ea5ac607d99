//! Generalized hypergeometric series, the third-order reduction of the
//! Poisson equations, its polynomial solutions for odd `p`, the quadratic and
//! product transformations, and the monodromy around `z = 1`.

use crate::algebra::{ComplexField, Field};
use crate::integrator::{solve, DrivenPoisson, Options};
use crate::jet::Jet;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

pub const MAX_TERMS: usize = 1_000_000;
const INT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HGError {
    #[error("denominator parameter {0} is a nonpositive integer")]
    PoleInDenominator(Complex64),
    #[error("series does not converge at z = {0} (|z| >= 1 or term cap reached)")]
    NoConvergence(Complex64),
    #[error("polynomial form requires odd positive integer p, got {0}")]
    ParityError(f64),
    #[error("branch point at y = {0}")]
    BranchPoint(Complex64),
    #[error("resonant parameters: a denominator sine vanishes")]
    ResonantParameters,
    #[error("d must be positive, got {0}")]
    InvalidD(f64),
    #[error("integration failed: {0}")]
    Integration(String),
}

/// Nonpositive integer `-n` within tolerance, as `n`.
fn nonpositive_integer(a: Complex64) -> Option<u64> {
    if a.im.abs() <= INT_TOL && a.re <= INT_TOL && (a.re - a.re.round()).abs() <= INT_TOL {
        Some((-a.re.round()) as u64)
    } else {
        None
    }
}

/// Odd positive integer test for `p`.
pub fn odd_integer(p: f64) -> Option<i64> {
    let r = p.round();
    if (p - r).abs() <= 1e-12 && r > 0.0 && (r as i64) % 2 == 1 {
        Some(r as i64)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HGSpec {
    pub alpha: Vec<Complex64>,
    pub beta: Vec<Complex64>,
}

impl HGSpec {
    pub fn new(alpha: Vec<Complex64>, beta: Vec<Complex64>) -> Result<Self, HGError> {
        if let Some(b) = beta.iter().find(|b| nonpositive_integer(**b).is_some()) {
            return Err(HGError::PoleInDenominator(*b));
        }
        Ok(HGSpec { alpha, beta })
    }

    pub fn real(alpha: &[f64], beta: &[f64]) -> Result<Self, HGError> {
        Self::new(
            alpha.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
            beta.iter().map(|&b| Complex64::new(b, 0.0)).collect(),
        )
    }

    /// `₂F₁(a, b; c)`.
    pub fn gauss(a: Complex64, b: Complex64, c: Complex64) -> Result<Self, HGError> {
        Self::new(vec![a, b], vec![c])
    }

    /// Degree of the terminating series, if any.
    pub fn terminates_at(&self) -> Option<u64> {
        self.alpha.iter().filter_map(|a| nonpositive_integer(*a)).min()
    }

    /// Parameters of the `k`-th derivative, and the factor `Π(α)_k / Π(β)_k`.
    pub fn shifted(&self, k: usize) -> (HGSpec, Complex64) {
        let kf = k as f64;
        let mut f = Complex64::new(1.0, 0.0);
        for a in &self.alpha {
            f *= pochhammer(*a, k);
        }
        for b in &self.beta {
            f /= pochhammer(*b, k);
        }
        let s = HGSpec {
            alpha: self.alpha.iter().map(|a| a + kf).collect(),
            beta: self.beta.iter().map(|b| b + kf).collect(),
        };
        (s, f)
    }
}

/// Rising factorial `(a)_k = a(a+1)⋯(a+k−1)`, `(a)_0 = 1`.
pub fn pochhammer<T: Field>(a: T, k: usize) -> T {
    let mut r = T::one();
    let mut x = a;
    for _ in 0..k {
        r = r * x.clone();
        x = x + T::one();
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub error: f64,
    pub terms: usize,
}

/// Thomae series `ₙF_{n−1}(α; β; z)`.
pub fn pfq(spec: &HGSpec, z: Complex64, tol: f64) -> Result<SeriesValue, HGError> {
    let term_limit = spec.terminates_at();
    if term_limit.is_none() && z.norm() >= 1.0 {
        return Err(HGError::NoConvergence(z));
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut small = 0;
    let cap = term_limit.map(|n| n as usize).unwrap_or(MAX_TERMS);
    let mut k = 0usize;
    while k < cap {
        let kf = k as f64;
        let mut r = z / (kf + 1.0);
        for a in &spec.alpha {
            r *= a + kf;
        }
        for b in &spec.beta {
            r /= b + kf;
        }
        term *= r;
        sum += term;
        k += 1;
        if term_limit.is_none() {
            if term.norm() <= tol * sum.norm() {
                small += 1;
                if small >= 3 {
                    let rz = z.norm();
                    let err = term.norm() * (rz / (1.0 - rz)).max(1.0);
                    return Ok(SeriesValue { value: sum, error: err, terms: k + 1 });
                }
            } else {
                small = 0;
            }
        }
    }
    if term_limit.is_some() {
        Ok(SeriesValue { value: sum, error: 0.0, terms: k + 1 })
    } else {
        Err(HGError::NoConvergence(z))
    }
}

/// `k`-th derivative in `z` via shifted parameters.
pub fn pfq_derivative(spec: &HGSpec, z: Complex64, k: usize, tol: f64) -> Result<Complex64, HGError> {
    if k == 0 {
        return Ok(pfq(spec, z, tol)?.value);
    }
    if let Some(n) = spec.terminates_at() {
        if k as u64 > n {
            return Ok(Complex64::new(0.0, 0.0));
        }
    }
    let (s, f) = spec.shifted(k);
    Ok(f * pfq(&s, z, tol)?.value)
}

/// Series terms built from Pochhammer products over any field.
pub fn pfq_terms_exact<T: Field>(alpha: &[T], beta: &[T], z: &T, n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    let mut zk = T::one();
    let mut fact = T::one();
    for k in 0..n {
        if k > 0 {
            zk = zk * z.clone();
            fact = fact * T::from_i64(k as i64);
        }
        let mut num = zk.clone();
        for a in alpha {
            num = num * pochhammer(a.clone(), k);
        }
        let mut den = fact.clone();
        for b in beta {
            den = den * pochhammer(b.clone(), k);
        }
        out.push(num / den);
    }
    out
}

/// `₂F₁` shorthand.
pub fn f21(a: Complex64, b: Complex64, c: Complex64, z: Complex64, tol: f64) -> Result<Complex64, HGError> {
    Ok(pfq(&HGSpec::gauss(a, b, c)?, z, tol)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Parameters of the split representation for one branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub kappa: Complex64,
    /// Exponent `(d ± ip)/(2d)` of `y`.
    pub exponent: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuslovHGParams {
    pub p: f64,
    pub d: f64,
    pub alpha: [Complex64; 3],
    pub beta: [Complex64; 2],
    pub plus: BranchParams,
    pub minus: BranchParams,
}

impl SuslovHGParams {
    pub fn spec(&self) -> HGSpec {
        HGSpec { alpha: self.alpha.to_vec(), beta: self.beta.to_vec() }
    }

    pub fn branch(&self, b: Branch) -> &BranchParams {
        match b {
            Branch::Plus => &self.plus,
            Branch::Minus => &self.minus,
        }
    }
}

pub fn suslov_params(p: f64, d: f64) -> Result<SuslovHGParams, HGError> {
    if !(d > 0.0) {
        return Err(HGError::InvalidD(d));
    }
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let q = p / (2.0 * d);
    let branch = |s: f64| {
        let a = c((2.0 - p) / 2.0, s * q);
        let b = c((1.0 - p) / 2.0, 0.0);
        let cc = 1.0 + a - b;
        let alpha = c((2.0 - p) / 4.0, s * q / 2.0);
        let beta = c((2.0 + p) / 4.0, s * q / 2.0);
        BranchParams {
            a,
            b,
            c: cc,
            alpha,
            beta,
            gamma: alpha + beta + 0.5,
            kappa: 2.0 * d / (c(d, s * p) * c(3.0 * d, s * p)),
            exponent: c(0.5, s * q),
        }
    };
    Ok(SuslovHGParams {
        p,
        d,
        alpha: [c(0.5, 0.0), c((1.0 + p) / 2.0, 0.0), c((1.0 - p) / 2.0, 0.0)],
        beta: [c(0.5, -q), c(0.5, q)],
        plus: branch(1.0),
        minus: branch(-1.0),
    })
}

/// Coefficients of `ℱ1` in powers of `z` over any field, given `p` and `d²`;
/// `n + 1` terms.
///
/// `c_j = (2j−1)!!/(2j)!! · Π_{m=1..j} d²((2m−1)² − p²) / ((2m−1)² d² + p²)`.
pub fn f1_coefficients_generic<T: Field>(p: &T, d2: &T, n: usize) -> Vec<T> {
    let mut out = vec![T::one()];
    let mut c = T::one();
    let p2 = p.clone() * p.clone();
    for j in 1..=n {
        let o = T::from_i64(2 * j as i64 - 1);
        let o2 = o.clone() * o.clone();
        // (2j−1)/(2j) from the double-factorial ratio
        c = c * o / T::from_i64(2 * j as i64);
        c = c * d2.clone() * (o2.clone() - p2.clone()) / (o2 * d2.clone() + p2.clone());
        out.push(c.clone());
    }
    out
}

/// Polynomial `ℱ1` for odd `p`, ascending in `z`.
pub fn f1_polynomial(p: f64, d: f64) -> Result<Vec<f64>, HGError> {
    let n = odd_integer(p).ok_or(HGError::ParityError(p))?;
    Ok(f1_coefficients_generic(&(n as f64), &(d * d), ((n - 1) / 2) as usize))
}

/// `ℱ1(z) = ₃F₂(1/2, (1+p)/2, (1−p)/2; (d−ip)/(2d), (d+ip)/(2d); z)`.
pub fn f1_series(p: f64, d: f64, z: f64, tol: f64) -> Result<f64, HGError> {
    Ok(pfq(&suslov_params(p, d)?.spec(), Complex64::new(z, 0.0), tol)?.value.re)
}

/// Both sides of `₂F₁(a/2, a/2+1/2−b; 1+a−b; 4y/(1+y)²) = (1+y)^a ₂F₁(a, b; 1+a−b; −y)`.
pub fn quadratic_transform(
    a: Complex64,
    b: Complex64,
    y: Complex64,
    tol: f64,
) -> Result<(Complex64, Complex64), HGError> {
    let c = 1.0 + a - b;
    let x = 4.0 * y / ((1.0 + y) * (1.0 + y));
    let lhs = f21(a / 2.0, a / 2.0 + 0.5 - b, c, x, tol)?;
    let rhs = (1.0 + y).powc(a) * f21(a, b, c, -y, tol)?;
    Ok((lhs, rhs))
}

/// Both sides of `₃F₂(2α, 2β, α+β; 2α+2β−1, α+β+1/2; x) = F(α,β;γ;x)·F(α,β;γ−1;x)`.
pub fn split_3f2(
    alpha: Complex64,
    beta: Complex64,
    x: Complex64,
    tol: f64,
) -> Result<(Complex64, Complex64), HGError> {
    let spec = HGSpec::new(
        vec![2.0 * alpha, 2.0 * beta, alpha + beta],
        vec![2.0 * alpha + 2.0 * beta - 1.0, alpha + beta + 0.5],
    )?;
    let lhs = pfq(&spec, x, tol)?.value;
    let g = alpha + beta + 0.5;
    let rhs = f21(alpha, beta, g, x, tol)? * f21(alpha, beta, g - 1.0, x, tol)?;
    Ok((lhs, rhs))
}

/// `F(α, β; γ−1; z) = F + z F′/(γ − 1)` with `F = F(α, β; γ; z)`.
pub fn contiguous_lower_gamma(
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    z: Complex64,
    tol: f64,
) -> Result<Complex64, HGError> {
    if nonpositive_integer(gamma - 1.0).is_some() {
        return Err(HGError::PoleInDenominator(gamma - 1.0));
    }
    let spec = HGSpec::gauss(alpha, beta, gamma)?;
    let f = pfq(&spec, z, tol)?.value;
    let df = pfq_derivative(&spec, z, 1, tol)?;
    Ok(f + z * df / (gamma - 1.0))
}

fn is_near(y: Complex64, w: f64) -> bool {
    (y - w).norm() <= 1e-14
}

/// `ℱ2` (branch `+`) or `ℱ3` (branch `−`) in the variable `y = e^{2t}`:
/// `κ±/((1+y)^{p−1}(y−1)) · y^{(d±ip)/(2d)} · F(a±,b±;c±;−y) · F̂(a±,b±;c±;−y)`.
pub fn f23(p: f64, d: f64, y: Complex64, branch: Branch, tol: f64) -> Result<Complex64, HGError> {
    if is_near(y, 0.0) || is_near(y, 1.0) || is_near(y, -1.0) {
        return Err(HGError::BranchPoint(y));
    }
    let prm = suslov_params(p, d)?;
    let bp = prm.branch(branch);
    let spec = HGSpec::gauss(bp.a, bp.b, bp.c)?;
    let f = pfq(&spec, -y, tol)?.value;
    let dfdy = -pfq_derivative(&spec, -y, 1, tol)?;
    let s = branch.sign();
    let fhat = (d * (p - 1.0) * y - Complex64::new(d, s * p)) * f - 2.0 * d * y * (y + 1.0) * dfdy;
    Ok(bp.kappa / ((1.0 + y).powf(p - 1.0) * (y - 1.0)) * y.powc(bp.exponent) * f * fhat)
}

/// Coefficients (ascending in `y`) of `F(a,b;c;−y)` and `F̂(a,b;c;−y)` for odd
/// `p`, over any complex field with real `d`.
pub fn f23_factor_polynomials<T: ComplexField>(p: i64, d: &T, branch: Branch) -> (Vec<T>, Vec<T>) {
    let n = ((p - 1) / 2) as usize;
    let pt = T::from_i64(p);
    let two = T::from_i64(2);
    let sgn = T::from_i64(branch.sign() as i64);
    let ip = T::i() * pt.clone() * sgn;
    let a = (T::from_i64(2) - pt.clone()) / two.clone() + ip.clone() / (two.clone() * d.clone());
    let b = (T::one() - pt.clone()) / two.clone();
    let c = T::from_ratio(3, 2) + ip.clone() / (two * d.clone());
    // g_k: coefficient of y^k in F(a,b;c;−y)
    let mut g = Vec::with_capacity(n + 1);
    let mut cur = T::one();
    for k in 0..=n {
        if k > 0 {
            let km = T::from_i64(k as i64 - 1);
            cur = -(cur * (a.clone() + km.clone()) * (b.clone() + km.clone()))
                / ((c.clone() + km) * T::from_i64(k as i64));
        }
        g.push(cur.clone());
    }
    // F̂ = [d(p−1)y − d ∓ ip]F − 2d y(y+1)F′, coefficientwise
    let mut h = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let kt = T::from_i64(k as i64);
        let mut v = -(T::from_i64(2) * d.clone() * kt.clone() + d.clone() + ip.clone()) * g[k].clone();
        if k > 0 {
            v = v + d.clone() * (pt.clone() + T::one() - T::from_i64(2) * kt) * g[k - 1].clone();
        }
        h.push(v);
    }
    (g, h)
}

/// `P±(y) = F·F̂`, degree `p − 1`, ascending in `y`.
pub fn f23_polynomials_generic<T: ComplexField>(p: i64, d: &T, branch: Branch) -> Vec<T> {
    let (g, h) = f23_factor_polynomials(p, d, branch);
    let mut out = vec![T::zero(); g.len() + h.len() - 1];
    for (i, gi) in g.iter().enumerate() {
        for (j, hj) in h.iter().enumerate() {
            out[i + j] = out[i + j].clone() + gi.clone() * hj.clone();
        }
    }
    out
}

pub fn f23_polynomials(p: f64, d: f64, branch: Branch) -> Result<Vec<Complex64>, HGError> {
    let n = odd_integer(p).ok_or(HGError::ParityError(p))?;
    Ok(f23_polynomials_generic(n, &Complex64::new(d, 0.0), branch))
}

/// `ℱ2,3` from the polynomial form for odd `p`.
pub fn f23_from_polynomial(p: f64, d: f64, y: Complex64, branch: Branch) -> Result<Complex64, HGError> {
    if is_near(y, 0.0) || is_near(y, 1.0) || is_near(y, -1.0) {
        return Err(HGError::BranchPoint(y));
    }
    let coeffs = f23_polynomials(p, d, branch)?;
    let bp = *suslov_params(p, d)?.branch(branch);
    let poly = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |s, c| s * y + c);
    Ok(bp.kappa / ((1.0 + y).powf(p - 1.0) * (y - 1.0)) * y.powc(bp.exponent) * poly)
}

/// `z(t) = 4/(e^t + e^{−t})² = sech² t`.
pub fn z_of_t(t: f64) -> f64 {
    let s = crate::closed_form::sech(t);
    s * s
}

/// Third-order equations for `γ1` in `t`, in `z`, and for `u = γ1/√(z−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedThirdOrder {
    pub p: f64,
    pub d: f64,
}

impl ReducedThirdOrder {
    pub fn new(p: f64, d: f64) -> Self {
        ReducedThirdOrder { p, d }
    }

    /// `(a0, a1, a2, a3)` multiplying `(γ⃛1, γ̈1, γ̇1, γ1)`.
    pub fn a_coeffs(&self, w1: f64, w2: f64) -> [f64; 4] {
        let (p, d) = (self.p, self.d);
        let c2 = d * d + 1.0;
        [
            c2 * p * p * w1,
            d * p * (2.0 * c2 * w1 * w1 - w2 * w2),
            c2 * w1 * ((d * d + p * p) * w1 * w1 + p * p * w2 * w2),
            -d * p * w2 * w2 * (c2 * w1 * w1 + w2 * w2),
        ]
    }

    /// `(b1, b2, b3)` of `γ1‴ + b1 γ1″ + b2 γ1′ + b3 γ1 = 0` in `z`.
    pub fn b_coeffs(&self, z: f64) -> [f64; 3] {
        let (p, d) = (self.p, self.d);
        let (p2, d2) = (p * p, d * d);
        let zz = (z - 1.0).powi(2) * z * z;
        [
            2.0 / z + 1.0 / (z - 1.0),
            (-p2 * (z - 1.0) + d2 * (1.0 + z * (-6.0 - p2 * (z - 1.0) + 4.0 * z))) / (4.0 * d2 * zz),
            (d2 + 1.0) * p2 / (8.0 * d2 * zz),
        ]
    }

    /// Coefficients of `u‴, u″, u′, u` in the hypergeometric form.
    pub fn u_coeffs(&self, z: f64) -> [f64; 4] {
        let (p2, d2) = (self.p * self.p, self.d * self.d);
        [
            z * z * (1.0 - z),
            0.5 * (4.0 - 9.0 * z) * z,
            0.25 * (1.0 + p2 / d2) + 0.25 * (p2 - 13.0) * z,
            (p2 - 1.0) / 8.0,
        ]
    }

    /// `u_coeffs` for complex `z`.
    pub fn u_coeffs_c(&self, z: Complex64) -> [Complex64; 4] {
        let (p2, d2) = (self.p * self.p, self.d * self.d);
        [
            z * z * (1.0 - z),
            0.5 * (4.0 - 9.0 * z) * z,
            0.25 * (1.0 + p2 / d2) + 0.25 * (p2 - 13.0) * z,
            Complex64::new((p2 - 1.0) / 8.0, 0.0),
        ]
    }
}

const BOUNDARY_SWITCH: f64 = -1.0;

/// `γ1(t)` of the solution with `γ(−∞) = (−1, 0, 0)` along
/// `ω = (a tanh t, −a c sech t)`.
///
/// Equals `tanh(t)·ℱ1(z)` for `t < 0`, and for all `t` when `p` is odd; for
/// other `p` and `t ≥ −1` the series data at `t = −1` are continued by
/// integrating the Poisson equations.
pub fn gamma1_boundary(t: f64, p: f64, d: f64) -> Result<f64, HGError> {
    let tol = 1e-16;
    if odd_integer(p).is_some() {
        let c = f1_polynomial(p, d)?;
        let z = z_of_t(t);
        return Ok(t.tanh() * c.iter().rev().fold(0.0, |s, x| s * z + x));
    }
    if t < BOUNDARY_SWITCH {
        return f1_series(p, d, z_of_t(t), tol).map(|f| t.tanh() * f);
    }
    let g0 = boundary_state(BOUNDARY_SWITCH, p, d, tol)?;
    if t == BOUNDARY_SWITCH {
        return Ok(g0[0]);
    }
    let (a, c) = (p / d, (d * d + 1.0).sqrt());
    let sys = DrivenPoisson(move |s: f64| crate::closed_form::omega_special(s, a, c));
    let sol = solve(&sys, BOUNDARY_SWITCH, g0, t, &[t], &Options::new(1e-13, 1e-13))
        .map_err(|e| HGError::Integration(e.to_string()))?;
    Ok(sol.x[0][0])
}

/// Full `γ` of the boundary solution at `t < 0` from the series.
pub fn boundary_state(t: f64, p: f64, d: f64, tol: f64) -> Result<[f64; 3], HGError> {
    type J = Jet<4>;
    let spec = suslov_params(p, d)?.spec();
    let (a, c) = (p / d, (d * d + 1.0).sqrt());
    let tj = J::var(Complex64::new(t, 0.0));
    // tanh and sech via u = e^{2t}
    let u = (tj * 2.0).exp();
    let th = (u + (-1.0)) / (u + 1.0);
    let sh = (tj.exp() * 2.0) / (u + 1.0);
    let z = sh * sh;
    let z0 = z.value();
    let dz = z + (-z0);
    let mut f = J::constant(Complex64::new(0.0, 0.0));
    let mut pow = J::real(1.0);
    let mut fact = 1.0;
    for k in 0..4 {
        if k > 0 {
            pow = pow * dz;
            fact *= k as f64;
        }
        let dk = pfq_derivative(&spec, z0, k, tol)?;
        f = f + pow * (dk / fact);
    }
    let g1 = th * f;
    let w1 = th * a;
    let w2 = sh * (-a * c);
    let g3 = -(g1.diff() / w2);
    let g2 = (w2 * g1 - g3.diff()) / w1;
    Ok([g1.value().re, g2.value().re, g3.value().re])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Monodromy {
    pub sigma1: Complex64,
    pub sigma2: Complex64,
    pub sigma3: Complex64,
    /// `−2i·exp(iπ(β1 + β2 − α1 − α2 − α3))`.
    pub prefactor: Complex64,
}

impl Monodromy {
    /// `lim_{t→+∞} γ1 = 1 + prefactor·σ1`.
    pub fn limit_gamma1(&self) -> f64 {
        (1.0 + self.prefactor * self.sigma1).re
    }
}

pub fn monodromy_sigmas(prm: &SuslovHGParams) -> Result<Monodromy, HGError> {
    let s = |x: Complex64| (x * PI).sin();
    let [a1, a2, a3] = prm.alpha;
    let [b1, b2] = prm.beta;
    let dens = [s(b1), s(b2), s(b1 - b2)];
    if dens.iter().any(|v| v.norm() < 1e-14) {
        return Err(HGError::ResonantParameters);
    }
    let sigma1 = s(a1) * s(a2) * s(a3) / (dens[0] * dens[1]);
    let sigma2 = -(s(b1 - a1) * s(b1 - a2) * s(b1 - a3)) / (dens[0] * dens[2]);
    let sigma3 = -(s(b2 - a1) * s(b2 - a2) * s(b2 - a3)) / (s(b2 - b1) * dens[1]);
    let e = Complex64::new(0.0, PI) * (b1 + b2 - a1 - a2 - a3);
    let prefactor = Complex64::new(0.0, -2.0) * e.exp();
    Ok(Monodromy { sigma1, sigma2, sigma3, prefactor })
}
