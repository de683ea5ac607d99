//! Inertia data, derived dynamical parameters, the swap symmetry and the
//! meromorphicity classifier.
//!
//! The constraint vector is `e3` and `I12 = 0`; tensors are normalized to
//! `det I = 1` by uniform rescaling.

use nalgebra::{Complex, Matrix5};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Absolute tolerance for the integer test on `p`.
pub const P_INTEGER_TOL: f64 = 1e-9;
/// Tolerance for `det I = 1`.
pub const DET_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("I13 = I23 = 0: the constraint axis is an eigenvector and all motions are equilibria")]
    DegenerateAxis,
    #[error("I11 = I22 with I13 = 0: d = 0, the special parametrization degenerates")]
    DegenerateBalance,
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("tensor is not positive definite (det = {0})")]
    NotPositiveDefinite(f64),
    #[error("eigenvalue computation failed")]
    Eigen,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertiaTensor {
    #[serde(rename = "I11")]
    pub i11: f64,
    #[serde(rename = "I22")]
    pub i22: f64,
    #[serde(rename = "I33")]
    pub i33: f64,
    #[serde(rename = "I13")]
    pub i13: f64,
    #[serde(rename = "I23")]
    pub i23: f64,
}

impl InertiaTensor {
    pub fn new(i11: f64, i22: f64, i33: f64, i13: f64, i23: f64) -> Self {
        InertiaTensor { i11, i22, i33, i13, i23 }
    }

    pub fn identity() -> Self {
        InertiaTensor::new(1.0, 1.0, 1.0, 0.0, 0.0)
    }

    pub fn det(&self) -> f64 {
        self.i11 * (self.i22 * self.i33 - self.i23 * self.i23) - self.i13 * self.i13 * self.i22
    }

    pub fn scaled(&self, k: f64) -> Self {
        InertiaTensor::new(k * self.i11, k * self.i22, k * self.i33, k * self.i13, k * self.i23)
    }

    /// Uniform rescaling to `det = 1`.
    pub fn normalized(&self) -> Result<Self, ModelError> {
        let det = self.det();
        if !(det > 0.0) || !det.is_finite() {
            return Err(ModelError::NotPositiveDefinite(det));
        }
        Ok(self.scaled(det.cbrt().recip()))
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [
            [self.i11, 0.0, self.i13],
            [0.0, self.i22, self.i23],
            [self.i13, self.i23, self.i33],
        ]
    }

    fn scale(&self) -> f64 {
        [self.i11, self.i22, self.i33, self.i13, self.i23]
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    fn is_zero_entry(&self, x: f64) -> bool {
        x.abs() <= 1e-12 * self.scale().max(1.0)
    }

    /// Normalized tensor with `I13 = 0` realizing the special family `(p, d)`:
    /// `I11 = 1 + d²`, `I22 = 1` before normalization of the remaining entries.
    pub fn suslov_case1(p: f64, d: f64) -> Self {
        let i22 = 1.0;
        let i11 = (1.0 + d * d) * i22;
        let i23 = d / (p * i11);
        let i33 = (1.0 / i11 + i23 * i23) / i22;
        InertiaTensor::new(i11, i22, i33, 0.0, i23)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    NonFinite,
    I11NotPositive,
    I22NotPositive,
    DeterminantNotPositive,
    NotNormalized,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::NonFinite => "entries finite",
            Violation::I11NotPositive => "I11 > 0",
            Violation::I22NotPositive => "I22 > 0",
            Violation::DeterminantNotPositive => "I11(I22 I33 - I23^2) - I13^2 I22 > 0",
            Violation::NotNormalized => "det I = 1",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub pass: bool,
    pub violations: Vec<Violation>,
    pub det_deviation: f64,
}

/// Checks positivity and normalization; never fails.
pub fn validate_inertia(inertia: &InertiaTensor) -> Diagnostics {
    let mut v = Vec::new();
    let entries = [inertia.i11, inertia.i22, inertia.i33, inertia.i13, inertia.i23];
    if entries.iter().any(|x| !x.is_finite()) {
        v.push(Violation::NonFinite);
    }
    if !(inertia.i11 > 0.0) {
        v.push(Violation::I11NotPositive);
    }
    if !(inertia.i22 > 0.0) {
        v.push(Violation::I22NotPositive);
    }
    let det = inertia.det();
    if !(det > 0.0) {
        v.push(Violation::DeterminantNotPositive);
    }
    let dev = (det - 1.0).abs();
    if !(dev <= DET_TOL) {
        v.push(Violation::NotNormalized);
    }
    Diagnostics { pass: v.is_empty(), violations: v, det_deviation: dev }
}

/// Choice of the `±` in the amplitudes `c1`, `c2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignBranch {
    Plus,
    Minus,
}

impl SignBranch {
    pub fn sign(self) -> f64 {
        match self {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            SignBranch::Plus => SignBranch::Minus,
            SignBranch::Minus => SignBranch::Plus,
        }
    }
}

impl Default for SignBranch {
    /// Matches `ω2 = −a·c·sech t` of the special family.
    fn default() -> Self {
        SignBranch::Minus
    }
}

/// Special family with `I13 = 0`: `a = p/d`, `c = √(d²+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialParams {
    pub p: f64,
    pub d: f64,
}

impl SpecialParams {
    pub fn new(p: f64, d: f64) -> Self {
        SpecialParams { p, d }
    }
    pub fn a(&self) -> f64 {
        self.p / self.d
    }
    pub fn c(&self) -> f64 {
        (self.d * self.d + 1.0).sqrt()
    }
}

/// Parameters of the heteroclinic closed form
/// `ω1 = a tanh t + (c1/2) sech t`, `ω2 = b tanh t + (c2/2) sech t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuslovParams {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    pub sign_branch: SignBranch,
    pub special: Option<SpecialParams>,
    pub inertia: Option<InertiaTensor>,
}

impl SuslovParams {
    /// Special family `c1 = b = 0`, `c2 = ∓2ca` (sign per branch).
    pub fn special(p: f64, d: f64, branch: SignBranch) -> Self {
        let sp = SpecialParams::new(p, d);
        SuslovParams {
            a: sp.a(),
            b: 0.0,
            c1: 0.0,
            c2: 2.0 * branch.sign() * sp.c() * sp.a(),
            sign_branch: branch,
            special: Some(sp),
            inertia: None,
        }
    }

    /// Time-rescaled orbit `A·ω(A t)` on the energy level scaled by `A²`.
    pub fn energy_scaled(&self, factor: f64) -> Self {
        SuslovParams {
            a: self.a * factor,
            b: self.b * factor,
            c1: self.c1 * factor,
            c2: self.c2 * factor,
            ..*self
        }
    }
}

/// Closed-form parameters from the tensor. `branch = None` selects the default.
pub fn params_from_inertia(
    inertia: &InertiaTensor,
    branch: Option<SignBranch>,
) -> Result<SuslovParams, ModelError> {
    let t = inertia;
    let z13 = t.is_zero_entry(t.i13);
    let z23 = t.is_zero_entry(t.i23);
    if z13 && z23 {
        return Err(ModelError::DegenerateAxis);
    }
    if z13 && t.is_zero_entry(t.i11 - t.i22) {
        return Err(ModelError::DegenerateBalance);
    }
    let branch = branch.unwrap_or_default();
    let s = branch.sign();
    let den = t.i13 * t.i13 * t.i22 + t.i23 * t.i23 * t.i11;
    let a = t.i23 / den;
    let b = -t.i13 / den;
    let c1 = s * 2.0 * t.i13 / den * (t.i22 / t.i11).sqrt();
    let c2 = s * 2.0 * t.i23 / den * (t.i11 / t.i22).sqrt();
    let special = if z13 && t.i11 > t.i22 {
        let c = (t.i11 / t.i22).sqrt();
        let d = (c * c - 1.0).sqrt();
        let a_sheet = (t.i22 * t.i33 - t.i23 * t.i23) / t.i23;
        Some(SpecialParams::new(d * a_sheet, d))
    } else {
        None
    };
    Ok(SuslovParams { a, b, c1, c2, sign_branch: branch, special, inertia: Some(*t) })
}

/// Result of the physical-body construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalBody {
    pub tensor: InertiaTensor,
    /// Uniform factor applied to the input diagonal.
    pub rescaling: f64,
    /// Principal moments `(I11, J2, J3)`.
    pub principal_moments: [f64; 3],
    pub triangle_inequalities: bool,
}

/// Builds a normalized `I13 = 0` tensor with meromorphicity index `p` from
/// the diagonal shape `(I11, I22, I33)`.
///
/// `I23²` follows the quadratic `I23² = I22/(2Δ)(p² + 2I33Δ − p√(p² + 4I33Δ))`,
/// `Δ = I11 − I22`, evaluated on the uniformly rescaled diagonal `k·(I11, I22, I33)`
/// with `k` chosen so that the result has `det = 1`; then `p` is recovered
/// exactly by [`meromorphicity_class`].
pub fn inertia_from_p(
    p: f64,
    i11: f64,
    i22: f64,
    i33: f64,
    branch: SignBranch,
) -> Result<PhysicalBody, ModelError> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(ModelError::InvalidShape(format!("p must be positive, got {p}")));
    }
    if !(i22 > 0.0 && i11 > i22) {
        return Err(ModelError::InvalidShape("requires I11 > I22 > 0".into()));
    }
    if !(i33 > 0.0 && i33 + i22 > i11) {
        return Err(ModelError::InvalidShape("requires I33 + I22 > I11".into()));
    }
    let delta = i11 - i22;
    if branch == SignBranch::Plus {
        // I22 I33 − I23² = −I22/(2Δ)·p(p + √(p² + 4 I33 Δ)) < 0
        let x = i22 / (2.0 * delta) * (p * p + 2.0 * i33 * delta + p * (p * p + 4.0 * i33 * delta).sqrt());
        return Err(ModelError::NotPositiveDefinite(i11 * (i22 * i33 - x)));
    }
    let prod = i11 * i22 * i33;
    let root = |k: f64| (p * p + 4.0 * k * k * i33 * delta).sqrt();
    // det of the rescaled tensor equals 2k³·I11 I22 I33·p/(√(p²+4k²I33Δ) + p)
    let g = |k: f64| 2.0 * k.powi(3) * prod * p - (root(k) + p);
    let (mut lo, mut hi) = (1e-3f64, 1.0f64);
    while g(lo) > 0.0 {
        lo *= 0.5;
    }
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    let k = 0.5 * (lo + hi);
    let (a11, a22, a33) = (k * i11, k * i22, k * i33);
    let r = root(k);
    let i23sq = a22 * a33 * (r - p) / (r + p);
    let raw = InertiaTensor::new(a11, a22, a33, 0.0, i23sq.sqrt());
    let tensor = raw.normalized()?;
    let rescaling = tensor.i11 / i11;
    let (j2, j3) = sym2_eigen(tensor.i22, tensor.i23, tensor.i33);
    let m = [tensor.i11, j2, j3];
    let tri = m[0] < m[1] + m[2] && m[1] < m[0] + m[2] && m[2] < m[0] + m[1];
    Ok(PhysicalBody { tensor, rescaling, principal_moments: m, triangle_inequalities: tri })
}

fn sym2_eigen(a: f64, b: f64, c: f64) -> (f64, f64) {
    let m = 0.5 * (a + c);
    let r = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    (m - r, m + r)
}

/// Involutive symmetry `(ω1, ω2) → (−ω2, −ω1)`, `γ1 ↔ γ2`, `I11 ↔ I22`, `I13 ↔ I23`.
pub trait SwapSymmetry: Sized {
    fn swapped(&self) -> Self;
}

impl SwapSymmetry for InertiaTensor {
    fn swapped(&self) -> Self {
        InertiaTensor::new(self.i22, self.i11, self.i33, self.i23, self.i13)
    }
}

pub fn apply_swap_symmetry<T: SwapSymmetry>(x: &T) -> T {
    x.swapped()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeromorphicCase {
    #[serde(rename = "Case1_I13zero")]
    Case1I13Zero,
    #[serde(rename = "Case2_I23zero")]
    Case2I23Zero,
    NonMeromorphic,
    #[serde(rename = "Degenerate_I11eqI22")]
    DegenerateI11EqI22,
    /// `I13 = I23 = 0`: only equilibria.
    DegenerateAxis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Odd,
    Even,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeromorphicityVerdict {
    pub case: MeromorphicCase,
    pub p_squared: Option<f64>,
    pub p_value: Option<f64>,
    pub p_is_integer: bool,
    pub p_parity: Parity,
}

/// `p²` from the normalized tensor, with `I11 I22 I33 − 1` replaced by the
/// cancellation-free `I11 I23² + I22 I13²` (valid at `det = 1`).
pub fn p_squared(inertia: &InertiaTensor) -> Result<f64, ModelError> {
    let t = inertia.normalized()?;
    let s = t.i11 * t.i23 * t.i23 + t.i22 * t.i13 * t.i13;
    if s == 0.0 {
        return Err(ModelError::DegenerateAxis);
    }
    Ok((t.i11 - t.i22) * (t.i11 * t.i23 * t.i23 - t.i22 * t.i13 * t.i13) / (t.i11 * t.i22 * s * s))
}

pub fn meromorphicity_class(inertia: &InertiaTensor) -> MeromorphicityVerdict {
    let t = match inertia.normalized() {
        Ok(t) => t,
        Err(_) => {
            return MeromorphicityVerdict {
                case: MeromorphicCase::NonMeromorphic,
                p_squared: None,
                p_value: None,
                p_is_integer: false,
                p_parity: Parity::None,
            }
        }
    };
    let z13 = t.is_zero_entry(t.i13);
    let z23 = t.is_zero_entry(t.i23);
    let verdict = |case, p2: Option<f64>| {
        let p = p2.filter(|&x| x > 0.0).map(f64::sqrt);
        let (is_int, parity) = match p {
            Some(p) if (p - p.round()).abs() <= P_INTEGER_TOL && p.round() != 0.0 => {
                let n = p.round() as i64;
                (true, if n % 2 == 0 { Parity::Even } else { Parity::Odd })
            }
            _ => (false, Parity::None),
        };
        MeromorphicityVerdict { case, p_squared: p2, p_value: p, p_is_integer: is_int, p_parity: parity }
    };
    if z13 && z23 {
        return verdict(MeromorphicCase::DegenerateAxis, None);
    }
    let p2 = p_squared(&t).ok();
    if t.is_zero_entry(t.i11 - t.i22) {
        return verdict(MeromorphicCase::DegenerateI11EqI22, p2);
    }
    let v = verdict(MeromorphicCase::NonMeromorphic, p2);
    if (z13 || z23) && v.p_is_integer {
        let case = if z13 { MeromorphicCase::Case1I13Zero } else { MeromorphicCase::Case2I23Zero };
        return MeromorphicityVerdict { case, ..v };
    }
    v
}

/// Right-hand side of the Euler–Poisson system in `(ω1, ω2, γ1, γ2, γ3)`
/// over complex values.
pub fn vector_field_c(t: &InertiaTensor, x: &[Complex64; 5]) -> [Complex64; 5] {
    let l = x[0] * t.i13 + x[1] * t.i23;
    [
        l * x[1] * t.i22,
        -l * x[0] * t.i11,
        -x[1] * x[4],
        x[0] * x[4],
        x[1] * x[2] - x[0] * x[3],
    ]
}

/// Jacobian of [`vector_field_c`].
pub fn jacobian_c(t: &InertiaTensor, x: &[Complex64; 5]) -> Matrix5<Complex64> {
    let (w1, w2, g1, g2, g3) = (x[0], x[1], x[2], x[3], x[4]);
    let l = w1 * t.i13 + w2 * t.i23;
    let z = Complex64::new(0.0, 0.0);
    Matrix5::from_row_slice(&[
        w2 * t.i13 * t.i22, (l + w2 * t.i23) * t.i22, z, z, z,
        -(l + w1 * t.i13) * t.i11, -w1 * t.i23 * t.i11, z, z, z,
        z, -g3, z, z, -w2,
        g3, z, z, z, w1,
        -g2, g1, w2, -w1, z,
    ])
}

/// Scale-invariant balance `x = d/t` with `γ̄ = 0`.
pub fn balance(t: &InertiaTensor) -> Result<[Complex64; 5], ModelError> {
    if t.is_zero_entry(t.i13) && t.is_zero_entry(t.i23) {
        return Err(ModelError::DegenerateAxis);
    }
    let r = (t.i11 * t.i22).sqrt();
    let w1 = Complex64::new(t.i11 * t.i23, t.i13 * r).inv();
    let w2 = -Complex64::new(t.i13 * t.i22, -t.i23 * r).inv();
    let z = Complex64::new(0.0, 0.0);
    Ok([w1, w2, z, z, z])
}

/// Eigenvalues of the Kovalevskaya matrix `K = Dv(d) + Id` at the balance.
pub fn kovalevskaya_spectrum(t: &InertiaTensor) -> Result<Vec<Complex64>, ModelError> {
    let d = balance(t)?;
    let k = jacobian_c(t, &d) + Matrix5::<Complex64>::identity();
    let ev = nalgebra::linalg::Schur::new(k).eigenvalues().ok_or(ModelError::Eigen)?;
    let mut v: Vec<Complex64> = ev.iter().map(|c: &Complex<f64>| Complex64::new(c.re, c.im)).collect();
    v.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(v)
}

/// Residue at `t = iπ/2` of the Poisson matrix along the closed form.
pub fn residue_matrix(params: &SuslovParams) -> [[Complex64; 3]; 3] {
    let r1 = Complex64::new(params.a, -0.5 * params.c1);
    let r2 = Complex64::new(params.b, -0.5 * params.c2);
    let z = Complex64::new(0.0, 0.0);
    [[z, z, -r2], [z, z, r1], [r2, -r1, z]]
}

/// `(0, ρ, −ρ)` with `ρ = ½√(c1² + c2² − 4(a² + b²) + 4i(a c1 + b c2))`, principal root.
pub fn residue_eigenvalues(params: &SuslovParams) -> [Complex64; 3] {
    let SuslovParams { a, b, c1, c2, .. } = *params;
    let s = Complex64::new(c1 * c1 + c2 * c2 - 4.0 * (a * a + b * b), 4.0 * (a * c1 + b * c2));
    let rho = 0.5 * s.sqrt();
    [Complex64::new(0.0, 0.0), rho, -rho]
}
