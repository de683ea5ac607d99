//! Poisson → Riccati → second-order reduction, local exponents of
//! `y'' = r(z) y` (`z = e^t`), Frobenius logarithm detection and the
//! Liouvillian verdict for integer `p`.

use crate::algebra::{series_div, ComplexField, Field, GaussRational, Poly, Rational};
use crate::closed_form::OmegaSolution;
use crate::integrator::{solve, IntegratorError, Options};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaloisError {
    #[error("stereographic chart singular")]
    ChartSingularity,
    #[error("particular Riccati solutions coincide at t = {0}")]
    CoincidentSolutions(f64),
    #[error("c = ±1 (p = 0) is excluded")]
    DegenerateC,
    #[error("exponent difference {0} is not a nonnegative integer")]
    NonResonant(Complex64),
    #[error("need at least {0} terms")]
    InsufficientTerms(usize),
    #[error("{0} is not a double pole of r")]
    NotSingular(usize),
    #[error("explicit coefficients of P or Q disagree with p'/2 + p²/4 − q")]
    ExplicitMismatch,
    #[error("p must be nonzero")]
    ZeroP,
    #[error(transparent)]
    Integration(#[from] IntegratorError),
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `u1 = (γ3+1)/(γ1 − iγ2)`, `u2 = −(γ1 + iγ2)/(γ3+1)`.
pub fn stereographic(g: [Complex64; 3]) -> Result<(Complex64, Complex64), GaloisError> {
    let den1 = g[0] - I * g[1];
    let den2 = g[2] + 1.0;
    if den1.norm() < 1e-300 || den2.norm() < 1e-300 {
        return Err(GaloisError::ChartSingularity);
    }
    Ok(((g[2] + 1.0) / den1, -(g[0] + I * g[1]) / den2))
}

/// Inverse chart: `γ1 = (1 − u1u2)/(u1−u2)`, `γ2 = i(1 + u1u2)/(u1−u2)`, `γ3 = (u1+u2)/(u1−u2)`.
pub fn inverse_stereographic(u1: Complex64, u2: Complex64) -> Result<[Complex64; 3], GaloisError> {
    let den = u1 - u2;
    if den.norm() < 1e-300 {
        return Err(GaloisError::ChartSingularity);
    }
    let m = u1 * u2;
    Ok([(1.0 - m) / den, I * (1.0 + m) / den, (u1 + u2) / den])
}

/// Coefficients of `u̇ = A + B u + C u²` along a heteroclinic `ω(t)` (`ω3 = 0`).
#[derive(Debug, Clone, Copy)]
pub struct RiccatiCoeffs {
    pub omega: OmegaSolution,
}

impl RiccatiCoeffs {
    pub fn new(omega: OmegaSolution) -> Self {
        RiccatiCoeffs { omega }
    }

    pub fn a(&self, t: f64) -> Complex64 {
        let (w1, w2) = self.omega.eval(t);
        Complex64::new(w2, -w1) * 0.5
    }

    pub fn b(&self, _t: f64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    pub fn c(&self, t: f64) -> Complex64 {
        let (w1, w2) = self.omega.eval(t);
        Complex64::new(w2, w1) * 0.5
    }

    pub fn c_dot(&self, t: f64) -> Complex64 {
        let (w1, w2) = self.omega.eval_dot(t);
        Complex64::new(w2, w1) * 0.5
    }

    /// `A1 = −AC` of `v̇ = A1 + B1 v − v²`, `u = −v/C`.
    pub fn a1(&self, t: f64) -> Complex64 {
        -self.a(t) * self.c(t)
    }

    /// `B1 = B + Ċ/C`.
    pub fn b1(&self, t: f64) -> Complex64 {
        self.b(t) + self.c_dot(t) / self.c(t)
    }

    pub fn riccati_rhs(&self, t: f64, u: Complex64) -> Complex64 {
        self.a(t) + self.b(t) * u + self.c(t) * u * u
    }
}

/// General solution through two particular ones:
/// `(u − u0)/(u − u1) = C0 exp ∫_{t0}^t C (u0 − u1) ds`, sampled at `times`.
pub fn riccati_general_solution(
    u0: &dyn Fn(f64) -> Complex64,
    u1: &dyn Fn(f64) -> Complex64,
    coeffs: &RiccatiCoeffs,
    t0: f64,
    c0: Complex64,
    times: &[f64],
) -> Result<Vec<Complex64>, GaloisError> {
    for &t in std::iter::once(&t0).chain(times) {
        if (u0(t) - u1(t)).norm() < 1e-14 {
            return Err(GaloisError::CoincidentSolutions(t));
        }
    }
    if c0 == Complex64::new(0.0, 0.0) {
        return Ok(times.iter().map(|&t| u0(t)).collect());
    }
    let sys = |t: f64, _x: &[f64; 2]| {
        let v = coeffs.c(t) * (u0(t) - u1(t));
        [v.re, v.im]
    };
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let phase = if t == t0 {
            Complex64::new(0.0, 0.0)
        } else {
            let sol = solve(&sys, t0, [0.0, 0.0], t, &[t], &Options::new(1e-12, 1e-12))?;
            let x = sol.x.last().copied().unwrap_or([0.0, 0.0]);
            Complex64::new(x[0], x[1])
        };
        let k = c0 * phase.exp();
        out.push((u0(t) - k * u1(t)) / (1.0 - k));
    }
    Ok(out)
}

/// `w'' + p(z) w' + q(z) w = 0` and its normal form `y'' = r(z) y`, `r = P/Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedEquation<T: Field> {
    pub p: T,
    pub c: T,
    pub d: T,
    pub p_num: Poly<T>,
    pub p_den: Poly<T>,
    pub q_num: Poly<T>,
    pub q_den: Poly<T>,
    /// `P` computed from `p'/2 + p²/4 − q`.
    pub numerator: Poly<T>,
    /// `Q = 4(c²−1) z² (z²+1)² (2cz − i(z²−1))²`.
    pub denominator: Poly<T>,
    /// The displayed coefficients `p_0..p_8`.
    pub explicit: Vec<T>,
}

fn pl<T: Field>(c: Vec<T>) -> Poly<T> {
    Poly::new(c)
}

/// Displayed coefficients `p_0..p_8` of `P` (real `c`, `p`).
pub fn explicit_coefficients<T: ComplexField>(p: &T, c: &T) -> Vec<T> {
    let n = |k: i64| T::from_i64(k);
    let i = T::i();
    let p2 = p.clone() * p.clone();
    let d2 = c.clone() * c.clone() - T::one();
    let p0 = d2.clone() + p2.clone();
    let p7 = n(4) * i.clone() * c.clone() * (n(2) * d2.clone() + p2.clone());
    let p2c = -(n(4) * (n(4) * d2.clone() + p2.clone()));
    let p5 = n(4) * i * c.clone() * ((n(4) * p2.clone() - n(2)) * d2.clone() + p2.clone());
    let p4 = -(n(2)
        * ((-(n(8) * d2.clone()) + n(8) * (d2.clone() + n(2)) * p2.clone() + T::one()) * d2.clone() + n(5) * p2));
    vec![p0.clone(), -p7.clone(), p2c.clone(), -p5.clone(), p4, p5, p2c, p7, p0]
}

impl<T: ComplexField> ReducedEquation<T> {
    /// Requires `d² = c² − 1` and `d ≠ 0`.
    pub fn new(p: T, c: T, d: T) -> Result<Self, GaloisError> {
        if p.is_zero() {
            return Err(GaloisError::ZeroP);
        }
        if d.is_negligible(1.0) {
            return Err(GaloisError::DegenerateC);
        }
        let n = |k: i64| T::from_i64(k);
        let i = T::i();
        let z = Poly::<T>::x();
        let z2 = &z * &z;
        let one = Poly::<T>::one();
        let zp1 = &z2 + &one;
        // D = z² + 2icz − 1
        let dd = pl(vec![-T::one(), n(2) * i.clone() * c.clone(), T::one()]);
        let p_num = &(&z2 * &pl(vec![-n(4), n(4) * i.clone() * c.clone(), T::one()])) - &one;
        let p_den = &(&z * &zp1) * &dd;
        let p2 = p.clone() * p.clone();
        let d2 = d.clone() * d.clone();
        // q = p²/(4d²) 1/z² + p²/(z²+1)²
        let zp1_2 = &zp1 * &zp1;
        let q_num = (&zp1_2 + &z2.scale(&(n(4) * d2.clone()))).scale(&p2);
        let q_den = (&z2 * &zp1_2).scale(&(n(4) * d2.clone()));

        let np = p_num.derivative();
        let dp = p_den.derivative();
        let x = &(&(&(&np * &p_den) - &(&p_num * &dp)).scale(&n(2)) + &(&p_num * &p_num))
            - &(&z2 * &(&dd * &dd)).scale(&(n(4) * p2.clone()));
        let numerator = &x.scale(&-d2.clone()) + &(&zp1_2 * &(&dd * &dd)).scale(&p2);
        let lin = pl(vec![i.clone(), n(2) * c.clone(), -i.clone()]);
        let denominator = (&(&z2 * &zp1_2) * &(&lin * &lin)).scale(&(n(4) * (c.clone() * c.clone() - T::one())));
        let explicit = explicit_coefficients(&p, &c);
        Ok(ReducedEquation { p, c, d, p_num, p_den, q_num, q_den, numerator, denominator, explicit })
    }

    /// `P_computed − P_explicit` and `Q_explicit − (−4d² z²(z²+1)² D²)` coefficients.
    pub fn explicit_mismatch(&self) -> Vec<T> {
        let explicit = Poly::new(self.explicit.clone());
        let mut out: Vec<T> = (0..9).map(|k| self.numerator.coeff(k) - explicit.coeff(k)).collect();
        let z = Poly::<T>::x();
        let z2 = &z * &z;
        let zp1 = &z2 + &Poly::one();
        let dd = pl(vec![-T::one(), T::from_i64(2) * T::i() * self.c.clone(), T::one()]);
        let alt = (&(&z2 * &(&zp1 * &zp1)) * &(&dd * &dd)).scale(&-(T::from_i64(4) * self.d.clone() * self.d.clone()));
        out.extend((0..11).map(|k| self.denominator.coeff(k) - alt.coeff(k)));
        out
    }

    pub fn explicit_matches(&self) -> bool {
        let scale = self.numerator.coeffs().iter().map(|c| c.to_c64().norm()).fold(1.0, f64::max);
        self.explicit_mismatch().iter().all(|m| m.is_negligible(scale))
    }

    /// `r(z)` from the displayed `P/Q`.
    pub fn r_explicit(&self, z: Complex64) -> Complex64 {
        let pc: Vec<Complex64> = self.explicit.iter().map(|c| c.to_c64()).collect();
        let qc: Vec<Complex64> = self.denominator.coeffs().iter().map(|c| c.to_c64()).collect();
        horner(&pc, z) / horner(&qc, z)
    }

    /// `r(z) = p'/2 + p²/4 − q` by direct evaluation.
    pub fn r_from_pq(&self, z: Complex64) -> Complex64 {
        let cv = |q: &Poly<T>| q.coeffs().iter().map(|c| c.to_c64()).collect::<Vec<_>>();
        let (pn, pd) = (cv(&self.p_num), cv(&self.p_den));
        let (pn1, pd1) = (cv(&self.p_num.derivative()), cv(&self.p_den.derivative()));
        let pv = horner(&pn, z) / horner(&pd, z);
        let dpv = (horner(&pn1, z) * horner(&pd, z) - horner(&pn, z) * horner(&pd1, z)) / horner(&pd, z).powi(2);
        let qv = horner(&cv(&self.q_num), z) / horner(&cv(&self.q_den), z);
        0.5 * dpv + 0.25 * pv * pv - qv
    }

    /// `s_0..s_4`; `s_5 = ∞` is `None`.
    pub fn singular_points(&self) -> [Option<T>; 6] {
        let i = T::i();
        [
            Some(T::zero()),
            Some(i.clone()),
            Some(-i.clone()),
            Some(-(i.clone() * (self.c.clone() + self.d.clone()))),
            Some(-(i * (self.c.clone() - self.d.clone()))),
            None,
        ]
    }

    /// Coefficients `r_k` of `(z − s)² r(z) = Σ r_k (z−s)^k` (at `∞`: of
    /// `ζ² R(ζ)`, `R(ζ) = r(1/ζ)/ζ⁴`, the normal form after `y = Y/ζ`).
    pub fn laurent(&self, idx: usize, n: usize) -> Result<Vec<T>, GaloisError> {
        match &self.singular_points()[idx] {
            Some(s) => {
                let qs = self.denominator.shift(s);
                let scale = qs.coeffs().iter().map(|c| c.to_c64().norm()).fold(1.0, f64::max);
                if !qs.coeff(0).is_negligible(scale) || !qs.coeff(1).is_negligible(scale) || qs.coeff(2).is_negligible(scale) {
                    return Err(GaloisError::NotSingular(idx));
                }
                let rest = Poly::new(qs.coeffs().iter().skip(2).cloned().collect());
                Ok(series_div(&self.numerator.shift(s), &rest, n))
            }
            None => {
                let rev = |q: &Poly<T>, deg: usize| Poly::new((0..=deg).rev().map(|k| q.coeff(k)).collect());
                Ok(series_div(&rev(&self.numerator, 8), &rev(&self.denominator, 10), n))
            }
        }
    }
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

/// Floating construction with `d = √(c² − 1)` (principal branch).
pub fn reduced_equation(p: f64, c: f64) -> Result<ReducedEquation<Complex64>, GaloisError> {
    if (c * c - 1.0).abs() < 1e-14 {
        return Err(GaloisError::DegenerateC);
    }
    let d = Complex64::new(c * c - 1.0, 0.0).sqrt();
    ReducedEquation::new(Complex64::new(p, 0.0), Complex64::new(c, 0.0), d)
}

/// Exact construction on the rational curve `c = (m²+1)/(2m)`, `d = (m²−1)/(2m)`.
pub fn reduced_equation_exact(p: &Rational, m: &Rational) -> Result<ReducedEquation<GaussRational>, GaloisError> {
    if m.is_zero() || m.abs() == Rational::one() {
        return Err(GaloisError::DegenerateC);
    }
    let two_m = m.clone() * Rational::from_i64(2);
    let c = (m.clone() * m.clone() + Rational::one()) / two_m.clone();
    let d = (m.clone() * m.clone() - Rational::one()) / two_m;
    let g = |r: Rational| GaussRational::new(r, Rational::zero());
    ReducedEquation::new(g(p.clone()), g(c), g(d))
}

/// Default exact parameters `c = 5/4`, `d = 3/4`.
pub fn default_exact_m() -> Rational {
    Rational::from_i64(2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPointData {
    pub index: usize,
    /// `None` for the point at infinity.
    pub location: Option<Complex64>,
    pub exponents: [Complex64; 2],
    pub delta: Complex64,
    pub logarithmic: Option<bool>,
}

fn principal_delta(disc: Complex64) -> Complex64 {
    let s = disc.sqrt();
    if s.re < -1e-300 || (s.re.abs() <= 1e-12 * s.norm().max(1.0) && s.im < 0.0) {
        -s
    } else {
        s
    }
}

/// Exponent pairs from the leading Laurent coefficient at each point.
pub fn singular_exponents<T: ComplexField>(eqn: &ReducedEquation<T>) -> Result<Vec<SingularPointData>, GaloisError> {
    let pts = eqn.singular_points();
    (0..6)
        .map(|k| {
            let r0 = eqn.laurent(k, 1)?[0].to_c64();
            let delta = principal_delta(1.0 + 4.0 * r0);
            let (e1, e2) = ((1.0 + delta) / 2.0, (1.0 - delta) / 2.0);
            // y ~ ζ^{σ−1} at infinity
            let exponents = if k == 5 { [e1 - 1.0, e2 - 1.0] } else { [e1, e2] };
            Ok(SingularPointData { index: k, location: pts[k].as_ref().map(|s| s.to_c64()), exponents, delta, logarithmic: None })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusResult<T> {
    pub logarithmic: bool,
    /// Recursion index where compatibility is checked (`Δ`).
    pub obstruction_index: usize,
    /// Right-hand side at the resonance; zero iff no logarithm.
    pub compatibility: T,
    pub coefficients: Vec<T>,
}

/// Frobenius recursion at the smaller exponent `(1 − Δ)/2` of a point with
/// integer `Δ ≥ 0`; the series exists iff the right-hand side vanishes at `n = Δ`.
pub fn frobenius_log_test<T: ComplexField>(
    eqn: &ReducedEquation<T>,
    idx: usize,
    nterms: usize,
) -> Result<FrobeniusResult<T>, GaloisError> {
    let r = eqn.laurent(idx, nterms + 1)?;
    let disc = (T::one() + T::from_i64(4) * r[0].clone()).to_c64();
    let delta = principal_delta(disc);
    let dn = delta.re.round();
    if delta.im.abs() > 1e-9 || (delta.re - dn).abs() > 1e-9 || dn < 0.0 {
        return Err(GaloisError::NonResonant(delta));
    }
    let dn = dn as usize;
    if nterms < dn + 5 {
        return Err(GaloisError::InsufficientTerms(dn + 5));
    }
    if dn == 0 {
        return Ok(FrobeniusResult { logarithmic: true, obstruction_index: 0, compatibility: T::one(), coefficients: vec![T::one()] });
    }
    let rho = T::from_ratio(1 - dn as i64, 2);
    let mut c = vec![T::one()];
    let mut compat = T::zero();
    let mut logarithmic = false;
    for n in 1..=nterms {
        let mut rhs = T::zero();
        let mut scale = 0.0f64;
        for k in 1..=n {
            let term = r[k].clone() * c[n - k].clone();
            scale += term.to_c64().norm();
            rhs = rhs + term;
        }
        if n == dn {
            logarithmic = !rhs.is_negligible(scale.max(1e-300));
            compat = rhs;
            c.push(T::zero());
            continue;
        }
        let nr = T::from_i64(n as i64) + rho.clone();
        let lhs = nr.clone() * (nr - T::one()) - r[0].clone();
        c.push(rhs / lhs);
    }
    Ok(FrobeniusResult { logarithmic, obstruction_index: dn, compatibility: compat, coefficients: c })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeBound {
    pub p: i64,
    /// Admissible `n = deg R = −Σ ρ_i`, descending.
    pub candidates: Vec<i64>,
    pub all_negative: bool,
    /// Logarithmic flags at `s_1`, `s_2` from the exact Frobenius test.
    pub log_flags: [bool; 2],
}

fn int_ratio(p: i64) -> GaussRational {
    GaussRational::new(Rational::from_i64(p), Rational::zero())
}

/// Exact Frobenius flags at `s_1..s_4` on the default rational curve point.
pub fn log_flags_exact(p: i64) -> Result<[bool; 4], GaloisError> {
    if p == 0 {
        return Err(GaloisError::ZeroP);
    }
    let eqn = reduced_equation_exact(&int_ratio(p).re, &default_exact_m())?;
    let n = p.unsigned_abs().max(2) as usize + 5;
    let mut out = [false; 4];
    for (k, o) in out.iter_mut().enumerate() {
        *o = frobenius_log_test(&eqn, k + 1, n)?.logarithmic;
    }
    Ok(out)
}

/// Degrees of `R` admitted by exponential solutions `R ∏ (z − s_i)^{ρ_i}`.
pub fn exponential_degree_bound(p: i64) -> Result<DegreeBound, GaloisError> {
    let flags = log_flags_exact(p)?;
    let a = p.abs();
    // twice the exponents: at s1, s2 the larger is 1+|p|, the smaller 1−|p|
    let choices = |log: bool| if log { vec![1 + a] } else { vec![1 + a, 1 - a] };
    let mut set = std::collections::BTreeSet::new();
    for r1 in choices(flags[0]) {
        for r2 in choices(flags[1]) {
            for r3 in [3, -1] {
                for r4 in [3, -1] {
                    // ρ0 + ρ5 = 0 is the only choice keeping n real
                    let twice = r1 + r2 + r3 + r4;
                    set.insert(-twice / 2);
                }
            }
        }
    }
    let candidates: Vec<i64> = set.into_iter().rev().collect();
    let all_negative = candidates.iter().all(|&n| n < 0);
    Ok(DegreeBound { p, candidates, all_negative, log_flags: [flags[0], flags[1]] })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    #[serde(rename = "Solvable_OddP")]
    SolvableOddP,
    #[serde(rename = "NotLiouvillian_EvenP")]
    NotLiouvillianEvenP,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiouvillianVerdict {
    pub p: i64,
    pub verdict: VerdictKind,
    pub log_flags: Option<[bool; 4]>,
    pub degree_bound: Option<DegreeBound>,
    /// `|p|` beyond [`VERIFIED_RANGE`].
    pub extension: bool,
}

pub const VERIFIED_RANGE: i64 = 10;

/// Even `p` with logarithms at `s_1`, `s_2` and no admissible degree is
/// not Liouvillian; odd `p` has explicit solutions. Even `|p| > 10` is
/// `Unknown` unless `extend` reruns the certificates.
pub fn liouvillian_verdict(p: i64, extend: bool) -> Result<LiouvillianVerdict, GaloisError> {
    if p == 0 {
        return Err(GaloisError::ZeroP);
    }
    let extension = p.abs() > VERIFIED_RANGE;
    if p % 2 != 0 {
        return Ok(LiouvillianVerdict { p, verdict: VerdictKind::SolvableOddP, log_flags: None, degree_bound: None, extension });
    }
    if extension && !extend {
        return Ok(LiouvillianVerdict { p, verdict: VerdictKind::Unknown, log_flags: None, degree_bound: None, extension });
    }
    let flags = log_flags_exact(p)?;
    let bound = exponential_degree_bound(p)?;
    let verdict = if flags[0] && flags[1] && bound.all_negative {
        VerdictKind::NotLiouvillianEvenP
    } else {
        VerdictKind::Unknown
    };
    Ok(LiouvillianVerdict { p, verdict, log_flags: Some(flags), degree_bound: Some(bound), extension })
}
