//! Extra polynomial first integral `F3 = P1 γ1 + P2 γ2 + P3 γ3` for odd `p`
//! in the `I13 = 0` family, `ω̇1 = d ω2²/(p(d²+1))`, `ω̇2 = −(d/p) ω1 ω2`.
//!
//! Coefficients live in any [`Field`]; with [`RatFunc`] they are exact
//! rational functions of `d`.

use crate::algebra::{Field, Poly, RatFunc};
use crate::hyper::f1_coefficients_generic;
use crate::integrator::BodyState;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegralError {
    #[error("odd positive integer p required, got {0}")]
    ParityError(f64),
    #[error("division by ω1 left a remainder")]
    DivisionObstruction,
}

/// Homogeneous polynomial in `(ω1, ω2)`; `coeffs[i]` multiplies `ω1^i ω2^{degree−i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly2<T> {
    pub degree: usize,
    pub coeffs: Vec<T>,
}

impl<T: Field> HomogeneousPoly2<T> {
    pub fn zero(degree: usize) -> Self {
        HomogeneousPoly2 { degree, coeffs: vec![T::zero(); degree + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty());
        HomogeneousPoly2 { degree: coeffs.len() - 1, coeffs }
    }

    /// `c ω1^i ω2^{degree−i}`.
    pub fn monomial(degree: usize, i: usize, c: T) -> Self {
        let mut h = Self::zero(degree);
        h.coeffs[i] = c;
        h
    }

    pub fn coeff(&self, i: usize) -> &T {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &T) -> Self {
        HomogeneousPoly2 { degree: self.degree, coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() && o.degree != self.degree {
            return self.clone();
        }
        if self.is_zero() && o.degree != self.degree {
            return o.clone();
        }
        assert_eq!(self.degree, o.degree, "degree mismatch");
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        HomogeneousPoly2 { degree: self.degree, coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-T::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut h = Self::zero(self.degree + o.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                h.coeffs[i + j] = h.coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        h
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut r = Self::monomial(0, 0, T::one());
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn d_omega1(&self) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=self.degree).map(|i| self.coeffs[i].clone() * T::from_i64(i as i64)).collect();
        HomogeneousPoly2 { degree: self.degree - 1, coeffs }
    }

    pub fn d_omega2(&self) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        let n = self.degree;
        let coeffs = (0..n).map(|i| self.coeffs[i].clone() * T::from_i64((n - i) as i64)).collect();
        HomogeneousPoly2 { degree: n - 1, coeffs }
    }

    pub fn mul_omega1(&self) -> Self {
        let mut coeffs = vec![T::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        HomogeneousPoly2 { degree: self.degree + 1, coeffs }
    }

    pub fn mul_omega2(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(T::zero());
        HomogeneousPoly2 { degree: self.degree + 1, coeffs }
    }

    /// Exact division by `ω1` (monomial shift).
    pub fn div_omega1(&self) -> Result<Self, IntegralError> {
        if !self.coeffs[0].is_zero() || self.degree == 0 {
            return Err(IntegralError::DivisionObstruction);
        }
        Ok(HomogeneousPoly2 { degree: self.degree - 1, coeffs: self.coeffs[1..].to_vec() })
    }

    fn parity_zero(&self, var1: bool, odd: bool) -> bool {
        // coefficients whose exponent has the forbidden parity must vanish
        self.coeffs.iter().enumerate().all(|(i, c)| {
            let e = if var1 { i } else { self.degree - i };
            (e % 2 == 1) != odd || c.is_zero()
        })
    }

    pub fn is_even_in_omega1(&self) -> bool {
        self.parity_zero(true, true)
    }

    pub fn is_odd_in_omega1(&self) -> bool {
        self.parity_zero(true, false)
    }

    pub fn is_even_in_omega2(&self) -> bool {
        self.parity_zero(false, true)
    }

    pub fn is_odd_in_omega2(&self) -> bool {
        self.parity_zero(false, false)
    }

    /// `P(1, ω)` as a polynomial in `ω`.
    pub fn dehomogenize(&self) -> Poly<T> {
        let mut c = vec![T::zero(); self.degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[self.degree - i] = a.clone();
        }
        Poly::new(c)
    }

    pub fn eval(&self, w1: &T, w2: &T) -> T {
        let mut s = T::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            s = s + a.clone() * w1.powi(i as u32) * w2.powi((self.degree - i) as u32);
        }
        s
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> HomogeneousPoly2<U> {
        HomogeneousPoly2 { degree: self.degree, coeffs: self.coeffs.iter().map(f).collect() }
    }
}

fn odd_p(p: f64) -> Result<i64, IntegralError> {
    crate::hyper::odd_integer(p).ok_or(IntegralError::ParityError(p))
}

/// `F1 = (d²+1) ω1² + ω2²`.
pub fn f1_form<T: Field>(d: &T) -> HomogeneousPoly2<T> {
    HomogeneousPoly2::from_coeffs(vec![T::one(), T::zero(), d.clone() * d.clone() + T::one()])
}

/// `Q = F1^{(p−1)/2} ℱ1(ω2²/F1)`, degree `p − 1`.
pub fn q_polynomial<T: Field>(p: f64, d: &T) -> Result<HomogeneousPoly2<T>, IntegralError> {
    let n = odd_p(p)?;
    let m = ((n - 1) / 2) as usize;
    let c = f1_coefficients_generic(&T::from_i64(n), &(d.clone() * d.clone()), m);
    let f1 = f1_form(d);
    let w22 = HomogeneousPoly2::monomial(2, 0, T::one());
    let mut q = HomogeneousPoly2::zero(2 * m);
    for (j, cj) in c.iter().enumerate() {
        q = q.add(&w22.pow(j).mul(&f1.pow(m - j)).scale(cj));
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtraIntegral<T> {
    pub p: i64,
    pub d: T,
    pub p1: HomogeneousPoly2<T>,
    pub p2: HomogeneousPoly2<T>,
    pub p3: HomogeneousPoly2<T>,
}

/// `L f = (∂f/∂ω1) ω2/(d²+1) − (∂f/∂ω2) ω1`; `ḟ = (d/p) ω2 L f` along the flow.
pub fn lie_operator<T: Field>(f: &HomogeneousPoly2<T>, d: &T) -> HomogeneousPoly2<T> {
    let inv = T::one() / (d.clone() * d.clone() + T::one());
    f.d_omega1().mul_omega2().scale(&inv).sub(&f.d_omega2().mul_omega1())
}

/// `P1 = ω1 Q`, `P3 = −(d/p) L P1`, `P2 = (ω2/ω1)(P1 − (d/p) L P3)`.
pub fn build_extra_integral<T: Field>(p: f64, d: &T) -> Result<ExtraIntegral<T>, IntegralError> {
    let n = odd_p(p)?;
    let k = d.clone() / T::from_i64(n);
    let p1 = q_polynomial(p, d)?.mul_omega1();
    let p3 = lie_operator(&p1, d).scale(&-k.clone());
    let inner = p1.sub(&lie_operator(&p3, d).scale(&k));
    let p2 = inner.mul_omega2().div_omega1()?;
    Ok(ExtraIntegral { p: n, d: d.clone(), p1, p2, p3 })
}

/// Exact construction with coefficients in `ℚ(d)`.
pub fn build_extra_integral_exact(p: f64) -> Result<ExtraIntegral<RatFunc>, IntegralError> {
    build_extra_integral(p, &RatFunc::var())
}

impl ExtraIntegral<RatFunc> {
    pub fn specialize(&self, d: f64) -> ExtraIntegral<f64> {
        let f = |c: &RatFunc| c.eval_f64(d);
        ExtraIntegral { p: self.p, d, p1: self.p1.map(f), p2: self.p2.map(f), p3: self.p3.map(f) }
    }
}

/// Residuals of the three linear PDEs obtained from `Ḟ3 = 0`:
/// `(d/p) L P1 + P3`, `(d/p) ω2 L P2 − ω1 P3`, `(d/p) ω2 L P3 + ω1 P2 − ω2 P1`.
pub fn verify_pde_system<T: Field>(e: &ExtraIntegral<T>) -> [HomogeneousPoly2<T>; 3] {
    let k = e.d.clone() / T::from_i64(e.p);
    let l1 = lie_operator(&e.p1, &e.d).scale(&k);
    let l2 = lie_operator(&e.p2, &e.d).scale(&k);
    let l3 = lie_operator(&e.p3, &e.d).scale(&k);
    [
        l1.add(&e.p3),
        l2.mul_omega2().sub(&e.p3.mul_omega1()),
        l3.mul_omega2().add(&e.p2.mul_omega1()).sub(&e.p1.mul_omega2()),
    ]
}

/// Coefficients of `γ1, γ2, γ3` in `dF3/dt`.
pub fn f3_time_derivative<T: Field>(e: &ExtraIntegral<T>) -> [HomogeneousPoly2<T>; 3] {
    let [r1, r2, r3] = verify_pde_system(e);
    [r1.mul_omega2(), r2, r3]
}

pub fn f3_evaluate(e: &ExtraIntegral<f64>, x: &BodyState) -> f64 {
    let (w1, w2) = (x.omega1, x.omega2);
    e.p1.eval(&w1, &w2) * x.gamma1 + e.p2.eval(&w1, &w2) * x.gamma2 + e.p3.eval(&w1, &w2) * x.gamma3
}

/// Result of the dehomogenized third-order check.
#[derive(Debug, Clone, PartialEq)]
pub struct ThirdOrderCheck<T: Field> {
    /// `d² ω² K³ (p1''' + q1 p1'' + q2 p1' + q3 p1)`, `K = 1 + d² + ω²`.
    pub residual: Poly<T>,
    /// `v(z) = (z−1)^{(p−1)/2} p1` as a polynomial in `z`.
    pub v: Poly<T>,
    /// `v − v(0) ℱ1`.
    pub f1_mismatch: Poly<T>,
}

impl<T: Field> ThirdOrderCheck<T> {
    pub fn is_exact(&self) -> bool {
        self.residual.is_zero() && self.f1_mismatch.is_zero()
    }
}

pub fn third_order_ode_check<T: Field>(p: f64, d: &T) -> Result<ThirdOrderCheck<T>, IntegralError> {
    let e = build_extra_integral(p, d)?;
    let n = e.p;
    let pp = T::from_i64(n);
    let c = |v: i64| T::from_i64(v);
    let d2 = d.clone() * d.clone();
    let e1 = d2.clone() + T::one();
    let w = Poly::<T>::x();
    let w2 = &w * &w;
    let k = &Poly::constant(e1.clone()) + &w2;
    let k2 = &k * &k;
    let k3 = &k2 * &k;
    let cst = |v: T| Poly::constant(v);

    let y = e.p1.dehomogenize();
    let y1 = y.derivative();
    let y2 = y1.derivative();
    let y3 = y2.derivative();

    let a3 = &(&cst(d2.clone()) * &w2) * &k3;
    let a2 = &(&(&cst(d2.clone()) * &w) * &k3) - &(&(&w2 * &w).scale(&(c(3) * (pp.clone() - c(2)) * d2.clone())) * &k2);
    let inner2 = &(&w2.scale(&d2)
        * &(&cst(-(e1.clone() * (c(5) * pp.clone() - c(4)))) + &w2.scale(&((pp.clone() - c(1)) * (c(3) * pp.clone() - c(8))))))
        + &(&cst(T::one()) + &w2).scale(&(e1.clone() * e1.clone() * pp.clone() * pp.clone()));
    let a1 = &k * &inner2;
    let w4 = &w2 * &w2;
    let bracket1 = (&(&cst(e1.clone() * e1.clone()) - &w2.scale(&(c(4) * e1.clone() * (pp.clone() - c(1)))))
        + &w4.scale(&(c(3) + (pp.clone() - c(4)) * pp.clone())))
        .scale(&(d2.clone() * pp.clone()));
    let bracket2 = (&cst(d2.clone()) - &(&cst(T::one()) + &w2).scale(&(pp.clone() - c(1))))
        .scale(&(e1.clone() * e1.clone() * pp.clone() * pp.clone()));
    let a0 = -&(&w * &(&bracket1 - &bracket2));

    let residual = &(&(&(&a3 * &y3) + &(&a2 * &y2)) + &(&a1 * &y1)) + &(&a0 * &y);

    // ω² = (d²+1) z/(1−z); v = (−1)^m Σ e_j (d²+1)^j z^j (1−z)^{m−j}
    let m = ((n - 1) / 2) as usize;
    let z = Poly::<T>::x();
    let omz = &cst(T::one()) - &z;
    let sign = if m % 2 == 0 { T::one() } else { -T::one() };
    let mut v = Poly::zero();
    for j in 0..=m {
        let ej = y.coeff(2 * j);
        let term = (&z.pow(j as u32) * &omz.pow((m - j) as u32)).scale(&(ej * e1.powi(j as u32) * sign.clone()));
        v = &v + &term;
    }
    let f1 = Poly::new(f1_coefficients_generic(&pp, &d2, m));
    let f1_mismatch = &v - &f1.scale(&v.coeff(0));
    Ok(ThirdOrderCheck { residual, v, f1_mismatch })
}

/// JSON-friendly coefficient dump at numeric `d`.
#[derive(Debug, Clone, Serialize)]
pub struct IntegralTable {
    pub p: i64,
    pub d: f64,
    /// Coefficient `k` multiplies `ω1^k ω2^{p−k}`.
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub p3: Vec<f64>,
}

impl From<&ExtraIntegral<f64>> for IntegralTable {
    fn from(e: &ExtraIntegral<f64>) -> Self {
        IntegralTable { p: e.p, d: e.d, p1: e.p1.coeffs.clone(), p2: e.p2.coeffs.clone(), p3: e.p3.coeffs.clone() }
    }
}
