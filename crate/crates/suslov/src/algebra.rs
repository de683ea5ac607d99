//! Scalar fields, dense univariate polynomials and rational functions.
//!
//! Exact zero-tests (Frobenius compatibility, PDE residuals) run over
//! [`Rational`], [`GaussRational`] or [`RatFunc`]; the same generic code
//! runs over `f64` / `Complex64` for floating evaluation.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rational = BigRational;
pub type GaussRational = Complex<BigRational>;

/// Commutative field with exact or floating arithmetic.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Field containing the imaginary unit.
pub trait ComplexField: Field {
    fn i() -> Self;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    /// Zero test: exact for rational types, relative to `scale` for floats.
    fn is_negligible(&self, scale: f64) -> bool;
}

impl Field for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

impl Field for Complex64 {
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl ComplexField for Complex64 {
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= 1e-10 * scale
    }
}

impl Field for Rational {
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl Field for GaussRational {
    fn from_i64(n: i64) -> Self {
        Complex::new(Rational::from_i64(n), Rational::zero())
    }
}

impl ComplexField for GaussRational {
    fn i() -> Self {
        Complex::new(Rational::zero(), Rational::one())
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn to_c64(&self) -> Complex64 {
        gauss_to_c64(self)
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gauss(re: Rational, im: Rational) -> GaussRational {
    Complex::new(re, im)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn gauss_to_c64(z: &GaussRational) -> Complex64 {
    Complex64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

/// Exact rational square root if `r` is a perfect square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r < &Rational::zero() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Parses a decimal or fraction literal ("0.75", "3/4", "-2", "1e-3") exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

/// Dense polynomial, coefficients in ascending order, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<T> {
    c: Vec<T>,
}

impl<T: Field> Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.c)
    }
}

impl<T: Field> Poly<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(a: T) -> Self {
        Poly::new(vec![a])
    }

    /// The polynomial `a·x^k`.
    pub fn monomial(a: T, k: usize) -> Self {
        let mut c = vec![T::zero(); k + 1];
        c[k] = a;
        Poly::new(c)
    }

    pub fn x() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> T {
        self.c.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lead(&self) -> T {
        self.c.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.c.iter().rev().fold(T::zero(), |acc, a| acc * x.clone() + a.clone())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, a: &T) -> Self {
        Poly::new(self.c.iter().map(|x| x.clone() * a.clone()).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = T::one() / self.lead();
        self.scale(&inv)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, other: &Self) -> (Self, Self) {
        assert!(!other.is_zero(), "polynomial division by zero");
        let dd = other.c.len() - 1;
        if self.c.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let mut q = vec![T::zero(); self.c.len() - dd];
        let lead = other.lead();
        for k in (0..q.len()).rev() {
            let f = r[k + dd].clone() / lead.clone();
            if f.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                r[k + j] = r[k + j].clone() - f.clone() * b.clone();
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Taylor shift: returns `P(s + x)`.
    pub fn shift(&self, s: &T) -> Self {
        let lin = Poly::new(vec![s.clone(), T::one()]);
        self.c
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, a| &(&acc * &lin) + &Poly::constant(a.clone()))
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.c.iter().map(f).collect())
    }
}

impl<T: Field> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<T: Field> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<T: Field> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![T::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c)
    }
}

impl<T: Field> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.c.iter().map(|a| -a.clone()).collect())
    }
}

macro_rules! owned_binops {
    ($($tr:ident $m:ident),*) => {$(
        impl<T: Field> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, o: Poly<T>) -> Poly<T> { (&self).$m(&o) }
        }
    )*};
}
owned_binops!(Add add, Sub sub, Mul mul);

/// First `n` Taylor coefficients of `num/den` at 0; requires `den(0) != 0`.
pub fn series_div<T: Field>(num: &Poly<T>, den: &Poly<T>, n: usize) -> Vec<T> {
    let d0 = den.coeff(0);
    assert!(!d0.is_zero(), "series division by a function vanishing at 0");
    let mut out: Vec<T> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = num.coeff(k);
        for j in 1..=k {
            let dj = den.coeff(j);
            if !dj.is_zero() {
                s = s - dj * out[k - j].clone();
            }
        }
        out.push(s / d0.clone());
    }
    out
}

/// Element of ℚ(d): reduced fraction of polynomials with monic denominator.
#[derive(Clone, PartialEq)]
pub struct RatFunc {
    num: Poly<Rational>,
    den: Poly<Rational>,
}

impl Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl RatFunc {
    pub fn new(num: Poly<Rational>, den: Poly<Rational>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let lead = d.lead();
        if !lead.is_one() {
            let inv = Rational::one() / lead;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    /// The indeterminate `d`.
    pub fn var() -> Self {
        RatFunc { num: Poly::x(), den: Poly::one() }
    }

    pub fn constant(r: Rational) -> Self {
        RatFunc { num: Poly::constant(r), den: Poly::one() }
    }

    pub fn numer(&self) -> &Poly<Rational> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<Rational> {
        &self.den
    }

    pub fn eval(&self, d: &Rational) -> Rational {
        self.num.eval(d) / self.den.eval(d)
    }

    pub fn eval_f64(&self, d: f64) -> f64 {
        let n = self.num.map(|r| rational_to_f64(r)).eval(&d);
        let m = self.den.map(|r| rational_to_f64(r)).eval(&d);
        n / m
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den);
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self + (-o)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, o: RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "rational function division by zero");
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den }
    }
}

impl Field for RatFunc {
    fn from_i64(n: i64) -> Self {
        RatFunc::constant(Rational::from_i64(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| Rational::from_i64(x)).collect())
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[3, 0, -2, 5, 1]);
        let b = p(&[1, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = p(&[1, 1]);
        let a = &f * &p(&[2, 0, 1]);
        let b = &f * &p(&[-3, 1]);
        assert_eq!(Poly::gcd(&a, &b), f);
    }

    #[test]
    fn shift_matches_evaluation() {
        let a = p(&[1, -4, 0, 2]);
        let s = rat(3, 2);
        let sh = a.shift(&s);
        for x in [-2i64, 0, 1, 5] {
            let xv = Rational::from_i64(x);
            assert_eq!(sh.eval(&xv), a.eval(&(s.clone() + xv.clone())));
        }
    }

    #[test]
    fn series_div_inverts_geometric() {
        let s = series_div(&Poly::<Rational>::one(), &p(&[1, -1]), 6);
        assert!(s.iter().all(|c| c.is_one()));
    }

    #[test]
    fn ratfunc_normalizes() {
        let d = RatFunc::var();
        let one = RatFunc::one();
        let x = (d.clone() * d.clone() - one.clone()) / (d.clone() - one.clone());
        assert_eq!(x, d + RatFunc::one());
        let z = RatFunc::var() / (RatFunc::var() + one.clone()) - RatFunc::var() / (RatFunc::var() + one);
        assert!(z.is_zero());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("0.75"), Some(rat(3, 4)));
        assert_eq!(parse_rational("-3/4"), Some(rat(-3, 4)));
        assert_eq!(parse_rational("1e-2"), Some(rat(1, 100)));
        assert_eq!(parse_rational("2"), Some(rat(2, 1)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(rational_sqrt(&rat(9, 16)), Some(rat(3, 4)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
    }
}
