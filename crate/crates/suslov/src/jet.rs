//! Truncated complex Taylor series `Σ c_k (t − t0)^k`, `k < N`.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const N: usize>(pub [Complex64; N]);

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl<const N: usize> Jet<N> {
    pub fn constant(c: Complex64) -> Self {
        let mut a = [ZERO; N];
        a[0] = c;
        Jet(a)
    }

    pub fn real(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    /// The independent variable expanded at `t0`.
    pub fn var(t0: Complex64) -> Self {
        let mut a = [ZERO; N];
        a[0] = t0;
        if N > 1 {
            a[1] = Complex64::new(1.0, 0.0);
        }
        Jet(a)
    }

    pub fn value(&self) -> Complex64 {
        self.0[0]
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative_at(&self, k: usize) -> Complex64 {
        let f: f64 = (1..=k).map(|j| j as f64).product();
        self.0[k] * f
    }

    /// Jet of the derivative; the top coefficient becomes unknown and is set to zero.
    pub fn diff(&self) -> Self {
        let mut a = [ZERO; N];
        for k in 0..N - 1 {
            a[k] = self.0[k + 1] * (k + 1) as f64;
        }
        Jet(a)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Jet(self.0.map(|x| x * c))
    }

    pub fn exp(&self) -> Self {
        let mut b = [ZERO; N];
        b[0] = self.0[0].exp();
        for k in 1..N {
            let mut s = ZERO;
            for j in 1..=k {
                s += self.0[j] * b[k - j] * j as f64;
            }
            b[k] = s / k as f64;
        }
        Jet(b)
    }

    pub fn recip(&self) -> Self {
        let inv = self.0[0].inv();
        let mut b = [ZERO; N];
        b[0] = inv;
        for k in 1..N {
            let mut s = ZERO;
            for j in 1..=k {
                s += self.0[j] * b[k - j];
            }
            b[k] = -s * inv;
        }
        Jet(b)
    }

    pub fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut r = Self::real(1.0);
        let mut base = *self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base;
            }
            base = base * base;
            e >>= 1;
        }
        r
    }

    /// Quotient when the denominator vanishes at the expansion point to some
    /// order `m` and the numerator vanishes to at least the same order; the
    /// top `m` coefficients of the result are lost and set to zero.
    pub fn div_removable(&self, den: &Self, eps: f64) -> Self {
        let scale = den.0.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let m = den.0.iter().position(|c| c.norm() > eps * scale).unwrap_or(N);
        if m == 0 || m >= N {
            return *self / *den;
        }
        let mut a = [ZERO; N];
        let mut b = [ZERO; N];
        for k in 0..N - m {
            a[k] = self.0[k + m];
            b[k] = den.0[k + m];
        }
        b[N - m..].fill(ZERO);
        // truncate the shifted quotient to the reliable orders
        let mut q = Jet(a) / Jet(b);
        q.0[N - m..].fill(ZERO);
        q
    }

    /// Re-expansion of the series about `t0 + h` (requires `|h|` inside the radius).
    pub fn shift(&self, h: Complex64) -> Self {
        let mut out = [ZERO; N];
        for (j, o) in out.iter_mut().enumerate() {
            // Σ_{k≥j} C(k, j) c_k h^{k−j}, Horner in h
            let mut s = ZERO;
            for k in (j..N).rev() {
                s = s * h + self.0[k] * binom(k, j);
            }
            *o = s;
        }
        Jet(out)
    }
}

fn binom(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut a = self.0;
        for k in 0..N {
            a[k] += o.0[k];
        }
        Jet(a)
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut a = self.0;
        for k in 0..N {
            a[k] -= o.0[k];
        }
        Jet(a)
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet(self.0.map(|x| -x))
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut a = [ZERO; N];
        for i in 0..N {
            if self.0[i] == ZERO {
                continue;
            }
            for j in 0..N - i {
                a[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(a)
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl<const N: usize> Add<Complex64> for Jet<N> {
    type Output = Self;
    fn add(self, c: Complex64) -> Self {
        let mut a = self.0;
        a[0] += c;
        Jet(a)
    }
}

impl<const N: usize> Add<f64> for Jet<N> {
    type Output = Self;
    fn add(self, c: f64) -> Self {
        self + Complex64::new(c, 0.0)
    }
}

impl<const N: usize> Mul<Complex64> for Jet<N> {
    type Output = Self;
    fn mul(self, c: Complex64) -> Self {
        self.scale(c)
    }
}

impl<const N: usize> Mul<f64> for Jet<N> {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Jet(self.0.map(|x| x * c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type J = Jet<8>;

    #[test]
    fn exp_of_var_has_factorial_coefficients() {
        let e = J::var(Complex64::new(0.0, 0.0)).exp();
        let mut f = 1.0;
        for k in 0..8 {
            if k > 0 {
                f *= k as f64;
            }
            assert!((e.0[k].re - 1.0 / f).abs() < 1e-15);
        }
    }

    #[test]
    fn removable_division_sin_over_t() {
        let t = J::var(Complex64::new(0.0, 0.0));
        let i = Complex64::new(0.0, 1.0);
        let sin = ((t * i).exp() - (t * (-i)).exp()) * Complex64::new(0.0, -0.5);
        let q = sin.div_removable(&t, 1e-14);
        assert!((q.0[0].re - 1.0).abs() < 1e-15);
        assert!((q.0[2].re + 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn shift_matches_direct_expansion() {
        let t0 = Complex64::new(0.1, 0.0);
        let h = Complex64::new(0.05, 0.0);
        let a = Jet::<20>::var(t0).exp();
        let b = Jet::<20>::var(t0 + h).exp();
        let s = a.shift(h);
        for k in 0..5 {
            assert!((s.0[k] - b.0[k]).norm() < 1e-14);
        }
    }
}
