use nalgebra::SMatrix;
use num_traits::{One, Zero};
use proptest::prelude::*;
use suslov::algebra::{rat, Field, Poly, RatFunc, Rational};
use suslov::hyper::f1_coefficients_generic;
use suslov::integrals::*;
use suslov::integrator::{integrate, BodyState, Dynamics, Options};

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[test]
fn q_p1_is_constant_one() {
    let q = q_polynomial(1.0, &RatFunc::var()).unwrap();
    assert_eq!(q.degree, 0);
    assert_eq!(q.coeffs[0], RatFunc::one());
}

#[test]
fn q_p3_expansion() {
    // F1 (1 + c1 z) with c1 = −4d²/(d²+9)
    let d = rat(2, 3);
    let q = q_polynomial(3.0, &d).unwrap();
    let d2 = d.clone() * d.clone();
    let c1 = -(r(4) * d2.clone()) / (d2.clone() + r(9));
    assert_eq!(q.coeffs, vec![r(1) + c1, r(0), d2 + r(1)]);
}

#[test]
fn q_is_even_in_both_variables() {
    for p in [1, 3, 5, 7, 9] {
        let q = q_polynomial(p as f64, &RatFunc::var()).unwrap();
        assert_eq!(q.degree, (p - 1) as usize);
        assert!(q.is_even_in_omega1() && q.is_even_in_omega2(), "p={p}");
    }
}

#[test]
fn p1_integral_is_hand_form_over_d() {
    // d ω1 γ1 + d/(d²+1) ω2 γ2 − d²/(d²+1) ω2 γ3, divided by d
    let d = RatFunc::var();
    let e = build_extra_integral_exact(1.0).unwrap();
    let e1 = d.clone() * d.clone() + RatFunc::one();
    assert_eq!(e.p1.coeffs, vec![RatFunc::zero(), RatFunc::one()]);
    assert_eq!(e.p2.coeffs, vec![RatFunc::one() / e1.clone(), RatFunc::zero()]);
    assert_eq!(e.p3.coeffs, vec![-(d / e1), RatFunc::zero()]);
}

#[test]
fn p1_hand_value() {
    let e = build_extra_integral(1.0, &1.0).unwrap();
    let x = BodyState::new(1.0, 1.0, 1.0, 1.0, 1.0);
    // hand value 1 at d = 1, scaled by 1/d = 1
    assert!((f3_evaluate(&e, &x) - 1.0).abs() < 1e-15);
    assert_eq!(f3_evaluate(&e, &BodyState::new(0.3, -1.2, 0.0, 0.0, 0.0)), 0.0);
}

#[test]
fn pde_system_exact_for_odd_p() {
    for p in [1, 3, 5, 7, 9] {
        let e = build_extra_integral_exact(p as f64).unwrap();
        for (k, res) in verify_pde_system(&e).iter().enumerate() {
            assert!(res.is_zero(), "p={p} eq={k}");
        }
        assert_eq!((e.p1.degree, e.p2.degree, e.p3.degree), (p as usize, p as usize, p as usize));
        assert!(e.p1.is_odd_in_omega1() && e.p1.is_even_in_omega2());
    }
}

#[test]
fn pde_system_exact_p5_rational_d() {
    let e = build_extra_integral(5.0, &rat(1, 2)).unwrap();
    assert!(verify_pde_system(&e).iter().all(|r| r.is_zero()));
}

#[test]
fn time_derivative_is_zero_polynomial() {
    for p in [3, 7, 9] {
        let e = build_extra_integral_exact(p as f64).unwrap();
        assert!(f3_time_derivative(&e).iter().all(|r| r.is_zero()));
    }
}

#[test]
fn perturbed_p1_is_detected() {
    let mut e = build_extra_integral(5.0, &rat(1, 2)).unwrap();
    e.p1.coeffs[1] = e.p1.coeffs[1].clone() + rat(1, 1000);
    assert!(verify_pde_system(&e).iter().any(|r| !r.is_zero()));
    let mut f = build_extra_integral(5.0, &0.5).unwrap();
    f.p1.coeffs[1] += 1e-3;
    let max = verify_pde_system(&f).iter().flat_map(|r| r.coeffs.clone()).fold(0.0f64, |m, c| m.max(c.abs()));
    assert!(max > 1e-4);
}

#[test]
fn float_mode_residual_small() {
    for p in [3.0, 5.0, 9.0] {
        let e = build_extra_integral(p, &0.83).unwrap();
        for res in verify_pde_system(&e) {
            let scale = e.p1.coeffs.iter().fold(1.0f64, |m, c| m.max(c.abs()));
            assert!(res.coeffs.iter().all(|c| c.abs() < 1e-10 * scale));
        }
    }
}

#[test]
fn third_order_check_exact() {
    for p in [1, 3, 5, 7, 9] {
        let chk = third_order_ode_check(p as f64, &RatFunc::var()).unwrap();
        assert!(chk.residual.is_zero(), "p={p}");
        assert!(chk.f1_mismatch.is_zero(), "p={p}");
        assert!(chk.is_exact());
    }
    let chk = third_order_ode_check(3.0, &rat(1, 2)).unwrap();
    assert!(chk.is_exact());
}

#[test]
fn recovered_v_is_scaled_f1() {
    // v(z) = (−1)^m (d²+1)^m ℱ1(z), compared with an independent float ℱ1
    let d = rat(3, 5);
    let p = 7i64;
    let chk = third_order_ode_check(p as f64, &d).unwrap();
    let d2 = d.clone() * d.clone();
    let f1 = f1_coefficients_generic(&r(p), &d2, 3);
    let k = -(d2 + r(1)).powi(3);
    let expect = Poly::new(f1.iter().map(|c| c.clone() * k.clone()).collect());
    assert_eq!(chk.v, expect);
}

#[test]
fn f3_conserved_along_trajectories() {
    for &(p, d) in &[(1.0, 0.5), (3.0, 0.5), (5.0, 1.3), (9.0, 0.8)] {
        let e = build_extra_integral_exact(p).unwrap().specialize(d);
        let dynamics = Dynamics::Special { p, d };
        let x0 = BodyState::new(0.4, -0.9, 0.3, 0.5, (1.0f64 - 0.34).sqrt());
        let traj = integrate(&dynamics, x0, 0.0, 20.0, 200, &Options::new(1e-10, 1e-12)).unwrap();
        let f0 = f3_evaluate(&e, &traj.samples[0].state);
        let drift = traj.samples.iter().map(|s| (f3_evaluate(&e, &s.state) - f0).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-8, "p={p} d={d} drift={drift}");
    }
}

fn grad(f: &dyn Fn(&[f64; 5]) -> f64, x: &[f64; 5]) -> [f64; 5] {
    let mut g = [0.0; 5];
    let h = 1e-6;
    for k in 0..5 {
        let mut a = *x;
        let mut b = *x;
        a[k] += h;
        b[k] -= h;
        g[k] = (f(&a) - f(&b)) / (2.0 * h);
    }
    g
}

#[test]
fn f3_functionally_independent() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for &p in &[3.0, 5.0] {
        let d = 0.7;
        let e = build_extra_integral(p, &d).unwrap();
        let dy = Dynamics::Special { p, d };
        let f1 = |x: &[f64; 5]| dy.f1(&BodyState::from_array(x));
        let f2 = |x: &[f64; 5]| BodyState::from_array(x).f2();
        let f3 = |x: &[f64; 5]| f3_evaluate(&e, &BodyState::from_array(x));
        for _ in 0..20 {
            let x: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let rows = [grad(&f1, &x), grad(&f2, &x), grad(&f3, &x)];
            let m = SMatrix::<f64, 3, 5>::from_fn(|i, j| rows[i][j]);
            let sv = m.singular_values();
            let smax = sv.max();
            assert!(sv.iter().filter(|s| **s > 1e-8 * smax).count() == 3);
        }
    }
}

#[test]
fn even_p_rejected() {
    assert_eq!(build_extra_integral(4.0, &0.5).unwrap_err(), IntegralError::ParityError(4.0));
    assert!(q_polynomial(2.0, &0.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn pde_residual_vanishes_at_rational_d(k in 0usize..5, num in 1i64..40, den in 1i64..40) {
        let p = [1.0, 3.0, 5.0, 7.0, 9.0][k];
        let e = build_extra_integral(p, &rat(num, den)).unwrap();
        prop_assert!(verify_pde_system(&e).iter().all(|r| r.is_zero()));
        prop_assert_eq!(e.p2.degree, e.p.unsigned_abs() as usize);
    }
}
