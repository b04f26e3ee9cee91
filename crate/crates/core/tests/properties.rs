use std::f64::consts::{FRAC_PI_2, PI, TAU};

use approx::assert_relative_eq;
use proptest::prelude::*;

use latdisc::counting::{count_brute, count_exact};
use latdisc::expsum::{construct_vstar, difference_transform, eval_sum, hq_determinant, Amplitude, Ball, ExpSumInstance, Phase};
use latdisc::fourier::{ft_numeric, ft_numeric_branch, tail_envelope};
use latdisc::poisson::Mollifier;
use latdisc::{DomainSpec, RotatedDomain, Superellipse, Vec2};

fn domain_strategy() -> impl Strategy<Value = RotatedDomain> {
    (1u32..=4, 0.5f64..1.5, 0.5f64..1.5, 0.0..TAU)
        .prop_map(|(h, a, b, th)| RotatedDomain::new(Superellipse::new(2 * h, a, b).unwrap(), th))
}

fn unit_domain_strategy() -> impl Strategy<Value = RotatedDomain> {
    (1u32..=3, 0.0..TAU).prop_map(|(h, th)| RotatedDomain::new(Superellipse::unit(2 * h).unwrap(), th))
}

fn central_gradient(f: impl Fn(Vec2) -> f64, xi: Vec2, h: f64) -> Vec2 {
    Vec2::new(
        (f(xi + Vec2::new(h, 0.0)) - f(xi - Vec2::new(h, 0.0))) / (2.0 * h),
        (f(xi + Vec2::new(0.0, h)) - f(xi - Vec2::new(0.0, h))) / (2.0 * h),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_and_curvature_homogeneity(d in domain_strategy(), phi in 0.0..TAU, r in 0.3f64..3.0) {
        let xi = Vec2::from_angle(phi) * r;
        let h = d.support(xi).unwrap();
        let k = d.curvature(xi).unwrap();
        for s in [0.5, 2.0, 7.0] {
            assert_relative_eq!(d.support(xi * s).unwrap(), s * h, max_relative = 1e-10);
            assert_relative_eq!(d.curvature(xi * s).unwrap(), k, max_relative = 1e-10, epsilon = 1e-300);
        }
    }

    #[test]
    fn gauss_point_rotation_equivariance(d in domain_strategy(), phi in 0.0..TAU) {
        let xi = Vec2::from_angle(phi);
        let base = RotatedDomain::new(*d.base(), 0.0);
        let r = d.rotation();
        let want = r.apply(base.gauss_point(r.apply_inverse(xi)).unwrap().position);
        let got = d.gauss_point(xi).unwrap().position;
        prop_assert!((got - want).norm() <= 1e-10);
    }

    #[test]
    fn support_gradient_is_gauss_point(d in domain_strategy(), phi in 0.0..TAU, r in 0.5f64..2.0) {
        let xi = Vec2::from_angle(phi) * r;
        prop_assume!(d.curvature(xi).unwrap() > 0.05);
        let grad = central_gradient(|v| d.support(v).unwrap(), xi, 1e-5);
        let x = d.gauss_point(xi).unwrap().position;
        prop_assert!((grad - x).norm() <= 1e-6);
        prop_assert!((grad.dot(xi) - d.support(xi).unwrap()).abs() <= 1e-6);
    }

    #[test]
    fn hessian_spectrum(d in domain_strategy(), phi in 0.0..TAU, r in 0.5f64..3.0) {
        let xi = Vec2::from_angle(phi) * r;
        let k = d.curvature(xi).unwrap();
        prop_assume!(k >= 0.2);
        let [lo, hi] = d.support_hessian(xi, None, 0.0).unwrap().eigenvalues();
        let want = 1.0 / (r * k);
        prop_assert!(lo.abs().min(hi.abs()) <= 1e-5);
        prop_assert!((lo.abs().max(hi.abs()) - want).abs() <= 1e-4 * want);
    }

    #[test]
    fn curvature_stability(d in domain_strategy(), phi in 0.0..TAU, frac in -1.0f64..1.0) {
        let xi = Vec2::from_angle(phi);
        let k = d.curvature(xi).unwrap();
        prop_assume!(k > 1e-6);
        let eta = Vec2::from_angle(phi + frac * 0.01 * k.powf(1.5));
        let ratio = d.curvature(eta).unwrap() / k;
        prop_assert!((0.25..=4.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn counts_monotone_in_t(d in unit_domain_strategy(), t in 1.0f64..40.0, dt in 0.0f64..3.0) {
        let a = count_exact(&d, t).unwrap().count;
        let b = count_exact(&d, t + dt).unwrap().count;
        prop_assert!(a <= b);
    }

    #[test]
    fn quarter_turn_symmetry(d in unit_domain_strategy(), t in 1.0f64..60.0) {
        let turned = d.with_theta(d.theta() + FRAC_PI_2);
        prop_assert_eq!(count_exact(&d, t).unwrap().count, count_exact(&turned, t).unwrap().count);
    }

    #[test]
    fn exact_matches_brute(d in domain_strategy(), t in 1.0f64..30.0) {
        prop_assert_eq!(count_exact(&d, t).unwrap().count, count_brute(&d, t).unwrap().count);
    }

    #[test]
    fn fourier_conjugate_symmetry_and_envelope(d in unit_domain_strategy(), phi in 0.0..TAU, lambda in 1.0f64..300.0) {
        let xi = Vec2::from_angle(phi);
        let a = ft_numeric(&d, xi, lambda).unwrap();
        let b = ft_numeric(&d, xi * -1.0, lambda).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-9 * a.norm().max(1e-12));
        prop_assert!(a.norm() <= tail_envelope(d.base().perimeter(), lambda) * (1.0 + 1e-9));
    }

    #[test]
    fn green_branches_agree(d in unit_domain_strategy(), phi in 0.0..TAU, lambda in 1.0f64..300.0) {
        let xi = Vec2::from_angle(phi);
        prop_assume!(xi.x.abs() >= 0.3 && xi.y.abs() >= 0.3);
        let a = ft_numeric_branch(&d, xi, lambda, 1).unwrap();
        let b = ft_numeric_branch(&d, xi, lambda, 2).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(lambda.powf(-1.5)));
    }

    #[test]
    fn branch_index_is_validated(phi in 0.0..TAU, l in prop_oneof![Just(0usize), 3usize..10]) {
        let d = RotatedDomain::new(Superellipse::disk(), 0.0);
        prop_assert!(ft_numeric_branch(&d, Vec2::from_angle(phi), 5.0, l).is_err());
    }

    #[test]
    fn mollifier_envelope_dominates(s in 0.0f64..200.0) {
        let m = Mollifier::standard();
        prop_assert!(m.rho_hat(s).abs() <= m.envelope(s) * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn vstar_approximates_direction(phi in 0.0..TAU, n in 3i64..10_000) {
        let xi = Vec2::from_angle(phi);
        let v = construct_vstar(xi, 1, 0.5, Some(n)).unwrap();
        prop_assert!((xi.x - v.n1 as f64 / n as f64).abs() <= 1.0 / n as f64);
        prop_assert!((xi.y - v.n2 as f64 / n as f64).abs() <= 1.0 / n as f64);
        prop_assert_eq!(v.l, (v.n1 * v.n1 + v.n2 * v.n2) as i128);
        prop_assert_eq!(v.v1.0 * v.v2.0 + v.v1.1 * v.v2.1, 0);
    }

    #[test]
    fn hq_scaling_law(d in unit_domain_strategy(), phi in 0.0..TAU, q in 1usize..=3, n in 2.0f64..6.0,
                      a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, e in -2.0f64..2.0) {
        let y = Vec2::from_angle(phi);
        prop_assume!(d.curvature(y).unwrap() > 0.05);
        let (v1, v2) = (Vec2::new(a, b), Vec2::new(c, e));
        let h = hq_determinant(&d, y, v1, v2, q).unwrap();
        let hn = hq_determinant(&d, y, v1 * n, v2 * n, q).unwrap();
        let p = 2 * q as i32 + 4;
        let scale = hn.abs().max((n * (v1.norm() + v2.norm())).powi(p));
        prop_assert!((hn - h * n.powi(p)).abs() <= 1e-9 * scale);
    }

    #[test]
    fn exponential_sum_triangle_and_keystone(
        c in prop::collection::vec((0u32..4, 0u32..4, -1.0f64..1.0), 1..5),
        t in 0.5f64..50.0, m in 5.0f64..40.0, r1 in -2i64..=2, r2 in 1i64..=2, h in 1u64..=3,
        px in -0.3f64..0.3, py in -0.3f64..0.3,
    ) {
        let g = Amplitude::Bump { center: Vec2::new(0.0, 0.0), radius: 0.5, height: 1.0 };
        let inst = ExpSumInstance::new(t, m, g, Phase::Polynomial(c), Ball { center: Vec2::new(0.0, 0.0), radius: 0.9 }).unwrap();
        prop_assert!(eval_sum(&inst).is_ok());
        let d = difference_transform(&inst, 1, &[(r1, r2)], &[h]).unwrap();
        let x = Vec2::new(px, py);
        let lhs = d.f_q(x) * d.difference_scale();
        let rhs = d.forward_difference(x);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()) * 8.0);
    }

    #[test]
    fn domain_spec_round_trip(h in 1u32..=5, a in 0.1f64..5.0, b in 0.1f64..5.0, th in -PI..PI) {
        let s = DomainSpec { omega: 2 * h, a, b, theta: th };
        let back: DomainSpec = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }
}
