use std::f64::consts::PI;

use dulac_core::{
    brute_force_support, build_path, check_growth_bound, dulac_map, dulac_time, lift_segment,
    prepare_field, resonant_support, stability_params, t_nm, BasePoint, FieldSpec, Lambda,
    Polydisc, SolverConfig, TruncatedSeries, C64,
};
use dulac_testkit::{enumerate_quasi_resonances, integrate_segment, rk4_fixed};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn unit_disc() -> Polydisc {
    Polydisc::new(1.0, 1.0).unwrap()
}

#[test]
fn lift_matches_fixed_step_rk4() {
    let field = FieldSpec::new(
        Lambda::negative_rational(1, 1).unwrap(),
        2,
        TruncatedSeries::from_terms([(2, 1, c(0.3, 0.0)), (3, 2, c(-0.1, 0.2))]),
        unit_disc(),
    )
    .unwrap();
    let (za, zb, w0) = (c(-4.0, 0.5), c(-1.0, -0.7), c(-2.5, 0.1));
    let len = (zb - za).norm();
    let theta = (zb - za) / len;
    let lambda = field.lambda.value();
    let rhs = |t: f64, w: C64| {
        let z = za + theta * t;
        theta * (C64::new(1.0, 0.0) + field.r.eval(z.exp(), w.exp())) / lambda
    };
    let want = rk4_fixed(rhs, 0.0, len, w0, 4000);
    let got = lift_segment(&field, za, zb, w0, &SolverConfig::default()).unwrap();
    assert!(got.is_ok());
    assert!(
        (got.endpoint_w - want).norm() < 1e-9,
        "{} vs {want}",
        got.endpoint_w
    );
}

#[test]
fn path_ends_where_requested() {
    let lambda = Lambda::new(c(-1.0, 0.4)).unwrap();
    let disc = unit_disc();
    let base = BasePoint::new(c(-1.0, 0.2), c(-1.0, 0.0), 1).unwrap();
    let params = stability_params(&lambda, 0.2, &disc, 1, 0.1, base.z_star).unwrap();
    for z in [c(-6.0, 2.0), c(-0.3, -2.5), c(-1.0, 0.2), c(-2.0, 3.3)] {
        let path = build_path(z, &base, &params, params.epsilon).unwrap();
        assert_eq!(path.start(), z);
        assert_eq!(path.end(), base.z_star);
        assert!(path.vertices.iter().all(|v| v.re <= disc.ln_rho()));
    }
}

#[test]
fn time_with_u_one_plus_x_matches_quadrature() {
    let disc = Polydisc::new(0.9, 1.0).unwrap();
    let lambda = Lambda::new(c(-1.0, 0.3)).unwrap();
    let field = FieldSpec::new(lambda, 1, TruncatedSeries::zero(0, 0), disc).unwrap();
    let base = BasePoint::new(c(-1.0, 0.0), c(-1.5, 0.0), 1).unwrap();
    let params = stability_params(&lambda, 0.0, &disc, 1, 0.1, base.z_star).unwrap();
    let u = TruncatedSeries::from_terms([(0, 0, c(1.0, 0.0)), (1, 0, c(0.5, 0.5))]);
    let l = lambda.value();
    for z in [c(-3.0, 0.0), c(-4.0, 2.0), c(-0.5, -1.0)] {
        let got = dulac_time(&field, &u, z, &base, &params, &SolverConfig::default()).unwrap();
        let want = integrate_segment(
            |v: C64| (l * (1.0 + c(0.5, 0.5) * v.exp())).inv(),
            z,
            base.z_star,
            1e-13,
        );
        assert!((got - want).norm() < 1e-8 * want.norm(), "{got} vs {want}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn support_agrees_with_enumeration(lam in -3.0f64..-0.05, a in 1u32..4) {
        let lambda = Lambda::real(lam).unwrap();
        let fast = resonant_support(a, &lambda, 80).indices();
        prop_assert_eq!(&fast, &brute_force_support(a, &lambda, 80).indices());
        let mut sorted = fast;
        sorted.sort_unstable();
        let mut independent = enumerate_quasi_resonances(a as usize, lam, 80);
        independent.sort_unstable();
        prop_assert_eq!(sorted, independent);
    }

    #[test]
    fn t_nm_matches_quadrature(
        n in 0usize..8,
        m in 0usize..8,
        modulus in 0.5f64..2.0,
        arg in (PI / 2.0 + 0.1)..(3.0 * PI / 2.0 - 0.1),
        re in -6.0f64..-0.5,
        im in -PI..PI,
    ) {
        let lambda = Lambda::new(C64::from_polar(modulus, arg)).unwrap();
        let base = BasePoint::new(c(-0.5, 0.0), c(-1.0, 0.5), 1).unwrap();
        let z = c(re, im);
        let l = lambda.value();
        let f = |u: C64| (u * n as f64 + (base.w_star + (u - z) / l) * m as f64).exp();
        let want = integrate_segment(f, z, base.z_star, 1e-13);
        let got = t_nm(n, m, z, &lambda, &base);
        prop_assert!((got - want).norm() <= 1e-10 * want.norm(), "{} vs {}", got, want);
    }

    #[test]
    fn dulac_map_matches_antiderivative(
        eps_re in -0.4f64..0.4,
        eps_im in -0.4f64..0.4,
        re in -8.0f64..-0.1,
        im in -PI..PI,
    ) {
        let lambda = Lambda::new(c(-0.8, 0.3)).unwrap();
        let eps = c(eps_re, eps_im);
        let disc = unit_disc();
        let field = FieldSpec::new(lambda, 1, TruncatedSeries::monomial(1, 0, eps), disc).unwrap();
        let base = BasePoint::new(c(-1.0, 0.0), c(-4.0, 0.0), 1).unwrap();
        let params =
            stability_params(&lambda, eps.norm(), &disc, 1, 0.1, base.z_star).unwrap();
        let l = lambda.value();
        let z = c(re, im);
        let want = base.w_star + (base.z_star - z) / l + eps / l * (base.z_star.exp() - z.exp());
        let res = dulac_map(&field, z, &base, &params, &SolverConfig::default()).unwrap();
        prop_assert!((res.route_a - want).norm() <= 1e-8 * want.norm());
        prop_assert!((res.route_b - want).norm() <= 1e-8 * want.norm());
    }

    #[test]
    fn in_cone_rays_obey_growth_bound(
        phi in -1.0f64..1.0,
        re in -8.0f64..-3.0,
        im in -3.0f64..3.0,
        w_re in -3.0f64..-0.5,
        norm in 0.0f64..0.8,
    ) {
        let lambda = Lambda::new(c(-1.0, 0.7)).unwrap();
        let disc = unit_disc();
        let field = FieldSpec::new(
            lambda,
            1,
            TruncatedSeries::monomial(1, 1, c(norm, 0.0)),
            disc,
        )
        .unwrap();
        let params = stability_params(&lambda, norm, &disc, 1, 0.1, c(-1.0, 0.0)).unwrap();
        let theta = params.theta * C64::from_polar(1.0, phi * params.delta);
        let t_max = if theta.re > 0.0 { ((-0.02 - re) / theta.re).min(5.0) } else { 5.0 };
        let rep = check_growth_bound(&field, c(re, im), c(w_re, 0.0), theta, t_max,
            &SolverConfig::default()).unwrap();
        prop_assert!(rep.verdict, "excess {}", rep.max_excess);
    }

    #[test]
    fn preparation_round_trips(
        coeffs in proptest::collection::vec(-0.5f64..0.5, 6),
    ) {
        let jet = 8;
        let a_jet = TruncatedSeries::from_terms([
            (1, 0, c(-1.0, 0.0)),
            (2, 0, c(coeffs[0], 0.0)),
            (1, 1, c(coeffs[1], 0.0)),
            (0, 2, c(coeffs[2], 0.0)),
        ]);
        let b_jet = TruncatedSeries::from_terms([
            (0, 1, c(3.0, 0.0)),
            (1, 1, c(coeffs[3], 0.0)),
            (2, 1, c(coeffs[4], 0.0)),
            (0, 2, c(coeffs[5], 0.0)),
        ]);
        let exact = Some(dulac_core::ExactRatio::new(1, 3).unwrap());
        let p = prepare_field(&a_jet, &b_jet, jet, exact, Polydisc::new(0.5, 0.5).unwrap())
            .unwrap();
        let (ra, rb) = p.recompose();
        for (got, want) in [(ra, a_jet), (rb, b_jet)] {
            let diff = got.truncate_total(jet).sub(&want);
            let err = diff.terms().map(|(_, _, k)| k.norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-10, "residual {}", err);
        }
    }
}
