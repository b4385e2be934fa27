//! Dulac maps and Dulac times of the prepared field.
//!
//! Every integral runs along `γ̃(z)` from `z` to `z_*`; the map sends the
//! point `(z, w_*)` of the transversal to the `w`-coordinate where its leaf
//! meets the fiber over `z_*`.

mod bounds;
mod model;

pub use bounds::{asymptotic_deviation, error_constants, AsymptoticReport, ErrorConstants};
pub use model::{
    characteristics_model, decompose, dominant_parts, t_nm, time_dominant, DecayOrder,
    DominantParts,
};

use crate::error::{DulacError, Result};
use crate::geometry::{build_path, BasePoint, IntegrationPath, StabilityParams};
use crate::lift::{lift_path, lift_path_with, LiftResult, SolverConfig};
use crate::scalar::{ensure_finite, Lambda, C64};
use crate::series::{FieldSpec, Polydisc, TruncatedSeries};

/// `w_* + (z_* - z)/λ`, the Dulac map of the linear model.
pub fn dulac_model(z: C64, lambda: &Lambda, base: &BasePoint) -> C64 {
    base.w_star + (base.z_star - z) / lambda.value()
}

/// `w_* + μ(z - z_*) + (e^{-kz} - e^{-kz_*})/k`, the Dulac map of the
/// saddle-node normal form with formal invariants `(k, μ)`.
pub fn saddle_node_model(z: C64, k: u32, mu: C64, base: &BasePoint) -> Result<C64> {
    if k == 0 {
        return Err(DulacError::Precondition("k must be at least 1".into()));
    }
    let kf = k as f64;
    Ok(base.w_star + mu * (z - base.z_star) + ((-z * kf).exp() - (-base.z_star * kf).exp()) / kf)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DulacResult {
    pub z: C64,
    /// Endpoint of the lifted path.
    pub route_a: C64,
    /// `w_* + (z_* - z)/λ + (1/λ)∫ R∘ℰ dz` with the integral from the same lift.
    pub route_b: C64,
    pub discrepancy: f64,
    pub path: IntegrationPath,
    pub lift: LiftResult,
}

impl DulacResult {
    /// `100·rel_tol·(1 + path length)`, the route-agreement budget.
    pub fn tolerance_budget(&self, cfg: &SolverConfig) -> f64 {
        100.0 * cfg.rel_tol * (1.0 + self.path.length())
    }
}

fn prepare(
    field: &FieldSpec,
    z: C64,
    base: &BasePoint,
    params: &StabilityParams,
) -> Result<IntegrationPath> {
    ensure_finite(z, "z")?;
    field.require_x_and_r()?;
    base.validate(&field.disc)?;
    build_path(z, base, params, params.epsilon)
}

/// `𝒟_R(z)` by two routes sharing one lift of `γ̃(z)`.
pub fn dulac_map(
    field: &FieldSpec,
    z: C64,
    base: &BasePoint,
    params: &StabilityParams,
    cfg: &SolverConfig,
) -> Result<DulacResult> {
    let path = prepare(field, z, base, params)?;
    let lift = lift_path(field, &path, base.w_star, cfg)?.into_ok()?;
    let lambda = field.lambda.value();
    let route_a = lift.endpoint_w;
    let route_b = base.w_star + (base.z_star - z) / lambda + lift.integral_r / lambda;
    Ok(DulacResult {
        z,
        route_a,
        route_b,
        discrepancy: (route_a - route_b).norm(),
        path,
        lift,
    })
}

/// Fails unless `Σ_{(n,m) != (0,0)} |U_{n,m}| ρ^n r^m < |U_{0,0}|`, which
/// keeps `U` away from zero on the polydisc.
pub fn check_nonvanishing(u: &TruncatedSeries, disc: &Polydisc) -> Result<()> {
    let u00 = u.coeff(0, 0).norm();
    let rest = u.filter(|n, m| (n, m) != (0, 0)).sup_bound(disc);
    if u00 == 0.0 || rest >= u00 {
        return Err(DulacError::Precondition(format!(
            "U may vanish on the polydisc: |U(0,0)| = {u00}, tail bound = {rest}"
        )));
    }
    Ok(())
}

/// `𝒯_{R,U}(z) = ∫ dz/(λ U∘ℰ)` along the lift used by [`dulac_map`].
pub fn dulac_time(
    field: &FieldSpec,
    u: &TruncatedSeries,
    z: C64,
    base: &BasePoint,
    params: &StabilityParams,
    cfg: &SolverConfig,
) -> Result<C64> {
    check_nonvanishing(u, &field.disc)?;
    let path = prepare(field, z, base, params)?;
    let lambda = field.lambda.value();
    let integrand = |z: C64, w: C64| (lambda * u.eval(z.exp(), w.exp())).inv();
    let lift = lift_path_with(field, &path, base.w_star, cfg, &[&integrand])?.into_ok()?;
    Ok(lift.extras[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::stability_params;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn setup(
        lambda: Lambda,
        a: u32,
        r: TruncatedSeries,
    ) -> (FieldSpec, BasePoint, StabilityParams) {
        let disc = Polydisc::new(1.0, 1.0).unwrap();
        let field = FieldSpec::new(lambda, a, r, disc).unwrap();
        let base = BasePoint::new(c(-1.0, 0.0), c(-1.0, 0.0), 1).unwrap();
        let params = stability_params(
            &field.lambda,
            field.norm_r().unwrap(),
            &disc,
            a,
            0.1,
            base.z_star,
        )
        .unwrap();
        (field, base, params)
    }

    #[test]
    fn model_examples() {
        let l = Lambda::real(-1.0).unwrap();
        let base = BasePoint::new(c(0.0, 0.0), c(0.0, 0.0), 1).unwrap();
        assert_eq!(dulac_model(base.z_star, &l, &base), base.w_star);
        assert!((dulac_model(c(-5.0, 0.0), &l, &base) - c(-5.0, 0.0)).norm() < 1e-15);
        let l = Lambda::new(c(0.0, 2.0)).unwrap();
        let base = BasePoint::new(c(0.3, 1.0), c(-1.0, 0.5), 1).unwrap();
        let z = base.z_star - c(0.0, 2.0);
        assert!((dulac_model(z, &l, &base) - (base.w_star + 1.0)).norm() < 1e-15);
    }

    #[test]
    fn saddle_node_examples() {
        let base = BasePoint::new(c(0.0, 0.0), c(0.0, 0.0), 1).unwrap();
        let v = saddle_node_model(c(-1.0, 0.0), 2, c(0.0, 1.0), &base).unwrap();
        assert!((v - c(3.194_528_049_465_325, -1.0)).norm() < 1e-12);
        let base = BasePoint::new(c(-0.5, 0.2), c(-1.0, 0.3), 1).unwrap();
        assert_eq!(
            saddle_node_model(base.z_star, 3, c(1.0, 1.0), &base).unwrap(),
            base.w_star
        );
        let z = c(-2.0, 1.0);
        let v = saddle_node_model(z, 1, c(0.0, 0.0), &base).unwrap();
        assert!((v - (base.w_star + (-z).exp() - (-base.z_star).exp())).norm() < 1e-13);
        assert!(saddle_node_model(z, 0, c(0.0, 0.0), &base).is_err());
    }

    #[test]
    fn map_with_r_zero_matches_model() {
        let (f, base, p) = setup(Lambda::real(-1.0).unwrap(), 1, TruncatedSeries::zero(0, 0));
        let z = c(-6.0, 2.0);
        let d = dulac_map(&f, z, &base, &p, &SolverConfig::default()).unwrap();
        let m = dulac_model(z, &f.lambda, &base);
        assert!((d.route_a - m).norm() < 1e-10);
        assert!((d.route_b - m).norm() < 1e-10);
    }

    #[test]
    fn map_example_value() {
        let (f, base, p) = setup(
            Lambda::real(-1.0).unwrap(),
            1,
            TruncatedSeries::monomial(1, 0, c(0.1, 0.0)),
        );
        let d = dulac_map(&f, c(-3.0, 0.0), &base, &p, &SolverConfig::default()).unwrap();
        let expect = -3.0 - 0.1 * ((-1f64).exp() - (-3f64).exp());
        assert!((d.route_a.re - expect).abs() < 1e-9);
        assert!((d.route_a.re - (-3.031_810)).abs() < 1e-6);
        assert!(d.route_a.im.abs() < 1e-9);
    }

    #[test]
    fn map_at_base_point() {
        let (f, base, p) = setup(
            Lambda::real(-1.0).unwrap(),
            2,
            TruncatedSeries::monomial(2, 1, c(0.3, 0.0)),
        );
        let d = dulac_map(&f, base.z_star, &base, &p, &SolverConfig::default()).unwrap();
        assert_eq!(d.route_a, base.w_star);
        assert_eq!(d.route_b, base.w_star);
    }

    #[test]
    fn time_examples() {
        let (f, base, p) = setup(Lambda::real(-1.0).unwrap(), 1, TruncatedSeries::zero(0, 0));
        let z = c(-4.0, 1.0);
        let cfg = SolverConfig::default();
        let one = dulac_time(
            &f,
            &TruncatedSeries::constant(c(1.0, 0.0)),
            z,
            &base,
            &p,
            &cfg,
        )
        .unwrap();
        assert!((one - (base.z_star - z) / -1.0).norm() < 1e-10);
        let k = c(2.0, -1.0);
        let scaled = dulac_time(&f, &TruncatedSeries::constant(k), z, &base, &p, &cfg).unwrap();
        assert!((scaled - one / k).norm() < 1e-10);
        let vanishing = TruncatedSeries::from_terms([(0, 0, c(1.0, 0.0)), (1, 0, c(1.0, 0.0))]);
        assert!(dulac_time(&f, &vanishing, z, &base, &p, &cfg).is_err());
    }
}
