//! Stability beams and the integration path from `z0` to `z_*`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{DulacError, Result};
use crate::scalar::{ensure_finite, Lambda, C64};
use crate::series::Polydisc;

const CONE_SLACK: f64 = 1e-12;

/// Which edge of the stability cone the saddle path uses for its two
/// slanted legs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeSide {
    /// `ϑ e^{+iδ}`
    Plus,
    /// `ϑ e^{-iδ}`
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityParams {
    /// `-λ/|λ|`
    pub theta: C64,
    pub delta: f64,
    pub delta_max: f64,
    pub kappa: f64,
    pub ln_rho: f64,
    pub ln_r: f64,
    /// Standoff of the vertical leg from `Re z = ln ρ`.
    pub epsilon: f64,
    pub side: ConeSide,
}

impl StabilityParams {
    /// The slanted-leg direction `ϑ_s = ϑ e^{±iδ}`.
    pub fn theta_side(&self) -> C64 {
        let sign = match self.side {
            ConeSide::Plus => 1.0,
            ConeSide::Minus => -1.0,
        };
        self.theta * C64::from_polar(1.0, sign * self.delta)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(DulacError::Precondition(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        self.epsilon = epsilon;
        Ok(self)
    }
}

/// Default standoff `max(0.05 (ln ρ - κ), 1e-3)`.
pub fn default_epsilon(ln_rho: f64, kappa: f64) -> f64 {
    (0.05 * (ln_rho - kappa)).max(1e-3)
}

/// Saddle legs use whichever of `ϑ e^{±iδ}` has the larger real part, so the
/// legs always head right; ties (`Im λ = 0`) go to `ϑ e^{+iδ}`.
fn cone_side(lambda: C64) -> ConeSide {
    if lambda.im >= 0.0 {
        ConeSide::Plus
    } else {
        ConeSide::Minus
    }
}

/// Beam direction, aperture and `κ` for a field with `‖R‖ = norm_r`.
///
/// `margin` in `(0, 1)` sets `δ = (1 - margin)·arccos(‖R‖ρ^a)`.
pub fn stability_params(
    lambda: &Lambda,
    norm_r: f64,
    disc: &Polydisc,
    a: u32,
    margin: f64,
    z_star: C64,
) -> Result<StabilityParams> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(DulacError::Precondition(format!(
            "delta margin must lie in (0, 1), got {margin}"
        )));
    }
    if !(norm_r.is_finite() && norm_r >= 0.0) {
        return Err(DulacError::Precondition(format!(
            "norm of R must be finite and non-negative, got {norm_r}"
        )));
    }
    ensure_finite(z_star, "z_star")?;
    let lam = lambda.value();
    let sup = norm_r * disc.rho().powi(a as i32);
    if sup >= 1.0 {
        return Err(DulacError::ConditionR { value: sup });
    }
    let theta = -lam / lam.norm();
    let delta_max = sup.acos();
    let kappa = if lam.re < 0.0 {
        kappa(a, norm_r, lambda, z_star)?
    } else {
        z_star.re
    };
    let ln_rho = disc.ln_rho();
    Ok(StabilityParams {
        theta,
        delta: (1.0 - margin) * delta_max,
        delta_max,
        kappa,
        ln_rho,
        ln_r: disc.ln_r(),
        epsilon: default_epsilon(ln_rho, kappa),
        side: cone_side(lam),
    })
}

/// `min(Re z_*, (1/a) ln(cos(arg ϑ)/‖R‖))`: left of `κ` horizontal rays stay
/// inside the stability beam.
pub fn kappa(a: u32, norm_r: f64, lambda: &Lambda, z_star: C64) -> Result<f64> {
    let lam = lambda.value();
    if lam.re >= 0.0 {
        return Err(DulacError::WrongCase(format!(
            "kappa needs Re(lambda) < 0, got lambda = {lam}"
        )));
    }
    if a == 0 {
        return Err(DulacError::Precondition("a must be positive".into()));
    }
    if norm_r == 0.0 {
        return Ok(z_star.re);
    }
    let cos_arg = -lam.re / lam.norm();
    Ok(z_star.re.min((cos_arg / norm_r).ln() / a as f64))
}

/// `|arg(direction/ϑ)| <= δ`, boundary inclusive.
pub fn in_cone(direction: C64, theta: C64, delta: f64) -> bool {
    (direction / theta).arg().abs() <= delta + CONE_SLACK
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasePoint {
    pub z_star: C64,
    pub w_star: C64,
    /// Band half-width in units of `π`.
    pub n: u32,
}

impl BasePoint {
    pub fn new(z_star: C64, w_star: C64, n: u32) -> Result<Self> {
        ensure_finite(z_star, "z_star")?;
        ensure_finite(w_star, "w_star")?;
        if n == 0 {
            return Err(DulacError::Precondition(
                "band width N must be positive".into(),
            ));
        }
        Ok(Self { z_star, w_star, n })
    }

    /// `Re z_* < ln ρ` and `Re w_* < ln r`.
    pub fn validate(&self, disc: &Polydisc) -> Result<()> {
        if self.z_star.re >= disc.ln_rho() || self.w_star.re >= disc.ln_r() {
            return Err(DulacError::Domain(format!(
                "base point ({}, {}) lies outside the polydisc",
                self.z_star, self.w_star
            )));
        }
        Ok(())
    }

    /// `|Im(z - z_*)| <= πN`.
    pub fn in_band(&self, z: C64) -> bool {
        (z - self.z_star).im.abs() <= PI * self.n as f64 * (1.0 + 1e-14)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathCase {
    Saddle,
    Node,
}

/// A polygonal path; `segment_directions[k]` is the unit direction of the
/// segment from `vertices[k]` to `vertices[k + 1]` (for a zero-length segment,
/// the direction that leg would have had).
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationPath {
    pub vertices: Vec<C64>,
    pub case: PathCase,
    pub segment_directions: Vec<C64>,
}

impl IntegrationPath {
    pub fn start(&self) -> C64 {
        self.vertices[0]
    }

    pub fn end(&self) -> C64 {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    pub fn segments(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }
}

/// Builds `γ̃(z0)` from `z0` to `z_*`.
///
/// Saddle case (`Re λ < 0`): `z0 → z1` horizontally to `Re z1 = max(κ, Re z0)`,
/// then along `ϑ_s` to the vertical line `Re z = ln ρ - ε`, along that line,
/// and back to `z_*` against `ϑ_s`. If `z1` or `z_*` already lies right of
/// the line, the line moves to the rightmost of the two.
///
/// Node case: `z0` follows `ϑ` until it meets the ray from `z_*` along a
/// cone edge `ϑ'`, or goes straight to `z_*` when the rays do not meet
/// forward of `z0`.
pub fn build_path(
    z0: C64,
    base: &BasePoint,
    params: &StabilityParams,
    epsilon: f64,
) -> Result<IntegrationPath> {
    ensure_finite(z0, "z0")?;
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(DulacError::Precondition(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !base.in_band(z0) {
        return Err(DulacError::Domain(format!(
            "z0 = {z0} lies outside the band |Im(z - z_*)| <= {}π",
            base.n
        )));
    }
    if z0.re >= params.ln_rho {
        return Err(DulacError::Domain(format!(
            "Re z0 = {} is not below ln rho = {}",
            z0.re, params.ln_rho
        )));
    }
    let z_star = base.z_star;
    let saddle = params.theta.re > 0.0;
    let case = if saddle {
        PathCase::Saddle
    } else {
        PathCase::Node
    };
    if z0 == z_star {
        return Ok(IntegrationPath {
            vertices: vec![z0],
            case,
            segment_directions: Vec::new(),
        });
    }
    if saddle {
        saddle_path(z0, base, params, epsilon)
    } else {
        Ok(node_path(z0, z_star, params))
    }
}

fn saddle_path(
    z0: C64,
    base: &BasePoint,
    params: &StabilityParams,
    epsilon: f64,
) -> Result<IntegrationPath> {
    let z_star = base.z_star;
    let dir = params.theta_side();
    if dir.re <= 0.0 {
        return Err(DulacError::PathConstruction(format!(
            "no cone direction with positive real part (theta = {}, delta = {})",
            params.theta, params.delta
        )));
    }
    let z1 = C64::new(params.kappa.max(z0.re), z0.im);
    let line = (params.ln_rho - epsilon).max(z1.re).max(z_star.re);
    if line >= params.ln_rho {
        return Err(DulacError::PathConstruction(format!(
            "vertical leg at Re z = {line} is not inside the polydisc"
        )));
    }
    let z2 = z1 + dir * ((line - z1.re) / dir.re);
    let z3 = z_star + dir * ((line - z_star.re) / dir.re);
    let z2 = C64::new(line, z2.im);
    let z3 = C64::new(line, z3.im);

    let spread = params.theta.arg().abs() + params.delta;
    if spread < FRAC_PI_2 {
        let cap = 2.0 * PI * base.n as f64 + spread.tan() * (params.ln_rho - params.kappa);
        let span = (z3 - z2).im.abs();
        if span > cap * (1.0 + 1e-12) + 1e-12 {
            return Err(DulacError::InternalConsistency(format!(
                "vertical leg length {span} exceeds the bound {cap}"
            )));
        }
    }
    let vertical = if z3.im >= z2.im {
        C64::new(0.0, 1.0)
    } else {
        C64::new(0.0, -1.0)
    };
    Ok(IntegrationPath {
        vertices: vec![z0, z1, z2, z3, z_star],
        case: PathCase::Saddle,
        segment_directions: vec![C64::new(1.0, 0.0), dir, vertical, -dir],
    })
}

fn node_path(z0: C64, z_star: C64, params: &StabilityParams) -> IntegrationPath {
    let theta = params.theta;
    let d = (z_star - z0) / theta;
    let (sin_d, cos_d) = params.delta.sin_cos();
    // z0 + sϑ = z_* + tϑ', ϑ' = ϑe^{∓iδ} on the side that makes t >= 0
    let sign = if d.im >= 0.0 { -1.0 } else { 1.0 };
    let t = d.im.abs() / sin_d;
    let s = d.re + t * cos_d;
    if s < 0.0 || !s.is_finite() {
        let dir = (z_star - z0) / (z_star - z0).norm();
        return IntegrationPath {
            vertices: vec![z0, z_star],
            case: PathCase::Node,
            segment_directions: vec![dir],
        };
    }
    let theta_prime = theta * C64::from_polar(1.0, sign * params.delta);
    let z1 = z0 + theta * s;
    IntegrationPath {
        vertices: vec![z0, z1, z_star],
        case: PathCase::Node,
        segment_directions: vec![theta, -theta_prime],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn unit_disc() -> Polydisc {
        Polydisc::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn stability_examples() {
        let l = Lambda::real(-1.0).unwrap();
        let p = stability_params(&l, 0.0, &unit_disc(), 1, 0.1, C64::new(-1.0, 0.0)).unwrap();
        assert!(close(p.theta, C64::new(1.0, 0.0), 1e-15));
        assert!((p.delta_max - FRAC_PI_2).abs() < 1e-15);
        assert!((p.delta - 0.9 * FRAC_PI_2).abs() < 1e-15);
        assert_eq!(p.kappa, -1.0);

        let p = stability_params(&l, 0.3, &unit_disc(), 1, 0.1, C64::new(-1.0, 0.0)).unwrap();
        assert!((p.delta_max - 1.266_103_672_779_499).abs() < 1e-12);

        let l = Lambda::new(C64::new(1.0, 1.0)).unwrap();
        let p = stability_params(&l, 0.0, &unit_disc(), 1, 0.1, C64::new(-1.0, 0.0)).unwrap();
        let expect = -C64::new(1.0, 1.0) / 2f64.sqrt();
        assert!(close(p.theta, expect, 1e-15));
    }

    #[test]
    fn condition_r_is_enforced() {
        let l = Lambda::real(-1.0).unwrap();
        let err = stability_params(&l, 1.0, &unit_disc(), 1, 0.1, C64::new(-1.0, 0.0));
        assert!(matches!(err, Err(DulacError::ConditionR { .. })));
        assert!(stability_params(&l, 0.1, &unit_disc(), 1, 1.0, C64::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn kappa_examples() {
        let l = Lambda::real(-1.0).unwrap();
        let k = kappa(1, 2.0, &l, C64::new(0.0, 0.0)).unwrap();
        assert!((k - 0.5f64.ln()).abs() < 1e-15);
        assert_eq!(kappa(1, 0.5, &l, C64::new(-1.0, 0.0)).unwrap(), -1.0);
        assert_eq!(kappa(1, 0.0, &l, C64::new(-2.5, 0.0)).unwrap(), -2.5);
        let node = Lambda::real(1.0).unwrap();
        assert!(matches!(
            kappa(1, 0.1, &node, C64::new(0.0, 0.0)),
            Err(DulacError::WrongCase(_))
        ));
    }

    #[test]
    fn kappa_is_nonincreasing_in_norm() {
        let l = Lambda::new(C64::new(-1.0, 0.7)).unwrap();
        let zs = C64::new(0.0, 0.0);
        let mut prev = f64::INFINITY;
        for k in 1..50 {
            let v = kappa(2, 0.05 * k as f64, &l, zs).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn cone_membership() {
        let theta = C64::from_polar(1.0, 0.3);
        let delta = 0.4;
        assert!(in_cone(theta, theta, delta));
        assert!(in_cone(theta * C64::from_polar(1.0, delta), theta, delta));
        assert!(!in_cone(
            theta * C64::from_polar(1.0, 2.0 * delta),
            theta,
            delta
        ));
    }

    fn example_params() -> StabilityParams {
        StabilityParams {
            theta: C64::new(1.0, 0.0),
            delta: FRAC_PI_4,
            delta_max: FRAC_PI_2,
            kappa: -1.0,
            ln_rho: 0.0,
            ln_r: 0.0,
            epsilon: 0.01,
            side: ConeSide::Plus,
        }
    }

    #[test]
    fn saddle_path_example() {
        let base = BasePoint::new(C64::new(-1.0, 0.0), C64::new(-1.0, 0.0), 1).unwrap();
        let path = build_path(C64::new(-5.0, PI), &base, &example_params(), 0.01).unwrap();
        assert_eq!(path.case, PathCase::Saddle);
        let expect = [
            C64::new(-5.0, PI),
            C64::new(-1.0, PI),
            C64::new(-0.01, PI + 0.99),
            C64::new(-0.01, 0.99),
            C64::new(-1.0, 0.0),
        ];
        for (v, e) in path.vertices.iter().zip(expect) {
            assert!(close(*v, e, 1e-14), "{v} vs {e}");
        }
    }

    #[test]
    fn saddle_segments_in_cone() {
        let l = Lambda::new(C64::new(-1.0, 0.5)).unwrap();
        let disc = unit_disc();
        let zs = C64::new(-1.0, 0.0);
        let p = stability_params(&l, 0.3, &disc, 1, 0.1, zs).unwrap();
        let base = BasePoint::new(zs, C64::new(-2.0, 0.0), 1).unwrap();
        for z0 in [
            C64::new(-8.0, 2.0),
            C64::new(-0.5, -3.0),
            C64::new(-3.0, 0.0),
        ] {
            let path = build_path(z0, &base, &p, p.epsilon).unwrap();
            let d = &path.segment_directions;
            assert!(in_cone(d[1], p.theta, p.delta));
            assert!(in_cone(-d[3], p.theta, p.delta));
            assert_eq!(d[2].re, 0.0);
            assert!(path.vertices.iter().all(|v| v.re < p.ln_rho));
            assert_eq!(path.vertices[2].re, path.vertices[3].re);
        }
    }

    #[test]
    fn path_ignores_w_star() {
        let p = example_params();
        let a = BasePoint::new(C64::new(-1.0, 0.0), C64::new(-1.0, 0.0), 1).unwrap();
        let b = BasePoint::new(C64::new(-1.0, 0.0), C64::new(-7.0, 3.0), 1).unwrap();
        let z0 = C64::new(-4.0, 1.0);
        assert_eq!(
            build_path(z0, &a, &p, 0.01).unwrap(),
            build_path(z0, &b, &p, 0.01).unwrap()
        );
    }

    #[test]
    fn degenerate_and_domain() {
        let base = BasePoint::new(C64::new(-1.0, 0.0), C64::new(-1.0, 0.0), 1).unwrap();
        let p = example_params();
        let path = build_path(base.z_star, &base, &p, 0.01).unwrap();
        assert!(path.is_point());
        assert!(matches!(
            build_path(C64::new(-2.0, 4.0), &base, &p, 0.01),
            Err(DulacError::Domain(_))
        ));
        assert!(matches!(
            build_path(C64::new(0.5, 0.0), &base, &p, 0.01),
            Err(DulacError::Domain(_))
        ));
    }

    #[test]
    fn node_path_opens_leftward() {
        let l = Lambda::real(1.0).unwrap();
        let disc = unit_disc();
        let zs = C64::new(-3.0, 0.0);
        let p = stability_params(&l, 0.2, &disc, 1, 0.1, zs).unwrap();
        let base = BasePoint::new(zs, C64::new(-1.0, 0.0), 1).unwrap();
        let z0 = C64::new(-1.0, 1.0);
        let path = build_path(z0, &base, &p, p.epsilon).unwrap();
        assert_eq!(path.case, PathCase::Node);
        assert_eq!(path.vertices.len(), 3);
        let z1 = path.vertices[1];
        assert!(z1.re < z0.re.min(zs.re));
        assert!(in_cone(z1 - z0, p.theta, p.delta));
        assert!(in_cone(z1 - zs, p.theta, p.delta));
    }
}
