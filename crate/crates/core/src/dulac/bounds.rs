//! Explicit error constants and the deviation `Δ(z0)` between the
//! characteristics of the field and of its linear model.

use std::f64::consts::PI;

use crate::error::{DulacError, Result};
use crate::geometry::{build_path, BasePoint, StabilityParams};
use crate::lift::SolverConfig;
use crate::ode::{self, Control, Outcome, Tolerances};
use crate::scalar::{ensure_finite, expm1, C64, ZERO};
use crate::series::{FieldSpec, TruncatedSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k: f64,
    pub m: f64,
}

/// The chain `C1 … K` bounding `sup_t |w_R - w_0|` along `γ̃`, and a constant
/// `M` with `|Δ(z0)| <= M ||∂G/∂y|| e^{Re w_*} e^{a Re z0}`.
///
/// `M = K e^K (I01 + I12 + I23 + I3*) / ρ^a` where the `I` are bounds on the
/// integrals of `|e^{(a + 1/λ)z}|` over the four legs of the path, taken
/// uniformly in `z0`.
pub fn error_constants(
    field: &FieldSpec,
    params: &StabilityParams,
    base: &BasePoint,
) -> Result<ErrorConstants> {
    let lambda = field.lambda.value();
    if lambda.re >= 0.0 {
        return Err(DulacError::WrongCase(format!(
            "error constants need Re(lambda) < 0, got lambda = {lambda}"
        )));
    }
    let theta_s = params.theta_side();
    if theta_s.re <= 0.0 {
        return Err(DulacError::WrongCase(format!(
            "leg direction {theta_s} does not point right"
        )));
    }
    let norm_r = field.norm_r()?;
    let a = field.a as f64;
    let rho_a = field.disc.rho().powf(a);
    let kappa = params.kappa;
    let ln_rho = params.ln_rho;
    let n = base.n as f64;
    let tan_s = theta_s.arg().abs().tan();

    let c1 = norm_r / (a * lambda.norm());
    let c2 = c1 / theta_s.re;
    let c3 = a * rho_a * c1;
    let k1 = c1 * (rho_a + (a * kappa).exp());
    let k2 = k1 + c2 * (rho_a + (a * kappa).exp());
    let k3 = k2 + c3 * (2.0 * PI * n + tan_s * (ln_rho - kappa));
    let k = k3 + c2 * (rho_a + (a * base.z_star.re).exp());

    let exponent = C64::new(a, 0.0) + lambda.inv();
    let alpha = exponent.norm();
    let beta = exponent.re;
    let m = if norm_r == 0.0 {
        0.0
    } else if beta <= 0.0 {
        f64::INFINITY
    } else {
        let pin = PI * n;
        let i01 = (beta * kappa).exp() / beta;
        let i12 = (alpha * ((kappa * kappa + pin * pin).sqrt() + ln_rho - kappa)).exp();
        let i23 = (alpha * (base.z_star.norm() + pin + tan_s * (ln_rho - kappa))).exp()
            * (lambda.inv().norm() * (2.0 * pin + tan_s * (ln_rho - kappa))).exp();
        let zs = base.z_star.re;
        let i3 = (alpha * ((zs * zs + pin * pin).sqrt() + ln_rho - zs)).exp();
        k * k.exp() * (i01 + i12 + i23 + i3) / rho_a
    };
    Ok(ErrorConstants {
        c1,
        c2,
        c3,
        k1,
        k2,
        k3,
        k,
        m,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub z0: C64,
    /// `Δ(z0)`
    pub delta_value: C64,
    pub bound_value: f64,
    pub verdict: bool,
    /// `|Δ| / (|z0| e^{Re(-z0/λ)})`
    pub decay_ratio: f64,
    pub constants: ErrorConstants,
    pub path_length: f64,
}

/// `Δ(z0) = ∫_{γ̃(z0)} (G̃(z, w_R) - G̃(z, w_0)) dz/λ`, where `w_R` and
/// `w_0 = w_* + (z - z0)/λ` lift the same path from `(z0, w_*)`.
///
/// The difference `v = w_R - w_0` is integrated directly,
/// `v' = (θ/λ) R(e^z, e^{w_0 + v})`, so that `Δ` is obtained without
/// cancellation even when it is many orders below `|w_R|`.
pub fn asymptotic_deviation(
    field: &FieldSpec,
    g: &TruncatedSeries,
    z0: C64,
    base: &BasePoint,
    params: &StabilityParams,
    cfg: &SolverConfig,
) -> Result<AsymptoticReport> {
    ensure_finite(z0, "z0")?;
    cfg.validate()?;
    let a = field.a;
    if let Some((n, m, _)) = g.terms().find(|&(n, _, _)| n < a as usize) {
        return Err(DulacError::InvalidSupport { n, m, a });
    }
    field.require_x_and_r()?;
    field.require_strict_a()?;
    base.validate(&field.disc)?;
    let constants = error_constants(field, params, base)?;
    let path = build_path(z0, base, params, params.epsilon)?;

    let lambda = field.lambda.value();
    let inv_lambda = lambda.inv();
    let g_terms: Vec<(f64, f64, C64)> = g
        .terms()
        .filter(|&(_, m, _)| m > 0)
        .map(|(n, m, c)| (n as f64, m as f64, c))
        .collect();
    let tol = Tolerances {
        rel: cfg.rel_tol,
        abs: 1e-300,
        max_step: cfg.max_step,
        max_steps: cfg.max_steps,
    };

    let mut state = vec![ZERO, ZERO];
    let mut remaining = cfg.max_steps;
    for (za, zb) in path.segments() {
        let len = (zb - za).norm();
        if len == 0.0 {
            continue;
        }
        let theta = (zb - za) / len;
        let rhs = |t: f64, y: &[C64], dy: &mut [C64]| {
            let z = za + theta * t;
            let w0 = base.w_star + (z - z0) * inv_lambda;
            let v = y[0];
            let r = field.r.eval(z.exp(), (w0 + v).exp());
            dy[0] = theta * inv_lambda * r;
            let mut acc = ZERO;
            for &(n, m, c) in &g_terms {
                acc += c * (z * n + w0 * m).exp() * expm1(v * m);
            }
            dy[1] = theta * inv_lambda * acc;
        };
        let mut accepted = 0usize;
        let (outcome, y) = ode::integrate(
            rhs,
            0.0,
            len,
            &state,
            &Tolerances {
                max_steps: remaining,
                ..tol
            },
            |_| {
                accepted += 1;
                Control::Continue
            },
        );
        remaining = remaining.saturating_sub(accepted);
        if outcome != Outcome::Finished {
            return Err(DulacError::Lift {
                status: "step_failure".into(),
                z: za,
                w: y[0],
            });
        }
        state = y;
    }

    let delta_value = state[1];
    let bound_value =
        constants.m * g.dy_bound(&field.disc) * base.w_star.re.exp() * (a as f64 * z0.re).exp();
    let slack = 1e-9 * bound_value + f64::MIN_POSITIVE;
    let scale = z0.norm() * (-z0 * inv_lambda).re.exp();
    Ok(AsymptoticReport {
        z0,
        delta_value,
        bound_value,
        verdict: delta_value.norm() <= bound_value + slack,
        decay_ratio: delta_value.norm() / scale,
        constants,
        path_length: path.length(),
    })
}
