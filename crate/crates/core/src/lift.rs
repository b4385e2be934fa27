//! Lifting `z`-plane paths into leaves of the foliation.
//!
//! Along `z(t) = z_a + θt` (`|θ| = 1`) a leaf satisfies
//! `w' = (θ/λ)(1 + R(e^z, e^w))`. The running integral `∫ R∘ℰ dz` is carried
//! as an extra state component so that `w - z/λ - (1/λ)∫R∘ℰ dz` is conserved
//! by construction; its observed drift is the main accuracy monitor.

use crate::error::{DulacError, Result};
use crate::geometry::IntegrationPath;
use crate::ode::{self, Control, Outcome, Step, Tolerances};
use crate::scalar::{ensure_finite, C64, ONE, ZERO};
use crate::series::FieldSpec;

const EXIT_BISECTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Budget of accepted steps for a whole path.
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 100_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.rel_tol.is_finite()
            && self.abs_tol.is_finite()
            && self.max_step > 0.0
            && self.max_steps > 0;
        if ok {
            Ok(())
        } else {
            Err(DulacError::Precondition(format!(
                "invalid solver configuration {self:?}"
            )))
        }
    }

    fn tolerances(&self, remaining: usize) -> Tolerances {
        Tolerances {
            rel: self.rel_tol,
            abs: self.abs_tol,
            max_step: self.max_step,
            max_steps: remaining,
        }
    }
}

/// Lifted point; `t` is arclength along the whole path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftSample {
    pub t: f64,
    pub z: C64,
    pub w: C64,
    pub cum_integral_r: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftStatus {
    Ok,
    /// The leaf reached `Re w = ln r`; the last sample is the crossing point.
    ExitedPolydisc,
    StepFailure,
}

impl LiftStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            LiftStatus::Ok => "ok",
            LiftStatus::ExitedPolydisc => "exited_polydisc",
            LiftStatus::StepFailure => "step_failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftResult {
    pub samples: Vec<LiftSample>,
    pub endpoint_w: C64,
    /// `∫ R∘ℰ dz` over the lifted part of the path.
    pub integral_r: C64,
    /// `∫ g_k(z, w) dz` for each extra integrand passed to [`lift_path_with`].
    pub extras: Vec<C64>,
    pub status: LiftStatus,
    pub h_drift: f64,
    pub path_length: f64,
}

impl LiftResult {
    pub fn is_ok(&self) -> bool {
        self.status == LiftStatus::Ok
    }

    pub fn last(&self) -> &LiftSample {
        self.samples
            .last()
            .expect("a lift always holds its start sample")
    }

    /// Turns a failed lift into [`DulacError::Lift`].
    pub fn into_ok(self) -> Result<Self> {
        if self.is_ok() {
            Ok(self)
        } else {
            let s = *self.last();
            Err(DulacError::Lift {
                status: self.status.as_str().into(),
                z: s.z,
                w: s.w,
            })
        }
    }
}

/// An extra integrand `g(z, w)`, accumulated as `∫ g dz` along the lift.
pub type Integrand<'a> = &'a (dyn Fn(C64, C64) -> C64 + Sync);

fn check_start(field: &FieldSpec, z: C64, w0: C64, cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    ensure_finite(z, "z")?;
    ensure_finite(w0, "w0")?;
    if w0.re >= field.disc.ln_r() {
        return Err(DulacError::Domain(format!(
            "Re w0 = {} is not below ln r = {}",
            w0.re,
            field.disc.ln_r()
        )));
    }
    Ok(())
}

fn check_vertex(field: &FieldSpec, z: C64) -> Result<()> {
    ensure_finite(z, "path vertex")?;
    if z.re >= field.disc.ln_rho() {
        return Err(DulacError::Domain(format!(
            "Re z = {} is not below ln rho = {}",
            z.re,
            field.disc.ln_rho()
        )));
    }
    Ok(())
}

/// Lifts the segment `[z_a, z_b]` starting from `w0`.
pub fn lift_segment(
    field: &FieldSpec,
    z_a: C64,
    z_b: C64,
    w0: C64,
    cfg: &SolverConfig,
) -> Result<LiftResult> {
    lift_vertices(field, &[z_a, z_b], w0, cfg, &[])
}

/// Lifts every segment of `path` in turn, chaining endpoints.
pub fn lift_path(
    field: &FieldSpec,
    path: &IntegrationPath,
    w0: C64,
    cfg: &SolverConfig,
) -> Result<LiftResult> {
    lift_vertices(field, &path.vertices, w0, cfg, &[])
}

/// [`lift_path`] with additional integrands `∫ g_k(z, w) dz` carried in the
/// same solve.
pub fn lift_path_with(
    field: &FieldSpec,
    path: &IntegrationPath,
    w0: C64,
    cfg: &SolverConfig,
    extras: &[Integrand<'_>],
) -> Result<LiftResult> {
    lift_vertices(field, &path.vertices, w0, cfg, extras)
}

fn lift_vertices(
    field: &FieldSpec,
    vertices: &[C64],
    w0: C64,
    cfg: &SolverConfig,
    extras: &[Integrand<'_>],
) -> Result<LiftResult> {
    let z_start = *vertices
        .first()
        .ok_or_else(|| DulacError::Precondition("path has no vertices".into()))?;
    check_start(field, z_start, w0, cfg)?;
    for &v in vertices {
        check_vertex(field, v)?;
    }
    let lambda = field.lambda.value();
    let inv_lambda = lambda.inv();
    let ln_r = field.disc.ln_r();
    let dim = 2 + extras.len();

    let mut state = vec![ZERO; dim];
    state[0] = w0;
    let mut samples = vec![LiftSample {
        t: 0.0,
        z: z_start,
        w: w0,
        cum_integral_r: ZERO,
    }];
    let mut status = LiftStatus::Ok;
    let mut t_offset = 0.0;
    let mut remaining = cfg.max_steps;

    for seg in vertices.windows(2) {
        let (za, zb) = (seg[0], seg[1]);
        let len = (zb - za).norm();
        if len == 0.0 {
            continue;
        }
        let theta = (zb - za) / len;
        let rhs = |t: f64, y: &[C64], dy: &mut [C64]| {
            let z = za + theta * t;
            let w = y[0];
            let r = field.r.eval(z.exp(), w.exp());
            dy[0] = theta * inv_lambda * (ONE + r);
            dy[1] = r * theta;
            for (k, g) in extras.iter().enumerate() {
                dy[2 + k] = g(z, w) * theta;
            }
        };
        let mut accepted = 0usize;
        let mut exited = false;
        let observe = |step: &Step| {
            accepted += 1;
            if step.y1[0].re >= ln_r {
                let (t, y) = locate_exit(step, ln_r);
                samples.push(sample(t_offset, za, theta, t, &y));
                exited = true;
                return Control::Stop;
            }
            samples.push(sample(t_offset, za, theta, step.t1, &step.y1));
            Control::Continue
        };
        let (outcome, y_end) =
            ode::integrate(rhs, 0.0, len, &state, &cfg.tolerances(remaining), observe);
        remaining = remaining.saturating_sub(accepted);
        match outcome {
            Outcome::Finished => {
                state = y_end;
                // land exactly on the vertex
                let last = samples.last_mut().expect("nonempty");
                last.z = zb;
            }
            Outcome::Stopped if exited => {
                status = LiftStatus::ExitedPolydisc;
                break;
            }
            _ => {
                status = LiftStatus::StepFailure;
                break;
            }
        }
        t_offset += len;
    }

    let last = *samples.last().expect("nonempty");
    let extras_out = if status == LiftStatus::Ok {
        state[2..].to_vec()
    } else {
        Vec::new()
    };
    let mut result = LiftResult {
        endpoint_w: last.w,
        integral_r: last.cum_integral_r,
        extras: extras_out,
        status,
        h_drift: 0.0,
        path_length: vertices.windows(2).map(|s| (s[1] - s[0]).norm()).sum(),
        samples,
    };
    result.h_drift = h_drift(field, &result);
    Ok(result)
}

fn sample(t_offset: f64, za: C64, theta: C64, t: f64, y: &[C64]) -> LiftSample {
    LiftSample {
        t: t_offset + t,
        z: za + theta * t,
        w: y[0],
        cum_integral_r: y[1],
    }
}

/// Bisection on the Hermite interpolant for `Re w = ln r` inside `step`.
fn locate_exit(step: &Step, ln_r: f64) -> (f64, Vec<C64>) {
    let (mut lo, mut hi) = (step.t0, step.t1);
    while hi - lo > EXIT_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if step.interpolate(0, mid).re >= ln_r {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi, step.interpolate_all(hi))
}

/// `max_t |φ(t) - φ(0)|` for `φ = w - z/λ - (1/λ)∫R∘ℰ dz`.
pub fn h_drift(field: &FieldSpec, lift: &LiftResult) -> f64 {
    let inv = field.lambda.value().inv();
    let phi = |s: &LiftSample| s.w - (s.z + s.cum_integral_r) * inv;
    let Some(first) = lift.samples.first() else {
        return 0.0;
    };
    let phi0 = phi(first);
    lift.samples
        .iter()
        .map(|s| (phi(s) - phi0).norm())
        .fold(0.0, f64::max)
}

/// Result of [`check_growth_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `sup_t |w(t) - w0 - tθ/λ|`
    pub max_deviation: f64,
    /// `sup_t` of deviation minus bound.
    pub max_excess: f64,
    /// Bound at `t_max`.
    pub bound_at_end: f64,
    pub samples: usize,
    pub verdict: bool,
    pub status: LiftStatus,
}

/// Lifts the ray `z0 + tθ`, `0 <= t <= t_max`, and compares
/// `|w(t) - w0 - tθ/λ|` against
/// `e^{a Re z0} ||R|| |1 - e^{at Re θ}| / (|λ Re θ| a)`
/// (or `e^{a Re z0} ||R|| t / |λ|` when `Re θ = 0`).
pub fn check_growth_bound(
    field: &FieldSpec,
    z0: C64,
    w0: C64,
    theta: C64,
    t_max: f64,
    cfg: &SolverConfig,
) -> Result<BoundReport> {
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(DulacError::Precondition(format!(
            "t_max must be finite and non-negative, got {t_max}"
        )));
    }
    ensure_finite(theta, "theta")?;
    if (theta.norm() - 1.0).abs() > 1e-12 {
        return Err(DulacError::Precondition(format!(
            "ray direction must be a unit vector, got |theta| = {}",
            theta.norm()
        )));
    }
    let norm_r = field.norm_r()?;
    let lambda = field.lambda.value();
    let a = field.a as f64;
    let lift = lift_vertices(field, &[z0, z0 + theta * t_max], w0, cfg, &[])?;
    let pre = (a * z0.re).exp() * norm_r;
    let bound = |t: f64| {
        if theta.re.abs() < 1e-14 {
            pre * t / lambda.norm()
        } else {
            pre * (1.0 - (a * t * theta.re).exp()).abs() / ((lambda * theta.re).norm() * a)
        }
    };
    let mut max_deviation = 0.0f64;
    let mut max_excess = f64::NEG_INFINITY;
    let mut verdict = lift.is_ok();
    for s in &lift.samples {
        let dev = (s.w - w0 - theta * s.t / lambda).norm();
        let b = bound(s.t);
        max_deviation = max_deviation.max(dev);
        max_excess = max_excess.max(dev - b);
        if dev - b > 1e-8 * (1.0 + b) {
            verdict = false;
        }
    }
    Ok(BoundReport {
        max_deviation,
        max_excess,
        bound_at_end: bound(t_max),
        samples: lift.samples.len(),
        verdict,
        status: lift.status,
    })
}
