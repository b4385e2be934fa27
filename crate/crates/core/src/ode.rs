//! Dormand–Prince 5(4) for complex systems `y' = f(t, y)` with PI step
//! control and cubic Hermite dense output.

use crate::scalar::{C64, ZERO};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Tolerances {
    pub rel: f64,
    pub abs: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

/// One accepted step, enough for cubic Hermite interpolation.
#[derive(Debug, Clone)]
pub(crate) struct Step {
    pub t0: f64,
    pub t1: f64,
    pub y0: Vec<C64>,
    pub y1: Vec<C64>,
    pub f0: Vec<C64>,
    pub f1: Vec<C64>,
}

impl Step {
    /// Hermite interpolant of component `i` at `t` in `[t0, t1]`.
    pub fn interpolate(&self, i: usize, t: f64) -> C64 {
        let h = self.t1 - self.t0;
        if h == 0.0 {
            return self.y0[i];
        }
        let s = (t - self.t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        self.y0[i] * h00 + self.f0[i] * (h10 * h) + self.y1[i] * h01 + self.f1[i] * (h11 * h)
    }

    pub fn interpolate_all(&self, t: f64) -> Vec<C64> {
        (0..self.y0.len()).map(|i| self.interpolate(i, t)).collect()
    }
}

/// What the step observer asks the driver to do next.
pub(crate) enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Finished,
    Stopped,
    TooManySteps,
    StepUnderflow,
    NonFinite,
}

fn error_norm(y0: &[C64], y1: &[C64], err: &[C64], tol: &Tolerances) -> f64 {
    let mut worst = 0.0f64;
    for ((a, b), e) in y0.iter().zip(y1).zip(err) {
        let scale = tol.abs + tol.rel * a.norm().max(b.norm());
        worst = worst.max(e.norm() / scale);
    }
    worst
}

/// Integrates from `t0` to `t1 > t0`, handing every accepted step to
/// `observe`.
pub(crate) fn integrate<F, O>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: &[C64],
    tol: &Tolerances,
    mut observe: O,
) -> (Outcome, Vec<C64>)
where
    F: FnMut(f64, &[C64], &mut [C64]),
    O: FnMut(&Step) -> Control,
{
    let dim = y0.len();
    let mut y = y0.to_vec();
    if t1 <= t0 {
        return (Outcome::Finished, y);
    }
    let mut k: Vec<Vec<C64>> = vec![vec![ZERO; dim]; 7];
    let mut tmp = vec![ZERO; dim];
    let mut y_new = vec![ZERO; dim];
    let mut err = vec![ZERO; dim];

    f(t0, &y, &mut k[0]);
    let span = t1 - t0;
    let max_step = tol.max_step.min(span);
    let mut h = initial_step(&y, &k[0], tol).min(max_step);
    let mut t = t0;
    let mut prev_err = 1e-4f64;
    let mut steps = 0usize;

    while t < t1 {
        if steps >= tol.max_steps {
            return (Outcome::TooManySteps, y);
        }
        steps += 1;
        let last = t + h >= t1 || t1 - (t + h) < 1e-12 * span;
        if last {
            h = t1 - t;
        }

        let stage = |tmp: &mut Vec<C64>, y: &[C64], k: &[Vec<C64>], coefs: &[f64], h: f64| {
            for i in 0..dim {
                let mut acc = ZERO;
                for (j, c) in coefs.iter().enumerate() {
                    if *c != 0.0 {
                        acc += k[j][i] * *c;
                    }
                }
                tmp[i] = y[i] + acc * h;
            }
        };
        stage(&mut tmp, &y, &k, &[A21], h);
        f(t + C2 * h, &tmp, &mut k[1]);
        stage(&mut tmp, &y, &k, &[A31, A32], h);
        f(t + C3 * h, &tmp, &mut k[2]);
        stage(&mut tmp, &y, &k, &[A41, A42, A43], h);
        f(t + C4 * h, &tmp, &mut k[3]);
        stage(&mut tmp, &y, &k, &[A51, A52, A53, A54], h);
        f(t + C5 * h, &tmp, &mut k[4]);
        stage(&mut tmp, &y, &k, &[A61, A62, A63, A64, A65], h);
        f(t + h, &tmp, &mut k[5]);
        stage(&mut y_new, &y, &k, &[B1, 0.0, B3, B4, B5, B6], h);
        let t_new = if last { t1 } else { t + h };
        f(t_new, &y_new, &mut k[6]);

        for i in 0..dim {
            err[i] = (k[0][i] * E1
                + k[2][i] * E3
                + k[3][i] * E4
                + k[4][i] * E5
                + k[5][i] * E6
                + k[6][i] * E7)
                * h;
        }
        let e = error_norm(&y, &y_new, &err, tol);
        if !e.is_finite()
            || y_new
                .iter()
                .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            h *= 0.25;
            if h < 1e-14 * span.max(1.0) {
                return (Outcome::NonFinite, y);
            }
            continue;
        }
        if e <= 1.0 {
            let step = Step {
                t0: t,
                t1: t_new,
                y0: y.clone(),
                y1: y_new.clone(),
                f0: k[0].clone(),
                f1: k[6].clone(),
            };
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6);
            if let Control::Stop = observe(&step) {
                return (Outcome::Stopped, y);
            }
            let fac = 0.9 * e.max(1e-10).powf(-0.7 / 5.0) * prev_err.powf(0.4 / 5.0);
            h = (h * fac.clamp(0.2, 5.0)).min(max_step);
            prev_err = e.max(1e-4);
        } else {
            h *= (0.9 * e.powf(-0.2)).clamp(0.1, 0.9);
            if h < 1e-14 * span.max(1.0) {
                return (Outcome::StepUnderflow, y);
            }
        }
    }
    (Outcome::Finished, y)
}

fn initial_step(y: &[C64], f0: &[C64], tol: &Tolerances) -> f64 {
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for (v, d) in y.iter().zip(f0) {
        let sc = tol.abs + tol.rel * v.norm();
        d0 = d0.max(v.norm() / sc);
        d1 = d1.max(d.norm() / sc);
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    // order-5 scaling of a unit-derivative step to the tolerance
    h.max(tol.rel.powf(0.2) * 0.1).max(1e-6)
}
