//! Finite-order preparation of a vector field into the form `U·X_R`.
//!
//! The field is first brought to Poincaré–Dulac normal form degree by degree:
//! every non-resonant monomial of degree `d` is removed by the near-identity
//! change `v = V + h_d(V)` solving the homological equation, and the full
//! transformed field `(I + Dh)^{-1} F(V + h(V))` is recomputed to order `J`.
//! The surviving resonant monomials are then read off as `U` and `R`.

use super::{FieldSpec, Polydisc, TruncatedSeries};
use crate::error::{DulacError, Result};
use crate::scalar::{ExactRatio, Lambda, C64, ONE, ZERO};

/// Polynomial coordinate maps truncated at the jet order.
///
/// `forward` expresses the original coordinates `(x, y)` in the prepared ones
/// `(X, Y)`; `backward` is its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateChange {
    pub forward: (TruncatedSeries, TruncatedSeries),
    pub backward: (TruncatedSeries, TruncatedSeries),
}

/// A field `Z = U·X_R` up to total degree `jet_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedField {
    pub field: FieldSpec,
    pub u: TruncatedSeries,
    pub change: CoordinateChange,
    pub jet_order: usize,
}

type VectorField = (TruncatedSeries, TruncatedSeries);

fn x_var() -> TruncatedSeries {
    TruncatedSeries::monomial(1, 0, ONE)
}

fn y_var() -> TruncatedSeries {
    TruncatedSeries::monomial(0, 1, ONE)
}

struct Resonances {
    lambda: C64,
    exact: Option<ExactRatio>,
}

impl Resonances {
    /// Divisor `nλ + m - λ` of the x-component, `None` when resonant.
    fn x_divisor(&self, n: usize, m: usize) -> Option<C64> {
        if let Some(e) = self.exact {
            // (n-1)λ + m = 0 with λ = -p/q
            if n >= 1 && e.annihilates((n - 1) as u64, m as u64) {
                return None;
            }
        }
        let d = self.lambda * (n as f64 - 1.0) + m as f64;
        (d != ZERO).then_some(d)
    }

    /// Divisor `nλ + m - 1` of the y-component, `None` when resonant.
    fn y_divisor(&self, n: usize, m: usize) -> Option<C64> {
        if let Some(e) = self.exact {
            if m >= 1 && e.annihilates(n as u64, (m - 1) as u64) {
                return None;
            }
        }
        let d = self.lambda * n as f64 + (m as f64 - 1.0);
        (d != ZERO).then_some(d)
    }
}

/// Matrix-vector product `M v` for 2x2 series matrices, truncated.
fn mat_vec(m: &[[TruncatedSeries; 2]; 2], v: &VectorField, j: usize) -> VectorField {
    (
        m[0][0]
            .mul_truncated(&v.0, j)
            .add(&m[0][1].mul_truncated(&v.1, j)),
        m[1][0]
            .mul_truncated(&v.0, j)
            .add(&m[1][1].mul_truncated(&v.1, j)),
    )
}

fn jacobian(p: &TruncatedSeries, q: &TruncatedSeries) -> [[TruncatedSeries; 2]; 2] {
    [[p.d_dx(), p.d_dy()], [q.d_dx(), q.d_dy()]]
}

/// Brings `A∂x + B∂y` into the form `U·X_R` modulo total degree `jet_order`.
///
/// The linear part must be `diag(α, β)` with `λ = α/β ∉ ℝ_{≥0}`. When `exact`
/// is given it must match `λ` and decides every resonance; otherwise only
/// divisors that vanish exactly in floating point are treated as resonant.
pub fn prepare_field(
    a_jet: &TruncatedSeries,
    b_jet: &TruncatedSeries,
    jet_order: usize,
    exact: Option<ExactRatio>,
    disc: Polydisc,
) -> Result<PreparedField> {
    if jet_order == 0 {
        return Err(DulacError::Precondition(
            "jet order must be positive".into(),
        ));
    }
    if a_jet.coeff(0, 0) != ZERO || b_jet.coeff(0, 0) != ZERO {
        return Err(DulacError::Precondition(
            "the origin is not a singular point".into(),
        ));
    }
    if a_jet.coeff(0, 1) != ZERO || b_jet.coeff(1, 0) != ZERO {
        return Err(DulacError::Precondition(
            "linear part is not diagonal".into(),
        ));
    }
    let alpha = a_jet.coeff(1, 0);
    let beta = b_jet.coeff(0, 1);
    if alpha == ZERO || beta == ZERO {
        return Err(DulacError::Precondition(
            "linear part is degenerate (zero eigenvalue)".into(),
        ));
    }
    let ratio = alpha / beta;
    if ratio.im == 0.0 && ratio.re >= 0.0 {
        return Err(DulacError::UnsupportedRatio(ratio));
    }
    let lambda = match exact {
        Some(e) => {
            if (ratio - C64::new(e.value(), 0.0)).norm() > 1e-12 * ratio.norm().max(1.0) {
                return Err(DulacError::Precondition(format!(
                    "exact tag -{}/{} does not match lambda = {ratio}",
                    e.p(),
                    e.q()
                )));
            }
            Lambda::negative_rational(e.p(), e.q())?
        }
        None => Lambda::new(ratio)?,
    };
    let res = Resonances {
        lambda: lambda.value(),
        exact,
    };
    let j = jet_order;

    let inv_beta = beta.inv();
    let mut f: VectorField = (
        a_jet.truncate_total(j).scale(inv_beta),
        b_jet.truncate_total(j).scale(inv_beta),
    );
    let mut forward: VectorField = (x_var(), y_var());

    for d in 2..=j {
        let mut hx = TruncatedSeries::zero(0, 0);
        let mut hy = TruncatedSeries::zero(0, 0);
        for (n, m, c) in f.0.homogeneous(d).terms() {
            if let Some(div) = res.x_divisor(n, m) {
                hx.insert(n, m, c / div);
            }
        }
        for (n, m, c) in f.1.homogeneous(d).terms() {
            if let Some(div) = res.y_divisor(n, m) {
                hy.insert(n, m, c / div);
            }
        }
        if hx.is_zero() && hy.is_zero() {
            continue;
        }
        let p = x_var().add(&hx);
        let q = y_var().add(&hy);
        let composed = (f.0.compose(&p, &q, j), f.1.compose(&p, &q, j));
        // (I + Dh)^{-1} = Σ_k (-Dh)^k; each factor raises the degree by d-1
        let minus_dh = {
            let jac = jacobian(&hx, &hy);
            jac.map(|row| row.map(|e| e.scale(-ONE)))
        };
        let mut term = composed.clone();
        let mut acc = composed;
        loop {
            term = mat_vec(&minus_dh, &term, j);
            if term.0.is_zero() && term.1.is_zero() {
                break;
            }
            acc = (acc.0.add(&term.0), acc.1.add(&term.1));
        }
        // the degree-d non-resonant part cancels analytically; drop round-off
        let clean_x = acc
            .0
            .filter(|n, m| n + m != d || res.x_divisor(n, m).is_none());
        let clean_y = acc
            .1
            .filter(|n, m| n + m != d || res.y_divisor(n, m).is_none());
        f = (clean_x, clean_y);
        forward = (forward.0.compose(&p, &q, j), forward.1.compose(&p, &q, j));
    }

    // f = (λX·Û, Û(1+R)Y) with Û = U/β
    let u_hat = f.0.div_monomial(1, 0)?.scale(lambda.value().inv());
    let s = f.1.div_monomial(0, 1)?;
    let one_plus_r = s.mul_truncated(&u_hat.inverse_truncated(j)?, j);
    let mut r = one_plus_r.clone();
    r.add_to(0, 0, -ONE);
    let u = u_hat.scale(beta);
    let a = match exact {
        Some(e) => e.q() as u32,
        None => (-lambda.value().inv().re).ceil().max(1.0) as u32,
    };
    // terms outside {n >= a, m >= 1} vanish analytically; drop their round-off
    let outside = |n: usize, m: usize| n < a as usize || m < 1;
    let r = drop_roundoff(&r, outside);
    let u = drop_roundoff(&u, |n, m| (n, m) != (0, 0) && outside(n, m));

    for (n, m, _) in r.terms() {
        if n < a as usize || m < 1 {
            return Err(DulacError::InternalConsistency(format!(
                "R keeps the unremovable term ({n},{m}) below order a = {a}"
            )));
        }
    }
    for (n, m, _) in u.terms().filter(|&(n, m, _)| (n, m) != (0, 0)) {
        if n < a as usize || m < 1 {
            return Err(DulacError::InternalConsistency(format!(
                "U keeps the unremovable term ({n},{m}) below order a = {a}"
            )));
        }
    }

    let backward = invert_map(&forward, j);
    let field = FieldSpec::new(lambda, a, r, disc)?;
    Ok(PreparedField {
        field,
        u,
        change: CoordinateChange { forward, backward },
        jet_order: j,
    })
}

fn drop_roundoff<F: Fn(usize, usize) -> bool>(s: &TruncatedSeries, suspect: F) -> TruncatedSeries {
    let scale = s.terms().map(|(_, _, c)| c.norm()).fold(1.0f64, f64::max);
    s.filter(|n, m| !(suspect(n, m) && s.coeff(n, m).norm() <= 1e-12 * scale))
}

/// Inverse of a near-identity map by fixed-point iteration `Ψ = id - φ∘Ψ`.
fn invert_map(map: &VectorField, j: usize) -> VectorField {
    let phi = (map.0.sub(&x_var()), map.1.sub(&y_var()));
    let mut psi: VectorField = (x_var(), y_var());
    for _ in 0..j {
        let next = (
            x_var().sub(&phi.0.compose(&psi.0, &psi.1, j)),
            y_var().sub(&phi.1.compose(&psi.0, &psi.1, j)),
        );
        if next == psi {
            break;
        }
        psi = next;
    }
    psi
}

impl PreparedField {
    /// The prepared vector field `U·X_R` as `(U λ X, U (1+R) Y)`, truncated.
    pub fn prepared_components(&self) -> (TruncatedSeries, TruncatedSeries) {
        let j = self.jet_order;
        let lambda = self.field.lambda.value();
        let gx = self.u.mul_truncated(&x_var(), j).scale(lambda);
        let mut one_plus_r = self.field.r.clone();
        one_plus_r.add_to(0, 0, ONE);
        let gy = self
            .u
            .mul_truncated(&one_plus_r, j)
            .mul_truncated(&y_var(), j);
        (gx, gy)
    }

    /// Pushes `U·X_R` forward through the coordinate change, giving the field
    /// in the original coordinates modulo total degree `jet_order`.
    pub fn recompose(&self) -> (TruncatedSeries, TruncatedSeries) {
        let j = self.jet_order;
        let (fx, fy) = &self.change.forward;
        let (bx, by) = &self.change.backward;
        let (gx, gy) = self.prepared_components();
        let g_back = (gx.compose(bx, by, j), gy.compose(bx, by, j));
        let jac = jacobian(fx, fy).map(|row| row.map(|e| e.compose(bx, by, j)));
        mat_vec(&jac, &g_back, j)
    }
}
