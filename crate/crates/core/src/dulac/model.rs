//! Characteristics of the linear model and their dominant parts.

use crate::error::{DulacError, Result};
use crate::geometry::BasePoint;
use crate::resonance::ResonantSupport;
use crate::scalar::{exprel, Lambda, C64};
use crate::series::{split, FieldSpec, TruncatedSeries};

use super::check_nonvanishing;

/// `T_{n,m}(z) = ∫_z^{z_*} exp(nu + m w_0(u)) du` with
/// `w_0(u) = w_* + (u - z)/λ`.
///
/// For a tagged `λ = -p/q` and `(n, m) = k(q, p)` the integrand is constant
/// and the value is `(z_* - z) e^{k(p w_* + q z)}`; otherwise
/// `e^{m w_* + nz} (z_* - z) exprel((n + m/λ)(z_* - z))`.
pub fn t_nm(n: usize, m: usize, z: C64, lambda: &Lambda, base: &BasePoint) -> C64 {
    let dz = base.z_star - z;
    let (nf, mf) = (n as f64, m as f64);
    if (n, m) != (0, 0) && lambda.is_exact_resonance(n, m) {
        return dz * (base.w_star * mf + z * nf).exp();
    }
    let s = (lambda.value().inv() * mf + nf) * dz;
    (base.w_star * mf + z * nf).exp() * dz * exprel(s)
}

/// `Σ G_{n,m} T_{n,m}(z) = ∫_{γ_0(z)} G∘ℰ dz`.
pub fn characteristics_model(
    g: &TruncatedSeries,
    z: C64,
    lambda: &Lambda,
    base: &BasePoint,
) -> C64 {
    g.terms()
        .map(|(n, m, c)| c * t_nm(n, m, z, lambda, base))
        .sum()
}

/// Predicted size of each part of the model characteristic as `Re z → -∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayOrder {
    /// `G_0(0)(z_* - z) + O(e^z)`
    RegularLinear,
    /// `O(|z e^{-z/λ}|)`
    ResonantZExp,
    /// `O(|e^{-z/λ}|)`
    RemainderExp,
}

impl DecayOrder {
    pub fn describe(&self) -> &'static str {
        match self {
            DecayOrder::RegularLinear => "G0(0)(z_*-z) + O(exp z)",
            DecayOrder::ResonantZExp => "O(|z exp(-z/lambda)|)",
            DecayOrder::RemainderExp => "O(|exp(-z/lambda)|)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominantParts {
    pub regular: C64,
    pub resonant: C64,
    pub remainder: C64,
    pub orders: [DecayOrder; 3],
}

/// Splits `G` and evaluates the model characteristic of each part, without
/// checking the hypotheses under which the decay orders hold.
pub fn decompose(
    g: &TruncatedSeries,
    z: C64,
    a: u32,
    lambda: &Lambda,
    base: &BasePoint,
    support: &ResonantSupport,
) -> Result<DominantParts> {
    let (g0, g_res, g_rem) = split(g, a, lambda, support)?;
    Ok(DominantParts {
        regular: characteristics_model(&g0, z, lambda, base),
        resonant: characteristics_model(&g_res, z, lambda, base),
        remainder: characteristics_model(&g_rem, z, lambda, base),
        orders: [
            DecayOrder::RegularLinear,
            DecayOrder::ResonantZExp,
            DecayOrder::RemainderExp,
        ],
    })
}

fn require_asymptotic_regime(a: u32, lambda: &Lambda) -> Result<()> {
    if lambda.value().re >= 0.0 {
        return Err(DulacError::WrongCase(format!(
            "asymptotics need Re(lambda) < 0, got lambda = {}",
            lambda.value()
        )));
    }
    if lambda.condition_a_sign(a) != std::cmp::Ordering::Greater {
        return Err(DulacError::AsymptoticsRefused {
            value: lambda.condition_a_value(a),
        });
    }
    Ok(())
}

/// [`decompose`] restricted to `Re λ < 0` and `Re(a + 1/λ) > 0`.
pub fn dominant_parts(
    g: &TruncatedSeries,
    z: C64,
    a: u32,
    lambda: &Lambda,
    base: &BasePoint,
    support: &ResonantSupport,
) -> Result<DominantParts> {
    require_asymptotic_regime(a, lambda)?;
    decompose(g, z, a, lambda, base, support)
}

/// Leading terms of the Dulac time: with `W = 1/U` truncated to the degree
/// bounds of `U`, returns `((1/λ)∫_{γ_0} W_0∘ℰ dz, (1/λ)∫_{γ_0} W_Res∘ℰ dz)`.
pub fn time_dominant(
    u: &TruncatedSeries,
    z: C64,
    field: &FieldSpec,
    base: &BasePoint,
    support: &ResonantSupport,
) -> Result<(C64, C64)> {
    check_nonvanishing(u, &field.disc)?;
    require_asymptotic_regime(field.a, &field.lambda)?;
    if let Some((n, m, _)) = u
        .terms()
        .find(|&(n, m, _)| (n, m) != (0, 0) && (n < field.a as usize || m == 0))
    {
        return Err(DulacError::InvalidSupport { n, m, a: field.a });
    }
    let w = u.inverse_bounded(u.n_max(), u.m_max())?;
    let (w0, w_res, _) = split(&w, field.a, &field.lambda, support)?;
    let inv = field.lambda.value().inv();
    Ok((
        characteristics_model(&w0, z, &field.lambda, base) * inv,
        characteristics_model(&w_res, z, &field.lambda, base) * inv,
    ))
}
