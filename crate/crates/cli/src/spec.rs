//! JSON field-spec files.

use std::path::Path;

use dulac_core::{
    geometry::default_epsilon, stability_params, BasePoint, FieldSpec, Lambda, Polydisc,
    SolverConfig, StabilityParams, TruncatedSeries,
};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexValue {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<&ComplexValue> for Complex64 {
    fn from(c: &ComplexValue) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactSpec {
    pub p: u64,
    pub q: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaSpec {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    pub exact: Option<ExactSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub zstar: ComplexValue,
    pub wstar: ComplexValue,
    #[serde(rename = "N")]
    pub n: u32,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub delta_margin: Option<f64>,
    pub epsilon: Option<f64>,
}

/// A coefficient `[n, m, re, im]`.
pub type Coefficient = (usize, usize, f64, f64);

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpecFile {
    pub lambda: LambdaSpec,
    pub a: u32,
    pub rho: f64,
    pub r: f64,
    #[serde(rename = "R")]
    pub r_coeffs: Vec<Coefficient>,
    #[serde(rename = "U")]
    pub u_coeffs: Option<Vec<Coefficient>>,
    pub base: BaseSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub geometry: GeometrySpec,
}

/// Everything a subcommand needs, validated.
#[derive(Debug, Clone)]
pub struct Problem {
    pub field: FieldSpec,
    pub u: Option<TruncatedSeries>,
    pub base: BasePoint,
    pub solver: SolverConfig,
    pub delta_margin: f64,
    pub epsilon: Option<f64>,
}

impl Problem {
    /// Beam parameters; fails when condition (R) does not hold.
    pub fn params(&self) -> Result<StabilityParams, CliError> {
        let f = &self.field;
        let norm = f.norm_r()?;
        let p = stability_params(
            &f.lambda,
            norm,
            &f.disc,
            f.a,
            self.delta_margin,
            self.base.z_star,
        )?;
        let eps = self
            .epsilon
            .unwrap_or_else(|| default_epsilon(p.ln_rho, p.kappa));
        Ok(p.with_epsilon(eps)?)
    }
}

pub fn series_from(coeffs: &[Coefficient]) -> Result<TruncatedSeries, CliError> {
    let mut s = TruncatedSeries::zero(0, 0);
    for &(n, m, re, im) in coeffs {
        if !(re.is_finite() && im.is_finite()) {
            return Err(CliError::Parse(format!(
                "non-finite coefficient at ({n},{m})"
            )));
        }
        s.add_to(n, m, Complex64::new(re, im));
    }
    Ok(s)
}

fn lambda_from(spec: &LambdaSpec) -> Result<Lambda, CliError> {
    let bad = |e: dulac_core::DulacError| CliError::Parse(format!("lambda: {e}"));
    match &spec.exact {
        Some(e) => {
            let l = Lambda::negative_rational(e.p, e.q).map_err(bad)?;
            let tol = 1e-12 * l.value().norm().max(1.0);
            if (l.value() - Complex64::new(spec.re, spec.im)).norm() > tol {
                return Err(CliError::Parse(format!(
                    "lambda = {}+{}i does not match its exact tag -{}/{}",
                    spec.re, spec.im, e.p, e.q
                )));
            }
            Ok(l)
        }
        None => Lambda::new(Complex64::new(spec.re, spec.im)).map_err(bad),
    }
}

impl FieldSpecFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn into_problem(self, tol_override: Option<f64>) -> Result<Problem, CliError> {
        let lambda = lambda_from(&self.lambda)?;
        let disc = Polydisc::new(self.rho, self.r).map_err(|e| CliError::Parse(e.to_string()))?;
        let r = series_from(&self.r_coeffs)?;
        let field =
            FieldSpec::new(lambda, self.a, r, disc).map_err(|e| CliError::Parse(e.to_string()))?;
        let u = self.u_coeffs.as_deref().map(series_from).transpose()?;
        let base = BasePoint::new(
            (&self.base.zstar).into(),
            (&self.base.wstar).into(),
            self.base.n,
        )
        .map_err(|e| CliError::Parse(e.to_string()))?;
        let defaults = SolverConfig::default();
        let solver = SolverConfig {
            rel_tol: tol_override
                .or(self.solver.rel_tol)
                .unwrap_or(defaults.rel_tol),
            abs_tol: self.solver.abs_tol.unwrap_or(defaults.abs_tol),
            max_step: defaults.max_step,
            max_steps: self.solver.max_steps.unwrap_or(defaults.max_steps),
        };
        solver
            .validate()
            .map_err(|e| CliError::Parse(e.to_string()))?;
        let delta_margin = self.geometry.delta_margin.unwrap_or(0.1);
        if !(delta_margin > 0.0 && delta_margin < 1.0) {
            return Err(CliError::Parse(format!(
                "geometry.delta_margin must lie in (0, 1), got {delta_margin}"
            )));
        }
        if let Some(eps) = self.geometry.epsilon {
            if !(eps.is_finite() && eps > 0.0) {
                return Err(CliError::Parse(format!(
                    "geometry.epsilon must be positive, got {eps}"
                )));
            }
        }
        Ok(Problem {
            field,
            u,
            base,
            solver,
            delta_margin,
            epsilon: self.geometry.epsilon,
        })
    }
}
