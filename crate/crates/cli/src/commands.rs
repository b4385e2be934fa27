use std::path::Path;

use dulac_core::geometry::PathCase;
use dulac_core::resonance::{near_rational, ResonanceKind};
use dulac_core::{
    asymptotic_deviation, brute_force_support, build_path, characteristics_model, check_conditions,
    dominant_parts, dulac_map, dulac_model, dulac_time, error_constants, lift_path,
    resonant_support, time_dominant, DulacError, IntegrationPath,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::spec::{series_from, Coefficient, Problem};

/// Output text plus an optional failure to report after it is written.
pub type Outcome = (String, Option<CliError>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.from];
        }
        let step = (self.to - self.from) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.to
                } else {
                    self.from + step * k as f64
                }
            })
            .collect()
    }
}

/// Shortest round-trip decimal, as used for JSON numbers.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        serde_json::to_string(&v).expect("finite floats serialize")
    } else {
        v.to_string()
    }
}

fn cx(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn load_series(path: &Path) -> Result<dulac_core::TruncatedSeries, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let coeffs: Vec<Coefficient> = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    series_from(&coeffs)
}

fn path_json(p: &IntegrationPath) -> Value {
    json!({
        "case": match p.case { PathCase::Saddle => "saddle", PathCase::Node => "node" },
        "vertices": p.vertices.iter().copied().map(cx).collect::<Vec<_>>(),
        "segment_directions": p.segment_directions.iter().copied().map(cx).collect::<Vec<_>>(),
        "length": p.length(),
    })
}

pub fn check(problem: &Problem) -> Result<Outcome, CliError> {
    let rep = check_conditions(&problem.field);
    let mut violated = Vec::new();
    if !rep.condition_x {
        violated.push("(X)");
    }
    if !rep.condition_a {
        violated.push("(a)");
    }
    if !rep.condition_r {
        violated.push("(R)");
    }
    let v = json!({
        "condition_x": rep.condition_x,
        "first_x_violation": rep.first_x_violation,
        "condition_a": rep.condition_a,
        "condition_a_value": rep.condition_a_value,
        "condition_a_strict": rep.condition_a_strict,
        "condition_r": rep.condition_r,
        "norm_r_rho_a": rep.norm_r_rho_a,
        "all_hold": rep.all_hold(),
        "violated": violated,
    });
    let failure = (!rep.all_hold())
        .then(|| CliError::Verdict(format!("conditions violated: {}", violated.join(", "))));
    Ok((pretty(&v), failure))
}

pub fn resonance(problem: &Problem, nmax: usize) -> Result<Outcome, CliError> {
    let f = &problem.field;
    let fast = resonant_support(f.a, &f.lambda, nmax);
    let brute = brute_force_support(f.a, &f.lambda, nmax);
    let agree = fast.indices() == brute.indices();
    let pairs: Vec<Value> = fast
        .pairs()
        .iter()
        .map(|p| {
            json!({
                "n": p.n,
                "m": p.m,
                "kind": match p.kind {
                    ResonanceKind::RationalResonant => "rational_resonant",
                    ResonanceKind::ConvergentQuasiResonant => "convergent_quasi_resonant",
                },
                "defect": p.defect,
            })
        })
        .collect();
    let near = near_rational(&f.lambda).map(|c| json!({"p": c.p, "q": c.q}));
    let v = json!({
        "a": f.a,
        "n_max": nmax,
        "pairs": pairs,
        "brute_force_agrees": agree,
        "near_rational": near,
    });
    let failure = (!agree).then(|| {
        CliError::Verdict("resonant support disagrees with brute-force enumeration".into())
    });
    Ok((pretty(&v), failure))
}

pub fn path(problem: &Problem, z: Complex64) -> Result<Outcome, CliError> {
    let params = problem.params()?;
    let p = build_path(z, &problem.base, &params, params.epsilon)?;
    Ok((pretty(&path_json(&p)), None))
}

pub fn lift(problem: &Problem, z: Complex64, w: Option<Complex64>) -> Result<Outcome, CliError> {
    let params = problem.params()?;
    let p = build_path(z, &problem.base, &params, params.epsilon)?;
    let w0 = w.unwrap_or(problem.base.w_star);
    let res = lift_path(&problem.field, &p, w0, &problem.solver)?;
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    wtr.write_record(["t", "re_z", "im_z", "re_w", "im_w", "re_int_r", "im_int_r"])
        .map_err(io)?;
    for s in &res.samples {
        wtr.write_record([
            num(s.t),
            num(s.z.re),
            num(s.z.im),
            num(s.w.re),
            num(s.w.im),
            num(s.cum_integral_r.re),
            num(s.cum_integral_r.im),
        ])
        .map_err(io)?;
    }
    let bytes = wtr.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let failure = (!res.is_ok())
        .then(|| CliError::Verdict(format!("lift ended with status {}", res.status.as_str())));
    Ok((
        String::from_utf8(bytes).expect("CSV of ASCII numbers"),
        failure,
    ))
}

pub fn dulac(problem: &Problem, z: Complex64) -> Result<Outcome, CliError> {
    let params = problem.params()?;
    let d = dulac_map(&problem.field, z, &problem.base, &params, &problem.solver)?;
    let budget = d.tolerance_budget(&problem.solver);
    let v = json!({
        "z": cx(z),
        "route_a": cx(d.route_a),
        "route_b": cx(d.route_b),
        "discrepancy": d.discrepancy,
        "tolerance_budget": budget,
        "model": cx(dulac_model(z, &problem.field.lambda, &problem.base)),
        "h_drift": d.lift.h_drift,
        "steps": d.lift.samples.len() - 1,
        "path": path_json(&d.path),
    });
    let failure = (d.discrepancy > budget).then(|| {
        CliError::Verdict(format!(
            "route discrepancy {} exceeds {budget}",
            d.discrepancy
        ))
    });
    Ok((pretty(&v), failure))
}

pub fn time(problem: &Problem, z: Complex64) -> Result<Outcome, CliError> {
    let u = problem
        .u
        .as_ref()
        .ok_or_else(|| CliError::Usage("the spec has no U".into()))?;
    let params = problem.params()?;
    let f = &problem.field;
    let value = dulac_time(f, u, z, &problem.base, &params, &problem.solver)?;
    let support = resonant_support(f.a, &f.lambda, u.n_max().max(f.a as usize));
    let dominant = match time_dominant(u, z, f, &problem.base, &support) {
        Ok((model, res)) => json!({"model_term": cx(model), "resonant_term": cx(res)}),
        Err(e) => json!({"unavailable": e.to_string()}),
    };
    let v = json!({
        "z": cx(z),
        "time": cx(value),
        "orientation": "z -> z_star",
        "dominant": dominant,
    });
    Ok((pretty(&v), None))
}

pub fn model(problem: &Problem, z: Complex64, g: Option<&Path>) -> Result<Outcome, CliError> {
    let f = &problem.field;
    let mut v = json!({
        "z": cx(z),
        "dulac_model": cx(dulac_model(z, &f.lambda, &problem.base)),
    });
    if let Some(path) = g {
        let g = load_series(path)?;
        let n_max = g.n_max().max(f.a as usize);
        let support = resonant_support(f.a, &f.lambda, n_max);
        v["characteristics"] = cx(characteristics_model(&g, z, &f.lambda, &problem.base));
        v["parts"] = match dominant_parts(&g, z, f.a, &f.lambda, &problem.base, &support) {
            Ok(p) => json!({
                "regular": cx(p.regular),
                "resonant": cx(p.resonant),
                "remainder": cx(p.remainder),
                "orders": p.orders.iter().map(|o| o.describe()).collect::<Vec<_>>(),
            }),
            Err(e) => json!({"unavailable": e.to_string()}),
        };
    }
    Ok((pretty(&v), None))
}

pub fn bounds(problem: &Problem, z0s: &[Complex64], g: &Path) -> Result<Outcome, CliError> {
    let g = load_series(g)?;
    let params = problem.params()?;
    let f = &problem.field;
    let k = error_constants(f, &params, &problem.base)?;
    let mut rows = Vec::new();
    let mut all_pass = true;
    for &z0 in z0s {
        let rep = asymptotic_deviation(f, &g, z0, &problem.base, &params, &problem.solver)?;
        all_pass &= rep.verdict;
        rows.push(json!({
            "z0": cx(z0),
            "delta": cx(rep.delta_value),
            "bound": rep.bound_value,
            "verdict": rep.verdict,
            "decay_ratio": rep.decay_ratio,
        }));
    }
    let v = json!({
        "constants": {
            "C1": k.c1, "C2": k.c2, "C3": k.c3,
            "K1": k.k1, "K2": k.k2, "K3": k.k3, "K": k.k, "M": k.m,
        },
        "dy_bound": g.dy_bound(&f.disc),
        "samples": rows,
    });
    let failure = (!all_pass).then(|| CliError::Verdict("asymptotic bound violated".into()));
    Ok((pretty(&v), failure))
}

fn status_of(e: &DulacError) -> String {
    match e {
        DulacError::PathConstruction(_) => "path_construction".into(),
        DulacError::Domain(_) => "domain".into(),
        DulacError::Lift { status, .. } => status.clone(),
        DulacError::ConditionR { .. } => "condition_r".into(),
        DulacError::InvalidSupport { .. } => "condition_x".into(),
        DulacError::NonFinite(_) => "non_finite".into(),
        _ => "error".into(),
    }
}

pub fn sweep(
    problem: &Problem,
    re: &Range,
    im: &Range,
    threads: Option<usize>,
) -> Result<Outcome, CliError> {
    let params = problem.params()?;
    let grid: Vec<Complex64> = im
        .values()
        .into_iter()
        .flat_map(|y| re.values().into_iter().map(move |x| Complex64::new(x, y)))
        .collect();
    let eval = || -> Vec<[String; 8]> {
        grid.par_iter()
            .map(
                |&z| match dulac_map(&problem.field, z, &problem.base, &params, &problem.solver) {
                    Ok(d) => {
                        let bound = d.tolerance_budget(&problem.solver);
                        [
                            num(z.re),
                            num(z.im),
                            num(d.route_a.re),
                            num(d.route_a.im),
                            num(d.discrepancy),
                            num(bound),
                            if d.discrepancy <= bound {
                                "pass"
                            } else {
                                "fail"
                            }
                            .to_string(),
                            "ok".to_string(),
                        ]
                    }
                    Err(e) => [
                        num(z.re),
                        num(z.im),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        status_of(&e),
                    ],
                },
            )
            .collect()
    };
    let rows = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?
            .install(eval),
        None => eval(),
    };
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    wtr.write_record([
        "re_z",
        "im_z",
        "re_D",
        "im_D",
        "discrepancy",
        "bound",
        "verdict",
        "status",
    ])
    .map_err(io)?;
    let mut failed = 0;
    for row in &rows {
        failed += usize::from(row[6] == "fail");
        wtr.write_record(row).map_err(io)?;
    }
    let bytes = wtr.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let failure = (failed > 0).then(|| {
        CliError::Verdict(format!(
            "{failed} grid points exceed the route-agreement budget"
        ))
    });
    Ok((
        String::from_utf8(bytes).expect("CSV of ASCII numbers"),
        failure,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_endpoints_are_exact() {
        let r = Range {
            from: -10.0,
            to: -0.1,
            count: 21,
        };
        let v = r.values();
        assert_eq!(v.len(), 21);
        assert_eq!(v[0], -10.0);
        assert_eq!(v[20], -0.1);
        assert_eq!(
            Range {
                from: 2.0,
                to: 3.0,
                count: 1
            }
            .values(),
            vec![2.0]
        );
    }
}
