//! Truncated bivariate power series, polydisc norms and field conditions.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{DulacError, Result};
use crate::resonance::ResonantSupport;
use crate::scalar::{ensure_finite, Lambda, C64, ONE, ZERO};

mod prepare;

pub use prepare::{prepare_field, CoordinateChange, PreparedField};

/// Finitely supported series `Σ G_{n,m} x^n y^m` with index bounds.
///
/// Every stored index satisfies `n <= n_max`, `m <= m_max`; absent
/// coefficients are exactly zero and exact zeros are never stored.
#[derive(Clone, PartialEq, Default)]
pub struct TruncatedSeries {
    coeffs: BTreeMap<(usize, usize), C64>,
    n_max: usize,
    m_max: usize,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[{}x{}]{{", self.n_max, self.m_max)?;
        for (i, ((n, m), c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({n},{m}): {c}")?;
        }
        write!(f, "}}")
    }
}

impl TruncatedSeries {
    /// The zero series with the given index bounds.
    pub fn zero(n_max: usize, m_max: usize) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            n_max,
            m_max,
        }
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(n: usize, m: usize, c: C64) -> Self {
        let mut s = Self::zero(n, m);
        s.insert(n, m, c);
        s
    }

    /// Builds a series from `(n, m, coefficient)` triples. Repeated indices add
    /// up; the bounds are the largest indices seen.
    pub fn from_terms<I: IntoIterator<Item = (usize, usize, C64)>>(terms: I) -> Self {
        let mut s = Self::zero(0, 0);
        for (n, m, c) in terms {
            s.add_to(n, m, c);
        }
        s
    }

    /// Like [`from_terms`](Self::from_terms) with explicit bounds; indices
    /// beyond the bounds are rejected.
    pub fn with_bounds<I: IntoIterator<Item = (usize, usize, C64)>>(
        n_max: usize,
        m_max: usize,
        terms: I,
    ) -> Result<Self> {
        let mut s = Self::zero(n_max, m_max);
        for (n, m, c) in terms {
            if n > n_max || m > m_max {
                return Err(DulacError::Domain(format!(
                    "index ({n},{m}) outside bounds ({n_max},{m_max})"
                )));
            }
            ensure_finite(c, "series coefficient")?;
            s.add_to(n, m, c);
        }
        Ok(s)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn coeff(&self, n: usize, m: usize) -> C64 {
        self.coeffs.get(&(n, m)).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in lexicographic `(n, m)` order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.coeffs.iter().map(|(&(n, m), &c)| (n, m, c))
    }

    /// Sets a coefficient, widening the bounds if needed.
    pub fn insert(&mut self, n: usize, m: usize, c: C64) {
        self.n_max = self.n_max.max(n);
        self.m_max = self.m_max.max(m);
        if c == ZERO {
            self.coeffs.remove(&(n, m));
        } else {
            self.coeffs.insert((n, m), c);
        }
    }

    /// Adds to a coefficient, widening the bounds if needed.
    pub fn add_to(&mut self, n: usize, m: usize, c: C64) {
        let v = self.coeff(n, m) + c;
        self.insert(n, m, v);
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|&(n, m)| n + m).max()
    }

    pub fn lowest_total_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|&(n, m)| n + m).min()
    }

    /// Drops every term of total degree above `deg`.
    pub fn truncate_total(&self, deg: usize) -> Self {
        let mut out = Self::zero(self.n_max.min(deg), self.m_max.min(deg));
        for (n, m, c) in self.terms().filter(|&(n, m, _)| n + m <= deg) {
            out.insert(n, m, c);
        }
        out
    }

    /// Homogeneous part of total degree `deg`.
    pub fn homogeneous(&self, deg: usize) -> Self {
        let mut out = Self::zero(0, 0);
        for (n, m, c) in self.terms().filter(|&(n, m, _)| n + m == deg) {
            out.insert(n, m, c);
        }
        out
    }

    /// Keeps the terms selected by `keep`, preserving bounds.
    pub fn filter<F: Fn(usize, usize) -> bool>(&self, keep: F) -> Self {
        let mut out = Self::zero(self.n_max, self.m_max);
        for (n, m, c) in self.terms().filter(|&(n, m, _)| keep(n, m)) {
            out.insert(n, m, c);
        }
        out
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = Self::zero(self.n_max, self.m_max);
        for (n, m, c) in self.terms() {
            out.insert(n, m, c * k);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, m, c) in other.terms() {
            out.add_to(n, m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    /// Product keeping only terms of total degree `<= max_total`.
    pub fn mul_truncated(&self, other: &Self, max_total: usize) -> Self {
        let mut out = Self::zero(0, 0);
        for (n1, m1, c1) in self.terms() {
            if n1 + m1 > max_total {
                continue;
            }
            for (n2, m2, c2) in other.terms() {
                if n1 + m1 + n2 + m2 <= max_total {
                    out.add_to(n1 + n2, m1 + m2, c1 * c2);
                }
            }
        }
        out
    }

    /// Product keeping only indices within `n_max`, `m_max`.
    pub fn mul_bounded(&self, other: &Self, n_max: usize, m_max: usize) -> Self {
        let mut out = Self::zero(n_max, m_max);
        for (n1, m1, c1) in self.terms() {
            for (n2, m2, c2) in other.terms() {
                if n1 + n2 <= n_max && m1 + m2 <= m_max {
                    out.add_to(n1 + n2, m1 + m2, c1 * c2);
                }
            }
        }
        out
    }

    /// Multiplicative inverse with indices kept within `n_max`, `m_max`.
    ///
    /// Uses `1/U = (1/c)·Σ_k (-V/c)^k` where `V = U - c`, `c = U(0,0)`;
    /// every power of `V` raises `n + m`, so the sum is finite.
    pub fn inverse_bounded(&self, n_max: usize, m_max: usize) -> Result<Self> {
        let c = self.coeff(0, 0);
        if c == ZERO {
            return Err(DulacError::Precondition(
                "series inverse needs a nonzero constant term".into(),
            ));
        }
        let mut v = self.clone();
        v.insert(0, 0, ZERO);
        let ratio = v.scale(-c.inv());
        let mut out = Self::constant(ONE);
        let mut power = Self::constant(ONE);
        for _ in 0..=(n_max + m_max) {
            power = power.mul_bounded(&ratio, n_max, m_max);
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        let mut out = out.scale(c.inv());
        out.n_max = n_max;
        out.m_max = m_max;
        Ok(out)
    }

    /// Multiplicative inverse keeping total degree `<= max_total`.
    pub fn inverse_truncated(&self, max_total: usize) -> Result<Self> {
        let c = self.coeff(0, 0);
        if c == ZERO {
            return Err(DulacError::Precondition(
                "series inverse needs a nonzero constant term".into(),
            ));
        }
        let mut v = self.truncate_total(max_total);
        v.insert(0, 0, ZERO);
        let ratio = v.scale(-c.inv());
        let mut out = Self::constant(ONE);
        let mut power = Self::constant(ONE);
        for _ in 0..max_total {
            power = power.mul_truncated(&ratio, max_total);
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out.scale(c.inv()))
    }

    pub fn d_dx(&self) -> Self {
        let mut out = Self::zero(self.n_max.saturating_sub(1), self.m_max);
        for (n, m, c) in self.terms().filter(|&(n, _, _)| n > 0) {
            out.insert(n - 1, m, c * n as f64);
        }
        out
    }

    pub fn d_dy(&self) -> Self {
        let mut out = Self::zero(self.n_max, self.m_max.saturating_sub(1));
        for (n, m, c) in self.terms().filter(|&(_, m, _)| m > 0) {
            out.insert(n, m - 1, c * m as f64);
        }
        out
    }

    /// Exact division by `x^i y^j`; fails if a term is not divisible.
    pub fn div_monomial(&self, i: usize, j: usize) -> Result<Self> {
        let mut out = Self::zero(self.n_max.saturating_sub(i), self.m_max.saturating_sub(j));
        for (n, m, c) in self.terms() {
            if n < i || m < j {
                return Err(DulacError::InternalConsistency(format!(
                    "term ({n},{m}) not divisible by x^{i} y^{j}"
                )));
            }
            out.insert(n - i, m - j, c);
        }
        Ok(out)
    }

    /// Substitutes `x -> p(X, Y)`, `y -> q(X, Y)`, keeping total degree
    /// `<= max_total`.
    pub fn compose(&self, p: &Self, q: &Self, max_total: usize) -> Self {
        let p = p.truncate_total(max_total);
        let q = q.truncate_total(max_total);
        let n_top = self.terms().map(|(n, _, _)| n).max().unwrap_or(0);
        let m_top = self.terms().map(|(_, m, _)| m).max().unwrap_or(0);
        let powers = |base: &Self, top: usize| {
            let mut v = vec![Self::constant(ONE)];
            for k in 1..=top {
                let next = v[k - 1].mul_truncated(base, max_total);
                v.push(next);
            }
            v
        };
        let p_pow = powers(&p, n_top);
        let q_pow = powers(&q, m_top);
        let mut out = Self::zero(0, 0);
        for (n, m, c) in self.terms() {
            let term = p_pow[n].mul_truncated(&q_pow[m], max_total).scale(c);
            out = out.add(&term);
        }
        out
    }

    /// `Σ G_{n,m} x^n y^m` by nested Horner evaluation (outer in `x`).
    pub fn eval(&self, x: C64, y: C64) -> C64 {
        let mut rows: BTreeMap<usize, Vec<(usize, C64)>> = BTreeMap::new();
        for (n, m, c) in self.terms() {
            rows.entry(n).or_default().push((m, c));
        }
        let horner_y = |row: &[(usize, C64)]| {
            // row sorted by m ascending; evaluate from the top down
            let mut acc = ZERO;
            let mut prev = row.last().map(|&(m, _)| m).unwrap_or(0);
            for &(m, c) in row.iter().rev() {
                acc *= y.powu((prev - m) as u32);
                acc += c;
                prev = m;
            }
            acc * y.powu(prev as u32)
        };
        let mut acc = ZERO;
        let mut prev = rows.keys().next_back().copied().unwrap_or(0);
        for (&n, row) in rows.iter().rev() {
            acc *= x.powu((prev - n) as u32);
            acc += horner_y(row);
            prev = n;
        }
        acc * x.powu(prev as u32)
    }

    /// `G(exp z, exp w)` summed as `Σ G_{n,m} exp(n z + m w)`.
    pub fn eval_log(&self, z: C64, w: C64) -> C64 {
        self.terms()
            .map(|(n, m, c)| c * (z * n as f64 + w * m as f64).exp())
            .sum()
    }

    /// Rigorous bound `Σ |G_{n,m}| ρ^{n-a} r^m >= sup_𝒰 |G / x^a|`.
    pub fn weighted_norm(&self, disc: &Polydisc, a: u32) -> Result<f64> {
        let a = a as usize;
        let mut s = 0.0;
        for (n, m, c) in self.terms() {
            if n < a {
                return Err(DulacError::InvalidSupport { n, m, a: a as u32 });
            }
            s += c.norm() * disc.rho.powi((n - a) as i32) * disc.r.powi(m as i32);
        }
        Ok(s)
    }

    /// Rigorous bound `Σ |G_{n,m}| ρ^n r^m >= sup_𝒰 |G|`.
    pub fn sup_bound(&self, disc: &Polydisc) -> f64 {
        self.terms()
            .map(|(n, m, c)| c.norm() * disc.rho.powi(n as i32) * disc.r.powi(m as i32))
            .sum()
    }

    /// Rigorous bound `Σ m |G_{n,m}| ρ^n r^{m-1} >= sup_𝒰 |∂G/∂y|`.
    pub fn dy_bound(&self, disc: &Polydisc) -> f64 {
        self.terms()
            .filter(|&(_, m, _)| m > 0)
            .map(|(n, m, c)| {
                m as f64 * c.norm() * disc.rho.powi(n as i32) * disc.r.powi(m as i32 - 1)
            })
            .sum()
    }

    /// Regular part `G(x, 0)`.
    pub fn regular_part(&self) -> Self {
        self.filter(|_, m| m == 0)
    }
}

/// Splits `G` into its regular part (`m = 0`), its resonant part (indices in
/// the resonant support) and the remainder.
pub fn split(
    g: &TruncatedSeries,
    a: u32,
    lambda: &Lambda,
    support: &ResonantSupport,
) -> Result<(TruncatedSeries, TruncatedSeries, TruncatedSeries)> {
    if support.a() != a || support.lambda() != *lambda {
        return Err(DulacError::Precondition(
            "resonant support computed for different (a, lambda)".into(),
        ));
    }
    let needs = g
        .terms()
        .filter(|&(_, m, _)| m > 0)
        .map(|(n, _, _)| n)
        .max()
        .unwrap_or(0);
    if support.n_max() < needs {
        return Err(DulacError::SupportRange {
            support_n_max: support.n_max(),
            series_n_max: needs,
        });
    }
    let regular = g.filter(|_, m| m == 0);
    let resonant = g.filter(|n, m| m > 0 && support.contains(n, m));
    let remainder = g.filter(|n, m| m > 0 && !support.contains(n, m));
    Ok((regular, resonant, remainder))
}

/// Polydisc `𝒰 = ρ𝔻 × r𝔻`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polydisc {
    rho: f64,
    r: f64,
}

impl Polydisc {
    pub fn new(rho: f64, r: f64) -> Result<Self> {
        if !(rho.is_finite() && r.is_finite() && rho > 0.0 && r > 0.0) {
            return Err(DulacError::Domain(format!(
                "polydisc radii must be positive, got rho={rho}, r={r}"
            )));
        }
        Ok(Self { rho, r })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn ln_rho(&self) -> f64 {
        self.rho.ln()
    }

    pub fn ln_r(&self) -> f64 {
        self.r.ln()
    }
}

/// The prepared field `X_R = λx∂x + (1+R)y∂y` on a polydisc.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub lambda: Lambda,
    pub a: u32,
    pub r: TruncatedSeries,
    pub disc: Polydisc,
}

impl FieldSpec {
    pub fn new(lambda: Lambda, a: u32, r: TruncatedSeries, disc: Polydisc) -> Result<Self> {
        if a == 0 {
            return Err(DulacError::Domain("a must be a positive integer".into()));
        }
        for (_, _, c) in r.terms() {
            ensure_finite(c, "R coefficient")?;
        }
        Ok(Self { lambda, a, r, disc })
    }

    /// `||R||`, the weighted sup-norm bound of `R / x^a`.
    pub fn norm_r(&self) -> Result<f64> {
        self.r.weighted_norm(&self.disc, self.a)
    }

    /// Fails unless conditions (X) and (R) hold.
    pub fn require_x_and_r(&self) -> Result<()> {
        let report = check_conditions(self);
        if let Some((n, m)) = report.first_x_violation {
            return Err(DulacError::InvalidSupport { n, m, a: self.a });
        }
        if !report.condition_r {
            return Err(DulacError::ConditionR {
                value: report.norm_r_rho_a,
            });
        }
        Ok(())
    }

    /// Fails unless `Re(a + 1/λ) > 0`.
    pub fn require_strict_a(&self) -> Result<()> {
        if self.lambda.condition_a_sign(self.a) != std::cmp::Ordering::Greater {
            return Err(DulacError::AsymptoticsRefused {
                value: self.lambda.condition_a_value(self.a),
            });
        }
        Ok(())
    }
}

/// Outcome of [`check_conditions`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// (X): `R ∈ x^a ℂ{x,y}` on the stored support.
    pub condition_x: bool,
    pub first_x_violation: Option<(usize, usize)>,
    /// (a): `Re(a + 1/λ) >= 0`.
    pub condition_a: bool,
    pub condition_a_value: f64,
    /// `Re(a + 1/λ) > 0`, required by every asymptotic statement.
    pub condition_a_strict: bool,
    /// (R): `||R|| ρ^a < 1`.
    pub condition_r: bool,
    pub norm_r_rho_a: f64,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.condition_x && self.condition_a && self.condition_r
    }
}

pub fn check_conditions(field: &FieldSpec) -> ConditionReport {
    let first_x_violation = field
        .r
        .terms()
        .find(|&(n, _, _)| n < field.a as usize)
        .map(|(n, m, _)| (n, m));
    let sign = field.lambda.condition_a_sign(field.a);
    // Σ|R_{n,m}| ρ^n r^m equals ||R|| ρ^a whenever (X) holds
    let norm_r_rho_a = field.r.sup_bound(&field.disc);
    ConditionReport {
        condition_x: first_x_violation.is_none(),
        first_x_violation,
        condition_a: sign != std::cmp::Ordering::Less,
        condition_a_value: field.lambda.condition_a_value(field.a),
        condition_a_strict: sign == std::cmp::Ordering::Greater,
        condition_r: norm_r_rho_a < 1.0,
        norm_r_rho_a,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonance::resonant_support;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let g = TruncatedSeries::monomial(1, 1, ONE);
        assert_eq!(g.eval(c(2.0, 0.0), c(3.0, 0.0)), c(6.0, 0.0));
        assert_eq!(
            TruncatedSeries::zero(3, 3).eval(c(2.0, 1.0), c(1.0, 1.0)),
            ZERO
        );
        let g = TruncatedSeries::from_terms([(2, 0, ONE), (1, 2, ONE)]);
        let v = g.eval(c(1.0, 1.0), ONE);
        assert!((v - c(1.0, 3.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_log_examples() {
        let g = TruncatedSeries::from_terms([(0, 0, c(1.0, 2.0)), (3, 1, c(-0.5, 0.0))]);
        assert!((g.eval_log(ZERO, ZERO) - c(0.5, 2.0)).norm() < 1e-15);
        let xy = TruncatedSeries::monomial(1, 1, ONE);
        let v = xy.eval_log(c(2f64.ln(), 0.0), c(3f64.ln(), 0.0));
        assert!((v - c(6.0, 0.0)).norm() < 1e-14);
        let x2 = TruncatedSeries::monomial(2, 0, ONE);
        let v = x2.eval_log(c(0.0, std::f64::consts::PI), ZERO);
        assert!((v - ONE).norm() < 1e-15);
    }

    #[test]
    fn weighted_norm_examples() {
        let disc = Polydisc::new(0.5, 0.7).unwrap();
        for a in 1..4 {
            let g = TruncatedSeries::monomial(a, 0, ONE);
            assert_eq!(g.weighted_norm(&disc, a as u32).unwrap(), 1.0);
        }
        let eps = c(0.3, -0.4);
        let g = TruncatedSeries::monomial(2, 1, eps);
        assert!((g.weighted_norm(&disc, 2).unwrap() - 0.5 * 0.7).abs() < 1e-15);
        let g = TruncatedSeries::from_terms([(1, 0, ONE), (2, 0, ONE)]);
        assert!((g.weighted_norm(&disc, 1).unwrap() - 1.5).abs() < 1e-15);
        let bad = TruncatedSeries::monomial(0, 1, ONE);
        assert!(matches!(
            bad.weighted_norm(&disc, 1),
            Err(DulacError::InvalidSupport { n: 0, m: 1, a: 1 })
        ));
    }

    #[test]
    fn dy_bound_examples() {
        let half = Polydisc::new(0.5, 1.0).unwrap();
        assert_eq!(TruncatedSeries::monomial(3, 0, ONE).dy_bound(&half), 0.0);
        assert!((TruncatedSeries::monomial(1, 1, ONE).dy_bound(&half) - 0.5).abs() < 1e-15);
        let both = Polydisc::new(0.5, 0.5).unwrap();
        assert!((TruncatedSeries::monomial(1, 2, ONE).dy_bound(&both) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn split_examples() {
        let l = Lambda::real(-1.0).unwrap();
        let g = TruncatedSeries::from_terms([(1, 0, ONE), (1, 1, ONE), (2, 3, ONE)]);
        let s = resonant_support(1, &l, 4);
        let (g0, gres, grem) = split(&g, 1, &l, &s).unwrap();
        assert_eq!(g0.terms().collect::<Vec<_>>(), vec![(1, 0, ONE)]);
        assert_eq!(gres.terms().collect::<Vec<_>>(), vec![(1, 1, ONE)]);
        assert_eq!(grem.terms().collect::<Vec<_>>(), vec![(2, 3, ONE)]);

        let li = Lambda::new(c(0.0, 1.0)).unwrap();
        let s = resonant_support(1, &li, 4);
        let (_, gres, _) = split(&g, 1, &li, &s).unwrap();
        assert!(gres.is_zero());

        let only_regular = TruncatedSeries::from_terms([(0, 0, ONE), (3, 0, c(2.0, 0.0))]);
        let (g0, gres, grem) = split(&only_regular, 1, &l, &s_for(&l, 1, 3)).unwrap();
        assert_eq!(g0, only_regular);
        assert!(gres.is_zero() && grem.is_zero());
    }

    fn s_for(l: &Lambda, a: u32, n: usize) -> ResonantSupport {
        resonant_support(a, l, n)
    }

    #[test]
    fn split_rejects_short_support() {
        let l = Lambda::real(-1.0).unwrap();
        let g = TruncatedSeries::monomial(5, 5, ONE);
        let s = resonant_support(1, &l, 3);
        assert!(matches!(
            split(&g, 1, &l, &s),
            Err(DulacError::SupportRange { .. })
        ));
    }

    #[test]
    fn condition_examples() {
        let disc = Polydisc::new(1.0, 1.0).unwrap();
        let zero = TruncatedSeries::zero(0, 0);
        let f = FieldSpec::new(Lambda::real(-1.0).unwrap(), 1, zero.clone(), disc).unwrap();
        let rep = check_conditions(&f);
        assert_eq!(rep.condition_a_value, 0.0);
        assert!(rep.condition_a && !rep.condition_a_strict);

        let f = FieldSpec::new(Lambda::real(-2.0).unwrap(), 1, zero, disc).unwrap();
        let rep = check_conditions(&f);
        assert_eq!(rep.condition_a_value, 0.5);
        assert!(rep.condition_a_strict);

        let r = TruncatedSeries::monomial(1, 0, c(0.5, 0.0));
        let f = FieldSpec::new(Lambda::real(-2.0).unwrap(), 1, r, disc).unwrap();
        let rep = check_conditions(&f);
        assert_eq!(rep.norm_r_rho_a, 0.5);
        assert!(rep.condition_r && rep.all_hold());
    }

    #[test]
    fn condition_a_for_rational_with_a_equal_q() {
        let disc = Polydisc::new(1.0, 1.0).unwrap();
        for (p, q) in [(1u64, 2u64), (2, 3), (3, 2), (5, 7)] {
            let l = Lambda::negative_rational(p, q).unwrap();
            let f = FieldSpec::new(l, q as u32, TruncatedSeries::zero(0, 0), disc).unwrap();
            let rep = check_conditions(&f);
            let expected = q as f64 - q as f64 / p as f64;
            assert!((rep.condition_a_value - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn inverse_bounded_of_one_plus_monomial() {
        let u = TruncatedSeries::from_terms([(0, 0, ONE), (3, 2, ONE)]);
        let w = u.inverse_bounded(3, 2).unwrap();
        assert_eq!(w.coeff(0, 0), ONE);
        assert_eq!(w.coeff(3, 2), -ONE);
        assert_eq!(w.len(), 2);
        let w = u.inverse_bounded(9, 6).unwrap();
        assert_eq!(w.coeff(9, 6), -ONE);
        assert_eq!(w.coeff(6, 4), ONE);
    }

    #[test]
    fn compose_with_identity_is_identity() {
        let g = TruncatedSeries::from_terms([(2, 1, c(0.3, 0.1)), (0, 3, c(-1.0, 0.0))]);
        let x = TruncatedSeries::monomial(1, 0, ONE);
        let y = TruncatedSeries::monomial(0, 1, ONE);
        assert_eq!(g.compose(&x, &y, 5), g);
    }
}
