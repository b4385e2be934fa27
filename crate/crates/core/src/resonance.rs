//! Continued fractions and the resonant support `Res(a, λ)`.
//!
//! `Res(a, λ)` collects the `(n, m)` with `m > 0`, `n >= a` and
//! `|nλ + m| < 1/(2n)`. It is empty unless `λ` is a negative real. By
//! Legendre's theorem every such pair is a multiple `k(q_j, p_j)` of a
//! convergent `p_j/q_j` of `|λ|`, so the support is found by walking the
//! convergents and their multiples and re-checking the defining inequality.

use crate::error::{DulacError, Result};
use crate::scalar::{Lambda, C64};

/// A convergent `p/q` with `gcd(p, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Convergent {
    pub p: u64,
    pub q: u64,
}

/// Input to [`convergents`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Exact { p: u64, q: u64 },
    Float(f64),
}

/// Continued-fraction convergents of `alpha > 0` with denominator `<= q_max`.
///
/// Exact input terminates with `alpha` itself. Float input stops once the
/// fractional remainder drops below `1e3·ε·alpha`, where further partial
/// quotients would only reflect rounding noise.
pub fn convergents(alpha: Alpha, q_max: u64) -> Result<Vec<Convergent>> {
    let mut out = Vec::new();
    let (mut p_prev, mut q_prev) = (1u64, 0u64);
    let (mut p_prev2, mut q_prev2) = (0u64, 1u64);
    let mut push = |quotient: u64, out: &mut Vec<Convergent>| -> bool {
        let p = quotient
            .checked_mul(p_prev)
            .and_then(|v| v.checked_add(p_prev2));
        let q = quotient
            .checked_mul(q_prev)
            .and_then(|v| v.checked_add(q_prev2));
        match (p, q) {
            (Some(p), Some(q)) if q <= q_max => {
                out.push(Convergent { p, q });
                p_prev2 = p_prev;
                q_prev2 = q_prev;
                p_prev = p;
                q_prev = q;
                true
            }
            _ => false,
        }
    };
    match alpha {
        Alpha::Exact { p, q } => {
            if p == 0 || q == 0 {
                return Err(DulacError::Domain(format!(
                    "alpha = {p}/{q} must be positive"
                )));
            }
            let (mut num, mut den) = (p, q);
            while den != 0 {
                if !push(num / den, &mut out) {
                    break;
                }
                let rem = num % den;
                num = den;
                den = rem;
            }
        }
        Alpha::Float(x) => {
            if !(x.is_finite() && x > 0.0) {
                return Err(DulacError::Domain(format!("alpha = {x} must be positive")));
            }
            let floor_eps = 1e3 * f64::EPSILON * x;
            let mut rem = x;
            loop {
                let quotient = rem.floor();
                if quotient.is_nan() || quotient >= u64::MAX as f64 || !push(quotient as u64, &mut out) {
                    break;
                }
                let frac = rem - quotient;
                if frac < floor_eps {
                    break;
                }
                rem = frac.recip();
            }
        }
    }
    Ok(out)
}

/// Why a pair belongs to the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResonanceKind {
    /// `nλ + m = 0` exactly (tagged rational `λ`).
    RationalResonant,
    /// `0 < |nλ + m| < 1/(2n)`.
    ConvergentQuasiResonant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantPair {
    pub n: usize,
    pub m: usize,
    pub kind: ResonanceKind,
    /// `|nλ + m|`
    pub defect: f64,
}

/// The resonant support with the parameters it was computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonantSupport {
    pairs: Vec<ResonantPair>,
    a: u32,
    lambda: Lambda,
    n_max: usize,
    near_rational: Option<Convergent>,
}

impl ResonantSupport {
    fn build(a: u32, lambda: &Lambda, n_max: usize, mut pairs: Vec<ResonantPair>) -> Self {
        pairs.sort_by_key(|p| (p.n, p.m));
        pairs.dedup_by_key(|p| (p.n, p.m));
        Self {
            pairs,
            a,
            lambda: *lambda,
            n_max,
            near_rational: None,
        }
    }

    pub fn pairs(&self) -> &[ResonantPair] {
        &self.pairs
    }

    pub fn indices(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|p| (p.n, p.m)).collect()
    }

    pub fn contains(&self, n: usize, m: usize) -> bool {
        self.pairs
            .binary_search_by_key(&(n, m), |p| (p.n, p.m))
            .is_ok()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Set when an untagged `λ` sits within `1e-12` of a rational `-p/q`
    /// with `q <= 1e4`; the exact tag is then probably what was meant.
    pub fn near_rational(&self) -> Option<Convergent> {
        self.near_rational
    }
}

/// Membership test straight from the definition.
///
/// Tagged rationals `λ = -p/q` use integers: `|nλ + m| < 1/(2n)` is
/// `2n |mq - np| < q`.
fn criterion(lambda: &Lambda, n: usize, m: usize) -> Option<ResonantPair> {
    if n == 0 || m == 0 {
        return None;
    }
    match lambda.exact() {
        Some(e) => {
            let diff = (m as i128 * e.q() as i128 - n as i128 * e.p() as i128).unsigned_abs();
            (2 * n as u128 * diff < e.q() as u128).then(|| ResonantPair {
                n,
                m,
                kind: if diff == 0 {
                    ResonanceKind::RationalResonant
                } else {
                    ResonanceKind::ConvergentQuasiResonant
                },
                defect: diff as f64 / e.q() as f64,
            })
        }
        None => {
            let defect = (lambda.value() * n as f64 + C64::new(m as f64, 0.0)).norm();
            (defect < 0.5 / n as f64).then_some(ResonantPair {
                n,
                m,
                kind: ResonanceKind::ConvergentQuasiResonant,
                defect,
            })
        }
    }
}

/// Returns `-p/q` when an untagged negative real `λ` is within `1e-12` of a
/// rational with `q <= 1e4`.
pub fn near_rational(lambda: &Lambda) -> Option<Convergent> {
    if lambda.exact().is_some() || !lambda.is_negative_real() {
        return None;
    }
    let alpha = -lambda.value().re;
    convergents(Alpha::Float(alpha), 10_000)
        .ok()?
        .into_iter()
        .find(|c| (alpha - c.p as f64 / c.q as f64).abs() < 1e-12)
}

/// `Res(a, λ)` restricted to `n <= n_max`, via convergents of `|λ|`.
pub fn resonant_support(a: u32, lambda: &Lambda, n_max: usize) -> ResonantSupport {
    if !lambda.is_negative_real() {
        return ResonantSupport::build(a, lambda, n_max, Vec::new());
    }
    let alpha = match lambda.exact() {
        Some(e) => Alpha::Exact { p: e.p(), q: e.q() },
        None => Alpha::Float(-lambda.value().re),
    };
    // alpha > 0 and finite by construction of Lambda
    let convs = convergents(alpha, n_max as u64).unwrap_or_default();
    let lo = (a as usize).max(1);
    let mut pairs = Vec::new();
    for c in convs.iter().filter(|c| c.p > 0) {
        let (q, p) = (c.q as usize, c.p as usize);
        let mut k = 1;
        while k * q <= n_max {
            if k * q >= lo {
                if let Some(pair) = criterion(lambda, k * q, k * p) {
                    pairs.push(pair);
                } else if k > 1 {
                    // |kqλ + kp| = k|qλ + p| grows with k while 1/(2kq) shrinks
                    break;
                }
            }
            k += 1;
        }
    }
    let mut support = ResonantSupport::build(a, lambda, n_max, pairs);
    support.near_rational = near_rational(lambda);
    support
}

/// `Res(a, λ)` by direct enumeration of the definition; the reference oracle
/// for [`resonant_support`].
pub fn brute_force_support(a: u32, lambda: &Lambda, n_max: usize) -> ResonantSupport {
    let mut pairs = Vec::new();
    if lambda.is_negative_real() {
        let abs = lambda.value().norm();
        for n in (a as usize).max(1)..=n_max {
            let m_hi = (n as f64 * abs).ceil() as usize + 1;
            pairs.extend((1..=m_hi).filter_map(|m| criterion(lambda, n, m)));
        }
    }
    ResonantSupport::build(a, lambda, n_max, pairs)
}
