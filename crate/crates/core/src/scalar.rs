//! Complex scalars and the eigenvalue ratio.

use num_complex::Complex64;

use crate::error::{DulacError, Result};

/// Complex scalar used throughout the toolkit.
pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub(crate) fn ensure_finite(c: C64, what: &'static str) -> Result<C64> {
    if c.re.is_finite() && c.im.is_finite() {
        Ok(c)
    } else {
        Err(DulacError::NonFinite(what))
    }
}

/// `exp(s) - 1` without cancellation for small `|s|`.
pub fn expm1(s: C64) -> C64 {
    let (sin_half, cos_im) = ((0.5 * s.im).sin(), s.im.cos());
    let em1 = s.re.exp_m1();
    C64::new(
        em1 * cos_im - 2.0 * sin_half * sin_half,
        s.re.exp() * s.im.sin(),
    )
}

/// `(exp(s) - 1) / s`, continuous through `s = 0`.
///
/// Below `|s| = 1e-4` the four-term Taylor polynomial is used; its truncation
/// error is below `|s|^4 / 120 < 1e-18`.
pub fn exprel(s: C64) -> C64 {
    if s.norm() < 1e-4 {
        ONE + s * (0.5 + s * (1.0 / 6.0 + s / 24.0))
    } else {
        expm1(s) / s
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact negative rational ratio `lambda = -p/q` with `gcd(p, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactRatio {
    p: u64,
    q: u64,
}

impl ExactRatio {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(DulacError::Precondition(format!(
                "exact ratio needs positive p and q, got p={p}, q={q}"
            )));
        }
        let g = gcd(p, q);
        Ok(Self { p: p / g, q: q / g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        -(self.p as f64) / self.q as f64
    }

    /// `n lambda + m = 0`, i.e. `(n, m)` is a multiple of `(q, p)`.
    pub fn annihilates(&self, n: u64, m: u64) -> bool {
        n as u128 * self.p as u128 == m as u128 * self.q as u128
    }
}

/// The eigenvalue ratio: a complex float with an optional exact tag.
///
/// When the tag is present every exact-resonance decision is taken from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda {
    value: C64,
    exact: Option<ExactRatio>,
}

impl Lambda {
    pub fn new(value: C64) -> Result<Self> {
        ensure_finite(value, "lambda")?;
        if value == ZERO {
            return Err(DulacError::Precondition("lambda must be nonzero".into()));
        }
        Ok(Self { value, exact: None })
    }

    pub fn real(value: f64) -> Result<Self> {
        Self::new(C64::new(value, 0.0))
    }

    /// `lambda = -p/q`, reduced to lowest terms.
    pub fn negative_rational(p: u64, q: u64) -> Result<Self> {
        let exact = ExactRatio::new(p, q)?;
        Ok(Self {
            value: C64::new(exact.value(), 0.0),
            exact: Some(exact),
        })
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    pub fn exact(&self) -> Option<ExactRatio> {
        self.exact
    }

    /// `lambda` lies on the open negative real half-line.
    pub fn is_negative_real(&self) -> bool {
        self.exact.is_some() || (self.value.im == 0.0 && self.value.re < 0.0)
    }

    /// Exact resonance `n lambda + m = 0`; only decided for tagged ratios.
    pub fn is_exact_resonance(&self, n: usize, m: usize) -> bool {
        match self.exact {
            Some(e) => (n, m) != (0, 0) && e.annihilates(n as u64, m as u64),
            None => false,
        }
    }

    /// `Re(a + 1/lambda)`, exact when the ratio is tagged.
    pub fn condition_a_value(&self, a: u32) -> f64 {
        match self.exact {
            Some(e) => a as f64 - e.q as f64 / e.p as f64,
            None => a as f64 + self.value.inv().re,
        }
    }

    /// Sign of `Re(a + 1/lambda)`: `Some(Ordering)` relative to zero.
    pub(crate) fn condition_a_sign(&self, a: u32) -> std::cmp::Ordering {
        match self.exact {
            Some(e) => (a as u128 * e.p as u128).cmp(&(e.q as u128)),
            None => self
                .condition_a_value(a)
                .partial_cmp(&0.0)
                .unwrap_or(std::cmp::Ordering::Less),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_ratio_reduces() {
        let e = ExactRatio::new(4, 6).unwrap();
        assert_eq!((e.p(), e.q()), (2, 3));
        assert!(e.annihilates(3, 2));
        assert!(e.annihilates(6, 4));
        assert!(!e.annihilates(3, 1));
    }

    #[test]
    fn exprel_is_continuous_at_threshold() {
        let s = C64::new(1e-4, 0.0);
        let below = exprel(s * (1.0 - 1e-9));
        let above = exprel(s * (1.0 + 1e-9));
        assert!((below - above).norm() < 1e-12);
        assert_eq!(exprel(ZERO), ONE);
    }

    #[test]
    fn expm1_matches_exp_for_large_arguments() {
        let s = C64::new(1.3, -2.1);
        assert!((expm1(s) - (s.exp() - ONE)).norm() < 1e-14);
    }

    #[test]
    fn condition_a_for_tagged_and_float() {
        let l = Lambda::negative_rational(1, 1).unwrap();
        assert_eq!(l.condition_a_value(1), 0.0);
        assert_eq!(l.condition_a_sign(1), std::cmp::Ordering::Equal);
        let l = Lambda::real(-2.0).unwrap();
        assert_eq!(l.condition_a_value(1), 0.5);
    }
}
