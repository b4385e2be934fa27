//! Reference oracles for the dulac test suites.
//!
//! Nothing here shares code with `dulac-core`: the quadrature is a plain
//! adaptive Gauss–Kronrod rule and the ODE oracle is a classical fixed-step
//! Runge–Kutta scheme. They are slow and simple on purpose.

use num_complex::Complex64;

pub type C64 = Complex64;

// 15-point Kronrod nodes on [-1, 1] (non-negative half) and weights, with the
// embedded 7-point Gauss weights on the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).norm())
}

/// Adaptive Gauss–Kronrod integral of a complex-valued function on `[a, b]`.
pub fn integrate_real<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, rel_tol: f64) -> C64 {
    let mut stack = vec![(a, b)];
    let (whole, _) = gk15(&f, a, b);
    let scale = whole.norm().max(f64::MIN_POSITIVE);
    let mut total = C64::new(0.0, 0.0);
    let mut pieces = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        pieces += 1;
        let width = (hi - lo) / (b - a);
        if err <= rel_tol * scale * width.max(1e-3) || pieces > 200_000 || (hi - lo).abs() < 1e-14 {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    total
}

/// Straight-segment contour integral `∫_{from}^{to} f(u) du`.
pub fn integrate_segment<F: Fn(C64) -> C64>(f: F, from: C64, to: C64, rel_tol: f64) -> C64 {
    let d = to - from;
    integrate_real(|s| f(from + d * s) * d, 0.0, 1.0, rel_tol)
}

/// Classical RK4 with a fixed step count for `y' = f(t, y)`, `y` complex scalar.
pub fn rk4_fixed<F: Fn(f64, C64) -> C64>(f: F, t0: f64, t1: f64, y0: C64, steps: usize) -> C64 {
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, y + k1 * (0.5 * h));
        let k3 = f(t + 0.5 * h, y + k2 * (0.5 * h));
        let k4 = f(t + h, y + k3 * h);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    y
}

/// Brute-force enumeration of `|nλ + m| < 1/(2n)` with `a <= n <= n_max`,
/// `1 <= m <= ceil(n|λ|) + 1`, for real negative `λ`.
pub fn enumerate_quasi_resonances(a: usize, lambda: f64, n_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if lambda >= 0.0 {
        return out;
    }
    for n in a.max(1)..=n_max {
        let m_hi = (n as f64 * lambda.abs()).ceil() as usize + 1;
        for m in 1..=m_hi {
            if (n as f64 * lambda + m as f64).abs() < 0.5 / n as f64 {
                out.push((n, m));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_of_exponential() {
        let v = integrate_real(|t| C64::new(t.exp(), 0.0), 0.0, 1.0, 1e-13);
        assert!((v.re - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn rk4_on_linear_ode() {
        let y = rk4_fixed(|_, y| y, 0.0, 1.0, C64::new(1.0, 0.0), 1000);
        assert!((y.re - 1f64.exp()).abs() < 1e-11);
    }
}
