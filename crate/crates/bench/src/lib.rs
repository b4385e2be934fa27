//! Fixtures shared by the benchmarks.

use dulac_core::{
    stability_params, BasePoint, FieldSpec, Lambda, Polydisc, StabilityParams, TruncatedSeries,
};
use num_complex::Complex64;

/// `λ = -1`, `a = 2`, `R = 0.3x²y` on the unit polydisc with base point
/// `z_* = w_* = -1`.
pub fn saddle_fixture() -> (FieldSpec, BasePoint, StabilityParams) {
    let disc = Polydisc::new(1.0, 1.0).expect("valid polydisc");
    let lambda = Lambda::real(-1.0).expect("nonzero");
    let r = TruncatedSeries::monomial(2, 1, Complex64::new(0.3, 0.0));
    let field = FieldSpec::new(lambda, 2, r, disc).expect("valid field");
    let base = BasePoint::new(Complex64::new(-1.0, 0.0), Complex64::new(-1.0, 0.0), 1)
        .expect("valid base point");
    let params = stability_params(&lambda, 0.3, &disc, 2, 0.1, base.z_star).expect("condition (R)");
    (field, base, params)
}
