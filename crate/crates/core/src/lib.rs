//! Complex Dulac maps and Dulac times of the prepared saddle field
//! `X_R = λx∂x + (1 + R)y∂y`.
//!
//! The pipeline runs bottom-up: [`series`] holds truncated power series and
//! field preparation, [`resonance`] finds the resonant support, [`geometry`]
//! builds the integration path in logarithmic coordinates, [`lift`] lifts it
//! into a leaf, and [`dulac`] assembles maps, times and asymptotic bounds.

pub mod dulac;
pub mod error;
pub mod geometry;
pub mod lift;
mod ode;
pub mod resonance;
pub mod scalar;
pub mod series;

pub use dulac::{
    asymptotic_deviation, characteristics_model, decompose, dominant_parts, dulac_map, dulac_model,
    dulac_time, error_constants, saddle_node_model, t_nm, time_dominant, AsymptoticReport,
    DulacResult, ErrorConstants,
};
pub use error::{DulacError, Result};
pub use geometry::{
    build_path, in_cone, stability_params, BasePoint, IntegrationPath, PathCase, StabilityParams,
};
pub use lift::{
    check_growth_bound, h_drift, lift_path, lift_segment, LiftResult, LiftStatus, SolverConfig,
};
pub use resonance::{brute_force_support, convergents, resonant_support, ResonantSupport};
pub use scalar::{ExactRatio, Lambda, C64};
pub use series::{check_conditions, prepare_field, split, FieldSpec, Polydisc, TruncatedSeries};
