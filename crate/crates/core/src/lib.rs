//! Downlink received-power models for small-cell IoT links.
//!
//! Two closed-form link budgets are provided: a conventional single-hop
//! link with a Rayleigh power factor and a path-loss exponent, and a
//! double-hop link through an intelligent reflecting surface (IRS).
//! Around them sit seeded fading samplers, Monte Carlo estimators, and a
//! sweep engine producing distance, angle, coverage-grid and comparison
//! tables.
//!
//! ```
//! use irslink_core::{conventional_rx_power, watts_to_dbm, RadioConfig};
//!
//! let radio = RadioConfig::new(3.5e9, 1.0, 20e6, 1.0, 1.0).unwrap();
//! let p = conventional_rx_power(&radio, 10.0, 1.0, 2.0).unwrap();
//! assert!((watts_to_dbm(p) + 22.6567).abs() < 1e-3);
//! ```

pub mod error;
pub mod fading;
pub mod geometry;
pub mod linkbudget;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use fading::{
    estimate_conventional_power, expected_conventional_power, h_from_uniform, FadingMode,
    FadingSampler, FadingSpec, MonteCarloEstimate,
};
pub use geometry::{euclidean_distance, LinkGeometry, Point3};
pub use linkbudget::{
    conventional_rx_power, irs_rx_power, irs_scattering_gain, IrsPanel, LinkDistance, ModelTag,
    PowerSample, RadioConfig,
};
pub use sweep::{
    compare_models, run_angle_sweep, run_coverage_grid, run_distance_sweep, AnglePair,
    ComparisonRow, ComparisonSummary, Coordinate, DistanceAxis, Extrema, GridSpec, Scenario,
    SweepKind, SweepRow, SweepSpec, SweepTable, TableMetadata,
};
pub use units::{dbm_to_watts, watts_to_dbm, wavelength, SPEED_OF_LIGHT_M_S};
