//! Physical constants and unit conversions.

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s (exact by SI definition).
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

const MILLIWATT: f64 = 1e-3;

/// Carrier wavelength in meters, `c / f`.
pub fn wavelength(carrier_frequency_hz: f64) -> Result<f64> {
    if !(carrier_frequency_hz > 0.0 && carrier_frequency_hz.is_finite()) {
        return Err(Error::domain(
            "carrier_frequency_hz",
            carrier_frequency_hz,
            "must be positive and finite",
        ));
    }
    Ok(SPEED_OF_LIGHT_M_S / carrier_frequency_hz)
}

/// Converts watts to dBm.
///
/// Zero and negative powers map to `f64::NEG_INFINITY` rather than NaN, so a
/// vanishing fading draw still produces an orderable value. `+inf` W (a
/// receiver sitting on a radiating point) maps to `+inf` dBm.
pub fn watts_to_dbm(power_w: f64) -> f64 {
    if power_w > 0.0 {
        10.0 * (power_w / MILLIWATT).log10()
    } else if power_w.is_nan() {
        f64::NAN
    } else {
        f64::NEG_INFINITY
    }
}

/// Converts dBm to watts. `-inf` dBm maps back to exactly 0 W.
pub fn dbm_to_watts(power_dbm: f64) -> f64 {
    MILLIWATT * 10f64.powf(power_dbm / 10.0)
}
