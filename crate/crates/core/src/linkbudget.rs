//! Closed-form received-power evaluators.
//!
//! The conventional link is
//!
//! ```text
//! P_r = P_t · λ · h / ((4π)² · d^α)
//! ```
//!
//! with `λ` to the first power, and the IRS-assisted double-hop link is
//!
//! ```text
//! P_r = P_t·G_t·G_r·G·M²·N²·d_x·d_y·λ²·cos θ_t·cos θ_r·A² / (64π³·(d₁·d₂)²)
//! ```
//!
//! where `G = 4π·d_x·d_y / λ²` is the element scattering gain, always derived
//! from the panel and carrier so the two cannot disagree.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::units::{wavelength, watts_to_dbm};

/// Transmitter-side radio parameters shared by both link models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioConfig {
    pub carrier_frequency_hz: f64,
    pub transmit_power_w: f64,
    /// Downlink bandwidth. Carried for reporting; neither model uses it.
    pub bandwidth_hz: f64,
    /// Transmit antenna gain `G_t`, linear.
    pub tx_gain_linear: f64,
    /// Receive antenna gain `G_r`, linear.
    pub rx_gain_linear: f64,
}

impl RadioConfig {
    pub fn new(
        carrier_frequency_hz: f64,
        transmit_power_w: f64,
        bandwidth_hz: f64,
        tx_gain_linear: f64,
        rx_gain_linear: f64,
    ) -> Result<Self> {
        let cfg = RadioConfig {
            carrier_frequency_hz,
            transmit_power_w,
            bandwidth_hz,
            tx_gain_linear,
            rx_gain_linear,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        positive("radio.carrier_frequency_hz", self.carrier_frequency_hz)?;
        positive("radio.transmit_power_w", self.transmit_power_w)?;
        positive("radio.bandwidth_hz", self.bandwidth_hz)?;
        positive("radio.tx_gain_linear", self.tx_gain_linear)?;
        positive("radio.rx_gain_linear", self.rx_gain_linear)?;
        Ok(())
    }

    pub fn wavelength_m(&self) -> Result<f64> {
        wavelength(self.carrier_frequency_hz)
    }
}

/// A rectangular IRS of `M × N` identical elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrsPanel {
    pub elements_m: u32,
    pub elements_n: u32,
    pub element_len_x_m: f64,
    pub element_len_y_m: f64,
    /// Reflection amplitude `A`, in (0, 1].
    pub reflection_coeff: f64,
    /// Incidence angle on the BS→IRS hop, radians in [0, π/2).
    pub theta_t_rad: f64,
    /// Departure angle on the IRS→device hop, radians in [0, π/2).
    pub theta_r_rad: f64,
}

impl IrsPanel {
    pub fn validate(&self) -> Result<()> {
        if self.elements_m == 0 {
            return Err(Error::domain("panel.elements_m", 0.0, "must be at least 1"));
        }
        if self.elements_n == 0 {
            return Err(Error::domain("panel.elements_n", 0.0, "must be at least 1"));
        }
        positive("panel.element_len_x_m", self.element_len_x_m)?;
        positive("panel.element_len_y_m", self.element_len_y_m)?;
        if !(self.reflection_coeff > 0.0 && self.reflection_coeff <= 1.0) {
            return Err(Error::domain(
                "panel.reflection_coeff",
                self.reflection_coeff,
                "must lie in (0, 1]",
            ));
        }
        angle("panel.theta_t", self.theta_t_rad)?;
        angle("panel.theta_r", self.theta_r_rad)?;
        Ok(())
    }

    pub fn with_angles(self, theta_t_rad: f64, theta_r_rad: f64) -> Self {
        IrsPanel {
            theta_t_rad,
            theta_r_rad,
            ..self
        }
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(field, value, "must be positive and finite"))
    }
}

fn angle(field: &'static str, value: f64) -> Result<()> {
    if (0.0..FRAC_PI_2).contains(&value) {
        Ok(())
    } else {
        Err(Error::domain(field, value, "must lie in [0, 90) degrees"))
    }
}

/// Conventional single-hop received power in watts.
///
/// `h` is the fading power factor and `alpha` the path-loss exponent.
pub fn conventional_rx_power(cfg: &RadioConfig, d: f64, h: f64, alpha: f64) -> Result<f64> {
    cfg.validate()?;
    positive("distance_m", d)?;
    if !(h >= 0.0 && h.is_finite()) {
        return Err(Error::domain("h", h, "must be non-negative and finite"));
    }
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::domain("alpha", alpha, "must be at least 1"));
    }
    let lambda = cfg.wavelength_m()?;
    let four_pi = 4.0 * PI;
    Ok(cfg.transmit_power_w * lambda * h / (four_pi * four_pi * d.powf(alpha)))
}

/// Element scattering gain `4π·d_x·d_y / λ²`.
pub fn irs_scattering_gain(panel: &IrsPanel, lambda: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    Ok(4.0 * PI * panel.element_len_x_m * panel.element_len_y_m / (lambda * lambda))
}

/// IRS-assisted double-hop received power in watts.
///
/// `d1` is base station → IRS and `d2` is IRS → device. The result is
/// bit-identical under swapping `(d1, θ_t)` with `(d2, θ_r)`.
pub fn irs_rx_power(cfg: &RadioConfig, panel: &IrsPanel, d1: f64, d2: f64) -> Result<f64> {
    cfg.validate()?;
    panel.validate()?;
    positive("d1_m", d1)?;
    positive("d2_m", d2)?;
    let lambda = cfg.wavelength_m()?;
    let gain = irs_scattering_gain(panel, lambda)?;

    let m = f64::from(panel.elements_m);
    let n = f64::from(panel.elements_n);
    let a = panel.reflection_coeff;
    // Both products are single commutative multiplications, which keeps the
    // hop swap exact.
    let angular = panel.theta_t_rad.cos() * panel.theta_r_rad.cos();
    let hops = d1 * d2;

    let numerator = cfg.transmit_power_w
        * cfg.tx_gain_linear
        * cfg.rx_gain_linear
        * gain
        * (m * m)
        * (n * n)
        * panel.element_len_x_m
        * panel.element_len_y_m
        * (lambda * lambda)
        * angular
        * (a * a);
    Ok(numerator / (64.0 * PI * PI * PI * (hops * hops)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelTag {
    Conventional,
    IrsAssisted,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Conventional => "conventional",
            ModelTag::IrsAssisted => "irs",
        }
    }
}

/// The link distances a sample was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkDistance {
    Direct { d_m: f64 },
    TwoHop { d1_m: f64, d2_m: f64 },
}

/// One evaluated point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSample {
    pub link: LinkDistance,
    pub power_w: f64,
    /// `10·log₁₀(power_w / 1 mW)`, or `-inf` for 0 W.
    pub power_dbm: f64,
    pub model: ModelTag,
}

impl PowerSample {
    pub fn new(model: ModelTag, link: LinkDistance, power_w: f64) -> Self {
        PowerSample {
            link,
            power_w,
            power_dbm: watts_to_dbm(power_w),
            model,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::SPEED_OF_LIGHT_M_S;

    fn unity_radio() -> RadioConfig {
        RadioConfig::new(SPEED_OF_LIGHT_M_S, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    fn unity_panel() -> IrsPanel {
        IrsPanel {
            elements_m: 1,
            elements_n: 1,
            element_len_x_m: 1.0,
            element_len_y_m: 1.0,
            reflection_coeff: 1.0,
            theta_t_rad: 0.0,
            theta_r_rad: 0.0,
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn conventional_unity_case() {
        let p = conventional_rx_power(&unity_radio(), 1.0, 1.0, 2.0).unwrap();
        assert!(rel(p, 1.0 / (16.0 * PI * PI)) <= 1e-12);
        assert_eq!(conventional_rx_power(&unity_radio(), 1.0, 0.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn conventional_3p5_ghz() {
        let radio = RadioConfig::new(3.5e9, 1.0, 20e6, 1.0, 1.0).unwrap();
        let p = conventional_rx_power(&radio, 10.0, 1.0, 2.0).unwrap();
        // 40-digit evaluation of λ/((4π)²·100).
        assert!(rel(p, 5.424_165_480_643_899e-6) <= 1e-12);
    }

    #[test]
    fn conventional_domain_errors() {
        let r = unity_radio();
        assert_eq!(
            conventional_rx_power(&r, 0.0, 1.0, 2.0).unwrap_err().field(),
            Some("distance_m")
        );
        assert_eq!(
            conventional_rx_power(&r, -1.0, 1.0, 2.0).unwrap_err().field(),
            Some("distance_m")
        );
        assert_eq!(
            conventional_rx_power(&r, 1.0, -0.5, 2.0).unwrap_err().field(),
            Some("h")
        );
        assert_eq!(
            conventional_rx_power(&r, 1.0, 1.0, 0.5).unwrap_err().field(),
            Some("alpha")
        );
    }

    #[test]
    fn radio_rejects_zero_power() {
        let err = RadioConfig::new(3.5e9, 0.0, 1.0, 1.0, 1.0).unwrap_err();
        assert_eq!(err.field(), Some("radio.transmit_power_w"));
    }

    #[test]
    fn scattering_gain_anchors() {
        let mut panel = unity_panel();
        assert!(rel(irs_scattering_gain(&panel, 1.0).unwrap(), 4.0 * PI) <= 1e-15);
        panel.element_len_x_m = 0.5;
        panel.element_len_y_m = 0.5;
        assert!(rel(irs_scattering_gain(&panel, 1.0).unwrap(), PI) <= 1e-15);
        panel.element_len_x_m = 0.01;
        panel.element_len_y_m = 0.01;
        let g = irs_scattering_gain(&panel, 0.085654988).unwrap();
        assert!(rel(g, 0.171_279_168_863_601_65) <= 1e-12);
    }

    #[test]
    fn irs_unity_case() {
        let p = irs_rx_power(&unity_radio(), &unity_panel(), 1.0, 1.0).unwrap();
        assert!(rel(p, 1.0 / (16.0 * PI * PI)) <= 1e-12);
    }

    #[test]
    fn irs_3p5_ghz_panel() {
        let radio = RadioConfig::new(3.5e9, 1.0, 20e6, 1.0, 1.0).unwrap();
        let panel = IrsPanel {
            elements_m: 32,
            elements_n: 32,
            element_len_x_m: 0.01,
            element_len_y_m: 0.01,
            reflection_coeff: 0.9,
            theta_t_rad: PI / 4.0,
            theta_r_rad: PI / 4.0,
        };
        let p = irs_rx_power(&radio, &panel, 20.0, 15.0).unwrap();
        // 40-digit evaluation of the double-hop expression.
        assert!(rel(p, 2.988_083_291_032_912e-10) <= 1e-12);
    }

    #[test]
    fn irs_power_vanishes_towards_grazing() {
        let radio = unity_radio();
        let mut last = f64::INFINITY;
        for k in 0..200 {
            let theta = FRAC_PI_2 * (k as f64) / 200.0;
            let p = irs_rx_power(&radio, &unity_panel().with_angles(theta, 0.0), 1.0, 1.0)
                .unwrap();
            assert!(p < last);
            last = p;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn irs_domain_errors() {
        let r = unity_radio();
        let p = unity_panel();
        assert_eq!(irs_rx_power(&r, &p, 0.0, 1.0).unwrap_err().field(), Some("d1_m"));
        assert_eq!(irs_rx_power(&r, &p, 1.0, -2.0).unwrap_err().field(), Some("d2_m"));
        let grazing = p.with_angles(FRAC_PI_2, 0.0);
        assert_eq!(
            irs_rx_power(&r, &grazing, 1.0, 1.0).unwrap_err().field(),
            Some("panel.theta_t")
        );
        let bad_a = IrsPanel {
            reflection_coeff: 1.5,
            ..p
        };
        assert_eq!(bad_a.validate().unwrap_err().field(), Some("panel.reflection_coeff"));
        let empty = IrsPanel { elements_n: 0, ..p };
        assert_eq!(empty.validate().unwrap_err().field(), Some("panel.elements_n"));
    }

    #[test]
    fn zero_power_sample_is_negative_infinity() {
        let s = PowerSample::new(ModelTag::Conventional, LinkDistance::Direct { d_m: 1.0 }, 0.0);
        assert_eq!(s.power_dbm, f64::NEG_INFINITY);
    }
}
