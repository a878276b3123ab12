//! Cartesian positions of the base station, IRS and device.

use crate::error::{Error, Result};

/// A point in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Straight-line distance between two points.
pub fn euclidean_distance(a: Point3, b: Point3) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub base_station: Point3,
    pub irs: Option<Point3>,
    pub device: Point3,
}

impl LinkGeometry {
    pub fn validate(&self) -> Result<()> {
        let finite = |p: &Point3, field| {
            if p.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(field, f64::NAN, "coordinates must be finite"))
            }
        };
        finite(&self.base_station, "geometry.base_station")?;
        finite(&self.device, "geometry.device")?;
        if let Some(irs) = &self.irs {
            finite(irs, "geometry.irs")?;
        }
        Ok(())
    }

    /// Base station to device.
    pub fn direct_distance(&self) -> f64 {
        euclidean_distance(self.base_station, self.device)
    }

    /// Base station to IRS, if an IRS is deployed.
    pub fn bs_irs_distance(&self) -> Option<f64> {
        self.irs.map(|irs| euclidean_distance(self.base_station, irs))
    }

    /// IRS to device, if an IRS is deployed.
    pub fn irs_device_distance(&self) -> Option<f64> {
        self.irs.map(|irs| euclidean_distance(irs, self.device))
    }
}
