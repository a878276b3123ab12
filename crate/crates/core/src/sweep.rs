//! Distance, angle, coverage-grid and comparison sweeps.
//!
//! Geometry conventions:
//!
//! * A distance sweep coordinate is the link distance of the model being
//!   evaluated: the base station → device distance `d` for the conventional
//!   link, and the IRS → device distance `d₂` for the IRS link, with the base
//!   station → IRS distance `d₁` fixed by the scenario geometry.
//! * A coverage grid places the device at every `(x, y)` node at the height of
//!   the scenario's device and uses true 3-D distances for both models.
//!
//! Points are evaluated in parallel. Output is ordered by point index, and
//! every point with Monte Carlo fading draws from its own stream
//! `(seed, point index)`, so tables do not depend on the worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fading::{estimate_conventional_power, FadingMode, FadingSampler, FadingSpec};
use crate::geometry::{euclidean_distance, LinkGeometry, Point3};
use crate::linkbudget::{
    conventional_rx_power, irs_rx_power, IrsPanel, LinkDistance, ModelTag, PowerSample,
    RadioConfig,
};

/// Everything about the deployment that does not change across a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub radio: RadioConfig,
    pub geometry: LinkGeometry,
    pub panel: Option<IrsPanel>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.radio.validate()?;
        self.geometry.validate()?;
        if let Some(panel) = &self.panel {
            panel.validate()?;
        }
        match (self.geometry.irs.is_some(), self.panel.is_some()) {
            (true, false) => Err(Error::Scenario("an IRS position needs panel parameters".into())),
            (false, true) => Err(Error::Scenario("panel parameters need an IRS position".into())),
            _ => Ok(()),
        }
    }

    pub fn has_irs(&self) -> bool {
        self.geometry.irs.is_some() && self.panel.is_some()
    }

    fn require_irs(&self) -> Result<(IrsPanel, f64)> {
        match (self.panel, self.geometry.bs_irs_distance()) {
            (Some(panel), Some(d1)) => Ok((panel, d1)),
            _ => Err(Error::Scenario("this sweep needs an IRS".into())),
        }
    }
}

/// Evenly spaced distances `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceAxis {
    pub start_m: f64,
    pub stop_m: f64,
    pub step_m: f64,
}

impl DistanceAxis {
    pub fn validate(&self) -> Result<()> {
        if !(self.start_m.is_finite() && self.stop_m.is_finite()) {
            return Err(Error::Sweep("distance bounds must be finite".into()));
        }
        if !(self.step_m > 0.0 && self.step_m.is_finite()) {
            return Err(Error::Sweep(format!("step {} must be positive", self.step_m)));
        }
        if self.start_m > self.stop_m {
            return Err(Error::Sweep(format!(
                "empty sweep: start {} exceeds stop {}",
                self.start_m, self.stop_m
            )));
        }
        Ok(())
    }

    /// `floor((stop − start) / step) + 1`. A relative slack of 1e-9 keeps a
    /// stop that is an exact multiple of the step from being lost to rounding.
    pub fn n_points(&self) -> usize {
        let steps = (self.stop_m - self.start_m) / self.step_m;
        (steps + steps.abs() * 1e-9).floor() as usize + 1
    }

    pub fn point(&self, index: usize) -> f64 {
        self.start_m + index as f64 * self.step_m
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points()).map(|i| self.point(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePair {
    pub theta_t_rad: f64,
    pub theta_r_rad: f64,
}

impl AnglePair {
    pub fn from_degrees(theta_t_deg: f64, theta_r_deg: f64) -> Self {
        AnglePair {
            theta_t_rad: theta_t_deg.to_radians(),
            theta_r_rad: theta_r_deg.to_radians(),
        }
    }

    /// The three pairs compared in the published angle study: 45/45, 45/60, 60/60.
    pub fn study_pairs() -> Vec<AnglePair> {
        vec![
            AnglePair::from_degrees(45.0, 45.0),
            AnglePair::from_degrees(45.0, 60.0),
            AnglePair::from_degrees(60.0, 60.0),
        ]
    }
}

/// A rectangular grid of device positions, inclusive of both edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min_m: f64,
    pub x_max_m: f64,
    pub nx: usize,
    pub y_min_m: f64,
    pub y_max_m: f64,
    pub ny: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let bounds = [self.x_min_m, self.x_max_m, self.y_min_m, self.y_max_m];
        if bounds.iter().any(|v| !v.is_finite()) {
            return Err(Error::Sweep("grid bounds must be finite".into()));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::Sweep("grid needs at least 2 points per axis".into()));
        }
        if !(self.x_min_m < self.x_max_m && self.y_min_m < self.y_max_m) {
            return Err(Error::Sweep("grid minimum must be below maximum".into()));
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.nx * self.ny
    }

    /// Node `index` in x-major order.
    pub fn node(&self, index: usize) -> (f64, f64) {
        let (ix, iy) = (index / self.ny, index % self.ny);
        (
            lerp(self.x_min_m, self.x_max_m, ix, self.nx),
            lerp(self.y_min_m, self.y_max_m, iy, self.ny),
        )
    }
}

// Weighted form so that a grid symmetric about zero yields exactly mirrored nodes.
fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    let last = (n - 1) as f64;
    (lo * (last - i as f64) + hi * i as f64) / last
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepKind {
    Distance(DistanceAxis),
    Angle {
        axis: DistanceAxis,
        pairs: Vec<AnglePair>,
    },
    CoverageGrid(GridSpec),
    Compare(DistanceAxis),
}

impl SweepKind {
    pub fn name(&self) -> &'static str {
        match self {
            SweepKind::Distance(_) => "distance",
            SweepKind::Angle { .. } => "angle",
            SweepKind::CoverageGrid(_) => "coverage",
            SweepKind::Compare(_) => "compare",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub fading: FadingSpec,
    /// Monte Carlo draws per point under Rayleigh fading; 0 evaluates at the
    /// deterministic power factor instead.
    pub monte_carlo_n: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.fading.validate()?;
        match &self.kind {
            SweepKind::Distance(axis) | SweepKind::Compare(axis) => axis.validate(),
            SweepKind::Angle { axis, pairs } => {
                axis.validate()?;
                if pairs.is_empty() {
                    return Err(Error::Sweep("angle sweep needs at least one pair".into()));
                }
                Ok(())
            }
            SweepKind::CoverageGrid(grid) => grid.validate(),
        }
    }

    fn monte_carlo(&self) -> bool {
        self.monte_carlo_n > 0 && self.fading.mode == FadingMode::RayleighUnitMean
    }
}

/// Where on the sweep a row sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coordinate {
    Distance {
        distance_m: f64,
    },
    Angle {
        theta_t_rad: f64,
        theta_r_rad: f64,
        distance_m: f64,
    },
    Grid {
        x_m: f64,
        y_m: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub coordinate: Coordinate,
    pub sample: PowerSample,
    /// Set when the device coincides with a radiating point; power is `+inf`.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableMetadata {
    pub scenario: Scenario,
    pub spec: SweepSpec,
    pub seed: u64,
    pub tool_version: &'static str,
}

impl TableMetadata {
    fn new(scenario: &Scenario, spec: &SweepSpec) -> Self {
        TableMetadata {
            scenario: *scenario,
            spec: spec.clone(),
            seed: spec.fading.seed,
            tool_version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub metadata: TableMetadata,
}

impl SweepTable {
    pub fn extrema(&self, model: ModelTag) -> Option<Extrema> {
        Extrema::over(
            self.rows
                .iter()
                .filter(|r| r.sample.model == model && !r.flagged)
                .map(|r| r.sample.power_dbm),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub max_dbm: f64,
    pub min_dbm: f64,
}

impl Extrema {
    fn over(values: impl Iterator<Item = f64>) -> Option<Self> {
        values.fold(None, |acc, v| {
            Some(match acc {
                None => Extrema {
                    max_dbm: v,
                    min_dbm: v,
                },
                Some(e) => Extrema {
                    max_dbm: e.max_dbm.max(v),
                    min_dbm: e.min_dbm.min(v),
                },
            })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub distance_m: f64,
    pub conventional: PowerSample,
    pub irs: PowerSample,
    /// `irs.power_dbm − conventional.power_dbm`.
    pub delta_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSummary {
    pub conventional: Extrema,
    pub irs: Extrema,
    /// First distance at which `delta_db` changes sign, linearly interpolated.
    pub crossover_m: Option<f64>,
    pub rows: Vec<ComparisonRow>,
    pub metadata: TableMetadata,
}

impl ComparisonSummary {
    /// Gap at the largest swept distance.
    pub fn edge_delta_db(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.delta_db)
    }
}

/// Conventional power at one point, averaged over fading when requested.
fn conventional_at(scenario: &Scenario, spec: &SweepSpec, d: f64, stream: u64) -> Result<f64> {
    let alpha = spec.fading.alpha;
    if spec.monte_carlo() {
        let mut sampler = FadingSampler::with_stream(spec.fading.seed, stream);
        estimate_conventional_power(&scenario.radio, d, alpha, spec.monte_carlo_n, &mut sampler)
            .map(|e| e.mean_w)
    } else {
        conventional_rx_power(&scenario.radio, d, spec.fading.deterministic_h(), alpha)
    }
}

fn conventional_sample(
    scenario: &Scenario,
    spec: &SweepSpec,
    d: f64,
    stream: u64,
) -> Result<PowerSample> {
    let p = conventional_at(scenario, spec, d, stream)?;
    Ok(PowerSample::new(ModelTag::Conventional, LinkDistance::Direct { d_m: d }, p))
}

fn irs_sample(scenario: &Scenario, panel: &IrsPanel, d1: f64, d2: f64) -> Result<PowerSample> {
    let p = irs_rx_power(&scenario.radio, panel, d1, d2)?;
    Ok(PowerSample::new(
        ModelTag::IrsAssisted,
        LinkDistance::TwoHop { d1_m: d1, d2_m: d2 },
        p,
    ))
}

fn prepare(scenario: &Scenario, spec: &SweepSpec) -> Result<()> {
    scenario.validate()?;
    spec.validate()
}

fn wrong_kind(expected: &str, spec: &SweepSpec) -> Error {
    Error::Sweep(format!("expected a {expected} sweep, got {}", spec.kind.name()))
}

/// Evaluates points `0..n` in parallel, keeping index order and reporting the
/// lowest-index failure.
fn evaluate<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let results: Vec<Result<T>> = (0..n).into_par_iter().map(f).collect();
    results.into_iter().collect()
}

/// Received power against distance for every model the scenario supports.
pub fn run_distance_sweep(scenario: &Scenario, spec: &SweepSpec) -> Result<SweepTable> {
    let SweepKind::Distance(axis) = &spec.kind else {
        return Err(wrong_kind("distance", spec));
    };
    prepare(scenario, spec)?;
    let irs = if scenario.has_irs() {
        Some(scenario.require_irs()?)
    } else {
        None
    };

    let per_point = evaluate(axis.n_points(), |i| {
        let s = axis.point(i);
        let coordinate = Coordinate::Distance { distance_m: s };
        let at = |e: Error| e.at(format!("distance_m={s}"));
        let mut rows = vec![SweepRow {
            coordinate,
            sample: conventional_sample(scenario, spec, s, i as u64).map_err(at)?,
            flagged: false,
        }];
        if let Some((panel, d1)) = &irs {
            rows.push(SweepRow {
                coordinate,
                sample: irs_sample(scenario, panel, *d1, s).map_err(at)?,
                flagged: false,
            });
        }
        Ok(rows)
    })?;

    Ok(SweepTable {
        rows: per_point.into_iter().flatten().collect(),
        metadata: TableMetadata::new(scenario, spec),
    })
}

/// IRS power against distance, one section per `(θ_t, θ_r)` pair.
pub fn run_angle_sweep(scenario: &Scenario, spec: &SweepSpec) -> Result<SweepTable> {
    let SweepKind::Angle { axis, pairs } = &spec.kind else {
        return Err(wrong_kind("angle", spec));
    };
    prepare(scenario, spec)?;
    let (panel, d1) = scenario.require_irs()?;
    let panels = pairs
        .iter()
        .map(|pair| {
            let p = panel.with_angles(pair.theta_t_rad, pair.theta_r_rad);
            p.validate().map(|_| p).map_err(|e| {
                e.at(format!(
                    "theta_t_deg={},theta_r_deg={}",
                    pair.theta_t_rad.to_degrees(),
                    pair.theta_r_rad.to_degrees()
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let per_axis = axis.n_points();
    let rows = evaluate(panels.len() * per_axis, |k| {
        let (pair, i) = (k / per_axis, k % per_axis);
        let panel = &panels[pair];
        let s = axis.point(i);
        let sample = irs_sample(scenario, panel, d1, s).map_err(|e| {
            e.at(format!(
                "theta_t_deg={},theta_r_deg={},distance_m={s}",
                panel.theta_t_rad.to_degrees(),
                panel.theta_r_rad.to_degrees()
            ))
        })?;
        Ok(SweepRow {
            coordinate: Coordinate::Angle {
                theta_t_rad: panel.theta_t_rad,
                theta_r_rad: panel.theta_r_rad,
                distance_m: s,
            },
            sample,
            flagged: false,
        })
    })?;

    Ok(SweepTable {
        rows,
        metadata: TableMetadata::new(scenario, spec),
    })
}

fn flagged_row(coordinate: Coordinate, model: ModelTag, link: LinkDistance) -> SweepRow {
    SweepRow {
        coordinate,
        sample: PowerSample::new(model, link, f64::INFINITY),
        flagged: true,
    }
}

/// Power at every node of a horizontal grid at the device height.
pub fn run_coverage_grid(scenario: &Scenario, spec: &SweepSpec) -> Result<SweepTable> {
    let SweepKind::CoverageGrid(grid) = &spec.kind else {
        return Err(wrong_kind("coverage", spec));
    };
    prepare(scenario, spec)?;
    let irs = if scenario.has_irs() {
        let (panel, d1) = scenario.require_irs()?;
        if d1 <= 0.0 {
            return Err(Error::Scenario("base station and IRS coincide".into()));
        }
        Some((panel, d1, scenario.geometry.irs.unwrap_or(scenario.geometry.base_station)))
    } else {
        None
    };
    let height = scenario.geometry.device.z;

    let per_node = evaluate(grid.n_nodes(), |k| {
        let (x, y) = grid.node(k);
        let device = Point3::new(x, y, height);
        let coordinate = Coordinate::Grid { x_m: x, y_m: y };
        let at = |e: Error| e.at(format!("x_m={x},y_m={y}"));

        let d = euclidean_distance(scenario.geometry.base_station, device);
        let mut rows = vec![if d > 0.0 {
            SweepRow {
                coordinate,
                sample: conventional_sample(scenario, spec, d, k as u64).map_err(at)?,
                flagged: false,
            }
        } else {
            flagged_row(coordinate, ModelTag::Conventional, LinkDistance::Direct { d_m: d })
        }];

        if let Some((panel, d1, irs_pos)) = &irs {
            let d2 = euclidean_distance(*irs_pos, device);
            rows.push(if d2 > 0.0 {
                SweepRow {
                    coordinate,
                    sample: irs_sample(scenario, panel, *d1, d2).map_err(at)?,
                    flagged: false,
                }
            } else {
                flagged_row(
                    coordinate,
                    ModelTag::IrsAssisted,
                    LinkDistance::TwoHop { d1_m: *d1, d2_m: d2 },
                )
            });
        }
        Ok(rows)
    })?;

    Ok(SweepTable {
        rows: per_node.into_iter().flatten().collect(),
        metadata: TableMetadata::new(scenario, spec),
    })
}

/// Conventional against IRS-assisted power over one distance axis.
pub fn compare_models(scenario: &Scenario, spec: &SweepSpec) -> Result<ComparisonSummary> {
    let SweepKind::Compare(axis) = &spec.kind else {
        return Err(wrong_kind("compare", spec));
    };
    prepare(scenario, spec)?;
    let (panel, d1) = scenario.require_irs()?;

    let rows = evaluate(axis.n_points(), |i| {
        let s = axis.point(i);
        let at = |e: Error| e.at(format!("distance_m={s}"));
        let conventional = conventional_sample(scenario, spec, s, i as u64).map_err(at)?;
        let irs = irs_sample(scenario, &panel, d1, s).map_err(at)?;
        Ok(ComparisonRow {
            distance_m: s,
            conventional,
            irs,
            delta_db: irs.power_dbm - conventional.power_dbm,
        })
    })?;

    let empty = || Error::Sweep("empty sweep".into());
    let conventional =
        Extrema::over(rows.iter().map(|r| r.conventional.power_dbm)).ok_or_else(empty)?;
    let irs = Extrema::over(rows.iter().map(|r| r.irs.power_dbm)).ok_or_else(empty)?;

    Ok(ComparisonSummary {
        conventional,
        irs,
        crossover_m: crossover(&rows),
        rows,
        metadata: TableMetadata::new(scenario, spec),
    })
}

fn crossover(rows: &[ComparisonRow]) -> Option<f64> {
    let first = rows.first()?;
    if first.delta_db == 0.0 {
        return Some(first.distance_m);
    }
    rows.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if b.delta_db == 0.0 {
            Some(b.distance_m)
        } else if a.delta_db.signum() != b.delta_db.signum() {
            let t = a.delta_db / (a.delta_db - b.delta_db);
            Some(a.distance_m + t * (b.distance_m - a.distance_m))
        } else {
            None
        }
    })
}
