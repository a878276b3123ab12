//! The `irslink` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain or validation error,
//! 3 I/O error.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use irslink_core::{
    compare_models, conventional_rx_power, expected_conventional_power, irs_rx_power,
    run_angle_sweep, run_coverage_grid, run_distance_sweep, watts_to_dbm, ComparisonSummary,
    FadingMode, ModelTag, SweepTable,
};
use serde::Serialize;
use thiserror::Error;

use crate::csv::{comparison_csv, table_csv};
use crate::format::sig12;
use crate::output::write_files;
use crate::plot::{comparison_series, heatmap, line_chart, table_series};
use crate::scenario::{parse_scenario, FadingModeName, ScenarioError, ScenarioFile, SweepKindName};

#[derive(Debug, Parser)]
#[command(name = "irslink", version, about = "Conventional and IRS-assisted downlink received power")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand. Values given here beat the scenario file.
#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// Scenario file (TOML). The shipped default scenario is used when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub scenario: Option<PathBuf>,

    /// Directory for CSV, metadata and plot files.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,

    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,

    /// Also write an SVG plot per table.
    #[arg(long, global = true)]
    pub plot: bool,

    /// Monte Carlo draws per point under Rayleigh fading.
    #[arg(long = "mc-samples", global = true, value_name = "N")]
    pub mc_samples: Option<u64>,

    #[arg(long, global = true, value_enum)]
    pub fading: Option<FadingModeName>,

    /// Path-loss exponent of the conventional link.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,

    #[arg(long = "tx-power-w", global = true)]
    pub tx_power_w: Option<f64>,

    #[arg(long = "carrier-hz", global = true)]
    pub carrier_hz: Option<f64>,

    #[arg(long = "theta-t-deg", global = true)]
    pub theta_t_deg: Option<f64>,

    #[arg(long = "theta-r-deg", global = true)]
    pub theta_r_deg: Option<f64>,
}

#[derive(Debug, Default, Args)]
pub struct AxisArgs {
    #[arg(long = "start", value_name = "M")]
    pub start_m: Option<f64>,
    #[arg(long = "stop", value_name = "M")]
    pub stop_m: Option<f64>,
    #[arg(long = "step", value_name = "M")]
    pub step_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LineSweep {
    Distance,
    Angle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conventional small-cell received power at one distance.
    Direct {
        /// Base station to device distance; defaults to the scenario geometry.
        #[arg(long, value_name = "M")]
        distance: Option<f64>,
    },
    /// IRS-assisted received power at one device position.
    Irs {
        /// Base station to IRS distance; defaults to the scenario geometry.
        #[arg(long, value_name = "M")]
        d1: Option<f64>,
        /// IRS to device distance; defaults to the scenario geometry.
        #[arg(long, value_name = "M")]
        d2: Option<f64>,
    },
    /// Received power against distance, per model or per angle pair.
    Sweep {
        #[arg(long, value_enum, default_value = "distance")]
        kind: LineSweep,
        #[command(flatten)]
        axis: AxisArgs,
    },
    /// Received power over a horizontal grid of device positions.
    Coverage {
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        ny: Option<usize>,
    },
    /// Conventional against IRS-assisted power over one distance axis.
    Compare {
        #[command(flatten)]
        axis: AxisArgs,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Scenario(#[from] ScenarioError),

    #[error(transparent)]
    Domain(#[from] irslink_core::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Scenario(ScenarioError::Read { .. }) => 3,
            CliError::Scenario(_) | CliError::Domain(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

fn stdout_error(source: io::Error) -> CliError {
    CliError::Io {
        context: "writing to standard output".into(),
        source,
    }
}

/// Loads the scenario and applies command-line overrides on top of it.
pub fn effective_scenario(cli: &Cli) -> Result<ScenarioFile, CliError> {
    let mut file = match &cli.global.scenario {
        Some(path) => parse_scenario(path)?,
        None => ScenarioFile::default_scenario(),
    };
    let g = &cli.global;
    if let Some(seed) = g.seed {
        file.fading.seed = seed;
    }
    if let Some(n) = g.mc_samples {
        file.sweep.monte_carlo_n = n;
    }
    if let Some(mode) = g.fading {
        file.fading.mode = mode;
    }
    if let Some(alpha) = g.alpha {
        file.fading.alpha = alpha;
    }
    if let Some(p) = g.tx_power_w {
        file.radio.transmit_power_w = p;
    }
    if let Some(f) = g.carrier_hz {
        file.radio.carrier_frequency_hz = f;
    }
    if g.theta_t_deg.is_some() || g.theta_r_deg.is_some() {
        let panel = file
            .panel
            .as_mut()
            .ok_or_else(|| CliError::Usage("angle flags need a scenario with an IRS panel".into()))?;
        if let Some(t) = g.theta_t_deg {
            panel.theta_t_deg = t;
        }
        if let Some(r) = g.theta_r_deg {
            panel.theta_r_deg = r;
        }
    }
    let axis = match &cli.command {
        Command::Sweep { axis, .. } | Command::Compare { axis } => Some(axis),
        _ => None,
    };
    if let Some(axis) = axis {
        if let Some(v) = axis.start_m {
            file.sweep.start_m = v;
        }
        if let Some(v) = axis.stop_m {
            file.sweep.stop_m = v;
        }
        if let Some(v) = axis.step_m {
            file.sweep.step_m = v;
        }
    }
    if let Command::Coverage { nx, ny } = &cli.command {
        if let Some(nx) = nx {
            file.coverage.nx = *nx;
        }
        if let Some(ny) = ny {
            file.coverage.ny = *ny;
        }
    }
    file.validate()?;
    Ok(file)
}

pub fn run(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    let file = effective_scenario(cli)?;
    match &cli.command {
        Command::Direct { distance } => cmd_direct(&file, *distance, out),
        Command::Irs { d1, d2 } => cmd_irs(&file, *d1, *d2, out),
        Command::Sweep { kind, .. } => {
            let kind = match kind {
                LineSweep::Distance => SweepKindName::Distance,
                LineSweep::Angle => SweepKindName::Angle,
            };
            cmd_table(&file, kind, &cli.global, out)
        }
        Command::Coverage { .. } => cmd_table(&file, SweepKindName::Coverage, &cli.global, out),
        Command::Compare { .. } => cmd_compare(&file, &cli.global, out),
    }
}

fn cmd_direct(file: &ScenarioFile, distance: Option<f64>, out: &mut impl Write) -> Result<(), CliError> {
    let scenario = file.scenario()?;
    let fading = file.fading()?;
    let d = distance.unwrap_or_else(|| scenario.geometry.direct_distance());
    let n = file.sweep.monte_carlo_n;

    let mut lines = vec![
        ("model", ModelTag::Conventional.as_str().to_owned()),
        ("distance_m", sig12(d)),
        ("alpha", sig12(fading.alpha)),
    ];
    let power_w = if fading.mode == FadingMode::RayleighUnitMean && n > 0 {
        let est = expected_conventional_power(&scenario.radio, d, fading.alpha, n, fading.seed)?;
        lines.push(("monte_carlo_n", n.to_string()));
        lines.push(("seed", fading.seed.to_string()));
        lines.push(("std_error_w", sig12(est.std_error_w)));
        est.mean_w
    } else {
        let h = fading.deterministic_h();
        lines.push(("h", sig12(h)));
        conventional_rx_power(&scenario.radio, d, h, fading.alpha)?
    };
    lines.push(("power_w", sig12(power_w)));
    lines.push(("power_dbm", sig12(watts_to_dbm(power_w))));
    print_pairs(out, &lines)
}

fn cmd_irs(
    file: &ScenarioFile,
    d1: Option<f64>,
    d2: Option<f64>,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let scenario = file.scenario()?;
    let panel = scenario
        .panel
        .ok_or_else(|| CliError::Usage("the scenario has no IRS panel".into()))?;
    let geometry = &scenario.geometry;
    let d1 = d1.or(geometry.bs_irs_distance()).unwrap_or_default();
    let d2 = d2.or(geometry.irs_device_distance()).unwrap_or_default();
    let power_w = irs_rx_power(&scenario.radio, &panel, d1, d2)?;
    let lines = [
        ("model", ModelTag::IrsAssisted.as_str().to_owned()),
        ("d1_m", sig12(d1)),
        ("d2_m", sig12(d2)),
        ("theta_t_deg", sig12(panel.theta_t_rad.to_degrees())),
        ("theta_r_deg", sig12(panel.theta_r_rad.to_degrees())),
        ("power_w", sig12(power_w)),
        ("power_dbm", sig12(watts_to_dbm(power_w))),
    ];
    print_pairs(out, &lines)
}

fn print_pairs(out: &mut impl Write, lines: &[(&str, String)]) -> Result<(), CliError> {
    for (k, v) in lines {
        writeln!(out, "{k} = {v}").map_err(stdout_error)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool_version: &'a str,
    kind: &'a str,
    seed: u64,
    rows: usize,
    scenario: &'a ScenarioFile,
}

fn metadata(file: &ScenarioFile, kind: &str, seed: u64, rows: usize, version: &str) -> String {
    toml::to_string(&Metadata {
        tool_version: version,
        kind,
        seed,
        rows,
        scenario: file,
    })
    .expect("metadata serializes")
}

fn stem(kind: SweepKindName) -> &'static str {
    match kind {
        SweepKindName::Distance => "distance_sweep",
        SweepKindName::Angle => "angle_sweep",
        SweepKindName::Coverage => "coverage",
        SweepKindName::Compare => "compare",
    }
}

fn emit(dir: &Path, files: Vec<(String, String)>) -> Result<Vec<PathBuf>, CliError> {
    write_files(dir, &files).map_err(|source| CliError::Io {
        context: format!("writing into {}", dir.display()),
        source,
    })
}

/// Builds the table for `kind` and its CSV, metadata and optional plot files.
pub fn render_table(
    file: &ScenarioFile,
    kind: SweepKindName,
    plot: bool,
) -> Result<(SweepTable, Vec<(String, String)>), CliError> {
    let scenario = file.scenario()?;
    let spec = file.sweep_spec(kind)?;
    let table = match kind {
        SweepKindName::Distance => run_distance_sweep(&scenario, &spec)?,
        SweepKindName::Angle => run_angle_sweep(&scenario, &spec)?,
        SweepKindName::Coverage => run_coverage_grid(&scenario, &spec)?,
        SweepKindName::Compare => {
            return Err(CliError::Usage("compare produces a summary, not a table".into()))
        }
    };
    let name = stem(kind);
    let meta = &table.metadata;
    let mut files = vec![
        (format!("{name}.csv"), table_csv(&table)),
        (
            format!("{name}.meta.toml"),
            metadata(file, meta.spec.kind.name(), meta.seed, table.rows.len(), meta.tool_version),
        ),
    ];
    if plot {
        let svg = match kind {
            SweepKindName::Coverage => heatmap("Downlink received power over the coverage grid", &table),
            SweepKindName::Angle => line_chart(
                "IRS received power by transmit/receive angle",
                "IRS to device distance (m)",
                &table_series(&table),
            ),
            _ => line_chart(
                "Received power against distance",
                "Link distance (m)",
                &table_series(&table),
            ),
        };
        files.push((format!("{name}.svg"), svg));
    }
    Ok((table, files))
}

fn cmd_table(
    file: &ScenarioFile,
    kind: SweepKindName,
    global: &GlobalArgs,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let (table, files) = render_table(file, kind, global.plot)?;
    let written = emit(&global.out, files)?;
    writeln!(
        out,
        "{} sweep: {} rows -> {}",
        table.metadata.spec.kind.name(),
        table.rows.len(),
        written[0].display()
    )
    .map_err(stdout_error)?;
    let flagged = table.rows.iter().filter(|r| r.flagged).count();
    if flagged > 0 {
        writeln!(out, "flagged_rows = {flagged}").map_err(stdout_error)?;
    }
    for model in [ModelTag::Conventional, ModelTag::IrsAssisted] {
        if let Some(e) = table.extrema(model) {
            writeln!(
                out,
                "{}: max_dbm = {} min_dbm = {}",
                model.as_str(),
                sig12(e.max_dbm),
                sig12(e.min_dbm)
            )
            .map_err(stdout_error)?;
        }
    }
    Ok(())
}

/// Builds the comparison summary and its CSV, metadata and optional plot files.
pub fn render_comparison(
    file: &ScenarioFile,
    plot: bool,
) -> Result<(ComparisonSummary, Vec<(String, String)>), CliError> {
    let scenario = file.scenario()?;
    let spec = file.sweep_spec(SweepKindName::Compare)?;
    let summary = compare_models(&scenario, &spec)?;
    let meta = &summary.metadata;
    let mut files = vec![
        ("compare.csv".to_owned(), comparison_csv(&summary)),
        (
            "compare.meta.toml".to_owned(),
            metadata(file, "compare", meta.seed, summary.rows.len(), meta.tool_version),
        ),
    ];
    if plot {
        files.push((
            "compare.svg".to_owned(),
            line_chart(
                "Conventional against IRS-assisted received power",
                "Device distance (m)",
                &comparison_series(&summary),
            ),
        ));
    }
    Ok((summary, files))
}

fn cmd_compare(file: &ScenarioFile, global: &GlobalArgs, out: &mut impl Write) -> Result<(), CliError> {
    let (summary, files) = render_comparison(file, global.plot)?;
    let written = emit(&global.out, files)?;
    let crossover = summary.crossover_m.map_or_else(|| "none".to_owned(), sig12);
    let text = format!(
        "compare: {} rows -> {}\n\
         conventional: max_dbm = {} min_dbm = {}\n\
         irs: max_dbm = {} min_dbm = {}\n\
         edge_delta_db = {}\n\
         crossover_m = {crossover}\n",
        summary.rows.len(),
        written[0].display(),
        sig12(summary.conventional.max_dbm),
        sig12(summary.conventional.min_dbm),
        sig12(summary.irs.max_dbm),
        sig12(summary.irs.min_dbm),
        sig12(summary.edge_delta_db()),
    );
    out.write_all(text.as_bytes()).map_err(stdout_error)
}
