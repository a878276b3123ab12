//! CSV emission.
//!
//! Column order per table kind is fixed:
//!
//! | kind     | columns                                                          |
//! |----------|------------------------------------------------------------------|
//! | distance | `distance_m,model,power_w,power_dbm`                              |
//! | angle    | `theta_t_deg,theta_r_deg,distance_m,model,power_w,power_dbm`     |
//! | coverage | `x_m,y_m,model,power_w,power_dbm,flagged`                         |
//! | compare  | `distance_m,conventional_w,conventional_dbm,irs_w,irs_dbm,delta_db` |
//!
//! Numbers carry 12 significant digits and lines end in `\n`.

use std::fmt::Write;

use irslink_core::{ComparisonSummary, Coordinate, SweepKind, SweepTable};

use crate::format::sig12;

pub const DISTANCE_HEADER: &str = "distance_m,model,power_w,power_dbm";
pub const ANGLE_HEADER: &str = "theta_t_deg,theta_r_deg,distance_m,model,power_w,power_dbm";
pub const COVERAGE_HEADER: &str = "x_m,y_m,model,power_w,power_dbm,flagged";
pub const COMPARE_HEADER: &str =
    "distance_m,conventional_w,conventional_dbm,irs_w,irs_dbm,delta_db";

pub fn header_for(kind: &SweepKind) -> &'static str {
    match kind {
        SweepKind::Distance(_) => DISTANCE_HEADER,
        SweepKind::Angle { .. } => ANGLE_HEADER,
        SweepKind::CoverageGrid(_) => COVERAGE_HEADER,
        SweepKind::Compare(_) => COMPARE_HEADER,
    }
}

/// Renders a distance, angle or coverage table.
pub fn table_csv(table: &SweepTable) -> String {
    let mut out = String::new();
    out.push_str(header_for(&table.metadata.spec.kind));
    out.push('\n');
    for row in &table.rows {
        let s = &row.sample;
        let tail = format!(
            "{},{},{}",
            s.model.as_str(),
            sig12(s.power_w),
            sig12(s.power_dbm)
        );
        match row.coordinate {
            Coordinate::Distance { distance_m } => {
                writeln!(out, "{},{tail}", sig12(distance_m))
            }
            Coordinate::Angle {
                theta_t_rad,
                theta_r_rad,
                distance_m,
            } => writeln!(
                out,
                "{},{},{},{tail}",
                sig12(theta_t_rad.to_degrees()),
                sig12(theta_r_rad.to_degrees()),
                sig12(distance_m)
            ),
            Coordinate::Grid { x_m, y_m } => writeln!(
                out,
                "{},{},{tail},{}",
                sig12(x_m),
                sig12(y_m),
                u8::from(row.flagged)
            ),
        }
        .expect("writing to a String");
    }
    out
}

pub fn comparison_csv(summary: &ComparisonSummary) -> String {
    let mut out = String::new();
    out.push_str(COMPARE_HEADER);
    out.push('\n');
    for row in &summary.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            sig12(row.distance_m),
            sig12(row.conventional.power_w),
            sig12(row.conventional.power_dbm),
            sig12(row.irs.power_w),
            sig12(row.irs.power_dbm),
            sig12(row.delta_db)
        )
        .expect("writing to a String");
    }
    out
}
