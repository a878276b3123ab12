//! Minimal SVG renderers for sweep tables.
//!
//! Plots are drawn from the same rows that go into the CSV files; nothing here
//! evaluates a model.

use std::collections::BTreeMap;
use std::fmt::Write;

use irslink_core::{ComparisonSummary, Coordinate, SweepTable};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Line chart of received power in dBm against distance.
pub fn line_chart(title: &str, x_label: &str, series: &[Series]) -> String {
    let finite = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in finite {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-9 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    let (y0, y1) = ((y0 / 5.0).floor() * 5.0 - 5.0, (y1 / 5.0).ceil() * 5.0 + 5.0);

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| MARGIN_T + (y1 - y) / (y1 - y0) * plot_h;

    let mut svg = header(title);
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444"/>"##
    );
    for k in 0..=5 {
        let fx = x0 + (x1 - x0) * k as f64 / 5.0;
        let fy = y0 + (y1 - y0) * k as f64 / 5.0;
        let _ = writeln!(
            svg,
            r##"<line x1="{0:.2}" y1="{1}" x2="{0:.2}" y2="{2}" stroke="#ddd"/><text x="{0:.2}" y="{3}" text-anchor="middle">{4:.0}</text>"##,
            sx(fx),
            MARGIN_T,
            MARGIN_T + plot_h,
            MARGIN_T + plot_h + 18.0,
            fx
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{1}" y1="{0:.2}" x2="{2}" y2="{0:.2}" stroke="#ddd"/><text x="{3}" y="{0:.2}" text-anchor="end" dominant-baseline="middle">{4:.0}</text>"##,
            sy(fy),
            MARGIN_L,
            MARGIN_L + plot_w,
            MARGIN_L - 8.0,
            fy
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">Received power (dBm)</text>"#,
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = MARGIN_T + 20.0 * i as f64 + 10.0;
        let lx = WIDTH - MARGIN_R + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/><text x="{}" y="{ly}" dominant-baseline="middle">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            escape(&s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// One panel per model, each cell coloured by received power.
pub fn heatmap(title: &str, table: &SweepTable) -> String {
    let mut per_model: BTreeMap<&'static str, Vec<(f64, f64, f64)>> = BTreeMap::new();
    for row in &table.rows {
        if let Coordinate::Grid { x_m, y_m } = row.coordinate {
            let v = if row.flagged { f64::NAN } else { row.sample.power_dbm };
            per_model
                .entry(row.sample.model.as_str())
                .or_default()
                .push((x_m, y_m, v));
        }
    }
    let values = per_model.values().flatten().map(|p| p.2).filter(|v| v.is_finite());
    let (lo, hi) = values.fold((f64::MAX, f64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };

    let panel = 320.0;
    let width = 40.0 + per_model.len() as f64 * (panel + 40.0);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{}" font-family="sans-serif" font-size="12">"#,
        panel + 110.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    for (p, (model, cells)) in per_model.iter().enumerate() {
        let ox = 40.0 + p as f64 * (panel + 40.0);
        let oy = 50.0;
        let xs = distinct(cells.iter().map(|c| c.0));
        let ys = distinct(cells.iter().map(|c| c.1));
        let (cw, ch) = (panel / xs.len() as f64, panel / ys.len() as f64);
        for &(x, y, v) in cells {
            let ix = xs.iter().position(|&a| a == x).unwrap_or(0);
            let iy = ys.iter().position(|&a| a == y).unwrap_or(0);
            let fill = if v.is_finite() {
                colour_ramp((v - lo) / span)
            } else {
                "#000000".to_owned()
            };
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                ox + ix as f64 * cw,
                oy + (ys.len() - 1 - iy) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{model}</text>"#,
            ox + panel / 2.0,
            oy + panel + 20.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="40" y="{:.1}">colour scale: {:.1} dBm (dark) to {:.1} dBm (bright)</text>"#,
        panel + 95.0,
        lo,
        hi
    );
    svg.push_str("</svg>\n");
    svg
}

fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

// Piecewise-linear blue→teal→yellow ramp over t ∈ [0, 1].
fn colour_ramp(t: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 3] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.5, [33.0, 145.0, 140.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let t = t.clamp(0.0, 1.0);
    let (a, b) = if t <= 0.5 { (STOPS[0], STOPS[1]) } else { (STOPS[1], STOPS[2]) };
    let u = (t - a.0) / (b.0 - a.0);
    let c: Vec<u8> = (0..3)
        .map(|i| (a.1[i] + (b.1[i] - a.1[i]) * u).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn header(title: &str) -> String {
    format!(
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#,
            "\n",
            r#"<rect width="100%" height="100%" fill="white"/>"#,
            "\n",
            r#"<text x="{cx}" y="24" text-anchor="middle" font-size="15">{t}</text>"#,
            "\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        cx = WIDTH / 2.0,
        t = escape(title)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Series for a distance or angle table, one per model or angle pair.
pub fn table_series(table: &SweepTable) -> Vec<Series> {
    let mut order: Vec<String> = Vec::new();
    let mut by_name: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for row in &table.rows {
        let (name, x) = match row.coordinate {
            Coordinate::Distance { distance_m } => (row.sample.model.as_str().to_owned(), distance_m),
            Coordinate::Angle {
                theta_t_rad,
                theta_r_rad,
                distance_m,
            } => (
                format!(
                    "θt={:.0}°, θr={:.0}°",
                    theta_t_rad.to_degrees(),
                    theta_r_rad.to_degrees()
                ),
                distance_m,
            ),
            Coordinate::Grid { .. } => continue,
        };
        if !by_name.contains_key(&name) {
            order.push(name.clone());
        }
        by_name.entry(name).or_default().push((x, row.sample.power_dbm));
    }
    order
        .into_iter()
        .map(|name| Series {
            points: by_name.remove(&name).unwrap_or_default(),
            name,
        })
        .collect()
}

pub fn comparison_series(summary: &ComparisonSummary) -> Vec<Series> {
    vec![
        Series {
            name: "conventional".into(),
            points: summary
                .rows
                .iter()
                .map(|r| (r.distance_m, r.conventional.power_dbm))
                .collect(),
        },
        Series {
            name: "irs".into(),
            points: summary.rows.iter().map(|r| (r.distance_m, r.irs.power_dbm)).collect(),
        },
    ]
}
