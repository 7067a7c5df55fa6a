//! Dependency-free SVG line chart: outage probability on a log axis versus
//! the sweep variable, one polyline per (user, mode) series. A convenience
//! view of the CSV, not a result surface.

use crate::config::Mode;
use crate::sweep::Row;
use std::fmt::Write as _;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 540.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 180.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];
const FLOOR: f64 = 1e-12;

/// Renders the rows as a standalone SVG document. Infeasible or zero values
/// break the polyline rather than being drawn.
pub fn render(rows: &[Row], title: &str) -> String {
    let points: Vec<&Row> = rows.iter().filter(|r| r.feasible).collect();
    let xs: Vec<f64> = points.iter().map(|r| r.sweep_value).collect();
    let (x_min, x_max) = match (
        xs.iter().cloned().fold(f64::INFINITY, f64::min),
        xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    ) {
        (lo, hi) if lo.is_finite() && hi > lo => (lo, hi),
        (lo, _) if lo.is_finite() => (lo - 0.5, lo + 0.5),
        _ => (0.0, 1.0),
    };
    let mut y_lo: f64 = 0.0;
    for r in &points {
        if let Some(v) = r.op_value {
            if v > FLOOR {
                let l = v.log10();
                if y_lo == 0.0 || l < y_lo {
                    y_lo = l;
                }
            }
        }
    }
    let y_min_decade = if y_lo == 0.0 { -6.0 } else { y_lo.floor() };
    let y_max_decade = 0.0;

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let x_of = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w;
    let y_of = |v: f64| {
        let l = v.max(FLOOR).log10().clamp(y_min_decade, y_max_decade);
        MARGIN_T + (y_max_decade - l) / (y_max_decade - y_min_decade) * plot_h
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        MARGIN_L + plot_w / 2.0,
        escape(title)
    );

    // Axes and decade grid.
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let mut decade = y_min_decade as i64;
    while decade <= y_max_decade as i64 {
        let y = y_of(10f64.powi(decade as i32));
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_L}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#dddddd"/>"##,
            MARGIN_L + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">1e{decade}</text>"#,
            MARGIN_L - 6.0,
            y + 4.0
        );
        decade += 1;
    }
    let x_ticks = 6usize;
    for i in 0..=x_ticks {
        let x = x_min + (x_max - x_min) * i as f64 / x_ticks as f64;
        let px = x_of(x);
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.1}" y1="{}" x2="{px:.1}" y2="{}" stroke="#dddddd"/>"##,
            MARGIN_T,
            MARGIN_T + plot_h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{x:.3}</text>"#,
            MARGIN_T + plot_h + 18.0
        );
    }

    // Series: one per (user, mode), in first-appearance order.
    let mut series: Vec<(usize, Mode)> = Vec::new();
    for r in &points {
        if !series.contains(&(r.user_index, r.mode)) {
            series.push((r.user_index, r.mode));
        }
    }
    for (si, &(user, mode)) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        // Split at gaps (infeasible or non-positive values).
        let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for r in rows {
            if r.user_index != user || r.mode != mode {
                continue;
            }
            match r.op_value {
                Some(v) if r.feasible && v > 0.0 => segments
                    .last_mut()
                    .expect("segments is never empty")
                    .push((x_of(r.sweep_value), y_of(v))),
                _ => {
                    if !segments.last().expect("non-empty").is_empty() {
                        segments.push(Vec::new());
                    }
                }
            }
        }
        for segment in segments.iter().filter(|s| s.len() > 1) {
            let path: Vec<String> = segment
                .iter()
                .map(|(x, y)| format!("{x:.2},{y:.2}"))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{}"/>"#,
                path.join(" ")
            );
        }
        for segment in &segments {
            for (x, y) in segment {
                let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{color}"/>"#);
            }
        }
        // Legend entry.
        let ly = MARGIN_T + 16.0 + si as f64 * 18.0;
        let lx = MARGIN_L + plot_w + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 22.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.1}" font-family="sans-serif" font-size="12">user {user}, {}</text>"#,
            lx + 28.0,
            ly + 4.0,
            mode.label()
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes the chart to a file.
pub fn write_svg(path: &std::path::Path, rows: &[Row], title: &str) -> std::io::Result<()> {
    std::fs::write(path, render(rows, title))
}
