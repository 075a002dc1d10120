//! Minimal self-contained SVG line charts.
//!
//! One chart shows the MSE of the pooled and average estimators over the
//! processor grid, log-scaled on both axes. Every marker carries `data-r`
//! and `data-mse` attributes holding exactly the strings written to the
//! CSV, so chart/CSV agreement is testable by parsing the markup.

use std::fmt::Write as _;

use crate::csvio::fmt_real;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const SERIES_COLORS: [&str; 2] = ["#1f6fb2", "#d1495b"];

pub struct Series<'a> {
    pub label: &'a str,
    /// (R, MSE) pairs in ascending R order.
    pub points: &'a [(usize, f64)],
}

/// Render a two-series MSE-vs-R chart. Returns self-contained SVG markup.
pub fn mse_chart(title: &str, series: &[Series]) -> String {
    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| (p.0 as f64).ln()))
        .collect();
    let positive_ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .filter(|&y| y > 0.0)
        .collect();
    // MSE is nonnegative; zeros only occur in degenerate runs. Clamp them
    // to the smallest positive point so the log axis stays usable.
    let y_floor = positive_ys.iter().copied().fold(f64::INFINITY, f64::min);
    let y_floor = if y_floor.is_finite() { y_floor } else { 1.0 };
    let ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1.max(y_floor).ln()))
        .collect();

    let (x_lo, x_hi) = padded_range(&xs);
    let (y_lo, y_hi) = padded_range(&ys);
    let x_of = |r: usize| {
        MARGIN_LEFT
            + ((r as f64).ln() - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    };
    let y_of = |mse: f64| {
        let t = (mse.max(y_floor).ln() - y_lo) / (y_hi - y_lo);
        HEIGHT - MARGIN_BOTTOM - t * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        HEIGHT - MARGIN_BOTTOM,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{}" stroke="black"/>"#,
        HEIGHT - MARGIN_BOTTOM
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">processors R (log scale)</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">MSE (log scale)</text>"#,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0
    );

    // x ticks at the observed R values
    if let Some(first) = series.first() {
        for &(r, _) in first.points {
            let x = x_of(r);
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
                HEIGHT - MARGIN_BOTTOM,
                HEIGHT - MARGIN_BOTTOM + 5.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{x:.2}" y="{}" text-anchor="middle">{r}</text>"#,
                HEIGHT - MARGIN_BOTTOM + 19.0
            );
        }
    }
    // y ticks at powers of ten covering the range
    let decade_lo = (y_lo / std::f64::consts::LN_10).floor() as i32;
    let decade_hi = (y_hi / std::f64::consts::LN_10).ceil() as i32;
    for d in decade_lo..=decade_hi {
        let value = 10f64.powi(d);
        let y = y_of(value);
        if !(MARGIN_TOP..=HEIGHT - MARGIN_BOTTOM).contains(&y) {
            continue;
        }
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" text-anchor="end">1e{d}</text>"#,
            MARGIN_LEFT - 9.0,
            y + 4.0
        );
    }

    // series
    for (idx, s) in series.iter().enumerate() {
        let color = SERIES_COLORS[idx % SERIES_COLORS.len()];
        let polyline: Vec<String> = s
            .points
            .iter()
            .map(|&(r, mse)| format!("{:.2},{:.2}", x_of(r), y_of(mse)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{}"/>"#,
            polyline.join(" ")
        );
        for &(r, mse) in s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.2" fill="{color}" data-series="{}" data-r="{r}" data-mse="{}"/>"#,
                x_of(r),
                y_of(mse),
                escape(s.label),
                fmt_real(mse)
            );
        }
        // legend
        let ly = MARGIN_TOP + 8.0 + idx as f64 * 18.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{:.2}" width="12" height="12" fill="{color}"/>"#,
            MARGIN_LEFT + 12.0,
            ly - 10.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{ly:.2}">{}</text>"#,
            MARGIN_LEFT + 30.0,
            escape(s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn padded_range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    let span = (hi - lo).max(1e-9);
    (lo - 0.05 * span, hi + 0.05 * span)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
