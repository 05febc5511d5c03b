//! Minimal self-contained SVG line plots; no plotting dependency.

use std::fs;
use std::path::Path;

use crate::Result;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn around(series: &[(f64, f64)]) -> Self {
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for &(x, y) in series {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        if x_min >= x_max {
            x_max = x_min + 1.0;
        }
        if y_min >= y_max {
            y_max = y_min + 1.0;
        }
        let pad = 0.05 * (y_max - y_min);
        Self { x_min, x_max, y_min: y_min - pad, y_max: y_max + pad }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn polyline(frame: &Frame, series: &[(f64, f64)], color: &str) -> String {
    let points: Vec<String> = series
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
        .collect();
    format!(
        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
        points.join(" ")
    )
}

fn chrome(frame: &Frame, title: &str, xlabel: &str, ylabel: &str) -> String {
    format!(
        concat!(
            r#"<rect width="100%" height="100%" fill="white"/>"#,
            r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
            r#"<line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
            r#"<text x="{cx}" y="20" text-anchor="middle" font-size="14" font-family="sans-serif">{title}</text>"#,
            r#"<text x="{cx}" y="{lbl}" text-anchor="middle" font-size="12" font-family="sans-serif">{xlabel}</text>"#,
            r#"<text x="14" y="{cy}" text-anchor="middle" font-size="12" font-family="sans-serif" transform="rotate(-90 14 {cy})">{ylabel}</text>"#,
            r#"<text x="{m}" y="{lbl}" text-anchor="middle" font-size="10" font-family="sans-serif">{x0:.3}</text>"#,
            r#"<text x="{r}" y="{lbl}" text-anchor="middle" font-size="10" font-family="sans-serif">{x1:.3}</text>"#,
            r#"<text x="{m2}" y="{b}" text-anchor="end" font-size="10" font-family="sans-serif">{y0:.4}</text>"#,
            r#"<text x="{m2}" y="{t}" text-anchor="end" font-size="10" font-family="sans-serif">{y1:.4}</text>"#,
        ),
        m = MARGIN,
        m2 = MARGIN - 4.0,
        b = HEIGHT - MARGIN,
        t = MARGIN,
        r = WIDTH - MARGIN,
        cx = WIDTH / 2.0,
        cy = HEIGHT / 2.0,
        lbl = HEIGHT - 16.0,
        title = title,
        xlabel = xlabel,
        ylabel = ylabel,
        x0 = frame.x_min,
        x1 = frame.x_max,
        y0 = frame.y_min,
        y1 = frame.y_max,
    )
}

/// One curve against its axes.
pub fn line_plot(
    path: &Path,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[(f64, f64)],
) -> Result<()> {
    let frame = Frame::around(series);
    let svg = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">{}{}</svg>"#,
        chrome(&frame, title, xlabel, ylabel),
        polyline(&frame, series, "#1f77b4"),
    );
    fs::write(path, svg)?;
    Ok(())
}

/// Profile curve with an optional shaded interval (the positive set of the
/// weight under the eigenfunction).
pub fn profile_plot(
    path: &Path,
    title: &str,
    series: &[(f64, f64)],
    shade: Option<(f64, f64)>,
) -> Result<()> {
    let frame = Frame::around(series);
    let mut body = chrome(&frame, title, "x", "value");
    if let Some((l, r)) = shade {
        body.push_str(&format!(
            r##"<rect x="{:.2}" y="{}" width="{:.2}" height="{}" fill="#ffd37f" fill-opacity="0.45"/>"##,
            frame.px(l),
            MARGIN,
            (frame.px(r) - frame.px(l)).max(0.0),
            HEIGHT - 2.0 * MARGIN,
        ));
    }
    body.push_str(&polyline(&frame, series, "#1f77b4"));
    let svg = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">{body}</svg>"#
    );
    fs::write(path, svg)?;
    Ok(())
}
