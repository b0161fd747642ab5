//! Log-log scatter plots with the fitted line, as static SVG.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fitting::{linear_regression, LinearFit, LsqFitResult};
use crate::format::{exact, sig4};

pub const SIDECAR_HEADER: &str = "ln_k,ln_N";

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// The plotted points, one `ln_k,ln_N` pair per line in exact notation.
pub fn sidecar(points: &[(f64, f64)]) -> String {
    let mut out = String::from(SIDECAR_HEADER);
    out.push('\n');
    for &(x, y) in points {
        let _ = writeln!(out, "{},{}", exact(x), exact(y));
    }
    out
}

pub fn parse_sidecar(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(SIDECAR_HEADER) {
        return Err(Error::Parse(format!(
            "sidecar must start with '{SIDECAR_HEADER}'"
        )));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let bad = || Error::Parse(format!("bad sidecar line '{l}'"));
            let (x, y) = l.split_once(',').ok_or_else(bad)?;
            Ok((
                x.trim().parse().map_err(|_| bad())?,
                y.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

/// Refits a straight line to sidecar points.
pub fn fit_sidecar(text: &str) -> Result<LinearFit> {
    linear_regression(&parse_sidecar(text)?)
}

/// The annotation shown on the plot.
pub fn annotation(fit: &LsqFitResult) -> String {
    format!(
        "A = {}, slope = {}, R\u{b2} = {}",
        sig4(fit.model.amplitude),
        sig4(fit.slope()),
        sig4(fit.r_squared)
    )
}

/// SVG with the points, the fitted line across their x range, axis ticks at
/// powers of ten, and the annotation.
pub fn render_svg(title: &str, points: &[(f64, f64)], fit: &LsqFitResult) -> String {
    let ln_a = fit.model.amplitude.ln();
    let line_y = |x: f64| ln_a + fit.slope() * x;
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y).min(line_y(x));
        y1 = y1.max(y).max(line_y(x));
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    // Pad to whole decades so ticks land on the frame.
    let ln10 = std::f64::consts::LN_10;
    let (dx0, dx1) = (
        (x0 / ln10).floor(),
        (x1 / ln10).ceil().max((x0 / ln10).floor() + 1.0),
    );
    let (dy0, dy1) = (
        (y0 / ln10).floor(),
        (y1 / ln10).ceil().max((y0 / ln10).floor() + 1.0),
    );
    let px = |x: f64| MARGIN + (x / ln10 - dx0) / (dx1 - dx0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y / ln10 - dy0) / (dy1 - dy0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    for d in dx0 as i32..=dx1 as i32 {
        let x = px(d as f64 * ln10);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
            bottom + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">1e{d}</text>"#,
            bottom + 18.0
        );
    }
    for d in dy0 as i32..=dy1 as i32 {
        let y = py(d as f64 * ln10);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/>"#,
            left - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end">1e{d}</text>"#,
            left - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">mentions k</text>"#,
        WIDTH / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">papers N(k)</text>"#,
        HEIGHT / 2.0
    );
    s.push_str("<g fill=\"steelblue\" fill-opacity=\"0.7\">\n");
    for &(x, y) in points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5"/>"#,
            px(x),
            py(y)
        );
    }
    s.push_str("</g>\n");
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-width="1.5"/>"#,
        px(x0),
        py(line_y(x0)),
        px(x1),
        py(line_y(x1))
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        right - 8.0,
        top + 18.0,
        escape(&annotation(fit))
    );
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
