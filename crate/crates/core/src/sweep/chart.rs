//! Standalone SVG line chart of one metric against k.

use std::fmt::Write as _;
use std::path::Path;

use super::{select_best, Criterion, SweepResult};
use crate::error::{Error, Result};

pub const CHART_WIDTH: f64 = 800.0;
pub const CHART_HEIGHT: f64 = 500.0;

const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;
const Y_TICKS: usize = 5;
const MAX_X_TICKS: usize = 10;

struct Frame {
    k_lo: f64,
    k_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn x(&self, k: f64) -> f64 {
        let w = CHART_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        MARGIN_LEFT + (k - self.k_lo) / (self.k_hi - self.k_lo) * w
    }

    fn y(&self, v: f64) -> f64 {
        let h = CHART_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        MARGIN_TOP + (self.y_hi - v) / (self.y_hi - self.y_lo) * h
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

/// Smallest of 1, 2, 5 times a power of ten giving at most `MAX_X_TICKS` ticks.
fn k_tick_step(span: usize) -> usize {
    let mut base = 1;
    loop {
        for m in [1, 2, 5] {
            let step = m * base;
            if span / step < MAX_X_TICKS {
                return step;
            }
        }
        base *= 10;
    }
}

pub fn render_chart(result: &SweepResult, criterion: Criterion, title: &str) -> Result<String> {
    let points: Vec<(usize, f64)> = result
        .rows
        .iter()
        .filter_map(|r| criterion.value(&r.report).map(|v| (r.k, v)))
        .collect();
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let best_k = select_best(&result.rows, criterion)?;

    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(_, v) in &points {
        y_min = y_min.min(v);
        y_max = y_max.max(v);
    }
    let span = y_max - y_min;
    let pad = if span > 0.0 {
        0.05 * span
    } else {
        0.05 * y_max.abs().max(1.0)
    };
    let frame = Frame {
        k_lo: points[0].0 as f64,
        k_hi: points[points.len() - 1].0 as f64,
        y_lo: y_min - pad,
        y_hi: y_max + pad,
    };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CHART_WIDTH}" height="{CHART_HEIGHT}" viewBox="0 0 {CHART_WIDTH} {CHART_HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{CHART_WIDTH}" height="{CHART_HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text class="title" x="{:.2}" y="30" text-anchor="middle" font-family="sans-serif" font-size="18">{}</text>"#,
        CHART_WIDTH / 2.0,
        escape(title)
    );

    // axes
    let (x0, x1) = (MARGIN_LEFT, CHART_WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (CHART_HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let _ = writeln!(
        svg,
        r#"<g class="axes" stroke="black" stroke-width="1"><line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/><line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/></g>"#
    );

    let _ = writeln!(svg, r#"<g class="x-ticks" font-family="sans-serif" font-size="12" text-anchor="middle">"#);
    let (k_first, k_last) = (points[0].0, points[points.len() - 1].0);
    let step = k_tick_step(k_last - k_first);
    let mut k = k_first.div_ceil(step) * step;
    while k <= k_last {
        let x = frame.x(k as f64);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}">{k}</text>"#,
            y0 + 5.0,
            y0 + 20.0
        );
        k += step;
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="y-ticks" font-family="sans-serif" font-size="12" text-anchor="end">"#);
    for i in 0..=Y_TICKS {
        let v = frame.y_lo + (frame.y_hi - frame.y_lo) * i as f64 / Y_TICKS as f64;
        let y = frame.y(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}">{}</text>"##,
            x0,
            x0 - 8.0,
            y + 4.0,
            tick_label(v)
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(
        svg,
        r#"<text class="x-label" x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="14">k</text>"#,
        (x0 + x1) / 2.0,
        CHART_HEIGHT - 15.0
    );
    let (lx, ly) = (20.0, (y0 + y1) / 2.0);
    let _ = writeln!(
        svg,
        r#"<text class="y-label" x="{lx:.2}" y="{ly:.2}" transform="rotate(-90 {lx:.2} {ly:.2})" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        criterion.label()
    );

    let vertices: Vec<String> = points
        .iter()
        .map(|&(k, v)| format!("{:.2},{:.2}", frame.x(k as f64), frame.y(v)))
        .collect();
    let _ = writeln!(
        svg,
        r##"<polyline class="series" fill="none" stroke="#1f77b4" stroke-width="2" points="{}"/>"##,
        vertices.join(" ")
    );

    let best_v = points
        .iter()
        .find(|p| p.0 == best_k)
        .map(|p| p.1)
        .expect("best k has a defined value");
    let (bx, by) = (frame.x(best_k as f64), frame.y(best_v));
    let _ = writeln!(
        svg,
        r##"<g class="best-k" data-k="{best_k}"><circle cx="{bx:.2}" cy="{by:.2}" r="5" fill="#d62728"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="#d62728">best k = {best_k}</text></g>"##,
        bx + 8.0,
        by - 8.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_chart<P: AsRef<Path>>(result: &SweepResult, criterion: Criterion, path: P, title: &str) -> Result<()> {
    let svg = render_chart(result, criterion, title)?;
    let path = path.as_ref();
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
