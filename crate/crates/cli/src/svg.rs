//! Line plots of fidelity and trace distance against inverse temperature,
//! as a standalone SVG document.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::records::SweepRecord;

const PANEL_W: f64 = 520.0;
const PANEL_H: f64 = 300.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 45.0;
const GAP: f64 = 50.0;
const LEGEND_W: f64 = 170.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

struct Series<'a> {
    label: String,
    points: Vec<&'a SweepRecord>,
}

fn group(records: &[SweepRecord]) -> Vec<Series<'_>> {
    let mut series: Vec<Series> = Vec::new();
    for r in records.iter().filter(|r| r.fidelity.is_finite() && r.trace_distance.is_finite()) {
        let label = format!("{} g={}", r.cost_kind.name(), r.g);
        match series.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push(r),
            None => series.push(Series { label, points: vec![r] }),
        }
    }
    for s in &mut series {
        s.points.sort_by(|a, b| a.beta.total_cmp(&b.beta));
    }
    series
}

type Metric = fn(&SweepRecord) -> f64;

/// Renders both panels; records with non-finite metrics are skipped.
pub fn render_svg(records: &[SweepRecord]) -> Result<String> {
    let series = group(records);
    if series.is_empty() {
        return Err(HarnessError::EmptyPlot);
    }
    let (mut lo, mut hi) = series
        .iter()
        .flat_map(|s| s.points.iter().map(|r| r.beta.log10()))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    lo = lo.floor();
    hi = hi.ceil();
    if hi <= lo {
        hi = lo + 1.0;
    }

    let width = MARGIN_L + 2.0 * PANEL_W + GAP + LEGEND_W;
    let height = MARGIN_T + PANEL_H + MARGIN_B;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    let panels: [(&str, Metric); 2] =
        [("fidelity", |r| r.fidelity), ("trace distance", |r| r.trace_distance)];
    for (p, (title, metric)) in panels.iter().enumerate() {
        let x0 = MARGIN_L + p as f64 * (PANEL_W + GAP);
        let y0 = MARGIN_T;
        let sx = |b: f64| x0 + (b.log10() - lo) / (hi - lo) * PANEL_W;
        let sy = |v: f64| y0 + (1.0 - v.clamp(0.0, 1.0)) * PANEL_H;

        let _ = writeln!(
            svg,
            r#"<g class="panel" id="panel-{p}"><rect x="{x0}" y="{y0}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{title}</text>"#,
            x0 + PANEL_W / 2.0,
            y0 - 10.0
        );
        for e in lo as i32..=hi as i32 {
            let x = sx(10f64.powi(e));
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="#ddd"/><text x="{x:.2}" y="{}" text-anchor="middle">1e{e}</text>"##,
                y0,
                y0 + PANEL_H,
                y0 + PANEL_H + 16.0
            );
        }
        for k in 0..=4 {
            let v = k as f64 / 4.0;
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{:.2}" text-anchor="end">{v}</text>"#,
                x0 - 6.0,
                sy(v) + 4.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">inverse temperature (log scale)</text>"#,
            x0 + PANEL_W / 2.0,
            y0 + PANEL_H + 34.0
        );
        for (k, s) in series.iter().enumerate() {
            let colour = PALETTE[k % PALETTE.len()];
            let path: Vec<String> = s
                .points
                .iter()
                .map(|r| format!("{:.2},{:.2}", sx(r.beta), sy(metric(r))))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
            for r in &s.points {
                let _ = writeln!(
                    svg,
                    r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="2.5" fill="{colour}"/>"#,
                    sx(r.beta),
                    sy(metric(r))
                );
            }
        }
        svg.push_str("</g>\n");
    }

    let lx = MARGIN_L + 2.0 * PANEL_W + GAP + 15.0;
    for (k, s) in series.iter().enumerate() {
        let y = MARGIN_T + 10.0 + 18.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx}" y="{}" width="12" height="3" fill="{}"/><text x="{}" y="{}">{}</text>"#,
            y - 4.0,
            PALETTE[k % PALETTE.len()],
            lx + 18.0,
            y,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_svg(records: &[SweepRecord], path: &Path) -> Result<()> {
    let svg = render_svg(records).map_err(|e| e.with_path(path))?;
    std::fs::write(path, svg).map_err(|e| HarnessError::io(path, e))
}
