use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::run::SweepRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotPanel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

/// How records are grouped into panels and curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotLayout {
    /// χ(S:E1)/S against γt, one curve per p.
    NormalizedChiVsTime,
    /// χ(S:E1)/S against γt, one curve per ω/γ.
    NormalizedChiVsTimeByRatio,
    /// Redundancy and χ/S at t* against p.
    RedundancyVsP,
    /// Redundancy and χ/S at t* against ω/γ.
    RedundancyVsRatio,
    /// Pointer fidelity against p, one panel per record panel.
    PointerFidelityVsP,
}

impl PlotLayout {
    pub fn for_figure(tag: &str) -> Result<Self> {
        match tag {
            "fig1" => Ok(Self::NormalizedChiVsTime),
            "fig2" => Ok(Self::RedundancyVsP),
            "fig3" => Ok(Self::NormalizedChiVsTimeByRatio),
            "fig4" => Ok(Self::RedundancyVsRatio),
            "fig5" => Ok(Self::PointerFidelityVsP),
            other => Err(Error::UnknownFigure(other.to_string())),
        }
    }

    /// Layout for an arbitrary sweep: time series plot χ/S, single-time
    /// sweeps plot redundancy against p.
    pub fn generic(records: &[SweepRecord]) -> Self {
        if records.iter().any(|r| r.selection == "series") {
            Self::NormalizedChiVsTime
        } else {
            Self::RedundancyVsP
        }
    }

    pub fn panels(&self, records: &[SweepRecord]) -> Vec<PlotPanel> {
        let chi_norm = |r: &SweepRecord| r.chi_e1_normalized;
        let red = |r: &SweepRecord| r.redundancy.map(|v| v as f64);
        let gt = |r: &SweepRecord| r.gamma_t;
        let p = |r: &SweepRecord| Some(r.p);
        let ratio = |r: &SweepRecord| Some(r.omega_over_gamma);
        match self {
            Self::NormalizedChiVsTime => vec![panel(
                "normalized chi(S:E1)",
                "gamma t",
                "chi(S:E1) / S(S)",
                group(records, |r| format!("p = {}", r.p), gt, chi_norm),
            )],
            Self::NormalizedChiVsTimeByRatio => vec![panel(
                "normalized chi(S:E1)",
                "gamma t",
                "chi(S:E1) / S(S)",
                group(records, |r| format!("omega/gamma = {}", r.omega_over_gamma), gt, chi_norm),
            )],
            Self::RedundancyVsP => vec![
                panel("redundancy at t*", "p", "Red", group(records, series_key, p, red)),
                panel("normalized chi at t*", "p", "chi(S:E1) / S(S)", group(records, series_key, p, chi_norm)),
            ],
            Self::RedundancyVsRatio => vec![
                panel("redundancy at t*", "omega/gamma", "Red", group(records, series_key, ratio, red)),
                panel(
                    "normalized chi at t*",
                    "omega/gamma",
                    "chi(S:E1) / S(S)",
                    group(records, series_key, ratio, chi_norm),
                ),
            ],
            Self::PointerFidelityVsP => {
                let mut by_panel: BTreeMap<String, Vec<SweepRecord>> = BTreeMap::new();
                for r in records {
                    by_panel.entry(r.panel.clone()).or_default().push(r.clone());
                }
                by_panel
                    .into_iter()
                    .map(|(label, rs)| {
                        let key = |r: &SweepRecord| {
                            if r.scenario == "circle-left" {
                                format!("omega/gamma = {}", r.omega_over_gamma)
                            } else {
                                format!("{} = {:.4}", r.scenario, r.scenario_param.unwrap_or(f64::NAN))
                            }
                        };
                        panel(
                            &format!("panel {label}"),
                            "p",
                            "pointer fidelity",
                            group(&rs, key, p, |r| r.pointer_fidelity),
                        )
                    })
                    .collect()
            }
        }
    }
}

fn series_key(r: &SweepRecord) -> String {
    match r.scenario_param {
        Some(v) => format!("{} {} n={}", r.scenario, v, r.n),
        None => format!("{} n={}", r.scenario, r.n),
    }
}

fn panel(title: &str, x: &str, y: &str, series: Vec<Series>) -> PlotPanel {
    PlotPanel { title: title.into(), x_label: x.into(), y_label: y.into(), series }
}

/// Groups records into curves, keeping first-appearance order of keys.
fn group(
    records: &[SweepRecord],
    key: impl Fn(&SweepRecord) -> String,
    x: impl Fn(&SweepRecord) -> Option<f64>,
    y: impl Fn(&SweepRecord) -> Option<f64>,
) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    for r in records {
        let label = key(r);
        let idx = match out.iter().position(|s| s.label == label) {
            Some(i) => i,
            None => {
                out.push(Series { label, points: Vec::new() });
                out.len() - 1
            }
        };
        if let (Some(xv), Some(yv)) = (x(r), y(r)) {
            if xv.is_finite() && yv.is_finite() {
                out[idx].points.push((xv, yv));
            }
        }
    }
    for s in &mut out {
        s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf",
];

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 320.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;
const LEGEND_ROW: f64 = 14.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = if lo.abs() > 0.0 { 0.1 * lo.abs() } else { 0.5 };
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Renders panels side by side as a standalone SVG document.
pub fn render_svg(panels: &[PlotPanel]) -> String {
    let legend_rows = panels.iter().map(|p| p.series.len()).max().unwrap_or(0);
    let width = PANEL_W * panels.len().max(1) as f64;
    let height = PANEL_H + LEGEND_ROW * legend_rows as f64 + 10.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (pi, p) in panels.iter().enumerate() {
        let ox = PANEL_W * pi as f64;
        let (x0, x1) = range(p.series.iter().flat_map(|s| s.points.iter().map(|q| q.0)));
        let (y0, y1) = range(p.series.iter().flat_map(|s| s.points.iter().map(|q| q.1)));
        let pw = PANEL_W - MARGIN_L - MARGIN_R;
        let ph = PANEL_H - MARGIN_T - MARGIN_B;
        let sx = |x: f64| ox + MARGIN_L + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| MARGIN_T + ph - (y - y0) / (y1 - y0) * ph;
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#,
            ox + MARGIN_L
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="18" text-anchor="middle" font-size="13">{}</text>"#,
            ox + PANEL_W / 2.0,
            escape(&p.title)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            ox + MARGIN_L + pw / 2.0,
            PANEL_H - 10.0,
            escape(&p.x_label)
        );
        let ly = MARGIN_T + ph / 2.0;
        let lx = ox + 14.0;
        let _ = writeln!(
            svg,
            r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
            escape(&p.y_label)
        );
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xv = x0 + f * (x1 - x0);
            let yv = y0 + f * (y1 - y0);
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="9">{}</text>"#,
                sx(xv),
                MARGIN_T + ph + 14.0,
                tick(xv)
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="9">{}</text>"#,
                ox + MARGIN_L - 4.0,
                sy(yv) + 3.0,
                tick(yv)
            );
        }
        for (si, s) in p.series.iter().enumerate() {
            let color = PALETTE[si % PALETTE.len()];
            if s.points.len() > 1 {
                let pts: Vec<String> =
                    s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                let _ = writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    pts.join(" ")
                );
            }
            for &(x, y) in &s.points {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                    sx(x),
                    sy(y)
                );
            }
            let ty = PANEL_H + LEGEND_ROW * si as f64;
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                ox + MARGIN_L,
                ty,
                ox + MARGIN_L + 14.0,
                ty + 9.0,
                escape(&s.label)
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

/// Renders the figure `tag` from `records` into an SVG file.
pub fn emit_plot(records: &[SweepRecord], tag: &str, path: &Path) -> Result<()> {
    emit_plot_with_layout(records, PlotLayout::for_figure(tag)?, path)
}

pub fn emit_plot_with_layout(records: &[SweepRecord], layout: PlotLayout, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, render_svg(&layout.panels(records)))?;
    Ok(())
}
