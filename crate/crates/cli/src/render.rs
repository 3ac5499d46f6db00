//! SVG drawing of a (possibly partial) schedule.
//!
//! Each integer time unit is a column. The jobs running in that unit are
//! stacked from the bottom, ordered by start time and then id, so a job
//! shows up as a sequence of slices rather than one rectangle.

use std::fmt::Write;

use peakpack::{bounds, ratio, Instance, Plan, Q};

const UNIT: f64 = 32.0;
const PLOT_HEIGHT: f64 = 320.0;
const MARGIN: f64 = 48.0;

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

fn fmt(x: f64) -> String {
    let s = format!("{x:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Slices per time unit: `(job index, bottom, top)`.
pub fn columns(instance: &Instance, plan: &Plan) -> Vec<Vec<(usize, u64, u64)>> {
    let mut order: Vec<(u64, &str, usize)> = plan
        .placed()
        .map(|(i, s)| (s, instance.job(i).id.as_str(), i))
        .collect();
    order.sort();
    (0..instance.deadline())
        .map(|t| {
            let mut level = 0;
            let mut col = Vec::new();
            for &(s, _, i) in &order {
                let j = instance.job(i);
                if s <= t && t < s + j.p {
                    col.push((i, level, level + j.e));
                    level += j.e;
                }
            }
            col
        })
        .collect()
}

pub fn render_svg(instance: &Instance, plan: &Plan) -> String {
    let d = instance.deadline();
    let tp: Q = bounds::lower_bound(instance).t;
    let guide_hi = &tp * ratio::frac(5, 3);
    let cols = columns(instance, plan);
    let peak = cols.iter().filter_map(|c| c.last().map(|s| s.2)).max().unwrap_or(0);
    let top = ratio::to_f64(&guide_hi).max(peak as f64).max(1.0);
    let sy = PLOT_HEIGHT / top;
    let width = d as f64 * UNIT + 2.0 * MARGIN;
    let height = PLOT_HEIGHT + 2.0 * MARGIN;
    let base = MARGIN + PLOT_HEIGHT;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt(width),
        fmt(height),
        fmt(width),
        fmt(height)
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<g id="slices" stroke="white" stroke-width="0.5">"#);
    for (t, col) in cols.iter().enumerate() {
        for &(i, lo, hi) in col {
            let j = instance.job(i);
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"><title>{} [{}]</title></rect>"#,
                fmt(MARGIN + t as f64 * UNIT),
                fmt(base - hi as f64 * sy),
                fmt(UNIT),
                fmt((hi - lo) as f64 * sy),
                PALETTE[i % PALETTE.len()],
                escape(&j.id),
                t
            );
        }
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="axes" stroke="black" stroke-width="1" font-family="sans-serif" font-size="10">"#);
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}"/>"#,
        m = fmt(MARGIN),
        b = fmt(base),
        r = fmt(MARGIN + d as f64 * UNIT)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{b}" x2="{m}" y2="{t}"/>"#,
        m = fmt(MARGIN),
        b = fmt(base),
        t = fmt(MARGIN)
    );
    let step = d.div_ceil(20).max(1);
    for t in (0..=d).step_by(step as usize) {
        let x = MARGIN + t as f64 * UNIT;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" stroke="none">{}</text>"#,
            fmt(x),
            fmt(base + 14.0),
            t
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="guides" stroke-dasharray="6 4" stroke-width="1" font-family="sans-serif" font-size="10">"#);
    for (label, value, colour) in [("T'", &tp, "#333333"), ("5/3 T'", &guide_hi, "#c0392b")] {
        let y = base - ratio::to_f64(value) * sy;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{colour}"/>"#,
            fmt(MARGIN),
            fmt(MARGIN + d as f64 * UNIT),
            y = fmt(y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{colour}" stroke="none">{label} = {}</text>"#,
            fmt(MARGIN + d as f64 * UNIT + 4.0),
            fmt(y + 3.0),
            ratio::format(value)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
