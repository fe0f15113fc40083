//! Log-log SVG charts of decay series.

use std::fmt::Write as _;

use crate::analysis::norm_values;
use crate::error::{LabError, Result};
use crate::series::DecaySeries;

/// Slopes of the dashed reference lines.
pub const GUIDE_SLOPES: [f64; 3] = [-0.75, -1.25, -1.5];

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const LEGEND_W: f64 = 150.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

struct Axes {
    lx: (f64, f64),
    ly: (f64, f64),
}

impl Axes {
    fn px(&self, t: f64) -> f64 {
        let right = WIDTH - MARGIN - LEGEND_W;
        MARGIN + (t.log10() - self.lx.0) / (self.lx.1 - self.lx.0) * (right - MARGIN)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v.log10() - self.ly.0) / (self.ly.1 - self.ly.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Chart the named norms (`grad_dt` allowed); points with `t ≤ 0` or nonpositive values are skipped.
pub fn render_svg(series: &DecaySeries, norms: &[&str]) -> Result<String> {
    if series.is_empty() {
        return Err(LabError::Input("cannot plot an empty series".into()));
    }
    let mut curves = Vec::new();
    for name in norms {
        let values = norm_values(series, name).ok_or_else(|| LabError::Input(format!("series has no column `{name}`")))?;
        let pts: Vec<(f64, f64)> =
            series.times.iter().zip(values).filter(|(t, v)| **t > 0.0 && *v > 0.0 && v.is_finite()).map(|(t, v)| (*t, v)).collect();
        if !pts.is_empty() {
            curves.push((name.to_string(), pts));
        }
    }
    if curves.is_empty() {
        return Err(LabError::Input("no positive samples to plot".into()));
    }
    let all = curves.iter().flat_map(|(_, p)| p.iter());
    let (mut t0, mut t1, mut v0, mut v1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(t, v) in all {
        t0 = t0.min(t);
        t1 = t1.max(t);
        v0 = v0.min(v);
        v1 = v1.max(v);
    }
    let pad = |lo: f64, hi: f64| {
        let (a, b) = (lo.log10(), hi.log10());
        if b - a < 1e-9 {
            (a - 0.5, b + 0.5)
        } else {
            (a - 0.05 * (b - a), b + 0.05 * (b - a))
        }
    };
    let axes = Axes { lx: pad(t0, t1), ly: pad(v0, v1) };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let right = WIDTH - MARGIN - LEGEND_W;
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for d in (axes.lx.0.ceil() as i32)..=(axes.lx.1.floor() as i32) {
        let x = axes.px(10f64.powi(d));
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" font-size="12" text-anchor="middle">1e{d}</text>"#,
            HEIGHT - MARGIN,
            HEIGHT - MARGIN + 6.0,
            HEIGHT - MARGIN + 20.0
        );
    }
    for d in (axes.ly.0.ceil() as i32)..=(axes.ly.1.floor() as i32) {
        let y = axes.py(10f64.powi(d));
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{y:.2}" x2="{MARGIN}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" font-size="12" text-anchor="end">1e{d}</text>"#,
            MARGIN - 6.0,
            MARGIN - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{}" font-size="14" text-anchor="middle">t</text>"#,
        0.5 * (MARGIN + right),
        HEIGHT - 15.0
    );

    // guides share the first curve's starting point
    let (ta, va) = curves[0].1[0];
    let clip = r#"clip-path="url(#plotarea)""#;
    let _ = writeln!(
        svg,
        r#"<clipPath id="plotarea"><rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}"/></clipPath>"#,
        right - MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for (i, s) in GUIDE_SLOPES.iter().enumerate() {
        let tb = 10f64.powf(axes.lx.1);
        let vb = va * (tb / ta).powf(*s);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#777" stroke-dasharray="{}" {clip}/>"##,
            axes.px(ta),
            axes.py(va),
            axes.px(tb),
            axes.py(vb),
            ["6,4", "2,3", "8,3,2,3"][i]
        );
    }
    for (i, (_, pts)) in curves.iter().enumerate() {
        let mut d = String::new();
        for (k, (t, v)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2} ", if k == 0 { "M" } else { "L" }, axes.px(*t), axes.py(*v));
        }
        let _ = writeln!(
            svg,
            r#"<path d="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            d.trim_end(),
            COLORS[i % COLORS.len()]
        );
    }

    let lx = right + 15.0;
    let mut ly = MARGIN + 10.0;
    for (i, (name, _)) in curves.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/><text x="{}" y="{}" font-size="12">{}</text>"#,
            lx + 25.0,
            COLORS[i % COLORS.len()],
            lx + 30.0,
            ly + 4.0,
            escape(name)
        );
        ly += 20.0;
    }
    for (i, s) in GUIDE_SLOPES.iter().enumerate() {
        let _ = writeln!(
            svg,
            r##"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="#777" stroke-dasharray="{}"/><text x="{}" y="{}" font-size="12">slope {s}</text>"##,
            lx + 25.0,
            ["6,4", "2,3", "8,3,2,3"][i],
            lx + 30.0,
            ly + 4.0
        );
        ly += 20.0;
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
