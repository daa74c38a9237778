use std::fmt::Write as _;

use super::ReportBundle;

const CHART_W: f64 = 360.0;
const CHART_H: f64 = 240.0;
const MARGIN_L: f64 = 50.0;
const MARGIN_T: f64 = 30.0;
const GAP: f64 = 70.0;
const LEGEND_ROW: f64 = 18.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(ch),
        }
    }
    out
}

struct Chart<'a> {
    x0: f64,
    title: &'a str,
    x_label: &'a str,
    points: usize,
}

impl Chart<'_> {
    fn x(&self, i: usize) -> f64 {
        if self.points <= 1 {
            self.x0 + CHART_W / 2.0
        } else {
            self.x0 + CHART_W * i as f64 / (self.points - 1) as f64
        }
    }

    fn y(v: f64) -> f64 {
        MARGIN_T + CHART_H * (1.0 - v.clamp(0.0, 100.0) / 100.0)
    }

    fn frame(&self, out: &mut String) {
        let (x0, x1) = (self.x0, self.x0 + CHART_W);
        let (y0, y1) = (MARGIN_T, MARGIN_T + CHART_H);
        writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-weight="bold">{}</text>"##,
            x0 + CHART_W / 2.0,
            y0 - 10.0,
            self.title
        )
        .unwrap();
        writeln!(
            out,
            r##"<path d="M{x0:.2},{y0:.2} V{y1:.2} H{x1:.2}" fill="none" stroke="#000"/>"##
        )
        .unwrap();
        for v in [0.0, 25.0, 50.0, 75.0, 100.0] {
            let y = Self::y(v);
            writeln!(
                out,
                r##"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.0}</text>"##,
                x0 - 6.0,
                y + 4.0
            )
            .unwrap();
        }
        for i in 0..self.points {
            writeln!(
                out,
                r##"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                self.x(i),
                y1 + 16.0,
                i + 1
            )
            .unwrap();
        }
        writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            x0 + CHART_W / 2.0,
            y1 + 36.0,
            self.x_label
        )
        .unwrap();
        writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">MAP (%)</text>"##,
            x0 - 36.0,
            y0 + CHART_H / 2.0,
            x0 - 36.0,
            y0 + CHART_H / 2.0
        )
        .unwrap();
    }

    fn series(&self, out: &mut String, values: &[f64], color: &str) {
        let pts: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{:.2},{:.2}", self.x(i), Self::y(v)))
            .collect();
        if pts.len() > 1 {
            writeln!(
                out,
                r##"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"##,
                pts.join(" ")
            )
            .unwrap();
        }
        for (i, &v) in values.iter().enumerate() {
            writeln!(
                out,
                r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"##,
                self.x(i),
                Self::y(v)
            )
            .unwrap();
        }
    }
}

/// Two side-by-side line charts: robustness against `r` and generality
/// against `c`, one series per bundle, legend in input order.
pub fn render_curves_svg(bundles: &[ReportBundle]) -> String {
    let r_points = bundles
        .iter()
        .map(|b| b.curves.robustness.len())
        .max()
        .unwrap_or(0);
    let c_points = bundles
        .iter()
        .map(|b| b.curves.generality.len())
        .max()
        .unwrap_or(0);
    let robustness = Chart {
        x0: MARGIN_L,
        title: "Robustness",
        x_label: "probes per subject (r)",
        points: r_points,
    };
    let generality = Chart {
        x0: MARGIN_L + CHART_W + GAP,
        title: "Generality",
        x_label: "FRS count (c)",
        points: c_points,
    };
    let width = MARGIN_L + 2.0 * CHART_W + GAP + 20.0;
    let legend_top = MARGIN_T + CHART_H + 56.0;
    let height = legend_top + LEGEND_ROW * bundles.len() as f64 + 10.0;

    let mut out = String::new();
    writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"##
    )
    .unwrap();
    writeln!(out, r##"<rect width="100%" height="100%" fill="#fff"/>"##).unwrap();
    robustness.frame(&mut out);
    generality.frame(&mut out);
    for (k, b) in bundles.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        robustness.series(&mut out, &b.curves.robustness, color);
        generality.series(&mut out, &b.curves.generality, color);
        let y = legend_top + LEGEND_ROW * k as f64;
        writeln!(
            out,
            r##"<rect x="{MARGIN_L:.2}" y="{:.2}" width="12" height="12" fill="{color}"/>"##,
            y - 10.0
        )
        .unwrap();
        writeln!(
            out,
            r##"<text x="{:.2}" y="{y:.2}">{}</text>"##,
            MARGIN_L + 18.0,
            escape(&b.label)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
