//! Minimal self-contained SVG plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// One curve; `band` holds `(low, high)` per point for a shaded interval.
pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
    pub band: Option<Vec<(f64, f64)>>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Line plot of several series with optional confidence bands.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let (x0, x1) = extent(xs);
    let ys = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1).chain(s.band.iter().flatten().flat_map(|&(lo, hi)| [lo, hi])));
    let (y0, y1) = extent(ys);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = header(title);
    axes(&mut out, x_label, y_label, (x0, x1), (y0, y1));
    for (k, s) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        if let Some(band) = &s.band {
            let upper = s.points.iter().zip(band).map(|(p, b)| format!("{:.2},{:.2}", sx(p.0), sy(b.1)));
            let lower = s.points.iter().zip(band).rev().map(|(p, b)| format!("{:.2},{:.2}", sx(p.0), sy(b.0)));
            let pts: Vec<String> = upper.chain(lower).collect();
            let _ = writeln!(
                out,
                r#"<polygon points="{}" fill="{colour}" fill-opacity="0.2" stroke="none"/>"#,
                pts.join(" ")
            );
        }
        let pts: Vec<String> = s.points.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1))).collect();
        let _ =
            writeln!(out, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#, pts.join(" "));
        let ly = MARGIN + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{ly:.2}" font-size="12" fill="{colour}">{}</text>"#,
            WIDTH - MARGIN - 150.0,
            escape(s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Heatmap with `values[row][col]`; NaN cells are left blank.
pub fn heatmap(title: &str, row_labels: &[String], col_labels: &[String], values: &[Vec<f64>]) -> String {
    let (v0, v1) = extent(values.iter().flatten().copied());
    let (nr, nc) = (row_labels.len().max(1) as f64, col_labels.len().max(1) as f64);
    let cw = (WIDTH - 2.0 * MARGIN) / nc;
    let ch = (HEIGHT - 2.0 * MARGIN) / nr;
    let mut out = header(title);
    for (r, row) in values.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                continue;
            }
            let t = (v - v0) / (v1 - v0);
            // white to dark blue
            let shade = |full: f64| (255.0 - t * (255.0 - full)).round() as u8;
            let _ = writeln!(
                out,
                r##"<rect x="{:.2}" y="{:.2}" width="{cw:.2}" height="{ch:.2}" fill="#{:02x}{:02x}{:02x}"><title>{v}</title></rect>"##,
                MARGIN + c as f64 * cw,
                MARGIN + r as f64 * ch,
                shade(8.0),
                shade(48.0),
                shade(107.0)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{v:.2}</text>"#,
                MARGIN + (c as f64 + 0.5) * cw,
                MARGIN + (r as f64 + 0.5) * ch + 4.0
            );
        }
    }
    for (r, l) in row_labels.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN - 6.0,
            MARGIN + (r as f64 + 0.5) * ch + 4.0,
            escape(l)
        );
    }
    for (c, l) in col_labels.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            MARGIN + (c as f64 + 0.5) * cw,
            HEIGHT - MARGIN + 16.0,
            escape(l)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    )
}

fn axes(out: &mut String, x_label: &str, y_label: &str, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) {
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(out, r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" fill="none" stroke="black"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{left}" y="{:.2}" font-size="11" text-anchor="middle">{x0:.3}</text>"#,
        bottom + 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{right}" y="{:.2}" font-size="11" text-anchor="middle">{x1:.3}</text>"#,
        bottom + 16.0
    );
    let _ =
        writeln!(out, r#"<text x="{:.2}" y="{bottom}" font-size="11" text-anchor="end">{y0:.3}</text>"#, left - 6.0);
    let _ = writeln!(out, r#"<text x="{:.2}" y="{top}" font-size="11" text-anchor="end">{y1:.3}</text>"#, left - 6.0);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
}
