//! Minimal static SVG plots.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) -> String {
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    format!(
        "<path d=\"M{x0},{y1} L{x0},{y0} L{x1},{y0}\" stroke=\"black\" fill=\"none\"/>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n\
         <text x=\"15\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 15 {})\">{}</text>\n\
         <text x=\"{x0}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n\
         <text x=\"{x1}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n\
         <text x=\"{}\" y=\"{y0}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
        WIDTH / 2.0,
        HEIGHT - 10.0,
        escape(x_label),
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label),
        y0 + 14.0,
        x_range.0,
        y0 + 14.0,
        x_range.1,
        x0 - 4.0,
        y_range.0,
        x0 - 4.0,
        y1 + 4.0,
        y_range.1,
    )
}

fn scale(v: f64, lo: f64, hi: f64, out_lo: f64, out_hi: f64) -> f64 {
    if hi > lo {
        out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo)
    } else {
        0.5 * (out_lo + out_hi)
    }
}

/// Line plot of several series against a shared x, with an optional
/// horizontal reference line.
pub fn line_plot(title: &str, x_label: &str, xs: &[f64], series: &[(&str, &str, Vec<f64>)], reference: Option<f64>) -> String {
    let x_range = (xs.first().copied().unwrap_or(0.0), xs.last().copied().unwrap_or(1.0));
    let mut y_hi = series.iter().flat_map(|s| s.2.iter().copied()).fold(0.0f64, f64::max);
    if let Some(r) = reference {
        y_hi = y_hi.max(r);
    }
    let y_range = (0.0, if y_hi > 0.0 { y_hi * 1.05 } else { 1.0 });
    let mut out = header(title);
    out += &axes(x_label, "workers", x_range, (y_range.0, (y_range.1 * 100.0).round() / 100.0));
    let px = |x: f64| scale(x, x_range.0, x_range.1, MARGIN, WIDTH - MARGIN);
    let py = |y: f64| scale(y, y_range.0, y_range.1, HEIGHT - MARGIN, MARGIN);
    if let Some(r) = reference {
        let _ = writeln!(
            out,
            "<line x1=\"{MARGIN}\" x2=\"{}\" y1=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>",
            WIDTH - MARGIN,
            py(r),
            py(r)
        );
    }
    for (k, (name, colour, ys)) in series.iter().enumerate() {
        let mut d = String::new();
        for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, px(*x), py(*y));
        }
        let _ = writeln!(out, "<path d=\"{d}\" stroke=\"{colour}\" fill=\"none\" stroke-width=\"1.2\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" fill=\"{colour}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            WIDTH - MARGIN + 5.0,
            MARGIN + 14.0 * k as f64,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Heatmap of categorical cells on a regular grid. `cells` holds
/// `(column, row, colour)` with rows counted from the bottom.
pub fn heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    x_range: (f64, f64),
    y_range: (f64, f64),
    shape: (usize, usize),
    cells: &[(usize, usize, String)],
    legend: &[(&str, &str)],
) -> String {
    let (cols, rows) = shape;
    let w = (WIDTH - 2.0 * MARGIN) / cols.max(1) as f64;
    let h = (HEIGHT - 2.0 * MARGIN) / rows.max(1) as f64;
    let mut out = header(title);
    for (c, r, colour) in cells {
        let _ = writeln!(
            out,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{colour}\"/>",
            MARGIN + *c as f64 * w,
            HEIGHT - MARGIN - (*r as f64 + 1.0) * h,
            w + 0.05,
            h + 0.05
        );
    }
    out += &axes(x_label, y_label, x_range, y_range);
    for (k, (name, colour)) in legend.iter().enumerate() {
        let y = MARGIN + 14.0 * k as f64;
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"8\" height=\"8\" fill=\"{colour}\"/><text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\">{}</text>",
            WIDTH - MARGIN + 4.0,
            y - 8.0,
            WIDTH - MARGIN + 14.0,
            y,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}
