//! Best-effort SVG rendering: fixed 800x600 panels stacked vertically,
//! linear axes, one polyline per data series. The CSV files are the data
//! contract; these plots are a convenience view.

use std::fmt::Write as _;

pub struct Panel {
    pub title: String,
    /// (series label, samples); each series becomes one polyline.
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

const PANEL_W: f64 = 800.0;
const PANEL_H: f64 = 600.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 40.0;
const SERIES_STYLE: [&str; 3] = [
    "fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\"",
    "fill=\"none\" stroke=\"#c23b21\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"",
    "fill=\"none\" stroke=\"#2a8a3c\" stroke-width=\"1.5\" stroke-dasharray=\"2 3\"",
];

pub fn render(panels: &[Panel]) -> String {
    let total_h = PANEL_H * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {PANEL_W} {total_h}\" width=\"{PANEL_W}\" height=\"{total_h}\">"
    );
    let _ = writeln!(
        out,
        "<rect width=\"{PANEL_W}\" height=\"{total_h}\" fill=\"white\"/>"
    );
    for (i, panel) in panels.iter().enumerate() {
        render_panel(&mut out, panel, i as f64 * PANEL_H);
    }
    out.push_str("</svg>\n");
    out
}

fn data_bounds(panel: &Panel) -> (f64, f64, f64, f64) {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, pts) in &panel.series {
        for &(x, y) in pts {
            if x.is_finite() {
                xmin = xmin.min(x);
                xmax = xmax.max(x);
            }
            if y.is_finite() {
                ymin = ymin.min(y);
                ymax = ymax.max(y);
            }
        }
    }
    if !(xmin.is_finite() && xmax.is_finite() && xmin < xmax) {
        (xmin, xmax) = (0.0, 1.0);
    }
    if !(ymin.is_finite() && ymax.is_finite()) {
        (ymin, ymax) = (0.0, 1.0);
    }
    if ymin == ymax {
        ymin -= 0.5;
        ymax += 0.5;
    }
    (xmin, xmax, ymin, ymax)
}

fn render_panel(out: &mut String, panel: &Panel, y_off: f64) {
    let (xmin, xmax, ymin, ymax) = data_bounds(panel);
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let map_x = |x: f64| MARGIN_L + (x - xmin) / (xmax - xmin) * plot_w;
    let map_y = |y: f64| y_off + MARGIN_T + (ymax - y) / (ymax - ymin) * plot_h;

    let _ = writeln!(
        out,
        "<rect x=\"{MARGIN_L}\" y=\"{}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#444\"/>",
        y_off + MARGIN_T
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
        PANEL_W / 2.0,
        y_off + 24.0,
        escape(&panel.title)
    );
    // zero line when it crosses the panel
    if ymin < 0.0 && ymax > 0.0 {
        let zy = map_y(0.0);
        let _ = writeln!(
            out,
            "<line x1=\"{MARGIN_L}\" y1=\"{zy}\" x2=\"{}\" y2=\"{zy}\" stroke=\"#bbb\"/>",
            MARGIN_L + plot_w
        );
    }
    // axis extent labels
    let labels = [
        (
            MARGIN_L,
            y_off + PANEL_H - 12.0,
            format!("{xmin:e}"),
            "start",
        ),
        (
            MARGIN_L + plot_w,
            y_off + PANEL_H - 12.0,
            format!("{xmax:e}"),
            "end",
        ),
        (12.0, y_off + MARGIN_T + 12.0, format!("{ymax:e}"), "start"),
        (
            12.0,
            y_off + MARGIN_T + plot_h,
            format!("{ymin:e}"),
            "start",
        ),
    ];
    for (x, y, text, anchor) in labels {
        let _ = writeln!(
            out,
            "<text x=\"{x}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"{anchor}\">{text}</text>"
        );
    }

    for (s, (label, pts)) in panel.series.iter().enumerate() {
        let style = SERIES_STYLE[s % SERIES_STYLE.len()];
        let mut coords = String::with_capacity(pts.len() * 16);
        for &(x, y) in pts {
            if !(x.is_finite() && y.is_finite()) {
                continue;
            }
            if !coords.is_empty() {
                coords.push(' ');
            }
            let _ = write!(coords, "{},{}", map_x(x), map_y(y));
        }
        let _ = writeln!(out, "<polyline {style} points=\"{coords}\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            MARGIN_L + 8.0,
            y_off + MARGIN_T + 16.0 + 14.0 * s as f64,
            escape(label)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
