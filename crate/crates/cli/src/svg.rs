//! Minimal SVG line charts: one polyline per price series, axes, labels.

use patmark_core::{PricePath, Rat};

pub struct Series {
    pub label: String,
    pub path: PricePath,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 52.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Renders price paths as a standalone SVG document. Coordinates are
/// formatted with fixed precision so output is byte-stable.
pub fn price_chart_svg(series: &[Series]) -> String {
    let max_len = series.iter().map(|s| s.path.prices().len()).max().unwrap_or(0);
    let mut y_min: Option<Rat> = None;
    let mut y_max: Option<Rat> = None;
    for s in series {
        for p in s.path.prices() {
            if y_min.as_ref().map(|m| p < m).unwrap_or(true) {
                y_min = Some(p.clone());
            }
            if y_max.as_ref().map(|m| p > m).unwrap_or(true) {
                y_max = Some(p.clone());
            }
        }
    }
    let y_min = y_min.unwrap_or_else(Rat::zero);
    let y_max = y_max.unwrap_or_else(Rat::one);

    let y_lo = y_min.to_f64();
    let mut y_hi = y_max.to_f64();
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let x_span = (max_len.max(2) - 1) as f64;
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let x_of = |t: usize| MARGIN + plot_w * t as f64 / x_span;
    let y_of = |v: f64| HEIGHT - MARGIN - plot_h * (v - y_lo) / (y_hi - y_lo);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // axes
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    ));
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" text-anchor=\"middle\">time</text>\n",
        x = WIDTH / 2.0,
        y = HEIGHT - 14.0
    ));
    svg.push_str(&format!(
        "<text x=\"14\" y=\"{y}\" font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 14 {y})\">price</text>\n",
        y = HEIGHT / 2.0
    ));

    // tick labels: y extremes and x extremes
    svg.push_str(&format!(
        "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"11\" text-anchor=\"end\">{v}</text>\n",
        x = MARGIN - 6.0,
        y = y_of(y_lo) + 4.0,
        v = y_min
    ));
    svg.push_str(&format!(
        "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"11\" text-anchor=\"end\">{v}</text>\n",
        x = MARGIN - 6.0,
        y = y_of(y_hi) + 4.0,
        v = y_max
    ));
    svg.push_str(&format!(
        "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"11\" text-anchor=\"middle\">0</text>\n",
        x = x_of(0),
        y = HEIGHT - MARGIN + 16.0
    ));
    if max_len > 1 {
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"11\" text-anchor=\"middle\">{t}</text>\n",
            x = x_of(max_len - 1),
            y = HEIGHT - MARGIN + 16.0,
            t = max_len - 1
        ));
    }

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .path
            .prices()
            .iter()
            .enumerate()
            .map(|(t, v)| format!("{:.2},{:.2}", x_of(t), y_of(v.to_f64())))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"11\" fill=\"{color}\">{label}</text>\n",
            x = WIDTH - MARGIN + 6.0,
            y = MARGIN + 14.0 * i as f64,
            label = xml_escape(&s.label)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
