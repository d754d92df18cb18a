use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::lti::StepResponse;
use crate::objective::SettlingBand;
use crate::search::EvaluationRecord;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
// Longest polyline drawn per frame; denser responses are decimated by stride.
const MAX_POINTS: usize = 1001;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameStyle {
    pub improved_color: String,
    pub rejected_color: String,
    pub band_color: String,
    pub band_dash: String,
    pub axis_label: String,
}

impl Default for FrameStyle {
    fn default() -> Self {
        Self {
            improved_color: "green".into(),
            rejected_color: "red".into(),
            band_color: "black".into(),
            band_dash: "8 5".into(),
            axis_label: "time [s]".into(),
        }
    }
}

impl FrameStyle {
    pub fn curve_color(&self, improved: bool) -> &str {
        if improved {
            &self.improved_color
        } else {
            &self.rejected_color
        }
    }
}

/// Plot window `[y_lo, y_hi]`: at least `[0, 1.1]`, widened to the data, plus 5% margin.
pub fn y_range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(0.0f64, f64::min);
    let hi = values.iter().copied().fold(1.1f64, f64::max);
    let margin = 0.05 * (hi - lo);
    (lo - margin, hi + margin)
}

fn nice_step(span: f64, target_ticks: f64) -> f64 {
    let raw = span / target_ticks;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo, 5.0);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Standalone SVG plot of one evaluated response.
pub fn render_frame(
    record: &EvaluationRecord,
    response: &StepResponse,
    band: &SettlingBand,
    style: &FrameStyle,
) -> String {
    let t_max = response.t_max;
    let (y_lo, y_hi) = y_range(&response.values);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |t: f64| LEFT + plot_w * t / t_max;
    let py = |z: f64| TOP + plot_h * (y_hi - z) / (y_hi - y_lo);

    let mut svg = String::with_capacity(32 * 1024);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // axes box and ticks
    let _ = writeln!(
        svg,
        r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444" stroke-width="1"/>"##
    );
    for t in ticks(0.0, t_max) {
        let x = px(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="#444"/><text x="{x:.2}" y="{ty:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{label}</text>"##,
            y0 = TOP + plot_h,
            y1 = TOP + plot_h + 5.0,
            ty = TOP + plot_h + 20.0,
            label = tick_label(t),
        );
    }
    for z in ticks(y_lo, y_hi) {
        let y = py(z);
        let _ = writeln!(
            svg,
            r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="#444"/><text x="{tx:.2}" y="{ty:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{label}</text>"##,
            x0 = LEFT - 5.0,
            tx = LEFT - 8.0,
            ty = y + 4.0,
            label = tick_label(z),
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">{label}</text>"#,
        x = LEFT + plot_w / 2.0,
        y = HEIGHT - 15.0,
        label = style.axis_label,
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{y:.2}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 18 {y:.2})">z(x,t)</text>"#,
        y = TOP + plot_h / 2.0,
    );
    let o = &record.objective;
    let _ = writeln!(
        svg,
        r#"<text x="{LEFT}" y="25" font-family="monospace" font-size="13">#{} Kp={:.4} Ki={:.4} Kd={:.4} f={:.6}</text>"#,
        record.index, record.gains.kp, record.gains.ki, record.gains.kd, o.total,
    );

    // settling band
    for level in [band.upper, band.lower] {
        let y = py(level);
        let _ = writeln!(
            svg,
            r#"<line class="band" x1="{x0:.2}" y1="{y:.3}" x2="{x1:.2}" y2="{y:.3}" stroke="{color}" stroke-width="1" stroke-dasharray="{dash}" data-level="{level}"/>"#,
            x0 = px(0.0),
            x1 = px(t_max),
            color = style.band_color,
            dash = style.band_dash,
        );
    }

    // response
    let n = response.values.len();
    let stride = (n - 1).div_ceil(MAX_POINTS - 1).max(1);
    let mut points = String::with_capacity(MAX_POINTS * 16);
    let mut k = 0;
    loop {
        let _ = write!(points, "{:.2},{:.2} ", px(response.time(k)), py(response.values[k]));
        if k == n - 1 {
            break;
        }
        k = (k + stride).min(n - 1);
    }
    let _ = writeln!(
        svg,
        r#"<polyline class="response" fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>"#,
        color = style.curve_color(record.improved),
        pts = points.trim_end(),
    );
    svg.push_str("</svg>\n");
    svg
}
