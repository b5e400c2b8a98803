//! Minimal SVG plotting: axes, polylines, scatter points and filled cells.

use std::fmt::Write as _;

use intsnn_core::metrics::SummaryRow;
use intsnn_core::{SpikeRaster, Trajectory, WeightMatrix};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// A plot area with linear axes in data coordinates.
pub struct Chart {
    title: String,
    x_label: String,
    y_label: String,
    x: (f64, f64),
    y: (f64, f64),
    body: String,
}

fn widen(r: (f64, f64)) -> (f64, f64) {
    if (r.1 - r.0).abs() < f64::EPSILON {
        (r.0 - 0.5, r.1 + 0.5)
    } else {
        r
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str, x: (f64, f64), y: (f64, f64)) -> Self {
        Self {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            x: widen(x),
            y: widen(y),
            body: String::new(),
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT
            - MARGIN_BOTTOM
            - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str) {
        if pts.is_empty() {
            return;
        }
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
    }

    pub fn points(&mut self, pts: &[(f64, f64)], color: &str, radius: f64) {
        for &(x, y) in pts {
            let _ = writeln!(
                self.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}" fill="{color}" fill-opacity="0.6"/>"#,
                self.px(x),
                self.py(y)
            );
        }
    }

    /// Filled rectangle spanning `[x0, x1] x [y0, y1]` in data coordinates.
    pub fn cell(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, fill: &str) {
        let (ax, bx) = (self.px(x0), self.px(x1));
        let (ay, by) = (self.py(y1), self.py(y0));
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
            ax.min(bx),
            ay.min(by),
            (bx - ax).abs(),
            (by - ay).abs()
        );
    }

    pub fn legend(&mut self, entries: &[(&str, &str)]) {
        for (i, (label, color)) in entries.iter().enumerate() {
            let y = MARGIN_TOP + 14.0 + 16.0 * i as f64;
            let x = WIDTH - MARGIN_RIGHT - 130.0;
            let _ = writeln!(
                self.body,
                r#"<rect x="{x:.2}" y="{:.2}" width="10" height="10" fill="{color}"/><text x="{:.2}" y="{y:.2}" font-size="11">{}</text>"#,
                y - 9.0,
                x + 14.0,
                escape(label)
            );
        }
    }

    fn ticks(lo: f64, hi: f64) -> Vec<f64> {
        (0..=5).map(|i| lo + (hi - lo) * i as f64 / 5.0).collect()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        s.push_str(&self.body);
        let (x0, x1) = (self.px(self.x.0), self.px(self.x.1));
        let (y0, y1) = (self.py(self.y.0), self.py(self.y.1));
        let _ = writeln!(
            s,
            r#"<path d="M{x0:.2},{y1:.2} L{x0:.2},{y0:.2} L{x1:.2},{y0:.2}" fill="none" stroke="black"/>"#
        );
        for t in Self::ticks(self.x.0, self.x.1) {
            let x = self.px(t);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
                y0 + 5.0,
                y0 + 18.0,
                tick_label(t)
            );
        }
        for t in Self::ticks(self.y.0, self.y.1) {
            let y = self.py(t);
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
                x0 - 5.0,
                x0 - 8.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(&self.y_label)
        );
        s.push_str("</svg>\n");
        s
    }
}

fn tick_label(t: f64) -> String {
    if t.fract().abs() < 1e-9 {
        format!("{t:.0}")
    } else {
        format!("{t:.2}")
    }
}

fn range_of(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Weight matrix as a diverging heatmap; rows are postsynaptic neurons.
pub fn connectivity_heatmap(weights: &WeightMatrix, title: &str) -> String {
    let n = weights.n();
    let mut chart = Chart::new(
        title,
        "presynaptic neuron j",
        "postsynaptic neuron i",
        (0.0, n as f64),
        (0.0, n as f64),
    );
    let max = weights
        .triplets()
        .iter()
        .map(|t| t.2.unsigned_abs())
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    for (i, j, w) in weights.triplets() {
        let a = (w.unsigned_abs() as f64 / max * 0.85 + 0.15).min(1.0);
        let fill = if w > 0 {
            format!("rgba(214,39,40,{a:.3})")
        } else {
            format!("rgba(31,119,180,{a:.3})")
        };
        // Row 0 at the top, like a printed matrix.
        let y = (n - 1 - i) as f64;
        chart.cell(j as f64, y, j as f64 + 1.0, y + 1.0, &fill);
    }
    chart.legend(&[("excitatory", "#d62728"), ("inhibitory", "#1f77b4")]);
    chart.render()
}

pub fn membrane_traces(traj: &Trajectory, neurons: &[usize], title: &str) -> String {
    let neurons: Vec<usize> = neurons.iter().copied().filter(|&i| i < traj.n()).collect();
    let y = range_of(
        neurons
            .iter()
            .flat_map(|&i| traj.trace(i))
            .map(|v| v as f64),
    );
    let y = if y.0.is_finite() { y } else { (0.0, 1.0) };
    let mut chart = Chart::new(
        title,
        "time step",
        "membrane potential",
        (0.0, traj.horizon as f64),
        y,
    );
    let mut legend = Vec::new();
    let labels: Vec<String> = neurons.iter().map(|i| format!("neuron {i}")).collect();
    for (k, &i) in neurons.iter().enumerate() {
        let pts: Vec<(f64, f64)> = traj
            .trace(i)
            .iter()
            .enumerate()
            .map(|(t, &v)| (t as f64, v as f64))
            .collect();
        let color = PALETTE[k % PALETTE.len()];
        chart.polyline(&pts, color);
        legend.push((labels[k].as_str(), color));
    }
    chart.legend(&legend);
    chart.render()
}

/// Spike raster; consecutive spikes of a neuron are merged into one bar.
pub fn spike_raster(raster: &SpikeRaster, title: &str) -> String {
    let mut chart = Chart::new(
        title,
        "time step",
        "neuron",
        (1.0, raster.rows().max(1) as f64 + 1.0),
        (0.0, raster.n().max(1) as f64),
    );
    for i in 0..raster.n() {
        let mut t = 0;
        while t < raster.rows() {
            if !raster.get(t, i) {
                t += 1;
                continue;
            }
            let start = t;
            while t < raster.rows() && raster.get(t, i) {
                t += 1;
            }
            chart.cell(
                start as f64 + 1.0,
                i as f64 + 0.1,
                t as f64 + 1.0,
                i as f64 + 0.9,
                "black",
            );
        }
    }
    chart.render()
}

pub fn delay_scatter(points: &[(i128, i128)], tau: usize, title: &str) -> String {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(a, b)| (a as f64, b as f64)).collect();
    let r = range_of(pts.iter().flat_map(|&(a, b)| [a, b]));
    let r = if r.0.is_finite() { r } else { (0.0, 1.0) };
    let mut chart = Chart::new(title, "v(t)", &format!("v(t + {tau})"), r, r);
    chart.polyline(&pts, "#cccccc");
    chart.points(&pts, "#1f77b4", 2.5);
    chart.render()
}

/// A summary statistic against bit width, one line per labelled series.
pub fn metric_vs_bits(series: &[(&str, Vec<(f64, f64)>)], title: &str, y_label: &str) -> String {
    let x = range_of(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)));
    let mut y = range_of(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)));
    y.0 = y.0.min(0.0);
    let x = if x.0.is_finite() { x } else { (0.0, 1.0) };
    let y = if y.1.is_finite() {
        (y.0, y.1 * 1.05)
    } else {
        (0.0, 1.0)
    };
    let mut chart = Chart::new(title, "bit width", y_label, x, y);
    let mut legend = Vec::new();
    for (k, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        chart.polyline(pts, color);
        chart.points(pts, color, 3.5);
        legend.push((*label, color));
    }
    if series.len() > 1 {
        chart.legend(&legend);
    }
    chart.render()
}

pub fn firing_rate_series(rows: &[SummaryRow]) -> Vec<(f64, f64)> {
    rows.iter()
        .map(|r| (r.bits as f64, r.mean_firing_rate))
        .collect()
}

pub fn cycle_series(rows: &[SummaryRow]) -> Vec<(f64, f64)> {
    rows.iter()
        .filter_map(|r| r.median_cycle.map(|m| (r.bits as f64, m)))
        .collect()
}
