//! Standalone SVG line charts and heatmaps on a fixed 800x600 canvas.
//!
//! Axis ticks sit at the deciles of the data range. Output is a pure function
//! of the input values.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `values[ix * ys.len() + iy]`
    pub values: Vec<f64>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.05 };
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&self, out: &mut String, title: &str, x_label: &str, y_label: &str) {
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let _ = writeln!(
            out,
            r##"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="#000" stroke-width="1"/>"##,
            x1 - x0,
            y0 - y1
        );
        for d in 0..=10 {
            let t = d as f64 / 10.0;
            let xv = self.x.0 + t * (self.x.1 - self.x.0);
            let yv = self.y.0 + t * (self.y.1 - self.y.0);
            let px = self.px(xv);
            let py = self.py(yv);
            let _ = writeln!(
                out,
                r##"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{:.2}" stroke="#000"/><text x="{px:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"##,
                y0 + 5.0,
                y0 + 18.0,
                tick_label(xv)
            );
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="#000"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"##,
                x0 - 5.0,
                x0 - 8.0,
                py + 4.0,
                tick_label(yv)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="28" font-size="16" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            escape(title)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 25.0,
            escape(x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="22" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 22 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(y_label)
        );
    }
}

fn header() -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#fff\"/>\n"
    )
}

impl LineChart {
    pub fn render(&self) -> String {
        let frame = Frame {
            x: range(
                self.series
                    .iter()
                    .flat_map(|s| s.points.iter().map(|p| p.0)),
            ),
            y: range(
                self.series
                    .iter()
                    .flat_map(|s| s.points.iter().map(|p| p.1)),
            ),
        };
        let mut out = header();
        frame.axes(&mut out, &self.title, &self.x_label, &self.y_label);
        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let mut pts = String::new();
            for &(x, y) in s
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
            {
                let _ = write!(pts, "{:.2},{:.2} ", frame.px(x), frame.py(y));
            }
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.trim_end()
            );
            let ly = TOP + 20.0 + 20.0 * k as f64;
            let lx = WIDTH - RIGHT + 15.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}" font-size="12">{}</text>"#,
                lx + 25.0,
                lx + 32.0,
                ly + 4.0,
                escape(&s.name)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Linear ramp through dark blue, teal, and yellow.
fn ramp(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 3] = [
        (68.0, 1.0, 84.0),
        (33.0, 145.0, 140.0),
        (253.0, 231.0, 37.0),
    ];
    let t = t.clamp(0.0, 1.0) * 2.0;
    let (a, b, s) = if t <= 1.0 {
        (STOPS[0], STOPS[1], t)
    } else {
        (STOPS[1], STOPS[2], t - 1.0)
    };
    let mix = |p: f64, q: f64| (p + (q - p) * s).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(a.0, b.0),
        mix(a.1, b.1),
        mix(a.2, b.2)
    )
}

fn cell_edges(centers: &[f64]) -> Vec<f64> {
    let n = centers.len();
    if n == 1 {
        return vec![centers[0] - 0.5, centers[0] + 0.5];
    }
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(centers[0] - (centers[1] - centers[0]) / 2.0);
    for w in centers.windows(2) {
        edges.push((w[0] + w[1]) / 2.0);
    }
    edges.push(centers[n - 1] + (centers[n - 1] - centers[n - 2]) / 2.0);
    edges
}

impl Heatmap {
    pub fn render(&self) -> String {
        let xe = cell_edges(&self.xs);
        let ye = cell_edges(&self.ys);
        let frame = Frame {
            x: (xe[0], xe[xe.len() - 1]),
            y: (ye[0], ye[ye.len() - 1]),
        };
        let (vlo, vhi) = range(self.values.iter().copied());
        let mut out = header();
        let ny = self.ys.len();
        for ix in 0..self.xs.len() {
            for iy in 0..ny {
                let v = self.values[ix * ny + iy];
                let (x0, x1) = (frame.px(xe[ix]), frame.px(xe[ix + 1]));
                let (y0, y1) = (frame.py(ye[iy + 1]), frame.py(ye[iy]));
                let _ = writeln!(
                    out,
                    r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    x1 - x0,
                    y1 - y0,
                    ramp((v - vlo) / (vhi - vlo))
                );
            }
        }
        frame.axes(&mut out, &self.title, &self.x_label, &self.y_label);
        // colour bar with decile labels
        let bx = WIDTH - RIGHT + 30.0;
        let bar_h = HEIGHT - TOP - BOTTOM;
        for d in 0..10 {
            let y = TOP + bar_h * (1.0 - (d + 1) as f64 / 10.0);
            let _ = writeln!(
                out,
                r#"<rect x="{bx}" y="{y:.2}" width="20" height="{:.2}" fill="{}"/>"#,
                bar_h / 10.0,
                ramp((d as f64 + 0.5) / 10.0)
            );
        }
        for d in 0..=10 {
            let t = d as f64 / 10.0;
            let y = TOP + bar_h * (1.0 - t);
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.2}" font-size="11">{}</text>"#,
                bx + 26.0,
                y + 4.0,
                tick_label(vlo + t * (vhi - vlo))
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_is_standalone_and_deterministic() {
        let chart = LineChart {
            title: "a < b & c".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![Series {
                name: "s".into(),
                points: vec![(0.0, 0.0), (0.5, 1.0), (1.0, 0.25)],
            }],
        };
        let svg = chart.render();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(r#"viewBox="0 0 800 600""#));
        assert!(svg.contains("a &lt; b &amp; c"));
        assert!(!svg.contains("href"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg, chart.render());
    }

    #[test]
    fn heatmap_has_one_cell_per_value() {
        let map = Heatmap {
            title: "h".into(),
            x_label: "y1".into(),
            y_label: "y2".into(),
            xs: vec![0.0, 0.5, 1.0],
            ys: vec![0.0, 1.0],
            values: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
        };
        let svg = map.render();
        // 6 cells + 10 colour-bar blocks + background + frame
        assert_eq!(svg.matches("<rect").count(), 6 + 10 + 2);
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp(0.0), "#440154");
        assert_eq!(ramp(1.0), "#fde725");
        assert_eq!(ramp(f64::NAN.max(2.0)), "#fde725");
    }
}
