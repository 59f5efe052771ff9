//! Self-contained SVG heatmaps and line plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 90.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
/// Heatmaps are block-averaged down to at most this many cells per side.
const MAX_CELLS: usize = 200;

/// Dark blue to yellow through teal.
const STOPS: [(f64, [f64; 3]); 4] = [
    (0.0, [68.0, 1.0, 84.0]),
    (0.33, [49.0, 104.0, 142.0]),
    (0.66, [53.0, 183.0, 121.0]),
    (1.0, [253.0, 231.0, 37.0]),
];

fn color(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let k = STOPS.windows(2).position(|w| t <= w[1].0).unwrap_or(STOPS.len() - 2);
    let (t0, c0) = STOPS[k];
    let (t1, c1) = STOPS[k + 1];
    let f = (t - t0) / (t1 - t0);
    let ch = |i: usize| (c0[i] + f * (c1[i] - c0[i])).round() as u8;
    format!("#{:02x}{:02x}{:02x}", ch(0), ch(1), ch(2))
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{}", (v * 1000.0).round() / 1000.0)
    }
}

fn axes(out: &mut String, x: (f64, f64), y: (f64, f64), xlabel: &str, ylabel: &str) {
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let _ = writeln!(out, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for v in ticks(x.0, x.1, 5) {
        let px = LEFT + (v - x.0) / (x.1 - x.0) * pw;
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            label(v)
        );
    }
    for v in ticks(y.0, y.1, 5) {
        let py = TOP + ph - (v - y.0) / (y.1 - y.0) * ph;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            label(v)
        );
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 15.0, escape(xlabel));
    let _ = writeln!(
        out,
        r#"<text transform="translate(18 {}) rotate(-90)" text-anchor="middle">{}</text>"#,
        TOP + ph / 2.0,
        escape(ylabel)
    );
}

fn span(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().filter(|x| x.is_finite()).fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().filter(|x| x.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

/// Row-major `values` over `rows` (drawn on the y axis) and `cols` (x axis).
pub fn heatmap(title: &str, rows: &[f64], cols: &[f64], values: &[f64], ylabel: &str, xlabel: &str) -> String {
    let (nr, nc) = (rows.len(), cols.len());
    let (br, bc) = (nr.div_ceil(MAX_CELLS).max(1), nc.div_ceil(MAX_CELLS).max(1));
    let (mr, mc) = (nr.div_ceil(br), nc.div_ceil(bc));
    let mut cells = vec![0.0; mr * mc];
    for bi in 0..mr {
        for bj in 0..mc {
            let (mut s, mut n) = (0.0, 0.0);
            for i in bi * br..((bi + 1) * br).min(nr) {
                for j in bj * bc..((bj + 1) * bc).min(nc) {
                    s += values[i * nc + j];
                    n += 1.0;
                }
            }
            cells[bi * mc + bj] = s / n;
        }
    }
    let (vmin, vmax) = span(&cells);
    let (x, y) = (span(cols), span(rows));
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let (cw, ch) = (pw / mc as f64, ph / mr as f64);
    // Axes may be stored in decreasing order; place cells by coordinate.
    let col_rev = cols.first() > cols.last();
    let row_rev = rows.first() > rows.last();

    let mut out = String::new();
    header(&mut out, title);
    let _ = writeln!(out, r#"<g shape-rendering="crispEdges">"#);
    for bi in 0..mr {
        let gy = if row_rev { bi } else { mr - 1 - bi };
        for bj in 0..mc {
            let gx = if col_rev { mc - 1 - bj } else { bj };
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                LEFT + gx as f64 * cw,
                TOP + gy as f64 * ch,
                cw + 0.05,
                ch + 0.05,
                color((cells[bi * mc + bj] - vmin) / (vmax - vmin))
            );
        }
    }
    let _ = writeln!(out, "</g>");
    axes(&mut out, x, y, xlabel, ylabel);

    let bar_x = WIDTH - RIGHT + 20.0;
    for k in 0..50 {
        let t = k as f64 / 49.0;
        let _ = writeln!(
            out,
            r#"<rect x="{bar_x}" y="{:.2}" width="16" height="{:.2}" fill="{}"/>"#,
            TOP + ph - (k + 1) as f64 * ph / 50.0,
            ph / 50.0 + 0.05,
            color(t)
        );
    }
    for (t, v) in [(0.0, vmin), (1.0, vmax)] {
        let _ = writeln!(out, r#"<text x="{}" y="{:.2}">{}</text>"#, bar_x + 20.0, TOP + ph - t * ph + 4.0, label(v));
    }
    out.push_str("</svg>\n");
    out
}

/// One polyline per `(name, y)` series over the shared `x`.
pub fn curves(title: &str, x: &[f64], series: &[(&str, &[f64])], xlabel: &str, ylabel: &str) -> String {
    const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    let all: Vec<f64> = series.iter().flat_map(|s| s.1.iter().copied()).collect();
    let (xr, yr) = (span(x), span(&all));
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);

    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, xr, yr, xlabel, ylabel);
    for (k, (name, ys)) in series.iter().enumerate() {
        let c = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = x
            .iter()
            .zip(ys.iter())
            .filter(|(_, y)| y.is_finite())
            .map(|(x, y)| {
                format!("{:.2},{:.2}", LEFT + (x - xr.0) / (xr.1 - xr.0) * pw, TOP + ph - (y - yr.0) / (yr.1 - yr.0) * ph)
            })
            .collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{c}" stroke-width="1.2" points="{}"/>"#, pts.join(" "));
        let ly = TOP + 14.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{c}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            WIDTH - RIGHT + 5.0,
            WIDTH - RIGHT + 20.0,
            WIDTH - RIGHT + 24.0,
            ly + 4.0,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_map_endpoints() {
        assert_eq!(color(0.0), "#440154");
        assert_eq!(color(1.0), "#fde725");
        assert_eq!(color(f64::NAN), "#440154");
    }

    #[test]
    fn heatmap_downsamples_large_grids() {
        let n = 450;
        let axis: Vec<f64> = (0..n).map(|k| k as f64).collect();
        let values: Vec<f64> = (0..n * n).map(|k| k as f64).collect();
        let svg = heatmap("t", &axis, &axis, &values, "y", "x");
        let cells = svg.matches("<rect").count();
        // 150 x 150 blocks + background + frame + colour bar.
        assert_eq!(cells, 150 * 150 + 2 + 50);
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn curves_escape_labels() {
        let svg = curves("a<b", &[0.0, 1.0], &[("s&t", &[0.0, 1.0])], "x", "y");
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains("s&amp;t"));
        assert_eq!(svg.matches("<polyline").count(), 1);
    }
}
