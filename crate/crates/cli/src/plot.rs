//! Minimal SVG line plot of `v(u)` for one or more traces.

use std::fmt::Write;

use crate::traceio::Row;

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 48.0;
const BOTTOM: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f5fa8", "#c0392b", "#2e8b57", "#8e44ad", "#d68910", "#34495e"];

pub struct Series {
    pub label: String,
    pub rows: Vec<Row>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let span = hi - lo;
    if span <= 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
        let pad = 0.5 * lo.abs().max(1.0);
        (lo - pad, hi + pad)
    } else {
        (lo, hi)
    }
}

/// `sin ϑ₀` recovered from the `s` column, which is `(u − u₀)/sin ϑ₀`.
pub fn sin_theta0(rows: &[Row]) -> Option<f64> {
    let (a, b) = (rows.first()?, rows.last()?);
    let r = (b.u - a.u) / (b.s - a.s);
    (r.is_finite() && r > 0.0).then_some(r)
}

/// Renders the plot. `theta_label` goes under the title.
pub fn render(series: &[Series], theta_label: &str) -> String {
    let all = || series.iter().flat_map(|s| s.rows.iter());
    let (u0, u1) = range(all().map(|r| r.u));
    let (v0, v1) = range(all().map(|r| r.v));
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let px = |u: f64| LEFT + (u - u0) / (u1 - u0) * pw;
    let py = |v: f64| TOP + (v1 - v) / (v1 - v0) * ph;

    let mut o = String::new();
    let _ = writeln!(
        o,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(o, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        o,
        r#"<text x="{:.3}" y="20" text-anchor="middle" font-size="14">loxodrome v(u)</text>"#,
        W / 2.0
    );
    let _ = writeln!(
        o,
        r#"<text x="{:.3}" y="38" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(theta_label)
    );
    // axes along the bottom and left edges of the plot box
    let (bx, by) = (LEFT, TOP + ph);
    let _ = writeln!(
        o,
        r#"<path d="M {bx:.3} {TOP:.3} L {bx:.3} {by:.3} L {:.3} {by:.3}" fill="none" stroke="black"/>"#,
        LEFT + pw
    );
    if v0 < 0.0 && v1 > 0.0 {
        let y = py(0.0);
        let _ = writeln!(
            o,
            r##"<line x1="{bx:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="#bbbbbb" stroke-dasharray="4 3"/>"##,
            LEFT + pw
        );
    }
    let _ = writeln!(o, r#"<text x="{bx:.3}" y="{:.3}" text-anchor="middle">{u0:.4}</text>"#, by + 18.0);
    let _ = writeln!(
        o,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{u1:.4}</text>"#,
        LEFT + pw,
        by + 18.0
    );
    let _ = writeln!(o, r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">u</text>"#, LEFT + pw / 2.0, by + 40.0);
    let _ = writeln!(o, r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{v1:.4}</text>"#, bx - 6.0, TOP + 4.0);
    let _ = writeln!(o, r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{v0:.4}</text>"#, bx - 6.0, by + 4.0);
    let _ = writeln!(o, r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">v</text>"#, bx - 56.0, TOP + ph / 2.0);

    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = s.rows.iter().map(|r| format!("{:.3},{:.3}", px(r.u), py(r.v))).collect();
        let _ = writeln!(
            o,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            o,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end" fill="{color}">{}</text>"#,
            LEFT + pw - 4.0,
            TOP + 14.0 + 14.0 * k as f64,
            escape(&s.label)
        );
    }
    o.push_str("</svg>\n");
    o
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(u: f64, v: f64) -> Row {
        Row { u, v, x: 0.0, y: 0.0, z: 0.0, s: u / 0.5, angle_dev: 0.0 }
    }

    #[test]
    fn flat_series_is_centred() {
        let s = Series { label: "m".into(), rows: vec![row(0.0, 2.0), row(1.0, 2.0)] };
        let svg = render(&[s], "theta0 = pi/2");
        assert!(svg.contains(&format!("{:.3},{:.3}", LEFT, TOP + (H - TOP - BOTTOM) / 2.0)));
    }

    #[test]
    fn theta_from_s_column() {
        let rows = vec![row(0.2, 0.0), row(1.2, 1.0)];
        assert!((sin_theta0(&rows).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn labels_are_escaped() {
        let s = Series { label: "a<b&c".into(), rows: vec![row(0.0, 0.0), row(1.0, 1.0)] };
        assert!(render(&[s], "").contains("a&lt;b&amp;c"));
    }
}
