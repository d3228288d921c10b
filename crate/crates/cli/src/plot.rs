//! Minimal SVG scatter plots of bench records.

use std::fmt::Write as _;

use crate::bench::{BenchRecord, Method};
use crate::CliError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;

#[derive(Clone, Debug)]
pub struct PlotSpec {
    pub x: String,
    pub y: String,
    pub log_y: bool,
    pub title: Option<String>,
}

/// Numeric CSV column of a record.
pub fn column(r: &BenchRecord, name: &str) -> Result<f64, CliError> {
    Ok(match name {
        "n" => r.n as f64,
        "m" => r.m as f64,
        "leaves" => r.leaves as f64,
        "jumps" => r.jumps as f64,
        "elapsed_ms" => r.elapsed_ms as f64,
        _ => {
            return Err(CliError::Usage(format!(
                "`{name}` is not a numeric column (n, m, leaves, jumps, elapsed_ms)"
            )))
        }
    })
}

fn color(m: Method) -> &'static str {
    match m {
        Method::Unger => "#d62728",
        Method::Chrono => "#1f77b4",
        Method::Dpll => "#2ca02c",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// One circle per record, colored by method.
pub fn scatter_svg(records: &[BenchRecord], spec: &PlotSpec) -> Result<String, CliError> {
    let mut pts = Vec::with_capacity(records.len());
    for r in records {
        let x = column(r, &spec.x)?;
        let mut y = column(r, &spec.y)?;
        if spec.log_y {
            y = (y.max(0.0) + 1.0).log10();
        }
        pts.push((x, y, r.method));
    }
    let (mut x0, mut x1) = bounds(pts.iter().map(|p| p.0));
    let (mut y0, mut y1) = bounds(pts.iter().map(|p| p.1));
    if x1 <= x0 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if y1 <= y0 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(t) = &spec.title {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(t)
        );
    }
    // axes
    let _ = writeln!(
        s,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let ylabel = if spec.log_y {
            format!("{:.0}", 10f64.powf(yv) - 1.0)
        } else {
            format!("{yv:.0}")
        };
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="11">{xv:.0}</text>"#,
            sx(xv),
            HEIGHT - MARGIN + 16.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="11">{}</text>"#,
            MARGIN - 6.0,
            sy(yv) + 4.0,
            ylabel
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(&spec.x)
    );
    let ytitle = if spec.log_y {
        format!("{} (log scale)", spec.y)
    } else {
        spec.y.clone()
    };
    let _ = writeln!(
        s,
        r#"<text x="16" y="{y}" text-anchor="middle" font-size="13" transform="rotate(-90 16 {y})">{}</text>"#,
        escape(&ytitle),
        y = HEIGHT / 2.0
    );
    let _ = writeln!(s, r#"<g class="points">"#);
    for (x, y, m) in &pts {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}" fill-opacity="0.7"><title>{}</title></circle>"#,
            sx(*x),
            sy(*y),
            color(*m),
            m
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
    .into_finite()
}

trait IntoFinite {
    fn into_finite(self) -> (f64, f64);
}

impl IntoFinite for (f64, f64) {
    fn into_finite(self) -> (f64, f64) {
        if self.0.is_finite() && self.1.is_finite() {
            self
        } else {
            (0.0, 1.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::ColoringValid;

    fn rec(n: usize, leaves: u64) -> BenchRecord {
        BenchRecord {
            instance_id: format!("i{n}"),
            n,
            m: 2 * n,
            method: Method::Chrono,
            outcome: "sat".into(),
            leaves,
            jumps: 0,
            elapsed_ms: 0,
            coloring_valid: ColoringValid::Yes,
            has_witness: true,
        }
    }

    #[test]
    fn one_marker_per_record() {
        let rs = vec![rec(10, 5), rec(20, 50), rec(30, 5000)];
        let spec = PlotSpec {
            x: "n".into(),
            y: "leaves".into(),
            log_y: true,
            title: Some("a < b".into()),
        };
        let svg = scatter_svg(&rs, &spec).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("a &lt; b"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn empty_input_still_draws_axes() {
        let spec = PlotSpec {
            x: "n".into(),
            y: "leaves".into(),
            log_y: false,
            title: None,
        };
        let svg = scatter_svg(&[], &spec).unwrap();
        assert!(svg.contains("<line"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }

    #[test]
    fn unknown_column() {
        let spec = PlotSpec {
            x: "method".into(),
            y: "leaves".into(),
            log_y: false,
            title: None,
        };
        assert!(scatter_svg(&[rec(1, 1)], &spec).is_err());
    }
}
