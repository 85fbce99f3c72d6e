//! CSV tables and a minimal SVG line chart.
//!
//! Floats are written with `{:?}`, the shortest string that parses back to
//! the same `f64`. Missing values are empty fields.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;

/// One row of a dimension scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub n: usize,
    pub sigma_n: f64,
    pub frob_inv_reciprocal: f64,
    /// Absent when the parameters fall outside the bound's hypotheses.
    pub omega: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub const SCAN_HEADER: [&str; 6] = [
    "n",
    "sigma_n",
    "frob_inv_reciprocal",
    "omega",
    "iterations",
    "converged",
];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Writes a header and records as RFC-4180 CSV.
pub fn write_csv<R, I>(path: &Path, header: &[&str], records: I) -> anyhow::Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    w.write_record(header)?;
    for r in records {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_scan_csv(path: &Path, rows: &[ScanRow]) -> anyhow::Result<()> {
    write_csv(
        path,
        &SCAN_HEADER,
        rows.iter().map(|r| {
            [
                r.n.to_string(),
                fmt_f64(r.sigma_n),
                fmt_f64(r.frob_inv_reciprocal),
                fmt_opt(r.omega),
                r.iterations.to_string(),
                r.converged.to_string(),
            ]
        }),
    )
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    dash: Option<&'a str>,
    points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(ch),
        }
    }
    out
}

/// Line chart of the three scan series against `n` on a log axis.
pub fn scan_svg(title: &str, rows: &[ScanRow]) -> String {
    let series = [
        Series {
            label: "sigma_n",
            color: "#1f77b4",
            dash: None,
            points: rows.iter().map(|r| (r.n as f64, r.sigma_n)).collect(),
        },
        Series {
            label: "1/||A^-1||_F",
            color: "#d62728",
            dash: Some("6 3"),
            points: rows
                .iter()
                .map(|r| (r.n as f64, r.frob_inv_reciprocal))
                .collect(),
        },
        Series {
            label: "omega",
            color: "#2ca02c",
            dash: Some("2 3"),
            points: rows
                .iter()
                .filter_map(|r| r.omega.map(|w| (r.n as f64, w)))
                .collect(),
        },
    ];
    line_chart(title, &series)
}

fn line_chart(title: &str, series: &[Series]) -> String {
    let finite = || {
        series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|(x, y)| x.is_finite() && *x > 0.0 && y.is_finite())
    };
    let (mut x0, mut x1) = finite().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.0), hi.max(p.0))
    });
    let (mut y0, mut y1) = finite().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.1), hi.max(p.1))
    });
    if !x0.is_finite() {
        (x0, x1) = (1.0, 10.0);
        (y0, y1) = (0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 * 10.0;
    }
    let span = y1 - y0;
    if span <= 0.0 {
        let pad = 0.5 * y0.abs().max(1.0);
        y0 -= pad;
        y1 += pad;
    } else {
        y0 -= 0.05 * span;
        y1 += 0.05 * span;
    }
    let (lx0, lx1) = (x0.log10(), x1.log10());
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x.log10() - lx0) / (lx1 - lx0) * plot_w;
    let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );

    // axes
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT} {TOP} V{:.1} H{:.1}" fill="none" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w
    );
    let mut decade = lx0.floor() as i32;
    while f64::from(decade) <= lx1 {
        let v = 10f64.powi(decade);
        if v >= x0 * (1.0 - 1e-12) {
            let x = px(v);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/>"#,
                TOP + plot_h,
                TOP + plot_h + 5.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{v}</text>"#,
                TOP + plot_h + 18.0
            );
        }
        decade += 1;
    }
    for k in 0..=4 {
        let v = y0 + (y1 - y0) * f64::from(k) / 4.0;
        let y = py(v);
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{LEFT}" y2="{y:.1}" stroke="black"/>"#,
            LEFT - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.4}</text>"#,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">n</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0:.1}" text-anchor="middle" transform="rotate(-90 20 {0:.1})">value</text>"#,
        TOP + plot_h / 2.0
    );

    for (k, ser) in series.iter().enumerate() {
        let pts: Vec<String> = ser
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && *x > 0.0 && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let dash = ser
            .dash
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"><title>{}</title></polyline>"#,
            ser.color,
            pts.join(" "),
            escape(ser.label)
        );
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = LEFT + plot_w + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="1.5"{dash}/>"#,
            lx + 25.0,
            ser.color
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 32.0,
            ly + 4.0,
            escape(ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<ScanRow> {
        [10, 100, 1000]
            .iter()
            .map(|&n| ScanRow {
                n,
                sigma_n: 3.0,
                frob_inv_reciprocal: 2.0 / (n as f64).sqrt(),
                omega: Some(1.5),
                iterations: 4,
                converged: true,
            })
            .collect()
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 12345.678, 2.0] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(1.125), "1.125");
    }

    #[test]
    fn svg_has_three_polylines_and_labels() {
        let svg = scan_svg("a < b & c", &rows());
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains(">n</text>"));
        assert!(svg.contains(">value</text>"));
        assert!(svg.contains("a &lt; b &amp; c"));
    }

    #[test]
    fn svg_handles_constant_and_missing_series() {
        let mut r = rows();
        for row in &mut r {
            row.frob_inv_reciprocal = 3.0;
            row.omega = None;
        }
        let svg = scan_svg("flat", &r);
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
        let empty = scan_svg("empty", &[]);
        assert_eq!(empty.matches("<polyline").count(), 3);
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.csv");
        let mut r = rows();
        r[1].omega = None;
        write_scan_csv(&path, &r).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.split("\r\n").collect();
        assert_eq!(lines[0], SCAN_HEADER.join(","));
        assert_eq!(lines[1], "10,3.0,0.6324555320336759,1.5,4,true");
        assert_eq!(lines[2], "100,3.0,0.2,,4,true");
        assert_eq!(lines.len(), 5);
    }
}
