//! Atomic file output, stderr diagnostics and the SVG line plot.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[derive(Serialize)]
struct Diagnostic<'a, D: Serialize> {
    level: &'a str,
    command: &'a str,
    #[serde(flatten)]
    detail: D,
}

/// One JSON object per line on stderr.
pub fn diagnostic<D: Serialize>(level: &str, command: &str, detail: D) {
    let line = serde_json::to_string(&Diagnostic {
        level,
        command,
        detail,
    })
    .unwrap_or_else(|e| {
        format!(r#"{{"level":"error","message":"unserializable diagnostic: {e}"}}"#)
    });
    eprintln!("{line}");
}

pub struct Series {
    pub label: String,
    /// `(n, value)`; non-positive and non-finite values are left out.
    pub points: Vec<(f64, f64)>,
}

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// A static SVG 1.1 line chart with a log-scale y axis.
pub fn line_plot_svg(title: &str, x_label: &str, series: &[Series]) -> String {
    let (w, h) = (640.0, 400.0);
    let (left, right, top, bottom) = (70.0, 170.0, 40.0, 50.0);
    let pts = || {
        series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|(_, y)| y.is_finite() && *y > 0.0)
    };
    let (mut x0, mut x1) = pts().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (x, _)| {
        (a.min(*x), b.max(*x))
    });
    let (mut e0, mut e1) = pts().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (_, y)| {
        (a.min(y.log10().floor()), b.max(y.log10().ceil()))
    });
    if !x0.is_finite() {
        (x0, x1, e0, e1) = (0.0, 1.0, -1.0, 0.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if e1 <= e0 {
        e1 = e0 + 1.0;
    }
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let py = |y: f64| top + (e1 - y.log10()) / (e1 - e0) * (h - top - bottom);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        (left + w - right) / 2.0,
        escape(title)
    );
    let (gx0, gx1, gy0, gy1) = (left, w - right, top, h - bottom);
    let _ = writeln!(
        s,
        r#"<rect x="{gx0}" y="{gy0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        gx1 - gx0,
        gy1 - gy0
    );
    let step = ((e1 - e0) / 8.0).ceil().max(1.0);
    let mut e = e0;
    while e <= e1 {
        let y = py(10f64.powf(e));
        let _ = writeln!(
            s,
            r##"<line x1="{gx0}" y1="{y:.2}" x2="{gx1}" y2="{y:.2}" stroke="#ddd"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">1e{}</text>"#,
            gx0 - 6.0,
            y + 4.0,
            e as i64
        );
        e += step;
    }
    let xstep = ((x1 - x0) / 10.0).ceil().max(1.0);
    let mut x = x0;
    while x <= x1 {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{x}</text>"#,
            px(x),
            gy1 + 16.0
        );
        x += xstep;
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        (gx0 + gx1) / 2.0,
        h - 12.0,
        escape(x_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = ser
            .points
            .iter()
            .filter(|(_, y)| y.is_finite() && *y > 0.0)
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        if !path.is_empty() {
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
        }
        let ly = top + 16.0 * i as f64 + 8.0;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            gx1 + 10.0,
            gx1 + 30.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            gx1 + 35.0,
            ly + 4.0,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"a").unwrap();
        write_atomic(&p, b"bc").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"bc");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn plot_is_well_formed() {
        let s = line_plot_svg(
            "d < e",
            "n",
            &[Series {
                label: "rho".into(),
                points: vec![(1.0, 1.0), (2.0, 0.5), (3.0, 0.0), (4.0, f64::INFINITY)],
            }],
        );
        assert!(s.contains(r#"version="1.1""#));
        assert!(s.contains("d &lt; e"));
        assert_eq!(s.matches("<polyline").count(), 1);
        assert!(s.trim_end().ends_with("</svg>"));
    }
}
