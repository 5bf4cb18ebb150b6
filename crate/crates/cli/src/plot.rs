//! SVG rendering of envelopes. Disc pictures show the unit circle, fixed
//! points with their axis drawn as an orthogonal arc, and images of
//! solver grids; curve pictures are plain line charts.

use std::collections::BTreeMap;
use std::fmt::Write;

use hypflat_core::hyperbolic::cayley_inverse;
use num_complex::Complex64;
use serde_json::Value;

use crate::args::Style;
use crate::error::{CliError, CliResult};

const STROKE: &str = "#1f4e79";
const ACCENT: &str = "#c0392b";

/// A finished SVG document.
pub fn render(envelope: &Value, style: Style, size: u32) -> CliResult<String> {
    let outputs = envelope.get("outputs").ok_or_else(|| CliError::Schema("not an envelope: no `outputs`".into()))?;
    let command = envelope.pointer("/command/name").and_then(Value::as_str).unwrap_or("envelope");
    let style = match style {
        Style::Auto if curve_points(outputs).is_some() => Style::Curve,
        Style::Auto => Style::Disc,
        s => s,
    };
    let size = size.max(64) as f64;
    let body = match style {
        Style::Curve => {
            let (points, x_label, y_label) =
                curve_points(outputs).ok_or_else(|| CliError::Precondition(format!("{command} output has no curve to plot")))?;
            curve(&points?, x_label, y_label, size)
        }
        _ => disc(outputs, command, size)?,
    };
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
         <title>{command}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    ))
}

fn pair(v: &Value) -> Option<[f64; 2]> {
    Some([v.get(0)?.as_f64()?, v.get(1)?.as_f64()?])
}

type CurveData = (CliResult<Vec<[f64; 2]>>, &'static str, &'static str);

/// `(τ, L)` samples from `cyl-bound --curve`, or a rotation trajectory
/// against its step index.
fn curve_points(outputs: &Value) -> Option<CurveData> {
    let bad = || CliError::Schema("malformed curve samples".into());
    if let Some(c) = outputs.get("curve").and_then(Value::as_array) {
        let pts = c.iter().map(|p| pair(p).ok_or_else(bad)).collect();
        return Some((pts, "τ", "L(τ)"));
    }
    let t = outputs.get("trajectory").and_then(Value::as_array)?;
    let pts = t.iter().enumerate().map(|(k, v)| v.as_f64().map(|y| [k as f64, y]).ok_or_else(bad)).collect();
    Some((pts, "step", "lifted angle"))
}

fn curve(points: &[[f64; 2]], x_label: &str, y_label: &str, size: f64) -> String {
    let margin = 0.12 * size;
    let span = |i: usize| {
        let lo = points.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        }
    };
    let (x0, x1) = span(0);
    let (y0, y1) = span(1);
    let width = size - 2.0 * margin;
    let sx = |x: f64| margin + (x - x0) / (x1 - x0) * width;
    let sy = |y: f64| size - margin - (y - y0) / (y1 - y0) * width;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<path d=\"M{m} {m} V{b} H{r}\" fill=\"none\" stroke=\"black\"/>",
        m = margin,
        b = size - margin,
        r = size - margin
    );
    let font = (0.035 * size).round();
    let text = |s: &mut String, x: f64, y: f64, anchor: &str, t: String| {
        let _ = writeln!(s, "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"{font}\" text-anchor=\"{anchor}\">{t}</text>");
    };
    text(&mut s, margin, size - margin + 1.4 * font, "middle", format!("{x0:.4}"));
    text(&mut s, size - margin, size - margin + 1.4 * font, "middle", format!("{x1:.4}"));
    text(&mut s, margin - 0.3 * font, size - margin, "end", format!("{y0:.4}"));
    text(&mut s, margin - 0.3 * font, margin + 0.3 * font, "end", format!("{y1:.4}"));
    text(&mut s, size / 2.0, size - 0.3 * margin, "middle", x_label.to_string());
    text(&mut s, 0.3 * margin, size / 2.0, "middle", y_label.to_string());
    let path: Vec<String> = points.iter().map(|p| format!("{:.2},{:.2}", sx(p[0]), sy(p[1]))).collect();
    let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"{STROKE}\" stroke-width=\"1.5\"/>", path.join(" "));
    s
}

/// Screen coordinates of the unit disc.
struct Frame {
    centre: f64,
    radius: f64,
}

impl Frame {
    fn at(&self, z: Complex64) -> (f64, f64) {
        (self.centre + self.radius * z.re, self.centre - self.radius * z.im)
    }
}

fn boundary(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

/// The geodesic between two boundary angles: the arc of the circle
/// orthogonal to the unit circle through both, or a diameter.
fn geodesic(frame: &Frame, a: f64, b: f64) -> String {
    let (p, q) = (boundary(a), boundary(b));
    let half = (q / p).arg().abs() / 2.0;
    let (x0, y0) = frame.at(p);
    let (x1, y1) = frame.at(q);
    if (std::f64::consts::FRAC_PI_2 - half).abs() < 1e-6 {
        return format!(
            "<line x1=\"{x0:.3}\" y1=\"{y0:.3}\" x2=\"{x1:.3}\" y2=\"{y1:.3}\" stroke=\"{ACCENT}\" stroke-width=\"1.5\"/>"
        );
    }
    let c = (p + q) / (p + q).norm() / half.cos();
    let cross = ((p - c).conj() * (q - c)).im;
    let r = half.tan() * frame.radius;
    // Screen y points down, so a counterclockwise turn about `c` is a
    // negative SVG sweep.
    let sweep = u8::from(cross < 0.0);
    format!(
        "<path d=\"M{x0:.3} {y0:.3} A{r:.3} {r:.3} 0 0 {sweep} {x1:.3} {y1:.3}\" fill=\"none\" stroke=\"{ACCENT}\" stroke-width=\"1.5\"/>"
    )
}

fn dot(frame: &Frame, z: Complex64, colour: &str, label: &str) -> String {
    let (x, y) = frame.at(z);
    let r = 0.012 * frame.radius / 0.45;
    let mut s = format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r:.2}\" fill=\"{colour}\"/>\n");
    if !label.is_empty() {
        let (lx, ly) = frame.at(z * 1.08);
        let _ =
            writeln!(s, "<text x=\"{lx:.3}\" y=\"{ly:.3}\" font-size=\"{:.0}\" text-anchor=\"middle\">{label}</text>", 4.0 * r);
    }
    s
}

fn disc(outputs: &Value, command: &str, size: f64) -> CliResult<String> {
    let frame = Frame { centre: size / 2.0, radius: 0.45 * size };
    let mut s = format!(
        "<circle cx=\"{c}\" cy=\"{c}\" r=\"{r}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
        c = frame.centre,
        r = frame.radius
    );
    let mut drawn = false;
    if let Some(grid) = outputs.get("grid") {
        s += &grid_image(&frame, grid)?;
        drawn = true;
    }
    if let Some(labels) = outputs.get("labels").and_then(Value::as_array) {
        for l in labels.iter().filter_map(Value::as_f64) {
            s += &dot(&frame, boundary(l), STROKE, "");
        }
        drawn = true;
    }
    if let Some(fp) = outputs.get("fixed_points").filter(|v| !v.is_null()) {
        let angle =
            |k: &str| fp.get(k).and_then(Value::as_f64).ok_or_else(|| CliError::Schema(format!("fixed_points.{k} missing")));
        let (small, big) = (angle("l_small")?, angle("l_big")?);
        s += &geodesic(&frame, small, big);
        s.push('\n');
        s += &dot(&frame, boundary(small), ACCENT, "l₋");
        s += &dot(&frame, boundary(big), ACCENT, "l₊");
        drawn = true;
    }
    if !drawn {
        return Err(CliError::Precondition(format!("{command} output has nothing to draw in the disc")));
    }
    Ok(s)
}

/// Grid lines of a `solve-cr` map, with half-plane values sent to the disc.
fn grid_image(frame: &Frame, grid: &Value) -> CliResult<String> {
    let bad = || CliError::Schema("malformed grid".into());
    let half_plane = match grid.get("model").and_then(Value::as_str) {
        Some("half-plane") => true,
        Some("disc") => false,
        _ => return Err(bad()),
    };
    let rows = grid.get("rows").and_then(Value::as_array).ok_or_else(bad)?;
    let key = |x: f64| (x * 1e9).round() as i64;
    // Screen points keyed by the fixed coordinate, tagged with the free one.
    type Lines = BTreeMap<i64, Vec<(f64, (f64, f64))>>;
    let (mut by_t, mut by_s) = (Lines::new(), Lines::new());
    for row in rows {
        let r: Vec<f64> = row.as_array().ok_or_else(bad)?.iter().filter_map(Value::as_f64).collect();
        let [s, t, re, im] = r[..] else { return Err(bad()) };
        let w = Complex64::new(re, im);
        let z = if half_plane { cayley_inverse(w).map_err(|e| CliError::Precondition(e.to_string()))? } else { w };
        let p = frame.at(z);
        by_t.entry(key(t)).or_default().push((s, p));
        by_s.entry(key(s)).or_default().push((t, p));
    }
    let mut out = String::new();
    for line in by_t.into_values().chain(by_s.into_values()) {
        let mut line = line;
        if line.len() < 2 {
            continue;
        }
        line.sort_by(|a, b| a.0.total_cmp(&b.0));
        let pts: Vec<String> = line.iter().map(|(_, (x, y))| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(out, "<polyline points=\"{}\" fill=\"none\" stroke=\"{STROKE}\" stroke-width=\"0.6\"/>", pts.join(" "));
    }
    Ok(out)
}
