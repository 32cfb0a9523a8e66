//! Trajectory export: CSV, JSON record and SVG polylines.

use crate::antinorm::ExtReal;
use crate::error::{Error, Result};
use crate::extremal::{CausalType, ExtremalState, Trajectory};
use crate::{AlgebraCovector, AlgebraVector};
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

/// Samples read back from an export, with the multiplier `ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleTable {
    pub nu: u8,
    pub samples: Vec<ExtremalState>,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let Some(first) = traj.samples.first() else {
        return Err(Error::Input("trajectory has no samples".into()));
    };
    let (n, m) = (first.h.dim(), first.g.len());
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("h_{i}")));
    header.extend((1..=n).map(|i| format!("u_{i}")));
    header.extend((1..=m).map(|i| format!("g_{i}")));
    header.extend(["alpha_dual", "causal", "nu"].map(String::from));
    w.write_record(&header).map_err(csv_err)?;
    for s in &traj.samples {
        let mut row = vec![num(s.t)];
        row.extend(s.h.iter().map(|&x| num(x)));
        row.extend(s.u.iter().map(|&x| num(x)));
        row.extend(s.g.iter().map(|&x| num(x)));
        row.push(match s.dual_value {
            ExtReal::Finite(v) => num(v),
            ExtReal::NegInfinity => "-inf".into(),
        });
        row.push(s.causal.as_str().into());
        row.push(traj.nu.to_string());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        k => Error::Input(format!("csv: {k:?}")),
    }
}

pub fn read_csv<R: Read>(input: R) -> Result<SampleTable> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let count = |prefix: &str| header.iter().filter(|h| h.strip_prefix(prefix).is_some_and(|d| d.parse::<usize>().is_ok())).count();
    let (n, g) = (count("h_"), count("g_"));
    let expected = 1 + 2 * n + g + 3;
    if header.first().map(String::as_str) != Some("t") || count("u_") != n || header.len() != expected {
        return Err(Error::Input(format!("unexpected CSV header: {}", header.join(","))));
    }
    let mut nu = None;
    let mut samples = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let bad = |what: &str| Error::Input(format!("row {}: bad {what}", line + 2));
        if rec.len() != expected {
            return Err(bad("field count"));
        }
        let f = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(&header[i]));
        let vals = |a: usize, len: usize| (a..a + len).map(f).collect::<Result<Vec<f64>>>();
        let dual_value = match &rec[expected - 3] {
            "-inf" => ExtReal::NegInfinity,
            _ => ExtReal::Finite(f(expected - 3)?),
        };
        let row_nu: u8 = rec[expected - 1].parse().map_err(|_| bad("nu"))?;
        if *nu.get_or_insert(row_nu) != row_nu {
            return Err(bad("nu (changes between rows)"));
        }
        samples.push(ExtremalState {
            t: f(0)?,
            h: AlgebraCovector::new(vals(1, n)?),
            u: AlgebraVector::new(vals(1 + n, n)?),
            g: vals(1 + 2 * n, g)?,
            dual_value,
            causal: CausalType::parse(&rec[expected - 2]).ok_or_else(|| bad("causal"))?,
        });
    }
    Ok(SampleTable { nu: nu.unwrap_or(1), samples })
}

pub fn write_record<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, traj).map_err(|e| Error::Input(format!("json: {e}")))
}

pub fn read_record<R: Read>(input: R) -> Result<Trajectory> {
    serde_json::from_reader(input).map_err(|e| Error::Input(format!("json: {e}")))
}

/// Reads a `.csv` or `.json` trajectory file.
pub fn read_trajectory_file(path: &Path) -> Result<SampleTable> {
    let file = std::fs::File::open(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => read_csv(file),
        Some("json") => read_record(file).map(|t| SampleTable { nu: t.nu, samples: t.samples }),
        _ => Err(Error::Input(format!("{}: expected a .csv or .json trajectory", path.display()))),
    }
}

pub fn causal_color(c: CausalType) -> &'static str {
    match c {
        CausalType::TimeLike => "#1f77b4",
        CausalType::LightLike => "#d62728",
        CausalType::SubRiemannianAbnormal => "#2ca02c",
    }
}

/// Polyline of group coordinates `(i, j)`, one `<polyline>` per causal arc.
pub fn svg_projection(samples: &[ExtremalState], projection: (usize, usize), title: &str) -> Result<String> {
    let (i, j) = projection;
    let m = samples.first().map_or(0, |s| s.g.len());
    if i >= m || j >= m {
        return Err(Error::Input(format!("projection ({i}, {j}) out of range for {m} group coordinates")));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.g[i], s.g[j])).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let (size, margin) = (600.0, 30.0);
    let scale = (size - 2.0 * margin) / span;
    let map = |(x, y): (f64, f64)| (margin + (x - x0) * scale, size - margin - (y - y0) * scale);

    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#).ok();
    writeln!(svg, "<title>{}</title>", title.replace('&', "&amp;").replace('<', "&lt;")).ok();
    writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).ok();
    let mut start = 0;
    while start < samples.len() {
        let tag = samples[start].causal;
        let mut end = start;
        while end + 1 < samples.len() && samples[end + 1].causal == tag {
            end += 1;
        }
        // arcs share their junction sample so the curve stays connected
        let last = (end + 1).min(samples.len() - 1);
        let coords: Vec<String> = pts[start..=last].iter().map(|&p| {
            let (x, y) = map(p);
            format!("{x:.3},{y:.3}")
        }).collect();
        writeln!(svg, r#"<polyline class="{tag}" fill="none" stroke="{}" stroke-width="2" points="{}"/>"#, causal_color(tag), coords.join(" ")).ok();
        start = end + 1;
    }
    writeln!(svg, r#"<text x="{margin}" y="20" font-family="sans-serif" font-size="12">g{} vs g{}</text>"#, i + 1, j + 1).ok();
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{ConservedReport, Switch};

    fn traj() -> Trajectory {
        let s = |t: f64, c| ExtremalState {
            t,
            g: vec![t, -t / 3.0, 0.1 * t],
            h: AlgebraCovector::new(vec![-1.0 / 3.0, 2f64.sqrt(), 1e-300]),
            u: AlgebraVector::new(vec![std::f64::consts::PI, 0.0, -0.0]),
            causal: c,
            dual_value: if t > 0.5 { ExtReal::NegInfinity } else { ExtReal::Finite(1.0 / 7.0) },
        };
        Trajectory {
            nu: 0,
            dt: 0.25,
            samples: vec![s(0.0, CausalType::LightLike), s(0.25, CausalType::LightLike), s(0.75, CausalType::SubRiemannianAbnormal)],
            switches: vec![Switch { t: 0.75, from: CausalType::LightLike, to: CausalType::SubRiemannianAbnormal }],
            conserved: ConservedReport::default(),
            truncated: None,
        }
    }

    #[test]
    fn csv_round_trip() {
        let t = traj();
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,h_1,h_2,h_3,u_1,u_2,u_3,g_1,g_2,g_3,alpha_dual,causal,nu\n"));
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(back, SampleTable { nu: 0, samples: t.samples });
    }

    #[test]
    fn record_round_trip() {
        let t = traj();
        let mut buf = Vec::new();
        write_record(&t, &mut buf).unwrap();
        assert_eq!(read_record(&buf[..]).unwrap(), t);
    }

    #[test]
    fn svg_arcs() {
        let svg = svg_projection(&traj().samples, (0, 1), "demo").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg_projection(&traj().samples, (0, 3), "demo").is_err());
    }
}
