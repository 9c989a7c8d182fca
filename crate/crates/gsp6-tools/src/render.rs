//! Text and SVG drawings of the region `A(lambda)`: `mu2` runs horizontally,
//! `mu1` vertically, with a dashed box around the marked lattice points.

use gsp6_core::branching::RegionA;
use std::fmt::Write;

fn bbox(r: &RegionA) -> (i64, i64, i64, i64) {
    let m1: Vec<i64> = r.points.iter().map(|p| p.0).collect();
    let m2: Vec<i64> = r.points.iter().map(|p| p.1).collect();
    (
        *m2.iter().min().unwrap_or(&0),
        *m2.iter().max().unwrap_or(&0),
        *m1.iter().min().unwrap_or(&0),
        *m1.iter().max().unwrap_or(&0),
    )
}

/// One row per `mu1` from the top down. `*` marks a point, `.` an empty
/// lattice point inside the box, and the box is drawn with `-`/`:`.
pub fn region_ascii(r: &RegionA) -> String {
    let (x0, x1, y0, y1) = bbox(r);
    let width = (x1 + 2) as usize;
    let cell = |x: i64| 6 + 3 * x as usize;
    let mut out = String::new();
    let _ = writeln!(out, "A{:?}: {} points, k in {:?}, r = {}", r.lambda.entries(), r.points.len(), r.k_values, r.r);
    let _ = writeln!(out, "mu1");
    let hline = |out: &mut String| {
        let mut s = vec![b' '; cell(width as i64)];
        let (a, b) = (cell(x0) - 2, cell(x1) + 2);
        for (i, c) in s.iter_mut().enumerate().take(b + 1).skip(a) {
            *c = if (i - a) % 2 == 0 { b'-' } else { b' ' };
        }
        let _ = writeln!(out, "{}", String::from_utf8(s).unwrap().trim_end());
    };
    for y in (0..=y1 + 1).rev() {
        if y == y1 {
            hline(&mut out);
        }
        let mut s = vec![b' '; cell(width as i64)];
        let label = format!("{y:>3} |");
        s[..label.len()].copy_from_slice(label.as_bytes());
        if (y0..=y1).contains(&y) {
            s[cell(x0) - 2] = b':';
            s[cell(x1) + 2] = b':';
            for x in x0..=x1 {
                s[cell(x)] = if r.points.contains(&(y, x)) { b'*' } else { b'.' };
            }
        }
        let _ = writeln!(out, "{}", String::from_utf8(s).unwrap().trim_end());
        if y == y0 {
            hline(&mut out);
        }
    }
    let mut axis = String::from("    +");
    axis.push_str(&"-".repeat(cell(width as i64) - 5));
    let _ = writeln!(out, "{axis} mu2");
    let mut ticks = vec![b' '; cell(width as i64) + 2];
    for x in 0..=x1 + 1 {
        let t = x.to_string();
        let at = cell(x);
        ticks[at..at + t.len()].copy_from_slice(t.as_bytes());
    }
    let _ = writeln!(out, "{}", String::from_utf8(ticks).unwrap().trim_end());
    out
}

/// A standalone SVG 1.1 document.
pub fn region_svg(r: &RegionA) -> String {
    let (x0, x1, y0, y1) = bbox(r);
    let unit = 32.0;
    let margin = 48.0;
    let (xmax, ymax) = ((x1 + 1) as f64, (y1 + 1) as f64);
    let w = margin * 2.0 + xmax * unit;
    let h = margin * 2.0 + ymax * unit;
    let px = |x: f64| margin + x * unit;
    let py = |y: f64| h - margin - y * unit;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" baseProfile="full" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, "  <title>A({}) : {} points</title>", join(r.lambda.entries()), r.points.len());
    let _ = writeln!(s, r#"  <g stroke="black" stroke-width="1.5" fill="none">"#);
    let _ = writeln!(s, r#"    <line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, px(0.0), py(0.0), px(xmax), py(0.0));
    let _ = writeln!(s, r#"    <line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, px(0.0), py(0.0), px(0.0), py(ymax));
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(s, r#"  <g font-family="serif" font-size="14" text-anchor="middle">"#);
    let _ = writeln!(s, r#"    <text x="{}" y="{}">μ₂</text>"#, px(xmax) + 16.0, py(0.0) + 5.0);
    let _ = writeln!(s, r#"    <text x="{}" y="{}">μ₁</text>"#, px(0.0), py(ymax) - 10.0);
    for x in 0..=x1 {
        let _ = writeln!(s, r#"    <text x="{}" y="{}">{x}</text>"#, px(x as f64), py(0.0) + 18.0);
    }
    for y in 0..=y1 {
        let _ = writeln!(s, r#"    <text x="{}" y="{}">{y}</text>"#, px(0.0) - 16.0, py(y as f64) + 5.0);
    }
    let _ = writeln!(s, "  </g>");
    let pad = 0.5;
    let _ = writeln!(
        s,
        r#"  <rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="gray" stroke-dasharray="6,4"/>"#,
        px(x0 as f64 - pad),
        py(y1 as f64 + pad),
        (x1 - x0) as f64 * unit + 2.0 * pad * unit,
        (y1 - y0) as f64 * unit + 2.0 * pad * unit
    );
    let _ = writeln!(s, r#"  <g fill="black">"#);
    for &(m1, m2) in &r.points {
        let _ = writeln!(s, r#"    <circle cx="{}" cy="{}" r="4"/>"#, px(m2 as f64), py(m1 as f64));
    }
    let _ = writeln!(s, "  </g>");
    s.push_str("</svg>\n");
    s
}

fn join(xs: &[i64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use gsp6_core::branching::{c3, region_a};

    #[test]
    fn ascii_marks_every_point() {
        let r = region_a(&c3([9, 6, 2]));
        let text = region_ascii(&r);
        let body: String = text.lines().skip(1).collect();
        assert_eq!(body.matches('*').count(), 15);
        let origin = region_ascii(&region_a(&c3([0, 0, 0])));
        assert_eq!(origin.lines().skip(1).collect::<String>().matches('*').count(), 1);
    }

    #[test]
    fn svg_markers() {
        let s = region_svg(&region_a(&c3([9, 6, 2])));
        assert_eq!(s.matches("<circle").count(), 15);
        assert!(s.contains("stroke-dasharray"));
    }
}
