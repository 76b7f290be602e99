//! Deterministic SVG pictures of a window.

use std::fmt::Write;

use flatcurve_core::{HolonomySet, SaddleSegment, Scalar, ZPoint, ZeroWindow};

use crate::args::PlotKind;
use crate::output::cell;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;
const FAN: f64 = 40.0;

/// Fixed three-decimal coordinates with no negative zero.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Slope of a vector: an exact ratio in exact mode, nine decimals otherwise,
/// `inf` when vertical.
fn slope<T: Scalar>(v: &ZPoint<T>) -> String {
    if v.re.is_zero() {
        return "inf".into();
    }
    let s = v.im.clone() / v.re.clone();
    if T::EXACT {
        cell(&s)
    } else {
        num_fixed(s.to_f64())
    }
}

fn num_fixed(x: f64) -> String {
    let s = format!("{x:.9}");
    if s == "-0.000000000" {
        "0.000000000".into()
    } else {
        s
    }
}

pub fn render<T: Scalar>(
    w: &ZeroWindow<T>,
    segs: &[SaddleSegment<T>],
    h: &HolonomySet<T>,
    kind: PlotKind,
) -> String {
    let c = SIZE / 2.0;
    let scale = (c - MARGIN) / w.radius();
    let at = |z: &ZPoint<T>| (c + scale * z.re.to_f64(), c - scale * z.im.to_f64());
    let mut s = String::new();
    let height = SIZE + 40.0;
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        SIZE, height, SIZE, height
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r##"<circle class="window" cx="{}" cy="{}" r="{}" fill="none" stroke="#999999" stroke-width="0.5"/>"##,
        num(c),
        num(c),
        num(scale * w.radius())
    )
    .unwrap();
    if matches!(kind, PlotKind::Saddles | PlotKind::All) {
        writeln!(s, r#"<g class="saddles">"#).unwrap();
        for g in segs {
            let (x1, y1) = at(&w.points()[g.from_idx]);
            let (x2, y2) = at(&w.points()[g.to_idx]);
            let (class, dash) = if g.certified {
                ("saddle", "")
            } else {
                ("saddle provisional", r#" stroke-dasharray="4 3""#)
            };
            writeln!(
                s,
                r##"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" data-slope="{}" stroke="#1f4e79" stroke-width="1"{dash}/>"##,
                num(x1),
                num(y1),
                num(x2),
                num(y2),
                slope(&g.holonomy)
            )
            .unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    if matches!(kind, PlotKind::Hol | PlotKind::All) {
        writeln!(s, r#"<g class="fan">"#).unwrap();
        for v in h.vectors() {
            let n = v.norm();
            let (dx, dy) = (FAN * v.re.to_f64() / n, -FAN * v.im.to_f64() / n);
            writeln!(
                s,
                r##"<line class="tick" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#b03a2e" stroke-width="0.75"/>"##,
                num(c),
                num(c),
                num(c + dx),
                num(c + dy)
            )
            .unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, r#"<g class="zeros">"#).unwrap();
    for z in w.points() {
        let (x, y) = at(z);
        writeln!(
            s,
            r#"<circle class="zero" cx="{}" cy="{}" r="2.5" fill="black"/>"#,
            num(x),
            num(y)
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    let mut legend = format!("R = {}", w.radius());
    if segs.is_empty() {
        legend.push_str("; no saddle connections");
    }
    writeln!(
        s,
        r#"<text class="legend" x="{}" y="{}" font-family="monospace" font-size="14">{legend}</text>"#,
        num(MARGIN),
        num(SIZE + 20.0)
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}
