//! SVG 1.1 scenes of instances, selections and decompositions.
//!
//! Coordinates stay exact until emission, where they are rounded to nine
//! decimal digits. The y axis is flipped so the picture reads with y up.

use std::fmt::Write as _;

use crate::decomposition::{DecompositionResult, SeparatingEdge};
use crate::feasibility::cover_free_region;
use crate::geometry::{ConvexPolygon, Point, Scalar};
use crate::instances::Instance;

const DIGITS: u32 = 9;

/// Optional layers drawn over the objects.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overlay<'a> {
    pub selection: Option<&'a [usize]>,
    /// Shade cover-free regions of the selection (all objects if none).
    pub cover_free: bool,
    pub decomposition: Option<&'a DecompositionResult>,
    pub separators: &'a [SeparatingEdge],
}

fn num(s: &Scalar) -> String {
    s.to_decimal(DIGITS)
}

fn xy(p: &Point) -> String {
    format!("{},{}", num(&p.x), num(&-&p.y))
}

fn polygon(out: &mut String, poly: &ConvexPolygon, attrs: &str) {
    let pts: Vec<String> = poly.vertices().iter().map(xy).collect();
    let _ = writeln!(out, "    <polygon {attrs}points=\"{}\"/>", pts.join(" "));
}

fn line(out: &mut String, class: &str, a: &Point, b: &Point) {
    let _ = writeln!(
        out,
        "    <line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
        num(&a.x),
        num(&-&a.y),
        num(&b.x),
        num(&-&b.y)
    );
}

fn bounds(polys: &[ConvexPolygon], points: &[Point]) -> (Scalar, Scalar, Scalar, Scalar) {
    let mut xs: Vec<Scalar> = Vec::new();
    let mut ys: Vec<Scalar> = Vec::new();
    for p in polys {
        let (x0, y0, x1, y1) = p.bbox();
        xs.extend([x0, x1]);
        ys.extend([y0, y1]);
    }
    for p in points {
        xs.push(p.x.clone());
        ys.push(p.y.clone());
    }
    let lo = |v: &[Scalar]| v.iter().cloned().reduce(Scalar::min_of).unwrap_or_else(Scalar::zero);
    let hi = |v: &[Scalar]| v.iter().cloned().reduce(Scalar::max_of).unwrap_or_else(Scalar::one);
    (lo(&xs), lo(&ys), hi(&xs), hi(&ys))
}

pub fn render(instance: &Instance, overlay: &Overlay<'_>) -> String {
    let polys = instance.polygons();
    let points: &[Point] = match instance {
        Instance::Cover(c) => &c.points,
        Instance::Domination(_) => &[],
    };
    let (x0, y0, x1, y1) = bounds(&polys, points);
    let span = Scalar::max_of(&x1 - &x0, &y1 - &y0);
    let span = if span.is_positive() { span } else { Scalar::one() };
    let margin = &span / &Scalar::from_int(20);
    let stroke = &span / &Scalar::from_int(400);
    let radius = &span / &Scalar::from_int(150);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        num(&(&x0 - &margin)),
        num(&(-&y1 - &margin)),
        num(&(&(&x1 - &x0) + &(&margin + &margin))),
        num(&(&(&y1 - &y0) + &(&margin + &margin)))
    );
    let sw = num(&stroke);

    let _ = writeln!(
        out,
        "  <g id=\"objects\" fill=\"#cfd8e3\" fill-opacity=\"0.25\" stroke=\"#4a5563\" stroke-width=\"{sw}\">"
    );
    for (i, p) in polys.iter().enumerate() {
        polygon(&mut out, p, &format!("data-index=\"{i}\" "));
    }
    out.push_str("  </g>\n");

    if let Some(sel) = overlay.selection {
        let _ = writeln!(
            out,
            "  <g id=\"selection\" fill=\"#3b7dd8\" fill-opacity=\"0.3\" stroke=\"#1c4f99\" stroke-width=\"{}\">",
            num(&(&stroke + &stroke))
        );
        for &i in sel {
            polygon(&mut out, &polys[i], &format!("data-index=\"{i}\" "));
        }
        out.push_str("  </g>\n");
    }

    if overlay.cover_free {
        let all: Vec<usize> = (0..polys.len()).collect();
        let sel = overlay.selection.unwrap_or(&all);
        out.push_str("  <g id=\"cover-free\" fill=\"#e59a2f\" fill-opacity=\"0.6\" stroke=\"none\">\n");
        for &i in sel {
            for cell in cover_free_region(i, sel, &polys).cells() {
                polygon(&mut out, cell, &format!("data-index=\"{i}\" "));
            }
        }
        out.push_str("  </g>\n");
    }

    if let Some(dec) = overlay.decomposition {
        let _ = writeln!(
            out,
            "  <g id=\"pieces\" fill=\"none\" stroke=\"#2f8f4e\" stroke-width=\"{sw}\" stroke-dasharray=\"{} {}\">",
            num(&(&stroke * &Scalar::from_int(4))),
            num(&(&stroke * &Scalar::from_int(2)))
        );
        for (i, t) in dec.tilde.iter().enumerate() {
            polygon(&mut out, t, &format!("data-index=\"{i}\" "));
        }
        out.push_str("  </g>\n");
        let _ = writeln!(
            out,
            "  <g id=\"chords\" stroke=\"#c0392b\" stroke-width=\"{}\">",
            num(&(&stroke + &stroke))
        );
        for rec in &dec.phase_log {
            for c in &rec.chords {
                line(&mut out, "chord", &c.p1, &c.p2);
            }
        }
        out.push_str("  </g>\n");
    }

    if !overlay.separators.is_empty() {
        let _ = writeln!(
            out,
            "  <g id=\"separators\" stroke=\"#8e44ad\" stroke-width=\"{}\">",
            num(&(&stroke * &Scalar::from_int(3)))
        );
        for e in overlay.separators {
            line(&mut out, "separator", &e.p, &e.q);
        }
        out.push_str("  </g>\n");
    }

    if !points.is_empty() {
        out.push_str("  <g id=\"points\" fill=\"#111111\">\n");
        let r = num(&radius);
        for p in points {
            let _ = writeln!(
                out,
                "    <circle cx=\"{}\" cy=\"{}\" r=\"{r}\"/>",
                num(&p.x),
                num(&-&p.y)
            );
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::disjoint_union_decomposition;
    use crate::instances::CoverInstance;

    fn two_squares() -> Instance {
        let objects = vec![ConvexPolygon::rect_i(0, 0, 2, 2), ConvexPolygon::rect_i(1, 1, 3, 3)];
        let points = vec![Point::rat(1, 3, 1, 2), Point::int(3, 3)];
        Instance::Cover(CoverInstance::new(objects, points).unwrap())
    }

    #[test]
    fn plain_drawing() {
        let svg = render(&two_squares(), &Overlay::default());
        assert!(svg.contains("id=\"objects\""));
        assert!(!svg.contains("id=\"selection\""));
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 2);
        // y is negated and 1/3 rounds to nine digits.
        assert!(svg.contains("cx=\"0.333333333\" cy=\"-0.5\""));
        assert!(svg.contains("points=\"0,0 2,0 2,-2 0,-2\""));
    }

    #[test]
    fn decomposition_layers() {
        let inst = two_squares();
        let dec = disjoint_union_decomposition(&inst.polygons()).unwrap();
        let chords: usize = dec.phase_log.iter().map(|r| r.chords.len()).sum();
        let sel = [0, 1];
        let overlay = Overlay {
            selection: Some(&sel),
            cover_free: true,
            decomposition: Some(&dec),
            separators: &[],
        };
        let svg = render(&inst, &overlay);
        assert_eq!(svg.matches("class=\"chord\"").count(), chords);
        assert!(svg.contains("id=\"cover-free\""));
        assert_eq!(svg, render(&inst, &overlay));
    }
}
