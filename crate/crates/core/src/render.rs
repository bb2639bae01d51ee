//! SVG drawings of laminations in the Poincaré disk.
//!
//! Floating point is used here and nowhere else.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write;

use crate::chord::Chord;
use crate::lamination::Lamination;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcMode {
    /// Circular arcs orthogonal to the unit circle.
    HyperbolicGeodesic,
    StraightChord,
}

/// Shows the square of half-width `1/scale` around `(cx, cy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zoom {
    pub cx: f64,
    pub cy: f64,
    pub scale: f64,
}

impl Default for Zoom {
    fn default() -> Self {
        Zoom {
            cx: 0.0,
            cy: 0.0,
            scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    pub image_size_px: u32,
    pub stroke_width: f64,
    /// Stroke colour per layer label; unlisted labels cycle through a palette.
    pub color_map: BTreeMap<String, String>,
    pub arc_mode: ArcMode,
    /// Margin around the unit circle, in pixels.
    pub margin: f64,
    /// Decimal places in coordinates.
    pub precision: usize,
    pub zoom: Zoom,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            image_size_px: 800,
            stroke_width: 0.6,
            color_map: BTreeMap::new(),
            arc_mode: ArcMode::HyperbolicGeodesic,
            margin: 10.0,
            precision: 6,
            zoom: Zoom::default(),
        }
    }
}

const PALETTE: [&str; 6] = [
    "#1f3a93", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#16a085",
];

struct Frame {
    center: f64,
    unit: f64,
    zoom: Zoom,
    precision: usize,
}

impl Frame {
    fn new(style: &RenderStyle) -> Frame {
        let size = style.image_size_px as f64;
        Frame {
            center: size / 2.0,
            unit: (size / 2.0 - style.margin) * style.zoom.scale,
            zoom: style.zoom,
            precision: style.precision,
        }
    }

    fn to_screen(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.center + self.unit * (x - self.zoom.cx),
            self.center - self.unit * (y - self.zoom.cy),
        )
    }

    fn num(&self, v: f64) -> String {
        let s = format!("{:.*}", self.precision, v);
        if s.trim_start_matches('-')
            .chars()
            .all(|c| c == '0' || c == '.')
        {
            format!("{:.*}", self.precision, 0.0)
        } else {
            s
        }
    }

    fn point(&self, (x, y): (f64, f64)) -> String {
        format!("{} {}", self.num(x), self.num(y))
    }
}

fn on_circle(t: f64) -> (f64, f64) {
    let theta = 2.0 * PI * t;
    (theta.cos(), theta.sin())
}

fn circle_path(frame: &Frame) -> String {
    let r = frame.unit;
    let east = frame.to_screen(1.0, 0.0);
    let west = frame.to_screen(-1.0, 0.0);
    format!(
        "M {} A {} {} 0 1 0 {} A {} {} 0 1 0 {} Z",
        frame.point(east),
        frame.num(r),
        frame.num(r),
        frame.point(west),
        frame.num(r),
        frame.num(r),
        frame.point(east)
    )
}

fn leaf_path(frame: &Frame, c: &Chord, mode: ArcMode) -> String {
    let a = c.a().to_f64();
    let b = c.b().to_f64();
    let p1 = frame.to_screen(on_circle(a).0, on_circle(a).1);
    let p2 = frame.to_screen(on_circle(b).0, on_circle(b).1);
    if mode == ArcMode::StraightChord || c.is_diameter() {
        return format!("M {} L {}", frame.point(p1), frame.point(p2));
    }
    let span = b - a;
    let delta = span.min(1.0 - span);
    let radius = (PI * delta).tan();
    let mut mid = PI * (a + b);
    if span > 0.5 {
        mid += PI;
    }
    let dist = 1.0 / (PI * delta).cos();
    let center = frame.to_screen(dist * mid.cos(), dist * mid.sin());
    let cross = (p1.0 - center.0) * (p2.1 - center.1) - (p1.1 - center.1) * (p2.0 - center.0);
    let sweep = if cross > 0.0 { 1 } else { 0 };
    let r = frame.num(radius * frame.unit);
    format!(
        "M {} A {r} {r} 0 0 {sweep} {}",
        frame.point(p1),
        frame.point(p2)
    )
}

/// The unit circle and one path per leaf, grouped by labelled layer.
pub fn render_svg(layers: &[(&str, &[Chord])], style: &RenderStyle) -> String {
    let frame = Frame::new(style);
    let size = style.image_size_px;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(
        out,
        "<path d=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\"/>",
        circle_path(&frame),
        frame.num(style.stroke_width)
    );
    for (i, (label, leaves)) in layers.iter().enumerate() {
        let color = style
            .color_map
            .get(*label)
            .cloned()
            .unwrap_or_else(|| PALETTE[i % PALETTE.len()].to_string());
        let _ = writeln!(
            out,
            "<g id=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\">",
            escape(label),
            escape(&color),
            frame.num(style.stroke_width)
        );
        for c in leaves.iter().filter(|c| !c.is_degenerate()) {
            let _ = writeln!(
                out,
                "<path d=\"{}\"/>",
                leaf_path(&frame, c, style.arc_mode)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_lamination(l: &Lamination, style: &RenderStyle) -> String {
    let leaves = l.to_vec();
    let label = if l.label().is_empty() {
        "leaves"
    } else {
        l.label()
    };
    render_svg(&[(label, &leaves)], style)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('"', "&quot;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Chord {
        s.parse().unwrap()
    }

    #[test]
    fn empty_and_diameter() {
        let style = RenderStyle::default();
        let svg = render_svg(&[], &style);
        assert_eq!(svg.matches("<path").count(), 1);
        let leaves = [c("1/4 3/4")];
        let svg = render_svg(&[("d", &leaves)], &style);
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("<path d=\"M 400.000000 10.000000 L 400.000000 790.000000\"/>"));
    }

    #[test]
    fn arc_is_orthogonal() {
        let style = RenderStyle {
            image_size_px: 2,
            margin: 0.0,
            precision: 12,
            ..RenderStyle::default()
        };
        let leaves = [c("1/3 2/3")];
        let svg = render_svg(&[("b", &leaves)], &style);
        // chord of length 1/3: radius tan(pi/3)
        assert!(svg.contains(&format!(" A {:.12} ", 3f64.sqrt())), "{svg}");
    }
}
