//! Static SVG figures of currents and molecules.

use std::path::Path;

use onecurrent::currents::{Molecule, PolyhedralCurrent};
use onecurrent::geometry::Point;
use svg::node::element::{Circle, Line, Rectangle};
use svg::Document;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 24.0;
const POSITIVE: &str = "#1f5fbf";
const NEGATIVE: &str = "#c8362b";

struct Stroke {
    a: [f64; 2],
    b: [f64; 2],
    color: String,
    weight: f64,
}

struct Dot {
    p: [f64; 2],
    weight: f64,
}

#[derive(Default)]
pub struct Scene {
    strokes: Vec<Stroke>,
    dots: Vec<Dot>,
}

fn plane(x: &[f64]) -> [f64; 2] {
    [x.first().copied().unwrap_or(0.0), x.get(1).copied().unwrap_or(0.0)]
}

/// Low heights are grey, the apex of the tallest tent is orange.
fn height_color(h: f64, max: f64) -> String {
    let s = if max > 0.0 { (h.abs() / max).clamp(0.0, 1.0) } else { 0.0 };
    let mix = |lo: f64, hi: f64| (lo + s * (hi - lo)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(90.0, 240.0), mix(90.0, 140.0), mix(90.0, 20.0))
}

impl Scene {
    pub fn new() -> Self {
        Scene::default()
    }

    /// Segments coloured by the sign of their weight. For a current in a
    /// lifted space the last coordinate is dropped and shown as colour.
    pub fn current(&mut self, t: &PolyhedralCurrent, lifted: bool) {
        let base = |x: &[f64]| if lifted { plane(&x[..x.len() - 1]) } else { plane(x) };
        let max_h = if lifted {
            t.pieces().iter().flat_map(|p| [p.a.last(), p.b.last()]).flatten().fold(0.0f64, |m, h| m.max(h.abs()))
        } else {
            0.0
        };
        for p in t.pieces() {
            let color = if lifted && max_h > 0.0 {
                let h = 0.5 * (p.a.last().unwrap_or(&0.0) + p.b.last().unwrap_or(&0.0));
                height_color(h, max_h)
            } else if p.w >= 0.0 {
                POSITIVE.to_string()
            } else {
                NEGATIVE.to_string()
            };
            self.strokes.push(Stroke { a: base(&p.a), b: base(&p.b), color, weight: p.w.abs() });
        }
    }

    pub fn molecule(&mut self, m: &Molecule) -> Result<(), String> {
        for a in m.atoms() {
            match &a.point {
                Point::Coords(x) => self.dots.push(Dot { p: plane(x), weight: a.weight }),
                Point::Index(_) => return Err("cannot draw a molecule on a finite metric space".into()),
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), String> {
        let pts = self.strokes.iter().flat_map(|s| [s.a, s.b]).chain(self.dots.iter().map(|d| d.p));
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if !lo[0].is_finite() {
            lo = [-1.0, -1.0];
            hi = [1.0, 1.0];
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let (w, h) = ((hi[0] - lo[0]) * scale + 2.0 * MARGIN, (hi[1] - lo[1]) * scale + 2.0 * MARGIN);
        let map = |p: [f64; 2]| (MARGIN + (p[0] - lo[0]) * scale, MARGIN + (hi[1] - p[1]) * scale);

        let max_w = self.strokes.iter().map(|s| s.weight).fold(0.0f64, f64::max);
        let max_d = self.dots.iter().map(|d| d.weight.abs()).fold(0.0f64, f64::max);
        let mut doc = Document::new()
            .set("viewBox", (0.0, 0.0, w, h))
            .set("width", w)
            .set("height", h)
            .add(Rectangle::new().set("width", "100%").set("height", "100%").set("fill", "white"));
        for s in &self.strokes {
            let (x1, y1) = map(s.a);
            let (x2, y2) = map(s.b);
            let width = 1.0 + 2.0 * if max_w > 0.0 { s.weight / max_w } else { 0.0 };
            doc = doc.add(
                Line::new()
                    .set("x1", x1)
                    .set("y1", y1)
                    .set("x2", x2)
                    .set("y2", y2)
                    .set("stroke", s.color.as_str())
                    .set("stroke-width", width)
                    .set("stroke-linecap", "round"),
            );
        }
        for d in &self.dots {
            let (cx, cy) = map(d.p);
            let r = 2.0 + 5.0 * if max_d > 0.0 { (d.weight.abs() / max_d).sqrt() } else { 0.0 };
            let fill = if d.weight >= 0.0 { POSITIVE } else { NEGATIVE };
            doc = doc.add(Circle::new().set("cx", cx).set("cy", cy).set("r", r).set("fill", fill));
        }
        svg::save(path, &doc).map_err(|e| format!("{}: {e}", path.display()))
    }
}
