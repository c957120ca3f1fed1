//! SVG pictures of the cell decomposition.
//!
//! Geometry stays exact until a vertex is written out: each coordinate is
//! enclosed, its midpoint converted to `f64`, and printed with three
//! decimals. Nothing here feeds back into verification.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Letter, Point2, Similarity, System, Triangle, Word};
use crate::interval::RationalInterval;
use crate::rational::{int, to_f64};

/// Largest depth the renderer accepts (`4^10` polygons).
pub const MAX_RENDER_DEPTH: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Overlay {
    /// Outline of `D`.
    Base,
    /// Outline of `Δ`.
    Delta,
    /// `Δ` and `Δ_w` for I-words up to the given length.
    DeltaFamily(usize),
    /// The unit segment `[0, 1] × {0}`.
    Segment,
    Labels,
}

impl FromStr for Overlay {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" | "base" => Ok(Overlay::Base),
            "delta" => Ok(Overlay::Delta),
            "segment" => Ok(Overlay::Segment),
            "labels" => Ok(Overlay::Labels),
            _ => s
                .strip_prefix("delta-family:")
                .and_then(|m| m.parse().ok())
                .map(Overlay::DeltaFamily)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "unknown overlay {s:?} (expected D, delta, delta-family:M, segment or labels)"
                    ))
                }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub depth: usize,
    pub overlays: Vec<Overlay>,
    /// Output width in pixels; the height follows from the viewport.
    pub width: f64,
    /// Blank border around `D`, in world units.
    pub margin: f64,
}

impl SceneSpec {
    pub fn new(depth: usize) -> Self {
        SceneSpec {
            depth,
            overlays: Vec::new(),
            width: 1200.0,
            margin: 0.04,
        }
    }

    pub fn with_overlays(mut self, overlays: &[Overlay]) -> Self {
        self.overlays = overlays.to_vec();
        self
    }
}

struct Canvas {
    c: RationalInterval,
    x0: f64,
    y1: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Canvas {
    fn project(&self, p: &Point2) -> (f64, f64) {
        let (x, y) = p.enclose(&self.c);
        (
            (to_f64(&x.midpoint()) - self.x0) * self.scale,
            (self.y1 - to_f64(&y.midpoint())) * self.scale,
        )
    }

    fn points(&self, t: &Triangle) -> String {
        t.v.iter()
            .map(|p| {
                let (x, y) = self.project(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Similarities of all words of length `depth`, in lexicographic order.
fn maps_at_depth(system: &System, depth: usize) -> Vec<(Word, Similarity)> {
    let mut level = vec![(Word::empty(), Similarity::identity())];
    for _ in 0..depth {
        level = level
            .into_par_iter()
            .flat_map_iter(|(w, m)| {
                Letter::ALL
                    .iter()
                    .map(move |&l| (w.push(l), m.compose(system.generator(l))))
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    level
}

/// Renders the depth-`n` cells as one filled polygon each, then the
/// requested overlays as outlines.
pub fn render_scene(system: &System, spec: &SceneSpec) -> Result<String> {
    if spec.depth > MAX_RENDER_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "render depth {} exceeds {MAX_RENDER_DEPTH}",
            spec.depth
        )));
    }
    if !(spec.width > 0.0 && spec.margin >= 0.0) {
        return Err(Error::InvalidArgument("width must be positive".into()));
    }
    let c = system
        .c()
        .coarse_interval()
        .cloned()
        .map_or_else(|| system.c().interval(), Ok)?;
    let d = system.d();
    let top = to_f64(system.h()).max(1e-9);
    let (x0, x1) = (-spec.margin, 1.0 + spec.margin);
    let (y0, y1) = (-spec.margin, top + spec.margin);
    let scale = spec.width / (x1 - x0);
    let canvas = Canvas {
        c,
        x0,
        y1,
        scale,
        width: spec.width,
        height: (y1 - y0) * scale,
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = canvas.width,
        h = canvas.height
    );
    let _ = writeln!(
        out,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );

    let cells = maps_at_depth(system, spec.depth);
    let polygons: Vec<String> = cells
        .par_iter()
        .map(|(w, m)| {
            format!(
                r#"<polygon class="cell" data-word="{}" points="{}"/>"#,
                if w.is_empty() {
                    String::new()
                } else {
                    w.to_string()
                },
                canvas.points(&m.apply_triangle(&d))
            )
        })
        .collect();
    let cell_style = if spec.depth == 0 {
        r##"fill="none" stroke="#1a365d" stroke-width="1""##
    } else {
        r##"fill="#2b6cb0" stroke="#2b6cb0" stroke-width="0.2""##
    };
    let _ = writeln!(out, r#"<g id="cells" {cell_style}>"#);
    for p in polygons {
        out.push_str(&p);
        out.push('\n');
    }
    out.push_str("</g>\n");

    if !spec.overlays.is_empty() {
        out.push_str(
            r##"<g id="overlays" fill="none" stroke="#c53030" stroke-width="1.2" font-family="serif" font-size="18">"##,
        );
        out.push('\n');
        for overlay in &spec.overlays {
            write_overlay(&mut out, system, &canvas, *overlay)?;
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn write_overlay(
    out: &mut String,
    system: &System,
    canvas: &Canvas,
    overlay: Overlay,
) -> Result<()> {
    let outline = |out: &mut String, class: &str, t: &Triangle| {
        let _ = writeln!(
            out,
            r#"<polygon class="{class}" points="{}"/>"#,
            canvas.points(t)
        );
    };
    match overlay {
        Overlay::Base => outline(out, "overlay-base", &system.d()),
        Overlay::Delta => outline(out, "overlay-delta", &system.delta()),
        Overlay::DeltaFamily(m) => {
            outline(out, "overlay-delta-family", &system.delta());
            for w in Word::i_words_up_to(m) {
                outline(out, "overlay-delta-family", &system.delta_triangle(&w)?);
            }
        }
        Overlay::Segment => {
            let (ax, ay) = canvas.project(&Point2::origin());
            let (bx, by) = canvas.project(&Point2::exact(int(1), int(0)));
            let _ = writeln!(
                out,
                r#"<line class="overlay-segment" x1="{ax:.3}" y1="{ay:.3}" x2="{bx:.3}" y2="{by:.3}"/>"#
            );
        }
        Overlay::Labels => {
            let mut label = |text: &str, p: &Point2, dy: f64| {
                let (x, y) = canvas.project(p);
                let _ = writeln!(
                    out,
                    r##"<text x="{x:.3}" y="{:.3}" fill="#742a2a" stroke="none" text-anchor="middle">{text}</text>"##,
                    y + dy
                );
            };
            let d = system.d();
            label("D", &d.v[2], -8.0);
            label("Δ", &system.delta().centroid(), 6.0);
            for (name, l) in [
                ("D₀", Letter::Zero),
                ("D₁", Letter::One),
                ("D₂", Letter::Two),
            ] {
                let cell = system.cell_hull(&Word::new(vec![l]));
                label(name, &cell.centroid(), 22.0);
            }
        }
    }
    Ok(())
}
