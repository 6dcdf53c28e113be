//! Deterministic SVG output for pentagons and partial developing maps.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::construct::ConstructionResult;
use crate::error::{Error, Result};
use crate::moebius::{commutator, Geodesic, Isometry, PlanePoint};

pub const MAX_DEPTH: usize = 8;
/// Maximum distance in pixels between a flattened polyline and the true curve.
pub const FLATTEN_TOLERANCE: f64 = 0.25;
const MAX_SUBDIVISION: usize = 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    HalfPlane,
    Disc,
}

/// Model-coordinate box shown on the canvas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn default_for(model: Model) -> Viewport {
        match model {
            Model::HalfPlane => Viewport {
                xmin: -4.0,
                xmax: 4.0,
                ymin: 0.0,
                ymax: 4.0,
            },
            Model::Disc => Viewport {
                xmin: -1.05,
                xmax: 1.05,
                ymin: -1.05,
                ymax: 1.05,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Style {
    pub background: String,
    pub boundary_stroke: String,
    pub edge_stroke: String,
    pub edge_width: f64,
    pub boundary_edge_width: f64,
    pub tile_stroke: String,
    pub tile_fill: String,
    pub axis_g_stroke: String,
    pub axis_h_stroke: String,
    pub axis_commutator_stroke: String,
    pub axis_width: f64,
    pub axis_dash: String,
    pub vertex_fill: String,
    pub vertex_radius: f64,
    pub label_size: f64,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            background: "#ffffff".into(),
            boundary_stroke: "#000000".into(),
            edge_stroke: "#1f3a93".into(),
            edge_width: 1.5,
            boundary_edge_width: 4.0,
            tile_stroke: "#7a869a".into(),
            tile_fill: "none".into(),
            axis_g_stroke: "#c0392b".into(),
            axis_h_stroke: "#27ae60".into(),
            axis_commutator_stroke: "#8e44ad".into(),
            axis_width: 1.0,
            axis_dash: "8 6".into(),
            vertex_fill: "#000000".into(),
            vertex_radius: 3.0,
            label_size: 14.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub model: Model,
    pub viewport: Viewport,
    pub style: Style,
    pub depth: usize,
    pub width: u32,
    pub height: u32,
}

/// Fixed six-decimal formatting without negative zero.
pub fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('"', "&quot;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Scene {
    pub fn new(model: Model, depth: usize) -> Result<Scene> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge(depth));
        }
        Ok(Scene {
            model,
            viewport: Viewport::default_for(model),
            style: Style::default(),
            depth,
            width: 1000,
            height: 1000,
        })
    }

    /// Model coordinates: the point itself in the half-plane, its Cayley image in the disc.
    pub fn model_coords(&self, p: &PlanePoint) -> Complex64 {
        let z = p.to_complex();
        match self.model {
            Model::HalfPlane => z,
            Model::Disc => (z - Complex64::i()) / (z + Complex64::i()),
        }
    }

    /// Canvas position in pixels, y pointing down.
    pub fn project(&self, p: &PlanePoint) -> (f64, f64) {
        self.to_canvas(self.model_coords(p))
    }

    fn to_canvas(&self, w: Complex64) -> (f64, f64) {
        let v = &self.viewport;
        let sx = (w.re - v.xmin) / (v.xmax - v.xmin) * self.width as f64;
        let sy = (v.ymax - w.im) / (v.ymax - v.ymin) * self.height as f64;
        (sx, sy)
    }

    pub fn in_viewport(&self, p: &PlanePoint) -> bool {
        let w = self.model_coords(p);
        let v = &self.viewport;
        w.re >= v.xmin && w.re <= v.xmax && w.im >= v.ymin && w.im <= v.ymax
    }

    fn near_canvas(&self, (x, y): (f64, f64)) -> bool {
        let (w, h) = (self.width as f64, self.height as f64);
        x.is_finite() && y.is_finite() && x >= -w && x <= 2.0 * w && y >= -h && y <= 2.0 * h
    }

    /// Polylines approximating a curve given by `point(t)` for t in [t0, t1].
    fn flatten<F>(&self, point: F, t0: f64, t1: f64, pieces: usize) -> Vec<Vec<(f64, f64)>>
    where
        F: Fn(f64) -> Option<PlanePoint>,
    {
        let proj = |t: f64| point(t).map(|p| self.project(&p));
        let mut samples: Vec<Option<(f64, f64)>> = Vec::new();
        for k in 0..pieces {
            let a = t0 + (t1 - t0) * k as f64 / pieces as f64;
            let b = t0 + (t1 - t0) * (k + 1) as f64 / pieces as f64;
            let (pa, pb) = (proj(a), proj(b));
            if k == 0 {
                samples.push(pa);
            }
            self.subdivide(&proj, a, pa, b, pb, 0, &mut samples);
        }
        let mut lines = Vec::new();
        let mut cur = Vec::new();
        for s in samples {
            match s {
                Some(q) if self.near_canvas(q) => cur.push(q),
                _ => {
                    if cur.len() > 1 {
                        lines.push(std::mem::take(&mut cur));
                    } else {
                        cur.clear();
                    }
                }
            }
        }
        if cur.len() > 1 {
            lines.push(cur);
        }
        lines
    }

    #[allow(clippy::too_many_arguments)]
    fn subdivide<P>(
        &self,
        proj: &P,
        a: f64,
        pa: Option<(f64, f64)>,
        b: f64,
        pb: Option<(f64, f64)>,
        level: usize,
        out: &mut Vec<Option<(f64, f64)>>,
    ) where
        P: Fn(f64) -> Option<(f64, f64)>,
    {
        let m = 0.5 * (a + b);
        let pm = proj(m);
        let split = match (pa, pm, pb) {
            (Some(x), Some(y), Some(z)) => {
                let visible = self.near_canvas(x) || self.near_canvas(z) || self.near_canvas(y);
                let dev = ((x.0 + z.0) / 2.0 - y.0).hypot((x.1 + z.1) / 2.0 - y.1);
                visible && dev > FLATTEN_TOLERANCE
            }
            _ => true,
        };
        if split && level < MAX_SUBDIVISION {
            self.subdivide(proj, a, pa, m, pm, level + 1, out);
            self.subdivide(proj, m, pm, b, pb, level + 1, out);
        } else {
            out.push(pb);
        }
    }

    fn segment_path(&self, p: &PlanePoint, q: &PlanePoint) -> String {
        let d = p.distance(q);
        let beta = p.direction_to(q);
        let point = |t: f64| {
            if t == 0.0 {
                Some(*p)
            } else if t == 1.0 {
                Some(*q)
            } else {
                p.exp(beta, t * d).ok()
            }
        };
        path_data(&self.flatten(point, 0.0, 1.0, 4))
    }

    fn geodesic_path(&self, g: &Geodesic) -> String {
        let inv = g.normalizer().inverse();
        let point = |s: f64| {
            PlanePoint::new(0.0, s.exp())
                .ok()
                .and_then(|z| inv.apply(&z).ok())
        };
        path_data(&self.flatten(point, -25.0, 25.0, 64))
    }
}

fn path_data(lines: &[Vec<(f64, f64)>]) -> String {
    let mut s = String::new();
    for line in lines {
        for (k, (x, y)) in line.iter().enumerate() {
            if !s.is_empty() {
                s.push(' ');
            }
            s.push(if k == 0 { 'M' } else { 'L' });
            let _ = write!(s, "{} {}", fmt6(*x), fmt6(*y));
        }
    }
    s
}

/// Generator letters; uppercase denotes the inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    G,
    GInv,
    H,
    HInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::G, Letter::GInv, Letter::H, Letter::HInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::G => Letter::GInv,
            Letter::GInv => Letter::G,
            Letter::H => Letter::HInv,
            Letter::HInv => Letter::H,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::G => 'g',
            Letter::GInv => 'G',
            Letter::H => 'h',
            Letter::HInv => 'H',
        }
    }
}

/// Reduced words of length at most `max_len`, by length then lexicographically in g, G, h, H.
pub fn reduced_words(max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in Letter::ALL {
                if w.last().is_some_and(|&last| last == l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn word_string(w: &[Letter]) -> String {
    if w.is_empty() {
        "e".into()
    } else {
        w.iter().map(|l| l.symbol()).collect()
    }
}

/// The product of the letters, left to right.
pub fn word_isometry(w: &[Letter], g: &Isometry, h: &Isometry) -> Isometry {
    w.iter().fold(Isometry::IDENTITY, |acc, l| {
        acc * match l {
            Letter::G => *g,
            Letter::GInv => g.inverse(),
            Letter::H => *h,
            Letter::HInv => h.inverse(),
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub word: String,
    pub vertices: [PlanePoint; 5],
}

fn tile_for(result: &ConstructionResult, w: &[Letter]) -> Option<Tile> {
    let m = word_isometry(w, &result.g_eff, &result.h_eff);
    result.pentagon.image(&m).ok().map(|p| Tile {
        word: word_string(w),
        vertices: *p.vertices(),
    })
}

/// Images of the pentagon under all reduced words up to `depth`, in enumeration order.
///
/// Words whose image overflows are skipped.
pub fn developing_tiles(result: &ConstructionResult, depth: usize) -> Result<Vec<Tile>> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthTooLarge(depth));
    }
    let words = reduced_words(depth);
    #[cfg(feature = "parallel")]
    let tiles: Vec<Option<Tile>> = {
        use rayon::prelude::*;
        words.par_iter().map(|w| tile_for(result, w)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let tiles: Vec<Option<Tile>> = words.iter().map(|w| tile_for(result, w)).collect();
    Ok(tiles.into_iter().flatten().collect())
}

/// Same as [`developing_tiles`] without threads.
pub fn developing_tiles_sequential(result: &ConstructionResult, depth: usize) -> Result<Vec<Tile>> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthTooLarge(depth));
    }
    Ok(reduced_words(depth)
        .iter()
        .filter_map(|w| tile_for(result, w))
        .collect())
}

/// A rendered document and the number of tiles drawn.
#[derive(Clone, Debug, PartialEq)]
pub struct Rendered {
    pub svg: String,
    pub tiles: usize,
}

fn header(scene: &Scene, out: &mut String) {
    let (w, h) = (scene.width, scene.height);
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{w}" height="{h}" fill="{}"/>"#,
        escape(&scene.style.background)
    );
    let stroke = escape(&scene.style.boundary_stroke);
    match scene.model {
        Model::HalfPlane => {
            let (x0, y0) = scene.to_canvas(Complex64::new(scene.viewport.xmin, 0.0));
            let (x1, y1) = scene.to_canvas(Complex64::new(scene.viewport.xmax, 0.0));
            let _ = writeln!(
                out,
                r#"<g id="boundary"><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="1"/></g>"#,
                fmt6(x0),
                fmt6(y0),
                fmt6(x1),
                fmt6(y1)
            );
        }
        Model::Disc => {
            let (cx, cy) = scene.to_canvas(Complex64::new(0.0, 0.0));
            let (ex, _) = scene.to_canvas(Complex64::new(1.0, 0.0));
            let _ = writeln!(
                out,
                r#"<g id="boundary"><circle cx="{}" cy="{}" r="{}" fill="none" stroke="{stroke}" stroke-width="1"/></g>"#,
                fmt6(cx),
                fmt6(cy),
                fmt6(ex - cx)
            );
        }
    }
}

fn axes(result: &ConstructionResult, scene: &Scene, out: &mut String) {
    let st = &scene.style;
    let _ = writeln!(
        out,
        r#"<g id="axes" fill="none" stroke-width="{}" stroke-dasharray="{}">"#,
        fmt6(st.axis_width),
        escape(&st.axis_dash)
    );
    let comm = commutator(&result.g_eff, &result.h_eff);
    let items = [
        ("axis-g", &result.g_eff, &st.axis_g_stroke),
        ("axis-h", &result.h_eff, &st.axis_h_stroke),
        ("axis-commutator", &comm, &st.axis_commutator_stroke),
    ];
    for (id, m, color) in items {
        if let Ok(ax) = m.axis() {
            let d = scene.geodesic_path(&ax);
            if !d.is_empty() {
                let _ = writeln!(
                    out,
                    r#"<path id="{id}" stroke="{}" d="{d}"/>"#,
                    escape(color)
                );
            }
        }
    }
    let _ = writeln!(out, "</g>");
}

fn tile_group(tile: &Tile, scene: &Scene, base: bool, out: &mut String) {
    let st = &scene.style;
    let stroke = if base {
        &st.edge_stroke
    } else {
        &st.tile_stroke
    };
    let _ = writeln!(
        out,
        r#"<g class="tile" data-word="{}" fill="{}" stroke="{}">"#,
        escape(&tile.word),
        escape(&st.tile_fill),
        escape(stroke)
    );
    for i in 0..5 {
        let d = scene.segment_path(&tile.vertices[i], &tile.vertices[(i + 1) % 5]);
        let width = if i == 0 {
            st.boundary_edge_width
        } else {
            st.edge_width
        };
        let _ = writeln!(
            out,
            r#"<path class="edge e{i}" stroke-width="{}" d="{d}"/>"#,
            fmt6(width)
        );
    }
    let _ = writeln!(out, "</g>");
}

fn labels(result: &ConstructionResult, scene: &Scene, out: &mut String) {
    let st = &scene.style;
    let _ = writeln!(
        out,
        r#"<g id="labels" font-family="sans-serif" font-size="{}">"#,
        fmt6(st.label_size)
    );
    for (i, v) in result.pentagon.vertices().iter().enumerate() {
        let (x, y) = scene.project(v);
        if !scene.near_canvas((x, y)) {
            continue;
        }
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/><text x="{}" y="{}">v{i}</text>"#,
            fmt6(x),
            fmt6(y),
            fmt6(st.vertex_radius),
            escape(&st.vertex_fill),
            fmt6(x + 5.0),
            fmt6(y - 5.0)
        );
    }
    let _ = writeln!(out, "</g>");
}

fn document(result: &ConstructionResult, scene: &Scene, tiles: &[Tile], with_axes: bool) -> String {
    let mut out = String::new();
    header(scene, &mut out);
    if with_axes {
        axes(result, scene, &mut out);
    }
    let _ = writeln!(out, r#"<g id="tiles">"#);
    for (k, t) in tiles.iter().enumerate() {
        tile_group(t, scene, k == 0 && t.word == "e", &mut out);
    }
    let _ = writeln!(out, "</g>");
    labels(result, scene, &mut out);
    out.push_str("</svg>\n");
    out
}

/// The pentagon with labelled vertices and the dashed axes of g, h and [g,h].
pub fn render_pentagon(result: &ConstructionResult, scene: &Scene) -> Result<String> {
    let base = Tile {
        word: "e".into(),
        vertices: *result.pentagon.vertices(),
    };
    Ok(document(result, scene, &[base], true))
}

/// Pentagon copies for all reduced words up to the scene depth; copies entirely off the viewport are dropped.
pub fn render_developing(result: &ConstructionResult, scene: &Scene) -> Result<Rendered> {
    let tiles: Vec<Tile> = developing_tiles(result, scene.depth)?
        .into_iter()
        .filter(|t| t.vertices.iter().any(|v| scene.in_viewport(v)))
        .collect();
    Ok(Rendered {
        svg: document(result, scene, &tiles, false),
        tiles: tiles.len(),
    })
}
