//! Fruchterman–Reingold spring embedding and SVG/TikZ export.
//!
//! Layouts live on a unit canvas. `spring_embed` starts from seeded random
//! positions and normalizes the result into the unit square with a 5%
//! margin; `continue_embed` resumes from given positions and leaves them in
//! the caller's frame.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;

pub type Point = [f64; 2];

pub const MARGIN: f64 = 0.05;
/// Offset used to separate coincident points.
pub const EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("expected {expected} coordinates, got {found}")]
    CoordinateCountMismatch { expected: usize, found: usize },
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("iteration count must be at least 1")]
    NoIterations,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutParams {
    pub iterations: usize,
    /// Ideal edge length; defaults to `0.9 * sqrt(1 / n)`.
    pub k: Option<f64>,
    /// Temperatures as fractions of the canvas side, cooled linearly.
    pub t_start: f64,
    pub t_end: f64,
    pub seed: u64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams { iterations: 500, k: None, t_start: 0.1, t_end: 0.001, seed: 0 }
    }
}

impl LayoutParams {
    pub fn with_seed(seed: u64) -> Self {
        LayoutParams { seed, ..Self::default() }
    }

    fn ideal_length(&self, n: usize) -> f64 {
        self.k.unwrap_or_else(|| 0.9 * (1.0 / n.max(1) as f64).sqrt())
    }

    fn temperature(&self, i: usize) -> f64 {
        if self.iterations <= 1 {
            return self.t_start;
        }
        let f = i as f64 / (self.iterations - 1) as f64;
        self.t_start + (self.t_end - self.t_start) * f
    }
}

/// Seeded random positions in the unit square.
pub fn initial_positions(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect()
}

/// Fixed direction derived from a vertex pair (or a single vertex, when
/// `v == u`).
fn direction(u: usize, v: usize) -> Point {
    let h = (u as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (v as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    let angle = (h >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU;
    [angle.cos(), angle.sin()]
}

fn check(g: &Graph, pos: &[Point]) -> Result<(), LayoutError> {
    if pos.len() != g.order() {
        return Err(LayoutError::CoordinateCountMismatch { expected: g.order(), found: pos.len() });
    }
    if pos.iter().flatten().any(|x| !x.is_finite()) {
        return Err(LayoutError::NonFinite);
    }
    Ok(())
}

fn iterate(g: &Graph, pos: &mut [Point], params: &LayoutParams) {
    let n = pos.len();
    let k = params.ideal_length(n);
    let k2 = k * k;
    let mut disp = vec![[0.0f64; 2]; n];
    for it in 0..params.iterations {
        let t = params.temperature(it);
        if t <= 0.0 {
            continue;
        }
        disp.iter_mut().for_each(|d| *d = [0.0, 0.0]);
        if it == 0 {
            // breaks exact symmetries such as collinear starts
            for (v, d) in disp.iter_mut().enumerate() {
                let [x, y] = direction(v, v);
                *d = [x * EPSILON, y * EPSILON];
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                let (mut dx, mut dy) = (pos[u][0] - pos[v][0], pos[u][1] - pos[v][1]);
                let mut d = (dx * dx + dy * dy).sqrt();
                if d < EPSILON {
                    let [x, y] = direction(u, v);
                    (dx, dy, d) = (x * EPSILON, y * EPSILON, EPSILON);
                }
                let f = k2 / d / d;
                disp[u][0] += dx * f;
                disp[u][1] += dy * f;
                disp[v][0] -= dx * f;
                disp[v][1] -= dy * f;
            }
        }
        for (u, v) in g.edges() {
            let (dx, dy) = (pos[u][0] - pos[v][0], pos[u][1] - pos[v][1]);
            let d = (dx * dx + dy * dy).sqrt().max(EPSILON);
            let f = d / k;
            disp[u][0] -= dx * f;
            disp[u][1] -= dy * f;
            disp[v][0] += dx * f;
            disp[v][1] += dy * f;
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if len > 0.0 {
                let step = len.min(t) / len;
                p[0] += d[0] * step;
                p[1] += d[1] * step;
            }
        }
    }
}

/// Scales uniformly into `[MARGIN, 1 - MARGIN]²`, centered.
pub fn normalize(pos: &mut [Point]) {
    if pos.is_empty() {
        return;
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pos.iter() {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let scale = if extent > 0.0 { (1.0 - 2.0 * MARGIN) / extent } else { 0.0 };
    for p in pos.iter_mut() {
        for a in 0..2 {
            let mid = (lo[a] + hi[a]) / 2.0;
            p[a] = (0.5 + (p[a] - mid) * scale).clamp(MARGIN, 1.0 - MARGIN);
        }
    }
}

/// Runs the iteration from `start` and normalizes the result.
pub fn embed_from(g: &Graph, start: &[Point], params: &LayoutParams) -> Result<Vec<Point>, LayoutError> {
    let mut pos = continue_embed(g, start, params)?;
    normalize(&mut pos);
    Ok(pos)
}

pub fn spring_embed(g: &Graph, params: &LayoutParams) -> Result<Vec<Point>, LayoutError> {
    embed_from(g, &initial_positions(g.order(), params.seed), params)
}

pub fn continue_embed(g: &Graph, start: &[Point], params: &LayoutParams) -> Result<Vec<Point>, LayoutError> {
    check(g, start)?;
    if params.iterations == 0 {
        return Err(LayoutError::NoIterations);
    }
    let mut pos = start.to_vec();
    iterate(g, &mut pos, params);
    Ok(pos)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExportOptions {
    pub labels: bool,
    /// Written into a header comment.
    pub graph_id: Option<u64>,
    pub seed: Option<u64>,
}

pub const SVG_SIZE: f64 = 600.0;
pub const SVG_RADIUS: f64 = 6.0;
pub const TIKZ_SIZE: f64 = 10.0;

fn header(opts: &ExportOptions) -> Option<String> {
    let mut parts = Vec::new();
    if let Some(id) = opts.graph_id {
        parts.push(format!("graph {id}"));
    }
    if let Some(seed) = opts.seed {
        parts.push(format!("seed {seed}"));
    }
    (!parts.is_empty()).then(|| parts.join(", "))
}

/// SVG with y pointing up, so drawings match the coordinate frame.
pub fn export_svg(g: &Graph, pos: &[Point], opts: &ExportOptions) -> Result<String, LayoutError> {
    check(g, pos)?;
    let at = |p: &Point| (p[0] * SVG_SIZE, (1.0 - p[1]) * SVG_SIZE);
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if let Some(h) = header(opts) {
        let _ = writeln!(out, "<!-- {h} -->");
    }
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\">"
    );
    out.push_str("<g stroke=\"black\" stroke-width=\"1.5\">\n");
    for (u, v) in g.edges() {
        let ((x1, y1), (x2, y2)) = (at(&pos[u]), at(&pos[v]));
        let _ = writeln!(out, "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\"/>");
    }
    out.push_str("</g>\n<g fill=\"white\" stroke=\"black\" stroke-width=\"1.5\">\n");
    for p in pos {
        let (x, y) = at(p);
        let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{SVG_RADIUS}\"/>");
    }
    out.push_str("</g>\n");
    if opts.labels {
        out.push_str("<g font-family=\"sans-serif\" font-size=\"8\" text-anchor=\"middle\" dominant-baseline=\"central\">\n");
        for (v, p) in pos.iter().enumerate() {
            let (x, y) = at(p);
            let _ = writeln!(out, "<text x=\"{x:.2}\" y=\"{y:.2}\">{v}</text>");
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn export_tikz(g: &Graph, pos: &[Point], opts: &ExportOptions) -> Result<String, LayoutError> {
    check(g, pos)?;
    let mut out = String::new();
    if let Some(h) = header(opts) {
        let _ = writeln!(out, "% {h}");
    }
    out.push_str("\\begin{tikzpicture}[vertex/.style={circle,draw,fill=white,inner sep=1pt,minimum size=6pt}]\n");
    for (v, p) in pos.iter().enumerate() {
        let (x, y) = (p[0] * TIKZ_SIZE, p[1] * TIKZ_SIZE);
        let label = if opts.labels { v.to_string() } else { String::new() };
        let _ = writeln!(out, "\\node[vertex] (v{v}) at ({x:.3},{y:.3}) {{{label}}};");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "\\draw (v{u}) -- (v{v});");
    }
    out.push_str("\\end{tikzpicture}\n");
    Ok(out)
}
